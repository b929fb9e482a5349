//! Command-line front end: single solves, sweeps, method comparisons, loss
//! studies and reproduction of published reference values.

pub mod app;
pub mod compare;
pub mod config;
pub mod error;
pub mod loss;
pub mod record;
pub mod reference;
pub mod runner;
pub mod svg;
pub mod sweep;

/// Four-decimal rendering without a negative zero.
pub fn fixed4(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}
