//! Scan rows and their CSV/JSON serialization.
//!
//! CSV uses a fixed column order, a header row, and 17-significant-digit
//! scientific notation so re-parsing reproduces bit-identical doubles.

use serde::Serialize;

/// One scan row: every point evaluation the modules define at this x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub x: f64,
    pub theta: f64,
    pub delta: f64,
    pub phi: f64,
    pub b: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "H_err")]
    pub h_err: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "T_err")]
    pub t_err: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "E_err")]
    pub e_err: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub residual: f64,
    pub residual_err: f64,
}

pub const CSV_HEADER: &str =
    "x,theta,delta,phi,b,S,P,R,Q,A,H,H_err,T,T_err,D,E,E_err,F,residual,residual_err";

/// 17 significant digits, locale-independent; round-trips any f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl ScanRow {
    pub fn csv_line(&self) -> String {
        let cols = [
            self.x,
            self.theta,
            self.delta,
            self.phi,
            self.b,
            self.s,
            self.p,
            self.r,
            self.q,
            self.a,
            self.h,
            self.h_err,
            self.t,
            self.t_err,
            self.d,
            self.e,
            self.e_err,
            self.f,
            self.residual,
            self.residual_err,
        ];
        let mut line = String::with_capacity(cols.len() * 25);
        for (i, c) in cols.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&fmt_f64(*c));
        }
        line
    }
}
