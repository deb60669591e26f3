//! Disk-count experiments for a single character: the hypothesis ranges of the large-sum
//! theorems, the bounds on φ, and the disk audits over a grid of L.

use super::config::Constants;
use crate::dirichlet::{partial_sum, Character};
use crate::error::Result;
use crate::multfn::{find_phi_and_m, CompletelyMultiplicativeFunction};
use crate::sieve::PrimeTable;
use crate::zeros::{disk_count_audit, DiskAudit};
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize)]
pub struct PhiBounds {
    pub y0: f64,
    pub phi: f64,
    /// |S(e^{y0})| >= e^{y0} y0^{-1/100} and y0 >= 3
    pub hypothesis_ok: bool,
    /// c·N
    pub main: f64,
    /// c e^{y0}/|S(e^{y0})|
    pub general: f64,
    /// (1/y0)(c e^{y0}/|S(e^{y0})|)^{2k²}
    pub order: f64,
    pub within_main: bool,
    pub within_general: bool,
    pub within_order: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LEntry {
    pub l: f64,
    pub threshold_main: f64,
    pub threshold_order: f64,
    pub audit: Option<DiskAudit>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MainExperiment {
    pub q: u64,
    pub conrey: u64,
    pub order: u64,
    pub x: f64,
    pub x_low: f64,
    pub x_high: f64,
    pub x_range_empty: bool,
    pub x_in_range: bool,
    pub sum: Complex64,
    pub n: Option<f64>,
    pub n_max: f64,
    pub n_in_range: bool,
    pub hypothesis_satisfiable: bool,
    pub note: String,
    pub phi_bounds: PhiBounds,
    pub constants: Constants,
    pub entries: Vec<LEntry>,
}

/// exp(√log q) and √q, the ends of the admissible x range.
pub fn x_range(q: u64) -> (f64, f64) {
    let qf = q as f64;
    (qf.ln().sqrt().exp(), qf.sqrt())
}

pub fn main_theorem_experiment(chi: &Character, x: f64, l_grid: &[f64], constants: &Constants) -> Result<MainExperiment> {
    let q = chi.modulus();
    let (x_low, x_high) = x_range(q);
    let x_range_empty = x_low > x_high;
    let x_in_range = x >= x_low && x <= x_high;
    let s = partial_sum(chi, x);
    let log_x = x.ln();
    let n_max = log_x.powf(0.01);
    let n_val = s.n.unwrap_or(f64::INFINITY);
    let n_in_range = n_val >= 1.0 && n_val <= n_max;
    let hypothesis_satisfiable = !x_range_empty && x_in_range && n_in_range;
    let note = if x_range_empty {
        format!("x range [{x_low:.4}, {x_high:.4}] is empty for q = {q}")
    } else if !x_in_range {
        format!("x = {x} lies outside [{x_low:.4}, {x_high:.4}]")
    } else if !n_in_range {
        format!("N = {n_val:.4} lies outside [1, {n_max:.6}]")
    } else {
        "hypotheses hold".to_string()
    };

    let table = Arc::new(PrimeTable::new((x.ceil() as u64).max(2))?);
    let f = CompletelyMultiplicativeFunction::character(table, chi);
    let phi = find_phi_and_m(&f, x)?.phi;
    let c = constants.c_lemma;
    let ratio = x / s.value.norm();
    let k2 = (chi.order() * chi.order()) as f64;
    let main = constants.c_theorem * n_val;
    let general = c * ratio;
    let order = (c * ratio).powf(2.0 * k2) / log_x;
    let phi_bounds = PhiBounds {
        y0: log_x,
        phi,
        hypothesis_ok: log_x >= 3.0 && s.value.norm() >= x * log_x.powf(-0.01),
        main,
        general,
        order,
        within_main: phi.abs() <= main,
        within_general: phi.abs() <= general,
        within_order: phi.abs() <= order,
    };

    let entries = l_grid
        .iter()
        .map(|&l| {
            let (audit, error) = match disk_count_audit(chi, x, l, constants.c_theorem) {
                Ok(a) => (Some(a), None),
                Err(e) => (None, Some(e.to_string())),
            };
            LEntry {
                l,
                threshold_main: l / 360.0,
                threshold_order: l / 400.0,
                audit,
                error,
            }
        })
        .collect();

    Ok(MainExperiment {
        q,
        conrey: chi.conrey(),
        order: chi.order(),
        x,
        x_low,
        x_high,
        x_range_empty,
        x_in_range,
        sum: s.value,
        n: s.n,
        n_max,
        n_in_range,
        hypothesis_satisfiable,
        note,
        phi_bounds,
        constants: *constants,
        entries,
    })
}
