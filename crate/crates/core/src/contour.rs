//! Winding numbers of analytic functions around rectangles by continuous
//! argument tracking.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub sigma1: f64,
    pub sigma2: f64,
    pub t1: f64,
    pub t2: f64,
}

impl Rect {
    pub fn new(sigma1: f64, sigma2: f64, t1: f64, t2: f64) -> Result<Self> {
        if !(sigma2 > sigma1 && t2 > t1) {
            return Err(Error::domain(
                "rectangle",
                format!("[{sigma1}, {sigma2}] x [{t1}, {t2}]"),
                "nonempty interiors",
            ));
        }
        Ok(Self { sigma1, sigma2, t1, t2 })
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma1 && s.re <= self.sigma2 && s.im >= self.t1 && s.im <= self.t2
    }

    pub fn expand(&self, delta: f64) -> Self {
        Self {
            sigma1: self.sigma1 - delta,
            sigma2: self.sigma2 + delta,
            t1: self.t1 - delta,
            t2: self.t2 + delta,
        }
    }

    /// Corners in counter-clockwise order starting at the bottom left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.sigma1, self.t1),
            Complex64::new(self.sigma2, self.t1),
            Complex64::new(self.sigma2, self.t2),
            Complex64::new(self.sigma1, self.t2),
        ]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrackingOptions {
    /// Largest step along the contour.
    pub max_step: f64,
    /// Give up (the contour runs too close to a zero) once steps fall below this.
    pub min_step: f64,
    /// Largest accepted argument increment per step.
    pub max_increment: f64,
}

impl Default for TrackingOptions {
    fn default() -> Self {
        Self {
            max_step: 0.1,
            min_step: 1e-7,
            max_increment: PI / 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Winding {
    pub winding: i64,
    pub total_argument: f64,
    pub evaluations: usize,
    pub min_modulus: f64,
}

/// Winding number of f around the rectangle. The argument is tracked with steps
/// halved until each increment is below `max_increment`.
pub fn winding_number<F>(mut f: F, rect: &Rect, opts: &TrackingOptions) -> Result<Winding>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let corners = rect.corners();
    let mut total = 0.0;
    let mut evaluations = 1usize;
    let mut current = f(corners[0])?;
    let mut min_modulus = current.norm();
    if min_modulus == 0.0 || !min_modulus.is_finite() {
        return Err(Error::ContourHitsZero {
            attempts: 0,
            distance: 0.0,
        });
    }
    for edge in 0..4 {
        let a = corners[edge];
        let b = corners[(edge + 1) % 4];
        let length = (b - a).norm();
        let mut u = 0.0f64;
        let mut du = (opts.max_step / length).min(1.0);
        while u < 1.0 {
            let step = du.min(1.0 - u);
            let s = if u + step >= 1.0 { b } else { a + (b - a) * (u + step) };
            let next = f(s)?;
            evaluations += 1;
            let modulus = next.norm();
            if modulus == 0.0 || !modulus.is_finite() {
                return Err(Error::ContourHitsZero {
                    attempts: 0,
                    distance: 0.0,
                });
            }
            let increment = (next / current).arg();
            if increment.abs() >= opts.max_increment {
                du = step / 2.0;
                if du * length < opts.min_step {
                    return Err(Error::ContourHitsZero {
                        attempts: 0,
                        distance: du * length,
                    });
                }
                continue;
            }
            total += increment;
            min_modulus = min_modulus.min(modulus);
            current = next;
            u += step;
            du = (2.0 * step).min(opts.max_step / length);
        }
    }
    let turns = total / (2.0 * PI);
    let winding = turns.round();
    if (turns - winding).abs() > 0.1 {
        return Err(Error::ContourHitsZero {
            attempts: 0,
            distance: f64::NAN,
        });
    }
    Ok(Winding {
        winding: winding as i64,
        total_argument: total,
        evaluations,
        min_modulus,
    })
}
