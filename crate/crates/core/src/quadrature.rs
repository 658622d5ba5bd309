//! Adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Finite intervals use global bisection of the panel with the largest error
//! estimate. Half-lines are covered by geometrically growing panels, each
//! integrated adaptively, until the tail contribution becomes negligible
//! against the accumulated absolute integral.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    /// Integral of `|f|`, used to judge cancellation and tail cut-offs.
    pub abs_value: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_value = fc.abs() * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += w * (f1 + f2);
        abs_value += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        abs_value: abs_value * half.abs(),
    }
}

/// Tolerances and budget for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Half-line integration stops once a panel adds less than this fraction
    /// of the accumulated absolute integral.
    pub tail_tol: f64,
    pub max_panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 400,
            tail_tol: 1e-13,
            max_panels: 200,
        }
    }
}

/// Relative tolerance reported in convergence failures.
pub const REQUIRED_REL_TOL: f64 = 1e-6;

impl Quadrature {
    /// Integral over the finite interval `[a, b]`.
    ///
    /// Fails when the estimated error after the subdivision budget exceeds
    /// `REQUIRED_REL_TOL` relative to the integral of `|f|`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        let first = kronrod15(&f, a, b);
        let mut evaluations = 15;
        let mut heap = BinaryHeap::new();
        heap.push(first);
        let (mut value, mut error, mut abs_value) = (first.value, first.error, first.abs_value);
        let mut subdivisions = 0;
        while error > self.abs_tol.max(self.rel_tol * abs_value.max(value.abs())) {
            if subdivisions >= self.max_subdivisions {
                let achieved = error / abs_value.max(value.abs()).max(f64::MIN_POSITIVE);
                if achieved > REQUIRED_REL_TOL && error > self.abs_tol {
                    return Err(Error::Quadrature {
                        achieved,
                        requested: REQUIRED_REL_TOL,
                    });
                }
                break;
            }
            let worst = heap.pop().expect("heap holds at least one panel");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Interval exhausted at floating-point resolution.
                heap.push(Panel { error: 0.0, ..worst });
                error -= worst.error;
                continue;
            }
            let left = kronrod15(&f, worst.a, mid);
            let right = kronrod15(&f, mid, worst.b);
            evaluations += 30;
            subdivisions += 1;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            abs_value += left.abs_value + right.abs_value - worst.abs_value;
            heap.push(left);
            heap.push(right);
        }
        // Recompute sums to shed accumulated rounding from incremental updates.
        let panels = heap.into_vec();
        let value = panels.iter().map(|p| p.value).sum();
        let abs_error = panels.iter().map(|p| p.error).sum();
        let abs_value = panels.iter().map(|p| p.abs_value).sum();
        Ok(Estimate {
            value,
            abs_error,
            abs_value,
            evaluations,
        })
    }

    /// Integral over `[a, inf)`.
    ///
    /// Panels are `[a, a + w]`, `[a + w, a + 3w]`, ... (doubling widths). The
    /// sweep always reaches `min_extent` before the tail criterion applies,
    /// so integrands whose mass sits far from `a` are not cut short.
    pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        initial_width: f64,
        min_extent: f64,
    ) -> Result<Estimate> {
        let mut total = Estimate {
            value: 0.0,
            abs_error: 0.0,
            abs_value: 0.0,
            evaluations: 0,
        };
        let mut lo = a;
        let mut width = initial_width;
        let mut quiet = 0;
        for _ in 0..self.max_panels {
            let hi = lo + width;
            let panel = self.integrate(&f, lo, hi)?;
            total.value += panel.value;
            total.abs_error += panel.abs_error;
            total.abs_value += panel.abs_value;
            total.evaluations += panel.evaluations;
            if hi >= min_extent && panel.abs_value <= self.tail_tol * total.abs_value {
                quiet += 1;
                if quiet >= 2 {
                    return Ok(total);
                }
            } else {
                quiet = 0;
            }
            lo = hi;
            width *= 2.0;
            if !lo.is_finite() {
                break;
            }
        }
        Err(Error::Quadrature {
            achieved: 1.0,
            requested: REQUIRED_REL_TOL,
        })
    }
}
