//! Per-view loss functions: evaluation, column-wise centers, and proximal operators.
//!
//! Three losses are supported, one per data modality:
//!
//! * `gaussian`  — ½‖X − U‖²_F for continuous views,
//! * `manhattan` — Σ|X_ij − U_ij| for count/heavy-tailed views,
//! * `bernoulli` — Σ [log(1 + exp(U_ij)) − X_ij·U_ij] for binary/proportion views.
//!
//! Each loss contributes two things to the solver: a column-constant *center*
//! (the minimizer over matrices with constant columns — mean, median, or
//! logit-mean) and a separable proximal operator used in the B-update.

use ndarray::{Array1, Array2, ArrayView2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Loss attached to a single view. Tags appear verbatim in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    Gaussian,
    Manhattan,
    Bernoulli,
}

impl std::fmt::Display for LossKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LossKind::Gaussian => write!(f, "gaussian"),
            LossKind::Manhattan => write!(f, "manhattan"),
            LossKind::Bernoulli => write!(f, "bernoulli"),
        }
    }
}

/// Errors from loss evaluation and proximal steps.
#[derive(Debug, Error, PartialEq)]
pub enum LossError {
    #[error("matrix shapes differ: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("prox step size must be strictly positive, got {0}")]
    NonPositiveTau(f64),
}

/// Column-constant minimizer of a view's loss: the per-column center x̄ and
/// its n-row broadcast.
#[derive(Debug, Clone, PartialEq)]
pub struct LossCenter {
    center: Array1<f64>,
}

impl LossCenter {
    /// Per-column center values x̄ (length p_v).
    pub fn values(&self) -> &Array1<f64> {
        &self.center
    }

    /// The n-row broadcast X̄ with every column constant at its center.
    pub fn broadcast(&self, n: usize) -> Array2<f64> {
        let p = self.center.len();
        let mut out = Array2::zeros((n, p));
        for (j, &c) in self.center.iter().enumerate() {
            out.column_mut(j).fill(c);
        }
        out
    }
}

/// Numerically stable log(1 + exp(t)).
pub(crate) fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// Numerically stable logistic function 1/(1 + exp(−t)).
pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn check_shapes(x: &ArrayView2<f64>, u: &ArrayView2<f64>) -> Result<(), LossError> {
    if x.dim() != u.dim() {
        return Err(LossError::DimensionMismatch {
            left: x.dim(),
            right: u.dim(),
        });
    }
    Ok(())
}

/// Evaluates the loss ℓ(X, U) for one view.
pub fn loss_value(kind: LossKind, x: ArrayView2<f64>, u: ArrayView2<f64>) -> Result<f64, LossError> {
    check_shapes(&x, &u)?;
    let total = match kind {
        LossKind::Gaussian => {
            0.5 * x
                .iter()
                .zip(u.iter())
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<f64>()
        }
        LossKind::Manhattan => x
            .iter()
            .zip(u.iter())
            .map(|(&a, &b)| (a - b).abs())
            .sum::<f64>(),
        LossKind::Bernoulli => x
            .iter()
            .zip(u.iter())
            .map(|(&a, &b)| softplus(b) - a * b)
            .sum::<f64>(),
    };
    Ok(total)
}

fn column_median(col: &[f64]) -> f64 {
    let mut v = col.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Mean clamp for the bernoulli center: keeps logit finite on all-0/all-1 columns.
const BERNOULLI_CENTER_CLAMP: f64 = 1e-6;

/// Computes the loss-specific center of each column: mean (gaussian),
/// median (manhattan; even counts average the two middle values), or
/// logit of the clamped mean (bernoulli).
pub fn loss_center(kind: LossKind, x: ArrayView2<f64>) -> LossCenter {
    let n = x.nrows() as f64;
    let center = match kind {
        LossKind::Gaussian => x.columns().into_iter().map(|c| c.sum() / n).collect(),
        LossKind::Manhattan => x
            .columns()
            .into_iter()
            .map(|c| column_median(c.to_vec().as_slice()))
            .collect(),
        LossKind::Bernoulli => x
            .columns()
            .into_iter()
            .map(|c| {
                let m = (c.sum() / n).clamp(BERNOULLI_CENTER_CLAMP, 1.0 - BERNOULLI_CENTER_CLAMP);
                (m / (1.0 - m)).ln()
            })
            .collect(),
    };
    LossCenter { center }
}

/// Solves τ(sigmoid(b) − x) + (b − a) = 0 for b by safeguarded Newton steps
/// inside the bracket [a−τ, a+τ], to absolute tolerance 1e−12 on the root.
fn bernoulli_prox_scalar(x: f64, a: f64, tau: f64) -> f64 {
    let mut lo = a - tau;
    let mut hi = a + tau;
    // The defining function g is strictly increasing with slope ≥ 1, so
    // |g(b)| bounds the distance to the root from above.
    let mut b = a - tau * (sigmoid(a) - x);
    for _ in 0..200 {
        let s = sigmoid(b);
        let g = tau * (s - x) + (b - a);
        if g.abs() <= 1e-13 {
            return b;
        }
        if g > 0.0 {
            hi = b;
        } else {
            lo = b;
        }
        if hi - lo <= 1e-12 {
            break;
        }
        let dg = tau * s * (1.0 - s) + 1.0;
        let newton = b - g / dg;
        b = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    0.5 * (lo + hi)
}

pub(crate) fn soft_threshold(value: f64, tau: f64) -> f64 {
    if value > tau {
        value - tau
    } else if value < -tau {
        value + tau
    } else {
        0.0
    }
}

/// Proximal operator of τ·ℓ(X, ·) at A: argmin_B τ·ℓ(X, B) + ½‖B − A‖²_F.
///
/// Entrywise closed forms: gaussian (A + τX)/(1 + τ); manhattan
/// X + soft-threshold(A − X, τ); bernoulli via a bracketed 1-D root solve.
pub fn loss_prox(
    kind: LossKind,
    x: ArrayView2<f64>,
    a: ArrayView2<f64>,
    tau: f64,
) -> Result<Array2<f64>, LossError> {
    check_shapes(&x, &a)?;
    if tau.is_nan() || tau <= 0.0 {
        return Err(LossError::NonPositiveTau(tau));
    }
    let mut out = Array2::zeros(a.dim());
    match kind {
        LossKind::Gaussian => {
            ndarray::Zip::from(&mut out)
                .and(&a)
                .and(&x)
                .for_each(|o, &av, &xv| *o = (av + tau * xv) / (1.0 + tau));
        }
        LossKind::Manhattan => {
            ndarray::Zip::from(&mut out)
                .and(&a)
                .and(&x)
                .for_each(|o, &av, &xv| *o = xv + soft_threshold(av - xv, tau));
        }
        LossKind::Bernoulli => {
            ndarray::Zip::from(&mut out)
                .and(&a)
                .and(&x)
                .for_each(|o, &av, &xv| *o = bernoulli_prox_scalar(xv, av, tau));
        }
    }
    Ok(out)
}
