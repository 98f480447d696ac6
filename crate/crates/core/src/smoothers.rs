//! Stationary smoothers: relaxed Richardson with symbol-derived damping
//! and Gauss-Seidel sweeps.

use crate::operators::SparseMatrix;
use crate::symbol::Symbol;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    Forward,
    Backward,
    /// One step is a forward pass followed by a backward pass.
    Symmetric,
}

/// Smoother selection rule; per-level damping is derived at hierarchy
/// build time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmootherRule {
    /// Relaxed Richardson: pre-smoothing damping `1.5 / ||f||_inf`,
    /// post-smoothing `1 / ||f||_inf`.
    Richardson,
    GaussSeidel(Sweep),
}

/// Concrete per-level smoother with resolved parameters.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmootherSpec {
    Richardson {
        pre_omega: f64,
        post_omega: f64,
        /// The damping was derived from the row-sum bound because no
        /// tracked symbol was available.
        row_sum_fallback: bool,
    },
    GaussSeidel {
        sweep: Sweep,
    },
}

impl SmootherSpec {
    pub fn apply(&self, a: &SparseMatrix, x: &mut [f64], b: &[f64], steps: usize, pre: bool) -> Result<()> {
        match self {
            SmootherSpec::Richardson {
                pre_omega,
                post_omega,
                ..
            } => {
                let omega = if pre { *pre_omega } else { *post_omega };
                richardson(a, x, b, omega, steps);
                Ok(())
            }
            SmootherSpec::GaussSeidel { sweep } => gauss_seidel(a, x, b, *sweep, steps),
        }
    }
}

/// `x <- x + omega (b - A x)`, `steps` times.
pub fn richardson(a: &SparseMatrix, x: &mut [f64], b: &[f64], omega: f64, steps: usize) {
    assert!(omega > 0.0);
    for _ in 0..steps {
        let ax = a.matvec(x);
        for i in 0..x.len() {
            x[i] += omega * (b[i] - ax[i]);
        }
    }
}

/// Triangular Gauss-Seidel sweep; the forward variant solves
/// `(D + L) x' = b - U x` in place.
pub fn gauss_seidel(
    a: &SparseMatrix,
    x: &mut [f64],
    b: &[f64],
    sweep: Sweep,
    steps: usize,
) -> Result<()> {
    let n = a.nrows();
    let pass = |x: &mut [f64], backward: bool| -> Result<()> {
        let order: Box<dyn Iterator<Item = usize>> = if backward {
            Box::new((0..n).rev())
        } else {
            Box::new(0..n)
        };
        for i in order {
            let (cols, vals) = a.row(i);
            let mut acc = b[i];
            let mut diag = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                if c == i {
                    diag = v;
                } else {
                    acc -= v * x[c];
                }
            }
            if diag == 0.0 {
                return Err(Error::ZeroDiagonal(i));
            }
            x[i] = acc / diag;
        }
        Ok(())
    };
    for _ in 0..steps {
        match sweep {
            Sweep::Forward => pass(x, false)?,
            Sweep::Backward => pass(x, true)?,
            Sweep::Symmetric => {
                pass(x, false)?;
                pass(x, true)?;
            }
        }
    }
    Ok(())
}

/// `max |f|` over a dense sample grid with one local refinement pass
/// (1-D); higher dimensions use a coarser grid without refinement.
pub fn symbol_sup_norm(f: &Symbol) -> f64 {
    use std::f64::consts::PI;
    if f.dim() == 1 {
        let samples = 4096;
        let mut best_x = 0.0;
        let mut best = 0.0_f64;
        for k in 0..samples {
            let x = -PI + 2.0 * PI * k as f64 / samples as f64;
            let v = f.eval_1d(x).norm();
            if v > best {
                best = v;
                best_x = x;
            }
        }
        // Ternary-search refinement inside the bracketing cell.
        let h = 2.0 * PI / samples as f64;
        let (mut lo, mut hi) = (best_x - h, best_x + h);
        for _ in 0..80 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f.eval_1d(m1).norm() < f.eval_1d(m2).norm() {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        best.max(f.eval_1d(0.5 * (lo + hi)).norm())
    } else {
        let per_dim = 64usize;
        let total = per_dim.pow(f.dim() as u32);
        let mut best = 0.0_f64;
        for flat in 0..total {
            let mut rem = flat;
            let x: Vec<f64> = (0..f.dim())
                .map(|_| {
                    let k = rem % per_dim;
                    rem /= per_dim;
                    -PI + 2.0 * PI * k as f64 / per_dim as f64
                })
                .collect();
            best = best.max(f.eval(&x).norm());
        }
        best
    }
}
