//! Multigrid engine: Galerkin hierarchy construction, TGM/V/W cycles,
//! coarsest-level direct solve, stopping logic and reporting.

use nalgebra::{DMatrix, DVector, Dyn};
use serde::Serialize;

use crate::operators::{
    galerkin_product, prolongation_matrix, restriction_matrix, toeplitz_from_symbol,
    LevelMatrix, SparseMatrix, TransferPair,
};
use crate::smoothers::{symbol_sup_norm, SmootherRule, SmootherSpec};
use crate::symbol::Symbol;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleKind {
    /// Two-grid method: exact solve on the single coarse level.
    Tgm,
    V,
    W,
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleConfig {
    pub cycle: CycleKind,
    pub pre_steps: usize,
    pub post_steps: usize,
    /// Relative residual threshold.
    pub tol: f64,
    pub max_iter: usize,
}

impl CycleConfig {
    pub fn new(cycle: CycleKind) -> Self {
        CycleConfig {
            cycle,
            pre_steps: 1,
            post_steps: 1,
            tol: 1e-9,
            max_iter: 2000,
        }
    }
}

/// Transfer-symbol selection per level.
#[derive(Debug, Clone)]
pub enum TransferPlan {
    /// Same pair at every level.
    Uniform(TransferPair),
    /// Distinct pair on the finest level; all coarser levels share one.
    PerLevel {
        finest: TransferPair,
        coarser: TransferPair,
    },
}

impl TransferPlan {
    pub fn pair_for(&self, level: usize) -> &TransferPair {
        match self {
            TransferPlan::Uniform(tp) => tp,
            TransferPlan::PerLevel { finest, coarser } => {
                if level == 0 {
                    finest
                } else {
                    coarser
                }
            }
        }
    }
}

#[derive(Debug)]
pub struct Level {
    pub matrix: LevelMatrix,
    pub transfer: Option<TransferPair>,
    pub restrict: Option<SparseMatrix>,
    pub prolong: Option<SparseMatrix>,
    pub smoother: SmootherSpec,
}

enum CoarseFactor {
    Lu(nalgebra::LU<f64, Dyn, Dyn>),
    /// Pseudo-inverse fallback for a consistent singular coarsest system.
    Svd(nalgebra::SVD<f64, Dyn, Dyn>),
}

pub struct Hierarchy {
    pub levels: Vec<Level>,
    factor: CoarseFactor,
    pub coarsest_singular: bool,
}

#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub coarsest_size: usize,
    pub max_levels: Option<usize>,
    pub smoother: SmootherRule,
    /// Factor a numerically singular coarsest matrix by pseudo-inverse
    /// instead of failing the build (consistent-system escape hatch).
    pub allow_singular_coarsest: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            coarsest_size: 7,
            max_levels: None,
            smoother: SmootherRule::Richardson,
            allow_singular_coarsest: false,
        }
    }
}

fn smoother_for(matrix: &LevelMatrix, rule: SmootherRule) -> SmootherSpec {
    match rule {
        SmootherRule::GaussSeidel(sweep) => SmootherSpec::GaussSeidel { sweep },
        SmootherRule::Richardson => {
            // The symbol sup bounds the spectrum of the pure Toeplitz part
            // only; Galerkin boundary corrections can push eigenvalues
            // above it, so the damping also respects the Gershgorin row-sum
            // bound of the assembled operator. On correction-free levels
            // the two coincide.
            let (sup, fallback) = match &matrix.symbol {
                Some(f) => (symbol_sup_norm(f).max(matrix.mat.max_abs_row_sum()), false),
                None => (matrix.mat.max_abs_row_sum(), true),
            };
            SmootherSpec::Richardson {
                pre_omega: 1.5 / sup,
                post_omega: 1.0 / sup,
                row_sum_fallback: fallback,
            }
        }
    }
}

/// Recursive Galerkin coarsening until the coarsest size (or level cap)
/// is reached; tracks symbols through `coarsen_symbol` when available.
pub fn build_hierarchy(a0: LevelMatrix, plan: &TransferPlan, cfg: &BuildConfig) -> Result<Hierarchy> {
    let mut levels = Vec::new();
    let mut current = a0;
    loop {
        let at_cap = cfg
            .max_levels
            .is_some_and(|cap| levels.len() + 1 >= cap);
        if current.size() <= cfg.coarsest_size || at_cap {
            let smoother = smoother_for(&current, cfg.smoother);
            levels.push(Level {
                matrix: current,
                transfer: None,
                restrict: None,
                prolong: None,
                smoother,
            });
            break;
        }
        let pair = plan.pair_for(levels.len()).clone();
        let restrict = restriction_matrix(&pair.r, &current.n, current.structure)?;
        let prolong = prolongation_matrix(&pair.p, &current.n, current.structure)?;
        let next = galerkin_product(&current, &pair, false)?;
        let smoother = smoother_for(&current, cfg.smoother);
        levels.push(Level {
            matrix: current,
            transfer: Some(pair),
            restrict: Some(restrict),
            prolong: Some(prolong),
            smoother,
        });
        current = next;
    }
    Hierarchy::from_levels(levels, cfg.allow_singular_coarsest)
}

impl Hierarchy {
    /// Assemble a hierarchy from explicit levels, factoring the coarsest
    /// matrix. Fails when the coarsest pivot drops below `1e-14 * scale`,
    /// unless the singular fallback is allowed.
    pub fn from_levels(levels: Vec<Level>, allow_singular: bool) -> Result<Hierarchy> {
        assert!(!levels.is_empty());
        let coarsest = levels.last().unwrap();
        let dense = coarsest.matrix.mat.to_dense();
        let scale = coarsest.matrix.mat.max_abs().max(1.0);
        let lu = dense.clone().lu();
        let min_pivot = lu
            .u()
            .diagonal()
            .iter()
            .map(|v| v.abs())
            .fold(f64::INFINITY, f64::min);
        if min_pivot < 1e-14 * scale {
            if !allow_singular {
                return Err(Error::SingularCoarseMatrix {
                    level: levels.len() - 1,
                });
            }
            let svd = dense.svd(true, true);
            return Ok(Hierarchy {
                levels,
                factor: CoarseFactor::Svd(svd),
                coarsest_singular: true,
            });
        }
        Ok(Hierarchy {
            levels,
            factor: CoarseFactor::Lu(lu),
            coarsest_singular: false,
        })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.matrix.size()).collect()
    }

    fn solve_coarsest(&self, b: &[f64]) -> Result<Vec<f64>> {
        let rhs = DVector::from_column_slice(b);
        let x = match &self.factor {
            CoarseFactor::Lu(lu) => lu.solve(&rhs).ok_or(Error::SingularMatrix)?,
            CoarseFactor::Svd(svd) => svd
                .solve(&rhs, 1e-12)
                .map_err(|e| Error::UnsupportedAnalysis(e.to_string()))?,
        };
        Ok(x.iter().copied().collect())
    }

    fn cycle(&self, level: usize, x: &mut Vec<f64>, b: &[f64], cfg: &CycleConfig) -> Result<()> {
        if level + 1 == self.levels.len() {
            *x = self.solve_coarsest(b)?;
            return Ok(());
        }
        let lv = &self.levels[level];
        let a = &lv.matrix.mat;
        lv.smoother.apply(a, x, b, cfg.pre_steps, true)?;

        let ax = a.matvec(x);
        let residual: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
        let rc = lv.restrict.as_ref().unwrap().matvec(&residual);
        let mut ec = vec![0.0; rc.len()];
        let recursions = match cfg.cycle {
            CycleKind::Tgm | CycleKind::V => 1,
            // The two W-cycle calls collapse to one direct solve at the
            // next-to-coarsest level.
            CycleKind::W => {
                if level + 2 == self.levels.len() {
                    1
                } else {
                    2
                }
            }
        };
        for _ in 0..recursions {
            self.cycle(level + 1, &mut ec, &rc, cfg)?;
        }
        let correction = lv.prolong.as_ref().unwrap().matvec(&ec);
        for (xi, ci) in x.iter_mut().zip(&correction) {
            *xi += ci;
        }
        lv.smoother.apply(a, x, b, cfg.post_steps, false)?;
        Ok(())
    }

    /// Iterate the configured cycle from the zero initial guess until the
    /// relative residual drops below `cfg.tol` or `cfg.max_iter` is hit.
    pub fn solve(&self, b: &[f64], cfg: &CycleConfig) -> Result<SolveReport> {
        let finest = &self.levels[0].matrix;
        if b.len() != finest.size() {
            return Err(Error::SizeMismatch {
                expected: finest.size(),
                got: b.len(),
            });
        }
        if cfg.cycle == CycleKind::Tgm && self.levels.len() > 2 {
            return Err(Error::UnsupportedAnalysis(
                "TGM requires a two-level hierarchy".into(),
            ));
        }
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let levels = self.diagnostics();
        let r0 = norm(b);
        let mut history = vec![r0];
        if r0 == 0.0 {
            return Ok(SolveReport {
                iterations: 0,
                converged: true,
                residual_history: history,
                levels,
                diagnosis: None,
                solution: vec![0.0; b.len()],
            });
        }
        let mut x = vec![0.0; b.len()];
        let mut converged = false;
        let mut diagnosis = None;
        let mut iterations = 0;
        for it in 1..=cfg.max_iter {
            self.cycle(0, &mut x, b, cfg)?;
            let ax = finest.mat.matvec(&x);
            let res = norm(
                &b.iter()
                    .zip(&ax)
                    .map(|(bi, axi)| bi - axi)
                    .collect::<Vec<f64>>(),
            );
            history.push(res);
            iterations = it;
            if res <= cfg.tol * r0 {
                converged = true;
                break;
            }
            if res > 1e6 * r0 {
                diagnosis = Some(format!(
                    "diverged at iteration {it}: residual {res:.3e} exceeds 1e6 x initial {r0:.3e}"
                ));
                break;
            }
        }
        Ok(SolveReport {
            iterations,
            converged,
            residual_history: history,
            levels,
            diagnosis,
            solution: x,
        })
    }

    fn diagnostics(&self) -> Vec<LevelDiagnostics> {
        self.levels
            .iter()
            .map(|l| LevelDiagnostics {
                n: l.matrix.n.clone(),
                bandwidth: l.matrix.mat.bandwidth(),
                smoother: l.smoother.clone(),
                symbol: l.matrix.symbol.clone(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelDiagnostics {
    pub n: Vec<usize>,
    pub bandwidth: usize,
    pub smoother: SmootherSpec,
    pub symbol: Option<Symbol>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub converged: bool,
    pub residual_history: Vec<f64>,
    pub levels: Vec<LevelDiagnostics>,
    pub diagnosis: Option<String>,
    #[serde(skip)]
    pub solution: Vec<f64>,
}

impl SolveReport {
    pub fn final_relative_residual(&self) -> f64 {
        let first = self.residual_history[0];
        if first == 0.0 {
            0.0
        } else {
            self.residual_history.last().unwrap() / first
        }
    }
}

/// Dense direct solve for the coarsest level.
pub fn coarsest_solve(a: &LevelMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let dense = a.mat.to_dense();
    let scale = a.mat.max_abs().max(1.0);
    let lu = dense.lu();
    let min_pivot = lu
        .u()
        .diagonal()
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min);
    if min_pivot < 1e-14 * scale {
        return Err(Error::SingularMatrix);
    }
    let x = lu
        .solve(&DVector::from_column_slice(b))
        .ok_or(Error::SingularMatrix)?;
    Ok(x.iter().copied().collect())
}

/// Nonconstant coefficient of the fourth-order problem
/// `(a(x) u'')'' = g` on (0,1) with homogeneous Dirichlet conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientFn {
    /// `a(x) = e^x`
    Exp,
    /// `a(x) = (x - 0.5)^2`
    ShiftedSquare,
}

impl CoefficientFn {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CoefficientFn::Exp => x.exp(),
            CoefficientFn::ShiftedSquare => (x - 0.5) * (x - 0.5),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Problem {
    /// First-kind integral-equation discretization: `A = T_n(z)`.
    Integral { z: Symbol, n: usize },
    /// Fourth-order problem, second-difference factorization
    /// `A = D2^T diag(a(x_j)) D2` on the grid `x_j = j/(n+1)`.
    Pde4 { a: CoefficientFn, n: usize },
}

#[derive(Debug)]
pub struct Assembled {
    pub matrix: LevelMatrix,
    pub rhs: Vec<f64>,
    pub x_exact: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Build the system matrix and the manufactured right-hand side
/// `b = A x_exact` with `x_exact_j = j/n`.
pub fn assemble_experiment(problem: &Problem) -> Result<Assembled> {
    let (matrix, n, mut warnings) = match problem {
        Problem::Integral { z, n } => (toeplitz_from_symbol(z, &[*n])?, *n, Vec::new()),
        Problem::Pde4 { a, n } => {
            let n = *n;
            let d2 = toeplitz_from_symbol(&Symbol::from_coeffs_1d(-1, &[1.0, -2.0, 1.0]), &[n])?;
            let coeffs: Vec<f64> = (1..=n).map(|j| a.eval(j as f64 / (n + 1) as f64)).collect();
            let mut warnings = Vec::new();
            let zero_pts: Vec<usize> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c <= 0.0)
                .map(|(j, _)| j + 1)
                .collect();
            if !zero_pts.is_empty() {
                warnings.push(format!(
                    "coefficient a(x) is nonpositive at grid points {:?}; the system may be \
                     singular but remains consistent with the manufactured right-hand side",
                    zero_pts
                ));
            }
            let diag = SparseMatrix::from_triplets(
                n,
                n,
                coeffs.iter().enumerate().map(|(i, &c)| (i, i, c)),
            );
            let mut mat = d2.mat.transpose().matmul(&diag).matmul(&d2.mat);
            // Extended second-difference closure: the factorization uses
            // the (n+2) x n zero-extended difference matrix, which adds
            // a(x_0) e_1 e_1^T + a(x_{n+1}) e_n e_n^T to the truncated
            // product above. This keeps the operator positive definite
            // even where the coefficient vanishes at interior grid points.
            mat.add_to_entry(0, 0, a.eval(0.0));
            mat.add_to_entry(n - 1, n - 1, a.eval(1.0));
            (LevelMatrix::general(mat, vec![n]), n, warnings)
        }
    };
    if matrix.n.len() != 1 {
        warnings.push("experiment harness is one-dimensional".into());
    }
    let x_exact: Vec<f64> = (1..=n).map(|j| j as f64 / n as f64).collect();
    let rhs = matrix.mat.matvec(&x_exact);
    Ok(Assembled {
        matrix,
        rhs,
        x_exact,
        warnings,
    })
}

/// Dense helper used by tests: solve `A x = b` by LU.
pub fn dense_solve(a: &DMatrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    a.clone()
        .lu()
        .solve(&DVector::from_column_slice(b))
        .map(|x| x.iter().copied().collect())
}
