//! Concrete linear-operator layer: Toeplitz/circulant matrices built from
//! symbols, the down-sampling operator, prolongation/restriction, and the
//! explicit Galerkin triple product `K T(r) A T(p) K^T`.
//!
//! All matrices are stored explicitly sparse; sizes in the experiments stay
//! small (n <= 1023, d = 1) so there is no fast-transform matvec path. The
//! circulant DFT diagonalization exists only as a test oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::symbol::{coarsen_symbol, Symbol};
use crate::{Error, Result};

/// Compressed-row sparse matrix over f64.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseMatrix {
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet out of bounds");
            rows[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for &(c, v) in row.iter() {
                if last == Some(c) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            cols,
            vals,
        }
    }

    /// Add `v` to entry `(i, j)`, extending the sparsity pattern if needed.
    pub fn add_to_entry(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.nrows && j < self.ncols, "entry out of bounds");
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        match self.cols[lo..hi].binary_search(&j) {
            Ok(k) => self.vals[lo + k] += v,
            Err(k) => {
                self.cols.insert(lo + k, j);
                self.vals.insert(lo + k, v);
                for ptr in self.row_ptr[i + 1..].iter_mut() {
                    *ptr += 1;
                }
            }
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.cols[lo..hi], &self.vals[lo..hi])
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c];
            }
            y[i] = acc;
        }
        y
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut triplets = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                triplets.push((c, i, v));
            }
        }
        SparseMatrix::from_triplets(self.ncols, self.nrows, triplets)
    }

    /// Sparse-sparse product using a dense accumulator per row.
    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "inner dimensions must agree");
        let mut acc = vec![0.0_f64; other.ncols];
        let mut marked = vec![false; other.ncols];
        let mut triplets = Vec::new();
        for i in 0..self.nrows {
            let mut touched: Vec<usize> = Vec::new();
            let (cols, vals) = self.row(i);
            for (&k, &v) in cols.iter().zip(vals) {
                let (ocols, ovals) = other.row(k);
                for (&c, &w) in ocols.iter().zip(ovals) {
                    if !marked[c] {
                        marked[c] = true;
                        touched.push(c);
                    }
                    acc[c] += v * w;
                }
            }
            for &c in &touched {
                if acc[c] != 0.0 {
                    triplets.push((i, c, acc[c]));
                }
                acc[c] = 0.0;
                marked[c] = false;
            }
        }
        SparseMatrix::from_triplets(self.nrows, other.ncols, triplets)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols, other.ncols);
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                triplets.push((i, c, v));
            }
            let (cols, vals) = other.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                triplets.push((i, c, -v));
            }
        }
        SparseMatrix::from_triplets(self.nrows, self.ncols, triplets)
    }

    pub fn scale(&self, alpha: f64) -> SparseMatrix {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= alpha;
        }
        out
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.entry(i, i))
            .collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                if (v - self.entry(c, i)).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Maximum |i - j| over stored nonzero entries.
    pub fn bandwidth(&self) -> usize {
        let mut band = 0usize;
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                if v != 0.0 {
                    band = band.max(i.abs_diff(c));
                }
            }
        }
        band
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_row_sum(&self) -> f64 {
        (0..self.nrows)
            .map(|i| self.row(i).1.iter().map(|v| v.abs()).sum())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                d[(i, c)] = v;
            }
        }
        d
    }

    /// Coordinate-list text export, one `row col value` line per entry
    /// (0-based indices).
    pub fn to_coo_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                out.push_str(&format!("{} {} {:.17e}\n", i, c, v));
            }
        }
        out
    }
}

/// Structural annotation carried by a level matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    General,
    Toeplitz,
    Circulant,
}

/// A concrete operator at one grid level, with optional symbol and
/// low-rank-correction annotations (diagnostic only; arithmetic always
/// uses the explicit sparse matrix).
#[derive(Debug, Clone)]
pub struct LevelMatrix {
    pub mat: SparseMatrix,
    pub n: Vec<usize>,
    pub structure: Structure,
    pub symbol: Option<Symbol>,
    pub symmetric: bool,
    pub low_rank: Option<Vec<(Vec<f64>, Vec<f64>)>>,
}

impl LevelMatrix {
    pub fn general(mat: SparseMatrix, n: Vec<usize>) -> Self {
        let symmetric = mat.is_symmetric(1e-13 * (1.0 + mat.max_abs()));
        LevelMatrix {
            mat,
            n,
            structure: Structure::General,
            symbol: None,
            symmetric,
            low_rank: None,
        }
    }

    pub fn size(&self) -> usize {
        self.n.iter().product()
    }
}

fn real_coeff(a: Complex64, scale: f64) -> Result<f64> {
    if a.im.abs() > 1e-12 * (1.0 + scale) {
        return Err(Error::NonRealSymbol(a.im.abs()));
    }
    Ok(a.re)
}

fn decode_multi(mut flat: usize, n: &[usize]) -> Vec<usize> {
    // Row-major: last dimension fastest.
    let mut idx = vec![0usize; n.len()];
    for k in (0..n.len()).rev() {
        idx[k] = flat % n[k];
        flat /= n[k];
    }
    idx
}

fn encode_multi(idx: &[usize], n: &[usize]) -> usize {
    idx.iter().zip(n).fold(0, |acc, (&i, &nk)| acc * nk + i)
}

/// `T_n(f)`: entry `(s, t) = a_{s-t}` by tensor indexing.
pub fn toeplitz_from_symbol(f: &Symbol, n: &[usize]) -> Result<LevelMatrix> {
    if n.len() != f.dim() {
        return Err(Error::DimensionMismatch(n.len(), f.dim()));
    }
    let radius = f.support_radius();
    for (&nk, &rk) in n.iter().zip(&radius) {
        let bandwidth = 2 * rk as usize + 1;
        if nk < bandwidth {
            return Err(Error::SizeBelowBandwidth { n: nk, bandwidth });
        }
    }
    let scale = f.l1_norm();
    let total: usize = n.iter().product();
    let mut triplets = Vec::new();
    for s_flat in 0..total {
        let s = decode_multi(s_flat, n);
        for (j, a) in f.coeffs() {
            let mut t = Vec::with_capacity(n.len());
            let mut in_range = true;
            for (k, &jk) in j.iter().enumerate() {
                let tk = s[k] as i64 - jk;
                if tk < 0 || tk >= n[k] as i64 {
                    in_range = false;
                    break;
                }
                t.push(tk as usize);
            }
            if in_range {
                triplets.push((s_flat, encode_multi(&t, n), real_coeff(a, scale)?));
            }
        }
    }
    let mat = SparseMatrix::from_triplets(total, total, triplets);
    let symmetric = f.is_real_valued(1e-13) && mat.is_symmetric(1e-12 * (1.0 + scale));
    Ok(LevelMatrix {
        mat,
        n: n.to_vec(),
        structure: Structure::Toeplitz,
        symbol: Some(f.clone()),
        symmetric,
        low_rank: None,
    })
}

/// `C_n(f)`: entry `(s, t) = sum of a_j with j = (s - t) mod n`.
pub fn circulant_from_symbol(f: &Symbol, n: &[usize]) -> Result<LevelMatrix> {
    if n.len() != f.dim() {
        return Err(Error::DimensionMismatch(n.len(), f.dim()));
    }
    let scale = f.l1_norm();
    let total: usize = n.iter().product();
    let mut triplets = Vec::new();
    for s_flat in 0..total {
        let s = decode_multi(s_flat, n);
        for (j, a) in f.coeffs() {
            let t: Vec<usize> = j
                .iter()
                .enumerate()
                .map(|(k, &jk)| (s[k] as i64 - jk).rem_euclid(n[k] as i64) as usize)
                .collect();
            triplets.push((s_flat, encode_multi(&t, n), real_coeff(a, scale)?));
        }
    }
    let mat = SparseMatrix::from_triplets(total, total, triplets);
    let symmetric = mat.is_symmetric(1e-12 * (1.0 + scale));
    Ok(LevelMatrix {
        mat,
        n: n.to_vec(),
        structure: Structure::Circulant,
        symbol: Some(f.clone()),
        symmetric,
        low_rank: None,
    })
}

/// Symbol samples `f(2 pi j / n)` on the circulant frequency grid, in the
/// eigenvalue ordering induced by the Fourier basis.
pub fn circulant_eigenvalues(f: &Symbol, n: &[usize]) -> Vec<Complex64> {
    let total: usize = n.iter().product();
    (0..total)
        .map(|flat| {
            let j = decode_multi(flat, n);
            let x: Vec<f64> = j
                .iter()
                .zip(n)
                .map(|(&jk, &nk)| 2.0 * std::f64::consts::PI * jk as f64 / nk as f64)
                .collect();
            f.eval(&x)
        })
        .collect()
}

/// Rank-one stabilization of a singular circulant whose symbol vanishes at
/// exactly one grid frequency: the null eigenvalue is raised to the
/// smallest nonzero symbol sample. Returns the matrix unchanged when the
/// symbol is nonzero on the whole grid.
pub fn stabilize(a: &LevelMatrix) -> Result<LevelMatrix> {
    if a.structure != Structure::Circulant {
        return Err(Error::UnsupportedStabilization(
            "stabilization applies to circulant-annotated matrices".into(),
        ));
    }
    let f = a.symbol.as_ref().ok_or_else(|| {
        Error::UnsupportedStabilization("missing symbol annotation".into())
    })?;
    if a.n.len() != 1 {
        return Err(Error::UnsupportedStabilization(
            "stabilization implemented for d = 1".into(),
        ));
    }
    let n = a.n[0];
    let samples = circulant_eigenvalues(f, &a.n);
    let tol = f.tol_zero();
    let null_freqs: Vec<usize> = (0..n).filter(|&k| samples[k].norm() <= tol).collect();
    match null_freqs.len() {
        0 => Ok(a.clone()),
        1 => {
            let k = null_freqs[0];
            if k != 0 && !(n % 2 == 0 && k == n / 2) {
                return Err(Error::UnsupportedStabilization(format!(
                    "vanishing frequency {k} has no real rank-one correction"
                )));
            }
            let lift = samples
                .iter()
                .filter(|s| s.norm() > tol)
                .map(|s| s.norm())
                .fold(f64::INFINITY, f64::min);
            // Real Fourier mode: all-ones at frequency 0, alternating signs
            // at the Nyquist frequency.
            let mode: Vec<f64> = (0..n)
                .map(|i| if k == 0 { 1.0 } else { if i % 2 == 0 { 1.0 } else { -1.0 } })
                .collect();
            let coeff = lift / n as f64;
            let mut triplets = Vec::with_capacity(a.mat.nnz() + n * n);
            for i in 0..n {
                let (cols, vals) = a.mat.row(i);
                for (&c, &v) in cols.iter().zip(vals) {
                    triplets.push((i, c, v));
                }
                for j in 0..n {
                    triplets.push((i, j, coeff * mode[i] * mode[j]));
                }
            }
            let mat = SparseMatrix::from_triplets(n, n, triplets);
            Ok(LevelMatrix {
                mat,
                n: a.n.clone(),
                structure: Structure::Circulant,
                symbol: a.symbol.clone(),
                symmetric: a.symmetric,
                low_rank: Some(vec![(
                    mode.iter().map(|&m| m * coeff.sqrt()).collect(),
                    mode.iter().map(|&m| m * coeff.sqrt()).collect(),
                )]),
            })
        }
        k => Err(Error::UnsupportedStabilization(format!(
            "{k} vanishing grid frequencies"
        ))),
    }
}

/// Per-dimension coarse size `(n - n mod 2) / 2`.
pub fn coarse_size(n: &[usize]) -> Vec<usize> {
    n.iter().map(|&nk| (nk - nk % 2) / 2).collect()
}

/// Fine-grid columns sampled by the 1-D down-sampling matrix (0-based):
/// `2k + 1` for odd `n`, `2k` for even `n`.
fn downsample_cols_1d(n: usize) -> Vec<usize> {
    let c = (n + 1) % 2;
    (1..=(n - n % 2) / 2).map(|k| 2 * k - c - 1).collect()
}

/// The down-sampling matrix `K`: exactly one 1 per row, tensor product
/// across dimensions.
pub fn downsample_matrix(n: &[usize]) -> SparseMatrix {
    let maps: Vec<Vec<usize>> = n.iter().map(|&nk| downsample_cols_1d(nk)).collect();
    let nc = coarse_size(n);
    let coarse_total: usize = nc.iter().product();
    let fine_total: usize = n.iter().product();
    let triplets = (0..coarse_total).map(|row| {
        let cidx = decode_multi(row, &nc);
        let fidx: Vec<usize> = cidx.iter().zip(&maps).map(|(&i, m)| m[i]).collect();
        (row, encode_multi(&fidx, n), 1.0)
    });
    SparseMatrix::from_triplets(coarse_total, fine_total, triplets)
}

/// Matrix-free Toeplitz application `y = T(f) x` with boundary truncation.
pub fn apply_toeplitz(f: &Symbol, n: &[usize], x: &[f64]) -> Result<Vec<f64>> {
    let total: usize = n.iter().product();
    if x.len() != total {
        return Err(Error::SizeMismatch {
            expected: total,
            got: x.len(),
        });
    }
    let scale = f.l1_norm();
    let mut y = vec![0.0; total];
    for (j, a) in f.coeffs() {
        let v = real_coeff(a, scale)?;
        for s_flat in 0..total {
            let s = decode_multi(s_flat, n);
            let mut t = Vec::with_capacity(n.len());
            let mut in_range = true;
            for (k, &jk) in j.iter().enumerate() {
                let tk = s[k] as i64 - jk;
                if tk < 0 || tk >= n[k] as i64 {
                    in_range = false;
                    break;
                }
                t.push(tk as usize);
            }
            if in_range {
                y[s_flat] += v * x[encode_multi(&t, n)];
            }
        }
    }
    Ok(y)
}

/// Prolongation `P_n(p) x = T_n(p) K_n^T x`, matrix-free.
pub fn apply_prolongation(p: &Symbol, n_fine: &[usize], x_coarse: &[f64]) -> Result<Vec<f64>> {
    let nc = coarse_size(n_fine);
    let coarse_total: usize = nc.iter().product();
    if x_coarse.len() != coarse_total {
        return Err(Error::SizeMismatch {
            expected: coarse_total,
            got: x_coarse.len(),
        });
    }
    let maps: Vec<Vec<usize>> = n_fine.iter().map(|&nk| downsample_cols_1d(nk)).collect();
    let fine_total: usize = n_fine.iter().product();
    let mut injected = vec![0.0; fine_total];
    for (flat, &v) in x_coarse.iter().enumerate() {
        let cidx = decode_multi(flat, &nc);
        let fidx: Vec<usize> = cidx.iter().zip(&maps).map(|(&i, m)| m[i]).collect();
        injected[encode_multi(&fidx, n_fine)] = v;
    }
    apply_toeplitz(p, n_fine, &injected)
}

/// Restriction `R_n(r) x = K_n T_n(r) x`, matrix-free.
pub fn apply_restriction(r: &Symbol, n_fine: &[usize], x_fine: &[f64]) -> Result<Vec<f64>> {
    let smoothed = apply_toeplitz(r, n_fine, x_fine)?;
    let nc = coarse_size(n_fine);
    let maps: Vec<Vec<usize>> = n_fine.iter().map(|&nk| downsample_cols_1d(nk)).collect();
    let coarse_total: usize = nc.iter().product();
    Ok((0..coarse_total)
        .map(|flat| {
            let cidx = decode_multi(flat, &nc);
            let fidx: Vec<usize> = cidx.iter().zip(&maps).map(|(&i, m)| m[i]).collect();
            smoothed[encode_multi(&fidx, n_fine)]
        })
        .collect())
}

/// Restriction and prolongation symbols for one level, with the scaling
/// convention that matrices use the raw symbols.
#[derive(Debug, Clone)]
pub struct TransferPair {
    pub r: Symbol,
    pub p: Symbol,
}

impl TransferPair {
    pub fn new(r: Symbol, p: Symbol) -> Result<Self> {
        if r.dim() != p.dim() {
            return Err(Error::DimensionMismatch(r.dim(), p.dim()));
        }
        Ok(TransferPair { r, p })
    }

    pub fn symmetric(rp: Symbol) -> Self {
        TransferPair {
            r: rp.clone(),
            p: rp,
        }
    }

    /// `r p` real and nonnegative on a sample grid (positive-definiteness
    /// route for the recursive Galerkin application).
    pub fn product_nonnegative(&self, samples_per_dim: usize) -> bool {
        let d = self.r.dim();
        if d != 1 {
            return true; // only checked in the 1-D experiment harness
        }
        (0..samples_per_dim).all(|k| {
            let x = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * k as f64 / samples_per_dim as f64;
            let v = self.r.eval_1d(x) * self.p.eval_1d(x);
            v.im.abs() < 1e-10 && v.re >= -1e-10
        })
    }
}

/// Explicit sparse restriction matrix `K T(r)` (or `K C(r)`).
pub fn restriction_matrix(r: &Symbol, n_fine: &[usize], structure: Structure) -> Result<SparseMatrix> {
    let t = match structure {
        Structure::Circulant => circulant_from_symbol(r, n_fine)?,
        _ => toeplitz_from_symbol(r, n_fine)?,
    };
    Ok(downsample_matrix(n_fine).matmul(&t.mat))
}

/// Explicit sparse prolongation matrix `T(p) K^T` (or `C(p) K^T`).
pub fn prolongation_matrix(p: &Symbol, n_fine: &[usize], structure: Structure) -> Result<SparseMatrix> {
    let t = match structure {
        Structure::Circulant => circulant_from_symbol(p, n_fine)?,
        _ => toeplitz_from_symbol(p, n_fine)?,
    };
    Ok(t.mat.matmul(&downsample_matrix(n_fine).transpose()))
}

/// Galerkin coarse operator `K T(r) A T(p) K^T`, annotated with the coarse
/// symbol when the fine level carries one.
pub fn galerkin_product(a: &LevelMatrix, tp: &TransferPair, check_pd: bool) -> Result<LevelMatrix> {
    let restrict = restriction_matrix(&tp.r, &a.n, a.structure)?;
    let prolong = prolongation_matrix(&tp.p, &a.n, a.structure)?;
    let coarse = restrict.matmul(&a.mat).matmul(&prolong);
    let n_coarse = coarse_size(&a.n);
    let symbol = match &a.symbol {
        Some(f) => Some(coarsen_symbol(f, &tp.r, &tp.p)?),
        None => None,
    };
    let structure = match a.structure {
        Structure::Circulant => Structure::Circulant,
        _ => Structure::General,
    };
    let scale = coarse.max_abs();
    let symmetric = coarse.is_symmetric(1e-12 * (1.0 + scale));
    if check_pd {
        let lambda_min = smallest_eigenvalue_estimate(&coarse, 200);
        if lambda_min < -1e-10 * (1.0 + scale) {
            return Err(Error::UnsupportedAnalysis(format!(
                "coarse operator lost positive definiteness (lambda_min ~ {lambda_min:.3e})"
            )));
        }
    }
    Ok(LevelMatrix {
        mat: coarse,
        n: n_coarse,
        structure,
        symbol,
        symmetric,
        low_rank: None,
    })
}

/// Smallest-eigenvalue estimate for a symmetric matrix by a fixed number of
/// power-iteration steps on `lambda_max I - A`.
pub fn smallest_eigenvalue_estimate(a: &SparseMatrix, steps: usize) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    let normalize = |v: &mut Vec<f64>| {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in v.iter_mut() {
                *x /= norm;
            }
        }
    };
    // Deterministic start vector with no structural zero pattern.
    let start: Vec<f64> = (0..n).map(|i| (0.7 + i as f64).sin() + 0.1).collect();

    let mut v = start.clone();
    normalize(&mut v);
    let mut lambda_max = 0.0;
    for _ in 0..steps {
        let mut w = a.matvec(&v);
        lambda_max = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        normalize(&mut w);
        v = w;
    }
    let shift = lambda_max.abs() * 1.5 + 1.0;
    let mut u = start;
    normalize(&mut u);
    let mut mu = 0.0;
    for _ in 0..steps {
        let au = a.matvec(&u);
        let mut w: Vec<f64> = u.iter().zip(&au).map(|(x, y)| shift * x - y).collect();
        mu = u.iter().zip(&w).map(|(x, y)| x * y).sum();
        normalize(&mut w);
        u = w;
    }
    shift - mu
}
