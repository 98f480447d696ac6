//! Trigonometric polynomial symbols: the generating functions of Toeplitz
//! and circulant matrices and of grid transfer operators.
//!
//! A [`Symbol`] stores finitely many Fourier coefficients `a_j` on
//! multi-indices `j` and evaluates as `f(x) = sum_j a_j e^{-i<j|x>}`.
//! Everything else in the crate (matrix construction, coarse-symbol
//! tracking, optimality analysis) is derived from this representation.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Relative tolerance for zero detection, against the coefficient 1-norm.
pub const TOL_ZERO: f64 = 1e-9;

/// Relative tolerance below which a coefficient is dropped at normalization.
const COEFF_DROP: f64 = 1e-14;

/// A d-variate trigonometric polynomial with finite support,
/// `f(x) = sum_j a_j e^{-i<j|x>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
    /// One-dimensional factors when the symbol was built as a tensor
    /// product; enables per-dimension order analysis for d > 1.
    factors: Option<Vec<Symbol>>,
}

impl Symbol {
    pub fn new<I>(dim: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (j, a) in entries {
            assert_eq!(j.len(), dim, "multi-index length must equal dim");
            *coeffs.entry(j).or_insert(Complex64::ZERO) += a;
        }
        let mut s = Symbol {
            dim,
            coeffs,
            factors: None,
        };
        s.normalize();
        s
    }

    /// One-dimensional symbol from real coefficients; `coeffs[k]` is the
    /// coefficient at index `offset + k`.
    pub fn from_coeffs_1d(offset: i64, coeffs: &[f64]) -> Self {
        Symbol::new(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (vec![offset + k as i64], Complex64::new(c, 0.0))),
        )
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Symbol::new(dim, [(vec![0; dim], Complex64::new(value, 0.0))])
    }

    pub fn one(dim: usize) -> Self {
        Symbol::constant(dim, 1.0)
    }

    pub fn zero(dim: usize) -> Self {
        Symbol {
            dim,
            coeffs: BTreeMap::new(),
            factors: None,
        }
    }

    /// Tensor product of one-dimensional symbols; records the factors so
    /// that order analysis stays available per dimension.
    pub fn tensor(factors: &[Symbol]) -> Result<Self> {
        for f in factors {
            if f.dim != 1 {
                return Err(Error::DimensionMismatch(f.dim, 1));
            }
        }
        let dim = factors.len();
        let mut coeffs: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        let mut stack: Vec<(Vec<i64>, Complex64)> = vec![(Vec::new(), Complex64::ONE)];
        for f in factors {
            let mut next = Vec::with_capacity(stack.len() * f.coeffs.len());
            for (prefix, a) in &stack {
                for (j, b) in &f.coeffs {
                    let mut idx = prefix.clone();
                    idx.push(j[0]);
                    next.push((idx, a * b));
                }
            }
            stack = next;
        }
        for (j, a) in stack {
            coeffs.insert(j, a);
        }
        let mut s = Symbol {
            dim,
            coeffs,
            factors: Some(factors.to_vec()),
        };
        s.normalize();
        Ok(s)
    }

    fn normalize(&mut self) {
        let scale = self
            .coeffs
            .values()
            .map(|a| a.norm())
            .fold(0.0_f64, f64::max);
        if scale == 0.0 {
            self.coeffs.clear();
            return;
        }
        self.coeffs.retain(|_, a| a.norm() > COEFF_DROP * scale);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&[i64], Complex64)> {
        self.coeffs.iter().map(|(j, &a)| (j.as_slice(), a))
    }

    pub fn coeff(&self, j: &[i64]) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn num_coeffs(&self) -> usize {
        self.coeffs.len()
    }

    /// Per-dimension maximum |j| over the support.
    pub fn support_radius(&self) -> Vec<i64> {
        let mut r = vec![0_i64; self.dim];
        for j in self.coeffs.keys() {
            for (k, &jk) in j.iter().enumerate() {
                r[k] = r[k].max(jk.abs());
            }
        }
        r
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm()).sum()
    }

    /// `a_{-j} = conj(a_j)` for every stored index, i.e. the symbol is
    /// real-valued on the torus.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|(j, &a)| {
            let neg: Vec<i64> = j.iter().map(|&v| -v).collect();
            (self.coeff(&neg) - a.conj()).norm() <= tol * (1.0 + a.norm())
        })
    }

    /// `f(x) = sum_j a_j e^{-i<j|x>}`.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim);
        let mut acc = Complex64::ZERO;
        for (j, &a) in &self.coeffs {
            let phase: f64 = j.iter().zip(x).map(|(&jk, &xk)| jk as f64 * xk).sum();
            acc += a * Complex64::from_polar(1.0, -phase);
        }
        acc
    }

    pub fn eval_1d(&self, x: f64) -> Complex64 {
        self.eval(&[x])
    }

    pub fn add(&self, other: &Symbol) -> Result<Symbol> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(Symbol::new(
            self.dim,
            self.coeffs
                .iter()
                .map(|(j, &a)| (j.clone(), a))
                .chain(other.coeffs.iter().map(|(j, &a)| (j.clone(), a))),
        ))
    }

    pub fn sub(&self, other: &Symbol) -> Result<Symbol> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, alpha: f64) -> Symbol {
        Symbol::new(
            self.dim,
            self.coeffs.iter().map(|(j, &a)| (j.clone(), a * alpha)),
        )
    }

    /// Coefficient convolution: pointwise product of the symbols.
    pub fn mul(&self, other: &Symbol) -> Result<Symbol> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut entries = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (j, &a) in &self.coeffs {
            for (k, &b) in &other.coeffs {
                let idx: Vec<i64> = j.iter().zip(k).map(|(&u, &v)| u + v).collect();
                entries.push((idx, a * b));
            }
        }
        Ok(Symbol::new(self.dim, entries))
    }

    pub fn powi(&self, e: u32) -> Symbol {
        let mut acc = Symbol::one(self.dim);
        for _ in 0..e {
            acc = acc.mul(self).expect("same dim");
        }
        acc
    }

    /// m-th partial derivative along dimension `k`: each coefficient `a_j`
    /// maps to `a_j (-i j_k)^m`.
    pub fn derivative(&self, k: usize, m: usize) -> Symbol {
        assert!(k < self.dim);
        if m == 0 {
            return self.clone();
        }
        Symbol::new(
            self.dim,
            self.coeffs.iter().map(|(j, &a)| {
                let factor = Complex64::new(0.0, -(j[k] as f64)).powu(m as u32);
                (j.clone(), a * factor)
            }),
        )
    }

    /// Zero-detection tolerance for this symbol.
    pub fn tol_zero(&self) -> f64 {
        TOL_ZERO * self.l1_norm()
    }

    /// Order of the zero of the symbol at `x0`: the smallest `m >= 1` whose
    /// derivative does not vanish there. Returns 0 when `x0` is not a zero.
    ///
    /// Supported at d=1 directly and for tensor-product symbols per factor;
    /// general multivariate symbols are rejected.
    pub fn zero_order_at(&self, x0: &[f64]) -> Result<usize> {
        if x0.len() != self.dim {
            return Err(Error::DimensionMismatch(x0.len(), self.dim));
        }
        if self.dim == 1 {
            return self.zero_order_1d(x0[0]);
        }
        match &self.factors {
            Some(factors) => {
                let mut total = 0;
                for (f, &x) in factors.iter().zip(x0) {
                    total += f.zero_order_1d(x)?;
                }
                Ok(total)
            }
            None => Err(Error::UnsupportedAnalysis(
                "order analysis for d > 1 requires a tensor-product symbol".into(),
            )),
        }
    }

    fn zero_order_1d(&self, x0: f64) -> Result<usize> {
        if self.coeffs.is_empty() {
            return Err(Error::ZeroSymbol);
        }
        if self.eval(&[x0]).norm() > self.tol_zero() {
            return Ok(0);
        }
        let radius = self.support_radius()[0];
        let max_order = (2 * radius + 2) as usize;
        for m in 1..=max_order {
            let d = self.derivative(0, m);
            let scale = d.l1_norm();
            if scale == 0.0 {
                return Err(Error::ZeroSymbol);
            }
            if d.eval(&[x0]).norm() > TOL_ZERO * scale {
                return Ok(m);
            }
        }
        Err(Error::UnsupportedAnalysis(format!(
            "zero order at {x0} exceeds {max_order}; symbol may vanish identically"
        )))
    }

    /// Low frequency order: the order of contact of the symbol with 1 at
    /// the origin. Returns 0 when `g(0) != 1`.
    pub fn lf_order(&self) -> Result<usize> {
        let origin = vec![0.0; self.dim];
        if (self.eval(&origin) - Complex64::ONE).norm() > self.tol_zero() {
            return Ok(0);
        }
        let shifted = self.sub(&Symbol::one(self.dim))?;
        if self.dim == 1 {
            shifted.zero_order_at(&origin)
        } else {
            // g - 1 is not separable in general; fall back to the 1-D path
            // along each axis and take the minimum.
            let mut min_order = usize::MAX;
            for k in 0..self.dim {
                let axis = shifted.restrict_to_axis(k);
                min_order = min_order.min(axis.zero_order_at(&[0.0])?);
            }
            Ok(min_order)
        }
    }

    /// High frequency order: the minimum order of the zeros of the symbol
    /// at the mirror points of the origin.
    pub fn hf_order(&self) -> Result<usize> {
        let origin = vec![0.0; self.dim];
        let mut min_order = usize::MAX;
        for y in mirror_points(&origin) {
            min_order = min_order.min(self.zero_order_at(&y)?);
        }
        Ok(min_order)
    }

    /// Restriction of the symbol to the `k`-th coordinate axis
    /// (all other variables set to 0).
    fn restrict_to_axis(&self, k: usize) -> Symbol {
        Symbol::new(
            1,
            self.coeffs.iter().map(|(j, &a)| (vec![j[k]], a)),
        )
    }
}

/// Role of a transfer operator when normalizing for order analysis: the
/// prolongation matrix carries an extra `2^d` factor over its symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferRole {
    Restriction,
    Prolongation,
}

/// LF/HF orders of a transfer symbol, accounting for the prolongation
/// scaling convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub lf: usize,
    pub hf: usize,
}

pub fn order_report(g: &Symbol, role: TransferRole) -> Result<OrderReport> {
    let normalized = match role {
        TransferRole::Restriction => g.clone(),
        TransferRole::Prolongation => g.scale(0.5_f64.powi(g.dim() as i32)),
    };
    Ok(OrderReport {
        lf: normalized.lf_order()?,
        hf: normalized.hf_order()?,
    })
}

/// A zero of a symbol: location and per-dimension order (a single entry
/// at d=1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroInfo {
    pub location: Vec<f64>,
    pub order: Vec<usize>,
}

impl ZeroInfo {
    pub fn new_1d(x: f64, order: usize) -> Self {
        ZeroInfo {
            location: vec![x],
            order: vec![order],
        }
    }

    pub fn total_order(&self) -> usize {
        self.order.iter().sum()
    }
}

/// Reduce an angle into `[-pi, pi)`; pi is stored as -pi.
pub fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = (x + std::f64::consts::PI).rem_euclid(two_pi) - std::f64::consts::PI;
    if (y - std::f64::consts::PI).abs() < 1e-12 {
        y = -std::f64::consts::PI;
    }
    y
}

/// The corner set `Omega(x) = { y : y_j in {x_j, pi + x_j} }`, reduced
/// into `[-pi, pi)` componentwise. The first entry is `x` itself.
pub fn omega_points(x: &[f64]) -> Vec<Vec<f64>> {
    let d = x.len();
    let mut out = Vec::with_capacity(1 << d);
    for mask in 0..(1_u32 << d) {
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(k, &xk)| {
                if mask & (1 << k) != 0 {
                    wrap_to_pi(xk + std::f64::consts::PI)
                } else {
                    wrap_to_pi(xk)
                }
            })
            .collect();
        out.push(y);
    }
    out
}

/// The mirror points `M(x) = Omega(x) \ {x}`; `|M(x)| = 2^d - 1`.
pub fn mirror_points(x: &[f64]) -> Vec<Vec<f64>> {
    omega_points(x).into_iter().skip(1).collect()
}

/// Galerkin coarse-symbol map: the symbol of `K C(r) C(f) C(p) K^T`,
/// `fhat(x) = 2^{-d} sum_{y in Omega(x/2)} r(y) f(y) p(y)`.
///
/// In coefficients: `fhat`'s coefficient at `k` is the `2k`-th coefficient
/// of the product `r f p`.
pub fn coarsen_symbol(f: &Symbol, r: &Symbol, p: &Symbol) -> Result<Symbol> {
    let rfp = r.mul(f)?.mul(p)?;
    let entries = rfp
        .coeffs
        .iter()
        .filter(|(j, _)| j.iter().all(|&v| v % 2 == 0))
        .map(|(j, &a)| (j.iter().map(|&v| v / 2).collect::<Vec<i64>>(), a));
    Ok(Symbol::new(f.dim(), entries))
}

/// Zero relocation across one Galerkin coarsening step: the zero `x0` of
/// `f` moves to `2 x0 mod 2pi` on the coarse symbol with unchanged order,
/// provided the transfer pair controls every mirror point of `x0`.
pub fn track_zero(f: &Symbol, z: &ZeroInfo, r: &Symbol, p: &Symbol) -> Result<ZeroInfo> {
    let f_order = z.total_order();
    if f.eval(&z.location).norm() > f.tol_zero() {
        return Err(Error::NoZero);
    }
    for y in mirror_points(&z.location) {
        let ro = r.zero_order_at(&y)?;
        let po = p.zero_order_at(&y)?;
        if ro + po < f_order {
            return Err(Error::ConditionViolated(y[0], ro, po, f_order));
        }
    }
    let location: Vec<f64> = z.location.iter().map(|&x| wrap_to_pi(2.0 * x)).collect();
    Ok(ZeroInfo {
        location,
        order: z.order.clone(),
    })
}

/// Factor `((1 + e^{-ix})/2)^m` out of a one-dimensional symbol.
///
/// Returns the quotient `nu` with `g = ((1+e^{-ix})/2)^m nu`; fails when
/// the division leaves a nonzero remainder, i.e. when the symbol does not
/// vanish at pi with order at least `m`.
pub fn hf_factorize(g: &Symbol, m: usize) -> Result<Symbol> {
    if g.dim() != 1 {
        return Err(Error::UnsupportedAnalysis(
            "HF factorization is one-dimensional".into(),
        ));
    }
    if g.coeffs.is_empty() {
        return Err(Error::ZeroSymbol);
    }
    let j_min = g.coeffs.keys().map(|j| j[0]).min().unwrap();
    let j_max = g.coeffs.keys().map(|j| j[0]).max().unwrap();
    let deg = (j_max - j_min) as usize;
    if deg < m {
        return Err(Error::UnsupportedAnalysis(format!(
            "degree {deg} too small to factor out order {m}"
        )));
    }
    // Laurent shift: work with the ordinary polynomial in z = e^{-ix}.
    let mut c: Vec<Complex64> = (0..=deg as i64)
        .map(|k| g.coeff(&[j_min + k]))
        .collect();
    let tol = 1e-12 * g.l1_norm().max(1.0);
    for _ in 0..m {
        // Divide ascending coefficients by (1 + z).
        let n = c.len() - 1;
        let mut q = vec![Complex64::ZERO; n];
        q[n - 1] = c[n];
        for i in (1..n).rev() {
            q[i - 1] = c[i] - q[i];
        }
        let remainder = c[0] - q[0];
        if remainder.norm() > tol {
            return Err(Error::UnsupportedAnalysis(format!(
                "nonzero remainder {:.3e} dividing by (1+e^-ix)",
                remainder.norm()
            )));
        }
        c = q;
    }
    let scale = 2.0_f64.powi(m as i32);
    Ok(Symbol::new(
        1,
        c.iter()
            .enumerate()
            .map(|(k, &a)| (vec![j_min + k as i64], a * scale)),
    ))
}

/// Standard transfer symbol families.
pub mod families {
    use super::*;

    /// B-spline transfer symbol of order `m`. The centered variant applies
    /// the shift `e^{i x floor(m/2)}` per dimension so the mask row
    /// `binom(m, k) / 2^m` is centered at the origin.
    pub fn bspline_symbol(m: usize, d: usize, centered: bool) -> Symbol {
        assert!(m >= 1);
        let shift = if centered { (m / 2) as i64 } else { 0 };
        let scale = 0.5_f64.powi(m as i32);
        let mut row = Vec::with_capacity(m + 1);
        let mut binom = 1.0_f64;
        for k in 0..=m {
            row.push((
                vec![k as i64 - shift],
                Complex64::new(binom * scale, 0.0),
            ));
            binom = binom * (m - k) as f64 / (k + 1) as f64;
        }
        let one_d = Symbol::new(1, row);
        if d == 1 {
            one_d
        } else {
            Symbol::tensor(&vec![one_d; d]).expect("1-D factors")
        }
    }

    /// Cubic interpolation symbol, stencil `(1/32)[-1 0 9 16 9 0 -1]`;
    /// factors as `phi_4(x) (2 - cos x)`.
    pub fn cubic_interp_symbol(d: usize) -> Symbol {
        let one_d = Symbol::from_coeffs_1d(
            -3,
            &[
                -1.0 / 32.0,
                0.0,
                9.0 / 32.0,
                16.0 / 32.0,
                9.0 / 32.0,
                0.0,
                -1.0 / 32.0,
            ],
        );
        if d == 1 {
            one_d
        } else {
            Symbol::tensor(&vec![one_d; d]).expect("1-D factors")
        }
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum PowerSign {
        /// `2 + 2 cos x` per dimension (zero at pi).
        Plus,
        /// `2 - 2 cos x` per dimension (zero at the origin).
        Minus,
    }

    /// `(2 ∓ 2 cos x)^s` per dimension; vanishes with order `2s` at the
    /// origin (`Minus`) or at pi (`Plus`).
    pub fn power_symbol(sign: PowerSign, s: usize, d: usize) -> Symbol {
        assert!(s >= 1);
        let off = match sign {
            PowerSign::Plus => 1.0,
            PowerSign::Minus => -1.0,
        };
        let one_d = Symbol::from_coeffs_1d(-1, &[off, 2.0, off]).powi(s as u32);
        if d == 1 {
            one_d
        } else {
            Symbol::tensor(&vec![one_d; d]).expect("1-D factors")
        }
    }

    /// `(2 - 2 cos x)^q` per dimension: the constant-coefficient
    /// discretization symbol of an elliptic operator of order `2q`.
    pub fn laplace_power(q: usize, d: usize) -> Symbol {
        power_symbol(PowerSign::Minus, q, d)
    }

    /// High-pass transfer family
    /// `mu_q(x) = 2^{-dq} prod_j (1 - e^{-i x_j})^{floor(q/2)} e^{i x_j floor(q/2)}`,
    /// exposed exactly as defined.
    pub fn mu_symbol(q: usize, d: usize) -> Symbol {
        assert!(q >= 1);
        let half = q / 2;
        let base = Symbol::new(
            1,
            [
                (vec![0], Complex64::ONE),
                (vec![1], -Complex64::ONE),
            ],
        )
        .powi(half as u32);
        // Shift by e^{i x floor(q/2)} and apply the 2^{-q} scaling per dim.
        let shifted = Symbol::new(
            1,
            base.coeffs
                .iter()
                .map(|(j, &a)| (vec![j[0] - half as i64], a)),
        )
        .scale(0.5_f64.powi(q as i32));
        if d == 1 {
            shifted
        } else {
            Symbol::tensor(&vec![shifted; d]).expect("1-D factors")
        }
    }
}

// JSON form: {"dim": d, "entries": [[[j...], re, im], ...]} with entries
// canonicalized lexicographically by multi-index.
#[derive(Serialize, Deserialize)]
struct SymbolJson {
    dim: usize,
    entries: Vec<(Vec<i64>, f64, f64)>,
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .coeffs
            .iter()
            .map(|(j, a)| (j.clone(), a.re, a.im))
            .collect();
        SymbolJson {
            dim: self.dim,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SymbolJson::deserialize(deserializer)?;
        for (j, _, _) in &raw.entries {
            if j.len() != raw.dim {
                return Err(D::Error::custom("multi-index length differs from dim"));
            }
        }
        Ok(Symbol::new(
            raw.dim,
            raw.entries
                .into_iter()
                .map(|(j, re, im)| (j, Complex64::new(re, im))),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;
    use std::f64::consts::PI;

    fn laplace() -> Symbol {
        // 2 - 2 cos x
        Symbol::from_coeffs_1d(-1, &[-1.0, 2.0, -1.0])
    }

    #[test]
    fn eval_matches_direct_summation() {
        let s = laplace();
        assert!(s.eval_1d(0.0).norm() < 1e-13);
        assert!((s.eval_1d(PI) - Complex64::new(4.0, 0.0)).norm() < 1e-13);
        let gc = cubic_interp_symbol(1);
        assert!((gc.eval_1d(0.0) - Complex64::ONE).norm() < 1e-13);
    }

    #[test]
    fn mul_is_pointwise_product() {
        let a = laplace();
        let b = power_symbol(PowerSign::Plus, 1, 1);
        let prod = a.mul(&b).unwrap();
        // (2-2cos)(2+2cos) = 2 - 2cos(2x)
        assert!((prod.coeff(&[0]) - Complex64::new(2.0, 0.0)).norm() < 1e-13);
        assert!((prod.coeff(&[2]) + Complex64::ONE).norm() < 1e-13);
        assert!((prod.coeff(&[-2]) + Complex64::ONE).norm() < 1e-13);
        assert_eq!(prod.num_coeffs(), 3);

        let id = a.mul(&Symbol::one(1)).unwrap();
        assert_eq!(id, a);

        // (2+2cos)^2 = {0:6, ±1:4, ±2:1}
        let sq = power_symbol(PowerSign::Plus, 2, 1);
        assert!((sq.coeff(&[0]) - Complex64::new(6.0, 0.0)).norm() < 1e-13);
        assert!((sq.coeff(&[1]) - Complex64::new(4.0, 0.0)).norm() < 1e-13);
        assert!((sq.coeff(&[2]) - Complex64::ONE).norm() < 1e-13);
    }

    #[test]
    fn derivative_coefficients() {
        let s = laplace();
        let d1 = s.derivative(0, 1);
        // d/dx (2 - 2cos x) = 2 sin x -> coeffs {1: i, -1: -i}
        assert!((d1.coeff(&[1]) - Complex64::new(0.0, 1.0)).norm() < 1e-13);
        assert!((d1.coeff(&[-1]) - Complex64::new(0.0, -1.0)).norm() < 1e-13);
        assert_eq!(s.derivative(0, 0), s);
        let d2 = s.derivative(0, 2);
        assert!((d2.eval_1d(0.0) - Complex64::new(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let s = cubic_interp_symbol(1);
        let d1 = s.derivative(0, 1);
        for &x in &[0.3, -1.1, 2.7] {
            let h = 1e-6;
            let fd = (s.eval_1d(x + h) - s.eval_1d(x - h)) / (2.0 * h);
            let exact = d1.eval_1d(x);
            assert!((fd - exact).norm() <= 1e-6 * (1.0 + exact.norm()));
        }
    }

    #[test]
    fn zero_orders() {
        let cubed = power_symbol(PowerSign::Plus, 3, 1);
        assert_eq!(cubed.zero_order_at(&[-PI]).unwrap(), 6);
        assert_eq!(laplace().zero_order_at(&[0.0]).unwrap(), 2);
        assert_eq!(laplace().zero_order_at(&[PI / 2.0]).unwrap(), 0);
        for s in 1..=4 {
            let minus = power_symbol(PowerSign::Minus, s, 1);
            assert_eq!(minus.zero_order_at(&[0.0]).unwrap(), 2 * s);
            let plus = power_symbol(PowerSign::Plus, s, 1);
            assert_eq!(plus.zero_order_at(&[-PI]).unwrap(), 2 * s);
        }
    }

    #[test]
    fn mirror_point_sets() {
        assert_eq!(mirror_points(&[0.0]), vec![vec![-PI]]);
        let m = mirror_points(&[-PI]);
        assert_eq!(m.len(), 1);
        assert!(m[0][0].abs() < 1e-12);
        let m2 = mirror_points(&[0.0, 0.0]);
        assert_eq!(m2.len(), 3);
        // involution on the corner set
        for y in &m2 {
            let back = mirror_points(y);
            assert!(back.iter().any(|b| b
                .iter()
                .zip(&[0.0, 0.0])
                .all(|(u, v)| (u - v).abs() < 1e-12)));
        }
        assert_eq!(omega_points(&[0.0, 0.0]).len(), 4);
    }

    #[test]
    fn lf_hf_order_table() {
        let phi2 = bspline_symbol(2, 1, true);
        assert_eq!(phi2.lf_order().unwrap(), 2);
        assert_eq!(phi2.hf_order().unwrap(), 2);
        let phi4 = bspline_symbol(4, 1, true);
        assert_eq!(phi4.lf_order().unwrap(), 2);
        assert_eq!(phi4.hf_order().unwrap(), 4);
        let gc = cubic_interp_symbol(1);
        assert_eq!(gc.lf_order().unwrap(), 4);
        assert_eq!(gc.hf_order().unwrap(), 4);
    }

    #[test]
    fn odd_order_bspline_lf_is_reported() {
        // Centered phi_3 has LF = 1; reported, not asserted equal to 2.
        let phi3 = bspline_symbol(3, 1, true);
        let lf = phi3.lf_order().unwrap();
        assert!(lf >= 1);
        assert_eq!(phi3.hf_order().unwrap(), 3);
    }

    #[test]
    fn bspline_masks() {
        let phi2 = bspline_symbol(2, 1, true);
        assert!((phi2.coeff(&[0]) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((phi2.coeff(&[1]) - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!((phi2.coeff(&[-1]) - Complex64::new(0.25, 0.0)).norm() < 1e-15);

        let phi4 = bspline_symbol(4, 1, true);
        for (j, v) in [(-2, 1.0), (-1, 4.0), (0, 6.0), (1, 4.0), (2, 1.0)] {
            assert!((phi4.coeff(&[j]) - Complex64::new(v / 16.0, 0.0)).norm() < 1e-15);
        }

        let haar = bspline_symbol(1, 1, false);
        assert!((haar.coeff(&[0]) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((haar.coeff(&[1]) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cubic_interp_factorization() {
        let gc = cubic_interp_symbol(1);
        let phi4 = bspline_symbol(4, 1, true);
        let nu = Symbol::from_coeffs_1d(-1, &[-0.5, 2.0, -0.5]); // 2 - cos x
        let prod = phi4.mul(&nu).unwrap();
        for j in -3..=3 {
            assert!((prod.coeff(&[j]) - gc.coeff(&[j])).norm() < 1e-15);
        }
        assert!(gc.eval_1d(-PI).norm() < 1e-12);
        assert_eq!(gc.zero_order_at(&[-PI]).unwrap(), 4);
    }

    #[test]
    fn hf_factorization_terminates() {
        for (g, m) in [
            (bspline_symbol(2, 1, true), 2),
            (bspline_symbol(4, 1, true), 4),
            (cubic_interp_symbol(1), 4),
        ] {
            let nu = hf_factorize(&g, m).unwrap();
            // nu(0) = g(0) since the factored term is 1 at the origin.
            assert!((nu.eval_1d(0.0) - g.eval_1d(0.0)).norm() < 1e-12);
            // nu must not vanish at the mirror point of the origin.
            assert!(nu.eval_1d(-PI).norm() > 1e-6);
        }
    }

    #[test]
    fn coarsen_laplacian_fixed_point() {
        let f = laplace();
        let rp = power_symbol(PowerSign::Plus, 1, 1);
        let coarse = coarsen_symbol(&f, &rp, &rp).unwrap();
        let expected = f.scale(2.0);
        for j in -1..=1 {
            assert!((coarse.coeff(&[j]) - expected.coeff(&[j])).norm() < 1e-13);
        }
        assert_eq!(coarse.zero_order_at(&[0.0]).unwrap(), 2);
    }

    #[test]
    fn coarsen_relocates_zero_from_pi() {
        let f = power_symbol(PowerSign::Plus, 1, 1);
        let rp = laplace();
        let coarse = coarsen_symbol(&f, &rp, &rp).unwrap();
        // 4 - 4 cos x, zero relocated to the origin with order 2.
        assert!((coarse.coeff(&[0]) - Complex64::new(4.0, 0.0)).norm() < 1e-13);
        assert!((coarse.coeff(&[1]) + Complex64::new(2.0, 0.0)).norm() < 1e-13);
        assert_eq!(coarse.zero_order_at(&[0.0]).unwrap(), 2);
    }

    #[test]
    fn coarsen_with_identity_transfers_averages_corners() {
        let f = cubic_interp_symbol(1);
        let one = Symbol::one(1);
        let coarse = coarsen_symbol(&f, &one, &one).unwrap();
        for &x in &[0.0, 0.7, -2.1, 3.0] {
            let direct: Complex64 = omega_points(&[x / 2.0])
                .iter()
                .map(|y| f.eval(y))
                .sum::<Complex64>()
                * 0.5;
            assert!((coarse.eval_1d(x) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn coarsen_matches_corner_sum_oracle() {
        let f = power_symbol(PowerSign::Plus, 2, 1);
        let r = laplace();
        let p = power_symbol(PowerSign::Minus, 2, 1);
        let coarse = coarsen_symbol(&f, &r, &p).unwrap();
        let rfp = r.mul(&f).unwrap().mul(&p).unwrap();
        for k in 0..32 {
            let x = -PI + 2.0 * PI * k as f64 / 32.0;
            let direct: Complex64 = omega_points(&[x / 2.0])
                .iter()
                .map(|y| rfp.eval(y))
                .sum::<Complex64>()
                * 0.5;
            assert!((coarse.eval_1d(x) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn coarsen_is_linear_in_f() {
        let f = laplace();
        let g = cubic_interp_symbol(1);
        let r = power_symbol(PowerSign::Plus, 1, 1);
        let p = power_symbol(PowerSign::Plus, 2, 1);
        let combo = f.scale(1.25).add(&g.scale(-0.5)).unwrap();
        let lhs = coarsen_symbol(&combo, &r, &p).unwrap();
        let rhs = coarsen_symbol(&f, &r, &p)
            .unwrap()
            .scale(1.25)
            .add(&coarsen_symbol(&g, &r, &p).unwrap().scale(-0.5))
            .unwrap();
        for &x in &[0.0, 0.4, -1.9, 2.2] {
            assert!((lhs.eval_1d(x) - rhs.eval_1d(x)).norm() < 1e-12);
        }
    }

    #[test]
    fn track_zero_cases() {
        let f = power_symbol(PowerSign::Plus, 2, 1);
        let r = laplace();
        let p = power_symbol(PowerSign::Minus, 2, 1);
        let z = ZeroInfo::new_1d(-PI, 4);
        let tracked = track_zero(&f, &z, &r, &p).unwrap();
        assert!(tracked.location[0].abs() < 1e-12);
        assert_eq!(tracked.total_order(), 4);

        let f0 = laplace();
        let rp = power_symbol(PowerSign::Plus, 1, 1);
        let z0 = ZeroInfo::new_1d(0.0, 2);
        let t0 = track_zero(&f0, &z0, &rp, &rp).unwrap();
        assert!(t0.location[0].abs() < 1e-12);
        assert_eq!(t0.total_order(), 2);

        // Violated conditions at the mirror point are rejected.
        let weak = Symbol::one(1);
        assert!(track_zero(&f0, &z0, &weak, &weak).is_err());
    }

    #[test]
    fn track_zero_from_half_pi() {
        // f = 2 - 2 sin x: unique zero at pi/2 of order 2; it moves to pi,
        // stored as -pi.
        let f = Symbol::new(
            1,
            [
                (vec![0], Complex64::new(2.0, 0.0)),
                (vec![1], Complex64::new(0.0, -1.0)),
                (vec![-1], Complex64::new(0.0, 1.0)),
            ],
        );
        assert_eq!(f.zero_order_at(&[PI / 2.0]).unwrap(), 2);
        // r = p = 2 + 2 sin x vanishes at the mirror point -pi/2 with order 2.
        let rp = Symbol::new(
            1,
            [
                (vec![0], Complex64::new(2.0, 0.0)),
                (vec![1], Complex64::new(0.0, 1.0)),
                (vec![-1], Complex64::new(0.0, -1.0)),
            ],
        );
        let z = ZeroInfo::new_1d(PI / 2.0, 2);
        let tracked = track_zero(&f, &z, &rp, &rp).unwrap();
        assert!((tracked.location[0] + PI).abs() < 1e-12);
        assert_eq!(tracked.total_order(), 2);
        // Cross-check against the coarse symbol itself: 4 + 4 cos x.
        let coarse = coarsen_symbol(&f, &rp, &rp).unwrap();
        assert_eq!(coarse.zero_order_at(&[-PI]).unwrap(), 2);
    }

    #[test]
    fn power_symbol_coefficients() {
        let plus = power_symbol(PowerSign::Plus, 1, 1);
        assert!((plus.coeff(&[0]) - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!((plus.coeff(&[1]) - Complex64::ONE).norm() < 1e-15);
        let minus2 = power_symbol(PowerSign::Minus, 2, 1);
        assert!((minus2.coeff(&[0]) - Complex64::new(6.0, 0.0)).norm() < 1e-15);
        assert!((minus2.coeff(&[1]) + Complex64::new(4.0, 0.0)).norm() < 1e-15);
        assert!((minus2.coeff(&[2]) - Complex64::ONE).norm() < 1e-15);
        assert_eq!(plus.zero_order_at(&[-PI]).unwrap(), 2);
    }

    #[test]
    fn mu_family_as_written() {
        let mu2 = mu_symbol(2, 1);
        // 2^{-2} (1 - e^{-ix}) e^{ix}
        assert!((mu2.coeff(&[-1]) - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!((mu2.coeff(&[0]) + Complex64::new(0.25, 0.0)).norm() < 1e-15);
        // Its zero sits at the origin with order floor(q/2), not at pi:
        // exposed exactly as defined so the checker can report the failure.
        assert_eq!(mu2.zero_order_at(&[0.0]).unwrap(), 1);
        assert_eq!(mu2.zero_order_at(&[-PI]).unwrap(), 0);
    }

    #[test]
    fn prolongation_role_divides_by_two_pow_d() {
        // p = 2 phi_2 = 1 + cos x is the linear interpolation matrix symbol.
        let p = Symbol::from_coeffs_1d(-1, &[0.5, 1.0, 0.5]);
        let report = order_report(&p, TransferRole::Prolongation).unwrap();
        assert_eq!(report.lf, 2);
        assert_eq!(report.hf, 2);
    }

    #[test]
    fn real_valued_flag() {
        assert!(laplace().is_real_valued(1e-13));
        assert!(cubic_interp_symbol(1).is_real_valued(1e-13));
        assert!(!families::mu_symbol(2, 1).is_real_valued(1e-13));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let gc = cubic_interp_symbol(1);
        let text = serde_json::to_string(&gc).unwrap();
        let back: Symbol = serde_json::from_str(&text).unwrap();
        assert_eq!(back, gc);
        // Lexicographic entry order in the serialized form.
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let entries = v["entries"].as_array().unwrap();
        let indices: Vec<i64> = entries
            .iter()
            .map(|e| e[0][0].as_i64().unwrap())
            .collect();
        let mut sorted = indices.clone();
        sorted.sort();
        assert_eq!(indices, sorted);
    }

    #[test]
    fn tensor_product_order_analysis() {
        let one_d = laplace();
        let two_d = Symbol::tensor(&[one_d.clone(), one_d]).unwrap();
        assert_eq!(two_d.dim(), 2);
        assert_eq!(two_d.zero_order_at(&[0.0, 0.0]).unwrap(), 4);
        assert!(two_d.eval(&[0.0, 1.0]).norm() < 1e-12);
    }
}
