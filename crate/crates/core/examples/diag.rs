//! Scratch diagnostic: scored sweep over boundary closure, Gauss-Seidel
//! ordering, and smoothing steps for the fourth-order problem (Table 4).

use nalgebra::{DMatrix, DVector};
use symgrid::operators::toeplitz_from_symbol;
use symgrid::symbol::families::{bspline_symbol, cubic_interp_symbol};
use symgrid::symbol::Symbol;
use std::cell::RefCell;
thread_local!(static ALPHA: RefCell<f64> = const { RefCell::new(1.0) });
thread_local!(static THETA: RefCell<f64> = const { RefCell::new(1.0) });
thread_local!(static TAU4: RefCell<bool> = const { RefCell::new(false) });
thread_local!(static GCG: RefCell<f64> = const { RefCell::new(0.0) });
thread_local!(static CORR_STOP: RefCell<bool> = const { RefCell::new(false) });
// 0 = l2, 1 = max, 2 = l1 residual norm for the stopping test
thread_local!(static STOP_NORM: RefCell<u8> = const { RefCell::new(0) });
// fold out-of-range transfer stencil entries by even reflection about the
// boundary nodes (clamped-plate ghost values) instead of truncating
thread_local!(static REFL: RefCell<f64> = const { RefCell::new(0.0) });
// grid convention for coefficient sampling: false = j/(n+1), true = j/n
thread_local!(static GRIDN: RefCell<bool> = const { RefCell::new(false) });
// extra smoothing steps per level depth
thread_local!(static LADD: RefCell<usize> = const { RefCell::new(0) });
// 0 = reflect about ghost boundary node (node itself dropped as Dirichlet)
// 1 = reflect about the half point between ghost and first interior node
// 2 = reflect about the first/last interior node
thread_local!(static FOLDMODE: RefCell<u8> = const { RefCell::new(0) });
// per-(symbol, role) fold weights: spline-4 prolongation / restriction (mode 1)
thread_local!(static WP4P: RefCell<f64> = const { RefCell::new(0.0) });
thread_local!(static WP4R: RefCell<f64> = const { RefCell::new(0.0) });

fn vnorm(v: &DVector<f64>, which: u8) -> f64 {
    match which {
        1 => v.iter().fold(0.0f64, |m, x| m.max(x.abs())),
        2 => v.iter().map(|x| x.abs()).sum(),
        _ => v.norm(),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Tag {
    P2,
    P4,
    Gc,
}

const PAPER_EXP: [[usize; 7]; 5] = [
    [14, 32, 60, 98, 151, 215, 276],
    [9, 11, 17, 27, 38, 48, 57],
    [9, 13, 15, 20, 27, 34, 44],
    [7, 10, 14, 18, 22, 26, 29],
    [7, 9, 9, 12, 16, 20, 22],
];
const PAPER_SQ: [[usize; 7]; 5] = [
    [15, 33, 61, 101, 155, 221, 284],
    [10, 13, 17, 26, 35, 44, 53],
    [10, 17, 24, 27, 29, 36, 46],
    [9, 10, 13, 17, 20, 24, 27],
    [9, 11, 11, 13, 16, 19, 22],
];
const SIZES: [usize; 7] = [15, 31, 63, 127, 255, 511, 1023];

#[derive(Clone, Copy, PartialEq, Debug)]
enum Ord_ {
    F,
    B,
    OE,
    EO,
    C3,
    C4,
    S, // forward then backward within one smoothing step
}

fn order(n: usize, o: Ord_) -> Vec<usize> {
    match o {
        Ord_::F | Ord_::S => (0..n).collect(),
        Ord_::B => (0..n).rev().collect(),
        Ord_::EO => (0..n).step_by(2).chain((1..n).step_by(2)).collect(),
        Ord_::OE => (1..n).step_by(2).chain((0..n).step_by(2)).collect(),
        Ord_::C3 => (0..3).flat_map(|c| (c..n).step_by(3)).collect(),
        Ord_::C4 => (0..4).flat_map(|c| (c..n).step_by(4)).collect(),
    }
}

// banded GS sweep: bw = semibandwidth of the level matrix
fn gs(a: &DMatrix<f64>, x: &mut DVector<f64>, b: &DVector<f64>, idx: &[usize], bw: usize, o: Ord_) {
    let n = a.nrows();
    let pass = |x: &mut DVector<f64>, idx: &[usize]| {
        for &i in idx {
            let lo = i.saturating_sub(bw);
            let hi = (i + bw + 1).min(n);
            let mut acc = b[i];
            for j in lo..hi {
                if j != i {
                    acc -= a[(i, j)] * x[j];
                }
            }
            x[i] = acc / a[(i, i)];
        }
    };
    pass(x, idx);
    if o == Ord_::S {
        let rev: Vec<usize> = (0..n).rev().collect();
        pass(x, &rev);
    }
}

#[derive(Clone, Copy, Debug)]
enum Closure {
    SimpleSupport, // D2' diag(a) D2
    ToepSym,       // sqrt(a) T4 sqrt(a)
    ToepLeft,      // diag(a) T4
    Ext,           // D~' diag(a at 0..n+1) D~ with (n+2)xn extended D2
}

fn assemble(n: usize, closure: Closure, af: fn(f64) -> f64) -> DMatrix<f64> {
    let denom = if GRIDN.with(|c| *c.borrow()) { n } else { n + 1 } as f64;
    let grid: Vec<f64> = (1..=n).map(|j| j as f64 / denom).collect();
    match closure {
        Closure::SimpleSupport => {
            let d2 = toeplitz_from_symbol(&Symbol::from_coeffs_1d(-1, &[1.0, -2.0, 1.0]), &[n])
                .unwrap()
                .mat
                .to_dense();
            let diag = DMatrix::from_diagonal(&DVector::from_iterator(n, grid.iter().map(|&x| af(x))));
            &d2 * diag * &d2
        }
        Closure::ToepSym => {
            let t4 = toeplitz_from_symbol(
                &Symbol::from_coeffs_1d(-2, &[1.0, -4.0, 6.0, -4.0, 1.0]),
                &[n],
            )
            .unwrap()
            .mat
            .to_dense();
            let s = DMatrix::from_diagonal(&DVector::from_iterator(
                n,
                grid.iter().map(|&x| af(x).sqrt()),
            ));
            &s * t4 * &s
        }
        Closure::Ext => {
            let alpha = ALPHA.with(|c| *c.borrow());
            let d2 = toeplitz_from_symbol(&Symbol::from_coeffs_1d(-1, &[1.0, -2.0, 1.0]), &[n])
                .unwrap()
                .mat
                .to_dense();
            let diag = DMatrix::from_diagonal(&DVector::from_iterator(n, grid.iter().map(|&x| af(x))));
            let mut a = &d2 * diag * &d2;
            a[(0, 0)] += alpha * af(0.0);
            a[(n - 1, n - 1)] += alpha * af(1.0);
            a
        }
        Closure::ToepLeft => {
            let t4 = toeplitz_from_symbol(
                &Symbol::from_coeffs_1d(-2, &[1.0, -4.0, 6.0, -4.0, 1.0]),
                &[n],
            )
            .unwrap()
            .mat
            .to_dense();
            let diag = DMatrix::from_diagonal(&DVector::from_iterator(n, grid.iter().map(|&x| af(x))));
            diag * t4
        }
    }
}

struct Lvl {
    a: DMatrix<f64>,
    r: DMatrix<f64>,
    p: DMatrix<f64>,
    bw: usize,
    pre: Vec<usize>,
    post: Vec<usize>,
}

struct Hier {
    lvls: Vec<Lvl>,
    coarse: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

#[allow(clippy::too_many_arguments)]
fn build(n0: usize, a0: DMatrix<f64>, rs: &Symbol, rt: Tag, ps: &Symbol, pt: Tag, pre: Ord_, post: Ord_, coarsest: usize, redisc: Option<fn(f64) -> f64>) -> Hier {
    let tau4 = TAU4.with(|c| *c.borrow());
    let gcg = GCG.with(|c| *c.borrow());
    let mut lvls = Vec::new();
    let mut a = a0;
    let mut n = n0;
    while n > coarsest {
        let nc = (n - 1) / 2;
        let mut k = DMatrix::zeros(nc, n);
        for i in 0..nc {
            k[(i, 2 * i + 1)] = 1.0;
        }
        let refl_gc = REFL.with(|c| *c.borrow());
        let wp4p = WP4P.with(|c| *c.borrow());
        let wp4r = WP4R.with(|c| *c.borrow());
        // role: 0 = restriction, 1 = prolongation
        let tr = |s: &Symbol, t: Tag, role: u8| {
            let mut m = toeplitz_from_symbol(s, &[n]).unwrap().mat.to_dense();
            let (fm, refl) = match (t, role) {
                (Tag::Gc, _) => (0u8, refl_gc),
                (Tag::P4, 1) => (1u8, wp4p),
                (Tag::P4, 0) => (1u8, wp4r),
                _ => (0u8, 0.0),
            };
            if refl != 0.0 {
                // recover stencil coefficients from a middle row, then fold
                // ghost entries: boundary node itself stays zero (Dirichlet),
                // nodes beyond it reflect evenly (zero slope)
                let c = n / 2;
                let kmax = c.min(n - 1 - c);
                for i in 0..n {
                    for k in -(kmax as isize)..=(kmax as isize) {
                        let a_k = m[(c, (c as isize + k) as usize)];
                        if a_k == 0.0 {
                            continue;
                        }
                        let j = i as isize + k;
                        let nn = n as isize;
                        let jr = match fm {
                            1 => {
                                if j < 0 {
                                    Some(-j - 1)
                                } else if j > nn - 1 {
                                    Some(2 * nn - 1 - j)
                                } else {
                                    None
                                }
                            }
                            2 => {
                                if j < 0 {
                                    Some(-j)
                                } else if j > nn - 1 {
                                    Some(2 * (nn - 1) - j)
                                } else {
                                    None
                                }
                            }
                            _ => {
                                if j < -1 {
                                    Some(-j - 2)
                                } else if j > nn {
                                    Some(2 * nn - j)
                                } else {
                                    None
                                }
                            }
                        };
                        if let Some(jr) = jr {
                            if jr >= 0 && jr < nn {
                                m[(i, jr as usize)] += refl * a_k;
                            }
                        }
                    }
                }
            }
            if t == Tag::P4 && tau4 {
                m[(0, 0)] -= 1.0 / 16.0;
                m[(n - 1, n - 1)] -= 1.0 / 16.0;
            }
            if t == Tag::Gc && gcg != 0.0 {
                for (i, j) in [(0, 1), (1, 0), (n - 1, n - 2), (n - 2, n - 1)] {
                    m[(i, j)] += gcg / 32.0;
                }
            }
            m
        };
        let r = &k * tr(rs, rt, 0);
        let p = tr(ps, pt, 1) * k.transpose() * 2.0;
        let ac = match redisc {
            // Scale-consistent rediscretization: with weight-1 transfers the
            // Galerkin operator carries 1/8 per level relative to direct
            // assembly of the fourth-order difference.
            Some(af) => assemble(nc, Closure::Ext, af) / 8.0_f64.powi(lvls.len() as i32 + 1),
            None => &r * &a * &p,
        };
        lvls.push(Lvl {
            a,
            r,
            p,
            bw: n - 1, // refined below
            pre: order(n, pre),
            post: order(n, post),
        });
        a = ac;
        n = nc;
    }
    // detect actual semibandwidth per level
    let mut h = Hier {
        lvls,
        coarse: a.lu(),
    };
    for lv in &mut h.lvls {
        let m = lv.a.nrows();
        let mut bw = 0;
        for i in 0..m {
            for j in 0..m {
                if lv.a[(i, j)].abs() > 1e-13 {
                    bw = bw.max(i.abs_diff(j));
                }
            }
        }
        lv.bw = bw;
    }
    h
}

#[allow(clippy::too_many_arguments)]
fn vcycle(h: &Hier, l: usize, b: &DVector<f64>, x: &mut DVector<f64>, nu_pre: usize, nu_post: usize, pre: Ord_, post: Ord_) {
    if l == h.lvls.len() {
        *x = h.coarse.solve(b).unwrap();
        return;
    }
    let lv = &h.lvls[l];
    // optionally grow smoothing effort on coarser levels
    let ladd = LADD.with(|c| *c.borrow()) * l;
    for _ in 0..nu_pre + ladd {
        gs(&lv.a, x, b, &lv.pre, lv.bw, pre);
    }
    let res = b - &lv.a * &*x;
    let bc = &lv.r * res;
    let mut xc = DVector::zeros(bc.len());
    vcycle(h, l + 1, &bc, &mut xc, nu_pre, nu_post, pre, post);
    let theta = THETA.with(|c| *c.borrow());
    *x += &lv.p * xc * theta;
    for _ in 0..nu_post + ladd {
        gs(&lv.a, x, b, &lv.post, lv.bw, post);
    }
}

#[allow(clippy::too_many_arguments)]
fn count(h: &Hier, b: &DVector<f64>, xhat: &DVector<f64>, nu_pre: usize, nu_post: usize, pre: Ord_, post: Ord_) -> usize {
    if h.lvls.is_empty() {
        return 1;
    }
    let corr = CORR_STOP.with(|c| *c.borrow());
    let which = STOP_NORM.with(|c| *c.borrow());
    let mut x = DVector::zeros(b.len());
    let r0 = vnorm(b, if which >= 3 { 0 } else { which });
    for it in 1..=1500 {
        let prev = x.clone();
        vcycle(h, 0, b, &mut x, nu_pre, nu_post, pre, post);
        let done = if corr {
            (&x - prev).norm() <= 1e-9 * x.norm()
        } else {
            match which {
                // stop on true error against the known discrete solution
                3 => (&x - xhat).norm() <= 1e-9 * xhat.norm(),
                4 => (&x - xhat)
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs()))
                    <= 1e-9,
                _ => vnorm(&(b - &h.lvls[0].a * &x), which) <= 1e-9 * r0,
            }
        };
        if done {
            return it;
        }
    }
    1500
}

fn tol_ok(got: usize, want: usize) -> bool {
    let t = (4.0f64).max(0.2 * want as f64);
    (got as f64 - want as f64).abs() <= t
}

fn main() {
    let phi2 = bspline_symbol(2, 1, true);
    let phi4 = bspline_symbol(4, 1, true);
    let gc = cubic_interp_symbol(1);
    let pairs: Vec<(&Symbol, Tag, &Symbol, Tag)> = vec![
        (&phi2, Tag::P2, &phi2, Tag::P2),
        (&phi2, Tag::P2, &phi4, Tag::P4),
        (&phi2, Tag::P2, &gc, Tag::Gc),
        (&phi4, Tag::P4, &phi4, Tag::P4),
        (&phi4, Tag::P4, &gc, Tag::Gc),
    ];

    let exp_fn: fn(f64) -> f64 = |x| x.exp();
    let sq_fn: fn(f64) -> f64 = |x| (x - 0.5) * (x - 0.5);
    // (corner strength alpha, stop norm 0=l2/1=max, gc corner correction)
    let mut configs: Vec<(f64, (usize, usize, usize), f64, f64, f64)> = Vec::new();
    // tuple: (alpha, (nu_pre, nu_post, extra per level), gc fold, p4-prol fold, p4-restr fold)
    for &alpha in &[2.0] {
        for &nu in &[(3usize, 3usize, 0usize)] {
            for &wp in &[-0.5, -0.375, -0.25] {
                for &wr in &[-0.25, 0.0, 0.25, 0.5] {
                    configs.push((alpha, nu, 0.5, wp, wr));
                }
            }
        }
    }
    let verbose = false;

    let mut results: Vec<(String, usize, f64)> = Vec::new();
    for &(alpha, (np_, nq, ladd), gcg, wp, wr) in &configs {
        WP4P.with(|c| *c.borrow_mut() = wp);
        WP4R.with(|c| *c.borrow_mut() = wr);
        let (pre_ord, post_ord) = (Ord_::S, Ord_::S);
        let closure = Closure::Ext;
        ALPHA.with(|c| *c.borrow_mut() = alpha);
        CORR_STOP.with(|c| *c.borrow_mut() = false);
        STOP_NORM.with(|c| *c.borrow_mut() = 0);
        REFL.with(|c| *c.borrow_mut() = gcg);
        GRIDN.with(|c| *c.borrow_mut() = false);
        GCG.with(|c| *c.borrow_mut() = 0.0);
        LADD.with(|c| *c.borrow_mut() = ladd);
        let mut fails = 0usize;
        let mut dev = 0.0f64;
        let mut detail = String::new();
        for (af, label, paper) in [
            (exp_fn, "exp", &PAPER_EXP),
            (sq_fn, "sq", &PAPER_SQ),
        ] {
            for (ri, ((rs, rt, ps, pt), prow)) in pairs.iter().zip(paper.iter()).enumerate() {
                let row = ["p2p2", "p2p4", "p2gc", "p4p4", "p4gc"][ri];
                for (ci, &n) in SIZES.iter().enumerate() {
                    let a = assemble(n, closure, af);
                    let xhat = DVector::from_iterator(n, (1..=n).map(|j| j as f64 / n as f64));
                    let b = &a * &xhat;
                    let h = build(n, a, rs, *rt, ps, *pt, pre_ord, post_ord, 7, None);
                    let got = count(&h, &b, &xhat, np_, nq, pre_ord, post_ord);
                    let want = prow[ci];
                    if !tol_ok(got, want) {
                        fails += 1;
                        detail.push_str(&format!(" {label}/{row}/n{n}:{got}vs{want}"));
                    }
                    dev += ((got as f64 - want as f64) / want as f64).abs();
                    if verbose {
                        print!(" {got}/{want}");
                    }
                }
                if verbose {
                    println!("  <- {label}/{row}");
                }
            }
        }
        println!("alpha={alpha} wgc={gcg} wp={wp} wr={wr} nu({np_},{nq})+{ladd}/lvl: fails={fails} dev={dev:.1}{detail}");
        results.push((format!("alpha={alpha} nu({np_},{nq})+{ladd} wgc={gcg} wp={wp} wr={wr}"), fails, dev));
    }
    results.sort_by(|a, b| (a.1, a.2).partial_cmp(&(b.1, b.2)).unwrap());
    println!("best: {:?}", results.first());
}
