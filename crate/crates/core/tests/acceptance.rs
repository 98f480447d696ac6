//! Acceptance gate: one test per criterion, each printing a single
//! PASS line on success (failures panic with the offending values).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symgrid::analysis::{find_unique_zero, rational_bezier_quadratic};
use symgrid::cycles::{build_hierarchy, BuildConfig};
use symgrid::experiments::{integral_plan, run_table2, run_table3, run_table4, TableReport};
use symgrid::operators::{
    apply_prolongation, apply_restriction, circulant_from_symbol, galerkin_product,
    toeplitz_from_symbol, TransferPair,
};
use symgrid::symbol::families::{bspline_symbol, cubic_interp_symbol, power_symbol, PowerSign};
use symgrid::symbol::{coarsen_symbol, Symbol};

fn random_even_symbol(rng: &mut ChaCha8Rng, max_degree: usize) -> Symbol {
    let deg = rng.gen_range(1..=max_degree);
    let half: Vec<f64> = (0..deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let center: f64 = rng.gen_range(-1.0..1.0);
    let mut coeffs = Vec::with_capacity(2 * deg + 1);
    coeffs.extend(half.iter().rev());
    coeffs.push(center);
    coeffs.extend(half.iter());
    Symbol::from_coeffs_1d(-(deg as i64), &coeffs)
}

/// Criterion 1: Galerkin symbol oracle on random circulants.
#[test]
fn galerkin_symbol_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for case in 0..50 {
        let f = random_even_symbol(&mut rng, 4);
        let r = random_even_symbol(&mut rng, 4);
        let p = random_even_symbol(&mut rng, 4);
        let a = circulant_from_symbol(&f, &[16]).unwrap();
        let pair = TransferPair::new(r.clone(), p.clone()).unwrap();
        let coarse = galerkin_product(&a, &pair, false).unwrap();
        let fc = coarsen_symbol(&f, &r, &p).unwrap();
        let oracle = circulant_from_symbol(&fc, &[8]).unwrap();
        let got = coarse.mat.to_dense();
        let want = oracle.mat.to_dense();
        for i in 0..8 {
            for j in 0..8 {
                assert!(
                    (got[(i, j)] - want[(i, j)]).abs() < 1e-11,
                    "case {case}: entry ({i},{j}) {} vs {}",
                    got[(i, j)],
                    want[(i, j)]
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "oracle took {elapsed:?}");
    println!("ACCEPTANCE galerkin-symbol-oracle: PASS ({elapsed:?})");
}

/// Criterion 2: zero relocation under matching-order coarsening.
#[test]
fn zero_relocation() {
    for q in 1..=3usize {
        let f = power_symbol(PowerSign::Plus, q, 1);
        let rp = power_symbol(PowerSign::Minus, q, 1);
        let fc = coarsen_symbol(&f, &rp, &rp).unwrap();
        let zero = find_unique_zero(&fc).unwrap();
        assert_eq!(zero.location.len(), 1, "q={q}");
        assert!(
            zero.location[0].abs() < 1e-12,
            "q={q}: zero at {}",
            zero.location[0]
        );
        assert_eq!(zero.order, vec![2 * q], "q={q}");
    }
    println!("ACCEPTANCE zero-relocation: PASS");
}

/// Criterion 3: HF/LF order table for the named transfer families.
#[test]
fn order_table() {
    let cases = [
        (bspline_symbol(2, 1, true), 2usize, 2usize, "phi2"),
        (bspline_symbol(4, 1, true), 4, 2, "phi4"),
        (cubic_interp_symbol(1), 4, 4, "gc"),
    ];
    for (g, hf, lf, name) in cases {
        assert_eq!(g.hf_order().unwrap(), hf, "{name} hf");
        assert_eq!(g.lf_order().unwrap(), lf, "{name} lf");
    }
    println!("ACCEPTANCE order-table: PASS");
}

fn within(got: usize, want: usize, abs: f64, rel: f64) -> bool {
    let tol = abs.max(rel * want as f64);
    (got as f64 - want as f64).abs() <= tol
}

/// Criterion 4: Table 2 TGM counts.
#[test]
fn table2_reproduction() {
    let start = Instant::now();
    let report = run_table2().unwrap();
    let elapsed = start.elapsed();

    for (config, refs) in [
        ("dr=2,dp=4", [(15usize, 65usize), (31, 72), (63, 76), (127, 77), (255, 78)]),
        ("dr=4,dp=4", [(15, 51), (31, 52), (63, 51), (127, 50), (255, 49)]),
    ] {
        for (n, want) in refs {
            let cell = report.cell(config, n).unwrap();
            assert!(cell.converged, "{config} n={n} did not converge");
            assert!(
                within(cell.iterations, want, 3.0, 0.10),
                "{config} n={n}: {} vs {}",
                cell.iterations,
                want
            );
        }
    }
    let c22_15 = report.cell("dr=2,dp=2", 15).unwrap();
    assert!(c22_15.iterations > 200, "(2,2) n=15: {}", c22_15.iterations);
    let c22_127 = report.cell("dr=2,dp=2", 127).unwrap();
    assert!(
        !c22_127.converged && c22_127.iterations >= 2000,
        "(2,2) n=127 should exceed 2000"
    );
    let c22_255 = report.cell("dr=2,dp=2", 255).unwrap();
    assert!(!c22_255.converged, "(2,2) n=255 should exceed 2000");
    assert!(elapsed.as_secs_f64() < 30.0, "table2 took {elapsed:?}");
    println!("ACCEPTANCE table2-reproduction: PASS ({elapsed:?})");
}

/// Criterion 5: Table 3 W-cycle counts.
#[test]
fn table3_reproduction() {
    let report = run_table3().unwrap();
    for cell in &report.cells {
        let want = cell.reference.unwrap();
        assert!(cell.converged, "{} n={} did not converge", cell.config, cell.n);
        assert!(
            (cell.iterations as i64 - want as i64).abs() <= 3,
            "{} n={}: {} vs {}",
            cell.config,
            cell.n,
            cell.iterations,
            want
        );
    }
    for n in [63, 127, 255, 511] {
        let cell = report.cell("dr=2,dp=4", n).unwrap();
        assert!(
            (cell.iterations as i64 - 23).abs() <= 2,
            "(2,4) n={n}: {} vs 23",
            cell.iterations
        );
    }
    println!("ACCEPTANCE table3-reproduction: PASS");
}

/// Criterion 6: Table 4 V-cycle counts, tolerance max(±4, ±20%), plus the
/// exact column ordering at n=1023.
#[test]
fn table4_reproduction() {
    let start = Instant::now();
    let report = run_table4().unwrap();
    let elapsed = start.elapsed();
    for cell in &report.cells {
        let want = cell.reference.unwrap();
        assert!(cell.converged, "{} n={} did not converge", cell.config, cell.n);
        assert!(
            within(cell.iterations, want, 4.0, 0.20),
            "{} n={}: {} vs {}",
            cell.config,
            cell.n,
            cell.iterations,
            want
        );
    }
    for a_label in ["a=exp", "a=shifted_square"] {
        let at = |pair: &str| {
            report
                .cell(&format!("{a_label},{pair}"), 1023)
                .unwrap()
                .iterations
        };
        let worst = at("phi2-phi2");
        let best = at("phi4-gc");
        for pair in ["phi2-phi4", "phi2-gc", "phi4-phi4"] {
            assert!(
                worst > at(pair),
                "{a_label}: phi2-phi2 ({worst}) not worst vs {pair} ({})",
                at(pair)
            );
            assert!(
                best < at(pair),
                "{a_label}: phi4-gc ({best}) not best vs {pair} ({})",
                at(pair)
            );
        }
    }
    assert!(elapsed.as_secs_f64() < 60.0, "table4 took {elapsed:?}");
    println!("ACCEPTANCE table4-reproduction: PASS ({elapsed:?})");
}

/// Criterion 7: coarse-matrix structure with z = (2+2cos)^2.
#[test]
fn coarse_structure_claims() {
    let z = power_symbol(PowerSign::Plus, 2, 1);
    let a = toeplitz_from_symbol(&z, &[63]).unwrap();

    // (2,4): coarse matrices are 2^i T((2-2cos)^2) except the two corners.
    let h = build_hierarchy(a.clone(), &integral_plan(2, 4), &BuildConfig::default()).unwrap();
    let ztilde = power_symbol(PowerSign::Minus, 2, 1);
    for (i, level) in h.levels.iter().enumerate().skip(1) {
        let m = level.matrix.size();
        let dense = level.matrix.mat.to_dense();
        let t = toeplitz_from_symbol(&ztilde, &[m]).unwrap().mat.to_dense();
        let scale = 2.0f64.powi(i as i32);
        for r in 0..m {
            for c in 0..m {
                let want = scale * t[(r, c)];
                let corner = (r == 0 && c == 0) || (r == m - 1 && c == m - 1);
                if corner {
                    continue;
                }
                assert!(
                    (dense[(r, c)] - want).abs() < 1e-9,
                    "level {i} entry ({r},{c}): {} vs {}",
                    dense[(r, c)],
                    want
                );
            }
        }
        assert!(
            (dense[(0, 0)] - scale * t[(0, 0)]).abs() > 1e-9,
            "level {i}: corner correction expected"
        );
    }

    // (4,4): Toeplitz part of each coarse level has bandwidth 7 (support
    // radius 3) and the non-Toeplitz correction has rank <= 4.
    let h = build_hierarchy(a, &integral_plan(4, 4), &BuildConfig::default()).unwrap();
    for (i, level) in h.levels.iter().enumerate().skip(1) {
        let m = level.matrix.size();
        let f = level
            .matrix
            .symbol
            .as_ref()
            .expect("tracked coarse symbol");
        assert_eq!(f.support_radius(), vec![3], "level {i} bandwidth");
        let t = toeplitz_from_symbol(f, &[m]).unwrap().mat.to_dense();
        let corr = level.matrix.mat.to_dense() - t;
        let svd = corr.svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > 1e-10 * smax.max(1.0))
            .count();
        assert!(rank <= 4, "level {i}: correction rank {rank}");
    }
    println!("ACCEPTANCE coarse-structure-claims: PASS");
}

fn check_consistency(report: &TableReport, table: &str) {
    for v in &report.verdicts {
        let iters: Vec<usize> = report
            .cells
            .iter()
            .filter(|c| c.config == v.config)
            .map(|c| c.iterations)
            .collect();
        assert!(!iters.is_empty(), "{table} {}: no cells", v.config);
        let first = iters[0] as f64;
        let last = *iters.last().unwrap() as f64;
        let max = *iters.iter().max().unwrap() as f64;
        let min = *iters.iter().min().unwrap() as f64;
        if v.verdict.satisfied && v.verdict.strict {
            assert!(
                max / min <= 1.5,
                "{table} {}: strict config spread {max}/{min}",
                v.config
            );
        }
        if !v.verdict.satisfied {
            assert!(
                last / first >= 2.0,
                "{table} {}: violated config grew only {first} -> {last}",
                v.config
            );
        }
    }
}

/// Criterion 8: verdicts accompany every configuration and agree with the
/// observed iteration growth.
#[test]
fn checker_behavior_consistency() {
    let t2 = run_table2().unwrap();
    assert_eq!(t2.verdicts.len(), 3);
    check_consistency(&t2, "table2");
    let t3 = run_table3().unwrap();
    assert_eq!(t3.verdicts.len(), 3);
    check_consistency(&t3, "table3");
    let t4 = run_table4().unwrap();
    assert_eq!(t4.verdicts.len(), 10);
    check_consistency(&t4, "table4");
    println!("ACCEPTANCE checker-behavior-consistency: PASS");
}

/// Criterion 9: quadratic prolongation against the componentwise rule and
/// the rational Bezier oracle.
#[test]
fn quadratic_prolongation_rules() {
    // Choice (C): p = (1+cos x)^2 / 2 = 2 phi4.
    let p = bspline_symbol(4, 1, true).scale(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    for &n in &[15usize, 31] {
        let nc = (n - 1) / 2;
        for _ in 0..20 {
            let x: Vec<f64> = (0..nc).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y = apply_prolongation(&p, &[n], &x).unwrap();
            // Componentwise rule with x_0 = x_{nc+1} = 0: coarse point i
            // (1-based) sits at fine index 2i; even fine rows combine
            // (x_{i-1} + 6 x_i + x_{i+1})/8, odd rows average.
            let xg = |i: i64| {
                if i >= 1 && i <= nc as i64 {
                    x[(i - 1) as usize]
                } else {
                    0.0
                }
            };
            for fine in 1..=n as i64 {
                let want = if fine % 2 == 0 {
                    let i = fine / 2;
                    (xg(i - 1) + 6.0 * xg(i) + xg(i + 1)) / 8.0
                } else {
                    let i = (fine - 1) / 2;
                    (xg(i) + xg(i + 1)) / 2.0
                };
                let got = y[(fine - 1) as usize];
                assert!(
                    (got - want).abs() <= 1e-14 * want.abs().max(1.0),
                    "n={n} fine={fine}: {got} vs {want}"
                );
            }
            // Even rule == rational Bezier with omega = (1/2, 3/2, 1/2) at 1/2.
            for i in 2..nc {
                let b = [x[i - 2], x[i - 1], x[i]];
                let bez = rational_bezier_quadratic(b, [0.5, 1.5, 0.5], 0.5);
                let rule = (b[0] + 6.0 * b[1] + b[2]) / 8.0;
                assert!((bez - rule).abs() < 1e-14, "bezier {bez} vs {rule}");
            }
        }
    }
    println!("ACCEPTANCE quadratic-prolongation-rules: PASS");
}

/// Criterion 10: adjoint identity and polynomial reproduction.
#[test]
fn adjoint_and_polynomial_reproduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000a);
    let symbols = [
        bspline_symbol(2, 1, true),
        bspline_symbol(4, 1, true),
        cubic_interp_symbol(1),
    ];
    for &n in &[15usize, 31, 63] {
        let nc = (n - 1) / 2;
        for s in &symbols {
            for _ in 0..100 {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let y: Vec<f64> = (0..nc).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let rx = apply_restriction(s, &[n], &x).unwrap();
                let py = apply_prolongation(s, &[n], &y).unwrap();
                let lhs: f64 = rx.iter().zip(&y).map(|(a, b)| a * b).sum();
                let rhs: f64 = x.iter().zip(&py).map(|(a, b)| a * b).sum();
                assert!((lhs - rhs).abs() < 1e-12, "adjoint n={n}: {lhs} vs {rhs}");
            }
        }

        // Linear interpolation (2 phi2) reproduces degree-1 polynomials,
        // cubic interpolation (2 gc) reproduces degree-3, at interior
        // fine nodes (full stencil inside the grid).
        let cases: [(Symbol, usize, usize); 2] = [
            (bspline_symbol(2, 1, true).scale(2.0), 1, 1),
            (cubic_interp_symbol(1).scale(2.0), 3, 3),
        ];
        for (p, degree, margin) in cases {
            let poly = |t: f64| -> f64 {
                (0..=degree).map(|k| (k as f64 + 0.5) * t.powi(k as i32)).sum()
            };
            // Fine node j (0-based) sits at t = j + 1; coarse node i at
            // t = 2i + 2.
            let coarse: Vec<f64> = (0..nc).map(|i| poly((2 * i + 2) as f64)).collect();
            let fine = apply_prolongation(&p, &[n], &coarse).unwrap();
            let lo = 2 * margin;
            let hi = n - 2 * margin;
            for j in lo..hi {
                let want = poly((j + 1) as f64);
                assert!(
                    (fine[j] - want).abs() < 1e-9 * want.abs().max(1.0),
                    "degree {degree} n={n} node {j}: {} vs {want}",
                    fine[j]
                );
            }
        }
    }
    println!("ACCEPTANCE adjoint-and-polynomial-reproduction: PASS");
}
