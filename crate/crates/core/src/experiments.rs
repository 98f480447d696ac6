//! Batch runners reproducing the reference iteration-count tables, plus
//! the named-symbol parser used by the command line.

use serde::Serialize;

use crate::analysis::{check_tgm, check_vcycle_pair, ConditionVerdict};
use crate::cycles::{
    assemble_experiment, build_hierarchy, BuildConfig, CoefficientFn, CycleConfig, CycleKind,
    Problem, SolveReport, TransferPlan,
};
use crate::operators::TransferPair;
use crate::smoothers::{SmootherRule, Sweep};
use crate::symbol::families::{
    bspline_symbol, cubic_interp_symbol, laplace_power, mu_symbol, power_symbol, PowerSign,
};
use crate::symbol::Symbol;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub n: usize,
    pub config: String,
    pub iterations: usize,
    pub converged: bool,
    /// Published count; `None` marks a published ">max_iter" cell.
    pub reference: Option<usize>,
    /// |iterations - reference| / reference when both sides converged.
    pub deviation: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigVerdict {
    pub config: String,
    pub verdict: ConditionVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub name: String,
    pub max_iter: usize,
    pub cells: Vec<TableCell>,
    pub verdicts: Vec<ConfigVerdict>,
}

impl TableReport {
    pub fn any_nonconverged(&self) -> bool {
        self.cells.iter().any(|c| !c.converged)
    }

    pub fn cell(&self, config: &str, n: usize) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.config == config && c.n == n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,n,config,iterations,converged,reference,deviation\n");
        for c in &self.cells {
            let reference = c
                .reference
                .map(|r| r.to_string())
                .unwrap_or_else(|| format!(">{}", self.max_iter));
            let deviation = c
                .deviation
                .map(|d| format!("{d:.4}"))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.name, c.n, c.config, c.iterations, c.converged, reference, deviation
            ));
        }
        out
    }

    /// Human-readable table; non-converged cells print as ">max_iter".
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.name);
        for c in &self.cells {
            let shown = if c.converged {
                c.iterations.to_string()
            } else {
                format!(">{}", self.max_iter)
            };
            let reference = c
                .reference
                .map(|r| r.to_string())
                .unwrap_or_else(|| format!(">{}", self.max_iter));
            out.push_str(&format!(
                "  n={:<5} {:<18} iters={:<6} reference={}\n",
                c.n, c.config, shown, reference
            ));
        }
        out
    }
}

fn make_cell(
    n: usize,
    config: &str,
    report: &SolveReport,
    reference: Option<usize>,
    warnings: Vec<String>,
) -> TableCell {
    let deviation = match (reference, report.converged) {
        (Some(r), true) => Some((report.iterations as f64 - r as f64).abs() / r as f64),
        _ => None,
    };
    TableCell {
        n,
        config: config.to_string(),
        iterations: report.iterations,
        converged: report.converged,
        reference,
        deviation,
        warnings,
    }
}

/// Transfer plan for the integral problems: orders `(delta_r, delta_p)`
/// realized as `(2-2cos)^{d/2}` on the finest level and `(2+2cos)^{d/2}`
/// on every coarser level (the zero moves to the origin after one step).
pub fn integral_plan(delta_r: usize, delta_p: usize) -> TransferPlan {
    assert!(delta_r % 2 == 0 && delta_p % 2 == 0);
    TransferPlan::PerLevel {
        finest: TransferPair::new(
            power_symbol(PowerSign::Minus, delta_r / 2, 1),
            power_symbol(PowerSign::Minus, delta_p / 2, 1),
        )
        .expect("1-D pair"),
        coarser: TransferPair::new(
            power_symbol(PowerSign::Plus, delta_r / 2, 1),
            power_symbol(PowerSign::Plus, delta_p / 2, 1),
        )
        .expect("1-D pair"),
    }
}

/// Solve one integral-problem instance `T_n(z) x = b`.
pub fn run_integral(
    z: &Symbol,
    n: usize,
    delta_r: usize,
    delta_p: usize,
    cycle: CycleKind,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    run_integral_with_coarsest(z, n, delta_r, delta_p, cycle, tol, max_iter, 7)
}

/// As [`run_integral`] with an explicit coarsest-level size threshold.
#[allow(clippy::too_many_arguments)]
pub fn run_integral_with_coarsest(
    z: &Symbol,
    n: usize,
    delta_r: usize,
    delta_p: usize,
    cycle: CycleKind,
    tol: f64,
    max_iter: usize,
    coarsest_size: usize,
) -> Result<SolveReport> {
    let assembled = assemble_experiment(&Problem::Integral { z: z.clone(), n })?;
    let cfg = BuildConfig {
        coarsest_size,
        max_levels: if cycle == CycleKind::Tgm { Some(2) } else { None },
        smoother: SmootherRule::Richardson,
        ..BuildConfig::default()
    };
    let hierarchy = build_hierarchy(assembled.matrix, &integral_plan(delta_r, delta_p), &cfg)?;
    let mut ccfg = CycleConfig::new(cycle);
    ccfg.tol = tol;
    ccfg.max_iter = max_iter;
    hierarchy.solve(&assembled.rhs, &ccfg)
}

/// Solve one fourth-order-problem instance with Gauss-Seidel V-cycles.
/// Returns the report together with assembly warnings.
pub fn run_pde4(
    a: CoefficientFn,
    n: usize,
    r: &Symbol,
    p: &Symbol,
    cycle: CycleKind,
    tol: f64,
    max_iter: usize,
) -> Result<(SolveReport, Vec<String>)> {
    let assembled = assemble_experiment(&Problem::Pde4 { a, n })?;
    let warnings = assembled.warnings.clone();
    let cfg = BuildConfig {
        smoother: SmootherRule::GaussSeidel(Sweep::Symmetric),
        // The degenerate coefficient can leave a numerically singular but
        // consistent coarsest system.
        allow_singular_coarsest: true,
        ..BuildConfig::default()
    };
    let plan = TransferPlan::Uniform(TransferPair::new(r.clone(), p.clone())?);
    let hierarchy = build_hierarchy(assembled.matrix, &plan, &cfg)?;
    let mut ccfg = CycleConfig::new(cycle);
    ccfg.pre_steps = 3;
    ccfg.post_steps = 3;
    ccfg.tol = tol;
    ccfg.max_iter = max_iter;
    let report = hierarchy.solve(&assembled.rhs, &ccfg)?;
    Ok((report, warnings))
}

const TABLE2_SIZES: [usize; 5] = [15, 31, 63, 127, 255];
const TABLE3_SIZES: [usize; 5] = [31, 63, 127, 255, 511];
const TABLE4_SIZES: [usize; 7] = [15, 31, 63, 127, 255, 511, 1023];

/// TGM counts for `z = (2+2cos x)^3`.
pub fn run_table2() -> Result<TableReport> {
    let z = power_symbol(PowerSign::Plus, 3, 1);
    let configs: [(usize, usize, [Option<usize>; 5]); 3] = [
        (2, 2, [Some(219), Some(607), Some(1501), None, None]),
        (2, 4, [Some(65), Some(72), Some(76), Some(77), Some(78)]),
        (4, 4, [Some(51), Some(52), Some(51), Some(50), Some(49)]),
    ];
    let mut cells = Vec::new();
    let mut verdicts = Vec::new();
    for (dr, dp, refs) in configs {
        let config = format!("dr={dr},dp={dp}");
        let verdict = check_tgm(
            &z,
            &power_symbol(PowerSign::Minus, dr / 2, 1),
            &power_symbol(PowerSign::Minus, dp / 2, 1),
        )?;
        verdicts.push(ConfigVerdict {
            config: config.clone(),
            verdict,
        });
        for (i, &n) in TABLE2_SIZES.iter().enumerate() {
            let report = run_integral(&z, n, dr, dp, CycleKind::Tgm, 1e-9, 2000)?;
            cells.push(make_cell(n, &config, &report, refs[i], Vec::new()));
        }
    }
    Ok(TableReport {
        name: "table2".into(),
        max_iter: 2000,
        cells,
        verdicts,
    })
}

/// W-cycle counts for `z = (2+2cos x)^2`.
pub fn run_table3() -> Result<TableReport> {
    let z = power_symbol(PowerSign::Plus, 2, 1);
    let configs: [(usize, usize, [usize; 5]); 3] = [
        (2, 2, [25, 32, 35, 37, 37]),
        (2, 4, [23, 23, 23, 23, 23]),
        (4, 4, [22, 21, 21, 20, 20]),
    ];
    let mut cells = Vec::new();
    let mut verdicts = Vec::new();
    for (dr, dp, refs) in configs {
        let config = format!("dr={dr},dp={dp}");
        let verdict = check_tgm(
            &z,
            &power_symbol(PowerSign::Minus, dr / 2, 1),
            &power_symbol(PowerSign::Minus, dp / 2, 1),
        )?;
        verdicts.push(ConfigVerdict {
            config: config.clone(),
            verdict,
        });
        for (i, &n) in TABLE3_SIZES.iter().enumerate() {
            // Published W-cycle counts correspond to a hierarchy whose
            // direct solve happens one level earlier (size 15) than the
            // two-grid experiments; with size-7 recursion the (2,2)
            // column lands 3-7 iterations higher at the small sizes
            // while the other columns are insensitive to the cutoff.
            let report =
                run_integral_with_coarsest(&z, n, dr, dp, CycleKind::W, 1e-9, 2000, 15)?;
            cells.push(make_cell(n, &config, &report, Some(refs[i]), Vec::new()));
        }
    }
    Ok(TableReport {
        name: "table3".into(),
        max_iter: 2000,
        cells,
        verdicts,
    })
}

/// The transfer pairs of the fourth-order experiment: restriction mask
/// and prolongation matrix symbol `2 g` for the normalized projector `g`.
pub fn table4_pairs() -> Vec<(String, Symbol, Symbol)> {
    let phi2 = bspline_symbol(2, 1, true);
    let phi4 = bspline_symbol(4, 1, true);
    let gc = cubic_interp_symbol(1);
    vec![
        ("phi2-phi2".into(), phi2.clone(), phi2.scale(2.0)),
        ("phi2-phi4".into(), phi2.clone(), phi4.scale(2.0)),
        ("phi2-gc".into(), phi2.clone(), gc.scale(2.0)),
        ("phi4-phi4".into(), phi4.clone(), phi4.scale(2.0)),
        ("phi4-gc".into(), phi4, gc.scale(2.0)),
    ]
}

/// V-cycle counts for the fourth-order problem with nonconstant
/// coefficients, Gauss-Seidel smoothing.
pub fn run_table4() -> Result<TableReport> {
    let refs_exp: [[usize; 5]; 7] = [
        [14, 9, 9, 7, 7],
        [32, 11, 13, 10, 9],
        [60, 17, 15, 14, 9],
        [98, 27, 20, 18, 12],
        [151, 38, 27, 22, 16],
        [215, 48, 34, 26, 20],
        [276, 57, 44, 29, 22],
    ];
    let refs_sq: [[usize; 5]; 7] = [
        [15, 10, 10, 9, 9],
        [33, 13, 17, 10, 11],
        [61, 17, 24, 13, 11],
        [101, 26, 27, 17, 13],
        [155, 35, 29, 20, 16],
        [221, 44, 36, 24, 19],
        [284, 53, 46, 27, 22],
    ];
    // The constant-coefficient model symbol of the fourth-order operator,
    // used for the optimality verdicts.
    let model = power_symbol(PowerSign::Minus, 2, 1);
    let mut cells = Vec::new();
    let mut verdicts = Vec::new();
    for (a, a_label, refs) in [
        (CoefficientFn::Exp, "a=exp", &refs_exp),
        (CoefficientFn::ShiftedSquare, "a=shifted_square", &refs_sq),
    ] {
        for (j, (pair_name, r, p)) in table4_pairs().into_iter().enumerate() {
            let config = format!("{a_label},{pair_name}");
            let verdict = check_vcycle_pair(&model, &r, &p)?;
            verdicts.push(ConfigVerdict {
                config: config.clone(),
                verdict,
            });
            for (i, &n) in TABLE4_SIZES.iter().enumerate() {
                let (report, warnings) =
                    run_pde4(a, n, &r, &p, CycleKind::V, 1e-9, 2000)?;
                cells.push(make_cell(n, &config, &report, Some(refs[i][j]), warnings));
            }
        }
    }
    Ok(TableReport {
        name: "table4".into(),
        max_iter: 2000,
        cells,
        verdicts,
    })
}

/// Parse a named symbol family or a JSON symbol file.
///
/// Accepted names: `1`, `phiM`, `gc`, `2-2cos`, `2+2cos`, `(2-2cos)^s`,
/// `(2+2cos)^s`, `pow(-,s)`, `pow(+,s)`, `laplace_power(q)`, `mu(q)`;
/// anything else is treated as a path to a JSON-serialized symbol.
pub fn parse_symbol(text: &str) -> Result<Symbol> {
    let t = text.trim();
    let bad = || Error::ParseError(format!("unrecognized symbol '{t}'"));
    let parse_usize = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if t == "1" {
        return Ok(Symbol::one(1));
    }
    if t == "gc" {
        return Ok(cubic_interp_symbol(1));
    }
    if let Some(m) = t.strip_prefix("phi") {
        return Ok(bspline_symbol(parse_usize(m)?, 1, true));
    }
    if t == "2-2cos" {
        return Ok(power_symbol(PowerSign::Minus, 1, 1));
    }
    if t == "2+2cos" {
        return Ok(power_symbol(PowerSign::Plus, 1, 1));
    }
    for (prefix, sign) in [
        ("(2-2cos)^", PowerSign::Minus),
        ("(2+2cos)^", PowerSign::Plus),
    ] {
        if let Some(s) = t.strip_prefix(prefix) {
            return Ok(power_symbol(sign, parse_usize(s)?, 1));
        }
    }
    for (prefix, sign) in [("pow(-,", PowerSign::Minus), ("pow(+,", PowerSign::Plus)] {
        if let Some(rest) = t.strip_prefix(prefix) {
            let s = rest.strip_suffix(')').ok_or_else(bad)?;
            return Ok(power_symbol(sign, parse_usize(s)?, 1));
        }
    }
    if let Some(rest) = t.strip_prefix("laplace_power(") {
        let q = rest.strip_suffix(')').ok_or_else(bad)?;
        return Ok(laplace_power(parse_usize(q)?, 1));
    }
    if let Some(rest) = t.strip_prefix("mu(") {
        let q = rest.strip_suffix(')').ok_or_else(bad)?;
        return Ok(mu_symbol(parse_usize(q)?, 1));
    }
    if std::path::Path::new(t).exists() {
        let data = std::fs::read_to_string(t)?;
        return Ok(serde_json::from_str(&data)?);
    }
    Err(bad())
}
