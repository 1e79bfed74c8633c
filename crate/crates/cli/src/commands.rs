//! Subcommand implementations. Each returns a [`Report`].

use std::fmt;

use nalgebra::{DMatrix, DVector};
use polylt::constants::{
    classical_constant, ground_state_constant, polyharmonic_constants, riesz_bound_constant,
    semiclassical_constant, HALFLINE_NEUMANN_UPPER_BOUND,
};
use polylt::delta_solver::{
    appendix_secular_kappa, eigenfunction, halfline_neumann_kappa, negative_spectrum_delta,
};
use polylt::majorization::{
    biharmonic_symbol_check, lemma_monotonicity_check, polyharmonic_symbol_check, SampledWeight, TrapezoidRule,
    MAJORIZATION_TOL,
};
use polylt::spectral::{assemble_operator, negative_spectrum, potential_integral, riesz_mean};
use polylt::verify::{
    counterexample_scan, default_alpha_grid, ensemble_check, ensemble_grid, identity_suite, system_bound_check,
    weyl_sweep, IDENTITY_TOL, QUADRATURE_TOL, RESOLUTION_TOL,
};
use polylt::{BoundReport, DeltaPotential, LtParams, PotentialField, Symbol, Theorem};
use serde_json::{json, Value};

use crate::potential_csv::read_potential;
use crate::report::Report;
use crate::{Cli, Command, Profile, Suite, SymbolKind};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(polylt::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Library(polylt::Error::Solver(_) | polylt::Error::Convergence { .. }) => 1,
            CliError::Library(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<polylt::Error> for CliError {
    fn from(e: polylt::Error) -> Self {
        CliError::Library(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<f64>().or_else(|_| usage(format!("not a number: {t:?}"))))
        .collect()
}

fn diag_matrix(s: &str) -> Result<DMatrix<f64>> {
    let d = parse_list(s)?;
    if d.is_empty() {
        return usage("A needs at least one diagonal entry");
    }
    Ok(DMatrix::from_diagonal(&DVector::from_vec(d)))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn fmt_num(x: f64) -> String {
    format!("{x:.15e}")
}

pub fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Constants { l, gamma, d } => constants(*l, *gamma, *d),
        Command::Delta { l, sites, file, eval } => delta(*l, sites.as_deref(), file.as_deref(), eval.as_deref()),
        Command::Halfline => halfline(g.tol.unwrap_or(1e-8)),
        Command::Spectrum { potential, l, gamma, symbol, a, theorem } => {
            spectrum(potential, *l, *gamma, *symbol, a.as_deref(), theorem.as_deref())
        }
        Command::Verify { suite, count, gamma, a } => verify(*suite, *count, *gamma, a, g.seed, g.tol),
        Command::Counterexample { l, alphas } => counterexample(*l, *alphas),
        Command::Weyl { l, gamma, alphas, half_width, points, depth, width } => {
            weyl(*l, *gamma, alphas, *half_width, *points, *depth, *width, g.tol)
        }
        Command::Majorization { b, eps, points, half_width, profile, grid } => {
            majorization(*b, eps, *points, *half_width, *profile, *grid, g.tol)
        }
    }
}

fn constants(l: f64, gamma: f64, d: u32) -> Result<Report> {
    let p = LtParams::new(l, gamma, d)?;
    let mut values = serde_json::Map::new();
    values.insert("kappa".into(), json!(p.kappa));
    values.insert("nu".into(), json!(p.nu));
    values.insert("classical".into(), json!(classical_constant(&p)?));
    values.insert("semiclassical_separable".into(), json!(semiclassical_constant(&p)?));
    if (d as f64) < 2.0 * l {
        let crit = LtParams::critical(l, d)?;
        values.insert("ground_state".into(), json!(ground_state_constant(&crit)?));
    }
    if let Some(int_l) = p.integer_order().filter(|&k| k >= 2) {
        values.insert("polyharmonic".into(), to_value(&polyharmonic_constants(int_l)?));
    }
    let mut bounds = serde_json::Map::new();
    for t in Theorem::ALL {
        if let Ok(c) = riesz_bound_constant(&p, t) {
            bounds.insert(t.name().into(), json!(c));
        }
    }
    values.insert("bounds".into(), Value::Object(bounds));
    let rows = values
        .iter()
        .filter_map(|(k, v)| v.as_f64().map(|x| vec![k.clone(), fmt_num(x)]))
        .collect();
    Ok(Report::new("constants", json!({"l": l, "gamma": gamma, "d": d}), Value::Object(values), json!({}), true)
        .with_table(&["name", "value"], rows))
}

fn read_sites(sites: Option<&str>, file: Option<&std::path::Path>) -> Result<DeltaPotential> {
    let pairs: Vec<(f64, f64)> = match (sites, file) {
        (Some(s), _) => s
            .split(',')
            .map(|item| {
                let (x, c) = item
                    .split_once(':')
                    .ok_or_else(|| CliError::Usage(format!("site {item:?} is not position:strength")))?;
                let x = x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad position {x:?}")))?;
                let c = c.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad strength {c:?}")))?;
                Ok((x, c))
            })
            .collect::<Result<_>>()?,
        (None, Some(path)) => {
            let mut rdr = csv::ReaderBuilder::new()
                .trim(csv::Trim::All)
                .from_path(path)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let mut out = Vec::new();
            for rec in rdr.deserialize::<(f64, f64)>() {
                out.push(rec.map_err(|e| CliError::Usage(e.to_string()))?);
            }
            out
        }
        (None, None) => return usage("give --sites or --file"),
    };
    Ok(DeltaPotential::new(pairs)?)
}

fn delta(l: u32, sites: Option<&str>, file: Option<&std::path::Path>, eval: Option<&str>) -> Result<Report> {
    let pot = read_sites(sites, file)?;
    let spectrum = negative_spectrum_delta(l, &pot)?;
    let nu = 1.0 - 1.0 / (2.0 * l as f64);
    let mut values = serde_json::Map::new();
    values.insert("kappas".into(), json!(spectrum.kappas));
    values.insert("eigenvalues".into(), json!(spectrum.kappas.iter().map(|k| -k).collect::<Vec<_>>()));
    values.insert("degenerate".into(), json!(spectrum.degenerate));
    values.insert("riesz_mean_critical".into(), json!(riesz_mean(&spectrum, nu)));
    values.insert("solver".into(), to_value(&spectrum.meta));
    if pot.len() == 1 {
        values.insert("wronskian_route_kappa".into(), json!(appendix_secular_kappa(l, pot.sites()[0].strength)?));
    }
    if let Some(points) = eval {
        let xs = parse_list(points)?;
        let mut samples = Vec::new();
        for &k in &spectrum.kappas {
            let u = eigenfunction(l, &pot, k)?;
            samples.push(json!({"kappa": k, "x": xs, "u": xs.iter().map(|&x| u.eval(x)).collect::<Vec<_>>()}));
        }
        values.insert("eigenfunctions".into(), Value::Array(samples));
    }
    let rows = spectrum
        .kappas
        .iter()
        .zip(&spectrum.degenerate)
        .enumerate()
        .map(|(i, (k, d))| vec![i.to_string(), fmt_num(*k), fmt_num(-k), d.to_string()])
        .collect();
    Ok(Report::new(
        "delta",
        json!({"l": l, "sites": pot.sites()}),
        Value::Object(values),
        json!({"eigenvalue_relative": spectrum.meta.tolerance}),
        true,
    )
    .with_table(&["index", "kappa", "eigenvalue", "degenerate"], rows))
}

fn halfline(tol: f64) -> Result<Report> {
    let k = halfline_neumann_kappa()?;
    let power = k.powf(0.75);
    let verdict = (power - 2f64.sqrt()).abs() <= tol;
    Ok(Report::new(
        "halfline",
        json!({"l": 2, "boundary": "u''(0) = 0, u'''(0) = u(0)"}),
        json!({
            "kappa_plus": k,
            "kappa_plus_pow_3_4": power,
            "expected_pow_3_4": 2f64.sqrt(),
            "ground_state_line": 1.0 / 8f64.sqrt(),
            "reference_upper_bound": HALFLINE_NEUMANN_UPPER_BOUND,
        }),
        json!({"kappa_plus_pow_3_4": tol}),
        verdict,
    ))
}

fn spectrum(
    path: &std::path::Path,
    l: f64,
    gamma: Option<f64>,
    kind: SymbolKind,
    a: Option<&str>,
    theorem: Option<&str>,
) -> Result<Report> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let v = read_potential(file).map_err(CliError::Usage)?;
    let d = v.grid().dim as u32;
    let symbol = match kind {
        SymbolKind::Full => Symbol::FullLaplacian,
        SymbolKind::Separable => Symbol::Separable,
        SymbolKind::Tensor => Symbol::TensorA(diag_matrix(a.unwrap_or("1"))?),
    };
    let gamma = match gamma {
        Some(g) => g,
        None => 1.0 - d as f64 / (2.0 * l),
    };
    let p = LtParams::new(l, gamma, d)?;
    let h = assemble_operator(l, v.grid(), &v, &symbol)?;
    let s = negative_spectrum(&h)?;
    let rm = riesz_mean(&s, gamma);
    let integral = potential_integral(&v, p.potential_power())?;
    let mut values = json!({
        "kappas": s.kappas,
        "count": s.len(),
        "riesz_mean": rm,
        "potential_integral": integral,
        "grid": v.grid(),
        "matrix_dimension": v.m(),
    });
    let mut verdict = true;
    if let Some(name) = theorem {
        let t = Theorem::from_name(name).ok_or_else(|| CliError::Usage(format!("unknown theorem {name:?}")))?;
        let c = riesz_bound_constant(&p, t).map_err(|e| CliError::Usage(e.to_string()))?;
        let report = BoundReport::new(rm, integral, c);
        verdict = report.verdict;
        values["bound"] = to_value(&report);
    }
    let rows = s.kappas.iter().enumerate().map(|(i, k)| vec![i.to_string(), fmt_num(*k)]).collect();
    Ok(Report::new(
        "spectrum",
        json!({"potential": path.display().to_string(), "l": l, "gamma": gamma, "symbol": format!("{kind:?}").to_lowercase(), "theorem": theorem}),
        values,
        json!({"eigenvalue_floor_relative": 1e-10}),
        verdict,
    )
    .with_table(&["index", "kappa"], rows))
}

fn verify(suite: Suite, count: usize, gamma: Option<f64>, a: &str, seed: u64, tol: Option<f64>) -> Result<Report> {
    match suite {
        Suite::Identities => {
            let r = identity_suite()?;
            let closed_tol = tol.unwrap_or(IDENTITY_TOL);
            let verdict = r.passed && r.max_closed_form_deviation <= closed_tol;
            let rows = r
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), fmt_num(c.value), fmt_num(c.reference), fmt_num(c.deviation), c.passed.to_string()])
                .collect();
            Ok(Report::new(
                "verify",
                json!({"suite": "identities"}),
                to_value(&r),
                json!({"closed_form": closed_tol, "quadrature": QUADRATURE_TOL}),
                verdict,
            )
            .with_table(&["name", "value", "reference", "deviation", "passed"], rows))
        }
        Suite::Ensemble => {
            let gamma = gamma.unwrap_or(0.75);
            let p = LtParams::new(2.0, gamma, 1)?;
            let theorem = if (gamma - 0.75).abs() < 1e-12 { Theorem::BiharmonicCritical } else { Theorem::BiharmonicRiesz };
            let r = ensemble_check(&p, theorem, seed, count, ensemble_grid())?;
            let rows = r
                .reports
                .iter()
                .enumerate()
                .map(|(i, b)| vec![i.to_string(), fmt_num(b.riesz_mean), fmt_num(b.potential_integral), fmt_num(b.ratio), b.verdict.to_string()])
                .collect();
            Ok(Report::new(
                "verify",
                json!({"suite": "ensemble", "l": 2, "gamma": gamma, "count": count, "seed": seed, "theorem": theorem}),
                to_value(&r),
                json!({"ratio": 0.0}),
                r.passed,
            )
            .with_table(&["member", "riesz_mean", "potential_integral", "ratio", "verdict"], rows))
        }
        Suite::System => {
            let gamma = gamma.unwrap_or(1.0);
            let a = diag_matrix(a)?;
            let m = a.nrows();
            let grid = polylt::GridConfig::new(15.0, 256, 1)?;
            let v = PotentialField::scalar_times_identity(grid, m, |x| -2.0 * (-x[0] * x[0]).exp())?;
            let r = system_bound_check(&a, gamma, &v)?;
            Ok(Report::new(
                "verify",
                json!({"suite": "system", "gamma": gamma, "a_diagonal": a.diagonal().as_slice(), "potential": "-2 exp(-x^2) * identity", "grid": grid}),
                to_value(&r),
                json!({"ratio": 0.0}),
                r.verdict,
            ))
        }
    }
}

fn counterexample(l: u32, n: usize) -> Result<Report> {
    if n == 0 {
        return usage("need at least one coupling");
    }
    let s = counterexample_scan(l, &default_alpha_grid(n))?;
    let rows = s
        .points
        .iter()
        .map(|p| vec![fmt_num(p.alpha), p.lhs.map(fmt_num).unwrap_or_default(), p.note.clone().unwrap_or_default()])
        .collect();
    Ok(Report::new(
        "counterexample",
        json!({"l": l, "alphas": n, "alpha_range": [1.0, 10.0]}),
        to_value(&s),
        json!({"required_excess": s.required_excess}),
        s.passed,
    )
    .with_table(&["alpha", "lhs", "note"], rows))
}

#[allow(clippy::too_many_arguments)]
fn weyl(l: f64, gamma: f64, alphas: &str, half_width: f64, points: usize, depth: f64, width: f64, tol: Option<f64>) -> Result<Report> {
    let p = LtParams::new(l, gamma, 1)?;
    let alphas = parse_list(alphas)?;
    let r = weyl_sweep(&p, |x| -depth * (-(x[0] / width).powi(2)).exp(), half_width, points, &alphas)?;
    let resolution_tol = tol.unwrap_or(RESOLUTION_TOL);
    let bound = Theorem::ALL
        .into_iter()
        .filter(|t| *t != Theorem::SystemSchrodinger)
        .filter_map(|t| riesz_bound_constant(&p, t).ok())
        .fold(f64::INFINITY, f64::min);
    let below = r.points.iter().all(|pt| pt.ratio <= bound);
    let verdict = r.resolution_change <= resolution_tol && below;
    let rows = r
        .points
        .iter()
        .map(|pt| vec![fmt_num(pt.alpha), pt.points.to_string(), pt.eigenvalue_count.to_string(), fmt_num(pt.ratio)])
        .collect();
    let mut values = to_value(&r);
    values["bound_constant"] = if bound.is_finite() { json!(bound) } else { Value::Null };
    Ok(Report::new(
        "weyl",
        json!({"l": l, "gamma": gamma, "alphas": alphas, "half_width": half_width, "points": points, "depth": depth, "width": width}),
        values,
        json!({"resolution_change": resolution_tol}),
        verdict,
    )
    .with_table(&["alpha", "points", "count", "ratio"], rows))
}

fn majorization(b: f64, eps: &str, points: usize, half_width: f64, profile: Profile, grid: usize, tol: Option<f64>) -> Result<Report> {
    let eps = parse_list(eps)?;
    let rule = TrapezoidRule::new(half_width, points)?;
    let w = match profile {
        Profile::Gaussian => SampledWeight::from_fn(rule, |x| (-x * x).exp())?,
        Profile::Lorentzian => SampledWeight::from_fn(rule, |x| 1.0 / (1.0 + x * x))?,
    };
    let tolerance = tol.unwrap_or(1e-8);
    let lemma = lemma_monotonicity_check(&w, &eps, b, tolerance)?;
    let mut symbols = vec![biharmonic_symbol_check(b, grid)?];
    for l in 2..=4 {
        symbols.push(polyharmonic_symbol_check(l, grid)?);
    }
    let symbols_ok = symbols.iter().all(|s| s.violations == 0 && s.locus_deviation <= 1e-6);
    let verdict = lemma.passed && symbols_ok;
    Ok(Report::new(
        "majorization",
        json!({"b": b, "eps": eps, "points": points, "half_width": half_width, "profile": format!("{profile:?}").to_lowercase(), "grid": grid}),
        json!({
            "worst_violation": lemma.worst_violation,
            "trace_deviation": lemma.trace_deviation,
            "worst_domination": lemma.worst_domination,
            "traces": lemma.traces,
            "expected_trace": lemma.expected_trace,
            "symbol_checks": symbols,
        }),
        json!({"partial_sums": tolerance, "majorization": MAJORIZATION_TOL, "equality_locus": 1e-6}),
        verdict,
    ))
}
