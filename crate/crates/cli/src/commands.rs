use std::path::PathBuf;

use serde_json::Value;
use typent::closedform::{formula_table, typical_quantities};
use typent::continuum::{finite_n_convergence, ContinuumDensity};
use typent::coulomb::{solve_saddle_numeric, trace_inverse, typical_solution};
use typent::fixedpurity::{
    critical_threshold, multiplier_relation_check, solve_isopurity, threshold_scan,
    IsopurityProblem,
};
use typent::sampler::{estimate_many, histogram_rescaled, Functional, SamplerConfig};
use typent::BipartitionDims;

use crate::args::{
    Cli, Command, ConvergeArgs, DensityArgs, DimsArgs, EnsembleArgs, Format, HistogramArgs,
    IsopurityArgs, Kind, SampleArgs,
};
use crate::config::{require, ConfigFile, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{num, nums, Document, Table};

const DEFAULT_SAMPLES: usize = 10_000;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_BINS: usize = 40;
const DEFAULT_SCAN_POINTS: usize = 41;

/// A finished command: the document and where to write it.
#[derive(Debug)]
pub struct Outcome {
    pub document: Document,
    pub format: Format,
    pub output: Option<PathBuf>,
}

pub fn execute(cli: Cli) -> CliResult<Outcome> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let (name, table_like) = match &cli.command {
        Command::Typical(_) => ("typical", false),
        Command::Isopurity(a) => ("isopurity", file.pick_switch(a.scan, "scan")?),
        Command::Sample(_) => ("sample", false),
        Command::Histogram(_) => ("histogram", true),
        Command::Density(_) => ("density", true),
        Command::Converge(_) => ("converge", true),
        Command::Formulas(_) => ("formulas", true),
    };
    let format = file.pick(cli.format, "format")?.unwrap_or(if table_like {
        Format::Csv
    } else {
        Format::Json
    });
    let output = match cli.output {
        Some(p) => Some(p),
        None => file.raw("output").map(PathBuf::from),
    };
    let output_path = output
        .as_ref()
        .map_or_else(|| "-".to_string(), |p| p.display().to_string());
    let config = RunConfig::new(name, format, output_path);
    let document = match cli.command {
        Command::Typical(a) => typical(&file, a, config)?,
        Command::Isopurity(a) => isopurity(&file, a, config)?,
        Command::Sample(a) => sample(&file, a, config)?,
        Command::Histogram(a) => histogram(&file, a, config)?,
        Command::Density(a) => density(&file, a, config)?,
        Command::Converge(a) => converge(&file, a, config)?,
        Command::Formulas(a) => formulas(&file, a, config)?,
    };
    Ok(Outcome {
        document,
        format,
        output,
    })
}

fn dims(
    file: &ConfigFile,
    n: Option<usize>,
    m: Option<usize>,
    config: &mut RunConfig,
) -> CliResult<BipartitionDims> {
    let n = require(file.pick(n, "n")?, "n")?;
    let m = require(file.pick(m, "m")?, "m")?;
    config.n = Some(n);
    config.m = Some(m);
    Ok(BipartitionDims::new(n, m)?)
}

fn typical(file: &ConfigFile, a: DimsArgs, mut config: RunConfig) -> CliResult<Document> {
    let d = dims(file, a.n, a.m, &mut config)?;
    let solution = typical_solution(d)?;
    let spectrum = &solution.spectrum;
    let closed = typical_quantities(d, d.n())?;
    let (oracle_gap, oracle_force) = if d.n() >= 2 {
        let numeric = solve_saddle_numeric(d, None, None)?;
        let gap = numeric
            .spectrum
            .values()
            .iter()
            .zip(spectrum.values())
            .fold(0.0f64, |g, (x, y)| g.max((x - y).abs()));
        (gap, numeric.max_force_residual)
    } else {
        (0.0, 0.0)
    };
    let mut doc = Document::new(config);
    doc.field("n", d.n())
        .field("m", d.m())
        .field("spectrum", nums(spectrum.values()))
        .real("xi", solution.xi)
        .real("purity", closed.purity)
        .real("purity_from_multiplier", closed.purity_from_multiplier)
        .real("purity_recomputed", spectrum.purity())
        .field("invariants", nums(&closed.invariants))
        .field(
            "invariants_recomputed",
            nums(&spectrum.elementary_invariants()),
        )
        .real("determinant", closed.determinant_log.exp())
        .real("determinant_log", closed.determinant_log)
        .real("von_neumann_entropy", spectrum.von_neumann_entropy())
        .field("trace_inverse", trace_inverse(d).map_or(Value::Null, num))
        .real("force_residual", solution.max_force_residual)
        .field("hessian_definite", solution.hessian_definite)
        .real("oracle_spectrum_gap", oracle_gap)
        .real("oracle_force_residual", oracle_force);
    Ok(doc)
}

fn isopurity(file: &ConfigFile, a: IsopurityArgs, mut config: RunConfig) -> CliResult<Document> {
    let n = require(file.pick(a.n, "n")?, "n")?;
    config.n = Some(n);
    let scan = file.pick_switch(a.scan, "scan")?;
    let from_flags = a.purity.is_some() || a.beta.is_some() || a.eta.is_some();
    let (purity, beta, eta) = if from_flags {
        (a.purity, a.beta, a.eta)
    } else {
        (file.get("purity")?, file.get("beta")?, file.get("eta")?)
    };
    let given = [purity.is_some(), beta.is_some(), eta.is_some()]
        .iter()
        .filter(|&&g| g)
        .count();
    if given > 1 {
        return Err(CliError::Usage(
            "give only one of --purity, --beta, --eta".into(),
        ));
    }
    if given == 0 && !scan {
        return Err(CliError::Usage(
            "give one of --purity, --beta, --eta, or --scan".into(),
        ));
    }
    (config.purity, config.beta, config.eta) = (purity, beta, eta);
    config.scan = scan;

    let threshold = critical_threshold(n)?;
    let problem = match (purity, beta, eta) {
        (Some(p), _, _) => {
            let nf = n as f64;
            if p.is_finite() && !(p > 1.0 / nf && p <= 1.0) {
                return Err(typent::Error::Feasibility(format!(
                    "no spectrum of a {n}-level system has an interior critical point at purity {p}; \
                     need 1/N < π ≤ 1"
                ))
                .into());
            }
            Some(IsopurityProblem::from_purity(n, p)?)
        }
        (_, Some(b), _) => Some(IsopurityProblem::from_beta(n, b)?),
        (_, _, Some(e)) => Some(IsopurityProblem::from_eta(n, e)?),
        _ => None,
    };

    let mut doc = Document::new(config);
    doc.field("n", n);
    if let Some(problem) = problem {
        let sol = solve_isopurity(&problem)?;
        if !sol.feasible && !scan {
            return Err(typent::Error::Feasibility(format!(
                "η = {} is below the threshold η₊ = {} for N = {n}; the smallest zero is {}",
                problem.eta, threshold.eta_plus, sol.min_eigenvalue
            ))
            .into());
        }
        let report = multiplier_relation_check(&problem, &sol);
        doc.real("purity", problem.purity_target)
            .real("eta", problem.eta)
            .real("beta", problem.beta)
            .real("xi", problem.xi)
            .field("feasible", sol.feasible)
            .field("spectrum", nums(&sol.eigenvalues))
            .real("min_eigenvalue", sol.min_eigenvalue)
            .real("trace_residual", sol.trace_residual)
            .real("purity_residual", sol.purity_residual)
            .real("multiplier_residual", report.multiplier_residual)
            .real("force_residual", report.max_force_residual);
    }
    doc.real("beta_plus", threshold.beta_plus)
        .real("purity_critical", threshold.purity_critical)
        .real("eta_plus", threshold.eta_plus)
        .real("beta_plus_exact", threshold.beta_plus_exact)
        .real("purity_at_eta_plus", threshold.purity_at_eta_plus);
    if scan {
        let points = file
            .pick(a.points, "points")?
            .unwrap_or(DEFAULT_SCAN_POINTS);
        if points < 2 {
            return Err(CliError::Usage(format!(
                "--points must be at least 2, got {points}"
            )));
        }
        doc.config.points = Some(points);
        doc.table = Some(Table::from_records(&threshold_scan(n, points)?));
    }
    Ok(doc)
}

fn sampler_config(
    file: &ConfigFile,
    a: EnsembleArgs,
    config: &mut RunConfig,
) -> CliResult<SamplerConfig> {
    let d = dims(file, a.n, a.m, config)?;
    let samples = file.pick(a.samples, "samples")?.unwrap_or(DEFAULT_SAMPLES);
    let seed = file.pick(a.seed, "seed")?.unwrap_or(DEFAULT_SEED);
    config.samples = Some(samples);
    config.seed = Some(seed);
    Ok(SamplerConfig::new(d, samples, seed)?)
}

fn sample(file: &ConfigFile, a: SampleArgs, mut config: RunConfig) -> CliResult<Document> {
    let cfg = sampler_config(file, a.ensemble, &mut config)?;
    let flag_list: Vec<String> = a
        .functional
        .iter()
        .flat_map(|f| split_functionals(f))
        .collect();
    let mut names = file.pick_list::<String>(Vec::new(), "functional")?;
    if !flag_list.is_empty() {
        names = flag_list;
    }
    if names.is_empty() {
        names.push(Functional::Purity.to_string());
    }
    let functionals = names
        .iter()
        .map(|s| s.parse())
        .collect::<typent::Result<Vec<Functional>>>()?;
    config.functional = functionals.iter().map(ToString::to_string).collect();
    let estimates = estimate_many(&cfg, &functionals);
    let mut doc = Document::new(config);
    doc.table = Some(Table::from_records(&estimates));
    Ok(doc)
}

/// Splits on commas outside parentheses, so `det,trace_power(3)` is two items.
fn split_functionals(s: &str) -> Vec<String> {
    let (mut out, mut cur, mut depth) = (Vec::new(), String::new(), 0usize);
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn histogram(file: &ConfigFile, a: HistogramArgs, mut config: RunConfig) -> CliResult<Document> {
    let cfg = sampler_config(file, a.ensemble, &mut config)?;
    let bins = file.pick(a.bins, "bins")?.unwrap_or(DEFAULT_BINS);
    config.bins = Some(bins);
    let rows = histogram_rescaled(&cfg, bins)?;
    let mut doc = Document::new(config);
    doc.table = Some(Table::from_records(&rows));
    Ok(doc)
}

fn density(file: &ConfigFile, a: DensityArgs, mut config: RunConfig) -> CliResult<Document> {
    let kind = require(file.pick(a.kind, "kind")?, "kind")?;
    config.kind = Some(kind);
    let law = match kind {
        Kind::Semicircle => {
            let beta = require(file.pick(a.beta, "beta")?, "beta")?;
            config.beta = Some(beta);
            ContinuumDensity::semicircle(beta)?
        }
        Kind::MarchenkoPastur => ContinuumDensity::marchenko_pastur(),
    };
    let (m0, m1, m2) = law.moments()?;
    let rows: Vec<[f64; 2]> = law
        .density_curve()
        .into_iter()
        .map(|(l, s)| [l, s])
        .collect();
    let mut doc = Document::new(config);
    doc.real("lambda_minus", law.lambda_minus)
        .real("lambda_plus", law.lambda_plus)
        .real("rescaled_purity", law.rescaled_purity)
        .real("mass", m0)
        .real("mean", m1)
        .real("second_moment", m2);
    doc.table = Some(Table {
        columns: vec!["lambda".into(), "density".into()],
        rows: rows.iter().map(|r| vec![num(r[0]), num(r[1])]).collect(),
    });
    Ok(doc)
}

fn converge(file: &ConfigFile, a: ConvergeArgs, mut config: RunConfig) -> CliResult<Document> {
    let beta = require(file.pick(a.beta, "beta")?, "beta")?;
    let sizes = file.pick_list(a.n, "n")?;
    if sizes.is_empty() {
        return Err(CliError::Usage("missing required --n list".into()));
    }
    if let Some(&bad) = sizes.iter().find(|&&n| n < 2) {
        return Err(
            typent::Error::Dimension(format!("sizes must be at least 2, got {bad}")).into(),
        );
    }
    config.beta = Some(beta);
    config.n_list = sizes.clone();
    let rows = finite_n_convergence(&sizes, beta)?;
    let mut doc = Document::new(config);
    doc.table = Some(Table::from_records(&rows));
    Ok(doc)
}

fn formulas(file: &ConfigFile, a: DimsArgs, mut config: RunConfig) -> CliResult<Document> {
    let d = dims(file, a.n, a.m, &mut config)?;
    let mut doc = Document::new(config);
    doc.table = Some(Table::from_records(&formula_table(d)));
    Ok(doc)
}
