//! The `pmono` command line: one subcommand per operation, JSON reports,
//! CSV/TSV data files and the verification suites.
//!
//! Exit codes: 0 success, 1 a check or validation failed, 2 usage or input
//! error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::abelian::{field_sample, holonomy, holonomy_by_integration, holonomy_winding, AbelianMonopole};
use crate::config::{background_recipe, index_ledger, reducible_configs, validate, BoundaryData, ConfigError};
use crate::exec::Exec;
use crate::geometry::CirclePoint3;
use crate::green::{green_batch, read_points, write_green_csv};
use crate::modelsolve::{
    cylinder_solve, exterior_coercive_solve, exterior_diagonal_solve, CylinderProblem, ExteriorModeProblem, Sector, Source,
};
use crate::spectral::{clusters, kuwabara_eigenvalues, operator_l_spectrum, sphere_laplacian_oracle_with, ORACLE_CELLS};
use crate::verify::{self, CheckRecord, RunReport, Status, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "pmono", version, about = "Periodic monopole numerics")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// JSON input file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub mesh: Option<f64>,
    /// Seed for randomized trials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for data files and `report.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run the computation on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
pub enum Command {
    /// Evaluate G_q at points read as "x y t" lines (from --points or stdin).
    Green {
        #[arg(long)]
        points: Option<PathBuf>,
        /// Pole as "x,y,t".
        #[arg(long, default_value = "0,0,0")]
        q: String,
    },
    /// Dump Higgs field and radial-gauge connection of the asymptotic model.
    Field,
    /// Fibre holonomy of the asymptotic model: closed form against the flux integral.
    Holonomy,
    /// Exceptional weights for circle charge m.
    Weights {
        #[arg(long, allow_negative_numbers = true)]
        charge: i64,
        #[arg(long, default_value_t = 10)]
        jmax: usize,
    },
    /// Discretized monopole-harmonic spectrum against the closed form.
    SpectrumOracle {
        #[arg(long, allow_negative_numbers = true)]
        charge: i64,
        #[arg(long, default_value_t = 4)]
        lcut: usize,
    },
    /// Solve a model problem described in --config.
    SolveModel,
    Validate,
    Dimension,
    Reducibles,
    Background,
    /// Run acceptance checks.
    Verify {
        #[arg(long, conflicts_with = "only")]
        suite: Option<String>,
        #[arg(long)]
        only: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Green { .. } => "green",
            Command::Field => "field",
            Command::Holonomy => "holonomy",
            Command::Weights { .. } => "weights",
            Command::SpectrumOracle { .. } => "spectrum-oracle",
            Command::SolveModel => "solve-model",
            Command::Validate => "validate",
            Command::Dimension => "dimension",
            Command::Reducibles => "reducibles",
            Command::Background => "background",
            Command::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input: exit 2.
    Usage(String),
    /// Ran, but a check failed: exit 1.
    Failed(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Invalid(_) | ConfigError::LambdaTooSmall { .. } => CliError::Failed(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// What a subcommand produced before anything is written.
struct Outcome {
    /// `(file name, contents)` of data files; printed to stdout without `--out`.
    data: Vec<(String, Vec<u8>)>,
    result: Value,
    checks: Vec<CheckRecord>,
    /// Text for stdout instead of the report (e.g. `dimension`).
    plain: Option<String>,
}

impl Outcome {
    fn report(result: Value) -> Self {
        Self { data: Vec::new(), result, checks: Vec::new(), plain: None }
    }
}

/// Report plus the subcommand's own JSON payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandReport {
    #[serde(flatten)]
    pub run: RunReport,
    pub result: Value,
}

pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(CliError::Failed(msg)) => {
            eprintln!("pmono: {msg}");
            1
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("pmono: {msg}");
            2
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let c = &cli.common;
    let exec = if c.sequential { Exec::Sequential } else { Exec::default() };
    let mut digest_inputs: Vec<u8> = serde_json::to_vec(&(cli.command.name(), &cli.command, c.tol, c.mesh, c.seed)).unwrap_or_default();
    if let Some(path) = &c.config {
        digest_inputs.extend(read_file(path)?);
    }
    if let Command::Green { points: Some(path), .. } = &cli.command {
        digest_inputs.extend(read_file(path)?);
    }

    let outcome = match &cli.command {
        Command::Green { points, q } => green(points.as_deref(), q, c.tol.unwrap_or(1e-10), exec, &mut digest_inputs)?,
        Command::Field => field(&load(c)?, c.mesh.unwrap_or(0.5), c.tol.unwrap_or(1e-10))?,
        Command::Holonomy => holonomy_cmd(&load(c)?, c.tol.unwrap_or(1e-9))?,
        Command::Weights { charge, jmax } => weights(*charge, *jmax)?,
        Command::SpectrumOracle { charge, lcut } => spectrum(*charge, *lcut, exec)?,
        Command::SolveModel => solve_model(c)?,
        Command::Validate => validate_cmd(&load(c)?),
        Command::Dimension => dimension(&load(c)?)?,
        Command::Reducibles => reducibles(&load(c)?, c.tol.unwrap_or(crate::config::REDUCIBLE_TOL), exec)?,
        Command::Background => background(&load(c)?)?,
        Command::Verify { suite, only } => verify_cmd(suite.as_deref(), only.as_deref(), VerifyOptions { seed: c.seed, exec })?,
    };

    let inputs_digest = format!("{:x}", Sha256::digest(&digest_inputs));
    let mut outputs = Vec::new();
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    if let Some(dir) = &c.out {
        fs::create_dir_all(dir)?;
        for (name, bytes) in &outcome.data {
            fs::write(dir.join(name), bytes)?;
            outputs.push(name.clone());
        }
        outputs.push("report.json".into());
    }
    let report = CommandReport {
        run: RunReport { command: cli.command.name().into(), inputs_digest, outputs, checks: outcome.checks },
        result: outcome.result,
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Usage(e.to_string()))? + "\n";
    // every report must parse back into the schema it was written from
    let back: CommandReport = serde_json::from_str(&json).map_err(|e| CliError::Usage(format!("report does not round-trip: {e}")))?;
    debug_assert_eq!(back.run.command, report.run.command);

    if let Some(dir) = &c.out {
        fs::write(dir.join("report.json"), &json)?;
    }
    if let Some(text) = &outcome.plain {
        stdout.write_all(text.as_bytes())?;
    } else if c.out.is_none() && !outcome.data.is_empty() {
        for (_, bytes) in &outcome.data {
            stdout.write_all(bytes)?;
        }
    } else {
        stdout.write_all(json.as_bytes())?;
    }
    stdout.flush()?;

    for rec in &report.run.checks {
        let mark = if rec.status == Status::Pass { "PASS" } else { "FAIL" };
        eprintln!("[{mark}] {} measured {:.4e} tol {:.1e} ({:.2}s) {}", rec.name, rec.measured, rec.tolerance, rec.elapsed_s, rec.detail);
    }
    if report.run.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.run.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.name.as_str()).collect();
        Err(CliError::Failed(format!("failed: {}", failed.join(", "))))
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(c: &Common) -> Result<BoundaryData, CliError> {
    let path = c.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
    Ok(BoundaryData::load(path)?)
}

fn check(name: &str, passed: bool, measured: f64, tolerance: f64, detail: String) -> CheckRecord {
    CheckRecord {
        name: name.into(),
        status: if passed { Status::Pass } else { Status::Fail },
        measured,
        tolerance,
        detail,
        elapsed_s: 0.0,
        budget_s: 0.0,
    }
}

fn parse_point(s: &str) -> Result<CirclePoint3, CliError> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| CliError::Usage(format!("bad point {s:?}")))?;
    match v[..] {
        [x, y, t] => Ok(CirclePoint3::new(x, y, t)),
        _ => Err(CliError::Usage(format!("point {s:?} needs three coordinates"))),
    }
}

fn green(points: Option<&Path>, q: &str, tol: f64, exec: Exec, digest: &mut Vec<u8>) -> Result<Outcome, CliError> {
    let q = parse_point(q)?;
    let pts = match points {
        Some(path) => read_points(io::BufReader::new(fs::File::open(path)?)),
        None => {
            let mut buf = Vec::new();
            io::Read::read_to_end(&mut io::stdin(), &mut buf)?;
            digest.extend(&buf);
            read_points(io::Cursor::new(buf))
        }
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let evals = green_batch(&pts, &q, tol, exec);
    let mut csv = Vec::new();
    write_green_csv(&mut csv, &pts, &evals)?;
    let failures = evals.iter().filter(|e| e.is_err()).count();
    let mut out = Outcome::report(json!({ "points": pts.len(), "failures": failures, "tol": tol }));
    out.data.push(("green.csv".into(), csv));
    out.checks.push(check("green_all_points_evaluated", failures == 0, failures as f64, 0.0, format!("{failures} of {} points failed", pts.len())));
    Ok(out)
}

/// Periodic Dirac monopole of charge `k_inf` at `q` with the vacuum data:
/// the model the boundary conditions prescribe at infinity.
fn asymptotic_model(bd: &BoundaryData) -> Result<AbelianMonopole, CliError> {
    let m = if bd.k_inf == 0 {
        AbelianMonopole::vacuum(bd.v, bd.b)
    } else {
        AbelianMonopole::periodic(bd.center_q, bd.k_inf, bd.v, bd.b)
    };
    m.map_err(|e| CliError::Usage(e.to_string()))
}

fn field(bd: &BoundaryData, mesh: f64, tol: f64) -> Result<Outcome, CliError> {
    if !(mesh > 0.0 && mesh <= 4.0) {
        return Err(CliError::Usage("--mesh must lie in (0, 4]".into()));
    }
    let m = asymptotic_model(bd)?;
    let steps = ((4.0 / mesh).round() as usize).max(1);
    let angles = 12;
    let mut csv = String::from("r,theta,t,higgs,a_theta,a_t\n");
    let mut failures = 0;
    for i in 0..=steps {
        let r = 2.0 + 4.0 * i as f64 / steps as f64;
        for a in 0..angles {
            let theta = std::f64::consts::TAU * a as f64 / angles as f64;
            for b in 0..angles {
                let t = std::f64::consts::TAU * b as f64 / angles as f64;
                let p = CirclePoint3::new(r * theta.cos(), r * theta.sin(), t);
                match field_sample(&m, &p, tol) {
                    Ok(s) => csv.push_str(&format!("{r:.17e},{theta:.17e},{t:.17e},{:.17e},{:.17e},{:.17e}\n", s.higgs, s.a_theta, s.a_t)),
                    Err(_) => {
                        failures += 1;
                        csv.push_str(&format!("{r:.17e},{theta:.17e},{t:.17e},nan,nan,nan\n"));
                    }
                }
            }
        }
    }
    let mut out = Outcome::report(json!({ "k_inf": bd.k_inf, "v": bd.v, "b": bd.b, "failures": failures }));
    out.data.push(("field.csv".into(), csv.into_bytes()));
    Ok(out)
}

fn holonomy_cmd(bd: &BoundaryData, tol: f64) -> Result<Outcome, CliError> {
    let m = asymptotic_model(bd)?;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..8 {
        let angle = std::f64::consts::TAU * i as f64 / 8.0;
        let z = bd.center_q.z() + num_complex::Complex64::from_polar(1.0 + 0.5 * i as f64, angle);
        let closed = holonomy(&m, z).map_err(|e| CliError::Usage(e.to_string()))?;
        let integral = holonomy_by_integration(&m, z, tol).map_err(|e| CliError::Usage(e.to_string()))?;
        worst = worst.max((closed - integral).norm());
        rows.push(json!({ "x": z.re, "y": z.im, "closed": [closed.re, closed.im], "integral": [integral.re, integral.im] }));
    }
    let radius = 20.0 + bd.center_q.z().norm();
    let winding = holonomy_winding(&m, radius, 400).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = Outcome::report(json!({ "samples": rows, "winding": winding, "k_total": m.k_total() }));
    out.checks.push(check("holonomy_routes_agree", worst <= 1e-6, worst, 1e-6, "closed form against flux integral".into()));
    out.checks.push(check("holonomy_winding", winding == -m.k_total(), winding as f64, 0.0, format!("winding {winding}, k_total {}", m.k_total())));
    Ok(out)
}

fn weights(charge: i64, jmax: usize) -> Result<Outcome, CliError> {
    let table = operator_l_spectrum(charge, jmax);
    let mut tsv = Vec::new();
    table.write_tsv(&mut tsv)?;
    let mut out = Outcome::report(serde_json::to_value(&table).map_err(|e| CliError::Usage(e.to_string()))?);
    out.data.push(("weights.tsv".into(), tsv));
    Ok(out)
}

fn spectrum(charge: i64, lcut: usize, exec: Exec) -> Result<Outcome, CliError> {
    let values = sphere_laplacian_oracle_with(charge, lcut, ORACLE_CELLS, exec).map_err(|e| CliError::Usage(e.to_string()))?;
    let cl = clusters(&values);
    let formula = kuwabara_eigenvalues(charge, lcut);
    let mut tsv = String::from("eigenvalue\tmultiplicity\tformula\tformula_mult\n");
    let mut worst: f64 = 0.0;
    let mut mult_ok = true;
    for (i, (mean, size)) in cl.iter().enumerate() {
        match formula.get(i) {
            Some(f) => {
                tsv.push_str(&format!("{mean:.12e}\t{size}\t{:.12e}\t{}\n", f.eigenvalue, f.multiplicity));
                if f.l <= lcut as u64 {
                    worst = worst.max((mean - f.eigenvalue).abs() / f.eigenvalue.max(1.0));
                    mult_ok &= *size as u64 == f.multiplicity;
                }
            }
            None => tsv.push_str(&format!("{mean:.12e}\t{size}\t\t\n")),
        }
    }
    let mut out = Outcome::report(json!({ "charge": charge, "l_cut": lcut, "clusters": cl }));
    out.data.push(("spectrum.tsv".into(), tsv.into_bytes()));
    out.checks.push(check("spectrum_matches_formula", worst <= 0.01 && mult_ok, worst, 0.01, format!("multiplicities match: {mult_ok}")));
    Ok(out)
}

/// Model problem file: `{"type": ..., "source": preset name or object, "mesh": ...}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ModelProblem {
    Cylinder {
        lambda: f64,
        #[serde(rename = "T", default)]
        t0: f64,
        #[serde(default = "one")]
        phi: f64,
        delta: f64,
        #[serde(default)]
        source: SourceChoice,
        mesh: Option<f64>,
    },
    ExteriorDiagonal {
        mode: u32,
        #[serde(rename = "R")]
        r_in: f64,
        #[serde(default = "one")]
        phi: f64,
        delta: f64,
        #[serde(default)]
        source: SourceChoice,
        mesh: Option<f64>,
    },
    ExteriorCoercive {
        sector: Sector,
        #[serde(rename = "R")]
        r_in: f64,
        #[serde(default)]
        phi: f64,
        #[serde(default = "minus_half")]
        delta: f64,
        #[serde(default)]
        source: SourceChoice,
        mesh: Option<f64>,
    },
}

fn one() -> f64 {
    1.0
}

fn minus_half() -> f64 {
    -0.5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SourceChoice {
    Preset(String),
    Explicit(Source),
}

impl Default for SourceChoice {
    fn default() -> Self {
        SourceChoice::Preset("zero".into())
    }
}

impl SourceChoice {
    /// Presets: `zero`, `exp3` (`e^{−3x}`), `inverse_quartic` (`x^{−4}`) and
    /// `bump` (unit bump on `[start + 1, start + 3]`).
    fn resolve(&self, start: f64) -> Result<Source, CliError> {
        match self {
            SourceChoice::Explicit(s) => Ok(s.clone()),
            SourceChoice::Preset(name) => match name.as_str() {
                "zero" => Ok(Source::Zero),
                "exp3" => Ok(Source::Exponential { rate: 3.0 }),
                "inverse_quartic" => Ok(Source::Power { power: 4.0 }),
                "bump" => Ok(Source::Bump { center: start + 2.0, width: 1.0, amplitude: 1.0 }),
                other => Err(CliError::Usage(format!("unknown source preset {other:?}"))),
            },
        }
    }
}

fn solve_model(c: &Common) -> Result<Outcome, CliError> {
    let path = c.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let problem: ModelProblem = serde_json::from_slice(&read_file(path)?).map_err(|e| CliError::Usage(format!("bad model problem: {e}")))?;
    let usage = |e: crate::modelsolve::ModelError| CliError::Usage(e.to_string());
    let mut csv = String::new();
    let result = match problem {
        ModelProblem::Cylinder { lambda, t0, phi, delta, source, mesh } => {
            let p = CylinderProblem { lambda, t0, phi, delta, source: source.resolve(t0)? };
            let s = cylinder_solve(&p, c.mesh.or(mesh).unwrap_or(1e-3)).map_err(usage)?;
            csv.push_str("tau,u\n");
            for (t, u) in s.tau.iter().zip(&s.u) {
                csv.push_str(&format!("{t:.17e},{u:.17e}\n"));
            }
            json!({ "decay_rate": s.decay_rate, "residual": s.residual, "energy": null, "gamma_plus": s.gamma_plus,
                    "in_weighted_space": s.in_weighted_space(delta) })
        }
        ModelProblem::ExteriorDiagonal { mode, r_in, phi, delta, source, mesh } => {
            let p = ExteriorModeProblem { sector: Sector::DiagonalInvariant { mode }, r_in, delta, phi, source: source.resolve(r_in)? };
            let s = exterior_diagonal_solve(&p, c.mesh.or(mesh).unwrap_or(1e-3)).map_err(usage)?;
            csv.push_str("r,u\n");
            for (r, u) in s.r.iter().zip(&s.u) {
                csv.push_str(&format!("{r:.17e},{u:.17e}\n"));
            }
            json!({ "decay_rate": null, "residual": s.residual, "energy": null, "branch": s.branch,
                    "growth_coefficient": s.growth_coefficient })
        }
        ModelProblem::ExteriorCoercive { sector, r_in, phi, delta, source, mesh } => {
            let p = ExteriorModeProblem { sector, r_in, delta, phi, source: source.resolve(r_in)? };
            let s = exterior_coercive_solve(&p, c.mesh.or(mesh).unwrap_or(5e-3)).map_err(usage)?;
            csv.push_str("r,u\n");
            for (r, u) in s.r.iter().zip(&s.u) {
                csv.push_str(&format!("{r:.17e},{u:.17e}\n"));
            }
            json!({ "decay_rate": s.decay_rate, "residual": s.residual, "energy": s.energy_ratio, "mu": s.mu,
                    "l2_u": s.l2_u, "l2_f": s.l2_f })
        }
    };
    let mut out = Outcome::report(result);
    out.data.push(("solution.csv".into(), csv.into_bytes()));
    Ok(out)
}

fn validate_cmd(bd: &BoundaryData) -> Outcome {
    let violations = validate(bd);
    let ok = violations.is_empty();
    let mut out = Outcome::report(json!({ "valid": ok, "n": bd.n(), "k": bd.charge(), "violations": violations }));
    out.checks.push(check("boundary_data_valid", ok, violations.len() as f64, 0.0, violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")));
    out
}

fn dimension(bd: &BoundaryData) -> Result<Outcome, CliError> {
    let ledger = index_ledger(bd)?;
    let mut out = Outcome::report(json!({ "dimension": ledger.total, "ledger": ledger }));
    out.plain = Some(format!("{}\n", ledger.total));
    Ok(out)
}

fn reducibles(bd: &BoundaryData, tol: f64, exec: Exec) -> Result<Outcome, CliError> {
    let rep = reducible_configs(bd, tol, exec)?;
    let solutions: Vec<Value> = rep
        .solutions
        .iter()
        .map(|s| json!({ "subset": s.subset, "charges": s.abelian_model.terms().iter().map(|t| t.charge).collect::<Vec<_>>() }))
        .collect();
    Ok(Outcome::report(json!({ "k": bd.charge(), "n": bd.n(), "tol": tol, "reason": rep.reason, "solutions": solutions })))
}

fn background(bd: &BoundaryData) -> Result<Outcome, CliError> {
    let lambda = bd.lambda.ok_or_else(|| CliError::Usage("background needs \"lambda\" in the configuration".into()))?;
    let plan = background_recipe(bd, lambda)?;
    let summary = plan.summary();
    let mut out = Outcome::report(serde_json::to_value(&summary).map_err(|e| CliError::Usage(e.to_string()))?);
    out.checks.push(check("annulus_higgs_bound", plan.min_abs_higgs >= lambda / 2.0, plan.min_abs_higgs, lambda / 2.0, "min |Phi| on the patch annulus, must be >= lambda/2".into()));
    Ok(out)
}

fn verify_cmd(suite: Option<&str>, only: Option<&str>, opts: VerifyOptions) -> Result<Outcome, CliError> {
    let checks = match (suite, only) {
        (_, Some(name)) => vec![verify::find(name).ok_or_else(|| CliError::Usage(format!("unknown check {name:?}")))?],
        (Some(s), None) => verify::suite(s).ok_or_else(|| CliError::Usage(format!("unknown suite {s:?}; known: all, {}", verify::suites().join(", "))))?,
        (None, None) => verify::suite("all").expect("nonempty"),
    };
    let records: Vec<CheckRecord> = checks.iter().map(|c| verify::run_check(c, &opts)).collect();
    let mut out = Outcome::report(json!({ "suite": suite.unwrap_or(if only.is_some() { "only" } else { "all" }), "seed": opts.seed }));
    out.checks = records;
    Ok(out)
}
