//! Command-line front end: frame checks, lattice reports, sampling and
//! reconstruction, plus ready-made demo configurations.
//!
//! Exit codes: 0 success, 2 configuration error, 3 sizing (too few sample
//! points for the degree bound), 4 ambiguous reconstruction, 5 infeasible
//! data. `PHASELESS_THREADS` caps the per-point parallelism of the recovery
//! stage.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use phaseless::frames::{self, DecisionReason, FrameC2};
use phaseless::hermite::{HermiteSignal, WindowSpec};
use phaseless::io::{parse_sample_set, write_sample_set};
use phaseless::lattice::{point_sets_equal, separation_and_density_window, ShiftedLattice};
use phaseless::reconstruct::{
    point_budget, reconstruct, reconstruct_real, sample, ReconstructError, ReconstructOptions,
    ReconstructionReport, SampleSet, Status,
};
use serde::Deserialize;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 2;
const EXIT_SIZING: u8 = 3;
const EXIT_AMBIGUOUS: u8 = 4;
const EXIT_INFEASIBLE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "phaseless",
    version,
    about = "Multi-window STFT phase retrieval on lattice samples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a window family does phase retrieval in C²
    CheckFrame(CheckFrameArgs),
    /// Sample multi-window spectrogram magnitudes on a lattice window (CSV)
    Sample(SampleArgs),
    /// Reconstruct a signal from sampled magnitudes (JSON report)
    Reconstruct(ReconstructArgs),
    /// Report density, uniqueness thresholds and decompositions of a lattice
    LatticeInfo(LatticeInfoArgs),
    /// Run the built-in demo configurations end to end
    Demo,
}

#[derive(Args)]
struct CheckFrameArgs {
    /// Experiment configuration (JSON)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in frame preset: fig1-frame or cor15(λ1,λ2,λ3)
    #[arg(long)]
    preset: Option<String>,
    /// Output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Experiment configuration (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output path for the CSV (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed override for a random signal
    #[arg(long)]
    seed: Option<u64>,
    /// Window radius override
    #[arg(long)]
    radius: Option<f64>,
    /// Degree bound override
    #[arg(long)]
    degree: Option<usize>,
    /// Signal class: complex or real
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Sample CSV produced by the sample command
    #[arg(long, conflicts_with = "config")]
    input: Option<PathBuf>,
    /// Experiment configuration (JSON); samples internally, then solves
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path for the JSON report (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Signal class: complex or real
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Degree bound override
    #[arg(long)]
    degree: Option<usize>,
    /// Relative solve tolerance override
    #[arg(long)]
    tol: Option<f64>,
    /// Seed override for a random signal in the config
    #[arg(long)]
    seed: Option<u64>,
    /// Window radius override (config path only)
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(Args)]
struct LatticeInfoArgs {
    /// Experiment configuration (JSON) containing a lattice
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in lattice preset: fig2-lattice
    #[arg(long)]
    preset: Option<String>,
    /// Output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Complex,
    Real,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn from_reconstruct(err: ReconstructError) -> Self {
        let code = match &err {
            ReconstructError::FrameRejected(_) => EXIT_CONFIG,
            ReconstructError::Sizing { .. } => EXIT_SIZING,
            ReconstructError::PointInfeasible { .. } => EXIT_INFEASIBLE,
            ReconstructError::RealityViolated { .. } => EXIT_INFEASIBLE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration file
// ---------------------------------------------------------------------------

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    frame: Option<FrameField>,
    lattice: Option<LatticeField>,
    window_radius: Option<f64>,
    degree_bound: Option<usize>,
    signal: Option<SignalField>,
    mode: Option<String>,
    tolerances: Option<ToleranceField>,
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FrameField {
    Preset(String),
    Vectors(Vec<[[f64; 2]; 2]>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LatticeField {
    Preset(String),
    Explicit(ShiftedLattice),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SignalField {
    Explicit { coeffs: Vec<[f64; 2]> },
    Random { random: RandomSignal },
}

#[derive(Deserialize)]
struct RandomSignal {
    degree: usize,
    seed: u64,
    #[serde(default)]
    real: bool,
}

#[derive(Deserialize)]
struct ToleranceField {
    solve: Option<f64>,
}

fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("cannot parse {}: {e}", path.display())))
}

fn fig1_frame() -> Vec<WindowSpec> {
    let c = Complex64::new;
    vec![
        WindowSpec::new(c(1.0, 0.0), c(0.0, 0.0)),
        WindowSpec::new(c(1.0, 0.0), c(1.0, 0.0)),
        WindowSpec::new(c(-1.0, 0.0), c(1.0, 0.0)),
        WindowSpec::new(c(0.0, 1.0), c(1.0, 0.0)),
    ]
}

/// The half-density sampling lattice of the second demo configuration: the
/// sheared set Γ with generator [[1/2, 0], [1/2, 1]] and shift (0, 1/4).
/// Its union with its own conjugate is (0, 1/4) + (1/2)ℤ² of density 4.
fn fig2_lattice() -> ShiftedLattice {
    ShiftedLattice::new([0.0, 0.25], [[0.5, 0.0], [0.5, 1.0]]).expect("fixed generator")
}

/// Parses one complex number in `a+bi` form: `1`, `-2.5`, `i`, `-i`, `2i`,
/// `1+2i`, `0.5-0.25i`.
fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(CliError::config("empty complex literal"));
    }
    if let Some(rest) = t.strip_suffix('i') {
        // split the imaginary literal at the sign of its last term
        let bytes = rest.as_bytes();
        let split = (1..rest.len()).rev().find(|&i| {
            rest.is_char_boundary(i)
                && (bytes[i] == b'+' || bytes[i] == b'-')
                && !matches!(bytes[i - 1], b'e' | b'E')
        });
        let (re_part, im_part) = match split {
            Some(i) => (&rest[..i], &rest[i..]),
            None => ("", rest),
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => im_part
                .parse()
                .map_err(|e| CliError::config(format!("bad complex literal {s:?}: {e}")))?,
        };
        let re = if re_part.is_empty() {
            0.0
        } else {
            re_part
                .parse()
                .map_err(|e| CliError::config(format!("bad complex literal {s:?}: {e}")))?
        };
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = t
            .parse()
            .map_err(|e| CliError::config(format!("bad complex literal {s:?}: {e}")))?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn frame_preset(name: &str) -> Result<Vec<WindowSpec>, CliError> {
    let name = name.trim();
    if name == "fig1-frame" {
        return Ok(fig1_frame());
    }
    if let Some(rest) = name.strip_prefix("cor15(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| CliError::config(format!("malformed preset {name:?}")))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(CliError::config("cor15 takes exactly three ratios"));
        }
        let mut windows = vec![WindowSpec::new(Complex64::ONE, Complex64::ZERO)];
        for p in parts {
            windows.push(WindowSpec::new(parse_complex(p)?, Complex64::ONE));
        }
        return Ok(windows);
    }
    Err(CliError::config(format!("unknown frame preset {name:?}")))
}

fn lattice_preset(name: &str) -> Result<ShiftedLattice, CliError> {
    match name.trim() {
        "fig2-lattice" => Ok(fig2_lattice()),
        other => Err(CliError::config(format!("unknown lattice preset {other:?}"))),
    }
}

fn resolve_frame(field: &Option<FrameField>) -> Result<Vec<WindowSpec>, CliError> {
    match field {
        None => Err(CliError::config("config has no frame")),
        Some(FrameField::Preset(name)) => frame_preset(name),
        Some(FrameField::Vectors(v)) => {
            if v.len() < 4 {
                return Err(CliError::config(format!(
                    "frame needs at least 4 windows, got {}",
                    v.len()
                )));
            }
            Ok(v.iter()
                .map(|[[lr, li], [mr, mi]]| {
                    WindowSpec::new(Complex64::new(*lr, *li), Complex64::new(*mr, *mi))
                })
                .collect())
        }
    }
}

fn resolve_lattice(field: &Option<LatticeField>) -> Result<ShiftedLattice, CliError> {
    match field {
        None => Err(CliError::config("config has no lattice")),
        Some(LatticeField::Preset(name)) => lattice_preset(name),
        Some(LatticeField::Explicit(l)) => {
            ShiftedLattice::new(l.shift, l.generator).map_err(|e| CliError::config(e.to_string()))
        }
    }
}

fn resolve_signal(
    field: &Option<SignalField>,
    seed_override: Option<u64>,
) -> Result<HermiteSignal, CliError> {
    match field {
        None => Err(CliError::config("config has no signal")),
        Some(SignalField::Explicit { coeffs }) => Ok(HermiteSignal::new(
            coeffs
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
        )),
        Some(SignalField::Random { random }) => {
            let seed = seed_override.unwrap_or(random.seed);
            Ok(if random.real {
                HermiteSignal::random_real(random.degree, seed)
            } else {
                HermiteSignal::random(random.degree, seed)
            })
        }
    }
}

fn resolve_mode(config: &ConfigFile, flag: Option<Mode>) -> Result<Mode, CliError> {
    if let Some(m) = flag {
        return Ok(m);
    }
    match config.mode.as_deref() {
        None | Some("complex") => Ok(Mode::Complex),
        Some("real") => Ok(Mode::Real),
        Some(other) => Err(CliError::config(format!("unknown mode {other:?}"))),
    }
}

fn threads_from_env() -> usize {
    std::env::var("PHASELESS_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn fmt_c(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_check_frame(args: &CheckFrameArgs) -> Result<u8, CliError> {
    let windows = if let Some(preset) = &args.preset {
        frame_preset(preset)?
    } else if let Some(path) = &args.config {
        resolve_frame(&load_config(path)?.frame)?
    } else {
        return Err(CliError::config("check-frame needs --config or --preset"));
    };
    if windows.len() < 4 {
        return Err(CliError::config("frame needs at least 4 windows"));
    }
    let frame = FrameC2::new(windows.iter().map(|w| w.as_vector()).collect());
    let mut out = String::new();
    match frames::does_phase_retrieval(&frame, frames::COLLINEARITY_TOL) {
        Ok(decision) => {
            out.push_str(&format!(
                "decision: {}\n",
                if decision.does_retrieval { "yes" } else { "no" }
            ));
            if !decision.betas.is_empty() {
                let betas: Vec<String> = decision.betas.iter().map(|b| fmt_c(*b)).collect();
                out.push_str(&format!("betas: {}\n", betas.join(", ")));
                out.push_str(&format!("triangle_area: {:.6e}\n", decision.triangle_area));
            }
            match decision.reason {
                DecisionReason::AllConditionsHold => {}
                DecisionReason::ZeroMu { index } => {
                    out.push_str(&format!("reason: window {index} is parallel to the anchor (mu = 0)\n"));
                }
                DecisionReason::CollinearRatios { area_ratio } => {
                    out.push_str(&format!(
                        "reason: ratios are collinear (area ratio {area_ratio:.3e})\n"
                    ));
                }
            }
            if !decision.does_retrieval {
                let pair = frames::ambiguity_pair(&frame).ok().or_else(|| {
                    phaseless::ambiguity_search_c2(
                        &frame.vectors,
                        100_000,
                        1,
                    )
                });
                if let Some((z, w)) = pair {
                    out.push_str(&format!(
                        "ambiguity_pair:\n  z = ({}, {})\n  w = ({}, {})\n",
                        fmt_c(z[0]),
                        fmt_c(z[1]),
                        fmt_c(w[0]),
                        fmt_c(w[1])
                    ));
                }
            }
        }
        Err(frames::FrameError::ZeroAnchor) => {
            out.push_str("decision: no\nreason: first window is zero\n");
            if let Some((z, w)) = phaseless::ambiguity_search_c2(&frame.vectors, 100_000, 1) {
                out.push_str(&format!(
                    "ambiguity_pair:\n  z = ({}, {})\n  w = ({}, {})\n",
                    fmt_c(z[0]),
                    fmt_c(z[1]),
                    fmt_c(w[0]),
                    fmt_c(w[1])
                ));
            }
        }
        Err(e) => return Err(CliError::config(e.to_string())),
    }
    write_output(&args.out, &out)?;
    Ok(0)
}

struct SamplePlan {
    set: SampleSet,
    warnings: Vec<String>,
    degree_bound: usize,
    tol: f64,
    mode: Mode,
}

fn plan_sample(
    config: &ConfigFile,
    mode_flag: Option<Mode>,
    seed: Option<u64>,
    radius: Option<f64>,
    degree: Option<usize>,
    tol: Option<f64>,
) -> Result<SamplePlan, CliError> {
    let windows = resolve_frame(&config.frame)?;
    let lattice = resolve_lattice(&config.lattice)?;
    let signal = resolve_signal(&config.signal, seed.or(config.seed))?;
    let mode = resolve_mode(config, mode_flag)?;
    let radius = radius
        .or(config.window_radius)
        .ok_or_else(|| CliError::config("config has no window_radius"))?;
    if radius <= 0.0 {
        return Err(CliError::config("window_radius must be positive"));
    }
    let degree_bound = degree
        .or(config.degree_bound)
        .or_else(|| signal.degree())
        .unwrap_or(8);
    let tol = tol
        .or(config.tolerances.as_ref().and_then(|t| t.solve))
        .unwrap_or(1e-8);
    let points = lattice.enumerate(radius);
    // points available to the solver: the conjugate extension doubles a
    // real-mode window except where it is already symmetric
    let effective = match mode {
        Mode::Complex => points.len(),
        Mode::Real => {
            let mut doubled = points.points.clone();
            for p in &points.points {
                let mirrored = [p[0], -p[1]];
                if !doubled
                    .iter()
                    .any(|q| (q[0] - mirrored[0]).abs() <= 1e-9 && (q[1] - mirrored[1]).abs() <= 1e-9)
                {
                    doubled.push(mirrored);
                }
            }
            doubled.len()
        }
    };
    let needed = point_budget(degree_bound);
    if effective < needed {
        return Err(CliError {
            code: EXIT_SIZING,
            message: format!(
                "window radius {radius} gives {effective} usable points; degree bound {degree_bound} needs {needed}"
            ),
        });
    }
    let mut warnings = Vec::new();
    let density = lattice.density();
    let threshold = match mode {
        Mode::Complex => 4.0,
        Mode::Real => 2.0,
    };
    if density < threshold * (1.0 - 1e-12) {
        warnings.push(format!(
            "lattice density {density:.6} is below {threshold}; uniqueness is not guaranteed in this mode"
        ));
    }
    let set = sample(&signal, &windows, &points);
    Ok(SamplePlan {
        set,
        warnings,
        degree_bound,
        tol,
        mode,
    })
}

fn cmd_sample(args: &SampleArgs) -> Result<u8, CliError> {
    let config = load_config(&args.config)?;
    let plan = plan_sample(
        &config,
        args.mode,
        args.seed,
        args.radius,
        args.degree,
        None,
    )?;
    let csv = write_sample_set(&plan.set, &plan.warnings);
    write_output(&args.out, &csv)?;
    Ok(0)
}

fn report_exit_code(report: &ReconstructionReport) -> u8 {
    match report.status {
        Status::Unique | Status::ZeroSignal => 0,
        Status::Ambiguous => EXIT_AMBIGUOUS,
        Status::Infeasible => EXIT_INFEASIBLE,
    }
}

fn cmd_reconstruct(args: &ReconstructArgs) -> Result<u8, CliError> {
    let threads = threads_from_env();
    let (set, mode, degree_bound, tol) = if let Some(input) = &args.input {
        let text = std::fs::read_to_string(input)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", input.display())))?;
        let set = parse_sample_set(&text).map_err(|e| CliError::config(e.to_string()))?;
        let mode = args.mode.unwrap_or(Mode::Complex);
        (set, mode, args.degree.unwrap_or(8), args.tol.unwrap_or(1e-8))
    } else if let Some(path) = &args.config {
        let config = load_config(path)?;
        let plan = plan_sample(
            &config,
            args.mode,
            args.seed,
            args.radius,
            args.degree,
            args.tol,
        )?;
        (plan.set, plan.mode, plan.degree_bound, plan.tol)
    } else {
        return Err(CliError::config("reconstruct needs --input or --config"));
    };
    let opts = ReconstructOptions {
        degree_bound,
        tol,
        threads,
    };
    let report = match mode {
        Mode::Complex => reconstruct(&set, &opts),
        Mode::Real => reconstruct_real(&set, &opts),
    }
    .map_err(CliError::from_reconstruct)?;
    let mut json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::config(format!("cannot serialize report: {e}")))?;
    json.push('\n');
    write_output(&args.out, &json)?;
    Ok(report_exit_code(&report))
}

/// Recognizes lattices of the shape (0, β/2) + diag(α, β)ℤ², the ones whose
/// half-density decompositions are verified in the report.
fn gamma_parameters(lattice: &ShiftedLattice) -> Option<(f64, f64)> {
    let g = lattice.generator;
    let scale = g.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if g[0][1].abs() > 1e-12 * scale || g[1][0].abs() > 1e-12 * scale {
        return None;
    }
    let (alpha, beta) = (g[0][0], g[1][1]);
    if lattice.shift[0].abs() <= 1e-12 && (lattice.shift[1] - beta / 2.0).abs() <= 1e-12 {
        Some((alpha, beta))
    } else {
        None
    }
}

fn cmd_lattice_info(args: &LatticeInfoArgs) -> Result<u8, CliError> {
    let lattice = if let Some(preset) = &args.preset {
        lattice_preset(preset)?
    } else if let Some(path) = &args.config {
        resolve_lattice(&load_config(path)?.lattice)?
    } else {
        return Err(CliError::config("lattice-info needs --config or --preset"));
    };
    let radius = 10.0;
    let window = lattice.enumerate(radius);
    let (min_gap, window_density) = separation_and_density_window(&window)
        .map_err(|e| CliError::config(e.to_string()))?;
    let mut doc = serde_json::json!({
        "lattice": lattice,
        "density": lattice.density(),
        "uniqueness": {
            "alpha=pi": phaseless::perelomov_uniqueness(&lattice, PI),
            "alpha=2pi": phaseless::perelomov_uniqueness(&lattice, 2.0 * PI),
            "alpha=4pi": phaseless::perelomov_uniqueness(&lattice, 4.0 * PI),
        },
        "window": {
            "radius": radius,
            "points": window.len(),
            "min_gap": min_gap,
            "density_estimate": window_density,
        },
        "gamma": serde_json::Value::Null,
    });
    if let Some((alpha, beta)) = gamma_parameters(&lattice) {
        let (lambda, gamma1, gamma2) =
            phaseless::gamma_decompositions(alpha, beta).map_err(|e| CliError::config(e.to_string()))?;
        let full = lambda.enumerate(radius);
        let verify = |gamma: &ShiftedLattice| -> (bool, usize) {
            let mut union = gamma.enumerate(radius).points;
            union.extend(gamma.conjugate().enumerate(radius).points);
            (point_sets_equal(&union, &full.points, 1e-9), union.len())
        };
        let (ok1, n1) = verify(&gamma1);
        let (ok2, n2) = verify(&gamma2);
        doc["gamma"] = serde_json::json!({
            "alpha": alpha,
            "beta": beta,
            "gamma1": gamma1,
            "gamma2": gamma2,
            "density_halved": gamma1.density() == lattice.density() / 2.0
                && gamma2.density() == lattice.density() / 2.0,
            "window_radius": radius,
            "lambda_window_points": full.len(),
            "gamma1_union_matches": ok1,
            "gamma1_union_points": n1,
            "gamma2_union_matches": ok2,
            "gamma2_union_points": n2,
        });
    }
    let mut json = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::config(format!("cannot serialize: {e}")))?;
    json.push('\n');
    write_output(&args.out, &json)?;
    Ok(0)
}

fn cmd_demo() -> Result<u8, CliError> {
    let mut out = String::new();

    // 1. the standard four-window family does phase retrieval
    let frame = FrameC2::new(fig1_frame().iter().map(|w| w.as_vector()).collect());
    let decision = frames::does_phase_retrieval(&frame, frames::COLLINEARITY_TOL)
        .map_err(|e| CliError::config(e.to_string()))?;
    out.push_str(&format!(
        "fig1-frame does phase retrieval: {}\n",
        if decision.does_retrieval { "yes" } else { "no" }
    ));

    // 2. the half-density demo lattice and its conjugate union
    let gamma = fig2_lattice();
    out.push_str(&format!(
        "fig2-lattice density: {} (union with conjugate has density {})\n",
        gamma.density(),
        2.0 * gamma.density()
    ));

    // 3. complex round trip at density 4
    let signal = HermiteSignal::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
    let points = ShiftedLattice::square(0.5)
        .map_err(|e| CliError::config(e.to_string()))?
        .enumerate(2.2);
    let set = sample(&signal, &fig1_frame(), &points);
    let opts = ReconstructOptions {
        degree_bound: 2,
        tol: 1e-8,
        threads: threads_from_env(),
    };
    let report = reconstruct(&set, &opts).map_err(CliError::from_reconstruct)?;
    out.push_str(&format!(
        "complex round trip: status {:?}, up-to-phase error {:.2e}\n",
        report.status,
        report.recovered.up_to_phase_distance(&signal)
    ));

    // 4. real round trip on the half-density lattice
    let real_signal = HermiteSignal::from_real(&[1.0, 0.0, -2.0]);
    let gamma_points = gamma.enumerate(3.0);
    let set = sample(&real_signal, &fig1_frame(), &gamma_points);
    let report = reconstruct_real(&set, &opts).map_err(CliError::from_reconstruct)?;
    out.push_str(&format!(
        "real round trip on fig2-lattice: status {:?}, up-to-sign error {:.2e}\n",
        report.status,
        report.recovered.up_to_phase_distance(&real_signal)
    ));

    print!("{out}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::CheckFrame(args) => cmd_check_frame(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::LatticeInfo(args) => cmd_lattice_info(args),
        Command::Demo => cmd_demo(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
