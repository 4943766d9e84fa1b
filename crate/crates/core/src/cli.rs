//! The `bmetric` command line.
//!
//! Every subcommand produces a [`Report`] with a human-readable rendering
//! and a JSON value carrying every field of the underlying result. Exit
//! status is 0 on success, 1 when the run succeeded but found a
//! mathematical negative (axiom violated, hypothesis failed, clash
//! detected) and 2 on input errors.

use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::completion::{
    density_witness, dstar_interval, equivalent_at, families, strong_triangle_check,
    validate_modulus, wellposedness_probe, CauchySequence, CompletionError, CompletionPoint,
    FinitePresentation, HarmonicFourSpace, ModulusCheck, Presentation, ProbeInput, ProbeReport,
    RationalLine, SpaceClass,
};
use crate::demos;
use crate::fixed_point::{
    check_hypotheses, picard_trajectory, FixedPointError, HypothesisReport, Outcome,
};
use crate::format::{parse_map, parse_space, write_map, write_space, FormatError};
use crate::rational::Rational;
use crate::search::{find_counterexamples, Counterexample, SearchConfig, SearchError};
use crate::space::{FiniteSpace, Inequality, PointSet, SpaceError};

#[derive(Debug, Parser)]
#[command(name = "bmetric", version, about = "Generalized metric space toolkit")]
pub struct Cli {
    /// Output mode.
    #[arg(long, value_enum, default_value_t = OutputFormat::Human, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a space file, reporting every violated axiom.
    Check { file: PathBuf },
    /// Least b, strong-b and metric-type constants of a space.
    Constants { file: PathBuf },
    /// Open ball B(center, radius), with openness certificates.
    Ball {
        file: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: Rational,
    },
    /// Check the local fixed-point hypotheses for a map.
    FixedPoint {
        file: PathBuf,
        map: PathBuf,
        #[arg(long)]
        x0: String,
        #[arg(long)]
        r: Rational,
        #[arg(long)]
        k: Rational,
        /// Strong-b constant to check against; defaults to the least one.
        #[arg(long)]
        constant: Option<Rational>,
    },
    /// Iterate a single-valued map from x0.
    Picard {
        file: PathBuf,
        map: PathBuf,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
    },
    /// Exhaustive counterexample search over small spaces.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        palette: Vec<Rational>,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<Rational>,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<Rational>,
        /// One space per relabeling class.
        #[arg(long)]
        canonical: bool,
        #[arg(long)]
        max_results: Option<usize>,
    },
    /// Evaluate completion distances on a built-in presentation.
    ///
    /// Presentations: rationals-abs, example-3, finite:<file>.
    /// Sequences: constant:<point>, reciprocal, sqrt2, sqrt2-convergents,
    /// approach:<center>:<scale> (rationals-abs); half-reciprocal,
    /// example-3-quadruple (example-3).
    Complete {
        presentation: String,
        #[arg(long = "seq")]
        seqs: Vec<String>,
        /// Precision index i; evaluation radius is 2K/i.
        #[arg(long, default_value_t = 100)]
        i: u64,
        /// Run the well-posedness probe on (x, z, y, w).
        #[arg(long)]
        probe: bool,
        #[arg(long, default_value = "1/10")]
        epsilon: Rational,
        /// Sampled pairs per modulus check.
        #[arg(long, default_value_t = 8)]
        samples: u64,
    },
    /// Replay a compiled-in example.
    Demo { name: DemoName },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    #[value(name = "example-2.1")]
    Example21,
    #[value(name = "example-3")]
    Example3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown presentation `{0}`")]
    UnknownPresentation(String),
    #[error("unknown sequence `{name}` for {presentation}")]
    UnknownSequence { name: String, presentation: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    FixedPoint(#[from] FixedPointError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct Report {
    /// Successful run that found a mathematical negative.
    pub negative: bool,
    pub human: String,
    pub json: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.negative)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Human => self.human.clone(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

pub const INPUT_ERROR_EXIT: i32 = 2;

/// Parses arguments, runs the command, and returns the exit status with the text to print.
pub fn main_with_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (INPUT_ERROR_EXIT, String::new(), text)
            } else {
                (0, text, String::new())
            };
        }
    };
    match run(&cli) {
        Ok(report) => (report.exit_code(), report.render(cli.format), String::new()),
        Err(e) => (INPUT_ERROR_EXIT, String::new(), format!("error: {e}\n")),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_space(path: &Path) -> Result<FiniteSpace, CliError> {
    parse_space(&read(path)?).map_err(|source| CliError::Format {
        path: path.to_owned(),
        source,
    })
}

fn point(space: &FiniteSpace, label: &str) -> Result<usize, CliError> {
    space
        .index_of(label)
        .ok_or_else(|| CliError::UnknownPoint(label.to_string()))
}

fn fmt_set(space: &FiniteSpace, set: &PointSet) -> String {
    let names: Vec<&str> = set.iter().map(|&p| space.label(p)).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Check { file } => check(file),
        Command::Constants { file } => constants(file),
        Command::Ball {
            file,
            center,
            radius,
        } => ball(file, center, radius),
        Command::FixedPoint {
            file,
            map,
            x0,
            r,
            k,
            constant,
        } => fixed_point(file, map, x0, r, k, constant.as_ref()),
        Command::Picard {
            file,
            map,
            x0,
            max_steps,
        } => picard(file, map, x0, *max_steps),
        Command::Search {
            n,
            palette,
            k,
            r,
            canonical,
            max_results,
        } => {
            let mut config = SearchConfig::new(*n, palette.clone(), k.clone(), r.clone());
            config.canonical = *canonical;
            config.max_results = max_results.unwrap_or(usize::MAX);
            search(&config)
        }
        Command::Complete {
            presentation,
            seqs,
            i,
            probe,
            epsilon,
            samples,
        } => {
            let opts = CompleteOptions {
                i: *i,
                probe: *probe,
                epsilon: epsilon.clone(),
                samples: *samples,
            };
            complete(presentation, seqs, &opts)
        }
        Command::Demo { name } => match name {
            DemoName::Example21 => demo_example_2_1(),
            DemoName::Example3 => demo_example_3(),
        },
    }
}

fn check(file: &Path) -> Result<Report, CliError> {
    match parse_space(&read(file)?) {
        Ok(space) => {
            let mut human = format!(
                "valid space with {} points: {}\n",
                space.len(),
                space.labels().join(" ")
            );
            let classification = space.classify();
            writeln!(human, "metric: {}", classification.is_metric).unwrap();
            Ok(Report {
                negative: false,
                human,
                json: json!({ "valid": true, "space": to_value(&space), "classification": to_value(&classification) }),
            })
        }
        Err(FormatError::Invalid(invalid)) => {
            let mut human = String::from("invalid space\n");
            for v in &invalid.0 {
                writeln!(human, "  {v}").unwrap();
            }
            Ok(Report {
                negative: true,
                human,
                json: json!({ "valid": false, "violations": to_value(&invalid.0) }),
            })
        }
        Err(source) => Err(CliError::Format {
            path: file.to_owned(),
            source,
        }),
    }
}

fn constants(file: &Path) -> Result<Report, CliError> {
    let space = load_space(file)?;
    let report = space.classify();
    let mut human = String::new();
    writeln!(human, "metric:                 {}", report.is_metric).unwrap();
    writeln!(human, "least b constant:       {}", report.min_b_constant).unwrap();
    writeln!(
        human,
        "least strong-b constant: {}",
        report.min_strong_b_constant
    )
    .unwrap();
    writeln!(
        human,
        "least metric-type constant: {}",
        report.min_metric_type_constant
    )
    .unwrap();
    for v in &report.violations {
        writeln!(
            human,
            "  triangle violation: D({x},{z}) = {} > {} = D({x},{y}) + D({y},{z})",
            v.lhs,
            v.rhs,
            x = space.label(v.x),
            y = space.label(v.y),
            z = space.label(v.z)
        )
        .unwrap();
    }
    let trace = space.inequality_trace(Inequality::StrongB, &report.min_strong_b_constant, true);
    Ok(Report {
        negative: false,
        human,
        json: json!({
            "labels": space.labels(),
            "classification": to_value(&report),
            "strong_b_trace": to_value(&trace),
        }),
    })
}

fn ball(file: &Path, center: &str, radius: &Rational) -> Result<Report, CliError> {
    let space = load_space(file)?;
    let c = point(&space, center)?;
    if !radius.is_positive() {
        return Err(SpaceError::InvalidRadius(radius.clone()).into());
    }
    let members = space.ball(c, radius);
    let k = space.min_strong_b_constant();
    let certs = space.ball_openness_certificate(&k, c, radius)?;
    let mut human = format!("B({center}, {radius}) = {}\n", fmt_set(&space, &members));
    writeln!(human, "openness certificates at K = {k}:").unwrap();
    for cert in &certs {
        writeln!(
            human,
            "  {}: B({}, {}) = {}",
            space.label(cert.point),
            space.label(cert.point),
            cert.inner_radius,
            fmt_set(&space, &cert.inner_ball)
        )
        .unwrap();
    }
    Ok(Report {
        negative: false,
        human,
        json: json!({
            "labels": space.labels(),
            "center": c,
            "radius": radius,
            "ball": to_value(&members),
            "constant": k,
            "certificates": to_value(&certs),
        }),
    })
}

fn render_hypotheses(space: &FiniteSpace, report: &HypothesisReport) -> String {
    let l = |p: usize| space.label(p).to_string();
    let mut out = String::new();
    writeln!(
        out,
        "x0 = {}, r = {}, k = {}, K = {}",
        l(report.x0),
        report.r,
        report.k,
        report.constant
    )
    .unwrap();
    writeln!(out, "B(x0, r) = {}", fmt_set(space, &report.ball)).unwrap();
    writeln!(
        out,
        "(1) dist(x0, Tx0) = {} {} {} = r(1 - k): {}",
        report.cond1_lhs,
        if report.cond1_holds { "<" } else { ">=" },
        report.cond1_rhs,
        if report.cond1_holds { "holds" } else { "fails" }
    )
    .unwrap();
    for c in &report.cond2_checks {
        writeln!(
            out,
            "(2) x = {}, y = {}: δ({}, T{}) = {} {} {} = k D(x, y): {}",
            l(c.x),
            l(c.y),
            fmt_set(space, &c.restricted_image),
            l(c.y),
            c.delta,
            if c.holds { "<=" } else { ">" },
            c.bound,
            if c.holds { "holds" } else { "fails" }
        )
        .unwrap();
    }
    for (x, y) in &report.vacuous_pairs {
        writeln!(
            out,
            "(2) x = {}, y = {}: Tx ∩ B(x0, r) is empty, vacuous",
            l(*x),
            l(*y)
        )
        .unwrap();
    }
    writeln!(out, "all hypotheses hold: {}", report.all_hold).unwrap();
    writeln!(
        out,
        "fixed points: {}",
        fmt_set(space, &report.fixed_points)
    )
    .unwrap();
    out
}

fn hypotheses_json(space: &FiniteSpace, report: &HypothesisReport) -> Value {
    json!({ "labels": space.labels(), "report": to_value(report), "counterexample": report.is_counterexample() })
}

fn load_map(
    space: &FiniteSpace,
    path: &Path,
) -> Result<crate::fixed_point::SetValuedMap, CliError> {
    parse_map(&read(path)?, space).map_err(|source| CliError::Format {
        path: path.to_owned(),
        source,
    })
}

fn fixed_point(
    file: &Path,
    map_file: &Path,
    x0: &str,
    r: &Rational,
    k: &Rational,
    constant: Option<&Rational>,
) -> Result<Report, CliError> {
    let space = load_space(file)?;
    let map = load_map(&space, map_file)?;
    let x0 = point(&space, x0)?;
    let constant = constant
        .cloned()
        .unwrap_or_else(|| space.min_strong_b_constant());
    let report = check_hypotheses(&space, &constant, &map, x0, r, k)?;
    let mut human = render_hypotheses(&space, &report);
    if report.all_hold {
        writeln!(
            human,
            "note: every subset of a finite space is closed; closedness of Tx is not checked"
        )
        .unwrap();
    }
    Ok(Report {
        negative: !report.all_hold,
        human,
        json: hypotheses_json(&space, &report),
    })
}

fn render_trajectory(space: &FiniteSpace, t: &crate::fixed_point::Trajectory) -> String {
    let names: Vec<&str> = t.points.iter().map(|&p| space.label(p)).collect();
    let mut out = format!("trajectory: {}\n", names.join(" -> "));
    let steps: Vec<String> = t.step_distances.iter().map(Rational::to_string).collect();
    writeln!(out, "step distances: {}", steps.join(" ")).unwrap();
    let outcome = match &t.outcome {
        Outcome::FixedPoint { point, steps } => {
            format!("fixed point {} after {steps} steps", space.label(*point))
        }
        Outcome::Cycle { period } => format!("cycle of period {period}"),
        Outcome::Exhausted => "step budget exhausted".to_string(),
    };
    writeln!(out, "outcome: {outcome}").unwrap();
    out
}

fn picard(file: &Path, map_file: &Path, x0: &str, max_steps: usize) -> Result<Report, CliError> {
    let space = load_space(file)?;
    let map = load_map(&space, map_file)?;
    let x0 = point(&space, x0)?;
    let t = picard_trajectory(&space, &map, x0, max_steps)?;
    Ok(Report {
        negative: false,
        human: render_trajectory(&space, &t),
        json: json!({ "labels": space.labels(), "trajectory": to_value(&t) }),
    })
}

/// Machine-readable block for one counterexample: space file, map section,
/// then `K`, `x0`, `r`, `k` lines.
pub fn write_counterexample(c: &Counterexample) -> String {
    let mut out = write_space(&c.space);
    out.push_str(&write_map(&c.space, &c.map));
    writeln!(out, "K: {}", c.constant).unwrap();
    writeln!(out, "x0: {}", c.space.label(c.x0)).unwrap();
    writeln!(out, "r: {}", c.r).unwrap();
    writeln!(out, "k: {}", c.k).unwrap();
    out
}

fn search(config: &SearchConfig) -> Result<Report, CliError> {
    let found = find_counterexamples(config)?;
    let mut human = format!("# {} counterexample(s)\n", found.len());
    for (i, c) in found.iter().enumerate() {
        if i > 0 {
            human.push_str("---\n");
        }
        human.push_str(&write_counterexample(c));
    }
    Ok(Report {
        negative: false,
        human,
        json: json!({ "config": to_value(config), "count": found.len(), "counterexamples": to_value(&found) }),
    })
}

pub struct CompleteOptions {
    pub i: u64,
    pub probe: bool,
    pub epsilon: Rational,
    pub samples: u64,
}

/// Presentations that can be addressed from the command line.
trait Catalog: Presentation + Sized {
    fn sequence(space: &Arc<Self>, name: &str) -> Result<CauchySequence<Self>, CliError>;

    fn show(&self, p: &Self::Point) -> String;

    /// The built-in probe quadruple with its certificates, if this
    /// presentation has one.
    fn builtin_probe(
        _space: &Arc<Self>,
    ) -> Option<(ProbeInput<Self>, crate::completion::TailCertificates)> {
        None
    }
}

fn unknown_sequence<S: Presentation>(space: &S, name: &str) -> CliError {
    CliError::UnknownSequence {
        name: name.to_string(),
        presentation: space.name(),
    }
}

fn rational_arg<S: Presentation>(space: &S, name: &str, text: &str) -> Result<Rational, CliError> {
    text.parse().map_err(|_| unknown_sequence(space, name))
}

impl Catalog for RationalLine {
    fn sequence(space: &Arc<Self>, name: &str) -> Result<CauchySequence<Self>, CliError> {
        if let Some(q) = name.strip_prefix("constant:") {
            return Ok(CauchySequence::constant(
                Arc::clone(space),
                rational_arg(space.as_ref(), name, q)?,
            ));
        }
        if let Some(rest) = name.strip_prefix("approach:") {
            let (c, s) = rest
                .split_once(':')
                .ok_or_else(|| unknown_sequence(space.as_ref(), name))?;
            return Ok(families::approach(
                space,
                rational_arg(space.as_ref(), name, c)?,
                rational_arg(space.as_ref(), name, s)?,
            ));
        }
        match name {
            "reciprocal" => Ok(families::reciprocal(space)),
            "sqrt2" | "sqrt2-truncations" => Ok(families::sqrt2_truncations(space)),
            "sqrt2-convergents" => Ok(families::sqrt2_convergents(space)),
            _ => Err(unknown_sequence(space.as_ref(), name)),
        }
    }

    fn show(&self, p: &Rational) -> String {
        p.to_string()
    }
}

impl Catalog for HarmonicFourSpace {
    fn sequence(space: &Arc<Self>, name: &str) -> Result<CauchySequence<Self>, CliError> {
        if let Some(q) = name.strip_prefix("constant:") {
            let p = rational_arg(space.as_ref(), name, q)?;
            if !space.contains(&p) {
                return Err(CliError::UnknownPoint(q.to_string()));
            }
            return Ok(CauchySequence::constant(Arc::clone(space), p));
        }
        match name {
            "half-reciprocal" => Ok(families::half_reciprocal(space)),
            _ => Err(unknown_sequence(space.as_ref(), name)),
        }
    }

    fn show(&self, p: &Rational) -> String {
        p.to_string()
    }

    fn builtin_probe(
        space: &Arc<Self>,
    ) -> Option<(ProbeInput<Self>, crate::completion::TailCertificates)> {
        Some(families::harmonic_quadruple(space))
    }
}

impl Catalog for FinitePresentation {
    fn sequence(space: &Arc<Self>, name: &str) -> Result<CauchySequence<Self>, CliError> {
        let label = name
            .strip_prefix("constant:")
            .ok_or_else(|| unknown_sequence(space.as_ref(), name))?;
        let p = point(space.space(), label)?;
        Ok(CauchySequence::constant(Arc::clone(space), p))
    }

    fn show(&self, p: &usize) -> String {
        self.space().label(*p).to_string()
    }
}

fn render_probe(report: &ProbeReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "presentation: {}, precision i = {}",
        report.presentation, report.precision
    )
    .unwrap();
    writeln!(out, "method: {:?}", report.method).unwrap();
    writeln!(
        out,
        "x ~ z: {:?}, y ~ w: {:?}",
        report.equivalence_xz, report.equivalence_yw
    )
    .unwrap();
    writeln!(out, "lim D(x_n, y_n) in {}", report.limit_xy).unwrap();
    writeln!(out, "lim D(z_n, w_n) in {}", report.limit_zw).unwrap();
    writeln!(
        out,
        "clash: {}{}",
        report.clash,
        if report.clash {
            " (termwise-limit distance is not well defined)"
        } else {
            ""
        }
    )
    .unwrap();
    out
}

fn complete_with<S: Catalog>(
    space: Arc<S>,
    names: &[String],
    opts: &CompleteOptions,
) -> Result<Report, CliError> {
    if opts.probe {
        let report = match space.class() {
            SpaceClass::PlainB => {
                let builtin = names.is_empty() || names == ["example-3-quadruple"];
                let (input, certs) = S::builtin_probe(&space).filter(|_| builtin).ok_or_else(|| {
                    CliError::Usage(
                        "plain b-metric probes need tail certificates; only the built-in example-3 quadruple carries them"
                            .into(),
                    )
                })?;
                wellposedness_probe(&input, Some(&certs), &opts.epsilon, opts.i)?
            }
            SpaceClass::StrongB => {
                let [x, z, y, w] = names else {
                    return Err(CliError::Usage(
                        "--probe needs four --seq arguments: x z y w".into(),
                    ));
                };
                let input = ProbeInput {
                    x: S::sequence(&space, x)?,
                    z: S::sequence(&space, z)?,
                    y: S::sequence(&space, y)?,
                    w: S::sequence(&space, w)?,
                };
                wellposedness_probe(&input, None, &opts.epsilon, opts.i)?
            }
        };
        return Ok(Report {
            negative: report.clash,
            human: render_probe(&report),
            json: json!({ "probe": to_value(&report) }),
        });
    }

    if names.is_empty() {
        return Err(CliError::Usage(
            "give at least one --seq, or --probe".into(),
        ));
    }
    let seqs = names
        .iter()
        .map(|n| S::sequence(&space, n))
        .collect::<Result<Vec<_>, _>>()?;
    let strong = space.class() == SpaceClass::StrongB;
    if !strong && seqs.len() > 1 {
        return Err(CompletionError::NotStrongB(space.name()).into());
    }

    let mut negative = false;
    let mut human = format!(
        "presentation: {} (K = {}), precision i = {}\n",
        space.name(),
        space.constant(),
        opts.i
    );
    let mut seq_json = Vec::new();
    for seq in &seqs {
        let check = validate_modulus(seq, opts.i, opts.samples);
        negative |= check != ModulusCheck::Pass;
        writeln!(
            human,
            "{}: modulus({}) = {}, check {:?}",
            seq.label(),
            opts.i,
            seq.modulus(opts.i),
            check
        )
        .unwrap();
        let mut entry = json!({ "label": seq.label(), "modulus": seq.modulus(opts.i), "modulus_check": to_value(&check) });
        if strong {
            let w = density_witness(&CompletionPoint::new(seq.clone()), opts.i)?;
            writeln!(
                human,
                "  density witness {} with D* in {} (bound 1/{})",
                space.show(&w.point),
                w.interval,
                opts.i
            )
            .unwrap();
            entry["density_witness"] = json!({
                "point": space.show(&w.point),
                "bound": w.bound,
                "interval": to_value(&w.interval),
                "certified": w.certified,
            });
        }
        seq_json.push(entry);
    }

    let points: Vec<CompletionPoint<S>> = seqs.iter().cloned().map(CompletionPoint::new).collect();
    let mut pair_json = Vec::new();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            let iv = dstar_interval(&points[a], &points[b], opts.i)?;
            let eq = equivalent_at(&points[a], &points[b], &opts.epsilon, opts.i)?;
            writeln!(
                human,
                "D*({}, {}) in {}  ~ at ε = {}: {:?}",
                seqs[a].label(),
                seqs[b].label(),
                iv,
                opts.epsilon,
                eq
            )
            .unwrap();
            pair_json.push(
                json!({ "a": a, "b": b, "interval": to_value(&iv), "equivalence": to_value(&eq) }),
            );
        }
    }

    let mut triangle_json = Value::Null;
    if let [a, b, c] = points.as_slice() {
        let residual = strong_triangle_check(a, b, c, opts.i)?;
        let violated = residual.lo().is_positive();
        negative |= violated;
        writeln!(
            human,
            "D*(a,c) - D*(a,b) - K D*(b,c) in {}{}",
            residual,
            if violated {
                " (certified violation)"
            } else {
                ""
            }
        )
        .unwrap();
        triangle_json = json!({ "residual": to_value(&residual), "violated": violated });
    }

    Ok(Report {
        negative,
        human,
        json: json!({
            "presentation": space.name(),
            "constant": space.constant(),
            "precision": opts.i,
            "sequences": seq_json,
            "pairs": pair_json,
            "strong_triangle": triangle_json,
        }),
    })
}

pub fn complete(
    presentation: &str,
    names: &[String],
    opts: &CompleteOptions,
) -> Result<Report, CliError> {
    if opts.i == 0 {
        return Err(CompletionError::ZeroPrecision.into());
    }
    match presentation {
        "rationals-abs" => complete_with(Arc::new(RationalLine), names, opts),
        "example-3" => complete_with(Arc::new(HarmonicFourSpace), names, opts),
        other => match other.strip_prefix("finite:") {
            Some(path) => {
                let space = load_space(Path::new(path))?;
                complete_with(Arc::new(FinitePresentation::new(space)), names, opts)
            }
            None => Err(CliError::UnknownPresentation(other.to_string())),
        },
    }
}

fn demo_example_2_1() -> Result<Report, CliError> {
    let space = demos::example_2_1_space();
    let map = demos::example_2_1_map();
    let p = demos::example_2_1_params();
    let classification = space.classify();
    let trace = space.inequality_trace(Inequality::StrongB, &p.constant, true);
    let report = check_hypotheses(&space, &p.constant, &map, p.x0, &p.r, &p.k)?;
    let trajectory = picard_trajectory(&space, &map, p.x0, 10)?;

    let mut human = String::from("three-point strong b-metric space\n");
    human.push_str(&write_space(&space));
    human.push_str(&write_map(&space, &map));
    writeln!(
        human,
        "least constants: b = {}, strong-b = {}, metric-type = {}; metric: {}",
        classification.min_b_constant,
        classification.min_strong_b_constant,
        classification.min_metric_type_constant,
        classification.is_metric
    )
    .unwrap();
    writeln!(human, "strong inequality at K = {}:", p.constant).unwrap();
    for t in &trace {
        let l = |i: usize| space.label(i);
        writeln!(
            human,
            "  D({x},{y}) + K D({y},{z}) = {} {} {} = D({x},{z})",
            t.rhs,
            if t.is_tight() { "=" } else { ">=" },
            t.lhs,
            x = l(t.x),
            y = l(t.y),
            z = l(t.z)
        )
        .unwrap();
    }
    human.push_str(&render_hypotheses(&space, &report));
    human.push_str(&render_trajectory(&space, &trajectory));
    let reproduced = report.is_counterexample()
        && classification.min_strong_b_constant <= p.constant
        && trace.iter().all(|t| t.holds());
    writeln!(
        human,
        "hypotheses hold without a fixed point: {}",
        report.is_counterexample()
    )
    .unwrap();

    Ok(Report {
        negative: !reproduced,
        human,
        json: json!({
            "space": to_value(&space),
            "map": to_value(&map),
            "classification": to_value(&classification),
            "strong_b_trace": to_value(&trace),
            "hypotheses": to_value(&report),
            "trajectory": to_value(&trajectory),
            "reproduced": reproduced,
        }),
    })
}

fn demo_example_3() -> Result<Report, CliError> {
    let (_, input, certs) = demos::example_3();
    let report = wellposedness_probe(&input, Some(&certs), &Rational::new(1, 10), 100)?;
    let mut human = String::from(
        "x_n = 1, y_n = 1/(2n), z_n = 1, w_n = 0 in the harmonic four-valued b-metric space\n",
    );
    human.push_str(&render_probe(&report));
    Ok(Report {
        negative: !report.clash,
        human,
        json: json!({ "probe": to_value(&report) }),
    })
}
