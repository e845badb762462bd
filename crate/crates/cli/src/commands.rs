use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tmslab_core::ac::{analyze, AnalyzeConfig, FunctionSpec, DEFAULT_DELTAS};
use tmslab_core::linear::{ac_from_bounded, LinearMapSpec};
use tmslab_core::measure::{measure_of, MeasureKind};
use tmslab_core::tms::{NeighborhoodFamily, TmsInstance};

use crate::corpus::{self, analyze_config, falsify_outcome, tms_outcome, verdict_detail, verdict_label};
use crate::input::{builtin_spaces, parse_function, parse_list, parse_map, parse_set, parse_space};
use crate::report::{Budgets, EntryResult, Expectation, Format, Report, RunConfig, Tolerances};
use crate::{CliError, EXIT_ERROR, EXIT_MET, EXIT_VIOLATED};

#[derive(Parser, Debug)]
#[command(name = "tmslab", version, about = "Outer measures, tms axiom checks and absolute continuity verdicts")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Cover-search budget for measure brackets.
    #[arg(long, global = true, default_value_t = 1000)]
    pub budget: usize,
    /// Bracket tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Sample points for the axiom checks.
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Random probes for operator norm estimates.
    #[arg(long, global = true, default_value_t = 500)]
    pub probes: usize,
    /// Random P_delta families drawn per certificate.
    #[arg(long, global = true, default_value_t = 100)]
    pub spot_checks: usize,
    /// Override the expected outcome, e.g. `certified` or `tms_fails_axiom(2)`.
    #[arg(long, global = true)]
    pub expect: Option<Expectation>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, CliError> {
        let cfg = RunConfig {
            seed: self.seed,
            budgets: Budgets { measure: self.budget, samples: self.samples, probes: self.probes, spot_checks: self.spot_checks },
            tolerances: Tolerances { bracket: self.tol },
            format: self.format,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Builtin spaces.
    Spaces {
        #[command(subcommand)]
        action: SpacesAction,
    },
    /// Measure brackets.
    Measure {
        #[command(subcommand)]
        action: MeasureAction,
    },
    /// Axiom checks.
    Tms {
        #[command(subcommand)]
        action: TmsAction,
    },
    /// Absolute continuity verdicts.
    Ac {
        #[command(subcommand)]
        action: AcAction,
    },
    /// Bounded linear maps.
    Linear {
        #[command(subcommand)]
        action: LinearAction,
    },
    /// The reproduction corpus.
    Paper {
        #[command(subcommand)]
        action: PaperAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpacesAction {
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MeasureArg {
    Lebesgue,
    Diam,
    Counting,
}

impl From<MeasureArg> for MeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Lebesgue => MeasureKind::Lebesgue,
            MeasureArg::Diam => MeasureKind::DiamOuter,
            MeasureArg::Counting => MeasureKind::Counting,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyArg {
    Basic,
    Anisotropic,
}

#[derive(Args, Debug)]
pub struct Target {
    /// A builtin space name or a JSON space spec.
    #[arg(long)]
    pub space: String,
    #[arg(long, value_enum, default_value_t = MeasureArg::Diam)]
    pub measure: MeasureArg,
}

impl Target {
    fn instance(&self) -> Result<TmsInstance, CliError> {
        Ok(TmsInstance::new(parse_space(&self.space)?, self.measure.into())?)
    }
}

#[derive(Subcommand, Debug)]
pub enum MeasureAction {
    Estimate {
        #[command(flatten)]
        target: Target,
        /// JSON open set, or `interval:a:b`, `arc:s:e` (units of pi), `ball:r:c1:c2..`.
        #[arg(long)]
        set: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum TmsAction {
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = FamilyArg::Basic)]
        family: FamilyArg,
    },
}

#[derive(Args, Debug)]
pub struct AcArgs {
    #[command(flatten)]
    pub target: Target,
    /// A builtin function name or a JSON function spec.
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long)]
    pub eps: f64,
    /// Comma-separated, strictly decreasing delta schedule.
    #[arg(long)]
    pub deltas: Option<String>,
}

impl AcArgs {
    fn deltas(&self) -> Result<Vec<f64>, CliError> {
        self.deltas.as_deref().map_or(Ok(DEFAULT_DELTAS.to_vec()), parse_list)
    }
}

#[derive(Subcommand, Debug)]
pub enum AcAction {
    Analyze(AcArgs),
    Falsify(AcArgs),
}

#[derive(Subcommand, Debug)]
pub enum LinearAction {
    Check {
        /// A JSON linear map spec.
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum PaperAction {
    Reproduce,
}

/// Parses `argv`, runs the command, writes the report and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if let Err(e) = report.emit(cli.common.out.as_deref()) {
                eprintln!("tmslab: {e}");
                return EXIT_ERROR;
            }
            if report.all_met() {
                EXIT_MET
            } else {
                for e in report.entries.iter().filter(|e| !e.met) {
                    eprintln!("tmslab: {} expected {} but got {}", e.id, e.expected, e.actual);
                }
                EXIT_VIOLATED
            }
        }
        Err(e) => {
            eprintln!("tmslab: {e}");
            EXIT_ERROR
        }
    }
}

fn single(id: &str, source: &str, expected: &Expectation, outcome: corpus::Outcome) -> EntryResult {
    let expected = expected.to_string();
    EntryResult {
        id: id.into(),
        source: source.into(),
        met: outcome.actual == expected,
        expected,
        actual: outcome.actual,
        detail: outcome.detail,
        data: outcome.data,
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let common = &cli.common;
    let cfg = common.config()?;
    let expect = common.expect.clone();
    let (name, entries) = match &cli.command {
        Command::Spaces { action: SpacesAction::List } => {
            let entries = builtin_spaces()
                .into_iter()
                .map(|(name, space)| {
                    let ok = space.validate().is_ok();
                    let measures: Vec<&str> = [MeasureKind::Lebesgue, MeasureKind::DiamOuter, MeasureKind::Counting]
                        .into_iter()
                        .filter(|m| TmsInstance::new(space.clone(), *m).is_ok())
                        .map(|m| match m {
                            MeasureKind::Lebesgue => "lebesgue",
                            MeasureKind::DiamOuter => "diam",
                            MeasureKind::Counting => "counting",
                        })
                        .collect();
                    let outcome = corpus::Outcome {
                        actual: if ok { "holds" } else { "fails" }.into(),
                        detail: format!("{}; measures: {}", space.kind_name(), measures.join(" ")),
                        data: json!({ "space": space, "measures": measures }),
                    };
                    single(name, "builtin space", &Expectation::Holds, outcome)
                })
                .collect();
            ("spaces list", entries)
        }
        Command::Measure { action: MeasureAction::Estimate { target, set } } => {
            let instance = target.instance()?;
            let s = parse_set(set)?;
            let m = measure_of(&instance.space, instance.measure_kind, &s, cfg.budgets.measure)?;
            let closed = m.width() <= cfg.tolerances.bracket;
            let outcome = corpus::Outcome {
                actual: if m.lower <= m.upper { "holds" } else { "fails" }.into(),
                detail: format!(
                    "bracket [{:.9}, {:.9}], width {:.3e}{}",
                    m.lower,
                    m.upper,
                    m.width(),
                    if closed { ", closed within tolerance" } else { "" }
                ),
                data: json!({ "set": s, "estimate": m }),
            };
            ("measure estimate", vec![single("measure.estimate", "command line", &expect.unwrap_or(Expectation::Holds), outcome)])
        }
        Command::Tms { action: TmsAction::Check { target, family } } => {
            let instance = target.instance()?;
            let family = match family {
                FamilyArg::Basic => NeighborhoodFamily::Basic,
                FamilyArg::Anisotropic => NeighborhoodFamily::WithAnisotropic,
            };
            let expected = expect.or_else(|| corpus::tms_expectation(&instance)).unwrap_or(Expectation::TmsPasses);
            let outcome = tms_outcome(&instance, family, &cfg)?;
            ("tms check", vec![single("tms.check", "command line", &expected, outcome)])
        }
        Command::Ac { action: AcAction::Analyze(args) } => {
            let instance = args.target.instance()?;
            let f = parse_function(&args.function)?;
            f.validate(&instance.space)?;
            let config = AnalyzeConfig { deltas: args.deltas()?, ..analyze_config(&cfg) };
            let v = analyze(&f, &instance, args.eps, &config)?;
            let outcome = corpus::Outcome { actual: verdict_label(&v), detail: verdict_detail(&v, args.eps), data: json!(v) };
            ("ac analyze", vec![single("ac.analyze", "command line", &expect.unwrap_or(Expectation::Certified), outcome)])
        }
        Command::Ac { action: AcAction::Falsify(args) } => {
            let instance = args.target.instance()?;
            let f: FunctionSpec = parse_function(&args.function)?;
            f.validate(&instance.space)?;
            let outcome = falsify_outcome(&f, &instance, args.eps, &args.deltas()?, cfg.seed)?;
            let expected = expect.unwrap_or(Expectation::Falsified { eps: args.eps });
            ("ac falsify", vec![single("ac.falsify", "command line", &expected, outcome)])
        }
        Command::Linear { action: LinearAction::Check { map, eps } } => {
            let map: LinearMapSpec = parse_map(map)?;
            let (est, v) = ac_from_bounded(&map, *eps, cfg.budgets.probes, cfg.budgets.spot_checks, cfg.seed)?;
            let outcome = corpus::Outcome {
                actual: verdict_label(&v),
                detail: format!("norm bracket [{:.6}, {:.6}]; {}", est.lower, est.upper, verdict_detail(&v, *eps)),
                data: json!({ "norm": est, "verdict": v }),
            };
            ("linear check", vec![single("linear.check", "command line", &expect.unwrap_or(Expectation::Certified), outcome)])
        }
        Command::Paper { action: PaperAction::Reproduce } => ("paper reproduce", corpus::run_corpus(&corpus::corpus(), &cfg)),
    };
    Report::new(name, cfg, entries)
}
