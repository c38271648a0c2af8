//! `sensan`: sample-size planning from minimum effect sizes, with a power
//! baseline, reference tables, and a seeded Monte Carlo study harness.
//!
//! Exit codes: 0 success, 2 invalid usage, 3 numeric failure.

mod output;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Format, TableKind};
use report::{MesReport, PosthocReport, PowerReport, SolveReport};
use sensan::sensitiveness::Tails;
use sensan::simulation::{self, SimulationConfig};
use sensan::{
    EffectSize, EsMetric, Error, TestSpec, analysis, mes_at_n, min_n_for_power, min_sample_size,
    post_hoc_sensitiveness, power_at_n, tables,
};

#[derive(Parser)]
#[command(
    name = "sensan",
    version,
    about = "Sample-size planning for tests of significance",
    long_about = "Finds the minimum sample size at which a chosen minimum effect size \
                  becomes statistically significant, alongside the classical power \
                  baseline, reference tables, and a seeded Monte Carlo study harness."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum N at which a target effect size is significant.
    Solve(SolveArgs),
    /// Minimum effect size detectable at a given N (a-priori analysis).
    Mes(MesArgs),
    /// Post-hoc sensitiveness: how far a sample over/undershoots the minimum N.
    Posthoc(PosthocArgs),
    /// Power at a given N, or minimum N for a target power.
    Power(PowerArgs),
    /// Regenerate the reference tables.
    Table(TableArgs),
    /// Run the nested-population Monte Carlo study.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TestKind {
    /// Two-sample t test (independent groups, equal allocation).
    T2,
    /// Point-biserial correlation.
    R,
    /// Chi-square goodness-of-fit (needs --df).
    Chi2,
    /// One-way ANOVA (needs --groups).
    Anova,
}

#[derive(Args)]
struct TestArgs {
    /// Test family: t2, r, chi2, or anova.
    #[arg(long, value_enum)]
    test: TestKind,
    /// Degrees of freedom for chi2.
    #[arg(long)]
    df: Option<u64>,
    /// Number of groups for anova.
    #[arg(long)]
    groups: Option<u64>,
    /// Tails: 1 or 2 (t-family only; chi2 and anova are one-tailed).
    #[arg(long, default_value_t = 1)]
    tails: u8,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Printed decimals in csv/markdown output (max 12).
    #[arg(long, default_value_t = 4)]
    precision: usize,
    /// Write the output to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    test: TestArgs,
    /// Target effect size as metric=value, e.g. d=0.5, w=0.3, v=0.212.
    #[arg(long)]
    es: EsArg,
    /// Significance level.
    #[arg(long, default_value_t = TestSpec::DEFAULT_SIG)]
    sig: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MesArgs {
    #[command(flatten)]
    test: TestArgs,
    /// Total sample size.
    #[arg(long)]
    n: u64,
    /// Metric to report (d, r, w, v, f); defaults to the family's metric.
    #[arg(long)]
    metric: Option<String>,
    #[arg(long, default_value_t = TestSpec::DEFAULT_SIG)]
    sig: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PosthocArgs {
    /// Sample size actually available.
    #[arg(long)]
    n_actual: u64,
    /// Minimum sample size required (from `solve`).
    #[arg(long)]
    n_min: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PowerArgs {
    #[command(flatten)]
    test: TestArgs,
    /// Population effect size as metric=value.
    #[arg(long)]
    es: EsArg,
    /// Type I error probability.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Target power: solve for the minimum N reaching it.
    #[arg(long, conflicts_with = "n")]
    power: Option<f64>,
    /// Evaluate power at this total N.
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TableArgs {
    /// Which table: table2 (sns vs pwr N) or supp2 (N, CV, achieved ES).
    #[arg(long, value_enum)]
    which: TableKind,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// Two studies, macro-population groups capped at 2000. Fast.
    Desk,
    /// Eight studies, macro-population groups up to 10000.
    Full,
}

#[derive(Args)]
struct SimulateArgs {
    /// Simulation config file (.json or .toml).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration instead of a file.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for outcome files (outcomes.json, studies.csv,
    /// capture_summary.csv, comparisons.csv, comparisons_by_study.csv).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Effect size flag in metric=value form.
#[derive(Clone)]
struct EsArg {
    metric: String,
    value: f64,
}

impl FromStr for EsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (metric, value) = s
            .split_once('=')
            .ok_or_else(|| format!("expected metric=value, got {s:?} (--es)"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("invalid effect size value in {s:?} (--es)"))?;
        Ok(EsArg {
            metric: metric.trim().to_ascii_lowercase(),
            value,
        })
    }
}

enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::Degenerate(_) => CliError::Numeric(e.to_string()),
            Error::Domain(_) | Error::Spec(_) | Error::Config(_) => CliError::Usage(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn build_spec(test: &TestArgs, sig: f64) -> Result<TestSpec, CliError> {
    let tails = match test.tails {
        1 => Tails::One,
        2 => Tails::Two,
        other => return Err(usage(format!("--tails must be 1 or 2, got {other}"))),
    };
    match test.test {
        TestKind::T2 | TestKind::R => {
            if test.df.is_some() {
                return Err(usage("--df only applies to --test chi2"));
            }
            if test.groups.is_some() {
                return Err(usage("--groups only applies to --test anova"));
            }
            Ok(match test.test {
                TestKind::T2 => TestSpec::t_two_sample(tails, sig)?,
                _ => TestSpec::point_biserial(tails, sig)?,
            })
        }
        TestKind::Chi2 => {
            if test.groups.is_some() {
                return Err(usage("--groups only applies to --test anova"));
            }
            let df = test.df.ok_or_else(|| usage("--test chi2 requires --df"))?;
            Ok(TestSpec::chi2_gof(df, sig)?)
        }
        TestKind::Anova => {
            if test.df.is_some() {
                return Err(usage("--df only applies to --test chi2"));
            }
            let groups = test
                .groups
                .ok_or_else(|| usage("--test anova requires --groups"))?;
            Ok(TestSpec::one_way_f(groups, sig)?)
        }
    }
}

fn resolve_metric(name: &str, spec: &TestSpec) -> Result<EsMetric, CliError> {
    match name {
        "d" => Ok(EsMetric::D),
        "r" => Ok(EsMetric::R),
        "w" | "phi" => Ok(EsMetric::W),
        "f" => Ok(EsMetric::F),
        "v" => match spec.family() {
            sensan::TestFamily::Chi2Gof { df } => Ok(EsMetric::V { dfs: df }),
            _ => Err(usage("metric v only applies to --test chi2 (--es)")),
        },
        other => Err(usage(format!(
            "unknown effect-size metric {other:?}; use d, r, w, v, or f (--es)"
        ))),
    }
}

fn build_effect_size(arg: &EsArg, spec: &TestSpec) -> Result<EffectSize, CliError> {
    let metric = resolve_metric(&arg.metric, spec)?;
    if !spec.metric_compatible(metric) {
        return Err(usage(format!(
            "metric {metric} does not apply to this test family (--es)"
        )));
    }
    Ok(EffectSize::new(metric, arg.value)?)
}

fn validate_output(output: &OutputArgs) -> Result<(), CliError> {
    if output.precision > 12 {
        return Err(usage("--precision must be at most 12"));
    }
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e} (--out)", path.display()))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => {
            validate_output(&args.output)?;
            let spec = build_spec(&args.test, args.sig)?;
            let target = build_effect_size(&args.es, &spec)?;
            let result = min_sample_size(&spec, &target)?;
            let report = SolveReport {
                spec,
                target,
                result,
            };
            let text = output::render_solve(&report, args.output.format, args.output.precision);
            emit(&text, args.output.out.as_deref())
        }
        Command::Mes(args) => {
            validate_output(&args.output)?;
            let spec = build_spec(&args.test, args.sig)?;
            let metric = match &args.metric {
                Some(name) => resolve_metric(name, &spec)?,
                None => spec.default_metric(),
            };
            let result = mes_at_n(&spec, args.n, metric)?;
            let report = MesReport { spec, result };
            let text = output::render_mes(&report, args.output.format, args.output.precision);
            emit(&text, args.output.out.as_deref())
        }
        Command::Posthoc(args) => {
            validate_output(&args.output)?;
            let pct = post_hoc_sensitiveness(args.n_actual, args.n_min)?;
            let report = PosthocReport {
                n_actual: args.n_actual,
                n_min: args.n_min,
                sensitiveness_pct: pct,
            };
            let text = output::render_posthoc(&report, args.output.format, args.output.precision);
            emit(&text, args.output.out.as_deref())
        }
        Command::Power(args) => {
            validate_output(&args.output)?;
            let spec = build_spec(&args.test, args.alpha)?;
            let es = build_effect_size(&args.es, &spec)?;
            let report = match (args.power, args.n) {
                (Some(target_power), None) => {
                    let pspec = sensan::PowerSpec::new(spec, es, target_power)?;
                    let n = min_n_for_power(&pspec)?;
                    PowerReport {
                        spec,
                        population_es: es,
                        target_power: Some(target_power),
                        n,
                        power: power_at_n(&pspec, n)?,
                    }
                }
                (None, Some(n)) => {
                    // target_power is irrelevant when evaluating at fixed N
                    let pspec = sensan::PowerSpec::new(spec, es, 0.5)?;
                    PowerReport {
                        spec,
                        population_es: es,
                        target_power: None,
                        n,
                        power: power_at_n(&pspec, n)?,
                    }
                }
                _ => return Err(usage("pass exactly one of --power or --n")),
            };
            let text = output::render_power(&report, args.output.format, args.output.precision);
            emit(&text, args.output.out.as_deref())
        }
        Command::Table(args) => {
            validate_output(&args.output)?;
            let rows = match args.which {
                TableKind::Table2 => tables::generate_table2()?,
                TableKind::Supp2 => tables::generate_supp_table2()?,
            };
            let text =
                output::render_table(&rows, args.which, args.output.format, args.output.precision);
            emit(&text, args.output.out.as_deref())
        }
        Command::Simulate(args) => {
            validate_output(&args.output)?;
            let mut config = load_config(&args)?;
            if let Some(seed) = args.seed {
                config.seed = seed;
            }
            config.validate()?;
            let outcomes = simulation::run_simulation(&config)?;
            let capture_analysis = analysis::analyze_captures(&outcomes)?;

            if let Some(dir) = &args.out_dir {
                write_simulation_outputs(
                    dir,
                    &outcomes,
                    &capture_analysis,
                    args.output.precision,
                )?;
            }
            let text = output::render_capture_analysis(
                &capture_analysis,
                args.output.format,
                args.output.precision,
            );
            emit(&text, args.output.out.as_deref())
        }
    }
}

fn load_config(args: &SimulateArgs) -> Result<SimulationConfig, CliError> {
    match (&args.config, args.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e} (--config)", path.display())))?;
            let by_ext = path
                .extension()
                .and_then(|e| e.to_str())
                .map(|e| e.to_ascii_lowercase());
            match by_ext.as_deref() {
                Some("json") => Ok(SimulationConfig::from_json_str(&text)?),
                Some("toml") => Ok(SimulationConfig::from_toml_str(&text)?),
                _ => Err(usage(
                    "config file must end in .json or .toml (--config)".to_string(),
                )),
            }
        }
        (None, Some(Preset::Desk)) => Ok(SimulationConfig::desk_scale(1)),
        (None, Some(Preset::Full)) => Ok(SimulationConfig::full_scale(1)),
        _ => Err(usage("pass exactly one of --config or --preset")),
    }
}

fn write_simulation_outputs(
    dir: &Path,
    outcomes: &[sensan::StudyOutcome],
    capture_analysis: &analysis::CaptureAnalysis,
    precision: usize,
) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| usage(format!("cannot create {}: {e} (--out-dir)", dir.display())))?;
    let write = |name: &str, text: String| -> Result<(), CliError> {
        let path = dir.join(name);
        std::fs::write(&path, text)
            .map_err(|e| usage(format!("cannot write {}: {e} (--out-dir)", path.display())))
    };

    let mut outcomes_json =
        serde_json::to_string_pretty(outcomes).expect("outcomes are serializable");
    outcomes_json.push('\n');
    write("outcomes.json", outcomes_json)?;

    let summaries = simulation::summarize_studies(outcomes);
    write("studies.csv", output::studies_csv(&summaries, precision))?;
    write(
        "capture_summary.csv",
        output::capture_summary_csv(capture_analysis, precision),
    )?;
    write(
        "comparisons.csv",
        output::comparisons_csv(capture_analysis, precision),
    )?;
    write(
        "comparisons_by_study.csv",
        output::comparisons_by_study_csv(capture_analysis, precision),
    )?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
