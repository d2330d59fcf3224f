//! Command-line front end.
//!
//! One subcommand per analysis product (`intra`, `pdi`, `affected`,
//! `metrics`, `graph`) plus `oracle` for the simulation-based soundness
//! checks. The requested report is the only thing written to the success
//! stream; diagnostics go to the error stream. Exit codes: `0` success,
//! `1` the oracle found violations, `2` bad input or usage.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::formats::{
    emit_affected, emit_dot, emit_intra, emit_metrics, emit_report, parse_log, parse_model,
    parse_schema, Provenance, ReportFormat,
};
use crate::ids::ItemId;
use crate::impact::{affected_sets, compute_metrics, compute_pdi, intra_impact_analysis, AffectedSet};
use crate::model::ProcessModel;
use crate::oracle::{check_log, soundness_campaign, CampaignReport, GeneratorBounds, InstanceLog};
use crate::schema::{check_bindings, RelationalSchema};

#[derive(Parser)]
#[command(
    name = "crosscase",
    version,
    about = "Design-time analysis of data impacts within and across process instances",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Markdown,
}

impl From<OutputFormat> for ReportFormat {
    fn from(format: OutputFormat) -> Self {
        match format {
            OutputFormat::Json => ReportFormat::Json,
            OutputFormat::Markdown => ReportFormat::Markdown,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Path to the process-model document.
    #[arg(long)]
    model: PathBuf,

    /// Path to the relational-schema document.
    #[arg(long)]
    schema: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    /// Output format of the report.
    #[arg(long, value_enum, default_value = "markdown")]
    format: OutputFormat,

    /// Prefix the report with a metadata header naming the tool and the
    /// input files.
    #[arg(long)]
    with_provenance: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the intra-instance data impact pairs.
    Intra {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Compute the potential inter-instance data impact triplets.
    Pdi {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Show the affected set (reachable sharing functions) of one item.
    Affected {
        /// The triggering data item.
        item: String,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Summarize the triplet set with the five standard metrics.
    Metrics {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Export the triplet set as a Graphviz digraph.
    Graph {
        #[command(flatten)]
        input: InputArgs,
        /// Prefix the graph with a metadata comment.
        #[arg(long)]
        with_provenance: bool,
    },
    /// Validate the design-time analysis against simulated (or supplied)
    /// process instances.
    Oracle {
        #[command(flatten)]
        input: InputArgs,

        /// Check one existing instance-log document instead of
        /// generating logs.
        #[arg(long, conflicts_with = "seeds")]
        log: Option<PathBuf>,

        /// Inclusive seed range `START..END`; one log is generated and
        /// checked per seed.
        #[arg(long)]
        seeds: Option<String>,

        /// Most instances per generated log.
        #[arg(long, default_value_t = 4)]
        max_instances: usize,

        /// Most visits per control-flow node within one generated trace.
        #[arg(long, default_value_t = 2)]
        max_loop_unroll: usize,

        /// Size of the key pool shared items draw from.
        #[arg(long, default_value_t = 2)]
        pk_domain_size: usize,
    },
}

/// Runs the command line and returns the process exit code. All output
/// goes to the given streams, making invocations fully testable.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(error) => {
            return match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{error}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{error}");
                    2
                }
            };
        }
    };

    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(stderr, "{}: {message}", error_prefix());
            2
        }
    }
}

/// `error` in red when the error stream is a terminal and color is not
/// disabled via `NO_COLOR`.
fn error_prefix() -> &'static str {
    let colored = std::env::var_os("NO_COLOR").is_none() && std::io::stderr().is_terminal();
    if colored {
        "\x1b[31merror\x1b[0m"
    } else {
        "error"
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32, String> {
    match command {
        Command::Intra { input, render } => {
            let (model, _schema) = load_inputs(&input)?;
            let intra = intra_impact_analysis(&model).map_err(|e| e.to_string())?;
            let provenance = provenance_for(&input, render.with_provenance);
            emit(
                stdout,
                emit_intra(&intra, render.format.into(), provenance.as_ref()),
            );
            Ok(0)
        }
        Command::Pdi { input, render } => {
            let (model, schema) = load_inputs(&input)?;
            let pdi = compute_pdi(&model, &schema).map_err(|e| e.to_string())?;
            let affected = affected_sets(&pdi, &schema).map_err(|e| e.to_string())?;
            let metrics = compute_metrics(&pdi);
            let provenance = provenance_for(&input, render.with_provenance);
            emit(
                stdout,
                emit_report(
                    &pdi,
                    &affected,
                    &metrics,
                    render.format.into(),
                    provenance.as_ref(),
                ),
            );
            Ok(0)
        }
        Command::Affected {
            item,
            input,
            render,
        } => {
            let (model, schema) = load_inputs(&input)?;
            let item = ItemId::from(item);
            if model.data_item(&item).is_none() {
                return Err(format!("unknown data item: {item}"));
            }
            let pdi = compute_pdi(&model, &schema).map_err(|e| e.to_string())?;
            let sets = affected_sets(&pdi, &schema).map_err(|e| e.to_string())?;
            let set = sets.get(&item).cloned().unwrap_or_else(|| AffectedSet {
                trigger: item.clone(),
                sharing_functions: BTreeSet::new(),
            });
            let provenance = provenance_for(&input, render.with_provenance);
            emit(
                stdout,
                emit_affected(&set, render.format.into(), provenance.as_ref()),
            );
            Ok(0)
        }
        Command::Metrics { input, render } => {
            let (model, schema) = load_inputs(&input)?;
            let pdi = compute_pdi(&model, &schema).map_err(|e| e.to_string())?;
            let metrics = compute_metrics(&pdi);
            let provenance = provenance_for(&input, render.with_provenance);
            emit(
                stdout,
                emit_metrics(&metrics, render.format.into(), provenance.as_ref()),
            );
            Ok(0)
        }
        Command::Graph {
            input,
            with_provenance,
        } => {
            let (model, schema) = load_inputs(&input)?;
            let pdi = compute_pdi(&model, &schema).map_err(|e| e.to_string())?;
            let provenance = provenance_for(&input, with_provenance);
            emit(stdout, emit_dot(&pdi, provenance.as_ref()));
            Ok(0)
        }
        Command::Oracle {
            input,
            log,
            seeds,
            max_instances,
            max_loop_unroll,
            pk_domain_size,
        } => {
            let (model, schema) = load_inputs(&input)?;
            let bounds = GeneratorBounds {
                max_instances,
                max_loop_unroll,
                pk_domain_size,
            };
            let (report, scope) = match (log, seeds) {
                (Some(path), _) => {
                    let log = load_log(&path, &model, &schema)?;
                    let report = check_log(&model, &schema, &log).map_err(|e| e.to_string())?;
                    (report, format!("log: {} (1 log)", path.display()))
                }
                (None, Some(range)) => {
                    let (start, end) = parse_seed_range(&range)?;
                    let report =
                        soundness_campaign(&model, &schema, start..=end, &bounds)
                            .map_err(|e| e.to_string())?;
                    (report, format!("seeds: {start}..{end} ({} logs)", end - start + 1))
                }
                (None, None) => {
                    return Err("oracle needs either --seeds START..END or --log FILE".into())
                }
            };
            let code = render_campaign(stdout, &model, &scope, &report);
            Ok(code)
        }
    }
}

fn render_campaign(
    stdout: &mut dyn Write,
    model: &ProcessModel,
    scope: &str,
    report: &CampaignReport,
) -> i32 {
    let mut out = String::new();
    out.push_str(&format!("model: {}\n", model.name()));
    out.push_str(&format!("{scope}\n"));
    out.push_str(&format!("observed triplets: {}\n", report.observed_count));
    out.push_str(&format!(
        "containment: {} containment violations\n",
        report.containment_violations.len()
    ));
    for (trigger, affected, shared) in &report.containment_violations {
        out.push_str(&format!(
            "  observed but not predicted: ({trigger}, {affected}; {shared})\n"
        ));
    }
    out.push_str(&format!(
        "identity sharing: {} violations\n",
        report.identity_violations
    ));
    out.push_str(&format!(
        "sharing cardinality: {} violations\n",
        report.cardinality_violations
    ));
    let passed = report.passed();
    out.push_str(&format!("result: {}\n", if passed { "PASS" } else { "FAIL" }));
    emit(stdout, out);
    if passed {
        0
    } else {
        1
    }
}

fn emit(stdout: &mut dyn Write, text: String) {
    let _ = stdout.write_all(text.as_bytes());
}

fn provenance_for(input: &InputArgs, wanted: bool) -> Option<Provenance> {
    wanted.then(|| Provenance {
        tool: "crosscase".to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        model: input.model.display().to_string(),
        schema: input.schema.display().to_string(),
    })
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_inputs(input: &InputArgs) -> Result<(ProcessModel, RelationalSchema), String> {
    let model_text = read_file(&input.model)?;
    let model = parse_model(&model_text)
        .map_err(|e| format!("{}: {e}", input.model.display()))?;
    let schema_text = read_file(&input.schema)?;
    let schema = parse_schema(&schema_text)
        .map_err(|e| format!("{}: {e}", input.schema.display()))?;
    let bindings = check_bindings(&model, &schema);
    if !bindings.is_empty() {
        return Err(format!(
            "model/schema bindings failed validation:\n{bindings}"
        ));
    }
    Ok((model, schema))
}

fn load_log(
    path: &Path,
    model: &ProcessModel,
    schema: &RelationalSchema,
) -> Result<InstanceLog, String> {
    let text = read_file(path)?;
    let log = parse_log(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let validation = crate::oracle::validate_log(model, schema, &log);
    if !validation.is_empty() {
        return Err(format!(
            "{} failed validation:\n{validation}",
            path.display()
        ));
    }
    Ok(log)
}

fn parse_seed_range(text: &str) -> Result<(u64, u64), String> {
    let (start, end) = text
        .split_once("..")
        .ok_or_else(|| format!("seed range must look like START..END (got `{text}`)"))?;
    let start: u64 = start
        .trim()
        .parse()
        .map_err(|_| format!("invalid seed range start `{start}`"))?;
    let end: u64 = end
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| format!("invalid seed range end `{end}`"))?;
    if start > end {
        return Err(format!("seed range {start}..{end} is empty"));
    }
    Ok((start, end))
}
