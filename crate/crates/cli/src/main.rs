//! Command-line front end for the CAEX toolchain: map documents to RDF, run
//! role and flow queries over the result, and validate shape rules.
//!
//! Exit codes: 0 success (warnings allowed), 1 fatal parse or mapping error,
//! 2 unreadable input, bad flags, or a malformed rules file, 3 violations
//! found by `validate`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use amlgraph::query::{
    default_port_class, export_flow_graph, flow_graph, select_by_role, Degree, FlowGraph,
    FlowMode, RoleSelectionSpec,
};
use amlgraph::rdf::{serialize_ntriples, serialize_turtle};
use amlgraph::validation::{check_structural, load_rules, validate, ValidationReport};
use amlgraph::{
    iri_safe, map_full, parse_document, scan_document, Diagnostic, Document, Graph, Iri,
    MappingConfig, ParseError, Vocabulary,
};

/// Overrides the default base IRI when `--base-iri` is not given.
const BASE_IRI_ENV: &str = "AMLGRAPH_BASE_IRI";

const EXIT_FATAL: u8 = 1;
const EXIT_UNREADABLE: u8 = 2;
const EXIT_VIOLATIONS: u8 = 3;

#[derive(Parser)]
#[command(name = "amlgraph", version, about = "CAEX/AutomationML to RDF toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map a CAEX document to an RDF graph and serialize it.
    Map(MapArgs),
    /// Query the mapped graph.
    #[command(subcommand)]
    Query(QueryCommand),
    /// Validate the document and its mapped graph.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Input CAEX XML file.
    input: PathBuf,

    /// Write output to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Base IRI for minted element IRIs; must end with '/' or '#'. Falls back
    /// to the AMLGRAPH_BASE_IRI environment variable, then to
    /// "urn:aml:<file stem>/".
    #[arg(long)]
    base_iri: Option<String>,

    /// Namespace of the vocabulary (classes and properties).
    #[arg(long)]
    ontology_ns: Option<String>,

    /// Promote warnings to fatal errors.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Serialization format of the mapped graph.
    #[arg(long, value_enum, default_value_t = OutputFormat::Ntriples)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum QueryCommand {
    /// Select InternalElements by their required role.
    Select(SelectArgs),
    /// Derive the material-flow graph between InternalElements.
    Flow(FlowArgs),
}

#[derive(Args)]
struct SelectArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// IRI of the role class to select by.
    #[arg(long)]
    role: String,

    /// How far up the role hierarchy the match may reach.
    #[arg(long, value_enum, default_value_t = DegreeArg::Exact)]
    degree: DegreeArg,
}

#[derive(Args)]
struct FlowArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Flow semantics: every link in both directions, or directional edges
    /// gated by the source element's valve state.
    #[arg(long, value_enum, default_value_t = ModeArg::Bidirectional)]
    mode: ModeArg,

    /// IRI of the interface class counting as a flow port; defaults to the
    /// base "Port" interface class found in the graph.
    #[arg(long)]
    port_class: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Rule file with cardinality and connection constraints.
    #[arg(long)]
    rules: Option<PathBuf>,

    /// Also report structural problems (mandatory IDs, uniqueness, dangling
    /// references) of the document itself.
    #[arg(long)]
    structural: bool,

    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Ntriples,
    Turtle,
}

#[derive(Clone, Copy, ValueEnum)]
enum DegreeArg {
    Exact,
    Direct,
    Transitive,
}

impl From<DegreeArg> for Degree {
    fn from(arg: DegreeArg) -> Degree {
        match arg {
            DegreeArg::Exact => Degree::Exact,
            DegreeArg::Direct => Degree::DirectBase,
            DegreeArg::Transitive => Degree::Transitive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Bidirectional,
    ValveState,
}

impl From<ModeArg> for FlowMode {
    fn from(arg: ModeArg) -> FlowMode {
        match arg {
            ModeArg::Bidirectional => FlowMode::Bidirectional,
            ModeArg::ValveState => FlowMode::ValveState,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Map(args) => cmd_map(args),
        Command::Query(QueryCommand::Select(args)) => cmd_select(args),
        Command::Query(QueryCommand::Flow(args)) => cmd_flow(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}

fn cmd_map(args: &MapArgs) -> Result<(), u8> {
    let bytes = read_input(&args.common.input)?;
    let config = resolve_config(&args.common)?;
    let doc = parse_strict(&bytes, &args.common)?;
    let graph = map_graph(&doc, &config, args.common.strict)?;
    let content = match args.format {
        OutputFormat::Ntriples => serialize_ntriples(&graph),
        OutputFormat::Turtle => serialize_turtle(&graph),
    };
    write_output(&args.common.output, &content)
}

fn cmd_select(args: &SelectArgs) -> Result<(), u8> {
    let (graph, voc) = mapped_graph(&args.common)?;
    let target_role = parse_iri(&args.role, "--role")?;
    let spec = RoleSelectionSpec { target_role, degree: args.degree.into() };
    let mut content = String::new();
    for iri in select_by_role(&graph, &voc, &spec) {
        content.push_str(iri.as_str());
        content.push('\n');
    }
    write_output(&args.common.output, &content)
}

fn cmd_flow(args: &FlowArgs) -> Result<(), u8> {
    let (graph, voc) = mapped_graph(&args.common)?;
    let port_class = match &args.port_class {
        Some(raw) => Some(parse_iri(raw, "--port-class")?),
        None => default_port_class(&graph, &voc),
    };
    let flow = match port_class {
        Some(port) => flow_graph(&graph, &voc, &port, args.mode.into()),
        None => FlowGraph { edges: Default::default() },
    };
    let content = serialize_ntriples(&export_flow_graph(&flow, &voc));
    write_output(&args.common.output, &content)
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), u8> {
    if args.rules.is_none() && !args.structural {
        return Err(fail(EXIT_UNREADABLE, "nothing to check: pass --rules and/or --structural"));
    }
    let bytes = read_input(&args.common.input)?;
    let config = resolve_config(&args.common)?;
    let mut violations = Vec::new();

    // Structural checks work on a lenient scan so that the very problems
    // being reported do not abort the run.
    let doc = if args.structural {
        let (doc, _) = scan_document(&bytes, &source_name(&args.common.input))
            .map_err(|e| fail(EXIT_FATAL, format!("malformed XML: {e}")))?;
        violations.extend(check_structural(&doc).violations);
        doc
    } else {
        parse_strict(&bytes, &args.common)?
    };

    if let Some(rules_path) = &args.rules {
        let rule_bytes = fs::read(rules_path).map_err(|e| {
            fail(EXIT_UNREADABLE, format!("cannot read {}: {e}", rules_path.display()))
        })?;
        let rules = load_rules(&rule_bytes).map_err(|e| fail(EXIT_UNREADABLE, e.to_string()))?;
        let graph = map_graph(&doc, &config, args.common.strict)?;
        let voc = Vocabulary::new(&config.ontology_ns);
        violations.extend(validate(&graph, &voc, &rules).violations);
    }

    let report = ValidationReport::new(violations);
    let content = render_report(&report, args.format);
    write_output(&args.common.output, &content)?;
    if report.conforms {
        Ok(())
    } else {
        Err(EXIT_VIOLATIONS)
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, u8> {
    fs::read(path)
        .map_err(|e| fail(EXIT_UNREADABLE, format!("cannot read {}: {e}", path.display())))
}

fn source_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())
}

fn default_base_iri(input: &Path) -> String {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "document".into());
    format!("urn:aml:{}/", iri_safe(&stem))
}

fn parse_iri(raw: &str, what: &str) -> Result<Iri, u8> {
    Iri::new(raw).map_err(|e| fail(EXIT_UNREADABLE, format!("invalid IRI for {what}: {e}")))
}

fn resolve_config(common: &CommonArgs) -> Result<MappingConfig, u8> {
    let base = common
        .base_iri
        .clone()
        .or_else(|| std::env::var(BASE_IRI_ENV).ok())
        .unwrap_or_else(|| default_base_iri(&common.input));
    let base = parse_iri(&base, "--base-iri")?;
    let mut config =
        MappingConfig::new(base).map_err(|e| fail(EXIT_UNREADABLE, e.to_string()))?;
    if let Some(ns) = &common.ontology_ns {
        config.ontology_ns = parse_iri(ns, "--ontology-ns")?;
    }
    Ok(config)
}

fn parse_strict(bytes: &[u8], common: &CommonArgs) -> Result<Document, u8> {
    match parse_document(bytes, &source_name(&common.input)) {
        Ok((doc, diags)) => {
            emit_diagnostics(&diags, common.strict)?;
            Ok(doc)
        }
        Err(ParseError::Xml(msg)) => Err(fail(EXIT_FATAL, format!("malformed XML: {msg}"))),
        Err(ParseError::Rejected(diags)) => {
            for d in &diags {
                eprintln!("{d}");
            }
            Err(fail(EXIT_FATAL, "document rejected"))
        }
    }
}

fn map_graph(doc: &Document, config: &MappingConfig, strict: bool) -> Result<Graph, u8> {
    match map_full(doc, config) {
        Ok((graph, diags)) => {
            emit_diagnostics(&diags, strict)?;
            Ok(graph)
        }
        Err(e) => Err(fail(EXIT_FATAL, e.to_string())),
    }
}

fn mapped_graph(common: &CommonArgs) -> Result<(Graph, Vocabulary), u8> {
    let bytes = read_input(&common.input)?;
    let config = resolve_config(common)?;
    let doc = parse_strict(&bytes, common)?;
    let graph = map_graph(&doc, &config, common.strict)?;
    let voc = Vocabulary::new(&config.ontology_ns);
    Ok((graph, voc))
}

fn emit_diagnostics(diags: &[Diagnostic], strict: bool) -> Result<(), u8> {
    for d in diags {
        eprintln!("{d}");
    }
    if strict && !diags.is_empty() {
        Err(fail(EXIT_FATAL, "warnings promoted to errors by --strict"))
    } else {
        Ok(())
    }
}

fn write_output(target: &Option<PathBuf>, content: &str) -> Result<(), u8> {
    match target {
        Some(path) => fs::write(path, content).map_err(|e| {
            fail(EXIT_UNREADABLE, format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn fail(code: u8, message: impl AsRef<str>) -> u8 {
    eprintln!("error: {}", message.as_ref());
    code
}

#[derive(Serialize)]
struct ReportViolation<'a> {
    rule_id: &'a str,
    focus_node: &'a str,
    observed: &'a str,
    message: &'a str,
}

#[derive(Serialize)]
struct ReportBody<'a> {
    conforms: bool,
    violations: Vec<ReportViolation<'a>>,
}

fn render_report(report: &ValidationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => {
            let mut out = format!("conforms: {}\n", report.conforms);
            for v in &report.violations {
                out.push('\n');
                out.push_str(&format!(
                    "rule_id: {}\nfocus_node: {}\nobserved: {}\nmessage: {}\n",
                    v.rule_id,
                    v.focus_node.as_str(),
                    v.observed,
                    v.message
                ));
            }
            out
        }
        ReportFormat::Json => {
            let body = ReportBody {
                conforms: report.conforms,
                violations: report
                    .violations
                    .iter()
                    .map(|v| ReportViolation {
                        rule_id: &v.rule_id,
                        focus_node: v.focus_node.as_str(),
                        observed: &v.observed,
                        message: &v.message,
                    })
                    .collect(),
            };
            let mut out = serde_json::to_string_pretty(&body).expect("report serializes");
            out.push('\n');
            out
        }
    }
}
