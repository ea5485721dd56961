//! Command-line front end: parses JSON algebra specifications, runs the
//! classification and decision pipelines, and emits or re-verifies JSON
//! certificate documents.
//!
//! Exit codes: 0 success (verdict in the payload), 2 parse error, 3
//! validation error, 4 unsupported input, 5 verification failure.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::algebra::{Recipe, SuperAlgebra, SuperType};
use crate::certificate::{
    AlgebraSpec, CertificateDocument, ClassificationDocument, CorDocument, WitnessDocument,
    SCHEMA_VERSION, TOOL_VERSION,
};
use crate::error::Error;
use crate::fields::FieldDescriptor;
use crate::firstkind::{
    clifford_first_kind, decide_superantiautomorphism, decide_superinvolution_first_kind,
    normalize_to_grading, superanti_square_invariant, Verdict,
};
use crate::maps::{
    grading_automorphism, is_superantiautomorphism, superantiautomorphism_violation, GradedMap,
};
use crate::secondkind::{
    build_corestriction, decide_superinvolution_second_kind, odd_type_second_kind,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Parser)]
#[command(
    name = "superalg",
    version,
    about = "Certified construction, classification, and superinvolution decisions for finite-dimensional superalgebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input JSON file: an algebra spec, an array of specs, or (for verify)
    /// certificate documents.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long = "out")]
    out: Option<PathBuf>,
    /// Worker threads for batch inputs (requires the parallel feature).
    #[arg(long)]
    jobs: Option<usize>,
    /// Effort cap for norm-equation witness searches
    /// (overrides SUPERALG_SEARCH_BOUND).
    #[arg(long = "search-bound")]
    search_bound: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a superalgebra: centrality, graded simplicity, even/odd type.
    Classify(IoArgs),
    /// Decide existence of a superinvolution of the first kind.
    FirstKind(IoArgs),
    /// Decide existence of a superantiautomorphism and normalize it so that
    /// its square is the grading automorphism.
    GradedAlbert(IoArgs),
    /// Decide existence of a superinvolution of the second kind over a
    /// quadratic extension.
    SecondKind(IoArgs),
    /// Build the corestriction to the rationals and classify it.
    Cor(IoArgs),
    /// Decide the first-kind question for a Clifford algebra of a diagonal
    /// quadratic form.
    Clifford(IoArgs),
    /// Re-check an emitted certificate document against a freshly built
    /// algebra.
    Verify(IoArgs),
}

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> CliError {
        CliError {
            code,
            message: message.into(),
        }
    }
}

/// Library errors during a build are parse errors when a scalar string is
/// malformed, unsupported-input errors when the request is outside the
/// implemented fragment, and validation errors otherwise.
fn classify_error(e: &Error) -> i32 {
    match e {
        Error::InvalidAlgebra(msg) if msg.contains("cannot parse scalar") => EXIT_PARSE,
        Error::InvalidFieldDescriptor(msg) if msg.contains("scalar") => EXIT_PARSE,
        Error::UnsupportedCenterFactorization
        | Error::UnsupportedDimension
        | Error::UnsupportedShape(_)
        | Error::NotOverQuadraticExtension
        | Error::TooLarge(_) => EXIT_UNSUPPORTED,
        _ => EXIT_VALIDATION,
    }
}

fn lib_err(e: Error) -> CliError {
    CliError::new(classify_error(&e), e.to_string())
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Classify(_) => "classify",
        Command::FirstKind(_) => "first-kind",
        Command::GradedAlbert(_) => "graded-albert",
        Command::SecondKind(_) => "second-kind",
        Command::Cor(_) => "cor",
        Command::Clifford(_) => "clifford",
        Command::Verify(_) => "verify",
    }
}

fn io_args(cmd: &Command) -> &IoArgs {
    match cmd {
        Command::Classify(a)
        | Command::FirstKind(a)
        | Command::GradedAlbert(a)
        | Command::SecondKind(a)
        | Command::Cor(a)
        | Command::Clifford(a)
        | Command::Verify(a) => a,
    }
}

pub fn main() -> i32 {
    let cli = Cli::parse();
    let args = io_args(&cli.command);

    if let Ok(v) = std::env::var("SUPERALG_SEARCH_BOUND") {
        match v.parse::<u64>() {
            Ok(b) => crate::fields::set_search_bound(b),
            Err(_) => {
                eprintln!("superalg: invalid SUPERALG_SEARCH_BOUND {:?}", v);
                return EXIT_PARSE;
            }
        }
    }
    if let Some(b) = args.search_bound {
        crate::fields::set_search_bound(b);
    }

    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("superalg: cannot read {}: {}", args.input.display(), e);
            return EXIT_PARSE;
        }
    };

    let name = command_name(&cli.command);
    let result = if matches!(cli.command, Command::Verify(_)) {
        run_verify(&text)
    } else {
        run_decide(name, &text, args.jobs)
    };

    match result {
        Ok((payload, code)) => {
            let out = payload + "\n";
            let write_result = match &args.out {
                Some(path) => std::fs::write(path, out.as_bytes()),
                None => std::io::stdout().write_all(out.as_bytes()),
            };
            if let Err(e) = write_result {
                eprintln!("superalg: cannot write output: {}", e);
                return EXIT_VALIDATION;
            }
            code
        }
        Err(e) => {
            eprintln!("superalg: {}", e.message);
            e.code
        }
    }
}

/// Runs a decision command over a single spec or a batch array; returns the
/// serialized payload and the process exit code (the maximum over the
/// batch, so an Unsupported verdict anywhere surfaces as 4).
fn run_decide(name: &str, text: &str, jobs: Option<usize>) -> Result<(String, i32), CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("invalid JSON: {}", e)))?;
    if value.is_array() {
        let specs: Vec<AlgebraSpec> = serde_json::from_value(value)
            .map_err(|e| CliError::new(EXIT_PARSE, format!("invalid algebra spec: {}", e)))?;
        let results = run_batch(name, &specs, jobs);
        let mut docs = Vec::with_capacity(results.len());
        let mut code = EXIT_OK;
        for r in results {
            let doc = r?;
            code = code.max(doc_code(&doc));
            docs.push(doc);
        }
        let payload = serde_json::to_string_pretty(&docs)
            .map_err(|e| CliError::new(EXIT_VALIDATION, e.to_string()))?;
        Ok((payload, code))
    } else {
        let spec: AlgebraSpec = serde_json::from_value(value)
            .map_err(|e| CliError::new(EXIT_PARSE, format!("invalid algebra spec: {}", e)))?;
        let doc = run_one(name, &spec)?;
        let code = doc_code(&doc);
        let payload = serde_json::to_string_pretty(&doc)
            .map_err(|e| CliError::new(EXIT_VALIDATION, e.to_string()))?;
        Ok((payload, code))
    }
}

fn doc_code(doc: &CertificateDocument) -> i32 {
    if doc.verdict == Some(Verdict::Unsupported) {
        EXIT_UNSUPPORTED
    } else {
        EXIT_OK
    }
}

#[cfg(feature = "parallel")]
fn run_batch(
    name: &str,
    specs: &[AlgebraSpec],
    jobs: Option<usize>,
) -> Vec<Result<CertificateDocument, CliError>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build();
    match pool {
        Ok(pool) => pool.install(|| specs.par_iter().map(|s| run_one(name, s)).collect()),
        Err(_) => specs.iter().map(|s| run_one(name, s)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_batch(
    name: &str,
    specs: &[AlgebraSpec],
    _jobs: Option<usize>,
) -> Vec<Result<CertificateDocument, CliError>> {
    specs.iter().map(|s| run_one(name, s)).collect()
}

/// Decides a batch of specs one after another; the baseline for the
/// parallel-batch benchmark.
pub fn decide_specs_sequential(
    command: &str,
    specs: &[AlgebraSpec],
) -> Vec<Result<CertificateDocument, String>> {
    specs
        .iter()
        .map(|s| run_one(command, s).map_err(|e| e.message))
        .collect()
}

/// Decides a batch of specs over the worker pool when the `parallel`
/// feature is enabled (sequentially otherwise).
pub fn decide_specs(
    command: &str,
    specs: &[AlgebraSpec],
    jobs: Option<usize>,
) -> Vec<Result<CertificateDocument, String>> {
    run_batch(command, specs, jobs)
        .into_iter()
        .map(|r| r.map_err(|e| e.message))
        .collect()
}

fn run_one(name: &str, spec: &AlgebraSpec) -> Result<CertificateDocument, CliError> {
    let a = spec.build().map_err(lib_err)?;
    let mut doc = CertificateDocument::new(name, spec);
    match name {
        "classify" => {
            let report = a.classify_css().map_err(lib_err)?;
            doc.classification = Some(ClassificationDocument::from_report(&report));
            doc.verification_trace
                .push(format!("classified a dimension-{} superalgebra", a.dim));
        }
        "first-kind" => {
            let cert = decide_superinvolution_first_kind(&a).map_err(lib_err)?;
            doc = doc.with_certificate(&cert);
        }
        "graded-albert" => {
            let cert = decide_superantiautomorphism(&a).map_err(lib_err)?;
            doc = doc.with_certificate(&cert);
            if cert.verdict == Verdict::Exists {
                let eta = cert.witness.as_ref().expect("Exists carries a witness");
                let normalized = normalize_to_grading(&a, eta).map_err(lib_err)?;
                let inv = superanti_square_invariant(&a, eta).map_err(lib_err)?;
                doc.invariant_data = Some(inv.to_string());
                doc.witness = normalized.witness.as_ref().map(WitnessDocument::from_map);
                doc.reason_tag = Some(normalized.reason_tag.clone());
                doc.verification_trace.extend(normalized.trace);
            }
        }
        "second-kind" => {
            let cert = run_second_kind(&a).map_err(lib_err)?;
            doc = doc.with_certificate(&cert);
        }
        "cor" => {
            let cor = build_corestriction(&a).map_err(lib_err)?;
            let t = &cor.t_algebra;
            let spanning: Vec<Vec<String>> = cor
                .fixed_basis
                .iter()
                .map(|v| v.iter().map(|c| c.to_string()).collect())
                .collect();
            let parity: Vec<u8> = cor.cor.parity.clone();
            let even_dim = parity.iter().filter(|&&p| p == 0).count();
            doc.cor = Some(CorDocument {
                dim: cor.cor.dim,
                even_dim,
                spanning_set: spanning,
                parity,
            });
            let report = cor.cor.classify_css().map_err(lib_err)?;
            doc.classification = Some(ClassificationDocument::from_report(&report));
            doc.verification_trace.push(format!(
                "corestriction: fixed subalgebra of the {}-dimensional tensor square, dimension {}",
                t.dim, cor.cor.dim
            ));
        }
        "clifford" => {
            let coeffs = match &a.recipe {
                Some(Recipe::Clifford { coeffs }) => coeffs.clone(),
                _ => {
                    return Err(CliError::new(
                        EXIT_VALIDATION,
                        "clifford command requires a clifford recipe",
                    ))
                }
            };
            let cert = clifford_first_kind(&coeffs).map_err(lib_err)?;
            doc = doc.with_certificate(&cert);
        }
        other => {
            return Err(CliError::new(
                EXIT_VALIDATION,
                format!("unknown command {:?}", other),
            ))
        }
    }
    Ok(doc)
}

/// Second-kind routing: the general recipe-driven decision, falling back to
/// the odd-type tensor construction when the direct route is unsupported.
fn run_second_kind(a: &SuperAlgebra) -> crate::error::Result<crate::firstkind::Certificate> {
    let direct = decide_superinvolution_second_kind(a)?;
    if direct.verdict != Verdict::Unsupported {
        return Ok(direct);
    }
    let report = a.classify_css()?;
    if matches!(report.kind, SuperType::Odd { .. }) {
        let odd = odd_type_second_kind(a)?;
        if odd.verdict != Verdict::Unsupported {
            return Ok(odd);
        }
    }
    Ok(direct)
}

/// Re-checks certificate documents: witnesses are re-verified against a
/// freshly built algebra, witness-free documents are re-decided and
/// compared. Returns the report payload and exit code 0 (pass) or the
/// failure is reported as exit 5.
fn run_verify(text: &str) -> Result<(String, i32), CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("invalid JSON: {}", e)))?;
    let docs: Vec<CertificateDocument> = if value.is_array() {
        serde_json::from_value(value)
            .map_err(|e| CliError::new(EXIT_PARSE, format!("invalid certificate: {}", e)))?
    } else {
        vec![serde_json::from_value(value)
            .map_err(|e| CliError::new(EXIT_PARSE, format!("invalid certificate: {}", e)))?]
    };
    let mut reports = Vec::with_capacity(docs.len());
    for doc in &docs {
        reports.push(verify_one(doc)?);
    }
    let payload = serde_json::json!({
        "schema": SCHEMA_VERSION,
        "tool": TOOL_VERSION,
        "command": "verify",
        "pass": true,
        "checked": reports,
    });
    let payload = serde_json::to_string_pretty(&payload)
        .map_err(|e| CliError::new(EXIT_VALIDATION, e.to_string()))?;
    Ok((payload, EXIT_OK))
}

fn verify_one(doc: &CertificateDocument) -> Result<String, CliError> {
    if doc.schema != SCHEMA_VERSION {
        return Err(CliError::new(
            EXIT_PARSE,
            format!("unsupported schema version {:?}", doc.schema),
        ));
    }
    let a = doc.input.build().map_err(lib_err)?;
    let fail = |msg: String| CliError::new(EXIT_VERIFY, msg);

    if let Some(w) = &doc.witness {
        let map = w
            .to_map(&a)
            .map_err(|e| fail(format!("witness does not parse: {}", e)))?;
        if map.semilinear && !matches!(a.field, FieldDescriptor::QuadraticRational(_)) {
            return Err(fail(
                "semilinear witness over a field with no conjugation".into(),
            ));
        }
        check_witness(&a, &map, &doc.command).map_err(|msg| fail(msg))?;
        Ok(format!(
            "{}: witness re-verified on all {} basis pairs",
            doc.command,
            a.dim * a.dim
        ))
    } else {
        let fresh = run_one(&doc.command, &doc.input)?;
        if fresh.verdict != doc.verdict {
            return Err(fail(format!(
                "{}: verdict mismatch: document says {:?}, recomputation says {:?}",
                doc.command, doc.verdict, fresh.verdict
            )));
        }
        if fresh.reason_tag != doc.reason_tag {
            return Err(fail(format!(
                "{}: reason mismatch: document says {:?}, recomputation says {:?}",
                doc.command, doc.reason_tag, fresh.reason_tag
            )));
        }
        if fresh.classification != doc.classification {
            return Err(fail(format!(
                "{}: classification mismatch with recomputation",
                doc.command
            )));
        }
        Ok(format!(
            "{}: no witness; verdict and reason re-derived and matched",
            doc.command
        ))
    }
}

/// The axiom suite a witness must satisfy for each emitting command.
fn check_witness(a: &SuperAlgebra, map: &GradedMap, command: &str) -> Result<(), String> {
    let anti = |label: &str| -> Result<(), String> {
        match superantiautomorphism_violation(a, map) {
            Ok(None) => Ok(()),
            Ok(Some((i, j))) => Err(format!(
                "{}: product reversal fails at basis pair ({}, {})",
                label, i, j
            )),
            Err(e) => Err(format!("{}: witness is not a graded bijection: {}", label, e)),
        }
    };
    match command {
        "first-kind" | "clifford" => {
            if map.semilinear {
                return Err("first-kind witness must be linear".into());
            }
            anti("superantiautomorphism")?;
            let sq = map.square().map_err(|e| e.to_string())?;
            if !sq.is_identity() {
                return Err("witness squared is not the identity".into());
            }
            Ok(())
        }
        "second-kind" => {
            if !map.semilinear {
                return Err("second-kind witness must be semilinear".into());
            }
            anti("superantiautomorphism")?;
            let sq = map.square().map_err(|e| e.to_string())?;
            if !sq.is_identity() {
                return Err("witness squared is not the identity".into());
            }
            Ok(())
        }
        "graded-albert" => {
            anti("superantiautomorphism")?;
            let sq = map.square().map_err(|e| e.to_string())?;
            let nu = grading_automorphism(a);
            if sq.matrix != nu.matrix || sq.semilinear {
                return Err("witness squared is not the grading automorphism".into());
            }
            Ok(())
        }
        other => {
            if is_superantiautomorphism(a, map).map_err(|e| e.to_string())? {
                Ok(())
            } else {
                Err(format!(
                    "{}: witness is not a superantiautomorphism",
                    other
                ))
            }
        }
    }
}
