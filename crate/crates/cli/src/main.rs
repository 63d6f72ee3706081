//! `minimal7`: classify, compare and enumerate 7-dimensional minimal algebras
//! of length two.
//!
//! Generator indices are 1-based in every input and output (`x1 .. x7`).
//!
//! Exit status: 0 on success, 1 on invalid input or flags, 2 when the input
//! is outside the classified family (wrong dimension, length, not flat, ...),
//! 3 on an internal failure, including a failed self-test.

mod io;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minimal7::checks::{run_all, CheckConfig};
use minimal7::classify::{classify_with, enumerate_classes, ClassifyError, ClassifyOptions};
use minimal7::cohomology::{betti, CohomologyError};
use minimal7::field::{Field, FieldDescriptor, PrimeField, RationalField};
use minimal7::liealg::MinimalAlgebra;
use serde_json::{json, Value};

use io::{parse_input, InputError, RawInput};

#[derive(Parser)]
#[command(name = "minimal7", version, about = "Minimal algebras of dimension 7 and length 2 (generators are 1-based: x1..x7)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Classify one presentation and print its normal form and certificate.
    Classify,
    /// Betti numbers of one presentation, compared with the reference row.
    Betti,
    /// Decide whether two presentations are isomorphic.
    Iso,
    /// Enumerate the isomorphism classes over a field.
    Enumerate,
    /// Print the classification table and the reference Betti numbers.
    Table,
    /// Run the acceptance checks.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    #[value(name = "Q")]
    Q,
    #[value(name = "Fp")]
    Fp,
    #[value(name = "R")]
    R,
    #[value(name = "Qbar")]
    Qbar,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Opts {
    /// Ground field; overrides the "field" entry of the input.
    #[arg(long, global = true, value_enum)]
    field: Option<FieldArg>,
    /// The prime for `--field Fp`.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Input file in the JSON schema; may be repeated.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Inline JSON input; may be repeated.
    #[arg(long, global = true)]
    json: Vec<String>,
    /// Random samples for `enumerate` and `selftest`.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// RNG seed for `enumerate` (default 0) and `selftest` (default 2024)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Height bound for rational points on conics.
    #[arg(long, global = true, default_value_t = 10_000)]
    height_bound: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
    trace: Option<Value>,
}

impl Failure {
    fn validation(m: impl Into<String>) -> Self {
        Self { code: 1, message: m.into(), trace: None }
    }

    fn internal(m: impl Into<String>) -> Self {
        Self { code: 3, message: m.into(), trace: None }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::validation(e.to_string())
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        let code = if e.is_classification_state() { 2 } else { 3 };
        Self { code, message: e.to_string(), trace: None }
    }
}

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        let code = match e {
            CohomologyError::NotFlat => 2,
            CohomologyError::TooLarge(_) => 1,
        };
        Self { code, message: e.to_string(), trace: None }
    }
}

#[derive(Clone)]
enum AnyField {
    Rational(RationalField),
    Prime(PrimeField),
}

macro_rules! with_field {
    ($field:expr, $f:ident => $body:expr) => {
        match $field {
            AnyField::Rational($f) => $body,
            AnyField::Prime($f) => $body,
        }
    };
}

fn field_from_descriptor(d: &FieldDescriptor) -> Result<AnyField, Failure> {
    match d {
        FieldDescriptor::Rationals => Ok(AnyField::Rational(RationalField::Q)),
        FieldDescriptor::RealsModel => Ok(AnyField::Rational(RationalField::R)),
        FieldDescriptor::AlgClosedModel => Ok(AnyField::Rational(RationalField::QBAR)),
        FieldDescriptor::PrimeField { p } => {
            PrimeField::new(*p).map(AnyField::Prime).map_err(|e| Failure::validation(e.to_string()))
        }
        other => Err(Failure::validation(format!("unsupported input field {other}"))),
    }
}

fn flag_descriptor(opts: &Opts) -> Result<Option<FieldDescriptor>, Failure> {
    let d = match opts.field {
        None => {
            if opts.p.is_some() {
                return Err(Failure::validation("--p needs --field Fp"));
            }
            return Ok(None);
        }
        Some(FieldArg::Q) => FieldDescriptor::Rationals,
        Some(FieldArg::R) => FieldDescriptor::RealsModel,
        Some(FieldArg::Qbar) => FieldDescriptor::AlgClosedModel,
        Some(FieldArg::Fp) => {
            let p = opts.p.ok_or_else(|| Failure::validation("--field Fp needs --p"))?;
            FieldDescriptor::PrimeField { p }
        }
    };
    if opts.p.is_some() && !matches!(d, FieldDescriptor::PrimeField { .. }) {
        return Err(Failure::validation("--p is only meaningful with --field Fp"));
    }
    Ok(Some(d))
}

/// The flag wins; otherwise all inputs that name a field must agree.
fn resolve_field(opts: &Opts, inputs: &[RawInput], default_q: bool) -> Result<AnyField, Failure> {
    if let Some(d) = flag_descriptor(opts)? {
        return field_from_descriptor(&d);
    }
    let mut named = inputs.iter().filter_map(|i| i.field.as_ref());
    match named.next() {
        Some(first) => {
            if named.any(|d| d != first) {
                return Err(Failure::validation("inputs name different fields; pass --field"));
            }
            field_from_descriptor(first)
        }
        None if default_q => Ok(AnyField::Rational(RationalField::Q)),
        None => Err(Failure::validation("no field given: pass --field or a \"field\" entry")),
    }
}

fn read_inputs(opts: &Opts) -> Result<Vec<RawInput>, Failure> {
    let mut out = Vec::new();
    for path in &opts.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?;
        out.push(parse_input(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?);
    }
    for text in &opts.json {
        out.push(parse_input(text)?);
    }
    Ok(out)
}

fn exactly(inputs: &[RawInput], n: usize, command: &str) -> Result<(), Failure> {
    if inputs.len() != n {
        return Err(Failure::validation(format!("{command} takes {n} input(s), got {}", inputs.len())));
    }
    Ok(())
}

fn build<F: Field>(f: &F, input: &RawInput) -> Result<MinimalAlgebra<F>, Failure> {
    Ok(input.build(f)?)
}

struct Output {
    json: Value,
    text: String,
    ok: bool,
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let opts = &cli.opts;
    let inputs = read_inputs(opts)?;
    let class_opts = ClassifyOptions { certificates: true, height_bound: opts.height_bound };
    match cli.command {
        Command::Classify => {
            exactly(&inputs, 1, "classify")?;
            let field = resolve_field(opts, &inputs, false)?;
            with_field!(&field, f => {
                let alg = build(f, &inputs[0])?;
                let report = classify_with(&alg, &class_opts).map_err(|e| {
                    let mut fail = Failure::from(e);
                    fail.trace = Some(json!({ "input": io::presentation_json(&alg) }));
                    fail
                })?;
                let verified = report.verify()?;
                if !verified {
                    return Err(Failure::internal("certificate does not reproduce the normal form"));
                }
                Ok(Output { json: render::report_json(&report, verified), text: render::report_text(&report, verified), ok: true })
            })
        }
        Command::Betti => {
            exactly(&inputs, 1, "betti")?;
            let field = resolve_field(opts, &inputs, false)?;
            with_field!(&field, f => {
                let alg = build(f, &inputs[0])?;
                let b = betti(&alg)?;
                let quiet = ClassifyOptions { certificates: false, height_bound: opts.height_bound };
                let class = classify_with(&alg, &quiet);
                Ok(Output { json: render::betti_json(&b, &class), text: render::betti_text(&b, &class), ok: true })
            })
        }
        Command::Iso => {
            exactly(&inputs, 2, "iso")?;
            let field = resolve_field(opts, &inputs, false)?;
            with_field!(&field, f => {
                let quiet = ClassifyOptions { certificates: false, height_bound: opts.height_bound };
                let left = classify_with(&build(f, &inputs[0])?, &quiet)?.canonical;
                let right = classify_with(&build(f, &inputs[1])?, &quiet)?.canonical;
                let iso = left == right;
                let json = json!({ "isomorphic": iso, "left": left, "right": right });
                let text = format!("isomorphic: {iso}\nleft:  {left}\nright: {right}\n");
                Ok(Output { json, text, ok: true })
            })
        }
        Command::Enumerate => {
            exactly(&inputs, 0, "enumerate")?;
            let field = resolve_field(opts, &inputs, false)?;
            let samples = opts.samples.unwrap_or(10_000);
            let seed = opts.seed.unwrap_or(0);
            with_field!(&field, f => {
                let classes = enumerate_classes(f, samples, seed)?;
                Ok(render::enumeration(&f.descriptor(), samples, seed, &classes))
            })
        }
        Command::Table => {
            exactly(&inputs, 0, "table")?;
            let field = resolve_field(opts, &inputs, true)?;
            with_field!(&field, f => Ok(render::tables(f)))
        }
        Command::Selftest => {
            exactly(&inputs, 0, "selftest")?;
            let mut cfg = CheckConfig::default();
            if let Some(s) = opts.samples {
                cfg.enumeration_samples = s;
            }
            if let Some(s) = opts.seed {
                cfg.seed = s;
            }
            let reports = run_all(&cfg);
            let ok = reports.iter().all(|r| r.pass);
            let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
            Ok(Output { json: json!({ "pass": ok, "criteria": reports }), text, ok })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.opts.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Text => print!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(fail) => {
            match cli.opts.format {
                Format::Json => {
                    let v = json!({ "error": fail.message, "exit": fail.code, "context": fail.trace });
                    eprintln!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                }
                Format::Text => eprintln!("error: {}", fail.message),
            }
            ExitCode::from(fail.code)
        }
    }
}
