//! Command-line front end. Every verb reads one parameter array as JSON
//! (except `search`) and writes one JSON document.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::duality::bases::{expected_matrix_of_t, verify_anchor_suite, verify_t_bases_suite};
use crate::duality::{
    build_24_bases, build_t, build_t_self_dual, is_self_dual, matrix_of_t, t_action_on_structures,
    verify_duality_suite, verify_geometry, AnchorVectors, BasisId,
};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::leonard::{certify, d4_apply, reduced_words, verify_system, LeonardSystem, ParameterArray};
use crate::report::VerificationReport;
use crate::search::{search, to_json_lines, SearchConfig};

#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Read the parameter array from FILE instead of stdin
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write to FILE instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the system and run the axiom and identity suite
    Verify,
    /// The eight relatives under the dihedral group, keyed by reduced word
    Relatives,
    /// Build the duality operator and run its identity suites
    Dualize {
        /// Fail unless the array is self-dual
        #[arg(long)]
        require_self_dual: bool,
    },
    /// The 24 bases with the anchor and transition report
    Bases,
    /// Matrix of the duality operator in one of the four antidiagonal bases
    MatrixOfT {
        #[arg(long)]
        basis: String,
    },
    /// Certified parameter arrays as JSON lines
    Search {
        /// `rational` or `prime:P`
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        self_dual: bool,
        #[arg(long, default_value_t = 10)]
        limit: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Parser, Debug)]
#[command(name = "leonard", version, about = "Exact Leonard systems and their self-duality operator")]
struct Invocation {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    io: Io,
}

pub fn parse_field(s: &str) -> std::result::Result<FieldSpec, String> {
    if s == "rational" {
        return Ok(FieldSpec::Rational);
    }
    let p = s
        .strip_prefix("prime:")
        .ok_or_else(|| format!("expected `rational` or `prime:P`, got {s:?}"))?
        .parse::<u64>()
        .map_err(|e| e.to_string())?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

/// Exit status for an error: 2 when the input itself is malformed.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidParameterArray(_)
        | Error::FieldMismatch(_)
        | Error::NotPrime(_)
        | Error::DuplicateEigenvalue(..)
        | Error::UnknownBasis(_)
        | Error::InvalidConfig(_) => 2,
        _ => 1,
    }
}

pub fn error_object(e: &Error) -> Value {
    json!({"error": e.kind(), "message": e.to_string()})
}

/// What a verb produced: the JSON text and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn document<T: Serialize>(value: &T, pass: bool) -> Result<Outcome> {
    let text = serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))? + "\n";
    Ok(Outcome { text, pass })
}

fn report_json(r: &VerificationReport) -> Value {
    json!({"pass": r.all_pass(), "checks": r.checks})
}

pub fn parse_parameter_array(text: &str) -> Result<ParameterArray> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn certified(pa: &ParameterArray) -> Result<LeonardSystem> {
    certify(pa)
}

pub fn verify(pa: &ParameterArray) -> Result<Outcome> {
    let sys = LeonardSystem::build_from_parameter_array(pa)?;
    let report = verify_system(&sys);
    document(&report_json(&report), report.all_pass())
}

pub fn relatives(pa: &ParameterArray) -> Result<Outcome> {
    let mut out = Map::new();
    for w in reduced_words() {
        out.insert(w.label(), serde_json::to_value(d4_apply(pa, &w)).expect("arrays serialize"));
    }
    document(&Value::Object(out), true)
}

pub fn dualize(pa: &ParameterArray, require_self_dual: bool) -> Result<Outcome> {
    let sys = certified(pa)?;
    let self_dual = is_self_dual(pa)?;
    let bundle = if require_self_dual { build_t_self_dual(&sys)? } else { build_t(&sys)? };
    let mut report = verify_duality_suite(&sys, &bundle);
    report.absorb("", verify_geometry(&sys));
    report.absorb("", t_action_on_structures(&sys, &bundle.t));
    let anchors = AnchorVectors::choose(&sys)?;
    report.absorb("", verify_t_bases_suite(&sys, &bundle, &anchors));
    let doc = json!({"self_dual": self_dual, "bundle": bundle, "report": report_json(&report)});
    document(&doc, report.all_pass())
}

pub fn bases(pa: &ParameterArray) -> Result<Outcome> {
    let sys = certified(pa)?;
    let anchors = AnchorVectors::choose(&sys)?;
    let family = build_24_bases(&sys, &anchors)?;
    let report = verify_anchor_suite(&sys, &anchors);
    let doc = json!({"anchors": anchors, "bases": family.bases, "report": report_json(&report)});
    document(&doc, report.all_pass())
}

pub fn matrix_of_t_verb(pa: &ParameterArray, basis: &str) -> Result<Outcome> {
    let id: BasisId = basis.parse()?;
    if !BasisId::antidiagonal_bases().contains(&id) {
        return Err(Error::UnknownBasis(basis.to_string()));
    }
    let sys = certified(pa)?;
    let bundle = build_t(&sys)?;
    let anchors = AnchorVectors::choose(&sys)?;
    let matrix = matrix_of_t(&sys, &bundle.t, &anchors, id)?;
    let expected = expected_matrix_of_t(pa)?;
    let pass = matrix == expected;
    document(&json!({"basis": id, "matrix": matrix, "expected": expected, "pass": pass}), pass)
}

pub fn search_verb(cfg: &SearchConfig) -> Result<Outcome> {
    Ok(Outcome { text: to_json_lines(&search(cfg)?), pass: true })
}

fn read_input(io: &Io, stdin: &mut dyn Read) -> Result<String> {
    match &io.input {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(s)
        }
    }
}

fn execute(inv: &Invocation, stdin: &mut dyn Read) -> Result<Outcome> {
    if let Command::Search { field, d, self_dual, limit, seed } = &inv.command {
        let cfg = SearchConfig { field: *field, d: *d, self_dual_only: *self_dual, limit: *limit, seed: *seed };
        return search_verb(&cfg);
    }
    let pa = parse_parameter_array(&read_input(&inv.io, stdin)?)?;
    match &inv.command {
        Command::Verify => verify(&pa),
        Command::Relatives => relatives(&pa),
        Command::Dualize { require_self_dual } => dualize(&pa, *require_self_dual),
        Command::Bases => bases(&pa),
        Command::MatrixOfT { basis } => matrix_of_t_verb(&pa, basis),
        Command::Search { .. } => unreachable!("handled above"),
    }
}

/// Runs one invocation and returns the exit status: 0 if every check
/// passed, 1 if a check failed, 2 on malformed input.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let inv = match Invocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    let result = execute(&inv, stdin).and_then(|outcome| {
        match &inv.io.output {
            Some(path) => fs::write(path, &outcome.text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
            None => stdout.write_all(outcome.text.as_bytes()).map_err(|e| Error::Parse(e.to_string()))?,
        }
        Ok(outcome.pass)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_object(&e));
            exit_code(&e)
        }
    }
}
