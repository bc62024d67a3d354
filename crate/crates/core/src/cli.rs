//! Command-line front end.
//!
//! Every verb produces a JSON object whose `input` field is itself a valid
//! batch record, so re-running an emitted `input` reproduces the output.

use std::io::Read;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::arith::{legendre_symbol, DEFAULT_TERNARY_BOUND};
use crate::cubic::{build_theta_certificate, check_triple, symbol_from_certificate, DEFAULT_ALPHA_BOUND};
use crate::eisenstein::{cubic_character, normalize_prime, EisInt, EisPrime, PrimeInput};
use crate::error::Error;
use crate::magnus::{expand, fox_coefficient, magnus_coefficient, GroupWord, MagnusError};
use crate::milnor::{milnor_invariant, tuple_symbol, LinkPresentation};
use crate::redei::{construct_alpha, redei_admissible, redei_symbol_from_certificate, RedeiError};
use crate::symbol::SymbolValue;

/// Environment variable overriding the default search bound of `redei`
/// and `cubic-symbol`.
pub const BOUND_ENV: &str = "MS_DEFAULT_BOUND";

/// Default truncation degree of Magnus expansions.
pub const DEFAULT_MAGNUS_DEGREE: usize = 6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mpres", version, about = "Multiple power residue symbols and Milnor invariants")]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Legendre symbol (a/p).
    Legendre {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_int)]
        a: BigInt,
        #[arg(long, value_parser = parse_int)]
        p: BigInt,
    },
    /// Quadratic triple symbol of three primes = 1 mod 4.
    Redei(TripleArgs),
    /// Triple cubic residue symbol over Q(w).
    CubicSymbol(TripleArgs),
    /// Normalized generator of a prime of Z[w].
    Normalize {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Cubic residue character of an Eisenstein integer at a prime.
    Character {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Magnus coefficient, or the truncated expansion when no index is given.
    Magnus(MagnusArgs),
    /// Milnor invariant of a link-type presentation.
    Milnor(MilnorArgs),
    /// Recompute the reference values and report each one.
    VerifyPaper,
    /// Evaluate JSON-lines command records.
    Batch {
        /// Input file, or `-` for standard input.
        #[arg(long)]
        input: String,
    },
}

#[derive(Args, Debug)]
struct TripleArgs {
    #[arg(long, allow_hyphen_values = true)]
    p1: String,
    #[arg(long, allow_hyphen_values = true)]
    p2: String,
    #[arg(long, allow_hyphen_values = true)]
    p3: String,
    #[arg(long)]
    bound: Option<u64>,
    /// Include the certificate in the output.
    #[arg(long)]
    emit_certificate: bool,
}

#[derive(Args, Debug)]
struct MagnusArgs {
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    /// Multi-index such as `1,2` or `12`.
    #[arg(long)]
    index: Option<String>,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    n_gens: Option<usize>,
    /// Truncation degree for the full expansion.
    #[arg(long)]
    degree: Option<usize>,
    /// Evaluate through iterated Fox derivatives.
    #[arg(long)]
    fox: bool,
}

#[derive(Args, Debug)]
struct MilnorArgs {
    /// Presentation JSON, inline or as a file path.
    #[arg(long)]
    presentation: String,
    #[arg(long)]
    index: String,
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A failure inside a verb.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

macro_rules! impl_from_failure {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Domain(e.into())
            }
        }
    )*};
}
impl_from_failure!(
    crate::arith::ArithError,
    crate::eisenstein::EisError,
    MagnusError,
    crate::milnor::MilnorError,
    RedeiError,
    crate::cubic::CubicError
);

impl Failure {
    fn to_json(&self) -> Value {
        match self {
            Failure::Domain(e) => json!({"error": {"kind": e.kind(), "message": e.to_string()}}),
            Failure::Usage(msg) => json!({"error": {"kind": "Usage", "message": msg}}),
        }
    }

    fn code(&self) -> i32 {
        match self {
            Failure::Domain(_) => EXIT_DOMAIN,
            Failure::Usage(_) => EXIT_USAGE,
        }
    }
}

/// Result of a verb: the JSON object and its plain-text rendering.
struct Report {
    json: Value,
    text: String,
    code: i32,
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    BigInt::from_str(s.trim()).map_err(|e| format!("invalid integer {s:?}: {e}"))
}

fn parse_prime_input(s: &str) -> Result<PrimeInput, Failure> {
    PrimeInput::from_str(s).map_err(Failure::from)
}

fn default_bound(fallback: u64) -> Result<u64, Failure> {
    match std::env::var(BOUND_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{BOUND_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(fallback),
    }
}

fn parse_index(s: &str) -> Result<Vec<usize>, Failure> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = if s.contains(',') {
        s.split(',').map(str::trim).collect()
    } else {
        s.split_terminator("").skip(1).collect()
    };
    parts
        .iter()
        .map(|p| p.parse::<usize>().map_err(|_| Failure::Usage(format!("invalid multi-index {s:?}"))))
        .collect()
}

fn symbol_json(v: &SymbolValue) -> Value {
    json!({"symbol": v.to_string(), "exponent": v.exponent, "m": v.m})
}

fn with_fields(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn cmd_legendre(a: &BigInt, p: &BigInt) -> Result<Report, Failure> {
    let s = legendre_symbol(a, p)?;
    Ok(Report {
        json: json!({"input": {"cmd": "legendre", "a": a.to_string(), "p": p.to_string()}, "symbol": s}),
        text: s.to_string(),
        code: EXIT_OK,
    })
}

fn cmd_redei(args: &TripleArgs) -> Result<Report, Failure> {
    let bound = match args.bound {
        Some(b) => b,
        None => default_bound(DEFAULT_TERNARY_BOUND)?,
    };
    let ps = [&args.p1, &args.p2, &args.p3].map(|s| parse_int(s).map_err(Failure::Usage));
    let [p1, p2, p3] = ps;
    let (p1, p2, p3) = (p1?, p2?, p3?);
    if !redei_admissible(&p1, &p2, &p3)? {
        return Err(RedeiError::NotAdmissible(format!("({p1}, {p2}, {p3})")).into());
    }
    let cert = construct_alpha(&p1, &p2, bound)?;
    let value = redei_symbol_from_certificate(&cert, &p3)?;
    let mut input = json!({"cmd": "redei", "p1": p1.to_string(), "p2": p2.to_string(), "p3": p3.to_string(), "bound": bound});
    let mut out = symbol_json(&value);
    if args.emit_certificate {
        input["emit_certificate"] = json!(true);
        out["certificate"] = serde_json::to_value(&cert.sol).expect("serializable");
    }
    out["input"] = input;
    Ok(Report { json: out, text: value.to_string(), code: EXIT_OK })
}

fn cmd_cubic(args: &TripleArgs) -> Result<Report, Failure> {
    let bound = match args.bound {
        Some(b) => b,
        None => default_bound(DEFAULT_ALPHA_BOUND)?,
    };
    let mut primes = Vec::new();
    for s in [&args.p1, &args.p2, &args.p3] {
        primes.push(normalize_prime(&parse_prime_input(s)?)?);
    }
    check_triple(&primes[0], &primes[1], &primes[2])?;
    let cert = build_theta_certificate(&primes[0], &primes[1], bound)?;
    let value = symbol_from_certificate(&cert, &primes[2])?;
    let mut input = json!({"cmd": "cubic-symbol", "p1": args.p1.trim(), "p2": args.p2.trim(), "p3": args.p3.trim(), "bound": bound});
    let mut out = symbol_json(&value);
    out["primes"] = json!(primes.iter().map(|p| p.pi.to_string()).collect::<Vec<_>>());
    if args.emit_certificate {
        input["emit_certificate"] = json!(true);
        out["certificate"] = serde_json::to_value(&cert).expect("serializable");
    }
    out["input"] = input;
    Ok(Report { json: out, text: value.to_string(), code: EXIT_OK })
}

fn prime_json(p: &EisPrime) -> Value {
    json!({
        "pi": p.pi.to_string(),
        "norm": p.q.to_string(),
        "p": p.p.to_string(),
        "kind": p.kind,
        "nine_admissible": p.nine_admissible,
    })
}

fn cmd_normalize(p: &str) -> Result<Report, Failure> {
    let prime = EisPrime::from_input(&parse_prime_input(p)?)?;
    let out = with_fields(json!({"input": {"cmd": "normalize", "p": p.trim()}}), prime_json(&prime));
    Ok(Report { json: out, text: prime.pi.to_string(), code: EXIT_OK })
}

fn cmd_character(a: &str, p: &str) -> Result<Report, Failure> {
    let u = EisInt::from_str(a)?;
    let prime = EisPrime::from_input(&parse_prime_input(p)?)?;
    let t = cubic_character(&u, &prime)?;
    let value = SymbolValue::new(3, t as i128);
    let mut out = symbol_json(&value);
    out["prime"] = json!(prime.pi.to_string());
    out["input"] = json!({"cmd": "character", "a": a.trim(), "p": p.trim()});
    Ok(Report { json: out, text: value.to_string(), code: EXIT_OK })
}

fn cmd_magnus(args: &MagnusArgs) -> Result<Report, Failure> {
    let word = GroupWord::from_str(&args.word)?;
    let index = args.index.as_deref().map(parse_index).transpose()?;
    let needed = index.iter().flatten().copied().max().unwrap_or(0).max(word.n_gens());
    let n_gens = args.n_gens.unwrap_or(needed);
    let word = word.with_n_gens(n_gens)?;
    let mut input = json!({"cmd": "magnus", "word": word.to_string(), "m": args.m, "n_gens": n_gens});
    match index {
        Some(index) => {
            let c = if args.fox {
                fox_coefficient(&word, &index, args.m)?
            } else {
                magnus_coefficient(&word, &index, args.m)?
            };
            input["index"] = json!(index.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
            if args.fox {
                input["fox"] = json!(true);
            }
            Ok(Report {
                json: json!({"input": input, "index": index, "coefficient": c}),
                text: c.to_string(),
                code: EXIT_OK,
            })
        }
        None => {
            let degree = args.degree.unwrap_or(DEFAULT_MAGNUS_DEGREE);
            let series = expand(&word, args.m, degree)?;
            let terms: Vec<Value> = series.terms().map(|(i, c)| json!({"index": i, "coefficient": c})).collect();
            let text = series
                .terms()
                .map(|(i, c)| format!("({}) {c}", i.iter().map(|k| k.to_string()).collect::<String>()))
                .collect::<Vec<_>>()
                .join("\n");
            input["degree"] = json!(degree);
            Ok(Report { json: json!({"input": input, "terms": terms}), text, code: EXIT_OK })
        }
    }
}

fn read_source(spec: &str) -> Result<String, Failure> {
    if spec.trim_start().starts_with('{') {
        return Ok(spec.to_string());
    }
    std::fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("cannot read {spec}: {e}")))
}

fn cmd_milnor(args: &MilnorArgs) -> Result<Report, Failure> {
    let pres = LinkPresentation::from_json(&read_source(&args.presentation)?)?;
    let index = parse_index(&args.index)?;
    let res = milnor_invariant(&pres, &index)?;
    let tuple = tuple_symbol(&pres, &index).ok();
    let pres_value: Value = serde_json::from_str(&pres.to_json()).expect("presentation JSON");
    let input = json!({
        "cmd": "milnor",
        "presentation": pres_value.to_string(),
        "index": index.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
    });
    let mut out = serde_json::to_value(&res).expect("serializable");
    out["tuple_symbol"] = match &tuple {
        Some(t) => with_fields(symbol_json(&t.symbol), json!({"massey_exponent": t.massey_exponent})),
        None => Value::Null,
    };
    out["input"] = input;
    Ok(Report { json: out, text: format!("{} mod {}", res.reduced, res.delta), code: EXIT_OK })
}

/// Reference values: five cubic triple symbols and two Magnus coefficients.
pub fn reference_checks() -> Vec<(String, String, Result<String, String>)> {
    let mut items = Vec::new();
    for (p3, expected) in [(71, "zeta3^2"), (89, "zeta3"), (107, "zeta3^2"), (179, "zeta3"), (197, "zeta3")] {
        let got = (|| -> Result<String, Error> {
            let pr = |p: i64| normalize_prime(&PrimeInput::Rational(BigInt::from(p)));
            let (a, b, c) = (pr(17)?, pr(53)?, pr(p3)?);
            check_triple(&a, &b, &c)?;
            let cert = build_theta_certificate(&a, &b, DEFAULT_ALPHA_BOUND)?;
            Ok(symbol_from_certificate(&cert, &c)?.to_string())
        })();
        items.push((format!("[(17),(53),({p3})]_3"), expected.to_string(), got.map_err(|e| e.to_string())));
    }
    for (w, expected) in [("[x1,x2]", "1"), ("[x2,x1]", "2")] {
        let got = GroupWord::from_str(w)
            .and_then(|word| magnus_coefficient(&word, &[1, 2], 3))
            .map(|c| c.to_string())
            .map_err(|e| e.to_string());
        items.push((format!("mu_3((12); {w})"), expected.to_string(), got));
    }
    items
}

fn cmd_verify() -> Report {
    let items = reference_checks();
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let mut passed = 0;
    for (name, expected, got) in &items {
        let ok = got.as_ref().is_ok_and(|g| g == expected);
        passed += ok as usize;
        let shown = match got {
            Ok(g) => g.clone(),
            Err(e) => format!("error: {e}"),
        };
        lines.push(format!("{} {name} = {shown} (expected {expected})", if ok { "PASS" } else { "FAIL" }));
        rows.push(json!({"name": name, "expected": expected, "got": shown, "pass": ok}));
    }
    let code = if passed == items.len() { EXIT_OK } else { EXIT_DOMAIN };
    lines.push(format!("{passed}/{} passed", items.len()));
    Report {
        json: json!({"input": {"cmd": "verify-paper"}, "items": rows, "passed": passed, "total": items.len()}),
        text: lines.join("\n"),
        code,
    }
}

/// Converts a batch record into command-line arguments.
fn record_to_argv(record: &Map<String, Value>) -> Result<Vec<String>, Failure> {
    let cmd = record
        .get("cmd")
        .and_then(Value::as_str)
        .ok_or_else(|| Failure::Usage("record lacks a string \"cmd\"".into()))?;
    if cmd == "batch" {
        return Err(Failure::Usage("batch records cannot nest".into()));
    }
    let mut argv = vec!["mpres".to_string(), cmd.to_string()];
    for (key, value) in record {
        if key == "cmd" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => argv.extend([flag, s.clone()]),
            Value::Number(n) => argv.extend([flag, n.to_string()]),
            Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                argv.extend([flag, parts.join(",")]);
            }
            Value::Object(_) => argv.extend([flag, value.to_string()]),
        }
    }
    Ok(argv)
}

fn run_record(line: &str) -> (Value, bool) {
    let record: Map<String, Value> = match serde_json::from_str(line) {
        Ok(r) => r,
        Err(e) => return (Failure::Usage(format!("malformed record: {e}")).to_json(), false),
    };
    let argv = match record_to_argv(&record) {
        Ok(a) => a,
        Err(f) => return (f.to_json(), false),
    };
    match Cli::try_parse_from(&argv) {
        Ok(cli) => match dispatch(&cli.command) {
            Ok(report) => (report.json, report.code == EXIT_OK),
            Err(f) => (f.to_json(), false),
        },
        Err(e) => (Failure::Usage(e.to_string().trim().to_string()).to_json(), false),
    }
}

/// Evaluates JSON-lines records concurrently; output order follows input.
/// Blank lines are skipped.
pub fn batch(text: &str) -> (Vec<Value>, bool) {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let results: Vec<(Value, bool)> = lines.par_iter().map(|l| run_record(l)).collect();
    let ok = results.iter().all(|(_, ok)| *ok);
    (results.into_iter().map(|(v, _)| v).collect(), ok)
}

fn cmd_batch(input: &str) -> Result<Report, Failure> {
    let mut text = String::new();
    if input == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(input).map_err(|e| Failure::Usage(format!("cannot read {input}: {e}")))?;
    }
    let (values, ok) = batch(&text);
    let body: String = values.iter().map(|v| format!("{v}\n")).collect();
    Ok(Report { json: Value::Null, text: body, code: if ok { EXIT_OK } else { EXIT_DOMAIN } })
}

fn dispatch(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Legendre { a, p } => cmd_legendre(a, p),
        Command::Redei(args) => cmd_redei(args),
        Command::CubicSymbol(args) => cmd_cubic(args),
        Command::Normalize { p } => cmd_normalize(p),
        Command::Character { a, p } => cmd_character(a, p),
        Command::Magnus(args) => cmd_magnus(args),
        Command::Milnor(args) => cmd_milnor(args),
        Command::VerifyPaper => Ok(cmd_verify()),
        Command::Batch { input } => cmd_batch(input),
    }
}

/// Runs the command line `argv` (program name first) without touching the
/// process streams.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let is_batch = matches!(cli.command, Command::Batch { .. });
    match dispatch(&cli.command) {
        Ok(report) if is_batch => Outcome { code: report.code, stdout: report.text, stderr: String::new() },
        Ok(report) => {
            let stdout = if cli.json { format!("{}\n", report.json) } else { format!("{}\n", report.text) };
            Outcome { code: report.code, stdout, stderr: String::new() }
        }
        Err(f) => {
            let stderr = match &f {
                Failure::Domain(e) => format!("error: {e}\n"),
                Failure::Usage(msg) => format!("error: {msg}\n"),
            };
            if cli.json {
                Outcome { code: f.code(), stdout: format!("{}\n", f.to_json()), stderr }
            } else {
                Outcome { code: f.code(), stdout: String::new(), stderr }
            }
        }
    }
}
