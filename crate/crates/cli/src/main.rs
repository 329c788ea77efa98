//! `btj`: command-line front end for btj-core.

mod input;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use btj_core::bttree::{displacement, fixed_ends, hyperbolic_axis, Vertex};
use btj_core::convergence::{
    common_end_tail, power_convergence_probe, run_examples, tail_classification, trace_tail,
    CheckStatus, MatrixSequence,
};
use btj_core::jorgensen::{
    elementary_evidence, jorgensen_test, nonelementary_certificate, sharp_test, EqualityCheck,
    NonElementary, Verdict,
};
use btj_core::localfield::FieldDesc;
use btj_core::sl2core::{classify, finite_order_traces, ElementKind, FiniteOrder, Mat2};

use input::{InputFile, UsageError};

#[derive(Parser, Debug)]
#[command(
    name = "btj",
    version,
    about = "SL2 over local fields acting on Bruhat-Tits trees"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// `padic:<p>` or `laurent:<p>`.
    #[arg(long, global = true, default_value = "padic:5")]
    field: String,
    /// Relative precision in digits (at least 8).
    #[arg(long, global = true, env = "BTJ_PRECISION", default_value_t = 64)]
    precision: u32,
    /// Search radius in the tree (at least 2).
    #[arg(long, global = true, default_value_t = 8)]
    radius: u32,
    /// Emit a single JSON object.
    #[arg(long, global = true)]
    json: bool,
    /// JSON file with `matrices`, `sequences`, `vertex` or `exponents`.
    #[arg(long, global = true)]
    input: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Elliptic/hyperbolic type and translation length.
    Classify { matrix: Option<String> },
    /// Evaluate the inequality for a pair.
    Jorgensen {
        a: Option<String>,
        b: Option<String>,
    },
    /// The sharp form, with the equality-case geometry.
    Sharp {
        a: Option<String>,
        b: Option<String>,
    },
    /// Search for a non-elementarity certificate among short words.
    Certify {
        generators: Vec<String>,
        #[arg(long, default_value_t = 4)]
        word_length: usize,
    },
    /// Action on the tree: displacement, fixed ends, axis.
    Tree {
        matrix: Option<String>,
        /// Vertex as `{"level": m, "offset": "literal"}`; defaults to the base vertex.
        #[arg(long)]
        vertex: Option<String>,
    },
    /// The constant M_K and the finite-order traces realising it.
    Mk,
    /// Finite order of an element.
    Order { matrix: Option<String> },
    /// Recompute the worked examples.
    Examples,
    /// Tail behaviour of a sequence, optionally against a second one.
    Converge {
        sequence: Option<String>,
        #[arg(long)]
        with: Option<String>,
        #[arg(long, default_value_t = 1)]
        from: i64,
        #[arg(long, default_value_t = 12)]
        to: i64,
    },
    /// Valuations of g^k - I.
    Probe {
        matrix: Option<String>,
        #[arg(long, value_delimiter = ',')]
        exponents: Vec<i64>,
    },
}

/// A finished command: the JSON report, a one-line headline and whether it is definite.
struct Outcome {
    headline: String,
    report: Value,
    definite: bool,
}

fn outcome(verdict: &str, headline: String, mut report: Value, definite: bool) -> Outcome {
    if let Value::Object(map) = &mut report {
        map.insert("verdict".into(), Value::String(verdict.into()));
    }
    Outcome {
        headline,
        report,
        definite,
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

fn run(cli: Cli) -> Result<Outcome, UsageError> {
    let g = &cli.global;
    if g.precision < 8 {
        return Err(UsageError::new(format!(
            "--precision must be at least 8 (got {})",
            g.precision
        )));
    }
    if g.radius < 2 {
        return Err(UsageError::new(format!(
            "--radius must be at least 2 (got {})",
            g.radius
        )));
    }
    let field = FieldDesc::parse(&g.field, g.precision)?;
    let file = match &g.input {
        Some(path) => InputFile::load(path)?,
        None => InputFile::default(),
    };
    let matrices = |given: Vec<&Option<String>>, want: usize| -> Result<Vec<Mat2>, UsageError> {
        let lits: Vec<String> = given.into_iter().flatten().cloned().collect();
        file.matrices(field, &lits, want)
    };
    Ok(match cli.command {
        Command::Classify { matrix } => {
            let m = matrices(vec![&matrix], 1)?.remove(0);
            let class = classify(&m);
            let (verdict, definite) = match class.kind {
                ElementKind::Hyperbolic { .. } => ("hyperbolic", true),
                ElementKind::Elliptic => ("elliptic", true),
                ElementKind::Undetermined => ("indeterminate", false),
            };
            let length = class
                .translation_length()
                .map_or("undetermined".to_string(), |l| l.to_string());
            outcome(
                verdict,
                format!("{verdict}, translation length {length}"),
                json!({"field": field, "matrix": m, "class": class, "trace": m.trace()}),
                definite,
            )
        }
        Command::Jorgensen { a, b } => {
            let ms = matrices(vec![&a, &b], 2)?;
            let r = jorgensen_test(&ms[0], &ms[1]);
            let v = to_json(&r.verdict);
            let name = v.as_str().unwrap_or_default().to_string();
            outcome(
                &name,
                format!("{name} (min = {}, M_K = {})", r.lhs.min, r.m_k),
                json!({"field": field, "a": ms[0], "b": ms[1], "report": r}),
                r.verdict != Verdict::Indeterminate,
            )
        }
        Command::Sharp { a, b } => {
            let ms = matrices(vec![&a, &b], 2)?;
            let r = sharp_test(&ms[0], &ms[1], g.radius);
            let sharp = r.sharp.clone().expect("sharp report");
            let regime = to_json(&sharp.regime)
                .as_str()
                .unwrap_or_default()
                .to_string();
            let definite = !matches!(
                sharp.equality_check,
                Some(EqualityCheck::Indeterminate { .. })
            );
            outcome(
                &regime,
                format!("{regime} (min = {})", r.lhs.min),
                json!({"field": field, "a": ms[0], "b": ms[1], "report": r}),
                definite,
            )
        }
        Command::Certify {
            generators,
            word_length,
        } => {
            let gens = file.matrices(field, &generators, 1)?;
            let cert = nonelementary_certificate(&gens, word_length);
            let evidence =
                (gens.len() == 2).then(|| elementary_evidence(&gens[0], &gens[1], g.radius));
            let verdict = match cert {
                NonElementary::Certified { .. } => "certified",
                NonElementary::Inconclusive => "inconclusive",
            };
            outcome(
                verdict,
                format!("non-elementary: {verdict}"),
                json!({"field": field, "generators": gens, "word_length": word_length,
                       "certificate": cert, "elementary_evidence": evidence}),
                true,
            )
        }
        Command::Tree { matrix, vertex } => {
            let m = matrices(vec![&matrix], 1)?.remove(0);
            let v = match vertex.or(file.vertex.clone().map(|v| v.to_string())) {
                Some(lit) => input::parse_vertex(&lit, field)?,
                None => Vertex::base(field),
            };
            let class = classify(&m);
            let mut definite = true;
            let disp = match displacement(&m, &v) {
                Ok(d) => json!(d),
                Err(e) => {
                    definite = false;
                    json!({"indeterminate": e.to_string()})
                }
            };
            let ends = match fixed_ends(&m) {
                Ok(e) => to_json(&e),
                Err(e) => {
                    definite = false;
                    json!({"indeterminate": e.to_string()})
                }
            };
            let axis = if class.is_hyperbolic() {
                match hyperbolic_axis(&m) {
                    Ok(a) => to_json(&a),
                    Err(e) => {
                        definite = false;
                        json!({"indeterminate": e.to_string()})
                    }
                }
            } else {
                Value::Null
            };
            let verdict = if definite {
                "computed"
            } else {
                "indeterminate"
            };
            outcome(
                verdict,
                format!("displacement at {v}: {disp}"),
                json!({"field": field, "matrix": m, "vertex": v, "class": class,
                       "displacement": disp, "fixed_ends": ends, "axis": axis}),
                definite,
            )
        }
        Command::Mk => {
            let cat = finite_order_traces(field);
            let mk = cat.m_k();
            let maximizers: Vec<_> = cat.maximizers().cloned().collect();
            outcome(
                "computed",
                format!("M_K = {mk}"),
                json!({"field": field, "m_k": mk, "maximizers": maximizers, "catalog": cat.entries}),
                true,
            )
        }
        Command::Order { matrix } => {
            let m = matrices(vec![&matrix], 1)?.remove(0);
            let fo = finite_order_traces(field).finite_order(&m);
            let (verdict, headline, definite) = match &fo {
                FiniteOrder::Order { n, .. } => ("finite", format!("order {n}"), true),
                FiniteOrder::Infinite => ("infinite", "infinite order".into(), true),
                FiniteOrder::Indeterminate(r) => ("indeterminate", r.clone(), false),
            };
            outcome(
                verdict,
                headline,
                json!({"field": field, "matrix": m, "order": fo}),
                definite,
            )
        }
        Command::Examples => {
            let r = run_examples(field)?;
            let statuses: Vec<CheckStatus> = r
                .examples
                .iter()
                .flat_map(|e| &e.checks)
                .map(|c| c.status)
                .collect();
            let verdict = if statuses.contains(&CheckStatus::Indeterminate) {
                "indeterminate"
            } else if statuses.contains(&CheckStatus::Fail) {
                "fail"
            } else {
                "pass"
            };
            let passed = statuses.iter().filter(|s| **s == CheckStatus::Pass).count();
            outcome(
                verdict,
                format!("{passed}/{} checks pass", statuses.len()),
                json!({"field": field, "report": r}),
                verdict != "indeterminate",
            )
        }
        Command::Converge {
            sequence,
            with,
            from,
            to,
        } => {
            if from > to {
                return Err(UsageError::new(format!("empty range {from}..{to}")));
            }
            let lits: Vec<String> = [sequence, with].into_iter().flatten().collect();
            let seqs: Vec<MatrixSequence> = file.sequences(field, &lits)?;
            let range = (from, to);
            let tails = tail_classification(&seqs[0], range)?;
            let traces = trace_tail(&seqs[0], range)?;
            let ends = match seqs.get(1) {
                Some(b) => Some(common_end_tail(&seqs[0], b, range)?),
                None => None,
            };
            let headline = format!(
                "limit {}, tail matches limit: {}, traces eventually constant: {}",
                to_json(&tails.limit.kind)["type"]
                    .as_str()
                    .unwrap_or_default(),
                tails.tail_matches_limit,
                traces.eventually_constant
            );
            outcome(
                "computed",
                headline,
                json!({"field": field, "sequences": seqs, "range": [from, to],
                       "tail_classification": tails, "trace_tail": traces, "common_end_tail": ends}),
                true,
            )
        }
        Command::Probe { matrix, exponents } => {
            let m = matrices(vec![&matrix], 1)?.remove(0);
            let exps = if exponents.is_empty() {
                file.exponents.clone().unwrap_or_default()
            } else {
                exponents
            };
            if exps.is_empty() {
                return Err(UsageError::new(
                    "no exponents given (use --exponents 5,25,125)",
                ));
            }
            let r = power_convergence_probe(&m, &exps)?;
            let verdict = if r.increasing {
                "approaches_identity"
            } else {
                "no_convergence_evidence"
            };
            outcome(
                verdict,
                verdict.replace('_', " "),
                json!({"field": field, "matrix": m, "probe": r}),
                true,
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json_mode = cli.global.json;
    match run(cli) {
        Ok(out) => {
            let body = if json_mode {
                serde_json::to_string_pretty(&out.report).expect("json") + "\n"
            } else {
                render::text(&out.headline, &out.report)
            };
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(if out.definite { 0 } else { 2 })
        }
        Err(e) => {
            if json_mode {
                println!(
                    "{}",
                    json!({"verdict": "input_error", "error": e.to_string()})
                );
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
