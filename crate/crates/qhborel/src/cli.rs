//! Command-line front end: input parsing and validation, dispatch to the
//! engine, and human tables or machine JSON on standard output.
//!
//! Exit statuses: 0 on success (verdicts are data, not errors), 1 on I/O,
//! schema or argument errors, 2 on validation violations, 3 when the data or
//! the requested multiplicities are not realizable. All error text goes to
//! standard error; reports go to standard output.

use std::ffi::OsString;
use std::fs;
use std::io::Read;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::catalog::{self, CatalogError, FamilySpec};
use crate::engine::{self, BorelVerdict, EngineError};
use crate::exact::IntMat;
use crate::model::{json_int_value, QhData, Violation};
use crate::poset::PosetSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATIONS: i32 = 2;
pub const EXIT_UNREALIZABLE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Parser)]
#[command(
    name = "qhborel",
    version,
    about = "Exact invariants and regular exact Borel subalgebra criteria \
             for quasihereditary algebra class data"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Seed for randomized helpers; echoed in the report for provenance.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a class data file against every consistency rule.
    Validate { file: String },
    /// Compute the invariant matrix V.
    #[command(name = "v-matrix")]
    VMatrix { file: String },
    /// Compute the length sequence l (row sums of V).
    #[command(name = "l-seq")]
    LSeq { file: String },
    /// Decide whether the algebra has a regular exact Borel subalgebra.
    Borel { file: String },
    /// Numerical profile of the Borel subalgebra with simple dimensions k.
    Profile {
        file: String,
        /// Comma-separated positive integers, one per label (default all 1).
        #[arg(long)]
        k: Option<String>,
    },
    /// Multiplicities m = V k of the good representative End(⊕ P_i^{m_i})^op.
    Representative {
        file: String,
        /// Comma-separated positive integers, one per label (default all 1).
        #[arg(long)]
        k: Option<String>,
    },
    /// Class-level flags: all-good, identity matrix, minimality, height.
    Flags { file: String },
    /// Emit a built-in family as a class data document on standard output.
    Catalog {
        /// One of: example_a4, semisimple, erdmann, dual_extension_linear,
        /// ringel_dual_tree.
        family: String,
        /// Size parameter for the sized families.
        #[arg(long)]
        n: Option<usize>,
        /// Poset file ({"labels": [...], "relations": [[a,b], ...]}) for
        /// ringel_dual_tree. Without it, --n plus --seed generate a random
        /// tree.
        #[arg(long)]
        tree: Option<String>,
        /// Twist the generated data so the verdict becomes Good with exactly
        /// these simple dimensions (comma-separated positive integers).
        #[arg(long)]
        twist: Option<String>,
        /// Use a chain instead of an antichain for the semisimple family.
        #[arg(long)]
        chain: bool,
    },
}

/// Parses `args` and runs the selected command, returning the process exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let wants_exit_zero = matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if wants_exit_zero { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match &cli.command {
        Command::Validate { file } => run_validate(&cli, file),
        Command::VMatrix { file } => run_analysis(&cli, file, "v-matrix", |data| {
            let v = engine::compute_v(data)?;
            let labels = data.poset.labels();
            let result = json!({ "labels": labels, "v": matrix_json(&v.mat) });
            let table = format!(
                "V matrix (rows and columns in input label order)\n{}",
                render_matrix(labels, &v.mat)
            );
            Ok((result, table))
        }),
        Command::LSeq { file } => run_analysis(&cli, file, "l-seq", |data| {
            let l = engine::compute_l(data)?;
            let labels = data.poset.labels();
            let result = json!({ "labels": labels, "l": vec_json(&l.l) });
            let table = format!(
                "length sequence\n{}",
                render_vector(labels, "l", &l.l)
            );
            Ok((result, table))
        }),
        Command::Borel { file } => run_analysis(&cli, file, "borel", |data| {
            let verdict = engine::borel_existence(data)?;
            let labels = data.poset.labels();
            Ok(match verdict {
                BorelVerdict::Good { k } => {
                    let result = json!({ "verdict": "good", "k": vec_json(&k) });
                    let table = format!(
                        "verdict: regular exact Borel subalgebra exists\n\
                         simple dimensions of the Borel subalgebra\n{}",
                        render_vector(labels, "k", &k)
                    );
                    (result, table)
                }
                BorelVerdict::NotGood { witness, failing } => {
                    let witness_strings: Vec<String> =
                        witness.iter().map(|r| r.to_string()).collect();
                    let failing_labels: Vec<&str> =
                        failing.iter().map(|&i| data.poset.label(i)).collect();
                    let result = json!({
                        "verdict": "not_good",
                        "witness": witness_strings,
                        "failing_indices": failing,
                        "failing_labels": failing_labels,
                    });
                    let rows: Vec<Vec<String>> = labels
                        .iter()
                        .zip(&witness_strings)
                        .map(|(label, x)| vec![label.clone(), x.clone()])
                        .collect();
                    let table = format!(
                        "verdict: no regular exact Borel subalgebra\n\
                         witness solution of V x = simple_dims\n{}\n\
                         failing labels: {}",
                        render_table(&["label".into(), "x".into()], &rows),
                        failing_labels.join(", ")
                    );
                    (result, table)
                }
            })
        }),
        Command::Profile { file, k } => {
            let k = k.clone();
            run_analysis(&cli, file, "profile", move |data| {
                let k = parse_k_arg(k.as_deref(), data.len())?;
                let p = engine::borel_profile(data, &k)?;
                let labels = data.poset.labels();
                let result = json!({
                    "labels": labels,
                    "k": vec_json(&k),
                    "cartan_bop": matrix_json(&p.cartan_bop),
                    "cartan_b": matrix_json(&p.cartan_b),
                    "len_q": vec_json(&p.len_q),
                    "len_p": vec_json(&p.len_p),
                    "dim_q": vec_json(&p.dim_q),
                    "dim_p": vec_json(&p.dim_p),
                    "dim_b": json_int_value(&p.dim_b),
                    "n_table": matrix_json(&p.n_table),
                    "dim_w": json_int_value(&p.dim_w),
                });
                let per_label = {
                    let headers: Vec<String> = ["label", "k", "len_q", "len_p", "dim_q", "dim_p"]
                        .iter()
                        .map(|s| s.to_string())
                        .collect();
                    let rows: Vec<Vec<String>> = (0..data.len())
                        .map(|i| {
                            vec![
                                labels[i].clone(),
                                k[i].to_string(),
                                p.len_q[i].to_string(),
                                p.len_p[i].to_string(),
                                p.dim_q[i].to_string(),
                                p.dim_p[i].to_string(),
                            ]
                        })
                        .collect();
                    render_table(&headers, &rows)
                };
                let table = format!(
                    "Borel profile for k = ({})\n\
                     Cartan matrix of B^op (nabla · V)\n{}\n\
                     Cartan matrix of B (transpose)\n{}\n\
                     {}\n\
                     dim B = {}\n\
                     coefficient table n[i][j] = hom[j][i] / k[j]\n{}\n\
                     dim W = {}",
                    k.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", "),
                    render_matrix(labels, &p.cartan_bop),
                    render_matrix(labels, &p.cartan_b),
                    per_label,
                    p.dim_b,
                    render_matrix(labels, &p.n_table),
                    p.dim_w
                );
                Ok((result, table))
            })
        }
        Command::Representative { file, k } => {
            let k = k.clone();
            run_analysis(&cli, file, "representative", move |data| {
                let k = parse_k_arg(k.as_deref(), data.len())?;
                let m = engine::representative_multiplicities(data, &k)?;
                let labels = data.poset.labels();
                let result = json!({ "labels": labels, "k": vec_json(&k), "m": vec_json(&m) });
                let summand = labels
                    .iter()
                    .zip(&m)
                    .map(|(label, mult)| format!("P_{label}^{mult}"))
                    .collect::<Vec<_>>()
                    .join(" + ");
                let table = format!(
                    "good representative: opposite endomorphism algebra of {summand}\n{}",
                    render_vector(labels, "m", &m)
                );
                Ok((result, table))
            })
        }
        Command::Flags { file } => run_analysis(&cli, file, "flags", |data| {
            let flags = engine::class_flags(data)?;
            let result = json!({
                "all_good": flags.all_good,
                "v_is_identity": flags.v_is_identity,
                "minimal_good_here": flags.minimal_good_here,
                "height_shortcut": flags.height_shortcut,
            });
            let table = format!(
                "all_good: {}\nv_is_identity: {}\nminimal_good_here: {}\nheight_shortcut: {}",
                flags.all_good, flags.v_is_identity, flags.minimal_good_here, flags.height_shortcut
            );
            Ok((result, table))
        }),
        Command::Catalog {
            family,
            n,
            tree,
            twist,
            chain,
        } => run_catalog(
            family,
            *n,
            tree.as_deref(),
            twist.as_deref(),
            *chain,
            cli.seed,
        ),
    }
}

/// Reads a file argument, with `-` meaning standard input.
fn read_input(path: &str) -> Result<Vec<u8>, String> {
    if path == "-" {
        let mut bytes = Vec::new();
        std::io::stdin()
            .read_to_end(&mut bytes)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        Ok(bytes)
    } else {
        fs::read(path).map_err(|e| format!("cannot read `{path}`: {e}"))
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Failure of one analysis operation: either a malformed argument or a
/// verdict-style engine error.
enum OpError {
    Arg(String),
    Engine(EngineError),
}

impl From<EngineError> for OpError {
    fn from(e: EngineError) -> Self {
        OpError::Engine(e)
    }
}

fn parse_k_arg(arg: Option<&str>, n: usize) -> Result<Vec<BigInt>, OpError> {
    match arg {
        None => Ok(vec![BigInt::one(); n]),
        Some(text) => {
            let parsed: Result<Vec<BigInt>, _> =
                text.split(',').map(|s| BigInt::from_str(s.trim())).collect();
            match parsed {
                Ok(k) if k.len() == n => Ok(k),
                Ok(k) => Err(OpError::Engine(EngineError::KLength {
                    expected: n,
                    got: k.len(),
                })),
                Err(_) => Err(OpError::Arg(format!(
                    "cannot parse --k `{text}`: expected comma-separated integers"
                ))),
            }
        }
    }
}

fn engine_error_exit(err: &EngineError) -> i32 {
    if err.is_unrealizable() {
        EXIT_UNREALIZABLE
    } else {
        EXIT_INPUT
    }
}

fn violations_json(violations: &[Violation]) -> Value {
    Value::Array(
        violations
            .iter()
            .map(|v| {
                json!({
                    "rule": v.rule(),
                    "indices": v.indices(),
                    "value": json_int_value(v.value()),
                    "message": v.to_string(),
                })
            })
            .collect(),
    )
}

fn emit_report(
    format: Format,
    command: &str,
    sha: &str,
    result: Value,
    violations: &[Violation],
    table: &str,
) {
    match format {
        Format::Json => {
            let report = json!({
                "command": command,
                "input_sha256": sha,
                "result": result,
                "violations": violations_json(violations),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        }
        Format::Table => {
            println!("{}", table.trim_end());
        }
    }
}

/// Command echo for the report: the subcommand plus semantic arguments, but
/// not the input path, so that piped and file-based runs produce identical
/// reports.
fn command_echo(op: &str, seed: Option<u64>) -> String {
    match seed {
        Some(seed) => format!("{op} --seed {seed}"),
        None => op.to_string(),
    }
}

fn run_validate(cli: &Cli, file: &str) -> i32 {
    let bytes = match read_input(file) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    let sha = sha256_hex(&bytes);
    let text = match String::from_utf8(bytes) {
        Ok(t) => t,
        Err(_) => {
            eprintln!("error: input is not valid UTF-8");
            return EXIT_INPUT;
        }
    };
    let data = match QhData::from_json_str(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let violations = data.validate();
    let command = command_echo("validate", cli.seed);
    let result = json!({ "valid": violations.is_empty() });
    let table = if violations.is_empty() {
        "validation: OK (no violations)".to_string()
    } else {
        let mut lines = vec![format!("validation: {} violation(s)", violations.len())];
        lines.extend(violations.iter().map(|v| format!("  [{}] {v}", v.rule())));
        lines.join("\n")
    };
    emit_report(cli.format, &command, &sha, result, &violations, &table);
    if violations.is_empty() {
        EXIT_OK
    } else {
        eprintln!("error: input fails validation with {} violation(s)", violations.len());
        EXIT_VIOLATIONS
    }
}

fn run_analysis<F>(cli: &Cli, file: &str, op: &str, run: F) -> i32
where
    F: FnOnce(&QhData) -> Result<(Value, String), OpError>,
{
    let bytes = match read_input(file) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    let sha = sha256_hex(&bytes);
    let text = match String::from_utf8(bytes) {
        Ok(t) => t,
        Err(_) => {
            eprintln!("error: input is not valid UTF-8");
            return EXIT_INPUT;
        }
    };
    let data = match QhData::from_json_str(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let violations = data.validate();
    let command = command_echo(op, cli.seed);
    if !violations.is_empty() {
        emit_report(
            cli.format,
            &command,
            &sha,
            Value::Null,
            &violations,
            &{
                let mut lines =
                    vec![format!("validation: {} violation(s)", violations.len())];
                lines.extend(violations.iter().map(|v| format!("  [{}] {v}", v.rule())));
                lines.join("\n")
            },
        );
        eprintln!(
            "error: input fails validation with {} violation(s)",
            violations.len()
        );
        return EXIT_VIOLATIONS;
    }
    match run(&data) {
        Ok((result, table)) => {
            emit_report(cli.format, &command, &sha, result, &[], &table);
            EXIT_OK
        }
        Err(OpError::Arg(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
        Err(OpError::Engine(e)) => {
            eprintln!("error: {e}");
            engine_error_exit(&e)
        }
    }
}

fn run_catalog(
    family: &str,
    n: Option<usize>,
    tree: Option<&str>,
    twist: Option<&str>,
    chain: bool,
    seed: Option<u64>,
) -> i32 {
    let spec = match family_spec(family, n, tree, chain, seed) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    let data = match catalog::generate(&spec) {
        Ok(d) => d,
        Err(e @ CatalogError::NotATree) => {
            eprintln!("error: {e}");
            return EXIT_UNREALIZABLE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let data = match twist {
        None => data,
        Some(text) => {
            let k = match parse_k_arg(Some(text), data.len()) {
                Ok(k) => k,
                Err(OpError::Arg(msg)) => {
                    eprintln!("error: {msg}");
                    return EXIT_INPUT;
                }
                Err(OpError::Engine(e)) => {
                    eprintln!("error: {e}");
                    return engine_error_exit(&e);
                }
            };
            match catalog::morita_twist(&data, &k) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return engine_error_exit(&e);
                }
            }
        }
    };
    // The generated document itself is the report: it feeds straight back
    // into the analysis subcommands, from a file or through a pipe.
    println!("{}", data.to_json_string());
    EXIT_OK
}

fn family_spec(
    family: &str,
    n: Option<usize>,
    tree: Option<&str>,
    chain: bool,
    seed: Option<u64>,
) -> Result<FamilySpec, String> {
    let canonical = family.replace('-', "_");
    let need_n = || n.ok_or_else(|| format!("family `{family}` needs --n"));
    match canonical.as_str() {
        "example_a4" => Ok(FamilySpec::ExampleA4),
        "semisimple" => Ok(FamilySpec::Semisimple { n: need_n()?, chain }),
        "erdmann" => Ok(FamilySpec::Erdmann { n: need_n()? }),
        "dual_extension_linear" => Ok(FamilySpec::DualExtensionLinear { n: need_n()? }),
        "ringel_dual_tree" => {
            let spec = match tree {
                Some(path) => {
                    let bytes = read_input(path)?;
                    let text = String::from_utf8(bytes)
                        .map_err(|_| "tree file is not valid UTF-8".to_string())?;
                    serde_json::from_str::<PosetSpec>(&text)
                        .map_err(|e| format!("invalid tree file: {e}"))?
                }
                None => {
                    let n = n.ok_or_else(|| {
                        format!("family `{family}` needs --tree <file>, or --n for a random tree")
                    })?;
                    if n == 0 {
                        return Err("a tree needs at least one node".into());
                    }
                    catalog::random_tree_spec(n, seed.unwrap_or(0))
                }
            };
            Ok(FamilySpec::RingelDualTree { tree: spec })
        }
        other => Err(format!(
            "unknown family `{other}`; expected example_a4, semisimple, erdmann, \
             dual_extension_linear or ringel_dual_tree"
        )),
    }
}

fn matrix_json(m: &IntMat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(json_int_value).collect()))
            .collect(),
    )
}

fn vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(json_int_value).collect())
}

/// Aligned ASCII table: first column left-aligned, the rest right-aligned.
fn render_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let render_row = |row: &[String]| {
        let mut out = String::new();
        for c in 0..cols {
            if c > 0 {
                out.push_str("  ");
            }
            if c == 0 {
                out.push_str(&format!("{:<width$}", row[c], width = widths[c]));
            } else {
                out.push_str(&format!("{:>width$}", row[c], width = widths[c]));
            }
        }
        out.trim_end().to_string()
    };
    let mut lines = vec![render_row(headers)];
    lines.extend(rows.iter().map(|r| render_row(r)));
    lines.join("\n")
}

/// Matrix as a table with labels as row and column headers.
fn render_matrix(labels: &[String], m: &IntMat) -> String {
    let mut headers = vec![String::new()];
    headers.extend(labels.iter().cloned());
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|i| {
            let mut row = vec![labels[i].clone()];
            row.extend(m.row(i).iter().map(|x| x.to_string()));
            row
        })
        .collect();
    render_table(&headers, &rows)
}

fn render_vector(labels: &[String], name: &str, values: &[BigInt]) -> String {
    let headers = vec!["label".to_string(), name.to_string()];
    let rows: Vec<Vec<String>> = labels
        .iter()
        .zip(values)
        .map(|(label, x)| vec![label.clone(), x.to_string()])
        .collect();
    render_table(&headers, &rows)
}
