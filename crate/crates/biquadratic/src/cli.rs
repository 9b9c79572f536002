//! Command-line interface binding all modules, plus the decomposition file
//! format shared by `decompose` and `verify`.
//!
//! Exit codes: 0 success; 1 verification or certificate check failed;
//! 2 parse/usage error; 3 search failure (inconclusive).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::analyze::analyze;
use crate::cert::{
    builtin_thm41_certificate, certificate_to_text, check_certificate, parse_certificate,
    CertVerdict,
};
use crate::decompose::{
    decompose_auto, decompose_diagonal_rowsplit, decompose_simple, decompose_y_deficient,
    detect_y_deficient, example_diagonal_form, DecomposeError, DecompositionOutcome,
    NumericDecomposition, Strategy,
};
use crate::graph::{lemma_scan, zarankiewicz};
use crate::gram::{
    self, build_gram_system, low_rank_search, max_residual, min_rank_upper_bound, rational_approx,
    SearchConfig,
};
use crate::poly::{
    form_q, infer_dims, p_4_3_7, simple_family, verify_decomposition, BilinearForm,
    BiquadraticForm, SosDecomposition,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    CheckFailed(String),
    #[error("{0}")]
    Inconclusive(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::CheckFailed(_) => EXIT_CHECK_FAILED,
            CliError::Inconclusive(_) => EXIT_INCONCLUSIVE,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Toolkit for positive-semidefinite biquadratic forms: exact SOS
/// decompositions, low-rank Gram searches, and orthogonality certificates.
#[derive(Debug, Parser)]
#[command(name = "biquadratic", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Shared options for form-taking subcommands. The FORM argument is an
/// inline expression like `x1^2*y1^2 + 2*x1*x2*y1*y2`, a path to a file
/// containing one, or a named builtin: `@q`, `@p437`, `@diag`,
/// `@simple<s>` (the C4-free family with s edges).
#[derive(Debug, Args)]
pub struct FormArgs {
    /// Form expression, file path, or builtin name.
    pub form: String,
    /// Number of x variables (default: inferred from the expression).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of y variables (default: inferred from the expression).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Base RNG seed for the randomized search.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of seeded restarts.
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    /// Max-residual tolerance for numeric success.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        SearchConfig {
            base_seed: self.seed,
            max_restarts: self.restarts,
            tolerance: self.tol,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Simple,
    Ydeficient,
    Rowsplit,
    Gram,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a form and echo it in canonical order.
    Parse {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        json: bool,
    },
    /// Report the structure of a form: term inventory, graph view,
    /// y-deficient columns, and a seeded nonnegativity sample.
    Analyze {
        #[command(flatten)]
        form: FormArgs,
        /// Number of random points for the nonnegativity check.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a form into a sum of squares and emit a decomposition file.
    Decompose {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        #[command(flatten)]
        search: SearchArgs,
        /// Write the decomposition file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Verify that a decomposition file sums to the given form.
    Verify {
        #[command(flatten)]
        form: FormArgs,
        /// Path to a decomposition file.
        decomposition: PathBuf,
        /// Verify numerically to this tolerance instead of exactly.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Search for a rank-r Gram factor (--r), or for the smallest feasible
    /// rank (--min --rmax).
    RankSearch {
        #[command(flatten)]
        form: FormArgs,
        /// Target rank for a single search.
        #[arg(long, conflicts_with_all = ["min", "rmax"])]
        r: Option<usize>,
        /// Try ranks 1..=rmax in order and report the first success.
        #[arg(long, requires = "rmax")]
        min: bool,
        #[arg(long)]
        rmax: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive Zarankiewicz number z(m, n): maximum C4-free edge count.
    Zarankiewicz {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustively check the structural lemmas over all (4,3) graphs with
    /// the given edge count.
    LemmaScan {
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check an orthogonality certificate file against a form.
    CheckCert {
        #[command(flatten)]
        form: FormArgs,
        /// Path to a certificate file.
        certificate: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Emit the built-in certificate that Q has no 7-square decomposition.
    BuiltinCertThm41 {
        /// Write the certificate file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Resolves a FORM argument: builtin name, file path, or inline expression.
pub fn resolve_form(args: &FormArgs) -> Result<BiquadraticForm, CliError> {
    let spec = args.form.trim();
    if let Some(name) = spec.strip_prefix('@') {
        let builtin = match name {
            "q" => Some(form_q()),
            "p437" => Some(p_4_3_7()),
            "diag" => Some(example_diagonal_form()),
            _ => match name.strip_prefix("simple") {
                Some(digits) => {
                    let s: usize = digits
                        .parse()
                        .map_err(|_| usage(format!("unknown builtin form '@{name}'")))?;
                    Some(simple_family(s).map_err(usage)?)
                }
                None => None,
            },
        };
        return builtin.ok_or_else(|| usage(format!("unknown builtin form '@{name}'")));
    }
    let text = if std::path::Path::new(spec).is_file() {
        std::fs::read_to_string(spec).map_err(usage)?
    } else {
        spec.to_string()
    };
    let (im, inn) = infer_dims(&text).map_err(usage)?;
    let m = args.m.unwrap_or(im);
    let n = args.n.unwrap_or(inn);
    BiquadraticForm::parse(&text, m, n).map_err(usage)
}

// ---------------------------------------------------------------------------
// Decomposition file format
// ---------------------------------------------------------------------------
//
//   # provenance or free-text comment
//   dims <m> <n>
//   target <form text>
//   square <bilinear text>        (one line per square)

/// Serializes a decomposition in the documented text format.
pub fn decomposition_to_text(
    target: &BiquadraticForm,
    squares: &[BilinearForm],
    comments: &[String],
) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {}", c);
    }
    let _ = writeln!(out, "dims {} {}", target.m(), target.n());
    let _ = writeln!(out, "target {}", target);
    for sq in squares {
        let _ = writeln!(out, "square {}", sq);
    }
    out
}

/// Parses the documented decomposition text format.
pub fn parse_decomposition(text: &str) -> Result<SosDecomposition, CliError> {
    let mut dims: Option<(usize, usize)> = None;
    let mut target: Option<BiquadraticForm> = None;
    let mut squares = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let bad = |msg: String| usage(format!("decomposition line {line}: {msg}"));
        if let Some(rest) = content.strip_prefix("dims ") {
            let mut it = rest.split_whitespace();
            let m = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("expected m".into()))?;
            let n = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("expected n".into()))?;
            dims = Some((m, n));
        } else if let Some(rest) = content.strip_prefix("target ") {
            let (m, n) = dims.ok_or_else(|| bad("dims must precede target".into()))?;
            target = Some(BiquadraticForm::parse(rest, m, n).map_err(|e| bad(e.to_string()))?);
        } else if let Some(rest) = content.strip_prefix("square ") {
            let (m, n) = dims.ok_or_else(|| bad("dims must precede square".into()))?;
            squares.push(BilinearForm::parse(rest, m, n).map_err(|e| bad(e.to_string()))?);
        } else {
            return Err(bad(format!("unknown directive '{content}'")));
        }
    }
    let target = target.ok_or_else(|| usage("decomposition file has no target".to_string()))?;
    Ok(SosDecomposition::new(target, squares))
}

fn rationalized_squares(dec: &NumericDecomposition) -> Vec<BilinearForm> {
    // Emit numeric squares as nearby rationals so the file stays readable by
    // the exact parser; `verify --tol` rechecks them numerically.
    const EMIT_BOUND: u64 = 1_000_000_000_000;
    dec.squares
        .iter()
        .map(|sq| {
            let mut out = BilinearForm::zero(sq.m, sq.n).expect("valid dims");
            for i in 1..=sq.m {
                for j in 1..=sq.n {
                    let c = sq.coeffs[(i - 1) * sq.n + (j - 1)];
                    if c.abs() >= 1e-15 {
                        out.set(i, j, rational_approx(c, EMIT_BOUND)).expect("in bounds");
                    }
                }
            }
            out
        })
        .collect()
}

/// Output of one CLI invocation.
#[derive(Debug)]
pub struct CommandOutput {
    pub text: String,
    pub exit_code: i32,
}

fn ok(text: String) -> Result<CommandOutput, CliError> {
    Ok(CommandOutput {
        text,
        exit_code: EXIT_OK,
    })
}

fn map_decompose_err(e: DecomposeError) -> CliError {
    match e {
        DecomposeError::SearchFailure { .. } | DecomposeError::Gram(_) => {
            CliError::Inconclusive(e.to_string())
        }
        other => usage(other.to_string()),
    }
}

fn write_or_inline(out: &Option<PathBuf>, content: &str) -> Result<String, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, content).map_err(usage)?;
            Ok(format!("wrote {}", path.display()))
        }
        None => Ok(content.to_string()),
    }
}

/// Executes one parsed command, returning its output and exit code. Errors
/// carry the exit code mandated by the interface contract.
pub fn execute(cli: Cli) -> Result<CommandOutput, CliError> {
    match cli.command {
        Command::Parse { form, json } => {
            let f = resolve_form(&form)?;
            if json {
                ok(json!({
                    "m": f.m(),
                    "n": f.n(),
                    "num_terms": f.num_terms(),
                    "canonical": f.to_string(),
                })
                .to_string())
            } else {
                ok(format!("{}\n", f))
            }
        }
        Command::Analyze {
            form,
            trials,
            seed,
            json,
        } => {
            let f = resolve_form(&form)?;
            let report = analyze(&f, trials, seed);
            if json {
                let mut value = serde_json::to_value(&report).map_err(usage)?;
                value["seed"] = json!(seed);
                ok(value.to_string())
            } else {
                ok(format!("seed: {}\n{}", seed, report))
            }
        }
        Command::Decompose {
            form,
            strategy,
            search,
            out,
            json,
        } => {
            let f = resolve_form(&form)?;
            let config = search.config();
            let (outcome, strat) = run_strategy(&f, strategy, &config)?;
            let mut comments = vec![
                format!("strategy: {}", strat.name()),
                format!("seed: {}", config.base_seed),
            ];
            comments.extend(outcome.provenance().iter().cloned());
            let (squares, exact, residual) = match &outcome {
                DecompositionOutcome::Exact(d) => (d.squares.clone(), true, 0.0),
                DecompositionOutcome::Numeric(d) => {
                    comments.push(format!(
                        "numeric decomposition, max residual {:.3e}",
                        d.max_residual
                    ));
                    (rationalized_squares(d), false, d.max_residual)
                }
            };
            let file = decomposition_to_text(&f, &squares, &comments);
            let placed = write_or_inline(&out, &file)?;
            if json {
                ok(json!({
                    "strategy": strat.name(),
                    "seed": config.base_seed,
                    "squares": squares.len(),
                    "exact": exact,
                    "max_residual": residual,
                    "file": file,
                })
                .to_string())
            } else {
                ok(format!(
                    "strategy: {}  squares: {}  exact: {}\n{}",
                    strat.name(),
                    squares.len(),
                    exact,
                    placed
                ))
            }
        }
        Command::Verify {
            form,
            decomposition,
            tol,
            json,
        } => {
            let f = resolve_form(&form)?;
            let text = std::fs::read_to_string(&decomposition).map_err(usage)?;
            let mut dec = parse_decomposition(&text)?;
            if (dec.target.m(), dec.target.n()) != (f.m(), f.n()) {
                return Err(usage(format!(
                    "decomposition is on ({}, {}), form is on ({}, {})",
                    dec.target.m(),
                    dec.target.n(),
                    f.m(),
                    f.n()
                )));
            }
            dec.target = f.clone();
            let (passed, detail) = match tol {
                None => {
                    let verdict = verify_decomposition(&dec).map_err(usage)?;
                    (verdict.is_equal(), format!("{:?}", verdict))
                }
                Some(bound) => {
                    let numeric: Vec<_> = dec
                        .squares
                        .iter()
                        .map(|sq| to_numeric_bilinear(sq))
                        .collect();
                    let res = gram::numeric_coeff_residual(&numeric, &f);
                    (res <= bound, format!("max residual {:.3e}", res))
                }
            };
            let text = if json {
                json!({
                    "squares": dec.squares.len(),
                    "passed": passed,
                    "detail": detail,
                })
                .to_string()
            } else {
                format!(
                    "{} squares, verification {}: {}",
                    dec.squares.len(),
                    if passed { "passed" } else { "FAILED" },
                    detail
                )
            };
            if passed {
                ok(text)
            } else {
                Err(CliError::CheckFailed(text))
            }
        }
        Command::RankSearch {
            form,
            r,
            min,
            rmax,
            search,
            json,
        } => {
            let f = resolve_form(&form)?;
            let config = search.config();
            let found = match (r, min, rmax) {
                (Some(rank), false, None) => {
                    let system = build_gram_system(&f);
                    low_rank_search(&system, rank, &config)
                        .map_err(usage)?
                        .map(|factor| (rank, factor))
                }
                (None, true, Some(bound)) => {
                    min_rank_upper_bound(&f, bound, &config).map_err(usage)?
                }
                _ => {
                    return Err(usage(
                        "use either --r <k> or --min --rmax <k>".to_string(),
                    ))
                }
            };
            match found {
                Some((rank, factor)) => {
                    let system = build_gram_system(&f);
                    let res = max_residual(&system, &factor);
                    if json {
                        ok(json!({
                            "found": true,
                            "rank": rank,
                            "seed": config.base_seed,
                            "max_residual": res,
                            "factor": factor.to_text(),
                        })
                        .to_string())
                    } else {
                        ok(format!(
                            "seed: {}\nfound rank {} factor, max residual {:.3e}\n{}",
                            config.base_seed,
                            rank,
                            res,
                            factor.to_text()
                        ))
                    }
                }
                None => {
                    let msg = if json {
                        json!({
                            "found": false,
                            "seed": config.base_seed,
                            "restarts": config.max_restarts,
                            "note": "search failure is inconclusive, not a rank lower bound",
                        })
                        .to_string()
                    } else {
                        format!(
                            "seed: {}\nno factor found within {} restarts; \
                             inconclusive, not a rank lower bound",
                            config.base_seed, config.max_restarts
                        )
                    };
                    Err(CliError::Inconclusive(msg))
                }
            }
        }
        Command::Zarankiewicz { m, n, json } => {
            let (z, witness) = zarankiewicz(m, n).map_err(usage)?;
            let edges: Vec<_> = witness.edges().copied().collect();
            if json {
                ok(json!({ "m": m, "n": n, "z": z, "witness": edges }).to_string())
            } else {
                ok(format!("z({}, {}) = {}  witness edges: {:?}", m, n, z, edges))
            }
        }
        Command::LemmaScan { edges, json } => {
            let report = lemma_scan(4, 3, edges).map_err(usage)?;
            let clean = report.violations.is_empty();
            let text = if json {
                json!({
                    "m": report.m,
                    "n": report.n,
                    "edges": report.edge_count,
                    "graphs_scanned": report.graphs_scanned,
                    "with_c4": report.with_c4,
                    "violations": report.violations.len(),
                })
                .to_string()
            } else {
                report.to_string()
            };
            if clean {
                ok(text)
            } else {
                Err(CliError::CheckFailed(text))
            }
        }
        Command::CheckCert {
            form,
            certificate,
            json,
        } => {
            let f = resolve_form(&form)?;
            let text = std::fs::read_to_string(&certificate).map_err(usage)?;
            let cert = parse_certificate(&text).map_err(usage)?;
            if cert.target != f {
                return Err(CliError::CheckFailed(
                    "certificate target does not match the given form".to_string(),
                ));
            }
            let verdict = check_certificate(&cert);
            let text = if json {
                json!({
                    "valid": verdict.is_valid(),
                    "rank": cert.rank,
                    "verdict": verdict.to_string(),
                })
                .to_string()
            } else {
                match &verdict {
                    CertVerdict::Valid {
                        orthogonal_set_size,
                    } => format!(
                        "valid: no decomposition with <= {} squares \
                         ({} pairwise-orthogonal nonzero vectors)",
                        cert.rank, orthogonal_set_size
                    ),
                    CertVerdict::Invalid { .. } => verdict.to_string(),
                }
            };
            if verdict.is_valid() {
                ok(text)
            } else {
                Err(CliError::CheckFailed(text))
            }
        }
        Command::BuiltinCertThm41 { out } => {
            let cert = builtin_thm41_certificate();
            let text = certificate_to_text(&cert);
            ok(write_or_inline(&out, &text)?)
        }
    }
}

fn to_numeric_bilinear(sq: &BilinearForm) -> gram::NumericBilinearForm {
    let (m, n) = (sq.m(), sq.n());
    let mut coeffs = vec![0.0; m * n];
    for (&(i, j), c) in sq.entries() {
        coeffs[(i - 1) * n + (j - 1)] = num::ToPrimitive::to_f64(c).expect("finite");
    }
    gram::NumericBilinearForm { m, n, coeffs }
}

fn run_strategy(
    form: &BiquadraticForm,
    strategy: StrategyArg,
    config: &SearchConfig,
) -> Result<(DecompositionOutcome, Strategy), CliError> {
    match strategy {
        StrategyArg::Auto => decompose_auto(form, config).map_err(map_decompose_err),
        StrategyArg::Simple => decompose_simple(form)
            .map(|d| (DecompositionOutcome::Exact(d), Strategy::Simple))
            .map_err(map_decompose_err),
        StrategyArg::Ydeficient => {
            let j0 = *detect_y_deficient(form).first().ok_or_else(|| {
                usage("no column qualifies for the y-deficient split".to_string())
            })?;
            decompose_y_deficient(form, j0, config)
                .map(|o| (o, Strategy::YDeficient))
                .map_err(map_decompose_err)
        }
        StrategyArg::Rowsplit => decompose_diagonal_rowsplit(form, config)
            .map(|o| (o, Strategy::RowSplit))
            .map_err(map_decompose_err),
        StrategyArg::Gram => {
            let mn = form.m() * form.n();
            let found = min_rank_upper_bound(form, mn, config).map_err(usage)?;
            let Some((_, factor)) = found else {
                return Err(CliError::Inconclusive(
                    "full Gram search failed within budget (inconclusive)".to_string(),
                ));
            };
            let provenance = vec!["full Gram rank search".to_string()];
            if let Some(mut dec) =
                gram::rationalize(form, &factor, 1_000_000).map_err(usage)?
            {
                dec.provenance = provenance;
                return Ok((DecompositionOutcome::Exact(dec), Strategy::Gram));
            }
            let squares = gram::rows_to_bilinear(&factor, form.m(), form.n());
            let residual = gram::numeric_coeff_residual(&squares, form);
            Ok((
                DecompositionOutcome::Numeric(NumericDecomposition {
                    target: form.clone(),
                    squares,
                    max_residual: residual,
                    provenance,
                }),
                Strategy::Gram,
            ))
        }
    }
}

/// Parses argv and runs one command, printing output. Returns the process
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version via "errors" that should exit 0.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    use std::io::Write;
    match execute(cli) {
        Ok(output) => {
            // Ignore write errors (e.g. a closed pipe downstream).
            let _ = writeln!(std::io::stdout(), "{}", output.text.trim_end());
            output.exit_code
        }
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "{}", e);
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{expand, q_eight_squares};

    fn exec(args: &[&str]) -> Result<CommandOutput, CliError> {
        let mut argv = vec!["biquadratic"];
        argv.extend_from_slice(args);
        execute(Cli::try_parse_from(argv).expect("argv parses"))
    }

    #[test]
    fn parse_echoes_canonical_form() {
        let out = exec(&["parse", "x1*x1*y2*y1 + x1^2*y1*y2"]).unwrap();
        assert_eq!(out.text.trim(), "2*x1^2*y1*y2");
    }

    #[test]
    fn builtin_names_resolve() {
        for name in ["@q", "@p437", "@diag", "@simple5"] {
            assert!(exec(&["parse", name]).is_ok(), "builtin {name}");
        }
        let err = exec(&["parse", "@nonsense"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn decomposition_file_round_trip() {
        let squares = q_eight_squares();
        let target = expand(&squares).unwrap();
        let text = decomposition_to_text(&target, &squares, &["demo".to_string()]);
        let dec = parse_decomposition(&text).unwrap();
        assert_eq!(dec.target, target);
        assert_eq!(dec.squares, squares);
    }

    #[test]
    fn verify_round_trip_through_files() {
        let dir = std::env::temp_dir().join("biquadratic-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("q.dec");
        let out = exec(&[
            "decompose",
            "@q",
            "--strategy",
            "ydeficient",
            "--out",
            path.to_str().unwrap(),
        ])
        .unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        // The remainder block may come back numeric, so verify to tolerance;
        // the emitted rationals are within 1e-12 of the numeric squares.
        let verify = exec(&["verify", "@q", path.to_str().unwrap(), "--tol", "1e-6"]).unwrap();
        assert_eq!(verify.exit_code, EXIT_OK);
    }

    #[test]
    fn verify_rejects_wrong_target() {
        let dir = std::env::temp_dir().join("biquadratic-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p437.dec");
        exec(&["decompose", "@p437", "--out", path.to_str().unwrap()]).unwrap();
        let err = exec(&["verify", "@q", path.to_str().unwrap()]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_CHECK_FAILED);
    }

    #[test]
    fn builtin_cert_round_trips_through_check() {
        let dir = std::env::temp_dir().join("biquadratic-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("thm41.cert");
        exec(&["builtin-cert-thm41", "--out", path.to_str().unwrap()]).unwrap();
        let out = exec(&["check-cert", "@q", path.to_str().unwrap()]).unwrap();
        assert!(out.text.contains("valid"));
        let err = exec(&["check-cert", "@p437", path.to_str().unwrap()]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_CHECK_FAILED);
    }

    #[test]
    fn zarankiewicz_small() {
        let out = exec(&["zarankiewicz", "--m", "2", "--n", "2"]).unwrap();
        assert!(out.text.contains("z(2, 2) = 3"));
    }

    #[test]
    fn rank_search_usage_error() {
        let err = exec(&["rank-search", "@q"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
    }
}
