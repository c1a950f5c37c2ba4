//! Command-line frontend.
//!
//! Every subcommand is a thin shell over a library call: it parses JSON
//! inputs, runs one operation, and prints one JSON document on stdout.
//! Identical inputs and seeds produce byte-identical output.  Failures
//! print a machine-readable error object on stderr and map onto the
//! documented exit codes: 0 success, 2 verification failed, 3 bad
//! input, 4 budget exhausted.
//!
//! Input files are self-contained: they carry a `field` descriptor
//! (either `{"q": 9}` for the pinned default modulus or
//! `{"p": 3, "h": 2, "modulus": [...]}`) next to the matrices, codes,
//! and isometries defined over it.  Pass `-` to read stdin.

use std::io::Read as _;
use std::path::PathBuf;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{Catalog, CatalogRecord, Provenance};
use crate::codes::LinearCode;
use crate::constructions::{
    construction1, construction2, construction3, construction4_dual_formula,
    construction4_self_orthogonal, reproduce,
};
use crate::gf::FieldSpec;
use crate::isometry::{Isometry, KronIsometry};
use crate::linalg::FqMatrix;
use crate::mpc::MatrixProductCode;
use crate::{nsc, quasi, Error, Result, DEFAULT_ENUM_BUDGET, DEFAULT_NSC_RETRY_LIMIT, SCHEMA_VERSION};

#[derive(Parser)]
#[command(
    name = "sigma-mpc",
    version,
    about = "Self-orthogonal matrix-product codes over finite fields",
    long_about = "Build, certify, and reproduce self-orthogonal matrix-product codes.\n\
                  All inputs and outputs are JSON; seeds make every search replayable."
)]
struct Cli {
    /// Ceiling on exhaustive codeword enumeration, in codewords.
    #[arg(long, global = true, env = "SIGMA_MPC_BUDGET")]
    budget: Option<u64>,

    /// Bound the worker thread pool (0 = one thread per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Path of the JSON-lines catalog file.
    #[arg(long, global = true, env = "SIGMA_MPC_CATALOG")]
    catalog: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a field and print its descriptor and pairing data.
    Field(FieldArgs),
    /// Decide the non-singular-by-columns predicate, with a witness on
    /// failure.
    Nsc(InputArgs),
    /// Sample or lift quasi-diagonal defining matrices.
    Quasi {
        #[command(subcommand)]
        sub: QuasiCmd,
    },
    /// Report whether the gram matrix A A^T is monomial (an optimal
    /// defining matrix for some permutation).
    TauOd(InputArgs),
    /// Run one of the four code constructions on a JSON instance file.
    Construct {
        /// Which construction to run.
        #[arg(value_enum)]
        variant: ConstructVariant,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Check self-orthogonality, dual containment, and the hull of a
    /// code under an isometry.
    Verify(InputArgs),
    /// Exact minimum distance with a strategy report.
    Distance(InputArgs),
    /// Re-derive a named reference instance and compare against frozen
    /// values.
    Reproduce(ReproduceArgs),
    /// Store, list, and revalidate certified matrices.
    Catalog {
        #[command(subcommand)]
        sub: CatalogCmd,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field order q = p^h (pinned default modulus).
    #[arg(long, conflicts_with_all = ["p", "h"])]
    q: Option<u64>,
    /// Characteristic (use with --h).
    #[arg(long, requires = "h")]
    p: Option<u64>,
    /// Extension degree (use with --p).
    #[arg(long, requires = "p")]
    h: Option<u32>,
    /// Also print the pairing parameters for this Frobenius exponent.
    #[arg(long)]
    e: Option<u32>,
}

#[derive(Args)]
struct InputArgs {
    /// Input JSON file; `-` reads stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: String,
}

#[derive(Subcommand)]
enum QuasiCmd {
    /// Seeded random search for NSC Toeplitz matrices that lift to
    /// quasi-diagonal ones.
    Sample(SampleArgs),
    /// Lift one NSC matrix from a file to a quasi-diagonal one.
    Lift(LiftArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Field order q = p^h.
    #[arg(long)]
    q: u64,
    /// Matrix size s.
    #[arg(long)]
    s: usize,
    /// Frobenius exponent of the pairing.
    #[arg(long)]
    e: u32,
    /// Number of independent trials.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Master seed; trial i uses RNG stream i of this seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep at most this many successful lifts in the report.
    #[arg(long, default_value_t = 8)]
    keep: usize,
    /// Optional monomial matrix file for the lift (default: identity).
    #[arg(long, value_name = "FILE")]
    m_tilde: Option<String>,
    /// Write the full report here in addition to stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    /// Input JSON file with the matrix; `-` reads stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: String,
    /// Frobenius exponent of the pairing.
    #[arg(long)]
    e: u32,
    /// Optional monomial matrix file (default: identity).
    #[arg(long, value_name = "FILE")]
    m_tilde: Option<String>,
}

#[derive(Copy, Clone, ValueEnum)]
#[value(rename_all = "lower")]
enum ConstructVariant {
    /// Dual of a dual-containing product (needs no NSC hypothesis).
    I,
    /// Lift a subfield product to a quasi-diagonal defining matrix.
    Ii,
    /// Gram-flip factorization pi_e(A) M A = D Q.
    Iii,
    /// Toeplitz dual formula / cross-containment route.
    Iv,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Item name; see `reproduce --list`.
    item: Option<String>,
    /// List the available items.
    #[arg(long)]
    list: bool,
    /// (table2) base order label of the reference row.
    #[arg(long, default_value_t = 3)]
    base_q: u64,
    /// (table2) matrix size of the reference row.
    #[arg(long, default_value_t = 3)]
    s: usize,
    /// (table2) number of sampling trials.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// (table2) master seed.
    #[arg(long, default_value_t = 20_240)]
    seed: u64,
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Validate a matrix file and append it as a record.
    Add(CatalogAddArgs),
    /// Print every stored record.
    List,
    /// Revalidate every record; quarantine and report failures.
    Check,
}

#[derive(Args)]
struct CatalogAddArgs {
    /// Input JSON file with the matrix; `-` reads stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: String,
    /// Record kind to validate against.
    #[arg(long, value_enum)]
    kind: CatalogKindArg,
    /// (quasi) companion matrix file; default: identity.
    #[arg(long, value_name = "FILE")]
    companion: Option<String>,
    /// (quasi) Frobenius exponent of the pairing.
    #[arg(long, default_value_t = 0)]
    e: u32,
    /// Provenance: campaign master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Provenance: campaign trial index.
    #[arg(long)]
    trial: Option<u64>,
}

#[derive(Copy, Clone, ValueEnum)]
enum CatalogKindArg {
    /// Quasi-diagonal pairing record (kind chosen from the exponent).
    Quasi,
    /// Monomial-gram record.
    TauOd,
}

/// What a successful dispatch prints and which exit code it carries;
/// predicates that fail cleanly still print their result.
struct CmdOutput {
    json: serde_json::Value,
    exit: i32,
}

impl CmdOutput {
    fn ok(json: serde_json::Value) -> Self {
        CmdOutput { json, exit: 0 }
    }

    fn failed_check(json: serde_json::Value) -> Self {
        CmdOutput { json, exit: 2 }
    }
}

/// Entry point used by the binary: parse, dispatch, print, map errors
/// to exit codes.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ClapErrorKind::DisplayHelp
                | ClapErrorKind::DisplayVersion
                | ClapErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    print!("{err}");
                    0
                }
                _ => {
                    eprintln!(
                        "{}",
                        error_json(&Error::BadInput(err.render().to_string()))
                    );
                    3
                }
            };
        }
    };
    if cli.threads > 0 {
        // Ignore the error: the global pool can only be set once per
        // process, which is exactly the semantics we want.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let budget = cli.budget.unwrap_or(DEFAULT_ENUM_BUDGET);
    let catalog_path = cli
        .catalog
        .clone()
        .unwrap_or_else(|| PathBuf::from("catalog.jsonl"));
    match dispatch(&cli, budget, &catalog_path) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.json).expect("output serializes");
            // A closed pipe (e.g. piping into `head`) is not an error.
            use std::io::Write as _;
            let _ = writeln!(std::io::stdout(), "{text}");
            out.exit
        }
        Err(err) => {
            eprintln!("{}", error_json(&err));
            err.exit_code()
        }
    }
}

fn error_json(err: &Error) -> String {
    serde_json::json!({
        "schema": SCHEMA_VERSION,
        "error": {
            "message": err.to_string(),
            "exit_code": err.exit_code(),
        }
    })
    .to_string()
}

fn with_schema(mut v: serde_json::Value) -> serde_json::Value {
    if let Some(obj) = v.as_object_mut() {
        obj.insert("schema".into(), serde_json::json!(SCHEMA_VERSION));
        return v;
    }
    serde_json::json!({ "schema": SCHEMA_VERSION, "result": v })
}

fn dispatch(cli: &Cli, budget: u64, catalog_path: &PathBuf) -> Result<CmdOutput> {
    match &cli.command {
        Command::Field(args) => cmd_field(args),
        Command::Nsc(args) => cmd_nsc(args),
        Command::Quasi { sub } => match sub {
            QuasiCmd::Sample(args) => cmd_quasi_sample(args),
            QuasiCmd::Lift(args) => cmd_quasi_lift(args),
        },
        Command::TauOd(args) => cmd_tau_od(args),
        Command::Construct { variant, input } => cmd_construct(*variant, input, budget),
        Command::Verify(args) => cmd_verify(args),
        Command::Distance(args) => cmd_distance(args, budget),
        Command::Reproduce(args) => cmd_reproduce(args, budget),
        Command::Catalog { sub } => cmd_catalog(sub, catalog_path),
    }
}

// ----------------------------------------------------------------------
// input plumbing
// ----------------------------------------------------------------------

fn read_input(path: &str) -> Result<serde_json::Value> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::BadInput(format!("cannot read {path}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Factor a prime power `q = p^h`.
pub fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::BadInput(format!("{q} is not a prime power")));
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut h = 0u32;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                h += 1;
            }
            if rest != 1 {
                return Err(Error::BadInput(format!("{q} is not a prime power")));
            }
            return Ok((p, h));
        }
        p += 1;
    }
    Ok((q, 1))
}

/// Build a field from a JSON descriptor: `{"q": 9}` or
/// `{"p": 3, "h": 2}` with an optional explicit `"modulus"`.
pub fn field_from_json(v: &serde_json::Value) -> Result<FieldSpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::BadInput("field descriptor must be a JSON object".into()))?;
    let modulus: Option<Vec<u64>> = match obj.get("modulus") {
        Some(m) => Some(
            serde_json::from_value(m.clone())
                .map_err(|e| Error::BadInput(format!("bad modulus: {e}")))?,
        ),
        None => None,
    };
    let (p, h) = if let Some(q) = obj.get("q").and_then(|x| x.as_u64()) {
        factor_prime_power(q)?
    } else {
        let p = obj
            .get("p")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::BadInput("field descriptor needs q or p and h".into()))?;
        let h = obj
            .get("h")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::BadInput("field descriptor needs q or p and h".into()))?;
        (p, h as u32)
    };
    FieldSpec::new(p, h, modulus.as_deref())
}

/// Read `{"field": ..., "matrix": ...}` from a file.
fn read_field_matrix(path: &str) -> Result<(FieldSpec, FqMatrix)> {
    let v = read_input(path)?;
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::BadInput("input needs a \"field\" descriptor".into()))?,
    )?;
    let matrix = FqMatrix::from_json(
        &field,
        v.get("matrix")
            .ok_or_else(|| Error::BadInput("input needs a \"matrix\"".into()))?,
    )?;
    Ok((field, matrix))
}

fn read_matrix_file(field: &FieldSpec, path: &str) -> Result<FqMatrix> {
    let v = read_input(path)?;
    // Accept either a bare matrix or a {"matrix": ...} wrapper.
    let inner = v.get("matrix").unwrap_or(&v);
    FqMatrix::from_json(field, inner)
}

fn parse_inputs(field: &FieldSpec, v: &serde_json::Value) -> Result<Vec<LinearCode>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::BadInput("\"inputs\" must be an array of codes".into()))?;
    arr.iter().map(|c| LinearCode::from_json(field, c)).collect()
}

// ----------------------------------------------------------------------
// subcommands
// ----------------------------------------------------------------------

fn cmd_field(args: &FieldArgs) -> Result<CmdOutput> {
    let field = match (args.q, args.p, args.h) {
        (Some(q), _, _) => {
            let (p, h) = factor_prime_power(q)?;
            FieldSpec::new(p, h, None)?
        }
        (None, Some(p), Some(h)) => FieldSpec::new(p, h, None)?,
        _ => {
            return Err(Error::BadInput(
                "pass --q, or --p together with --h".into(),
            ))
        }
    };
    let descriptor = field.descriptor();
    let mut out = serde_json::json!({
        "field": serde_json::to_value(&descriptor)?,
        "order": field.order(),
        "primitive_element": field.format_element(field.omega()),
    });
    if let Some(e) = args.e {
        let params = field.galois_params(e % field.h());
        out["pairing"] = serde_json::json!({
            "e": e % field.h(),
            "r": params.r,
            "g": params.g,
            "subfield_order": field.p().pow(params.g),
        });
    }
    Ok(CmdOutput::ok(with_schema(out)))
}

fn cmd_nsc(args: &InputArgs) -> Result<CmdOutput> {
    let (_, matrix) = read_field_matrix(&args.input)?;
    match nsc::require_nsc(&matrix) {
        Ok(()) => Ok(CmdOutput::ok(with_schema(serde_json::json!({
            "is_nsc": true,
            "witness": null,
        })))),
        Err(Error::NotNsc { ell, cols }) => {
            Ok(CmdOutput::failed_check(with_schema(serde_json::json!({
                "is_nsc": false,
                "witness": { "ell": ell, "cols": cols },
            }))))
        }
        Err(e) => Err(e),
    }
}

fn cmd_quasi_sample(args: &SampleArgs) -> Result<CmdOutput> {
    let (p, h) = factor_prime_power(args.q)?;
    let field = FieldSpec::new(p, h, None)?;
    let m_tilde = match &args.m_tilde {
        Some(path) => read_matrix_file(&field, path)?,
        None => FqMatrix::identity(&field, args.s),
    };
    let report = quasi::sampling_campaign(
        &field,
        args.s,
        &m_tilde,
        args.e,
        args.trials,
        args.seed,
        args.keep,
        DEFAULT_NSC_RETRY_LIMIT,
    )?;
    let json = with_schema(report.to_json());
    if let Some(out) = &args.out {
        std::fs::write(out, serde_json::to_string_pretty(&json)?)?;
    }
    Ok(CmdOutput::ok(json))
}

fn cmd_quasi_lift(args: &LiftArgs) -> Result<CmdOutput> {
    let (field, matrix) = read_field_matrix(&args.input)?;
    let m_tilde = match &args.m_tilde {
        Some(path) => read_matrix_file(&field, path)?,
        None => FqMatrix::identity(&field, matrix.rows()),
    };
    let lift = quasi::lift_to_quasi(&matrix, &m_tilde, args.e)?;
    Ok(CmdOutput::ok(with_schema(lift.to_json())))
}

fn cmd_tau_od(args: &InputArgs) -> Result<CmdOutput> {
    let (_, matrix) = read_field_matrix(&args.input)?;
    let report = quasi::gram_monomial_report(&matrix)?;
    let json = with_schema(report.to_json());
    if report.is_monomial {
        Ok(CmdOutput::ok(json))
    } else {
        Ok(CmdOutput::failed_check(json))
    }
}

fn cmd_construct(
    variant: ConstructVariant,
    input: &InputArgs,
    budget: u64,
) -> Result<CmdOutput> {
    let v = read_input(&input.input)?;
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::BadInput("instance needs a \"field\" descriptor".into()))?,
    )?;
    let matrix = FqMatrix::from_json(
        &field,
        v.get("matrix")
            .ok_or_else(|| Error::BadInput("instance needs a \"matrix\"".into()))?,
    )?;
    let inputs = parse_inputs(
        &field,
        v.get("inputs")
            .ok_or_else(|| Error::BadInput("instance needs \"inputs\"".into()))?,
    )?;
    if inputs.is_empty() {
        return Err(Error::BadInput("\"inputs\" must not be empty".into()));
    }
    let n = inputs[0].length();
    let inner = Isometry::from_json(
        &field,
        n,
        v.get("inner")
            .ok_or_else(|| Error::BadInput("instance needs an \"inner\" isometry".into()))?,
    )?;
    let result = match variant {
        ConstructVariant::I => {
            let outer = match v.get("outer") {
                Some(m) => FqMatrix::from_json(&field, m)?,
                None => FqMatrix::identity(&field, matrix.rows()),
            };
            let scalar = match v.get("scalar") {
                Some(serde_json::Value::String(s)) => field.parse_element(s)?,
                Some(other) => field.element_from_json(other)?,
                None => field.one(),
            };
            let mp = MatrixProductCode::build(&inputs, &matrix)?;
            let sigma_prime = KronIsometry::new(outer, inner)?;
            construction1(&mp, &sigma_prime, scalar, budget)?
        }
        ConstructVariant::Ii => {
            let m_tilde = match v.get("m_tilde") {
                Some(m) => FqMatrix::from_json(&field, m)?,
                None => FqMatrix::identity(&field, matrix.rows()),
            };
            construction2(&matrix, &m_tilde, &inputs, &inner, budget)?
        }
        ConstructVariant::Iii => {
            let monomial = FqMatrix::from_json(
                &field,
                v.get("monomial").ok_or_else(|| {
                    Error::BadInput("construction iii needs a \"monomial\" matrix".into())
                })?,
            )?;
            construction3(&matrix, &monomial, &inputs, &inner, budget)?
        }
        ConstructVariant::Iv => {
            let diagonal = FqMatrix::from_json(
                &field,
                v.get("diagonal").ok_or_else(|| {
                    Error::BadInput("construction iv needs a \"diagonal\" matrix".into())
                })?,
            )?;
            let mode = v
                .get("mode")
                .and_then(|m| m.as_str())
                .unwrap_or("self_orthogonal");
            match mode {
                "self_orthogonal" => construction4_self_orthogonal(
                    &matrix, &diagonal, &inputs, &inner, budget,
                )?,
                "dual" => {
                    let dual =
                        construction4_dual_formula(&matrix, &diagonal, &inputs, &inner)?;
                    return Ok(CmdOutput::ok(with_schema(serde_json::json!({
                        "dual": dual.to_json(),
                    }))));
                }
                other => {
                    return Err(Error::BadInput(format!(
                        "unknown mode {other:?}; expected \"self_orthogonal\" or \"dual\""
                    )))
                }
            }
        }
    };
    Ok(CmdOutput::ok(with_schema(result.to_json())))
}

fn cmd_verify(args: &InputArgs) -> Result<CmdOutput> {
    let v = read_input(&args.input)?;
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::BadInput("input needs a \"field\" descriptor".into()))?,
    )?;
    let code = LinearCode::from_json(
        &field,
        v.get("code")
            .ok_or_else(|| Error::BadInput("input needs a \"code\"".into()))?,
    )?;
    let sigma = Isometry::from_json(
        &field,
        code.length(),
        v.get("sigma")
            .ok_or_else(|| Error::BadInput("input needs a \"sigma\" isometry".into()))?,
    )?;
    let self_orthogonal = code.is_self_orthogonal(&sigma)?;
    let dual_containing = code.is_dual_containing(&sigma)?;
    let hull = code.sigma_hull(&sigma)?;
    let json = with_schema(serde_json::json!({
        "length": code.length(),
        "dimension": code.dimension(),
        "self_orthogonal": self_orthogonal,
        "dual_containing": dual_containing,
        "hull_dimension": hull.dimension(),
    }));
    Ok(CmdOutput::ok(json))
}

fn cmd_distance(args: &InputArgs, budget: u64) -> Result<CmdOutput> {
    let v = read_input(&args.input)?;
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::BadInput("input needs a \"field\" descriptor".into()))?,
    )?;
    let code = LinearCode::from_json(
        &field,
        v.get("code")
            .ok_or_else(|| Error::BadInput("input needs a \"code\"".into()))?,
    )?;
    let report = code.min_distance(budget)?;
    Ok(CmdOutput::ok(with_schema(serde_json::json!({
        "length": code.length(),
        "dimension": code.dimension(),
        "distance": report.distance,
        "method": format!("{:?}", report.method),
        "words_enumerated": report.words_enumerated,
    }))))
}

fn cmd_reproduce(args: &ReproduceArgs, budget: u64) -> Result<CmdOutput> {
    if args.list {
        return Ok(CmdOutput::ok(with_schema(serde_json::json!({
            "items": reproduce::ITEMS,
        }))));
    }
    let item = args
        .item
        .as_deref()
        .ok_or_else(|| Error::BadInput("pass an item name or --list".into()))?;
    let outcome = if item == "table2" {
        reproduce::table2(args.base_q, args.s, args.trials, args.seed)?
    } else {
        reproduce::run(item, budget)?
    };
    let passed = outcome.passed;
    let json = with_schema(outcome.to_json());
    if passed {
        Ok(CmdOutput::ok(json))
    } else {
        Ok(CmdOutput::failed_check(json))
    }
}

fn cmd_catalog(sub: &CatalogCmd, path: &PathBuf) -> Result<CmdOutput> {
    let catalog = Catalog::open(path);
    match sub {
        CatalogCmd::Add(args) => {
            let (field, matrix) = read_field_matrix(&args.input)?;
            let provenance = Provenance::new(args.seed, args.trial);
            let record = match args.kind {
                CatalogKindArg::Quasi => {
                    let companion = match &args.companion {
                        Some(p) => read_matrix_file(&field, p)?,
                        None => FqMatrix::identity(&field, matrix.rows()),
                    };
                    CatalogRecord::quasi(&field, matrix, companion, args.e, provenance)?
                }
                CatalogKindArg::TauOd => CatalogRecord::tau_od(&field, matrix, provenance)?,
            };
            catalog.add(&record)?;
            Ok(CmdOutput::ok(with_schema(serde_json::json!({
                "added": record.to_json(),
                "catalog": path,
            }))))
        }
        CatalogCmd::List => {
            let records = catalog.list()?;
            let rows: Vec<serde_json::Value> = records
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "id": r.id,
                        "kind": r.kind.to_string(),
                        "field": format!("{}^{}", r.field.p, r.field.h),
                        "size": r.matrix.rows(),
                        "exponent": r.exponent,
                        "tool_version": r.provenance.tool_version,
                    })
                })
                .collect();
            Ok(CmdOutput::ok(with_schema(serde_json::json!({
                "count": rows.len(),
                "records": rows,
            }))))
        }
        CatalogCmd::Check => {
            let report = catalog.check()?;
            let clean = report.quarantined.is_empty();
            let json = with_schema(report.to_json());
            if clean {
                Ok(CmdOutput::ok(json))
            } else {
                Ok(CmdOutput::failed_check(json))
            }
        }
    }
}
