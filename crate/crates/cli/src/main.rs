//! `takagi`: exact level-set computations for the Takagi function.
//!
//! Every subcommand except `graph` and `humps --csv` prints one JSON object
//! on stdout: `{command, inputs, output, certificates, exit_code}`. Rationals
//! are always strings. A one-line summary goes to stderr.
//!
//! Exit codes: 0 success, 2 domain or parse error, 3 budget exhausted (the
//! partial result is still printed).

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use takagi::engine::construct_witness_with_budget;
use takagi::{
    alternative_expansions, canonical_expansion, cardinality, enumerate_level_set,
    expansion_to_abscissa, expansion_to_ordinate, format_rational, is_two_point_level_set,
    level_set_cover, local_level_set, parse_rational, rat, s2_measure_bounds, takagi,
    takagi_partial, to_f64, write_humps_csv, Cardinality, HumpFilter, Membership, Rational,
    TakagiError, DEFAULT_BUDGET,
};

const EXIT_DOMAIN: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "takagi", version, about = "Exact level sets of the Takagi function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact value T(x), optionally with the partial sum T_k and its slope
    Eval(EvalArgs),
    /// Canonical Takagi expansion of an ordinate
    Expand(ExpandArgs),
    /// Solutions of T(x) = y from the canonical and alternative expansions
    Solve(SolveArgs),
    /// Certified cardinality of the level set L(y)
    Cardinality(CardinalityArgs),
    /// Exact points of a finite level set with an interval-oracle cover
    Levelset(LevelsetArgs),
    /// Enumerate humps up to a given order
    Humps(HumpsArgs),
    /// Certified bounds on the measure of the two-point ordinates
    Measure(MeasureArgs),
    /// An ordinate whose level set has the given even cardinality
    Witness(WitnessArgs),
    /// CSV of exact values at the dyadic points i/2^depth
    Graph(GraphArgs),
}

#[derive(Args, Serialize)]
struct EvalArgs {
    /// Abscissa in [0, 1], as p/q
    #[arg(allow_hyphen_values = true)]
    x: String,
    /// Also report T_k(x) and its slope
    #[arg(long)]
    partial_k: Option<usize>,
}

#[derive(Args, Serialize)]
struct ExpandArgs {
    /// Ordinate in [0, 2/3], as p/q
    #[arg(allow_hyphen_values = true)]
    y: String,
    #[arg(long, default_value_t = 64)]
    max_terms: usize,
}

#[derive(Args, Serialize)]
struct SolveArgs {
    #[arg(allow_hyphen_values = true)]
    y: String,
    /// Include alternative expansions, not just the canonical one
    #[arg(long)]
    all: bool,
    /// Rewrite depth for alternative expansions
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, default_value_t = 64)]
    max_terms: usize,
}

#[derive(Args, Serialize)]
struct CardinalityArgs {
    #[arg(allow_hyphen_values = true)]
    y: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args, Serialize)]
struct LevelsetArgs {
    #[arg(allow_hyphen_values = true)]
    y: String,
    /// Subdivision depth of the interval oracle
    #[arg(long, default_value_t = 30)]
    depth: u32,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Report the local level set of the leftmost solution instead
    #[arg(long)]
    local: bool,
    #[arg(long, default_value_t = 64)]
    max_terms: usize,
}

#[derive(Args, Serialize)]
struct HumpsArgs {
    #[arg(long, default_value_t = 12)]
    max_order: u64,
    /// all, first-generation, leading, first-generation-leading or non-subsidiary
    #[arg(long, default_value = "first-generation-leading")]
    filter: String,
    /// Write CSV instead of JSON
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Serialize)]
struct MeasureArgs {
    /// Nesting depth of the removed-interval system
    #[arg(long, default_value_t = 3)]
    depth_n: u64,
    #[arg(long, default_value_t = 40)]
    max_k: u64,
}

#[derive(Args, Serialize)]
struct WitnessArgs {
    /// Target cardinality, an even number
    cardinality: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args, Serialize)]
struct GraphArgs {
    #[arg(long, default_value_t = 10)]
    depth: u32,
}

#[derive(Serialize)]
struct CommandResult {
    command: &'static str,
    inputs: Value,
    output: Value,
    certificates: Vec<String>,
    exit_code: u8,
}

/// A successful payload, or one cut short by the budget.
struct Reply {
    output: Value,
    certificates: Vec<String>,
    exhausted: bool,
    summary: String,
}

impl Reply {
    fn new(output: Value, summary: String) -> Self {
        Self { output, certificates: Vec::new(), exhausted: false, summary }
    }
}

type Outcome = Result<Reply, TakagiError>;

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn s(x: &Rational) -> String {
    format_rational(x)
}

fn eval(a: &EvalArgs) -> Outcome {
    let x = parse_rational(&a.x)?;
    let t = takagi(&x)?;
    let mut out = json!({ "x": s(&x), "value": s(&t) });
    if let Some(k) = a.partial_k {
        out["partial"] = to_json(&takagi_partial(&x, k)?);
    }
    Ok(Reply::new(out, format!("T({}) = {}", s(&x), s(&t))))
}

fn expand(a: &ExpandArgs) -> Outcome {
    let y = parse_rational(&a.y)?;
    let e = canonical_expansion(&y, a.max_terms)?;
    let abscissa = if e.is_exact() { Some(s(&expansion_to_abscissa(&e)?)) } else { None };
    let ordinate = if e.is_exact() { Some(s(&expansion_to_ordinate(&e)?)) } else { None };
    let tail = match e.tail {
        takagi::Tail::Terminated => "terminated",
        takagi::Tail::Periodic { .. } => "periodic",
        takagi::Tail::Truncated => "truncated",
    };
    let summary = format!("{} = {e}", s(&y));
    let out = json!({
        "ordinate": s(&y),
        "expansion": e.to_string(),
        "terms": e.terms,
        "tail": tail,
        "twos": e.count_twos(),
        "abscissa": abscissa,
        "value": ordinate,
    });
    Ok(Reply::new(out, summary))
}

fn solve(a: &SolveArgs) -> Outcome {
    let y = parse_rational(&a.y)?;
    let depth = if a.all { a.depth } else { 0 };
    let solutions = alternative_expansions(&y, depth, a.max_terms)?;
    let mut rows = Vec::new();
    let mut abscissae = std::collections::BTreeSet::new();
    for sol in &solutions {
        let verified = match &sol.abscissa {
            Some(x) => {
                abscissae.insert(x.clone());
                Some(takagi(x)? == y)
            }
            None => None,
        };
        rows.push(json!({
            "expansion": sol.expansion.to_string(),
            "abscissa": sol.abscissa.as_ref().map(s),
            "rewrites": sol.rewrites,
            "verified": verified,
        }));
    }
    let abscissae: Vec<String> = abscissae.iter().map(s).collect();
    let summary = format!("{} expansions, {} distinct solutions", rows.len(), abscissae.len());
    Ok(Reply::new(json!({ "ordinate": s(&y), "solutions": rows, "abscissae": abscissae }), summary))
}

fn cardinality_cmd(a: &CardinalityArgs) -> Outcome {
    let y = parse_rational(&a.y)?;
    let c = cardinality(&y, a.budget)?;
    let mut out = to_json(&c);
    let mut exhausted = matches!(c.cardinality, Cardinality::AtLeast(_));
    if y > rat(0, 1) && y < rat(1, 2) {
        let m = is_two_point_level_set(&y, a.budget)?;
        exhausted |= m.verdict == Membership::Unknown;
        out["two_point"] = to_json(&m);
    }
    let summary = format!("|L({})| = {:?} ({})", s(&y), c.cardinality, c.certificate);
    Ok(Reply { output: out, certificates: c.certificates, exhausted, summary })
}

fn levelset(a: &LevelsetArgs) -> Outcome {
    let y = parse_rational(&a.y)?;
    if a.local {
        let e = canonical_expansion(&y, a.max_terms)?;
        let set = local_level_set(&e)?;
        let summary = format!("local level set of {}: {:?}", s(&set.seed), set.cardinality);
        let mut out = to_json(&set);
        out["expansion"] = json!(e.to_string());
        return Ok(Reply::new(out, summary));
    }
    let cover = level_set_cover(&y, a.depth)?;
    let mut out = json!({ "ordinate": s(&y), "cover": to_json(&cover) });
    let mut certificates = Vec::new();
    let mut exhausted = false;
    let summary = match enumerate_level_set(&y, a.budget) {
        Ok(e) => {
            let n = e.points.len();
            certificates = e.certificates.clone();
            out["enumeration"] = to_json(&e);
            format!("{n} points, {} oracle clusters", cover.clusters.len())
        }
        Err(TakagiError::InfiniteLevelSet(_)) => {
            out["enumeration"] = Value::Null;
            format!("infinite level set, {} oracle clusters", cover.clusters.len())
        }
        Err(TakagiError::BudgetExhausted { .. }) => {
            exhausted = true;
            out["enumeration"] = Value::Null;
            format!("budget exhausted, {} oracle clusters", cover.clusters.len())
        }
        Err(e) => return Err(e),
    };
    Ok(Reply { output: out, certificates, exhausted, summary })
}

fn humps(a: &HumpsArgs) -> Outcome {
    let filter: HumpFilter = a.filter.parse()?;
    let list = takagi::enumerate_humps(a.max_order, filter)?;
    let mut counts = vec![0u64; a.max_order as usize];
    for h in &list {
        counts[h.order as usize - 1] += 1;
    }
    let summary = format!("{} humps of order at most {}", list.len(), a.max_order);
    Ok(Reply::new(json!({ "counts_by_order": counts, "humps": to_json(&list) }), summary))
}

fn humps_csv(a: &HumpsArgs) -> Result<(), TakagiError> {
    let filter: HumpFilter = a.filter.parse()?;
    let list = takagi::enumerate_humps(a.max_order, filter)?;
    write_humps_csv(&list, io::stdout().lock())?;
    eprintln!("{} humps of order at most {}", list.len(), a.max_order);
    Ok(())
}

fn measure(a: &MeasureArgs) -> Outcome {
    let b = s2_measure_bounds(a.depth_n, a.max_k)?;
    let summary = format!("{:.6} <= measure <= {:.6}", to_f64(&b.lower), to_f64(&b.upper));
    Ok(Reply::new(to_json(&b), summary))
}

fn witness(a: &WitnessArgs) -> Outcome {
    if a.cardinality == 0 || a.cardinality % 2 == 1 {
        return Err(TakagiError::Domain(format!(
            "finite level sets have a positive even size, got {}",
            a.cardinality
        )));
    }
    let w = construct_witness_with_budget(a.cardinality / 2, a.budget)?;
    let exhausted = matches!(w.validation.cardinality, Cardinality::AtLeast(_));
    let summary = format!("|L({})| = {:?}", s(&w.ordinate), w.validation.cardinality);
    Ok(Reply { certificates: w.validation.certificates.clone(), output: to_json(&w), exhausted, summary })
}

fn graph(a: &GraphArgs) -> Result<(), TakagiError> {
    if a.depth > 24 {
        return Err(TakagiError::CapExceeded(format!("graph depth {} above 24", a.depth)));
    }
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    let io = |e: csv::Error| TakagiError::Io(e.to_string());
    w.write_record(["x_rational", "x_decimal", "y_rational", "y_decimal"]).map_err(io)?;
    let n = 1i64 << a.depth;
    for i in 0..=n {
        let x = rat(i, n);
        let y = takagi(&x)?;
        w.write_record([s(&x), to_f64(&x).to_string(), s(&y), to_f64(&y).to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| TakagiError::Io(e.to_string()))?;
    eprintln!("{} points", n + 1);
    Ok(())
}

fn exit_code_for(e: &TakagiError) -> u8 {
    match e {
        TakagiError::BudgetExhausted { .. } => EXIT_BUDGET,
        _ => EXIT_DOMAIN,
    }
}

fn emit(command: &'static str, inputs: Value, outcome: Outcome) -> ExitCode {
    let result = match outcome {
        Ok(r) => {
            eprintln!("{}", r.summary);
            let exit_code = if r.exhausted { EXIT_BUDGET } else { 0 };
            CommandResult { command, inputs, output: r.output, certificates: r.certificates, exit_code }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let exit_code = exit_code_for(&e);
            CommandResult { command, inputs, output: json!({ "error": e.to_string() }), certificates: Vec::new(), exit_code }
        }
    };
    let text = serde_json::to_string_pretty(&result).expect("serializable");
    let mut out = io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = writeln!(out, "{text}");
    ExitCode::from(result.exit_code)
}

fn plain(outcome: Result<(), TakagiError>) -> ExitCode {
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Eval(a) => emit("eval", to_json(a), eval(a)),
        Command::Expand(a) => emit("expand", to_json(a), expand(a)),
        Command::Solve(a) => emit("solve", to_json(a), solve(a)),
        Command::Cardinality(a) => emit("cardinality", to_json(a), cardinality_cmd(a)),
        Command::Levelset(a) => emit("levelset", to_json(a), levelset(a)),
        Command::Humps(a) if a.csv => plain(humps_csv(a)),
        Command::Humps(a) => emit("humps", to_json(a), humps(a)),
        Command::Measure(a) => emit("measure", to_json(a), measure(a)),
        Command::Witness(a) => emit("witness", to_json(a), witness(a)),
        Command::Graph(a) => plain(graph(a)),
    }
}
