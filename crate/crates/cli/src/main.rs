mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use liegen_core::classical::ClassLabel;
use liegen_core::genconj::{
    e_of_class, verify_product_bound, BoundTable, GenError, GroupSpec, Problem, SeedOutcome, DEFAULT_TRIALS,
};
use liegen_core::reps::{
    build_for_group, check_theorem_mtp, generic_freeness_sample, sl2_classification, ModuleTag, RepError,
};
use liegen_core::TypeLabel;

use report::{derive_seeds, emit, Format, Report};

/// Exact verification of generation-by-conjugates bounds and generic
/// stabilizers for Lie algebras over prime fields.
#[derive(Parser, Debug)]
#[command(name = "liegen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for e conjugates of a class generating the derived subalgebra.
    Generate(GenerateArgs),
    /// Product-bound records for a group, or the published tables.
    Bounds(BoundsArgs),
    /// Generic stabilizers and the key inequality on a module.
    Stab(StabArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
struct GroupArgs {
    /// Root system type (A–G).
    #[arg(long = "type")]
    #[serde(rename = "type")]
    ty: Option<TypeLabel>,
    #[arg(long)]
    rank: Option<usize>,
    /// Characteristic.
    #[arg(long)]
    p: Option<u32>,
}

impl GroupArgs {
    fn spec(&self) -> Result<GroupSpec, CliError> {
        let (Some(ty), Some(rank), Some(p)) = (self.ty, self.rank, self.p) else {
            return Err(CliError::Usage("--type, --rank and --p are required".into()));
        };
        Ok(GroupSpec::new(ty, rank, p)?)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
struct SeedArgs {
    /// Explicit seeds (comma separated); overrides --seed/--num-seeds.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    seeds: Vec<u64>,
    /// User seed from which per-worker seeds are derived.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    num_seeds: usize,
}

impl OutputArgs {
    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

impl SeedArgs {
    fn resolve(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            derive_seeds(self.seed, self.num_seeds)
        } else {
            self.seeds.clone()
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
struct OutputArgs {
    /// Report format (default json; `bounds --table` prints text unless given).
    #[arg(long, value_enum)]
    #[serde(skip)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct GenerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    group: GroupArgs,
    /// Class: a partition such as "2^4,1^8" (optionally "[larger]"/"[smaller]"),
    /// "root", "toral:0^4,1^4" or "go_idempotent".
    #[arg(long = "class")]
    class: String,
    /// Number of conjugates; defaults to the class's e(x).
    #[arg(long)]
    e: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Degree of the field extension searched over; defaults to the smallest k with p^k ≥ 4.
    #[arg(long)]
    field_degree: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    seeds: SeedArgs,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
struct BoundsArgs {
    /// Print the bound table and the generation table.
    #[arg(long)]
    table: bool,
    #[command(flatten)]
    #[serde(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum StabCheck {
    /// Sampled generic stabilizer.
    Freeness,
    /// Class sweep of the inequality behind the theorem, with its hypothesis gate.
    Mtp,
    /// The SL_2 classification table (type A, rank 1).
    Sl2Table,
}

#[derive(Args, Debug, Clone, Serialize)]
struct StabArgs {
    #[command(flatten)]
    #[serde(flatten)]
    group: GroupArgs,
    /// Module descriptor: natural, dual:…, tensor:…,…, sym2:…, sym2_so_factor,
    /// adjoint_factor, ftwist:…, sl2:w=<int>.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    module: Option<String>,
    #[arg(long, value_enum, default_value_t = StabCheck::Freeness)]
    check: StabCheck,
    /// Samples per seed.
    #[arg(long, default_value_t = 16)]
    trials: usize,
    /// Largest weight for --check sl2-table (default 2p + 2).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    w_max: Option<u32>,
    /// Expected verdict; exit status 3 if it differs.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    expect: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    seeds: SeedArgs,
    #[command(flatten)]
    #[serde(skip)]
    output: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Classical(#[from] liegen_core::classical::ClassicalError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

/// A report and the exit status it implies.
struct Outcome {
    text: String,
    code: u8,
}

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;
const EXIT_FAILED: u8 = 3;

fn argv() -> Vec<String> {
    std::env::args().skip(1).collect()
}

fn generate(args: &GenerateArgs) -> Result<Outcome, CliError> {
    let spec = args.group.spec()?;
    let label: ClassLabel = args.class.parse()?;
    let e = match args.e {
        Some(0) => return Err(GenError::ZeroConjugates.into()),
        Some(e) => e,
        None => e_of_class(spec, &label)?,
    };
    let degree = args.field_degree.unwrap_or_else(|| liegen_core::genconj::default_field_degree(spec.p));
    let problem = Problem::for_class(spec, &label)?.with_field_degree(degree);
    let seeds = args.seeds.resolve();
    let outcomes = problem.search(e, args.trials, &seeds)?;
    let found = outcomes.iter().filter(|o| o.witness().is_some()).count();
    let replay_ok = outcomes.iter().filter_map(SeedOutcome::witness).all(|w| problem.replay(w).1);
    let verdict = if found > 0 { "witness_found" } else { "exhausted" };
    let summary = json!({
        "group": spec,
        "algebra": problem.description,
        "label": label,
        "e": e,
        "field_degree": problem.field_degree(),
        "target_dim": problem.target_dim(),
        "seeds_with_witness": found,
        "seeds_total": seeds.len(),
        "replay_verified": replay_ok,
        "verdict": verdict,
    });
    let report = Report::new(argv(), args, seeds).summary(summary).records(&outcomes);
    let code = if found > 0 && replay_ok { EXIT_OK } else { EXIT_EXHAUSTED };
    Ok(Outcome { text: report.render(args.output.format()), code })
}

fn bounds(args: &BoundsArgs) -> Result<Outcome, CliError> {
    if args.table {
        let table = BoundTable::published();
        let text = match args.output.format {
            Some(f) => Report::new(argv(), args, Vec::new()).summary(json!(table)).records(&table.bounds).render(f),
            None => table.render(),
        };
        return Ok(Outcome { text, code: EXIT_OK });
    }
    let spec = args.group.spec()?;
    let records = verify_product_bound(spec)?;
    let failures = records.iter().filter(|r| !r.ok).count();
    let max = records.iter().map(|r| r.product).max().unwrap_or(0);
    let summary = json!({
        "group": spec,
        "classes": records.len(),
        "failures": failures,
        "max_product": max,
        "bound": records.first().map(|r| r.bound),
        "all_ok": failures == 0,
    });
    let report = Report::new(argv(), args, Vec::new()).summary(summary).records(&records);
    Ok(Outcome { text: report.render(args.output.format()), code: if failures == 0 { EXIT_OK } else { EXIT_FAILED } })
}

fn stab(args: &StabArgs) -> Result<Outcome, CliError> {
    let spec = args.group.spec()?;
    let seeds = args.seeds.resolve();
    let (summary, records, verdict, failed) = match args.check {
        StabCheck::Sl2Table => {
            if spec.ty != TypeLabel::A || spec.rank != 1 {
                return Err(CliError::Usage("--check sl2-table needs --type A --rank 1".into()));
            }
            let rows = sl2_classification(spec.p, args.w_max.unwrap_or(2 * spec.p + 2), args.trials, &seeds)?;
            let ok = rows.iter().all(|r| r.matches);
            let verdict = if ok { "match" } else { "mismatch" }.to_string();
            let summary = json!({ "group": spec, "rows": rows.len(), "verdict": verdict });
            (summary, rows.iter().map(|r| serde_json::to_value(r).expect("row")).collect::<Vec<_>>(), verdict, !ok)
        }
        StabCheck::Freeness => {
            let tag = module_tag(args)?;
            let (_, m) = build_for_group(spec, &tag)?;
            let r = generic_freeness_sample(&m, args.trials, &seeds);
            let summary = json!({
                "group": spec,
                "module": r.module,
                "module_dim": r.module_dim,
                "kernel_dim": r.kernel_dim,
                "generic_stabilizer_dim": r.generic_stabilizer_dim(),
                "verdict": r.verdict,
            });
            let records = r.seeds.iter().map(|s| serde_json::to_value(s).expect("sample")).collect();
            (summary, records, r.verdict.to_string(), false)
        }
        StabCheck::Mtp => {
            let tag = module_tag(args)?;
            let r = check_theorem_mtp(spec, &tag)?;
            let verdict = match r.all_hold {
                None => "hypothesis_not_met",
                Some(true) => "pass",
                Some(false) => "fail",
            }
            .to_string();
            let summary = json!({
                "group": spec,
                "module": r.module,
                "hypothesis": r.hypothesis,
                "coverage": r.coverage,
                "verdict": verdict,
            });
            (
                summary,
                r.records.iter().map(|c| serde_json::to_value(c).expect("record")).collect(),
                verdict,
                r.all_hold == Some(false),
            )
        }
    };
    let expect_failed = args.expect.as_deref().is_some_and(|e| e != verdict.as_str());
    let mut report = Report::new(argv(), args, seeds).summary(summary);
    report.records = records;
    let code = if expect_failed || failed { EXIT_FAILED } else { EXIT_OK };
    Ok(Outcome { text: report.render(args.output.format()), code })
}

fn module_tag(args: &StabArgs) -> Result<ModuleTag, CliError> {
    let s = args.module.as_deref().ok_or_else(|| CliError::Usage("--module is required".into()))?;
    Ok(s.parse()?)
}

fn configure_threads() {
    if let Some(n) = std::env::var("LIEGEN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let (result, out) = match &cli.command {
        Command::Generate(a) => (generate(a), a.output.out.clone()),
        Command::Bounds(a) => (bounds(a), a.output.out.clone()),
        Command::Stab(a) => (stab(a), a.output.out.clone()),
    };
    match result {
        Ok(o) => {
            if let Err(e) = emit(&o.text, out.as_deref()) {
                eprintln!("error: {}", CliError::from(e));
                return ExitCode::from(EXIT_INVALID);
            }
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
