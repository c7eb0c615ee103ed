use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sinkbench::action::AutAction;
use sinkbench::bch::{bch_series, decompose_by_degree, engel_word};
use sinkbench::catalog::Catalog;
use sinkbench::group::FiniteGroup;
use sinkbench::report::{CheckRecord, Outcome, Report};
use sinkbench::series;
use sinkbench::sink::{is_engel_element, smallest_sink, verify_sink};
use sinkbench::spec_text::{parse_document, ActionSpec, GroupSpec, SpecDocument};
use sinkbench::suites::{self, CheckJob, SuiteContext};
use sinkbench::zassenhaus::{ad_bound_search, graded_lie_with_seed, verify_power_identities, zassenhaus_filtration};

#[derive(Debug, Parser)]
#[command(
    name = "sinkbench",
    version,
    about = "Verification workbench for Engel sinks, Zassenhaus filtrations and BCH identities"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every sampled check, in hex (`0x…`) or decimal.
    #[arg(long, global = true, value_parser = parse_seed, default_value = "0xe9e1")]
    seed: u64,
    /// Worker threads for `verify`; defaults to the available parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smallest Engel sink of one element.
    Sink {
        /// Group spec file, or `catalog:NAME`.
        #[arg(long)]
        group: String,
        /// Element as cycles, a generator word, or `#id`.
        #[arg(long)]
        element: String,
    },
    /// Run verification suites on the catalog or on given specs.
    Verify(VerifyArgs),
    /// Zassenhaus filtration of a p-group.
    Filtration {
        #[arg(long)]
        group: String,
        /// The prime; inferred from the group order when omitted.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        element: Option<String>,
    },
    /// Graded Lie algebra of the Zassenhaus filtration.
    Lie {
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: Option<usize>,
        /// Element whose image is analysed for the power identities and the ad bound.
        #[arg(long)]
        element: Option<String>,
    },
    /// Coefficients of the BCH series, or of an Engel word by x-degree.
    Bch {
        /// Truncation weight.
        #[arg(long = "W", alias = "w", default_value_t = 4)]
        w: usize,
        /// Engel length; prints the parts of [x + y,_l z]_G instead.
        #[arg(long)]
        l: Option<usize>,
    },
    /// Exact solution of the node system with integrality checks.
    Vandermonde {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        /// Largest t for which β_t is checked.
        #[arg(long = "T", alias = "t", default_value_t = suites::BETA_T_MAX)]
        t: usize,
        /// Largest u for the tail integrality check.
        #[arg(long = "U", alias = "u", default_value_t = suites::TAIL_U_MAX)]
        u: usize,
    },
    /// The linearization identity in the free Lie algebra on x, y, z.
    Linearize {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long = "W", alias = "w", default_value_t = 6)]
        w: usize,
    },
    /// Inspect the bundled catalog.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite to run; repeatable.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Run every suite.
    #[arg(long)]
    all: bool,
    /// Verify one group (file or `catalog:NAME`) with the per-group checks.
    #[arg(long)]
    group: Option<String>,
    /// Verify one action (file or `catalog:NAME`) with the per-action checks.
    #[arg(long)]
    action: Option<String>,
    /// Keep only actions whose acting group is elementary abelian of order q².
    #[arg(long)]
    q: Option<usize>,
    /// List the registered suites.
    #[arg(long)]
    list: bool,
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// Every bundled group and action with its tags.
    List,
    /// The canonical spec text of one entry.
    Show { name: String },
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("invalid seed '{s}': {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Report(report)) => {
            emit(&cli, &report);
            if report.has_failures() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Ok(Output::Plain(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

enum Output {
    Report(Report),
    Plain(String),
}

fn emit(cli: &Cli, report: &Report) {
    match cli.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
}

fn run(cli: &Cli) -> Result<Output, UsageError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Sink { group, element } => {
            let g = resolve_group(group)?;
            let x = g.parse_element(element)?;
            let command = format!("sink --group {group} --element {element}");
            Ok(Output::Report(Report::new(command, seed, vec![sink_record(&g, x)])))
        }
        Command::Verify(args) => verify(cli, args).map(Output::Report),
        Command::Filtration { group, p, element } => {
            let g = resolve_group(group)?;
            let p = infer_prime(&g, *p)?;
            let x = element.as_deref().map(|e| g.parse_element(e)).transpose()?;
            let mut command = format!("filtration --group {group} --p {p}");
            if let Some(e) = element {
                command.push_str(&format!(" --element {e}"));
            }
            Ok(Output::Report(Report::new(command, seed, filtration_records(g, p, x)?)))
        }
        Command::Lie { group, p, element } => {
            let g = resolve_group(group)?;
            let p = infer_prime(&g, *p)?;
            let x = element.as_deref().map(|e| g.parse_element(e)).transpose()?;
            let mut command = format!("lie --group {group} --p {p}");
            if let Some(e) = element {
                command.push_str(&format!(" --element {e}"));
            }
            Ok(Output::Report(Report::new(command, seed, lie_records(g, p, x, seed)?)))
        }
        Command::Bch { w, l } => {
            let command = match l {
                Some(l) => format!("bch --W {w} --l {l}"),
                None => format!("bch --W {w}"),
            };
            Ok(Output::Report(Report::new(command, seed, vec![bch_record(*w, *l)?])))
        }
        Command::Vandermonde { k, p, m, t, u } => {
            if *t < *k || *u < *k {
                return Err(UsageError(format!("--T and --U must be at least --k = {k}")));
            }
            let outcome = suites::vandermonde_outcome(*k, *p, *m, *t, *u);
            let record = CheckRecord::new(
                format!("vandermonde/k{k}-p{p}-m{m}"),
                "β_t = Σ c_i x_i^t is a p-integer, ν_p(den c_i) = m·i(2k−i−1)/2 and c_i p^{imu} is a p-integer for u ≥ k",
                outcome,
            );
            let command = format!("vandermonde --k {k} --p {p} --m {m} --T {t} --U {u}");
            Ok(Output::Report(Report::new(command, seed, vec![record])))
        }
        Command::Linearize { l, k, p, m, w } => {
            let record = CheckRecord::new(
                format!("linearization/l{l}-k{k}-p{p}-m{m}-w{w}"),
                "x-degrees 1..k−1 vanish and the degree-t part is β_t·w_t",
                suites::linearization_outcome(*l, *k, *p, *m, *w),
            );
            let command = format!("linearize --l {l} --k {k} --p {p} --m {m} --W {w}");
            Ok(Output::Report(Report::new(command, seed, vec![record])))
        }
        Command::Catalog { command } => catalog_command(cli.format, command),
    }
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<Report, UsageError> {
    let ctx = SuiteContext::new(cli.seed);
    let registry = suites::registry();
    if args.list {
        let records = registry
            .iter()
            .map(|s| {
                let n = s.jobs(&ctx).len();
                CheckRecord::new(
                    format!("suite/{}", s.name()),
                    s.description(),
                    Outcome::skipped(&format!("listed only; {n} checks")),
                )
            })
            .collect();
        return Ok(Report::new("verify --list", cli.seed, records));
    }
    let mut jobs: Vec<CheckJob> = Vec::new();
    let mut command = String::from("verify");
    if args.all {
        command.push_str(" --all");
        for s in &registry {
            jobs.extend(s.jobs(&ctx));
        }
    } else {
        for name in &args.suites {
            let suite = registry
                .iter()
                .find(|s| s.name() == name)
                .ok_or_else(|| UsageError(format!("unknown suite '{name}' (see `verify --list`)")))?;
            command.push_str(&format!(" --suite {name}"));
            jobs.extend(suite.jobs(&ctx));
        }
    }
    if let Some(spec) = &args.group {
        let g = resolve_group(spec)?;
        command.push_str(&format!(" --group {spec}"));
        jobs.extend(suites::group_core_jobs(&g, None));
        jobs.extend(suites::sink_jobs(&g));
        jobs.extend(suites::zassenhaus_jobs(&g, cli.seed));
    }
    if let Some(spec) = &args.action {
        let act = Arc::new(resolve_action(spec)?);
        command.push_str(&format!(" --action {spec}"));
        jobs.extend(suites::lemma_jobs(&act));
        jobs.extend(suites::theorem_jobs(&act, (None, None)));
        jobs.extend(suites::coprime_sink_jobs(&act, (None, None)));
    }
    if let Some(q) = args.q {
        command.push_str(&format!(" --q {q}"));
        let keep: Vec<String> = ctx
            .catalog
            .actions()
            .iter()
            .filter(|e| {
                ctx.catalog
                    .action(&e.name)
                    .is_ok_and(|a| a.actor_q_squared() == Some(q))
            })
            .map(|e| e.name.clone())
            .collect();
        let action_names: Vec<&str> = ctx.catalog.actions().iter().map(|e| e.name.as_str()).collect();
        jobs.retain(|j| {
            let subject = j.id.split('/').nth(1).unwrap_or("");
            !action_names.contains(&subject) || keep.iter().any(|k| k == subject)
        });
    }
    if jobs.is_empty() && !args.all && args.suites.is_empty() && args.group.is_none() && args.action.is_none() {
        return Err(UsageError(
            "nothing to verify: pass --all, --suite, --group or --action".into(),
        ));
    }
    let threads = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let records = suites::run_jobs(jobs, threads);
    Ok(Report::new(command, cli.seed, records))
}

/// Reads a spec file, or the bundled catalog for `catalog:NAME`.
fn load_document(path: &str) -> Result<SpecDocument, UsageError> {
    let text = std::fs::read_to_string(Path::new(path)).map_err(|e| UsageError(format!("{path}: {e}")))?;
    parse_document(&text).map_err(|e| UsageError(format!("{path}: {e}")))
}

fn resolve_group(spec: &str) -> Result<Arc<FiniteGroup>, UsageError> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return Ok(Catalog::bundled().group(name)?);
    }
    let doc = load_document(spec)?;
    let g: &GroupSpec = match doc.groups.as_slice() {
        [g] => g,
        [] => return Err(UsageError(format!("{spec}: no group block"))),
        _ => return Err(UsageError(format!("{spec}: expected exactly one group block"))),
    };
    Ok(Arc::new(FiniteGroup::load(g)?))
}

/// Resolves an action; its target and actor are looked up in the same file
/// first and in the catalog otherwise.
fn resolve_action(spec: &str) -> Result<AutAction, UsageError> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return Ok(Catalog::bundled().action(name)?);
    }
    let doc = load_document(spec)?;
    let a: &ActionSpec = match doc.actions.as_slice() {
        [a] => a,
        [] => return Err(UsageError(format!("{spec}: no action block"))),
        _ => return Err(UsageError(format!("{spec}: expected exactly one action block"))),
    };
    let lookup = |name: &str| -> Result<Arc<FiniteGroup>, UsageError> {
        match doc.groups.iter().find(|g| g.name == name) {
            Some(g) => Ok(Arc::new(FiniteGroup::load(g)?)),
            None => Ok(Catalog::bundled().group(name)?),
        }
    };
    Ok(AutAction::from_spec(a, lookup(&a.target)?, lookup(&a.actor)?)?)
}

fn infer_prime(g: &FiniteGroup, p: Option<usize>) -> Result<usize, UsageError> {
    let primes = series::prime_divisors(g.order());
    match (p, primes.as_slice()) {
        (Some(p), [q]) if p == *q => Ok(p),
        (None, [q]) => Ok(*q),
        _ => Err(UsageError(format!(
            "{} (order {}) is not a p-group{}",
            g.name(),
            g.order(),
            p.map_or(String::new(), |p| format!(" for p = {p}"))
        ))),
    }
}

fn sink_record(g: &FiniteGroup, x: usize) -> CheckRecord {
    let s = smallest_sink(g, x);
    let mut outcome = verify_sink(g, &s);
    let witnesses: serde_json::Map<String, Value> = s
        .witnesses
        .iter()
        .map(|(&m, &k)| (g.label(m).to_string(), json!(k)))
        .collect();
    let extra = json!({
        "group": g.name(),
        "element": g.label(x),
        "sink": s.sink.iter().map(|&m| g.label(m)).collect::<Vec<_>>(),
        "sink_size": s.sink.len(),
        "witnesses": witnesses,
        "max_tail": s.max_tail(),
        "engel_element": is_engel_element(g, x),
    });
    outcome.details = merge(outcome.details, extra);
    CheckRecord::new(
        format!("sink/{}/{}", g.name(), g.label(x)),
        "smallest Engel sink: x ↦ [x,g] maps it onto itself and every member recurs",
        outcome,
    )
}

fn merge(a: Value, b: Value) -> Value {
    match (a, b) {
        (Value::Object(mut a), Value::Object(b)) => {
            a.extend(b);
            Value::Object(a)
        }
        (_, b) => b,
    }
}

fn filtration_records(g: Arc<FiniteGroup>, p: usize, x: Option<usize>) -> Result<Vec<CheckRecord>, UsageError> {
    let f = zassenhaus_filtration(g.clone(), p)?;
    let name = g.name().to_string();
    let mut centrality = f.check_strong_centrality();
    centrality.details = merge(
        centrality.details,
        json!({
            "term_orders": f.terms().iter().map(|t| t.order()).collect::<Vec<_>>(),
            "dimensions": f.dimensions(),
        }),
    );
    let mut records = vec![
        CheckRecord::new(
            format!("filtration/{name}/strong-centrality"),
            "[G_i, G_j] ≤ G_{i+j} for all i, j",
            centrality,
        ),
        CheckRecord::new(
            format!("filtration/{name}/elementary-factors"),
            "G_i/G_{i+1} is elementary abelian and G_i^p ≤ G_{ip}",
            f.check_elementary_factors(),
        ),
    ];
    if let Some(x) = x {
        let d = f.delta(x);
        records.push(CheckRecord::new(
            format!("filtration/{name}/degree/{}", g.label(x)),
            "δ(u) is the i with u ∈ G_i \\ G_{i+1}",
            Outcome::pass(json!({ "element": g.label(x), "delta": d.map_or(json!("inf"), |d| json!(d)) })),
        ));
    }
    Ok(records)
}

fn lie_records(g: Arc<FiniteGroup>, p: usize, x: Option<usize>, seed: u64) -> Result<Vec<CheckRecord>, UsageError> {
    let f = zassenhaus_filtration(g.clone(), p)?;
    let l = graded_lie_with_seed(&f, seed)?;
    let name = g.name().to_string();
    let gens: Vec<_> = (0..l.dimensions().first().copied().unwrap_or(0))
        .map(|a| l.basis_vector(a))
        .collect();
    let mut axioms = l.check_axioms();
    axioms.details = merge(
        axioms.details,
        json!({
            "dimensions": l.dimensions(),
            "generated_dimensions": l.generated_dimensions(),
            "basis_representatives": (1..=l.top_degree())
                .map(|i| l.representatives(i).iter().map(|&r| g.label(r).to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "degree_one_chain": format!("{:?}", l.iterated_action_nilpotency(&gens)),
        }),
    );
    let mut records = vec![CheckRecord::new(
        format!("lie/{name}/axioms"),
        "[x,x] = 0, [x,y] = −[y,x] and the Jacobi identity on all basis triples",
        axioms,
    )];
    if let Some(x) = x {
        let label = g.label(x).to_string();
        records.push(CheckRecord::new(
            format!("lie/{name}/{label}/power-identities"),
            "δ(u^p) ≥ p·δ(u) and [x, ū^p] = [x,_p ū]",
            verify_power_identities(&f, &l, x),
        ));
        records.push(CheckRecord::new(
            format!("lie/{name}/{label}/ad-bound"),
            "[[nb,_i g], g^{p^k}] = 1 on a coset Nb of index p^m implies ad(ḡ) nilpotent of index ≤ i + m + p^k",
            ad_bound_search(&f, &l, x),
        ));
    }
    Ok(records)
}

fn bch_record(w: usize, l: Option<usize>) -> Result<CheckRecord, UsageError> {
    match l {
        None => {
            let s = bch_series(w)?;
            Ok(CheckRecord::new(
                format!("bch/W{w}"),
                "log(e^X e^Y) on the Lyndon basis, truncated at weight W",
                Outcome::pass(json!({ "W": w, "coefficients": s.to_json() })),
            ))
        }
        Some(l) => {
            let e = engel_word(l, w)?;
            let parts: Vec<Value> = decompose_by_degree(&e, "x")?
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(t, s)| json!({ "x_degree": t, "coefficients": s.to_json() }))
                .collect();
            Ok(CheckRecord::new(
                format!("bch/engel-l{l}-W{w}"),
                "[x + y,_l z]_G by degree in x, truncated at weight W",
                Outcome::pass(json!({ "W": w, "l": l, "parts": parts })),
            ))
        }
    }
}

fn catalog_command(format: Format, command: &CatalogCommand) -> Result<Output, UsageError> {
    let cat = Catalog::bundled();
    match command {
        CatalogCommand::List => {
            let groups: Vec<Value> = cat
                .groups()
                .iter()
                .map(|e| json!({ "name": e.name, "order": e.expected.order, "tags": e.expected.tags, "actions": e.actions }))
                .collect();
            let actions: Vec<Value> = cat
                .actions()
                .iter()
                .map(|e| json!({ "name": e.name, "target": e.target, "actor": e.actor, "tags": e.expected.tags }))
                .collect();
            let text = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&json!({ "groups": groups, "actions": actions }))?;
                    s.push('\n');
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    for e in cat.groups() {
                        s.push_str(&format!(
                            "group  {:<10} order {:<4} {}\n",
                            e.name,
                            e.expected.order,
                            e.expected.tags.join(",")
                        ));
                    }
                    for e in cat.actions() {
                        s.push_str(&format!(
                            "action {:<16} {} on {}  {}\n",
                            e.name,
                            e.actor,
                            e.target,
                            e.expected.tags.join(",")
                        ));
                    }
                    s
                }
            };
            Ok(Output::Plain(text))
        }
        CatalogCommand::Show { name } => {
            let text = match cat.entry(name) {
                Ok(_) => cat.group_spec(name)?.to_string(),
                Err(_) => cat.action_spec(name)?.to_string(),
            };
            Ok(Output::Plain(text))
        }
    }
}
