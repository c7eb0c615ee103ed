//! Verification suites over the bundled catalog.
//!
//! Each suite expands into independent check jobs. Jobs run on a worker pool
//! and the records are sorted by check id, so the report does not depend on
//! scheduling.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::action::{self, semidirect_product, AutAction};
use crate::bch::{bch_series, engel_word, substitute_zero};
use crate::catalog::{check_expectations, Catalog, GroupExpectation};
use crate::freelie::{int, rat, FreeLie, LieSeries};
use crate::group::FiniteGroup;
use crate::linearize::{beta_sequence, linearization_identity_check, solve_system, valuation_checks};
use crate::report::{rational_string, CheckRecord, Outcome, Verdict};
use crate::scaled::{valuation_profile, ModelElement, ScaledModel};
use crate::series;
use crate::sink::{self, baer_check, smallest_sink, verify_sink, TheoremReport};
use crate::zassenhaus::{
    self, ad_bound_search, graded_lie_with_seed, verify_power_identities, zassenhaus_filtration, GradedLie, ZFiltration,
};

/// Largest catalog group covered by the sink suite.
pub const SINK_ORDER_LIMIT: usize = 200;
/// Largest group whose normal subgroups are scanned exhaustively.
pub const NORMAL_SCAN_LIMIT: usize = 100;
/// Largest `p`-group covered by the filtration suite.
pub const PGROUP_ORDER_LIMIT: usize = 256;
/// Random triples per parameter set in the scaled-model suite.
pub const SCALED_TRIPLES: usize = 1000;

pub struct SuiteContext {
    pub seed: u64,
    pub catalog: &'static Catalog,
}

impl SuiteContext {
    pub fn new(seed: u64) -> Self {
        SuiteContext {
            seed,
            catalog: Catalog::bundled(),
        }
    }
}

/// One deferred check.
pub struct CheckJob {
    pub id: String,
    pub anchor: &'static str,
    run: Box<dyn FnOnce() -> Outcome + Send>,
}

impl CheckJob {
    pub fn new(id: impl Into<String>, anchor: &'static str, run: impl FnOnce() -> Outcome + Send + 'static) -> Self {
        CheckJob {
            id: id.into(),
            anchor,
            run: Box::new(run),
        }
    }

    /// Runs the check; a panic becomes a `FAIL` carrying the panic message.
    pub fn run(self) -> CheckRecord {
        let outcome = catch_unwind(AssertUnwindSafe(self.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome::fail(json!({}), json!({ "panic": msg }))
        });
        CheckRecord::new(self.id, self.anchor, outcome)
    }
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn jobs(&self, ctx: &SuiteContext) -> Vec<CheckJob>;
}

pub fn registry() -> Vec<Box<dyn Suite>> {
    vec![
        Box::new(GroupCoreSuite),
        Box::new(ActionLemmaSuite),
        Box::new(SinkSuite),
        Box::new(WardEngelSuite),
        Box::new(CoprimeSinkSuite),
        Box::new(ZassenhausSuite),
        Box::new(BchSuite),
        Box::new(VandermondeSuite),
        Box::new(LinearizationSuite),
        Box::new(ScaledModelSuite),
    ]
}

pub fn find_suite(name: &str) -> Option<Box<dyn Suite>> {
    registry().into_iter().find(|s| s.name() == name)
}

/// Runs the jobs on `threads` workers and returns records sorted by id.
pub fn run_jobs(jobs: Vec<CheckJob>, threads: usize) -> Vec<CheckRecord> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    let mut records: Vec<CheckRecord> = pool.install(|| jobs.into_par_iter().map(CheckJob::run).collect());
    records.sort_by(|a, b| a.id.cmp(&b.id));
    records
}

/// Folds labelled outcomes: the first `FAIL` wins, otherwise `PASS` with counts.
fn all_of(items: impl IntoIterator<Item = (String, Outcome)>) -> Outcome {
    let (mut passed, mut vacuous, mut skipped) = (0usize, 0usize, 0usize);
    for (label, o) in items {
        match o.verdict {
            Verdict::Pass => passed += 1,
            Verdict::Vacuous => vacuous += 1,
            Verdict::Skipped => skipped += 1,
            Verdict::Fail => {
                let ce = o.counterexample.unwrap_or(Value::Null);
                return Outcome::fail(
                    json!({ "at": label, "passed_before": passed, "details": o.details }),
                    json!({ "at": label, "witness": ce }),
                );
            }
        }
    }
    if passed == 0 && vacuous == 0 && skipped > 0 {
        return Outcome::skipped("every instance was skipped");
    }
    Outcome::pass(json!({ "passed": passed, "vacuous": vacuous, "skipped": skipped }))
}

fn catalog_group(ctx: &SuiteContext, name: &str) -> Arc<FiniteGroup> {
    ctx.catalog.group(name).expect("bundled group loads")
}

fn catalog_action(ctx: &SuiteContext, name: &str) -> AutAction {
    ctx.catalog.action(name).expect("bundled action validates")
}

fn labels(g: &FiniteGroup, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| g.label(x).to_string()).collect()
}

fn compare_verdict(found: Outcome, expected: Option<&str>) -> Outcome {
    match expected {
        Some(want) if want != found.verdict.to_string() => Outcome::fail(
            found.details,
            json!({ "expected_verdict": want, "found_verdict": found.verdict.to_string() }),
        ),
        _ => found,
    }
}

struct GroupCoreSuite;

impl Suite for GroupCoreSuite {
    fn name(&self) -> &'static str {
        "group-core"
    }

    fn description(&self) -> &'static str {
        "table axioms, series recomputation, Fitting subgroup and quotient maps on every catalog group"
    }

    fn jobs(&self, ctx: &SuiteContext) -> Vec<CheckJob> {
        ctx.catalog
            .groups()
            .iter()
            .flat_map(|e| group_core_jobs(&catalog_group(ctx, &e.name), Some(e.expected.clone())))
            .collect()
    }
}

/// Axioms, lower central series, Fitting subgroup and quotient maps of one
/// group, plus the catalog regression values when given.
pub fn group_core_jobs(g: &Arc<FiniteGroup>, expected: Option<GroupExpectation>) -> Vec<CheckJob> {
    let name = g.name().to_string();
    let mut jobs = Vec::new();
    if let Some(expected) = expected {
        let g1 = g.clone();
        jobs.push(CheckJob::new(
            format!("group-core/{name}/expected"),
            "catalog regression values: order, class, Fitting height, |F(G)|, exponent",
            move || check_expectations(&g1, &expected),
        ));
    }
    let g1 = g.clone();
    jobs.push(CheckJob::new(
        format!("group-core/{name}/axioms"),
        "(xy)z = x(yz) on the product table; the generators reach every element",
        move || match g1.verify_axioms() {
            Ok(()) => Outcome::pass(json!({ "order": g1.order() })),
            Err(err) => Outcome::fail(json!({}), json!({ "error": err.to_string() })),
        },
    ));
    let g1 = g.clone();
    jobs.push(CheckJob::new(
        format!("group-core/{name}/lower-central"),
        "[γ_i, G] = γ_{i+1} and [γ_∞, G] = γ_∞",
        move || lower_central_check(&g1),
    ));
    if g.order() <= NORMAL_SCAN_LIMIT {
        let g1 = g.clone();
        jobs.push(CheckJob::new(
            format!("group-core/{name}/fitting"),
            "F(G) is nilpotent and normal and contains every nilpotent normal subgroup",
            move || fitting_check(&g1),
        ));
    }
    if g.order() <= SINK_ORDER_LIMIT {
        let g1 = g.clone();
        jobs.push(CheckJob::new(
            format!("group-core/{name}/quotients"),
            "the projection G → G/N is a homomorphism for every normal N",
            move || quotient_check(&g1),
        ));
    }
    jobs
}

fn lower_central_check(g: &FiniteGroup) -> Outcome {
    let lcs = series::lower_central_series(g);
    let whole = g.whole();
    for (i, w) in lcs.terms.windows(2).enumerate() {
        if w[0].commutator_with(g, &whole) != w[1] {
            return Outcome::fail(json!({ "i": i + 1 }), json!({ "term": i + 1 }));
        }
    }
    let limit_ok = lcs.limit.commutator_with(g, &whole) == lcs.limit;
    Outcome::check(
        limit_ok,
        json!({
            "orders": lcs.terms.iter().map(|t| t.order()).collect::<Vec<_>>(),
            "class": lcs.nilpotency_class(),
        }),
        || json!({ "gamma_infinity_order": lcs.limit.order() }),
    )
}

fn fitting_check(g: &FiniteGroup) -> Outcome {
    let f = series::fitting_subgroup(g);
    if !f.is_normal_in(g) || !series::is_nilpotent(g, &f) {
        return Outcome::fail(
            json!({ "fitting_order": f.order() }),
            json!({ "fitting": labels(g, f.members()) }),
        );
    }
    let normals = series::normal_subgroups(g);
    for n in &normals {
        if series::is_nilpotent(g, n) && !n.is_subgroup_of(&f) {
            return Outcome::fail(
                json!({ "fitting_order": f.order() }),
                json!({ "nilpotent_normal_outside": labels(g, n.members()) }),
            );
        }
    }
    Outcome::pass(json!({ "fitting_order": f.order(), "normal_subgroups": normals.len() }))
}

fn quotient_check(g: &FiniteGroup) -> Outcome {
    let normals = series::normal_subgroups(g);
    all_of(normals.iter().map(|n| {
        let label = format!("|N| = {}", n.order());
        let out = match series::quotient_group(g, n) {
            Err(e) => Outcome::fail(json!({}), json!({ "error": e.to_string() })),
            Ok((q, proj)) => {
                let bad = g
                    .elements()
                    .flat_map(|x| g.elements().map(move |y| (x, y)))
                    .find(|&(x, y)| proj[g.mul(x, y)] != q.mul(proj[x], proj[y]));
                let ok = bad.is_none() && q.order() * n.order() == g.order();
                Outcome::check(
                    ok,
                    json!({ "quotient_order": q.order() }),
                    || json!({ "pair": bad.map(|(x, y)| [g.label(x), g.label(y)]) }),
                )
            }
        };
        (label, out)
    }))
}

struct ActionLemmaSuite;

impl Suite for ActionLemmaSuite {
    fn name(&self) -> &'static str {
        "action-lemmas"
    }

    fn description(&self) -> &'static str {
        "generation by centralizers, fixed-point covering, [[G,A],A] = [G,A], invariant Sylow subgroups, semidirect products"
    }

    fn jobs(&self, ctx: &SuiteContext) -> Vec<CheckJob> {
        ctx.catalog
            .actions()
            .iter()
            .flat_map(|e| lemma_jobs(&Arc::new(catalog_action(ctx, &e.name))))
            .collect()
    }
}

/// The coprime-action lemma checks of one action; a single `SKIPPED` record
/// for non-coprime actions.
pub fn lemma_jobs(act: &Arc<AutAction>) -> Vec<CheckJob> {
    let name = act.name().to_string();
    if !act.is_coprime() {
        return vec![CheckJob::new(
            format!("action-lemmas/{name}/lemmas"),
            "coprime-action lemmas",
            || Outcome::skipped("action is not coprime; the lemmas assume coprimality"),
        )];
    }
    let mut jobs = Vec::new();
    let a = act.clone();
    jobs.push(CheckJob::new(
        format!("action-lemmas/{name}/generation"),
        "G = ⟨C_G(a) : a ∈ A^#⟩ for non-cyclic abelian A",
        move || action::generation_by_centralizers(&a),
    ));
    let a = act.clone();
    jobs.push(CheckJob::new(
        format!("action-lemmas/{name}/commutator"),
        "[[G,A],A] = [G,A]",
        move || action::commutator_idempotence(&a),
    ));
    let a = act.clone();
    jobs.push(CheckJob::new(
        format!("action-lemmas/{name}/covering"),
        "C_{G/N}(A) is the image of C_G(A) for every A-invariant normal N",
        move || covering_check(&a),
    ));
    let a = act.clone();
    jobs.push(CheckJob::new(
        format!("action-lemmas/{name}/invariant-sylow"),
        "an A-invariant Sylow p-subgroup exists for every prime p",
        move || invariant_sylow_check(&a),
    ));
    if act.actor().generators().len() == 1 {
        let a = act.clone();
        jobs.push(CheckJob::new(
            format!("action-lemmas/{name}/semidirect"),
            "G⟨φ⟩ has order |G|·|φ|, G is normal and t⁻¹xt = φ(x)",
            move || semidirect_check(&a),
        ));
    }
    jobs
}

fn covering_check(act: &AutAction) -> Outcome {
    let g = act.target();
    let candidates: Vec<_> = if g.order() <= NORMAL_SCAN_LIMIT {
        series::normal_subgroups(g)
    } else {
        let mut c = vec![g.trivial(), g.whole(), series::fitting_subgroup(g)];
        c.extend(series::lower_central_series(g).terms);
        c.extend(series::derived_series_of(g, &g.whole()).terms);
        c.sort_by(|a, b| a.members().cmp(b.members()));
        c.dedup();
        c
    };
    let invariant: Vec<_> = candidates.into_iter().filter(|n| act.is_invariant(n)).collect();
    let scanned = if g.order() <= NORMAL_SCAN_LIMIT {
        "exhaustive"
    } else {
        "series terms"
    };
    let mut out = all_of(invariant.iter().map(|n| {
        let o = action::fixed_point_covering(act, n)
            .unwrap_or_else(|e| Outcome::fail(json!({}), json!({ "error": e.to_string() })));
        (format!("|N| = {}", n.order()), o)
    }));
    if let Value::Object(m) = &mut out.details {
        m.insert("normal_subgroups".into(), json!(scanned));
    }
    out
}

fn invariant_sylow_check(act: &AutAction) -> Outcome {
    let g = act.target();
    let primes = series::prime_divisors(g.order());
    all_of(primes.into_iter().map(|p| {
        let o = match action::invariant_sylow(act, p) {
            Ok(s) => {
                let ok = s.order() == series::p_part(g.order(), p) && act.is_invariant(&s);
                Outcome::check(
                    ok,
                    json!({ "order": s.order() }),
                    || json!({ "p": p, "order": s.order() }),
                )
            }
            Err(e) => Outcome::fail(json!({}), json!({ "p": p, "error": e.to_string() })),
        };
        (format!("p = {p}"), o)
    }))
}

fn semidirect_check(act: &AutAction) -> Outcome {
    let g = act.target();
    let gen = act.actor().generator_ids()[0];
    let phi = act.automorphism(gen);
    let d = phi.order();
    let sd = match semidirect_product(g, phi, d) {
        Ok(sd) => sd,
        Err(e) => return Outcome::fail(json!({}), json!({ "error": e.to_string() })),
    };
    let p = &sd.group;
    let conj_ok = g
        .elements()
        .all(|x| p.conj(sd.embed[x], sd.t) == sd.embed[phi.apply(x)]);
    let ok = p.order() == g.order() * d && sd.base.is_normal_in(p) && conj_ok;
    Outcome::check(
        ok,
        json!({ "order": p.order(), "phi_order": d }),
        || json!({ "normal": sd.base.is_normal_in(p), "conjugation_matches": conj_ok }),
    )
}

struct SinkSuite;

impl Suite for SinkSuite {
    fn name(&self) -> &'static str {
        "sinks"
    }

    fn description(&self) -> &'static str {
        "smallest Engel sinks: minimality, recurrence witnesses, Baer equality and quotients"
    }

    fn jobs(&self, ctx: &SuiteContext) -> Vec<CheckJob> {
        let mut jobs: Vec<CheckJob> = ctx
            .catalog
            .groups()
            .iter()
            .flat_map(|e| sink_jobs(&catalog_group(ctx, &e.name)))
            .collect();
        let s3 = catalog_group(ctx, "S3");
        jobs.push(CheckJob::new(
            "sinks/S3/transposition",
            "the sink of (1 2) in S3 is {1, (1 2 3), (1 3 2)}",
            move || {
                let x = s3.parse_element("(1 2)").expect("element of S3");
                let s = smallest_sink(&s3, x);
                // Oracle: six steps of x ↦ [x,g] from every start land on the sink.
                let mut tails: Vec<usize> = s3
                    .elements()
                    .map(|y| (0..6).fold(y, |z, _| s3.commutator(z, x)))
                    .collect();
                tails.sort_unstable();
                tails.dedup();
                Outcome::check(
                    s.sink == tails && s.sink.len() == 3,
                    json!({ "sink": labels(&s3, &s.sink) }),
                    || json!({ "oracle": labels(&s3, &tails) }),
                )
            },
        ));
        jobs
    }
}

/// Sink minimality and witnesses for every element, Baer equality and, up
/// to `NORMAL_SCAN_LIMIT`, sinks in every quotient. Empty above `SINK_ORDER_LIMIT`.
pub fn sink_jobs(g: &Arc<FiniteGroup>) -> Vec<CheckJob> {
    if g.order() > SINK_ORDER_LIMIT {
        return Vec::new();
    }
    let name = g.name().to_string();
    let mut jobs = Vec::new();
    let g1 = g.clone();
    jobs.push(CheckJob::new(
        format!("sinks/{name}/minimality"),
        "x ↦ [x,g] maps the sink onto itself and every s = [s,_k g] with 1 ≤ k ≤ |G|",
        move || {
            all_of(
                g1.elements()
                    .map(|x| (g1.label(x).to_string(), verify_sink(&g1, &smallest_sink(&g1, x)))),
            )
        },
    ));
    let g1 = g.clone();
    jobs.push(CheckJob::new(
        format!("sinks/{name}/baer"),
        "the Engel elements of a finite group form its Fitting subgroup",
        move || baer_check(&g1),
    ));
    if g.order() <= NORMAL_SCAN_LIMIT {
        let g1 = g.clone();
        jobs.push(CheckJob::new(
            format!("sinks/{name}/quotients"),
            "the image of the sink of g in G/N contains the sink of gN",
            move || {
                let normals = series::normal_subgroups(&g1);
                let g1 = &g1;
                all_of(normals.iter().flat_map(|n| {
                    g1.elements().map(move |x| {
                        (
                            format!("|N| = {}, g = {}", n.order(), g1.label(x)),
                            sink::sink_respects_quotient(g1, x, n),
                        )
                    })
                }))
            },
        ));
    }
    jobs
}

struct WardEngelSuite;

impl Suite for WardEngelSuite {
    fn name(&self) -> &'static str {
        "ward-engel"
    }

    fn description(&self) -> &'static str {
        "centralizer theorems for coprime actions of elementary abelian groups of order q²"
    }

    fn jobs(&self, ctx: &SuiteContext) -> Vec<CheckJob> {
        ctx.catalog
            .actions()
            .iter()
            .flat_map(|e| {
                let expected = (e.expected.ward.clone(), e.expected.engel.clone());
                theorem_jobs(&Arc::new(catalog_action(ctx, &e.name)), expected)
            })
            .collect()
    }
}

/// The two centralizer theorems for a coprime action of an elementary
/// abelian `q²`; empty for other actions. Expected verdicts, when given,
/// turn a verdict change into a `FAIL`.
pub fn theorem_jobs(act: &Arc<AutAction>, expected: (Option<String>, Option<String>)) -> Vec<CheckJob> {
    if !act.is_coprime() || act.actor_q_squared().is_none() {
        return Vec::new();
    }
    let name = act.name().to_string();
    let report: Arc<OnceLock<Result<TheoremReport, String>>> = Arc::new(OnceLock::new());
    let compute = |a: &AutAction| sink::finite_theorem_checks(a).map_err(|e| e.to_string());
    let (ward, engel) = expected;
    let (a, r) = (act.clone(), report.clone());
    let mut jobs = vec![CheckJob::new(
        format!("ward-engel/{name}/ward"),
        "nilpotent C_G(a) for all a ∈ A^# implies Fitting height ≤ 2",
        move || match r.get_or_init(|| compute(&a)) {
            Ok(t) => compare_verdict(t.ward.clone(), ward.as_deref()),
            Err(err) => Outcome::fail(json!({}), json!({ "error": err })),
        },
    )];
    let a = act.clone();
    jobs.push(CheckJob::new(
        format!("ward-engel/{name}/engel"),
        "Engel elements in every C_G(a), a ∈ A^#, imply G nilpotent",
        move || match report.get_or_init(|| compute(&a)) {
            Ok(t) => compare_verdict(t.engel.clone(), engel.as_deref()),
            Err(err) => Outcome::fail(json!({}), json!({ "error": err })),
        },
    ));
    jobs
}

struct CoprimeSinkSuite;

impl Suite for CoprimeSinkSuite {
    fn name(&self) -> &'static str {
        "coprime-sink"
    }

    fn description(&self) -> &'static str {
        "sink of a coprime automorphism of a nilpotent group and γ_∞ of the semidirect product"
    }

    fn jobs(&self, ctx: &SuiteContext) -> Vec<CheckJob> {
        ctx.catalog
            .actions()
            .iter()
            .flat_map(|e| {
                let expected = (e.expected.sink_size, e.expected.gamma_infinity_order);
                coprime_sink_jobs(&catalog_action(ctx, &e.name), expected)
            })
            .collect()
    }
}

/// The coprime-sink check for a coprime action of a cyclic group on a
/// nilpotent group; empty otherwise. Expected `(|sink|, |γ_∞|)` are compared
/// when given.
pub fn coprime_sink_jobs(act: &AutAction, expected: (Option<usize>, Option<usize>)) -> Vec<CheckJob> {
    let g = act.target().clone();
    if !act.is_coprime() || act.actor().generators().len() != 1 || !series::is_nilpotent(&g, &g.whole()) {
        return Vec::new();
    }
    let phi = act.automorphism(act.actor().generator_ids()[0]).clone();
    vec![CheckJob::new(
        format!("coprime-sink/{}", act.name()),
        "the smallest sink of φ in F⟨φ⟩ is {[g,φ] : g ∈ F} and γ_∞(F⟨φ⟩) = [F,φ]",
        move || match sink::coprime_sink_check(&g, &phi) {
            Err(err) => Outcome::fail(json!({}), json!({ "error": err.to_string() })),
            Ok(r) if r.outcome.is_fail() => r.outcome,
            Ok(r) => {
                let found = (r.sink.sink.len(), r.gamma_infinity.order());
                let mismatch = expected.0.is_some_and(|s| s != found.0) || expected.1.is_some_and(|o| o != found.1);
                if mismatch {
                    Outcome::fail(
                        r.outcome.details,
                        json!({ "expected": [expected.0, expected.1], "found": [found.0, found.1] }),
                    )
                } else {
                    r.outcome
                }
            }
        },
    )]
}

struct ZassenhausSuite;

impl Suite for ZassenhausSuite {
    fn name(&self) -> &'static str {
        "zassenhaus"
    }

    fn description(&self) -> &'static str {
        "Zassenhaus filtration and its graded Lie algebra on catalog p-groups"
    }

    fn jobs(&self, ctx: &SuiteContext) -> Vec<CheckJob> {
        ctx.catalog
            .groups()
            .iter()
            .flat_map(|e| zassenhaus_jobs(&catalog_group(ctx, &e.name), ctx.seed))
            .collect()
    }
}

type LieData = Result<(ZFiltration, GradedLie), String>;

/// Filtration and graded Lie algebra checks for a nontrivial `p`-group of
/// order at most `PGROUP_ORDER_LIMIT`; empty otherwise.
pub fn zassenhaus_jobs(g: &Arc<FiniteGroup>, seed: u64) -> Vec<CheckJob> {
    let p = match series::prime_divisors(g.order()).as_slice() {
        [p] if g.order() <= PGROUP_ORDER_LIMIT => *p,
        _ => return Vec::new(),
    };
    let name = g.name().to_string();
    let data: Arc<OnceLock<LieData>> = Arc::new(OnceLock::new());
    let init = {
        let g = g.clone();
        move || -> LieData {
            let f = zassenhaus_filtration(g.clone(), p).map_err(|e| e.to_string())?;
            let l = graded_lie_with_seed(&f, seed).map_err(|e| e.to_string())?;
            Ok((f, l))
        }
    };
    type Check = fn(&ZFiltration, &GradedLie, usize) -> Outcome;
    let checks: [(&str, &'static str, Check); 6] = [
        ("strong-centrality", "[G_i, G_j] ≤ G_{i+j} for all i, j", |f, _, _| {
            f.check_strong_centrality()
        }),
        (
            "elementary-factors",
            "G_i/G_{i+1} is elementary abelian and G_i^p ≤ G_{ip}",
            |f, _, _| f.check_elementary_factors(),
        ),
        ("dimension-sum", "Σ dim G_i/G_{i+1} = log_p |G|", dimension_sum_check),
        (
            "lie-axioms",
            "[x,x] = 0, [x,y] = −[y,x] and the Jacobi identity on all basis triples",
            |_, l, _| l.check_axioms(),
        ),
        (
            "power-identities",
            "δ(u^p) ≥ p·δ(u) and [x, ū^p] = [x,_p ū]",
            |f, l, _| {
                let g = f.group().clone();
                all_of(
                    g.elements()
                        .skip(1)
                        .map(|u| (g.label(u).to_string(), verify_power_identities(f, l, u))),
                )
            },
        ),
        (
            "ad-bound",
            "[[nb,_i g], g^{p^k}] = 1 on a coset Nb of index p^m implies ad(ḡ) nilpotent of index ≤ i + m + p^k",
            |f, l, _| {
                let g = f.group().clone();
                all_of(g.elements().map(|x| (g.label(x).to_string(), ad_bound_search(f, l, x))))
            },
        ),
    ];
    checks
        .into_iter()
        .map(|(id, anchor, check)| {
            let (data, init) = (data.clone(), init.clone());
            CheckJob::new(format!("zassenhaus/{name}/{id}"), anchor, move || {
                match data.get_or_init(init) {
                    Ok((f, l)) => check(f, l, p),
                    Err(err) => Outcome::fail(json!({}), json!({ "error": err })),
                }
            })
        })
        .collect()
}

fn dimension_sum_check(f: &ZFiltration, l: &GradedLie, p: usize) -> Outcome {
    let dims = f.dimensions();
    let total: usize = dims.iter().sum();
    let order = f.group().order();
    let log = (0u32..).find(|&e| p.pow(e) >= order).unwrap_or(0);
    let ok = p.pow(log) == order && total == log as usize && l.dimensions() == dims.as_slice();
    Outcome::check(
        ok,
        json!({ "dimensions": dims, "log_p_order": log }),
        || json!({ "sum": total, "order": order }),
    )
}

struct BchSuite;

impl Suite for BchSuite {
    fn name(&self) -> &'static str {
        "bch"
    }

    fn description(&self) -> &'static str {
        "free Lie algebra dimensions, exact BCH coefficients and Engel words"
    }

    fn jobs(&self, _ctx: &SuiteContext) -> Vec<CheckJob> {
        let mut jobs = vec![CheckJob::new(
            "bch/weight-3",
            "log(e^X e^Y) = X + Y + ½[X,Y] + 1/12[[X,Y],Y] − 1/12[[X,Y],X] + (weight ≥ 4)",
            || {
                let phi = match bch_series(3) {
                    Ok(s) => s,
                    Err(e) => return Outcome::fail(json!({}), json!({ "error": e.to_string() })),
                };
                let ctx = phi.context().clone();
                let x = LieSeries::generator(&ctx, "X").expect("letter");
                let y = LieSeries::generator(&ctx, "Y").expect("letter");
                let xy = x.bracket(&y).expect("same context");
                let expected = x
                    .add(&y)
                    .and_then(|s| s.add(&xy.scale(&rat(1, 2))))
                    .and_then(|s| s.add(&xy.bracket(&y)?.scale(&rat(1, 12))))
                    .and_then(|s| s.sub(&xy.bracket(&x)?.scale(&rat(1, 12))))
                    .expect("same context");
                Outcome::check(phi == expected, phi.to_json(), || expected.to_json())
            },
        )];
        for r in [2usize, 3] {
            jobs.push(CheckJob::new(
                format!("bch/lyndon-counts-r{r}"),
                "the number of Lyndon words of length n is (1/n) Σ_{d|n} μ(d) r^{n/d}",
                move || {
                    let letters = ["a", "b", "c"];
                    let w = if r == 2 { 6 } else { 5 };
                    let counts = FreeLie::new(&letters[..r], w).counts();
                    let witt: Vec<usize> = (1..=w).map(|n| witt_dimension(r, n)).collect();
                    Outcome::check(counts == witt, json!({ "counts": counts }), || json!({ "witt": witt }))
                },
            ));
        }
        jobs.push(CheckJob::new(
            "bch/engel-word",
            "[x + y,_l z]_G vanishes at z = 0 and starts with [x + y,_l z]_L",
            || {
                all_of((1..=3).map(|l| {
                    let o = (|| -> Result<Outcome, crate::freelie::LieError> {
                        let e = engel_word(l, l + 2)?;
                        let ctx = e.context().clone();
                        let g = |n| LieSeries::generator(&ctx, n);
                        let mut lie = g("x")?.add(&g("y")?)?;
                        for _ in 0..l {
                            lie = lie.bracket(&g("z")?)?;
                        }
                        let leading = e.weight_part(l + 1);
                        let zero_ok = substitute_zero(&e, "z")?.is_zero();
                        Ok(Outcome::check(
                            zero_ok && leading == lie,
                            json!({ "terms": e.coeffs().len() }),
                            || json!({ "vanishes_at_z_zero": zero_ok, "leading": leading.to_json() }),
                        ))
                    })()
                    .unwrap_or_else(|err| Outcome::fail(json!({}), json!({ "error": err.to_string() })));
                    (format!("l = {l}"), o)
                }))
            },
        ));
        jobs
    }
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Witt's formula for the weight-`n` dimension of the free Lie algebra on `r` letters.
pub fn witt_dimension(r: usize, n: usize) -> usize {
    let total: i64 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(d) * (r as i64).pow((n / d) as u32))
        .sum();
    (total / n as i64) as usize
}

/// The Vandermonde grid covered by the suite: `k ≤ 6`, `p ∈ {2,3,5}`, `m ≤ 2`.
pub const VANDERMONDE_K: [usize; 6] = [1, 2, 3, 4, 5, 6];
pub const VANDERMONDE_P: [u64; 3] = [2, 3, 5];
pub const VANDERMONDE_M: [u32; 2] = [1, 2];
pub const BETA_T_MAX: usize = 50;
pub const TAIL_U_MAX: usize = 12;

struct VandermondeSuite;

impl Suite for VandermondeSuite {
    fn name(&self) -> &'static str {
        "vandermonde"
    }

    fn description(&self) -> &'static str {
        "exact solutions of the node system: p-integral β_t, denominator exponents and tail integrality"
    }

    fn jobs(&self, _ctx: &SuiteContext) -> Vec<CheckJob> {
        let mut jobs = Vec::new();
        for k in VANDERMONDE_K {
            for p in VANDERMONDE_P {
                for m in VANDERMONDE_M {
                    jobs.push(CheckJob::new(
                        format!("vandermonde/k{k}-p{p}-m{m}"),
                        "β_t = Σ c_i x_i^t is a p-integer, ν_p(den c_i) = m·i(2k−i−1)/2 and c_i p^{imu} is a p-integer for u ≥ k",
                        move || vandermonde_check(k, p, m),
                    ));
                }
            }
        }
        jobs
    }
}

pub fn vandermonde_check(k: usize, p: u64, m: u32) -> Outcome {
    vandermonde_outcome(k, p, m, BETA_T_MAX.max(k), TAIL_U_MAX.max(k))
}

/// Solves the node system and checks `β_t` for `t ≤ T` and the tails for
/// `k ≤ u ≤ U`. Details carry one row per `c_i`.
pub fn vandermonde_outcome(k: usize, p: u64, m: u32, t_max: usize, u_max: usize) -> Outcome {
    let run = || -> Result<Outcome, crate::linearize::LinError> {
        let sys = solve_system(k, p, m)?;
        let betas = beta_sequence(&sys, t_max)?;
        let vals = valuation_checks(&sys, u_max)?;
        let rows: Vec<Value> = sys
            .c
            .iter()
            .zip(&vals.denominator_valuations)
            .enumerate()
            .map(|(i, (c, (_, v)))| {
                json!({
                    "k": k,
                    "p": p,
                    "m": m,
                    "i": i,
                    "c_i": rational_string(c),
                    "denom_valuation": v,
                    "beta_checked_to": t_max,
                })
            })
            .collect();
        let details = json!({
            "rows": rows,
            "nodes": sys.nodes.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "delta": sys.delta.to_string(),
            "lagrange_agrees": sys.lagrange_agrees,
            "closed_form": sys.closed_form,
            "beta_tail": betas.iter().skip(k).take(4).collect::<Vec<_>>(),
            "tail_checked_to": vals.tail_checked_to,
        });
        Ok(Outcome::check(
            sys.lagrange_agrees,
            details,
            || json!({ "lagrange_agrees": false }),
        ))
    };
    run().unwrap_or_else(|e| Outcome::fail(json!({ "k": k, "p": p, "m": m }), e.counterexample()))
}

struct LinearizationSuite;

impl Suite for LinearizationSuite {
    fn name(&self) -> &'static str {
        "linearization"
    }

    fn description(&self) -> &'static str {
        "Σ c_i [x_i x + y,_l z]_G equals w_0 + Σ_{t≥k} β_t w_t with exact group-commutator arithmetic"
    }

    fn jobs(&self, _ctx: &SuiteContext) -> Vec<CheckJob> {
        let mut jobs = Vec::new();
        for l in [1usize, 2] {
            for k in [2usize, 3] {
                for p in [3u64, 5] {
                    jobs.push(CheckJob::new(
                        format!("linearization/l{l}-k{k}-p{p}-m1-w6"),
                        "x-degrees 1..k−1 vanish and the degree-t part is β_t·w_t",
                        move || linearization_outcome(l, k, p, 1, 6),
                    ));
                }
            }
        }
        jobs
    }
}

pub fn linearization_outcome(l: usize, k: usize, p: u64, m: u32, w: usize) -> Outcome {
    match linearization_identity_check(l, k, p, m, w) {
        Ok(r) => Outcome::pass(serde_json::to_value(&r).expect("report serializes")),
        Err(e) => Outcome::fail(json!({ "l": l, "k": k, "p": p, "m": m, "w": w }), e.counterexample()),
    }
}

/// `(r, c, p)` parameter sets of the scaled-model suite.
pub const SCALED_PARAMS: [(usize, usize, u64); 3] = [(2, 4, 3), (2, 4, 5), (2, 3, 2)];

struct ScaledModelSuite;

impl Suite for ScaledModelSuite {
    fn name(&self) -> &'static str {
        "scaled-model"
    }

    fn description(&self) -> &'static str {
        "group axioms of the BCH product on the p-scaled free nilpotent Lie algebra and valuation bounds"
    }

    fn jobs(&self, ctx: &SuiteContext) -> Vec<CheckJob> {
        let mut jobs = Vec::new();
        for (r, c, p) in SCALED_PARAMS {
            let seed = ctx.seed;
            jobs.push(CheckJob::new(
                format!("scaled-model/axioms-r{r}-c{c}-p{p}"),
                "Φ is associative with identity 0 and inverse −u, and u^α = αu",
                move || scaled_axioms(r, c, p, seed, SCALED_TRIPLES),
            ));
        }
        for (p, w) in [(2u64, 6usize), (3, 6), (5, 6)] {
            jobs.push(CheckJob::new(
                format!("scaled-model/valuations-p{p}-w{w}"),
                "ν_p of the weight-i part of Φ is ≥ i − 1 (p = 2) or ⌈(i−1)(p−2)/(p−1)⌉ (odd p)",
                move || match valuation_profile(p, w) {
                    Ok(v) => Outcome::pass(serde_json::to_value(&v).expect("profile serializes")),
                    Err(e) => Outcome::fail(json!({ "p": p, "w": w }), json!({ "error": e.to_string() })),
                },
            ));
        }
        jobs
    }
}

/// A random model element with `p`-integral coordinates.
pub fn random_model_element(m: &ScaledModel, rng: &mut ChaCha8Rng) -> ModelElement {
    let p = m.p() as i64;
    (0..m.dim())
        .map(|_| {
            let mut den = rng.gen_range(1..=5);
            while den % p == 0 {
                den += 1;
            }
            rat(rng.gen_range(-7..=7), den)
        })
        .collect()
}

pub fn scaled_axioms(r: usize, c: usize, p: u64, seed: u64, triples: usize) -> Outcome {
    let model = match ScaledModel::new(r, c, p) {
        Ok(m) => m,
        Err(e) => return Outcome::fail(json!({}), json!({ "error": e.to_string() })),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((r as u64) << 32 | (c as u64) << 16 | p));
    let zero = model.zero();
    let fail =
        |what: &str, i: usize, e: String| Outcome::fail(json!({ "triple": i }), json!({ "axiom": what, "detail": e }));
    for i in 0..triples {
        let (u, v, w) = (
            random_model_element(&model, &mut rng),
            random_model_element(&model, &mut rng),
            random_model_element(&model, &mut rng),
        );
        let check = || -> Result<Option<&'static str>, crate::freelie::LieError> {
            let left = model.group_mult(&model.group_mult(&u, &v)?, &w)?;
            let right = model.group_mult(&u, &model.group_mult(&v, &w)?)?;
            if left != right {
                return Ok(Some("associativity"));
            }
            if model.group_mult(&u, &zero)? != u || model.group_mult(&zero, &u)? != u {
                return Ok(Some("identity"));
            }
            if model.group_mult(&u, &model.inverse(&u))? != zero {
                return Ok(Some("inverse"));
            }
            Ok(None)
        };
        match check() {
            Ok(None) => {}
            Ok(Some(what)) => return fail(what, i, format!("u = {}", model.to_json(&u))),
            Err(e) => return fail("integrality", i, e.to_string()),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_model_element(&model, &mut rng);
    let mut acc = zero.clone();
    for alpha in 1..=10i64 {
        acc = match model.group_mult(&acc, &u) {
            Ok(a) => a,
            Err(e) => return fail("power", alpha as usize, e.to_string()),
        };
        let want: ModelElement = model.power(&u, &int(alpha));
        if acc != want {
            return fail("power", alpha as usize, format!("u^{alpha} ≠ {alpha}u"));
        }
    }
    Outcome::pass(json!({ "dim": model.dim(), "triples": triples, "powers_checked_to": 10 }))
}

pub use zassenhaus::DEFAULT_SEED;
