//! Smallest Engel sinks in finite groups.
//!
//! For a fixed `g` the map `x ↦ [x, g]` is a function on a finite set; every
//! orbit ends in a cycle, and the union of those cycles is the smallest set
//! that all sufficiently long commutators `[x, g, …, g]` fall into.

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::action::{semidirect_product, ActionError, AutAction, Automorphism};
use crate::group::{FiniteGroup, Subgroup};
use crate::report::Outcome;
use crate::series::{self, fitting_data, FittingHeight};

#[derive(Debug, Error)]
pub enum SinkError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Action(#[from] ActionError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngelSink {
    pub base: usize,
    /// Sorted member ids.
    pub sink: Vec<usize>,
    /// `(tail length, cycle length)` of the orbit of each start id.
    pub per_start: Vec<(usize, usize)>,
    /// Least `k ≥ 1` with `s = [s, g, …, g]` (`k` copies of `g`).
    pub witnesses: BTreeMap<usize, usize>,
}

impl EngelSink {
    pub fn contains(&self, x: usize) -> bool {
        self.sink.binary_search(&x).is_ok()
    }

    pub fn max_tail(&self) -> usize {
        self.per_start.iter().map(|p| p.0).max().unwrap_or(0)
    }
}

/// Computes the smallest Engel sink of `g` with a memoized walk over all
/// start points.
pub fn smallest_sink(g: &FiniteGroup, base: usize) -> EngelSink {
    let n = g.order();
    let next: Vec<usize> = g.elements().map(|x| g.commutator(x, base)).collect();
    const UNSET: usize = usize::MAX;
    let mut tail = vec![UNSET; n];
    let mut cycle = vec![0usize; n];
    let mut pos = vec![UNSET; n];
    let mut path = Vec::new();
    for start in 0..n {
        if tail[start] != UNSET {
            continue;
        }
        path.clear();
        let mut x = start;
        while tail[x] == UNSET && pos[x] == UNSET {
            pos[x] = path.len();
            path.push(x);
            x = next[x];
        }
        let mut upto = path.len();
        if tail[x] == UNSET {
            // Closed a new cycle at path[pos[x]..].
            let from = pos[x];
            let len = path.len() - from;
            for &y in &path[from..] {
                tail[y] = 0;
                cycle[y] = len;
            }
            upto = from;
        }
        for &y in path[..upto].iter().rev() {
            tail[y] = tail[next[y]] + 1;
            cycle[y] = cycle[next[y]];
        }
        for &y in &path {
            pos[y] = UNSET;
        }
    }
    let sink: Vec<usize> = (0..n).filter(|&x| tail[x] == 0).collect();
    let witnesses = sink.iter().map(|&s| (s, cycle[s])).collect();
    EngelSink {
        base,
        sink,
        per_start: tail.into_iter().zip(cycle).collect(),
        witnesses,
    }
}

pub fn is_engel_element(g: &FiniteGroup, x: usize) -> bool {
    smallest_sink(g, x).sink == [0]
}

pub fn engel_elements(g: &FiniteGroup) -> Vec<usize> {
    g.elements().filter(|&x| is_engel_element(g, x)).collect()
}

/// Checks the sink invariants directly: the commutator map is onto the sink
/// when restricted to it, every witness recurs, and every orbit enters the
/// sink after its recorded tail and stays there.
pub fn verify_sink(g: &FiniteGroup, s: &EngelSink) -> Outcome {
    let mut image: Vec<usize> = s.sink.iter().map(|&x| g.commutator(x, s.base)).collect();
    image.sort_unstable();
    image.dedup();
    if image != s.sink {
        let missed: Vec<&str> = s
            .sink
            .iter()
            .filter(|x| image.binary_search(x).is_err())
            .map(|&x| g.label(x))
            .collect();
        return Outcome::fail(
            json!({ "sink_size": s.sink.len() }),
            json!({ "element": g.label(s.base), "not_in_image": missed }),
        );
    }
    for (&m, &k) in &s.witnesses {
        if k == 0 || k > g.order() || g.commutator_iter(m, s.base, k) != m {
            return Outcome::fail(
                json!({ "sink_size": s.sink.len() }),
                json!({ "element": g.label(s.base), "sink_member": g.label(m), "k": k }),
            );
        }
    }
    for x in g.elements() {
        let (t, _) = s.per_start[x];
        let entered = g.commutator_iter(x, s.base, t);
        let stays = s.contains(entered) && s.contains(g.commutator(entered, s.base));
        if !stays || (t > 0 && s.contains(g.commutator_iter(x, s.base, t - 1))) {
            return Outcome::fail(
                json!({ "sink_size": s.sink.len() }),
                json!({ "element": g.label(s.base), "start": g.label(x), "tail": t }),
            );
        }
    }
    let max_witness = s.witnesses.values().copied().max().unwrap_or(0);
    Outcome::pass(json!({
        "sink_size": s.sink.len(),
        "max_tail": s.max_tail(),
        "max_witness": max_witness,
    }))
}

/// The Engel elements of a finite group form its Fitting subgroup.
pub fn baer_check(g: &FiniteGroup) -> Outcome {
    let engel = engel_elements(g);
    let fitting = series::fitting_subgroup(g);
    let details = json!({ "engel_count": engel.len(), "fitting_order": fitting.order() });
    Outcome::check(engel == fitting.members(), details, || {
        let diff: Vec<&str> = g
            .elements()
            .filter(|&x| engel.binary_search(&x).is_ok() != fitting.contains(x))
            .map(|x| g.label(x))
            .collect();
        json!({ "symmetric_difference": diff })
    })
}

/// The image of `ℰ_G(g)` in `G/N` contains the smallest sink of `gN`.
pub fn sink_respects_quotient(g: &FiniteGroup, x: usize, n: &Subgroup) -> Outcome {
    let (q, proj) = series::quotient_group(g, n).expect("caller passes a normal subgroup");
    let upstairs = smallest_sink(g, x);
    let downstairs = smallest_sink(&q, proj[x]);
    let image: std::collections::BTreeSet<usize> = upstairs.sink.iter().map(|&s| proj[s]).collect();
    let missing: Vec<&str> = downstairs
        .sink
        .iter()
        .filter(|c| !image.contains(c))
        .map(|&c| q.label(c))
        .collect();
    Outcome::check(
        missing.is_empty(),
        json!({ "normal_order": n.order(), "quotient_sink": downstairs.sink.len(), "image": image.len() }),
        || json!({ "element": g.label(x), "missing_cosets": missing }),
    )
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    /// Nilpotent centralizers of all `a ∈ A^#` force Fitting height at most 2.
    pub ward: Outcome,
    /// Engel centralizer elements force nilpotency.
    pub engel: Outcome,
}

/// Finite shadows of the `q²` centralizer theorems. Hypothesis and conclusion
/// are both reported; a failed hypothesis gives a `VACUOUS` verdict.
pub fn finite_theorem_checks(action: &AutAction) -> Result<TheoremReport, SinkError> {
    if !action.is_coprime() {
        return Err(SinkError::PreconditionViolated("action is not coprime".into()));
    }
    let Some(q) = action.actor_q_squared() else {
        return Err(SinkError::PreconditionViolated(
            "acting group is not elementary abelian of order q²".into(),
        ));
    };
    let g = action.target();
    let fd = fitting_data(g);
    let centralizers: Vec<Subgroup> = action.nontrivial_actors().map(|a| action.centralizer(a)).collect();

    let nilpotent_centralizers: Vec<bool> = centralizers.iter().map(|c| series::is_nilpotent(g, c)).collect();
    let ward_hyp = nilpotent_centralizers.iter().all(|&b| b);
    let ward_concl = fd.soluble && matches!(fd.height, FittingHeight::Finite(h) if h <= 2);
    let ward_details = json!({
        "q": q,
        "hypothesis": ward_hyp,
        "conclusion": ward_concl,
        "fitting_height": fd.height.to_string(),
        "nilpotent_centralizers": nilpotent_centralizers,
    });
    let ward = if !ward_hyp {
        Outcome::vacuous(ward_details)
    } else {
        Outcome::check(
            ward_concl,
            ward_details,
            || json!({ "group": g.name(), "fitting_height": fd.height.to_string() }),
        )
    };

    let mut engel_cache: BTreeMap<usize, bool> = BTreeMap::new();
    let mut non_engel = None;
    for (a, c) in action.nontrivial_actors().zip(&centralizers) {
        for &x in c.members() {
            let e = *engel_cache.entry(x).or_insert_with(|| is_engel_element(g, x));
            if !e && non_engel.is_none() {
                non_engel = Some((a, x));
            }
        }
    }
    let engel_hyp = non_engel.is_none();
    let engel_details = json!({
        "q": q,
        "hypothesis": engel_hyp,
        "conclusion": fd.nilpotent,
        "first_non_engel": non_engel.map(|(a, x)| json!({
            "actor": action.actor().label(a),
            "element": g.label(x),
        })),
    });
    let engel = if !engel_hyp {
        Outcome::vacuous(engel_details)
    } else {
        Outcome::check(fd.nilpotent, engel_details, || json!({ "group": g.name() }))
    };
    Ok(TheoremReport { ward, engel })
}

#[derive(Debug, Clone)]
pub struct CoprimeSinkReport {
    pub outcome: Outcome,
    /// `{[g, φ] : g ∈ F}` as ids of the semidirect product.
    pub commutator_set: Vec<usize>,
    pub sink: EngelSink,
    pub gamma_infinity: Subgroup,
    pub product: FiniteGroup,
}

/// In `F⟨φ⟩` with `F` nilpotent and `φ` coprime, the smallest sink of `φ` is
/// `{[g, φ] : g ∈ F}` and `γ_∞(F⟨φ⟩) = [F, φ]`.
pub fn coprime_sink_check(f: &FiniteGroup, phi: &Automorphism) -> Result<CoprimeSinkReport, SinkError> {
    if !series::is_nilpotent(f, &f.whole()) {
        return Err(SinkError::PreconditionViolated("F is not nilpotent".into()));
    }
    let d = phi.order();
    if num_integer::gcd(d, f.order()) != 1 {
        return Err(SinkError::PreconditionViolated(format!(
            "automorphism order {d} is not coprime to |F| = {}",
            f.order()
        )));
    }
    let sd = semidirect_product(f, phi, d)?;
    let p = &sd.group;
    let mut k: Vec<usize> = f.elements().map(|x| p.commutator(sd.embed[x], sd.t)).collect();
    k.sort_unstable();
    k.dedup();
    let sink = smallest_sink(p, sd.t);
    let gamma = series::lower_central_series(p).limit;
    let generated_k = Subgroup::generated(p, &k);
    // [F, φ] computed inside F, then embedded.
    let fphi: Vec<usize> = f.elements().map(|x| f.mul(f.inv(x), phi.apply(x))).collect();
    let fphi = Subgroup::generated(f, &fphi).map(p, |x| sd.embed[x]);

    let sink_ok = sink.sink == k;
    let gamma_ok = gamma == generated_k && gamma == fphi;
    let details = json!({
        "phi_order": d,
        "k_size": k.len(),
        "sink_size": sink.sink.len(),
        "gamma_infinity_order": gamma.order(),
        "f_phi_order": fphi.order(),
        "sink_equals_k": sink_ok,
        "gamma_equals_f_phi": gamma_ok,
    });
    let outcome = Outcome::check(sink_ok && gamma_ok, details, || {
        json!({
            "sink": sink.sink.iter().map(|&x| p.label(x)).collect::<Vec<_>>(),
            "k": k.iter().map(|&x| p.label(x)).collect::<Vec<_>>(),
        })
    });
    Ok(CoprimeSinkReport {
        outcome,
        commutator_set: k,
        sink,
        gamma_infinity: gamma,
        product: sd.group,
    })
}

/// `γ_∞(F⟨g⟩)` for a normal nilpotent `F`.
pub fn gamma_inf_with_element(g: &FiniteGroup, f: &Subgroup, x: usize) -> Result<Subgroup, SinkError> {
    if !f.is_normal_in(g) {
        return Err(SinkError::PreconditionViolated("F is not normal".into()));
    }
    if !series::is_nilpotent(g, f) {
        return Err(SinkError::PreconditionViolated("F is not nilpotent".into()));
    }
    let h = f.join(g, &[x]);
    Ok(series::gamma_infinity(g, &h))
}
