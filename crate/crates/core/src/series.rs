//! Subgroup series, Sylow subgroups, Fitting data and quotients.

use fixedbitset::FixedBitSet;

use crate::group::{FiniteGroup, GroupError, Subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    LowerCentral,
    Derived,
    Fitting,
}

#[derive(Debug, Clone)]
pub struct SeriesData {
    pub kind: SeriesKind,
    /// Strictly descending (or ascending for Fitting) terms up to stabilization.
    pub terms: Vec<Subgroup>,
    pub stabilized: bool,
    /// The last term: `γ_∞` for the lower central series.
    pub limit: Subgroup,
}

impl SeriesData {
    /// Nilpotency class when the lower central series reaches 1.
    pub fn nilpotency_class(&self) -> Option<usize> {
        (self.kind == SeriesKind::LowerCentral && self.limit.is_trivial()).then(|| self.terms.len().saturating_sub(1))
    }
}

/// `γ_1 = H`, `γ_{i+1} = [γ_i, H]` until the series repeats.
pub fn lower_central_series_of(g: &FiniteGroup, h: &Subgroup) -> SeriesData {
    let mut terms = vec![h.clone()];
    loop {
        let last = terms.last().expect("non-empty");
        let next = last.commutator_with(g, h);
        if next == *last {
            break;
        }
        terms.push(next);
    }
    let limit = terms.last().expect("non-empty").clone();
    SeriesData {
        kind: SeriesKind::LowerCentral,
        terms,
        stabilized: true,
        limit,
    }
}

pub fn lower_central_series(g: &FiniteGroup) -> SeriesData {
    lower_central_series_of(g, &g.whole())
}

pub fn derived_series_of(g: &FiniteGroup, h: &Subgroup) -> SeriesData {
    let mut terms = vec![h.clone()];
    loop {
        let last = terms.last().expect("non-empty");
        let next = last.commutator_with(g, last);
        if next == *last {
            break;
        }
        terms.push(next);
    }
    let limit = terms.last().expect("non-empty").clone();
    SeriesData {
        kind: SeriesKind::Derived,
        terms,
        stabilized: true,
        limit,
    }
}

pub fn gamma_infinity(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    lower_central_series_of(g, h).limit
}

pub fn is_nilpotent(g: &FiniteGroup, h: &Subgroup) -> bool {
    gamma_infinity(g, h).is_trivial()
}

pub fn is_soluble(g: &FiniteGroup, h: &Subgroup) -> bool {
    derived_series_of(g, h).limit.is_trivial()
}

/// Smallest normal subgroup containing `s`.
pub fn normal_closure(g: &FiniteGroup, s: &[usize]) -> Subgroup {
    let mut n = Subgroup::generated(g, s);
    let conj_gens = g.generator_ids();
    loop {
        let extra: Vec<usize> = n
            .gens()
            .iter()
            .flat_map(|&x| conj_gens.iter().map(move |&t| (x, t)))
            .map(|(x, t)| g.conj(x, t))
            .filter(|&c| !n.contains(c))
            .collect();
        if extra.is_empty() {
            return n;
        }
        n = n.join(g, &extra);
    }
}

pub fn is_p_power(mut n: usize, p: usize) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// The largest power of `p` dividing `n`.
pub fn p_part(mut n: usize, p: usize) -> usize {
    let mut part = 1;
    while n.is_multiple_of(p) {
        n /= p;
        part *= p;
    }
    part
}

pub fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && prime_divisors(n) == vec![n]
}

fn normalizes(g: &FiniteGroup, s: &Subgroup, x: usize) -> bool {
    s.gens().iter().all(|&y| s.contains(g.conj(y, x)))
}

/// A Sylow `p`-subgroup of `h`, grown greedily: repeatedly adjoin the first
/// `p`-element (in id order) that normalizes the current `p`-subgroup and
/// keeps it a `p`-group.
pub fn sylow_subgroup_of(g: &FiniteGroup, h: &Subgroup, p: usize) -> Subgroup {
    let target = p_part(h.order(), p);
    let mut s = g.trivial();
    while s.order() < target {
        let next = h
            .members()
            .iter()
            .copied()
            .filter(|&x| !s.contains(x) && is_p_power(g.element_order(x), p))
            .filter(|&x| normalizes(g, &s, x))
            .map(|x| s.join(g, &[x]))
            .find(|t| is_p_power(t.order(), p));
        s = next.expect("a non-Sylow p-subgroup always has a p-element in its normalizer");
    }
    s
}

pub fn sylow_subgroup(g: &FiniteGroup, p: usize) -> Subgroup {
    sylow_subgroup_of(g, &g.whole(), p)
}

/// All distinct conjugates of `s` in `g`, in order of first conjugating id.
pub fn conjugates(g: &FiniteGroup, s: &Subgroup) -> Vec<Subgroup> {
    let mut out: Vec<Subgroup> = Vec::new();
    for t in g.elements() {
        let c = s.conjugate(g, t);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// `O_p(G)`: the intersection of all Sylow `p`-subgroups.
pub fn p_core(g: &FiniteGroup, p: usize) -> Subgroup {
    let s = sylow_subgroup(g, p);
    let mut core = s.clone();
    for c in conjugates(g, &s) {
        core = core.intersection(g, &c);
    }
    core
}

pub fn fitting_subgroup(g: &FiniteGroup) -> Subgroup {
    let mut f = g.trivial();
    for p in prime_divisors(g.order()) {
        let core = p_core(g, p);
        f = f.join(g, core.members());
    }
    f
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(untagged)]
pub enum FittingHeight {
    Finite(usize),
    /// The group is insoluble.
    Infinite,
}

impl std::fmt::Display for FittingHeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FittingHeight::Finite(h) => write!(f, "{h}"),
            FittingHeight::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FittingData {
    pub fitting: Subgroup,
    pub height: FittingHeight,
    pub series: SeriesData,
    pub nilpotent: bool,
    pub soluble: bool,
}

/// Fitting subgroup, the upper Fitting series `F_{i+1}/F_i = F(G/F_i)` and
/// the Fitting height.
pub fn fitting_data(g: &FiniteGroup) -> FittingData {
    let fitting = fitting_subgroup(g);
    let soluble = is_soluble(g, &g.whole());
    let mut terms = vec![g.trivial()];
    let mut current = g.trivial();
    let height = loop {
        if current.order() == g.order() {
            break FittingHeight::Finite(terms.len() - 1);
        }
        let (q, proj) = quotient_group(g, &current).expect("Fitting terms are normal");
        let fq = fitting_subgroup(&q);
        if fq.is_trivial() {
            break FittingHeight::Infinite;
        }
        let pre: Vec<usize> = g.elements().filter(|&x| fq.contains(proj[x])).collect();
        current = Subgroup::generated(g, &pre);
        terms.push(current.clone());
    };
    let limit = terms.last().expect("non-empty").clone();
    FittingData {
        nilpotent: fitting.order() == g.order(),
        fitting,
        height,
        series: SeriesData {
            kind: SeriesKind::Fitting,
            terms,
            stabilized: true,
            limit,
        },
        soluble,
    }
}

/// The quotient `G/N` with cosets ordered by least member id, and the
/// projection from element ids to coset ids.
pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
    if !n.is_normal_in(g) {
        return Err(GroupError::NotNormal);
    }
    let mut proj = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if proj[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &m in n.members() {
            proj[g.mul(x, m)] = c;
        }
    }
    let k = reps.len();
    let mut table = vec![0u32; k * k];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * k + j] = proj[g.mul(a, b)] as u32;
        }
    }
    let gens = g
        .generators()
        .iter()
        .map(|(name, id)| (name.clone(), proj[*id]))
        .collect();
    let labels = reps.iter().map(|&r| format!("{}N", g.label(r))).collect();
    let q = FiniteGroup::from_table(format!("{}/N", g.name()), k, table, gens, Some(labels))?;
    Ok((q, proj))
}

/// Every normal subgroup, as joins of normal closures of single elements.
/// Sorted by order, then members.
pub fn normal_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut seen_class = FixedBitSet::with_capacity(g.order());
    let mut minimal: Vec<Subgroup> = Vec::new();
    for x in g.elements() {
        if seen_class.contains(x) {
            continue;
        }
        for t in g.elements() {
            seen_class.insert(g.conj(x, t));
        }
        let n = normal_closure(g, &[x]);
        if !minimal.contains(&n) {
            minimal.push(n);
        }
    }
    let mut all = minimal.clone();
    let mut frontier = minimal.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &minimal {
                if b.is_subgroup_of(a) {
                    continue;
                }
                let j = a.join(g, b.members());
                if !all.contains(&j) {
                    all.push(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members().cmp(b.members())));
    all
}
