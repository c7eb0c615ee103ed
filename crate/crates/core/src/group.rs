//! Finite groups as dense multiplication tables.
//!
//! Elements are ids `0..order` with id 0 the identity. Groups loaded from a
//! generator spec get their ids by breadth-first closure from the generators
//! (in generator order), so every downstream tie-break is reproducible.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::spec_text::{self, GenBody, GroupKind, GroupSpec, ParseError, Word};

pub const DEFAULT_CAP: usize = 5000;
/// Groups up to this order get an exhaustive associativity check.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 200;
const SAMPLED_TRIPLES: usize = 100_000;
const AXIOM_SEED: u64 = 0xE9E1;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("closure exceeds cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("group axiom violated: {0}")]
    AxiomViolation(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("cannot parse element '{text}': {reason}")]
    BadElement { text: String, reason: String },
}

/// A permutation of `0..degree`, composed left to right: `(a * b)(i) = b(a(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u16>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u16).collect())
    }

    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Self {
        let mut p = Self::identity(degree);
        for c in cycles {
            for (i, &pt) in c.iter().enumerate() {
                let next = c[(i + 1) % c.len()];
                p.0[pt - 1] = (next - 1) as u16;
            }
        }
        p
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut j = self.0[start] as usize;
            while j != start {
                seen[j] = true;
                cycle.push(j + 1);
                j = self.0[j] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<(String, usize)>,
    labels: Vec<String>,
    perms: Option<Vec<Perm>>,
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table and checks the axioms.
    ///
    /// `table[x * order + y]` is the id of `x * y`; id 0 must be the identity.
    pub fn from_table(
        name: impl Into<String>,
        order: usize,
        table: Vec<u32>,
        generators: Vec<(String, usize)>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        if order == 0 || table.len() != order * order {
            return Err(GroupError::AxiomViolation("table has wrong shape".into()));
        }
        if table.iter().any(|&v| v as usize >= order) {
            return Err(GroupError::AxiomViolation("table entry out of range".into()));
        }
        for x in 0..order {
            if table[x] as usize != x || table[x * order] as usize != x {
                return Err(GroupError::AxiomViolation(format!(
                    "id 0 is not a two-sided identity at element {x}"
                )));
            }
        }
        let mut inverse = vec![u32::MAX; order];
        for x in 0..order {
            match (0..order).find(|&y| table[x * order + y] == 0) {
                Some(y) if table[y * order + x] == 0 => inverse[x] = y as u32,
                _ => {
                    return Err(GroupError::AxiomViolation(format!(
                        "element {x} has no two-sided inverse"
                    )))
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (0..order).map(|i| format!("#{i}")).collect());
        let group = FiniteGroup {
            name: name.into(),
            order,
            table,
            inverse,
            generators,
            labels,
            perms: None,
        };
        group.check_associativity()?;
        group.check_generation()?;
        Ok(group)
    }

    /// Re-runs the associativity check (exhaustive up to
    /// `EXHAUSTIVE_AXIOM_LIMIT`, sampled beyond) and the generation check.
    pub fn verify_axioms(&self) -> Result<(), GroupError> {
        self.check_associativity()?;
        self.check_generation()
    }

    fn check_associativity(&self) -> Result<(), GroupError> {
        let n = self.order;
        let fail = |x: usize, y: usize, z: usize| {
            GroupError::AxiomViolation(format!("associativity fails on ({x}, {y}, {z})"))
        };
        if n <= EXHAUSTIVE_AXIOM_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    let xy = self.mul(x, y);
                    for z in 0..n {
                        if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                            return Err(fail(x, y, z));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SEED);
            for _ in 0..SAMPLED_TRIPLES {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                    return Err(fail(x, y, z));
                }
            }
        }
        Ok(())
    }

    fn check_generation(&self) -> Result<(), GroupError> {
        let gens: Vec<usize> = self.generators.iter().map(|g| g.1).collect();
        let reached = Subgroup::generated(self, &gens).order();
        if reached != self.order {
            return Err(GroupError::AxiomViolation(format!(
                "generators reach {reached} of {} elements",
                self.order
            )));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn generator_ids(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.1).collect()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn perms(&self) -> Option<&[Perm]> {
        self.perms.as_deref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        let a = self.mul(self.inv(x), self.inv(y));
        self.mul(self.mul(a, x), y)
    }

    /// Left-normed `[x, y, …, y]` with `k` copies of `y`.
    pub fn commutator_iter(&self, x: usize, y: usize, k: usize) -> usize {
        (0..k).fold(x, |acc, _| self.commutator(acc, y))
    }

    /// `x^y = y⁻¹ x y`.
    #[inline]
    pub fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(y), x), y)
    }

    pub fn pow(&self, x: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(x) } else { x };
        let mut acc = 0;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut k = 1;
        while acc != 0 {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|x| self.element_order(x)).fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generator_ids();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_members(self, (0..self.order).collect(), self.generator_ids())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_members(self, vec![0], Vec::new())
    }

    pub fn generator_id(&self, name: &str) -> Option<usize> {
        self.generators.iter().find(|g| g.0 == name).map(|g| g.1)
    }

    pub fn eval_word(&self, word: &Word) -> Result<usize, GroupError> {
        let mut acc = 0;
        for (name, e) in &word.0 {
            let g = self.generator_id(name).ok_or_else(|| GroupError::BadElement {
                text: word.to_string(),
                reason: format!("unknown generator '{name}'"),
            })?;
            acc = self.mul(acc, self.pow(g, *e));
        }
        Ok(acc)
    }

    /// Parses an element given as cycles (permutation groups), a word in the
    /// generators, or `#<id>`.
    pub fn parse_element(&self, text: &str) -> Result<usize, GroupError> {
        let t = text.trim();
        let bad = |reason: String| GroupError::BadElement {
            text: text.to_string(),
            reason,
        };
        if let Some(id) = t.strip_prefix('#') {
            return id
                .parse::<usize>()
                .ok()
                .filter(|&i| i < self.order)
                .ok_or_else(|| bad("id out of range".into()));
        }
        if t.starts_with('(') {
            let perms = self
                .perms
                .as_ref()
                .ok_or_else(|| bad("cycle notation needs a permutation group".into()))?;
            let degree = perms[0].0.len();
            let cycles = spec_text::parse_cycles(t, Some(degree)).map_err(|(_, m)| bad(m))?;
            let target = Perm::from_cycles(degree, &cycles);
            return perms
                .iter()
                .position(|p| *p == target)
                .ok_or_else(|| bad("permutation is not in the group".into()));
        }
        let word = spec_text::parse_word(t).map_err(|(_, m)| bad(m))?;
        self.eval_word(&word)
    }

    /// Loads a group from its text spec with the default closure cap.
    pub fn load(spec: &GroupSpec) -> Result<Self, GroupError> {
        Self::load_with_cap(spec, DEFAULT_CAP)
    }

    pub fn load_with_cap(spec: &GroupSpec, cap: usize) -> Result<Self, GroupError> {
        match spec.kind {
            GroupKind::Permutation { degree } => {
                let gens: Vec<(String, Perm)> = spec
                    .gens
                    .iter()
                    .map(|g| match &g.body {
                        GenBody::Cycles(c) => (g.name.clone(), Perm::from_cycles(degree, c)),
                        GenBody::Row(_) => unreachable!("parser yields cycles for permutation groups"),
                    })
                    .collect();
                let (perms, gen_ids, table) = closure_table(Perm::identity(degree), &gens, cap, |a, b| a.then(b))?;
                let labels = perms.iter().map(|p| spec_text::format_cycles(&p.cycles())).collect();
                let mut g = FiniteGroup::from_table(spec.name.clone(), perms.len(), table, gen_ids, Some(labels))?;
                g.perms = Some(perms);
                Ok(g)
            }
            GroupKind::Table { order } => {
                // Each row is the left-multiplication permutation of its generator.
                let mut gens = Vec::new();
                for g in &spec.gens {
                    let GenBody::Row(row) = &g.body else {
                        unreachable!("parser yields rows for table groups")
                    };
                    let mut seen = vec![false; order];
                    for &v in row {
                        if std::mem::replace(&mut seen[v], true) {
                            return Err(GroupError::AxiomViolation(format!(
                                "row of generator '{}' is not a permutation",
                                g.name
                            )));
                        }
                    }
                    gens.push((g.name.clone(), row.iter().map(|&v| v as u16).collect::<Vec<_>>()));
                }
                let identity: Vec<u16> = (0..order as u16).collect();
                // Closure by right multiplication: e * g is lambda_e after lambda_g.
                if order > cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                let closed = closure_table(identity, &gens, order + 1, |a: &Vec<u16>, b: &Vec<u16>| {
                    b.iter().map(|&j| a[j as usize]).collect()
                });
                let (lambdas, gen_ids, table) = match closed {
                    Err(GroupError::CapExceeded { .. }) => {
                        return Err(GroupError::AxiomViolation(format!(
                            "generator rows close to more than {order} elements"
                        )))
                    }
                    other => other?,
                };
                if lambdas.len() != order {
                    return Err(GroupError::AxiomViolation(format!(
                        "generator rows close to {} elements, declared order {order}",
                        lambdas.len()
                    )));
                }
                let mut labels_seen = vec![false; order];
                for l in &lambdas {
                    if std::mem::replace(&mut labels_seen[l[0] as usize], true) {
                        return Err(GroupError::AxiomViolation(
                            "rows are inconsistent with a group table".into(),
                        ));
                    }
                }
                let labels = lambdas.iter().map(|l| format!("{}", l[0])).collect();
                FiniteGroup::from_table(spec.name.clone(), order, table, gen_ids, Some(labels))
            }
        }
    }

    /// Renames the group.
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Elements in id order, generator ids and the full product table.
type Closure<T> = (Vec<T>, Vec<(String, usize)>, Vec<u32>);

/// Breadth-first closure from named generators.
fn closure_table<T, F>(identity: T, gens: &[(String, T)], cap: usize, compose: F) -> Result<Closure<T>, GroupError>
where
    T: Clone + Eq + std::hash::Hash,
    F: Fn(&T, &T) -> T,
{
    let mut elems = vec![identity.clone()];
    let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
    // parent[y] = (x, generator slot) with y = x * gen.
    let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut rmul: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        for (gi, (_, g)) in gens.iter().enumerate() {
            let y = compose(&x, g);
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    let id = elems.len();
                    if id >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    index.insert(y.clone(), id);
                    elems.push(y);
                    parent.push((head, gi));
                    id
                }
            };
            rmul[gi].push(id as u32);
        }
        head += 1;
    }
    let n = elems.len();
    let gen_ids = gens.iter().map(|(name, g)| (name.clone(), index[g])).collect();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        let row = &mut table[a * n..(a + 1) * n];
        row[0] = a as u32;
        for y in 1..n {
            let (px, gi) = parent[y];
            row[y] = rmul[gi][row[px] as usize];
        }
    }
    Ok((elems, gen_ids, table))
}

/// A subgroup stored as a sorted member list plus a membership mask.
#[derive(Debug, Clone)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: FixedBitSet,
    gens: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    fn from_members(g: &FiniteGroup, mut members: Vec<usize>, gens: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = FixedBitSet::with_capacity(g.order());
        for &m in &members {
            mask.insert(m);
        }
        Subgroup { members, mask, gens }
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated(g: &FiniteGroup, gens: &[usize]) -> Self {
        let mut mask = FixedBitSet::with_capacity(g.order());
        mask.insert(0);
        let mut list = vec![0usize];
        let mut kept = Vec::new();
        for &s in gens {
            if !mask.contains(s) {
                kept.push(s);
            }
            extend_closure(g, &mut mask, &mut list, &kept, s);
        }
        list.sort_unstable();
        Subgroup {
            members: list,
            mask,
            gens: kept,
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        g.generator_ids()
            .iter()
            .all(|&t| self.gens.iter().all(|&s| self.contains(g.conj(s, t))))
    }

    /// Closure of this subgroup together with extra elements.
    pub fn join(&self, g: &FiniteGroup, extra: &[usize]) -> Subgroup {
        let mut mask = self.mask.clone();
        let mut list = self.members.clone();
        let mut kept = self.gens.clone();
        for &s in extra {
            if !mask.contains(s) {
                kept.push(s);
                extend_closure(g, &mut mask, &mut list, &kept, s);
            }
        }
        list.sort_unstable();
        Subgroup {
            members: list,
            mask,
            gens: kept,
        }
    }

    pub fn intersection(&self, g: &FiniteGroup, other: &Subgroup) -> Subgroup {
        let common: Vec<usize> = self.members.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup::generated(g, &common)
    }

    /// The image of the subgroup under conjugation by `t`.
    pub fn conjugate(&self, g: &FiniteGroup, t: usize) -> Subgroup {
        let members = self.members.iter().map(|&x| g.conj(x, t)).collect();
        let gens = self.gens.iter().map(|&x| g.conj(x, t)).collect();
        Subgroup::from_members(g, members, gens)
    }

    /// Image under an arbitrary element map known to be a homomorphism.
    pub fn map(&self, g: &FiniteGroup, f: impl Fn(usize) -> usize) -> Subgroup {
        let members = self.members.iter().map(|&x| f(x)).collect();
        let gens = self.gens.iter().map(|&x| f(x)).collect();
        Subgroup::from_members(g, members, gens)
    }

    /// `[H, K] = ⟨[h, k] : h ∈ H, k ∈ K⟩`.
    pub fn commutator_with(&self, g: &FiniteGroup, other: &Subgroup) -> Subgroup {
        let mut seen = FixedBitSet::with_capacity(g.order());
        let mut comms = Vec::new();
        for &h in &self.members {
            for &k in &other.members {
                let c = g.commutator(h, k);
                if !seen.put(c) {
                    comms.push(c);
                }
            }
        }
        Subgroup::generated(g, &comms)
    }
}

/// Adds `s` to the closure `list`/`mask` already closed under `gens`.
fn extend_closure(g: &FiniteGroup, mask: &mut FixedBitSet, list: &mut Vec<usize>, gens: &[usize], s: usize) {
    if mask.contains(s) {
        return;
    }
    // Every new element of ⟨H, s⟩ is reached by right-multiplying products by
    // the generators, starting from the old members.
    let all_gens: Vec<usize> = gens.iter().copied().chain(std::iter::once(s)).collect();
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        for &t in &all_gens {
            let y = g.mul(x, t);
            if !mask.put(y) {
                list.push(y);
            }
        }
        head += 1;
    }
}
