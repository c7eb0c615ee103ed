//! The Zassenhaus `p`-filtration of a finite `p`-group and its graded Lie
//! algebra over `𝔽_p`.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::fp::{self, Subspace};
use crate::group::{FiniteGroup, Subgroup};
use crate::report::Outcome;
use crate::series::{self, is_p_power, is_prime};

/// Groups up to this order get an exhaustive well-definedness check.
pub const FULL_CHECK_LIMIT: usize = 64;
const WELL_DEFINED_SAMPLES: usize = 4096;
pub const DEFAULT_SEED: u64 = 0xE9E1;

#[derive(Debug, Error)]
pub enum ZError {
    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { order: usize, p: usize },
    #[error("inconsistent structure: {0}")]
    InconsistentStructure(String),
    #[error("coset identity fails at n = {n}")]
    HypothesisFails { n: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Debug, Clone)]
pub struct ZFiltration {
    group: Arc<FiniteGroup>,
    p: usize,
    /// `terms[i - 1] = G_i`; the last term is trivial.
    terms: Vec<Subgroup>,
    /// `δ(u)`; `None` is the `∞` marker of the identity.
    delta: Vec<Option<usize>>,
}

/// `G_i = ⟨g^{p^k} : g ∈ γ_j(G), j·p^k ≥ i⟩` for `i = 1, 2, …` until trivial.
pub fn zassenhaus_filtration(group: Arc<FiniteGroup>, p: usize) -> Result<ZFiltration, ZError> {
    if !is_prime(p) || !is_p_power(group.order(), p) {
        return Err(ZError::NotPGroup {
            order: group.order(),
            p,
        });
    }
    let g = &*group;
    let lcs = series::lower_central_series(g);
    let gamma = |j: usize| lcs.terms.get(j - 1).unwrap_or(&lcs.limit);
    let mut terms = vec![g.whole()];
    let mut i: usize = 1;
    while !terms.last().expect("non-empty").is_trivial() {
        i += 1;
        // For fixed k only the largest term γ_{⌈i/p^k⌉} matters, and k stops
        // once p^k ≥ i since further powers are powers of those.
        let mut gens = BTreeSet::new();
        let mut pk = 1usize;
        loop {
            for &x in gamma(i.div_ceil(pk)).members() {
                gens.insert(g.pow(x, pk as i64));
            }
            if pk >= i {
                break;
            }
            pk *= p;
        }
        gens.remove(&0);
        terms.push(Subgroup::generated(g, &gens.into_iter().collect::<Vec<_>>()));
    }
    let delta = g
        .elements()
        .map(|x| (x != 0).then(|| terms.iter().take_while(|t| t.contains(x)).count()))
        .collect();
    Ok(ZFiltration { group, p, terms, delta })
}

impl ZFiltration {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn terms(&self) -> &[Subgroup] {
        &self.terms
    }

    /// `G_i` for `i ≥ 1`; trivial past the end.
    pub fn term(&self, i: usize) -> &Subgroup {
        assert!(i >= 1, "filtration terms are indexed from 1");
        self.terms
            .get(i - 1)
            .unwrap_or_else(|| self.terms.last().expect("non-empty"))
    }

    /// Largest degree with a non-trivial factor.
    pub fn top_degree(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn delta(&self, x: usize) -> Option<usize> {
        self.delta[x]
    }

    /// `d_i = log_p |G_i : G_{i+1}|` for `i = 1..=top`.
    pub fn dimensions(&self) -> Vec<usize> {
        self.terms
            .windows(2)
            .map(|w| log_p(w[0].order() / w[1].order(), self.p))
            .collect()
    }

    /// `[G_i, G_j] ≤ G_{i+j}` for all `i, j`.
    pub fn check_strong_centrality(&self) -> Outcome {
        let g = &*self.group;
        let top = self.top_degree();
        for i in 1..=top {
            for j in i..=top {
                let c = self.term(i).commutator_with(g, self.term(j));
                if !c.is_subgroup_of(self.term(i + j)) {
                    return Outcome::fail(
                        json!({ "top_degree": top }),
                        json!({ "i": i, "j": j, "commutator_order": c.order() }),
                    );
                }
            }
        }
        Outcome::pass(json!({ "top_degree": top, "pairs": top * (top + 1) / 2 }))
    }

    /// Every `G_i / G_{i+1}` is elementary abelian.
    pub fn check_elementary_factors(&self) -> Outcome {
        let g = &*self.group;
        for i in 1..=self.top_degree() {
            let (gi, next) = (self.term(i), self.term(i + 1));
            if let Some(&x) = gi.members().iter().find(|&&x| !next.contains(g.pow(x, self.p as i64))) {
                return Outcome::fail(
                    json!({ "degree": i }),
                    json!({ "element": g.label(x), "reason": "p-th power leaves the next term" }),
                );
            }
            if !gi.commutator_with(g, gi).is_subgroup_of(next) {
                return Outcome::fail(json!({ "degree": i }), json!({ "reason": "factor is not abelian" }));
            }
        }
        Outcome::pass(json!({ "dimensions": self.dimensions() }))
    }
}

fn log_p(mut n: usize, p: usize) -> usize {
    let mut e = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0);
        n /= p;
        e += 1;
    }
    e
}

/// A homogeneous-or-not element of a graded Lie algebra; `parts[i - 1]` holds
/// the degree-`i` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LieVector {
    pub parts: Vec<Vec<u32>>,
}

impl LieVector {
    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|v| fp::is_zero(v))
    }

    pub fn degrees(&self) -> Vec<usize> {
        (1..=self.parts.len())
            .filter(|&i| !fp::is_zero(&self.parts[i - 1]))
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }
}

/// `D_p(G) = ⊕ G_i / G_{i+1}` with structure constants from commutators of
/// coset representatives.
#[derive(Debug, Clone)]
pub struct GradedLie {
    p: u32,
    dims: Vec<usize>,
    /// Global basis index of the first degree-`i` vector, at `offsets[i - 1]`.
    offsets: Vec<usize>,
    reps: Vec<Vec<usize>>,
    basis_degree: Vec<usize>,
    delta: Vec<Option<usize>>,
    /// Coordinates of each element in the factor of its own degree.
    coords: Vec<Vec<u32>>,
    /// `consts[a * D + b]` = `[e_a, e_b]` in degree `deg a + deg b`; empty past the top.
    consts: Vec<Vec<u32>>,
    /// Per-degree dimensions of the subalgebra generated by degree 1.
    generated_dims: Vec<usize>,
}

pub fn graded_lie(f: &ZFiltration) -> Result<GradedLie, ZError> {
    graded_lie_with_seed(f, DEFAULT_SEED)
}

pub fn graded_lie_with_seed(f: &ZFiltration, seed: u64) -> Result<GradedLie, ZError> {
    let g = &*f.group;
    let p = f.p as u32;
    let top = f.top_degree();
    let dims = f.dimensions();
    let mut offsets = Vec::with_capacity(top);
    let mut reps = Vec::with_capacity(top);
    let mut basis_degree = Vec::new();
    let mut coords = vec![Vec::new(); g.order()];
    for i in 1..=top {
        let (gi, next) = (f.term(i), f.term(i + 1));
        let mut span = next.clone();
        let mut r = Vec::new();
        for &x in gi.members() {
            if !span.contains(x) {
                r.push(x);
                span = span.join(g, &[x]);
            }
        }
        if r.len() != dims[i - 1] || span != *gi {
            return Err(ZError::InconsistentStructure(format!(
                "degree {i}: {} representatives for dimension {}",
                r.len(),
                dims[i - 1]
            )));
        }
        offsets.push(basis_degree.len());
        basis_degree.extend(std::iter::repeat_n(i, r.len()));
        let d = r.len();
        for code in 1..(f.p.pow(d as u32)) {
            let mut a = vec![0u32; d];
            let mut c = code;
            let mut prod = 0;
            for (t, &b) in r.iter().enumerate() {
                a[t] = (c % f.p) as u32;
                c /= f.p;
                prod = g.mul(prod, g.pow(b, a[t] as i64));
            }
            for &n in next.members() {
                coords[g.mul(prod, n)] = a.clone();
            }
        }
        reps.push(r);
    }
    let total = basis_degree.len();
    let mut lie = GradedLie {
        p,
        dims,
        offsets,
        reps,
        basis_degree,
        delta: f.delta.clone(),
        coords,
        consts: Vec::new(),
        generated_dims: Vec::new(),
    };
    let mut consts = Vec::with_capacity(total * total);
    for a in 0..total {
        for b in 0..total {
            let (i, j) = (lie.basis_degree[a], lie.basis_degree[b]);
            let c = g.commutator(lie.rep(a), lie.rep(b));
            match lie.image_in_degree(c, i + j) {
                Some(v) => consts.push(v),
                None => {
                    return Err(ZError::InconsistentStructure(format!(
                        "commutator of degree {i} and {j} representatives is not in G_{}",
                        i + j
                    )))
                }
            }
        }
    }
    lie.consts = consts;
    lie.check_well_defined(f, seed)?;
    lie.generated_dims = lie.compute_generated_dims();
    Ok(lie)
}

impl GradedLie {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len()
    }

    pub fn dimensions(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.basis_degree.len()
    }

    pub fn generated_dimensions(&self) -> &[usize] {
        &self.generated_dims
    }

    /// Coset representative of global basis vector `a`.
    pub fn rep(&self, a: usize) -> usize {
        let i = self.basis_degree[a];
        self.reps[i - 1][a - self.offsets[i - 1]]
    }

    pub fn representatives(&self, degree: usize) -> &[usize] {
        &self.reps[degree - 1]
    }

    pub fn zero(&self) -> LieVector {
        LieVector {
            parts: self.dims.iter().map(|&d| vec![0; d]).collect(),
        }
    }

    pub fn basis_vector(&self, a: usize) -> LieVector {
        let mut v = self.zero();
        let i = self.basis_degree[a];
        v.parts[i - 1][a - self.offsets[i - 1]] = 1;
        v
    }

    pub fn basis(&self) -> Vec<LieVector> {
        (0..self.total_dim()).map(|a| self.basis_vector(a)).collect()
    }

    /// Coordinates of `xG_{i+1}` when `x ∈ G_i`; empty past the top degree.
    pub fn image_in_degree(&self, x: usize, i: usize) -> Option<Vec<u32>> {
        let d = self.dims.get(i.wrapping_sub(1)).copied().unwrap_or(0);
        match self.delta[x] {
            None => Some(vec![0; d]),
            Some(e) if e > i => Some(vec![0; d]),
            Some(e) if e == i => Some(self.coords[x].clone()),
            Some(_) => None,
        }
    }

    /// The image of `x` in the factor of its own degree (zero for the identity).
    pub fn image(&self, x: usize) -> LieVector {
        let mut v = self.zero();
        if let Some(i) = self.delta[x] {
            v.parts[i - 1] = self.coords[x].clone();
        }
        v
    }

    pub fn image_at(&self, x: usize, i: usize) -> Option<LieVector> {
        let c = self.image_in_degree(x, i)?;
        let mut v = self.zero();
        if i >= 1 && i <= self.top_degree() {
            v.parts[i - 1] = c;
        }
        Some(v)
    }

    pub fn flatten(&self, v: &LieVector) -> Vec<u32> {
        v.parts.concat()
    }

    pub fn unflatten(&self, flat: &[u32]) -> LieVector {
        LieVector {
            parts: self
                .dims
                .iter()
                .zip(&self.offsets)
                .map(|(&d, &o)| flat[o..o + d].to_vec())
                .collect(),
        }
    }

    pub fn add(&self, u: &LieVector, v: &LieVector) -> LieVector {
        let mut w = u.clone();
        for (a, b) in w.parts.iter_mut().zip(&v.parts) {
            fp::axpy(a, 1, b, self.p);
        }
        w
    }

    pub fn scale(&self, c: u32, v: &LieVector) -> LieVector {
        let mut w = self.zero();
        for (a, b) in w.parts.iter_mut().zip(&v.parts) {
            fp::axpy(a, c % self.p, b, self.p);
        }
        w
    }

    pub fn bracket(&self, u: &LieVector, v: &LieVector) -> LieVector {
        let n = self.total_dim();
        let (fu, fv) = (self.flatten(u), self.flatten(v));
        let mut out = self.zero();
        for a in (0..n).filter(|&a| fu[a] != 0) {
            for b in (0..n).filter(|&b| fv[b] != 0) {
                let deg = self.basis_degree[a] + self.basis_degree[b];
                if deg > self.top_degree() {
                    continue;
                }
                let c = fu[a] * fv[b] % self.p;
                fp::axpy(&mut out.parts[deg - 1], c, &self.consts[a * n + b], self.p);
            }
        }
        out
    }

    /// Least `n ≥ 1` with `[w,_n v] = 0` for every basis vector `w`.
    pub fn ad_index(&self, v: &LieVector) -> usize {
        let mut current: Vec<LieVector> = self.basis();
        let mut n = 0;
        loop {
            n += 1;
            current = current
                .iter()
                .map(|w| self.bracket(w, v))
                .filter(|w| !w.is_zero())
                .collect();
            if current.is_empty() {
                return n;
            }
            // Brackets with a vector of positive degree raise the lowest degree.
            assert!(n <= self.top_degree() + 1, "ad-nilpotency failed in a graded algebra");
        }
    }

    /// Alternating, antisymmetric and Jacobi on all basis vectors.
    pub fn check_axioms(&self) -> Outcome {
        let basis = self.basis();
        let n = basis.len();
        for a in 0..n {
            if !self.bracket(&basis[a], &basis[a]).is_zero() {
                return Outcome::fail(json!({}), json!({ "alternating": a }));
            }
            for b in 0..n {
                let s = self.add(&self.bracket(&basis[a], &basis[b]), &self.bracket(&basis[b], &basis[a]));
                if !s.is_zero() {
                    return Outcome::fail(json!({}), json!({ "antisymmetry": [a, b] }));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.bracket(&basis[a], &basis[b]);
                for c in 0..n {
                    let bc = self.bracket(&basis[b], &basis[c]);
                    let ca = self.bracket(&basis[c], &basis[a]);
                    let sum = self.add(
                        &self.add(&self.bracket(&ab, &basis[c]), &self.bracket(&bc, &basis[a])),
                        &self.bracket(&ca, &basis[b]),
                    );
                    if !sum.is_zero() {
                        return Outcome::fail(json!({}), json!({ "jacobi": [a, b, c] }));
                    }
                }
            }
        }
        Outcome::pass(json!({ "basis_size": n, "jacobi_triples": n * n * n }))
    }

    fn check_well_defined(&self, f: &ZFiltration, seed: u64) -> Result<(), ZError> {
        let g = &*f.group;
        let top = self.top_degree();
        let check = |x: usize, i: usize, y: usize, j: usize| -> Result<(), ZError> {
            let expected = self.bracket(
                &self.image_at(x, i).expect("x in G_i"),
                &self.image_at(y, j).expect("y in G_j"),
            );
            let c = g.commutator(x, y);
            let actual = self.image_at(c, i + j);
            if actual.as_ref() != Some(&expected) {
                return Err(ZError::InconsistentStructure(format!(
                    "[{}, {}] disagrees with the structure constants in degree {}",
                    g.label(x),
                    g.label(y),
                    i + j
                )));
            }
            Ok(())
        };
        if g.order() <= FULL_CHECK_LIMIT {
            for i in 1..=top {
                for j in 1..=top {
                    for &x in f.term(i).members() {
                        for &y in f.term(j).members() {
                            check(x, i, y, j)?;
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..WELL_DEFINED_SAMPLES {
                let i = rng.gen_range(1..=top);
                let j = rng.gen_range(1..=top);
                let (gi, gj) = (f.term(i).members(), f.term(j).members());
                let x = gi[rng.gen_range(0..gi.len())];
                let y = gj[rng.gen_range(0..gj.len())];
                check(x, i, y, j)?;
            }
        }
        Ok(())
    }

    fn compute_generated_dims(&self) -> Vec<usize> {
        let top = self.top_degree();
        if top == 0 {
            return Vec::new();
        }
        let degree_one: Vec<LieVector> = (0..self.dims[0]).map(|a| self.basis_vector(a)).collect();
        let mut out = vec![self.dims[0]];
        let mut layer = degree_one.clone();
        for i in 2..=top {
            let mut span = Subspace::zero(self.p, self.dims[i - 1]);
            for u in &layer {
                for e in &degree_one {
                    span.insert(&self.bracket(u, e).parts[i - 1]);
                }
            }
            out.push(span.dim());
            layer = span
                .basis()
                .iter()
                .map(|row| {
                    let mut v = self.zero();
                    v.parts[i - 1] = row.clone();
                    v
                })
                .collect();
        }
        out
    }

    /// The chain `M ⊇ [M,H] ⊇ [[M,H],H] ⊇ …` with `M` the whole algebra and
    /// `H` the subalgebra generated by `gens`.
    pub fn iterated_action_nilpotency(&self, gens: &[LieVector]) -> ChainResult {
        let flat: Vec<Vec<u32>> = gens.iter().map(|v| self.flatten(v)).collect();
        iterated_action_chain(self.p, self.total_dim(), &flat, |a, b| {
            self.flatten(&self.bracket(&self.unflatten(a), &self.unflatten(b)))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum ChainResult {
    /// Least `ε` with `[M, H, …, H] = 0` (`ε` copies of `H`); `dims[t]` is the `t`-th term.
    Nilpotent { epsilon: usize, dims: Vec<usize> },
    /// The chain stopped shrinking at a non-zero subspace.
    Divergent { dims: Vec<usize> },
}

/// Subalgebra closure of `gens` followed by the descending action chain,
/// for any bilinear bracket on `𝔽_p^n`.
pub fn iterated_action_chain(
    p: u32,
    n: usize,
    gens: &[Vec<u32>],
    bracket: impl Fn(&[u32], &[u32]) -> Vec<u32>,
) -> ChainResult {
    let mut h = Subspace::span(p, n, gens);
    loop {
        let rows = h.basis().to_vec();
        let mut grew = false;
        for a in &rows {
            for b in &rows {
                grew |= h.insert(&bracket(a, b));
            }
        }
        if !grew {
            break;
        }
    }
    let mut m = Subspace::whole(p, n);
    let mut dims = vec![m.dim()];
    loop {
        let mut next = Subspace::zero(p, n);
        for a in m.basis() {
            for b in h.basis() {
                next.insert(&bracket(a, b));
            }
        }
        dims.push(next.dim());
        if next.dim() == 0 {
            return ChainResult::Nilpotent {
                epsilon: dims.len() - 1,
                dims,
            };
        }
        if next.dim() == m.dim() {
            return ChainResult::Divergent { dims };
        }
        m = next;
    }
}

/// `δ(u^p) ≥ p·δ(u)`, and `[x, ū^p] = [x,_p ū]` for every basis `x` when `u^p ≠ 1`.
pub fn verify_power_identities(f: &ZFiltration, lie: &GradedLie, u: usize) -> Outcome {
    let g = &*f.group;
    let Some(d) = f.delta(u) else {
        return Outcome::skipped("identity element");
    };
    let p = f.p;
    let up = g.pow(u, p as i64);
    let dup = f.delta(up);
    let degree_ok = dup.is_none_or(|e| e >= p * d);
    let details = json!({
        "u": g.label(u),
        "delta_u": d,
        "delta_u_p": dup.map_or(json!("inf"), |e| json!(e)),
    });
    if !degree_ok {
        return Outcome::fail(details, json!({ "u": g.label(u), "u_p": g.label(up) }));
    }
    if up == 0 {
        return Outcome::pass(details);
    }
    let w = lie.image_at(up, p * d).expect("degree check passed");
    let ubar = lie.image(u);
    for (a, x) in lie.basis().iter().enumerate() {
        let lhs = lie.bracket(x, &w);
        let mut rhs = x.clone();
        for _ in 0..p {
            rhs = lie.bracket(&rhs, &ubar);
        }
        if lhs != rhs {
            return Outcome::fail(
                details,
                json!({ "u": g.label(u), "basis_rep": g.label(lie.rep(a)), "lhs": lhs, "rhs": rhs }),
            );
        }
    }
    let mut details = details;
    details["bracket_checks"] = json!(lie.total_dim());
    Outcome::pass(details)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdParameters {
    pub i: usize,
    pub k: u32,
    pub normal_order: usize,
    pub m: usize,
    pub b: usize,
    pub bound: usize,
}

/// Whether `[[nb,_i g], g^{p^k}] = 1` for all `n ∈ N`; returns the first failing `n`.
pub fn coset_identity_violation(
    g: &FiniteGroup,
    p: usize,
    x: usize,
    i: usize,
    k: u32,
    n: &Subgroup,
    b: usize,
) -> Option<usize> {
    let gpk = g.pow(x, p.pow(k) as i64);
    n.members()
        .iter()
        .copied()
        .find(|&m| g.commutator(g.commutator_iter(g.mul(m, b), x, i), gpk) != 0)
}

/// Given the coset identity for `(i, k, N, b)`, the image of `x` is
/// ad-nilpotent of index at most `i + m + p^k` where `|P : N| = p^m`.
pub fn verify_ad_bound(
    f: &ZFiltration,
    lie: &GradedLie,
    x: usize,
    i: usize,
    k: u32,
    n: &Subgroup,
    b: usize,
) -> Result<Outcome, ZError> {
    let g = &*f.group;
    if !n.is_normal_in(g) {
        return Err(ZError::PreconditionViolated("N is not normal".into()));
    }
    let m = log_p(g.order() / n.order(), f.p);
    if let Some(bad) = coset_identity_violation(g, f.p, x, i, k, n, b) {
        return Err(ZError::HypothesisFails {
            n: g.label(bad).to_string(),
        });
    }
    let bound = i + m + f.p.pow(k);
    let index = lie.ad_index(&lie.image(x));
    let details = json!({
        "g": g.label(x),
        "i": i,
        "k": k,
        "m": m,
        "b": g.label(b),
        "ad_index": index,
        "bound": bound,
    });
    Ok(Outcome::check(
        index <= bound,
        details,
        || json!({ "g": g.label(x), "ad_index": index, "bound": bound }),
    ))
}

pub const SEARCH_MAX_I: usize = 4;
pub const SEARCH_MAX_K: u32 = 2;

/// Every `(i, k, N, b)` with `1 ≤ i ≤ 4`, `k ≤ 2`, `N` normal and `b` the
/// least element of a coset `Nb`, for which the coset identity holds.
pub fn admissible_ad_parameters(f: &ZFiltration, x: usize) -> Vec<AdParameters> {
    let g = &*f.group;
    let mut out = Vec::new();
    for n in series::normal_subgroups(g) {
        let m = log_p(g.order() / n.order(), f.p);
        let mut seen = fixedbitset::FixedBitSet::with_capacity(g.order());
        for b in g.elements() {
            if seen.contains(b) {
                continue;
            }
            for &y in n.members() {
                seen.insert(g.mul(y, b));
            }
            for i in 1..=SEARCH_MAX_I {
                for k in 0..=SEARCH_MAX_K {
                    if coset_identity_violation(g, f.p, x, i, k, &n, b).is_none() {
                        out.push(AdParameters {
                            i,
                            k,
                            normal_order: n.order(),
                            m,
                            b,
                            bound: i + m + f.p.pow(k),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Checks the ad bound for every admissible parameter tuple of `x`.
pub fn ad_bound_search(f: &ZFiltration, lie: &GradedLie, x: usize) -> Outcome {
    let g = &*f.group;
    let params = admissible_ad_parameters(f, x);
    let index = lie.ad_index(&lie.image(x));
    let Some(best) = params.iter().min_by_key(|t| (t.bound, t.i, t.k, t.m, t.b)) else {
        return Outcome::vacuous(json!({ "g": g.label(x), "admissible": 0 }));
    };
    let details = json!({
        "g": g.label(x),
        "ad_index": index,
        "admissible": params.len(),
        "minimal": { "i": best.i, "k": best.k, "m": best.m, "b": g.label(best.b), "bound": best.bound },
    });
    Outcome::check(
        index <= best.bound,
        details,
        || json!({ "g": g.label(x), "ad_index": index, "bound": best.bound, "i": best.i, "k": best.k, "m": best.m }),
    )
}
