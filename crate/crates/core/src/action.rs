//! Automorphism actions `A → Aut(G)`, centralizers and the coprime-action
//! lemmas on generation by centralizers, fixed-point covering and `[G,A]`.

use std::sync::Arc;

use serde_json::json;
use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, Subgroup};
use crate::report::Outcome;
use crate::series::{self, prime_divisors};
use crate::spec_text::ActionSpec;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("assignment is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no A-invariant Sylow {p}-subgroup found")]
    NotFound { p: usize },
    #[error("declared order {declared} but the automorphism has order {actual}")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An automorphism as a permutation of element ids; `x^φ = image[x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    image: Vec<u32>,
}

impl Automorphism {
    pub fn identity(g: &FiniteGroup) -> Self {
        Automorphism {
            image: (0..g.order() as u32).collect(),
        }
    }

    /// Extends images of the generators (in generator order) to all of `g`,
    /// checking that the result is a bijective homomorphism.
    pub fn from_generator_images(g: &FiniteGroup, images: &[usize]) -> Result<Self, ActionError> {
        let gens = g.generator_ids();
        assert_eq!(gens.len(), images.len(), "one image per generator");
        let n = g.order();
        let mut image = vec![u32::MAX; n];
        image[0] = 0;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (&s, &t) in gens.iter().zip(images) {
                let y = g.mul(x, s);
                let want = g.mul(image[x] as usize, t) as u32;
                if image[y] == u32::MAX {
                    image[y] = want;
                    queue.push(y);
                } else if image[y] != want {
                    return Err(ActionError::NotAutomorphism(format!(
                        "generator images violate a relation at {}",
                        g.label(y)
                    )));
                }
            }
        }
        let phi = Automorphism { image };
        phi.validate(g)?;
        Ok(phi)
    }

    /// Full check: bijection fixing the identity and `φ(xy) = φ(x)φ(y)`.
    pub fn validate(&self, g: &FiniteGroup) -> Result<(), ActionError> {
        let n = g.order();
        if self.image.len() != n || self.image[0] != 0 {
            return Err(ActionError::NotAutomorphism("identity not fixed".into()));
        }
        let mut seen = vec![false; n];
        for &v in &self.image {
            if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
                return Err(ActionError::NotAutomorphism("map is not a bijection".into()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if self.apply(g.mul(x, y)) != g.mul(self.apply(x), self.apply(y)) {
                    return Err(ActionError::NotAutomorphism(format!(
                        "image of {}·{} is not the product of images",
                        g.label(x),
                        g.label(y)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Builds from a raw image list without validation.
    pub fn from_images_unchecked(image: Vec<u32>) -> Self {
        Automorphism { image }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            image: self.image.iter().map(|&x| other.image[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut image = vec![0u32; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y as usize] = x as u32;
        }
        Automorphism { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.then(self);
            k += 1;
        }
        k
    }

    pub fn fixed_points(&self, g: &FiniteGroup) -> Subgroup {
        let fixed: Vec<usize> = g.elements().filter(|&x| self.apply(x) == x).collect();
        Subgroup::generated(g, &fixed)
    }

    pub fn image_of(&self, g: &FiniteGroup, h: &Subgroup) -> Subgroup {
        h.map(g, |x| self.apply(x))
    }
}

/// A homomorphism from a finite group `A` into `Aut(G)`, stored on every
/// element of `A`. Composition is a right action: `x^{ab} = (x^a)^b`.
#[derive(Debug, Clone)]
pub struct AutAction {
    name: String,
    target: Arc<FiniteGroup>,
    actor: Arc<FiniteGroup>,
    assignment: Vec<Automorphism>,
    coprime: bool,
}

/// Largest acting group for which every pair is checked.
pub const PAIRWISE_CHECK_LIMIT: usize = 64;

impl AutAction {
    /// Validates an action given by automorphisms on the generators of `A`.
    pub fn new(
        name: impl Into<String>,
        target: Arc<FiniteGroup>,
        actor: Arc<FiniteGroup>,
        generator_autos: &[Automorphism],
    ) -> Result<Self, ActionError> {
        let agens = actor.generator_ids();
        assert_eq!(
            agens.len(),
            generator_autos.len(),
            "one automorphism per generator of A"
        );
        for phi in generator_autos {
            phi.validate(&target)?;
        }
        let m = actor.order();
        let mut assignment: Vec<Option<Automorphism>> = vec![None; m];
        assignment[0] = Some(Automorphism::identity(&target));
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head];
            head += 1;
            for (&s, phi) in agens.iter().zip(generator_autos) {
                let b = actor.mul(a, s);
                let want = assignment[a].as_ref().expect("visited").then(phi);
                match &assignment[b] {
                    None => {
                        assignment[b] = Some(want);
                        queue.push(b);
                    }
                    Some(have) if *have != want => {
                        return Err(ActionError::NotHomomorphism(format!(
                            "relation of A fails at {}",
                            actor.label(b)
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        let assignment: Vec<Automorphism> = assignment
            .into_iter()
            .map(|a| a.expect("generators reach all of A"))
            .collect();
        if m <= PAIRWISE_CHECK_LIMIT {
            for a in 0..m {
                for b in 0..m {
                    if assignment[actor.mul(a, b)] != assignment[a].then(&assignment[b]) {
                        return Err(ActionError::NotHomomorphism(format!(
                            "image of {}·{} differs from the composite",
                            actor.label(a),
                            actor.label(b)
                        )));
                    }
                }
            }
        }
        let coprime = num_integer::gcd(m, target.order()) == 1;
        Ok(AutAction {
            name: name.into(),
            target,
            actor,
            assignment,
            coprime,
        })
    }

    /// Builds an action from its text form. Target generators missing from an
    /// `auto` line are fixed.
    pub fn from_spec(
        spec: &ActionSpec,
        target: Arc<FiniteGroup>,
        actor: Arc<FiniteGroup>,
    ) -> Result<Self, ActionError> {
        let mut autos = Vec::new();
        for (agen, _) in actor.generators() {
            let images: Vec<usize> = match spec.autos.iter().find(|a| &a.actor_gen == agen) {
                None => target.generator_ids(),
                Some(def) => {
                    for (src, _) in &def.images {
                        if target.generator_id(src).is_none() {
                            return Err(ActionError::UnknownGenerator(src.clone()));
                        }
                    }
                    let mut out = Vec::new();
                    for (gname, gid) in target.generators() {
                        match def.images.iter().find(|(s, _)| s == gname) {
                            Some((_, w)) => out.push(target.eval_word(w)?),
                            None => out.push(*gid),
                        }
                    }
                    out
                }
            };
            autos.push(Automorphism::from_generator_images(&target, &images)?);
        }
        for def in &spec.autos {
            if actor.generator_id(&def.actor_gen).is_none() {
                return Err(ActionError::UnknownGenerator(def.actor_gen.clone()));
            }
        }
        Self::new(spec.name.clone(), target, actor, &autos)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn actor(&self) -> &Arc<FiniteGroup> {
        &self.actor
    }

    pub fn is_coprime(&self) -> bool {
        self.coprime
    }

    pub fn automorphism(&self, a: usize) -> &Automorphism {
        &self.assignment[a]
    }

    /// Non-identity elements of `A`.
    pub fn nontrivial_actors(&self) -> std::ops::Range<usize> {
        1..self.actor.order()
    }

    pub fn is_faithful(&self) -> bool {
        self.assignment.iter().skip(1).all(|a| !a.is_identity())
    }

    /// `C_G(a)`.
    pub fn centralizer(&self, a: usize) -> Subgroup {
        self.assignment[a].fixed_points(&self.target)
    }

    /// `C_G(S)` for a set `S ⊆ A`.
    pub fn centralizer_of(&self, actors: &[usize]) -> Subgroup {
        let g = &self.target;
        let fixed: Vec<usize> = g
            .elements()
            .filter(|&x| actors.iter().all(|&a| self.assignment[a].apply(x) == x))
            .collect();
        Subgroup::generated(g, &fixed)
    }

    pub fn full_centralizer(&self) -> Subgroup {
        let all: Vec<usize> = self.actor.elements().collect();
        self.centralizer_of(&all)
    }

    pub fn is_invariant(&self, h: &Subgroup) -> bool {
        self.actor
            .generator_ids()
            .iter()
            .all(|&a| self.assignment[a].image_of(&self.target, h) == *h)
    }

    /// `[H, A] = ⟨h⁻¹ h^a : h ∈ H, a ∈ A⟩`.
    pub fn commutator_subgroup(&self, h: &Subgroup) -> Subgroup {
        let g = &self.target;
        let mut elems = Vec::new();
        for &x in h.members() {
            for a in self.actor.elements() {
                elems.push(g.mul(g.inv(x), self.assignment[a].apply(x)));
            }
        }
        elems.sort_unstable();
        elems.dedup();
        Subgroup::generated(g, &elems)
    }

    /// `A` is elementary abelian of order `q²`; returns `q`.
    pub fn actor_q_squared(&self) -> Option<usize> {
        let a = &self.actor;
        let ps = prime_divisors(a.order());
        match ps.as_slice() {
            [q] if a.order() == q * q && a.is_abelian() && a.exponent() == *q => Some(*q),
            _ => None,
        }
    }

    fn actor_is_cyclic(&self) -> bool {
        self.actor
            .elements()
            .any(|x| self.actor.element_order(x) == self.actor.order())
    }
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    /// `G = ⟨C_G(a) : a ∈ A^#⟩`.
    pub generation: Outcome,
    /// `C_{G/N}(A)` is the image of `C_G(A)`; absent when no `N` is given.
    pub covering: Option<Outcome>,
    /// `[[G,A],A] = [G,A]`.
    pub commutator: Outcome,
}

fn ids(g: &FiniteGroup, s: &Subgroup) -> Vec<String> {
    s.members().iter().map(|&x| g.label(x).to_string()).collect()
}

pub fn generation_by_centralizers(action: &AutAction) -> Outcome {
    if action.actor_is_cyclic() {
        return Outcome::skipped("acting group is cyclic");
    }
    if !action.actor.is_abelian() {
        return Outcome::skipped("acting group is not abelian");
    }
    let g = &action.target;
    let mut gens = Vec::new();
    for a in action.nontrivial_actors() {
        gens.extend_from_slice(action.centralizer(a).members());
    }
    gens.sort_unstable();
    gens.dedup();
    let generated = Subgroup::generated(g, &gens);
    if generated.order() == g.order() {
        Outcome::pass(json!({ "generated_order": generated.order(), "group_order": g.order() }))
    } else {
        Outcome::fail(
            json!({ "generated_order": generated.order(), "group_order": g.order() }),
            json!({ "generated_subgroup": ids(g, &generated) }),
        )
    }
}

pub fn fixed_point_covering(action: &AutAction, n: &Subgroup) -> Result<Outcome, ActionError> {
    let g = &action.target;
    if !n.is_normal_in(g) {
        return Err(ActionError::PreconditionViolated("N is not normal".into()));
    }
    if !action.is_invariant(n) {
        return Err(ActionError::PreconditionViolated("N is not A-invariant".into()));
    }
    let (q, proj) = series::quotient_group(g, n)?;
    // Coset representatives are the least members, so rep(c) is the first x with proj[x] = c.
    let mut reps = vec![usize::MAX; q.order()];
    for x in g.elements().rev() {
        reps[proj[x]] = x;
    }
    let agens = action.actor.generator_ids();
    let fixed_quotient: Vec<usize> = (0..q.order())
        .filter(|&c| agens.iter().all(|&a| proj[action.assignment[a].apply(reps[c])] == c))
        .collect();
    let mut image: Vec<usize> = action.full_centralizer().members().iter().map(|&x| proj[x]).collect();
    image.sort_unstable();
    image.dedup();
    let details = json!({
        "normal_order": n.order(),
        "quotient_fixed_points": fixed_quotient.len(),
        "image_of_fixed_points": image.len(),
    });
    if fixed_quotient == image {
        Ok(Outcome::pass(details))
    } else {
        let missing: Vec<String> = fixed_quotient
            .iter()
            .filter(|c| !image.contains(c))
            .map(|&c| q.label(c).to_string())
            .collect();
        Ok(Outcome::fail(details, json!({ "uncovered_cosets": missing })))
    }
}

pub fn commutator_idempotence(action: &AutAction) -> Outcome {
    let g = &action.target;
    let ga = action.commutator_subgroup(&g.whole());
    let gaa = action.commutator_subgroup(&ga);
    let details = json!({ "ga_order": ga.order(), "gaa_order": gaa.order() });
    if ga == gaa {
        Outcome::pass(details)
    } else {
        Outcome::fail(details, json!({ "ga": ids(g, &ga), "gaa": ids(g, &gaa) }))
    }
}

/// Runs the three coprime-action lemma checks. Non-coprime actions are refused.
pub fn check_action_lemmas(action: &AutAction, n: Option<&Subgroup>) -> Result<LemmaReport, ActionError> {
    if !action.coprime {
        return Err(ActionError::PreconditionViolated(format!(
            "action '{}' is not coprime",
            action.name
        )));
    }
    let covering = n.map(|n| fixed_point_covering(action, n)).transpose()?;
    Ok(LemmaReport {
        generation: generation_by_centralizers(action),
        covering,
        commutator: commutator_idempotence(action),
    })
}

/// The first conjugate (by conjugating id) of a fixed Sylow `p`-subgroup that
/// every element of `A` maps to itself.
pub fn invariant_sylow(action: &AutAction, p: usize) -> Result<Subgroup, ActionError> {
    if !action.coprime {
        return Err(ActionError::PreconditionViolated("action is not coprime".into()));
    }
    let g = &action.target;
    let s = series::sylow_subgroup(g, p);
    series::conjugates(g, &s)
        .into_iter()
        .find(|c| action.is_invariant(c))
        .ok_or(ActionError::NotFound { p })
}

/// A semidirect product `G⟨t⟩` where conjugation by `t` acts as `φ`.
#[derive(Debug, Clone)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    /// `embed[x]` is the id of `x ∈ G` inside the product.
    pub embed: Vec<usize>,
    /// The id of `t`.
    pub t: usize,
    pub base: Subgroup,
}

/// Builds `G⟨φ⟩` of order `|G|·d` with `t⁻¹ x t = φ(x)`.
pub fn semidirect_product(g: &FiniteGroup, phi: &Automorphism, d: usize) -> Result<SemidirectProduct, ActionError> {
    phi.validate(g)?;
    let actual = phi.order();
    if actual != d {
        return Err(ActionError::OrderMismatch { declared: d, actual });
    }
    let n = g.order();
    let total = n * d;
    // inv_pow[j] = φ^{-j}; then t^j h = φ^{-j}(h) t^j.
    let phi_inv = phi.inverse();
    let mut inv_pow = vec![Automorphism::identity(g)];
    for j in 1..d {
        inv_pow.push(inv_pow[j - 1].then(&phi_inv));
    }
    let id = |x: usize, j: usize| j * n + x;
    let mut table = vec![0u32; total * total];
    for (j1, conj) in inv_pow.iter().enumerate() {
        for x1 in 0..n {
            let row = id(x1, j1) * total;
            for j2 in 0..d {
                for x2 in 0..n {
                    let x = g.mul(x1, conj.apply(x2));
                    table[row + id(x2, j2)] = id(x, (j1 + j2) % d) as u32;
                }
            }
        }
    }
    let mut gens: Vec<(String, usize)> = g.generators().to_vec();
    let t = if d > 1 { id(0, 1) } else { 0 };
    if d > 1 {
        gens.push(("t".to_string(), t));
    }
    let labels = (0..total)
        .map(|k| {
            let (x, j) = (k % n, k / n);
            match j {
                0 => g.label(x).to_string(),
                1 => format!("{}·t", g.label(x)),
                _ => format!("{}·t^{j}", g.label(x)),
            }
        })
        .collect();
    let group = FiniteGroup::from_table(format!("{}⋊C{d}", g.name()), total, table, gens, Some(labels))?;
    let embed: Vec<usize> = (0..n).collect();
    let base = Subgroup::generated(&group, &embed);
    Ok(SemidirectProduct { group, embed, t, base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use crate::spec_text::{parse_action_spec, parse_group_spec};

    pub(crate) fn load(text: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::load(&parse_group_spec(text).unwrap()).unwrap())
    }

    fn c3c3() -> Arc<FiniteGroup> {
        load("group C3xC3\nkind permutation degree 6\ngen g1 = (1 2 3)\ngen g2 = (4 5 6)\nend\n")
    }
    fn c2c2() -> Arc<FiniteGroup> {
        load("group C2xC2\nkind permutation degree 4\ngen a = (1 2)\ngen b = (3 4)\nend\n")
    }
    fn inversion_action() -> AutAction {
        let spec = parse_action_spec(
            "action inv on C3xC3\nactor C2xC2\nauto a: g1 -> g1^-1, g2 -> g2\nauto b: g1 -> g1, g2 -> g2^-1\nend\n",
        )
        .unwrap();
        AutAction::from_spec(&spec, c3c3(), c2c2()).unwrap()
    }

    #[test]
    fn trivial_actor() {
        let g = c3c3();
        let one = load("group C1\nkind permutation degree 1\ngen e = ()\nend\n");
        let act = AutAction::new("triv", g.clone(), one, &[Automorphism::identity(&g)]).unwrap();
        assert!(act.is_coprime());
        assert_eq!(act.centralizer(0).order(), 9);
    }

    #[test]
    fn inversion_action_is_valid_and_coprime() {
        let act = inversion_action();
        assert!(act.is_coprime());
        assert!(act.is_faithful());
        assert_eq!(act.actor_q_squared(), Some(2));
    }

    #[test]
    fn centralizers_by_fixed_point_scan() {
        let act = inversion_action();
        let g = act.target().clone();
        let a = act.actor().generator_id("a").unwrap();
        let b = act.actor().generator_id("b").unwrap();
        let ab = act.actor().mul(a, b);
        assert_eq!(act.centralizer(0).order(), 9);
        let ca = act.centralizer(a);
        assert_eq!(ca.order(), 3);
        let g2 = g.generator_id("g2").unwrap();
        assert!(ca.contains(g2));
        // Oracle: scan each element directly through the generator automorphisms.
        let fixed_by_ab = g
            .elements()
            .filter(|&x| act.automorphism(b).apply(act.automorphism(a).apply(x)) == x)
            .count();
        assert_eq!(fixed_by_ab, 1);
        assert!(act.centralizer(ab).is_trivial());
    }

    #[test]
    fn non_bijective_generator_map_is_rejected() {
        let g = c3c3();
        let g1 = g.generator_id("g1").unwrap();
        let err = Automorphism::from_generator_images(&g, &[g1, g1]).unwrap_err();
        assert!(matches!(err, ActionError::NotAutomorphism(_)));
    }

    #[test]
    fn relation_violation_is_not_homomorphism() {
        // C2 acting by an automorphism of order 3 breaks a^2 = 1.
        let v = load("group V4\nkind permutation degree 4\ngen x = (1 2)(3 4)\ngen y = (1 3)(2 4)\nend\n");
        let c2 = load("group C2\nkind permutation degree 2\ngen a = (1 2)\nend\n");
        let spec = parse_action_spec("action bad on V4\nactor C2\nauto a: x -> y, y -> x y\nend\n").unwrap();
        let err = AutAction::from_spec(&spec, v, c2).unwrap_err();
        assert!(matches!(err, ActionError::NotHomomorphism(_)));
    }

    #[test]
    fn lemma_checks_on_inversion_action() {
        let act = inversion_action();
        let g = act.target().clone();
        let n = Subgroup::generated(&g, &[g.generator_id("g1").unwrap()]);
        let rep = check_action_lemmas(&act, Some(&n)).unwrap();
        assert_eq!(rep.generation.verdict, Verdict::Pass);
        assert_eq!(rep.covering.as_ref().unwrap().verdict, Verdict::Pass);
        assert_eq!(rep.commutator.verdict, Verdict::Pass);
        assert_eq!(act.commutator_subgroup(&g.whole()).order(), 9);
        assert!(act.full_centralizer().is_trivial());
    }

    #[test]
    fn non_coprime_is_refused() {
        let s3 = load("group S3\nkind permutation degree 3\ngen a = (1 2)\ngen b = (1 2 3)\nend\n");
        let c2 = load("group C2\nkind permutation degree 2\ngen t = (1 2)\nend\n");
        // Conjugation by (1 2).
        let spec = parse_action_spec("action conj on S3\nactor C2\nauto t: a -> a, b -> b^-1\nend\n").unwrap();
        let act = AutAction::from_spec(&spec, s3, c2).unwrap();
        assert!(!act.is_coprime());
        assert!(matches!(
            check_action_lemmas(&act, None),
            Err(ActionError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn invariant_sylow_examples() {
        let act = inversion_action();
        assert_eq!(invariant_sylow(&act, 3).unwrap().order(), 9);
        let s3 = load("group S3\nkind permutation degree 3\ngen a = (1 2)\ngen b = (1 2 3)\nend\n");
        let one = load("group C1\nkind permutation degree 1\ngen e = ()\nend\n");
        let triv = AutAction::new("t", s3.clone(), one, &[Automorphism::identity(&s3)]).unwrap();
        let p3 = invariant_sylow(&triv, 3).unwrap();
        assert_eq!(p3.order(), 3);
        assert!(p3.is_normal_in(&s3));
    }

    #[test]
    fn semidirect_examples() {
        let c7 = load("group C7\nkind permutation degree 7\ngen g = (1 2 3 4 5 6 7)\nend\n");
        let same = semidirect_product(&c7, &Automorphism::identity(&c7), 1).unwrap();
        assert_eq!(same.group.order(), 7);

        let g = c7.generator_id("g").unwrap();
        let inv = Automorphism::from_generator_images(&c7, &[c7.inv(g)]).unwrap();
        let sd = semidirect_product(&c7, &inv, 2).unwrap();
        let d14 = &sd.group;
        assert_eq!(d14.order(), 14);
        assert!(sd.base.is_normal_in(d14));
        // Dihedral: every element outside the rotation subgroup is an involution.
        assert!(d14
            .elements()
            .filter(|&x| !sd.base.contains(x))
            .all(|x| d14.element_order(x) == 2));
        for x in c7.elements() {
            assert_eq!(d14.conj(sd.embed[x], sd.t), sd.embed[inv.apply(x)]);
        }
        assert!(matches!(
            semidirect_product(&c7, &inv, 4),
            Err(ActionError::OrderMismatch { declared: 4, actual: 2 })
        ));

        let c33 = c3c3();
        let a = Automorphism::from_generator_images(
            &c33,
            &[
                c33.inv(c33.generator_id("g1").unwrap()),
                c33.generator_id("g2").unwrap(),
            ],
        )
        .unwrap();
        let sd = semidirect_product(&c33, &a, 2).unwrap();
        assert_eq!(sd.group.order(), 18);
        for x in c33.elements() {
            assert_eq!(sd.group.conj(sd.embed[x], sd.t), sd.embed[a.apply(x)]);
        }
    }
}
