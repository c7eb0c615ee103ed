//! Exact finite-group and free Lie algebra computations around Engel sinks.
//!
//! The finite-group side covers subgroup series, coprime automorphism
//! actions, smallest Engel sinks and the Zassenhaus filtration with its
//! graded Lie algebra. The Lie side covers truncated free Lie algebras over
//! exact rationals, the Baker–Campbell–Hausdorff series, a `p`-scaled
//! nilpotent model of powerful Lie lattices and the Vandermonde elimination
//! of the linear terms of an Engel commutator.

pub mod action;
pub mod bch;
pub mod catalog;
pub mod fp;
pub mod freelie;
pub mod group;
pub mod linearize;
pub mod report;
pub mod scaled;
pub mod series;
pub mod sink;
pub mod spec_text;
pub mod suites;
pub mod zassenhaus;

#[cfg(test)]
pub(crate) mod testutil {
    use crate::group::FiniteGroup;
    use crate::spec_text::parse_group_spec;

    /// Permutation group on `degree` points from cycle-notation generators.
    pub fn perm_group(name: &str, degree: usize, gens: &[&str]) -> FiniteGroup {
        let mut text = format!("group {name}\nkind permutation degree {degree}\n");
        for (i, g) in gens.iter().enumerate() {
            text.push_str(&format!("gen g{} = {}\n", i + 1, g));
        }
        text.push_str("end\n");
        FiniteGroup::load(&parse_group_spec(&text).expect("test spec parses")).expect("test group loads")
    }
}
