//! The bundled catalog: groups and actions as text specs, plus an index of
//! tags and regression values.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::Deserialize;
use serde_json::json;
use thiserror::Error;

use crate::action::{ActionError, AutAction};
use crate::group::{FiniteGroup, GroupError};
use crate::report::Outcome;
use crate::series::{self, FittingHeight};
use crate::spec_text::{parse_action_spec, parse_group_spec, ActionSpec, GroupSpec, ParseError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("no catalog entry named '{0}'")]
    UnknownEntry(String),
    #[error("catalog index: {0}")]
    Index(String),
    #[error("entry '{name}': {source}")]
    Parse { name: String, source: ParseError },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

macro_rules! sources {
    ($dir:literal, $ext:literal: $($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../catalog/", $dir, "/", $name, $ext)))),*]
    };
}

const GROUP_SOURCES: &[(&str, &str)] = sources!("groups", ".grp":
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9",
    "C2xC2", "C3xC3", "E16", "V4",
    "S3", "S4", "A4", "D8", "D14", "D16", "Q8", "Q8xQ8",
    "Heis3", "Heis5", "SL23", "C7C3", "C7C3xC5", "S3xC3", "F25C3",
);

const ACTION_SOURCES: &[(&str, &str)] = sources!("actions", ".act":
    "c2c2_on_c3c3", "c3c3_on_e16", "c2c2_on_heis3", "c2c2_on_f25c3",
    "c2c2_on_c7c3xc5", "c3c3_on_q8q8",
    "c2_on_c7", "c3_on_c7", "c2_on_c3c3", "c3_on_q8", "c4_on_c5",
    "c3_on_c2c2", "c2_on_heis3", "trivial_on_s3", "conj_on_s3",
);

const INDEX: &str = include_str!("../catalog/index.toml");

/// Regression values for a group entry.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupExpectation {
    pub name: String,
    pub tags: Vec<String>,
    pub order: usize,
    /// Nilpotency class; absent for non-nilpotent groups.
    pub class: Option<usize>,
    pub fitting_height: usize,
    pub fitting_order: usize,
    pub exponent: usize,
    /// The prime of a `p`-group.
    pub prime: Option<usize>,
}

/// Regression values for an action entry.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionExpectation {
    pub name: String,
    pub tags: Vec<String>,
    pub coprime: bool,
    /// Verdicts of the two centralizer theorems (`q²` actors only).
    pub ward: Option<String>,
    pub engel: Option<String>,
    /// `|{[g, φ]}|` and `|γ_∞(F⟨φ⟩)|` (cyclic actors on nilpotent groups only).
    pub sink_size: Option<usize>,
    pub gamma_infinity_order: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Index {
    group: Vec<GroupExpectation>,
    action: Vec<ActionExpectation>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub text: &'static str,
    /// Names of the actions whose target is this group.
    pub actions: Vec<String>,
    pub expected: GroupExpectation,
}

#[derive(Debug, Clone)]
pub struct ActionEntry {
    pub name: String,
    pub text: &'static str,
    pub target: String,
    pub actor: String,
    pub expected: ActionExpectation,
}

#[derive(Debug)]
pub struct Catalog {
    groups: Vec<CatalogEntry>,
    actions: Vec<ActionEntry>,
    loaded: OnceLock<BTreeMap<String, Arc<FiniteGroup>>>,
}

impl Catalog {
    /// The catalog compiled into the crate. Panics only if the bundled index
    /// disagrees with the bundled specs, which the test suite rules out.
    pub fn bundled() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::build().expect("bundled catalog is consistent"))
    }

    fn build() -> Result<Catalog, CatalogError> {
        let index: Index = toml::from_str(INDEX).map_err(|e| CatalogError::Index(e.to_string()))?;
        let mut action_specs = Vec::new();
        for (name, text) in ACTION_SOURCES {
            let spec = parse_action_spec(text).map_err(|source| CatalogError::Parse {
                name: name.to_string(),
                source,
            })?;
            if spec.name != *name {
                return Err(CatalogError::Index(format!(
                    "file '{name}' declares action '{}'",
                    spec.name
                )));
            }
            let expected = index
                .action
                .iter()
                .find(|e| e.name == *name)
                .ok_or_else(|| CatalogError::Index(format!("action '{name}' missing from index")))?;
            action_specs.push(ActionEntry {
                name: spec.name,
                text,
                target: spec.target,
                actor: spec.actor,
                expected: expected.clone(),
            });
        }
        let mut groups = Vec::new();
        for (name, text) in GROUP_SOURCES {
            let spec = parse_group_spec(text).map_err(|source| CatalogError::Parse {
                name: name.to_string(),
                source,
            })?;
            if spec.name != *name {
                return Err(CatalogError::Index(format!(
                    "file '{name}' declares group '{}'",
                    spec.name
                )));
            }
            let expected = index
                .group
                .iter()
                .find(|e| e.name == *name)
                .ok_or_else(|| CatalogError::Index(format!("group '{name}' missing from index")))?;
            groups.push(CatalogEntry {
                name: spec.name,
                text,
                actions: action_specs
                    .iter()
                    .filter(|a| a.target == *name)
                    .map(|a| a.name.clone())
                    .collect(),
                expected: expected.clone(),
            });
        }
        if index.group.len() != groups.len() || index.action.len() != action_specs.len() {
            return Err(CatalogError::Index("index lists entries without a spec".into()));
        }
        for a in &action_specs {
            for g in [&a.target, &a.actor] {
                if !groups.iter().any(|e| &e.name == g) {
                    return Err(CatalogError::Index(format!(
                        "action '{}' names unknown group '{g}'",
                        a.name
                    )));
                }
            }
        }
        Ok(Catalog {
            groups,
            actions: action_specs,
            loaded: OnceLock::new(),
        })
    }

    pub fn groups(&self) -> &[CatalogEntry] {
        &self.groups
    }

    pub fn actions(&self) -> &[ActionEntry] {
        &self.actions
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.groups
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
    }

    pub fn action_entry(&self, name: &str) -> Result<&ActionEntry, CatalogError> {
        self.actions
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
    }

    pub fn group_spec(&self, name: &str) -> Result<GroupSpec, CatalogError> {
        let e = self.entry(name)?;
        parse_group_spec(e.text).map_err(|source| CatalogError::Parse {
            name: name.to_string(),
            source,
        })
    }

    pub fn action_spec(&self, name: &str) -> Result<ActionSpec, CatalogError> {
        let e = self.action_entry(name)?;
        parse_action_spec(e.text).map_err(|source| CatalogError::Parse {
            name: name.to_string(),
            source,
        })
    }

    fn all_loaded(&self) -> Result<&BTreeMap<String, Arc<FiniteGroup>>, CatalogError> {
        if let Some(m) = self.loaded.get() {
            return Ok(m);
        }
        let mut m = BTreeMap::new();
        for e in &self.groups {
            m.insert(e.name.clone(), Arc::new(FiniteGroup::load(&self.group_spec(&e.name)?)?));
        }
        Ok(self.loaded.get_or_init(|| m))
    }

    /// The loaded group, shared across callers.
    pub fn group(&self, name: &str) -> Result<Arc<FiniteGroup>, CatalogError> {
        self.all_loaded()?
            .get(name)
            .cloned()
            .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
    }

    pub fn action(&self, name: &str) -> Result<AutAction, CatalogError> {
        let spec = self.action_spec(name)?;
        let target = self.group(&spec.target)?;
        let actor = self.group(&spec.actor)?;
        Ok(AutAction::from_spec(&spec, target, actor)?)
    }
}

/// Compares a loaded group with its index entry.
pub fn check_expectations(g: &FiniteGroup, expected: &GroupExpectation) -> Outcome {
    let lcs = series::lower_central_series(g);
    let fd = series::fitting_data(g);
    let prime = match series::prime_divisors(g.order()).as_slice() {
        [p] => Some(*p),
        _ => None,
    };
    let found = json!({
        "order": g.order(),
        "class": lcs.nilpotency_class(),
        "fitting_height": match fd.height {
            FittingHeight::Finite(h) => json!(h),
            FittingHeight::Infinite => json!("inf"),
        },
        "fitting_order": fd.fitting.order(),
        "exponent": g.exponent(),
        "prime": prime,
    });
    let want = json!({
        "order": expected.order,
        "class": expected.class,
        "fitting_height": expected.fitting_height,
        "fitting_order": expected.fitting_order,
        "exponent": expected.exponent,
        "prime": expected.prime,
    });
    let ok = found == want;
    Outcome::check(ok, found, || json!({ "expected": want }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn every_entry_loads_and_matches_its_index() {
        let cat = Catalog::bundled();
        assert_eq!(cat.groups().len(), GROUP_SOURCES.len());
        for e in cat.groups() {
            let g = cat.group(&e.name).unwrap();
            let out = check_expectations(&g, &e.expected);
            assert_eq!(out.verdict, Verdict::Pass, "{}: {:?}", e.name, out);
            assert_eq!(
                e.expected.tags.contains(&"p-group".to_string()),
                e.expected.prime.is_some()
            );
            assert_eq!(
                e.expected.tags.contains(&"nilpotent".to_string()),
                e.expected.class.is_some()
            );
        }
    }

    #[test]
    fn every_action_validates() {
        let cat = Catalog::bundled();
        for e in cat.actions() {
            let a = cat.action(&e.name).unwrap();
            assert_eq!(a.is_coprime(), e.expected.coprime, "{}", e.name);
            assert_eq!(
                a.actor_q_squared().is_some(),
                e.expected.tags.contains(&"q-squared".to_string()),
                "{}",
                e.name
            );
        }
    }

    #[test]
    fn canonical_print_is_identity_on_sources() {
        let cat = Catalog::bundled();
        for e in cat.groups() {
            assert_eq!(cat.group_spec(&e.name).unwrap().to_string(), e.text, "{}", e.name);
        }
        for e in cat.actions() {
            assert_eq!(cat.action_spec(&e.name).unwrap().to_string(), e.text, "{}", e.name);
        }
    }

    #[test]
    fn actions_are_attached_to_targets() {
        let cat = Catalog::bundled();
        let e = cat.entry("C3xC3").unwrap();
        assert_eq!(e.actions, vec!["c2c2_on_c3c3", "c2_on_c3c3"]);
        assert!(matches!(cat.entry("nope"), Err(CatalogError::UnknownEntry(_))));
    }
}
