//! The defeasible theory: premises, named rules, background knowledge and a
//! strict partial preference relation on rule names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::logic::{self, Formula, LogicError, DEFAULT_MAX_ATOMS, DEFAULT_SUBSET_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("preference relation is cyclic (involves rule {0})")]
    CyclicPreference(RuleName),
    #[error("rule name {0} is referenced but not defined")]
    DanglingRuleName(RuleName),
    #[error("premises (together with background knowledge) are inconsistent")]
    InconsistentPremises,
    #[error("duplicate rule name {0}")]
    DuplicateRuleName(RuleName),
    #[error("merging specificity preferences breaks the strict partial order at rule {0}")]
    SpecificityPreferenceCycle(RuleName),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Identifier of a defeasible rule. Preference is on names, not structure:
/// two syntactically equal rules with different names stay distinct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleName(pub String);

impl RuleName {
    pub fn new(s: impl Into<String>) -> Self {
        RuleName(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// What a rule concludes: a proposition, or the negation of another rule
/// (an undercutter). Rule negations are not members of the propositional
/// language and never take part in classical entailment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleConsequent {
    Formula(Formula),
    Negation(RuleName),
}

impl fmt::Display for RuleConsequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleConsequent::Formula(fm) => write!(f, "{fm}"),
            RuleConsequent::Negation(r) => write!(f, "not({r})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleOrigin {
    User,
    /// Generated by the reasoning-by-cases module.
    Hypothesis,
}

/// A defeasible rule `antecedent ~> consequent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: RuleName,
    pub antecedent: Formula,
    pub consequent: RuleConsequent,
    pub origin: RuleOrigin,
}

impl Rule {
    pub fn new(name: impl Into<String>, antecedent: Formula, consequent: Formula) -> Self {
        Rule {
            name: RuleName::new(name),
            antecedent,
            consequent: RuleConsequent::Formula(consequent),
            origin: RuleOrigin::User,
        }
    }

    pub fn undercutter(name: impl Into<String>, antecedent: Formula, target: RuleName) -> Self {
        Rule {
            name: RuleName::new(name),
            antecedent,
            consequent: RuleConsequent::Negation(target),
            origin: RuleOrigin::User,
        }
    }

    pub fn consequent_formula(&self) -> Option<&Formula> {
        match &self.consequent {
            RuleConsequent::Formula(f) => Some(f),
            RuleConsequent::Negation(_) => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ~> {}", self.name, self.antecedent, self.consequent)
    }
}

/// Strict partial order on rule names, stored as its transitive closure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PreferenceRelation {
    closure: BTreeSet<(RuleName, RuleName)>,
}

impl PreferenceRelation {
    /// Build from declared pairs; rejects any cycle.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (RuleName, RuleName)>,
    ) -> Result<Self, TheoryError> {
        let base: BTreeSet<(RuleName, RuleName)> = pairs.into_iter().collect();
        let closure = transitive_closure(&base);
        if let Some((a, _)) = closure.iter().find(|(a, b)| a == b) {
            return Err(TheoryError::CyclicPreference(a.clone()));
        }
        Ok(PreferenceRelation { closure })
    }

    /// `a ≻ b` in the transitive closure.
    pub fn prefers(&self, a: &RuleName, b: &RuleName) -> bool {
        self.closure.contains(&(a.clone(), b.clone()))
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(RuleName, RuleName)> {
        self.closure.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.is_empty()
    }

    /// Union with more pairs, re-closing transitively. Returns the offending
    /// rule if the result is no longer a strict partial order.
    pub fn merged(
        &self,
        extra: impl IntoIterator<Item = (RuleName, RuleName)>,
    ) -> Result<Self, RuleName> {
        let mut base = self.closure.clone();
        base.extend(extra);
        let closure = transitive_closure(&base);
        if let Some((a, _)) = closure.iter().find(|(a, b)| a == b) {
            return Err(a.clone());
        }
        Ok(PreferenceRelation { closure })
    }
}

fn transitive_closure(base: &BTreeSet<(RuleName, RuleName)>) -> BTreeSet<(RuleName, RuleName)> {
    let mut closure = base.clone();
    loop {
        let mut added = Vec::new();
        for (a, b) in &closure {
            for (c, d) in &closure {
                if b == c && !closure.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            return closure;
        }
        closure.extend(added);
    }
}

/// Engine limits and feature toggles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineOptions {
    /// Bound on distinct atoms per propositional query.
    pub max_atoms: usize,
    /// Pool-size cap for the exhaustive minimal-inconsistent-subset search.
    pub subset_cap: usize,
    /// Cap on the number of enumerated argument units.
    pub arg_cap: usize,
    /// Reasoning by cases enabled.
    pub cases_enabled: bool,
    /// Maximum number of disjuncts in a case-candidate disjunction.
    pub hypothesis_width: usize,
    /// Report maximal partial status assignments when no complete fixed
    /// point exists; when disabled such theories yield `NoExtension`.
    pub allow_partial: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            max_atoms: DEFAULT_MAX_ATOMS,
            subset_cap: DEFAULT_SUBSET_CAP,
            arg_cap: 10_000,
            cases_enabled: false,
            hypothesis_width: 2,
            allow_partial: true,
        }
    }
}

/// A defeasible theory `⟨Σ, D, ≻, K⟩` with engine options.
///
/// Immutable after construction; all engine operations are pure queries.
#[derive(Debug, Clone)]
pub struct DefeasibleTheory {
    premises: Vec<Formula>,
    rules: Vec<Rule>,
    by_name: BTreeMap<RuleName, usize>,
    preference: PreferenceRelation,
    background: Vec<Formula>,
    declared_atoms: BTreeSet<String>,
    pub options: EngineOptions,
}

impl DefeasibleTheory {
    /// Validate and build a theory: unique rule names, no dangling rule
    /// references, acyclic declared preferences, consistent `Σ ∪ K`.
    pub fn build(
        premises: Vec<Formula>,
        rules: Vec<Rule>,
        declared_preferences: Vec<(RuleName, RuleName)>,
        background: Vec<Formula>,
        options: EngineOptions,
    ) -> Result<Self, TheoryError> {
        Self::build_with_atoms(
            premises,
            rules,
            declared_preferences,
            background,
            BTreeSet::new(),
            options,
        )
    }

    /// [`DefeasibleTheory::build`] with extra declared atom names beyond the
    /// ones that occur in the theory text.
    pub fn build_with_atoms(
        premises: Vec<Formula>,
        rules: Vec<Rule>,
        declared_preferences: Vec<(RuleName, RuleName)>,
        background: Vec<Formula>,
        extra_atoms: BTreeSet<String>,
        options: EngineOptions,
    ) -> Result<Self, TheoryError> {
        let premises: Vec<Formula> = dedup_preserving(premises);
        let background: Vec<Formula> = dedup_preserving(background);

        let mut by_name = BTreeMap::new();
        for (i, r) in rules.iter().enumerate() {
            if by_name.insert(r.name.clone(), i).is_some() {
                return Err(TheoryError::DuplicateRuleName(r.name.clone()));
            }
        }
        for r in &rules {
            if let RuleConsequent::Negation(target) = &r.consequent {
                if !by_name.contains_key(target) {
                    return Err(TheoryError::DanglingRuleName(target.clone()));
                }
            }
        }
        for (a, b) in &declared_preferences {
            for n in [a, b] {
                if !by_name.contains_key(n) {
                    return Err(TheoryError::DanglingRuleName(n.clone()));
                }
            }
        }
        let preference = PreferenceRelation::from_pairs(declared_preferences)?;

        let mut sigma_k: Vec<Formula> = premises.clone();
        sigma_k.extend(background.iter().cloned());
        if !logic::is_consistent(&sigma_k, options.max_atoms)? {
            return Err(TheoryError::InconsistentPremises);
        }

        let mut declared_atoms = extra_atoms;
        for f in premises.iter().chain(background.iter()) {
            declared_atoms.extend(f.atoms());
        }
        for r in &rules {
            declared_atoms.extend(r.antecedent.atoms());
            if let RuleConsequent::Formula(f) = &r.consequent {
                declared_atoms.extend(f.atoms());
            }
        }

        Ok(DefeasibleTheory {
            premises,
            rules,
            by_name,
            preference,
            background,
            declared_atoms,
            options,
        })
    }

    pub fn premises(&self) -> &[Formula] {
        &self.premises
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn background(&self) -> &[Formula] {
        &self.background
    }

    pub fn preference(&self) -> &PreferenceRelation {
        &self.preference
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.declared_atoms
    }

    pub fn rule(&self, name: &RuleName) -> Option<&Rule> {
        self.by_name.get(name).map(|&i| &self.rules[i])
    }

    pub fn rule_index(&self, name: &RuleName) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// The least-preferred members of a rule-name set: those not strictly
    /// preferred to any other member.
    pub fn min_preferred<'a>(&self, rules: &[&'a RuleName]) -> Vec<&'a RuleName> {
        rules
            .iter()
            .filter(|r| {
                !rules
                    .iter()
                    .any(|other| *other != **r && self.preference.prefers(r, other))
            })
            .copied()
            .collect()
    }

    /// A copy of this theory with different premises (revalidated).
    pub fn with_premises(&self, premises: Vec<Formula>) -> Result<Self, TheoryError> {
        DefeasibleTheory::build_with_atoms(
            premises,
            self.rules.clone(),
            Vec::new(),
            self.background.clone(),
            self.declared_atoms.clone(),
            self.options.clone(),
        )
        .map(|mut t| {
            t.preference = self.preference.clone();
            t
        })
    }

    /// A copy with one more premise appended.
    pub fn with_extra_premise(&self, extra: Formula) -> Result<Self, TheoryError> {
        let mut premises = self.premises.clone();
        premises.push(extra);
        self.with_premises(premises)
    }

    /// A copy with a replaced preference relation.
    pub fn with_preference(&self, preference: PreferenceRelation) -> Self {
        let mut t = self.clone();
        t.preference = preference;
        t
    }

    /// A copy with a filtered rule set (used by case-stability checks).
    pub fn without_rule(&self, name: &RuleName) -> Result<Self, TheoryError> {
        let rules: Vec<Rule> = self
            .rules
            .iter()
            .filter(|r| &r.name != name)
            .cloned()
            .collect();
        DefeasibleTheory::build_with_atoms(
            self.premises.clone(),
            rules,
            Vec::new(),
            self.background.clone(),
            self.declared_atoms.clone(),
            self.options.clone(),
        )
        .map(|mut t| {
            t.preference = self.preference.clone();
            t
        })
    }
}

fn dedup_preserving(v: Vec<Formula>) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    v.into_iter().filter(|f| seen.insert(f.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Formula as F;

    fn atom(s: &str) -> F {
        F::atom(s)
    }

    #[test]
    fn builds_the_three_rule_theory() {
        // facts {a, b, c}; a ~> !d, b ~> !e, c ~> d | e
        let t = DefeasibleTheory::build(
            vec![atom("a"), atom("b"), atom("c")],
            vec![
                Rule::new("r1", atom("a"), F::not(atom("d"))),
                Rule::new("r2", atom("b"), F::not(atom("e"))),
                Rule::new("r3", atom("c"), F::or(vec![atom("d"), atom("e")])),
            ],
            vec![],
            vec![],
            EngineOptions::default(),
        )
        .unwrap();
        assert_eq!(t.rules().len(), 3);
        assert_eq!(t.atoms().len(), 5);
    }

    #[test]
    fn rejects_inconsistent_premises() {
        let err = DefeasibleTheory::build(
            vec![atom("p"), F::not(atom("p"))],
            vec![],
            vec![],
            vec![],
            EngineOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err, TheoryError::InconsistentPremises);
    }

    #[test]
    fn rejects_cyclic_preferences() {
        let err = DefeasibleTheory::build(
            vec![atom("a")],
            vec![
                Rule::new("r1", atom("a"), atom("b")),
                Rule::new("r2", atom("a"), atom("c")),
            ],
            vec![
                (RuleName::new("r1"), RuleName::new("r2")),
                (RuleName::new("r2"), RuleName::new("r1")),
            ],
            vec![],
            EngineOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, TheoryError::CyclicPreference(_)));
    }

    #[test]
    fn rejects_dangling_rule_names() {
        let err = DefeasibleTheory::build(
            vec![atom("a")],
            vec![Rule::undercutter("r1", atom("a"), RuleName::new("r2"))],
            vec![],
            vec![],
            EngineOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err, TheoryError::DanglingRuleName(RuleName::new("r2")));
    }

    #[test]
    fn preference_closure_is_transitive_and_strict() {
        let p = PreferenceRelation::from_pairs(vec![
            (RuleName::new("a"), RuleName::new("b")),
            (RuleName::new("b"), RuleName::new("c")),
        ])
        .unwrap();
        assert!(p.prefers(&RuleName::new("a"), &RuleName::new("c")));
        assert!(!p.prefers(&RuleName::new("c"), &RuleName::new("a")));
        // asymmetry comes with irreflexivity + transitivity
        for (x, y) in p.pairs() {
            assert!(!p.prefers(y, x));
        }
    }

    #[test]
    fn min_preferred_keeps_unordered_rules() {
        let t = DefeasibleTheory::build(
            vec![atom("a")],
            vec![
                Rule::new("r1", atom("a"), atom("x")),
                Rule::new("r2", atom("a"), atom("y")),
                Rule::new("r3", atom("a"), atom("z")),
            ],
            vec![(RuleName::new("r1"), RuleName::new("r2"))],
            vec![],
            EngineOptions::default(),
        )
        .unwrap();
        let r1 = RuleName::new("r1");
        let r2 = RuleName::new("r2");
        let r3 = RuleName::new("r3");
        let min = t.min_preferred(&[&r1, &r2, &r3]);
        assert_eq!(min, vec![&r2, &r3]);
        // least preferred of a singleton is itself
        assert_eq!(t.min_preferred(&[&r1]), vec![&r1]);
    }
}
