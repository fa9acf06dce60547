//! A prioritized default logic used as an independent oracle for the
//! argument system.
//!
//! The operator Γ(S) is the least set that contains the premises, is
//! deductively closed, contains the negation of every rule some applicable
//! undefeated rule set defeats with respect to the preference order, and
//! applies every rule whose antecedent holds and whose negation is not in
//! S. Extensions are the fixed points S = Γ(S); they are found by
//! enumerating candidate defeated-rule sets, entirely independently of the
//! argument engine.
//!
//! Deductive closure is tracked intensionally through a finite generating
//! set: every side condition only ever asks whether a particular formula is
//! entailed, so two states are compared by mutual entailment of their
//! generators plus exact token equality.

use std::collections::BTreeSet;
use std::fmt;

use crate::defeat::{DefeatAnalysis, Query};
use crate::logic::{self, Formula, LogicError};
use crate::theory::{DefeasibleTheory, Rule, RuleConsequent, RuleName};
use crate::EngineError;

/// Practical bound on the rule count for the 2^|D| extension search.
pub const MAX_ORACLE_RULES: usize = 16;

/// A deductively closed set of propositions plus rule-negation tokens,
/// represented by a finite generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaState {
    generators: Vec<Formula>,
    tokens: BTreeSet<RuleName>,
}

impl GammaState {
    pub fn new(generators: Vec<Formula>, tokens: BTreeSet<RuleName>) -> Self {
        GammaState { generators, tokens }
    }

    pub fn generators(&self) -> &[Formula] {
        &self.generators
    }

    pub fn tokens(&self) -> &BTreeSet<RuleName> {
        &self.tokens
    }

    pub fn entails(&self, f: &Formula, max_atoms: usize) -> Result<bool, LogicError> {
        logic::entails(&self.generators, f, max_atoms)
    }

    pub fn has_token(&self, r: &RuleName) -> bool {
        self.tokens.contains(r)
    }

    /// Same deductive closure and the same tokens.
    pub fn equivalent(&self, other: &GammaState, max_atoms: usize) -> Result<bool, LogicError> {
        if self.tokens != other.tokens {
            return Ok(false);
        }
        for f in &other.generators {
            if !self.entails(f, max_atoms)? {
                return Ok(false);
            }
        }
        for f in &self.generators {
            if !other.entails(f, max_atoms)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Γ(S): the least fixed point of the four closure conditions, evaluated
/// against the candidate S.
pub fn gamma(
    s_formulas: &[Formula],
    s_tokens: &BTreeSet<RuleName>,
    theory: &DefeasibleTheory,
) -> Result<GammaState, EngineError> {
    let max_atoms = theory.options.max_atoms;
    let mut gen: Vec<Formula> = theory.premises().to_vec();
    let mut tokens: BTreeSet<RuleName> = BTreeSet::new();
    let _ = s_formulas; // the closure conditions only consult S's token side
    loop {
        let mut changed = false;
        for rule in theory.rules() {
            let applicable = logic::entails(&gen, &rule.antecedent, max_atoms)
                .map_err(EngineError::Logic)?;
            // rule application: antecedent holds and the rule is not blocked
            // by S
            if applicable && !s_tokens.contains(&rule.name) {
                match &rule.consequent {
                    RuleConsequent::Formula(f) => {
                        if !gen.contains(f) {
                            gen.push(f.clone());
                            changed = true;
                        }
                    }
                    RuleConsequent::Negation(target) => {
                        if tokens.insert(target.clone()) {
                            changed = true;
                        }
                    }
                }
            }
            // defeat: some applicable rule set whose consequents hold, with
            // no member below this rule, derives the negation of its
            // consequent
            if let Some(psi) = rule.consequent_formula() {
                if applicable && !tokens.contains(&rule.name) {
                    let mut attack: Vec<Formula> = theory.premises().to_vec();
                    for other in theory.rules() {
                        if other.name == rule.name {
                            continue;
                        }
                        let Some(mu) = other.consequent_formula() else {
                            continue;
                        };
                        if theory.preference().prefers(&rule.name, &other.name) {
                            continue;
                        }
                        if logic::entails(&gen, &other.antecedent, max_atoms)
                            .map_err(EngineError::Logic)?
                            && logic::entails(&gen, mu, max_atoms).map_err(EngineError::Logic)?
                        {
                            attack.push(mu.clone());
                        }
                    }
                    if logic::entails(&attack, &Formula::not(psi.clone()), max_atoms)
                        .map_err(EngineError::Logic)?
                    {
                        tokens.insert(rule.name.clone());
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Ok(GammaState::new(gen, tokens));
        }
    }
}

/// One extension of the default theory: its defeated-rule tokens and the
/// generating formulas of its deductive closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefaultExtension {
    pub omega: BTreeSet<RuleName>,
    pub state: GammaState,
}

/// All fixed points S = Γ(S), found by enumerating candidate defeated-rule
/// sets, building the induced candidate state, and checking it.
pub fn default_extensions(
    theory: &DefeasibleTheory,
) -> Result<Vec<DefaultExtension>, EngineError> {
    let rules = theory.rules();
    if rules.len() > MAX_ORACLE_RULES {
        return Err(EngineError::Logic(LogicError::SizeCapExceeded {
            size: rules.len(),
            cap: MAX_ORACLE_RULES,
        }));
    }
    let max_atoms = theory.options.max_atoms;
    let mut out: Vec<DefaultExtension> = Vec::new();
    for mask in 0..(1u64 << rules.len()) {
        let omega: BTreeSet<RuleName> = rules
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, r)| r.name.clone())
            .collect();
        // the candidate state induced by Ω: premises plus the consequents
        // of applicable unblocked rules, to a fixpoint
        let mut gen: Vec<Formula> = theory.premises().to_vec();
        loop {
            let mut changed = false;
            for rule in rules {
                if omega.contains(&rule.name) {
                    continue;
                }
                let Some(f) = rule.consequent_formula() else {
                    continue;
                };
                if gen.contains(f) {
                    continue;
                }
                if logic::entails(&gen, &rule.antecedent, max_atoms)
                    .map_err(EngineError::Logic)?
                {
                    gen.push(f.clone());
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let candidate = GammaState::new(gen, omega.clone());
        let fixed = gamma(candidate.generators(), candidate.tokens(), theory)?;
        if fixed
            .equivalent(&candidate, max_atoms)
            .map_err(EngineError::Logic)?
        {
            out.push(DefaultExtension {
                omega,
                state: fixed,
            });
        }
    }
    Ok(out)
}

/// What one extension decides about the atoms of its theory, plus its
/// defeated-rule tokens. Two extensions with equal signatures warrant the
/// same literals and the same rule negations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExtensionSignature {
    pub positive: BTreeSet<String>,
    pub negative: BTreeSet<String>,
    pub tokens: BTreeSet<RuleName>,
}

impl fmt::Display for ExtensionSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        parts.extend(self.positive.iter().cloned());
        parts.extend(self.negative.iter().map(|a| format!("!{a}")));
        parts.extend(self.tokens.iter().map(|r| format!("not({r})")));
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The result of comparing the argument system against the default logic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceResult {
    Equal,
    Mismatch {
        argument_side: Vec<ExtensionSignature>,
        default_side: Vec<ExtensionSignature>,
    },
}

impl EquivalenceResult {
    pub fn is_equal(&self) -> bool {
        matches!(self, EquivalenceResult::Equal)
    }
}

/// Compare the complete extensions of the argument system with the default
/// logic's fixed points, over all literal and rule-negation queries.
pub fn check_equivalence(theory: &DefeasibleTheory) -> Result<EquivalenceResult, EngineError> {
    let analysis = DefeatAnalysis::build(theory)?;
    check_equivalence_with(theory, &analysis)
}

/// [`check_equivalence`] against an already-built analysis.
pub fn check_equivalence_with(
    theory: &DefeasibleTheory,
    analysis: &DefeatAnalysis,
) -> Result<EquivalenceResult, EngineError> {
    let max_atoms = theory.options.max_atoms;
    let mut argument_side: Vec<ExtensionSignature> = Vec::new();
    for ext in analysis.fixed_points() {
        let mut sig = ExtensionSignature {
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
            tokens: ext.omega.clone(),
        };
        for a in theory.atoms() {
            if analysis.warranted(&ext, &Query::Formula(Formula::atom(a.clone())))? {
                sig.positive.insert(a.clone());
            }
            if analysis
                .warranted(&ext, &Query::Formula(Formula::not(Formula::atom(a.clone()))))?
            {
                sig.negative.insert(a.clone());
            }
        }
        argument_side.push(sig);
    }
    let mut default_side: Vec<ExtensionSignature> = Vec::new();
    for ext in default_extensions(theory)? {
        let mut sig = ExtensionSignature {
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
            tokens: ext.omega.clone(),
        };
        for a in theory.atoms() {
            if ext
                .state
                .entails(&Formula::atom(a.clone()), max_atoms)
                .map_err(EngineError::Logic)?
            {
                sig.positive.insert(a.clone());
            }
            if ext
                .state
                .entails(&Formula::not(Formula::atom(a.clone())), max_atoms)
                .map_err(EngineError::Logic)?
            {
                sig.negative.insert(a.clone());
            }
        }
        default_side.push(sig);
    }
    argument_side.sort();
    argument_side.dedup();
    default_side.sort();
    default_side.dedup();
    if argument_side == default_side {
        Ok(EquivalenceResult::Equal)
    } else {
        Ok(EquivalenceResult::Mismatch {
            argument_side,
            default_side,
        })
    }
}

/// A literal in a named default rule: a proposition or a (possibly negated)
/// rule-name token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefaultLiteral {
    Formula(Formula),
    Name { name: String, negated: bool },
}

impl fmt::Display for DefaultLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefaultLiteral::Formula(fm) => write!(f, "{fm}"),
            DefaultLiteral::Name { name, negated } => {
                if *negated {
                    write!(f, "!{name}")
                } else {
                    write!(f, "{name}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefaultKind {
    Normal,
    SemiNormal,
    NonNormal,
}

/// A named default rule `prerequisite : justifications / consequent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedDefault {
    pub name: String,
    pub prerequisite: Option<Formula>,
    pub justifications: Vec<DefaultLiteral>,
    pub consequent: DefaultLiteral,
}

impl NamedDefault {
    pub fn kind(&self) -> DefaultKind {
        if self.justifications.len() == 1 && self.justifications[0] == self.consequent {
            return DefaultKind::Normal;
        }
        if self.justifications.contains(&self.consequent) {
            return DefaultKind::SemiNormal;
        }
        DefaultKind::NonNormal
    }
}

impl fmt::Display for NamedDefault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prereq = self
            .prerequisite
            .as_ref()
            .map(|p| p.to_string())
            .unwrap_or_default();
        let justs: Vec<String> = self.justifications.iter().map(|j| j.to_string()).collect();
        write!(f, "({prereq} : {}) / {}", justs.join(", "), self.consequent)
    }
}

/// The two-layer translation of a defeasible theory into named defaults.
#[derive(Debug, Clone)]
pub struct DefaultTranslation {
    /// One semi-normal (or, for undercutters, non-normal) default per rule.
    pub base: Vec<NamedDefault>,
    /// The preference-encoding layer: a non-normal variant of each rule
    /// plus one defeater default per qualifying rule subset. This layer
    /// depends on the premises.
    pub preference_layer: Vec<NamedDefault>,
}

fn name_token(rule: &RuleName) -> String {
    format!("n_{rule}")
}

/// Translate every defeasible rule into a named default, and emit the
/// premise-dependent preference-encoding layer.
pub fn to_default_rules(theory: &DefeasibleTheory) -> Result<DefaultTranslation, EngineError> {
    let mut base = Vec::new();
    for rule in theory.rules() {
        let token = name_token(&rule.name);
        match &rule.consequent {
            RuleConsequent::Formula(f) => base.push(NamedDefault {
                name: token.clone(),
                prerequisite: Some(rule.antecedent.clone()),
                justifications: vec![
                    DefaultLiteral::Formula(f.clone()),
                    DefaultLiteral::Name {
                        name: token,
                        negated: false,
                    },
                ],
                consequent: DefaultLiteral::Formula(f.clone()),
            }),
            RuleConsequent::Negation(target) => base.push(NamedDefault {
                name: token.clone(),
                prerequisite: Some(rule.antecedent.clone()),
                justifications: vec![DefaultLiteral::Name {
                    name: token,
                    negated: false,
                }],
                consequent: DefaultLiteral::Name {
                    name: name_token(target),
                    negated: true,
                },
            }),
        }
    }

    let formula_rules: Vec<&Rule> = theory
        .rules()
        .iter()
        .filter(|r| r.consequent_formula().is_some())
        .collect();
    if formula_rules.len() > MAX_ORACLE_RULES {
        return Err(EngineError::Logic(LogicError::SizeCapExceeded {
            size: formula_rules.len(),
            cap: MAX_ORACLE_RULES,
        }));
    }
    let mut preference_layer = Vec::new();
    for rule in theory.rules() {
        let token = name_token(&rule.name);
        let consequent = match &rule.consequent {
            RuleConsequent::Formula(f) => DefaultLiteral::Formula(f.clone()),
            RuleConsequent::Negation(target) => DefaultLiteral::Name {
                name: name_token(target),
                negated: true,
            },
        };
        preference_layer.push(NamedDefault {
            name: token.clone(),
            prerequisite: Some(rule.antecedent.clone()),
            justifications: vec![DefaultLiteral::Name {
                name: token,
                negated: false,
            }],
            consequent,
        });
    }
    let max_atoms = theory.options.max_atoms;
    for target in &formula_rules {
        let psi = target.consequent_formula().expect("formula consequent");
        let others: Vec<&Rule> = formula_rules
            .iter()
            .copied()
            .filter(|r| {
                r.name != target.name && !theory.preference().prefers(&target.name, &r.name)
            })
            .collect();
        let mut emitted = 0usize;
        for mask in 0..(1u64 << others.len()) {
            let delta: Vec<&Rule> = others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, r)| *r)
                .collect();
            let mut attack: Vec<Formula> = theory.premises().to_vec();
            attack.extend(
                delta
                    .iter()
                    .map(|r| r.consequent_formula().expect("formula consequent").clone()),
            );
            if !logic::entails(&attack, &Formula::not(psi.clone()), max_atoms)
                .map_err(EngineError::Logic)?
            {
                continue;
            }
            let prerequisite = match delta.len() {
                0 => None,
                1 => Some(delta[0].antecedent.clone()),
                _ => Some(Formula::and(
                    delta.iter().map(|r| r.antecedent.clone()).collect(),
                )),
            };
            let mut justifications: Vec<DefaultLiteral> = delta
                .iter()
                .map(|r| DefaultLiteral::Name {
                    name: name_token(&r.name),
                    negated: false,
                })
                .collect();
            let neg_target = DefaultLiteral::Name {
                name: name_token(&target.name),
                negated: true,
            };
            justifications.push(neg_target.clone());
            emitted += 1;
            preference_layer.push(NamedDefault {
                name: format!("defeat_{}_{}", target.name, emitted),
                prerequisite,
                justifications,
                consequent: neg_target,
            });
        }
    }
    Ok(DefaultTranslation {
        base,
        preference_layer,
    })
}

/// Translate normal and semi-normal defaults back into defeasible rules:
/// `(α : β1..βk, γ / γ)` becomes `α ~> γ` plus one undercutter
/// `!βi ~> not(α ~> γ)` per extra justification. The default's own name
/// token, when present, is the implicit undercut hook of `~>` and is
/// dropped. Non-normal defaults have no translation.
pub fn from_default_rules(defaults: &[NamedDefault]) -> Result<Vec<Rule>, EngineError> {
    let mut rules = Vec::new();
    for (i, d) in defaults.iter().enumerate() {
        let DefaultLiteral::Formula(conclusion) = &d.consequent else {
            return Err(EngineError::NonNormalDefault(d.to_string()));
        };
        let mut betas: Vec<Formula> = Vec::new();
        let mut saw_consequent = false;
        for j in &d.justifications {
            match j {
                DefaultLiteral::Formula(f) if f == conclusion => saw_consequent = true,
                DefaultLiteral::Formula(f) => betas.push(f.clone()),
                DefaultLiteral::Name {
                    name,
                    negated: false,
                } if *name == d.name => {}
                DefaultLiteral::Name { .. } => {
                    return Err(EngineError::NonNormalDefault(d.to_string()));
                }
            }
        }
        if !saw_consequent {
            return Err(EngineError::NonNormalDefault(d.to_string()));
        }
        let antecedent = d.prerequisite.clone().unwrap_or_else(|| {
            Formula::or(vec![
                Formula::atom("true"),
                Formula::not(Formula::atom("true")),
            ])
        });
        let base_name = format!("d{}", i + 1);
        rules.push(Rule::new(base_name.clone(), antecedent, conclusion.clone()));
        for (k, beta) in betas.iter().enumerate() {
            rules.push(Rule::undercutter(
                format!("{}_u{}", base_name, k + 1),
                Formula::not(beta.clone()),
                RuleName::new(base_name.clone()),
            ));
        }
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::EngineOptions;
    use crate::Formula as F;

    fn atom(s: &str) -> F {
        F::atom(s)
    }

    fn name(s: &str) -> RuleName {
        RuleName::new(s)
    }

    fn theory(premises: Vec<F>, rules: Vec<Rule>, prefs: Vec<(&str, &str)>) -> DefeasibleTheory {
        DefeasibleTheory::build(
            premises,
            rules,
            prefs
                .into_iter()
                .map(|(a, b)| (name(a), name(b)))
                .collect(),
            vec![],
            EngineOptions::default(),
        )
        .unwrap()
    }

    fn pref_theory() -> DefeasibleTheory {
        theory(
            vec![atom("a"), atom("b")],
            vec![
                Rule::new("r_ad", atom("a"), atom("d")),
                Rule::new("r_bnd", atom("b"), F::not(atom("d"))),
            ],
            vec![("r_bnd", "r_ad")],
        )
    }

    fn two_chain_theory() -> DefeasibleTheory {
        theory(
            vec![atom("a"), atom("b")],
            vec![
                Rule::new("r_ag", atom("a"), atom("g")),
                Rule::new("r_bd", atom("b"), atom("d")),
                Rule::new("r_gnd", atom("g"), F::not(atom("d"))),
                Rule::new("r_dng", atom("d"), F::not(atom("g"))),
            ],
            vec![
                ("r_gnd", "r_ag"),
                ("r_gnd", "r_bd"),
                ("r_dng", "r_ag"),
                ("r_dng", "r_bd"),
            ],
        )
    }

    #[test]
    fn gamma_fixed_point_of_the_preference_example() {
        let t = pref_theory();
        let s_formulas = vec![atom("a"), atom("b"), F::not(atom("d"))];
        let s_tokens: BTreeSet<RuleName> = [name("r_ad")].into_iter().collect();
        let g = gamma(&s_formulas, &s_tokens, &t).unwrap();
        assert!(g
            .equivalent(&GammaState::new(s_formulas, s_tokens), 24)
            .unwrap());
    }

    #[test]
    fn gamma_on_empty_rule_set_is_premise_closure() {
        let t = theory(vec![atom("a"), atom("b")], vec![], vec![]);
        let g = gamma(&[], &BTreeSet::new(), &t).unwrap();
        assert!(g.entails(&F::and(vec![atom("a"), atom("b")]), 24).unwrap());
        assert!(!g.entails(&atom("c"), 24).unwrap());
        assert!(g.tokens().is_empty());
    }

    #[test]
    fn gamma_rejects_the_undefended_candidate() {
        // S = Th({a, b, d}): with nothing blocked, Γ(S) defeats r_ad and
        // the candidate is not a fixed point.
        let t = pref_theory();
        let s_formulas = vec![atom("a"), atom("b"), atom("d")];
        let s_tokens = BTreeSet::new();
        let g = gamma(&s_formulas, &s_tokens, &t).unwrap();
        assert!(g.has_token(&name("r_ad")));
        assert!(!g
            .equivalent(&GammaState::new(s_formulas, s_tokens), 24)
            .unwrap());
    }

    #[test]
    fn default_extension_examples() {
        let exts = default_extensions(&pref_theory()).unwrap();
        assert_eq!(exts.len(), 1);
        assert_eq!(exts[0].omega, [name("r_ad")].into_iter().collect());
        assert!(exts[0].state.entails(&F::not(atom("d")), 24).unwrap());
        assert!(!exts[0].state.entails(&atom("d"), 24).unwrap());

        let exts = default_extensions(&two_chain_theory()).unwrap();
        assert_eq!(exts.len(), 2);

        let t = theory(
            vec![atom("a")],
            vec![Rule::new("r1", atom("a"), atom("b"))],
            vec![],
        );
        let exts = default_extensions(&t).unwrap();
        assert_eq!(exts.len(), 1);
        assert!(exts[0].omega.is_empty());
        assert!(exts[0].state.entails(&atom("b"), 24).unwrap());
    }

    #[test]
    fn equivalence_on_the_worked_examples() {
        assert!(check_equivalence(&pref_theory()).unwrap().is_equal());
        assert!(check_equivalence(&two_chain_theory()).unwrap().is_equal());
    }

    #[test]
    fn equivalence_on_a_self_defeating_theory_compares_empty_sets() {
        let t = theory(
            vec![atom("a")],
            vec![
                Rule::new("r1", atom("a"), atom("b")),
                Rule::undercutter("r2", atom("b"), name("r1")),
            ],
            vec![],
        );
        assert!(check_equivalence(&t).unwrap().is_equal());
    }

    #[test]
    fn base_translation_is_semi_normal() {
        let t = pref_theory();
        let tr = to_default_rules(&t).unwrap();
        assert_eq!(tr.base.len(), 2);
        let d = &tr.base[0];
        assert_eq!(d.kind(), DefaultKind::SemiNormal);
        assert_eq!(d.to_string(), "(a : d, n_r_ad) / d");

        let empty = theory(vec![atom("a")], vec![], vec![]);
        let tr = to_default_rules(&empty).unwrap();
        assert!(tr.base.is_empty());
        assert!(tr.preference_layer.is_empty());
    }

    #[test]
    fn preference_layer_emits_the_defeater_for_the_dominated_rule() {
        let t = pref_theory();
        let tr = to_default_rules(&t).unwrap();
        // the non-normal variants of both rules are present
        assert!(
            tr.preference_layer
                .iter()
                .filter(|d| d.kind() == DefaultKind::NonNormal)
                .count()
                >= 2
        );
        // a defeater concluding !n_r_ad from b's rule, none targeting r_bnd
        let defeaters: Vec<&NamedDefault> = tr
            .preference_layer
            .iter()
            .filter(|d| d.name.starts_with("defeat_"))
            .collect();
        assert!(defeaters.iter().any(|d| {
            d.consequent
                == DefaultLiteral::Name {
                    name: "n_r_ad".into(),
                    negated: true,
                }
                && d.prerequisite == Some(atom("b"))
        }));
        assert!(!defeaters.iter().any(|d| d.consequent
            == DefaultLiteral::Name {
                name: "n_r_bnd".into(),
                negated: true,
            }));
    }

    #[test]
    fn from_default_rules_examples() {
        // normal default (α : γ / γ)
        let d = NamedDefault {
            name: "n1".into(),
            prerequisite: Some(atom("al")),
            justifications: vec![DefaultLiteral::Formula(atom("ga"))],
            consequent: DefaultLiteral::Formula(atom("ga")),
        };
        let rules = from_default_rules(&[d]).unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].antecedent, atom("al"));

        // semi-normal (α : β, γ / γ) adds one undercutter
        let d = NamedDefault {
            name: "n1".into(),
            prerequisite: Some(atom("al")),
            justifications: vec![
                DefaultLiteral::Formula(atom("be")),
                DefaultLiteral::Formula(atom("ga")),
            ],
            consequent: DefaultLiteral::Formula(atom("ga")),
        };
        let rules = from_default_rules(&[d]).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[1].antecedent, F::not(atom("be")));
        assert_eq!(
            rules[1].consequent,
            RuleConsequent::Negation(rules[0].name.clone())
        );

        // non-normal input is rejected
        let d = NamedDefault {
            name: "n1".into(),
            prerequisite: Some(atom("al")),
            justifications: vec![DefaultLiteral::Formula(atom("be"))],
            consequent: DefaultLiteral::Formula(atom("ga")),
        };
        assert!(matches!(
            from_default_rules(&[d]),
            Err(EngineError::NonNormalDefault(_))
        ));
    }

    #[test]
    fn round_trip_reproduces_the_rules_up_to_renaming() {
        let t = theory(
            vec![atom("a")],
            vec![
                Rule::new("r1", atom("a"), atom("b")),
                Rule::new("r2", F::and(vec![atom("a"), atom("b")]), F::not(atom("c"))),
            ],
            vec![],
        );
        let tr = to_default_rules(&t).unwrap();
        let back = from_default_rules(&tr.base).unwrap();
        assert_eq!(back.len(), t.rules().len());
        for (orig, got) in t.rules().iter().zip(&back) {
            assert_eq!(orig.antecedent, got.antecedent);
            assert_eq!(orig.consequent_formula(), got.consequent_formula());
        }
    }

    #[test]
    fn gamma_is_deterministic() {
        let t = two_chain_theory();
        let s: BTreeSet<RuleName> = [name("r_ag")].into_iter().collect();
        let g1 = gamma(&[], &s, &t).unwrap();
        let g2 = gamma(&[], &s, &t).unwrap();
        assert_eq!(g1, g2);
    }
}
