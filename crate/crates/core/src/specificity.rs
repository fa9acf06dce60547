//! The specificity preference: a rule is more specific than another when
//! its antecedent alone, plus background knowledge, yields an argument for
//! the other rule's antecedent. Also the exhaustive Poole-style
//! theory-comparison check used as a cross-oracle for the specificity
//! direction theorem.

use std::collections::BTreeMap;

use crate::argument::ArgumentStore;
use crate::logic::{self, Formula};
use crate::theory::{DefeasibleTheory, PreferenceRelation, Rule, RuleName, TheoryError};
use crate::EngineError;

/// Def.-4 specificity: given premises `{antecedent(r1)}` and the theory's
/// background knowledge, is there an argument for `antecedent(r2)`?
///
/// The search runs over all structural arguments of the single-premise
/// theory, with no defeat filtering.
pub fn more_specific(
    r1: &Rule,
    r2: &Rule,
    theory: &DefeasibleTheory,
) -> Result<bool, EngineError> {
    let mut premises = vec![r1.antecedent.clone()];
    premises.extend(theory.background().iter().cloned());
    if !logic::is_consistent(&premises, theory.options.max_atoms).map_err(EngineError::Logic)? {
        // an inconsistent premise set yields an argument for anything
        return Ok(true);
    }
    let mini = DefeasibleTheory::build(
        premises,
        theory.rules().to_vec(),
        Vec::new(),
        Vec::new(),
        theory.options.clone(),
    )
    .map_err(EngineError::Theory)?;
    let store = ArgumentStore::build(&mini)?;
    // the union of all derivable conclusions is itself an argument
    logic::entails(
        &store.formula_pool(),
        &r2.antecedent,
        theory.options.max_atoms,
    )
    .map_err(EngineError::Logic)
}

/// All strictly-more-specific pairs of the theory's rules.
pub fn specificity_preferences(
    theory: &DefeasibleTheory,
) -> Result<Vec<(RuleName, RuleName)>, EngineError> {
    let rules = theory.rules();
    let mut table: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for (i, r1) in rules.iter().enumerate() {
        for (j, r2) in rules.iter().enumerate() {
            if i == j {
                continue;
            }
            table.insert((i, j), more_specific(r1, r2, theory)?);
        }
    }
    let mut out = Vec::new();
    for (i, r1) in rules.iter().enumerate() {
        for (j, r2) in rules.iter().enumerate() {
            if i != j && table[&(i, j)] && !table[&(j, i)] {
                out.push((r1.name.clone(), r2.name.clone()));
            }
        }
    }
    Ok(out)
}

/// Merge generated specificity pairs into the declared preference order.
/// Declared preferences win on direct conflicts; a merge that still breaks
/// the strict partial order is an error.
pub fn merge_specificity(
    theory: &DefeasibleTheory,
    generated: Vec<(RuleName, RuleName)>,
) -> Result<PreferenceRelation, TheoryError> {
    let declared = theory.preference();
    let kept: Vec<(RuleName, RuleName)> = generated
        .into_iter()
        .filter(|(a, b)| !declared.prefers(b, a))
        .collect();
    declared
        .merged(kept)
        .map_err(TheoryError::SpecificityPreferenceCycle)
}

/// A copy of the theory whose preference relation includes the generated
/// specificity pairs.
pub fn apply_specificity(theory: &DefeasibleTheory) -> Result<DefeasibleTheory, EngineError> {
    let generated = specificity_preferences(theory)?;
    let merged = merge_specificity(theory, generated).map_err(EngineError::Theory)?;
    Ok(theory.with_preference(merged))
}

/// Exhaustive Poole-style comparison: `⟨D1, ψ⟩` is more specific than
/// `⟨D2, μ⟩` when for every consistent set of literals `F_p` over the
/// theory atoms, if `F_p ∪ D1 ∪ K ⊨ ψ` and `F_p ∪ D2 ∪ K ⊭ ψ` then
/// `F_p ∪ D2 ∪ K ⊨ μ`. Here `D1 = {r1}` and `D2` extends `r2` with the
/// rules of a witness argument for `antecedent(r2)` from
/// `{antecedent(r1)}`; rules enter as material implications and the
/// background knowledge plays the necessary facts. Only rules with
/// propositional consequents compare.
pub fn poole_more_specific(
    r1: &Rule,
    r2: &Rule,
    theory: &DefeasibleTheory,
) -> Result<bool, EngineError> {
    let (Some(psi), Some(mu)) = (r1.consequent_formula(), r2.consequent_formula()) else {
        return Ok(false);
    };
    let d1 = vec![implication(r1)];

    // witness rule sets: for each minimal support argument for r2's
    // antecedent from {antecedent(r1)} ∪ K, the argument's rules plus r2
    let witness_rule_sets = witness_rule_sets(r1, r2, theory)?;

    let atom_list: Vec<String> = theory.atoms().iter().cloned().collect();
    let background: Vec<Formula> = theory.background().to_vec();
    let max_atoms = theory.options.max_atoms;

    'witness: for rules2 in &witness_rule_sets {
        let d2: Vec<Formula> = rules2.iter().map(|r| implication(r)).collect();
        // all consistent literal sets over the theory atoms
        for code in 0..3usize.pow(atom_list.len() as u32) {
            let mut c = code;
            let mut fp: Vec<Formula> = Vec::new();
            for a in &atom_list {
                match c % 3 {
                    0 => {}
                    1 => fp.push(Formula::atom(a.clone())),
                    _ => fp.push(Formula::not(Formula::atom(a.clone()))),
                }
                c /= 3;
            }
            let side1: Vec<Formula> = fp
                .iter()
                .chain(d1.iter())
                .chain(background.iter())
                .cloned()
                .collect();
            let side2: Vec<Formula> = fp
                .iter()
                .chain(d2.iter())
                .chain(background.iter())
                .cloned()
                .collect();
            if logic::entails(&side1, psi, max_atoms)?
                && !logic::entails(&side2, psi, max_atoms)?
                && !logic::entails(&side2, mu, max_atoms)?
            {
                continue 'witness;
            }
        }
        return Ok(true);
    }
    Ok(false)
}

fn implication(rule: &Rule) -> Formula {
    let consequent = rule
        .consequent_formula()
        .expect("implication of a rule with a propositional consequent")
        .clone();
    Formula::implies(rule.antecedent.clone(), consequent)
}

fn witness_rule_sets(
    r1: &Rule,
    r2: &Rule,
    theory: &DefeasibleTheory,
) -> Result<Vec<Vec<Rule>>, EngineError> {
    let mut premises = vec![r1.antecedent.clone()];
    premises.extend(theory.background().iter().cloned());
    let mut sets: Vec<Vec<Rule>> = Vec::new();
    if logic::is_consistent(&premises, theory.options.max_atoms).map_err(EngineError::Logic)? {
        let mini = DefeasibleTheory::build(
            premises,
            theory.rules().to_vec(),
            Vec::new(),
            Vec::new(),
            theory.options.clone(),
        )
        .map_err(EngineError::Theory)?;
        let store = ArgumentStore::build(&mini)?;
        let pool = store.formula_pool();
        let supports = logic::minimal_entailing_subsets(
            &pool,
            &r2.antecedent,
            theory.options.max_atoms,
        )
        .map_err(EngineError::Logic)?;
        for support in supports {
            // all ways of realizing the support, collapsed to rule sets
            let mut rule_sets: Vec<Vec<Rule>> = vec![vec![r2.clone()]];
            for &fi in &support {
                let units = store.units_for_formula(&pool[fi]).to_vec();
                let mut next: Vec<Vec<Rule>> = Vec::new();
                for rs in &rule_sets {
                    for &u in &units {
                        let mut rs = rs.clone();
                        for name in store.unit_rules(u) {
                            if let Some(r) = store.theory().rule(&name) {
                                if !rs.contains(r) {
                                    rs.push(r.clone());
                                }
                            }
                        }
                        next.push(rs);
                    }
                }
                rule_sets = next;
            }
            for rs in rule_sets {
                if !sets.contains(&rs) {
                    sets.push(rs);
                }
            }
        }
    }
    if sets.is_empty() {
        sets.push(vec![r2.clone()]);
    }
    Ok(sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::EngineOptions;
    use crate::Formula as F;

    fn atom(s: &str) -> F {
        F::atom(s)
    }

    fn theory(premises: Vec<F>, rules: Vec<Rule>) -> DefeasibleTheory {
        DefeasibleTheory::build(premises, rules, vec![], vec![], EngineOptions::default())
            .unwrap()
    }

    /// φ~>ψ, φ~>η, η~>¬ψ: the first rule is strictly more specific than the
    /// last.
    fn chained_theory() -> DefeasibleTheory {
        theory(
            vec![atom("ph")],
            vec![
                Rule::new("r1", atom("ph"), atom("ps")),
                Rule::new("r2", atom("ph"), atom("et")),
                Rule::new("r3", atom("et"), F::not(atom("ps"))),
            ],
        )
    }

    fn penguin_theory() -> DefeasibleTheory {
        theory(
            vec![atom("penguin")],
            vec![
                Rule::new("p_nofly", atom("penguin"), F::not(atom("fly"))),
                Rule::new("p_bird", atom("penguin"), atom("bird")),
                Rule::new("b_fly", atom("bird"), atom("fly")),
            ],
        )
    }

    #[test]
    fn more_specific_examples() {
        let t = chained_theory();
        let (r1, r3) = (&t.rules()[0], &t.rules()[2]);
        assert!(more_specific(r1, r3, &t).unwrap());
        assert!(!more_specific(r3, r1, &t).unwrap());
        // any rule is more specific than itself: the premise argument
        assert!(more_specific(r1, r1, &t).unwrap());

        let p = penguin_theory();
        let (nofly, fly) = (&p.rules()[0], &p.rules()[2]);
        assert!(more_specific(nofly, fly, &p).unwrap());
        assert!(!more_specific(fly, nofly, &p).unwrap());
    }

    #[test]
    fn specificity_preference_examples() {
        let t = chained_theory();
        let prefs = specificity_preferences(&t).unwrap();
        assert!(prefs.contains(&(RuleName::new("r1"), RuleName::new("r3"))));
        // r2 (φ~>η) is also strictly more specific than r3 (η~>¬ψ)
        assert!(prefs.contains(&(RuleName::new("r2"), RuleName::new("r3"))));
        assert!(!prefs.contains(&(RuleName::new("r3"), RuleName::new("r1"))));

        let p = penguin_theory();
        let prefs = specificity_preferences(&p).unwrap();
        assert!(prefs.contains(&(RuleName::new("p_nofly"), RuleName::new("b_fly"))));

        // unrelated antecedents generate nothing
        let t = theory(
            vec![atom("x")],
            vec![
                Rule::new("r1", atom("x"), atom("y")),
                Rule::new("r2", atom("z"), atom("w")),
            ],
        );
        assert!(specificity_preferences(&t).unwrap().is_empty());
    }

    #[test]
    fn specificity_ignores_the_premises() {
        let rules = vec![
            Rule::new("p_nofly", atom("penguin"), F::not(atom("fly"))),
            Rule::new("p_bird", atom("penguin"), atom("bird")),
            Rule::new("b_fly", atom("bird"), atom("fly")),
        ];
        let a = theory(vec![atom("penguin")], rules.clone());
        let b = theory(vec![atom("bird"), atom("other")], rules);
        assert_eq!(
            specificity_preferences(&a).unwrap(),
            specificity_preferences(&b).unwrap()
        );
    }

    #[test]
    fn poole_examples() {
        let t = chained_theory();
        let (r1, r3) = (&t.rules()[0], &t.rules()[2]);
        assert!(poole_more_specific(r1, r3, &t).unwrap());
        assert!(poole_more_specific(r1, r1, &t).unwrap());

        let t = theory(
            vec![atom("x")],
            vec![
                Rule::new("r1", atom("x"), atom("y")),
                Rule::new("r2", atom("z"), atom("w")),
            ],
        );
        assert!(!poole_more_specific(&t.rules()[0], &t.rules()[1], &t).unwrap());
    }

    #[test]
    fn merged_preferences_stay_a_strict_partial_order() {
        let t = DefeasibleTheory::build(
            vec![atom("penguin")],
            vec![
                Rule::new("p_nofly", atom("penguin"), F::not(atom("fly"))),
                Rule::new("p_bird", atom("penguin"), atom("bird")),
                Rule::new("b_fly", atom("bird"), atom("fly")),
            ],
            vec![(RuleName::new("b_fly"), RuleName::new("p_bird"))],
            vec![],
            EngineOptions::default(),
        )
        .unwrap();
        let merged = apply_specificity(&t).unwrap();
        let p = merged.preference();
        for (a, b) in p.pairs() {
            assert!(!p.prefers(b, a));
            assert_ne!(a, b);
        }
        assert!(p.prefers(&RuleName::new("p_nofly"), &RuleName::new("b_fly")));
    }

    #[test]
    fn declared_preference_wins_direct_conflicts() {
        // declared says b_fly ≻ p_nofly, specificity says the opposite;
        // the declared pair must survive and the generated one be dropped
        let t = DefeasibleTheory::build(
            vec![atom("penguin")],
            vec![
                Rule::new("p_nofly", atom("penguin"), F::not(atom("fly"))),
                Rule::new("p_bird", atom("penguin"), atom("bird")),
                Rule::new("b_fly", atom("bird"), atom("fly")),
            ],
            vec![(RuleName::new("b_fly"), RuleName::new("p_nofly"))],
            vec![],
            EngineOptions::default(),
        )
        .unwrap();
        let merged = apply_specificity(&t).unwrap();
        assert!(merged
            .preference()
            .prefers(&RuleName::new("b_fly"), &RuleName::new("p_nofly")));
        assert!(!merged
            .preference()
            .prefers(&RuleName::new("p_nofly"), &RuleName::new("b_fly")));
    }

    // With conjunctive antecedents whose atoms reappear negated in the
    // consequent, the contrapositive of the material implication lets the
    // Poole comparison diverge from the argument-based one. Documents the
    // boundary of the direction property tested in the integration suite.
    #[test]
    fn specificity_and_poole_disagree_on_overlapping_conjunctions() {
        let t = theory(
            vec![atom("a")],
            vec![
                Rule::new(
                    "r1",
                    F::and(vec![atom("a"), atom("b")]),
                    F::and(vec![atom("a"), F::not(atom("b"))]),
                ),
                Rule::new("r2", atom("b"), atom("c")),
            ],
        );
        let (r1, r2) = (&t.rules()[0], &t.rules()[1]);
        assert!(more_specific(r1, r2, &t).unwrap());
        assert!(!more_specific(r2, r1, &t).unwrap());
        assert!(!poole_more_specific(r1, r2, &t).unwrap());
    }
}
