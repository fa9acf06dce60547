//! Canonical argument construction, sub-argument testing, minimal
//! inconsistency arguments and undercut derivation.
//!
//! Arguments are derivation DAGs over premises and rule applications. The
//! definition admits infinitely many arguments (arbitrary unions, restated
//! deductions), so the store enumerates only canonical ones: each rule
//! application sits on a subset-minimal support, and no rule name repeats
//! along any root-to-leaf path. Non-canonical arguments add no new
//! conclusion/rule-set combinations relevant to defeat; the default-logic
//! oracle cross-checks that claim on every fuzzed theory.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use crate::logic::{self, Formula, LogicError};
use crate::theory::{DefeasibleTheory, Rule, RuleConsequent, RuleName, RuleOrigin};
use crate::EngineError;

/// Index of an argument unit inside an [`ArgumentStore`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitId(pub usize);

/// What a unit concludes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Conclusion {
    Formula(Formula),
    Negation(RuleName),
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Formula(fm) => write!(f, "{fm}"),
            Conclusion::Negation(r) => write!(f, "not({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum StoreStep {
    Premise(Formula),
    Apply { rule: usize, support: Vec<UnitId> },
}

#[derive(Debug, Clone)]
struct Unit {
    step: StoreStep,
    conclusion: Conclusion,
    /// All rule indices used anywhere in this unit's derivation.
    rules: BTreeSet<usize>,
}

/// The saturated store of canonical argument units for one theory.
///
/// Built once per theory; immutable afterwards and safe to share.
#[derive(Debug, Clone)]
pub struct ArgumentStore {
    theory: DefeasibleTheory,
    units: Vec<Unit>,
    /// Units concluding each distinct proposition.
    by_formula: BTreeMap<Formula, Vec<UnitId>>,
    /// Units concluding each rule negation (direct undercutter applications).
    by_negation: BTreeMap<RuleName, Vec<UnitId>>,
    /// Dedup index for rule applications.
    app_index: BTreeSet<(usize, Vec<UnitId>)>,
}

impl ArgumentStore {
    /// Saturate the theory: a rule is supported once some subset of the
    /// premises and already-derived conclusions entails its antecedent; for
    /// each supported rule every subset-minimal support is materialized.
    pub fn build(theory: &DefeasibleTheory) -> Result<Self, EngineError> {
        let mut store = ArgumentStore {
            theory: theory.clone(),
            units: Vec::new(),
            by_formula: BTreeMap::new(),
            by_negation: BTreeMap::new(),
            app_index: BTreeSet::new(),
        };
        for p in theory.premises() {
            store.push_unit(Unit {
                step: StoreStep::Premise(p.clone()),
                conclusion: Conclusion::Formula(p.clone()),
                rules: BTreeSet::new(),
            })?;
        }
        loop {
            let mut changed = false;
            for ri in 0..theory.rules().len() {
                changed |= store.extend_rule(ri)?;
            }
            if !changed {
                break;
            }
        }
        Ok(store)
    }

    fn push_unit(&mut self, unit: Unit) -> Result<UnitId, EngineError> {
        if self.units.len() >= self.theory.options.arg_cap {
            return Err(EngineError::Logic(LogicError::SizeCapExceeded {
                size: self.units.len() + 1,
                cap: self.theory.options.arg_cap,
            }));
        }
        let id = UnitId(self.units.len());
        match &unit.conclusion {
            Conclusion::Formula(f) => self.by_formula.entry(f.clone()).or_default().push(id),
            Conclusion::Negation(r) => self.by_negation.entry(r.clone()).or_default().push(id),
        }
        if let StoreStep::Apply { rule, support } = &unit.step {
            self.app_index.insert((*rule, support.clone()));
        }
        self.units.push(unit);
        Ok(id)
    }

    fn extend_rule(&mut self, ri: usize) -> Result<bool, EngineError> {
        let rule = self.theory.rules()[ri].clone();
        // formulas realizable without reusing this rule anywhere below
        let avail: Vec<(Formula, Vec<UnitId>)> = self
            .by_formula
            .iter()
            .filter_map(|(f, ids)| {
                let clean: Vec<UnitId> = ids
                    .iter()
                    .copied()
                    .filter(|u| !self.units[u.0].rules.contains(&ri))
                    .collect();
                (!clean.is_empty()).then(|| (f.clone(), clean))
            })
            .collect();
        let pool: Vec<Formula> = avail.iter().map(|(f, _)| f.clone()).collect();
        // hypothesis applications additionally require the support's
        // conclusions to mention every atom of the disjunction, which makes
        // their minimal supports minimal under the combined condition
        let supports = if rule.origin == RuleOrigin::Hypothesis {
            logic::minimal_gated_entailing_subsets(
                &pool,
                &rule.antecedent,
                self.theory.options.max_atoms,
            )
        } else {
            logic::minimal_entailing_subsets(
                &pool,
                &rule.antecedent,
                self.theory.options.max_atoms,
            )
        }
        .map_err(EngineError::Logic)?;

        let mut changed = false;
        for support in supports {
            let realizers: Vec<&Vec<UnitId>> = support.iter().map(|&i| &avail[i].1).collect();
            let mut combos: Vec<Vec<UnitId>> = vec![Vec::new()];
            for ids in realizers {
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        ids.iter().map(move |id| {
                            let mut c = c.clone();
                            c.push(*id);
                            c
                        })
                    })
                    .collect();
            }
            for mut combo in combos {
                combo.sort();
                if self.app_index.contains(&(ri, combo.clone())) {
                    continue;
                }
                let mut rules: BTreeSet<usize> = combo
                    .iter()
                    .flat_map(|u| self.units[u.0].rules.iter().copied())
                    .collect();
                rules.insert(ri);
                let conclusion = match &rule.consequent {
                    RuleConsequent::Formula(f) => Conclusion::Formula(f.clone()),
                    RuleConsequent::Negation(r) => Conclusion::Negation(r.clone()),
                };
                self.push_unit(Unit {
                    step: StoreStep::Apply {
                        rule: ri,
                        support: combo,
                    },
                    conclusion,
                    rules,
                })?;
                changed = true;
            }
        }
        Ok(changed)
    }

    pub fn theory(&self) -> &DefeasibleTheory {
        &self.theory
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn unit_ids(&self) -> impl Iterator<Item = UnitId> {
        (0..self.units.len()).map(UnitId)
    }

    pub fn conclusion(&self, u: UnitId) -> &Conclusion {
        &self.units[u.0].conclusion
    }

    /// All rule names used anywhere in the unit's derivation.
    pub fn unit_rules(&self, u: UnitId) -> BTreeSet<RuleName> {
        self.units[u.0]
            .rules
            .iter()
            .map(|&ri| self.theory.rules()[ri].name.clone())
            .collect()
    }

    fn unit_rule_indices(&self, u: UnitId) -> &BTreeSet<usize> {
        &self.units[u.0].rules
    }

    /// The distinct proposition conclusions present in the store.
    pub fn formula_pool(&self) -> Vec<Formula> {
        self.by_formula.keys().cloned().collect()
    }

    pub fn units_for_formula(&self, f: &Formula) -> &[UnitId] {
        self.by_formula.get(f).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Supported rules with their minimal support arguments.
    pub fn supported_rules(&self) -> Vec<(&Rule, Vec<Argument>)> {
        let mut per_rule: BTreeMap<usize, Vec<Argument>> = BTreeMap::new();
        for unit in &self.units {
            if let StoreStep::Apply { rule, support } = &unit.step {
                per_rule
                    .entry(*rule)
                    .or_default()
                    .push(self.argument(support));
            }
        }
        per_rule
            .into_iter()
            .map(|(ri, args)| (&self.theory.rules()[ri], args))
            .collect()
    }

    /// The recursive argument made of the given top-level units.
    pub fn argument(&self, units: &[UnitId]) -> Argument {
        let mut steps: Vec<ArgStep> = units.iter().map(|&u| self.step(u)).collect();
        steps.sort();
        steps.dedup();
        Argument { steps }
    }

    fn step(&self, u: UnitId) -> ArgStep {
        match &self.units[u.0].step {
            StoreStep::Premise(f) => ArgStep::Premise(f.clone()),
            StoreStep::Apply { rule, support } => ArgStep::Apply {
                support: self.argument(support),
                rule: self.theory.rules()[*rule].name.clone(),
            },
        }
    }

    /// Whether the theory can derive anything at all for each rule; used by
    /// reports.
    pub fn is_rule_supported(&self, name: &RuleName) -> bool {
        let Some(ri) = self.theory.rule_index(name) else {
            return false;
        };
        self.units.iter().any(
            |u| matches!(&u.step, StoreStep::Apply { rule, .. } if *rule == ri),
        )
    }

    /// GraphViz rendering of the unit DAG: premise boxes, rule-application
    /// ellipses, and support edges.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph arguments {\n  rankdir=BT;\n");
        for (i, unit) in self.units.iter().enumerate() {
            match &unit.step {
                StoreStep::Premise(f) => {
                    let _ = writeln!(
                        s,
                        "  u{i} [shape=box, label=\"{}\"];",
                        escape_dot(&f.to_string())
                    );
                }
                StoreStep::Apply { rule, .. } => {
                    let r = &self.theory.rules()[*rule];
                    let _ = writeln!(
                        s,
                        "  u{i} [shape=ellipse, label=\"{}: {}\"];",
                        escape_dot(r.name.as_str()),
                        escape_dot(&unit.conclusion.to_string())
                    );
                }
            }
            if let StoreStep::Apply { support, .. } = &unit.step {
                for dep in support {
                    let _ = writeln!(s, "  u{} -> u{i};", dep.0);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// A derivation step of a standalone [`Argument`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ArgStep {
    Premise(Formula),
    Apply { support: Argument, rule: RuleName },
}

/// A standalone argument: a set of derivation steps in the nested
/// `⟨support, rule⟩` form. Step order is canonical, so structural equality
/// is set equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Argument {
    pub steps: Vec<ArgStep>,
}

impl Argument {
    pub fn from_steps(mut steps: Vec<ArgStep>) -> Self {
        steps.sort();
        steps.dedup();
        Argument { steps }
    }

    pub fn premise(f: Formula) -> Self {
        Argument {
            steps: vec![ArgStep::Premise(f)],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The last rules: rules of the top-level steps.
    pub fn last_rules(&self) -> BTreeSet<RuleName> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                ArgStep::Apply { rule, .. } => Some(rule.clone()),
                ArgStep::Premise(_) => None,
            })
            .collect()
    }

    /// Top-level conclusions, with rule consequents resolved against the
    /// theory. Rule-negation conclusions are included as [`Conclusion::Negation`].
    pub fn conclusions(&self, theory: &DefeasibleTheory) -> Vec<Conclusion> {
        let mut out: Vec<Conclusion> = self
            .steps
            .iter()
            .map(|s| match s {
                ArgStep::Premise(f) => Conclusion::Formula(f.clone()),
                ArgStep::Apply { rule, .. } => match &theory
                    .rule(rule)
                    .expect("rule of argument step missing from theory")
                    .consequent
                {
                    RuleConsequent::Formula(f) => Conclusion::Formula(f.clone()),
                    RuleConsequent::Negation(r) => Conclusion::Negation(r.clone()),
                },
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn conclusion_formulas(&self, theory: &DefeasibleTheory) -> Vec<Formula> {
        self.conclusions(theory)
            .into_iter()
            .filter_map(|c| match c {
                Conclusion::Formula(f) => Some(f),
                Conclusion::Negation(_) => None,
            })
            .collect()
    }

    /// All rules used anywhere in the argument.
    pub fn all_rules(&self) -> BTreeSet<RuleName> {
        let mut out = BTreeSet::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut BTreeSet<RuleName>) {
        for s in &self.steps {
            if let ArgStep::Apply { support, rule } = s {
                out.insert(rule.clone());
                support.collect_rules(out);
            }
        }
    }

    /// All premises used anywhere in the argument.
    pub fn premises(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_premises(&mut out);
        out
    }

    fn collect_premises(&self, out: &mut BTreeSet<Formula>) {
        for s in &self.steps {
            match s {
                ArgStep::Premise(f) => {
                    out.insert(f.clone());
                }
                ArgStep::Apply { support, .. } => support.collect_premises(out),
            }
        }
    }

    /// Whether the argument's top-level conclusions entail `goal`.
    pub fn supports(
        &self,
        theory: &DefeasibleTheory,
        goal: &Formula,
    ) -> Result<bool, LogicError> {
        logic::entails(
            &self.conclusion_formulas(theory),
            goal,
            theory.options.max_atoms,
        )
    }

    /// Sub-argument test: every step of `self` is a sub-structure of
    /// `other`. The empty argument is a sub-argument of everything.
    pub fn is_subargument(&self, other: &Argument) -> bool {
        self.steps.iter().all(|s| step_is_substructure(s, other))
    }
}

fn step_is_substructure(step: &ArgStep, b: &Argument) -> bool {
    b.steps.iter().any(|bs| match (step, bs) {
        (ArgStep::Premise(f), ArgStep::Premise(g)) if f == g => true,
        (
            ArgStep::Apply { support: sa, rule: ra },
            ArgStep::Apply { support: sb, rule: rb },
        ) if ra == rb && sa.is_subargument(sb) => true,
        // otherwise, look deeper inside b's step
        (_, ArgStep::Apply { support, .. }) => step_is_substructure(step, support),
        _ => false,
    })
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match s {
                ArgStep::Premise(fm) => write!(f, "<{{}}, {fm}>")?,
                ArgStep::Apply { support, rule } => write!(f, "<{support}, {rule}>")?,
            }
        }
        write!(f, "}}")
    }
}

/// A subset-minimal argument for an inconsistency: its top-level steps are
/// the disagreeing arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InconsistencyArgument {
    /// Top-level units, one per formula of the minimal inconsistent set.
    pub steps: Vec<UnitId>,
    /// The inconsistent conclusion set.
    pub conclusions: BTreeSet<Formula>,
}

impl InconsistencyArgument {
    /// Last rules of the inconsistency argument, as (step, rule) pairs;
    /// premise steps contribute nothing.
    pub fn last_rule_steps(&self, store: &ArgumentStore) -> Vec<(UnitId, RuleName)> {
        self.steps
            .iter()
            .filter_map(|&u| match &store.units[u.0].step {
                StoreStep::Apply { rule, .. } => {
                    Some((u, store.theory.rules()[*rule].name.clone()))
                }
                StoreStep::Premise(_) => None,
            })
            .collect()
    }
}

/// An argument for the undercutting defeat of `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Undercut {
    pub target: RuleName,
    /// All rules used anywhere in the undercut argument.
    pub rule_set: BTreeSet<RuleName>,
    /// Top-level units of the undercut argument.
    pub steps: Vec<UnitId>,
    /// Whether this is a direct undercutter application rather than a
    /// conflict-derived undercut.
    pub direct: bool,
}

/// The complete collection of undercut arguments for a theory.
#[derive(Debug, Clone, Default)]
pub struct UndercutStore {
    pub undercuts: Vec<Undercut>,
    /// Targets r with r itself inside some undercut's rule set; the
    /// signature of a self-defeating theory.
    pub self_defeating: BTreeSet<RuleName>,
}

impl UndercutStore {
    pub fn targets(&self) -> BTreeSet<RuleName> {
        self.undercuts.iter().map(|u| u.target.clone()).collect()
    }

    pub fn for_target<'a>(&'a self, r: &'a RuleName) -> impl Iterator<Item = &'a Undercut> {
        self.undercuts.iter().filter(move |u| &u.target == r)
    }
}

/// Every subset-minimal inconsistent combination of premises and
/// supported-rule conclusions, one argument per distinct tuple of minimal
/// supporting sub-arguments.
pub fn minimal_inconsistency_arguments(
    store: &ArgumentStore,
) -> Result<Vec<InconsistencyArgument>, EngineError> {
    let pool = store.formula_pool();
    let cores =
        logic::minimal_inconsistent_subsets_unbounded(&pool, store.theory.options.max_atoms)
            .map_err(EngineError::Logic)?;
    let mut out = Vec::new();
    for core in cores {
        let realizers: Vec<&[UnitId]> = core.iter().map(|f| store.units_for_formula(f)).collect();
        let mut tuples: Vec<Vec<UnitId>> = vec![Vec::new()];
        for ids in realizers {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    ids.iter().map(move |id| {
                        let mut t = t.clone();
                        t.push(*id);
                        t
                    })
                })
                .collect();
            if tuples.len() > store.theory.options.arg_cap {
                return Err(EngineError::Logic(LogicError::SizeCapExceeded {
                    size: tuples.len(),
                    cap: store.theory.options.arg_cap,
                }));
            }
        }
        for mut steps in tuples {
            steps.sort();
            out.push(InconsistencyArgument {
                steps,
                conclusions: core.clone(),
            });
        }
    }
    Ok(out)
}

/// Undercut arguments from one minimal inconsistency argument: for each
/// occurrence of a least-preferred last rule, drop that step and splice in
/// its support.
pub fn undercut_arguments(
    store: &ArgumentStore,
    conflict: &InconsistencyArgument,
) -> Result<Vec<Undercut>, EngineError> {
    let last = conflict.last_rule_steps(store);
    if last.is_empty() {
        return Err(EngineError::PremiseLevelConflict);
    }
    let names: Vec<&RuleName> = {
        let mut seen = BTreeSet::new();
        last.iter()
            .map(|(_, r)| r)
            .filter(|r| seen.insert((*r).clone()))
            .collect()
    };
    let min = store.theory.min_preferred(&names);
    let mut out = Vec::new();
    for (unit, rule) in &last {
        if !min.contains(&rule) {
            continue;
        }
        let mut steps: Vec<UnitId> = conflict
            .steps
            .iter()
            .copied()
            .filter(|u| u != unit)
            .collect();
        if let StoreStep::Apply { support, .. } = &store.units[unit.0].step {
            steps.extend(support.iter().copied());
        }
        steps.sort();
        steps.dedup();
        let rule_set: BTreeSet<RuleName> = steps
            .iter()
            .flat_map(|&u| {
                store
                    .unit_rule_indices(u)
                    .iter()
                    .map(|&ri| store.theory.rules()[ri].name.clone())
            })
            .collect();
        out.push(Undercut {
            target: rule.clone(),
            rule_set,
            steps,
            direct: false,
        });
    }
    Ok(out)
}

/// Arguments whose top-level step applies a rule with a rule-negation
/// consequent; these exist without any inconsistency.
pub fn direct_undercuts(store: &ArgumentStore) -> Vec<Undercut> {
    let mut out = Vec::new();
    for (target, units) in &store.by_negation {
        for &u in units {
            out.push(Undercut {
                target: target.clone(),
                rule_set: store.unit_rules(u),
                steps: vec![u],
                direct: true,
            });
        }
    }
    out
}

/// Derive the full undercut store: conflict-derived undercuts for every
/// minimal inconsistency argument plus all direct undercuts, deduplicated
/// by (target, rule set).
pub fn derive_undercuts(
    store: &ArgumentStore,
    conflicts: &[InconsistencyArgument],
) -> Result<UndercutStore, EngineError> {
    let mut undercuts: Vec<Undercut> = Vec::new();
    let mut seen: BTreeSet<(RuleName, Vec<RuleName>)> = BTreeSet::new();
    let mut push = |u: Undercut, undercuts: &mut Vec<Undercut>| {
        let key = (u.target.clone(), u.rule_set.iter().cloned().collect());
        if seen.insert(key) {
            undercuts.push(u);
        }
    };
    for conflict in conflicts {
        for u in undercut_arguments(store, conflict)? {
            push(u, &mut undercuts);
        }
    }
    for u in direct_undercuts(store) {
        push(u, &mut undercuts);
    }
    let self_defeating = undercuts
        .iter()
        .filter(|u| u.rule_set.contains(&u.target))
        .map(|u| u.target.clone())
        .collect();
    Ok(UndercutStore {
        undercuts,
        self_defeating,
    })
}
