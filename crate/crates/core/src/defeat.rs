//! The defeat operator, its fixed points, complete and partial status
//! assignments, extensions and the skeptical belief set.
//!
//! A rule set Ω is a defeat fixed point when Ω equals the set of rules that
//! have an undercut argument sharing no rule with Ω. Fixed points are
//! computed through the JTMS compilation and each result is verified
//! against the defeat operator directly; the 2^|D| brute-force enumerator
//! stays available as an independent test oracle. When no complete fixed
//! point exists the engine falls back to maximal partial status
//! assignments instead of failing, and flags the theory as self-defeating.

use std::collections::{BTreeMap, BTreeSet};

use crate::argument::{
    derive_undercuts, minimal_inconsistency_arguments, ArgumentStore, InconsistencyArgument,
    UndercutStore,
};
use crate::jtms::{labeling_to_assignment, JtmsNetwork};
use crate::logic::{self, Formula};
use crate::theory::{DefeasibleTheory, RuleName};
use crate::EngineError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleStatus {
    Defeated,
    Undefeated,
    Undetermined,
}

/// A (possibly partial) assignment of statuses to every rule of a theory.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StatusAssignment {
    statuses: BTreeMap<RuleName, RuleStatus>,
}

impl StatusAssignment {
    pub fn new(statuses: BTreeMap<RuleName, RuleStatus>) -> Self {
        StatusAssignment { statuses }
    }

    pub fn status(&self, rule: &RuleName) -> RuleStatus {
        self.statuses
            .get(rule)
            .copied()
            .unwrap_or(RuleStatus::Undefeated)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RuleName, RuleStatus)> {
        self.statuses.iter().map(|(r, s)| (r, *s))
    }

    pub fn is_complete(&self) -> bool {
        self.statuses
            .values()
            .all(|s| *s != RuleStatus::Undetermined)
    }

    pub fn defeated(&self) -> BTreeSet<RuleName> {
        self.statuses
            .iter()
            .filter(|(_, s)| **s == RuleStatus::Defeated)
            .map(|(r, _)| r.clone())
            .collect()
    }

    /// Ω: the rules not assigned undefeated.
    pub fn omega(&self) -> BTreeSet<RuleName> {
        self.statuses
            .iter()
            .filter(|(_, s)| **s != RuleStatus::Undefeated)
            .map(|(r, _)| r.clone())
            .collect()
    }

    /// Does `other` agree on all our determined rules and determine more?
    pub fn strictly_extended_by(&self, other: &StatusAssignment) -> bool {
        if self == other {
            return false;
        }
        self.statuses.iter().all(|(r, s)| {
            *s == RuleStatus::Undetermined || other.status(r) == *s
        })
    }
}

/// One extension: the defeated-rule set Ω with its generating assignment.
/// Warranted-proposition queries go through [`DefeatAnalysis::warranted`];
/// the extension itself is intensional since its deductive closure is
/// infinite.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Extension {
    pub omega: BTreeSet<RuleName>,
    pub assignment: StatusAssignment,
}

/// A warranted-membership query: a proposition or a rule negation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Query {
    Formula(Formula),
    Negation(RuleName),
}

/// The full defeat pipeline for one theory: saturated argument store,
/// minimal inconsistency arguments, undercut store and JTMS network.
#[derive(Debug, Clone)]
pub struct DefeatAnalysis {
    store: ArgumentStore,
    conflicts: Vec<InconsistencyArgument>,
    undercuts: UndercutStore,
    network: JtmsNetwork,
}

impl DefeatAnalysis {
    pub fn build(theory: &DefeasibleTheory) -> Result<Self, EngineError> {
        let store = ArgumentStore::build(theory)?;
        let conflicts = minimal_inconsistency_arguments(&store)?;
        let undercuts = derive_undercuts(&store, &conflicts)?;
        let network = JtmsNetwork::compile(theory, &undercuts);
        Ok(DefeatAnalysis {
            store,
            conflicts,
            undercuts,
            network,
        })
    }

    pub fn theory(&self) -> &DefeasibleTheory {
        self.store.theory()
    }

    pub fn store(&self) -> &ArgumentStore {
        &self.store
    }

    pub fn conflicts(&self) -> &[InconsistencyArgument] {
        &self.conflicts
    }

    pub fn undercuts(&self) -> &UndercutStore {
        &self.undercuts
    }

    pub fn network(&self) -> &JtmsNetwork {
        &self.network
    }

    /// The theory contains a self-defeating undercut (target inside its own
    /// argument's rule set).
    pub fn has_self_defeat_undercut(&self) -> bool {
        !self.undercuts.self_defeating.is_empty()
    }

    /// Defeat(Γ): the rules with an undercut argument disjoint from Γ.
    pub fn defeat_operator(&self, gamma: &BTreeSet<RuleName>) -> BTreeSet<RuleName> {
        self.undercuts
            .undercuts
            .iter()
            .filter(|u| u.rule_set.is_disjoint(gamma))
            .map(|u| u.target.clone())
            .collect()
    }

    /// All defeat fixed points as extensions, through the JTMS labeling
    /// enumeration. Every labeling is translated to an assignment and its Ω
    /// re-verified against the defeat operator. Empty when only partial
    /// assignments exist.
    pub fn fixed_points(&self) -> Vec<Extension> {
        let mut out = Vec::new();
        for labeling in self.network.enumerate_labelings() {
            let assignment = labeling_to_assignment(&self.network, &labeling, self.theory());
            let omega = assignment.omega();
            assert_eq!(
                omega,
                self.defeat_operator(&omega),
                "JTMS labeling produced a non-fixed-point"
            );
            let ext = Extension { omega, assignment };
            if !out.contains(&ext) {
                out.push(ext);
            }
        }
        out.sort();
        out
    }

    /// All maximal partial status assignments, through the three-valued
    /// JTMS labeling enumeration.
    pub fn partial_status_assignments(&self) -> Vec<StatusAssignment> {
        let mut out: Vec<StatusAssignment> = self
            .network
            .enumerate_partial_labelings()
            .into_iter()
            .map(|l| labeling_to_assignment(&self.network, &l, self.theory()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Complete extensions when they exist; otherwise the extensions induced
    /// by maximal partial assignments, flagged as self-defeat handling.
    pub fn extensions(&self) -> Result<(Vec<Extension>, bool), EngineError> {
        let complete = self.fixed_points();
        if !complete.is_empty() {
            return Ok((complete, false));
        }
        if self.network.node_count() == 0 {
            // no undercuts at all: the empty assignment is the fixed point
            return Ok((Vec::new(), false));
        }
        if !self.theory().options.allow_partial {
            return Err(EngineError::NoExtension);
        }
        let partial = self
            .partial_status_assignments()
            .into_iter()
            .map(|assignment| Extension {
                omega: assignment.omega(),
                assignment,
            })
            .collect();
        Ok((partial, true))
    }

    /// Warranted membership: some stored argument supports the query and
    /// shares no rule with Ω.
    pub fn warranted(&self, extension: &Extension, query: &Query) -> Result<bool, EngineError> {
        match query {
            Query::Negation(rule) => Ok(self
                .undercuts
                .for_target(rule)
                .any(|u| u.rule_set.is_disjoint(&extension.omega))),
            Query::Formula(goal) => {
                let valid_conclusions = self.valid_conclusions(&extension.omega);
                logic::entails(
                    &valid_conclusions,
                    goal,
                    self.theory().options.max_atoms,
                )
                .map_err(EngineError::Logic)
            }
        }
    }

    /// Conclusions of all units whose derivations avoid Ω.
    fn valid_conclusions(&self, omega: &BTreeSet<RuleName>) -> Vec<Formula> {
        let mut out = BTreeSet::new();
        for u in self.store.unit_ids() {
            if let crate::argument::Conclusion::Formula(f) = self.store.conclusion(u) {
                if self.store.unit_rules(u).is_disjoint(omega) {
                    out.insert(f.clone());
                }
            }
        }
        out.into_iter().collect()
    }

    /// The skeptical belief set over the current extensions.
    pub fn belief_set(&self) -> Result<BeliefSet<'_>, EngineError> {
        let (extensions, self_defeat) = self.extensions()?;
        Ok(BeliefSet {
            analysis: self,
            extensions,
            self_defeat,
        })
    }

    /// Independent fixed-point oracle: enumerate every candidate Ω over the
    /// undercut targets and keep those with Ω = Defeat(Ω). (Any fixed point
    /// is a subset of the target set, since Defeat only ever returns
    /// targets.)
    pub fn brute_force_fixed_points(&self) -> Vec<BTreeSet<RuleName>> {
        let targets: Vec<RuleName> = self.undercuts.targets().into_iter().collect();
        let mut out = Vec::new();
        for mask in 0..(1u64 << targets.len()) {
            let omega: BTreeSet<RuleName> = targets
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect();
            if omega == self.defeat_operator(&omega) {
                out.push(omega);
            }
        }
        out.sort();
        out
    }

    /// Independent partial-assignment oracle: all three-valued assignments
    /// over the undercut targets satisfying both status conditions, filtered
    /// to the maximal ones. Rules without undercuts are undefeated.
    pub fn brute_force_partial_assignments(&self) -> Vec<StatusAssignment> {
        let targets: Vec<RuleName> = self.undercuts.targets().into_iter().collect();
        let statuses = [
            RuleStatus::Defeated,
            RuleStatus::Undefeated,
            RuleStatus::Undetermined,
        ];
        let mut valid: Vec<StatusAssignment> = Vec::new();
        for code in 0..3usize.pow(targets.len() as u32) {
            let mut c = code;
            let mut map = BTreeMap::new();
            for rule in self.theory().rules() {
                map.insert(rule.name.clone(), RuleStatus::Undefeated);
            }
            for t in &targets {
                map.insert(t.clone(), statuses[c % 3]);
                c /= 3;
            }
            let sa = StatusAssignment::new(map);
            if self.assignment_is_valid(&sa) {
                valid.push(sa);
            }
        }
        let mut maximal: Vec<StatusAssignment> = valid
            .iter()
            .filter(|sa| !valid.iter().any(|other| sa.strictly_extended_by(other)))
            .cloned()
            .collect();
        maximal.sort();
        maximal.dedup();
        maximal
    }

    /// Both status-assignment conditions, read as biconditionals: defeated
    /// iff some undercut has an all-undefeated rule set, undefeated iff
    /// every undercut contains a defeated rule, undetermined iff neither.
    fn assignment_is_valid(&self, sa: &StatusAssignment) -> bool {
        self.theory().rules().iter().all(|rule| {
            let mut any_fires = false;
            let mut all_blocked = true;
            for u in self.undercuts.for_target(&rule.name) {
                let fires = u
                    .rule_set
                    .iter()
                    .all(|r| sa.status(r) == RuleStatus::Undefeated);
                let blocked = u
                    .rule_set
                    .iter()
                    .any(|r| sa.status(r) == RuleStatus::Defeated);
                any_fires |= fires;
                all_blocked &= blocked;
            }
            match sa.status(&rule.name) {
                RuleStatus::Defeated => any_fires,
                RuleStatus::Undefeated => all_blocked,
                RuleStatus::Undetermined => !any_fires && !all_blocked,
            }
        })
    }
}

/// The skeptical belief set: what is warranted in every extension.
pub struct BeliefSet<'a> {
    analysis: &'a DefeatAnalysis,
    extensions: Vec<Extension>,
    self_defeat: bool,
}

impl BeliefSet<'_> {
    pub fn extensions(&self) -> &[Extension] {
        &self.extensions
    }

    pub fn self_defeat(&self) -> bool {
        self.self_defeat
    }

    pub fn holds(&self, query: &Query) -> Result<bool, EngineError> {
        if self.extensions.is_empty() {
            // no undercuts anywhere: the one extension has an empty Ω
            let empty = Extension {
                omega: BTreeSet::new(),
                assignment: StatusAssignment::new(
                    self.analysis
                        .theory()
                        .rules()
                        .iter()
                        .map(|r| (r.name.clone(), RuleStatus::Undefeated))
                        .collect(),
                ),
            };
            return self.analysis.warranted(&empty, query);
        }
        for ext in &self.extensions {
            if !self.analysis.warranted(ext, query)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
