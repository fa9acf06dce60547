//! The JTMS encoding of the defeat fixed-point problem and the
//! counter-propagation labeling algorithm.
//!
//! The network has one node per rule negation for which an argument exists,
//! and one justification per such argument: an empty in-node set plus the
//! negations of every rule the argument uses (restricted to rules that have
//! a node at all — a rule nobody attacks contributes nothing). A rule is
//! defeated exactly when its node is labeled IN, so admissible labelings
//! correspond one to one with status assignments.
//!
//! Propagation is a transcription of the counter algorithm: node counters
//! track live incoming justifications, justification counters track
//! out-nodes not yet OUT. Self-defeat shows up as odd cycles in the
//! dependency graph; those nodes are detected up front and can be marked
//! undetermined, a marking that later propagation may override when the
//! rest of the labeling enforces IN or OUT.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::argument::UndercutStore;
use crate::defeat::{RuleStatus, StatusAssignment};
use crate::theory::{DefeasibleTheory, RuleName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Justification {
    /// Out-node set; the in-node set is always empty in this encoding.
    pub out: Vec<NodeId>,
    pub consequent: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Unlabeled,
    In,
    Out,
    Undetermined,
}

/// A total labeling of the network.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Labeling {
    pub labels: Vec<Label>,
}

impl Labeling {
    pub fn label(&self, n: NodeId) -> Label {
        self.labels[n.0]
    }

    pub fn determined(&self) -> usize {
        self.labels
            .iter()
            .filter(|l| matches!(l, Label::In | Label::Out))
            .count()
    }

    pub fn is_complete(&self) -> bool {
        self.labels.iter().all(|l| matches!(l, Label::In | Label::Out))
    }
}

/// A justification network with empty in-node sets.
#[derive(Debug, Clone)]
pub struct JtmsNetwork {
    names: Vec<String>,
    justifications: Vec<Justification>,
    /// Per node: indices of justifications with that consequent.
    incoming: Vec<Vec<usize>>,
    /// Per node: indices of justifications in whose out-set the node occurs.
    affects: Vec<Vec<usize>>,
}

impl JtmsNetwork {
    pub fn new(names: Vec<String>, justifications: Vec<Justification>) -> Self {
        let n = names.len();
        let mut incoming = vec![Vec::new(); n];
        let mut affects = vec![Vec::new(); n];
        for (ji, j) in justifications.iter().enumerate() {
            incoming[j.consequent.0].push(ji);
            for o in &j.out {
                affects[o.0].push(ji);
            }
        }
        JtmsNetwork {
            names,
            justifications,
            incoming,
            affects,
        }
    }

    /// Compile the undercut store of a theory: one node per attacked rule,
    /// one justification per undercut argument's rule set, out-sets
    /// restricted to rules that have nodes.
    pub fn compile(_theory: &DefeasibleTheory, undercuts: &UndercutStore) -> Self {
        let targets: Vec<RuleName> = undercuts.targets().into_iter().collect();
        let index: BTreeMap<&RuleName, usize> =
            targets.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let mut justs: Vec<Justification> = Vec::new();
        let mut seen: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for u in &undercuts.undercuts {
            let consequent = NodeId(index[&u.target]);
            let mut out: Vec<usize> = u
                .rule_set
                .iter()
                .filter_map(|r| index.get(r).copied())
                .collect();
            out.sort();
            out.dedup();
            if seen.insert((consequent.0, out.clone())) {
                justs.push(Justification {
                    out: out.into_iter().map(NodeId).collect(),
                    consequent,
                });
            }
        }
        JtmsNetwork::new(
            targets.into_iter().map(|r| r.0).collect(),
            justs,
        )
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn justification_count(&self) -> usize {
        self.justifications.len()
    }

    pub fn name(&self, n: NodeId) -> &str {
        &self.names[n.0]
    }

    pub fn node_of(&self, rule: &RuleName) -> Option<NodeId> {
        self.names.iter().position(|n| n == &rule.0).map(NodeId)
    }

    pub fn justifications(&self) -> &[Justification] {
        &self.justifications
    }

    /// Nodes on an odd cycle of the dependency graph, plus the nodes all of
    /// whose justifications depend on such nodes.
    ///
    /// A node lies on an odd closed walk iff its two copies in the bipartite
    /// double cover share a strongly connected component; since every
    /// justification edge is a negative (out-list) dependency, an odd closed
    /// walk is exactly an odd cycle of mutual defeat.
    pub fn detect_odd_loops(&self) -> BTreeSet<NodeId> {
        let n = self.node_count();
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..2 * n).map(|_| g.add_node(())).collect();
        for j in &self.justifications {
            let u = j.consequent.0;
            for o in &j.out {
                // (u, parity) -> (o, 1 - parity)
                g.add_edge(nodes[2 * u], nodes[2 * o.0 + 1], ());
                g.add_edge(nodes[2 * u + 1], nodes[2 * o.0], ());
            }
        }
        let mut marked: BTreeSet<NodeId> = BTreeSet::new();
        for scc in tarjan_scc(&g) {
            let members: BTreeSet<usize> = scc.iter().map(|ix| ix.index()).collect();
            for v in 0..n {
                if members.contains(&(2 * v)) && members.contains(&(2 * v + 1)) {
                    marked.insert(NodeId(v));
                }
            }
        }
        // nodes that necessarily depend on an odd loop: every justification
        // mentions a marked node
        loop {
            let mut grew = false;
            for v in 0..n {
                if marked.contains(&NodeId(v)) || self.incoming[v].is_empty() {
                    continue;
                }
                let all_touch = self.incoming[v].iter().all(|&ji| {
                    self.justifications[ji]
                        .out
                        .iter()
                        .any(|o| marked.contains(o))
                });
                if all_touch {
                    marked.insert(NodeId(v));
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        marked
    }

    fn fires(&self, ji: usize, labels: &[Label]) -> bool {
        self.justifications[ji]
            .out
            .iter()
            .all(|o| labels[o.0] == Label::Out)
    }

    fn blocked(&self, ji: usize, labels: &[Label]) -> bool {
        self.justifications[ji]
            .out
            .iter()
            .any(|o| labels[o.0] == Label::In)
    }

    /// Admissibility of a total labeling: IN iff some justification has all
    /// out-nodes OUT, OUT iff every justification has an IN out-node,
    /// UNDETERMINED iff neither.
    pub fn is_admissible(&self, labeling: &Labeling) -> bool {
        let labels = &labeling.labels;
        (0..self.node_count()).all(|v| {
            let has_fire = self.incoming[v].iter().any(|&ji| self.fires(ji, labels));
            let all_blocked = self.incoming[v].iter().all(|&ji| self.blocked(ji, labels));
            match labels[v] {
                Label::In => has_fire,
                Label::Out => all_blocked,
                Label::Undetermined => !has_fire && !all_blocked,
                Label::Unlabeled => false,
            }
        })
    }

    /// Fresh counter state: node counters hold incoming-justification
    /// counts, justification counters hold out-node counts.
    pub fn init_state(&self) -> LabelState {
        LabelState {
            labels: vec![Label::Unlabeled; self.node_count()],
            node_counter: self.incoming.iter().map(|v| v.len()).collect(),
            just_counter: self.justifications.iter().map(|j| j.out.len()).collect(),
            just_dead: vec![false; self.justification_count()],
        }
    }

    /// Label every node that has a justification with an empty out-set IN,
    /// then propagate to completion.
    pub fn initial_propagation(&self, state: &mut LabelState) -> bool {
        let mut in_list = Vec::new();
        for j in &self.justifications {
            if j.out.is_empty() && state.labels[j.consequent.0] != Label::In {
                state.labels[j.consequent.0] = Label::In;
                in_list.push(j.consequent);
            }
        }
        self.propagate(state, in_list, Vec::new())
    }

    /// The counter-propagation loop. Nodes on `in_list`/`out_list` must have
    /// just received those labels. Undetermined nodes may be overridden when
    /// the propagation enforces a label. Returns false when a forced label
    /// contradicts an already fixed one; such a branch has no admissible
    /// completion.
    pub fn propagate(
        &self,
        state: &mut LabelState,
        mut in_list: Vec<NodeId>,
        mut out_list: Vec<NodeId>,
    ) -> bool {
        loop {
            if in_list.is_empty() && out_list.is_empty() {
                return true;
            }
            for n in std::mem::take(&mut in_list) {
                for &ji in &self.affects[n.0] {
                    if state.just_dead[ji] {
                        continue;
                    }
                    // an IN out-node kills the justification
                    state.just_dead[ji] = true;
                    let c = self.justifications[ji].consequent;
                    state.node_counter[c.0] -= 1;
                    if state.node_counter[c.0] == 0 {
                        match state.labels[c.0] {
                            Label::Unlabeled | Label::Undetermined => {
                                state.labels[c.0] = Label::Out;
                                out_list.push(c);
                            }
                            Label::In => return false,
                            Label::Out => {}
                        }
                    }
                }
            }
            for n in std::mem::take(&mut out_list) {
                for &ji in &self.affects[n.0] {
                    if state.just_dead[ji] {
                        continue;
                    }
                    state.just_counter[ji] -= 1;
                    if state.just_counter[ji] == 0 {
                        let c = self.justifications[ji].consequent;
                        match state.labels[c.0] {
                            Label::Unlabeled | Label::Undetermined => {
                                state.labels[c.0] = Label::In;
                                in_list.push(c);
                            }
                            Label::Out => return false,
                            Label::In => {}
                        }
                    }
                }
            }
        }
    }

    /// All admissible complete labelings, by initialization, propagation and
    /// backtracking over the unlabeled nodes in index order, IN before OUT.
    pub fn enumerate_labelings(&self) -> Vec<Labeling> {
        let mut state = self.init_state();
        if !self.initial_propagation(&mut state) {
            return Vec::new();
        }
        let mut out = Vec::new();
        self.enumerate_rec(state, &mut out);
        out
    }

    fn enumerate_rec(&self, state: LabelState, out: &mut Vec<Labeling>) {
        match state.labels.iter().position(|l| *l == Label::Unlabeled) {
            None => {
                let labeling = Labeling {
                    labels: state.labels,
                };
                if self.is_admissible(&labeling) && !out.contains(&labeling) {
                    out.push(labeling);
                }
            }
            Some(v) => {
                for label in [Label::In, Label::Out] {
                    let mut st = state.clone();
                    st.labels[v] = label;
                    let (in_list, out_list) = match label {
                        Label::In => (vec![NodeId(v)], vec![]),
                        _ => (vec![], vec![NodeId(v)]),
                    };
                    if self.propagate(&mut st, in_list, out_list) {
                        self.enumerate_rec(st, out);
                    }
                }
            }
        }
    }

    /// All maximal admissible partial labelings: three-way backtracking with
    /// propagation, an override pass that flips undetermined nodes whose
    /// label the rest enforces, and a final maximality filter.
    pub fn enumerate_partial_labelings(&self) -> Vec<Labeling> {
        let mut state = self.init_state();
        if !self.initial_propagation(&mut state) {
            return Vec::new();
        }
        let mut collected = Vec::new();
        self.enumerate_partial_rec(state, &mut collected);
        // keep only labelings not strictly extended by another
        let maximal: Vec<Labeling> = collected
            .iter()
            .filter(|l| {
                !collected.iter().any(|m| {
                    *m != **l
                        && l.labels.iter().zip(&m.labels).all(|(a, b)| {
                            *a == Label::Undetermined || a == b
                        })
                })
            })
            .cloned()
            .collect();
        maximal
    }

    fn enumerate_partial_rec(&self, state: LabelState, out: &mut Vec<Labeling>) {
        match state.labels.iter().position(|l| *l == Label::Unlabeled) {
            None => {
                let mut labels = state.labels;
                self.override_undetermined(&mut labels);
                let labeling = Labeling { labels };
                if self.is_admissible(&labeling) && !out.contains(&labeling) {
                    out.push(labeling);
                }
            }
            Some(v) => {
                for label in [Label::In, Label::Out, Label::Undetermined] {
                    let mut st = state.clone();
                    st.labels[v] = label;
                    let (in_list, out_list) = match label {
                        Label::In => (vec![NodeId(v)], vec![]),
                        Label::Out => (vec![], vec![NodeId(v)]),
                        _ => (vec![], vec![]),
                    };
                    if self.propagate(&mut st, in_list, out_list) {
                        self.enumerate_partial_rec(st, out);
                    }
                }
            }
        }
    }

    /// Flip undetermined nodes to IN or OUT wherever the labeling of the
    /// remaining nodes enforces it, to a fixpoint.
    fn override_undetermined(&self, labels: &mut [Label]) {
        loop {
            let mut changed = false;
            for v in 0..self.node_count() {
                if labels[v] != Label::Undetermined {
                    continue;
                }
                let has_fire = self.incoming[v].iter().any(|&ji| self.fires(ji, labels));
                let all_blocked = self.incoming[v].iter().all(|&ji| self.blocked(ji, labels));
                if has_fire {
                    labels[v] = Label::In;
                    changed = true;
                } else if all_blocked {
                    labels[v] = Label::Out;
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// The pragmatic single-pass handling of self-defeat: mark odd-loop
    /// nodes undetermined, run the initial propagation, then override
    /// marked nodes wherever the rest enforces a label.
    pub fn mark_and_propagate(&self) -> Labeling {
        let marked = self.detect_odd_loops();
        let mut state = self.init_state();
        for n in &marked {
            state.labels[n.0] = Label::Undetermined;
        }
        self.initial_propagation(&mut state);
        let mut labels = state.labels;
        for l in labels.iter_mut() {
            if *l == Label::Unlabeled {
                *l = Label::Undetermined;
            }
        }
        self.override_undetermined(&mut labels);
        Labeling { labels }
    }

    /// GraphViz rendering of the dependency graph; odd-loop nodes are
    /// highlighted.
    pub fn to_dot(&self) -> String {
        let odd = self.detect_odd_loops();
        let mut s = String::from("digraph jtms {\n");
        for v in 0..self.node_count() {
            let extra = if odd.contains(&NodeId(v)) {
                ", color=red, style=bold"
            } else {
                ""
            };
            let _ = writeln!(s, "  n{v} [label=\"not({})\"{extra}];", self.names[v]);
        }
        for j in &self.justifications {
            for o in &j.out {
                let _ = writeln!(s, "  n{} -> n{};", j.consequent.0, o.0);
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Mutable labeling state: labels plus the two counter families.
#[derive(Debug, Clone)]
pub struct LabelState {
    pub labels: Vec<Label>,
    node_counter: Vec<usize>,
    just_counter: Vec<usize>,
    just_dead: Vec<bool>,
}

/// Map a labeling back to a status assignment: IN means defeated, OUT or
/// no node means undefeated, UNDETERMINED stays undetermined.
pub fn labeling_to_assignment(
    net: &JtmsNetwork,
    labeling: &Labeling,
    theory: &DefeasibleTheory,
) -> StatusAssignment {
    let mut statuses = BTreeMap::new();
    for rule in theory.rules() {
        let status = match net.node_of(&rule.name) {
            None => RuleStatus::Undefeated,
            Some(n) => match labeling.label(n) {
                Label::In => RuleStatus::Defeated,
                Label::Out => RuleStatus::Undefeated,
                Label::Undetermined | Label::Unlabeled => RuleStatus::Undetermined,
            },
        };
        statuses.insert(rule.name.clone(), status);
    }
    StatusAssignment::new(statuses)
}
