//! Propositional formulas over a finite atom alphabet, with entailment,
//! consistency and minimal-inconsistent-subset enumeration by exhaustive
//! valuation sweep.
//!
//! This module is deliberately brute force: at desk scale the formula
//! engine must be an unimpeachable oracle, not fast. Two independent
//! evaluation routes are provided (per-valuation recursive evaluation and
//! bottom-up truth-mask composition) so they can be cross-checked.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Default bound on the number of distinct atoms in a single query.
pub const DEFAULT_MAX_ATOMS: usize = 24;

/// Default bound on the pool size for [`minimal_inconsistent_subsets`].
pub const DEFAULT_SUBSET_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("query uses {atoms} atoms, exceeding the limit of {limit}")]
    AtomLimitExceeded { atoms: usize, limit: usize },
    #[error("input of size {size} exceeds the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
}

/// A propositional sentence built from atoms with `!`, `&` and `|`.
///
/// `And`/`Or` nodes keep their children in canonical (sorted) order so that
/// structural equality is stable under commutativity of the constructors.
/// There is no implication connective; `->` is desugared by the parser.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction with canonical child ordering. Panics on fewer than two
    /// children; `And` nodes are only ever n-ary.
    pub fn and(mut children: Vec<Formula>) -> Self {
        assert!(children.len() >= 2, "And requires at least two children");
        children.sort();
        Formula::And(children)
    }

    /// Disjunction with canonical child ordering.
    pub fn or(mut children: Vec<Formula>) -> Self {
        assert!(children.len() >= 2, "Or requires at least two children");
        children.sort();
        Formula::Or(children)
    }

    /// `a -> b` desugared to `!a | b`.
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(vec![Formula::not(a), b])
    }

    /// The atom names occurring in this formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_atoms(out);
                }
            }
        }
    }

    /// Recursive evaluation under one valuation (route one).
    pub fn eval(&self, index: &BTreeMap<&str, usize>, bits: u64) -> bool {
        match self {
            Formula::Atom(a) => {
                let i = index[a.as_str()];
                (bits >> i) & 1 == 1
            }
            Formula::Not(f) => !f.eval(index, bits),
            Formula::And(fs) => fs.iter().all(|f| f.eval(index, bits)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(index, bits)),
        }
    }

    /// Truth mask over all `2^n` valuations of `atoms`, composed bottom-up
    /// with bitwise operations (route two). Bit `v` is set iff valuation `v`
    /// satisfies the formula.
    pub fn truth_mask(&self, atoms: &[String]) -> Mask {
        let n = atoms.len();
        match self {
            Formula::Atom(a) => {
                let i = atoms
                    .iter()
                    .position(|x| x == a)
                    .expect("atom missing from alphabet");
                Mask::atom(n, i)
            }
            Formula::Not(f) => f.truth_mask(atoms).complement(),
            Formula::And(fs) => {
                let mut m = Mask::full(1 << n);
                for f in fs {
                    m = m.intersect(&f.truth_mask(atoms));
                }
                m
            }
            Formula::Or(fs) => {
                let mut m = Mask::empty(1 << n);
                for f in fs {
                    m = m.union(&f.truth_mask(atoms));
                }
                m
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Precedence: ! > & > |. Parenthesize a child only when it binds
        // looser than (or the same as, for nesting) its parent.
        fn rec(fm: &Formula, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
            let prec = match fm {
                Formula::Atom(_) | Formula::Not(_) => 3,
                Formula::And(_) => 2,
                Formula::Or(_) => 1,
            };
            let needs_parens = prec <= parent && !matches!(fm, Formula::Atom(_) | Formula::Not(_));
            if needs_parens {
                write!(f, "(")?;
            }
            match fm {
                Formula::Atom(a) => write!(f, "{a}")?,
                Formula::Not(inner) => {
                    write!(f, "!")?;
                    match **inner {
                        Formula::Atom(_) | Formula::Not(_) => rec(inner, f, 3)?,
                        _ => {
                            write!(f, "(")?;
                            rec(inner, f, 0)?;
                            write!(f, ")")?;
                        }
                    }
                }
                Formula::And(fs) => {
                    for (i, c) in fs.iter().enumerate() {
                        if i > 0 {
                            write!(f, " & ")?;
                        }
                        rec(c, f, 2)?;
                    }
                }
                Formula::Or(fs) => {
                    for (i, c) in fs.iter().enumerate() {
                        if i > 0 {
                            write!(f, " | ")?;
                        }
                        rec(c, f, 1)?;
                    }
                }
            }
            if needs_parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        rec(self, f, 0)
    }
}

/// A total assignment of truth values to a fixed atom set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    assignment: BTreeMap<String, bool>,
}

impl Valuation {
    pub fn from_bits(atoms: &[String], bits: u64) -> Self {
        let assignment = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), (bits >> i) & 1 == 1))
            .collect();
        Valuation { assignment }
    }

    pub fn value(&self, atom: &str) -> Option<bool> {
        self.assignment.get(atom).copied()
    }

    pub fn satisfies(&self, formula: &Formula) -> bool {
        match formula {
            Formula::Atom(a) => self.assignment[a],
            Formula::Not(f) => !self.satisfies(f),
            Formula::And(fs) => fs.iter().all(|f| self.satisfies(f)),
            Formula::Or(fs) => fs.iter().any(|f| self.satisfies(f)),
        }
    }
}

/// A plain bitset over a fixed point domain. For truth masks the domain is
/// the `2^n` valuations of an `n`-atom alphabet; the cover enumerator also
/// uses domains extended with virtual points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    bits: usize,
    words: Vec<u64>,
}

impl Mask {
    pub fn empty(bits: usize) -> Self {
        Mask {
            bits,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    pub fn full(bits: usize) -> Self {
        let mut m = Self::empty(bits);
        for (i, w) in m.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(bits);
            if hi > lo {
                *w = if hi - lo == 64 { !0 } else { (1u64 << (hi - lo)) - 1 };
            }
        }
        m
    }

    /// Over a `2^n_atoms`-valuation domain, the valuations where atom `i`
    /// is true.
    fn atom(n_atoms: usize, i: usize) -> Self {
        let mut m = Self::empty(1 << n_atoms);
        for v in 0..(1usize << n_atoms) {
            if (v >> i) & 1 == 1 {
                m.set(v);
            }
        }
        m
    }

    pub fn len(&self) -> usize {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn contains(&self, bit: usize) -> bool {
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn complement(&self) -> Self {
        let mut m = Mask {
            bits: self.bits,
            words: self.words.iter().map(|w| !w).collect(),
        };
        // clear padding past the domain
        let rem = self.bits % 64;
        if rem != 0 {
            *m.words.last_mut().unwrap() &= (1u64 << rem) - 1;
        }
        m
    }

    /// This mask embedded in a larger domain (extra bits unset).
    pub fn extended(&self, bits: usize) -> Self {
        let mut m = Self::empty(bits);
        m.words[..self.words.len()].copy_from_slice(&self.words);
        m
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Mask {
            bits: self.bits,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Mask {
            bits: self.bits,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        Mask {
            bits: self.bits,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.bits).filter(move |&b| self.contains(b))
    }

    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }
}

fn sorted_atoms<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Vec<String> {
    let mut set = BTreeSet::new();
    for f in formulas {
        f.collect_atoms(&mut set);
    }
    set.into_iter().collect()
}

fn check_atom_limit(n: usize, limit: usize) -> Result<(), LogicError> {
    if n > limit {
        Err(LogicError::AtomLimitExceeded { atoms: n, limit })
    } else {
        Ok(())
    }
}

/// The atom names occurring in a set of formulas.
pub fn atoms<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for f in formulas {
        f.collect_atoms(&mut out);
    }
    out
}

/// Classical entailment by exhaustive valuation: every valuation satisfying
/// all of `premises` satisfies `goal`.
pub fn entails(premises: &[Formula], goal: &Formula, max_atoms: usize) -> Result<bool, LogicError> {
    let atom_list = sorted_atoms(premises.iter().chain(std::iter::once(goal)));
    check_atom_limit(atom_list.len(), max_atoms)?;
    let index: BTreeMap<&str, usize> = atom_list
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    for bits in 0..(1u64 << atom_list.len()) {
        if premises.iter().all(|p| p.eval(&index, bits)) && !goal.eval(&index, bits) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Entailment via composed truth masks; the independent second route used
/// to cross-check [`entails`].
pub fn entails_via_masks(
    premises: &[Formula],
    goal: &Formula,
    max_atoms: usize,
) -> Result<bool, LogicError> {
    let atom_list = sorted_atoms(premises.iter().chain(std::iter::once(goal)));
    check_atom_limit(atom_list.len(), max_atoms)?;
    let mut sat = Mask::full(1 << atom_list.len());
    for p in premises {
        sat = sat.intersect(&p.truth_mask(&atom_list));
    }
    Ok(sat.minus(&goal.truth_mask(&atom_list)).is_empty())
}

/// True iff some valuation satisfies all of `formulas`.
pub fn is_consistent(formulas: &[Formula], max_atoms: usize) -> Result<bool, LogicError> {
    let atom_list = sorted_atoms(formulas);
    check_atom_limit(atom_list.len(), max_atoms)?;
    let index: BTreeMap<&str, usize> = atom_list
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    for bits in 0..(1u64 << atom_list.len()) {
        if formulas.iter().all(|f| f.eval(&index, bits)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All subset-minimal inconsistent subsets of `pool`, by exhaustive subset
/// search ascending by size with superset pruning. The pool is treated as a
/// set; duplicates are removed first.
pub fn minimal_inconsistent_subsets(
    pool: &[Formula],
    max_atoms: usize,
    subset_cap: usize,
) -> Result<Vec<BTreeSet<Formula>>, LogicError> {
    let set: Vec<Formula> = pool
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if set.len() > subset_cap {
        return Err(LogicError::SizeCapExceeded {
            size: set.len(),
            cap: subset_cap,
        });
    }
    let atom_list = sorted_atoms(set.iter());
    check_atom_limit(atom_list.len(), max_atoms)?;
    let masks: Vec<Mask> = set.iter().map(|f| f.truth_mask(&atom_list)).collect();

    let n = set.len();
    let mut found: Vec<u64> = Vec::new(); // subsets as bitmasks over pool indices
    for size in 1..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let bits: u64 = combo.iter().fold(0, |acc, &i| acc | (1 << i));
            if !found.iter().any(|f| f & bits == *f) {
                let mut sat = Mask::full(1 << atom_list.len());
                for &i in &combo {
                    sat = sat.intersect(&masks[i]);
                }
                if sat.is_empty() {
                    found.push(bits);
                }
            }
            // next k-combination of 0..n in lexicographic order
            let mut i = size;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if combo[i] != i + n - size {
                    combo[i] += 1;
                    for j in i + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    combo.clear();
                    break;
                }
            }
            if combo.is_empty() {
                break;
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|bits| {
            (0..n)
                .filter(|i| bits >> i & 1 == 1)
                .map(|i| set[i].clone())
                .collect()
        })
        .collect())
}

/// Enumerate all minimal covers of `universe` by the given kill sets.
///
/// A cover is a set of indices `C` with `universe ⊆ ∪_{i∈C} kills[i]`;
/// minimality is subset-minimality. Branches on the uncovered valuation with
/// the fewest killers; supersets of already-found covers are pruned, and
/// every recorded cover passes a direct irredundancy check.
pub fn minimal_covers(universe: &Mask, kills: &[Mask]) -> Vec<BTreeSet<usize>> {
    let mut found: Vec<BTreeSet<usize>> = Vec::new();
    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    recurse_covers(universe, universe.clone(), kills, &mut chosen, &mut found);
    found.sort();
    found.dedup();
    found
}

fn recurse_covers(
    universe: &Mask,
    uncovered: Mask,
    kills: &[Mask],
    chosen: &mut BTreeSet<usize>,
    found: &mut Vec<BTreeSet<usize>>,
) {
    if uncovered.is_empty() {
        // irredundancy: chosen minus any one element must fail to cover
        for &e in chosen.iter() {
            let mut covered = Mask::empty(universe.len());
            for &i in chosen.iter().filter(|&&i| i != e) {
                covered = covered.union(&kills[i]);
            }
            if universe.minus(&covered).is_empty() {
                return;
            }
        }
        if !found.iter().any(|f| *f == *chosen) {
            found.push(chosen.clone());
        }
        return;
    }
    if found.iter().any(|f| f.is_subset(chosen)) {
        return;
    }
    // pick the uncovered valuation with the fewest killers
    let mut best: Option<(usize, Vec<usize>)> = None;
    for v in uncovered.iter_ones() {
        let killers: Vec<usize> = (0..kills.len())
            .filter(|&i| !chosen.contains(&i) && kills[i].contains(v))
            .collect();
        match &best {
            Some((_, b)) if b.len() <= killers.len() => {}
            _ => {
                let empty = killers.is_empty();
                best = Some((v, killers));
                if empty {
                    break;
                }
            }
        }
    }
    let (_, killers) = best.expect("uncovered mask was non-empty");
    for i in killers {
        chosen.insert(i);
        recurse_covers(universe, uncovered.minus(&kills[i]), kills, chosen, found);
        chosen.remove(&i);
    }
}

/// Minimal inconsistent subsets without the pool-size cap, via minimal-cover
/// enumeration over the valuation space. Equivalent to
/// [`minimal_inconsistent_subsets`] (property-tested) but practical for the
/// larger conclusion pools the argument engine produces.
pub fn minimal_inconsistent_subsets_unbounded(
    pool: &[Formula],
    max_atoms: usize,
) -> Result<Vec<BTreeSet<Formula>>, LogicError> {
    let set: Vec<Formula> = pool
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let atom_list = sorted_atoms(set.iter());
    check_atom_limit(atom_list.len(), max_atoms)?;
    let universe = Mask::full(1 << atom_list.len());
    let kills: Vec<Mask> = set
        .iter()
        .map(|f| f.truth_mask(&atom_list).complement())
        .collect();
    Ok(minimal_covers(&universe, &kills)
        .into_iter()
        .map(|idxs| idxs.into_iter().map(|i| set[i].clone()).collect())
        .collect())
}

/// All subset-minimal `T ⊆ pool` with `T ⊢ goal`, over the given kill masks.
///
/// Returns index sets into `pool`. A tautology has the empty support.
pub fn minimal_entailing_subsets(
    pool: &[Formula],
    goal: &Formula,
    max_atoms: usize,
) -> Result<Vec<BTreeSet<usize>>, LogicError> {
    let atom_list = sorted_atoms(pool.iter().chain(std::iter::once(goal)));
    check_atom_limit(atom_list.len(), max_atoms)?;
    // T ⊢ goal iff the falsifying valuations of goal are all killed by T.
    let universe = goal.truth_mask(&atom_list).complement();
    let kills: Vec<Mask> = pool
        .iter()
        .map(|f| f.truth_mask(&atom_list).complement())
        .collect();
    Ok(minimal_covers(&universe, &kills))
}

/// All subset-minimal `T ⊆ pool` with `T ⊢ goal` and
/// `atoms(goal) ⊆ atoms(T)`. The atom condition is folded into the cover
/// problem as one virtual point per goal atom, killed by the pool formulas
/// mentioning that atom.
pub fn minimal_gated_entailing_subsets(
    pool: &[Formula],
    goal: &Formula,
    max_atoms: usize,
) -> Result<Vec<BTreeSet<usize>>, LogicError> {
    let atom_list = sorted_atoms(pool.iter().chain(std::iter::once(goal)));
    check_atom_limit(atom_list.len(), max_atoms)?;
    let goal_atoms: Vec<String> = goal.atoms().into_iter().collect();
    let valuations = 1usize << atom_list.len();
    let bits = valuations + goal_atoms.len();

    let mut universe = goal
        .truth_mask(&atom_list)
        .complement()
        .extended(bits);
    for i in 0..goal_atoms.len() {
        universe.set(valuations + i);
    }
    let kills: Vec<Mask> = pool
        .iter()
        .map(|f| {
            let mut m = f.truth_mask(&atom_list).complement().extended(bits);
            let f_atoms = f.atoms();
            for (i, a) in goal_atoms.iter().enumerate() {
                if f_atoms.contains(a) {
                    m.set(valuations + i);
                }
            }
            m
        })
        .collect();
    Ok(minimal_covers(&universe, &kills))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn atoms_reads_off_names() {
        let f = Formula::or(vec![a("d"), a("e")]);
        assert_eq!(
            f.atoms(),
            ["d", "e"].iter().map(|s| s.to_string()).collect()
        );
        let set = [a("a"), Formula::and(vec![a("a"), Formula::not(a("b"))])];
        assert_eq!(
            atoms(set.iter()),
            ["a", "b"].iter().map(|s| s.to_string()).collect()
        );
        let f = Formula::not(Formula::and(vec![a("jp"), a("bp")]));
        assert_eq!(
            f.atoms(),
            ["bp", "jp"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn entailment_examples() {
        let d_or_e = Formula::or(vec![a("d"), a("e")]);
        assert!(entails(&[d_or_e.clone(), Formula::not(a("d"))], &a("e"), 24).unwrap());
        assert!(entails(
            &[Formula::not(a("d")), Formula::not(a("e"))],
            &Formula::not(d_or_e.clone()),
            24
        )
        .unwrap());
        assert!(entails(&[], &Formula::or(vec![a("a"), Formula::not(a("a"))]), 24).unwrap());
        assert!(!entails(&[d_or_e], &a("d"), 24).unwrap());
    }

    #[test]
    fn consistency_examples() {
        let d_or_e = Formula::or(vec![a("d"), a("e")]);
        assert!(!is_consistent(
            &[Formula::not(a("d")), Formula::not(a("e")), d_or_e],
            24
        )
        .unwrap());
        assert!(is_consistent(&[], 24).unwrap());
        assert!(!is_consistent(&[a("a"), Formula::not(a("a"))], 24).unwrap());
    }

    #[test]
    fn atom_limit_is_enforced() {
        let fs: Vec<Formula> = (0..5).map(|i| a(&format!("x{i}"))).collect();
        let err = is_consistent(&fs, 4).unwrap_err();
        assert_eq!(err, LogicError::AtomLimitExceeded { atoms: 5, limit: 4 });
    }

    #[test]
    fn mus_examples() {
        let d_or_e = Formula::or(vec![a("d"), a("e")]);
        let pool = [
            Formula::not(a("d")),
            Formula::not(a("e")),
            d_or_e.clone(),
            a("a"),
        ];
        let mus = minimal_inconsistent_subsets(&pool, 24, 16).unwrap();
        assert_eq!(mus.len(), 1);
        assert_eq!(
            mus[0],
            [Formula::not(a("d")), Formula::not(a("e")), d_or_e]
                .into_iter()
                .collect()
        );

        let pool = [a("a"), Formula::not(a("a")), a("b")];
        let mus = minimal_inconsistent_subsets(&pool, 24, 16).unwrap();
        assert_eq!(mus.len(), 1);
        assert_eq!(mus[0], [a("a"), Formula::not(a("a"))].into_iter().collect());
    }

    // Derived example: brute force over all 32 subsets finds exactly the two
    // stated cores.
    #[test]
    fn mus_two_cores() {
        let pool = [
            Formula::or(vec![a("p"), a("q")]),
            Formula::not(a("p")),
            Formula::not(a("q")),
            Formula::or(vec![a("p"), a("r")]),
            Formula::not(a("r")),
        ];
        let mut mus = minimal_inconsistent_subsets(&pool, 24, 16).unwrap();
        mus.sort();
        let mut expected: Vec<BTreeSet<Formula>> = vec![
            [
                Formula::or(vec![a("p"), a("q")]),
                Formula::not(a("p")),
                Formula::not(a("q")),
            ]
            .into_iter()
            .collect(),
            [
                Formula::or(vec![a("p"), a("r")]),
                Formula::not(a("p")),
                Formula::not(a("r")),
            ]
            .into_iter()
            .collect(),
        ];
        expected.sort();
        assert_eq!(mus, expected);
    }

    #[test]
    fn mus_pool_cap() {
        let pool: Vec<Formula> = (0..5).map(|i| a(&format!("x{i}"))).collect();
        let err = minimal_inconsistent_subsets(&pool, 24, 4).unwrap_err();
        assert_eq!(err, LogicError::SizeCapExceeded { size: 5, cap: 4 });
    }

    #[test]
    fn minimal_entailing_subsets_basic() {
        let pool = [a("a"), Formula::implies(a("a"), a("b")), a("b")];
        let supports = minimal_entailing_subsets(&pool, &a("b"), 24).unwrap();
        // {b} and {a, a->b}
        assert!(supports.contains(&[2usize].into_iter().collect()));
        assert!(supports.contains(&[0usize, 1].into_iter().collect()));
        assert_eq!(supports.len(), 2);

        // tautology: empty support
        let taut = Formula::or(vec![a("a"), Formula::not(a("a"))]);
        let supports = minimal_entailing_subsets(&pool, &taut, 24).unwrap();
        assert_eq!(supports, vec![BTreeSet::new()]);
    }

    fn arb_formula(atom_count: usize) -> impl Strategy<Value = Formula> {
        let leaf = (0..atom_count).prop_map(|i| Formula::atom(format!("v{i}")));
        leaf.prop_recursive(3, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::and),
                prop::collection::vec(inner, 2..=3).prop_map(Formula::or),
            ]
        })
    }

    proptest! {
        // entails(S, g) ⇔ not is_consistent(S ∪ {¬g})
        #[test]
        fn entailment_consistency_duality(
            premises in prop::collection::vec(arb_formula(4), 0..4),
            goal in arb_formula(4),
        ) {
            let lhs = entails(&premises, &goal, 24).unwrap();
            let mut with_neg = premises.clone();
            with_neg.push(Formula::not(goal));
            let rhs = !is_consistent(&with_neg, 24).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        // Monotonicity of ⊢.
        #[test]
        fn entailment_is_monotone(
            premises in prop::collection::vec(arb_formula(4), 0..3),
            extra in prop::collection::vec(arb_formula(4), 0..3),
            goal in arb_formula(4),
        ) {
            if entails(&premises, &goal, 24).unwrap() {
                let mut bigger = premises.clone();
                bigger.extend(extra);
                prop_assert!(entails(&bigger, &goal, 24).unwrap());
            }
        }

        // Every reported core is inconsistent and every proper subset of it
        // is consistent.
        #[test]
        fn mus_members_are_minimal(
            pool in prop::collection::vec(arb_formula(3), 0..6),
        ) {
            for core in minimal_inconsistent_subsets(&pool, 24, 16).unwrap() {
                let fs: Vec<Formula> = core.iter().cloned().collect();
                prop_assert!(!is_consistent(&fs, 24).unwrap());
                for leave_out in 0..fs.len() {
                    let sub: Vec<Formula> = fs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != leave_out)
                        .map(|(_, f)| f.clone())
                        .collect();
                    prop_assert!(is_consistent(&sub, 24).unwrap());
                }
            }
        }

        // The unbounded cover-based enumeration agrees with the exhaustive
        // ascending-size search.
        #[test]
        fn cover_based_mus_agrees(
            pool in prop::collection::vec(arb_formula(3), 0..6),
        ) {
            let mut a = minimal_inconsistent_subsets(&pool, 24, 16).unwrap();
            let mut b = minimal_inconsistent_subsets_unbounded(&pool, 24).unwrap();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    // Agreement of the two entailment routes on 1,000 random formula pairs.
    #[test]
    fn entailment_routes_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        fn random_formula(rng: &mut impl rand::Rng, depth: usize) -> Formula {
            let pick = if depth == 0 { 0 } else { rng.gen_range(0..4) };
            match pick {
                0 => Formula::atom(format!("v{}", rng.gen_range(0..6))),
                1 => Formula::not(random_formula(rng, depth - 1)),
                2 => Formula::and(vec![
                    random_formula(rng, depth - 1),
                    random_formula(rng, depth - 1),
                ]),
                _ => Formula::or(vec![
                    random_formula(rng, depth - 1),
                    random_formula(rng, depth - 1),
                ]),
            }
        }
        for _ in 0..1000 {
            let premises: Vec<Formula> = (0..rng.gen_range(0..3))
                .map(|_| random_formula(&mut rng, 3))
                .collect();
            let goal = random_formula(&mut rng, 3);
            assert_eq!(
                entails(&premises, &goal, 24).unwrap(),
                entails_via_masks(&premises, &goal, 24).unwrap()
            );
        }
    }

    #[test]
    fn display_round_trips_structure() {
        let f = Formula::and(vec![
            a("a"),
            Formula::or(vec![a("b"), Formula::not(a("c"))]),
        ]);
        assert_eq!(f.to_string(), "a & (b | !c)");
        let g = Formula::not(Formula::and(vec![a("jp"), a("bp")]));
        assert_eq!(g.to_string(), "!(bp & jp)");
    }
}
