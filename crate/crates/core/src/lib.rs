//! A defeasible-argumentation engine.
//!
//! Given a defeasible theory — premises, defeasible rules and a strict
//! partial preference on the rules — the engine constructs all canonical
//! arguments, derives undercutting arguments for the least-preferred last
//! rules of every minimal argument for an inconsistency, and solves the
//! resulting defeat fixed-point problem as a JTMS labeling problem. Every
//! result can be cross-validated against a prioritized default logic and a
//! brute-force status-assignment search, and the engine optionally reasons
//! by cases over derivable disjunctions.
//!
//! Modules map onto the pipeline stages:
//!
//! - [`logic`]: propositional formulas, entailment, consistency and minimal
//!   inconsistent subsets by exhaustive valuation;
//! - [`theory`]: the defeasible theory, rule naming and preference order;
//! - [`specificity`]: the specificity preference generator and the Poole
//!   theory-comparison oracle;
//! - [`argument`]: canonical argument construction, minimal inconsistency
//!   arguments and undercut derivation;
//! - [`jtms`]: the justification network, counter propagation, odd-loop
//!   detection and labeling enumeration;
//! - [`defeat`]: the defeat operator, fixed points, status assignments,
//!   extensions and the skeptical belief set;
//! - [`default_logic`]: the prioritized default logic used as an
//!   independent oracle, plus both rule/default translations;
//! - [`cases`]: reasoning by cases via hypothesis rules;
//! - [`generate`]: seeded random theory generation for cross-oracle fuzzing;
//! - [`report`]: serializable result reports.

pub mod argument;
pub mod cases;
pub mod default_logic;
pub mod defeat;
pub mod generate;
pub mod jtms;
pub mod logic;
pub mod report;
pub mod specificity;
pub mod theory;

use thiserror::Error;

pub use logic::{Formula, LogicError};
pub use theory::{DefeasibleTheory, EngineOptions, Rule, RuleConsequent, RuleName, TheoryError};

/// Errors surfaced by the reasoning pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    /// A minimal inconsistency argument whose top-level steps are all
    /// premises; cannot occur when the premises are consistent.
    #[error("inconsistency among premises alone; no rule available to defeat")]
    PremiseLevelConflict,
    /// Translating a non-normal default rule to defeasible rules.
    #[error("default rule {0} is non-normal and has no defeasible translation")]
    NonNormalDefault(String),
    /// No extension and partial assignments are disabled.
    #[error("theory has no extension and partial assignments are disabled")]
    NoExtension,
}
