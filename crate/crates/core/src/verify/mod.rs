//! Theorem-level checks: scenarios, hypotheses, both sides of each
//! conclusion, ratio scans and proof-level inequality witnesses.
//!
//! The theorems bound the commutator up to an implicit constant, so a single
//! scenario never passes or fails on `lhs <= C rhs`. Reports expose the ratio
//! `lhs / rhs_core`; acceptance looks at its behaviour over families.

mod hypotheses;
mod proof;
mod scan;
mod scenario;
mod theorem;

pub use hypotheses::{check_hypotheses, scenario_constant, HypothesisItem};
pub use proof::{proof_inequality_check, ProofCheckId, ProofCheckReport};
pub use scan::{ratio_scan, ScanBase, ScanFamily, ScanMember, ScanReport};
pub use scenario::{
    ExponentSection, GridSection, PreparedScenario, Scenario, Space, SweepSpec, SymbolSpace, SymbolSpec, TargetParameters,
    TheoremId, Tolerances, WeightSection,
};
pub use theorem::{
    evaluate_sides, ratio_of, space_norm, symbol_norm, verify_theorem, ConstantSummary, Sides, VerificationReport,
};
