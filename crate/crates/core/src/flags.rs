//! Numeric flags attached to computed quantities.
//!
//! Flags never change a value; they record how far the value can be trusted
//! (truncated supremum, truncated domain, and so on).

use alloc::collections::BTreeSet;
use core::fmt;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Flag {
    /// Innermost or outermost shell carried a non-negligible share of a sum.
    TruncationSuspect,
    /// A supremum over a finite parameter grid was attained at an endpoint.
    SupAtBoundary,
    /// A quantity defined over all of R^n was computed over the grid annulus.
    DomainTruncated,
    /// Lipschitz constant was not declared; the empirical lower bound is used.
    Undeclared,
    /// A norm or integral diverged.
    NormInfinite,
    /// The input was identically zero where a ratio was requested.
    ZeroInput,
    /// At least one theorem hypothesis failed.
    HypothesisFail,
    /// Zero right-hand side with non-zero left-hand side.
    InequalityDegenerate,
    /// The embedding check ran on the support-restricted variant.
    SupportRestricted,
    /// Rotation factor absent because the family is not scalar times rotation.
    NoRotationStructure,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::TruncationSuspect => "TRUNCATION_SUSPECT",
            Flag::SupAtBoundary => "SUP_AT_BOUNDARY",
            Flag::DomainTruncated => "DOMAIN_TRUNCATED",
            Flag::Undeclared => "UNDECLARED",
            Flag::NormInfinite => "NORM_INFINITE",
            Flag::ZeroInput => "ZERO_INPUT",
            Flag::HypothesisFail => "HYPOTHESIS_FAIL",
            Flag::InequalityDegenerate => "INEQUALITY_DEGENERATE",
            Flag::SupportRestricted => "SUPPORT_RESTRICTED",
            Flag::NoRotationStructure => "NO_ROTATION_STRUCTURE",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ordered set of flags; iteration order is stable so reports are reproducible.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Flags(BTreeSet<Flag>);

impl Flags {
    pub fn new() -> Self {
        Self(BTreeSet::new())
    }

    pub fn insert(&mut self, flag: Flag) {
        self.0.insert(flag);
    }

    pub fn extend(&mut self, other: &Flags) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn contains(&self, flag: Flag) -> bool {
        self.0.contains(&flag)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Flag> + '_ {
        self.0.iter().copied()
    }
}

impl From<Flag> for Flags {
    fn from(flag: Flag) -> Self {
        let mut f = Flags::new();
        f.insert(flag);
        f
    }
}

impl FromIterator<Flag> for Flags {
    fn from_iter<I: IntoIterator<Item = Flag>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}
