use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::hypotheses::evaluate;
use super::scenario::PreparedScenario;
use super::theorem::{evaluate_sides, ratio_of};
use crate::error::{Error, Result};
use crate::flags::{Flag, Flags};
use crate::math;

/// One-parameter family of perturbations of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanFamily {
    /// `f_i(x) -> f_i(s x)` for every input
    Dilation,
    /// `f_i -> c f_i` for every input
    Amplitude,
    /// `b_i -> c b_i` for every symbol
    SymbolScale,
}

impl ScanFamily {
    pub const ALL: [ScanFamily; 3] = [ScanFamily::Dilation, ScanFamily::Amplitude, ScanFamily::SymbolScale];

    pub fn as_str(self) -> &'static str {
        match self {
            ScanFamily::Dilation => "dilation",
            ScanFamily::Amplitude => "amplitude",
            ScanFamily::SymbolScale => "symbol_scale",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.as_str() == s)
    }

    /// Default parameters: `2^j`, `j in [-6, 6]` for dilations, a mixed set
    /// of signs and magnitudes for the scalings.
    pub fn default_parameters(self) -> Vec<f64> {
        match self {
            ScanFamily::Dilation => (-6..=6).map(math::exp2i).collect(),
            ScanFamily::Amplitude | ScanFamily::SymbolScale => {
                alloc::vec![-4.0, 1.0 / 3.0, 2.5, 1e3, 1e-3]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMember {
    pub parameter: f64,
    pub lhs: Option<f64>,
    pub rhs_core: Option<f64>,
    pub ratio: Option<f64>,
    pub flags: Flags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub family: ScanFamily,
    pub base_ratio: f64,
    pub members: Vec<ScanMember>,
    pub sup_ratio: f64,
    /// `max |ln ratio - median ln ratio|` over the members with a positive finite ratio.
    pub drift: f64,
    /// Parameters whose member diverged or failed.
    pub excluded: Vec<f64>,
    pub flags: Flags,
}

/// The base scenario with its constant, ready for member evaluations.
#[derive(Debug, Clone)]
pub struct ScanBase {
    pub prepared: PreparedScenario,
    pub constant: f64,
    pub base_ratio: f64,
}

impl ScanBase {
    /// Verifies the base scenario; it must pass its hypotheses and reach a
    /// finite ratio.
    pub fn new(prepared: PreparedScenario) -> Result<Self> {
        let outcome = evaluate(&prepared);
        if !outcome.all_pass() {
            let failed: Vec<&str> = outcome.items.iter().filter(|h| !h.passed).map(|h| h.name.as_str()).collect();
            return Err(Error::Scenario(format!("base scenario fails hypotheses {failed:?}")));
        }
        let constant = outcome.constant.map(|c| c.value).unwrap_or(f64::NAN);
        let sides = evaluate_sides(&prepared)?;
        let (_, base_ratio, _) = ratio_of(constant, &sides);
        if !base_ratio.is_finite() {
            return Err(Error::Scenario(format!("base ratio is {base_ratio}")));
        }
        Ok(Self { prepared, constant, base_ratio })
    }

    /// Evaluates one member of `family`. Errors are kept in the member.
    pub fn member(&self, family: ScanFamily, parameter: f64) -> ScanMember {
        match self.member_inner(family, parameter) {
            Ok(m) => m,
            Err(e) => {
                let mut flags = Flags::new();
                if matches!(e, Error::NormInfinite { .. }) {
                    flags.insert(Flag::NormInfinite);
                }
                ScanMember { parameter, lhs: None, rhs_core: None, ratio: None, flags, error: Some(e.to_string()) }
            }
        }
    }

    fn member_inner(&self, family: ScanFamily, c: f64) -> Result<ScanMember> {
        let p = &self.prepared;
        let moved = match family {
            ScanFamily::Dilation => {
                if !(c > 0.0 && c.is_finite()) {
                    return Err(Error::invalid("s", "dilation must be positive"));
                }
                p.with_input_functions(p.inputs.iter().map(|f| f.dilated(c)).collect())?
            }
            ScanFamily::Amplitude => p.with_input_functions(p.inputs.iter().map(|f| f.scaled(c)).collect())?,
            ScanFamily::SymbolScale => p.with_symbol_functions(p.symbols.iter().map(|b| b.scaled(c)).collect())?,
        };
        let sides = evaluate_sides(&moved)?;
        let (rhs, ratio, f) = ratio_of(self.constant, &sides);
        let mut flags = sides.flags;
        flags.extend(&f);
        Ok(ScanMember { parameter: c, lhs: Some(sides.lhs), rhs_core: Some(rhs), ratio: Some(ratio), flags, error: None })
    }

    /// Reduces members (in the given order) to the scan report.
    pub fn summarize(&self, family: ScanFamily, members: Vec<ScanMember>) -> ScanReport {
        let mut flags = Flags::new();
        let mut excluded = Vec::new();
        let mut logs = Vec::new();
        let mut sup: f64 = 0.0;
        for m in &members {
            flags.extend(&m.flags);
            match m.ratio {
                Some(r) if r.is_finite() => {
                    sup = sup.max(r);
                    if r > 0.0 {
                        logs.push(math::ln(r));
                    }
                }
                _ => excluded.push(m.parameter),
            }
        }
        let drift = if logs.is_empty() {
            0.0
        } else {
            let mut sorted = logs.clone();
            sorted.sort_by(f64::total_cmp);
            let k = sorted.len();
            let median = if k % 2 == 1 { sorted[k / 2] } else { 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]) };
            logs.iter().fold(0.0f64, |d, l| d.max(math::abs(l - median)))
        };
        ScanReport { family, base_ratio: self.base_ratio, members, sup_ratio: sup, drift, excluded, flags }
    }
}

/// Ratios over a family of perturbations, evaluated in order.
pub fn ratio_scan(p: &PreparedScenario, family: ScanFamily, parameters: &[f64]) -> Result<ScanReport> {
    let base = ScanBase::new(p.clone())?;
    let members = parameters.iter().map(|&c| base.member(family, c)).collect();
    Ok(base.summarize(family, members))
}

#[cfg(test)]
mod tests {
    use super::super::scenario::fixtures::desk;
    use super::super::scenario::TheoremId;
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        math::abs(a - b) / math::abs(b)
    }

    #[test]
    fn amplitude_and_symbol_scaling_are_exact() {
        for th in [TheoremId::T31, TheoremId::T33, TheoremId::T35, TheoremId::T37] {
            let p = PreparedScenario::new(desk(th)).unwrap();
            for fam in [ScanFamily::Amplitude, ScanFamily::SymbolScale] {
                let r = ratio_scan(&p, fam, &fam.default_parameters()).unwrap();
                assert!(r.excluded.is_empty(), "{th} {fam:?}: {r:?}");
                for m in &r.members {
                    assert!(rel(m.ratio.unwrap(), r.base_ratio) < 1e-12, "{th} {fam:?} {}: {:?}", m.parameter, m.ratio);
                }
            }
        }
    }

    #[test]
    fn dilation_scan_reports_drift() {
        let p = PreparedScenario::new(desk(TheoremId::T32)).unwrap();
        let r = ratio_scan(&p, ScanFamily::Dilation, &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(r.members.len(), 3);
        assert!(r.sup_ratio.is_finite() && r.drift >= 0.0);
        let mid = r.members[1].ratio.unwrap();
        assert!(rel(mid, r.base_ratio) < 1e-12);
    }

    #[test]
    fn median_of_even_count() {
        let p = PreparedScenario::new(desk(TheoremId::T33)).unwrap();
        let base = ScanBase { prepared: p, constant: 1.0, base_ratio: 1.0 };
        let mk = |r: f64| ScanMember { parameter: r, lhs: None, rhs_core: None, ratio: Some(r), flags: Flags::new(), error: None };
        let e = core::f64::consts::E;
        let s = base.summarize(ScanFamily::Amplitude, alloc::vec![mk(1.0), mk(e), mk(e * e), mk(e * e * e)]);
        // median log = 1.5
        assert!((s.drift - 1.5).abs() < 1e-12);
        assert_eq!(s.sup_ratio, e * e * e);
    }

    #[test]
    fn failed_members_are_excluded() {
        let p = PreparedScenario::new(desk(TheoremId::T33)).unwrap();
        let base = ScanBase::new(p).unwrap();
        let m = base.member(ScanFamily::Dilation, -1.0);
        assert!(m.error.is_some());
        let s = base.summarize(ScanFamily::Dilation, alloc::vec![m]);
        assert_eq!(s.excluded, alloc::vec![-1.0]);
    }
}
