//! Validation report for a set of generators.

use super::json::{qvec_json, weight_json, JsonQ};
use crate::fan::coherence::Coherence;
use crate::fan::verdict::{check_complete_with, check_separated_with, SeparatedReason};
use crate::fan::{check_coherence, close_unchecked, generate_fan, is_face, CompleteVerdict, SeparatedVerdict};
use crate::error::{FanError, DocumentError};
use crate::par;
use crate::ppdiv::PPDivisor;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Whether the meet of a pair is a face of each member; `None` when the
/// test is undecidable on the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceEntry {
    pub pair: [usize; 2],
    pub meet: usize,
    pub face_of: [Option<bool>; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherenceEntry {
    pub pair: [usize; 2],
    /// `certified`, `refuted` or `unknown`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<JsonQ>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<BTreeMap<String, JsonQ>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictEntry {
    /// `SEPARATED`, `NOT_SEPARATED`, `COMPLETE`, `NOT_COMPLETE` or `PASSED_SAMPLED`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, JsonQ>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tested: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Pair of members blamed by a validation failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_pair: Option<[usize; 2]>,
    pub members: usize,
    pub faces: Vec<FaceEntry>,
    pub coherence: Vec<CoherenceEntry>,
    /// Present only for valid fans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separated: Option<VerdictEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<VerdictEntry>,
}

fn blamed_pair(e: &FanError) -> Option<[usize; 2]> {
    match e {
        FanError::NotAFace { i, j, .. } | FanError::IntersectionNotPp { i, j } => Some([*i, *j]),
        _ => None,
    }
}

fn separated_entry(base: &crate::base::BaseVariety, v: &SeparatedVerdict) -> VerdictEntry {
    let mut e = VerdictEntry { verdict: String::new(), reason: None, witness: None, pair: None, tested: None };
    match v {
        SeparatedVerdict::Separated(r) => {
            e.verdict = "SEPARATED".into();
            e.reason = Some(match r {
                SeparatedReason::CurveBase => "curve base".into(),
                SeparatedReason::Coherent => "coherent".into(),
            });
        }
        SeparatedVerdict::NotSeparated { witness, pair } => {
            e.verdict = "NOT_SEPARATED".into();
            e.witness = Some(weight_json(base, witness));
            e.pair = Some([pair.0, pair.1]);
        }
        SeparatedVerdict::PassedSampled { tested } => {
            e.verdict = "PASSED_SAMPLED".into();
            e.tested = Some(*tested);
        }
    }
    e
}

fn complete_entry(base: &crate::base::BaseVariety, v: &CompleteVerdict) -> VerdictEntry {
    let mut e = VerdictEntry { verdict: String::new(), reason: None, witness: None, pair: None, tested: None };
    match v {
        CompleteVerdict::Complete => e.verdict = "COMPLETE".into(),
        CompleteVerdict::NotComplete { witness } => {
            e.verdict = "NOT_COMPLETE".into();
            match witness {
                Some(w) => e.witness = Some(weight_json(base, w)),
                None => e.reason = Some("base is not complete".into()),
            }
        }
        CompleteVerdict::PassedSampled { tested } => {
            e.verdict = "PASSED_SAMPLED".into();
            e.tested = Some(*tested);
        }
    }
    e
}

impl CheckReport {
    /// Closes the generators, records face and coherence data for every pair
    /// of members, and runs the verdicts on valid fans. Output order does not
    /// depend on scheduling.
    pub fn run(gens: &[PPDivisor], weight_bound: u32) -> Result<CheckReport, DocumentError> {
        let closure = close_unchecked(gens).map_err(|e| DocumentError::Invalid(e.to_string()))?;
        let members = closure.divisors();
        let pairs = par::pairs(members.len());
        let faces = par::map(&pairs, |&(i, j)| {
            let m = closure.meet(i, j);
            let test = |k: usize| if m == k { Some(true) } else { is_face(&members[m], &members[k]).ok() };
            FaceEntry { pair: [i, j], meet: m, face_of: [test(i), test(j)] }
        });
        let base = closure.base().clone();
        let coherence = match check_coherence(members) {
            Ok(map) => map
                .into_iter()
                .map(|((i, j), c)| match c {
                    Coherence::Certified(cert) => CoherenceEntry {
                        pair: [i, j],
                        status: "certified".into(),
                        u: Some(qvec_json(&cert.u)),
                        c: Some(cert.c.iter().map(|(p, x)| (base.name(*p).to_string(), JsonQ(x.clone()))).collect()),
                    },
                    Coherence::Refuted => CoherenceEntry { pair: [i, j], status: "refuted".into(), u: None, c: None },
                    Coherence::Unknown => CoherenceEntry { pair: [i, j], status: "unknown".into(), u: None, c: None },
                })
                .collect(),
            Err(_) => Vec::new(),
        };
        let mut report = CheckReport {
            valid: false,
            error: None,
            witness_pair: None,
            members: members.len(),
            faces,
            coherence,
            separated: None,
            complete: None,
        };
        match generate_fan(gens) {
            Err(e) => {
                report.witness_pair = blamed_pair(&e);
                report.error = Some(e.to_string());
            }
            Ok(fan) => {
                report.valid = true;
                let sep = check_separated_with(&fan, &[], weight_bound).map_err(|e| DocumentError::Invalid(e.to_string()))?;
                let comp = check_complete_with(&fan, &[], weight_bound).map_err(|e| DocumentError::Invalid(e.to_string()))?;
                report.separated = Some(separated_entry(&base, &sep));
                report.complete = Some(complete_entry(&base, &comp));
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{danilov_gizatullin_generators, noncoherent_pair, DGParams};
    use crate::fan::verdict::DEFAULT_WEIGHT_BOUND;

    #[test]
    fn danilov_gizatullin_report() {
        let gens = danilov_gizatullin_generators(&DGParams::new(2, 3)).unwrap();
        let r = CheckReport::run(&gens, DEFAULT_WEIGHT_BOUND).unwrap();
        assert!(r.valid);
        assert_eq!(r.members, 7);
        assert_eq!(r.faces.len(), 21);
        assert!(r.faces.iter().all(|f| f.face_of == [Some(true), Some(true)]));
        assert_eq!(r.complete.unwrap().verdict, "COMPLETE");
    }

    #[test]
    fn incident_pair_is_blamed() {
        let r = CheckReport::run(&noncoherent_pair(true).unwrap(), DEFAULT_WEIGHT_BOUND).unwrap();
        assert!(!r.valid);
        assert_eq!(r.witness_pair, Some([0, 1]));
        assert_eq!(r.coherence.iter().find(|c| c.pair == [0, 1]).unwrap().status, "refuted");
    }
}
