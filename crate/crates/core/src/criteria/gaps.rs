//! Gap criteria on Hochschild tables.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::hochschild::{Direction, HochschildTable};

use super::invariants::ModuleInvariants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    SmoothCertified,
    CiCertified,
    CriterionNotMet,
    InconclusiveCutoff,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::SmoothCertified => "smooth-certified",
            Outcome::CiCertified => "ci-certified",
            Outcome::CriterionNotMet => "criterion-not-met",
            Outcome::InconclusiveCutoff => "inconclusive-cutoff",
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::SmoothCertified | Outcome::CiCertified)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Homological,
    Cohomological,
    Corollary,
    Consecutive,
}

impl Rule {
    pub fn label(&self) -> &'static str {
        match self {
            Rule::Homological => "homological",
            Rule::Cohomological => "cohomological",
            Rule::Corollary => "corollary",
            Rule::Consecutive => "consecutive",
        }
    }
}

/// Vanishing pattern of a table together with the invariants of `M`.
#[derive(Clone, Debug)]
pub struct GapQuery {
    pub direction: Direction,
    /// Per degree `0..=N`: certified zero, nonzero, or zero on a window only.
    pub vanishing: Vec<Option<bool>>,
    pub invariants: ModuleInvariants,
    /// Whether the table belongs to the diagonal of `S`, so that a c.i.
    /// conclusion reads as smoothness.
    pub diagonal: bool,
}

impl GapQuery {
    pub fn from_table(table: &HochschildTable, invariants: ModuleInvariants) -> Self {
        GapQuery {
            direction: table.direction,
            vanishing: (0..=table.max_degree).map(|n| table.vanishes(n)).collect(),
            invariants,
            diagonal: true,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.vanishing.len().saturating_sub(1)
    }

    /// Negative degrees vanish.
    fn zero(&self, n: i64) -> Option<bool> {
        if n < 0 {
            Some(true)
        } else {
            self.vanishing.get(n as usize).copied().unwrap_or(Some(false))
        }
    }

    fn certified(&self) -> Outcome {
        if self.diagonal {
            Outcome::SmoothCertified
        } else {
            Outcome::CiCertified
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapVerdict {
    pub outcome: Outcome,
    pub rule: Rule,
    /// Starting degrees `(t, u)` of different parity.
    pub witnesses: Option<(i64, i64)>,
    pub interval: usize,
    /// Smallest admissible starting degree.
    pub threshold: i64,
    pub checked_through: usize,
    pub notes: Vec<String>,
}

impl GapVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "outcome": self.outcome.label(),
            "rule": self.rule.label(),
            "witnesses": self.witnesses.map(|(t, u)| vec![t, u]),
            "interval": self.interval,
            "threshold": self.threshold,
            "checked_through": self.checked_through,
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} ({} criterion", self.outcome, self.rule.label());
        if let Some((t, u)) = self.witnesses {
            s.push_str(&format!(", t = {t}, u = {u}, interval length {}", self.interval));
        }
        s.push_str(&format!(", degrees 0..={})", self.checked_through));
        for n in &self.notes {
            s.push_str(&format!("\n  note: {n}"));
        }
        s
    }
}

/// Vanishing state of `[t, t + len)`: certified, failed, or uncertain.
fn interval(q: &GapQuery, t: i64, len: usize) -> Option<bool> {
    let mut state = Some(true);
    for n in t..t + len as i64 {
        match q.zero(n) {
            Some(true) => {}
            Some(false) => return Some(false),
            None => state = None,
        }
    }
    state
}

struct Search {
    witnesses: Option<(i64, i64)>,
    uncertain: bool,
}

/// Smallest admissible starts of each parity whose intervals vanish.
fn search(q: &GapQuery, threshold: i64, len: usize) -> Search {
    let last = q.max_degree() as i64 + 1 - len as i64;
    let mut first: [Option<i64>; 2] = [None, None];
    let mut uncertain = false;
    for t in threshold..=last {
        let parity = t.rem_euclid(2) as usize;
        if first[parity].is_some() {
            continue;
        }
        match interval(q, t, len) {
            Some(true) => first[parity] = Some(t),
            None => uncertain = true,
            Some(false) => {}
        }
    }
    let witnesses = match (first[0], first[1]) {
        (Some(a), Some(b)) => Some((a.min(b), a.max(b))),
        _ => None,
    };
    Search { witnesses, uncertain }
}

fn verdict(q: &GapQuery, rule: Rule, threshold: i64, len: usize, notes: Vec<String>) -> GapVerdict {
    let s = search(q, threshold, len);
    // two starts of different parity need `len + 1` degrees
    let short = (q.max_degree() as i64) < threshold.max(0) + len as i64;
    let outcome = match s.witnesses {
        Some(_) => q.certified(),
        None if s.uncertain || short => Outcome::InconclusiveCutoff,
        None => Outcome::CriterionNotMet,
    };
    let mut notes = notes;
    if s.witnesses.is_none() && s.uncertain {
        notes.push("some zeros were only seen on a window of graded pieces".into());
    }
    if s.witnesses.is_none() && short {
        notes.push("the table is too short to contain two starting degrees".into());
    }
    GapVerdict {
        outcome,
        rule,
        witnesses: s.witnesses,
        interval: len,
        threshold,
        checked_through: q.max_degree(),
        notes,
    }
}

/// Zeros `HH_t = 0 = HH_u` with `t, u >= 0` of different parity.
pub fn check_homological_gaps(q: &GapQuery) -> GapVerdict {
    verdict(q, Rule::Homological, 0, 1, Vec::new())
}

/// Vanishing intervals of length `dim M + 1` starting at degrees of
/// different parity, at least `depth M - dim S`.
pub fn check_cohomological_gaps(q: &GapQuery) -> GapVerdict {
    let inv = q.invariants;
    let threshold = inv.depth_m as i64 - inv.dim_s as i64;
    let mut v = verdict(q, Rule::Cohomological, threshold, inv.dim_m + 1, Vec::new());
    if let Some((t, _)) = v.witnesses {
        if t < 0 {
            v.notes.push(format!("witness t = {t} lies below zero, where cohomology vanishes"));
        }
    }
    v
}

/// A run of `dim S + 2` zeros at degrees `n >= 0`.
pub fn check_consecutive(q: &GapQuery) -> GapVerdict {
    let len = q.invariants.dim_s + 2;
    let last = q.max_degree() as i64 + 1 - len as i64;
    let mut uncertain = false;
    let mut found = None;
    for t in 0..=last {
        match interval(q, t, len) {
            Some(true) => {
                found = Some(t);
                break;
            }
            None => uncertain = true,
            Some(false) => {}
        }
    }
    let outcome = match found {
        Some(_) => q.certified(),
        None if uncertain || last < 0 => Outcome::InconclusiveCutoff,
        None => Outcome::CriterionNotMet,
    };
    GapVerdict {
        outcome,
        rule: Rule::Consecutive,
        witnesses: found.map(|t| (t, t + 1)),
        interval: len,
        threshold: 0,
        checked_through: q.max_degree(),
        notes: Vec::new(),
    }
}

/// The interval rule with a chosen length. The theorem does not cover
/// shortened intervals, so the outcome is never a certificate.
pub fn check_with_interval(q: &GapQuery, len: usize) -> GapVerdict {
    let inv = q.invariants;
    let threshold = inv.depth_m as i64 - inv.dim_s as i64;
    let mut v = verdict(q, Rule::Cohomological, threshold, len, Vec::new());
    if let Some((t, u)) = v.witnesses {
        v.outcome = Outcome::InconclusiveCutoff;
        v.notes.push(format!(
            "experimental interval length {len}: vanishing intervals at {t} and {u}, not a certificate"
        ));
    } else {
        v.notes.push(format!("experimental interval length {len}"));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn query(dir: Direction, zeros: &[Option<bool>], dim_s: usize, dim_m: usize, depth_m: usize) -> GapQuery {
        GapQuery {
            direction: dir,
            vanishing: zeros.to_vec(),
            invariants: ModuleInvariants { dim_s, dim_m, depth_m },
            diagonal: true,
        }
    }

    const Z: Option<bool> = Some(true);
    const NZ: Option<bool> = Some(false);

    #[test]
    fn homological_examples() {
        let qx = query(Direction::Homology, &[NZ, NZ, Z, Z], 1, 1, 1);
        let v = check_homological_gaps(&qx);
        assert_eq!(v.outcome, Outcome::SmoothCertified);
        assert_eq!(v.witnesses, Some((2, 3)));

        let zs = query(Direction::Homology, &[NZ, NZ, Z, NZ, Z, NZ, Z, NZ, Z], 1, 1, 1);
        assert_eq!(check_homological_gaps(&zs).outcome, Outcome::CriterionNotMet);

        let dual = query(Direction::Homology, &[NZ; 5], 0, 0, 0);
        assert_eq!(check_homological_gaps(&dual).outcome, Outcome::CriterionNotMet);
    }

    #[test]
    fn cohomological_examples() {
        let etale = query(Direction::Cohomology, &[NZ, Z, Z, Z], 0, 0, 0);
        let v = check_cohomological_gaps(&etale);
        assert_eq!((v.outcome, v.witnesses, v.interval), (Outcome::SmoothCertified, Some((1, 2)), 1));

        let zs = query(Direction::Cohomology, &[NZ, Z, NZ, Z, NZ, Z, NZ, Z, NZ], 1, 1, 1);
        assert_eq!(check_cohomological_gaps(&zs).outcome, Outcome::CriterionNotMet);

        let qx = query(Direction::Cohomology, &[NZ, NZ, Z, Z, Z], 1, 1, 1);
        let v = check_cohomological_gaps(&qx);
        assert_eq!((v.outcome, v.witnesses, v.interval), (Outcome::SmoothCertified, Some((2, 3)), 2));
    }

    #[test]
    fn windowed_zeros_are_not_certificates() {
        let q = query(Direction::Homology, &[NZ, NZ, None, None], 1, 1, 1);
        assert_eq!(check_homological_gaps(&q).outcome, Outcome::InconclusiveCutoff);
        let short = query(Direction::Cohomology, &[NZ, Z], 1, 1, 1);
        assert_eq!(check_cohomological_gaps(&short).outcome, Outcome::InconclusiveCutoff);
    }

    #[test]
    fn override_never_certifies() {
        let zs = query(Direction::Cohomology, &[NZ, Z, NZ, Z, NZ, Z], 1, 1, 1);
        let v = check_with_interval(&zs, 1);
        assert_eq!(v.outcome, Outcome::CriterionNotMet);
        assert_eq!(v.witnesses, None);
        let v = check_with_interval(&query(Direction::Cohomology, &[NZ, Z, Z, NZ], 1, 1, 1), 1);
        assert_eq!(v.witnesses, Some((1, 2)));
        assert_eq!(v.outcome, Outcome::InconclusiveCutoff);
    }

    fn pattern() -> impl Strategy<Value = (Vec<bool>, usize, usize, usize)> {
        (0usize..4).prop_flat_map(|dim_s| {
            (
                prop::collection::vec(any::<bool>(), 1..12),
                Just(dim_s),
                0..=dim_s,
                0..=dim_s,
            )
        })
        .prop_map(|(z, s, m, d)| (z, s, m, d.min(m)))
    }

    proptest! {
        #[test]
        fn consecutive_run_implies_intervals((zeros, dim_s, dim_m, depth_m) in pattern()) {
            let v: Vec<Option<bool>> = zeros.iter().map(|&z| Some(z)).collect();
            let q = query(Direction::Cohomology, &v, dim_s, dim_m, depth_m);
            if check_consecutive(&q).outcome.is_certified() {
                prop_assert!(check_cohomological_gaps(&q).outcome.is_certified());
            }
        }

        #[test]
        fn certificates_carry_witnesses((zeros, dim_s, dim_m, depth_m) in pattern()) {
            let v: Vec<Option<bool>> = zeros.iter().map(|&z| Some(z)).collect();
            let q = query(Direction::Homology, &v, dim_s, dim_m, depth_m);
            for verdict in [check_homological_gaps(&q), check_cohomological_gaps(&q), check_consecutive(&q)] {
                if verdict.outcome.is_certified() {
                    let (t, u) = verdict.witnesses.unwrap();
                    prop_assert!((t - u).rem_euclid(2) == 1);
                }
            }
        }
    }
}
