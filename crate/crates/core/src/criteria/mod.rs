//! Smoothness and complete-intersection criteria.

pub mod bounds;
pub mod gaps;
pub mod invariants;

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::Result;
use crate::hochschild::{
    enveloping, hochschild_cohomology, hochschild_homology, Direction, HochschildTable, TableOptions,
};
use crate::model::Point;
use crate::module::CoefficientModule;
use crate::resolutions::{deviations, Deviations, Surjection};
use crate::ring::{AlgebraPresentation, CoeffRing, Coefficient, Polynomial};

pub use bounds::{binomial, check_binomial_bounds, diagonal_bounds, diagonal_bounds_everywhere, BoundCheck, BoundsReport};
pub use gaps::{
    check_cohomological_gaps, check_consecutive, check_homological_gaps, check_with_interval, GapQuery, GapVerdict,
    Outcome, Rule,
};
pub use invariants::{depth_m, dim_m, dim_s, invariants, ModuleInvariants};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiVerdict {
    pub outcome: Outcome,
    pub deviations: Vec<(Point, Deviations)>,
}

impl CiVerdict {
    pub fn to_json(&self, pres: &AlgebraPresentation) -> Value {
        json!({
            "outcome": self.outcome.label(),
            "points": self.deviations.iter().map(|(p, d)| json!({
                "point": point_label(pres, p),
                "eps2": d.eps2,
                "eps3": d.eps3,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn point_label(pres: &AlgebraPresentation, p: &Point) -> String {
    match p {
        Point::Irrelevant => "irrelevant ideal".into(),
        Point::Ideal(g) => format!("({})", g.iter().map(|x| pres.format(x)).collect::<Vec<_>>().join(", ")),
    }
}

/// C.i. at every point of `φ` exactly when `ε₃ = 0` at each of them.
pub fn ci_certificate(phi: &Surjection, slack: i64) -> Result<CiVerdict> {
    let mut devs = Vec::new();
    for p in phi.points()? {
        let d = deviations(phi, &p, slack)?;
        devs.push((p, d));
    }
    let outcome = if devs.iter().all(|(_, d)| d.eps3 == 0) {
        Outcome::CiCertified
    } else {
        Outcome::CriterionNotMet
    };
    Ok(CiVerdict { outcome, deviations: devs })
}

/// [`ci_certificate`] for the multiplication map `S ⊗ S -> S`.
pub fn diagonal_ci_certificate(pres: &Arc<AlgebraPresentation>, slack: i64) -> Result<CiVerdict> {
    ci_certificate(enveloping(pres)?.multiplication(), slack)
}

fn trim(k: &CoeffRing, mut v: Vec<Coefficient>) -> Vec<Coefficient> {
    while v.last().is_some_and(|c| *c == k.from_int(0)) {
        v.pop();
    }
    v
}

/// Monic gcd of dense univariate polynomials over a field.
fn gcd(k: &CoeffRing, a: Vec<Coefficient>, b: Vec<Coefficient>) -> Vec<Coefficient> {
    let (mut a, mut b) = (trim(k, a), trim(k, b));
    while !b.is_empty() {
        let lead = k.inv(b.last().unwrap()).expect("field");
        while a.len() >= b.len() {
            let f = k.mul(a.last().unwrap(), &lead);
            let shift = a.len() - b.len();
            for (j, c) in b.iter().enumerate() {
                let t = k.mul(&f, c);
                a[shift + j] = k.sub(&a[shift + j], &t);
            }
            a.pop();
            a = trim(k, a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(l) = a.last().cloned() {
        let inv = k.inv(&l).expect("field");
        a = a.iter().map(|c| k.mul(c, &inv)).collect();
    }
    a
}

fn dense(p: &Polynomial) -> Vec<Coefficient> {
    let mut v = Vec::new();
    for (m, c) in p.terms() {
        let e = m.exponents()[0] as usize;
        if v.len() <= e {
            v.resize(e + 1, Coefficient::default());
        }
        v[e] = c.clone();
    }
    v
}

/// `gcd(f, f') = 1` for `S = K[x]/(f)` over a field.
pub fn squarefree(pres: &AlgebraPresentation) -> Option<bool> {
    let k = pres.coeffs();
    if !k.is_field() || pres.nvars() != 1 || pres.relations().len() != 1 {
        return None;
    }
    let f = &pres.relations()[0];
    let df = pres.ring().derivative(f, 0);
    Some(gcd(k, dense(f), dense(&df)).len() == 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparabilityVerdict {
    pub verdict: GapVerdict,
    pub conclusion: Option<String>,
    /// Direct test when `S` is monogenic.
    pub squarefree: Option<bool>,
    pub consistent: bool,
}

impl SeparabilityVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.to_json(),
            "conclusion": self.conclusion,
            "squarefree": self.squarefree,
            "consistent": self.consistent,
        })
    }
}

pub const SEPARABLE: &str = "product of separable field extensions";

/// Two zeros of `HH^n(S, S)` of different parity for `S` finite over a
/// field make `S` a product of separable field extensions.
pub fn corollary_separability(pres: &AlgebraPresentation, table: &HochschildTable) -> Option<SeparabilityVerdict> {
    if !pres.coeffs().is_field() || !pres.is_finite() || table.direction != Direction::Cohomology {
        return None;
    }
    let q = GapQuery {
        direction: Direction::Cohomology,
        vanishing: (0..=table.max_degree).map(|n| table.vanishes(n)).collect(),
        invariants: ModuleInvariants { dim_s: 0, dim_m: 0, depth_m: 0 },
        diagonal: true,
    };
    let mut verdict = check_homological_gaps(&q);
    verdict.rule = Rule::Corollary;
    let certified = verdict.outcome.is_certified();
    let sf = squarefree(pres);
    Some(SeparabilityVerdict {
        conclusion: certified.then(|| SEPARABLE.to_string()),
        consistent: sf.map_or(true, |s| s || !certified),
        squarefree: sf,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Directions {
    Homology,
    Cohomology,
    Both,
}

impl Directions {
    pub fn list(&self) -> Vec<Direction> {
        match self {
            Directions::Homology => vec![Direction::Homology],
            Directions::Cohomology => vec![Direction::Cohomology],
            Directions::Both => vec![Direction::Homology, Direction::Cohomology],
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmoothCheck {
    pub invariants: ModuleInvariants,
    pub tables: Vec<HochschildTable>,
    pub verdicts: Vec<GapVerdict>,
    pub separability: Option<SeparabilityVerdict>,
    /// Interval rule with a chosen length; not part of the outcome.
    pub experimental: Option<GapVerdict>,
    /// Best outcome over all rules applied.
    pub outcome: Outcome,
}

impl SmoothCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "invariants": {
                "dim_s": self.invariants.dim_s,
                "dim_m": self.invariants.dim_m,
                "depth_m": self.invariants.depth_m,
            },
            "tables": self.tables.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            "verdicts": self.verdicts.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            "separability": self.separability.as_ref().map(|s| s.to_json()),
            "experimental": self.experimental.as_ref().map(|v| v.to_json()),
            "outcome": self.outcome.label(),
        })
    }

    pub fn to_text(&self) -> String {
        let inv = self.invariants;
        let mut s = format!(
            "dim S = {}, dim M = {}, depth M = {}\n",
            inv.dim_s, inv.dim_m, inv.depth_m
        );
        for t in &self.tables {
            s.push_str(&t.to_text());
        }
        for v in &self.verdicts {
            s.push_str(&v.to_text());
            s.push('\n');
        }
        if let Some(sep) = &self.separability {
            s.push_str(&format!("corollary: {}", sep.verdict.outcome));
            if let Some(c) = &sep.conclusion {
                s.push_str(&format!(", {c}"));
            }
            if let Some(sf) = sep.squarefree {
                s.push_str(&format!(" (squarefree relation: {sf})"));
            }
            s.push('\n');
        }
        if let Some(v) = &self.experimental {
            s.push_str(&format!("experimental: {}\n", v.to_text()));
        }
        s.push_str(&format!("outcome: {}\n", self.outcome));
        s
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub table: TableOptions,
    pub interval_override: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            table: TableOptions::default(),
            interval_override: None,
        }
    }
}

fn rank(o: Outcome) -> u8 {
    match o {
        Outcome::SmoothCertified | Outcome::CiCertified => 2,
        Outcome::InconclusiveCutoff => 1,
        Outcome::CriterionNotMet => 0,
    }
}

/// Evaluates every applicable rule on the tables through `max_degree`.
pub fn smooth_check(
    pres: &Arc<AlgebraPresentation>,
    m: &CoefficientModule,
    max_degree: usize,
    directions: Directions,
    opts: &CheckOptions,
) -> Result<SmoothCheck> {
    let inv = invariants(pres, m, opts.table.slack)?;
    let mut tables = Vec::new();
    let mut verdicts = Vec::new();
    let mut separability = None;
    let mut experimental = None;
    for dir in directions.list() {
        let table = match dir {
            Direction::Homology => hochschild_homology(pres, m, max_degree, &opts.table)?,
            Direction::Cohomology => hochschild_cohomology(pres, m, max_degree, &opts.table)?,
        };
        let q = GapQuery::from_table(&table, inv);
        match dir {
            Direction::Homology => {
                verdicts.push(check_homological_gaps(&q));
            }
            Direction::Cohomology => {
                verdicts.push(check_cohomological_gaps(&q));
                verdicts.push(check_consecutive(&q));
                experimental = opts.interval_override.map(|k| check_with_interval(&q, k));
                if m.is_free() && m.rank() == 1 && m.degrees == [0] {
                    separability = corollary_separability(pres, &table);
                }
            }
        }
        tables.push(table);
    }
    let outcome = verdicts
        .iter()
        .map(|v| v.outcome)
        .chain(separability.iter().map(|s| s.verdict.outcome))
        .max_by_key(|o| rank(*o))
        .unwrap_or(Outcome::InconclusiveCutoff);
    Ok(SmoothCheck {
        invariants: inv,
        tables,
        verdicts,
        separability,
        experimental,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::DEFAULT_SLACK;

    fn pres(s: &str) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::from_toml(s).unwrap())
    }

    #[test]
    fn squarefree_relations() {
        assert_eq!(squarefree(&pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2 - 2\"]\n")), Some(true));
        assert_eq!(squarefree(&pres("ring = \"Fp:5\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n")), Some(false));
        assert_eq!(squarefree(&pres("ring = \"Q\"\nvars = [\"e\"]\nrelations = [\"e^2 - e\"]\n")), Some(true));
        // inseparable in characteristic p
        assert_eq!(squarefree(&pres("ring = \"Fp:5\"\nvars = [\"x\"]\nrelations = [\"x^5 - 2\"]\n")), Some(false));
    }

    #[test]
    fn ci_examples() {
        let qx = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n");
        let quot = Surjection::quotient(qx.clone(), vec![qx.parse_element("x^2").unwrap()]).unwrap();
        assert_eq!(ci_certificate(&quot, DEFAULT_SLACK).unwrap().outcome, Outcome::CiCertified);

        let r = pres("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = [\"x^2\", \"x*y\"]\n");
        let phi = Surjection::quotient(r.clone(), vec![r.parse_element("y^2").unwrap()]).unwrap();
        let v = ci_certificate(&phi, DEFAULT_SLACK).unwrap();
        assert_eq!(v.outcome, Outcome::CriterionNotMet);
        assert_eq!(v.deviations[0].1, Deviations { eps2: 1, eps3: 1 });

        assert_eq!(diagonal_ci_certificate(&qx, DEFAULT_SLACK).unwrap().outcome, Outcome::CiCertified);
    }

    #[test]
    fn smooth_and_singular_checks() {
        let qx = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n");
        let m = CoefficientModule::base_module(qx.clone());
        let c = smooth_check(&qx, &m, 4, Directions::Both, &CheckOptions::default()).unwrap();
        assert_eq!(c.outcome, Outcome::SmoothCertified);
        assert_eq!(c.verdicts[0].witnesses, Some((2, 3)));
        assert_eq!(c.verdicts[1].witnesses, Some((2, 3)));

        let dual = pres("ring = \"Fp:5\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n");
        let m = CoefficientModule::base_module(dual.clone());
        let c = smooth_check(&dual, &m, 4, Directions::Both, &CheckOptions::default()).unwrap();
        assert_eq!(c.outcome, Outcome::CriterionNotMet);
        let sep = c.separability.unwrap();
        assert_eq!(sep.conclusion, None);
        assert!(sep.consistent);
    }
}
