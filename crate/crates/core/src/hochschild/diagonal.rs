//! The enveloping algebra `S ⊗ S`, its multiplication map and free
//! resolutions of `S` over it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::complexes::{FreeComplex, HomologyOptions};
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::model::Point;
use crate::module::CoefficientModule;
use crate::resolutions::{koszul_h1_generators, minimal_free_resolution, Surjection, TateStage};
use crate::ring::{AlgebraPresentation, Monomial, PolyRing, Polynomial, RingMap};

#[derive(Clone, Debug)]
pub struct Enveloping {
    algebra: Arc<AlgebraPresentation>,
    env: Arc<AlgebraPresentation>,
    phi: Surjection,
    diagonal: Vec<Polynomial>,
}

/// `S ⊗ S` on variables `x_i` and `x_i'`.
pub fn enveloping(pres: &Arc<AlgebraPresentation>) -> Result<Enveloping> {
    let ring = pres.ring();
    let n = ring.nvars();
    let mut names = ring.names().to_vec();
    names.extend(ring.names().iter().map(|v| format!("{v}'")));
    let mut weights = ring.weights().to_vec();
    weights.extend_from_slice(ring.weights());
    let big = PolyRing::new(ring.coeffs().clone(), names, weights)?;
    let left: Vec<Polynomial> = (0..n).map(|i| big.var(i)).collect();
    let right: Vec<Polynomial> = (0..n).map(|i| big.var(n + i)).collect();
    let mut rels = Vec::new();
    for r in pres.relations() {
        rels.push(ring.substitute(r, &left, &big));
        rels.push(ring.substitute(r, &right, &big));
    }
    let mut env = AlgebraPresentation::new(big.clone(), rels)?;
    if let Some(name) = pres.name() {
        env = env.with_name(format!("{name}^e"));
    }
    let env = Arc::new(env);
    let mut images: Vec<Polynomial> = (0..n).map(|i| ring.var(i)).collect();
    images.extend((0..n).map(|i| ring.var(i)));
    let map = RingMap::new(env.clone(), pres.clone(), images)?;
    let diagonal: Vec<Polynomial> = (0..n).map(|i| big.sub(&left[i], &right[i])).collect();
    let phi = Surjection::new(map, diagonal.clone(), right, true)?;
    Ok(Enveloping {
        algebra: pres.clone(),
        env,
        phi,
        diagonal,
    })
}

impl Enveloping {
    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        &self.algebra
    }

    pub fn ring(&self) -> &Arc<AlgebraPresentation> {
        &self.env
    }

    /// The multiplication map `S ⊗ S -> S`.
    pub fn multiplication(&self) -> &Surjection {
        &self.phi
    }

    /// `x_i - x_i'`, one per variable of `S`.
    pub fn diagonal(&self) -> &[Polynomial] {
        &self.diagonal
    }

    /// `1 ⊗ s`.
    pub fn section(&self, s: &Polynomial) -> Polynomial {
        self.phi.lift(s)
    }

    /// `S` as a module over `S ⊗ S`.
    pub fn algebra_module(&self) -> Result<CoefficientModule> {
        CoefficientModule::new(
            self.env.clone(),
            vec![0],
            PolyMatrix::from_columns(1, self.diagonal.iter().map(|g| vec![g.clone()]).collect()),
        )
    }

    /// `(f(t) - f(t')) / (t - t')` for the single relation of a monogenic
    /// algebra.
    pub fn divided_difference(&self) -> Result<Polynomial> {
        let s = &self.algebra;
        if s.nvars() != 1 || s.relations().len() != 1 {
            return Err(Error::StrategyInapplicable {
                strategy: "periodic".into(),
                reason: "the algebra is not K[t]/(f) with f nonzero".into(),
            });
        }
        let big = self.env.ring();
        let mut out = big.zero();
        for (m, c) in s.relations()[0].terms() {
            let k = m.exponents()[0];
            for i in 0..k {
                let mono = Monomial::from_exponents(vec![i, k - 1 - i]);
                out = big.add(&out, &big.term(mono, c.clone()));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Auto,
    Periodic,
    Koszul,
    Tate,
    Minimal,
    Bar,
}

impl Strategy {
    pub const RESOLVING: [Strategy; 4] = [Strategy::Periodic, Strategy::Koszul, Strategy::Tate, Strategy::Minimal];

    pub fn label(&self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::Periodic => "periodic",
            Strategy::Koszul => "koszul",
            Strategy::Tate => "tate",
            Strategy::Minimal => "minimal",
            Strategy::Bar => "bar",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Strategy::Auto,
            "periodic" => Strategy::Periodic,
            "koszul" => Strategy::Koszul,
            "tate" => Strategy::Tate,
            "minimal" => Strategy::Minimal,
            "bar" => Strategy::Bar,
            other => return Err(Error::Invalid(format!("unknown strategy `{other}`"))),
        })
    }
}

/// Free resolution of `S` over `S ⊗ S`, through degree `cutoff`.
#[derive(Clone, Debug)]
pub struct DiagonalResolution {
    pub strategy: Strategy,
    pub complex: FreeComplex,
    /// DG structure when the resolution is a Tate construction on the
    /// diagonal generators.
    pub stage: Option<TateStage>,
}

fn inapplicable(strategy: Strategy, reason: impl Into<String>) -> Error {
    Error::StrategyInapplicable {
        strategy: strategy.label().into(),
        reason: reason.into(),
    }
}

/// `H_i = 0` for `1 <= i <= top`.
fn acyclic_through(c: &FreeComplex, top: usize, slack: i64) -> Result<bool> {
    let opts = HomologyOptions { slack, point: None };
    for i in 1..=top.min(c.end().max(0) as usize) {
        if !c.homology(i as i64, &opts)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn diagonal_resolution(env: &Enveloping, strategy: Strategy, cutoff: usize, slack: i64) -> Result<DiagonalResolution> {
    let r = env.ring().clone();
    let diag = env.diagonal().to_vec();
    let staged = |stage: TateStage, strategy| {
        Ok(DiagonalResolution {
            strategy,
            complex: stage.complex().clone(),
            stage: Some(stage),
        })
    };
    match strategy {
        Strategy::Auto => {
            for s in Strategy::RESOLVING {
                match diagonal_resolution(env, s, cutoff, slack) {
                    Err(Error::StrategyInapplicable { .. }) => continue,
                    other => return other,
                }
            }
            Err(inapplicable(Strategy::Auto, "no resolution strategy applies"))
        }
        Strategy::Periodic => {
            let fstar = env.divided_difference()?;
            let stage = TateStage::new(r, diag, vec![vec![fstar]], cutoff)?;
            if !acyclic_through(stage.complex(), cutoff.saturating_sub(1).min(2), slack)? {
                return Err(inapplicable(strategy, "the periodic complex is not acyclic"));
            }
            staged(stage, strategy)
        }
        Strategy::Koszul => {
            let stage = TateStage::new(r, diag.clone(), Vec::new(), cutoff.min(diag.len()))?;
            let full = TateStage::koszul(env.ring().clone(), diag)?;
            if !acyclic_through(full.complex(), 1, slack)? {
                return Err(inapplicable(strategy, "the diagonal generators are not a regular sequence"));
            }
            staged(stage, strategy)
        }
        Strategy::Tate => {
            if !r.is_graded() {
                return Err(inapplicable(strategy, "stage two is built for graded algebras over a field"));
            }
            let cycles = koszul_h1_generators(&r, &diag, &Point::Irrelevant, slack)?;
            let stage = TateStage::new(r, diag, cycles, cutoff)?;
            if !acyclic_through(stage.complex(), cutoff.saturating_sub(1), slack)? {
                return Err(inapplicable(strategy, "stage two is not acyclic"));
            }
            staged(stage, strategy)
        }
        Strategy::Minimal => {
            if !r.is_graded() {
                return Err(inapplicable(strategy, "minimal resolutions need a graded algebra over a field"));
            }
            let complex = minimal_free_resolution(&env.algebra_module()?, cutoff, slack)?;
            Ok(DiagonalResolution {
                strategy,
                complex,
                stage: None,
            })
        }
        Strategy::Bar => Err(inapplicable(strategy, "the bar construction is only an oracle")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::DEFAULT_SLACK;

    fn pres(s: &str) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::from_toml(s).unwrap())
    }

    #[test]
    fn doubled_presentations() {
        let e = enveloping(&pres("ring = \"Z\"\nvars = [\"t\"]\nrelations = [\"t^2 - 2\"]\n")).unwrap();
        assert_eq!(e.ring().relation_strings(), vec!["t^2 - 2", "t'^2 - 2"]);
        assert_eq!(e.ring().format(&e.diagonal()[0]), "t - t'");
        assert_eq!(e.ring().format(&e.divided_difference().unwrap()), "t + t'");
        let s = e.algebra().clone();
        let t = s.parse_element("t").unwrap();
        assert_eq!(e.multiplication().map.apply(&e.section(&t)), t);
    }

    #[test]
    fn diagonal_generates_the_kernel() {
        // the quotient by x - x' has the Hilbert function of S
        let s = pres("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = [\"x^2\", \"x*y\"]\n");
        let e = enveloping(&s).unwrap();
        let q = Surjection::quotient(e.ring().clone(), e.diagonal().to_vec()).unwrap();
        for d in 0..6 {
            assert_eq!(
                q.target().graded_piece_basis(d).unwrap().len(),
                s.graded_piece_basis(d).unwrap().len()
            );
        }
    }

    #[test]
    fn strategy_applicability() {
        let z = enveloping(&pres("ring = \"Z\"\nvars = [\"t\"]\nrelations = [\"t^2 - 2\"]\n")).unwrap();
        let p = diagonal_resolution(&z, Strategy::Periodic, 4, DEFAULT_SLACK).unwrap();
        assert_eq!(p.complex.ranks(), vec![1; 5]);
        let d2 = p.complex.differential(2).unwrap();
        assert_eq!(d2.to_strings(z.ring().ring()), vec![vec!["t + t'".to_string()]]);
        assert!(matches!(
            diagonal_resolution(&z, Strategy::Koszul, 4, DEFAULT_SLACK),
            Err(Error::StrategyInapplicable { .. })
        ));
        assert_eq!(diagonal_resolution(&z, Strategy::Auto, 4, DEFAULT_SLACK).unwrap().strategy, Strategy::Periodic);

        let qx = enveloping(&pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n")).unwrap();
        let k = diagonal_resolution(&qx, Strategy::Auto, 4, DEFAULT_SLACK).unwrap();
        assert_eq!(k.strategy, Strategy::Koszul);
        assert_eq!(k.complex.ranks(), vec![1, 1]);

        let dual = enveloping(&pres("ring = \"Fp:5\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n")).unwrap();
        for s in [Strategy::Periodic, Strategy::Tate, Strategy::Minimal] {
            let res = diagonal_resolution(&dual, s, 5, DEFAULT_SLACK).unwrap();
            assert_eq!(res.complex.ranks(), vec![1; 6], "{s}");
        }
    }
}
