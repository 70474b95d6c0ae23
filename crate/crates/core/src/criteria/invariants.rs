//! Krull dimension and depth of the coefficient module.

use serde::Serialize;

use crate::complexes::{HomologyOptions, ModuleComplex};
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::module::CoefficientModule;
use crate::resolutions::minimal_free_resolution;
use crate::ring::{AlgebraPresentation, CoeffRing, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleInvariants {
    pub dim_s: usize,
    pub dim_m: usize,
    pub depth_m: usize,
}

/// Krull dimension of `S`. Orders over `Z` have dimension one.
pub fn dim_s(pres: &AlgebraPresentation) -> usize {
    if pres.is_finite() && pres.coeffs().is_field() {
        0
    } else {
        pres.krull_dimension()
    }
}

fn determinant(pres: &AlgebraPresentation, m: &[Vec<Polynomial>]) -> Polynomial {
    let ring = pres.ring();
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = ring.zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let t = pres.mul(&m[0][j], &determinant(pres, &minor));
                acc = if j % 2 == 0 { pres.add(&acc, &t) } else { pres.sub(&acc, &t) };
            }
            acc
        }
    }
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = choose(n - 1, k);
    for mut s in choose(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Generators of the zeroth Fitting ideal, whose radical is that of the
/// annihilator.
fn fitting_ideal(m: &CoefficientModule) -> Vec<Polynomial> {
    let pres = &m.base;
    let b = m.rank();
    let r: &PolyMatrix = &m.relations;
    if b == 0 {
        return vec![pres.ring().one()];
    }
    let mut out = Vec::new();
    for cols in choose(r.cols(), b) {
        let sq: Vec<Vec<Polynomial>> = (0..b)
            .map(|i| cols.iter().map(|&j| r.get(i, j).clone()).collect())
            .collect();
        let d = determinant(pres, &sq);
        if !d.is_zero() {
            out.push(d);
        }
    }
    out
}

/// `dim Supp M`.
pub fn dim_m(m: &CoefficientModule) -> Result<usize> {
    let pres = &m.base;
    if m.rank() == 0 {
        return Ok(0);
    }
    match pres.coeffs() {
        CoeffRing::Integers => {
            // one unless M is a torsion group
            let d = m.descriptor(0, None)?;
            Ok(match &d.shape {
                crate::descriptor::Shape::Abelian(f) if f.iter().all(|x| x != &0.into()) => 0,
                crate::descriptor::Shape::Zero => 0,
                _ => 1,
            })
        }
        _ if pres.is_finite() => Ok(0),
        _ => pres.krull_dimension_mod(&fitting_ideal(m)),
    }
}

/// `depth M`: the first `n` with `Ext^n(k, M) != 0`, from a minimal
/// resolution of the residue field.
pub fn depth_m(m: &CoefficientModule, slack: i64) -> Result<usize> {
    let pres = &m.base;
    if m.rank() == 0 {
        return Ok(0);
    }
    match pres.coeffs() {
        CoeffRing::Integers => {
            // depth one exactly when p is a nonzerodivisor for some prime, i.e. M is not torsion
            Ok(dim_m(m)?.min(1))
        }
        _ if pres.is_finite() => Ok(0),
        _ => {
            if !pres.is_graded() || !m.is_homogeneous() {
                return Err(Error::UnsupportedBase("depth needs a graded module".into()));
            }
            let ring = pres.ring();
            let vars: Vec<Polynomial> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
            let k = CoefficientModule::new(
                pres.clone(),
                vec![0],
                PolyMatrix::from_columns(1, vars.into_iter().map(|v| vec![v]).collect()),
            )?;
            let top = dim_m(m)?;
            let f = minimal_free_resolution(&k, top + 1, slack)?;
            let hom = ModuleComplex::hom(&f, m);
            let opts = HomologyOptions { slack, point: None };
            for n in 0..=top {
                if !hom.homology(-(n as i64), &opts)?.is_zero() {
                    return Ok(n);
                }
            }
            Ok(top)
        }
    }
}

pub fn invariants(pres: &AlgebraPresentation, m: &CoefficientModule, slack: i64) -> Result<ModuleInvariants> {
    Ok(ModuleInvariants {
        dim_s: dim_s(pres),
        dim_m: dim_m(m)?,
        depth_m: depth_m(m, slack)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::DEFAULT_SLACK;
    use std::sync::Arc;

    fn pres(s: &str) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::from_toml(s).unwrap())
    }

    #[test]
    fn base_modules() {
        let cases = [
            ("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n", (1, 1, 1)),
            ("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = []\n", (2, 2, 2)),
            ("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = [\"x^2\", \"x*y\"]\n", (1, 1, 0)),
            ("ring = \"Fp:5\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n", (0, 0, 0)),
            ("ring = \"Z\"\nvars = [\"t\"]\nrelations = [\"t^2 - 2\"]\n", (1, 1, 1)),
        ];
        for (text, (ds, dm, dp)) in cases {
            let s = pres(text);
            let m = CoefficientModule::base_module(s.clone());
            let inv = invariants(&s, &m, DEFAULT_SLACK).unwrap();
            assert_eq!((inv.dim_s, inv.dim_m, inv.depth_m), (ds, dm, dp), "{text}");
        }
    }

    #[test]
    fn torsion_and_residue_modules() {
        let z = pres("ring = \"Z\"\nvars = [\"t\"]\nrelations = [\"t^2 - 2\"]\n");
        let t = z.parse_element("t").unwrap();
        let m = CoefficientModule::new(z.clone(), vec![0], PolyMatrix::from_columns(1, vec![vec![t]])).unwrap();
        assert_eq!(dim_m(&m).unwrap(), 0);
        assert_eq!(depth_m(&m, DEFAULT_SLACK).unwrap(), 0);

        let q = pres("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = []\n");
        let x = q.parse_element("x").unwrap();
        let m = CoefficientModule::new(q.clone(), vec![0], PolyMatrix::from_columns(1, vec![vec![x]])).unwrap();
        assert_eq!(dim_m(&m).unwrap(), 1);
        assert_eq!(depth_m(&m, DEFAULT_SLACK).unwrap(), 1);
    }
}
