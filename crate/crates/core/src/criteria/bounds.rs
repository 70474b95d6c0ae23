//! Binomial lower bounds for minimal generator counts of Tor over a
//! closed homomorphism.

use serde::Serialize;
use serde_json::{json, Value};

use crate::complexes::DEFAULT_SLACK;
use crate::error::{Error, Result};
use crate::hochschild::{enveloping, Direction, Hochschild, Strategy};
use crate::model::Point;
use crate::module::CoefficientModule;
use crate::resolutions::deviations;
use crate::ring::AlgebraPresentation;
use std::sync::Arc;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    /// 1 for `ν(Tor_{n+i}) >= m·C(c, n)`, 2 for
    /// `ν(Tor_{2n+i+c}) >= m·C(n+d-1, d-1)`.
    pub family: u8,
    pub n: usize,
    pub degree: usize,
    pub nu: usize,
    pub bound: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub c: usize,
    pub d: usize,
    pub i: usize,
    pub m: usize,
    pub checks: Vec<BoundCheck>,
    pub all_hold: bool,
    /// Every check of the first family is an equality.
    pub first_family_sharp: bool,
}

impl BoundsReport {
    pub fn to_json(&self) -> Value {
        json!({
            "c": self.c,
            "d": self.d,
            "i": self.i,
            "m": self.m,
            "checks": self.checks.iter().map(|k| json!({
                "family": k.family,
                "n": k.n,
                "degree": k.degree,
                "nu": k.nu,
                "bound": k.bound,
                "holds": k.holds,
            })).collect::<Vec<_>>(),
            "all_hold": self.all_hold,
            "first_family_sharp": self.first_family_sharp,
        })
    }
}

/// Checks both families on `nu[k] = ν(Tor_k)` for the degrees present.
/// `i` and `m` are read off the table: the first nonzero degree and its
/// generator count.
pub fn check_binomial_bounds(nu: &[usize], c: usize, d: usize) -> BoundsReport {
    let i = nu.iter().position(|&v| v > 0).unwrap_or(0);
    let m = nu.get(i).copied().unwrap_or(0);
    let mut checks = Vec::new();
    for n in 0..=c {
        if let Some(&v) = nu.get(n + i) {
            let bound = m * binomial(c, n);
            checks.push(BoundCheck { family: 1, n, degree: n + i, nu: v, bound, holds: v >= bound });
        }
    }
    if d > 0 {
        let mut n = 1;
        while let Some(&v) = nu.get(2 * n + i + c) {
            let bound = m * binomial(n + d - 1, d - 1);
            checks.push(BoundCheck { family: 2, n, degree: 2 * n + i + c, nu: v, bound, holds: v >= bound });
            n += 1;
        }
    }
    BoundsReport {
        c,
        d,
        i,
        m,
        all_hold: checks.iter().all(|k| k.holds),
        first_family_sharp: checks.iter().filter(|k| k.family == 1).all(|k| k.nu == k.bound),
        checks,
    }
}

/// The bounds on `Tor^{S⊗S}(S, S) = HH(S)` at `point`, with the deviations
/// of the diagonal at the same point.
pub fn diagonal_bounds(pres: &Arc<AlgebraPresentation>, max_degree: usize, point: &Point, slack: i64) -> Result<BoundsReport> {
    let env = enveloping(pres)?;
    let dev = deviations(env.multiplication(), point, slack)?;
    let h = Hochschild::new(pres, Strategy::Auto, max_degree + 1, slack)?;
    let m = CoefficientModule::base_module(pres.clone());
    let table = h.table(Direction::Homology, &m, max_degree, Some(point.clone()))?;
    let nu: Vec<usize> = table
        .entries
        .iter()
        .map(|e| {
            e.descriptor
                .minimal_generators
                .ok_or_else(|| Error::Invalid("generator count missing".into()))
        })
        .collect::<Result<_>>()?;
    Ok(check_binomial_bounds(&nu, dev.eps2, dev.eps3))
}

/// [`diagonal_bounds`] at every declared point, or the irrelevant ideal.
pub fn diagonal_bounds_everywhere(pres: &Arc<AlgebraPresentation>, max_degree: usize) -> Result<Vec<(Point, BoundsReport)>> {
    let env = enveloping(pres)?;
    env.multiplication()
        .points()?
        .into_iter()
        .map(|p| Ok((p.clone(), diagonal_bounds(pres, max_degree, &p, DEFAULT_SLACK)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn trivial_case() {
        let r = check_binomial_bounds(&[3, 0, 0], 0, 0);
        assert_eq!((r.i, r.m), (0, 3));
        assert_eq!(r.checks.len(), 1);
        assert!(r.all_hold && r.first_family_sharp);
    }

    #[test]
    fn violations_are_reported() {
        let r = check_binomial_bounds(&[1, 1, 0, 0], 2, 0);
        assert!(!r.all_hold);
        let r = check_binomial_bounds(&[1, 1, 1, 0, 1], 1, 1);
        assert!(!r.all_hold);
        assert_eq!(r.checks.iter().filter(|k| !k.holds).map(|k| k.degree).collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn sqrt_two_diagonal() {
        let s = Arc::new(
            AlgebraPresentation::from_toml(
                "ring = \"Z\"\nvars = [\"t\"]\nrelations = [\"t^2 - 2\"]\nmaximal_ideals = [[\"t\"]]\n",
            )
            .unwrap(),
        );
        let all = diagonal_bounds_everywhere(&s, 5).unwrap();
        let r = &all[0].1;
        assert_eq!((r.c, r.d, r.i, r.m), (1, 1, 0, 1));
        assert!(r.all_hold);
        assert_eq!(r.checks.len(), 2 + 2);
    }

    proptest! {
        #[test]
        fn koszul_ranks_meet_the_first_family(c in 0usize..7) {
            let nu: Vec<usize> = (0..=c).map(|n| binomial(c, n)).collect();
            let r = check_binomial_bounds(&nu, c, 0);
            prop_assert!(r.all_hold && r.first_family_sharp);
        }

        #[test]
        fn pascal(n in 1usize..30, k in 1usize..30) {
            prop_assume!(k <= n);
            prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }
    }
}
