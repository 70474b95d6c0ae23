//! Kähler differentials and their exterior powers.

use std::sync::Arc;

use crate::error::Result;
use crate::matrix::PolyMatrix;
use crate::module::CoefficientModule;
use crate::ring::{AlgebraPresentation, Polynomial};

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for last in k - 1..n {
        for mut s in subsets(last, k - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out.sort();
    out
}

/// `Ω = coker(J^T)` on generators `dx_i`.
pub fn kahler(pres: &Arc<AlgebraPresentation>) -> Result<CoefficientModule> {
    exterior_power(pres, 1)
}

/// `Λ^n Ω`, generated by `dx_I` for increasing `I`, with relations
/// `df ∧ dx_J`.
pub fn exterior_power(pres: &Arc<AlgebraPresentation>, n: usize) -> Result<CoefficientModule> {
    let ring = pres.ring();
    let v = ring.nvars();
    let gens = subsets(v, n);
    let degrees: Vec<i64> = gens
        .iter()
        .map(|s| s.iter().map(|&i| ring.weights()[i]).sum())
        .collect();
    let mut cols = Vec::new();
    if n >= 1 {
        for f in pres.relations() {
            let grad: Vec<Polynomial> = (0..v).map(|i| pres.normal_form(&ring.derivative(f, i))).collect();
            for j in subsets(v, n - 1) {
                let mut col = vec![ring.zero(); gens.len()];
                for (i, g) in grad.iter().enumerate() {
                    if g.is_zero() || j.contains(&i) {
                        continue;
                    }
                    let mut set = j.clone();
                    set.push(i);
                    set.sort_unstable();
                    let pos = gens.binary_search(&set).expect("subset");
                    let before = j.iter().filter(|&&x| x < i).count();
                    col[pos] = if before % 2 == 0 { g.clone() } else { ring.neg(g) };
                }
                cols.push(col);
            }
        }
    }
    CoefficientModule::new(pres.clone(), degrees, PolyMatrix::from_columns(gens.len(), cols))
}

/// `A ⊗ B`, generators indexed by `i * rank(B) + k`.
pub fn tensor_modules(a: &CoefficientModule, b: &CoefficientModule) -> Result<CoefficientModule> {
    let (ra, rb) = (a.rank(), b.rank());
    let degrees: Vec<i64> = a
        .degrees
        .iter()
        .flat_map(|x| b.degrees.iter().map(move |y| x + y))
        .collect();
    let left = a.relations.kron_identity(rb);
    let right = b.relations.identity_kron(ra);
    let cols: Vec<Vec<Polynomial>> = (0..left.cols())
        .map(|j| left.column(j))
        .chain((0..right.cols()).map(|j| right.column(j)))
        .collect();
    CoefficientModule::new(a.base.clone(), degrees, PolyMatrix::from_columns(ra * rb, cols))
}

/// `Λ^n Ω ⊗ M`.
pub fn differential_forms(pres: &Arc<AlgebraPresentation>, n: usize, m: &CoefficientModule) -> Result<CoefficientModule> {
    tensor_modules(&exterior_power(pres, n)?, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::DEFAULT_SLACK;

    fn pres(s: &str) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::from_toml(s).unwrap())
    }

    #[test]
    fn differentials_of_examples() {
        let qx = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n");
        let o = kahler(&qx).unwrap();
        assert!(o.is_free());
        assert_eq!(o.degrees, vec![1]);

        let z = pres("ring = \"Z\"\nvars = [\"t\"]\nrelations = [\"t^2 - 2\"]\n");
        let o = kahler(&z).unwrap();
        assert_eq!(o.descriptor(DEFAULT_SLACK, None).unwrap().to_string(), "Z/2 + Z/4");

        let c = pres("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = [\"x^2\", \"x*y\"]\n");
        let o = kahler(&c).unwrap();
        let rel = o.relations.to_strings(c.ring());
        // columns d(x^2) = 2x dx and d(x*y) = y dx + x dy
        assert_eq!(rel, vec![vec!["2*x".to_string(), "y".to_string()], vec!["0".to_string(), "x".to_string()]]);
    }

    #[test]
    fn exterior_powers() {
        let qxy = pres("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = []\n");
        assert_eq!(exterior_power(&qxy, 2).unwrap().degrees, vec![2]);
        assert_eq!(exterior_power(&qxy, 3).unwrap().rank(), 0);
        // Λ^2 of a cyclic module vanishes
        let dual = pres("ring = \"Fp:5\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n");
        assert_eq!(exterior_power(&dual, 2).unwrap().rank(), 0);
        let l1 = exterior_power(&dual, 1).unwrap();
        assert_eq!(l1.descriptor(DEFAULT_SLACK, None).unwrap().to_string(), "k^1 (1:1)");
    }
}
