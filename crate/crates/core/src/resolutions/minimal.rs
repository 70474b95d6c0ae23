//! Graded minimal free resolutions over a field.

use crate::complexes::{FreeComplex, DEFAULT_SLACK};
use crate::error::{Error, Result};
use crate::linalg::{SVec, Space};
use crate::matrix::PolyMatrix;
use crate::model::{Model, Piece, Point, Subquotient};
use crate::module::CoefficientModule;
use crate::ring::Polynomial;

/// Minimal homogeneous generators of `{v in F(src) : map(v) in sub}`.
fn kernel_generators(
    model: &Model,
    map: &PolyMatrix,
    src: &[i64],
    tgt: &[i64],
    sub: impl Fn(Piece) -> Result<Space>,
    slack: i64,
) -> Result<Vec<(i64, Vec<Polynomial>)>> {
    let pieces = model.window(src, slack);
    let mut z = Vec::with_capacity(pieces.len());
    let mut b = Vec::with_capacity(pieces.len());
    for &p in &pieces {
        let a = model.expand_at(map, src, tgt, p)?;
        let len = model.layout(src, p).len;
        z.push(a.preimage(&model.arith, &sub(p)?));
        b.push(Space::zero(&model.arith, len));
    }
    let sq = Subquotient {
        model,
        degs: src.to_vec(),
        pieces,
        z,
        b,
    };
    let mut gens: Vec<(i64, Vec<Polynomial>)> = sq
        .minimal_generators(&Point::Irrelevant)?
        .into_iter()
        .map(|(p, v)| (p.expect("graded"), model.from_vec(&v, src, p)))
        .collect();
    // within a degree: by first nonzero slot, then larger leading term first
    let ring = model.pres.ring();
    let lead = |c: &[Polynomial]| c.iter().position(|p| !p.is_zero()).map(|i| (i, c[i].leading().map(|t| t.0.clone())));
    gens.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| match (lead(&a.1), lead(&b.1)) {
            (Some((i, ma)), Some((j, mb))) => i.cmp(&j).then_with(|| match (ma, mb) {
                (Some(ma), Some(mb)) => ring.cmp(&mb, &ma),
                _ => std::cmp::Ordering::Equal,
            }),
            _ => std::cmp::Ordering::Equal,
        })
    });
    Ok(gens)
}

fn unit(model: &Model, degs: &[i64], i: usize) -> Result<SVec> {
    let ring = model.pres.ring();
    let col: Vec<Polynomial> = (0..degs.len())
        .map(|k| if k == i { ring.one() } else { ring.zero() })
        .collect();
    model.to_vec(&col, degs, Some(degs[i]))
}

/// Minimal graded free resolution `F_0 <- F_1 <- ... <- F_cutoff` of a
/// graded module over a graded algebra with field coefficients. Kernel
/// generators are sought up to `slack` degrees above each term when the
/// base is infinite-dimensional.
pub fn minimal_free_resolution(module: &CoefficientModule, cutoff: usize, slack: i64) -> Result<FreeComplex> {
    let base = module.base.clone();
    if !base.is_graded() || !module.is_homogeneous() {
        return Err(Error::UnsupportedBase(
            "minimal resolutions need a graded algebra over a field and a graded module".into(),
        ));
    }
    let model = Model::graded(base.clone())?;
    let arith = model.arith.clone();

    // F_0: a minimal subset of the given generators.
    let sq = module.as_subquotient(&model, slack)?;
    let candidates: Vec<(Piece, SVec)> = (0..module.rank())
        .map(|i| Ok((Some(module.degrees[i]), unit(&model, &module.degrees, i)?)))
        .collect::<Result<_>>()?;
    let keep = sq.select(&Point::Irrelevant, &candidates)?;
    let f0: Vec<i64> = keep.iter().map(|&i| module.degrees[i]).collect();
    let ring = base.ring();
    let inclusion = PolyMatrix::from_columns(
        module.rank(),
        keep.iter()
            .map(|&i| {
                (0..module.rank())
                    .map(|k| if k == i { ring.one() } else { ring.zero() })
                    .collect()
            })
            .collect(),
    );

    let mut modules = vec![f0];
    let mut diffs: Vec<PolyMatrix> = Vec::new();
    for n in 1..=cutoff {
        let src = modules[n - 1].clone();
        if src.is_empty() {
            break;
        }
        let gens = if n == 1 {
            kernel_generators(
                &model,
                &inclusion,
                &src,
                &module.degrees,
                |p| {
                    Ok(model
                        .expand_at(&module.relations, &module.relation_degrees, &module.degrees, p)?
                        .image(&arith))
                },
                slack,
            )?
        } else {
            let prev = diffs.last().expect("previous differential");
            let tgt = modules[n - 2].clone();
            kernel_generators(
                &model,
                prev,
                &src,
                &tgt,
                |p| Ok(Space::zero(&arith, model.layout(&tgt, p).len)),
                slack,
            )?
        };
        if gens.is_empty() {
            break;
        }
        modules.push(gens.iter().map(|(d, _)| *d).collect());
        diffs.push(PolyMatrix::from_columns(src.len(), gens.into_iter().map(|(_, c)| c).collect()));
    }
    FreeComplex::new(base, 0, modules, diffs)
}

/// Resolution with the default slack.
pub fn minimal_resolution(module: &CoefficientModule, cutoff: usize) -> Result<FreeComplex> {
    minimal_free_resolution(module, cutoff, DEFAULT_SLACK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::HomologyOptions;
    use crate::ring::AlgebraPresentation;
    use std::sync::Arc;

    fn pres(s: &str) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::from_toml(s).unwrap())
    }

    fn cyclic(r: &Arc<AlgebraPresentation>, gens: &[&str]) -> CoefficientModule {
        let cols = gens.iter().map(|g| vec![r.parse_element(g).unwrap()]).collect();
        CoefficientModule::new(r.clone(), vec![0], PolyMatrix::from_columns(1, cols)).unwrap()
    }

    #[test]
    fn regular_element_has_length_one() {
        let r = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n");
        let f = minimal_resolution(&cyclic(&r, &["x"]), 5).unwrap();
        assert_eq!(f.ranks(), vec![1, 1]);
    }

    #[test]
    fn residue_field_of_dual_numbers() {
        let r = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n");
        let f = minimal_resolution(&cyclic(&r, &["x"]), 6).unwrap();
        assert_eq!(f.ranks(), vec![1; 7]);
        for n in 1..=6 {
            assert_eq!(f.differential(n).unwrap().to_strings(r.ring()), vec![vec!["x".to_string()]]);
        }
        assert!(f.is_minimal(&Point::Irrelevant).unwrap());
    }

    #[test]
    fn campillo_bottom_row() {
        let r = pres("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = [\"x^2\", \"x*y\"]\n");
        let f = minimal_resolution(&cyclic(&r, &["y^2"]), 3).unwrap();
        assert_eq!(f.ranks(), vec![1, 1, 1, 2]);
        assert_eq!(f.differential(2).unwrap().to_strings(r.ring()), vec![vec!["x".to_string()]]);
        assert_eq!(
            f.differential(3).unwrap().to_strings(r.ring()),
            vec![vec!["x".to_string(), "y".to_string()]]
        );
        assert_eq!(f.degrees(3), &[4, 4]);
        let opts = HomologyOptions::default();
        for n in 1..3 {
            assert!(f.homology(n, &opts).unwrap().is_zero());
        }
    }

    #[test]
    fn redundant_generators_are_pruned() {
        let r = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^3\"]\n");
        // coker of (x, -1): the second generator is x times the first
        let m = CoefficientModule::new(
            r.clone(),
            vec![0, 1],
            PolyMatrix::from_columns(2, vec![vec![r.parse_element("x").unwrap(), r.parse_element("-1").unwrap()]]),
        )
        .unwrap();
        let f = minimal_resolution(&m, 4).unwrap();
        assert_eq!(f.rank(0), 1);
        assert_eq!(f.ranks(), vec![1]);
    }

    #[test]
    fn ungraded_base_is_rejected() {
        let r = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2 - 2\"]\n");
        assert!(matches!(
            minimal_resolution(&cyclic(&r, &["x"]), 2),
            Err(Error::UnsupportedBase(_))
        ));
    }
}
