//! Deviations, comparison morphisms and p-closedness of a surjection.

use std::sync::Arc;

use serde::Serialize;

use crate::complexes::{FreeComplex, ModuleComplex};
use crate::error::{Error, Result};
use crate::linalg::{Arith, Columns, SVec, Space};
use crate::matrix::PolyMatrix;
use crate::model::{Model, Piece, Point, Subquotient};
use crate::module::CoefficientModule;
use crate::ring::{AlgebraPresentation, Polynomial};

use super::minimal::minimal_free_resolution;
use super::surjection::Surjection;
use super::tate::TateStage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Deviations {
    pub eps2: usize,
    pub eps3: usize,
}

/// Minimal generators of `Ker(phi)` at `point` (a point of the target),
/// chosen among the recorded kernel generators in their given order.
/// With `minimize` false a redundant generator is an error.
pub fn kernel_generators(phi: &Surjection, point: &Point, minimize: bool) -> Result<Vec<Polynomial>> {
    let r = phi.source();
    let gens: Vec<Polynomial> = phi
        .kernel
        .iter()
        .map(|g| r.normal_form(g))
        .filter(|g| !g.is_zero())
        .collect();
    if gens.is_empty() {
        return Ok(gens);
    }
    let ring = r.ring();
    let degs: Option<Vec<i64>> = if r.is_graded() {
        gens.iter().map(|g| ring.homogeneous_degree(g)).collect()
    } else {
        None
    };
    let model = Model::choose(r, degs.is_some())?;
    let degs = match degs {
        Some(d) if model.is_graded() => d,
        _ => vec![0; gens.len()],
    };
    let pieces: Vec<Piece> = if model.is_graded() {
        let lo = *degs.iter().min().unwrap();
        let hi = *degs.iter().max().unwrap();
        (lo..=hi).map(Some).collect()
    } else {
        vec![None]
    };
    let row = PolyMatrix::from_columns(1, gens.iter().map(|g| vec![g.clone()]).collect());
    let mut z = Vec::new();
    let mut b = Vec::new();
    for &p in &pieces {
        z.push(model.expand_at(&row, &degs, &[0], p)?.image(&model.arith));
        b.push(Space::zero(&model.arith, model.layout(&[0], p).len));
    }
    let piece_of = |i: usize| if model.is_graded() { Some(degs[i]) } else { None };
    let candidates: Vec<(Piece, SVec)> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| Ok((piece_of(i), model.to_vec(&[g.clone()], &[0], piece_of(i))?)))
        .collect::<Result<_>>()?;
    let sq = Subquotient {
        model: &model,
        degs: vec![0],
        pieces,
        z,
        b,
    };
    let chosen = sq.select(&phi.source_point(point), &candidates)?;
    if !minimize && chosen.len() < gens.len() {
        return Err(Error::NonMinimalGenerators(format!(
            "{} of the {} kernel generators are redundant",
            gens.len() - chosen.len(),
            gens.len()
        )));
    }
    Ok(chosen.into_iter().map(|i| gens[i].clone()).collect())
}

/// Cycles `sum_i b_i x_i` whose classes minimally generate `H_1` of the
/// Koszul complex on `gens`, at a point of `ring`.
pub fn koszul_h1_generators(
    ring: &Arc<AlgebraPresentation>,
    gens: &[Polynomial],
    point: &Point,
    slack: i64,
) -> Result<Vec<Vec<Polynomial>>> {
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let e = TateStage::new(ring.clone(), gens.to_vec(), Vec::new(), gens.len().min(2))?;
    let mc = ModuleComplex::from_free(e.complex());
    let model = mc.model()?;
    let sq = mc.cycles_boundaries(&model, 1, slack)?;
    Ok(sq
        .minimal_generators(point)?
        .into_iter()
        .map(|(p, v)| model.from_vec(&v, &sq.degs, p))
        .collect())
}

/// Stage `p` (1 or 2) of an acyclic closure of `phi`, through homological
/// degree `top`.
pub fn tate_stage(phi: &Surjection, p: u8, top: usize, point: &Point, slack: i64) -> Result<TateStage> {
    let gens = kernel_generators(phi, point, true)?;
    let r = phi.source().clone();
    match p {
        1 => {
            let c = gens.len();
            TateStage::new(r, gens, Vec::new(), top.min(c))
        }
        2 => {
            let cycles = koszul_h1_generators(&r, &gens, &phi.source_point(point), slack)?;
            TateStage::new(r, gens, cycles, top)
        }
        _ => Err(Error::Invalid("only stages 1 and 2 are built".into())),
    }
}

pub fn deviations(phi: &Surjection, point: &Point, slack: i64) -> Result<Deviations> {
    let gens = kernel_generators(phi, point, true)?;
    let h1 = koszul_h1_generators(phi.source(), &gens, &phi.source_point(point), slack)?;
    Ok(Deviations {
        eps2: gens.len(),
        eps3: h1.len(),
    })
}

/// Chain map `G -> F` lifting the identity of `G_0 = F_0`, through degree
/// `top` (or the shorter complex).
pub fn comparison_morphism(g: &FreeComplex, f: &FreeComplex, top: usize) -> Result<Vec<PolyMatrix>> {
    if g.start() != 0 || f.start() != 0 || g.degrees(0) != f.degrees(0) {
        return Err(Error::LiftFailure("both complexes must start from the same F_0".into()));
    }
    let base = g.base();
    let ring = base.ring();
    let model = Model::choose(base, g.is_homogeneous() && f.is_homogeneous())?;
    let mut gamma = vec![PolyMatrix::identity(ring, g.rank(0))];
    let last = (g.end().max(0) as usize).min(top);
    for n in 1..=last {
        let n_i = n as i64;
        let src = g.degrees(n_i);
        let Some(dg) = g.differential(n_i) else { break };
        let target = gamma[n - 1].mul(base, dg);
        let fdegs = f.degrees(n_i).to_vec();
        let below = f.degrees(n_i - 1).to_vec();
        let mut cols = Vec::with_capacity(src.len());
        for (j, &deg) in src.iter().enumerate() {
            let t = target.column(j);
            if t.iter().all(|p| p.is_zero()) {
                cols.push(vec![ring.zero(); fdegs.len()]);
                continue;
            }
            let piece = if model.is_graded() { Some(deg) } else { None };
            let df = f
                .differential(n_i)
                .ok_or_else(|| Error::LiftFailure(format!("F ends before degree {n}")))?;
            let a = model.expand_at(df, &fdegs, &below, piece)?;
            let rhs = model.to_vec(&t, &below, piece)?;
            let v = a
                .solve(&model.arith, &rhs)
                .ok_or_else(|| Error::LiftFailure(format!("no lift in degree {n}")))?;
            cols.push(model.from_vec(&v, &fdegs, piece));
        }
        gamma.push(PolyMatrix::from_columns(fdegs.len(), cols));
    }
    Ok(gamma)
}

/// Rank of `k (x) m` for a matrix over a graded algebra.
fn residue_rank(pres: &AlgebraPresentation, m: &PolyMatrix) -> usize {
    let arith = Arith::of(pres.coeffs());
    let cols: Vec<SVec> = (0..m.cols())
        .map(|j| {
            (0..m.rows())
                .filter_map(|i| {
                    let c = pres.normal_form(m.get(i, j)).constant_term();
                    (c != Default::default()).then_some((i, c))
                })
                .collect()
        })
        .collect();
    Columns::new(m.rows(), cols).rank(&arith)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    pub rank_g: usize,
    pub rank_f: usize,
    pub rank_image: usize,
    pub injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosednessCertificate {
    pub p: u8,
    pub cutoff: usize,
    /// Highest homological degree compared.
    pub checked_through: usize,
    pub eps2: usize,
    pub eps3: usize,
    pub stage_minimal: bool,
    pub degrees: Vec<DegreeCheck>,
    /// Single-degree test in degree `eps2` (stage 1 only).
    pub socle: Option<DegreeCheck>,
    /// The all-degrees comparison stops below `eps2`.
    pub truncated: bool,
    pub closed: bool,
}

/// Whether `phi` is `p`-closed. For `p = 2` the cutoff bounds the total
/// divided-power weight, so homological degrees through `2 * cutoff + 1`
/// are compared; for `p = 1` the socle degree decides and the remaining
/// degrees through `cutoff` are a cross-check.
pub fn is_p_closed(phi: &Surjection, p: u8, cutoff: usize, slack: i64) -> Result<ClosednessCertificate> {
    if !phi.is_graded() {
        return Err(Error::UnsupportedBase("closedness is computed for graded maps over a field".into()));
    }
    let point = Point::Irrelevant;
    let gens = kernel_generators(phi, &point, true)?;
    let c = gens.len();
    let top = match p {
        1 => c,
        2 => 2 * cutoff + 1,
        _ => return Err(Error::Invalid("p must be 1 or 2".into())),
    };
    let g = tate_stage(phi, p, top, &point, slack)?;
    let r = phi.source().clone();
    let s_module = CoefficientModule::new(
        r.clone(),
        vec![0],
        PolyMatrix::from_columns(1, gens.iter().map(|k| vec![k.clone()]).collect()),
    )?;
    let f = minimal_free_resolution(&s_module, top, slack)?;
    let gamma = comparison_morphism(g.complex(), &f, top)?;
    let check = |n: usize| -> DegreeCheck {
        let rank_g = g.words(n).len();
        let rank_image = gamma.get(n).map(|m| residue_rank(&r, m)).unwrap_or(0);
        DegreeCheck {
            degree: n,
            rank_g,
            rank_f: f.rank(n as i64),
            rank_image,
            injective: rank_image == rank_g,
        }
    };
    let stage_minimal = g.complex().is_minimal(&point)?;
    let (checked_through, socle) = match p {
        1 => (cutoff.min(c), Some(check(c))),
        _ => (top, None),
    };
    let degrees: Vec<DegreeCheck> = (0..=checked_through).map(check).collect();
    let closed = stage_minimal
        && match &socle {
            Some(s) => s.injective,
            None => degrees.iter().all(|d| d.injective),
        };
    Ok(ClosednessCertificate {
        p,
        cutoff,
        checked_through,
        eps2: c,
        eps3: g.cycles().len(),
        stage_minimal,
        degrees,
        socle,
        truncated: p == 1 && cutoff < c,
        closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::DEFAULT_SLACK;

    fn quotient(src: &str, kernel: &[&str]) -> Surjection {
        let r = Arc::new(AlgebraPresentation::from_toml(src).unwrap());
        let k = kernel.iter().map(|s| r.parse_element(s).unwrap()).collect();
        Surjection::quotient(r, k).unwrap()
    }

    fn campillo() -> Surjection {
        quotient("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = [\"x^2\", \"x*y\"]\n", &["y^2"])
    }

    #[test]
    fn deviation_examples() {
        let id = quotient("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n", &[]);
        assert_eq!(deviations(&id, &Point::Irrelevant, DEFAULT_SLACK).unwrap(), Deviations { eps2: 0, eps3: 0 });
        let cube = quotient("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n", &["x^3"]);
        assert_eq!(deviations(&cube, &Point::Irrelevant, DEFAULT_SLACK).unwrap(), Deviations { eps2: 1, eps3: 0 });
        assert_eq!(deviations(&campillo(), &Point::Irrelevant, DEFAULT_SLACK).unwrap(), Deviations { eps2: 1, eps3: 1 });
    }

    #[test]
    fn redundant_kernel_generators() {
        let phi = quotient("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = []\n", &["x", "y", "x + y", "x*y"]);
        let g = kernel_generators(&phi, &Point::Irrelevant, true).unwrap();
        assert_eq!(g.len(), 2);
        assert!(matches!(
            kernel_generators(&phi, &Point::Irrelevant, false),
            Err(Error::NonMinimalGenerators(_))
        ));
    }

    #[test]
    fn dual_numbers_stage_two() {
        let phi = quotient("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n", &["x"]);
        let g = tate_stage(&phi, 2, 6, &Point::Irrelevant, DEFAULT_SLACK).unwrap();
        assert_eq!(g.complex().ranks(), vec![1; 7]);
        let r = phi.source();
        assert_eq!(g.cycles(), &[vec![r.parse_element("x").unwrap()]]);
        for n in 1..=5 {
            assert!(g.complex().homology(n, &Default::default()).unwrap().is_zero());
        }
    }

    #[test]
    fn campillo_comparison() {
        let phi = campillo();
        let g = tate_stage(&phi, 2, 3, &Point::Irrelevant, DEFAULT_SLACK).unwrap();
        let r = phi.source().clone();
        let s = CoefficientModule::new(
            r.clone(),
            vec![0],
            PolyMatrix::from_columns(1, vec![vec![r.parse_element("y^2").unwrap()]]),
        )
        .unwrap();
        let f = minimal_free_resolution(&s, 3, DEFAULT_SLACK).unwrap();
        let gamma = comparison_morphism(g.complex(), &f, 3).unwrap();
        assert_eq!(gamma[1].to_strings(r.ring()), vec![vec!["1".to_string()]]);
        assert_eq!(
            gamma[3].to_strings(r.ring()),
            vec![vec!["0".to_string()], vec!["y".to_string()]]
        );
        // chain map
        for n in 1..=3i64 {
            let lhs = f.differential(n).unwrap().mul(&r, &gamma[n as usize]);
            let rhs = gamma[n as usize - 1].mul(&r, g.complex().differential(n).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn campillo_closedness() {
        let phi = campillo();
        let one = is_p_closed(&phi, 1, 4, DEFAULT_SLACK).unwrap();
        assert!(one.closed);
        assert_eq!(one.socle.as_ref().unwrap().degree, 1);
        let two = is_p_closed(&phi, 2, 2, DEFAULT_SLACK).unwrap();
        assert!(!two.closed);
        assert!(two.stage_minimal);
        assert!(!two.degrees[3].injective);
    }

    #[test]
    fn complete_intersection_is_closed() {
        let phi = quotient("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n", &["x^2"]);
        for p in [1, 2] {
            for cutoff in 1..4 {
                assert!(is_p_closed(&phi, p, cutoff, DEFAULT_SLACK).unwrap().closed);
            }
        }
    }
}
