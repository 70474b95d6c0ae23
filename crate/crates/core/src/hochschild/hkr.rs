//! The comparison maps between differential forms and Hochschild
//! (co)homology.

use serde::Serialize;
use serde_json::{json, Value};

use crate::descriptor::ModuleDescriptor;
use crate::error::{Error, Result};
use crate::linalg::Space;
use crate::matrix::PolyMatrix;
use crate::model::{Model, Piece, Subquotient};
use crate::module::CoefficientModule;

use super::kahler::{differential_forms, exterior_power};
use super::table::{Direction, Hochschild};

#[derive(Clone, Debug, Serialize)]
pub struct HkrReport {
    pub degree: usize,
    pub direction: Direction,
    /// `Λ^n Ω ⊗ M`, or `Hom(Λ^n Ω, M)` for cohomology.
    pub forms: String,
    pub hochschild: String,
    pub image: Option<String>,
    pub injective: Option<bool>,
    pub surjective: Option<bool>,
    pub bijective: bool,
    /// `chain map` when the map was evaluated on cycles, `descriptor` when
    /// only the isomorphism types were compared.
    pub method: &'static str,
}

impl HkrReport {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "direction": self.direction.label(),
            "forms": self.forms,
            "hochschild": self.hochschild,
            "image": self.image,
            "injective": self.injective,
            "surjective": self.surjective,
            "bijective": self.bijective,
            "method": self.method,
        })
    }
}

fn union(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().chain(b).copied().collect()
}

/// Selection matrix sending `x_I ⊗ e_k` to its word in the resolution.
fn selection(h: &Hochschild, n: usize, b: usize) -> Result<Option<(PolyMatrix, usize)>> {
    let Some(stage) = &h.resolution.stage else { return Ok(None) };
    let ring = h.algebra().ring();
    let words = stage.words(n);
    let v = ring.nvars();
    let forms = exterior_power(h.algebra(), n)?;
    let subsets = super::kahler::subsets(v, n);
    debug_assert_eq!(subsets.len(), forms.rank());
    let mut cols = Vec::new();
    for set in &subsets {
        let w = words
            .iter()
            .position(|w| w.ext == *set && w.dp.iter().all(|&e| e == 0))
            .ok_or_else(|| Error::Invalid("exterior word missing from the resolution".into()))?;
        for k in 0..b {
            let mut col = vec![ring.zero(); words.len() * b];
            col[w * b + k] = ring.one();
            cols.push(col);
        }
    }
    Ok(Some((PolyMatrix::from_columns(words.len() * b, cols), subsets.len())))
}

fn image_space(model: &Model, m: &PolyMatrix, src: &[i64], tgt: &[i64], p: Piece) -> Result<Space> {
    Ok(model.expand_at(m, src, tgt, p)?.image(&model.arith))
}

fn finish(
    n: usize,
    direction: Direction,
    forms: ModuleDescriptor,
    hh: ModuleDescriptor,
    image: Option<(ModuleDescriptor, bool, bool)>,
) -> HkrReport {
    match image {
        Some((img, surjective, injective)) => HkrReport {
            degree: n,
            direction,
            forms: forms.to_string(),
            hochschild: hh.to_string(),
            image: Some(img.to_string()),
            injective: Some(injective),
            surjective: Some(surjective),
            bijective: injective && surjective,
            method: "chain map",
        },
        None => HkrReport {
            degree: n,
            direction,
            forms: forms.to_string(),
            hochschild: hh.to_string(),
            image: None,
            injective: None,
            surjective: None,
            bijective: forms.agrees(&hh),
            method: "descriptor",
        },
    }
}

/// The map `Λ^n Ω ⊗ M -> HH_n(S, M)` or `HH^n(S, M) -> Hom(Λ^n Ω, M)`.
///
/// Injectivity compares isomorphism types of source and image, which
/// suffices for noetherian modules and for graded pieces.
pub fn hkr_map(h: &Hochschild, direction: Direction, m: &CoefficientModule, n: usize) -> Result<HkrReport> {
    match direction {
        Direction::Homology => homology_map(h, m, n),
        Direction::Cohomology => cohomology_map(h, m, n),
    }
}

fn homology_map(h: &Hochschild, m: &CoefficientModule, n: usize) -> Result<HkrReport> {
    let forms = differential_forms(h.algebra(), n, m)?;
    let mc = h.complex(Direction::Homology, m);
    let model = mc.model()?;
    let k = Hochschild::index(Direction::Homology, n);
    let tgt = mc.term_degrees(k);
    let pieces = model.window(&union(&tgt, &forms.degrees), h.slack);
    let sq = mc.cycles_boundaries_on(&model, k, pieces.clone())?;
    let hh = if tgt.is_empty() { ModuleDescriptor::zero() } else { sq.descriptor(None)? };
    let src = Subquotient {
        model: &model,
        degs: forms.degrees.clone(),
        pieces: pieces.clone(),
        z: pieces
            .iter()
            .map(|&p| Space::full(&model.arith, model.layout(&forms.degrees, p).len))
            .collect(),
        b: pieces
            .iter()
            .map(|&p| image_space(&model, &forms.relations, &forms.relation_degrees, &forms.degrees, p))
            .collect::<Result<_>>()?,
    };
    let forms_d = src.descriptor(None)?;
    let Some((lambda, _)) = selection(h, n, m.rank())? else {
        return Ok(finish(n, Direction::Homology, forms_d, hh, None));
    };
    if tgt.is_empty() {
        let zero = forms_d.is_zero();
        return Ok(finish(n, Direction::Homology, forms_d, hh, Some((ModuleDescriptor::zero(), true, zero))));
    }
    let mut surjective = true;
    let mut z = Vec::with_capacity(pieces.len());
    for (i, &p) in pieces.iter().enumerate() {
        let span = image_space(&model, &lambda, &forms.degrees, &tgt, p)?.sum(&sq.b[i]);
        surjective &= span.contains_space(&sq.z[i]);
        z.push(span);
    }
    let image = Subquotient {
        model: &model,
        degs: tgt.clone(),
        pieces,
        z,
        b: sq.b.clone(),
    }
    .descriptor(None)?;
    let injective = image == forms_d;
    Ok(finish(n, Direction::Homology, forms_d, hh, Some((image, surjective, injective))))
}

fn cohomology_map(h: &Hochschild, m: &CoefficientModule, n: usize) -> Result<HkrReport> {
    let lam = exterior_power(h.algebra(), n)?;
    let b = m.rank();
    let shift = |degs: &[i64], by: &[i64]| -> Vec<i64> {
        by.iter().flat_map(|s| degs.iter().map(move |g| g - s)).collect()
    };
    // Hom(Λ, M) inside M^{#I}, cut out by the relations of Λ
    let hom_degs = shift(&m.degrees, &lam.degrees);
    let hom_rel_degs = shift(&m.relation_degrees, &lam.degrees);
    let cond_degs = shift(&m.degrees, &lam.relation_degrees);
    let cond_rel_degs = shift(&m.relation_degrees, &lam.relation_degrees);
    let cond = lam.relations.transpose().kron_identity(b);
    let hom_rel = m.relations.identity_kron(lam.rank());
    let cond_rel = m.relations.identity_kron(lam.relations.cols());

    let mc = h.complex(Direction::Cohomology, m);
    let model = mc.model()?;
    let k = Hochschild::index(Direction::Cohomology, n);
    let tgt = mc.term_degrees(k);
    let pieces = model.window(&union(&tgt, &hom_degs), h.slack);
    let sq = mc.cycles_boundaries_on(&model, k, pieces.clone())?;
    let hh = if tgt.is_empty() { ModuleDescriptor::zero() } else { sq.descriptor(None)? };

    let arith = &model.arith;
    let mut zh = Vec::with_capacity(pieces.len());
    let mut bh = Vec::with_capacity(pieces.len());
    for &p in &pieces {
        let len = model.layout(&hom_degs, p).len;
        let bp = if hom_rel.cols() > 0 {
            image_space(&model, &hom_rel, &hom_rel_degs, &hom_degs, p)?
        } else {
            Space::zero(arith, len)
        };
        let zp = if cond.cols() > 0 && cond.rows() > 0 {
            let target = if cond_rel.cols() > 0 {
                image_space(&model, &cond_rel, &cond_rel_degs, &cond_degs, p)?
            } else {
                Space::zero(arith, model.layout(&cond_degs, p).len)
            };
            model.expand_at(&cond, &hom_degs, &cond_degs, p)?.preimage(arith, &target)
        } else {
            Space::full(arith, len)
        };
        zh.push(zp);
        bh.push(bp);
    }
    let forms_d = Subquotient {
        model: &model,
        degs: hom_degs.clone(),
        pieces: pieces.clone(),
        z: zh.clone(),
        b: bh.clone(),
    }
    .descriptor(None)?;
    let Some((lambda, _)) = selection(h, n, b)? else {
        return Ok(finish(n, Direction::Cohomology, forms_d, hh, None));
    };
    if tgt.is_empty() {
        let zero = forms_d.is_zero();
        return Ok(finish(n, Direction::Cohomology, forms_d, hh, Some((ModuleDescriptor::zero(), zero, true))));
    }
    // restriction to the exterior words
    let pi = lambda.transpose();
    let mut surjective = true;
    let mut z = Vec::with_capacity(pieces.len());
    for (i, &p) in pieces.iter().enumerate() {
        let a = model.expand_at(&pi, &tgt, &hom_degs, p)?;
        let mut span = bh[i].clone();
        for v in sq.z[i].basis() {
            span.add(a.apply(arith, &v));
        }
        surjective &= span.contains_space(&zh[i]);
        z.push(span);
    }
    let image = Subquotient {
        model: &model,
        degs: hom_degs,
        pieces,
        z,
        b: bh,
    }
    .descriptor(None)?;
    let injective = image == hh;
    Ok(finish(n, Direction::Cohomology, forms_d, hh, Some((image, surjective, injective))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::DEFAULT_SLACK;
    use crate::hochschild::diagonal::Strategy;
    use crate::ring::AlgebraPresentation;
    use std::sync::Arc;

    fn pres(s: &str) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::from_toml(s).unwrap())
    }

    #[test]
    fn smooth_polynomial_ring() {
        let s = pres("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = []\n");
        let h = Hochschild::new(&s, Strategy::Koszul, 3, DEFAULT_SLACK).unwrap();
        let m = CoefficientModule::base_module(s.clone());
        for n in 0..=2 {
            for dir in [Direction::Homology, Direction::Cohomology] {
                let r = hkr_map(&h, dir, &m, n).unwrap();
                assert!(r.bijective, "{dir:?} {n}: {r:?}");
                assert_eq!(r.method, "chain map");
            }
        }
    }

    #[test]
    fn dual_numbers_degree_two() {
        let s = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n");
        let h = Hochschild::new(&s, Strategy::Periodic, 3, DEFAULT_SLACK).unwrap();
        let m = CoefficientModule::base_module(s.clone());
        // Ω = S/(2x) dx and HH_1 = S/(2x)
        let r = hkr_map(&h, Direction::Homology, &m, 1).unwrap();
        assert!(r.bijective);
        let r = hkr_map(&h, Direction::Homology, &m, 2).unwrap();
        assert_eq!(r.forms, "0");
        assert_eq!(r.surjective, Some(false));
        assert!(!r.bijective);
    }

    #[test]
    fn descriptor_fallback() {
        let s = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n");
        let h = Hochschild::new(&s, Strategy::Minimal, 3, DEFAULT_SLACK).unwrap();
        let m = CoefficientModule::base_module(s.clone());
        let r = hkr_map(&h, Direction::Homology, &m, 0).unwrap();
        assert_eq!(r.method, "descriptor");
        assert!(r.bijective);
    }
}
