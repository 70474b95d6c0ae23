//! Bounded complexes of finitely generated modules over a presented algebra.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::descriptor::ModuleDescriptor;
use crate::error::{Error, Result};
use crate::linalg::Space;
use crate::matrix::PolyMatrix;
use crate::model::{Model, Piece, Point, Subquotient};
use crate::module::CoefficientModule;
use crate::ring::{AlgebraPresentation, RingMap};

/// Default number of internal degrees examined above the generators of a
/// term when the base is graded of positive dimension.
pub const DEFAULT_SLACK: i64 = 6;

#[derive(Clone, Debug)]
pub struct HomologyOptions {
    pub slack: i64,
    pub point: Option<Point>,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions {
            slack: DEFAULT_SLACK,
            point: None,
        }
    }
}

/// Complex of finite free modules `C_start <- ... <- C_end`, zero outside.
/// Basis elements carry internal degrees.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    base: Arc<AlgebraPresentation>,
    start: i64,
    modules: Vec<Vec<i64>>,
    diffs: Vec<PolyMatrix>,
    cohomological: bool,
}

impl FreeComplex {
    /// `modules[k]` are the degrees of `C_{start+k}`; `diffs[k]` is
    /// `C_{start+k+1} -> C_{start+k}`.
    pub fn new(
        base: Arc<AlgebraPresentation>,
        start: i64,
        modules: Vec<Vec<i64>>,
        diffs: Vec<PolyMatrix>,
    ) -> Result<Self> {
        let c = Self::new_unchecked(base, start, modules, diffs)?;
        c.check_square_zero()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        base: Arc<AlgebraPresentation>,
        start: i64,
        modules: Vec<Vec<i64>>,
        diffs: Vec<PolyMatrix>,
    ) -> Result<Self> {
        if diffs.len() + 1 != modules.len().max(1) {
            return Err(Error::InvalidComplex("one differential between consecutive terms".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != modules[k].len() || d.cols() != modules[k + 1].len() {
                return Err(Error::InvalidComplex(format!(
                    "differential out of degree {} has the wrong shape",
                    start + k as i64 + 1
                )));
            }
        }
        let diffs = diffs.into_iter().map(|d| d.map(|p| base.normal_form(p))).collect();
        Ok(FreeComplex {
            base,
            start,
            modules,
            diffs,
            cohomological: false,
        })
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            if !self.diffs[k - 1].mul(&self.base, &self.diffs[k]).is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "d_{} d_{} is not zero",
                    self.start + k as i64,
                    self.start + k as i64 + 1
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<AlgebraPresentation> {
        &self.base
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Highest degree with a (possibly empty) term.
    pub fn end(&self) -> i64 {
        self.start + self.modules.len() as i64 - 1
    }

    pub fn is_cohomological(&self) -> bool {
        self.cohomological
    }

    pub fn degrees(&self, n: i64) -> &[i64] {
        if n < self.start || n > self.end() {
            return &[];
        }
        &self.modules[(n - self.start) as usize]
    }

    pub fn rank(&self, n: i64) -> usize {
        self.degrees(n).len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.len()).collect()
    }

    /// `d_n : C_n -> C_{n-1}`.
    pub fn differential(&self, n: i64) -> Option<&PolyMatrix> {
        let k = n - self.start - 1;
        if k < 0 {
            return None;
        }
        self.diffs.get(k as usize)
    }

    /// Keeps degrees `<= top`.
    pub fn truncate(&self, top: i64) -> FreeComplex {
        let keep = ((top - self.start + 1).max(0) as usize).min(self.modules.len());
        FreeComplex {
            base: self.base.clone(),
            start: self.start,
            modules: self.modules[..keep].to_vec(),
            diffs: self.diffs[..keep.saturating_sub(1)].to_vec(),
            cohomological: self.cohomological,
        }
    }

    /// `C[j]`: `(C[j])_n = C_{n-j}` with differential `(-1)^j d`.
    pub fn shift(&self, j: i64) -> FreeComplex {
        let ring = self.base.ring();
        FreeComplex {
            base: self.base.clone(),
            start: self.start + j,
            modules: self.modules.clone(),
            diffs: self
                .diffs
                .iter()
                .map(|d| if j % 2 == 0 { d.clone() } else { d.neg(ring) })
                .collect(),
            cohomological: self.cohomological,
        }
    }

    /// Base change along `map : base -> T`.
    pub fn tensor_over_base(&self, map: &RingMap) -> Result<FreeComplex> {
        if **map.source() != *self.base {
            return Err(Error::Invalid("ring map does not start at the base of the complex".into()));
        }
        Ok(FreeComplex {
            base: map.target().clone(),
            start: self.start,
            modules: self.modules.clone(),
            diffs: self.diffs.iter().map(|d| d.apply_ring_map(map)).collect(),
            cohomological: self.cohomological,
        })
    }

    /// `Hom(C, base)` as a chain complex: `D_{-n} = C_n^*`.
    pub fn hom_dual(&self) -> FreeComplex {
        let modules: Vec<Vec<i64>> = self
            .modules
            .iter()
            .rev()
            .map(|m| m.iter().map(|d| -d).collect())
            .collect();
        let diffs = self.diffs.iter().rev().map(|d| d.transpose()).collect();
        FreeComplex {
            base: self.base.clone(),
            start: -self.end(),
            modules,
            diffs,
            cohomological: !self.cohomological,
        }
    }

    /// Every differential has entries in the maximal ideal.
    pub fn is_minimal(&self, point: &Point) -> Result<bool> {
        let model = Model::choose(&self.base, self.is_homogeneous())?;
        for d in &self.diffs {
            for (_, _, p) in d.entries() {
                if !p.is_zero() && !model.in_ideal(p, point)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_homogeneous(&self) -> bool {
        let ring = self.base.ring();
        self.diffs
            .iter()
            .enumerate()
            .all(|(k, d)| d.is_homogeneous(ring, &self.modules[k + 1], &self.modules[k]))
    }

    pub fn homology(&self, n: i64, opts: &HomologyOptions) -> Result<ModuleDescriptor> {
        ModuleComplex::from_free(self).homology(n, opts)
    }

    pub fn to_json(&self) -> Value {
        let ring = self.base.ring();
        let diffs: Vec<Value> = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                json!({
                    "from": self.start + k as i64 + 1,
                    "matrix": d.to_strings(ring),
                })
            })
            .collect();
        json!({
            "base": self.base.to_toml(),
            "start": self.start,
            "cohomological": self.cohomological,
            "ranks": self.ranks(),
            "degrees": self.modules,
            "differentials": diffs,
        })
    }

    pub fn to_text(&self) -> String {
        let ring = self.base.ring();
        let mut s = format!(
            "complex over {}[{}]/({})\n",
            self.base.coeffs().label(),
            ring.names().join(", "),
            self.base.relation_strings().join(", ")
        );
        for (k, m) in self.modules.iter().enumerate() {
            let deg: Vec<String> = m.iter().map(|d| d.to_string()).collect();
            s.push_str(&format!(
                "  C_{} = R^{}  degrees [{}]\n",
                self.start + k as i64,
                m.len(),
                deg.join(", ")
            ));
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let n = self.start + k as i64 + 1;
            s.push_str(&format!("  d_{n} : C_{n} -> C_{}\n", n - 1));
            for row in d.to_strings(ring) {
                s.push_str(&format!("    [ {} ]\n", row.join(", ")));
            }
        }
        s
    }
}

/// One term of a [`ModuleComplex`]: `coker(relations)` on a free module.
#[derive(Clone, Debug)]
pub struct ModuleTerm {
    pub degrees: Vec<i64>,
    pub relations: PolyMatrix,
    pub relation_degrees: Vec<i64>,
}

impl ModuleTerm {
    fn free(degrees: Vec<i64>) -> Self {
        let n = degrees.len();
        ModuleTerm {
            degrees,
            relations: PolyMatrix::zeros(n, 0),
            relation_degrees: Vec::new(),
        }
    }
}

/// Complex of finitely presented modules; differentials are given on the
/// free covers and must respect the relations.
#[derive(Clone, Debug)]
pub struct ModuleComplex {
    base: Arc<AlgebraPresentation>,
    start: i64,
    terms: Vec<ModuleTerm>,
    diffs: Vec<PolyMatrix>,
}

impl ModuleComplex {
    pub fn from_free(c: &FreeComplex) -> Self {
        ModuleComplex {
            base: c.base.clone(),
            start: c.start,
            terms: c.modules.iter().cloned().map(ModuleTerm::free).collect(),
            diffs: c.diffs.clone(),
        }
    }

    /// `C ⊗ M` for a complex over the base of `M`.
    pub fn tensor(c: &FreeComplex, m: &CoefficientModule) -> Self {
        let b = m.rank();
        let terms = c
            .modules
            .iter()
            .map(|degs| ModuleTerm {
                degrees: degs
                    .iter()
                    .flat_map(|s| m.degrees.iter().map(move |g| s + g))
                    .collect(),
                relations: m.relations.identity_kron(degs.len()),
                relation_degrees: degs
                    .iter()
                    .flat_map(|s| m.relation_degrees.iter().map(move |g| s + g))
                    .collect(),
            })
            .collect();
        ModuleComplex {
            base: c.base.clone(),
            start: c.start,
            terms,
            diffs: c.diffs.iter().map(|d| d.kron_identity(b)).collect(),
        }
    }

    /// `Hom(C, M)` as a chain complex in degrees `-end..=-start`.
    pub fn hom(c: &FreeComplex, m: &CoefficientModule) -> Self {
        let b = m.rank();
        let terms = c
            .modules
            .iter()
            .rev()
            .map(|degs| ModuleTerm {
                degrees: degs
                    .iter()
                    .flat_map(|s| m.degrees.iter().map(move |g| g - s))
                    .collect(),
                relations: m.relations.identity_kron(degs.len()),
                relation_degrees: degs
                    .iter()
                    .flat_map(|s| m.relation_degrees.iter().map(move |g| g - s))
                    .collect(),
            })
            .collect();
        ModuleComplex {
            base: c.base.clone(),
            start: -c.end(),
            terms,
            diffs: c
                .diffs
                .iter()
                .rev()
                .map(|d| d.transpose().kron_identity(b))
                .collect(),
        }
    }

    pub fn base(&self) -> &Arc<AlgebraPresentation> {
        &self.base
    }

    fn term(&self, n: i64) -> Option<&ModuleTerm> {
        if n < self.start {
            return None;
        }
        self.terms.get((n - self.start) as usize)
    }

    pub fn term_degrees(&self, n: i64) -> Vec<i64> {
        self.term(n).map(|t| t.degrees.clone()).unwrap_or_default()
    }

    fn diff(&self, n: i64) -> Option<&PolyMatrix> {
        let k = n - self.start - 1;
        if k < 0 {
            return None;
        }
        self.diffs.get(k as usize)
    }

    pub fn is_homogeneous(&self) -> bool {
        let ring = self.base.ring();
        self.terms
            .iter()
            .all(|t| t.relations.is_homogeneous(ring, &t.relation_degrees, &t.degrees))
            && self.diffs.iter().enumerate().all(|(k, d)| {
                d.is_homogeneous(ring, &self.terms[k + 1].degrees, &self.terms[k].degrees)
            })
    }

    pub fn model(&self) -> Result<Model> {
        Model::choose(&self.base, self.is_homogeneous())
    }

    /// Cycles and boundaries in degree `n`, piece by piece.
    pub fn cycles_boundaries<'m>(&self, model: &'m Model, n: i64, slack: i64) -> Result<Subquotient<'m>> {
        let pieces = model.window(&self.term_degrees(n), slack);
        self.cycles_boundaries_on(model, n, pieces)
    }

    /// As [`ModuleComplex::cycles_boundaries`], on the given pieces.
    pub fn cycles_boundaries_on<'m>(&self, model: &'m Model, n: i64, pieces: Vec<Piece>) -> Result<Subquotient<'m>> {
        let Some(t) = self.term(n) else {
            return Ok(Subquotient {
                model,
                degs: Vec::new(),
                pieces: Vec::new(),
                z: Vec::new(),
                b: Vec::new(),
            });
        };
        let below = self.term(n - 1);
        let above = self.term(n + 1);
        let arith = &model.arith;
        let mut z = Vec::with_capacity(pieces.len());
        let mut b = Vec::with_capacity(pieces.len());
        for &p in &pieces {
            let len = model.layout(&t.degrees, p).len;
            let zp = match (self.diff(n), below) {
                (Some(d), Some(lo)) => {
                    let a = model.expand_at(d, &t.degrees, &lo.degrees, p)?;
                    let rel = model
                        .expand_at(&lo.relations, &lo.relation_degrees, &lo.degrees, p)?
                        .image(arith);
                    a.preimage(arith, &rel)
                }
                _ => Space::full(arith, len),
            };
            let mut bp = model
                .expand_at(&t.relations, &t.relation_degrees, &t.degrees, p)?
                .image(arith);
            if let (Some(d), Some(hi)) = (self.diff(n + 1), above) {
                let img = model.expand_at(d, &hi.degrees, &t.degrees, p)?;
                for c in img.cols {
                    bp.add(c);
                }
            }
            z.push(zp);
            b.push(bp);
        }
        Ok(Subquotient {
            model,
            degs: t.degrees.clone(),
            pieces,
            z,
            b,
        })
    }

    pub fn homology(&self, n: i64, opts: &HomologyOptions) -> Result<ModuleDescriptor> {
        let model = self.model()?;
        let sq = self.cycles_boundaries(&model, n, opts.slack)?;
        if sq.pieces.is_empty() {
            return Ok(ModuleDescriptor::zero());
        }
        sq.descriptor(opts.point.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::Shape;

    fn pres(s: &str) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::from_toml(s).unwrap())
    }

    fn row(p: &AlgebraPresentation, entries: &[&str]) -> PolyMatrix {
        PolyMatrix::from_columns(
            1,
            entries.iter().map(|e| vec![p.parse_element(e).unwrap()]).collect(),
        )
    }

    #[test]
    fn koszul_on_x_over_polynomial_ring() {
        let s = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n");
        let c = FreeComplex::new(s.clone(), 0, vec![vec![0], vec![1]], vec![row(&s, &["x"])]).unwrap();
        let opts = HomologyOptions::default();
        assert!(c.homology(1, &opts).unwrap().is_zero());
        let h0 = c.homology(0, &opts).unwrap();
        assert_eq!(h0.to_string(), "graded in [0, 6]: (0:1)");
        assert!(c.is_minimal(&Point::Irrelevant).unwrap());
    }

    #[test]
    fn square_zero_is_enforced() {
        let s = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n");
        let e = FreeComplex::new(
            s.clone(),
            0,
            vec![vec![0], vec![1], vec![2]],
            vec![row(&s, &["x"]), row(&s, &["x"])],
        );
        assert!(matches!(e, Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn periodic_complex_over_zsqrt2() {
        // S <-0- S <-2t- S: homology Z^2, then S/(2t)
        let s = pres("ring = \"Z\"\nvars = [\"t\"]\nrelations = [\"t^2 - 2\"]\n");
        let c = FreeComplex::new(
            s.clone(),
            0,
            vec![vec![0], vec![0], vec![0]],
            vec![row(&s, &["0"]), row(&s, &["2*t"])],
        )
        .unwrap();
        let opts = HomologyOptions {
            point: Some(Point::Ideal(vec![s.parse_element("t").unwrap()])),
            ..Default::default()
        };
        assert_eq!(c.homology(0, &opts).unwrap().to_string(), "Z^2");
        let h1 = c.homology(1, &opts).unwrap();
        assert_eq!(h1.to_string(), "Z/2 + Z/4");
        assert_eq!(h1.minimal_generators, Some(1));
        assert!(c.is_minimal(&Point::Ideal(vec![s.parse_element("t").unwrap()])).unwrap());
    }

    #[test]
    fn dual_and_shift() {
        let s = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n");
        let c = FreeComplex::new(s.clone(), 0, vec![vec![0], vec![1], vec![2]], vec![row(&s, &["x"]), row(&s, &["x"])]).unwrap();
        let d = c.hom_dual();
        assert_eq!(d.start(), -2);
        assert_eq!(d.degrees(-2), &[-2]);
        let opts = HomologyOptions::default();
        assert_eq!(d.homology(-1, &opts).unwrap().shape, Shape::Zero);
        assert_eq!(d.homology(-2, &opts).unwrap().to_string(), "k^1 (-2:1)");
        let sh = c.shift(1);
        assert_eq!(sh.start(), 1);
        assert_eq!(sh.differential(2).unwrap().get(0, 0), &s.parse_element("-x").unwrap());
        assert_eq!(sh.homology(2, &opts).unwrap(), c.homology(1, &opts).unwrap());
    }
}
