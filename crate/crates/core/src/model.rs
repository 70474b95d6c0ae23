//! Restriction of scalars: free modules over `S` viewed as coefficient-ring
//! modules, either graded piece by graded piece or all at once when `S` is
//! finite over its coefficient ring.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::One;

use crate::descriptor::{ModuleDescriptor, Shape};
use crate::error::{Error, Result};
use crate::linalg::{Arith, Columns, QuotientShape, SVec, Space};
use crate::matrix::PolyMatrix;
use crate::ring::{AlgebraPresentation, Monomial, Polynomial};

/// A maximal ideal of the base: the irrelevant ideal of a graded algebra or
/// an explicit ideal of a finite one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Irrelevant,
    Ideal(Vec<Polynomial>),
}

/// `None` is the whole module; `Some(d)` its degree-`d` piece.
pub type Piece = Option<i64>;

type Basis = (Arc<Vec<Monomial>>, Arc<HashMap<Monomial, usize>>);

pub struct Model {
    pub pres: Arc<AlgebraPresentation>,
    pub arith: Arith,
    graded: bool,
    finite: Option<Basis>,
    cache: Mutex<HashMap<i64, Basis>>,
}

struct Block {
    offset: usize,
    basis: Basis,
}

pub struct Layout {
    blocks: Vec<Block>,
    pub len: usize,
}

fn indexed(monos: Arc<Vec<Monomial>>) -> Basis {
    let idx = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    (monos, Arc::new(idx))
}

impl Model {
    pub fn graded(pres: Arc<AlgebraPresentation>) -> Result<Self> {
        if !pres.is_graded() {
            return Err(Error::NotGraded("relations are not homogeneous".into()));
        }
        Ok(Model {
            arith: Arith::of(pres.coeffs()),
            graded: true,
            finite: None,
            cache: Mutex::new(HashMap::new()),
            pres,
        })
    }

    pub fn finite(pres: Arc<AlgebraPresentation>) -> Result<Self> {
        let basis = pres
            .standard_basis()
            .ok_or_else(|| Error::InfiniteDimensional("the base is not finite over its coefficients".into()))?
            .to_vec();
        Ok(Model {
            arith: Arith::of(pres.coeffs()),
            graded: false,
            finite: Some(indexed(Arc::new(basis))),
            cache: Mutex::new(HashMap::new()),
            pres,
        })
    }

    /// Graded model when the data is homogeneous, otherwise the finite one.
    pub fn choose(pres: &Arc<AlgebraPresentation>, homogeneous: bool) -> Result<Self> {
        if pres.is_graded() && homogeneous {
            Model::graded(pres.clone())
        } else if pres.is_finite() {
            Model::finite(pres.clone())
        } else if pres.is_graded() {
            Err(Error::NotGraded(
                "inhomogeneous maps over an algebra of positive dimension".into(),
            ))
        } else {
            Err(Error::UnsupportedBase(
                "neither graded nor finite over the coefficient ring".into(),
            ))
        }
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    /// Top degree of a finite graded base.
    pub fn top(&self) -> Option<i64> {
        if self.graded {
            self.pres.top_degree()
        } else {
            None
        }
    }

    fn basis(&self, piece: Piece) -> Basis {
        match piece {
            None => self.finite.clone().expect("finite model"),
            Some(d) => {
                if let Some(b) = self.cache.lock().unwrap().get(&d) {
                    return b.clone();
                }
                let b = indexed(self.pres.graded_piece_basis(d).expect("graded"));
                self.cache.lock().unwrap().insert(d, b.clone());
                b
            }
        }
    }

    pub fn layout(&self, degs: &[i64], piece: Piece) -> Layout {
        let mut offset = 0;
        let blocks = degs
            .iter()
            .map(|&g| {
                let basis = self.basis(piece.map(|d| d - g));
                let b = Block { offset, basis };
                offset += b.basis.0.len();
                b
            })
            .collect();
        Layout {
            blocks,
            len: offset,
        }
    }

    /// Pieces covering a module with generators in degrees `degs`.
    pub fn window(&self, degs: &[i64], slack: i64) -> Vec<Piece> {
        if !self.graded {
            return vec![None];
        }
        let (Some(&lo), Some(&hi)) = (degs.iter().min(), degs.iter().max()) else {
            return Vec::new();
        };
        let hi = hi + self.top().unwrap_or(slack);
        (lo..=hi).map(Some).collect()
    }

    pub fn is_exhaustive(&self) -> bool {
        !self.graded || self.top().is_some()
    }

    pub fn to_vec(&self, col: &[Polynomial], degs: &[i64], piece: Piece) -> Result<SVec> {
        let lay = self.layout(degs, piece);
        let mut out = Vec::new();
        for (b, p) in lay.blocks.iter().zip(col) {
            for (m, c) in self.pres.normal_form(p).terms() {
                let k = b.basis.1.get(m).ok_or_else(|| {
                    Error::NotGraded(format!("term {} lies outside the expected degree", self.pres.ring().format_monomial(m)))
                })?;
                out.push((b.offset + k, c.clone()));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    pub fn from_vec(&self, v: &SVec, degs: &[i64], piece: Piece) -> Vec<Polynomial> {
        let lay = self.layout(degs, piece);
        let ring = self.pres.ring();
        let mut terms: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); degs.len()];
        for (i, c) in v {
            let g = lay
                .blocks
                .iter()
                .rposition(|b| b.offset <= *i && !b.basis.0.is_empty())
                .expect("index in range");
            let b = &lay.blocks[g];
            terms[g].push((b.basis.0[i - b.offset].clone(), c.clone()));
        }
        terms.into_iter().map(|t| ring.from_terms(t)).collect()
    }

    /// Coefficient-ring matrix of `m : F(src) -> F(tgt)` from piece
    /// `src_piece` to piece `tgt_piece`.
    pub fn expand(
        &self,
        m: &PolyMatrix,
        src: &[i64],
        tgt: &[i64],
        src_piece: Piece,
        tgt_piece: Piece,
    ) -> Result<Columns> {
        let s = self.layout(src, src_piece);
        let t = self.layout(tgt, tgt_piece);
        let ring = self.pres.ring();
        let mut cols = Vec::with_capacity(s.len);
        for (j, b) in s.blocks.iter().enumerate() {
            for mono in b.basis.0.iter() {
                let mut col: SVec = Vec::new();
                for (i, tb) in t.blocks.iter().enumerate() {
                    let e = m.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    let prod = self
                        .pres
                        .normal_form(&ring.mul_term(e, mono, &BigRational::one()));
                    for (n, c) in prod.terms() {
                        let k = tb.basis.1.get(n).ok_or_else(|| {
                            Error::NotGraded("matrix entry of the wrong degree".into())
                        })?;
                        col.push((tb.offset + k, c.clone()));
                    }
                }
                col.sort_by_key(|(i, _)| *i);
                cols.push(col);
            }
        }
        Ok(Columns::new(t.len, cols))
    }

    /// Degree-preserving expansion.
    pub fn expand_at(&self, m: &PolyMatrix, src: &[i64], tgt: &[i64], piece: Piece) -> Result<Columns> {
        self.expand(m, src, tgt, piece, piece)
    }

    /// Generators of the maximal ideal.
    pub fn ideal_generators(&self, point: &Point) -> Result<Vec<Polynomial>> {
        match (point, self.graded) {
            (_, true) => Ok((0..self.pres.nvars()).map(|i| self.pres.ring().var(i)).collect()),
            (Point::Ideal(g), false) => Ok(g.clone()),
            (Point::Irrelevant, false) => {
                if self.pres.is_graded() {
                    Ok((0..self.pres.nvars()).map(|i| self.pres.ring().var(i)).collect())
                } else {
                    Err(Error::NoMaximalIdeal(
                        "an ungraded base needs an explicit maximal ideal".into(),
                    ))
                }
            }
        }
    }

    /// Whether `p` lies in the maximal ideal.
    pub fn in_ideal(&self, p: &Polynomial, point: &Point) -> Result<bool> {
        let p = self.pres.normal_form(p);
        if self.graded || matches!(point, Point::Irrelevant) {
            if !self.pres.is_graded() {
                return Err(Error::NoMaximalIdeal("no maximal ideal given".into()));
            }
            return Ok(p.constant_term() == BigRational::default());
        }
        let gens = self.ideal_generators(point)?;
        let col = PolyMatrix::from_columns(1, gens.into_iter().map(|g| vec![g]).collect());
        let span = self.expand_at(&col, &vec![0; col.cols()], &[0], None)?.image(&self.arith);
        Ok(span.contains(&self.to_vec(&[p], &[0], None)?))
    }
}

/// `Z / B` with both given piece by piece inside `F(degs)`.
pub struct Subquotient<'a> {
    pub model: &'a Model,
    pub degs: Vec<i64>,
    pub pieces: Vec<Piece>,
    pub z: Vec<Space>,
    pub b: Vec<Space>,
}

impl<'a> Subquotient<'a> {
    pub fn shape(&self) -> Shape {
        let m = self.model;
        if !m.is_graded() {
            return match self.z.first().map(|z| z.quotient(&self.b[0])) {
                None => Shape::Zero,
                Some(QuotientShape::Dimension(dim)) => Shape::Vector { dim, by_degree: None },
                Some(QuotientShape::Abelian(f)) => Shape::Abelian(f),
            };
        }
        let mut dims = BTreeMap::new();
        for ((p, z), b) in self.pieces.iter().zip(&self.z).zip(&self.b) {
            if let QuotientShape::Dimension(n) = z.quotient(b) {
                dims.insert(p.unwrap(), n);
            }
        }
        if m.is_exhaustive() {
            Shape::Vector {
                dim: dims.values().sum(),
                by_degree: Some(dims),
            }
        } else {
            let lo = self.pieces.first().and_then(|p| *p).unwrap_or(0);
            let hi = self.pieces.last().and_then(|p| *p).unwrap_or(-1);
            Shape::Window { dims, lo, hi }
        }
    }

    fn index_of(&self, d: i64) -> Option<usize> {
        self.pieces.iter().position(|p| *p == Some(d))
    }

    /// Representatives of a minimal generating set, chosen among the
    /// echelon bases of `Z`.
    pub fn minimal_generators(&self, point: &Point) -> Result<Vec<(Piece, SVec)>> {
        let candidates: Vec<(Piece, SVec)> = self
            .pieces
            .iter()
            .zip(&self.z)
            .flat_map(|(p, z)| z.basis().into_iter().map(move |v| (*p, v)))
            .collect();
        let chosen = self.select(point, &candidates)?;
        Ok(chosen.into_iter().map(|k| candidates[k].clone()).collect())
    }

    /// Indices of candidates (elements of `Z`, which they must generate)
    /// whose classes form a minimal generating set of `Z / B` at `point`.
    pub fn select(&self, point: &Point, candidates: &[(Piece, SVec)]) -> Result<Vec<usize>> {
        let m = self.model;
        let gens = m.ideal_generators(point)?;
        let ring = m.pres.ring();
        let mult = |g: &Polynomial| PolyMatrix::identity(ring, self.degs.len()).map(|e| ring.mul(e, g));
        let mut out = Vec::new();
        if m.is_graded() {
            for (k, p) in self.pieces.iter().enumerate() {
                let d = p.unwrap();
                let mut cur = self.b[k].clone();
                for (i, g) in gens.iter().enumerate() {
                    let w = ring.weights()[i];
                    let Some(src) = self.index_of(d - w) else { continue };
                    let a = m.expand(&mult(g), &self.degs, &self.degs, Some(d - w), Some(d))?;
                    for v in self.z[src].basis() {
                        cur.add(a.apply(&m.arith, &v));
                    }
                }
                for (idx, (q, v)) in candidates.iter().enumerate() {
                    if *q == *p && !cur.contains(v) {
                        cur.add(v.clone());
                        out.push(idx);
                    }
                }
            }
        } else if let (Some(z), Some(b)) = (self.z.first(), self.b.first()) {
            let mut cur = b.clone();
            for g in &gens {
                let a = m.expand_at(&mult(g), &self.degs, &self.degs, None)?;
                for v in z.basis() {
                    cur.add(a.apply(&m.arith, &v));
                }
            }
            let units: Vec<Columns> = m
                .pres
                .standard_basis()
                .unwrap()
                .iter()
                .map(|s| m.expand_at(&mult(&ring.term(s.clone(), BigRational::one())), &self.degs, &self.degs, None))
                .collect::<Result<_>>()?;
            for (idx, (_, v)) in candidates.iter().enumerate() {
                if !cur.contains(v) {
                    for a in &units {
                        cur.add(a.apply(&m.arith, v));
                    }
                    out.push(idx);
                }
            }
        }
        Ok(out)
    }

    pub fn descriptor(&self, point: Option<&Point>) -> Result<ModuleDescriptor> {
        let mut d = ModuleDescriptor::new(self.shape());
        if let Some(p) = point {
            d.minimal_generators = Some(self.minimal_generators(p)?.len());
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn pres(s: &str) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::from_toml(s).unwrap())
    }

    #[test]
    fn cokernel_of_two_t_is_z2_z4() {
        let s = pres("ring = \"Z\"\nvars = [\"t\"]\nrelations = [\"t^2 - 2\"]\n");
        let m = Model::finite(s.clone()).unwrap();
        let a = PolyMatrix::from_columns(1, vec![vec![s.parse_element("2*t").unwrap()]]);
        let img = m.expand_at(&a, &[0], &[0], None).unwrap().image(&m.arith);
        let full = Space::full(&m.arith, 2);
        let sq = Subquotient {
            model: &m,
            degs: vec![0],
            pieces: vec![None],
            z: vec![full],
            b: vec![img],
        };
        assert_eq!(sq.shape(), Shape::Abelian(vec![BigInt::from(2), BigInt::from(4)]));
        let point = Point::Ideal(vec![s.parse_element("t").unwrap()]);
        assert_eq!(sq.minimal_generators(&point).unwrap().len(), 1);
    }

    #[test]
    fn field_extension_residue_degree() {
        // Q[x]/(x^2-2) at its only point: one generator, two dimensions
        let s = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2 - 2\"]\n");
        let m = Model::finite(s.clone()).unwrap();
        let sq = Subquotient {
            model: &m,
            degs: vec![0, 0],
            pieces: vec![None],
            z: vec![Space::full(&m.arith, 4)],
            b: vec![Space::zero(&m.arith, 4)],
        };
        assert_eq!(sq.minimal_generators(&Point::Ideal(vec![])).unwrap().len(), 2);
        assert_eq!(sq.shape(), Shape::Vector { dim: 4, by_degree: None });
    }

    #[test]
    fn graded_generators_of_the_maximal_ideal() {
        let s = pres("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = []\n");
        let m = Model::graded(s.clone()).unwrap();
        let gens = PolyMatrix::from_columns(1, vec![vec![s.ring().var(0)], vec![s.ring().var(1)]]);
        let pieces = m.window(&[0], 4);
        let z: Vec<Space> = pieces
            .iter()
            .map(|p| m.expand_at(&gens, &[1, 1], &[0], *p).unwrap().image(&m.arith))
            .collect();
        let b = pieces.iter().map(|p| Space::zero(&m.arith, m.layout(&[0], *p).len)).collect();
        let sq = Subquotient { model: &m, degs: vec![0], pieces, z, b };
        assert_eq!(sq.minimal_generators(&Point::Irrelevant).unwrap().len(), 2);
        match sq.shape() {
            Shape::Window { dims, lo, hi } => {
                assert_eq!((lo, hi), (0, 4));
                assert_eq!(dims[&1], 2);
                assert_eq!(dims[&4], 5);
            }
            s => panic!("{s:?}"),
        }
    }
}
