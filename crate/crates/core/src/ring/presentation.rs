use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed};
use serde::Deserialize;

use super::coeff::{CoeffRing, Coefficient};
use super::groebner::{groebner_basis, is_groebner, reduce};
use super::poly::{Monomial, PolyRing, Polynomial};
use crate::error::{Error, Result};

#[derive(Default)]
struct Caches {
    nf: Mutex<HashMap<Monomial, Polynomial>>,
    pieces: Mutex<HashMap<i64, Arc<Vec<Monomial>>>>,
}

/// `K[x_1..x_v] / I`, with `I` stored as a reduced Gröbner basis.
///
/// Over `Z` only presentations whose relations have unit leading
/// coefficients and pairwise coprime leading monomials, one pure power per
/// variable, are accepted; these are finite free `Z`-modules.
pub struct AlgebraPresentation {
    ring: PolyRing,
    relations: Vec<Polynomial>,
    declared_degrees: bool,
    name: Option<String>,
    kernel: Vec<Polynomial>,
    points: Vec<Vec<Polynomial>>,
    standard: Option<Vec<Monomial>>,
    caches: Caches,
}

impl fmt::Debug for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraPresentation")
            .field("ring", &self.ring.coeffs().label())
            .field("vars", &self.ring.names())
            .field("relations", &self.relation_strings())
            .finish()
    }
}

impl PartialEq for AlgebraPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.relations == other.relations
            && self.declared_degrees == other.declared_degrees
            && self.kernel == other.kernel
            && self.points == other.points
            && self.name == other.name
    }
}

impl AlgebraPresentation {
    pub fn new(ring: PolyRing, relations: Vec<Polynomial>) -> Result<Self> {
        let relations: Vec<Polynomial> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        let relations = if ring.coeffs().is_field() {
            groebner_basis(&ring, &relations)?
        } else {
            integral_basis(&ring, relations)?
        };
        if relations.iter().any(|r| r.leading().unwrap().0.is_one()) {
            return Err(Error::Invalid("relations generate the unit ideal".into()));
        }
        let mut pres = AlgebraPresentation {
            ring,
            relations,
            declared_degrees: false,
            name: None,
            kernel: Vec::new(),
            points: Vec::new(),
            standard: None,
            caches: Caches::default(),
        };
        pres.standard = pres.compute_standard_basis();
        if !pres.ring.coeffs().is_field() && pres.standard.is_none() {
            return Err(Error::UnsupportedRing(
                "over Z every variable needs a monic relation".into(),
            ));
        }
        Ok(pres)
    }

    /// Polynomial ring with no relations.
    pub fn free(ring: PolyRing) -> Result<Self> {
        Self::new(ring, Vec::new())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_declared_degrees(mut self, declared: bool) -> Self {
        self.declared_degrees = declared;
        self
    }

    /// Records the kernel of a surjection `self -> self / (kernel)`.
    pub fn with_kernel(mut self, kernel: Vec<Polynomial>) -> Self {
        self.kernel = kernel
            .iter()
            .map(|k| self.normal_form(k))
            .filter(|k| !k.is_zero())
            .collect();
        self
    }

    /// Records maximal ideals at which local invariants are evaluated.
    pub fn with_points(mut self, points: Vec<Vec<Polynomial>>) -> Result<Self> {
        let mut out = Vec::new();
        for p in points {
            let gens: Vec<Polynomial> = p.iter().map(|g| self.normal_form(g)).collect();
            if gens.iter().any(|g| {
                g.leading()
                    .map(|(m, c)| m.is_one() && self.ring.coeffs().is_unit(c))
                    .unwrap_or(false)
            }) {
                return Err(Error::Invalid("maximal ideal contains a unit".into()));
            }
            out.push(gens);
        }
        self.points = out;
        Ok(self)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &CoeffRing {
        self.ring.coeffs()
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn kernel(&self) -> &[Polynomial] {
        &self.kernel
    }

    pub fn points(&self) -> &[Vec<Polynomial>] {
        &self.points
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| self.ring.format(r)).collect()
    }

    /// All relations homogeneous for the variable degrees, over a field.
    pub fn is_graded(&self) -> bool {
        self.ring.coeffs().is_field() && self.relations.iter().all(|r| self.ring.is_homogeneous(r))
    }

    pub fn is_finite(&self) -> bool {
        self.standard.is_some()
    }

    pub fn is_monogenic_over_z(&self) -> bool {
        !self.ring.coeffs().is_field() && self.nvars() == 1
    }

    /// Canonical representative of the class of `p`.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        if self.relations.is_empty() {
            return p.clone();
        }
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let nf = self.nf_monomial(m);
            for (n, d) in nf.terms() {
                terms.push((n.clone(), c * d));
            }
        }
        self.ring.from_terms(terms)
    }

    fn nf_monomial(&self, m: &Monomial) -> Polynomial {
        if let Some(p) = self.caches.nf.lock().unwrap().get(m) {
            return p.clone();
        }
        let p = reduce(
            &self.ring,
            &self.ring.term(m.clone(), Coefficient::one()),
            &self.relations,
        );
        self.caches.nf.lock().unwrap().insert(m.clone(), p.clone());
        p
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.normal_form(&self.ring.mul(a, b))
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.ring.add(a, b)
    }

    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.ring.sub(a, b)
    }

    pub fn parse_element(&self, s: &str) -> Result<Polynomial> {
        Ok(self.normal_form(&self.ring.parse(s)?))
    }

    pub fn format(&self, p: &Polynomial) -> String {
        self.ring.format(p)
    }

    fn is_standard(&self, m: &Monomial) -> bool {
        !self
            .relations
            .iter()
            .any(|r| r.leading().unwrap().0.divides(m))
    }

    fn compute_standard_basis(&self) -> Option<Vec<Monomial>> {
        let n = self.nvars();
        for i in 0..n {
            let bounded = self
                .relations
                .iter()
                .any(|r| r.leading().unwrap().0.pure_power_of() == Some(i));
            if !bounded {
                return None;
            }
        }
        let mut seen: BTreeSet<Monomial> = BTreeSet::new();
        let mut frontier = vec![Monomial::one(n)];
        while let Some(m) = frontier.pop() {
            if !self.is_standard(&m) || !seen.insert(m.clone()) {
                continue;
            }
            for i in 0..n {
                frontier.push(m.mul(&Monomial::var(n, i)));
            }
        }
        let mut out: Vec<Monomial> = seen.into_iter().collect();
        out.sort_by(|a, b| self.ring.cmp(a, b));
        Some(out)
    }

    /// Standard monomials in increasing order, when the algebra is finite
    /// over its coefficient ring. The first entry is `1`.
    pub fn standard_basis(&self) -> Option<&[Monomial]> {
        self.standard.as_deref()
    }

    /// Standard monomials of weighted degree `d`.
    pub fn graded_piece_basis(&self, d: i64) -> Result<Arc<Vec<Monomial>>> {
        if !self.is_graded() {
            return Err(Error::NotGraded("graded pieces need homogeneous relations".into()));
        }
        if let Some(b) = self.caches.pieces.lock().unwrap().get(&d) {
            return Ok(b.clone());
        }
        let mut out = Vec::new();
        if d >= 0 {
            let mut cur = vec![0u32; self.nvars()];
            self.enumerate_degree(0, d, &mut cur, &mut out);
        }
        out.sort_by(|a, b| self.ring.cmp(a, b));
        let out = Arc::new(out);
        self.caches.pieces.lock().unwrap().insert(d, out.clone());
        Ok(out)
    }

    fn enumerate_degree(&self, i: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = self.nvars();
        if i == n {
            if left == 0 {
                let m = Monomial::from_exponents(cur.clone());
                if self.is_standard(&m) {
                    out.push(m);
                }
            }
            return;
        }
        let w = self.ring.weights()[i];
        let mut e = 0;
        while e as i64 * w <= left {
            cur[i] = e;
            self.enumerate_degree(i + 1, left - e as i64 * w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }

    /// Largest degree of a standard monomial, for finite graded algebras.
    pub fn top_degree(&self) -> Option<i64> {
        self.standard
            .as_ref()
            .map(|b| b.iter().map(|m| self.ring.degree_of(m)).max().unwrap_or(0))
    }

    /// Krull dimension of `self / (extra)`, read off the leading monomials.
    /// Over `Z` the answer counts the arithmetic direction.
    pub fn krull_dimension_mod(&self, extra: &[Polynomial]) -> Result<usize> {
        if !self.coeffs().is_field() {
            return Err(Error::UnsupportedRing("dimension over Z".into()));
        }
        let mut gens = self.relations.clone();
        gens.extend(extra.iter().cloned());
        let gb = groebner_basis(&self.ring, &gens)?;
        if gb.iter().any(|g| g.leading().unwrap().0.is_one()) {
            return Ok(0);
        }
        let n = self.nvars();
        let leads: Vec<&Monomial> = gb.iter().map(|g| &g.leading().unwrap().0).collect();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let independent = leads.iter().all(|m| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .any(|(i, &e)| e > 0 && mask & (1 << i) == 0)
            });
            if independent {
                best = size;
            }
        }
        Ok(best)
    }

    pub fn krull_dimension(&self) -> usize {
        if !self.coeffs().is_field() {
            return 1;
        }
        self.krull_dimension_mod(&[]).expect("field coefficients")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: FileForm = toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|s| line_col(text, s.start))
                .unwrap_or((1, 1));
            Error::parse(line, column, e.message().to_string())
        })?;
        let coeffs = CoeffRing::parse(file.ring.get_ref()).map_err(|e| {
            let (l, c) = line_col(text, file.ring.span().start);
            Error::parse(l, c, e.to_string())
        })?;
        let declared = file.degrees.is_some();
        let weights = file.degrees.unwrap_or_else(|| vec![1; file.vars.len()]);
        let ring = PolyRing::new(coeffs, file.vars, weights)?;
        let parse_list = |list: &[toml::Spanned<String>]| -> Result<Vec<Polynomial>> {
            list.iter()
                .map(|s| {
                    let (line, col) = line_col(text, s.span().start);
                    ring.parse_at(s.get_ref(), line).map_err(|e| match e {
                        Error::Parse { column, message, .. } => {
                            Error::parse(line, col + column, message)
                        }
                        other => other,
                    })
                })
                .collect()
        };
        let relations = parse_list(&file.relations)?;
        let kernel = parse_list(&file.kernel)?;
        let points = file
            .maximal_ideals
            .iter()
            .map(|p| parse_list(p))
            .collect::<Result<Vec<_>>>()?;
        let mut pres = AlgebraPresentation::new(ring.clone(), relations)?
            .with_declared_degrees(declared)
            .with_kernel(kernel)
            .with_points(points)?;
        pres.name = file.name;
        Ok(pres)
    }

    pub fn to_toml(&self) -> String {
        let quote = |v: Vec<String>| {
            v.iter()
                .map(|s| format!("\"{s}\""))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut s = String::new();
        if let Some(n) = &self.name {
            s.push_str(&format!("name = \"{n}\"\n"));
        }
        s.push_str(&format!("ring = \"{}\"\n", self.coeffs().label()));
        s.push_str(&format!("vars = [{}]\n", quote(self.ring.names().to_vec())));
        if self.declared_degrees {
            let d: Vec<String> = self.ring.weights().iter().map(|w| w.to_string()).collect();
            s.push_str(&format!("degrees = [{}]\n", d.join(", ")));
        }
        s.push_str(&format!("relations = [{}]\n", quote(self.relation_strings())));
        if !self.kernel.is_empty() {
            let k = self.kernel.iter().map(|p| self.format(p)).collect();
            s.push_str(&format!("kernel = [{}]\n", quote(k)));
        }
        if !self.points.is_empty() {
            let ps: Vec<String> = self
                .points
                .iter()
                .map(|p| format!("[{}]", quote(p.iter().map(|g| self.format(g)).collect())))
                .collect();
            s.push_str(&format!("maximal_ideals = [{}]\n", ps.join(", ")));
        }
        s
    }

    /// Fresh copy with a different name and no cached data.
    pub fn renamed(&self, name: Option<String>) -> Self {
        AlgebraPresentation {
            ring: self.ring.clone(),
            relations: self.relations.clone(),
            declared_degrees: self.declared_degrees,
            name,
            kernel: self.kernel.clone(),
            points: self.points.clone(),
            standard: self.standard.clone(),
            caches: Caches::default(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileForm {
    name: Option<String>,
    ring: toml::Spanned<String>,
    vars: Vec<String>,
    degrees: Option<Vec<i64>>,
    #[serde(default)]
    relations: Vec<toml::Spanned<String>>,
    #[serde(default)]
    kernel: Vec<toml::Spanned<String>>,
    #[serde(default)]
    maximal_ideals: Vec<Vec<toml::Spanned<String>>>,
}

pub(crate) fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    (line, col)
}

fn integral_basis(ring: &PolyRing, relations: Vec<Polynomial>) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    for r in relations {
        let (_, lc) = r.leading().unwrap();
        if !ring.coeffs().is_unit(lc) {
            return Err(Error::UnsupportedRing(format!(
                "relation `{}` is not monic",
                ring.format(&r)
            )));
        }
        out.push(if lc.is_negative() { ring.neg(&r) } else { r });
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let (a, b) = (&out[i].leading().unwrap().0, &out[j].leading().unwrap().0);
            if !a.coprime(b) {
                return Err(Error::UnsupportedRing(
                    "over Z relations must be monic in distinct variables".into(),
                ));
            }
        }
    }
    out.sort_by(|a, b| ring.cmp(&b.leading().unwrap().0, &a.leading().unwrap().0));
    if !is_groebner(ring, &out) {
        return Err(Error::UnsupportedRing("relations do not form a Gröbner basis".into()));
    }
    Ok(out)
}

/// Ring homomorphism given by the images of the source variables.
#[derive(Debug, Clone)]
pub struct RingMap {
    source: Arc<AlgebraPresentation>,
    target: Arc<AlgebraPresentation>,
    images: Vec<Polynomial>,
}

impl RingMap {
    pub fn new(
        source: Arc<AlgebraPresentation>,
        target: Arc<AlgebraPresentation>,
        images: Vec<Polynomial>,
    ) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::Invalid("one image per source variable is required".into()));
        }
        if source.coeffs() != target.coeffs() {
            return Err(Error::Invalid("coefficient rings differ".into()));
        }
        let images: Vec<Polynomial> = images.iter().map(|p| target.normal_form(p)).collect();
        let map = RingMap {
            source,
            target,
            images,
        };
        for r in map.source.relations() {
            if !map.apply(r).is_zero() {
                return Err(Error::NotAHomomorphism {
                    relation: map.source.format(r),
                });
            }
        }
        Ok(map)
    }

    pub fn source(&self) -> &Arc<AlgebraPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraPresentation> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let raw = self
            .source
            .ring()
            .substitute(p, &self.images, self.target.ring());
        self.target.normal_form(&raw)
    }

    /// Whether the map preserves degrees (all images homogeneous of the
    /// variable's degree).
    pub fn is_graded(&self) -> bool {
        self.images.iter().enumerate().all(|(i, p)| {
            p.is_zero()
                || self.target.ring().homogeneous_degree(p) == Some(self.source.ring().weights()[i])
        })
    }
}
