use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::Point;
use crate::ring::{AlgebraPresentation, Polynomial, RingMap};

/// Surjective ring map `R -> S` with generators of its kernel.
#[derive(Clone, Debug)]
pub struct Surjection {
    pub map: RingMap,
    pub kernel: Vec<Polynomial>,
    lift: Vec<Polynomial>,
    has_section: bool,
}

impl Surjection {
    /// `R -> S` given the kernel and, for each variable of `S`, an element
    /// of `R` mapping to it.
    pub fn new(map: RingMap, kernel: Vec<Polynomial>, lift: Vec<Polynomial>, has_section: bool) -> Result<Self> {
        for k in &kernel {
            if !map.apply(k).is_zero() {
                return Err(Error::Invalid(format!(
                    "`{}` is not in the kernel",
                    map.source().format(k)
                )));
            }
        }
        if lift.len() != map.target().nvars() {
            return Err(Error::Invalid("one lift per target variable is required".into()));
        }
        Ok(Surjection {
            map,
            kernel: kernel
                .into_iter()
                .filter(|k| !k.is_zero())
                .collect(),
            lift,
            has_section,
        })
    }

    /// `R -> R / (kernel)`.
    pub fn quotient(source: Arc<AlgebraPresentation>, kernel: Vec<Polynomial>) -> Result<Self> {
        if !source.coeffs().is_field() {
            return Err(Error::UnsupportedRing("quotients of Z-algebras".into()));
        }
        let ring = source.ring().clone();
        let mut rels = source.relations().to_vec();
        rels.extend(kernel.iter().cloned());
        let target = AlgebraPresentation::new(ring.clone(), rels)?
            .with_declared_degrees(false)
            .with_points(source.points().to_vec())?;
        let target = Arc::new(target);
        let vars: Vec<Polynomial> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        let map = RingMap::new(source.clone(), target, vars.clone())?;
        let kernel = kernel.iter().map(|k| source.normal_form(k)).collect();
        Surjection::new(map, kernel, vars, false)
    }

    /// The surjection recorded in a presentation file (`kernel` key).
    pub fn from_presentation(pres: Arc<AlgebraPresentation>) -> Result<Self> {
        if pres.kernel().is_empty() {
            return Err(Error::Invalid("the presentation declares no kernel".into()));
        }
        let k = pres.kernel().to_vec();
        Surjection::quotient(pres, k)
    }

    pub fn source(&self) -> &Arc<AlgebraPresentation> {
        self.map.source()
    }

    pub fn target(&self) -> &Arc<AlgebraPresentation> {
        self.map.target()
    }

    pub fn has_section(&self) -> bool {
        self.has_section
    }

    pub fn is_graded(&self) -> bool {
        let r = self.source();
        r.is_graded()
            && self.target().is_graded()
            && self.map.is_graded()
            && self.kernel.iter().all(|k| r.ring().is_homogeneous(k))
    }

    pub fn lift(&self, p: &Polynomial) -> Polynomial {
        let s = self.target();
        let r = self.source();
        r.normal_form(&s.ring().substitute(p, &self.lift, r.ring()))
    }

    /// The irrelevant ideal when graded, else the first declared point of
    /// the target.
    pub fn default_point(&self) -> Result<Point> {
        if self.is_graded() {
            return Ok(Point::Irrelevant);
        }
        self.target()
            .points()
            .first()
            .map(|p| Point::Ideal(p.clone()))
            .ok_or_else(|| Error::NoMaximalIdeal("declare `maximal_ideals` for an ungraded algebra".into()))
    }

    /// Every point at which local invariants are evaluated.
    pub fn points(&self) -> Result<Vec<Point>> {
        if self.is_graded() {
            return Ok(vec![Point::Irrelevant]);
        }
        let pts: Vec<Point> = self
            .target()
            .points()
            .iter()
            .map(|p| Point::Ideal(p.clone()))
            .collect();
        if pts.is_empty() {
            return Err(Error::NoMaximalIdeal("declare `maximal_ideals` for an ungraded algebra".into()));
        }
        Ok(pts)
    }

    /// Preimage in `R` of a maximal ideal of `S`.
    pub fn source_point(&self, point: &Point) -> Point {
        match point {
            Point::Irrelevant => Point::Irrelevant,
            Point::Ideal(q) => {
                let mut gens = self.kernel.clone();
                gens.extend(q.iter().map(|g| self.lift(g)));
                Point::Ideal(gens)
            }
        }
    }
}
