//! Sparse exact linear algebra over a field or over `Z`.
//!
//! Vectors are sorted `(index, value)` lists. Subspaces (sublattices over
//! `Z`) are kept as echelon rows keyed by pivot index.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ring::CoeffRing;

pub type SVec = Vec<(usize, BigRational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arith {
    Field(CoeffRing),
    Integers,
}

impl Arith {
    pub fn of(ring: &CoeffRing) -> Self {
        if ring.is_field() {
            Arith::Field(ring.clone())
        } else {
            Arith::Integers
        }
    }

    fn fix(&self, c: BigRational) -> BigRational {
        match self {
            Arith::Field(k) => k.reduce(c),
            Arith::Integers => c,
        }
    }

    /// `a + c * b`.
    pub fn axpy(&self, a: &SVec, c: &BigRational, b: &SVec) -> SVec {
        if c.is_zero() {
            return a.clone();
        }
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let v = self.fix(c * &b[j].1);
                if !v.is_zero() {
                    out.push((b[j].0, v));
                }
                j += 1;
            } else {
                let v = self.fix(&a[i].1 + c * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    pub fn scale(&self, a: &SVec, c: &BigRational) -> SVec {
        if c.is_zero() {
            return Vec::new();
        }
        a.iter()
            .map(|(i, v)| (*i, self.fix(c * v)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }
}

/// Echelon form restricted to pivots below `limit`.
#[derive(Clone, Debug)]
pub struct Echelon {
    arith: Arith,
    limit: usize,
    rows: BTreeMap<usize, SVec>,
}

impl Echelon {
    pub fn new(arith: Arith, limit: usize) -> Self {
        Echelon {
            arith,
            limit,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SVec> {
        self.rows.values()
    }

    /// Reduces `v` as far as possible; returns the remainder and the
    /// multipliers used, keyed by pivot.
    fn reduce(&self, mut v: SVec, track: bool) -> (SVec, Vec<(usize, BigRational)>) {
        let mut used = Vec::new();
        let mut k = 0;
        while k < v.len() {
            let (i, c) = (v[k].0, v[k].1.clone());
            if i >= self.limit {
                break;
            }
            let Some(row) = self.rows.get(&i) else {
                k += 1;
                continue;
            };
            let q = match &self.arith {
                Arith::Field(_) => c,
                Arith::Integers => {
                    let p = row[0].1.to_integer();
                    let (q, r) = c.to_integer().div_mod_floor(&p);
                    if q.is_zero() {
                        k += 1;
                        continue;
                    }
                    let q = BigRational::from_integer(q);
                    v = self.arith.axpy(&v, &-q.clone(), row);
                    if track {
                        used.push((i, q));
                    }
                    if r.is_zero() {
                        continue;
                    }
                    k = v.iter().position(|(j, _)| *j > i).unwrap_or(v.len());
                    continue;
                }
            };
            v = self.arith.axpy(&v, &self.arith.fix(-q.clone()), row);
            if track {
                used.push((i, q));
            }
        }
        (v, used)
    }

    fn reduced(&self, v: &SVec) -> SVec {
        self.reduce(v.clone(), false).0
    }

    /// True if `v` lies in the row span (only the first `limit` coordinates
    /// are pivots; the tail must vanish after reduction).
    pub fn contains(&self, v: &SVec) -> bool {
        self.reduced(v).is_empty()
    }

    /// Adds `v`. Returns the part of `v` that became zero on the pivot
    /// coordinates, if nonzero.
    pub fn insert(&mut self, v: SVec) -> Option<SVec> {
        let mut v = v;
        loop {
            v = self.reduced(&v);
            let Some(&(i, ref c)) = v.first() else {
                return None;
            };
            if i >= self.limit {
                return Some(v);
            }
            match &self.arith {
                Arith::Field(k) => {
                    let inv = k.inv(c).expect("nonzero");
                    let row = self.arith.scale(&v, &inv);
                    self.rows.insert(i, row);
                    return None;
                }
                Arith::Integers => match self.rows.get(&i).cloned() {
                    None => {
                        let row = if c.is_negative() {
                            self.arith.scale(&v, &-BigRational::one())
                        } else {
                            v
                        };
                        self.rows.insert(i, row);
                        return None;
                    }
                    Some(row) => {
                        let p = row[0].1.to_integer();
                        let a = c.to_integer();
                        let e = p.extended_gcd(&a);
                        let g = e.gcd.clone();
                        let mut new_row = self.arith.scale(&row, &BigRational::from_integer(e.x));
                        new_row = self
                            .arith
                            .axpy(&new_row, &BigRational::from_integer(e.y), &v);
                        if new_row[0].1.is_negative() {
                            new_row = self.arith.scale(&new_row, &-BigRational::one());
                        }
                        let rest = self.arith.scale(&v, &BigRational::from_integer(&p / &g));
                        let rest = self
                            .arith
                            .axpy(&rest, &BigRational::from_integer(-(&a / &g)), &row);
                        self.rows.insert(i, new_row);
                        v = rest;
                    }
                },
            }
        }
    }

    /// Coordinates of `v` with respect to the rows (ordered by pivot), if
    /// `v` lies in their span.
    pub fn coordinates(&self, v: &SVec) -> Option<Vec<BigRational>> {
        let (rest, used) = self.reduce(v.clone(), true);
        if !rest.is_empty() {
            return None;
        }
        let pos: BTreeMap<usize, usize> = self.rows.keys().enumerate().map(|(k, p)| (*p, k)).collect();
        let mut out = vec![BigRational::zero(); self.rows.len()];
        for (p, q) in used {
            let k = pos[&p];
            out[k] = self.arith.fix(&out[k] + q);
        }
        Some(out)
    }
}

/// A subspace (sublattice) of `K^ambient`.
#[derive(Clone, Debug)]
pub struct Space {
    pub ambient: usize,
    ech: Echelon,
}

impl Space {
    pub fn zero(arith: &Arith, ambient: usize) -> Self {
        Space {
            ambient,
            ech: Echelon::new(arith.clone(), ambient),
        }
    }

    pub fn span(arith: &Arith, ambient: usize, gens: impl IntoIterator<Item = SVec>) -> Self {
        let mut s = Space::zero(arith, ambient);
        for g in gens {
            s.add(g);
        }
        s
    }

    pub fn full(arith: &Arith, ambient: usize) -> Self {
        Space::span(
            arith,
            ambient,
            (0..ambient).map(|i| vec![(i, BigRational::one())]),
        )
    }

    pub fn add(&mut self, v: SVec) {
        if !v.is_empty() {
            self.ech.insert(v);
        }
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn basis(&self) -> Vec<SVec> {
        self.ech.rows().cloned().collect()
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.ech.contains(v)
    }

    pub fn arith(&self) -> &Arith {
        &self.ech.arith
    }

    pub fn sum(&self, other: &Space) -> Space {
        let mut s = self.clone();
        for v in other.ech.rows() {
            s.add(v.clone());
        }
        s
    }

    pub fn contains_space(&self, other: &Space) -> bool {
        other.ech.rows().all(|v| self.contains(v))
    }

    /// Shape of `self / sub`, assuming `sub ⊆ self`.
    pub fn quotient(&self, sub: &Space) -> QuotientShape {
        match &self.ech.arith {
            Arith::Field(_) => QuotientShape::Dimension(self.dim() - sub.dim()),
            Arith::Integers => {
                let rows: Vec<Vec<BigInt>> = sub
                    .ech
                    .rows()
                    .map(|v| {
                        self.ech
                            .coordinates(v)
                            .expect("sublattice")
                            .into_iter()
                            .map(|c| c.to_integer())
                            .collect()
                    })
                    .collect();
                let diag = smith_diagonal(rows, self.dim());
                let mut factors: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
                factors.extend(std::iter::repeat_n(BigInt::zero(), self.dim() - sub.dim()));
                QuotientShape::Abelian(factors)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientShape {
    Dimension(usize),
    /// Invariant factors; `0` marks a free summand.
    Abelian(Vec<BigInt>),
}

impl QuotientShape {
    pub fn is_zero(&self) -> bool {
        match self {
            QuotientShape::Dimension(d) => *d == 0,
            QuotientShape::Abelian(f) => f.is_empty(),
        }
    }
}

/// Linear map given by the images of basis vectors.
#[derive(Clone, Debug, Default)]
pub struct Columns {
    pub nrows: usize,
    pub cols: Vec<SVec>,
}

impl Columns {
    pub fn new(nrows: usize, cols: Vec<SVec>) -> Self {
        Columns { nrows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, arith: &Arith, v: &SVec) -> SVec {
        let mut out = Vec::new();
        for (j, c) in v {
            out = arith.axpy(&out, c, &self.cols[*j]);
        }
        out
    }

    pub fn image(&self, arith: &Arith) -> Space {
        Space::span(arith, self.nrows, self.cols.iter().cloned())
    }

    pub fn kernel(&self, arith: &Arith) -> Space {
        self.preimage(arith, &Space::zero(arith, self.nrows))
    }

    /// `{ v : A v ∈ target }`.
    pub fn preimage(&self, arith: &Arith, target: &Space) -> Space {
        let n = self.nrows;
        let mut ech = Echelon::new(arith.clone(), n);
        for s in target.ech.rows() {
            ech.insert(s.clone());
        }
        let mut out = Space::zero(arith, self.ncols());
        for (j, c) in self.cols.iter().enumerate() {
            let mut v = c.clone();
            v.push((n + j, BigRational::one()));
            if let Some(rest) = ech.insert(v) {
                out.add(rest.into_iter().map(|(i, x)| (i - n, x)).collect());
            }
        }
        out
    }

    /// Some `v` with `A v = rhs`.
    pub fn solve(&self, arith: &Arith, rhs: &SVec) -> Option<SVec> {
        let n = self.nrows;
        let mut ech = Echelon::new(arith.clone(), n);
        for (j, c) in self.cols.iter().enumerate() {
            let mut v = c.clone();
            v.push((n + j, BigRational::one()));
            ech.insert(v);
        }
        let (rest, _) = ech.reduce(rhs.clone(), false);
        if rest.first().map(|(i, _)| *i < n).unwrap_or(false) {
            return None;
        }
        Some(rest.into_iter().map(|(i, x)| (i - n, arith.fix(-x))).collect())
    }

    pub fn rank(&self, arith: &Arith) -> usize {
        self.image(arith).dim()
    }
}

/// Diagonal of the Smith normal form of an integer matrix given by rows,
/// as a divisibility chain of nonzero entries.
pub fn smith_diagonal(rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<BigInt> {
    let mut a = rows;
    let m = a.len();
    let n = ncols;
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && best.map(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()).unwrap_or(true)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..n {
                        let v = &a[t][j] * &q;
                        a[i][j] -= v;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for i in t..m {
                        let v = &a[i][t] * &q;
                        a[i][j] -= v;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..n {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if (i == t || j == t)
                        && !a[i][j].is_zero()
                        && best.map(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()).unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.unwrap();
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag.sort();
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn dense(v: &[i64]) -> SVec {
        v.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, q(x)))
            .collect()
    }

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_of_two_t() {
        // multiplication by 2t on Z[t]/(t^2-2) in the basis {1, t}
        let d = smith_diagonal(vec![bi(&[0, 4]), bi(&[2, 0])], 2);
        assert_eq!(d, bi(&[2, 4]));
        let d = smith_diagonal(vec![bi(&[2, 0]), bi(&[0, 3])], 2);
        assert_eq!(d, bi(&[1, 6]));
    }

    #[test]
    fn lattice_quotient() {
        let z = Arith::Integers;
        let full = Space::full(&z, 2);
        let sub = Space::span(&z, 2, vec![dense(&[0, 2]), dense(&[4, 0])]);
        assert_eq!(full.quotient(&sub), QuotientShape::Abelian(bi(&[2, 4])));
        let sub = Space::span(&z, 2, vec![dense(&[2, 0])]);
        assert_eq!(full.quotient(&sub), QuotientShape::Abelian(bi(&[2, 0])));
    }

    #[test]
    fn kernel_and_solve() {
        let k = Arith::Field(CoeffRing::Rationals);
        let a = Columns::new(2, vec![dense(&[1, 2]), dense(&[2, 4]), dense(&[0, 1])]);
        assert_eq!(a.kernel(&k).dim(), 1);
        let v = a.solve(&k, &dense(&[3, 7])).unwrap();
        assert_eq!(a.apply(&k, &v), dense(&[3, 7]));
        let z = Arith::Integers;
        let b = Columns::new(1, vec![dense(&[2])]);
        assert!(b.solve(&z, &dense(&[3])).is_none());
        assert_eq!(b.solve(&z, &dense(&[4])).unwrap(), dense(&[2]));
    }

    #[test]
    fn prime_field_rank() {
        let f2 = Arith::Field(CoeffRing::PrimeField(2));
        let a = Columns::new(2, vec![dense(&[1, 1]), dense(&[1, 3])]);
        assert_eq!(a.rank(&f2), 1);
        let k = Arith::Field(CoeffRing::Rationals);
        assert_eq!(a.rank(&k), 2);
    }

    fn brute_order(rows: &[Vec<i64>], n: usize) -> usize {
        // index of the row lattice in Z^n, for full-rank square inputs
        let m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let mut a = m;
        let mut det = q(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return 0 };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det = &det * &a[c][c];
            for r in c + 1..n {
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let v = &f * &a[c][k];
                    a[r][k] -= v;
                }
            }
        }
        det.abs().to_integer().try_into().unwrap()
    }

    proptest! {
        #[test]
        fn smith_product_is_index(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 3)) {
            let order = brute_order(&rows, 3);
            let diag = smith_diagonal(rows.iter().map(|r| bi(r)).collect(), 3);
            if order == 0 {
                prop_assert!(diag.len() < 3);
            } else {
                let prod: BigInt = diag.iter().product();
                prop_assert_eq!(prod, BigInt::from(order));
                for w in diag.windows(2) {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                }
            }
        }

        #[test]
        fn kernel_vectors_are_killed(cols in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 1..5)) {
            for arith in [Arith::Integers, Arith::Field(CoeffRing::Rationals), Arith::Field(CoeffRing::PrimeField(3))] {
                let a = Columns::new(3, cols.iter().map(|c| arith.scale(&dense(c), &q(1))).collect());
                let ker = a.kernel(&arith);
                for v in ker.basis() {
                    prop_assert!(a.apply(&arith, &v).is_empty());
                }
                if arith != Arith::Integers {
                    prop_assert_eq!(ker.dim() + a.rank(&arith), cols.len());
                }
            }
        }
    }
}
