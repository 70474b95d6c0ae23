use crate::ring::{AlgebraPresentation, PolyRing, Polynomial, RingMap};

/// Dense matrix of polynomials; column `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Polynomial::default(); rows * cols],
        }
    }

    pub fn identity(ring: &PolyRing, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<Polynomial>>) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.into_iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, e) in c.into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, p)| (k / self.cols, k % self.cols, p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j, p) in self.entries() {
            t.set(j, i, p.clone());
        }
        t
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn apply_ring_map(&self, map: &RingMap) -> Self {
        self.map(|p| map.apply(p))
    }

    pub fn neg(&self, ring: &PolyRing) -> Self {
        self.map(|p| ring.neg(p))
    }

    /// `self * other` with products reduced in `pres`.
    pub fn mul(&self, pres: &AlgebraPresentation, other: &PolyMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let ring = pres.ring();
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = ring.add(&acc, &ring.mul(a, b));
                    }
                }
                out.set(i, j, pres.normal_form(&acc));
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, pres: &AlgebraPresentation, v: &[Polynomial]) -> Vec<Polynomial> {
        let col = PolyMatrix::from_columns(v.len(), vec![v.to_vec()]);
        self.mul(pres, &col).column(0)
    }

    /// `self ⊗ I_b`: block `(i, j)` is `self[i][j] * I_b`.
    pub fn kron_identity(&self, b: usize) -> Self {
        let mut out = Self::zeros(self.rows * b, self.cols * b);
        for (i, j, p) in self.entries() {
            for k in 0..b {
                out.set(i * b + k, j * b + k, p.clone());
            }
        }
        out
    }

    /// `I_a ⊗ self`, block diagonal.
    pub fn identity_kron(&self, a: usize) -> Self {
        let mut out = Self::zeros(self.rows * a, self.cols * a);
        for t in 0..a {
            for (i, j, p) in self.entries() {
                out.set(t * self.rows + i, t * self.cols + j, p.clone());
            }
        }
        out
    }

    /// Every nonzero entry `(i, j)` is homogeneous of degree `src[j] - tgt[i]`.
    pub fn is_homogeneous(&self, ring: &PolyRing, src: &[i64], tgt: &[i64]) -> bool {
        self.entries().all(|(i, j, p)| {
            p.is_zero() || ring.homogeneous_degree(p) == Some(src[j] - tgt[i])
        })
    }

    pub fn to_strings(&self, ring: &PolyRing) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| ring.format(self.get(i, j))).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CoeffRing;

    #[test]
    fn kronecker_layouts() {
        let r = PolyRing::new(CoeffRing::Rationals, vec!["x".into()], vec![1]).unwrap();
        let mut m = PolyMatrix::zeros(1, 2);
        m.set(0, 0, r.var(0));
        m.set(0, 1, r.one());
        let k = m.kron_identity(2);
        assert_eq!((k.rows(), k.cols()), (2, 4));
        assert_eq!(k.get(1, 1), &r.var(0));
        assert_eq!(k.get(1, 3), &r.one());
        let d = m.identity_kron(2);
        assert_eq!(d.get(1, 2), &r.var(0));
        assert!(d.get(0, 2).is_zero());
        assert_eq!(m.transpose().transpose(), m);
    }
}
