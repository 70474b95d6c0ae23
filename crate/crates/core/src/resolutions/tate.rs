//! Tate constructions: exterior variables `x_i` in degree 1 killing the
//! generators `a_i`, then divided-power variables `y_h` in degree 2 killing
//! cycles `z_h = sum_i b_ih x_i`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;

use crate::complexes::FreeComplex;
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::ring::{AlgebraPresentation, Polynomial};

/// Basis monomial `x_ext * y^(dp)`; `ext` strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub ext: Vec<usize>,
    pub dp: Vec<u32>,
}

impl Word {
    pub fn one(d: usize) -> Self {
        Word {
            ext: Vec::new(),
            dp: vec![0; d],
        }
    }

    pub fn degree(&self) -> usize {
        self.ext.len() + 2 * self.dp.iter().sum::<u32>() as usize
    }

    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self.ext.iter().map(|i| format!("x{}", i + 1)).collect();
        for (h, &j) in self.dp.iter().enumerate() {
            match j {
                0 => {}
                1 => parts.push(format!("y{}", h + 1)),
                _ => parts.push(format!("y{}^({j})", h + 1)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Element of the DG algebra: coefficients indexed by words.
pub type TateElement = BTreeMap<Word, Polynomial>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub homological_degree: usize,
    pub internal_degree: i64,
    /// Tate stage at which the variable is adjoined.
    pub stage: u8,
}

#[derive(Clone, Debug)]
pub struct TateStage {
    ring: Arc<AlgebraPresentation>,
    generators: Vec<Polynomial>,
    cycles: Vec<Vec<Polynomial>>,
    gen_degrees: Vec<i64>,
    cycle_degrees: Vec<i64>,
    words: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
    complex: FreeComplex,
}

/// Rank of the degree-`n` part with `c` exterior and `d` divided-power
/// variables.
pub fn basis_count(c: usize, d: usize, n: usize) -> usize {
    let mut total = 0usize;
    for j in 0..=n / 2 {
        let e = n - 2 * j;
        if e > c {
            continue;
        }
        let dp = if d == 0 {
            usize::from(j == 0)
        } else {
            binomial(j + d - 1, d - 1)
        };
        total += binomial(c, e) * dp;
    }
    total
}

fn subsets(c: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, c: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..c {
            cur.push(i);
            go(i + 1, c, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= c {
        go(0, c, k, &mut Vec::new(), &mut out);
    }
    out
}

fn compositions(d: usize, total: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(d - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Sign of the shuffle placing `b` after `a`, or `None` if they meet.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for x in a {
        if b.contains(x) {
            return None;
        }
        inversions += b.iter().filter(|y| *y < x).count();
    }
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    Some((all, inversions % 2 == 1))
}

impl TateStage {
    /// Koszul complex on `generators`.
    pub fn koszul(ring: Arc<AlgebraPresentation>, generators: Vec<Polynomial>) -> Result<Self> {
        let c = generators.len();
        Self::new(ring, generators, Vec::new(), c)
    }

    /// Adjoins divided-power variables killing `cycles` (coefficient
    /// vectors against the `x_i`), built through homological degree `top`.
    pub fn new(
        ring: Arc<AlgebraPresentation>,
        generators: Vec<Polynomial>,
        cycles: Vec<Vec<Polynomial>>,
        top: usize,
    ) -> Result<Self> {
        let c = generators.len();
        let generators: Vec<Polynomial> = generators.iter().map(|g| ring.normal_form(g)).collect();
        let cycles: Vec<Vec<Polynomial>> = cycles
            .iter()
            .map(|z| z.iter().map(|b| ring.normal_form(b)).collect())
            .collect();
        for (h, z) in cycles.iter().enumerate() {
            if z.len() != c {
                return Err(Error::Invalid(format!("cycle {} has the wrong length", h + 1)));
            }
            let mut acc = ring.ring().zero();
            for (b, a) in z.iter().zip(&generators) {
                acc = ring.add(&acc, &ring.mul(b, a));
            }
            if !ring.normal_form(&acc).is_zero() {
                return Err(Error::InvalidComplex(format!("z_{} is not a cycle", h + 1)));
            }
        }
        let (gen_degrees, cycle_degrees) = internal_degrees(&ring, &generators, &cycles);
        let d = cycles.len();
        let mut words = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let mut wn = Vec::new();
            for j in 0..=(n / 2) as u32 {
                let e = n - 2 * j as usize;
                if e > c || (d == 0 && j > 0) {
                    continue;
                }
                for dp in compositions(d, j) {
                    for ext in subsets(c, e) {
                        wn.push(Word { ext, dp: dp.clone() });
                    }
                }
            }
            words.push(wn);
        }
        let index: Vec<HashMap<Word, usize>> = words
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();
        let mut stage = TateStage {
            complex: FreeComplex::new_unchecked(ring.clone(), 0, vec![vec![0]], Vec::new())?,
            ring,
            generators,
            cycles,
            gen_degrees,
            cycle_degrees,
            words,
            index,
        };
        stage.complex = stage.build_complex()?;
        Ok(stage)
    }

    fn build_complex(&self) -> Result<FreeComplex> {
        let modules: Vec<Vec<i64>> = self
            .words
            .iter()
            .map(|ws| ws.iter().map(|w| self.internal_degree(w)).collect())
            .collect();
        let mut diffs = Vec::new();
        for n in 1..self.words.len() {
            let mut m = PolyMatrix::zeros(self.words[n - 1].len(), self.words[n].len());
            for (j, w) in self.words[n].iter().enumerate() {
                for (v, p) in self.word_differential(w) {
                    let i = self.index[n - 1][&v];
                    m.set(i, j, p);
                }
            }
            diffs.push(m);
        }
        let c = FreeComplex::new_unchecked(self.ring.clone(), 0, modules, diffs)?;
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn ring(&self) -> &Arc<AlgebraPresentation> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn cycles(&self) -> &[Vec<Polynomial>] {
        &self.cycles
    }

    /// 1 for the Koszul complex, 2 once divided powers are adjoined.
    pub fn stage(&self) -> u8 {
        if self.cycles.is_empty() {
            1
        } else {
            2
        }
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn top(&self) -> usize {
        self.words.len() - 1
    }

    pub fn words(&self, n: usize) -> &[Word] {
        self.words.get(n).map(|w| w.as_slice()).unwrap_or(&[])
    }

    pub fn variables(&self) -> Vec<Variable> {
        let mut out: Vec<Variable> = self
            .gen_degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Variable {
                name: format!("x{}", i + 1),
                homological_degree: 1,
                internal_degree: d,
                stage: 1,
            })
            .collect();
        out.extend(self.cycle_degrees.iter().enumerate().map(|(h, &d)| Variable {
            name: format!("y{}", h + 1),
            homological_degree: 2,
            internal_degree: d,
            stage: 2,
        }));
        out
    }

    pub fn internal_degree(&self, w: &Word) -> i64 {
        w.ext.iter().map(|&i| self.gen_degrees[i]).sum::<i64>()
            + w.dp
                .iter()
                .zip(&self.cycle_degrees)
                .map(|(&j, &d)| j as i64 * d)
                .sum::<i64>()
    }

    /// Differential of a basis word, by the Leibniz rule.
    pub fn word_differential(&self, w: &Word) -> Vec<(Word, Polynomial)> {
        let r = self.ring.ring();
        let mut acc: BTreeMap<Word, Polynomial> = BTreeMap::new();
        let push = |v: Word, p: Polynomial, acc: &mut BTreeMap<Word, Polynomial>| {
            let e = acc.entry(v).or_insert_with(|| r.zero());
            *e = r.add(e, &p);
        };
        for (k, &i) in w.ext.iter().enumerate() {
            let mut ext = w.ext.clone();
            ext.remove(k);
            let a = &self.generators[i];
            let p = if k % 2 == 0 { a.clone() } else { r.neg(a) };
            push(Word { ext, dp: w.dp.clone() }, p, &mut acc);
        }
        let outer_neg = w.ext.len() % 2 == 1;
        for (h, &j) in w.dp.iter().enumerate() {
            if j == 0 {
                continue;
            }
            let mut dp = w.dp.clone();
            dp[h] -= 1;
            for (i, b) in self.cycles[h].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let Some((ext, neg)) = merge_sign(&w.ext, &[i]) else { continue };
                let p = if neg != outer_neg { r.neg(b) } else { b.clone() };
                push(Word { ext, dp: dp.clone() }, p, &mut acc);
            }
        }
        acc.into_iter()
            .map(|(v, p)| (v, self.ring.normal_form(&p)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    pub fn word_element(&self, w: &Word) -> TateElement {
        let mut e = TateElement::new();
        e.insert(w.clone(), self.ring.ring().one());
        e
    }

    /// Product of two elements; divided powers multiply by binomials.
    pub fn multiply(&self, a: &TateElement, b: &TateElement) -> TateElement {
        let r = self.ring.ring();
        let mut out = TateElement::new();
        for (u, p) in a {
            for (v, q) in b {
                let Some((ext, neg)) = merge_sign(&u.ext, &v.ext) else { continue };
                let mut coeff = BigInt::from(1);
                let dp: Vec<u32> = u
                    .dp
                    .iter()
                    .zip(&v.dp)
                    .map(|(&i, &j)| {
                        coeff *= binomial(BigInt::from(i + j), BigInt::from(i));
                        i + j
                    })
                    .collect();
                let mut term = self.ring.mul(p, q);
                term = r.scale(&term, &r.coeffs().reduce(BigRational::from_integer(coeff)));
                if neg {
                    term = r.neg(&term);
                }
                let e = out.entry(Word { ext, dp }).or_insert_with(|| r.zero());
                *e = r.add(e, &term);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn differential(&self, a: &TateElement) -> TateElement {
        let r = self.ring.ring();
        let mut out = TateElement::new();
        for (w, p) in a {
            for (v, q) in self.word_differential(w) {
                let e = out.entry(v).or_insert_with(|| r.zero());
                *e = r.add(e, &self.ring.mul(p, &q));
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Coordinates in the basis of degree `n`; words of other degrees are
    /// ignored.
    pub fn to_vector(&self, n: usize, a: &TateElement) -> Vec<Polynomial> {
        let mut v = vec![self.ring.ring().zero(); self.words(n).len()];
        for (w, p) in a {
            if let Some(&i) = self.index.get(n).and_then(|ix| ix.get(w)) {
                v[i] = p.clone();
            }
        }
        v
    }

    pub fn from_vector(&self, n: usize, v: &[Polynomial]) -> TateElement {
        self.words(n)
            .iter()
            .zip(v)
            .filter(|(_, p)| !p.is_zero())
            .map(|(w, p)| (w.clone(), p.clone()))
            .collect()
    }

    /// The basis element `x_i`.
    pub fn x(&self, i: usize) -> TateElement {
        let mut ext = vec![i];
        ext.truncate(1);
        self.word_element(&Word {
            ext,
            dp: vec![0; self.cycles.len()],
        })
    }

    /// The divided power `y_h^(j)`.
    pub fn y(&self, h: usize, j: u32) -> TateElement {
        let mut dp = vec![0; self.cycles.len()];
        dp[h] = j;
        self.word_element(&Word { ext: Vec::new(), dp })
    }
}

fn internal_degrees(
    ring: &AlgebraPresentation,
    generators: &[Polynomial],
    cycles: &[Vec<Polynomial>],
) -> (Vec<i64>, Vec<i64>) {
    let r = ring.ring();
    let zeros = || (vec![0; generators.len()], vec![0; cycles.len()]);
    if !ring.is_graded() {
        return zeros();
    }
    let mut gd = Vec::new();
    for g in generators {
        match r.homogeneous_degree(g) {
            Some(d) => gd.push(d),
            None => return zeros(),
        }
    }
    let mut cd = Vec::new();
    for z in cycles {
        let mut deg = None;
        for (b, a) in z.iter().zip(&gd) {
            if b.is_zero() {
                continue;
            }
            let Some(d) = r.homogeneous_degree(b) else { return zeros() };
            if deg.is_some() && deg != Some(d + a) {
                return zeros();
            }
            deg = Some(d + a);
        }
        cd.push(deg.unwrap_or(0));
    }
    (gd, cd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dual_numbers_env() -> (Arc<AlgebraPresentation>, TateStage) {
        let r = Arc::new(
            AlgebraPresentation::from_toml(
                "ring = \"Q\"\nvars = [\"x\", \"x'\"]\nrelations = [\"x^2\", \"x'^2\"]\n",
            )
            .unwrap(),
        );
        let a = r.parse_element("x - x'").unwrap();
        let b = r.parse_element("x + x'").unwrap();
        let g = TateStage::new(r.clone(), vec![a], vec![vec![b]], 8).unwrap();
        (r, g)
    }

    #[test]
    fn counts_match_formula() {
        assert_eq!(basis_count(2, 0, 1), 2);
        assert_eq!(basis_count(1, 1, 5), 1);
        assert_eq!(basis_count(2, 1, 3), 2);
        assert_eq!(basis_count(2, 2, 4), 2 + 3);
        let (_, g) = dual_numbers_env();
        for n in 0..=8 {
            assert_eq!(g.words(n).len(), basis_count(1, 1, n));
        }
    }

    #[test]
    fn divided_power_rule() {
        let (r, g) = dual_numbers_env();
        for j in 1..4u32 {
            let lhs = g.differential(&g.y(0, j));
            let z = g.differential(&g.y(0, 1));
            let rhs = g.multiply(&z, &g.y(0, j - 1));
            assert_eq!(lhs, rhs);
        }
        // y * y = 2 y^(2)
        let yy = g.multiply(&g.y(0, 1), &g.y(0, 1));
        let two = r.parse_element("2").unwrap();
        assert_eq!(yy.get(&Word { ext: vec![], dp: vec![2] }), Some(&two));
        // x * x = 0
        assert!(g.multiply(&g.x(0), &g.x(0)).is_empty());
    }

    #[test]
    fn rejects_non_cycles() {
        let (r, _) = dual_numbers_env();
        let a = r.parse_element("x - x'").unwrap();
        let e = TateStage::new(r.clone(), vec![a], vec![vec![r.parse_element("x").unwrap()]], 4);
        assert!(matches!(e, Err(Error::InvalidComplex(_))));
    }

    fn koszul_two() -> TateStage {
        let r = Arc::new(
            AlgebraPresentation::from_toml("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = [\"x^2\", \"x*y\"]\n").unwrap(),
        );
        // kernel (x, y) with the cycle y*x1 - x*x2 and x*x1
        let gens = vec![r.parse_element("x").unwrap(), r.parse_element("y").unwrap()];
        let cycles = vec![
            vec![r.parse_element("x").unwrap(), r.parse_element("0").unwrap()],
            vec![r.parse_element("y").unwrap(), r.parse_element("-x").unwrap()],
        ];
        TateStage::new(r, gens, cycles, 6).unwrap()
    }

    proptest! {
        #[test]
        fn leibniz_on_words(i in 0usize..40, j in 0usize..40) {
            let g = koszul_two();
            let all: Vec<Word> = (0..=3).flat_map(|n| g.words(n).to_vec()).collect();
            let u = &all[i % all.len()];
            let v = &all[j % all.len()];
            if u.degree() + v.degree() <= g.top() {
                let r = g.ring().ring();
                let (eu, ev) = (g.word_element(u), g.word_element(v));
                let lhs = g.differential(&g.multiply(&eu, &ev));
                let a = g.multiply(&g.differential(&eu), &ev);
                let mut b = g.multiply(&eu, &g.differential(&ev));
                if u.degree() % 2 == 1 {
                    for p in b.values_mut() {
                        *p = r.neg(p);
                    }
                }
                let mut rhs = a;
                for (w, p) in b {
                    let e = rhs.entry(w).or_insert_with(|| r.zero());
                    *e = r.add(e, &p);
                }
                rhs.retain(|_, p| !p.is_zero());
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn products_are_graded_commutative(i in 0usize..40, j in 0usize..40) {
            let g = koszul_two();
            let all: Vec<Word> = (0..=3).flat_map(|n| g.words(n).to_vec()).collect();
            let (u, v) = (&all[i % all.len()], &all[j % all.len()]);
            let r = g.ring().ring();
            let uv = g.multiply(&g.word_element(u), &g.word_element(v));
            let mut vu = g.multiply(&g.word_element(v), &g.word_element(u));
            if u.degree() % 2 == 1 && v.degree() % 2 == 1 {
                for p in vu.values_mut() {
                    *p = r.neg(p);
                }
            }
            prop_assert_eq!(uv, vu);
        }
    }
}
