//! Buchberger's algorithm with the sugar selection strategy.

use num_traits::One;

use super::poly::{Monomial, PolyRing, Polynomial};
use crate::error::{Error, Result};

/// Fully reduces `p` by `basis`. Leading coefficients of `basis` must be units.
pub fn reduce(ring: &PolyRing, p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let k = ring.coeffs();
    let mut rest = p.clone();
    let mut done: Vec<(Monomial, num_rational::BigRational)> = Vec::new();
    'outer: while let Some((m, c)) = rest.leading().cloned() {
        for g in basis {
            let (lm, lc) = g.leading().expect("nonzero basis element");
            if lm.divides(&m) {
                let q = k.mul(&c, &k.inv(lc).expect("unit leading coefficient"));
                let shift = lm.quotient_of(&m);
                rest = ring.sub(&rest, &ring.mul_term(g, &shift, &q));
                continue 'outer;
            }
        }
        done.push((m, c.clone()));
        rest = ring.sub(&rest, &ring.term(done.last().unwrap().0.clone(), c));
    }
    ring.from_terms(done)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: i64,
}

/// Reduced Gröbner basis of the ideal generated by `gens` (field coefficients).
pub fn groebner_basis(ring: &PolyRing, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    if !ring.coeffs().is_field() {
        return Err(Error::UnsupportedRing(
            "Gröbner bases are computed over fields only".into(),
        ));
    }
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut sugar: Vec<i64> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    for g in gens {
        let r = reduce(ring, g, &basis);
        if r.is_zero() {
            continue;
        }
        add_element(ring, monic(ring, r.clone()), ring.max_degree(g).unwrap_or(0), &mut basis, &mut sugar, &mut pairs);
    }
    while let Some(idx) = next_pair(ring, &pairs) {
        let pair = pairs.swap_remove(idx);
        let s = s_polynomial(ring, &basis[pair.i], &basis[pair.j]);
        let r = reduce(ring, &s, &basis);
        if !r.is_zero() {
            add_element(ring, monic(ring, r), pair.sugar, &mut basis, &mut sugar, &mut pairs);
        }
    }
    Ok(interreduce(ring, basis))
}

fn monic(ring: &PolyRing, p: Polynomial) -> Polynomial {
    let lc = p.leading().expect("nonzero").1.clone();
    if lc.is_one() {
        return p;
    }
    let inv = ring.coeffs().inv(&lc).expect("field");
    ring.scale(&p, &inv)
}

fn add_element(
    ring: &PolyRing,
    g: Polynomial,
    s: i64,
    basis: &mut Vec<Polynomial>,
    sugar: &mut Vec<i64>,
    pairs: &mut Vec<Pair>,
) {
    let n = basis.len();
    let lm = g.leading().unwrap().0.clone();
    for (i, b) in basis.iter().enumerate() {
        let bl = &b.leading().unwrap().0;
        let lcm = bl.lcm(&lm);
        let si = sugar[i] + ring.degree_of(&bl.quotient_of(&lcm));
        let sn = s + ring.degree_of(&lm.quotient_of(&lcm));
        if bl.coprime(&lm) {
            continue;
        }
        pairs.push(Pair {
            i,
            j: n,
            lcm,
            sugar: si.max(sn),
        });
    }
    basis.push(g);
    sugar.push(s);
}

fn next_pair(ring: &PolyRing, pairs: &[Pair]) -> Option<usize> {
    (0..pairs.len()).min_by(|&a, &b| {
        let (p, q) = (&pairs[a], &pairs[b]);
        p.sugar
            .cmp(&q.sugar)
            .then_with(|| ring.cmp(&p.lcm, &q.lcm))
            .then_with(|| (p.i, p.j).cmp(&(q.i, q.j)))
    })
}

fn s_polynomial(ring: &PolyRing, f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = fm.lcm(gm);
    let a = ring.mul_term(f, &fm.quotient_of(&l), gc);
    let b = ring.mul_term(g, &gm.quotient_of(&l), fc);
    ring.sub(&a, &b)
}

fn interreduce(ring: &PolyRing, basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = &g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hl = &h.leading().unwrap().0;
            j != i && hl.divides(lm) && (hl != lm || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, h)| h.clone())
            .collect();
        let (lm, lc) = minimal[i].leading().unwrap().clone();
        let tail = ring.sub(&minimal[i], &ring.term(lm.clone(), lc.clone()));
        let r = ring.add(&ring.term(lm, lc), &reduce(ring, &tail, &others));
        out.push(monic(ring, r));
    }
    out.sort_by(|a, b| ring.cmp(&b.leading().unwrap().0, &a.leading().unwrap().0));
    out
}

/// True if `basis` (unit leading coefficients) is a Gröbner basis by the
/// Buchberger criterion.
pub fn is_groebner(ring: &PolyRing, basis: &[Polynomial]) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_polynomial(ring, &basis[i], &basis[j]);
            if !reduce(ring, &s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::coeff::CoeffRing;
    use proptest::prelude::*;

    fn ring(names: &[&str]) -> PolyRing {
        PolyRing::new(
            CoeffRing::Rationals,
            names.iter().map(|s| s.to_string()).collect(),
            vec![1; names.len()],
        )
        .unwrap()
    }

    #[test]
    fn example_ideal_contains_x4() {
        let r = ring(&["x", "y"]);
        let gb = groebner_basis(&r, &[r.parse("x^2 - y").unwrap(), r.parse("y^2").unwrap()]).unwrap();
        let shown: Vec<String> = gb.iter().map(|g| r.format(g)).collect();
        assert_eq!(shown, vec!["x^2 - y", "y^2"]);
        assert!(reduce(&r, &r.parse("x^4").unwrap(), &gb).is_zero());
        assert!(!reduce(&r, &r.parse("x^3").unwrap(), &gb).is_zero());
    }

    #[test]
    fn cyclic_three() {
        let r = ring(&["a", "b", "c"]);
        let gens = ["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]
            .map(|s| r.parse(s).unwrap());
        let gb = groebner_basis(&r, &gens).unwrap();
        assert!(is_groebner(&r, &gb));
        for g in &gens {
            assert!(reduce(&r, g, &gb).is_zero());
        }
        assert_eq!(gb.len(), 3);
    }

    #[test]
    fn unit_ideal() {
        let r = ring(&["x"]);
        let gb = groebner_basis(&r, &[r.parse("x").unwrap(), r.parse("x + 1").unwrap()]).unwrap();
        assert_eq!(gb, vec![r.one()]);
    }

    proptest! {
        #[test]
        fn basis_generates_and_is_groebner(
            cs in prop::collection::vec(prop::collection::vec(-2i64..3, 6), 1..3)
        ) {
            let r = ring(&["x", "y"]);
            let mons = ["x^2", "x*y", "y^2", "x", "y", "1"];
            let gens: Vec<Polynomial> = cs.iter().map(|c| {
                let s = c.iter().zip(mons).map(|(k, m)| format!("({k})*{m}")).collect::<Vec<_>>().join(" + ");
                r.parse(&s).unwrap()
            }).collect();
            let gb = groebner_basis(&r, &gens).unwrap();
            prop_assert!(is_groebner(&r, &gb));
            for g in &gens {
                prop_assert!(reduce(&r, g, &gb).is_zero());
            }
        }
    }
}
