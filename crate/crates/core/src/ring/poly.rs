use std::cmp::Ordering;
use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::{CoeffRing, Coefficient};
use crate::error::{Error, Result};

/// Exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the only variable occurring, if the monomial is a pure power.
    pub fn pure_power_of(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.0.len()).filter(|&i| self.0[i] > 0).collect();
        (nz.len() == 1).then(|| nz[0])
    }
}

/// Sparse polynomial, terms sorted by decreasing monomial order of the owning ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, Coefficient)>,
}

impl Polynomial {
    pub fn terms(&self) -> &[(Monomial, Coefficient)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, Coefficient)> {
        self.terms.first()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Constant coefficient (zero when absent).
    pub fn constant_term(&self) -> Coefficient {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Coefficient::zero)
    }
}

/// Polynomial ring over a coefficient ring with named, weighted variables and
/// weighted graded reverse lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    coeffs: CoeffRing,
    names: Vec<String>,
    weights: Vec<i64>,
}

impl PolyRing {
    pub fn new(coeffs: CoeffRing, names: Vec<String>, weights: Vec<i64>) -> Result<Self> {
        if names.len() != weights.len() {
            return Err(Error::Invalid("one degree per variable is required".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::Invalid(format!("invalid variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate variable `{n}`")));
            }
        }
        if weights.iter().any(|&w| w <= 0) {
            return Err(Error::Invalid("variable degrees must be positive".into()));
        }
        Ok(PolyRing {
            coeffs,
            names,
            weights,
        })
    }

    pub fn coeffs(&self) -> &CoeffRing {
        &self.coeffs
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn degree_of(&self, m: &Monomial) -> i64 {
        m.0.iter()
            .zip(&self.weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.degree_of(a).cmp(&self.degree_of(b)) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..a.0.len()).rev() {
            match a.0[i].cmp(&b.0[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::default()
    }

    pub fn one(&self) -> Polynomial {
        self.constant(Coefficient::one())
    }

    pub fn constant(&self, c: Coefficient) -> Polynomial {
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn int(&self, n: i64) -> Polynomial {
        self.constant(self.coeffs.from_int(n))
    }

    pub fn var(&self, i: usize) -> Polynomial {
        self.term(Monomial::var(self.nvars(), i), Coefficient::one())
    }

    pub fn var_named(&self, name: &str) -> Option<Polynomial> {
        self.names.iter().position(|n| n == name).map(|i| self.var(i))
    }

    pub fn term(&self, m: Monomial, c: Coefficient) -> Polynomial {
        let c = self.coeffs.reduce(c);
        if c.is_zero() {
            return self.zero();
        }
        Polynomial {
            terms: vec![(m, c)],
        }
    }

    /// Collects arbitrary terms into canonical form.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Coefficient)>) -> Polynomial {
        let mut acc: HashMap<Monomial, Coefficient> = HashMap::new();
        for (m, c) in terms {
            let e = acc.entry(m).or_insert_with(Coefficient::zero);
            *e = &*e + c;
        }
        let mut terms: Vec<(Monomial, Coefficient)> = acc
            .into_iter()
            .map(|(m, c)| (m, self.coeffs.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Polynomial { terms }
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.combine(a, b, false)
    }

    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.combine(a, b, true)
    }

    fn combine(&self, a: &Polynomial, b: &Polynomial, negate_b: bool) -> Polynomial {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        let nb = |c: &Coefficient| if negate_b { self.coeffs.neg(c) } else { c.clone() };
        while i < a.terms.len() || j < b.terms.len() {
            let ord = if i == a.terms.len() {
                Ordering::Less
            } else if j == b.terms.len() {
                Ordering::Greater
            } else {
                self.cmp(&a.terms[i].0, &b.terms[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.terms[j].0.clone(), nb(&b.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b {
                        self.coeffs.sub(&a.terms[i].1, &b.terms[j].1)
                    } else {
                        self.coeffs.add(&a.terms[i].1, &b.terms[j].1)
                    };
                    if !c.is_zero() {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { terms: out }
    }

    pub fn neg(&self, a: &Polynomial) -> Polynomial {
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.coeffs.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, a: &Polynomial, c: &Coefficient) -> Polynomial {
        if c.is_zero() {
            return self.zero();
        }
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(m, d)| (m.clone(), self.coeffs.mul(c, d)))
                .filter(|(_, d)| !d.is_zero())
                .collect(),
        }
    }

    /// `c * m * a`; monomial multiplication preserves the order.
    pub fn mul_term(&self, a: &Polynomial, m: &Monomial, c: &Coefficient) -> Polynomial {
        if c.is_zero() {
            return self.zero();
        }
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(n, d)| (n.mul(m), self.coeffs.mul(c, d)))
                .filter(|(_, d)| !d.is_zero())
                .collect(),
        }
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut out = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (m, c) in &a.terms {
            for (n, d) in &b.terms {
                out.push((m.mul(n), c * d));
            }
        }
        self.from_terms(out)
    }

    pub fn pow(&self, a: &Polynomial, e: u32) -> Polynomial {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Weighted degree if every term has the same degree; `None` for zero.
    pub fn homogeneous_degree(&self, a: &Polynomial) -> Option<i64> {
        let d = self.degree_of(&a.terms.first()?.0);
        a.terms
            .iter()
            .all(|(m, _)| self.degree_of(m) == d)
            .then_some(d)
    }

    pub fn is_homogeneous(&self, a: &Polynomial) -> bool {
        a.is_zero() || self.homogeneous_degree(a).is_some()
    }

    /// Maximal weighted degree of a term.
    pub fn max_degree(&self, a: &Polynomial) -> Option<i64> {
        a.terms.iter().map(|(m, _)| self.degree_of(m)).max()
    }

    pub fn derivative(&self, a: &Polynomial, var: usize) -> Polynomial {
        self.from_terms(a.terms.iter().filter(|(m, _)| m.0[var] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[var];
            e[var] -= 1;
            (Monomial(e), c * BigRational::from_integer(k.into()))
        }))
    }

    /// Substitutes `images[i]` (polynomials of `target`) for variable `i`.
    pub fn substitute(&self, a: &Polynomial, images: &[Polynomial], target: &PolyRing) -> Polynomial {
        let mut acc = target.zero();
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        for (m, c) in &a.terms {
            let mut t = target.constant(target.coeffs.reduce(c.clone()));
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| target.pow(&images[i], e))
                    .clone();
                t = target.mul(&t, &p);
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// Re-reads the coefficients of `a` in this ring.
    pub fn coerce(&self, a: &Polynomial) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(a.terms.len());
        for (m, c) in &a.terms {
            if m.0.len() != self.nvars() {
                return Err(Error::Invalid("variable count mismatch".into()));
            }
            terms.push((m.clone(), self.coeffs.normalize(c)?));
        }
        Ok(self.from_terms(terms))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.names[i].clone()
                } else {
                    format!("{}^{}", self.names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, a: &Polynomial) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in a.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&self.format_monomial(m));
            } else {
                s.push_str(&format!("{}*{}", abs, self.format_monomial(m)));
            }
        }
        s
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        self.parse_at(text, 1)
    }

    pub(crate) fn parse_at(&self, text: &str, line: usize) -> Result<Polynomial> {
        let tokens = tokenize(text, line)?;
        let mut p = Parser {
            ring: self,
            tokens,
            pos: 0,
            line,
        };
        let e = p.expr()?;
        if let Some(t) = p.tokens.get(p.pos) {
            return Err(Error::parse(line, t.col, format!("unexpected `{}`", t.text())));
        }
        Ok(e)
    }
}

fn valid_name(n: &str) -> bool {
    let mut cs = n.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, Clone)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

impl Token {
    fn text(&self) -> String {
        match &self.tok {
            Tok::Num(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Sym(c) => c.to_string(),
        }
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            let mut value = BigRational::from_integer(num.parse().expect("digits"));
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let den: String = chars[s..i].iter().collect();
                let den: num_bigint::BigInt = den.parse().expect("digits");
                if den.is_zero() {
                    return Err(Error::parse(line, col, "division by zero"));
                }
                value /= BigRational::from_integer(den);
            }
            out.push(Token {
                tok: Tok::Num(value),
                col,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if "+-*^()".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                col,
            });
            i += 1;
        } else {
            return Err(Error::parse(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    tokens: Vec<Token>,
    pos: usize,
    line: usize,
}

impl Parser<'_> {
    fn peek_sym(&self, c: char) -> bool {
        matches!(self.tokens.get(self.pos), Some(Token { tok: Tok::Sym(d), .. }) if *d == c)
    }

    fn end_col(&self) -> usize {
        self.tokens.last().map(|t| t.col + 1).unwrap_or(1)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let r = self.ring;
        let mut acc = if self.peek_sym('-') {
            self.pos += 1;
            r.neg(&self.product()?)
        } else {
            if self.peek_sym('+') {
                self.pos += 1;
            }
            self.product()?
        };
        loop {
            if self.peek_sym('+') {
                self.pos += 1;
                acc = r.add(&acc, &self.product()?);
            } else if self.peek_sym('-') {
                self.pos += 1;
                acc = r.sub(&acc, &self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while self.peek_sym('*') {
            self.pos += 1;
            acc = self.ring.mul(&acc, &self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if !self.peek_sym('^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.tokens.get(self.pos).cloned() {
            Some(Token {
                tok: Tok::Num(n), ..
            }) if n.is_integer() => {
                self.pos += 1;
                let e: u32 = n
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::parse(self.line, self.end_col(), "exponent too large"))?;
                Ok(self.ring.pow(&base, e))
            }
            Some(t) => Err(Error::parse(self.line, t.col, "expected a non-negative integer exponent")),
            None => Err(Error::parse(self.line, self.end_col(), "missing exponent")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let r = self.ring;
        let t = match self.tokens.get(self.pos).cloned() {
            Some(t) => t,
            None => return Err(Error::parse(self.line, self.end_col(), "unexpected end of input")),
        };
        self.pos += 1;
        match t.tok {
            Tok::Num(n) => Ok(r.constant(r.coeffs.normalize(&n).map_err(|e| {
                Error::parse(self.line, t.col, e.to_string())
            })?)),
            Tok::Ident(name) => r
                .var_named(&name)
                .ok_or_else(|| Error::parse(self.line, t.col, format!("unknown variable `{name}`"))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                if !self.peek_sym(')') {
                    return Err(Error::parse(self.line, self.end_col(), "missing `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Sym(c) => Err(Error::parse(self.line, t.col, format!("unexpected `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn grevlex_order() {
        let r = ring(&["x", "y", "z"]);
        let m = |e: [u32; 3]| Monomial(e.to_vec());
        assert_eq!(r.cmp(&m([1, 0, 0]), &m([0, 1, 0])), Ordering::Greater);
        assert_eq!(r.cmp(&m([1, 0, 1]), &m([0, 2, 0])), Ordering::Less);
        assert_eq!(r.cmp(&m([0, 0, 2]), &m([1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn parse_and_print() {
        let r = ring(&["t", "t'"]);
        let p = r.parse("(t - t')*(t + t') - 1/2").unwrap();
        assert_eq!(r.format(&p), "t^2 - t'^2 - 1/2");
        assert_eq!(r.parse(&r.format(&p)).unwrap(), p);
        assert_eq!(r.format(&r.parse("-2*t + 3").unwrap()), "-2*t + 3");
        assert!(r.parse("t +").is_err());
        match r.parse("t + u") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn prime_field_parsing() {
        let r = PolyRing::new(CoeffRing::PrimeField(5), vec!["x".into()], vec![1]).unwrap();
        let p = r.parse("x - 1").unwrap();
        assert_eq!(r.format(&p), "x + 4");
        assert!(r.parse("x/5").is_err());
    }

    #[test]
    fn derivative_and_substitution() {
        let r = ring(&["x", "y"]);
        let f = r.parse("x^3*y + 2*y").unwrap();
        assert_eq!(r.derivative(&f, 0), r.parse("3*x^2*y").unwrap());
        let g = r.substitute(&f, &[r.parse("y").unwrap(), r.parse("x").unwrap()], &r);
        assert_eq!(g, r.parse("y^3*x + 2*x").unwrap());
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        let r = ring(&["x", "y"]);
        prop::collection::vec(((0u32..3, 0u32..3), -3i64..4), 0..5).prop_map(move |ts| {
            r.from_terms(
                ts.into_iter()
                    .map(|((a, b), c)| (Monomial(vec![a, b]), BigRational::from_integer(c.into()))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let r = ring(&["x", "y"]);
            prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            prop_assert_eq!(r.sub(&r.add(&a, &b), &b), a.clone());
        }

        #[test]
        fn print_parse_round_trip(a in arb_poly()) {
            let r = ring(&["x", "y"]);
            prop_assert_eq!(r.parse(&r.format(&a)).unwrap(), a);
        }
    }
}
