use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

/// Isomorphism type of a computed module, as far as it is determined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Zero,
    /// Finitely generated abelian group: invariant factors, `0` for `Z`.
    Abelian(Vec<BigInt>),
    /// Finite-dimensional vector space, optionally with its graded pieces.
    Vector {
        dim: usize,
        by_degree: Option<BTreeMap<i64, usize>>,
    },
    /// Graded pieces of an infinite-dimensional module, known only in `[lo, hi]`.
    Window {
        dims: BTreeMap<i64, usize>,
        lo: i64,
        hi: i64,
    },
}

/// Canonical description of a module; `≅` is equality of shapes.
#[derive(Clone, Debug)]
pub struct ModuleDescriptor {
    pub shape: Shape,
    /// Minimal number of generators at the chosen maximal ideal.
    pub minimal_generators: Option<usize>,
}

impl PartialEq for ModuleDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape
    }
}

impl ModuleDescriptor {
    pub fn zero() -> Self {
        ModuleDescriptor {
            shape: Shape::Zero,
            minimal_generators: Some(0),
        }
    }

    pub fn new(shape: Shape) -> Self {
        ModuleDescriptor {
            shape: shape.normalized(),
            minimal_generators: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.shape == Shape::Zero
    }

    /// Equality, read on the common range of degrees when either side is
    /// only known in a window.
    pub fn agrees(&self, other: &Self) -> bool {
        fn graded(s: &Shape) -> Option<(&BTreeMap<i64, usize>, i64, i64)> {
            match s {
                Shape::Window { dims, lo, hi } => Some((dims, *lo, *hi)),
                Shape::Vector { by_degree: Some(b), .. } => Some((b, i64::MIN, i64::MAX)),
                _ => None,
            }
        }
        let windowed = matches!(self.shape, Shape::Window { .. }) || matches!(other.shape, Shape::Window { .. });
        match (graded(&self.shape), graded(&other.shape)) {
            (Some((a, la, ha)), Some((b, lb, hb))) if windowed => {
                let (lo, hi) = (la.max(lb), ha.min(hb));
                a.iter()
                    .chain(b.iter())
                    .filter(|(d, _)| (lo..=hi).contains(*d))
                    .all(|(d, _)| a.get(d) == b.get(d))
            }
            _ => self == other,
        }
    }

    /// Total dimension over the coefficient field, when finite and known.
    pub fn total_dim(&self) -> Option<usize> {
        match &self.shape {
            Shape::Zero => Some(0),
            Shape::Vector { dim, .. } => Some(*dim),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "module": self.to_string() });
        match &self.shape {
            Shape::Abelian(f) => {
                v["invariant_factors"] = json!(f.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            }
            Shape::Vector { dim, by_degree } => {
                v["dim"] = json!(dim);
                if let Some(b) = by_degree {
                    v["by_degree"] = degree_map(b);
                }
            }
            Shape::Window { dims, lo, hi } => {
                v["by_degree"] = degree_map(dims);
                v["window"] = json!([lo, hi]);
            }
            Shape::Zero => {
                v["dim"] = json!(0);
            }
        }
        if let Some(n) = self.minimal_generators {
            v["nu"] = json!(n);
        }
        v
    }
}

fn degree_map(m: &BTreeMap<i64, usize>) -> Value {
    let mut o = serde_json::Map::new();
    for (d, n) in m {
        o.insert(d.to_string(), json!(n));
    }
    Value::Object(o)
}

impl Shape {
    fn normalized(self) -> Shape {
        match self {
            Shape::Abelian(f) if f.is_empty() => Shape::Zero,
            Shape::Vector { dim: 0, .. } => Shape::Zero,
            Shape::Vector { dim, by_degree } => Shape::Vector {
                dim,
                by_degree: by_degree.map(|m| m.into_iter().filter(|(_, n)| *n > 0).collect()),
            },
            Shape::Window { dims, lo, hi } => {
                let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|(_, n)| *n > 0).collect();
                if dims.is_empty() {
                    Shape::Zero
                } else {
                    Shape::Window { dims, lo, hi }
                }
            }
            s => s,
        }
    }
}

fn pieces(m: &BTreeMap<i64, usize>) -> String {
    m.iter()
        .map(|(d, n)| format!("{d}:{n}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for ModuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Zero => f.write_str("0"),
            Shape::Abelian(factors) => {
                let mut parts: Vec<String> = factors
                    .iter()
                    .filter(|x| !x.is_zero())
                    .map(|x| format!("Z/{x}"))
                    .collect();
                let free = factors.iter().filter(|x| x.is_zero()).count();
                match free {
                    0 => {}
                    1 => parts.push("Z".into()),
                    r => parts.push(format!("Z^{r}")),
                }
                f.write_str(&parts.join(" + "))
            }
            Shape::Vector { dim, by_degree } => {
                write!(f, "k^{dim}")?;
                if let Some(b) = by_degree {
                    write!(f, " ({})", pieces(b))?;
                }
                Ok(())
            }
            Shape::Window { dims, lo, hi } => write!(f, "graded in [{lo}, {hi}]: ({})", pieces(dims)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_strings() {
        let d = ModuleDescriptor::new(Shape::Abelian(vec![2.into(), 4.into()]));
        assert_eq!(d.to_string(), "Z/2 + Z/4");
        let d = ModuleDescriptor::new(Shape::Abelian(vec![0.into(), 0.into()]));
        assert_eq!(d.to_string(), "Z^2");
        assert!(ModuleDescriptor::new(Shape::Abelian(vec![])).is_zero());
    }

    #[test]
    fn equality_ignores_generator_count() {
        let mut a = ModuleDescriptor::new(Shape::Vector { dim: 2, by_degree: None });
        let b = a.clone();
        a.minimal_generators = Some(1);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "k^2");
    }
}
