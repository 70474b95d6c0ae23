//! Hochschild homology and cohomology tables.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::complexes::{FreeComplex, HomologyOptions, ModuleComplex, DEFAULT_SLACK};
use crate::descriptor::{ModuleDescriptor, Shape};
use crate::error::Result;
use crate::model::Point;
use crate::module::CoefficientModule;
use crate::ring::AlgebraPresentation;

use super::bar::bar_oracle;
use super::diagonal::{diagonal_resolution, enveloping, DiagonalResolution, Enveloping, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Homology,
    Cohomology,
}

impl Direction {
    pub fn label(&self) -> &'static str {
        match self {
            Direction::Homology => "homology",
            Direction::Cohomology => "cohomology",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub degree: usize,
    pub descriptor: ModuleDescriptor,
    /// False when the value is read off a window of graded pieces of an
    /// infinite-dimensional module.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct HochschildTable {
    pub direction: Direction,
    pub max_degree: usize,
    pub strategy: Strategy,
    pub entries: Vec<TableEntry>,
    pub caveats: Vec<String>,
}

impl HochschildTable {
    pub fn get(&self, n: usize) -> Option<&ModuleDescriptor> {
        self.entries.get(n).map(|e| &e.descriptor)
    }

    /// `Some(true)` for a certified zero, `Some(false)` for a nonzero value,
    /// `None` when only a window of degrees vanished.
    pub fn vanishes(&self, n: usize) -> Option<bool> {
        let e = self.entries.get(n)?;
        match (e.descriptor.is_zero(), e.exact) {
            (false, _) => Some(false),
            (true, true) => Some(true),
            (true, false) => None,
        }
    }

    pub fn dims(&self) -> Vec<Option<usize>> {
        self.entries.iter().map(|e| e.descriptor.total_dim()).collect()
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "degree": e.degree,
                    "descriptor": e.descriptor.to_json(),
                    "exact": e.exact,
                    "strategy": self.strategy.label(),
                })
            })
            .collect();
        json!({
            "direction": self.direction.label(),
            "max_degree": self.max_degree,
            "strategy": self.strategy.label(),
            "entries": entries,
            "caveats": self.caveats,
        })
    }

    pub fn to_text(&self) -> String {
        let name = match self.direction {
            Direction::Homology => "HH_",
            Direction::Cohomology => "HH^",
        };
        let mut s = format!("{} via {} resolution\n", self.direction.label(), self.strategy);
        for e in &self.entries {
            let mut line = format!("  {name}{} = {}", e.degree, e.descriptor);
            if let Some(nu) = e.descriptor.minimal_generators {
                line.push_str(&format!("    [nu = {nu}]"));
            }
            if !e.exact {
                line.push_str("    (windowed)");
            }
            s.push_str(&line);
            s.push('\n');
        }
        for c in &self.caveats {
            s.push_str(&format!("  note: {c}\n"));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub strategy: Strategy,
    pub slack: i64,
    /// Point of `S` at which `ν` is evaluated; the default point when unset.
    pub point: Option<Point>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            strategy: Strategy::Auto,
            slack: DEFAULT_SLACK,
            point: None,
        }
    }
}

/// Irrelevant ideal when graded, else the first declared point.
pub fn default_point(pres: &AlgebraPresentation) -> Option<Point> {
    if pres.is_graded() {
        Some(Point::Irrelevant)
    } else {
        pres.points().first().map(|p| Point::Ideal(p.clone()))
    }
}

/// A resolution of `S` over `S ⊗ S` together with its base change to `S`.
#[derive(Clone, Debug)]
pub struct Hochschild {
    pub env: Enveloping,
    pub resolution: DiagonalResolution,
    /// `P ⊗_{S⊗S} S`.
    pub reduced: FreeComplex,
    pub slack: i64,
}

impl Hochschild {
    pub fn new(pres: &Arc<AlgebraPresentation>, strategy: Strategy, cutoff: usize, slack: i64) -> Result<Self> {
        let env = enveloping(pres)?;
        let resolution = diagonal_resolution(&env, strategy, cutoff, slack)?;
        let reduced = resolution.complex.tensor_over_base(&env.multiplication().map)?;
        Ok(Hochschild {
            env,
            resolution,
            reduced,
            slack,
        })
    }

    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        self.env.algebra()
    }

    pub fn complex(&self, direction: Direction, m: &CoefficientModule) -> ModuleComplex {
        match direction {
            Direction::Homology => ModuleComplex::tensor(&self.reduced, m),
            Direction::Cohomology => ModuleComplex::hom(&self.reduced, m),
        }
    }

    /// Index of `HH_n` or `HH^n` in [`Hochschild::complex`].
    pub fn index(direction: Direction, n: usize) -> i64 {
        match direction {
            Direction::Homology => n as i64,
            Direction::Cohomology => -(n as i64),
        }
    }

    pub fn table(&self, direction: Direction, m: &CoefficientModule, max_degree: usize, point: Option<Point>) -> Result<HochschildTable> {
        let mc = self.complex(direction, m);
        let model = mc.model()?;
        let opts = HomologyOptions {
            slack: self.slack,
            point,
        };
        let mut entries = Vec::new();
        let mut windowed = false;
        for n in 0..=max_degree {
            let k = Self::index(direction, n);
            let descriptor = mc.homology(k, &opts)?;
            let exact = model.is_exhaustive() || mc.term_degrees(k).is_empty();
            windowed |= !exact;
            entries.push(TableEntry {
                degree: n,
                descriptor,
                exact,
            });
        }
        let mut caveats = Vec::new();
        if windowed {
            caveats.push(format!(
                "graded pieces examined up to {} degrees above the generators",
                self.slack
            ));
        }
        if direction == Direction::Cohomology && self.reduced.end() as usize >= max_degree + 1 {
            caveats.push(format!("resolution truncated; values reported through degree {max_degree}"));
        }
        Ok(HochschildTable {
            direction,
            max_degree,
            strategy: self.resolution.strategy,
            entries,
            caveats,
        })
    }
}

fn bar_table(pres: &Arc<AlgebraPresentation>, m: &CoefficientModule, n: usize, direction: Direction) -> Result<HochschildTable> {
    let dims = bar_oracle(pres, m, n, direction)?;
    Ok(HochschildTable {
        direction,
        max_degree: n,
        strategy: Strategy::Bar,
        entries: dims
            .into_iter()
            .enumerate()
            .map(|(degree, dim)| TableEntry {
                degree,
                descriptor: ModuleDescriptor::new(Shape::Vector { dim, by_degree: None }),
                exact: true,
            })
            .collect(),
        caveats: vec!["dimensions over the coefficient field from the normalized bar complex".into()],
    })
}

fn table(pres: &Arc<AlgebraPresentation>, m: &CoefficientModule, n: usize, direction: Direction, opts: &TableOptions) -> Result<HochschildTable> {
    if opts.strategy == Strategy::Bar {
        return bar_table(pres, m, n, direction);
    }
    let h = Hochschild::new(pres, opts.strategy, n + 1, opts.slack)?;
    let point = opts.point.clone().or_else(|| default_point(pres));
    h.table(direction, m, n, point)
}

/// `HH_n(K, S, M)` for `0 <= n <= max_degree`.
pub fn hochschild_homology(
    pres: &Arc<AlgebraPresentation>,
    m: &CoefficientModule,
    max_degree: usize,
    opts: &TableOptions,
) -> Result<HochschildTable> {
    table(pres, m, max_degree, Direction::Homology, opts)
}

/// `HH^n(K, S, M)` for `0 <= n <= max_degree`.
pub fn hochschild_cohomology(
    pres: &Arc<AlgebraPresentation>,
    m: &CoefficientModule,
    max_degree: usize,
    opts: &TableOptions,
) -> Result<HochschildTable> {
    table(pres, m, max_degree, Direction::Cohomology, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> Arc<AlgebraPresentation> {
        Arc::new(AlgebraPresentation::from_toml(s).unwrap())
    }

    fn strings(t: &HochschildTable) -> Vec<String> {
        t.entries.iter().map(|e| e.descriptor.to_string()).collect()
    }

    #[test]
    fn sqrt_two_over_z() {
        let s = pres("ring = \"Z\"\nvars = [\"t\"]\nrelations = [\"t^2 - 2\"]\nmaximal_ideals = [[\"t\"]]\n");
        let m = CoefficientModule::base_module(s.clone());
        let h = hochschild_homology(&s, &m, 5, &TableOptions::default()).unwrap();
        assert_eq!(strings(&h), ["Z^2", "Z/2 + Z/4", "0", "Z/2 + Z/4", "0", "Z/2 + Z/4"]);
        assert_eq!(h.entries[1].descriptor.minimal_generators, Some(1));
        let c = hochschild_cohomology(&s, &m, 4, &TableOptions::default()).unwrap();
        assert_eq!(strings(&c), ["Z^2", "0", "Z/2 + Z/4", "0", "Z/2 + Z/4"]);
    }

    #[test]
    fn polynomial_ring() {
        let s = pres("ring = \"Q\"\nvars = [\"x\"]\nrelations = []\n");
        let m = CoefficientModule::base_module(s.clone());
        let h = hochschild_homology(&s, &m, 3, &TableOptions::default()).unwrap();
        assert_eq!(h.strategy, Strategy::Koszul);
        assert_eq!(h.vanishes(2), Some(true));
        assert_eq!(h.vanishes(1), Some(false));
        assert_eq!(h.entries[1].descriptor.to_string(), "graded in [1, 7]: (1:1, 2:1, 3:1, 4:1, 5:1, 6:1, 7:1)");
        let c = hochschild_cohomology(&s, &m, 2, &TableOptions::default()).unwrap();
        assert_eq!(c.vanishes(2), Some(true));
        assert!(!c.entries[1].descriptor.is_zero());
    }

    #[test]
    fn strategies_agree_on_dual_numbers() {
        let s = pres("ring = \"Fp:5\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n");
        let m = CoefficientModule::base_module(s.clone());
        let mut tables = Vec::new();
        for strategy in [Strategy::Periodic, Strategy::Tate, Strategy::Minimal] {
            let opts = TableOptions {
                strategy,
                ..Default::default()
            };
            tables.push(hochschild_homology(&s, &m, 4, &opts).unwrap());
            tables.push(hochschild_cohomology(&s, &m, 4, &opts).unwrap());
        }
        for pair in tables.chunks(2).skip(1) {
            assert_eq!(strings(&pair[0]), strings(&tables[0]));
            assert_eq!(strings(&pair[1]), strings(&tables[1]));
        }
        let dims: Vec<Option<usize>> = tables[0].dims();
        assert_eq!(dims, vec![Some(2), Some(1), Some(1), Some(1), Some(1)]);
        assert_eq!(tables[1].dims(), vec![Some(2), Some(1), Some(1), Some(1), Some(1)]);
    }
}
