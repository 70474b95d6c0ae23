use std::sync::Arc;

use serde::Deserialize;

use crate::descriptor::ModuleDescriptor;
use crate::error::{Error, Result};
use crate::linalg::Space;
use crate::matrix::PolyMatrix;
use crate::model::{Model, Point, Subquotient};
use crate::ring::presentation::line_col;
use crate::ring::AlgebraPresentation;

/// Finitely presented module `coker(relations : S^q -> S^b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientModule {
    pub base: Arc<AlgebraPresentation>,
    pub degrees: Vec<i64>,
    pub relations: PolyMatrix,
    pub relation_degrees: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleFile {
    degrees: Vec<i64>,
    #[serde(default)]
    relations: Vec<Vec<toml::Spanned<String>>>,
}

impl CoefficientModule {
    pub fn free(base: Arc<AlgebraPresentation>, degrees: Vec<i64>) -> Self {
        let n = degrees.len();
        CoefficientModule {
            base,
            degrees,
            relations: PolyMatrix::zeros(n, 0),
            relation_degrees: Vec::new(),
        }
    }

    /// The base itself, generated in degree 0.
    pub fn base_module(base: Arc<AlgebraPresentation>) -> Self {
        Self::free(base, vec![0])
    }

    pub fn new(base: Arc<AlgebraPresentation>, degrees: Vec<i64>, relations: PolyMatrix) -> Result<Self> {
        if relations.rows() != degrees.len() {
            return Err(Error::Invalid("relation length differs from the generator count".into()));
        }
        let relations = relations.map(|p| base.normal_form(p));
        let keep: Vec<usize> = (0..relations.cols())
            .filter(|&j| relations.column(j).iter().any(|p| !p.is_zero()))
            .collect();
        let relations =
            PolyMatrix::from_columns(degrees.len(), keep.iter().map(|&j| relations.column(j)).collect());
        let ring = base.ring();
        let mut relation_degrees = Vec::new();
        for j in 0..relations.cols() {
            let mut deg = None;
            for (i, p) in relations.column(j).iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let d = ring.homogeneous_degree(p).map(|d| d + degrees[i]);
                if deg.is_none() {
                    deg = Some(d);
                } else if deg != Some(d) {
                    deg = Some(None);
                }
            }
            relation_degrees.push(match deg.flatten() {
                Some(d) if base.is_graded() => d,
                _ => {
                    if base.is_graded() && !base.is_finite() {
                        return Err(Error::NotGraded(format!("relation {} is not homogeneous", j + 1)));
                    }
                    0
                }
            });
        }
        Ok(CoefficientModule {
            base,
            degrees,
            relations,
            relation_degrees,
        })
    }

    pub fn from_toml(base: Arc<AlgebraPresentation>, text: &str) -> Result<Self> {
        let file: ModuleFile = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map(|s| line_col(text, s.start)).unwrap_or((1, 1));
            Error::parse(line, column, e.message().to_string())
        })?;
        let mut cols = Vec::new();
        for rel in &file.relations {
            if rel.len() != file.degrees.len() {
                let (line, column) = rel
                    .first()
                    .map(|s| line_col(text, s.span().start))
                    .unwrap_or((1, 1));
                return Err(Error::parse(line, column, "relation length differs from the generator count"));
            }
            let mut col = Vec::new();
            for s in rel {
                let (line, col0) = line_col(text, s.span().start);
                let p = base.ring().parse_at(s.get_ref(), line).map_err(|e| match e {
                    Error::Parse { column, message, .. } => Error::parse(line, col0 + column, message),
                    other => other,
                })?;
                col.push(p);
            }
            cols.push(col);
        }
        let n = file.degrees.len();
        Self::new(base, file.degrees, PolyMatrix::from_columns(n, cols))
    }

    pub fn to_toml(&self) -> String {
        let degs: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        let rels: Vec<String> = (0..self.relations.cols())
            .map(|j| {
                let entries: Vec<String> = self
                    .relations
                    .column(j)
                    .iter()
                    .map(|p| format!("\"{}\"", self.base.format(p)))
                    .collect();
                format!("[{}]", entries.join(", "))
            })
            .collect();
        format!("degrees = [{}]\nrelations = [{}]\n", degs.join(", "), rels.join(", "))
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_free(&self) -> bool {
        self.relations.cols() == 0
    }

    pub(crate) fn is_homogeneous(&self) -> bool {
        self.relations
            .is_homogeneous(self.base.ring(), &self.relation_degrees, &self.degrees)
    }

    /// Descriptor of the module itself.
    pub fn descriptor(&self, slack: i64, point: Option<&Point>) -> Result<ModuleDescriptor> {
        let model = Model::choose(&self.base, self.is_homogeneous())?;
        let sq = self.as_subquotient(&model, slack)?;
        sq.descriptor(point)
    }

    pub(crate) fn as_subquotient<'m>(&self, model: &'m Model, slack: i64) -> Result<Subquotient<'m>> {
        let pieces = model.window(&self.degrees, slack);
        let mut z = Vec::new();
        let mut b = Vec::new();
        for p in &pieces {
            let n = model.layout(&self.degrees, *p).len;
            z.push(Space::full(&model.arith, n));
            b.push(
                model
                    .expand_at(&self.relations, &self.relation_degrees, &self.degrees, *p)?
                    .image(&model.arith),
            );
        }
        Ok(Subquotient {
            model,
            degs: self.degrees.clone(),
            pieces,
            z,
            b,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_file_round_trip() {
        let s = Arc::new(
            AlgebraPresentation::from_toml("ring = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = [\"x^2\", \"x*y\"]\n")
                .unwrap(),
        );
        let text = "degrees = [0, 1]\nrelations = [[\"y\", \"0\"], [\"x^2\", \"x\"]]\n";
        let m = CoefficientModule::from_toml(s.clone(), text).unwrap();
        assert_eq!(m.relation_degrees, vec![1, 2]);
        let printed = m.to_toml();
        assert_eq!(printed, "degrees = [0, 1]\nrelations = [[\"y\", \"0\"], [\"0\", \"x\"]]\n");
        assert_eq!(CoefficientModule::from_toml(s.clone(), &printed).unwrap(), m);
        assert!(matches!(
            CoefficientModule::from_toml(s, "degrees = [0]\nrelations = [[\"z\"]]\n"),
            Err(Error::Parse { line: 2, column: 16, .. })
        ));
    }

    #[test]
    fn residue_field_of_dual_numbers() {
        let s = Arc::new(AlgebraPresentation::from_toml("ring = \"Q\"\nvars = [\"x\"]\nrelations = [\"x^2\"]\n").unwrap());
        let k = CoefficientModule::new(s.clone(), vec![0], PolyMatrix::from_columns(1, vec![vec![s.ring().var(0)]])).unwrap();
        let d = k.descriptor(4, Some(&Point::Irrelevant)).unwrap();
        assert_eq!(d.to_string(), "k^1 (0:1)");
        assert_eq!(d.minimal_generators, Some(1));
    }
}
