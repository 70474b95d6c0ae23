//! Bundled example presentations with frozen expected results.

use std::sync::Arc;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::complexes::DEFAULT_SLACK;
use crate::criteria::{smooth_check, CheckOptions, Directions, SEPARABLE};
use crate::error::{Error, Result};
use crate::hochschild::{hochschild_cohomology, hochschild_homology, HochschildTable, TableOptions};
use crate::module::CoefficientModule;
use crate::resolutions::{deviations, is_p_closed, minimal_free_resolution, Surjection};
use crate::ring::AlgebraPresentation;

const FILES: &[(&str, &str)] = &[
    ("campillo", include_str!("../corpus/campillo.toml")),
    ("dual_numbers_f2", include_str!("../corpus/dual_numbers_f2.toml")),
    ("dual_numbers_f5", include_str!("../corpus/dual_numbers_f5.toml")),
    ("dual_numbers_q", include_str!("../corpus/dual_numbers_q.toml")),
    ("etale", include_str!("../corpus/etale.toml")),
    ("quadratic", include_str!("../corpus/quadratic.toml")),
    ("qx_poly", include_str!("../corpus/qx_poly.toml")),
    ("qxy_poly", include_str!("../corpus/qxy_poly.toml")),
    ("zsqrt2", include_str!("../corpus/zsqrt2.toml")),
];

const EXPECTED: &str = include_str!("../corpus/expected.json");

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub description: String,
    pub expected: Value,
}

/// One recomputed expectation.
#[derive(Clone, Debug)]
pub struct Check {
    pub key: String,
    pub expected: Value,
    pub computed: Value,
}

impl Check {
    pub fn agrees(&self) -> bool {
        self.expected == self.computed
    }
}

impl CorpusEntry {
    pub fn presentation(&self) -> Result<Arc<AlgebraPresentation>> {
        Ok(Arc::new(AlgebraPresentation::from_toml(self.source)?))
    }

    /// SHA-256 of the expected results in canonical JSON.
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(&self.expected).expect("json");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn verify(&self) -> Result<Vec<Check>> {
        let pres = self.presentation()?;
        let obj = self.expected.as_object().cloned().unwrap_or_default();
        obj.into_iter()
            .map(|(key, expected)| {
                let computed = compute(&pres, &key, &expected)?;
                Ok(Check { key, expected, computed })
            })
            .collect()
    }
}

fn len(v: &Value) -> usize {
    v.as_array().map(|a| a.len()).unwrap_or(1).max(1)
}

fn tables(pres: &Arc<AlgebraPresentation>, key: &str, n: usize) -> Result<HochschildTable> {
    let m = CoefficientModule::base_module(pres.clone());
    let opts = TableOptions::default();
    if key.starts_with("hcoh") {
        hochschild_cohomology(pres, &m, n, &opts)
    } else {
        hochschild_homology(pres, &m, n, &opts)
    }
}

fn compute(pres: &Arc<AlgebraPresentation>, key: &str, expected: &Value) -> Result<Value> {
    let n = len(expected) - 1;
    Ok(match key {
        "hh" | "hcoh" => {
            let t = tables(pres, key, n)?;
            json!(t.entries.iter().map(|e| e.descriptor.to_string()).collect::<Vec<_>>())
        }
        "hh_dims" | "hcoh_dims" => json!(tables(pres, key, n)?.dims()),
        "hh_vanishing" | "hcoh_vanishing" => {
            let t = tables(pres, key, n)?;
            json!((0..=n).map(|k| t.vanishes(k) == Some(true)).collect::<Vec<_>>())
        }
        "smooth_check" | "separable" => {
            let m = CoefficientModule::base_module(pres.clone());
            let c = smooth_check(pres, &m, 8, Directions::Both, &CheckOptions::default())?;
            if key == "smooth_check" {
                json!(c.outcome.label())
            } else {
                json!(c.separability.and_then(|s| s.conclusion).as_deref() == Some(SEPARABLE))
            }
        }
        "deviations" => {
            let phi = Surjection::from_presentation(pres.clone())?;
            let d = deviations(&phi, &phi.default_point()?, DEFAULT_SLACK)?;
            json!([d.eps2, d.eps3])
        }
        "closed" => {
            let phi = Surjection::from_presentation(pres.clone())?;
            let mut out = serde_json::Map::new();
            for p in [1u8, 2] {
                out.insert(p.to_string(), json!(is_p_closed(&phi, p, 2, DEFAULT_SLACK)?.closed));
            }
            Value::Object(out)
        }
        "resolution_ranks" => {
            let phi = Surjection::from_presentation(pres.clone())?;
            let target = CoefficientModule::new(
                pres.clone(),
                vec![0],
                crate::matrix::PolyMatrix::from_columns(1, phi.kernel.iter().map(|k| vec![k.clone()]).collect()),
            )?;
            json!(minimal_free_resolution(&target, n, DEFAULT_SLACK)?.ranks())
        }
        other => return Err(Error::Invalid(format!("unknown expectation `{other}`"))),
    })
}

pub fn corpus_list() -> Vec<CorpusEntry> {
    let expected: Value = serde_json::from_str(EXPECTED).expect("bundled expectations");
    FILES
        .iter()
        .map(|(name, source)| {
            let e = &expected[*name];
            CorpusEntry {
                name,
                source,
                description: e["description"].as_str().unwrap_or_default().to_string(),
                expected: e["expected"].clone(),
            }
        })
        .collect()
}

pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    corpus_list().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_parse_and_round_trip() {
        let list = corpus_list();
        assert!(list.len() >= 8);
        for e in &list {
            let p = e.presentation().unwrap();
            let again = AlgebraPresentation::from_toml(&p.to_toml()).unwrap();
            assert_eq!(*p, again, "{}", e.name);
            assert!(e.expected.is_object(), "{}", e.name);
            assert_eq!(e.digest().len(), 64);
        }
    }

    #[test]
    fn zsqrt2_expectations_hold() {
        let e = corpus_entry("zsqrt2").unwrap();
        for c in e.verify().unwrap() {
            assert!(c.agrees(), "{}: {} vs {}", c.key, c.expected, c.computed);
        }
    }
}
