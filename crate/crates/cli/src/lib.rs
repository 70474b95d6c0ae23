//! Job descriptions and their execution for the `hhgap` binary.

use std::fmt::Write as _;
use std::fs;
use std::sync::Arc;

use serde_json::{json, Value};

use hhgap_core::complexes::DEFAULT_SLACK;
use hhgap_core::corpus::{corpus_entry, corpus_list};
use hhgap_core::criteria::{point_label, smooth_check, CheckOptions, Directions};
use hhgap_core::hochschild::{
    bar_oracle, enveloping, hkr_map, hochschild_cohomology, hochschild_homology, Direction, Hochschild, Strategy,
    TableOptions,
};
use hhgap_core::matrix::PolyMatrix;
use hhgap_core::module::CoefficientModule;
use hhgap_core::resolutions::{
    deviations, is_p_closed, minimal_free_resolution, tate_stage, Surjection,
};
use hhgap_core::ring::AlgebraPresentation;
use hhgap_core::{Error, Result};

pub const DEFAULT_MAX_DEGREE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Koszul,
    Tate,
    Minimal,
}

impl Kind {
    fn label(&self) -> &'static str {
        match self {
            Kind::Koszul => "koszul",
            Kind::Tate => "tate",
            Kind::Minimal => "minimal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Resolve { kind: Kind },
    Hh { hkr: bool },
    Hcoh { hkr: bool },
    Deviations,
    Closed { p: Vec<u8> },
    SmoothCheck { directions: Directions },
    Oracle { directions: Directions },
    Corpus { verify: bool },
}

impl Command {
    fn label(&self) -> &'static str {
        match self {
            Command::Resolve { .. } => "resolve",
            Command::Hh { .. } => "hh",
            Command::Hcoh { .. } => "hcoh",
            Command::Deviations => "deviations",
            Command::Closed { .. } => "closed",
            Command::SmoothCheck { .. } => "smooth-check",
            Command::Oracle { .. } => "oracle",
            Command::Corpus { .. } => "corpus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    /// A file path, or `corpus:NAME` for a bundled presentation.
    pub algebra: Option<String>,
    /// A module file, or `S` for the algebra itself.
    pub module: Option<String>,
    pub max_degree: usize,
    pub strategy: Strategy,
    pub format: Format,
    pub interval_override: Option<usize>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            algebra: None,
            module: None,
            max_degree: DEFAULT_MAX_DEGREE,
            strategy: Strategy::Auto,
            format: Format::Text,
            interval_override: None,
        }
    }

    fn echo(&self) -> Value {
        json!({
            "command": self.command.label(),
            "algebra": self.algebra,
            "module": self.module.clone().unwrap_or_else(|| "S".into()),
            "max_degree": self.max_degree,
            "strategy": self.strategy.label(),
            "interval_override": self.interval_override,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub job: Value,
    pub results: Value,
    pub caveats: Vec<String>,
    pub text: String,
    /// 0 success or certified, 2 criterion not met or inconclusive.
    pub exit_code: i32,
}

impl Report {
    /// Keys are sorted, so equal jobs give equal bytes.
    pub fn to_json_string(&self) -> String {
        let v = json!({
            "job": self.job,
            "results": self.results,
            "caveats": self.caveats,
        });
        serde_json::to_string_pretty(&v).expect("json") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json_string(),
            Format::Text => {
                let mut s = self.text.clone();
                for c in &self.caveats {
                    let _ = writeln!(s, "caveat: {c}");
                }
                s
            }
        }
    }
}

pub fn load_algebra(spec: &str) -> Result<Arc<AlgebraPresentation>> {
    if let Some(name) = spec.strip_prefix("corpus:") {
        let e = corpus_entry(name).ok_or_else(|| Error::Invalid(format!("no corpus entry `{name}`")))?;
        return e.presentation();
    }
    let text = fs::read_to_string(spec).map_err(|e| Error::Invalid(format!("{spec}: {e}")))?;
    Ok(Arc::new(AlgebraPresentation::from_toml(&text)?))
}

fn load_module(pres: &Arc<AlgebraPresentation>, spec: Option<&str>) -> Result<CoefficientModule> {
    match spec {
        None | Some("S") => Ok(CoefficientModule::base_module(pres.clone())),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
            CoefficientModule::from_toml(pres.clone(), &text)
        }
    }
}

/// The surjection in the file, else the multiplication map of `S`.
fn surjection(pres: &Arc<AlgebraPresentation>, caveats: &mut Vec<String>) -> Result<Surjection> {
    if pres.kernel().is_empty() {
        caveats.push("no kernel declared; using the multiplication map S ⊗ S -> S".into());
        Ok(enveloping(pres)?.multiplication().clone())
    } else {
        Surjection::from_presentation(pres.clone())
    }
}

fn residue_field(pres: &Arc<AlgebraPresentation>) -> Result<CoefficientModule> {
    let ring = pres.ring();
    let cols = (0..ring.nvars()).map(|i| vec![ring.var(i)]).collect();
    CoefficientModule::new(pres.clone(), vec![0], PolyMatrix::from_columns(1, cols))
}

pub fn run(job: &JobSpec) -> Result<Report> {
    let mut caveats = Vec::new();
    let mut exit_code = 0;
    let mut text = String::new();
    let n = job.max_degree;
    let pres = || -> Result<Arc<AlgebraPresentation>> {
        let spec = job
            .algebra
            .as_deref()
            .ok_or_else(|| Error::Invalid("--algebra is required".into()))?;
        load_algebra(spec)
    };
    let table_opts = TableOptions {
        strategy: job.strategy,
        ..Default::default()
    };

    let results = match &job.command {
        Command::Resolve { kind } => {
            let pres = pres()?;
            let complex = match kind {
                Kind::Minimal => {
                    let module = match job.module.as_deref() {
                        Some(_) => load_module(&pres, job.module.as_deref())?,
                        None if !pres.kernel().is_empty() => {
                            let cols = pres.kernel().iter().map(|k| vec![k.clone()]).collect();
                            CoefficientModule::new(pres.clone(), vec![0], PolyMatrix::from_columns(1, cols))?
                        }
                        None => {
                            caveats.push("no module or kernel given; resolving the residue field".into());
                            residue_field(&pres)?
                        }
                    };
                    minimal_free_resolution(&module, n, DEFAULT_SLACK)?
                }
                Kind::Koszul | Kind::Tate => {
                    let phi = surjection(&pres, &mut caveats)?;
                    let p = if *kind == Kind::Koszul { 1 } else { 2 };
                    let stage = tate_stage(&phi, p, n, &phi.default_point()?, DEFAULT_SLACK)?;
                    if p == 2 {
                        caveats.push(format!("divided powers truncated at degree {n}"));
                    }
                    stage.complex().clone()
                }
            };
            text.push_str(&format!("{} resolution\n", kind.label()));
            text.push_str(&complex.to_text());
            json!({ "kind": kind.label(), "complex": complex.to_json() })
        }
        Command::Hh { hkr } | Command::Hcoh { hkr } => {
            let pres = pres()?;
            let m = load_module(&pres, job.module.as_deref())?;
            let direction = if matches!(job.command, Command::Hh { .. }) {
                Direction::Homology
            } else {
                Direction::Cohomology
            };
            let table = match direction {
                Direction::Homology => hochschild_homology(&pres, &m, n, &table_opts)?,
                Direction::Cohomology => hochschild_cohomology(&pres, &m, n, &table_opts)?,
            };
            text.push_str(&table.to_text());
            let mut out = table.to_json();
            caveats.extend(table.caveats.iter().cloned());
            if *hkr {
                if job.strategy == Strategy::Bar {
                    return Err(Error::Invalid("the comparison maps need a resolution strategy".into()));
                }
                let h = Hochschild::new(&pres, job.strategy, n + 1, DEFAULT_SLACK)?;
                let mut maps = Vec::new();
                for k in 0..=n {
                    let r = hkr_map(&h, direction, &m, k)?;
                    text.push_str(&format!(
                        "  lambda {k}: {} -> {} ({}, {})\n",
                        r.forms,
                        r.hochschild,
                        if r.bijective { "bijective" } else { "not bijective" },
                        r.method
                    ));
                    maps.push(r.to_json());
                }
                out["hkr"] = json!(maps);
            }
            out
        }
        Command::Deviations => {
            let pres = pres()?;
            let phi = surjection(&pres, &mut caveats)?;
            let mut rows = Vec::new();
            for p in phi.points()? {
                let d = deviations(&phi, &p, DEFAULT_SLACK)?;
                let label = point_label(phi.target(), &p);
                text.push_str(&format!("at {label}: eps2 = {}, eps3 = {}\n", d.eps2, d.eps3));
                rows.push(json!({ "point": label, "eps2": d.eps2, "eps3": d.eps3 }));
            }
            json!({ "deviations": rows })
        }
        Command::Closed { p } => {
            let pres = pres()?;
            let phi = surjection(&pres, &mut caveats)?;
            let mut certs = Vec::new();
            for &p in p {
                let c = is_p_closed(&phi, p, n, DEFAULT_SLACK)?;
                text.push_str(&format!(
                    "{p}-closed: {} (eps2 = {}, eps3 = {}, degrees through {})\n",
                    c.closed, c.eps2, c.eps3, c.checked_through
                ));
                for d in &c.degrees {
                    text.push_str(&format!(
                        "  degree {}: rank k⊗G = {}, rank Tor = {}, rank image = {}{}\n",
                        d.degree,
                        d.rank_g,
                        d.rank_f,
                        d.rank_image,
                        if d.injective { "" } else { "  not injective" }
                    ));
                }
                if c.truncated {
                    caveats.push(format!("{p}-closed: cutoff below the socle degree {}", c.eps2));
                }
                certs.push(serde_json::to_value(&c).expect("json"));
            }
            json!({ "certificates": certs })
        }
        Command::SmoothCheck { directions } => {
            let pres = pres()?;
            let m = load_module(&pres, job.module.as_deref())?;
            let opts = CheckOptions {
                table: table_opts,
                interval_override: job.interval_override,
            };
            let c = smooth_check(&pres, &m, n, *directions, &opts)?;
            for t in &c.tables {
                caveats.extend(t.caveats.iter().cloned());
            }
            if let Some(k) = job.interval_override {
                caveats.push(format!("interval length {k} is experimental and never certifies"));
            }
            text.push_str(&c.to_text());
            if !c.outcome.is_certified() {
                exit_code = 2;
            }
            c.to_json()
        }
        Command::Oracle { directions } => {
            let pres = pres()?;
            let m = load_module(&pres, job.module.as_deref())?;
            let mut out = serde_json::Map::new();
            for d in directions.list() {
                let dims = bar_oracle(&pres, &m, n, d)?;
                text.push_str(&format!("{} dimensions: {:?}\n", d.label(), dims));
                out.insert(d.label().into(), json!(dims));
            }
            Value::Object(out)
        }
        Command::Corpus { verify } => {
            let mut rows = Vec::new();
            for e in corpus_list() {
                let mut row = json!({
                    "name": e.name,
                    "description": e.description,
                    "digest": e.digest(),
                });
                text.push_str(&format!("{:<16} {}  {}\n", e.name, e.digest(), e.description));
                if *verify {
                    let checks = e.verify()?;
                    let ok = checks.iter().all(|c| c.agrees());
                    for c in checks.iter().filter(|c| !c.agrees()) {
                        text.push_str(&format!("  mismatch {}: expected {}, computed {}\n", c.key, c.expected, c.computed));
                    }
                    if !ok {
                        exit_code = 1;
                    }
                    row["verified"] = json!(ok);
                }
                rows.push(row);
            }
            json!({ "entries": rows })
        }
    };
    let mut seen = std::collections::BTreeSet::new();
    caveats.retain(|c| seen.insert(c.clone()));
    Ok(Report {
        job: job.echo(),
        results,
        caveats,
        text,
        exit_code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(command: Command, algebra: &str) -> JobSpec {
        let mut j = JobSpec::new(command);
        j.algebra = Some(algebra.into());
        j
    }

    #[test]
    fn unknown_corpus_name_is_an_error() {
        assert!(load_algebra("corpus:nope").is_err());
        assert!(run(&job(Command::Deviations, "corpus:nope")).is_err());
    }

    #[test]
    fn missing_algebra_is_an_error() {
        assert!(run(&JobSpec::new(Command::Hh { hkr: false })).is_err());
    }

    #[test]
    fn diagonal_used_without_kernel() {
        let r = run(&job(Command::Deviations, "corpus:quadratic")).unwrap();
        assert_eq!(r.exit_code, 0);
        assert!(r.caveats[0].contains("multiplication map"));
        assert_eq!(r.results["deviations"][0]["eps3"], 0);
    }

    #[test]
    fn not_met_exits_with_two() {
        let mut j = job(Command::SmoothCheck { directions: Directions::Homology }, "corpus:dual_numbers_q");
        j.max_degree = 4;
        let r = run(&j).unwrap();
        assert_eq!(r.exit_code, 2);
        assert_eq!(r.results["outcome"], "criterion-not-met");
    }

    #[test]
    fn job_echo_has_sorted_keys() {
        let r = run(&job(Command::Oracle { directions: Directions::Homology }, "corpus:etale")).unwrap();
        let s = r.to_json_string();
        let keys: Vec<usize> = ["\"caveats\"", "\"job\"", "\"results\""].iter().map(|k| s.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(r.render(Format::Text).contains("homology dimensions: [2, 0, 0"));
    }
}
