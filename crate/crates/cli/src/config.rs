//! JSON run configuration: body and set descriptors, grids, tolerances.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pextremal::{ConvexBody, GridSpec, PlanarSet, ProductSetSpec};
use serde::{Deserialize, Deserializer};

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    EvalGrid,
    Check,
    MaGrid,
    ExploreSupport,
    ApproxBody,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BodyDescriptor {
    Polytope { vertices: Vec<Vec<f64>> },
    Lq {
        d: usize,
        #[serde(deserialize_with = "de_exponent")]
        q: f64,
    },
}

impl BodyDescriptor {
    pub fn build(&self) -> Result<ConvexBody, pextremal::Error> {
        match self {
            BodyDescriptor::Polytope { vertices } => ConvexBody::polytope(vertices.clone()),
            BodyDescriptor::Lq { d, q } => ConvexBody::lq_ball(*d, *q),
        }
    }
}

/// `q` is a number `>= 1` or the string `"inf"`.
fn de_exponent<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Word(String),
    }
    match Raw::deserialize(de)? {
        Raw::Num(q) => Ok(q),
        Raw::Word(w) if w.eq_ignore_ascii_case("inf") => Ok(f64::INFINITY),
        Raw::Word(w) => Err(serde::de::Error::custom(format!(
            "q must be a number or \"inf\", got \"{w}\""
        ))),
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, Deserialize)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub body: Option<BodyDescriptor>,
    pub sets: Option<Vec<PlanarSet>>,
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<OutputSpec>,
    #[serde(default)]
    pub seed: u64,
    pub suite: Option<String>,
    pub refine: Option<u32>,
    pub smoothing: Option<f64>,
    pub approx_level: Option<u32>,
    pub q: Option<f64>,
}

impl RunConfig {
    pub fn body(&self) -> Result<ConvexBody, String> {
        self.body
            .as_ref()
            .ok_or_else(|| "config is missing \"body\"".to_string())?
            .build()
            .map_err(|e| format!("invalid body: {e}"))
    }

    pub fn sets(&self) -> Result<ProductSetSpec, String> {
        let factors = self
            .sets
            .clone()
            .ok_or_else(|| "config is missing \"sets\"".to_string())?;
        for s in &factors {
            validate_set(s)?;
        }
        ProductSetSpec::new(factors).map_err(|e| format!("invalid sets: {e}"))
    }

    pub fn grid(&self) -> Result<GridSpec, String> {
        let g = self
            .grid
            .clone()
            .ok_or_else(|| "config is missing \"grid\"".to_string())?;
        if g.axes.is_empty() {
            return Err("grid needs at least one axis".into());
        }
        for a in &g.axes {
            if a.nx < 2 || a.ny < 2 || a.x.0 >= a.x.1 || a.y.0 >= a.y.1 {
                return Err("grid axes need ordered ranges and counts >= 2".into());
            }
        }
        Ok(g)
    }
}

fn validate_set(s: &PlanarSet) -> Result<(), String> {
    match *s {
        PlanarSet::Interval { a, b } => {
            PlanarSet::interval(a, b).map(|_| ()).map_err(|e| e.to_string())
        }
        PlanarSet::Disk { center, r } => PlanarSet::disk(Complex64::new(center.0, center.1), r)
            .map(|_| ())
            .map_err(|e| e.to_string()),
        PlanarSet::Circle => Ok(()),
    }
}
