//! Scene files: which chart, which points, which checks.

use std::collections::BTreeMap;

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use equiaffine::calabi::{compose_chart, CompositionSpec, Factor};
use equiaffine::catalog::CatalogSpec;
use equiaffine::{parse_chart, ChartDef};

use crate::exit::{chart_error, scene_error, Failure};

pub const CHECKS: &[&str] = &[
    "invariants",
    "apolarity",
    "gauss",
    "codazzi",
    "hypersphere",
    "parallel",
    "dual",
    "composition",
    "mean_curvature",
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub chart: ChartScene,
    #[serde(default)]
    pub points: Option<PointsScene>,
    #[serde(default)]
    pub checks: Option<Checks>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartScene {
    pub catalog: Option<String>,
    pub dsl: Option<String>,
    pub composition: Option<CompositionScene>,
    /// Sampling box override, one `[lo, hi]` per coordinate.
    pub domain: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionScene {
    pub r: usize,
    #[serde(default)]
    pub factors: Vec<String>,
    /// Defaults to all ones.
    pub constants: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PointsScene {
    /// `"random N seed S"`, `"random N"` or `"a,b; c,d"`.
    Text(String),
    Explicit(Vec<Vec<f64>>),
    Random { random: usize, seed: Option<u64> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Checks {
    One(String),
    Many(Vec<String>),
}

pub fn parse_scene(text: &str) -> Result<Scene, Failure> {
    toml::from_str(text).map_err(|e| scene_error(anyhow::anyhow!("scene: {e}")))
}

/// Which points to evaluate.
#[derive(Clone, Debug, PartialEq)]
pub enum PointSet {
    Random { count: usize, seed: u64 },
    Explicit(Vec<Vec<f64>>),
}

impl PointSet {
    pub fn parse(text: &str, seed: u64) -> anyhow::Result<Self> {
        let t = text.trim();
        let words: Vec<&str> = t.split_whitespace().collect();
        if let ["random", n, rest @ ..] = words.as_slice() {
            let count = n.parse().with_context(|| format!("bad point count '{n}'"))?;
            let seed = match rest {
                [] => seed,
                ["seed", s] => s.parse().with_context(|| format!("bad seed '{s}'"))?,
                _ => bail!("expected 'random N [seed S]', got '{t}'"),
            };
            return Ok(PointSet::Random { count, seed });
        }
        if let Ok(count) = t.parse::<usize>() {
            return Ok(PointSet::Random { count, seed });
        }
        let points = t
            .split(';')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.split(',')
                    .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad coordinate '{}'", v.trim())))
                    .collect::<anyhow::Result<Vec<f64>>>()
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        if points.is_empty() {
            bail!("no points given");
        }
        Ok(PointSet::Explicit(points))
    }

    pub fn from_scene(points: &PointsScene, seed: u64) -> anyhow::Result<Self> {
        Ok(match points {
            PointsScene::Text(t) => Self::parse(t, seed)?,
            PointsScene::Explicit(p) => PointSet::Explicit(p.clone()),
            PointsScene::Random { random, seed: s } => PointSet::Random { count: *random, seed: s.unwrap_or(seed) },
        })
    }

    /// Concrete coordinates; random draws are uniform in the chart's box.
    pub fn realize(&self, chart: &ChartDef<f64>) -> Result<Vec<Vec<f64>>, Failure> {
        match self {
            PointSet::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..*count)
                    .map(|_| chart.domain.iter().map(|&(lo, hi)| if lo < hi { rng.gen_range(lo..=hi) } else { lo }).collect())
                    .collect())
            }
            PointSet::Explicit(points) => {
                if let Some(p) = points.iter().find(|p| p.len() != chart.dim()) {
                    return Err(chart_error(anyhow::anyhow!(
                        "point {p:?} has {} coordinates, chart '{}' has dimension {}",
                        p.len(),
                        chart.label,
                        chart.dim()
                    )));
                }
                Ok(points.clone())
            }
        }
    }
}

pub fn check_list(checks: &Checks) -> Result<Vec<String>, Failure> {
    let names: Vec<String> = match checks {
        Checks::One(s) => s.split(',').map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect(),
        Checks::Many(v) => v.clone(),
    };
    for n in &names {
        if n != "all" && !CHECKS.contains(&n.as_str()) {
            return Err(scene_error(anyhow::anyhow!("unknown check '{n}' (known: all, {})", CHECKS.join(", "))));
        }
    }
    Ok(names)
}

/// A resolved chart, keeping the composition spec when there is one.
pub struct Resolved {
    pub chart: ChartDef<f64>,
    pub composition: Option<CompositionSpec<f64>>,
}

pub fn resolve_chart(spec: &ChartScene) -> Result<Resolved, Failure> {
    let given = [spec.catalog.is_some(), spec.dsl.is_some(), spec.composition.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(scene_error(anyhow::anyhow!("chart needs exactly one of catalog, dsl, composition")));
    }
    let mut resolved = if let Some(name) = &spec.catalog {
        Resolved { chart: resolve_catalog(name)?, composition: None }
    } else if let Some(text) = &spec.dsl {
        let chart = parse_chart(text).map_err(|e| crate::exit::library(e, "chart text"))?;
        Resolved { chart, composition: None }
    } else {
        let c = spec.composition.as_ref().expect("checked above");
        let comp = composition_spec(c.r, &c.factors, c.constants.clone())?;
        let chart = compose_chart(&comp).map_err(|e| crate::exit::library(e, "composition"))?;
        Resolved { chart, composition: Some(comp) }
    };
    if let Some(domain) = &spec.domain {
        let d = domain.iter().map(|[lo, hi]| (*lo, *hi)).collect();
        resolved.chart = resolved.chart.with_domain(d).map_err(|e| crate::exit::library(e, "domain"))?;
    }
    Ok(resolved)
}

pub fn resolve_catalog(name: &str) -> Result<ChartDef<f64>, Failure> {
    let spec = CatalogSpec::parse(name).map_err(|e| crate::exit::library(e, "chart"))?;
    spec.build().map_err(|e| crate::exit::library(e, "chart"))
}

pub fn composition_spec(r: usize, factors: &[String], constants: Option<Vec<f64>>) -> Result<CompositionSpec<f64>, Failure> {
    let factors = factors
        .iter()
        .map(|f| {
            let chart = resolve_catalog(f)?;
            Factor::measured(chart).map_err(|e| crate::exit::library(e, "composition factor"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let k = r + factors.len();
    let constants = constants.unwrap_or_else(|| vec![1.0; k]);
    CompositionSpec::new(r, factors, constants).map_err(|e| crate::exit::library(e, "composition"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_specs() {
        assert_eq!(PointSet::parse("5", 3).unwrap(), PointSet::Random { count: 5, seed: 3 });
        assert_eq!(PointSet::parse("random 4 seed 9", 3).unwrap(), PointSet::Random { count: 4, seed: 9 });
        assert_eq!(PointSet::parse("1,1; 0.5, -2", 0).unwrap(), PointSet::Explicit(vec![vec![1.0, 1.0], vec![0.5, -2.0]]));
        assert!(PointSet::parse("1,x", 0).is_err());
        assert!(PointSet::parse("random five", 0).is_err());
    }

    #[test]
    fn scene_forms() {
        let s = parse_scene("checks = \"all\"\npoints = \"random 5 seed 42\"\n[chart]\ncatalog = \"sl_so(3)\"\n").unwrap();
        assert!(matches!(s.points, Some(PointsScene::Text(_))));
        let s = parse_scene("points = [[0.0, 1.0]]\n[chart]\ndsl = \"dim 1; x1 = u1; x2 = u1^2;\"\n").unwrap();
        assert!(matches!(s.points, Some(PointsScene::Explicit(_))));
        let s = parse_scene("[points]\nrandom = 3\n[chart.composition]\nr = 1\nfactors = [\"flat_hypersphere(2, 1)\"]\n")
            .unwrap();
        assert!(matches!(s.points, Some(PointsScene::Random { random: 3, seed: None })));
        assert!(parse_scene("[chart]\ncatalogue = \"x\"\n").is_err());
    }

    #[test]
    fn unknown_checks_are_rejected() {
        assert!(check_list(&Checks::One("gauss, codazzi".into())).is_ok());
        assert!(check_list(&Checks::Many(vec!["curvature".into()])).is_err());
    }
}
