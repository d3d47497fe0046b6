//! Per-point evaluation of the requested checks.

use std::collections::BTreeMap;

use rayon::prelude::*;

use equiaffine::blaschke::{
    blaschke_at, check_apolarity, check_codazzi, check_gauss, check_hypersphere, nabla_a_norm, Tolerances,
};
use equiaffine::calabi::{block_sparsity, mean_curvature_relations, verify_composition, CompositionSpec};
use equiaffine::duality::{check_gauss_swap, dualize_invariants, membership_s, negate_curvature};
use equiaffine::{BlaschkeInvariants, CheckReport, ChartDef};

use crate::exit::{scene_error, Failure};
use crate::report::{CheckEntry, PointReport};

/// Thresholds for checks outside the structural set.
#[derive(Clone, Debug)]
pub struct Thresholds {
    pub structural: Tolerances,
    pub parallel: f64,
    pub dual: f64,
    pub gauss_swap: f64,
    pub composition: f64,
    pub block_sparsity: f64,
    pub mean_curvature: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            structural: Tolerances::default(),
            parallel: 1e-6,
            dual: 1e-6,
            gauss_swap: 1e-12,
            composition: 1e-6,
            block_sparsity: 1e-8,
            mean_curvature: 1e-6,
        }
    }
}

impl Thresholds {
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), Failure> {
        if !(value >= 0.0) {
            return Err(scene_error(anyhow::anyhow!("tolerance {name} must be nonnegative, got {value}")));
        }
        let slot = match name {
            "parallel" => &mut self.parallel,
            "dual" => &mut self.dual,
            "gauss_swap" => &mut self.gauss_swap,
            "composition" => &mut self.composition,
            "block_sparsity" => &mut self.block_sparsity,
            "mean_curvature" => &mut self.mean_curvature,
            other => {
                if self.structural.set(other, value) {
                    return Ok(());
                }
                return Err(scene_error(anyhow::anyhow!("unknown tolerance '{other}'")));
            }
        };
        *slot = value;
        Ok(())
    }

    /// Applies `name=value` overrides.
    pub fn apply(&mut self, pairs: &[String]) -> Result<(), Failure> {
        for p in pairs {
            let (name, value) = p
                .split_once('=')
                .ok_or_else(|| scene_error(anyhow::anyhow!("tolerance '{p}' is not name=value")))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| scene_error(anyhow::anyhow!("tolerance '{p}' has a non-numeric value")))?;
            self.set(name.trim(), v)?;
        }
        Ok(())
    }
}

pub struct Plan<'a> {
    pub chart: &'a ChartDef<f64>,
    pub composition: Option<&'a CompositionSpec<f64>>,
    pub checks: Vec<String>,
    pub thresholds: Thresholds,
}

/// Replaces `all` by every check that applies to the chart and rejects
/// composition checks on other charts.
pub fn expand_checks(names: &[String], composition: Option<&CompositionSpec<f64>>) -> Result<Vec<String>, Failure> {
    let has_factor = composition.is_some_and(|c| !c.factors.is_empty());
    let mut out: Vec<String> = Vec::new();
    for n in names {
        let add: Vec<&str> = if n == "all" {
            let mut v = vec!["invariants", "apolarity", "gauss", "codazzi", "hypersphere", "parallel", "dual"];
            if composition.is_some() {
                v.push("composition");
            }
            if has_factor {
                v.push("mean_curvature");
            }
            v
        } else {
            if n == "composition" && composition.is_none() {
                return Err(scene_error(anyhow::anyhow!("check 'composition' needs a composition chart")));
            }
            if n == "mean_curvature" && !has_factor {
                return Err(scene_error(anyhow::anyhow!("check 'mean_curvature' needs a composition with a hypersphere factor")));
            }
            vec![n.as_str()]
        };
        for a in add {
            if !out.iter().any(|o| o == a) {
                out.push(a.to_string());
            }
        }
    }
    Ok(out)
}

fn checks_at(plan: &Plan, u: &[f64], inv: &BlaschkeInvariants<f64>, extra: &mut BTreeMap<String, f64>) -> Vec<CheckReport> {
    let t = &plan.thresholds;
    let s = &t.structural;
    let mut out = Vec::new();
    for name in &plan.checks {
        match name.as_str() {
            "invariants" => {}
            "apolarity" => out.push(check_apolarity(inv, s.apolarity)),
            "gauss" => out.push(check_gauss(inv, s.gauss)),
            "codazzi" => out.push(check_codazzi(inv, s.codazzi)),
            "hypersphere" => out.extend(check_hypersphere(inv, s.hypersphere).reports()),
            "parallel" => out.push(CheckReport::new("parallel", nabla_a_norm(inv), t.parallel)),
            "dual" => {
                extra.insert("dual_c".into(), -inv.l1);
                match dualize_invariants(inv) {
                    Ok(data) => {
                        let r_tilde = negate_curvature(&inv.curvature.riemann);
                        match membership_s(&data, Some(&r_tilde), &[], t.dual) {
                            Ok(reps) => out.extend(reps),
                            Err(e) => out.push(CheckReport::new(format!("dual ({e})"), f64::NAN, t.dual)),
                        }
                    }
                    Err(e) => out.push(CheckReport::new(format!("dual ({e})"), f64::NAN, t.dual)),
                }
                match check_gauss_swap(&inv.g, &inv.a, inv.l1, t.gauss_swap) {
                    Ok(r) => out.push(r),
                    Err(e) => out.push(CheckReport::new(format!("gauss_swap ({e})"), f64::NAN, t.gauss_swap)),
                }
            }
            "composition" => {
                let spec = plan.composition.expect("validated by expand_checks");
                match verify_composition(spec, &[u.to_vec()], t.composition) {
                    Ok(reps) => out.extend(reps),
                    Err(e) => out.push(CheckReport::new(format!("composition ({e})"), f64::NAN, t.composition)),
                }
                out.push(block_sparsity(spec, inv, t.block_sparsity));
            }
            "mean_curvature" => {
                let spec = plan.composition.expect("validated by expand_checks");
                match mean_curvature_relations(spec, inv, t.mean_curvature) {
                    Ok(r) => out.push(r),
                    Err(e) => out.push(CheckReport::new(format!("mean_curvature ({e})"), f64::NAN, t.mean_curvature)),
                }
            }
            other => unreachable!("unvalidated check {other}"),
        }
    }
    out
}

fn evaluate(plan: &Plan, index: usize, u: &[f64]) -> PointReport {
    let mut report = PointReport { index, u: u.to_vec(), ..PointReport::default() };
    match blaschke_at(plan.chart, u) {
        Ok(inv) => {
            report.position = Some(inv.position.clone());
            report.l1 = Some(inv.l1);
            if inv.dim() >= 2 {
                report.pick = Some(inv.pick);
                report.chi = Some(inv.chi);
            }
            report.flipped = Some(inv.flipped);
            let checks = checks_at(plan, u, &inv, &mut report.extra);
            report.checks = checks.iter().map(CheckEntry::from).collect();
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Evaluates all points in parallel, reporting them in input order.
pub fn run_points(plan: &Plan, points: &[Vec<f64>]) -> Vec<PointReport> {
    points.par_iter().enumerate().map(|(i, u)| evaluate(plan, i, u)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn all_depends_on_chart_kind() {
        let plain = expand_checks(&names(&["all"]), None).unwrap();
        assert!(plain.contains(&"dual".to_string()));
        assert!(!plain.contains(&"composition".to_string()));
        assert!(expand_checks(&names(&["mean_curvature"]), None).is_err());
        let dup = expand_checks(&names(&["gauss", "all", "gauss"]), None).unwrap();
        assert_eq!(dup.iter().filter(|c| *c == "gauss").count(), 1);
    }

    #[test]
    fn tolerance_overrides() {
        let mut t = Thresholds::default();
        t.apply(&names(&["parallel=1e-3", "gauss = 2e-7"])).unwrap();
        assert_eq!(t.parallel, 1e-3);
        assert_eq!(t.structural.gauss, 2e-7);
        assert_eq!(t.apply(&names(&["nope=1"])).unwrap_err().code, crate::exit::SCENE_ERROR);
        assert!(t.apply(&names(&["gauss"])).is_err());
        assert!(t.apply(&names(&["gauss=-1"])).is_err());
    }
}
