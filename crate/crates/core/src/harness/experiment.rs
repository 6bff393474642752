//! Config-driven experiment execution: parse a check list, run every check
//! with deterministic seeding, and emit `results.json` plus `summary.csv`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::norms::{EstimateMethod, EstimatorBudget, NormEstimate};
use crate::poly::{DirichletPoly, VPoly, WalshPoly};
use crate::projections::rademacher_projection_norm;
use crate::spaces::NormedSpace;
use crate::Result;

use super::gen::{
    corner_vpolys, degree_one_coeffs, random_dirichlet, random_vpoly, random_walsh, rng_for,
    DegreeSpec,
};
use super::{digest_value, ConstantEstimate, InequalityReport};

/// Budget knobs of a run; JSON-facing mirror of [`EstimatorBudget`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct BudgetConfig {
    pub grid_max_points: u64,
    pub cube_max_vars: usize,
    pub mc_samples: usize,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        let b = EstimatorBudget::default();
        BudgetConfig {
            grid_max_points: b.grid_max_points as u64,
            cube_max_vars: b.cube_max_vars,
            mc_samples: b.mc_samples,
        }
    }
}

impl From<BudgetConfig> for EstimatorBudget {
    fn from(b: BudgetConfig) -> Self {
        EstimatorBudget {
            grid_max_points: b.grid_max_points as u128,
            cube_max_vars: b.cube_max_vars,
            mc_samples: b.mc_samples,
        }
    }
}

/// One named check with its space, parameters, instance count and seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckConfig {
    pub name: String,
    pub space: NormedSpace,
    #[serde(default)]
    pub params: serde_json::Map<String, Value>,
    #[serde(default = "default_instances")]
    pub instances: usize,
    pub seed: u64,
}

fn default_instances() -> usize {
    20
}

/// A whole experiment: the check list plus budgets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub checks: Vec<CheckConfig>,
    #[serde(default)]
    pub budget: BudgetConfig,
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }
}

/// Everything a run produced, with the reproducibility digest.
#[derive(Clone, Debug, Serialize)]
pub struct RunBundle {
    pub digest: String,
    pub all_pass: bool,
    pub reports: Vec<InequalityReport>,
    pub constants: Vec<ConstantEstimate>,
}

impl RunBundle {
    pub fn failed(&self) -> usize {
        self.reports.iter().filter(|r| !r.pass).count()
    }
}

fn f64_param(params: &serde_json::Map<String, Value>, key: &str) -> Option<f64> {
    params.get(key).and_then(Value::as_f64)
}

fn usize_param(params: &serde_json::Map<String, Value>, key: &str) -> Option<usize> {
    params.get(key).and_then(Value::as_u64).map(|v| v as usize)
}

fn require_f64(params: &serde_json::Map<String, Value>, key: &str, check: &str) -> Result<f64> {
    f64_param(params, key)
        .ok_or_else(|| Error::Config(format!("check {check:?} needs numeric param {key:?}")))
}

fn kahane_pairs(params: &serde_json::Map<String, Value>) -> Vec<(f64, f64)> {
    params
        .get("pairs")
        .and_then(Value::as_array)
        .map(|rows| {
            rows.iter()
                .filter_map(|row| {
                    let pair = row.as_array()?;
                    Some((pair.first()?.as_f64()?, pair.get(1)?.as_f64()?))
                })
                .collect()
        })
        .unwrap_or_else(|| vec![(1.0, 2.0), (2.0, 4.0)])
}

/// Simple `*`/`?` glob match on check names.
pub(crate) fn glob_match(pattern: &str, name: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let s: Vec<char> = name.chars().collect();
    // iterative two-pointer with backtracking on the last star
    let (mut pi, mut si) = (0usize, 0usize);
    let (mut star, mut mark) = (usize::MAX, 0usize);
    while si < s.len() {
        if pi < p.len() && (p[pi] == '?' || p[pi] == s[si]) {
            pi += 1;
            si += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = pi;
            mark = si;
            pi += 1;
        } else if star != usize::MAX {
            pi = star + 1;
            mark += 1;
            si = mark;
        } else {
            return false;
        }
    }
    while pi < p.len() && p[pi] == '*' {
        pi += 1;
    }
    pi == p.len()
}

struct CheckOutput {
    reports: Vec<InequalityReport>,
    constants: Vec<ConstantEstimate>,
}

fn run_check(check: &CheckConfig, seed: u64, budget: &EstimatorBudget) -> Result<CheckOutput> {
    let space = &check.space;
    let params = &check.params;
    let count = check.instances;
    let mut constants = Vec::new();

    let reports = match check.name.as_str() {
        "cotype_def" => {
            let q = require_f64(params, "q", &check.name)?;
            let n = usize_param(params, "n").unwrap_or(3);
            let instances: Vec<_> = (0..count)
                .map(|i| degree_one_coeffs(&mut rng_for(seed, i as u64 + 1), space, n))
                .collect();
            super::check_cotype_def(space, q, &instances, f64_param(params, "constant"), budget, seed)?
        }
        "type_def" => {
            let p = require_f64(params, "p", &check.name)?;
            let n = usize_param(params, "n").unwrap_or(3);
            let instances: Vec<_> = (0..count)
                .map(|i| degree_one_coeffs(&mut rng_for(seed, i as u64 + 1), space, n))
                .collect();
            super::check_type_def(space, p, &instances, f64_param(params, "constant"), budget, seed)?
        }
        "walsh_cotype_def" => {
            let q = require_f64(params, "q", &check.name)?;
            let m = usize_param(params, "m").unwrap_or(3) as u32;
            let n = usize_param(params, "n").unwrap_or(4);
            let instances: Vec<WalshPoly> = (0..count)
                .map(|i| random_walsh(&mut rng_for(seed, i as u64 + 1), space, n, m, 2 * n))
                .collect();
            super::check_walsh_cotype_def(q, &instances, f64_param(params, "constant"), budget)?
        }
        "walsh_type_def" => {
            let p = require_f64(params, "p", &check.name)?;
            let m = usize_param(params, "m").unwrap_or(3) as u32;
            let n = usize_param(params, "n").unwrap_or(4);
            let instances: Vec<WalshPoly> = (0..count)
                .map(|i| random_walsh(&mut rng_for(seed, i as u64 + 1), space, n, m, 2 * n))
                .collect();
            super::check_walsh_type_def(p, &instances, f64_param(params, "constant"), budget)?
        }
        "cotype_constant" => {
            let q = require_f64(params, "q", &check.name)?;
            let n = usize_param(params, "n").unwrap_or(3);
            constants.push(super::estimate_cotype_constant(space, q, n, count, seed, budget)?);
            Vec::new()
        }
        "type_constant" => {
            let p = require_f64(params, "p", &check.name)?;
            let n = usize_param(params, "n").unwrap_or(3);
            constants.push(super::estimate_type_constant(space, p, n, count, seed, budget)?);
            Vec::new()
        }
        "hypercontractive_cotype" => {
            let q = require_f64(params, "q", &check.name)?;
            let m = usize_param(params, "m").unwrap_or(2) as u32;
            let n = usize_param(params, "n").unwrap_or(3);
            let tetrahedral = params.get("tetrahedral").and_then(Value::as_bool).unwrap_or(false);
            let spec = if tetrahedral {
                DegreeSpec::TetrahedralHomogeneous(m)
            } else {
                DegreeSpec::AtMost(m)
            };
            let instances = vpoly_instances(space, n, spec, count, seed);
            super::check_hypercontractive_cotype(
                space,
                q,
                &instances,
                f64_param(params, "c_hyp"),
                budget,
                seed,
            )?
        }
        "lemma1_bridge" => {
            let q = require_f64(params, "q", &check.name)?;
            let m = usize_param(params, "m").unwrap_or(2) as u32;
            let n = usize_param(params, "n").unwrap_or(3);
            let instances = vpoly_instances(space, n, DegreeSpec::Tetrahedral(m), count, seed);
            super::check_lemma1_bridge(space, q, &instances, budget, seed)?
        }
        "kahane_torus" => {
            let m = usize_param(params, "m").unwrap_or(2) as u32;
            let n = usize_param(params, "n").unwrap_or(3);
            let instances = vpoly_instances(space, n, DegreeSpec::Homogeneous(m), count, seed);
            super::check_kahane_torus(space, &kahane_pairs(params), &instances, budget, seed)?
        }
        "kahane_walsh" => {
            let m = usize_param(params, "m").unwrap_or(2) as u32;
            let n = usize_param(params, "n").unwrap_or(4);
            let instances: Vec<WalshPoly> = (0..count)
                .map(|i| random_walsh(&mut rng_for(seed, i as u64 + 1), space, n, m, 2 * n))
                .collect();
            super::check_kahane_walsh(&kahane_pairs(params), &instances, budget)?
        }
        "hy_dirichlet_cotype" => {
            let q = require_f64(params, "q", &check.name)?;
            let p = require_f64(params, "p", &check.name)?;
            let r = f64_param(params, "r").unwrap_or(0.5);
            let instances = dirichlet_instances(space, params, count, seed);
            super::check_hy_dirichlet_cotype(space, q, p, r, &instances, budget, seed)?
        }
        "corollary_delta" => {
            let q = require_f64(params, "q", &check.name)?;
            let p = require_f64(params, "p", &check.name)?;
            let r = f64_param(params, "r").unwrap_or(0.5);
            let delta = require_f64(params, "delta", &check.name)?;
            let instances = dirichlet_instances(space, params, count, seed);
            super::check_corollary_delta(space, q, p, r, delta, &instances, budget, seed)?
        }
        "hy_dirichlet_type" => {
            let p = require_f64(params, "p", &check.name)?;
            let q = require_f64(params, "q", &check.name)?;
            let big_r = f64_param(params, "R").unwrap_or(1.5);
            let instances = dirichlet_instances(space, params, count, seed);
            super::check_hy_dirichlet_type(space, p, q, big_r, &instances, budget, seed)?
        }
        "plconvexity" => {
            let q = require_f64(params, "q", &check.name)?;
            constants.push(super::check_plconvexity(space, q, count, seed)?);
            Vec::new()
        }
        "isenbeck" => {
            let q = require_f64(params, "q", &check.name)?;
            let m = usize_param(params, "m").unwrap_or(2) as u32;
            let n = usize_param(params, "n").unwrap_or(2);
            let instances = vpoly_instances(space, n, DegreeSpec::AtMost(m), count, seed);
            let search = super::isenbeck_search_rho(space, q, &instances, budget, seed)?;
            let rho = f64_param(params, "rho").unwrap_or((0.9 * search.value).max(1e-6));
            constants.push(search);
            super::check_isenbeck(space, q, rho, &instances, budget, seed)?
        }
        "rademacher_projection" => {
            let m = usize_param(params, "m").unwrap_or(1);
            let n = usize_param(params, "n").unwrap_or(4);
            let estimate = rademacher_projection_norm(space, n, m, count, seed)?;
            let lhs = NormEstimate::exact(estimate, EstimateMethod::CubeExact);
            let rhs = NormEstimate::exact(1.0, EstimateMethod::CoeffSum);
            // with no bound supplied the row records the estimate and passes
            let bound = f64_param(params, "bound").unwrap_or_else(|| estimate.max(1.0));
            let digest = digest_value(&json!({
                "check": "rademacher_projection", "space": space, "n": n, "m": m, "seed": seed,
            }));
            let mut row_params = BTreeMap::new();
            row_params.insert("m".into(), json!(m));
            row_params.insert("n".into(), json!(n));
            row_params.insert("estimate".into(), json!(estimate));
            vec![InequalityReport::build(
                "rademacher_projection",
                lhs,
                rhs,
                bound,
                m as u32,
                digest,
                row_params,
            )]
        }
        other => {
            return Err(Error::Config(format!("unknown check kind {other:?}")));
        }
    };
    Ok(CheckOutput { reports, constants })
}

fn vpoly_instances(
    space: &NormedSpace,
    n: usize,
    spec: DegreeSpec,
    count: usize,
    seed: u64,
) -> Vec<VPoly> {
    let mut out = corner_vpolys(space, n, spec);
    out.truncate(count);
    let mut i = 0u64;
    while out.len() < count {
        i += 1;
        let poly = random_vpoly(&mut rng_for(seed, i), space, n, spec, 2 * n.max(1));
        if !poly.is_zero() {
            out.push(poly);
        }
    }
    out
}

fn dirichlet_instances(
    space: &NormedSpace,
    params: &serde_json::Map<String, Value>,
    count: usize,
    seed: u64,
) -> Vec<DirichletPoly> {
    let max_index = params
        .get("max_index")
        .and_then(Value::as_u64)
        .unwrap_or(64);
    let terms = usize_param(params, "terms").unwrap_or(8);
    (0..count)
        .map(|i| random_dirichlet(&mut rng_for(seed, i as u64 + 1), space, max_index, terms))
        .collect()
}

/// Executes the config's checks in order. `seed_override` replaces every
/// check seed (mixed with the check index); `filter` is a `*`/`?` glob on
/// check names. A check that errors contributes an inconclusive row, never a
/// silent skip.
pub fn run_experiment(
    config: &ExperimentConfig,
    seed_override: Option<u64>,
    filter: Option<&str>,
) -> RunBundle {
    let budget: EstimatorBudget = config.budget.into();
    let mut reports = Vec::new();
    let mut constants = Vec::new();
    for (idx, check) in config.checks.iter().enumerate() {
        if let Some(pattern) = filter {
            if !glob_match(pattern, &check.name) {
                continue;
            }
        }
        let seed = match seed_override {
            Some(base) => base ^ (idx as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            None => check.seed,
        };
        match run_check(check, seed, &budget) {
            Ok(output) => {
                let mut rows = output.reports;
                // deterministic merge order: digest, then sub-check name
                rows.sort_by(|a, b| {
                    (&a.instance_digest, &a.name).cmp(&(&b.instance_digest, &b.name))
                });
                reports.extend(rows);
                constants.extend(output.constants);
            }
            Err(err) => {
                reports.push(InequalityReport::inconclusive(
                    check.name.clone(),
                    &err.to_string(),
                ));
            }
        }
    }
    let all_pass = reports.iter().all(|r| r.pass);
    let digest = digest_value(&json!({
        "all_pass": all_pass,
        "reports": reports,
        "constants": constants,
    }));
    RunBundle {
        digest,
        all_pass,
        reports,
        constants,
    }
}

/// Writes `results.json` and `summary.csv` into `out_dir`. The timestamp
/// lives outside the digested payload, so reruns of the same config and seed
/// are digest-identical.
pub fn write_outputs(bundle: &RunBundle, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let results = json!({
        "digest": bundle.digest,
        "timestamp": timestamp,
        "all_pass": bundle.all_pass,
        "reports": bundle.reports,
        "constants": bundle.constants,
    });
    std::fs::write(
        out_dir.join("results.json"),
        serde_json::to_string_pretty(&results)?,
    )?;

    let mut csv = String::from("name,lhs,rhs,constant,margin,pass\n");
    for r in &bundle.reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.name, r.lhs.value, r.rhs.value, r.constant, r.margin, r.pass
        ));
    }
    std::fs::write(out_dir.join("summary.csv"), csv)?;
    Ok(())
}
