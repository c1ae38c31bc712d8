//! The verification suite: a seeded configuration expands into a fixed
//! list of instances (boolean extensions by atom count, vector extensions
//! by dimension, poset structure sweeps, and the normal-function
//! realization), each instance runs its checks into a report, and any
//! report can be replayed from its embedded instance descriptor.

use std::path::Path;
use std::sync::Arc;

use num::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ba::{canonical_extension_ba, ro_iso, verify_canonical_ba, verify_ro_iso, CompactnessMode};
use crate::balcan::{identity_suite, verify_canext_bal, CanExtContext};
use crate::boolalg::FinBoolAlg;
use crate::error::{Error, Result};
use crate::exec;
use crate::gen::{poset_family, Sampler};
use crate::io::{poset_from_json, poset_to_json, PosetJson};
use crate::normal::{
    complement_region, extension_regions, gamma, gamma_by_bisection, ideal_space, phi, psi,
    psi_inv, up_region, verify_normal_structure, NormalFn,
};
use crate::rat::{self, Rat};
use crate::report::{CheckResult, Report};

/// Suite parameters; unknown fields are rejected, missing ones take the
/// defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub max_atoms: usize,
    pub max_dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub eps_grid: Vec<String>,
    pub output_path: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            max_atoms: 4,
            max_dim: 5,
            samples: 1000,
            seed: 1,
            eps_grid: vec!["1/2".into(), "1/4".into(), "1/8".into()],
            output_path: None,
        }
    }
}

impl SuiteConfig {
    pub fn from_json_str(s: &str) -> Result<SuiteConfig> {
        serde_json::from_str(s).map_err(|e| Error::BadInput(format!("bad configuration: {e}")))
    }

    /// Applies the `CANEXT_SEED` environment override, if present.
    pub fn apply_env_seed(&mut self) -> Result<()> {
        match std::env::var("CANEXT_SEED") {
            Ok(raw) => {
                self.seed = raw
                    .trim()
                    .parse()
                    .map_err(|_| Error::BadInput(format!("CANEXT_SEED is not an integer: {raw}")))?;
                Ok(())
            }
            Err(_) => Ok(()),
        }
    }

}

/// One unit of suite work, self-describing enough to replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum InstanceSpec {
    /// The boolean pipeline at a fixed atom count.
    BooleanExtension { atoms: usize, samples: usize, seed: u64 },
    /// The vector pipeline at a fixed dimension.
    VectorExtension {
        dim: usize,
        samples: usize,
        seed: u64,
        eps_grid: Vec<String>,
    },
    /// The structural sweep over one poset.
    PosetStructure { poset: PosetJson },
    /// The normal-function realization of the vector extension.
    Realization { dim: usize, samples: usize, seed: u64 },
}

impl InstanceSpec {
    pub fn name(&self) -> String {
        match self {
            InstanceSpec::BooleanExtension { atoms, .. } => {
                format!("boolean-extension-atoms-{atoms}")
            }
            InstanceSpec::VectorExtension { dim, .. } => format!("vector-extension-dim-{dim}"),
            InstanceSpec::PosetStructure { poset } => {
                format!(
                    "poset-structure-{}-{:08x}",
                    poset.elements.len(),
                    poset_fingerprint(poset)
                )
            }
            InstanceSpec::Realization { dim, .. } => format!("realization-dim-{dim}"),
        }
    }
}

/// Order-sensitive FNV-1a digest of a poset description, so instances over
/// distinct posets of the same size get distinct names.
fn poset_fingerprint(poset: &PosetJson) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    let mut eat = |s: &str| {
        for b in s.bytes().chain(std::iter::once(0)) {
            h ^= u32::from(b);
            h = h.wrapping_mul(0x0100_0193);
        }
    };
    for e in &poset.elements {
        eat(e);
    }
    for (a, b) in &poset.le {
        eat(a);
        eat(b);
    }
    h
}

fn derived_seed(seed: u64, salt: u64) -> u64 {
    seed.wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// The full instance list for a configuration, in a fixed order.
pub fn instances(config: &SuiteConfig) -> Result<Vec<InstanceSpec>> {
    let mut out = Vec::new();
    for atoms in 1..=config.max_atoms {
        out.push(InstanceSpec::BooleanExtension {
            atoms,
            samples: config.samples,
            seed: derived_seed(config.seed, atoms as u64),
        });
    }
    for dim in 1..=config.max_dim {
        out.push(InstanceSpec::VectorExtension {
            dim,
            samples: config.samples,
            seed: derived_seed(config.seed, 100 + dim as u64),
            eps_grid: config.eps_grid.clone(),
        });
    }
    for poset in poset_family(8, derived_seed(config.seed, 200))? {
        out.push(InstanceSpec::PosetStructure {
            poset: poset_to_json(&poset),
        });
    }
    for dim in 1..=config.max_dim.min(4) {
        out.push(InstanceSpec::Realization {
            dim,
            samples: config.samples,
            seed: derived_seed(config.seed, 300 + dim as u64),
        });
    }
    Ok(out)
}

/// Runs one instance to a report.  Internal failures become a failed
/// `execution-error` check rather than tearing the suite down.
pub fn run_instance(spec: &InstanceSpec) -> Report {
    let instance = serde_json::to_value(spec).expect("instance specs serialize");
    match run_instance_inner(spec) {
        Ok(checks) => Report::new(instance, checks),
        Err(e) => Report::new(
            instance,
            vec![CheckResult::failed(
                "execution-error",
                json!({ "error": e.to_string() }),
            )],
        ),
    }
}

fn run_instance_inner(spec: &InstanceSpec) -> Result<Vec<CheckResult>> {
    match spec {
        InstanceSpec::BooleanExtension { atoms, samples, seed } => {
            let algebra = FinBoolAlg::with_atom_count(*atoms)?;
            let ext = canonical_extension_ba(&algebra)?;
            let mode = if algebra.size() <= 16 {
                CompactnessMode::Exhaustive
            } else {
                CompactnessMode::Sampled {
                    count: *samples,
                    seed: *seed,
                }
            };
            let mut checks = verify_canonical_ba(&ext, mode);
            let iso = ro_iso(&ext)?;
            checks.extend(verify_ro_iso(&ext, &iso));
            Ok(checks)
        }
        InstanceSpec::VectorExtension {
            dim,
            samples,
            seed,
            eps_grid,
        } => {
            let ctx = CanExtContext::new(*dim)?;
            let mut sampler = Sampler::new(*seed);
            let family = sampler.lvec_family(*dim, *samples);
            let eps = eps_grid
                .iter()
                .map(|s| rat::parse(s))
                .collect::<Result<Vec<_>>>()?;
            let mut scalars = vec![Rat::zero(), rat::rat(1, 2), rat::int(2)];
            scalars.push(sampler.nonneg_rational());
            scalars.push(sampler.nonneg_rational());
            let mut checks = verify_canext_bal(&ctx, &family, &eps)?;
            checks.extend(identity_suite(&ctx, &family, &scalars)?);
            Ok(checks)
        }
        InstanceSpec::PosetStructure { poset } => {
            let p = Arc::new(poset_from_json(poset)?);
            verify_normal_structure(&p)
        }
        InstanceSpec::Realization { dim, samples, seed } => {
            realization_checks(*dim, *samples, *seed)
        }
    }
}

/// The checks tying the vector extension to normal functions on the ideal
/// space: generators land on the complementary regions, restriction to the
/// maximal ideals is a bijection with explicit inverse, the closed form of
/// the composite map matches the bisection oracle, and the whole diagram
/// collapses to the identity.
pub fn realization_checks(dim: usize, samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let ctx = CanExtContext::new(dim)?;
    let space = ideal_space(dim)?;
    let (ro, regions) = extension_regions(&ctx)?;
    let mut sampler = Sampler::new(seed);
    let family = sampler.lvec_family(dim, samples);
    let mut checks = Vec::new();

    // generators of the extension map onto the paired regular open regions
    let mut failures = Vec::new();
    for index in ctx.frame().proper_indices() {
        let ideal = ctx.frame().ideal(index);
        let b = ctx.b_of_ideal(&ideal);
        let not_b = ctx.boolext().algebra().not(b);
        let co = complement_region(dim, &ideal)?;
        let up = up_region(dim, &ideal)?;
        let ok = regions[b as usize] == co
            && regions[not_b as usize] == up
            && ro.index_of(&co).is_some()
            && ro.index_of(&up).is_some()
            && ro.complement(&co) == up;
        if !ok {
            failures.push(json!({ "ideal": ideal.label() }));
        }
    }
    checks.push(CheckResult::from_failures(
        "generators-map-to-regions",
        json!({ "dim": dim, "properIdeals": ctx.proper_ideals().len() }),
        failures,
    ));

    // restriction to the maximal ideals inverts the closed-form extension
    let mut failures = Vec::new();
    for h in &family {
        let f = psi_inv(dim, &space, h)?;
        if !f.is_normal() || psi(dim, &f)? != *h {
            failures.push(json!({ "vector": coords_json(h) }));
        }
    }
    // and every normalized function is hit
    for _ in 0..samples.min(200) {
        let raw = NormalFn::new(
            Arc::clone(&space),
            (0..space.len()).map(|_| sampler.rational()).collect(),
        )?;
        let f = raw.normalize();
        let back = psi_inv(dim, &space, &psi(dim, &f)?)?;
        if back != f {
            failures.push(json!({ "values": f.values().iter().map(rat::format).collect::<Vec<_>>() }));
        }
    }
    checks.push(CheckResult::from_failures(
        "restriction-is-a-bijection",
        json!({ "dim": dim, "vectors": family.len(), "normalizedProbes": samples.min(200) }),
        failures,
    ));

    // the closed form of the composite agrees with the bisection oracle
    let mut failures = Vec::new();
    for a in family.iter().take(250) {
        let g = gamma(dim, &space, a)?;
        if g != gamma_by_bisection(dim, &space, a)? {
            failures.push(json!({ "vector": coords_json(a) }));
        }
    }
    checks.push(CheckResult::from_failures(
        "closed-form-matches-bisection",
        json!({ "dim": dim, "vectors": family.len().min(250) }),
        failures,
    ));

    // the full diagram is the identity: embed, realize as a normal
    // function, restrict back
    let mut failures = Vec::new();
    for a in &family {
        let image = ctx.alpha(a)?;
        let f = phi(&regions, &space, &image)?;
        let ok = f == gamma(dim, &space, a)? && psi(dim, &f)? == *a;
        if !ok {
            failures.push(json!({ "vector": coords_json(a) }));
        }
    }
    checks.push(CheckResult::from_failures(
        "diagram-collapses-to-identity",
        json!({ "dim": dim, "vectors": family.len() }),
        failures,
    ));

    Ok(checks)
}

fn coords_json(v: &crate::lalg::LVec) -> Value {
    json!(v.coords().iter().map(rat::format).collect::<Vec<_>>())
}

/// The result of a whole suite run.
#[derive(Debug)]
pub struct SuiteOutcome {
    pub reports: Vec<Report>,
    pub pass: bool,
}

impl SuiteOutcome {
    /// The canonical summary document: configuration, one line per
    /// instance, and the overall verdict.
    pub fn summary(&self, config: &SuiteConfig) -> Value {
        json!({
            "pass": self.pass,
            "config": serde_json::to_value(config).expect("config serializes"),
            "instances": self
                .reports
                .iter()
                .map(|r| json!({
                    "instance": r.instance,
                    "pass": r.all_pass(),
                    "checks": r.checks.len(),
                    "failed": r.failures().iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Runs every instance of the configuration; instance reports keep the
/// fixed order regardless of scheduling.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let specs = instances(config)?;
    let reports = exec::map(&specs, run_instance);
    let pass = reports.iter().all(Report::all_pass);
    let outcome = SuiteOutcome { reports, pass };
    if let Some(dir) = &config.output_path {
        write_outcome(Path::new(dir), config, &outcome)?;
    }
    Ok(outcome)
}

fn write_outcome(dir: &Path, config: &SuiteConfig, outcome: &SuiteOutcome) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::BadInput(format!("cannot create {}: {e}", dir.display())))?;
    for (spec, report) in instances(config)?.iter().zip(&outcome.reports) {
        let path = dir.join(format!("{}.json", spec.name()));
        std::fs::write(&path, report.to_canonical_json())
            .map_err(|e| Error::BadInput(format!("cannot write {}: {e}", path.display())))?;
    }
    let summary = serde_json::to_string_pretty(&outcome.summary(config))
        .expect("summary serializes")
        + "\n";
    std::fs::write(dir.join("summary.json"), summary)
        .map_err(|e| Error::BadInput(format!("cannot write summary: {e}")))?;
    Ok(())
}

/// Re-runs the instance embedded in a report document; with a check name,
/// the replayed report is narrowed to that check.
pub fn replay(report_doc: &Value, check_name: Option<&str>) -> Result<Report> {
    let instance = report_doc
        .get("instance")
        .ok_or_else(|| Error::BadInput("report has no instance descriptor".into()))?;
    let spec: InstanceSpec = serde_json::from_value(instance.clone())
        .map_err(|e| Error::BadInput(format!("bad instance descriptor: {e}")))?;
    let report = run_instance(&spec);
    match check_name {
        None => Ok(report),
        Some(name) => {
            let checks: Vec<CheckResult> = report
                .checks
                .iter()
                .filter(|c| c.name == name)
                .cloned()
                .collect();
            if checks.is_empty() {
                return Err(Error::BadInput(format!(
                    "instance has no check named {name}"
                )));
            }
            Ok(Report::new(report.instance, checks))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> SuiteConfig {
        SuiteConfig {
            max_atoms: 2,
            max_dim: 2,
            samples: 30,
            seed: 5,
            eps_grid: vec!["1/2".into()],
            output_path: None,
        }
    }

    #[test]
    fn defaults_fill_missing_fields() {
        let c = SuiteConfig::from_json_str("{}").unwrap();
        assert_eq!(c.max_atoms, 4);
        assert_eq!(c.max_dim, 5);
        assert_eq!(c.samples, 1000);
        assert_eq!(c.eps_grid, vec!["1/2", "1/4", "1/8"]);
        let partial = SuiteConfig::from_json_str(r#"{"maxDim": 3, "seed": 9}"#).unwrap();
        assert_eq!(partial.max_dim, 3);
        assert_eq!(partial.seed, 9);
        assert_eq!(partial.max_atoms, 4);
        assert!(SuiteConfig::from_json_str(r#"{"maxdim": 3}"#).is_err());
    }

    #[test]
    fn instance_list_is_fixed_and_named() {
        let specs = instances(&tiny_config()).unwrap();
        let names: Vec<String> = specs.iter().map(InstanceSpec::name).collect();
        assert!(names.contains(&"boolean-extension-atoms-2".to_string()));
        assert!(names.contains(&"vector-extension-dim-2".to_string()));
        assert!(names.contains(&"realization-dim-2".to_string()));
        assert!(names.iter().any(|n| n.starts_with("poset-structure-")));
        // determinism
        let again = instances(&tiny_config()).unwrap();
        assert_eq!(specs.len(), again.len());
        for (a, b) in specs.iter().zip(&again) {
            assert_eq!(
                serde_json::to_value(a).unwrap(),
                serde_json::to_value(b).unwrap()
            );
        }
    }

    #[test]
    fn tiny_suite_passes_end_to_end() {
        let outcome = run_suite(&tiny_config()).unwrap();
        assert!(outcome.pass, "{}", serde_json::to_string_pretty(&outcome.summary(&tiny_config())).unwrap());
        assert!(outcome.reports.len() >= 8);
    }

    #[test]
    fn instance_specs_round_trip_through_reports() {
        let spec = InstanceSpec::VectorExtension {
            dim: 2,
            samples: 10,
            seed: 3,
            eps_grid: vec!["1/2".into()],
        };
        let report = run_instance(&spec);
        assert!(report.all_pass());
        let doc: Value = serde_json::from_str(&report.to_canonical_json()).unwrap();
        let replayed = replay(&doc, None).unwrap();
        assert_eq!(replayed.to_canonical_json(), report.to_canonical_json());
        // narrowing to a named check keeps only it
        let one = replay(&doc, Some("round-trip-identity")).unwrap();
        assert_eq!(one.checks.len(), 1);
        assert!(replay(&doc, Some("no-such-check")).is_err());
    }

    #[test]
    fn identical_configs_produce_identical_bytes() {
        let a = run_suite(&tiny_config()).unwrap();
        let b = run_suite(&tiny_config()).unwrap();
        for (ra, rb) in a.reports.iter().zip(&b.reports) {
            assert_eq!(ra.to_canonical_json(), rb.to_canonical_json());
        }
        assert_eq!(
            serde_json::to_string(&a.summary(&tiny_config())).unwrap(),
            serde_json::to_string(&b.summary(&tiny_config())).unwrap()
        );
    }

    #[test]
    fn broken_instances_surface_as_failed_reports() {
        // dimension zero cannot build a context
        let spec = InstanceSpec::Realization {
            dim: 0,
            samples: 1,
            seed: 1,
        };
        let report = run_instance(&spec);
        assert!(!report.all_pass());
        assert_eq!(report.checks[0].name, "execution-error");
    }
}
