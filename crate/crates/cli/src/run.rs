//! Executes an [`ExperimentConfig`], writes its artifact and a run manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use corrlab_core::corr::{self, catalog, PolyCorrespondence};
use corrlab_core::ergostats::{birkhoff_average, correlation_report, correlation_series, KoopmanConfig};
use corrlab_core::finite::{
    self, check_average_mixing_equivalence, check_hierarchy, check_main_theorem, ergodicity_witness,
    invariance_defect, invariant_measures, is_mixing, is_weak_mixing, FiniteMeasure, ENUMERATION_CAP,
};
use corrlab_core::measures::{
    self, estimate_ds_measure, pullback_dirac_exact, sample_annulus_measure, sample_circle_measure, TestFunction,
    WeightedPointCloud,
};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Action, ExperimentConfig, Sampler, BUILTIN_PREFIX};
use crate::error::{CliError, Context};
use crate::render::render_pgm;
use crate::spec::{parse_function_spec, parse_point};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// What an action produced.
pub struct Artifact {
    pub bytes: Vec<u8>,
    pub warnings: Vec<String>,
    /// Informational lines for stderr.
    pub notes: Vec<String>,
    /// Files read by the action, for the manifest.
    pub inputs: Vec<PathBuf>,
}

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn spec_error(key: &str, spec: &str, e: impl std::fmt::Display) -> CliError {
    CliError::config(format!("{key} {spec:?}: {e}"))
}

fn function(key: &str, spec: &Option<String>) -> Result<TestFunction, CliError> {
    let s = spec.as_deref().expect("resolved config");
    parse_function_spec(s).map_err(|e| spec_error(key, s, e))
}

fn point(key: &str, spec: &Option<String>) -> Result<corrlab_core::SpherePoint, CliError> {
    let s = spec.as_deref().expect("resolved config");
    parse_point(s).map_err(|e| spec_error(key, s, e))
}

/// Loads a correspondence file or a `builtin:` name.
pub fn load_correspondence(spec: &str, inputs: &mut Vec<PathBuf>) -> Result<PolyCorrespondence, CliError> {
    if let Some(name) = spec.strip_prefix(BUILTIN_PREFIX) {
        return match name {
            "identity" => Ok(catalog::identity()),
            "squaring" => Ok(catalog::squaring()),
            "semigroup" => Ok(catalog::semigroup_square_half_square()),
            _ => match name.strip_prefix("power:").and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if k >= 1 => Ok(catalog::power(k)),
                _ => Err(CliError::config(format!(
                    "unknown builtin correspondence {name:?} (identity, squaring, semigroup, power:<k>)"
                ))),
            },
        };
    }
    let path = PathBuf::from(spec);
    let text = String::from_utf8_lossy(&read(&path)?).into_owned();
    inputs.push(path);
    corr::io::from_text(&text).during(&format!("loading {spec}"))
}

fn load_cloud(path: &Path, inputs: &mut Vec<PathBuf>) -> Result<WeightedPointCloud, CliError> {
    let text = String::from_utf8_lossy(&read(path)?).into_owned();
    inputs.push(path.to_path_buf());
    measures::io::cloud_from_text(&text).during(&format!("loading {}", path.display()))
}

fn koopman(cfg: &ExperimentConfig) -> KoopmanConfig {
    KoopmanConfig {
        cap: cfg.cap.expect("resolved config"),
        walks: cfg.walks.expect("resolved config"),
        seed: cfg.seed,
        allow_sampling: true,
    }
}

fn json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report serializes");
    out.push(b'\n');
    out
}

/// Seed, horizon, caps and input digests shared by numeric reports.
fn provenance(cfg: &ExperimentConfig, inputs: &[PathBuf]) -> Result<Value, CliError> {
    let mut digests = serde_json::Map::new();
    for p in inputs {
        digests.insert(p.display().to_string(), Value::String(sha256_hex(&read(p)?)));
    }
    Ok(json!({
        "seed": cfg.seed,
        "horizon": cfg.horizon,
        "cap": cfg.cap,
        "walks": cfg.walks,
        "correspondence": cfg.correspondence,
        "phi": cfg.phi,
        "psi": cfg.psi,
        "input_sha256": digests,
    }))
}

/// Runs the action and returns its artifact without touching the output path.
pub fn execute(cfg: &ExperimentConfig) -> Result<Artifact, CliError> {
    let mut inputs = Vec::new();
    let mut warnings = Vec::new();
    let mut notes = Vec::new();
    let op = cfg.action.name();
    let bytes = match cfg.action {
        Action::Degrees => {
            let c = load_correspondence(cfg.correspondence.as_deref().unwrap(), &mut inputs)?;
            format!(
                "label = {}\ncomponents = {}\nd = {}\nd_f = {}\n",
                c.label(),
                c.components().len(),
                c.topological_degree(),
                c.forward_degree()
            )
            .into_bytes()
        }
        Action::Preimage => {
            let c = load_correspondence(cfg.correspondence.as_deref().unwrap(), &mut inputs)?;
            let z = point("point", &cfg.point)?;
            let cloud = pullback_dirac_exact(&c, z, cfg.depth.unwrap(), cfg.cap.unwrap()).during(op)?;
            measures::io::cloud_to_text(&cloud).into_bytes()
        }
        Action::Measure => {
            let samples = cfg.samples.unwrap();
            let cloud = match cfg.sampler.unwrap() {
                Sampler::Ds => {
                    let c = load_correspondence(cfg.correspondence.as_deref().unwrap(), &mut inputs)?;
                    let z = point("start", &cfg.start)?;
                    let est = estimate_ds_measure(&c, z, cfg.depth.unwrap(), samples, cfg.seed).during(op)?;
                    warnings.extend(est.warnings);
                    notes.push(format!("invariance residual {:.3e}", est.invariance_residual));
                    est.cloud
                }
                Sampler::Annulus => sample_annulus_measure(samples, cfg.seed).during(op)?,
                Sampler::Circle => sample_circle_measure(samples, cfg.seed).during(op)?,
            };
            measures::io::cloud_to_text(&cloud).into_bytes()
        }
        Action::Correlate | Action::MixingReport => {
            let c = load_correspondence(cfg.correspondence.as_deref().unwrap(), &mut inputs)?;
            let cloud = load_cloud(cfg.cloud.as_deref().unwrap(), &mut inputs)?;
            let phi = function("phi", &cfg.phi)?;
            let psi = function("psi", &cfg.psi)?;
            let horizon = cfg.horizon.unwrap();
            let kc = koopman(cfg);
            let prov = provenance(cfg, &inputs)?;
            if cfg.action == Action::Correlate {
                let series = correlation_series(&c, &cloud, &phi, &psi, horizon, &kc).during(op)?;
                json_bytes(&json!({ "action": op, "provenance": prov, "series": series }))
            } else {
                let report = correlation_report(&c, &cloud, &phi, &psi, horizon, &kc).during(op)?;
                json_bytes(&json!({ "action": op, "provenance": prov, "report": report }))
            }
        }
        Action::Birkhoff => {
            let c = load_correspondence(cfg.correspondence.as_deref().unwrap(), &mut inputs)?;
            let z = point("start", &cfg.start)?;
            let phi = function("phi", &cfg.phi)?;
            let avg = birkhoff_average(&c, &phi, z, cfg.horizon.unwrap(), &koopman(cfg)).during(op)?;
            let prov = provenance(cfg, &inputs)?;
            json_bytes(&json!({ "action": op, "provenance": prov, "start": cfg.start, "birkhoff": avg }))
        }
        Action::FiniteCheck => {
            let path = cfg.instance.as_deref().unwrap();
            let text = String::from_utf8_lossy(&read(path)?).into_owned();
            inputs.push(path.to_path_buf());
            let (fc, given) = finite::io::instance_from_toml(&text).during(&format!("loading {}", path.display()))?;
            json_bytes(&finite_report(&fc, given, &mut warnings)?)
        }
        Action::Render => {
            let cloud = load_cloud(cfg.cloud.as_deref().unwrap(), &mut inputs)?;
            let r = render_pgm(&cloud, cfg.size.unwrap(), cfg.window.unwrap())?;
            if r.captured == 0.0 {
                warnings.push("render window contains no cloud points; image is dark".into());
            }
            r.pgm
        }
    };
    Ok(Artifact {
        bytes,
        warnings,
        notes,
        inputs,
    })
}

fn finite_report(
    fc: &finite::FiniteCorrespondence,
    given: Option<FiniteMeasure>,
    warnings: &mut Vec<String>,
) -> Result<Value, CliError> {
    let op = "finite-check";
    let extremes = invariant_measures(fc).during(op)?;
    let (mu, source) = match given {
        Some(mu) => (mu, "file".to_string()),
        None if extremes.len() == 1 => (extremes[0].clone(), "unique invariant measure".to_string()),
        None => {
            let k = extremes.len() as f64;
            let mut v = vec![0.0; fc.m()];
            for e in &extremes {
                v.iter_mut().zip(e.values()).for_each(|(x, y)| *x += y / k);
            }
            let mu = FiniteMeasure::new(v).during(op)?;
            (mu, format!("equal mixture of {} extreme invariant measures", extremes.len()))
        }
    };
    let main_theorem = if fc.m() * fc.m() <= ENUMERATION_CAP {
        Some(check_main_theorem(fc, &mu).during(op)?)
    } else {
        warnings.push(format!(
            "main-theorem check skipped: product has {} states, enumeration cap is {ENUMERATION_CAP}",
            fc.m() * fc.m()
        ));
        None
    };
    let witness = ergodicity_witness(fc, &mu).during(op)?;
    Ok(json!({
        "action": op,
        "m": fc.m(),
        "d": fc.degree(),
        "forward_degree_profile": fc.forward_degree_profile(),
        "measure": mu.values(),
        "measure_source": source,
        "invariant_measures": extremes.iter().map(|e| e.values().to_vec()).collect::<Vec<_>>(),
        "invariance_defect": invariance_defect(fc, &mu).during(op)?,
        "ergodic": witness.is_none(),
        "ergodicity_witness": witness,
        "mixing": is_mixing(fc, &mu).during(op)?,
        "weak_mixing": is_weak_mixing(fc, &mu).during(op)?,
        "hierarchy": check_hierarchy(fc, &mu).during(op)?,
        "average_mixing": check_average_mixing_equivalence(fc, &mu).during(op)?,
        "main_theorem": main_theorem,
    }))
}

/// Resolves, executes and persists a run. Without an output path the artifact
/// goes to stdout and no manifest is written.
pub fn run(cfg: ExperimentConfig) -> Result<(), CliError> {
    let cfg = cfg.resolve()?;
    let started = Instant::now();
    let artifact = execute(&cfg)?;
    let elapsed = started.elapsed().as_secs_f64();
    for w in &artifact.warnings {
        eprintln!("warning: {w}");
    }
    for n in &artifact.notes {
        eprintln!("{n}");
    }
    let Some(out) = &cfg.output else {
        use std::io::Write;
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(&artifact.bytes)
            .and_then(|_| stdout.flush())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            });
    };
    write(out, &artifact.bytes)?;
    let inputs = artifact
        .inputs
        .iter()
        .map(|p| {
            Ok(FileDigest {
                path: p.display().to_string(),
                sha256: sha256_hex(&read(p)?),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let manifest = json!({
        "corrlab_version": VERSION,
        "config": cfg,
        "wall_time_seconds": elapsed,
        "inputs": inputs,
        "outputs": [FileDigest { path: out.display().to_string(), sha256: sha256_hex(&artifact.bytes) }],
    });
    let manifest_path = manifest_path(out);
    write(&manifest_path, &json_bytes(&manifest))?;
    eprintln!("wrote {} and {}", out.display(), manifest_path.display());
    Ok(())
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Loads a config file or a run manifest. Relative paths in a config file are
/// taken relative to the file's directory; manifests already hold absolute paths.
pub fn load_run_file(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = String::from_utf8_lossy(&read(path)?).into_owned();
    if text.trim_start().starts_with('{') {
        let manifest: Value =
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let config = manifest
            .get("config")
            .cloned()
            .ok_or_else(|| CliError::config(format!("{}: manifest has no `config` entry", path.display())))?;
        return serde_json::from_value(config).map_err(|e| CliError::config(format!("{}: {e}", path.display())));
    }
    let base = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let base = std::path::absolute(base).map_err(|source| CliError::Io {
        path: base.display().to_string(),
        source,
    })?;
    Ok(ExperimentConfig::from_toml(&text)?.rebase(&base))
}
