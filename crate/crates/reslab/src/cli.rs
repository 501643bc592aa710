//! Batch front-end: one TOML job configuration in, deterministic artifacts
//! out.
//!
//! # Job configuration (schema version 1)
//!
//! ```toml
//! schema_version = 1
//! kind = "resonances"     # resonances | pressure | dimension | weyl-fit |
//!                         # gap | fup | orbits; must match the subcommand
//! seed = 0                # optional, recorded in the manifest
//! output_dir = "out/run"  # overridable with --out
//!
//! [model]                 # a model file path, or an inline Cantor spec
//! path = "configs/three_funnel_group.toml"
//! # cantor = { base = 3, alphabet = [0, 2] }
//!
//! [params]                # numeric parameters; used fields depend on kind
//! rectangle = { re_lo = -1.0, re_hi = 1.0, im_lo = 0.0, im_hi = 30.0 }
//! density = 32.0          # boundary sampling density (optional)
//! tol = 1e-9              # zero-location tolerance (default 1e-9)
//! nodes_per_disk = 24     # transfer-operator truncation (surfaces)
//! max_word_length = 8     # orbit/class enumeration depth
//! m_max = 8               # spectral-product truncation (optional)
//! method = "determinant"  # resonances/weyl-fit: determinant | cycle
//!                         # pressure: window | zeta_root | both
//! betas = [0.0, 0.5, 1.0] # pressure grid, or beta_grid = { start, stop, count }
//! strip_depth = 1.0       # weyl-fit
//! window_width = 12.0     # weyl-fit
//! window_centers = [40.0, 64.0, 88.0, 112.0]
//! k_min = 1               # fup depth range
//! k_max = 10
//! cap = 4000000           # enumeration / set-size cap
//! depth = 12              # dimension: box-count refinement depth
//! scales = [0.0625, 0.03125, 0.015625]   # dimension: box-count scales
//! scan = { re_points = 41, im_points = 41 }  # resonances: grid export
//! ```
//!
//! # Artifacts
//!
//! Every job writes its data files plus `manifest.json` (tool version, the
//! config checksum, per-file SHA-256 checksums, and the run timestamp — the
//! only timestamp anywhere). Data files are deterministic: rerunning a
//! config reproduces them byte for byte. Writes are atomic (temp file,
//! rename); the manifest is written last, so its presence marks a complete
//! run.
//!
//! | kind       | files                                         |
//! |------------|-----------------------------------------------|
//! | resonances | `resonances.csv` (+ `zeta_scan.csv` with scan)|
//! | pressure   | `pressure.csv`                                |
//! | dimension  | `dimension.json`                              |
//! | weyl-fit   | `weyl_fit.json`, `resonances.csv`             |
//! | gap        | `gap_report.json`                             |
//! | fup        | `fup.csv`, `fup.json`                         |
//! | orbits     | `geodesics.csv` or `orbits.csv`               |
//!
//! # Exit codes
//!
//! 0 success; 2 configuration error (bad flags, malformed or invalid
//! config, missing model file); 3 numerical or output failure.
//!
//! # Caching
//!
//! With `RESLAB_CACHE_DIR` set, the `orbits` job caches its table under a
//! content address (model bytes, parameters, tool version), so repeated
//! enumerations of the same system are read back instead of recomputed.

use crate::billiard::BilliardZeta;
use crate::fup::{cantor_indices, fup_exponent, CantorSpec};
use crate::io::{
    self, billiard_resonance_csv, fup_csv, geodesic_csv, json_pretty, orbit_csv, pressure_csv,
    resonance_csv, sha256_hex, write_atomic, zeta_scan_csv, ModelFile, PressureRow, ZetaScanRow,
};
use crate::schottky::CLASS_CAP;
use crate::thermo::{
    bowen_dimension, gap_prediction, pressure_curve, OrbitEnsemble, PressureMethod,
};
use crate::xfer::{zeta_det_value, CycleExpansion, TransferAssembly, TransferDiscretization};
use crate::zeros::{gap_report, locate_zeros, weyl_fit, ResonanceSet, SearchRectangle,
    SpectralPlane};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
const DEFAULT_TOL: f64 = 1e-9;
const DEFAULT_NODES: usize = 24;
const DEFAULT_WORD_LENGTH: usize = 8;
const DEFAULT_M_MAX_BILLIARD: usize = 8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config field `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("{context}: {reason}")]
    Numerical { context: String, reason: String },
    #[error("cannot write `{path}`: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this failure (2 config, 3 numerical/output).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            _ => 3,
        }
    }
}

fn cfg_err(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Config { field: field.into(), reason: reason.into() }
}

fn num_err(context: &str, reason: impl ToString) -> CliError {
    CliError::Numerical { context: context.into(), reason: reason.to_string() }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    schema_version: u32,
    kind: String,
    seed: Option<u64>,
    model: RawModelRef,
    #[serde(default)]
    params: RawParams,
    output_dir: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelRef {
    path: Option<PathBuf>,
    cantor: Option<RawCantor>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCantor {
    base: usize,
    alphabet: Vec<usize>,
    cap: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    rectangle: Option<RawRect>,
    density: Option<f64>,
    tol: Option<f64>,
    nodes_per_disk: Option<usize>,
    max_word_length: Option<usize>,
    m_max: Option<usize>,
    method: Option<String>,
    betas: Option<Vec<f64>>,
    beta_grid: Option<RawBetaGrid>,
    strip_depth: Option<f64>,
    window_width: Option<f64>,
    window_centers: Option<Vec<f64>>,
    k_min: Option<usize>,
    k_max: Option<usize>,
    cap: Option<usize>,
    depth: Option<usize>,
    scales: Option<Vec<f64>>,
    scan: Option<RawScan>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRect {
    re_lo: f64,
    re_hi: f64,
    im_lo: f64,
    im_hi: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBetaGrid {
    start: f64,
    stop: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    re_points: usize,
    im_points: usize,
}

/// The run manifest: provenance for every artifact in the output directory.
/// `created_unix_epoch_seconds` is the only timestamp in any output file.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub created_unix_epoch_seconds: u64,
    pub job_kind: String,
    pub seed: u64,
    pub config_sha256: String,
    pub files: BTreeMap<String, String>,
}

struct Job {
    kind: String,
    seed: u64,
    model: ModelFile,
    model_bytes: Vec<u8>,
    params: RawParams,
    output_dir: PathBuf,
}

fn load_job(config_path: &Path, out_override: Option<&Path>) -> Result<(Job, Vec<u8>), CliError> {
    let config_bytes = fs::read(config_path).map_err(|e| {
        cfg_err("config", format!("cannot read `{}`: {e}", config_path.display()))
    })?;
    let text = std::str::from_utf8(&config_bytes)
        .map_err(|_| cfg_err("config", "config file is not UTF-8"))?;
    let raw: RawJob = toml::from_str(text).map_err(|e| cfg_err("config", e.to_string()))?;
    if raw.schema_version != 1 {
        return Err(cfg_err(
            "schema_version",
            format!("unsupported version {}, expected 1", raw.schema_version),
        ));
    }
    let known = ["resonances", "pressure", "dimension", "weyl-fit", "gap", "fup", "orbits"];
    if !known.contains(&raw.kind.as_str()) {
        return Err(cfg_err("kind", format!("unknown job kind `{}`", raw.kind)));
    }
    let (model, model_bytes) = match (&raw.model.path, &raw.model.cantor) {
        (Some(_), Some(_)) => {
            return Err(cfg_err("model", "give `path` or `cantor`, not both"));
        }
        (Some(p), None) => {
            // Resolve relative to the config file, so configs are portable.
            let resolved = if p.is_relative() {
                config_path.parent().unwrap_or(Path::new(".")).join(p)
            } else {
                p.clone()
            };
            let bytes = fs::read(&resolved).map_err(|e| {
                cfg_err("model.path", format!("cannot read `{}`: {e}", resolved.display()))
            })?;
            let model = io::read_model(&resolved).map_err(|e| match e {
                io::IoError::Model { field, reason } => {
                    cfg_err(&format!("model.{field}"), reason)
                }
                other => cfg_err("model.path", other.to_string()),
            })?;
            (model, bytes)
        }
        (None, Some(c)) => {
            let mut spec = CantorSpec::new(c.base, &c.alphabet)
                .map_err(|e| cfg_err("model.cantor", e.to_string()))?;
            if let Some(cap) = c.cap {
                spec = spec.with_cap(cap);
            }
            let bytes = format!("cantor:{}:{:?}:{}", c.base, c.alphabet, spec.cap()).into_bytes();
            (ModelFile::Cantor(spec), bytes)
        }
        (None, None) => return Err(cfg_err("model", "a model `path` or `cantor` is required")),
    };
    if raw.output_dir.is_empty() {
        return Err(cfg_err("output_dir", "must not be empty"));
    }
    let output_dir =
        out_override.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(&raw.output_dir));
    Ok((
        Job {
            kind: raw.kind,
            seed: raw.seed.unwrap_or(0),
            model,
            model_bytes,
            params: raw.params,
            output_dir,
        },
        config_bytes,
    ))
}

impl Job {
    fn tol(&self) -> Result<f64, CliError> {
        let tol = self.params.tol.unwrap_or(DEFAULT_TOL);
        if tol > 0.0 && tol.is_finite() {
            Ok(tol)
        } else {
            Err(cfg_err("params.tol", "must be positive and finite"))
        }
    }

    fn rectangle(&self) -> Result<SearchRectangle, CliError> {
        let r = self
            .params
            .rectangle
            .as_ref()
            .ok_or_else(|| cfg_err("params.rectangle", "required for this job kind"))?;
        let mut rect = SearchRectangle::from_bounds(r.re_lo, r.re_hi, r.im_lo, r.im_hi)
            .map_err(|e| cfg_err("params.rectangle", e.to_string()))?;
        if let Some(d) = self.params.density {
            rect = rect
                .with_density(d)
                .map_err(|e| cfg_err("params.density", e.to_string()))?;
        }
        Ok(rect)
    }

    fn word_length(&self) -> usize {
        self.params.max_word_length.unwrap_or(DEFAULT_WORD_LENGTH)
    }

    fn cap(&self) -> usize {
        self.params.cap.unwrap_or(CLASS_CAP)
    }

    fn nodes(&self) -> Result<TransferDiscretization, CliError> {
        let nodes_per_disk = self.params.nodes_per_disk.unwrap_or(DEFAULT_NODES);
        if nodes_per_disk < 8 {
            return Err(cfg_err("params.nodes_per_disk", "must be at least 8"));
        }
        Ok(TransferDiscretization { nodes_per_disk })
    }

    fn betas(&self) -> Result<Vec<f64>, CliError> {
        match (&self.params.betas, &self.params.beta_grid) {
            (Some(_), Some(_)) => {
                Err(cfg_err("params.betas", "give `betas` or `beta_grid`, not both"))
            }
            (Some(b), None) => {
                if b.is_empty() {
                    Err(cfg_err("params.betas", "must not be empty"))
                } else {
                    Ok(b.clone())
                }
            }
            (None, Some(g)) => {
                if g.count < 2 {
                    return Err(cfg_err("params.beta_grid", "count must be at least 2"));
                }
                let step = (g.stop - g.start) / (g.count - 1) as f64;
                Ok((0..g.count).map(|i| g.start + step * i as f64).collect())
            }
            (None, None) => Ok(vec![0.0, 0.25, 0.5, 0.75, 1.0]),
        }
    }

    fn ensemble(&self) -> Result<OrbitEnsemble, CliError> {
        let wl = self.word_length();
        match &self.model {
            ModelFile::Schottky(g) => {
                let classes = g
                    .enumerate_primitives(wl, self.cap())
                    .map_err(|e| num_err("class enumeration", e))?;
                Ok(OrbitEnsemble::from_geodesics(&classes, wl))
            }
            ModelFile::Disks(s) => {
                let orbits = s
                    .enumerate_orbits(wl, self.cap())
                    .map_err(|e| num_err("orbit enumeration", e))?;
                Ok(OrbitEnsemble::from_orbits(&orbits, wl))
            }
            ModelFile::Cantor(_) => {
                Err(cfg_err("model", "this job kind needs a schottky or disks model"))
            }
        }
    }

    /// Locates zeros of the configured zeta function inside the rectangle.
    /// Returns the set, its spectral plane, and scan rows if requested.
    fn zero_set(&self) -> Result<(ResonanceSet, SpectralPlane, Vec<ZetaScanRow>), CliError> {
        let rect = self.rectangle()?;
        let tol = self.tol()?;
        let scan_grid = |f: &dyn Fn(Complex64) -> ZetaScanRow| -> Vec<ZetaScanRow> {
            let Some(s) = &self.params.scan else { return Vec::new() };
            if s.re_points < 2 || s.im_points < 2 {
                return Vec::new();
            }
            let mut rows = Vec::with_capacity(s.re_points * s.im_points);
            for i in 0..s.re_points {
                let re = rect.lo().re
                    + (rect.hi().re - rect.lo().re) * i as f64 / (s.re_points - 1) as f64;
                for j in 0..s.im_points {
                    let im = rect.lo().im
                        + (rect.hi().im - rect.lo().im) * j as f64 / (s.im_points - 1) as f64;
                    rows.push(f(Complex64::new(re, im)));
                }
            }
            rows
        };
        match &self.model {
            ModelFile::Schottky(g) => {
                let method = self.params.method.as_deref().unwrap_or("determinant");
                let (set, rows) = match method {
                    "determinant" => {
                        let disc = self.nodes()?;
                        let assembly = TransferAssembly::new(g, disc);
                        let f = |s: Complex64| assembly.zeta_det(s);
                        let set = locate_zeros(
                            &f,
                            &rect,
                            tol,
                            "zeta_det(schottky)",
                            &format!("M={}", disc.nodes_per_disk),
                        )
                        .map_err(|e| num_err("zero search", e))?;
                        let rows = scan_grid(&|s| ZetaScanRow {
                            s,
                            zeta: zeta_det_value(g, disc, s),
                        });
                        (set, rows)
                    }
                    "cycle" => {
                        let ce = CycleExpansion::new(g, self.word_length(), self.cap())
                            .map_err(|e| num_err("class enumeration", e))?;
                        let m_max = self.params.m_max;
                        let f = |s: Complex64| ce.eval(s, m_max).value;
                        let set = locate_zeros(
                            &f,
                            &rect,
                            tol,
                            "zeta_cycle(schottky)",
                            &format!("L={}", self.word_length()),
                        )
                        .map_err(|e| num_err("zero search", e))?;
                        let rows = scan_grid(&|s| ZetaScanRow { s, zeta: ce.eval(s, m_max) });
                        (set, rows)
                    }
                    other => {
                        return Err(cfg_err(
                            "params.method",
                            format!("unknown method `{other}` (determinant | cycle)"),
                        ))
                    }
                };
                Ok((set, SpectralPlane::Surface, rows))
            }
            ModelFile::Disks(sys) => {
                let bz = BilliardZeta::new(sys, self.word_length(), self.cap())
                    .map_err(|e| num_err("orbit enumeration", e))?;
                let m_max = self.params.m_max.unwrap_or(DEFAULT_M_MAX_BILLIARD);
                let f = |k: Complex64| bz.eval(k, m_max);
                let set = locate_zeros(
                    &f,
                    &rect,
                    tol,
                    "dynamical_zeta(billiard)",
                    &format!("L={} m={}", self.word_length(), m_max),
                )
                .map_err(|e| num_err("zero search", e))?;
                let rows = scan_grid(&|k| {
                    let (value, err) = bz.eval_with_estimate(k, m_max);
                    ZetaScanRow {
                        s: k,
                        zeta: crate::xfer::ZetaValue {
                            value,
                            method: crate::xfer::ZetaMethod::Cycle,
                            truncation: self.word_length(),
                            error_estimate: err,
                        },
                    }
                });
                Ok((set, SpectralPlane::Billiard, rows))
            }
            ModelFile::Cantor(_) => {
                Err(cfg_err("model", "zero searches need a schottky or disks model"))
            }
        }
    }

    fn run(&self, verbose: bool) -> Result<Vec<(String, Vec<u8>)>, CliError> {
        match self.kind.as_str() {
            "resonances" => self.job_resonances(),
            "pressure" => self.job_pressure(),
            "dimension" => self.job_dimension(),
            "weyl-fit" => self.job_weyl_fit(),
            "gap" => self.job_gap(),
            "fup" => self.job_fup(),
            "orbits" => self.job_orbits(verbose),
            other => Err(cfg_err("kind", format!("unknown job kind `{other}`"))),
        }
    }

    fn job_resonances(&self) -> Result<Vec<(String, Vec<u8>)>, CliError> {
        let (set, plane, scan) = self.zero_set()?;
        let csv = match plane {
            SpectralPlane::Surface => resonance_csv(&set),
            SpectralPlane::Billiard => billiard_resonance_csv(&set),
        };
        let mut files = vec![("resonances.csv".to_string(), csv.into_bytes())];
        if !scan.is_empty() {
            files.push(("zeta_scan.csv".to_string(), zeta_scan_csv(&scan).into_bytes()));
        }
        Ok(files)
    }

    fn job_pressure(&self) -> Result<Vec<(String, Vec<u8>)>, CliError> {
        let ens = self.ensemble()?;
        let betas = self.betas()?;
        let methods: Vec<PressureMethod> =
            match self.params.method.as_deref().unwrap_or("both") {
                "window" => vec![PressureMethod::Window],
                "zeta_root" => vec![PressureMethod::ZetaRoot],
                "both" => vec![PressureMethod::Window, PressureMethod::ZetaRoot],
                other => {
                    return Err(cfg_err(
                        "params.method",
                        format!("unknown method `{other}` (window | zeta_root | both)"),
                    ))
                }
            };
        let mut rows = Vec::new();
        for method in methods {
            let curve = pressure_curve(&ens, &betas, method)
                .map_err(|e| num_err("pressure evaluation", e))?;
            rows.extend(curve.into_iter().map(|(beta, pressure)| PressureRow {
                beta,
                pressure,
                method,
                max_word_length: ens.max_word_len(),
            }));
        }
        Ok(vec![("pressure.csv".to_string(), pressure_csv(&rows).into_bytes())])
    }

    fn job_dimension(&self) -> Result<Vec<(String, Vec<u8>)>, CliError> {
        let ModelFile::Schottky(g) = &self.model else {
            return Err(cfg_err("model", "dimension jobs need a schottky model"));
        };
        let ens = self.ensemble()?;
        let bowen = bowen_dimension(&ens).map_err(|e| num_err("bowen dimension", e))?;
        let disc = self.nodes()?;
        let assembly = TransferAssembly::new(g, disc);
        let eigen_root = bisect_root(
            &|s| assembly.leading_eigenvalue(s) - 1.0,
            "leading eigenvalue",
        )?;
        let zeta_root = largest_real_zero(&assembly)?;
        let depth = self.params.depth.unwrap_or(12);
        let scales = match &self.params.scales {
            Some(s) => s.clone(),
            None => (5..=12).map(|k| 0.5f64.powi(k)).collect(),
        };
        let boxes = g
            .limit_set_boxcount(depth, &scales)
            .map_err(|e| num_err("box counting", e))?;
        #[derive(Serialize)]
        struct Dimension {
            bowen: f64,
            eigenvalue_root: f64,
            zeta_root: f64,
            box_count: f64,
            box_counts: Vec<(f64, usize)>,
            max_pairwise_difference: f64,
            max_word_length: usize,
            nodes_per_disk: usize,
        }
        let ests = [bowen, eigen_root, zeta_root];
        let mut max_diff = 0.0f64;
        for i in 0..ests.len() {
            for j in i + 1..ests.len() {
                max_diff = max_diff.max((ests[i] - ests[j]).abs());
            }
        }
        let report = Dimension {
            bowen,
            eigenvalue_root: eigen_root,
            zeta_root,
            box_count: boxes.dimension_estimate,
            box_counts: boxes.counts,
            max_pairwise_difference: max_diff,
            max_word_length: ens.max_word_len(),
            nodes_per_disk: disc.nodes_per_disk,
        };
        Ok(vec![("dimension.json".to_string(), json_pretty(&report).into_bytes())])
    }

    fn job_weyl_fit(&self) -> Result<Vec<(String, Vec<u8>)>, CliError> {
        let strip_depth = self
            .params
            .strip_depth
            .ok_or_else(|| cfg_err("params.strip_depth", "required for weyl-fit jobs"))?;
        let window_width = self
            .params
            .window_width
            .ok_or_else(|| cfg_err("params.window_width", "required for weyl-fit jobs"))?;
        let centers = self
            .params
            .window_centers
            .as_ref()
            .ok_or_else(|| cfg_err("params.window_centers", "required for weyl-fit jobs"))?;
        let (set, plane, _) = self.zero_set()?;
        let fit = weyl_fit(&set, plane, strip_depth, window_width, centers)
            .map_err(|e| num_err("weyl fit", e))?;
        let csv = match plane {
            SpectralPlane::Surface => resonance_csv(&set),
            SpectralPlane::Billiard => billiard_resonance_csv(&set),
        };
        Ok(vec![
            ("weyl_fit.json".to_string(), json_pretty(&fit).into_bytes()),
            ("resonances.csv".to_string(), csv.into_bytes()),
        ])
    }

    fn job_gap(&self) -> Result<Vec<(String, Vec<u8>)>, CliError> {
        let ens = self.ensemble()?;
        let prediction = gap_prediction(&ens).map_err(|e| num_err("gap prediction", e))?;
        #[derive(Serialize)]
        struct EnsembleMeta {
            source: String,
            max_word_length: usize,
            orbit_count: usize,
        }
        #[derive(Serialize)]
        struct Gap {
            prediction: crate::thermo::GapPrediction,
            ensemble: EnsembleMeta,
            observed: Option<crate::zeros::GapReport>,
        }
        // A rectangle turns on the observational half: locate zeros and
        // compare the shallowest against the predicted line.
        let observed = if self.params.rectangle.is_some() {
            let (set, plane, _) = self.zero_set()?;
            let delta = match &self.model {
                ModelFile::Schottky(_) => {
                    bowen_dimension(&ens).map_err(|e| num_err("bowen dimension", e))?
                }
                _ => 0.0,
            };
            Some(
                gap_report(&set, plane, delta, prediction.pressure_half)
                    .map_err(|e| num_err("gap report", e))?,
            )
        } else {
            None
        };
        let report = Gap {
            prediction,
            ensemble: EnsembleMeta {
                source: ens.source().to_string(),
                max_word_length: ens.max_word_len(),
                orbit_count: ens.entries().len(),
            },
            observed,
        };
        Ok(vec![("gap_report.json".to_string(), json_pretty(&report).into_bytes())])
    }

    fn job_fup(&self) -> Result<Vec<(String, Vec<u8>)>, CliError> {
        let ModelFile::Cantor(spec) = &self.model else {
            return Err(cfg_err("model", "fup jobs need a cantor model"));
        };
        let k_min = self.params.k_min.unwrap_or(1);
        let k_max = self
            .params
            .k_max
            .ok_or_else(|| cfg_err("params.k_max", "required for fup jobs"))?;
        if k_min < 1 || k_max < k_min {
            return Err(cfg_err("params.k_min", "need 1 <= k_min <= k_max"));
        }
        let est = fup_exponent(spec, k_min..=k_max).map_err(|e| num_err("fup exponent", e))?;
        #[derive(Serialize)]
        struct FupSummary {
            base: usize,
            alphabet: Vec<usize>,
            delta: f64,
            beta_estimate: f64,
            stabilization: f64,
            volume_floor: f64,
        }
        let summary = FupSummary {
            base: spec.base(),
            alphabet: spec.alphabet().to_vec(),
            delta: spec.delta(),
            beta_estimate: est.beta_estimate,
            stabilization: est.stabilization,
            volume_floor: (0.5 - spec.delta()).max(0.0),
        };
        Ok(vec![
            ("fup.csv".to_string(), fup_csv(spec, &est.table).into_bytes()),
            ("fup.json".to_string(), json_pretty(&summary).into_bytes()),
        ])
    }

    fn job_orbits(&self, verbose: bool) -> Result<Vec<(String, Vec<u8>)>, CliError> {
        let wl = self.word_length();
        let cap = self.cap();
        let (name, key) = match &self.model {
            ModelFile::Cantor(_) => {
                return Err(cfg_err("model", "orbits jobs need a schottky or disks model"))
            }
            m => {
                let name = match m {
                    ModelFile::Schottky(_) => "geodesics.csv",
                    _ => "orbits.csv",
                };
                let key = sha256_hex(
                    format!(
                        "{}|kind={}|wl={wl}|cap={cap}|v={TOOL_VERSION}",
                        sha256_hex(&self.model_bytes),
                        m.kind()
                    )
                    .as_bytes(),
                );
                (name, key)
            }
        };
        let cache_dir = std::env::var_os("RESLAB_CACHE_DIR").map(PathBuf::from);
        if let Some(dir) = &cache_dir {
            if let Some(bytes) = io::cache_get(dir, &key) {
                if verbose {
                    eprintln!("orbit cache hit: {key}");
                }
                return Ok(vec![(name.to_string(), bytes)]);
            }
        }
        let csv = match &self.model {
            ModelFile::Schottky(g) => {
                let classes = g
                    .enumerate_primitives(wl, cap)
                    .map_err(|e| num_err("class enumeration", e))?;
                geodesic_csv(g, &classes)
            }
            ModelFile::Disks(s) => {
                let orbits =
                    s.enumerate_orbits(wl, cap).map_err(|e| num_err("orbit enumeration", e))?;
                orbit_csv(s, &orbits)
            }
            ModelFile::Cantor(_) => unreachable!("rejected above"),
        };
        if let Some(dir) = &cache_dir {
            io::cache_put(dir, &key, csv.as_bytes());
            if verbose {
                eprintln!("orbit cache store: {key}");
            }
        }
        Ok(vec![(name.to_string(), csv.into_bytes())])
    }
}

/// Bisects a decreasing function of `s` to its root on [0, 1].
fn bisect_root(f: &dyn Fn(f64) -> f64, context: &str) -> Result<f64, CliError> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(num_err(
            context,
            format!("no sign change on [0, 1]: f(0) = {flo}, f(1) = {fhi}"),
        ));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest real zero of the determinant on [-0.25, 1]: scan downward for
/// the first sign change, then bisect.
fn largest_real_zero(assembly: &TransferAssembly) -> Result<f64, CliError> {
    let f = |s: f64| assembly.zeta_det(Complex64::new(s, 0.0)).re;
    let steps = 125usize;
    let (top, bottom) = (1.0f64, -0.25f64);
    let h = (top - bottom) / steps as f64;
    let mut prev = f(top);
    for i in 1..=steps {
        let s = top - h * i as f64;
        let cur = f(s);
        if prev.signum() != cur.signum() {
            let (mut lo, mut hi) = (s, s + h);
            let mut flo = cur;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        prev = cur;
    }
    Err(num_err("zeta real zero", "no sign change of the determinant on [-0.25, 1]"))
}

/// Runs a job config end to end and returns the manifest, after writing all
/// artifacts plus `manifest.json` into the output directory.
pub fn run_job(
    config_path: &Path,
    out_override: Option<&Path>,
    expected_kind: Option<&str>,
    verbose: bool,
) -> Result<Manifest, CliError> {
    let (job, config_bytes) = load_job(config_path, out_override)?;
    if let Some(expected) = expected_kind {
        if job.kind != expected {
            return Err(cfg_err(
                "kind",
                format!("config says `{}` but the `{expected}` subcommand was used", job.kind),
            ));
        }
    }
    if verbose {
        eprintln!("job: {} on {} model -> {}", job.kind, job.model.kind(), job.output_dir.display());
    }
    let files = job.run(verbose)?;
    fs::create_dir_all(&job.output_dir)
        .map_err(|e| CliError::Output { path: job.output_dir.clone(), source: e })?;
    let mut checksums = BTreeMap::new();
    for (name, bytes) in &files {
        let path = job.output_dir.join(name);
        write_atomic(&path, bytes).map_err(|e| CliError::Output { path, source: e })?;
        checksums.insert(name.clone(), sha256_hex(bytes));
        if verbose {
            eprintln!("wrote {name} ({} bytes)", bytes.len());
        }
    }
    let manifest = Manifest {
        schema_version: 1,
        tool_version: TOOL_VERSION.to_string(),
        created_unix_epoch_seconds: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        job_kind: job.kind.clone(),
        seed: job.seed,
        config_sha256: sha256_hex(&config_bytes),
        files: checksums,
    };
    let manifest_path = job.output_dir.join("manifest.json");
    write_atomic(&manifest_path, json_pretty(&manifest).as_bytes())
        .map_err(|e| CliError::Output { path: manifest_path, source: e })?;
    Ok(manifest)
}

#[derive(Parser)]
#[command(
    name = "reslab",
    version,
    about = "Resonances, pressure, dimension, and uncertainty exponents for open chaotic scatterers"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct JobArgs {
    /// Job configuration file (TOML; see the crate docs for the schema).
    #[arg(long)]
    config: PathBuf,
    /// Override the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap the worker-thread count (results are independent of it).
    #[arg(long)]
    threads: Option<usize>,
    /// Log progress to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Locate zeta zeros (resonances) in a rectangle.
    Resonances(JobArgs),
    /// Evaluate the topological pressure on a grid of weights.
    Pressure(JobArgs),
    /// Estimate the limit-set dimension four independent ways.
    Dimension(JobArgs),
    /// Fit a fractal Weyl law to windowed resonance counts.
    WeylFit(JobArgs),
    /// Predict (and optionally observe) the resonance gap.
    Gap(JobArgs),
    /// Measure fractal uncertainty exponents for a Cantor set.
    Fup(JobArgs),
    /// Export the primitive orbit / geodesic table.
    Orbits(JobArgs),
}

impl Cmd {
    fn split(&self) -> (&'static str, &JobArgs) {
        match self {
            Cmd::Resonances(a) => ("resonances", a),
            Cmd::Pressure(a) => ("pressure", a),
            Cmd::Dimension(a) => ("dimension", a),
            Cmd::WeylFit(a) => ("weyl-fit", a),
            Cmd::Gap(a) => ("gap", a),
            Cmd::Fup(a) => ("fup", a),
            Cmd::Orbits(a) => ("orbits", a),
        }
    }
}

/// CLI entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are successful exits; real usage errors are
            // configuration errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (kind, job_args) = cli.cmd.split();
    if let Some(n) = job_args.threads {
        if n == 0 {
            eprintln!("error: config field `--threads`: must be positive");
            return 2;
        }
        // A second initialization in the same process keeps the first pool;
        // results do not depend on the pool size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run_job(&job_args.config, job_args.out.as_deref(), Some(kind), job_args.verbose) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Guard used by tests and examples that need cantor indices through the
/// public surface.
pub fn cantor_preview(spec: &CantorSpec, k: usize) -> Result<Vec<u64>, CliError> {
    cantor_indices(spec, k).map_err(|e| num_err("cantor indices", e))
}
