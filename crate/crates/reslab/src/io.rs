//! On-disk formats: CSV tables, JSON reports, model description files,
//! atomic writes, and the content-addressed orbit cache.
//!
//! Every float column is printed with `{:.16e}` (17 significant digits), so
//! values round-trip through text exactly. Data files never contain
//! timestamps; identical inputs produce byte-identical files.
//!
//! # Model description files
//!
//! Models are TOML with a `schema_version` (currently 1) and a `kind`
//! discriminator. Three kinds exist:
//!
//! ```toml
//! # kind = "schottky": a Fuchsian Schottky group, either built...
//! schema_version = 1
//! kind = "schottky"
//! [builder]
//! name = "symmetric_funnels"   # or "cylinder"
//! ell = 6.0                    # both builders
//! x1 = 0.35                    # symmetric_funnels only
//! x2 = 2.45
//! ```
//!
//! ```toml
//! # ...or given by explicit 2x2 generator matrices (row-major):
//! schema_version = 1
//! kind = "schottky"
//! [[generator]]
//! a = 1.712
//! b = -1.4
//! c = 1.4
//! d = -0.952
//! ```
//!
//! ```toml
//! # kind = "disks": a planar disk scatterer.
//! schema_version = 1
//! kind = "disks"
//! [builder]                    # optional; or list [[disk]] entries
//! name = "two_disk"            # or "equilateral"
//! separation = 6.0             # two_disk
//! side = 12.0                  # equilateral
//! radius = 1.0
//!
//! [[disk]]
//! center = [0.0, 0.0]
//! radius = 1.0
//! ```
//!
//! ```toml
//! # kind = "cantor": a base-M digit Cantor set.
//! schema_version = 1
//! kind = "cantor"
//! base = 3
//! alphabet = [0, 2]
//! cap = 65536                  # optional set-size cap
//! ```

use crate::billiard::{BounceOrbit, DiskSystem};
use crate::fup::{CantorSpec, FupResult};
use crate::schottky::{GeodesicClass, Moebius, SchottkyGroup};
use crate::thermo::PressureMethod;
use crate::xfer::ZetaValue;
use crate::zeros::ResonanceSet;
use nalgebra::Vector2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
    #[error("model file is not valid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("model field `{field}`: {reason}")]
    Model { field: String, reason: String },
}

fn model_err(field: &str, reason: impl Into<String>) -> IoError {
    IoError::Model { field: field.into(), reason: reason.into() }
}

/// Writes `bytes` to `path` atomically: the content lands in a `.part`
/// sibling first and is renamed over the target, so the target either keeps
/// its old state or holds the complete new content.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp_name = path.as_os_str().to_os_string();
    tmp_name.push(".part");
    let tmp = PathBuf::from(tmp_name);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Geodesic table: one row per oriented primitive class.
pub fn geodesic_csv(group: &SchottkyGroup, classes: &[GeodesicClass]) -> String {
    let mut out = String::from("word,word_length,trace,ell_gamma\n");
    for c in classes {
        let word = c.word.render(|l| group.label(l));
        let _ = writeln!(out, "{word},{},{},{}", c.word.len(), f(c.trace), f(c.length));
    }
    out
}

/// One zeta evaluation at one point, for scan exports.
#[derive(Debug, Clone)]
pub struct ZetaScanRow {
    pub s: Complex64,
    pub zeta: ZetaValue,
}

/// Zeta scan table: value, method, truncation, and error estimate per point.
pub fn zeta_scan_csv(rows: &[ZetaScanRow]) -> String {
    let mut out = String::from("re_s,im_s,re_zeta,im_zeta,method,truncation,error_estimate\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            f(r.s.re),
            f(r.s.im),
            f(r.zeta.value.re),
            f(r.zeta.value.im),
            r.zeta.method,
            r.zeta.truncation,
            f(r.zeta.error_estimate)
        );
    }
    out
}

/// Billiard orbit table: one row per primitive periodic bounce orbit.
pub fn orbit_csv(system: &DiskSystem, orbits: &[BounceOrbit]) -> String {
    let mut out = String::from("word,n_bounces,length,log_Lambda,Ju\n");
    for o in orbits {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            system.render_word(&o.word),
            o.n_bounces(),
            f(o.period),
            f(o.log_j_u()),
            f(o.j_u)
        );
    }
    out
}

/// Surface resonance table in the s plane.
pub fn resonance_csv(set: &ResonanceSet) -> String {
    let mut out = String::from("re,im,multiplicity,residual,source,truncation\n");
    for z in &set.zeros {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            f(z.re),
            f(z.im),
            z.multiplicity,
            f(z.residual),
            set.source,
            set.truncation
        );
    }
    out
}

/// Billiard resonance table in the k plane.
pub fn billiard_resonance_csv(set: &ResonanceSet) -> String {
    let mut out = String::from("re_k,im_k,order\n");
    for z in &set.zeros {
        let _ = writeln!(out, "{},{},{}", f(z.re), f(z.im), z.multiplicity);
    }
    out
}

/// One pressure evaluation, for curve exports.
#[derive(Debug, Clone)]
pub struct PressureRow {
    pub beta: f64,
    pub pressure: f64,
    pub method: PressureMethod,
    pub max_word_length: usize,
}

/// Pressure curve table.
pub fn pressure_csv(rows: &[PressureRow]) -> String {
    let mut out = String::from("beta,pressure,method,max_word_length\n");
    for r in rows {
        let _ =
            writeln!(out, "{},{},{},{}", f(r.beta), f(r.pressure), r.method, r.max_word_length);
    }
    out
}

/// Uncertainty exponent table; the alphabet column joins digits with `;`.
pub fn fup_csv(spec: &CantorSpec, table: &[FupResult]) -> String {
    let alphabet = spec
        .alphabet()
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(";");
    let mut out = String::from("M,alphabet,k,N,set_size,norm,beta_k\n");
    for r in table {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            spec.base(),
            alphabet,
            r.k,
            r.n,
            r.set_size,
            f(r.norm),
            f(r.beta_k)
        );
    }
    out
}

/// Pretty JSON with a trailing newline; field order follows the struct.
pub fn json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// A parsed model description file.
#[derive(Debug, Clone)]
pub enum ModelFile {
    Schottky(SchottkyGroup),
    Disks(DiskSystem),
    Cantor(CantorSpec),
}

impl ModelFile {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelFile::Schottky(_) => "schottky",
            ModelFile::Disks(_) => "disks",
            ModelFile::Cantor(_) => "cantor",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    schema_version: u32,
    kind: String,
    builder: Option<RawBuilder>,
    generator: Option<Vec<RawGenerator>>,
    disk: Option<Vec<RawDisk>>,
    base: Option<usize>,
    alphabet: Option<Vec<usize>>,
    cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBuilder {
    name: String,
    ell: Option<f64>,
    x1: Option<f64>,
    x2: Option<f64>,
    separation: Option<f64>,
    side: Option<f64>,
    radius: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDisk {
    center: [f64; 2],
    radius: f64,
}

fn need<T>(value: Option<T>, field: &str) -> Result<T, IoError> {
    value.ok_or_else(|| model_err(field, "required for this model kind"))
}

/// Parses a model description (see the module docs for the schema).
pub fn parse_model(text: &str) -> Result<ModelFile, IoError> {
    let raw: RawModel = toml::from_str(text)?;
    if raw.schema_version != 1 {
        return Err(model_err(
            "schema_version",
            format!("unsupported version {}, expected 1", raw.schema_version),
        ));
    }
    match raw.kind.as_str() {
        "schottky" => parse_schottky(raw),
        "disks" => parse_disks(raw),
        "cantor" => parse_cantor(raw),
        other => Err(model_err("kind", format!("unknown kind `{other}`"))),
    }
}

fn parse_schottky(raw: RawModel) -> Result<ModelFile, IoError> {
    if let Some(b) = raw.builder {
        if raw.generator.is_some() {
            return Err(model_err("generator", "give a builder or generators, not both"));
        }
        let group = match b.name.as_str() {
            "cylinder" => SchottkyGroup::cylinder(need(b.ell, "builder.ell")?),
            "symmetric_funnels" => SchottkyGroup::symmetric_funnels(
                need(b.ell, "builder.ell")?,
                need(b.x1, "builder.x1")?,
                need(b.x2, "builder.x2")?,
            )
            .map_err(|e| model_err("builder", e.to_string()))?,
            other => {
                return Err(model_err("builder.name", format!("unknown builder `{other}`")))
            }
        };
        return Ok(ModelFile::Schottky(group));
    }
    let gens = need(raw.generator, "generator")?;
    if gens.is_empty() {
        return Err(model_err("generator", "at least one generator required"));
    }
    let mats: Vec<Moebius> =
        gens.iter().map(|g| Moebius::new(g.a, g.b, g.c, g.d)).collect();
    let group =
        SchottkyGroup::new(&mats).map_err(|e| model_err("generator", e.to_string()))?;
    Ok(ModelFile::Schottky(group))
}

fn parse_disks(raw: RawModel) -> Result<ModelFile, IoError> {
    if let Some(b) = raw.builder {
        if raw.disk.is_some() {
            return Err(model_err("disk", "give a builder or disks, not both"));
        }
        let radius = need(b.radius, "builder.radius")?;
        let system = match b.name.as_str() {
            "two_disk" => DiskSystem::two_disk(need(b.separation, "builder.separation")?, radius),
            "equilateral" => DiskSystem::equilateral(need(b.side, "builder.side")?, radius),
            other => {
                return Err(model_err("builder.name", format!("unknown builder `{other}`")))
            }
        }
        .map_err(|e| model_err("builder", e.to_string()))?;
        return Ok(ModelFile::Disks(system));
    }
    let disks = need(raw.disk, "disk")?;
    if disks.is_empty() {
        return Err(model_err("disk", "at least one disk required"));
    }
    let centers: Vec<Vector2<f64>> =
        disks.iter().map(|d| Vector2::new(d.center[0], d.center[1])).collect();
    let radii: Vec<f64> = disks.iter().map(|d| d.radius).collect();
    let system =
        DiskSystem::new(centers, radii).map_err(|e| model_err("disk", e.to_string()))?;
    Ok(ModelFile::Disks(system))
}

fn parse_cantor(raw: RawModel) -> Result<ModelFile, IoError> {
    let base = need(raw.base, "base")?;
    let alphabet = need(raw.alphabet, "alphabet")?;
    let mut spec = CantorSpec::new(base, &alphabet)
        .map_err(|e| model_err("alphabet", e.to_string()))?;
    if let Some(cap) = raw.cap {
        spec = spec.with_cap(cap);
    }
    Ok(ModelFile::Cantor(spec))
}

/// Reads and parses a model description file.
pub fn read_model(path: &Path) -> Result<ModelFile, IoError> {
    parse_model(&fs::read_to_string(path)?)
}

/// Cache file path for a content key inside a cache root.
fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.csv"))
}

/// Looks up a content-addressed cache entry. Any failure reads as a miss.
pub fn cache_get(dir: &Path, key: &str) -> Option<Vec<u8>> {
    fs::read(cache_path(dir, key)).ok()
}

/// Stores a content-addressed cache entry, best effort: the cache is an
/// accelerator, so failures are swallowed after creating the directory.
pub fn cache_put(dir: &Path, key: &str, bytes: &[u8]) {
    if fs::create_dir_all(dir).is_err() {
        return;
    }
    let _ = write_atomic(&cache_path(dir, key), bytes);
}
