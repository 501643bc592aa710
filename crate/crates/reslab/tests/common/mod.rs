//! Shared fixtures: the bundled model files, loaded through the public
//! parsing path so every integration test also exercises the shipped
//! configs.

use reslab::billiard::DiskSystem;
use reslab::io::{read_model, ModelFile};
use reslab::schottky::SchottkyGroup;
use std::path::PathBuf;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

pub fn funnel_group() -> SchottkyGroup {
    match read_model(&config_path("three_funnel_group.toml")).unwrap() {
        ModelFile::Schottky(g) => g,
        other => panic!("expected a schottky model, got {}", other.kind()),
    }
}

pub fn two_disk_system() -> DiskSystem {
    match read_model(&config_path("two_disk_system.toml")).unwrap() {
        ModelFile::Disks(s) => s,
        other => panic!("expected a disks model, got {}", other.kind()),
    }
}

pub fn thin_disk_system() -> DiskSystem {
    match read_model(&config_path("thin_three_disk_system.toml")).unwrap() {
        ModelFile::Disks(s) => s,
        other => panic!("expected a disks model, got {}", other.kind()),
    }
}
