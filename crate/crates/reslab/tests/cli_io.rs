//! End-to-end checks of the installed binary: exit codes, output overrides,
//! cache directory behaviour, and manifest integrity.

mod common;

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reslab"))
}

fn write_fup_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("fup.toml");
    std::fs::write(
        &path,
        "schema_version = 1\nkind = \"fup\"\noutput_dir = \"out\"\n\
         [model]\ncantor = { base = 3, alphabet = [0, 2] }\n\
         [params]\nk_min = 1\nk_max = 5\n",
    )
    .unwrap();
    path
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = bin().arg(flag).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{flag}");
    }
    let out = bin().args(["fup", "--help"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_and_config_errors_exit_two() {
    // Unknown flag: usage error.
    let out = bin().args(["fup", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Missing config file: configuration error.
    let out = bin().args(["fup", "--config", "/nonexistent/job.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Config kind disagrees with the subcommand.
    let dir = tempfile::tempdir().unwrap();
    let config = write_fup_config(dir.path());
    let out = bin()
        .args(["pressure", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("fup"), "stderr should name the mismatched kind: {msg}");
}

#[test]
fn numerical_failures_exit_three() {
    // A weyl-fit job whose windows contain no zeros cannot be fitted.
    let dir = tempfile::tempdir().unwrap();
    let model_src = common::config_path("two_disk_system.toml");
    let model_dst = dir.path().join("model.toml");
    std::fs::copy(model_src, &model_dst).unwrap();
    let config = dir.path().join("job.toml");
    std::fs::write(
        &config,
        "schema_version = 1\nkind = \"weyl-fit\"\noutput_dir = \"out\"\n\
         [model]\npath = \"model.toml\"\n\
         [params]\nmax_word_length = 2\nm_max = 8\n\
         rectangle = { re_lo = 0.5, re_hi = 2.0, im_lo = -0.5, im_hi = -0.05 }\n\
         strip_depth = 0.5\nwindow_width = 1.0\nwindow_centers = [10.0, 12.0, 14.0, 16.0]\n",
    )
    .unwrap();
    let out = bin()
        .args(["weyl-fit", "--config"])
        .arg(&config)
        .args(["--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn out_flag_overrides_the_configured_directory() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_fup_config(dir.path());
    let override_dir = dir.path().join("elsewhere");
    let out = bin()
        .args(["fup", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&override_dir)
        .args(["--threads", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(override_dir.join("manifest.json").is_file());
    assert!(override_dir.join("fup.csv").is_file());
    // The configured relative directory must not have been created.
    assert!(!dir.path().join("out").exists());
}

#[test]
fn cache_dir_is_populated_and_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let model_src = common::config_path("two_disk_system.toml");
    std::fs::copy(model_src, dir.path().join("model.toml")).unwrap();
    let config = dir.path().join("job.toml");
    std::fs::write(
        &config,
        "schema_version = 1\nkind = \"orbits\"\noutput_dir = \"out\"\n\
         [model]\npath = \"model.toml\"\n\
         [params]\nmax_word_length = 4\n",
    )
    .unwrap();

    let run = |out_dir: &Path| {
        let out = bin()
            .args(["orbits", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(out_dir)
            .env("RESLAB_CACHE_DIR", &cache)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    };
    let out1 = dir.path().join("run1");
    let out2 = dir.path().join("run2");
    run(&out1);
    assert!(
        std::fs::read_dir(&cache).unwrap().count() > 0,
        "first run must populate the cache directory"
    );
    run(&out2);
    let a = std::fs::read(out1.join("orbits.csv")).unwrap();
    let b = std::fs::read(out2.join("orbits.csv")).unwrap();
    assert_eq!(a, b, "cached rerun must reproduce the table byte-for-byte");
}

#[test]
fn manifest_lists_every_artifact_with_correct_checksums() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_fup_config(dir.path());
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["fup", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["schema_version"], 1);
    assert_eq!(manifest["job_kind"], "fup");
    assert!(manifest["created_unix_epoch_seconds"].as_u64().unwrap() > 1_600_000_000);
    let config_bytes = std::fs::read(&config).unwrap();
    assert_eq!(
        manifest["config_sha256"].as_str().unwrap(),
        reslab::io::sha256_hex(&config_bytes)
    );

    let files = manifest["files"].as_object().unwrap();
    for entry in std::fs::read_dir(&out_dir).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name().into_string().unwrap();
        if name == "manifest.json" {
            continue;
        }
        let digest = reslab::io::sha256_hex(&std::fs::read(entry.path()).unwrap());
        assert_eq!(
            files[&name].as_str().unwrap(),
            digest,
            "{name} checksum mismatch"
        );
    }
    assert_eq!(files.len(), 2, "fup job emits exactly fup.csv and fup.json");
}
