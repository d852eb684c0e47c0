#![allow(dead_code)]

use std::collections::BTreeMap;
use std::ffi::OsStr;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_multitarget")).args(args).output().expect("spawn multitarget")
}

/// Runs the binary and panics with its stderr unless it exits successfully.
pub fn ok<I, S>(args: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<OsStr>,
{
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// File name → contents for every regular file directly under `dir`.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// A small population written by `generate`.
pub fn generate_small(dir: &Path, extra: &[&str]) {
    let mut args = vec![
        "generate",
        "--out",
        p(dir),
        "--dimension",
        "12",
        "--blacklist",
        "25",
        "--train-background",
        "30",
        "--train-background-utts",
        "150",
        "--dev-background",
        "30",
        "--test-background",
        "80",
    ];
    args.extend_from_slice(extra);
    ok(args);
}
