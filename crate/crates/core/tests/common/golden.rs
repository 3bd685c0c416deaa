//! CLI golden cases. Expected transcripts live in `tests/golden/<name>.txt`;
//! run with `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;
use std::process::Command;

pub const CASES: &[(&str, &[&str])] = &[
    ("eval_z2_sum", &["eval", "Z2", "add(x1,x2)==c0", "x1,x2"]),
    ("eval_z2_reflexive", &["eval", "Z2", "x1==x1", "x1"]),
    ("eval_z3_halving", &["eval", "Z3", "E x2 . x1==add(x2,x2)", "x1"]),
    ("eval_universal", &["eval", "Z2", "A x1 . add(x1,x1)==c0"]),
    (
        "eval_substitution",
        &["eval", "Z2", "[y1:=x1, y2:=x2](y1 == y2) | x3 == x4", "x1,x2,x3,x4"],
    ),
    (
        "eval_structured",
        &["--structured", "eval", "Z2", "add(x1,x2)==c0", "x1,x2"],
    ),
    ("eval_syntax_error", &["eval", "Z2", "x1 == ", "x1"]),
    ("eval_outside_sort", &["eval", "Z2", "E x9 . x1 == x9", "x1"]),
    (
        "eval_space_limit",
        &["--max-space", "100", "eval", "Z3", "x1 == x2", "x1,x2,x3,x4,x5"],
    ),
    (
        "close_z3_singleton",
        &["close", "Z3", "--sort", "x1,x2", "--points", "(1,2)", "--depth", "2"],
    ),
    (
        "close_elementary",
        &["close", "Z3", "--sort", "x1,x2", "--points", "(0,0),(1,2),(2,1)"],
    ),
    ("close_empty", &["close", "Z3", "--sort", "x1,x2", "--points", ""]),
    (
        "close_formulas",
        &[
            "close",
            "Z2+c",
            "--sort",
            "x1",
            "--formulas",
            "x1 == c1",
            "--depth",
            "1",
        ],
    ),
    (
        "close_structured",
        &[
            "--structured",
            "close",
            "K4",
            "--sort",
            "x1",
            "--points",
            "(1)",
            "--depth",
            "1",
        ],
    ),
    ("types_z2", &["types", "Z2", "x1", "--depth", "1"]),
    ("types_sentences", &["types", "Z2+c", "-", "--depth", "1"]),
    (
        "types_mt",
        &["types", "Z2", "x1", "--depth", "1", "--mode", "mt", "--extra", "y1"],
    ),
    ("equiv_z4_k4", &["equiv", "Z4", "K4", "--samples", "20"]),
    (
        "equiv_z3_relabeled",
        &[
            "equiv",
            "Z3",
            "Z3r",
            "--sort",
            "x1,x2",
            "--samples",
            "50",
            "--seed",
            "7",
        ],
    ),
    ("equiv_self", &["equiv", "K4", "K4", "--depth", "1"]),
    ("orbits_z3", &["orbits", "Z3", "x1,x2"]),
    ("orbits_z2", &["orbits", "Z2", "x1,x2"]),
    ("orbits_k4_constants", &["orbits", "K4+c", "x1"]),
    ("orbits_structured", &["--structured", "orbits", "K4", "x1"]),
    ("load_s3_orbits", &["--load", "@data/s3.toml", "orbits", "S3", "x1"]),
    (
        "load_c3_eval",
        &["--load", "@data/c3.toml", "eval", "C3", "meet(x1,x2) == bot", "x1,x2"],
    ),
    ("show_z3r", &["show", "Z3r"]),
    ("unknown_algebra", &["orbits", "Q8", "x1"]),
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Runs the binary; `@path` arguments are resolved against the crate root.
pub fn transcript(args: &[&str]) -> String {
    let root = manifest_dir();
    let args: Vec<String> = args
        .iter()
        .map(|a| match a.strip_prefix('@') {
            Some(rel) => root.join(rel).to_string_lossy().into_owned(),
            None => a.to_string(),
        })
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_lgeom"))
        .args(&args)
        .output()
        .expect("binary runs");
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{name}.txt"))
}

/// Compares against the stored transcript (or rewrites it).
pub fn check(name: &str, got: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, got).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want == got {
        Ok(())
    } else {
        Err(format!(
            "{name}: transcript differs from {}\n--- got\n{got}",
            path.display()
        ))
    }
}
