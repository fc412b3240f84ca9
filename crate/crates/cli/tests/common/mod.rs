//! Fixture table and process helpers shared by the CLI test targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

pub fn dblcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dblcat")).args(args).current_dir(dir("fixtures")).output().expect("binary runs")
}

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

pub const CASES: &[Case] = &[
    Case { name: "laws_fincat", args: &["laws", "fincat_c3.json"], code: 0 },
    Case { name: "laws_morph", args: &["laws", "morph_linear3.json"], code: 0 },
    Case { name: "laws_morph_corrupt", args: &["laws", "morph_corrupt.json"], code: 1 },
    Case { name: "laws_iso", args: &["laws", "iso_c3.json"], code: 0 },
    Case { name: "laws_span_weak", args: &["laws", "span.json", "--weak"], code: 0 },
    Case { name: "laws_span_strict", args: &["laws", "span.json"], code: 1 },
    Case { name: "laws_monoidal", args: &["laws", "monoidal.json", "--weak", "--budget", "30"], code: 0 },
    Case { name: "laws_bimod", args: &["laws", "bimod.json", "--weak"], code: 0 },
    Case { name: "laws_cobord0", args: &["laws", "cobord0.json"], code: 0 },
    Case { name: "laws_cobord1", args: &["laws", "cobord1.json"], code: 0 },
    Case { name: "laws_cobord0_text", args: &["laws", "cobord0.json", "--text"], code: 0 },
    Case { name: "compose_copants_pants", args: &["compose", "cobord1.json", "--cells", "copants,pants"], code: 0 },
    Case { name: "compose_cup_cap", args: &["compose", "cobord1.json", "--cells", "cup,cap"], code: 0 },
    Case { name: "compose_mismatch", args: &["compose", "cobord1.json", "--cells", "cup,pants"], code: 1 },
    Case { name: "compose_unit", args: &["compose", "cobord1.json", "--cells", "pants,id"], code: 0 },
    Case { name: "compose_coev_ev", args: &["compose", "cobord0.json", "--cells", "coev,ev"], code: 0 },
    Case { name: "compose_span", args: &["compose", "span.json", "--cells", "f,g"], code: 0 },
    Case { name: "compose_span_unit", args: &["compose", "span.json", "--cells", "id,f"], code: 0 },
    Case { name: "compose_bimod", args: &["compose", "bimod.json", "--cells", "T,T/x"], code: 0 },
    Case { name: "compose_morph", args: &["compose", "morph_linear3.json", "--cells", "0<1,1<2"], code: 0 },
    Case { name: "tqft_theory1d", args: &["tqft", "theory1d.json", "cobord0.json", "--check-axioms"], code: 0 },
    Case { name: "tqft_frobenius", args: &["tqft", "frobenius_dual.json", "cobord1.json", "--check-axioms"], code: 0 },
    Case { name: "tqft_frobenius_text", args: &["tqft", "frobenius_dual.json", "cobord1.json", "--text"], code: 0 },
    Case { name: "action_pullback_check", args: &["action", "action_pullback.json", "check"], code: 0 },
    Case {
        name: "action_pullback_orbit",
        args: &["action", "action_pullback.json", "orbit", "--seed-object", "E"],
        code: 0,
    },
    Case { name: "action_pullback_charclass", args: &["action", "action_pullback.json", "charclass"], code: 0 },
    Case { name: "action_iso_check", args: &["action", "action_iso.json", "check"], code: 0 },
    Case { name: "action_iso_orbit", args: &["action", "action_iso.json", "orbit"], code: 0 },
    Case { name: "action_module_check", args: &["action", "action_module.json", "check"], code: 0 },
    Case { name: "action_module_orbit", args: &["action", "action_module.json", "orbit", "--budget", "300"], code: 1 },
];

/// Input errors: exit 2, nothing on stdout, a message on stderr.
pub const INPUT_ERRORS: &[&[&str]] = &[
    &["laws", "malformed.json"],
    &["laws", "bad_version.json"],
    &["laws", "missing.json"],
    &["compose", "cobord1.json", "--cells", "cup,nope"],
    &["tqft", "theory1d.json", "cobord1.json"],
    &["action", "action_module.json", "charclass"],
    &["action", "action_pullback.json", "orbit", "--seed-object", "nope"],
    &["action", "cobord0.json", "check"],
    &["laws", "theory1d.json"],
    &["frobnicate"],
];

pub fn run_case(case: &Case) -> Vec<u8> {
    let mut args = case.args.to_vec();
    args.push("--no-timestamp");
    let out = dblcat(&args);
    assert_eq!(out.status.code(), Some(case.code), "{}: stderr {}", case.name, String::from_utf8_lossy(&out.stderr));
    out.stdout
}

pub fn golden_path(case: &Case) -> PathBuf {
    let ext = if case.args.contains(&"--text") { "txt" } else { "json" };
    dir("golden").join(format!("{}.{ext}", case.name))
}
