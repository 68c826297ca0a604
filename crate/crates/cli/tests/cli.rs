use std::fs;
use std::path::PathBuf;
use std::process::Command;

use kbgeo_cli::{load_model, parse_model, print_model, run_command, ModelFileError, Outcome, RunConfig};
use kbgeo_core::fixtures;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Outcome {
    let mut argv = vec!["kbgeo".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run_command(&argv, &RunConfig::default())
}

#[test]
fn fixture_files_match_the_built_in_models() {
    for (file, model) in [
        ("m_eq.kbm", fixtures::m_eq()),
        ("m_p.kbm", fixtures::m_p()),
        ("m_p0.kbm", fixtures::m_p0()),
        ("m_pq1.kbm", fixtures::m_pq1()),
        ("m_pq2.kbm", fixtures::m_pq2()),
        ("m_neg.kbm", fixtures::m_neg()),
    ] {
        assert_eq!(load_model(fixture(file)).unwrap(), model, "{file}");
    }
    let rel = load_model(fixture("m_p_relabeled.kbm")).unwrap();
    assert_eq!(rel.carrier(), ["a", "b"]);
    assert!(rel.holds(0, &[rel.element("a").unwrap()]));
}

#[test]
fn every_fixture_round_trips() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures"].iter().collect();
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "kbm") {
            let m = load_model(&path).unwrap();
            let printed = print_model(&m);
            assert_eq!(parse_model(&printed).unwrap(), m, "{}", path.display());
            assert_eq!(print_model(&parse_model(&printed).unwrap()), printed);
            seen += 1;
        }
    }
    assert!(seen >= 7);
}

#[test]
fn model_file_errors() {
    let missing_row = "signature\n  op neg 1\ncarrier: 0 1\nop neg: 0 -> 1\n";
    assert_eq!(
        parse_model(missing_row).unwrap_err().to_string(),
        "invalid model: op neg not total"
    );

    let outside = "signature\n  rel P 1\ncarrier: 0 1\nrel P: 2\n";
    match parse_model(outside).unwrap_err() {
        ModelFileError::Parse { line, msg } => {
            assert_eq!(line, 4);
            assert!(msg.contains("`2` is not a carrier element"), "{msg}");
        }
        e => panic!("{e}"),
    }

    let duplicate = "signature\n  rel P 1\n  op P 1\ncarrier: 0\nop P: 0 -> 0\n";
    assert!(parse_model(duplicate)
        .unwrap_err()
        .to_string()
        .contains("duplicate symbol `P`"));

    let garbage = "signature\n  rel P 1\ncarrier: 0 1\nfrobnicate\n";
    assert_eq!(
        parse_model(garbage).unwrap_err().to_string(),
        "line 4: unrecognized line `frobnicate`"
    );

    let bad_arity = "signature\n  rel P x\ncarrier: 0\n";
    assert!(matches!(
        parse_model(bad_arity),
        Err(ModelFileError::Parse { line: 2, .. })
    ));

    let no_carrier = "signature\n  rel P 1\n";
    assert!(parse_model(no_carrier).unwrap_err().to_string().contains("carrier"));

    let constant = "signature\n  op c 0\ncarrier: 0 1\nop c: -> 1\nflag with_equality off\n";
    let m = parse_model(constant).unwrap();
    assert_eq!(m.apply_op(0, &[]), 1);
    assert!(!m.signature().with_equality());
    assert!(print_model(&m).contains("op c: -> 1\n"));

    assert!(matches!(
        load_model("/nonexistent/model.kbm"),
        Err(ModelFileError::Io { .. })
    ));
}

#[test]
fn eval_example() {
    let o = run(&[
        "eval",
        &fixture("m_p.kbm"),
        "--vars",
        "x,y",
        "--formula",
        "P(x) & !P(y)",
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "{(1,0)}\n");
    let o = run(&[
        "eval",
        &fixture("m_p_relabeled.kbm"),
        "--vars",
        "x",
        "--formula",
        "P(x)",
    ]);
    assert_eq!(o.stdout, "{(a)}\n");
}

#[test]
fn equality_can_be_switched_off() {
    let o = run(&[
        "--no-equality",
        "eval",
        &fixture("m_p.kbm"),
        "--vars",
        "x,y",
        "--formula",
        "x = y",
    ]);
    assert_eq!(o.code, 4);
    assert!(o.stderr.contains("equality is disabled"));
}

#[test]
fn closure_and_lattice() {
    let o = run(&["closure", &fixture("m_neg.kbm"), "--vars", "x,y", "--points", "{(1,0)}"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("closure: {(1,0)}\nwitness: "));
    let o = run(&["closure", &fixture("m_eq.kbm"), "--vars", "x,y", "--points", "{(1,0)}"]);
    assert!(o.stdout.starts_with("closure: {(0,1),(1,0)}\n"));

    let o = run(&["lattice", &fixture("m_eq.kbm"), "--vars", "x,y"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("atoms: 2\nmembers: 4\n"));
    assert!(o.stdout.contains("member 3: 0xf 4 {(0,0),(0,1),(1,0),(1,1)} : true\n"));
}

#[test]
fn duality_and_functor() {
    let o = run(&["duality", &fixture("m_p.kbm"), "--max-vars", "2"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("sizes: 4 16\n"));
    let o = run(&["functor", &fixture("m_neg.kbm"), "--max-vars", "2", "--depth", "2"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.ends_with("result: PASS\n"));
}

#[test]
fn equivalence_examples() {
    let o = run(&[
        "equiv",
        &fixture("m_pq1.kbm"),
        &fixture("m_pq2.kbm"),
        "--mode",
        "info",
        "--max-vars",
        "2",
    ]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("phi: swap P Q"));

    let o = run(&[
        "equiv",
        &fixture("m_p.kbm"),
        &fixture("m_p0.kbm"),
        "--mode",
        "info",
        "--max-vars",
        "1",
    ]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("lattice size 4 vs 2 at X={x1}"));

    let o = run(&["equiv", &fixture("m_pq1.kbm"), &fixture("m_pq2.kbm"), "--mode", "iso"]);
    assert_eq!(o.code, 1);
    let o = run(&[
        "equiv",
        &fixture("m_p.kbm"),
        &fixture("m_p_relabeled.kbm"),
        "--mode",
        "iso",
    ]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("model map: 0->b,1->a"));

    let o = run(&[
        "equiv",
        &fixture("m_pq1.kbm"),
        &fixture("m_pq2.kbm"),
        "--mode",
        "lae",
        "--phi",
        "swaprel P Q",
        "--max-vars",
        "2",
        "--depth",
        "1",
    ]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("alpha: coherent"));
}

#[test]
fn machine_format_is_flat_and_deterministic() {
    let args = [
        "--format",
        "machine",
        "equiv",
        &fixture("m_pq1.kbm"),
        &fixture("m_pq2.kbm"),
        "--max-vars",
        "2",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    assert!(v.as_object().unwrap().values().all(|x| !x.is_object() && !x.is_array()));
    assert_eq!(v["verdict"], "EQUIVALENT_WITNESSED");
    assert_eq!(v["witness.phi"], "swap P Q");
    assert_eq!(v["bounds.n_max"], 2);
    assert_eq!(v["bounds.depth"], 2);
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(run(&["frobnicate"]).code, 3);
    assert_eq!(run(&["eval", &fixture("m_p.kbm")]).code, 3);
    assert_eq!(run(&["equiv", "a", "b", "--mode", "nope"]).code, 3);
    let o = run(&[
        "equiv",
        &fixture("m_p.kbm"),
        &fixture("m_p.kbm"),
        "--mode",
        "lae",
        "--phi",
        "rotate",
    ]);
    assert_eq!(o.code, 3);
    let o = run(&[
        "equiv",
        &fixture("m_p.kbm"),
        &fixture("m_p.kbm"),
        "--mode",
        "info",
        "--phi",
        "identity",
    ]);
    assert_eq!(o.code, 3);
    assert_eq!(run(&["duality", &fixture("m_p.kbm"), "--max-vars", "0"]).code, 3);
    let o = run(&["eval", "/nonexistent.kbm", "--vars", "x", "--formula", "true"]);
    assert_eq!(o.code, 4);
    let o = run(&["eval", &fixture("m_p.kbm"), "--vars", "x", "--formula", "P(y)"]);
    assert_eq!(o.code, 4);
    let o = run(&["equiv", &fixture("m_p.kbm"), &fixture("m_neg.kbm")]);
    assert_eq!(o.code, 4);
    assert!(o.stderr.contains("signature mismatch"));
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn binary_exit_codes_and_point_bound() {
    let bin = env!("CARGO_BIN_EXE_kbgeo");
    let out = Command::new(bin)
        .args([
            "eval",
            &fixture("m_p.kbm"),
            "--vars",
            "x,y",
            "--formula",
            "P(x) & !P(y)",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{(1,0)}\n");

    let out = Command::new(bin)
        .args(["eval", &fixture("m_p.kbm"), "--vars", "x,y,z", "--formula", "true"])
        .env("KBGEO_MAX_POINTS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8(out.stderr).unwrap().contains("bound exceeded"));

    let out = Command::new(bin)
        .args(["duality", &fixture("m_p.kbm")])
        .env("KBGEO_MAX_POINTS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let out = Command::new(bin)
        .args(["equiv", &fixture("m_p.kbm"), &fixture("m_p0.kbm"), "--max-vars", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
