mod common;

use common::{csv, field, mcover, num, ok, schema, scratch, stderr, stdout, validate};
use minkowski_cover::{covering_constant_al, BallParameter, CoveringOptions, Error};
use minkowski_cover_cli::{exit_code, run, EXIT_DOMAIN, EXIT_SOLVER};
use serde_json::Value;

#[test]
fn headline_values() {
    assert!(ok(&["gamma", "--p", "2"])
        .lines()
        .nth(1)
        .unwrap()
        .contains(",2.59807621135,"));
    let p0 = num(&ok(&["davis"]), "p0");
    assert!(p0 > 2.57 && p0 < 2.58);
    assert_eq!(field(&ok(&["tau", "--p", "3", "--digits", "5"]), "tau_p"), "0.20406");
    assert_eq!(num(&ok(&["volume", "--p", "inf"]), "volume"), 4.0);
    assert_eq!(num(&ok(&["volume", "--p", "1"]), "volume"), 2.0);
    assert_eq!(field(&ok(&["gamma", "--p", "1"]), "sigma_star"), "");
    assert_eq!(field(&ok(&["critdet", "--p", "3"]), "active_branch"), "BRANCH_1");
    assert_eq!(field(&ok(&["critdet", "--p", "2.3"]), "active_branch"), "BRANCH_0");
    let a = ok(&["area", "--p", "3", "--alpha", "2", "--tau", "0.12"]);
    assert!((num(&a, "area") - 2.928_149_517_254_447).abs() < 1e-10);
    assert!((num(&a, "middle_residual") - 0.0995).abs() < 1e-4);
    assert!(
        (num(
            &ok(&["fit-alpha", "--p", "3", "--sigma", "1.3830875542684886"]),
            "alpha"
        ) - 2.0)
            .abs()
            < 1e-12
    );
}

#[test]
fn exit_codes() {
    for (args, code) in [
        (vec!["tau", "--p", "0.5"], 2),
        (vec!["tau", "--p", "inf"], 2),
        (vec!["sigma", "--p", "3", "--alpha", "0.5"], 2),
        (vec!["area", "--p", "3", "--sigma", "1.2", "--tau", "1.5"], 2),
        (vec!["area", "--p", "3", "--sigma", "5"], 2),
        (vec!["fit-alpha", "--p", "2"], 2),
        (vec!["scan", "--p-min", "3", "--p-max", "2", "--steps", "4"], 2),
        (vec!["verify", "--basis", "1,1,2,2", "--p", "2"], 2),
        (vec!["gamma", "--p", "abc"], 2),
        (vec!["frobnicate"], 64),
        (vec!["tau", "--q", "3"], 64),
        (vec!["tau"], 64),
        (vec!["davis", "--format", "xml"], 64),
        (vec!["area", "--p", "3", "--sigma", "1.2", "--alpha", "2"], 64),
        (vec!["verify", "--basis", "1,2,3", "--p", "2"], 64),
        (vec![], 64),
        (vec!["--help"], 0),
        (vec!["--version"], 0),
    ] {
        let out = mcover(&args);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", stderr(&out));
        if code != 0 {
            assert!(stdout(&out).is_empty(), "{args:?} wrote to stdout");
            assert!(!stderr(&out).is_empty());
        }
    }
    assert_eq!(exit_code(&Error::NonConvergence { iterations: 5 }), EXIT_SOLVER);
    assert_eq!(
        exit_code(&Error::NoSignChange {
            lo: 0.0,
            hi: 1.0,
            f_lo: 1.0,
            f_hi: 1.0
        }),
        EXIT_SOLVER
    );
    assert_eq!(exit_code(&Error::Domain("x".into())), EXIT_DOMAIN);
}

#[test]
fn in_process_run_matches_binary() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(["mcover", "sigma", "--p", "3", "--alpha", "2"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(
        String::from_utf8(out).unwrap(),
        ok(&["sigma", "--p", "3", "--alpha", "2"])
    );
}

#[test]
fn scan_csv_round_trips() {
    let text = ok(&["scan", "--p-min", "1.5", "--p-max", "4", "--steps", "4"]);
    let (header, rows) = csv(&text);
    assert_eq!(header.join(","), "p,sigma_star,tau_star,gamma_al,density_al,alpha_fit");
    assert_eq!(rows.len(), 4);
    let opts = CoveringOptions::default();
    let mut last = 1.0;
    for row in &rows {
        let p: f64 = row[0].parse().unwrap();
        assert!(p > last);
        last = p;
        let al = covering_constant_al(BallParameter::finite(p).unwrap(), &opts).unwrap();
        let gamma: f64 = row[3].parse().unwrap();
        assert_eq!(gamma.to_bits(), al.gamma_al.to_bits(), "gamma at p = {p}");
        let sigma: f64 = row[1].parse().unwrap();
        assert_eq!(sigma.to_bits(), al.sigma_star.unwrap().to_bits());
    }

    let with_general = ok(&["scan", "--p-min", "1.5", "--p-max", "3", "--steps", "2", "--general"]);
    assert!(
        with_general.starts_with("p,sigma_star,tau_star,gamma_al,density_al,alpha_fit,gamma_general,density_general\n")
    );
}

#[test]
fn scan_reports_undefined_alpha_as_blank() {
    let (_, rows) = csv(&ok(&["scan", "--p-min", "2", "--p-max", "2.3", "--steps", "2"]));
    assert_eq!(rows[0][0], "2");
    assert_eq!(rows[0][5], "");
    assert_eq!(rows[1][5], "");
}

#[test]
fn scan_verdicts_go_to_stderr_in_csv_mode() {
    let out = mcover(&["scan", "--p-min", "1.2", "--p-max", "4", "--steps", "6"]);
    let err = stderr(&out);
    for needle in [
        "gamma_al on (1,2]",
        "gamma_al on [2,inf)",
        "density_al on (1,2]",
        "density_al on [2,inf)",
    ] {
        assert!(err.contains(needle), "{err}");
    }
    assert!(err.lines().all(|l| l.starts_with("evidence: ")));
    assert!(!stdout(&out).contains("evidence"));
}

#[test]
fn json_outputs_validate_against_schema() {
    let schema = schema();
    for args in [
        vec!["volume", "--p", "3"],
        vec!["volume", "--p", "inf"],
        vec!["tau", "--p", "3"],
        vec!["sigma", "--p", "3", "--alpha", "2"],
        vec!["critdet", "--p", "2.5"],
        vec!["davis"],
        vec!["area", "--p", "3", "--sigma", "1.5"],
        vec!["area", "--p", "3", "--alpha", "2", "--tau", "0.12"],
        vec!["gamma", "--p", "2"],
        vec!["gamma", "--p", "1"],
        vec!["gamma", "--p", "3", "--general"],
        vec!["density", "--p", "inf"],
        vec!["bounds", "--p", "3"],
        vec!["scan", "--p-min", "1.5", "--p-max", "3", "--steps", "3"],
        vec!["scan", "--p-min", "1.5", "--p-max", "3", "--steps", "2", "--general"],
        vec!["verify", "--basis", "1,1,2,0", "--p", "1", "--samples", "500"],
        vec!["reproduce-p3"],
        vec!["fit-alpha", "--p", "4"],
    ] {
        let mut full = args.clone();
        full.extend(["--format", "json"]);
        let value: Value = serde_json::from_str(&ok(&full)).unwrap();
        validate(&value, &schema).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn schema_rejects_malformed_output() {
    let schema = schema();
    let good: Value = serde_json::from_str(&ok(&["tau", "--p", "3", "--format", "json"])).unwrap();
    let mut extra = good.clone();
    extra["surprise"] = Value::from(1);
    assert!(validate(&extra, &schema).is_err());
    let mut missing = good.clone();
    missing.as_object_mut().unwrap().remove("tau_p");
    assert!(validate(&missing, &schema).is_err());
    let mut wrong = good;
    wrong["command"] = Value::from("davis");
    assert!(validate(&wrong, &schema).is_err());
}

#[test]
fn reproduce_p3_json_marks_each_comparison() {
    let v: Value = serde_json::from_str(&ok(&["reproduce-p3", "--format", "json"])).unwrap();
    let comps = v["comparisons"].as_array().unwrap();
    let status = |q: &str| {
        comps.iter().find(|c| c["quantity"] == q).unwrap()["status"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(status("volume"), "MATCH");
    assert_eq!(status("tau_3"), "MATCH");
    assert_eq!(status("gamma_h"), "DISCREPANT");
    assert_eq!(status("density"), "DISCREPANT");
    assert!(comps.iter().all(|c| c["difference"].is_number()));
    assert_eq!(v["reference_gamma_attainable"], Value::Bool(false));
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        vec!["gamma", "--p", "3", "--general"],
        vec!["bounds", "--p", "2.5725"],
        vec!["scan", "--p-min", "1.2", "--p-max", "4", "--steps", "5"],
        vec!["area", "--p", "3", "--sigma", "1.5"],
        vec![
            "verify",
            "--basis",
            "1.2,0.1,0.3,1.4",
            "--p",
            "2.5",
            "--samples",
            "2000",
            "--seed",
            "9",
        ],
        vec!["reproduce-p3"],
    ] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = scratch(&format!("{}-{run}.svg", args.join("_").replace(['-', '.', ','], "")));
            let mut full = args.clone();
            let p = path.to_str().unwrap().to_string();
            full.extend(["--svg", &p]);
            let text = ok(&full);
            let svg = std::fs::read_to_string(&path).unwrap();
            assert!(svg.starts_with("<?xml") && svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
            outputs.push((text, svg));
        }
        assert_eq!(outputs[0], outputs[1], "{args:?}");
    }
}

#[test]
fn svg_for_command_without_figure_is_reported() {
    let path = scratch("tau.svg");
    let _ = std::fs::remove_file(&path);
    let out = mcover(&["tau", "--p", "3", "--svg", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("no figure"));
    assert!(!path.exists());
}

#[test]
fn unwritable_svg_path_fails() {
    let out = mcover(&["gamma", "--p", "3", "--svg", "/nonexistent-dir/x.svg"]);
    assert_eq!(out.status.code(), Some(74));
}

#[test]
fn seed_changes_sampling_but_not_verdict() {
    let a = ok(&[
        "verify",
        "--basis",
        "1,1,2,0",
        "--p",
        "1",
        "--samples",
        "1000",
        "--seed",
        "1",
    ]);
    let b = ok(&[
        "verify",
        "--basis",
        "1,1,2,0",
        "--p",
        "1",
        "--samples",
        "1000",
        "--seed",
        "2",
    ]);
    assert_ne!(field(&a, "worst_x"), field(&b, "worst_x"));
    assert_eq!(field(&a, "covers"), "true");
    assert_eq!(field(&b, "covers"), "true");
}

#[test]
fn grid_and_tol_flags_are_applied() {
    let coarse = num(
        &ok(&["gamma", "--p", "2.5725", "--grid", "4", "--digits", "17"]),
        "gamma_al",
    );
    let fine = num(
        &ok(&["gamma", "--p", "2.5725", "--grid", "256", "--digits", "17"]),
        "gamma_al",
    );
    assert!((coarse - fine).abs() < 1e-6);
    let loose = num(&ok(&["davis", "--tol", "1e-3", "--digits", "17"]), "p0");
    assert!((loose - 2.5725).abs() < 2e-3);
    assert_eq!(mcover(&["davis", "--tol=-1"]).status.code(), Some(2));
    assert_eq!(mcover(&["davis", "--grid", "1"]).status.code(), Some(64));
}
