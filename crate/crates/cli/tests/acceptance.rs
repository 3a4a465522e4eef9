//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{mcover, num, ok, stderr, stdout};
use minkowski_cover::{
    al_hexagon, ball_volume, covering_constant_al, covering_density, delta_branch0, delta_branch1, gamma_h_general,
    i_min_area, inscribed_area, is_covering, multiplicity_estimate, sigma_p, tau_inscribed, tau_p, BallParameter,
    CoveringOptions, Lattice2, Point2,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const P_GRID: [f64; 8] = [1.2, 1.5, 2.0, 2.3, 2.5725, 3.0, 4.0, 8.0];

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sqrt3() -> f64 {
    3f64.sqrt()
}

fn finite(p: f64) -> BallParameter {
    BallParameter::finite(p).unwrap()
}

fn davis_parameter() -> Check {
    let out = ok(&["tau", "--p", "3", "--digits", "17"]);
    let (tau, residual) = (num(&out, "tau_p"), num(&out, "residual"));
    ensure((tau - 0.20406).abs() <= 5e-5, || format!("tau_3 = {tau}"))?;
    ensure(residual.abs() <= 1e-12, || format!("residual {residual:e}"))?;
    let direct = 2.0 * (1.0 - tau).powi(3) - 1.0 - tau.powi(3);
    ensure(direct.abs() <= 1e-12, || format!("recomputed residual {direct:e}"))?;
    Ok(format!("tau_3 = {tau:.12}, residual {residual:.1e}"))
}

fn davis_constant() -> Check {
    let p0 = num(&ok(&["davis", "--digits", "17"]), "p0");
    ensure(p0 > 2.57 && p0 < 2.58, || format!("p0 = {p0} outside (2.57, 2.58)"))?;
    ensure((p0 - 2.5725).abs() <= 5e-4, || format!("p0 = {p0}"))?;
    Ok(format!("p0 = {p0:.12}"))
}

fn branch_values() -> Check {
    let d1 = 3.0 * delta_branch1(3.0).unwrap();
    let d0 = 3.0 * delta_branch0(3.0).unwrap();
    ensure((d1 - 2.859).abs() <= 2e-3, || format!("3 delta(3,1) = {d1}"))?;
    ensure((d0 - 2.870).abs() <= 2e-3, || format!("(3/2) sigma_3 = {d0}"))?;
    let half = sqrt3() / 2.0;
    let (b1, b0) = (delta_branch1(2.0).unwrap(), delta_branch0(2.0).unwrap());
    ensure((b1 - half).abs() <= 1e-10 && (b0 - half).abs() <= 1e-10, || {
        format!("p = 2 branches {b1}, {b0}")
    })?;
    Ok(format!(
        "3 delta(3,1) = {d1:.6}, (3/2) sigma_3 = {d0:.6}, p = 2 gap {:.1e}",
        (b1 - b0).abs()
    ))
}

fn circle_covering() -> Check {
    let p = finite(2.0);
    let gamma = covering_constant_al(p, &CoveringOptions::default()).unwrap().gamma_al;
    let exact = 1.5 * sqrt3();
    ensure((gamma - exact).abs() <= 1e-8, || format!("gamma(2) = {gamma}"))?;
    let density = covering_density(p, gamma).unwrap();
    let disc = 2.0 * PI / (3.0 * sqrt3());
    ensure((density - disc).abs() <= 1e-6, || format!("density {density}"))?;
    // the quoted "1,19" carries two decimals; 2 pi / 3 sqrt 3 = 1.2092
    ensure((density - 1.19).abs() <= 0.02, || format!("density {density} vs 1.19"))?;
    let lat = Lattice2::new(Point2::new(sqrt3(), 0.0), Point2::new(sqrt3() / 2.0, 1.5)).unwrap();
    ensure((lat.determinant() - exact).abs() <= 1e-12, || {
        format!("det {}", lat.determinant())
    })?;
    Ok(format!("gamma = {gamma:.12}, density = {density:.10}"))
}

fn limiting_quadrangles() -> Check {
    let opts = CoveringOptions::default();
    let one = covering_constant_al(BallParameter::LimitOne, &opts).unwrap().gamma_al;
    let inf = covering_constant_al(BallParameter::LimitInfinity, &opts)
        .unwrap()
        .gamma_al;
    ensure(one == 2.0 && inf == 4.0, || format!("gamma = {one}, {inf}"))?;
    let mut detail = format!("gamma = {one}, {inf}");
    for (p, a1, a2) in [
        (BallParameter::LimitOne, Point2::new(1.0, 1.0), Point2::new(2.0, 0.0)),
        (
            BallParameter::LimitInfinity,
            Point2::new(2.0, 2.0),
            Point2::new(0.0, 2.0),
        ),
    ] {
        let lat = Lattice2::new(a1, a2).unwrap();
        let cover = is_covering(&lat, p, 100_000, 0).unwrap();
        ensure(cover.covered_fraction == 1.0, || {
            format!("D_{p}: covered {}", cover.covered_fraction)
        })?;
        let m = multiplicity_estimate(&lat, p, 100_000, 0).unwrap();
        ensure((m - 1.0).abs() <= 0.01, || format!("D_{p}: multiplicity {m}"))?;
        detail += &format!(", D_{p} multiplicity {m:.4}");
    }
    Ok(detail)
}

fn imin_bound() -> Check {
    let opts = CoveringOptions::default();
    let mut worst = f64::INFINITY;
    for p in P_GRID {
        let gamma = covering_constant_al(finite(p), &opts).unwrap().gamma_al;
        let imin = i_min_area(p).unwrap();
        ensure(gamma >= imin - 1e-9, || {
            format!("p = {p}: gamma {gamma} < i-min {imin}")
        })?;
        worst = worst.min(gamma - imin);
    }
    Ok(format!("min gamma - i-min over grid = {worst:.3e}"))
}

fn tiling_property() -> Check {
    let opts = CoveringOptions::default();
    let mut worst_rel = 0f64;
    for p in P_GRID {
        let bp = finite(p);
        let al = covering_constant_al(bp, &opts).unwrap();
        let lat = al.hexagon.covering_lattice().unwrap();
        let cover = is_covering(&lat, bp, 10_000, 0).unwrap();
        ensure(cover.covered_fraction == 1.0, || {
            format!(
                "p = {p}: covered {} (gap {:e})",
                cover.covered_fraction, cover.worst_gap
            )
        })?;
        let m = multiplicity_estimate(&lat, bp, 100_000, 0).unwrap();
        let want = ball_volume(bp) / al.gamma_al;
        let rel = (m - want).abs() / want;
        ensure(rel <= 0.02, || format!("p = {p}: multiplicity {m} vs {want}"))?;
        worst_rel = worst_rel.max(rel);
    }
    Ok(format!(
        "all covered; worst multiplicity error {:.3}%",
        100.0 * worst_rel
    ))
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_area, mut worst_det) = (0f64, 0f64);
    for _ in 0..1000 {
        let p = rng.random_range(1.05..12.0);
        let sigma = rng.random_range(1.0..=sigma_p(p).unwrap());
        let tau = if rng.random_bool(0.5) {
            tau_inscribed(p, sigma).unwrap()
        } else {
            rng.random_range(0.0..tau_p(p).unwrap())
        };
        let h = al_hexagon(p, tau, sigma).unwrap();
        let [w1, _, w3] = h.vertices();
        let (x1, y1, x2, y2) = (w1.x, w1.y, -w3.x, w3.y);
        let closed = 3.0 * (x1 * y2 + x2 * y1);
        let shoelace = h.shoelace_area();
        let det = h.covering_lattice().unwrap().determinant();
        worst_area = worst_area.max((closed - shoelace).abs() / shoelace);
        worst_det = worst_det.max((det - closed).abs() / closed);
    }
    ensure(worst_area <= 1e-12, || format!("area mismatch {worst_area:e}"))?;
    ensure(worst_det <= 1e-12, || format!("determinant mismatch {worst_det:e}"))?;
    Ok(format!(
        "max rel error: shoelace {worst_area:.1e}, determinant {worst_det:.1e}"
    ))
}

fn inscription_endpoints() -> Check {
    for p in P_GRID {
        let at_top = tau_inscribed(p, sigma_p(p).unwrap()).unwrap();
        let at_one = tau_inscribed(p, 1.0).unwrap();
        let tp = tau_p(p).unwrap();
        ensure(at_top.abs() <= 1e-9, || format!("p = {p}: tau(sigma_p) = {at_top}"))?;
        ensure((at_one - tp).abs() <= 1e-9, || {
            format!("p = {p}: tau(1) = {at_one} vs {tp}")
        })?;
    }
    let exact = 1.5 * sqrt3();
    let top = sigma_p(2.0).unwrap();
    let mut spread = 0f64;
    for i in 0..32 {
        let s = 1.0 + (top - 1.0) * i as f64 / 31.0;
        let a = inscribed_area(2.0, s).unwrap();
        spread = spread.max((a - exact).abs());
    }
    ensure(spread <= 1e-8, || format!("p = 2 area deviates by {spread:e}"))?;
    Ok(format!("endpoints exact within 1e-9; p = 2 area spread {spread:.1e}"))
}

fn p3_report() -> Check {
    let v: Value = serde_json::from_str(&ok(&["reproduce-p3", "--format", "json"])).unwrap();
    let comps = v["comparisons"].as_array().ok_or("no comparisons")?;
    let find = |q: &str| comps.iter().find(|c| c["quantity"] == q).cloned();
    let volume = find("volume").ok_or("no volume comparison")?;
    ensure((volume["computed"].as_f64().unwrap() - 3.5333).abs() <= 5e-5, || {
        format!("V = {}", volume["computed"])
    })?;
    ensure(volume["status"] == "MATCH", || {
        format!("volume status {}", volume["status"])
    })?;
    let mut detail = String::new();
    for q in ["gamma_h", "density"] {
        let c = find(q).ok_or_else(|| format!("no {q} comparison"))?;
        ensure(c["difference"].is_number(), || format!("{q}: unsigned difference"))?;
        ensure(c["status"] == "MATCH" || c["status"] == "DISCREPANT", || {
            format!("{q}: status {}", c["status"])
        })?;
        detail += &format!(
            "{q} {} ({:+.4}), ",
            c["status"].as_str().unwrap(),
            c["difference"].as_f64().unwrap()
        );
    }
    ensure(comps.iter().all(|c| c["difference"].is_number()), || {
        "unsigned difference".into()
    })?;
    let r = v["middle_residual"].as_f64().ok_or("no middle residual")?;
    ensure((r - 0.0995).abs() <= 5e-4, || format!("middle residual {r}"))?;
    Ok(format!("volume MATCH, {detail}middle residual {r:+.4}"))
}

fn general_oracle() -> Check {
    let opts = CoveringOptions::default();
    let g2 = gamma_h_general(2.0, &opts).unwrap().gamma_h;
    ensure((g2 - 1.5 * sqrt3()).abs() <= 1e-6, || {
        format!("general gamma(2) = {g2}")
    })?;
    let g3 = gamma_h_general(3.0, &opts).unwrap().gamma_h;
    let al3 = covering_constant_al(finite(3.0), &opts).unwrap().gamma_al;
    // w1 = (1, 0), w2 = (a, b), w3 = (-a, b) with a^2 + 2a^3 = 1
    let a = minkowski_cover::find_root(|a| a * a + 2.0 * a.powi(3) - 1.0, 0.0, 1.0, &Default::default()).unwrap();
    let b = (1.0 - a.powi(3)).cbrt();
    let trial = 2.0 * b * (1.0 + a);
    ensure(trial >= 2.9651, || format!("trial hexagon {trial}"))?;
    ensure(g3 >= 2.9651 && g3 >= trial - 1e-12, || {
        format!("general gamma(3) = {g3} below trial {trial}")
    })?;
    ensure(g3 >= al3, || format!("general {g3} below al {al3}"))?;
    Ok(format!(
        "gamma(2) = {g2:.9}, gamma(3) = {g3:.6} (al {al3:.6}); reaches 3.331: {}",
        g3 >= 3.331
    ))
}

fn scan_determinism() -> Check {
    let args = ["scan", "--p-min", "1.2", "--p-max", "8", "--steps", "25", "--seed", "0"];
    let (a, b) = (mcover(&args), mcover(&args));
    ensure(a.status.success() && b.status.success(), || stderr(&a))?;
    ensure(a.stdout == b.stdout, || "scan CSV differs between runs".into())?;
    ensure(a.stderr == b.stderr, || "scan verdicts differ between runs".into())?;
    let rows = stdout(&a).lines().count() - 1;
    ensure(rows == 25, || format!("{rows} rows"))?;
    let err = stderr(&a);
    let mut verdicts = Vec::new();
    for q in ["gamma_al", "density_al"] {
        for seg in ["(1,2]", "[2,inf)"] {
            let line = err
                .lines()
                .find(|l| l.contains(&format!("{q} on {seg}")))
                .ok_or_else(|| format!("missing verdict for {q} on {seg}"))?;
            verdicts.push(line.rsplit(": ").next().unwrap().to_string());
        }
    }
    Ok(format!(
        "byte-identical; gamma {} / {}, theta {} / {}",
        verdicts[0], verdicts[1], verdicts[2], verdicts[3]
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Davis parameter", davis_parameter),
        ("Davis constant", davis_constant),
        ("branch values", branch_values),
        ("circle covering", circle_covering),
        ("limiting quadrangles", limiting_quadrangles),
        ("i-min bound suite", imin_bound),
        ("tiling property suite", tiling_property),
        ("oracle equivalence", oracle_equivalence),
        ("inscription endpoints", inscription_endpoints),
        ("D_3 reproduction report", p3_report),
        ("general-hexagon oracle", general_oracle),
        ("scan determinism", scan_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "{} passed, {failed} failed in {:.2}s",
        criteria.len() - failed,
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
