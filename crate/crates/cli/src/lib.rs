//! `mcover`: covering constants, densities and critical lattices of the
//! Minkowski balls `D_p` from the command line.
//!
//! Exit codes: 0 success, 2 domain error, 3 solver failure, 64 usage error,
//! 74 when an output file cannot be written.

pub mod format;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minkowski_cover::covering::{log_grid, DISC_DENSITY, SAS_RATIO};
use minkowski_cover::moduli::davis_constant;
use minkowski_cover::{
    al_hexagon, alpha_fit, ball_volume, bounds_report, covering_constant_al, covering_density, critical_determinant,
    gamma_h_general, i_min_area, inscribed_area, is_covering, min_area, moduli_area, multiplicity_estimate,
    reproduce_p3_example, scan, sigma_alpha, sigma_p, tau_inscribed, tau_p, BallParameter, CoveringOptions, Error,
    GridSearch, Lattice2, Point2, SymmetricHexagon, Tolerance,
};
use serde_json::{Map, Value};

use crate::format::{csv_record, csv_table, json_object, Cell, Record, ROUND_TRIP_DIGITS};
use crate::svg::{ball_outline, document, Chart, Figure, Series, Shape};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(
    name = "mcover",
    version,
    about = "Lattice coverings of the plane by Minkowski balls |x|^p + |y|^p <= 1"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Absolute and relative solver tolerance
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Also write an SVG figure to this path
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,

    /// Grid cells for the sigma search
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(2..=1_000_000))]
    pub grid: u32,

    /// Significant digits in CSV output (scan always uses 17)
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,

    /// Seed for sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Area of D_p
    Volume {
        /// Exponent; `1` and `inf` select the limiting balls
        #[arg(long)]
        p: String,
    },
    /// Davis parameter tau_p
    Tau {
        #[arg(long)]
        p: String,
    },
    /// sigma_p, or sigma_{alpha,p} with --alpha
    Sigma {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Critical determinant and both branches
    Critdet {
        #[arg(long)]
        p: String,
    },
    /// Exponent p0 where the two critical-determinant branches cross
    Davis,
    /// Al-hexagon area at (p, tau, sigma); tau defaults to the inscribed value
    Area {
        #[arg(long)]
        p: String,
        #[arg(long, required_unless_present = "alpha", conflicts_with = "alpha")]
        sigma: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        /// Use sigma = sigma_{alpha,p}
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Covering constant over inscribed al-hexagons
    Gamma {
        #[arg(long)]
        p: String,
        /// Also maximize over general inscribed symmetric hexagons
        #[arg(long)]
        general: bool,
    },
    /// Covering density V / Gamma
    Density {
        #[arg(long)]
        p: String,
    },
    /// Covering constant with its lower and upper bounds
    Bounds {
        #[arg(long)]
        p: String,
    },
    /// Covering constants along a log-spaced p grid
    Scan {
        #[arg(long)]
        p_min: f64,
        #[arg(long)]
        p_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        general: bool,
    },
    /// Sample whether a lattice of D_p translates covers the plane
    Verify {
        /// Basis as a1x,a1y,a2x,a2y
        #[arg(long, value_parser = parse_basis, allow_hyphen_values = true)]
        basis: [f64; 4],
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Recompute the D_3 example and compare with its quoted values
    #[command(name = "reproduce-p3")]
    ReproduceP3,
    /// Alpha with sigma_{alpha,p} equal to the optimal sigma
    #[command(name = "fit-alpha")]
    FitAlpha {
        #[arg(long)]
        p: String,
        /// Fit this sigma instead of the optimal one
        #[arg(long)]
        sigma: Option<f64>,
    },
}

fn parse_basis(s: &str) -> std::result::Result<[f64; 4], String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated numbers, got {}", v.len()))
}

/// Result of one subcommand before rendering.
struct Output {
    command: &'static str,
    csv: String,
    json: Map<String, Value>,
    /// Written to stderr in CSV mode.
    notes: Vec<String>,
    svg: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn ball(p: &str) -> Outcome<BallParameter> {
    Ok(p.parse::<BallParameter>()?)
}

/// `p` as a number, except `"inf"` for the square.
fn p_cell(p: BallParameter) -> Cell {
    match p {
        BallParameter::LimitOne => Cell::Num(1.0),
        BallParameter::Finite(e) => Cell::Num(e.get()),
        BallParameter::LimitInfinity => Cell::Text("inf".into()),
    }
}

fn finite(p: &str) -> Outcome<f64> {
    ball(p)?
        .as_finite()
        .ok_or_else(|| Error::Domain(format!("this command needs a finite p > 1, got {p}")).into())
}

struct Ctx {
    opts: CoveringOptions,
    digits: usize,
    seed: u64,
    svg: bool,
}

fn record_output(command: &'static str, rec: Record, ctx: &Ctx) -> Output {
    Output {
        command,
        csv: csv_record(&rec, ctx.digits),
        json: json_object(&rec),
        notes: Vec::new(),
        svg: None,
    }
}

fn vertex_cells(rec: &mut Record, h: &SymmetricHexagon) {
    let [w1, w2, w3] = h.vertices();
    rec.extend([
        ("w1_x", w1.x.into()),
        ("w1_y", w1.y.into()),
        ("w2_x", w2.x.into()),
        ("w2_y", w2.y.into()),
        ("w3_x", w3.x.into()),
        ("w3_y", w3.y.into()),
    ]);
}

fn kind_name(h: &SymmetricHexagon) -> &'static str {
    match h.kind() {
        minkowski_cover::HexagonKind::AlHexagon => "AL_HEXAGON",
        minkowski_cover::HexagonKind::General => "GENERAL",
        minkowski_cover::HexagonKind::Quadrangle => "QUADRANGLE",
    }
}

fn hexagon_figure(title: String, p: BallParameter, hexagons: &[&SymmetricHexagon]) -> String {
    let mut shapes = vec![Shape {
        points: ball_outline(p, Point2::ORIGIN),
        stroke: "#444",
        fill: "none",
        closed: true,
    }];
    let mut dots = Vec::new();
    for (i, h) in hexagons.iter().enumerate() {
        let (stroke, fill) = if i == 0 {
            ("#1f5fa8", "#1f5fa833")
        } else {
            ("#c8482c", "none")
        };
        shapes.push(Shape {
            points: h.polygon().to_vec(),
            stroke,
            fill,
            closed: true,
        });
        if i == 0 {
            dots.extend(h.vertices());
        }
    }
    Figure { title, shapes, dots }.render()
}

fn area_curve(p: f64, mark: Option<(f64, f64)>) -> Outcome<String> {
    let hi = sigma_p(p)?;
    let points = (0..=200)
        .map(|i| {
            let s = if i == 200 {
                hi
            } else {
                1.0 + (hi - 1.0) * i as f64 / 200.0
            };
            inscribed_area(p, s).map(|a| (s, a))
        })
        .collect::<minkowski_cover::Result<Vec<_>>>()?;
    Ok(Chart {
        title: format!("inscribed area, p = {}", format::number(p, 6)),
        x_label: "sigma".into(),
        y_label: "area".into(),
        series: vec![Series {
            label: "A(sigma)".into(),
            points,
        }],
        reference: vec![(min_area(p)?, "min A".into()), (i_min_area(p)?, "i-min A".into())],
        markers: mark.into_iter().collect(),
    }
    .render())
}

fn cmd_volume(p: &str, ctx: &Ctx) -> Outcome<Output> {
    let bp = ball(p)?;
    let rec: Record = vec![("p", p_cell(bp)), ("volume", ball_volume(bp).into())];
    Ok(record_output("volume", rec, ctx))
}

fn cmd_tau(p: &str, ctx: &Ctx) -> Outcome<Output> {
    let p = finite(p)?;
    let t = tau_p(p)?;
    let residual = 2.0 * (1.0 - t).powf(p) - 1.0 - t.powf(p);
    let rec: Record = vec![("p", p.into()), ("tau_p", t.into()), ("residual", residual.into())];
    Ok(record_output("tau", rec, ctx))
}

fn cmd_sigma(p: &str, alpha: f64, ctx: &Ctx) -> Outcome<Output> {
    let p = finite(p)?;
    let rec: Record = vec![
        ("p", p.into()),
        ("alpha", alpha.into()),
        ("sigma", sigma_alpha(alpha, p)?.into()),
    ];
    Ok(record_output("sigma", rec, ctx))
}

fn cmd_critdet(p: &str, ctx: &Ctx) -> Outcome<Output> {
    let p = finite(p)?;
    let c = critical_determinant(p)?;
    let branch = match c.active_branch {
        minkowski_cover::Branch::Branch0 => "BRANCH_0",
        minkowski_cover::Branch::Branch1 => "BRANCH_1",
    };
    let rec: Record = vec![
        ("p", p.into()),
        ("tau_p", c.tau_p.into()),
        ("sigma_p", c.sigma_p.into()),
        ("delta_branch1", c.delta_branch1.into()),
        ("delta_branch0", c.delta_branch0.into()),
        ("critical_determinant", c.critical_determinant.into()),
        ("active_branch", branch.into()),
        ("min_area", min_area(p)?.into()),
        ("i_min_area", i_min_area(p)?.into()),
    ];
    Ok(record_output("critdet", rec, ctx))
}

fn cmd_davis(ctx: &Ctx) -> Outcome<Output> {
    let p0 = davis_constant(&ctx.opts.tol)?;
    let rec: Record = vec![
        ("p0", p0.into()),
        ("delta_branch1", minkowski_cover::delta_branch1(p0)?.into()),
        ("delta_branch0", minkowski_cover::delta_branch0(p0)?.into()),
    ];
    Ok(record_output("davis", rec, ctx))
}

fn cmd_area(p: &str, sigma: Option<f64>, tau: Option<f64>, alpha: Option<f64>, ctx: &Ctx) -> Outcome<Output> {
    let p = finite(p)?;
    let sigma = match (sigma, alpha) {
        (Some(s), _) => s,
        (None, Some(a)) => sigma_alpha(a, p)?,
        (None, None) => return Err(Error::Domain("area needs --sigma or --alpha".into()).into()),
    };
    let (tau, inscribed) = match tau {
        Some(t) => (t, false),
        None => (tau_inscribed(p, sigma)?, true),
    };
    let area = moduli_area(p, tau, sigma)?;
    let hexagon = al_hexagon(p, tau, sigma)?;
    let w2 = hexagon.vertices()[1];
    let mut rec: Record = vec![
        ("p", p.into()),
        ("alpha", alpha.into()),
        ("tau", tau.into()),
        ("sigma", sigma.into()),
        ("tau_inscribed", inscribed.into()),
        ("area", area.into()),
        (
            "middle_residual",
            (w2.x.abs().powf(p) + w2.y.abs().powf(p) - 1.0).into(),
        ),
        ("kind", kind_name(&hexagon).into()),
    ];
    vertex_cells(&mut rec, &hexagon);
    let mut out = record_output("area", rec, ctx);
    if ctx.svg {
        let title = format!("al-hexagon, area {}", format::number(area, 6));
        out.svg = Some(document(&[hexagon_figure(
            title,
            BallParameter::finite(p)?,
            &[&hexagon],
        )]));
    }
    Ok(out)
}

fn cmd_gamma(p: &str, general: bool, ctx: &Ctx) -> Outcome<Output> {
    let bp = ball(p)?;
    let al = covering_constant_al(bp, &ctx.opts)?;
    let gen = match (general, bp.as_finite()) {
        (true, Some(p)) => Some(gamma_h_general(p, &ctx.opts)?),
        (true, None) => return Err(Error::Domain("--general needs a finite p > 1".into()).into()),
        (false, _) => None,
    };
    let mut rec: Record = vec![
        ("p", p_cell(bp)),
        ("sigma_star", al.sigma_star.into()),
        ("tau_star", al.tau_star.into()),
        ("gamma_al", al.gamma_al.into()),
        ("density_al", covering_density(bp, al.gamma_al)?.into()),
        ("kind", kind_name(&al.hexagon).into()),
    ];
    vertex_cells(&mut rec, &al.hexagon);
    if let Some(g) = &gen {
        rec.push(("gamma_general", g.gamma_h.into()));
        rec.push(("density_general", covering_density(bp, g.gamma_h)?.into()));
    }
    let mut out = record_output("gamma", rec, ctx);
    if ctx.svg {
        let mut hexes = vec![&al.hexagon];
        if let Some(g) = &gen {
            hexes.push(&g.hexagon);
        }
        let mut panels = vec![hexagon_figure(format!("optimal hexagon in D_{bp}"), bp, &hexes)];
        if let (Some(p), Some(s)) = (bp.as_finite(), al.sigma_star) {
            panels.insert(0, area_curve(p, Some((s, al.gamma_al)))?);
        }
        out.svg = Some(document(&panels));
    }
    Ok(out)
}

fn cmd_density(p: &str, ctx: &Ctx) -> Outcome<Output> {
    let bp = ball(p)?;
    let al = covering_constant_al(bp, &ctx.opts)?;
    let rec: Record = vec![
        ("p", p_cell(bp)),
        ("volume", ball_volume(bp).into()),
        ("gamma_al", al.gamma_al.into()),
        ("density_al", covering_density(bp, al.gamma_al)?.into()),
    ];
    Ok(record_output("density", rec, ctx))
}

fn cmd_bounds(p: &str, ctx: &Ctx) -> Outcome<Output> {
    let p = finite(p)?;
    let s = bounds_report(p, &ctx.opts)?;
    let rec: Record = vec![
        ("p", s.p.into()),
        ("volume", s.volume.into()),
        ("gamma_al", s.gamma_al.into()),
        ("sigma_star", s.sigma_star.into()),
        ("tau_star", s.tau_star.into()),
        ("density_al", s.density_al.into()),
        ("lower_bound_imin", s.lower_bound_imin.into()),
        ("sas_bound", s.sas_bound.into()),
        ("upper_bound_area", s.upper_bound_area.into()),
        ("density_upper", s.density_upper.into()),
        ("meets_sas_bound", s.meets_sas_bound.into()),
        ("density_endpoint", s.density_endpoint.into()),
    ];
    let mut out = record_output("bounds", rec, ctx);
    if ctx.svg {
        let bp = BallParameter::finite(p)?;
        let al = covering_constant_al(bp, &ctx.opts)?;
        let chart = area_curve(p, Some((s.sigma_star, s.gamma_al)))?;
        let fig = hexagon_figure(format!("optimal hexagon in D_{bp}"), bp, &[&al.hexagon]);
        out.svg = Some(document(&[chart, fig]));
    }
    Ok(out)
}

fn verdict_line(v: &minkowski_cover::MonotonicityVerdict) -> String {
    format!(
        "evidence: {} on {} over {} points: {}",
        v.quantity,
        v.segment,
        v.points,
        trend_name(v.trend)
    )
}

fn trend_name(t: minkowski_cover::Trend) -> &'static str {
    match t {
        minkowski_cover::Trend::Increasing => "increasing",
        minkowski_cover::Trend::Decreasing => "decreasing",
        minkowski_cover::Trend::Constant => "constant",
        minkowski_cover::Trend::NonMonotone => "non_monotone",
        minkowski_cover::Trend::Insufficient => "insufficient",
    }
}

fn cmd_scan(p_min: f64, p_max: f64, steps: usize, general: bool, ctx: &Ctx) -> Outcome<Output> {
    let grid = log_grid(p_min, p_max, steps)?;
    let result = scan(&grid, general, &ctx.opts)?;
    let mut header = vec!["p", "sigma_star", "tau_star", "gamma_al", "density_al", "alpha_fit"];
    if general {
        header.extend(["gamma_general", "density_general"]);
    }
    let rows: Vec<Record> = result
        .rows
        .iter()
        .map(|r| {
            let mut rec: Record = vec![
                ("p", r.p.into()),
                ("sigma_star", r.sigma_star.into()),
                ("tau_star", r.tau_star.into()),
                ("gamma_al", r.gamma_al.into()),
                ("density_al", r.density_al.into()),
                ("alpha_fit", r.alpha_fit.into()),
            ];
            if general {
                rec.push(("gamma_general", r.gamma_general.into()));
                rec.push(("density_general", r.density_general.into()));
            }
            rec
        })
        .collect();

    let mut json = Map::new();
    let grid_rec: Record = vec![
        ("p_min", p_min.into()),
        ("p_max", p_max.into()),
        ("steps", steps.into()),
        ("spacing", "log".into()),
    ];
    json.insert("grid".into(), Value::Object(json_object(&grid_rec)));
    json.insert(
        "rows".into(),
        Value::Array(rows.iter().map(|r| Value::Object(json_object(r))).collect()),
    );
    json.insert(
        "verdicts".into(),
        Value::Array(
            result
                .verdicts
                .iter()
                .map(|v| {
                    let rec: Record = vec![
                        ("quantity", v.quantity.into()),
                        ("segment", v.segment.into()),
                        ("points", v.points.into()),
                        ("trend", trend_name(v.trend).into()),
                        ("label", "evidence".into()),
                    ];
                    Value::Object(json_object(&rec))
                })
                .collect(),
        ),
    );

    let svg = if ctx.svg {
        let mut gamma = vec![Series {
            label: "Gamma al".into(),
            points: result.rows.iter().map(|r| (r.p, r.gamma_al)).collect(),
        }];
        let mut theta = vec![Series {
            label: "theta al".into(),
            points: result.rows.iter().map(|r| (r.p, r.density_al)).collect(),
        }];
        if general {
            gamma.push(Series {
                label: "Gamma general".into(),
                points: result
                    .rows
                    .iter()
                    .filter_map(|r| r.gamma_general.map(|g| (r.p, g)))
                    .collect(),
            });
            theta.push(Series {
                label: "theta general".into(),
                points: result
                    .rows
                    .iter()
                    .filter_map(|r| r.density_general.map(|g| (r.p, g)))
                    .collect(),
            });
        }
        let g = Chart {
            title: "covering constant".into(),
            x_label: "p".into(),
            y_label: "Gamma".into(),
            series: gamma,
            reference: Vec::new(),
            markers: Vec::new(),
        };
        let t = Chart {
            title: "covering density".into(),
            x_label: "p".into(),
            y_label: "theta".into(),
            series: theta,
            reference: vec![(DISC_DENSITY, "2 pi / 3 sqrt 3".into())],
            markers: Vec::new(),
        };
        Some(document(&[g.render(), t.render()]))
    } else {
        None
    };

    Ok(Output {
        command: "scan",
        csv: csv_table(&header, &rows, ROUND_TRIP_DIGITS),
        json,
        notes: result.verdicts.iter().map(verdict_line).collect(),
        svg,
    })
}

fn cmd_verify(basis: &[f64; 4], p: &str, samples: usize, ctx: &Ctx) -> Outcome<Output> {
    let bp = ball(p)?;
    if samples == 0 {
        return Err(Error::Domain("--samples must be positive".into()).into());
    }
    let lat = Lattice2::new(Point2::new(basis[0], basis[1]), Point2::new(basis[2], basis[3]))?;
    let report = is_covering(&lat, bp, samples, ctx.seed)?;
    let multiplicity = multiplicity_estimate(&lat, bp, samples, ctx.seed)?;
    let rec: Record = vec![
        ("p", p_cell(bp)),
        ("samples", samples.into()),
        ("seed", ctx.seed.into()),
        ("determinant", lat.determinant().into()),
        ("covered_fraction", report.covered_fraction.into()),
        ("covers", (report.covered_fraction == 1.0).into()),
        ("worst_gap", report.worst_gap.into()),
        ("worst_x", report.worst_point.x.into()),
        ("worst_y", report.worst_point.y.into()),
        ("multiplicity", multiplicity.into()),
        ("volume_over_determinant", (ball_volume(bp) / lat.determinant()).into()),
    ];
    let mut out = record_output("verify", rec, ctx);
    if ctx.svg {
        let (a1, a2) = lat.basis();
        let cell = vec![Point2::ORIGIN, a1, a1 + a2, a2];
        let mut shapes = Vec::new();
        for (m, n) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            shapes.push(Shape {
                points: ball_outline(bp, lat.point(m, n)),
                stroke: "#1f5fa8",
                fill: "#1f5fa81a",
                closed: true,
            });
        }
        shapes.push(Shape {
            points: cell,
            stroke: "#000",
            fill: "none",
            closed: true,
        });
        let fig = Figure {
            title: format!(
                "fundamental cell, covered {}",
                format::number(report.covered_fraction, 6)
            ),
            shapes,
            dots: vec![report.worst_point],
        };
        out.svg = Some(document(&[fig.render()]));
    }
    Ok(out)
}

fn cmd_reproduce_p3(ctx: &Ctx) -> Outcome<Output> {
    let r = reproduce_p3_example(&ctx.opts)?;
    let header = ["quantity", "computed", "reference", "tolerance", "difference", "status"];
    let mut rows: Vec<Record> = r
        .comparisons
        .iter()
        .map(|c| {
            vec![
                ("quantity", c.quantity.into()),
                ("computed", c.computed.into()),
                ("reference", c.reference.into()),
                ("tolerance", c.tolerance.into()),
                ("difference", c.difference.into()),
                ("status", format!("{:?}", c.status).to_uppercase().into()),
            ]
        })
        .collect();
    for (name, value) in [
        ("middle_residual", r.middle_residual),
        ("gamma_al", r.gamma_al),
        ("density_al", r.density_al),
        ("gamma_general", r.gamma_general),
        ("density_general", r.density_general),
        ("sas_bound", r.sas_bound),
    ] {
        rows.push(vec![
            ("quantity", name.into()),
            ("computed", value.into()),
            ("reference", Cell::Missing),
            ("tolerance", Cell::Missing),
            ("difference", Cell::Missing),
            ("status", "COMPUTED".into()),
        ]);
    }

    let mut json = Map::new();
    let head: Record = vec![
        ("p", r.p.into()),
        ("alpha", r.alpha.into()),
        ("tau", r.tau.into()),
        ("sigma", r.sigma.into()),
        ("middle_residual", r.middle_residual.into()),
        ("volume", r.volume.into()),
        ("area", r.area.into()),
        ("density", r.density.into()),
        ("gamma_al", r.gamma_al.into()),
        ("density_al", r.density_al.into()),
        ("gamma_general", r.gamma_general.into()),
        ("density_general", r.density_general.into()),
        ("sas_bound", r.sas_bound.into()),
        ("sas_ratio", SAS_RATIO.into()),
        ("reference_gamma_attainable", r.reference_gamma_attainable.into()),
    ];
    json.extend(json_object(&head));
    json.insert(
        "vertices".into(),
        Value::Array(
            r.vertices
                .iter()
                .map(|v| Value::Array(vec![Cell::Num(v.x).json(), Cell::Num(v.y).json()]))
                .collect(),
        ),
    );
    json.insert(
        "comparisons".into(),
        Value::Array(
            rows[..r.comparisons.len()]
                .iter()
                .map(|c| Value::Object(json_object(c)))
                .collect(),
        ),
    );

    let svg = if ctx.svg {
        let bp = BallParameter::finite(r.p)?;
        let hexagon = al_hexagon(r.p, r.tau, r.sigma)?;
        let title = format!(
            "tau 0.12, alpha 2: middle residual {}",
            format::number(r.middle_residual, 4)
        );
        Some(document(&[hexagon_figure(title, bp, &[&hexagon])]))
    } else {
        None
    };

    Ok(Output {
        command: "reproduce-p3",
        csv: csv_table(&header, &rows, ctx.digits),
        json,
        notes: vec![format!(
            "general-hexagon maximum {} reaches 3.331: {}",
            format::number(r.gamma_general, 6),
            r.reference_gamma_attainable
        )],
        svg,
    })
}

fn cmd_fit_alpha(p: &str, sigma: Option<f64>, ctx: &Ctx) -> Outcome<Output> {
    let p = finite(p)?;
    let sigma_star = match sigma {
        Some(s) => s,
        None => covering_constant_al(BallParameter::finite(p)?, &ctx.opts)?
            .sigma_star
            .expect("finite p"),
    };
    let rec: Record = vec![
        ("p", p.into()),
        ("sigma_star", sigma_star.into()),
        ("alpha", alpha_fit(p, sigma_star)?.into()),
    ];
    Ok(record_output("fit-alpha", rec, ctx))
}

fn dispatch(command: &Command, ctx: &Ctx) -> Outcome<Output> {
    match command {
        Command::Volume { p } => cmd_volume(p, ctx),
        Command::Tau { p } => cmd_tau(p, ctx),
        Command::Sigma { p, alpha } => cmd_sigma(p, *alpha, ctx),
        Command::Critdet { p } => cmd_critdet(p, ctx),
        Command::Davis => cmd_davis(ctx),
        Command::Area { p, sigma, tau, alpha } => cmd_area(p, *sigma, *tau, *alpha, ctx),
        Command::Gamma { p, general } => cmd_gamma(p, *general, ctx),
        Command::Density { p } => cmd_density(p, ctx),
        Command::Bounds { p } => cmd_bounds(p, ctx),
        Command::Scan {
            p_min,
            p_max,
            steps,
            general,
        } => cmd_scan(*p_min, *p_max, *steps, *general, ctx),
        Command::Verify { basis, p, samples } => cmd_verify(basis, p, *samples, ctx),
        Command::ReproduceP3 => cmd_reproduce_p3(ctx),
        Command::FitAlpha { p, sigma } => cmd_fit_alpha(p, *sigma, ctx),
    }
}

fn render(out: Output, format: Format) -> String {
    match format {
        Format::Csv => out.csv,
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("command".into(), Value::from(out.command));
            obj.extend(out.json);
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
            s.push('\n');
            s
        }
    }
}

/// Exit code for a library error: solver failures are 3, bad input 2.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_solver_failure() {
        EXIT_SOLVER
    } else {
        EXIT_DOMAIN
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let g = &cli.global;
    let tol = match Tolerance::new(g.tol, g.tol, Tolerance::default().max_iter) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_DOMAIN;
        }
    };
    let ctx = Ctx {
        opts: CoveringOptions {
            tol,
            grid: GridSearch {
                cells: g.grid as usize,
                ..GridSearch::default()
            },
            ..CoveringOptions::default()
        },
        digits: g.digits as usize,
        seed: g.seed,
        svg: g.svg.is_some(),
    };

    let result = dispatch(&cli.command, &ctx).and_then(|out| {
        if let (Some(path), Some(svg)) = (&g.svg, &out.svg) {
            std::fs::write(path, svg).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
        } else if let Some(path) = &g.svg {
            let _ = writeln!(
                stderr,
                "note: {} has no figure; {} not written",
                out.command,
                path.display()
            );
        }
        Ok(out)
    });

    match result {
        Ok(out) => {
            if g.format == Format::Csv {
                for note in &out.notes {
                    let _ = writeln!(stderr, "{note}");
                }
            }
            let text = render(out, g.format);
            match stdout.write_all(text.as_bytes()) {
                Ok(()) => EXIT_OK,
                Err(_) => EXIT_IO,
            }
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_IO
        }
    }
}
