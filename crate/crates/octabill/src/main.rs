use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use octabill::billiards::{kite_fundamental_orbit, necklace_tiles, ApproxTable, Kite, Table};
use octabill::fractal::{FractalFamily, Kind, ShapeList};
use octabill::graph::{accumulate, project};
use octabill::octagon::{OctagonDynamics, Periodicity};
use octabill::render::Scene;
use octabill::subst::{lambda_curve, scaled_curve_f64, Family, SubstitutionTable, VectorAssignment};
use octabill::toy::ToySystem;
use octabill::verify;
use octabill::{ConvexPolygon, Error, Point2, QuadVal};

#[derive(Parser)]
#[command(name = "octabill", version, about = "Exact outer billiards on the regular octagon")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value = "svg")]
    format: Format,
    /// Write to PATH instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Renormalization or subdivision depth.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Graph projection: 1 for the plane, 2 or 3 for the curve families.
    #[arg(long, global = true)]
    projection: Option<usize>,
    /// Shrink curves by the family's scale factor per level.
    #[arg(long, global = true)]
    scaled: bool,
    /// Seed point "x,y"; coordinates like 1/3+2*r2.
    #[arg(long, global = true)]
    seed: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum System {
    Phi2,
    Pinwheel,
    Psi,
    Toy,
    /// Regular n-gon in floating point.
    Ngon,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Snowflake,
    Carpet,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TilingKind {
    Atlas,
    Partition,
    Necklaces,
    Periodic,
}

#[derive(Subcommand)]
enum Cmd {
    /// Iterate a map from --seed.
    Orbit {
        #[arg(long, value_enum, default_value = "phi2")]
        system: System,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Side count for --system ngon.
        #[arg(long, default_value_t = 5)]
        ngon: usize,
    },
    /// Arithmetic graph of a renormalized octagon tile (--depth) or a rational kite.
    Graph {
        /// Kite parameter p/q.
        #[arg(long)]
        kite: Option<String>,
        /// Draw the λ substitution curve at --depth instead of the graph.
        #[arg(long)]
        lambda: bool,
    },
    /// Stage of the snowflake or carpet substitution.
    Fractal {
        #[arg(long, value_enum, default_value = "snowflake")]
        family: FamilyArg,
        /// Overlay the scaled λ curve of the same depth (odd depths).
        #[arg(long)]
        overlay: bool,
    },
    /// Partitions and tilings of the octagon system.
    Tiling {
        #[arg(long, value_enum, default_value = "atlas")]
        kind: TilingKind,
    },
    /// The dart-shaped exchange with its tile cascade.
    Toy,
    /// Run verification suites by name or number, or all of them.
    Verify { suites: Vec<String> },
}

type CliResult<T> = std::result::Result<T, Box<dyn std::error::Error>>;

fn parse_seed(s: &str) -> CliResult<Point2> {
    let (x, y) = s.split_once(',').ok_or_else(|| Error::Parse(s.to_string()))?;
    Ok(Point2::new(x.trim().parse::<QuadVal>()?, y.trim().parse::<QuadVal>()?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_scene(cli: &Cli, scene: &Scene) -> CliResult<bool> {
    let text = match cli.format {
        Format::Svg => scene.to_svg(),
        Format::Json => scene.to_json() + "\n",
    };
    emit(cli, &text)?;
    Ok(true)
}

fn run(cli: &Cli) -> CliResult<bool> {
    match &cli.cmd {
        Cmd::Orbit { system, steps, ngon } => orbit(cli, *system, *steps, *ngon),
        Cmd::Graph { kite, lambda } => graph(cli, kite.as_deref(), *lambda),
        Cmd::Fractal { family, overlay } => fractal(cli, *family, *overlay),
        Cmd::Tiling { kind } => tiling(cli, *kind),
        Cmd::Toy => toy(cli),
        Cmd::Verify { suites } => run_verify(cli, suites),
    }
}

fn orbit(cli: &Cli, system: System, steps: usize, ngon: usize) -> CliResult<bool> {
    let seed = match (&cli.seed, system) {
        (Some(s), _) => parse_seed(s)?,
        // Centre of the tile O₁^depth.
        (None, System::Psi | System::Pinwheel) => {
            let d = OctagonDynamics::new()?;
            (0..cli.depth.unwrap_or(1)).fold(d.atlas.cells[0].centroid(), |p, _| d.theta_inv.apply(&p))
        }
        (None, _) => return Err("orbit needs --seed".into()),
    };
    let mut scene = Scene::new("orbit");
    if system == System::Ngon {
        let t = ApproxTable::regular(ngon);
        scene.approximate = true;
        scene.polygon_f64("table", t.vertices.clone(), "table");
        let mut p = seed.to_f64();
        let mut pts = vec![p];
        for _ in 0..steps {
            p = t.ob_map(p).ok_or(Error::UndefinedOnLine)?;
            pts.push(p);
        }
        for q in &pts {
            scene.point_f64("orbit", *q, "orbit");
        }
        scene.data = json!({ "approximate": true, "n": ngon, "points": pts });
        return emit_scene(cli, &scene);
    }
    let mut pts = vec![seed.clone()];
    let mut code = Vec::new();
    let mut parity = Vec::new();
    let mut p = seed;
    match system {
        System::Phi2 => {
            let t = Table::octagon();
            scene.polygon("table", t.vertices(), "table");
            for _ in 0..steps {
                let (q, i, j) = t.phi2(&p)?;
                code.push(i * 8 + j);
                p = q;
                pts.push(p.clone());
            }
        }
        System::Pinwheel => {
            let d = OctagonDynamics::new()?;
            for _ in 0..steps {
                p = d.phi(&p)?.0;
                pts.push(p.clone());
            }
        }
        System::Psi => {
            let d = OctagonDynamics::new()?;
            for (r, c) in d.atlas.cells.iter().enumerate() {
                let red = d.region_parity(r)? == 1;
                scene.polygon("regions", &c.vertices, if red { "red" } else { "blue" });
            }
            let mut s = 0u8;
            for _ in 0..steps {
                let st = d.psi_step(&p)?;
                code.push(st.symbol + 22 * s as usize);
                s ^= st.parity;
                parity.push(st.parity);
                p = st.point;
                pts.push(p.clone());
            }
        }
        System::Toy => {
            let t = ToySystem::new()?;
            scene.polygon("region", &t.region(), "tile");
            for _ in 0..steps {
                p = t.step(&p)?;
                pts.push(p.clone());
            }
        }
        System::Ngon => unreachable!(),
    }
    for q in &pts {
        scene.point("orbit", q, "orbit");
    }
    let exact: Vec<String> = pts.iter().map(|q| q.to_string()).collect();
    scene.data = json!({ "points": exact, "code": code, "parity": parity });
    emit_scene(cli, &scene)
}

fn graph(cli: &Cli, kite: Option<&str>, lambda: bool) -> CliResult<bool> {
    let k = cli.projection.unwrap_or(1);
    let mut scene = Scene::new("arithmetic graph");
    if let Some(pq) = kite {
        let (p, q) = pq.split_once('/').ok_or_else(|| Error::Parse(pq.to_string()))?;
        let orbit = kite_fundamental_orbit(&Kite::new(p.trim().parse()?, q.trim().parse()?)?, 1_000_000)?;
        let path = accumulate(&orbit.system, &orbit.points[0], orbit.points.len())?;
        let pl = project(&path, k)?;
        scene.polyline("graph", &pl.points, "curve");
        scene.data = json!({ "kite": pq, "period": orbit.points.len(), "closed": path.is_closed(), "vertices": path.vertices });
        return emit_scene(cli, &scene);
    }
    let depth = cli.depth.unwrap_or(3);
    let d = OctagonDynamics::new()?;
    if lambda {
        if k != 2 && k != 3 {
            return Err("λ curves exist for projections 2 and 3".into());
        }
        let l = VectorAssignment::lambda(&VectorAssignment::from_dynamics(&d, k)?);
        let c = lambda_curve(&SubstitutionTable::standard(), &l, depth)?;
        scene.polyline("curve", &c.points, "curve");
        scene.data = json!({ "projection": k, "depth": depth, "edges": c.points.len() - 1 });
        return emit_scene(cli, &scene);
    }
    if depth > 8 {
        return Err(Error::Invalid(format!("depth {depth} exceeds the cap of 8")).into());
    }
    let (p, steps) = match &cli.seed {
        Some(s) => (parse_seed(s)?, 3usize.pow(depth as u32)),
        None => {
            let mut p = d.atlas.cells[0].centroid();
            for _ in 0..depth {
                p = d.theta_inv.apply(&p);
            }
            (p, 3usize.pow(depth as u32))
        }
    };
    let path = accumulate(&d.sys, &p, steps)?;
    let pl = project(&path, k)?;
    let pts = match (cli.scaled, k) {
        (true, 2) => scaled_curve_f64(&pl, Family::G2, depth),
        (true, 3) => scaled_curve_f64(&pl, Family::G3, depth),
        _ => pl.to_f64(),
    };
    scene.polyline_f64("graph", pts, "curve");
    scene.data = json!({ "projection": k, "depth": depth, "steps": steps, "closed": path.is_closed(), "collinear": pl.is_collinear() });
    emit_scene(cli, &scene)
}

fn fractal(cli: &Cli, family: FamilyArg, overlay: bool) -> CliResult<bool> {
    let depth = cli.depth.unwrap_or(2);
    if depth > 6 {
        return Err(Error::Invalid(format!("depth {depth} exceeds the cap of 6")).into());
    }
    let fam = if family == FamilyArg::Snowflake { FractalFamily::I3 } else { FractalFamily::I2 };
    let list = ShapeList::at_depth(fam, depth);
    let mut scene = Scene::new(if fam == FractalFamily::I3 { "snowflake" } else { "carpet" });
    // Every trapezoid draws above every parallelogram.
    scene.layer("parallelograms");
    scene.layer("shapes");
    for (s, c) in list.shapes.iter().zip(list.colours()) {
        match s.kind {
            Kind::Triangle => scene.polygon("shapes", &s.vertices(), if c == 0 { "triangle" } else { "blue" }),
            Kind::Parallelogram => scene.polygon("parallelograms", &s.vertices(), "parallelogram"),
            Kind::Trapezoid => scene.polygon("shapes", &s.vertices(), "trapezoid"),
        }
    }
    if overlay {
        let d = OctagonDynamics::new()?;
        let k = if fam == FractalFamily::I3 { 3 } else { 2 };
        let l = VectorAssignment::lambda(&VectorAssignment::from_dynamics(&d, k)?);
        let c = lambda_curve(&SubstitutionTable::standard(), &l, depth)?;
        scene.polyline("overlay", &c.points, "curve");
    }
    scene.data = json!({ "depth": depth, "shapes": list.shapes.len(), "max_multiplicity": list.max_multiplicity() });
    emit_scene(cli, &scene)
}

fn tiling(cli: &Cli, kind: TilingKind) -> CliResult<bool> {
    let depth = cli.depth.unwrap_or(2);
    let mut scene = Scene::new("tiling");
    let d = OctagonDynamics::new()?;
    match kind {
        TilingKind::Atlas => {
            for (r, c) in d.atlas.cells.iter().enumerate() {
                let red = d.region_parity(r)? == 1;
                scene.polygon("regions", &c.vertices, if red { "red" } else { "blue" });
            }
            for c in d.s_region() {
                scene.polygon("renormalized", &c.vertices, "outline");
            }
        }
        TilingKind::Partition => {
            let cells = d.derive_partition_of_r()?;
            for c in &cells {
                scene.polygon("cells", &c.polygon.vertices, if c.parity == 1 { "red" } else { "blue" });
            }
            scene.data = json!({ "cells": cells.len() });
        }
        TilingKind::Necklaces => {
            scene.polygon("table", Table::octagon().vertices(), "table");
            for k in 1..=depth.max(1) {
                for t in necklace_tiles(k) {
                    scene.polygon(&format!("necklace{k}"), &t.vertices, "tile");
                }
            }
        }
        TilingKind::Periodic => {
            scene.polyline("region", &closed(&d.atlas.r), "outline");
            let mut count = 0;
            for base in [0, 11] {
                let mut p = d.atlas.cells[base].centroid();
                for k in 0..=depth.min(4) {
                    let mut q = p.clone();
                    for _ in 0..3usize.pow(k as u32) {
                        if let Periodicity::Periodic { tile, .. } = d.classify_periodic(&q, 8)? {
                            scene.polygon(&format!("level{k}"), &tile.vertices, "tile");
                            count += 1;
                        }
                        q = d.psi(&q)?;
                    }
                    p = d.theta_inv.apply(&p);
                }
            }
            scene.data = json!({ "tiles": count });
        }
    }
    emit_scene(cli, &scene)
}

fn closed(ps: &[Point2]) -> Vec<Point2> {
    let mut v = ps.to_vec();
    if let Some(f) = ps.first() {
        v.push(f.clone());
    }
    v
}

fn toy(cli: &Cli) -> CliResult<bool> {
    let depth = cli.depth.unwrap_or(2).min(5);
    let t = ToySystem::new()?;
    let mut scene = Scene::new("toy model");
    scene.polygon("pieces", &t.a1.vertices, "blue");
    scene.polygon("pieces", &t.b1.vertices, "red");
    let xp: Vec<ConvexPolygon> = t.x_prime();
    for p in &xp {
        scene.polygon("renormalized", &p.vertices, "outline");
    }
    let mut counts = Vec::new();
    for n in 0..=depth {
        let tiles = t.periodic_tiles(n)?;
        counts.push(tiles.len());
        for (tile, _) in tiles {
            scene.polygon(&format!("level{n}"), &tile.vertices, "tile");
        }
    }
    scene.data = json!({ "tiles_per_level": counts });
    emit_scene(cli, &scene)
}

fn run_verify(cli: &Cli, suites: &[String]) -> CliResult<bool> {
    let ids: Vec<u8> = if suites.is_empty() || suites.iter().any(|s| s == "all") {
        (1..=17).collect()
    } else {
        suites.iter().map(|s| verify::suite_id(s).ok_or_else(|| format!("unknown suite {s:?}"))).collect::<Result<_, _>>()?
    };
    let checks: Vec<verify::Check> = ids.into_iter().map(verify::run).collect();
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&checks)? + "\n",
        Format::Svg => checks
            .iter()
            .map(|c| format!("{} {:>2} {:<15} {:>7.2}s  {}\n", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name, c.seconds, c.detail))
            .collect(),
    };
    emit(cli, &text)?;
    Ok(checks.iter().all(|c| c.pass))
}
