//! The finite verification suite: seventeen exact or tolerance-pinned checks.
//!
//! Every check builds what it needs, so its timing covers the whole computation.

use std::collections::HashSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::billiards::{between_necklaces, kite_fundamental_orbit, Kite, Table};
use crate::error::{Error, Result};
use crate::field::QuadVal;
use crate::fractal::{
    hidden_symmetry_check, patterns_by_type, shape_at, vertex_membership, FractalFamily, HiddenPair, PointRole,
    ShapeTree, MAX_DEPTH,
};
use crate::geom::Point2;
use crate::graph::{accumulate, project, LatticePath};
use crate::octagon::{cell_samples, strip_value, translate_equivalent, OctagonDynamics, Periodicity};
use crate::subst::{
    build_curve, curve_distance, delta_check, int_pair, is_closed, is_octagon_symbol, lambda_curve, lambda_curve_f64, quad_pair,
    renorm_operator, vertex_distance_bound, SubstitutionTable, VectorAssignment, G2_LISTED, G3_LISTED, SYMBOLS,
};
use crate::toy::{x_prime_samples, ToySystem};

/// Rows 0..10 of the printed parity table as (σ; σ₀, σ₁, σ₂).
pub const PRINTED_PARITY: [(u8, [u8; 3]); 11] = [
    (0, [1, 1, 1]),
    (0, [0, 0, 0]),
    (1, [0, 0, 1]),
    (0, [0, 0, 0]),
    (1, [1, 0, 0]),
    (0, [1, 0, 1]),
    (1, [1, 1, 1]),
    (1, [1, 1, 1]),
    (1, [1, 1, 1]),
    (1, [1, 1, 1]),
    (0, [1, 0, 1]),
];

/// Symbols whose edges admit two local pictures.
pub const TWO_PICTURE_TYPES: [usize; 8] = [6, 9, 17, 20, 28, 31, 39, 42];

pub const HIDDEN_RATIO_TOL: f64 = 1e-6;
pub const RATIO_CONSTANCY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Suite names, indexed by criterion number minus one.
pub const SUITES: [&str; 17] = [
    "parity-table",
    "substitution",
    "closedness",
    "fixed-point",
    "deltas",
    "vector-tables",
    "periodic",
    "return-map",
    "translation",
    "membership",
    "convergence",
    "log-bound",
    "kites",
    "pi4",
    "toy",
    "good-homothety",
    "compatibility",
];

pub fn suite_id(name: &str) -> Option<u8> {
    SUITES.iter().position(|s| *s == name).map(|i| i as u8 + 1).or_else(|| name.parse().ok().filter(|n| (1..=17).contains(n)))
}

/// Runs one check by number; errors become failures.
pub fn run(id: u8) -> Check {
    let t0 = Instant::now();
    let (out, limit) = match id {
        1 => (parity_table(), Some(1.0)),
        2 => (substitution(), None),
        3 => (closedness(), Some(10.0)),
        4 => (fixed_point(), None),
        5 => (deltas(), None),
        6 => (vector_tables(), None),
        7 => (periodic(), Some(60.0)),
        8 => (return_map(), None),
        9 => (translation(), None),
        10 => (membership(), Some(120.0)),
        11 => (convergence(), None),
        12 => (log_bound(), None),
        13 => (kites(), Some(10.0)),
        14 => (pi4(), None),
        15 => (toy(), None),
        16 => (good_homothety(), None),
        17 => (compatibility(), None),
        _ => (Err(Error::Invalid(format!("no check {id}"))), None),
    };
    let seconds = t0.elapsed().as_secs_f64();
    let (mut pass, mut detail) = match out {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(l) = limit {
        if seconds >= l {
            pass = false;
            detail.push_str(&format!("; over the {l} s budget"));
        }
    }
    let name = SUITES.get(id as usize - 1).map(|s| s.to_string()).unwrap_or_default();
    Check { id, name, pass, detail, seconds }
}

pub fn run_all() -> Vec<Check> {
    (1..=17).map(run).collect()
}

type Outcome = Result<(bool, String)>;

fn assignments(d: &OctagonDynamics) -> Result<[VectorAssignment; 4]> {
    let g2 = VectorAssignment::from_dynamics(d, 2)?;
    let g3 = VectorAssignment::from_dynamics(d, 3)?;
    let l2 = VectorAssignment::lambda(&g2);
    let l3 = VectorAssignment::lambda(&g3);
    Ok([g2, g3, l2, l3])
}

fn parity_table() -> Outcome {
    let d = OctagonDynamics::new()?;
    let rows = d.parity_table()?;
    let mut bad = Vec::new();
    for (r, (sigma, steps)) in PRINTED_PARITY.iter().enumerate() {
        let row = &rows[r];
        if row.sigma != *sigma || row.steps != *steps {
            bad.push(format!("row {r}: computed {};{:?} printed {sigma};{steps:?}", row.sigma, row.steps));
        }
    }
    let repeat = (0..11).all(|r| rows[r].sigma == rows[r + 11].sigma && rows[r].steps == rows[r + 11].steps);
    let consistent = rows.iter().filter(|r| r.consistent()).count();
    let detail = format!(
        "{}/11 rows match; second half repeats: {repeat}; {consistent}/22 computed rows satisfy the parity sum{}{}",
        11 - bad.len(),
        if bad.is_empty() { "" } else { "; " },
        bad.join("; ")
    );
    Ok((bad.is_empty() && repeat, detail))
}

fn substitution() -> Outcome {
    let d = OctagonDynamics::new()?;
    let t = SubstitutionTable::standard();
    let mut p = d.atlas.cells[0].centroid();
    let mut bad = Vec::new();
    for k in 1..=6 {
        p = d.theta_inv.apply(&p);
        let want = t.expand(&[0], k);
        let got = d.orbit_code(&p, want.len())?;
        if let Some(i) = got.iter().zip(&want).position(|(a, b)| a != b) {
            bad.push(format!("k={k} differs at {i}"));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "codes equal for k = 1..6 (up to 729 symbols)".into() } else { bad.join("; ") }))
}

fn closedness() -> Outcome {
    let d = OctagonDynamics::new()?;
    let t = SubstitutionTable::standard();
    let [g2, g3, ..] = assignments(&d)?;
    let mut pattern2 = String::new();
    let mut ok = true;
    for k in 1..=8 {
        let w = t.expand(&[0], k);
        let c2 = is_closed(&build_curve(&w, &g2)?);
        let c3 = is_closed(&build_curve(&w, &g3)?);
        ok &= c2 == (k % 2 == 1) && c3;
        pattern2.push(if c2 { 'C' } else { 'o' });
        if !c3 {
            pattern2.push_str(&format!("(G3 open at {k})"));
        }
    }
    Ok((ok, format!("G2 closed pattern k=1..8: {pattern2}; G3 closed for all k: {}", !pattern2.contains("G3"))))
}

fn fixed_point() -> Outcome {
    let d = OctagonDynamics::new()?;
    let t = SubstitutionTable::standard();
    let [_, _, l2, l3] = assignments(&d)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, l) in [("λ2", &l2), ("λ3", &l3)] {
        let r = renorm_operator(&t, l)?;
        let held = (0..SYMBOLS).filter(|&n| !is_octagon_symbol(n)).count() - r.moved.len();
        ok &= r.moved.is_empty() && r.scale.1.is_zero();
        let kind = if r.scale.1.is_zero() { "real" } else { "rotating" };
        parts.push(format!("{name}: {held}/40 fixed, {kind} scale {}", r.scale.0));
    }
    Ok((ok, parts.join("; ")))
}

fn deltas() -> Outcome {
    let d = OctagonDynamics::new()?;
    let t = SubstitutionTable::standard();
    let [g2, g3, l2, l3] = assignments(&d)?;
    let r2 = delta_check(&t, &g2, &l2)?;
    let r3 = delta_check(&t, &g3, &l3)?;
    let detail = format!(
        "family 2: {} unconserved, {} out of range; family 3: {} unconserved, {} out of range",
        r2.unconserved.len(),
        r2.out_of_range.len(),
        r3.unconserved.len(),
        r3.out_of_range.len()
    );
    Ok((r2.ok() && r3.ok(), detail))
}

fn vector_tables() -> Outcome {
    let d = OctagonDynamics::new()?;
    let [g2, g3, ..] = assignments(&d)?;
    let mut want: Vec<(&str, usize, Point2, &VectorAssignment)> = Vec::new();
    for k in 1..=10 {
        want.push(("g2", k, int_pair(G2_LISTED[k - 1]), &g2));
        want.push(("g3", k, quad_pair(G3_LISTED[k - 1]), &g3));
    }
    want.push(("g2", 0, Point2::ints(0, 8), &g2));
    want.push(("g3", 0, Point2::origin(), &g3));
    for (n, v) in [(9, (2, 2)), (25, (-2, 2)), (39, (0, -4))] {
        want.push(("g2", n, int_pair(v), &g2));
    }
    let mut bad = Vec::new();
    for (name, n, v, g) in &want {
        let got = g.get(*n)?;
        if got != v {
            bad.push(format!("{name}({n}): derived {got}, printed {v}"));
        }
    }
    Ok((bad.is_empty(), format!("{}/{} values match{}{}", want.len() - bad.len(), want.len(), if bad.is_empty() { "" } else { "; " }, bad.join("; "))))
}

fn periodic() -> Outcome {
    let d = OctagonDynamics::new()?;
    let mut tested = 0;
    let mut bad = Vec::new();
    for base in [0, 11] {
        let mut p = d.atlas.cells[base].centroid();
        for k in 0..=5u32 {
            let per = 3u64.pow(k);
            let (period, tile) = match d.classify_periodic(&p, 8)? {
                Periodicity::Periodic { period, tile } => (period, tile),
                Periodicity::Unresolved => return Ok((false, format!("O{base} level {k} unresolved"))),
            };
            let brute = d.psi_period(&p, 2 * per as usize)?;
            if period != per || brute != Some(per as usize) {
                bad.push(format!("O{base} level {k}: classified {period}, brute {brute:?}"));
            }
            for q in cell_samples(&tile, 1).into_iter().skip(1) {
                tested += 1;
                if d.psi_period(&q, 2 * per as usize)? != Some(per as usize) {
                    bad.push(format!("O{base} level {k}: sample {q} off period"));
                }
            }
            p = d.theta_inv.apply(&p);
        }
    }
    Ok((bad.is_empty(), format!("periods 1, 3, ..., 243 confirmed for both big octagons; {tested} interior samples{}", if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) })))
}

fn return_map() -> Outcome {
    let d = OctagonDynamics::new()?;
    let table = Table::octagon();
    let s = QuadVal::silver();
    let in_half = |p: &Point2| {
        let v = strip_value(p);
        v > QuadVal::int(-3) && v < QuadVal::one() && p.x > s
    };
    let (mut ok, mut bad, mut skipped) = (0, Vec::new(), 0);
    for k in 1..=3usize {
        for i in 0..90 {
            for j in 0..60 {
                let p = Point2::new(&s + &QuadVal::ratio(i * 4 + 1, 19), QuadVal::ratio(j * 4 - 90, 19));
                if !in_half(&p) || !between_necklaces(&p, k) {
                    continue;
                }
                let Ok((phi, ..)) = d.phi(&p) else {
                    skipped += 1;
                    continue;
                };
                let mut r = p.clone();
                let mut undefined = false;
                for _ in 0..10_000 {
                    match table.phi2(&r) {
                        Ok((x, ..)) => r = x,
                        Err(_) => {
                            undefined = true;
                            break;
                        }
                    }
                    if in_half(&r) {
                        break;
                    }
                }
                if undefined {
                    skipped += 1;
                } else if r == phi {
                    ok += 1;
                } else {
                    bad.push(format!("{p}"));
                }
            }
        }
    }
    let detail = format!("{ok} points agree, {} disagree, {skipped} on undefined lines", bad.len());
    Ok((bad.is_empty() && ok >= 200, detail))
}

/// Ψ-periodic seeds from the renormalized big octagons, with their Φ-periods.
fn periodic_seeds(d: &OctagonDynamics, count: usize) -> Result<Vec<(Point2, usize)>> {
    let mut out: Vec<(Point2, usize)> = Vec::new();
    let mut seen = HashSet::new();
    'outer: for k in 0..=3u32 {
        for base in [0, 11] {
            let mut p = d.atlas.cells[base].centroid();
            for _ in 0..k {
                p = d.theta_inv.apply(&p);
            }
            let per = 3usize.pow(k);
            for _ in 0..per {
                if seen.insert(p.clone()) {
                    out.push((p.clone(), phi_period(d, &p, 2 * per)?));
                    if out.len() == count {
                        break 'outer;
                    }
                }
                p = d.psi(&p)?;
            }
        }
    }
    Ok(out)
}

fn phi_period(d: &OctagonDynamics, p: &Point2, cap: usize) -> Result<usize> {
    let mut q = p.clone();
    for n in 1..=cap {
        q = d.phi(&q)?.0;
        if q == *p {
            return Ok(n);
        }
    }
    Err(Error::OrbitCapExceeded(cap))
}

fn graph(d: &OctagonDynamics, p: &Point2, steps: usize) -> Result<LatticePath> {
    accumulate(&d.sys, p, steps)
}

fn translation() -> Outcome {
    let d = OctagonDynamics::new()?;
    let seeds = periodic_seeds(&d, 20)?;
    let mut bad = Vec::new();
    for (p, per) in &seeds {
        let g = graph(&d, p, *per)?;
        for mu in [1, 2] {
            if graph(&d, &translate_equivalent(p, mu), *per)?.vertices != g.vertices {
                bad.push(format!("{p} μ={mu}"));
            }
        }
    }
    let periods: Vec<usize> = seeds.iter().map(|s| s.1).collect();
    Ok((bad.is_empty() && seeds.len() == 20, format!("{} seeds (Φ-periods {periods:?}), {} mismatches {}", seeds.len(), bad.len(), bad.join(" "))))
}

fn membership() -> Outcome {
    let d = OctagonDynamics::new()?;
    let t = SubstitutionTable::standard();
    let [_, _, l2, l3] = assignments(&d)?;
    let mut parts = Vec::new();
    let mut ok = true;
    for j in [1, 3, 5, 7] {
        let c3 = lambda_curve(&t, &l3, j)?;
        let c2 = lambda_curve(&t, &l2, j)?;
        let m3 = vertex_membership(&c3.points, FractalFamily::I3, MAX_DEPTH)?;
        let m2 = vertex_membership(&c2.points, FractalFamily::I2, MAX_DEPTH)?;
        let (a, b) = (m3.iter().filter(|x| **x).count(), m2.iter().filter(|x| **x).count());
        ok &= a == m3.len() && b == m2.len();
        parts.push(format!("j={j}: Λ3 {a}/{}, Λ2 {b}/{}", m3.len(), m2.len()));
    }
    Ok((ok, parts.join("; ")))
}

fn convergence() -> Outcome {
    let d = OctagonDynamics::new()?;
    let t = SubstitutionTable::standard();
    let [_, _, l2, l3] = assignments(&d)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, l) in [("Λ2", &l2), ("Λ3", &l3)] {
        let curves = [1, 5, 9, 13].iter().map(|&j| lambda_curve_f64(&t, l, j)).collect::<Result<Vec<_>>>()?;
        let ds: Vec<f64> = curves.windows(2).map(|w| curve_distance(&w[0], &w[1])).collect();
        let (r0, r1) = (ds[1] / ds[0], ds[2] / ds[1]);
        let steady = ((r1 - r0) / r1).abs() < RATIO_CONSTANCY_TOL;
        ok &= steady && r1 < 1.0;
        parts.push(format!("{name}: D = {:.6e}, {:.6e}, {:.6e}; ratios {r0:.9}, {r1:.9}", ds[0], ds[1], ds[2]));
    }
    let stated = 1.0 / 3f64.sqrt();
    let expect = format!("1/9 = {:.9}, s^-4 = {:.9}, stated 1/√3 = {stated:.9}", 1.0 / 9.0, (1.0 + 2f64.sqrt()).powi(-4));
    Ok((ok, format!("{}; reference {expect}", parts.join("; "))))
}

fn log_bound() -> Outcome {
    let d = OctagonDynamics::new()?;
    let t = SubstitutionTable::standard();
    let [g2, g3, l2, l3] = assignments(&d)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, l) in [("G2", &g2, &l2), ("G3", &g3, &l3)] {
        let bs = (1..=6).map(|k| vertex_distance_bound(&t, g, l, k)).collect::<Result<Vec<_>>>()?;
        ok &= bs.iter().enumerate().all(|(i, b)| *b <= 4 * (i as i64 + 1));
        parts.push(format!("{name} max offsets k=1..6: {bs:?}"));
    }
    Ok((ok, format!("{} (bound 4k units)", parts.join("; "))))
}

fn kites() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, q, closed) in [(1, 4, true), (4, 17, true), (1, 3, false)] {
        let o = kite_fundamental_orbit(&Kite::new(p, q)?, 100_000)?;
        let path = accumulate(&o.system, &o.points[0], o.points.len())?;
        ok &= path.is_closed() == closed;
        parts.push(format!("{p}/{q}: period {}, {}", o.points.len(), if path.is_closed() { "closed" } else { "open" }));
    }
    Ok((ok, parts.join("; ")))
}

fn pi4() -> Outcome {
    let d = OctagonDynamics::new()?;
    let seeds = periodic_seeds(&d, 20)?;
    let mut flat = 0;
    for (p, per) in &seeds {
        if project(&graph(&d, p, *per)?, 4)?.is_collinear() {
            flat += 1;
        }
    }
    Ok((flat == seeds.len(), format!("{flat}/{} graphs collinear under π4", seeds.len())))
}

fn toy() -> Outcome {
    let sys = ToySystem::new()?;
    let mut agree = 0;
    for p in x_prime_samples(&sys, 100) {
        let lhs = sys.theta_inv.apply(&sys.step(&sys.theta.apply(&p))?);
        if lhs == sys.iterate(&p, 3)? {
            agree += 1;
        }
    }
    let mut periods = Vec::new();
    let mut cascade = true;
    for n in 0..=3 {
        let tiles = sys.periodic_tiles(n)?;
        let want = 3usize.pow(n as u32);
        let mut found = HashSet::new();
        for (tile, _) in &tiles {
            found.insert(sys.period(&tile.centroid(), 2 * want)?);
        }
        cascade &= tiles.len() == want && found.len() == 1 && found.contains(&Some(want));
        periods.push(format!("{found:?}"));
    }
    let cov = crate::toy::coverage_identity(&sys)?.ok();
    Ok((agree == 100 && cascade && cov, format!("renormalization holds on {agree}/100 samples; tile periods by level {}; coverage identity {cov}", periods.join(", "))))
}

fn good_homothety() -> Outcome {
    let d = OctagonDynamics::new()?;
    let t = SubstitutionTable::standard();
    let [_, _, _, l3] = assignments(&d)?;
    let mut tree = ShapeTree::new(FractalFamily::I3);
    let mut maps = Vec::new();
    for j in [5, 9] {
        let c = lambda_curve(&t, &l3, j)?;
        maps.push(patterns_by_type(&mut tree, &c.points, &t.expand(&[0], j))?);
    }
    let present5 = (0..SYMBOLS).filter(|&n| !is_octagon_symbol(n)).all(|n| maps[0].contains_key(&n));
    let mut differ = Vec::new();
    for (n, pats) in &maps[1] {
        if maps[0].get(n) != Some(pats) {
            differ.push(*n);
        }
    }
    differ.sort();
    let mut two: Vec<usize> = maps[0].iter().filter(|(_, v)| v.len() > 1).map(|(k, _)| *k).collect();
    two.sort();
    // Same symbol, same λ vector: the edge scale is s^-4 over four steps.
    let scale = QuadVal::silver().pow(4).inv()?;
    let r = hidden_symmetry_check(&HiddenPair::snowflake(), 4);
    let want = 2f64.sqrt() - 1.0;
    let tail_ok = r.ratios[1..].iter().all(|x| (x - want).abs() < HIDDEN_RATIO_TOL);
    let detail = format!(
        "{} types in Λ3(5), {} in Λ3(9), all 40 present: {present5}; differing patterns {differ:?}; two-picture types {two:?}; edge scale {} = (√2-1)^4; hidden-symmetry ratios {:?}",
        maps[0].len(),
        maps[1].len(),
        scale,
        r.ratios
    );
    Ok((present5 && differ.is_empty() && two == TWO_PICTURE_TYPES && tail_ok, detail))
}

fn compatibility() -> Outcome {
    let d = OctagonDynamics::new()?;
    let t = SubstitutionTable::standard();
    let [_, _, l2, l3] = assignments(&d)?;
    let mut tree = ShapeTree::new(FractalFamily::I3);
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [1, 3, 5] {
        let a = lambda_curve(&t, &l3, n)?.points;
        let b = lambda_curve(&t, &l2, n)?.points;
        let mut good = Vec::with_capacity(a.len());
        for (v3, v2) in a.iter().zip(&b) {
            let hits = tree.locate(v3, PointRole::Special, MAX_DEPTH)?;
            good.push(hits.iter().any(|h| shape_at(FractalFamily::I2, &h.path).special() == *v2));
        }
        let edges = good.windows(2).filter(|w| w[0] && w[1]).count();
        ok &= edges == a.len() - 1;
        parts.push(format!("n={n}: {edges}/{} edges", a.len() - 1));
    }
    Ok((ok, parts.join("; ")))
}
