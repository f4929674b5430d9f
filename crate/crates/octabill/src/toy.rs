//! A two-piece exchange on a dart-shaped region, renormalizable with period 3.
//!
//! X is the union of the triangles A₁ = {x < 1, y < 1, x + y > -√2} and
//! B₁ = {x > 1, y < 1, x - y < √2}. The map turns A₁ by 135° clockwise about
//! the origin and B₁ by 45° counterclockwise about (2 + √2, -√2). The octagon
//! O inscribed in A₁ is invariant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QuadVal;
use crate::geom::{signed_area, ConvexPolygon, OrientedLine, Point2, Similarity};

#[derive(Clone, Debug)]
pub struct ToySystem {
    pub a1: ConvexPolygon,
    pub b1: ConvexPolygon,
    pub phi_a: Similarity,
    pub phi_b: Similarity,
    /// Θ: X′ → X.
    pub theta: Similarity,
    pub theta_inv: Similarity,
    /// The invariant octagon O.
    pub octagon: ConvexPolygon,
}

fn r2() -> QuadVal {
    QuadVal::sqrt2()
}

impl ToySystem {
    pub fn new() -> Result<Self> {
        let s = QuadVal::silver();
        let one = QuadVal::one();
        let a1 = ConvexPolygon::ccw(vec![Point2::new(-&s, one.clone()), Point2::ints(1, 1), Point2::new(one.clone(), -&s)]);
        let b1 = ConvexPolygon::ccw(vec![Point2::ints(1, 1), Point2::new(s.clone(), one.clone()), Point2::new(one.clone(), &one - &r2())]);
        let cb = Point2::new(QuadVal::ints(2, 1), -r2());
        let h = QuadVal::half_sqrt2();
        // Reflection in the line through P₁ = (-s, 1) at -22.5°, then scaling by s.
        let p1 = Point2::new(-&s, one.clone());
        let m = [[&s * &h, -&(&s * &h)], [-&(&s * &h), -&(&s * &h)]];
        let lin = Similarity { m, t: Point2::origin() };
        let theta = Similarity { t: &p1 - &lin.apply(&p1), ..lin };
        let theta_inv = theta.inverse()?;
        // Inradius 1, edges on x = ±1, y = ±1 and the diagonals.
        let t = QuadVal::ints(-1, 1);
        let octagon = ConvexPolygon::ccw(vec![
            Point2::new(one.clone(), -&t),
            Point2::new(one.clone(), t.clone()),
            Point2::new(t.clone(), one.clone()),
            Point2::new(-&t, one.clone()),
            Point2::new(-&one, t.clone()),
            Point2::new(-&one, -&t),
            Point2::new(-&t, -&one),
            Point2::new(t.clone(), -&one),
        ]);
        Ok(ToySystem {
            a1,
            b1,
            phi_a: Similarity::rotation45(-3, &Point2::origin()),
            phi_b: Similarity::rotation45(1, &cb),
            theta,
            theta_inv,
            octagon,
        })
    }

    /// Vertices of X, counterclockwise.
    pub fn region(&self) -> Vec<Point2> {
        let s = QuadVal::silver();
        let one = QuadVal::one();
        vec![Point2::new(-&s, one.clone()), Point2::new(one.clone(), -&s), Point2::new(one.clone(), &one - &r2()), Point2::new(s, one)]
    }

    pub fn step(&self, p: &Point2) -> Result<Point2> {
        if self.a1.contains_strict(p) {
            Ok(self.phi_a.apply(p))
        } else if self.b1.contains_strict(p) {
            Ok(self.phi_b.apply(p))
        } else if self.a1.contains(p) || self.b1.contains(p) {
            Err(Error::OnCellBoundary)
        } else {
            Err(Error::OutsideDomain)
        }
    }

    pub fn iterate(&self, p: &Point2, n: usize) -> Result<Point2> {
        (0..n).try_fold(p.clone(), |q, _| self.step(&q))
    }

    /// Brute-force period of `p`, up to `cap`.
    pub fn period(&self, p: &Point2, cap: usize) -> Result<Option<usize>> {
        let mut q = p.clone();
        for n in 1..=cap {
            q = self.step(&q)?;
            if q == *p {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// X′ = Θ⁻¹(X) as two triangles.
    pub fn x_prime(&self) -> Vec<ConvexPolygon> {
        vec![self.theta_inv.apply_polygon(&self.a1), self.theta_inv.apply_polygon(&self.b1)]
    }

    /// Pushes convex pieces through one step, splitting them on the line x = 1.
    pub fn push_pieces(&self, pieces: &[ConvexPolygon]) -> Result<Vec<ConvexPolygon>> {
        let cut = OrientedLine::new(Point2::ints(1, 0), Point2::ints(0, 1));
        let mut out = Vec::new();
        for p in pieces {
            let (left, right) = p.clip(&cut);
            for q in left.into_iter().chain(right) {
                let c = q.centroid();
                let f = if self.a1.contains_strict(&c) {
                    &self.phi_a
                } else if self.b1.contains_strict(&c) {
                    &self.phi_b
                } else {
                    return Err(Error::OutsideDomain);
                };
                out.push(f.apply_polygon(&q));
            }
        }
        Ok(out)
    }

    /// Tiles of generation `n`, each with tile-period 3ⁿ.
    pub fn periodic_tiles(&self, n: usize) -> Result<Vec<(ConvexPolygon, u64)>> {
        let mut base = self.octagon.clone();
        for _ in 0..n {
            base = self.theta_inv.apply_polygon(&base);
        }
        let period = 3u64.pow(n as u32);
        let mut out = Vec::new();
        let mut cur = vec![base];
        for _ in 0..period {
            // Generation-n tiles never straddle x = 1.
            if cur.len() != 1 {
                return Err(Error::Invalid("tile split by the exchange".into()));
            }
            out.push((cur[0].clone(), period));
            cur = self.push_pieces(&cur)?;
        }
        // The last image is the original tile again, but only the first 3ⁿ count.
        out.truncate(period as usize);
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverageReport {
    pub area_x: QuadVal,
    pub area_o: QuadVal,
    pub area_pieces: QuadVal,
    /// Pairs of pieces (or a piece and O) whose interiors meet.
    pub overlaps: usize,
}

impl CoverageReport {
    pub fn ok(&self) -> bool {
        self.overlaps == 0 && &self.area_x - &self.area_o == self.area_pieces
    }
}

/// Checks X - O = X′ ∪ φ(X′) ∪ φ²(X′) by exact areas and pairwise disjointness.
pub fn coverage_identity(sys: &ToySystem) -> Result<CoverageReport> {
    let mut all = Vec::new();
    let mut cur = sys.x_prime();
    for _ in 0..3 {
        all.extend(cur.iter().cloned());
        cur = sys.push_pieces(&cur)?;
    }
    let area_pieces = all.iter().fold(QuadVal::zero(), |a, p| a + p.area());
    let mut overlaps = 0;
    for i in 0..all.len() {
        if all[i].interiors_meet(&sys.octagon) {
            overlaps += 1;
        }
        for j in i + 1..all.len() {
            if all[i].interiors_meet(&all[j]) {
                overlaps += 1;
            }
        }
    }
    Ok(CoverageReport { area_x: signed_area(&sys.region()), area_o: sys.octagon.area(), area_pieces, overlaps })
}

/// Deterministic interior points of X′.
pub fn x_prime_samples(sys: &ToySystem, count: usize) -> Vec<Point2> {
    let tris = sys.x_prime();
    (0..count)
        .map(|i| {
            let t = &tris[i % 2].vertices;
            // Barycentric weights from a low-discrepancy rational sequence.
            let u = QuadVal::ratio(((i * 37) % 97 + 1) as i64, 100);
            let v = QuadVal::ratio(((i * 53) % 89 + 1) as i64, 100);
            let (u, v) = if &u + &v >= QuadVal::one() { (&QuadVal::one() - &u, &QuadVal::one() - &v) } else { (u, v) };
            // Pull away from the edges.
            let (k, c) = (QuadVal::ratio(9, 10), QuadVal::ratio(1, 30));
            let (u, v) = (&(&u * &k) + &c, &(&v * &k) + &c);
            &t[0] + &(&(&t[1] - &t[0]).scale(&u) + &(&t[2] - &t[0]).scale(&v))
        })
        .collect()
}
