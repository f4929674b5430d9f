//! The outer billiards map, necklaces of octagons, and rational kites.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QuadVal;
use crate::geom::{ConvexPolygon, Point2};
use crate::pinwheel::{build_pinwheel, PinwheelSystem};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Mode {
    Exact,
    Approximate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table {
    pub polygon: ConvexPolygon,
    pub mode: Mode,
}

impl Table {
    pub fn exact(polygon: ConvexPolygon) -> Self {
        Table { polygon: ConvexPolygon::ccw(polygon.vertices), mode: Mode::Exact }
    }

    /// The regular octagon with vertices `ω^k`.
    pub fn octagon() -> Self {
        Table::exact(ConvexPolygon::octagon(&Point2::origin(), &QuadVal::one()))
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.polygon.vertices
    }

    /// Index of the supporting vertex for `p`: the table lies to the right of the ray to it.
    pub fn support(&self, p: &Point2) -> Result<usize> {
        if self.polygon.contains(p) {
            return Err(Error::InsideTable);
        }
        let vs = self.vertices();
        let mut found = None;
        for (i, v) in vs.iter().enumerate() {
            let d = v - p;
            let mut ok = true;
            let mut touch = false;
            for (j, u) in vs.iter().enumerate() {
                if j == i {
                    continue;
                }
                match d.cross(&(u - p)).signum() {
                    1 => {
                        ok = false;
                        break;
                    }
                    0 => touch = true,
                    _ => {}
                }
            }
            if ok {
                if touch {
                    return Err(Error::UndefinedOnLine);
                }
                found = Some(i);
            }
        }
        found.ok_or(Error::UndefinedOnLine)
    }

    /// φ(p) = 2v - p together with the vertex index.
    pub fn ob_map(&self, p: &Point2) -> Result<(Point2, usize)> {
        let i = self.support(p)?;
        Ok((self.vertices()[i].scale(&QuadVal::int(2)) - p, i))
    }

    /// φ²(p) and the two vertex indices used.
    pub fn phi2(&self, p: &Point2) -> Result<(Point2, usize, usize)> {
        let (q, i) = self.ob_map(p)?;
        let (r, j) = self.ob_map(&q)?;
        Ok((r, i, j))
    }

    /// Inverse of φ: reflect through the vertex that sees the table on the left.
    pub fn ob_map_inv(&self, p: &Point2) -> Result<Point2> {
        let mirrored = Table::exact(self.polygon.map(|v| Point2::new(-&v.x, v.y.clone())));
        let pm = Point2::new(-&p.x, p.y.clone());
        let (q, _) = mirrored.ob_map(&pm)?;
        Ok(Point2::new(-&q.x, q.y))
    }
}

/// Centres of the octagons in necklace `N_k`, listed counterclockwise.
pub fn necklace_centers(k: usize) -> Vec<Point2> {
    let base = Point2::new(QuadVal::silver(), QuadVal::one());
    let k = k as i64;
    let mut out = Vec::new();
    for n in 0..8 {
        let a = base.rot45(n);
        let b = base.rot45(n + 1);
        for j in 0..k {
            out.push(a.scale(&QuadVal::int(k - j)) + b.scale(&QuadVal::int(j)));
        }
    }
    out
}

/// The octagon tiles of necklace `N_k`.
pub fn necklace_tiles(k: usize) -> Vec<ConvexPolygon> {
    let p = ConvexPolygon::octagon(&Point2::origin(), &QuadVal::one());
    necklace_centers(k).iter().map(|c| p.translate(c)).collect()
}

/// The kite with vertices (-1,0), (0,-1), (A,0), (0,1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kite {
    pub a: BigRational,
}

impl Kite {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::DivisionByZero);
        }
        let a = BigRational::new(BigInt::from(p), BigInt::from(q));
        if !a.is_positive() || a >= BigRational::from_integer(BigInt::from(1)) {
            return Err(Error::Invalid(format!("kite parameter {p}/{q} outside (0,1)")));
        }
        Ok(Kite { a })
    }

    pub fn table(&self) -> Table {
        let a = QuadVal::from_rational(self.a.clone());
        Table::exact(ConvexPolygon::new(vec![
            Point2::ints(-1, 0),
            Point2::ints(0, -1),
            Point2::new(a, QuadVal::zero()),
            Point2::ints(0, 1),
        ]))
    }

    /// The fundamental point (1/q, 1).
    pub fn fundamental_point(&self) -> Point2 {
        let q = self.a.denom().clone();
        Point2::new(QuadVal::from_rational(BigRational::new(BigInt::from(1), q)), QuadVal::one())
    }
}

/// A periodic pinwheel orbit of a kite, with the system it was computed in.
#[derive(Clone, Debug)]
pub struct KiteOrbit {
    pub system: PinwheelSystem,
    pub points: Vec<Point2>,
    pub exponents: Vec<Vec<i64>>,
}

/// Runs the pinwheel map from the fundamental point until it returns.
pub fn kite_fundamental_orbit(kite: &Kite, cap: usize) -> Result<KiteOrbit> {
    let sys = build_pinwheel(&kite.table())?;
    let p0 = kite.fundamental_point();
    let start = sys
        .triples
        .iter()
        .position(|t| t.strip.contains(&p0))
        .ok_or(Error::OutsideDomain)?;
    let sys = sys.rotated(start);
    let mut points = vec![p0.clone()];
    let mut exponents = Vec::new();
    let mut p = p0.clone();
    for _ in 0..cap {
        let (q, m) = sys.step(&p)?;
        exponents.push(m);
        if q == p0 {
            return Ok(KiteOrbit { system: sys, points, exponents });
        }
        points.push(q.clone());
        p = q;
    }
    Err(Error::OrbitCapExceeded(cap))
}

/// Outer billiards on a regular n-gon in floating point. Exploration only.
#[derive(Clone, Debug)]
pub struct ApproxTable {
    pub vertices: Vec<(f64, f64)>,
}

impl ApproxTable {
    pub fn regular(n: usize) -> Self {
        let vertices = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                (t.cos(), t.sin())
            })
            .collect();
        ApproxTable { vertices }
    }

    pub fn ob_map(&self, p: (f64, f64)) -> Option<(f64, f64)> {
        let cr = |a: (f64, f64), b: (f64, f64)| a.0 * b.1 - a.1 * b.0;
        self.vertices.iter().find_map(|&v| {
            let d = (v.0 - p.0, v.1 - p.1);
            let ok = self.vertices.iter().all(|&u| u == v || cr(d, (u.0 - p.0, u.1 - p.1)) < 0.0);
            ok.then_some((2.0 * v.0 - p.0, 2.0 * v.1 - p.1))
        })
    }
}

/// True when `p` lies strictly between the rings of octagons `N_k` and `N_{k+1}`, `k ≥ 1`.
///
/// Consecutive tiles of a necklace share an edge, so each ring covers the
/// boundary of the octagon through its centres and separates the plane.
pub fn between_necklaces(p: &Point2, k: usize) -> bool {
    let hull = |k: usize| {
        let base = Point2::new(QuadVal::silver(), QuadVal::one()).scale(&QuadVal::int(k as i64));
        ConvexPolygon::new((0..8).map(|n| base.rot45(n)).collect())
    };
    if necklace_tiles(k).iter().chain(necklace_tiles(k + 1).iter()).any(|t| t.contains(p)) {
        return false;
    }
    !hull(k).contains(p) && hull(k + 1).contains_strict(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadVal {
        s.parse().unwrap()
    }

    #[test]
    fn square_table_brute_force() {
        let t = Table::exact(ConvexPolygon::new(vec![Point2::ints(0, 0), Point2::ints(1, 0), Point2::ints(1, 1), Point2::ints(0, 1)]));
        let p = Point2::new(QuadVal::int(2), QuadVal::ratio(1, 3));
        let (img, i) = t.ob_map(&p).unwrap();
        // Brute force: the unique vertex with the table on the right of p -> 2v - p.
        let hits: Vec<usize> = (0..4)
            .filter(|&j| {
                let v = &t.vertices()[j];
                t.vertices().iter().all(|u| (v - &p).cross(&(u - &p)).signum() <= 0)
            })
            .collect();
        assert_eq!(hits, vec![i]);
        assert_eq!(img, t.vertices()[i].scale(&QuadVal::int(2)) - &p);
        assert_eq!(t.ob_map_inv(&img).unwrap(), p);
        assert_eq!(t.ob_map(&Point2::ints(2, 0)), Err(Error::UndefinedOnLine));
        assert_eq!(t.ob_map(&Point2::new(QuadVal::ratio(1, 2), QuadVal::ratio(1, 2))), Err(Error::InsideTable));
    }

    #[test]
    fn necklace_one() {
        let cs = necklace_centers(1);
        assert_eq!(cs.len(), 8);
        assert!(cs.contains(&Point2::new(QuadVal::silver(), QuadVal::one())));
        assert!(cs.contains(&Point2::new(QuadVal::silver(), QuadVal::int(-1))));
    }

    #[test]
    fn necklaces_are_orbits() {
        let t = Table::octagon();
        for k in 1..=3 {
            let cs = necklace_centers(k);
            let off = Point2::new(q("1/7"), q("1/11"));
            for c in &cs {
                let (img, _, _) = t.phi2(c).unwrap();
                assert!(cs.contains(&img), "k={k}");
                let (img2, _, _) = t.phi2(&(c + &off)).unwrap();
                assert_eq!(img2, &img + &off);
            }
        }
    }

    #[test]
    fn buffers_stay_between() {
        let t = Table::octagon();
        let mut p = Point2::new(q("3/2+3/2*r2"), q("1/9"));
        assert!(between_necklaces(&p, 1));
        for _ in 0..200 {
            p = t.ob_map(&p).unwrap().0;
            assert!(between_necklaces(&p, 1));
        }
    }

    #[test]
    fn kite_orbits() {
        let o = kite_fundamental_orbit(&Kite::new(1, 4).unwrap(), 10_000).unwrap();
        assert_eq!(o.points.len(), 7);
        assert!(Kite::new(3, 2).is_err());
        assert_eq!(Kite::new(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn approx_pentagon() {
        let t = ApproxTable::regular(5);
        let p = (3.0, 0.1);
        let q = t.ob_map(p).unwrap();
        assert!((q.0 * q.0 + q.1 * q.1).sqrt() > 1.0);
    }
}
