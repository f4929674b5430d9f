//! Pinwheel strips, drift vectors, and the pinwheel map Φ.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::billiards::Table;
use crate::error::{Error, Result};
use crate::field::QuadVal;
use crate::geom::{omega, small, strip_map, OrientedLine, Point2, Pointed, Strip, Vec2};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripTriple {
    pub strip: Strip,
    pub v: Vec2,
    /// `V = 2(v_i - v_j)` for `(i, j)`.
    pub lift: (usize, usize),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PinwheelSystem {
    pub table: Table,
    pub triples: Vec<StripTriple>,
}

impl PinwheelSystem {
    /// Number of table vertices.
    pub fn n(&self) -> usize {
        self.table.vertices().len()
    }

    /// Renumbers the triples so that `start` becomes index 0.
    pub fn rotated(&self, start: usize) -> Self {
        let k = self.triples.len();
        let triples = (0..k).map(|i| self.triples[(start + i) % k].clone()).collect();
        PinwheelSystem { table: self.table.clone(), triples }
    }

    /// The lattice lift `2(e_i - e_j)` of triple `k`.
    pub fn lift_vector(&self, k: usize) -> Vec<i64> {
        let mut out = vec![0; self.n()];
        let (i, j) = self.triples[k].lift;
        out[i] += 2;
        out[j] -= 2;
        out
    }

    /// Φ(p) and the exponents `m_1..m_{2n}`, applying triples 1, 2, …, 2n-1 and then 0.
    pub fn step(&self, p: &Point2) -> Result<(Point2, Vec<i64>)> {
        let k = self.triples.len();
        let mut p = p.clone();
        let mut ms = Vec::with_capacity(k);
        for i in 1..=k {
            let t = &self.triples[i % k];
            let (q, m) = strip_map(&t.strip, &t.v, &p)?;
            ms.push(small(&m));
            p = q;
        }
        Ok((p, ms))
    }

    /// True when `p` is strictly inside Σ₀.
    pub fn in_domain(&self, p: &Point2) -> bool {
        self.triples[0].strip.contains(p)
    }
}

fn line(i: i64, j: i64, refl: Option<i64>) -> OrientedLine {
    let l = OrientedLine::through(&omega(i), &omega(j));
    match refl {
        Some(k) => l.reflect_through(&omega(k)),
        None => l,
    }
}

/// The sixteen explicit triples of the regular octagon with vertices `ω^k`.
pub fn octagon_triples() -> PinwheelSystem {
    let two = QuadVal::int(2);
    let triples = (0..16)
        .map(|k| {
            let m = (k / 2) as i64;
            let (l, o, v, lift) = if k % 2 == 0 {
                // L = (6+m)(2+m,3+m), other = (2+m,3+m), V = -[2+m, 6+m]
                let v = (omega(2 + m) - omega(6 + m)).scale(&two);
                (line(2 + m, 3 + m, Some(6 + m)), line(2 + m, 3 + m, None), v, (2 + m, 6 + m))
            } else {
                // L = (6+m,7+m), other = (3+m)(6+m,7+m), V = [6+m, 3+m]
                let v = (omega(3 + m) - omega(6 + m)).scale(&two);
                (line(6 + m, 7 + m, None), line(6 + m, 7 + m, Some(3 + m)), v, (3 + m, 6 + m))
            };
            StripTriple {
                strip: Strip::new(l, o, Pointed::A).expect("octagon strips are proper"),
                v,
                lift: (lift.0.rem_euclid(8) as usize, lift.1.rem_euclid(8) as usize),
            }
        })
        .collect();
    PinwheelSystem { table: Table::octagon(), triples }
}

fn half(d: &Vec2) -> u8 {
    if d.y.signum() > 0 || (d.y.is_zero() && d.x.signum() > 0) {
        0
    } else {
        1
    }
}

fn by_angle(a: &OrientedLine, b: &OrientedLine) -> Ordering {
    half(&a.dir).cmp(&half(&b.dir)).then_with(|| match a.dir.cross(&b.dir).signum() {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        // Same direction: order by signed offset from the origin.
        _ => a.dir.cross(&a.anchor).cmp(&a.dir.cross(&b.anchor)),
    })
}

/// Builds the 2n pointed strips of a convex table from far-away samples of φ².
pub fn build_pinwheel(table: &Table) -> Result<PinwheelSystem> {
    let vs = table.vertices();
    let n = vs.len();
    let far = QuadVal::int(1_000_000);
    let eps = QuadVal::ratio(1, 1_000_000);
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let a = &vs[i];
        let d = &vs[(i + 1) % n] - a;
        let nrm = d.perp();
        let nn = d.norm2();
        let h = vs.iter().map(|u| d.cross(&(u - a))).max().expect("nonempty table");
        let edge = OrientedLine::new(a.clone(), d.clone());
        let far_anchor = a + &nrm.scale(&(&h * &QuadVal::int(2) / &nn));
        let far_line = OrientedLine::new(far_anchor.clone(), -&d);
        // Samples sit just outside the pointed line, far along it.
        for pointed_far in [false, true] {
            let (l, o, sample) = if pointed_far {
                let p = &far_anchor - &d.scale(&far) + nrm.scale(&(&eps / &nn));
                (far_line.clone(), edge.clone(), p)
            } else {
                let p = a + &d.scale(&far) - nrm.scale(&(&eps / &nn));
                (edge.clone(), far_line.clone(), p)
            };
            let (r, vi, wi) = table.phi2(&sample)?;
            let v = &r - &sample;
            if d.cross(&v).abs() != &h * &QuadVal::int(2) {
                return Err(Error::ConstructionAmbiguous(format!("drift of edge {i} does not span its strip")));
            }
            if (&vs[wi] - &vs[vi]).scale(&QuadVal::int(2)) != v {
                return Err(Error::ConstructionAmbiguous(format!("no vertex pair lifts the drift of edge {i}")));
            }
            out.push(StripTriple { strip: Strip::new(l, o, Pointed::A)?, v, lift: (wi, vi) });
        }
    }
    out.sort_by(|a, b| by_angle(a.strip.lines().0, b.strip.lines().0));
    Ok(PinwheelSystem { table: table.clone(), triples: out })
}

/// Areas of consecutive strip intersections; `None` for parallel pairs.
pub fn quasi_rational_check(sys: &PinwheelSystem) -> Vec<Option<QuadVal>> {
    let k = sys.triples.len();
    (0..k).map(|i| sys.triples[i].strip.meet_area(&sys.triples[(i + 1) % k].strip)).collect()
}

/// Same strip and pointing, possibly with different anchors and direction lengths.
pub fn same_pointed_strip(a: &Strip, b: &Strip) -> bool {
    let same_line = |x: &OrientedLine, y: &OrientedLine| {
        x.dir.cross(&y.dir).is_zero() && x.dir.dot(&y.dir).signum() > 0 && x.side_of(&y.anchor) == 0
    };
    let (la, oa) = a.lines();
    let (lb, ob) = b.lines();
    same_line(la, lb) && oa.dir.cross(&ob.dir).is_zero() && oa.side_of(&ob.anchor) == 0
}
