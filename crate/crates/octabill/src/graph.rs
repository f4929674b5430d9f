//! Arithmetic graphs: lattice lifts of pinwheel orbits and their projections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QuadVal;
use crate::geom::{omega, Point2};
use crate::pinwheel::PinwheelSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePath {
    pub dimension: usize,
    pub vertices: Vec<Vec<i64>>,
    /// Exponent vectors of each pinwheel step, kept so codes can be rebuilt.
    pub steps: Vec<Vec<i64>>,
}

impl LatticePath {
    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarPolyline {
    pub points: Vec<Point2>,
}

impl PlanarPolyline {
    pub fn is_closed(&self) -> bool {
        self.points.len() > 1 && self.points.first() == self.points.last()
    }

    /// True when every point lies on one line.
    pub fn is_collinear(&self) -> bool {
        let Some(a) = self.points.first() else { return true };
        let Some(b) = self.points.iter().find(|p| *p != a) else { return true };
        let d = b - a;
        self.points.iter().all(|p| d.cross(&(p - a)).is_zero())
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| p.to_f64()).collect()
    }
}

/// The Z^n increment `Σ m_k Ṽ_k`; `m[i]` belongs to triple `(i+1) mod 2n`.
pub fn lift_step(sys: &PinwheelSystem, m: &[i64]) -> Vec<i64> {
    let k = sys.triples.len();
    let mut out = vec![0; sys.n()];
    for (i, mi) in m.iter().enumerate() {
        let (a, b) = sys.triples[(i + 1) % k].lift;
        out[a] += 2 * mi;
        out[b] -= 2 * mi;
    }
    out
}

/// Lattice path of the first `steps` pinwheel steps from `p`.
pub fn accumulate(sys: &PinwheelSystem, p: &Point2, steps: usize) -> Result<LatticePath> {
    let mut cur = vec![0; sys.n()];
    let mut vertices = vec![cur.clone()];
    let mut ms = Vec::with_capacity(steps);
    let mut p = p.clone();
    for _ in 0..steps {
        let (q, m) = sys.step(&p)?;
        for (c, d) in cur.iter_mut().zip(lift_step(sys, &m)) {
            *c += d;
        }
        vertices.push(cur.clone());
        ms.push(m);
        p = q;
    }
    Ok(LatticePath { dimension: sys.n(), vertices, steps: ms })
}

/// Image of `e_j` under `π_k` for an n-gon, `n ∈ {4, 8}`.
pub fn basis_image(n: usize, k: usize, j: usize) -> Result<Point2> {
    match n {
        8 => Ok(omega((k * j) as i64)),
        4 => Ok(omega((2 * k * j) as i64)),
        _ => Err(Error::Invalid(format!("exact projection needs n = 4 or 8, got {n}"))),
    }
}

pub fn project_vector(x: &[i64], k: usize) -> Result<Point2> {
    let mut s = Point2::origin();
    for (j, xj) in x.iter().enumerate() {
        if *xj != 0 {
            s = s + basis_image(x.len(), k, j)?.scale(&QuadVal::int(*xj));
        }
    }
    Ok(s)
}

/// `π_k(X) = Σ x_j ω^{kj}` applied to every vertex.
pub fn project(path: &LatticePath, k: usize) -> Result<PlanarPolyline> {
    if k == 0 || k >= path.dimension {
        return Err(Error::Invalid(format!("projection index {k} out of range")));
    }
    let points = path.vertices.iter().map(|v| project_vector(v, k)).collect::<Result<_>>()?;
    Ok(PlanarPolyline { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pinwheel::octagon_triples;

    #[test]
    fn zero_lift() {
        let sys = octagon_triples();
        assert_eq!(lift_step(&sys, &[0; 16]), vec![0; 8]);
    }

    #[test]
    fn opposite_lifts() {
        // With sixteen triples the cancelling even pairs sit eight apart.
        let sys = octagon_triples();
        let neg = |v: Vec<i64>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
        for k in (0..8).step_by(2) {
            assert_eq!(sys.lift_vector(k + 8), neg(sys.lift_vector(k)));
        }
        let mut even = vec![0; 8];
        for k in (0..16).step_by(2) {
            for (e, x) in even.iter_mut().zip(sys.lift_vector(k)) {
                *e += x;
            }
        }
        assert_eq!(even, vec![0; 8]);
    }

    #[test]
    fn lifts_project_to_drifts() {
        let sys = octagon_triples();
        for k in 0..16 {
            assert_eq!(project_vector(&sys.lift_vector(k), 1).unwrap(), sys.triples[k].v);
            let p2 = project_vector(&sys.lift_vector(k), 2).unwrap();
            assert!(p2.x.is_integer() && p2.y.is_integer());
            assert!(p2.x.rational_part().numer() % 2 == 0.into() && p2.y.rational_part().numer() % 2 == 0.into());
        }
    }

    #[test]
    fn trivial_paths() {
        let sys = octagon_triples();
        let p = Point2::new("1/3+2*r2".parse().unwrap(), "1".parse().unwrap());
        let path = accumulate(&sys, &p, 0).unwrap();
        assert_eq!(path.vertices, vec![vec![0; 8]]);
        let pl = project(&path, 2).unwrap();
        assert_eq!(pl.points, vec![Point2::origin()]);
    }
}
