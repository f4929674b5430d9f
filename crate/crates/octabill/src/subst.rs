//! The 44-symbol substitution, its vector assignments, and the curves they draw.
//!
//! Symbol `r + 22·σ` names region `B_r` of the compressed system together with
//! an accumulated parity σ. A word of symbols becomes a polyline once each
//! symbol is assigned a vector.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QuadVal;
use crate::geom::{Point2, Vec2};
use crate::graph::{project_vector, PlanarPolyline};
use crate::octagon::{OctagonDynamics, REGIONS};

pub const SYMBOLS: usize = 2 * REGIONS;

/// Rows 0..10; the other 33 follow from the two involutions.
pub const BASE_ROWS: [[usize; 3]; 11] = [
    [9, 25, 39],
    [10, 14, 5],
    [10, 12, 17],
    [10, 12, 16],
    [9, 23, 27],
    [8, 36, 28],
    [8, 35, 17],
    [9, 24, 6],
    [9, 26, 6],
    [9, 26, 7],
    [9, 25, 40],
];

/// Listed family-2 vectors for symbols 1..10.
pub const G2_LISTED: [(i64, i64); 10] = [(6, 2), (2, -2), (2, -2), (-4, 4), (-6, 2), (0, -4), (2, 6), (4, 4), (2, 2), (-2, 6)];

/// Listed family-3 vectors `(a, b, c, d) = (a + b√2, c + d√2)` for symbols 1..10.
pub const G3_LISTED: [(i64, i64, i64, i64); 10] = [
    (0, -1, -2, -1),
    (2, 1, 0, -1),
    (2, 1, 0, -1),
    (-2, -2, 2, 0),
    (-2, -1, 0, -1),
    (0, 0, 0, -2),
    (-2, -1, 4, 1),
    (-2, -2, 2, 0),
    (-2, -1, 0, -1),
    (0, -1, 2, 1),
];

pub const L2_LISTED: [(i64, i64); 10] = [(6, 2), (3, -3), (2, -2), (-3, 3), (-6, 2), (-3, -1), (3, 5), (5, 3), (3, 1), (-2, 6)];

pub const L3_LISTED: [(i64, i64, i64, i64); 10] = [
    (0, -1, -2, -1),
    (2, 1, -2, -1),
    (2, 1, 0, -1),
    (-2, -2, 0, 0),
    (-2, -1, 0, -1),
    (0, 0, -2, -2),
    (-2, -1, 2, 1),
    (-2, -2, 0, 0),
    (-2, -1, -2, -1),
    (0, -1, 2, 1),
];

/// n ↦ n ± 11, with + on 0..10 and 22..32.
pub fn iota11(n: usize) -> usize {
    if n % REGIONS < 11 {
        n + 11
    } else {
        n - 11
    }
}

/// n ↦ n ± 22.
pub fn iota22(n: usize) -> usize {
    (n + REGIONS) % SYMBOLS
}

/// The four big-octagon symbols.
pub fn is_octagon_symbol(n: usize) -> bool {
    n % 11 == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionTable {
    pub rows: Vec<[usize; 3]>,
}

impl SubstitutionTable {
    /// The table spanned by [`BASE_ROWS`] under both involutions.
    pub fn standard() -> Self {
        let mut rows = vec![[0; 3]; SYMBOLS];
        for (n, row) in BASE_ROWS.iter().enumerate() {
            for (m, f) in [(n, 0u8), (n + 11, 1), (n + 22, 2), (n + 33, 3)] {
                rows[m] = row.map(|x| match f {
                    0 => x,
                    1 => iota11(x),
                    2 => iota22(x),
                    _ => iota22(iota11(x)),
                });
            }
        }
        SubstitutionTable { rows }
    }

    /// Reads every row off the renormalized octagon dynamics.
    pub fn from_dynamics(d: &OctagonDynamics) -> Result<Self> {
        let rows = (0..SYMBOLS).into_par_iter().map(|n| d.subst_row(n)).collect::<Result<_>>()?;
        Ok(SubstitutionTable { rows })
    }

    pub fn expand(&self, word: &[usize], steps: usize) -> Vec<usize> {
        let mut w = word.to_vec();
        for _ in 0..steps {
            w = w.iter().flat_map(|&n| self.rows[n]).collect();
        }
        w
    }

    /// Symbols whose row does not commute with `f`.
    pub fn equivariance_failures(&self, f: fn(usize) -> usize) -> Vec<usize> {
        (0..SYMBOLS).filter(|&n| self.rows[f(n)] != self.rows[n].map(f)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    G2,
    G3,
    L2,
    L3,
}

impl Family {
    /// The projection index, 2 or 3.
    pub fn index(self) -> usize {
        match self {
            Family::G2 | Family::L2 => 2,
            Family::G3 | Family::L3 => 3,
        }
    }

    /// The step direction of δ = g - λ.
    pub fn delta_unit(self) -> Vec2 {
        if self.index() == 2 {
            Point2::ints(1, -1)
        } else {
            Point2::ints(0, 2)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorAssignment {
    pub family: Family,
    pub vectors: Vec<Option<Vec2>>,
}

impl VectorAssignment {
    pub fn get(&self, n: usize) -> Result<&Vec2> {
        self.vectors.get(n).and_then(|v| v.as_ref()).ok_or(Error::MissingSymbol(n))
    }

    /// Assignment `g_k(n) = π_k(Φ̂)` on the cell of symbol `n`.
    pub fn from_dynamics(d: &OctagonDynamics, k: usize) -> Result<Self> {
        let vectors = (0..SYMBOLS)
            .into_par_iter()
            .map(|n| Ok(Some(project_vector(&d.symbol_lift(n)?, k)?)))
            .collect::<Result<_>>()?;
        let family = if k == 2 { Family::G2 } else { Family::G3 };
        Ok(VectorAssignment { family, vectors })
    }

    /// Listed λ rows spread by their symmetries; octagon symbols copy `g`.
    pub fn lambda(g: &VectorAssignment) -> Self {
        let mut v: Vec<Option<Vec2>> = vec![None; SYMBOLS];
        let family = if g.family.index() == 2 { Family::L2 } else { Family::L3 };
        for k in 1..11 {
            let base = if family == Family::L2 { int_pair(L2_LISTED[k - 1]) } else { quad_pair(L3_LISTED[k - 1]) };
            let (a, b) = if family == Family::L2 {
                let t = Point2::new(-&base.y, -&base.x);
                (t.clone(), -&t)
            } else {
                (-&base, base.clone())
            };
            // k+11, k+22, k+33
            v[k + 11] = Some(a.clone());
            v[k + 22] = Some(if family == Family::L2 { -&base } else { base.clone() });
            v[k + 33] = Some(if family == Family::L2 { b } else { a });
            v[k] = Some(base);
        }
        for n in [0, 11, 22, 33] {
            v[n] = g.vectors[n].clone();
        }
        VectorAssignment { family, vectors: v }
    }

    /// The listed `g` rows spread by the stated symmetries, with g(0) as given.
    pub fn g_from_listed(family: Family, d: &OctagonDynamics) -> Result<Self> {
        let mut v: Vec<Option<Vec2>> = vec![None; SYMBOLS];
        for k in 1..11 {
            if family.index() == 2 {
                let b = int_pair(G2_LISTED[k - 1]);
                let t = Point2::new(-&b.y, -&b.x);
                v[k + 11] = Some(t.clone());
                v[k + 22] = Some(-&b);
                v[k + 33] = Some(-&t);
                v[k] = Some(b);
            } else {
                let b = quad_pair(G3_LISTED[k - 1]);
                let sig = QuadVal::int(d.region_parity(k)? as i64 * 4);
                let t = -&b + Point2::new(QuadVal::zero(), sig);
                v[k + 11] = Some(t.clone());
                v[k + 22] = Some(b.clone());
                v[k + 33] = Some(t);
                v[k] = Some(b);
            }
        }
        let zero = if family.index() == 2 { Point2::ints(0, 8) } else { Point2::origin() };
        v[0] = Some(zero);
        Ok(VectorAssignment { family, vectors: v })
    }
}

pub fn int_pair((x, y): (i64, i64)) -> Vec2 {
    Point2::ints(x, y)
}

pub fn quad_pair((a, b, c, d): (i64, i64, i64, i64)) -> Vec2 {
    Point2::new(QuadVal::ints(a, b), QuadVal::ints(c, d))
}

/// Polyline from the origin whose edges are the assigned vectors in word order.
pub fn build_curve(word: &[usize], assign: &VectorAssignment) -> Result<PlanarPolyline> {
    let mut cur = Point2::origin();
    let mut points = Vec::with_capacity(word.len() + 1);
    points.push(cur.clone());
    for &n in word {
        cur = &cur + assign.get(n)?;
        points.push(cur.clone());
    }
    Ok(PlanarPolyline { points })
}

pub fn is_closed(curve: &PlanarPolyline) -> bool {
    curve.points.first() == curve.points.last()
}

/// Sum of the assigned vectors over a word.
pub fn word_sum(word: &[usize], assign: &VectorAssignment) -> Result<Vec2> {
    word.iter().try_fold(Point2::origin(), |acc, &n| Ok(acc + assign.get(n)?.clone()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Renormalized {
    /// Complex factor `M` with `Σ = M·v`, as (re, im).
    pub scale: (QuadVal, QuadVal),
    pub image: VectorAssignment,
    /// Non-octagon symbols where the image differs from the input.
    pub moved: Vec<usize>,
}

/// Four substitution steps followed by division by a single complex factor.
///
/// The factor is read off the first non-octagon symbol with a nonzero vector.
pub fn renorm_operator(table: &SubstitutionTable, assign: &VectorAssignment) -> Result<Renormalized> {
    let sums: Vec<Vec2> = (0..SYMBOLS)
        .into_par_iter()
        .map(|n| word_sum(&table.expand(&[n], 4), assign))
        .collect::<Result<_>>()?;
    let pivot = (0..SYMBOLS)
        .find(|&n| !is_octagon_symbol(n) && assign.get(n).map(|v| *v != Point2::origin()).unwrap_or(false))
        .ok_or_else(|| Error::Invalid("assignment is zero".into()))?;
    let m = sums[pivot].cdiv(assign.get(pivot)?)?;
    let mut vectors = Vec::with_capacity(SYMBOLS);
    let mut moved = Vec::new();
    for (n, s) in sums.iter().enumerate() {
        let img = s.cdiv(&m)?;
        if !is_octagon_symbol(n) && assign.get(n)? != &img {
            moved.push(n);
        }
        vectors.push(Some(img));
    }
    Ok(Renormalized { scale: (m.x, m.y), image: VectorAssignment { family: assign.family, vectors }, moved })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DeltaReport {
    /// Rows where δ(n) ≠ δ(m₁) + δ(m₂) + δ(m₃).
    pub unconserved: Vec<usize>,
    /// Symbols whose δ is not in {-1, 0, 1}·unit.
    pub out_of_range: Vec<usize>,
}

impl DeltaReport {
    pub fn ok(&self) -> bool {
        self.unconserved.is_empty() && self.out_of_range.is_empty()
    }
}

/// Checks δ = g - λ row by row.
pub fn delta_check(table: &SubstitutionTable, g: &VectorAssignment, lambda: &VectorAssignment) -> Result<DeltaReport> {
    let unit = g.family.delta_unit();
    let delta = |n: usize| -> Result<Vec2> { Ok(g.get(n)? - lambda.get(n)?) };
    let mut rep = DeltaReport::default();
    for n in 0..SYMBOLS {
        let dn = delta(n)?;
        if ![-1, 0, 1].iter().any(|e| unit.scale(&QuadVal::int(*e)) == dn) {
            rep.out_of_range.push(n);
        }
        let sum = table.rows[n].iter().try_fold(Point2::origin(), |a, &m| Ok::<_, Error>(a + delta(m)?))?;
        if sum != dn {
            rep.unconserved.push(n);
        }
    }
    Ok(rep)
}

/// Scaled curve Λ_i(j) from the λ assignment, in the frame of the matching fractal.
///
/// Family 3 divides by s^(j-1). Family 2 divides by 3^((j-1)/2) and, since a
/// single R step turns the family-2 frame by a reflection, swaps coordinates
/// when (j-1)/2 is odd. `j` must be odd.
pub fn lambda_curve(table: &SubstitutionTable, lambda: &VectorAssignment, j: usize) -> Result<PlanarPolyline> {
    if j % 2 == 0 {
        return Err(Error::Invalid(format!("scaled λ curves need odd depth, got {j}")));
    }
    let raw = build_curve(&table.expand(&[0], j), lambda)?;
    let h = (j - 1) / 2;
    let factor = if lambda.family.index() == 3 { QuadVal::silver().pow(j as u32 - 1) } else { QuadVal::int(3).pow(h as u32) };
    let inv = factor.inv()?;
    let swap = lambda.family.index() == 2 && h % 2 == 1;
    let points = raw
        .points
        .into_iter()
        .map(|p| {
            let q = p.scale(&inv);
            if swap {
                Point2::new(q.y, q.x)
            } else {
                q
            }
        })
        .collect();
    Ok(PlanarPolyline { points })
}

/// [`lambda_curve`] accumulated in floating point, for depths where exact points are too costly.
pub fn lambda_curve_f64(table: &SubstitutionTable, lambda: &VectorAssignment, j: usize) -> Result<Vec<(f64, f64)>> {
    if j % 2 == 0 {
        return Err(Error::Invalid(format!("scaled λ curves need odd depth, got {j}")));
    }
    let h = (j - 1) / 2;
    let factor = if lambda.family.index() == 3 { (1.0 + 2f64.sqrt()).powi(j as i32 - 1) } else { 3f64.powi(h as i32) };
    let swap = lambda.family.index() == 2 && h % 2 == 1;
    let vecs: Vec<(f64, f64)> = (0..SYMBOLS).map(|n| lambda.get(n).map(|v| v.to_f64())).collect::<Result<_>>()?;
    let word = table.expand(&[0], j);
    let mut out = Vec::with_capacity(word.len() + 1);
    let (mut x, mut y) = (0.0, 0.0);
    out.push((0.0, 0.0));
    for n in word {
        x += vecs[n].0;
        y += vecs[n].1;
        out.push(if swap { (y / factor, x / factor) } else { (x / factor, y / factor) });
    }
    Ok(out)
}

/// Floating-point polyline `G_i(k)` scaled by `s_i^{-k}`, with s₂ = √3 and s₃ = 1 + √2.
pub fn scaled_curve_f64(curve: &PlanarPolyline, family: Family, k: usize) -> Vec<(f64, f64)> {
    let s = if family.index() == 2 { 3f64.sqrt() } else { 1.0 + 2f64.sqrt() };
    let f = s.powi(-(k as i32));
    curve.to_f64().into_iter().map(|(x, y)| (x * f, y * f)).collect()
}

fn at(c: &[(f64, f64)], t: f64) -> (f64, f64) {
    let n = c.len() - 1;
    if n == 0 {
        return c[0];
    }
    let x = (t * n as f64).clamp(0.0, n as f64);
    let i = (x.floor() as usize).min(n - 1);
    let f = x - i as f64;
    (c[i].0 + f * (c[i + 1].0 - c[i].0), c[i].1 + f * (c[i + 1].1 - c[i].1))
}

/// Sup distance between two curves, each parametrized over [0, 1] in proportion to edge count.
///
/// Both curves are piecewise linear in that parameter, so the sup is attained at
/// a breakpoint of one of them; sampling those and the midpoints is exact up to rounding.
pub fn curve_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut ts = Vec::new();
    for c in [a, b] {
        let n = (c.len() - 1).max(1);
        for i in 0..=n {
            ts.push(i as f64 / n as f64);
            if i < n {
                ts.push((i as f64 + 0.5) / n as f64);
            }
        }
    }
    ts.par_iter()
        .map(|&t| {
            let (p, q) = (at(a, t), at(b, t));
            (p.0 - q.0).hypot(p.1 - q.1)
        })
        .reduce(|| 0.0, f64::max)
}

/// Largest separation, in δ-units, between corresponding vertices of G_i(k) and L_i(k).
pub fn vertex_distance_bound(table: &SubstitutionTable, g: &VectorAssignment, lambda: &VectorAssignment, k: usize) -> Result<i64> {
    let w = table.expand(&[0], k);
    let unit = g.family.delta_unit();
    let mut cur = Point2::origin();
    let mut worst = 0i64;
    for &n in &w {
        cur = cur + (g.get(n)? - lambda.get(n)?);
        // cur = e·unit for an integer e.
        let e = if unit.x.is_zero() { &cur.y / &unit.y } else { &cur.x / &unit.x };
        if unit.scale(&e) != cur || !e.is_integer() {
            return Err(Error::Invalid(format!("vertex offset {cur} is not a multiple of {unit}")));
        }
        worst = worst.max(crate::geom::small(&e.abs().floor()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn dyn_() -> &'static OctagonDynamics {
        static D: OnceLock<OctagonDynamics> = OnceLock::new();
        D.get_or_init(|| OctagonDynamics::new().unwrap())
    }

    #[test]
    fn table_examples() {
        let t = SubstitutionTable::standard();
        assert_eq!(t.expand(&[0], 1), vec![9, 25, 39]);
        assert_eq!(t.expand(&[0], 2), vec![9, 26, 7, 32, 34, 38, 41, 2, 28]);
        assert_eq!(t.rows[37], [42, 12, 16]);
        assert_eq!(t.rows[15], [20, 34, 38]);
        assert_eq!(t.rows[26], [31, 1, 5]);
        assert!(t.equivariance_failures(iota11).is_empty());
        assert!(t.equivariance_failures(iota22).is_empty());
    }

    #[test]
    fn table_matches_dynamics() {
        let t = SubstitutionTable::from_dynamics(dyn_()).unwrap();
        assert_eq!(t, SubstitutionTable::standard());
    }

    #[test]
    fn octagon_symbols_vanish() {
        let t = SubstitutionTable::standard();
        for k in 1..6 {
            assert!(t.expand(&[0], k).iter().all(|&n| !is_octagon_symbol(n)));
        }
    }

    #[test]
    fn first_triangle() {
        let t = SubstitutionTable::standard();
        let g2 = VectorAssignment::from_dynamics(dyn_(), 2).unwrap();
        let c = build_curve(&t.expand(&[0], 1), &g2).unwrap();
        assert_eq!(c.points, vec![Point2::ints(0, 0), Point2::ints(2, 2), Point2::ints(0, 4), Point2::ints(0, 0)]);
        assert!(!is_closed(&build_curve(&t.expand(&[0], 2), &g2).unwrap()));
        assert_eq!(build_curve(&[], &g2).unwrap().points, vec![Point2::origin()]);
    }

    #[test]
    fn closedness() {
        let t = SubstitutionTable::standard();
        let g2 = VectorAssignment::from_dynamics(dyn_(), 2).unwrap();
        let g3 = VectorAssignment::from_dynamics(dyn_(), 3).unwrap();
        for k in 1..=6 {
            let w = t.expand(&[0], k);
            assert_eq!(is_closed(&build_curve(&w, &g2).unwrap()), k % 2 == 1, "k={k}");
            assert!(is_closed(&build_curve(&w, &g3).unwrap()));
        }
    }

    #[test]
    fn lambda_fixed() {
        let t = SubstitutionTable::standard();
        for k in [2, 3] {
            let g = VectorAssignment::from_dynamics(dyn_(), k).unwrap();
            let l = VectorAssignment::lambda(&g);
            let r = renorm_operator(&t, &l).unwrap();
            assert!(r.moved.is_empty(), "family {k}: {:?}", r.moved);
            assert!(r.scale.1.is_zero());
            let want = if k == 2 { QuadVal::int(9) } else { QuadVal::ints(17, 12) };
            assert_eq!(r.scale.0, want);
            assert!(!renorm_operator(&t, &g).unwrap().moved.is_empty());
        }
    }

    #[test]
    fn deltas() {
        let t = SubstitutionTable::standard();
        for k in [2, 3] {
            let g = VectorAssignment::from_dynamics(dyn_(), k).unwrap();
            let l = VectorAssignment::lambda(&g);
            assert!(delta_check(&t, &g, &l).unwrap().ok());
        }
        let g2 = VectorAssignment::from_dynamics(dyn_(), 2).unwrap();
        let l2 = VectorAssignment::lambda(&g2);
        assert_eq!(g2.get(2).unwrap() - l2.get(2).unwrap(), Point2::ints(-1, 1));
        assert_eq!(g2.get(1).unwrap(), l2.get(1).unwrap());
    }

    #[test]
    fn distances() {
        let a = vec![(0.0, 0.0), (1.0, 0.0)];
        assert_eq!(curve_distance(&a, &a), 0.0);
        let b = vec![(0.0, 1.0), (1.0, 1.0)];
        assert!((curve_distance(&a, &b) - 1.0).abs() < 1e-12);
        let t = SubstitutionTable::standard();
        let g3 = VectorAssignment::from_dynamics(dyn_(), 3).unwrap();
        let l3 = VectorAssignment::lambda(&g3);
        assert_eq!(vertex_distance_bound(&t, &g3, &l3, 0).unwrap(), 0);
        assert!(vertex_distance_bound(&t, &g3, &l3, 1).unwrap() <= 2);
    }
}
