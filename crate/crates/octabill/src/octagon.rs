//! The octagon's return dynamics on the region between the first two necklaces.
//!
//! Φ is the pinwheel map restricted to R₁. The compressed map Ψ lives on the
//! top half R and folds the bottom half back with σ(x, y) = (x, y + 2). The
//! dilation Θ conjugates Ψ on the small region S to Ψ³.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QuadVal;
use crate::geom::{convex_hull, omega, triangulate, ConvexPolygon, OrientedLine, Point2, Similarity, Vec2};
use crate::graph::lift_step;
use crate::pinwheel::{octagon_triples, PinwheelSystem};

/// Number of compressed-system regions.
pub const REGIONS: usize = 22;

fn s() -> QuadVal {
    QuadVal::silver()
}

fn half(p: Point2) -> Point2 {
    p.scale(&QuadVal::ratio(1, 2))
}

/// Coordinate across Σ₀: `y - (√2 - 1)x`. Σ₀ is `-3 < val < 1`, R is `val > -1`.
pub fn strip_value(p: &Point2) -> QuadVal {
    &p.y - &(QuadVal::ints(-1, 1) * &p.x)
}

/// The shift σ(x, y) = (x, y + 2).
pub fn sigma() -> Vec2 {
    Point2::ints(0, 2)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionAtlas {
    /// Boundary of R, counterclockwise. Not convex.
    pub r: Vec<Point2>,
    /// c₁..c₄.
    pub anchors: [Point2; 4],
    /// B₀..B₂₁.
    pub cells: Vec<ConvexPolygon>,
}

impl RegionAtlas {
    /// Index of the cell containing `p` in its interior.
    pub fn region_of(&self, p: &Point2) -> Option<usize> {
        self.cells.iter().position(|c| c.contains_strict(p))
    }

    pub fn locate(&self, p: &Point2) -> Result<usize> {
        if let Some(r) = self.region_of(p) {
            return Ok(r);
        }
        if self.cells.iter().any(|c| c.contains(p)) {
            Err(Error::OnCellBoundary)
        } else {
            Err(Error::OutsideDomain)
        }
    }

    pub fn area(&self) -> QuadVal {
        crate::geom::signed_area(&self.r)
    }
}

/// The 22 cells of the compressed system, from explicit coordinates and rotations.
pub fn build_atlas() -> Result<RegionAtlas> {
    let s = s();
    let one = QuadVal::one();
    let two = QuadVal::int(2);
    let c1 = Point2::new(&s * &QuadVal::ratio(3, 2), QuadVal::ratio(1, 2));
    let c2 = Point2::new(&s * &QuadVal::ratio(3, 2), QuadVal::ratio(3, 2));
    let c3 = Point2::new(&s + &one, two.clone());
    let c4 = Point2::new(QuadVal::ints(0, 2), two.clone());
    let pt = |x: QuadVal, y: QuadVal| half(Point2::new(x, y));
    let k = |a: i64| QuadVal::int(a);
    let rot = |poly: &[Point2], c: &Point2, n: i64| -> Vec<Point2> {
        let r = Similarity::rotation45(n, c);
        poly.iter().map(|p| r.apply(p)).collect()
    };

    let b0 = ConvexPolygon::octagon(&c3, &s.inv()?).vertices;
    let b1 = vec![
        pt(&s * &k(2), k(4)),
        pt(&k(3) + &s, &(&s * &k(3)) - &k(3)),
        pt(&(&s * &k(3)) - &k(2), &(&s * &k(2)) - &k(1)),
    ];
    let b3 = vec![
        pt(&(&s * &k(5)) - &k(6), &(&s * &k(2)) - &k(1)),
        pt(&(&s * &k(4)) - &k(4), &(&s * &k(4)) - &k(6)),
        pt(&(&s * &k(3)) - &k(2), &(&s * &k(2)) - &k(1)),
        pt(&s + &k(3), &(&s * &k(3)) - &k(3)),
        pt(&(&s * &k(2)) + &k(1), &s + &k(2)),
    ];
    let b2 = rot(&b1, &c4, 3);
    let b4 = rot(&b1, &c4, 5);
    // B₂ ∪ B₃ is a kite.
    let kite = vec![b2[0].clone(), b3[2].clone(), b3[3].clone(), b3[4].clone()];
    let mut cells: Vec<Vec<Point2>> = vec![b0, b1.clone(), b2, b3, b4.clone()];
    cells.push(rot(&b1, &c3, 5));
    cells.push(rot(&kite, &c3, 5));
    cells.push(rot(&b4, &c3, 5));
    cells.push(rot(&b1, &c3, 2));
    cells.push(rot(&kite, &c3, 2));
    cells.push(rot(&b4, &c3, 2));
    for i in 0..11 {
        let img = rot(&cells[i], &c2, 4);
        cells.push(img);
    }
    let cells: Vec<ConvexPolygon> = cells.into_iter().map(ConvexPolygon::ccw).collect();

    let p1 = Point2::new(s.clone(), one.clone());
    let p2 = Point2::new(&s * &two, two.clone());
    let r = vec![
        &p1 + &omega(6),
        &p2 + &omega(6),
        &p2 + &omega(5),
        &p2 + &omega(4),
        &p2 + &omega(3),
        &p1 + &omega(2),
        &p1 + &omega(1),
        &p1 + &omega(0),
        &p1 + &omega(7),
    ];
    let atlas = RegionAtlas { r, anchors: [c1, c2, c3, c4], cells };

    let total = atlas.cells.iter().fold(QuadVal::zero(), |a, c| a + c.area());
    if total != atlas.area() {
        return Err(Error::AtlasInconsistent(format!("cell areas sum to {total}, region has {}", atlas.area())));
    }
    for i in 0..REGIONS {
        for j in i + 1..REGIONS {
            if atlas.cells[i].interiors_meet(&atlas.cells[j]) {
                return Err(Error::AtlasInconsistent(format!("cells {i} and {j} overlap")));
            }
        }
    }
    Ok(atlas)
}

/// A maximal piece of the domain on which Φ is one translation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionCell {
    pub polygon: ConvexPolygon,
    pub translation: Vec2,
    pub lift: Vec<i64>,
    /// 1 when Φ leaves the top half on this cell.
    pub parity: u8,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiStep {
    pub point: Point2,
    pub symbol: usize,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Periodicity {
    Periodic { period: u64, tile: ConvexPolygon },
    Unresolved,
}

/// One row (σ; σ₀, σ₁, σ₂) of the parity table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityRow {
    pub region: usize,
    pub sigma: u8,
    pub steps: [u8; 3],
}

impl ParityRow {
    pub fn consistent(&self) -> bool {
        (self.steps.iter().sum::<u8>() % 2) == self.sigma
    }
}

/// The octagon system: pinwheel triples, atlas, and the renormalization Θ.
#[derive(Clone, Debug)]
pub struct OctagonDynamics {
    pub sys: PinwheelSystem,
    pub atlas: RegionAtlas,
    pub theta: Similarity,
    pub theta_inv: Similarity,
}

impl OctagonDynamics {
    pub fn new() -> Result<Self> {
        let (theta, theta_inv) = theta_pair()?;
        Ok(OctagonDynamics { sys: octagon_triples(), atlas: build_atlas()?, theta, theta_inv })
    }

    /// Φ(p), its exponents, and the lattice lift Φ̂(p).
    pub fn phi(&self, p: &Point2) -> Result<(Point2, Vec<i64>, Vec<i64>)> {
        let (q, m) = self.sys.step(p)?;
        let hat = lift_step(&self.sys, &m);
        Ok((q, m, hat))
    }

    /// One step of Ψ from a point interior to a cell of R.
    pub fn psi_step(&self, p: &Point2) -> Result<PsiStep> {
        let symbol = self.atlas.locate(p)?;
        let (q, _, _) = self.phi(p)?;
        let v = strip_value(&q);
        match v.cmp(&QuadVal::int(-1)) {
            std::cmp::Ordering::Greater => Ok(PsiStep { point: q, symbol, parity: 0 }),
            std::cmp::Ordering::Less => Ok(PsiStep { point: q + sigma(), symbol, parity: 1 }),
            std::cmp::Ordering::Equal => Err(Error::OnCellBoundary),
        }
    }

    pub fn psi(&self, p: &Point2) -> Result<Point2> {
        Ok(self.psi_step(p)?.point)
    }

    /// S = Θ⁻¹(R) cell by cell.
    pub fn s_region(&self) -> Vec<ConvexPolygon> {
        self.atlas.cells.iter().map(|c| self.theta_inv.apply_polygon(c)).collect()
    }

    pub fn in_s(&self, p: &Point2) -> bool {
        self.atlas.region_of(&self.theta.apply(p)).is_some()
    }

    /// Period and tile of `p`, descending through at most `cap` renormalizations.
    pub fn classify_periodic(&self, p: &Point2, cap: usize) -> Result<Periodicity> {
        let r = self.atlas.locate(p)?;
        if r == 0 || r == 11 {
            return Ok(Periodicity::Periodic { period: 1, tile: self.atlas.cells[r].clone() });
        }
        if cap == 0 {
            return Ok(Periodicity::Unresolved);
        }
        // R minus the two big octagons is S ∪ Ψ(S) ∪ Ψ²(S).
        let mut q = p.clone();
        let mut j = 0;
        while !self.in_s(&q) {
            if j == 2 {
                return Err(Error::OnCellBoundary);
            }
            q = self.psi(&q)?;
            j += 1;
        }
        match self.classify_periodic(&self.theta.apply(&q), cap - 1)? {
            Periodicity::Periodic { period, tile } => {
                let tile_q = self.theta_inv.apply_polygon(&tile);
                Ok(Periodicity::Periodic { period: 3 * period, tile: tile_q.translate(&(p - &q)) })
            }
            Periodicity::Unresolved => Ok(Periodicity::Unresolved),
        }
    }

    /// Brute-force Ψ-period of `p`, up to `cap` steps.
    pub fn psi_period(&self, p: &Point2, cap: usize) -> Result<Option<usize>> {
        let mut q = p.clone();
        for n in 1..=cap {
            q = self.psi(&q)?;
            if q == *p {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// Symbols `region + 22·parity` along the Ψ-orbit, with accumulated parity.
    pub fn orbit_code(&self, p: &Point2, len: usize) -> Result<Vec<usize>> {
        let mut p = p.clone();
        let mut s = 0u8;
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let st = self.psi_step(&p)?;
            out.push(st.symbol + REGIONS * s as usize);
            s ^= st.parity;
            p = st.point;
        }
        Ok(out)
    }

    /// Parity bit of region `r`, read at its centroid.
    pub fn region_parity(&self, r: usize) -> Result<u8> {
        Ok(self.psi_step(&self.atlas.cells[r].centroid())?.parity)
    }

    /// Renormalizes the centroid of each region and records three Ψ parities.
    pub fn parity_table(&self) -> Result<Vec<ParityRow>> {
        (0..REGIONS)
            .map(|r| {
                let mut p = self.theta_inv.apply(&self.atlas.cells[r].centroid());
                let mut steps = [0u8; 3];
                for st in steps.iter_mut() {
                    let x = self.psi_step(&p)?;
                    *st = x.parity;
                    p = x.point;
                }
                Ok(ParityRow { region: r, sigma: self.region_parity(r)?, steps })
            })
            .collect()
    }

    /// Substitution row of a symbol read off the renormalized dynamics.
    pub fn subst_row(&self, sym: usize) -> Result<[usize; 3]> {
        let (r, par) = (sym % REGIONS, (sym / REGIONS) as u8);
        let code = self.orbit_code(&self.theta_inv.apply(&self.atlas.cells[r].centroid()), 3)?;
        let flip = |c: usize| if par == 1 { (c + REGIONS) % (2 * REGIONS) } else { c };
        Ok([flip(code[0]), flip(code[1]), flip(code[2])])
    }

    /// Lattice lift Φ̂ on symbol `sym`: region `r` for parity 0, its σ⁻¹-shift for parity 1.
    pub fn symbol_lift(&self, sym: usize) -> Result<Vec<i64>> {
        let (r, par) = (sym % REGIONS, sym / REGIONS);
        let mut c = self.atlas.cells[r].centroid();
        if par == 1 {
            c = c - sigma();
        }
        Ok(self.phi(&c)?.2)
    }

    /// Pushes convex pieces through the sixteen strip maps, splitting on each
    /// strip's undefined lines, and groups the fragments by exponent vector.
    pub fn derive_partition(&self, pieces: &[ConvexPolygon]) -> Result<Vec<PartitionCell>> {
        let k = self.sys.triples.len();
        // (current image, exponents so far)
        let mut frags: Vec<(ConvexPolygon, Vec<i64>)> = pieces.iter().map(|p| (p.clone(), Vec::new())).collect();
        for i in 1..=k {
            let t = &self.sys.triples[i % k];
            let (l, o) = t.strip.lines();
            let step = t.strip.coord_step(&t.v);
            let mut next = Vec::new();
            for (poly, ms) in frags {
                let ts: Vec<QuadVal> = poly.vertices.iter().map(|p| t.strip.coord(p)).collect();
                let lo = ts.iter().min().unwrap().floor();
                let hi = ts.iter().max().unwrap().floor();
                let mut rest = Some(poly);
                let mut parts = Vec::new();
                let mut c: num_bigint::BigInt = lo + 1;
                while c <= hi {
                    let cq = QuadVal::from(c.clone());
                    let anchor = &l.anchor + &(&o.anchor - &l.anchor).scale(&cq);
                    let cut = OrientedLine::new(anchor, l.dir.clone());
                    if let Some(p) = rest.take() {
                        let (a, b) = p.clip(&cut);
                        // Offsets below the line are the smaller coordinates.
                        let (below, above) = if l.offset(&o.anchor).signum() > 0 { (b, a) } else { (a, b) };
                        if let Some(x) = below {
                            parts.push(x);
                        }
                        rest = above;
                    }
                    c += 1;
                }
                parts.extend(rest);
                for part in parts {
                    let tc = t.strip.coord(&part.centroid());
                    let f = tc.floor();
                    let n = if step.signum() > 0 { -f } else { f };
                    let nn = crate::geom::small(&n);
                    let mut ms2 = ms.clone();
                    ms2.push(nn);
                    next.push((part.translate(&t.v.scale(&QuadVal::int(nn))), ms2));
                }
            }
            frags = next;
        }
        let mut groups: BTreeMap<Vec<i64>, Vec<ConvexPolygon>> = BTreeMap::new();
        for (img, ms) in frags {
            let mut shift = Point2::origin();
            for (i, m) in ms.iter().enumerate() {
                shift = shift + self.sys.triples[(i + 1) % k].v.scale(&QuadVal::int(*m));
            }
            groups.entry(ms).or_default().push(img.translate(&-&shift));
        }
        let mut out = Vec::new();
        for (ms, polys) in groups {
            let mut shift = Point2::origin();
            for (i, m) in ms.iter().enumerate() {
                shift = shift + self.sys.triples[(i + 1) % k].v.scale(&QuadVal::int(*m));
            }
            let lift = lift_step(&self.sys, &ms);
            let pts: Vec<Point2> = polys.iter().flat_map(|p| p.vertices.iter().cloned()).collect();
            let hull = convex_hull(&pts);
            let total = polys.iter().fold(QuadVal::zero(), |a, p| a + p.area());
            let cells = if hull.area() == total { vec![hull] } else { polys };
            // Ψ folds images below val = -1, so split along the preimage of that line.
            let c = -(QuadVal::one() + strip_value(&shift));
            let fold = OrientedLine::new(Point2::new(QuadVal::zero(), c), Point2::new(QuadVal::one(), QuadVal::ints(-1, 1)));
            for cell in cells {
                let (above, below) = cell.clip(&fold);
                for (polygon, parity) in [(above, 0u8), (below, 1u8)] {
                    if let Some(polygon) = polygon {
                        out.push(PartitionCell { polygon, translation: shift.clone(), lift: lift.clone(), parity, exponents: ms.clone() });
                    }
                }
            }
        }
        Ok(out)
    }

    /// The partition of R, obtained from a triangulation of its boundary.
    pub fn derive_partition_of_r(&self) -> Result<Vec<PartitionCell>> {
        self.derive_partition(&triangulate(&self.atlas.r))
    }
}

/// Θ(z) = conj(αz + b) with α = ((s+1)/2)(1+i) and b = -3i(s+1), and its inverse.
pub fn theta_pair() -> Result<(Similarity, Similarity)> {
    let a = (&s() + &QuadVal::one()) * QuadVal::ratio(1, 2);
    let m = [[a.clone(), -&a], [-&a, -&a]];
    let t = Point2::new(QuadVal::zero(), (&s() + &QuadVal::one()) * QuadVal::int(3));
    let th = Similarity { m, t };
    let inv = th.inverse()?;
    Ok((th, inv))
}

/// p + 2μ(s, 1): a point whose arithmetic graph matches that of `p`.
pub fn translate_equivalent(p: &Point2, mu: i64) -> Point2 {
    p + &Point2::new(s(), QuadVal::one()).scale(&QuadVal::int(2 * mu))
}

/// Deterministic interior samples of a convex cell: centroid pulled toward each vertex.
pub fn cell_samples(cell: &ConvexPolygon, per_vertex: usize) -> Vec<Point2> {
    let c = cell.centroid();
    let mut out = vec![c.clone()];
    for (i, v) in cell.vertices.iter().enumerate() {
        for j in 1..=per_vertex {
            // Irregular weights keep samples off special lines.
            let w = QuadVal::ratio((7 * j as i64 + 3 * i as i64) % 17 + 1, 23);
            out.push(&c + &(v - &c).scale(&w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dynamics() -> OctagonDynamics {
        OctagonDynamics::new().unwrap()
    }

    #[test]
    fn atlas_tiles_r() {
        let a = build_atlas().unwrap();
        assert_eq!(a.cells.len(), 22);
        let b3 = &a.cells[3];
        let s = s();
        let first = half(Point2::new(&(&s * &QuadVal::int(5)) - &QuadVal::int(6), &(&s * &QuadVal::int(2)) - &QuadVal::one()));
        assert!(b3.vertices.contains(&first));
    }

    #[test]
    fn central_octagon_is_fixed() {
        let d = dynamics();
        let c3 = d.atlas.anchors[2].clone();
        let st = d.psi_step(&c3).unwrap();
        assert_eq!(st.point, c3);
        assert_eq!(st.symbol, 0);
    }

    #[test]
    fn red_regions() {
        let d = dynamics();
        let red: Vec<usize> = (0..22).filter(|&r| d.region_parity(r).unwrap() == 1).collect();
        assert_eq!(red, vec![2, 4, 6, 7, 8, 9, 13, 15, 17, 18, 19, 20]);
    }

    #[test]
    fn theta_maps_s_onto_r() {
        let d = dynamics();
        let i = d.theta.compose(&d.theta_inv);
        assert_eq!(i, Similarity::identity());
        assert!(d.theta.is_orientation_reversing());
        for (c, sc) in d.atlas.cells.iter().zip(d.s_region()) {
            assert!(d.theta.apply_polygon(&sc).same_as(c));
        }
    }

    #[test]
    fn psi_commutes_with_half_turn() {
        let d = dynamics();
        let rho = Similarity::rotation45(4, &d.atlas.anchors[1]);
        let mut n = 0;
        for cell in &d.atlas.cells {
            for p in cell_samples(cell, 1) {
                let a = rho.apply(&d.psi(&p).unwrap());
                let b = d.psi(&rho.apply(&p)).unwrap();
                assert_eq!(a, b);
                n += 1;
            }
        }
        assert!(n >= 100);
    }

    #[test]
    fn renormalization_identity() {
        let d = dynamics();
        let mut n = 0;
        for cell in d.s_region() {
            for p in cell_samples(&cell, 1) {
                let lhs = d.theta_inv.apply(&d.psi(&d.theta.apply(&p)).unwrap());
                let rhs = d.psi(&d.psi(&d.psi(&p).unwrap()).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                n += 1;
            }
        }
        assert!(n >= 100);
    }

    #[test]
    fn codes_of_small_tiles() {
        let d = dynamics();
        let c = d.atlas.anchors[2].clone();
        let p1 = d.theta_inv.apply(&c);
        assert_eq!(d.orbit_code(&p1, 3).unwrap(), vec![9, 25, 39]);
        let p2 = d.theta_inv.apply(&p1);
        assert_eq!(d.orbit_code(&p2, 9).unwrap(), vec![9, 26, 7, 32, 34, 38, 41, 2, 28]);
    }

    #[test]
    fn classification_levels() {
        let d = dynamics();
        let c = d.atlas.anchors[2].clone();
        let p = &c + &Point2::new(QuadVal::ratio(1, 9), QuadVal::ratio(-1, 10));
        assert!(matches!(d.classify_periodic(&p, 4).unwrap(), Periodicity::Periodic { period: 1, .. }));
        let p1 = d.theta_inv.apply(&p);
        assert!(matches!(d.classify_periodic(&p1, 4).unwrap(), Periodicity::Periodic { period: 3, .. }));
        let p2 = d.theta_inv.apply(&p1);
        assert!(matches!(d.classify_periodic(&p2, 4).unwrap(), Periodicity::Periodic { period: 9, .. }));
        assert_eq!(d.classify_periodic(&p2, 1).unwrap(), Periodicity::Unresolved);
    }

    #[test]
    fn parity_rows_are_consistent() {
        let d = dynamics();
        let rows = d.parity_table().unwrap();
        for r in 0..11 {
            assert!(rows[r].consistent(), "row {r}");
            assert_eq!(rows[r].sigma, rows[r + 11].sigma);
            assert_eq!(rows[r].steps, rows[r + 11].steps);
        }
    }

    #[test]
    fn partition_matches_atlas() {
        let d = dynamics();
        let cells = d.derive_partition_of_r().unwrap();
        assert_eq!(cells.len(), 22);
        for (r, b) in d.atlas.cells.iter().enumerate() {
            let c = cells.iter().find(|c| c.polygon.same_as(b)).expect("cell derived");
            assert_eq!(c.parity, d.region_parity(r).unwrap());
        }
        assert!(cells.iter().any(|c| c.translation == Point2::origin()));
    }
}
