//! The snowflake I₃ and the carpet I₂.
//!
//! Both are cyclic lists of shapes refined by five-piece rules. A shape is
//! stored as a directed base `a → b` plus one extra vector `w`:
//!
//! * triangle: `w` runs from the midpoint of the hypotenuse to the right-angle vertex;
//! * trapezoid: `w` is the inward normal of the long edge, `|w| = |b - a| / 3`;
//! * parallelogram: `w = e`, with vertices `a, a + e, b, b - e`.
//!
//! The middle child of every rule keeps the parent's special point, which is
//! what makes the curves line up with the substitution curves.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QuadVal;
use crate::geom::{hausdorff, ConvexPolygon, Point2, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Triangle,
    Trapezoid,
    Parallelogram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FractalFamily {
    /// The carpet.
    I2,
    /// The snowflake.
    I3,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FractalShape {
    pub kind: Kind,
    pub a: Point2,
    pub b: Point2,
    pub w: Vec2,
}

fn half() -> QuadVal {
    QuadVal::ratio(1, 2)
}

fn third() -> QuadVal {
    QuadVal::ratio(1, 3)
}

fn lerp(p: &Point2, q: &Point2, t: &QuadVal) -> Point2 {
    p + &(q - p).scale(t)
}

/// Right isosceles triangle on hypotenuse `a → b` with apex on side `side` (+1 = left).
pub fn triangle(a: Point2, b: Point2, side: i8) -> FractalShape {
    let w = (&b - &a).perp().scale(&QuadVal::ratio(side as i64, 2));
    FractalShape { kind: Kind::Triangle, a, b, w }
}

impl FractalShape {
    pub fn family(&self) -> FractalFamily {
        if self.kind == Kind::Triangle {
            FractalFamily::I3
        } else {
            FractalFamily::I2
        }
    }

    /// +1 when `w` points left of `a → b`.
    pub fn side(&self) -> i8 {
        (&self.b - &self.a).cross(&self.w).signum()
    }

    /// Right-angle vertex, long-edge midpoint, or centre.
    pub fn special(&self) -> Point2 {
        let m = self.a.midpoint(&self.b);
        match self.kind {
            Kind::Triangle => &m + &self.w,
            _ => m,
        }
    }

    pub fn vertices(&self) -> Vec<Point2> {
        match self.kind {
            Kind::Triangle => vec![self.a.clone(), self.b.clone(), self.special()],
            Kind::Trapezoid => {
                let e = (&self.b - &self.a).scale(&third());
                let top = &self.a + &self.w;
                vec![self.a.clone(), self.b.clone(), &(&top + &e) + &e, &top + &e]
            }
            Kind::Parallelogram => vec![self.a.clone(), &self.a + &self.w, self.b.clone(), &self.b - &self.w],
        }
    }

    pub fn polygon(&self) -> ConvexPolygon {
        ConvexPolygon::ccw(self.vertices())
    }

    /// `a`, `b`, and the special point: the sample used for curve approximations.
    pub fn curve_points(&self) -> [Point2; 3] {
        [self.a.clone(), self.b.clone(), self.special()]
    }

    pub fn children(&self) -> [FractalShape; 5] {
        match self.kind {
            Kind::Triangle => {
                let c = self.special();
                let k1 = QuadVal::ints(2, -1);
                let k2 = QuadVal::ints(-2, 2);
                let pts = [
                    self.a.clone(),
                    lerp(&self.a, &c, &k1),
                    lerp(&self.a, &c, &k2),
                    lerp(&self.b, &c, &k2),
                    lerp(&self.b, &c, &k1),
                    self.b.clone(),
                ];
                let sd = self.side();
                let sg = [-1, 1, 1, 1, -1];
                std::array::from_fn(|i| triangle(pts[i].clone(), pts[i + 1].clone(), sg[i] * sd))
            }
            Kind::Trapezoid => {
                let (a, b, n) = (&self.a, &self.b, &self.w);
                let e = (b - a).scale(&third());
                let q2 = a + &e.scale(&QuadVal::int(2));
                let q1 = &q2 + n;
                let q3 = a + &e;
                let q4 = &q3 + n;
                let t = third();
                let tr = |a: &Point2, b: &Point2, w: Vec2| FractalShape { kind: Kind::Trapezoid, a: a.clone(), b: b.clone(), w };
                let pa = |a: &Point2, b: &Point2, w: Vec2| FractalShape { kind: Kind::Parallelogram, a: a.clone(), b: b.clone(), w };
                [
                    pa(a, &q1, e.clone()),
                    tr(&q1, &q2, -&e.scale(&t)),
                    tr(&q2, &q3, n.scale(&t)),
                    tr(&q3, &q4, e.scale(&t)),
                    pa(&q4, b, e.clone()),
                ]
            }
            Kind::Parallelogram => {
                let (a, b, e) = (&self.a, &self.b, &self.w);
                let n = &(b - a) - &e.scale(&QuadVal::int(2));
                let t = third();
                let r1 = a + e;
                let r2 = a + &(e + &n).scale(&QuadVal::ratio(2, 3));
                let r3 = a + &(&e.scale(&QuadVal::ratio(4, 3)) + &n.scale(&t));
                let r4 = &r1 + &n;
                let tr = |a: &Point2, b: &Point2, w: Vec2| FractalShape { kind: Kind::Trapezoid, a: a.clone(), b: b.clone(), w };
                let pa = |a: &Point2, b: &Point2, w: Vec2| FractalShape { kind: Kind::Parallelogram, a: a.clone(), b: b.clone(), w };
                [
                    tr(a, &r1, n.scale(&t)),
                    pa(&r1, &r2, n.scale(&t)),
                    pa(&r2, &r3, e.scale(&t)),
                    pa(&r3, &r4, n.scale(&t)),
                    tr(&r4, b, -&n.scale(&t)),
                ]
            }
        }
    }

    fn approx(&self) -> Approx {
        match self.kind {
            Kind::Triangle => {
                let (ax, ay) = self.a.to_f64();
                let (bx, by) = self.b.to_f64();
                let c = ((ax + bx) / 2.0, (ay + by) / 2.0);
                Approx::Disc(c, (ax - bx).hypot(ay - by) / 2.0)
            }
            _ => Approx::Poly(self.polygon().to_f64()),
        }
    }
}

/// Float stand-in for the region that holds a shape and all its descendants.
#[derive(Clone, Debug)]
enum Approx {
    Disc((f64, f64), f64),
    Poly(Vec<(f64, f64)>),
}

const SLACK: f64 = 1e-9;

impl Approx {
    fn may_contain(&self, p: (f64, f64)) -> bool {
        match self {
            Approx::Disc(c, r) => (p.0 - c.0).hypot(p.1 - c.1) <= r + SLACK,
            Approx::Poly(v) => {
                let n = v.len();
                (0..n).all(|i| {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                    let c = dx * (p.1 - a.1) - dy * (p.0 - a.0);
                    c >= -SLACK * dx.hypot(dy)
                })
            }
        }
    }
}

/// The eight snowflake seed triangles. The first is (0,0), (1/2, -s/2), (-s/2, -1/2).
pub fn snowflake_seed() -> Vec<FractalShape> {
    let s = QuadVal::silver();
    let a = Point2::new(half(), -&(&s * &half()));
    let b = Point2::new(-&(&s * &half()), -half());
    let d0 = &b - &a;
    let side = d0.cross(&(-&a)).signum();
    let mut out = Vec::with_capacity(8);
    let mut v = a;
    for i in 0..8 {
        let nxt = &v + &d0.rot45(i);
        out.push(triangle(v, nxt.clone(), side));
        v = nxt;
    }
    out
}

/// The eight carpet seed trapezoids, winding twice around the square with centre (3/2, 3/2).
pub fn carpet_seed() -> Vec<FractalShape> {
    let h = |x: i64, y: i64| Point2::new(QuadVal::ratio(x, 2), QuadVal::ratio(y, 2));
    let c = [h(3, -3), h(-3, 3), h(3, 9), h(9, 3)];
    let n = [Point2::ints(1, 1), Point2::ints(1, -1), Point2::ints(-1, -1), Point2::ints(-1, 1)];
    (0..8)
        .map(|i| FractalShape { kind: Kind::Trapezoid, a: c[i % 4].clone(), b: c[(i + 1) % 4].clone(), w: n[i % 4].clone() })
        .collect()
}

pub fn seed(family: FractalFamily) -> Vec<FractalShape> {
    match family {
        FractalFamily::I2 => carpet_seed(),
        FractalFamily::I3 => snowflake_seed(),
    }
}

/// Carpet coordinates in which the square is [0, 3]².
pub fn carpet_uv(p: &Point2) -> Point2 {
    let three = QuadVal::int(3);
    Point2::new((&(&p.x - &p.y) + &three) * half(), (&p.x + &p.y) * half())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShapeList {
    pub family: FractalFamily,
    pub depth: usize,
    pub shapes: Vec<FractalShape>,
}

impl ShapeList {
    pub fn seed(family: FractalFamily) -> Self {
        ShapeList { family, depth: 0, shapes: seed(family) }
    }

    pub fn at_depth(family: FractalFamily, depth: usize) -> Self {
        (0..depth).fold(ShapeList::seed(family), |l, _| l.subdivide())
    }

    pub fn subdivide(&self) -> Self {
        let shapes = self.shapes.iter().flat_map(|s| s.children()).collect();
        ShapeList { family: self.family, depth: self.depth + 1, shapes }
    }

    /// 0 for shapes on the seed side (trapezoids), 1 otherwise (parallelograms).
    pub fn colours(&self) -> Vec<u8> {
        match self.family {
            FractalFamily::I3 => {
                let s0 = snowflake_seed()[0].side();
                self.shapes.iter().map(|t| u8::from(t.side() != s0)).collect()
            }
            FractalFamily::I2 => self.shapes.iter().map(|t| u8::from(t.kind == Kind::Parallelogram)).collect(),
        }
    }

    /// Closed polyline through the legs of every triangle, or through `a` and the special point.
    pub fn outline(&self) -> Vec<Point2> {
        self.shapes.iter().flat_map(|s| [s.a.clone(), s.special()]).collect()
    }

    /// Largest number of times one shape occurs in the list.
    pub fn max_multiplicity(&self) -> usize {
        let mut m: HashMap<&FractalShape, usize> = HashMap::new();
        for s in &self.shapes {
            *m.entry(s).or_default() += 1;
        }
        m.values().copied().max().unwrap_or(0)
    }
}

/// Colour rule for the snowflake: 0 → 10001, 1 → 01110.
pub fn colour_rule(c: u8) -> [u8; 5] {
    if c == 0 {
        [1, 0, 0, 0, 1]
    } else {
        [0, 1, 1, 1, 0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointRole {
    /// Right-angle vertices (I₃) or long-edge midpoints and centres (I₂).
    Special,
    /// Acute vertices (I₃) or quadrilateral corners (I₂).
    Corner,
}

/// Special points of all stages up to `depth`.
pub fn special_points(family: FractalFamily, role: PointRole, depth: usize) -> HashSet<Point2> {
    let mut out = HashSet::new();
    let mut l = ShapeList::seed(family);
    for d in 0..=depth {
        for s in &l.shapes {
            match role {
                PointRole::Special => {
                    out.insert(s.special());
                }
                PointRole::Corner => match s.kind {
                    Kind::Triangle => {
                        out.insert(s.a.clone());
                        out.insert(s.b.clone());
                    }
                    _ => out.extend(s.vertices()),
                },
            }
        }
        if d < depth {
            l = l.subdivide();
        }
    }
    out
}

/// Path of child indices from a seed: `path[0]` is the seed index.
pub type ShapePath = Vec<u8>;

pub fn shape_at(family: FractalFamily, path: &[u8]) -> FractalShape {
    let mut s = seed(family)[path[0] as usize].clone();
    for &c in &path[1..] {
        s = s.children()[c as usize].clone();
    }
    s
}

#[derive(Clone, Debug)]
struct Node {
    shape: FractalShape,
    approx: Approx,
    path: ShapePath,
    first_child: Option<usize>,
}

/// Lazily refined descendance tree used for exact point location.
#[derive(Clone, Debug)]
pub struct ShapeTree {
    pub family: FractalFamily,
    nodes: Vec<Node>,
}

/// A shallowest occurrence of a query point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    pub path: ShapePath,
    /// Index into [`FractalShape::vertices`], or `None` for a quadrilateral's special point.
    pub vertex: Option<usize>,
}

impl ShapeTree {
    pub fn new(family: FractalFamily) -> Self {
        let nodes = seed(family)
            .into_iter()
            .enumerate()
            .map(|(i, shape)| Node { approx: shape.approx(), shape, path: vec![i as u8], first_child: None })
            .collect();
        ShapeTree { family, nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn children(&mut self, i: usize) -> usize {
        if let Some(c) = self.nodes[i].first_child {
            return c;
        }
        let start = self.nodes.len();
        let kids = self.nodes[i].shape.children();
        for (k, shape) in kids.into_iter().enumerate() {
            let mut path = self.nodes[i].path.clone();
            path.push(k as u8);
            self.nodes.push(Node { approx: shape.approx(), shape, path, first_child: None });
        }
        self.nodes[i].first_child = Some(start);
        start
    }

    fn hits_in(&self, i: usize, v: &Point2, fv: (f64, f64), role: PointRole) -> Vec<Hit> {
        let s = &self.nodes[i].shape;
        let close = |p: &Point2| {
            let q = p.to_f64();
            (q.0 - fv.0).abs() < 1e-7 && (q.1 - fv.1).abs() < 1e-7 && p == v
        };
        let mut out = Vec::new();
        match (s.kind, role) {
            (Kind::Triangle, PointRole::Special) => {
                if close(&s.special()) {
                    out.push(Hit { path: self.nodes[i].path.clone(), vertex: Some(2) });
                }
            }
            (Kind::Triangle, PointRole::Corner) => {
                for (k, p) in [&s.a, &s.b].into_iter().enumerate() {
                    if close(p) {
                        out.push(Hit { path: self.nodes[i].path.clone(), vertex: Some(k) });
                    }
                }
            }
            (_, PointRole::Special) => {
                if close(&s.special()) {
                    out.push(Hit { path: self.nodes[i].path.clone(), vertex: None });
                }
            }
            (_, PointRole::Corner) => {
                for (k, p) in s.vertices().iter().enumerate() {
                    if close(p) {
                        out.push(Hit { path: self.nodes[i].path.clone(), vertex: Some(k) });
                    }
                }
            }
        }
        out
    }

    /// All occurrences of `v` in the given role at the shallowest depth where it occurs.
    pub fn locate(&mut self, v: &Point2, role: PointRole, max_depth: usize) -> Result<Vec<Hit>> {
        let fv = v.to_f64();
        let mut level: Vec<usize> = (0..8).filter(|&i| self.nodes[i].approx.may_contain(fv)).collect();
        for depth in 0..=max_depth {
            let hits: Vec<Hit> = level.iter().flat_map(|&i| self.hits_in(i, v, fv, role)).collect();
            if !hits.is_empty() {
                return Ok(hits);
            }
            if depth == max_depth || level.is_empty() {
                break;
            }
            let mut next = Vec::new();
            for i in level {
                let c = self.children(i);
                next.extend((c..c + 5).filter(|&j| self.nodes[j].approx.may_contain(fv)));
            }
            level = next;
        }
        if level.is_empty() {
            Err(Error::OutsideDomain)
        } else {
            Err(Error::DepthExceeded(max_depth))
        }
    }

    /// The shape at `path`, refining lazily.
    pub fn shape(&mut self, path: &[u8]) -> &FractalShape {
        let mut i = path[0] as usize;
        for &c in &path[1..] {
            i = self.children(i) + c as usize;
        }
        &self.nodes[i].shape
    }

    /// True when `v` is a special point at some depth ≤ `max_depth`.
    pub fn is_special(&mut self, v: &Point2, max_depth: usize) -> Result<bool> {
        match self.locate(v, PointRole::Special, max_depth) {
            Ok(_) => Ok(true),
            Err(Error::OutsideDomain) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

pub const MAX_DEPTH: usize = 24;

/// Membership of each point among the special points.
pub fn vertex_membership(points: &[Point2], family: FractalFamily, max_depth: usize) -> Result<Vec<bool>> {
    let mut tree = ShapeTree::new(family);
    points.iter().map(|p| tree.is_special(p, max_depth)).collect()
}

/// Pairs (right-angle vertex of I₃(n)[i], special point of I₂(n)[i]).
pub fn canonical_map_sample(depth: usize) -> Vec<(Point2, Point2)> {
    let a = ShapeList::at_depth(FractalFamily::I3, depth);
    let b = ShapeList::at_depth(FractalFamily::I2, depth);
    a.shapes.iter().zip(&b.shapes).map(|(t, q)| (t.special(), q.special())).collect()
}

/// Points of the limit arc of `x` between `a` and its special point, at `depth`.
pub fn to_special(x: &FractalShape, depth: usize) -> Vec<FractalShape> {
    if depth == 0 {
        return vec![x.clone()];
    }
    let ch = x.children();
    let mut out = descendants(&ch[0], depth - 1);
    out.extend(descendants(&ch[1], depth - 1));
    out.extend(to_special(&ch[2], depth - 1));
    out
}

/// Points of the limit arc of `x` between its special point and `b`.
pub fn from_special(x: &FractalShape, depth: usize) -> Vec<FractalShape> {
    if depth == 0 {
        return vec![x.clone()];
    }
    let ch = x.children();
    let mut out = from_special(&ch[2], depth - 1);
    out.extend(descendants(&ch[3], depth - 1));
    out.extend(descendants(&ch[4], depth - 1));
    out
}

pub fn descendants(x: &FractalShape, depth: usize) -> Vec<FractalShape> {
    let mut l = vec![x.clone()];
    for _ in 0..depth {
        l = l.iter().flat_map(|s| s.children()).collect();
    }
    l
}

fn cloud(shapes: &[FractalShape]) -> Vec<(f64, f64)> {
    shapes.iter().flat_map(|s| s.curve_points().map(|p| p.to_f64())).collect()
}

/// The configuration of a hidden-symmetry identity: the arc of `big` from `a`
/// to its special point against the first child plus the matching arc of `partner`.
#[derive(Clone, Debug)]
pub struct HiddenPair {
    pub big: FractalShape,
    pub partner: FractalShape,
}

impl HiddenPair {
    /// Snowflake: the partner is the seed triangle scaled by √2 - 1 about its
    /// apex and reflected in the leg through `a`.
    pub fn snowflake() -> Self {
        let big = snowflake_seed()[0].clone();
        let c = big.special();
        let r = QuadVal::ints(-1, 1);
        let d = &big.a - &c;
        let refl = |p: &Point2| -> Point2 {
            let q = &c + &(p - &c).scale(&r);
            let u = &q - &c;
            let proj = &c + &d.scale(&(u.dot(&d) / d.norm2()));
            &proj.scale(&QuadVal::int(2)) - &q
        };
        let (a, b, apex) = (refl(&big.a), refl(&big.b), refl(&c));
        let mid = a.midpoint(&b);
        let partner = FractalShape { kind: Kind::Triangle, a, b, w: &apex - &mid };
        HiddenPair { big, partner }
    }

    /// Carpet A-version: a parallelogram against two trapezoids.
    pub fn carpet_a() -> Self {
        let big = FractalShape { kind: Kind::Parallelogram, a: Point2::ints(0, 0), b: Point2::ints(6, 3), w: Point2::ints(3, 0) };
        let partner = FractalShape { kind: Kind::Trapezoid, a: Point2::ints(3, 0), b: Point2::ints(3, 3), w: Point2::ints(-1, 0) };
        HiddenPair { big, partner }
    }

    /// Carpet B-version: a trapezoid against two parallelograms.
    pub fn carpet_b() -> Self {
        let big = FractalShape { kind: Kind::Trapezoid, a: Point2::ints(0, 0), b: Point2::ints(9, 0), w: Point2::ints(0, 3) };
        let partner = FractalShape { kind: Kind::Parallelogram, a: Point2::ints(6, 3), b: Point2::ints(3, -3), w: Point2::ints(0, -3) };
        HiddenPair { big, partner }
    }

    /// Hausdorff distance between the two depth-`n` approximations, `n ≥ 1`.
    pub fn distance(&self, n: usize) -> f64 {
        let lhs = to_special(&self.big, n);
        let mut rhs = descendants(&self.big.children()[0], n - 1);
        rhs.extend(to_special(&self.partner, n - 1));
        hausdorff(&cloud(&lhs), &cloud(&rhs))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HiddenReport {
    pub distances: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Distances for depths 1..=depth and their successive ratios.
pub fn hidden_symmetry_check(pair: &HiddenPair, depth: usize) -> HiddenReport {
    let distances: Vec<f64> = (1..=depth).map(|n| pair.distance(n)).collect();
    let ratios = distances.windows(2).map(|w| w[1] / w[0]).collect();
    HiddenReport { distances, ratios }
}

/// A minimal pattern: the leaves between two special vertices, normalized by
/// the similarity taking the first endpoint to 0 and the second to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    pub triangles: Vec<[Point2; 3]>,
}

fn cmp_point(p: &Point2, q: &Point2) -> std::cmp::Ordering {
    p.x.cmp(&q.x).then_with(|| p.y.cmp(&q.y))
}

/// Minimal pattern of the snowflake between two right-angle vertices.
pub fn minimal_pattern(tree: &mut ShapeTree, v1: &Point2, v2: &Point2) -> Result<Pattern> {
    let find = |tree: &mut ShapeTree, v: &Point2| -> Result<ShapePath> {
        Ok(tree.locate(v, PointRole::Special, MAX_DEPTH)?.swap_remove(0).path)
    };
    let (p1, p2) = (find(tree, v1)?, find(tree, v2)?);
    let mut subd: HashSet<ShapePath> = HashSet::new();
    for p in [&p1, &p2] {
        for i in 1..p.len() {
            subd.insert(p[..i].to_vec());
        }
    }
    let end = |mut p: ShapePath| {
        while subd.contains(&p) {
            p.push(2);
        }
        p
    };
    let (e1, e2) = (end(p1), end(p2));
    let mut leaves = Vec::new();
    fn walk(p: ShapePath, subd: &HashSet<ShapePath>, out: &mut Vec<ShapePath>) {
        if subd.contains(&p) {
            for c in 0..5u8 {
                let mut q = p.clone();
                q.push(c);
                walk(q, subd, out);
            }
        } else {
            out.push(p);
        }
    }
    for i in 0..8u8 {
        walk(vec![i], &subd, &mut leaves);
    }
    let n = leaves.len();
    let i1 = leaves.iter().position(|p| *p == e1).expect("leaf present");
    let i2 = leaves.iter().position(|p| *p == e2).expect("leaf present");
    let (fwd, bwd) = ((i2 + n - i1) % n, (i1 + n - i2) % n);
    let seg: Vec<&ShapePath> = if fwd <= bwd {
        (0..=fwd).map(|k| &leaves[(i1 + k) % n]).collect()
    } else {
        (0..=bwd).map(|k| &leaves[(i1 + n - k) % n]).collect()
    };
    let d = v2 - v1;
    let inv = d.norm2().inv()?;
    let conj = Point2::new(d.x.clone(), -&d.y);
    let triangles = seg
        .into_iter()
        .map(|p| {
            let mut v: Vec<Point2> = tree.shape(p).vertices().iter().map(|q| (q - v1).cmul(&conj).scale(&inv)).collect();
            v.sort_by(cmp_point);
            [v[0].clone(), v[1].clone(), v[2].clone()]
        })
        .collect();
    Ok(Pattern { triangles })
}

/// Patterns of every edge of a curve, grouped by the edge's symbol.
pub fn patterns_by_type(tree: &mut ShapeTree, vertices: &[Point2], word: &[usize]) -> Result<HashMap<usize, HashSet<Pattern>>> {
    let mut out: HashMap<usize, HashSet<Pattern>> = HashMap::new();
    for (k, &t) in word.iter().enumerate() {
        let p = minimal_pattern(tree, &vertices[k], &vertices[k + 1])?;
        out.entry(t).or_default().insert(p);
    }
    Ok(out)
}

/// Pairs `(T∖P, P∖T)` of trapezoid midpoints that are never parallelogram
/// centres and the converse, both collected up to `depth`.
pub fn a2_definition_gap(depth: usize) -> (usize, usize) {
    let mut t = HashSet::new();
    let mut p = HashSet::new();
    let mut l = ShapeList::seed(FractalFamily::I2);
    for d in 0..=depth {
        for s in &l.shapes {
            if s.kind == Kind::Trapezoid { &mut t } else { &mut p }.insert(s.special());
        }
        if d < depth {
            l = l.subdivide();
        }
    }
    (t.difference(&p).count(), p.difference(&t).count())
}

/// Carpet points (corners and special points up to `depth`) inside a removed
/// open square of the Sierpinski carpet on [0, 3]², checked to `levels`.
pub fn sierpinski_violations(depth: usize, levels: usize) -> usize {
    let third = third();
    let two_thirds = QuadVal::ratio(2, 3);
    let in_hole = |p: &Point2| {
        let uv = carpet_uv(p);
        let (zero, three) = (QuadVal::zero(), QuadVal::int(3));
        if uv.x < zero || uv.x > three || uv.y < zero || uv.y > three {
            return true;
        }
        let mut size = QuadVal::int(3);
        for _ in 0..levels {
            let fx = &uv.x / &size;
            let fy = &uv.y / &size;
            let rx = &fx - &QuadVal::from(fx.floor());
            let ry = &fy - &QuadVal::from(fy.floor());
            if rx > third && rx < two_thirds && ry > third && ry < two_thirds {
                return true;
            }
            size = &size * &third;
        }
        false
    };
    let mut pts = special_points(FractalFamily::I2, PointRole::Special, depth);
    pts.extend(special_points(FractalFamily::I2, PointRole::Corner, depth));
    pts.iter().filter(|p| in_hole(p)).count()
}

fn orient(a: &Point2, b: &Point2, c: &Point2) -> i8 {
    (b - a).cross(&(c - a)).signum()
}

fn on_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    orient(a, b, p) == 0 && (p - a).dot(&(p - b)).signum() <= 0
}

fn segments_meet(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// True when the closed polyline has no repeated vertex and no two
/// non-adjacent edges meet. Candidate pairs are found with float boxes.
pub fn is_simple_closed(points: &[Point2]) -> bool {
    let n = points.len();
    if n < 3 {
        return false;
    }
    if points.iter().collect::<HashSet<_>>().len() != n {
        return false;
    }
    let f: Vec<(f64, f64)> = points.iter().map(|p| p.to_f64()).collect();
    let mut boxes: Vec<(f64, f64, f64, f64, usize)> = (0..n)
        .map(|i| {
            let (p, q) = (f[i], f[(i + 1) % n]);
            (p.0.min(q.0) - SLACK, p.0.max(q.0) + SLACK, p.1.min(q.1) - SLACK, p.1.max(q.1) + SLACK, i)
        })
        .collect();
    boxes.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (k, &(_, x1, y0, y1, i)) in boxes.iter().enumerate() {
        for &(ox0, _, oy0, oy1, j) in &boxes[k + 1..] {
            if ox0 > x1 {
                break;
            }
            if oy0 > y1 || oy1 < y0 {
                continue;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            if segments_meet(&points[i], &points[(i + 1) % n], &points[j], &points[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds() {
        let s = snowflake_seed();
        assert_eq!(s.len(), 8);
        let sv = QuadVal::silver();
        let t0 = &s[0];
        assert_eq!(t0.special(), Point2::origin());
        assert_eq!(t0.a, Point2::new(half(), -&(&sv * &half())));
        assert_eq!(t0.b, Point2::new(-&(&sv * &half()), -half()));
        let c = carpet_seed();
        assert_eq!(c.len(), 8);
        let centre = c.iter().take(4).fold(Point2::origin(), |acc, t| acc + t.a.clone()).scale(&QuadVal::ratio(1, 4));
        assert_eq!(centre, Point2::new(QuadVal::ratio(3, 2), QuadVal::ratio(3, 2)));
        assert!(c.iter().any(|t| t.a == Point2::new(QuadVal::ratio(-3, 2), QuadVal::ratio(3, 2))));
    }

    #[test]
    fn triangle_children() {
        let t = &snowflake_seed()[0];
        let ch = t.children();
        // Outer children shrink by √2 - 1, the middle three by its square.
        let r = QuadVal::ints(-1, 1);
        let hyp = (&t.b - &t.a).norm2();
        let r2 = &r * &r;
        for (i, c) in ch.iter().enumerate() {
            let f = if i == 0 || i == 4 { r2.clone() } else { &r2 * &r2 };
            assert_eq!((&c.b - &c.a).norm2(), &hyp * &f);
            assert_eq!((&c.special() - &c.a).dot(&(&c.special() - &c.b)), QuadVal::zero());
        }
        assert_eq!(ch[2].special(), t.special());
        assert_eq!(ch[0].a, t.a);
        assert_eq!(ch[4].b, t.b);
    }

    #[test]
    fn quad_children_keep_special() {
        for s in carpet_seed().iter().take(1).flat_map(|t| {
            let mut v = vec![t.clone()];
            v.extend(t.children());
            v
        }) {
            assert_eq!(s.children()[2].special(), s.special());
            assert_eq!(s.children()[0].a, s.a);
            assert_eq!(s.children()[4].b, s.b);
        }
    }

    #[test]
    fn counts_and_colours() {
        let mut l = ShapeList::seed(FractalFamily::I3);
        let mut c = ShapeList::seed(FractalFamily::I2);
        for n in 0..4 {
            assert_eq!(l.shapes.len(), 8 * 5usize.pow(n));
            assert_eq!(l.colours(), c.colours());
            let next = l.subdivide();
            let want: Vec<u8> = l.colours().into_iter().flat_map(colour_rule).collect();
            assert_eq!(next.colours(), want);
            l = next;
            c = c.subdivide();
        }
    }

    #[test]
    fn descendants_stay_in_prune_regions() {
        for fam in [FractalFamily::I2, FractalFamily::I3] {
            for root in seed(fam).iter().take(2) {
                let ap = root.approx();
                for d in descendants(root, 4) {
                    for p in d.vertices() {
                        assert!(ap.may_contain(p.to_f64()));
                        if fam == FractalFamily::I2 {
                            assert!(root.polygon().contains(&p));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn special_sets_grow() {
        let a0 = special_points(FractalFamily::I3, PointRole::Special, 0);
        assert_eq!(a0.len(), 8);
        let a1 = special_points(FractalFamily::I3, PointRole::Special, 1);
        let a2 = special_points(FractalFamily::I3, PointRole::Special, 2);
        assert!(a0.len() < a1.len() && a1.len() < a2.len());
        assert!(a0.is_subset(&a1));
    }

    #[test]
    fn membership() {
        let m = vertex_membership(&[Point2::origin()], FractalFamily::I3, 0).unwrap();
        assert_eq!(m, vec![true]);
        let sv = QuadVal::silver();
        let tri = [Point2::origin(), Point2::new(-&(&sv + &QuadVal::one()), -&(&sv + &QuadVal::one())), Point2::new(QuadVal::zero(), -&(&sv * &QuadVal::int(2)))];
        assert!(vertex_membership(&tri, FractalFamily::I3, MAX_DEPTH).unwrap().iter().all(|&b| b));
        assert_eq!(vertex_membership(&[Point2::ints(40, 40)], FractalFamily::I3, MAX_DEPTH).unwrap(), vec![false]);
    }

    #[test]
    fn canonical_pairs_follow_special_points() {
        let s = canonical_map_sample(2);
        assert_eq!(s.len(), 200);
        let deeper = canonical_map_sample(3);
        // Middle children keep both special points.
        for (i, p) in s.iter().enumerate() {
            assert_eq!(&deeper[5 * i + 2], p);
        }
    }

    #[test]
    fn snowflake_hidden_symmetry() {
        let r = hidden_symmetry_check(&HiddenPair::snowflake(), 4);
        let want = 2f64.sqrt() - 1.0;
        assert!((r.ratios[1] - want).abs() < 1e-6);
        assert!((r.ratios[2] - want).abs() < 1e-6);
    }

    #[test]
    fn carpet_hidden_symmetry() {
        for pair in [HiddenPair::carpet_a(), HiddenPair::carpet_b()] {
            let r = hidden_symmetry_check(&pair, 5);
            assert!(r.distances.windows(2).all(|w| w[1] < w[0]));
            // Two steps shrink by 1/3.
            assert!((r.distances[4] / r.distances[2] - 1.0 / 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn carpet_inside_sierpinski() {
        assert_eq!(sierpinski_violations(3, 5), 0);
    }

    #[test]
    fn outlines_are_simple() {
        for n in 0..3 {
            assert!(is_simple_closed(&ShapeList::at_depth(FractalFamily::I3, n).outline()));
        }
        let bowtie = [Point2::ints(0, 0), Point2::ints(1, 1), Point2::ints(1, 0), Point2::ints(0, 1)];
        assert!(!is_simple_closed(&bowtie));
    }
}
