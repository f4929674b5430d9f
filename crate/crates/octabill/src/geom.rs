//! Exact planar primitives over Q(√2).

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QuadVal;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Point2 {
    pub x: QuadVal,
    pub y: QuadVal,
}

/// Vectors and points share one representation.
pub type Vec2 = Point2;

impl std::fmt::Display for Point2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point2 {
    pub fn new(x: QuadVal, y: QuadVal) -> Self {
        Point2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point2::new(QuadVal::int(x), QuadVal::int(y))
    }

    pub fn origin() -> Self {
        Point2::ints(0, 0)
    }

    pub fn cross(&self, o: &Point2) -> QuadVal {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Point2) -> QuadVal {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn norm2(&self) -> QuadVal {
        self.dot(self)
    }

    pub fn scale(&self, k: &QuadVal) -> Point2 {
        Point2::new(&self.x * k, &self.y * k)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(&self) -> Point2 {
        Point2::new(-&self.y, self.x.clone())
    }

    /// Counterclockwise rotation by `k`·45°.
    pub fn rot45(&self, k: i64) -> Point2 {
        let w = omega(k);
        Point2::new(&w.x * &self.x - &w.y * &self.y, &w.y * &self.x + &w.x * &self.y)
    }

    /// Product as complex numbers.
    pub fn cmul(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x * &o.x - &self.y * &o.y, &self.x * &o.y + &self.y * &o.x)
    }

    /// Quotient as complex numbers.
    pub fn cdiv(&self, o: &Point2) -> Result<Point2> {
        let n = o.norm2().inv()?;
        Ok(Point2::new(
            (&self.x * &o.x + &self.y * &o.y) * &n,
            (&self.y * &o.x - &self.x * &o.y) * &n,
        ))
    }

    pub fn midpoint(&self, o: &Point2) -> Point2 {
        (self + o).scale(&QuadVal::ratio(1, 2))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// The eighth root of unity `ω^k` as a point.
pub fn omega(k: i64) -> Point2 {
    let h = QuadVal::half_sqrt2;
    let z = QuadVal::zero;
    let one = QuadVal::one;
    match k.rem_euclid(8) {
        0 => Point2::new(one(), z()),
        1 => Point2::new(h(), h()),
        2 => Point2::new(z(), one()),
        3 => Point2::new(-h(), h()),
        4 => Point2::new(-one(), z()),
        5 => Point2::new(-h(), -h()),
        6 => Point2::new(z(), -one()),
        _ => Point2::new(h(), -h()),
    }
}

macro_rules! vecop {
    ($tr:ident, $f:ident) => {
        impl<'a> $tr<&'a Point2> for &'a Point2 {
            type Output = Point2;
            fn $f(self, o: &'a Point2) -> Point2 {
                Point2::new((&self.x).$f(&o.x), (&self.y).$f(&o.y))
            }
        }
        impl $tr<Point2> for Point2 {
            type Output = Point2;
            fn $f(self, o: Point2) -> Point2 {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Point2> for Point2 {
            type Output = Point2;
            fn $f(self, o: &'a Point2) -> Point2 {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<Point2> for &'a Point2 {
            type Output = Point2;
            fn $f(self, o: Point2) -> Point2 {
                self.$f(&o)
            }
        }
    };
}

vecop!(Add, add);
vecop!(Sub, sub);

impl Neg for &Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-&self.x, -&self.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        -&self
    }
}

impl Mul<&Point2> for &QuadVal {
    type Output = Point2;
    fn mul(self, p: &Point2) -> Point2 {
        p.scale(self)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OrientedLine {
    pub anchor: Point2,
    pub dir: Vec2,
}

impl OrientedLine {
    pub fn new(anchor: Point2, dir: Vec2) -> Self {
        assert!(!(dir.x.is_zero() && dir.y.is_zero()), "zero direction");
        OrientedLine { anchor, dir }
    }

    pub fn through(a: &Point2, b: &Point2) -> Self {
        OrientedLine::new(a.clone(), b - a)
    }

    /// +1 when `p` is to the left.
    pub fn side_of(&self, p: &Point2) -> i8 {
        self.offset(p).signum()
    }

    /// Signed area of (dir, p - anchor).
    pub fn offset(&self, p: &Point2) -> QuadVal {
        self.dir.cross(&(p - &self.anchor))
    }

    /// Point reflection of the line through `c`; the direction is reversed.
    pub fn reflect_through(&self, c: &Point2) -> OrientedLine {
        let a = c.scale(&QuadVal::int(2)) - &self.anchor;
        OrientedLine::new(a, -&self.dir)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Pointed {
    A,
    B,
}

/// Open region between two parallel lines, one of them pointed.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Strip {
    pub line_a: OrientedLine,
    pub line_b: OrientedLine,
    pub preferred: Pointed,
}

impl Strip {
    pub fn new(line_a: OrientedLine, line_b: OrientedLine, preferred: Pointed) -> Result<Self> {
        if !line_a.dir.cross(&line_b.dir).is_zero() || line_a.side_of(&line_b.anchor) == 0 {
            return Err(Error::Invalid("strip lines must be parallel and distinct".into()));
        }
        Ok(Strip { line_a, line_b, preferred })
    }

    /// The pointed boundary and the other one.
    pub fn lines(&self) -> (&OrientedLine, &OrientedLine) {
        match self.preferred {
            Pointed::A => (&self.line_a, &self.line_b),
            Pointed::B => (&self.line_b, &self.line_a),
        }
    }

    /// Affine coordinate across the strip: 0 on the pointed line, 1 on the other.
    pub fn coord(&self, p: &Point2) -> QuadVal {
        let (l, o) = self.lines();
        l.offset(p) / l.offset(&o.anchor)
    }

    /// Change of `coord` along `v`.
    pub fn coord_step(&self, v: &Vec2) -> QuadVal {
        let (l, o) = self.lines();
        l.dir.cross(v) / l.offset(&o.anchor)
    }

    pub fn contains(&self, p: &Point2) -> bool {
        let t = self.coord(p);
        t.signum() > 0 && t < QuadVal::one()
    }

    /// Area of the parallelogram where this strip meets another; `None` if parallel.
    pub fn meet_area(&self, o: &Strip) -> Option<QuadVal> {
        let c = self.line_a.dir.cross(&o.line_a.dir);
        if c.is_zero() {
            return None;
        }
        let w1 = self.line_a.offset(&self.line_b.anchor);
        let w2 = o.line_a.offset(&o.line_b.anchor);
        Some((w1 * w2 / c).abs())
    }
}

/// The strip map `p ↦ p + nV`, returning the image and `n`.
pub fn strip_map(strip: &Strip, v: &Vec2, p: &Point2) -> Result<(Point2, BigInt)> {
    let d = strip.coord_step(v);
    if d != QuadVal::one() && d != -QuadVal::one() {
        return Err(Error::NotCrossing);
    }
    let t = strip.coord(p);
    if t.is_integer() {
        return Err(Error::UndefinedOnLine);
    }
    let f = t.floor();
    let n = if d.signum() > 0 { -f } else { f };
    let q = p + &v.scale(&QuadVal::from(n.clone()));
    Ok((q, n))
}

/// Convex polygon, vertices counterclockwise.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConvexPolygon {
    pub vertices: Vec<Point2>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point2>) -> Self {
        ConvexPolygon { vertices }
    }

    /// Reorders to counterclockwise if needed.
    pub fn ccw(mut vertices: Vec<Point2>) -> Self {
        if signed_area(&vertices).signum() < 0 {
            vertices.reverse();
        }
        ConvexPolygon { vertices }
    }

    /// Regular octagon with vertices `c + r·ω^k`.
    pub fn octagon(c: &Point2, r: &QuadVal) -> Self {
        ConvexPolygon::new((0..8).map(|k| c + &omega(k).scale(r)).collect())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> QuadVal {
        signed_area(&self.vertices)
    }

    /// Vertex average. Interior for any convex polygon.
    pub fn centroid(&self) -> Point2 {
        let mut s = Point2::origin();
        for v in &self.vertices {
            s = s + v;
        }
        s.scale(&QuadVal::ratio(1, self.vertices.len() as i64))
    }

    fn edges(&self) -> impl Iterator<Item = (&Point2, &Point2)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Strict interior test.
    pub fn contains_strict(&self, p: &Point2) -> bool {
        self.edges().all(|(a, b)| (b - a).cross(&(p - a)).signum() > 0)
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point2) -> bool {
        self.edges().all(|(a, b)| (b - a).cross(&(p - a)).signum() >= 0)
    }

    /// True when `p` lies on the boundary.
    pub fn on_boundary(&self, p: &Point2) -> bool {
        self.contains(p) && !self.contains_strict(p)
    }

    pub fn translate(&self, v: &Vec2) -> Self {
        ConvexPolygon::new(self.vertices.iter().map(|p| p + v).collect())
    }

    pub fn map(&self, f: impl Fn(&Point2) -> Point2) -> Self {
        ConvexPolygon::ccw(self.vertices.iter().map(f).collect())
    }

    /// Left and right pieces of the polygon cut by `line`. Zero-area pieces are dropped.
    pub fn clip(&self, line: &OrientedLine) -> (Option<ConvexPolygon>, Option<ConvexPolygon>) {
        let n = self.vertices.len();
        let offs: Vec<QuadVal> = self.vertices.iter().map(|p| line.offset(p)).collect();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            let (p, q) = (&self.vertices[i], &self.vertices[j]);
            let (sp, sq) = (offs[i].signum(), offs[j].signum());
            if sp >= 0 {
                left.push(p.clone());
            }
            if sp <= 0 {
                right.push(p.clone());
            }
            if sp * sq < 0 {
                let t = &offs[i] / (&offs[i] - &offs[j]);
                let x = p + &(q - p).scale(&t);
                left.push(x.clone());
                right.push(x);
            }
        }
        (piece(left), piece(right))
    }

    /// Drops repeated and collinear vertices.
    pub fn simplified(&self) -> Self {
        let mut v: Vec<Point2> = Vec::new();
        for p in &self.vertices {
            if v.last() != Some(p) {
                v.push(p.clone());
            }
        }
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        let mut changed = true;
        while changed && v.len() > 2 {
            changed = false;
            let n = v.len();
            for i in 0..n {
                let (a, b, c) = (&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]);
                if (b - a).cross(&(c - b)).is_zero() {
                    v.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        ConvexPolygon::new(v)
    }

    /// Exact vertex-set equality up to cyclic shift, ignoring collinear points.
    pub fn same_as(&self, o: &ConvexPolygon) -> bool {
        let a = self.simplified().vertices;
        let b = o.simplified().vertices;
        if a.len() != b.len() {
            return false;
        }
        let Some(k) = b.iter().position(|p| *p == a[0]) else {
            return false;
        };
        (0..a.len()).all(|i| a[i] == b[(i + k) % b.len()])
    }

    /// True when the open interiors overlap (separating axis test over edge normals).
    pub fn interiors_meet(&self, o: &ConvexPolygon) -> bool {
        for (poly, other) in [(self, o), (o, self)] {
            for (a, b) in poly.edges() {
                let d = b - a;
                if other.vertices.iter().all(|p| d.cross(&(p - a)).signum() <= 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.vertices.iter().map(|p| p.to_f64()).collect()
    }
}

fn piece(v: Vec<Point2>) -> Option<ConvexPolygon> {
    if v.len() < 3 || signed_area(&v).is_zero() {
        return None;
    }
    Some(ConvexPolygon::new(v).simplified())
}

/// Shoelace area; positive for counterclockwise order.
pub fn signed_area(v: &[Point2]) -> QuadVal {
    let n = v.len();
    let mut s = QuadVal::zero();
    for i in 0..n {
        s += &v[i].cross(&v[(i + 1) % n]);
    }
    s * QuadVal::ratio(1, 2)
}

/// Convex hull, counterclockwise, no collinear points.
pub fn convex_hull(points: &[Point2]) -> ConvexPolygon {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.cmp(&b.x).then(a.y.cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return ConvexPolygon::new(pts);
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && (&lower[lower.len() - 1] - &lower[lower.len() - 2]).cross(&(p - &lower[lower.len() - 1])).signum() <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && (&upper[upper.len() - 1] - &upper[upper.len() - 2]).cross(&(p - &upper[upper.len() - 1])).signum() <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    ConvexPolygon::new(lower)
}

/// Ear-clipping triangulation of a simple counterclockwise polygon.
pub fn triangulate(poly: &[Point2]) -> Vec<ConvexPolygon> {
    let mut v: Vec<Point2> = poly.to_vec();
    let mut out = Vec::new();
    while v.len() > 3 {
        let n = v.len();
        let ear = (0..n).find(|&i| {
            let (a, b, c) = (&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]);
            if (b - a).cross(&(c - b)).signum() <= 0 {
                return false;
            }
            let tri = ConvexPolygon::new(vec![a.clone(), b.clone(), c.clone()]);
            v.iter().all(|p| p == a || p == b || p == c || !tri.contains(p))
        });
        let i = ear.expect("simple polygon has an ear");
        let (a, b, c) = (v[(i + n - 1) % n].clone(), v[i].clone(), v[(i + 1) % n].clone());
        out.push(ConvexPolygon::new(vec![a, b, c]));
        v.remove(i);
    }
    out.push(ConvexPolygon::new(v));
    out
}

/// Affine map `p ↦ M p + t` whose linear part is a similarity.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Similarity {
    pub m: [[QuadVal; 2]; 2],
    pub t: Vec2,
}

impl Similarity {
    pub fn identity() -> Self {
        Similarity {
            m: [[QuadVal::one(), QuadVal::zero()], [QuadVal::zero(), QuadVal::one()]],
            t: Point2::origin(),
        }
    }

    pub fn translation(v: &Vec2) -> Self {
        Similarity { t: v.clone(), ..Similarity::identity() }
    }

    /// Counterclockwise rotation by `k`·45° about `c`.
    pub fn rotation45(k: i64, c: &Point2) -> Self {
        let w = omega(k);
        let m = [[w.x.clone(), -&w.y], [w.y.clone(), w.x.clone()]];
        let lin = Similarity { m, t: Point2::origin() };
        let t = c - &lin.apply(c);
        Similarity { t, ..lin }
    }

    /// Homothety with ratio `r` about `c`.
    pub fn homothety(r: &QuadVal, c: &Point2) -> Self {
        let m = [[r.clone(), QuadVal::zero()], [QuadVal::zero(), r.clone()]];
        Similarity { m, t: c - &c.scale(r) }
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        Point2::new(
            &self.m[0][0] * &p.x + &self.m[0][1] * &p.y + &self.t.x,
            &self.m[1][0] * &p.x + &self.m[1][1] * &p.y + &self.t.y,
        )
    }

    pub fn apply_linear(&self, v: &Vec2) -> Vec2 {
        Point2::new(&self.m[0][0] * &v.x + &self.m[0][1] * &v.y, &self.m[1][0] * &v.x + &self.m[1][1] * &v.y)
    }

    pub fn apply_polygon(&self, poly: &ConvexPolygon) -> ConvexPolygon {
        poly.map(|p| self.apply(p))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        let a = &self.m;
        let b = &other.m;
        let m = [
            [&a[0][0] * &b[0][0] + &a[0][1] * &b[1][0], &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1]],
            [&a[1][0] * &b[0][0] + &a[1][1] * &b[1][0], &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1]],
        ];
        Similarity { m, t: self.apply(&other.t) }
    }

    pub fn det(&self) -> QuadVal {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    /// Square of the scale factor.
    pub fn scale2(&self) -> QuadVal {
        self.det().abs()
    }

    pub fn is_orientation_reversing(&self) -> bool {
        self.det().signum() < 0
    }

    pub fn inverse(&self) -> Result<Similarity> {
        let d = self.det().inv()?;
        let m = [
            [&self.m[1][1] * &d, -(&self.m[0][1] * &d)],
            [-(&self.m[1][0] * &d), &self.m[0][0] * &d],
        ];
        let lin = Similarity { m, t: Point2::origin() };
        let t = -lin.apply(&self.t);
        Ok(Similarity { t, ..lin })
    }
}

/// Float Hausdorff distance between two point clouds.
pub fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    fn dir(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
        a.iter()
            .map(|p| b.iter().map(|q| (p.0 - q.0).hypot(p.1 - q.1)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }
    dir(a, b).max(dir(b, a))
}

/// Converts an integer exponent to `i64`, saturating.
pub fn small(n: &BigInt) -> i64 {
    n.to_i64().unwrap_or(if n.sign() == num_bigint::Sign::Minus { i64::MIN } else { i64::MAX })
}
