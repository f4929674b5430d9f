//! Scenes of polygons, polylines and points, emitted as SVG 1.1 or JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::geom::Point2;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Primitive {
    Polygon { points: Vec<(f64, f64)>, style: String },
    Polyline { points: Vec<(f64, f64)>, style: String },
    Point { at: (f64, f64), style: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub name: String,
    pub items: Vec<Primitive>,
}

/// Layers draw in order, so later layers sit on top.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub schema: u32,
    pub title: String,
    /// Set when coordinates come from floating-point exploration.
    pub approximate: bool,
    pub layers: Vec<Layer>,
    /// Free-form data carried into JSON output.
    pub data: serde_json::Value,
}

fn pts(ps: &[Point2]) -> Vec<(f64, f64)> {
    ps.iter().map(|p| p.to_f64()).collect()
}

impl Scene {
    pub fn new(title: &str) -> Self {
        Scene { schema: SCHEMA_VERSION, title: title.to_string(), approximate: false, layers: Vec::new(), data: serde_json::Value::Null }
    }

    /// The named layer, created on first use.
    pub fn layer(&mut self, name: &str) -> &mut Layer {
        if let Some(i) = self.layers.iter().position(|l| l.name == name) {
            return &mut self.layers[i];
        }
        self.layers.push(Layer { name: name.to_string(), items: Vec::new() });
        self.layers.last_mut().unwrap()
    }

    pub fn polygon(&mut self, layer: &str, ps: &[Point2], style: &str) {
        self.polygon_f64(layer, pts(ps), style);
    }

    pub fn polygon_f64(&mut self, layer: &str, points: Vec<(f64, f64)>, style: &str) {
        self.layer(layer).items.push(Primitive::Polygon { points, style: style.into() });
    }

    pub fn polyline(&mut self, layer: &str, ps: &[Point2], style: &str) {
        self.polyline_f64(layer, pts(ps), style);
    }

    pub fn polyline_f64(&mut self, layer: &str, points: Vec<(f64, f64)>, style: &str) {
        self.layer(layer).items.push(Primitive::Polyline { points, style: style.into() });
    }

    pub fn point(&mut self, layer: &str, p: &Point2, style: &str) {
        self.point_f64(layer, p.to_f64(), style);
    }

    pub fn point_f64(&mut self, layer: &str, at: (f64, f64), style: &str) {
        self.layer(layer).items.push(Primitive::Point { at, style: style.into() });
    }

    /// (min x, min y, max x, max y) over every primitive, or `None` for an empty scene.
    pub fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        let mut b: Option<(f64, f64, f64, f64)> = None;
        let mut add = |(x, y): (f64, f64)| {
            b = Some(match b {
                None => (x, y, x, y),
                Some((a, c, d, e)) => (a.min(x), c.min(y), d.max(x), e.max(y)),
            });
        };
        for l in &self.layers {
            for it in &l.items {
                match it {
                    Primitive::Polygon { points, .. } | Primitive::Polyline { points, .. } => points.iter().copied().for_each(&mut add),
                    Primitive::Point { at, .. } => add(*at),
                }
            }
        }
        b
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    /// SVG 1.1 with the y axis pointing up and a viewBox fitted to the content.
    pub fn to_svg(&self) -> String {
        let (x0, y0, x1, y1) = self.bounds().unwrap_or((0.0, 0.0, 1.0, 1.0));
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let pad = 0.03 * span;
        let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
        let stroke = span / 600.0;
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"{}\" viewBox=\"{} {} {} {}\">",
            (800.0 * h / w).round().max(1.0),
            num(x0 - pad),
            num(-y1 - pad),
            num(w),
            num(h)
        );
        let _ = writeln!(out, "<title>{}</title>", escape(&self.title));
        if self.approximate {
            out.push_str("<desc>approximate mode: floating-point exploration, not verified</desc>\n");
        }
        let _ = writeln!(out, "<g transform=\"scale(1,-1)\" stroke-width=\"{}\" stroke-linejoin=\"round\">", num(stroke));
        for l in &self.layers {
            let _ = writeln!(out, "<g id=\"{}\">", escape(&l.name));
            for it in &l.items {
                match it {
                    Primitive::Polygon { points, style } => {
                        let (fill, line) = palette(style);
                        let _ = writeln!(out, "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"{line}\"/>", path(points));
                    }
                    Primitive::Polyline { points, style } => {
                        let (_, line) = palette(style);
                        let _ = writeln!(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"{line}\"/>", path(points));
                    }
                    Primitive::Point { at, style } => {
                        let (fill, _) = palette(style);
                        let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>", num(at.0), num(at.1), num(2.5 * stroke));
                    }
                }
            }
            out.push_str("</g>\n");
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

/// Fixed precision keeps output byte-stable across runs.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn path(ps: &[(f64, f64)]) -> String {
    ps.iter().map(|&(x, y)| format!("{},{}", num(x), num(y))).collect::<Vec<_>>().join(" ")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// (fill, stroke) for a style tag. Unknown tags fall back to grey.
fn palette(style: &str) -> (&'static str, &'static str) {
    match style {
        "red" => ("#e8776f", "#7a1f19"),
        "blue" => ("#7fa7e0", "#1d3f73"),
        "table" => ("#444444", "#000000"),
        "tile" => ("#f2d57e", "#8a6d14"),
        "trapezoid" => ("#e8a25d", "#6b3b0e"),
        "parallelogram" => ("#9ccf8f", "#2f5e24"),
        "triangle" => ("#b9a3e3", "#45307a"),
        "curve" => ("none", "#c0102a"),
        "orbit" => ("#1f1f1f", "#1f1f1f"),
        "outline" => ("none", "#202020"),
        _ => ("#d0d0d0", "#606060"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scene_is_valid() {
        let s = Scene::new("empty");
        let svg = s.to_svg();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(s.bounds(), None);
    }

    #[test]
    fn deterministic_and_fitted() {
        let mut s = Scene::new("sq & co");
        s.polygon("a", &[Point2::ints(0, 0), Point2::ints(2, 0), Point2::ints(2, 1)], "red");
        s.point("b", &Point2::ints(-1, 3), "orbit");
        assert_eq!(s.bounds(), Some((-1.0, 0.0, 2.0, 3.0)));
        let a = s.to_svg();
        assert_eq!(a, s.clone().to_svg());
        assert!(a.contains("sq &amp; co"));
        assert!(a.contains("viewBox=\"-1.090000 -3.090000 3.180000 3.180000\""));
        let back: Scene = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.layers.len(), 2);
        s.polyline("a", &[Point2::ints(0, 0)], "curve");
        assert_eq!(s.layers.len(), 2);
    }
}
