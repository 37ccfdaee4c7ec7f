//! Upper half-plane pictures: vertices on the real axis, edges as
//! semicircles orthogonal to it, edges to 1/0 as vertical rays.

use std::collections::BTreeMap;
use std::fmt::Write;

use kfarey::{FareyVertex, LevelGraph};

const WIDTH: f64 = 1200.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 24.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f",
];

/// Color for the `i`-th label out of `n`. The palette covers small scenes;
/// larger ones use an odd multiplier mod 2^24, which is injective.
pub fn color(i: usize, n: usize) -> String {
    if n <= PALETTE.len() {
        PALETTE[i].to_string()
    } else {
        format!("#{:06x}", (i as u64).wrapping_mul(0x9e3779) & 0xff_ffff)
    }
}

fn value(v: FareyVertex) -> Option<f64> {
    (!v.is_infinity()).then(|| v.p() as f64 / v.q() as f64)
}

enum Shape {
    Arc { a: f64, b: f64 },
    Ray { x: f64 },
    Segment { from: (f64, f64), to: (f64, f64) },
}

struct Stroke {
    shape: Shape,
    color: usize,
    width: f64,
}

pub struct SvgScene {
    x_range: (f64, f64),
    labels: usize,
    vertices: BTreeMap<FareyVertex, usize>,
    strokes: Vec<Stroke>,
    title: String,
}

impl SvgScene {
    pub fn new(x_range: (f64, f64), labels: usize, title: impl Into<String>) -> Self {
        SvgScene {
            x_range,
            labels: labels.max(1),
            vertices: BTreeMap::new(),
            strokes: Vec::new(),
            title: title.into(),
        }
    }

    fn visible(&self, v: FareyVertex) -> bool {
        value(v).is_none_or(|x| (self.x_range.0..=self.x_range.1).contains(&x))
    }

    /// Adds the edge `{v, w}` if both ends are visible, with its ends.
    pub fn edge(&mut self, v: FareyVertex, w: FareyVertex, label: usize) -> bool {
        if !self.visible(v) || !self.visible(w) {
            return false;
        }
        let shape = match (value(v), value(w)) {
            (Some(a), Some(b)) => Shape::Arc { a: a.min(b), b: a.max(b) },
            (Some(x), None) | (None, Some(x)) => Shape::Ray { x },
            (None, None) => return false,
        };
        self.strokes.push(Stroke { shape, color: label, width: 1.0 });
        self.vertex(v, label);
        self.vertex(w, label);
        true
    }

    pub fn vertex(&mut self, v: FareyVertex, label: usize) {
        if self.visible(v) {
            self.vertices.entry(v).or_insert(label);
        }
    }

    /// A straight segment between two points given as `(x, height)`, with
    /// height in the same units as `x`.
    pub fn segment(&mut self, from: (f64, f64), to: (f64, f64), label: usize) {
        self.strokes.push(Stroke { shape: Shape::Segment { from, to }, color: label, width: 2.5 });
    }

    pub fn render(&self) -> String {
        let (x0, x1) = self.x_range;
        let scale = (WIDTH - 2.0 * MARGIN) / (x1 - x0);
        let base = HEIGHT - MARGIN;
        let sx = |x: f64| MARGIN + (x - x0) * scale;
        let sy = |h: f64| base - h * scale;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(out, r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="14">{}</text>"#, MARGIN, escape(&self.title));
        let _ = writeln!(
            out,
            r#"<path d="M {:.3} {base:.3} L {:.3} {base:.3}" stroke="black" stroke-width="0.5" fill="none"/>"#,
            sx(x0),
            sx(x1)
        );
        for s in &self.strokes {
            let c = color(s.color, self.labels);
            let d = match s.shape {
                Shape::Arc { a, b } => {
                    let r = (b - a) / 2.0 * scale;
                    format!("M {:.3} {base:.3} A {r:.3} {r:.3} 0 0 1 {:.3} {base:.3}", sx(a), sx(b))
                }
                Shape::Ray { x } => format!("M {:.3} {base:.3} L {:.3} 0", sx(x), sx(x)),
                Shape::Segment { from, to } => format!(
                    "M {:.3} {:.3} L {:.3} {:.3}",
                    sx(from.0),
                    sy(from.1),
                    sx(to.0),
                    sy(to.1)
                ),
            };
            let _ = writeln!(
                out,
                r#"<path d="{d}" stroke="{c}" stroke-width="{}" fill="none"/>"#,
                s.width
            );
        }
        for (v, &label) in &self.vertices {
            let c = color(label, self.labels);
            match value(*v) {
                Some(x) => {
                    let _ = writeln!(out, r#"<circle cx="{:.3}" cy="{base:.3}" r="2.5" fill="{c}"><title>{v}</title></circle>"#, sx(x));
                }
                None => {
                    let _ = writeln!(
                        out,
                        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12" fill="{c}">rays meet 1/0</text>"#,
                        WIDTH - MARGIN - 90.0,
                        MARGIN
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The window of `g` drawn with one color per component. Components are
/// numbered by their smallest vertex.
pub fn components_scene(g: &LevelGraph, x_range: (f64, f64)) -> SvgScene {
    let comps = g.components();
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&c| comps[c].iter().map(|&i| g.vertices()[i]).min());
    let mut label = vec![0; comps.len()];
    for (l, &c) in order.iter().enumerate() {
        label[c] = l;
    }
    let title = format!("{} k={} {}, {} components", g.mode(), g.k(), g.window(), comps.len());
    let mut scene = SvgScene::new(x_range, comps.len(), title);
    for (i, j) in g.edges() {
        let l = label[g.component_of(i)];
        scene.edge(g.vertices()[i], g.vertices()[j], l);
    }
    for (i, &v) in g.vertices().iter().enumerate() {
        scene.vertex(v, label[g.component_of(i)]);
    }
    scene
}
