//! Scenes and deterministic SVG output: the strip model with its ladder of
//! fixed orbits, and a fundamental domain with traced geodesics.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::hyperbolic::FuchsianRep;
use crate::intersection::{with_generic_domain, IntersectionError};
use crate::orbit_models::{OrbitPoint, StripScene};
use crate::trace::{segment_crossing, segment_point, trace_in_domain};
use crate::word::CyclicWord;

const SIZE: f64 = 480.0;
const PALETTE: [&str; 4] = ["#1f5fa8", "#b8461b", "#2d8a3e", "#7a3fa0"];

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
}

fn line(out: &mut String, a: [f64; 2], b: [f64; 2], stroke: &str, width: f64, class: &str) {
    let _ = writeln!(
        out,
        "<line class=\"{class}\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{stroke}\" stroke-width=\"{width:.2}\"/>",
        a[0], a[1], b[0], b[1]
    );
}

/// The strip drawn with stable leaves horizontal: chart `x` across the
/// strip, chart `y` up the page.
pub fn strip_svg(scene: &StripScene) -> String {
    let k = scene.k as f64;
    let (ymin, ymax) = (-k - 1.0, k + 1.0);
    let unit = SIZE / (ymax - ymin);
    let width = 2.0 * SIZE / 3.0;
    let (left, strip_w) = (width / 4.0, width / 2.0);
    let to_px = |c: [f64; 2]| [left + c[0] * strip_w, (ymax - c[1]) * unit];
    let mut out = String::new();
    header(&mut out, width, SIZE);
    line(&mut out, to_px([0.0, ymin]), to_px([0.0, ymax]), "black", 1.5, "boundary");
    line(&mut out, to_px([1.0, ymin]), to_px([1.0, ymax]), "black", 1.5, "boundary");
    for &s in &scene.stable_leaves {
        line(&mut out, to_px([0.0, s]), to_px([1.0, s]), PALETTE[0], 1.0, "stable");
        let p = to_px([0.0, s]);
        let _ = writeln!(out, "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"11\" text-anchor=\"end\">l{}</text>", p[0] - 4.0, p[1] + 4.0, s as i64);
    }
    for &u in &scene.unstable_leaves {
        let a = OrbitPoint { s: (u - 1.0).max(ymin), u };
        let b = OrbitPoint { s: (u + 1.0).min(ymax), u };
        line(&mut out, to_px(a.chart()), to_px(b.chart()), PALETTE[1], 1.0, "unstable");
    }
    for e in &scene.ladder {
        let p = to_px(e.point.chart());
        let sign = if e.orientation > 0 { "+" } else { "-" };
        let _ = writeln!(out, "<circle class=\"orbit\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"3.5\" fill=\"black\"/>", p[0], p[1]);
        let _ = writeln!(out, "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"11\">beta{} ({sign})</text>", p[0] + 6.0, p[1] - 4.0, e.index);
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedCurve {
    pub curve: String,
    pub segments: Vec<[[f64; 2]; 2]>,
}

/// A fundamental domain in the Klein model with geodesic arcs and the
/// crossings between distinct curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceScene {
    pub schema_version: u32,
    pub genus: usize,
    pub polygon: Vec<[f64; 2]>,
    pub traces: Vec<TracedCurve>,
    pub crossings: Vec<[f64; 2]>,
}

/// Trace every curve in one generic fundamental domain.
pub fn surface_scene(rep: &FuchsianRep, curves: &[CyclicWord]) -> Result<SurfaceScene, IntersectionError> {
    with_generic_domain(rep, |d| {
        let traces = curves.iter().map(|c| trace_in_domain(&c.to_word(), rep, d)).collect::<Result<Vec<_>, _>>()?;
        let mut crossings = Vec::new();
        for (i, a) in traces.iter().enumerate() {
            for b in &traces[i + 1..] {
                for s in &a.segments {
                    for t in &b.segments {
                        if let Some((x, _)) = segment_crossing(s, t)? {
                            crossings.push(segment_point(s, x));
                        }
                    }
                }
            }
        }
        Ok(SurfaceScene {
            schema_version: 1,
            genus: rep.genus(),
            polygon: d.vertices(),
            traces: curves
                .iter()
                .zip(&traces)
                .map(|(c, t)| TracedCurve {
                    curve: c.to_string(),
                    segments: t.segments.iter().map(|s| [s.start, s.end]).collect(),
                })
                .collect(),
            crossings,
        })
    })
}

pub fn surface_svg(scene: &SurfaceScene) -> String {
    let r = SIZE / 2.0 - 10.0;
    let to_px = |k: [f64; 2]| [SIZE / 2.0 + r * k[0], SIZE / 2.0 - r * k[1]];
    let mut out = String::new();
    header(&mut out, SIZE, SIZE);
    let _ = writeln!(out, "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{r:.3}\" fill=\"none\" stroke=\"#999999\"/>", SIZE / 2.0, SIZE / 2.0);
    let pts: Vec<String> = scene
        .polygon
        .iter()
        .map(|v| {
            let p = to_px(*v);
            format!("{:.3},{:.3}", p[0], p[1])
        })
        .collect();
    let _ = writeln!(out, "<polygon class=\"domain\" points=\"{}\" fill=\"#f4f4f4\" stroke=\"black\"/>", pts.join(" "));
    for (i, t) in scene.traces.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(out, "<g class=\"trace\" data-curve=\"{}\">", t.curve);
        for s in &t.segments {
            line(&mut out, to_px(s[0]), to_px(s[1]), colour, 1.5, "arc");
        }
        out.push_str("</g>\n");
    }
    for c in &scene.crossings {
        let p = to_px(*c);
        let _ = writeln!(out, "<circle class=\"crossing\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\"/>", p[0], p[1]);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filling::parse_class;
    use crate::hyperbolic::build_regular_rep;
    use crate::intersection::tracing_oracle_count;
    use crate::orbit_models::{strip_scene, StripModel};

    #[test]
    fn strip_figure() {
        let scene = strip_scene(&StripModel::default(), 2);
        let svg = strip_svg(&scene);
        assert_eq!(svg.matches("class=\"orbit\"").count(), 5);
        assert_eq!(svg, strip_svg(&scene));
        // stable leaves are horizontal
        for l in svg.lines().filter(|l| l.contains("class=\"stable\"")) {
            let y1 = l.split("y1=\"").nth(1).unwrap().split('"').next().unwrap();
            let y2 = l.split("y2=\"").nth(1).unwrap().split('"').next().unwrap();
            assert_eq!(y1, y2);
        }
    }

    #[test]
    fn surface_figure() {
        let rep = build_regular_rep(2).unwrap();
        let a = parse_class("a1a2", &rep).unwrap();
        let b = parse_class("b1", &rep).unwrap();
        let scene = surface_scene(&rep, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(scene.crossings.len(), tracing_oracle_count(&a, &b, &rep).unwrap());
        let empty = surface_scene(&rep, &[]).unwrap();
        assert_eq!(empty.polygon.len(), 8);
        assert!(!surface_svg(&empty).contains("class=\"arc\""));
    }
}
