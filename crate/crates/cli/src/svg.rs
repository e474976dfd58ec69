//! Static pictures of curves on the polygon.
//!
//! Triangle `j` has corners `O`, `P_j`, `P_{j+1}`. A pair of curves is drawn
//! with the interleaving of the canonical overlay, so the picture crosses
//! exactly as often as the overlay does. Otherwise point `i` of curve `k` (of
//! `n` drawn) on an edge of weight `w` sits at fraction
//! `(i + (k + 1) / (n + 1)) / w` from the tail. Arcs are straight inside
//! triangles, and a path is broken wherever the curve leaves through a
//! polygon side.

use std::fmt::Write as _;

use mcg_core::curves::{overlay, ArcRealization};
use mcg_core::{NormalCurve, PolygonSurface, Result};

const SIZE: f64 = 520.0;
const RADIUS: f64 = 230.0;
const COLOURS: [&str; 6] = ["#c0392b", "#2471a3", "#1e8449", "#b9770e", "#7d3c98", "#117a65"];

type Point = (f64, f64);

fn corner(s: &PolygonSurface, j: usize) -> Point {
    let n = s.sides() as f64;
    let theta = std::f64::consts::TAU * (j % s.sides()) as f64 / n;
    (SIZE / 2.0 + RADIUS * theta.cos(), SIZE / 2.0 - RADIUS * theta.sin())
}

fn lerp(a: Point, b: Point, f: f64) -> Point {
    (a.0 + (b.0 - a.0) * f, a.1 + (b.1 - a.1) * f)
}

/// Where a point sits on its edge: fraction from the tail, given the edge
/// and the point index of the curve's own realization.
type Placement<'a> = Box<dyn Fn(usize, u64) -> f64 + 'a>;

/// Placements for every curve in `curves`.
fn placements<'a>(s: &PolygonSurface, curves: &'a [(String, NormalCurve)]) -> Result<Vec<Placement<'a>>> {
    let n = curves.len();
    if n == 2 {
        let o = std::rc::Rc::new(overlay(s, &curves[0].1, &curves[1].1)?);
        return Ok((0..2)
            .map(|k| {
                let o = o.clone();
                Box::new(move |e: usize, i: u64| {
                    let [p, q] = &o.positions[e];
                    let pos = if k == 0 { p } else { q };
                    (pos[i as usize] as f64 + 0.5) / (p.len() + q.len()) as f64
                }) as Placement<'a>
            })
            .collect());
    }
    Ok(curves
        .iter()
        .enumerate()
        .map(|(k, (_, c))| {
            let w = c.weights_u64().unwrap_or_default();
            Box::new(move |e: usize, i: u64| (i as f64 + (k + 1) as f64 / (n + 1) as f64) / w[e] as f64) as Placement<'a>
        })
        .collect())
}

/// Subpaths of one curve, in traversal order.
fn polylines(s: &PolygonSurface, c: &NormalCurve, place: &Placement) -> Result<Vec<Vec<Point>>> {
    let tri = s.triangulation();
    let r = ArcRealization::new(s, &c.as_multicurve())?;
    let walk = r.trace_all(tri).into_iter().next().unwrap_or_default();
    let centre = (SIZE / 2.0, SIZE / 2.0);
    let point = |h, i| {
        let (t, p) = tri.locate(h);
        let corners = [centre, corner(s, t), corner(s, t + 1)];
        let f = place(mcg_core::triangulation::edge_of(h), i);
        let f = if h >= 0 { f } else { 1.0 - f };
        lerp(corners[p], corners[(p + 1) % 3], f)
    };
    let is_side = |h| mcg_core::triangulation::edge_of(h) < s.side_classes();
    let len = walk.len();
    // start just after a side crossing so that subpaths are not split
    let start = (0..len).find(|&m| is_side(walk[m].0)).map_or(0, |m| (m + 1) % len);
    let mut out: Vec<Vec<Point>> = Vec::new();
    let mut current: Vec<Point> = Vec::new();
    for m in 0..len {
        let (prev, pi) = walk[(start + m + len - 1) % len];
        let (h, i) = walk[(start + m) % len];
        if current.is_empty() {
            current.push(point(!prev, pi));
        }
        current.push(point(h, i));
        if is_side(h) {
            out.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        current.push(current[0]);
        out.push(current);
    }
    Ok(out)
}

/// Renders the polygon, its side labels and the named curves.
pub fn render(s: &PolygonSurface, curves: &[(String, NormalCurve)]) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let outline: Vec<String> = (0..s.sides())
        .map(|j| {
            let (x, y) = corner(s, j);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="none" stroke="#444" stroke-width="1.5"/>"##,
        outline.join(" ")
    );
    for j in 0..s.sides() {
        let mid = lerp(corner(s, j), corner(s, j + 1), 0.5);
        let (x, y) = lerp((SIZE / 2.0, SIZE / 2.0), mid, 1.07);
        let _ = writeln!(
            out,
            r##"<text x="{x:.2}" y="{y:.2}" font-size="11" text-anchor="middle" dominant-baseline="middle" fill="#444">{}</text>"##,
            j % s.side_classes()
        );
    }
    let place = placements(s, curves)?;
    for (k, (name, c)) in curves.iter().enumerate() {
        let mut d = String::new();
        for line in polylines(s, c, &place[k])? {
            for (m, (x, y)) in line.iter().enumerate() {
                let _ = write!(d, "{}{x:.2} {y:.2} ", if m == 0 { "M" } else { "L" });
            }
        }
        let _ = writeln!(
            out,
            r#"<path class="curve" data-name="{name}" d="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            d.trim_end(),
            COLOURS[k % COLOURS.len()]
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
