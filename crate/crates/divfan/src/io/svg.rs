//! Deterministic SVG 1.1 rendering of slices.
//!
//! Each panel shows the cells of one slice labeled by member index. Unbounded
//! cells are clipped to the panel viewport: the bounding box of all vertices,
//! widened by 2 units along every tail direction (directions scaled to
//! max-norm 1), and padded to positive width. Rank-3 slices are drawn as
//! their three coordinate projections. Coordinates are printed with two
//! decimals, so equal inputs give byte-identical output.

use crate::error::DocumentError;
use crate::geom::rational::{sub, Q, QVec};
use crate::geom::TailedPolyhedron;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt::Write;

/// One slice: cells indexed by member, with a caption.
#[derive(Clone, Debug)]
pub struct Panel {
    pub title: String,
    pub cells: Vec<TailedPolyhedron>,
}

const SIZE: f64 = 240.0;
const MARGIN: f64 = 30.0;
const LINE_HEIGHT: f64 = 80.0;
const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn f(x: &Q) -> f64 {
    x.to_f64().expect("finite rational")
}

/// Axis-aligned box [lo_k, hi_k].
#[derive(Clone, Debug, PartialEq)]
struct Viewport {
    lo: QVec,
    hi: QVec,
}

impl Viewport {
    fn of(cells: &[TailedPolyhedron], dim: usize) -> Viewport {
        let points: Vec<&QVec> = cells.iter().flat_map(|c| c.vertices()).collect();
        let mut lo: QVec = (0..dim).map(|k| points.iter().map(|p| p[k].clone()).min().unwrap_or_else(Q::zero)).collect();
        let mut hi: QVec = (0..dim).map(|k| points.iter().map(|p| p[k].clone()).max().unwrap_or_else(Q::zero)).collect();
        let two = Q::from_integer(2.into());
        let mut grow_lo = vec![Q::zero(); dim];
        let mut grow_hi = vec![Q::zero(); dim];
        for c in cells.iter().filter(|c| !c.is_empty()) {
            for r in c.tail().rays() {
                let norm = r.iter().map(|x| x.abs()).max().expect("nonzero ray");
                for k in 0..dim {
                    let step = &two * &r[k] / &norm;
                    if step > grow_hi[k] {
                        grow_hi[k] = step.clone();
                    }
                    if step < grow_lo[k] {
                        grow_lo[k] = step;
                    }
                }
            }
        }
        for k in 0..dim {
            lo[k] += &grow_lo[k];
            hi[k] += &grow_hi[k];
            if lo[k] == hi[k] {
                lo[k] -= Q::one();
                hi[k] += Q::one();
            }
        }
        Viewport { lo, hi }
    }

    fn clip(&self, c: &TailedPolyhedron) -> Result<TailedPolyhedron, DocumentError> {
        let dim = self.lo.len();
        let mut ineqs = Vec::new();
        for k in 0..dim {
            let mut e = vec![Q::zero(); dim];
            e[k] = Q::one();
            ineqs.push((e.clone(), self.lo[k].clone()));
            ineqs.push((e.iter().map(|x| -x).collect(), -self.hi[k].clone()));
        }
        let bbox = TailedPolyhedron::from_constraints(dim, &ineqs, &[])?;
        Ok(c.intersect(&bbox)?)
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = (0..self.lo.len()).map(|k| format!("x{k} in [{}, {}]", self.lo[k], self.hi[k])).collect();
        parts.join("; ")
    }
}

/// Counterclockwise order around the centroid, exactly.
fn cyclic_order(points: &[QVec]) -> Vec<QVec> {
    let n = Q::from_integer((points.len() as i64).into());
    let cx = points.iter().map(|p| p[0].clone()).sum::<Q>() / &n;
    let cy = points.iter().map(|p| p[1].clone()).sum::<Q>() / &n;
    let half = |d: &QVec| if d[1].is_positive() || (d[1].is_zero() && d[0].is_positive()) { 0 } else { 1 };
    let mut v: Vec<QVec> = points.to_vec();
    v.sort_by(|a, b| {
        let da = sub(a, &[cx.clone(), cy.clone()]);
        let db = sub(b, &[cx.clone(), cy.clone()]);
        half(&da).cmp(&half(&db)).then_with(|| {
            let cross = &da[0] * &db[1] - &da[1] * &db[0];
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
    v
}

struct Frame {
    x0: f64,
    y0: f64,
    view: Viewport,
}

impl Frame {
    fn px(&self, x: &Q) -> f64 {
        let (lo, hi) = (f(&self.view.lo[0]), f(&self.view.hi[0]));
        self.x0 + (f(x) - lo) / (hi - lo) * SIZE
    }

    fn py(&self, y: &Q) -> f64 {
        let (lo, hi) = (f(&self.view.lo[1]), f(&self.view.hi[1]));
        self.y0 + SIZE - (f(y) - lo) / (hi - lo) * SIZE
    }
}

fn label(out: &mut String, x: f64, y: f64, member: usize) {
    let _ = writeln!(
        out,
        r#"<text x="{x:.2}" y="{y:.2}" font-size="12" text-anchor="middle">D<tspan baseline-shift="super" font-size="9">{member}</tspan></text>"#
    );
}

/// A self-closing element with a tooltip naming its member.
fn shape(out: &mut String, tag: &str, attrs: &str, member: usize) {
    let _ = writeln!(out, "<{tag} {attrs}><title>D{member}</title></{tag}>");
}

/// Interval of a one-dimensional cell, `None` for an infinite end.
fn interval(c: &TailedPolyhedron) -> (Option<Q>, Option<Q>) {
    let lo = c.vertices().iter().map(|v| v[0].clone()).min();
    let hi = c.vertices().iter().map(|v| v[0].clone()).max();
    let neg = c.tail().rays().iter().any(|r| r[0].is_negative());
    let pos = c.tail().rays().iter().any(|r| r[0].is_positive());
    (if neg { None } else { lo }, if pos { None } else { hi })
}

/// Whether the relative interiors of two intervals meet.
fn interiors_meet(a: &(Option<Q>, Option<Q>), b: &(Option<Q>, Option<Q>)) -> bool {
    let point = |i: &(Option<Q>, Option<Q>)| i.0.is_some() && i.0 == i.1;
    let below = |x: &Option<Q>, y: &Option<Q>| match (x, y) {
        (Some(x), Some(y)) => x < y,
        _ => true,
    };
    match (point(a), point(b)) {
        (true, true) => a.0 == b.0,
        (true, false) => below(&b.0, &a.0) && below(&a.1, &b.1),
        (false, true) => below(&a.0, &b.0) && below(&b.1, &a.1),
        (false, false) => below(&a.0, &b.1) && below(&b.0, &a.1),
    }
}

/// Cells of full dimension are labeled; the others carry tooltips only.
fn draw_line_panel(out: &mut String, x0: f64, y0: f64, cells: &[TailedPolyhedron]) -> Result<Viewport, DocumentError> {
    let view = Viewport::of(cells, 1);
    let frame = Frame { x0, y0, view: Viewport { lo: vec![view.lo[0].clone(), Q::zero()], hi: vec![view.hi[0].clone(), Q::one()] } };
    let mut rows: Vec<Vec<(Option<Q>, Option<Q>)>> = Vec::new();
    let axis = y0 + 30.0;
    let _ = writeln!(out, r##"<line x1="{x0:.2}" y1="{axis:.2}" x2="{:.2}" y2="{axis:.2}" stroke="#999" stroke-width="1"/>"##, x0 + SIZE);
    let mut ticks: Vec<Q> = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        let iv = interval(c);
        ticks.extend(iv.0.iter().chain(iv.1.iter()).cloned());
        let row = rows.iter().position(|r| r.iter().all(|o| !interiors_meet(o, &iv))).unwrap_or(rows.len());
        if row == rows.len() {
            rows.push(Vec::new());
        }
        rows[row].push(iv.clone());
        let y = axis + 24.0 * row as f64;
        let color = PALETTE[i % PALETTE.len()];
        let a = frame.px(iv.0.as_ref().unwrap_or(&view.lo[0]));
        let b = frame.px(iv.1.as_ref().unwrap_or(&view.hi[0]));
        if iv.0.is_some() && iv.0 == iv.1 {
            shape(out, "circle", &format!(r#"cx="{a:.2}" cy="{y:.2}" r="4" fill="{color}""#), i);
            continue;
        }
        shape(out, "line", &format!(r#"x1="{a:.2}" y1="{y:.2}" x2="{b:.2}" y2="{y:.2}" stroke="{color}" stroke-width="4""#), i);
        for (end, open) in [(a, iv.0.is_none()), (b, iv.1.is_none())] {
            if !open {
                let _ = writeln!(out, r#"<line x1="{end:.2}" y1="{:.2}" x2="{end:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#, y - 6.0, y + 6.0);
            }
        }
        label(out, (a + b) / 2.0, y - 10.0, i);
    }
    ticks.sort();
    ticks.dedup();
    let below = axis + 24.0 * rows.len().max(1) as f64;
    for t in &ticks {
        let _ = writeln!(out, r#"<text x="{:.2}" y="{below:.2}" font-size="10" text-anchor="middle">{}</text>"#, frame.px(t), escape(&t.to_string()));
    }
    Ok(view)
}

fn draw_plane_panel(out: &mut String, x0: f64, y0: f64, cells: &[TailedPolyhedron]) -> Result<Viewport, DocumentError> {
    let view = Viewport::of(cells, 2);
    let frame = Frame { x0, y0, view: view.clone() };
    let _ = writeln!(out, r##"<rect x="{x0:.2}" y="{y0:.2}" width="{SIZE:.2}" height="{SIZE:.2}" fill="none" stroke="#999"/>"##);
    let mut labels = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        let clipped = view.clip(c)?;
        let pts = cyclic_order(clipped.vertices());
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", frame.px(&p[0]), frame.py(&p[1]))).collect();
        match pts.len() {
            1 => shape(out, "circle", &format!(r#"cx="{:.2}" cy="{:.2}" r="4" fill="{color}""#, frame.px(&pts[0][0]), frame.py(&pts[0][1])), i),
            2 => shape(out, "polyline", &format!(r#"points="{}" stroke="{color}" stroke-width="3" fill="none""#, coords.join(" ")), i),
            _ => shape(
                out,
                "polygon",
                &format!(r#"points="{}" fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="1.5""#, coords.join(" ")),
                i,
            ),
        }
        if c.affine_dim() == Some(2) {
            let n = pts.len() as f64;
            let cx = pts.iter().map(|p| frame.px(&p[0])).sum::<f64>() / n;
            let cy = pts.iter().map(|p| frame.py(&p[1])).sum::<f64>() / n;
            labels.push((cx, cy + 4.0, i));
        }
    }
    // Labels last, so fills never cover them.
    for (x, y, i) in labels {
        label(out, x, y, i);
    }
    Ok(view)
}

/// Coordinate projections used for rank-3 slices.
fn projections(cells: &[TailedPolyhedron]) -> Result<Vec<(String, Vec<TailedPolyhedron>)>, DocumentError> {
    let view = Viewport::of(cells, 3);
    let clipped: Vec<TailedPolyhedron> = cells.iter().map(|c| view.clip(c)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let mut rows = vec![vec![Q::zero(); 3]; 2];
        rows[0][a] = Q::one();
        rows[1][b] = Q::one();
        let proj = clipped.iter().map(|c| c.image(&rows)).collect::<Result<Vec<_>, _>>()?;
        out.push((format!("x{a}, x{b}"), proj));
    }
    Ok(out)
}

/// One panel per slice, laid out in a row.
pub fn render(panels: &[Panel]) -> Result<String, DocumentError> {
    let mut flat: Vec<(String, Vec<TailedPolyhedron>)> = Vec::new();
    for p in panels {
        let dim = p.cells.first().map_or(1, TailedPolyhedron::dim);
        match dim {
            1 | 2 => flat.push((p.title.clone(), p.cells.clone())),
            3 => {
                for (axes, cells) in projections(&p.cells)? {
                    flat.push((format!("{} ({axes})", p.title), cells));
                }
            }
            d => return Err(DocumentError::Invalid(format!("cannot render slices of rank {d}"))),
        }
    }
    let width = MARGIN + flat.len().max(1) as f64 * (SIZE + MARGIN);
    let line_only = flat.iter().all(|(_, c)| c.first().map_or(1, TailedPolyhedron::dim) == 1);
    let panel_height = if line_only { LINE_HEIGHT } else { SIZE };
    let height = panel_height + 3.0 * MARGIN + 20.0;
    let mut body = String::new();
    let mut meta = Vec::new();
    for (k, (title, cells)) in flat.iter().enumerate() {
        let x0 = MARGIN + k as f64 * (SIZE + MARGIN);
        let y0 = MARGIN;
        let _ = writeln!(body, r#"<g id="panel{k}">"#);
        let _ = writeln!(body, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#, x0 + SIZE / 2.0, y0 - 10.0, escape(title));
        let view = match cells.first().map_or(1, TailedPolyhedron::dim) {
            1 => draw_line_panel(&mut body, x0, y0, cells)?,
            _ => draw_plane_panel(&mut body, x0, y0, cells)?,
        };
        let empty: Vec<String> = (0..cells.len()).filter(|&i| cells[i].is_empty()).map(|i| format!("D{i}")).collect();
        let legend = if empty.len() == cells.len() {
            "all cells empty".to_string()
        } else if empty.is_empty() {
            format!("{} cells", cells.len())
        } else if empty.len() > 6 {
            format!("{} of {} cells empty", empty.len(), cells.len())
        } else {
            format!("empty: {}", empty.join(", "))
        };
        let _ = writeln!(body, r#"<text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#, x0, y0 + panel_height + 28.0, escape(&legend));
        let _ = writeln!(body, "</g>");
        meta.push(format!("panel{k}: {}", view.describe()));
    }
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, "<metadata>viewport {}</metadata>", escape(&meta.join(" | ")));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    out.push_str(&body);
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rational::{qi, qvec};

    #[test]
    fn viewport_widens_along_tails() {
        let cells = [TailedPolyhedron::interval(Some(qi(1)), None), TailedPolyhedron::interval(Some(qi(-1)), Some(qi(1)))];
        let v = Viewport::of(&cells, 1);
        assert_eq!((v.lo[0].clone(), v.hi[0].clone()), (qi(-1), qi(3)));
    }

    #[test]
    fn cyclic_order_is_counterclockwise() {
        let pts = [qvec(&[1, 1]), qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1])];
        let order = cyclic_order(&pts);
        let start = order.iter().position(|p| *p == qvec(&[1, 0])).unwrap();
        let rotated: Vec<QVec> = order[start..].iter().chain(&order[..start]).cloned().collect();
        assert_eq!(rotated, vec![qvec(&[1, 0]), qvec(&[1, 1]), qvec(&[0, 1]), qvec(&[0, 0])]);
    }

    #[test]
    fn empty_panel_has_a_legend() {
        let svg = render(&[Panel { title: "empty".into(), cells: vec![TailedPolyhedron::empty(crate::geom::Cone::zero(2))] }]).unwrap();
        assert!(svg.contains("all cells empty"));
    }
}
