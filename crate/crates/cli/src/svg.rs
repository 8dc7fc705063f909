//! Plot of a rank two arrangement in the coordinates `y` of `η + V`.
//!
//! Lines are `H_i = {y : B_i·y + η_i = 0}`, the shaded polygons are the
//! regions in `𝒫` clipped to a box around all vertices, and each vertex
//! `H_𝕩` carries the label `𝕩 ↦ μ(𝕩)`.

use std::fmt::Write as _;

use foundations::Rational;
use hypertoric::{format_subset, PolarizedArrangement, SignVector};
use num_traits::{ToPrimitive, Zero};

const SIZE: f64 = 640.0;
const PAD: f64 = 40.0;

#[derive(Debug, PartialEq, Eq)]
pub struct Unsupported(pub usize);

impl std::fmt::Display for Unsupported {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "svg needs k = 2, got k = {}", self.0)
    }
}

type Pt = (f64, f64);

fn f(r: &Rational) -> f64 {
    r.to_f64().expect("finite rational")
}

/// `a·y + c` for the `i`-th line.
struct Line {
    a: (Rational, Rational),
    c: Rational,
}

impl Line {
    fn eval(&self, p: Pt) -> f64 {
        f(&self.a.0) * p.0 + f(&self.a.1) * p.1 + f(&self.c)
    }
}

fn meet(l: &Line, m: &Line) -> Option<(Rational, Rational)> {
    let det = &l.a.0 * &m.a.1 - &l.a.1 * &m.a.0;
    if det.is_zero() {
        return None;
    }
    let x = (&l.a.1 * &m.c - &l.c * &m.a.1) / &det;
    let y = (&l.c * &m.a.0 - &l.a.0 * &m.c) / &det;
    Some((x, y))
}

/// Keeps the part of `poly` where `sign · line ≥ 0`.
fn clip(poly: &[Pt], line: &Line, sign: f64) -> Vec<Pt> {
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (vp, vq) = (sign * line.eval(p), sign * line.eval(q));
        if vp >= 0.0 {
            out.push(p);
        }
        if (vp >= 0.0) != (vq >= 0.0) {
            let t = vp / (vp - vq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

fn fmt(v: f64) -> String {
    // avoid "-0.00"
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

pub fn emit_svg(arr: &PolarizedArrangement) -> Result<String, Unsupported> {
    if arr.k() != 2 {
        return Err(Unsupported(arr.k()));
    }
    let cols = arr.basis_columns();
    let lines: Vec<Line> =
        (0..arr.n()).map(|i| Line { a: (cols[0][i].clone(), cols[1][i].clone()), c: arr.eta()[i].clone() }).collect();

    // bounding box around every pairwise intersection
    let mut pts: Vec<Pt> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some((x, y)) = meet(&lines[i], &lines[j]) {
                pts.push((f(&x), f(&y)));
            }
        }
    }
    if pts.is_empty() {
        pts.push((0.0, 0.0));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &pts {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    let margin = ((x1 - x0).max(y1 - y0) * 0.25).max(1.0);
    let (x0, x1, y0, y1) = (x0 - margin, x1 + margin, y0 - margin, y1 + margin);
    let scale = (SIZE - 2.0 * PAD) / (x1 - x0).max(y1 - y0);
    let px = |p: Pt| (PAD + (p.0 - x0) * scale, SIZE - PAD - (p.1 - y0) * scale);
    let rect = vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)];

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#)
        .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    let p: Vec<&SignVector> = arr.regions().bounded_feasible.iter().collect();
    for alpha in &p {
        let mut poly = rect.clone();
        for (i, l) in lines.iter().enumerate() {
            poly = clip(&poly, l, f64::from(alpha.get(i)));
        }
        if poly.len() < 3 {
            continue;
        }
        let path: Vec<String> = poly.iter().map(|q| px(*q)).map(|(a, b)| format!("{},{}", fmt(a), fmt(b))).collect();
        writeln!(
            out,
            r##"<polygon class="region" data-sign="{alpha}" points="{}" fill="#cfe2f3" stroke="none"/>"##,
            path.join(" ")
        )
        .unwrap();
    }

    for (i, l) in lines.iter().enumerate() {
        // the two points where the line leaves the box
        let mut ends: Vec<Pt> = Vec::new();
        for e in 0..4 {
            let (p, q) = (rect[e], rect[(e + 1) % 4]);
            let (vp, vq) = (l.eval(p), l.eval(q));
            if (vp >= 0.0) != (vq >= 0.0) {
                let t = vp / (vp - vq);
                ends.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
            }
        }
        if ends.len() < 2 {
            continue;
        }
        let (a, b) = (px(ends[0]), px(ends[1]));
        writeln!(
            out,
            r#"<line class="hyperplane" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"/>"#,
            fmt(a.0),
            fmt(a.1),
            fmt(b.0),
            fmt(b.1)
        )
        .unwrap();
        writeln!(out, r#"<text x="{}" y="{}" font-size="14">H{}</text>"#, fmt(a.0 + 4.0), fmt(a.1 - 4.0), i + 1).unwrap();
    }

    for b in arr.bases() {
        let mut it = hypertoric::members(b.subset);
        let (i, j) = (it.next().unwrap(), it.next().unwrap());
        let Some((x, y)) = meet(&lines[i], &lines[j]) else { continue };
        let (cx, cy) = px((f(&x), f(&y)));
        writeln!(out, r#"<circle class="vertex" cx="{}" cy="{}" r="3" fill="black"/>"#, fmt(cx), fmt(cy)).unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11">{} {}</text>"#,
            fmt(cx + 5.0),
            fmt(cy + 14.0),
            format_subset(b.subset),
            b.mu
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
