//! Néron–Severi diagrams for Picard rank two.
//!
//! The plane shows the effective and nef cones, the outline of the
//! half-open zonotope `Σ [0,1) π_i` (edges through the origin are part of
//! it and drawn solid, the open ones dashed), the ray classes `π_i` and the
//! Frobenius support.

use std::fmt::Write as _;

use crate::classes::ClassGroup;
use crate::error::{Error, Result};
use crate::exactlin::to_i64;
use crate::fan::Fan;
use crate::frobenius::fsupp;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 60.0;

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull, counter-clockwise, without collinear points.
fn hull(mut pts: Vec<[i64; 2]>) -> Vec<[i64; 2]> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<[i64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[i64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn on_segment(a: [i64; 2], b: [i64; 2]) -> bool {
    let o = [0, 0];
    cross(a, b, o) == 0 && a[0].min(b[0]) <= 0 && 0 <= a[0].max(b[0]) && a[1].min(b[1]) <= 0 && 0 <= a[1].max(b[1])
}

fn pair(v: &[i64]) -> [i64; 2] {
    [v[0], v[1]]
}

/// Renders the diagram. Fails with `RequiresRankTwo` unless `ρ = 2`.
pub fn plot_ns(fan: &Fan) -> Result<String> {
    let cg = ClassGroup::new(fan)?;
    if cg.rank != 2 {
        return Err(Error::RequiresRankTwo(cg.rank));
    }
    let pis: Vec<[i64; 2]> = cg.pi.iter().map(|p| pair(p)).collect();
    let mut sums = Vec::with_capacity(1 << pis.len());
    for mask in 0u32..(1 << pis.len()) {
        let mut s = [0i64, 0];
        for (i, p) in pis.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s[0] += p[0];
                s[1] += p[1];
            }
        }
        sums.push(s);
    }
    let outline = hull(sums);
    let points: Vec<[i64; 2]> = fsupp(fan, &cg)?.iter().map(|e| pair(&e.class)).collect();
    let ray_list = |rays: Vec<Vec<num_bigint::BigInt>>| -> Result<Vec<[i64; 2]>> {
        rays.iter().map(|r| Ok([to_i64(&r[0])?, to_i64(&r[1])?])).collect()
    };
    let eff = ray_list(cg.eff_cone()?.extreme_rays()?)?;
    let nef = ray_list(cg.nef_cone(fan)?.extreme_rays()?)?;

    let (mut lo, mut hi) = ([0i64, 0], [0i64, 0]);
    for p in outline.iter().chain(&pis) {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let (lo, hi) = ([lo[0] - 1, lo[1] - 1], [hi[0] + 1, hi[1] + 1]);
    let unit = (SIZE - 2.0 * MARGIN) / ((hi[0] - lo[0]).max(hi[1] - lo[1]) as f64);
    let x = |v: f64| MARGIN + (v - lo[0] as f64) * unit;
    let y = |v: f64| SIZE - MARGIN - (v - lo[1] as f64) * unit;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(s, r#"<rect width="800" height="800" fill="white"/>"#);
    let _ = writeln!(s, r##"<g stroke="#e0e0e0" stroke-width="1">"##);
    for gx in lo[0]..=hi[0] {
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, x(gx as f64), y(lo[1] as f64), x(gx as f64), y(hi[1] as f64));
    }
    for gy in lo[1]..=hi[1] {
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, x(lo[0] as f64), y(gy as f64), x(hi[0] as f64), y(gy as f64));
    }
    let _ = writeln!(s, "</g>");

    // Rays run to the frame edge; the long segments are clipped by the frame.
    let frame = format!(
        r#"<clipPath id="frame"><rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/></clipPath>"#,
        x(lo[0] as f64),
        y(hi[1] as f64),
        x(hi[0] as f64) - x(lo[0] as f64),
        y(lo[1] as f64) - y(hi[1] as f64)
    );
    let _ = writeln!(s, "<defs>{frame}</defs>");
    let reach = ((hi[0] - lo[0]) + (hi[1] - lo[1])) as f64;
    for (rays, colour, width, label) in [(&eff, "#1f5fbf", 3.0, "eff"), (&nef, "#d07000", 2.0, "nef")] {
        let _ = writeln!(s, r#"<g class="{label}" stroke="{colour}" stroke-width="{width}" clip-path="url(#frame)">"#);
        for r in rays {
            let len = ((r[0] * r[0] + r[1] * r[1]) as f64).sqrt();
            let t = reach / len;
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                x(0.0),
                y(0.0),
                x(r[0] as f64 * t),
                y(r[1] as f64 * t)
            );
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, r##"<g class="zonotope" stroke="#2a9d3a" stroke-width="2" fill="none">"##);
    if outline.len() >= 3 {
        let poly: Vec<String> = outline.iter().map(|p| format!("{:.2},{:.2}", x(p[0] as f64), y(p[1] as f64))).collect();
        let _ = writeln!(s, r##"<polygon points="{}" fill="#2a9d3a" fill-opacity="0.12" stroke="none"/>"##, poly.join(" "));
    }
    for i in 0..outline.len() {
        let (a, b) = (outline[i], outline[(i + 1) % outline.len()]);
        let dash = if on_segment(a, b) { "" } else { r#" stroke-dasharray="8,6""# };
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"{dash}/>"#,
            x(a[0] as f64),
            y(a[1] as f64),
            x(b[0] as f64),
            y(b[1] as f64)
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g class="fsupp" fill="#7b2d9b">"##);
    for p in &points {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="6"/>"#, x(p[0] as f64), y(p[1] as f64));
    }
    let _ = writeln!(s, "</g>");

    // Rays sharing a class get one label listing all of them.
    let mut labels: Vec<([i64; 2], Vec<usize>)> = Vec::new();
    for (i, p) in pis.iter().enumerate() {
        match labels.iter_mut().find(|(q, _)| q == p) {
            Some((_, ids)) => ids.push(i + 1),
            None => labels.push((*p, vec![i + 1])),
        }
    }
    let _ = writeln!(s, r#"<g class="rays" font-family="sans-serif" font-size="16">"#);
    for (p, ids) in &labels {
        let names: Vec<String> = ids.iter().map(|i| format!("D{i}")).collect();
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black"/>"#, x(p[0] as f64), y(p[1] as f64));
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x(p[0] as f64) + 8.0, y(p[1] as f64) - 8.0, names.join(", "));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
