//! Deterministic SVG rendering of point sets and marked lines.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::projective::{ProjLine, ProjPoint};
use crate::rich_lines::PointSet;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 4] = ["#222222", "#c0392b", "#2471a3", "#1e8449"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(points: &[ProjPoint]) -> Frame {
        let aff: Vec<(f64, f64)> = points.iter().filter_map(|p| p.to_f64()).collect();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in &aff {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if aff.is_empty() {
            (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
        }
        // square viewport so slopes are drawn faithfully
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let half = ((x1 - x0).max(y1 - y0) / 2.0).max(0.5) * 1.1;
        Frame { x0: cx - half, x1: cx + half, y0: cy - half, y1: cy + half }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let inner = SIZE - 2.0 * MARGIN;
        (
            MARGIN + (x - self.x0) / (self.x1 - self.x0) * inner,
            MARGIN + (self.y1 - y) / (self.y1 - self.y0) * inner,
        )
    }

    /// Segment of `ax + by + c = 0` inside the frame.
    fn clip(&self, a: f64, b: f64, c: f64) -> Option<((f64, f64), (f64, f64))> {
        let mut hits: Vec<(f64, f64)> = Vec::new();
        let eps = 1e-12 * (self.x1 - self.x0);
        if b.abs() > 0.0 {
            for x in [self.x0, self.x1] {
                let y = -(a * x + c) / b;
                if y >= self.y0 - eps && y <= self.y1 + eps {
                    hits.push((x, y));
                }
            }
        }
        if a.abs() > 0.0 {
            for y in [self.y0, self.y1] {
                let x = -(b * y + c) / a;
                if x >= self.x0 - eps && x <= self.x1 + eps {
                    hits.push((x, y));
                }
            }
        }
        hits.sort_by(|p, q| p.partial_cmp(q).unwrap());
        hits.dedup_by(|p, q| (p.0 - q.0).abs() <= eps && (p.1 - q.1).abs() <= eps);
        match hits.as_slice() {
            [p, .., q] => Some((*p, *q)),
            _ => None,
        }
    }
}

fn f(v: f64) -> String {
    format!("{v:.3}")
}

fn big(v: &num_bigint::BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Renders the points (coloured by group) and one `<path>` per marked line.
/// Points at infinity become arrows on the border in their direction; the
/// line at infinity becomes the border itself.
pub fn render_svg(set: &PointSet, marked: &[ProjLine]) -> String {
    let frame = Frame::fit(set.points());
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    let (lo, hi) = (MARGIN, SIZE - MARGIN);
    writeln!(
        s,
        r##"<rect x="{lo}" y="{lo}" width="{w}" height="{w}" fill="none" stroke="#bbbbbb"/>"##,
        w = hi - lo
    )
    .unwrap();

    writeln!(s, r#"<g stroke-width="1" fill="none" stroke-opacity="0.6">"#).unwrap();
    for l in marked {
        let [a, b, c] = l.coeffs().each_ref().map(big);
        if l.is_at_infinity() {
            let m = MARGIN / 2.0;
            writeln!(
                s,
                r##"<path d="M {m} {m} L {e} {m} L {e} {e} L {m} {e} Z" stroke="#7d3c98"/>"##,
                e = SIZE - m
            )
            .unwrap();
            continue;
        }
        let (p, q) = frame.clip(a, b, c).unwrap_or(((frame.x0, frame.y0), (frame.x0, frame.y0)));
        let (p, q) = (frame.map(p.0, p.1), frame.map(q.0, q.1));
        writeln!(s, r##"<path d="M {} {} L {} {}" stroke="#555555"/>"##, f(p.0), f(p.1), f(q.0), f(q.1)).unwrap();
    }
    writeln!(s, "</g>").unwrap();

    let labels = set.labels();
    for (i, p) in set.points().iter().enumerate() {
        let color = COLORS[labels.map_or(0, |l| l[i] as usize) % COLORS.len()];
        match p.to_f64() {
            Some((x, y)) => {
                let (u, v) = frame.map(x, y);
                writeln!(s, r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#, f(u), f(v)).unwrap();
            }
            None => {
                let (dx, dy) = (big(p.x()), -big(p.y()));
                let norm = dx.hypot(dy);
                let (dx, dy) = (dx / norm, dy / norm);
                let c = SIZE / 2.0;
                let r = c - MARGIN / 2.0;
                // scale so the tip lands on the square border
                let t = r / dx.abs().max(dy.abs());
                let (tx, ty) = (c + dx * t, c + dy * t);
                let (bx, by) = (tx - dx * 12.0, ty - dy * 12.0);
                let (nx, ny) = (-dy * 5.0, dx * 5.0);
                writeln!(
                    s,
                    r#"<polygon points="{},{} {},{} {},{}" fill="{color}"/>"#,
                    f(tx),
                    f(ty),
                    f(bx + nx),
                    f(by + ny),
                    f(bx - nx),
                    f(by - ny)
                )
                .unwrap();
            }
        }
    }
    writeln!(s, "</svg>").unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_triangle_ratios_default;
    use crate::rich_lines::spanned_lines;

    #[test]
    fn one_path_per_marked_line() {
        let h = gen_triangle_ratios_default(2).unwrap();
        let t = spanned_lines(&h).unwrap();
        let marked: Vec<ProjLine> = t.triple_lines().map(|e| e.line.clone()).collect();
        let svg = render_svg(&h, &marked);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<path").count(), marked.len());
        assert_eq!(svg.matches("<polygon").count(), h.points().iter().filter(|p| p.is_at_infinity()).count());
        assert_eq!(render_svg(&h, &marked), svg);
    }

    #[test]
    fn line_at_infinity_is_the_border() {
        let h = PointSet::new(vec![ProjPoint::int(0, 0), ProjPoint::new(1, 0, 0).unwrap()]).unwrap();
        let svg = render_svg(&h, &[ProjLine::at_infinity(), ProjLine::new(0, 1, 0).unwrap()]);
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(!svg.contains("NaN"));
    }
}
