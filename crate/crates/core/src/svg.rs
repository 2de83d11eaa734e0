//! Plain SVG renderings: 2-D polytopes with vertex labels and staircases of monomial
//! ideals in two variables.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::ideals::MonomialIdeal;
use crate::rational::{self, Rational};

const SIZE: f64 = 360.0;
const MARGIN: f64 = 40.0;

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" viewBox="0 0 {w} {w}">"#,
        w = SIZE + 2.0 * MARGIN
    );
    let _ = writeln!(s, "<!-- generator: {} {} -->", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Maps `[0, extent]^2` onto the drawing area, y pointing up.
struct Frame {
    extent: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + v / self.extent * SIZE
    }

    fn y(&self, v: f64) -> f64 {
        MARGIN + SIZE - v / self.extent * SIZE
    }

    fn axes(&self, out: &mut String) {
        let (x0, y0) = (self.x(0.0), self.y(0.0));
        let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="gray"/>"#, self.x(self.extent));
        let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{:.2}" stroke="gray"/>"#, self.y(self.extent));
    }
}

/// Vertices in counterclockwise order around their centroid.
fn ordered(vertices: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let f: Vec<(f64, f64)> = vertices.iter().map(|v| (rational::to_f64(&v[0]), rational::to_f64(&v[1]))).collect();
    let n = f.len() as f64;
    let (cx, cy) = f.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let mut idx: Vec<usize> = (0..vertices.len()).collect();
    idx.sort_by(|&i, &j| {
        let ai = (f[i].1 - cy).atan2(f[i].0 - cx);
        let aj = (f[j].1 - cy).atan2(f[j].0 - cx);
        ai.total_cmp(&aj).then_with(|| vertices[i].cmp(&vertices[j]))
    });
    idx.into_iter().map(|i| vertices[i].clone()).collect()
}

pub fn polytope_svg(p: &Polytope, title: &str) -> Result<String> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: p.dim() });
    }
    let verts = ordered(p.vertices());
    let extent = verts.iter().flatten().map(rational::to_f64).fold(1.0f64, f64::max) * 1.1;
    let frame = Frame { extent };
    let mut out = header(title);
    frame.axes(&mut out);
    let pts: Vec<String> = verts
        .iter()
        .map(|v| format!("{:.2},{:.2}", frame.x(rational::to_f64(&v[0])), frame.y(rational::to_f64(&v[1]))))
        .collect();
    let _ = writeln!(out, r##"<polygon points="{}" fill="#9ecae1" fill-opacity="0.6" stroke="#08519c"/>"##, pts.join(" "));
    for v in &verts {
        let (x, y) = (frame.x(rational::to_f64(&v[0])), frame.y(rational::to_f64(&v[1])));
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3"/>"#);
        let label = format!("({}, {})", v[0], v[1]);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#, x + 5.0, y - 5.0, escape(&label));
    }
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="{:.2}" font-size="12">volume {}</text>"#, MARGIN / 2.0, p.volume());
    out.push_str("</svg>\n");
    Ok(out)
}

/// Exponents in the ideal shaded, minimal generators marked.
pub fn staircase_svg(ideal: &MonomialIdeal, title: &str) -> Result<String> {
    if ideal.nvars() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: ideal.nvars() });
    }
    let gens = ideal.generators();
    let reach = gens.iter().flat_map(|g| [g.get(0), g.get(1)]).max().unwrap_or(0) + 2;
    let frame = Frame { extent: reach as f64 };
    let mut out = header(title);
    frame.axes(&mut out);
    // the ideal is the union of the quadrants above its generators
    for g in gens {
        let (x, y) = (frame.x(g.get(0) as f64), frame.y(reach as f64));
        let w = frame.x(reach as f64) - x;
        let h = frame.y(g.get(1) as f64) - y;
        let _ = writeln!(out, r##"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="#c7e9c0"/>"##);
    }
    for g in gens {
        let (x, y) = (frame.x(g.get(0) as f64), frame.y(g.get(1) as f64));
        let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#006d2c"/>"##);
        let label = format!("({}, {})", g.get(0), g.get(1));
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="11">{label}</text>"#, x + 5.0, y - 5.0);
    }
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="{:.2}" font-size="12">{}</text>"#, MARGIN / 2.0, escape(&ideal.to_string()));
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{simplex, ExpVec};
    use crate::rational::int;

    #[test]
    fn renders_are_stable() {
        let p = simplex(2, &int(1));
        let a = polytope_svg(&p, "simplex").unwrap();
        assert_eq!(a, polytope_svg(&p, "simplex").unwrap());
        assert_eq!(a.matches("<circle").count(), 3);
        let i = MonomialIdeal::new(2, vec![ExpVec::of(&[2, 0]), ExpVec::of(&[0, 3])]).unwrap();
        let s = staircase_svg(&i, "pure powers").unwrap();
        assert!(s.contains("(2, 0)") && s.contains("(0, 3)"));
        assert!(staircase_svg(&MonomialIdeal::unit(3), "x").is_err());
    }
}
