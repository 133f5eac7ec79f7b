//! SVG pictures of tiling patches in the Poincaré disk.
//!
//! Every side is drawn as the geodesic through its ends: an SVG arc on the
//! circle orthogonal to the unit circle, or a straight segment through the
//! origin. Each arc is preceded by a comment recording its circle and the
//! defect `|c|² - r² - 1`, so the output can be checked without a renderer.

use std::fmt::Write as _;

use isotile_core::moebius::{geodesic_through, FixedSet, Geodesic};
use isotile_core::tiling::TilingPatch;
use isotile_core::DiskPoint;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("the patch has no tiles")]
    EmptyPatch,
    #[error("bad style: {0}")]
    BadStyle(String),
}

impl RenderError {
    pub fn name(&self) -> &'static str {
        match self {
            RenderError::EmptyPatch => "EmptyPatch",
            RenderError::BadStyle(_) => "BadStyle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub size: u32,
    pub stroke_width: f64,
    pub circle_width: f64,
    /// Fill colors as `rrggbb`; tiles of orientation-reversing elements
    /// use the second one when there is one.
    pub fills: Vec<String>,
    pub draw_unit_circle: bool,
    pub label_generators: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            size: 800,
            stroke_width: 1.0,
            circle_width: 1.5,
            fills: vec!["f2d7a0".into(), "9cc3d5".into()],
            draw_unit_circle: true,
            label_generators: false,
        }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<(), RenderError> {
        if self.size < 64 {
            return Err(RenderError::BadStyle(format!("size {} is below 64", self.size)));
        }
        if self.fills.is_empty() {
            return Err(RenderError::BadStyle("no fill colors".into()));
        }
        for c in &self.fills {
            if c.len() != 6 || !c.chars().all(|ch| ch.is_ascii_hexdigit()) {
                return Err(RenderError::BadStyle(format!("color {c} is not six hex digits")));
            }
        }
        Ok(())
    }
}

/// Defect `|c|² - r² - 1` of one emitted arc.
pub fn arc_defect(center: DiskPoint, radius: f64) -> f64 {
    center.norm_sqr() - radius * radius - 1.0
}

struct Frame {
    half: f64,
}

impl Frame {
    fn x(&self, p: DiskPoint) -> f64 {
        self.half + p.re * (self.half - 4.0)
    }

    fn y(&self, p: DiskPoint) -> f64 {
        self.half - p.im * (self.half - 4.0)
    }

    fn len(&self, r: f64) -> f64 {
        r * (self.half - 4.0)
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Draws the patch; arcs carry their geodesy check as comments.
pub fn render_svg(patch: &TilingPatch, style: &RenderStyle) -> Result<String, RenderError> {
    style.validate()?;
    if patch.tiles.is_empty() {
        return Err(RenderError::EmptyPatch);
    }
    let size = style.size;
    let f = Frame {
        half: size as f64 / 2.0,
    };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    writeln!(out, "<!-- tiles {} radius {} -->", patch.tiles.len(), num(patch.radius)).unwrap();
    for tile in &patch.tiles {
        let poly = &tile.polygon;
        let n = poly.len();
        let mut d = format!("M {} {}", num(f.x(poly[0])), num(f.y(poly[0])));
        for i in 0..n {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            match geodesic_through(p, q) {
                Ok(Geodesic::Arc { center, radius }) => {
                    writeln!(
                        out,
                        "<!-- arc center={},{} radius={} defect={:.3e} -->",
                        center.re,
                        center.im,
                        radius,
                        arc_defect(center, radius)
                    )
                    .unwrap();
                    let cross = (p - center).re * (q - center).im - (p - center).im * (q - center).re;
                    let sweep = u8::from(cross > 0.0);
                    write!(
                        d,
                        " A {r} {r} 0 0 {sweep} {} {}",
                        num(f.x(q)),
                        num(f.y(q)),
                        r = num(f.len(radius))
                    )
                    .unwrap();
                }
                _ => write!(d, " L {} {}", num(f.x(q)), num(f.y(q))).unwrap(),
            }
        }
        d.push_str(" Z");
        let fill = if tile.element.is_reversing() && style.fills.len() > 1 {
            &style.fills[1]
        } else {
            &style.fills[0]
        };
        writeln!(
            out,
            r##"<path d="{d}" fill="#{fill}" stroke="#000000" stroke-width="{}"/>"##,
            num(style.stroke_width)
        )
        .unwrap();
    }
    if style.draw_unit_circle {
        writeln!(
            out,
            r##"<circle cx="{c}" cy="{c}" r="{}" fill="none" stroke="#000000" stroke-width="{}"/>"##,
            num(f.len(1.0)),
            num(style.circle_width),
            c = num(f.half)
        )
        .unwrap();
    }
    if style.label_generators {
        let p = &patch.group.presentation;
        for ((name, _), g) in p.generators.iter().zip(&patch.group.gens) {
            if let FixedSet::Interior(z) = g.fixed_points(1e-9) {
                writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{name}</text>"#,
                    num(f.x(z)),
                    num(f.y(z))
                )
                .unwrap();
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Defects recorded in the arc comments of a rendered document.
pub fn recorded_arc_defects(svg: &str) -> Vec<f64> {
    svg.lines()
        .filter_map(|l| l.strip_prefix("<!-- arc "))
        .filter_map(|l| l.split("defect=").nth(1))
        .filter_map(|l| l.trim_end_matches(" -->").parse().ok())
        .collect()
}

/// Circles recorded in the arc comments, as `(center, radius)`.
pub fn recorded_arcs(svg: &str) -> Vec<(DiskPoint, f64)> {
    svg.lines()
        .filter_map(|l| l.strip_prefix("<!-- arc center="))
        .filter_map(|l| {
            let (c, rest) = l.split_once(" radius=")?;
            let (r, _) = rest.split_once(' ')?;
            let (x, y) = c.split_once(',')?;
            Some((DiskPoint::new(x.parse().ok()?, y.parse().ok()?), r.parse().ok()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use isotile_core::geometry::realize_stellate;
    use isotile_core::tiling::generate_patch;

    #[test]
    fn single_tile() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let patch = generate_patch(&gg, &gg.base_polygon, 0.0).unwrap();
        let svg = render_svg(&patch, &RenderStyle::default()).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 1);
        let arcs = recorded_arcs(&svg);
        assert!(!arcs.is_empty());
        for (c, r) in arcs {
            assert!(arc_defect(c, r).abs() < 1e-6);
        }
    }

    #[test]
    fn style_checks() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let patch = generate_patch(&gg, &gg.base_polygon, 0.0).unwrap();
        let small = RenderStyle {
            size: 10,
            ..RenderStyle::default()
        };
        assert!(matches!(render_svg(&patch, &small), Err(RenderError::BadStyle(_))));
        let bad = RenderStyle {
            fills: vec!["zzzzzz".into()],
            ..RenderStyle::default()
        };
        assert!(matches!(render_svg(&patch, &bad), Err(RenderError::BadStyle(_))));
    }
}
