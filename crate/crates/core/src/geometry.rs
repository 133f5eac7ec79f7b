//! Concrete realizations of orbifold groups and vertex recipes.

use core::f64::consts::{PI, TAU};

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // only needed without std
use num_traits::Float;
use thiserror::Error;

use crate::ball::Ball;
use crate::moebius::{
    self, corner_angle, geodesic_through, to_klein, DiskPoint, FixedSet, Geodesic, Isometry,
    IsometryClass, MoebiusError,
};
use crate::orbifold::{
    evaluate_word, standard_presentation, ConwaySymbol, CurvatureClass, GeneratorKind,
    OrbifoldError, Order, Presentation, Word,
};
use crate::{Complex, IDENTITY_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("symbol {0} is not hyperbolic")]
    NotHyperbolic(String),
    #[error("polygon solver did not converge")]
    NoConvergence,
    #[error("symbol {0} has no geometric realization here")]
    UnsupportedSymbol(String),
    #[error("anchor cannot be resolved: {0}")]
    UnresolvableAnchor(String),
    #[error("recipe vertices {0} and {1} coincide")]
    DegeneratePolygon(usize, usize),
    #[error("recipe polygon edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

impl GeometryError {
    pub fn name(&self) -> &'static str {
        match self {
            GeometryError::NotHyperbolic(_) => "NotHyperbolic",
            GeometryError::NoConvergence => "NoConvergence",
            GeometryError::UnsupportedSymbol(_) => "UnsupportedSymbol",
            GeometryError::UnresolvableAnchor(_) => "UnresolvableAnchor",
            GeometryError::DegeneratePolygon(..) => "DegeneratePolygon",
            GeometryError::SelfIntersecting(..) => "SelfIntersecting",
            GeometryError::Orbifold(e) => e.name(),
            GeometryError::Moebius(MoebiusError::OutsideDisk(_)) => "OutsideDisk",
            GeometryError::Moebius(MoebiusError::Degenerate) => "Degenerate",
        }
    }
}

/// Where a recipe vertex sits before its word is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    /// Fixed point of a generator. For a mirror this is the point of the
    /// mirror closest to the origin.
    Fix(usize),
    /// A point given by coordinates.
    Free(DiskPoint),
    /// Corner where two mirrors meet: the fixed point of their product.
    Meet(usize, usize),
}

/// A recipe vertex: `word` applied to the anchor point.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorWord {
    pub word: Word,
    pub anchor: Anchor,
}

impl AnchorWord {
    pub fn new(word: Word, anchor: Anchor) -> Self {
        AnchorWord { word, anchor }
    }

    pub fn fix(gen: usize) -> Self {
        AnchorWord::new(Word::identity(), Anchor::Fix(gen))
    }
}

/// A presentation with one isometry per generator and a base tile recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGroup {
    pub presentation: Presentation,
    pub gens: Vec<Isometry>,
    pub base_polygon: Vec<AnchorWord>,
}

const BISECTION_TOL: f64 = 1e-12;
const BISECTION_STEPS: usize = 200;

/// Vertices of the hyperbolic polygon with the given interior angles, placed
/// counterclockwise around an inscribed circle centred at the origin with
/// the first vertex on the positive real axis.
///
/// The polygon is a fan of right triangles (centre, vertex, tangent point);
/// the inradius is found by bisection so the central angles close up.
pub fn polygon_with_angles(angles: &[f64]) -> Result<Vec<DiskPoint>, GeometryError> {
    let n = angles.len();
    let excess: f64 = (n as f64 - 2.0) * PI - angles.iter().sum::<f64>();
    if n < 3 || excess <= 0.0 || angles.iter().any(|&a| !(a > 0.0 && a < PI)) {
        return Err(GeometryError::NotHyperbolic(format!("{n}-gon")));
    }
    let betas = |rho: f64| -> Vec<f64> {
        angles
            .iter()
            .map(|&a| ((a / 2.0).cos() / rho.cosh()).min(1.0).asin())
            .collect()
    };
    let total = |rho: f64| -> f64 { 2.0 * betas(rho).iter().sum::<f64>() };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while total(hi) > TAU {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(GeometryError::NoConvergence);
        }
    }
    let mut converged = false;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if total(mid) > TAU {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < BISECTION_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(GeometryError::NoConvergence);
    }
    let rho = 0.5 * (lo + hi);
    let beta = betas(rho);
    let mut theta = 0.0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            theta += beta[i - 1] + beta[i];
        }
        let cosh_d = (angles[i] / 2.0).tan().recip() * beta[i].tan().recip();
        let d = cosh_d.max(1.0).acosh();
        out.push(Complex::from_polar((d / 2.0).tanh(), theta));
    }
    Ok(out)
}

fn finite_corners(corners: &[Order]) -> Option<Vec<u32>> {
    corners.iter().map(|o| o.finite()).collect()
}

fn require_hyperbolic(symbol: &ConwaySymbol) -> Result<(), GeometryError> {
    if symbol.curvature_class() != CurvatureClass::Hyperbolic {
        return Err(GeometryError::NotHyperbolic(symbol.to_string()));
    }
    Ok(())
}

/// Reflection group of the polygon with angles `π/aᵢ`. Corners are taken in
/// the canonical order of the symbol `*a₁…aₙ`; mirror `mⱼ` is the side from
/// corner `j` to corner `j+1`.
pub fn build_kaleidoscopic_polygon(corners: &[u32]) -> Result<GeometricGroup, GeometryError> {
    let symbol = ConwaySymbol::kaleidoscopic(corners);
    if corners.len() < 3 {
        require_hyperbolic(&symbol)?;
        return Err(GeometryError::UnsupportedSymbol(symbol.to_string()));
    }
    require_hyperbolic(&symbol)?;
    let canonical = finite_corners(&symbol.kaleidoscopes[0]).expect("finite corners");
    let angles: Vec<f64> = canonical.iter().map(|&a| PI / a as f64).collect();
    let verts = polygon_with_angles(&angles)?;
    let n = verts.len();
    let gens = (0..n)
        .map(|j| Ok(Isometry::reflection_in(&geodesic_through(verts[j], verts[(j + 1) % n])?)))
        .collect::<Result<Vec<_>, MoebiusError>>()?;
    let base_polygon = (0..n)
        .map(|j| AnchorWord::new(Word::identity(), Anchor::Meet((j + n - 1) % n, j)))
        .collect();
    Ok(GeometricGroup {
        presentation: standard_presentation(&symbol)?,
        gens,
        base_polygon,
    })
}

/// Rotations `rᵢ` by `2π/Aᵢ` about the corners of the polygon with angles
/// `π/Aᵢ` (orders sorted ascending), so that `r₁r₂⋯rₙ = 1`. The base tile is
/// the polygon doubled across its last side `cₙc₁`.
pub fn realize_stellate(orders: &[u32]) -> Result<GeometricGroup, GeometryError> {
    let symbol = ConwaySymbol::stellate(orders);
    require_hyperbolic(&symbol)?;
    if orders.len() < 3 {
        return Err(GeometryError::UnsupportedSymbol(symbol.to_string()));
    }
    let sorted = symbol.gyrations.clone();
    let angles: Vec<f64> = sorted.iter().map(|&a| PI / a as f64).collect();
    let verts = polygon_with_angles(&angles)?;
    let n = verts.len();
    let gens = verts
        .iter()
        .zip(&sorted)
        .map(|(&c, &a)| Isometry::rotation_about(c, TAU / a as f64))
        .collect::<Result<Vec<_>, _>>()?;
    let mut base_polygon: Vec<AnchorWord> = (0..n).map(AnchorWord::fix).collect();
    // reflected corners, written as rotation words
    for k in (1..n - 1).rev() {
        let word = if n - 1 - k < k {
            Word::from_letters((k + 1..n).rev().map(|j| (j, -1)))
        } else {
            Word::from_letters((0..k).map(|j| (j, 1)))
        };
        base_polygon.push(AnchorWord::new(word, Anchor::Fix(k)));
    }
    Ok(GeometricGroup {
        presentation: standard_presentation(&symbol)?,
        gens,
        base_polygon,
    })
}

/// Surface group of genus `g` from the regular `4g`-gon with angles
/// `2π/4g`. Sides are paired in the pattern `a b a⁻¹ b⁻¹` per handle.
pub fn regular_4g_gon(genus: u32) -> Result<GeometricGroup, GeometryError> {
    let symbol = ConwaySymbol::surface(genus);
    require_hyperbolic(&symbol)?;
    let n = 4 * genus as usize;
    let verts = polygon_with_angles(&vec![TAU / n as f64; n])?;
    let turn = Isometry::rotation_about(Complex::new(0.0, 0.0), -2.0 * TAU / n as f64)?;
    // pair(k) maps side k+2 onto side k, reversed
    let pair = |k: usize| -> Result<Isometry, GeometryError> {
        let mid = moebius::midpoint(verts[k], verts[(k + 1) % n])?;
        Ok(Isometry::rotation_about(mid, PI)?.compose(&turn))
    };
    let mut gens = Vec::with_capacity(2 * genus as usize);
    for j in 0..genus as usize {
        gens.push(pair(4 * j)?);
        gens.push(pair(4 * j + 1)?.inverse());
    }
    let base_polygon = verts
        .iter()
        .map(|&v| AnchorWord::new(Word::identity(), Anchor::Free(v)))
        .collect();
    Ok(GeometricGroup {
        presentation: standard_presentation(&symbol)?,
        gens,
        base_polygon,
    })
}

/// Realizes a pure kaleidoscope, a sphere with finite cone points, or a
/// closed orientable surface of genus at least two.
pub fn realize(symbol: &ConwaySymbol) -> Result<GeometricGroup, GeometryError> {
    require_hyperbolic(symbol)?;
    if symbol.is_pure_kaleidoscope() {
        if let Some(c) = finite_corners(&symbol.kaleidoscopes[0]) {
            return build_kaleidoscopic_polygon(&c);
        }
    } else if symbol.is_pure_stellate() {
        return realize_stellate(&symbol.gyrations);
    } else if symbol.is_pure_surface() {
        return regular_4g_gon(symbol.handles);
    }
    Err(GeometryError::UnsupportedSymbol(symbol.to_string()))
}

impl GeometricGroup {
    pub fn symbol(&self) -> &ConwaySymbol {
        &self.presentation.symbol
    }

    pub fn evaluate(&self, w: &Word) -> Result<Isometry, GeometryError> {
        Ok(evaluate_word(w, &self.gens)?)
    }

    /// Residual of each relation: entrywise distance of its value from `±1`.
    pub fn verify_presentation(&self) -> Vec<(Word, f64)> {
        self.presentation
            .relations
            .iter()
            .map(|w| {
                let r = evaluate_word(w, &self.gens)
                    .map(|m| m.identity_residual())
                    .unwrap_or(f64::INFINITY);
                (w.clone(), r)
            })
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.verify_presentation()
            .iter()
            .map(|(_, r)| *r)
            .fold(0.0, f64::max)
    }

    /// Position of the anchor point before its word is applied.
    pub fn anchor_point(&self, anchor: &Anchor) -> Result<DiskPoint, GeometryError> {
        let gen = |i: usize| {
            self.gens.get(i).ok_or_else(|| {
                GeometryError::UnresolvableAnchor(format!("no generator with index {i}"))
            })
        };
        match *anchor {
            Anchor::Free(p) => {
                if p.norm() < 1.0 {
                    Ok(p)
                } else {
                    Err(GeometryError::UnresolvableAnchor(format!("{p} is outside the disk")))
                }
            }
            Anchor::Fix(i) => match gen(i)?.fixed_points(IDENTITY_TOL) {
                FixedSet::Interior(p) => Ok(p),
                FixedSet::Mirror(g) => Ok(foot_of(&g)),
                _ => Err(GeometryError::UnresolvableAnchor(format!(
                    "generator {} has no interior fixed point",
                    self.gen_name(i)
                ))),
            },
            Anchor::Meet(a, b) => match gen(a)?.compose(gen(b)?).fixed_points(IDENTITY_TOL) {
                FixedSet::Interior(p) => Ok(p),
                _ => Err(GeometryError::UnresolvableAnchor(format!(
                    "mirrors {} and {} do not meet",
                    self.gen_name(a),
                    self.gen_name(b)
                ))),
            },
        }
    }

    fn gen_name(&self, i: usize) -> String {
        self.presentation
            .generators
            .get(i)
            .map(|(n, _)| n.clone())
            .unwrap_or_else(|| format!("#{i}"))
    }

    pub fn resolve(&self, v: &AnchorWord) -> Result<DiskPoint, GeometryError> {
        let p = self.anchor_point(&v.anchor)?;
        Ok(self.evaluate(&v.word)?.apply(p))
    }

    /// Resolves a cyclic recipe and checks that it bounds a simple polygon.
    pub fn fundamental_tile_vertices(
        &self,
        recipe: &[AnchorWord],
    ) -> Result<Vec<DiskPoint>, GeometryError> {
        let pts = recipe
            .iter()
            .map(|v| self.resolve(v))
            .collect::<Result<Vec<_>, _>>()?;
        check_simple(&pts)?;
        Ok(pts)
    }

    pub fn base_vertices(&self) -> Result<Vec<DiskPoint>, GeometryError> {
        self.fundamental_tile_vertices(&self.base_polygon)
    }

    /// Same presentation and recipe with different generator matrices.
    pub fn with_gens(&self, gens: Vec<Isometry>) -> GeometricGroup {
        GeometricGroup {
            presentation: self.presentation.clone(),
            gens,
            base_polygon: self.base_polygon.clone(),
        }
    }

    /// Conjugates every generator by `h`; free anchors move along.
    pub fn conjugated(&self, h: &Isometry) -> GeometricGroup {
        let hi = h.inverse();
        GeometricGroup {
            presentation: self.presentation.clone(),
            gens: self.gens.iter().map(|g| h.compose(g).compose(&hi)).collect(),
            base_polygon: self
                .base_polygon
                .iter()
                .map(|v| match v.anchor {
                    Anchor::Free(p) => AnchorWord::new(v.word.clone(), Anchor::Free(h.apply(p))),
                    _ => v.clone(),
                })
                .collect(),
        }
    }

    /// True when every generator has the isometry type its kind demands.
    pub fn kinds_match(&self) -> bool {
        self.presentation
            .generators
            .iter()
            .zip(&self.gens)
            .all(|((_, kind), g)| kind_matches(*kind, &g.classify(IDENTITY_TOL)))
    }

    /// For each side `vᵢvᵢ₊₁` of the polygon, a side `j` and a short word
    /// mapping side `j` onto side `i` (as a set), other than the identity.
    pub fn side_pairings(&self, verts: &[DiskPoint], max_len: usize) -> Vec<Option<(usize, Word)>> {
        let n = verts.len();
        let ball = Ball::new(&self.gens, max_len, 200_000);
        let close = |a: DiskPoint, b: DiskPoint| (a - b).norm() < 1e-8;
        (0..n)
            .map(|i| {
                let (p, q) = (verts[i], verts[(i + 1) % n]);
                for (w, g) in ball.words.iter().zip(&ball.elements).skip(1) {
                    for j in 0..n {
                        let (a, b) = (g.apply(verts[j]), g.apply(verts[(j + 1) % n]));
                        if (close(a, q) && close(b, p)) || (close(a, p) && close(b, q)) {
                            return Some((j, w.clone()));
                        }
                    }
                }
                None
            })
            .collect()
    }
}

/// Generator kinds checked against the numeric type.
pub fn kind_matches(kind: GeneratorKind, class: &IsometryClass) -> bool {
    match (kind, class) {
        (GeneratorKind::Rotation(a), IsometryClass::Elliptic { angle, .. }) => {
            ((angle.abs() - TAU / a as f64).abs() < 1e-7)
                || (a == 2 && (angle.abs() - PI).abs() < 1e-7)
        }
        (GeneratorKind::Mirror, IsometryClass::Reflection) => true,
        (GeneratorKind::Parabolic, IsometryClass::Parabolic) => true,
        (
            GeneratorKind::HandleX
            | GeneratorKind::HandleY
            | GeneratorKind::Connecting
            | GeneratorKind::BoundaryHyperbolic,
            IsometryClass::Hyperbolic { .. },
        ) => true,
        (GeneratorKind::Crosscap, IsometryClass::Glide { .. }) => true,
        _ => false,
    }
}

fn foot_of(g: &Geodesic) -> DiskPoint {
    match *g {
        Geodesic::Diameter { .. } => Complex::new(0.0, 0.0),
        Geodesic::Arc { center, radius } => center / center.norm() * (center.norm() - radius),
    }
}

fn cross(o: Complex, a: Complex, b: Complex) -> f64 {
    (a - o).re * (b - o).im - (a - o).im * (b - o).re
}

pub(crate) fn segments_touch(a: Complex, b: Complex, c: Complex, d: Complex) -> bool {
    let eps = 1e-12;
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps))
        && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
    {
        return true;
    }
    let on = |p: Complex, q: Complex, r: Complex| {
        cross(p, q, r).abs() <= eps
            && r.re >= p.re.min(q.re) - eps
            && r.re <= p.re.max(q.re) + eps
            && r.im >= p.im.min(q.im) - eps
            && r.im <= p.im.max(q.im) + eps
    };
    on(c, d, a) || on(c, d, b) || on(a, b, c) || on(a, b, d)
}

/// Rejects coincident vertices, folded corners and crossing sides. Geodesic
/// sides are straight in the Klein model, so the test is planar.
pub fn check_simple(pts: &[DiskPoint]) -> Result<(), GeometryError> {
    let n = pts.len();
    if n < 3 {
        return Err(GeometryError::DegeneratePolygon(0, n.saturating_sub(1)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (pts[i] - pts[j]).norm() < 1e-9 {
                return Err(GeometryError::DegeneratePolygon(i, j));
            }
        }
    }
    for i in 0..n {
        let a = corner_angle(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
        if !(1e-9..=TAU - 1e-9).contains(&a) {
            return Err(GeometryError::SelfIntersecting((i + n - 1) % n, i));
        }
    }
    let k: Vec<Complex> = pts.iter().map(|&p| to_klein(p)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_touch(k[i], k[(i + 1) % n], k[j], k[(j + 1) % n]) {
                return Err(GeometryError::SelfIntersecting(i, j));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::{distance, polygon_area};
    use crate::orbifold::parse_conway;

    #[test]
    fn triangle_246_side_length() {
        let gg = build_kaleidoscopic_polygon(&[2, 4, 6]).unwrap();
        let v = gg.base_vertices().unwrap();
        // corners in order 2, 4, 6: side opposite the right angle joins the others
        let expect = 3f64.sqrt().acosh();
        assert!((distance(v[1], v[2]) - expect).abs() < 1e-9);
        assert!((expect - 1.146216).abs() < 1e-6);
        assert!((polygon_area(&v) - PI / 12.0).abs() < 1e-9);
        assert!(gg.max_residual() < 1e-9);
        assert!(gg.kinds_match());
    }

    #[test]
    fn quadrilateral_2224() {
        let gg = build_kaleidoscopic_polygon(&[2, 2, 2, 4]).unwrap();
        let v = gg.base_vertices().unwrap();
        let sum: f64 = (0..4).map(|i| corner_angle(v[(i + 3) % 4], v[i], v[(i + 1) % 4])).sum();
        assert!((sum - PI * 1.75).abs() < 1e-9);
        assert!((polygon_area(&v) - PI / 4.0).abs() < 1e-9);
        assert!(v[0].im.abs() < 1e-15 && v[0].re > 0.0);
    }

    #[test]
    fn euclidean_corners_are_rejected() {
        assert!(matches!(
            build_kaleidoscopic_polygon(&[2, 3, 6]),
            Err(GeometryError::NotHyperbolic(_))
        ));
        assert!(realize_stellate(&[2, 2]).is_err());
        assert!(matches!(
            realize(&parse_conway("o").unwrap()),
            Err(GeometryError::NotHyperbolic(_))
        ));
        assert!(matches!(
            realize(&parse_conway("2*33").unwrap()),
            Err(GeometryError::UnsupportedSymbol(_))
        ));
    }

    #[test]
    fn stellate_2224() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        assert!(gg.max_residual() < 1e-9);
        assert!(gg.kinds_match());
        let v = gg.base_vertices().unwrap();
        assert_eq!(v.len(), 6);
        assert!((polygon_area(&v) - PI / 2.0).abs() < 1e-8);
        // the last two vertices mirror c3 and c2 across side c4 c1
        let m = Isometry::reflection_in(&geodesic_through(v[3], v[0]).unwrap());
        assert!((m.apply(v[2]) - v[4]).norm() < 1e-10);
        assert!((m.apply(v[1]) - v[5]).norm() < 1e-10);
        let words: Vec<String> = gg.base_polygon[4..]
            .iter()
            .map(|a| gg.presentation.format_word(&a.word))
            .collect();
        assert_eq!(words, ["r4^-1", "r1^1"]);
    }

    #[test]
    fn stellate_22222_and_2223() {
        for orders in [[2u32, 2, 2, 2, 2].as_slice(), &[2, 2, 2, 3]] {
            let gg = realize_stellate(orders).unwrap();
            assert!(gg.max_residual() < 1e-9);
            let chi = gg.symbol().euler_characteristic();
            let area = polygon_area(&gg.base_vertices().unwrap());
            let expect = -TAU * (*chi.numer() as f64) / (*chi.denom() as f64);
            assert!((area - expect).abs() < 1e-8);
            for side in gg.side_pairings(&gg.base_vertices().unwrap(), 3) {
                assert!(side.is_some());
            }
        }
    }

    #[test]
    fn genus_polygons() {
        for g in [2u32, 3] {
            let gg = regular_4g_gon(g).unwrap();
            let v = gg.base_vertices().unwrap();
            let n = v.len();
            assert_eq!(n, 4 * g as usize);
            for i in 0..n {
                let a = corner_angle(v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
                assert!((a - TAU / n as f64).abs() < 1e-9);
            }
            assert!((polygon_area(&v) - 4.0 * PI * (g as f64 - 1.0)).abs() < 1e-8);
            assert!(gg.max_residual() < 1e-9, "{}", gg.max_residual());
            assert!(gg.kinds_match());
            let pairs = gg.side_pairings(&v, 1);
            for (i, p) in pairs.iter().enumerate() {
                let (j, w) = p.as_ref().unwrap();
                assert_eq!(w.length(), 1);
                assert_eq!((*j as isize - i as isize).rem_euclid(4), 2);
            }
        }
    }

    #[test]
    fn recipes_transport_under_conjugation() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let h = Isometry::rotation_about(Complex::new(0.2, -0.1), 0.7)
            .unwrap()
            .compose(&Isometry::translation_along(&Geodesic::Diameter { angle: 1.0 }, 0.4));
        let moved = gg.conjugated(&h);
        let a = gg.base_vertices().unwrap();
        let b = moved.base_vertices().unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((h.apply(*p) - *q).norm() < 1e-10);
        }
    }

    #[test]
    fn residual_detects_wrong_generator() {
        let mut gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let c4 = gg.anchor_point(&Anchor::Fix(3)).unwrap();
        gg.gens[3] = Isometry::rotation_about(c4, TAU / 5.0).unwrap();
        let report = gg.verify_presentation();
        assert!(report[3].1 > 0.1);
        let empty = GeometricGroup {
            presentation: Presentation {
                relations: vec![],
                global: None,
                ..gg.presentation.clone()
            },
            ..gg
        };
        assert!(empty.verify_presentation().is_empty());
    }

    #[test]
    fn simple_polygon_checks() {
        let sq = [
            Complex::new(0.3, 0.0),
            Complex::new(0.0, 0.3),
            Complex::new(-0.3, 0.0),
            Complex::new(0.0, -0.3),
        ];
        assert!(check_simple(&sq).is_ok());
        let bow = [sq[0], sq[2], sq[1], sq[3]];
        assert!(matches!(check_simple(&bow), Err(GeometryError::SelfIntersecting(..))));
        let dup = [sq[0], sq[1], sq[1], sq[3]];
        assert!(matches!(check_simple(&dup), Err(GeometryError::DegeneratePolygon(1, 2))));
    }
}
