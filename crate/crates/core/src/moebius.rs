//! Isometries of the Poincaré disk.
//!
//! Orientation-preserving maps are `z ↦ (a z + b) / (c z + d)` with the matrix
//! in SU(1,1) shape `[[a, b], [conj(b), conj(a)]]` and determinant one.
//! Orientation-reversing maps carry the same kind of matrix together with a
//! flag and act as `z ↦ (a conj(z) + b) / (c conj(z) + d)`.

use core::f64::consts::{PI, TAU};
use core::fmt;

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // only needed without std
use num_traits::Float;
use thiserror::Error;

use crate::Complex;

/// A point of the closed unit disk.
pub type DiskPoint = Complex;

/// Denominator cap for rational rotation angles.
pub const MAX_ROTATION_ORDER: u32 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MoebiusError {
    #[error("point {0} is not inside the open unit disk")]
    OutsideDisk(DiskPoint),
    #[error("degenerate input: points coincide")]
    Degenerate,
}

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// An isometry of the hyperbolic plane.
#[derive(Clone, Copy, PartialEq)]
pub struct Isometry {
    m: [[Complex; 2]; 2],
    reversing: bool,
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Isometry[{}, {}; {}, {}]{}",
            self.m[0][0],
            self.m[0][1],
            self.m[1][0],
            self.m[1][1],
            if self.reversing { " reversing" } else { "" }
        )
    }
}

/// Type of an isometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsometryClass {
    Identity,
    /// Rotation by a signed angle in `(-π, π]`. `order` is set when the angle
    /// is a rational multiple of a full turn.
    Elliptic { angle: f64, order: Option<u32> },
    Parabolic,
    Hyperbolic { length: f64 },
    Reflection,
    Glide { length: f64 },
}

impl IsometryClass {
    pub fn is_elliptic(&self) -> bool {
        matches!(self, IsometryClass::Elliptic { .. })
    }

    pub fn order(&self) -> Option<u32> {
        match self {
            IsometryClass::Identity => Some(1),
            IsometryClass::Elliptic { order, .. } => *order,
            IsometryClass::Reflection => Some(2),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic { .. } => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Hyperbolic { .. } => "hyperbolic",
            IsometryClass::Reflection => "reflection",
            IsometryClass::Glide { .. } => "glide",
        }
    }
}

/// A complete geodesic of the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geodesic {
    /// Diameter through the origin in direction `angle` (taken mod π).
    Diameter { angle: f64 },
    /// Arc of the circle `|z - center| = radius`, orthogonal to the unit circle.
    Arc { center: Complex, radius: f64 },
}

impl Geodesic {
    /// The two ideal endpoints on the unit circle.
    pub fn endpoints(&self) -> (DiskPoint, DiskPoint) {
        match *self {
            Geodesic::Diameter { angle } => {
                let u = Complex::from_polar(1.0, angle);
                (u, -u)
            }
            Geodesic::Arc { center, radius: _ } => {
                let dir = center / center.norm();
                let phi = (1.0 / center.norm()).acos();
                (
                    dir * Complex::from_polar(1.0, phi),
                    dir * Complex::from_polar(1.0, -phi),
                )
            }
        }
    }

    /// Euclidean distance of `p` from the underlying line or circle.
    pub fn offset(&self, p: DiskPoint) -> f64 {
        match *self {
            Geodesic::Diameter { angle } => {
                let u = Complex::from_polar(1.0, angle);
                (u.conj() * p).im.abs()
            }
            Geodesic::Arc { center, radius } => ((p - center).norm() - radius).abs(),
        }
    }

    /// `|center|² - radius² - 1`; zero for a valid arc.
    pub fn orthogonality_defect(&self) -> f64 {
        match *self {
            Geodesic::Diameter { .. } => 0.0,
            Geodesic::Arc { center, radius } => center.norm_sqr() - radius * radius - 1.0,
        }
    }
}

/// Fixed-point set of an isometry.
#[derive(Debug, Clone, PartialEq)]
pub enum FixedSet {
    /// The identity fixes everything.
    Plane,
    Interior(DiskPoint),
    /// One (parabolic) or two (hyperbolic, glide) points on the unit circle.
    Ideal(Vec<DiskPoint>),
    Mirror(Geodesic),
}

fn mat_mul(x: &[[Complex; 2]; 2], y: &[[Complex; 2]; 2]) -> [[Complex; 2]; 2] {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

fn mat_conj(x: &[[Complex; 2]; 2]) -> [[Complex; 2]; 2] {
    [
        [x[0][0].conj(), x[0][1].conj()],
        [x[1][0].conj(), x[1][1].conj()],
    ]
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        m: [[ONE, ZERO], [ZERO, ONE]],
        reversing: false,
    };

    /// Builds an isometry from a matrix with positive real determinant and
    /// normalizes it.
    pub fn from_matrix(m: [[Complex; 2]; 2], reversing: bool) -> Self {
        let mut iso = Isometry { m, reversing };
        iso.normalize();
        iso
    }

    fn normalize(&mut self) {
        let det = self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0];
        // products of normalized matrices are already unimodular up to the
        // cancellation error of `det` itself, so rescaling would only add noise
        if (det - ONE).norm() > 1e-9 {
            let s = det.sqrt();
            for row in self.m.iter_mut() {
                for e in row.iter_mut() {
                    *e /= s;
                }
            }
        }
        // sign fixed by the first entry, which is never zero in SU(1,1)
        let a = self.m[0][0];
        if a.re < -1e-14 || (a.re.abs() <= 1e-14 && a.im < 0.0) {
            for row in self.m.iter_mut() {
                for e in row.iter_mut() {
                    *e = -*e;
                }
            }
        }
    }

    pub fn matrix(&self) -> [[Complex; 2]; 2] {
        self.m
    }

    pub fn is_reversing(&self) -> bool {
        self.reversing
    }

    /// Rotation about `p` by `theta` radians, counterclockwise.
    pub fn rotation_about(p: DiskPoint, theta: f64) -> Result<Self, MoebiusError> {
        let to_p = Self::moving_origin_to(p)?;
        let half = Complex::from_polar(1.0, theta / 2.0);
        let rot = Isometry {
            m: [[half, ZERO], [ZERO, half.conj()]],
            reversing: false,
        };
        Ok(to_p.compose(&rot).compose(&to_p.inverse()))
    }

    /// The orientation-preserving map `z ↦ (z + p) / (conj(p) z + 1)` sending
    /// the origin to `p` without rotation.
    pub fn moving_origin_to(p: DiskPoint) -> Result<Self, MoebiusError> {
        let r2 = p.norm_sqr();
        if r2.is_nan() || r2 >= 1.0 {
            return Err(MoebiusError::OutsideDisk(p));
        }
        let s = (1.0 - r2).sqrt();
        Ok(Isometry::from_matrix(
            [[ONE / s, p / s], [p.conj() / s, ONE / s]],
            false,
        ))
    }

    /// Reflection in the real axis.
    pub fn conjugation() -> Self {
        Isometry {
            m: [[ONE, ZERO], [ZERO, ONE]],
            reversing: true,
        }
    }

    pub fn reflection_in(g: &Geodesic) -> Self {
        match *g {
            Geodesic::Diameter { angle } => {
                let u = Complex::from_polar(1.0, angle);
                Isometry::from_matrix([[u, ZERO], [ZERO, u.conj()]], true)
            }
            Geodesic::Arc { center, radius } => {
                let i = Complex::i();
                Isometry::from_matrix(
                    [
                        [i * center / radius, -i / radius],
                        [i / radius, -i * center.conj() / radius],
                    ],
                    true,
                )
            }
        }
    }

    /// Hyperbolic translation by signed distance `d` along `g`.
    pub fn translation_along(g: &Geodesic, d: f64) -> Self {
        let ch = Complex::new((d / 2.0).cosh(), 0.0);
        let sh = Complex::new((d / 2.0).sinh(), 0.0);
        let along_real = Isometry {
            m: [[ch, sh], [sh, ch]],
            reversing: false,
        };
        let frame = match *g {
            Geodesic::Diameter { angle } => rotation_about_origin(angle),
            Geodesic::Arc { center, radius } => {
                let closest = center.norm() - radius;
                let s = 2.0 * closest.atanh();
                let shift = Isometry {
                    m: [
                        [Complex::new((s / 2.0).cosh(), 0.0), Complex::new((s / 2.0).sinh(), 0.0)],
                        [Complex::new((s / 2.0).sinh(), 0.0), Complex::new((s / 2.0).cosh(), 0.0)],
                    ],
                    reversing: false,
                };
                rotation_about_origin(center.arg())
                    .compose(&shift)
                    .compose(&rotation_about_origin(PI / 2.0))
            }
        };
        frame.compose(&along_real).compose(&frame.inverse())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let rhs = if self.reversing {
            mat_conj(&other.m)
        } else {
            other.m
        };
        Isometry::from_matrix(mat_mul(&self.m, &rhs), self.reversing ^ other.reversing)
    }

    pub fn inverse(&self) -> Isometry {
        let [[a, b], [c, d]] = self.m;
        let adj = [[d, -b], [-c, a]];
        let m = if self.reversing { mat_conj(&adj) } else { adj };
        Isometry::from_matrix(m, self.reversing)
    }

    pub fn pow(&self, e: i64) -> Isometry {
        let base = if e < 0 { self.inverse() } else { *self };
        let mut acc = Isometry::IDENTITY;
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn apply(&self, p: DiskPoint) -> DiskPoint {
        let w = if self.reversing { p.conj() } else { p };
        let [[a, b], [c, d]] = self.m;
        (a * w + b) / (c * w + d)
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        let (u, v) = g.endpoints();
        geodesic_between_ideal(self.apply(u), self.apply(v))
    }

    pub fn trace(&self) -> Complex {
        self.m[0][0] + self.m[1][1]
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.m
            .iter()
            .flat_map(|r| r.iter())
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise distance from `±I` (the smaller of the two); infinite for
    /// orientation-reversing maps.
    pub fn identity_residual(&self) -> f64 {
        if self.reversing {
            return f64::INFINITY;
        }
        let diff = |s: f64| {
            let mut worst: f64 = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    let target = if i == j { s } else { 0.0 };
                    worst = worst.max((self.m[i][j] - Complex::new(target, 0.0)).norm());
                }
            }
            worst
        };
        diff(1.0).min(diff(-1.0))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.identity_residual() <= tol
    }

    /// Entrywise distance up to global sign; infinite when orientation differs.
    pub fn distance_to(&self, other: &Isometry) -> f64 {
        if self.reversing != other.reversing {
            return f64::INFINITY;
        }
        let mut plus: f64 = 0.0;
        let mut minus: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                plus = plus.max((self.m[i][j] - other.m[i][j]).norm());
                minus = minus.max((self.m[i][j] + other.m[i][j]).norm());
            }
        }
        plus.min(minus)
    }

    pub fn approx_equal(&self, other: &Isometry, tol: f64) -> bool {
        self.distance_to(other) <= tol
    }

    pub fn classify(&self, tol: f64) -> IsometryClass {
        if self.reversing {
            let sq = self.compose(self);
            if sq.is_identity(tol) {
                return IsometryClass::Reflection;
            }
            let t = sq.trace().re.abs().max(2.0);
            return IsometryClass::Glide {
                length: translation_length(t) / 2.0,
            };
        }
        let t = self.trace().re.abs();
        if (t - 2.0).abs() <= tol {
            if self.is_identity(tol) {
                IsometryClass::Identity
            } else {
                IsometryClass::Parabolic
            }
        } else if t < 2.0 {
            let p = self.interior_fixed_point();
            let [[_, _], [c, d]] = self.m;
            // derivative at the fixed point is 1 / (c p + d)²
            let mut angle = -2.0 * (c * p + d).arg();
            while angle <= -PI {
                angle += TAU;
            }
            while angle > PI {
                angle -= TAU;
            }
            IsometryClass::Elliptic {
                angle,
                order: rational_turn(angle, tol).map(|(_, q)| q),
            }
        } else {
            IsometryClass::Hyperbolic {
                length: translation_length(t),
            }
        }
    }

    fn interior_fixed_point(&self) -> DiskPoint {
        let [[a, b], [c, d]] = self.m;
        if c.norm() < 1e-15 {
            return ZERO;
        }
        let (z1, z2) = quadratic_roots(c, d - a, -b);
        if z1.norm_sqr() <= z2.norm_sqr() {
            z1
        } else {
            z2
        }
    }

    pub fn fixed_points(&self, tol: f64) -> FixedSet {
        match self.classify(tol) {
            IsometryClass::Identity => FixedSet::Plane,
            IsometryClass::Elliptic { .. } => FixedSet::Interior(self.interior_fixed_point()),
            IsometryClass::Parabolic => {
                let [[a, _], [c, d]] = self.m;
                FixedSet::Ideal(vec![normalize_ideal((a - d) / (c * 2.0))])
            }
            IsometryClass::Hyperbolic { .. } => {
                let [[a, b], [c, d]] = self.m;
                let (z1, z2) = quadratic_roots(c, d - a, -b);
                FixedSet::Ideal(vec![normalize_ideal(z1), normalize_ideal(z2)])
            }
            IsometryClass::Glide { .. } => match self.compose(self).fixed_points(tol) {
                FixedSet::Ideal(pts) => FixedSet::Ideal(pts),
                _ => FixedSet::Ideal(Vec::new()),
            },
            IsometryClass::Reflection => {
                let [[a, b], _] = self.m;
                if b.norm() < 1e-13 {
                    FixedSet::Mirror(Geodesic::Diameter { angle: a.arg() })
                } else {
                    FixedSet::Mirror(Geodesic::Arc {
                        center: -a / b,
                        radius: 1.0 / b.norm(),
                    })
                }
            }
        }
    }

    /// Image of the origin, handy as a displacement measure.
    pub fn origin_image(&self) -> DiskPoint {
        self.apply(ZERO)
    }
}

fn rotation_about_origin(angle: f64) -> Isometry {
    let half = Complex::from_polar(1.0, angle / 2.0);
    Isometry::from_matrix([[half, ZERO], [ZERO, half.conj()]], false)
}

fn normalize_ideal(z: Complex) -> Complex {
    z / z.norm()
}

fn quadratic_roots(a: Complex, b: Complex, c: Complex) -> (Complex, Complex) {
    let disc = (b * b - a * c * 4.0).sqrt();
    // pick the numerically stable pairing
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    if q.norm() < 1e-300 {
        return (ZERO, ZERO);
    }
    (q / a, c / q)
}

fn translation_length(abs_trace: f64) -> f64 {
    2.0 * (abs_trace / 2.0).acosh()
}

/// Best rational approximation `p/q` of `angle / 2π` with `q ≤ 512`, accepted
/// when the angle it represents is within `tol` of `angle`.
pub fn rational_turn(angle: f64, tol: f64) -> Option<(i64, u32)> {
    let x = angle / TAU;
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut rest = x.abs();
    // continued-fraction convergents h/k
    let (mut h_prev, mut h) = (0i64, 1i64);
    let (mut k_prev, mut k) = (1i64, 0i64);
    let mut best = None;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = a as i64;
        let h_next = ai * h + h_prev;
        let k_next = ai * k + k_prev;
        if k_next > MAX_ROTATION_ORDER as i64 {
            break;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        if ((h as f64 / k as f64) - x.abs()).abs() * TAU <= tol {
            best = Some((sign * h, k as u32));
            break;
        }
        let frac = rest - a;
        if frac < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    best.map(|(p, q)| if p == 0 { (0, 1) } else { (p, q) })
}

/// Hyperbolic distance in the disk.
pub fn distance(p: DiskPoint, q: DiskPoint) -> f64 {
    let num = (p - q).norm_sqr();
    let den = (1.0 - p.norm_sqr()) * (1.0 - q.norm_sqr());
    2.0 * (num / den).sqrt().asinh()
}

/// Hyperbolic midpoint of two interior points.
pub fn midpoint(p: DiskPoint, q: DiskPoint) -> Result<DiskPoint, MoebiusError> {
    let t = Isometry::moving_origin_to(p)?;
    let q0 = t.inverse().apply(q);
    if q0.norm() < 1e-300 {
        return Ok(p);
    }
    let d = distance(p, q);
    Ok(t.apply(q0 / q0.norm() * (d / 4.0).tanh()))
}

/// Geodesic through two distinct points of the closed disk.
pub fn geodesic_through(p: DiskPoint, q: DiskPoint) -> Result<Geodesic, MoebiusError> {
    if (p - q).norm() < 1e-12 {
        return Err(MoebiusError::Degenerate);
    }
    let cross = (p.conj() * q).im;
    if cross.abs() < 1e-13 {
        let far = if p.norm() >= q.norm() { p } else { q };
        return Ok(Geodesic::Diameter { angle: far.arg() });
    }
    let rp = (1.0 + p.norm_sqr()) / 2.0;
    let rq = (1.0 + q.norm_sqr()) / 2.0;
    let cx = (rp * q.im - rq * p.im) / cross;
    let cy = (rq * p.re - rp * q.re) / cross;
    let center = Complex::new(cx, cy);
    let radius = (center.norm_sqr() - 1.0).sqrt();
    Ok(Geodesic::Arc { center, radius })
}

fn geodesic_between_ideal(u: DiskPoint, v: DiskPoint) -> Geodesic {
    if (u + v).norm() < 1e-12 {
        return Geodesic::Diameter { angle: u.arg() };
    }
    // circle orthogonal to the unit circle through u and v: tangents meet at the center
    let mid = (u + v) / 2.0;
    let center = mid / mid.norm_sqr();
    let radius = (center.norm_sqr() - 1.0).max(0.0).sqrt();
    Geodesic::Arc { center, radius }
}

/// Map from the disk to the Klein model, where geodesics are straight chords.
pub fn to_klein(p: DiskPoint) -> Complex {
    p * (2.0 / (1.0 + p.norm_sqr()))
}

pub fn from_klein(k: Complex) -> DiskPoint {
    let r2 = k.norm_sqr();
    k / (1.0 + (1.0 - r2).max(0.0).sqrt())
}

/// Interior angle at `vertex` between the geodesics towards `from` and `to`,
/// measured counterclockwise from the `to` direction round to the `from`
/// direction, in `[0, 2π)`.
pub fn corner_angle(from: DiskPoint, vertex: DiskPoint, to: DiskPoint) -> f64 {
    let dir_from = tangent_direction(vertex, from);
    let dir_to = tangent_direction(vertex, to);
    let mut a = dir_from - dir_to;
    while a < 0.0 {
        a += TAU;
    }
    while a >= TAU {
        a -= TAU;
    }
    a
}

/// Direction (as an angle) of the geodesic leaving `at` towards `towards`.
pub fn tangent_direction(at: DiskPoint, towards: DiskPoint) -> f64 {
    let w = (towards - at) / (ONE - at.conj() * towards);
    w.arg()
}

/// Area of a simple geodesic polygon given in either orientation, by angle
/// defect.
pub fn polygon_area(vertices: &[DiskPoint]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let ccw = signed_klein_area(vertices) >= 0.0;
    let mut sum = 0.0;
    for i in 0..n {
        let prev = vertices[(i + n - 1) % n];
        let next = vertices[(i + 1) % n];
        sum += if ccw {
            corner_angle(prev, vertices[i], next)
        } else {
            corner_angle(next, vertices[i], prev)
        };
    }
    (n as f64 - 2.0) * PI - sum
}

/// Shoelace area in the Klein model; its sign is the polygon orientation.
pub fn signed_klein_area(vertices: &[DiskPoint]) -> f64 {
    let n = vertices.len();
    let k: Vec<Complex> = vertices.iter().map(|&p| to_klein(p)).collect();
    let mut s = 0.0;
    for i in 0..n {
        let a = k[i];
        let b = k[(i + 1) % n];
        s += a.re * b.im - a.im * b.re;
    }
    s / 2.0
}
