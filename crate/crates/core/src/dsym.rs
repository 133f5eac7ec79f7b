//! Decorations of orbifolds, their Delaney-Dress symbols, GLUE and SPLIT.
//!
//! A decoration lists vertices (anchor words) and edges; edge `k` is the
//! geodesic from vertex `from` to `word·to`. Its orbit under the group is a
//! graph in the disk whose faces are the tiles. Chambers are the flags
//! (vertex, edge, face) of that graph taken modulo the group.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
#[allow(unused_imports)] // only needed without std
use num_traits::Float;
use thiserror::Error;

use crate::geometry::{check_simple, segments_touch, Anchor, AnchorWord, GeometricGroup, GeometryError};
use crate::moebius::{distance, polygon_area, tangent_direction, to_klein, DiskPoint, Isometry};
use crate::orbifold::{ConwaySymbol, GeneratorKind, Word};
use crate::tiling::{generate_patch, TilingError};
use crate::{Complex, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DsymError {
    #[error("invalid decoration: {0}")]
    InvalidDecoration(String),
    #[error("a tile is not a disk: {0}")]
    NonDiskResult(String),
    #[error("arcs cross: {0}")]
    CrossingArc(String),
    #[error("index out of range: {0}")]
    BadIndex(String),
    #[error("vertex {vertex} would have degree {degree}")]
    LowDegreeVertex { vertex: usize, degree: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

impl DsymError {
    pub fn name(&self) -> &'static str {
        match self {
            DsymError::InvalidDecoration(_) => "InvalidDecoration",
            DsymError::NonDiskResult(_) => "NonDiskResult",
            DsymError::CrossingArc(_) => "CrossingArc",
            DsymError::BadIndex(_) => "BadIndex",
            DsymError::LowDegreeVertex { .. } => "LowDegreeVertex",
            DsymError::Geometry(e) => e.name(),
            DsymError::Tiling(e) => e.name(),
        }
    }
}

/// Delaney-Dress symbol with 0-based chambers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DSymbol {
    pub s: [Vec<usize>; 3],
    pub m01: Vec<u32>,
    pub m12: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DSymbolIssue {
    LengthMismatch,
    OutOfRange { op: usize, chamber: usize },
    NotInvolution { op: usize, chamber: usize },
    S0S2NotInvolution { chamber: usize },
    M01NotConstant { chamber: usize },
    M12NotConstant { chamber: usize },
    ZeroBranch { chamber: usize },
    NotConnected,
}

impl DSymbol {
    pub fn size(&self) -> usize {
        self.m01.len()
    }

    /// Orbits of the subgroup generated by `s_i` and `s_j`, each sorted, in
    /// order of their least chamber.
    pub fn orbits(&self, i: usize, j: usize) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < orbit.len() {
                let c = orbit[k];
                for op in [i, j] {
                    let d = self.s[op][c];
                    if d < n && !seen[d] {
                        seen[d] = true;
                        orbit.push(d);
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn face_orbits(&self) -> Vec<Vec<usize>> {
        self.orbits(0, 1)
    }

    pub fn edge_orbits(&self) -> Vec<Vec<usize>> {
        self.orbits(0, 2)
    }

    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        self.orbits(1, 2)
    }

    /// Every violated invariant; empty for a valid symbol.
    pub fn validate(&self) -> Vec<DSymbolIssue> {
        let n = self.size();
        let mut issues = Vec::new();
        if self.s.iter().any(|s| s.len() != n) || self.m12.len() != n {
            return vec![DSymbolIssue::LengthMismatch];
        }
        for op in 0..3 {
            for c in 0..n {
                let d = self.s[op][c];
                if d >= n {
                    issues.push(DSymbolIssue::OutOfRange { op, chamber: c });
                } else if self.s[op][d] != c {
                    issues.push(DSymbolIssue::NotInvolution { op, chamber: c });
                }
            }
        }
        if !issues.is_empty() {
            return issues;
        }
        for c in 0..n {
            let d = self.s[2][self.s[0][c]];
            if self.s[2][self.s[0][d]] != c {
                issues.push(DSymbolIssue::S0S2NotInvolution { chamber: c });
            }
            if self.m01[c] == 0 || self.m12[c] == 0 {
                issues.push(DSymbolIssue::ZeroBranch { chamber: c });
            }
            for op in [0, 1] {
                if self.m01[self.s[op][c]] != self.m01[c] {
                    issues.push(DSymbolIssue::M01NotConstant { chamber: c });
                    break;
                }
            }
            for op in [1, 2] {
                if self.m12[self.s[op][c]] != self.m12[c] {
                    issues.push(DSymbolIssue::M12NotConstant { chamber: c });
                    break;
                }
            }
        }
        if n > 0 && self.bfs_order(0).len() != n {
            issues.push(DSymbolIssue::NotConnected);
        }
        issues
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `Σ (1/m01 + 1/m12 - 1/2)`; `None` when some branch value is zero.
    pub fn curvature(&self) -> Option<Rational> {
        let half = Rational::new(1, 2);
        let mut k = Rational::from_integer(0);
        for c in 0..self.size() {
            if self.m01[c] == 0 || self.m12[c] == 0 {
                return None;
            }
            k += Rational::new(1, self.m01[c] as i64) + Rational::new(1, self.m12[c] as i64) - half;
        }
        Some(k)
    }

    fn bfs_order(&self, start: usize) -> Vec<usize> {
        let n = self.size();
        let mut num = vec![usize::MAX; n];
        let mut order = vec![start];
        num[start] = 0;
        let mut k = 0;
        while k < order.len() {
            let c = order[k];
            for op in 0..3 {
                let d = self.s[op][c];
                if d < n && num[d] == usize::MAX {
                    num[d] = order.len();
                    order.push(d);
                }
            }
            k += 1;
        }
        order
    }

    /// Chambers renumbered so that `perm[old] = new`.
    pub fn relabeled(&self, perm: &[usize]) -> DSymbol {
        let n = self.size();
        let mut out = DSymbol {
            s: [vec![0; n], vec![0; n], vec![0; n]],
            m01: vec![0; n],
            m12: vec![0; n],
        };
        for c in 0..n {
            for op in 0..3 {
                out.s[op][perm[c]] = perm[self.s[op][c]];
            }
            out.m01[perm[c]] = self.m01[c];
            out.m12[perm[c]] = self.m12[c];
        }
        out
    }

    /// Relabeling by breadth-first search from the start chamber giving the
    /// lexicographically least table. Requires a connected symbol.
    pub fn canonical_form(&self) -> DSymbol {
        let n = self.size();
        let mut best: Option<(Vec<usize>, DSymbol)> = None;
        for start in 0..n {
            let order = self.bfs_order(start);
            if order.len() != n {
                continue;
            }
            let mut perm = vec![0; n];
            for (new, &old) in order.iter().enumerate() {
                perm[old] = new;
            }
            let cand = self.relabeled(&perm);
            let key = cand.trace();
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, cand));
            }
        }
        best.map(|(_, d)| d).unwrap_or_else(|| self.clone())
    }

    fn trace(&self) -> Vec<usize> {
        let mut t = Vec::with_capacity(5 * self.size());
        for c in 0..self.size() {
            t.extend_from_slice(&[
                self.s[0][c],
                self.s[1][c],
                self.s[2][c],
                self.m01[c] as usize,
                self.m12[c] as usize,
            ]);
        }
        t
    }

    pub fn isomorphic(&self, other: &DSymbol) -> bool {
        self.size() == other.size() && self.canonical_form() == other.canonical_form()
    }
}

pub fn dsym_isomorphic(a: &DSymbol, b: &DSymbol) -> bool {
    a.isomorphic(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecorationEdge {
    pub from: usize,
    pub to: usize,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbifoldDecoration {
    pub symbol: ConwaySymbol,
    pub vertices: Vec<AnchorWord>,
    pub edges: Vec<DecorationEdge>,
}

impl OrbifoldDecoration {
    /// The boundary of a recipe polygon: edges between cyclically
    /// consecutive vertices.
    pub fn polygon(symbol: ConwaySymbol, vertices: Vec<AnchorWord>) -> Self {
        let n = vertices.len();
        let edges = (0..n)
            .map(|i| DecorationEdge {
                from: i,
                to: (i + 1) % n,
                word: Word::identity(),
            })
            .collect();
        OrbifoldDecoration {
            symbol,
            vertices,
            edges,
        }
    }
}

/// A corner of a traced face: `point = element·P(vertex)`.
#[derive(Debug, Clone)]
pub struct Corner {
    pub point: DiskPoint,
    pub vertex: usize,
    pub element: Isometry,
    pub word: Word,
}

#[derive(Debug, Clone)]
pub struct Face {
    pub corners: Vec<Corner>,
    pub area: f64,
    /// Chambers of the symbol in this face orbit.
    pub chambers: Vec<usize>,
}

/// A decoration developed in the disk.
#[derive(Debug, Clone)]
pub struct Development {
    pub symbol: DSymbol,
    pub faces: Vec<Face>,
    /// Edge orbit (index into `symbol.edge_orbits()`) of each decoration edge.
    pub edge_orbit: Vec<usize>,
    /// Plane degree of each decoration vertex.
    pub degrees: Vec<usize>,
}

const POINT_TOL: f64 = 1e-7;
const MAX_FACE_SIDES: usize = 4096;
const ESCAPE_DISTANCE: f64 = 24.0;

#[derive(Debug, Clone, Copy)]
struct Raw {
    edge: usize,
    end: usize,
    side: usize,
}

fn raw_index(edge: usize, end: usize, side: usize) -> usize {
    4 * edge + 2 * end + side
}

fn raw_of(i: usize) -> Raw {
    Raw {
        edge: i / 4,
        end: (i / 2) % 2,
        side: i % 2,
    }
}

fn flip(side: usize, h: &Isometry) -> usize {
    if h.is_reversing() {
        1 - side
    } else {
        side
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Direction at the shared end, far end, and producers (element index,
/// edge, end) of one segment.
type Segment = (f64, DiskPoint, Vec<(usize, usize, usize)>);

struct Incidence {
    segments: Vec<Segment>,
}

struct Developer<'a> {
    gg: &'a GeometricGroup,
    dec: &'a OrbifoldDecoration,
    ends: Vec<[DiskPoint; 2]>,
    end_vertex: Vec<[(usize, Word); 2]>,
    elements: Vec<(Word, Isometry)>,
}

impl<'a> Developer<'a> {
    fn new(dec: &'a OrbifoldDecoration, gg: &'a GeometricGroup) -> Result<Self, DsymError> {
        if dec.vertices.is_empty() || dec.edges.is_empty() {
            return Err(DsymError::InvalidDecoration("no edges, so no tiles".into()));
        }
        let pos = dec
            .vertices
            .iter()
            .map(|v| gg.resolve(v))
            .collect::<Result<Vec<_>, _>>()?;
        let mut ends = Vec::with_capacity(dec.edges.len());
        let mut end_vertex = Vec::with_capacity(dec.edges.len());
        for (k, e) in dec.edges.iter().enumerate() {
            if e.from >= pos.len() || e.to >= pos.len() {
                return Err(DsymError::BadIndex(format!("edge {k} names a missing vertex")));
            }
            let far = gg.evaluate(&e.word)?.apply(pos[e.to]);
            if (far - pos[e.from]).norm() < 1e-9 {
                return Err(DsymError::InvalidDecoration(format!("edge {k} has length zero")));
            }
            ends.push([pos[e.from], far]);
            end_vertex.push([(e.from, Word::identity()), (e.to, e.word.clone())]);
        }
        let origin = Complex::new(0.0, 0.0);
        let rmax = ends
            .iter()
            .flat_map(|e| e.iter())
            .map(|&p| distance(origin, p))
            .fold(0.0, f64::max);
        let len = ends
            .iter()
            .map(|e| distance(e[0], e[1]))
            .fold(0.0, f64::max);
        let probe = generate_patch(gg, &gg.base_polygon, 0.0)?;
        let radius = 2.0 * rmax + len + distance(origin, probe.center) + 0.5;
        let patch = generate_patch(gg, &gg.base_polygon, radius)?;
        let elements = patch
            .tiles
            .into_iter()
            .map(|t| (t.word, t.element))
            .collect();
        Ok(Developer {
            gg,
            dec,
            ends,
            end_vertex,
            elements,
        })
    }

    fn incidence(&self, x: DiskPoint) -> Incidence {
        let mut segments: Vec<Segment> = Vec::new();
        for (t, (_, h)) in self.elements.iter().enumerate() {
            for (k, e) in self.ends.iter().enumerate() {
                for b in 0..2 {
                    if (h.apply(e[b]) - x).norm() > POINT_TOL {
                        continue;
                    }
                    let far = h.apply(e[1 - b]);
                    match segments.iter_mut().find(|s| (s.1 - far).norm() < POINT_TOL) {
                        Some(s) => s.2.push((t, k, b)),
                        None => segments.push((tangent_direction(x, far), far, vec![(t, k, b)])),
                    }
                }
            }
        }
        Incidence { segments }
    }

    fn crossing_check(&self) -> Result<(), DsymError> {
        let klein = |p: DiskPoint| to_klein(p);
        let same = |a: DiskPoint, b: DiskPoint| (a - b).norm() < POINT_TOL;
        for (j, e) in self.ends.iter().enumerate() {
            let (a, b) = (e[0], e[1]);
            let (ka, kb) = (klein(a), klein(b));
            for (_, h) in &self.elements {
                for (k, f) in self.ends.iter().enumerate() {
                    let (c, d) = (h.apply(f[0]), h.apply(f[1]));
                    let shared_a = same(a, c) || same(a, d);
                    let shared_b = same(b, c) || same(b, d);
                    if shared_a && shared_b {
                        continue;
                    }
                    let clash = if shared_a || shared_b {
                        let (p, q, r) = if shared_a {
                            (a, b, if same(a, c) { d } else { c })
                        } else {
                            (b, a, if same(b, c) { d } else { c })
                        };
                        let gap = (tangent_direction(p, q) - tangent_direction(p, r)).abs();
                        gap < 1e-9 || (TAU - gap) < 1e-9
                    } else {
                        segments_touch(ka, kb, klein(c), klein(d))
                    };
                    if clash {
                        return Err(DsymError::CrossingArc(format!(
                            "edge {j} meets an image of edge {k}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn develop(&self) -> Result<Development, DsymError> {
        self.crossing_check()?;
        let e = self.ends.len();
        let nraw = 4 * e;
        let mut uf = UnionFind((0..nraw).collect());
        // s1 for each raw label: (element index, raw label)
        let mut s1: Vec<(usize, usize)> = vec![(0, 0); nraw];
        let mut degree_at_end = vec![[0usize; 2]; e];
        for k in 0..e {
            for a in 0..2 {
                let x = self.ends[k][a];
                let inc = self.incidence(x);
                for seg in &inc.segments {
                    let (t0, k0, b0) = seg.2[0];
                    for &(t1, k1, b1) in &seg.2[1..] {
                        for side in 0..2 {
                            let h0 = &self.elements[t0].1;
                            let h1 = &self.elements[t1].1;
                            uf.union(
                                raw_index(k0, b0, flip(side, h0)),
                                raw_index(k1, b1, flip(side, h1)),
                            );
                        }
                    }
                }
                degree_at_end[k][a] = inc.segments.len();
                let own = inc
                    .segments
                    .iter()
                    .position(|s| (s.1 - self.ends[k][1 - a]).norm() < POINT_TOL)
                    .ok_or_else(|| DsymError::InvalidDecoration("edge not found at its end".into()))?;
                let theta = inc.segments[own].0;
                for side in 0..2 {
                    // side 0: face counterclockwise from the edge
                    let mut best = (f64::INFINITY, own);
                    for (i, s) in inc.segments.iter().enumerate() {
                        let mut delta = if side == 0 { s.0 - theta } else { theta - s.0 };
                        delta -= TAU * (delta / TAU).floor();
                        if delta < 1e-12 {
                            delta = TAU;
                        }
                        if delta < best.0 {
                            best = (delta, i);
                        }
                    }
                    let (t, k2, b2) = inc.segments[best.1].2[0];
                    let landing = flip(1 - side, &self.elements[t].1);
                    s1[raw_index(k, a, side)] = (t, raw_index(k2, b2, landing));
                }
            }
        }

        // chambers are union-find classes, numbered by least raw label
        let mut class_of = vec![usize::MAX; nraw];
        let mut reps: Vec<usize> = Vec::new();
        for r in 0..nraw {
            let root = uf.find(r);
            if class_of[root] == usize::MAX {
                class_of[root] = reps.len();
                reps.push(r);
            }
            class_of[r] = class_of[root];
        }
        let n = reps.len();
        let mut s = [vec![0; n], vec![0; n], vec![0; n]];
        let mut m12 = vec![0u32; n];
        for (c, &r) in reps.iter().enumerate() {
            let raw = raw_of(r);
            s[0][c] = class_of[raw_index(raw.edge, 1 - raw.end, 1 - raw.side)];
            s[1][c] = class_of[s1[r].1];
            s[2][c] = class_of[raw_index(raw.edge, raw.end, 1 - raw.side)];
            m12[c] = degree_at_end[raw.edge][raw.end] as u32;
        }
        let mut symbol = DSymbol {
            s,
            m01: vec![0; n],
            m12,
        };

        let mut faces = Vec::new();
        let mut area_sum = 0.0;
        for orbit in symbol.face_orbits() {
            let face = self.trace_face(reps[orbit[0]], &s1)?;
            let sides = face.corners.len();
            for &c in &orbit {
                symbol.m01[c] = sides as u32;
            }
            area_sum += face.area * orbit.len() as f64 / (2.0 * sides as f64);
            faces.push(Face {
                chambers: orbit,
                ..face
            });
        }
        let chi = self.dec.symbol.euler_characteristic();
        let expect = -TAU * (*chi.numer() as f64) / (*chi.denom() as f64);
        if (area_sum - expect).abs() > 1e-6 * expect.abs().max(1.0) {
            return Err(DsymError::NonDiskResult(format!(
                "tile areas sum to {area_sum:.9} per fundamental domain, expected {expect:.9}"
            )));
        }
        let edge_orbits = symbol.edge_orbits();
        let mut orbit_of_chamber = vec![0; n];
        for (i, o) in edge_orbits.iter().enumerate() {
            for &c in o {
                orbit_of_chamber[c] = i;
            }
        }
        let edge_orbit = (0..e)
            .map(|k| orbit_of_chamber[class_of[raw_index(k, 0, 0)]])
            .collect();
        let degrees = self.vertex_degrees();
        Ok(Development {
            symbol,
            faces,
            edge_orbit,
            degrees,
        })
    }

    fn vertex_degrees(&self) -> Vec<usize> {
        self.dec
            .vertices
            .iter()
            .map(|v| match self.gg.resolve(v) {
                Ok(p) => self.incidence(p).segments.len(),
                Err(_) => 0,
            })
            .collect()
    }

    fn trace_face(&self, start: usize, s1: &[(usize, usize)]) -> Result<Face, DsymError> {
        let origin = Complex::new(0.0, 0.0);
        let mut g = Isometry::IDENTITY;
        let mut word = Word::identity();
        let mut r = start;
        let mut corners: Vec<Corner> = Vec::new();
        let key = |g: &Isometry, r: usize| {
            let raw = raw_of(r);
            let e = self.ends[raw.edge];
            (g.apply(e[raw.end]), g.apply(e[1 - raw.end]), flip(raw.side, g))
        };
        let first = key(&g, r);
        loop {
            let raw = raw_of(r);
            let (v, offset) = &self.end_vertex[raw.edge][raw.end];
            let point = g.apply(self.ends[raw.edge][raw.end]);
            if distance(origin, point) > ESCAPE_DISTANCE {
                return Err(DsymError::NonDiskResult("a face is unbounded".into()));
            }
            corners.push(Corner {
                point,
                vertex: *v,
                element: g.compose(&self.gg.evaluate(offset)?),
                word: word.concat(offset),
            });
            if corners.len() > MAX_FACE_SIDES {
                return Err(DsymError::NonDiskResult("a face does not close".into()));
            }
            let r0 = raw_index(raw.edge, 1 - raw.end, 1 - raw.side);
            let (t, next) = s1[r0];
            let (hw, h) = &self.elements[t];
            g = g.compose(h);
            word = word.concat(hw);
            r = next;
            let k = key(&g, r);
            if (k.0 - first.0).norm() < POINT_TOL && (k.1 - first.1).norm() < POINT_TOL && k.2 == first.2 {
                break;
            }
        }
        let pts: Vec<DiskPoint> = corners.iter().map(|c| c.point).collect();
        if check_simple(&pts).is_err() {
            return Err(DsymError::NonDiskResult("a tile boundary is not a simple polygon".into()));
        }
        let area = polygon_area(&pts);
        Ok(Face {
            corners,
            area,
            chambers: Vec::new(),
        })
    }

    /// Elements of the development patch moving `p` to `q`.
    fn movers(&self, p: DiskPoint, q: DiskPoint) -> Vec<&(Word, Isometry)> {
        self.elements
            .iter()
            .filter(|(_, h)| (h.apply(p) - q).norm() < POINT_TOL)
            .collect()
    }
}

/// Develops a decoration: chambers, faces and degrees.
pub fn develop(dec: &OrbifoldDecoration, gg: &GeometricGroup) -> Result<Development, DsymError> {
    Developer::new(dec, gg)?.develop()
}

pub fn flags_from_decoration(
    dec: &OrbifoldDecoration,
    gg: &GeometricGroup,
) -> Result<DSymbol, DsymError> {
    Ok(develop(dec, gg)?.symbol)
}

fn is_two_fold_center(gg: &GeometricGroup, v: &AnchorWord) -> bool {
    match v.anchor {
        Anchor::Fix(i) => {
            i < gg.gens.len() && gg.presentation.kind(i) == GeneratorKind::Rotation(2)
        }
        _ => false,
    }
}

fn check_degrees(
    dec: &OrbifoldDecoration,
    gg: &GeometricGroup,
    dev: &Development,
) -> Result<(), DsymError> {
    for (v, &degree) in dev.degrees.iter().enumerate() {
        let min = if is_two_fold_center(gg, &dec.vertices[v]) { 2 } else { 3 };
        if degree < min {
            return Err(DsymError::LowDegreeVertex { vertex: v, degree });
        }
    }
    Ok(())
}

/// Removes the orbit of edge `edge` (every decoration edge in it).
pub fn glue(
    dec: &OrbifoldDecoration,
    gg: &GeometricGroup,
    edge: usize,
) -> Result<OrbifoldDecoration, DsymError> {
    if edge >= dec.edges.len() {
        return Err(DsymError::BadIndex(format!("no edge {edge}")));
    }
    let dev = develop(dec, gg)?;
    let orbit = dev.edge_orbit[edge];
    let edges: Vec<DecorationEdge> = dec
        .edges
        .iter()
        .zip(&dev.edge_orbit)
        .filter(|(_, &o)| o != orbit)
        .map(|(e, _)| e.clone())
        .collect();
    if edges.is_empty() {
        return Err(DsymError::NonDiskResult("no edges remain".into()));
    }
    let out = OrbifoldDecoration {
        edges,
        ..dec.clone()
    };
    let new_dev = develop(&out, gg)?;
    check_degrees(&out, gg, &new_dev)?;
    Ok(out)
}

/// Adds the edge from vertex `from` to `word·to` across a tile of face
/// orbit `tile`.
pub fn split(
    dec: &OrbifoldDecoration,
    gg: &GeometricGroup,
    tile: usize,
    from: usize,
    to: usize,
    word: &Word,
) -> Result<OrbifoldDecoration, DsymError> {
    if from >= dec.vertices.len() || to >= dec.vertices.len() {
        return Err(DsymError::BadIndex(format!("no vertex {}", from.max(to))));
    }
    let developer = Developer::new(dec, gg)?;
    let dev = developer.develop()?;
    let face = dev
        .faces
        .get(tile)
        .ok_or_else(|| DsymError::BadIndex(format!("no tile orbit {tile}")))?;
    let a = gg.resolve(&dec.vertices[from])?;
    let b = gg.evaluate(word)?.apply(gg.resolve(&dec.vertices[to])?);
    if (a - b).norm() < 1e-9 {
        return Err(DsymError::CrossingArc("endpoints coincide".into()));
    }
    let mut inside = false;
    'search: for corner in &face.corners {
        let anchor = gg.resolve(&dec.vertices[corner.vertex])?;
        for (_, t) in developer.movers(anchor, a) {
            // h maps this corner of the traced face onto a
            let h = t.compose(&corner.element.inverse());
            let poly: Vec<DiskPoint> = face.corners.iter().map(|c| h.apply(c.point)).collect();
            if !poly.iter().any(|&p| (p - b).norm() < POINT_TOL) {
                continue;
            }
            let mid = crate::moebius::midpoint(a, b).map_err(GeometryError::from)?;
            if strictly_inside(&poly, mid) {
                inside = true;
                break 'search;
            }
        }
    }
    if !inside {
        return Err(DsymError::CrossingArc(format!(
            "the arc does not run inside a tile of orbit {tile}"
        )));
    }
    let mut out = dec.clone();
    out.edges.push(DecorationEdge {
        from,
        to,
        word: word.clone(),
    });
    develop(&out, gg)?;
    Ok(out)
}

fn strictly_inside(poly: &[DiskPoint], p: DiskPoint) -> bool {
    let k: Vec<Complex> = poly.iter().map(|&v| to_klein(v)).collect();
    let q = to_klein(p);
    let n = k.len();
    for i in 0..n {
        let (a, b) = (k[i], k[(i + 1) % n]);
        let d = b - a;
        let t = (((q - a).re * d.re + (q - a).im * d.im) / d.norm_sqr()).clamp(0.0, 1.0);
        if (a + d * t - q).norm() < 1e-9 {
            return false;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (k[i], k[(i + 1) % n]);
        if (a.im > q.im) != (b.im > q.im) {
            let x = a.re + (q.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if q.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Number of edge orbits of a decoration.
pub fn edge_orbit_count(dev: &Development) -> usize {
    let mut seen = BTreeMap::new();
    for &o in &dev.edge_orbit {
        seen.insert(o, ());
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_kaleidoscopic_polygon, realize_stellate, regular_4g_gon};

    fn hexagon() -> (GeometricGroup, OrbifoldDecoration) {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let dec = OrbifoldDecoration::polygon(gg.symbol().clone(), gg.base_polygon.clone());
        (gg, dec)
    }

    #[test]
    fn hexagon_symbol() {
        let (gg, dec) = hexagon();
        let dev = develop(&dec, &gg).unwrap();
        let d = &dev.symbol;
        assert_eq!(d.size(), 12);
        assert!(d.is_valid(), "{:?}", d.validate());
        assert!(d.m01.iter().all(|&m| m == 6));
        assert_eq!(d.edge_orbits().len(), 3);
        assert_eq!(d.curvature(), Some(Rational::new(-1, 2)));
        assert_eq!(dev.faces.len(), 1);
        assert_eq!(edge_orbit_count(&dev), 3);
    }

    #[test]
    fn kaleidoscope_symbol() {
        let gg = build_kaleidoscopic_polygon(&[2, 2, 2, 4]).unwrap();
        let dec = OrbifoldDecoration::polygon(gg.symbol().clone(), gg.base_polygon.clone());
        let d = flags_from_decoration(&dec, &gg).unwrap();
        assert_eq!(d.size(), 8);
        assert!(d.is_valid());
        assert_eq!(d.curvature(), Some(Rational::new(-1, 4)));
    }

    #[test]
    fn octagon_symbol_and_glue() {
        let gg = regular_4g_gon(2).unwrap();
        let dec = OrbifoldDecoration::polygon(gg.symbol().clone(), gg.base_polygon.clone());
        let d = flags_from_decoration(&dec, &gg).unwrap();
        assert_eq!(d.size(), 16);
        assert!(d.m01.iter().all(|&m| m == 8) && d.m12.iter().all(|&m| m == 8));
        assert_eq!(d.curvature(), Some(Rational::from_integer(-4)));
        assert!(matches!(glue(&dec, &gg, 0), Err(DsymError::NonDiskResult(_))));
    }

    #[test]
    fn spherical_size_one() {
        let d = DSymbol {
            s: [vec![0], vec![0], vec![0]],
            m01: vec![3],
            m12: vec![3],
        };
        assert!(d.is_valid());
        assert_eq!(d.curvature(), Some(Rational::new(1, 6)));
        let bad = DSymbol {
            s: [vec![0, 1], vec![1, 1], vec![0, 1]],
            m01: vec![3, 3],
            m12: vec![3, 3],
        };
        assert!(bad
            .validate()
            .contains(&DSymbolIssue::NotInvolution { op: 1, chamber: 0 }));
    }

    #[test]
    fn relabeling_is_isomorphic() {
        let (gg, dec) = hexagon();
        let d = flags_from_decoration(&dec, &gg).unwrap();
        let n = d.size();
        let perm: Vec<usize> = (0..n).map(|i| (i * 5 + 3) % n).collect();
        let e = d.relabeled(&perm);
        assert_ne!(d, e);
        assert!(d.isomorphic(&e));
        assert_eq!(d.canonical_form(), e.canonical_form());
    }

    #[test]
    fn split_then_glue() {
        let (gg, dec) = hexagon();
        let before = flags_from_decoration(&dec, &gg).unwrap();
        let s = split(&dec, &gg, 0, 1, 3, &Word::identity()).unwrap();
        let dev = develop(&s, &gg).unwrap();
        assert_eq!(edge_orbit_count(&dev), 4);
        assert_eq!(dev.faces.len(), 2);
        let g = glue(&s, &gg, 6).unwrap();
        assert!(flags_from_decoration(&g, &gg).unwrap().isomorphic(&before));
        assert!(matches!(
            split(&dec, &gg, 3, 1, 3, &Word::identity()),
            Err(DsymError::BadIndex(_))
        ));
        // neighbouring corners are joined by a side already
        assert!(matches!(
            split(&dec, &gg, 0, 1, 2, &Word::identity()),
            Err(DsymError::CrossingArc(_)) | Err(DsymError::InvalidDecoration(_))
        ));
    }

    #[test]
    fn empty_decoration_is_invalid() {
        let (gg, mut dec) = hexagon();
        dec.edges.clear();
        assert!(matches!(
            flags_from_decoration(&dec, &gg),
            Err(DsymError::InvalidDecoration(_))
        ));
    }
}
