//! Finite patches of the tessellation induced by a group and a tile recipe.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;
#[allow(unused_imports)] // only needed without std
use num_traits::Float;
use thiserror::Error;

use crate::ball::{letters_for, same_element, PROBE};
use crate::geometry::{AnchorWord, GeometricGroup, GeometryError};
use crate::index::PointIndex;
use crate::moebius::{distance, from_klein, polygon_area, to_klein, DiskPoint, Isometry};
use crate::orbifold::Word;
use crate::Complex;

pub const DEFAULT_TILE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TilingError {
    #[error("relation residual {0:e} exceeds 1e-9")]
    RelationResidualTooLarge(f64),
    #[error("patch exceeds {0} tiles")]
    PatchExplosion(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl TilingError {
    pub fn name(&self) -> &'static str {
        match self {
            TilingError::RelationResidualTooLarge(_) => "RelationResidualTooLarge",
            TilingError::PatchExplosion(_) => "PatchExplosion",
            TilingError::Geometry(e) => e.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub word: Word,
    pub element: Isometry,
    pub polygon: Vec<DiskPoint>,
}

/// Tiles `g·P` of the base polygon `P` whose centre lies within `radius` of
/// the origin. The identity tile is always present.
#[derive(Debug, Clone)]
pub struct TilingPatch {
    pub tiles: Vec<Tile>,
    pub group: GeometricGroup,
    pub radius: f64,
    /// Resolved base polygon.
    pub base: Vec<DiskPoint>,
    /// Reference interior point of the base polygon; tile `g` is centred at
    /// `g(center)`.
    pub center: DiskPoint,
    lookup: PointIndex,
}

const PROBE_TOL: f64 = 1e-7;

pub fn generate_patch(
    gg: &GeometricGroup,
    recipe: &[AnchorWord],
    radius: f64,
) -> Result<TilingPatch, TilingError> {
    generate_patch_capped(gg, recipe, radius, DEFAULT_TILE_CAP)
}

/// Breadth-first closure over right multiplication by generators, pruned
/// by the distance of tile centres from the origin.
pub fn generate_patch_capped(
    gg: &GeometricGroup,
    recipe: &[AnchorWord],
    radius: f64,
    cap: usize,
) -> Result<TilingPatch, TilingError> {
    let residual = gg.max_residual();
    if residual.is_nan() || residual >= 1e-9 {
        return Err(TilingError::RelationResidualTooLarge(residual));
    }
    let base = gg.fundamental_tile_vertices(recipe)?;
    let center = interior_point(&base);
    let reach = base
        .iter()
        .map(|&v| distance(center, v))
        .fold(0.0, f64::max);
    // tiles met by the segment from the origin to a kept centre lie within
    // `radius + reach`, and consecutive ones share a side
    let explore = radius.max(0.0) + reach + 0.5;

    let letters = letters_for(&gg.gens);
    let mut seen = PointIndex::new(PROBE_TOL);
    let mut elements: Vec<Isometry> = Vec::new();
    let mut words: Vec<Word> = Vec::new();
    let mut lookup = PointIndex::new(PROBE_TOL);
    let mut tiles: Vec<Tile> = Vec::new();

    let keep = |w: Word, g: Isometry, tiles: &mut Vec<Tile>, lookup: &mut PointIndex| {
        lookup.insert(g.apply(PROBE));
        tiles.push(Tile {
            polygon: base.iter().map(|&v| g.apply(v)).collect(),
            word: w,
            element: g,
        });
    };

    seen.insert(PROBE);
    elements.push(Isometry::IDENTITY);
    words.push(Word::identity());
    keep(Word::identity(), Isometry::IDENTITY, &mut tiles, &mut lookup);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for &(s, e) in &letters {
            let h = elements[i].compose(&gg.gens[s].pow(e));
            let probe = h.apply(PROBE);
            if seen
                .near(probe, PROBE_TOL)
                .iter()
                .any(|&j| same_element(&elements[j], &h))
            {
                continue;
            }
            let d = distance(Complex::new(0.0, 0.0), h.apply(center));
            if d > explore {
                continue;
            }
            let w = words[i].concat(&Word::power(s, e));
            seen.insert(probe);
            elements.push(h);
            words.push(w.clone());
            queue.push_back(elements.len() - 1);
            if d <= radius {
                keep(w, h, &mut tiles, &mut lookup);
                if tiles.len() > cap {
                    return Err(TilingError::PatchExplosion(cap));
                }
            }
            if elements.len() > 20 * cap {
                return Err(TilingError::PatchExplosion(cap));
            }
        }
    }
    Ok(TilingPatch {
        tiles,
        group: gg.clone(),
        radius,
        base,
        center,
        lookup,
    })
}

/// A point well inside a simple polygon: the Klein-model vertex mean when it
/// is inside, otherwise the best interior sample.
fn interior_point(poly: &[DiskPoint]) -> DiskPoint {
    let k: Vec<Complex> = poly.iter().map(|&p| to_klein(p)).collect();
    let mean = k.iter().sum::<Complex>() / k.len() as f64;
    if klein_margin(&k, mean) > 0.0 {
        return from_klein(mean);
    }
    interior_samples(poly, 1)
        .into_iter()
        .next()
        .unwrap_or_else(|| from_klein(mean))
}

/// Signed distance (Klein model, Euclidean) from `p` to the polygon
/// boundary: positive inside.
fn klein_margin(k: &[Complex], p: Complex) -> f64 {
    let n = k.len();
    let mut inside = false;
    let mut best = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (k[i], k[(i + 1) % n]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if p.re < x {
                inside = !inside;
            }
        }
        let ab = b - a;
        let t = (((p - a).re * ab.re + (p - a).im * ab.im) / ab.norm_sqr()).clamp(0.0, 1.0);
        best = best.min((a + ab * t - p).norm());
    }
    if inside {
        best
    } else {
        -best
    }
}

/// Interior points of a simple polygon, deepest first, at most `count`.
pub fn interior_samples(poly: &[DiskPoint], count: usize) -> Vec<DiskPoint> {
    let k: Vec<Complex> = poly.iter().map(|&p| to_klein(p)).collect();
    let (mut lo, mut hi) = (k[0], k[0]);
    for p in &k {
        lo = Complex::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let steps = 24;
    let mut cands: Vec<(f64, Complex)> = Vec::new();
    for i in 1..steps {
        for j in 1..steps {
            let p = Complex::new(
                lo.re + (hi.re - lo.re) * i as f64 / steps as f64,
                lo.im + (hi.im - lo.im) * j as f64 / steps as f64,
            );
            let m = klein_margin(&k, p);
            if m > 1e-6 {
                cands.push((m, p));
            }
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.re.total_cmp(&b.1.re)));
    cands
        .into_iter()
        .take(count)
        .map(|(_, p)| from_klein(p))
        .collect()
}

fn strictly_inside(poly: &[DiskPoint], p: DiskPoint) -> bool {
    let k: Vec<Complex> = poly.iter().map(|&v| to_klein(v)).collect();
    klein_margin(&k, to_klein(p)) > 1e-12
}

impl TilingPatch {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Largest distance between two base vertices.
    pub fn tile_diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, &p) in self.base.iter().enumerate() {
            for &q in &self.base[i + 1..] {
                d = d.max(distance(p, q));
            }
        }
        d
    }

    pub fn find(&self, g: &Isometry) -> Option<usize> {
        self.lookup
            .near(g.apply(PROBE), PROBE_TOL)
            .into_iter()
            .find(|&i| same_element(&self.tiles[i].element, g))
    }

    pub fn tile_center(&self, i: usize) -> DiskPoint {
        self.tiles[i].element.apply(self.center)
    }

    /// Vertex clusters (tolerance 1e-7) with the tiles incident to each.
    pub fn vertex_clusters(&self) -> Vec<(DiskPoint, Vec<usize>)> {
        let mut index = PointIndex::new(1e-7);
        let mut clusters: Vec<(DiskPoint, Vec<usize>)> = Vec::new();
        for (t, tile) in self.tiles.iter().enumerate() {
            for &v in &tile.polygon {
                match index.nearest(v, 1e-7) {
                    Some(c) => {
                        if clusters[c].1.last() != Some(&t) {
                            clusters[c].1.push(t);
                        }
                    }
                    None => {
                        index.insert(v);
                        clusters.push((v, alloc::vec![t]));
                    }
                }
            }
        }
        clusters
    }

    /// Incident tile counts for vertices farther than one tile diameter
    /// from the rim of the patch.
    pub fn vertex_degree_histogram(&self) -> BTreeMap<usize, usize> {
        let limit = self.radius - self.tile_diameter();
        let origin = Complex::new(0.0, 0.0);
        let mut hist = BTreeMap::new();
        for (p, tiles) in self.vertex_clusters() {
            if distance(origin, p) < limit {
                *hist.entry(tiles.len()).or_insert(0) += 1;
            }
        }
        hist
    }

    pub fn patch_area(&self) -> f64 {
        self.tiles.iter().map(|t| polygon_area(&t.polygon)).sum()
    }

    /// Largest deviation between stored polygons and the base polygon moved
    /// by the stored word.
    pub fn word_consistency(&self) -> Result<f64, GeometryError> {
        let mut worst: f64 = 0.0;
        for t in &self.tiles {
            let g = self.group.evaluate(&t.word)?;
            for (v, w) in self.base.iter().zip(&t.polygon) {
                worst = worst.max((g.apply(*v) - *w).norm());
            }
        }
        Ok(worst)
    }

    /// First pair of tiles found with overlapping interiors, using sample
    /// points of the base tile.
    pub fn overlapping_tiles(&self, samples: usize) -> Option<(usize, usize)> {
        let pts = interior_samples(&self.base, samples);
        let boxes: Vec<(Complex, Complex)> = self
            .tiles
            .iter()
            .map(|t| {
                let k: Vec<Complex> = t.polygon.iter().map(|&p| to_klein(p)).collect();
                let mut lo = k[0];
                let mut hi = k[0];
                for p in &k {
                    lo = Complex::new(lo.re.min(p.re), lo.im.min(p.im));
                    hi = Complex::new(hi.re.max(p.re), hi.im.max(p.im));
                }
                (lo, hi)
            })
            .collect();
        for (i, t) in self.tiles.iter().enumerate() {
            for &s in &pts {
                let p = t.element.apply(s);
                let k = to_klein(p);
                for (j, (lo, hi)) in boxes.iter().enumerate() {
                    if j == i || k.re < lo.re || k.re > hi.re || k.im < lo.im || k.im > hi.im {
                        continue;
                    }
                    if strictly_inside(&self.tiles[j].polygon, p) {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }

    /// A tile `t` and generator letter `s^e` such that `s^e·t` is centred well
    /// inside the patch but missing from it.
    pub fn equivariance_violation(&self) -> Option<(usize, usize, i64)> {
        let letters = letters_for(&self.group.gens);
        let origin = Complex::new(0.0, 0.0);
        for (i, t) in self.tiles.iter().enumerate() {
            for &(s, e) in &letters {
                let g = self.group.gens[s].pow(e).compose(&t.element);
                if distance(origin, g.apply(self.center)) < self.radius - 1e-6
                    && self.find(&g).is_none()
                {
                    return Some((i, s, e));
                }
            }
        }
        None
    }
}
