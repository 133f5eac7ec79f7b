//! Automorphisms of orbifold groups given as word maps.
//!
//! The word problem is decided numerically in a faithful realization, and
//! every search is bounded by a word length: a negative answer means "none
//! found at this depth", never "none exists".

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // only needed without std
use num_traits::Float;
use thiserror::Error;

use crate::ball::{express, same_element, Ball, PROBE};
use crate::geometry::{GeometricGroup, GeometryError};
use crate::index::PointIndex;
use crate::moebius::{Isometry, IsometryClass};
use crate::orbifold::{free_reduce, ConwaySymbol, CurvatureClass, GeneratorKind, Presentation, Word};
use crate::{Rational, IDENTITY_TOL};

/// Default word length for bounded searches.
pub const DEFAULT_DEPTH: usize = 8;

const BALL_CAP: usize = 400_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IsotopyError {
    #[error("expected {expected} images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("relation {relation} maps to a word with residual {residual:e}")]
    NotHomomorphism { relation: String, residual: f64 },
    #[error("generator {generator} is not a word of length <= {depth} in the images")]
    NotSurjective { generator: String, depth: usize },
    #[error("orientation is undefined for non-orientable {0}")]
    NonOrientableSymbol(String),
    #[error("chi ratio {0} is not a positive integer")]
    NonIntegralIndex(Rational),
    #[error("{0} is not hyperbolic")]
    NotHyperbolic(String),
    #[error("need at least 3 punctures, got {0}")]
    TooFewPunctures(u32),
    #[error("relations hold only up to {0:e} on the new generators")]
    RelationResidual(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl IsotopyError {
    pub fn name(&self) -> &'static str {
        match self {
            IsotopyError::WrongImageCount { .. } => "WrongImageCount",
            IsotopyError::NotHomomorphism { .. } => "NotHomomorphism",
            IsotopyError::NotSurjective { .. } => "NotSurjective",
            IsotopyError::NonOrientableSymbol(_) => "NonOrientableSymbol",
            IsotopyError::NonIntegralIndex(_) => "NonIntegralIndex",
            IsotopyError::NotHyperbolic(_) => "NotHyperbolic",
            IsotopyError::TooFewPunctures(_) => "TooFewPunctures",
            IsotopyError::RelationResidual(_) => "RelationResidual",
            IsotopyError::Geometry(e) => e.name(),
        }
    }
}

/// Images of the generators, one word each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub images: Vec<Word>,
}

impl Automorphism {
    pub fn identity(rank: usize) -> Self {
        Automorphism {
            images: (0..rank).map(Word::generator).collect(),
        }
    }

    /// `g ↦ w g w⁻¹`.
    pub fn inner(rank: usize, w: &Word) -> Self {
        Automorphism {
            images: (0..rank).map(|i| Word::generator(i).conjugate_by(w)).collect(),
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// `self` after `first`: `g ↦ self(first(g))`.
    pub fn after(&self, first: &Automorphism) -> Automorphism {
        Automorphism {
            images: first.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Automorphism {
        let mut out = Automorphism::identity(self.images.len());
        for _ in 0..n {
            out = self.after(&out);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Preserving,
    Reversing,
    Undetermined,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Preserving => "preserving",
            Orientation::Reversing => "reversing",
            Orientation::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismVerdict {
    pub is_homomorphism: bool,
    pub type_preserving: bool,
    /// `None` for non-orientable symbols.
    pub orientation: Option<Orientation>,
    pub inner_conjugator: Option<Word>,
    pub depth: usize,
}

/// Largest relator residual after substitution, with the failing relation.
fn homomorphism_defect(images: &[Word], gg: &GeometricGroup) -> Result<Option<(usize, f64)>, IsotopyError> {
    let mut worst: Option<(usize, f64)> = None;
    for (i, rel) in gg.presentation.relations.iter().enumerate() {
        let m = gg.evaluate(&rel.substitute(images))?;
        let res = m.identity_residual() / m.max_abs_entry().max(1.0);
        if res > IDENTITY_TOL && worst.is_none_or(|(_, r)| res > r) {
            worst = Some((i, res));
        }
    }
    Ok(worst)
}

/// Validates a word map as an automorphism: relators go to the identity in
/// the realization and every generator is a word of length at most `depth`
/// in the images.
pub fn make_automorphism(
    gg: &GeometricGroup,
    images: Vec<Word>,
    depth: usize,
) -> Result<Automorphism, IsotopyError> {
    let p = &gg.presentation;
    if images.len() != p.rank() {
        return Err(IsotopyError::WrongImageCount {
            expected: p.rank(),
            got: images.len(),
        });
    }
    if let Some((i, residual)) = homomorphism_defect(&images, gg)? {
        return Err(IsotopyError::NotHomomorphism {
            relation: p.format_word(&p.relations[i]),
            residual,
        });
    }
    let image_gens = images
        .iter()
        .map(|w| gg.evaluate(w))
        .collect::<Result<Vec<_>, _>>()?;
    let ball = Ball::new(&image_gens, depth.div_ceil(2), BALL_CAP);
    for (i, g) in gg.gens.iter().enumerate() {
        if express(&ball, g, depth).is_none() {
            return Err(IsotopyError::NotSurjective {
                generator: p.generators[i].0.clone(),
                depth,
            });
        }
    }
    Ok(Automorphism { images })
}

fn same_type(before: &IsometryClass, after: &IsometryClass) -> bool {
    use IsometryClass::*;
    match (before, after) {
        // a proper power of a rotation turns by a different angle
        (Elliptic { angle: a, .. }, Elliptic { angle: b, .. }) => {
            (a.abs() - b.abs()).abs() < 1e-7
        }
        (Parabolic, Parabolic)
        | (Hyperbolic { .. }, Hyperbolic { .. })
        | (Reflection, Reflection)
        | (Glide { .. }, Glide { .. })
        | (Identity, Identity) => true,
        _ => false,
    }
}

/// Whether each generator image has the type of its generator: rotations go
/// to rotations by the same angle up to sign, and so on.
pub fn is_type_preserving(a: &Automorphism, gg: &GeometricGroup) -> Result<bool, IsotopyError> {
    for (g, w) in gg.gens.iter().zip(&a.images) {
        let img = gg.evaluate(w)?;
        if !same_type(&g.classify(IDENTITY_TOL), &img.classify(1e-7)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Free and cyclic reduction, with rotation exponents taken into
/// `(-A/2, A/2]`.
fn cyclic_normal(w: &Word, p: &Presentation, use_orders: bool) -> Vec<(usize, i64)> {
    let mut letters = w.letters.clone();
    loop {
        if use_orders {
            for l in letters.iter_mut() {
                if let GeneratorKind::Rotation(a) = p.kind(l.0) {
                    let a = a as i64;
                    let mut e = l.1.rem_euclid(a);
                    if 2 * e > a {
                        e -= a;
                    }
                    l.1 = e;
                }
            }
            letters.retain(|l| l.1 != 0);
        }
        let mut reduced = free_reduce(&Word { letters: letters.clone() }).letters;
        // cyclic reduction
        while reduced.len() > 1 {
            let (f, l) = (reduced[0], reduced[reduced.len() - 1]);
            if f.0 != l.0 {
                break;
            }
            reduced.pop();
            reduced[0].1 += l.1;
            if reduced[0].1 == 0 {
                reduced.remove(0);
            }
        }
        if reduced == letters {
            return reduced;
        }
        letters = reduced;
    }
}

fn cyclic_equal(a: &[(usize, i64)], b: &[(usize, i64)]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|s| (0..a.len()).all(|i| a[(i + s) % a.len()] == b[i]))
}

/// Orientation from the global relation: its image is conjugate to the
/// relation itself (preserving) or to its inverse (reversing).
pub fn orientation_of(a: &Automorphism, p: &Presentation) -> Result<Orientation, IsotopyError> {
    if !p.symbol.is_orientable() {
        return Err(IsotopyError::NonOrientableSymbol(format!("{}", p.symbol)));
    }
    let Some(global) = p.global_relation() else {
        return Ok(Orientation::Undetermined);
    };
    let image = a.apply(global);
    for use_orders in [false, true] {
        let img = cyclic_normal(&image, p, use_orders);
        if cyclic_equal(&img, &cyclic_normal(global, p, use_orders)) {
            return Ok(Orientation::Preserving);
        }
        if cyclic_equal(&img, &cyclic_normal(&global.inverse(), p, use_orders)) {
            return Ok(Orientation::Reversing);
        }
    }
    Ok(Orientation::Undetermined)
}

/// Shortest word `w` of length at most `max_len` with
/// `w·gens[i]·w⁻¹ = targets[i]` for every `i`, by meeting in the middle:
/// `w = u·v` with `v·g₀·v⁻¹ = u⁻¹·t₀·u`.
fn find_conjugator(ball: &Ball, gens: &[Isometry], targets: &[Isometry], max_len: usize) -> Option<Word> {
    if gens.is_empty() {
        return Some(Word::identity());
    }
    let key_gen = &gens[0];
    let mut index = PointIndex::new(1e-7);
    let conj: Vec<Isometry> = ball
        .elements
        .iter()
        .map(|v| {
            let c = v.compose(key_gen).compose(&v.inverse());
            index.insert(c.apply(PROBE));
            c
        })
        .collect();
    let works = |w: &Isometry| {
        let wi = w.inverse();
        gens.iter()
            .zip(targets)
            .all(|(g, t)| same_element(&w.compose(g).compose(&wi), t))
    };
    let mut best: Option<(usize, Word)> = None;
    for (i, u) in ball.elements.iter().enumerate() {
        let lu = ball.lengths[i];
        if lu > max_len || best.as_ref().is_some_and(|(bl, _)| lu >= *bl) {
            break;
        }
        let ui = u.inverse();
        let want = ui.compose(&targets[0]).compose(u);
        for j in index.near(want.apply(PROBE), 1e-7) {
            let total = lu + ball.lengths[j];
            if total > max_len || best.as_ref().is_some_and(|(bl, _)| total >= *bl) {
                continue;
            }
            if !same_element(&conj[j], &want) {
                continue;
            }
            if works(&u.compose(&ball.elements[j])) {
                best = Some((total, ball.words[i].concat(&ball.words[j])));
            }
        }
    }
    best.map(|(_, w)| w)
}

/// A conjugator word of length at most `max_len` realizing `a` as an inner
/// automorphism, if one exists at that depth.
pub fn is_inner(a: &Automorphism, gg: &GeometricGroup, max_len: usize) -> Result<Option<Word>, IsotopyError> {
    let targets = a
        .images
        .iter()
        .map(|w| gg.evaluate(w))
        .collect::<Result<Vec<_>, _>>()?;
    let ball = Ball::new(&gg.gens, max_len.div_ceil(2), BALL_CAP);
    Ok(find_conjugator(&ball, &gg.gens, &targets, max_len))
}

/// Whether `a` maps the subgroup generated by `sub_gens` into itself, each
/// image being a word of length at most `max_len` in `sub_gens`.
pub fn restricts_to_subgroup(
    a: &Automorphism,
    gg: &GeometricGroup,
    sub_gens: &[Word],
    max_len: usize,
) -> Result<bool, IsotopyError> {
    let subs = sub_gens
        .iter()
        .map(|w| gg.evaluate(w))
        .collect::<Result<Vec<_>, _>>()?;
    let ball = Ball::new(&subs, max_len.div_ceil(2), BALL_CAP);
    for w in sub_gens {
        let img = gg.evaluate(&a.apply(w))?;
        if express(&ball, &img, max_len).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// New generator set `gens'[i] = a(gᵢ)` evaluated in `gg`.
pub fn act_on_generators(a: &Automorphism, gg: &GeometricGroup) -> Result<GeometricGroup, IsotopyError> {
    let gens = a
        .images
        .iter()
        .map(|w| gg.evaluate(w))
        .collect::<Result<Vec<_>, _>>()?;
    let out = gg.with_gens(gens);
    let res = out.max_residual();
    if res > IDENTITY_TOL * 10.0 {
        return Err(IsotopyError::RelationResidual(res));
    }
    Ok(out)
}

fn permutations_by_kind(p: &Presentation) -> Vec<Vec<usize>> {
    let n = p.rank();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        p: &Presentation,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = used.len();
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        let i = current.len();
        for j in 0..n {
            if !used[j] && p.kind(j) == p.kind(i) {
                used[j] = true;
                current.push(j);
                rec(p, current, used, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    rec(p, &mut current, &mut used, &mut out);
    out
}

/// A word `w` and a kind-preserving permutation `π` with
/// `w·g1[i]·w⁻¹ = g2[π(i)]` for all `i`, searched up to length `max_len`.
/// Permutations under which `g2` fails the relations are skipped.
pub fn generator_sets_conjugate(
    g1: &GeometricGroup,
    g2: &GeometricGroup,
    max_len: usize,
) -> Result<Option<(Word, Vec<usize>)>, IsotopyError> {
    let p = &g1.presentation;
    let ball = Ball::new(&g1.gens, max_len.div_ceil(2), BALL_CAP);
    let mut best: Option<(Word, Vec<usize>)> = None;
    for perm in permutations_by_kind(p) {
        let targets: Vec<Isometry> = perm.iter().map(|&j| g2.gens[j]).collect();
        let permuted = g2.with_gens(targets.clone());
        if permuted.max_residual() > IDENTITY_TOL * 10.0 {
            continue;
        }
        if let Some(w) = find_conjugator(&ball, &g1.gens, &targets, max_len) {
            if best.as_ref().is_none_or(|(b, _)| w.length() < b.length()) {
                best = Some((w, perm));
            }
        }
    }
    Ok(best)
}

/// Runs every check on a candidate word map.
pub fn verdict(gg: &GeometricGroup, images: &[Word], depth: usize) -> Result<AutomorphismVerdict, IsotopyError> {
    let p = &gg.presentation;
    if images.len() != p.rank() {
        return Err(IsotopyError::WrongImageCount {
            expected: p.rank(),
            got: images.len(),
        });
    }
    let a = Automorphism {
        images: images.to_vec(),
    };
    let is_homomorphism = homomorphism_defect(images, gg)?.is_none();
    let orientation = match orientation_of(&a, p) {
        Ok(o) => Some(o),
        Err(IsotopyError::NonOrientableSymbol(_)) => None,
        Err(e) => return Err(e),
    };
    let inner_conjugator = if is_homomorphism { is_inner(&a, gg, depth)? } else { None };
    Ok(AutomorphismVerdict {
        is_homomorphism,
        type_preserving: is_type_preserving(&a, gg)?,
        orientation,
        inner_conjugator,
        depth,
    })
}

/// `χ(sub) / χ(sup)`, which must be a positive integer for `sub` to be a
/// subgroup of finite index. A necessary condition only.
pub fn subgroup_index(sub: &ConwaySymbol, sup: &ConwaySymbol) -> Result<u64, IsotopyError> {
    for s in [sub, sup] {
        if s.curvature_class() != CurvatureClass::Hyperbolic {
            return Err(IsotopyError::NotHyperbolic(format!("{s}")));
        }
    }
    let ratio = sub.euler_characteristic() / sup.euler_characteristic();
    if ratio.is_integer() && *ratio.numer() > 0 {
        Ok(*ratio.numer() as u64)
    } else {
        Err(IsotopyError::NonIntegralIndex(ratio))
    }
}

/// Orders of finite-order mapping classes of an `n`-punctured sphere:
/// divisors of `n`, `n - 1` or `n - 2`.
pub fn valid_finite_orders(n: u32) -> Result<Vec<u32>, IsotopyError> {
    if n < 3 {
        return Err(IsotopyError::TooFewPunctures(n));
    }
    Ok((1..=n)
        .filter(|m| n.is_multiple_of(*m) || (n - 1).is_multiple_of(*m) || (n - 2).is_multiple_of(*m))
        .collect())
}

/// Half twist exchanging generators `i` and `i + 1` of a stellate group,
/// keeping the product `r₁…rₙ` fixed: `rᵢ ↦ rᵢ rᵢ₊₁ rᵢ⁻¹`, `rᵢ₊₁ ↦ rᵢ`.
pub fn half_twist(rank: usize, i: usize) -> Automorphism {
    let mut a = Automorphism::identity(rank);
    a.images[i] = Word::generator(i + 1).conjugate_by(&Word::generator(i));
    a.images[i + 1] = Word::generator(i);
    a
}

/// Product of half twists, applied left to right.
pub fn braid(rank: usize, twists: &[usize]) -> Automorphism {
    twists
        .iter()
        .fold(Automorphism::identity(rank), |acc, &i| half_twist(rank, i).after(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::realize_stellate;
    use crate::orbifold::parse_conway;

    fn w(letters: &[(usize, i64)]) -> Word {
        Word::from_letters(letters.iter().copied())
    }

    #[test]
    fn identity_and_inner() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let id = make_automorphism(&gg, Automorphism::identity(4).images, 8).unwrap();
        assert_eq!(is_inner(&id, &gg, 8).unwrap(), Some(Word::identity()));
        assert_eq!(orientation_of(&id, &gg.presentation).unwrap(), Orientation::Preserving);
        let c = Automorphism::inner(4, &w(&[(0, 1)]));
        let c = make_automorphism(&gg, c.images, 8).unwrap();
        assert_eq!(is_inner(&c, &gg, 8).unwrap(), Some(w(&[(0, 1)])));
        assert!(is_type_preserving(&c, &gg).unwrap());
        assert_eq!(orientation_of(&c, &gg.presentation).unwrap(), Orientation::Preserving);
    }

    #[test]
    fn swapped_generators_are_not_a_homomorphism() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let imgs = vec![w(&[(1, 1)]), w(&[(0, 1)]), w(&[(2, 1)]), w(&[(3, 1)])];
        assert!(matches!(
            make_automorphism(&gg, imgs, 8),
            Err(IsotopyError::NotHomomorphism { .. })
        ));
    }

    #[test]
    fn squaring_a_rotation_is_not_type_preserving() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let mut a = Automorphism::identity(4);
        a.images[3] = w(&[(3, 2)]);
        assert!(!is_type_preserving(&a, &gg).unwrap());
    }

    #[test]
    fn reversing_map() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let r12 = w(&[(0, 1), (1, 1)]);
        let imgs = vec![
            w(&[(0, -1)]),
            w(&[(1, -1)]).conjugate_by(&w(&[(0, 1)])),
            w(&[(2, -1)]).conjugate_by(&r12),
            w(&[(3, -1)]),
        ];
        let a = make_automorphism(&gg, imgs, 8).unwrap();
        assert_eq!(orientation_of(&a, &gg.presentation).unwrap(), Orientation::Reversing);
        assert!(is_type_preserving(&a, &gg).unwrap());
    }

    #[test]
    fn order_three_on_22222() {
        let gg = realize_stellate(&[2, 2, 2, 2, 2]).unwrap();
        let a = braid(5, &[0, 1, 2, 2]);
        let a = make_automorphism(&gg, a.images, 8).unwrap();
        assert!(is_type_preserving(&a, &gg).unwrap());
        assert_eq!(orientation_of(&a, &gg.presentation).unwrap(), Orientation::Preserving);
        assert_eq!(is_inner(&a, &gg, 8).unwrap(), None);
        assert!(is_inner(&a.pow(3), &gg, 8).unwrap().is_some());
        let g2 = act_on_generators(&a, &gg).unwrap();
        assert!(g2.max_residual() < 1e-9);
        assert_eq!(generator_sets_conjugate(&gg, &g2, 8).unwrap(), None);
        assert!(!restricts_to_subgroup(&a, &gg, &[w(&[(0, 1)])], 8).unwrap());
        assert!(restricts_to_subgroup(&a, &gg, &[], 8).unwrap());
    }

    #[test]
    fn conjugate_generator_sets() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let h = gg.gens[0];
        let g2 = gg.conjugated(&h);
        let (wit, perm) = generator_sets_conjugate(&gg, &g2, 8).unwrap().unwrap();
        assert_eq!(wit, w(&[(0, 1)]));
        assert_eq!(perm, vec![0, 1, 2, 3]);
        let (wit, _) = generator_sets_conjugate(&gg, &gg, 8).unwrap().unwrap();
        assert!(wit.is_identity());
    }

    #[test]
    fn functorial_action() {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let a = half_twist(4, 0);
        let b = half_twist(4, 1);
        let ab = act_on_generators(&b, &act_on_generators(&a, &gg).unwrap()).unwrap();
        let composite = act_on_generators(&a.after(&b), &gg).unwrap();
        for (x, y) in ab.gens.iter().zip(&composite.gens) {
            assert!(x.approx_equal(y, 1e-8));
        }
    }

    #[test]
    fn indices() {
        let s = |t: &str| parse_conway(t).unwrap();
        assert_eq!(subgroup_index(&s("ooo"), &s("*246")).unwrap(), 96);
        assert_eq!(subgroup_index(&s("2224"), &s("*2224")).unwrap(), 2);
        assert_eq!(subgroup_index(&s("22222"), &s("*246")).unwrap(), 12);
        assert!(matches!(
            subgroup_index(&s("*246"), &s("2224")),
            Err(IsotopyError::NonIntegralIndex(_))
        ));
        assert_eq!(valid_finite_orders(5).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(valid_finite_orders(7).unwrap(), vec![1, 2, 3, 5, 6, 7]);
        assert_eq!(valid_finite_orders(3).unwrap(), vec![1, 2, 3]);
        assert!(valid_finite_orders(2).is_err());
    }
}
