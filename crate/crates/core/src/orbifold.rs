//! Conway symbols, Euler characteristic and standard presentations.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::moebius::Isometry;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbifoldError {
    #[error("grammar error at position {position}: expected {expected}")]
    GrammarError {
        position: usize,
        expected: &'static str,
    },
    #[error("empty symbol")]
    EmptySymbol,
    #[error("bad orbifold {0}: not developable")]
    BadOrbifold(String),
    #[error("generator index {index} out of range for {count} generators")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word token `{0}`")]
    MalformedWord(String),
}

impl OrbifoldError {
    pub fn name(&self) -> &'static str {
        match self {
            OrbifoldError::GrammarError { .. } => "GrammarError",
            OrbifoldError::EmptySymbol => "EmptySymbol",
            OrbifoldError::BadOrbifold(_) => "BadOrbifold",
            OrbifoldError::IndexOutOfRange { .. } => "IndexOutOfRange",
            OrbifoldError::UnknownGenerator(_) => "UnknownGenerator",
            OrbifoldError::MalformedWord(_) => "MalformedWord",
        }
    }
}

/// Order of a cone point or corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    /// `1/order`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> Rational {
        match self {
            Order::Finite(a) => Rational::new(1, a as i64),
            Order::Infinite => Rational::from_integer(0),
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(a) => Some(a),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(a) if *a < 10 => write!(f, "{a}"),
            Order::Finite(a) => write!(f, "({a})"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// Extended Conway symbol in canonical form.
///
/// Gyrations hold finite orders only, sorted ascending; cone points of
/// order ∞ are counted in `punctures`. Each kaleidoscope is stored as its
/// lexicographically least rotation or reflection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ConwaySymbol {
    pub handles: u32,
    pub crosscaps: u32,
    pub gyrations: Vec<u32>,
    pub kaleidoscopes: Vec<Vec<Order>>,
    pub plain_boundaries: u32,
    pub punctures: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureClass {
    Hyperbolic,
    Euclidean,
    Spherical,
    Bad,
}

impl fmt::Display for CurvatureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurvatureClass::Hyperbolic => "hyperbolic",
            CurvatureClass::Euclidean => "euclidean",
            CurvatureClass::Spherical => "spherical",
            CurvatureClass::Bad => "bad",
        })
    }
}

fn canonical_cycle(corners: &[Order]) -> Vec<Order> {
    let n = corners.len();
    let mut best: Vec<Order> = corners.to_vec();
    for reflect in [false, true] {
        for start in 0..n {
            let cand: Vec<Order> = (0..n)
                .map(|k| {
                    if reflect {
                        corners[(start + n - k) % n]
                    } else {
                        corners[(start + k) % n]
                    }
                })
                .collect();
            if cand.cmp(&best) == Ordering::Less {
                best = cand;
            }
        }
    }
    best
}

impl ConwaySymbol {
    pub fn stellate(orders: &[u32]) -> Self {
        let mut s = ConwaySymbol {
            gyrations: orders.to_vec(),
            ..Default::default()
        };
        s.canonicalize();
        s
    }

    pub fn kaleidoscopic(corners: &[u32]) -> Self {
        let mut s = ConwaySymbol {
            kaleidoscopes: vec![corners.iter().map(|&a| Order::Finite(a)).collect()],
            ..Default::default()
        };
        s.canonicalize();
        s
    }

    pub fn surface(genus: u32) -> Self {
        ConwaySymbol {
            handles: genus,
            ..Default::default()
        }
    }

    fn canonicalize(&mut self) {
        if self.crosscaps > 0 {
            self.crosscaps += 2 * self.handles;
            self.handles = 0;
        }
        self.gyrations.sort_unstable();
        for k in self.kaleidoscopes.iter_mut() {
            *k = canonical_cycle(k);
        }
        self.kaleidoscopes.sort();
    }

    pub fn is_orientable(&self) -> bool {
        self.crosscaps == 0 && self.kaleidoscopes.is_empty()
    }

    /// True for a single kaleidoscope with no other features.
    pub fn is_pure_kaleidoscope(&self) -> bool {
        self.kaleidoscopes.len() == 1
            && !self.kaleidoscopes[0].is_empty()
            && self.handles == 0
            && self.crosscaps == 0
            && self.gyrations.is_empty()
            && self.plain_boundaries == 0
            && self.punctures == 0
    }

    /// True for finite cone points on a sphere.
    pub fn is_pure_stellate(&self) -> bool {
        !self.gyrations.is_empty()
            && self.kaleidoscopes.is_empty()
            && self.handles == 0
            && self.crosscaps == 0
            && self.plain_boundaries == 0
            && self.punctures == 0
    }

    pub fn is_pure_surface(&self) -> bool {
        self.handles > 0
            && self.kaleidoscopes.is_empty()
            && self.crosscaps == 0
            && self.gyrations.is_empty()
            && self.plain_boundaries == 0
            && self.punctures == 0
    }

    pub fn euler_characteristic(&self) -> Rational {
        let one = Rational::from_integer(1);
        let half = Rational::new(1, 2);
        let mut chi = Rational::from_integer(2 - 2 * self.handles as i64 - self.crosscaps as i64);
        for &a in &self.gyrations {
            chi -= one - Rational::new(1, a as i64);
        }
        chi -= Rational::from_integer(self.punctures as i64);
        for k in &self.kaleidoscopes {
            chi -= one;
            for &a in k {
                chi -= half * (one - a.reciprocal());
            }
        }
        chi -= Rational::from_integer(self.plain_boundaries as i64);
        chi
    }

    pub fn curvature_class(&self) -> CurvatureClass {
        let closed_sphere = self.handles == 0
            && self.crosscaps == 0
            && self.kaleidoscopes.is_empty()
            && self.plain_boundaries == 0
            && self.punctures == 0;
        if closed_sphere {
            match self.gyrations.as_slice() {
                [_] => return CurvatureClass::Bad,
                [a, b] if a != b => return CurvatureClass::Bad,
                _ => {}
            }
        }
        let disk = self.kaleidoscopes.len() == 1
            && self.handles == 0
            && self.crosscaps == 0
            && self.gyrations.is_empty()
            && self.plain_boundaries == 0
            && self.punctures == 0;
        if disk {
            match self.kaleidoscopes[0].as_slice() {
                [_] => return CurvatureClass::Bad,
                [a, b] if a != b => return CurvatureClass::Bad,
                _ => {}
            }
        }
        let chi = self.euler_characteristic();
        let zero = Rational::from_integer(0);
        match chi.cmp(&zero) {
            Ordering::Less => CurvatureClass::Hyperbolic,
            Ordering::Equal => CurvatureClass::Euclidean,
            Ordering::Greater => CurvatureClass::Spherical,
        }
    }

    pub fn rank(&self) -> Result<usize, OrbifoldError> {
        Ok(standard_presentation(self)?.generators.len())
    }
}

impl fmt::Display for ConwaySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &a in &self.gyrations {
            write!(f, "{}", Order::Finite(a))?;
        }
        for _ in 0..self.punctures {
            f.write_str("inf")?;
        }
        for _ in 0..self.plain_boundaries {
            f.write_str("h")?;
        }
        for k in &self.kaleidoscopes {
            f.write_str("*")?;
            for a in k {
                write!(f, "{a}")?;
            }
        }
        for _ in 0..self.crosscaps {
            f.write_str("x")?;
        }
        for _ in 0..self.handles {
            f.write_str("o")?;
        }
        Ok(())
    }
}

impl FromStr for ConwaySymbol {
    type Err = OrbifoldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_conway(s)
    }
}

const EXPECTED: &str = "one of `o`, `x`, `*`, `h`, a digit 2-9, `(n)`, `inf`";

/// Parses an extended Conway symbol and returns it in canonical form.
pub fn parse_conway(text: &str) -> Result<ConwaySymbol, OrbifoldError> {
    let chars: Vec<char> = text.chars().collect();
    let mut sym = ConwaySymbol::default();
    let mut current: Option<Vec<Order>> = None;
    let mut seen = false;
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let start = i;
        i += 1;
        let order = match ch {
            c if c.is_whitespace() => continue,
            '*' | '⋆' => {
                if let Some(k) = current.take() {
                    sym.kaleidoscopes.push(k);
                }
                current = Some(Vec::new());
                seen = true;
                continue;
            }
            'x' | '×' => {
                close(&mut sym, &mut current);
                sym.crosscaps += 1;
                seen = true;
                continue;
            }
            'o' | '○' => {
                close(&mut sym, &mut current);
                sym.handles += 1;
                seen = true;
                continue;
            }
            'h' => {
                close(&mut sym, &mut current);
                sym.plain_boundaries += 1;
                seen = true;
                continue;
            }
            '2'..='9' => Order::Finite(ch as u32 - '0' as u32),
            '∞' => Order::Infinite,
            'i' => {
                if chars.get(i) == Some(&'n') && chars.get(i + 1) == Some(&'f') {
                    i += 2;
                    Order::Infinite
                } else {
                    return Err(OrbifoldError::GrammarError {
                        position: start,
                        expected: "`inf`",
                    });
                }
            }
            '(' => {
                let mut value: u64 = 0;
                let mut digits = 0;
                while let Some(d) = chars.get(i).and_then(|c| c.to_digit(10)) {
                    value = value.saturating_mul(10).saturating_add(d as u64);
                    digits += 1;
                    i += 1;
                }
                if digits == 0 {
                    return Err(OrbifoldError::GrammarError {
                        position: i,
                        expected: "a decimal order",
                    });
                }
                if chars.get(i) != Some(&')') {
                    return Err(OrbifoldError::GrammarError {
                        position: i,
                        expected: "`)`",
                    });
                }
                i += 1;
                if !(2..=u32::MAX as u64).contains(&value) {
                    return Err(OrbifoldError::GrammarError {
                        position: start + 1,
                        expected: "an order of at least 2",
                    });
                }
                Order::Finite(value as u32)
            }
            _ => {
                return Err(OrbifoldError::GrammarError {
                    position: start,
                    expected: EXPECTED,
                })
            }
        };
        seen = true;
        match current.as_mut() {
            Some(k) => k.push(order),
            None => match order {
                Order::Finite(a) => sym.gyrations.push(a),
                Order::Infinite => sym.punctures += 1,
            },
        }
    }
    close(&mut sym, &mut current);
    if !seen {
        return Err(OrbifoldError::EmptySymbol);
    }
    sym.canonicalize();
    Ok(sym)
}

fn close(sym: &mut ConwaySymbol, current: &mut Option<Vec<Order>>) {
    if let Some(k) = current.take() {
        sym.kaleidoscopes.push(k);
    }
}

/// Symbolic type of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Rotation(u32),
    Mirror,
    Connecting,
    HandleX,
    HandleY,
    Crosscap,
    BoundaryHyperbolic,
    Parabolic,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::Rotation(a) => write!(f, "rotation({a})"),
            GeneratorKind::Mirror => f.write_str("mirror"),
            GeneratorKind::Connecting => f.write_str("connecting"),
            GeneratorKind::HandleX => f.write_str("handle_x"),
            GeneratorKind::HandleY => f.write_str("handle_y"),
            GeneratorKind::Crosscap => f.write_str("crosscap"),
            GeneratorKind::BoundaryHyperbolic => f.write_str("boundary_hyperbolic"),
            GeneratorKind::Parabolic => f.write_str("parabolic"),
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = OrbifoldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "mirror" => GeneratorKind::Mirror,
            "connecting" => GeneratorKind::Connecting,
            "handle_x" => GeneratorKind::HandleX,
            "handle_y" => GeneratorKind::HandleY,
            "crosscap" => GeneratorKind::Crosscap,
            "boundary_hyperbolic" => GeneratorKind::BoundaryHyperbolic,
            "parabolic" => GeneratorKind::Parabolic,
            _ => {
                let inner = s
                    .strip_prefix("rotation(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| OrbifoldError::MalformedWord(s.to_string()))?;
                let a: u32 = inner
                    .parse()
                    .map_err(|_| OrbifoldError::MalformedWord(s.to_string()))?;
                if a < 2 {
                    return Err(OrbifoldError::MalformedWord(s.to_string()));
                }
                GeneratorKind::Rotation(a)
            }
        })
    }
}

/// A group word: letters are (generator index, nonzero exponent).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    pub letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(index: usize) -> Self {
        Word::power(index, 1)
    }

    pub fn power(index: usize, exp: i64) -> Self {
        Word {
            letters: if exp == 0 { vec![] } else { vec![(index, exp)] },
        }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        Word {
            letters: letters.into_iter().collect(),
        }
        .free_reduce()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of unit letters, `Σ |exponent|`.
    pub fn length(&self) -> usize {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.letters.iter().map(|&(i, _)| i).max()
    }

    /// Merges adjacent letters with equal index and drops zero exponents.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(self.letters.len());
        for &(g, e) in &self.letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == g => {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { letters: out }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }.free_reduce()
    }

    pub fn conjugate_by(&self, w: &Word) -> Word {
        w.concat(self).concat(&w.inverse())
    }

    /// Replaces each letter `g^e` by `images[g]^e`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut letters = Vec::new();
        for &(g, e) in &self.letters {
            let base = if e > 0 {
                images[g].clone()
            } else {
                images[g].inverse()
            };
            for _ in 0..e.unsigned_abs() {
                letters.extend_from_slice(&base.letters);
            }
        }
        Word { letters }.free_reduce()
    }

    /// Unit-letter expansion: `a^3` becomes `a a a`.
    pub fn expanded(&self) -> Vec<(usize, i64)> {
        let mut out = Vec::with_capacity(self.length());
        for &(g, e) in &self.letters {
            let s = e.signum();
            for _ in 0..e.unsigned_abs() {
                out.push((g, s));
            }
        }
        out
    }
}

pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

/// Evaluates a word on concrete generators.
pub fn evaluate_word(w: &Word, gens: &[Isometry]) -> Result<Isometry, OrbifoldError> {
    let mut acc = Isometry::IDENTITY;
    for &(g, e) in &w.letters {
        let m = gens.get(g).ok_or(OrbifoldError::IndexOutOfRange {
            index: g,
            count: gens.len(),
        })?;
        acc = acc.compose(&m.pow(e));
    }
    Ok(acc)
}

/// Generators and relations of an orbifold group.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    pub symbol: ConwaySymbol,
    pub generators: Vec<(String, GeneratorKind)>,
    pub relations: Vec<Word>,
    /// Position of the global relation in `relations`, if there is one.
    pub global: Option<usize>,
}

impl Presentation {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|(n, _)| n == name)
    }

    pub fn kind(&self, index: usize) -> GeneratorKind {
        self.generators[index].1
    }

    pub fn global_relation(&self) -> Option<&Word> {
        self.global.map(|i| &self.relations[i])
    }

    /// Writes a word as space-separated `name^exp` tokens, `1` when empty.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let parts: Vec<String> = w
            .letters
            .iter()
            .map(|&(g, e)| {
                let name = self
                    .generators
                    .get(g)
                    .map(|(n, _)| n.as_str())
                    .unwrap_or("?");
                format!("{name}^{e}")
            })
            .collect();
        parts.join(" ")
    }

    /// Parses the syntax of [`Presentation::format_word`]; a bare name means
    /// exponent one.
    pub fn parse_word(&self, text: &str) -> Result<Word, OrbifoldError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| OrbifoldError::MalformedWord(tok.to_string()))?,
                ),
                None => (tok, 1),
            };
            let g = self
                .index_of(name)
                .ok_or_else(|| OrbifoldError::UnknownGenerator(name.to_string()))?;
            letters.push((g, exp));
        }
        Ok(Word { letters }.free_reduce())
    }
}

/// Builds the standard presentation.
///
/// Generators come in the order gyrations `r`, plain boundaries `H`,
/// punctures `P`, mirror blocks, crosscaps `Z`, handles `X`, `Y`. A single
/// kaleidoscope with nothing else is the Coxeter group on its sides
/// `m1..mn`. Otherwise kaleidoscope `k` contributes a connecting generator
/// `lk` and mirrors `mk_0..mk_n` with `mk_n = lk⁻¹ mk_0 lk`.
pub fn standard_presentation(s: &ConwaySymbol) -> Result<Presentation, OrbifoldError> {
    if s.curvature_class() == CurvatureClass::Bad {
        return Err(OrbifoldError::BadOrbifold(s.to_string()));
    }
    let mut gens: Vec<(String, GeneratorKind)> = Vec::new();
    let mut rels: Vec<Word> = Vec::new();
    let mut global: Vec<(usize, i64)> = Vec::new();

    for (i, &a) in s.gyrations.iter().enumerate() {
        let g = gens.len();
        gens.push((format!("r{}", i + 1), GeneratorKind::Rotation(a)));
        rels.push(Word::power(g, a as i64));
        global.push((g, 1));
    }
    for i in 0..s.plain_boundaries {
        global.push((gens.len(), 1));
        gens.push((format!("H{}", i + 1), GeneratorKind::BoundaryHyperbolic));
    }
    for i in 0..s.punctures {
        global.push((gens.len(), 1));
        gens.push((format!("P{}", i + 1), GeneratorKind::Parabolic));
    }

    if s.is_pure_kaleidoscope() {
        let corners = &s.kaleidoscopes[0];
        let n = corners.len();
        let base = gens.len();
        for j in 0..n {
            gens.push((format!("m{}", j + 1), GeneratorKind::Mirror));
            rels.push(Word::power(base + j, 2));
        }
        // corner j sits between sides j-1 and j
        for (j, a) in corners.iter().enumerate() {
            if let Order::Finite(a) = a {
                let prev = base + (j + n - 1) % n;
                let pair = Word::from_letters([(prev, 1), (base + j, 1)]);
                rels.push(power_of(&pair, *a));
            }
        }
    } else {
        for (k, corners) in s.kaleidoscopes.iter().enumerate() {
            let l = gens.len();
            gens.push((format!("l{}", k + 1), GeneratorKind::Connecting));
            global.push((l, 1));
            let first = gens.len();
            for j in 0..=corners.len() {
                gens.push((format!("m{}_{}", k + 1, j), GeneratorKind::Mirror));
                rels.push(Word::power(first + j, 2));
            }
            for (j, a) in corners.iter().enumerate() {
                if let Order::Finite(a) = a {
                    let pair = Word::from_letters([(first + j, 1), (first + j + 1, 1)]);
                    rels.push(power_of(&pair, *a));
                }
            }
            let last = first + corners.len();
            rels.push(Word::from_letters([(l, -1), (first, 1), (l, 1), (last, -1)]));
        }
    }

    for i in 0..s.crosscaps {
        global.push((gens.len(), 2));
        gens.push((format!("Z{}", i + 1), GeneratorKind::Crosscap));
    }
    for i in 0..s.handles {
        let x = gens.len();
        gens.push((format!("X{}", i + 1), GeneratorKind::HandleX));
        gens.push((format!("Y{}", i + 1), GeneratorKind::HandleY));
        global.extend_from_slice(&[(x, 1), (x + 1, 1), (x, -1), (x + 1, -1)]);
    }

    let global_word = Word::from_letters(global);
    let global = if global_word.is_identity() {
        None
    } else {
        rels.push(global_word);
        Some(rels.len() - 1)
    };
    Ok(Presentation {
        symbol: s.clone(),
        generators: gens,
        relations: rels,
        global,
    })
}

fn power_of(w: &Word, e: u32) -> Word {
    let mut letters = Vec::new();
    for _ in 0..e {
        letters.extend_from_slice(&w.letters);
    }
    Word::from_letters(letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(s: &str) -> Rational {
        parse_conway(s).unwrap().euler_characteristic()
    }

    #[test]
    fn parse_examples() {
        let s = parse_conway("2224").unwrap();
        assert_eq!(s.gyrations, vec![2, 2, 2, 4]);
        assert!(s.kaleidoscopes.is_empty());
        let k = parse_conway("*246").unwrap();
        assert_eq!(
            k.kaleidoscopes,
            vec![vec![Order::Finite(2), Order::Finite(4), Order::Finite(6)]]
        );
        let t = parse_conway("o").unwrap();
        assert_eq!(t.handles, 1);
        assert_eq!(t, ConwaySymbol::surface(1));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_conway(""), Err(OrbifoldError::EmptySymbol));
        assert_eq!(parse_conway("  "), Err(OrbifoldError::EmptySymbol));
        assert!(matches!(
            parse_conway("21"),
            Err(OrbifoldError::GrammarError { position: 1, .. })
        ));
        assert!(matches!(
            parse_conway("*2(1"),
            Err(OrbifoldError::GrammarError { .. })
        ));
        assert!(matches!(
            parse_conway("(1)"),
            Err(OrbifoldError::GrammarError { .. })
        ));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(parse_conway("4222").unwrap().to_string(), "2224");
        assert_eq!(parse_conway("*642").unwrap().to_string(), "*246");
        assert_eq!(parse_conway("*462").unwrap().to_string(), "*246");
        assert_eq!(parse_conway("ox").unwrap().to_string(), "xxx");
        assert_eq!(parse_conway("2∞").unwrap().to_string(), "2inf");
        assert_eq!(parse_conway("*2(12)3").unwrap().to_string(), "*23(12)");
        assert_eq!(parse_conway("* 2 inf 3").unwrap().kaleidoscopes[0][2], Order::Infinite);
        for s in ["2224", "*246", "o", "22x", "h2*23*33", "3inf*2222", "xx", "ooo"] {
            let p = parse_conway(s).unwrap();
            assert_eq!(parse_conway(&p.to_string()).unwrap(), p, "{s}");
        }
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi("o"), Rational::from_integer(0));
        assert_eq!(chi("2224"), Rational::new(-1, 4));
        assert_eq!(chi("*2224"), Rational::new(-1, 8));
        assert_eq!(chi("*246"), Rational::new(-1, 24));
        assert_eq!(chi("*237"), Rational::new(-1, 84));
        assert_eq!(chi("ooo"), Rational::from_integer(-4));
        assert_eq!(chi("2inf"), Rational::new(1, 2));
        assert_eq!(chi("22inf"), Rational::from_integer(0));
        assert_eq!(chi("h"), Rational::from_integer(1));
    }

    #[test]
    fn curvature_examples() {
        let cls = |s: &str| parse_conway(s).unwrap().curvature_class();
        assert_eq!(cls("2224"), CurvatureClass::Hyperbolic);
        assert_eq!(cls("2233"), CurvatureClass::Hyperbolic);
        assert_eq!(cls("2236"), CurvatureClass::Hyperbolic);
        assert_eq!(cls("236"), CurvatureClass::Euclidean);
        assert_eq!(cls("23"), CurvatureClass::Bad);
        assert_eq!(cls("5"), CurvatureClass::Bad);
        assert_eq!(cls("*35"), CurvatureClass::Bad);
        assert_eq!(cls("55"), CurvatureClass::Spherical);
        assert_eq!(cls("*235"), CurvatureClass::Spherical);
        assert_eq!(cls("o"), CurvatureClass::Euclidean);
    }

    #[test]
    fn presentation_2224() {
        let p = standard_presentation(&parse_conway("2224").unwrap()).unwrap();
        let names: Vec<&str> = p.generators.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["r1", "r2", "r3", "r4"]);
        assert_eq!(p.kind(3), GeneratorKind::Rotation(4));
        let rels: Vec<String> = p.relations.iter().map(|w| p.format_word(w)).collect();
        assert_eq!(
            rels,
            ["r1^2", "r2^2", "r3^2", "r4^4", "r1^1 r2^1 r3^1 r4^1"]
        );
        assert_eq!(p.global, Some(4));
        assert_eq!(p.rank(), 4);
    }

    #[test]
    fn presentation_torus_and_crosscap() {
        let p = standard_presentation(&parse_conway("o").unwrap()).unwrap();
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.format_word(&p.relations[0]), "X1^1 Y1^1 X1^-1 Y1^-1");
        let q = standard_presentation(&parse_conway("22x").unwrap()).unwrap();
        let rels: Vec<String> = q.relations.iter().map(|w| q.format_word(w)).collect();
        assert_eq!(rels, ["r1^2", "r2^2", "r1^1 r2^1 Z1^2"]);
    }

    #[test]
    fn presentation_kaleidoscopes() {
        let p = standard_presentation(&parse_conway("*246").unwrap()).unwrap();
        let rels: Vec<String> = p.relations.iter().map(|w| p.format_word(w)).collect();
        assert_eq!(
            rels,
            [
                "m1^2",
                "m2^2",
                "m3^2",
                "m3^1 m1^1 m3^1 m1^1",
                "m1^1 m2^1 m1^1 m2^1 m1^1 m2^1 m1^1 m2^1",
                "m2^1 m3^1 m2^1 m3^1 m2^1 m3^1 m2^1 m3^1 m2^1 m3^1 m2^1 m3^1",
            ]
        );
        assert_eq!(p.global, None);
        let q = standard_presentation(&parse_conway("2*33").unwrap()).unwrap();
        let names: Vec<&str> = q.generators.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["r1", "l1", "m1_0", "m1_1", "m1_2"]);
        let g = q.global_relation().unwrap();
        assert_eq!(q.format_word(g), "r1^1 l1^1");
        assert!(standard_presentation(&parse_conway("23").unwrap()).is_err());
    }

    #[test]
    fn words() {
        let w = Word::from_letters([(0, 1), (1, 2), (1, -2), (0, -1)]);
        assert!(w.is_identity());
        let v = Word {
            letters: vec![(0, 1), (0, 2), (2, 1)],
        };
        assert_eq!(v.free_reduce().letters, vec![(0, 3), (2, 1)]);
        assert_eq!(v.free_reduce().free_reduce(), v.free_reduce());
        let images = [Word::generator(1), Word::generator(0), Word::generator(2)];
        assert_eq!(v.substitute(&images).letters, vec![(1, 3), (2, 1)]);
        assert_eq!(v.length(), 4);
    }

    #[test]
    fn word_text_round_trip() {
        let p = standard_presentation(&parse_conway("2224").unwrap()).unwrap();
        let w = p.parse_word("r1 r2^-1 r4^3").unwrap();
        assert_eq!(p.format_word(&w), "r1^1 r2^-1 r4^3");
        assert_eq!(p.parse_word("1").unwrap(), Word::identity());
        assert!(p.parse_word("q1").is_err());
        assert!(p.parse_word("r1^x").is_err());
    }

    #[test]
    fn evaluate_reports_bad_index() {
        let w = Word::generator(3);
        assert!(matches!(
            evaluate_word(&w, &[Isometry::IDENTITY]),
            Err(OrbifoldError::IndexOutOfRange { index: 3, count: 1 })
        ));
    }
}
