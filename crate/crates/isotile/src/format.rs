//! Line-oriented text formats.
//!
//! Floats are written with 17 significant digits so that every dump reads
//! back to the same bits.

use std::fmt::Write as _;

use isotile_core::dsym::DecorationEdge;
use isotile_core::geometry::{Anchor, AnchorWord};
use isotile_core::isotopy::AutomorphismVerdict;
use isotile_core::orbifold::{parse_conway, GeneratorKind, OrbifoldError};
use isotile_core::tiling::TilingPatch;
use isotile_core::{Complex, ConwaySymbol, DSymbol, DiskPoint, Isometry, OrbifoldDecoration, Presentation, Word};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("name {0} is used twice")]
    DuplicateName(String),
    #[error("no image given for generator {0}")]
    MissingImage(String),
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
}

impl FormatError {
    pub fn name(&self) -> &'static str {
        match self {
            FormatError::Syntax { .. } => "SyntaxError",
            FormatError::UnknownVertex(_) => "UnknownVertex",
            FormatError::DuplicateName(_) => "DuplicateName",
            FormatError::MissingImage(_) => "MissingImage",
            FormatError::Orbifold(e) => e.name(),
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_complex(z: Complex) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

pub fn parse_f64(s: &str) -> Option<f64> {
    s.trim().parse().ok()
}

/// Parses `re+imi` or `re-imi`.
pub fn parse_complex(s: &str) -> Option<Complex> {
    let body = s.trim().strip_suffix('i')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    Some(Complex::new(
        body[..split].parse().ok()?,
        body[split..].parse().ok()?,
    ))
}

fn fmt_point(p: DiskPoint) -> String {
    format!("{},{}", fmt_f64(p.re), fmt_f64(p.im))
}

fn parse_point(s: &str) -> Option<DiskPoint> {
    let (re, im) = s.split_once(',')?;
    Some(Complex::new(parse_f64(re)?, parse_f64(im)?))
}

// ---------------------------------------------------------------- presentation

pub fn write_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    writeln!(out, "symbol {}", p.symbol).unwrap();
    for (name, kind) in &p.generators {
        writeln!(out, "gen {name} {kind}").unwrap();
    }
    for r in &p.relations {
        writeln!(out, "rel {}", p.format_word(r)).unwrap();
    }
    if let Some(g) = p.global {
        writeln!(out, "global {}", g + 1).unwrap();
    }
    out
}

pub fn parse_presentation(text: &str) -> Result<Presentation, FormatError> {
    let mut symbol: Option<ConwaySymbol> = None;
    let mut p = Presentation {
        symbol: ConwaySymbol::surface(0),
        generators: Vec::new(),
        relations: Vec::new(),
        global: None,
    };
    let mut rel_lines = Vec::new();
    for (n, line) in lines(text) {
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "symbol" => symbol = Some(parse_conway(rest)?),
            "gen" => {
                let (name, kind) = rest
                    .split_once(' ')
                    .ok_or_else(|| syntax(n, "expected `gen <name> <kind>`"))?;
                let kind: GeneratorKind = kind.trim().parse()?;
                if p.index_of(name).is_some() {
                    return Err(FormatError::DuplicateName(name.to_string()));
                }
                p.generators.push((name.to_string(), kind));
            }
            "rel" => rel_lines.push(rest.to_string()),
            "global" => {
                let k: usize = rest.parse().map_err(|_| syntax(n, "bad relation number"))?;
                p.global = Some(k.checked_sub(1).ok_or_else(|| syntax(n, "relations count from 1"))?);
            }
            _ => return Err(syntax(n, format!("unknown keyword {key}"))),
        }
    }
    p.symbol = symbol.ok_or_else(|| syntax(0, "missing symbol line"))?;
    for r in rel_lines {
        let w = p.parse_word(&r)?;
        p.relations.push(w);
    }
    if p.global.is_some_and(|g| g >= p.relations.len()) {
        return Err(syntax(0, "global relation out of range"));
    }
    Ok(p)
}

// ---------------------------------------------------------------- matrices

pub fn write_matrix(g: &Isometry) -> String {
    let [[a, b], [c, d]] = g.matrix();
    format!(
        "matrix {} {} {} {}\nreversing: {}\n",
        fmt_complex(a),
        fmt_complex(b),
        fmt_complex(c),
        fmt_complex(d),
        g.is_reversing()
    )
}

/// One block per generator: `gen`, `matrix`, `reversing:` lines.
pub fn write_generators(p: &Presentation, gens: &[Isometry]) -> String {
    let mut out = String::new();
    for ((name, kind), g) in p.generators.iter().zip(gens) {
        writeln!(out, "gen {name} {kind}").unwrap();
        out.push_str(&write_matrix(g));
    }
    out
}

/// Reads generator matrices back, in the order of the presentation.
pub fn parse_generators(text: &str, p: &Presentation) -> Result<Vec<Isometry>, FormatError> {
    let mut found: Vec<Option<Isometry>> = vec![None; p.rank()];
    let mut current: Option<usize> = None;
    let mut matrix: Option<[[Complex; 2]; 2]> = None;
    for (n, line) in lines(text) {
        if let Some(rest) = line.strip_prefix("gen ") {
            let name = rest.split_whitespace().next().unwrap_or("");
            current = Some(
                p.index_of(name)
                    .ok_or_else(|| OrbifoldError::UnknownGenerator(name.to_string()))?,
            );
        } else if let Some(rest) = line.strip_prefix("matrix ") {
            let e: Vec<Complex> = rest
                .split_whitespace()
                .map(|t| parse_complex(t).ok_or_else(|| syntax(n, format!("bad entry {t}"))))
                .collect::<Result<_, _>>()?;
            if e.len() != 4 {
                return Err(syntax(n, "a matrix has four entries"));
            }
            matrix = Some([[e[0], e[1]], [e[2], e[3]]]);
        } else if let Some(rest) = line.strip_prefix("reversing:") {
            let rev = match rest.trim() {
                "true" => true,
                "false" => false,
                _ => return Err(syntax(n, "expected true or false")),
            };
            let (i, m) = current
                .zip(matrix.take())
                .ok_or_else(|| syntax(n, "reversing flag without a matrix"))?;
            found[i] = Some(Isometry::from_matrix(m, rev));
        }
        // other lines (residual reports) are ignored
    }
    found
        .into_iter()
        .enumerate()
        .map(|(i, g)| g.ok_or_else(|| FormatError::MissingImage(p.generators[i].0.clone())))
        .collect()
}

// ---------------------------------------------------------------- recipes

/// Named vertices and edges of a decoration.
#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub vertex_names: Vec<String>,
    pub vertices: Vec<AnchorWord>,
    pub edge_names: Vec<String>,
    pub edges: Vec<DecorationEdge>,
}

impl Recipe {
    pub fn decoration(&self, symbol: &ConwaySymbol) -> OrbifoldDecoration {
        OrbifoldDecoration {
            symbol: symbol.clone(),
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Recipe for the given polygon, vertices `v1..` and edges `e1..`.
    pub fn polygon(vertices: Vec<AnchorWord>) -> Recipe {
        let n = vertices.len();
        Recipe {
            vertex_names: (1..=n).map(|i| format!("v{i}")).collect(),
            edge_names: (1..=n).map(|i| format!("e{i}")).collect(),
            edges: (0..n)
                .map(|i| DecorationEdge {
                    from: i,
                    to: (i + 1) % n,
                    word: Word::identity(),
                })
                .collect(),
            vertices,
        }
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, FormatError> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| FormatError::UnknownVertex(name.to_string()))
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    /// Takes the edges of a mutated decoration, keeping the names of
    /// surviving edges and naming new ones.
    pub fn with_edges(&self, edges: Vec<DecorationEdge>) -> Recipe {
        let mut names = Vec::with_capacity(edges.len());
        let mut used = vec![false; self.edges.len()];
        for e in &edges {
            let old = (0..self.edges.len()).find(|&i| !used[i] && self.edges[i] == *e);
            match old {
                Some(i) => {
                    used[i] = true;
                    names.push(self.edge_names[i].clone());
                }
                None => {
                    let mut k = 1;
                    while self.edge_names.contains(&format!("e{k}")) || names.contains(&format!("e{k}")) {
                        k += 1;
                    }
                    names.push(format!("e{k}"));
                }
            }
        }
        Recipe {
            vertex_names: self.vertex_names.clone(),
            vertices: self.vertices.clone(),
            edge_names: names,
            edges,
        }
    }
}

fn gen_index(p: &Presentation, name: &str) -> Result<usize, FormatError> {
    p.index_of(name.trim())
        .ok_or_else(|| FormatError::Orbifold(OrbifoldError::UnknownGenerator(name.trim().to_string())))
}

fn parse_anchor(n: usize, s: &str, p: &Presentation) -> Result<Anchor, FormatError> {
    let inner = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
    if let Some(g) = inner("fix(") {
        Ok(Anchor::Fix(gen_index(p, g)?))
    } else if let Some(args) = inner("free(") {
        parse_point(args)
            .map(Anchor::Free)
            .ok_or_else(|| syntax(n, format!("bad point {args}")))
    } else if let Some(args) = inner("meet(") {
        let (a, b) = args
            .split_once(',')
            .ok_or_else(|| syntax(n, "meet takes two generators"))?;
        Ok(Anchor::Meet(gen_index(p, a)?, gen_index(p, b)?))
    } else {
        Err(syntax(n, format!("unknown anchor {s}")))
    }
}

fn fmt_anchor(a: &Anchor, p: &Presentation) -> String {
    let name = |i: usize| p.generators[i].0.as_str();
    match *a {
        Anchor::Fix(i) => format!("fix({})", name(i)),
        Anchor::Free(z) => format!("free({})", fmt_point(z)),
        Anchor::Meet(i, j) => format!("meet({},{})", name(i), name(j)),
    }
}

/// Parses `vertex <name> = <word> <anchor>` and
/// `edge <name>: <v1> <v2> [via <word>]` lines. Without edge lines the
/// vertices are read as a polygon in the given order.
pub fn parse_recipe(text: &str, p: &Presentation) -> Result<Recipe, FormatError> {
    let mut r = Recipe {
        vertex_names: Vec::new(),
        vertices: Vec::new(),
        edge_names: Vec::new(),
        edges: Vec::new(),
    };
    let mut edge_lines = Vec::new();
    for (n, line) in lines(text) {
        if let Some(rest) = line.strip_prefix("vertex ") {
            let (name, def) = rest
                .split_once('=')
                .ok_or_else(|| syntax(n, "expected `vertex <name> = <word> <anchor>`"))?;
            let name = name.trim();
            let def = def.trim();
            let (word, anchor) = def.rsplit_once(' ').unwrap_or(("1", def));
            if r.vertex_names.iter().any(|v| v == name) {
                return Err(FormatError::DuplicateName(name.to_string()));
            }
            r.vertex_names.push(name.to_string());
            r.vertices
                .push(AnchorWord::new(p.parse_word(word)?, parse_anchor(n, anchor.trim(), p)?));
        } else if let Some(rest) = line.strip_prefix("edge ") {
            edge_lines.push((n, rest.to_string()));
        } else {
            return Err(syntax(n, "expected a vertex or edge line"));
        }
    }
    if r.vertices.is_empty() {
        return Err(syntax(0, "no vertices"));
    }
    if edge_lines.is_empty() {
        return Ok(Recipe::polygon(r.vertices).with_vertex_names(r.vertex_names));
    }
    for (n, line) in edge_lines {
        let (name, def) = line
            .split_once(':')
            .ok_or_else(|| syntax(n, "expected `edge <name>: <v1> <v2>`"))?;
        let (ends, word) = match def.split_once(" via ") {
            Some((e, w)) => (e, p.parse_word(w)?),
            None => (def, Word::identity()),
        };
        let ends: Vec<&str> = ends.split_whitespace().collect();
        if ends.len() != 2 {
            return Err(syntax(n, "an edge has two ends"));
        }
        let name = name.trim().to_string();
        if r.edge_names.contains(&name) {
            return Err(FormatError::DuplicateName(name));
        }
        r.edges.push(DecorationEdge {
            from: r.vertex_index(ends[0])?,
            to: r.vertex_index(ends[1])?,
            word,
        });
        r.edge_names.push(name);
    }
    Ok(r)
}

impl Recipe {
    fn with_vertex_names(mut self, names: Vec<String>) -> Recipe {
        self.vertex_names = names;
        self
    }
}

pub fn write_recipe(r: &Recipe, p: &Presentation) -> String {
    let mut out = String::new();
    for (name, v) in r.vertex_names.iter().zip(&r.vertices) {
        writeln!(out, "vertex {name} = {} {}", p.format_word(&v.word), fmt_anchor(&v.anchor, p)).unwrap();
    }
    for (name, e) in r.edge_names.iter().zip(&r.edges) {
        write!(out, "edge {name}: {} {}", r.vertex_names[e.from], r.vertex_names[e.to]).unwrap();
        if !e.word.is_identity() {
            write!(out, " via {}", p.format_word(&e.word)).unwrap();
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- patches

pub fn write_patch(patch: &TilingPatch) -> String {
    let p = &patch.group.presentation;
    let mut out = String::new();
    for t in &patch.tiles {
        let pts: Vec<String> = t.polygon.iter().map(|&z| fmt_point(z)).collect();
        writeln!(out, "tile {} : {}", p.format_word(&t.word), pts.join(" ")).unwrap();
    }
    out
}

pub fn parse_patch(text: &str, p: &Presentation) -> Result<Vec<(Word, Vec<DiskPoint>)>, FormatError> {
    lines(text)
        .map(|(n, line)| {
            let rest = line
                .strip_prefix("tile ")
                .ok_or_else(|| syntax(n, "expected a tile line"))?;
            let (word, pts) = rest
                .split_once(" : ")
                .ok_or_else(|| syntax(n, "expected `tile <word> : <points>`"))?;
            let pts = pts
                .split_whitespace()
                .map(|t| parse_point(t).ok_or_else(|| syntax(n, format!("bad point {t}"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((p.parse_word(word)?, pts))
        })
        .collect()
}

// ---------------------------------------------------------------- D-symbols

pub fn write_dsym(d: &DSymbol) -> String {
    let mut out = format!("size {}\n", d.size());
    for c in 0..d.size() {
        writeln!(
            out,
            "c {}: {} {} {} {} {}",
            c + 1,
            d.s[0][c] + 1,
            d.s[1][c] + 1,
            d.s[2][c] + 1,
            d.m01[c],
            d.m12[c]
        )
        .unwrap();
    }
    out
}

pub fn parse_dsym(text: &str) -> Result<DSymbol, FormatError> {
    let mut size: Option<usize> = None;
    let mut d = DSymbol {
        s: [Vec::new(), Vec::new(), Vec::new()],
        m01: Vec::new(),
        m12: Vec::new(),
    };
    for (n, line) in lines(text) {
        if let Some(rest) = line.strip_prefix("size ") {
            let k: usize = rest.trim().parse().map_err(|_| syntax(n, "bad size"))?;
            size = Some(k);
            d.s = [vec![0; k], vec![0; k], vec![0; k]];
            d.m01 = vec![0; k];
            d.m12 = vec![0; k];
        } else if let Some(rest) = line.strip_prefix("c ") {
            let k = size.ok_or_else(|| syntax(n, "chamber before size"))?;
            let (idx, vals) = rest.split_once(':').ok_or_else(|| syntax(n, "expected `c i: ...`"))?;
            let idx: usize = idx.trim().parse().map_err(|_| syntax(n, "bad chamber"))?;
            let vals: Vec<usize> = vals
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| syntax(n, format!("bad number {t}"))))
                .collect::<Result<_, _>>()?;
            if vals.len() != 5 || idx == 0 || idx > k || vals[..3].iter().any(|&v| v == 0 || v > k) {
                return Err(syntax(n, "chamber line out of range"));
            }
            let c = idx - 1;
            for (op, v) in vals[..3].iter().enumerate() {
                d.s[op][c] = v - 1;
            }
            d.m01[c] = vals[3] as u32;
            d.m12[c] = vals[4] as u32;
        } else {
            return Err(syntax(n, "expected a size or chamber line"));
        }
    }
    size.ok_or_else(|| syntax(0, "missing size line"))?;
    Ok(d)
}

// ---------------------------------------------------------------- automorphisms

pub fn parse_automorphism(text: &str, p: &Presentation) -> Result<Vec<Word>, FormatError> {
    let mut images: Vec<Option<Word>> = vec![None; p.rank()];
    for (n, line) in lines(text) {
        let (name, word) = line
            .split_once("->")
            .ok_or_else(|| syntax(n, "expected `<name> -> <word>`"))?;
        let g = gen_index(p, name)?;
        if images[g].is_some() {
            return Err(FormatError::DuplicateName(name.trim().to_string()));
        }
        images[g] = Some(p.parse_word(word)?);
    }
    images
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| FormatError::MissingImage(p.generators[i].0.clone())))
        .collect()
}

pub fn write_automorphism(images: &[Word], p: &Presentation) -> String {
    let mut out = String::new();
    for ((name, _), w) in p.generators.iter().zip(images) {
        writeln!(out, "{name} -> {}", p.format_word(w)).unwrap();
    }
    out
}

pub fn write_verdict(v: &AutomorphismVerdict, p: &Presentation) -> String {
    let yes = |b: bool| if b { "yes" } else { "no" };
    let orientation = v
        .orientation
        .map_or_else(|| "n/a".to_string(), |o| o.to_string());
    let inner = match &v.inner_conjugator {
        Some(w) => p.format_word(w),
        None => format!("none@{}", v.depth),
    };
    format!(
        "homomorphism: {}\ntype_preserving: {}\norientation: {}\ninner: {}\n",
        yes(v.is_homomorphism),
        yes(v.type_preserving),
        orientation,
        inner
    )
}
