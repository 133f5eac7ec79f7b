//! Command-line entry point.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use isotile_core::dsym::{flags_from_decoration, glue, split, DsymError};
use isotile_core::geometry::{realize, GeometricGroup, GeometryError};
use isotile_core::isotopy::{
    act_on_generators, make_automorphism, subgroup_index, valid_finite_orders, verdict, IsotopyError,
    DEFAULT_DEPTH,
};
use isotile_core::orbifold::{parse_conway, standard_presentation, OrbifoldError};
use isotile_core::tiling::{generate_patch, TilingError};
use isotile_core::ConwaySymbol;
use thiserror::Error;

use crate::format::{
    fmt_f64, parse_automorphism, parse_recipe, write_dsym, write_generators, write_patch,
    write_presentation, write_recipe, write_verdict, FormatError, Recipe,
};
use crate::svg::{render_svg, RenderError, RenderStyle};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Dsym(#[from] DsymError),
    #[error(transparent)]
    Isotopy(#[from] IsotopyError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Orbifold(e) => e.name(),
            CliError::Geometry(e) => e.name(),
            CliError::Tiling(e) => e.name(),
            CliError::Dsym(e) => e.name(),
            CliError::Isotopy(e) => e.name(),
            CliError::Format(e) => e.name(),
            CliError::Render(e) => e.name(),
            CliError::Io { .. } => "IoError",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "isotile", version, about = "Isotopic tilings of hyperbolic orbifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical form, Euler characteristic and curvature class.
    Parse { symbol: String },
    /// Standard presentation dump.
    Present { symbol: String },
    /// Generator matrices and relation residuals.
    Realize {
        symbol: String,
        /// Print the default fundamental polygon as a recipe instead.
        #[arg(long)]
        base_recipe: bool,
    },
    /// Patch of the tiling generated by a recipe polygon.
    Tile {
        symbol: String,
        #[arg(long)]
        recipe: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Delaney-Dress symbol of a decoration.
    Dsym {
        symbol: String,
        #[arg(long)]
        recipe: Option<PathBuf>,
    },
    /// Removes the orbit of an edge; prints the new recipe.
    Glue {
        symbol: String,
        #[arg(long)]
        recipe: Option<PathBuf>,
        /// Edge name, or its 1-based position.
        #[arg(long)]
        edge: String,
    },
    /// Adds an edge across a tile; prints the new recipe.
    Split {
        symbol: String,
        #[arg(long)]
        recipe: Option<PathBuf>,
        /// 1-based tile orbit, in the order of the D-symbol faces.
        #[arg(long)]
        tile: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Word applied to the far end.
        #[arg(long)]
        via: Option<String>,
    },
    /// Automorphisms given as generator images.
    Auto {
        #[command(subcommand)]
        action: AutoAction,
    },
    /// Index of one group in another from Euler characteristics.
    Index { sub: String, sup: String },
    /// Mapping class group facts.
    Mcg {
        #[command(subcommand)]
        action: McgAction,
    },
}

#[derive(Debug, Subcommand)]
enum AutoAction {
    /// Verdict report for a word map.
    Check {
        symbol: String,
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// New generators and the recipe polygon they produce.
    Apply {
        symbol: String,
        file: PathBuf,
        #[arg(long)]
        recipe: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
}

#[derive(Debug, Subcommand)]
enum McgAction {
    /// Possible orders of finite-order classes on an n-punctured sphere.
    Orders { n: u32 },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn symbol(text: &str) -> Result<ConwaySymbol, CliError> {
    Ok(parse_conway(text)?)
}

fn group(text: &str) -> Result<GeometricGroup, CliError> {
    Ok(realize(&symbol(text)?)?)
}

fn recipe(gg: &GeometricGroup, path: Option<&Path>) -> Result<Recipe, CliError> {
    match path {
        Some(p) => Ok(parse_recipe(&read(p)?, &gg.presentation)?),
        None => Ok(Recipe::polygon(gg.base_polygon.clone())),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    match command {
        Command::Parse { symbol: s } => {
            let s = symbol(&s)?;
            writeln!(out, "symbol {s}").map_err(io)?;
            writeln!(out, "chi {}", s.euler_characteristic()).map_err(io)?;
            writeln!(out, "curvature {}", s.curvature_class()).map_err(io)?;
        }
        Command::Present { symbol: s } => {
            let p = standard_presentation(&symbol(&s)?)?;
            write!(out, "{}", write_presentation(&p)).map_err(io)?;
        }
        Command::Realize { symbol: s, base_recipe } => {
            let gg = group(&s)?;
            let p = &gg.presentation;
            if base_recipe {
                write!(out, "{}", write_recipe(&Recipe::polygon(gg.base_polygon.clone()), p)).map_err(io)?;
                return Ok(());
            }
            write!(out, "{}", write_generators(p, &gg.gens)).map_err(io)?;
            let mut worst = 0.0f64;
            for (w, r) in gg.verify_presentation() {
                writeln!(out, "residual {} : {}", p.format_word(&w), fmt_f64(r)).map_err(io)?;
                worst = worst.max(r);
            }
            writeln!(out, "max_residual {}", fmt_f64(worst)).map_err(io)?;
        }
        Command::Tile {
            symbol: s,
            recipe: r,
            radius,
            svg,
            dump,
        } => {
            let gg = group(&s)?;
            let r = recipe(&gg, r.as_deref())?;
            let patch = generate_patch(&gg, &r.vertices, radius)?;
            writeln!(out, "tiles {}", patch.len()).map_err(io)?;
            writeln!(out, "tile_area {}", fmt_f64(patch.patch_area() / patch.len() as f64)).map_err(io)?;
            let degrees: Vec<String> = patch
                .vertex_degree_histogram()
                .iter()
                .map(|(d, n)| format!("{d}:{n}"))
                .collect();
            if degrees.is_empty() {
                writeln!(out, "vertex_degrees none").map_err(io)?;
            } else {
                writeln!(out, "vertex_degrees {}", degrees.join(" ")).map_err(io)?;
            }
            if let Some(path) = dump {
                write_file(&path, &write_patch(&patch))?;
            }
            if let Some(path) = svg {
                write_file(&path, &render_svg(&patch, &RenderStyle::default())?)?;
            }
        }
        Command::Dsym { symbol: s, recipe: r } => {
            let gg = group(&s)?;
            let r = recipe(&gg, r.as_deref())?;
            let d = flags_from_decoration(&r.decoration(gg.symbol()), &gg)?;
            write!(out, "{}", write_dsym(&d)).map_err(io)?;
        }
        Command::Glue {
            symbol: s,
            recipe: r,
            edge,
        } => {
            let gg = group(&s)?;
            let r = recipe(&gg, r.as_deref())?;
            let k = match r.edge_index(&edge) {
                Some(k) => k,
                None => edge
                    .parse::<usize>()
                    .ok()
                    .and_then(|k| k.checked_sub(1))
                    .ok_or_else(|| DsymError::BadIndex(format!("no edge {edge}")))?,
            };
            let glued = glue(&r.decoration(gg.symbol()), &gg, k)?;
            write!(out, "{}", write_recipe(&r.with_edges(glued.edges), &gg.presentation)).map_err(io)?;
        }
        Command::Split {
            symbol: s,
            recipe: r,
            tile,
            from,
            to,
            via,
        } => {
            let gg = group(&s)?;
            let r = recipe(&gg, r.as_deref())?;
            let word = match via {
                Some(w) => gg.presentation.parse_word(&w)?,
                None => isotile_core::Word::identity(),
            };
            let t = tile
                .checked_sub(1)
                .ok_or_else(|| DsymError::BadIndex("tiles count from 1".into()))?;
            let dec = split(
                &r.decoration(gg.symbol()),
                &gg,
                t,
                r.vertex_index(&from)?,
                r.vertex_index(&to)?,
                &word,
            )?;
            write!(out, "{}", write_recipe(&r.with_edges(dec.edges), &gg.presentation)).map_err(io)?;
        }
        Command::Auto { action } => match action {
            AutoAction::Check { symbol: s, file, depth } => {
                let gg = group(&s)?;
                let images = parse_automorphism(&read(&file)?, &gg.presentation)?;
                let v = verdict(&gg, &images, depth)?;
                write!(out, "{}", write_verdict(&v, &gg.presentation)).map_err(io)?;
            }
            AutoAction::Apply {
                symbol: s,
                file,
                recipe: r,
                radius,
                svg,
                depth,
            } => {
                let gg = group(&s)?;
                let r = recipe(&gg, r.as_deref())?;
                let images = parse_automorphism(&read(&file)?, &gg.presentation)?;
                let a = make_automorphism(&gg, images, depth)?;
                let moved = act_on_generators(&a, &gg)?;
                write!(out, "{}", write_generators(&moved.presentation, &moved.gens)).map_err(io)?;
                let pts = moved.fundamental_tile_vertices(&r.vertices)?;
                for (name, z) in r.vertex_names.iter().zip(&pts) {
                    writeln!(out, "vertex {name} {},{}", fmt_f64(z.re), fmt_f64(z.im)).map_err(io)?;
                }
                if let Some(path) = svg {
                    let patch = generate_patch(&moved, &r.vertices, radius)?;
                    write_file(&path, &render_svg(&patch, &RenderStyle::default())?)?;
                }
            }
        },
        Command::Index { sub, sup } => {
            let k = subgroup_index(&symbol(&sub)?, &symbol(&sup)?)?;
            writeln!(out, "{k}").map_err(io)?;
        }
        Command::Mcg {
            action: McgAction::Orders { n },
        } => {
            let orders: Vec<String> = valid_finite_orders(n)?.iter().map(|m| m.to_string()).collect();
            writeln!(out, "{}", orders.join(" ")).map_err(io)?;
        }
    }
    Ok(())
}

/// Runs the command line and returns the exit code: 0 on success, 1 for a
/// domain error (its name goes to `err`), 2 for a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", e.name());
            1
        }
    }
}

