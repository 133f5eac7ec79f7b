//! Text formats, SVG rendering and the `isotile` command line on top of
//! [`isotile_core`].

pub mod cli;
pub mod format;
pub mod svg;
