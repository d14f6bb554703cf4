//! Text formats: drawings (MCD1), edge sets, and SVG pictures.

mod matching;
mod mcd;
mod svg;

pub use matching::{file_order, parse_matching, serialize_matching, witness_lines, MatchingFile, WitnessLine};
pub use mcd::{parse_mcd, serialize_mcd, McdError, ParseError};
pub use svg::{render_svg, RenderStyle};
