//! Turning expressions, grid files and match scores into models.

mod export;
mod expr;
mod grid;
mod matches;

pub use export::{model_from_json, model_to_json, ModelDocument};
pub use expr::{parse_ast, parse_expression, render_expression, ExpressionAst};
pub use grid::{parse_grid, write_grid};
pub use matches::{from_matches, is_connected, parse_matches, players, MatchRecord};
