//! Expression language for immersion charts and chart evaluation.

mod ast;
#[allow(clippy::module_inception)]
mod chart;
mod lexer;
mod parser;

pub use ast::{BinOp, Expr, Func};
pub use chart::{eval_chart_jet, eval_expr, parse_chart, ChartDef, ChartMap, DslChart, FnChart};
pub use lexer::{tokenize, Tok, Token};
pub use parser::{parse_source, DslSource};
