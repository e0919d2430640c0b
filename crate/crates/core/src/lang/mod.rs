//! Syntax, typing and elaboration of the source language.

pub mod desugar;
pub mod fixtures;
pub mod parse;
pub mod print;
pub mod syntax;
pub mod typing;

pub use desugar::{desugar, desugar_in};
pub use parse::{parse_term, parse_type, ParseError};
pub use print::{print_term, print_type};
pub use syntax::{BinOp, Lang, NewDecl, TermExpr, TypeExpr, UnOp};
pub use typing::{typecheck, TypeError, TypingContext};
