//! Source text to AST and back.

pub mod ast;
pub mod parser;
pub mod printer;
pub mod token;

pub use ast::*;
pub use parser::parse;
pub use printer::print;
pub use token::{parse_data, tokenize, Token, TokenKind};
