//! Text front end: parsing `.es` sources and grounding them.

pub mod ast;
mod ground;
mod parser;

pub use ast::SourceProgram;
pub use ground::{ground, GroundError};
pub use parser::{parse, parse_with, ParseError, ParseOptions};

use thiserror::Error;

use crate::lang::Program;

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("grounding error: {0}")]
    Ground(#[from] GroundError),
}

/// Parse and ground in one step.
pub fn load(text: &str) -> Result<Program, FrontendError> {
    Ok(ground(&parse(text)?)?)
}
