use std::path::PathBuf;

use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse {context}: {source}")]
    Parse {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("evaluation failed at (u, v) = ({u}, {v}): {source}")]
    Eval {
        u: f64,
        v: f64,
        #[source]
        source: EvalError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    SurfaceFile { path: PathBuf, message: String },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("grid {nu}x{nv} is too coarse (need at least {min}x{min})")]
    InvalidGrid { nu: usize, nv: usize, min: usize },
    #[error("point ({u}, {v}) is {found}, expected {expected}")]
    WrongClass {
        u: f64,
        v: f64,
        expected: &'static str,
        found: String,
    },
    #[error("precondition failed at ({u}, {v}): {what}")]
    Precondition { u: f64, v: f64, what: String },
    #[error("sample ({u}, {v}) lies outside the domain")]
    SampleOutside { u: f64, v: f64 },
    #[error("{what} is undefined at sample ({u}, {v})")]
    Undefined { u: f64, v: f64, what: String },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn eval(u: f64, v: f64) -> impl FnOnce(EvalError) -> Error {
        move |source| Error::Eval { u, v, source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
