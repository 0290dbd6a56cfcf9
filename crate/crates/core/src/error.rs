use thiserror::Error;

use crate::corpus::CorpusError;
use crate::dsp::DspError;
use crate::functionals::FunctionalError;
use crate::learn::LearnError;
use crate::lexrich::LexError;
use crate::synco::SyntaxError;

/// Crate-level error used by the pipeline, wrapping each stage's error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Dsp(#[from] DspError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Lexical(#[from] LexError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("session {session}: {source}")]
    Session {
        session: String,
        #[source]
        source: Box<Error>,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

impl Error {
    pub(crate) fn in_session(session: impl std::fmt::Display, source: impl Into<Error>) -> Self {
        Error::Session {
            session: session.to_string(),
            source: Box::new(source.into()),
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
