//! Feature extraction and proficiency classification for repeated-reading
//! summary recordings.
//!
//! The crate is organised around the stages of the assessment pipeline:
//!
//! * [`corpus`]: session manifest, transcripts, disfluency logs, rater scores,
//!   label derivation and inter-rater agreement.
//! * [`dsp`]: WAV ingestion, 0.5 s fragmentation, silence handling and
//!   frame-level low-level descriptors (LLDs).
//! * [`functionals`]: statistical functionals and the feature-set presets.
//! * [`lexrich`]: the 25-metric lexical richness catalog.
//! * [`synco`]: bracketed tree reading and the 14 syntactic complexity ratios.
//! * [`learn`]: fusion, stratified splitting, five classifier families and the
//!   evaluation grid.
//! * [`pipeline`]: the end-to-end `validate` / `extract` / `evaluate` runs that
//!   the command-line front end wraps.

pub mod corpus;
pub mod dsp;
pub mod functionals;
pub mod learn;
pub mod lexrich;
pub mod pipeline;
pub mod seed;
pub mod synco;
pub mod synth;

mod error;

pub use corpus::{Corpus, Criterion, Label, SessionKey};
pub use dsp::{AudioSignal, Fragment, LldMatrix};
pub use error::{Error, Result};
pub use functionals::{FeatureSetPreset, FeatureVector, FunctionalSet};
pub use learn::{EvalReport, ModelKind, ModelSpec};
pub use lexrich::{LexMetricVector, LexicalProfile, TaggedToken};
pub use synco::{ParseTree, ProductionCounts, SynMetricVector};
