//! Memristor-crossbar neuro-fuzzy inference.
//!
//! Fuzzy rule bases are compiled into three-layer crossbar networks and
//! evaluated with sum-product fuzzy-minterm inference. Applied as a fuzzy XOR
//! to neighbouring pixels, the network extracts edges from grayscale images.
//!
//! - [`device`]: memristor cells, crossbars, write-verify programming and VMM readout
//! - [`fuzzy`]: fuzzification, fuzzy minterms, aggregation, and the binary threshold reference
//! - [`rulebase`]: rule-base DSL parser, validator and network compiler
//! - [`imaging`]: PGM I/O, smoothing, noise, fuzzy edge maps and the gradient baseline
//! - [`cli`]: batch commands behind the `memfuzz` binary

pub mod cli;
pub mod device;
pub mod fuzzy;
pub mod imaging;
pub mod matrix;
pub mod rulebase;

pub use matrix::Matrix;
