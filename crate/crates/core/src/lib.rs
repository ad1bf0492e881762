//! Class-diagram differencing and rule-based change impact analysis.
//!
//! The pipeline reads two versions of a model, matches their elements
//! (optionally guided by user presettings), classifies the result into a
//! typed difference model, evaluates impact rules against every difference
//! and renders a developer checklist.

pub mod lex;
pub mod model;
pub mod differ;
pub mod rules;
pub mod engine;
pub mod builtin;
pub mod checklist;
pub mod synth;
pub mod pipeline;
