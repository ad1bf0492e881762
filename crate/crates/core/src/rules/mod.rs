//! Impact-rule language (`.ir`) and its declarative extension file (`.irx`).
//!
//! ```text
//! impactRule "<name>" {
//!   description = "..."
//!   severity = minor|normal|critical        // optional
//!   probability = low|medium|high           // optional
//!   relevantFor = "tag, tag"                // optional
//!   impact {
//!     pc.addedClass() && !isGenerated() => "hint text with {placeholder}"
//!   }
//! }
//! ```
//!
//! Metadata may appear in any order, each keyword once; `description` is
//! required. `!` binds tighter than `&&`, which binds tighter than `||`.

mod ast;
mod ext;
mod parse;
mod print;
mod validate;

pub use ast::*;
pub(crate) use ext::check_cycles;
pub use ext::{
    parse_extensions, parse_extensions_with, provider_arity, ExtError, ExtensionBody, ExtensionDecl,
    ExtensionKind, PROVIDERS,
};
pub use parse::{is_placeholder_name, merge_rule_sets, parse_rules, parse_template, RuleError};
pub use print::{print_condition, print_extensions, print_rules, print_template};
pub use validate::{validate, DiagCode, Diagnostic, KnownNames, Level, Signature, BUILTIN_PLACEHOLDERS};
