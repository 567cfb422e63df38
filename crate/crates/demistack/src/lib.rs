//! demistack constructs genus-1/2 stacky curves over rings of integers of
//! number fields that have integral points in every completion but no global
//! integral points, and emits certificates that an independent validator can
//! re-check from scratch.
//!
//! The pipeline: exact number-field arithmetic ([`numfield`]), completions
//! and square classes ([`localfield`]), Hilbert symbols and conic solvability
//! ([`hilbert`]), the quotient-conic model with its local/global verdicts
//! ([`stacky`]), prime-pair search ([`search`]), and certificate
//! serialization/validation ([`certify`]).

pub mod certify;
pub mod cli;
pub mod hilbert;
pub mod localfield;
pub mod numfield;
pub mod search;
pub mod stacky;
