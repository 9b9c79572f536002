//! Analysis and decomposition of positive-semidefinite biquadratic forms.
//!
//! The crate provides four cooperating layers:
//!
//! * [`poly`] — exact (2,2)-forms, bilinear forms, parsing, expansion, and
//!   decomposition verification over the rationals.
//! * [`graph`] — the bipartite-graph view of simple forms: C4 / K_{3,3}
//!   detection, exhaustive Zarankiewicz numbers, and structural lemma scans.
//! * [`decompose`] — constructive decomposition engines: the C4 two-square
//!   identity, the 3x3 Hurwitz identity, the simple-form case analysis, and
//!   the y-deficient and diagonal row-split pipelines.
//! * [`gram`] — Gram-matrix constraint systems and a seeded low-rank
//!   factorization search with exact rationalization of numeric solutions.
//! * [`cert`] — machine-checkable orthogonality certificates proving SOS-rank
//!   lower bounds, including the built-in certificate that the form Q admits
//!   no 7-square decomposition.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod analyze;
pub mod cert;
pub mod cli;
pub mod decompose;
pub mod graph;
pub mod gram;
pub mod poly;

pub use poly::{
    expand, form_q, p_4_3_7, parse_bilinear, parse_form, psd_sample_check, q_eight_squares, rat,
    ratio, simple_family, verify_decomposition, BilinearForm, BiquadraticForm, PolyError,
    QuarticMonomial, Rat, SosDecomposition, Verdict,
};
