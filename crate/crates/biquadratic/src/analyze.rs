//! Structural analysis of a biquadratic form: which decomposition routes
//! apply, graph structure for simple forms, and a randomized nonnegativity
//! sanity check.

use std::fmt;

use num::Zero;
use serde::Serialize;

use crate::decompose::detect_y_deficient;
use crate::graph::{self, from_simple_form};
use crate::poly::{psd_sample_check, BiquadraticForm, QuarticMonomial};

/// Graph view available when the form is simple (unit pure squares only).
#[derive(Debug, Clone, Serialize)]
pub struct SimpleGraphReport {
    pub edge_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub c4_free: bool,
    /// Lexicographically smallest C4 as (i, k, j, l), when one exists.
    pub c4_witness: Option<(usize, usize, usize, usize)>,
}

/// Outcome of the randomized nonnegativity check.
#[derive(Debug, Clone, Serialize)]
pub enum PsdSample {
    NoCounterexample { trials: usize },
    Counterexample { x: Vec<String>, y: Vec<String>, value: String },
}

/// Everything the analyzer can say about a form without decomposing it.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub m: usize,
    pub n: usize,
    pub num_terms: usize,
    pub pure_squares_present: Vec<(usize, usize)>,
    pub pure_squares_absent: Vec<(usize, usize)>,
    pub cross_terms: Vec<String>,
    pub is_diagonal: bool,
    pub simple_graph: Option<SimpleGraphReport>,
    /// Columns j0 qualifying for the y-deficient split: some pure square
    /// x_{i0}^2 y_{j0}^2 is absent and every term involving y_{j0} has a
    /// nonnegative coefficient on a pure square or is independent of x_{i0}.
    pub y_deficient_columns: Vec<usize>,
    /// Set when a column qualifies for the split even though the form has
    /// cross terms, so the split alone need not preserve the usual square
    /// count bookkeeping and downstream bounds deserve a second look.
    pub y_deficient_note: Option<String>,
    pub psd_sample: PsdSample,
}

/// Analyzes `form`, sampling `trials` random rational points with the given
/// seed for the nonnegativity check.
pub fn analyze(form: &BiquadraticForm, trials: usize, seed: u64) -> AnalysisReport {
    let (m, n) = (form.m(), form.n());
    let mut present = Vec::new();
    let mut absent = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            let c = form.coefficient(&QuarticMonomial::new(i, i, j, j));
            if c.is_zero() {
                absent.push((i, j));
            } else {
                present.push((i, j));
            }
        }
    }
    let cross_terms: Vec<String> = form
        .terms()
        .filter(|(mono, _)| !mono.is_pure_square())
        .map(|(mono, c)| format!("{}*{}", c, mono))
        .collect();

    let simple_graph = from_simple_form(form).ok().map(|g| {
        let witness = graph::find_c4(&g);
        SimpleGraphReport {
            edge_count: g.edge_count(),
            edges: g.edges().copied().collect(),
            c4_free: witness.is_none(),
            c4_witness: witness.map(|w| (w.i, w.k, w.j, w.l)),
        }
    });

    let y_deficient_columns = detect_y_deficient(form);
    let y_deficient_note = if !y_deficient_columns.is_empty() && !cross_terms.is_empty() {
        Some(
            "a column qualifies for the y-deficient split although the form has cross terms; \
             the split applies literally, but square-count bounds that assume a diagonal form \
             do not transfer automatically"
                .to_string(),
        )
    } else {
        None
    };

    let psd_sample = match psd_sample_check(form, trials, seed) {
        None => PsdSample::NoCounterexample { trials },
        Some((x, y, v)) => PsdSample::Counterexample {
            x: x.iter().map(|r| r.to_string()).collect(),
            y: y.iter().map(|r| r.to_string()).collect(),
            value: v.to_string(),
        },
    };

    AnalysisReport {
        m,
        n,
        num_terms: form.num_terms(),
        pure_squares_present: present,
        pure_squares_absent: absent,
        cross_terms,
        is_diagonal: form.is_diagonal(),
        simple_graph,
        y_deficient_columns,
        y_deficient_note,
        psd_sample,
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "form on ({}, {}) with {} terms", self.m, self.n, self.num_terms)?;
        writeln!(
            f,
            "pure squares: {} present, {} absent {:?}",
            self.pure_squares_present.len(),
            self.pure_squares_absent.len(),
            self.pure_squares_absent
        )?;
        if self.cross_terms.is_empty() {
            writeln!(f, "cross terms: none (diagonal: {})", self.is_diagonal)?;
        } else {
            writeln!(f, "cross terms: {}", self.cross_terms.join(", "))?;
        }
        match &self.simple_graph {
            Some(g) => {
                writeln!(
                    f,
                    "simple form: {} edges, C4-free: {}",
                    g.edge_count, g.c4_free
                )?;
                if let Some((i, k, j, l)) = g.c4_witness {
                    writeln!(f, "C4 witness: rows {{{}, {}}} x columns {{{}, {}}}", i, k, j, l)?;
                }
            }
            None => writeln!(f, "not a simple form")?,
        }
        writeln!(f, "y-deficient columns: {:?}", self.y_deficient_columns)?;
        if let Some(note) = &self.y_deficient_note {
            writeln!(f, "note: {}", note)?;
        }
        match &self.psd_sample {
            PsdSample::NoCounterexample { trials } => {
                writeln!(
                    f,
                    "nonnegativity sampling: no counterexample in {} trials (not a proof)",
                    trials
                )
            }
            PsdSample::Counterexample { x, y, value } => {
                writeln!(
                    f,
                    "nonnegativity sampling: NEGATIVE value {} at x = {:?}, y = {:?}",
                    value, x, y
                )
            }
        }
    }
}

/// Sign of the form at the most negative sampled point, used by callers that
/// only need a verdict.
pub fn sample_says_nonnegative(report: &AnalysisReport) -> bool {
    matches!(report.psd_sample, PsdSample::NoCounterexample { .. })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::example_diagonal_form;
    use crate::poly::{form_q, p_4_3_7, rat, simple_family};

    #[test]
    fn p437_is_simple_and_c4_free() {
        let report = analyze(&p_4_3_7(), 50, 7);
        let g = report.simple_graph.as_ref().unwrap();
        assert_eq!(g.edge_count, 7);
        assert!(g.c4_free);
        assert!(report.cross_terms.is_empty());
        assert!(sample_says_nonnegative(&report));
    }

    #[test]
    fn q_report_flags_discrepancy() {
        let report = analyze(&form_q(), 50, 7);
        assert!(report.simple_graph.is_none());
        assert_eq!(report.cross_terms.len(), 1);
        assert_eq!(report.y_deficient_columns, vec![1]);
        assert!(report.y_deficient_note.is_some());
        assert_eq!(
            report.pure_squares_absent,
            vec![(2, 1), (3, 2), (4, 3)]
        );
        assert!(sample_says_nonnegative(&report));
    }

    #[test]
    fn diagonal_example_has_no_note() {
        let report = analyze(&example_diagonal_form(), 50, 7);
        assert!(report.is_diagonal);
        assert!(report.y_deficient_note.is_none());
        assert!(report.simple_graph.is_none());
    }

    #[test]
    fn eight_edge_simple_form_has_c4_witness() {
        let form = simple_family(7)
            .unwrap()
            .add(&{
                let mut extra = crate::poly::BiquadraticForm::zero(4, 3).unwrap();
                extra.add_term(4, 4, 2, 2, rat(1)).unwrap();
                extra
            })
            .unwrap();
        let report = analyze(&form, 10, 7);
        let g = report.simple_graph.unwrap();
        assert_eq!(g.edge_count, 8);
        assert!(!g.c4_free);
        assert!(g.c4_witness.is_some());
    }

    #[test]
    fn indefinite_form_yields_counterexample() {
        let mut f = crate::poly::BiquadraticForm::zero(2, 2).unwrap();
        f.add_term(1, 2, 1, 2, rat(1)).unwrap();
        let report = analyze(&f, 200, 7);
        assert!(!sample_says_nonnegative(&report));
    }

    #[test]
    fn json_serialization_round_trips_fields() {
        let report = analyze(&form_q(), 10, 7);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["m"], 4);
        assert_eq!(json["n"], 3);
        assert_eq!(json["y_deficient_columns"][0], 1);
    }
}
