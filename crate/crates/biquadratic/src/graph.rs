//! Bipartite-graph view of simple forms.
//!
//! A simple form (distinct unit-coefficient terms `x_i^2 y_j^2`) is the edge
//! set of an m x n bipartite graph. This module detects C4, K_{3,3}, and
//! disjoint-C4 structures, computes small Zarankiewicz numbers by exhaustive
//! bitmask enumeration, and scans all (4,3) edge sets of a given size for
//! structural counterexamples.

use std::collections::BTreeSet;
use std::fmt;

use num::One;
use thiserror::Error;

use crate::poly::BiquadraticForm;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("form is not simple: offending monomial {0}")]
    NotSimple(String),
    #[error("edge ({0},{1}) out of bounds for ({2},{3})")]
    EdgeOutOfBounds(usize, usize, usize, usize),
    #[error("operation requires n = 3, got n = {0}")]
    RequiresThreeColumns(usize),
    #[error("enumeration budget exceeded: m*n = {0} > 20")]
    BudgetExceeded(usize),
    #[error("lemma scan only supports (m,n) = (4,3) with 8..=12 edges, got ({0},{1}) with {2}")]
    UnsupportedScan(usize, usize, usize),
}

/// Edge set of an m x n bipartite graph. Rows and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    m: usize,
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// Canonical C4 witness: rows `i < k`, columns `j < l`, designating the edge
/// set {(i,j),(i,l),(k,j),(k,l)}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct C4Witness {
    pub i: usize,
    pub k: usize,
    pub j: usize,
    pub l: usize,
}

impl fmt::Display for C4Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C4(rows {},{}; cols {},{})", self.i, self.k, self.j, self.l)
    }
}

impl BipartiteGraph {
    pub fn new(m: usize, n: usize) -> Self {
        BipartiteGraph {
            m,
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<(), GraphError> {
        if i < 1 || i > self.m || j < 1 || j > self.n {
            return Err(GraphError::EdgeOutOfBounds(i, j, self.m, self.n));
        }
        self.edges.insert((i, j));
        Ok(())
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.edges.iter()
    }

    /// Builds a graph from an mn-bit mask, bit (i-1)*n + (j-1) for edge (i,j).
    pub fn from_mask(m: usize, n: usize, mask: u32) -> Self {
        let mut g = BipartiteGraph::new(m, n);
        for i in 1..=m {
            for j in 1..=n {
                if mask >> ((i - 1) * n + (j - 1)) & 1 == 1 {
                    g.edges.insert((i, j));
                }
            }
        }
        g
    }

    pub fn to_mask(&self) -> u32 {
        let mut mask = 0u32;
        for &(i, j) in &self.edges {
            mask |= 1 << ((i - 1) * self.n + (j - 1));
        }
        mask
    }
}

/// Extracts the bipartite graph of a simple form: edge (i,j) iff the
/// coefficient of `x_i^2 y_j^2` is exactly 1, no other monomials allowed.
pub fn from_simple_form(form: &BiquadraticForm) -> Result<BipartiteGraph, GraphError> {
    let mut g = BipartiteGraph::new(form.m(), form.n());
    for (mono, c) in form.terms() {
        if !mono.is_pure_square() || !c.is_one() {
            return Err(GraphError::NotSimple(format!("{}*{}", c, mono)));
        }
        g.edges.insert((mono.xi, mono.yj));
    }
    Ok(g)
}

/// Lexicographically smallest C4 witness, if any.
pub fn find_c4(g: &BipartiteGraph) -> Option<C4Witness> {
    for i in 1..=g.m {
        for k in (i + 1)..=g.m {
            for j in 1..=g.n {
                for l in (j + 1)..=g.n {
                    if g.has_edge(i, j) && g.has_edge(i, l) && g.has_edge(k, j) && g.has_edge(k, l) {
                        return Some(C4Witness { i, k, j, l });
                    }
                }
            }
        }
    }
    None
}

/// Smallest row triple {r1 < r2 < r3} adjacent to all three columns.
/// Requires n = 3.
pub fn find_k33(g: &BipartiteGraph) -> Result<Option<[usize; 3]>, GraphError> {
    if g.n != 3 {
        return Err(GraphError::RequiresThreeColumns(g.n));
    }
    let full_row = |r: usize| (1..=3).all(|j| g.has_edge(r, j));
    for r1 in 1..=g.m {
        for r2 in (r1 + 1)..=g.m {
            for r3 in (r2 + 1)..=g.m {
                if full_row(r1) && full_row(r2) && full_row(r3) {
                    return Ok(Some([r1, r2, r3]));
                }
            }
        }
    }
    Ok(None)
}

/// Lexicographically smallest pair of C4 witnesses whose four-cell edge
/// blocks are disjoint, if any. Two C4s overlap in an edge exactly when they
/// share a row and a column, so disjoint rows or disjoint columns suffice;
/// with only three columns, fully vertex-disjoint pairs cannot exist, and
/// edge-disjointness is what the two-identity decomposition needs (each
/// identity consumes its own four pure squares).
pub fn find_two_disjoint_c4(g: &BipartiteGraph) -> Option<(C4Witness, C4Witness)> {
    let mut witnesses = Vec::new();
    for i in 1..=g.m {
        for k in (i + 1)..=g.m {
            for j in 1..=g.n {
                for l in (j + 1)..=g.n {
                    if g.has_edge(i, j) && g.has_edge(i, l) && g.has_edge(k, j) && g.has_edge(k, l) {
                        witnesses.push(C4Witness { i, k, j, l });
                    }
                }
            }
        }
    }
    for (a_idx, a) in witnesses.iter().enumerate() {
        for b in witnesses.iter().skip(a_idx + 1) {
            let rows_disjoint = a.i != b.i && a.i != b.k && a.k != b.i && a.k != b.k;
            let cols_disjoint = a.j != b.j && a.j != b.l && a.l != b.j && a.l != b.l;
            if rows_disjoint || cols_disjoint {
                return Some((*a, *b));
            }
        }
    }
    None
}

/// All C4 edge-pattern masks for an m x n graph.
fn c4_masks(m: usize, n: usize) -> Vec<u32> {
    let bit = |i: usize, j: usize| 1u32 << ((i - 1) * n + (j - 1));
    let mut masks = Vec::new();
    for i in 1..=m {
        for k in (i + 1)..=m {
            for j in 1..=n {
                for l in (j + 1)..=n {
                    masks.push(bit(i, j) | bit(i, l) | bit(k, j) | bit(k, l));
                }
            }
        }
    }
    masks
}

/// Exact Zarankiewicz number z(m,n) by exhaustive enumeration of all 2^{mn}
/// edge sets, plus one maximum C4-free witness graph.
pub fn zarankiewicz(m: usize, n: usize) -> Result<(usize, BipartiteGraph), GraphError> {
    if m * n > 20 {
        return Err(GraphError::BudgetExceeded(m * n));
    }
    let patterns = c4_masks(m, n);
    let mut best = 0usize;
    let mut best_mask = 0u32;
    for mask in 0u32..(1 << (m * n)) {
        let count = mask.count_ones() as usize;
        if count <= best {
            continue;
        }
        if patterns.iter().all(|&p| mask & p != p) {
            best = count;
            best_mask = mask;
        }
    }
    Ok((best, BipartiteGraph::from_mask(m, n, best_mask)))
}

/// One scan finding: a graph (as edge list) that violates the expected
/// structural property.
#[derive(Debug, Clone)]
pub struct ScanViolation {
    pub edges: Vec<(usize, usize)>,
    pub property: &'static str,
}

/// Report of an exhaustive structural scan over all (4,3) edge sets of a
/// fixed size.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub m: usize,
    pub n: usize,
    pub edge_count: usize,
    pub graphs_scanned: usize,
    pub with_c4: usize,
    pub violations: Vec<ScanViolation>,
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "scan ({},{}) edges={}: {} graphs, {} contain a C4, {} violations",
            self.m,
            self.n,
            self.edge_count,
            self.graphs_scanned,
            self.with_c4,
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "violation [{}]: {:?}", v.property, v.edges)?;
        }
        Ok(())
    }
}

/// Enumerates every (4,3) edge set of the given size and checks:
/// * 8..=12 edges: the graph contains a C4;
/// * 10 edges: the graph contains two edge-disjoint C4s or a K_{3,3};
/// * 11 edges: the graph contains a K_{3,3}.
///
/// The violation list is expected to be empty in every case.
pub fn lemma_scan(m: usize, n: usize, edge_count: usize) -> Result<ScanReport, GraphError> {
    if (m, n) != (4, 3) || !(8..=12).contains(&edge_count) {
        return Err(GraphError::UnsupportedScan(m, n, edge_count));
    }
    let mut report = ScanReport {
        m,
        n,
        edge_count,
        graphs_scanned: 0,
        with_c4: 0,
        violations: Vec::new(),
    };
    for mask in 0u32..(1 << 12) {
        if mask.count_ones() as usize != edge_count {
            continue;
        }
        report.graphs_scanned += 1;
        let g = BipartiteGraph::from_mask(m, n, mask);
        let has_c4 = find_c4(&g).is_some();
        if has_c4 {
            report.with_c4 += 1;
        } else {
            report.violations.push(ScanViolation {
                edges: g.edges.iter().copied().collect(),
                property: "contains a C4",
            });
        }
        if edge_count == 10 {
            let ok = find_two_disjoint_c4(&g).is_some() || find_k33(&g)?.is_some();
            if !ok {
                report.violations.push(ScanViolation {
                    edges: g.edges.iter().copied().collect(),
                    property: "two disjoint C4s or a K33",
                });
            }
        }
        if edge_count == 11 && find_k33(&g)?.is_none() {
            report.violations.push(ScanViolation {
                edges: g.edges.iter().copied().collect(),
                property: "contains a K33",
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{form_q, p_4_3_7, rat, BiquadraticForm};

    fn p437_graph() -> BipartiteGraph {
        from_simple_form(&p_4_3_7()).unwrap()
    }

    #[test]
    fn graph_of_p437() {
        let g = p437_graph();
        assert_eq!(g.edge_count(), 7);
        for e in [(1, 1), (2, 2), (3, 3), (1, 2), (2, 3), (3, 1), (4, 1)] {
            assert!(g.has_edge(e.0, e.1));
        }
    }

    #[test]
    fn q_is_not_simple() {
        let err = from_simple_form(&form_q()).unwrap_err();
        match err {
            GraphError::NotSimple(s) => assert!(s.contains("x1*x4"), "got {s}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_form_gives_empty_graph() {
        let g = from_simple_form(&BiquadraticForm::zero(4, 3).unwrap()).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn non_unit_coefficient_is_not_simple() {
        let mut f = BiquadraticForm::zero(4, 3).unwrap();
        f.add_term(1, 1, 1, 1, rat(2)).unwrap();
        assert!(from_simple_form(&f).is_err());
    }

    #[test]
    fn p437_is_c4_free() {
        assert_eq!(find_c4(&p437_graph()), None);
    }

    #[test]
    fn p437_plus_edge_has_c4() {
        let mut g = p437_graph();
        g.add_edge(4, 2).unwrap();
        assert_eq!(
            find_c4(&g),
            Some(C4Witness {
                i: 1,
                k: 4,
                j: 1,
                l: 2
            })
        );
    }

    #[test]
    fn empty_graph_has_no_c4() {
        assert_eq!(find_c4(&BipartiteGraph::new(4, 3)), None);
    }

    #[test]
    fn k33_detection() {
        // K_{4,3} minus edge (1,1): the three other rows form the K33.
        let mut g = BipartiteGraph::new(4, 3);
        for i in 1..=4 {
            for j in 1..=3 {
                if (i, j) != (1, 1) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        assert_eq!(find_k33(&g).unwrap(), Some([2, 3, 4]));
        assert_eq!(find_k33(&p437_graph()).unwrap(), None);
        let mut full = BipartiteGraph::new(4, 3);
        for i in 1..=4 {
            for j in 1..=3 {
                full.add_edge(i, j).unwrap();
            }
        }
        assert_eq!(find_k33(&full).unwrap(), Some([1, 2, 3]));
    }

    #[test]
    fn k33_requires_three_columns() {
        let g = BipartiteGraph::new(4, 2);
        assert_eq!(find_k33(&g), Err(GraphError::RequiresThreeColumns(2)));
    }

    #[test]
    fn disjoint_c4_pair_on_4x4() {
        let mut g = BipartiteGraph::new(4, 4);
        for e in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 3), (3, 4), (4, 3), (4, 4)] {
            g.add_edge(e.0, e.1).unwrap();
        }
        let (a, b) = find_two_disjoint_c4(&g).unwrap();
        assert_eq!(a, C4Witness { i: 1, k: 2, j: 1, l: 2 });
        assert_eq!(b, C4Witness { i: 3, k: 4, j: 3, l: 4 });
    }

    #[test]
    fn single_c4_has_no_disjoint_pair() {
        let mut g = BipartiteGraph::new(4, 3);
        for e in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            g.add_edge(e.0, e.1).unwrap();
        }
        assert!(find_two_disjoint_c4(&g).is_none());
    }

    #[test]
    fn zarankiewicz_small_values() {
        // (2,2) and (3,3) derived by this same exhaustive enumeration; the
        // oracle is the quadruple-loop C4 detector, checked separately below.
        let (z22, w22) = zarankiewicz(2, 2).unwrap();
        assert_eq!(z22, 3);
        assert_eq!(w22.edge_count(), 3);
        assert_eq!(find_c4(&w22), None);

        let (z33, w33) = zarankiewicz(3, 3).unwrap();
        assert_eq!(z33, 6);
        assert_eq!(find_c4(&w33), None);
    }

    #[test]
    fn zarankiewicz_budget() {
        assert_eq!(zarankiewicz(5, 5), Err(GraphError::BudgetExceeded(25)));
    }

    // Independent oracle: count C4s by checking all row/column pairs
    // directly on the adjacency sets, over every graph with mn <= 12.
    fn c4_oracle(g: &BipartiteGraph) -> bool {
        for i in 1..=g.m() {
            for k in 1..=g.m() {
                for j in 1..=g.n() {
                    for l in 1..=g.n() {
                        if i != k
                            && j != l
                            && g.has_edge(i, j)
                            && g.has_edge(i, l)
                            && g.has_edge(k, j)
                            && g.has_edge(k, l)
                        {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn find_c4_matches_oracle_exhaustively() {
        for (m, n) in [(2, 2), (3, 3), (4, 3)] {
            for mask in 0u32..(1 << (m * n)) {
                let g = BipartiteGraph::from_mask(m, n, mask);
                assert_eq!(find_c4(&g).is_some(), c4_oracle(&g), "mask {mask} on ({m},{n})");
            }
        }
    }

    #[test]
    fn c4_monotone_under_supergraphs() {
        let mut g = BipartiteGraph::new(4, 3);
        for e in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            g.add_edge(e.0, e.1).unwrap();
        }
        assert!(find_c4(&g).is_some());
        g.add_edge(3, 3).unwrap();
        assert!(find_c4(&g).is_some());
    }

    #[test]
    fn scan_rejects_unsupported() {
        assert!(lemma_scan(3, 3, 8).is_err());
        assert!(lemma_scan(4, 3, 7).is_err());
    }
}
