//! Constructive SOS decomposition engines.
//!
//! Structural routes (C4 identity, 3x3 Hurwitz identity, the simple-form
//! case analysis) produce exact decompositions directly. The y-deficient
//! split and the diagonal row-split reduce a (4,3) form to a smaller block
//! handled by the Gram rank search, with exact rationalization attempted and
//! a tolerance-checked numeric fallback.

use num::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::{self, GraphError};
use crate::gram::{
    self, GramError, NumericBilinearForm, SearchConfig,
};
use crate::poly::{
    rat, verify_decomposition, BilinearForm, BiquadraticForm, PolyError, QuarticMonomial, Rat,
    SosDecomposition, Verdict,
};

#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error("degenerate C4 indices (i,k,j,l) = ({0},{1},{2},{3})")]
    DegenerateC4(usize, usize, usize, usize),
    #[error("index {0} out of bounds for dimension {1}")]
    IndexOutOfBounds(usize, usize),
    #[error("rows must be distinct, got {0:?}")]
    RepeatedRows([usize; 3]),
    #[error("operation requires dimensions ({0},{1}), got ({2},{3})")]
    WrongDimensions(usize, usize, usize, usize),
    #[error("form is empty")]
    EmptyForm,
    #[error("column {j0} does not qualify as y-deficient: monomial {monomial} {reason}")]
    NotYDeficient {
        j0: usize,
        monomial: String,
        reason: &'static str,
    },
    #[error("form is not diagonal: offending monomial {0}")]
    NotDiagonal(String),
    #[error("rank search failed within budget on {context} (inconclusive, not a disproof)")]
    SearchFailure { context: String },
    #[error("internal decomposition failed verification: difference {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Gram(#[from] GramError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The two squares of the C4 identity:
/// `x_i^2 y_j^2 + x_k^2 y_l^2 + x_i^2 y_l^2 + x_k^2 y_j^2
///  = (x_i y_j + x_k y_l)^2 + (x_i y_l - x_k y_j)^2`.
pub fn c4_identity(
    m: usize,
    n: usize,
    i: usize,
    k: usize,
    j: usize,
    l: usize,
) -> Result<[BilinearForm; 2], DecomposeError> {
    if i == k || j == l {
        return Err(DecomposeError::DegenerateC4(i, k, j, l));
    }
    for (idx, dim) in [(i, m), (k, m), (j, n), (l, n)] {
        if idx < 1 || idx > dim {
            return Err(DecomposeError::IndexOutOfBounds(idx, dim));
        }
    }
    let a = BilinearForm::from_triples(m, n, &[(i, j, rat(1)), (k, l, rat(1))])?;
    let b = BilinearForm::from_triples(m, n, &[(i, l, rat(1)), (k, j, rat(-1))])?;
    Ok([a, b])
}

/// The four squares of the 3x3 Hurwitz identity, with x-indices relabeled to
/// the given rows; the expansion is `sum_{r in rows} sum_j x_r^2 y_j^2`.
/// Requires n = 3.
pub fn hurwitz_3x3(m: usize, rows: [usize; 3]) -> Result<Vec<BilinearForm>, DecomposeError> {
    let [r1, r2, r3] = rows;
    if r1 == r2 || r1 == r3 || r2 == r3 {
        return Err(DecomposeError::RepeatedRows(rows));
    }
    for r in rows {
        if r < 1 || r > m {
            return Err(DecomposeError::IndexOutOfBounds(r, m));
        }
    }
    let n = 3;
    let one = rat(1);
    Ok(vec![
        BilinearForm::from_triples(
            m,
            n,
            &[(r1, 1, one.clone()), (r2, 2, one.clone()), (r3, 3, one.clone())],
        )?,
        BilinearForm::from_triples(m, n, &[(r2, 3, one.clone()), (r3, 2, -one.clone())])?,
        BilinearForm::from_triples(m, n, &[(r3, 1, one.clone()), (r1, 3, -one.clone())])?,
        BilinearForm::from_triples(m, n, &[(r1, 2, one.clone()), (r2, 1, -one.clone())])?,
    ])
}

fn single_square(m: usize, n: usize, i: usize, j: usize) -> BilinearForm {
    BilinearForm::from_triples(m, n, &[(i, j, rat(1))]).expect("in-bounds single")
}

fn verified(
    target: &BiquadraticForm,
    squares: Vec<BilinearForm>,
    provenance: Vec<String>,
) -> Result<SosDecomposition, DecomposeError> {
    let mut dec = SosDecomposition::new(target.clone(), squares);
    dec.provenance = provenance;
    match verify_decomposition(&dec)? {
        Verdict::Equal => Ok(dec),
        Verdict::Differs(d) => Err(DecomposeError::Internal(d.to_string())),
    }
}

/// Exact decomposition of a simple (4,3) form by edge-count case analysis.
///
/// Guaranteed square counts: e for e <= 7, at most 6 for e = 8, 7 for e = 9,
/// 6 for e in {10, 11}, and 7 for e = 12; always at most 7.
pub fn decompose_simple(form: &BiquadraticForm) -> Result<SosDecomposition, DecomposeError> {
    if (form.m(), form.n()) != (4, 3) {
        return Err(DecomposeError::WrongDimensions(4, 3, form.m(), form.n()));
    }
    let g = graph::from_simple_form(form)?;
    let e = g.edge_count();
    if e == 0 {
        return Err(DecomposeError::EmptyForm);
    }
    let (m, n) = (4, 3);
    let mut squares = Vec::new();
    let mut provenance = Vec::new();
    let singles_except = |squares: &mut Vec<BilinearForm>, used: &dyn Fn(usize, usize) -> bool| {
        for &(i, j) in g.edges() {
            if !used(i, j) {
                squares.push(single_square(m, n, i, j));
            }
        }
    };

    match e {
        1..=7 => {
            provenance.push(format!("{e} edges: one single square per edge"));
            singles_except(&mut squares, &|_, _| false);
        }
        8 | 9 => {
            let w = graph::find_c4(&g).expect("8+ edges always contain a C4");
            provenance.push(format!("{e} edges: {w} compressed to two squares, rest single"));
            squares.extend(c4_identity(m, n, w.i, w.k, w.j, w.l)?);
            let in_c4 = move |i: usize, j: usize| {
                (i == w.i || i == w.k) && (j == w.j || j == w.l)
            };
            singles_except(&mut squares, &in_c4);
        }
        10 | 11 | 12 => {
            if let Some(rows) = graph::find_k33(&g)? {
                provenance.push(format!(
                    "{e} edges: K33 on rows {rows:?} via Hurwitz block, rest single"
                ));
                if e == 12 {
                    provenance.push("12-edge case: extension beyond the stated case analysis".into());
                }
                squares.extend(hurwitz_3x3(m, rows)?);
                let in_block = move |i: usize, _j: usize| rows.contains(&i);
                singles_except(&mut squares, &in_block);
            } else {
                // Only possible at e = 10: two edge-disjoint C4s.
                let (a, b) = graph::find_two_disjoint_c4(&g)
                    .expect("10-edge graph without K33 has two disjoint C4s");
                provenance.push(format!("{e} edges: disjoint {a} and {b}, rest single"));
                squares.extend(c4_identity(m, n, a.i, a.k, a.j, a.l)?);
                squares.extend(c4_identity(m, n, b.i, b.k, b.j, b.l)?);
                let in_c4s = move |i: usize, j: usize| {
                    ((i == a.i || i == a.k) && (j == a.j || j == a.l))
                        || ((i == b.i || i == b.k) && (j == b.j || j == b.l))
                };
                singles_except(&mut squares, &in_c4s);
            }
        }
        _ => unreachable!("4x3 graphs have at most 12 edges"),
    }
    verified(form, squares, provenance)
}

/// Columns j0 such that every monomial involving y_{j0} is a nonnegative
/// pure square x_i^2 y_{j0}^2.
pub fn detect_y_deficient(form: &BiquadraticForm) -> Vec<usize> {
    (1..=form.n())
        .filter(|&j0| qualifying_violation(form, j0).is_none())
        .collect()
}

fn qualifying_violation(
    form: &BiquadraticForm,
    j0: usize,
) -> Option<(QuarticMonomial, &'static str)> {
    for (mono, c) in form.terms() {
        if !mono.involves_y(j0) {
            continue;
        }
        if !(mono.is_pure_square() && mono.yj == j0) {
            return Some((*mono, "couples the column to another variable"));
        }
        if c.is_negative() {
            return Some((*mono, "has a negative coefficient"));
        }
    }
    None
}

/// A form split as `p1(x, y') + y_{j0}^2 * sum_i t_i x_i^2`.
#[derive(Debug, Clone)]
pub struct YDeficientSplit {
    pub j0: usize,
    /// The (m, n-1) remainder form over the surviving columns.
    pub p1: BiquadraticForm,
    /// `column_map[j' - 1]` is the original column index of p1's column j'.
    pub column_map: Vec<usize>,
    /// Nonnegative coefficients t_i of the split-off diagonal part.
    pub t: Vec<Rat>,
}

impl YDeficientSplit {
    /// Reassembles the original form exactly.
    pub fn reassemble(&self, m: usize, n: usize) -> Result<BiquadraticForm, DecomposeError> {
        let mut out = BiquadraticForm::zero(m, n)?;
        for (mono, c) in self.p1.terms() {
            out.add_term(
                mono.xi,
                mono.xk,
                self.column_map[mono.yj - 1],
                self.column_map[mono.yl - 1],
                c.clone(),
            )?;
        }
        for (i, a) in self.t.iter().enumerate() {
            if !a.is_zero() {
                out.add_term(i + 1, i + 1, self.j0, self.j0, a.clone())?;
            }
        }
        Ok(out)
    }
}

/// Exact split of a qualifying form at column j0. Requires n >= 3 so the
/// remainder still has at least two columns.
pub fn split_y_deficient(
    form: &BiquadraticForm,
    j0: usize,
) -> Result<YDeficientSplit, DecomposeError> {
    if form.n() < 3 {
        return Err(DecomposeError::WrongDimensions(form.m(), 3, form.m(), form.n()));
    }
    if j0 < 1 || j0 > form.n() {
        return Err(DecomposeError::IndexOutOfBounds(j0, form.n()));
    }
    if let Some((mono, reason)) = qualifying_violation(form, j0) {
        return Err(DecomposeError::NotYDeficient {
            j0,
            monomial: mono.to_string(),
            reason,
        });
    }
    let column_map: Vec<usize> = (1..=form.n()).filter(|&j| j != j0).collect();
    let new_col = |j: usize| column_map.iter().position(|&c| c == j).unwrap() + 1;
    let mut p1 = BiquadraticForm::zero(form.m(), form.n() - 1)?;
    let mut t = vec![Rat::zero(); form.m()];
    for (mono, c) in form.terms() {
        if mono.involves_y(j0) {
            t[mono.xi - 1] = c.clone();
        } else {
            p1.add_term(mono.xi, mono.xk, new_col(mono.yj), new_col(mono.yl), c.clone())?;
        }
    }
    Ok(YDeficientSplit {
        j0,
        p1,
        column_map,
        t,
    })
}

/// Decomposition with float squares, verified only up to a residual bound.
#[derive(Debug, Clone)]
pub struct NumericDecomposition {
    pub target: BiquadraticForm,
    pub squares: Vec<NumericBilinearForm>,
    pub max_residual: f64,
    pub provenance: Vec<String>,
}

/// Either an exactly verified decomposition or a numeric one checked to
/// tolerance and flagged as such.
#[derive(Debug, Clone)]
pub enum DecompositionOutcome {
    Exact(SosDecomposition),
    Numeric(NumericDecomposition),
}

impl DecompositionOutcome {
    pub fn square_count(&self) -> usize {
        match self {
            DecompositionOutcome::Exact(d) => d.squares.len(),
            DecompositionOutcome::Numeric(d) => d.squares.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, DecompositionOutcome::Exact(_))
    }

    pub fn provenance(&self) -> &[String] {
        match self {
            DecompositionOutcome::Exact(d) => &d.provenance,
            DecompositionOutcome::Numeric(d) => &d.provenance,
        }
    }
}

const RATIONALIZE_DENOMINATOR_BOUND: u64 = 1_000_000;

fn embed_exact(
    bl: &BilinearForm,
    m: usize,
    n: usize,
    column_map: Option<&[usize]>,
) -> Result<BilinearForm, DecomposeError> {
    let mut out = BilinearForm::zero(m, n)?;
    for (&(i, j), c) in bl.entries() {
        let col = column_map.map_or(j, |map| map[j - 1]);
        out.set(i, col, c.clone())?;
    }
    Ok(out)
}

fn embed_numeric(
    bl: &NumericBilinearForm,
    m: usize,
    n: usize,
    column_map: Option<&[usize]>,
) -> NumericBilinearForm {
    let mut coeffs = vec![0.0; m * n];
    for i in 1..=bl.m {
        for j in 1..=bl.n {
            let col = column_map.map_or(j, |map| map[j - 1]);
            coeffs[(i - 1) * n + (col - 1)] = bl.coeffs[(i - 1) * bl.n + (j - 1)];
        }
    }
    NumericBilinearForm { m, n, coeffs }
}

fn exact_to_numeric(bl: &BilinearForm, m: usize, n: usize) -> NumericBilinearForm {
    let mut coeffs = vec![0.0; m * n];
    for (&(i, j), c) in bl.entries() {
        coeffs[(i - 1) * n + (j - 1)] = c.to_f64().expect("finite");
    }
    NumericBilinearForm { m, n, coeffs }
}

/// Rank-searches a subform at ranks 1..=r_target; on success returns either
/// exactly rationalized squares or numeric ones.
fn search_block(
    block: &BiquadraticForm,
    r_target: usize,
    config: &SearchConfig,
    context: &str,
) -> Result<(Vec<BilinearForm>, Vec<NumericBilinearForm>, bool), DecomposeError> {
    if block.is_zero() {
        return Ok((Vec::new(), Vec::new(), true));
    }
    let system = gram::build_gram_system(block);
    let mut found = None;
    for r in 1..=r_target {
        if let Some(factor) = gram::low_rank_search(&system, r, config)? {
            found = Some(factor);
            break;
        }
    }
    let factor = found.ok_or_else(|| DecomposeError::SearchFailure {
        context: context.to_string(),
    })?;
    if let Some(exact) = gram::rationalize(block, &factor, RATIONALIZE_DENOMINATOR_BOUND)? {
        let numeric = exact
            .squares
            .iter()
            .map(|sq| exact_to_numeric(sq, block.m(), block.n()))
            .collect();
        Ok((exact.squares, numeric, true))
    } else {
        let numeric = gram::rows_to_bilinear(&factor, block.m(), block.n());
        Ok((Vec::new(), numeric, false))
    }
}

/// Assembles the final outcome from exact and numeric square lists; exact
/// when every piece rationalized, numeric (checked to tolerance) otherwise.
fn assemble_outcome(
    target: &BiquadraticForm,
    exact_squares: Vec<BilinearForm>,
    numeric_squares: Vec<NumericBilinearForm>,
    all_exact: bool,
    mut provenance: Vec<String>,
    tolerance: f64,
) -> Result<DecompositionOutcome, DecomposeError> {
    if all_exact {
        let dec = verified(target, exact_squares, provenance)?;
        return Ok(DecompositionOutcome::Exact(dec));
    }
    let max_residual = gram::numeric_coeff_residual(&numeric_squares, target);
    if max_residual > tolerance {
        return Err(DecomposeError::Internal(format!(
            "numeric residual {max_residual:e} exceeds tolerance {tolerance:e}"
        )));
    }
    provenance.push(format!(
        "numeric decomposition: rationalization failed, verified to max residual {max_residual:.3e}"
    ));
    Ok(DecompositionOutcome::Numeric(NumericDecomposition {
        target: target.clone(),
        squares: numeric_squares,
        max_residual,
        provenance,
    }))
}

/// Decomposes a qualifying (4,3) y-deficient form: at most 5 squares for the
/// (4,2) remainder plus one square per positive t_i, so at most 9 in total.
pub fn decompose_y_deficient(
    form: &BiquadraticForm,
    j0: usize,
    config: &SearchConfig,
) -> Result<DecompositionOutcome, DecomposeError> {
    if (form.m(), form.n()) != (4, 3) {
        return Err(DecomposeError::WrongDimensions(4, 3, form.m(), form.n()));
    }
    let split = split_y_deficient(form, j0)?;
    let mut provenance = vec![format!(
        "y-deficient split at column {j0}: (4,2) remainder plus diagonal tail"
    )];
    let (block_exact, block_numeric, block_is_exact) =
        search_block(&split.p1, 5, config, "the (4,2) remainder of the y-deficient split")?;

    let mut exact_squares: Vec<BilinearForm> = Vec::new();
    let mut numeric_squares: Vec<NumericBilinearForm> = Vec::new();
    let mut all_exact = block_is_exact;
    for sq in &block_exact {
        exact_squares.push(embed_exact(sq, 4, 3, Some(&split.column_map))?);
    }
    for sq in &block_numeric {
        numeric_squares.push(embed_numeric(sq, 4, 3, Some(&split.column_map)));
    }
    for (i, a) in split.t.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        match gram::rational_sqrt(a) {
            Some(root) => {
                let sq = single_square(4, 3, i + 1, j0).scale(&root);
                numeric_squares.push(exact_to_numeric(&sq, 4, 3));
                exact_squares.push(sq);
            }
            None => {
                all_exact = false;
                provenance.push(format!(
                    "t_{} = {} is not a rational square; emitted numerically",
                    i + 1,
                    a
                ));
                let mut coeffs = vec![0.0; 12];
                coeffs[i * 3 + (j0 - 1)] = a.to_f64().expect("finite").sqrt();
                numeric_squares.push(NumericBilinearForm { m: 4, n: 3, coeffs });
            }
        }
    }
    assemble_outcome(
        form,
        exact_squares,
        numeric_squares,
        all_exact,
        provenance,
        config.tolerance,
    )
}

/// Decomposes a diagonal (4,3) form by splitting off row 4: at most 6
/// squares for the rows-1..3 block plus up to 3 singles, so at most 9.
pub fn decompose_diagonal_rowsplit(
    form: &BiquadraticForm,
    config: &SearchConfig,
) -> Result<DecompositionOutcome, DecomposeError> {
    if (form.m(), form.n()) != (4, 3) {
        return Err(DecomposeError::WrongDimensions(4, 3, form.m(), form.n()));
    }
    for (mono, c) in form.terms() {
        if !mono.is_pure_square() {
            return Err(DecomposeError::NotDiagonal(mono.to_string()));
        }
        if c.is_negative() {
            return Err(DecomposeError::NotDiagonal(format!("{}*{}", c, mono)));
        }
    }
    let mut block = BiquadraticForm::zero(3, 3)?;
    let mut row4 = vec![Rat::zero(); 3];
    for (mono, c) in form.terms() {
        if mono.xi == 4 {
            row4[mono.yj - 1] = c.clone();
        } else {
            block.add_term(mono.xi, mono.xk, mono.yj, mono.yl, c.clone())?;
        }
    }
    let mut provenance = vec!["row split: rows 1..3 block plus row-4 singles".to_string()];

    let all_ones = {
        let mut f = BiquadraticForm::zero(3, 3).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                f.add_term(i, i, j, j, rat(1)).unwrap();
            }
        }
        f
    };
    let (block_exact, block_numeric, block_is_exact) = if block == all_ones {
        provenance.push("rows 1..3 block is the all-ones form: Hurwitz shortcut".into());
        let sqs = hurwitz_3x3(3, [1, 2, 3])?;
        let numeric = sqs.iter().map(|sq| exact_to_numeric(sq, 3, 3)).collect();
        (sqs, numeric, true)
    } else {
        search_block(&block, 6, config, "the rows-1..3 block of the row split")?
    };

    let mut exact_squares: Vec<BilinearForm> = Vec::new();
    let mut numeric_squares: Vec<NumericBilinearForm> = Vec::new();
    let mut all_exact = block_is_exact;
    for sq in &block_exact {
        exact_squares.push(embed_exact(sq, 4, 3, None)?);
    }
    for sq in &block_numeric {
        numeric_squares.push(embed_numeric(sq, 4, 3, None));
    }
    for (j, b) in row4.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        match gram::rational_sqrt(b) {
            Some(root) => {
                let sq = single_square(4, 3, 4, j + 1).scale(&root);
                numeric_squares.push(exact_to_numeric(&sq, 4, 3));
                exact_squares.push(sq);
            }
            None => {
                all_exact = false;
                provenance.push(format!(
                    "b_{} = {} is not a rational square; emitted numerically",
                    j + 1,
                    b
                ));
                let mut coeffs = vec![0.0; 12];
                coeffs[3 * 3 + j] = b.to_f64().expect("finite").sqrt();
                numeric_squares.push(NumericBilinearForm { m: 4, n: 3, coeffs });
            }
        }
    }
    assemble_outcome(
        form,
        exact_squares,
        numeric_squares,
        all_exact,
        provenance,
        config.tolerance,
    )
}

/// Strategy chosen by [`decompose_auto`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Simple,
    YDeficient,
    RowSplit,
    Gram,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Simple => "simple",
            Strategy::YDeficient => "ydeficient",
            Strategy::RowSplit => "rowsplit",
            Strategy::Gram => "gram",
        }
    }
}

/// Structural routes first (exactness preferred), numeric search last:
/// simple -> y-deficient split -> diagonal row split -> Gram search.
pub fn decompose_auto(
    form: &BiquadraticForm,
    config: &SearchConfig,
) -> Result<(DecompositionOutcome, Strategy), DecomposeError> {
    if (form.m(), form.n()) == (4, 3) && !form.is_zero() {
        if graph::from_simple_form(form).is_ok() {
            let dec = decompose_simple(form)?;
            return Ok((DecompositionOutcome::Exact(dec), Strategy::Simple));
        }
        if let Some(&j0) = detect_y_deficient(form).first() {
            return Ok((decompose_y_deficient(form, j0, config)?, Strategy::YDeficient));
        }
        if form.is_diagonal() {
            return Ok((decompose_diagonal_rowsplit(form, config)?, Strategy::RowSplit));
        }
    }
    let mn = form.m() * form.n();
    let (_, factor) = gram::min_rank_upper_bound(form, mn, config)?.ok_or_else(|| {
        DecomposeError::SearchFailure {
            context: "full Gram search up to maximum rank".to_string(),
        }
    })?;
    let provenance = vec!["full Gram rank search".to_string()];
    if let Some(mut dec) = gram::rationalize(form, &factor, RATIONALIZE_DENOMINATOR_BOUND)? {
        dec.provenance = provenance;
        return Ok((DecompositionOutcome::Exact(dec), Strategy::Gram));
    }
    let numeric_squares = gram::rows_to_bilinear(&factor, form.m(), form.n());
    let outcome = assemble_outcome(
        form,
        Vec::new(),
        numeric_squares,
        false,
        provenance,
        config.tolerance,
    )?;
    Ok((outcome, Strategy::Gram))
}

/// The diagonal (4,3) example form: 3x3 block
/// `[[1,2,1],[3,7,1],[1,1,2]]` plus unit row-4 coefficients.
pub fn example_diagonal_form() -> BiquadraticForm {
    let a = [[1, 2, 1], [3, 7, 1], [1, 1, 2]];
    let mut f = BiquadraticForm::zero(4, 3).unwrap();
    for (i, row) in a.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            f.add_term(i + 1, i + 1, j + 1, j + 1, rat(c)).unwrap();
        }
    }
    for j in 1..=3 {
        f.add_term(4, 4, j, j, rat(1)).unwrap();
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{expand, form_q, p_4_3_7, parse_form};

    #[test]
    fn c4_identity_basic() {
        let sqs = c4_identity(4, 3, 1, 2, 1, 2).unwrap();
        let expanded = expand(&sqs).unwrap();
        let want = parse_form("x1^2*y1^2 + x2^2*y2^2 + x1^2*y2^2 + x2^2*y1^2", 4, 3).unwrap();
        assert_eq!(expanded, want);
    }

    #[test]
    fn c4_identity_all_indices_exhaustive() {
        // Expansion oracle over every index choice on (4,3).
        for i in 1..=4 {
            for k in 1..=4 {
                for j in 1..=3 {
                    for l in 1..=3 {
                        if i == k || j == l {
                            continue;
                        }
                        let sqs = c4_identity(4, 3, i, k, j, l).unwrap();
                        let mut want = BiquadraticForm::zero(4, 3).unwrap();
                        for (a, b) in [(i, j), (k, l), (i, l), (k, j)] {
                            want.add_term(a, a, b, b, rat(1)).unwrap();
                        }
                        assert_eq!(expand(&sqs).unwrap(), want);
                    }
                }
            }
        }
    }

    #[test]
    fn c4_identity_rejects_degenerate() {
        assert!(matches!(
            c4_identity(4, 3, 1, 1, 1, 2),
            Err(DecomposeError::DegenerateC4(..))
        ));
    }

    #[test]
    fn hurwitz_relabeled_rows() {
        let sqs = hurwitz_3x3(4, [2, 3, 4]).unwrap();
        let mut want = BiquadraticForm::zero(4, 3).unwrap();
        for r in [2, 3, 4] {
            for j in 1..=3 {
                want.add_term(r, r, j, j, rat(1)).unwrap();
            }
        }
        assert_eq!(expand(&sqs).unwrap(), want);
        assert!(matches!(
            hurwitz_3x3(4, [1, 1, 2]),
            Err(DecomposeError::RepeatedRows(_))
        ));
    }

    #[test]
    fn simple_p437_seven_singles() {
        let dec = decompose_simple(&p_4_3_7()).unwrap();
        assert_eq!(dec.squares.len(), 7);
        assert!(verify_decomposition(&dec).unwrap().is_equal());
    }

    #[test]
    fn simple_eight_edges_six_squares() {
        let mut f = p_4_3_7();
        f.add_term(4, 4, 2, 2, rat(1)).unwrap();
        let dec = decompose_simple(&f).unwrap();
        assert_eq!(dec.squares.len(), 6);
        assert!(verify_decomposition(&dec).unwrap().is_equal());
    }

    #[test]
    fn simple_full_k43_seven_squares() {
        let mut f = BiquadraticForm::zero(4, 3).unwrap();
        for i in 1..=4 {
            for j in 1..=3 {
                f.add_term(i, i, j, j, rat(1)).unwrap();
            }
        }
        let dec = decompose_simple(&f).unwrap();
        assert_eq!(dec.squares.len(), 7);
        assert!(verify_decomposition(&dec).unwrap().is_equal());
    }

    #[test]
    fn simple_rejects_cross_terms_and_dims() {
        assert!(matches!(
            decompose_simple(&form_q()),
            Err(DecomposeError::Graph(GraphError::NotSimple(_)))
        ));
        let f = parse_form("x1^2*y1^2", 2, 2).unwrap();
        assert!(matches!(
            decompose_simple(&f),
            Err(DecomposeError::WrongDimensions(..))
        ));
    }

    #[test]
    fn detect_y_deficiency() {
        assert_eq!(detect_y_deficient(&example_diagonal_form()), vec![1, 2, 3]);
        // Q qualifies at column 1 by the literal definition: every y1-term
        // is a pure square. Columns 2 and 3 are coupled by the cross term.
        assert_eq!(detect_y_deficient(&form_q()), vec![1]);
        let coupled = parse_form(
            "x1^2*y1^2 + x2^2*y2^2 + x3^2*y3^2 + x1^2*y2^2 + x2^2*y3^2 + x1^2*y3^2 \
             + x2^2*y1^2 + x3^2*y1^2 + x3^2*y2^2 \
             + 2*x1*x2*y1*y2 + 2*x2*x3*y2*y3 + 2*x1*x3*y1*y3",
            3,
            3,
        )
        .unwrap();
        assert_eq!(detect_y_deficient(&coupled), Vec::<usize>::new());
    }

    #[test]
    fn split_prop36_form() {
        let split = split_y_deficient(&example_diagonal_form(), 3).unwrap();
        assert_eq!(split.t, vec![rat(1), rat(1), rat(2), rat(1)]);
        assert_eq!(split.column_map, vec![1, 2]);
        let mut want_p1 = BiquadraticForm::zero(4, 2).unwrap();
        for (i, cols) in [(1, [1, 2]), (2, [3, 7]), (3, [1, 1]), (4, [1, 1])] {
            want_p1.add_term(i, i, 1, 1, rat(cols[0])).unwrap();
            want_p1.add_term(i, i, 2, 2, rat(cols[1])).unwrap();
        }
        assert_eq!(split.p1, want_p1);
        assert_eq!(split.reassemble(4, 3).unwrap(), example_diagonal_form());
    }

    #[test]
    fn split_q_at_column_one() {
        let split = split_y_deficient(&form_q(), 1).unwrap();
        assert_eq!(split.t, vec![rat(1), rat(0), rat(1), rat(1)]);
        // p1 lives on (y2, y3) and keeps the cross term.
        let want = parse_form(
            "x1^2*y1^2 + x1^2*y2^2 + x2^2*y1^2 + x2^2*y2^2 + x3^2*y2^2 + x4^2*y1^2 \
             + 2*x1*x4*y1*y2",
            4,
            2,
        )
        .unwrap();
        assert_eq!(split.p1, want);
        assert_eq!(split.reassemble(4, 3).unwrap(), form_q());
    }

    #[test]
    fn split_rejects_coupled_column() {
        let err = split_y_deficient(&form_q(), 2).unwrap_err();
        match err {
            DecomposeError::NotYDeficient { j0, monomial, .. } => {
                assert_eq!(j0, 2);
                assert!(monomial.contains("x1*x4"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn y_deficient_single_term() {
        let f = parse_form("x1^2*y3^2", 4, 3).unwrap();
        let outcome = decompose_y_deficient(&f, 3, &SearchConfig::default()).unwrap();
        assert!(outcome.is_exact());
        assert_eq!(outcome.square_count(), 1);
    }

    #[test]
    fn y_deficient_q_at_most_eight() {
        let outcome = decompose_y_deficient(&form_q(), 1, &SearchConfig::default()).unwrap();
        assert!(outcome.square_count() <= 8);
    }

    #[test]
    fn rowsplit_all_ones_uses_hurwitz() {
        let mut f = BiquadraticForm::zero(4, 3).unwrap();
        for i in 1..=4 {
            for j in 1..=3 {
                f.add_term(i, i, j, j, rat(1)).unwrap();
            }
        }
        let outcome = decompose_diagonal_rowsplit(&f, &SearchConfig::default()).unwrap();
        assert!(outcome.is_exact());
        assert_eq!(outcome.square_count(), 7);
    }

    #[test]
    fn rowsplit_zero_row4() {
        let f = parse_form("x1^2*y1^2 + x2^2*y2^2", 4, 3).unwrap();
        let outcome = decompose_diagonal_rowsplit(&f, &SearchConfig::default()).unwrap();
        assert!(outcome.square_count() <= 6);
    }

    #[test]
    fn rowsplit_rejects_cross_terms() {
        assert!(matches!(
            decompose_diagonal_rowsplit(&form_q(), &SearchConfig::default()),
            Err(DecomposeError::NotDiagonal(_))
        ));
    }

    #[test]
    fn auto_strategy_selection() {
        let config = SearchConfig::default();
        let (_, s) = decompose_auto(&p_4_3_7(), &config).unwrap();
        assert_eq!(s, Strategy::Simple);
        let (_, s) = decompose_auto(&example_diagonal_form(), &config).unwrap();
        assert_eq!(s, Strategy::YDeficient);
        let (outcome, s) = decompose_auto(&form_q(), &config).unwrap();
        assert_eq!(s, Strategy::YDeficient);
        assert!(outcome.square_count() <= 8);
    }
}
