//! Exact representation, parsing, evaluation, and symbolic expansion of
//! biquadratic forms, bilinear forms, and sum-of-squares decompositions.
//!
//! A biquadratic form is a homogeneous polynomial of degree (2,2) in two
//! variable groups `x = (x_1..x_m)` and `y = (y_1..y_n)`. All coefficients
//! are exact rationals; floating point lives only in the rank-search module.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Exact rational scalar used throughout the exact modules.
pub type Rat = BigRational;

/// Convenience constructor for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Convenience constructor for a ratio `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Smallest and largest supported dimension for either variable group.
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension {0} out of supported range {MIN_DIM}..={MAX_DIM}")]
    BadDimension(usize),
    #[error("index {index} out of bounds for dimension {dim}")]
    IndexOutOfBounds { index: usize, dim: usize },
    #[error("dimension mismatch: ({m1},{n1}) vs ({m2},{n2})")]
    DimensionMismatch {
        m1: usize,
        n1: usize,
        m2: usize,
        n2: usize,
    },
    #[error("vector length {got} does not match dimension {want}")]
    VectorLength { got: usize, want: usize },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("term ending at byte {pos} has x-degree {xdeg} and y-degree {ydeg}, expected 2 and 2")]
    Degree {
        pos: usize,
        xdeg: usize,
        ydeg: usize,
    },
    #[error("family index {0} out of range 1..=7")]
    FamilyIndex(usize),
}

/// Canonical quartic monomial `x_xi x_xk y_yj y_yl` with `xi <= xk`, `yj <= yl`.
/// Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuarticMonomial {
    pub xi: usize,
    pub xk: usize,
    pub yj: usize,
    pub yl: usize,
}

impl QuarticMonomial {
    /// Canonicalizes the index pairs; does not bounds-check.
    pub fn new(i: usize, k: usize, j: usize, l: usize) -> Self {
        let (xi, xk) = if i <= k { (i, k) } else { (k, i) };
        let (yj, yl) = if j <= l { (j, l) } else { (l, j) };
        QuarticMonomial { xi, xk, yj, yl }
    }

    pub fn in_bounds(&self, m: usize, n: usize) -> bool {
        self.xi >= 1 && self.xk <= m && self.yj >= 1 && self.yl <= n
    }

    /// True for monomials of the shape `x_i^2 y_j^2`.
    pub fn is_pure_square(&self) -> bool {
        self.xi == self.xk && self.yj == self.yl
    }

    pub fn involves_y(&self, j: usize) -> bool {
        self.yj == j || self.yl == j
    }
}

impl fmt::Display for QuarticMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.xi == self.xk {
            write!(f, "x{}^2", self.xi)?;
        } else {
            write!(f, "x{}*x{}", self.xi, self.xk)?;
        }
        if self.yj == self.yl {
            write!(f, "*y{}^2", self.yj)
        } else {
            write!(f, "*y{}*y{}", self.yj, self.yl)
        }
    }
}

/// Homogeneous (2,2)-form with exact rational coefficients.
///
/// The stored value is always the TOTAL coefficient of the canonical
/// monomial, and zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiquadraticForm {
    m: usize,
    n: usize,
    coeffs: BTreeMap<QuarticMonomial, Rat>,
}

fn check_dim(d: usize) -> Result<(), PolyError> {
    if !(MIN_DIM..=MAX_DIM).contains(&d) {
        return Err(PolyError::BadDimension(d));
    }
    Ok(())
}

impl BiquadraticForm {
    pub fn zero(m: usize, n: usize) -> Result<Self, PolyError> {
        check_dim(m)?;
        check_dim(n)?;
        Ok(BiquadraticForm {
            m,
            n,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `c` to the total coefficient of the canonical monomial
    /// `x_i x_k y_j y_l`.
    pub fn add_term(&mut self, i: usize, k: usize, j: usize, l: usize, c: Rat) -> Result<(), PolyError> {
        let mono = QuarticMonomial::new(i, k, j, l);
        if !mono.in_bounds(self.m, self.n) {
            let (index, dim) = if mono.xk > self.m {
                (mono.xk, self.m)
            } else {
                (mono.yl, self.n)
            };
            return Err(PolyError::IndexOutOfBounds { index, dim });
        }
        let entry = self.coeffs.entry(mono).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&mono);
        }
        Ok(())
    }

    /// Total coefficient of a monomial (zero if absent).
    pub fn coefficient(&self, mono: &QuarticMonomial) -> Rat {
        self.coeffs.get(mono).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QuarticMonomial, &Rat)> {
        self.coeffs.iter()
    }

    /// Exact value of the polynomial at a rational point.
    pub fn evaluate(&self, x: &[Rat], y: &[Rat]) -> Result<Rat, PolyError> {
        if x.len() != self.m {
            return Err(PolyError::VectorLength {
                got: x.len(),
                want: self.m,
            });
        }
        if y.len() != self.n {
            return Err(PolyError::VectorLength {
                got: y.len(),
                want: self.n,
            });
        }
        let mut acc = Rat::zero();
        for (mono, c) in &self.coeffs {
            acc += c * &x[mono.xi - 1] * &x[mono.xk - 1] * &y[mono.yj - 1] * &y[mono.yl - 1];
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rat) -> BiquadraticForm {
        if c.is_zero() {
            return BiquadraticForm {
                m: self.m,
                n: self.n,
                coeffs: BTreeMap::new(),
            };
        }
        BiquadraticForm {
            m: self.m,
            n: self.n,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &BiquadraticForm) -> Result<BiquadraticForm, PolyError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &BiquadraticForm) -> Result<BiquadraticForm, PolyError> {
        self.combine(other, true)
    }

    fn combine(&self, other: &BiquadraticForm, negate: bool) -> Result<BiquadraticForm, PolyError> {
        if self.m != other.m || self.n != other.n {
            return Err(PolyError::DimensionMismatch {
                m1: self.m,
                n1: self.n,
                m2: other.m,
                n2: other.n,
            });
        }
        let mut out = self.clone();
        for (mono, c) in &other.coeffs {
            let c = if negate { -c.clone() } else { c.clone() };
            let entry = out.coeffs.entry(*mono).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                out.coeffs.remove(mono);
            }
        }
        Ok(out)
    }

    /// True if every monomial is a pure square `x_i^2 y_j^2`.
    pub fn is_diagonal(&self) -> bool {
        self.coeffs.keys().all(|mono| mono.is_pure_square())
    }

    /// Parses a form from text. See the crate-level grammar description.
    pub fn parse(text: &str, m: usize, n: usize) -> Result<Self, PolyError> {
        parse_form(text, m, n)
    }
}

impl fmt::Display for BiquadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, (mono, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !abs.is_one() {
                write!(f, "{}*", abs)?;
            }
            write!(f, "{}", mono)?;
        }
        Ok(())
    }
}

/// Bilinear form `l = sum b_ij x_i y_j` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    m: usize,
    n: usize,
    coeffs: BTreeMap<(usize, usize), Rat>,
}

impl BilinearForm {
    pub fn zero(m: usize, n: usize) -> Result<Self, PolyError> {
        check_dim(m)?;
        check_dim(n)?;
        Ok(BilinearForm {
            m,
            n,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn set(&mut self, i: usize, j: usize, c: Rat) -> Result<(), PolyError> {
        if i < 1 || i > self.m {
            return Err(PolyError::IndexOutOfBounds { index: i, dim: self.m });
        }
        if j < 1 || j > self.n {
            return Err(PolyError::IndexOutOfBounds { index: j, dim: self.n });
        }
        if c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
        Ok(())
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Rat {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.coeffs.iter()
    }

    pub fn evaluate(&self, x: &[Rat], y: &[Rat]) -> Result<Rat, PolyError> {
        if x.len() != self.m {
            return Err(PolyError::VectorLength {
                got: x.len(),
                want: self.m,
            });
        }
        if y.len() != self.n {
            return Err(PolyError::VectorLength {
                got: y.len(),
                want: self.n,
            });
        }
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.coeffs {
            acc += c * &x[i - 1] * &y[j - 1];
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rat) -> BilinearForm {
        if c.is_zero() {
            return BilinearForm {
                m: self.m,
                n: self.n,
                coeffs: BTreeMap::new(),
            };
        }
        BilinearForm {
            m: self.m,
            n: self.n,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Builds a bilinear form from `(i, j, coeff)` triples.
    pub fn from_triples(m: usize, n: usize, triples: &[(usize, usize, Rat)]) -> Result<Self, PolyError> {
        let mut out = BilinearForm::zero(m, n)?;
        for (i, j, c) in triples {
            let cur = out.coefficient(*i, *j);
            out.set(*i, *j, cur + c.clone())?;
        }
        Ok(out)
    }

    /// Parses a bilinear form: same grammar as biquadratic forms but each
    /// term must have x-degree 1 and y-degree 1.
    pub fn parse(text: &str, m: usize, n: usize) -> Result<Self, PolyError> {
        parse_bilinear(text, m, n)
    }
}

impl fmt::Display for BilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(i, j), c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !abs.is_one() {
                write!(f, "{}*", abs)?;
            }
            write!(f, "x{}*y{}", i, j)?;
        }
        Ok(())
    }
}

/// Exact sum of squares `sum_k l_k^2`, canonicalized. The empty sequence
/// yields the zero form; all squares must share dimensions.
pub fn expand(squares: &[BilinearForm]) -> Result<BiquadraticForm, PolyError> {
    let (m, n) = match squares.first() {
        Some(s) => (s.m, s.n),
        None => return BiquadraticForm::zero(MIN_DIM, MIN_DIM),
    };
    let mut out = BiquadraticForm::zero(m, n)?;
    for sq in squares {
        if sq.m != m || sq.n != n {
            return Err(PolyError::DimensionMismatch {
                m1: m,
                n1: n,
                m2: sq.m,
                n2: sq.n,
            });
        }
        for (&(i1, j1), c1) in sq.coeffs.iter() {
            for (&(i2, j2), c2) in sq.coeffs.iter() {
                out.add_term(i1, i2, j1, j2, c1 * c2)?;
            }
        }
    }
    Ok(out)
}

/// A target form together with a claimed list of squares and provenance notes.
#[derive(Debug, Clone)]
pub struct SosDecomposition {
    pub target: BiquadraticForm,
    pub squares: Vec<BilinearForm>,
    pub provenance: Vec<String>,
}

impl SosDecomposition {
    pub fn new(target: BiquadraticForm, squares: Vec<BilinearForm>) -> Self {
        SosDecomposition {
            target,
            squares,
            provenance: Vec::new(),
        }
    }
}

/// Outcome of an exact decomposition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Differs(BiquadraticForm),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

/// Returns `Equal` iff `expand(squares) - target` is the zero form,
/// otherwise the nonzero difference.
pub fn verify_decomposition(dec: &SosDecomposition) -> Result<Verdict, PolyError> {
    let expanded = if dec.squares.is_empty() {
        BiquadraticForm::zero(dec.target.m, dec.target.n)?
    } else {
        expand(&dec.squares)?
    };
    let diff = expanded.sub(&dec.target)?;
    if diff.is_zero() {
        Ok(Verdict::Equal)
    } else {
        Ok(Verdict::Differs(diff))
    }
}

/// The first seven simple forms P_{4,3,s} on (m,n) = (4,3).
pub fn simple_family(s: usize) -> Result<BiquadraticForm, PolyError> {
    // Edge order fixed by the source family listing.
    const EDGES: [(usize, usize); 7] = [(1, 1), (2, 2), (3, 3), (1, 2), (2, 3), (3, 1), (4, 1)];
    if !(1..=7).contains(&s) {
        return Err(PolyError::FamilyIndex(s));
    }
    let mut form = BiquadraticForm::zero(4, 3)?;
    for &(i, j) in EDGES.iter().take(s) {
        form.add_term(i, i, j, j, rat(1))?;
    }
    Ok(form)
}

/// The seven-term extremal simple form P_{4,3,7}.
pub fn p_4_3_7() -> BiquadraticForm {
    simple_family(7).expect("static form")
}

/// The eight-square form Q = P_{4,3,7} + (x4*y2 + x1*y3)^2: nine unit pure
/// squares plus the cross term 2*x1*x4*y2*y3.
pub fn form_q() -> BiquadraticForm {
    let mut q = p_4_3_7();
    for (i, j) in [(4, 2), (1, 3)] {
        q.add_term(i, i, j, j, rat(1)).expect("static form");
    }
    q.add_term(1, 4, 2, 3, rat(2)).expect("static form");
    q
}

/// The eight squares from the explicit decomposition of Q.
pub fn q_eight_squares() -> Vec<BilinearForm> {
    let one = || rat(1);
    let single = |i: usize, j: usize| {
        BilinearForm::from_triples(4, 3, &[(i, j, one())]).expect("static form")
    };
    let mixed = BilinearForm::from_triples(4, 3, &[(1, 3, one()), (4, 2, one())]).expect("static form");
    vec![
        single(1, 1),
        single(4, 1),
        single(1, 2),
        mixed,
        single(2, 2),
        single(2, 3),
        single(3, 1),
        single(3, 3),
    ]
}

/// Result of a randomized nonnegativity check: `None` means no
/// counterexample was found (heuristic evidence only, never a proof).
pub fn psd_sample_check(
    form: &BiquadraticForm,
    trials: usize,
    seed: u64,
) -> Option<(Vec<Rat>, Vec<Rat>, Rat)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |len: usize, rng: &mut ChaCha8Rng| -> Vec<Rat> {
        (0..len)
            .map(|_| {
                let num: i64 = rng.gen_range(-12..=12);
                let den: i64 = rng.gen_range(1..=6);
                ratio(num, den)
            })
            .collect()
    };
    for _ in 0..trials {
        let x = sample(form.m, &mut rng);
        let y = sample(form.n, &mut rng);
        let v = form.evaluate(&x, &y).expect("lengths match");
        if v.is_negative() {
            return Some((x, y, v));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone)]
struct RawTerm {
    coeff: Rat,
    xs: Vec<usize>,
    ys: Vec<usize>,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn integer(&mut self) -> Result<i64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| self.err("integer overflow"))
    }

    fn rational(&mut self) -> Result<Rat, PolyError> {
        let num = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if den <= 0 {
                return Err(self.err("denominator must be positive"));
            }
            Ok(ratio(num, den))
        } else {
            Ok(rat(num))
        }
    }

    /// factor := ('x'|'y') integer ['^2']
    fn factor(&mut self, term: &mut RawTerm) -> Result<(), PolyError> {
        let var = match self.peek() {
            Some(b'x') => b'x',
            Some(b'y') => b'y',
            _ => return Err(self.err("expected variable factor 'x<i>' or 'y<j>'")),
        };
        self.pos += 1;
        let idx = self.integer()?;
        if idx < 1 {
            return Err(self.err("variable index must be >= 1"));
        }
        let mut power = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(b'2') => {
                    self.pos += 1;
                    power = 2;
                }
                _ => return Err(self.err("only exponent 2 is allowed")),
            }
        }
        let list = if var == b'x' { &mut term.xs } else { &mut term.ys };
        for _ in 0..power {
            list.push(idx as usize);
        }
        Ok(())
    }

    /// term := [rational ['*']] factor ('*' factor)*
    fn term(&mut self, sign_negative: bool) -> Result<RawTerm, PolyError> {
        let mut out = RawTerm {
            coeff: rat(1),
            xs: Vec::new(),
            ys: Vec::new(),
            end: 0,
        };
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                out.coeff = self.rational()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                }
            }
            _ => {}
        }
        self.factor(&mut out)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut out)?;
        }
        if sign_negative {
            out.coeff = -out.coeff;
        }
        out.end = self.pos;
        Ok(out)
    }

    fn form(&mut self) -> Result<Vec<RawTerm>, PolyError> {
        let mut terms = Vec::new();
        // Special case: the zero form prints as "0".
        if self.peek() == Some(b'0') {
            let rest = &self.bytes[self.pos + 1..];
            if rest.iter().all(|b| b.is_ascii_whitespace()) {
                self.pos = self.bytes.len();
                return Ok(terms);
            }
        }
        let mut negative = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negative = true;
        }
        loop {
            terms.push(self.term(negative)?);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                None => break,
                Some(_) => return Err(self.err("expected '+', '-', or end of input")),
            }
        }
        Ok(terms)
    }
}

fn parse_terms(text: &str) -> Result<Vec<RawTerm>, PolyError> {
    let mut p = Parser::new(text);
    p.form()
}

/// Parses a biquadratic form. Every term must have total x-degree 2 and
/// y-degree 2; like terms are merged and zero coefficients dropped.
pub fn parse_form(text: &str, m: usize, n: usize) -> Result<BiquadraticForm, PolyError> {
    let mut form = BiquadraticForm::zero(m, n)?;
    for t in parse_terms(text)? {
        if t.xs.len() != 2 || t.ys.len() != 2 {
            return Err(PolyError::Degree {
                pos: t.end,
                xdeg: t.xs.len(),
                ydeg: t.ys.len(),
            });
        }
        for &i in &t.xs {
            if i > m {
                return Err(PolyError::IndexOutOfBounds { index: i, dim: m });
            }
        }
        for &j in &t.ys {
            if j > n {
                return Err(PolyError::IndexOutOfBounds { index: j, dim: n });
            }
        }
        form.add_term(t.xs[0], t.xs[1], t.ys[0], t.ys[1], t.coeff)?;
    }
    Ok(form)
}

/// Parses a bilinear form: each term must have x-degree 1 and y-degree 1.
pub fn parse_bilinear(text: &str, m: usize, n: usize) -> Result<BilinearForm, PolyError> {
    let mut out = BilinearForm::zero(m, n)?;
    for t in parse_terms(text)? {
        if t.xs.len() != 1 || t.ys.len() != 1 {
            return Err(PolyError::Degree {
                pos: t.end,
                xdeg: t.xs.len(),
                ydeg: t.ys.len(),
            });
        }
        let (i, j) = (t.xs[0], t.ys[0]);
        if i > m {
            return Err(PolyError::IndexOutOfBounds { index: i, dim: m });
        }
        if j > n {
            return Err(PolyError::IndexOutOfBounds { index: j, dim: n });
        }
        let cur = out.coefficient(i, j);
        out.set(i, j, cur + t.coeff)?;
    }
    Ok(out)
}

/// Infers the smallest supported dimensions covering all indices in `text`.
/// Used by the CLI when explicit dimensions are not given.
pub fn infer_dims(text: &str) -> Result<(usize, usize), PolyError> {
    let mut m = MIN_DIM;
    let mut n = MIN_DIM;
    for t in parse_terms(text)? {
        for &i in &t.xs {
            m = m.max(i);
        }
        for &j in &t.ys {
            n = n.max(j);
        }
    }
    Ok((m, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_monomial() {
        let f = parse_form("x1^2*y1^2", 2, 2).unwrap();
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f.coefficient(&QuarticMonomial::new(1, 1, 1, 1)), rat(1));
    }

    #[test]
    fn parse_q_text() {
        let text = "x1^2*y1^2 + x2^2*y2^2 + x3^2*y3^2 + x1^2*y2^2 + x2^2*y3^2 \
                    + x3^2*y1^2 + x4^2*y1^2 + x4^2*y2^2 + x1^2*y3^2 + 2*x1*x4*y2*y3";
        let f = parse_form(text, 4, 3).unwrap();
        assert_eq!(f, form_q());
        assert_eq!(f.coefficient(&QuarticMonomial::new(1, 4, 2, 3)), rat(2));
        assert_eq!(f.num_terms(), 10);
    }

    #[test]
    fn parse_rejects_bad_degree() {
        assert!(matches!(
            parse_form("x1^3*y1", 2, 2),
            Err(PolyError::Syntax { .. }) | Err(PolyError::Degree { .. })
        ));
        assert!(matches!(
            parse_form("x1*x1*x1*y1*y1", 2, 2),
            Err(PolyError::Degree { .. })
        ));
    }

    #[test]
    fn parse_reports_out_of_bounds() {
        assert_eq!(
            parse_form("x3^2*y1^2", 2, 2),
            Err(PolyError::IndexOutOfBounds { index: 3, dim: 2 })
        );
    }

    #[test]
    fn evaluate_q_at_unit_point() {
        let q = form_q();
        let x = vec![rat(1), rat(0), rat(0), rat(0)];
        let y = vec![rat(1), rat(0), rat(0)];
        assert_eq!(q.evaluate(&x, &y).unwrap(), rat(1));
    }

    #[test]
    fn evaluate_q_derived_point() {
        // Term-by-term oracle over Q's ten stored terms at
        // x = (1,0,0,1), y = (0,1,1):
        //   x1^2y2^2=1, x1^2y3^2=1, x4^2y2^2=1, 2*x1x4y2y3=2 -> total 5.
        let q = form_q();
        let x = vec![rat(1), rat(0), rat(0), rat(1)];
        let y = vec![rat(0), rat(1), rat(1)];
        assert_eq!(q.evaluate(&x, &y).unwrap(), rat(5));
    }

    #[test]
    fn evaluate_zero_form() {
        let z = BiquadraticForm::zero(3, 3).unwrap();
        let x = vec![rat(2), rat(3), rat(4)];
        let y = vec![rat(5), rat(6), rat(7)];
        assert_eq!(z.evaluate(&x, &y).unwrap(), rat(0));
    }

    #[test]
    fn expand_hurwitz_squares() {
        let one = rat(1);
        let sqs = vec![
            BilinearForm::from_triples(3, 3, &[(1, 1, one.clone()), (2, 2, one.clone()), (3, 3, one.clone())]).unwrap(),
            BilinearForm::from_triples(3, 3, &[(2, 3, one.clone()), (3, 2, -one.clone())]).unwrap(),
            BilinearForm::from_triples(3, 3, &[(3, 1, one.clone()), (1, 3, -one.clone())]).unwrap(),
            BilinearForm::from_triples(3, 3, &[(1, 2, one.clone()), (2, 1, -one.clone())]).unwrap(),
        ];
        let expanded = expand(&sqs).unwrap();
        let mut all_ones = BiquadraticForm::zero(3, 3).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                all_ones.add_term(i, i, j, j, rat(1)).unwrap();
            }
        }
        assert_eq!(expanded, all_ones);
    }

    #[test]
    fn expand_q_eight_squares() {
        assert_eq!(expand(&q_eight_squares()).unwrap(), form_q());
    }

    #[test]
    fn expand_single_square() {
        let sq = BilinearForm::from_triples(2, 2, &[(1, 2, rat(1))]).unwrap();
        let f = expand(&[sq]).unwrap();
        let mut want = BiquadraticForm::zero(2, 2).unwrap();
        want.add_term(1, 1, 2, 2, rat(1)).unwrap();
        assert_eq!(f, want);
    }

    #[test]
    fn verify_thm41_against_p437_gives_difference() {
        let dec = SosDecomposition::new(p_4_3_7(), q_eight_squares());
        match verify_decomposition(&dec).unwrap() {
            Verdict::Differs(diff) => {
                // (x4y2 + x1y3)^2 expanded
                let want = parse_form("x4^2*y2^2 + x1^2*y3^2 + 2*x1*x4*y2*y3", 4, 3).unwrap();
                assert_eq!(diff, want);
            }
            Verdict::Equal => panic!("expected difference"),
        }
    }

    #[test]
    fn verify_empty_against_zero() {
        let dec = SosDecomposition::new(BiquadraticForm::zero(2, 2).unwrap(), vec![]);
        assert!(verify_decomposition(&dec).unwrap().is_equal());
    }

    #[test]
    fn simple_family_values() {
        let f3 = simple_family(3).unwrap();
        assert_eq!(f3, parse_form("x1^2*y1^2 + x2^2*y2^2 + x3^2*y3^2", 4, 3).unwrap());
        let f7 = simple_family(7).unwrap();
        assert_eq!(f7.num_terms(), 7);
        assert_eq!(simple_family(0), Err(PolyError::FamilyIndex(0)));
        assert_eq!(simple_family(8), Err(PolyError::FamilyIndex(8)));
    }

    #[test]
    fn psd_sampling() {
        assert!(psd_sample_check(&form_q(), 1000, 7).is_none());
        let indef = parse_form("x1^2*y1^2 - x2^2*y2^2", 2, 2).unwrap();
        let hit = psd_sample_check(&indef, 5000, 7);
        assert!(hit.is_some());
        let (x, y, v) = hit.unwrap();
        assert!(v.is_negative());
        assert_eq!(indef.evaluate(&x, &y).unwrap(), v);
        let zero = BiquadraticForm::zero(2, 2).unwrap();
        assert!(psd_sample_check(&zero, 100, 7).is_none());
    }

    #[test]
    fn print_parse_round_trip() {
        let q = form_q();
        let printed = q.to_string();
        assert_eq!(parse_form(&printed, 4, 3).unwrap(), q);
        let f = parse_form("-1/2*x1^2*y1^2 + 3*x1*x2*y1*y2", 2, 2).unwrap();
        assert_eq!(parse_form(&f.to_string(), 2, 2).unwrap(), f);
    }
}
