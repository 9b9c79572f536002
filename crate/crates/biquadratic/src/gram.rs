//! Gram-matrix formulation of SOS membership and a heuristic low-rank
//! factorization search.
//!
//! A form P is SOS with at most r squares iff its Gram system admits a PSD
//! solution of rank <= r. The search parameterizes the Gram matrix as
//! V^T V with V an r x mn factor and minimizes the squared constraint
//! residuals by damped Gauss-Newton steps (Levenberg-Marquardt) with
//! seeded random restarts. Search failure is always inconclusive; only
//! success is meaningful.

use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::poly::{
    expand, BilinearForm, BiquadraticForm, PolyError, QuarticMonomial, Rat, SosDecomposition,
};

#[derive(Debug, Error)]
pub enum GramError {
    #[error("rank {0} out of range 1..={1}")]
    RankOutOfRange(usize, usize),
    #[error("factor text malformed: {0}")]
    FactorFormat(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One linear constraint: the multiplicity-weighted sum of the listed Gram
/// entries must equal the target coefficient.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub monomial: QuarticMonomial,
    /// (basis index a, basis index b, multiplicity), a <= b; multiplicity is
    /// 1 on the diagonal and 2 off it.
    pub positions: Vec<(usize, usize, u8)>,
    pub target: Rat,
}

/// The mn x mn symmetric Gram variable plus its coefficient constraints.
#[derive(Debug, Clone)]
pub struct GramSystem {
    m: usize,
    n: usize,
    basis: Vec<(usize, usize)>,
    constraints: Vec<Constraint>,
}

impl GramSystem {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis_size(&self) -> usize {
        self.basis.len()
    }

    /// Basis monomials (i,j) in row-major order.
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Exact satisfaction check for a rational Gram matrix (row-major,
    /// mn x mn, assumed symmetric).
    pub fn check_exact(&self, gram: &[Vec<Rat>]) -> bool {
        let mn = self.basis.len();
        if gram.len() != mn || gram.iter().any(|row| row.len() != mn) {
            return false;
        }
        for c in &self.constraints {
            let mut acc = Rat::zero();
            for &(a, b, mult) in &c.positions {
                acc += &gram[a][b] * Rat::from_integer(BigInt::from(mult));
            }
            if acc != c.target {
                return false;
            }
        }
        true
    }
}

/// Basis index of the bilinear monomial x_i y_j.
fn basis_index(i: usize, j: usize, n: usize) -> usize {
    (i - 1) * n + (j - 1)
}

/// Builds the Gram constraint system of a form: one constraint per canonical
/// quartic monomial in bounds, with target 0 for absent monomials.
pub fn build_gram_system(form: &BiquadraticForm) -> GramSystem {
    let (m, n) = (form.m(), form.n());
    let mut basis = Vec::with_capacity(m * n);
    for i in 1..=m {
        for j in 1..=n {
            basis.push((i, j));
        }
    }
    let mn = basis.len();
    let mut constraints = Vec::new();
    // Group unordered Gram positions by the canonical monomial they expand to.
    for i in 1..=m {
        for k in i..=m {
            for j in 1..=n {
                for l in j..=n {
                    let mono = QuarticMonomial::new(i, k, j, l);
                    let mut positions = Vec::new();
                    for a in 0..mn {
                        for b in a..mn {
                            let (ia, ja) = basis[a];
                            let (ib, jb) = basis[b];
                            if QuarticMonomial::new(ia, ib, ja, jb) == mono {
                                positions.push((a, b, if a == b { 1u8 } else { 2u8 }));
                            }
                        }
                    }
                    constraints.push(Constraint {
                        monomial: mono,
                        positions,
                        target: form.coefficient(&mono),
                    });
                }
            }
        }
    }
    GramSystem {
        m,
        n,
        basis,
        constraints,
    }
}

/// Assembles the exact Gram matrix `sum_k outer(l_k)` of a square list over
/// the row-major basis. All squares must share the given dimensions.
pub fn exact_gram_of_squares(m: usize, n: usize, squares: &[BilinearForm]) -> Vec<Vec<Rat>> {
    let mn = m * n;
    let mut gram = vec![vec![Rat::zero(); mn]; mn];
    for sq in squares {
        let mut col = vec![Rat::zero(); mn];
        for (&(i, j), c) in sq.entries() {
            col[basis_index(i, j, n)] = c.clone();
        }
        for a in 0..mn {
            if col[a].is_zero() {
                continue;
            }
            for b in 0..mn {
                if col[b].is_zero() {
                    continue;
                }
                let prod = &col[a] * &col[b];
                gram[a][b] += prod;
            }
        }
    }
    gram
}

/// Search budget and step policy. All randomness derives from `base_seed`;
/// restart k uses seed `base_seed + k`. Steps are damped Gauss-Newton
/// (Levenberg-Marquardt): rejected steps back off by raising the damping,
/// accepted steps lower it again.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub base_seed: u64,
    /// Initial Levenberg-Marquardt damping.
    pub init_damping: f64,
    /// Damping ceiling; exceeding it abandons the restart.
    pub max_damping: f64,
    /// Consecutive near-zero-progress iterations before giving up a restart.
    pub stall_iterations: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_restarts: 200,
            max_iterations: 20_000,
            tolerance: 1e-9,
            base_seed: 1,
            init_damping: 1e-3,
            max_damping: 1e10,
            stall_iterations: 50,
        }
    }
}

/// Rank-r factor: one length-r column per basis monomial, stored column-major
/// (`data[c * r + t]` is coordinate t of column c).
#[derive(Debug, Clone)]
pub struct FactorMatrix {
    pub r: usize,
    pub mn: usize,
    pub data: Vec<f64>,
}

impl FactorMatrix {
    pub fn column(&self, c: usize) -> &[f64] {
        &self.data[c * self.r..(c + 1) * self.r]
    }

    /// Row k as a coefficient vector over the basis.
    pub fn row(&self, k: usize) -> Vec<f64> {
        (0..self.mn).map(|c| self.data[c * self.r + k]).collect()
    }

    /// Plain-text serialization: header `r mn`, then r rows of mn floats.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.r, self.mn);
        for k in 0..self.r {
            let row: Vec<String> = self.row(k).iter().map(|v| format!("{:.17e}", v)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GramError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GramError::FactorFormat("empty input".into()))?;
        let mut it = header.split_whitespace();
        let parse_dim = |s: Option<&str>| {
            s.and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| GramError::FactorFormat("bad header".into()))
        };
        let r = parse_dim(it.next())?;
        let mn = parse_dim(it.next())?;
        let mut data = vec![0.0; r * mn];
        for k in 0..r {
            let line = lines
                .next()
                .ok_or_else(|| GramError::FactorFormat(format!("missing row {k}")))?;
            let vals: Result<Vec<f64>, _> = line.split_whitespace().map(|v| v.parse::<f64>()).collect();
            let vals = vals.map_err(|e| GramError::FactorFormat(e.to_string()))?;
            if vals.len() != mn {
                return Err(GramError::FactorFormat(format!(
                    "row {k} has {} entries, expected {mn}",
                    vals.len()
                )));
            }
            for (c, v) in vals.into_iter().enumerate() {
                data[c * r + k] = v;
            }
        }
        Ok(FactorMatrix { r, mn, data })
    }
}

/// Numeric view of a constraint system for the optimizer.
struct NumericSystem {
    positions: Vec<(u32, u32, f64)>,
    offsets: Vec<usize>,
    targets: Vec<f64>,
}

impl NumericSystem {
    fn new(system: &GramSystem) -> Self {
        let mut positions = Vec::new();
        let mut offsets = vec![0usize];
        let mut targets = Vec::new();
        for c in system.constraints() {
            for &(a, b, mult) in &c.positions {
                positions.push((a as u32, b as u32, mult as f64));
            }
            offsets.push(positions.len());
            targets.push(c.target.to_f64().expect("finite rational"));
        }
        NumericSystem {
            positions,
            offsets,
            targets,
        }
    }

    fn num_constraints(&self) -> usize {
        self.targets.len()
    }

    /// Fills the residual vector; returns (sum of squares, max absolute).
    fn residuals(&self, r: usize, v: &[f64], res: &mut [f64]) -> (f64, f64) {
        let mut obj = 0.0;
        let mut max_res: f64 = 0.0;
        for (ci, &target) in self.targets.iter().enumerate() {
            let mut acc = 0.0;
            for &(a, b, mult) in &self.positions[self.offsets[ci]..self.offsets[ci + 1]] {
                let (a, b) = (a as usize, b as usize);
                let mut dot = 0.0;
                for t in 0..r {
                    dot += v[a * r + t] * v[b * r + t];
                }
                acc += mult * dot;
            }
            let rc = acc - target;
            res[ci] = rc;
            obj += rc * rc;
            max_res = max_res.max(rc.abs());
        }
        (obj, max_res)
    }

    /// Fills the dense Jacobian (num_constraints rows x r*mn columns).
    fn jacobian(&self, r: usize, v: &[f64], jac: &mut [f64]) {
        let dim = v.len();
        jac.iter_mut().for_each(|x| *x = 0.0);
        for ci in 0..self.targets.len() {
            let row = &mut jac[ci * dim..(ci + 1) * dim];
            for &(a, b, mult) in &self.positions[self.offsets[ci]..self.offsets[ci + 1]] {
                let (a, b) = (a as usize, b as usize);
                for t in 0..r {
                    row[a * r + t] += mult * v[b * r + t];
                    row[b * r + t] += mult * v[a * r + t];
                }
            }
        }
    }
}

/// Solves the symmetric positive-definite system given by the upper triangle
/// of `a` (row-major) in place; `None` if the Cholesky pivot fails.
fn cholesky_solve(a: &mut [f64], rhs: &[f64], dim: usize) -> Option<Vec<f64>> {
    // In-place upper Cholesky: a becomes U with A = U^T U.
    for i in 0..dim {
        for j in i..dim {
            let mut s = a[i * dim + j];
            for k in 0..i {
                s -= a[k * dim + i] * a[k * dim + j];
            }
            if i == j {
                if s <= 1e-300 {
                    return None;
                }
                a[i * dim + i] = s.sqrt();
            } else {
                a[i * dim + j] = s / a[i * dim + i];
            }
        }
    }
    let mut x = rhs.to_vec();
    for i in 0..dim {
        for k in 0..i {
            x[i] -= a[k * dim + i] * x[k];
        }
        x[i] /= a[i * dim + i];
    }
    for i in (0..dim).rev() {
        for k in (i + 1)..dim {
            x[i] -= a[i * dim + k] * x[k];
        }
        x[i] /= a[i * dim + i];
    }
    Some(x)
}

/// Max absolute constraint residual of a factor, recomputed from scratch.
pub fn max_residual(system: &GramSystem, factor: &FactorMatrix) -> f64 {
    let numeric = NumericSystem::new(system);
    let mut res = vec![0.0; numeric.num_constraints()];
    numeric.residuals(factor.r, &factor.data, &mut res).1
}

/// Searches for a rank-r factor satisfying every constraint within the
/// configured tolerance. Returns `None` on failure; failure is inconclusive
/// evidence, never a rank lower bound.
pub fn low_rank_search(
    system: &GramSystem,
    r: usize,
    config: &SearchConfig,
) -> Result<Option<FactorMatrix>, GramError> {
    let mn = system.basis_size();
    if r < 1 || r > mn {
        return Err(GramError::RankOutOfRange(r, mn));
    }
    let numeric = NumericSystem::new(system);
    let dim = r * mn;
    let nc = numeric.num_constraints();
    for restart in 0..config.max_restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.base_seed.wrapping_add(restart as u64));
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut res = vec![0.0; nc];
        let (mut obj, mut max_res) = numeric.residuals(r, &v, &mut res);
        let mut jac = vec![0.0; nc * dim];
        let mut trial_res = vec![0.0; nc];
        let mut lambda = config.init_damping;
        let mut stalled = 0usize;
        'iterations: for _ in 0..config.max_iterations {
            if max_res <= config.tolerance {
                break;
            }
            numeric.jacobian(r, &v, &mut jac);
            // Normal equations: (J^T J + lambda I) dx = -J^T res.
            let mut jtj = vec![0.0; dim * dim];
            let mut rhs = vec![0.0; dim];
            for ci in 0..nc {
                let row = &jac[ci * dim..(ci + 1) * dim];
                for i in 0..dim {
                    let ji = row[i];
                    if ji == 0.0 {
                        continue;
                    }
                    rhs[i] -= ji * res[ci];
                    for j in i..dim {
                        jtj[i * dim + j] += ji * row[j];
                    }
                }
            }
            // Raise the damping until a step is accepted (backtracking).
            let prev_obj = obj;
            loop {
                let mut a = jtj.clone();
                for i in 0..dim {
                    a[i * dim + i] += lambda;
                }
                let step_ok = cholesky_solve(&mut a, &rhs, dim).and_then(|dx| {
                    let trial: Vec<f64> = v.iter().zip(&dx).map(|(vi, di)| vi + di).collect();
                    let (o, m) = numeric.residuals(r, &trial, &mut trial_res);
                    (o < obj).then_some((trial, o, m))
                });
                match step_ok {
                    Some((trial, o, m)) => {
                        v = trial;
                        obj = o;
                        max_res = m;
                        std::mem::swap(&mut res, &mut trial_res);
                        lambda = (lambda * 0.3).max(1e-12);
                        break;
                    }
                    None => {
                        lambda *= 10.0;
                        if lambda > config.max_damping {
                            break 'iterations;
                        }
                    }
                }
            }
            // Relative progress test: a plateau at positive objective means
            // the restart is stuck, while the slow power-law tail near a
            // genuine solution still clears the threshold every iteration.
            if prev_obj - obj < 1e-4 * prev_obj {
                stalled += 1;
                if stalled >= config.stall_iterations {
                    break;
                }
            } else {
                stalled = 0;
            }
        }
        if max_res <= config.tolerance {
            let factor = FactorMatrix { r, mn, data: v };
            // Independent recheck, not the optimizer's own bookkeeping.
            if max_residual(system, &factor) <= config.tolerance {
                return Ok(Some(factor));
            }
        }
    }
    Ok(None)
}

/// Tries ranks 1..=r_max in order and returns the first success.
pub fn min_rank_upper_bound(
    form: &BiquadraticForm,
    r_max: usize,
    config: &SearchConfig,
) -> Result<Option<(usize, FactorMatrix)>, GramError> {
    let system = build_gram_system(form);
    let mn = system.basis_size();
    if r_max > mn {
        return Err(GramError::RankOutOfRange(r_max, mn));
    }
    for r in 1..=r_max {
        if let Some(factor) = low_rank_search(&system, r, config)? {
            return Ok(Some((r, factor)));
        }
    }
    Ok(None)
}

/// Bilinear form with float coefficients, produced from factor rows.
#[derive(Debug, Clone)]
pub struct NumericBilinearForm {
    pub m: usize,
    pub n: usize,
    /// Coefficient of x_i y_j at row-major index (i-1)*n + (j-1).
    pub coeffs: Vec<f64>,
}

impl fmt::Display for NumericBilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 1..=self.m {
            for j in 1..=self.n {
                let c = self.coeffs[basis_index(i, j, self.n)];
                if c.abs() < 1e-15 {
                    continue;
                }
                if first {
                    write!(f, "{:.12}*x{}*y{}", c, i, j)?;
                    first = false;
                } else if c >= 0.0 {
                    write!(f, " + {:.12}*x{}*y{}", c, i, j)?;
                } else {
                    write!(f, " - {:.12}*x{}*y{}", -c, i, j)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Interprets each factor row as a bilinear form; rows that are numerically
/// zero are dropped.
pub fn rows_to_bilinear(factor: &FactorMatrix, m: usize, n: usize) -> Vec<NumericBilinearForm> {
    assert_eq!(factor.mn, m * n, "factor size does not match dimensions");
    (0..factor.r)
        .map(|k| NumericBilinearForm {
            m,
            n,
            coeffs: factor.row(k),
        })
        .filter(|b| b.coeffs.iter().any(|c| c.abs() >= 1e-12))
        .collect()
}

/// Max absolute coefficient difference between `sum l_k^2` and the target,
/// over all canonical monomials in bounds.
pub fn numeric_coeff_residual(squares: &[NumericBilinearForm], target: &BiquadraticForm) -> f64 {
    let (m, n) = (target.m(), target.n());
    let mut max_res: f64 = 0.0;
    for i in 1..=m {
        for k in i..=m {
            for j in 1..=n {
                for l in j..=n {
                    let mono = QuarticMonomial::new(i, k, j, l);
                    let mut acc = 0.0;
                    for sq in squares {
                        let c = |a: usize, b: usize| sq.coeffs[basis_index(a, b, n)];
                        // Total coefficient of the canonical monomial within
                        // (sum c_ab x_a y_b)^2.
                        acc += if i == k && j == l {
                            c(i, j) * c(i, j)
                        } else if i == k || j == l {
                            2.0 * c(i, j) * c(k, l)
                        } else {
                            2.0 * (c(i, j) * c(k, l) + c(i, l) * c(k, j))
                        };
                    }
                    let t = target.coefficient(&mono).to_f64().expect("finite");
                    max_res = max_res.max((acc - t).abs());
                }
            }
        }
    }
    max_res
}

/// Nearest rational to `x` with denominator at most `bound`, by continued
/// fraction convergents.
pub fn rational_approx(x: f64, bound: u64) -> Rat {
    assert!(bound >= 1);
    if !x.is_finite() {
        return Rat::zero();
    }
    let negative = x < 0.0;
    let mut x = x.abs();
    let (mut h0, mut k0) = (BigInt::zero(), BigInt::one());
    let (mut h1, mut k1) = (BigInt::one(), BigInt::zero());
    let bound = BigInt::from(bound);
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e18 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > bound {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = x - a;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    if k1.is_zero() {
        return Rat::zero();
    }
    let num = if negative { -h1 } else { h1 };
    Rat::new(num, k1)
}

/// Rounds a factor to exact rationals and returns the decomposition only if
/// it verifies exactly against the target form.
pub fn rationalize(
    target: &BiquadraticForm,
    factor: &FactorMatrix,
    denominator_bound: u64,
) -> Result<Option<SosDecomposition>, GramError> {
    let (m, n) = (target.m(), target.n());
    let mut squares = Vec::new();
    for k in 0..factor.r {
        let row = factor.row(k);
        let mut bl = BilinearForm::zero(m, n)?;
        for i in 1..=m {
            for j in 1..=n {
                let c = rational_approx(row[basis_index(i, j, n)], denominator_bound);
                if !c.is_zero() {
                    bl.set(i, j, c)?;
                }
            }
        }
        if !bl.is_zero() {
            squares.push(bl);
        }
    }
    let expanded = if squares.is_empty() {
        BiquadraticForm::zero(m, n)?
    } else {
        expand(&squares)?
    };
    if expanded == *target {
        Ok(Some(SosDecomposition::new(target.clone(), squares)))
    } else {
        Ok(None)
    }
}

/// True if the rational is the square of a rational; returns the nonnegative
/// square root when it is.
pub fn rational_sqrt(value: &Rat) -> Option<Rat> {
    if value.is_negative() {
        return None;
    }
    if value.is_zero() {
        return Some(Rat::zero());
    }
    let num = value.numer();
    let den = value.denom();
    let ns = num.sqrt();
    let ds = den.sqrt();
    if &(&ns * &ns) == num && &(&ds * &ds) == den {
        Some(Rat::new(ns, ds))
    } else {
        None
    }
}
