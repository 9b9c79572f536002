//! Machine-checkable certificates of SOS-rank lower bounds.
//!
//! A certificate fixes a target form and a rank r, then derives, from the
//! form's absent monomials, more pairwise-orthogonal nonzero Gram vectors
//! than an r-dimensional space can hold. The checker replays the whole
//! derivation in order; a valid certificate proves that no SOS decomposition
//! of the target with at most r squares exists.
//!
//! The derivation rules: in any decomposition `P = sum l_k^2` with
//! coefficient vectors `v_ij = (a_ij^(1), ..., a_ij^(r))`, an absent monomial
//! forces the multiplicity-weighted sum of the corresponding inner products
//! to vanish. When that sum reduces to a single inner product — directly,
//! via a zero vector, or via an inner product already shown to vanish — the
//! remaining pair is orthogonal. A cross monomial whose coefficient meets
//! the Cauchy-Schwarz bound with equality merges two vectors into one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{Signed, Zero};
use thiserror::Error;

use crate::poly::{BiquadraticForm, QuarticMonomial, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("pure-square coefficient of {0} is negative; form cannot be SOS")]
    NegativePureSquare(String),
    #[error("certificate text error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A Gram coefficient vector: either the vector of one bilinear monomial, or
/// a named vector merged from several equal ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VectorLabel {
    Pure(usize, usize),
    Merged(String),
}

impl fmt::Display for VectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorLabel::Pure(i, j) => write!(f, "v{},{}", i, j),
            VectorLabel::Merged(name) => write!(f, "{}", name),
        }
    }
}

/// Unordered pair of labels in normalized order.
pub type LabelPair = (VectorLabel, VectorLabel);

fn pair(a: VectorLabel, b: VectorLabel) -> LabelPair {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Declares two pure vectors equal: the cross monomial's coefficient meets
/// the Cauchy-Schwarz bound with equality once the companion product is
/// annihilated by a zero label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merge {
    pub name: String,
    pub members: [(usize, usize); 2],
    pub cross: QuarticMonomial,
    pub companion_zero: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Direct,
    ViaZero((usize, usize)),
    ViaKnown(usize),
}

/// One derivation step: an absent monomial whose Gram expansion, after merge
/// substitution and eliminations, reduces to the concluded orthogonal pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertStep {
    pub absent: QuarticMonomial,
    pub rule: Rule,
    pub concluded: LabelPair,
}

/// Ordered derivation of pairwise-orthogonal unit Gram vectors, witnessing
/// that the target has no SOS decomposition with at most `rank` squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityCertificate {
    pub target: BiquadraticForm,
    pub rank: usize,
    pub zeros: Vec<(usize, usize)>,
    pub merges: Vec<Merge>,
    pub steps: Vec<CertStep>,
    pub orthogonal_set: Vec<VectorLabel>,
}

/// Checker verdict; invalidity localizes the first failing item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertVerdict {
    Valid { orthogonal_set_size: usize },
    Invalid { location: String, reason: String },
}

impl CertVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, CertVerdict::Valid { .. })
    }
}

impl fmt::Display for CertVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertVerdict::Valid {
                orthogonal_set_size,
            } => write!(f, "valid (orthogonal set size {})", orthogonal_set_size),
            CertVerdict::Invalid { location, reason } => {
                write!(f, "invalid at {}: {}", location, reason)
            }
        }
    }
}

/// Pure labels whose pure-square coefficient is zero. In any decomposition
/// the squared norms sum to that coefficient, so the vectors vanish.
pub fn derive_zero_labels(form: &BiquadraticForm) -> Result<BTreeSet<(usize, usize)>, CertError> {
    let mut zeros = BTreeSet::new();
    for i in 1..=form.m() {
        for j in 1..=form.n() {
            let c = form.coefficient(&QuarticMonomial::new(i, i, j, j));
            if c.is_negative() {
                return Err(CertError::NegativePureSquare(format!("x{i}^2*y{j}^2")));
            }
            if c.is_zero() {
                zeros.insert((i, j));
            }
        }
    }
    Ok(zeros)
}

fn pure_square_coeff(form: &BiquadraticForm, label: (usize, usize)) -> Rat {
    form.coefficient(&QuarticMonomial::new(label.0, label.0, label.1, label.1))
}

/// Gram expansion of a non-pure-square monomial: the unordered pairs of pure
/// labels whose inner products it constrains (each with multiplicity 2 under
/// the off-diagonal convention).
fn expansion_products(mono: &QuarticMonomial) -> Vec<((usize, usize), (usize, usize))> {
    let QuarticMonomial { xi, xk, yj, yl } = *mono;
    if xi == xk && yj == yl {
        Vec::new()
    } else if xi == xk {
        vec![((xi, yj), (xi, yl))]
    } else if yj == yl {
        vec![((xi, yj), (xk, yj))]
    } else {
        vec![((xi, yj), (xk, yl)), ((xi, yl), (xk, yj))]
    }
}

/// Validates one merge against the form. The cross coefficient must equal
/// twice the (equal, positive) pure-square coefficients of both members, so
/// Cauchy-Schwarz tightness forces the two vectors to coincide.
pub fn check_merge(form: &BiquadraticForm, merge: &Merge) -> Result<(), String> {
    let mono = merge.cross;
    if mono.xi == mono.xk || mono.yj == mono.yl {
        return Err(format!(
            "cross monomial {mono} does not involve distinct rows and columns"
        ));
    }
    let products = expansion_products(&mono);
    let member_set: BTreeSet<_> = merge.members.iter().copied().collect();
    let matches_members =
        |p: &((usize, usize), (usize, usize))| member_set == BTreeSet::from([p.0, p.1]);
    let Some(companion) = products.iter().find(|p| !matches_members(p)) else {
        return Err("expansion has no companion product".into());
    };
    if !products.iter().any(|p| matches_members(p)) {
        return Err(format!(
            "members {:?} do not appear in the expansion of {mono}",
            merge.members
        ));
    }
    if merge.companion_zero != companion.0 && merge.companion_zero != companion.1 {
        return Err(format!(
            "companion zero {:?} is not part of the companion product {:?}",
            merge.companion_zero, companion
        ));
    }
    if !pure_square_coeff(form, merge.companion_zero).is_zero() {
        return Err(format!(
            "claimed zero label {:?} has a present pure square",
            merge.companion_zero
        ));
    }
    let c1 = pure_square_coeff(form, merge.members[0]);
    let c2 = pure_square_coeff(form, merge.members[1]);
    if c1.is_zero() || c1.is_negative() || c1 != c2 {
        return Err(format!(
            "member norms {c1} and {c2} must be equal and positive"
        ));
    }
    let cross_coeff = form.coefficient(&mono);
    // 2 * (v_a . v_b) = cross coefficient, and |v_a . v_b| <= c1; equality
    // requires the coefficient to be exactly 2 * c1.
    let doubled = &c1 + &c2;
    if cross_coeff != doubled {
        return Err(format!(
            "no Cauchy-Schwarz tightness: cross coefficient {cross_coeff} != {doubled}"
        ));
    }
    Ok(())
}

/// Replays a certificate against its target form.
pub fn check_certificate(cert: &OrthogonalityCertificate) -> CertVerdict {
    let form = &cert.target;
    let invalid = |location: String, reason: String| CertVerdict::Invalid { location, reason };

    // Zero labels: the machinery needs all pure squares nonnegative, and
    // every declared zero must be genuinely absent.
    let actual_zeros = match derive_zero_labels(form) {
        Ok(z) => z,
        Err(e) => return invalid("form".into(), e.to_string()),
    };
    for (idx, z) in cert.zeros.iter().enumerate() {
        if !actual_zeros.contains(z) {
            return invalid(
                format!("zero {idx}"),
                format!("pure square of {:?} is present in the form", z),
            );
        }
    }
    let declared_zeros: BTreeSet<_> = cert.zeros.iter().copied().collect();

    // Merges.
    let mut substitution: BTreeMap<(usize, usize), String> = BTreeMap::new();
    for (idx, merge) in cert.merges.iter().enumerate() {
        if let Err(reason) = check_merge(form, merge) {
            return invalid(format!("merge {idx}"), reason);
        }
        for member in merge.members {
            if declared_zeros.contains(&member) {
                return invalid(
                    format!("merge {idx}"),
                    format!("member {:?} is a zero label", member),
                );
            }
            if substitution.insert(member, merge.name.clone()).is_some() {
                return invalid(
                    format!("merge {idx}"),
                    format!("member {:?} merged twice", member),
                );
            }
        }
    }
    let subst = |label: (usize, usize)| -> VectorLabel {
        match substitution.get(&label) {
            Some(name) => VectorLabel::Merged(name.clone()),
            None => VectorLabel::Pure(label.0, label.1),
        }
    };

    // Step replay in order.
    let mut concluded: Vec<LabelPair> = Vec::new();
    let mut concluded_set: BTreeSet<LabelPair> = BTreeSet::new();
    for (idx, step) in cert.steps.iter().enumerate() {
        let loc = format!("step {idx}");
        if !form.coefficient(&step.absent).is_zero() {
            return invalid(loc, format!("cited monomial {} is present", step.absent));
        }
        let raw = expansion_products(&step.absent);
        if raw.is_empty() {
            return invalid(loc, format!("{} is a pure square, not a product", step.absent));
        }
        let substituted: Vec<LabelPair> = raw
            .iter()
            .map(|&(a, b)| pair(subst(a), subst(b)))
            .collect();
        let claimed = pair(step.concluded.0.clone(), step.concluded.1.clone());
        if claimed.0 == claimed.1 {
            return invalid(loc, "concluded pair is not two distinct labels".into());
        }
        let ok = match &step.rule {
            Rule::Direct => {
                let distinct: BTreeSet<_> = substituted.iter().cloned().collect();
                if distinct.len() != 1 {
                    return invalid(
                        loc,
                        format!(
                            "direct rule needs a single distinct inner product, found {}",
                            distinct.len()
                        ),
                    );
                }
                substituted[0] == claimed
            }
            Rule::ViaZero(z) => {
                if !declared_zeros.contains(z) {
                    return invalid(loc, format!("{:?} is not a declared zero label", z));
                }
                if raw.len() != 2 {
                    return invalid(loc, "via-zero rule needs a two-product expansion".into());
                }
                let Some(pos) = raw.iter().position(|&(a, b)| a == *z || b == *z) else {
                    return invalid(
                        loc,
                        format!("zero label {:?} is not in either product", z),
                    );
                };
                substituted[1 - pos] == claimed
            }
            Rule::ViaKnown(t) => {
                if *t >= idx {
                    return invalid(
                        loc,
                        format!("via-known reference {t} is not strictly earlier"),
                    );
                }
                if substituted.len() != 2 {
                    return invalid(loc, "via-known rule needs a two-product expansion".into());
                }
                let known = &concluded[*t];
                let Some(pos) = substituted.iter().position(|p| p == known) else {
                    return invalid(
                        loc,
                        format!(
                            "referenced conclusion {} ~ {} is not a companion product",
                            known.0, known.1
                        ),
                    );
                };
                substituted[1 - pos] == claimed
            }
        };
        if !ok {
            return invalid(
                loc,
                format!(
                    "expansion does not reduce to the concluded pair {} ~ {}",
                    claimed.0, claimed.1
                ),
            );
        }
        concluded_set.insert(claimed.clone());
        concluded.push(claimed);
    }

    // Orthogonal set: distinct after substitution, positive norms, and every
    // pair concluded by some step.
    let mut set: Vec<VectorLabel> = Vec::new();
    for (idx, label) in cert.orthogonal_set.iter().enumerate() {
        let loc = format!("orthogonal_set entry {idx}");
        let resolved = match label {
            VectorLabel::Pure(i, j) => subst((*i, *j)),
            VectorLabel::Merged(name) => {
                if !cert.merges.iter().any(|m| &m.name == name) {
                    return invalid(loc, format!("unknown merged label {name}"));
                }
                label.clone()
            }
        };
        match &resolved {
            VectorLabel::Pure(i, j) => {
                let c = pure_square_coeff(form, (*i, *j));
                if c.is_zero() || c.is_negative() {
                    return invalid(loc, format!("label {resolved} has no positive norm"));
                }
            }
            VectorLabel::Merged(_) => {
                // Merge validity already established positive member norms.
            }
        }
        if set.contains(&resolved) {
            return invalid(loc, format!("label {resolved} appears twice"));
        }
        set.push(resolved);
    }
    for a in 0..set.len() {
        for b in (a + 1)..set.len() {
            let p = pair(set[a].clone(), set[b].clone());
            if !concluded_set.contains(&p) {
                return invalid(
                    "orthogonal_set".into(),
                    format!("pair {} ~ {} is not concluded by any step", p.0, p.1),
                );
            }
        }
    }
    if set.len() <= cert.rank {
        return invalid(
            "rank".into(),
            format!(
                "orthogonal set size {} does not exceed claimed rank {}",
                set.len(),
                cert.rank
            ),
        );
    }
    CertVerdict::Valid {
        orthogonal_set_size: set.len(),
    }
}

/// The built-in certificate that the form Q admits no 7-square
/// decomposition: zero labels (2,1), (3,2), (4,3); the merge w = v1,3 = v4,2;
/// and all 28 orthogonality derivations for the eight-vector set.
pub fn builtin_thm41_certificate() -> OrthogonalityCertificate {
    let w = || VectorLabel::Merged("w".to_string());
    let v = |i: usize, j: usize| VectorLabel::Pure(i, j);
    let mono = QuarticMonomial::new;
    let direct = |i, k, j, l, a: VectorLabel, b: VectorLabel| CertStep {
        absent: mono(i, k, j, l),
        rule: Rule::Direct,
        concluded: pair(a, b),
    };
    let via_zero = |i, k, j, l, z: (usize, usize), a: VectorLabel, b: VectorLabel| CertStep {
        absent: mono(i, k, j, l),
        rule: Rule::ViaZero(z),
        concluded: pair(a, b),
    };
    let via_known = |i, k, j, l, t: usize, a: VectorLabel, b: VectorLabel| CertStep {
        absent: mono(i, k, j, l),
        rule: Rule::ViaKnown(t),
        concluded: pair(a, b),
    };
    let steps = vec![
        // Direct orthogonality: absent mixed squares sharing a row or column.
        direct(1, 1, 1, 3, w(), v(1, 1)),
        direct(1, 1, 2, 3, w(), v(1, 2)),
        direct(2, 4, 2, 2, w(), v(2, 2)),
        direct(1, 3, 3, 3, w(), v(3, 3)),
        direct(4, 4, 1, 2, w(), v(4, 1)),
        direct(1, 2, 3, 3, w(), v(2, 3)),
        direct(1, 1, 1, 2, v(1, 1), v(1, 2)),
        direct(1, 3, 1, 1, v(1, 1), v(3, 1)),
        direct(1, 4, 1, 1, v(1, 1), v(4, 1)),
        direct(1, 2, 2, 2, v(1, 2), v(2, 2)),
        direct(2, 2, 2, 3, v(2, 2), v(2, 3)),
        direct(2, 3, 3, 3, v(2, 3), v(3, 3)),
        direct(3, 3, 1, 3, v(3, 1), v(3, 3)),
        direct(3, 4, 1, 1, v(3, 1), v(4, 1)),
        // Indirect orthogonality: absent cross terms whose companion product
        // involves a zero vector or an earlier conclusion.
        via_zero(3, 4, 1, 2, (3, 2), w(), v(3, 1)),
        via_zero(1, 2, 1, 2, (2, 1), v(1, 1), v(2, 2)),
        via_zero(1, 2, 1, 3, (2, 1), v(1, 1), v(2, 3)),
        via_known(1, 3, 1, 3, 14, v(1, 1), v(3, 3)),
        via_zero(1, 3, 1, 2, (3, 2), v(1, 2), v(3, 1)),
        via_zero(1, 3, 2, 3, (3, 2), v(1, 2), v(3, 3)),
        via_known(1, 4, 1, 2, 0, v(1, 2), v(4, 1)),
        via_known(1, 2, 2, 3, 2, v(1, 2), v(2, 3)),
        via_zero(2, 3, 1, 2, (2, 1), v(2, 2), v(3, 1)),
        via_zero(2, 3, 2, 3, (3, 2), v(2, 2), v(3, 3)),
        via_zero(2, 4, 1, 2, (2, 1), v(2, 2), v(4, 1)),
        via_zero(2, 3, 1, 3, (2, 1), v(2, 3), v(3, 1)),
        via_zero(2, 4, 1, 3, (2, 1), v(2, 3), v(4, 1)),
        via_zero(3, 4, 1, 3, (4, 3), v(3, 3), v(4, 1)),
    ];
    OrthogonalityCertificate {
        target: crate::poly::form_q(),
        rank: 7,
        zeros: vec![(2, 1), (3, 2), (4, 3)],
        merges: vec![Merge {
            name: "w".to_string(),
            members: [(1, 3), (4, 2)],
            cross: mono(1, 4, 2, 3),
            companion_zero: (4, 3),
        }],
        steps,
        orthogonal_set: vec![
            w(),
            v(1, 1),
            v(1, 2),
            v(2, 2),
            v(2, 3),
            v(3, 1),
            v(3, 3),
            v(4, 1),
        ],
    }
}

// ---------------------------------------------------------------------------
// Certificate file format
// ---------------------------------------------------------------------------
//
//   # comment
//   dims <m> <n>
//   form <form text>
//   rank <r>
//   zero <i> <j>
//   merge <name> <ai> <aj> <bi> <bj> cross <i> <k> <j> <l> zero <zi> <zj>
//   step absent <i> <k> <j> <l> direct <label> <label>
//   step absent <i> <k> <j> <l> via-zero <zi> <zj> <label> <label>
//   step absent <i> <k> <j> <l> via-known <index> <label> <label>
//   orthogonal_set <label> ...
//
// Labels are `v<i>,<j>` for pure vectors or a bare name for merged vectors.

fn label_to_token(label: &VectorLabel) -> String {
    label.to_string()
}

fn token_to_label(token: &str) -> VectorLabel {
    if let Some(rest) = token.strip_prefix('v') {
        if let Some((a, b)) = rest.split_once(',') {
            if let (Ok(i), Ok(j)) = (a.parse(), b.parse()) {
                return VectorLabel::Pure(i, j);
            }
        }
    }
    VectorLabel::Merged(token.to_string())
}

/// Serializes a certificate in the documented text format.
pub fn certificate_to_text(cert: &OrthogonalityCertificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("dims {} {}\n", cert.target.m(), cert.target.n()));
    out.push_str(&format!("form {}\n", cert.target));
    out.push_str(&format!("rank {}\n", cert.rank));
    for (i, j) in &cert.zeros {
        out.push_str(&format!("zero {} {}\n", i, j));
    }
    for m in &cert.merges {
        out.push_str(&format!(
            "merge {} {} {} {} {} cross {} {} {} {} zero {} {}\n",
            m.name,
            m.members[0].0,
            m.members[0].1,
            m.members[1].0,
            m.members[1].1,
            m.cross.xi,
            m.cross.xk,
            m.cross.yj,
            m.cross.yl,
            m.companion_zero.0,
            m.companion_zero.1,
        ));
    }
    for s in &cert.steps {
        let rule = match &s.rule {
            Rule::Direct => "direct".to_string(),
            Rule::ViaZero((i, j)) => format!("via-zero {} {}", i, j),
            Rule::ViaKnown(t) => format!("via-known {}", t),
        };
        out.push_str(&format!(
            "step absent {} {} {} {} {} {} {}\n",
            s.absent.xi,
            s.absent.xk,
            s.absent.yj,
            s.absent.yl,
            rule,
            label_to_token(&s.concluded.0),
            label_to_token(&s.concluded.1),
        ));
    }
    let tokens: Vec<String> = cert.orthogonal_set.iter().map(label_to_token).collect();
    out.push_str(&format!("orthogonal_set {}\n", tokens.join(" ")));
    out
}

/// Parses the documented certificate text format; unknown rule tags and
/// malformed lines are rejected with the line number.
pub fn parse_certificate(text: &str) -> Result<OrthogonalityCertificate, CertError> {
    let mut dims: Option<(usize, usize)> = None;
    let mut form: Option<BiquadraticForm> = None;
    let mut rank: Option<usize> = None;
    let mut zeros = Vec::new();
    let mut merges = Vec::new();
    let mut steps = Vec::new();
    let mut orthogonal_set: Option<Vec<VectorLabel>> = None;

    let err = |line: usize, msg: &str| CertError::Parse {
        line,
        msg: msg.to_string(),
    };
    let parse_usize = |tok: Option<&str>, line: usize, what: &str| -> Result<usize, CertError> {
        tok.and_then(|t| t.parse().ok())
            .ok_or_else(|| err(line, &format!("expected {what}")))
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut tokens = content.split_whitespace();
        match tokens.next() {
            Some("dims") => {
                let m = parse_usize(tokens.next(), line, "m")?;
                let n = parse_usize(tokens.next(), line, "n")?;
                dims = Some((m, n));
            }
            Some("form") => {
                let (m, n) = dims.ok_or_else(|| err(line, "dims must precede form"))?;
                let rest = content["form".len()..].trim();
                form = Some(
                    BiquadraticForm::parse(rest, m, n)
                        .map_err(|e| err(line, &e.to_string()))?,
                );
            }
            Some("rank") => {
                rank = Some(parse_usize(tokens.next(), line, "rank")?);
            }
            Some("zero") => {
                let i = parse_usize(tokens.next(), line, "row")?;
                let j = parse_usize(tokens.next(), line, "column")?;
                zeros.push((i, j));
            }
            Some("merge") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| err(line, "expected merge name"))?
                    .to_string();
                let ai = parse_usize(tokens.next(), line, "member row")?;
                let aj = parse_usize(tokens.next(), line, "member column")?;
                let bi = parse_usize(tokens.next(), line, "member row")?;
                let bj = parse_usize(tokens.next(), line, "member column")?;
                if tokens.next() != Some("cross") {
                    return Err(err(line, "expected 'cross'"));
                }
                let i = parse_usize(tokens.next(), line, "monomial index")?;
                let k = parse_usize(tokens.next(), line, "monomial index")?;
                let j = parse_usize(tokens.next(), line, "monomial index")?;
                let l = parse_usize(tokens.next(), line, "monomial index")?;
                if tokens.next() != Some("zero") {
                    return Err(err(line, "expected 'zero'"));
                }
                let zi = parse_usize(tokens.next(), line, "zero row")?;
                let zj = parse_usize(tokens.next(), line, "zero column")?;
                merges.push(Merge {
                    name,
                    members: [(ai, aj), (bi, bj)],
                    cross: QuarticMonomial::new(i, k, j, l),
                    companion_zero: (zi, zj),
                });
            }
            Some("step") => {
                if tokens.next() != Some("absent") {
                    return Err(err(line, "expected 'absent'"));
                }
                let i = parse_usize(tokens.next(), line, "monomial index")?;
                let k = parse_usize(tokens.next(), line, "monomial index")?;
                let j = parse_usize(tokens.next(), line, "monomial index")?;
                let l = parse_usize(tokens.next(), line, "monomial index")?;
                let rule = match tokens.next() {
                    Some("direct") => Rule::Direct,
                    Some("via-zero") => {
                        let zi = parse_usize(tokens.next(), line, "zero row")?;
                        let zj = parse_usize(tokens.next(), line, "zero column")?;
                        Rule::ViaZero((zi, zj))
                    }
                    Some("via-known") => {
                        Rule::ViaKnown(parse_usize(tokens.next(), line, "step index")?)
                    }
                    Some(other) => {
                        return Err(err(line, &format!("unknown rule tag '{other}'")));
                    }
                    None => return Err(err(line, "missing rule tag")),
                };
                let a = token_to_label(
                    tokens.next().ok_or_else(|| err(line, "expected label"))?,
                );
                let b = token_to_label(
                    tokens.next().ok_or_else(|| err(line, "expected label"))?,
                );
                steps.push(CertStep {
                    absent: QuarticMonomial::new(i, k, j, l),
                    rule,
                    concluded: pair(a, b),
                });
            }
            Some("orthogonal_set") => {
                orthogonal_set = Some(tokens.map(token_to_label).collect());
            }
            Some(other) => {
                return Err(err(line, &format!("unknown directive '{other}'")));
            }
            None => unreachable!("blank lines are skipped"),
        }
    }
    Ok(OrthogonalityCertificate {
        target: form.ok_or_else(|| err(0, "missing form"))?,
        rank: rank.ok_or_else(|| err(0, "missing rank"))?,
        zeros,
        merges,
        steps,
        orthogonal_set: orthogonal_set.ok_or_else(|| err(0, "missing orthogonal_set"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{form_q, rat, BiquadraticForm};

    #[test]
    fn zero_labels_of_q() {
        let zeros = derive_zero_labels(&form_q()).unwrap();
        assert_eq!(
            zeros,
            BTreeSet::from([(2, 1), (3, 2), (4, 3)])
        );
    }

    #[test]
    fn zero_labels_all_ones_and_zero_form() {
        let mut all_ones = BiquadraticForm::zero(3, 3).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                all_ones.add_term(i, i, j, j, rat(1)).unwrap();
            }
        }
        assert!(derive_zero_labels(&all_ones).unwrap().is_empty());
        let zero = BiquadraticForm::zero(3, 3).unwrap();
        assert_eq!(derive_zero_labels(&zero).unwrap().len(), 9);
    }

    #[test]
    fn zero_labels_reject_negative_square() {
        let mut f = BiquadraticForm::zero(2, 2).unwrap();
        f.add_term(1, 1, 1, 1, rat(-1)).unwrap();
        assert!(derive_zero_labels(&f).is_err());
    }

    #[test]
    fn merge_of_q_is_valid() {
        let cert = builtin_thm41_certificate();
        assert!(check_merge(&cert.target, &cert.merges[0]).is_ok());
    }

    #[test]
    fn merge_rejects_loose_coefficient() {
        // Editing the cross coefficient to 1 breaks tightness: 1/2 < 1.
        let mut form = form_q();
        form.add_term(1, 4, 2, 3, rat(-1)).unwrap();
        let merge = builtin_thm41_certificate().merges[0].clone();
        let reason = check_merge(&form, &merge).unwrap_err();
        assert!(reason.contains("tightness"), "got: {reason}");
    }

    #[test]
    fn merge_rejects_present_companion() {
        // Declaring a present pure square as the companion zero is invalid.
        let mut form = form_q();
        form.add_term(4, 4, 3, 3, rat(1)).unwrap();
        form.add_term(1, 4, 2, 3, rat(0)).unwrap();
        let merge = builtin_thm41_certificate().merges[0].clone();
        let reason = check_merge(&form, &merge).unwrap_err();
        assert!(reason.contains("present") || reason.contains("tightness"));
    }

    #[test]
    fn builtin_certificate_is_valid() {
        let cert = builtin_thm41_certificate();
        assert_eq!(cert.steps.len(), 28);
        let verdict = check_certificate(&cert);
        assert_eq!(
            verdict,
            CertVerdict::Valid {
                orthogonal_set_size: 8
            }
        );
    }

    #[test]
    fn rank_eight_claim_fails() {
        let mut cert = builtin_thm41_certificate();
        cert.rank = 8;
        let verdict = check_certificate(&cert);
        assert!(!verdict.is_valid());
        match verdict {
            CertVerdict::Invalid { location, .. } => assert_eq!(location, "rank"),
            _ => unreachable!(),
        }
    }

    #[test]
    fn reordered_dependency_fails() {
        let mut cert = builtin_thm41_certificate();
        // Step 17 (via-known 14) moved before its dependency.
        let dependent = cert.steps.remove(17);
        cert.steps.insert(0, dependent);
        assert!(!check_certificate(&cert).is_valid());
    }

    #[test]
    fn file_format_round_trip() {
        let cert = builtin_thm41_certificate();
        let text = certificate_to_text(&cert);
        let parsed = parse_certificate(&text).unwrap();
        assert_eq!(parsed, cert);
        assert!(check_certificate(&parsed).is_valid());
    }

    #[test]
    fn parser_rejects_unknown_rule_tag() {
        let cert = builtin_thm41_certificate();
        let text = certificate_to_text(&cert).replace("direct", "telepathy");
        let err = parse_certificate(&text).unwrap_err();
        match err {
            CertError::Parse { msg, .. } => assert!(msg.contains("telepathy")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
