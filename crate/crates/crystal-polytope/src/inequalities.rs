//! Affine forms on sequences, the operators `Ŝ_k`, the closure `Ξ` of the
//! seed forms, ampleness, and H-representations of the polyhedral
//! realization.
//!
//! A form is `ψ(a) = c_0 + Σ_i c_i λ_i + Σ_k ψ_k a_k` with the weight `λ`
//! kept symbolic, so a single closure serves every dilation `kλ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootdata::WeightVec;
use crate::zcrystal::SequenceSpec;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum IneqError {
    #[error("window {window} is shorter than the word length {word_len}")]
    WindowTooSmall { window: usize, word_len: usize },

    #[error("the depth cap must be at least 1")]
    ZeroDepth,

    #[error("the closure is not certified (depth cap {depth} reached or window unstable)")]
    Uncertified { depth: usize },

    #[error("the pair (sequence, {lambda}) is not ample; use enumeration (delta-points) instead")]
    NotAmple { lambda: WeightVec },

    #[error("weight {lambda} has {got} entries, expected {expected}")]
    WeightLength {
        lambda: WeightVec,
        got: usize,
        expected: usize,
    },

    #[error("cannot parse inequality `{line}`: {reason}")]
    Parse { line: String, reason: String },
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An affine form `c_0 + Σ c_i λ_i + Σ ψ_k a_k` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    coeffs: BTreeMap<usize, BigRational>,
    const_abs: BigRational,
    const_lambda: Vec<BigRational>,
}

impl AffineForm {
    /// The zero form over a weight lattice of rank `n`.
    pub fn zero(n: usize) -> Self {
        AffineForm {
            coeffs: BTreeMap::new(),
            const_abs: BigRational::zero(),
            const_lambda: vec![BigRational::zero(); n],
        }
    }

    /// The coordinate function `a_k`.
    pub fn coordinate(n: usize, k: usize) -> Self {
        let mut f = Self::zero(n);
        f.coeffs.insert(k, BigRational::one());
        f
    }

    pub fn from_parts(
        coeffs: impl IntoIterator<Item = (usize, BigRational)>,
        const_abs: BigRational,
        const_lambda: Vec<BigRational>,
    ) -> Self {
        let mut f = AffineForm {
            coeffs: coeffs.into_iter().collect(),
            const_abs,
            const_lambda,
        };
        f.coeffs.retain(|_, v| !v.is_zero());
        f
    }

    pub fn rank(&self) -> usize {
        self.const_lambda.len()
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigRational> {
        &self.coeffs
    }

    pub fn const_abs(&self) -> &BigRational {
        &self.const_abs
    }

    pub fn const_lambda(&self) -> &[BigRational] {
        &self.const_lambda
    }

    /// Largest position with a nonzero coefficient, or 0.
    pub fn support_len(&self) -> usize {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
            && self.const_abs.is_zero()
            && self.const_lambda.iter().all(Zero::is_zero)
    }

    fn add_coeff(&mut self, k: usize, c: &BigRational) {
        let e = self.coeffs.entry(k).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &AffineForm, c: &BigRational) -> AffineForm {
        let mut out = self.clone();
        for (&k, v) in &other.coeffs {
            out.add_coeff(k, &(v * c));
        }
        out.const_abs += &other.const_abs * c;
        for (a, b) in out.const_lambda.iter_mut().zip(&other.const_lambda) {
            *a += b * c;
        }
        out
    }

    /// Sets `a_k = 0` for every `k > r`.
    pub fn restrict(&self, r: usize) -> AffineForm {
        let mut out = self.clone();
        out.coeffs.retain(|&k, _| k <= r);
        out
    }

    /// The constant term `ψ(0)` at a concrete weight.
    pub fn constant_at(&self, lambda: &WeightVec) -> BigRational {
        let mut c = self.const_abs.clone();
        for (i, ci) in self.const_lambda.iter().enumerate() {
            c += ci * q(lambda.pair(i + 1));
        }
        c
    }

    /// Replaces the symbolic weight by a concrete one.
    pub fn substitute(&self, lambda: &WeightVec) -> AffineForm {
        AffineForm {
            coeffs: self.coeffs.clone(),
            const_abs: self.constant_at(lambda),
            const_lambda: vec![BigRational::zero(); self.rank()],
        }
    }

    /// The same form with `λ` replaced by `kλ`.
    pub fn dilate(&self, k: i64) -> AffineForm {
        let mut out = self.clone();
        for c in &mut out.const_lambda {
            *c *= q(k);
        }
        out
    }

    /// `ψ(a)` at a concrete point and weight; positions past `a.len()` are 0.
    pub fn eval(&self, a: &[i64], lambda: &WeightVec) -> BigRational {
        let mut v = self.constant_at(lambda);
        for (&k, c) in &self.coeffs {
            if let Some(&x) = a.get(k - 1) {
                v += c * q(x);
            }
        }
        v
    }

    /// Whether the constant term depends on `λ`.
    pub fn is_symbolic(&self) -> bool {
        self.const_lambda.iter().any(|c| !c.is_zero())
    }

    /// One line of the text H-representation over `r` positions. With
    /// `symbolic`, all `L1..Ln` terms are printed; otherwise they must be zero
    /// and are omitted.
    pub fn to_hrep_line(&self, r: usize, symbolic: bool) -> String {
        let mut out = fmt_rational(&self.const_abs);
        let mut push = |c: &BigRational, name: String| {
            if c.is_negative() {
                out.push_str(&format!(" - {}*{}", fmt_rational(&-c), name));
            } else {
                out.push_str(&format!(" + {}*{}", fmt_rational(c), name));
            }
        };
        if symbolic {
            for (i, c) in self.const_lambda.iter().enumerate() {
                push(c, format!("L{}", i + 1));
            }
        }
        for k in 1..=r {
            push(&self.coeff(k), format!("a{k}"));
        }
        out.push_str(" >= 0");
        out
    }

    pub fn to_json(&self, r: usize) -> HrepJson {
        HrepJson {
            const_abs: fmt_rational(&self.const_abs),
            const_lambda: self.const_lambda.iter().map(fmt_rational).collect(),
            coeffs: (1..=r).map(|k| fmt_rational(&self.coeff(k))).collect(),
        }
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if !self.const_abs.is_zero() {
            terms.push(fmt_rational(&self.const_abs));
        }
        for (i, c) in self.const_lambda.iter().enumerate() {
            if !c.is_zero() {
                terms.push(format!("{}*L{}", fmt_rational(c), i + 1));
            }
        }
        for (k, c) in &self.coeffs {
            terms.push(format!("{}*a{}", fmt_rational(c), k));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// JSON mirror of one inequality; rationals are written as `"p"` or `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HrepJson {
    pub const_abs: String,
    pub const_lambda: Vec<String>,
    pub coeffs: Vec<String>,
}

pub fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

/// Parses one line `c0 + c1*L1 + .. + p1*a1 + .. >= 0` over a weight
/// lattice of rank `n`. Terms may appear in any order and may be omitted.
pub fn parse_hrep_line(line: &str, n: usize) -> Result<AffineForm, IneqError> {
    let err = |reason: &str| IneqError::Parse {
        line: line.to_string(),
        reason: reason.to_string(),
    };
    let body = line
        .trim()
        .strip_suffix("0")
        .and_then(|s| s.trim_end().strip_suffix(">="))
        .ok_or_else(|| err("expected a trailing `>= 0`"))?;
    let mut form = AffineForm::zero(n);
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut negative = false;
    let mut cur = String::new();
    for ch in body.chars() {
        match ch {
            '+' | '-' => {
                if !cur.trim().is_empty() {
                    terms.push((negative, std::mem::take(&mut cur)));
                    negative = false;
                }
                if ch == '-' {
                    negative = !negative;
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        terms.push((negative, cur));
    }
    if terms.is_empty() {
        return Err(err("no terms"));
    }
    for (neg, term) in terms {
        let (coef, var) = match term.split_once('*') {
            Some((c, v)) => (parse_rational(c).ok_or_else(|| err("bad coefficient"))?, Some(v)),
            None if term.starts_with(['a', 'L']) => (BigRational::one(), Some(term.as_str())),
            None => (parse_rational(&term).ok_or_else(|| err("bad constant"))?, None),
        };
        let coef = if neg { -coef } else { coef };
        match var {
            None => form.const_abs += coef,
            Some(v) => {
                let (kind, idx) = v.split_at(1);
                let idx: usize = idx.parse().map_err(|_| err("bad variable index"))?;
                match kind {
                    "a" if idx >= 1 => form.add_coeff(idx, &coef),
                    "L" if (1..=n).contains(&idx) => form.const_lambda[idx - 1] += coef,
                    _ => return Err(err("unknown variable")),
                }
            }
        }
    }
    Ok(form)
}

/// `β_k^(+) = a_k + Σ_{k<j<k^(+)} <α_{i_j}, h_{i_k}> a_j + a_{k^(+)}`.
pub fn beta_plus(spec: &SequenceSpec, k: usize) -> AffineForm {
    let n = spec.rank();
    let ik = spec.letter(k);
    let kp = spec.next_occurrence(k);
    let mut f = AffineForm::coordinate(n, k);
    f.add_coeff(kp, &BigRational::one());
    for j in k + 1..kp {
        f.add_coeff(j, &q(spec.cartan().entry(ik, spec.letter(j))));
    }
    f
}

/// `β_k^(-)`: `a_k + Σ_{k^(-)<j<k} <α_{i_j}, h_{i_k}> a_j + a_{k^(-)}` when
/// `k^(-) > 0`, and `-λ_{i_k} + a_k + Σ_{1<=j<k} <α_{i_j}, h_{i_k}> a_j`
/// otherwise.
pub fn beta_minus(spec: &SequenceSpec, k: usize) -> AffineForm {
    let n = spec.rank();
    let ik = spec.letter(k);
    let km = spec.prev_occurrence(k);
    let mut f = AffineForm::coordinate(n, k);
    if km > 0 {
        f.add_coeff(km, &BigRational::one());
    } else {
        f.const_lambda[ik - 1] = q(-1);
    }
    for j in km + 1..k {
        f.add_coeff(j, &q(spec.cartan().entry(ik, spec.letter(j))));
    }
    f
}

/// `λ^(i) = λ_i - Σ_{j<p} <α_{i_j}, h_i> a_j - a_p`, where `p` is the first
/// position carrying the letter `i`.
pub fn lambda_seed(spec: &SequenceSpec, i: usize) -> AffineForm {
    let n = spec.rank();
    let p = spec.first_occurrence(i);
    let mut f = AffineForm::zero(n);
    f.const_lambda[i - 1] = BigRational::one();
    f.add_coeff(p, &q(-1));
    for j in 1..p {
        f.add_coeff(j, &q(-spec.cartan().entry(i, spec.letter(j))));
    }
    f
}

/// `Ŝ_k ψ`: subtract `ψ_k β_k^(+)` if `ψ_k > 0`, `ψ_k β_k^(-)` if `ψ_k < 0`,
/// and leave `ψ` alone if `ψ_k = 0`.
pub fn shat(spec: &SequenceSpec, k: usize, psi: &AffineForm) -> AffineForm {
    let pk = psi.coeff(k);
    if pk.is_zero() {
        return psi.clone();
    }
    let beta = if pk.is_positive() {
        beta_plus(spec, k)
    } else {
        beta_minus(spec, k)
    };
    psi.add_scaled(&beta, &-pk)
}

/// The seeds `a_j (j <= K)` and `λ^(i) (i ∈ I)`.
pub fn seed_forms(spec: &SequenceSpec, window: usize) -> Vec<AffineForm> {
    let n = spec.rank();
    (1..=window)
        .map(|j| AffineForm::coordinate(n, j))
        .chain((1..=n).map(|i| lambda_seed(spec, i)))
        .collect()
}

/// A closure of seed forms under `Ŝ_1, .., Ŝ_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiSet {
    pub forms: BTreeSet<AffineForm>,
    pub window: usize,
    pub word_len: usize,
    /// Closure rounds that produced new forms.
    pub depth: usize,
    pub certified: bool,
}

impl XiSet {
    /// The forms with `a_k := 0` for `k > r`, zero forms dropped.
    pub fn restricted(&self) -> BTreeSet<AffineForm> {
        restrict_all(&self.forms, self.word_len)
    }
}

fn restrict_all(forms: &BTreeSet<AffineForm>, r: usize) -> BTreeSet<AffineForm> {
    forms
        .iter()
        .map(|f| f.restrict(r))
        .filter(|f| !f.is_zero())
        .collect()
}

/// Closes `seeds` under `Ŝ_1..Ŝ_K` breadth first. Returns the forms, the
/// number of productive rounds, and whether a round added nothing before the
/// cap `depth` was exhausted.
pub fn close_forms(
    spec: &SequenceSpec,
    seeds: Vec<AffineForm>,
    window: usize,
    depth: usize,
) -> (BTreeSet<AffineForm>, usize, bool) {
    let mut seen: BTreeSet<AffineForm> = seeds.iter().cloned().collect();
    let mut frontier: Vec<AffineForm> = seen.iter().cloned().collect();
    for round in 0..depth {
        let mut fresh = Vec::new();
        for psi in &frontier {
            for k in 1..=window {
                let phi = shat(spec, k, psi);
                if !seen.contains(&phi) {
                    seen.insert(phi.clone());
                    fresh.push(phi);
                }
            }
        }
        if fresh.is_empty() {
            return (seen, round, true);
        }
        frontier = fresh;
    }
    (seen, depth, false)
}

/// `Ξ` explored with the window `K` and depth cap `D`.
///
/// The result is certified when the closure reaches a fixpoint within `D`
/// rounds, and a second closure with window `K + n` (one more period of the
/// index sequence) has the same restriction to positions `1..=r`.
pub fn generate_xi(spec: &SequenceSpec, window: usize, depth: usize) -> Result<XiSet, IneqError> {
    generate_xi_from(spec, seed_forms(spec, window), window, depth)
}

/// [`generate_xi`] with explicit seeds; the window check uses the default
/// seeds for `K + n`.
pub fn generate_xi_from(
    spec: &SequenceSpec,
    seeds: Vec<AffineForm>,
    window: usize,
    depth: usize,
) -> Result<XiSet, IneqError> {
    let r = spec.word_len();
    if window < r {
        return Err(IneqError::WindowTooSmall {
            window,
            word_len: r,
        });
    }
    if depth == 0 {
        return Err(IneqError::ZeroDepth);
    }
    let default_seeds = seeds == seed_forms(spec, window);
    let (forms, rounds, closed) = close_forms(spec, seeds, window, depth);
    let mut certified = closed;
    if closed && default_seeds {
        let wider = window + spec.rank();
        let (more, _, closed_more) = close_forms(spec, seed_forms(spec, wider), wider, depth);
        certified = closed_more && restrict_all(&more, r) == restrict_all(&forms, r);
    }
    Ok(XiSet {
        forms,
        window,
        word_len: r,
        depth: rounds,
        certified,
    })
}

fn check_lambda(spec: &SequenceSpec, lambda: &WeightVec) -> Result<(), IneqError> {
    if lambda.0.len() != spec.rank() {
        return Err(IneqError::WeightLength {
            lambda: lambda.clone(),
            got: lambda.0.len(),
            expected: spec.rank(),
        });
    }
    Ok(())
}

/// `(sequence, λ)` is ample when every form in `Ξ` is nonnegative at the
/// origin, i.e. has a nonnegative constant at `λ`.
pub fn ample_check(spec: &SequenceSpec, lambda: &WeightVec, xi: &XiSet) -> Result<bool, IneqError> {
    check_lambda(spec, lambda)?;
    if !xi.certified {
        return Err(IneqError::Uncertified { depth: xi.depth });
    }
    Ok(xi
        .forms
        .iter()
        .all(|f| !f.constant_at(lambda).is_negative()))
}

/// The weight in an H-representation request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaMode {
    Symbolic,
    Concrete(WeightVec),
}

/// The inequalities `ψ(a_1, .., a_r, 0, 0, ..) >= 0` for `ψ ∈ Ξ`, with
/// duplicates and zero forms removed. A concrete weight must give an ample
/// pair and is substituted into the constants.
pub fn delta_hrep(
    spec: &SequenceSpec,
    xi: &XiSet,
    lambda: &LambdaMode,
) -> Result<Vec<AffineForm>, IneqError> {
    if !xi.certified {
        return Err(IneqError::Uncertified { depth: xi.depth });
    }
    let forms = xi.restricted();
    match lambda {
        LambdaMode::Symbolic => Ok(forms.into_iter().collect()),
        LambdaMode::Concrete(l) => {
            if !ample_check(spec, l, xi)? {
                return Err(IneqError::NotAmple { lambda: l.clone() });
            }
            let concrete: BTreeSet<AffineForm> = forms
                .iter()
                .map(|f| f.substitute(l))
                .filter(|f| !f.is_zero())
                .collect();
            Ok(concrete.into_iter().collect())
        }
    }
}
