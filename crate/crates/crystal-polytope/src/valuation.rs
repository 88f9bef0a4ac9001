//! Exact polynomials in `t_1, .., t_r`, the highest-term valuations `v` and
//! `ṽ`, the derivative description of `v`, products of exponentials of
//! nilpotent matrices, and value sets of spans and subalgebras.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootdata::{CartanMatrix, WeightVec};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ValuationError {
    #[error("the zero polynomial has no value")]
    ZeroInput,

    #[error("polynomials over {left} and {right} variables cannot be combined")]
    VariableCount { left: usize, right: usize },

    #[error("generator {index} is not nilpotent")]
    NotNilpotent { index: usize },

    #[error("generator {index} is not a {dim}x{dim} matrix")]
    BadGenerator { index: usize, dim: usize },

    #[error("letter {letter} has no generator (there are {count})")]
    MissingGenerator { letter: usize, count: usize },

    #[error("no built-in representation for type {family}{rank}")]
    UnsupportedType { family: char, rank: usize },

    #[error("section spaces are only available for type A_n with an (n+1)x(n+1) matrix")]
    UnsupportedSections,

    #[error("weight {0} is not dominant")]
    NotDominant(WeightVec),

    #[error("cannot parse polynomial `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn fmt_q(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// A polynomial in `t_1, .., t_r` with rational coefficients; exponent
/// vectors are indexed by `k - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// The variable `t_k`, `1 <= k <= nvars`.
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k - 1] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exponents: Vec<u32>, c: BigRational) -> Self {
        let mut p = Self::zero(exponents.len());
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        let slot = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        (0..n).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|e| e[k - 1]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// `∂/∂t_k`.
    pub fn derivative(&self, k: usize) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[k - 1] > 0 {
                let mut e2 = e.clone();
                e2[k - 1] -= 1;
                out.add_term(e2, c * q(e[k - 1] as i64));
            }
        }
        out
    }

    /// Substitutes `t_k = 0`.
    pub fn set_zero(&self, k: usize) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[k - 1] == 0)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `t_k = 0` for every `k > p`.
    pub fn restrict_vars(&self, p: usize) -> MultiPoly {
        (p + 1..=self.nvars).fold(self.clone(), |acc, k| acc.set_zero(k))
    }

    /// Evaluates at an integer point.
    pub fn eval(&self, t: &[i64]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            let m = e
                .iter()
                .zip(t)
                .fold(BigRational::one(), |m, (&d, &x)| m * q(x).pow(d as i32));
            acc + c * m
        })
    }

    /// Parses an expression over `t1..t{nvars}` with integer constants,
    /// `+`, `-`, `*`, `^` (nonnegative integer exponents) and parentheses.
    pub fn parse(input: &str, nvars: usize) -> Result<MultiPoly, ValuationError> {
        let tokens = tokenize(input)?;
        let mut parser = Parser {
            input,
            tokens,
            pos: 0,
            nvars,
        };
        let p = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p)
    }

    fn check_same(&self, other: &MultiPoly) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials over different variable counts"
        );
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_same(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &-rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_same(rhs);
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(k, &d)| {
                    if d == 1 {
                        format!("t{}", k + 1)
                    } else {
                        format!("t{}^{}", k + 1, d)
                    }
                })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{}", fmt_q(&a))?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{}*{}", fmt_q(&a), mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(BigInt),
    Var(usize),
    Op(char),
}

fn tokenize(input: &str) -> Result<Vec<Token>, ValuationError> {
    let err = |reason: String| ValuationError::Parse {
        input: input.to_string(),
        reason,
    };
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Num(s.parse().expect("digits")));
        } else if c == 't' {
            let start = i + 1;
            i = start;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i == start {
                return Err(err("variable `t` needs an index".into()));
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Var(s.parse().map_err(|_| err("bad index".into()))?));
        } else if "+-*^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(err(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> ValuationError {
        ValuationError::Parse {
            input: self.input.to_string(),
            reason: format!("{reason} at token {}", self.pos + 1),
        }
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, ValuationError> {
        let mut acc = match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ValuationError> {
        let mut acc = self.power()?;
        while self.peek_op() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly, ValuationError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(Token::Num(n)) => {
                    let n = u32::try_from(n.clone()).map_err(|_| self.error("exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(n));
                }
                _ => return Err(self.error("expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, ValuationError> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.nvars, BigRational::from_integer(n)))
            }
            Some(Token::Var(k)) => {
                if k == 0 || k > self.nvars {
                    return Err(self.error(&format!("t{k} is outside t1..t{}", self.nvars)));
                }
                self.pos += 1;
                Ok(MultiPoly::var(self.nvars, k))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("missing `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(-&self.atom()?)
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}

/// `f / g` with `g != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Lex order with `t_1 > .. > t_r`; values `-(a_1, .., a_r)`.
    Hi,
    /// Lex order with `t_r > .. > t_1`; values `-(a_r, .., a_1)`.
    Tilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValuationOrder {
    pub flavor: Flavor,
    pub r: usize,
}

impl ValuationOrder {
    pub fn hi(r: usize) -> Self {
        ValuationOrder {
            flavor: Flavor::Hi,
            r,
        }
    }

    pub fn tilde(r: usize) -> Self {
        ValuationOrder {
            flavor: Flavor::Tilde,
            r,
        }
    }

    /// The exponent vector rearranged so that the natural lex order on the
    /// result is the monomial order; it is also minus the value.
    pub fn key(&self, exponents: &[u32]) -> Vec<i64> {
        let it = exponents.iter().map(|&d| d as i64);
        match self.flavor {
            Flavor::Hi => it.collect(),
            Flavor::Tilde => it.rev().collect(),
        }
    }
}

/// `v(f)`: minus the (rearranged) exponent vector of the leading monomial.
pub fn value(f: &MultiPoly, ord: &ValuationOrder) -> Result<Vec<i64>, ValuationError> {
    let lead = f
        .terms
        .keys()
        .map(|e| ord.key(e))
        .max()
        .ok_or(ValuationError::ZeroInput)?;
    Ok(lead.into_iter().map(|x| -x).collect())
}

/// `v(f/g) = v(f) - v(g)`.
pub fn value_rational(
    f: &RationalFunction,
    ord: &ValuationOrder,
) -> Result<Vec<i64>, ValuationError> {
    let a = value(&f.num, ord)?;
    let b = value(&f.den, ord)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect())
}

/// The valuation through the operators `F_{i_k} = -∂/∂t_k`: `a_1` is the
/// largest number of `t_1`-derivatives that keeps `f` nonzero; apply them,
/// restrict to `t_1 = 0`, and continue with `t_2`, and so on.
pub fn chevalley_value(f: &MultiPoly) -> Result<Vec<i64>, ValuationError> {
    if f.is_zero() {
        return Err(ValuationError::ZeroInput);
    }
    let mut g = f.clone();
    let mut out = Vec::with_capacity(f.nvars);
    for k in 1..=f.nvars {
        let mut a = 0i64;
        loop {
            let h = -&g.derivative(k);
            if h.is_zero() {
                break;
            }
            g = h;
            a += 1;
        }
        out.push(a);
        g = g.set_zero(k);
        debug_assert!(!g.is_zero());
    }
    Ok(out)
}

/// Square matrices over `Q[t_1, .., t_r]`, indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    nvars: usize,
    entries: Vec<Vec<MultiPoly>>,
}

impl PolyMatrix {
    pub fn identity(dim: usize, nvars: usize) -> Self {
        let entries = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            MultiPoly::one(nvars)
                        } else {
                            MultiPoly::zero(nvars)
                        }
                    })
                    .collect()
            })
            .collect();
        PolyMatrix { nvars, entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<MultiPoly>] {
        &self.entries
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        let n = self.dim();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(MultiPoly::zero(self.nvars), |acc, m| {
                            &acc + &(&self.entries[i][m] * &other.entries[m][j])
                        })
                    })
                    .collect()
            })
            .collect();
        PolyMatrix {
            nvars: self.nvars,
            entries,
        }
    }

    /// Ones on the diagonal and zeros above it.
    pub fn is_lower_unitriangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let e = &self.entries[i][j];
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => *e == MultiPoly::one(self.nvars),
                    std::cmp::Ordering::Less => e.is_zero(),
                    std::cmp::Ordering::Greater => true,
                }
            })
        })
    }

    /// The minor with the given 1-based rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> MultiPoly {
        let d = rows.len();
        if d == 0 {
            return MultiPoly::one(self.nvars);
        }
        // Laplace expansion along the first row.
        let mut acc = MultiPoly::zero(self.nvars);
        for (m, &c) in cols.iter().enumerate() {
            let e = self.entry(rows[0], c);
            if e.is_zero() {
                continue;
            }
            let rest_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sub = self.minor(&rows[1..], &rest_cols);
            let term = e * &sub;
            acc = if m % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
}

/// An integer square matrix.
pub type IntMatrix = Vec<Vec<i64>>;

/// `exp(t_k F)` for a nilpotent integer matrix `F`.
fn exp_nilpotent(
    f: &IntMatrix,
    k: usize,
    nvars: usize,
    index: usize,
) -> Result<PolyMatrix, ValuationError> {
    let n = f.len();
    let fq: Vec<Vec<BigRational>> = f.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let matmul = |a: &Vec<Vec<BigRational>>, b: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigRational::zero(), |s, m| s + &a[i][m] * &b[m][j]))
                    .collect()
            })
            .collect()
    };
    let mut out = PolyMatrix::identity(n, nvars);
    let mut power = fq.clone();
    let mut factorial = BigRational::one();
    for m in 1..=n {
        if power.iter().all(|r| r.iter().all(Zero::is_zero)) {
            return Ok(out);
        }
        if m == n {
            break;
        }
        factorial *= q(m as i64);
        let mut e = vec![0u32; nvars];
        e[k - 1] = m as u32;
        for i in 0..n {
            for j in 0..n {
                if !power[i][j].is_zero() {
                    let c = &power[i][j] / &factorial;
                    let t = MultiPoly::monomial(e.clone(), c);
                    out.entries[i][j] = &out.entries[i][j] + &t;
                }
            }
        }
        power = matmul(&power, &fq);
    }
    Err(ValuationError::NotNilpotent { index })
}

/// `exp(t_r F_{j_r}) .. exp(t_1 F_{j_1})`: the variable `t_k` goes with the
/// letter `j_k`, and the `t_1` factor is the rightmost one.
pub fn unipotent_product(
    word: &[usize],
    generators: &[IntMatrix],
) -> Result<PolyMatrix, ValuationError> {
    let dim = generators.first().map(|g| g.len()).unwrap_or(0);
    for (idx, g) in generators.iter().enumerate() {
        if g.len() != dim || g.iter().any(|row| row.len() != dim) {
            return Err(ValuationError::BadGenerator {
                index: idx + 1,
                dim,
            });
        }
    }
    let r = word.len();
    let mut out = PolyMatrix::identity(dim, r);
    for (k, &j) in word.iter().enumerate().rev() {
        let g = generators.get(j.wrapping_sub(1)).ok_or(ValuationError::MissingGenerator {
            letter: j,
            count: generators.len(),
        })?;
        out = out.mul(&exp_nilpotent(g, k + 1, r, j)?);
    }
    Ok(out)
}

fn unit(dim: usize, entries: &[(usize, usize)]) -> IntMatrix {
    let mut m = vec![vec![0; dim]; dim];
    for &(i, j) in entries {
        m[i - 1][j - 1] = 1;
    }
    m
}

/// Lowering generators of a built-in representation: the natural
/// representation of `A_n` (`F_i = E_{i+1,i}`) and the four-dimensional
/// representation of `C_2` (`F_1 = E_21 + E_43`, `F_2 = E_32`).
pub fn builtin_generators(family: char, rank: usize) -> Result<Vec<IntMatrix>, ValuationError> {
    match (family.to_ascii_uppercase(), rank) {
        ('A', n) if n >= 1 => Ok((1..=n).map(|i| unit(n + 1, &[(i + 1, i)])).collect()),
        ('C', 2) => Ok(vec![unit(4, &[(2, 1), (4, 3)]), unit(4, &[(3, 2)])]),
        (f, n) => Err(ValuationError::UnsupportedType { family: f, rank: n }),
    }
}

fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            rec(x + 1, n, d, cur, out);
            cur.pop();
        }
    }
    rec(1, n, d, &mut cur, &mut out);
    out
}

/// Multisets of size `m` drawn from `0..len`, as index lists.
fn multisets(len: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, len: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in start..len {
            cur.push(x);
            rec(x, len, m, cur, out);
            cur.pop();
        }
    }
    rec(0, len, m, &mut cur, &mut out);
    out
}

/// Polynomials spanning the sections of `L_λ` divided by `τ_λ`, for type
/// `A_n` with `M` the product matrix in the natural representation: the
/// `d×d` minors of the first `d` columns for `ω_d`, and all products of
/// `c_d` such minors for each `d` when `λ = Σ c_d ω_d`.
pub fn section_span(
    cartan: &CartanMatrix,
    matrix: &PolyMatrix,
    lambda: &WeightVec,
) -> Result<Vec<MultiPoly>, ValuationError> {
    let n = cartan.rank();
    let is_type_a = CartanMatrix::builtin('A', n).map(|a| &a == cartan).unwrap_or(false);
    if !is_type_a || matrix.dim() != n + 1 || lambda.0.len() != n {
        return Err(ValuationError::UnsupportedSections);
    }
    if !lambda.is_dominant() {
        return Err(ValuationError::NotDominant(lambda.clone()));
    }
    let mut span = vec![MultiPoly::one(matrix.nvars())];
    for d in 1..=n {
        let c = lambda.pair(d) as usize;
        if c == 0 {
            continue;
        }
        let cols: Vec<usize> = (1..=d).collect();
        let minors: Vec<MultiPoly> = combinations(n + 1, d)
            .iter()
            .map(|rows| matrix.minor(rows, &cols))
            .collect();
        let powers: Vec<MultiPoly> = multisets(minors.len(), c)
            .iter()
            .map(|idx| {
                idx.iter()
                    .fold(MultiPoly::one(matrix.nvars()), |acc, &i| &acc * &minors[i])
            })
            .collect();
        span = span
            .iter()
            .flat_map(|s| powers.iter().map(move |p| s * p))
            .collect();
    }
    span.retain(|p| !p.is_zero());
    Ok(span)
}

/// How a generating list is turned into a vector space before taking values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpanClosure {
    /// The linear span of the list.
    None,
    /// The span of all products of at most `degree_cap` list members,
    /// the empty product included.
    Products { degree_cap: usize },
}

/// The set `{-v(f)}` over the nonzero `f` of the span, found by Gaussian
/// elimination against the monomial order. Each pivot's leading monomial is
/// one value and there is one pivot per dimension.
pub fn value_set_of_span(
    polys: &[MultiPoly],
    ord: &ValuationOrder,
    closure: SpanClosure,
) -> BTreeSet<Vec<i64>> {
    let generated: Vec<MultiPoly> = match closure {
        SpanClosure::None => polys.to_vec(),
        SpanClosure::Products { degree_cap } => {
            let nvars = polys.first().map(|p| p.nvars()).unwrap_or(ord.r);
            let mut all = vec![MultiPoly::one(nvars)];
            let mut layer = vec![(0usize, MultiPoly::one(nvars))];
            for _ in 0..degree_cap {
                let mut next = Vec::new();
                for (start, p) in &layer {
                    for (i, g) in polys.iter().enumerate().skip(*start) {
                        next.push((i, p * g));
                    }
                }
                all.extend(next.iter().map(|(_, p)| p.clone()));
                layer = next;
            }
            all
        }
    };
    let mut pivots: BTreeMap<Vec<i64>, BTreeMap<Vec<i64>, BigRational>> = BTreeMap::new();
    for p in &generated {
        let mut row: BTreeMap<Vec<i64>, BigRational> =
            p.terms.iter().map(|(e, c)| (ord.key(e), c.clone())).collect();
        while let Some((lead, c)) = row.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
            match pivots.get(&lead) {
                None => {
                    pivots.insert(lead, row);
                    break;
                }
                Some(piv) => {
                    let factor = &c / &piv[&lead];
                    for (k, v) in piv {
                        let slot = row.entry(k.clone()).or_insert_with(BigRational::zero);
                        *slot -= &factor * v;
                        if slot.is_zero() {
                            row.remove(k);
                        }
                    }
                }
            }
        }
    }
    pivots.into_keys().collect()
}

/// The rank of the coefficient matrix of `polys`.
pub fn span_dimension(polys: &[MultiPoly]) -> usize {
    let r = polys.first().map(|p| p.nvars()).unwrap_or(0);
    value_set_of_span(polys, &ValuationOrder::hi(r), SpanClosure::None).len()
}
