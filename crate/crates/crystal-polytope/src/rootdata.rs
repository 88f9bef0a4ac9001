//! Generalized Cartan matrices, weights, simple reflections and reduced words.
//!
//! Indices of simple roots are 1-based throughout the public API, matching
//! the usual `I = {1, .., n}` labelling. The matrix entry `c[i][j]` is the
//! pairing `<alpha_j, h_i>`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper limit on the number of positive roots explored before a matrix is
/// declared to be of infinite type.
const ROOT_CAP: usize = 4096;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootDataError {
    #[error("unknown Cartan type {family}{rank}")]
    UnknownType { family: char, rank: usize },

    #[error("invalid Cartan matrix: {0}")]
    InvalidMatrix(String),

    #[error("letter {letter} is outside the index range 1..={rank}")]
    LetterOutOfRange { letter: usize, rank: usize },

    #[error("word {0} is not reduced")]
    NotReduced(ReducedWord),

    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight {0} is not dominant")]
    NotDominant(WeightVec),

    #[error("the Cartan matrix is not of finite type")]
    NotFiniteType,

    #[error("cannot parse integer list '{0}'")]
    Parse(String),
}

/// A weight in the basis of fundamental weights: `coords[i-1] = <lambda, h_i>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVec(pub Vec<i64>);

impl WeightVec {
    pub fn zero(rank: usize) -> Self {
        WeightVec(vec![0; rank])
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// `<lambda, h_i>` for a 1-based index.
    pub fn pair(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn scale(&self, k: i64) -> Self {
        WeightVec(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &WeightVec) -> Self {
        WeightVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

impl FromStr for WeightVec {
    type Err = RootDataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_int_list(s).map(WeightVec)
    }
}

/// An element of the root lattice written in the basis of simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootCombo(pub Vec<i64>);

impl RootCombo {
    pub fn zero(rank: usize) -> Self {
        RootCombo(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        RootCombo(v)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn add_scaled(&mut self, i: usize, k: i64) {
        self.0[i - 1] += k;
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &RootCombo) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for RootCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

/// A word `(j_1, .., j_r)` over the index set, in application order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReducedWord {
    letters: Vec<usize>,
}

impl ReducedWord {
    /// Validates letter range and reducedness against `cartan`.
    pub fn new(cartan: &CartanMatrix, letters: Vec<usize>) -> Result<Self, RootDataError> {
        let word = ReducedWord { letters };
        cartan.check_letters(&word.letters)?;
        if !cartan.is_reduced(&word.letters) {
            return Err(RootDataError::NotReduced(word));
        }
        Ok(word)
    }

    pub fn empty() -> Self {
        ReducedWord { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The prefix `(j_1, .., j_k)`; prefixes of reduced words are reduced.
    pub fn prefix(&self, k: usize) -> ReducedWord {
        ReducedWord {
            letters: self.letters[..k].to_vec(),
        }
    }

    /// The word read backwards, `(j_r, .., j_1)`.
    pub fn reversed(&self) -> ReducedWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        ReducedWord { letters }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A generalized Cartan matrix with `entries[i-1][j-1] = <alpha_j, h_i>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// The standard matrix of a finite-type family `A`..`G` (Bourbaki labelling).
    pub fn builtin(family: char, rank: usize) -> Result<Self, RootDataError> {
        let fam = family.to_ascii_uppercase();
        let bad = || RootDataError::UnknownType { family: fam, rank };
        let n = rank;
        let mut c = vec![vec![0i64; n]; n];
        fn link(c: &mut [Vec<i64>], i: usize, j: usize) {
            c[i - 1][j - 1] = -1;
            c[j - 1][i - 1] = -1;
        }
        match fam {
            'A' if n >= 1 => {
                for i in 1..n {
                    link(&mut c, i, i + 1);
                }
            }
            'B' if n >= 2 => {
                for i in 1..n {
                    link(&mut c, i, i + 1);
                }
                c[n - 1][n - 2] = -2;
            }
            'C' if n >= 2 => {
                for i in 1..n {
                    link(&mut c, i, i + 1);
                }
                c[n - 2][n - 1] = -2;
            }
            'D' if n >= 4 => {
                for i in 1..n - 1 {
                    link(&mut c, i, i + 1);
                }
                link(&mut c, n - 2, n);
            }
            'E' if (6..=8).contains(&n) => {
                link(&mut c, 1, 3);
                link(&mut c, 2, 4);
                for i in 3..n {
                    link(&mut c, i, i + 1);
                }
            }
            'F' if n == 4 => {
                link(&mut c, 1, 2);
                link(&mut c, 2, 3);
                link(&mut c, 3, 4);
                c[2][1] = -2;
            }
            'G' if n == 2 => {
                c[0][1] = -3;
                c[1][0] = -1;
            }
            _ => return Err(bad()),
        }
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        Ok(CartanMatrix { entries: c })
    }

    /// Accepts an arbitrary matrix after checking the generalized Cartan
    /// matrix axioms and symmetrizability.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, RootDataError> {
        let n = rows.len();
        if n == 0 {
            return Err(RootDataError::InvalidMatrix("empty matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(RootDataError::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            if row[i] != 2 {
                return Err(RootDataError::InvalidMatrix(format!(
                    "diagonal entry {} is {}, expected 2",
                    i + 1,
                    row[i]
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if rows[i][j] > 0 {
                    return Err(RootDataError::InvalidMatrix(format!(
                        "off-diagonal entry ({}, {}) is positive",
                        i + 1,
                        j + 1
                    )));
                }
                if (rows[i][j] == 0) != (rows[j][i] == 0) {
                    return Err(RootDataError::InvalidMatrix(format!(
                        "entries ({}, {}) and ({}, {}) are not simultaneously zero",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let m = CartanMatrix { entries: rows };
        if m.symmetrizer().is_none() {
            return Err(RootDataError::InvalidMatrix("not symmetrizable".into()));
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// `<alpha_j, h_i>` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn transpose(&self) -> CartanMatrix {
        let n = self.rank();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| self.entries[j][i]).collect())
            .collect();
        CartanMatrix { entries }
    }

    /// Positive integers `d_i` with `d_i c_ij = d_j c_ji`, normalized so that
    /// their gcd is 1.
    pub fn symmetrizer(&self) -> Option<Vec<u64>> {
        let n = self.rank();
        // d_i stored as reduced fractions (num, den).
        let mut d: Vec<Option<(i64, i64)>> = vec![None; n];
        for start in 0..n {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some((1, 1));
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let (pi, qi) = d[i].unwrap();
                for j in 0..n {
                    if j == i || self.entries[i][j] == 0 {
                        continue;
                    }
                    // d_j = d_i c_ij / c_ji
                    let num = pi * self.entries[i][j];
                    let den = qi * self.entries[j][i];
                    let g = num.gcd(&den);
                    let (num, den) = (num / g, den / g);
                    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
                    match d[j] {
                        None => {
                            d[j] = Some((num, den));
                            queue.push_back(j);
                        }
                        Some(existing) if existing != (num, den) => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let d: Vec<(i64, i64)> = d.into_iter().map(|x| x.unwrap()).collect();
        let l = d.iter().fold(1i64, |acc, &(_, q)| acc.lcm(&q));
        let ints: Vec<i64> = d.iter().map(|&(p, q)| p * (l / q)).collect();
        let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        Some(ints.iter().map(|&x| (x / g) as u64).collect())
    }

    pub(crate) fn check_letters(&self, letters: &[usize]) -> Result<(), RootDataError> {
        let rank = self.rank();
        match letters.iter().find(|&&l| l == 0 || l > rank) {
            Some(&letter) => Err(RootDataError::LetterOutOfRange { letter, rank }),
            None => Ok(()),
        }
    }

    pub fn check_weight(&self, lambda: &WeightVec) -> Result<(), RootDataError> {
        if lambda.0.len() != self.rank() {
            return Err(RootDataError::DimensionMismatch {
                expected: self.rank(),
                got: lambda.0.len(),
            });
        }
        Ok(())
    }

    pub fn check_dominant(&self, lambda: &WeightVec) -> Result<(), RootDataError> {
        self.check_weight(lambda)?;
        if !lambda.is_dominant() {
            return Err(RootDataError::NotDominant(lambda.clone()));
        }
        Ok(())
    }

    /// The simple root `alpha_i` in fundamental-weight coordinates.
    pub fn simple_root(&self, i: usize) -> WeightVec {
        WeightVec((0..self.rank()).map(|j| self.entries[j][i - 1]).collect())
    }

    /// `<beta, h_i>` for an element of the root lattice.
    pub fn pair_root(&self, beta: &RootCombo, i: usize) -> i64 {
        self.entries[i - 1]
            .iter()
            .zip(&beta.0)
            .map(|(c, b)| c * b)
            .sum()
    }

    /// Rewrites a root-lattice element in fundamental-weight coordinates.
    pub fn root_to_weight(&self, beta: &RootCombo) -> WeightVec {
        WeightVec((1..=self.rank()).map(|i| self.pair_root(beta, i)).collect())
    }

    /// `s_i(lambda) = lambda - <lambda, h_i> alpha_i`.
    pub fn reflect(&self, i: usize, lambda: &WeightVec) -> WeightVec {
        let k = lambda.pair(i);
        let alpha = self.simple_root(i);
        WeightVec(
            lambda
                .0
                .iter()
                .zip(&alpha.0)
                .map(|(l, a)| l - k * a)
                .collect(),
        )
    }

    /// `s_i(beta) = beta - <beta, h_i> alpha_i` on the root lattice.
    pub fn reflect_root(&self, i: usize, beta: &RootCombo) -> RootCombo {
        let k = self.pair_root(beta, i);
        let mut out = beta.clone();
        out.add_scaled(i, -k);
        out
    }

    /// Inversion test: for each `k`, the root `s_{j_1} .. s_{j_{k-1}} alpha_{j_k}`
    /// must be positive. Letters outside the index range make the word
    /// non-reduced by convention.
    pub fn is_reduced(&self, letters: &[usize]) -> bool {
        if self.check_letters(letters).is_err() {
            return false;
        }
        let n = self.rank();
        for k in 0..letters.len() {
            let mut beta = RootCombo::simple(n, letters[k]);
            for &j in letters[..k].iter().rev() {
                beta = self.reflect_root(j, &beta);
            }
            if !beta.is_positive() {
                return false;
            }
        }
        true
    }

    /// All positive roots, or `None` when the root system is infinite (more
    /// than an internal cap of roots found).
    pub fn positive_roots(&self) -> Option<Vec<RootCombo>> {
        let n = self.rank();
        let mut seen: HashSet<RootCombo> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for i in 1..=n {
            let a = RootCombo::simple(n, i);
            seen.insert(a.clone());
            order.push(a.clone());
            queue.push_back(a);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 1..=n {
                let gamma = self.reflect_root(i, &beta);
                if gamma.is_positive() && seen.insert(gamma.clone()) {
                    if seen.len() > ROOT_CAP {
                        return None;
                    }
                    order.push(gamma.clone());
                    queue.push_back(gamma);
                }
            }
        }
        order.sort_by_key(|r| (r.0.iter().sum::<i64>(), r.0.clone()));
        Some(order)
    }

    pub fn is_finite_type(&self) -> bool {
        self.positive_roots().is_some()
    }

    /// Length of the longest Weyl group element (number of positive roots).
    pub fn longest_length(&self) -> Option<usize> {
        self.positive_roots().map(|r| r.len())
    }

    /// Extends a reduced word to a reduced word for `w_0` by greedily
    /// appending the smallest letter that keeps the word reduced.
    pub fn complete_to_longest(&self, word: &ReducedWord) -> Result<ReducedWord, RootDataError> {
        let total = self.longest_length().ok_or(RootDataError::NotFiniteType)?;
        if !self.is_reduced(word.letters()) {
            return Err(RootDataError::NotReduced(word.clone()));
        }
        let mut letters = word.letters().to_vec();
        while letters.len() < total {
            let next = (1..=self.rank())
                .find(|&i| {
                    letters.push(i);
                    let ok = self.is_reduced(&letters);
                    letters.pop();
                    ok
                })
                .expect("a reduced word shorter than w_0 always has a reduced extension");
            letters.push(next);
        }
        Ok(ReducedWord { letters })
    }

    /// Every reduced word of length at most `max_len`, the empty word
    /// included, in shortlex order.
    pub fn reduced_words(&self, max_len: usize) -> Vec<ReducedWord> {
        let mut out = vec![ReducedWord::empty()];
        let mut layer = vec![Vec::<usize>::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for i in 1..=self.rank() {
                    let mut v = w.clone();
                    v.push(i);
                    if self.is_reduced(&v) {
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().map(|v| ReducedWord { letters: v.clone() }));
            layer = next;
        }
        out
    }

    /// `lambda - w_0(lambda)` in the simple-root basis. Every weight `mu` of
    /// `V(lambda)` satisfies `0 <= lambda - mu <= lambda - w_0(lambda)`
    /// componentwise.
    pub fn lowest_weight_gap(&self, lambda: &WeightVec) -> Result<RootCombo, RootDataError> {
        self.check_weight(lambda)?;
        let roots = self.positive_roots().ok_or(RootDataError::NotFiniteType)?;
        let w0 = self.complete_to_longest(&ReducedWord::empty())?;
        debug_assert_eq!(w0.len(), roots.len());
        let mut mu = lambda.clone();
        let mut gap = RootCombo::zero(self.rank());
        for &i in w0.letters() {
            let k = mu.pair(i);
            gap.add_scaled(i, k);
            mu = self.reflect(i, &mu);
        }
        Ok(gap)
    }

    /// `dim V(lambda)` from the Weyl dimension formula, evaluated on the
    /// positive coroots (the positive roots of the transposed matrix).
    pub fn weyl_dim_oracle(&self, lambda: &WeightVec) -> Result<BigUint, RootDataError> {
        self.check_dominant(lambda)?;
        let coroots = self
            .transpose()
            .positive_roots()
            .ok_or(RootDataError::NotFiniteType)?;
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for b in &coroots {
            let top: i64 = b.0.iter().zip(&lambda.0).map(|(bi, li)| bi * (li + 1)).sum();
            let bottom: i64 = b.0.iter().sum();
            num *= BigUint::from(top as u64);
            den *= BigUint::from(bottom as u64);
        }
        let (q, r) = num.div_rem(&den);
        debug_assert!(r.is_zero());
        Ok(q)
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl FromStr for ReducedWord {
    type Err = RootDataError;

    /// Parses a comma-separated list without validating against a matrix.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ints = parse_int_list(s)?;
        if ints.iter().any(|&x| x <= 0) {
            return Err(RootDataError::Parse(s.to_string()));
        }
        Ok(ReducedWord {
            letters: ints.into_iter().map(|x| x as usize).collect(),
        })
    }
}

/// Parses `"1,2,-3"` (whitespace tolerated, empty string is the empty list).
pub fn parse_int_list(s: &str) -> Result<Vec<i64>, RootDataError> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| RootDataError::Parse(s.to_string()))
        })
        .collect()
}

fn write_list(f: &mut fmt::Formatter<'_>, v: &[i64]) -> fmt::Result {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    write!(f, "({})", parts.join(","))
}
