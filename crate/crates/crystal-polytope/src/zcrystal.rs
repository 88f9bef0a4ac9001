//! The crystal structure on finitely supported integer sequences attached to
//! an infinite index sequence, and its twist by the one-element crystal `R_λ`.
//!
//! A sequence `a = (a_1, a_2, ..)` is stored as the finite list
//! `(a_1, .., a_K)` with trailing zeros trimmed. With
//! `σ_k(a) = a_k + Σ_{j>k} <α_{i_j}, h_{i_k}> a_j` the crystal data are
//! `ε_i(a) = max{σ_k(a) | i_k = i}`, `wt(a) = -Σ a_j α_{i_j}`, and the
//! operators act at the extreme positions of `M^(i) = {k | i_k = i, σ_k = ε_i}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootdata::{CartanMatrix, ReducedWord, RootCombo, RootDataError, WeightVec};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ZCrystalError {
    #[error(transparent)]
    RootData(#[from] RootDataError),

    #[error("index sequences need rank at least 2 (a rank-1 sequence cannot avoid equal neighbours)")]
    RankOne,

    #[error("letters at positions {position} and {} coincide", position + 1)]
    RepeatedLetter { position: usize },

    #[error("the base word has {base} letters but the Demazure word needs {word}")]
    WordTooLong { base: usize, word: usize },
}

/// An infinite index sequence `i_1, i_2, ..`: an explicit prefix followed by
/// a periodic cycle through `1..=n`.
///
/// When built from a reduced word, the prefix is that word completed to a
/// reduced word for `w_0`, so positions `1..=N` form a longest word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec {
    cartan: CartanMatrix,
    prefix: Vec<usize>,
    word_len: usize,
    longest_len: Option<usize>,
    offset: usize,
}

impl SequenceSpec {
    /// Sequence for a reduced word `w`: `w`, then its greedy completion to
    /// `w_0`, then the periodic tail. Requires finite type and rank >= 2.
    pub fn for_word(cartan: &CartanMatrix, word: &ReducedWord) -> Result<Self, ZCrystalError> {
        let word = ReducedWord::new(cartan, word.letters().to_vec())?;
        let full = cartan.complete_to_longest(&word)?;
        let mut spec = Self::from_prefix(cartan, full.letters().to_vec(), word.len())?;
        spec.longest_len = Some(full.len());
        Ok(spec)
    }

    /// Sequence for `w_0` itself: the greedy longest word.
    pub fn longest(cartan: &CartanMatrix) -> Result<Self, ZCrystalError> {
        Self::for_word(cartan, &ReducedWord::empty())
    }

    /// Sequence with an arbitrary explicit prefix; works for any symmetrizable
    /// matrix. `word_len` marks how many leading positions form the word of
    /// interest.
    pub fn from_prefix(
        cartan: &CartanMatrix,
        prefix: Vec<usize>,
        word_len: usize,
    ) -> Result<Self, ZCrystalError> {
        let n = cartan.rank();
        if n < 2 {
            return Err(ZCrystalError::RankOne);
        }
        if word_len > prefix.len() {
            return Err(ZCrystalError::WordTooLong {
                base: prefix.len(),
                word: word_len,
            });
        }
        if let Some(&letter) = prefix.iter().find(|&&l| l == 0 || l > n) {
            return Err(RootDataError::LetterOutOfRange { letter, rank: n }.into());
        }
        if let Some(p) = prefix.windows(2).position(|w| w[0] == w[1]) {
            return Err(ZCrystalError::RepeatedLetter { position: p + 1 });
        }
        let offset = usize::from(prefix.last() == Some(&1));
        Ok(SequenceSpec {
            cartan: cartan.clone(),
            prefix,
            word_len,
            longest_len: None,
            offset,
        })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// Length `r` of the word of interest (the leading positions).
    pub fn word_len(&self) -> usize {
        self.word_len
    }

    /// Length `N` of the longest word, when the prefix contains one.
    pub fn longest_len(&self) -> Option<usize> {
        self.longest_len
    }

    /// The word of interest `(i_1, .., i_r)`.
    pub fn word(&self) -> &[usize] {
        &self.prefix[..self.word_len]
    }

    /// The longest word `(i_1, .., i_N)` if known.
    pub fn longest_word(&self) -> Option<&[usize]> {
        self.longest_len.map(|n| &self.prefix[..n])
    }

    /// The letter `i_k`, `k >= 1`.
    pub fn letter(&self, k: usize) -> usize {
        assert!(k >= 1, "positions start at 1");
        if k <= self.prefix.len() {
            self.prefix[k - 1]
        } else {
            let m = k - self.prefix.len();
            (m - 1 + self.offset) % self.rank() + 1
        }
    }

    /// The letters `i_1, .., i_m`.
    pub fn letters(&self, m: usize) -> Vec<usize> {
        (1..=m).map(|k| self.letter(k)).collect()
    }

    /// `k^(+)`: the next position after `k` carrying the same letter.
    pub fn next_occurrence(&self, k: usize) -> usize {
        let i = self.letter(k);
        let mut l = k + 1;
        while self.letter(l) != i {
            l += 1;
        }
        l
    }

    /// `k^(-)`: the previous position carrying the same letter, or 0.
    pub fn prev_occurrence(&self, k: usize) -> usize {
        let i = self.letter(k);
        (1..k).rev().find(|&l| self.letter(l) == i).unwrap_or(0)
    }

    /// The first position carrying letter `i`.
    pub fn first_occurrence(&self, i: usize) -> usize {
        self.first_occurrence_after(0, i)
    }

    /// The first position strictly after `k` carrying letter `i`.
    pub fn first_occurrence_after(&self, k: usize, i: usize) -> usize {
        let mut l = k + 1;
        while self.letter(l) != i {
            l += 1;
        }
        l
    }

    /// `<α_{i_j}, h_{i_k}>`.
    fn coupling(&self, k: usize, j: usize) -> i64 {
        self.cartan.entry(self.letter(k), self.letter(j))
    }

    /// `σ_k(x)`.
    pub fn sigma(&self, x: &ZElement, k: usize) -> i64 {
        let top = x.support_len();
        let tail: i64 = (k + 1..=top).map(|j| self.coupling(k, j) * x.get(j)).sum();
        x.get(k) + tail
    }

    /// `σ_1(x), .., σ_K(x)` for `K` the top of the support, in one backward pass.
    pub fn sigma_profile(&self, x: &ZElement) -> Vec<i64> {
        let n = self.rank();
        let top = x.support_len();
        let mut acc = vec![0i64; n];
        let mut out = vec![0i64; top];
        for k in (1..=top).rev() {
            let ik = self.letter(k);
            out[k - 1] = x.get(k) + acc[ik - 1];
            let a = x.get(k);
            if a != 0 {
                for (i, slot) in acc.iter_mut().enumerate() {
                    *slot += self.cartan.entry(i + 1, ik) * a;
                }
            }
        }
        out
    }

    /// `wt(x) = -Σ a_j α_{i_j}` in the simple-root basis.
    pub fn wt_root(&self, x: &ZElement) -> RootCombo {
        let mut w = RootCombo::zero(self.rank());
        for (k, &a) in x.entries().iter().enumerate() {
            w.add_scaled(self.letter(k + 1), -a);
        }
        w
    }

    /// `ε_i` together with the extreme positions of `M^(i)` inside the support.
    fn extremes(&self, x: &ZElement, i: usize) -> (i64, Option<usize>, Option<usize>) {
        let profile = self.sigma_profile(x);
        let eps = profile
            .iter()
            .enumerate()
            .filter(|(k, _)| self.letter(k + 1) == i)
            .map(|(_, &s)| s)
            .fold(0, i64::max);
        let hits: Vec<usize> = profile
            .iter()
            .enumerate()
            .filter(|(k, &s)| self.letter(k + 1) == i && s == eps)
            .map(|(k, _)| k + 1)
            .collect();
        (eps, hits.first().copied(), hits.last().copied())
    }
}

/// A finitely supported integer sequence `(a_1, a_2, ..)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct ZElement(Vec<i64>);

impl ZElement {
    pub fn new(mut entries: Vec<i64>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        ZElement(entries)
    }

    pub fn zero() -> Self {
        ZElement(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `a_k` for `k >= 1` (zero beyond the support).
    pub fn get(&self, k: usize) -> i64 {
        self.0.get(k - 1).copied().unwrap_or(0)
    }

    /// The largest position with a nonzero entry (0 for the zero element).
    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// `(a_1, .., a_r)`, zero padded. Panics if the support exceeds `r`.
    pub fn padded(&self, r: usize) -> Vec<i64> {
        assert!(self.0.len() <= r, "support {} exceeds {r}", self.0.len());
        let mut v = self.0.clone();
        v.resize(r, 0);
        v
    }

    /// Adds `delta` at position `k`.
    pub fn bumped(&self, k: usize, delta: i64) -> Self {
        let mut v = self.0.clone();
        if v.len() < k {
            v.resize(k, 0);
        }
        v[k - 1] += delta;
        ZElement::new(v)
    }
}

impl fmt::Display for ZElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A crystal whose underlying set is identified with finitely supported
/// integer sequences. `None` plays the role of the formal element 0.
pub trait Crystal {
    fn rank(&self) -> usize;
    fn epsilon(&self, x: &ZElement, i: usize) -> i64;
    fn phi(&self, x: &ZElement, i: usize) -> i64;
    /// Weight in fundamental-weight coordinates.
    fn weight(&self, x: &ZElement) -> WeightVec;
    fn e(&self, x: &ZElement, i: usize) -> Option<ZElement>;
    fn f(&self, x: &ZElement, i: usize) -> Option<ZElement>;

    /// `ẽ_i^max x = ẽ_i^{ε_i(x)} x`.
    fn e_max(&self, x: &ZElement, i: usize) -> ZElement {
        let mut y = x.clone();
        for _ in 0..self.epsilon(x, i) {
            y = self.e(&y, i).expect("ẽ_i is defined ε_i times");
        }
        y
    }
}

impl Crystal for SequenceSpec {
    fn rank(&self) -> usize {
        self.cartan.rank()
    }

    fn epsilon(&self, x: &ZElement, i: usize) -> i64 {
        self.extremes(x, i).0
    }

    fn phi(&self, x: &ZElement, i: usize) -> i64 {
        self.epsilon(x, i) + self.cartan.pair_root(&self.wt_root(x), i)
    }

    fn weight(&self, x: &ZElement) -> WeightVec {
        self.cartan.root_to_weight(&self.wt_root(x))
    }

    fn e(&self, x: &ZElement, i: usize) -> Option<ZElement> {
        let (eps, _, last) = self.extremes(x, i);
        if eps == 0 {
            return None;
        }
        Some(x.bumped(last.expect("ε_i > 0 is attained in the support"), -1))
    }

    fn f(&self, x: &ZElement, i: usize) -> Option<ZElement> {
        let (eps, first, _) = self.extremes(x, i);
        let k = match first {
            Some(k) => k,
            // ε_i = 0 is attained only beyond the support, where σ_k = 0.
            None => {
                debug_assert_eq!(eps, 0);
                self.first_occurrence_after(x.support_len(), i)
            }
        };
        Some(x.bumped(k, 1))
    }
}

/// An element `b ⊗ r_λ` of the twisted crystal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LambdaTwist {
    pub body: ZElement,
    pub lambda: WeightVec,
}

/// The full crystal data of a twisted element in direction `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistOps {
    pub epsilon: i64,
    pub phi: i64,
    pub weight: WeightVec,
    pub e: Option<LambdaTwist>,
    pub f: Option<LambdaTwist>,
}

/// The crystal `Z^∞ ⊗ R_λ`, with `ε_i(r_λ) = -λ_i`, `φ_i(r_λ) = 0` and
/// `ẽ_i r_λ = f̃_i r_λ = 0`.
#[derive(Debug, Clone)]
pub struct Twisted<'a> {
    spec: &'a SequenceSpec,
    lambda: WeightVec,
}

impl<'a> Twisted<'a> {
    pub fn new(spec: &'a SequenceSpec, lambda: &WeightVec) -> Result<Self, ZCrystalError> {
        spec.cartan().check_dominant(lambda)?;
        Ok(Twisted {
            spec,
            lambda: lambda.clone(),
        })
    }

    pub fn spec(&self) -> &SequenceSpec {
        self.spec
    }

    pub fn lambda(&self) -> &WeightVec {
        &self.lambda
    }

    pub fn ops(&self, x: &ZElement, i: usize) -> TwistOps {
        let wrap = |b: ZElement| LambdaTwist {
            body: b,
            lambda: self.lambda.clone(),
        };
        TwistOps {
            epsilon: self.epsilon(x, i),
            phi: self.phi(x, i),
            weight: self.weight(x),
            e: self.e(x, i).map(wrap),
            f: self.f(x, i).map(wrap),
        }
    }
}

impl Crystal for Twisted<'_> {
    fn rank(&self) -> usize {
        self.spec.rank()
    }

    fn epsilon(&self, x: &ZElement, i: usize) -> i64 {
        let wt = self.spec.cartan().pair_root(&self.spec.wt_root(x), i);
        self.spec.epsilon(x, i).max(-self.lambda.pair(i) - wt)
    }

    fn phi(&self, x: &ZElement, i: usize) -> i64 {
        (self.spec.phi(x, i) + self.lambda.pair(i)).max(0)
    }

    fn weight(&self, x: &ZElement) -> WeightVec {
        self.spec.weight(x).add(&self.lambda)
    }

    fn e(&self, x: &ZElement, i: usize) -> Option<ZElement> {
        if self.spec.phi(x, i) >= -self.lambda.pair(i) {
            self.spec.e(x, i)
        } else {
            None
        }
    }

    fn f(&self, x: &ZElement, i: usize) -> Option<ZElement> {
        if self.spec.phi(x, i) > -self.lambda.pair(i) {
            self.spec.f(x, i)
        } else {
            None
        }
    }
}

/// Checks the crystal axioms at `(x, i)`: the `φ`/`ε`/`wt` relation and the
/// behaviour of `ẽ_i`, `f̃_i` and their mutual inverse property. Returns a
/// description of the first violated axiom.
pub fn check_axioms<C: Crystal + ?Sized>(
    c: &C,
    cartan: &CartanMatrix,
    x: &ZElement,
    i: usize,
) -> Result<(), String> {
    let eps = c.epsilon(x, i);
    let phi = c.phi(x, i);
    let wt = c.weight(x);
    if phi != eps + wt.pair(i) {
        return Err(format!("φ ≠ ε + <wt,h> at {x}, i={i}"));
    }
    let alpha = cartan.simple_root(i);
    if let Some(y) = c.e(x, i) {
        if c.weight(&y) != wt.add(&alpha) {
            return Err(format!("wt(ẽ x) ≠ wt(x) + α at {x}, i={i}"));
        }
        if c.epsilon(&y, i) != eps - 1 || c.phi(&y, i) != phi + 1 {
            return Err(format!("ε/φ shift under ẽ fails at {x}, i={i}"));
        }
        if c.f(&y, i).as_ref() != Some(x) {
            return Err(format!("f̃ ẽ x ≠ x at {x}, i={i}"));
        }
    }
    if let Some(y) = c.f(x, i) {
        if c.weight(&y) != wt.add(&alpha.scale(-1)) {
            return Err(format!("wt(f̃ x) ≠ wt(x) - α at {x}, i={i}"));
        }
        if c.epsilon(&y, i) != eps + 1 || c.phi(&y, i) != phi - 1 {
            return Err(format!("ε/φ shift under f̃ fails at {x}, i={i}"));
        }
        if c.e(&y, i).as_ref() != Some(x) {
            return Err(format!("ẽ f̃ x ≠ x at {x}, i={i}"));
        }
    }
    Ok(())
}
