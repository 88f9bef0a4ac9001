//! `B(∞)` as the connected component of the zero sequence, with the star
//! involution, `ε*`, string parameterizations and the transition map `η`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::zcrystal::{Crystal, SequenceSpec, ZCrystalError, ZElement};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BInfError {
    #[error(transparent)]
    Sequence(#[from] ZCrystalError),

    #[error("{0} is not in the image of B(∞)")]
    NotMember(ZElement),

    #[error("the index sequence does not start with a longest word")]
    NoLongestWord,

    #[error("string extraction left the nonzero residue {0}")]
    Incomplete(ZElement),

    #[error("letter {letter} is outside the index range 1..={rank}")]
    BadDirection { letter: usize, rank: usize },
}

/// A sequence certified to lie in the image of `B(∞)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BInfElement(ZElement);

impl BInfElement {
    pub fn new(spec: &SequenceSpec, x: ZElement) -> Result<Self, BInfError> {
        if membership(spec, &x) {
            Ok(BInfElement(x))
        } else {
            Err(BInfError::NotMember(x))
        }
    }

    /// Wraps an element known to be an `f̃`-image of zero.
    pub(crate) fn trusted(x: ZElement) -> Self {
        BInfElement(x)
    }

    pub fn coords(&self) -> &ZElement {
        &self.0
    }

    pub fn into_inner(self) -> ZElement {
        self.0
    }
}

/// Decides whether `x` is reachable from zero by lowering operators.
///
/// Greedily applies `ẽ_i` for the smallest `i` with `ε_i > 0`. Images of
/// `B(∞)` have nonnegative entries and are `ẽ`-stable, so a negative entry
/// rules membership out; the entry sum drops by one per step, so the loop
/// terminates.
pub fn membership(spec: &SequenceSpec, x: &ZElement) -> bool {
    if x.entries().iter().any(|&a| a < 0) {
        return false;
    }
    let n = spec.rank();
    let mut y = x.clone();
    loop {
        let Some(i) = (1..=n).find(|&i| spec.epsilon(&y, i) > 0) else {
            return y.is_zero();
        };
        y = spec.e(&y, i).expect("ε_i > 0");
        if y.entries().iter().any(|&a| a < 0) {
            return false;
        }
    }
}

fn require_member(spec: &SequenceSpec, x: &ZElement) -> Result<(), BInfError> {
    if membership(spec, x) {
        Ok(())
    } else {
        Err(BInfError::NotMember(x.clone()))
    }
}

/// Kashiwara's involution: `b* = f̃_{i_1}^{a_1} f̃_{i_2}^{a_2} .. b_∞`, that is,
/// `f̃_{i_K}^{a_K}` is applied first and `f̃_{i_1}^{a_1}` last.
pub fn star(spec: &SequenceSpec, x: &ZElement) -> Result<ZElement, BInfError> {
    require_member(spec, x)?;
    Ok(star_unchecked(spec, x))
}

pub(crate) fn star_unchecked(spec: &SequenceSpec, x: &ZElement) -> ZElement {
    let mut y = ZElement::zero();
    for k in (1..=x.support_len()).rev() {
        let i = spec.letter(k);
        for _ in 0..x.get(k) {
            y = spec.f(&y, i).expect("f̃ is total on sequences");
        }
    }
    y
}

/// `ε*_i(x) = ε_i(x*)`.
pub fn eps_star(spec: &SequenceSpec, x: &ZElement, i: usize) -> Result<i64, BInfError> {
    Ok(spec.epsilon(&star(spec, x)?, i))
}

/// String parameters of `x` along `direction = (d_1, .., d_m)`:
/// `c_1 = ε_{d_1}(x)`, then `x ← ẽ_{d_1}^max x`, `c_2 = ε_{d_2}(x)`, and so on.
/// With `complete`, the residue after the last step must be the origin.
pub fn string_param<C: Crystal + ?Sized>(
    crystal: &C,
    x: &ZElement,
    direction: &[usize],
    complete: bool,
) -> Result<Vec<i64>, BInfError> {
    let rank = crystal.rank();
    if let Some(&letter) = direction.iter().find(|&&d| d == 0 || d > rank) {
        return Err(BInfError::BadDirection { letter, rank });
    }
    let mut y = x.clone();
    let mut out = Vec::with_capacity(direction.len());
    for &d in direction {
        out.push(crystal.epsilon(&y, d));
        y = crystal.e_max(&y, d);
    }
    if complete && !y.is_zero() {
        return Err(BInfError::Incomplete(y));
    }
    Ok(out)
}

/// `η(x)`: the string parameters of the element with coordinates `x` along
/// the longest word `(i_1, .., i_N)` read from `i_1`. This realizes the star
/// involution on coordinates, so `η ∘ η = id` on the image of `B(∞)`.
pub fn eta(spec: &SequenceSpec, x: &ZElement) -> Result<Vec<i64>, BInfError> {
    let word = spec.longest_word().ok_or(BInfError::NoLongestWord)?;
    require_member(spec, x)?;
    string_param(spec, x, word, true)
}
