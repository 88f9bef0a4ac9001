//! Demazure crystals `B_w(λ)` inside the twisted sequence crystal, their
//! `ε*`-cut counterparts in `B_w(∞)`, graded point sets over dilations of
//! `λ`, and string parameter point sets.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binfinity::{self, BInfElement, BInfError};
use crate::rootdata::{CartanMatrix, ReducedWord, RootDataError, WeightVec};
use crate::zcrystal::{Crystal, LambdaTwist, SequenceSpec, Twisted, ZCrystalError, ZElement};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DemazureError {
    #[error(transparent)]
    RootData(#[from] RootDataError),

    #[error(transparent)]
    Sequence(#[from] ZCrystalError),

    #[error(transparent)]
    BInfinity(#[from] BInfError),

    #[error("element {element} has support beyond the {word_len} positions of the word")]
    SupportOverflow { element: ZElement, word_len: usize },

    #[error("the number of levels must be at least 1")]
    NoLevels,
}

pub type PointSet = BTreeSet<Vec<i64>>;

/// The Demazure crystal `B_w(λ)` for a reduced word of `w`, realized as
/// twisted sequences, with its coordinate vectors of length `r = ℓ(w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemazureSet {
    pub word: ReducedWord,
    pub lambda: WeightVec,
    pub elements: Vec<LambdaTwist>,
    pub coords: PointSet,
}

impl DemazureSet {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Point sets indexed by the dilation level `k >= 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPointSet {
    pub levels: BTreeMap<usize, PointSet>,
}

impl GradedPointSet {
    pub fn level(&self, k: usize) -> Option<&PointSet> {
        self.levels.get(&k)
    }

    pub fn max_level(&self) -> usize {
        self.levels.keys().next_back().copied().unwrap_or(0)
    }
}

fn coords_of(elements: &BTreeSet<ZElement>, r: usize) -> Result<PointSet, DemazureError> {
    elements
        .iter()
        .map(|x| {
            if x.support_len() > r {
                Err(DemazureError::SupportOverflow {
                    element: x.clone(),
                    word_len: r,
                })
            } else {
                Ok(x.padded(r))
            }
        })
        .collect()
}

/// Sweeps `f̃_{j_r}^{a_r} .. f̃_{j_1}^{a_1}` over the crystal, starting from
/// zero. Along each letter, the exponent grows until `step` refuses.
fn sweep<F>(letters: &[usize], mut step: F) -> BTreeSet<ZElement>
where
    F: FnMut(&ZElement, usize) -> Option<ZElement>,
{
    let mut layer = BTreeSet::from([ZElement::zero()]);
    for &j in letters {
        let mut next = BTreeSet::new();
        for x in &layer {
            let mut y = x.clone();
            loop {
                let z = step(&y, j);
                next.insert(y);
                match z {
                    Some(z) => y = z,
                    None => break,
                }
            }
        }
        layer = next;
    }
    layer
}

/// `B_w(λ) = {f̃_{j_r}^{a_r} .. f̃_{j_1}^{a_1}(0 ⊗ r_λ)} ∖ {0}` in the crystal
/// twisted by `λ`, for the sequence that extends `word` to `w_0`.
pub fn enumerate_demazure(
    cartan: &CartanMatrix,
    word: &ReducedWord,
    lambda: &WeightVec,
) -> Result<DemazureSet, DemazureError> {
    let spec = SequenceSpec::for_word(cartan, word)?;
    let twisted = Twisted::new(&spec, lambda)?;
    let bodies = sweep(word.letters(), |x, j| twisted.f(x, j));
    let coords = coords_of(&bodies, word.len())?;
    let elements = bodies
        .into_iter()
        .map(|body| LambdaTwist {
            body,
            lambda: lambda.clone(),
        })
        .collect();
    Ok(DemazureSet {
        word: word.clone(),
        lambda: lambda.clone(),
        elements,
        coords,
    })
}

/// `{x ∈ B_w(∞) | ε*_i(x) <= λ_i for all i}`.
///
/// `B_w(∞)` is infinite, so the exponent sweep is capped by weight: every
/// surviving element has `Σ a_k α_{j_k} <= λ - w_0 λ`, and `f̃` only lowers
/// the weight. Within that cap a chain is also cut as soon as some `ε*_i`
/// exceeds `λ_i`, since `ε*_i(f̃_j b) >= ε*_i(b)`.
pub fn btilde_cut(
    cartan: &CartanMatrix,
    word: &ReducedWord,
    lambda: &WeightVec,
) -> Result<Vec<BInfElement>, DemazureError> {
    let spec = SequenceSpec::for_word(cartan, word)?;
    cartan.check_dominant(lambda)?;
    let gap = cartan.lowest_weight_gap(lambda)?;
    let admissible = |x: &ZElement| {
        let mut depth = spec.wt_root(x);
        depth.0.iter_mut().for_each(|c| *c = -*c);
        if !depth.dominated_by(&gap) {
            return false;
        }
        let y = binfinity::star_unchecked(&spec, x);
        (1..=cartan.rank()).all(|i| spec.epsilon(&y, i) <= lambda.pair(i))
    };
    let found = sweep(word.letters(), |x, j| spec.f(x, j).filter(|y| admissible(y)));
    Ok(found.into_iter().map(BInfElement::trusted).collect())
}

/// The coordinate vectors of [`btilde_cut`], padded to the word length.
pub fn btilde_cut_coords(
    cartan: &CartanMatrix,
    word: &ReducedWord,
    lambda: &WeightVec,
) -> Result<PointSet, DemazureError> {
    let elements: BTreeSet<ZElement> = btilde_cut(cartan, word, lambda)?
        .into_iter()
        .map(BInfElement::into_inner)
        .collect();
    coords_of(&elements, word.len())
}

/// Level `k` holds the coordinates of `B_w(kλ)`, for `k = 1..=k_max`.
pub fn semigroup_points(
    cartan: &CartanMatrix,
    word: &ReducedWord,
    lambda: &WeightVec,
    k_max: usize,
) -> Result<GradedPointSet, DemazureError> {
    if k_max == 0 {
        return Err(DemazureError::NoLevels);
    }
    let levels = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            enumerate_demazure(cartan, word, &lambda.scale(k as i64)).map(|d| (k, d.coords))
        })
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    Ok(GradedPointSet { levels })
}

/// String parameters along `(j_1, .., j_r)` of the elements of
/// [`btilde_cut`]. Extraction must end at the origin; for words whose
/// Demazure crystal is not exhausted in this direction the call fails with
/// [`BInfError::Incomplete`].
pub fn string_points(
    cartan: &CartanMatrix,
    word: &ReducedWord,
    lambda: &WeightVec,
) -> Result<PointSet, DemazureError> {
    let spec = SequenceSpec::for_word(cartan, word)?;
    btilde_cut(cartan, word, lambda)?
        .iter()
        .map(|x| {
            binfinity::string_param(&spec, x.coords(), word.letters(), true)
                .map_err(DemazureError::from)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cartan(family: char) -> CartanMatrix {
        CartanMatrix::builtin(family, 2).unwrap()
    }

    fn word(c: &CartanMatrix, letters: &[usize]) -> ReducedWord {
        ReducedWord::new(c, letters.to_vec()).unwrap()
    }

    fn pts(v: &[&[i64]]) -> PointSet {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn demazure_examples() {
        let a2 = cartan('A');
        let w1 = WeightVec(vec![1, 0]);
        let d = enumerate_demazure(&a2, &word(&a2, &[1]), &w1).unwrap();
        assert_eq!(d.coords, pts(&[&[0], &[1]]));
        let d = enumerate_demazure(&a2, &word(&a2, &[1, 2, 1]), &w1).unwrap();
        assert_eq!(d.coords, pts(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0]]));
        assert_eq!(d.elements.len(), 3);
        let d = enumerate_demazure(&a2, &word(&a2, &[1, 2, 1]), &WeightVec(vec![0, 0])).unwrap();
        assert_eq!(d.coords, pts(&[&[0, 0, 0]]));
        let rho = enumerate_demazure(&a2, &word(&a2, &[1, 2, 1]), &WeightVec(vec![1, 1])).unwrap();
        assert_eq!(rho.len(), 8);
    }

    #[test]
    fn demazure_rejects_bad_input() {
        let a2 = cartan('A');
        let w = ReducedWord::new(&a2, vec![1, 2]).unwrap();
        assert!(enumerate_demazure(&a2, &w, &WeightVec(vec![-1, 0])).is_err());
        let bad: ReducedWord = "1,1".parse().unwrap();
        assert!(enumerate_demazure(&a2, &bad, &WeightVec(vec![1, 0])).is_err());
    }

    #[test]
    fn cut_examples() {
        let a2 = cartan('A');
        let w = word(&a2, &[1, 2, 1]);
        let got = btilde_cut_coords(&a2, &w, &WeightVec(vec![1, 0])).unwrap();
        assert_eq!(got, pts(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0]]));
        assert_eq!(btilde_cut(&a2, &w, &WeightVec(vec![1, 1])).unwrap().len(), 8);
        assert_eq!(
            btilde_cut_coords(&a2, &w, &WeightVec(vec![0, 0])).unwrap(),
            pts(&[&[0, 0, 0]])
        );
    }

    #[test]
    fn per_letter_bound_by_lambda_alone_is_too_small() {
        // (1,2,1) lies in B(ρ) for A2 although a_2 = 2 > ⟨ρ, h_2⟩ = 1.
        let a2 = cartan('A');
        let d = enumerate_demazure(&a2, &word(&a2, &[1, 2, 1]), &WeightVec(vec![1, 1])).unwrap();
        assert!(d.coords.contains(&vec![1, 2, 1]));
    }

    #[test]
    fn demazure_equals_cut_for_all_rank_two_words() {
        for fam in ['A', 'B', 'C', 'G'] {
            let c = cartan(fam);
            for w in c.reduced_words(6) {
                for l1 in 0..=2 {
                    for l2 in 0..=2 {
                        let lambda = WeightVec(vec![l1, l2]);
                        let d = enumerate_demazure(&c, &w, &lambda).unwrap();
                        let b = btilde_cut_coords(&c, &w, &lambda).unwrap();
                        assert_eq!(d.coords, b, "{fam} {w} {lambda}");
                    }
                }
            }
        }
    }

    #[test]
    fn full_demazure_sizes_match_weyl_dimensions() {
        for (fam, rank) in [('A', 2), ('C', 2), ('G', 2), ('A', 3), ('B', 3)] {
            let c = CartanMatrix::builtin(fam, rank).unwrap();
            let w0 = c.complete_to_longest(&ReducedWord::empty()).unwrap();
            for lambda in [vec![1; rank], {
                let mut v = vec![0; rank];
                v[0] = 2;
                v
            }] {
                let lambda = WeightVec(lambda);
                let d = enumerate_demazure(&c, &w0, &lambda).unwrap();
                let dim = c.weyl_dim_oracle(&lambda).unwrap();
                assert_eq!(dim, d.len().into(), "{fam}{rank} {lambda}");
            }
        }
    }

    #[test]
    fn prefixes_give_nested_sets() {
        let c2 = cartan('C');
        let full = word(&c2, &[2, 1, 2, 1]);
        let lambda = WeightVec(vec![1, 2]);
        for k in 0..4 {
            let small = enumerate_demazure(&c2, &full.prefix(k), &lambda).unwrap();
            let big = enumerate_demazure(&c2, &full.prefix(k + 1), &lambda).unwrap();
            for p in &small.coords {
                let mut q = p.clone();
                q.push(0);
                assert!(big.coords.contains(&q));
            }
        }
    }

    #[test]
    fn graded_levels() {
        let a2 = cartan('A');
        let g = semigroup_points(&a2, &word(&a2, &[1, 2, 1]), &WeightVec(vec![1, 1]), 2).unwrap();
        assert_eq!(g.level(1).unwrap().len(), 8);
        assert_eq!(g.level(2).unwrap().len(), 27);
        assert_eq!(g.max_level(), 2);
        let g = semigroup_points(&a2, &word(&a2, &[1, 2]), &WeightVec(vec![0, 0]), 3).unwrap();
        for k in 1..=3 {
            assert_eq!(g.level(k).unwrap(), &pts(&[&[0, 0]]));
        }
        assert_eq!(
            semigroup_points(&a2, &word(&a2, &[1]), &WeightVec(vec![1, 0]), 0),
            Err(DemazureError::NoLevels)
        );
    }

    #[test]
    fn string_point_examples() {
        let a2 = cartan('A');
        let w = word(&a2, &[1, 2, 1]);
        let got = string_points(&a2, &w, &WeightVec(vec![1, 0])).unwrap();
        assert_eq!(got, pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 1]]));
        let got = string_points(&a2, &w, &WeightVec(vec![1, 1])).unwrap();
        assert_eq!(got.len(), 8);
        for a in &got {
            assert!(0 <= a[2] && a[2] <= 1);
            assert!(a[2] <= a[1] && a[1] <= a[2] + 1);
            assert!(0 <= a[0] && a[0] <= a[1] - 2 * a[2] + 1);
        }
        assert_eq!(
            string_points(&a2, &w, &WeightVec(vec![0, 0])).unwrap(),
            pts(&[&[0, 0, 0]])
        );
    }

    #[test]
    fn string_points_obey_nested_bounds() {
        for fam in ['A', 'C', 'G'] {
            let c = cartan(fam);
            for w in c.reduced_words(6).into_iter().filter(|w| w.len() == c.longest_length().unwrap()) {
                for lambda in [WeightVec(vec![1, 1]), WeightVec(vec![2, 1])] {
                    for a in string_points(&c, &w, &lambda).unwrap() {
                        // Rebuild the path f̃_{d_r}^{a_r} first, down to f̃_{d_1}^{a_1}.
                        let mut mu = lambda.clone();
                        for (k, &d) in w.letters().iter().enumerate().rev() {
                            assert!(0 <= a[k] && a[k] <= mu.pair(d), "{fam} {w} {a:?}");
                            let alpha = c.simple_root(d);
                            mu = mu.add(&alpha.scale(-a[k]));
                        }
                    }
                }
            }
        }
    }
}
