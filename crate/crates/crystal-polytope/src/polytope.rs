//! Exact rational half-space systems, lattice points inside integer boxes,
//! and level-by-level comparison of graded point sets with dilated systems.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::demazure::{GradedPointSet, PointSet};
use crate::inequalities::AffineForm;
use crate::rootdata::{CartanMatrix, ReducedWord, RootDataError, WeightVec};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error(transparent)]
    RootData(#[from] RootDataError),

    #[error("inequality has {got} coefficients but the system has dimension {dim}")]
    Dimension { dim: usize, got: usize },

    #[error("box bounds {lo:?} and {hi:?} are inconsistent")]
    BadBox { lo: Vec<i64>, hi: Vec<i64> },

    #[error("form {form} involves position {position} beyond dimension {dim}")]
    FormTooLong {
        form: String,
        position: usize,
        dim: usize,
    },
}

/// `⟨p, a⟩ + c >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl Inequality {
    pub fn from_ints(coeffs: &[i64], constant: i64) -> Self {
        Inequality {
            coeffs: coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            constant: BigRational::from_integer(constant.into()),
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Clears denominators and divides by the content, so that the
    /// coefficients and the constant form a primitive integer vector.
    fn normalized(&self) -> Inequality {
        let all = self.coeffs.iter().chain(std::iter::once(&self.constant));
        let lcm = all
            .clone()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = all.map(|c| (c * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let g = if g.is_zero() { BigInt::one() } else { g };
        let mut vals: Vec<BigRational> = ints
            .into_iter()
            .map(|x| BigRational::from_integer(x / &g))
            .collect();
        let constant = vals.pop().expect("constant present");
        Inequality {
            coeffs: vals,
            constant,
        }
    }

    pub fn eval(&self, a: &[i64]) -> BigRational {
        self.coeffs
            .iter()
            .zip(a)
            .fold(self.constant.clone(), |acc, (c, &x)| {
                acc + c * BigRational::from_integer(x.into())
            })
    }

    pub fn holds_at(&self, a: &[i64]) -> bool {
        !self.eval(a).is_negative()
    }
}

/// A finite system of inequalities `⟨p, a⟩ + c >= 0` over `Q^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpaceSystem {
    dim: usize,
    rows: Vec<Inequality>,
}

impl HalfSpaceSystem {
    pub fn new(dim: usize, rows: Vec<Inequality>) -> Result<Self, PolytopeError> {
        if let Some(r) = rows.iter().find(|r| r.coeffs.len() != dim) {
            return Err(PolytopeError::Dimension {
                dim,
                got: r.coeffs.len(),
            });
        }
        Ok(HalfSpaceSystem { dim, rows })
    }

    /// Forms over positions `1..=dim` with the weight substituted.
    pub fn from_forms(
        forms: &[AffineForm],
        dim: usize,
        lambda: &WeightVec,
    ) -> Result<Self, PolytopeError> {
        let rows = forms
            .iter()
            .map(|f| {
                if f.support_len() > dim {
                    return Err(PolytopeError::FormTooLong {
                        form: f.to_string(),
                        position: f.support_len(),
                        dim,
                    });
                }
                Ok(Inequality {
                    coeffs: (1..=dim).map(|k| f.coeff(k)).collect(),
                    constant: f.constant_at(lambda),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(HalfSpaceSystem { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    /// The rows as concrete affine forms over a weight lattice of rank `n`.
    pub fn to_forms(&self, n: usize) -> Vec<AffineForm> {
        self.rows
            .iter()
            .map(|r| {
                AffineForm::from_parts(
                    r.coeffs.iter().cloned().enumerate().map(|(k, c)| (k + 1, c)),
                    r.constant.clone(),
                    vec![BigRational::zero(); n],
                )
            })
            .collect()
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        self.rows.iter().all(|r| r.holds_at(a))
    }

    /// Integer-cleared, deduplicated and sorted; rows `0 >= -c` with
    /// `c <= 0` are dropped. With `prune`, rows implied by the others are
    /// removed as well.
    pub fn normalize(&self, prune: bool) -> HalfSpaceSystem {
        let rows: BTreeSet<Inequality> = self
            .rows
            .iter()
            .map(Inequality::normalized)
            .filter(|r| !(r.is_trivial() && !r.constant.is_negative()))
            .collect();
        let mut rows: Vec<Inequality> = rows.into_iter().collect();
        if prune && !has_contradiction(&project_all(self.dim, &rows)) {
            let mut k = 0;
            while k < rows.len() {
                let others: Vec<Inequality> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, r)| r.clone())
                    .collect();
                if implied(self.dim, &others, &rows[k]) {
                    rows.remove(k);
                } else {
                    k += 1;
                }
            }
        }
        HalfSpaceSystem {
            dim: self.dim,
            rows,
        }
    }
}

fn has_contradiction(rows: &[Inequality]) -> bool {
    rows.iter()
        .any(|r| r.is_trivial() && r.constant.is_negative())
}

/// Fourier–Motzkin elimination of variable `v`.
fn eliminate(rows: &[Inequality], v: usize) -> Vec<Inequality> {
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), BTreeSet::new());
    for r in rows {
        let c = &r.coeffs[v];
        if c.is_positive() {
            pos.push(r);
        } else if c.is_negative() {
            neg.push(r);
        } else {
            out.insert(r.normalized());
        }
    }
    for p in &pos {
        for n in &neg {
            let (cp, cn) = (p.coeffs[v].clone(), -n.coeffs[v].clone());
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(x, y)| x * &cn + y * &cp)
                .collect();
            let constant = &p.constant * &cn + &n.constant * &cp;
            out.insert(Inequality { coeffs, constant }.normalized());
        }
    }
    out.into_iter().collect()
}

fn project_all(dim: usize, rows: &[Inequality]) -> Vec<Inequality> {
    (0..dim).fold(rows.to_vec(), |acc, v| eliminate(&acc, v))
}

/// Whether `rows` (assumed feasible) imply `target`: the minimum of
/// `⟨p, a⟩` over the system, found by projecting onto an extra variable
/// `t = ⟨p, a⟩`, must be at least `-c`.
fn implied(dim: usize, rows: &[Inequality], target: &Inequality) -> bool {
    let lift = |r: &Inequality, t: BigRational| {
        let mut coeffs = r.coeffs.clone();
        coeffs.push(t);
        Inequality {
            coeffs,
            constant: r.constant.clone(),
        }
    };
    let mut system: Vec<Inequality> = rows.iter().map(|r| lift(r, BigRational::zero())).collect();
    // t - ⟨p, a⟩ >= 0 and ⟨p, a⟩ - t >= 0.
    let neg_p = Inequality {
        coeffs: target.coeffs.iter().map(|c| -c).collect(),
        constant: BigRational::zero(),
    };
    let pos_p = Inequality {
        coeffs: target.coeffs.clone(),
        constant: BigRational::zero(),
    };
    system.push(lift(&neg_p, BigRational::one()));
    system.push(lift(&pos_p, -BigRational::one()));
    let projected = project_all(dim, &system);
    let lower = projected
        .iter()
        .filter(|r| r.coeffs[dim].is_positive())
        .map(|r| -&r.constant / &r.coeffs[dim])
        .max();
    match lower {
        Some(l) => l + &target.constant >= BigRational::zero(),
        None => false,
    }
}

/// Integer bounds `lo_k <= a_k <= hi_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self, PolytopeError> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(PolytopeError::BadBox { lo, hi });
        }
        Ok(LatticeBox { lo, hi })
    }

    /// `0 <= a_k <= (λ - w_0 λ)_{j_k}`. The coordinates of any element of
    /// `B_w(λ)`, in either the embedding or the string parameterization,
    /// satisfy `Σ a_k α_{j_k} <= λ - w_0 λ`, so this box contains them all.
    pub fn for_word(
        cartan: &CartanMatrix,
        word: &ReducedWord,
        lambda: &WeightVec,
    ) -> Result<Self, PolytopeError> {
        cartan.check_dominant(lambda)?;
        let gap = cartan.lowest_weight_gap(lambda)?;
        let hi = word.letters().iter().map(|&j| gap.0[j - 1]).collect::<Vec<_>>();
        LatticeBox::new(vec![0; hi.len()], hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        a.len() == self.dim()
            && a.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| l <= x && x <= h)
    }

    /// All points of the box in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let mut cur = Some(self.lo.clone());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            let mut k = self.dim();
            loop {
                if k == 0 {
                    cur = None;
                    break;
                }
                k -= 1;
                if next[k] < self.hi[k] {
                    next[k] += 1;
                    cur = Some(next);
                    break;
                }
                next[k] = self.lo[k];
            }
            Some(out)
        })
    }
}

enum Evaluator {
    Small(Vec<(Vec<i128>, i128)>),
    Exact(HalfSpaceSystem),
}

impl Evaluator {
    fn new(sys: &HalfSpaceSystem) -> Self {
        let norm = sys.normalize(false);
        let small: Option<Vec<(Vec<i128>, i128)>> = norm
            .rows
            .iter()
            .map(|r| {
                let c = r.constant.to_integer().to_i128()?;
                let p = r
                    .coeffs
                    .iter()
                    .map(|x| x.to_integer().to_i128())
                    .collect::<Option<Vec<_>>>()?;
                Some((p, c))
            })
            .collect();
        match small {
            Some(rows) => Evaluator::Small(rows),
            None => Evaluator::Exact(norm),
        }
    }

    fn contains(&self, a: &[i64]) -> bool {
        match self {
            Evaluator::Small(rows) => rows.iter().all(|(p, c)| {
                p.iter()
                    .zip(a)
                    .try_fold(*c, |acc, (x, &y)| acc.checked_add(x.checked_mul(y as i128)?))
                    .map(|v| v >= 0)
                    .unwrap_or(false)
            }),
            Evaluator::Exact(sys) => sys.contains(a),
        }
    }
}

/// The integer points of the box satisfying every inequality, sorted.
pub fn lattice_points(
    sys: &HalfSpaceSystem,
    bounds: &LatticeBox,
) -> Result<PointSet, PolytopeError> {
    if sys.dim() != bounds.dim() {
        return Err(PolytopeError::Dimension {
            dim: sys.dim(),
            got: bounds.dim(),
        });
    }
    let eval = Evaluator::new(sys);
    if bounds.dim() == 0 {
        return Ok(if eval.contains(&[]) {
            BTreeSet::from([vec![]])
        } else {
            BTreeSet::new()
        });
    }
    let (lo0, hi0) = (bounds.lo[0], bounds.hi[0]);
    let rest = LatticeBox::new(bounds.lo[1..].to_vec(), bounds.hi[1..].to_vec())?;
    let chunks: Vec<Vec<Vec<i64>>> = (lo0..=hi0)
        .into_par_iter()
        .map(|x0| {
            rest.points()
                .map(|tail| {
                    let mut p = Vec::with_capacity(tail.len() + 1);
                    p.push(x0);
                    p.extend(tail);
                    p
                })
                .filter(|p| eval.contains(p))
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// The outcome of comparing one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelResult {
    pub k: usize,
    pub enumerated: usize,
    pub lattice: usize,
    /// A point in one set but not the other, if any.
    pub discrepancy: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub levels: Vec<LevelResult>,
}

impl LevelReport {
    pub fn ok(&self) -> bool {
        self.levels.iter().all(|l| l.discrepancy.is_none())
    }

    pub fn first_failure(&self) -> Option<&LevelResult> {
        self.levels.iter().find(|l| l.discrepancy.is_some())
    }
}

/// For every level `k` of `points`, compares it with the lattice points of
/// the symbolic system evaluated at `kλ`, inside the box for `kλ`.
pub fn compare_levels(
    cartan: &CartanMatrix,
    word: &ReducedWord,
    lambda: &WeightVec,
    points: &GradedPointSet,
    forms: &[AffineForm],
) -> Result<LevelReport, PolytopeError> {
    let mut levels = Vec::new();
    for (&k, pts) in &points.levels {
        let lk = lambda.scale(k as i64);
        let sys = HalfSpaceSystem::from_forms(forms, word.len(), &lk)?;
        let bounds = LatticeBox::for_word(cartan, word, &lk)?;
        let lat = lattice_points(&sys, &bounds)?;
        let discrepancy = pts.symmetric_difference(&lat).next().cloned();
        levels.push(LevelResult {
            k,
            enumerated: pts.len(),
            lattice: lat.len(),
            discrepancy,
        });
    }
    Ok(LevelReport { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demazure::{enumerate_demazure, semigroup_points};
    use crate::inequalities::{delta_hrep, generate_xi, parse_hrep_line, LambdaMode};
    use crate::zcrystal::SequenceSpec;
    use proptest::prelude::*;

    fn sys(dim: usize, rows: &[(&[i64], i64)]) -> HalfSpaceSystem {
        HalfSpaceSystem::new(dim, rows.iter().map(|(p, c)| Inequality::from_ints(p, *c)).collect())
            .unwrap()
    }

    fn unit_box(dim: usize, hi: i64) -> LatticeBox {
        LatticeBox::new(vec![0; dim], vec![hi; dim]).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let s = sys(1, &[(&[2], 0), (&[1], 0)]);
        assert_eq!(s.normalize(false), sys(1, &[(&[1], 0)]));
        let a = sys(2, &[(&[1, 0], 0), (&[0, -3], 6), (&[2, 2], 4)]);
        let b = sys(2, &[(&[1, 1], 2), (&[0, -1], 2), (&[1, 0], 0)]);
        assert_eq!(a.normalize(false), b.normalize(false));
        let half = HalfSpaceSystem::new(
            1,
            vec![Inequality {
                coeffs: vec![BigRational::new(1.into(), 2.into())],
                constant: BigRational::new(1.into(), 3.into()),
            }],
        )
        .unwrap();
        assert_eq!(half.normalize(false), sys(1, &[(&[3], 2)]));
        assert_eq!(sys(1, &[(&[0], 5)]).normalize(false).rows().len(), 0);
    }

    #[test]
    fn pruning_drops_implied_rows() {
        // a >= 0, b >= 0, a + b >= 0 (implied), 3 - a >= 0, 5 - a >= 0 (implied).
        let s = sys(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 0), (&[-1, 0], 3), (&[-1, 0], 5)]);
        let p = s.normalize(true);
        assert_eq!(p, sys(2, &[(&[-1, 0], 3), (&[0, 1], 0), (&[1, 0], 0)]).normalize(false));
        let b = unit_box(2, 6);
        assert_eq!(lattice_points(&s, &b).unwrap(), lattice_points(&p, &b).unwrap());
    }

    #[test]
    fn empty_system_over_unit_square() {
        let s = HalfSpaceSystem::new(2, vec![]).unwrap();
        assert_eq!(lattice_points(&s, &unit_box(2, 1)).unwrap().len(), 4);
    }

    #[test]
    fn dimension_mismatch() {
        let s = HalfSpaceSystem::new(2, vec![]).unwrap();
        assert!(lattice_points(&s, &unit_box(3, 1)).is_err());
        assert!(HalfSpaceSystem::new(2, vec![Inequality::from_ints(&[1], 0)]).is_err());
        assert!(LatticeBox::new(vec![1], vec![0]).is_err());
    }

    fn a2() -> (CartanMatrix, ReducedWord, SequenceSpec) {
        let c = CartanMatrix::builtin('A', 2).unwrap();
        let w = ReducedWord::new(&c, vec![1, 2, 1]).unwrap();
        let s = SequenceSpec::for_word(&c, &w).unwrap();
        (c, w, s)
    }

    #[test]
    fn a2_delta_at_rho() {
        let (c, w, s) = a2();
        let rho = WeightVec(vec![1, 1]);
        let xi = generate_xi(&s, 6, 20).unwrap();
        let forms = delta_hrep(&s, &xi, &LambdaMode::Concrete(rho.clone())).unwrap();
        let system = HalfSpaceSystem::from_forms(&forms, 3, &rho).unwrap();
        assert_eq!(system.normalize(false).rows().len(), 7);
        let pts = lattice_points(&system, &LatticeBox::for_word(&c, &w, &rho).unwrap()).unwrap();
        assert_eq!(pts.len(), 8);
        let pruned = system.normalize(true);
        assert_eq!(pruned.rows().len(), 6);
    }

    #[test]
    fn a2_string_system_at_rho() {
        let (c, w, _) = a2();
        let rho = WeightVec(vec![1, 1]);
        let forms: Vec<AffineForm> = ["a3", "1 - a3", "a2 - a3", "a3 + 1 - a2", "a1", "a2 - 2*a3 + 1 - a1"]
            .iter()
            .map(|l| parse_hrep_line(&format!("{l} >= 0"), 2).unwrap())
            .collect();
        let system = HalfSpaceSystem::from_forms(&forms, 3, &rho).unwrap();
        let pts = lattice_points(&system, &LatticeBox::for_word(&c, &w, &rho).unwrap()).unwrap();
        assert_eq!(pts.len(), 8);
    }

    #[test]
    fn levels_match_for_a2_rho() {
        let (c, w, s) = a2();
        let rho = WeightVec(vec![1, 1]);
        let xi = generate_xi(&s, 6, 20).unwrap();
        let forms = delta_hrep(&s, &xi, &LambdaMode::Symbolic).unwrap();
        let g = semigroup_points(&c, &w, &rho, 3).unwrap();
        let report = compare_levels(&c, &w, &rho, &g, &forms).unwrap();
        assert!(report.ok());
        let sizes: Vec<usize> = report.levels.iter().map(|l| l.lattice).collect();
        assert_eq!(sizes, vec![8, 27, 64]);
    }

    #[test]
    fn levels_at_zero_weight() {
        let (c, w, s) = a2();
        let zero = WeightVec(vec![0, 0]);
        let xi = generate_xi(&s, 6, 20).unwrap();
        let forms = delta_hrep(&s, &xi, &LambdaMode::Symbolic).unwrap();
        let g = semigroup_points(&c, &w, &zero, 2).unwrap();
        let report = compare_levels(&c, &w, &zero, &g, &forms).unwrap();
        assert!(report.ok());
        assert!(report.levels.iter().all(|l| l.lattice == 1));
    }

    #[test]
    fn wrong_system_is_reported() {
        let (c, w, _) = a2();
        let rho = WeightVec(vec![1, 1]);
        let g = semigroup_points(&c, &w, &rho, 1).unwrap();
        let forms = vec![AffineForm::coordinate(2, 1)];
        let report = compare_levels(&c, &w, &rho, &g, &forms).unwrap();
        assert!(!report.ok());
        assert_eq!(report.first_failure().unwrap().k, 1);
    }

    #[test]
    fn dilation_contains_sums() {
        let (c, w, s) = a2();
        let lambda = WeightVec(vec![1, 0]);
        let xi = generate_xi(&s, 6, 20).unwrap();
        let forms = delta_hrep(&s, &xi, &LambdaMode::Symbolic).unwrap();
        let level1 = enumerate_demazure(&c, &w, &lambda).unwrap().coords;
        let two = lambda.scale(2);
        let sys2 = HalfSpaceSystem::from_forms(&forms, 3, &two).unwrap();
        let pts2 = lattice_points(&sys2, &LatticeBox::for_word(&c, &w, &two).unwrap()).unwrap();
        for p in &level1 {
            for q in &level1 {
                let sum: Vec<i64> = p.iter().zip(q).map(|(x, y)| x + y).collect();
                assert!(pts2.contains(&sum));
            }
        }
    }

    #[test]
    fn box_points_order() {
        let b = LatticeBox::new(vec![0, -1], vec![1, 0]).unwrap();
        let pts: Vec<Vec<i64>> = b.points().collect();
        assert_eq!(pts, vec![vec![0, -1], vec![0, 0], vec![1, -1], vec![1, 0]]);
        let empty = LatticeBox::new(vec![], vec![]).unwrap();
        assert_eq!(empty.points().count(), 1);
    }

    proptest! {
        #[test]
        fn removing_a_row_never_shrinks(
            rows in proptest::collection::vec((proptest::collection::vec(-3i64..4, 3), -4i64..5), 1..6),
            drop in 0usize..6,
        ) {
            let all: Vec<Inequality> = rows.iter().map(|(p, c)| Inequality::from_ints(p, *c)).collect();
            let full = HalfSpaceSystem::new(3, all.clone()).unwrap();
            let mut fewer = all;
            fewer.remove(drop % fewer.len());
            let fewer = HalfSpaceSystem::new(3, fewer).unwrap();
            let b = LatticeBox::new(vec![-2; 3], vec![2; 3]).unwrap();
            let big = lattice_points(&fewer, &b).unwrap();
            let small = lattice_points(&full, &b).unwrap();
            prop_assert!(small.is_subset(&big));
        }

        #[test]
        fn pruning_keeps_the_solution_set(
            rows in proptest::collection::vec((proptest::collection::vec(-3i64..4, 2), -4i64..5), 1..7),
        ) {
            let all: Vec<Inequality> = rows.iter().map(|(p, c)| Inequality::from_ints(p, *c)).collect();
            let s = HalfSpaceSystem::new(2, all).unwrap();
            let b = LatticeBox::new(vec![-6; 2], vec![6; 2]).unwrap();
            let pruned = s.normalize(true);
            prop_assert!(pruned.rows().len() <= s.rows().len());
            // Rational equivalence implies equal lattice points in any box.
            prop_assert_eq!(lattice_points(&s, &b).unwrap(), lattice_points(&pruned, &b).unwrap());
        }
    }
}
