//! Formal vector bundles: rank plus total Chern class over a base of
//! stated dimension.
//!
//! Bundles are purely formal: nothing checks that `c_k = 0` for `k > rank`,
//! because the formulas manipulate restrictions and quotient expressions as
//! total classes. `BundleData::new_strict` enables that check for concrete
//! geometric inputs.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{binomial, GradedClass};

/// A formal vector bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleData {
    rank: u32,
    chern: GradedClass,
    base_dim: u32,
}

impl BundleData {
    /// Chern class constant term must be 1; the class is truncated at the
    /// base dimension.
    pub fn new(rank: u32, chern: GradedClass, base_dim: u32) -> Result<Self> {
        if !chern.constant_term().is_one() {
            return Err(Error::NonUnitConstantTerm {
                found: chern.constant_term().to_string(),
            });
        }
        Ok(BundleData {
            rank,
            chern: chern.truncated(base_dim),
            base_dim,
        })
    }

    /// As `new`, additionally requiring `c_k = 0` for `k > rank`.
    pub fn new_strict(rank: u32, chern: GradedClass, base_dim: u32) -> Result<Self> {
        for k in rank + 1..=base_dim {
            if !chern.graded_piece(k).is_zero() {
                return Err(Error::RankInconsistency(format!(
                    "c_{k} nonzero on a rank-{rank} bundle"
                )));
            }
        }
        Self::new(rank, chern, base_dim)
    }

    /// Trivial bundle of the given rank: c = 1.
    pub fn trivial(rank: u32, base_dim: u32) -> Self {
        BundleData {
            rank,
            chern: GradedClass::one(base_dim),
            base_dim,
        }
    }

    /// `O(1)^{⊕rank}` on a linear base: c = (1+h)^rank.
    pub fn sum_of_hyperplanes(rank: u32, base_dim: u32) -> Self {
        BundleData {
            rank,
            chern: GradedClass::one_plus_var("h", base_dim).pow(rank),
            base_dim,
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn chern(&self) -> &GradedClass {
        &self.chern
    }

    pub fn base_dim(&self) -> u32 {
        self.base_dim
    }

    /// Restriction to a smaller linear base: same total class, truncated.
    pub fn restricted_to(&self, base_dim: u32) -> BundleData {
        BundleData {
            rank: self.rank,
            chern: self.chern.truncated(base_dim),
            base_dim,
        }
    }

    /// Total Segre class s(E) = c(E)^{-1}; s_0 = 1.
    pub fn segre(&self) -> GradedClass {
        // constant term is 1 by construction
        self.chern.inverse().expect("chern class is a unit")
    }

    /// `s_m(E)` with the convention `s_m = 0` for m < 0 (and for m beyond
    /// the base truncation).
    pub fn segre_piece(&self, m: i64) -> GradedClass {
        if m < 0 || m > self.base_dim as i64 {
            return GradedClass::zero(self.base_dim);
        }
        self.segre().graded_piece(m as u32)
    }
}

/// Whitney sum: ranks add, total Chern classes multiply.
pub fn whitney_chern(a: &BundleData, b: &BundleData) -> Result<BundleData> {
    if a.base_dim != b.base_dim {
        return Err(Error::BaseMismatch {
            left: a.base_dim,
            right: b.base_dim,
        });
    }
    Ok(BundleData {
        rank: a.rank + b.rank,
        chern: a.chern.mul(&b.chern),
        base_dim: a.base_dim,
    })
}

/// Quotient bundle: c(T/S) = c(T)/c(S).
pub fn quotient_chern(total: &BundleData, sub: &BundleData) -> Result<BundleData> {
    if total.base_dim != sub.base_dim {
        return Err(Error::BaseMismatch {
            left: total.base_dim,
            right: sub.base_dim,
        });
    }
    if sub.rank > total.rank {
        return Err(Error::RankUnderflow {
            total: total.rank,
            sub: sub.rank,
        });
    }
    let inv = sub.chern.inverse().expect("chern class is a unit");
    Ok(BundleData {
        rank: total.rank - sub.rank,
        chern: total.chern.mul(&inv),
        base_dim: total.base_dim,
    })
}

/// Tensor by a line bundle with first Chern class `t` (homogeneous of
/// degree 1, possibly zero): c_k(E⊗L) = Σ_{i≤k} C(rank−i, k−i) c_i(E) t^{k−i}.
pub fn twist_chern(b: &BundleData, t: &GradedClass) -> Result<BundleData> {
    if !t.is_zero() {
        let homogeneous = t.min_degree() == Some(1) && t.max_degree() == Some(1);
        if !homogeneous {
            return Err(Error::NotDegreeOne {
                found: t.to_string(),
            });
        }
    }
    let trunc = b.chern.truncation().min(t.truncation());
    let mut out = GradedClass::zero(trunc);
    for k in 0..=trunc {
        let mut piece = GradedClass::zero(trunc);
        for i in 0..=k {
            let coeff = binomial(b.rank as i64 - i as i64, (k - i) as i64);
            if coeff.is_zero() {
                continue;
            }
            let ci = b.chern.graded_piece(i);
            if ci.is_zero() {
                continue;
            }
            piece = piece.add(&ci.mul(&t.pow(k - i)).scale(&coeff));
        }
        out = out.add(&piece);
    }
    Ok(BundleData {
        rank: b.rank,
        chern: out,
        base_dim: b.base_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{rat, GradedClass};

    #[test]
    fn segre_inverts_chern() {
        // rank 2, c = (1+h)^2, base 3 -> 1 - 2h + 3h^2 - 4h^3
        let b = BundleData::sum_of_hyperplanes(2, 3);
        let s = b.segre();
        assert_eq!(s.coefficient(&[]), rat(1));
        assert_eq!(s.coefficient(&[("h", 1)]), rat(-2));
        assert_eq!(s.coefficient(&[("h", 2)]), rat(3));
        assert_eq!(s.coefficient(&[("h", 3)]), rat(-4));
        // oracle: geometric series for (1+h)^{-2} is (sum (-1)^k (k+1) h^k)
        for k in 0..=3i64 {
            let expect = rat(if k % 2 == 0 { k + 1 } else { -(k + 1) });
            assert_eq!(s.coefficient(&[("h", k as u32)]), expect);
        }
    }

    #[test]
    fn segre_of_trivial_is_one() {
        let b = BundleData::trivial(5, 4);
        assert_eq!(b.segre(), GradedClass::one(4));
        assert_eq!(b.segre_piece(0), GradedClass::one(4));
        assert!(b.segre_piece(-1).is_zero());
        assert!(b.segre_piece(2).is_zero());
    }

    #[test]
    fn segre_of_line_bundle() {
        let b = BundleData::sum_of_hyperplanes(1, 2);
        let s = b.segre();
        assert_eq!(s.coefficient(&[]), rat(1));
        assert_eq!(s.coefficient(&[("h", 1)]), rat(-1));
        assert_eq!(s.coefficient(&[("h", 2)]), rat(1));
    }

    #[test]
    fn whitney_sum() {
        let l = BundleData::sum_of_hyperplanes(1, 2);
        let sum = whitney_chern(&l, &l).unwrap();
        assert_eq!(sum.rank(), 2);
        assert_eq!(sum.chern().coefficient(&[("h", 1)]), rat(2));
        assert_eq!(sum.chern().coefficient(&[("h", 2)]), rat(1));

        let t = BundleData::trivial(3, 2);
        let with_trivial = whitney_chern(&t, &l).unwrap();
        assert_eq!(with_trivial.rank(), 4);
        assert_eq!(with_trivial.chern(), l.chern());

        // (rank1, 1+h) ⊕ (rank2, 1+2h) on base 2 -> rank 3, 1 + 3h + 2h^2
        let h = GradedClass::variable("h", 2);
        let b2 = BundleData::new(
            2,
            GradedClass::one(2).add(&h.scale(&rat(2))),
            2,
        )
        .unwrap();
        let s = whitney_chern(&l, &b2).unwrap();
        assert_eq!(s.rank(), 3);
        assert_eq!(s.chern().coefficient(&[("h", 1)]), rat(3));
        assert_eq!(s.chern().coefficient(&[("h", 2)]), rat(2));
    }

    #[test]
    fn whitney_base_mismatch() {
        let a = BundleData::trivial(1, 2);
        let b = BundleData::trivial(1, 3);
        assert!(matches!(
            whitney_chern(&a, &b),
            Err(Error::BaseMismatch { .. })
        ));
    }

    #[test]
    fn quotient_cancels_sub() {
        let total = BundleData::sum_of_hyperplanes(2, 2);
        let sub = BundleData::sum_of_hyperplanes(1, 2);
        let q = quotient_chern(&total, &sub).unwrap();
        assert_eq!(q.rank(), 1);
        assert_eq!(q.chern(), sub.chern());

        let full = quotient_chern(&total, &total).unwrap();
        assert_eq!(full.rank(), 0);
        assert_eq!(full.chern(), &GradedClass::one(2));
    }

    #[test]
    fn quotient_multiply_back() {
        // (1+h)^3 / (1+2h) = 1 + h + h^2 on base 2
        let h = GradedClass::variable("h", 2);
        let total = BundleData::sum_of_hyperplanes(3, 2);
        let sub =
            BundleData::new(1, GradedClass::one(2).add(&h.scale(&rat(2))), 2).unwrap();
        let q = quotient_chern(&total, &sub).unwrap();
        assert_eq!(q.rank(), 2);
        assert_eq!(q.chern().coefficient(&[("h", 1)]), rat(1));
        assert_eq!(q.chern().coefficient(&[("h", 2)]), rat(1));
        // multiply-back oracle
        let back = whitney_chern(&q, &sub).unwrap();
        assert_eq!(back.chern(), total.chern());
    }

    #[test]
    fn quotient_rank_underflow() {
        let total = BundleData::trivial(1, 2);
        let sub = BundleData::trivial(2, 2);
        assert!(matches!(
            quotient_chern(&total, &sub),
            Err(Error::RankUnderflow { .. })
        ));
    }

    #[test]
    fn twist_line_bundle() {
        // rank 1, c = 1 + a, twisted by t -> 1 + a + t
        let a = GradedClass::variable("a", 2);
        let t = GradedClass::variable("t", 2);
        let b = BundleData::new(1, GradedClass::one(2).add(&a), 2).unwrap();
        let tw = twist_chern(&b, &t).unwrap();
        assert_eq!(tw.chern().coefficient(&[("a", 1)]), rat(1));
        assert_eq!(tw.chern().coefficient(&[("t", 1)]), rat(1));
        assert_eq!(tw.chern().graded_piece(2), GradedClass::zero(2));
    }

    #[test]
    fn twist_by_zero_is_identity() {
        let b = BundleData::sum_of_hyperplanes(2, 3);
        let tw = twist_chern(&b, &GradedClass::zero(3)).unwrap();
        assert_eq!(tw.chern(), b.chern());
        assert_eq!(tw.rank(), b.rank());
    }

    #[test]
    fn twist_rank_two_chern_roots() {
        // rank 2, c = 1 + c1 + c2, twist by t:
        // 1 + (c1 + 2t) + (c2 + c1 t + t^2), from (1+α+t)(1+β+t)
        let c1 = GradedClass::variable("c1", 2);
        let c2 = GradedClass::variable_weighted("c2", 2, 2);
        let t = GradedClass::variable("t", 2);
        let b = BundleData::new(2, GradedClass::one(2).add(&c1).add(&c2), 2).unwrap();
        let tw = twist_chern(&b, &t).unwrap();
        let c = tw.chern();
        assert_eq!(c.coefficient(&[("c1", 1)]), rat(1));
        assert_eq!(c.coefficient(&[("t", 1)]), rat(2));
        assert_eq!(c.coefficient(&[("c2", 1)]), rat(1));
        assert_eq!(c.coefficient(&[("c1", 1), ("t", 1)]), rat(1));
        assert_eq!(c.coefficient(&[("t", 2)]), rat(1));
    }

    #[test]
    fn twist_rejects_mixed_degree() {
        let b = BundleData::trivial(1, 2);
        let bad = GradedClass::one_plus_var("t", 2);
        assert!(matches!(
            twist_chern(&b, &bad),
            Err(Error::NotDegreeOne { .. })
        ));
    }

    #[test]
    fn strict_constructor_checks_rank_vanishing() {
        let c = GradedClass::one_plus_var("h", 3).pow(2);
        assert!(BundleData::new_strict(2, c.clone(), 3).is_ok());
        assert!(matches!(
            BundleData::new_strict(1, c, 3),
            Err(Error::RankInconsistency(_))
        ));
    }
}
