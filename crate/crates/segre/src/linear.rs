//! Concrete model: linear subspaces of projective space, plus the
//! independent blowup-pushforward oracle used to validate the formulas.
//!
//! Every linear `P^a ⊂ P^b` has normal bundle `O(1)^{⊕(b-a)}`, so scenes
//! declare only dimensions; bundle data is derived. The oracle expands
//! `s(W,Z) = π_*((h+e)/(1+h+e))` on the blowup along the second component
//! and is deliberately restricted to hyperplane × linear scenes, where the
//! product ideal pulls back to the principal divisor `h + e`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::bundle::BundleData;
use crate::error::{Error, Result};
use crate::graded::{rat, regrade, DimClass, GradedClass, Rational};

/// s(P^l, P^N) as an ambient class: (1+h)^{-(N-l)} ∩ [P^l].
pub fn segre_linear(l: u32, ambient: u32) -> Result<DimClass> {
    if l > ambient {
        return Err(Error::InvalidDimensions(format!(
            "P^{l} does not embed in P^{ambient}"
        )));
    }
    let chern = GradedClass::one_plus_var("h", l).pow(ambient - l);
    let series = chern.inverse().expect("unit constant term");
    regrade(&series, l, ambient)
}

/// s(D, P^N) for a degree-`deg` Cartier divisor: dH/(1+dH), with the
/// dimension-(N-k) entry equal to (-1)^{k+1} deg^k for k ≥ 1.
pub fn segre_divisor(deg: i64, ambient: u32) -> DimClass {
    let mut out = DimClass::zero(ambient);
    let mut power = rat(1);
    for k in 1..=ambient {
        power *= rat(deg);
        let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
        out.set(ambient - k, power.clone() * rat(sign));
    }
    out
}

/// Linear extension of the monomial pushforward rule for the blowup of
/// `P^N` along a linear center `P^l`:
/// `π_*(h^a e^b) = h^a · π_*(e^b)` with `π_*(e^0) = [P^N]` and
/// `π_*(e^b) = (-1)^{b+1} s(P^l, P^N)_{N-b}` for b ≥ 1.
pub fn blowup_pushforward(p: &GradedClass, center_dim: u32, ambient: u32) -> Result<DimClass> {
    let center = segre_linear(center_dim, ambient)?;
    let mut out = DimClass::zero(ambient);
    for (mono, coeff) in p.iter_terms() {
        let mut a = 0u32;
        let mut b = 0u32;
        for (name, exp) in &mono {
            match *name {
                "h" => a = *exp,
                "e" => b = *exp,
                other => {
                    return Err(Error::GradingMismatch(format!(
                        "pushforward input may only use h and e, found {other}"
                    )))
                }
            }
        }
        if b == 0 {
            // h^a straight down
            if a <= ambient {
                let cur = out.get(ambient - a);
                out.set(ambient - a, cur + coeff);
            }
            continue;
        }
        if b > ambient {
            continue;
        }
        let s = center.get(ambient - b);
        if s.is_zero() {
            continue;
        }
        let sign = if (b + 1) % 2 == 0 { rat(1) } else { rat(-1) };
        // π_*(e^b) is a dimension-(N-b) class, i.e. the monomial h^b
        let total = a + b;
        if total > ambient {
            continue; // degree overflow truncates silently
        }
        let cur = out.get(ambient - total);
        out.set(ambient - total, cur + coeff * &(sign * s));
    }
    Ok(out)
}

/// A declared configuration of linear components in `P^N`. Intersection
/// dimensions are declared (dimension counts are the only validation, and
/// -1 means empty); normal bundle data is derived.
#[derive(Debug, Clone)]
pub struct LinearScene {
    ambient: u32,
    components: Vec<(String, u32)>,
    /// subset of component indices (sorted, len ≥ 2) -> intersection dim
    intersection_dims: BTreeMap<Vec<usize>, i64>,
}

impl LinearScene {
    pub fn new(
        ambient: u32,
        components: Vec<(String, u32)>,
        intersection_dims: BTreeMap<Vec<usize>, i64>,
    ) -> Result<Self> {
        let scene = LinearScene {
            ambient,
            components,
            intersection_dims,
        };
        scene.validate()?;
        Ok(scene)
    }

    /// Two components with a declared intersection dimension.
    pub fn pair(ambient: u32, dim_x: u32, dim_y: u32, dim_xy: i64) -> Result<Self> {
        let mut dims = BTreeMap::new();
        dims.insert(vec![0, 1], dim_xy);
        Self::new(
            ambient,
            vec![("X".to_string(), dim_x), ("Y".to_string(), dim_y)],
            dims,
        )
    }

    fn validate(&self) -> Result<()> {
        let n = self.components.len();
        if n == 0 {
            return Err(Error::InvalidDimensions("scene has no components".into()));
        }
        for (name, dim) in &self.components {
            if *dim > self.ambient {
                return Err(Error::InvalidDimensions(format!(
                    "component {name} has dimension {dim} > ambient {}",
                    self.ambient
                )));
            }
        }
        for (subset, dim) in &self.intersection_dims {
            if subset.len() < 2
                || subset.windows(2).any(|w| w[0] >= w[1])
                || subset.iter().any(|&i| i >= n)
            {
                return Err(Error::SemanticError(format!(
                    "bad subset key {subset:?}: must be sorted, duplicate-free component indices"
                )));
            }
            if *dim < -1 || *dim > self.ambient as i64 {
                return Err(Error::InvalidDimensions(format!(
                    "intersection dimension {dim} out of range"
                )));
            }
            // monotone under inclusion, with singleton dims from components
            for &i in subset {
                if *dim > self.components[i].1 as i64 {
                    return Err(Error::InvalidDimensions(format!(
                        "intersection of {subset:?} has dimension {dim} above component {}",
                        self.components[i].0
                    )));
                }
            }
            for (other, odim) in &self.intersection_dims {
                if other.len() > subset.len() && subset.iter().all(|i| other.contains(i)) && odim > dim
                {
                    return Err(Error::InvalidDimensions(format!(
                        "intersection dims not monotone: {other:?} has {odim} > {dim} of {subset:?}"
                    )));
                }
            }
            // linear realizability: dim span = Σ dims - dim ∩ must fit
            if subset.len() == 2 {
                let (a, b) = (
                    self.components[subset[0]].1 as i64,
                    self.components[subset[1]].1 as i64,
                );
                if *dim < a + b - self.ambient as i64 {
                    return Err(Error::InvalidDimensions(format!(
                        "two linear subspaces of dims {a}, {b} in P^{} must meet in dim >= {}",
                        self.ambient,
                        a + b - self.ambient as i64
                    )));
                }
            }
        }
        // every non-singleton subset needs a declared dimension
        if n >= 2 {
            let mut missing = Vec::new();
            for mask in 1u32..(1 << n) {
                if mask.count_ones() < 2 {
                    continue;
                }
                let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                if !self.intersection_dims.contains_key(&subset) {
                    missing.push(subset);
                }
            }
            if !missing.is_empty() {
                return Err(Error::SemanticError(format!(
                    "missing intersection dimensions for subsets {missing:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn components(&self) -> &[(String, u32)] {
        &self.components
    }

    pub fn component_dim(&self, i: usize) -> u32 {
        self.components[i].1
    }

    /// Declared intersection dimension of a subset (singletons are the
    /// component dimensions); -1 means empty.
    pub fn subset_dim(&self, subset: &[usize]) -> i64 {
        if subset.len() == 1 {
            return self.components[subset[0]].1 as i64;
        }
        *self
            .intersection_dims
            .get(subset)
            .expect("validated scene has all subset dims")
    }

    /// Normal bundle of component i in the ambient, on its own base.
    pub fn normal_bundle(&self, i: usize) -> BundleData {
        let codim = self.ambient - self.components[i].1;
        BundleData::sum_of_hyperplanes(codim, self.components[i].1)
    }

    /// Normal bundle of component i restricted to a dimension-`base` support.
    pub fn normal_bundle_restricted(&self, i: usize, base: u32) -> BundleData {
        let codim = self.ambient - self.components[i].1;
        BundleData::sum_of_hyperplanes(codim, base)
    }

    /// Normal bundle of a linear `P^inner ⊂ P^outer`, restricted to a
    /// dimension-`base` support.
    pub fn linear_normal(inner: u32, outer: u32, base: u32) -> BundleData {
        BundleData::sum_of_hyperplanes(outer - inner, base)
    }

    /// s(Y_i, P^N) for component i.
    pub fn component_segre(&self, i: usize) -> DimClass {
        segre_linear(self.components[i].1, self.ambient).expect("validated dims")
    }
}

/// Blowup oracle for `W = X ∪ Y` with X a hyperplane and Y linear, `Y ⊄ X`:
/// pushes `Σ_k (-1)^{k+1} (h+e)^k` down from the blowup along Y.
pub fn oracle_union_pair(scene: &LinearScene) -> Result<DimClass> {
    if scene.components.len() != 2 {
        return Err(Error::OracleInapplicable(
            "oracle needs exactly two components".into(),
        ));
    }
    let n = scene.ambient;
    let (dim_x, dim_y) = (scene.component_dim(0), scene.component_dim(1));
    let dim_xy = scene.subset_dim(&[0, 1]);
    if dim_x != n - 1 {
        return Err(Error::OracleInapplicable(format!(
            "first component must be a hyperplane, has dimension {dim_x} in P^{n}"
        )));
    }
    if dim_xy == dim_y as i64 {
        return Err(Error::OracleInapplicable(
            "second component is contained in the hyperplane".into(),
        ));
    }
    let h = GradedClass::variable("h", n);
    let e = GradedClass::variable("e", n);
    let divisor = h.add(&e);
    let mut out = DimClass::zero(n);
    let mut power = GradedClass::one(n);
    for k in 1..=n {
        power = power.mul(&divisor);
        let sign = if (k + 1) % 2 == 0 { rat(1) } else { rat(-1) };
        let pushed = blowup_pushforward(&power, dim_y, n)?;
        out = out.add(&pushed.scale(&sign));
    }
    Ok(out)
}

/// Exact coefficient of a class entry, as a convenience for tests.
pub fn entry(c: &DimClass, dim: u32) -> Rational {
    c.get(dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::binomial;

    #[test]
    fn segre_linear_line_in_p3() {
        let s = segre_linear(1, 3).unwrap();
        assert_eq!(s.get(1), rat(1));
        assert_eq!(s.get(0), rat(-2));
        assert_eq!(s.get(2), rat(0));
        assert_eq!(s.get(3), rat(0));
    }

    #[test]
    fn segre_linear_point() {
        for n in 1..=5 {
            let s = segre_linear(0, n).unwrap();
            assert_eq!(s.get(0), rat(1));
            for d in 1..=n {
                assert_eq!(s.get(d), rat(0));
            }
        }
    }

    #[test]
    fn segre_linear_full_space() {
        let s = segre_linear(3, 3).unwrap();
        assert_eq!(s.get(3), rat(1));
        for d in 0..3 {
            assert_eq!(s.get(d), rat(0));
        }
    }

    #[test]
    fn segre_linear_closed_form_oracle() {
        // dimension-d entry = (-1)^{l-d} C(N-l-1+l-d, l-d) for 0 ≤ d ≤ l < N
        for n in 1..=6u32 {
            for l in 0..n {
                let s = segre_linear(l, n).unwrap();
                for d in 0..=n {
                    let expect = if d <= l {
                        let k = (l - d) as i64;
                        let sign = if k % 2 == 0 { 1 } else { -1 };
                        binomial((n - l - 1) as i64 + k, k) * rat(sign)
                    } else {
                        rat(0)
                    };
                    assert_eq!(s.get(d), expect, "l={l} N={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn segre_linear_rejects_bad_dims() {
        assert!(segre_linear(4, 3).is_err());
    }

    #[test]
    fn segre_divisor_values() {
        let s = segre_divisor(2, 2);
        assert_eq!(s.get(1), rat(2));
        assert_eq!(s.get(0), rat(-4));

        let s = segre_divisor(3, 3);
        assert_eq!(s.get(2), rat(3));
        assert_eq!(s.get(1), rat(-9));
        assert_eq!(s.get(0), rat(27));

        // degree 1: h - h^2 + ... ± h^N
        let s = segre_divisor(1, 4);
        for k in 1..=4u32 {
            assert_eq!(s.get(4 - k), rat(if k % 2 == 1 { 1 } else { -1 }));
        }
    }

    #[test]
    fn hyperplane_matches_divisor_degree_one() {
        for n in 1..=6 {
            assert_eq!(segre_linear(n - 1, n).unwrap(), segre_divisor(1, n));
        }
    }

    #[test]
    fn pushforward_monomials() {
        // e^2, center a line in P^3: -h^2
        let e = GradedClass::variable("e", 3);
        let p = blowup_pushforward(&e.pow(2), 1, 3).unwrap();
        assert_eq!(p.get(1), rat(-1));
        assert!(p.get(0).is_zero() && p.get(2).is_zero() && p.get(3).is_zero());

        // e^0: the fundamental class
        let one = GradedClass::one(3);
        let p = blowup_pushforward(&one, 1, 3).unwrap();
        assert_eq!(p.get(3), rat(1));

        // h·e^3 overflows: s(line)_0 = -2 lands in degree 4 > 3
        let h = GradedClass::variable("h", 3);
        let he3 = h.mul(&e.pow(3));
        // degree-4 monomials are already truncated away at trunc 3, so
        // build at a higher bound to exercise the overflow path
        let h4 = GradedClass::variable("h", 4);
        let e4 = GradedClass::variable("e", 4);
        let p = blowup_pushforward(&h4.mul(&e4.pow(3)), 1, 3).unwrap();
        assert!(p.is_zero());
        assert!(blowup_pushforward(&he3, 1, 3).unwrap().is_zero());
    }

    #[test]
    fn pushforward_table_self_consistency() {
        // π_*(e/(1+e)) = s(P^l, P^N)
        for n in 1..=5u32 {
            for l in 0..n {
                let e = GradedClass::variable("e", n);
                let series = e
                    .mul(&GradedClass::one_plus_var("e", n).inverse().unwrap());
                let pushed = blowup_pushforward(&series, l, n).unwrap();
                assert_eq!(pushed, segre_linear(l, n).unwrap(), "l={l} N={n}");
            }
        }
    }

    #[test]
    fn pushforward_divisor_center_keeps_e_as_class() {
        // center a divisor: π_*(e) = [Y] = h
        let e = GradedClass::variable("e", 2);
        let p = blowup_pushforward(&e, 1, 2).unwrap();
        assert_eq!(p.get(1), rat(1));
    }

    #[test]
    fn oracle_plane_line_p3() {
        let scene = LinearScene::pair(3, 2, 1, 0).unwrap();
        let s = oracle_union_pair(&scene).unwrap();
        assert_eq!(s.get(2), rat(1));
        assert_eq!(s.get(1), rat(0));
        assert_eq!(s.get(0), rat(-4));
    }

    #[test]
    fn oracle_two_hyperplanes_p2() {
        let scene = LinearScene::pair(2, 1, 1, 0).unwrap();
        let s = oracle_union_pair(&scene).unwrap();
        assert_eq!(s, segre_divisor(2, 2));
    }

    #[test]
    fn oracle_hyperplane_point_p2() {
        // point off the line: disjoint union, s = s(line) + s(point) = h
        let scene = LinearScene::pair(2, 1, 0, -1).unwrap();
        let s = oracle_union_pair(&scene).unwrap();
        assert_eq!(s.get(1), rat(1));
        assert!(s.get(0).is_zero() && s.get(2).is_zero());
    }

    #[test]
    fn oracle_rejects_non_hyperplane_and_containment() {
        let lines = LinearScene::pair(3, 1, 1, 0).unwrap();
        assert!(matches!(
            oracle_union_pair(&lines),
            Err(Error::OracleInapplicable(_))
        ));
        let contained = LinearScene::pair(3, 2, 1, 1).unwrap();
        assert!(matches!(
            oracle_union_pair(&contained),
            Err(Error::OracleInapplicable(_))
        ));
    }

    #[test]
    fn scene_validation() {
        // skew lines in P^3 are fine; meeting in a point is fine
        assert!(LinearScene::pair(3, 1, 1, -1).is_ok());
        assert!(LinearScene::pair(3, 1, 1, 0).is_ok());
        // two planes in P^3 cannot be disjoint
        assert!(LinearScene::pair(3, 2, 2, -1).is_err());
        // intersection above a component dimension
        assert!(LinearScene::pair(3, 2, 1, 2).is_err());
        // missing subset dims
        let mut dims = BTreeMap::new();
        dims.insert(vec![0, 1], 0i64);
        assert!(LinearScene::new(
            2,
            vec![
                ("A".into(), 1),
                ("B".into(), 1),
                ("C".into(), 1)
            ],
            dims
        )
        .is_err());
    }

    #[test]
    fn scene_monotonicity() {
        let mut dims = BTreeMap::new();
        dims.insert(vec![0, 1], 1i64);
        dims.insert(vec![0, 2], 1i64);
        dims.insert(vec![1, 2], 1i64);
        dims.insert(vec![0, 1, 2], 2i64); // larger than a pair: invalid
        let scene = LinearScene::new(
            3,
            vec![("A".into(), 2), ("B".into(), 2), ("C".into(), 2)],
            dims,
        );
        assert!(scene.is_err());
    }
}
