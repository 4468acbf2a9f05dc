//! The residual operators: the `⊙` product on Segre classes of bundles,
//! the L-tensored Segre class, the Q-polynomial, and the Γ blowup
//! correction class.
//!
//! The `⊙` product of bundles E, F is the operator
//!
//! ```text
//! {s(E) ⊙ s(F)}^k = Σ_{i+j=k, i,j≥1} C(k,i) s_{i-rank E}(E) s_{j-rank F}(F)
//! ```
//!
//! with `s_{<0} = 0` and `s_0 = 1`; the n-ary version replaces the binomial
//! with a multinomial over (i_1, ..., i_n), all ≥ 1. The k-th operator
//! piece is homogeneous of polynomial degree `k - Σ ranks` on the base, so
//! the whole expansion is stored as one graded class plus the rank offset.

use num_traits::{One, Zero};

use crate::bundle::{twist_chern, BundleData};
use crate::error::{Error, Result};
use crate::graded::{binomial, multinomial, DimClass, GradedClass, Rational};

/// Expansion of a `⊙` product. `codim_piece(k)` recovers the k-th operator
/// term; `value` is the sum over all k (degree δ part ↔ k = δ + rank_sum).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdotExpansion {
    value: GradedClass,
    rank_sum: u32,
}

impl OdotExpansion {
    pub fn value(&self) -> &GradedClass {
        &self.value
    }

    pub fn rank_sum(&self) -> u32 {
        self.rank_sum
    }

    /// The operator piece of total codimension k (zero for k < rank sum).
    pub fn codim_piece(&self, k: u32) -> GradedClass {
        if k < self.rank_sum {
            return GradedClass::zero(self.value.truncation());
        }
        self.value.graded_piece(k - self.rank_sum)
    }

    /// Largest k with a (possibly) nonzero piece.
    pub fn max_codim(&self) -> u32 {
        self.rank_sum + self.value.truncation()
    }
}

/// Binary residual product of Segre classes.
pub fn odot_pair(e: &BundleData, f: &BundleData) -> Result<OdotExpansion> {
    if e.base_dim() != f.base_dim() {
        return Err(Error::BaseMismatch {
            left: e.base_dim(),
            right: f.base_dim(),
        });
    }
    let trunc = e.base_dim();
    let se = e.segre();
    let sf = f.segre();
    let re = e.rank() as i64;
    let rf = f.rank() as i64;
    let mut value = GradedClass::zero(trunc);
    // a = i - rank(E), b = j - rank(F) range over 0..=trunc with a + b ≤ trunc
    for a in 0..=trunc as i64 {
        let sea = se.graded_piece(a as u32);
        if sea.is_zero() {
            continue;
        }
        for b in 0..=(trunc as i64 - a) {
            let i = a + re;
            let j = b + rf;
            if i < 1 || j < 1 {
                continue;
            }
            let c = binomial(i + j, i);
            if c.is_zero() {
                continue;
            }
            let sfb = sf.graded_piece(b as u32);
            if sfb.is_zero() {
                continue;
            }
            value = value.add(&sea.mul(&sfb).scale(&c));
        }
    }
    Ok(OdotExpansion {
        value,
        rank_sum: e.rank() + f.rank(),
    })
}

/// n-ary residual product by direct multinomial evaluation. For a single
/// bundle this degenerates to the Segre coefficients `s_{k-rank}` placed at
/// codimension k.
pub fn odot_multi(bundles: &[BundleData]) -> Result<OdotExpansion> {
    let first = bundles.first().ok_or(Error::EmptyList)?;
    let trunc = first.base_dim();
    for b in bundles {
        if b.base_dim() != trunc {
            return Err(Error::BaseMismatch {
                left: trunc,
                right: b.base_dim(),
            });
        }
    }
    let segres: Vec<GradedClass> = bundles.iter().map(|b| b.segre()).collect();
    let ranks: Vec<i64> = bundles.iter().map(|b| b.rank() as i64).collect();
    let rank_sum: u32 = bundles.iter().map(|b| b.rank()).sum();

    let mut value = GradedClass::zero(trunc);
    let n = bundles.len();
    // enumerate Segre degree tuples (a_1..a_n) with Σ a_m ≤ trunc; the
    // operator indices are i_m = a_m + rank_m, all required ≥ 1
    let mut degrees = vec![0i64; n];
    loop {
        let indices: Vec<i64> = degrees.iter().zip(&ranks).map(|(a, r)| a + r).collect();
        if indices.iter().all(|&i| i >= 1) {
            let parts: Vec<u32> = indices.iter().map(|&i| i as u32).collect();
            let coeff = multinomial(&parts);
            let mut term = GradedClass::constant(coeff, trunc);
            for (m, a) in degrees.iter().enumerate() {
                if term.is_zero() {
                    break;
                }
                term = term.mul(&segres[m].graded_piece(*a as u32));
            }
            value = value.add(&term);
        }
        // odometer over degree tuples bounded by total ≤ trunc
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(OdotExpansion { value, rank_sum });
            }
            degrees[pos] += 1;
            if degrees.iter().sum::<i64>() <= trunc as i64 {
                break;
            }
            degrees[pos] = 0;
            pos += 1;
        }
    }
}

/// n-ary residual product by the inductive left fold
/// `{A ⊙ β}^k = Σ_{p+i=k, p,i≥1} C(k,i) A^p s_{i-rank β}(β)`,
/// an independent route used to cross-check `odot_multi`.
pub fn odot_fold(bundles: &[BundleData]) -> Result<OdotExpansion> {
    let first = bundles.first().ok_or(Error::EmptyList)?;
    let trunc = first.base_dim();
    let mut acc = odot_multi(&bundles[..1])?;
    for b in &bundles[1..] {
        if b.base_dim() != trunc {
            return Err(Error::BaseMismatch {
                left: trunc,
                right: b.base_dim(),
            });
        }
        let sb = b.segre();
        let rb = b.rank() as i64;
        let mut value = GradedClass::zero(trunc);
        for da in 0..=trunc as i64 {
            let ap = acc.value.graded_piece(da as u32);
            if ap.is_zero() {
                continue;
            }
            let p = da + acc.rank_sum as i64;
            for db in 0..=(trunc as i64 - da) {
                let i = db + rb;
                if p < 1 || i < 1 {
                    continue;
                }
                let c = binomial(p + i, i);
                if c.is_zero() {
                    continue;
                }
                let sp = sb.graded_piece(db as u32);
                if sp.is_zero() {
                    continue;
                }
                value = value.add(&ap.mul(&sp).scale(&c));
            }
        }
        acc = OdotExpansion {
            value,
            rank_sum: acc.rank_sum + b.rank(),
        };
    }
    Ok(acc)
}

/// L-tensored class: the piece α^i of ambient codimension i is rescaled to
/// α^i / c(L)^{i+1}. `l_c1` must be homogeneous of degree 1 (or zero).
pub fn tensored_segre(s: &DimClass, l_c1: &GradedClass) -> DimClass {
    if l_c1.is_zero() {
        return s.clone();
    }
    assert!(
        l_c1.min_degree() == Some(1) && l_c1.max_degree() == Some(1),
        "line bundle class must be homogeneous of degree 1"
    );
    let n = s.ambient_dim();
    let var = l_c1
        .variables()
        .first()
        .map(|v| v.name.clone())
        .unwrap_or_else(|| "h".to_string());
    let hv = GradedClass::variable(&var, n);
    let unit = GradedClass::one(n).add(&l_c1.truncated(n));
    let inv = unit.inverse().expect("1 + c1 is a unit");
    let mut acc = GradedClass::zero(n);
    for i in 0..=n {
        let coeff = s.get(n - i);
        if coeff.is_zero() {
            continue;
        }
        let piece = hv.pow(i).scale(&coeff);
        acc = acc.add(&piece.mul(&inv.pow(i + 1)));
    }
    crate::graded::regrade(&acc, n, n).expect("single-variable ambient class")
}

/// The Q-polynomial of `1/((1+E)Π(1+a_i+E)) = 1/Π(1+a_i) + Q·E`,
/// stored with the total Chern class Π(1+a_i) it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    value: GradedClass,
    chern: GradedClass,
    n: u32,
    truncation: u32,
}

impl QPolynomial {
    pub fn value(&self) -> &GradedClass {
        &self.value
    }

    pub fn chern(&self) -> &GradedClass {
        &self.chern
    }

    pub fn roots(&self) -> u32 {
        self.n
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Left side of the defining identity, expanded one degree past the
    /// stated truncation: 1/((1+E)Π(1+a_i+E)).
    pub fn defining_series(&self) -> GradedClass {
        let trunc = self.truncation + 1;
        q_denominator(&self.chern, self.n, trunc)
            .inverse()
            .expect("unit constant term")
    }

    /// Exact reconstruction check: defining series == 1/c + Q·E.
    pub fn reconstruction_holds(&self) -> bool {
        let trunc = self.truncation + 1;
        let lhs = self.defining_series();
        let free = self
            .chern
            .truncated(trunc)
            .inverse()
            .expect("unit constant term");
        let rhs = free.add(&self.value.shift_by_var("E"));
        lhs == rhs
    }

    /// Substitute classes for variables in both Q and its Chern data; the
    /// reconstruction identity can then be re-checked on the specialized
    /// values.
    pub fn specialize(&self, subs: &[(&str, GradedClass)]) -> Result<QPolynomial> {
        let mut value = self.value.clone();
        let mut chern = self.chern.clone();
        for (name, replacement) in subs {
            value = value.substitute(name, replacement)?;
            chern = chern.substitute(name, replacement)?;
        }
        Ok(QPolynomial {
            value,
            chern,
            n: self.n,
            truncation: self.truncation,
        })
    }
}

/// (1+E)·Π(1+a_i+E) written through Chern classes:
/// Π(1+a_i+E) = Σ_j c_j (1+E)^{n-j}.
fn q_denominator(chern: &GradedClass, n: u32, trunc: u32) -> GradedClass {
    let one_plus_e = GradedClass::one_plus_var("E", trunc);
    let mut prod = GradedClass::zero(trunc);
    for j in 0..=n {
        let cj = chern.graded_piece(j).truncated(trunc);
        if cj.is_zero() {
            continue;
        }
        prod = prod.add(&cj.mul(&one_plus_e.pow(n - j)));
    }
    one_plus_e.mul(&prod)
}

fn q_from_chern(chern: &GradedClass, n: u32, trunc: u32) -> QPolynomial {
    assert!(trunc >= 1, "Q-polynomial needs truncation >= 1");
    let chern = chern.truncated(trunc);
    let lhs = q_denominator(&chern, n, trunc)
        .inverse()
        .expect("unit constant term");
    let free = chern.inverse().expect("unit constant term");
    let value = lhs
        .sub(&free)
        .divide_by_var("E")
        .expect("difference is divisible by E");
    QPolynomial {
        value,
        chern,
        n,
        truncation: trunc - 1,
    }
}

/// Q with symbolic weight-1 root variables a_1..a_n.
pub fn q_polynomial_roots(n: u32, trunc: u32) -> QPolynomial {
    let mut chern = GradedClass::one(trunc);
    for i in 1..=n {
        chern = chern.mul(&GradedClass::one_plus_var(&format!("a{i}"), trunc));
    }
    q_from_chern(&chern, n, trunc)
}

/// Q in terms of elementary symmetric functions of the roots: symbolic
/// Chern-class variables c_1..c_n of weights 1..n.
pub fn q_polynomial_symmetric(n: u32, trunc: u32) -> QPolynomial {
    let mut chern = GradedClass::one(trunc);
    for j in 1..=n {
        chern = chern.add(&GradedClass::variable_weighted(&format!("c{j}"), j, trunc));
    }
    q_from_chern(&chern, n, trunc)
}

/// Q specialized to a concrete bundle: Q(c_i(F), E) in the bundle's base
/// variables plus E, at the stated truncation.
pub fn q_polynomial_for_bundle(f: &BundleData, trunc: u32) -> QPolynomial {
    q_from_chern(&f.chern().truncated(trunc.min(f.base_dim())), f.rank(), trunc)
}

/// Outcome of the formal pushforward identity check
/// `π_*(Q(c_i(F),E)·E ∩ [X̃]) = -s(F) ⊙ s(G) ∩ [X∩Y]`.
#[derive(Debug, Clone)]
pub struct QPushforwardReport {
    pub left: GradedClass,
    pub right: GradedClass,
    pub agrees: bool,
    /// Operator codimension k = δ + rank F + rank G of the first
    /// discrepant polynomial degree δ, when the sides differ.
    pub first_discrepant_codim: Option<u32>,
}

/// Check the identity up to polynomial degree `trunc` on the common base.
/// The left side rewrites each monomial `E^i` (i ≥ 1) of `Q·E` through the
/// table `π_*(E^i ∩ [X̃]) = (-1)^{i-1} s_{i-rank G}(G) ∩ [X∩Y]`; the right
/// side is the `⊙` expansion. A failed check is a result, not an error.
pub fn q_pushforward_check(
    f: &BundleData,
    g: &BundleData,
    trunc: u32,
) -> Result<QPushforwardReport> {
    if f.base_dim() != g.base_dim() {
        return Err(Error::BaseMismatch {
            left: f.base_dim(),
            right: g.base_dim(),
        });
    }
    let rg = g.rank();
    // headroom: a degree-(a+i) input monomial lands in degree a+i-rg
    let internal = trunc + rg + 1;
    let f_lift = lift_base(f, internal);
    let g_lift = lift_base(g, internal);
    let q = q_polynomial_for_bundle(&f_lift, internal);
    let qe = q.value().shift_by_var("E");

    let sg = g_lift.segre();
    let mut left = GradedClass::zero(trunc);
    for (mono, coeff) in qe.iter_terms() {
        let i = *mono.get("E").unwrap_or(&0);
        assert!(i >= 1, "Q·E has a factor of E in every term");
        if (i as i64) < rg as i64 {
            continue;
        }
        let s = sg.graded_piece(i - rg);
        if s.is_zero() {
            continue;
        }
        // the E-free part of the monomial rides along unchanged
        let mut base = GradedClass::constant(coeff.clone(), internal);
        for (name, e) in &mono {
            if *name == "E" {
                continue;
            }
            base = base.mul(&GradedClass::variable(name, internal).pow(*e));
        }
        let sign = if (i - 1) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        left = left.add(&base.mul(&s).scale(&sign).truncated(trunc));
    }

    let right = odot_pair(&f_lift, &g_lift)?.value().truncated(trunc).neg();

    let mut first = None;
    for delta in 0..=trunc {
        if left.graded_piece(delta) != right.graded_piece(delta) {
            first = Some(delta + f.rank() + rg);
            break;
        }
    }
    Ok(QPushforwardReport {
        agrees: first.is_none(),
        first_discrepant_codim: first,
        left,
        right,
    })
}

/// Reinterpret a bundle's Chern data at a different formal truncation (the
/// class is an exact polynomial; only the bound changes).
pub fn lift_base(b: &BundleData, base_dim: u32) -> BundleData {
    let mut chern = GradedClass::one(base_dim);
    for k in 1..=b.base_dim().min(base_dim) {
        let piece = b.chern().graded_piece(k);
        if piece.is_zero() {
            continue;
        }
        // rebuild the piece in the larger ring
        for (mono, coeff) in piece.iter_terms() {
            let mut term = GradedClass::constant(coeff.clone(), base_dim);
            for (name, e) in mono {
                term = term.mul(&GradedClass::variable(name, base_dim).pow(e));
            }
            chern = chern.add(&term);
        }
    }
    BundleData::new(b.rank(), chern, base_dim).expect("chern stays a unit")
}

/// Γ′ correction class: Γ′ = c(N_sub)·ζ·E where
/// c(N_quot ⊗ O(-E)) = c(N_quot) + ζ·E.
#[derive(Debug, Clone)]
pub struct GammaClass {
    value: GradedClass,
    zeta: GradedClass,
    n_sub: BundleData,
    n_quot: BundleData,
}

impl GammaClass {
    pub fn value(&self) -> &GradedClass {
        &self.value
    }

    pub fn zeta(&self) -> &GradedClass {
        &self.zeta
    }

    pub fn sub_bundle(&self) -> &BundleData {
        &self.n_sub
    }

    pub fn quotient_bundle(&self) -> &BundleData {
        &self.n_quot
    }

    /// Defining divisibility: the value has no E-free part.
    pub fn divisible_by_e(&self) -> bool {
        self.value.is_zero() || self.value.divide_by_var("E").is_ok()
    }
}

/// Compute Γ′ from the sub- and quotient-normal bundles at the stated
/// truncation (≥ 1), in the base variables plus E.
pub fn gamma_correction(
    n_sub: &BundleData,
    n_quot: &BundleData,
    trunc: u32,
) -> Result<GammaClass> {
    assert!(trunc >= 1, "gamma correction needs truncation >= 1");
    let quot = lift_base(n_quot, trunc);
    let sub = lift_base(n_sub, trunc);
    let minus_e = GradedClass::variable("E", trunc).neg();
    let twisted = twist_chern(&quot, &minus_e)?;
    let diff = twisted.chern().sub(quot.chern());
    let zeta = if diff.is_zero() {
        GradedClass::zero(trunc - 1)
    } else {
        diff.divide_by_var("E")
            .expect("twist difference is divisible by E")
    };
    let value = sub.chern().truncated(zeta.truncation()).mul(&zeta).shift_by_var("E");
    Ok(GammaClass {
        value,
        zeta,
        n_sub: n_sub.clone(),
        n_quot: n_quot.clone(),
    })
}
