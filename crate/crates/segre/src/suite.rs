//! Randomized cross-validation suite behind `segre verify`.
//!
//! Every check is deterministic given the seed; exact arithmetic means a
//! counterexample is a real one. A truncation bound of 0 degenerates every
//! check to zero cases, which passes vacuously with a warning.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundle::{quotient_chern, twist_chern, whitney_chern, BundleData};
use crate::graded::{rat, regrade, DimClass, GradedClass, Rational};
use crate::linear::{
    blowup_pushforward, oracle_union_pair, segre_divisor, segre_linear, LinearScene,
};
use crate::residual::{odot_fold, odot_multi, odot_pair, q_polynomial_roots, q_pushforward_check};
use crate::union::{
    aluffi_residual, fulton_residual, linear_closed_form, union_blowup_residual,
    union_transverse_multi, union_transverse_pair, MultiInput, PairInput,
};

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Truncation bound for randomized polynomial checks.
    pub trunc: u32,
    pub seed: u64,
    /// Case count for the randomized batteries.
    pub cases: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trunc: 8,
            seed: 1,
            cases: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub cases_run: usize,
    pub agreements: usize,
    pub counterexample: Option<String>,
    pub warning: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
    pub config: SuiteConfig,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.counterexample.is_none())
    }

    pub fn format_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "identity suite: trunc {} seed {} cases {}\n\n",
            self.config.trunc, self.config.seed, self.config.cases
        ));
        out.push_str(&format!(
            "{:<42} {:>6} {:>6}  status\n",
            "check", "cases", "agree"
        ));
        for c in &self.checks {
            let status = match (&c.counterexample, &c.warning) {
                (Some(_), _) => "FAIL",
                (None, Some(_)) => "pass (warning)",
                (None, None) => "pass",
            };
            out.push_str(&format!(
                "{:<42} {:>6} {:>6}  {status}\n",
                c.name, c.cases_run, c.agreements
            ));
            if let Some(ce) = &c.counterexample {
                out.push_str(&format!("    counterexample: {ce}\n"));
            }
            if let Some(w) = &c.warning {
                out.push_str(&format!("    warning: {w}\n"));
            }
        }
        out.push_str(&format!(
            "\noverall: {}\n",
            if self.pass() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

fn rand_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=4);
    Rational::new(num.into(), den.into())
}

fn rand_poly(rng: &mut ChaCha8Rng, vars: &[&str], trunc: u32, unit: bool) -> GradedClass {
    let mut out = if unit {
        GradedClass::one(trunc)
    } else {
        GradedClass::constant(rand_rational(rng), trunc)
    };
    let gens: Vec<GradedClass> = vars
        .iter()
        .map(|v| GradedClass::variable(v, trunc))
        .collect();
    let terms = rng.gen_range(1..=4 + trunc as usize);
    for _ in 0..terms {
        let mut mono = GradedClass::constant(rand_rational(rng), trunc);
        let deg = rng.gen_range(1..=trunc.max(1));
        for _ in 0..deg {
            let v = &gens[rng.gen_range(0..gens.len())];
            mono = mono.mul(v);
        }
        out = out.add(&mono);
    }
    out
}

fn rand_bundle(rng: &mut ChaCha8Rng, rank_max: u32, base: u32) -> BundleData {
    let rank = rng.gen_range(0..=rank_max).max(1);
    let chern = rand_poly(rng, &["h"], base, true);
    BundleData::new(rank, chern, base).expect("unit constant")
}

/// Random pair of linear components in generic position: the intersection
/// dimension is max(-1, dx + dy - N), which always satisfies the
/// transversality dimension count.
fn rand_transverse_scene(rng: &mut ChaCha8Rng) -> LinearScene {
    let n = rng.gen_range(2u32..=6);
    let dx = rng.gen_range(0..n);
    let dy = rng.gen_range(0..n);
    let l = (dx as i64 + dy as i64 - n as i64).max(-1);
    LinearScene::pair(n, dx, dy, l).expect("generic scene is valid")
}

struct Runner {
    rng: ChaCha8Rng,
    trunc: u32,
    checks: Vec<CheckResult>,
}

impl Runner {
    /// Run `cases` iterations of a property; `f` returns a counterexample
    /// description on failure. A zero case budget passes with a warning.
    fn run<F>(&mut self, name: &str, cases: usize, mut f: F)
    where
        F: FnMut(usize, &mut ChaCha8Rng, u32) -> Option<String>,
    {
        let cases = if self.trunc == 0 { 0 } else { cases };
        let mut result = CheckResult {
            name: name.to_string(),
            cases_run: 0,
            agreements: 0,
            counterexample: None,
            warning: None,
        };
        for i in 0..cases {
            result.cases_run += 1;
            match f(i, &mut self.rng, self.trunc) {
                None => result.agreements += 1,
                Some(ce) => {
                    result.counterexample = Some(ce);
                    break;
                }
            }
        }
        if result.cases_run == 0 {
            result.warning = Some("zero cases (truncation bound 0)".into());
        }
        self.checks.push(result);
    }
}

/// Execute every cross-validation battery and report per check.
pub fn run_identity_suite(config: &SuiteConfig) -> SuiteReport {
    let mut r = Runner {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        trunc: config.trunc,
        checks: Vec::new(),
    };
    let cases = config.cases;

    r.run("poly_mul_commutative_associative", cases, |_, rng, t| {
        let t = t.min(6);
        let vars: Vec<&str> = ["h", "E", "a"][..rng.gen_range(1..=3)].to_vec();
        let a = rand_poly(rng, &vars, t, false);
        let b = rand_poly(rng, &vars, t, false);
        let c = rand_poly(rng, &vars, t, false);
        if a.mul(&b) != b.mul(&a) {
            return Some(format!("commutativity: a = {a}, b = {b}"));
        }
        if a.mul(&b).mul(&c) != a.mul(&b.mul(&c)) {
            return Some(format!("associativity: a = {a}, b = {b}, c = {c}"));
        }
        None
    });

    r.run("poly_invert_multiply_back", cases, |i, rng, t| {
        let t = t.min(6);
        let vars: Vec<&str> = ["h", "E", "a"][..(i % 3) + 1].to_vec();
        let a = rand_poly(rng, &vars, t, true);
        let inv = a.inverse().expect("unit constant");
        if a.mul(&inv) != GradedClass::one(t) {
            return Some(format!("a = {a}"));
        }
        None
    });

    r.run("regrade_linear", cases, |_, rng, t| {
        let support = rng.gen_range(0..=t.min(6));
        let ambient = support + rng.gen_range(0..=3);
        let a = rand_poly(rng, &["h"], support, false);
        let b = rand_poly(rng, &["h"], support, false);
        let lhs = regrade(&a.add(&b), support, ambient).expect("in range");
        let rhs = regrade(&a, support, ambient)
            .expect("in range")
            .add(&regrade(&b, support, ambient).expect("in range"));
        (lhs != rhs).then(|| format!("a = {a}, b = {b}"))
    });

    r.run("chern_segre_unit", cases, |_, rng, t| {
        let t = t.min(6);
        let b = rand_bundle(rng, 4, t);
        if b.chern().mul(&b.segre()) != GradedClass::one(t) {
            return Some(format!("c = {}", b.chern()));
        }
        None
    });

    r.run("whitney_quotient_roundtrip", cases, |_, rng, t| {
        let t = t.min(6);
        let sub = rand_bundle(rng, 3, t);
        let extra = rand_bundle(rng, 3, t);
        let total = whitney_chern(&sub, &extra).expect("same base");
        let q = quotient_chern(&total, &sub).expect("rank fits");
        let back = whitney_chern(&q, &sub).expect("same base");
        if back.chern() != total.chern() || q.rank() != extra.rank() {
            return Some(format!("total = {}, sub = {}", total.chern(), sub.chern()));
        }
        None
    });

    r.run("twist_untwist_identity", cases, |_, rng, t| {
        let t = t.min(6);
        let b = rand_bundle(rng, 3, t);
        let scale = rand_rational(rng);
        let tv = GradedClass::variable("h", t).scale(&scale);
        let there = twist_chern(&b, &tv).expect("degree 1");
        let back = twist_chern(&there, &tv.neg()).expect("degree 1");
        if back.chern() != b.chern() {
            return Some(format!("c = {}, t = {tv}", b.chern()));
        }
        // twist of a trivial rank-r bundle gives (1+t)^r
        let r0 = rng.gen_range(0..=4u32);
        let tw = twist_chern(&BundleData::trivial(r0, t), &tv).expect("degree 1");
        let expect = GradedClass::one(t).add(&tv).pow(r0);
        if tw.chern() != &expect {
            return Some(format!("trivial rank {r0}, t = {tv}"));
        }
        None
    });

    r.run("q_reconstruction", cases.min(60), |i, rng, t| {
        let t = t.min(8).max(1);
        let n = (i % 5) as u32; // 0..=4 roots
        let q = q_polynomial_roots(n, t);
        if !q.reconstruction_holds() {
            return Some(format!("symbolic, n = {n}"));
        }
        // random rational specialization a_i -> r_i h
        let h = GradedClass::variable("h", t + 1);
        let subs: Vec<(String, GradedClass)> = (1..=n)
            .map(|k| (format!("a{k}"), h.scale(&rand_rational(rng))))
            .collect();
        let sub_refs: Vec<(&str, GradedClass)> = subs
            .iter()
            .map(|(name, c)| (name.as_str(), c.clone()))
            .collect();
        let spec = q.specialize(&sub_refs).expect("degree-1 replacements");
        if !spec.reconstruction_holds() {
            return Some(format!("specialized, n = {n}"));
        }
        None
    });

    r.run("odot_pair_symmetric", cases, |_, rng, t| {
        let t = t.min(6);
        let e = rand_bundle(rng, 3, t);
        let f = rand_bundle(rng, 3, t);
        let ef = odot_pair(&e, &f).expect("same base");
        let fe = odot_pair(&f, &e).expect("same base");
        (ef != fe).then(|| format!("E: c = {}, F: c = {}", e.chern(), f.chern()))
    });

    r.run("odot_multi_equals_fold", cases.min(100), |_, rng, t| {
        let t = t.min(5);
        let len = rng.gen_range(1..=4);
        let bundles: Vec<BundleData> = (0..len).map(|_| rand_bundle(rng, 3, t)).collect();
        let direct = odot_multi(&bundles).expect("same base");
        let folded = odot_fold(&bundles).expect("same base");
        (direct != folded).then(|| {
            format!(
                "bundles: {:?}",
                bundles
                    .iter()
                    .map(|b| format!("rank {} c {}", b.rank(), b.chern()))
                    .collect::<Vec<_>>()
            )
        })
    });

    r.run("q_pushforward_identity", 9 * 3, |i, rng, t| {
        let t = t.min(8);
        let rf = (i % 3) as u32 + 1;
        let rg = ((i / 3) % 3) as u32 + 1;
        let f = BundleData::new(rf, rand_poly(rng, &["h"], t, true), t).expect("unit");
        let g = BundleData::new(rg, rand_poly(rng, &["h"], t, true), t).expect("unit");
        let rep = q_pushforward_check(&f, &g, t).expect("same base");
        (!rep.agrees).then(|| {
            format!(
                "ranks ({rf},{rg}), first discrepant codim {:?}",
                rep.first_discrepant_codim
            )
        })
    });

    r.run("gamma_divisibility_consistency", cases.min(60), |_, rng, t| {
        let t = t.min(6).max(1);
        let sub = rand_bundle(rng, 3, t);
        let quot = rand_bundle(rng, 3, t);
        let gamma = crate::residual::gamma_correction(&sub, &quot, t).expect("trunc >= 1");
        if !gamma.divisible_by_e() {
            return Some(format!("gamma not divisible by E: {}", gamma.value()));
        }
        let sub_l = crate::residual::lift_base(&sub, t);
        let quot_l = crate::residual::lift_base(&quot, t);
        let minus_e = GradedClass::variable("E", t).neg();
        let twisted = twist_chern(&quot_l, &minus_e).expect("degree 1");
        let tq = gamma.value().truncation();
        let lhs = sub_l.chern().mul(twisted.chern()).truncated(tq);
        let rhs = sub_l.chern().mul(quot_l.chern()).truncated(tq).add(gamma.value());
        (lhs != rhs).then(|| format!("sub c = {}, quot c = {}", sub.chern(), quot.chern()))
    });

    r.run("fulton_equals_aluffi", cases.min(100), |_, rng, t| {
        let n = rng.gen_range(1..=t.min(6).max(1));
        let deg = rng.gen_range(0i64..=5);
        let coeffs: Vec<Rational> = (0..=n).map(|_| rand_rational(rng)).collect();
        let r_segre = DimClass::from_coeffs(n, coeffs);
        let f = fulton_residual(deg, &r_segre, n).expect("grading ok");
        let a = aluffi_residual(deg, &r_segre, n).expect("grading ok");
        (f != a).then(|| format!("N = {n}, deg = {deg}, R = {r_segre}"))
    });

    r.run("thm1_symmetry", cases, |_, rng, _| {
        let scene = rand_transverse_scene(rng);
        let input = PairInput::from_linear_scene(&scene, false).expect("two components");
        let a = union_transverse_pair(&input).expect("transverse");
        let b = union_transverse_pair(&input.swapped()).expect("transverse");
        (a.result != b.result).then(|| format!("scene {:?}", scene.components()))
    });

    r.run("divisor_specialization", cases.min(50), |_, rng, _| {
        // X a hyperplane: the transverse pair equals Fulton's residual form
        let n = rng.gen_range(2u32..=6);
        let dy = rng.gen_range(0..n);
        let l = (dy as i64 - 1).max(-1);
        let scene = LinearScene::pair(n, n - 1, dy, l).expect("generic");
        let input = PairInput::from_linear_scene(&scene, false).expect("pair");
        let thm1 = union_transverse_pair(&input).expect("transverse");
        let fulton = fulton_residual(1, &segre_linear(dy, n).expect("dims"), n).expect("grading");
        (thm1.result != fulton).then(|| format!("N = {n}, dim Y = {dy}"))
    });

    r.run("thm2_equals_thm1_on_transverse", cases.min(100), |_, rng, _| {
        let scene = rand_transverse_scene(rng);
        let input = PairInput::from_linear_scene(&scene, true).expect("pair");
        let thm1 = union_transverse_pair(&input).expect("transverse");
        let thm2 = union_blowup_residual(&input).expect("declared");
        (thm1.result != thm2.result).then(|| format!("scene {:?}", scene.components()))
    });

    r.run("multi_equals_pair", cases.min(100), |_, rng, _| {
        let scene = rand_transverse_scene(rng);
        let pair = union_transverse_pair(
            &PairInput::from_linear_scene(&scene, false).expect("pair"),
        )
        .expect("transverse");
        let multi = union_transverse_multi(&MultiInput::from_linear_scene(&scene).expect("multi"))
            .expect("transverse");
        (pair.result != multi.result).then(|| format!("scene {:?}", scene.components()))
    });

    // n coordinate hyperplanes in P^N: inclusion-exclusion degenerates to
    // the divisor class nH/(1+nH)
    {
        let mut result = CheckResult {
            name: "divisor_degeneration".into(),
            cases_run: 0,
            agreements: 0,
            counterexample: None,
            warning: None,
        };
        if r.trunc == 0 {
            result.warning = Some("zero cases (truncation bound 0)".into());
        } else {
            'outer: for n_amb in 1u32..=6 {
                for count in 1u32..=n_amb {
                    result.cases_run += 1;
                    let scene = coordinate_hyperplanes(count, n_amb);
                    let input = MultiInput::from_linear_scene(&scene).expect("multi");
                    let rep = union_transverse_multi(&input).expect("transverse");
                    if rep.result == segre_divisor(count as i64, n_amb) {
                        result.agreements += 1;
                    } else {
                        result.counterexample =
                            Some(format!("{count} hyperplanes in P^{n_amb}: {}", rep.result));
                        break 'outer;
                    }
                }
            }
        }
        r.checks.push(result);
    }

    // oracle agreement on every applicable hyperplane × linear scene, N ≤ 6
    {
        let mut result = CheckResult {
            name: "oracle_agreement".into(),
            cases_run: 0,
            agreements: 0,
            counterexample: None,
            warning: None,
        };
        if r.trunc == 0 {
            result.warning = Some("zero cases (truncation bound 0)".into());
        } else {
            'outer: for n in 2u32..=6 {
                for dy in 0..n {
                    // generic position; skip containment (oracle rejects it)
                    let l = (dy as i64 - 1).max(-1);
                    let scene = LinearScene::pair(n, n - 1, dy, l).expect("generic");
                    let oracle = oracle_union_pair(&scene).expect("applicable");
                    let input = PairInput::from_linear_scene(&scene, true).expect("pair");
                    for (name, rep) in [
                        ("thm1", union_transverse_pair(&input).expect("transverse")),
                        ("thm2", union_blowup_residual(&input).expect("declared")),
                    ] {
                        result.cases_run += 1;
                        if rep.result == oracle {
                            result.agreements += 1;
                        } else {
                            result.counterexample = Some(format!(
                                "{name} vs oracle on hyperplane × P^{dy} in P^{n}"
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        r.checks.push(result);
    }

    r.run("pushforward_self_consistency", 15, |i, _, _| {
        // π_*(e/(1+e)) = s(P^l, P^N) over the table of centers
        let combos: Vec<(u32, u32)> = (1u32..=5)
            .flat_map(|n| (0..n).map(move |l| (l, n)))
            .collect();
        let (l, n) = combos[i % combos.len()];
        let e = GradedClass::variable("e", n);
        let series = e.mul(&GradedClass::one_plus_var("e", n).inverse().expect("unit"));
        let pushed = blowup_pushforward(&series, l, n).expect("h,e class");
        (pushed != segre_linear(l, n).expect("dims")).then(|| format!("l = {l}, N = {n}"))
    });

    r.run("hyperplane_equals_degree_one_divisor", 6, |i, _, _| {
        let n = (i % 6) as u32 + 1;
        (segre_linear(n - 1, n).expect("dims") != segre_divisor(1, n))
            .then(|| format!("N = {n}"))
    });

    r.run("leading_term", cases, |_, rng, _| {
        let scene = rand_transverse_scene(rng);
        let input = PairInput::from_linear_scene(&scene, false).expect("pair");
        let rep = union_transverse_pair(&input).expect("transverse");
        let top = input.x.dim.max(input.y.dim);
        let expect = rep.component_terms[0].1.get(top) + rep.component_terms[1].1.get(top);
        if rep.result.get(top) != expect || !rep.correction.get(top).is_zero() {
            return Some(format!("scene {:?}", scene.components()));
        }
        None
    });

    r.run("example_4_2_comparator", 2, |i, _, _| {
        if i == 0 {
            let rep = linear_closed_form(3, 1, 1, 0, 1).expect("valid dims");
            if rep.theorem_value != rat(2) || !rep.agree {
                return Some(format!(
                    "(3,1,1,0,1): theorem {}, printed {}",
                    rep.theorem_value, rep.printed_value
                ));
            }
        } else {
            // the printed closed form is documented to disagree here; the
            // check passes exactly when the mismatch is flagged
            let rep = linear_closed_form(3, 1, 1, 0, 0).expect("valid dims");
            if rep.theorem_value != rat(-6) || rep.agree {
                return Some(format!(
                    "(3,1,1,0,0): theorem {}, printed {}, agree {}",
                    rep.theorem_value, rep.printed_value, rep.agree
                ));
            }
        }
        None
    });

    SuiteReport {
        checks: r.checks,
        config: *config,
    }
}

/// `count` coordinate hyperplanes in P^N with the full (transverse)
/// intersection lattice.
pub fn coordinate_hyperplanes(count: u32, ambient: u32) -> LinearScene {
    assert!(count >= 1 && count <= ambient);
    let components: Vec<(String, u32)> = (0..count)
        .map(|i| (format!("H{}", i + 1), ambient - 1))
        .collect();
    let mut dims = std::collections::BTreeMap::new();
    for mask in 1u32..(1 << count) {
        let size = mask.count_ones();
        if size < 2 {
            continue;
        }
        let subset: Vec<usize> = (0..count as usize)
            .filter(|i| mask & (1 << i) != 0)
            .collect();
        dims.insert(subset, ambient as i64 - size as i64);
    }
    LinearScene::new(ambient, components, dims).expect("coordinate scene is valid")
}
