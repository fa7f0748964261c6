mod common;

use common::Oracle;
use nhspec::census::CensusRunner;
use nhspec::char_sums::{GFamily, GPoly};
use nhspec::closed_form::{
    closed_form_inputs, gamma3, gamma3_by_products, gamma4, gamma4_by_products, u0_non_f3,
};
use nhspec::ness::{ddt_row, spectrum_bruteforce};
use nhspec::{Chi, FieldCtx, FieldElem};

fn domain(n: usize) -> (FieldCtx, Vec<FieldElem>) {
    let ctx = FieldCtx::new(n, None).unwrap();
    let us = u0_non_f3(&ctx);
    (ctx, us)
}

#[test]
fn gammas_agree_with_product_forms() {
    for n in [3, 5] {
        let (ctx, us) = domain(n);
        for u in us {
            assert_eq!(
                gamma3(&ctx, u).unwrap(),
                gamma3_by_products(&ctx, u).unwrap()
            );
            assert_eq!(
                gamma4(&ctx, u).unwrap(),
                gamma4_by_products(&ctx, u).unwrap()
            );
        }
    }
}

#[test]
fn spectrum_entries_divisible_by_q_minus_1() {
    for n in [3, 5] {
        let (ctx, us) = domain(n);
        let q1 = u64::from(ctx.q() - 1);
        for u in us {
            let s = spectrum_bruteforce(&ctx, u);
            assert_eq!(s.uniformity(), 4);
            assert!(s.omegas.iter().all(|w| w % q1 == 0), "{:?}", s.omegas);
        }
    }
}

#[test]
fn special_set_is_distinct_and_phi_sign_fixed() {
    let (ctx, us) = domain(5);
    for u in us {
        let fam = GFamily::new(&ctx, u).unwrap();
        let a = fam.special_set();
        for i in 0..5 {
            for j in 0..i {
                assert_ne!(a[i], a[j]);
            }
        }
        let s = fam.sqrt_term();
        let u2m1 = ctx.square(u).sub(FieldElem::ONE);
        let (p, m) = (ctx.chi(u2m1.add(s)), ctx.chi(u2m1.sub(s)));
        assert_ne!(p, Chi::Zero);
        assert_ne!(m, Chi::Zero);
        assert_ne!(p, m);
        assert_eq!(
            ctx.chi(ctx.mul(u.add(FieldElem::ONE), fam.phi())),
            Chi::Minus
        );
    }
}

#[test]
fn g1_and_g5_have_single_roots() {
    let (ctx, us) = domain(3);
    for u in us {
        let fam = GFamily::new(&ctx, u).unwrap();
        // g1 vanishes only at 0; g5 vanishes only at -1 + s
        let zeros = |g: GPoly| ctx.elements().filter(|&z| fam.eval(g, z).is_zero()).count();
        assert_eq!(zeros(GPoly::G1), 1);
        assert_eq!(zeros(GPoly::G5), 1);
        assert!(fam.eval(GPoly::G5, fam.special_set()[3]).is_zero());
    }
}

#[test]
fn derivative_antisymmetry_sums_to_zero() {
    let (ctx, us) = domain(3);
    for u in us {
        for a in ctx.elements().skip(1) {
            let row = ddt_row(&ctx, u, a).unwrap();
            let back = ddt_row(&ctx, u, a.neg()).unwrap();
            // δ(a, b) = δ(-a, -b)
            for b in ctx.elements() {
                assert_eq!(
                    row[ctx.index(b) as usize],
                    back[ctx.index(b.neg()) as usize]
                );
            }
        }
    }
}

#[test]
fn epsilon_counts_three_solution_points() {
    for n in [3, 5] {
        let (ctx, us) = domain(n);
        for u in us {
            let runner = CensusRunner::new(&ctx, u).unwrap();
            let eps = closed_form_inputs(&ctx, u).unwrap().epsilon;
            let hits = [FieldElem::ONE.add(u), FieldElem::ONE.sub(u)]
                .iter()
                .filter(|&&z| runner.predict(FieldElem::ONE, z).unwrap() == 3)
                .count();
            assert_eq!(hits, eps as usize, "u={}", ctx.format_elem(u));
        }
    }
}

#[test]
fn desired_roots_are_disjoint_across_cases() {
    let (ctx, us) = domain(3);
    for &u in us.iter().take(4) {
        let runner = CensusRunner::new(&ctx, u).unwrap();
        for a in ctx.elements().skip(1) {
            for c in runner.census_row(a).unwrap() {
                let mut roots: Vec<u32> = c
                    .cases
                    .iter()
                    .flat_map(|o| o.desired.iter().map(|&x| ctx.index(x)))
                    .collect();
                let before = roots.len();
                roots.sort_unstable();
                roots.dedup();
                assert_eq!(roots.len(), before);
                assert!(c.pattern()[2] <= 2);
            }
        }
    }
}

#[test]
fn bruteforce_is_independent_of_thread_count() {
    let (ctx, us) = domain(5);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    for &u in us.iter().take(5) {
        let a = one.install(|| spectrum_bruteforce(&ctx, u));
        let b = four.install(|| spectrum_bruteforce(&ctx, u));
        assert_eq!(a, b);
    }
}

#[test]
fn oracle_spectrum_matches_for_out_of_domain_u() {
    let ctx = FieldCtx::new(3, None).unwrap();
    let o = Oracle::new(&ctx);
    for u in ctx.elements() {
        assert_eq!(spectrum_bruteforce(&ctx, u).omegas, o.spectrum(u));
    }
}
