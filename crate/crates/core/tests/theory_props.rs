use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use twisted_burnside::abelian::{
    fixed_subgroup_size, is_automorphism, reidemeister_number, rp_witness, AbelianEndo,
    FgAbelianGroup,
};
use twisted_burnside::characters::{dual_action, CharacterTableModP};
use twisted_burnside::corpus::finite_corpus;
use twisted_burnside::group::{enumerate_automorphisms, inner_automorphism, twisted_classes};
use twisted_burnside::linalg::IntMatrix;
use twisted_burnside::suite::orbit_count_by_action;
use twisted_burnside::zeta::{
    moebius, reidemeister_sequence, verify_congruences, zeta_coefficients, Source,
};
use twisted_burnside::ExtendedCount;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Product of elementary row operations applied to the identity.
fn unimodular(n: usize, ops: &[(usize, usize, i64, bool)]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for &(i, j, c, flip) in ops {
        let (i, j) = (i % n, j % n);
        if i != j {
            for col in 0..n {
                let v = &m[(j, col)] * BigInt::from(c);
                m[(i, col)] += v;
            }
        }
        if flip {
            for col in 0..n {
                m[(i, col)] = -m[(i, col)].clone();
            }
        }
    }
    m
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64, bool)>> {
    prop::collection::vec((0usize..3, 0usize..3, -2i64..=2, any::<bool>()), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn moebius_is_multiplicative(a in 1u64..=100, b in 1u64..=100) {
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(moebius(a * b), moebius(a) * moebius(b));
    }

    #[test]
    fn free_automorphisms_satisfy_the_theory((n, ops) in (1usize..=3).prop_flat_map(|n| (Just(n), ops()))) {
        let group = FgAbelianGroup::new::<i64>(n, &[]).unwrap();
        let psi = AbelianEndo::from_free_matrix(&group, unimodular(n, &ops)).unwrap();
        prop_assert!(is_automorphism(&group, &psi).unwrap());
        let r = reidemeister_number(&group, &psi).unwrap();
        let fix = fixed_subgroup_size(&group, &psi).unwrap();
        // On a free group the fixed subgroup is trivial or infinite, and R is
        // |det(F - I)| exactly when that is nonzero.
        let det = (&psi.free_block().clone() - &IntMatrix::identity(n)).determinant().unwrap();
        if det.is_zero() {
            prop_assert_eq!(r, ExtendedCount::Infinite);
            prop_assert_eq!(fix, ExtendedCount::Infinite);
        } else {
            prop_assert_eq!(&r, &ExtendedCount::Finite(det.abs().to_biguint().unwrap()));
            prop_assert_eq!(fix, ExtendedCount::finite(1u64));
            prop_assert!(rp_witness(&group, &psi).unwrap().verify(&group, &psi).unwrap());
        }
        let seq = reidemeister_sequence(&Source::Abelian { group, psi }, 8).unwrap();
        if seq.values.iter().all(ExtendedCount::is_finite) {
            prop_assert!(verify_congruences(&seq).unwrap().all_pass);
            let coeffs = zeta_coefficients(&seq, 8).unwrap();
            prop_assert!(coeffs.iter().all(|c| c.is_integer()));
        }
    }

    #[test]
    fn mixed_automorphisms_bound_fixed_points(f in prop_oneof![Just(1i64), Just(-1)], b in 0i64..6, c in prop_oneof![Just(1i64), Just(5)]) {
        let group = FgAbelianGroup::new(1, &[6]).unwrap();
        let psi = AbelianEndo::new(
            &group,
            IntMatrix::square(&[&[f]]),
            IntMatrix::square(&[&[b]]),
            IntMatrix::square(&[&[c]]),
        ).unwrap();
        prop_assert!(is_automorphism(&group, &psi).unwrap());
        let r = reidemeister_number(&group, &psi).unwrap();
        if r.is_finite() {
            prop_assert!(r >= fixed_subgroup_size(&group, &psi).unwrap());
            prop_assert!(rp_witness(&group, &psi).unwrap().verify(&group, &psi).unwrap());
        }
    }

    #[test]
    fn cokernel_matches_orbits_on_random_finite_groups(
        factors in prop::collection::vec(2u64..=6, 1..=2),
        pick in any::<prop::sample::Index>(),
    ) {
        let group = FgAbelianGroup::from_cyclic_factors(0, &factors);
        let auts = twisted_burnside::abelian::enumerate_automorphisms(&group).unwrap();
        let psi = &auts[pick.index(auts.len())];
        let r = reidemeister_number(&group, psi).unwrap();
        let orbits = orbit_count_by_action(&group, psi).unwrap();
        prop_assert_eq!(r, ExtendedCount::finite(orbits as u64));
    }
}

#[test]
fn moebius_sums_over_divisors() {
    for n in 1..=2000u64 {
        let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| i64::from(moebius(d))).sum();
        assert_eq!(s, i64::from(n == 1), "n = {n}");
    }
}

#[test]
fn dual_action_respects_composition_and_inner_twists() {
    for entry in finite_corpus().unwrap().into_iter().filter(|e| e.group.order() <= 12) {
        let g = &entry.group;
        let table = CharacterTableModP::compute(g).unwrap();
        assert_eq!(table.class_count(), twisted_classes(g, &inner_automorphism(g, 0)).class_count());
        let auts = enumerate_automorphisms(g).unwrap();
        let perms: Vec<Vec<usize>> = auts
            .iter()
            .map(|a| dual_action(g, &table, a).unwrap().permutation)
            .collect();
        for (i, phi) in auts.iter().enumerate() {
            for (j, psi) in auts.iter().enumerate() {
                // chi . (phi . psi) = (chi . phi) . psi
                let composed = dual_action(g, &table, &phi.compose(psi)).unwrap().permutation;
                let expected: Vec<usize> = perms[i].iter().map(|&k| perms[j][k]).collect();
                assert_eq!(composed, expected, "{}", entry.name);
            }
            for x in g.elements() {
                let twisted = inner_automorphism(g, x).compose(phi);
                assert_eq!(dual_action(g, &table, &twisted).unwrap().permutation, perms[i]);
            }
        }
    }
}

#[test]
fn zeta_coefficients_of_finite_sources_are_integers() {
    for entry in finite_corpus().unwrap() {
        for phi in enumerate_automorphisms(&entry.group).unwrap().into_iter().take(6) {
            let seq = reidemeister_sequence(
                &Source::Finite {
                    group: entry.group.clone(),
                    phi,
                },
                10,
            )
            .unwrap();
            let coeffs = zeta_coefficients(&seq, 10).unwrap();
            assert!(coeffs[0].is_one());
            assert!(coeffs.iter().all(|c| c.is_integer()), "{}", entry.name);
        }
    }
}
