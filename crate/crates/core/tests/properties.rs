mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stackyrr::chartheory::{
    character_of, devissage_phi, eigen_decomposition, induce, lefschetz_pushforward, pushforward_along, restrict,
    MatrixRep, VirtualEqBundle,
};
use stackyrr::cyclonum::todd::{stacky_todd_closed_form, stacky_todd_sum};
use stackyrr::cyclonum::{rational, rint};
use stackyrr::eulerlab::{euler_determinant, weighted_chi, EulerVariant, StrataBase, Stratum, WeightedStrata};
use stackyrr::groupoidstack::{equivariant_map, orbits, FiniteGSet};
use stackyrr::grouptheory::{count_commuting_tuples, subgroup_class_representatives, TupleAlgorithm};
use stackyrr::orbicurve::{canonical_divisor, coarse_rr_oracle, degree, euler_char_rr};
use stackyrr::{CyclotomicNumber, Rational};

const CONDUCTORS: [u32; 10] = [1, 3, 4, 5, 7, 12, 15, 20, 21, 28];

fn cyclo() -> impl Strategy<Value = CyclotomicNumber> {
    (0..CONDUCTORS.len(), prop::collection::vec((-9i64..=9, 1i64..=4), 1..8)).prop_map(|(i, terms)| {
        let n = CONDUCTORS[i];
        let coeffs = terms.into_iter().map(|(a, b)| rational(a, b)).collect();
        CyclotomicNumber::from_exponent_poly(n, coeffs).unwrap()
    })
}

/// Value under ζ_N ↦ e^{2πi/N}.
fn embed(x: &CyclotomicNumber) -> (f64, f64) {
    let n = x.conductor() as f64;
    x.coeffs().iter().enumerate().fold((0.0, 0.0), |(re, im), (j, c)| {
        let c = num_traits::ToPrimitive::to_f64(c).unwrap();
        let t = std::f64::consts::TAU * j as f64 / n;
        (re + c * t.cos(), im + c * t.sin())
    })
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < 1e-7 && (a.1 - b.1).abs() < 1e-7
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms(a in cyclo(), b in cyclo(), c in cyclo()) {
        let ab = a.checked_add(&b).unwrap();
        prop_assert_eq!(&ab, &b.checked_add(&a).unwrap());
        prop_assert_eq!(ab.checked_add(&c).unwrap(), a.checked_add(&b.checked_add(&c).unwrap()).unwrap());
        let prod = a.checked_mul(&b).unwrap();
        prop_assert_eq!(&prod, &b.checked_mul(&a).unwrap());
        prop_assert_eq!(prod.checked_mul(&c).unwrap(), a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap());
        let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let rhs = prod.checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.checked_sub(&a).unwrap().is_zero());
        if !a.is_zero() {
            prop_assert!(a.checked_mul(&a.checked_inv().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn arithmetic_matches_complex_embedding(a in cyclo(), b in cyclo()) {
        let (x, y) = (embed(&a), embed(&b));
        prop_assert!(close(embed(&a.checked_add(&b).unwrap()), (x.0 + y.0, x.1 + y.1)));
        prop_assert!(close(embed(&a.checked_mul(&b).unwrap()), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)));
    }

    #[test]
    fn canonical_form_is_unique(a in cyclo(), lift in 1u32..=4) {
        prop_assert_eq!(a.clone().canonicalize(), a.clone());
        // the same number written over a multiple of its conductor
        let big = a.conductor() * lift;
        let big = if big % 4 == 2 { big * 2 } else { big };
        let step = (big / a.conductor()) as usize;
        let mut terms = vec![Rational::from_integer(0.into()); big as usize];
        for (j, c) in a.coeffs().iter().enumerate() {
            terms[j * step] = c.clone();
        }
        let raw = CyclotomicNumber::from_power_basis_raw(big, terms).unwrap();
        prop_assert_eq!(raw.canonicalize(), a.clone());
        prop_assert!(a.conductor() % 4 != 2);
    }

    #[test]
    fn galois_action_is_a_field_automorphism(a in cyclo(), b in cyclo(), k in 1i64..420) {
        let n = 420i64;
        prop_assume!(num_integer::gcd(k, n) == 1);
        let s = |x: &CyclotomicNumber| x.galois_conjugate(k).unwrap();
        prop_assert_eq!(s(&a.checked_add(&b).unwrap()), s(&a).checked_add(&s(&b)).unwrap());
        prop_assert_eq!(s(&a.checked_mul(&b).unwrap()), s(&a).checked_mul(&s(&b)).unwrap());
        let q = CyclotomicNumber::from_rational(rational(k, 7));
        prop_assert_eq!(s(&q), q);
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn display_round_trips(a in cyclo()) {
        let back: CyclotomicNumber = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn todd_sum_matches_closed_form(r in 2i64..=36, k in 0i64..36) {
        let k = k % r;
        prop_assert_eq!(stacky_todd_sum(r, k).unwrap(), stacky_todd_closed_form(r, k).unwrap());
    }
}

fn grid_case(seed: u64) -> (ChaCha8Rng, Arc<FiniteGSet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = common::devissage_grid();
    let x = grid[rng.gen_range(0..grid.len())].1.clone();
    (rng, x)
}

/// A random representation of the group of `x`, from permutation, regular
/// and sign pieces.
fn random_rep(x: &Arc<FiniteGSet>, rng: &mut ChaCha8Rng) -> MatrixRep {
    let g = x.group().clone();
    let pick = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3) {
        0 => MatrixRep::permutation(x),
        1 => MatrixRep::sign(g.clone()).unwrap_or_else(|_| MatrixRep::trivial(g.clone())),
        _ => {
            let subs = subgroup_class_representatives(&g);
            let k = &subs[rng.gen_range(0..subs.len())];
            MatrixRep::permutation(&FiniteGSet::cosets(k))
        }
    };
    let a = pick(rng);
    let b = pick(rng);
    if a.dim() * b.dim() <= 24 && rng.gen_bool(0.5) {
        a.tensor(&b).unwrap()
    } else {
        a.direct_sum(&b).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn class_equation_and_tuple_counts(seed in any::<u64>()) {
        let (_, x) = grid_case(seed);
        let g = x.group();
        let t = g.classes();
        prop_assert_eq!(t.class_sizes.iter().sum::<usize>(), g.order());
        for m in 0..=3 {
            let brute = count_commuting_tuples(g, m, TupleAlgorithm::Brute).unwrap();
            let rec = count_commuting_tuples(g, m, TupleAlgorithm::CentralizerRecursive).unwrap();
            prop_assert_eq!(brute, rec);
        }
        let pairs = count_commuting_tuples(g, 2, TupleAlgorithm::Brute).unwrap();
        prop_assert_eq!(pairs, (t.len() * g.order()) as u128);
    }

    #[test]
    fn eigenspaces_fill_the_representation(seed in any::<u64>()) {
        let (mut rng, x) = grid_case(seed);
        let rep = random_rep(&x, &mut rng);
        let chi = character_of(&rep);
        let g = x.group();
        for h in 0..g.order() {
            let parts = eigen_decomposition(&rep, h).unwrap();
            prop_assert_eq!(parts.iter().map(|(_, d)| d).sum::<usize>(), rep.dim());
            let trace: CyclotomicNumber = parts.iter().map(|(z, d)| z.scale(&rint(*d as i64))).sum();
            prop_assert_eq!(&trace, chi.value_at(h));
        }
    }

    #[test]
    fn phi_is_a_ring_map(seed in any::<u64>()) {
        let (mut rng, x) = grid_case(seed);
        let v = common::random_genuine_bundle(&x, &mut rng);
        let w = common::random_genuine_bundle(&x, &mut rng);
        let (pv, pw) = (devissage_phi(&v).unwrap(), devissage_phi(&w).unwrap());
        let sum = devissage_phi(&v.add(&w).unwrap()).unwrap();
        let prod = devissage_phi(&v.tensor(&w).unwrap()).unwrap();
        let expected_sum: Vec<_> = pv.values().iter().zip(pw.values()).map(|(a, b)| a.checked_add(b).unwrap()).collect();
        prop_assert_eq!(sum.values(), &expected_sum[..]);
        let expected_prod = pv.mul(&pw).unwrap();
        prop_assert_eq!(prod.values(), expected_prod.values());
        let one = devissage_phi(&VirtualEqBundle::structure_sheaf(x.clone())).unwrap();
        prop_assert!(one.values().iter().all(|c| c.is_one()));
    }

    #[test]
    fn frobenius_reciprocity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let groups = common::grid_groups();
        let g = groups[rng.gen_range(0..groups.len())].1.clone();
        let subs = subgroup_class_representatives(&g);
        let h = &subs[rng.gen_range(0..subs.len())];
        let chi = common::random_genuine_character(h.as_group(), &mut rng);
        let psi = common::random_genuine_character(&g, &mut rng);
        let up = induce(h, &chi, false).unwrap();
        let down = restrict(h, &psi).unwrap();
        prop_assert_eq!(up.inner(&psi).unwrap(), chi.inner(&down).unwrap());
        prop_assert_eq!(up.degree(), &chi.degree().scale(&rint(h.index() as i64)));
    }

    #[test]
    fn pushforward_commutes_with_phi(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let groups = common::grid_groups();
        let g = groups[rng.gen_range(0..groups.len())].1.clone();
        let subs = stackyrr::grouptheory::all_subgroups(&g);
        let small = &subs[rng.gen_range(0..subs.len())];
        let supers: Vec<_> = subs.iter().filter(|k| small.elements().iter().all(|e| k.contains(*e))).collect();
        let big = supers[rng.gen_range(0..supers.len())];
        // G/H → G/K, gH ↦ gK
        let x = Arc::new(FiniteGSet::cosets(small));
        let y = Arc::new(FiniteGSet::cosets(big));
        let mut f = vec![0; x.points()];
        for e in 0..g.order() {
            f[x.act(0, e)] = y.act(0, e);
        }
        let rho: Vec<usize> = (0..g.order()).collect();
        let map = equivariant_map(&x, &y, &f, &rho).unwrap();
        let v = common::random_genuine_bundle(&x, &mut rng);
        let pushed = devissage_phi(&pushforward_along(&map, &v).unwrap()).unwrap();
        let lefschetz = lefschetz_pushforward(&map, &devissage_phi(&v).unwrap()).unwrap();
        prop_assert_eq!(pushed.values(), lefschetz.values());
    }

    #[test]
    fn riemann_roch_and_duality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = common::random_curve(&mut rng);
        let d = common::random_divisor(&c, &mut rng);
        let chi = euler_char_rr(&d).unwrap();
        prop_assert_eq!(chi, coarse_rr_oracle(&d));
        let k = canonical_divisor(&c);
        prop_assert_eq!(chi, -euler_char_rr(&k.sub(&d).unwrap()).unwrap());
        // adding an ordinary point raises χ by one
        let e = d.add(&stackyrr::orbicurve::FracDivisor::new(&c, [("fresh".to_string(), rint(1))]).unwrap()).unwrap();
        prop_assert_eq!(euler_char_rr(&e).unwrap(), chi + 1);
        prop_assert_eq!(degree(&e), degree(&d) + rint(1));
    }

    #[test]
    fn weighted_chi_is_additive_and_refinable(seed in any::<u64>()) {
        let (mut rng, x) = grid_case(seed);
        let o = orbits(&x);
        let strata: Vec<(Stratum, Rational)> = vec![(Stratum::Points((0..x.points()).collect()), rint(rng.gen_range(1..6)))];
        let coarse = WeightedStrata::new(StrataBase::GSet(x.clone()), strata).unwrap();
        let parts = o.orbits.iter().map(|orb| Stratum::Points(orb.clone())).collect();
        let fine = coarse.refine(0, parts).unwrap();
        for v in [EulerVariant::Top, EulerVariant::Orb] {
            prop_assert_eq!(weighted_chi(&coarse, v).unwrap(), weighted_chi(&fine, v).unwrap());
            prop_assert_eq!(euler_determinant(&coarse, v).unwrap(), euler_determinant(&fine, v).unwrap());
            let w = &coarse.strata()[0].1;
            prop_assert_eq!(weighted_chi(&coarse, v).unwrap(), w * coarse.base_chi(v).unwrap());
        }
    }
}
