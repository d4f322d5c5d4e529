mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::Rng;

use fintorsion::complex::{
    analytic_torsion, cohomology, rt_volume_forms, rt_volume_forms_rechosen, ChainComplex, FieldComplex, GroupAction,
    VolumeForm,
};
use fintorsion::constructions::cw::fixtures as cw;
use fintorsion::constructions::morse::fixtures as ms;
use fintorsion::constructions::order::{eisenstein_modulus, gaussian_modulus};
use fintorsion::constructions::{
    cw_cochain_complex, direct_sum, morse_smale_complex, restrict_scalars, tensor_power_cyclic,
};
use fintorsion::equivariant::{isotypic_decomposition, quotient_cohomology, tau_sigma_spectral};
use fintorsion::linalg::{
    determinant_int, rank_and_pseudo_determinant, saturated_kernel, smith_normal_form, IntMatrix,
};
use fintorsion::verify::generate::{self, Params};
use fintorsion::verify::{run_identity_check, CheckInput, Verdict};

use common::{close, cokernel_torsion, dense, eigen_pdet};

fn int_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn is_unit(m: &IntMatrix) -> bool {
    determinant_int(m).abs().is_one()
}

/// Product of random elementary row operations.
fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let k = BigInt::from(rng.gen_range(-2..=2));
        for c in 0..n {
            let add = p.get(j, c) * &k;
            *p.get_mut(i, c) += add;
        }
    }
    if n > 1 && rng.gen_bool(0.5) {
        p.swap_rows(0, n - 1);
    }
    p
}

fn equivariant<R: Rng>(rng: &mut R, order: u32) -> ChainComplex {
    generate::random_complex(rng, &Params { order, max_rank: 4, max_entry: 3, ..Params::default() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_reconstructs(m in int_matrix(5, 5, 6)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.matmul(&m).matmul(&s.v), s.d.clone());
        prop_assert!(s.u.matmul(&s.u_inv).is_identity() && s.v.matmul(&s.v_inv).is_identity());
        prop_assert!(is_unit(&s.u) && is_unit(&s.v));
        for (i, x) in s.divisors.iter().enumerate() {
            prop_assert_eq!(s.d.get(i, i), x);
            prop_assert!(!x.is_negative());
        }
        for w in s.divisors.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        let off_diagonal = s.d.entries().all(|(r, c, x)| r == c || x.is_zero());
        prop_assert!(off_diagonal);
    }

    #[test]
    fn torsion_order_matches_enumeration(m in int_matrix(3, 3, 3)) {
        let (by_minors, by_count) = cokernel_torsion(&dense(&m), m.rows(), m.cols());
        prop_assert_eq!(by_minors, by_count);
        prop_assert_eq!(smith_normal_form(&m).torsion_order(), BigInt::from(by_minors));
    }

    #[test]
    fn pseudo_determinant_matches_eigenproduct(g in int_matrix(8, 8, 3)) {
        let m = g.transpose().matmul(&g).to_rational();
        let (rank, pdet) = rank_and_pseudo_determinant(&m).unwrap();
        let (eig_rank, eig_pdet) = eigen_pdet(&m);
        prop_assert_eq!(rank, eig_rank);
        prop_assert!(close(pdet.to_f64().unwrap(), eig_pdet, 1e-9), "{} vs {}", pdet, eig_pdet);
    }

    #[test]
    fn pseudo_determinant_scales(g in int_matrix(6, 6, 3), c in 1i64..5) {
        let m = g.transpose().matmul(&g).to_rational();
        let (rank, pdet) = rank_and_pseudo_determinant(&m).unwrap();
        let c2 = BigRational::from_integer(BigInt::from(c * c));
        let (rank2, pdet2) = rank_and_pseudo_determinant(&m.scale(&c2)).unwrap();
        prop_assert_eq!(rank, rank2);
        prop_assert_eq!(pdet2, pdet * num_traits::pow(c2, rank));
    }

    #[test]
    fn saturated_kernel_is_saturated(m in int_matrix(4, 6, 4)) {
        let k = saturated_kernel(&m);
        let rank = smith_normal_form(&m).rank();
        prop_assert_eq!(k.cols(), m.cols() - rank);
        prop_assert!(m.matmul(&k).is_zero());
        if k.cols() > 0 {
            let s = smith_normal_form(&k);
            prop_assert_eq!(s.rank(), k.cols());
            prop_assert!(s.torsion_order().is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cohomology_matches_enumeration(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let c = generate::random_any(&mut rng, 3, 3, 2);
        let orders = cohomology(&c).unwrap().torsion_orders();
        for k in 1..c.len() {
            let d = c.d_into(k);
            let (by_minors, by_count) = cokernel_torsion(&dense(&d), d.rows(), d.cols());
            prop_assert_eq!(by_minors, by_count);
            prop_assert_eq!(&orders[k], &BigInt::from(by_minors));
        }
    }

    /// With regulators the calibration identity holds without acyclicity.
    #[test]
    fn calibration_with_regulators(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let c = generate::random_any(&mut rng, 3, 4, 4);
        let r = run_identity_check("untwisted-cm-finite", &CheckInput::Complex(c)).unwrap();
        prop_assert_eq!(r.verdict, Verdict::ExactPass);
    }

    #[test]
    fn torsion_is_multiplicative(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let a = generate::random_acyclic(&mut rng, 3, 3, 4);
        let b = generate::random_acyclic(&mut rng, 3, 3, 4);
        let s = direct_sum(&a, &b).unwrap();
        prop_assert_eq!(analytic_torsion(&s).unwrap(), analytic_torsion(&a).unwrap().mul(&analytic_torsion(&b).unwrap()));
    }

    #[test]
    fn isometric_basis_change_preserves_invariants(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let c = generate::random_any(&mut rng, 3, 3, 4);
        let p: Vec<IntMatrix> = c.ranks().iter().map(|&n| random_unimodular(&mut rng, n)).collect();
        let moved = c.change_basis(&p).unwrap();
        prop_assert!(moved.validate().passed());
        prop_assert_eq!(analytic_torsion(&moved).unwrap(), analytic_torsion(&c).unwrap());
        let (h, h2) = (cohomology(&c).unwrap(), cohomology(&moved).unwrap());
        prop_assert_eq!(h.torsion_orders(), h2.torsion_orders());
        for (x, y) in h.degrees.iter().zip(&h2.degrees) {
            prop_assert_eq!(&x.regulator_sq, &y.regulator_sq);
        }
    }

    #[test]
    fn reidemeister_torsion_ignores_auxiliary_choices(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let c = generate::random_acyclic(&mut rng, 3, 3, 4);
        let fc = FieldComplex::from_integer_complex(&c);
        let omega: Vec<VolumeForm<BigRational>> = c.ranks().iter().map(|&n| VolumeForm::standard(n)).collect();
        let mu = vec![None; c.len()];
        let base = rt_volume_forms(&fc, &omega, &mu).unwrap();
        let again = rt_volume_forms_rechosen(&fc, &omega, &mu, &mut rng).unwrap();
        prop_assert_eq!(base.abs(), again.abs());
        // With standard forms |RT| is the alternating product of the cohomology orders.
        let h = cohomology(&c).unwrap();
        let product = h.alternating_torsion(1).as_rational().unwrap();
        prop_assert_eq!(base.abs(), product);
    }

    #[test]
    fn trivial_action_gives_analytic_torsion(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5])) {
        let mut rng = generate::rng(seed);
        let c = generate::random_acyclic(&mut rng, 3, 3, 4);
        let twisted = c.clone().with_action(GroupAction::trivial(p, c.ranks())).unwrap();
        prop_assert_eq!(tau_sigma_spectral(&twisted).unwrap(), analytic_torsion(&c).unwrap());
    }

    #[test]
    fn isotypic_parts_and_quotient(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5])) {
        let mut rng = generate::rng(seed);
        let c = equivariant(&mut rng, p);
        let iso = isotypic_decomposition(&c).unwrap();
        prop_assert!(iso.fixed_part.validate().passed() && iso.pofsigma_part.validate().passed());
        for k in 0..c.len() {
            prop_assert_eq!(iso.fixed_part.rank(k) + iso.pofsigma_part.rank(k), c.rank(k));
            let both = iso.fixed_embedding[k].hstack(&iso.pofsigma_embedding[k]);
            prop_assert_eq!(smith_normal_form(&both).rank(), c.rank(k));
        }
        let q = quotient_cohomology(&c).unwrap();
        for n in q.group_orders.iter().chain(&q.cohomology_orders) {
            let mut m = n.clone();
            while (&m % p).is_zero() {
                m /= p;
            }
            prop_assert!(m.is_one(), "{} is not a power of {}", n, p);
        }
    }

    #[test]
    fn tensor_powers_are_complexes(seed in any::<u64>(), p in 2u32..=3) {
        let mut rng = generate::rng(seed);
        let a = generate::random_tensor_base(&mut rng, if p == 2 { 4 } else { 3 });
        let t = tensor_power_cyclic(&a, p).unwrap();
        prop_assert!(t.validate().passed());
        prop_assert_eq!(t.total_rank(), a.total_rank().pow(p));
        prop_assert_eq!(t.euler_characteristic(), a.euler_characteristic().pow(p));
    }

    #[test]
    fn cellular_euler_characteristic(seed in any::<u64>(), p in 2u32..=3) {
        let mut rng = generate::rng(seed);
        let k = generate::random_graph(&mut rng, p);
        let c = cw_cochain_complex(&k).unwrap();
        prop_assert_eq!(c.euler_characteristic(), k.euler_characteristic());
        let betti: i64 = c.betti_numbers().iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(betti, k.euler_characteristic());
    }

    #[test]
    fn restriction_scales_ranks(seed in any::<u64>(), gaussian in any::<bool>()) {
        let mut rng = generate::rng(seed);
        let modulus = if gaussian { gaussian_modulus() } else { eisenstein_modulus() };
        let o = generate::random_order_complex(&mut rng, &modulus);
        let r = restrict_scalars(&o).unwrap();
        let scaled: Vec<usize> = o.ranks().iter().map(|&n| 2 * n).collect();
        prop_assert_eq!(r.ranks(), scaled.as_slice());
        prop_assert!(r.is_rationally_acyclic());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Every check except the isotypic decomposition of `RT_sigma`, whose
    /// known failures are covered elsewhere, passes or declines on any seed.
    #[test]
    fn checks_never_fail(seed in any::<u64>()) {
        for name in fintorsion::verify::CHECKS.iter().filter(|&&n| n != "rt-sigma-decomposition") {
            let r = run_identity_check(name, &CheckInput::Seed(seed)).unwrap();
            prop_assert_ne!(r.verdict, Verdict::Fail, "{} seed {}", name, seed);
        }
    }

    #[test]
    fn reports_are_reproducible(seed in any::<u64>()) {
        for name in ["untwisted-cm-finite", "twisted-split-p2", "nrt-additivity", "quotient-geometric"] {
            let a = run_identity_check(name, &CheckInput::Seed(seed)).unwrap();
            let b = run_identity_check(name, &CheckInput::Seed(seed)).unwrap();
            prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        }
    }
}

#[test]
fn morse_and_cellular_cohomology_agree() {
    let pairs = [
        (morse_smale_complex(&ms::circle()).unwrap(), cw_cochain_complex(&cw::rotation_circle(3)).unwrap()),
        (morse_smale_complex(&ms::sphere()).unwrap(), cw_cochain_complex(&cw::reflection_sphere()).unwrap()),
        (morse_smale_complex(&ms::point()).unwrap(), cw_cochain_complex(&cw::point()).unwrap()),
    ];
    for (m, c) in pairs {
        let (hm, hc) = (cohomology(&m).unwrap(), cohomology(&c).unwrap());
        let free = |h: &fintorsion::complex::CohomologyReport| h.degrees.iter().map(|d| d.free_rank).collect::<Vec<_>>();
        assert_eq!(free(&hm), free(&hc));
        assert_eq!(hm.torsion_orders(), hc.torsion_orders());
    }
}
