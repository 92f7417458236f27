//! Randomized structural invariants, exercised with proptest.

use hodgeorbit::hodge::{
    decomposition_from_filtration, domain_distance, filtration_from_decomposition, hodge_norm_sq,
    in_period_domain, left_translate, FlagPoint,
};
use hodgeorbit::monodromy::decompose;
use hodgeorbit::numlin::{
    gap_distance, joint_eigenblocks, log_unipotent, matrix_exp, InnerProduct, Subspace,
};
use hodgeorbit::sample::{random_commuting_tuple, random_unitary, seeded_rng};
use hodgeorbit::vhs::registry;
use hodgeorbit::verify::transport;
use hodgeorbit::{cvec, C64, CMat, CVec};
use proptest::prelude::*;

const TAU: f64 = 2.0 * std::f64::consts::PI;

fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn complex_entry() -> impl Strategy<Value = C64> {
    ((-1.0..1.0f64), (-1.0..1.0f64)).prop_map(|(re, im)| c64(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = CMat> {
    proptest::collection::vec(complex_entry(), n * n)
        .prop_map(move |v| CMat::from_row_slice(n, n, &v))
}

fn vector(n: usize) -> impl Strategy<Value = CVec> {
    proptest::collection::vec(complex_entry(), n).prop_map(move |v| CVec::from_vec(v))
}

fn subspace(n: usize, dim: usize) -> impl Strategy<Value = Subspace> {
    proptest::collection::vec(complex_entry(), n * dim).prop_filter_map(
        "spanning set must have full rank",
        move |v| {
            let m = CMat::from_row_slice(n, dim, &v);
            let s = Subspace::from_span(&m, &InnerProduct::standard(n)).ok()?;
            (s.dim() == dim).then_some(s)
        },
    )
}

/// A flag in the weight-1 period domain: span(e1 + tau e2) with Im tau > 0.
fn domain_flag() -> impl Strategy<Value = FlagPoint> {
    ((-2.0..2.0f64), (0.1..4.0f64)).prop_map(|(re, im)| {
        FlagPoint::from_spans(vec![
            (1, CMat::from_columns(&[cvec(&[(1.0, 0.0), (re, im)])])),
            (0, CMat::identity(2, 2)),
        ])
        .expect("flag")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gap_distance_satisfies_triangle_inequality(
        a in subspace(4, 2),
        b in subspace(4, 2),
        c in subspace(4, 2),
    ) {
        let ip = InnerProduct::standard(4);
        let ab = gap_distance(&a, &b, &ip).unwrap();
        let bc = gap_distance(&b, &c, &ip).unwrap();
        let ac = gap_distance(&a, &c, &ip).unwrap();
        prop_assert!(ac <= ab + bc + 1e-10, "{ac} > {ab} + {bc}");
    }

    #[test]
    fn log_of_exp_of_nilpotent_round_trips(m in matrix(3)) {
        // strictly upper triangular part is nilpotent
        let n = CMat::from_fn(3, 3, |i, j| if j > i { m[(i, j)] } else { c64(0.0, 0.0) });
        let u = matrix_exp(&n).unwrap();
        let back = log_unipotent(&u).unwrap();
        prop_assert!((&back - &n).norm() <= 1e-10 * (1.0 + n.norm()));
    }

    #[test]
    fn polynomials_of_one_matrix_have_joint_blocks(m in matrix(4)) {
        // p(M) and q(M) commute for any square M
        let id = CMat::identity(4, 4);
        let p = &m * &m + &m * c64(0.5, 0.0) + &id;
        let q = &m * c64(0.0, 1.0) - &id * c64(2.0, 0.0);
        let blocks = joint_eigenblocks(&[p, q]).unwrap();
        let total: usize = blocks.iter().map(|b| b.space.dim()).sum();
        prop_assert_eq!(total, 4);
    }

    #[test]
    fn filtration_and_decomposition_round_trip(f in domain_flag()) {
        let phd = registry::elliptic_structure().unwrap();
        let dec = decomposition_from_filtration(&f, &phd).unwrap();
        let back = filtration_from_decomposition(&dec).unwrap();
        let d = domain_distance(&back, &f, &InnerProduct::standard(2)).unwrap();
        prop_assert!(d <= 1e-8, "round trip distance {d}");
    }

    #[test]
    fn hodge_norm_is_positive_on_nonzero_vectors(f in domain_flag(), v in vector(2)) {
        prop_assume!(v.norm() > 1e-3);
        let phd = registry::elliptic_structure().unwrap();
        let dec = decomposition_from_filtration(&f, &phd).unwrap();
        let n2 = hodge_norm_sq(&v, &dec, &phd).unwrap();
        prop_assert!(n2 > 0.0, "norm^2 = {n2}");
    }

    #[test]
    fn unitary_translation_preserves_gap_distances(
        f in domain_flag(),
        g in domain_flag(),
        seed in 0u64..1000,
    ) {
        let ip = InnerProduct::standard(2);
        let u = random_unitary(&mut seeded_rng(seed), 2);
        let d0 = domain_distance(&f, &g, &ip).unwrap();
        let fu = left_translate(&u, &f).unwrap();
        let gu = left_translate(&u, &g).unwrap();
        let d1 = domain_distance(&fu, &gu, &ip).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-10, "{d0} vs {d1}");
    }

    #[test]
    fn polarized_translation_preserves_membership(f in domain_flag(), g in domain_flag()) {
        let phd = registry::elliptic_structure().unwrap();
        // the transport between two domain points preserves the pairing,
        // so it must carry members to members with a comparable margin
        let (op, _) = transport(&f, &g, &phd).unwrap();
        let moved = left_translate(&op, &f).unwrap();
        let report = in_period_domain(&moved, &phd).unwrap();
        prop_assert!(report.member, "margin {}", report.margin);
    }

    #[test]
    fn shifting_the_window_shifts_the_exponents(seed in 0u64..500) {
        let mut rng = seeded_rng(seed);
        let tuple = random_commuting_tuple(&mut rng, 4, 1).unwrap();
        let base = decompose(&tuple, &[0.0]).unwrap();
        let shifted = decompose(&tuple, &[1.0]).unwrap();
        // S' = S + I: every exponent moves up by exactly one
        let diff = &shifted.s()[0] - &base.s()[0] - CMat::identity(4, 4);
        prop_assert!(diff.norm() <= 1e-8, "S shift residual {}", diff.norm());
    }

    #[test]
    fn deligne_frame_is_single_valued(seed in 0u64..500) {
        let mut rng = seeded_rng(seed);
        let tuple = random_commuting_tuple(&mut rng, 3, 1).unwrap();
        let dec = decompose(&tuple, &[0.0]).unwrap();
        let z = [c64(-1.3, 0.4)];
        let shifted = [z[0] + c64(0.0, TAU)];
        for entry in hodgeorbit::monodromy::deligne_frame(&dec) {
            let a = entry.eval(&dec, &z).unwrap();
            let b = entry.eval(&dec, &shifted).unwrap();
            prop_assert!((&a - &b).norm() <= 1e-8 * (1.0 + a.norm()));
        }
    }
}
