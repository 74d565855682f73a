mod common;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use unimodular_lab::euler::{self, verify_witness};
use unimodular_lab::matrix::{self, ElementaryOp, RootSchedule, SqMatrix};
use unimodular_lab::path::{self, OpenSet};
use unimodular_lab::ring::RingDescriptor;
use unimodular_lab::umrow::{self, RowPath, UmRow};
use unimodular_lab::wms;
use unimodular_lab::{Elem, Height, Ideal, Ring};

fn rings() -> Vec<Ring> {
    let dual: RingDescriptor = serde_json::from_str(
        r#"{"kind": "quotient", "base": {"kind": "polynomial-ring", "base": {"kind": "prime-field", "modulus": 2}, "vars": ["x"]},
            "relations": ["x^2"], "krull_dim": 0, "minimal_primes": [["x"]]}"#,
    )
    .unwrap();
    let f3xy: RingDescriptor = serde_json::from_str(
        r#"{"kind": "polynomial-ring", "base": {"kind": "prime-field", "modulus": 3}, "vars": ["x", "y"]}"#,
    )
    .unwrap();
    vec![
        Ring::rational_polynomials(&["x", "y"]).unwrap(),
        Ring::from_descriptor(&f3xy).unwrap(),
        Ring::integers_mod(6).unwrap(),
        Ring::from_descriptor(&dual).unwrap(),
    ]
}

fn node_xy() -> Ring {
    let d: RingDescriptor = serde_json::from_str(
        r#"{"kind": "quotient", "base": {"kind": "polynomial-ring", "base": {"kind": "rationals"}, "vars": ["x", "y"]},
            "relations": ["x*y"], "krull_dim": 1, "minimal_primes": [["x"], ["y"]]}"#,
    )
    .unwrap();
    Ring::from_descriptor(&d).unwrap()
}

/// Sum of `c * x^i * y^j` over the given terms, using whichever variables exist.
fn element(ring: &Ring, terms: &[(i64, u32, u32)]) -> Elem {
    let vars: Vec<Elem> = ring.vars().iter().map(|v| ring.var(v).unwrap()).collect();
    let mut acc = ring.zero();
    for &(c, i, j) in terms {
        let mut m = ring.from_i64(c);
        if let Some(x) = vars.first() {
            m = ring.mul(&m, &ring.pow(x, i));
        }
        if let Some(y) = vars.get(1) {
            m = ring.mul(&m, &ring.pow(y, j));
        }
        acc = ring.add(&acc, &m);
    }
    acc
}

fn terms() -> impl Strategy<Value = Vec<(i64, u32, u32)>> {
    prop::collection::vec((-4i64..=4, 0u32..3, 0u32..3), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn arithmetic_is_exact(k in 0usize..4, a in terms(), b in terms(), c in terms()) {
        let ring = &rings()[k];
        let (a, b, c) = (element(ring, &a), element(ring, &b), element(ring, &c));
        prop_assert_eq!(ring.add(&ring.add(&a, &b), &c), ring.add(&a, &ring.add(&b, &c)));
        prop_assert_eq!(ring.mul(&a, &ring.add(&b, &c)), ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c)));
        prop_assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
        let printed = ring.format(&ring.mul(&a, &c));
        prop_assert_eq!(ring.parse(&printed).unwrap(), ring.mul(&a, &c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn groebner_basis_is_a_projection(gens in prop::collection::vec(terms(), 1..4)) {
        let ring = Ring::rational_polynomials(&["x", "y"]).unwrap();
        let ideal = Ideal::new(gens.iter().map(|t| element(&ring, t)).collect());
        let gb = ring.groebner_basis(&ideal).unwrap();
        prop_assert_eq!(&ring.groebner_basis(&gb).unwrap(), &gb);
        prop_assert!(ring.all_in(ideal.gens(), &gb).unwrap());
        prop_assert!(ring.all_in(gb.gens(), &ideal).unwrap());
    }

    #[test]
    fn avoiding_minimal_primes_gives_height_one(f in terms()) {
        let ring = node_xy();
        let f = element(&ring, &f);
        if ring.avoids_minimal_primes(&f).unwrap() {
            let h = ring.height(&Ideal::new(vec![f])).unwrap();
            prop_assert!(h.at_least(1), "height {:?}", h);
        }
    }

    #[test]
    fn comaximal_certificates_verify(f in terms(), g in terms()) {
        let ring = Ring::rational_polynomials(&["x", "y"]).unwrap();
        let (f, g) = (element(&ring, &f), element(&ring, &g));
        let k = Ideal::new(vec![f.clone()]);
        let l = Ideal::new(vec![ring.sub(&ring.one(), &ring.mul(&f, &g))]);
        let cert = ring.comaximal(&k, &l).unwrap();
        prop_assert!(ring.is_one(&ring.add(&cert.k, &cert.l)));
        prop_assert!(ring.verify_comaximal(&k, &l, &cert).unwrap());
    }

    #[test]
    fn op_times_inverse_is_identity(size in 2usize..6, i in 1usize..6, j in 1usize..6, t in -9i64..=9) {
        prop_assume!(i <= size && j <= size && i != j);
        let ring = Ring::rationals();
        let e = ElementaryOp::new(i, j, ring.from_i64(t)).unwrap();
        let m = e.to_matrix(&ring, size).unwrap().mul(&e.inverse(&ring).to_matrix(&ring, size).unwrap()).unwrap();
        prop_assert!(m.is_identity());
    }

    #[test]
    fn reduction_has_full_length_or_a_true_zero_pivot(size in 2usize..6, seed in any::<u64>()) {
        let ring = Ring::rationals();
        let g = random_sl(&ring, size, 2 * size * size, &mut rng(seed));
        match matrix::reduce_generic(&g) {
            Ok(ops) => {
                prop_assert_eq!(ops.len(), size * size - 1);
                prop_assert_eq!(apply_ops_q(&matrix_q(&g), &ring, &ops), identity_q(size));
            }
            Err(unimodular_lab::Error::NotGenericPosition { step }) => {
                prop_assert_eq!(reduce_q(&matrix_q(&g)), Err(step));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn parametrization_has_determinant_one(size in 2usize..5, seed in any::<u64>()) {
        let ring = Ring::rationals();
        let mut r = rng(seed);
        let schedule = RootSchedule::for_size(size);
        let t: Vec<Elem> = (0..schedule.len()).map(|_| random_rational(&ring, &mut r)).collect();
        let g = matrix::params_to_matrix(&ring, &schedule, &t).unwrap();
        prop_assert_eq!(det_q(&matrix_q(&g)), q(1));
        match matrix::matrix_to_params(&g) {
            Ok(back) => prop_assert!(back == t || reduce_q_with(&matrix_q(&g), true).is_err()),
            Err(unimodular_lab::Error::NotGenericPosition { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

fn nonzero_sl3(ring: &Ring, r: &mut rand_chacha::ChaCha8Rng) -> SqMatrix {
    loop {
        let g = random_sl(ring, 3, 12, r);
        if g.entries().iter().all(|e| !ring.is_zero(e)) {
            return g;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn connected_paths_verify_reverse_and_concatenate(seed in any::<u64>()) {
        let ring = Ring::rationals();
        let open = OpenSet::nonzero_entries(&ring, 3).unwrap();
        let mut r = rng(seed);
        let (p, q1, q2) = (nonzero_sl3(&ring, &mut r), nonzero_sl3(&ring, &mut r), nonzero_sl3(&ring, &mut r));
        let a = path::connect(&p, &q1, &open, 100_000, seed).unwrap();
        let b = path::connect(&q1, &q2, &open, 100_000, seed).unwrap();
        prop_assert!(a.verify(Some(&open)));
        prop_assert!(a.reversed().verify(Some(&open)));
        let ab = a.concat(&b).unwrap();
        prop_assert!(ab.verify(Some(&open)));
        prop_assert_eq!(ab.end(), &q2);
        prop_assert_eq!(path::connect(&p, &q1, &open, 100_000, seed).unwrap(), a);
    }
}

fn random_ops(len: usize, count: usize, ring: &Ring, r: &mut rand_chacha::ChaCha8Rng) -> Vec<ElementaryOp> {
    (0..count)
        .map(|_| {
            let i = r.gen_range(1..=len);
            let mut j = r.gen_range(1..=len);
            while j == i {
                j = r.gen_range(1..=len);
            }
            let t = if ring.nvars() > 0 { small_poly(ring, r) } else { ring.sample_constant(r, 10) };
            ElementaryOp::new(i, j, t).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn acting_keeps_rows_unimodular(seed in any::<u64>(), which in 0usize..3) {
        let mut r = rng(seed);
        let ring = match which {
            0 => Ring::integers_mod(12).unwrap(),
            1 => Ring::integers_mod(30).unwrap(),
            _ => qxyz(),
        };
        let mut a = UmRow::parse(&ring, &["1", "0", "0", "0"]).unwrap();
        for e in random_ops(4, 3, &ring, &mut r) {
            a = umrow::act(&a, &e).unwrap();
            prop_assert!(a.certificate_holds());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn prime_avoidance_revalidates(seed in any::<u64>(), len in 2usize..5, finite in any::<bool>()) {
        let mut r = rng(seed);
        let (ring, row) = if finite {
            let ring = Ring::integers_mod(36).unwrap();
            let row = random_row_mod(&ring, 36, len, &mut r);
            (ring, row)
        } else {
            let ring = qxyz();
            let row = random_row_poly(&ring, len, 4, &mut r);
            (ring, row)
        };
        let lambda = umrow::prime_avoidance(&ring, &row).unwrap();
        let h = umrow::shifted_height(&ring, &row, &lambda).unwrap();
        prop_assert!(h.at_least(len - 1), "height {:?}", h);
    }

    #[test]
    fn make_generic_lands_in_the_locus(seed in any::<u64>()) {
        let ring = qxyz();
        let mut r = rng(seed);
        let mut a = UmRow::parse(&ring, &["x", "y", "1", "0"]).unwrap();
        for e in random_ops(4, 2, &ring, &mut r) {
            a = umrow::act(&a, &e).unwrap();
        }
        let p = umrow::make_generic(&a, seed, 10_000).unwrap();
        prop_assert!(umrow::is_generic(p.end()).unwrap());
        prop_assert!(p.verify(true));
        prop_assert_eq!(p.start(), &a);
    }

    #[test]
    fn genericity_ignores_units(seed in any::<u64>(), u in 1i64..7, last in any::<bool>()) {
        let ring = Ring::integers_mod(7).unwrap();
        let mut r = rng(seed);
        let row = UmRow::new(&ring, random_row_mod(&ring, 7, 4, &mut r)).unwrap();
        let mut scaled = row.entries().to_vec();
        let k = if last { 3 } else { 2 };
        scaled[k] = ring.mul(&scaled[k], &ring.from_i64(u));
        let scaled = UmRow::new(&ring, scaled).unwrap();
        prop_assert_eq!(umrow::is_generic(&row).unwrap(), umrow::is_generic(&scaled).unwrap());
    }

    #[test]
    fn orbit_partitions_are_action_closed(n in 2u64..10, m in 2usize..4) {
        let ring = Ring::integers_mod(n).unwrap();
        let part = wms::enumerate_orbits(&ring, m).unwrap();
        prop_assert!(part.is_action_closed());
        let report = wms::group_report(&part);
        prop_assert!(report.well_defined);
    }

    #[test]
    fn normalization_stays_in_orbit(seed in any::<u64>(), n in 2u64..9) {
        let ring = Ring::integers_mod(n).unwrap();
        let mut r = rng(seed);
        let a = UmRow::new(&ring, random_row_mod(&ring, n, 4, &mut r)).unwrap();
        let b = UmRow::new(&ring, random_row_mod(&ring, n, 4, &mut r)).unwrap();
        let norm = wms::normalize_pair(&a, &b, 1000, seed).unwrap();
        prop_assert_eq!(norm.path_a.start(), &a);
        prop_assert_eq!(norm.path_b.start(), &b);
        prop_assert_eq!(norm.path_a.end(), norm.pair.a());
        prop_assert_eq!(norm.path_b.end(), norm.pair.b());
        prop_assert!(norm.path_a.verify(false) && norm.path_b.verify(false));
        prop_assert!(wms::group_law(&norm.pair).unwrap().certificate_holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn phi_values_are_valid_data(seed in any::<u64>()) {
        let ring = qxyz();
        let a = random_generic_row(&ring, &mut rng(seed));
        let v = euler::phi_generic(&a, seed).unwrap();
        for (_, d) in &v.value.terms {
            prop_assert!(d.validate().is_ok());
        }
        let p = euler::phi(&a, seed, 1000).unwrap();
        prop_assert!(p.path.is_empty());
        for (_, d) in &p.generic.value.terms {
            prop_assert!(d.validate().is_ok());
        }
        if let Ok(s) = euler::phi0(&a) {
            for (_, d) in &s.terms {
                prop_assert!(d.validate().is_ok());
            }
        }
    }

    #[test]
    fn antisymmetry_witnesses_verify(seed in any::<u64>()) {
        let ring = qxyz();
        let a = random_generic_row(&ring, &mut rng(seed));
        let swapped = UmRow::new(&ring, euler::swap_last(a.entries())).unwrap();
        prop_assume!(umrow::is_generic(&swapped).unwrap());
        let c = euler::antisymmetry_witness(&a, seed).unwrap();
        prop_assert!(verify_witness(&c.witness, &c.lhs, &c.rhs).ok);
    }

    #[test]
    fn mu_choices_agree(seed in any::<u64>()) {
        let ring = qxyz();
        let a = random_generic_row(&ring, &mut rng(seed));
        let mu1 = euler::sample_mu(&a, seed, 50).unwrap();
        let mu2 = euler::sample_mu(&a, seed.wrapping_add(1), 50).unwrap();
        let c = euler::mu_independence_witness(&a, &mu1, &mu2, seed).unwrap();
        prop_assert!(verify_witness(&c.witness, &c.lhs, &c.rhs).ok);
    }

    #[test]
    fn path_steps_preserve_phi(seed in any::<u64>()) {
        let ring = qxyz();
        let mut r = rng(seed);
        let a = random_generic_row(&ring, &mut r);
        let e = random_ops(4, 1, &ring, &mut r).remove(0);
        let e = ElementaryOp::new(e.i, e.j, ring.from_i64(r.gen_range(1..=3))).unwrap();
        let next = umrow::act(&a, &e).unwrap();
        prop_assume!(umrow::is_generic(&next).unwrap());
        let s = euler::check_phi_step(&a, &e, seed).unwrap();
        prop_assert!(verify_witness(&s.certified.witness, &s.certified.lhs, &s.certified.rhs).ok);
    }
}

#[test]
fn row_paths_replay() {
    let ring = qxyz();
    let a = UmRow::parse(&ring, &["x", "y", "1", "0"]).unwrap();
    let p = umrow::make_generic(&a, 3, 1000).unwrap();
    let back = RowPath::from_json(&ring, &p.to_json()).unwrap();
    assert_eq!(back.end(), p.end());
    assert!(matches!(
        ring.height(&Ideal::new(vec![ring.one()])).unwrap(),
        Height::UnitIdeal
    ));
}
