use holo_core::gates::{apply_via_cauchy, matrix_to_operator, standard_gate};
use holo_core::infotheory::kl_divergence;
use holo_core::upl::{classify_state, SubsystemPartition};
use holo_core::{
    BargmannSpace, Classification, DiffOp, GateName, HoloPoly, MultiIndex, Partition, ProbVector, QuadratureGrid, C64,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

/// Random state in `dim` variables with total degree ≤ `deg`, stored with bound `bound`.
fn state(dim: usize, deg: u32, bound: u32) -> impl Strategy<Value = HoloPoly> {
    prop::collection::vec((prop::collection::vec(0..=deg, dim), complex()), 1..6).prop_map(move |entries| {
        let terms = entries
            .into_iter()
            .filter(|(e, _)| e.iter().sum::<u32>() <= deg)
            .map(|(e, c)| (MultiIndex::new(e), c));
        HoloPoly::from_terms(dim, bound, terms).unwrap()
    })
}

fn first_order(dim: usize) -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(complex(), dim * dim).prop_map(move |m| {
        matrix_to_operator(&DMatrix::from_row_slice(dim, dim, &m)).unwrap()
    })
}

const GATES: [GateName; 5] = [GateName::X, GateName::Y, GateName::Z, GateName::I, GateName::H];

proptest! {
    #[test]
    fn apply_is_linear(f in state(2, 3, 3), g in state(2, 3, 3), a in complex(), b in complex(), op in first_order(2)) {
        let lhs = op.apply(&HoloPoly::linear_combine(&[a, b], &[f.clone(), g.clone()]).unwrap()).unwrap();
        let rhs = HoloPoly::linear_combine(&[a, b], &[op.apply(&f).unwrap(), op.apply(&g).unwrap()]).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-10));
    }

    #[test]
    fn compose_matches_sequential_apply(f in state(2, 3, 6), a in first_order(2), b in first_order(2), i in 0..2usize) {
        // Mix in a second-order piece so normal ordering is exercised.
        let b = b.compose(&DiffOp::multiplication(2, i).unwrap()).unwrap()
            .compose(&DiffOp::derivative(2, 1 - i).unwrap()).unwrap();
        let direct = a.compose(&b).unwrap().apply(&f).unwrap();
        let seq = a.apply(&b.apply(&f).unwrap()).unwrap();
        prop_assert!(direct.approx_eq(&seq, 1e-9));
    }

    #[test]
    fn inner_product_is_hermitian(f in state(2, 4, 4), g in state(2, 4, 4), t in 0.25..3.0f64) {
        let s = BargmannSpace::new(2, t).unwrap();
        let fg = s.inner_product(&f, &g).unwrap();
        let gf = s.inner_product(&g, &f).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-12 * fg.norm().max(1.0));
        prop_assert!(s.norm_sq(&f).unwrap() >= 0.0);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_slot(f in state(1, 5, 5), g in state(1, 5, 5), a in complex()) {
        let s = BargmannSpace::new(1, 1.0).unwrap();
        let lhs = s.inner_product(&f.scale(a), &g).unwrap();
        let rhs = a.conj() * s.inner_product(&f, &g).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn cauchy_agrees_with_symbolic(f in state(2, 3, 3), k in 0..5usize) {
        let op = standard_gate(&GATES[k]).unwrap();
        let via = apply_via_cauchy(&op, &f, 1.0, 32).unwrap();
        prop_assert!(via.max_coefficient_diff(&op.apply(&f).unwrap()) < 1e-8);
    }

    #[test]
    fn translation_round_trip(f in state(2, 4, 4), a in complex(), b in complex()) {
        let back = f.translated(&[a, b]).unwrap().translated(&[-a, -b]).unwrap();
        prop_assert!(back.max_coefficient_diff(&f) < 1e-9);
    }

    #[test]
    fn tensor_products_are_product_states(f in state(1, 3, 3), g in state(2, 3, 3)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let joint = f.tensor(&g);
        prop_assert!(joint.is_product_state(&Partition::split_at(3, 1).unwrap(), 1e-10).unwrap());
    }

    #[test]
    fn json_round_trip(f in state(3, 3, 5)) {
        let text = serde_json::to_string(&f).unwrap();
        let back: HoloPoly = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.max_degree(), f.max_degree());
        prop_assert!(back.max_coefficient_diff(&f) == 0.0);
    }

    #[test]
    fn gibbs_inequality(p in prop::collection::vec(0.01..1.0f64, 2..8), seed in prop::collection::vec(0.01..1.0f64, 8)) {
        let q: Vec<f64> = seed[..p.len()].to_vec();
        let p = ProbVector::from_weights(&p).unwrap();
        let q = ProbVector::from_weights(&q).unwrap();
        prop_assert!(kl_divergence(&p, &q).unwrap() >= -1e-15);
        prop_assert!(kl_divergence(&p, &p).unwrap().abs() < 1e-15);
    }

    #[test]
    fn quadrature_matches_exact_inner_product(f in state(1, 4, 4), g in state(1, 4, 4)) {
        let s = BargmannSpace::new(1, 1.0).unwrap();
        let exact = s.inner_product(&f, &g).unwrap();
        let quad = s.inner_product_quadrature(&f, &g, &QuadratureGrid::for_space(&s)).unwrap();
        prop_assert!((exact - quad).norm() <= 1e-8 * exact.norm().max(1.0));
    }
}

#[test]
fn canonical_commutation() {
    for i in 0..3 {
        for j in 0..3 {
            let d = DiffOp::derivative(3, i).unwrap();
            let z = DiffOp::multiplication(3, j).unwrap();
            let comm = d.commutator(&z).unwrap();
            let expected = if i == j { DiffOp::scalar(3, C64::new(1.0, 0.0)) } else { DiffOp::zero(3) };
            assert_eq!(comm, expected, "[∂{i}, z{j}]");
        }
    }
}

#[test]
fn monomials_are_classical() {
    fn indices(dim: usize, deg: u32) -> Vec<Vec<u32>> {
        if dim == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for e in 0..=deg {
            for mut rest in indices(dim - 1, deg - e) {
                rest.insert(0, e);
                out.push(rest);
            }
        }
        out
    }
    for dim in 1..=4 {
        let single = SubsystemPartition::single(dim).unwrap();
        let each = SubsystemPartition::new(dim, (0..dim).map(|v| vec![v]).collect()).unwrap();
        for idx in indices(dim, 3) {
            let f = HoloPoly::monomial(dim, 3, MultiIndex::new(idx.clone()), C64::new(0.7, -0.2)).unwrap();
            assert_eq!(classify_state(&f, &single).unwrap(), Classification::Classical, "{idx:?}");
            assert_eq!(classify_state(&f, &each).unwrap(), Classification::Classical, "{idx:?}");
        }
    }
}
