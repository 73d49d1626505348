use exact_kernel::{int, Matrix, Scalar};
use lie_core::{
    build_simple_lie, diagram_automorphism, jordan_chevalley, unipotent_log, LieElt, LieError,
};
use proptest::prelude::*;

#[test]
fn jacobi_and_invariance_exhaustive() {
    for rank in 1..=3 {
        let g = build_simple_lie("A", rank).unwrap();
        let d = g.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (x, y, z) = (g.basis(i), g.basis(j), g.basis(k));
                    let jac = g
                        .bracket(&x, &g.bracket(&y, &z))
                        .add(&g.bracket(&y, &g.bracket(&z, &x)))
                        .add(&g.bracket(&z, &g.bracket(&x, &y)));
                    assert!(jac.is_zero());
                    let inv = g.form(&g.bracket(&x, &y), &z) + g.form(&y, &g.bracket(&x, &z));
                    assert_eq!(inv, int(0));
                }
            }
        }
    }
}

#[test]
fn dual_coxeter_matches_casimir() {
    // The Casimir of the normalized form acts on the adjoint by 2h∨.
    for rank in 1..=3 {
        let g = build_simple_lie("A", rank).unwrap();
        let d = g.dim();
        let ginv = g.inverse_form();
        let mut cas = Matrix::<Scalar>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let c = ginv.get(i, j);
                if *c != int(0) {
                    cas = cas.add(&g.ad(&g.basis(i)).mul(&g.ad(&g.basis(j))).scale(c));
                }
            }
        }
        let expected = Matrix::identity(d).scale(&(int(2) * g.dual_coxeter()));
        assert_eq!(cas, expected);
    }
}

#[test]
fn diagram_maps_preserve_structure() {
    for (rank, perm) in [(1, vec![0]), (2, vec![1, 0]), (3, vec![2, 1, 0])] {
        let g = build_simple_lie("A", rank).unwrap();
        let mu = diagram_automorphism(&g, &perm).unwrap();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let (x, y) = (g.basis(i), g.basis(j));
                assert_eq!(mu.apply(&g.bracket(&x, &y)), g.bracket(&mu.apply(&x), &mu.apply(&y)));
                assert_eq!(g.form(&mu.apply(&x), &mu.apply(&y)), g.form(&x, &y));
            }
        }
        let order = if rank == 1 { 1 } else { 2 };
        assert_eq!(mu.order(6), Some(order));
    }
}

fn small_elt(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jc_properties(rank in 1usize..=2, seed in small_elt(8)) {
        let g = build_simple_lie("A", rank).unwrap();
        let a = LieElt(seed[..g.dim()].iter().map(|&c| int(c)).collect());
        match jordan_chevalley(&g, &a) {
            Ok((s, n)) => {
                prop_assert_eq!(s.add(&n), a.clone());
                prop_assert!(g.bracket(&s, &n).is_zero());
                prop_assert_eq!(g.form(&s, &n), int(0));
                let (ads, adn) = (g.ad(&s), g.ad(&n));
                prop_assert_eq!(ads.add(&adn), g.ad(&a));
                prop_assert!(ads.commutator(&adn).is_zero());
                prop_assert!(adn.nilpotency_index().is_some());
                // Squarefree minimal polynomial: ad_s is diagonalizable.
                let (_, nil) = ads.jordan_chevalley().unwrap();
                prop_assert!(nil.is_zero());
            }
            Err(e) => prop_assert_eq!(e, LieError::NeedsFieldExtension),
        }
    }

    #[test]
    fn unipotent_log_inverts_exp(size in 1usize..=10, entries in prop::collection::vec(-3i64..=3, 100), den in 1i64..=4) {
        let mut n = Matrix::<Scalar>::zeros(size, size);
        for i in 0..size {
            for j in i + 1..size {
                n.set(i, j, exact_kernel::rat(entries[i * 10 + j], den));
            }
        }
        let u = n.exp_nilpotent().unwrap();
        prop_assert_eq!(unipotent_log(&u).unwrap(), n);
    }
}
