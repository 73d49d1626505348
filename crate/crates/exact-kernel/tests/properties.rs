use exact_kernel::{int, rat, CombineMode, Coeff, CycScalar, LogSeries, Matrix, Scalar};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn exponent(d: i64) -> impl Strategy<Value = Scalar> {
    (-12i64..=12).prop_map(move |n| rat(n, d))
}

fn series(d: i64, max_log: u32) -> impl Strategy<Value = LogSeries<Scalar>> {
    prop::collection::vec((exponent(d), 0..=max_log, small_rat()), 0..8).prop_map(move |ts| {
        let mut s = LogSeries::zero(d as u64);
        for (e, k, c) in ts {
            s.add_term(e, k, c).unwrap();
        }
        s
    })
}

fn integral_domain() -> impl Strategy<Value = LogSeries<Scalar>> {
    prop::collection::vec(((-8i64..=8).prop_filter("not -1", |n| *n != -1), small_rat()), 0..8)
        .prop_map(|ts| {
            let mut s = LogSeries::zero(1);
            for (e, c) in ts {
                s.add_term(int(e), 0, c).unwrap();
            }
            s
        })
}

fn cyc() -> impl Strategy<Value = CycScalar> {
    prop::collection::vec((0i64..6, 0usize..3, small_rat()), 0..5).prop_map(|ts| {
        ts.into_iter().fold(CycScalar::zero_elt(), |acc, (k, j, c)| {
            acc.plus(
                &CycScalar::zeta(6, k)
                    .times(&CycScalar::t_pow(j))
                    .times(&CycScalar::from_scalar(&c)),
            )
        })
    })
}

proptest! {
    #[test]
    fn branch_shift_round_trip(s in series(3, 2)) {
        let lifted = s.map(CycScalar::from_scalar);
        let back = lifted.branch_shift(1).branch_shift(-1);
        prop_assert!(back.same_terms(&lifted));
        let twice = lifted.branch_shift(1).branch_shift(1);
        prop_assert!(twice.same_terms(&lifted.branch_shift(2)));
    }

    #[test]
    fn derivative_inverts_integral(s in integral_domain()) {
        let i = s.formal_integral_0_to_x().unwrap();
        prop_assert!(i.derivative().same_terms(&s));
    }

    #[test]
    fn truncation_is_sound(a in series(2, 2), b in series(2, 2), f1 in exponent(2), f2 in exponent(2)) {
        let mut ta = a.clone();
        ta.truncate(&f1);
        let mut tb = b.clone();
        tb.truncate(&f2);
        let f = f1.clone().max(f2.clone());

        let mut exact = a.combine(&b, CombineMode::Add).unwrap();
        exact.truncate(&f);
        prop_assert!(ta.combine(&tb, CombineMode::Add).unwrap().same_terms(&exact));

        let mut d = a.derivative();
        d.truncate(&(&f1 - int(1)));
        prop_assert!(ta.derivative().same_terms(&d));

        let e = rat(3, 2);
        let mut sh = a.shift(&e, 1).unwrap();
        sh.truncate(&(&f1 + &e));
        prop_assert!(ta.shift(&e, 1).unwrap().same_terms(&sh));
    }

    #[test]
    fn cyclotomic_ring_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(a.times(&b), b.times(&a));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert!(a.minus(&a).is_zero_elt());
    }

    #[test]
    fn unipotent_log_inverts_exp(n in 1usize..=10, entries in prop::collection::vec(small_rat(), 100)) {
        let mut m = Matrix::<Scalar>::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                m.set(i, j, entries[i * 10 + j].clone());
            }
        }
        let u = m.exp_nilpotent().unwrap();
        prop_assert_eq!(u.log_unipotent().unwrap(), m);
    }
}
