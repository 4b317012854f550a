use dioph::basis::{build_basis, certified_basis, two_index_basis, verify_basis};
use dioph::matrix::{det_exact, gcd_minors, hnf, snf, IntMatrix};
use dioph::oracle::{modules_equal, oracle_basis, quotient_from_generators, ModuleSpan};
use dioph::quotients::{quotient_s_mod_ui, s_mod_ui_closed, QuotientStructure};
use dioph::ring::{divides, gcd, Int};
use dioph::solution::{
    choose_m, spanning_set, u_entries_coprime, u_vector, v_vector, Coefficients, IndexSet,
    MStrategy,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-max_entry..=max_entry, r * c).prop_map(move |v| {
            IntMatrix::new(r, c, v.into_iter().map(Int::from).collect()).unwrap()
        })
    })
}

fn square(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(-max_entry..=max_entry, n * n).prop_map(move |v| {
            IntMatrix::new(n, n, v.into_iter().map(Int::from).collect()).unwrap()
        })
    })
}

/// Entries are mostly small so that gcds and zeros are common.
fn coefficients(max_n: usize, max_coeff: i64) -> impl Strategy<Value = Coefficients> {
    let entry = prop_oneof![
        3 => -12i64..=12,
        1 => -max_coeff..=max_coeff,
    ];
    prop::collection::vec(entry, 2..=max_n)
        .prop_filter_map("not unimodular", |a| Coefficients::from_i64(&a).ok())
}

/// A unimodular matrix as a product of elementary column operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut w = IntMatrix::identity(n);
        for (i, j, k, neg) in ops {
            if i != j {
                w.add_col_multiple(i, j, &Int::from(k));
            } else if neg {
                w.negate_col(i);
            } else {
                w.swap_cols(i, (i + 1) % n);
            }
        }
        w
    })
}

fn strategy() -> impl Strategy<Value = MStrategy> {
    prop_oneof![Just(MStrategy::All), Just(MStrategy::GreedyMinimal)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_recomposes(a in matrix(5, 100)) {
        let s = snf(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert_eq!(det_exact(&s.u).unwrap().abs(), Int::one());
        prop_assert_eq!(det_exact(&s.v).unwrap().abs(), Int::one());
        for w in s.invariant_factors.windows(2) {
            prop_assert!(divides(&w[0], &w[1]));
        }
        prop_assert!(s.invariant_factors.iter().all(|f| f.is_positive()));
    }

    #[test]
    fn invariant_factors_are_minor_ratios(a in matrix(4, 100)) {
        let s = snf(&a);
        let mut prev = Int::one();
        for i in 1..=a.rows().min(a.cols()) {
            let g = gcd_minors(&a, i).unwrap();
            if i <= s.rank {
                prop_assert_eq!(&g / &prev, s.invariant_factors[i - 1].clone());
                prev = g;
            } else {
                prop_assert!(g.is_zero());
            }
        }
    }

    #[test]
    fn det_is_product_of_invariant_factors(a in square(5, 100)) {
        let s = snf(&a);
        let det = det_exact(&a).unwrap();
        if s.rank == a.rows() {
            prop_assert_eq!(det.abs(), s.invariant_factors.iter().product::<Int>());
        } else {
            prop_assert!(det.is_zero());
        }
    }

    #[test]
    fn hnf_is_canonical((a, w) in matrix(4, 50).prop_flat_map(|a| {
        let c = a.cols();
        (Just(a), unimodular(c))
    })) {
        let h = hnf(&a);
        prop_assert_eq!(&a * &h.u, h.h.clone());
        prop_assert_eq!(hnf(&(&a * &w)).basis(), h.basis());
    }

    #[test]
    fn lemma_expansion(c in coefficients(6, 1_000_000), ys in prop::collection::vec(-20i64..=20, 5)) {
        // a_i·s = Σ_{j≠i} s_j·v(i,j) for every s ∈ S
        let n = c.n();
        let mut s = vec![Int::zero(); n];
        for (y, b) in ys.iter().zip(oracle_basis(&c)) {
            for (x, z) in s.iter_mut().zip(b.as_slice()) {
                *x += z * *y;
            }
        }
        prop_assert!(c.is_solution(&s));
        for i in 1..=n {
            let mut sum = vec![Int::zero(); n];
            for j in (1..=n).filter(|&j| j != i) {
                let v = v_vector(&c, i, j).unwrap();
                for (acc, x) in sum.iter_mut().zip(v.as_slice()) {
                    *acc += x * &s[j - 1];
                }
            }
            let scaled: Vec<Int> = s.iter().map(|x| x * c.get(i)).collect();
            prop_assert_eq!(sum, scaled);
        }
    }

    #[test]
    fn spanning_set_spans_s(c in coefficients(6, 1_000_000), st in strategy()) {
        let m = choose_m(&c, st);
        let b = ModuleSpan::new(c.n(), &spanning_set(&c, &m)).unwrap();
        let o = ModuleSpan::new(c.n(), &oracle_basis(&c)).unwrap();
        prop_assert!(modules_equal(&b, &o).unwrap());
    }

    #[test]
    fn u_vectors_are_primitive(c in coefficients(6, 1_000_000)) {
        for i in 1..=c.n() {
            for j in (1..=c.n()).filter(|&j| j != i) {
                prop_assert!(u_entries_coprime(&u_vector(&c, i, j).unwrap()));
            }
        }
    }

    #[test]
    fn basis_is_certified_and_spans_s(c in coefficients(6, 1_000_000), st in strategy()) {
        let b = build_basis(&c, &choose_m(&c, st)).unwrap();
        let cert = verify_basis(&c, &b.basis, b.pivot).unwrap();
        prop_assert_eq!(cert.det.abs(), c.get(b.pivot).abs());
        let ours = ModuleSpan::new(c.n(), &b.basis).unwrap();
        let o = ModuleSpan::new(c.n(), &oracle_basis(&c)).unwrap();
        prop_assert!(modules_equal(&ours, &o).unwrap());
    }

    #[test]
    fn two_index_build_matches_closed_form(c in coefficients(6, 1_000_000)) {
        let n = c.n();
        let pair = (1..=n)
            .flat_map(|p| (p + 1..=n).map(move |q| (p, q)))
            .find(|&(p, q)| !c.get(p).is_zero() && gcd(c.get(p), c.get(q)).is_one());
        if let Some((p, q)) = pair {
            let b = build_basis(&c, &IndexSet::new(&c, vec![p, q]).unwrap()).unwrap();
            prop_assert_eq!(b.basis, two_index_basis(&c, p, q).unwrap());
        }
    }

    #[test]
    fn oracle_basis_is_certified(c in coefficients(6, 1_000_000)) {
        let p = (1..=c.n()).find(|&i| !c.get(i).is_zero()).unwrap();
        let b = oracle_basis(&c);
        prop_assert!(verify_basis(&c, &b, p).is_ok());
    }

    #[test]
    fn quotient_ignores_choice_of_generators(c in coefficients(5, 1000), w in unimodular(4)) {
        // big = S through two different bases, small = U_1
        let n = c.n();
        let b1 = certified_basis(&c, &IndexSet::all(&c)).unwrap().vectors;
        let b2 = oracle_basis(&c);
        let u: Vec<_> = (2..=n).map(|j| u_vector(&c, 1, j).unwrap()).collect();
        let mut u_mixed: Vec<Vec<Int>> = u.iter().map(|x| x.as_slice().to_vec()).collect();
        // append recombinations of the u's so the small generating set changes too
        for col in w.columns().iter().take(2) {
            let mut v = vec![Int::zero(); n];
            for (k, x) in col.iter().zip(&u) {
                for (acc, y) in v.iter_mut().zip(x.as_slice()) {
                    *acc += k * y;
                }
            }
            u_mixed.push(v);
        }
        let q1 = quotient_from_generators(n, &b1, &u).unwrap();
        let q2 = quotient_from_generators(n, &b2, &u_mixed).unwrap();
        prop_assert_eq!(&q1, &q2);
        let direct = quotient_s_mod_ui(&c, 1).unwrap();
        prop_assert_eq!(q1, direct);
    }

    #[test]
    fn s_mod_u_is_order_independent(c in coefficients(6, 1_000_000), seed in any::<u64>()) {
        let n = c.n();
        let mut rest: Vec<usize> = (2..=n).collect();
        let len = rest.len();
        rest.rotate_left((seed as usize) % len);
        let mut order = vec![1];
        order.extend(rest);
        let d = c.permuted(&order).unwrap();
        let q: QuotientStructure = s_mod_ui_closed(&c, 1).unwrap();
        prop_assert_eq!(q, s_mod_ui_closed(&d, 1).unwrap());
    }
}
