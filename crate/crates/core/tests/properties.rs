use akhodge_core::exact::rat;
use akhodge_core::{builtin, random_compatible, AKManifold, ExactMatrix, FormValue, Gq};
use num_traits::Zero;
use proptest::prelude::*;
use std::sync::OnceLock;

fn gq() -> impl Strategy<Value = Gq> {
    (-4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(a, b, c)| Gq::new(rat(a, b), rat(c, 1)))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(prop::collection::vec(gq(), cols), rows).prop_map(ExactMatrix::from_rows)
}

fn kt() -> &'static AKManifold {
    static KT: OnceLock<AKManifold> = OnceLock::new();
    KT.get_or_init(|| builtin("kodaira_thurston").unwrap())
}

/// A form of degree `k` on the 4-dimensional manifold.
fn form(k: usize) -> impl Strategy<Value = FormValue> {
    let size = kt().basis().dim(k);
    prop::collection::vec(gq(), size).prop_map(move |v| kt().form(k, &v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity(a in matrix(3, 5)) {
        let kernel = a.nullspace();
        prop_assert_eq!(a.rank() + kernel.len(), 5);
        for v in &kernel {
            prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn wedge_is_graded_commutative(a in form(1), b in form(2)) {
        prop_assert_eq!(a.wedge(&b), b.wedge(&a));
        prop_assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn d_is_an_antiderivation(a in form(1), b in form(2)) {
        let m = kt();
        let d = m.d();
        let lhs = m.apply(d, &a.wedge(&b));
        let rhs = m.apply(d, &a).wedge(&b).sub(&a.wedge(&m.apply(d, &b)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_is_an_isometry(a in form(2), b in form(2)) {
        let m = kt();
        let star = &m.ops().star;
        prop_assert_eq!(m.inner(&m.apply(star, &a), &m.apply(star, &b)), m.inner(&a, &b));
    }

    #[test]
    fn laplacian_is_nonnegative(a in form(2)) {
        let m = kt();
        let v = m.vector(&a, 2);
        let lv = m.laplacians().d.apply_vec(2, &v).unwrap();
        prop_assert!(m.pair(2, &lv, &v).re >= Gq::zero().re);
    }

    #[test]
    fn perturbations_stay_almost_kaehler(seed in 0u64..1000) {
        let m = random_compatible(kt(), seed).unwrap();
        prop_assert_eq!(m.j().mul(m.j()), ExactMatrix::identity(4).neg());
        let o = m.ops();
        prop_assert!(o.d.compose(&o.d).is_zero());
        prop_assert!(o.d_lambda.compose(&o.d_lambda).is_zero());
    }
}
