mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::{adjoint_map, fixture};
use torsionlab::group::Word;
use torsionlab::rep::{adjoint, det2, validate_representation};
use torsionlab::ring::{Field, FieldScalar, FieldTower, Matrix, Ring, TowerNum};
use torsionlab::sample::{random_sl2, rng};

fn gaussian() -> Arc<FieldTower> {
    Arc::new(
        FieldTower::rationals().adjoin_extension("i", &[TowerNum::one(), TowerNum::zero(), TowerNum::one()]).unwrap(),
    )
}

/// A random element of `SL_2(Z[i])`: an integer matrix conjugated by a
/// diagonal matrix with entry `1 + i`.
fn sl2(k: &Arc<FieldTower>, seed: u64) -> Matrix<FieldScalar> {
    let m = random_sl2(k, &mut rng(seed));
    let one = FieldScalar::one(k);
    let zero = FieldScalar::zero(k);
    let u = one.add(&FieldScalar::generator(k, 0));
    let d = Matrix::from_rows(vec![vec![u.clone(), zero.clone()], vec![zero.clone(), one.clone()]], &one);
    let d_inv = Matrix::from_rows(vec![vec![one.div(&u).unwrap(), zero.clone()], vec![zero, one.clone()]], &one);
    d.mul(&m).mul(&d_inv)
}

fn trace_form(k: &Arc<FieldTower>) -> Matrix<FieldScalar> {
    let n = |x: i64| FieldScalar::from_i64(k, x);
    Matrix::from_rows(vec![vec![n(0), n(0), n(1)], vec![n(0), n(2), n(0)], vec![n(1), n(0), n(0)]], &n(1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_is_a_homomorphism(s1 in any::<u64>(), s2 in any::<u64>()) {
        let k = gaussian();
        let (a, b) = (sl2(&k, s1), sl2(&k, s2));
        prop_assert!(det2(&a).is_one());
        prop_assert_eq!(adjoint(&a.mul(&b)).unwrap(), adjoint(&a).unwrap().mul(&adjoint(&b).unwrap()));
    }

    #[test]
    fn adjoint_preserves_the_trace_form(s in any::<u64>()) {
        let k = gaussian();
        let a = sl2(&k, s);
        let ad = adjoint(&a).unwrap();
        let form = trace_form(&k);
        prop_assert_eq!(ad.transpose().mul(&form).mul(&ad), form);
        prop_assert!(ad.det().is_one());
        let tr = a.trace();
        prop_assert_eq!(ad.trace(), tr.mul(&tr).sub(&FieldScalar::one(&k)));
    }

    #[test]
    fn twisted_map_is_multiplicative(u in prop::collection::vec((0usize..2, any::<bool>()), 0..10),
                                     v in prop::collection::vec((0usize..2, any::<bool>()), 0..10)) {
        let job = fixture("fig8.tors");
        let map = adjoint_map(&job);
        let word = |w: &[(usize, bool)]| Word::from_powers(&w.iter().map(|&(g, s)| (g, if s { 1 } else { -1 })).collect::<Vec<_>>());
        let (u, v) = (word(&u), word(&v));
        prop_assert_eq!(map.apply_word(&u.mul(&v)), map.apply_word(&u).mul(&map.apply_word(&v)));
    }
}

#[test]
fn fixture_representations_satisfy_relators() {
    for name in [
        "fig8.tors",
        "fig8_fibered.tors",
        "whitehead_point.tors",
        "whitehead_point2.tors",
        "trefoil.tors",
        "torus.tors",
    ] {
        let job = fixture(name);
        let report = validate_representation(job.rho.as_ref().unwrap(), job.phi.as_ref().unwrap(), &job.presentation);
        assert!(report.is_ok(), "{name}: {:?}", report.failures);
    }
}

#[test]
fn symbolic_fixture_fails_off_the_variety() {
    let job = fixture("whitehead_param.tors");
    let report = validate_representation(job.rho.as_ref().unwrap(), job.phi.as_ref().unwrap(), &job.presentation);
    assert!(!report.is_ok());
}

#[test]
fn relators_act_trivially() {
    for name in ["fig8.tors", "whitehead_point.tors", "trefoil.tors"] {
        let job = fixture(name);
        let map = adjoint_map(&job);
        for r in &job.presentation.relators {
            let m = map.apply_word(r);
            assert_eq!(m, Matrix::identity(3, m.proto()), "{name}");
        }
    }
}
