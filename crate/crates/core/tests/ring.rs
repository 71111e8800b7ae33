mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use common::{int_poly, rationals, vars};
use torsionlab::ring::{
    cyclotomic_polynomial, Domain, Field, FieldScalar, FieldTower, LaurentPoly, Matrix, RatFunc, Ring, TowerNum,
    UniPoly,
};

fn gaussian_sqrt2() -> Arc<FieldTower> {
    let k = FieldTower::rationals()
        .adjoin_extension("i", &[TowerNum::one(), TowerNum::zero(), TowerNum::one()])
        .unwrap()
        .adjoin_extension("r", &[TowerNum::from_i64(-2), TowerNum::zero(), TowerNum::one()])
        .unwrap();
    Arc::new(k)
}

fn scalar(tower: &Arc<FieldTower>, coords: &[i64]) -> FieldScalar {
    let q: Vec<BigRational> = coords.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
    FieldScalar::from_tower_num(tower, TowerNum::from_coords(q))
}

type Terms = Vec<((i32, i32), [i64; 4])>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec(((-2i32..3, -2i32..3), prop::array::uniform4(-3i64..4)), 0..5)
}

fn poly(tower: &Arc<FieldTower>, terms: &Terms) -> LaurentPoly {
    let v = vars(&["t1", "t2"]);
    LaurentPoly::from_terms(tower, &v, terms.iter().map(|((a, b), c)| (vec![*a, *b], scalar(tower, c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in terms(), b in terms(), c in terms()) {
        let k = gaussian_sqrt2();
        let (a, b, c) = (poly(&k, &a), poly(&k, &b), poly(&k, &c));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division_recovers_factor(a in terms(), b in terms()) {
        let k = gaussian_sqrt2();
        let (a, b) = (poly(&k, &a), poly(&k, &b));
        prop_assume!(!b.is_zero());
        let q = Domain::divide_exact(&a.mul(&b), &b).expect("product is divisible");
        prop_assert_eq!(q, a);
    }

    #[test]
    fn units_and_inversion(a in terms(), s in (-3i32..4, -3i32..4), neg in any::<bool>()) {
        let k = gaussian_sqrt2();
        let a = poly(&k, &a);
        prop_assume!(!a.is_zero());
        let mut b = a.shift(&[s.0, s.1]);
        if neg {
            b = b.neg();
        }
        let u = b.unit_equivalent(&a).expect("shifted polynomial is unit-equivalent");
        prop_assert_eq!(u.shift, vec![s.0, s.1]);
        prop_assert_eq!(u.sign, Some(if neg { -1 } else { 1 }));
        prop_assert_eq!(a.invert_variables().invert_variables(), a);
    }

    #[test]
    fn tower_inverse(c in prop::array::uniform4(-5i64..6)) {
        let k = gaussian_sqrt2();
        let x = scalar(&k, &c);
        prop_assume!(!x.is_zero());
        let y = x.inv().unwrap();
        prop_assert!(x.mul(&y).is_one());
    }

    #[test]
    fn rational_function_field(a in terms(), b in terms()) {
        let k = gaussian_sqrt2();
        let (a, b) = (poly(&k, &a), poly(&k, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let f = RatFunc::new(a.clone(), b.clone()).unwrap();
        let g = RatFunc::new(b, a).unwrap();
        prop_assert!(f.mul(&g).is_one());
        prop_assert_eq!(f.div(&f.add(&g)).unwrap().mul(&f.add(&g)), f);
    }

    #[test]
    fn determinant_algorithms_agree(entries in prop::collection::vec(prop::collection::vec(-2i64..3, 3), 16)) {
        let q = rationals();
        let v = vars(&["t"]);
        let zero = LaurentPoly::zero(&q, &v);
        let m = Matrix::from_fn(4, 4, &zero, |i, j| int_poly(&q, &v, &entries[4 * i + j]).shift(&[-1]));
        let d = m.det_berkowitz();
        prop_assert_eq!(m.det_bareiss(), d.clone());
        prop_assert_eq!(m.det_cofactor(), d.clone());
        prop_assert_eq!(m.det(), d.clone());
        let r = m.map(&RatFunc::zero(&q, &v), |p| RatFunc::from_poly(p.clone()));
        prop_assert_eq!(r.det_field(), RatFunc::from_poly(d));
    }

    #[test]
    fn determinant_is_multiplicative(a in prop::collection::vec(-3i64..4, 9), b in prop::collection::vec(-3i64..4, 9)) {
        let k = gaussian_sqrt2();
        let zero = FieldScalar::zero(&k);
        let ma = Matrix::from_fn(3, 3, &zero, |i, j| scalar(&k, &[a[3 * i + j], a[(3 * i + j + 1) % 9], 0, 0]));
        let mb = Matrix::from_fn(3, 3, &zero, |i, j| scalar(&k, &[b[3 * i + j], 0, b[(3 * i + j + 2) % 9], 0]));
        prop_assert_eq!(ma.mul(&mb).det(), ma.det().mul(&mb.det()));
    }
}

#[test]
fn cyclotomic_products() {
    for n in 1..=30u32 {
        let mut prod = UniPoly::from_i64(&[1]);
        for d in (1..=n).filter(|d| n % d == 0) {
            prod = prod.mul(&cyclotomic_polynomial(d).unwrap());
        }
        let mut target = vec![0i64; n as usize + 1];
        target[0] = -1;
        target[n as usize] = 1;
        assert_eq!(prod, UniPoly::from_i64(&target), "n = {n}");
    }
}

#[test]
fn parameters_are_transcendental() {
    let k = Arc::new(FieldTower::rationals().with_params(&["x", "y"]).unwrap());
    let x = FieldScalar::param(&k, 0);
    let y = FieldScalar::param(&k, 1);
    let f = x.add(&y).div(&x.sub(&y)).unwrap();
    let g = x.sub(&y).div(&x.add(&y)).unwrap();
    assert!(f.mul(&g).is_one());
    assert!(!x.mul(&x).sub(&FieldScalar::from_i64(&k, 2)).is_zero());
}
