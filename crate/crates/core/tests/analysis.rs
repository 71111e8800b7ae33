mod common;

use common::{fixture, int_poly, vars, wada_poly};
use torsionlab::analysis::{
    covering_formula, derivative_formula, reciprocity, sign_helpers, CharacterSet, ManifoldClass, SignContext,
};
use torsionlab::ring::{FieldScalar, LaurentPoly, Matrix, Ring, Substitution};

#[test]
fn figure_eight_derivative_by_hand() {
    let job = fixture("fig8.tors");
    let p = wada_poly(&job, None);
    let d = derivative_formula(&p, &[1], None).unwrap();
    // t^3 - 6t^2 + 6t - 1 = (t - 1)(t^2 - 5t + 1), and 1 - 5 + 1 = -3
    let three = FieldScalar::from_i64(&job.tower, 3);
    assert!(d.value == three || d.value == three.neg(), "{}", d.value);
}

#[test]
fn whitehead_derivatives() {
    let job = fixture("whitehead_point.tors");
    let p = wada_poly(&job, None);
    let d = derivative_formula(&p, &[1, 1], Some(&[1, 1])).unwrap();
    let i = FieldScalar::generator(&job.tower, 0);
    let eight = FieldScalar::from_i64(&job.tower, 8);
    let expected = eight.mul(&FieldScalar::one(&job.tower).sub(&i));
    assert!(d.value == expected || d.value == expected.neg(), "{}", d.value);

    let job = fixture("whitehead_point2.tors");
    let p = wada_poly(&job, None);
    let d = derivative_formula(&p, &[1, 1], None).unwrap();
    let sixteen = FieldScalar::from_i64(&job.tower, 16);
    assert!(d.value == sixteen || d.value == sixteen.neg(), "{}", d.value);
}

#[test]
fn derivative_rejects_non_divisible_input() {
    let q = common::rationals();
    let v = vars(&["t"]);
    let p = int_poly(&q, &v, &[1, -3, 1]);
    assert!(derivative_formula(&p, &[1], None).is_err());
    assert!(derivative_formula(&p, &[0], None).is_err());
}

#[test]
fn reciprocity_signs() {
    let job = fixture("fig8.tors");
    let r = reciprocity(&wada_poly(&job, None), &SignContext::new(1, ManifoldClass::KnotExterior)).unwrap();
    assert_eq!(r.observed_sign, -1);
    assert_eq!(r.sign_matches(), Some(true));

    for name in ["whitehead_point.tors", "whitehead_point2.tors"] {
        let job = fixture(name);
        let r = reciprocity(&wada_poly(&job, None), &SignContext::new(2, ManifoldClass::LinkExterior)).unwrap();
        assert_eq!(r.expected_sign, Some(-1));
        // The observed sign is +1 here; it is reported, not asserted.
        assert!(r.observed_sign == 1 || r.observed_sign == -1);
    }
    assert!(sign_helpers(&SignContext::new(0, ManifoldClass::Generic)).is_err());
    assert_eq!(sign_helpers(&SignContext::new(3, ManifoldClass::LinkExterior)).unwrap(), (-1, 1));
}

/// `Delta(t) Delta(-t)` by direct multiplication, rewritten in `s = t^2`.
#[test]
fn double_cover_by_direct_multiplication() {
    let job = fixture("fig8.tors");
    let p = wada_poly(&job, None).normalized();
    let k = &job.tower;
    let minus = Substitution::new(job.vars.clone(), vec![(FieldScalar::from_i64(k, -1), vec![1])]).unwrap();
    let direct = p.mul(&p.substitute(&minus).unwrap());
    let s = vars(&["s"]);
    let halved = LaurentPoly::from_terms(
        k,
        &s,
        direct.terms().map(|(m, c)| {
            assert_eq!(m.0[0] % 2, 0);
            (vec![m.0[0] / 2], c.clone())
        }),
    );
    let cov = covering_formula(&p, &CharacterSet::cyclic(2), &s).unwrap();
    assert!(cov.in_lattice.unit_equivalent(&halved).is_some());
    let expected = int_poly(k, &s, &[-1, 24, -24, 1]).neg();
    assert!(cov.in_lattice.unit_equivalent(&expected).is_some(), "{}", cov.in_lattice);
}

/// The triple cover of a fibred knot has monodromy `A^3`.
#[test]
fn triple_cover_matches_cubed_monodromy() {
    let job = fixture("fig8.tors");
    let p = wada_poly(&job, None);
    let s = vars(&["s"]);
    let cov = covering_formula(&p, &CharacterSet::cyclic(3), &s).unwrap();
    assert!(cov.in_lattice.terms().all(|(_, c)| c.as_rational().is_some()), "{}", cov.in_lattice);

    let k = &job.tower;
    let n = |x: i64| FieldScalar::from_i64(k, x);
    let a = Matrix::from_rows(vec![vec![n(0), n(0), n(1)], vec![n(1), n(0), n(-6)], vec![n(0), n(1), n(6)]], &n(1));
    let a3 = a.mul(&a).mul(&a);
    let zero = LaurentPoly::zero(k, &s);
    let sv = LaurentPoly::var(k, &s, 0);
    let m = Matrix::from_fn(3, 3, &zero, |i, j| {
        let c = LaurentPoly::constant(&s, a3[(i, j)].neg());
        if i == j {
            c.add(&sv)
        } else {
            c
        }
    });
    let charpoly = m.det();
    let restricted = cov.in_lattice.embed(k);
    assert!(restricted.unit_equivalent(&charpoly).is_some(), "{} vs {}", cov.in_lattice, charpoly);
}

#[test]
fn two_variable_cover() {
    let job = fixture("whitehead_point.tors");
    let p = wada_poly(&job, None).normalized();
    let chars =
        CharacterSet { lattice: vec![vec![2, 0], vec![0, 1]], order: 2, characters: vec![vec![0, 0], vec![1, 0]] };
    let s = vars(&["s1", "s2"]);
    let cov = covering_formula(&p, &chars, &s).unwrap();
    let k = &job.tower;
    let flip = Substitution::new(
        job.vars.clone(),
        vec![(FieldScalar::from_i64(k, -1), vec![1, 0]), (FieldScalar::one(k), vec![0, 1])],
    )
    .unwrap();
    let direct = p.mul(&p.substitute(&flip).unwrap());
    let halved = LaurentPoly::from_terms(k, &s, direct.terms().map(|(m, c)| (vec![m.0[0] / 2, m.0[1]], c.clone())));
    assert_eq!(cov.in_lattice, halved);
}

#[test]
fn invalid_character_sets_are_rejected() {
    let job = fixture("fig8.tors");
    let p = wada_poly(&job, None);
    let s = vars(&["s"]);
    let bad = [
        CharacterSet { lattice: vec![vec![3]], order: 3, characters: vec![vec![0], vec![1]] },
        CharacterSet { lattice: vec![vec![2]], order: 2, characters: vec![vec![0], vec![2]] },
        CharacterSet { lattice: vec![vec![3]], order: 2, characters: vec![vec![0], vec![1], vec![1]] },
        CharacterSet { lattice: vec![vec![0]], order: 1, characters: vec![] },
    ];
    for chars in bad {
        assert!(covering_formula(&p, &chars, &s).is_err(), "{chars:?}");
    }
}
