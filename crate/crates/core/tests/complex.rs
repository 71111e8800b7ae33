use torsionlab::complex::BasedChainComplex;
use torsionlab::ring::matrix::PivotRule;
use torsionlab::ring::{Field, Matrix, RatFunc, Ring};
use torsionlab::sample::{random_short_exact_sequence, rng, RationalFunctions};

fn random_acyclic(q: &RationalFunctions, seed: u64) -> BasedChainComplex<RatFunc> {
    let mut r = rng(seed);
    let len = 1 + (seed % 3) as usize;
    let dims = q.acyclic_dims(&mut r, len, 4);
    q.complex(&mut r, &dims, true)
}

#[test]
fn torsion_does_not_depend_on_pivots() {
    let q = RationalFunctions::default();
    for seed in 0..100 {
        let c = random_acyclic(&q, seed);
        assert!(c.is_acyclic());
        let left = c.torsion_with(PivotRule::Leftmost).unwrap();
        let right = c.torsion_with(PivotRule::Rightmost).unwrap();
        assert_eq!(left, right, "seed {seed}, dims {:?}", c.dims());
    }
}

/// Replacing the basis of `C_i` by its image under `P` multiplies the
/// torsion by `det(P)^{(-1)^i}`.
#[test]
fn base_change_scales_by_determinant() {
    let q = RationalFunctions::default();
    let mut checked = 0;
    for seed in 0..40 {
        let c = random_acyclic(&q, seed);
        let mut r = rng(1000 + seed);
        let tau = c.torsion().unwrap();
        for i in 0..c.dims().len() {
            let n = c.dims()[i];
            if n == 0 {
                continue;
            }
            let (u, u_inv) = q.unimodular(&mut r, n);
            let s = loop {
                let s = q.poly(&mut r, 1);
                if !s.is_zero() {
                    break s;
                }
            };
            let mut scale = Matrix::identity(n, &q.zero());
            let mut scale_inv = scale.clone();
            scale[(0, 0)] = s.clone();
            scale_inv[(0, 0)] = s.inv().unwrap();
            let p = u.mul(&scale);
            let p_inv = scale_inv.mul(&u_inv);
            let boundaries = (1..c.dims().len())
                .map(|k| {
                    let mut d = c.boundary(k).unwrap().clone();
                    if k == i {
                        d = d.mul(&p);
                    }
                    if k == i + 1 {
                        d = p_inv.mul(&d);
                    }
                    d
                })
                .collect();
            let changed = BasedChainComplex::new(c.dims().to_vec(), boundaries, &q.zero()).unwrap();
            let expected = if i % 2 == 0 { tau.mul(&s) } else { tau.div(&s).unwrap() };
            assert_eq!(changed.torsion().unwrap(), expected, "seed {seed}, degree {i}");
            checked += 1;
        }
    }
    assert!(checked > 40);
}

#[test]
fn multiplicativity_on_random_sequences() {
    let q = RationalFunctions::default();
    let mut r = rng(0);
    let mut nontrivial = 0;
    for k in 0..100 {
        let s = random_short_exact_sequence(&q, &mut r, 4);
        let rep = s.check().unwrap();
        assert!(rep.holds, "case {k}: torsion {} but identity gives {}", rep.torsion, rep.rhs);
        if !rep.torsion_homology.is_one() {
            nontrivial += 1;
        }
    }
    assert!(nontrivial > 20, "only {nontrivial} sequences had a nontrivial connecting torsion");
}
