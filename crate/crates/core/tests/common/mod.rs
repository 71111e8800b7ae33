#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use torsionlab::job::{parse_job, Job};
use torsionlab::rep::TwistedMap;
use torsionlab::ring::{FieldScalar, FieldTower, LaurentPoly, Ring};
use torsionlab::torsion::{wada_torsion, WadaOptions};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> Job {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    parse_job(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn adjoint_map(job: &Job) -> TwistedMap {
    TwistedMap::adjoint(&job.presentation, job.rho.as_ref().unwrap(), job.phi.as_ref().unwrap(), &job.vars).unwrap()
}

pub fn wada_poly(job: &Job, remove: Option<usize>) -> LaurentPoly {
    let map = adjoint_map(job);
    wada_torsion(&map, &WadaOptions { remove, tau0: None }).unwrap().value.as_poly().expect("torsion is a polynomial")
}

pub fn vars(names: &[&str]) -> Arc<Vec<String>> {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

pub fn rationals() -> Arc<FieldTower> {
    Arc::new(FieldTower::rationals())
}

pub fn int_poly(tower: &Arc<FieldTower>, vars: &Arc<Vec<String>>, coeffs: &[i64]) -> LaurentPoly {
    LaurentPoly::from_i64_coeffs(tower, vars, coeffs)
}

/// `(t1 - 1)(t2 - 1)(-2xyv t1 t2 + x^2 t1 (t2 + 1)^2 + y^2 (t1 + 1)^2 t2 - (t1 + 1)^2 (t2 + 1)^2)`.
pub fn whitehead_closed_form(
    tower: &Arc<FieldTower>,
    vars: &Arc<Vec<String>>,
    x: &FieldScalar,
    y: &FieldScalar,
    v: &FieldScalar,
) -> LaurentPoly {
    let one = LaurentPoly::one(tower, vars);
    let t1 = LaurentPoly::var(tower, vars, 0);
    let t2 = LaurentPoly::var(tower, vars, 1);
    let c = |s: FieldScalar| LaurentPoly::constant(vars, s);
    let sq = |p: &LaurentPoly| p.mul(p);
    let p1 = sq(&t1.add(&one));
    let p2 = sq(&t2.add(&one));
    let two = FieldScalar::from_i64(tower, 2);
    let inner = c(two.mul(x).mul(y).mul(v).neg())
        .mul(&t1)
        .mul(&t2)
        .add(&c(x.mul(x)).mul(&t1).mul(&p2))
        .add(&c(y.mul(y)).mul(&p1).mul(&t2))
        .sub(&p1.mul(&p2));
    t1.sub(&one).mul(&t2.sub(&one)).mul(&inner)
}
