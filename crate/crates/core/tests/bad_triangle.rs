//! The flag of the two-by-two triangular algebra, checked end to end with
//! exact integer answers: its two points, the one-way extension between
//! them, the two-dimensional extension produced by localizing away from
//! the top point, the emptiness of the closed-open overlap, the
//! directional containment verdicts, and the obstructed relative
//! intersection.

use modspace::algebra::basis_vec;
use modspace::closed::SerreClass;
use modspace::fixtures;
use modspace::localize::{
    closed_of_class, contains_closed_in_complement, open_complement, restrict, unit_map, z_cap_u,
    ZCapU,
};
use modspace::module::{enumerate_modules, hom_dim, isomorphism, Module, Rep};
use modspace::resolve::ext_dim;
use modspace::scalar::Field;

const BUDGET: usize = 1 << 19;

fn f2() -> Field {
    Field::Fp(2)
}

fn setup() -> (Rep, usize, usize) {
    let rep = Rep::new(fixtures::t2());
    let simples = rep.simples().unwrap();
    let e11 = basis_vec(f2(), 3, 0);
    let p = simples
        .iter()
        .position(|s| rep.annihilator(&s.module).space().contains_vec(&e11))
        .unwrap();
    (rep, p, 1 - p)
}

#[test]
fn the_flag_has_two_points_and_a_one_way_arrow() {
    let (rep, p, q) = setup();
    // (a) exactly two simples.
    assert_eq!(rep.simples().unwrap().len(), 2);
    let op = rep.simples().unwrap()[p].module.clone();
    let oq = rep.simples().unwrap()[q].module.clone();
    // (b) extensions go one way only.
    assert_eq!(ext_dim(&rep, &oq, &op, 1).unwrap(), 1);
    assert_eq!(ext_dim(&rep, &op, &oq, 1).unwrap(), 0);
}

#[test]
fn localizing_away_from_the_top_point_rebuilds_the_extension() {
    let (rep, p, q) = setup();
    let op = rep.simples().unwrap()[p].module.clone();
    let oq = rep.simples().unwrap()[q].module.clone();
    // (c) W = {q}: extend(restrict(O_p)) is the non-split self-extension.
    let u = open_complement(&rep, &SerreClass::of([q])).unwrap();
    let (down, _) = restrict(&u, &op);
    let m = modspace::localize::extend(&u, &down).unwrap().module;
    assert_eq!(m.dim(), 2);
    // Socle is the bottom point, top is the removed point.
    assert_eq!(rep.socle_block(&m, p).dim(), 1);
    assert_eq!(rep.socle_block(&m, q).dim(), 0);
    let soc = rep.socle_block(&m, p);
    let (sub, _) = m.submodule(&soc).unwrap();
    assert!(isomorphism(&sub, &op, BUDGET).found());
    let (quot, _) = m.quotient(&soc).unwrap();
    assert!(isomorphism(&quot, &oq, BUDGET).found());
    // Non-split: not the direct sum, and the endomorphisms are scalars.
    let (sum, _, _) = Module::direct_sum(&[&op, &oq]);
    assert!(!isomorphism(&m, &sum, BUDGET).found());
    assert_eq!(hom_dim(&m, &m), 1);
}

#[test]
fn the_closed_open_overlap_is_empty_in_small_dimensions() {
    let (rep, p, q) = setup();
    // (d) Mod{p} meets Mod(X\{q}) in nothing nonzero of dimension <= 3.
    let z = closed_of_class(&rep, &SerreClass::of([p])).unwrap();
    let u = open_complement(&rep, &SerreClass::of([q])).unwrap();
    let mut checked = 0usize;
    for d in 1..=3 {
        for m in enumerate_modules(&rep, d, BUDGET).unwrap() {
            if !z.member(&m) {
                continue;
            }
            checked += 1;
            assert!(
                !unit_map(&u, &m).unwrap().is_iso(),
                "a {d}-dimensional module lies in both the closed part and the open part"
            );
        }
    }
    assert!(checked > 0, "the sweep never saw a member of the closed part");
}

#[test]
fn containment_verdicts_are_directional() {
    let (rep, p, q) = setup();
    // (e) {p} is not inside X\{q}, but {q} is inside X\{p}.
    let zp = closed_of_class(&rep, &SerreClass::of([p])).unwrap();
    let zq = closed_of_class(&rep, &SerreClass::of([q])).unwrap();
    let u_no_q = open_complement(&rep, &SerreClass::of([q])).unwrap();
    let u_no_p = open_complement(&rep, &SerreClass::of([p])).unwrap();
    let (report, _) = contains_closed_in_complement(&rep, &u_no_q, &zp).unwrap();
    assert!(!report.contained());
    let (report, _) = contains_closed_in_complement(&rep, &u_no_p, &zq).unwrap();
    assert!(report.contained());
}

#[test]
fn the_relative_intersection_is_obstructed() {
    let (rep, p, q) = setup();
    let op = rep.simples().unwrap()[p].module.clone();
    // (f) cutting the two-point locus with X\{q} is undefined, witnessed by
    // the extension from the removed point into the bottom point.
    let z = closed_of_class(&rep, &SerreClass::of([p, q])).unwrap();
    let wq = closed_of_class(&rep, &SerreClass::of([q])).unwrap();
    match z_cap_u(&rep, &z, &wq).unwrap() {
        ZCapU::Undefined(obs) => {
            assert_eq!(obs.torsion_simple, q);
            assert_eq!(obs.ext1, 1);
            assert!(isomorphism(&obs.generator, &op, BUDGET).found());
        }
        ZCapU::Defined(_) => panic!("the obstructed intersection was reported defined"),
    }
}
