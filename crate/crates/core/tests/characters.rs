use mixer_core::characters::{verify_orthogonality, witten_zeta};
use mixer_core::groups::GroupSpec;
use mixer_core::GroupData;
use num_complex::Complex64;

fn sorted_degrees(d: &GroupData) -> Vec<u64> {
    let mut v = d.table.degrees.clone();
    v.sort_unstable();
    v
}

#[test]
fn a5_degrees() {
    let d = GroupData::build(&GroupSpec::alt(5).unwrap()).unwrap();
    assert_eq!(sorted_degrees(&d), vec![1, 3, 3, 4, 5]);
    assert!(d.table.residuals.pass, "{:?}", d.table.residuals);
}

#[test]
fn psl2_7_degrees() {
    let d = GroupData::build(&GroupSpec::psl2(7).unwrap()).unwrap();
    assert_eq!(sorted_degrees(&d), vec![1, 3, 3, 6, 7, 8]);
    assert_eq!(d.table.degree_square_sum(), 168);
}

#[test]
fn small_group_tables() {
    for (spec, degrees) in [
        (GroupSpec::sym(3).unwrap(), vec![1, 1, 2]),
        (GroupSpec::sym(4).unwrap(), vec![1, 1, 2, 3, 3]),
        (GroupSpec::sl2(5).unwrap(), vec![1, 2, 2, 3, 3, 4, 4, 5, 6]),
        (GroupSpec::psl2(8).unwrap(), vec![1, 7, 7, 7, 7, 8, 9, 9, 9]),
    ] {
        let d = GroupData::build(&spec).unwrap();
        assert_eq!(sorted_degrees(&d), degrees, "{spec}");
    }
}

#[test]
fn table_invariants() {
    for spec in [
        GroupSpec::sym(3).unwrap(),
        GroupSpec::alt(6).unwrap(),
        GroupSpec::psl2(9).unwrap(),
        GroupSpec::psl2(11).unwrap(),
        GroupSpec::sl2(7).unwrap(),
    ] {
        let d = GroupData::build(&spec).unwrap();
        let t = &d.table;
        let n = d.order() as u64;
        assert_eq!(t.degree_square_sum(), n);
        assert!(t.degrees.iter().all(|&x| n.is_multiple_of(x)));
        assert!(t.values[0]
            .iter()
            .all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12));
        for (i, row) in t.values.iter().enumerate() {
            assert_eq!(row[0].re, t.degrees[i] as f64);
            assert!(row[0].im.abs() < 1e-10);
        }
        let col0: f64 = t.values.iter().map(|r| r[0].norm_sqr()).sum();
        assert!((col0 - n as f64).abs() < 1e-8 * n as f64);
        let rep = verify_orthogonality(t, &d.classes);
        assert!(rep.pass, "{spec}: {rep:?}");
    }
}

#[test]
fn perturbed_table_fails_orthogonality() {
    let d = GroupData::build(&GroupSpec::alt(5).unwrap()).unwrap();
    let bad = d
        .table
        .with_value(2, 3, d.table.value(2, 3) + Complex64::new(1e-3, 0.0));
    assert!(!bad.residuals.pass);
}

#[test]
fn zeta_special_values() {
    let d = GroupData::build(&GroupSpec::alt(5).unwrap()).unwrap();
    assert_eq!(witten_zeta(&d.table, 0.0), 5.0);
    assert!((witten_zeta(&d.table, -2.0) - 60.0).abs() < 1e-12);
    assert!((witten_zeta(&d.table, 2.0) - 4769.0 / 3600.0).abs() < 1e-12);
    let mut prev = f64::INFINITY;
    for s in [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0] {
        let z = witten_zeta(&d.table, s);
        assert!(z < prev);
        prev = z;
    }
}

#[test]
fn dixon_is_deterministic() {
    let spec = GroupSpec::psl2(13).unwrap();
    let a = GroupData::build(&spec).unwrap();
    let b = GroupData::build(&spec).unwrap();
    assert_eq!(
        serde_json::to_string(&a.table.to_json()).unwrap(),
        serde_json::to_string(&b.table.to_json()).unwrap()
    );
}
