use spancalc_core::hecke::*;
use spancalc_core::rational::int;
use spancalc_core::{Alpha, GroupAction};

#[test]
fn flag_counts() {
    for q in [2u64, 3, 5] {
        let g = enumerate_flags(q).unwrap();
        assert_eq!(g.points.len() as u64, q * q + q + 1);
        assert_eq!(g.num_flags() as u64, (q * q + q + 1) * (q + 1));
        for l in 0..g.lines.len() {
            assert_eq!(g.points_on(l).len() as u64, q + 1);
        }
    }
    assert!(enumerate_flags(4).is_err());
}

#[test]
fn relation_matrices() {
    for q in [2u64, 3, 5] {
        let g = enumerate_flags(q).unwrap();
        let (p, l) = (build_p(&g), build_l(&g));
        assert!(p.is_symmetric() && l.is_symmetric());
        assert!(p.row_sums().iter().all(|&s| s == q as i64));
        assert!(l.row_sums().iter().all(|&s| s == q as i64));
        let report = verify_hecke_relations(q).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }
}

#[test]
fn group_orders_and_invariance() {
    let g2 = build_group(2).unwrap();
    assert_eq!(g2.order(), 168);
    assert!(g2.preserves_relations());
    let g3 = build_group(3).unwrap();
    assert_eq!(g3.order(), 5616);
    assert!(build_group(5).is_err());

    let group = g2.to_finite_group().unwrap();
    for a in (0..168).step_by(7) {
        for b in (0..168).step_by(5) {
            for f in 0..g2.num_points() {
                assert_eq!(g2.act(a, g2.act(b, f)), g2.act(group.mul(a, b), f));
            }
        }
    }
}

#[test]
fn six_bruhat_orbits() {
    for q in [2u64, 3] {
        let group = build_group(q).unwrap();
        let b = bruhat_orbits(&group);
        assert_eq!(b.orbits.num_orbits(), 6);
        assert!(b.consistent);
        let mut cells = b.cells.clone();
        cells.sort();
        assert_eq!(cells, BruhatCell::ALL.to_vec());
        // |Stab| is |B| divided by the length-dependent cell size q^ℓ(w)
        let borel = group.order() as u64 / group.num_points() as u64;
        let len = [0u32, 1, 1, 2, 2, 3];
        for c in BruhatCell::ALL {
            assert_eq!(b.stabilizer(c) * q.pow(len[c.index()]), borel, "{c}");
        }
    }
}

#[test]
fn yang_baxter() {
    for q in [2u64, 3] {
        let yb = yang_baxter_bijection(&enumerate_flags(q).unwrap());
        assert!(yb.bijective);
        assert_eq!(yb.plp_chains, yb.lpl_chains);
        assert_eq!(yb.plp_chains as u64, (q * q + q + 1) * (q + 1) * q.pow(3));
    }
}

fn alphas() -> Vec<Alpha> {
    [-1, 0, 1, 2].into_iter().map(Alpha::integer).collect()
}

#[test]
fn structure_constants_match_counting() {
    for q in [2u64, 3] {
        for a in alphas() {
            let fast = hecke_structure_constants(q, &a).unwrap();
            assert_eq!(fast.matrix, hecke_structure_by_counting(q, &a).unwrap(), "q = {q}, alpha = {a}");
        }
    }
}

#[test]
fn structure_constants_match_materialized() {
    let all: Vec<_> = BruhatCell::ALL.iter().flat_map(|&a| BruhatCell::ALL.map(|b| (a, b))).collect();
    for a in alphas() {
        let fast = hecke_structure_constants(2, &a).unwrap();
        let slow = hecke_structure_materialized(2, &a, &all).unwrap();
        assert_eq!(fast.matrix, slow, "alpha = {a}");
    }
    assert!(hecke_structure_materialized(3, &Alpha::integer(1), &all[..1]).is_err());
}

#[test]
fn relations_in_orbit_basis() {
    for q in [2u64, 3] {
        for a in alphas() {
            let s = hecke_structure_constants(q, &a).unwrap();
            for check in s.relation_checks() {
                assert!(check.passed, "q = {q}, alpha = {a}: {}", check.name);
            }
            let c = s.constants();
            let (p, l, pl) = (BruhatCell::P.index(), BruhatCell::L.index(), BruhatCell::PL.index());
            let mut expected = vec![int(0); 6];
            expected[pl] = int(1);
            assert_eq!(c[p][l], expected);
            assert!(c.iter().flatten().flatten().all(|x| x.is_integer() && *x >= int(0)));
        }
    }
}

#[test]
fn alpha_one_is_indicator_basis() {
    let s = hecke_structure_constants(2, &Alpha::integer(1)).unwrap();
    for c in BruhatCell::ALL {
        let mut ind = vec![int(0); 6];
        ind[c.index()] = int(1);
        assert_eq!(s.basis(c), ind);
    }
    assert!(hecke_structure_constants(2, &Alpha::half()).is_err());
    let json = serde_json::to_value(s.to_json()).unwrap();
    assert_eq!(json["labels"][5], "PLP");
    assert_eq!(json["stabilizer_orders"], serde_json::json!([8, 4, 4, 2, 2, 1]));
}
