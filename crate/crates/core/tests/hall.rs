use spancalc_core::fq::Mat;
use spancalc_core::hall::*;
use spancalc_core::rational::int;

fn a2() -> Quiver {
    Quiver::parse("a2").unwrap()
}

fn class(t: &RepClassTable, label: &str) -> usize {
    t.find(label).unwrap_or_else(|| panic!("no class {label}"))
}

#[test]
fn quiver_parsing_and_ade_check() {
    assert_eq!(Quiver::parse("a1").unwrap().edges, vec![]);
    assert_eq!(Quiver::parse("a3:rl").unwrap().edges, vec![(0, 1), (2, 1)]);
    assert_eq!(Quiver::parse("a3").unwrap().name, "A3:rr");
    assert!(Quiver::parse("a3:r").is_err());
    assert!(Quiver::parse("b2").is_err());
    assert_eq!(Quiver::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap().name, "D4");
    assert_eq!(Quiver::new(6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap().name, "E6");
    assert_eq!(Quiver::new(3, vec![(0, 1)]).unwrap().name, "A2+A1");
    // affine or wild graphs are rejected
    assert!(Quiver::new(2, vec![(0, 1), (1, 0)]).is_err());
    assert!(Quiver::new(3, vec![(0, 1), (1, 2), (2, 0)]).is_err());
    assert!(Quiver::new(5, vec![(0, 1), (0, 2), (0, 3), (0, 4)]).is_err());
    assert!(Quiver::new(1, vec![(0, 0)]).is_err());
}

#[test]
fn rep_classes() {
    let q = a2();
    let c = enumerate_reps(&q, &[1, 1], 2).unwrap();
    assert_eq!(c.iter().map(|c| c.label.as_str()).collect::<Vec<_>>(), ["(1,1)[0]", "(1,1)[1]"]);
    let c = enumerate_reps(&q, &[1, 0], 3).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].aut_order, 2);
    let c = enumerate_reps(&q, &[2, 1], 2).unwrap();
    assert_eq!(c.len(), 2);

    for (quiver, p, dmax) in [(a2(), 2, vec![2, 2]), (a2(), 3, vec![2, 2]), (Quiver::parse("a3:rl").unwrap(), 2, vec![1, 2, 1])] {
        let t = RepClassTable::new(&quiver, p, &dmax).unwrap();
        for d in t.dimension_vectors() {
            let order = t.base_change_order(d).unwrap();
            let reps: u64 = t.classes_of_dims(d).map(|c| t.classes[c].class_size).sum();
            let entries: usize = quiver.edges.iter().map(|&(s, u)| d[s] * d[u]).sum();
            assert_eq!(reps, p.pow(entries as u32));
            for c in t.classes_of_dims(d) {
                assert_eq!(t.classes[c].class_size * t.classes[c].aut_order, order);
                assert_eq!(t.automorphisms(c).len() as u64, t.classes[c].aut_order);
                assert_eq!(t.classify(&t.classes[c].rep), Some(c));
            }
        }
    }
    // A2 in dimension (2,2): one class per rank of the map
    let t = RepClassTable::new(&a2(), 3, &[2, 2]).unwrap();
    assert_eq!(t.classes_of_dims(&[2, 2]).len(), 3);
}

#[test]
fn classify_arbitrary_rep() {
    let q = a2();
    let t = RepClassTable::new(&q, 3, &[1, 1]).unwrap();
    let rep = QuiverRep::new(&q, vec![1, 1], vec![Mat { rows: 1, cols: 1, data: vec![2] }]).unwrap();
    assert_eq!(t.classify(&rep), t.find("(1,1)[1]"));
    assert!(QuiverRep::new(&q, vec![1, 1], vec![Mat::zeros(2, 1)]).is_err());
}

#[test]
fn hall_numbers_a2() {
    for p in [2u64, 3] {
        let t = RepClassTable::new(&a2(), p, &[1, 1]).unwrap();
        let (s1, s2) = (class(&t, "(1,0)[]"), class(&t, "(0,1)[]"));
        let (split, proj) = (class(&t, "(1,1)[0]"), class(&t, "(1,1)[1]"));
        let units = (p - 1) * (p - 1);
        assert_eq!(hall_number(&t, s1, s2, split).unwrap(), units);
        assert_eq!(hall_number(&t, s1, s2, proj).unwrap(), units);
        assert_eq!(hall_number(&t, s2, s1, split).unwrap(), units);
        assert_eq!(hall_number(&t, s2, s1, proj).unwrap(), 0);
        assert_eq!(hall_number(&t, s1, s1, split).unwrap(), 0);

        // [S1]·[S2] = [S1 ⊕ S2] + [P]; [S2]·[S1] = [S1 ⊕ S2]
        let ab = hall_product(&t, s1, s2).unwrap();
        assert_eq!(ab.coefficient(split), int(1));
        assert_eq!(ab.coefficient(proj), int(1));
        let ba = hall_product(&t, s2, s1).unwrap();
        assert_eq!(ba.terms.len(), 1);
        assert_eq!(ba.coefficient(split), int(1));
        assert_ne!(ab, ba);
    }
}

#[test]
fn a1_products() {
    for p in [2u64, 3] {
        let t = RepClassTable::new(&Quiver::parse("a1").unwrap(), p, &[3]).unwrap();
        let s = class(&t, "(1)");
        // [1]·[1] = (q + 1)[2], [1]·[2] = (q² + q + 1)[3]
        assert_eq!(hall_product(&t, s, s).unwrap().coefficient(class(&t, "(2)")), int(p + 1));
        assert_eq!(hall_product(&t, s, class(&t, "(2)")).unwrap().coefficient(class(&t, "(3)")), int(p * p + p + 1));
    }
}

#[test]
fn unit_and_grading() {
    let alg = HallAlgebra::new(&a2(), 2, &[2, 2]).unwrap();
    let t = &alg.table;
    let zero = t.zero();
    for c in 0..t.len() {
        assert_eq!(alg.product(zero, c).unwrap(), &HallElement::basis(c));
        assert_eq!(alg.product(c, zero).unwrap(), &HallElement::basis(c));
    }
    for (&(m, n), p) in &alg.products {
        for &e in p.terms.keys() {
            let sum: Vec<usize> = t.classes[m].dims.iter().zip(&t.classes[n].dims).map(|(a, b)| a + b).collect();
            assert_eq!(t.classes[e].dims, sum);
        }
        // the split extension always occurs
        let split = t.classify(&t.classes[m].rep.direct_sum(&t.classes[n].rep, &t.quiver)).unwrap();
        assert!(p.coefficient(split) > int(0));
    }
    assert!(alg.all_nonnegative());
}

#[test]
fn span_route_matches_formula() {
    for (p, dmax) in [(2u64, [2usize, 2]), (3, [1, 1])] {
        let alg = HallAlgebra::new(&a2(), p, &dmax).unwrap();
        assert!(alg.check_against_span().unwrap().is_empty(), "q = {p}");
    }
    let alg = HallAlgebra::new(&Quiver::parse("a3:rl").unwrap(), 2, &[1, 1, 1]).unwrap();
    assert!(alg.check_against_span().unwrap().is_empty());
}

#[test]
fn associativity() {
    let cases = [
        (a2(), 2u64, vec![2usize, 2]),
        (Quiver::parse("a1").unwrap(), 2, vec![3]),
        (Quiver::parse("a3:rl").unwrap(), 2, vec![1, 1, 1]),
        (Quiver::parse("a3:lr").unwrap(), 2, vec![1, 1, 1]),
    ];
    for (quiver, p, dmax) in cases {
        let alg = HallAlgebra::new(&quiver, p, &dmax).unwrap();
        let report = alg.check_associativity();
        assert!(report.passed(), "{}: {:?}", quiver.name, report.failures);
        assert!(report.triples_checked > 0);
    }
}

#[test]
fn json_table() {
    let alg = HallAlgebra::new(&a2(), 2, &[1, 1]).unwrap();
    let json = serde_json::to_value(alg.to_json()).unwrap();
    assert_eq!(json["products"]["(1,0)[] * (0,1)[]"]["(1,1)[1]"], "1/1");
    assert_eq!(json["alpha"], "1");
    let t = RepClassTable::new(&Quiver::parse("a1").unwrap(), 2, &[2]).unwrap();
    let s = t.find("(1)").unwrap();
    assert_eq!(hall_product(&t, s, s).unwrap().display(&t).to_string(), "3/1 (2)");
}

#[test]
fn q3_up_to_2_2() {
    let alg = HallAlgebra::new(&a2(), 3, &[2, 2]).unwrap();
    assert!(alg.check_associativity().passed());
    assert!(alg.check_against_span().unwrap().is_empty());
}
