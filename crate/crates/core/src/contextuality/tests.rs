use super::*;
use crate::graphs::{complement, make_circulant};
use crate::rational::half;

fn caps() -> Caps {
    Caps::default()
}

fn count_kind(facets: &[NcInequality], kind: FacetKind) -> usize {
    facets.iter().filter(|f| f.classification == kind).count()
}

#[test]
fn fcnc_examples() {
    assert_eq!(fcnc_inequality(5).unwrap().inequality, Inequality::from_ints(&[1; 5], 2).unwrap());
    assert_eq!(fcnc_inequality(7).unwrap().inequality, Inequality::from_ints(&[1; 7], 3).unwrap());
    assert!(matches!(fcnc_inequality(3), Err(ContextualityError::Domain(_))));
    assert!(fcnc_inequality(6).is_err());
}

#[test]
fn fanc_examples() {
    for n in [5, 7, 9] {
        let f = fanc_inequality(n).unwrap();
        assert_eq!(f.inequality, Inequality::from_ints(&vec![1; n], 2).unwrap());
        assert_eq!(f.classification, FacetKind::Fanc);
    }
    assert!(fanc_inequality(4).is_err());
    // The two fundamental inequalities coincide on the self-complementary pentagon.
    assert_eq!(fanc_inequality(5).unwrap().inequality, fcnc_inequality(5).unwrap().inequality);
}

#[test]
fn classification_is_by_pattern() {
    let c5 = Graph::cycle(5);
    let neg = Inequality::from_ints(&[0, -1, 0, 0, 0], 0).unwrap();
    let edge = Inequality::from_ints(&[1, 1, 0, 0, 0], 1).unwrap();
    let non_edge = Inequality::from_ints(&[1, 0, 1, 0, 0], 1).unwrap();
    assert_eq!(classify(&neg, &c5), FacetKind::Nonnegativity);
    assert_eq!(classify(&edge, &c5), FacetKind::Clique);
    assert_eq!(classify(&non_edge, &c5), FacetKind::Other);
    assert_eq!(classify(&fcnc_inequality(5).unwrap().inequality, &c5), FacetKind::Fcnc);
    let c7bar = complement(&Graph::cycle(7));
    assert_eq!(classify(&fanc_inequality(7).unwrap().inequality, &c7bar), FacetKind::Fanc);
}

#[test]
fn pentagon_has_one_nontrivial_facet() {
    let facets = enumerate_nc_facets(&Graph::cycle(5), &caps()).unwrap();
    assert_eq!(facets.len(), 11);
    assert_eq!(count_kind(&facets, FacetKind::Nonnegativity), 5);
    assert_eq!(count_kind(&facets, FacetKind::Clique), 5);
    let nt = nontrivial(&facets);
    assert_eq!(nt.len(), 1);
    assert_eq!(nt[0].inequality, fcnc_inequality(5).unwrap().inequality);
    assert_eq!(nt[0].saturating_vertex_count, Some(5));
    assert_eq!(nt[0].support, vec![0, 1, 2, 3, 4]);
}

#[test]
fn perfect_graphs_have_no_nontrivial_facets() {
    let graphs = [
        Graph::complete(3),
        Graph::cycle(6),
        Graph::path(4),
        Graph::path(5),
        Graph::complete_bipartite(2, 3),
    ];
    for g in &graphs {
        let facets = enumerate_nc_facets(g, &caps()).unwrap();
        assert!(nontrivial(&facets).is_empty(), "{g:?}");
    }
}

#[test]
fn every_facet_is_saturated_by_dim_independent_vertices() {
    for g in [Graph::cycle(5), Graph::cycle(7), make_circulant(8, &[1, 4]).unwrap()] {
        let v = stab(&g, &caps()).unwrap();
        for f in enumerate_nc_facets(&g, &caps()).unwrap() {
            assert!(polytope::is_facet_of(&f.inequality, &v), "{}", f.inequality);
            assert_eq!(
                f.saturating_vertex_count,
                Some(polytope::saturating_vertices(&f.inequality, &v).len())
            );
        }
    }
}

#[test]
fn fcnc_verifier_counts() {
    let r = verify_unique_fcnc(5, &caps()).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.evidence["qstab_vertices"], 12);
    assert_eq!(r.evidence["fractional_vertices"], 1);
    assert_eq!(r.evidence["nontrivial_facets"], 1);
    assert_eq!(r.evidence["saturating_vertices"], 5);
    assert_eq!(r.evidence["trivial_facets"], 10);
    let r7 = verify_unique_fcnc(7, &caps()).unwrap();
    assert!(r7.passed());
    assert_eq!(r7.evidence["saturating_vertices"], 7);
    assert!(matches!(verify_unique_fcnc(4, &caps()), Err(ContextualityError::Domain(_))));
    let small = Caps { max_cycle_n: 5, ..Caps::default() };
    let err = verify_unique_fcnc(7, &small).unwrap_err();
    assert!(err.is_resource_limit());
}

#[test]
fn fanc_verifier_small() {
    for n in [5, 7] {
        let r = verify_unique_fanc(n, &caps()).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }
    let small = Caps { max_anticycle_n: 7, ..Caps::default() };
    assert!(verify_unique_fanc(9, &small).unwrap_err().is_resource_limit());
}

#[test]
fn inheritance_examples() {
    let r = facet_inheritance_check("C5", &Graph::cycle(5), &caps()).unwrap();
    assert!(r.passed());
    assert_eq!(r.evidence["qstab_facets"], 10);
    assert_eq!(r.evidence["stab_facets"], 11);
    assert!(facet_inheritance_check("C7", &Graph::cycle(7), &caps()).unwrap().passed());
    let k3 = facet_inheritance_check("K3", &Graph::complete(3), &caps()).unwrap();
    assert!(k3.passed());
    assert_eq!(k3.evidence["qstab_facets"], k3.evidence["stab_facets"]);
}

#[test]
fn sandwich_examples() {
    let ci8 = make_circulant(8, &[1, 4]).unwrap();
    for (name, g) in [("C5", Graph::cycle(5)), ("Ci8[1,4]", ci8), ("K3", Graph::complete(3))] {
        assert!(sandwich_check(name, &g, &caps()).unwrap().passed());
    }
}

#[test]
fn half_point_witness() {
    for n in [5, 7, 9] {
        let g = Graph::cycle(n);
        let x = vec![half(); n];
        let facets = enumerate_nc_facets(&g, &caps()).unwrap();
        for f in &facets {
            if f.classification.is_trivial() {
                assert!(f.inequality.is_satisfied(&x));
            } else {
                assert_eq!(f.inequality.slack(&x), -half());
            }
        }
    }
}

#[test]
fn circulant_families_are_reported() {
    let r = circulant_bell_check(&caps()).unwrap();
    assert_eq!(r.evidence["stab_vertices"], 33);
    assert_eq!(r.families["pentagonal"].len(), 8);
    assert_eq!(r.families["heptagonal"].len(), 8);
    assert_eq!(r.families["chsh"].len(), 1);
    assert!(r.families["pentagonal"].iter().all(|row| row.facet));
    assert!(r.families["chsh"][0].facet);
    // Heptagonal windows are valid but cut out faces of dimension 4 only.
    for row in &r.families["heptagonal"] {
        assert!(row.valid && !row.facet);
        assert_eq!(row.face_dim, Some(4));
    }
    assert_eq!(r.evidence["nontrivial_facets"], 9);
    assert_eq!(r.evidence["unlisted_nontrivial_facets"], 0);
    assert!(!r.passed());
    let md = r.to_markdown();
    assert!(md.contains("### heptagonal (8 rows)"));
    assert!(md.contains("| 0 | `x0 + x1 + x2 + x3 + x4 <= 2` | yes | yes | 7 |"));
}

#[test]
fn oracle_report() {
    let r = oracle_equivalence_check(11, 10, &caps()).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
    assert_eq!(r.evidence["qstab_c5_vertices"], 12);
    assert_eq!(r.evidence["qstab_c7_vertices"], 30);
}

#[test]
fn report_json_shape() {
    let r = verify_unique_fcnc(5, &caps()).unwrap();
    let json: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(json["verdict"], "pass");
    assert_eq!(json["claim"], "fcnc");
    assert_eq!(json["graph"]["n"], 5);
    assert_eq!(json["graph"]["digest"].as_str().unwrap().len(), 64);
    assert_eq!(json["facets"].as_array().unwrap().len(), 11);
    assert_eq!(json["unique_inequality"]["bound"], "2");
    assert!(json.get("families").is_none());
    let back: TheoremReport = serde_json::from_value(json).unwrap();
    assert_eq!(back.facets, r.facets);
}

#[test]
fn digest_depends_on_graph() {
    let a = GraphDescriptor::new("a", &Graph::cycle(5));
    let b = GraphDescriptor::new("b", &complement(&Graph::cycle(5)));
    assert_ne!(a.digest, b.digest);
    assert_eq!(a.digest, GraphDescriptor::new("c", &Graph::cycle(5)).digest);
}
