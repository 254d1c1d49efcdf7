use std::collections::BTreeSet;
use std::time::Instant;

use super::{
    fanc_inequality, fcnc_inequality, nc_facets_of, nontrivial, qstab, stab, support_of,
    ContextualityError, FamilyRow, GraphDescriptor, NcInequality, TheoremReport,
};
use crate::graphs::{self, Graph};
use crate::polytope::{self, linalg, sample, Inequality, Limits, VPolytope};
use crate::rational::{half, Rational};
use crate::Caps;

fn check_n(n: usize, cap: usize, what: &'static str) -> Result<(), ContextualityError> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(ContextualityError::Domain(format!("{what} needs an odd n >= 5, got {n}")));
    }
    if n > cap {
        return Err(ContextualityError::SizeLimit { what, value: n, cap });
    }
    Ok(())
}

fn tally(report: &mut TheoremReport, facets: &[NcInequality]) {
    let trivial = facets.iter().filter(|f| f.classification.is_trivial()).count();
    report.count("stab_facets", facets.len());
    report.count("trivial_facets", trivial);
    report.count("nontrivial_facets", facets.len() - trivial);
}

/// The only fractional vertex of `QSTAB(C_n)` is the half point, and the
/// only non-trivial facet of `STAB(C_n)` is the all-ones row with bound
/// `(n - 1) / 2`, met by exactly `n` stable sets.
pub fn verify_unique_fcnc(n: usize, caps: &Caps) -> Result<TheoremReport, ContextualityError> {
    check_n(n, caps.max_cycle_n, "cycle length")?;
    let started = Instant::now();
    let limits = Limits::from(caps);
    let g = Graph::cycle(n);
    let mut report = TheoremReport::new("fcnc", GraphDescriptor::new(format!("C{n}"), &g));

    let s = stab(&g, caps)?;
    let q = polytope::vertices_from_halfspaces(&qstab(&g, caps)?, &limits)?;
    let half_point = vec![half(); n];
    let mut expected: Vec<Vec<Rational>> = s.vertices().to_vec();
    expected.push(half_point.clone());
    expected.sort();
    let fractional = q.vertices().iter().filter(|v| super::has_fraction(v)).count();
    report.count("stable_sets", s.len());
    report.count("qstab_vertices", q.len());
    report.count("fractional_vertices", fractional);
    report.check("qstab_vertices_are_stable_sets_plus_half", q.vertices() == expected.as_slice());

    let facets = nc_facets_of(&g, &s, caps)?;
    tally(&mut report, &facets);
    let target = fcnc_inequality(n)?;
    let nt = nontrivial(&facets);
    let unique = nt.len() == 1 && nt[0].inequality == target.inequality;
    report.check("unique_nontrivial_facet_is_fcnc", unique);
    let saturating = nt.first().and_then(|f| f.saturating_vertex_count).unwrap_or(0);
    report.count("saturating_vertices", saturating);
    report.check("saturated_by_n_vertices", unique && saturating == n);

    // The half point obeys every trivial facet and breaks fcnc by exactly 1/2.
    let trivial_ok = facets
        .iter()
        .filter(|f| f.classification.is_trivial())
        .all(|f| f.inequality.is_satisfied(&half_point));
    report.check("half_point_satisfies_trivial_facets", trivial_ok);
    report.check(
        "half_point_violation_is_one_half",
        target.inequality.slack(&half_point) == -half(),
    );

    report.unique_inequality = unique.then(|| target.inequality.clone());
    report.facets = facets;
    Ok(report.finish(started))
}

/// The only non-trivial facet of `STAB` of the odd anti-cycle is
/// `sum p_i <= 2`, and both antiblocker identities linking the cycle and
/// its complement hold exactly.
pub fn verify_unique_fanc(n: usize, caps: &Caps) -> Result<TheoremReport, ContextualityError> {
    check_n(n, caps.max_anticycle_n, "anti-cycle length")?;
    let started = Instant::now();
    let limits = Limits::from(caps);
    let c = Graph::cycle(n);
    let g = graphs::complement(&c);
    let mut report = TheoremReport::new("fanc", GraphDescriptor::new(format!("complement(C{n})"), &g));

    let s = stab(&g, caps)?;
    report.count("stable_sets", s.len());
    let facets = nc_facets_of(&g, &s, caps)?;
    tally(&mut report, &facets);
    let target = fanc_inequality(n)?;
    let nt = nontrivial(&facets);
    let unique = nt.len() == 1 && nt[0].inequality == target.inequality;
    report.check("unique_nontrivial_facet_is_fanc", unique);
    if let Some(f) = nt.first() {
        report.count("saturating_vertices", f.saturating_vertex_count.unwrap_or(0));
    }

    let abl_q = polytope::antiblocker(&qstab(&c, caps)?, &limits)?;
    report.check("stab_of_complement_is_abl_qstab", polytope::equal_polytopes(&s, &abl_q, &limits)?);
    let abl_s = polytope::antiblocker(&stab(&c, caps)?, &limits)?;
    let q_bar = qstab(&g, caps)?;
    report.count("complement_cliques", q_bar.len() - n);
    report.check(
        "qstab_of_complement_is_abl_stab",
        polytope::equal_polytopes(&q_bar, &abl_s, &limits)?,
    );

    report.unique_inequality = unique.then(|| target.inequality.clone());
    report.facets = facets;
    Ok(report.finish(started))
}

/// Every facet of `QSTAB(g)` is also a facet of `STAB(g)`.
pub fn facet_inheritance_check(name: &str, g: &Graph, caps: &Caps) -> Result<TheoremReport, ContextualityError> {
    let started = Instant::now();
    let limits = Limits::from(caps);
    let mut report = TheoremReport::new("inheritance", GraphDescriptor::new(name, g));
    let q = polytope::remove_redundant(&qstab(g, caps)?, &limits)?;
    let s = stab(g, caps)?;
    let facets = nc_facets_of(g, &s, caps)?;
    let stab_rows: BTreeSet<&Inequality> = facets.iter().map(|f| &f.inequality).collect();
    let inherited = q.inequalities().iter().filter(|r| stab_rows.contains(r)).count();
    report.count("qstab_facets", q.len());
    report.count("inherited_facets", inherited);
    tally(&mut report, &facets);
    report.check("every_qstab_facet_is_stab_facet", inherited == q.len());
    report.facets = facets;
    Ok(report.finish(started))
}

/// `STAB(g) ⊆ QSTAB(g)`: every stable set obeys every clique row.
pub fn sandwich_check(name: &str, g: &Graph, caps: &Caps) -> Result<TheoremReport, ContextualityError> {
    let started = Instant::now();
    let mut report = TheoremReport::new("sandwich", GraphDescriptor::new(name, g));
    let s = stab(g, caps)?;
    let q = qstab(g, caps)?;
    let violations = s
        .vertices()
        .iter()
        .flat_map(|v| q.inequalities().iter().map(move |r| (v, r)))
        .filter(|(v, r)| !r.is_satisfied(v))
        .count();
    report.count("stab_vertices", s.len());
    report.count("qstab_rows", q.len());
    report.count("violations", violations);
    report.check("stab_inside_qstab", violations == 0);
    Ok(report.finish(started))
}

fn window(n: usize, start: usize, len: usize, bound: i64) -> Inequality {
    let mut c = vec![0; n];
    for i in 0..len {
        c[(start + i) % n] = 1;
    }
    Inequality::from_ints(&c, bound).expect("window is nonempty")
}

fn family_row(k: usize, ineq: Inequality, v: &VPolytope) -> FamilyRow {
    let valid = v.vertices().iter().all(|p| ineq.is_satisfied(p));
    let tight = polytope::saturating_vertices(&ineq, v);
    FamilyRow {
        k,
        support: support_of(&ineq),
        valid,
        facet: polytope::is_facet_of(&ineq, v),
        face_dim: if valid { linalg::affine_dimension(&tight) } else { None },
        inequality: ineq,
    }
}

/// The three displayed families of non-trivial facets of `STAB(Ci_8[1,4])`:
/// eight pentagonal windows, eight heptagonal windows and the all-ones
/// row, and nothing else.
pub fn circulant_bell_check(caps: &Caps) -> Result<TheoremReport, ContextualityError> {
    let started = Instant::now();
    let n = 8;
    let g = graphs::make_circulant(n, &[1, 4])?;
    let mut report = TheoremReport::new("circulant-bell", GraphDescriptor::new("Ci8[1,4]", &g));
    let s = stab(&g, caps)?;
    report.count("stab_vertices", s.len());
    let facets = nc_facets_of(&g, &s, caps)?;
    tally(&mut report, &facets);

    let families = [
        ("pentagonal", (0..n).map(|k| window(n, k, 5, 2)).collect::<Vec<_>>()),
        ("heptagonal", (0..n).map(|k| window(n, k, 7, 3)).collect()),
        ("chsh", vec![window(n, 0, n, 3)]),
    ];
    let enumerated: BTreeSet<&Inequality> = nontrivial(&facets).iter().map(|f| &f.inequality).collect();
    let mut listed = BTreeSet::new();
    for (name, rows) in families {
        let rows: Vec<FamilyRow> = rows
            .into_iter()
            .enumerate()
            .map(|(k, r)| family_row(k, r, &s))
            .collect();
        let found = rows.iter().filter(|r| enumerated.contains(&r.inequality)).count();
        report.count(&format!("{name}_enumerated"), found);
        report.check(&format!("{name}_all_facets"), rows.iter().all(|r| r.facet));
        report.check(&format!("{name}_all_enumerated"), found == rows.len());
        listed.extend(rows.iter().map(|r| r.inequality.clone()));
        report.families.insert(name.to_string(), rows);
    }
    let unlisted = enumerated.iter().filter(|r| !listed.contains(**r)).count();
    report.count("unlisted_nontrivial_facets", unlisted);
    report.check("nontrivial_count_is_17", enumerated.len() == 17);
    report.check("no_unlisted_nontrivial_facets", unlisted == 0);
    report.facets = facets;
    Ok(report.finish(started))
}

/// Double description against the combinatorial oracle on `QSTAB(C_5)`,
/// `QSTAB(C_7)` and a seeded batch of random bounded polytopes.
pub fn oracle_equivalence_check(seed: u64, count: usize, caps: &Caps) -> Result<TheoremReport, ContextualityError> {
    let started = Instant::now();
    let limits = Limits::from(caps);
    let mut report = TheoremReport::new("oracle", GraphDescriptor::new("C5+C7", &Graph::cycle(5)));
    let mut cases = Vec::new();
    for n in [5, 7] {
        cases.push((format!("qstab_c{n}"), qstab(&Graph::cycle(n), caps)?));
    }
    let batch = sample::seeded_batch(seed, count);
    let mut agree = 0;
    for h in &batch {
        let dd = polytope::vertices_from_halfspaces(h, &limits)?;
        let oracle = polytope::brute_force_vertices(h, &limits)?;
        agree += usize::from(dd.vertices() == oracle.vertices());
    }
    for (name, h) in &cases {
        let dd = polytope::vertices_from_halfspaces(h, &limits)?;
        let oracle = polytope::brute_force_vertices(h, &limits)?;
        report.count(&format!("{name}_vertices"), dd.len());
        report.check(&format!("{name}_matches_oracle"), dd.vertices() == oracle.vertices());
    }
    report.count("random_polytopes", batch.len());
    report.count("random_agreements", agree);
    report.check("random_batch_matches_oracle", agree == batch.len());
    Ok(report.finish(started))
}
