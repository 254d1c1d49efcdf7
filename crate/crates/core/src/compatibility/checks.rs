use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::maps::{
    alpha_inverse, alpha_map, correlation_polytope, cut_polytope_01, nondisturbing_polytope, phi_inverse, phi_map,
    psi_inverse, psi_map, CorrelationVector,
};
use super::{
    assignments, correlator, exclusivity_graph_of_events, n_cycle_scenario, random_nondisturbing_behaviours,
    require_nondisturbing, Behaviour, CompatibilityError, CompatibilityScenario, Event,
};
use crate::contextuality::{FamilyRow, GraphDescriptor, TheoremReport};
use crate::graphs::{self, Graph};
use crate::polytope::{self, linalg, Inequality, Limits, VPolytope};
use crate::rational::{frac, int, Rational};
use crate::Caps;

fn check_cycle(n: usize, caps: &Caps) -> Result<(), CompatibilityError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(CompatibilityError::Domain(format!("needs an odd n >= 3, got {n}")));
    }
    if n > caps.max_measurements {
        return Err(CompatibilityError::SizeLimit {
            what: "measurements",
            value: n,
            cap: caps.max_measurements,
        });
    }
    Ok(())
}

/// Both sides of `n - sum <i,i+1> = 4 sum p_(i,i+1)(01)` on an n-cycle
/// scenario. The identity relies on no-disturbance, so disturbing inputs
/// are rejected.
pub fn kcbs_identity(s: &CompatibilityScenario, b: &Behaviour) -> Result<(Rational, Rational), CompatibilityError> {
    let n = s.measurements();
    if s.contexts().len() != n || (0..n).any(|i| s.contexts()[i] != [i, (i + 1) % n]) {
        return Err(CompatibilityError::Unsupported("identity is stated for n-cycle scenarios".into()));
    }
    require_nondisturbing(s, b)?;
    let mut corr = Rational::zero();
    let mut p01 = Rational::zero();
    for i in 0..n {
        corr += correlator(s, b, i, (i + 1) % n)?;
        p01 += b.probability(i, &[0, 1]);
    }
    Ok((int(n as i64) - corr, int(4) * p01))
}

/// Per-context coefficient blocks `(00, 01, 10, 11)` tiled over the cycle.
fn tiled(n: usize, block: [i64; 4]) -> Vec<Rational> {
    (0..n).flat_map(|_| block.map(int)).collect()
}

/// The n-cycle correlator identity and the equivalence of
/// `-sum <i,i+1> <= n - 2` with `sum p_(i,i+1)(01) <= (n - 1) / 2`,
/// checked on every deterministic behaviour and a seeded sample.
pub fn kcbs_bridge_check(n: usize, seed: u64, samples: usize, caps: &Caps) -> Result<TheoremReport, CompatibilityError> {
    check_cycle(n, caps)?;
    if n < 5 {
        return Err(CompatibilityError::Domain(format!("bridge needs n >= 5, got {n}")));
    }
    let started = Instant::now();
    let s = n_cycle_scenario(n)?;
    let g = Graph::cycle(n);
    let mut report = TheoremReport::new("kcbs-bridge", GraphDescriptor::new(format!("C{n}"), &g));

    let vertices: Vec<Behaviour> = assignments(n)
        .map(|a| Behaviour::deterministic(&s, &a))
        .collect::<Result<_, _>>()?;
    let sample = random_nondisturbing_behaviours(&s, seed, samples, caps)?;
    report.count("classical_vertices", vertices.len());
    report.count("samples", sample.len());

    let nc_bound = frac((n - 1) as i64, 2);
    let corr_bound = int(n as i64 - 2);
    let mut violating = 0;
    for (name, set) in [("classical", &vertices), ("sampled", &sample)] {
        let mut identity = true;
        let mut equivalent = true;
        let mut slack = true;
        let mut corr_from_table = true;
        for b in set.iter() {
            let (lhs, rhs) = kcbs_identity(&s, b)?;
            identity &= lhs == rhs;
            let sum_corr: Rational = (0..n).map(|i| correlator(&s, b, i, (i + 1) % n)).sum::<Result<_, _>>()?;
            let sum_p01: Rational = (0..n).map(|i| b.probability(i, &[0, 1])).sum();
            let corr_ok = -sum_corr.clone() <= corr_bound;
            let nc_ok = sum_p01 <= nc_bound;
            equivalent &= corr_ok == nc_ok;
            violating += usize::from(!nc_ok);
            // Slack of the correlator row is four times the slack of the event row.
            slack &= &corr_bound + &sum_corr == int(4) * (&nc_bound - &sum_p01);
            for i in 0..n {
                let c = correlator(&s, b, i, (i + 1) % n)?;
                let anti = b.probability(i, &[0, 1]) + b.probability(i, &[1, 0]);
                corr_from_table &= c == Rational::one() - int(2) * anti;
            }
        }
        report.check(&format!("identity_on_{name}"), identity);
        report.check(&format!("inequalities_equivalent_on_{name}"), equivalent);
        report.check(&format!("slack_relation_on_{name}"), slack);
        report.check(&format!("correlator_from_anticorrelation_on_{name}"), corr_from_table);
    }
    report.count("violating_behaviours", violating);

    // Summing the 01-form and 10-form rows gives the correlator row once the
    // per-context normalizations are subtracted.
    let p01 = tiled(n, [0, 1, 0, 0]);
    let p10 = tiled(n, [0, 0, 1, 0]);
    let ones = tiled(n, [1, 1, 1, 1]);
    let minus_corr = tiled(n, [-1, 1, 1, -1]);
    let summed: Vec<Rational> = (0..4 * n)
        .map(|k| int(2) * (&p01[k] + &p10[k]) - &ones[k])
        .collect();
    report.check("row_sum_gives_correlator_row", summed == minus_corr);
    report.check(
        "bound_sum_gives_correlator_bound",
        int(2) * (&nc_bound + &nc_bound) - int(n as i64) == corr_bound,
    );

    // In q coordinates the two inequalities normalize to the same row.
    let d = 2 * n;
    let mut nc_row = vec![Rational::zero(); d];
    let mut corr_row = vec![Rational::zero(); d];
    let mut corr_const = Rational::zero();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let ctx = s.context_index(&[a, b]).expect("edge is a context");
        let second = s.contexts()[ctx][1];
        nc_row[second] += int(1);
        nc_row[n + e] -= int(1);
        // -<a,b> = -1 + 2 q_a + 2 q_b - 4 q_ab
        corr_const -= int(1);
        corr_row[a] += int(2);
        corr_row[b] += int(2);
        corr_row[n + e] -= int(4);
    }
    let nc_ineq = Inequality::new(nc_row, nc_bound.clone())?;
    let corr_ineq = Inequality::new(corr_row, &corr_bound - corr_const)?;
    report.check("rows_coincide_in_q_coordinates", nc_ineq == corr_ineq);

    let events: Vec<Event> = (0..n).map(|i| Event { context: i, outcomes: vec![0, 1] }).collect();
    let eg = exclusivity_graph_of_events(&s, &events)?;
    report.check("events_form_cycle", eg == g);
    Ok(report.finish(started))
}

/// `sum gamma_i <i,i+1> <= n - 2` written in q coordinates of `C_n`.
pub fn odd_gamma_inequality(gamma: &[i64]) -> Inequality {
    let n = gamma.len();
    let g = Graph::cycle(n);
    let mut c = vec![0i64; 2 * n];
    let mut constant = 0;
    for i in 0..n {
        let j = (i + 1) % n;
        let e = g.edge_index(i, j).expect("cycle edge");
        // <i,j> = 1 - 2 q_i - 2 q_j + 4 q_ij
        constant += gamma[i];
        c[i] -= 2 * gamma[i];
        c[j] -= 2 * gamma[i];
        c[n + e] += 4 * gamma[i];
    }
    Inequality::from_ints(&c, n as i64 - 2 - constant).expect("signature row is nonzero")
}

fn signature(n: usize, mask: usize) -> Vec<i64> {
    (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()
}

/// Every odd-signature correlator inequality is a facet of `COR(C_n)`.
pub fn odd_gamma_facets_check(n: usize, caps: &Caps) -> Result<TheoremReport, CompatibilityError> {
    check_cycle(n, caps)?;
    let started = Instant::now();
    let g = Graph::cycle(n);
    let mut report = TheoremReport::new("odd-gamma", GraphDescriptor::new(format!("C{n}"), &g));
    let cor = correlation_polytope(&g, caps)?;
    report.count("cor_vertices", cor.len());

    let mut rows = Vec::new();
    for mask in 0..1usize << n {
        if mask.count_ones() % 2 == 1 {
            let ineq = odd_gamma_inequality(&signature(n, mask));
            let tight = polytope::saturating_vertices(&ineq, &cor);
            let valid = cor.vertices().iter().all(|v| ineq.is_satisfied(v));
            rows.push(FamilyRow {
                k: mask,
                support: (0..2 * n).filter(|&k| !ineq.coeffs()[k].is_zero()).collect(),
                valid,
                facet: polytope::is_facet_of(&ineq, &cor),
                face_dim: if valid { linalg::affine_dimension(&tight) } else { None },
                inequality: ineq,
            });
        }
    }
    report.count("odd_signatures", rows.len());
    report.count("valid", rows.iter().filter(|r| r.valid).count());
    report.count("facets", rows.iter().filter(|r| r.facet).count());
    report.check("count_is_2_pow_n_minus_1", rows.len() == 1 << (n - 1));
    report.check("all_valid", rows.iter().all(|r| r.valid));
    report.check("all_facets", rows.iter().all(|r| r.facet));

    // The all-plus signature is not even valid: sum <i,i+1> reaches n.
    let plus = odd_gamma_inequality(&vec![1; n]);
    let best = cor
        .vertices()
        .iter()
        .map(|v| {
            (0..n)
                .map(|i| {
                    let j = (i + 1) % n;
                    let e = n + g.edge_index(i, j).expect("cycle edge");
                    Rational::one() - int(2) * (&v[i] + &v[j]) + int(4) * &v[e]
                })
                .sum::<Rational>()
        })
        .max()
        .expect("nonempty");
    report.count("all_plus_max", usize::try_from(best.to_integer()).unwrap_or(0));
    report.check("all_plus_excluded", !polytope::is_facet_of(&plus, &cor));

    // Total facet count of the correlation polytope, for the record.
    let facets = polytope::facets_from_vertices(&cor, &Limits::from(caps))?;
    let nd = nondisturbing_polytope(&n_cycle_scenario(n)?)?;
    let nd_rows: BTreeSet<&Inequality> = nd.inequalities().iter().collect();
    let listed: BTreeSet<&Inequality> = rows.iter().map(|r| &r.inequality).collect();
    let nondisturbing = facets.inequalities().iter().filter(|f| nd_rows.contains(f)).count();
    let odd = facets.inequalities().iter().filter(|f| listed.contains(f)).count();
    report.count("cor_facets", facets.len());
    report.count("cor_facets_nondisturbing_rows", nondisturbing);
    report.count("cor_facets_odd_gamma", odd);
    report.count("cor_facets_other", facets.len() - nondisturbing - odd);
    report.check("enumerated_facets_include_family", odd == rows.len());

    report.families.insert("odd_gamma".into(), rows);
    Ok(report.finish(started))
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<Rational> {
    (0..d)
        .map(|_| frac(rng.random_range(-64..=64), rng.random_range(1..=64)))
        .collect()
}

/// `psi(COR(C_n))` equals the cut polytope of the suspension, and the
/// phi, psi and alpha maps invert exactly on seeded inputs.
pub fn cut_maps_check(n: usize, seed: u64, samples: usize, caps: &Caps) -> Result<TheoremReport, CompatibilityError> {
    check_cycle(n, caps)?;
    let started = Instant::now();
    let limits = Limits::from(caps);
    let g = Graph::cycle(n);
    let sus = graphs::suspension(&g);
    let mut report = TheoremReport::new("cut-maps", GraphDescriptor::new(format!("C{n}"), &g));

    let cor = correlation_polytope(&g, caps)?;
    let images: Vec<Vec<Rational>> = cor
        .vertices()
        .iter()
        .map(|v| CorrelationVector::new(g.clone(), v.clone()).map(|q| psi_map(&q)))
        .collect::<Result<_, _>>()?;
    let cut = cut_polytope_01(&sus, caps)?;
    report.count("cor_vertices", cor.len());
    report.count("cut_vertices", cut.len());
    let image_set: BTreeSet<&Vec<Rational>> = images.iter().collect();
    let cut_set: BTreeSet<&Vec<Rational>> = cut.vertices().iter().collect();
    report.check("psi_vertex_set_is_cut_vectors", image_set == cut_set);
    let psi_cor = VPolytope::new(sus.edge_count(), images)?;
    report.check("psi_cor_equals_cut", polytope::equal_polytopes(&psi_cor, &cut, &limits)?);

    // Under 0 -> +1, 1 -> -1 the signed cut vector of an assignment holds
    // minus the correlators.
    let signed = |a: &[u8], i: usize| if a[i] == 0 { 1 } else { -1 };
    let mut signed_ok = true;
    for a in assignments(n) {
        let q: Vec<Rational> = a
            .iter()
            .map(|&x| int(x as i64))
            .chain(g.edges().iter().map(|&(i, j)| int((a[i] & a[j]) as i64)))
            .collect();
        let y = alpha_map(&psi_map(&CorrelationVector::new(g.clone(), q)?));
        for (k, &(i, j)) in sus.edges().iter().enumerate() {
            let expect = if j == n { -signed(&a, i) } else { -signed(&a, i) * signed(&a, j) };
            signed_ok &= y[k] == int(expect);
        }
    }
    report.check("alpha_gives_minus_signed_correlators", signed_ok);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = sus.edge_count();
    let mut alpha_ok = true;
    let mut psi_ok = true;
    for _ in 0..samples {
        let y = random_vector(&mut rng, d);
        alpha_ok &= alpha_map(&alpha_inverse(&y)) == y && alpha_inverse(&alpha_map(&y)) == y;
        let q = CorrelationVector::new(g.clone(), random_vector(&mut rng, 2 * n))?;
        psi_ok &= psi_inverse(&g, &psi_map(&q))? == q && psi_map(&psi_inverse(&g, &y)?) == y;
    }
    report.count("random_vectors", samples);
    report.check("alpha_round_trip", alpha_ok);
    report.check("psi_round_trip", psi_ok);

    let s = n_cycle_scenario(n)?;
    let nd = nondisturbing_polytope(&s)?;
    let mut phi_ok = true;
    let mut inside = true;
    for b in random_nondisturbing_behaviours(&s, seed, samples, caps)? {
        let q = phi_map(&s, &b)?;
        phi_ok &= phi_inverse(&s, &q)? == b;
        inside &= nd.contains_point(&q.q);
    }
    report.check("phi_round_trip", phi_ok);
    report.check("samples_satisfy_nondisturbing_rows", inside);
    Ok(report.finish(started))
}
