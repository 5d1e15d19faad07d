//! End-to-end pipelines: full analysis of one graph and the randomized
//! property suite.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{build_basis, verify_basis, BasisBundle};
use crate::error::Result;
use crate::graph::{OrientedGraph, TreeSelection, ENUMERATION_LIMIT};
use crate::ks::{eigenvector_transport_check, ks_matrices, matrix_tree_check, spectra_match_mod_one, verify_ks_identities, KsPair, SpectralReport};
use crate::lab::{random_oblique_projection, verify_appendix_theorems};
use crate::projections::{build_projections, verify_projection_identities, verify_two_form, ProjectionPair};
use crate::random::{random_connected_multigraph, random_rationals, random_spanning_tree};
use crate::report::VerificationReport;
use crate::thermo::{linear_regime_epr, macroscopic_observables, orthogonal_projectors, reconstruct, verify_lambda_duality, ThermoState};

/// Everything derived from one graph and spanning tree.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub basis: BasisBundle,
    pub projections: ProjectionPair,
    pub ks: KsPair,
    pub spectra: SpectralReport,
    pub report: VerificationReport,
}

/// Builds the bases, projections and KS matrices and runs every identity
/// check. The brute-force tree count is skipped above the enumeration limit.
pub fn analyze(g: &OrientedGraph, t: &TreeSelection) -> Result<Analysis> {
    let basis = build_basis(g, t)?;
    let projections = build_projections(&basis)?;
    let ks = ks_matrices(&basis, &projections)?;
    let spectra = spectra_match_mod_one(&ks)?;
    let mut report = VerificationReport::new(format!("analyze {} vertices, {} edges", g.vertex_count(), g.edge_count()));
    report.absorb(verify_basis(&basis));
    report.absorb(verify_projection_identities(&basis, &projections));
    report.absorb(verify_two_form(&basis, &projections));
    report.absorb(verify_ks_identities(&basis, &projections, &ks)?);
    report.absorb(spectra.to_report());
    if g.edge_count() <= ENUMERATION_LIMIT {
        report.absorb(matrix_tree_check(g, &ks)?);
    }
    report.absorb(eigenvector_transport_check(&basis, &projections, &ks)?);
    report.absorb(verify_lambda_duality(&basis));
    report.absorb(orthogonal_projectors(&basis, &ks)?.checks);
    Ok(Analysis {
        basis,
        projections,
        ks,
        spectra,
        report,
    })
}

/// Extra structural properties checked on random graphs.
fn graph_properties(a: &Analysis, rng: &mut impl Rng) -> Result<VerificationReport> {
    let b = &a.basis;
    let g = b.graph();
    let (v, e) = (g.vertex_count(), g.edge_count());
    let mut r = VerificationReport::new("properties");
    if e + 2 == 2 * v {
        r.record("|E| = 2|V|-2 gives equal spectra", a.spectra.char_k == a.spectra.char_kstar);
    }
    let (c, m) = (b.chord_count(), b.cochord_count());
    if c >= m {
        r.record("mult1(K) >= |C| - (|V|-1)", a.spectra.mult1_k >= c - m);
    } else {
        r.record("mult1(*K) >= (|V|-1) - |C|", a.spectra.mult1_kstar >= m - c);
    }
    r.record(
        "Omega = 0 iff P^T = P",
        a.projections.omega.is_zero() == a.projections.is_orthogonal(),
    );

    let j = random_rationals(rng, e);
    let lr = linear_regime_epr(b, &a.ks, &j)?;
    r.record_with("linear regime entropy production", lr.passed(), format!("{} vs {}", lr.direct, lr.decomposed));
    r.record("sigma >= 0 when f = j", lr.direct >= crate::linalg::rat(0));
    let s = ThermoState::new(j, random_rationals(rng, e));
    let obs = macroscopic_observables(b, &s)?;
    r.record("state reconstruction", reconstruct(b, &obs) == (s.currents.clone(), s.forces.clone()));
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomRun {
    pub cases: usize,
    pub seed: u64,
    pub graph_failures: Vec<String>,
    pub projection_failures: Vec<String>,
    pub report: VerificationReport,
}

impl RandomRun {
    pub fn passed(&self) -> bool {
        self.graph_failures.is_empty() && self.projection_failures.is_empty()
    }
}

fn describe(r: &VerificationReport) -> String {
    r.failures()
        .map(|c| match &c.counterexample {
            Some(at) => format!("{} at {at:?}", c.name),
            None => c.name.clone(),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// One random graph case: graph, tree, full analysis and properties.
pub fn random_graph_case(seed: u64, max_v: usize, max_e: usize) -> Result<(OrientedGraph, VerificationReport)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_connected_multigraph(&mut rng, max_v, max_e);
    let t = random_spanning_tree(&mut rng, &g);
    let a = analyze(&g, &t)?;
    let mut report = a.report.clone();
    report.absorb(graph_properties(&a, &mut rng)?);
    Ok((g, report))
}

/// One random oblique projection case on a space of dimension `2..=8`.
pub fn random_projection_case(seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=8);
    let k = rng.random_range(1..n);
    Ok(verify_appendix_theorems(&random_oblique_projection(n, k, rng.random())?)?.checks)
}

/// Runs `cases` random graph cases and `cases` random projection cases.
/// Case `i` is seeded with `seed + i`, so any failure can be replayed alone.
pub fn verify_random(cases: usize, seed: u64, max_v: usize, max_e: usize) -> RandomRun {
    let mut graph_failures = Vec::new();
    let mut projection_failures = Vec::new();
    let mut report = VerificationReport::new("random suite");
    for i in 0..cases {
        let s = seed.wrapping_add(i as u64);
        match random_graph_case(s, max_v, max_e) {
            Ok((_, r)) if r.passed() => {}
            Ok((g, r)) => graph_failures.push(format!("graph seed {s} ({} vertices, {} edges): {}", g.vertex_count(), g.edge_count(), describe(&r))),
            Err(e) => graph_failures.push(format!("graph seed {s}: {e}")),
        }
        match random_projection_case(s) {
            Ok(r) if r.passed() => {}
            Ok(r) => projection_failures.push(format!("projection seed {s}: {}", describe(&r))),
            Err(e) => projection_failures.push(format!("projection seed {s}: {e}")),
        }
    }
    report.record_with("random graph cases", graph_failures.is_empty(), format!("{} of {cases} failed", graph_failures.len()));
    report.record_with(
        "random projection cases",
        projection_failures.is_empty(),
        format!("{} of {cases} failed", projection_failures.len()),
    );
    RandomRun {
        cases,
        seed,
        graph_failures,
        projection_failures,
        report,
    }
}

/// What the command line prints or serializes for one invocation.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub passed: bool,
    pub checks: Vec<crate::report::Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<String>, report: VerificationReport, data: Option<serde_json::Value>, started: Instant) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            passed: report.passed(),
            checks: report.checks,
            data,
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::default_spanning_tree;

    #[test]
    fn fixtures_analyze_cleanly() {
        for g in [fixtures::g_reference(), fixtures::g_edge(), fixtures::g_tri(), fixtures::g_loop()] {
            let a = analyze(&g, &default_spanning_tree(&g)).unwrap();
            assert!(a.report.passed(), "{}", a.report);
        }
    }

    #[test]
    fn small_random_run() {
        let run = verify_random(10, 99, 6, 10);
        assert!(run.passed(), "{:?} {:?}", run.graph_failures, run.projection_failures);
        let again = verify_random(10, 99, 6, 10);
        assert_eq!(run.report, again.report);
    }

    #[test]
    fn empty_run_passes() {
        assert!(verify_random(0, 1, 8, 14).passed());
    }
}
