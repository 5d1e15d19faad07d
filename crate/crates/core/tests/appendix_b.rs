//! The five-edge worked example, end to end, against hand-computed values.

use cocycle::basis::build_basis;
use cocycle::fixtures;
use cocycle::graph::{enumerate_spanning_trees, validate_tree};
use cocycle::ks::{ks_matrices, tree_change_report};
use cocycle::linalg::{rat, RationalMatrix};
use cocycle::poly::IntPolynomial;
use cocycle::projections::build_projections;
use cocycle::suite::analyze;
use cocycle::thermo::{entropy_production, kirchhoff_checks, ThermoDocument, ThermoState};

fn m(rows: &[&[i64]]) -> RationalMatrix {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    RationalMatrix::from_i64_rows(&rows, rows[0].len())
}

#[test]
fn full_analysis_is_clean() {
    let g = fixtures::g_reference();
    let t = validate_tree(&g, &["e1", "e2", "e3"]).unwrap();
    let a = analyze(&g, &t).unwrap();
    assert!(a.report.passed(), "{}", a.report);
    assert_eq!(a.ks.k, m(&[&[3, -1], &[-1, 3]]));
    assert_eq!(a.ks.kstar.det().unwrap(), rat(8));
}

#[test]
fn every_spanning_tree_gives_the_same_determinant() {
    let g = fixtures::g_reference();
    let ids = ["e1", "e2", "e3", "e4", "e5"];
    let mut trees = 0;
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                let Ok(t) = validate_tree(&g, &[ids[a], ids[b], ids[c]]) else {
                    continue;
                };
                trees += 1;
                let basis = build_basis(&g, &t).unwrap();
                let ks = ks_matrices(&basis, &build_projections(&basis).unwrap()).unwrap();
                assert_eq!(ks.k.det().unwrap(), rat(8));
                assert_eq!(ks.kstar.det().unwrap(), rat(8));
            }
        }
    }
    assert_eq!(trees, 8);
    assert_eq!(enumerate_spanning_trees(&g).unwrap(), 8);
}

#[test]
fn changing_the_tree_conjugates_k() {
    let g = fixtures::g_reference();
    let t1 = validate_tree(&g, &["e1", "e2", "e3"]).unwrap();
    let t2 = validate_tree(&g, &["e1", "e3", "e4"]).unwrap();
    let r = tree_change_report(&g, &t1, &t2).unwrap();
    assert!(r.checks.passed(), "{}", r.checks);
    let s = m(&[&[1, 0], &[1, 1]]);
    assert_eq!(r.s, s);
    assert_eq!(r.det_s, rat(1));
    // by hand: [[1,0],[1,1]] [[3,-1],[-1,3]] [[1,1],[0,1]]
    let hand = m(&[&[3, 2], &[2, 4]]);
    assert_eq!(r.k_old, m(&[&[3, -1], &[-1, 3]]));
    assert_eq!(r.k_new, hand);
    assert_eq!(&(&s * &r.k_old) * &s.transpose(), hand);
    // same determinant, different spectrum
    assert_eq!(r.char_old, IntPolynomial::from_i64(&[8, -6, 1]));
    assert_eq!(r.char_new, IntPolynomial::from_i64(&[8, -7, 1]));
    assert!(r.spectra_differ);
}

fn state(json: &str) -> (cocycle::BasisBundle, cocycle::ProjectionPair, ThermoState) {
    let g = fixtures::g_reference();
    let b = build_basis(&g, &validate_tree(&g, &["e1", "e2", "e3"]).unwrap()).unwrap();
    let p = build_projections(&b).unwrap();
    let s = ThermoState::from_document(&b, &ThermoDocument::from_json(json).unwrap()).unwrap();
    (b, p, s)
}

#[test]
fn cycle_current_is_all_vortex() {
    let (b, p, s) = state(fixtures::STATE_C4_JSON);
    let ep = entropy_production(&b, &s).unwrap();
    assert_eq!((ep.sigma, ep.tidal, ep.vortex), (rat(3), rat(0), rat(3)));
    let k = kirchhoff_checks(&b, &p, &s).unwrap();
    assert!(k.kcl);
    assert!(!k.equilibrium);
}

#[test]
fn single_edge_state() {
    let (b, p, s) = state(fixtures::STATE_E1_JSON);
    let ep = entropy_production(&b, &s).unwrap();
    assert_eq!(ep.sigma, rat(1));
    assert_eq!(&ep.tidal + &ep.vortex, rat(1));
    // a lone current on e1 piles up charge at its endpoints
    assert!(!kirchhoff_checks(&b, &p, &s).unwrap().kcl);
}

#[test]
fn zero_state_is_equilibrium() {
    let (b, p, s) = state(fixtures::STATE_ZERO_JSON);
    assert_eq!(entropy_production(&b, &s).unwrap().sigma, rat(0));
    assert!(kirchhoff_checks(&b, &p, &s).unwrap().equilibrium);
}
