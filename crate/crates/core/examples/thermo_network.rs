//! Currents and forces on the reference graph: entropy production, its
//! split over cochords and chords, and the Kirchhoff laws.

use cocycle::basis::build_basis;
use cocycle::graph::validate_tree;
use cocycle::ks::ks_matrices;
use cocycle::linalg::Rational;
use cocycle::projections::build_projections;
use cocycle::thermo::{entropy_production, kirchhoff_checks, linear_regime_epr, macroscopic_observables, ThermoDocument, ThermoState};
use cocycle::fixtures;

fn show(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn main() -> cocycle::Result<()> {
    let g = fixtures::g_reference();
    let b = build_basis(&g, &validate_tree(&g, &["e1", "e2", "e3"])?)?;
    let p = build_projections(&b)?;
    let ks = ks_matrices(&b, &p)?;

    for (name, json) in [("cycle", fixtures::STATE_C4_JSON), ("single edge", fixtures::STATE_E1_JSON)] {
        let s = ThermoState::from_document(&b, &ThermoDocument::from_json(json)?)?;
        let obs = macroscopic_observables(&b, &s)?;
        let ep = entropy_production(&b, &s)?;
        let k = kirchhoff_checks(&b, &p, &s)?;
        println!("{name}: J_mu = [{}], J_alpha = [{}]", show(&obs.j_mu), show(&obs.j_alpha));
        println!("  sigma = {} = {} + {}; kcl {} kvl {}", ep.sigma, ep.tidal, ep.vortex, k.kcl, k.kvl);
    }

    let j: Vec<Rational> = [1, -2, 3, 0, 5].iter().map(|&x| Rational::from_integer(x.into())).collect();
    let lr = linear_regime_epr(&b, &ks, &j)?;
    println!("unit resistances: <j|j> = {}, via K inverses = {}", lr.direct, lr.decomposed);
    Ok(())
}
