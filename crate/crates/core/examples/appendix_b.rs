//! Runs the full analysis on the five-edge, three-vertex reference graph
//! and prints the projections and KS matrices.

use cocycle::fixtures;
use cocycle::graph::validate_tree;
use cocycle::suite::analyze;

fn main() -> cocycle::Result<()> {
    let g = fixtures::g_reference();
    let t = validate_tree(&g, &["e1", "e2", "e3"])?;
    let a = analyze(&g, &t)?;
    println!("edge order: {}", t.permutation_ids(&g).join(" "));
    println!("P =\n{}", a.projections.p);
    println!("Omega =\n{}", a.projections.omega);
    println!("K =\n{}", a.ks.k);
    println!("*K =\n{}", a.ks.kstar);
    println!("char K = {}", a.spectra.char_k);
    println!("char *K = {}", a.spectra.char_kstar);
    println!("{}", a.report);
    Ok(())
}
