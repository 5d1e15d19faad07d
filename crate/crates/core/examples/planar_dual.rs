//! Traces faces from a rotation system, builds the dual graph and checks
//! that the projections swap roles.

use cocycle::basis::build_basis;
use cocycle::duality::{dual_graph, dual_of_dual_check, verify_duality, PlanarEmbedding};
use cocycle::fixtures;
use cocycle::graph::{load_graph, validate_tree};
use cocycle::projections::build_projections;

fn main() -> cocycle::Result<()> {
    let doc = fixtures::reference_document();
    let g = load_graph(&doc)?;
    let t = validate_tree(&g, &["e1", "e2", "e3"])?;
    let emb = PlanarEmbedding::from_document(&g, &doc)?;
    let d = dual_graph(&g, &emb, &t)?;
    for (i, f) in d.faces.iter().enumerate() {
        println!("f{}: {}", i + 1, f.join(" "));
    }
    println!("dual:\n{}", d.to_document().to_json());

    let b = build_basis(&g, &t)?;
    let p = build_projections(&b)?;
    let out = verify_duality(&b, &p, &d)?;
    println!("{}", out.checks);
    println!("{}", dual_of_dual_check(&g, &emb, &t)?);
    Ok(())
}
