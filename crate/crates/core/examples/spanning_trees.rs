//! det K, det *K and a brute-force count on a few graphs, plus how K
//! changes under a change of spanning tree.

use cocycle::basis::build_basis;
use cocycle::graph::{default_spanning_tree, enumerate_spanning_trees, validate_tree};
use cocycle::ks::{ks_matrices, tree_change_report};
use cocycle::projections::build_projections;
use cocycle::{fixtures, OrientedGraph};

fn wheel(spokes: usize) -> OrientedGraph {
    let rim: Vec<String> = (1..=spokes).map(|i| format!("r{i}")).collect();
    let mut vertices = vec!["hub".to_string()];
    vertices.extend(rim.iter().cloned());
    let mut edges = Vec::new();
    for i in 0..spokes {
        edges.push((format!("s{}", i + 1), "hub".to_string(), rim[i].clone()));
        edges.push((format!("w{}", i + 1), rim[i].clone(), rim[(i + 1) % spokes].clone()));
    }
    OrientedGraph::new(vertices, edges).expect("wheel is connected")
}

fn main() -> cocycle::Result<()> {
    for (name, g) in [("reference", fixtures::g_reference()), ("triangle", fixtures::g_tri()), ("wheel W5", wheel(5))] {
        let t = default_spanning_tree(&g);
        let b = build_basis(&g, &t)?;
        let ks = ks_matrices(&b, &build_projections(&b)?)?;
        println!(
            "{name:>10}: det K = {}, det *K = {}, enumerated = {}",
            ks.k.det()?,
            ks.kstar.det()?,
            enumerate_spanning_trees(&g)?
        );
    }

    let g = fixtures::g_reference();
    let r = tree_change_report(&g, &validate_tree(&g, &["e1", "e2", "e3"])?, &validate_tree(&g, &["e1", "e3", "e4"])?)?;
    println!("\nS =\n{}det S = {}", r.s, r.det_s);
    println!("K before =\n{}K after =\n{}", r.k_old, r.k_new);
    println!("char before {} / after {}", r.char_old, r.char_new);
    Ok(())
}
