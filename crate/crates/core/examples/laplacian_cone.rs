//! Cones a simple graph over a new apex and reads the shifted Laplacian
//! off the star tree.

use cocycle::fixtures;
use cocycle::laplacian::{cone_augment, laplacian, laplacian_shift_check};

fn main() -> cocycle::Result<()> {
    let g = fixtures::g_tri();
    println!("Laplacian =\n{}", laplacian(&g)?);
    let cone = cone_augment(&g)?;
    println!(
        "cone: {} vertices, {} edges, apex {}",
        cone.augmented.vertex_count(),
        cone.augmented.edge_count(),
        cone.apex
    );
    println!("{}", laplacian_shift_check(&g)?);

    // only simple graphs have a cone of this form
    if let Err(e) = cone_augment(&fixtures::g_loop()) {
        println!("loop graph rejected: {e}");
    }
    Ok(())
}
