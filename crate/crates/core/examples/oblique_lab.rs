//! Random oblique projections: the spectra of PᵀP and QᵀQ agree above 1
//! and the multiplicities of 0 and 1 balance.

use cocycle::lab::{random_oblique_projection, verify_appendix_theorems};

fn main() -> cocycle::Result<()> {
    for (n, k, seed) in [(2, 1, 0), (4, 2, 7), (6, 2, 42), (8, 5, 2024)] {
        let pair = random_oblique_projection(n, k, seed)?;
        let rep = verify_appendix_theorems(&pair)?;
        println!("n = {n}, rank {k}, seed {seed}");
        println!("  char P^T P = {}", rep.char_ptp);
        println!("  char Q^T Q = {}", rep.char_qtq);
        println!(
            "  r0 = {}, r1 = {}, mult0(Q^T Q) = {}, mult1(Q^T Q) = {}, {}",
            rep.r0,
            rep.r1,
            rep.mult0_qtq,
            rep.mult1_qtq,
            if rep.passed() { "all checks pass" } else { "CHECK FAILED" }
        );
    }
    Ok(())
}
