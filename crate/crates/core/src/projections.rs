//! Cycle/cocycle oblique projections and the superposition 2-form.
//!
//! In canonical edge order,
//! `P = Σ_α |c_α⟩⟨e_α|` projects onto the cycle space along the cochords and
//! `Q = Σ_μ |e_μ⟩⟨c_μ|` onto the cochord space along the cycles.

use crate::basis::{BasisBundle, EdgeVector};
use crate::error::Result;
use crate::linalg::{rat, RationalMatrix};
use crate::report::VerificationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionPair {
    /// Cycle projection `P`.
    pub p: RationalMatrix,
    /// Cochord projection `Q = I - P`.
    pub q: RationalMatrix,
    /// Antisymmetric 2-form `Ω = P - Pᵀ`.
    pub omega: RationalMatrix,
    /// Superposition matrix `ω`, the cochord × chord block of `Ω`.
    pub omega_block: RationalMatrix,
}

impl ProjectionPair {
    /// True when `P` is an orthogonal projection.
    pub fn is_orthogonal(&self) -> bool {
        self.p.is_symmetric()
    }
}

/// `Σ_k u_k v_kᵀ` over paired integer vectors.
pub(crate) fn sum_outer<'a>(
    n: usize,
    pairs: impl IntoIterator<Item = (&'a EdgeVector, &'a EdgeVector)>,
) -> RationalMatrix {
    let mut acc = vec![vec![0i64; n]; n];
    for (u, v) in pairs {
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc[i][j] += u[i] * v[j];
            }
        }
    }
    RationalMatrix::from_i64_rows(&acc, n)
}

/// Assembles `P`, `Q`, `Ω` and `ω` from the outer products and checks the
/// projection algebra before returning.
pub fn build_projections(b: &BasisBundle) -> Result<ProjectionPair> {
    let pair = assemble(b);
    verify_projection_identities(b, &pair).into_result()?;
    Ok(pair)
}

fn assemble(b: &BasisBundle) -> ProjectionPair {
    let n = b.edge_count();
    let m = b.cochord_count();
    let chord_units: Vec<EdgeVector> = (m..n).map(|a| b.unit(a)).collect();
    let cochord_units: Vec<EdgeVector> = (0..m).map(|u| b.unit(u)).collect();
    let p = sum_outer(n, b.cycles().iter().zip(&chord_units));
    let q = sum_outer(n, cochord_units.iter().zip(b.cocycles()));
    let omega = &p - &p.transpose();
    let omega_block = omega.block(0..m, m..n);
    ProjectionPair {
        p,
        q,
        omega,
        omega_block,
    }
}

/// Idempotence, mutual annihilation, completeness, and the kernel/image
/// characterization `im P = ker Q = cycle space`, `ker P = im Q = cochord
/// space`.
pub fn verify_projection_identities(b: &BasisBundle, pp: &ProjectionPair) -> VerificationReport {
    let mut r = VerificationReport::new("projections");
    let n = b.edge_count();
    let m = b.cochord_count();
    let c = b.chord_count();
    let (p, q) = (&pp.p, &pp.q);
    let zero = RationalMatrix::zeros(n, n);

    r.matrices_equal("P^2 = P", &(p * p), p);
    r.matrices_equal("Q^2 = Q", &(q * q), q);
    r.matrices_equal("PQ = 0", &(p * q), &zero);
    r.matrices_equal("QP = 0", &(q * p), &zero);
    r.matrices_equal("P + Q = I", &(p + q), &RationalMatrix::identity(n));

    let rank_p = p.rank();
    let rank_q = q.rank();
    r.record_with("rank P = |C|", rank_p == c, format!("rank {rank_p}"));
    r.record_with("rank Q = |V|-1", rank_q == m, format!("rank {rank_q}"));

    let inc = b.canonical_incidence();
    r.matrices_equal("im P in cycle space", &(&inc * p), &RationalMatrix::zeros(inc.rows(), n));
    let ker_p = (0..m).find(|&u| p.col(u).iter().any(|x| x != &rat(0)));
    r.record_at("ker P = cochord space", ker_p.map(|u| vec![u]));
    let im_q = (m..n).find(|&a| q.row(a).iter().any(|x| x != &rat(0)));
    r.record_at("im Q = cochord space", im_q.map(|a| vec![a]));
    let cyc = b.cycle_matrix().transpose();
    r.matrices_equal("ker Q = cycle space", &(q * &cyc), &RationalMatrix::zeros(n, c));

    r.record(
        "Omega = 0 iff P orthogonal",
        pp.omega.is_zero() == pp.is_orthogonal(),
    );
    r
}

/// Checks that the cycle and cocycle 2-forms coincide, the mutual
/// projection identity `⟨e_μ|c_α⟩ + ⟨c_μ|e_α⟩ = 0`, and the signed
/// membership rule for `ω`.
pub fn verify_two_form(b: &BasisBundle, pp: &ProjectionPair) -> VerificationReport {
    let mut r = VerificationReport::new("two-form");
    let n = b.edge_count();
    let m = b.cochord_count();
    let chord_units: Vec<EdgeVector> = (m..n).map(|a| b.unit(a)).collect();
    let cochord_units: Vec<EdgeVector> = (0..m).map(|u| b.unit(u)).collect();

    let cycle_form = &sum_outer(n, b.cycles().iter().zip(&chord_units))
        - &sum_outer(n, chord_units.iter().zip(b.cycles()));
    let cocycle_form = &sum_outer(n, b.cocycles().iter().zip(&cochord_units))
        - &sum_outer(n, cochord_units.iter().zip(b.cocycles()));
    r.matrices_equal("cycle 2-form = cocycle 2-form", &cycle_form, &cocycle_form);
    r.matrices_equal("Omega = P - P^T", &pp.omega, &(&pp.p - &pp.p.transpose()));
    r.matrices_equal("Omega = Q^T - Q", &pp.omega, &(&pp.q.transpose() - &pp.q));
    r.matrices_equal("Omega antisymmetric", &pp.omega.transpose(), &-&pp.omega);
    r.matrices_equal("omega is the cochord x chord block", &pp.omega_block, &pp.omega.block(0..m, m..n));
    r.matrices_equal("chord block of Omega vanishes", &pp.omega.block(m..n, m..n), &RationalMatrix::zeros(n - m, n - m));
    r.matrices_equal("cochord block of Omega vanishes", &pp.omega.block(0..m, 0..m), &RationalMatrix::zeros(m, m));

    let mut mutual = None;
    let mut membership = None;
    for u in 0..m {
        for (k, ca) in b.cycles().iter().enumerate() {
            let a = m + k;
            let cu = &b.cocycles()[u];
            if mutual.is_none() && ca[u] + cu[a] != 0 {
                mutual = Some(vec![u, a]);
            }
            // +1 when e_α lies in -c_μ, -1 when it lies in c_μ
            let expected = -cu[a];
            if membership.is_none() && pp.omega.get(u, a) != &rat(expected) {
                membership = Some(vec![u, a]);
            }
        }
    }
    r.record_at("<e_mu|c_alpha> + <c_mu|e_alpha> = 0", mutual);
    r.record_at("Omega_mu_alpha signed membership", membership);
    r
}
