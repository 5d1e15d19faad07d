//! Kirchhoff-Symanzik matrices and their spectra.
//!
//! `K` is the Gram matrix of the fundamental cycles and `*K` that of the
//! fundamental cocycles. Both are positive definite with eigenvalues at
//! least 1, and they share their spectrum away from 1.

use serde::Serialize;

use crate::basis::{build_basis, BasisBundle, EdgeVector};
use crate::error::Result;
use crate::graph::{enumerate_spanning_trees, OrientedGraph, TreeSelection};
use crate::linalg::{rat, relative_residual, EigenPair, Rational, RationalMatrix};
use crate::poly::{Endpoint, IntPolynomial};
use crate::projections::{sum_outer, ProjectionPair};
use crate::report::VerificationReport;

/// Eigenvalues within this distance of 1 are treated as equal to 1.
pub const UNIT_EIGENVALUE_TOL: f64 = 1e-6;
/// Bound on relative eigenpair residuals.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KsPair {
    /// Cycle Gramian, `|C| × |C|`.
    pub k: RationalMatrix,
    /// Cocycle Gramian, `(|V|-1) × (|V|-1)`.
    pub kstar: RationalMatrix,
}

pub(crate) fn gram(rows: &[EdgeVector]) -> RationalMatrix {
    let n = rows.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = crate::linalg::dot_i64(&rows[i], &rows[j]);
        }
    }
    RationalMatrix::from_i64_rows(&out, n)
}

/// True when every leading principal minor is strictly positive.
pub fn is_positive_definite(m: &RationalMatrix) -> bool {
    (1..=m.rows()).all(|k| {
        m.block(0..k, 0..k)
            .det()
            .map(|d| d > rat(0))
            .unwrap_or(false)
    })
}

/// Builds `K` and `*K` and checks that they are the chord block of `PᵀP`
/// and the cochord block of `QQᵀ` (all other blocks vanishing).
pub fn ks_matrices(b: &BasisBundle, p: &ProjectionPair) -> Result<KsPair> {
    let ks = KsPair {
        k: gram(b.cycles()),
        kstar: gram(b.cocycles()),
    };
    let m = b.cochord_count();
    let n = b.edge_count();
    let mut r = VerificationReport::new("ks");
    r.matrices_equal("P^T P = 0 + K", &(&p.p.transpose() * &p.p), &block_diag(&RationalMatrix::zeros(m, m), &ks.k));
    r.matrices_equal("QQ^T = *K + 0", &(&p.q * &p.q.transpose()), &block_diag(&ks.kstar, &RationalMatrix::zeros(n - m, n - m)));
    r.record("K positive definite", is_positive_definite(&ks.k));
    r.record("*K positive definite", is_positive_definite(&ks.kstar));
    r.into_result()?;
    Ok(ks)
}

pub(crate) fn block_diag(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let (ra, rb) = (a.rows(), b.rows());
    RationalMatrix::from_fn(ra + rb, ra + rb, |i, j| {
        if i < ra && j < ra {
            a.get(i, j).clone()
        } else if i >= ra && j >= ra {
            b.get(i - ra, j - ra).clone()
        } else {
            rat(0)
        }
    })
}

fn block2(
    tl: &RationalMatrix,
    tr: &RationalMatrix,
    bl: &RationalMatrix,
    br: &RationalMatrix,
) -> RationalMatrix {
    let (r1, c1) = (tl.rows(), tl.cols());
    RationalMatrix::from_fn(r1 + bl.rows(), c1 + tr.cols(), |i, j| match (i < r1, j < c1) {
        (true, true) => tl.get(i, j).clone(),
        (true, false) => tr.get(i, j - c1).clone(),
        (false, true) => bl.get(i - r1, j).clone(),
        (false, false) => br.get(i - r1, j - c1).clone(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub char_k: IntPolynomial,
    pub char_kstar: IntPolynomial,
    pub mult1_k: usize,
    pub mult1_kstar: usize,
    /// Characteristic polynomials with every `(x - 1)` factor removed.
    pub reduced_k: IntPolynomial,
    pub reduced_kstar: IntPolynomial,
    /// Distinct real eigenvalues below 1, counted by Sturm sequences.
    pub roots_below_one_k: usize,
    pub roots_below_one_kstar: usize,
    pub eig_k: Vec<EigenPair>,
    pub eig_kstar: Vec<EigenPair>,
}

impl SpectralReport {
    pub fn passed(&self) -> bool {
        self.to_report().passed()
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut r = VerificationReport::new("spectra");
        r.record_with(
            "reduced char polys agree",
            self.reduced_k == self.reduced_kstar,
            format!("{} vs {}", self.reduced_k, self.reduced_kstar),
        );
        r.record_with(
            "no eigenvalue of K below 1",
            self.roots_below_one_k == 0,
            format!("{} roots", self.roots_below_one_k),
        );
        r.record_with(
            "no eigenvalue of *K below 1",
            self.roots_below_one_kstar == 0,
            format!("{} roots", self.roots_below_one_kstar),
        );
        let worst = self
            .eig_k
            .iter()
            .chain(&self.eig_kstar)
            .map(|e| e.residual)
            .fold(0.0, f64::max);
        r.record_with("float eigenpair residuals", worst <= RESIDUAL_TOL, format!("max {worst:e}"));
        r
    }
}

fn roots_below_one(p: &IntPolynomial) -> usize {
    p.to_rational()
        .count_roots_open(&Endpoint::NegInfinity, &Endpoint::At(rat(1)))
}

/// Exact comparison of the spectra of `K` and `*K` modulo the eigenvalue 1,
/// plus float eigenpairs for display.
pub fn spectra_match_mod_one(ks: &KsPair) -> Result<SpectralReport> {
    let char_k = ks.k.char_poly()?;
    let char_kstar = ks.kstar.char_poly()?;
    let (reduced_k, mult1_k) = char_k.strip_root(1);
    let (reduced_kstar, mult1_kstar) = char_kstar.strip_root(1);
    Ok(SpectralReport {
        roots_below_one_k: roots_below_one(&char_k),
        roots_below_one_kstar: roots_below_one(&char_kstar),
        eig_k: ks.k.float_eig(true)?,
        eig_kstar: ks.kstar.float_eig(true)?,
        char_k,
        char_kstar,
        mult1_k,
        mult1_kstar,
        reduced_k,
        reduced_kstar,
    })
}

/// Inverse and superposition forms of the KS matrices, the identity
/// `PᵀP + QQᵀ = I - Ω² = (I + Ω)ᵀ(I + Ω)`, and the change of basis `Λ`
/// with `Λ⁻¹ = *Λᵀ`.
pub fn verify_ks_identities(b: &BasisBundle, p: &ProjectionPair, ks: &KsPair) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("ks-identities");
    let n = b.edge_count();
    let m = b.cochord_count();
    let c = b.chord_count();
    let w = &p.omega_block;
    let wt = w.transpose();
    let k_inv = ks.k.inverse()?;
    let ks_inv = ks.kstar.inverse()?;
    let id = RationalMatrix::identity;

    r.matrices_equal("*K^-1 = 1 - w K^-1 w^T", &ks_inv, &(&id(m) - &(&(w * &k_inv) * &wt)));
    r.matrices_equal("K^-1 = 1 - w^T *K^-1 w", &k_inv, &(&id(c) - &(&(&wt * &ks_inv) * w)));
    r.matrices_equal("*K = 1 + w w^T", &ks.kstar, &(&id(m) + &(w * &wt)));
    r.matrices_equal("K = 1 + w^T w", &ks.k, &(&id(c) + &(&wt * w)));

    let lhs = &(&p.p.transpose() * &p.p) + &(&p.q * &p.q.transpose());
    let omega_sq = &p.omega * &p.omega;
    let i_plus = &id(n) + &p.omega;
    r.matrices_equal("P^T P + QQ^T = I - Omega^2", &lhs, &(&id(n) - &omega_sq));
    r.matrices_equal("I - Omega^2 = (I + Omega)^T (I + Omega)", &(&id(n) - &omega_sq), &(&i_plus.transpose() * &i_plus));
    r.matrices_equal("I - Omega^2 = diag(*K, K)", &(&id(n) - &omega_sq), &block_diag(&ks.kstar, &ks.k));

    let (lambda, lambda_star) = lambda_matrices(b);
    r.matrices_equal("Lambda *Lambda^T = I", &(&lambda * &lambda_star.transpose()), &id(n));
    let neg_w = -w;
    r.matrices_equal(
        "Lambda Lambda^T = [[1, w], [w^T, K]]",
        &(&lambda * &lambda.transpose()),
        &block2(&id(m), w, &wt, &ks.k),
    );
    r.matrices_equal(
        "*Lambda *Lambda^T = [[*K, -w], [-w^T, 1]]",
        &(&lambda_star * &lambda_star.transpose()),
        &block2(&ks.kstar, &neg_w, &neg_w.transpose(), &id(c)),
    );
    Ok(r)
}

/// `Λ = Σ_μ e_μ e_μᵀ + Σ_α e_α c_αᵀ` and `*Λ = Σ_μ e_μ c_μᵀ + Σ_α e_α e_αᵀ`.
pub fn lambda_matrices(b: &BasisBundle) -> (RationalMatrix, RationalMatrix) {
    let n = b.edge_count();
    let m = b.cochord_count();
    let units: Vec<EdgeVector> = (0..n).map(|i| b.unit(i)).collect();
    let lambda_rows: Vec<&EdgeVector> = units[..m].iter().chain(b.cycles()).collect();
    let star_rows: Vec<&EdgeVector> = b.cocycles().iter().chain(&units[m..]).collect();
    (
        sum_outer(n, units.iter().zip(lambda_rows)),
        sum_outer(n, units.iter().zip(star_rows)),
    )
}

/// `det K = det *K = number of spanning trees`, by brute-force enumeration.
pub fn matrix_tree_check(g: &OrientedGraph, ks: &KsPair) -> Result<VerificationReport> {
    let count = enumerate_spanning_trees(g)?;
    let det_k = ks.k.det()?;
    let det_ks = ks.kstar.det()?;
    let trees = Rational::from_integer(count.into());
    let mut r = VerificationReport::new("matrix-tree");
    r.record_with(
        "det K = det *K = #trees",
        det_k == trees && det_ks == trees,
        format!("{det_k}, {det_ks}, {count}"),
    );
    Ok(r)
}

fn residual_of(m: &RationalMatrix, value: f64, v: &[f64]) -> f64 {
    let mf = m.to_f64();
    relative_residual(&mf, mf.norm(), value, v)
}

fn mul_f64(m: &RationalMatrix, v: &[f64]) -> Vec<f64> {
    let mf = m.to_f64();
    (0..mf.nrows())
        .map(|i| (0..mf.ncols()).map(|j| mf[(i, j)] * v[j]).sum())
        .collect()
}

/// `|M w - w| / (|M| |w|)`, the unit-eigenvalue residual of `M` at `w`.
pub(crate) fn fixed_point_residual(m: &RationalMatrix, w: &[f64]) -> f64 {
    residual_of(m, 1.0, w)
}

/// Float check that eigenvectors of `PᵀP` and `QQᵀ` transport to
/// eigenvectors of `K` and `*K`, and that unit-eigenvalue eigenvectors are
/// fixed by the projections and their transposes.
pub fn eigenvector_transport_check(b: &BasisBundle, p: &ProjectionPair, ks: &KsPair) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("eigenvector-transport");
    let m = b.cochord_count();
    let ptp = &p.p.transpose() * &p.p;
    let qqt = &p.q * &p.q.transpose();
    let pt = p.p.transpose();
    let qt = p.q.transpose();

    for (k, e) in ptp.float_eig(true)?.iter().enumerate() {
        let w = &e.vector;
        if e.value > 1.0 + UNIT_EIGENVALUE_TOL {
            let res_k = residual_of(&ks.k, e.value, &w[m..]);
            r.record_with(format!("P^T P #{k}: chord part is a K eigenvector"), res_k <= RESIDUAL_TOL, format!("lambda {:.9}, residual {res_k:e}", e.value));
            let pw = mul_f64(&p.p, w);
            let res_ks = residual_of(&ks.kstar, e.value, &pw[..m]);
            r.record_with(format!("P^T P #{k}: cochord part of Pw is a *K eigenvector"), res_ks <= RESIDUAL_TOL, format!("lambda {:.9}, residual {res_ks:e}", e.value));
        } else if (e.value - 1.0).abs() <= UNIT_EIGENVALUE_TOL {
            let d = fixed_point_residual(&p.p, w).max(fixed_point_residual(&pt, w));
            r.record_with(format!("P^T P #{k}: Pw = P^T w = w"), d <= RESIDUAL_TOL, format!("{d:e}"));
        }
    }
    for (k, e) in qqt.float_eig(true)?.iter().enumerate() {
        let w = &e.vector;
        if e.value > 1.0 + UNIT_EIGENVALUE_TOL {
            let res = residual_of(&ks.kstar, e.value, &w[..m]);
            r.record_with(format!("QQ^T #{k}: cochord part is a *K eigenvector"), res <= RESIDUAL_TOL, format!("lambda {:.9}, residual {res:e}", e.value));
        } else if (e.value - 1.0).abs() <= UNIT_EIGENVALUE_TOL {
            let d = fixed_point_residual(&p.q, w).max(fixed_point_residual(&qt, w));
            r.record_with(format!("QQ^T #{k}: Qw = Q^T w = w"), d <= RESIDUAL_TOL, format!("{d:e}"));
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeChangeReport {
    /// `S[α][α']`: coefficient of new cycle `α` on old chord `α'`.
    pub s: RationalMatrix,
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub det_s: Rational,
    pub k_old: RationalMatrix,
    pub k_new: RationalMatrix,
    pub char_old: IntPolynomial,
    pub char_new: IntPolynomial,
    pub spectra_differ: bool,
    pub checks: VerificationReport,
}

/// Relates the cycle bases of two spanning trees by the unimodular matrix
/// `S` with `K_new = S K_old Sᵀ`.
pub fn tree_change_report(g: &OrientedGraph, t1: &TreeSelection, t2: &TreeSelection) -> Result<TreeChangeReport> {
    let old = build_basis(g, t1)?;
    let new = build_basis(g, t2)?;
    let old_cycles: Vec<EdgeVector> = old.cycles().iter().map(|c| old.to_user_order(c)).collect();
    let new_cycles: Vec<EdgeVector> = new.cycles().iter().map(|c| new.to_user_order(c)).collect();
    let c = old_cycles.len();
    let s = RationalMatrix::from_fn(c, c, |a, a2| rat(new_cycles[a][t1.chords()[a2]]));

    let k_old = gram(old.cycles());
    let k_new = gram(new.cycles());
    let det_s = s.det()?;
    let mut checks = VerificationReport::new("tree-change");
    let old_m = RationalMatrix::from_i64_rows(&old_cycles, g.edge_count());
    let new_m = RationalMatrix::from_i64_rows(&new_cycles, g.edge_count());
    checks.matrices_equal("new cycles = S old cycles", &new_m, &(&s * &old_m));
    checks.matrices_equal("K_new = S K_old S^T", &k_new, &(&(&s * &k_old) * &s.transpose()));
    checks.record_with("|det S| = 1", det_s == rat(1) || det_s == rat(-1), format!("det S = {det_s}"));
    let char_old = k_old.char_poly()?;
    let char_new = k_new.char_poly()?;
    Ok(TreeChangeReport {
        spectra_differ: char_old != char_new,
        s,
        det_s,
        k_old,
        k_new,
        char_old,
        char_new,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::validate_tree;
    use crate::projections::build_projections;

    fn setup(g: &OrientedGraph, tree: &[&str]) -> (BasisBundle, ProjectionPair, KsPair) {
        let t = validate_tree(g, tree).unwrap();
        let b = build_basis(g, &t).unwrap();
        let p = build_projections(&b).unwrap();
        let ks = ks_matrices(&b, &p).unwrap();
        (b, p, ks)
    }

    #[test]
    fn triangle_ks() {
        let (b, p, ks) = setup(&fixtures::g_tri(), &["e1", "e2"]);
        assert_eq!(ks.k.to_i64_rows().unwrap(), vec![vec![3]]);
        assert_eq!(ks.kstar.to_i64_rows().unwrap(), vec![vec![2, 1], vec![1, 2]]);
        let spec = spectra_match_mod_one(&ks).unwrap();
        assert_eq!(spec.char_k.to_string(), "x - 3");
        assert_eq!(spec.char_kstar, IntPolynomial::from_i64(&[3, -4, 1]));
        assert!(spec.passed());
        assert!(verify_ks_identities(&b, &p, &ks).unwrap().passed());
        assert!(matrix_tree_check(b.graph(), &ks).unwrap().passed());
        assert!(eigenvector_transport_check(&b, &p, &ks).unwrap().passed());
    }

    #[test]
    fn edge_ks_degenerates() {
        let (b, p, ks) = setup(&fixtures::g_edge(), &["e1"]);
        assert_eq!(ks.k.rows(), 0);
        assert_eq!(ks.kstar.to_i64_rows().unwrap(), vec![vec![1]]);
        assert!(spectra_match_mod_one(&ks).unwrap().passed());
        assert!(verify_ks_identities(&b, &p, &ks).unwrap().passed());
        assert!(matrix_tree_check(b.graph(), &ks).unwrap().passed());
    }

    #[test]
    fn loop_spectra_reduce_to_constants() {
        let (_, _, ks) = setup(&fixtures::g_loop(), &["e1"]);
        let spec = spectra_match_mod_one(&ks).unwrap();
        assert_eq!(spec.char_k, IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(spec.reduced_k, IntPolynomial::from_i64(&[1]));
        assert_eq!(spec.reduced_kstar, IntPolynomial::from_i64(&[1]));
        assert!(spec.passed());
    }

    #[test]
    fn lambda_inverse_on_triangle() {
        let (b, _, _) = setup(&fixtures::g_tri(), &["e1", "e2"]);
        let (l, ls) = lambda_matrices(&b);
        assert_eq!(&l * &ls.transpose(), RationalMatrix::identity(3));
    }

    #[test]
    fn identical_trees_give_identity_change() {
        let g = fixtures::g_tri();
        let t = validate_tree(&g, &["e1", "e2"]).unwrap();
        let rep = tree_change_report(&g, &t, &t).unwrap();
        assert_eq!(rep.s, RationalMatrix::identity(1));
        assert!(!rep.spectra_differ);
    }

    #[test]
    fn triangle_tree_change() {
        let g = fixtures::g_tri();
        let t1 = validate_tree(&g, &["e1", "e2"]).unwrap();
        let t2 = validate_tree(&g, &["e1", "e3"]).unwrap();
        let rep = tree_change_report(&g, &t1, &t2).unwrap();
        assert!(rep.checks.passed());
        assert_eq!(rep.k_new.det().unwrap(), rat(3));
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let m = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![2, 1]], 2);
        assert!(!is_positive_definite(&m));
        assert!(is_positive_definite(&RationalMatrix::identity(2)));
    }
}
