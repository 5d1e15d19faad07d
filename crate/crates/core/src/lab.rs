//! Complementary oblique projections on an abstract space.
//!
//! For `P² = P` and `Q = I - P`, the nonzero eigenvalues of `PᵀP` are at
//! least 1, those above 1 are shared with `QᵀQ`, and the multiplicities of
//! 0 and 1 are tied together by `mult₀(QᵀQ) = n - r0` and
//! `mult₁(QᵀQ) = 2 r0 + r1 - n`, where `r0`, `r1` count 0 and 1 in the
//! spectrum of `PᵀP`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ks::{RESIDUAL_TOL, UNIT_EIGENVALUE_TOL};
use crate::linalg::{rat, relative_residual, Rational, RationalMatrix};
use crate::poly::{Endpoint, Polynomial};
use crate::projections::ProjectionPair;
use crate::report::VerificationReport;

/// Attempts at drawing an invertible `BA` before giving up.
pub const MAX_RETRIES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObliquePair {
    pub n: usize,
    pub p: RationalMatrix,
    pub q: RationalMatrix,
    pub rank: usize,
}

impl ObliquePair {
    /// Wraps an idempotent `P`.
    pub fn from_projection(p: RationalMatrix) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::NotSquare {
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        if &p * &p != p {
            return Err(Error::Invariant("P is not idempotent".into()));
        }
        let n = p.rows();
        Ok(Self {
            n,
            q: &RationalMatrix::identity(n) - &p,
            rank: p.rank(),
            p,
        })
    }

    /// The cycle/cocycle projections of a graph, viewed abstractly.
    pub fn from_graph(pp: &ProjectionPair) -> Self {
        Self {
            n: pp.p.rows(),
            rank: pp.p.rank(),
            p: pp.p.clone(),
            q: pp.q.clone(),
        }
    }
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> RationalMatrix {
    RationalMatrix::from_fn(rows, cols, |_, _| rat(rng.random_range(-3..=3)))
}

/// `P = A (BA)⁻¹ B` with small random integer `A` (n×k) and `B` (k×n).
pub fn random_oblique_projection(n: usize, k: usize, seed: u64) -> Result<ObliquePair> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::InvalidRank { n, rank: k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let a = random_matrix(&mut rng, n, k);
        let b = random_matrix(&mut rng, k, n);
        if let Ok(inv) = (&b * &a).inverse() {
            let p = &(&a * &inv) * &b;
            return Ok(ObliquePair {
                n,
                q: &RationalMatrix::identity(n) - &p,
                p,
                rank: k,
            });
        }
    }
    Err(Error::GenerationFailed(MAX_RETRIES))
}

#[derive(Clone, Debug, Serialize)]
pub struct LabReport {
    /// Multiplicities of 0 and 1 in the spectrum of `PᵀP`.
    pub r0: usize,
    pub r1: usize,
    pub mult0_qtq: usize,
    pub mult1_qtq: usize,
    /// `PᵀP` and `QᵀQ` characteristic polynomials, as display strings.
    pub char_ptp: String,
    pub char_qtq: String,
    pub checks: VerificationReport,
}

impl LabReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

fn strip01(p: &Polynomial) -> (Polynomial, usize, usize) {
    let (p, m0) = p.strip_root(&rat(0));
    let (p, m1) = p.strip_root(&rat(1));
    (p, m0, m1)
}

fn mul_f64(m: &RationalMatrix, v: &[f64]) -> Vec<f64> {
    let mf = m.to_f64();
    (0..mf.nrows())
        .map(|i| (0..mf.ncols()).map(|j| mf[(i, j)] * v[j]).sum())
        .collect()
}

/// `|M w - w| / (|M| |w|)`, the unit-eigenvalue residual of `M` at `w`.
fn fixed_point_residual(m: &RationalMatrix, w: &[f64]) -> f64 {
    let mf = m.to_f64();
    relative_residual(&mf, mf.norm(), 1.0, w)
}

/// Exact spectral checks plus float eigenvector localization.
pub fn verify_appendix_theorems(pair: &ObliquePair) -> Result<LabReport> {
    let n = pair.n;
    let (p, q) = (&pair.p, &pair.q);
    let pt = p.transpose();
    let qt = q.transpose();
    let ptp = &pt * p;
    let ppt = p * &pt;
    let qtq = &qt * q;
    let char_ptp = ptp.char_poly_rational()?;
    let char_qtq = qtq.char_poly_rational()?;
    let (red_p, r0, r1) = strip01(&char_ptp);
    let (red_q, mult0_qtq, mult1_qtq) = strip01(&char_qtq);

    let mut r = VerificationReport::new("appendix");
    r.matrices_equal("P^2 = P", &(p * p), p);
    let (zero, one) = (Endpoint::At(rat(0)), Endpoint::At(rat(1)));
    let below_p = char_ptp.count_roots_open(&zero, &one);
    let below_q = char_qtq.count_roots_open(&zero, &one);
    r.record_with("no eigenvalue of P^T P in (0,1)", below_p == 0, format!("{below_p} roots"));
    r.record_with("no eigenvalue of Q^T Q in (0,1)", below_q == 0, format!("{below_q} roots"));
    r.record_with("spectra agree away from 0 and 1", red_p == red_q, format!("{red_p} vs {red_q}"));
    r.record_with("mult0(Q^T Q) = n - r0", mult0_qtq + r0 == n, format!("{mult0_qtq} vs {n} - {r0}"));
    r.record_with(
        "mult1(Q^T Q) = 2 r0 + r1 - n",
        (mult1_qtq + n) as i64 == (2 * r0 + r1) as i64,
        format!("{mult1_qtq} vs 2*{r0} + {r1} - {n}"),
    );
    r.record("P^T P and P P^T share a char poly", ppt.char_poly_rational()? == char_ptp);

    let qtq_f = qtq.to_f64();
    let qtq_norm = qtq_f.norm();
    let qtp = &qt * p;
    for (k, e) in ptp.float_eig(true)?.iter().enumerate() {
        let w = &e.vector;
        if (e.value - 1.0).abs() <= UNIT_EIGENVALUE_TOL {
            let d = fixed_point_residual(p, w).max(fixed_point_residual(&pt, w));
            r.record_with(format!("eigenpair #{k}: Pw = P^T w = w"), d <= RESIDUAL_TOL, format!("{d:e}"));
        } else if e.value > 1.0 + UNIT_EIGENVALUE_TOL {
            let u = mul_f64(&qtp, w);
            let res = relative_residual(&qtq_f, qtq_norm, e.value, &u);
            r.record_with(format!("eigenpair #{k}: Q^T P w is a Q^T Q eigenvector"), res <= RESIDUAL_TOL, format!("lambda {:.9}, residual {res:e}", e.value));
        }
    }
    Ok(LabReport {
        r0,
        r1,
        mult0_qtq,
        mult1_qtq,
        char_ptp: char_ptp.to_string(),
        char_qtq: char_qtq.to_string(),
        checks: r,
    })
}

/// Exact trace, which equals the rank for an idempotent.
pub fn trace(pair: &ObliquePair) -> Rational {
    pair.p.trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;
    use crate::fixtures;
    use crate::graph::validate_tree;
    use crate::projections::build_projections;

    #[test]
    fn dimension_one_is_rejected() {
        assert_eq!(random_oblique_projection(1, 1, 0), Err(Error::InvalidRank { n: 1, rank: 1 }));
        assert_eq!(random_oblique_projection(4, 0, 0), Err(Error::InvalidRank { n: 4, rank: 0 }));
    }

    #[test]
    fn rank_one_in_the_plane() {
        for seed in 0..10 {
            let pair = random_oblique_projection(2, 1, seed).unwrap();
            assert_eq!(trace(&pair), rat(1));
            assert!(verify_appendix_theorems(&pair).unwrap().passed());
        }
    }

    #[test]
    fn rank_two_in_five() {
        let pair = random_oblique_projection(5, 2, 11).unwrap();
        assert_eq!(&pair.p * &pair.p, pair.p);
        assert_eq!(pair.p.rank(), 2);
        assert_eq!(random_oblique_projection(5, 2, 11).unwrap(), pair);
    }

    #[test]
    fn reference_graph_pair() {
        let g = fixtures::g_reference();
        let t = validate_tree(&g, &["e1", "e2", "e3"]).unwrap();
        let b = build_basis(&g, &t).unwrap();
        let pair = ObliquePair::from_graph(&build_projections(&b).unwrap());
        let rep = verify_appendix_theorems(&pair).unwrap();
        assert!(rep.passed(), "{}", rep.checks);
        assert_eq!((rep.r0, rep.r1, rep.mult0_qtq, rep.mult1_qtq), (3, 0, 2, 1));
    }

    #[test]
    fn orthogonal_pair() {
        let p = RationalMatrix::from_i64_rows(&[vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 1]], 3);
        let pair = ObliquePair::from_projection(p).unwrap();
        let rep = verify_appendix_theorems(&pair).unwrap();
        assert!(rep.passed());
        assert_eq!((rep.r0, rep.r1), (1, 2));
        assert!(ObliquePair::from_projection(RationalMatrix::from_i64_rows(&[vec![2]], 1)).is_err());
    }
}
