//! Currents and forces on a network, split into tidal and vortex parts.
//!
//! With unit edge vectors `e_i` and the fundamental bases, the macroscopic
//! observables are the vortex currents `J_α = ⟨e_α|j⟩`, the tidal currents
//! `J_μ = ⟨c_μ|j⟩`, the potential drops `F_μ = ⟨e_μ|f⟩` and the
//! circuitations `F_α = ⟨c_α|f⟩`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basis::{BasisBundle, EdgeVector};
use crate::error::{Error, Result};
use crate::ks::{lambda_matrices, KsPair};
use crate::linalg::{dot, parse_rational, rat, serialize_rational, serialize_rationals, Rational, RationalMatrix};
use crate::projections::ProjectionPair;
use crate::report::VerificationReport;

/// On-disk state: rationals keyed by edge id, missing edges read as 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermoDocument {
    #[serde(default)]
    pub currents: BTreeMap<String, String>,
    #[serde(default)]
    pub forces: BTreeMap<String, String>,
}

impl ThermoDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Currents `j` and forces `f` in canonical edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThermoState {
    pub currents: Vec<Rational>,
    pub forces: Vec<Rational>,
}

fn to_rationals(v: &EdgeVector) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

impl ThermoState {
    pub fn new(currents: Vec<Rational>, forces: Vec<Rational>) -> Self {
        Self { currents, forces }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![rat(0); n], vec![rat(0); n])
    }

    /// Both vectors equal to `v`, the unit-resistance regime.
    pub fn symmetric(v: Vec<Rational>) -> Self {
        Self::new(v.clone(), v)
    }

    pub fn from_document(b: &BasisBundle, doc: &ThermoDocument) -> Result<Self> {
        let g = b.graph();
        let read = |m: &BTreeMap<String, String>| -> Result<Vec<Rational>> {
            let mut user = vec![rat(0); g.edge_count()];
            for (id, value) in m {
                let e = g.edge(id).ok_or_else(|| Error::UnknownEdge(id.clone()))?;
                user[e] = parse_rational(value)?;
            }
            Ok(b.to_canonical_order(&user))
        };
        Ok(Self::new(read(&doc.currents)?, read(&doc.forces)?))
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.currents.len() != n || self.forces.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "state has {} currents and {} forces for {n} edges",
                self.currents.len(),
                self.forces.len()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MacroObservables {
    /// Tidal currents, one per cochord.
    #[serde(serialize_with = "serialize_rationals")]
    pub j_mu: Vec<Rational>,
    /// Vortex currents, one per chord.
    #[serde(serialize_with = "serialize_rationals")]
    pub j_alpha: Vec<Rational>,
    /// Potential drops, one per cochord.
    #[serde(serialize_with = "serialize_rationals")]
    pub f_mu: Vec<Rational>,
    /// Circuitations, one per chord.
    #[serde(serialize_with = "serialize_rationals")]
    pub f_alpha: Vec<Rational>,
}

pub fn macroscopic_observables(b: &BasisBundle, s: &ThermoState) -> Result<MacroObservables> {
    s.check_len(b.edge_count())?;
    let m = b.cochord_count();
    let (j, f) = (&s.currents, &s.forces);
    Ok(MacroObservables {
        j_mu: b.cocycles().iter().map(|c| dot(&to_rationals(c), j)).collect(),
        j_alpha: j[m..].to_vec(),
        f_mu: f[..m].to_vec(),
        f_alpha: b.cycles().iter().map(|c| dot(&to_rationals(c), f)).collect(),
    })
}

/// Rebuilds `j = Σ J_μ e_μ + Σ J_α c_α` and `f = Σ F_μ c_μ + Σ F_α e_α`.
pub fn reconstruct(b: &BasisBundle, obs: &MacroObservables) -> (Vec<Rational>, Vec<Rational>) {
    let n = b.edge_count();
    let m = b.cochord_count();
    let mut j = vec![rat(0); n];
    let mut f = vec![rat(0); n];
    for (mu, c) in b.cocycles().iter().enumerate() {
        j[mu] += &obs.j_mu[mu];
        for i in 0..n {
            f[i] += &obs.f_mu[mu] * rat(c[i]);
        }
    }
    for (a, c) in b.cycles().iter().enumerate() {
        f[m + a] += &obs.f_alpha[a];
        for i in 0..n {
            j[i] += &obs.j_alpha[a] * rat(c[i]);
        }
    }
    (j, f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KirchhoffFlags {
    /// `Q j = 0`.
    pub kcl: bool,
    /// `Pᵀ f = 0`.
    pub kvl: bool,
    pub equilibrium: bool,
}

pub fn kirchhoff_checks(b: &BasisBundle, p: &ProjectionPair, s: &ThermoState) -> Result<KirchhoffFlags> {
    s.check_len(b.edge_count())?;
    let kcl = p.q.mul_vec(&s.currents).iter().all(|x| x == &rat(0));
    let kvl = p.p.transpose().mul_vec(&s.forces).iter().all(|x| x == &rat(0));
    Ok(KirchhoffFlags {
        kcl,
        kvl,
        equilibrium: kcl && kvl,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntropyProduction {
    #[serde(serialize_with = "serialize_rational")]
    pub sigma: Rational,
    /// `Σ_μ F_μ J_μ`.
    #[serde(serialize_with = "serialize_rational")]
    pub tidal: Rational,
    /// `Σ_α F_α J_α`.
    #[serde(serialize_with = "serialize_rational")]
    pub vortex: Rational,
}

/// `σ = ⟨f|j⟩` and its split into tidal and vortex parts.
pub fn entropy_production(b: &BasisBundle, s: &ThermoState) -> Result<EntropyProduction> {
    let obs = macroscopic_observables(b, s)?;
    let sigma = dot(&s.forces, &s.currents);
    let tidal = dot(&obs.f_mu, &obs.j_mu);
    let vortex = dot(&obs.f_alpha, &obs.j_alpha);
    if sigma != &tidal + &vortex {
        return Err(Error::Invariant(format!("sigma {sigma} != {tidal} + {vortex}")));
    }
    Ok(EntropyProduction { sigma, tidal, vortex })
}

fn quadratic_form(m: &RationalMatrix, v: &[Rational]) -> Rational {
    dot(v, &m.mul_vec(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearRegime {
    /// `⟨j|j⟩`.
    #[serde(serialize_with = "serialize_rational")]
    pub direct: Rational,
    /// `J·*K⁻¹·J + F·K⁻¹·F`.
    #[serde(serialize_with = "serialize_rational")]
    pub decomposed: Rational,
}

impl LinearRegime {
    pub fn passed(&self) -> bool {
        self.direct == self.decomposed
    }
}

/// Entropy production at unit resistances (`f = j`) in terms of the
/// inverse KS matrices.
pub fn linear_regime_epr(b: &BasisBundle, ks: &KsPair, j: &[Rational]) -> Result<LinearRegime> {
    let obs = macroscopic_observables(b, &ThermoState::symmetric(j.to_vec()))?;
    let decomposed = quadratic_form(&ks.kstar.inverse()?, &obs.j_mu) + quadratic_form(&ks.k.inverse()?, &obs.f_alpha);
    Ok(LinearRegime {
        direct: dot(j, j),
        decomposed,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalProjectors {
    pub p_prime: RationalMatrix,
    pub q_prime: RationalMatrix,
    pub checks: VerificationReport,
}

/// `P′ = Cᵀ K⁻¹ C` and `Q′ = C*ᵀ *K⁻¹ C*`, the orthogonal projections onto
/// the cycle and cocycle spaces.
pub fn orthogonal_projectors(b: &BasisBundle, ks: &KsPair) -> Result<OrthogonalProjectors> {
    let c = b.cycle_matrix();
    let cs = b.cocycle_matrix();
    let p_prime = &(&c.transpose() * &ks.k.inverse()?) * &c;
    let q_prime = &(&cs.transpose() * &ks.kstar.inverse()?) * &cs;
    let mut r = VerificationReport::new("orthogonal-projectors");
    r.matrices_equal("P'^2 = P'", &(&p_prime * &p_prime), &p_prime);
    r.matrices_equal("Q'^2 = Q'", &(&q_prime * &q_prime), &q_prime);
    r.matrices_equal("P'^T = P'", &p_prime.transpose(), &p_prime);
    r.matrices_equal("Q'^T = Q'", &q_prime.transpose(), &q_prime);
    r.matrices_equal("P' + Q' = I", &(&p_prime + &q_prime), &RationalMatrix::identity(b.edge_count()));
    Ok(OrthogonalProjectors {
        p_prime,
        q_prime,
        checks: r,
    })
}

/// `Λ *Λᵀ = I`: the observables `(J_μ, J_α)` and `(F_μ, F_α)` are dual
/// coordinates.
pub fn verify_lambda_duality(b: &BasisBundle) -> VerificationReport {
    let (lambda, lambda_star) = lambda_matrices(b);
    let mut r = VerificationReport::new("lambda-duality");
    r.matrices_equal(
        "Lambda *Lambda^T = I",
        &(&lambda * &lambda_star.transpose()),
        &RationalMatrix::identity(b.edge_count()),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;
    use crate::fixtures;
    use crate::graph::validate_tree;
    use crate::ks::ks_matrices;
    use crate::projections::build_projections;

    fn reference() -> (BasisBundle, ProjectionPair, KsPair) {
        let g = fixtures::g_reference();
        let t = validate_tree(&g, &["e1", "e2", "e3"]).unwrap();
        let b = build_basis(&g, &t).unwrap();
        let p = build_projections(&b).unwrap();
        let ks = ks_matrices(&b, &p).unwrap();
        (b, p, ks)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn cycle_state_observables() {
        let (b, p, ks) = reference();
        let doc = ThermoDocument::from_json(fixtures::STATE_C4_JSON).unwrap();
        let s = ThermoState::from_document(&b, &doc).unwrap();
        assert_eq!(s.currents, ints(&[0, 1, 1, 1, 0]));
        let obs = macroscopic_observables(&b, &s).unwrap();
        assert_eq!(obs.j_mu, ints(&[0, 0, 0]));
        assert_eq!(obs.j_alpha, ints(&[1, 0]));
        assert_eq!(obs.f_alpha, ints(&[3, -1]));
        assert_eq!(obs.f_mu, ints(&[0, 1, 1]));
        let k = kirchhoff_checks(&b, &p, &s).unwrap();
        assert!(k.kcl);
        let ep = entropy_production(&b, &s).unwrap();
        assert_eq!((ep.sigma, ep.vortex, ep.tidal), (rat(3), rat(3), rat(0)));
        let lr = linear_regime_epr(&b, &ks, &s.currents).unwrap();
        assert_eq!(lr.direct, rat(3));
        assert!(lr.passed());
        assert_eq!(reconstruct(&b, &obs), (s.currents.clone(), s.forces.clone()));
    }

    #[test]
    fn unit_edge_state() {
        let (b, p, ks) = reference();
        let doc = ThermoDocument::from_json(fixtures::STATE_E1_JSON).unwrap();
        let s = ThermoState::from_document(&b, &doc).unwrap();
        assert!(!kirchhoff_checks(&b, &p, &s).unwrap().kcl);
        assert_eq!(entropy_production(&b, &s).unwrap().sigma, rat(1));
        let lr = linear_regime_epr(&b, &ks, &s.currents).unwrap();
        assert_eq!((lr.direct.clone(), lr.passed()), (rat(1), true));
    }

    #[test]
    fn cocycle_force_is_conservative() {
        let (b, p, _) = reference();
        let c1 = ints(&[1, 0, 0, 0, -1]);
        let c4 = ints(&[0, 1, 1, 1, 0]);
        // canonical order equals user order for this tree
        let s = ThermoState::new(c4, c1);
        let obs = macroscopic_observables(&b, &s).unwrap();
        assert_eq!(obs.f_alpha, ints(&[0, 0]));
        let k = kirchhoff_checks(&b, &p, &s).unwrap();
        assert!(k.kvl && k.kcl && k.equilibrium);
        assert_eq!(entropy_production(&b, &s).unwrap().sigma, rat(0));
    }

    #[test]
    fn zero_state() {
        let (b, _, ks) = reference();
        let doc = ThermoDocument::from_json(fixtures::STATE_ZERO_JSON).unwrap();
        let s = ThermoState::from_document(&b, &doc).unwrap();
        assert_eq!(s, ThermoState::zero(5));
        let ep = entropy_production(&b, &s).unwrap();
        assert_eq!((ep.sigma, ep.tidal, ep.vortex), (rat(0), rat(0), rat(0)));
        assert!(linear_regime_epr(&b, &ks, &s.currents).unwrap().passed());
    }

    #[test]
    fn bad_states() {
        let (b, _, _) = reference();
        let doc = ThermoDocument::from_json(r#"{"currents": {"e9": "1"}}"#).unwrap();
        assert_eq!(ThermoState::from_document(&b, &doc), Err(Error::UnknownEdge("e9".into())));
        let short = ThermoState::zero(3);
        assert!(matches!(macroscopic_observables(&b, &short), Err(Error::DimensionMismatch(_))));
        assert!(ThermoDocument::from_json(r#"{"current": {}}"#).is_err());
    }

    #[test]
    fn projectors_and_lambda() {
        let (b, _, ks) = reference();
        let op = orthogonal_projectors(&b, &ks).unwrap();
        assert!(op.checks.passed(), "{}", op.checks);
        assert!(verify_lambda_duality(&b).passed());

        let g = fixtures::g_loop();
        let t = validate_tree(&g, &["e1"]).unwrap();
        let b = build_basis(&g, &t).unwrap();
        let p = build_projections(&b).unwrap();
        let ks = ks_matrices(&b, &p).unwrap();
        let op = orthogonal_projectors(&b, &ks).unwrap();
        assert_eq!(op.p_prime, p.p);
        assert_eq!(op.q_prime, p.q);
    }
}
