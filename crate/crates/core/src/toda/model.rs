//! Canonical decoupled metrics and the closed-form model metrics
//! ξ_{β,S,t}(z) = −β log|z| − u_S log(−log|z|^{2t}).

use super::grid::{DomainSpec, Grid};
use super::{BoundarySpec, HiggsField, LaurentPoly, SolverOpts, TodaProblem};
use crate::chevalley::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::scalar::rat_to_f64;
use crate::sl2::{compute_triple, PiQ, SL2Triple};
use crate::split::CyclicElement;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// The canonical decoupled value ξ_can for constant cyclic coefficients b:
/// the unique solution of (αᵢ + ψ)(ξ) = ½(log ψᵢ + 2log|b₋ψ| − 2log|bᵢ|),
/// equivalently |bᵢ|²e^{2αᵢ(ξ)} = ψᵢ|b₋ψ|²e^{−2ψ(ξ)} for all i.
///
/// The coefficient matrix {αᵢ+ψ} is nonsingular: a vanishing combination
/// Σλᵢ(αᵢ+ψ) = 0 forces λ = 0 since {αᵢ} is a basis and Σψᵢ > 0.
pub fn canonical_xi(lie: &LieAlgebra, b: &CyclicElement) -> Result<Vec<f64>> {
    if !b.is_cyclic() {
        return Err(Error::input(
            "canonical metric requires a cyclic coefficient vector",
        ));
    }
    let rs = &lie.rs;
    let l = rs.rank();
    let kg = rs.killing_gram_f64();
    // row i: (c_{αᵢ} + c_ψ)ᵀ K
    let mut a = DMatrix::zeros(l, l);
    for i in 0..l {
        for j in 0..l {
            let mut coeff = kg[i][j];
            for (m, kk) in kg.iter().enumerate() {
                coeff += rs.psi[m] as f64 * kk[j];
            }
            // note: the ψ part is independent of i only through c_ψ
            a[(i, j)] = coeff;
        }
    }
    let bpsi = b.b[l].norm();
    let rhs = DVector::from_fn(l, |i, _| {
        0.5 * ((rs.psi[i] as f64).ln() + 2.0 * bpsi.ln() - 2.0 * b.b[i].norm().ln())
    });
    let xi = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::numeric("singular canonical system"))?;
    Ok(xi.iter().cloned().collect())
}

/// Residual of the decoupling identity |bᵢ|²e^{2αᵢ(ξ)} − ψᵢ|b₋ψ|²e^{−2ψ(ξ)}
/// at a candidate ξ (sup over i).
pub fn canonical_residual(lie: &LieAlgebra, b: &CyclicElement, xi: &[f64]) -> f64 {
    let rs = &lie.rs;
    let l = rs.rank();
    let psi_val = rs.root_value_f64(&rs.highest, xi);
    let bpsi_sq = b.b[l].norm_sqr();
    let mut sup = 0.0f64;
    for i in 0..l {
        let ai = rs.root_value_f64(&crate::rootsys::Root::simple(l, i), xi);
        let lhs = b.b[i].norm_sqr() * (2.0 * ai).exp();
        let rhs = rs.psi[i] as f64 * bpsi_sq * (-2.0 * psi_val).exp();
        sup = sup.max((lhs - rhs).abs());
    }
    sup
}

/// The model metric ξ_{β,S,t} and its Higgs data
/// θ = t·Σ_{φ∈S} β_φ z^{m(φ)} v_φ dz/z.
#[derive(Clone, Debug)]
pub struct ModelMetric {
    pub beta_sharp: Vec<f64>,
    pub subset: Vec<PiQ>,
    pub orders: Vec<i64>,
    pub t: f64,
    pub triple: SL2Triple,
    u_sharp: Vec<f64>,
}

impl ModelMetric {
    /// Validates β(φ) = m(φ) for φ ∈ S and t > 0.
    pub fn new(
        lie: &LieAlgebra,
        beta_sharp: Vec<f64>,
        subset: Vec<PiQ>,
        orders: Vec<i64>,
        t: f64,
    ) -> Result<ModelMetric> {
        if t <= 0.0 {
            return Err(Error::input("model metric requires t > 0"));
        }
        if orders.len() != subset.len() {
            return Err(Error::input("orders must match the subset length"));
        }
        let triple = compute_triple(lie, &subset)?;
        for (p, &m) in subset.iter().zip(&orders) {
            let val = lie.rs.root_value_f64(&p.root(&lie.rs), &beta_sharp);
            if (val - m as f64).abs() > 1e-9 {
                return Err(Error::input(format!(
                    "beta({}) = {} does not match the order {}",
                    p, val, m
                )));
            }
        }
        let u_sharp = triple.u_sharp.iter().map(rat_to_f64).collect();
        Ok(ModelMetric {
            beta_sharp,
            subset,
            orders,
            t,
            triple,
            u_sharp,
        })
    }

    /// ξ(s) = −β·s − u_S·log(−2ts), defined for s = log|z| < 0.
    pub fn xi_at_s(&self, s: f64) -> Result<Vec<f64>> {
        if s >= 0.0 {
            return Err(Error::input("model metric lives on |z| < 1 (s < 0)"));
        }
        let lg = (-2.0 * self.t * s).ln();
        Ok(self
            .beta_sharp
            .iter()
            .zip(&self.u_sharp)
            .map(|(b, u)| -b * s - u * lg)
            .collect())
    }

    /// Higgs coefficients against dz: f_φ = β_φ z^{m(φ)−1} on S, zero off S.
    pub fn higgs(&self, lie: &LieAlgebra) -> HiggsField {
        let l = lie.rank();
        let mut f = vec![LaurentPoly::zero(); l + 1];
        for ((p, &m), &beta) in self.subset.iter().zip(&self.orders).zip(&self.triple.beta) {
            let slot = match p {
                PiQ::Simple(i) => *i,
                PiQ::MinusPsi => l,
            };
            f[slot] = LaurentPoly::monomial(m - 1, C64::new(beta, 0.0));
        }
        HiggsField::new(f)
    }

    /// Evaluate the model field on a grid (annulus or line inside |z| < 1).
    pub fn field_on(&self, grid: &Grid) -> Result<Vec<f64>> {
        let l = self.beta_sharp.len();
        let mut xi = vec![0.0; grid.nnodes() * l];
        for node in 0..grid.nnodes() {
            let (i1, _) = grid.coords(node);
            let s = match grid.domain {
                DomainSpec::Rectangle { .. } => {
                    return Err(Error::input("model metric evaluation needs s = log|z| grids"))
                }
                _ => grid.c1[i1],
            };
            let v = self.xi_at_s(s)?;
            xi[node * l..(node + 1) * l].copy_from_slice(&v);
        }
        Ok(xi)
    }

    /// The Toda problem solved exactly by this model on a given domain, with
    /// the model's own trace on the boundary.
    pub fn problem(&self, lie: &LieAlgebra, domain: DomainSpec, solver: SolverOpts) -> Result<TodaProblem> {
        let grid = Grid::new(&domain)?;
        let xi = self.field_on(&grid)?;
        let l = self.beta_sharp.len();
        let boundary = BoundarySpec::Explicit(
            grid.boundary_nodes()
                .into_iter()
                .map(|n| (n, xi[n * l..(n + 1) * l].to_vec()))
                .collect(),
        );
        Ok(TodaProblem {
            domain,
            higgs: self.higgs(lie),
            boundary,
            scale_t: self.t,
            solver,
        })
    }

    /// |e_φ|²_h = e^{2φ(ξ)} against the closed form
    /// |z|^{−2β(φ)}·(−log|z|^{2t})^{−2φ(u_S)} for φ ∈ S, at s = log|z|.
    pub fn norm_sq_identity_residual(&self, lie: &LieAlgebra, s: f64) -> Result<f64> {
        let xi = self.xi_at_s(s)?;
        let mut sup = 0.0f64;
        for p in &self.subset {
            let r = p.root(&lie.rs);
            let phi_xi = lie.rs.root_value_f64(&r, &xi);
            let lhs = (2.0 * phi_xi).exp();
            let beta_phi = lie.rs.root_value_f64(&r, &self.beta_sharp);
            let u_phi = lie.rs.root_value_f64(&r, &self.u_sharp);
            let rhs = (-2.0 * beta_phi * s).exp() * (-2.0 * self.t * s).powf(-2.0 * u_phi);
            sup = sup.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
        Ok(sup)
    }
}

/// Residuals of the model metric on a family of grids, with the dyadic
/// convergence orders log₂(rᵢ/rᵢ₊₁).
#[derive(Debug, Clone, Serialize)]
pub struct ModelCert {
    pub grids: Vec<(usize, usize)>,
    pub residuals: Vec<f64>,
    pub orders: Vec<f64>,
}

/// Evaluate the discrete Hitchin residual of the closed-form model field on
/// annulus grids of increasing resolution.
pub fn certify_model(
    lie: &LieAlgebra,
    model: &ModelMetric,
    s0: f64,
    s1: f64,
    grids: &[(usize, usize)],
) -> Result<ModelCert> {
    if s1 >= 0.0 {
        return Err(Error::input("model certification domain must satisfy |z| < 1"));
    }
    let mut residuals = Vec::new();
    for &(ns, ntheta) in grids {
        let domain = DomainSpec::Annulus { s0, s1, ns, ntheta };
        let problem = model.problem(lie, domain.clone(), SolverOpts::default())?;
        let grid = Grid::new(&domain)?;
        let xi = model.field_on(&grid)?;
        let (_, sup) = super::toda_residual(lie, &problem, &xi)?;
        residuals.push(sup);
    }
    let orders = residuals
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .collect();
    Ok(ModelCert {
        grids: grids.to_vec(),
        residuals,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::build_lie_algebra;
    use crate::rootsys::build_root_system;

    fn lie(s: &str) -> LieAlgebra {
        build_lie_algebra(build_root_system(s.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let a1 = lie("A1");
        // b = (2, 1/2): α(ξ_can) = −log 2
        let b = CyclicElement::from_reals(&[2.0, 0.5]);
        let xi = canonical_xi(&a1, &b).unwrap();
        let aval = a1.rs.root_value_f64(&a1.rs.highest, &xi);
        assert!((aval + 2.0f64.ln()).abs() < 1e-13);
        assert!(canonical_residual(&a1, &b, &xi) < 1e-14);
        // decoupled already: ξ_can = 0
        let b = CyclicElement::from_reals(&[1.0, 1.0]);
        let xi = canonical_xi(&a1, &b).unwrap();
        assert!(xi[0].abs() < 1e-14);

        let a2 = lie("A2");
        let b = CyclicElement::from_reals(&[1.0, 1.0, std::f64::consts::E]);
        let xi = canonical_xi(&a2, &b).unwrap();
        assert!(canonical_residual(&a2, &b, &xi) < 1e-13);
        // non-cyclic rejected
        assert!(canonical_xi(&a2, &CyclicElement::from_reals(&[1.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn model_radial_and_norm_identity() {
        let a1 = lie("A1");
        let model = ModelMetric::new(&a1, vec![0.0], vec![PiQ::Simple(0)], vec![0], 1.0).unwrap();
        // formula is radial: equal values across θ by construction; norm
        // identity holds pointwise
        assert!(model.norm_sq_identity_residual(&a1, 0.25f64.ln()).unwrap() < 1e-12);
        let xi = model.xi_at_s(0.25f64.ln()).unwrap();
        assert!(xi[0].is_finite());
        // domain touching |z| = 1 rejected
        assert!(model.xi_at_s(0.0).is_err());
    }

    #[test]
    fn model_beta_order_mismatch_rejected() {
        let a2 = lie("A2");
        // β = −x₀ has αᵢ(β) = −1; orders (0,0) mismatch
        let beta = a2.rs.eps_to_sharp(&[-1.0, -1.0]);
        assert!(ModelMetric::new(
            &a2,
            beta.clone(),
            vec![PiQ::Simple(0), PiQ::Simple(1)],
            vec![0, 0],
            1.0
        )
        .is_err());
        assert!(ModelMetric::new(
            &a2,
            beta,
            vec![PiQ::Simple(0), PiQ::Simple(1)],
            vec![-1, -1],
            1.0
        )
        .is_ok());
    }

    #[test]
    fn model_residual_second_order() {
        let a1 = lie("A1");
        let model = ModelMetric::new(&a1, vec![0.0], vec![PiQ::Simple(0)], vec![0], 1.0).unwrap();
        let s0 = 0.1f64.ln();
        let s1 = 0.5f64.ln();
        let cert = certify_model(&a1, &model, s0, s1, &[(16, 16), (32, 32), (64, 64)]).unwrap();
        for o in &cert.orders {
            assert!((1.8..=2.2).contains(o), "orders = {:?}", cert.orders);
        }
    }
}
