//! Numerical solvers and certifiers for the torus-reduced Hitchin (Toda)
//! equation
//!
//! ```text
//!   Δξ = 2 t² Σ_{φ∈Π^Q} |f_φ(z)|² e^{2φ(ξ)} φ♯ ,    ξ : domain → t_ℝ,
//! ```
//!
//! discretized with the 5-point Laplacian on rectangles and log-polar annuli
//! (Δ = e^{−2s}(∂_s² + ∂_θ²) on annuli). The convention is |e_φ|²_h = e^{2φ(ξ)},
//! so a zero residual discretizes R(h) + [θ, −ρ_h(θ)] = 0 for torus-compatible
//! metrics. The 1-form is always written against dz; monomial data c·z^k on an
//! annulus reduces radially to ξ''(s) = 2t² Σ |c_φ|² e^{2(k_φ+1)s} e^{2φ(ξ)} φ♯.
//!
//! ξ fields are stored in sharp coordinates (over {αᵢ♯}) node-major.

mod analysis;
mod grid;
mod model;
mod newton;
mod schema;

pub use analysis::{asymptotic_slope, decay_study, DecayStudy, LineFit, SlopeFit};
pub use grid::{DomainSpec, Grid};
pub use model::{canonical_residual, canonical_xi, certify_model, ModelCert, ModelMetric};
pub use newton::{harmonic_extension, solve_dirichlet, solve_radial, Init};
pub use schema::{parse_problem, problem_from_json, problem_json, ProblemJson};

use crate::chevalley::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::split::CyclicElement;
use serde::{Deserialize, Serialize};

/// A finite Laurent expansion Σ c_k z^k with complex coefficients.
#[derive(Clone, Debug, Default)]
pub struct LaurentPoly {
    pub terms: Vec<(i64, C64)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        LaurentPoly { terms: vec![(0, c)] }
    }

    pub fn monomial(k: i64, c: C64) -> Self {
        LaurentPoly { terms: vec![(k, c)] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.norm_sqr() == 0.0)
    }

    /// The (k, c) pair when the polynomial is a single monomial.
    pub fn as_monomial(&self) -> Option<(i64, C64)> {
        let nz: Vec<_> = self
            .terms
            .iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .collect();
        if nz.len() == 1 {
            Some(*nz[0])
        } else {
            None
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &(k, c) in &self.terms {
            acc += c * z.powi(k as i32);
        }
        acc
    }

    pub fn abs_sq(&self, z: C64) -> f64 {
        self.eval(z).norm_sqr()
    }
}

/// Higgs coefficient functions f_φ, indexed by Π^Q order (α₁, …, α_ℓ, −ψ),
/// so that θ = t·Σ_φ f_φ(z) e_φ dz.
#[derive(Clone, Debug)]
pub struct HiggsField {
    pub f: Vec<LaurentPoly>,
}

impl HiggsField {
    pub fn new(f: Vec<LaurentPoly>) -> Self {
        HiggsField { f }
    }

    /// Constant coefficients from a g₁ element.
    pub fn constant(b: &CyclicElement) -> Self {
        HiggsField {
            f: b.b.iter().map(|&c| LaurentPoly::constant(c)).collect(),
        }
    }

    pub fn ncomponents(&self) -> usize {
        self.f.len()
    }

    /// Constant coefficient vector when every f_φ is constant.
    pub fn as_constant(&self) -> Option<CyclicElement> {
        let mut b = Vec::with_capacity(self.f.len());
        for p in &self.f {
            if p.is_zero() {
                b.push(C64::new(0.0, 0.0));
                continue;
            }
            let (k, c) = p.as_monomial()?;
            if k != 0 {
                return None;
            }
            b.push(c);
        }
        Some(CyclicElement::new(b))
    }

    /// All f_φ nonvanishing at every node of a grid.
    pub fn cyclic_on(&self, grid: &Grid) -> bool {
        (0..grid.nnodes()).all(|n| {
            let z = grid.z_at(n);
            self.f.iter().all(|p| p.abs_sq(z) > 0.0)
        })
    }
}

/// Dirichlet boundary data for ξ, in sharp coordinates.
#[derive(Clone, Debug)]
pub enum BoundarySpec {
    /// ξ ≡ v on the whole boundary.
    Constant(Vec<f64>),
    /// ξ ≡ ξ_can(b) + δ, for constant cyclic Higgs coefficients b.
    CanonicalPlus(Vec<f64>),
    /// Explicit values per boundary node.
    Explicit(Vec<(usize, Vec<f64>)>),
}

/// Damped-Newton solver options.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverOpts {
    /// Convergence threshold on the sup-norm of the discrete residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative tolerance of the inner conjugate-gradient solves.
    pub cg_tol: f64,
    /// Armijo halving floor 2^{-damping_bits}.
    pub damping_bits: u32,
}

impl Default for SolverOpts {
    fn default() -> Self {
        SolverOpts {
            tol: 1e-10,
            max_iter: 50,
            cg_tol: 1e-12,
            damping_bits: 20,
        }
    }
}

/// A Dirichlet problem for the Toda system.
#[derive(Clone, Debug)]
pub struct TodaProblem {
    pub domain: DomainSpec,
    pub higgs: HiggsField,
    pub boundary: BoundarySpec,
    pub scale_t: f64,
    pub solver: SolverOpts,
}

/// A solved (or best-effort) ξ field with its convergence log.
#[derive(Clone, Debug)]
pub struct TodaSolution {
    pub grid: Grid,
    pub ell: usize,
    /// Full field including boundary nodes, node-major sharp coordinates.
    pub xi: Vec<f64>,
    /// Sup-norm residual after each Newton iteration.
    pub residual_history: Vec<f64>,
    /// Final residual, recomputed from the returned field.
    pub final_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl TodaSolution {
    pub fn xi_at(&self, node: usize) -> &[f64] {
        &self.xi[node * self.ell..(node + 1) * self.ell]
    }
}

/// Per-node data shared by the residual and the solver.
pub(crate) struct Assembled {
    pub grid: Grid,
    pub ell: usize,
    pub nq: usize,
    /// φ in sharp coordinates (c_φ), per Π^Q root.
    pub phi_sharp: Vec<Vec<f64>>,
    /// Functional rows K·c_φ, per Π^Q root.
    pub phi_form: Vec<Vec<f64>>,
    /// Solver-form weights: on annuli and lines the equation is multiplied
    /// through by e^{2s}, so w[node][φ] = e^{2s}·2t²|f_φ(z)|² there and
    /// 2t²|f_φ(z)|² on rectangles.
    pub w: Vec<f64>,
    /// Factor carrying the solver-form residual back to the z-plane
    /// convention: e^{−2s} on annuli, 1 on rectangles and lines.
    pub spec_scale: Vec<f64>,
    pub kgram: Vec<Vec<f64>>,
    /// Full-length field holding boundary values (zero on the interior).
    pub boundary_field: Vec<f64>,
    pub interior: Vec<usize>,
    /// node → interior slot (usize::MAX on the boundary).
    pub slot: Vec<usize>,
}

pub(crate) fn assemble(lie: &LieAlgebra, problem: &TodaProblem) -> Result<Assembled> {
    let rs = &lie.rs;
    let l = rs.rank();
    let grid = Grid::new(&problem.domain)?;
    let pi_q = rs.weight_one_eigenroots();
    let nq = pi_q.len();
    if problem.higgs.ncomponents() != nq {
        return Err(Error::input(format!(
            "expected {} Higgs components, got {}",
            nq,
            problem.higgs.ncomponents()
        )));
    }
    if problem.scale_t < 0.0 {
        return Err(Error::input("scale_t must be >= 0"));
    }

    let kgram = rs.killing_gram_f64();
    let phi_sharp: Vec<Vec<f64>> = pi_q
        .iter()
        .map(|r| r.0.iter().map(|&c| c as f64).collect())
        .collect();
    let phi_form: Vec<Vec<f64>> = pi_q
        .iter()
        .map(|r| {
            (0..l)
                .map(|j| (0..l).map(|i| r.0[i] as f64 * kgram[i][j]).sum())
                .collect()
        })
        .collect();

    let t2 = 2.0 * problem.scale_t * problem.scale_t;
    let nn = grid.nnodes();
    let mut w = vec![0.0; nn * nq];
    let mut spec_scale = vec![1.0; nn];
    for node in 0..nn {
        let z = grid.z_at(node);
        let conf = grid.conformal_factor(node);
        // solver form: rectangles keep Δ_z; annuli and lines multiply the
        // equation by e^{2s} so the linear part is the plain grid Laplacian
        let wmul = match grid.domain {
            DomainSpec::Rectangle { .. } => 1.0,
            _ => 1.0 / conf,
        };
        if grid.is_annulus() {
            spec_scale[node] = conf;
        }
        for (q, poly) in problem.higgs.f.iter().enumerate() {
            let a = poly.abs_sq(z);
            if !a.is_finite() {
                return Err(Error::input(format!(
                    "Higgs coefficient has a pole on the grid at z = {}",
                    z
                )));
            }
            w[node * nq + q] = t2 * a * wmul;
        }
    }

    let mut boundary_field = vec![0.0; nn * l];
    let boundary_nodes = grid.boundary_nodes();
    match &problem.boundary {
        BoundarySpec::Constant(v) => {
            if v.len() != l {
                return Err(Error::input("boundary vector has wrong dimension"));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::input("boundary data must be finite"));
            }
            for &n in &boundary_nodes {
                boundary_field[n * l..(n + 1) * l].copy_from_slice(v);
            }
        }
        BoundarySpec::CanonicalPlus(delta) => {
            if delta.len() != l {
                return Err(Error::input("boundary shift has wrong dimension"));
            }
            let b = problem.higgs.as_constant().ok_or_else(|| {
                Error::input("canonical boundary requires constant Higgs coefficients")
            })?;
            let xi_can = canonical_xi(lie, &b)?;
            let v: Vec<f64> = xi_can.iter().zip(delta).map(|(a, d)| a + d).collect();
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::input("boundary data must be finite"));
            }
            for &n in &boundary_nodes {
                boundary_field[n * l..(n + 1) * l].copy_from_slice(&v);
            }
        }
        BoundarySpec::Explicit(entries) => {
            let mut seen = vec![false; nn];
            for (n, v) in entries {
                if v.len() != l {
                    return Err(Error::input("boundary vector has wrong dimension"));
                }
                if *n >= nn || grid.is_interior(*n) {
                    return Err(Error::input(format!("node {} is not a boundary node", n)));
                }
                boundary_field[n * l..(n + 1) * l].copy_from_slice(v);
                seen[*n] = true;
            }
            for &n in &boundary_nodes {
                if !seen[n] {
                    return Err(Error::input(format!(
                        "boundary node {} has no prescribed value",
                        n
                    )));
                }
            }
        }
    }

    let interior = grid.interior_nodes();
    let mut slot = vec![usize::MAX; nn];
    for (s, &n) in interior.iter().enumerate() {
        slot[n] = s;
    }

    Ok(Assembled {
        grid,
        ell: l,
        nq,
        phi_sharp,
        phi_form,
        w,
        spec_scale,
        kgram,
        boundary_field,
        interior,
        slot,
    })
}

impl Assembled {
    /// Solver-form residual at an interior node (grid Laplacian minus the
    /// rescaled nonlinear term), written into `out`.
    pub(crate) fn residual_at(&self, xi: &[f64], node: usize, out: &mut [f64]) {
        let l = self.ell;
        let g = &self.grid;
        let inv_d1 = 1.0 / (g.d1 * g.d1);
        let base = node * l;
        let up = g.nbr1(node, true).unwrap();
        let dn = g.nbr1(node, false).unwrap();
        for c in 0..l {
            let mut acc = (xi[up * l + c] + xi[dn * l + c] - 2.0 * xi[base + c]) * inv_d1;
            if g.n2 > 1 {
                let inv_d2 = 1.0 / (g.d2 * g.d2);
                let e = g.nbr2(node, true).unwrap();
                let w2 = g.nbr2(node, false).unwrap();
                acc += (xi[e * l + c] + xi[w2 * l + c] - 2.0 * xi[base + c]) * inv_d2;
            }
            out[c] = acc;
        }
        for q in 0..self.nq {
            let wq = self.w[node * self.nq + q];
            if wq == 0.0 {
                continue;
            }
            let mut phixi = 0.0;
            for c in 0..l {
                phixi += self.phi_form[q][c] * xi[base + c];
            }
            let e = (2.0 * phixi).exp();
            for c in 0..l {
                out[c] -= wq * e * self.phi_sharp[q][c];
            }
        }
    }

    /// Sup-norm of the residual in the z-plane (spec) convention.
    pub(crate) fn spec_residual_sup(&self, xi: &[f64]) -> f64 {
        let mut out = vec![0.0; self.ell];
        let mut sup = 0.0f64;
        for &node in &self.interior {
            self.residual_at(xi, node, &mut out);
            let sc = self.spec_scale[node];
            for c in 0..self.ell {
                sup = sup.max((out[c] * sc).abs());
            }
        }
        sup
    }
}

/// Apply the Jacobian of the discrete residual E at ξ to a perturbation v
/// (same layout as ξ; boundary entries of v are ignored since Dirichlet data
/// is pinned). Returns J·v in the same z-plane convention as
/// [`toda_residual`].
pub fn jacobian_apply(
    lie: &LieAlgebra,
    problem: &TodaProblem,
    xi: &[f64],
    v: &[f64],
) -> Result<Vec<f64>> {
    let asm = assemble(lie, problem)?;
    let l = asm.ell;
    let nn = asm.grid.nnodes();
    if xi.len() != nn * l || v.len() != nn * l {
        return Err(Error::input("field length does not match the grid"));
    }
    let g = &asm.grid;
    let inv_d1 = 1.0 / (g.d1 * g.d1);
    let inv_d2 = if g.n2 > 1 { 1.0 / (g.d2 * g.d2) } else { 0.0 };
    let fetch = |node: usize, c: usize| -> f64 {
        if asm.slot[node] == usize::MAX {
            0.0
        } else {
            v[node * l + c]
        }
    };
    let mut out = vec![0.0; nn * l];
    for &node in &asm.interior {
        let base = node * l;
        let up = g.nbr1(node, true).unwrap();
        let dn = g.nbr1(node, false).unwrap();
        for c in 0..l {
            let mut acc = (fetch(up, c) + fetch(dn, c) - 2.0 * fetch(node, c)) * inv_d1;
            if g.n2 > 1 {
                let e = g.nbr2(node, true).unwrap();
                let w2 = g.nbr2(node, false).unwrap();
                acc += (fetch(e, c) + fetch(w2, c) - 2.0 * fetch(node, c)) * inv_d2;
            }
            out[base + c] = acc;
        }
        for q in 0..asm.nq {
            let wq = asm.w[node * asm.nq + q];
            if wq == 0.0 {
                continue;
            }
            let mut phixi = 0.0;
            let mut phiv = 0.0;
            for c in 0..l {
                phixi += asm.phi_form[q][c] * xi[base + c];
                phiv += asm.phi_form[q][c] * fetch(node, c);
            }
            let factor = 2.0 * wq * (2.0 * phixi).exp() * phiv;
            for c in 0..l {
                out[base + c] -= factor * asm.phi_sharp[q][c];
            }
        }
        let sc = asm.spec_scale[node];
        for c in 0..l {
            out[base + c] *= sc;
        }
    }
    Ok(out)
}

/// Evaluate the discrete Toda residual E(ξ) = Δξ − 2t²Σ|f_φ|²e^{2φ(ξ)}φ♯ of a
/// full field on the problem's grid. Returns the per-node residual (zero on
/// boundary nodes) and its sup-norm; annuli use the z-plane convention with
/// the e^{−2s} conformal factor, lines the plain ODE form in s.
pub fn toda_residual(lie: &LieAlgebra, problem: &TodaProblem, xi: &[f64]) -> Result<(Vec<f64>, f64)> {
    let asm = assemble(lie, problem)?;
    let l = asm.ell;
    if xi.len() != asm.grid.nnodes() * l {
        return Err(Error::input("field length does not match the grid"));
    }
    let mut field = vec![0.0; xi.len()];
    let mut tmp = vec![0.0; l];
    let mut sup = 0.0f64;
    for &node in &asm.interior {
        asm.residual_at(xi, node, &mut tmp);
        let sc = asm.spec_scale[node];
        for c in 0..l {
            field[node * l + c] = tmp[c] * sc;
            sup = sup.max((tmp[c] * sc).abs());
        }
    }
    Ok((field, sup))
}
