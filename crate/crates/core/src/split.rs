//! The split automorphism σ = Ad(w), w = exp(2π√−1·x₀/(h+1)), acting
//! diagonally on the Chevalley basis: σ(e_φ) = ω^{φ(x₀)} e_φ and σ = id on t,
//! with ω = exp(2π√−1/(h+1)).
//!
//! The induced ℤ/(h+1)-grading has g₀ = t and g₁ = ⊕ g_{αᵢ} ⊕ g_{−ψ}. The
//! module decides cyclicity exactly, regular semisimplicity numerically, and
//! certifies the splitness condition C_g(u) ∩ g₀ = 0 on cyclic elements. It
//! also carries the closed form of [u, ρ(u)], the o-invariant, and the
//! classification region for the β-parameters at a puncture.

use crate::chevalley::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{complex_kernel, C64};
use crate::rootsys::RootSystem;
use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

/// The order-(h+1) automorphism Ad(w) in its diagonal form.
pub struct SplitAutomorphism {
    /// m = h + 1.
    pub order: i64,
    /// Eigenvalue exponents: σ(x_k) = ω^{w_k} x_k with w_k = φ(x₀) mod (h+1)
    /// on root vectors and 0 on t.
    pub weights: Vec<i64>,
}

impl SplitAutomorphism {
    pub fn new(lie: &LieAlgebra) -> Self {
        let order = lie.rs.h + 1;
        let weights = (0..lie.dim)
            .map(|i| lie.basis_height(i).rem_euclid(order))
            .collect();
        SplitAutomorphism { order, weights }
    }

    pub fn omega(&self) -> C64 {
        let th = 2.0 * std::f64::consts::PI / self.order as f64;
        C64::new(th.cos(), th.sin())
    }

    /// Apply σ to a coefficient vector.
    pub fn apply(&self, u: &[C64]) -> Vec<C64> {
        let om = self.omega();
        u.iter()
            .zip(&self.weights)
            .map(|(c, &w)| c * om.powi(w as i32))
            .collect()
    }

    /// Basis indices of the eigenspace g_ℓ for ℓ ∈ ℤ/(h+1).
    pub fn eigenspace(&self, class: i64) -> Vec<usize> {
        let class = class.rem_euclid(self.order);
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w == class)
            .map(|(i, _)| i)
            .collect()
    }

    /// All eigenspaces, indexed by the class.
    pub fn eigenspace_decomposition(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|c| self.eigenspace(c)).collect()
    }

    /// Exact check that [g_k, g_ℓ] ⊂ g_{k+ℓ} on all basis pairs.
    pub fn grading_respected(&self, lie: &LieAlgebra) -> bool {
        for i in 0..lie.dim {
            for j in 0..lie.dim {
                let expected = (self.weights[i] + self.weights[j]).rem_euclid(self.order);
                for (k, _) in lie.basis_bracket(i, j) {
                    if self.weights[*k] != expected {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// An element of g₁ given by its coefficients (b₁, …, b_ℓ) over e_{αᵢ} and
/// b_{−ψ} over e_{−ψ}.
#[derive(Clone, Debug)]
pub struct CyclicElement {
    pub b: Vec<C64>,
}

impl CyclicElement {
    /// Coefficients in the order (b₁, …, b_ℓ, b_{−ψ}).
    pub fn new(b: Vec<C64>) -> CyclicElement {
        CyclicElement { b }
    }

    pub fn from_reals(b: &[f64]) -> CyclicElement {
        CyclicElement {
            b: b.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    /// Exact cyclicity criterion: every coefficient nonzero.
    pub fn is_cyclic(&self) -> bool {
        self.b.iter().all(|c| c.norm_sqr() > 0.0)
    }

    /// Embed into a full coefficient vector over the basis of g.
    pub fn to_vec(&self, lie: &LieAlgebra) -> Vec<C64> {
        let l = lie.rank();
        assert_eq!(self.b.len(), l + 1, "expected ℓ+1 coefficients");
        let mut u = lie.zero_float();
        for (i, phi) in lie.rs.weight_one_eigenroots().iter().enumerate() {
            let idx = lie.basis_index(phi).expect("Π^Q root missing from basis");
            u[idx] = self.b[i];
        }
        u
    }

    /// Random cyclic element with moduli in [1/2, 2] and uniform phases.
    pub fn sample_cyclic<R: Rng>(rng: &mut R, l: usize) -> CyclicElement {
        let b = (0..=l)
            .map(|_| {
                let r = rng.gen_range(0.5..2.0);
                let th = rng.gen_range(0.0..std::f64::consts::TAU);
                C64::new(r * th.cos(), r * th.sin())
            })
            .collect();
        CyclicElement { b }
    }

    /// Random non-cyclic element of g₁: a nonempty subset of coefficients is
    /// zeroed.
    pub fn sample_noncyclic<R: Rng>(rng: &mut R, l: usize) -> CyclicElement {
        let mut e = CyclicElement::sample_cyclic(rng, l);
        let zeros = rng.gen_range(1..=l + 1);
        let mut idxs: Vec<usize> = (0..=l).collect();
        for i in 0..zeros {
            let j = rng.gen_range(i..idxs.len());
            idxs.swap(i, j);
            e.b[idxs[i]] = C64::new(0.0, 0.0);
        }
        e
    }
}

/// Outcome of the numerical regular-semisimplicity test.
#[derive(Debug, Clone, Serialize)]
pub struct RsReport {
    pub kernel_dim: usize,
    pub expected_dim: usize,
    /// Smallest singular value of the Killing Gram matrix on the numerical
    /// centralizer (0 when the kernel is empty).
    pub gram_sigma_min: f64,
    pub is_rs: bool,
    pub ambiguous: bool,
}

/// Decide regular semisimplicity of u numerically.
///
/// u is regular semisimple iff dim ker ad(u) = ℓ and the Killing form is
/// nondegenerate on the centralizer: for a regular element the centralizer is
/// abelian, so a nilpotent part of u would lie in the radical of B|_{C(u)}.
/// Singular values are thresholded at `rel_tol`·‖ad u‖.
pub fn is_regular_semisimple(lie: &LieAlgebra, u: &[C64], rel_tol: f64) -> Result<RsReport> {
    let kern = complex_kernel(&lie.ad_matrix(u), rel_tol)?;
    let k = kern.basis.ncols();
    let l = lie.rank();
    let mut gram_sigma_min = 0.0;
    let mut nondegenerate = false;
    if k > 0 {
        // complex-bilinear Gram: G_ab = B(v_a, v_b) (no conjugation)
        let bmat = DMatrix::from_fn(lie.dim, lie.dim, |i, j| {
            C64::new(lie.killing_basis(i, j).to_f64(), 0.0)
        });
        let g = kern.basis.transpose() * bmat * &kern.basis;
        let svd = g.svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let smin = svd
            .singular_values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        gram_sigma_min = smin;
        nondegenerate = smax > 0.0 && smin > rel_tol * smax.max(1.0);
    }
    Ok(RsReport {
        kernel_dim: k,
        expected_dim: l,
        gram_sigma_min,
        is_rs: k == l && nondegenerate,
        ambiguous: kern.ambiguous,
    })
}

/// Outcome of the splitness certificate on one cyclic element.
#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub kernel_dim: usize,
    pub expected_dim: usize,
    /// Smallest singular value of the kernel basis restricted to the root
    /// vector rows: positive iff C_g(u) ∩ g₀ = 0.
    pub complement_sigma_min: f64,
    pub pass: bool,
    pub ambiguous: bool,
}

/// Certify C_g(u) ∩ g₀ = 0 and dim C_g(u) = ℓ for a cyclic u ∈ g₁.
pub fn verify_split(lie: &LieAlgebra, u: &CyclicElement, rel_tol: f64) -> Result<SplitReport> {
    if !u.is_cyclic() {
        return Err(Error::input("verify_split requires a cyclic element"));
    }
    let vec = u.to_vec(lie);
    let kern = complex_kernel(&lie.ad_matrix(&vec), rel_tol)?;
    let k = kern.basis.ncols();
    let l = lie.rank();
    // an element of ker ∩ g₀ is a kernel combination supported on the t rows
    // only, i.e. a rank deficiency of the root-vector row block
    let nroots = lie.dim - l;
    let mut restricted = DMatrix::from_element(nroots, k, C64::new(0.0, 0.0));
    for c in 0..k {
        for r in 0..nroots {
            restricted[(r, c)] = kern.basis[(l + r, c)];
        }
    }
    let sigma = if k == 0 {
        f64::INFINITY
    } else {
        crate::linalg::sigma_min(&restricted)
    };
    Ok(SplitReport {
        kernel_dim: k,
        expected_dim: l,
        complement_sigma_min: sigma,
        pass: k == l && sigma > rel_tol,
        ambiguous: kern.ambiguous,
    })
}

/// Closed form of [u, ρ(u)] for u ∈ g₁ with coefficients b:
/// −Σᵢ (|bᵢ|² − ψᵢ|b_{−ψ}|²) αᵢ♯, returned in sharp coordinates, together
/// with the sup-norm residual against the direct ad-bracket computation.
pub fn bracket_rho_closed_form(lie: &LieAlgebra, b: &CyclicElement) -> (Vec<f64>, f64) {
    let l = lie.rank();
    assert_eq!(b.b.len(), l + 1);
    let bpsi_sq = b.b[l].norm_sqr();
    let closed: Vec<f64> = (0..l)
        .map(|i| -(b.b[i].norm_sqr() - lie.rs.psi[i] as f64 * bpsi_sq))
        .collect();
    let u = b.to_vec(lie);
    let direct = lie.bracket(&u, &lie.rho(&u));
    let mut residual = 0.0f64;
    for (i, d) in direct.iter().enumerate() {
        let expect = if i < l {
            C64::new(closed[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        };
        residual = residual.max((d - expect).norm());
    }
    (closed, residual)
}

/// o(u) = ∏ bᵢ^{ψᵢ} · b_{−ψ}, homogeneous of degree h+1.
pub fn o_invariant(rs: &RootSystem, b: &CyclicElement) -> C64 {
    let l = rs.rank();
    assert_eq!(b.b.len(), l + 1);
    let mut o = b.b[l];
    for i in 0..l {
        o *= b.b[i].powi(rs.psi[i] as i32);
    }
    o
}

/// Result of a membership test against the classification region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Membership {
    /// h+1+m ≤ 0: the puncture is outside D^{>0} and the region degenerates
    /// to a single point (unique harmonic metric); no β-parameter survives.
    Trivial,
    Admissible,
    Rejected { constraint: String },
}

/// The admissible set {β ∈ t_ℝ : αᵢ(β) ≤ 0, ψ(β) + h+1+m ≥ 0} attached to a
/// puncture with zero order m = ord_P o(θ).
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationRegion {
    pub h: i64,
    pub ord: i64,
    pub psi: Vec<i64>,
}

impl ClassificationRegion {
    pub fn new(rs: &RootSystem, ord: i64) -> Self {
        ClassificationRegion {
            h: rs.h,
            ord,
            psi: rs.psi.clone(),
        }
    }

    /// c(θ) = −m/(h+1).
    pub fn c_theta(&self) -> f64 {
        -(self.ord as f64) / (self.h as f64 + 1.0)
    }

    /// The D^{>0} predicate h+1+m > 0.
    pub fn d_positive(&self) -> bool {
        self.h + 1 + self.ord > 0
    }

    /// Membership of β given in ε coordinates (βᵢ = αᵢ(β)).
    pub fn membership_eps(&self, beta: &[f64]) -> Membership {
        self.membership_eps_tol(beta, 0.0)
    }

    /// Membership with a slack tolerance for numerically recovered β
    /// (boundary points of the polytope would otherwise be decided by
    /// roundoff).
    pub fn membership_eps_tol(&self, beta: &[f64], tol: f64) -> Membership {
        if !self.d_positive() {
            return Membership::Trivial;
        }
        for (i, &v) in beta.iter().enumerate() {
            if v > tol {
                return Membership::Rejected {
                    constraint: format!("alpha_{}(beta) = {} > 0", i + 1, v),
                };
            }
        }
        let psi_val: f64 = beta
            .iter()
            .zip(&self.psi)
            .map(|(&v, &p)| v * p as f64)
            .sum();
        let slack = psi_val + (self.h + 1 + self.ord) as f64;
        if slack < -tol {
            return Membership::Rejected {
                constraint: format!("psi(beta) + h + 1 + ord = {} < 0", slack),
            };
        }
        Membership::Admissible
    }
}

/// Aggregate report of the randomized splitness suite for one algebra.
#[derive(Debug, Clone, Serialize)]
pub struct SplitSuiteReport {
    pub algebra: String,
    pub order: i64,
    pub g0_dim: usize,
    pub g1_dim: usize,
    pub eigenspace_dims: Vec<usize>,
    pub grading_ok: bool,
    pub samples: usize,
    pub cyclic_all_rs: bool,
    pub cyclic_all_split: bool,
    pub noncyclic_none_rs: bool,
    pub oracle_disagreements: usize,
    pub max_bracket_residual: f64,
    pub max_homogeneity_residual: f64,
    pub ambiguous_cases: usize,
}

impl SplitSuiteReport {
    pub fn passed(&self) -> bool {
        self.grading_ok
            && self.g1_dim == self.eigenspace_dims[0] + 1
            && self.cyclic_all_rs
            && self.cyclic_all_split
            && self.noncyclic_none_rs
            && self.oracle_disagreements == 0
            && self.max_bracket_residual <= 1e-12
            && self.max_homogeneity_residual <= 1e-12
    }
}

/// Run the randomized verification suite: grading, eigenspace dimensions,
/// Kostant's cyclicity ⇔ regular-semisimplicity equivalence on `samples`
/// random elements of each kind, the [u,ρ(u)] closed form, and o-invariant
/// homogeneity.
pub fn split_suite<R: Rng>(
    lie: &LieAlgebra,
    samples: usize,
    rel_tol: f64,
    rng: &mut R,
) -> Result<SplitSuiteReport> {
    let sigma = SplitAutomorphism::new(lie);
    let l = lie.rank();
    let decomp = sigma.eigenspace_decomposition();
    let dims: Vec<usize> = decomp.iter().map(|v| v.len()).collect();

    let mut report = SplitSuiteReport {
        algebra: lie.rs.stype.to_string(),
        order: sigma.order,
        g0_dim: dims[0],
        g1_dim: dims.get(1).cloned().unwrap_or(0),
        eigenspace_dims: dims,
        grading_ok: sigma.grading_respected(lie),
        samples,
        cyclic_all_rs: true,
        cyclic_all_split: true,
        noncyclic_none_rs: true,
        oracle_disagreements: 0,
        max_bracket_residual: 0.0,
        max_homogeneity_residual: 0.0,
        ambiguous_cases: 0,
    };

    for _ in 0..samples {
        let c = CyclicElement::sample_cyclic(rng, l);
        debug_assert!(c.is_cyclic());
        let rs_rep = is_regular_semisimple(lie, &c.to_vec(lie), rel_tol)?;
        if rs_rep.ambiguous {
            report.ambiguous_cases += 1;
        }
        if !rs_rep.is_rs {
            report.cyclic_all_rs = false;
            report.oracle_disagreements += 1;
        }
        let sp = verify_split(lie, &c, rel_tol)?;
        if !sp.pass {
            report.cyclic_all_split = false;
        }

        let n = CyclicElement::sample_noncyclic(rng, l);
        debug_assert!(!n.is_cyclic());
        let rs_rep = is_regular_semisimple(lie, &n.to_vec(lie), rel_tol)?;
        if rs_rep.ambiguous {
            report.ambiguous_cases += 1;
        }
        if rs_rep.is_rs {
            report.noncyclic_none_rs = false;
            report.oracle_disagreements += 1;
        }

        let (_, resid) = bracket_rho_closed_form(lie, &c);
        report.max_bracket_residual = report.max_bracket_residual.max(resid);

        // o(λu) = λ^{h+1} o(u)
        let lam = C64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let scaled = CyclicElement::new(c.b.iter().map(|z| z * lam).collect());
        let o1 = o_invariant(&lie.rs, &c);
        let o2 = o_invariant(&lie.rs, &scaled);
        let resid = (o2 - lam.powi((lie.rs.h + 1) as i32) * o1).norm() / o2.norm().max(1.0);
        report.max_homogeneity_residual = report.max_homogeneity_residual.max(resid);
    }
    Ok(report)
}
