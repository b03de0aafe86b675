//! sl₂-triples (u_S, v_S, −ρ(v_S)) attached to nonempty proper subsets
//! S ⊊ Π^Q = {α₁, …, α_ℓ, −ψ}.
//!
//! u_S ∈ t_{ℝ,S} is the unique solution of the Killing Gram system
//! ⟨u_S, φ⟩ = 1 (φ ∈ S), solved exactly over ℚ. Since the only linear
//! relation among Π^Q is Σψᵢαᵢ − ψ = 0 with all coefficients nonzero, every
//! proper subset is linearly independent and the system is nonsingular.
//!
//! v_S = Σ β_φ e_φ with |β_φ|² φ♯ summing to 2u_S; the coefficients |β_φ|²
//! are simply twice the coordinates of u_S over {φ♯ : φ ∈ S}, and the real
//! positive square roots are chosen (one representative of the unit-modulus
//! torus of solutions). [u_S, v_S] = v_S and [u_S, −ρ(v_S)] = ρ(v_S) hold
//! identically from φ(u_S) = 1; all three relations are certified with ad
//! matrices.

use crate::chevalley::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{solve_rat, C64};
use crate::rootsys::{Root, RootSystem};
use crate::scalar::{rat_int, rat_to_f64, Rat};
use num::traits::Signed;
use serde::{Deserialize, Serialize};
use std::fmt;

/// An element of Π^Q = {α₁, …, α_ℓ, −ψ}.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub enum PiQ {
    /// 0-based index of a simple root.
    Simple(usize),
    MinusPsi,
}

impl PiQ {
    pub fn root(&self, rs: &RootSystem) -> Root {
        match self {
            PiQ::Simple(i) => Root::simple(rs.rank(), *i),
            PiQ::MinusPsi => rs.highest.neg(),
        }
    }

    /// Parse "alpha_1", "a1", or "-psi" (1-based simple root numbering).
    pub fn parse(s: &str, rank: usize) -> Result<PiQ> {
        let s = s.trim().to_ascii_lowercase();
        if s == "-psi" || s == "psi-" || s == "minus_psi" {
            return Ok(PiQ::MinusPsi);
        }
        let digits = s.trim_start_matches("alpha_").trim_start_matches('a');
        let i: usize = digits
            .parse()
            .map_err(|_| Error::input(format!("cannot parse Π^Q element '{}'", s)))?;
        if i == 0 || i > rank {
            return Err(Error::input(format!(
                "simple root index {} out of range 1..={}",
                i, rank
            )));
        }
        Ok(PiQ::Simple(i - 1))
    }
}

impl fmt::Display for PiQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiQ::Simple(i) => write!(f, "alpha_{}", i + 1),
            PiQ::MinusPsi => write!(f, "-psi"),
        }
    }
}

/// All nonempty proper subsets of Π^Q, for exhaustive certification.
pub fn all_proper_subsets(rank: usize) -> Vec<Vec<PiQ>> {
    let n = rank + 1;
    let mut out = Vec::new();
    for mask in 1u32..((1u32 << n) - 1) {
        let mut s = Vec::new();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                s.push(if i < rank {
                    PiQ::Simple(i)
                } else {
                    PiQ::MinusPsi
                });
            }
        }
        out.push(s);
    }
    out
}

/// An sl₂-triple attached to S, with exact u_S and exact |β_φ|².
#[derive(Clone, Debug)]
pub struct SL2Triple {
    pub subset: Vec<PiQ>,
    /// Coordinates x_φ of u_S over {φ♯ : φ ∈ S}.
    pub u_coords: Vec<Rat>,
    /// u_S in sharp coordinates.
    pub u_sharp: Vec<Rat>,
    /// |β_φ|² = 2 x_φ, exact.
    pub beta_sq: Vec<Rat>,
    /// β_φ > 0 (floating point only at the square-root step).
    pub beta: Vec<f64>,
}

fn validate_subset(rs: &RootSystem, subset: &[PiQ]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::input("subset S must be nonempty"));
    }
    if subset.len() > rs.rank() {
        return Err(Error::input(
            "subset S must be a proper subset of Π^Q (S = Π^Q is linearly dependent)",
        ));
    }
    for (i, a) in subset.iter().enumerate() {
        if subset[i + 1..].contains(a) {
            return Err(Error::input(format!("duplicate element {} in S", a)));
        }
    }
    Ok(())
}

/// Solve the Gram system ⟨u_S, φ⟩ = 1 (φ ∈ S) exactly; returns the
/// coordinates over {φ♯ : φ ∈ S} and the sharp coordinates of u_S.
pub fn compute_u_s(rs: &RootSystem, subset: &[PiQ]) -> Result<(Vec<Rat>, Vec<Rat>)> {
    validate_subset(rs, subset)?;
    let roots: Vec<Root> = subset.iter().map(|p| p.root(rs)).collect();
    let n = roots.len();
    let gram: Vec<Vec<Rat>> = roots
        .iter()
        .map(|a| roots.iter().map(|b| rs.root_pairing(a, b)).collect())
        .collect();
    let ones = vec![rat_int(1); n];
    let coords = solve_rat(&gram, &ones)?;
    let l = rs.rank();
    let mut u_sharp = vec![Rat::from_integer(0.into()); l];
    for (x, r) in coords.iter().zip(&roots) {
        for i in 0..l {
            u_sharp[i] += x * rat_int(r.0[i]);
        }
    }
    Ok((coords, u_sharp))
}

/// Construct the full triple; fails if some exact |β_φ|² is non-positive
/// (reported with the offending subset rather than silently adjusted).
pub fn compute_triple(lie: &LieAlgebra, subset: &[PiQ]) -> Result<SL2Triple> {
    let (u_coords, u_sharp) = compute_u_s(&lie.rs, subset)?;
    let beta_sq: Vec<Rat> = u_coords.iter().map(|x| x * rat_int(2)).collect();
    for (b, p) in beta_sq.iter().zip(subset) {
        if !b.is_positive() {
            return Err(Error::numeric(format!(
                "|beta|^2 = {} non-positive at {} for S = {}",
                b,
                p,
                subset
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )));
        }
    }
    let beta = beta_sq.iter().map(|b| rat_to_f64(b).sqrt()).collect();
    Ok(SL2Triple {
        subset: subset.to_vec(),
        u_coords,
        u_sharp,
        beta_sq,
        beta,
    })
}

impl SL2Triple {
    /// u_S embedded as a coefficient vector over the full basis.
    pub fn u_vec(&self, lie: &LieAlgebra) -> Vec<C64> {
        let mut u = lie.zero_float();
        for (i, x) in self.u_sharp.iter().enumerate() {
            u[i] = C64::new(rat_to_f64(x), 0.0);
        }
        u
    }

    /// v_S = Σ β_φ e_φ with an optional unit-modulus phase on each β_φ.
    pub fn v_vec(&self, lie: &LieAlgebra, phases: Option<&[C64]>) -> Vec<C64> {
        let mut v = lie.zero_float();
        for (k, p) in self.subset.iter().enumerate() {
            let idx = lie
                .basis_index(&p.root(&lie.rs))
                .expect("subset root missing");
            let phase = phases.map_or(C64::new(1.0, 0.0), |ph| ph[k]);
            v[idx] = phase * self.beta[k];
        }
        v
    }
}

/// Residuals of the three commutation relations, computed with ad matrices.
#[derive(Debug, Clone, Serialize)]
pub struct TripleCert {
    /// ‖[v_S, −ρ(v_S)] − 2u_S‖_h
    pub r_bracket: f64,
    /// ‖[u_S, v_S] − v_S‖_h
    pub r_raise: f64,
    /// ‖[u_S, −ρ(v_S)] + (−ρ(v_S))‖_h
    pub r_lower: f64,
    /// φ(u_S) − 1 over φ ∈ S, exact zero check.
    pub pairing_exact: bool,
}

impl TripleCert {
    pub fn max_residual(&self) -> f64 {
        self.r_bracket.max(self.r_raise).max(self.r_lower)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.pairing_exact && self.max_residual() <= tol
    }
}

/// Certify a triple, optionally with phases e^{iγ} on the v_S coefficients
/// (all relations are invariant under them).
pub fn certify_triple(lie: &LieAlgebra, triple: &SL2Triple, phases: Option<&[C64]>) -> TripleCert {
    let u = triple.u_vec(lie);
    let v = triple.v_vec(lie, phases);
    let rho_v = lie.rho(&v);
    let w: Vec<C64> = rho_v.iter().map(|z| -z).collect();

    let bracket_vw = lie.bracket(&v, &w);
    let diff1: Vec<C64> = bracket_vw
        .iter()
        .zip(&u)
        .map(|(a, b)| a - b * 2.0)
        .collect();
    let bracket_uv = lie.bracket(&u, &v);
    let diff2: Vec<C64> = bracket_uv.iter().zip(&v).map(|(a, b)| a - b).collect();
    let bracket_uw = lie.bracket(&u, &w);
    let diff3: Vec<C64> = bracket_uw.iter().zip(&w).map(|(a, b)| a + b).collect();

    let pairing_exact = triple.subset.iter().all(|p| {
        lie.rs.root_value(&p.root(&lie.rs), &triple.u_sharp) == rat_int(1)
    });

    TripleCert {
        r_bracket: lie.hermitian_norm(&diff1),
        r_raise: lie.hermitian_norm(&diff2),
        r_lower: lie.hermitian_norm(&diff3),
        pairing_exact,
    }
}
