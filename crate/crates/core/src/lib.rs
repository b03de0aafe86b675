//! Exact computational realization of the cyclic (Kostant) grading of a simple
//! complex Lie algebra, together with numerical solvers and certifiers for the
//! associated Toda-type harmonic-metric equations.
//!
//! The crate is organized around five subsystems:
//!
//! * [`rootsys`] — exact root-system combinatorics: positive roots by
//!   reflection closure, the highest root ψ, the grading element x₀, and the
//!   Killing Gram matrix on t_ℝ, all over ℚ.
//! * [`chevalley`] — a normalized Chevalley basis with B(e_φ, e_{−φ}) = 1,
//!   exact structure constants in a radical extension of ℚ, adjoint matrices,
//!   the Killing form, and the Cartan involution ρ of the compact real form.
//! * [`split`] — the order-(h+1) automorphism Ad(w), its eigenspace grading,
//!   cyclic elements and regular semisimplicity, the closed form of [u, ρ(u)],
//!   the o-invariant, and the β-parameter classification region.
//! * [`sl2`] — the sl₂-triples (u_S, v_S, −ρ(v_S)) attached to proper subsets
//!   S of {α₁, …, α_ℓ, −ψ}, with exact positivity certificates.
//! * [`toda`] — finite-difference solvers for the torus-reduced Hitchin
//!   (Toda) equation: canonical decoupled metrics, Dirichlet problems on
//!   rectangles and log-polar annuli, the radial reduction on C*, model
//!   metrics with their grid-refinement certification, exponential-decay
//!   studies, and asymptotic slope extraction.

pub mod chevalley;
pub mod error;
pub mod linalg;
pub mod rootsys;
pub mod scalar;
pub mod sl2;
pub mod split;
pub mod toda;

pub use chevalley::{build_lie_algebra, verify_algebra, ChevalleyReport, GElement, LieAlgebra};
pub use error::{Error, Result};
pub use rootsys::{build_root_system, Family, Root, RootSystem, SimpleType};
pub use scalar::{CRad, Rad, Rat};
pub use sl2::{all_proper_subsets, certify_triple, compute_triple, compute_u_s, PiQ, SL2Triple};
pub use split::{
    bracket_rho_closed_form, is_regular_semisimple, o_invariant, split_suite, verify_split,
    ClassificationRegion, CyclicElement, Membership, SplitAutomorphism,
};
pub use toda::{
    asymptotic_slope, canonical_xi, certify_model, decay_study, jacobian_apply, parse_problem,
    solve_dirichlet, solve_radial, toda_residual, BoundarySpec, DomainSpec, Grid, HiggsField,
    Init, LaurentPoly, ModelMetric, SolverOpts, TodaProblem, TodaSolution,
};
