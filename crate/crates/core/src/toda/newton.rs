//! Damped Newton iteration for the discrete Toda system, with conjugate
//! gradient inner solves.
//!
//! The Newton correction δ solves J δ = −E where J = Δ_grid − Σ 2w e^{2φ(ξ)}
//! φ♯⊗φ. Multiplying the block rows by the Killing Gram K symmetrizes the
//! system: K∘J = Δ_grid∘K − Σ 2w e^{2φ(ξ)} (Kc_φ)(Kc_φ)ᵀ is symmetric negative
//! definite, so CG runs on −K∘J with Jacobi preconditioning. Steps are damped
//! by Armijo halving down to 2^{−damping_bits}; overflow of e^{2φ(ξ)} is
//! treated as a rejected step.

use super::{assemble, Assembled, TodaProblem, TodaSolution};
use crate::chevalley::LieAlgebra;
use crate::error::{Error, Result};
use crate::toda::grid::DomainSpec;

/// Initialization of the Newton iteration.
#[derive(Clone, Debug, PartialEq)]
pub enum Init {
    /// ξ = 0 on the interior.
    Zero,
    /// Componentwise discrete-harmonic extension of the boundary data.
    Harmonic,
    /// A given full field (boundary part is overwritten by the problem data).
    Given(Vec<f64>),
}

impl Assembled {
    fn nunk(&self) -> usize {
        self.interior.len() * self.ell
    }

    /// Assemble a full field from the boundary data and an interior vector.
    fn full_field(&self, u: &[f64]) -> Vec<f64> {
        let mut xi = self.boundary_field.clone();
        for (s, &node) in self.interior.iter().enumerate() {
            for c in 0..self.ell {
                xi[node * self.ell + c] = u[s * self.ell + c];
            }
        }
        xi
    }

    /// Solver-form residual on the interior unknowns.
    fn residual_vec(&self, xi_full: &[f64]) -> Vec<f64> {
        let l = self.ell;
        let mut r = vec![0.0; self.nunk()];
        let mut tmp = vec![0.0; l];
        for (s, &node) in self.interior.iter().enumerate() {
            self.residual_at(xi_full, node, &mut tmp);
            r[s * l..(s + 1) * l].copy_from_slice(&tmp);
        }
        r
    }

    /// Grid Laplacian of an interior vector extended by zero, restricted back
    /// to the interior.
    fn lap_apply(&self, v: &[f64], out: &mut [f64]) {
        let l = self.ell;
        let g = &self.grid;
        let inv_d1 = 1.0 / (g.d1 * g.d1);
        let inv_d2 = if g.n2 > 1 { 1.0 / (g.d2 * g.d2) } else { 0.0 };
        let fetch = |node: usize, c: usize| -> f64 {
            let s = self.slot[node];
            if s == usize::MAX {
                0.0
            } else {
                v[s * l + c]
            }
        };
        for (s, &node) in self.interior.iter().enumerate() {
            let up = g.nbr1(node, true).unwrap();
            let dn = g.nbr1(node, false).unwrap();
            for c in 0..l {
                let mut acc = (fetch(up, c) + fetch(dn, c) - 2.0 * v[s * l + c]) * inv_d1;
                if g.n2 > 1 {
                    let e = g.nbr2(node, true).unwrap();
                    let w = g.nbr2(node, false).unwrap();
                    acc += (fetch(e, c) + fetch(w, c) - 2.0 * v[s * l + c]) * inv_d2;
                }
                out[s * l + c] = acc;
            }
        }
    }

    /// Apply −K∘J at the linearization point ξ (SPD).
    fn neg_sym_jacobian_apply(&self, xi_full: &[f64], v: &[f64], out: &mut [f64]) {
        let l = self.ell;
        // Kv per node, then the Laplacian (they commute)
        let mut kv = vec![0.0; v.len()];
        for s in 0..self.interior.len() {
            for c in 0..l {
                let mut acc = 0.0;
                for d in 0..l {
                    acc += self.kgram[c][d] * v[s * l + d];
                }
                kv[s * l + c] = acc;
            }
        }
        self.lap_apply(&kv, out);
        for (s, &node) in self.interior.iter().enumerate() {
            let base = node * l;
            for q in 0..self.nq {
                let wq = self.w[node * self.nq + q];
                if wq == 0.0 {
                    continue;
                }
                let mut phixi = 0.0;
                let mut phiv = 0.0;
                for c in 0..l {
                    phixi += self.phi_form[q][c] * xi_full[base + c];
                    phiv += self.phi_form[q][c] * v[s * l + c];
                }
                let factor = 2.0 * wq * (2.0 * phixi).exp() * phiv;
                for c in 0..l {
                    out[s * l + c] -= factor * self.phi_form[q][c];
                }
            }
        }
        for x in out.iter_mut() {
            *x = -*x;
        }
    }

    /// Jacobi preconditioner diagonal of −K∘J.
    fn precond_diag(&self, xi_full: &[f64]) -> Vec<f64> {
        let l = self.ell;
        let g = &self.grid;
        let lapdiag = 2.0 / (g.d1 * g.d1)
            + if g.n2 > 1 { 2.0 / (g.d2 * g.d2) } else { 0.0 };
        let mut diag = vec![0.0; self.nunk()];
        for (s, &node) in self.interior.iter().enumerate() {
            let base = node * l;
            for c in 0..l {
                let mut v = lapdiag * self.kgram[c][c];
                for q in 0..self.nq {
                    let wq = self.w[node * self.nq + q];
                    if wq == 0.0 {
                        continue;
                    }
                    let mut phixi = 0.0;
                    for d in 0..l {
                        phixi += self.phi_form[q][d] * xi_full[base + d];
                    }
                    v += 2.0 * wq * (2.0 * phixi).exp() * self.phi_form[q][c].powi(2);
                }
                diag[s * l + c] = v.max(1e-300);
            }
        }
        diag
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Preconditioned CG for an SPD operator given as a closure. Returns the
/// solution and the achieved relative residual.
fn cg<F: Fn(&[f64], &mut [f64])>(
    apply: F,
    b: &[f64],
    diag: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for _ in 0..max_iter {
        if dot(&r, &r).sqrt() <= rel_tol * bnorm {
            return Ok(x);
        }
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 || !pap.is_finite() {
            return Err(Error::numeric(
                "conjugate gradient lost positive definiteness",
            ));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if dot(&r, &r).sqrt() <= rel_tol * bnorm * 10.0 {
        Ok(x)
    } else {
        Err(Error::numeric("conjugate gradient failed to converge"))
    }
}

/// Componentwise discrete-harmonic extension of the problem's boundary data.
pub fn harmonic_extension(lie: &LieAlgebra, problem: &TodaProblem) -> Result<Vec<f64>> {
    let asm = assemble(lie, problem)?;
    Ok(harmonic_extension_assembled(&asm)?)
}

fn harmonic_extension_assembled(asm: &Assembled) -> Result<Vec<f64>> {
    let l = asm.ell;
    // constant boundary data extends to the constant field
    let bnodes = asm.grid.boundary_nodes();
    if let Some(&first) = bnodes.first() {
        let v = asm.boundary_field[first * l..(first + 1) * l].to_vec();
        let constant = bnodes
            .iter()
            .all(|&n| asm.boundary_field[n * l..(n + 1) * l] == v[..]);
        if constant {
            let mut xi = asm.boundary_field.clone();
            for &node in &asm.interior {
                xi[node * l..(node + 1) * l].copy_from_slice(&v);
            }
            return Ok(xi);
        }
    }
    // Δ(ξ0 + δ) = 0 with δ supported on the interior: (−Δ)δ = Δξ0
    let mut rhs = vec![0.0; asm.nunk()];
    {
        // Laplacian of the boundary field at interior nodes
        let mut tmp = vec![0.0; l];
        let g = &asm.grid;
        let inv_d1 = 1.0 / (g.d1 * g.d1);
        let inv_d2 = if g.n2 > 1 { 1.0 / (g.d2 * g.d2) } else { 0.0 };
        for (s, &node) in asm.interior.iter().enumerate() {
            let up = g.nbr1(node, true).unwrap();
            let dn = g.nbr1(node, false).unwrap();
            for c in 0..l {
                tmp[c] = (asm.boundary_field[up * l + c] + asm.boundary_field[dn * l + c])
                    * inv_d1;
                if g.n2 > 1 {
                    let e = g.nbr2(node, true).unwrap();
                    let w = g.nbr2(node, false).unwrap();
                    tmp[c] +=
                        (asm.boundary_field[e * l + c] + asm.boundary_field[w * l + c]) * inv_d2;
                }
                rhs[s * l + c] = tmp[c];
            }
        }
    }
    let g = &asm.grid;
    let lapdiag =
        2.0 / (g.d1 * g.d1) + if g.n2 > 1 { 2.0 / (g.d2 * g.d2) } else { 0.0 };
    let diag = vec![lapdiag; asm.nunk()];
    let apply = |v: &[f64], out: &mut [f64]| {
        asm.lap_apply(v, out);
        for x in out.iter_mut() {
            *x = -*x;
        }
    };
    let u = cg(apply, &rhs, &diag, 1e-13, 20 * asm.nunk() + 200)?;
    Ok(asm.full_field(&u))
}

/// Solve the Dirichlet problem with damped Newton iteration.
///
/// Convergence is declared when the sup-norm of the z-plane residual drops
/// below `problem.solver.tol`. On non-convergence the best iterate and the
/// residual history are still returned, with `converged = false`.
pub fn solve_dirichlet(lie: &LieAlgebra, problem: &TodaProblem, init: Init) -> Result<TodaSolution> {
    let asm = assemble(lie, problem)?;
    let opts = &problem.solver;
    let l = asm.ell;

    let mut xi_full = match init {
        Init::Zero => asm.full_field(&vec![0.0; asm.nunk()]),
        Init::Harmonic => harmonic_extension_assembled(&asm)?,
        Init::Given(f) => {
            if f.len() != asm.grid.nnodes() * l {
                return Err(Error::input("initial field length does not match the grid"));
            }
            let vals: Vec<f64> = asm
                .interior
                .iter()
                .flat_map(|&n| f[n * l..(n + 1) * l].to_vec())
                .collect();
            asm.full_field(&vals)
        }
    };

    let mut history = Vec::new();
    let mut sup = asm.spec_residual_sup(&xi_full);
    history.push(sup);
    let mut iterations = 0usize;
    let mut converged = sup <= opts.tol;

    while !converged && iterations < opts.max_iter {
        let r = asm.residual_vec(&xi_full);
        let rhs: Vec<f64> = {
            // K·E per node
            let mut out = vec![0.0; r.len()];
            for s in 0..asm.interior.len() {
                for c in 0..l {
                    let mut acc = 0.0;
                    for d in 0..l {
                        acc += asm.kgram[c][d] * r[s * l + d];
                    }
                    out[s * l + c] = acc;
                }
            }
            out
        };
        let diag = asm.precond_diag(&xi_full);
        let delta = cg(
            |v, out| asm.neg_sym_jacobian_apply(&xi_full, v, out),
            &rhs,
            &diag,
            opts.cg_tol,
            50 * asm.nunk() + 1000,
        )?;

        // Armijo halving on the solver-form residual sup-norm
        let r_sup = r.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let mut lambda = 1.0f64;
        let mut accepted = false;
        for _ in 0..=opts.damping_bits {
            let mut cand = xi_full.clone();
            for (s, &node) in asm.interior.iter().enumerate() {
                for c in 0..l {
                    cand[node * l + c] += lambda * delta[s * l + c];
                }
            }
            let rc = asm.residual_vec(&cand);
            let rc_sup = rc.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            if rc_sup.is_finite() && rc_sup < (1.0 - 1e-4 * lambda) * r_sup {
                xi_full = cand;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        iterations += 1;
        sup = asm.spec_residual_sup(&xi_full);
        history.push(sup);
        if !accepted {
            break;
        }
        converged = sup <= opts.tol;
    }

    let final_residual = asm.spec_residual_sup(&xi_full);
    Ok(TodaSolution {
        grid: asm.grid,
        ell: l,
        xi: xi_full,
        residual_history: history,
        final_residual,
        iterations,
        converged: final_residual <= opts.tol,
    })
}

/// Radial reduction on an annulus with S¹-symmetric (monomial) data: solves
/// the two-point boundary value problem ξ''(s) = 2t²Σ|c_φ|²e^{2(k_φ+1)s}
/// e^{2φ(ξ)}φ♯ on the s-interval of the annulus.
pub fn solve_radial(lie: &LieAlgebra, problem: &TodaProblem, init: Init) -> Result<TodaSolution> {
    let (s0, s1, ns) = match problem.domain {
        DomainSpec::Annulus { s0, s1, ns, .. } => (s0, s1, ns),
        DomainSpec::Line { s0, s1, ns } => (s0, s1, ns),
        _ => {
            return Err(Error::input(
                "radial solve requires an annulus or line domain",
            ))
        }
    };
    for p in &problem.higgs.f {
        if !p.is_zero() && p.as_monomial().is_none() {
            return Err(Error::input(
                "radial solve requires monomial Higgs coefficients (S¹ symmetry)",
            ));
        }
    }
    match problem.boundary {
        BoundarySpec::Constant(_) | BoundarySpec::CanonicalPlus(_) => {}
        BoundarySpec::Explicit(_) => {
            return Err(Error::input(
                "radial solve requires S¹-symmetric (constant or canonical) boundary data",
            ))
        }
    }
    let line = TodaProblem {
        domain: DomainSpec::Line { s0, s1, ns },
        higgs: problem.higgs.clone(),
        boundary: problem.boundary.clone(),
        scale_t: problem.scale_t,
        solver: problem.solver.clone(),
    };
    solve_dirichlet(lie, &line, init)
}

use super::BoundarySpec;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::build_lie_algebra;
    use crate::linalg::C64;
    use crate::rootsys::build_root_system;
    use crate::split::CyclicElement;
    use crate::toda::{canonical_xi, toda_residual, HiggsField, LaurentPoly, SolverOpts};

    fn lie(s: &str) -> crate::chevalley::LieAlgebra {
        build_lie_algebra(build_root_system(s.parse().unwrap()).unwrap()).unwrap()
    }

    fn rect(n: usize) -> DomainSpec {
        DomainSpec::Rectangle {
            x0: -1.0,
            x1: 1.0,
            y0: -1.0,
            y1: 1.0,
            nx: n,
            ny: n,
        }
    }

    #[test]
    fn canonical_fixed_point_zero_iterations() {
        let g = lie("A1");
        let b = CyclicElement::from_reals(&[2.0, 0.5]);
        let problem = TodaProblem {
            domain: rect(12),
            higgs: HiggsField::constant(&b),
            boundary: BoundarySpec::CanonicalPlus(vec![0.0]),
            scale_t: 1.0,
            solver: SolverOpts::default(),
        };
        let sol = solve_dirichlet(&g, &problem, Init::Harmonic).unwrap();
        assert!(sol.converged);
        assert!(sol.iterations <= 2, "iterations = {}", sol.iterations);
        assert!(sol.final_residual <= 1e-12, "res = {}", sol.final_residual);
        // ξ ≡ ξ_can: α(ξ_can) = −log 2
        let xi_can = canonical_xi(&g, &b).unwrap();
        let alpha_val = g.rs.root_value_f64(&g.rs.highest, &xi_can);
        assert!((alpha_val + 2.0f64.ln()).abs() < 1e-12);
        for n in 0..sol.grid.nnodes() {
            assert!((sol.xi_at(n)[0] - xi_can[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn two_inits_agree() {
        let g = lie("A2");
        let b = CyclicElement::from_reals(&[1.0, 1.3, 0.8]);
        let problem = TodaProblem {
            domain: rect(16),
            higgs: HiggsField::constant(&b),
            boundary: BoundarySpec::CanonicalPlus(vec![0.4, -0.3]),
            scale_t: 1.5,
            solver: SolverOpts::default(),
        };
        let s1 = solve_dirichlet(&g, &problem, Init::Harmonic).unwrap();
        let s2 = solve_dirichlet(&g, &problem, Init::Zero).unwrap();
        assert!(s1.converged && s2.converged);
        let diff = s1
            .xi
            .iter()
            .zip(&s2.xi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(diff < 1e-6, "solutions differ by {}", diff);
        // independently recomputed residual
        let (_, sup) = toda_residual(&g, &problem, &s1.xi).unwrap();
        assert!(sup <= 1e-10);
    }

    #[test]
    fn radial_matches_2d_on_homogeneous_data() {
        let g = lie("A1");
        // θ = Σ e_{αᵢ} dz/z + z^{h+1} e_{−ψ} dz/z: exponents −1 and h against dz
        let h = g.rs.h;
        let higgs = HiggsField::new(vec![
            LaurentPoly::monomial(-1, C64::new(1.0, 0.0)),
            LaurentPoly::monomial(h, C64::new(1.0, 0.0)),
        ]);
        let problem = TodaProblem {
            domain: DomainSpec::Annulus {
                s0: -2.0,
                s1: -0.5,
                ns: 33,
                ntheta: 16,
            },
            higgs,
            boundary: BoundarySpec::Constant(vec![0.1]),
            scale_t: 1.0,
            solver: SolverOpts::default(),
        };
        let sol2d = solve_dirichlet(&g, &problem, Init::Harmonic).unwrap();
        let sol1d = solve_radial(&g, &problem, Init::Harmonic).unwrap();
        assert!(sol2d.converged && sol1d.converged);
        let mut diff = 0.0f64;
        for i1 in 0..33 {
            for i2 in 0..16 {
                let v2 = sol2d.xi_at(sol2d.grid.node(i1, i2))[0];
                let v1 = sol1d.xi_at(i1)[0];
                diff = diff.max((v2 - v1).abs());
            }
        }
        assert!(diff < 1e-8, "radial/2d mismatch {}", diff);
    }

    #[test]
    fn harmonic_extension_is_harmonic() {
        let g = lie("A1");
        let problem = TodaProblem {
            domain: rect(9),
            higgs: HiggsField::constant(&CyclicElement::from_reals(&[1.0, 1.0])),
            boundary: BoundarySpec::Constant(vec![0.7]),
            scale_t: 0.0,
            solver: SolverOpts::default(),
        };
        let xi = harmonic_extension(&g, &problem).unwrap();
        // harmonic extension of constant boundary data is that constant
        for n in 0..81 {
            assert!((xi[n] - 0.7).abs() < 1e-10);
        }
    }

    #[test]
    fn nonconvergence_reports_best_iterate() {
        let g = lie("A1");
        let b = CyclicElement::from_reals(&[1.0, 1.0]);
        let mut solver = SolverOpts::default();
        solver.max_iter = 1;
        solver.tol = 1e-14;
        let problem = TodaProblem {
            domain: rect(12),
            higgs: HiggsField::constant(&b),
            boundary: BoundarySpec::CanonicalPlus(vec![2.5]),
            scale_t: 2.0,
            solver,
        };
        let sol = solve_dirichlet(&g, &problem, Init::Zero).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.residual_history.len(), 2);
        assert!(sol.residual_history[1] < sol.residual_history[0]);
    }
}
