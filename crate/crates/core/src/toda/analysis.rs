//! Decay studies against the canonical metric and asymptotic slope
//! extraction near a puncture.

use super::grid::DomainSpec;
use super::model::canonical_xi;
use super::newton::{solve_dirichlet, Init};
use super::{BoundarySpec, HiggsField, SolverOpts, TodaProblem, TodaSolution};
use crate::chevalley::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::split::CyclicElement;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// A fitted line log M(t) ≈ intercept + slope·t.
#[derive(Debug, Clone, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Result of a decay study: interior deviation from the canonical metric as
/// a function of the Higgs scale t.
#[derive(Debug, Clone, Serialize)]
pub struct DecayStudy {
    pub t_values: Vec<f64>,
    /// M(t) = sup over the inner subdomain of ‖ξ_t − ξ_can‖_B.
    pub m_values: Vec<f64>,
    /// Fit of log M(t) against t; None when some M(t) vanishes (e.g. δ = 0).
    pub fit: Option<LineFit>,
    pub monotone_nonincreasing: bool,
    pub iterations: Vec<usize>,
    pub residuals: Vec<f64>,
}

/// For each t in `t_list`, solve the Dirichlet problem with constant cyclic
/// coefficients b and boundary ξ_can + δ on a rectangle, and record the
/// sup-norm Killing distance to ξ_can over the centered inner subdomain of
/// the given fraction.
pub fn decay_study(
    lie: &LieAlgebra,
    b: &CyclicElement,
    t_list: &[f64],
    delta_sharp: &[f64],
    domain: &DomainSpec,
    inner_fraction: f64,
    solver: &SolverOpts,
) -> Result<DecayStudy> {
    if !b.is_cyclic() {
        return Err(Error::input("decay study requires cyclic coefficients"));
    }
    let (x0, x1, y0, y1) = match *domain {
        DomainSpec::Rectangle { x0, x1, y0, y1, .. } => (x0, x1, y0, y1),
        _ => return Err(Error::input("decay study runs on a rectangle domain")),
    };
    if !(0.0..=1.0).contains(&inner_fraction) {
        return Err(Error::input("inner fraction must lie in [0, 1]"));
    }
    if t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input("t_list must be strictly increasing"));
    }
    let l = lie.rank();
    let xi_can = canonical_xi(lie, b)?;
    let mut m_values = Vec::with_capacity(t_list.len());
    let mut iterations = Vec::new();
    let mut residuals = Vec::new();
    for &t in t_list {
        let problem = TodaProblem {
            domain: domain.clone(),
            higgs: HiggsField::constant(b),
            boundary: BoundarySpec::CanonicalPlus(delta_sharp.to_vec()),
            scale_t: t,
            solver: solver.clone(),
        };
        let sol = solve_dirichlet(lie, &problem, Init::Harmonic)?;
        if !sol.converged {
            return Err(Error::numeric(format!(
                "decay solve at t = {} did not converge (residual {})",
                t, sol.final_residual
            )));
        }
        let cx = 0.5 * (x0 + x1);
        let cy = 0.5 * (y0 + y1);
        let hx = 0.5 * (x1 - x0) * inner_fraction;
        let hy = 0.5 * (y1 - y0) * inner_fraction;
        let mut m = 0.0f64;
        for node in 0..sol.grid.nnodes() {
            let (i1, i2) = sol.grid.coords(node);
            let x = sol.grid.c1[i1];
            let y = sol.grid.c2[i2];
            if (x - cx).abs() <= hx + 1e-12 && (y - cy).abs() <= hy + 1e-12 {
                let d: Vec<f64> = (0..l)
                    .map(|c| sol.xi_at(node)[c] - xi_can[c])
                    .collect();
                m = m.max(lie.rs.killing_norm_f64(&d));
            }
        }
        m_values.push(m);
        iterations.push(sol.iterations);
        residuals.push(sol.final_residual);
    }

    let monotone = m_values.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let fit = if m_values.iter().all(|&m| m > 0.0) {
        let x = DMatrix::from_fn(t_list.len(), 2, |r, c| if c == 0 { t_list[r] } else { 1.0 });
        let y = DVector::from_fn(t_list.len(), |r, _| m_values[r].ln());
        let (coeffs, r2) = least_squares(&x, &y)?;
        Some(LineFit {
            slope: coeffs[0],
            intercept: coeffs[1],
            r2,
        })
    } else {
        None
    };

    Ok(DecayStudy {
        t_values: t_list.to_vec(),
        m_values,
        fit,
        monotone_nonincreasing: monotone,
        iterations,
        residuals,
    })
}

/// Componentwise asymptotic slope of −ξ(s) on a window of s values near the
/// inner boundary of an annulus (or line) solution.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    /// Fitted β in sharp coordinates.
    pub beta_sharp: Vec<f64>,
    /// Fitted β in ε coordinates (αᵢ(β) values).
    pub beta_eps: Vec<f64>,
    /// Coefficients of the log(−s) regressor per component.
    pub log_coeffs: Vec<f64>,
    /// Worst fit residual (sup over window and components).
    pub max_fit_residual: f64,
    pub nodes_used: usize,
}

/// Fit −ξ_c(s) ≈ β_c·s + γ_c·log(−s) + const per component over the window.
///
/// The log(−s) regressor absorbs the model metrics' u_S·log(−log|z|^{2t})
/// correction, which a plain linear fit cannot separate from β on any finite
/// window. On an annulus, values are averaged over θ at each s level.
pub fn asymptotic_slope(
    lie: &LieAlgebra,
    solution: &TodaSolution,
    window: (f64, f64),
) -> Result<SlopeFit> {
    let grid = &solution.grid;
    match grid.domain {
        DomainSpec::Annulus { .. } | DomainSpec::Line { .. } => {}
        _ => {
            return Err(Error::input(
                "asymptotic_slope requires an annulus or line solution",
            ))
        }
    }
    let (w0, w1) = window;
    let levels: Vec<usize> = (0..grid.n1)
        .filter(|&i1| grid.c1[i1] >= w0 - 1e-12 && grid.c1[i1] <= w1 + 1e-12)
        .collect();
    if levels.len() < 5 {
        return Err(Error::input(format!(
            "window [{}, {}] covers {} grid levels; at least 5 required",
            w0,
            w1,
            levels.len()
        )));
    }
    if levels.iter().any(|&i1| grid.c1[i1] >= 0.0) {
        return Err(Error::input(
            "slope window must lie in s < 0 (inside the unit disc)",
        ));
    }
    let l = solution.ell;
    let n = levels.len();
    let mut beta_sharp = vec![0.0; l];
    let mut log_coeffs = vec![0.0; l];
    let mut max_resid = 0.0f64;
    for c in 0..l {
        let x = DMatrix::from_fn(n, 3, |r, col| {
            let s = grid.c1[levels[r]];
            match col {
                0 => s,
                1 => (-s).ln(),
                _ => 1.0,
            }
        });
        let y = DVector::from_fn(n, |r, _| {
            let i1 = levels[r];
            let mut acc = 0.0;
            for i2 in 0..grid.n2 {
                acc += solution.xi_at(grid.node(i1, i2))[c];
            }
            -(acc / grid.n2 as f64)
        });
        let (coeffs, _) = least_squares(&x, &y)?;
        beta_sharp[c] = coeffs[0];
        log_coeffs[c] = coeffs[1];
        let fitted = &x * &coeffs;
        for r in 0..n {
            max_resid = max_resid.max((fitted[r] - y[r]).abs());
        }
    }
    let beta_eps = lie.rs.sharp_to_eps(&beta_sharp);
    Ok(SlopeFit {
        beta_sharp,
        beta_eps,
        log_coeffs,
        max_fit_residual: max_resid,
        nodes_used: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::build_lie_algebra;
    use crate::rootsys::build_root_system;
    use crate::sl2::PiQ;
    use crate::toda::model::ModelMetric;
    use crate::toda::Grid;

    fn lie(s: &str) -> LieAlgebra {
        build_lie_algebra(build_root_system(s.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn zero_delta_gives_zero_m() {
        let g = lie("A1");
        let b = CyclicElement::from_reals(&[1.0, 1.0]);
        let domain = DomainSpec::Rectangle {
            x0: -1.0,
            x1: 1.0,
            y0: -1.0,
            y1: 1.0,
            nx: 10,
            ny: 10,
        };
        let study = decay_study(
            &g,
            &b,
            &[1.0, 2.0],
            &[0.0],
            &domain,
            0.5,
            &SolverOpts::default(),
        )
        .unwrap();
        assert!(study.m_values.iter().all(|&m| m < 1e-12));
        assert!(study.fit.is_none());
        assert!(study.monotone_nonincreasing);
    }

    #[test]
    fn slope_recovers_model_beta() {
        let g = lie("A2");
        // β = −x₀: ε coordinates (−1, −1)
        let beta = g.rs.eps_to_sharp(&[-1.0, -1.0]);
        let model = ModelMetric::new(
            &g,
            beta.clone(),
            vec![PiQ::Simple(0), PiQ::Simple(1)],
            vec![-1, -1],
            1.0,
        )
        .unwrap();
        let domain = DomainSpec::Annulus {
            s0: -7.0,
            s1: -3.0,
            ns: 41,
            ntheta: 8,
        };
        let grid = Grid::new(&domain).unwrap();
        let xi = model.field_on(&grid).unwrap();
        let sol = TodaSolution {
            grid,
            ell: 2,
            xi,
            residual_history: vec![],
            final_residual: 0.0,
            iterations: 0,
            converged: true,
        };
        let fit = asymptotic_slope(&g, &sol, (-6.0, -4.0)).unwrap();
        for (a, b) in fit.beta_sharp.iter().zip(&beta) {
            assert!((a - b).abs() < 1e-9, "{:?} vs {:?}", fit.beta_sharp, beta);
        }
        assert!((fit.beta_eps[0] + 1.0).abs() < 1e-9);
        assert!((fit.beta_eps[1] + 1.0).abs() < 1e-9);
        // window too small
        assert!(asymptotic_slope(&g, &sol, (-4.05, -4.0)).is_err());
    }
}
