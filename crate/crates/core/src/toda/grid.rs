//! Finite-difference grids: rectangles in the z-plane, log-polar annuli in
//! (s, θ) with s = log|z| and periodic angle, and 1-D lines in s for the
//! radial reduction.

use crate::error::{Error, Result};
use crate::linalg::C64;
use serde::{Deserialize, Serialize};

/// Discretized domain specification. Node counts include boundary nodes.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub enum DomainSpec {
    Rectangle {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        nx: usize,
        ny: usize,
    },
    /// Log-polar annulus: s ∈ [s0, s1] (s = log|z|), θ periodic with `ntheta`
    /// distinct angles.
    Annulus {
        s0: f64,
        s1: f64,
        ns: usize,
        ntheta: usize,
    },
    /// 1-D line in s, used by the radial solver.
    Line { s0: f64, s1: f64, ns: usize },
}

/// A realized uniform grid. Nodes are indexed `i1 * n2 + i2` where axis 1 is
/// x (rectangle) or s (annulus/line).
#[derive(Clone, Debug)]
pub struct Grid {
    pub domain: DomainSpec,
    pub n1: usize,
    pub n2: usize,
    pub d1: f64,
    pub d2: f64,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub periodic2: bool,
}

impl Grid {
    pub fn new(domain: &DomainSpec) -> Result<Grid> {
        match *domain {
            DomainSpec::Rectangle {
                x0,
                x1,
                y0,
                y1,
                nx,
                ny,
            } => {
                if nx < 3 || ny < 3 {
                    return Err(Error::input("rectangle grid needs nx, ny >= 3"));
                }
                if x1 <= x0 || y1 <= y0 {
                    return Err(Error::input("rectangle has empty extent"));
                }
                let d1 = (x1 - x0) / (nx - 1) as f64;
                let d2 = (y1 - y0) / (ny - 1) as f64;
                Ok(Grid {
                    domain: domain.clone(),
                    n1: nx,
                    n2: ny,
                    d1,
                    d2,
                    c1: (0..nx).map(|i| x0 + i as f64 * d1).collect(),
                    c2: (0..ny).map(|j| y0 + j as f64 * d2).collect(),
                    periodic2: false,
                })
            }
            DomainSpec::Annulus { s0, s1, ns, ntheta } => {
                if ns < 3 || ntheta < 3 {
                    return Err(Error::input("annulus grid needs ns >= 3, ntheta >= 3"));
                }
                if s1 <= s0 {
                    return Err(Error::input("annulus has empty radial extent"));
                }
                let d1 = (s1 - s0) / (ns - 1) as f64;
                let d2 = std::f64::consts::TAU / ntheta as f64;
                Ok(Grid {
                    domain: domain.clone(),
                    n1: ns,
                    n2: ntheta,
                    d1,
                    d2,
                    c1: (0..ns).map(|i| s0 + i as f64 * d1).collect(),
                    c2: (0..ntheta).map(|j| j as f64 * d2).collect(),
                    periodic2: true,
                })
            }
            DomainSpec::Line { s0, s1, ns } => {
                if ns < 3 {
                    return Err(Error::input("line grid needs ns >= 3"));
                }
                if s1 <= s0 {
                    return Err(Error::input("line has empty extent"));
                }
                let d1 = (s1 - s0) / (ns - 1) as f64;
                Ok(Grid {
                    domain: domain.clone(),
                    n1: ns,
                    n2: 1,
                    d1,
                    d2: 1.0,
                    c1: (0..ns).map(|i| s0 + i as f64 * d1).collect(),
                    c2: vec![0.0],
                    periodic2: false,
                })
            }
        }
    }

    pub fn nnodes(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn node(&self, i1: usize, i2: usize) -> usize {
        i1 * self.n2 + i2
    }

    pub fn coords(&self, node: usize) -> (usize, usize) {
        (node / self.n2, node % self.n2)
    }

    pub fn is_line(&self) -> bool {
        matches!(self.domain, DomainSpec::Line { .. })
    }

    pub fn is_annulus(&self) -> bool {
        matches!(self.domain, DomainSpec::Annulus { .. })
    }

    /// Interior nodes carry unknowns; the rest are Dirichlet boundary.
    pub fn is_interior(&self, node: usize) -> bool {
        let (i1, i2) = self.coords(node);
        let inner1 = i1 > 0 && i1 + 1 < self.n1;
        let inner2 = self.periodic2 || self.n2 == 1 || (i2 > 0 && i2 + 1 < self.n2);
        inner1 && inner2
    }

    pub fn interior_nodes(&self) -> Vec<usize> {
        (0..self.nnodes()).filter(|&n| self.is_interior(n)).collect()
    }

    pub fn boundary_nodes(&self) -> Vec<usize> {
        (0..self.nnodes()).filter(|&n| !self.is_interior(n)).collect()
    }

    /// The point z attached to a node.
    pub fn z_at(&self, node: usize) -> C64 {
        let (i1, i2) = self.coords(node);
        match self.domain {
            DomainSpec::Rectangle { .. } => C64::new(self.c1[i1], self.c2[i2]),
            DomainSpec::Annulus { .. } => {
                let r = self.c1[i1].exp();
                C64::new(r * self.c2[i2].cos(), r * self.c2[i2].sin())
            }
            DomainSpec::Line { .. } => C64::new(self.c1[i1].exp(), 0.0),
        }
    }

    /// Conformal factor carrying the z-plane Laplacian to grid coordinates:
    /// Δ_z = factor · (∂₁² + ∂₂²); e^{−2s} on annuli/lines, 1 on rectangles.
    pub fn conformal_factor(&self, node: usize) -> f64 {
        match self.domain {
            DomainSpec::Rectangle { .. } => 1.0,
            _ => {
                let (i1, _) = self.coords(node);
                (-2.0 * self.c1[i1]).exp()
            }
        }
    }

    /// Neighbor along axis 1 (None at the ends).
    pub fn nbr1(&self, node: usize, up: bool) -> Option<usize> {
        let (i1, i2) = self.coords(node);
        if up {
            (i1 + 1 < self.n1).then(|| self.node(i1 + 1, i2))
        } else {
            (i1 > 0).then(|| self.node(i1 - 1, i2))
        }
    }

    /// Neighbor along axis 2, wrapping when periodic. None on a line grid.
    pub fn nbr2(&self, node: usize, up: bool) -> Option<usize> {
        if self.n2 == 1 {
            return None;
        }
        let (i1, i2) = self.coords(node);
        if self.periodic2 {
            let j = if up {
                (i2 + 1) % self.n2
            } else {
                (i2 + self.n2 - 1) % self.n2
            };
            Some(self.node(i1, j))
        } else if up {
            (i2 + 1 < self.n2).then(|| self.node(i1, i2 + 1))
        } else {
            (i2 > 0).then(|| self.node(i1, i2 - 1))
        }
    }
}
