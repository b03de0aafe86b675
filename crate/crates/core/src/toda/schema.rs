//! JSON problem documents:
//!
//! ```json
//! {
//!   "algebra": {"family": "A", "rank": 2},
//!   "domain": {"kind": "annulus", "s_min": -3.0, "s_max": 0.0, "ns": 64, "ntheta": 64},
//!   "higgs": [
//!     {"root": "alpha_1", "terms": [{"k": -1, "re": 1.0, "im": 0.0}]},
//!     {"root": "-psi",    "terms": [{"k": 1,  "re": 1.0, "im": 0.0}]}
//!   ],
//!   "boundary": {"kind": "constant", "values": [0.0, 0.0], "basis": "eps"},
//!   "scale_t": 1.0,
//!   "solver": {"tol": 1e-10, "max_iter": 50}
//! }
//! ```
//!
//! Rectangles use `{"kind": "rectangle", "x0", "x1", "y0", "y1", "nx", "ny"}`;
//! annuli accept either `s_min`/`s_max` (s = log|z|) or `r_min`/`r_max`.
//! Boundary `values` are read in ε coordinates (αᵢ(ξ) values) unless
//! `"basis": "sharp"` is given; `"kind"` is `"constant"` or
//! `"canonical_plus"` (values are then the shift δ against ξ_can).

use super::grid::DomainSpec;
use super::{BoundarySpec, HiggsField, LaurentPoly, SolverOpts, TodaProblem};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::rootsys::{build_root_system, RootSystem, SimpleType};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub family: String,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ns: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ntheta: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HiggsEntryJson {
    /// "alpha_1", …, "alpha_ℓ", or "-psi".
    pub root: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryJson {
    pub kind: String,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemJson {
    pub algebra: AlgebraJson,
    pub domain: DomainJson,
    pub higgs: Vec<HiggsEntryJson>,
    pub boundary: BoundaryJson,
    pub scale_t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverJson>,
}

fn req<T: Copy>(v: &Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::input(format!("domain field '{}' is required", name)))
}

fn domain_from_json(d: &DomainJson) -> Result<DomainSpec> {
    match d.kind.as_str() {
        "rectangle" => Ok(DomainSpec::Rectangle {
            x0: req(&d.x0, "x0")?,
            x1: req(&d.x1, "x1")?,
            y0: req(&d.y0, "y0")?,
            y1: req(&d.y1, "y1")?,
            nx: req(&d.nx, "nx")?,
            ny: req(&d.ny, "ny")?,
        }),
        "annulus" => {
            let s0 = match (d.s_min, d.r_min) {
                (Some(s), None) => s,
                (None, Some(r)) if r > 0.0 => r.ln(),
                (None, Some(_)) => return Err(Error::input("r_min must be positive")),
                _ => return Err(Error::input("give exactly one of s_min or r_min")),
            };
            let s1 = match (d.s_max, d.r_max) {
                (Some(s), None) => s,
                (None, Some(r)) if r > 0.0 => r.ln(),
                (None, Some(_)) => return Err(Error::input("r_max must be positive")),
                _ => return Err(Error::input("give exactly one of s_max or r_max")),
            };
            Ok(DomainSpec::Annulus {
                s0,
                s1,
                ns: req(&d.ns, "ns")?,
                ntheta: req(&d.ntheta, "ntheta")?,
            })
        }
        k => Err(Error::input(format!("unknown domain kind '{}'", k))),
    }
}

fn higgs_slot(root: &str, rank: usize) -> Result<usize> {
    let p = crate::sl2::PiQ::parse(root, rank)?;
    Ok(match p {
        crate::sl2::PiQ::Simple(i) => i,
        crate::sl2::PiQ::MinusPsi => rank,
    })
}

/// Parse a problem document; returns the simple type and the problem.
pub fn parse_problem(text: &str) -> Result<(SimpleType, TodaProblem)> {
    let spec: ProblemJson = serde_json::from_str(text)
        .map_err(|e| Error::input(format!("cannot parse problem JSON: {}", e)))?;
    let stype: SimpleType = format!("{}{}", spec.algebra.family, spec.algebra.rank).parse()?;
    let rs = build_root_system(stype)?;
    let problem = problem_from_json(&rs, &spec)?;
    Ok((stype, problem))
}

/// Build the problem against an already-constructed root system.
pub fn problem_from_json(rs: &RootSystem, spec: &ProblemJson) -> Result<TodaProblem> {
    let l = rs.rank();
    let domain = domain_from_json(&spec.domain)?;

    let mut f = vec![LaurentPoly::zero(); l + 1];
    for entry in &spec.higgs {
        let slot = higgs_slot(&entry.root, l)?;
        let terms = entry
            .terms
            .iter()
            .map(|t| (t.k, C64::new(t.re, t.im)))
            .collect();
        f[slot] = LaurentPoly { terms };
    }

    if spec.boundary.values.len() != l {
        return Err(Error::input(format!(
            "boundary values must have {} components",
            l
        )));
    }
    let values_sharp = match spec.boundary.basis.as_deref() {
        None | Some("eps") => rs.eps_to_sharp(&spec.boundary.values),
        Some("sharp") => spec.boundary.values.clone(),
        Some(b) => return Err(Error::input(format!("unknown basis '{}'", b))),
    };
    let boundary = match spec.boundary.kind.as_str() {
        "constant" => BoundarySpec::Constant(values_sharp),
        "canonical_plus" => BoundarySpec::CanonicalPlus(values_sharp),
        k => return Err(Error::input(format!("unknown boundary kind '{}'", k))),
    };

    let mut solver = SolverOpts::default();
    if let Some(s) = &spec.solver {
        if let Some(tol) = s.tol {
            solver.tol = tol;
        }
        if let Some(mi) = s.max_iter {
            solver.max_iter = mi;
        }
    }

    Ok(TodaProblem {
        domain,
        higgs: HiggsField::new(f),
        boundary,
        scale_t: spec.scale_t,
        solver,
    })
}

/// Serialize a problem back into its JSON document form (used for config
/// echoing).
pub fn problem_json(stype: SimpleType, problem: &TodaProblem) -> ProblemJson {
    let domain = match problem.domain {
        DomainSpec::Rectangle {
            x0,
            x1,
            y0,
            y1,
            nx,
            ny,
        } => DomainJson {
            kind: "rectangle".into(),
            x0: Some(x0),
            x1: Some(x1),
            y0: Some(y0),
            y1: Some(y1),
            nx: Some(nx),
            ny: Some(ny),
            s_min: None,
            s_max: None,
            r_min: None,
            r_max: None,
            ns: None,
            ntheta: None,
        },
        DomainSpec::Annulus { s0, s1, ns, ntheta } => DomainJson {
            kind: "annulus".into(),
            x0: None,
            x1: None,
            y0: None,
            y1: None,
            nx: None,
            ny: None,
            s_min: Some(s0),
            s_max: Some(s1),
            r_min: None,
            r_max: None,
            ns: Some(ns),
            ntheta: Some(ntheta),
        },
        DomainSpec::Line { s0, s1, ns } => DomainJson {
            kind: "annulus".into(),
            x0: None,
            x1: None,
            y0: None,
            y1: None,
            nx: None,
            ny: None,
            s_min: Some(s0),
            s_max: Some(s1),
            ns: Some(ns),
            ntheta: Some(1),
            r_min: None,
            r_max: None,
        },
    };
    let l = problem.higgs.ncomponents() - 1;
    let higgs = problem
        .higgs
        .f
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| HiggsEntryJson {
            root: if i < l {
                format!("alpha_{}", i + 1)
            } else {
                "-psi".into()
            },
            terms: p
                .terms
                .iter()
                .map(|&(k, c)| TermJson {
                    k,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        })
        .collect();
    let (kind, values) = match &problem.boundary {
        BoundarySpec::Constant(v) => ("constant", v.clone()),
        BoundarySpec::CanonicalPlus(v) => ("canonical_plus", v.clone()),
        BoundarySpec::Explicit(_) => ("explicit", Vec::new()),
    };
    ProblemJson {
        algebra: AlgebraJson {
            family: stype.family.to_string(),
            rank: stype.rank,
        },
        domain,
        higgs,
        boundary: BoundaryJson {
            kind: kind.into(),
            values,
            basis: Some("sharp".into()),
        },
        scale_t: problem.scale_t,
        solver: Some(SolverJson {
            tol: Some(problem.solver.tol),
            max_iter: Some(problem.solver.max_iter),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let text = r#"{
            "algebra": {"family": "A", "rank": 1},
            "domain": {"kind": "annulus", "r_min": 0.1, "r_max": 0.5, "ns": 16, "ntheta": 8},
            "higgs": [
                {"root": "alpha_1", "terms": [{"k": -1, "re": 1.0, "im": 0.0}]},
                {"root": "-psi", "terms": [{"k": 1, "re": 0.5, "im": 0.5}]}
            ],
            "boundary": {"kind": "constant", "values": [0.25]},
            "scale_t": 2.0,
            "solver": {"tol": 1e-9}
        }"#;
        let (stype, problem) = parse_problem(text).unwrap();
        assert_eq!(stype.to_string(), "A1");
        assert_eq!(problem.scale_t, 2.0);
        assert_eq!(problem.solver.tol, 1e-9);
        assert_eq!(problem.solver.max_iter, 50);
        match problem.domain {
            DomainSpec::Annulus { s0, s1, ns, ntheta } => {
                assert!((s0 - 0.1f64.ln()).abs() < 1e-15);
                assert!((s1 - 0.5f64.ln()).abs() < 1e-15);
                assert_eq!((ns, ntheta), (16, 8));
            }
            _ => panic!("expected annulus"),
        }
        // ε → sharp conversion: for A1, ε₁ = 2α♯ so value 0.25 ↦ 0.5
        match &problem.boundary {
            BoundarySpec::Constant(v) => assert!((v[0] - 0.5).abs() < 1e-15),
            _ => panic!("expected constant boundary"),
        }
    }

    #[test]
    fn bad_documents_rejected() {
        assert!(parse_problem("{").is_err());
        let missing = r#"{
            "algebra": {"family": "A", "rank": 1},
            "domain": {"kind": "annulus", "ns": 16, "ntheta": 8},
            "higgs": [],
            "boundary": {"kind": "constant", "values": [0.0]},
            "scale_t": 1.0
        }"#;
        assert!(parse_problem(missing).is_err());
        let badroot = r#"{
            "algebra": {"family": "A", "rank": 1},
            "domain": {"kind": "rectangle", "x0": 0.0, "x1": 1.0, "y0": 0.0, "y1": 1.0, "nx": 4, "ny": 4},
            "higgs": [{"root": "alpha_5", "terms": []}],
            "boundary": {"kind": "constant", "values": [0.0]},
            "scale_t": 1.0
        }"#;
        assert!(parse_problem(badroot).is_err());
    }
}
