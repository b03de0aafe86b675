//! Command-line front end: exact root data, algebra verification suites,
//! sl₂-triples, Toda solves on rectangles and annuli, model-metric
//! certification, decay studies, and asymptotic slope fits.
//!
//! Every run prints a single JSON report to stdout with the resolved
//! configuration echoed under "config". Exit codes: 0 ok, 1 verification
//! failed, 2 input error, 3 numeric error.

mod out;

use clap::{Parser, Subcommand};
use kostant_toda::toda::{self, DomainSpec, Init, SolverOpts, TodaSolution};
use kostant_toda::{
    all_proper_subsets, build_lie_algebra, build_root_system, certify_triple, compute_triple,
    split_suite, verify_algebra, ClassificationRegion, CyclicElement, Error, LieAlgebra,
    Membership, ModelMetric, PiQ, Result, SimpleType,
};
use out::{error_report, fnum, fvec, RunReport, Status};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "kostant-toda",
    version,
    about = "Cyclic gradings of simple Lie algebras and Toda-type harmonic metric equations"
)]
struct Cli {
    /// RNG seed for randomized suites (never entropy-based).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the solver/verification tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Override the solver iteration cap.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Write grid-valued results (solution fields) to this path.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Format of the --output dump.
    #[arg(long, global = true, value_parser = ["json", "csv"], default_value = "csv")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact root data of a simple type (Δ⁺, ψ, ψᵢ, h, dim g).
    RootsysInfo { stype: String },
    /// Run the exact invariant suite of the normalized Chevalley basis.
    ChevalleyVerify { stype: String },
    /// Randomized splitness suite: grading, cyclicity ⇔ regular
    /// semisimplicity, closed brackets, o-invariant homogeneity.
    SplitVerify {
        stype: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Test membership of β (ε coordinates) in the classification region.
    SplitRegion {
        stype: String,
        #[arg(long, allow_hyphen_values = true)]
        ord: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<f64>,
    },
    /// Construct and certify the sl₂-triple of a subset S ⊊ Π^Q.
    Sl2 {
        stype: String,
        /// Comma-separated subset, e.g. alpha_1,-psi (omit for all subsets).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        subset: Option<Vec<String>>,
    },
    /// Solve a Dirichlet problem described by a JSON document.
    TodaSolve {
        problem: PathBuf,
        #[arg(long, value_parser = ["harmonic", "zero"], default_value = "harmonic")]
        init: String,
    },
    /// Radial (S¹-symmetric) solve of an annulus problem document.
    TodaRadial {
        problem: PathBuf,
        #[arg(long, value_parser = ["harmonic", "zero"], default_value = "harmonic")]
        init: String,
    },
    /// Grid-refinement certification of a model metric ξ_{β,S,t}.
    ModelVerify {
        stype: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        subset: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        orders: Option<Vec<i64>>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.1)]
        rmin: f64,
        #[arg(long, default_value_t = 0.5)]
        rmax: f64,
        /// Grids as ns x ntheta, e.g. 64x64,128x128,256x256.
        #[arg(long, value_delimiter = ',', default_value = "64x64,128x128,256x256")]
        grids: Vec<String>,
    },
    /// Exponential-decay study of perturbed boundaries against ξ_can.
    DecayStudy {
        stype: String,
        /// Real coefficients b₁,…,b_ℓ,b₋ψ of the constant cyclic Higgs field.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<f64>,
        /// Boundary perturbation δ in sharp (α♯) coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        delta: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,6,8")]
        t_list: Vec<f64>,
        /// Rectangle half-width (domain [−a,a]²).
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        #[arg(long, default_value_t = 41)]
        nodes: usize,
        #[arg(long, default_value_t = 0.5)]
        inner_fraction: f64,
    },
    /// Fit the asymptotic β of a model metric (optionally re-solved) on an
    /// annulus window near the puncture.
    SlopeFit {
        stype: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        subset: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        orders: Option<Vec<i64>>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -7.0)]
        s_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -3.0)]
        s_max: f64,
        #[arg(long, default_value_t = 61)]
        ns: usize,
        #[arg(long, default_value_t = 8)]
        ntheta: usize,
        /// Fit window w0:w1 in s.
        #[arg(long, allow_hyphen_values = true, default_value = "-6:-4")]
        window: String,
        /// Check the fitted β against the region of this o(θ) zero order.
        #[arg(long, allow_hyphen_values = true)]
        ord: Option<i64>,
        /// Solve the Dirichlet problem with the model boundary trace instead
        /// of sampling the closed form.
        #[arg(long, default_value_t = false)]
        solve: bool,
    },
}

fn parse_type(s: &str) -> Result<SimpleType> {
    s.parse()
}

fn algebra(stype: SimpleType) -> Result<LieAlgebra> {
    build_lie_algebra(build_root_system(stype)?)
}

fn parse_subset(rank: usize, items: &[String]) -> Result<Vec<PiQ>> {
    items.iter().map(|s| PiQ::parse(s, rank)).collect()
}

fn parse_grids(items: &[String]) -> Result<Vec<(usize, usize)>> {
    items
        .iter()
        .map(|g| {
            let parts: Vec<&str> = g.split('x').collect();
            if parts.len() != 2 {
                return Err(Error::input(format!(
                    "bad grid spec '{}', expected NSxNT",
                    g
                )));
            }
            let ns = parts[0]
                .parse()
                .map_err(|_| Error::input(format!("bad grid spec '{}'", g)))?;
            let nt = parts[1]
                .parse()
                .map_err(|_| Error::input(format!("bad grid spec '{}'", g)))?;
            Ok((ns, nt))
        })
        .collect()
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::input(format!("bad window '{}', expected w0:w1", s)));
    }
    let w0 = parts[0]
        .parse()
        .map_err(|_| Error::input(format!("bad window '{}'", s)))?;
    let w1 = parts[1]
        .parse()
        .map_err(|_| Error::input(format!("bad window '{}'", s)))?;
    Ok((w0, w1))
}

fn solver_opts(cli: &Cli) -> SolverOpts {
    let mut opts = SolverOpts::default();
    if let Some(t) = cli.tol {
        opts.tol = t;
    }
    if let Some(m) = cli.max_iter {
        opts.max_iter = m;
    }
    opts
}

fn base_config(cli: &Cli, subcommand: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("subcommand".into(), json!(subcommand));
    m.insert("seed".into(), json!(cli.seed));
    m.insert("tol".into(), cli.tol.map_or(Value::Null, fnum));
    m.insert("max_iter".into(), json!(cli.max_iter));
    m.insert(
        "output".into(),
        cli.output
            .as_ref()
            .map_or(Value::Null, |p| json!(p.display().to_string())),
    );
    m.insert("format".into(), json!(cli.format));
    m
}

fn solution_payload(sol: &TodaSolution) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("converged".into(), json!(sol.converged));
    m.insert("iterations".into(), json!(sol.iterations));
    m.insert("final_residual".into(), fnum(sol.final_residual));
    m.insert("residual_history".into(), fvec(&sol.residual_history));
    m.insert(
        "grid".into(),
        json!({"n1": sol.grid.n1, "n2": sol.grid.n2, "nodes": sol.grid.nnodes()}),
    );
    m
}

fn dump_solution(cli: &Cli, sol: &TodaSolution, payload: &mut Map<String, Value>) -> Result<()> {
    if let Some(path) = &cli.output {
        let content = if cli.format == "csv" {
            out::solution_csv(sol)
        } else {
            format!("{}\n", out::solution_json(sol))
        };
        out::write_output(path, &content)?;
        payload.insert("solution_file".into(), json!(path.display().to_string()));
    }
    Ok(())
}

fn membership_json(m: &Membership) -> Value {
    match m {
        Membership::Trivial => json!({"kind": "trivial"}),
        Membership::Admissible => json!({"kind": "admissible"}),
        Membership::Rejected { constraint } => {
            json!({"kind": "rejected", "constraint": constraint})
        }
    }
}

type RunOutcome = std::result::Result<RunReport, (Error, Value)>;

fn run(cli: &Cli) -> RunOutcome {
    let wrap = |config: &Map<String, Value>| {
        let c = config.clone();
        move |e: Error| (e, Value::Object(c))
    };
    match &cli.command {
        Command::RootsysInfo { stype } => {
            let mut config = base_config(cli, "rootsys-info");
            config.insert("type".into(), json!(stype));
            let st = parse_type(stype).map_err(wrap(&config))?;
            let rs = build_root_system(st).map_err(wrap(&config))?;
            let payload = json!({
                "type": st.to_string(),
                "rank": rs.rank(),
                "dim_g": rs.dim_g(),
                "num_roots": 2 * rs.positive.len(),
                "h": rs.h,
                "psi": rs.psi,
                "highest_root": rs.highest.0,
                "positive_roots": rs.positive.iter().map(|r| r.0.clone()).collect::<Vec<_>>(),
                "cartan_matrix": rs.cartan,
                "pi_q": rs.weight_one_eigenroots().iter().map(|r| r.0.clone()).collect::<Vec<_>>(),
            });
            Ok(RunReport {
                status: Status::Ok,
                config: Value::Object(config),
                payload,
            })
        }
        Command::ChevalleyVerify { stype } => {
            let mut config = base_config(cli, "chevalley-verify");
            config.insert("type".into(), json!(stype));
            let st = parse_type(stype).map_err(wrap(&config))?;
            let lie = algebra(st).map_err(wrap(&config))?;
            let rep = verify_algebra(&lie);
            let status = if rep.passed() {
                Status::Ok
            } else {
                Status::VerificationFailed
            };
            let payload = json!({
                "type": st.to_string(),
                "dim": lie.dim,
                "passed": rep.passed(),
                "jacobi_ok": rep.jacobi_ok,
                "jacobi_triples": rep.jacobi_triples,
                "invariance_ok": rep.invariance_ok,
                "killing_trace_ok": rep.killing_trace_ok,
                "pairing_ok": rep.pairing_ok,
                "n_real_ok": rep.n_real_ok,
                "n_antisym_ok": rep.n_antisym_ok,
                "rho_involution_ok": rep.rho_involution_ok,
                "rho_automorphism_ok": rep.rho_automorphism_ok,
            });
            Ok(RunReport {
                status,
                config: Value::Object(config),
                payload,
            })
        }
        Command::SplitVerify { stype, samples } => {
            let mut config = base_config(cli, "split-verify");
            config.insert("type".into(), json!(stype));
            config.insert("samples".into(), json!(samples));
            let st = parse_type(stype).map_err(wrap(&config))?;
            let lie = algebra(st).map_err(wrap(&config))?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let tol = cli.tol.unwrap_or(1e-8);
            let rep = split_suite(&lie, *samples, tol, &mut rng).map_err(wrap(&config))?;
            let status = if rep.passed() {
                Status::Ok
            } else {
                Status::VerificationFailed
            };
            let payload = json!({
                "algebra": rep.algebra,
                "order": rep.order,
                "g0_dim": rep.g0_dim,
                "g1_dim": rep.g1_dim,
                "eigenspace_dims": rep.eigenspace_dims,
                "grading_ok": rep.grading_ok,
                "samples": rep.samples,
                "cyclic_all_rs": rep.cyclic_all_rs,
                "cyclic_all_split": rep.cyclic_all_split,
                "noncyclic_none_rs": rep.noncyclic_none_rs,
                "oracle_disagreements": rep.oracle_disagreements,
                "max_bracket_residual": fnum(rep.max_bracket_residual),
                "max_homogeneity_residual": fnum(rep.max_homogeneity_residual),
                "ambiguous_cases": rep.ambiguous_cases,
                "passed": rep.passed(),
            });
            Ok(RunReport {
                status,
                config: Value::Object(config),
                payload,
            })
        }
        Command::SplitRegion { stype, ord, beta } => {
            let mut config = base_config(cli, "split-region");
            config.insert("type".into(), json!(stype));
            config.insert("ord".into(), json!(ord));
            config.insert("beta".into(), fvec(beta));
            let st = parse_type(stype).map_err(wrap(&config))?;
            let rs = build_root_system(st).map_err(wrap(&config))?;
            if beta.len() != rs.rank() {
                return Err((
                    Error::input(format!("beta must have {} components", rs.rank())),
                    Value::Object(config),
                ));
            }
            let region = ClassificationRegion::new(&rs, *ord);
            let membership = region.membership_eps(beta);
            let payload = json!({
                "h": region.h,
                "ord": region.ord,
                "c_theta": fnum(region.c_theta()),
                "d_positive": region.d_positive(),
                "admissible": membership == Membership::Admissible,
                "membership": membership_json(&membership),
            });
            Ok(RunReport {
                status: Status::Ok,
                config: Value::Object(config),
                payload,
            })
        }
        Command::Sl2 { stype, subset } => {
            let mut config = base_config(cli, "sl2");
            config.insert("type".into(), json!(stype));
            config.insert("subset".into(), json!(subset));
            let st = parse_type(stype).map_err(wrap(&config))?;
            let lie = algebra(st).map_err(wrap(&config))?;
            let tol = cli.tol.unwrap_or(1e-12);
            let subsets: Vec<Vec<PiQ>> = match subset {
                Some(items) => vec![parse_subset(lie.rank(), items).map_err(wrap(&config))?],
                None => all_proper_subsets(lie.rank()),
            };
            let mut entries = Vec::new();
            let mut all_passed = true;
            for s in &subsets {
                let triple = compute_triple(&lie, s).map_err(wrap(&config))?;
                let cert = certify_triple(&lie, &triple, None);
                all_passed &= cert.passed(tol);
                entries.push(json!({
                    "subset": s.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "u_coords": triple.u_coords.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "u_sharp": triple.u_sharp.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "beta_sq": triple.beta_sq.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "beta": fvec(&triple.beta),
                    "cert": {
                        "r_bracket": fnum(cert.r_bracket),
                        "r_raise": fnum(cert.r_raise),
                        "r_lower": fnum(cert.r_lower),
                        "pairing_exact": cert.pairing_exact,
                        "passed": cert.passed(tol),
                    },
                }));
            }
            Ok(RunReport {
                status: if all_passed {
                    Status::Ok
                } else {
                    Status::VerificationFailed
                },
                config: Value::Object(config),
                payload: json!({"tolerance": fnum(tol), "triples": entries}),
            })
        }
        Command::TodaSolve { problem, init } | Command::TodaRadial { problem, init } => {
            let radial = matches!(cli.command, Command::TodaRadial { .. });
            let mut config =
                base_config(cli, if radial { "toda-radial" } else { "toda-solve" });
            config.insert("problem_file".into(), json!(problem.display().to_string()));
            config.insert("init".into(), json!(init));
            let text = std::fs::read_to_string(problem)
                .map_err(|e| Error::input(format!("cannot read {:?}: {}", problem, e)))
                .map_err(wrap(&config))?;
            let (st, mut prob) = toda::parse_problem(&text).map_err(wrap(&config))?;
            if let Some(t) = cli.tol {
                prob.solver.tol = t;
            }
            if let Some(m) = cli.max_iter {
                prob.solver.max_iter = m;
            }
            config.insert(
                "problem".into(),
                out::full_precision(
                    serde_json::to_value(toda::problem_json(st, &prob)).unwrap_or(Value::Null),
                ),
            );
            let lie = algebra(st).map_err(wrap(&config))?;
            let init = if init == "zero" {
                Init::Zero
            } else {
                Init::Harmonic
            };
            let sol = if radial {
                toda::solve_radial(&lie, &prob, init).map_err(wrap(&config))?
            } else {
                toda::solve_dirichlet(&lie, &prob, init).map_err(wrap(&config))?
            };
            let mut payload = solution_payload(&sol);
            payload.insert("algebra".into(), json!(st.to_string()));
            dump_solution(cli, &sol, &mut payload).map_err(wrap(&config))?;
            Ok(RunReport {
                status: if sol.converged {
                    Status::Ok
                } else {
                    Status::NumericError
                },
                config: Value::Object(config),
                payload: Value::Object(payload),
            })
        }
        Command::ModelVerify {
            stype,
            beta,
            subset,
            orders,
            t,
            rmin,
            rmax,
            grids,
        } => {
            let mut config = base_config(cli, "model-verify");
            config.insert("type".into(), json!(stype));
            config.insert("beta_eps".into(), fvec(beta));
            config.insert("subset".into(), json!(subset));
            config.insert("t".into(), fnum(*t));
            config.insert("rmin".into(), fnum(*rmin));
            config.insert("rmax".into(), fnum(*rmax));
            config.insert("grids".into(), json!(grids));
            let st = parse_type(stype).map_err(wrap(&config))?;
            let lie = algebra(st).map_err(wrap(&config))?;
            if beta.len() != lie.rank() {
                return Err((
                    Error::input(format!("beta must have {} components", lie.rank())),
                    Value::Object(config),
                ));
            }
            let subset = parse_subset(lie.rank(), subset).map_err(wrap(&config))?;
            let beta_sharp = lie.rs.eps_to_sharp(beta);
            let orders: Vec<i64> = match orders {
                Some(o) => o.clone(),
                None => subset
                    .iter()
                    .map(|p| lie.rs.root_value_f64(&p.root(&lie.rs), &beta_sharp).round() as i64)
                    .collect(),
            };
            config.insert("orders".into(), json!(orders));
            if *rmin <= 0.0 || rmax <= rmin || *rmax >= 1.0 {
                return Err((
                    Error::input("model annulus requires 0 < rmin < rmax < 1"),
                    Value::Object(config),
                ));
            }
            let model =
                ModelMetric::new(&lie, beta_sharp, subset, orders, *t).map_err(wrap(&config))?;
            let grids = parse_grids(grids).map_err(wrap(&config))?;
            let cert = toda::certify_model(&lie, &model, rmin.ln(), rmax.ln(), &grids)
                .map_err(wrap(&config))?;
            let pass = cert.orders.iter().all(|o| (1.8..=2.2).contains(o));
            let payload = json!({
                "grids": cert.grids,
                "residuals": fvec(&cert.residuals),
                "orders": fvec(&cert.orders),
                "order_window": [fnum(1.8), fnum(2.2)],
                "passed": pass,
            });
            Ok(RunReport {
                status: if pass {
                    Status::Ok
                } else {
                    Status::VerificationFailed
                },
                config: Value::Object(config),
                payload,
            })
        }
        Command::DecayStudy {
            stype,
            b,
            delta,
            t_list,
            half_width,
            nodes,
            inner_fraction,
        } => {
            let mut config = base_config(cli, "decay-study");
            config.insert("type".into(), json!(stype));
            config.insert("b".into(), fvec(b));
            config.insert("delta_sharp".into(), fvec(delta));
            config.insert("t_list".into(), fvec(t_list));
            config.insert("half_width".into(), fnum(*half_width));
            config.insert("nodes".into(), json!(nodes));
            config.insert("inner_fraction".into(), fnum(*inner_fraction));
            let st = parse_type(stype).map_err(wrap(&config))?;
            let lie = algebra(st).map_err(wrap(&config))?;
            if b.len() != lie.rank() + 1 {
                return Err((
                    Error::input(format!("b must have {} components", lie.rank() + 1)),
                    Value::Object(config),
                ));
            }
            if delta.len() != lie.rank() {
                return Err((
                    Error::input(format!("delta must have {} components", lie.rank())),
                    Value::Object(config),
                ));
            }
            let domain = DomainSpec::Rectangle {
                x0: -half_width,
                x1: *half_width,
                y0: -half_width,
                y1: *half_width,
                nx: *nodes,
                ny: *nodes,
            };
            let study = toda::decay_study(
                &lie,
                &CyclicElement::from_reals(b),
                t_list,
                delta,
                &domain,
                *inner_fraction,
                &solver_opts(cli),
            )
            .map_err(wrap(&config))?;
            let payload = json!({
                "t_values": fvec(&study.t_values),
                "m_values": fvec(&study.m_values),
                "fit": study.fit.as_ref().map(|f| json!({
                    "slope": fnum(f.slope),
                    "intercept": fnum(f.intercept),
                    "r2": fnum(f.r2),
                })),
                "monotone_nonincreasing": study.monotone_nonincreasing,
                "iterations": study.iterations,
                "solve_residuals": fvec(&study.residuals),
            });
            Ok(RunReport {
                status: Status::Ok,
                config: Value::Object(config),
                payload,
            })
        }
        Command::SlopeFit {
            stype,
            beta,
            subset,
            orders,
            t,
            s_min,
            s_max,
            ns,
            ntheta,
            window,
            ord,
            solve,
        } => {
            let mut config = base_config(cli, "slope-fit");
            config.insert("type".into(), json!(stype));
            config.insert("beta_eps".into(), fvec(beta));
            config.insert("subset".into(), json!(subset));
            config.insert("t".into(), fnum(*t));
            config.insert("s_min".into(), fnum(*s_min));
            config.insert("s_max".into(), fnum(*s_max));
            config.insert("ns".into(), json!(ns));
            config.insert("ntheta".into(), json!(ntheta));
            config.insert("window".into(), json!(window));
            config.insert("ord".into(), json!(ord));
            config.insert("solve".into(), json!(solve));
            let st = parse_type(stype).map_err(wrap(&config))?;
            let lie = algebra(st).map_err(wrap(&config))?;
            if beta.len() != lie.rank() {
                return Err((
                    Error::input(format!("beta must have {} components", lie.rank())),
                    Value::Object(config),
                ));
            }
            let subset = parse_subset(lie.rank(), subset).map_err(wrap(&config))?;
            let beta_sharp = lie.rs.eps_to_sharp(beta);
            let orders: Vec<i64> = match orders {
                Some(o) => o.clone(),
                None => subset
                    .iter()
                    .map(|p| lie.rs.root_value_f64(&p.root(&lie.rs), &beta_sharp).round() as i64)
                    .collect(),
            };
            config.insert("orders".into(), json!(orders));
            let model =
                ModelMetric::new(&lie, beta_sharp, subset, orders, *t).map_err(wrap(&config))?;
            let domain = DomainSpec::Annulus {
                s0: *s_min,
                s1: *s_max,
                ns: *ns,
                ntheta: *ntheta,
            };
            let window = parse_window(window).map_err(wrap(&config))?;
            let (sol, solved) = if *solve {
                let prob = model
                    .problem(&lie, domain.clone(), solver_opts(cli))
                    .map_err(wrap(&config))?;
                let grid = toda::Grid::new(&domain).map_err(wrap(&config))?;
                let init = Init::Given(model.field_on(&grid).map_err(wrap(&config))?);
                let s = toda::solve_dirichlet(&lie, &prob, init).map_err(wrap(&config))?;
                (s, true)
            } else {
                let grid = toda::Grid::new(&domain).map_err(wrap(&config))?;
                let xi = model.field_on(&grid).map_err(wrap(&config))?;
                (
                    TodaSolution {
                        grid,
                        ell: lie.rank(),
                        xi,
                        residual_history: vec![],
                        final_residual: 0.0,
                        iterations: 0,
                        converged: true,
                    },
                    false,
                )
            };
            let fit = toda::asymptotic_slope(&lie, &sol, window).map_err(wrap(&config))?;
            let mut payload = Map::new();
            payload.insert("beta_eps_estimate".into(), fvec(&fit.beta_eps));
            payload.insert("beta_sharp_estimate".into(), fvec(&fit.beta_sharp));
            payload.insert("beta_eps_target".into(), fvec(beta));
            payload.insert("log_coeffs".into(), fvec(&fit.log_coeffs));
            payload.insert("max_fit_residual".into(), fnum(fit.max_fit_residual));
            payload.insert("nodes_used".into(), json!(fit.nodes_used));
            payload.insert("solved".into(), json!(solved));
            if solved {
                payload.insert("solve".into(), Value::Object(solution_payload(&sol)));
            }
            let max_err = fit
                .beta_eps
                .iter()
                .zip(beta)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            payload.insert("max_coordinate_error".into(), fnum(max_err));
            if let Some(m) = ord {
                let region = ClassificationRegion::new(&lie.rs, *m);
                let membership = region.membership_eps_tol(&fit.beta_eps, 1e-9);
                payload.insert(
                    "region".into(),
                    json!({
                        "ord": m,
                        "d_positive": region.d_positive(),
                        "admissible": membership == Membership::Admissible,
                        "membership": membership_json(&membership),
                    }),
                );
            }
            dump_solution(cli, &sol, &mut payload).map_err(wrap(&config))?;
            let pass = max_err <= 0.05;
            Ok(RunReport {
                status: if pass {
                    Status::Ok
                } else {
                    Status::VerificationFailed
                },
                config: Value::Object(config),
                payload: Value::Object(payload),
            })
        }
    }
}

fn main() {
    let started = Instant::now();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(report) => report.finish(started),
        Err((err, config)) => error_report(&err, config).finish(started),
    };
    std::process::exit(code);
}
