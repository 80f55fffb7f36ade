use serde::Serialize;
use surfpoisson::config::IdentityCase;
use surfpoisson::divfield::{solve_div_system, write_field_csv, DivSolveReport};
use surfpoisson::functions::SmoothScalar;
use surfpoisson::geometry::validate_chart;
use surfpoisson::mesh::{generate_mesh, write_mesh_csv, ParamMesh};
use surfpoisson::solver::{solve_poisson, write_solution_csv, NeumannSystem, SolveReport};
use surfpoisson::verify::{
    check_coercivity, check_divergence_theorem, check_integration_by_parts, convergence_study,
    estimate_poincare_constant, solution_errors, write_identities_csv, CoercivityReport, EigenOptions,
    PoincareEstimate,
};
use surfpoisson::{Error, Result};

use crate::output::Run;
use crate::{CommonArgs, Status};

#[derive(Serialize)]
struct MeshInfo {
    vertices: usize,
    triangles: usize,
    boundary_edges: usize,
    h_max: f64,
    min_angle_degrees: f64,
}

impl MeshInfo {
    fn of(mesh: &ParamMesh) -> Self {
        MeshInfo {
            vertices: mesh.num_vertices(),
            triangles: mesh.num_triangles(),
            boundary_edges: mesh.boundary_edges().len(),
            h_max: mesh.max_edge_length(),
            min_angle_degrees: mesh.min_angle_degrees(),
        }
    }
}

fn status_of(converged: bool) -> Status {
    if converged {
        Status::Ok
    } else {
        Status::NotConverged
    }
}

pub fn validate(args: &CommonArgs) -> Result<Status> {
    let run = Run::load(args)?;
    let chart = run.config.build_chart()?;
    let report = validate_chart(&chart, run.config.validation_sampling);
    run.write_json("validation.json", "validate", &report)?;
    run.say(format!(
        "{}: lambda_min = {:.6e}, lambda_max = {:.6e}, degenerate samples = {}, {}",
        report.chart,
        report.lambda_min_est,
        report.lambda_max_est,
        report.degenerate_samples,
        if report.passed { "passed" } else { "FAILED" }
    ));
    run.wrote("validation.json");
    Ok(if report.passed { Status::Ok } else { Status::Degenerate })
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    chart: &'a str,
    mesh: MeshInfo,
    area: f64,
    #[serde(flatten)]
    report: &'a SolveReport,
    l2_error: Option<f64>,
    h1_error: Option<f64>,
}

pub fn solve(args: &CommonArgs) -> Result<Status> {
    let run = Run::load(args)?;
    let cfg = &run.config;
    let chart = cfg.build_chart()?;
    let quad = cfg.quadrature()?;
    let mesh = generate_mesh(&cfg.domain, cfg.mesh.h)?;
    let f = cfg.problem.forcing();
    let (system, report) = solve_poisson(&chart, &mesh, &quad, |fr| f.value(fr.point), &cfg.neumann_options())?;
    let errors = match cfg.problem.manufactured {
        Some(m) => Some(solution_errors(&chart, &mesh, &quad, &report.solution, &m.exact())?),
        None => None,
    };

    write_mesh_csv(&mesh, &run.path("mesh"), Some(&run.comment()))?;
    write_solution_csv(run.create("solution.csv")?, &mesh, &report.solution, Some(&run.comment()))?;
    let body = SolveOutput {
        chart: chart.kind().name(),
        mesh: MeshInfo::of(&mesh),
        area: system.area(),
        report: &report,
        l2_error: errors.map(|e| e.0),
        h1_error: errors.map(|e| e.1),
    };
    run.write_json("report.json", "solve", &body)?;

    run.say(format!(
        "{} iterations, residual {:.3e}, mean {:.3e}, flux residual {:.3e}, compatibility defect {:.3e}",
        report.iterations,
        report.algebraic_residual,
        report.mean_value,
        report.flux_residual.unwrap_or(f64::NAN),
        report.compatibility_defect
    ));
    if let Some((l2, h1)) = errors {
        run.say(format!("L2 error {l2:.6e}, H1 error {h1:.6e}"));
    }
    run.wrote("solution.csv");
    run.wrote("report.json");
    if !report.converged {
        eprintln!("error: solver did not reach tol = {:e}", cfg.solver.tol);
    }
    Ok(status_of(report.converged))
}

#[derive(Serialize)]
struct DivOutput<'a> {
    chart: &'a str,
    mesh: MeshInfo,
    #[serde(flatten)]
    report: &'a DivSolveReport,
}

pub fn divfield(args: &CommonArgs) -> Result<Status> {
    let run = Run::load(args)?;
    let cfg = &run.config;
    let chart = cfg.build_chart()?;
    let quad = cfg.quadrature()?;
    let mesh = generate_mesh(&cfg.domain, cfg.mesh.h)?;
    let f = cfg.problem.forcing();
    let report = solve_div_system(&chart, &mesh, &quad, &f, &cfg.problem.chi, &cfg.neumann_options())?;

    write_mesh_csv(&mesh, &run.path("mesh"), Some(&run.comment()))?;
    write_field_csv(run.create("field.csv")?, &mesh, &report.field, Some(&run.comment()))?;
    let body = DivOutput {
        chart: chart.kind().name(),
        mesh: MeshInfo::of(&mesh),
        report: &report,
    };
    run.write_json("divfield.json", "divfield", &body)?;

    let r = &report.residuals;
    run.say(format!(
        "div residual {:.3e}, normal residual {:.3e}, conormal residual {:.3e}, compatibility defect {:.3e}",
        r.div_residual, r.normal_residual, r.conormal_residual, report.compatibility_defect
    ));
    run.wrote("field.csv");
    run.wrote("divfield.json");
    Ok(status_of(report.potential.converged))
}

pub fn identities(args: &CommonArgs) -> Result<Status> {
    let run = Run::load(args)?;
    let cfg = &run.config;
    let chart = cfg.build_chart()?;
    let quad = cfg.quadrature()?;
    let mesh = generate_mesh(&cfg.domain, cfg.mesh.h)?;
    let mut reports = Vec::new();
    for case in cfg.identity_cases() {
        let mut report = match &case {
            IdentityCase::DivergenceTheorem { field } => check_divergence_theorem(&chart, &mesh, &quad, field)?,
            IdentityCase::IntegrationByParts { f, psi, j } => {
                check_integration_by_parts(&chart, &mesh, &quad, f, psi, *j)?
            }
        };
        report.name = case_label(&case);
        run.say(format!(
            "{}: lhs {:.12e}, rhs {:.12e}, rel defect {:.3e}",
            report.name, report.lhs, report.rhs, report.rel_defect
        ));
        reports.push(report);
    }
    write_identities_csv(run.create("identities.csv")?, &reports, Some(&run.comment()))?;
    run.wrote("identities.csv");
    Ok(Status::Ok)
}

/// `kind` followed by the compact JSON of the case's inputs.
fn case_label(case: &IdentityCase) -> String {
    match case {
        IdentityCase::DivergenceTheorem { field } => format!("divergence_theorem f={}", json(field)),
        IdentityCase::IntegrationByParts { f, psi, j } => {
            format!("integration_by_parts j={j} f={} psi={}", json(f), json(psi))
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

pub fn convergence(args: &CommonArgs) -> Result<Status> {
    let run = Run::load(args)?;
    let cfg = &run.config;
    let manufactured = cfg
        .problem
        .manufactured
        .ok_or_else(|| Error::Config("convergence needs problem.manufactured".into()))?;
    let chart = cfg.build_chart()?;
    let quad = cfg.quadrature()?;
    let (table, _) = convergence_study(
        &chart,
        &cfg.domain,
        &manufactured.exact(),
        &manufactured.forcing(),
        cfg.mesh.h,
        cfg.mesh.levels,
        &quad,
        &cfg.neumann_options(),
    )?;
    table.write_csv(run.create("convergence.csv")?, Some(&run.comment()))?;
    for row in &table.rows {
        run.say(format!(
            "level {} h {:.4} L2 {:.4e} H1 {:.4e} rates {} / {}",
            row.level,
            row.h,
            row.l2_error,
            row.h1_error,
            rate(row.l2_rate),
            rate(row.h1_rate)
        ));
    }
    run.wrote("convergence.csv");
    Ok(Status::Ok)
}

fn rate(r: Option<f64>) -> String {
    r.map_or_else(|| "-".into(), |r| format!("{r:.3}"))
}

#[derive(Serialize)]
struct EigenOutput<'a> {
    chart: &'a str,
    mesh: MeshInfo,
    area: f64,
    #[serde(flatten)]
    estimate: &'a PoincareEstimate,
    coercivity: CoercivityReport,
}

pub fn eigen(args: &CommonArgs) -> Result<Status> {
    let run = Run::load(args)?;
    let cfg = &run.config;
    let chart = cfg.build_chart()?;
    let quad = cfg.quadrature()?;
    let mesh = generate_mesh(&cfg.domain, cfg.mesh.h)?;
    let system = NeumannSystem::assemble(&chart, &mesh, &quad)?;
    let opts = EigenOptions {
        seed: run.seed,
        ..EigenOptions::default()
    };
    let estimate = estimate_poincare_constant(&system.stiffness, &system.mass, &opts)?;
    let coercivity = check_coercivity(&system.stiffness, &system.mass, estimate.c_star, cfg.samples, run.seed);
    run.say(format!(
        "lambda1 = {:.8}, C* = {:.8}, {} iterations, min coercivity ratio {:.10}",
        estimate.lambda1, estimate.c_star, estimate.iterations, coercivity.min_ratio
    ));
    let body = EigenOutput {
        chart: chart.kind().name(),
        mesh: MeshInfo::of(&mesh),
        area: system.area(),
        estimate: &estimate,
        coercivity,
    };
    run.write_json("eigen.json", "eigen", &body)?;
    run.wrote("eigen.json");
    Ok(Status::Ok)
}
