//! Running jobs and rendering their reports.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::{Backend, JobFile, JobKind, PlaneSpec, StructureSpec};
use crate::error::{Error, Result};
use crate::field::{Field, GaussRat};
use crate::germ::{
    homogenize_model, make_chart, normalization_report, psi_endomorphism, quaternionic_line, verify_psi_invariance,
    GermChart, ModelCertificate, Plane, PlaneUnionModel,
};
use crate::homog::{
    gr_consistency, homogeneous_presentation, lhs_certificate_check, solve_shifted_eigen, solve_shifted_eigen_iterative,
    HomogenizingCertificate, LocalRingPresentation, FLOAT_RESIDUAL_TOL,
};
use crate::quatlin::{
    closed_form_lambda, commutes_with_su2, hodge_frame, phi_from_frames, scalar_of_matrix, scalar_of_phi,
    InducedComplexStructure, Quaternion, QuaternionModule, SCALAR_TOL,
};
use crate::series::{Ideal, Series, SeriesRing, SubstitutionMap};

/// Version of the JSON layout produced by [`Report::to_value`].
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    /// Makes the process exit nonzero.
    Error,
    /// A checked conjecture that did not hold.
    Finding,
    Warning,
}

impl Severity {
    pub fn name(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Finding => "finding",
            Severity::Warning => "warning",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, code: code.into(), message: message.into() }
    }

    fn from_error(err: &Error) -> Self {
        Diagnostic::error(err.code(), err.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    /// `null` when the job did not parse.
    pub job: Value,
    pub results: Map<String, Value>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Report {
    pub(crate) fn new(job: Value) -> Self {
        Report { job, results: Map::new(), diagnostics: Vec::new() }
    }

    pub fn is_ok(&self) -> bool {
        self.diagnostics.iter().all(|d| d.severity != Severity::Error)
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_ok() {
            0
        } else {
            1
        }
    }

    pub(crate) fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub(crate) fn push(&mut self, d: Diagnostic) {
        self.diagnostics.push(d);
    }

    pub fn result(&self, key: &str) -> Option<&Value> {
        self.results.get(key)
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.diagnostics.iter().any(|d| d.code == code)
    }

    /// Keys are sorted, so equal reports serialize to equal bytes.
    pub fn to_value(&self) -> Value {
        let diagnostics: Vec<Value> = self
            .diagnostics
            .iter()
            .map(|d| json!({"severity": d.severity.name(), "code": d.code, "message": d.message}))
            .collect();
        json!({
            "job": self.job,
            "results": Value::Object(self.results.clone()),
            "diagnostics": diagnostics,
            "status": if self.is_ok() { "ok" } else { "error" },
            "version": {"quathom": env!("CARGO_PKG_VERSION"), "report_schema": REPORT_SCHEMA},
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }

    /// JSON for several reports: a single object for one, an array otherwise.
    pub fn many_to_json(reports: &[Report]) -> String {
        if let [one] = reports {
            return one.to_json();
        }
        let values: Vec<Value> = reports.iter().map(Report::to_value).collect();
        let mut s = serde_json::to_string_pretty(&values).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let title = match &self.job {
            Value::Object(job) => {
                let kind = job.get("kind").and_then(Value::as_str).unwrap_or("unknown");
                match job.get("backend").and_then(Value::as_str) {
                    Some(backend) => format!(
                        "{kind} job ({backend} backend{})",
                        job.get("N").and_then(Value::as_u64).map(|n| format!(", N = {n}")).unwrap_or_default()
                    ),
                    None => kind.to_string(),
                }
            }
            _ => "unparsed job".to_string(),
        };
        out.push_str(&title);
        out.push('\n');
        out.push_str(&format!("status: {}\n", if self.is_ok() { "ok" } else { "error" }));
        for (k, v) in &self.results {
            render_text(k, v, 1, &mut out);
        }
        for d in &self.diagnostics {
            out.push_str(&format!("[{}] {}: {}\n", d.severity.name(), d.code, d.message));
        }
        out
    }
}

fn render_text(key: &str, value: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let scalar = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match value {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                render_text(k, v, depth + 1, out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", joined.join(", ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (idx, v) in items.iter().enumerate() {
                render_text(&format!("[{idx}]"), v, depth + 1, out);
            }
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
    }
}

fn job_echo(job: &JobFile) -> Value {
    json!({
        "kind": job.kind.name(),
        "backend": job.backend.name(),
        "N": job.truncation,
        "source": job.serialize(),
    })
}

/// Parses `text` and runs it; parse failures become error diagnostics.
pub fn run_source(text: &str) -> Report {
    match JobFile::parse(text) {
        Ok(job) => run_job(&job),
        Err(err) => {
            let mut report = Report::new(Value::Null);
            report.push(Diagnostic::from_error(&err));
            report
        }
    }
}

pub fn run_job(job: &JobFile) -> Report {
    let mut report = Report::new(job_echo(job));
    let outcome = match job.backend {
        Backend::Exact => run_kind::<GaussRat>(job, &mut report),
        Backend::Float => run_kind::<Complex64>(job, &mut report),
    };
    if let Err(err) = outcome {
        report.push(Diagnostic::from_error(&err));
    }
    report
}

fn run_kind<F: Field>(job: &JobFile, report: &mut Report) -> Result<()> {
    match job.kind {
        JobKind::Lambda => run_lambda::<F>(job, report),
        JobKind::SolveEigen => run_solve_eigen::<F>(job, report),
        JobKind::Homogenize => run_homogenize::<F>(job, report),
        JobKind::Psi => run_psi::<F>(job, report),
        JobKind::Planes => run_planes::<F>(job, report),
    }
}

fn missing(field: &str) -> Error {
    Error::validation(field, "missing")
}

fn convert<F: Field>(s: &Series<GaussRat>, ring: &SeriesRing) -> Result<Series<F>> {
    s.convert(ring, F::from_gauss)
}

fn structure<F: Field>(spec: Option<&StructureSpec>, field: &str) -> Result<InducedComplexStructure<F>> {
    match spec.ok_or_else(|| missing(field))? {
        StructureSpec::Unit([a, b, c]) => InducedComplexStructure::new(F::from_gauss(a), F::from_gauss(b), F::from_gauss(c)),
        StructureSpec::Direction([a, b, c]) => {
            InducedComplexStructure::from_direction(F::from_gauss(a), F::from_gauss(b), F::from_gauss(c))
        }
    }
}

fn render_all<F: Field>(fs: &[Series<F>]) -> Vec<String> {
    fs.iter().map(Series::render).collect()
}

fn render_map<F: Field>(map: &SubstitutionMap<F>) -> Vec<String> {
    map.ring().vars().iter().zip(map.images()).map(|(v, f)| format!("{v} -> {}", f.render())).collect()
}

fn run_lambda<F: Field>(job: &JobFile, report: &mut Report) -> Result<()> {
    let module = QuaternionModule::<F>::new(job.n.ok_or_else(|| missing("n"))?);
    let i = structure::<F>(job.i.as_ref(), "I")?;
    let j = structure::<F>(job.j.as_ref(), "J")?;
    report.set("I", i.render());
    report.set("J", j.render());
    let fi = hodge_frame(&module, &i)?;
    let fj = hodge_frame(&module, &j)?;
    let phi = phi_from_frames(&fi, &fj);
    report.set("holomorphic_dim", phi.rows());
    let schur = scalar_of_matrix(&phi)?;
    report.set("lambda", schur.lambda.render());
    report.set("lambda_approx", schur.lambda.to_c64().re);
    report.set("residual", schur.residual);
    let closed = closed_form_lambda(&i, &j);
    let agrees = closed.approx_eq(&schur.lambda, SCALAR_TOL);
    report.set("closed_form", closed.render());
    report.set("closed_form_agrees", agrees);
    if !agrees {
        report.push(Diagnostic {
            severity: Severity::Finding,
            code: "ClosedFormDisagreement".into(),
            message: format!("(1 + <I, J>)/2 = {} but lambda = {}", closed.render(), schur.lambda.render()),
        });
    }
    let su2 = commutes_with_su2(&module, &fi, &phi);
    report.set("su2_commutes", su2);
    if !su2 {
        report.push(Diagnostic::error("Su2CommutationFailed", "Phi does not commute with the quaternion action"));
    }
    Ok(())
}

fn job_map<F: Field>(job: &JobFile, ring: &SeriesRing) -> Result<SubstitutionMap<F>> {
    let images = job.map.as_ref().ok_or_else(|| missing("map"))?;
    let map = SubstitutionMap::new(ring, images.iter().map(|f| convert(f, ring)).collect::<Result<_>>()?)?;
    let Some(change) = &job.conjugate else { return Ok(map) };
    let change = SubstitutionMap::new(ring, change.iter().map(|f| convert(f, ring)).collect::<Result<_>>()?)?;
    change.compose(&map.compose(&change.invert()?)?)
}

fn run_solve_eigen<F: Field>(job: &JobFile, report: &mut Report) -> Result<()> {
    let ring = job.ring()?;
    let e = job_map::<F>(job, &ring)?;
    let lambda = match &job.lambda {
        Some(l) => F::from_gauss(l),
        None => e.linear_part().is_scalar(SCALAR_TOL).ok_or(Error::NotScalarDifferential)?,
    };
    let r = convert::<F>(job.r.as_ref().ok_or_else(|| missing("r"))?, &ring)?;
    report.set("lambda", lambda.render());
    let c = solve_shifted_eigen(&e, &lambda, &r)?;
    report.set("c", c.render());
    let residual = &(&e.substitute(&c)? - &c.scale(&lambda)) - &r;
    report.set("residual", residual.render());
    report.set("residual_max", residual.max_abs());
    let vanishes = if F::EXACT { residual.is_zero() } else { residual.max_abs() <= FLOAT_RESIDUAL_TOL };
    if !vanishes {
        report.push(Diagnostic::error("ResidualNonzero", format!("e(c) - lambda*c - r = {}", residual.render())));
    }
    let iterative = solve_shifted_eigen_iterative(&e, &lambda, &r)?;
    let agree = iterative.approx_eq(&c, FLOAT_RESIDUAL_TOL);
    report.set("solution_paths_agree", agree);
    if !agree {
        report.push(Diagnostic::error("SolverDisagreement", format!("fixed-point iteration gave {}", iterative.render())));
    }
    Ok(())
}

fn certificate_value<F: Field>(
    cert: &HomogenizingCertificate<F>,
    a: &LocalRingPresentation<F>,
    report: &mut Report,
) -> Result<Map<String, Value>> {
    let mut out = Map::new();
    let ideal = &cert.homogeneous_ideal;
    out.insert("lambda".into(), cert.lambda.as_ref().map(Field::render).into());
    out.insert("truncation".into(), cert.truncation.into());
    out.insert("identification".into(), json!(cert.identification().iter().map(|(y, x)| format!("{y} ~ {x}")).collect::<Vec<_>>()));
    out.insert("eigen_coordinates".into(), json!(render_all(&cert.eigen_coordinates)));
    out.insert("generators".into(), json!(render_all(ideal.generators())));
    out.insert("homogeneous".into(), ideal.is_homogeneous().into());
    out.insert("colength".into(), ideal.colength()?.into());
    let check = lhs_certificate_check(cert, a);
    out.insert("check".into(), json!({"passed": check.passed, "reasons": check.reasons}));
    if !check.passed {
        report.push(Diagnostic::error("CertificateCheckFailed", check.reasons.join("; ")));
    }
    let gr = gr_consistency(cert, a)?;
    out.insert("tangent_cone_agrees".into(), gr.into());
    if !gr {
        report.push(Diagnostic::error("TangentConeMismatch", "certified ideal differs from the tangent cone of A"));
    }
    Ok(out)
}

fn run_homogenize<F: Field>(job: &JobFile, report: &mut Report) -> Result<()> {
    let ring = job.ring()?;
    let relations = job.relations.iter().map(|g| convert(g, &ring)).collect::<Result<Vec<Series<F>>>>()?;
    let a = LocalRingPresentation::new(&ring, Ideal::new(&ring, relations)?)?;
    let e = job_map::<F>(job, &ring)?;
    if job.conjugate.is_some() {
        report.set("map", render_map(&e));
    }
    report.set("cotangent_dim", a.cotangent_dim());
    report.set("surviving", a.surviving_names());
    let cert = homogeneous_presentation(&e, &a)?;
    let value = certificate_value(&cert, &a, report)?;
    report.set("certificate", value);
    Ok(())
}

fn build_model<F: Field>(job: &JobFile, chart: &GermChart<F>) -> Result<PlaneUnionModel<F>> {
    let from = |x: &GaussRat| F::from_gauss(x);
    let planes = job
        .planes
        .iter()
        .map(|p| match p {
            PlaneSpec::Vectors(vs) => Plane::new(vs.iter().map(|v| v.iter().map(from).collect()).collect()),
            PlaneSpec::Line(cs) => {
                let v: Vec<Quaternion<F>> =
                    cs.iter().map(|c| Quaternion::new(from(c), F::zero(), F::zero(), F::zero())).collect();
                quaternionic_line(&v)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PlaneUnionModel::new(planes, chart.clone())
}

fn model_certificate_value<F: Field>(mc: &ModelCertificate<F>, model: &PlaneUnionModel<F>, report: &mut Report) -> Result<Value> {
    let a = LocalRingPresentation::new(model.chart.holo_ring(), model.union_ideal.clone())?;
    let mut out = certificate_value(&mc.certificate, &a, report)?;
    out.insert("matches_model".into(), mc.matches_model.into());
    if !mc.matches_model {
        report.push(Diagnostic::error("ModelMismatch", "certified ideal differs from the model ideal"));
    }
    Ok(Value::Object(out))
}

fn chart_for<F: Field>(job: &JobFile) -> Result<GermChart<F>> {
    let n = job.n.ok_or_else(|| missing("n"))?;
    let i = structure::<F>(job.i.as_ref(), "I")?;
    make_chart(n, &i, job.truncation.ok_or_else(|| missing("N"))?)
}

fn run_psi<F: Field>(job: &JobFile, report: &mut Report) -> Result<()> {
    let chart = chart_for::<F>(job)?;
    let j = structure::<F>(job.j.as_ref(), "J")?;
    let psi = psi_endomorphism(&chart, &j)?;
    report.set("map", render_map(&psi));
    report.set("is_linear", psi.is_linear());
    let schur = scalar_of_phi(chart.module(), chart.structure(), &j)?;
    report.set("lambda_phi", schur.lambda.render());
    let lambda = psi.linear_part().is_scalar(SCALAR_TOL);
    report.set("lambda", lambda.as_ref().map(Field::render));
    let agrees = lambda.as_ref().is_some_and(|l| l.approx_eq(&schur.lambda, SCALAR_TOL));
    report.set("lambda_matches_phi", agrees);
    if !agrees {
        report.push(Diagnostic::error("PsiLambdaMismatch", "linear part of Psi is not lambda(Phi)*id"));
    }
    if job.planes.is_empty() {
        return Ok(());
    }
    let model = build_model(job, &chart)?;
    let preserves = verify_psi_invariance(&model.union_ideal, &psi)?;
    report.set("model_ideal", render_all(model.union_ideal.generators()));
    report.set("preserves_model", preserves);
    if !preserves {
        return Err(Error::DoesNotPreserveIdeal(model.union_ideal.render()));
    }
    let mc = homogenize_model(&model, &j)?;
    let value = model_certificate_value(&mc, &model, report)?;
    report.set("certificate", value);
    Ok(())
}

fn run_planes<F: Field>(job: &JobFile, report: &mut Report) -> Result<()> {
    let chart = chart_for::<F>(job)?;
    let model = build_model(job, &chart)?;
    report.set("k", model.planes.len());
    report.set("holomorphic_coordinates", chart.holo_ring().vars().to_vec());
    report.set(
        "plane_ideals",
        model.plane_ideals.iter().map(|p| json!(render_all(p.generators()))).collect::<Vec<_>>(),
    );
    report.set("union_ideal", render_all(model.union_ideal.generators()));
    let norm = normalization_report(&model);
    let components: Vec<Value> = norm
        .components
        .iter()
        .map(|c| {
            json!({
                "real_dim": c.real_dim,
                "complex_dim": c.complex_dim,
                "jacobian_rank": c.jacobian_rank,
                "smooth": c.smooth,
                "real_dim_divisible_by_4": c.real_dim_divisible_by_4,
            })
        })
        .collect();
    let intersections: Vec<Value> = norm
        .intersections
        .iter()
        .map(|x| json!({"planes": [x.first, x.second], "complex_dim": x.complex_dim}))
        .collect();
    report.set(
        "normalization",
        json!({
            "components": components,
            "intersections": intersections,
            "normalization_smooth": norm.normalization_smooth,
            "already_normal": norm.already_normal,
        }),
    );
    if let Some(spec) = &job.j {
        let j = structure::<F>(Some(spec), "J")?;
        let mc = homogenize_model(&model, &j)?;
        let value = model_certificate_value(&mc, &model, report)?;
        report.set("certificate", value);
    }
    Ok(())
}
