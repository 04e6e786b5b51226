//! `quathom selftest`: randomized invariant checks with a fixed seed.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::report::{Diagnostic, Report};
use crate::field::{Field, GaussRat};
use crate::germ::{homogenize_model, make_chart, quaternionic_line, PlaneUnionModel};
use crate::homog::{eigen_coordinates, solve_shifted_eigen, solve_shifted_eigen_iterative, LocalRingPresentation};
use crate::linalg::Matrix;
use crate::quatlin::{
    closed_form_lambda, hodge_frame, scalar_of_phi, InducedComplexStructure, Quaternion, QuaternionModule,
    SCALAR_TOL,
};
use crate::sample::{random_automorphism, random_homogenizing_map, random_separated_pair, random_series, random_structure};
use crate::series::{Ideal, SeriesRing, SubstitutionMap};

type Check = (&'static str, Result<String, String>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn schur_and_closed_form(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let module = QuaternionModule::<Complex64>::new(1 + trial % 2);
        let (i, j) = (random_structure(rng), random_structure(rng));
        let s = scalar_of_phi(&module, &i, &j).map_err(|e| e.to_string())?;
        let gap = (s.lambda - closed_form_lambda(&i, &j)).norm();
        ensure(gap < SCALAR_TOL, || format!("closed form off by {gap:e} for I = ({}), J = ({})", i.render(), j.render()))?;
        worst = worst.max(s.residual);
    }
    Ok(format!("100 pairs, worst residual {worst:e}"))
}

fn contraction(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let module = QuaternionModule::<GaussRat>::new(1);
    for axis in 0..3 {
        let i = InducedComplexStructure::<GaussRat>::axis(axis);
        let same = scalar_of_phi(&module, &i, &i).map_err(|e| e.to_string())?.lambda;
        let opposite = scalar_of_phi(&module, &i, &i.negated()).map_err(|e| e.to_string())?.lambda;
        ensure(same.is_one() && opposite.is_zero(), || format!("axis {axis}: {} and {}", same.render(), opposite.render()))?;
    }
    let module = QuaternionModule::<Complex64>::new(2);
    for _ in 0..50 {
        let (i, j) = random_separated_pair(rng, 0.1);
        let l = scalar_of_phi(&module, &i, &j).map_err(|e| e.to_string())?.lambda.re;
        ensure(l > 1e-3 && l < 1.0 - 1e-3, || format!("lambda {l} too close to the ends"))?;
    }
    Ok("axes exact, 50 separated pairs strictly inside (0, 1)".into())
}

fn hodge_projectors(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for n in 1..=2 {
        let module = QuaternionModule::<Complex64>::new(n);
        let frame = hodge_frame(&module, &random_structure(rng)).map_err(|e| e.to_string())?;
        let p = frame.projector10();
        ensure(p.mul(p).approx_eq(p, SCALAR_TOL), || "projector not idempotent".into())?;
        ensure(p.add(&p.conj()).approx_eq(&Matrix::identity(4 * n), SCALAR_TOL), || "P + conj(P) is not the identity".into())?;
        ensure(p.rank() == 2 * n, || format!("rank {} instead of {}", p.rank(), 2 * n))?;
    }
    Ok("idempotent, rank 2n, conjugate-complementary".into())
}

fn substitution_laws(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let ring = SeriesRing::new(&["x", "y"], 6).map_err(|e| e.to_string())?;
    for _ in 0..10 {
        let m = random_automorphism(rng, &ring);
        let (f, g) = (random_series(rng, &ring, 0, 4, 4), random_series(rng, &ring, 0, 4, 4));
        let lhs = m.substitute(&(&f * &g)).map_err(|e| e.to_string())?;
        let rhs = &m.substitute(&f).map_err(|e| e.to_string())? * &m.substitute(&g).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || "substitution is not multiplicative".into())?;
        let inv = m.invert().map_err(|e| e.to_string())?;
        let id = SubstitutionMap::identity(&ring);
        ensure(m.compose(&inv).map_err(|e| e.to_string())? == id, || "map composed with its inverse is not the identity".into())?;
    }
    Ok("10 automorphisms: multiplicative, invertible".into())
}

fn shifted_eigen(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let lambda = GaussRat::ratio(1, 2);
    for trial in 0..10 {
        let ring = SeriesRing::new(&["x", "y", "z"][..2 + trial % 2], 8).map_err(|e| e.to_string())?;
        let e = random_homogenizing_map(rng, &ring, &lambda);
        let r = random_series(rng, &ring, 2, 5, 4);
        let c = solve_shifted_eigen(&e, &lambda, &r).map_err(|e| e.to_string())?;
        let residual = &(&e.substitute(&c).map_err(|e| e.to_string())? - &c.scale(&lambda)) - &r;
        ensure(residual.is_zero(), || format!("residual {}", residual.render()))?;
        let other = solve_shifted_eigen_iterative(&e, &lambda, &r).map_err(|e| e.to_string())?;
        ensure(other == c, || "solution paths disagree".into())?;
        let a = LocalRingPresentation::free(&ring);
        for f in eigen_coordinates(&e, &a).map_err(|e| e.to_string())? {
            let defect = &e.substitute(&f).map_err(|e| e.to_string())? - &f.scale(&lambda);
            ensure(defect.is_zero(), || format!("e(f) - f/2 = {}", defect.render()))?;
        }
    }
    Ok("10 maps: residual 0, paths agree, eigen identity exact".into())
}

fn standard_bases(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let ring = SeriesRing::new(&["x", "y"], 6).map_err(|e| e.to_string())?;
    for _ in 0..5 {
        let gens = (0..2).map(|_| random_series(rng, &ring, 2, 4, 3)).collect();
        let ideal = Ideal::new(&ring, gens).map_err(|e| e.to_string())?;
        let basis = ideal.groebner().map_err(|e| e.to_string())?;
        let same = Ideal::new(&ring, basis.cached_basis().unwrap_or_default().to_vec()).map_err(|e| e.to_string())?;
        ensure(ideal.equals(&same).map_err(|e| e.to_string())?, || "standard basis generates another ideal".into())?;
    }
    Ok("5 random ideals: basis generates the same ideal".into())
}

fn two_line_model() -> Result<String, String> {
    let q = |c: i64| Quaternion::new(GaussRat::int(c), GaussRat::int(0), GaussRat::int(0), GaussRat::int(0));
    let planes = vec![
        quaternionic_line(&[q(1), q(0)]).map_err(|e| e.to_string())?,
        quaternionic_line(&[q(0), q(1)]).map_err(|e| e.to_string())?,
    ];
    let chart = make_chart(2, &InducedComplexStructure::axis(0), 4).map_err(|e| e.to_string())?;
    let model = PlaneUnionModel::new(planes, chart).map_err(|e| e.to_string())?;
    let mc = homogenize_model(&model, &InducedComplexStructure::axis(1)).map_err(|e| e.to_string())?;
    ensure(mc.matches_model && mc.gr_consistent && mc.check.passed, || format!("{:?}", mc.check.reasons))?;
    ensure(mc.certificate.lambda == Some(GaussRat::ratio(1, 2)), || "Psi is not (1/2)*id".into())?;
    Ok("Psi = (1/2)*id, certificate matches the model".into())
}

/// Runs every check; each failure becomes an error diagnostic.
pub fn selftest(seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks: Vec<Check> = vec![
        ("schur_scalar_and_closed_form", schur_and_closed_form(&mut rng)),
        ("contraction_bounds", contraction(&mut rng)),
        ("hodge_projectors", hodge_projectors(&mut rng)),
        ("substitution_laws", substitution_laws(&mut rng)),
        ("shifted_eigen", shifted_eigen(&mut rng)),
        ("standard_bases", standard_bases(&mut rng)),
        ("two_line_model", two_line_model()),
    ];
    let mut report = Report::new(json!({"kind": "selftest", "seed": seed}));
    let mut rows: Vec<Value> = Vec::new();
    for (name, outcome) in checks {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if !passed {
            report.push(Diagnostic::error("SelftestFailed", format!("{name}: {detail}")));
        }
        rows.push(json!({"name": name, "passed": passed, "detail": detail}));
    }
    report.set("seed", seed);
    report.set("checks", rows);
    report
}
