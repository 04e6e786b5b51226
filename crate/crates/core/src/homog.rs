//! Homogenizing automorphisms of truncated complete local rings.
//!
//! An automorphism `e` of `A = ℂ[[x]]/I` is homogenizing when it acts on the
//! cotangent space `𝔪/𝔪²` as `λ·id` with `0 < |λ| < 1`. Such an `e` admits
//! eigen-coordinates `f_i` with `e(f_i) = λ·f_i`, and the presentation
//! `y_i ↦ f_i` has a homogeneous kernel.
//!
//! Everything is computed modulo `𝔪^{N+1}`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::quatlin::SCALAR_TOL;
use crate::series::{Ideal, Monomial, Series, SeriesRing, SubstitutionMap, Substituter};

/// Coefficient tolerance of float back-substitution checks.
pub const FLOAT_RESIDUAL_TOL: f64 = 1e-9;

/// `A = ring / relations`.
#[derive(Clone, Debug)]
pub struct LocalRingPresentation<F: Field> {
    ring: SeriesRing,
    relations: Ideal<F>,
    /// Reduced linear parts of the relations, one row per pivot.
    linear_rref: Matrix<F>,
    pivots: Vec<usize>,
    surviving: Vec<usize>,
    /// For each pivot `x_p`, a combination of the relations whose linear
    /// part is `x_p + Σ_f R[p, f]·x_f` over surviving `x_f`.
    pivot_relations: Vec<Series<F>>,
}

impl<F: Field> LocalRingPresentation<F> {
    pub fn new(ring: &SeriesRing, relations: Ideal<F>) -> Result<Self> {
        if relations.ring() != ring {
            return Err(Error::RingMismatch);
        }
        let n = ring.nvars();
        let gens = relations.generators();
        let k = gens.len();
        let aug = Matrix::from_fn(k, n + k, |r, c| {
            if c < n {
                gens[r].linear_coefficients()[c].clone()
            } else if c - n == r {
                F::one()
            } else {
                F::zero()
            }
        });
        let (red, aug_pivots) = aug.rref();
        let pivots: Vec<usize> = aug_pivots.iter().copied().filter(|&p| p < n).collect();
        let rows = pivots.len();
        let linear_rref = Matrix::from_fn(rows, n, |r, c| red[(r, c)].clone());
        let pivot_relations = (0..rows)
            .map(|r| {
                (0..k).fold(Series::zero(ring), |acc, j| &acc + &gens[j].scale(&red[(r, n + j)]))
            })
            .collect();
        let surviving = (0..n).filter(|c| !pivots.contains(c)).collect();
        Ok(LocalRingPresentation { ring: ring.clone(), relations, linear_rref, pivots, surviving, pivot_relations })
    }

    /// The power series ring itself.
    pub fn free(ring: &SeriesRing) -> Self {
        Self::new(ring, Ideal::zero(ring)).expect("zero ideal")
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn relations(&self) -> &Ideal<F> {
        &self.relations
    }

    /// `dim 𝔪/𝔪²`.
    pub fn cotangent_dim(&self) -> usize {
        self.surviving.len()
    }

    /// Indices of the coordinates spanning the cotangent space.
    pub fn surviving(&self) -> &[usize] {
        &self.surviving
    }

    /// Indices of the coordinates solved for by the implicit function theorem.
    pub fn eliminated(&self) -> &[usize] {
        &self.pivots
    }

    pub fn surviving_names(&self) -> Vec<String> {
        self.surviving.iter().map(|&i| self.ring.vars()[i].clone()).collect()
    }

    /// The same presentation at another truncation order.
    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        let ring = self.ring.with_truncation(truncation)?;
        Self::new(&ring, self.relations.reinterpret(&ring)?)
    }

    /// `A ≅ ℂ[[x_s]]/J` on the surviving coordinates, with `J ⊂ 𝔪²`.
    pub fn minimal_relations(&self) -> Result<MinimalRelations<F>> {
        let ring = SeriesRing::new(&self.surviving_names(), self.ring.truncation())?;
        let svars: Vec<Series<F>> = ring.vars_series();
        let n = self.ring.nvars();
        let mut retraction: Vec<Series<F>> = vec![Series::zero(&ring); n];
        for (j, &s) in self.surviving.iter().enumerate() {
            retraction[s] = svars[j].clone();
        }
        // x_p − g_p has no linear term in any pivot variable
        let rhs: Vec<Series<F>> = self
            .pivots
            .iter()
            .zip(&self.pivot_relations)
            .map(|(&p, g)| &self.ring.var::<F>(p) - g)
            .collect();
        for _ in 0..=ring.truncation() {
            let next: Vec<Series<F>> = {
                let mut sub = Substituter::new(&ring, &retraction);
                rhs.iter().map(|h| sub.apply(h)).collect()
            };
            let mut changed = false;
            for (&p, h) in self.pivots.iter().zip(next) {
                if !retraction[p].approx_eq(&h, 0.0) {
                    changed = true;
                }
                retraction[p] = h;
            }
            if !changed {
                break;
            }
        }
        let mut sub = Substituter::new(&ring, &retraction);
        let gens: Vec<Series<F>> = self
            .relations
            .generators()
            .iter()
            .map(|g| sub.apply(g))
            .filter(|g| !g.is_negligible(FLOAT_RESIDUAL_TOL))
            .collect();
        Ok(MinimalRelations { relations: Ideal::new(&ring, gens)?, ring, retraction })
    }
}

/// The result of eliminating the non-surviving coordinates.
#[derive(Clone, Debug)]
pub struct MinimalRelations<F: Field> {
    /// Ring on the surviving coordinates.
    pub ring: SeriesRing,
    /// Relations on the surviving coordinates, contained in `𝔪²`.
    pub relations: Ideal<F>,
    /// Image of each original coordinate in `ring`.
    pub retraction: Vec<Series<F>>,
}

impl<F: Field> MinimalRelations<F> {
    /// Transports an endomorphism of `A` to the surviving coordinates.
    pub fn transport(&self, e: &SubstitutionMap<F>, a: &LocalRingPresentation<F>) -> Result<SubstitutionMap<F>> {
        let mut sub = Substituter::new(&self.ring, &self.retraction);
        let images = a.surviving().iter().map(|&s| sub.apply(e.image(s))).collect();
        SubstitutionMap::new(&self.ring, images)
    }

    /// Views a series in the surviving coordinates as a series of `A`.
    pub fn embed(&self, f: &Series<F>, a: &LocalRingPresentation<F>) -> Series<F> {
        let images: Vec<Series<F>> = a.surviving().iter().map(|&s| a.ring().var(s)).collect();
        Substituter::new(a.ring(), &images).apply(f)
    }
}

trait Negligible {
    fn is_negligible(&self, tol: f64) -> bool;
}

impl<F: Field> Negligible for Series<F> {
    fn is_negligible(&self, tol: f64) -> bool {
        if F::EXACT {
            self.is_zero()
        } else {
            self.max_abs() <= tol
        }
    }
}

fn check_preserves<F: Field>(e: &SubstitutionMap<F>, a: &LocalRingPresentation<F>) -> Result<()> {
    if e.ring() != a.ring() {
        return Err(Error::RingMismatch);
    }
    if a.relations.generators().is_empty() {
        return Ok(());
    }
    let rel = a.relations.groebner()?;
    let mut sub = e.substituter();
    for g in rel.generators() {
        if !rel.contains(&sub.apply(g))? {
            return Err(Error::DoesNotPreserveIdeal(g.render()));
        }
    }
    Ok(())
}

/// The action of `e` on `𝔪/𝔪²`, in the basis of surviving coordinates.
/// Row `s` holds the class of `e(x_s)`.
pub fn differential_of<F: Field>(e: &SubstitutionMap<F>, a: &LocalRingPresentation<F>) -> Result<Matrix<F>> {
    check_preserves(e, a)?;
    let jac = e.linear_part();
    let surv = a.surviving();
    Ok(Matrix::from_fn(surv.len(), surv.len(), |i, j| {
        let (s, t) = (surv[i], surv[j]);
        a.pivots
            .iter()
            .enumerate()
            .fold(jac[(s, t)].clone(), |acc, (row, &p)| acc.sub(&jac[(s, p)].mul(&a.linear_rref[(row, t)])))
    }))
}

fn check_lambda<F: Field>(lambda: &F) -> Result<()> {
    let norm = lambda.norm_sqr();
    let nonzero = if F::EXACT { !lambda.is_zero() } else { lambda.to_c64().norm() > 1e-12 };
    if !nonzero || norm.cmp_real(&F::one()) != std::cmp::Ordering::Less {
        return Err(Error::LambdaOutOfRange(lambda.render()));
    }
    Ok(())
}

/// `λ` if `e` preserves the relations and acts on `𝔪/𝔪²` as `λ·id` with
/// `0 < |λ| < 1`.
pub fn check_homogenizing<F: Field>(e: &SubstitutionMap<F>, a: &LocalRingPresentation<F>) -> Result<F> {
    let d = differential_of(e, a)?;
    if d.rows() == 0 {
        return Err(Error::PreconditionViolated("cotangent space is zero".into()));
    }
    let lambda = d.is_scalar(SCALAR_TOL).ok_or(Error::NotScalarDifferential)?;
    check_lambda(&lambda)?;
    Ok(lambda)
}

fn check_eigen_inputs<F: Field>(e: &SubstitutionMap<F>, lambda: &F, r: &Series<F>) -> Result<()> {
    if r.ring() != e.ring() {
        return Err(Error::RingMismatch);
    }
    if !r.in_power_of_maximal(2) {
        return Err(Error::PreconditionViolated("right-hand side must lie in 𝔪²".into()));
    }
    check_lambda(lambda)?;
    let n = e.ring().nvars();
    if !e.linear_part().approx_eq(&Matrix::identity(n).scale(lambda), SCALAR_TOL) {
        return Err(Error::PreconditionViolated(format!("linear part of the map is not {}·id", lambda.render())));
    }
    Ok(())
}

fn shift_factors<F: Field>(lambda: &F, truncation: usize) -> Vec<F> {
    (0..=truncation)
        .map(|d| if d < 2 { F::zero() } else { lambda.pow(d as u32).sub(lambda).inv().expect("λ^d ≠ λ for d ≥ 2") })
        .collect()
}

/// The unique `c ∈ 𝔪²` with `e(c) − λ·c = r` modulo degree `N + 1`, where
/// `e` has linear part `λ·id`.
///
/// Solved degree by degree: `e(c_d) = λ^d·c_d` plus terms of higher degree,
/// so `c_d = (λ^d − λ)⁻¹·(r − e(c_{<d}) + λ·c_{<d})_d`.
pub fn solve_shifted_eigen<F: Field>(e: &SubstitutionMap<F>, lambda: &F, r: &Series<F>) -> Result<Series<F>> {
    check_eigen_inputs(e, lambda, r)?;
    let ring = e.ring();
    let factors = shift_factors(lambda, ring.truncation());
    let mut sub = e.substituter();
    let mut c = Series::zero(ring);
    // e(c) − λ·c for the current partial solution
    let mut lhs = Series::zero(ring);
    for (d, factor) in factors.iter().enumerate().skip(2) {
        let cd = (r - &lhs).graded_component(d).scale(factor);
        if cd.is_zero() {
            continue;
        }
        lhs = &(&lhs + &sub.apply(&cd)) - &cd.scale(lambda);
        c = &c + &cd;
    }
    Ok(c)
}

/// The same solution by the contraction `c ← D⁻¹(r − (e − e_λ)(c))`, where
/// `D` multiplies degree `d` by `λ^d − λ`. Each pass fixes one more degree.
pub fn solve_shifted_eigen_iterative<F: Field>(
    e: &SubstitutionMap<F>,
    lambda: &F,
    r: &Series<F>,
) -> Result<Series<F>> {
    check_eigen_inputs(e, lambda, r)?;
    let ring = e.ring();
    let factors = shift_factors(lambda, ring.truncation());
    let powers: Vec<F> = (0..=ring.truncation()).map(|d| lambda.pow(d as u32)).collect();
    let graded_scale = |f: &Series<F>, by: &[F]| {
        Series::from_terms(ring, f.terms().map(|(m, c)| (m.clone(), c.mul(&by[m.degree()]))))
    };
    let mut sub = e.substituter();
    let mut c = Series::zero(ring);
    for _ in 0..=ring.truncation() {
        let nonlinear = &sub.apply(&c) - &graded_scale(&c, &powers);
        let next = graded_scale(&(r - &nonlinear), &factors);
        let done = next.approx_eq(&c, 0.0);
        c = next;
        if done {
            break;
        }
    }
    Ok(c)
}

/// Eigen-coordinates together with the data they were built from.
#[derive(Clone, Debug)]
pub struct EigenData<F: Field> {
    pub lambda: F,
    pub minimal: MinimalRelations<F>,
    /// `e` transported to the surviving coordinates.
    pub transported: SubstitutionMap<F>,
    /// `f_i` in the surviving coordinates.
    pub local: Vec<Series<F>>,
}

fn eigen_data<F: Field>(e: &SubstitutionMap<F>, a: &LocalRingPresentation<F>) -> Result<EigenData<F>> {
    let lambda = check_homogenizing(e, a)?;
    let minimal = a.minimal_relations()?;
    let transported = minimal.transport(e, a)?;
    let mut sub = transported.substituter();
    let local = minimal
        .ring
        .vars_series()
        .iter()
        .map(|x| {
            // f = x + c with e(c) − λc = λx − e(x)
            let r = &x.scale(&lambda) - &sub.apply(x);
            solve_shifted_eigen(&transported, &lambda, &r).map(|c| x + &c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenData { lambda, minimal, transported, local })
}

/// `f_1..f_m` in the ring of `A`, with `f_i ≡ x_{s_i}` modulo `𝔪²` over the
/// surviving coordinates and `e(f_i) = λ·f_i` in `A`.
pub fn eigen_coordinates<F: Field>(e: &SubstitutionMap<F>, a: &LocalRingPresentation<F>) -> Result<Vec<Series<F>>> {
    let data = eigen_data(e, a)?;
    Ok(data.local.iter().map(|f| data.minimal.embed(f, a)).collect())
}

/// A homogeneous presentation `ℂ[[y_1..y_m]]/K ≅ A`, `y_i ↦ f_i`.
#[derive(Clone, Debug)]
pub struct HomogenizingCertificate<F: Field> {
    /// `None` only when `𝔪/𝔪² = 0`.
    pub lambda: Option<F>,
    pub truncation: usize,
    /// Surviving coordinates of `A`; `y_i` is identified with the `i`-th
    /// one modulo `𝔪²`.
    pub identified_with: Vec<String>,
    /// `f_i` in the ring of `A`.
    pub eigen_coordinates: Vec<Series<F>>,
    /// `ℂ[[y_1..y_m]]` truncated at the same order.
    pub ring: SeriesRing,
    /// `K = ker(y_i ↦ f_i)` by its reduced standard basis.
    pub homogeneous_ideal: Ideal<F>,
}

impl<F: Field> HomogenizingCertificate<F> {
    pub fn identification(&self) -> Vec<(String, String)> {
        self.ring.vars().iter().cloned().zip(self.identified_with.iter().cloned()).collect()
    }
}

fn new_variable_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("y{i}")).collect()
}

/// Builds eigen-coordinates, the presentation `ρ: y_i ↦ f_i`, and its kernel.
///
/// On the surviving coordinates `F: x ↦ f` is an automorphism, so
/// `ker ρ = F⁻¹(J)` where `J` are the minimal relations. Each kernel
/// generator is split into homogeneous components, and membership of every
/// component is re-verified.
pub fn homogeneous_presentation<F: Field>(
    e: &SubstitutionMap<F>,
    a: &LocalRingPresentation<F>,
) -> Result<HomogenizingCertificate<F>> {
    let truncation = a.ring().truncation();
    if a.cotangent_dim() == 0 {
        check_preserves(e, a)?;
        let ring = SeriesRing::new::<&str>(&[], truncation)?;
        return Ok(HomogenizingCertificate {
            lambda: None,
            truncation,
            identified_with: Vec::new(),
            eigen_coordinates: Vec::new(),
            homogeneous_ideal: Ideal::zero(&ring),
            ring,
        });
    }
    let data = eigen_data(e, a)?;
    let local_ring = &data.minimal.ring;
    let j = data.minimal.relations.groebner()?;

    let coords = SubstitutionMap::new(local_ring, data.local.clone())?;
    let inverse = coords.invert()?;
    let mut back = inverse.substituter();
    let mut forward = coords.substituter();
    let mut components: Vec<Series<F>> = Vec::new();
    for g in j.generators() {
        for (_, part) in back.apply(g).homogeneous_components() {
            if !j.contains(&forward.apply(&part))? {
                return Err(Error::InhomogeneousKernel(part.render()));
            }
            if !components.contains(&part) {
                components.push(part);
            }
        }
    }

    // e(f_i) = λ f_i in A, i.e. the square with e_λ commutes
    let mut sub = data.transported.substituter();
    for f in &data.local {
        let defect = &sub.apply(f) - &f.scale(&data.lambda);
        let vanishes = if j.generators().is_empty() { defect.is_negligible(FLOAT_RESIDUAL_TOL) } else { j.contains(&defect)? };
        if !vanishes {
            return Err(Error::PreconditionViolated(format!("eigen property fails: {}", defect.render())));
        }
    }

    let ring = SeriesRing::new(&new_variable_names(a.cotangent_dim()), truncation)?;
    let kernel = Ideal::new(local_ring, components)?;
    let basis = kernel.standard_basis()?.into_owned();
    let generators = basis.iter().map(|g| g.reinterpret(&ring)).collect::<Result<Vec<_>>>()?;
    Ok(HomogenizingCertificate {
        lambda: Some(data.lambda),
        truncation,
        identified_with: a.surviving_names(),
        eigen_coordinates: data.local.iter().map(|f| data.minimal.embed(f, a)).collect(),
        ring: ring.clone(),
        homogeneous_ideal: Ideal::new(&ring, generators)?.groebner()?,
    })
}

/// Outcome of [`lhs_certificate_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub passed: bool,
    pub reasons: Vec<String>,
}

/// Whether `cert` presents `A` by a homogeneous ideal modulo degree `N + 1`:
/// homogeneous generators, generators vanishing on the `f_i` in `A`, the
/// `f_i` spanning `𝔪/𝔪²`, and equal colengths.
pub fn lhs_certificate_check<F: Field>(cert: &HomogenizingCertificate<F>, a: &LocalRingPresentation<F>) -> CertificateCheck {
    let mut reasons = Vec::new();
    let m = a.cotangent_dim();
    if cert.ring.nvars() != m || cert.eigen_coordinates.len() != m {
        reasons.push(format!("expected {m} coordinates, certificate has {}", cert.ring.nvars()));
        return CertificateCheck { passed: false, reasons };
    }
    if cert.truncation != a.ring().truncation() {
        reasons.push("truncation orders differ".into());
    }
    let ideal = &cert.homogeneous_ideal;
    for g in ideal.generators() {
        if !g.is_homogeneous() {
            reasons.push(format!("generator `{}` is not homogeneous", g.render()));
        }
        if !g.in_power_of_maximal(2) {
            reasons.push(format!("generator `{}` has a linear term", g.render()));
        }
    }
    if m > 0 {
        let mut sub = Substituter::new(a.ring(), &cert.eigen_coordinates);
        match a.relations().groebner() {
            Ok(rel) => {
                for g in ideal.generators() {
                    match rel.contains(&sub.apply(g)) {
                        Ok(true) => {}
                        Ok(false) => reasons.push(format!("generator `{}` does not vanish in A", g.render())),
                        Err(err) => reasons.push(format!("membership of `{}` undecided: {err}", g.render())),
                    }
                }
            }
            Err(err) => reasons.push(format!("relations: {err}")),
        }
        // the f_i must span the cotangent space of A
        if cotangent_classes(a, &cert.eigen_coordinates).rank() < m {
            reasons.push("eigen-coordinates do not span 𝔪/𝔪²".into());
        }
    }
    match (ideal.colength(), a.relations().colength()) {
        (Ok(x), Ok(y)) if x == y => {}
        (Ok(x), Ok(y)) => reasons.push(format!("colength {x} differs from the colength {y} of A")),
        (Err(err), _) | (_, Err(err)) => reasons.push(format!("colength undecided: {err}")),
    }
    CertificateCheck { passed: reasons.is_empty(), reasons }
}

/// Classes of the given elements in `𝔪/𝔪²`, in surviving coordinates.
fn cotangent_classes<F: Field>(a: &LocalRingPresentation<F>, fs: &[Series<F>]) -> Matrix<F> {
    let surv = a.surviving();
    Matrix::from_fn(fs.len(), surv.len(), |i, j| {
        let lin = fs[i].linear_coefficients();
        a.pivots
            .iter()
            .enumerate()
            .fold(lin[surv[j]].clone(), |acc, (row, &p)| acc.sub(&lin[p].mul(&a.linear_rref[(row, surv[j])])))
    })
}

/// Whether the tangent cone of `A`, on the surviving coordinates, equals the
/// certified ideal under `y_i ↔ x_{s_i}`.
pub fn gr_consistency<F: Field>(cert: &HomogenizingCertificate<F>, a: &LocalRingPresentation<F>) -> Result<bool> {
    let minimal = a.minimal_relations()?;
    let cone = minimal.relations.tangent_cone()?.reinterpret(&cert.ring)?;
    cone.equals(&cert.homogeneous_ideal)
}

/// `e` acts on `𝔪^d/𝔪^{d+1}` as `λ^d` when its linear part is `λ·id`; the
/// defect of that claim at degree `d` for the monomial `m`.
pub fn graded_defect<F: Field>(e: &SubstitutionMap<F>, lambda: &F, m: &Monomial) -> Series<F> {
    let ring = e.ring();
    let d = m.degree();
    let image = e.substitute(&Series::monomial(ring, m.clone(), F::one())).expect("same ring");
    &image.graded_component(d) - &Series::monomial(ring, m.clone(), lambda.pow(d as u32))
}
