//! The flat model: germs at the origin of ℍⁿ with an induced complex
//! structure, the composite `Ψ_{I,J}`, and unions of quaternionic planes.
//!
//! Real coordinates `x_1..x_{4n}` are complexified and replaced by
//! `I`-holomorphic coordinates `z_k` and their conjugates `zb_k`. The ring
//! `A_I` of holomorphic germs lives on `z` alone.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::homog::{self, gr_consistency, HomogenizingCertificate, LocalRingPresentation};
use crate::linalg::Matrix;
use crate::quatlin::{hodge_frame, InducedComplexStructure, QuaternionModule};
use crate::series::{Ideal, Monomial, Series, SeriesRing, SubstitutionMap, Substituter};

/// Holomorphic and antiholomorphic coordinates for one structure.
#[derive(Clone, Debug)]
pub struct GermChart<F: Field> {
    module: QuaternionModule<F>,
    structure: InducedComplexStructure<F>,
    /// `2n × 4n`: row `k` is the covector `z_k`.
    holo: Matrix<F>,
    /// The `4n × 4n` matrix with rows `z` then `zb`, and its inverse.
    change: Matrix<F>,
    change_inv: Matrix<F>,
    real_ring: SeriesRing,
    holo_ring: SeriesRing,
}

/// Chart for `structure` on ℍⁿ with rings truncated at `truncation`.
///
/// `z_k` are the independent rows of the Hodge projector `P_I`, each scaled
/// so its first nonzero entry is 1; for `I = i` on ℍ¹ this gives
/// `z_1 = x_1 + i·x_2`, `z_2 = x_3 + i·x_4`.
pub fn make_chart<F: Field>(n: usize, structure: &InducedComplexStructure<F>, truncation: usize) -> Result<GermChart<F>> {
    let module = QuaternionModule::new(n);
    let frame = hodge_frame(&module, structure)?;
    let (_, pivots) = frame.projector10().rref();
    let rows: Vec<Vec<F>> = pivots
        .iter()
        .map(|&p| {
            let row = frame.projector10().row(p);
            let lead = row.iter().find(|x| !x.is_negligible(crate::quatlin::SCALAR_TOL)).expect("nonzero row").clone();
            let inv = lead.inv().expect("nonzero lead");
            row.iter().map(|x| x.mul(&inv)).collect()
        })
        .collect();
    let holo = Matrix::from_rows(&rows);
    let mut all = rows.clone();
    all.extend(rows.iter().map(|r| r.iter().map(F::conj).collect()));
    let change = Matrix::from_rows(&all);
    let change_inv = change
        .inverse()
        .ok_or_else(|| Error::FieldClosureError("holomorphic and antiholomorphic coordinates are dependent".into()))?;
    let holo_names: Vec<String> = (1..=2 * n).map(|k| format!("z{k}")).collect();
    let mut real_names = holo_names.clone();
    real_names.extend((1..=2 * n).map(|k| format!("zb{k}")));
    Ok(GermChart {
        module,
        structure: structure.clone(),
        holo,
        change,
        change_inv,
        real_ring: SeriesRing::new(&real_names, truncation)?,
        holo_ring: SeriesRing::new(&holo_names, truncation)?,
    })
}

impl<F: Field> GermChart<F> {
    pub fn module(&self) -> &QuaternionModule<F> {
        &self.module
    }

    pub fn structure(&self) -> &InducedComplexStructure<F> {
        &self.structure
    }

    /// Rows are the covectors `z_k` on the real coordinates.
    pub fn holomorphic_covectors(&self) -> &Matrix<F> {
        &self.holo
    }

    /// Rows `z` then `zb`.
    pub fn change_of_basis(&self) -> &Matrix<F> {
        &self.change
    }

    /// The complexified real germs `A_ℝ`, on `z` and `zb`.
    pub fn real_ring(&self) -> &SeriesRing {
        &self.real_ring
    }

    /// The holomorphic germs `A_I`.
    pub fn holo_ring(&self) -> &SeriesRing {
        &self.holo_ring
    }

    pub fn truncation(&self) -> usize {
        self.holo_ring.truncation()
    }

    /// Same chart for another structure on the same module.
    pub fn for_structure(&self, structure: &InducedComplexStructure<F>) -> Result<GermChart<F>> {
        make_chart(self.module.dim(), structure, self.truncation())
    }

    fn same_space(&self, other: &GermChart<F>) -> Result<()> {
        if self.module.dim() == other.module.dim() && self.truncation() == other.truncation() {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }
}

/// `i_I`: a holomorphic germ viewed as a germ in `z, zb`.
pub fn embed_i<F: Field>(chart: &GermChart<F>, f: &Series<F>) -> Result<Series<F>> {
    if f.ring() != chart.holo_ring() {
        return Err(Error::RingMismatch);
    }
    let images: Vec<Series<F>> = (0..chart.holo.rows()).map(|k| chart.real_ring.var(k)).collect();
    Ok(Substituter::new(&chart.real_ring, &images).apply(f))
}

/// `e_J`: rewrite a germ of `from` in the coordinates `w, wb` of `to`, then
/// drop every monomial containing some `wb`.
pub fn project_e<F: Field>(from: &GermChart<F>, to: &GermChart<F>, g: &Series<F>) -> Result<Series<F>> {
    from.same_space(to)?;
    if g.ring() != from.real_ring() {
        return Err(Error::RingMismatch);
    }
    // (z; zb) = from.change · x = from.change · to.change⁻¹ · (w; wb)
    let m = from.change.mul(&to.change_inv);
    let half = to.holo.rows();
    let images: Vec<Series<F>> = (0..m.rows())
        .map(|k| Series::from_terms(&to.holo_ring, (0..half).map(|l| (Monomial::var(half, l), m[(k, l)].clone()))))
        .collect();
    Ok(Substituter::new(&to.holo_ring, &images).apply(g))
}

/// [`project_e`] into the chart of `j`.
pub fn project_ej<F: Field>(chart: &GermChart<F>, j: &InducedComplexStructure<F>, g: &Series<F>) -> Result<Series<F>> {
    project_e(chart, &chart.for_structure(j)?, g)
}

/// `Ψ_{I,J} = e_I ∘ i_J ∘ e_J ∘ i_I` on `A_I`, evaluated on each `z_k`.
pub fn psi_endomorphism<F: Field>(chart: &GermChart<F>, j: &InducedComplexStructure<F>) -> Result<SubstitutionMap<F>> {
    let cj = chart.for_structure(j)?;
    let images = chart
        .holo_ring
        .vars_series()
        .iter()
        .map(|z| {
            let there = project_e(chart, &cj, &embed_i(chart, z)?)?;
            project_e(&cj, chart, &embed_i(&cj, &there)?)
        })
        .collect::<Result<Vec<_>>>()?;
    SubstitutionMap::new(&chart.holo_ring, images)
}

/// A real linear subspace of ℍⁿ, stored by a row-reduced basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane<F: Field> {
    spanning: Vec<Vec<F>>,
    basis: Matrix<F>,
}

impl<F: Field> Plane<F> {
    /// Spanning vectors in `ℝ^{4n}`, coordinates ordered `(1, i, j, k)` per
    /// quaternionic coordinate.
    pub fn new(spanning: Vec<Vec<F>>) -> Result<Self> {
        let len = spanning.first().map_or(0, Vec::len);
        if len == 0 || !len.is_multiple_of(4) || spanning.iter().any(|v| v.len() != len) {
            return Err(Error::PreconditionViolated("plane vectors must share a length divisible by 4".into()));
        }
        let (red, pivots) = Matrix::from_rows(&spanning).rref();
        let basis = Matrix::from_fn(pivots.len(), len, |r, c| red[(r, c)].clone());
        Ok(Plane { spanning, basis })
    }

    pub fn spanning(&self) -> &[Vec<F>] {
        &self.spanning
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn real_dim(&self) -> usize {
        self.basis.rows()
    }

    fn rows(&self) -> Vec<Vec<F>> {
        (0..self.basis.rows()).map(|r| self.basis.row(r)).collect()
    }

    /// Whether `op` maps the plane into itself.
    pub fn invariant_under(&self, op: &Matrix<F>) -> bool {
        let mut rows = self.rows();
        rows.extend(self.rows().iter().map(|v| op.mul_vec(v)));
        rows.is_empty() || Matrix::from_rows(&rows).rank() == self.real_dim()
    }

    /// `dim_ℝ (self + other)`.
    pub fn sum_dim(&self, other: &Plane<F>) -> usize {
        let mut rows = self.rows();
        rows.extend(other.rows());
        if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(&rows).rank()
        }
    }

    pub fn same_subspace(&self, other: &Plane<F>) -> bool {
        let s = self.sum_dim(other);
        s == self.real_dim() && s == other.real_dim()
    }
}

/// The quaternionic planes, their linear ideals, and the ideal of the union.
#[derive(Clone, Debug)]
pub struct PlaneUnionModel<F: Field> {
    pub planes: Vec<Plane<F>>,
    pub chart: GermChart<F>,
    /// `I(L_i)`, generated by the holomorphic linear forms vanishing on `L_i`.
    pub plane_ideals: Vec<Ideal<F>>,
    pub union_ideal: Ideal<F>,
}

/// Holomorphic linear forms vanishing on the plane, as coefficient vectors in `z`.
fn vanishing_forms<F: Field>(plane: &Plane<F>, chart: &GermChart<F>) -> Vec<Vec<F>> {
    if plane.real_dim() == 0 {
        let id = Matrix::<F>::identity(chart.holo.rows());
        return (0..id.rows()).map(|r| id.row(r)).collect();
    }
    // a with Σ_k a_k·z_k(v) = 0 for all v in the plane
    let values = chart.holo.mul(&plane.basis.transpose());
    values.transpose().kernel()
}

impl<F: Field> PlaneUnionModel<F> {
    /// Checks invariance under `i`, `j`, `k` and pairwise distinctness, then
    /// intersects the linear ideals.
    pub fn new(planes: Vec<Plane<F>>, chart: GermChart<F>) -> Result<Self> {
        if planes.is_empty() {
            return Err(Error::PreconditionViolated("a model needs at least one plane".into()));
        }
        for (idx, p) in planes.iter().enumerate() {
            if p.ambient_dim() != chart.module.real_dim() {
                return Err(Error::PreconditionViolated(format!(
                    "plane {idx} lives in dimension {}, expected {}",
                    p.ambient_dim(),
                    chart.module.real_dim()
                )));
            }
            if !chart.module.actions().iter().all(|a| p.invariant_under(a)) {
                return Err(Error::NotQuaternionInvariant(idx));
            }
        }
        for a in 0..planes.len() {
            for b in a + 1..planes.len() {
                if planes[a].same_subspace(&planes[b]) {
                    return Err(Error::DuplicatePlane(a, b));
                }
            }
        }
        let ring = chart.holo_ring.clone();
        let nz = ring.nvars();
        let plane_ideals = planes
            .iter()
            .map(|p| {
                let gens = vanishing_forms(p, &chart)
                    .into_iter()
                    .map(|a| Series::from_terms(&ring, a.into_iter().enumerate().map(|(k, c)| (Monomial::var(nz, k), c))))
                    .collect();
                Ideal::new(&ring, gens)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut union = plane_ideals[0].clone();
        for ideal in &plane_ideals[1..] {
            union = union.intersection(ideal)?;
        }
        let union_ideal = union.groebner()?;
        Ok(PlaneUnionModel { planes, chart, plane_ideals, union_ideal })
    }
}

/// The ideal of the union of `planes` in the holomorphic ring of `chart`.
pub fn plane_union_ideal<F: Field>(planes: Vec<Plane<F>>, chart: &GermChart<F>) -> Result<Ideal<F>> {
    Ok(PlaneUnionModel::new(planes, chart.clone())?.union_ideal)
}

/// Whether `psi` maps every generator of `ideal` into `ideal`.
pub fn verify_psi_invariance<F: Field>(ideal: &Ideal<F>, psi: &SubstitutionMap<F>) -> Result<bool> {
    ideal.preserved_by(psi)
}

/// [`homog::homogeneous_presentation`] for `Ψ_{I,J}` on the model, plus the
/// consistency checks flat models must pass.
#[derive(Clone, Debug)]
pub struct ModelCertificate<F: Field> {
    pub psi: SubstitutionMap<F>,
    pub certificate: HomogenizingCertificate<F>,
    /// The certified ideal equals the model ideal on the surviving
    /// coordinates under `y_i ↔ z_{s_i}`.
    pub matches_model: bool,
    pub gr_consistent: bool,
    pub check: homog::CertificateCheck,
}

pub fn homogenize_model<F: Field>(model: &PlaneUnionModel<F>, j: &InducedComplexStructure<F>) -> Result<ModelCertificate<F>> {
    let psi = psi_endomorphism(&model.chart, j)?;
    if !verify_psi_invariance(&model.union_ideal, &psi)? {
        return Err(Error::DoesNotPreserveIdeal(model.union_ideal.render()));
    }
    let a = LocalRingPresentation::new(model.chart.holo_ring(), model.union_ideal.clone())?;
    let certificate = homog::homogeneous_presentation(&psi, &a)?;
    let minimal = a.minimal_relations()?.relations.reinterpret(&certificate.ring)?;
    let matches_model = minimal.equals(&certificate.homogeneous_ideal)?;
    let gr_consistent = gr_consistency(&certificate, &a)?;
    let check = homog::lhs_certificate_check(&certificate, &a);
    Ok(ModelCertificate { psi, certificate, matches_model, gr_consistent, check })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    pub real_dim: usize,
    pub complex_dim: usize,
    /// Rank of the Jacobian of the generators of `I(L)` at the origin.
    pub jacobian_rank: usize,
    pub smooth: bool,
    pub real_dim_divisible_by_4: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionReport {
    pub first: usize,
    pub second: usize,
    pub complex_dim: usize,
}

/// The normalization of a union of planes is the disjoint union of the planes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationReport {
    pub components: Vec<ComponentReport>,
    pub intersections: Vec<IntersectionReport>,
    pub normalization_smooth: bool,
    /// A single plane is already normal.
    pub already_normal: bool,
}

pub fn normalization_report<F: Field>(model: &PlaneUnionModel<F>) -> NormalizationReport {
    let ambient = model.chart.holo_ring.nvars();
    let components: Vec<ComponentReport> = model
        .planes
        .iter()
        .zip(&model.plane_ideals)
        .map(|(p, ideal)| {
            let jac: Vec<Vec<F>> = ideal.generators().iter().map(Series::linear_coefficients).collect();
            let jacobian_rank = if jac.is_empty() { 0 } else { Matrix::from_rows(&jac).rank() };
            let linear = ideal.generators().iter().all(|g| g.is_homogeneous() && g.order() == Some(1));
            let real_dim = p.real_dim();
            ComponentReport {
                real_dim,
                complex_dim: real_dim / 2,
                jacobian_rank,
                smooth: linear && real_dim % 2 == 0 && jacobian_rank + real_dim / 2 == ambient,
                real_dim_divisible_by_4: real_dim % 4 == 0,
            }
        })
        .collect();
    let mut intersections = Vec::new();
    for a in 0..model.planes.len() {
        for b in a + 1..model.planes.len() {
            let (pa, pb) = (&model.planes[a], &model.planes[b]);
            let meet = pa.real_dim() + pb.real_dim() - pa.sum_dim(pb);
            intersections.push(IntersectionReport { first: a, second: b, complex_dim: meet / 2 });
        }
    }
    NormalizationReport {
        normalization_smooth: components.iter().all(|c| c.smooth),
        already_normal: components.len() == 1,
        components,
        intersections,
    }
}

/// `ℍ·v` for a vector `v ∈ ℍⁿ` given by its quaternionic coordinates.
pub fn quaternionic_line<F: Field>(v: &[crate::quatlin::Quaternion<F>]) -> Result<Plane<F>> {
    use crate::quatlin::Quaternion;
    let spanning = (0..4)
        .map(|b| v.iter().flat_map(|q| Quaternion::basis(b).mul(q).coords()).collect())
        .collect();
    Plane::new(spanning)
}
