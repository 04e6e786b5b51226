//! Quaternionic linear algebra.
//!
//! ℍⁿ is treated as a real vector space of dimension 4n with basis
//! `(1, i, j, k)` per quaternionic coordinate. Complex structures act by
//! left multiplication, so that `I∘J = K` holds for the action matrices;
//! right multiplication by unit quaternions is the commuting `SU(2)` action
//! used for the Schur check.
//!
//! For an induced complex structure `L = a·i + b·j + c·k` the `+i`
//! eigenspace of its complexified action is `V_L^{1,0}`, with projector
//! `(1 − i·R_L)/2`. The composite `V_I^{1,0} → V → V_J^{1,0} → V → V_I^{1,0}`
//! of inclusions and projections is [`phi_endomorphism`]; on every module
//! it is a scalar `λ ∈ [0, 1]`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// Tolerance for the unit-norm condition on the float backend.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance for scalarness and idempotence on the float backend.
pub const SCALAR_TOL: f64 = 1e-10;

/// `w + x·i + y·j + z·k` with coefficients in the (real part of a) field.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<F> {
    pub w: F,
    pub x: F,
    pub y: F,
    pub z: F,
}

impl<F: Field> Quaternion<F> {
    pub fn new(w: F, x: F, y: F, z: F) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn one() -> Self {
        Self::basis(0)
    }

    pub fn i() -> Self {
        Self::basis(1)
    }

    pub fn j() -> Self {
        Self::basis(2)
    }

    pub fn k() -> Self {
        Self::basis(3)
    }

    /// The `idx`-th element of `(1, i, j, k)`.
    pub fn basis(idx: usize) -> Self {
        let mut c = [F::zero(), F::zero(), F::zero(), F::zero()];
        c[idx] = F::one();
        Self::from_coords(c)
    }

    pub fn from_coords([w, x, y, z]: [F; 4]) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn coords(&self) -> [F; 4] {
        [self.w.clone(), self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a1, b1, c1, d1) = (&self.w, &self.x, &self.y, &self.z);
        let (a2, b2, c2, d2) = (&o.w, &o.x, &o.y, &o.z);
        Quaternion {
            w: a1.mul(a2).sub(&b1.mul(b2)).sub(&c1.mul(c2)).sub(&d1.mul(d2)),
            x: a1.mul(b2).add(&b1.mul(a2)).add(&c1.mul(d2)).sub(&d1.mul(c2)),
            y: a1.mul(c2).sub(&b1.mul(d2)).add(&c1.mul(a2)).add(&d1.mul(b2)),
            z: a1.mul(d2).add(&b1.mul(c2)).sub(&c1.mul(b2)).add(&d1.mul(a2)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Quaternion { w: self.w.add(&o.w), x: self.x.add(&o.x), y: self.y.add(&o.y), z: self.z.add(&o.z) }
    }

    pub fn neg(&self) -> Self {
        Quaternion { w: self.w.neg(), x: self.x.neg(), y: self.y.neg(), z: self.z.neg() }
    }

    pub fn conj(&self) -> Self {
        Quaternion { w: self.w.clone(), x: self.x.neg(), y: self.y.neg(), z: self.z.neg() }
    }

    pub fn norm_sqr(&self) -> F {
        self.coords().iter().fold(F::zero(), |acc, c| acc.add(&c.mul(c)))
    }
}

/// An induced complex structure `a·I + b·J + c·K` with `a² + b² + c² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedComplexStructure<F> {
    a: F,
    b: F,
    c: F,
}

fn render3<F: Field>(a: &F, b: &F, c: &F) -> String {
    format!("{}, {}, {}", a.render(), b.render(), c.render())
}

impl<F: Field> InducedComplexStructure<F> {
    /// Validates the unit-norm condition: exactly on the exact backend,
    /// within [`UNIT_TOL`] on the float backend.
    pub fn new(a: F, b: F, c: F) -> Result<Self> {
        let real = |x: &F| x.imag_part().is_negligible(UNIT_TOL);
        if !(real(&a) && real(&b) && real(&c)) {
            return Err(Error::NotUnitImaginary(render3(&a, &b, &c)));
        }
        let norm = a.mul(&a).add(&b.mul(&b)).add(&c.mul(&c));
        if !norm.approx_eq(&F::one(), UNIT_TOL) {
            return Err(Error::NotUnitImaginary(render3(&a, &b, &c)));
        }
        Ok(InducedComplexStructure { a: a.real_part(), b: b.real_part(), c: c.real_part() })
    }

    /// Normalizes a nonzero real direction. On the exact backend this fails
    /// with [`Error::FieldClosureError`] unless the length is rational.
    pub fn from_direction(a: F, b: F, c: F) -> Result<Self> {
        let norm = a.mul(&a).add(&b.mul(&b)).add(&c.mul(&c));
        if norm.is_negligible(UNIT_TOL) {
            return Err(Error::NotUnitImaginary(render3(&a, &b, &c)));
        }
        let len = norm
            .sqrt_real()
            .ok_or_else(|| Error::FieldClosureError(format!("length of direction ({})", render3(&a, &b, &c))))?;
        let inv = len.inv().expect("nonzero length");
        Self::new(a.mul(&inv), b.mul(&inv), c.mul(&inv))
    }

    /// `I`, `J` or `K` for `axis` 0, 1, 2.
    pub fn axis(axis: usize) -> Self {
        let mut v = [F::zero(), F::zero(), F::zero()];
        v[axis] = F::one();
        let [a, b, c] = v;
        InducedComplexStructure { a, b, c }
    }

    pub fn coefficients(&self) -> [F; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }

    pub fn negated(&self) -> Self {
        InducedComplexStructure { a: self.a.neg(), b: self.b.neg(), c: self.c.neg() }
    }

    /// Euclidean inner product of the coefficient vectors.
    pub fn dot(&self, other: &Self) -> F {
        self.a.mul(&other.a).add(&self.b.mul(&other.b)).add(&self.c.mul(&other.c))
    }

    pub fn as_quaternion(&self) -> Quaternion<F> {
        Quaternion::new(F::zero(), self.a.clone(), self.b.clone(), self.c.clone())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.a.approx_eq(&other.a, tol) && self.b.approx_eq(&other.b, tol) && self.c.approx_eq(&other.c, tol)
    }

    pub fn render(&self) -> String {
        render3(&self.a, &self.b, &self.c)
    }
}

/// ℍⁿ with the matrices of left multiplication by `i`, `j`, `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionModule<F: Field> {
    n: usize,
    action_i: Matrix<F>,
    action_j: Matrix<F>,
    action_k: Matrix<F>,
}

impl<F: Field> QuaternionModule<F> {
    pub fn new(n: usize) -> Self {
        QuaternionModule {
            n,
            action_i: left_multiplication(n, &Quaternion::i()),
            action_j: left_multiplication(n, &Quaternion::j()),
            action_k: left_multiplication(n, &Quaternion::k()),
        }
    }

    /// Quaternionic dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn real_dim(&self) -> usize {
        4 * self.n
    }

    pub fn actions(&self) -> [&Matrix<F>; 3] {
        [&self.action_i, &self.action_j, &self.action_k]
    }

    /// Matrix of `v ↦ L·v`.
    pub fn structure_action(&self, l: &InducedComplexStructure<F>) -> Matrix<F> {
        let [a, b, c] = l.coefficients();
        self.action_i.scale(&a).add(&self.action_j.scale(&b)).add(&self.action_k.scale(&c))
    }

    pub fn right_action(&self, q: &Quaternion<F>) -> Matrix<F> {
        right_multiplication(self.n, q)
    }

    pub fn left_action(&self, q: &Quaternion<F>) -> Matrix<F> {
        left_multiplication(self.n, q)
    }
}

fn block_diagonal<F: Field>(n: usize, block: impl Fn(usize) -> Quaternion<F>) -> Matrix<F> {
    // column `col` of one block holds the image of the `col`-th basis quaternion
    let cols: Vec<[F; 4]> = (0..4).map(|col| block(col).coords()).collect();
    Matrix::from_fn(4 * n, 4 * n, |r, c| if r / 4 == c / 4 { cols[c % 4][r % 4].clone() } else { F::zero() })
}

/// Real 4n×4n matrix of `v ↦ v·q` on ℍⁿ.
pub fn right_multiplication<F: Field>(n: usize, q: &Quaternion<F>) -> Matrix<F> {
    block_diagonal(n, |col| Quaternion::basis(col).mul(q))
}

/// Real 4n×4n matrix of `v ↦ q·v` on ℍⁿ.
pub fn left_multiplication<F: Field>(n: usize, q: &Quaternion<F>) -> Matrix<F> {
    block_diagonal(n, |col| q.mul(&Quaternion::basis(col)))
}

/// The decomposition `V ⊗ ℂ = V^{1,0} ⊕ V^{0,1}` for one structure.
#[derive(Clone, Debug)]
pub struct HodgeFrame<F: Field> {
    structure: InducedComplexStructure<F>,
    basis10: Vec<Vec<F>>,
    projector10: Matrix<F>,
    basis_matrix: Matrix<F>,
}

impl<F: Field> HodgeFrame<F> {
    pub fn structure(&self) -> &InducedComplexStructure<F> {
        &self.structure
    }

    /// Spanning vectors of `V^{1,0}`, each scaled so its first nonzero entry is 1.
    pub fn basis10(&self) -> &[Vec<F>] {
        &self.basis10
    }

    pub fn projector10(&self) -> &Matrix<F> {
        &self.projector10
    }

    pub fn projector01(&self) -> Matrix<F> {
        self.projector10.conj()
    }

    /// Coordinates of a vector of `V^{1,0}` in [`Self::basis10`].
    pub fn coordinates(&self, v: &Matrix<F>) -> Matrix<F> {
        self.basis_matrix.solve(v).expect("vector lies in V^{1,0}")
    }

    /// Matrix, in `basis10`, of an endomorphism of the ambient space that
    /// preserves `V^{1,0}`.
    pub fn restrict(&self, op: &Matrix<F>) -> Matrix<F> {
        self.coordinates(&op.mul(&self.basis_matrix))
    }
}

/// Projector onto `V_L^{1,0}` and a basis of it.
pub fn hodge_frame<F: Field>(module: &QuaternionModule<F>, l: &InducedComplexStructure<F>) -> Result<HodgeFrame<F>> {
    let dim = module.real_dim();
    let action = module.structure_action(l);
    let half = F::one().div(&F::from_int(2)).expect("2 is invertible");
    // (1 − i·R)/2; R² = −1 makes this the projector onto the +i eigenspace
    let projector = Matrix::identity(dim).sub(&action.scale(&F::imag_unit())).scale(&half);
    let (_, pivots) = projector.rref();
    if pivots.len() != 2 * module.dim() {
        return Err(Error::FieldClosureError(format!("Hodge projector of ({}) has rank {}", l.render(), pivots.len())));
    }
    let basis10: Vec<Vec<F>> = pivots
        .iter()
        .map(|&p| {
            let col = projector.column(p);
            let lead = col.iter().find(|x| !x.is_negligible(SCALAR_TOL)).expect("nonzero column").clone();
            let inv = lead.inv().expect("nonzero lead");
            col.iter().map(|x| x.mul(&inv)).collect()
        })
        .collect();
    let basis_matrix = Matrix::from_columns(&basis10);
    Ok(HodgeFrame { structure: l.clone(), basis10, projector10: projector, basis_matrix })
}

/// Matrix of `Φ_{I,J}` in `basis10` of `I`.
pub fn phi_endomorphism<F: Field>(
    module: &QuaternionModule<F>,
    i: &InducedComplexStructure<F>,
    j: &InducedComplexStructure<F>,
) -> Result<Matrix<F>> {
    let fi = hodge_frame(module, i)?;
    let fj = hodge_frame(module, j)?;
    Ok(phi_from_frames(&fi, &fj))
}

pub fn phi_from_frames<F: Field>(fi: &HodgeFrame<F>, fj: &HodgeFrame<F>) -> Matrix<F> {
    fi.restrict(&fi.projector10().mul(fj.projector10()))
}

/// `λ` with `Φ_{I,J} = λ·id`, and the Frobenius residual `‖Φ − λ·id‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurScalar<F> {
    pub lambda: F,
    pub residual: f64,
}

pub fn scalar_of_phi<F: Field>(
    module: &QuaternionModule<F>,
    i: &InducedComplexStructure<F>,
    j: &InducedComplexStructure<F>,
) -> Result<SchurScalar<F>> {
    let phi = phi_endomorphism(module, i, j)?;
    scalar_of_matrix(&phi)
}

/// Extracts the scalar of `Φ`; fails when `Φ` is not `λ·id` with `λ` real in `[0, 1]`.
pub fn scalar_of_matrix<F: Field>(phi: &Matrix<F>) -> Result<SchurScalar<F>> {
    let dim = phi.rows();
    let trace = (0..dim).fold(F::zero(), |acc, r| acc.add(&phi[(r, r)]));
    let lambda = trace.div(&F::from_int(dim as i64)).expect("nonzero dimension");
    let deviation = phi.sub(&Matrix::identity(dim).scale(&lambda));
    let residual = deviation.frobenius_norm();
    let scalar = if F::EXACT { deviation.data_is_zero() } else { residual < SCALAR_TOL };
    if !scalar {
        return Err(Error::NotScalar(format!("{residual:e}")));
    }
    let real = lambda.imag_part().is_negligible(SCALAR_TOL);
    let in_range = lambda.cmp_real(&F::zero()).is_ge() && lambda.cmp_real(&F::one()).is_le()
        || !F::EXACT && lambda.real_part().approx_eq(&F::zero(), SCALAR_TOL)
        || !F::EXACT && lambda.real_part().approx_eq(&F::one(), SCALAR_TOL);
    if !real || !in_range {
        return Err(Error::NotScalar(format!("lambda {} outside [0, 1]", lambda.render())));
    }
    Ok(SchurScalar { lambda, residual })
}

impl<F: Field> Matrix<F> {
    fn data_is_zero(&self) -> bool {
        (0..self.rows()).all(|r| (0..self.cols()).all(|c| self[(r, c)].is_zero()))
    }
}

/// `(1 + ⟨I, J⟩)/2`. Observed to agree with [`scalar_of_phi`]; checked, not assumed.
pub fn closed_form_lambda<F: Field>(i: &InducedComplexStructure<F>, j: &InducedComplexStructure<F>) -> F {
    F::one().add(&i.dot(j)).div(&F::from_int(2)).expect("2 is invertible")
}

/// Whether `Φ_{I,J}` commutes with the `SU(2)` generators `i`, `j` (acting
/// by right multiplication) on `V_I^{1,0}`.
pub fn su2_commutation_check<F: Field>(
    module: &QuaternionModule<F>,
    i: &InducedComplexStructure<F>,
    j: &InducedComplexStructure<F>,
) -> Result<bool> {
    let fi = hodge_frame(module, i)?;
    let fj = hodge_frame(module, j)?;
    Ok(commutes_with_su2(module, &fi, &phi_from_frames(&fi, &fj)))
}

/// Commutation of an arbitrary endomorphism of `V_I^{1,0}` (in `basis10`)
/// with right multiplication by `i` and `j`.
pub fn commutes_with_su2<F: Field>(module: &QuaternionModule<F>, frame: &HodgeFrame<F>, phi: &Matrix<F>) -> bool {
    [Quaternion::i(), Quaternion::j()].iter().all(|g| {
        let rho = frame.restrict(&module.right_action(g));
        let comm = rho.commutator(phi);
        comm.approx_eq(&Matrix::zeros(comm.rows(), comm.cols()), SCALAR_TOL)
    })
}
