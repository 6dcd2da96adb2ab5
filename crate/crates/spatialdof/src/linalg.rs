//! Dense complex linear algebra for finite-dimensional operator models:
//! singular systems, numerical rank, orthonormal subspace handling,
//! Moore-Penrose pseudoinverses, subspace intersections, and preimages of
//! subspaces under a linear map.
//!
//! Matrices are column-major [`nalgebra`] types; a subspace is always held
//! as an explicit matrix of orthonormal basis columns so that dimension
//! counts, projections, and principal-angle comparisons stay cheap and
//! basis-independent.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Orthonormality residual allowed for stored subspace bases.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Residual tolerance for the pseudoinverse identities.
pub const PSEUDOINVERSE_TOL: f64 = 1e-8;

/// Tolerance on 1 - cos(theta) used when matching principal directions.
/// In the small-angle regime this corresponds to an angle of about 1e-5
/// radians, far below any spectral gap that occurs in these models.
pub const SUBSPACE_MATCH_TOL: f64 = 1e-10;

/// Leakage threshold for sampled band-limited kernels, whose spectra
/// plunge over a few indices instead of hitting zero exactly. Used when
/// deciding whether a sampled vector effectively vanishes on a set.
pub const PHYSICAL_RANK_TOL: f64 = 1e-3;

/// Relative singular value threshold at half power (sigma^2 = sigma_1^2/2).
/// Band-limited kernels have a spectral plateau followed by a plunge; the
/// count above half power recovers the plateau length with O(1) error,
/// whereas thresholds deep in the plunge overcount by the plunge width.
pub const HALF_POWER_RANK_TOL: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Default relative rank threshold for exact (block-structured) matrices.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    64.0 * rows.max(cols) as f64 * f64::EPSILON
}

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("basis columns are not orthonormal (residual {0:.3e})")]
    NotOrthonormal(f64),
}

/// Horizontal concatenation. Inputs must share a row count; zero-column
/// inputs are allowed.
pub fn hcat(parts: &[&CMatrix]) -> CMatrix {
    let rows = parts.iter().map(|m| m.nrows()).max().unwrap_or(0);
    let cols: usize = parts.iter().map(|m| m.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for m in parts {
        out.view_mut((0, at), (m.nrows(), m.ncols())).copy_from(*m);
        at += m.ncols();
    }
    out
}

/// Singular system of a matrix: descending singular values with matched
/// left and right singular vectors, plus the numerical rank at the given
/// relative threshold. All min(rows, cols) triples are kept so that the
/// trailing (sigma = 0) directions remain addressable.
#[derive(Debug, Clone)]
pub struct SingularSystem {
    pub sigmas: Vec<f64>,
    /// Columns u_k, one per singular value.
    pub left: CMatrix,
    /// Columns v_k, one per singular value.
    pub right: CMatrix,
    pub rank: usize,
}

impl SingularSystem {
    /// Basis of the range: leading `rank` left vectors.
    pub fn range_basis(&self) -> CMatrix {
        extract_columns(&self.left, 0, self.rank)
    }

    /// Leading right vectors spanning the cokernel complement.
    pub fn row_space_basis(&self) -> CMatrix {
        extract_columns(&self.right, 0, self.rank)
    }
}

fn extract_columns(m: &CMatrix, start: usize, count: usize) -> CMatrix {
    m.columns(start, count).into_owned()
}

/// Computes the singular system. `rel_tol` is relative to the largest
/// singular value; the zero matrix has rank 0.
///
/// Uses an in-crate one-sided Jacobi iteration rather than a
/// bidiagonalization solver: the operators in this crate routinely carry
/// repeated singular values (projectors, masked maps, near-unitary
/// kernels), a regime where the bidiagonalization path of the backing
/// linear-algebra crate was observed to return mispaired vectors.
pub fn singular_system(c: &CMatrix, rel_tol: f64) -> SingularSystem {
    let (m, n) = c.shape();
    let k = m.min(n);
    if k == 0 {
        return SingularSystem {
            sigmas: Vec::new(),
            left: CMatrix::zeros(m, 0),
            right: CMatrix::zeros(n, 0),
            rank: 0,
        };
    }
    let (left, sigmas, right) = if m >= n {
        jacobi_svd_tall(c)
    } else {
        let (u, s, v) = jacobi_svd_tall(&c.adjoint());
        (v, s, u)
    };
    let top = sigmas.first().copied().unwrap_or(0.0);
    let rank = if top <= 0.0 {
        0
    } else {
        sigmas.iter().filter(|&&s| s > rel_tol * top).count()
    };
    SingularSystem { sigmas, left, right, rank }
}

/// One-sided Jacobi SVD of a tall matrix (rows >= cols): rotates column
/// pairs until every pair is mutually orthogonal relative to its norms,
/// then reads off sigma_k = |b_k| and u_k = b_k / sigma_k. Exact-zero
/// columns get orthonormal completions so all min(m, n) triples exist.
fn jacobi_svd_tall(a: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut b = a.clone();
    let mut v = CMatrix::identity(n, n);
    let tol = 1e2 * f64::EPSILON;
    // Columns below rounding noise relative to the whole matrix carry no
    // resolvable singular value; they are excluded from rotations and
    // zeroed afterwards, which also keeps the pair arithmetic away from
    // underflow.
    let noise_floor = a.norm() * f64::EPSILON;
    let active = noise_floor * noise_floor;
    for _ in 0..64 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let app = b.column(p).norm_squared();
                let aqq = b.column(q).norm_squared();
                if app <= active || aqq <= active {
                    continue;
                }
                let apq = b.column(p).dotc(&b.column(q));
                let mag = apq.norm();
                if mag <= tol * app.sqrt() * aqq.sqrt() || mag < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                // Unitary rotation R = [[c, s], [-s e^-ip, c e^-ip]] with
                // e^ip the phase of b_p^H b_q; the real angle then follows
                // the symmetric Jacobi recipe on the phase-aligned pair.
                // The phase is divided out componentwise; complex division
                // would square mag and can underflow.
                let phc = C64::new(apq.re / mag, -(apq.im / mag));
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (cs, sn) = (C64::new(c, 0.0), C64::new(s, 0.0));
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)];
                    b[(i, p)] = cs * bp - sn * phc * bq;
                    b[(i, q)] = sn * bp + cs * phc * bq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = cs * vp - sn * phc * vq;
                    v[(i, q)] = sn * vp + cs * phc * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| {
            let norm = b.column(j).norm();
            if norm <= noise_floor {
                0.0
            } else {
                norm
            }
        })
        .collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut left = CMatrix::zeros(m, n);
    let mut right = CMatrix::zeros(n, n);
    let mut sigmas = Vec::with_capacity(n);
    for (slot, &j) in order.iter().enumerate() {
        sigmas.push(norms[j]);
        right.set_column(slot, &v.column(j));
        if norms[j] > 0.0 {
            left.set_column(slot, &(b.column(j) / C64::new(norms[j], 0.0)));
        }
    }
    for slot in 0..n {
        if sigmas[slot] > 0.0 {
            continue;
        }
        complete_column(&mut left, slot);
    }
    (left, sigmas, right)
}

/// Fills column `slot` with a unit vector orthogonal to all other nonzero
/// columns, chosen as the canonical direction with the largest residual.
fn complete_column(u: &mut CMatrix, slot: usize) {
    let m = u.nrows();
    let mut best: Option<CVector> = None;
    let mut best_norm = -1.0;
    for j in 0..m {
        let mut cand = CVector::zeros(m);
        cand[j] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for k in 0..u.ncols() {
                if k == slot {
                    continue;
                }
                let coef = u.column(k).dotc(&cand);
                cand -= u.column(k) * coef;
            }
        }
        let norm = cand.norm();
        if norm > best_norm {
            best_norm = norm;
            best = Some(cand);
        }
        if best_norm > 0.5 {
            break;
        }
    }
    let cand = best.expect("ambient dimension is positive");
    u.set_column(slot, &(cand / C64::new(best_norm, 0.0)));
}

/// Numerical rank at a relative threshold.
pub fn rank(c: &CMatrix, rel_tol: f64) -> usize {
    singular_system(c, rel_tol).rank
}

/// A subspace of C^ambient held as orthonormal basis columns.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: CMatrix,
}

impl Subspace {
    /// Wraps an explicit orthonormal basis, rejecting non-orthonormal input.
    pub fn new(basis: CMatrix) -> Result<Self, LinalgError> {
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let residual = (&gram - CMatrix::identity(k, k)).norm();
        if residual > ORTHONORMAL_TOL * (k.max(1) as f64) {
            return Err(LinalgError::NotOrthonormal(residual));
        }
        Ok(Self { ambient: basis.nrows(), basis })
    }

    /// Orthonormalizes the span of arbitrary columns at the default rank
    /// threshold, discarding numerically dependent directions.
    pub fn from_span(columns: &CMatrix) -> Self {
        Self::from_span_with_tol(columns, default_rank_tol(columns.nrows(), columns.ncols()))
    }

    pub fn from_span_with_tol(columns: &CMatrix, rel_tol: f64) -> Self {
        let sys = singular_system(columns, rel_tol);
        Self { ambient: columns.nrows(), basis: sys.range_basis() }
    }

    pub fn empty(ambient: usize) -> Self {
        Self { ambient, basis: CMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: CMatrix::identity(ambient, ambient) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthogonal projection of a vector onto the subspace.
    pub fn project(&self, v: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Distance from `v` to the subspace.
    pub fn distance(&self, v: &CVector) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Projector matrix B B^H.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }
}

/// Nullspace of C, including the part not visible among the min(m, n)
/// singular triples of a wide matrix; computed as the orthogonal
/// complement of the row space.
pub fn nullspace(c: &CMatrix, rel_tol: f64) -> Subspace {
    let n = c.ncols();
    if c.nrows() == 0 {
        return Subspace::full(n);
    }
    let sys = singular_system(c, rel_tol);
    let row_space = Subspace { ambient: n, basis: sys.row_space_basis() };
    orth_complement(&row_space)
}

/// Range (column space) of C.
pub fn range(c: &CMatrix, rel_tol: f64) -> Subspace {
    let m = c.nrows();
    if c.ncols() == 0 {
        return Subspace::empty(m);
    }
    let sys = singular_system(c, rel_tol);
    Subspace { ambient: m, basis: sys.range_basis() }
}

/// Orthogonal complement within the full ambient space. Uses the singular
/// directions of I - B B^H, whose spectrum is exactly {0, 1}.
pub fn orth_complement(s: &Subspace) -> Subspace {
    let n = s.ambient;
    let k = s.dim();
    if k == 0 {
        return Subspace::full(n);
    }
    if k >= n {
        return Subspace::empty(n);
    }
    let projector = CMatrix::identity(n, n) - s.projector();
    let sys = singular_system(&projector, 0.5);
    Subspace { ambient: n, basis: extract_columns(&sys.left, 0, n - k) }
}

/// Orthogonal complement of `s` inside the subspace `within`; `s` must be
/// contained in `within` for the result to be meaningful.
pub fn orth_complement_within(s: &Subspace, within: &Subspace) -> Result<Subspace, LinalgError> {
    if s.ambient != within.ambient {
        return Err(LinalgError::DimensionMismatch { left: s.ambient, right: within.ambient });
    }
    let coords = within.basis.adjoint() * &s.basis;
    let coord_space = Subspace::from_span(&coords);
    let comp = orth_complement(&coord_space);
    Ok(Subspace {
        ambient: within.ambient,
        basis: &within.basis * comp.basis(),
    })
}

/// Moore-Penrose pseudoinverse via the singular system at the default rank
/// threshold.
pub fn pseudoinverse(c: &CMatrix) -> CMatrix {
    let (m, n) = c.shape();
    if m == 0 || n == 0 {
        return CMatrix::zeros(n, m);
    }
    let sys = singular_system(c, default_rank_tol(m, n));
    let mut out = CMatrix::zeros(n, m);
    for k in 0..sys.rank {
        let u = sys.left.column(k);
        let v = sys.right.column(k);
        let inv = C64::new(1.0 / sys.sigmas[k], 0.0);
        // out += v (1/sigma) u^H, accumulated column by column.
        for j in 0..m {
            let w = inv * u[j].conj();
            for i in 0..n {
                out[(i, j)] += v[i] * w;
            }
        }
    }
    out
}

/// Intersection of two subspaces via principal directions: singular values
/// of A^H B close to one identify the common part.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    if a.ambient != b.ambient {
        return Err(LinalgError::DimensionMismatch { left: a.ambient, right: b.ambient });
    }
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(Subspace::empty(a.ambient));
    }
    let cross = a.basis.adjoint() * &b.basis;
    let sys = singular_system(&cross, default_rank_tol(cross.nrows(), cross.ncols()));
    let common = sys
        .sigmas
        .iter()
        .filter(|&&s| 1.0 - s <= SUBSPACE_MATCH_TOL)
        .count();
    if common == 0 {
        return Ok(Subspace::empty(a.ambient));
    }
    let directions = &a.basis * extract_columns(&sys.left, 0, common);
    Ok(Subspace::from_span(&directions))
}

/// Preimage {x : C x in S}. Built as the nullspace of P_(S complement) C;
/// its dimension therefore carries no assumption about the dimension
/// identity dim N(C) + dim(R(C) /\ S), which stays independently testable.
pub fn preimage(c: &CMatrix, s: &Subspace) -> Result<Subspace, LinalgError> {
    if s.ambient != c.nrows() {
        return Err(LinalgError::DimensionMismatch { left: s.ambient, right: c.nrows() });
    }
    let n = c.ncols();
    let comp = orth_complement(s);
    if comp.dim() == 0 || n == 0 {
        // S is the whole codomain; every x qualifies.
        return Ok(Subspace::full(n));
    }
    let constraints = comp.basis().adjoint() * c;
    // The violation threshold is anchored to the scale of C itself. When S
    // contains the whole range the constraint product is pure rounding
    // noise, and a threshold relative to that product would find spurious
    // rank in it.
    let cut = default_rank_tol(c.nrows(), n) * c.norm();
    let sys = singular_system(&constraints, 0.0);
    let active = sys.sigmas.iter().filter(|&&sv| sv > cut).count();
    if active == 0 {
        return Ok(Subspace::full(n));
    }
    let row_space = Subspace { ambient: n, basis: extract_columns(&sys.right, 0, active) };
    Ok(orth_complement(&row_space))
}

/// Basis-independent equality through principal angles.
pub fn subspaces_equal(a: &Subspace, b: &Subspace) -> bool {
    if a.ambient != b.ambient || a.dim() != b.dim() {
        return false;
    }
    if a.dim() == 0 {
        return true;
    }
    let cross = a.basis.adjoint() * &b.basis;
    let sys = singular_system(&cross, 0.0);
    sys.sigmas.iter().all(|&s| 1.0 - s <= SUBSPACE_MATCH_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> CMatrix {
        CMatrix::from_fn(m, n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im) / 2f64.sqrt()
        })
    }

    fn random_subspace(rng: &mut ChaCha8Rng, ambient: usize, dim: usize) -> Subspace {
        Subspace::from_span(&random_matrix(rng, ambient, dim))
    }

    #[test]
    fn singular_system_of_diagonal() {
        let c = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(3.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ]));
        let sys = singular_system(&c, 1e-6);
        assert_eq!(sys.rank, 2);
        assert!((sys.sigmas[0] - 3.0).abs() < 1e-12);
        assert!((sys.sigmas[1] - 1.0).abs() < 1e-12);
        assert!(sys.sigmas[2].abs() < 1e-12);
    }

    #[test]
    fn singular_system_of_zero_matrix() {
        let c = CMatrix::zeros(4, 3);
        assert_eq!(singular_system(&c, 1e-6).rank, 0);
    }

    #[test]
    fn singular_system_reconstructs_random_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = random_matrix(&mut rng, 6, 4);
        let sys = singular_system(&c, default_rank_tol(6, 4));
        assert_eq!(sys.rank, 4);
        let mut rec = CMatrix::zeros(6, 4);
        for k in 0..sys.sigmas.len() {
            let u = sys.left.column(k).into_owned();
            let v = sys.right.column(k).into_owned();
            rec += u * v.adjoint() * C64::new(sys.sigmas[k], 0.0);
        }
        assert!((rec - &c).norm() / c.norm() < 1e-8);
        for k in 0..sys.rank {
            let lhs = &c * sys.right.column(k).into_owned();
            let rhs = sys.left.column(k).into_owned() * C64::new(sys.sigmas[k], 0.0);
            assert!((lhs - rhs).norm() <= 1e-8 * sys.sigmas[0]);
        }
    }

    #[test]
    fn singular_system_exact_on_projector_spectrum() {
        // Spectrum {1, 1, 1, 0, 0} with matched vector pairs; repeated
        // singular values are the hard case for SVD implementations.
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        let s = random_subspace(&mut rng, 5, 2);
        let projector = CMatrix::identity(5, 5) - s.projector();
        let sys = singular_system(&projector, 0.5);
        assert_eq!(sys.rank, 3);
        for k in 0..3 {
            assert!((sys.sigmas[k] - 1.0).abs() < 1e-12);
        }
        for k in 3..5 {
            assert!(sys.sigmas[k].abs() < 1e-12);
        }
        let mut rec = CMatrix::zeros(5, 5);
        for k in 0..5 {
            let u = sys.left.column(k).into_owned();
            let v = sys.right.column(k).into_owned();
            rec += u * v.adjoint() * C64::new(sys.sigmas[k], 0.0);
        }
        assert!((rec - &projector).norm() < 1e-12);
    }

    #[test]
    fn singular_vectors_orthonormal_for_awkward_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for &(m, n) in &[(1usize, 1usize), (1, 7), (7, 1), (4, 9), (9, 4), (6, 6)] {
            let c = random_matrix(&mut rng, m, n);
            let sys = singular_system(&c, 0.0);
            let k = m.min(n);
            let gu = sys.left.adjoint() * &sys.left;
            let gv = sys.right.adjoint() * &sys.right;
            assert!((gu - CMatrix::identity(k, k)).norm() < 1e-12);
            assert!((gv - CMatrix::identity(k, k)).norm() < 1e-12);
            for w in sys.sigmas.windows(2) {
                assert!(w[0] >= w[1]);
            }
            let mut rec = CMatrix::zeros(m, n);
            for j in 0..k {
                let u = sys.left.column(j).into_owned();
                let v = sys.right.column(j).into_owned();
                rec += u * v.adjoint() * C64::new(sys.sigmas[j], 0.0);
            }
            assert!((rec - &c).norm() <= 1e-12 * (1.0 + c.norm()));
        }
    }

    #[test]
    fn zero_columns_get_orthonormal_completions() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let mut c = random_matrix(&mut rng, 5, 4);
        c.set_column(1, &CVector::zeros(5));
        c.set_column(3, &CVector::zeros(5));
        let sys = singular_system(&c, default_rank_tol(5, 4));
        assert_eq!(sys.rank, 2);
        let gu = sys.left.adjoint() * &sys.left;
        assert!((gu - CMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn sigma_sequence_invariant_under_unitary_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let c = random_matrix(&mut rng, 5, 7);
        let q_left = Subspace::from_span(&random_matrix(&mut rng, 5, 5));
        let q_right = Subspace::from_span(&random_matrix(&mut rng, 7, 7));
        let rotated = q_left.basis() * &c * q_right.basis().adjoint();
        let s1 = singular_system(&c, 1e-9).sigmas;
        let s2 = singular_system(&rotated, 1e-9).sigmas;
        for (a, b) in s1.iter().zip(&s2) {
            assert!((a - b).abs() <= 1e-9 * s1[0]);
        }
    }

    #[test]
    fn nullspace_and_range_of_identity() {
        let c = CMatrix::identity(4, 4);
        assert_eq!(nullspace(&c, 1e-9).dim(), 0);
        assert_eq!(range(&c, 1e-9).dim(), 4);
    }

    #[test]
    fn nullspace_of_rank_one_outer_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let u = random_matrix(&mut rng, 5, 1);
        let v = random_matrix(&mut rng, 5, 1);
        let c = &u * v.adjoint();
        let ns = nullspace(&c, 1e-9);
        assert_eq!(ns.dim(), 4);
        assert!((&c * ns.basis()).norm() < 1e-9);
    }

    #[test]
    fn nullspace_of_wide_matrix_has_full_codimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let c = random_matrix(&mut rng, 3, 9);
        let ns = nullspace(&c, 1e-9);
        assert_eq!(ns.dim(), 6);
        assert!((&c * ns.basis()).norm() < 1e-9);
    }

    #[test]
    fn complement_dimensions_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let s = random_subspace(&mut rng, 5, 2);
        let comp = orth_complement(&s);
        assert_eq!(comp.dim(), 3);
        let cross = s.basis().adjoint() * comp.basis();
        assert!(cross.norm() < 1e-10);
    }

    #[test]
    fn rank_nullity_on_random_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..50 {
            let m = rng.gen_range(1..8);
            let n = rng.gen_range(1..8);
            let r = rng.gen_range(0..=m.min(n));
            let c = random_matrix(&mut rng, m, r) * random_matrix(&mut rng, r, n);
            let tol = default_rank_tol(m, n);
            assert_eq!(rank(&c, tol), r);
            assert_eq!(nullspace(&c, tol).dim() + r, n);
        }
    }

    #[test]
    fn pseudoinverse_of_invertible_is_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let c = random_matrix(&mut rng, 3, 3);
        let pinv = pseudoinverse(&c);
        let residual = (&c * &pinv - CMatrix::identity(3, 3)).norm();
        assert!(residual < 1e-10);
    }

    #[test]
    fn pseudoinverse_of_zero_is_zero() {
        let c = CMatrix::zeros(3, 4);
        assert!(pseudoinverse(&c).norm() == 0.0);
    }

    #[test]
    fn pseudoinverse_identities_on_low_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let c = random_matrix(&mut rng, 4, 2) * random_matrix(&mut rng, 2, 6);
        let pinv = pseudoinverse(&c);
        // x in N(C)^perp is recovered by C+ C.
        let row_space = range(&c.adjoint(), 1e-9);
        let x = row_space.project(&random_matrix(&mut rng, 6, 1).column(0).into_owned());
        assert!((&pinv * (&c * &x) - &x).norm() <= PSEUDOINVERSE_TOL * x.norm());
        // y in R(C) is recovered by C C+.
        let y = range(&c, 1e-9).project(&random_matrix(&mut rng, 4, 1).column(0).into_owned());
        assert!((&c * (&pinv * &y) - &y).norm() <= PSEUDOINVERSE_TOL * y.norm());
        // Range and nullspace exchange.
        assert!(subspaces_equal(&range(&pinv, 1e-9), &row_space));
        assert!(subspaces_equal(
            &nullspace(&pinv, 1e-9),
            &orth_complement(&range(&c, 1e-9))
        ));
    }

    #[test]
    fn pseudoinverse_agrees_with_ridge_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        // Rank 3 with singular values {2, 1.5, 1}: keeps the ridge bias
        // eps / sigma_min^2 and the 1/eps noise amplification both far
        // below the 1e-7 agreement target.
        let u = random_subspace(&mut rng, 5, 3);
        let v = random_subspace(&mut rng, 6, 3);
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(2.0, 0.0),
            C64::new(1.5, 0.0),
            C64::new(1.0, 0.0),
        ]));
        let c = u.basis() * d * v.basis().adjoint();
        let pinv = pseudoinverse(&c);
        // (C^H C + eps I)^-1 C^H approaches C+ from the ridge side.
        let eps = 1e-8;
        let n = c.ncols();
        let gram = c.adjoint() * &c + CMatrix::identity(n, n) * C64::new(eps, 0.0);
        let ridge = gram.lu().solve(&c.adjoint()).expect("ridge system is invertible");
        assert!((ridge - &pinv).norm() <= 1e-7 * (1.0 + pinv.norm()));
    }

    #[test]
    fn intersect_with_self_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let a = random_subspace(&mut rng, 6, 3);
        let i = intersect(&a, &a).unwrap();
        assert!(subspaces_equal(&i, &a));
    }

    #[test]
    fn intersect_orthogonal_subspaces_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random_subspace(&mut rng, 6, 2);
        let b = orth_complement(&a);
        assert_eq!(intersect(&a, &b).unwrap().dim(), 0);
    }

    #[test]
    fn intersect_recovers_planted_common_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let common = random_subspace(&mut rng, 5, 2);
        let extra_a = random_matrix(&mut rng, 5, 1);
        let extra_b = random_matrix(&mut rng, 5, 1);
        let a = Subspace::from_span(&hcat(&[common.basis(), &extra_a]));
        let b = Subspace::from_span(&hcat(&[common.basis(), &extra_b]));
        let i = intersect(&a, &b).unwrap();
        assert_eq!(i.dim(), 2);
        assert!(subspaces_equal(&i, &common));
    }

    #[test]
    fn intersect_rejects_mismatched_ambients() {
        let a = Subspace::full(3);
        let b = Subspace::full(4);
        assert!(intersect(&a, &b).is_err());
    }

    #[test]
    fn preimage_under_identity_is_the_subspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let s = random_subspace(&mut rng, 4, 2);
        let p = preimage(&CMatrix::identity(4, 4), &s).unwrap();
        assert!(subspaces_equal(&p, &s));
    }

    #[test]
    fn preimage_under_zero_map_is_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let s = random_subspace(&mut rng, 3, 1);
        let p = preimage(&CMatrix::zeros(3, 4), &s).unwrap();
        assert_eq!(p.dim(), 4);
    }

    #[test]
    fn preimage_of_planted_range_subspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        // Full row rank 3x5: nullspace dim 2; a 1-dim S inside the range
        // lifts to dimension 3.
        let c = random_matrix(&mut rng, 3, 5);
        let s_dir = &c * random_matrix(&mut rng, 5, 1);
        let s = Subspace::from_span(&s_dir);
        let p = preimage(&c, &s).unwrap();
        assert_eq!(p.dim(), 3);
        // Basis vectors that land in the nullspace have |C x| near zero, so
        // the off-S residual is bounded against the operator scale instead
        // of the image norm.
        let scale = singular_system(&c, 0.0).sigmas[0];
        for k in 0..p.dim() {
            let x = p.basis().column(k).into_owned();
            let img = &c * &x;
            assert!(s.distance(&img) <= 1e-8 * (1.0 + scale));
        }
    }

    #[test]
    fn subspace_new_rejects_skewed_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let m = random_matrix(&mut rng, 4, 2);
        assert!(Subspace::new(m).is_err());
    }

    #[test]
    fn complement_within_splits_the_host_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let host = random_subspace(&mut rng, 7, 4);
        let part = Subspace::from_span(&(host.basis() * random_matrix(&mut rng, 4, 2)));
        let rest = orth_complement_within(&part, &host).unwrap();
        assert_eq!(rest.dim(), 2);
        assert!((part.basis().adjoint() * rest.basis()).norm() < 1e-9);
        // Together they fill the host space.
        let joined = Subspace::from_span(&hcat(&[part.basis(), rest.basis()]));
        assert!(subspaces_equal(&joined, &host));
    }
}
