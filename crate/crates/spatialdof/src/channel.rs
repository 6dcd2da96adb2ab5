//! Two constructions of the three-node scattering channel. The physical
//! mode samples the Fourier array kernels and the scattering field on
//! quadrature grids, so subspace dimensions appear as numerical ranks with
//! a spectral plunge. The block model replaces each wavevector interval by
//! an integer block of coordinates, so every dimension from the closed-form
//! theory is exact and corner points verify without slack.

use crate::intervals::IntervalSet;
use crate::linalg::{
    singular_system, CMatrix, CVector, Subspace, C64, HALF_POWER_RANK_TOL, PHYSICAL_RANK_TOL,
};
use crate::regions::{NetworkGeometry, RegionError};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

/// Rank threshold for block-model matrices, whose spurious singular values
/// sit at rounding level while genuine ones are order one.
pub const BLOCK_RANK_TOL: f64 = 1e-9;

/// Sampling layout for the physical mode: `n_wavevector` trapezoid points
/// on [-1, 1], aperture samples every 1/(2 oversampling) wavelengths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_wavevector: usize,
    pub oversampling: f64,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n_wavevector: 256, oversampling: 8.0, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelMode {
    Physical,
    BlockModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Transmit,
    Receive,
}

/// The three directed links of the topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    /// Uplink user to base-station receiver.
    Uplink,
    /// Base-station transmitter back into its own receiver.
    SelfInterference,
    /// Base-station transmitter to downlink user.
    Downlink,
}

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("wavevector grid needs at least 16 samples, got {0}")]
    GridTooCoarse(usize),
    #[error("oversampling must be at least 1, got {0}")]
    Undersampled(f64),
    #[error("block dimension {expr} = {value} is not a nonnegative integer")]
    NonIntegerDimension { expr: &'static str, value: f64 },
    #[error(transparent)]
    Geometry(#[from] RegionError),
}

/// Discretized channel: wavevector-domain scattering matrices, array
/// response maps, and the transmit/receive signal spaces with one
/// wavevector coordinate recorded per ambient axis.
#[derive(Debug, Clone)]
pub struct ChannelOperators {
    pub mode: ChannelMode,
    pub h11: CMatrix,
    pub h12: CMatrix,
    pub h22: CMatrix,
    pub a_t1: CMatrix,
    pub a_t2: CMatrix,
    pub a_r1: CMatrix,
    pub a_r2: CMatrix,
    pub tx_space_1: Subspace,
    pub tx_space_2: Subspace,
    pub rx_space_1: Subspace,
    pub rx_space_2: Subspace,
    pub t1_coords: Vec<f64>,
    pub t2_coords: Vec<f64>,
    pub r1_coords: Vec<f64>,
    pub r2_coords: Vec<f64>,
    /// Rank threshold matched to the mode's spectral floor.
    pub rank_tol: f64,
}

impl ChannelOperators {
    /// Array-to-array composite map of one link. In the block model the
    /// response maps are identities, so this is the scattering block
    /// itself.
    pub fn composite(&self, link: Link) -> CMatrix {
        match link {
            Link::Uplink => &self.a_r1 * &self.h11 * &self.a_t1,
            Link::SelfInterference => &self.a_r1 * &self.h12 * &self.a_t2,
            Link::Downlink => &self.a_r2 * &self.h22 * &self.a_t2,
        }
    }

    pub fn export(&self) -> ChannelExport {
        ChannelExport {
            mode: self.mode,
            t1_coords: self.t1_coords.clone(),
            t2_coords: self.t2_coords.clone(),
            r1_coords: self.r1_coords.clone(),
            r2_coords: self.r2_coords.clone(),
            h11: MatrixExport::from(&self.h11),
            h12: MatrixExport::from(&self.h12),
            h22: MatrixExport::from(&self.h22),
            a_t1: MatrixExport::from(&self.a_t1),
            a_t2: MatrixExport::from(&self.a_t2),
            a_r1: MatrixExport::from(&self.a_r1),
            a_r2: MatrixExport::from(&self.a_r2),
        }
    }
}

/// Row-major matrix dump with split real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixExport {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&CMatrix> for MatrixExport {
    fn from(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut re = Vec::with_capacity(rows * cols);
        let mut im = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self { rows, cols, re, im }
    }
}

/// Grid metadata plus all operator matrices, for offline inspection.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelExport {
    pub mode: ChannelMode,
    pub t1_coords: Vec<f64>,
    pub t2_coords: Vec<f64>,
    pub r1_coords: Vec<f64>,
    pub r2_coords: Vec<f64>,
    pub h11: MatrixExport,
    pub h12: MatrixExport,
    pub h22: MatrixExport,
    pub a_t1: MatrixExport,
    pub a_t2: MatrixExport,
    pub a_r1: MatrixExport,
    pub a_r2: MatrixExport,
}

/// A sampled wavevector-domain signal with its nominal support.
#[derive(Debug, Clone)]
pub struct WavevectorSignal {
    pub domain: IntervalSet,
    pub coords: Vec<f64>,
    pub samples: CVector,
}

impl WavevectorSignal {
    pub fn new(domain: IntervalSet, coords: Vec<f64>, samples: CVector) -> Self {
        assert_eq!(coords.len(), samples.len());
        Self { domain, coords, samples }
    }

    /// Largest sample magnitude at a coordinate outside the support.
    pub fn off_domain_leakage(&self) -> f64 {
        self.coords
            .iter()
            .zip(self.samples.iter())
            .filter(|(&t, _)| !self.domain.contains(t))
            .map(|(_, s)| s.norm())
            .fold(0.0, f64::max)
    }
}

/// Uniform trapezoid grid on [-1, 1]; weights sum to 2.
fn wavevector_grid(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let step = 2.0 / (n - 1) as f64;
    let points = (0..n).map(|i| -1.0 + step * i as f64).collect();
    let mut weights = vec![step; n];
    weights[0] = 0.5 * step;
    weights[n - 1] = 0.5 * step;
    (points, weights)
}

/// Aperture samples on [-L, L]; weights sum to 2L. A zero-length aperture
/// degenerates to a single point element of unit weight.
fn aperture_grid(l: f64, oversampling: f64) -> (Vec<f64>, Vec<f64>) {
    if l <= 0.0 {
        return (vec![0.0], vec![1.0]);
    }
    let n = ((4.0 * l * oversampling).round() as usize + 1).max(2);
    let step = 2.0 * l / (n - 1) as f64;
    let points = (0..n).map(|i| -l + step * i as f64).collect();
    let mut weights = vec![step; n];
    weights[0] = 0.5 * step;
    weights[n - 1] = 0.5 * step;
    (points, weights)
}

/// Fourier kernel between aperture and wavevector grids, with square-root
/// quadrature weights folded in on both sides so that plain inner products
/// of the sampled vectors approximate the continuous ones. Transmit maps
/// aperture to wavevector rows; receive is the reciprocal conjugate and
/// maps wavevector columns to aperture rows.
pub fn array_response(l: f64, grid: &GridSpec, direction: Direction) -> CMatrix {
    let (t, w_t) = wavevector_grid(grid.n_wavevector);
    let (p, w_p) = aperture_grid(l, grid.oversampling);
    match direction {
        Direction::Transmit => CMatrix::from_fn(t.len(), p.len(), |a, c| {
            C64::from_polar((w_t[a] * w_p[c]).sqrt(), -TAU * p[c] * t[a])
        }),
        Direction::Receive => CMatrix::from_fn(p.len(), t.len(), |d, a| {
            C64::from_polar((w_p[d] * w_t[a]).sqrt(), TAU * p[d] * t[a])
        }),
    }
}

fn splitmix(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) / 2f64.sqrt()
}

/// Raw scattering field on the wavevector grid: i.i.d. unit-variance
/// complex Gaussian entries on cells inside psi_r x psi_t, zero outside.
/// Redraws in the (measure-zero) event that an in-support row or column
/// comes out all zero, so every coupled direction actually couples.
pub fn random_scattering(psi_r: &IntervalSet, psi_t: &IntervalSet, grid: &GridSpec) -> CMatrix {
    let (t, _) = wavevector_grid(grid.n_wavevector);
    let n = t.len();
    let rows_in: Vec<bool> = t.iter().map(|&x| psi_r.contains(x)).collect();
    let cols_in: Vec<bool> = t.iter().map(|&x| psi_t.contains(x)).collect();
    let any_rows = rows_in.iter().any(|&b| b);
    let any_cols = cols_in.iter().any(|&b| b);
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut m = CMatrix::zeros(n, n);
    for _ in 0..8 {
        for i in 0..n {
            if !rows_in[i] {
                continue;
            }
            for j in 0..n {
                if cols_in[j] {
                    m[(i, j)] = complex_gaussian(&mut rng);
                }
            }
        }
        if !(any_rows && any_cols) {
            return m;
        }
        let rows_ok = (0..n)
            .filter(|&i| rows_in[i])
            .all(|i| (0..n).any(|j| m[(i, j)].norm() > 0.0));
        let cols_ok = (0..n)
            .filter(|&j| cols_in[j])
            .all(|j| (0..n).any(|i| m[(i, j)].norm() > 0.0));
        if rows_ok && cols_ok {
            return m;
        }
    }
    m
}

fn validate_grid(grid: &GridSpec) -> Result<(), ChannelError> {
    if grid.n_wavevector < 16 {
        return Err(ChannelError::GridTooCoarse(grid.n_wavevector));
    }
    if grid.oversampling < 1.0 {
        return Err(ChannelError::Undersampled(grid.oversampling));
    }
    Ok(())
}

fn zero_rows_where(m: &mut CMatrix, coords: &[f64], drop: impl Fn(f64) -> bool) {
    for (i, &t) in coords.iter().enumerate() {
        if drop(t) {
            for j in 0..m.ncols() {
                m[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
}

/// Range of a kernel map after zeroing rows outside `keep`, truncated at
/// half power so the dimension equals the spectral plateau length. Masked
/// rows stay exactly zero in the basis.
fn kernel_space(map: &CMatrix, keep: &IntervalSet, t: &[f64]) -> Subspace {
    let mut masked = map.clone();
    zero_rows_where(&mut masked, t, |x| !keep.contains(x));
    Subspace::from_span_with_tol(&masked, HALF_POWER_RANK_TOL)
}

/// Sampled physical channel: scattering fields drawn per link, folded with
/// the quadrature weights, and signal spaces taken as the ranges of the
/// support-restricted response maps.
pub fn compose_channel(
    geom: &NetworkGeometry,
    grid: &GridSpec,
) -> Result<ChannelOperators, ChannelError> {
    geom.validate()?;
    validate_grid(grid)?;
    let (t, w_t) = wavevector_grid(grid.n_wavevector);
    let sqrt_w: Vec<f64> = w_t.iter().map(|w| w.sqrt()).collect();
    let fold = |scat: CMatrix| {
        CMatrix::from_fn(scat.nrows(), scat.ncols(), |i, j| {
            scat[(i, j)] * (sqrt_w[i] * sqrt_w[j])
        })
    };
    let link = |psi_r: &IntervalSet, psi_t: &IntervalSet, tag: u64| {
        let sub = GridSpec { seed: splitmix(grid.seed, tag), ..grid.clone() };
        fold(random_scattering(psi_r, psi_t, &sub))
    };
    let h11 = link(&geom.psi_r11, &geom.psi_t11, 11);
    let h12 = link(&geom.psi_r12, &geom.psi_t12, 12);
    let h22 = link(&geom.psi_r22, &geom.psi_t22, 22);
    let a_t1 = array_response(geom.l_t1, grid, Direction::Transmit);
    let a_t2 = array_response(geom.l_t2, grid, Direction::Transmit);
    let a_r1 = array_response(geom.l_r1, grid, Direction::Receive);
    let a_r2 = array_response(geom.l_r2, grid, Direction::Receive);
    // T1 couples only into R1, and R2 only hears T2, so those unions
    // collapse to single intervals.
    let tx_space_1 = kernel_space(&a_t1, &geom.psi_t11, &t);
    let tx_space_2 = kernel_space(&a_t2, &geom.psi_t22.union(&geom.psi_t12), &t);
    let rx_space_1 = kernel_space(&a_r1.adjoint(), &geom.psi_r11.union(&geom.psi_r12), &t);
    let rx_space_2 = kernel_space(&a_r2.adjoint(), &geom.psi_r22, &t);
    Ok(ChannelOperators {
        mode: ChannelMode::Physical,
        h11,
        h12,
        h22,
        a_t1,
        a_t2,
        a_r1,
        a_r2,
        tx_space_1,
        tx_space_2,
        rx_space_1,
        rx_space_2,
        t1_coords: t.clone(),
        t2_coords: t.clone(),
        r1_coords: t.clone(),
        r2_coords: t,
        rank_tol: PHYSICAL_RANK_TOL,
    })
}

fn integer_dim(value: f64, expr: &'static str) -> Result<usize, ChannelError> {
    let rounded = value.round();
    if (value - rounded).abs() > 1e-9 || rounded < 0.0 {
        return Err(ChannelError::NonIntegerDimension { expr, value });
    }
    Ok(rounded as usize)
}

/// Point at prefix measure `x` inside the set, walking segments in order.
fn point_at_measure(set: &IntervalSet, x: f64) -> f64 {
    let mut acc = 0.0;
    for &(lo, hi) in set.segments() {
        let len = hi - lo;
        if acc + len >= x {
            return lo + (x - acc);
        }
        acc += len;
    }
    set.segments().last().map(|&(_, hi)| hi).unwrap_or(0.0)
}

/// `count` interior points spread at uniform measure quantiles of the set.
fn spread_points(set: &IntervalSet, count: usize) -> Vec<f64> {
    let mu = set.measure();
    (0..count)
        .map(|j| point_at_measure(set, mu * (j as f64 + 0.5) / count as f64))
        .collect()
}

fn masked_gaussian(
    rng: &mut ChaCha8Rng,
    row_coords: &[f64],
    row_set: &IntervalSet,
    col_coords: &[f64],
    col_set: &IntervalSet,
) -> CMatrix {
    let mut m = CMatrix::zeros(row_coords.len(), col_coords.len());
    for i in 0..row_coords.len() {
        if !row_set.contains(row_coords[i]) {
            continue;
        }
        for j in 0..col_coords.len() {
            if col_set.contains(col_coords[j]) {
                m[(i, j)] = complex_gaussian(rng);
            }
        }
    }
    m
}

/// Exact block model. Each node's signal space gets one coordinate per
/// unit of the corresponding dimension expression, with a representative
/// wavevector location recorded per coordinate; interval-set membership of
/// those locations then induces the scattering support blocks. Every
/// dimension expression of the closed-form theory must evaluate to an
/// integer, otherwise the offending expression is reported.
pub fn blockmodel_channel(
    geom: &NetworkGeometry,
    seed: u64,
) -> Result<ChannelOperators, ChannelError> {
    geom.validate()?;
    let n_t1 = integer_dim(geom.dim_t11(), "2 L_T1 |psi_T11|")?;
    let t2_orth = integer_dim(geom.dim_t22_orth(), "2 L_T2 |psi_T22 \\ psi_T12|")?;
    let t2_int = integer_dim(geom.dim_t22_int(), "2 L_T2 |psi_T22 & psi_T12|")?;
    let t2_only = integer_dim(geom.dim_t12_only(), "2 L_T2 |psi_T12 \\ psi_T22|")?;
    let r1_orth = integer_dim(geom.dim_r11_orth(), "2 L_R1 |psi_R11 \\ psi_R12|")?;
    let r1_int = integer_dim(geom.dim_r11_int(), "2 L_R1 |psi_R11 & psi_R12|")?;
    let r1_only = integer_dim(geom.dim_r12_only(), "2 L_R1 |psi_R12 \\ psi_R11|")?;
    let n_r2 = integer_dim(geom.dim_r22(), "2 L_R2 |psi_R22|")?;
    let t1_coords = spread_points(&geom.psi_t11, n_t1);
    let t2_coords = [
        spread_points(&geom.psi_t22.difference(&geom.psi_t12), t2_orth),
        spread_points(&geom.psi_t22.intersect(&geom.psi_t12), t2_int),
        spread_points(&geom.psi_t12.difference(&geom.psi_t22), t2_only),
    ]
    .concat();
    let r1_coords = [
        spread_points(&geom.psi_r11.difference(&geom.psi_r12), r1_orth),
        spread_points(&geom.psi_r11.intersect(&geom.psi_r12), r1_int),
        spread_points(&geom.psi_r12.difference(&geom.psi_r11), r1_only),
    ]
    .concat();
    let r2_coords = spread_points(&geom.psi_r22, n_r2);
    let n_t2 = t2_coords.len();
    let n_r1 = r1_coords.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h11 = masked_gaussian(&mut rng, &r1_coords, &geom.psi_r11, &t1_coords, &geom.psi_t11);
    let h12 = masked_gaussian(&mut rng, &r1_coords, &geom.psi_r12, &t2_coords, &geom.psi_t12);
    let h22 = masked_gaussian(&mut rng, &r2_coords, &geom.psi_r22, &t2_coords, &geom.psi_t22);
    Ok(ChannelOperators {
        mode: ChannelMode::BlockModel,
        h11,
        h12,
        h22,
        a_t1: CMatrix::identity(n_t1, n_t1),
        a_t2: CMatrix::identity(n_t2, n_t2),
        a_r1: CMatrix::identity(n_r1, n_r1),
        a_r2: CMatrix::identity(n_r2, n_r2),
        tx_space_1: Subspace::full(n_t1),
        tx_space_2: Subspace::full(n_t2),
        rx_space_1: Subspace::full(n_r1),
        rx_space_2: Subspace::full(n_r2),
        t1_coords,
        t2_coords,
        r1_coords,
        r2_coords,
        rank_tol: BLOCK_RANK_TOL,
    })
}

/// Members of `space` whose samples vanish off `keep`: directions of the
/// off-set restriction with singular value at most `tol`. With `tol` at
/// the physical threshold this tolerates the spectral plunge; block-model
/// vanishing is exact, so any tiny threshold gives the same answer.
pub fn support_subspace(
    space: &Subspace,
    keep: &IntervalSet,
    coords: &[f64],
    tol: f64,
) -> Subspace {
    assert_eq!(space.ambient_dim(), coords.len());
    if space.dim() == 0 {
        return space.clone();
    }
    let mut off = space.basis().clone();
    zero_rows_where(&mut off, coords, |t| keep.contains(t));
    let sys = singular_system(&off, 0.0);
    let total = sys.sigmas.len();
    let kept = sys.sigmas.iter().filter(|&&s| s <= tol).count();
    let tail = sys.right.columns(total - kept, kept).into_owned();
    Subspace::new(space.basis() * tail).expect("rotation of an orthonormal basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{default_rank_tol, rank, subspaces_equal};
    use crate::regions::overlapped_geometry;

    fn seg(lo: f64, hi: f64) -> IntervalSet {
        IntervalSet::segment(lo, hi)
    }

    fn grid(n: usize, oversampling: f64, seed: u64) -> GridSpec {
        GridSpec { n_wavevector: n, oversampling, seed }
    }

    fn reference_geometry() -> NetworkGeometry {
        NetworkGeometry {
            l_t1: 1.0,
            l_r1: 1.0,
            l_t2: 1.0,
            l_r2: 1.0,
            psi_t11: seg(0.0, 1.0),
            psi_r11: seg(0.0, 1.0),
            psi_t22: seg(0.0, 1.0),
            psi_r22: seg(0.0, 1.0),
            psi_t12: seg(0.5, 1.0),
            psi_r12: seg(0.75, 1.0),
        }
    }

    fn doubled_geometry() -> NetworkGeometry {
        let mut g = reference_geometry();
        g.l_t1 = 2.0;
        g.l_r1 = 2.0;
        g.l_t2 = 2.0;
        g.l_r2 = 2.0;
        g
    }

    #[test]
    fn quadrature_weights_sum_to_domain_lengths() {
        let (_, w_t) = wavevector_grid(33);
        assert!((w_t.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        let (p, w_p) = aperture_grid(1.25, 4.0);
        assert!((w_p.iter().sum::<f64>() - 2.5).abs() < 1e-12);
        assert!((p[0] + 1.25).abs() < 1e-12);
        assert!((p[p.len() - 1] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn point_element_is_a_single_constant_column() {
        let g = grid(32, 4.0, 0);
        let a = array_response(0.0, &g, Direction::Transmit);
        assert_eq!(a.ncols(), 1);
        let (_, w_t) = wavevector_grid(32);
        // Constant kernel once the quadrature folding is divided out.
        for i in 0..a.nrows() {
            let unfolded = a[(i, 0)] / C64::new(w_t[i].sqrt(), 0.0);
            assert!((unfolded - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn aperture_rank_matches_resolution_count() {
        let g = grid(128, 4.0, 0);
        let a = array_response(1.0, &g, Direction::Transmit);
        let r = rank(&a, HALF_POWER_RANK_TOL);
        assert!((3..=5).contains(&r), "full-range rank {r}");
    }

    #[test]
    fn row_restricted_rank_tracks_interval_measure() {
        let g = grid(128, 4.0, 0);
        let a = array_response(2.0, &g, Direction::Transmit);
        let space = kernel_space(&a, &seg(0.0, 1.0), &wavevector_grid(128).0);
        let d = space.dim() as i64;
        assert!((3..=5).contains(&d), "restricted dimension {d}");
    }

    #[test]
    fn scattering_empty_transmit_side_is_zero() {
        let g = grid(24, 4.0, 3);
        let m = random_scattering(&IntervalSet::empty(), &seg(-1.0, 1.0), &g);
        assert_eq!(m.norm(), 0.0);
    }

    #[test]
    fn scattering_full_support_has_full_rank() {
        let g = grid(24, 4.0, 4);
        let full = seg(-1.0, 1.0);
        let m = random_scattering(&full, &full, &g);
        assert_eq!(rank(&m, default_rank_tol(24, 24)), 24);
    }

    #[test]
    fn scattering_support_pattern_follows_intervals() {
        let g = grid(32, 4.0, 5);
        let m = random_scattering(&seg(-1.0, -0.5), &seg(0.5, 1.0), &g);
        let (t, _) = wavevector_grid(32);
        for i in 0..32 {
            for j in 0..32 {
                let inside = (-1.0..=-0.5).contains(&t[i]) && (0.5..=1.0).contains(&t[j]);
                assert_eq!(m[(i, j)].norm() > 0.0, inside);
            }
        }
    }

    #[test]
    fn scattering_is_deterministic_per_seed() {
        let g = grid(24, 4.0, 9);
        let full = seg(-1.0, 1.0);
        let a = random_scattering(&full, &full, &g);
        let b = random_scattering(&full, &full, &g);
        assert_eq!(a, b);
    }

    #[test]
    fn compose_without_cross_coupling_has_zero_interference() {
        let mut geom = reference_geometry();
        geom.psi_t12 = IntervalSet::empty();
        geom.psi_r12 = IntervalSet::empty();
        let ch = compose_channel(&geom, &grid(64, 2.0, 7)).unwrap();
        assert_eq!(ch.h12.norm(), 0.0);
    }

    #[test]
    fn compose_is_deterministic_per_seed() {
        let geom = reference_geometry();
        let a = compose_channel(&geom, &grid(64, 2.0, 8)).unwrap();
        let b = compose_channel(&geom, &grid(64, 2.0, 8)).unwrap();
        assert_eq!(a.h11, b.h11);
        assert_eq!(a.h12, b.h12);
        assert_eq!(a.h22, b.h22);
    }

    #[test]
    fn compose_rejects_degenerate_grids() {
        let geom = reference_geometry();
        assert!(matches!(
            compose_channel(&geom, &grid(8, 4.0, 0)),
            Err(ChannelError::GridTooCoarse(8))
        ));
        assert!(matches!(
            compose_channel(&geom, &grid(64, 0.5, 0)),
            Err(ChannelError::Undersampled(_))
        ));
    }

    #[test]
    fn compressed_uplink_rank_matches_coupling_dimension() {
        let geom = reference_geometry();
        let ch = compose_channel(&geom, &grid(512, 8.0, 1)).unwrap();
        let k11 = ch.rx_space_1.basis().adjoint() * &ch.h11 * ch.tx_space_1.basis();
        let r = rank(&k11, PHYSICAL_RANK_TOL) as i64;
        assert!((r - 2).abs() <= 1, "uplink rank {r}");
        let d_tx = ch.tx_space_1.dim() as i64;
        assert!((d_tx - 2).abs() <= 1, "tx1 dimension {d_tx}");
    }

    #[test]
    fn blockmodel_overlapped_dimensions_and_ranks() {
        let geom = overlapped_geometry(2.0, 1.0, &seg(0.0, 1.0));
        let ch = blockmodel_channel(&geom, 1).unwrap();
        assert_eq!(ch.tx_space_2.dim(), 4);
        assert_eq!(ch.rx_space_1.dim(), 4);
        assert_eq!(ch.tx_space_1.dim(), 2);
        assert_eq!(ch.rx_space_2.dim(), 2);
        assert_eq!(rank(&ch.h12, BLOCK_RANK_TOL), 4);
        assert_eq!(rank(&ch.h11, BLOCK_RANK_TOL), 2);
        assert_eq!(rank(&ch.h22, BLOCK_RANK_TOL), 2);
    }

    #[test]
    fn blockmodel_without_coupling_has_zero_interference_block() {
        let mut geom = reference_geometry();
        geom.psi_t12 = IntervalSet::empty();
        geom.psi_r12 = IntervalSet::empty();
        let ch = blockmodel_channel(&geom, 2).unwrap();
        assert_eq!(ch.h12.norm(), 0.0);
    }

    #[test]
    fn blockmodel_rejects_fractional_dimensions() {
        let err = blockmodel_channel(&reference_geometry(), 0).unwrap_err();
        match err {
            ChannelError::NonIntegerDimension { expr, value } => {
                assert!(expr.contains("psi_R11"), "offending expression {expr}");
                assert!((value - 1.5).abs() < 1e-12);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn blockmodel_dimensions_scale_with_array_length() {
        let ch = blockmodel_channel(&doubled_geometry(), 3).unwrap();
        assert_eq!(ch.tx_space_1.dim(), 4);
        assert_eq!(ch.tx_space_2.dim(), 4);
        assert_eq!(ch.rx_space_1.dim(), 4);
        assert_eq!(ch.rx_space_2.dim(), 4);
        // Interference block: rows hearing T2 are the last r1_int + r1_only
        // coordinates, columns radiating into R1 the last t2_int + t2_only.
        for i in 0..4 {
            for j in 0..4 {
                let inside = i >= 3 && j >= 2;
                assert_eq!(ch.h12[(i, j)].norm() > 0.0, inside, "cell ({i}, {j})");
            }
        }
    }

    #[test]
    fn blockmodel_is_deterministic_per_seed() {
        let a = blockmodel_channel(&doubled_geometry(), 11).unwrap();
        let b = blockmodel_channel(&doubled_geometry(), 11).unwrap();
        assert_eq!(a.h11, b.h11);
        assert_eq!(a.h12, b.h12);
        assert_eq!(a.h22, b.h22);
    }

    #[test]
    fn support_split_is_an_orthogonal_direct_sum() {
        let geom = doubled_geometry();
        let ch = blockmodel_channel(&geom, 4).unwrap();
        let orth_part = support_subspace(
            &ch.tx_space_2,
            &geom.psi_t22.difference(&geom.psi_t12),
            &ch.t2_coords,
            ch.rank_tol,
        );
        let coupled_part =
            support_subspace(&ch.tx_space_2, &geom.psi_t12, &ch.t2_coords, ch.rank_tol);
        assert_eq!(orth_part.dim(), 2);
        assert_eq!(coupled_part.dim(), 2);
        assert_eq!(orth_part.dim() + coupled_part.dim(), ch.tx_space_2.dim());
        let cross = orth_part.basis().adjoint() * coupled_part.basis();
        assert!(cross.norm() < 1e-10);
    }

    #[test]
    fn support_with_full_domain_returns_the_space() {
        let ch = blockmodel_channel(&doubled_geometry(), 5).unwrap();
        let kept = support_subspace(
            &ch.tx_space_2,
            &seg(-1.0, 1.0),
            &ch.t2_coords,
            ch.rank_tol,
        );
        assert!(subspaces_equal(&kept, &ch.tx_space_2));
    }

    #[test]
    fn export_carries_shapes_and_coordinates() {
        let ch = blockmodel_channel(&doubled_geometry(), 6).unwrap();
        let json = serde_json::to_value(ch.export()).unwrap();
        assert_eq!(json["h12"]["rows"], 4);
        assert_eq!(json["h12"]["cols"], 4);
        assert_eq!(json["mode"], "block_model");
        assert_eq!(json["t2_coords"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn wavevector_signal_reports_leakage_outside_domain() {
        let coords = vec![-0.5, 0.0, 0.5];
        let inside = WavevectorSignal::new(
            seg(-0.75, 0.75),
            coords.clone(),
            CVector::from_vec(vec![C64::new(1.0, 0.0); 3]),
        );
        assert_eq!(inside.off_domain_leakage(), 0.0);
        let outside = WavevectorSignal::new(
            seg(-0.25, 0.25),
            coords,
            CVector::from_vec(vec![C64::new(1.0, 0.0); 3]),
        );
        assert!((outside.off_domain_leakage() - 1.0).abs() < 1e-12);
    }
}
