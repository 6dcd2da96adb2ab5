//! Constructive achievability: transmit plans that split the downlink
//! signal into a part invisible to the base-station receiver and an
//! interference part steered into a cancellable subspace, receive plans
//! that project it out, and the reduction to two square effective channels
//! whose ranks are the achieved stream counts.

use crate::channel::{
    blockmodel_channel, compose_channel, support_subspace, ChannelError, ChannelMode,
    ChannelOperators, GridSpec,
};
use crate::linalg::{
    default_rank_tol, hcat, orth_complement, preimage, rank, singular_system, CMatrix, CVector,
    LinalgError, SingularSystem, Subspace, C64,
};
use crate::regions::{corner_points, NetworkGeometry};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Leakage floor for exact block-model runs; constructed cancellation is
/// zero up to rounding.
pub const BLOCK_LEAKAGE_FLOOR_DB: f64 = -200.0;

/// Leakage floor for sampled-kernel runs, where support limitation is
/// only approximate.
pub const PHYSICAL_LEAKAGE_FLOOR_DB: f64 = -30.0;

/// Cap applied when a ratio of energies has a zero numerator or
/// denominator.
const LEAKAGE_CAP_DB: f64 = 400.0;

/// Fixed stream for the "arbitrary orthonormal basis" draws, so identical
/// channels produce identical plans.
const PLAN_DRAW_SEED: u64 = 0x5ce3_9a1f_0b6d_4e72;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    T12LeR12,
    T12GtR12,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corner {
    Prime,
    DoublePrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransmitNode {
    T1,
    T2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReceiveNode {
    R1,
    R2,
}

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("{node} target {target} exceeds operator rank {rank}")]
    TargetExceedsRank { node: &'static str, target: usize, rank: usize },
    #[error("downlink target {target} exceeds the corner value {corner}")]
    TargetExceedsCorner { target: usize, corner: f64 },
    #[error("corner {which} = ({d1}, {d2}) is not integer in the block model")]
    NonIntegerCorner { which: &'static str, d1: f64, d2: f64 },
    #[error("interference construction needs {needed} directions, only {available} available")]
    InterferenceBudget { needed: usize, available: usize },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Transmit basis of one node: `basis` columns are orthonormal vectors in
/// the node's coordinate space, one per symbol. For T2 the count splits
/// into interference-free and steered-interference symbols.
#[derive(Debug, Clone)]
pub struct TransmitPlan {
    pub node: TransmitNode,
    pub basis: CMatrix,
    pub n_symbols: usize,
    pub split: Option<(usize, usize)>,
    pub case_tag: CaseTag,
}

/// Receive projection functionals of one node, orthonormal columns in the
/// node's coordinate space.
#[derive(Debug, Clone)]
pub struct ReceivePlan {
    pub node: ReceiveNode,
    pub functionals: CMatrix,
    pub case_tag: CaseTag,
}

/// The two square effective channels after projection, plus the measured
/// interference-to-signal ratio in the recovered uplink symbols.
#[derive(Debug, Clone)]
pub struct EffectiveChannels {
    pub m1: CMatrix,
    pub m2: CMatrix,
    pub interference_leakage_db: f64,
    pub noise_cov_rank: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AchievedDof {
    pub d1: usize,
    pub d2: usize,
    pub meets_corner: bool,
}

/// Dimensions of the named signal subspaces entering the construction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SubspaceDims {
    pub tx1: usize,
    pub tx2: usize,
    pub rx1: usize,
    pub rx2: usize,
    pub t22_orth: usize,
    pub t12: usize,
    pub r11: usize,
    pub r11_orth: usize,
    pub r12: usize,
    pub r12_only: usize,
}

/// Channel realization selector for corner runs.
#[derive(Debug, Clone)]
pub enum RunMode {
    Block { seed: u64 },
    Physical { grid: GridSpec },
}

impl RunMode {
    pub fn default_leakage_floor_db(&self) -> f64 {
        match self {
            RunMode::Block { .. } => BLOCK_LEAKAGE_FLOOR_DB,
            RunMode::Physical { .. } => PHYSICAL_LEAKAGE_FLOOR_DB,
        }
    }
}

/// One verified corner run: the targeted pair, what was achieved, and the
/// construction's bookkeeping for reporting.
#[derive(Debug, Clone)]
pub struct CornerRun {
    pub which: Corner,
    pub target: (usize, usize),
    pub dof: AchievedDof,
    pub effective: EffectiveChannels,
    pub case_tag: CaseTag,
    pub dims: SubspaceDims,
}

fn seeded_gaussian_matrix(seed: u64, rows: usize, cols: usize) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) / 2f64.sqrt()
    })
}

pub fn seeded_symbols(seed: u64, count: usize) -> CVector {
    let draws = seeded_gaussian_matrix(seed, count, 1);
    CVector::from_fn(count, |i, _| draws[(i, 0)])
}

/// Sequential two-pass Gram-Schmidt. Keeps leading columns fixed in spirit
/// (each column is only corrected against earlier ones), which preserves
/// the structural split of stacked functional blocks.
fn orthonormalize_columns(m: &CMatrix) -> CMatrix {
    let mut q = m.clone();
    let rows = q.nrows();
    for j in 0..q.ncols() {
        for _ in 0..2 {
            for k in 0..j {
                let mut coef = C64::new(0.0, 0.0);
                for i in 0..rows {
                    coef += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..rows {
                    let delta = q[(i, k)] * coef;
                    q[(i, j)] -= delta;
                }
            }
        }
        let norm = q.column(j).norm();
        assert!(norm > 1e-10, "dependent column fed to orthonormalization");
        for i in 0..rows {
            q[(i, j)] /= C64::new(norm, 0.0);
        }
    }
    q
}

/// Deterministic "arbitrary orthonormal vectors" inside a subspace: a
/// seeded random mix of the basis, re-orthonormalized.
fn seeded_basis(space: &Subspace, count: usize, tag: u64) -> CMatrix {
    assert!(count <= space.dim(), "requested more vectors than the subspace holds");
    if count == 0 {
        return CMatrix::zeros(space.ambient_dim(), 0);
    }
    let mix = seeded_gaussian_matrix(PLAN_DRAW_SEED ^ tag, space.dim(), count);
    orthonormalize_columns(&(space.basis() * mix))
}

/// All subspaces, compressions, and case data one corner run needs.
struct Planner {
    case: CaseTag,
    d1_corner: usize,
    d2_corner: usize,
    t_orth: Subspace,
    t_12: Subspace,
    r_orth: Subspace,
    r_12: Subspace,
    r_12only_in_r12: Subspace,
    r_int_in_r12: Subspace,
    sys11: SingularSystem,
    sys12: SingularSystem,
    b_t12: CMatrix,
    b_r12: CMatrix,
    dims: SubspaceDims,
}

impl Planner {
    fn new(ch: &ChannelOperators, geom: &NetworkGeometry) -> Result<Self, SchemeError> {
        let tol = ch.rank_tol;
        let t_orth = support_subspace(
            &ch.tx_space_2,
            &geom.psi_t22.difference(&geom.psi_t12),
            &ch.t2_coords,
            tol,
        );
        let t_12 = support_subspace(&ch.tx_space_2, &geom.psi_t12, &ch.t2_coords, tol);
        let r_11 = support_subspace(&ch.rx_space_1, &geom.psi_r11, &ch.r1_coords, tol);
        let r_orth = support_subspace(
            &ch.rx_space_1,
            &geom.psi_r11.difference(&geom.psi_r12),
            &ch.r1_coords,
            tol,
        );
        let r_12 = support_subspace(&ch.rx_space_1, &geom.psi_r12, &ch.r1_coords, tol);
        let r_12only = support_subspace(
            &ch.rx_space_1,
            &geom.psi_r12.difference(&geom.psi_r11),
            &ch.r1_coords,
            tol,
        );
        let r_int = support_subspace(
            &ch.rx_space_1,
            &geom.psi_r11.intersect(&geom.psi_r12),
            &ch.r1_coords,
            tol,
        );
        let b_t12 = t_12.basis().clone();
        let b_r12 = r_12.basis().clone();
        // Codomain coordinates of the two distinguished receive parts.
        let r_12only_in_r12 = Subspace::from_span(&(b_r12.adjoint() * r_12only.basis()));
        let r_int_in_r12 = Subspace::from_span(&(b_r12.adjoint() * r_int.basis()));
        let sys11 = singular_system(
            &(ch.rx_space_1.basis().adjoint() * &ch.h11 * ch.tx_space_1.basis()),
            tol,
        );
        let sys12 = singular_system(&(b_r12.adjoint() * &ch.h12 * &b_t12), tol);
        let case = if t_12.dim() == 0 {
            CaseTag::NotApplicable
        } else if t_12.dim() <= r_12.dim() {
            CaseTag::T12LeR12
        } else {
            CaseTag::T12GtR12
        };
        let corners = corner_points(geom);
        let (d1f, d2f) = corners.p_prime;
        let (d1_corner, d2_corner) = match ch.mode {
            ChannelMode::BlockModel => {
                if (d1f - d1f.round()).abs() > 1e-9 || (d2f - d2f.round()).abs() > 1e-9 {
                    return Err(SchemeError::NonIntegerCorner {
                        which: "prime",
                        d1: d1f,
                        d2: d2f,
                    });
                }
                (d1f.round() as usize, d2f.round() as usize)
            }
            ChannelMode::Physical => (d1f.round() as usize, d2f.round() as usize),
        };
        let dims = SubspaceDims {
            tx1: ch.tx_space_1.dim(),
            tx2: ch.tx_space_2.dim(),
            rx1: ch.rx_space_1.dim(),
            rx2: ch.rx_space_2.dim(),
            t22_orth: t_orth.dim(),
            t12: t_12.dim(),
            r11: r_11.dim(),
            r11_orth: r_orth.dim(),
            r12: r_12.dim(),
            r12_only: r_12only.dim(),
        };
        Ok(Self {
            case,
            d1_corner,
            d2_corner,
            t_orth,
            t_12,
            r_orth,
            r_12,
            r_12only_in_r12,
            r_int_in_r12,
            sys11,
            sys12,
            b_t12,
            b_r12,
            dims,
        })
    }

    /// Interference-side receive functionals beyond the ones supported off
    /// the coupled interval: how many must be taken from coupled territory.
    fn coupled_functional_count(&self) -> usize {
        self.d1_corner - self.d1_corner.min(self.r_orth.dim())
    }

    /// Interference symbol count at the corner target.
    fn corner_interference_count(&self) -> usize {
        self.d2_corner - self.d2_corner.min(self.t_orth.dim())
    }

    /// Coupled-coordinate subspace orthogonal to every leading interference
    /// image, i.e. where the uplink may listen without hearing the steered
    /// downlink symbols.
    fn uncontaminated_coupled_space(&self) -> Subspace {
        let d2_int = self.corner_interference_count().min(self.sys12.left.ncols());
        if d2_int == 0 {
            return Subspace::full(self.r_12.dim());
        }
        let leading = self.sys12.left.columns(0, d2_int).into_owned();
        orth_complement(&Subspace::from_span(&leading))
    }

    fn build_t2(&self, ch: &ChannelOperators, d2_target: usize) -> Result<TransmitPlan, SchemeError> {
        if ch.mode == ChannelMode::BlockModel && d2_target > self.d2_corner {
            return Err(SchemeError::TargetExceedsCorner {
                target: d2_target,
                corner: self.d2_corner as f64,
            });
        }
        let d2_orth = d2_target.min(self.t_orth.dim());
        let d2_int = d2_target - d2_orth;
        let orth_basis = seeded_basis(&self.t_orth, d2_orth, 0x01);
        let int_basis = match self.case {
            CaseTag::NotApplicable => {
                if d2_int > 0 {
                    return Err(SchemeError::InterferenceBudget { needed: d2_int, available: 0 });
                }
                CMatrix::zeros(self.t_orth.ambient_dim(), 0)
            }
            CaseTag::T12LeR12 => {
                // Leading coupled directions; the receive side dodges their
                // images by listening in their orthogonal complement.
                if d2_int > self.t_12.dim() {
                    return Err(SchemeError::InterferenceBudget {
                        needed: d2_int,
                        available: self.t_12.dim(),
                    });
                }
                &self.b_t12 * self.sys12.right.columns(0, d2_int).into_owned()
            }
            CaseTag::T12GtR12 => {
                // Steer interference into whatever part of the coupled
                // receive interval the uplink functionals leave alone. The
                // branch split mirrors build_r1 exactly: leading-direction
                // listening forbids the whole signal interval, partial
                // listening forbids only the seeded coupled directions.
                let target_image = if self.d1_corner == self.dims.r11 {
                    self.r_12only_in_r12.clone()
                } else {
                    let r = self.coupled_functional_count();
                    if r == 0 {
                        Subspace::full(self.r_12.dim())
                    } else {
                        if r > self.r_int_in_r12.dim() {
                            return Err(SchemeError::InterferenceBudget {
                                needed: r,
                                available: self.r_int_in_r12.dim(),
                            });
                        }
                        let w = seeded_basis(&self.r_int_in_r12, r, 0x02);
                        orth_complement(&Subspace::from_span(&w))
                    }
                };
                let pre = preimage(
                    &(self.b_r12.adjoint() * &ch.h12 * &self.b_t12),
                    &target_image,
                )?;
                if d2_int > pre.dim() {
                    return Err(SchemeError::InterferenceBudget {
                        needed: d2_int,
                        available: pre.dim(),
                    });
                }
                let picked = seeded_basis(&pre, d2_int, 0x03);
                &self.b_t12 * picked
            }
        };
        let basis = if d2_int == 0 {
            orth_basis
        } else if d2_orth == 0 {
            int_basis
        } else {
            orthonormalize_columns(&hcat(&[&orth_basis, &int_basis]))
        };
        Ok(TransmitPlan {
            node: TransmitNode::T2,
            basis,
            n_symbols: d2_target,
            split: Some((d2_orth, d2_int)),
            case_tag: self.case,
        })
    }

    fn build_r1(&self, ch: &ChannelOperators) -> Result<ReceivePlan, SchemeError> {
        let d1 = self.d1_corner;
        if d1 > self.sys11.left.ncols() {
            return Err(SchemeError::TargetExceedsRank {
                node: "R1",
                target: d1,
                rank: self.sys11.left.ncols(),
            });
        }
        let leading = |count: usize| -> CMatrix {
            ch.rx_space_1.basis() * self.sys11.left.columns(0, count)
        };
        let budget = |needed: usize, available: usize| {
            SchemeError::InterferenceBudget { needed, available }
        };
        let functionals = match self.case {
            CaseTag::NotApplicable => leading(d1),
            CaseTag::T12GtR12 => {
                if d1 == self.dims.r11 {
                    // Leading uplink directions span the whole signal
                    // interval; interference is steered outside it.
                    leading(d1)
                } else {
                    let n_orth = d1.min(self.r_orth.dim());
                    let r = d1 - n_orth;
                    let orth_part = self.r_orth.basis().columns(0, n_orth).into_owned();
                    if r == 0 {
                        orth_part
                    } else {
                        if r > self.r_int_in_r12.dim() {
                            return Err(budget(r, self.r_int_in_r12.dim()));
                        }
                        let w = seeded_basis(&self.r_int_in_r12, r, 0x02);
                        let coupled = &self.b_r12 * w;
                        orthonormalize_columns(&hcat(&[&orth_part, &coupled]))
                    }
                }
            }
            CaseTag::T12LeR12 => {
                let n_orth = d1.min(self.r_orth.dim());
                let r = d1 - n_orth;
                let orth_part = self.r_orth.basis().columns(0, n_orth).into_owned();
                if r == 0 {
                    orth_part
                } else {
                    // Generic directions orthogonal to the interference
                    // images. A deterministic completion basis would do for
                    // cancellation but can be blind to the signal operator;
                    // the seeded mix is generic with respect to it.
                    let admissible = self.uncontaminated_coupled_space();
                    if r > admissible.dim() {
                        return Err(budget(r, admissible.dim()));
                    }
                    let picked = seeded_basis(&admissible, r, 0x04);
                    let coupled = &self.b_r12 * picked;
                    orthonormalize_columns(&hcat(&[&orth_part, &coupled]))
                }
            }
        };
        if functionals.ncols() != d1 {
            return Err(SchemeError::InterferenceBudget {
                needed: d1,
                available: functionals.ncols(),
            });
        }
        Ok(ReceivePlan { node: ReceiveNode::R1, functionals, case_tag: self.case })
    }
}

/// Uplink transmit basis: leading right singular vectors of the uplink
/// compression, mapped back to the transmitter's coordinates.
pub fn build_t1_plan(ch: &ChannelOperators, d1_target: usize) -> Result<TransmitPlan, SchemeError> {
    let sys = singular_system(
        &(ch.rx_space_1.basis().adjoint() * &ch.h11 * ch.tx_space_1.basis()),
        ch.rank_tol,
    );
    if d1_target > sys.rank {
        return Err(SchemeError::TargetExceedsRank {
            node: "T1",
            target: d1_target,
            rank: sys.rank,
        });
    }
    let basis = ch.tx_space_1.basis() * sys.right.columns(0, d1_target);
    Ok(TransmitPlan {
        node: TransmitNode::T1,
        basis,
        n_symbols: d1_target,
        split: None,
        case_tag: CaseTag::NotApplicable,
    })
}

/// Downlink transmit basis: interference-free symbols on the uncoupled
/// interval first, remaining symbols steered so their interference images
/// avoid everything the uplink receiver listens to.
pub fn build_t2_plan(
    ch: &ChannelOperators,
    geom: &NetworkGeometry,
    d2_target: usize,
) -> Result<TransmitPlan, SchemeError> {
    Planner::new(ch, geom)?.build_t2(ch, d2_target)
}

/// Uplink receive functionals sized to the corner's uplink count, chosen
/// per case so every steered interference image lands orthogonal to them.
pub fn build_r1_plan(
    ch: &ChannelOperators,
    geom: &NetworkGeometry,
) -> Result<ReceivePlan, SchemeError> {
    Planner::new(ch, geom)?.build_r1(ch)
}

/// Downlink receive functionals: leading left singular vectors of the
/// downlink compression.
pub fn build_r2_plan(ch: &ChannelOperators, d2_target: usize) -> Result<ReceivePlan, SchemeError> {
    let sys = singular_system(
        &(ch.rx_space_2.basis().adjoint() * &ch.h22 * ch.tx_space_2.basis()),
        ch.rank_tol,
    );
    if d2_target > sys.rank {
        return Err(SchemeError::TargetExceedsRank {
            node: "R2",
            target: d2_target,
            rank: sys.rank,
        });
    }
    let functionals = ch.rx_space_2.basis() * sys.left.columns(0, d2_target);
    Ok(ReceivePlan {
        node: ReceiveNode::R2,
        functionals,
        case_tag: CaseTag::NotApplicable,
    })
}

/// Runs one coherent transmission: forms the node signals from the symbol
/// vectors, pushes them through the scattering operators plus scaled white
/// noise, projects onto the receive functionals, and reports the effective
/// channels with the interference-to-signal ratio measured noiselessly.
pub fn run_transmission(
    ch: &ChannelOperators,
    t1: &TransmitPlan,
    t2: &TransmitPlan,
    r1: &ReceivePlan,
    r2: &ReceivePlan,
    s1: &CVector,
    s2: &CVector,
    noise_scale: f64,
) -> EffectiveChannels {
    assert_eq!(s1.len(), t1.n_symbols);
    assert_eq!(s2.len(), t2.n_symbols);
    let f = &r1.functionals;
    let g = &r2.functionals;
    let m1 = f.adjoint() * &ch.h11 * &t1.basis;
    let m2 = g.adjoint() * &ch.h22 * &t2.basis;
    let x2 = &t2.basis * s2;
    let signal = &m1 * s1;
    let mut disturbance = f.adjoint() * (&ch.h12 * &x2);
    if noise_scale != 0.0 {
        // Demonstration path only; DoF measurements run noiseless.
        let z1 = seeded_symbols(PLAN_DRAW_SEED ^ 0x7a, f.nrows());
        disturbance += f.adjoint() * z1 * C64::new(noise_scale, 0.0);
    }
    let sig_energy = signal.norm_squared();
    let int_energy = disturbance.norm_squared();
    let interference_leakage_db = if int_energy == 0.0 {
        -LEAKAGE_CAP_DB
    } else if sig_energy == 0.0 {
        LEAKAGE_CAP_DB
    } else {
        10.0 * (int_energy / sig_energy).log10()
    };
    EffectiveChannels {
        m1,
        m2,
        interference_leakage_db,
        noise_cov_rank: r1.functionals.ncols() + r2.functionals.ncols(),
    }
}

/// Stream counts actually achieved: ranks of the effective channels, with
/// uplink streams disqualified when residual interference exceeds the
/// floor. `target` is the corner pair this run aimed at.
pub fn measure_dof(
    eff: &EffectiveChannels,
    leakage_floor_db: f64,
    target: (usize, usize),
) -> AchievedDof {
    let clean = eff.interference_leakage_db <= leakage_floor_db;
    let d1 = if clean {
        rank(&eff.m1, default_rank_tol(eff.m1.nrows(), eff.m1.ncols()))
    } else {
        0
    };
    let d2 = rank(&eff.m2, default_rank_tol(eff.m2.nrows(), eff.m2.ncols()));
    AchievedDof { d1, d2, meets_corner: d1 >= target.0 && d2 >= target.1 }
}

fn run_prime(
    geom: &NetworkGeometry,
    mode: &RunMode,
    leakage_floor_db: f64,
) -> Result<CornerRun, SchemeError> {
    let (ch, seed) = match mode {
        RunMode::Block { seed } => (blockmodel_channel(geom, *seed)?, *seed),
        RunMode::Physical { grid } => (compose_channel(geom, grid)?, grid.seed),
    };
    let planner = Planner::new(&ch, geom)?;
    let (d1t, d2t) = (planner.d1_corner, planner.d2_corner);
    let t1 = build_t1_plan(&ch, d1t)?;
    let t2 = planner.build_t2(&ch, d2t)?;
    let r1 = planner.build_r1(&ch)?;
    let r2 = build_r2_plan(&ch, d2t)?;
    let s1 = seeded_symbols(seed ^ 0x51, d1t);
    let s2 = seeded_symbols(seed ^ 0x52, d2t);
    let effective = run_transmission(&ch, &t1, &t2, &r1, &r2, &s1, &s2, 0.0);
    let dof = measure_dof(&effective, leakage_floor_db, (d1t, d2t));
    Ok(CornerRun {
        which: Corner::Prime,
        target: (d1t, d2t),
        dof,
        effective,
        case_tag: planner.case,
        dims: planner.dims,
    })
}

/// Builds the channel, constructs all four plans at the requested corner,
/// runs the transmission, and measures the result. The second corner runs
/// the same construction on the role-reversed network and swaps the pair
/// back.
pub fn achieve_corner_with_floor(
    geom: &NetworkGeometry,
    which: Corner,
    mode: &RunMode,
    leakage_floor_db: f64,
) -> Result<CornerRun, SchemeError> {
    match which {
        Corner::Prime => run_prime(geom, mode, leakage_floor_db),
        Corner::DoublePrime => {
            let reversed = geom.reversed();
            let run = run_prime(&reversed, mode, leakage_floor_db)?;
            Ok(CornerRun {
                which: Corner::DoublePrime,
                target: (run.target.1, run.target.0),
                dof: AchievedDof {
                    d1: run.dof.d2,
                    d2: run.dof.d1,
                    meets_corner: run.dof.meets_corner,
                },
                effective: EffectiveChannels {
                    m1: run.effective.m2,
                    m2: run.effective.m1,
                    interference_leakage_db: run.effective.interference_leakage_db,
                    noise_cov_rank: run.effective.noise_cov_rank,
                },
                case_tag: run.case_tag,
                dims: run.dims,
            })
        }
    }
}

pub fn achieve_corner(
    geom: &NetworkGeometry,
    which: Corner,
    mode: &RunMode,
) -> Result<CornerRun, SchemeError> {
    achieve_corner_with_floor(geom, which, mode, mode.default_leakage_floor_db())
}
