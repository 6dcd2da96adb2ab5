//! Closed-form spatial degrees-of-freedom calculus for the three-node
//! full-duplex topology.
//!
//! The network has an uplink transmitter T1 and downlink receiver R2 (the
//! users) plus a base station that transmits (T2) and receives (R1) at the
//! same time. Self-interference couples T2 into R1; the users are out of
//! range of each other, so there is no T1 -> R2 path. Every bound here is a
//! function of array half-lengths L and measures of scattering interval
//! combinations, with subspace dimensions of the form 2 L |psi|.

use crate::intervals::IntervalSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Comparison tolerance for the closed-form identities.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RegionError {
    #[error("time sharing parameter {0} is outside [0, 1]")]
    InvalidAlpha(f64),
    #[error("half-length {name} = {value} must be finite and nonnegative")]
    InvalidHalfLength { name: &'static str, value: f64 },
    #[error("overlap measure {overlap} exceeds min(fwd, back) = {limit}")]
    OverlapTooLarge { overlap: f64, limit: f64 },
    #[error(
        "genie expansion undefined: exactly one of |psi_T22 u psi_T12| = {t_union}, \
         |psi_R11 u psi_R12| = {r_union} is zero"
    )]
    DegenerateGenie { t_union: f64, r_union: f64 },
    #[error("scenario parameter {name} = {value} must be finite and nonnegative")]
    InvalidScenarioParam { name: &'static str, value: f64 },
}

/// Array half-lengths and the six scattering intervals of the Z-topology.
///
/// `psi_t12` / `psi_r12` describe the self-interference path from T2 into R1.
/// The absent T1 -> R2 path is implicitly empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkGeometry {
    pub l_t1: f64,
    pub l_r1: f64,
    pub l_t2: f64,
    pub l_r2: f64,
    pub psi_t11: IntervalSet,
    pub psi_r11: IntervalSet,
    pub psi_t22: IntervalSet,
    pub psi_r22: IntervalSet,
    pub psi_t12: IntervalSet,
    pub psi_r12: IntervalSet,
}

impl NetworkGeometry {
    pub fn validate(&self) -> Result<(), RegionError> {
        for (name, value) in [
            ("l_t1", self.l_t1),
            ("l_r1", self.l_r1),
            ("l_t2", self.l_t2),
            ("l_r2", self.l_r2),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(RegionError::InvalidHalfLength { name, value });
            }
        }
        Ok(())
    }

    // Subspace dimensions 2 L |psi| for the signal paths.
    pub fn dim_t11(&self) -> f64 {
        2.0 * self.l_t1 * self.psi_t11.measure()
    }
    pub fn dim_r11(&self) -> f64 {
        2.0 * self.l_r1 * self.psi_r11.measure()
    }
    pub fn dim_t22(&self) -> f64 {
        2.0 * self.l_t2 * self.psi_t22.measure()
    }
    pub fn dim_r22(&self) -> f64 {
        2.0 * self.l_r2 * self.psi_r22.measure()
    }
    pub fn dim_t12(&self) -> f64 {
        2.0 * self.l_t2 * self.psi_t12.measure()
    }
    pub fn dim_r12(&self) -> f64 {
        2.0 * self.l_r1 * self.psi_r12.measure()
    }

    // Dimensions of the split of the T2 side against the interference
    // interval, and of the R1 side against the interference interval.
    pub fn dim_t22_orth(&self) -> f64 {
        2.0 * self.l_t2 * self.psi_t22.difference(&self.psi_t12).measure()
    }
    pub fn dim_t22_int(&self) -> f64 {
        2.0 * self.l_t2 * self.psi_t22.intersect(&self.psi_t12).measure()
    }
    pub fn dim_t12_only(&self) -> f64 {
        2.0 * self.l_t2 * self.psi_t12.difference(&self.psi_t22).measure()
    }
    pub fn dim_r11_orth(&self) -> f64 {
        2.0 * self.l_r1 * self.psi_r11.difference(&self.psi_r12).measure()
    }
    pub fn dim_r11_int(&self) -> f64 {
        2.0 * self.l_r1 * self.psi_r11.intersect(&self.psi_r12).measure()
    }
    pub fn dim_r12_only(&self) -> f64 {
        2.0 * self.l_r1 * self.psi_r12.difference(&self.psi_r11).measure()
    }

    /// Link-reversed geometry: every receiver becomes a transmitter and the
    /// flows are relabeled so that self-interference again runs from the
    /// second transmitter into the first receiver. Flow 1 of the reversed
    /// network is the old flow 2 run backwards, and vice versa. Corner
    /// points swap accordingly.
    pub fn reversed(&self) -> NetworkGeometry {
        NetworkGeometry {
            l_t1: self.l_r2,
            l_r1: self.l_t2,
            l_t2: self.l_r1,
            l_r2: self.l_t1,
            psi_t11: self.psi_r22.clone(),
            psi_r11: self.psi_t22.clone(),
            psi_t22: self.psi_r11.clone(),
            psi_r22: self.psi_t11.clone(),
            psi_t12: self.psi_r12.clone(),
            psi_r12: self.psi_t12.clone(),
        }
    }
}

/// Pentagon {0 <= d1 <= d1_max, 0 <= d2 <= d2_max, d1 + d2 <= d_sum_max}
/// with its nontrivial extreme points listed counterclockwise from the
/// d1 axis. The origin and axis degeneracies collapse duplicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DofRegion {
    pub d1_max: f64,
    pub d2_max: f64,
    pub d_sum_max: f64,
    pub vertices: Vec<(f64, f64)>,
}

impl DofRegion {
    pub fn from_bounds(d1_max: f64, d2_max: f64, d_sum_max: f64) -> Self {
        let x_max = d1_max.min(d_sum_max);
        let y_max = d2_max.min(d_sum_max);
        let candidates = [
            (x_max, 0.0),
            (x_max, d2_max.min(d_sum_max - x_max)),
            (d1_max.min(d_sum_max - y_max), y_max),
            (0.0, y_max),
        ];
        let mut vertices: Vec<(f64, f64)> = Vec::with_capacity(4);
        for (x, y) in candidates {
            match vertices.last() {
                Some(&(px, py)) if (px - x).abs() <= TOL && (py - y).abs() <= TOL => {}
                _ => vertices.push((x, y)),
            }
        }
        DofRegion { d1_max, d2_max, d_sum_max, vertices }
    }

    /// Effective sum bound after clipping by the per-flow maxima. Equals
    /// d_sum_max whenever the sum constraint is active.
    pub fn clipped_sum_bound(&self) -> f64 {
        self.d_sum_max.min(self.d1_max + self.d2_max)
    }

    /// True when the sum constraint never binds, i.e. the region is the full
    /// rectangle [0, d1_max] x [0, d2_max].
    pub fn is_rectangular(&self) -> bool {
        self.d_sum_max >= self.d1_max + self.d2_max - TOL
    }
}

/// Membership in the closed region with tolerance [`TOL`].
pub fn region_contains(r: &DofRegion, d: (f64, f64)) -> bool {
    let (d1, d2) = d;
    d1 >= -TOL
        && d2 >= -TOL
        && d1 <= r.d1_max + TOL
        && d2 <= r.d2_max + TOL
        && d1 + d2 <= r.d_sum_max + TOL
}

/// Full-duplex region: per-flow bounds and the sum bound built from the
/// interference split of the base-station intervals.
pub fn fd_region(g: &NetworkGeometry) -> DofRegion {
    let d1_max = g.dim_t11().min(g.dim_r11());
    let d2_max = g.dim_t22().min(g.dim_r22());
    let d_sum_max =
        g.dim_t22_orth() + g.dim_r11_orth() + g.dim_t12().max(g.dim_r12());
    DofRegion::from_bounds(d1_max, d2_max, d_sum_max)
}

/// Time sharing between the two point-to-point maxima.
pub fn hd_region(g: &NetworkGeometry, alpha: f64) -> Result<(f64, f64), RegionError> {
    if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
        return Err(RegionError::InvalidAlpha(alpha));
    }
    let r = fd_region(g);
    Ok((alpha * r.d1_max, (1.0 - alpha) * r.d2_max))
}

/// The two nontrivial extreme points of the region, with the intermediate
/// quantities of the underlying interference-management budget exposed for
/// inspection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerPoints {
    pub p_prime: (f64, f64),
    pub p_double_prime: (f64, f64),
    pub d_t2: f64,
    pub delta_t2: f64,
    pub d_r1: f64,
    pub delta_r1: f64,
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Corner points achievable by the constructive scheme. The prime point
/// maximizes the uplink first; the double-prime point maximizes the
/// downlink. Each has two cases depending on which side of the prioritized
/// link is thinner.
pub fn corner_points(g: &NetworkGeometry) -> CornerPoints {
    let t11 = g.dim_t11();
    let r11 = g.dim_r11();
    let t22 = g.dim_t22();
    let r22 = g.dim_r22();
    let t12 = g.dim_t12();
    let r12 = g.dim_r12();
    let t22_orth = g.dim_t22_orth();
    let t22_int = g.dim_t22_int();
    let t12_only = g.dim_t12_only();
    let r11_orth = g.dim_r11_orth();
    let r11_int = g.dim_r11_int();
    let r12_only = g.dim_r12_only();

    // Downlink budget when the uplink receive side R11 must be kept clean.
    // d_t2 applies when all of R11 is needed; delta_t2 applies when the
    // uplink is transmit-side limited and only part of R11 carries data.
    let d_t2 = t22_orth + t22_int.min(pos(t12 - r12) + r12_only);
    let delta_t2 = t22_orth + t22_int.min(t12 - (t11 - (r11_orth + pos(r12 - t12))));

    // Mirror image: uplink budget when the downlink is prioritized.
    let d_r1 = r11_orth + r11_int.min(pos(r12 - t12) + t12_only);
    let delta_r1 = r11_orth + r11_int.min(r12 - (r22 - (t22_orth + pos(t12 - r12))));

    let d1_prime = t11.min(r11);
    let d2_prime = if t11 >= r11 { d_t2.min(r22) } else { delta_t2.min(r22) };

    let d2_double = t22.min(r22);
    let d1_double = if r22 >= t22 { t11.min(d_r1) } else { t11.min(delta_r1) };

    CornerPoints {
        p_prime: (d1_prime, d2_prime),
        p_double_prime: (d1_double, d2_double),
        d_t2,
        delta_t2,
        d_r1,
        delta_r1,
    }
}

/// Converse bookkeeping: enlarge the base-station intervals to the unions
/// and absorb the orthogonal leftovers into longer arrays, after which the
/// sum bound is a single point-to-point dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenieExpansion {
    pub psi_t2_prime: IntervalSet,
    pub psi_r1_prime: IntervalSet,
    pub l_r1_prime: f64,
    pub l_t2_prime: f64,
    /// Half-length equalizing both expanded dimensions; matches l_r1_prime
    /// when the receive side already dominates.
    pub l_r1_double_prime: f64,
    pub dim_tx2_prime: f64,
    pub dim_rx1_prime: f64,
}

impl GenieExpansion {
    pub fn sum_bound(&self) -> f64 {
        self.dim_tx2_prime.max(self.dim_rx1_prime)
    }
}

/// Evaluates the expansion chain. Errors when exactly one union is empty
/// (the expansion ratio is then undefined); returns the all-zero expansion
/// when both unions are empty.
pub fn genie_sum_bound(g: &NetworkGeometry) -> Result<GenieExpansion, RegionError> {
    let psi_t2_prime = g.psi_t22.union(&g.psi_t12);
    let psi_r1_prime = g.psi_r11.union(&g.psi_r12);
    let t_union = psi_t2_prime.measure();
    let r_union = psi_r1_prime.measure();

    if t_union <= TOL && r_union <= TOL {
        return Ok(GenieExpansion {
            psi_t2_prime,
            psi_r1_prime,
            l_r1_prime: g.l_r1,
            l_t2_prime: g.l_t2,
            l_r1_double_prime: g.l_r1,
            dim_tx2_prime: 0.0,
            dim_rx1_prime: 0.0,
        });
    }
    if t_union <= TOL || r_union <= TOL {
        return Err(RegionError::DegenerateGenie { t_union, r_union });
    }

    let t22_orth_len = g.psi_t22.difference(&g.psi_t12).measure();
    let r11_orth_len = g.psi_r11.difference(&g.psi_r12).measure();
    let l_r1_prime = g.l_r1 + g.l_t2 * t22_orth_len / r_union;
    let l_t2_prime = g.l_t2 + g.l_r1 * r11_orth_len / t_union;
    let dim_tx2_prime = 2.0 * l_t2_prime * t_union;
    let dim_rx1_prime = 2.0 * l_r1_prime * r_union;
    let l_r1_double_prime = l_r1_prime.max(l_t2_prime * t_union / r_union);

    let expansion = GenieExpansion {
        psi_t2_prime,
        psi_r1_prime,
        l_r1_prime,
        l_t2_prime,
        l_r1_double_prime,
        dim_tx2_prime,
        dim_rx1_prime,
    };
    debug_assert!(
        (expansion.sum_bound() - fd_region(g).d_sum_max).abs() <= TOL,
        "expansion chain disagrees with the direct sum bound"
    );
    Ok(expansion)
}

/// Fully overlapped scenario: one scattering interval of measure `psi_mag`
/// is shared by every path; users have half-length `l_usr`, the base
/// station `l_bs` on both of its arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlappedSummary {
    pub fd: DofRegion,
    pub hd_sum: f64,
    pub fd_beats_hd: bool,
    pub rectangular: bool,
}

pub fn overlapped_scenario(
    l_bs: f64,
    l_usr: f64,
    psi_mag: f64,
) -> Result<OverlappedSummary, RegionError> {
    for (name, value) in [("l_bs", l_bs), ("l_usr", l_usr), ("psi", psi_mag)] {
        if !value.is_finite() || value < 0.0 {
            return Err(RegionError::InvalidScenarioParam { name, value });
        }
    }
    let per_flow = psi_mag * 2.0 * l_bs.min(l_usr);
    let fd = DofRegion::from_bounds(per_flow, per_flow, 2.0 * l_bs * psi_mag);
    Ok(OverlappedSummary {
        fd,
        hd_sum: per_flow,
        fd_beats_hd: l_bs > l_usr,
        rectangular: l_bs >= 2.0 * l_usr,
    })
}

/// Explicit geometry realizing the fully overlapped scenario.
pub fn overlapped_geometry(l_bs: f64, l_usr: f64, psi: &IntervalSet) -> NetworkGeometry {
    NetworkGeometry {
        l_t1: l_usr,
        l_r1: l_bs,
        l_t2: l_bs,
        l_r2: l_usr,
        psi_t11: psi.clone(),
        psi_r11: psi.clone(),
        psi_t22: psi.clone(),
        psi_r22: psi.clone(),
        psi_t12: psi.clone(),
        psi_r12: psi.clone(),
    }
}

/// Symmetric spread scenario: all four arrays share one half-length; both
/// forward links see a common interval of measure `fwd_mag`, the
/// self-interference path one of measure `back_mag`, overlapping the
/// forward interval in measure `overlap_mag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricSummary {
    pub fd: DofRegion,
    pub hd_sum: f64,
    pub rectangular: bool,
    pub hd_equals_fd: bool,
}

pub fn symmetric_scenario(
    l: f64,
    fwd_mag: f64,
    back_mag: f64,
    overlap_mag: f64,
) -> Result<SymmetricSummary, RegionError> {
    for (name, value) in [
        ("l", l),
        ("fwd", fwd_mag),
        ("back", back_mag),
        ("overlap", overlap_mag),
    ] {
        if !value.is_finite() || value < 0.0 {
            return Err(RegionError::InvalidScenarioParam { name, value });
        }
    }
    let limit = fwd_mag.min(back_mag);
    if overlap_mag > limit + TOL {
        return Err(RegionError::OverlapTooLarge { overlap: overlap_mag, limit });
    }
    let per_flow = 2.0 * l * fwd_mag;
    let d_sum = 2.0 * l * (2.0 * (fwd_mag - overlap_mag) + back_mag);
    let fd = DofRegion::from_bounds(per_flow, per_flow, d_sum);
    Ok(SymmetricSummary {
        fd,
        hd_sum: per_flow,
        rectangular: back_mag - overlap_mag >= overlap_mag,
        hd_equals_fd: l == 0.0 || (fwd_mag == back_mag && back_mag == overlap_mag),
    })
}

/// Explicit geometry realizing the symmetric spread scenario from actual
/// forward and backward interval sets.
pub fn symmetric_geometry(l: f64, fwd: &IntervalSet, back: &IntervalSet) -> NetworkGeometry {
    NetworkGeometry {
        l_t1: l,
        l_r1: l,
        l_t2: l,
        l_r2: l,
        psi_t11: fwd.clone(),
        psi_r11: fwd.clone(),
        psi_t22: fwd.clone(),
        psi_r22: fwd.clone(),
        psi_t12: back.clone(),
        psi_r12: back.clone(),
    }
}

/// Sum degrees of freedom of the two-user interference channel with antenna
/// counts (M1, N1) and (M2, N2), in its symmetric min form.
pub fn mimo_ic_dof(m1: usize, n1: usize, m2: usize, n2: usize) -> usize {
    (m1 + m2)
        .min(n1 + n2)
        .min(m1.max(n2))
        .min(m2.max(n1))
}
