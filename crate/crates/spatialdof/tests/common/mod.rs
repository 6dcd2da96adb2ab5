//! Shared geometry generators for the integration suites.

#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use spatialdof::channel::{array_response, Direction, GridSpec};
use spatialdof::intervals::IntervalSet;
use spatialdof::linalg::{singular_system, C64, HALF_POWER_RANK_TOL};
use spatialdof::regions::NetworkGeometry;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform wavevector samples on [-1, 1], matching the internal grid.
pub fn wavevector_points(n: usize) -> Vec<f64> {
    let step = 2.0 / (n - 1) as f64;
    (0..n).map(|i| -1.0 + step * i as f64).collect()
}

/// Half-power rank of the transmit kernel with its wavevector rows
/// restricted to `psi`.
pub fn restricted_rank(l: f64, psi: &IntervalSet, n: usize, ovs: f64) -> usize {
    let grid = GridSpec { n_wavevector: n, oversampling: ovs, seed: 0 };
    let mut kernel = array_response(l, &grid, Direction::Transmit);
    for (i, &t) in wavevector_points(n).iter().enumerate() {
        if !psi.contains(t) {
            for j in 0..kernel.ncols() {
                kernel[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    singular_system(&kernel, HALF_POWER_RANK_TOL).rank
}

/// Random half-length: a multiple of 1/4 in (0, 4].
fn random_half_length(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(1..=16) as f64 * 0.25
}

/// Random nonempty interval with endpoints on the 1/16 grid inside [-1, 1].
fn random_dyadic_interval(rng: &mut ChaCha8Rng) -> IntervalSet {
    loop {
        let a = rng.gen_range(-16..=16);
        let b = rng.gen_range(-16..=16);
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            return IntervalSet::segment(lo as f64 / 16.0, hi as f64 / 16.0);
        }
    }
}

/// Random geometry on dyadic grids. Every measure and half-length is an
/// exact binary fraction, so region arithmetic identities hold to rounding
/// error. The coupled intervals are both nonempty (the converse bookkeeping
/// is undefined when exactly one side of the coupling vanishes) unless
/// `allow_uncoupled` flips a coin for dropping both.
pub fn random_dyadic_geometry(rng: &mut ChaCha8Rng, allow_uncoupled: bool) -> NetworkGeometry {
    let uncoupled = allow_uncoupled && rng.gen_bool(0.1);
    let (psi_t12, psi_r12) = if uncoupled {
        (IntervalSet::empty(), IntervalSet::empty())
    } else {
        (random_dyadic_interval(rng), random_dyadic_interval(rng))
    };
    NetworkGeometry {
        l_t1: random_half_length(rng),
        l_r1: random_half_length(rng),
        l_t2: random_half_length(rng),
        l_r2: random_half_length(rng),
        psi_t11: random_dyadic_interval(rng),
        psi_r11: random_dyadic_interval(rng),
        psi_t22: random_dyadic_interval(rng),
        psi_r22: random_dyadic_interval(rng),
        psi_t12,
        psi_r12,
    }
}

/// Lays out `orth`, `int`, and `only` coordinate cells of width `w` from
/// the left domain edge: the signal interval covers the first two groups,
/// the coupled interval the last two.
fn cell_layout(orth: usize, int: usize, only: usize, w: f64) -> (IntervalSet, IntervalSet) {
    let x0 = -1.0;
    let signal = IntervalSet::segment(x0, x0 + (orth + int) as f64 * w);
    let coupled_len = (int + only) as f64 * w;
    let coupled = if coupled_len == 0.0 {
        IntervalSet::empty()
    } else {
        IntervalSet::segment(x0 + orth as f64 * w, x0 + (orth + int + only) as f64 * w)
    };
    (signal, coupled)
}

/// Random geometry whose eight block dimensions are all integers, built by
/// laying out whole coordinate cells of width 1/(2L) per node. Corner
/// points of such geometries are integers as well.
pub fn random_block_geometry(rng: &mut ChaCha8Rng) -> NetworkGeometry {
    let quarter = |rng: &mut ChaCha8Rng| rng.gen_range(2..=4) as f64 * 0.5;
    let l_t1 = quarter(rng);
    let l_r1 = quarter(rng);
    let l_t2 = quarter(rng);
    let l_r2 = quarter(rng);

    let draw_counts = |rng: &mut ChaCha8Rng, cap: usize| loop {
        let orth = rng.gen_range(0..=3.min(cap));
        let int = rng.gen_range(0..=3.min(cap - orth.min(cap)));
        let only = rng.gen_range(0..=2.min(cap - (orth + int).min(cap)));
        if orth + int >= 1 && orth + int + only <= cap {
            return (orth, int, only);
        }
    };

    let cap_t2 = (4.0 * l_t2) as usize;
    let (a_orth, a_int, a_only) = draw_counts(rng, cap_t2);
    let (psi_t22, psi_t12) = cell_layout(a_orth, a_int, a_only, 1.0 / (2.0 * l_t2));

    let cap_r1 = (4.0 * l_r1) as usize;
    let (b_orth, b_int, b_only) = draw_counts(rng, cap_r1);
    let (psi_r11, psi_r12) = cell_layout(b_orth, b_int, b_only, 1.0 / (2.0 * l_r1));

    let n_t1 = rng.gen_range(1..=(4.0 * l_t1) as usize);
    let psi_t11 = IntervalSet::segment(-1.0, -1.0 + n_t1 as f64 / (2.0 * l_t1));
    let n_r2 = rng.gen_range(1..=(4.0 * l_r2) as usize);
    let psi_r22 = IntervalSet::segment(-1.0, -1.0 + n_r2 as f64 / (2.0 * l_r2));

    NetworkGeometry {
        l_t1,
        l_r1,
        l_t2,
        l_r2,
        psi_t11,
        psi_r11,
        psi_t22,
        psi_r22,
        psi_t12,
        psi_r12,
    }
}

/// Rough construction-case label of a geometry, used to stratify samples:
/// 0 = no coupling, 1 = coupled transmit side narrower (or equal) with the
/// receive corner interval-limited, 2 = same but corner transmit-limited,
/// 3 = coupled transmit side wider, leading-direction listening,
/// 4 = coupled transmit side wider, partial listening.
pub fn construction_case(g: &NetworkGeometry) -> usize {
    let t12 = g.dim_t12();
    let r12 = g.dim_r12();
    if t12 == 0.0 {
        return 0;
    }
    let d1 = g.dim_t11().min(g.dim_r11());
    if t12 <= r12 {
        if d1 >= g.dim_r11() {
            1
        } else {
            2
        }
    } else if d1 >= g.dim_r11() {
        3
    } else {
        4
    }
}

/// A batch of block geometries covering every construction case at least
/// `min_each` times. Draws until the quota is met, then fills up to
/// `count`.
pub fn stratified_block_geometries(
    seed: u64,
    count: usize,
    min_each: usize,
) -> Vec<NetworkGeometry> {
    let mut r = rng(seed);
    let mut out: Vec<NetworkGeometry> = Vec::new();
    let mut tally = [0usize; 5];
    while out.len() < count {
        let g = random_block_geometry(&mut r);
        let case = construction_case(&g);
        let deficit: usize = tally.iter().map(|&t| min_each.saturating_sub(t)).sum();
        let slack = count - out.len();
        // Reserve the last slots for cases still under quota.
        if tally[case] >= min_each && slack <= deficit {
            continue;
        }
        tally[case] += 1;
        out.push(g);
    }
    assert!(
        tally.iter().all(|&t| t >= min_each),
        "case coverage not met: {tally:?}"
    );
    out
}
