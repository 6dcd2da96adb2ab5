//! Region arithmetic identities over large batches of exact dyadic
//! geometries, where every bound is a binary fraction and equalities are
//! expected to hold to rounding error.

mod common;

use spatialdof::regions::{
    corner_points, fd_region, genie_sum_bound, hd_region, region_contains,
};

const TOL: f64 = 1e-9;

#[test]
fn corner_points_match_budget_clipping_formula() {
    let mut rng = common::rng(0x2001);
    for i in 0..10_000 {
        let g = common::random_dyadic_geometry(&mut rng, true);
        let region = fd_region(&g);
        let corners = corner_points(&g);
        let expected_prime = (
            region.d1_max,
            region.d2_max.min(region.d_sum_max - region.d1_max),
        );
        let expected_double = (
            region.d1_max.min(region.d_sum_max - region.d2_max),
            region.d2_max,
        );
        assert!(
            (corners.p_prime.0 - expected_prime.0).abs() <= TOL
                && (corners.p_prime.1 - expected_prime.1).abs() <= TOL,
            "sample {i}: prime {:?} vs {:?} for {g:?}",
            corners.p_prime,
            expected_prime
        );
        assert!(
            (corners.p_double_prime.0 - expected_double.0).abs() <= TOL
                && (corners.p_double_prime.1 - expected_double.1).abs() <= TOL,
            "sample {i}: double prime {:?} vs {:?} for {g:?}",
            corners.p_double_prime,
            expected_double
        );
    }
}

#[test]
fn corner_points_lie_on_the_region_boundary() {
    let mut rng = common::rng(0x2002);
    for _ in 0..2_000 {
        let g = common::random_dyadic_geometry(&mut rng, true);
        let region = fd_region(&g);
        let corners = corner_points(&g);
        for p in [corners.p_prime, corners.p_double_prime] {
            assert!(region_contains(&region, p));
            // On the boundary: at least one constraint is tight.
            let slack = [
                region.d1_max - p.0,
                region.d2_max - p.1,
                region.d_sum_max - p.0 - p.1,
            ]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
            assert!(slack.abs() <= TOL, "interior corner {p:?} for {g:?}");
        }
    }
}

#[test]
fn genie_expansion_reproduces_the_sum_bound() {
    let mut rng = common::rng(0x2003);
    let mut checked = 0usize;
    while checked < 10_000 {
        let g = common::random_dyadic_geometry(&mut rng, false);
        let expansion = genie_sum_bound(&g).expect("coupled intervals are nonempty");
        let direct = fd_region(&g).d_sum_max;
        assert!(
            (expansion.sum_bound() - direct).abs() <= TOL,
            "expansion {:.12} vs direct {direct:.12} for {g:?}",
            expansion.sum_bound()
        );
        // The equalized second stage never shrinks either dimension.
        assert!(expansion.l_r1_double_prime >= expansion.l_r1_prime - TOL);
        checked += 1;
    }
}

#[test]
fn time_sharing_stays_inside_the_region() {
    let mut rng = common::rng(0x2004);
    for _ in 0..2_000 {
        let g = common::random_dyadic_geometry(&mut rng, true);
        let region = fd_region(&g);
        for k in 0..=10 {
            let alpha = k as f64 / 10.0;
            let point = hd_region(&g, alpha).unwrap();
            assert!(
                region_contains(&region, point),
                "alpha {alpha}: {point:?} outside region {region:?} for {g:?}"
            );
        }
    }
}

#[test]
fn vertices_are_extreme_and_ordered() {
    let mut rng = common::rng(0x2005);
    for _ in 0..2_000 {
        let g = common::random_dyadic_geometry(&mut rng, true);
        let region = fd_region(&g);
        assert!(!region.vertices.is_empty());
        for &v in &region.vertices {
            assert!(region_contains(&region, v));
        }
        // Counterclockwise from the d1 axis: d1 never increases, d2 never
        // decreases.
        for pair in region.vertices.windows(2) {
            assert!(pair[1].0 <= pair[0].0 + TOL);
            assert!(pair[1].1 >= pair[0].1 - TOL);
        }
    }
}
