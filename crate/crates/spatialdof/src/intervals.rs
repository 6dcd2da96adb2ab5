//! Unions of closed subintervals of [-1, 1].
//!
//! Every scattering geometry in this crate is described by sets of direction
//! cosines t = cos(theta). A set is stored canonically: segments sorted by
//! left endpoint, pairwise disjoint, no zero-length pieces. Only the Lebesgue
//! measure of boolean combinations ever enters the closed-form bounds, so
//! points of tangency are merged and endpoint comparisons use a small
//! absolute tolerance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for endpoint comparisons and measure assertions.
pub const EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum IntervalError {
    #[error("segment ({0}, {1}) is outside the domain [{2}, {3}]")]
    OutOfDomain(f64, f64, f64, f64),
    #[error("segment ({0}, {1}) has non-positive length")]
    EmptySegment(f64, f64),
    #[error("endpoint {0} is not finite")]
    NotFinite(f64),
}

/// Set operation selector for [`IntervalSet::combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
}

/// Canonical union of closed subintervals of [-1, 1].
///
/// Serializes as a bare list of [lo, hi] pairs; deserialization re-validates
/// and re-canonicalizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct IntervalSet {
    segments: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for IntervalSet {
    type Error = IntervalError;

    fn try_from(segments: Vec<(f64, f64)>) -> Result<Self, IntervalError> {
        IntervalSet::new(&segments)
    }
}

impl From<IntervalSet> for Vec<(f64, f64)> {
    fn from(s: IntervalSet) -> Self {
        s.segments
    }
}

impl IntervalSet {
    /// Builds a set from arbitrary (lo, hi) pairs, canonicalizing as it goes.
    /// Segments may overlap or touch; they are merged. Segments shorter than
    /// [`EPS`] are dropped.
    pub fn new(segments: &[(f64, f64)]) -> Result<Self, IntervalError> {
        Self::new_in_domain(segments, -1.0, 1.0)
    }

    fn new_in_domain(segments: &[(f64, f64)], dlo: f64, dhi: f64) -> Result<Self, IntervalError> {
        for &(lo, hi) in segments {
            if !lo.is_finite() {
                return Err(IntervalError::NotFinite(lo));
            }
            if !hi.is_finite() {
                return Err(IntervalError::NotFinite(hi));
            }
            if lo < dlo - EPS || hi > dhi + EPS {
                return Err(IntervalError::OutOfDomain(lo, hi, dlo, dhi));
            }
            if hi - lo <= EPS {
                return Err(IntervalError::EmptySegment(lo, hi));
            }
        }
        Ok(Self::canonical(segments.to_vec()))
    }

    /// The empty set.
    pub fn empty() -> Self {
        Self { segments: Vec::new() }
    }

    /// The full domain [-1, 1].
    pub fn full() -> Self {
        Self { segments: vec![(-1.0, 1.0)] }
    }

    /// Single segment constructor; panics on invalid input (test convenience).
    pub fn segment(lo: f64, hi: f64) -> Self {
        Self::new(&[(lo, hi)]).expect("invalid segment")
    }

    fn canonical(mut segs: Vec<(f64, f64)>) -> Self {
        segs.retain(|&(lo, hi)| hi - lo > EPS);
        segs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite endpoints"));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segs.len());
        for (lo, hi) in segs {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + EPS => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        Self { segments: merged }
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Total length. Zero for the empty set, at most 2 for subsets of [-1, 1].
    pub fn measure(&self) -> f64 {
        self.segments.iter().map(|&(lo, hi)| hi - lo).sum()
    }

    /// Membership test, closed segments with tolerance.
    pub fn contains(&self, t: f64) -> bool {
        self.segments
            .iter()
            .any(|&(lo, hi)| t >= lo - EPS && t <= hi + EPS)
    }

    /// Boolean combination of two sets; result is canonical.
    pub fn combine(&self, other: &IntervalSet, op: SetOp) -> IntervalSet {
        match op {
            SetOp::Union => {
                let mut segs = self.segments.clone();
                segs.extend_from_slice(&other.segments);
                Self::canonical(segs)
            }
            SetOp::Intersect => {
                let mut segs = Vec::new();
                for &(alo, ahi) in &self.segments {
                    for &(blo, bhi) in &other.segments {
                        let lo = alo.max(blo);
                        let hi = ahi.min(bhi);
                        if hi - lo > EPS {
                            segs.push((lo, hi));
                        }
                    }
                }
                Self::canonical(segs)
            }
            SetOp::Difference => {
                let mut segs = Vec::new();
                for &(alo, ahi) in &self.segments {
                    // Sweep the cutters from the left, keeping what survives.
                    let mut cursor = alo;
                    for &(blo, bhi) in &other.segments {
                        if bhi <= cursor || blo >= ahi {
                            continue;
                        }
                        if blo > cursor {
                            segs.push((cursor, blo));
                        }
                        cursor = cursor.max(bhi);
                        if cursor >= ahi {
                            break;
                        }
                    }
                    if cursor < ahi {
                        segs.push((cursor, ahi));
                    }
                }
                Self::canonical(segs)
            }
        }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, SetOp::Union)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, SetOp::Intersect)
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.combine(other, SetOp::Difference)
    }
}

/// Union of closed elevation-angle segments within [0, pi].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct ElevationSet {
    segments: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for ElevationSet {
    type Error = IntervalError;

    fn try_from(segments: Vec<(f64, f64)>) -> Result<Self, IntervalError> {
        ElevationSet::new(&segments)
    }
}

impl From<ElevationSet> for Vec<(f64, f64)> {
    fn from(s: ElevationSet) -> Self {
        s.segments
    }
}

impl ElevationSet {
    pub fn new(segments: &[(f64, f64)]) -> Result<Self, IntervalError> {
        let canonical =
            IntervalSet::new_in_domain(segments, 0.0, std::f64::consts::PI)?;
        Ok(Self { segments: canonical.segments })
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    /// Image under t = cos(theta). Cosine is decreasing on [0, pi], so each
    /// segment [a, b] maps to [cos b, cos a]; the result is re-canonicalized.
    pub fn to_direction_cosines(&self) -> IntervalSet {
        let mapped: Vec<(f64, f64)> = self
            .segments
            .iter()
            .map(|&(a, b)| (b.cos().clamp(-1.0, 1.0), a.cos().clamp(-1.0, 1.0)))
            .collect();
        IntervalSet::canonical(mapped)
    }
}

/// Free-function form of [`ElevationSet::to_direction_cosines`].
pub fn from_elevation(theta: &ElevationSet) -> IntervalSet {
    theta.to_direction_cosines()
}
