//! Fiber and gap compatibility between two compact sets along an increasing
//! lipeomorphism of their measure intervals, the induced gap correspondence,
//! and the exact minimal gap constant.

use std::fmt;

use num_traits::{One, Zero};

use crate::pl::PiecewiseLinear;
use crate::projection::ProjectionTable;
use crate::rational::{format, Rational};
use crate::set::CompactSet;
use crate::{Error, Result};

/// Why a pair `(k, m, ψ)` fails fiber compatibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IncompatibilityReason {
    /// `ψ(E_M) ≠ E_K` as sets.
    ESetMismatch,
    /// A matched level whose fibers have different cardinalities.
    FiberCardinality { in_m: usize, in_k: usize },
}

impl IncompatibilityReason {
    /// Stable machine-readable code, used by the CLI and tests.
    pub fn code(&self) -> &'static str {
        match self {
            IncompatibilityReason::ESetMismatch => "e-set-mismatch",
            IncompatibilityReason::FiberCardinality { .. } => "fiber-cardinality",
        }
    }
}

/// A fiber-compatibility failure with the offending level (in the `m`
/// measure interval).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incompatibility {
    pub reason: IncompatibilityReason,
    pub level: Rational,
}

impl fmt::Display for Incompatibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            IncompatibilityReason::ESetMismatch => write!(
                f,
                "exceptional sets do not match under psi at level {}",
                format(&self.level)
            ),
            IncompatibilityReason::FiberCardinality { in_m, in_k } => write!(
                f,
                "fiber cardinality mismatch at level {}: {} points in M vs {} in K",
                format(&self.level),
                in_m,
                in_k
            ),
        }
    }
}

/// The witness of fiber compatibility: matched exceptional levels together
/// with the unique increasing bijection between each pair of finite fibers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberMatching {
    /// `(s, ψ(s))` for each `s ∈ E_M`, increasing in `s`.
    pub level_pairs: Vec<(Rational, Rational)>,
    /// For each level pair, the graph of `h_s` as `(point in M, point in K)`
    /// pairs in increasing order.
    pub isomorphisms: Vec<Vec<(Rational, Rational)>>,
}

/// The bijection between the gaps of `m` and the gaps of `k` induced by a
/// fiber matching, with exact length ratios.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapCorrespondence {
    /// `(gap of m, corresponding gap of k, ratio λ(V)/λ(U))`.
    pub pairs: Vec<(crate::set::Gap, crate::set::Gap, Rational)>,
    /// Minimal `C ≥ 1` with `C⁻¹ ≤ ratio ≤ C` for every pair.
    pub constant: Rational,
}

pub(crate) fn validate_psi(psi: &PiecewiseLinear, k: &CompactSet, m: &CompactSet) -> Result<()> {
    let (lo, hi) = psi.domain();
    if !lo.is_zero() || *hi != m.measure() {
        return Err(Error::InvalidPsi(format!(
            "domain [{}, {}] is not [0, |M|] = [0, {}]",
            lo,
            hi,
            m.measure()
        )));
    }
    if !psi.values()[0].is_zero() || *psi.values().last().unwrap() != k.measure() {
        return Err(Error::InvalidPsi(format!(
            "range is not [0, |K|] = [0, {}]",
            k.measure()
        )));
    }
    if !psi.is_increasing() {
        return Err(Error::InvalidPsi("slopes must all be positive".into()));
    }
    Ok(())
}

/// Decides fiber ψ-compatibility of `(k, m)`. On success, returns the
/// matching with the unique order-isomorphism per exceptional level; on
/// failure, the report names the offending level and the reason.
pub fn check_fiber_compatibility(
    k: &CompactSet,
    m: &CompactSet,
    psi: &PiecewiseLinear,
) -> Result<std::result::Result<FiberMatching, Incompatibility>> {
    validate_psi(psi, k, m)?;
    let table_k = ProjectionTable::new(k);
    let table_m = ProjectionTable::new(m);
    let e_m = table_m.exceptional_set();
    let e_k = table_k.exceptional_set();

    let psi_e_m = e_m
        .iter()
        .map(|s| psi.eval(s))
        .collect::<Result<Vec<_>>>()?;
    if psi_e_m != e_k {
        // ψ is increasing, so both sides are sorted; find the first level of
        // E_M whose image is not exceptional in K, else report the first
        // unmatched K level pulled back through ψ.
        let level = e_m
            .iter()
            .zip(&psi_e_m)
            .find(|(_, t)| !e_k.contains(t))
            .map(|(s, _)| s.clone())
            .unwrap_or_else(|| {
                let missing = e_k
                    .iter()
                    .find(|t| !psi_e_m.contains(t))
                    .expect("sets differ");
                psi.invert().unwrap().eval(missing).unwrap()
            });
        return Ok(Err(Incompatibility {
            reason: IncompatibilityReason::ESetMismatch,
            level,
        }));
    }

    let mut level_pairs = Vec::with_capacity(e_m.len());
    let mut isomorphisms = Vec::with_capacity(e_m.len());
    for (s, t) in e_m.iter().zip(&psi_e_m) {
        let fiber_m = table_m.fiber(s)?.points;
        let fiber_k = table_k.fiber(t)?.points;
        if fiber_m.len() != fiber_k.len() {
            return Ok(Err(Incompatibility {
                reason: IncompatibilityReason::FiberCardinality {
                    in_m: fiber_m.len(),
                    in_k: fiber_k.len(),
                },
                level: s.clone(),
            }));
        }
        // on finite chains the increasing bijection is unique: index by index
        level_pairs.push((s.clone(), t.clone()));
        isomorphisms.push(fiber_m.into_iter().zip(fiber_k).collect());
    }
    Ok(Ok(FiberMatching {
        level_pairs,
        isomorphisms,
    }))
}

impl FiberMatching {
    /// `h_s`-image of a fiber point of `m` at exceptional level `s`.
    pub fn image(&self, s: &Rational, y: &Rational) -> Option<&Rational> {
        let i = self.level_pairs.iter().position(|(l, _)| l == s)?;
        self.isomorphisms[i]
            .iter()
            .find(|(p, _)| p == y)
            .map(|(_, q)| q)
    }
}

/// Builds the gap correspondence of a fiber-compatible pair: each gap of `m`
/// has endpoints consecutive in its fiber, and their `h_s`-images bound a
/// unique gap of `k`. Also computes the minimal constant `C`.
pub fn gap_correspondence(
    k: &CompactSet,
    m: &CompactSet,
    matching: &FiberMatching,
) -> Result<GapCorrespondence> {
    let k_gaps = k.gaps();
    let mut pairs = Vec::new();
    let mut constant = Rational::one();
    let table_m = ProjectionTable::new(m);
    for u in m.gaps() {
        let s = table_m.project(&u.left)?;
        let left = matching.image(&s, &u.left).ok_or_else(|| {
            Error::InternalInvariantViolation(format!(
                "gap endpoint {} missing from the fiber matching",
                u.left
            ))
        })?;
        let right = matching.image(&s, &u.right).ok_or_else(|| {
            Error::InternalInvariantViolation(format!(
                "gap endpoint {} missing from the fiber matching",
                u.right
            ))
        })?;
        let v = k_gaps
            .iter()
            .find(|g| &g.left == left && &g.right == right)
            .ok_or_else(|| {
                Error::InternalInvariantViolation(format!(
                    "h-images ({}, {}) do not bound a gap of K",
                    left, right
                ))
            })?;
        let ratio = v.length() / u.length();
        let stretch = ratio.clone().max(ratio.recip());
        if stretch > constant {
            constant = stretch;
        }
        pairs.push((u, v.clone(), ratio));
    }
    Ok(GapCorrespondence { pairs, constant })
}

/// Full gap-compatibility check: fiber compatibility first, then the gap
/// correspondence and its exact minimal constant. For finitely many gaps the
/// constant is always finite, so the verdict is `true` whenever the fiber
/// check passes; the interesting output is `C` itself.
pub fn check_gap_compatibility(
    k: &CompactSet,
    m: &CompactSet,
    psi: &PiecewiseLinear,
) -> Result<std::result::Result<GapCorrespondence, Incompatibility>> {
    match check_fiber_compatibility(k, m, psi)? {
        Err(report) => Ok(Err(report)),
        Ok(matching) => Ok(Ok(gap_correspondence(k, m, &matching)?)),
    }
}

/// `C(N)` across the truncated reciprocal family `K_N = {0} ∪ {1/n} ∪ [1,2]`,
/// `M_N = {0} ∪ {1/n²} ∪ [1,2]`, with `ψ = id`. The constant grows without
/// bound, which is how the infinite family's gap-incompatibility shows up at
/// finite truncation.
pub fn compatibility_growth_curve(n_range: impl IntoIterator<Item = u32>) -> Result<Vec<(u32, Rational)>> {
    let tail = (Rational::one(), Rational::from_integer(2.into()));
    let mut curve = Vec::new();
    for n in n_range {
        let k = CompactSet::truncated_reciprocal(1, n, tail.clone())?;
        let m = CompactSet::truncated_reciprocal(2, n, tail.clone())?;
        let psi = PiecewiseLinear::identity(Rational::zero(), Rational::one())?;
        let corr = check_gap_compatibility(&k, &m, &psi)?.map_err(|r| {
            Error::InternalInvariantViolation(format!(
                "truncated family must be fiber compatible: {r}"
            ))
        })?;
        curve.push((n, corr.constant));
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn set(intervals: &[(i64, i64)]) -> CompactSet {
        CompactSet::new(intervals.iter().map(|&(a, b)| (int(a), int(b))).collect()).unwrap()
    }

    #[test]
    fn e_set_mismatch_example() {
        // K = [0,1], M = [0,1/2] ∪ {1}: E_M = {1/2} but E_K is empty,
        // so no psi can work.
        let k = set(&[(0, 1)]);
        let m = CompactSet::new(vec![(int(0), rat(1, 2)), (int(1), int(1))]).unwrap();
        let psi = PiecewiseLinear::linear_through_origin(rat(1, 2), &int(2)).unwrap();
        let report = check_fiber_compatibility(&k, &m, &psi).unwrap().unwrap_err();
        assert_eq!(report.reason.code(), "e-set-mismatch");
        assert_eq!(report.level, rat(1, 2));
    }

    #[test]
    fn fiber_cardinality_mismatch_example() {
        // K = [0,1] ∪ {2}, M = [0,1] ∪ {2} ∪ {3}: fibers over level 1 have
        // 2 vs 3 points, no order-isomorphism exists.
        let k = set(&[(0, 1), (2, 2)]);
        let m = set(&[(0, 1), (2, 2), (3, 3)]);
        let psi = PiecewiseLinear::identity(int(0), int(1)).unwrap();
        let report = check_fiber_compatibility(&k, &m, &psi).unwrap().unwrap_err();
        assert_eq!(report.reason.code(), "fiber-cardinality");
        assert_eq!(report.level, int(1));
        assert_eq!(
            report.reason,
            IncompatibilityReason::FiberCardinality { in_m: 3, in_k: 2 }
        );
    }

    #[test]
    fn identity_is_always_self_compatible() {
        for k in [
            set(&[(0, 1)]),
            set(&[(0, 1), (2, 2), (3, 3)]),
            set(&[(0, 1), (2, 3), (5, 5), (6, 7)]),
        ] {
            let psi = PiecewiseLinear::identity(Rational::zero(), k.measure()).unwrap();
            let matching = check_fiber_compatibility(&k, &k, &psi).unwrap().unwrap();
            for iso in &matching.isomorphisms {
                for (p, q) in iso {
                    assert_eq!(p, q);
                }
            }
            let corr = gap_correspondence(&k, &k, &matching).unwrap();
            assert_eq!(corr.constant, int(1));
            assert_eq!(corr.pairs.len(), k.gaps().len());
        }
    }

    #[test]
    fn worked_gap_correspondence() {
        // M = [0,2] ∪ [3,4], K = [0,1] ∪ [2,3], psi maps measure 2 to 1 on
        // the first component and 1 to 1 on the second.
        let m = set(&[(0, 2), (3, 4)]);
        let k = set(&[(0, 1), (2, 3)]);
        let psi = PiecewiseLinear::new(vec![
            (int(0), int(0)),
            (int(2), int(1)),
            (int(3), int(2)),
        ])
        .unwrap();
        let corr = check_gap_compatibility(&k, &m, &psi).unwrap().unwrap();
        assert_eq!(corr.pairs.len(), 1);
        let (u, v, ratio) = &corr.pairs[0];
        assert_eq!((u.left.clone(), u.right.clone()), (int(2), int(3)));
        assert_eq!((v.left.clone(), v.right.clone()), (int(1), int(2)));
        assert_eq!(*ratio, int(1));
        assert_eq!(corr.constant, int(1));
    }

    #[test]
    fn gapless_pair_has_constant_one() {
        let k = set(&[(0, 1)]);
        let psi = PiecewiseLinear::identity(int(0), int(1)).unwrap();
        let corr = check_gap_compatibility(&k, &k, &psi).unwrap().unwrap();
        assert!(corr.pairs.is_empty());
        assert_eq!(corr.constant, int(1));
    }

    #[test]
    fn truncated_reciprocal_ratios_match_closed_form() {
        let tail = (int(1), int(2));
        let k = CompactSet::truncated_reciprocal(1, 5, tail.clone()).unwrap();
        let m = CompactSet::truncated_reciprocal(2, 5, tail).unwrap();
        let psi = PiecewiseLinear::identity(int(0), int(1)).unwrap();
        let corr = check_gap_compatibility(&k, &m, &psi).unwrap().unwrap();
        // interior pair for n: ((1/(n+1)², 1/n²)  ↦  (1/(n+1), 1/n)) with
        // ratio n(n+1)/(2n+1)
        for (u, _v, ratio) in &corr.pairs {
            if u.left.is_zero() {
                continue; // truncation gap, ratio N
            }
            let n_rat = u.right.clone().recip(); // 1/n² ↦ n²
            let n = num_traits::ToPrimitive::to_i64(&n_rat.numer().sqrt()).unwrap();
            assert_eq!(*ratio, rat(n * (n + 1), 2 * n + 1));
        }
        assert_eq!(corr.constant, int(5));
    }

    #[test]
    fn growth_curve_values() {
        let curve = compatibility_growth_curve(1..=10).unwrap();
        assert_eq!(curve[0], (1, int(1)));
        assert_eq!(curve[2], (3, int(3)));
        for (n, c) in &curve[1..] {
            assert_eq!(c, &int(*n as i64), "C(N) = N for N >= 2");
        }
        // strictly monotone from N = 1 on? C(1) = 1 < C(2) = 2 < ...
        for w in curve.windows(2) {
            assert!(w[0].1 < w[1].1);
        }
    }

    #[test]
    fn symmetry_under_inversion() {
        let m = set(&[(0, 2), (3, 4)]);
        let k = set(&[(0, 1), (2, 3)]);
        let psi = PiecewiseLinear::new(vec![
            (int(0), int(0)),
            (int(2), int(1)),
            (int(3), int(2)),
        ])
        .unwrap();
        let forward = check_gap_compatibility(&k, &m, &psi).unwrap().unwrap();
        let backward =
            check_gap_compatibility(&m, &k, &psi.invert().unwrap()).unwrap().unwrap();
        assert_eq!(forward.constant, backward.constant);
        assert_eq!(forward.pairs.len(), backward.pairs.len());
    }

    #[test]
    fn invalid_psi_is_rejected() {
        let k = set(&[(0, 1)]);
        let wrong = PiecewiseLinear::identity(int(0), int(2)).unwrap();
        assert!(matches!(
            check_fiber_compatibility(&k, &k, &wrong),
            Err(Error::InvalidPsi(_))
        ));
    }

    #[test]
    fn constant_is_minimal() {
        let m = set(&[(0, 1), (2, 2), (5, 6)]); // gaps (1,2) len 1, (2,5) len 3
        let k = set(&[(0, 1), (3, 3), (4, 5)]); // gaps (1,3) len 2, (3,4) len 1
        let psi = PiecewiseLinear::identity(int(0), int(2)).unwrap();
        let corr = check_gap_compatibility(&k, &m, &psi).unwrap().unwrap();
        // ratios 2 and 1/3, so C = 3
        assert_eq!(corr.constant, int(3));
        for c_prime in [int(2), rat(5, 2), rat(299, 100)] {
            let violated = corr.pairs.iter().any(|(_, _, r)| {
                r > &c_prime || r < &c_prime.clone().recip()
            });
            assert!(violated, "C' = {c_prime} should be violated by some pair");
        }
    }
}
