//! Finitely-presented compact subsets of the real line and their gaps.

use num_traits::{One, Zero};

use crate::rational::{rat, Rational};
use crate::{Error, Result};

/// A finite ordered union of disjoint closed rational intervals of positive
/// total measure. Degenerate intervals (isolated points) are allowed and are
/// load-bearing: the interesting counterexamples all need them.
///
/// The representation is canonical — components are sorted and touching or
/// overlapping intervals are merged — so `==` decides set equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactSet {
    components: Vec<(Rational, Rational)>,
}

/// A connected component of `[min K, max K] \ K`: an open interval whose
/// endpoints belong to `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    pub left: Rational,
    pub right: Rational,
}

impl Gap {
    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }
}

impl CompactSet {
    /// Validates, sorts, merges touching/overlapping intervals, and checks
    /// positive total measure.
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::EmptySet);
        }
        for (a, b) in &intervals {
            if a > b {
                return Err(Error::MalformedInterval(a.clone(), b.clone()));
            }
        }
        let mut sorted = intervals;
        sorted.sort();
        let mut components: Vec<(Rational, Rational)> = Vec::with_capacity(sorted.len());
        for (a, b) in sorted {
            match components.last_mut() {
                Some((_, last_b)) if a <= *last_b => {
                    if b > *last_b {
                        *last_b = b;
                    }
                }
                _ => components.push((a, b)),
            }
        }
        let set = CompactSet { components };
        if set.measure().is_zero() {
            return Err(Error::ZeroMeasure);
        }
        Ok(set)
    }

    pub fn components(&self) -> &[(Rational, Rational)] {
        &self.components
    }

    pub fn min(&self) -> &Rational {
        &self.components.first().unwrap().0
    }

    pub fn max(&self) -> &Rational {
        &self.components.last().unwrap().1
    }

    /// Total Lebesgue measure, exact.
    pub fn measure(&self) -> Rational {
        self.components.iter().map(|(a, b)| b - a).sum()
    }

    /// Exact membership test.
    pub fn contains(&self, x: &Rational) -> bool {
        self.component_index(x).is_some()
    }

    /// Index of the component containing `x`, if any.
    pub fn component_index(&self, x: &Rational) -> Option<usize> {
        // Last component with a <= x.
        let i = self.components.partition_point(|(a, _)| a <= x);
        if i == 0 {
            return None;
        }
        let (_, b) = &self.components[i - 1];
        (x <= b).then_some(i - 1)
    }

    /// All gaps in increasing order.
    pub fn gaps(&self) -> Vec<Gap> {
        self.components
            .windows(2)
            .map(|w| Gap {
                left: w[0].1.clone(),
                right: w[1].0.clone(),
            })
            .collect()
    }

    /// Finite truncation of the family `{0} ∪ {1/n^e : n ≤ N} ∪ tail`.
    /// Truncation introduces the extra gap `(0, 1/N^e)`.
    pub fn truncated_reciprocal(
        exponent: u32,
        n_max: u32,
        tail: (Rational, Rational),
    ) -> Result<Self> {
        if exponent == 0 || n_max == 0 {
            return Err(Error::DegenerateParameters(
                "exponent and N must be positive".into(),
            ));
        }
        let mut intervals = vec![(Rational::zero(), Rational::zero())];
        for n in 1..=n_max {
            let denom = num_bigint::BigInt::from(n).pow(exponent);
            let point = Rational::new(num_bigint::BigInt::from(1), denom);
            intervals.push((point.clone(), point));
        }
        intervals.push(tail);
        Self::new(intervals)
    }

    /// Fat-Cantor construction: starting from `[0, 1]`, level `d` removes the
    /// middle open fraction `gap_fractions[d]` of every surviving interval.
    pub fn fat_cantor(depth: usize, gap_fractions: &[Rational]) -> Result<Self> {
        if depth > gap_fractions.len() {
            return Err(Error::DegenerateParameters(format!(
                "depth {} exceeds the {} fractions provided",
                depth,
                gap_fractions.len()
            )));
        }
        for f in &gap_fractions[..depth] {
            if *f <= Rational::zero() || *f >= Rational::one() {
                return Err(Error::DegenerateParameters(format!(
                    "gap fraction {} outside (0, 1)",
                    f
                )));
            }
        }
        let mut intervals = vec![(Rational::zero(), Rational::one())];
        for f in &gap_fractions[..depth] {
            let keep_half = (Rational::one() - f) / rat(2, 1);
            intervals = intervals
                .into_iter()
                .flat_map(|(a, b)| {
                    let len = &b - &a;
                    let left = (a.clone(), &a + &len * &keep_half);
                    let right = (&b - &len * &keep_half, b);
                    [left, right]
                })
                .collect();
        }
        Self::new(intervals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub fn set(intervals: &[(i64, i64)]) -> CompactSet {
        CompactSet::new(
            intervals
                .iter()
                .map(|&(a, b)| (int(a), int(b)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn singleton_component_kept() {
        let k = set(&[(0, 1), (2, 2)]);
        assert_eq!(k.components().len(), 2);
        assert_eq!(k.measure(), int(1));
    }

    #[test]
    fn touching_intervals_merge() {
        let k = set(&[(0, 1), (1, 2)]);
        assert_eq!(k.components(), &[(int(0), int(2))]);
    }

    #[test]
    fn zero_measure_rejected() {
        let err = CompactSet::new(vec![(int(0), int(0)), (int(1), int(1))]);
        assert!(matches!(err, Err(Error::ZeroMeasure)));
    }

    #[test]
    fn empty_and_malformed_rejected() {
        assert!(matches!(CompactSet::new(vec![]), Err(Error::EmptySet)));
        assert!(matches!(
            CompactSet::new(vec![(int(1), int(0))]),
            Err(Error::MalformedInterval(_, _))
        ));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(set(&[(0, 1), (2, 2)]).measure(), int(1));
        let m = CompactSet::new(vec![(int(0), rat(1, 2)), (int(1), int(1))]).unwrap();
        assert_eq!(m.measure(), rat(1, 2));
        assert_eq!(set(&[(0, 1), (2, 3)]).measure(), int(2));
    }

    #[test]
    fn gap_lists() {
        assert!(set(&[(0, 1)]).gaps().is_empty());
        let m = set(&[(0, 1), (2, 2), (3, 3)]);
        let gaps = m.gaps();
        assert_eq!(gaps.len(), 2);
        assert_eq!((gaps[0].left.clone(), gaps[0].right.clone()), (int(1), int(2)));
        assert_eq!((gaps[1].left.clone(), gaps[1].right.clone()), (int(2), int(3)));
        assert_eq!(set(&[(0, 1), (2, 3)]).gaps().len(), 1);
    }

    #[test]
    fn membership_is_exact() {
        let k = set(&[(0, 1), (2, 2)]);
        assert!(k.contains(&rat(1, 2)));
        assert!(k.contains(&int(2)));
        assert!(!k.contains(&rat(3, 2)));
        assert!(!k.contains(&int(3)));
        assert!(!k.contains(&int(-1)));
    }

    #[test]
    fn idempotent_canonical_form() {
        let k = set(&[(0, 1), (2, 3), (5, 5)]);
        let again = CompactSet::new(k.components().to_vec()).unwrap();
        assert_eq!(again, k);
    }

    #[test]
    fn truncated_reciprocal_families() {
        let k = CompactSet::truncated_reciprocal(1, 3, (int(1), int(2))).unwrap();
        let expected = CompactSet::new(vec![
            (int(0), int(0)),
            (rat(1, 3), rat(1, 3)),
            (rat(1, 2), rat(1, 2)),
            (int(1), int(2)),
        ])
        .unwrap();
        assert_eq!(k, expected);

        let m = CompactSet::truncated_reciprocal(2, 3, (int(1), int(2))).unwrap();
        let expected = CompactSet::new(vec![
            (int(0), int(0)),
            (rat(1, 9), rat(1, 9)),
            (rat(1, 4), rat(1, 4)),
            (int(1), int(2)),
        ])
        .unwrap();
        assert_eq!(m, expected);

        let smallest = CompactSet::truncated_reciprocal(1, 1, (int(1), int(2))).unwrap();
        assert_eq!(
            smallest,
            CompactSet::new(vec![(int(0), int(0)), (int(1), int(2))]).unwrap()
        );
    }

    #[test]
    fn fat_cantor_depths() {
        let depth0 = CompactSet::fat_cantor(0, &[]).unwrap();
        assert_eq!(depth0, set(&[(0, 1)]));

        let depth1 = CompactSet::fat_cantor(1, &[rat(1, 4)]).unwrap();
        let expected = CompactSet::new(vec![
            (int(0), rat(3, 8)),
            (rat(5, 8), int(1)),
        ])
        .unwrap();
        assert_eq!(depth1, expected);
        assert_eq!(depth1.measure(), rat(3, 4));
    }

    #[test]
    fn fat_cantor_measure_product_formula() {
        let fractions = [rat(1, 4), rat(1, 3), rat(1, 5)];
        for depth in 0..=fractions.len() {
            let set = CompactSet::fat_cantor(depth, &fractions).unwrap();
            let expected: Rational = fractions[..depth]
                .iter()
                .map(|f| Rational::one() - f)
                .product();
            assert_eq!(set.measure(), expected);
        }
    }

    #[test]
    fn fat_cantor_nesting() {
        let fractions = [rat(1, 4), rat(1, 3)];
        let outer = CompactSet::fat_cantor(1, &fractions).unwrap();
        let inner = CompactSet::fat_cantor(2, &fractions).unwrap();
        // every component of the deeper set lies inside one of the shallower
        for (a, b) in inner.components() {
            assert!(outer
                .components()
                .iter()
                .any(|(oa, ob)| oa <= a && b <= ob));
        }
    }

    #[test]
    fn fat_cantor_rejects_bad_fraction() {
        assert!(matches!(
            CompactSet::fat_cantor(1, &[int(1)]),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn measure_plus_gaps_spans_hull() {
        let k = set(&[(0, 1), (2, 2), (4, 6)]);
        let gap_total: Rational = k.gaps().iter().map(|g| g.length()).sum();
        assert_eq!(k.measure() + gap_total, k.max() - k.min());
    }
}
