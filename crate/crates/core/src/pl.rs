//! Continuous piecewise-linear functions with rational breakpoints.
//!
//! The algebra here (evaluation, composition, inversion, pointwise linear
//! combinations) is closed and exact, which is what lets every identity in the
//! rest of the crate be checked as a structural equality of canonical forms.

use num_traits::Zero;

use crate::rational::{abs, Rational};
use crate::{Error, Result};

/// A continuous map on `[t_0, t_n]`, linear on each `[t_i, t_{i+1}]`.
///
/// Constructors canonicalize: collinear interior breakpoints are removed, so
/// `==` on two `PiecewiseLinear` values decides equality as functions.
/// Use [`PiecewiseLinear::refined`] when a redundant breakpoint must be kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

impl PiecewiseLinear {
    /// Builds from `(t, v)` pairs. Breakpoints must be strictly increasing
    /// and there must be at least two of them.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        let (breakpoints, values) = points.into_iter().unzip();
        Self::from_breaks_values(breakpoints, values)
    }

    pub fn from_breaks_values(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::Domain(
                "breakpoint and value sequences differ in length".into(),
            ));
        }
        if breakpoints.len() < 2 {
            return Err(Error::Domain(
                "a piecewise-linear function needs at least two breakpoints".into(),
            ));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Domain(format!(
                    "breakpoints not strictly increasing at {}",
                    w[1]
                )));
            }
        }
        let mut f = PiecewiseLinear {
            breakpoints,
            values,
        };
        f.drop_collinear();
        Ok(f)
    }

    /// The identity map on `[a, b]`.
    pub fn identity(a: Rational, b: Rational) -> Result<Self> {
        Self::new(vec![(a.clone(), a), (b.clone(), b)])
    }

    /// The linear map `t ↦ slope·t` on `[0, b]`.
    pub fn linear_through_origin(b: Rational, slope: &Rational) -> Result<Self> {
        let v = &b * slope;
        Self::new(vec![(Rational::zero(), Rational::zero()), (b, v)])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (
            self.breakpoints.first().unwrap(),
            self.breakpoints.last().unwrap(),
        )
    }

    /// Minimum and maximum of the function over its domain. A continuous PL
    /// function attains both at breakpoints.
    pub fn value_bounds(&self) -> (&Rational, &Rational) {
        let min = self.values.iter().min().unwrap();
        let max = self.values.iter().max().unwrap();
        (min, max)
    }

    /// Exact evaluation; errors outside `[t_0, t_n]`.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let (lo, hi) = self.domain();
        if t < lo || t > hi {
            return Err(Error::Domain(format!(
                "{} outside [{}, {}]",
                t, lo, hi
            )));
        }
        // Index of the piece containing t.
        let i = match self.breakpoints.binary_search(t) {
            Ok(i) => return Ok(self.values[i].clone()),
            Err(i) => i - 1,
        };
        let dt = &self.breakpoints[i + 1] - &self.breakpoints[i];
        let dv = &self.values[i + 1] - &self.values[i];
        Ok(&self.values[i] + dv * (t - &self.breakpoints[i]) / dt)
    }

    pub fn piece_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn slope(&self, piece: usize) -> Rational {
        (&self.values[piece + 1] - &self.values[piece])
            / (&self.breakpoints[piece + 1] - &self.breakpoints[piece])
    }

    pub fn slopes(&self) -> impl Iterator<Item = Rational> + '_ {
        (0..self.piece_count()).map(|i| self.slope(i))
    }

    /// `(min slope, max slope)` over all pieces.
    pub fn slope_bounds(&self) -> (Rational, Rational) {
        let mut min = self.slope(0);
        let mut max = min.clone();
        for s in self.slopes().skip(1) {
            if s < min {
                min = s.clone();
            }
            if s > max {
                max = s;
            }
        }
        (min, max)
    }

    pub fn is_increasing(&self) -> bool {
        self.slopes().all(|s| s > Rational::zero())
    }

    /// Right-hand slope at `t` (left-hand at the right endpoint). This is the
    /// convention used for `ψ'` in the weighted-composition formula; the
    /// choice is measure-irrelevant since the formula holds a.e.
    pub fn slope_at(&self, t: &Rational) -> Result<Rational> {
        let (lo, hi) = self.domain();
        if t < lo || t > hi {
            return Err(Error::Domain(format!("{} outside [{}, {}]", t, lo, hi)));
        }
        let i = match self.breakpoints.binary_search(t) {
            Ok(i) if i == self.breakpoints.len() - 1 => i - 1,
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Ok(self.slope(i))
    }

    /// `sup |f|`, attained at a breakpoint.
    pub fn sup_abs(&self) -> Rational {
        self.values.iter().map(abs).max().unwrap()
    }

    /// Exact composition `outer ∘ inner`. The inner range must lie inside the
    /// outer domain. Breakpoints of the result are the inner breakpoints
    /// together with the inner-preimages of the outer breakpoints, computed
    /// per monotone piece of the inner map.
    pub fn compose(outer: &PiecewiseLinear, inner: &PiecewiseLinear) -> Result<PiecewiseLinear> {
        let (range_lo, range_hi) = inner.value_bounds();
        let (dom_lo, dom_hi) = outer.domain();
        if range_lo < dom_lo || range_hi > dom_hi {
            return Err(Error::Domain(format!(
                "inner range [{}, {}] not contained in outer domain [{}, {}]",
                range_lo, range_hi, dom_lo, dom_hi
            )));
        }
        let mut ts: Vec<Rational> = inner.breakpoints.clone();
        for i in 0..inner.piece_count() {
            let (t0, t1) = (&inner.breakpoints[i], &inner.breakpoints[i + 1]);
            let (v0, v1) = (&inner.values[i], &inner.values[i + 1]);
            if v0 == v1 {
                continue; // constant piece, nothing to pull back
            }
            let (lo, hi) = if v0 < v1 { (v0, v1) } else { (v1, v0) };
            for b in &outer.breakpoints {
                if b > lo && b < hi {
                    let t = t0 + (b - v0) * (t1 - t0) / (v1 - v0);
                    ts.push(t);
                }
            }
        }
        ts.sort();
        ts.dedup();
        let values = ts
            .iter()
            .map(|t| outer.eval(&inner.eval(t)?))
            .collect::<Result<Vec<_>>>()?;
        PiecewiseLinear::from_breaks_values(ts, values)
    }

    /// Exact inverse of an increasing map; breakpoints of the inverse are the
    /// values of the original.
    pub fn invert(&self) -> Result<PiecewiseLinear> {
        for s in self.slopes() {
            if s <= Rational::zero() {
                return Err(Error::NotIncreasing(s));
            }
        }
        PiecewiseLinear::from_breaks_values(self.values.clone(), self.breakpoints.clone())
    }

    /// Pointwise sum; both operands must share a domain.
    pub fn add(&self, other: &PiecewiseLinear) -> Result<PiecewiseLinear> {
        if self.domain() != other.domain() {
            return Err(Error::Domain("pointwise sum needs equal domains".into()));
        }
        let mut ts: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        ts.sort();
        ts.dedup();
        let values = ts
            .iter()
            .map(|t| Ok(self.eval(t)? + other.eval(t)?))
            .collect::<Result<Vec<_>>>()?;
        PiecewiseLinear::from_breaks_values(ts, values)
    }

    /// Pointwise scaling by a rational constant.
    pub fn scale(&self, c: &Rational) -> PiecewiseLinear {
        if c.is_zero() {
            // Collapse to the zero function on the same domain.
            let (lo, hi) = self.domain();
            return PiecewiseLinear::new(vec![
                (lo.clone(), Rational::zero()),
                (hi.clone(), Rational::zero()),
            ])
            .unwrap();
        }
        PiecewiseLinear {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn neg(&self) -> PiecewiseLinear {
        self.scale(&Rational::from_integer((-1).into()))
    }

    /// Inserts extra breakpoints without canonicalizing, so the redundant
    /// collinear points survive. Used by refinement-invariance tests.
    pub fn refined(&self, extra: &[Rational]) -> Result<PiecewiseLinear> {
        let mut ts = self.breakpoints.clone();
        for t in extra {
            let (lo, hi) = self.domain();
            if t < lo || t > hi {
                return Err(Error::Domain(format!("{} outside [{}, {}]", t, lo, hi)));
            }
            ts.push(t.clone());
        }
        ts.sort();
        ts.dedup();
        let values = ts.iter().map(|t| self.eval(t)).collect::<Result<Vec<_>>>()?;
        Ok(PiecewiseLinear {
            breakpoints: ts,
            values,
        })
    }

    /// Canonical form with collinear interior breakpoints removed.
    pub fn normalized(&self) -> PiecewiseLinear {
        let mut f = self.clone();
        f.drop_collinear();
        f
    }

    fn drop_collinear(&mut self) {
        let mut i = 1;
        while i + 1 < self.breakpoints.len() {
            let left_slope = (&self.values[i] - &self.values[i - 1])
                * (&self.breakpoints[i + 1] - &self.breakpoints[i]);
            let right_slope = (&self.values[i + 1] - &self.values[i])
                * (&self.breakpoints[i] - &self.breakpoints[i - 1]);
            if left_slope == right_slope {
                self.breakpoints.remove(i);
                self.values.remove(i);
            } else {
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn pl(points: &[(i64, i64)]) -> PiecewiseLinear {
        PiecewiseLinear::new(points.iter().map(|&(t, v)| (int(t), int(v))).collect()).unwrap()
    }

    #[test]
    fn eval_identity_midpoint() {
        let f = pl(&[(0, 0), (1, 1)]);
        assert_eq!(f.eval(&rat(1, 2)).unwrap(), rat(1, 2));
    }

    #[test]
    fn eval_endpoint_and_interior() {
        let f = pl(&[(0, 0), (2, 1), (3, 2)]);
        assert_eq!(f.eval(&int(3)).unwrap(), int(2));
        // hand interpolation: 1 + (1/2)·1
        assert_eq!(f.eval(&rat(5, 2)).unwrap(), rat(3, 2));
    }

    #[test]
    fn eval_rejects_out_of_domain() {
        let f = pl(&[(0, 0), (1, 1)]);
        assert!(matches!(f.eval(&int(2)), Err(Error::Domain(_))));
        assert!(matches!(f.eval(&int(-1)), Err(Error::Domain(_))));
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let id = PiecewiseLinear::identity(int(0), int(1)).unwrap();
        let f = PiecewiseLinear::new(vec![
            (int(0), int(0)),
            (rat(1, 3), rat(1, 2)),
            (int(1), rat(3, 4)),
        ])
        .unwrap();
        assert_eq!(PiecewiseLinear::compose(&id, &f).unwrap(), f);
    }

    #[test]
    fn compose_multiplies_slopes() {
        let outer = pl(&[(0, 0), (1, 2)]);
        let inner = PiecewiseLinear::new(vec![(int(0), int(0)), (int(1), rat(1, 2))]).unwrap();
        let expected = pl(&[(0, 0), (1, 1)]);
        assert_eq!(PiecewiseLinear::compose(&outer, &inner).unwrap(), expected);
    }

    #[test]
    fn compose_rejects_range_mismatch() {
        let outer = pl(&[(0, 0), (1, 1)]);
        let inner = pl(&[(0, 0), (1, 2)]);
        assert!(PiecewiseLinear::compose(&outer, &inner).is_err());
    }

    #[test]
    fn compose_handles_non_monotone_inner() {
        let outer = pl(&[(0, 0), (1, 2), (2, 1)]);
        let tent = pl(&[(0, 0), (1, 2), (2, 0)]);
        let composed = PiecewiseLinear::compose(&outer, &tent).unwrap();
        for k in 0..=8 {
            let t = rat(k, 4);
            assert_eq!(
                composed.eval(&t).unwrap(),
                outer.eval(&tent.eval(&t).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn invert_swaps_coordinates() {
        let f = pl(&[(0, 0), (2, 1), (3, 2)]);
        let inv = f.invert().unwrap();
        assert_eq!(inv, pl(&[(0, 0), (1, 2), (2, 3)]));
        let id = PiecewiseLinear::compose(&f, &inv).unwrap();
        assert_eq!(id, PiecewiseLinear::identity(int(0), int(2)).unwrap());
    }

    #[test]
    fn invert_rejects_non_increasing() {
        let tent = pl(&[(0, 0), (1, 1), (2, 0)]);
        assert!(matches!(tent.invert(), Err(Error::NotIncreasing(_))));
    }

    #[test]
    fn invert_swaps_slope_bounds() {
        let f = pl(&[(0, 0), (2, 1), (3, 2)]);
        assert_eq!(f.slope_bounds(), (rat(1, 2), int(1)));
        let inv = f.invert().unwrap();
        assert_eq!(inv.slope_bounds(), (int(1), int(2)));
    }

    #[test]
    fn sup_abs_examples() {
        assert_eq!(pl(&[(0, 0), (1, 1)]).sup_abs(), int(1));
        let tent = PiecewiseLinear::new(vec![
            (int(0), int(0)),
            (rat(1, 2), rat(1, 2)),
            (int(1), int(0)),
        ])
        .unwrap();
        assert_eq!(tent.sup_abs(), rat(1, 2));
        assert_eq!(pl(&[(0, 0), (1, -3), (2, 2)]).sup_abs(), int(3));
    }

    #[test]
    fn sup_abs_invariant_under_refinement() {
        let f = pl(&[(0, 0), (1, -3), (2, 2)]);
        let refined = f.refined(&[rat(1, 2), rat(3, 2), rat(7, 4)]).unwrap();
        assert_eq!(refined.sup_abs(), f.sup_abs());
        assert_eq!(refined.normalized(), f);
    }

    #[test]
    fn identity_slope_bounds() {
        let id = PiecewiseLinear::identity(int(0), int(1)).unwrap();
        assert_eq!(id.slope_bounds(), (int(1), int(1)));
    }

    #[test]
    fn constructor_drops_collinear_points() {
        let f = PiecewiseLinear::new(vec![
            (int(0), int(0)),
            (rat(1, 2), rat(1, 2)),
            (int(1), int(1)),
        ])
        .unwrap();
        assert_eq!(f, pl(&[(0, 0), (1, 1)]));
    }

    #[test]
    fn slope_at_uses_right_hand_convention() {
        let f = pl(&[(0, 0), (2, 1), (3, 2)]);
        assert_eq!(f.slope_at(&int(0)).unwrap(), rat(1, 2));
        assert_eq!(f.slope_at(&int(2)).unwrap(), int(1));
        // left-hand slope at the right endpoint
        assert_eq!(f.slope_at(&int(3)).unwrap(), int(1));
    }
}
