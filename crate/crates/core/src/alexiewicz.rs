//! Step functions on a compact set, their exact primitives, the Alexiewicz
//! norm, and the isometric embedding onto Lipschitz profiles vanishing at 0.
//!
//! A step function is stored in the measure coordinate: the data is a finite
//! partition `0 = s_0 < … < s_k = |K|` with one value per cell, and the
//! function on `K` is `g ∘ π_K`. Every essentially bounded step function on
//! `K` equals such a representative a.e., and in this form the primitive, the
//! norm, and the isometries are all exact one-pass computations.

use num_traits::Zero;

use crate::pl::PiecewiseLinear;
use crate::projection::ProjectionTable;
use crate::rational::{abs, Rational};
use crate::set::CompactSet;
use crate::{Error, Result};

/// Canonical a.e.-representative of an essentially bounded step function.
///
/// Canonical form merges adjacent cells with equal values, so `==` decides
/// a.e.-equality; values on the measure-zero exceptional fibers never enter
/// the representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    table: ProjectionTable,
    t_breaks: Vec<Rational>,
    values: Vec<Rational>,
}

/// The primitive `J_K f` in the measure coordinate: a piecewise-linear `G` on
/// `[0, |K|]` with `G(0) = 0` and `J_K f(x) = G(π_K(x))` for `x ∈ K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primitive {
    table: ProjectionTable,
    as_pl: PiecewiseLinear,
}

impl StepFunction {
    /// Builds from a partition of `[0, |K|]` and one value per cell.
    pub fn new(
        domain: &CompactSet,
        t_breaks: Vec<Rational>,
        values: Vec<Rational>,
    ) -> Result<Self> {
        let table = ProjectionTable::new(domain);
        if t_breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::Domain(
                "need k+1 breakpoints for k cell values, k >= 1".into(),
            ));
        }
        if !t_breaks[0].is_zero() || t_breaks.last().unwrap() != table.measure() {
            return Err(Error::Domain(format!(
                "partition must run from 0 to |K| = {}",
                table.measure()
            )));
        }
        for w in t_breaks.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Domain(format!(
                    "partition not strictly increasing at {}",
                    w[1]
                )));
            }
        }
        let mut f = StepFunction {
            table,
            t_breaks,
            values,
        };
        f.merge_equal_cells();
        Ok(f)
    }

    /// The constant function `f ≡ c`.
    pub fn constant(domain: &CompactSet, c: Rational) -> Self {
        let measure = domain.measure();
        StepFunction::new(domain, vec![Rational::zero(), measure], vec![c]).unwrap()
    }

    /// Convenience constructor from interior cut points in the `x`
    /// coordinate: cuts are pushed through `Π_K` and measure-zero cells are
    /// dropped.
    pub fn from_x_breaks(
        domain: &CompactSet,
        cuts: &[Rational],
        values: &[Rational],
    ) -> Result<Self> {
        if values.len() != cuts.len() + 1 {
            return Err(Error::Domain(
                "need one more value than interior cuts".into(),
            ));
        }
        let table = ProjectionTable::new(domain);
        let mut t_breaks = vec![Rational::zero()];
        let mut cell_values = Vec::new();
        for (cut, value) in cuts.iter().zip(values) {
            let t = table.extended_project(cut)?;
            if &t > t_breaks.last().unwrap() {
                t_breaks.push(t);
                cell_values.push(value.clone());
            }
            // zero-measure cell: skip both the cut and its value
        }
        t_breaks.push(table.measure().clone());
        cell_values.push(values.last().unwrap().clone());
        StepFunction::new(domain, t_breaks, cell_values)
    }

    fn merge_equal_cells(&mut self) {
        let mut j = 0;
        while j + 1 < self.values.len() {
            if self.values[j] == self.values[j + 1] {
                self.values.remove(j + 1);
                self.t_breaks.remove(j + 1);
            } else {
                j += 1;
            }
        }
    }

    pub fn domain(&self) -> &CompactSet {
        self.table.owner()
    }

    pub fn table(&self) -> &ProjectionTable {
        &self.table
    }

    pub fn t_breaks(&self) -> &[Rational] {
        &self.t_breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `‖f‖_∞` of the canonical representative.
    pub fn sup_norm(&self) -> Rational {
        self.values.iter().map(abs).max().unwrap()
    }

    /// Cell value at level `t`, right-continuous convention (left at `|K|`).
    pub fn value_at_level(&self, t: &Rational) -> Result<Rational> {
        if t < &Rational::zero() || t > self.table.measure() {
            return Err(Error::Domain(format!(
                "level {} outside [0, {}]",
                t,
                self.table.measure()
            )));
        }
        let j = self.t_breaks.partition_point(|s| s <= t);
        let j = j.min(self.values.len()); // t == |K| falls into the last cell
        Ok(self.values[j - 1].clone())
    }

    /// `f(x) = g(π_K(x))` for `x ∈ K`.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let t = self.table.project(x)?;
        self.value_at_level(&t)
    }

    /// The exact antiderivative in the measure coordinate.
    pub fn primitive(&self) -> Primitive {
        let mut points = Vec::with_capacity(self.t_breaks.len());
        let mut acc = Rational::zero();
        points.push((self.t_breaks[0].clone(), acc.clone()));
        for (j, value) in self.values.iter().enumerate() {
            acc += value * (&self.t_breaks[j + 1] - &self.t_breaks[j]);
            points.push((self.t_breaks[j + 1].clone(), acc.clone()));
        }
        Primitive {
            table: self.table.clone(),
            as_pl: PiecewiseLinear::new(points).unwrap(),
        }
    }

    /// `J_K f(x)` for `x ∈ K`.
    pub fn primitive_at(&self, x: &Rational) -> Result<Rational> {
        let t = self.table.project(x)?;
        self.primitive().as_pl.eval(&t)
    }

    /// The Alexiewicz norm `sup_x |J_K f(x)|`, exact. Valid as the sup of the
    /// profile because `π_K` is surjective onto `[0, |K|]`.
    pub fn alexiewicz_norm(&self) -> Rational {
        self.primitive().as_pl.sup_abs()
    }

    /// `Ψ_K(J_K f)`: the Lipschitz profile `G` with `G(0) = 0` whose slopes
    /// are the cell values.
    pub fn embed(&self) -> PiecewiseLinear {
        self.primitive().as_pl
    }

    /// Pointwise linear combination; both operands must share the domain set.
    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        if self.domain() != other.domain() {
            return Err(Error::DomainMismatch);
        }
        let mut breaks: Vec<Rational> = self
            .t_breaks
            .iter()
            .chain(other.t_breaks.iter())
            .cloned()
            .collect();
        breaks.sort();
        breaks.dedup();
        let values = breaks
            .windows(2)
            .map(|w| Ok(self.value_at_level(&w[0])? + other.value_at_level(&w[0])?))
            .collect::<Result<Vec<_>>>()?;
        StepFunction::new(self.domain(), breaks, values)
    }

    pub fn scale(&self, c: &Rational) -> StepFunction {
        let mut f = StepFunction {
            table: self.table.clone(),
            t_breaks: self.t_breaks.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        };
        f.merge_equal_cells();
        f
    }

    pub fn neg(&self) -> StepFunction {
        self.scale(&Rational::from_integer((-1).into()))
    }
}

impl Primitive {
    pub fn as_pl(&self) -> &PiecewiseLinear {
        &self.as_pl
    }

    /// `J_K f(x) = G(π_K(x))`.
    pub fn at(&self, x: &Rational) -> Result<Rational> {
        self.as_pl.eval(&self.table.project(x)?)
    }
}

/// Recovers the step function from its profile: the surjectivity direction of
/// the embedding. Cell values are the slopes of `G`.
pub fn unembed(domain: &CompactSet, profile: &PiecewiseLinear) -> Result<StepFunction> {
    let measure = domain.measure();
    let (lo, hi) = profile.domain();
    if !lo.is_zero() || *hi != measure {
        return Err(Error::Domain(format!(
            "profile domain [{}, {}] is not [0, {}]",
            lo, hi, measure
        )));
    }
    if !profile.values()[0].is_zero() {
        return Err(Error::Domain("profile must vanish at 0".into()));
    }
    let values = profile.slopes().collect();
    StepFunction::new(domain, profile.breakpoints().to_vec(), values)
}
