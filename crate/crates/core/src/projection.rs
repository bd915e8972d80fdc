//! The measure projection `π_K`, its interval extension `Π_K`, the
//! left-endpoint selector `σ_K`, fibers, the exceptional set `E_K`, and the
//! coordinate maps between functions on `K` and functions on `[0, |K|]`.

use num_traits::Zero;

use crate::pl::PiecewiseLinear;
use crate::rational::Rational;
use crate::set::CompactSet;
use crate::{Error, Result};

/// Cached projection data for one compact set: the cumulative measure at each
/// component boundary and `Π_K` as a piecewise-linear function (slope 1 on
/// components, slope 0 on gaps).
///
/// Built once per set; immutable afterwards.
#[derive(Debug, Clone)]
pub struct ProjectionTable {
    owner: CompactSet,
    /// `cumulative[i]` is the measure of the first `i` components.
    cumulative: Vec<Rational>,
    as_pl: PiecewiseLinear,
}

/// The full preimage `π_K⁻¹(t)`, finite for finitely-presented sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub level: Rational,
    /// Increasing; more than one point exactly when `level ∈ E_K`.
    pub points: Vec<Rational>,
}

impl ProjectionTable {
    pub fn new(owner: &CompactSet) -> Self {
        let mut cumulative = Vec::with_capacity(owner.components().len() + 1);
        cumulative.push(Rational::zero());
        for (a, b) in owner.components() {
            let prev = cumulative.last().unwrap().clone();
            cumulative.push(prev + (b - a));
        }
        let mut points: Vec<(Rational, Rational)> = Vec::new();
        for (i, (a, b)) in owner.components().iter().enumerate() {
            for (x, c) in [(a, &cumulative[i]), (b, &cumulative[i + 1])] {
                if points.last().map(|(t, _)| t) != Some(x) {
                    points.push((x.clone(), c.clone()));
                }
            }
        }
        let as_pl = PiecewiseLinear::new(points).expect("positive measure gives >= 2 points");
        ProjectionTable {
            owner: owner.clone(),
            cumulative,
            as_pl,
        }
    }

    pub fn owner(&self) -> &CompactSet {
        &self.owner
    }

    pub fn measure(&self) -> &Rational {
        self.cumulative.last().unwrap()
    }

    pub fn cumulative(&self) -> &[Rational] {
        &self.cumulative
    }

    /// `Π_K` as a piecewise-linear function on `[min K, max K]`.
    pub fn as_pl(&self) -> &PiecewiseLinear {
        &self.as_pl
    }

    /// `π_K(x) = λ([min K, x] ∩ K)`; errors if `x ∉ K`.
    pub fn project(&self, x: &Rational) -> Result<Rational> {
        let i = self
            .owner
            .component_index(x)
            .ok_or_else(|| Error::NotInSet(x.clone()))?;
        let (a, _) = &self.owner.components()[i];
        Ok(&self.cumulative[i] + (x - a))
    }

    /// `Π_K(x)` for any `x ∈ [min K, max K]`; constant on each gap.
    pub fn extended_project(&self, x: &Rational) -> Result<Rational> {
        self.as_pl
            .eval(x)
            .map_err(|_| Error::Domain(format!("{} outside [{}, {}]", x, self.owner.min(), self.owner.max())))
    }

    fn check_level(&self, t: &Rational) -> Result<()> {
        if t < &Rational::zero() || t > self.measure() {
            return Err(Error::Domain(format!(
                "level {} outside [0, {}]",
                t,
                self.measure()
            )));
        }
        Ok(())
    }

    /// The left-endpoint selector `σ_K(t) = min π_K⁻¹(t)`.
    pub fn selector(&self, t: &Rational) -> Result<Rational> {
        Ok(self.fiber(t)?.points.into_iter().next().unwrap())
    }

    /// The full fiber over `t`, enumerated from the cumulative table.
    pub fn fiber(&self, t: &Rational) -> Result<Fiber> {
        self.check_level(t)?;
        let mut points: Vec<Rational> = Vec::new();
        for (i, (a, b)) in self.owner.components().iter().enumerate() {
            let (lo, hi) = (&self.cumulative[i], &self.cumulative[i + 1]);
            if t == lo {
                points.push(a.clone());
            } else if t == hi {
                points.push(b.clone());
            } else if lo < t && t < hi {
                points.push(a + (t - lo));
            }
        }
        points.dedup();
        debug_assert!(!points.is_empty(), "projection is surjective");
        Ok(Fiber {
            level: t.clone(),
            points,
        })
    }

    /// `E_K`: the finite set of levels with a nontrivial fiber. These are
    /// exactly the gap levels.
    pub fn exceptional_set(&self) -> Vec<Rational> {
        let mut levels: Vec<Rational> = (1..self.owner.components().len())
            .map(|i| self.cumulative[i].clone())
            .collect();
        levels.dedup();
        levels
    }
}

/// An element of `X_K` represented as the pair (domain, profile in the
/// measure coordinate): the function is `x ↦ profile(π_K(x))`, so
/// fiber-constancy holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionOnSet {
    table: ProjectionTable,
    profile: PiecewiseLinear,
}

impl FunctionOnSet {
    pub fn domain(&self) -> &CompactSet {
        self.table.owner()
    }

    pub fn profile(&self) -> &PiecewiseLinear {
        &self.profile
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.profile.eval(&self.table.project(x)?)
    }

    /// `sup_K |F|`; equals the sup of the profile since `π_K` is surjective.
    pub fn sup_abs(&self) -> Rational {
        self.profile.sup_abs()
    }
}

impl PartialEq for ProjectionTable {
    fn eq(&self, other: &Self) -> bool {
        self.owner == other.owner
    }
}

impl Eq for ProjectionTable {}

/// `Φ_K G = G ∘ π_K`: pulls a profile on `[0, |K|]` back to the set.
pub fn phi_map(table: &ProjectionTable, profile: &PiecewiseLinear) -> Result<FunctionOnSet> {
    let (lo, hi) = profile.domain();
    if !lo.is_zero() || hi != table.measure() {
        return Err(Error::Domain(format!(
            "profile domain [{}, {}] is not the measure interval [0, {}]",
            lo,
            hi,
            table.measure()
        )));
    }
    Ok(FunctionOnSet {
        table: table.clone(),
        profile: profile.clone(),
    })
}

/// `Ψ_K F = F ∘ σ_K`: the inverse of [`phi_map`]. With the by-construction
/// representation this is just the stored profile.
pub fn psi_map(f: &FunctionOnSet) -> PiecewiseLinear {
    f.profile.clone()
}

/// Validates externally supplied `(x, F(x))` samples for membership in `X_K`:
/// any two samples on the same fiber must carry the same value.
pub fn check_fiber_constant(
    table: &ProjectionTable,
    samples: &[(Rational, Rational)],
) -> Result<()> {
    let mut by_level: Vec<(Rational, &Rational)> = Vec::with_capacity(samples.len());
    for (x, v) in samples {
        by_level.push((table.project(x)?, v));
    }
    by_level.sort_by(|a, b| a.0.cmp(&b.0));
    for w in by_level.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
            return Err(Error::NotFiberConstant {
                level: w[0].0.clone(),
            });
        }
    }
    Ok(())
}
