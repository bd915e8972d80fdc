//! Lifting an interval-level lipeomorphism `ψ` to an increasing bijection
//! `φ : M → K` with `π_K ∘ φ = ψ ∘ π_M`, together with the selector map
//! `φ_σ`, their finite difference set, exact Lipschitz constants, and the
//! affine gap extension.
//!
//! The lift is built directly from finite data: each positive-length
//! component of `M` transports onto a single component of `K` through the
//! measure coordinates, and isolated points go through the unique fiber
//! order-isomorphisms. The Lipschitz constant of the result is the maximum of
//! the finitely many piece slopes and gap length ratios: a difference
//! quotient across several pieces is a weighted mediant of the piece slopes,
//! `(A₁+A₂)/(B₁+B₂) ≤ max(Aᵢ/Bᵢ)`, so the per-piece maximum already bounds
//! every quotient.

use num_traits::One;

use crate::compatibility::{check_fiber_compatibility, gap_correspondence, GapCorrespondence};
use crate::pl::PiecewiseLinear;
use crate::projection::ProjectionTable;
use crate::rational::Rational;
use crate::set::CompactSet;
use crate::{Error, Result};

/// Image of one component of the source set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentImage {
    /// Increasing PL map from a positive-length component into the target.
    Interval(PiecewiseLinear),
    /// Image of an isolated point, from its fiber's order-isomorphism.
    Point(Rational),
}

/// The lifted strictly increasing bijection `φ : M → K`, with its exact
/// bi-Lipschitz constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedMap {
    source: CompactSet,
    target: CompactSet,
    /// Aligned with the components of `source`.
    images: Vec<ComponentImage>,
    lip_forward: Rational,
    lip_inverse: Rational,
}

/// The extension of `φ` to `[min M, max M]`, affine across each gap of `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExtension {
    pub as_pl: PiecewiseLinear,
}

/// The selector map `φ_σ = σ_K ∘ ψ ∘ π_M`, which exists for every valid `ψ`
/// whether or not a continuous lift does.
#[derive(Debug, Clone)]
pub struct SelectorMap {
    table_m: ProjectionTable,
    table_k: ProjectionTable,
    psi: PiecewiseLinear,
}

impl SelectorMap {
    pub fn new(k: &CompactSet, m: &CompactSet, psi: &PiecewiseLinear) -> Result<Self> {
        crate::compatibility::validate_psi(psi, k, m)?;
        Ok(SelectorMap {
            table_m: ProjectionTable::new(m),
            table_k: ProjectionTable::new(k),
            psi: psi.clone(),
        })
    }

    pub fn eval(&self, y: &Rational) -> Result<Rational> {
        let s = self.table_m.project(y)?;
        self.table_k.selector(&self.psi.eval(&s)?)
    }
}

/// Constructs the lift, or fails with the fiber-incompatibility report.
pub fn lift(k: &CompactSet, m: &CompactSet, psi: &PiecewiseLinear) -> Result<LiftedMap> {
    let matching = check_fiber_compatibility(k, m, psi)?
        .map_err(Error::FiberIncompatible)?;
    let corr = gap_correspondence(k, m, &matching)?;
    let table_m = ProjectionTable::new(m);
    let table_k = ProjectionTable::new(k);
    let cum_m = table_m.cumulative();
    let cum_k = table_k.cumulative();

    let mut images = Vec::with_capacity(m.components().len());
    for (i, (a, b)) in m.components().iter().enumerate() {
        if a == b {
            let s = &cum_m[i];
            let image = matching.image(s, a).ok_or_else(|| {
                Error::InternalInvariantViolation(format!(
                    "isolated point {a} missing from the fiber matching"
                ))
            })?;
            images.push(ComponentImage::Point(image.clone()));
            continue;
        }
        let (p, q) = (&cum_m[i], &cum_m[i + 1]);
        let (tp, tq) = (psi.eval(p)?, psi.eval(q)?);
        // the image level range must be exactly one component of K
        let mid = (&tp + &tq) / Rational::from_integer(2.into());
        let j = (0..k.components().len())
            .find(|&j| cum_k[j] < mid && mid < cum_k[j + 1])
            .ok_or_else(|| {
                Error::InternalInvariantViolation(
                    "component image levels straddle a gap of K".into(),
                )
            })?;
        if cum_k[j] != tp || cum_k[j + 1] != tq {
            return Err(Error::InternalInvariantViolation(
                "psi does not map component boundaries onto component boundaries".into(),
            ));
        }
        let (ka, _kb) = &k.components()[j];
        // φ(y) = a_K + ψ(p + (y - a)) - ψ(p), piecewise-linear in y
        let mut points = Vec::new();
        let mut push = |t: &Rational| -> Result<()> {
            let y = a + (t - p);
            let x = ka + (psi.eval(t)? - &tp);
            points.push((y, x));
            Ok(())
        };
        push(p)?;
        for t in psi.breakpoints() {
            if t > p && t < q {
                push(t)?;
            }
        }
        push(q)?;
        images.push(ComponentImage::Interval(PiecewiseLinear::new(points)?));
    }

    let (lip_forward, lip_inverse) = lipschitz_constants(&images, &corr);
    Ok(LiftedMap {
        source: m.clone(),
        target: k.clone(),
        images,
        lip_forward,
        lip_inverse,
    })
}

fn lipschitz_constants(
    images: &[ComponentImage],
    corr: &GapCorrespondence,
) -> (Rational, Rational) {
    let mut forward: Option<Rational> = None;
    let mut inverse: Option<Rational> = None;
    let mut take = |f: Rational| {
        let inv = f.clone().recip();
        if forward.as_ref().map_or(true, |cur| f > *cur) {
            forward = Some(f);
        }
        if inverse.as_ref().map_or(true, |cur| inv > *cur) {
            inverse = Some(inv);
        }
    };
    for image in images {
        if let ComponentImage::Interval(piece) = image {
            for s in piece.slopes() {
                take(s);
            }
        }
    }
    for (_, _, ratio) in &corr.pairs {
        take(ratio.clone());
    }
    // a one-point set cannot occur (positive measure), so forward is set
    (forward.unwrap(), inverse.unwrap())
}

impl LiftedMap {
    pub fn source(&self) -> &CompactSet {
        &self.source
    }

    pub fn target(&self) -> &CompactSet {
        &self.target
    }

    pub fn images(&self) -> &[ComponentImage] {
        &self.images
    }

    /// Interval pieces, one per positive-length component of the source.
    pub fn interval_pieces(&self) -> impl Iterator<Item = &PiecewiseLinear> {
        self.images.iter().filter_map(|img| match img {
            ComponentImage::Interval(pl) => Some(pl),
            ComponentImage::Point(_) => None,
        })
    }

    /// `(isolated point, image)` pairs.
    pub fn point_images(&self) -> Vec<(Rational, Rational)> {
        self.source
            .components()
            .iter()
            .zip(&self.images)
            .filter_map(|((a, _), img)| match img {
                ComponentImage::Point(x) => Some((a.clone(), x.clone())),
                ComponentImage::Interval(_) => None,
            })
            .collect()
    }

    pub fn lip_forward(&self) -> &Rational {
        &self.lip_forward
    }

    pub fn lip_inverse(&self) -> &Rational {
        &self.lip_inverse
    }

    /// `φ(y)` for `y` in the source set.
    pub fn eval(&self, y: &Rational) -> Result<Rational> {
        let i = self
            .source
            .component_index(y)
            .ok_or_else(|| Error::NotInSet(y.clone()))?;
        match &self.images[i] {
            ComponentImage::Point(x) => Ok(x.clone()),
            ComponentImage::Interval(piece) => piece.eval(y),
        }
    }

    /// The inverse lift `φ⁻¹ : K → M`.
    pub fn invert(&self) -> Result<LiftedMap> {
        // image components of an increasing bijection tile the target in order
        let mut images = Vec::with_capacity(self.images.len());
        for img in &self.images {
            images.push(match img {
                ComponentImage::Interval(piece) => ComponentImage::Interval(piece.invert()?),
                ComponentImage::Point(_) => ComponentImage::Point(Rational::one()), // placeholder
            });
        }
        // isolated points invert by pairing source points with their images
        for (i, ((a, _), img)) in self
            .source
            .components()
            .iter()
            .zip(&self.images)
            .enumerate()
        {
            if let ComponentImage::Point(_) = img {
                images[i] = ComponentImage::Point(a.clone());
            }
        }
        Ok(LiftedMap {
            source: self.target.clone(),
            target: self.source.clone(),
            images,
            lip_forward: self.lip_inverse.clone(),
            lip_inverse: self.lip_forward.clone(),
        })
    }

    /// The single PL function on `[min M, max M]` that agrees with `φ` on `M`
    /// and is affine across each gap.
    pub fn affine_extension(&self) -> AffineExtension {
        let mut points: Vec<(Rational, Rational)> = Vec::new();
        for ((a, _), img) in self.source.components().iter().zip(&self.images) {
            match img {
                ComponentImage::Point(x) => points.push((a.clone(), x.clone())),
                ComponentImage::Interval(piece) => {
                    for (t, v) in piece.breakpoints().iter().zip(piece.values()) {
                        points.push((t.clone(), v.clone()));
                    }
                }
            }
        }
        AffineExtension {
            as_pl: PiecewiseLinear::new(points).expect("lift spans at least two points"),
        }
    }
}

/// Exact conjugacy check `π_K ∘ φ = ψ ∘ π_M`: a PL identity per
/// positive-length component plus pointwise checks at all isolated and fiber
/// points. Returns the first failing point as a witness.
pub fn verify_conjugacy(
    phi: &LiftedMap,
    psi: &PiecewiseLinear,
) -> Result<std::result::Result<(), Rational>> {
    let table_m = ProjectionTable::new(phi.source());
    let table_k = ProjectionTable::new(phi.target());
    let cum_m = table_m.cumulative();
    for (i, ((a, b), img)) in phi
        .source()
        .components()
        .iter()
        .zip(phi.images())
        .enumerate()
    {
        match img {
            ComponentImage::Point(x) => {
                if table_k.project(x)? != psi.eval(&cum_m[i])? {
                    return Ok(Err(a.clone()));
                }
            }
            ComponentImage::Interval(piece) => {
                let lhs = PiecewiseLinear::compose(table_k.as_pl(), piece)?;
                // Π_M restricted to one component is linear with slope 1
                let pi_m_piece = PiecewiseLinear::new(vec![
                    (a.clone(), cum_m[i].clone()),
                    (b.clone(), cum_m[i + 1].clone()),
                ])?;
                let rhs = PiecewiseLinear::compose(psi, &pi_m_piece)?;
                if lhs != rhs {
                    let mut ts: Vec<Rational> = lhs
                        .breakpoints()
                        .iter()
                        .chain(rhs.breakpoints().iter())
                        .cloned()
                        .collect();
                    ts.sort();
                    ts.dedup();
                    for t in ts {
                        if lhs.eval(&t)? != rhs.eval(&t)? {
                            return Ok(Err(t));
                        }
                    }
                }
            }
        }
    }
    // fiber points
    for s in table_m.exceptional_set() {
        for y in table_m.fiber(&s)?.points {
            if table_k.project(&phi.eval(&y)?)? != psi.eval(&s)? {
                return Ok(Err(y));
            }
        }
    }
    Ok(Ok(()))
}

/// The exact finite set `{y ∈ M : φ(y) ≠ φ_σ(y)}`, computed by pointwise
/// comparison over the exceptional fibers (the only candidates: off them the
/// singleton fiber forces agreement).
pub fn difference_set(phi: &LiftedMap, psi: &PiecewiseLinear) -> Result<Vec<Rational>> {
    let sigma = SelectorMap::new(phi.target(), phi.source(), psi)?;
    let table_m = ProjectionTable::new(phi.source());
    let mut diff = Vec::new();
    for s in table_m.exceptional_set() {
        for y in table_m.fiber(&s)?.points {
            if phi.eval(&y)? != sigma.eval(&y)? {
                diff.push(y);
            }
        }
    }
    Ok(diff)
}

/// `b − a = (π_K(b) − π_K(a)) + Σ λ(gap ⊆ (a, b))`, returned as the measure
/// increment plus the list of gap lengths. The identity is asserted.
pub fn interval_decomposition(
    k: &CompactSet,
    a: &Rational,
    b: &Rational,
) -> Result<(Rational, Vec<Rational>)> {
    if !k.contains(a) {
        return Err(Error::NotInSet(a.clone()));
    }
    if !k.contains(b) {
        return Err(Error::NotInSet(b.clone()));
    }
    if a >= b {
        return Err(Error::BadOrder(a.clone(), b.clone()));
    }
    let table = ProjectionTable::new(k);
    let increment = table.project(b)? - table.project(a)?;
    let gap_lengths: Vec<Rational> = k
        .gaps()
        .iter()
        .filter(|g| &g.left >= a && &g.right <= b)
        .map(|g| g.length())
        .collect();
    let total: Rational = gap_lengths.iter().cloned().sum();
    debug_assert_eq!(&increment + &total, b - a);
    Ok((increment, gap_lengths))
}

/// Exact constants plus the check against the theoretical bounds
/// `lip(φ) ≤ ‖ψ'‖_∞ + C` and `lip(φ⁻¹) ≤ ‖(ψ⁻¹)'‖_∞ + C`.
pub fn lipschitz_report(
    phi: &LiftedMap,
    psi: &PiecewiseLinear,
    gap_constant: &Rational,
) -> Result<(Rational, Rational, bool)> {
    let (_, psi_max) = psi.slope_bounds();
    let (_, psi_inv_max) = psi.invert()?.slope_bounds();
    let ok = *phi.lip_forward() <= &psi_max + gap_constant
        && *phi.lip_inverse() <= &psi_inv_max + gap_constant;
    Ok((phi.lip_forward().clone(), phi.lip_inverse().clone(), ok))
}
