//! Construction, application, verification, and black-box recovery of the
//! surjective linear isometries between Alexiewicz-normed spaces.
//!
//! Every such isometry `T : L∞(K) → L∞(M)` is classified by a sign `ε` and an
//! increasing lipeomorphism `ψ : [0, |M|] → [0, |K|]`. Here `ψ` is restricted
//! to increasing piecewise-linear maps with rational data: that is exactly the
//! class under which step functions are closed and every identity is
//! decidable.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alexiewicz::StepFunction;
use crate::pl::PiecewiseLinear;
use crate::rational::Rational;
use crate::set::CompactSet;
use crate::{Error, Result};

/// The classification data of a surjective linear isometry
/// `T : L∞(source) → L∞(target)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryDescriptor {
    sign: i8,
    /// Increasing PL lipeomorphism `[0, |target|] → [0, |source|]`.
    psi: PiecewiseLinear,
    source: CompactSet,
    target: CompactSet,
}

impl IsometryDescriptor {
    pub fn new(
        sign: i8,
        psi: PiecewiseLinear,
        source: CompactSet,
        target: CompactSet,
    ) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidDescriptor(format!(
                "sign must be +1 or -1, got {sign}"
            )));
        }
        validate_psi(&psi, &source, &target)?;
        Ok(IsometryDescriptor {
            sign,
            psi,
            source,
            target,
        })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn sign_rational(&self) -> Rational {
        Rational::from_integer(self.sign.into())
    }

    pub fn psi(&self) -> &PiecewiseLinear {
        &self.psi
    }

    pub fn source(&self) -> &CompactSet {
        &self.source
    }

    pub fn target(&self) -> &CompactSet {
        &self.target
    }

    /// The identity isometry on `K`.
    pub fn identity(k: &CompactSet) -> Self {
        let id = PiecewiseLinear::identity(Rational::zero(), k.measure()).unwrap();
        IsometryDescriptor::new(1, id, k.clone(), k.clone()).unwrap()
    }

    /// `Tf` for a step function `f` on the source set, computed exactly in
    /// the measure coordinate: output cells are `ψ⁻¹(f-cells)` refined by the
    /// breakpoints of `ψ`, with value `ε · g(ψ(mid)) · ψ'(mid)` per cell.
    pub fn apply(&self, f: &StepFunction) -> Result<StepFunction> {
        if f.domain() != &self.source {
            return Err(Error::DomainMismatch);
        }
        let psi_inv = self.psi.invert()?;
        let mut breaks: Vec<Rational> = f
            .t_breaks()
            .iter()
            .map(|s| psi_inv.eval(s))
            .collect::<Result<Vec<_>>>()?;
        breaks.extend(self.psi.breakpoints().iter().cloned());
        breaks.sort();
        breaks.dedup();
        let two = Rational::from_integer(2.into());
        let values = breaks
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / &two;
                let weight = self.psi.slope_at(&mid)?;
                let g = f.value_at_level(&self.psi.eval(&mid)?)?;
                Ok(self.sign_rational() * g * weight)
            })
            .collect::<Result<Vec<_>>>()?;
        StepFunction::new(&self.target, breaks, values)
    }

    /// Literal pointwise evaluation `ε · f(σ_K(ψ(π_M(y)))) · ψ'(π_M(y))` at a
    /// single `y` in the target set, for cross-checking [`Self::apply`].
    pub fn apply_pointwise(&self, f: &StepFunction, y: &Rational) -> Result<Rational> {
        if f.domain() != &self.source {
            return Err(Error::DomainMismatch);
        }
        let table_m = crate::projection::ProjectionTable::new(&self.target);
        let s = table_m.project(y)?;
        let t = self.psi.eval(&s)?;
        let x = f.table().selector(&t)?;
        Ok(self.sign_rational() * f.eval(&x)? * self.psi.slope_at(&s)?)
    }

    /// Checks the exact profile identity `embed(Tf) = ε · (embed(f) ∘ ψ)`.
    /// On failure returns the first breakpoint where the two sides differ.
    pub fn verify_profile_identity(&self, f: &StepFunction) -> Result<std::result::Result<(), Rational>> {
        let lhs = self.apply(f)?.embed();
        let rhs = PiecewiseLinear::compose(&f.embed(), &self.psi)?.scale(&self.sign_rational());
        if lhs == rhs {
            return Ok(Ok(()));
        }
        // first differing breakpoint of the union refinement
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
        Err(Error::InternalInvariantViolation(
            "profiles differ structurally but agree pointwise".into(),
        ))
    }

    /// The inverse isometry, from the target space back to the source.
    pub fn invert(&self) -> IsometryDescriptor {
        IsometryDescriptor::new(
            self.sign,
            self.psi.invert().expect("descriptor psi is increasing"),
            self.target.clone(),
            self.source.clone(),
        )
        .expect("inverse of a valid descriptor is valid")
    }

    /// Contravariant composition: `other.compose_after(self)` describes
    /// applying `self` first, then `other`. Requires `other.source ==
    /// self.target`.
    pub fn compose_after(&self, first: &IsometryDescriptor) -> Result<IsometryDescriptor> {
        if self.source != first.target {
            return Err(Error::DomainMismatch);
        }
        IsometryDescriptor::new(
            self.sign * first.sign,
            PiecewiseLinear::compose(&first.psi, &self.psi)?,
            first.source.clone(),
            self.target.clone(),
        )
    }
}

fn validate_psi(psi: &PiecewiseLinear, source: &CompactSet, target: &CompactSet) -> Result<()> {
    let (lo, hi) = psi.domain();
    if !lo.is_zero() || *hi != target.measure() {
        return Err(Error::InvalidDescriptor(format!(
            "psi domain [{}, {}] is not [0, |target|] = [0, {}]",
            lo,
            hi,
            target.measure()
        )));
    }
    if !psi.values()[0].is_zero() || *psi.values().last().unwrap() != source.measure() {
        return Err(Error::InvalidDescriptor(format!(
            "psi range must be [0, |source|] = [0, {}]",
            source.measure()
        )));
    }
    if !psi.is_increasing() {
        return Err(Error::InvalidDescriptor(
            "psi must have strictly positive slopes".into(),
        ));
    }
    Ok(())
}

/// The measure-rescaling isometry `ψ(t) = (|K|/|M|)·t` with `ε = +1`,
/// witnessing that any two of these spaces are linearly isometric.
pub fn canonical_isometry(source: &CompactSet, target: &CompactSet) -> IsometryDescriptor {
    let ratio = source.measure() / target.measure();
    let psi = PiecewiseLinear::linear_through_origin(target.measure(), &ratio).unwrap();
    IsometryDescriptor::new(1, psi, source.clone(), target.clone()).unwrap()
}

/// Recovers the `(ε, ψ)` descriptor of an opaque linear step-function
/// transformer `K → M`. The device: `f ≡ 1` embeds to `G(t) = t`, so the
/// transformed profile is `ε·ψ` and the descriptor can be read off directly.
/// The candidate is then validated against the constant probe and
/// `extra_probes` random step functions.
pub fn recover_descriptor<T>(
    source: &CompactSet,
    target: &CompactSet,
    transform: T,
    extra_probes: usize,
    seed: u64,
) -> Result<IsometryDescriptor>
where
    T: Fn(&StepFunction) -> StepFunction,
{
    let one = StepFunction::constant(source, Rational::one());
    let image = transform(&one);
    if image.domain() != target {
        return Err(Error::NotAnIsometry(
            "transformer output lives on the wrong set".into(),
        ));
    }
    let profile = image.embed();
    // sign of the profile at the first breakpoint past 0
    let eps = profile
        .values()
        .iter()
        .find(|v| !v.is_zero())
        .map(|v| if *v > Rational::zero() { 1i8 } else { -1i8 })
        .ok_or_else(|| Error::NotAnIsometry("transformer annihilates f ≡ 1".into()))?;
    let psi = profile.scale(&Rational::from_integer(eps.into()));
    let descriptor = IsometryDescriptor::new(eps, psi, source.clone(), target.clone())
        .map_err(|e| Error::NotAnIsometry(format!("recovered psi is invalid: {e}")))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = vec![one];
    for _ in 0..extra_probes {
        probes.push(crate::sampling::random_step_function(&mut rng, source));
    }
    for probe in &probes {
        if transform(probe) != descriptor.apply(probe)? {
            return Err(Error::NotAnIsometry(
                "transformer disagrees with the recovered descriptor on a probe".into(),
            ));
        }
    }
    Ok(descriptor)
}
