//! Seeded random generators for sets, step functions, lipeomorphisms, and
//! compatible pairs. Everything is driven by a caller-supplied RNG so that
//! property suites and the CLI reproduce byte-identical runs from a seed.

use num_traits::Zero;
use rand::Rng;

use crate::isometry::IsometryDescriptor;
use crate::pl::PiecewiseLinear;
use crate::rational::{rat, Rational};
use crate::set::CompactSet;

/// A rational in roughly `[-3, 3]` with a small denominator.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let denom = rng.gen_range(1..=8i64);
    let numer = rng.gen_range(-3 * denom..=3 * denom);
    rat(numer, denom)
}

/// A positive rational in roughly `(0, 3]`.
pub fn random_positive_rational<R: Rng>(rng: &mut R) -> Rational {
    let denom = rng.gen_range(1..=8i64);
    let numer = rng.gen_range(1..=3 * denom);
    rat(numer, denom)
}

/// A random compact set with 1–4 components, mixing positive-length
/// intervals and isolated points, always of positive total measure.
pub fn random_compact_set<R: Rng>(rng: &mut R) -> CompactSet {
    let component_count = rng.gen_range(1..=4usize);
    let mut intervals = Vec::with_capacity(component_count);
    let mut cursor = random_rational(rng);
    let mut has_length = false;
    for i in 0..component_count {
        let len = if rng.gen_bool(1.0 / 3.0) && (has_length || i + 1 < component_count) {
            Rational::zero() // isolated point
        } else {
            has_length = true;
            random_positive_rational(rng)
        };
        let end = &cursor + &len;
        intervals.push((cursor.clone(), end.clone()));
        cursor = end + random_positive_rational(rng); // gap
    }
    CompactSet::new(intervals).expect("generator always yields positive measure")
}

/// Distinct interior cut fractions `j/16`, scaled to `[0, measure]`.
fn random_cuts<R: Rng>(rng: &mut R, measure: &Rational, count: usize) -> Vec<Rational> {
    let mut sixteenths: Vec<i64> = (1..16).collect();
    for i in (1..sixteenths.len()).rev() {
        sixteenths.swap(i, rng.gen_range(0..=i));
    }
    let mut chosen: Vec<i64> = sixteenths.into_iter().take(count).collect();
    chosen.sort_unstable();
    chosen.iter().map(|&j| measure * rat(j, 16)).collect()
}

/// A random step function on `k` with 1–5 cells and small rational values.
pub fn random_step_function<R: Rng>(rng: &mut R, k: &CompactSet) -> crate::StepFunction {
    let measure = k.measure();
    let cells = rng.gen_range(1..=5usize);
    let mut breaks = vec![Rational::zero()];
    breaks.extend(random_cuts(rng, &measure, cells - 1));
    breaks.push(measure);
    let values = (0..cells).map(|_| random_rational(rng)).collect();
    crate::StepFunction::new(k, breaks, values).expect("generated partition is valid")
}

/// A random increasing PL lipeomorphism `[0, domain_hi] → [0, range_hi]`.
pub fn random_increasing_pl<R: Rng>(
    rng: &mut R,
    domain_hi: &Rational,
    range_hi: &Rational,
) -> PiecewiseLinear {
    let interior = rng.gen_range(0..=3usize);
    let mut breaks = vec![Rational::zero()];
    breaks.extend(random_cuts(rng, domain_hi, interior));
    breaks.push(domain_hi.clone());
    let mut values = vec![Rational::zero()];
    values.extend(random_cuts(rng, range_hi, interior));
    values.push(range_hi.clone());
    PiecewiseLinear::from_breaks_values(breaks, values).expect("strictly increasing by construction")
}

/// A random descriptor between two given sets.
pub fn random_descriptor<R: Rng>(
    rng: &mut R,
    source: &CompactSet,
    target: &CompactSet,
) -> IsometryDescriptor {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let psi = random_increasing_pl(rng, &target.measure(), &source.measure());
    IsometryDescriptor::new(sign, psi, source.clone(), target.clone())
        .expect("generated psi satisfies the descriptor invariants")
}

/// Gap surgery: builds from `k` a set `m` with the same component pattern but
/// rescaled component and gap lengths, together with the piecewise-linear
/// `ψ : [0, |m|] → [0, |k|]` that transports measure coordinates. The pair is
/// fiber-compatible with `k` by construction.
pub fn gap_surgery<R: Rng>(rng: &mut R, k: &CompactSet) -> (CompactSet, PiecewiseLinear) {
    let mut intervals = Vec::with_capacity(k.components().len());
    let mut cursor = k.min().clone();
    // cumulative measure pairs (in m, in k) at component boundaries
    let mut m_cum = vec![Rational::zero()];
    let mut k_cum = vec![Rational::zero()];
    let mut prev_end: Option<Rational> = None;
    for (a, b) in k.components() {
        if let Some(end) = prev_end {
            let gap = a - &end;
            cursor += gap * random_positive_rational(rng);
        }
        let len = b - a;
        let new_len = if len.is_zero() {
            Rational::zero()
        } else {
            &len * random_positive_rational(rng)
        };
        intervals.push((cursor.clone(), &cursor + &new_len));
        cursor += &new_len;
        m_cum.push(m_cum.last().unwrap() + new_len);
        k_cum.push(k_cum.last().unwrap() + len);
        prev_end = Some(b.clone());
    }
    let m = CompactSet::new(intervals).expect("surgery preserves positive measure");
    // drop repeated boundaries coming from isolated points
    let mut points: Vec<(Rational, Rational)> = Vec::new();
    for (s, t) in m_cum.into_iter().zip(k_cum) {
        if points.last().map(|(p, _)| p) != Some(&s) {
            points.push((s, t));
        }
    }
    let psi = PiecewiseLinear::new(points).expect("cumulative boundaries are increasing");
    (m, psi)
}

/// A random fiber-compatible triple `(k, m, ψ)`.
pub fn random_compatible_triple<R: Rng>(
    rng: &mut R,
) -> (CompactSet, CompactSet, PiecewiseLinear) {
    let k = random_compact_set(rng);
    let (m, psi) = gap_surgery(rng, &k);
    (k, m, psi)
}
