//! A single place for the end-to-end correctness checks: worked examples with
//! known answers plus seeded randomized law checks. The CLI `verify` command
//! and the acceptance suite both run these, so a regression shows up in both.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alexiewicz::unembed;
use crate::compatibility::{
    check_fiber_compatibility, check_gap_compatibility, compatibility_growth_curve,
};
use crate::isometry::{canonical_isometry, recover_descriptor};
use crate::lifting::{difference_set, interval_decomposition, lift, lipschitz_report, verify_conjugacy};
use crate::pl::PiecewiseLinear;
use crate::projection::ProjectionTable;
use crate::rational::{rat, Rational};
use crate::sampling::{
    random_compact_set, random_compatible_triple, random_descriptor, random_rational,
    random_step_function,
};
use crate::set::CompactSet;
use crate::{Result, StepFunction};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<std::result::Result<String, String>>) -> CheckResult {
    match run() {
        Ok(Ok(detail)) => CheckResult {
            name,
            passed: true,
            detail,
        },
        Ok(Err(detail)) => CheckResult {
            name,
            passed: false,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn e_set_mismatch() -> Result<std::result::Result<String, String>> {
    let k = CompactSet::new(vec![(int(0), int(1))])?;
    let m = CompactSet::new(vec![(int(0), rat(1, 2)), (int(1), int(1))])?;
    let psi = PiecewiseLinear::linear_through_origin(rat(1, 2), &int(2))?;
    match check_fiber_compatibility(&k, &m, &psi)? {
        Err(report) if report.reason.code() == "e-set-mismatch" && report.level == rat(1, 2) => {
            Ok(Ok(format!("rejected at level {}", report.level)))
        }
        other => Ok(Err(format!("expected e-set mismatch at 1/2, got {other:?}"))),
    }
}

fn fiber_cardinality_mismatch() -> Result<std::result::Result<String, String>> {
    let k = CompactSet::new(vec![(int(0), int(1)), (int(2), int(2))])?;
    let m = CompactSet::new(vec![(int(0), int(1)), (int(2), int(2)), (int(3), int(3))])?;
    let psi = PiecewiseLinear::identity(int(0), int(1))?;
    match check_fiber_compatibility(&k, &m, &psi)? {
        Err(report) if report.reason.code() == "fiber-cardinality" && report.level == int(1) => {
            Ok(Ok("rejected: 3-point fiber vs 2-point fiber at level 1".into()))
        }
        other => Ok(Err(format!(
            "expected fiber-cardinality mismatch at 1, got {other:?}"
        ))),
    }
}

fn growth_curve(n_max: u32) -> Result<std::result::Result<String, String>> {
    let curve = compatibility_growth_curve(1..=n_max)?;
    if curve[0].1 != Rational::one() {
        return Ok(Err(format!("C(1) = {} instead of 1", curve[0].1)));
    }
    for (n, c) in &curve[1..] {
        if c != &int(*n as i64) {
            return Ok(Err(format!("C({n}) = {c} instead of {n}")));
        }
    }
    Ok(Ok(format!("C(1) = 1 and C(N) = N for 2 <= N <= {n_max}")))
}

fn norm_via_direct_measure(f: &StepFunction) -> Result<Rational> {
    // independent oracle: evaluate J at every component endpoint and every
    // x-preimage of the function's t-breaks, take the max of |J|
    let k = f.domain();
    let table = ProjectionTable::new(k);
    let mut candidates: Vec<Rational> = Vec::new();
    for (a, b) in k.components() {
        candidates.push(a.clone());
        candidates.push(b.clone());
    }
    for t in f.t_breaks() {
        candidates.push(table.selector(t)?);
    }
    let mut best = Rational::zero();
    for x in candidates {
        let j = f.primitive_at(&x)?;
        let a = crate::rational::abs(&j);
        if a > best {
            best = a;
        }
    }
    Ok(best)
}

fn norm_oracle(seed: u64, rounds: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..rounds {
        let k = random_compact_set(&mut rng);
        let f = random_step_function(&mut rng, &k);
        let fast = f.alexiewicz_norm();
        let slow = norm_via_direct_measure(&f)?;
        if fast != slow {
            return Ok(Err(format!("round {i}: norm {fast} but direct sup {slow}")));
        }
    }
    Ok(Ok(format!("{rounds} random functions agree with direct sup")))
}

fn embedding_laws(seed: u64, rounds: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..rounds {
        let k = random_compact_set(&mut rng);
        let f = random_step_function(&mut rng, &k);
        let g = random_step_function(&mut rng, &k);
        let c = random_rational(&mut rng);
        let ef = f.embed();
        // isometry of the embedding
        if f.alexiewicz_norm() != ef.sup_abs() {
            return Ok(Err(format!("round {i}: embedding is not isometric")));
        }
        // linearity
        let sum = f.add(&g.scale(&c))?;
        if sum.embed() != ef.add(&g.embed().scale(&c))? {
            return Ok(Err(format!("round {i}: embedding is not linear")));
        }
        // round trip
        if unembed(&k, &ef)? != f {
            return Ok(Err(format!("round {i}: unembed does not invert embed")));
        }
    }
    Ok(Ok(format!("{rounds} rounds: isometric, linear, invertible")))
}

fn isometry_laws(seed: u64, rounds: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..rounds {
        let source = random_compact_set(&mut rng);
        let target = random_compact_set(&mut rng);
        let d = random_descriptor(&mut rng, &source, &target);
        let f = random_step_function(&mut rng, &source);
        let tf = d.apply(&f)?;
        if tf.alexiewicz_norm() != f.alexiewicz_norm() {
            return Ok(Err(format!("round {i}: norm not preserved")));
        }
        if d.verify_profile_identity(&f)?.is_err() {
            return Ok(Err(format!("round {i}: profile identity fails")));
        }
        // inverse descriptor undoes the map
        if d.invert().apply(&tf)? != f {
            return Ok(Err(format!("round {i}: inverse does not invert")));
        }
    }
    Ok(Ok(format!(
        "{rounds} rounds: norms preserved, profiles conjugate, inverses exact"
    )))
}

fn recovery_law(seed: u64, rounds: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..rounds {
        let source = random_compact_set(&mut rng);
        let target = random_compact_set(&mut rng);
        let d = random_descriptor(&mut rng, &source, &target);
        let opaque = |f: &StepFunction| d.apply(f).expect("domain matches");
        let recovered = recover_descriptor(&source, &target, opaque, 3, seed ^ i as u64)?;
        if recovered != d {
            return Ok(Err(format!("round {i}: recovered a different descriptor")));
        }
    }
    Ok(Ok(format!("{rounds} descriptors recovered exactly")))
}

fn canonical_law(seed: u64, rounds: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..rounds {
        let source = random_compact_set(&mut rng);
        let target = random_compact_set(&mut rng);
        let d = canonical_isometry(&source, &target);
        let f = random_step_function(&mut rng, &source);
        if d.apply(&f)?.alexiewicz_norm() != f.alexiewicz_norm() {
            return Ok(Err(format!("round {i}: canonical isometry distorts norm")));
        }
        // composition with the inverse is the identity descriptor
        let id = d.invert().compose_after(&d)?;
        if id != crate::IsometryDescriptor::identity(&source) {
            return Ok(Err(format!("round {i}: d⁻¹ ∘ d is not the identity")));
        }
    }
    Ok(Ok(format!(
        "{rounds} canonical pairs: isometric, invertible to identity"
    )))
}

fn lifting_laws(seed: u64, rounds: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..rounds {
        let (k, m, psi) = random_compatible_triple(&mut rng);
        let phi = lift(&k, &m, &psi)?;
        if let Err(witness) = verify_conjugacy(&phi, &psi)? {
            return Ok(Err(format!("round {i}: conjugacy fails at {witness}")));
        }
        let corr = match check_gap_compatibility(&k, &m, &psi)? {
            Ok(corr) => corr,
            Err(r) => return Ok(Err(format!("round {i}: triple not compatible: {r}"))),
        };
        let (_, _, bounds_ok) = lipschitz_report(&phi, &psi, &corr.constant)?;
        if !bounds_ok {
            return Ok(Err(format!("round {i}: Lipschitz bounds violated")));
        }
        // difference set = non-minimal fiber points over exceptional levels
        let table_m = ProjectionTable::new(&m);
        let mut predicted = Vec::new();
        for s in table_m.exceptional_set() {
            predicted.extend(table_m.fiber(&s)?.points[1..].iter().cloned());
        }
        if difference_set(&phi, &psi)? != predicted {
            return Ok(Err(format!("round {i}: difference set mismatch")));
        }
        // round trip through the inverse
        let inv = phi.invert()?;
        for (a, b) in m.components() {
            for y in [a.clone(), (a + b) / int(2), b.clone()] {
                if inv.eval(&phi.eval(&y)?)? != y {
                    return Ok(Err(format!("round {i}: inverse fails at {y}")));
                }
            }
        }
    }
    Ok(Ok(format!(
        "{rounds} compatible triples: conjugacy, bounds, difference set, inverse"
    )))
}

fn decomposition_law(seed: u64, rounds: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0usize;
    while done < rounds {
        let k = random_compact_set(&mut rng);
        let f = random_step_function(&mut rng, &k); // advance the stream
        let _ = f;
        let a = k.min().clone();
        let b = k.max().clone();
        if a == b {
            continue;
        }
        let (increment, gaps) = interval_decomposition(&k, &a, &b)?;
        let total: Rational = gaps.iter().cloned().sum();
        if &increment + &total != &b - &a {
            return Ok(Err(format!("hull decomposition fails on {k:?}")));
        }
        // also an interior pair when a positive component exists
        for (p, q) in k.components() {
            if p < q {
                let (inc, gs) = interval_decomposition(&k, p, q)?;
                if !gs.is_empty() || inc != q - p {
                    return Ok(Err(format!("component decomposition fails on {k:?}")));
                }
                break;
            }
        }
        done += 1;
    }
    Ok(Ok(format!("{rounds} random sets decompose exactly")))
}

/// Runs every check. `seed` drives the randomized suites; `n_max` sets the
/// growth-curve truncation depth.
pub fn run_all(seed: u64, n_max: u32) -> Vec<CheckResult> {
    vec![
        check("e-set-mismatch-example", e_set_mismatch),
        check("fiber-cardinality-example", fiber_cardinality_mismatch),
        check("growth-curve", || growth_curve(n_max)),
        check("norm-direct-oracle", || norm_oracle(seed, 100)),
        check("embedding-laws", || embedding_laws(seed.wrapping_add(1), 100)),
        check("isometry-laws", || isometry_laws(seed.wrapping_add(2), 100)),
        check("descriptor-recovery", || recovery_law(seed.wrapping_add(3), 25)),
        check("canonical-isometry", || canonical_law(seed.wrapping_add(4), 50)),
        check("lifting-laws", || lifting_laws(seed.wrapping_add(5), 50)),
        check("interval-decomposition", || {
            decomposition_law(seed.wrapping_add(6), 100)
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        for result in run_all(0, 12) {
            assert!(result.passed, "{}: {}", result.name, result.detail);
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let a: Vec<String> = run_all(7, 8).iter().map(|r| r.detail.clone()).collect();
        let b: Vec<String> = run_all(7, 8).iter().map(|r| r.detail.clone()).collect();
        assert_eq!(a, b);
    }
}
