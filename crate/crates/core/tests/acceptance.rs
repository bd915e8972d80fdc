//! Acceptance gate: one test per criterion, each printing a PASS line on
//! success (run with `--nocapture` to see them; a failure prints the panic).
//! All checks are exact rational identities — no tolerances anywhere.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use alexkit_core::alexiewicz::unembed;
use alexkit_core::compatibility::{
    check_fiber_compatibility, check_gap_compatibility, compatibility_growth_curve,
};
use alexkit_core::isometry::{canonical_isometry, recover_descriptor};
use alexkit_core::lifting::{difference_set, interval_decomposition, lift, verify_conjugacy};
use alexkit_core::pl::PiecewiseLinear;
use alexkit_core::projection::ProjectionTable;
use alexkit_core::rational::{rat, Rational};
use alexkit_core::sampling::{
    random_compact_set, random_compatible_triple, random_descriptor, random_step_function,
};
use alexkit_core::set::CompactSet;
use alexkit_core::{IsometryDescriptor, StepFunction};

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn pass(n: u32, what: &str) {
    println!("PASS  criterion {n:>2}: {what}");
}

#[test]
fn criterion_01_e_set_mismatch() {
    let k = CompactSet::new(vec![(int(0), int(1))]).unwrap();
    let m = CompactSet::new(vec![(int(0), rat(1, 2)), (int(1), int(1))]).unwrap();
    let psi = PiecewiseLinear::linear_through_origin(rat(1, 2), &int(2)).unwrap();
    let report = check_fiber_compatibility(&k, &m, &psi).unwrap().unwrap_err();
    assert_eq!(report.reason.code(), "e-set-mismatch");
    assert_eq!(report.level, rat(1, 2));
    pass(1, "exceptional-set mismatch detected at level 1/2");
}

#[test]
fn criterion_02_fiber_cardinality() {
    let k = CompactSet::new(vec![(int(0), int(1)), (int(2), int(2))]).unwrap();
    let m =
        CompactSet::new(vec![(int(0), int(1)), (int(2), int(2)), (int(3), int(3))]).unwrap();
    let psi = PiecewiseLinear::identity(int(0), int(1)).unwrap();
    let report = check_fiber_compatibility(&k, &m, &psi).unwrap().unwrap_err();
    assert_eq!(report.reason.code(), "fiber-cardinality");
    assert_eq!(report.level, int(1));
    assert_eq!(format!("{report}").contains("3 points in M vs 2 in K"), true);
    pass(2, "fiber cardinality 3 vs 2 rejected at level 1");
}

#[test]
fn criterion_03_growth_curve() {
    // per-pair ratios at one truncation depth
    let tail = (int(1), int(2));
    let k = CompactSet::truncated_reciprocal(1, 50, tail.clone()).unwrap();
    let m = CompactSet::truncated_reciprocal(2, 50, tail).unwrap();
    let psi = PiecewiseLinear::identity(int(0), int(1)).unwrap();
    let corr = check_gap_compatibility(&k, &m, &psi).unwrap().unwrap();
    for (u, _, ratio) in &corr.pairs {
        if u.left.is_zero() {
            continue; // truncation gap: ratio N, checked through the curve below
        }
        // gap of M is (1/(n+1)², 1/n²): recover n and check n(n+1)/(2n+1)
        let n_sq = u.right.clone().recip();
        let n = num_traits::ToPrimitive::to_i64(&n_sq.numer().sqrt()).unwrap();
        assert_eq!(*ratio, rat(n * (n + 1), 2 * n + 1));
    }
    // C(N) = N for N in 2..=50, strictly monotone
    let curve = compatibility_growth_curve(1..=50).unwrap();
    assert_eq!(curve[0].1, int(1));
    for (n, c) in &curve[1..] {
        assert_eq!(c, &int(*n as i64));
    }
    for w in curve.windows(2) {
        assert!(w[0].1 < w[1].1, "C must grow strictly");
    }
    pass(3, "ratios n(n+1)/(2n+1) and C(N) = N for N in 2..=50");
}

fn five_hundred_cases(seed: u64, mut check: impl FnMut(&IsometryDescriptor, &StepFunction)) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..500 {
        let source = random_compact_set(&mut rng);
        let target = random_compact_set(&mut rng);
        let d = random_descriptor(&mut rng, &source, &target);
        let f = random_step_function(&mut rng, &source);
        check(&d, &f);
    }
}

#[test]
fn criterion_04_norm_preservation() {
    five_hundred_cases(1004, |d, f| {
        let tf = d.apply(f).unwrap();
        assert_eq!(tf.alexiewicz_norm(), f.alexiewicz_norm());
    });
    pass(4, "500 random isometries preserve the norm exactly");
}

#[test]
fn criterion_05_representation_identity() {
    five_hundred_cases(1004, |d, f| {
        // embed(Tf) = sign · (embed(f) ∘ psi), exactly as PL functions
        let lhs = d.apply(f).unwrap().embed();
        let rhs = PiecewiseLinear::compose(&f.embed(), d.psi())
            .unwrap()
            .scale(&d.sign_rational());
        assert_eq!(lhs, rhs);
        assert!(d.verify_profile_identity(f).unwrap().is_ok());
    });
    pass(5, "profile identity holds exactly on the same 500 cases");
}

#[test]
fn criterion_06_descriptor_recovery() {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    for i in 0..100u64 {
        let source = random_compact_set(&mut rng);
        let target = random_compact_set(&mut rng);
        let d = random_descriptor(&mut rng, &source, &target);
        let opaque = |f: &StepFunction| d.apply(f).unwrap();
        let recovered = recover_descriptor(&source, &target, opaque, 2, i).unwrap();
        assert_eq!(recovered, d);
    }
    pass(6, "100 descriptors recovered exactly from their transformers");
}

#[test]
fn criterion_07_embedding_isometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    for _ in 0..500 {
        let k = random_compact_set(&mut rng);
        let f = random_step_function(&mut rng, &k);
        let profile = f.embed();
        assert_eq!(profile.sup_abs(), f.alexiewicz_norm());
        assert_eq!(unembed(&k, &profile).unwrap(), f);
        // derivative of the profile at each cell midpoint is the cell value
        for (j, v) in f.values().iter().enumerate() {
            let mid = (&f.t_breaks()[j] + &f.t_breaks()[j + 1]) / int(2);
            assert_eq!(&profile.slope_at(&mid).unwrap(), v);
        }
    }
    pass(7, "embedding isometric and invertible on 500 random functions");
}

#[test]
fn criterion_08_projection_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    for _ in 0..100 {
        let k = random_compact_set(&mut rng);
        let table = ProjectionTable::new(&k);
        // extension is monotone 1-Lipschitz (all slopes in [0, 1]) and
        // surjective onto [0, |K|]
        let (lo, hi) = table.as_pl().slope_bounds();
        assert!(lo >= Rational::zero() && hi <= Rational::one());
        assert_eq!(table.as_pl().eval(k.min()).unwrap(), Rational::zero());
        assert_eq!(table.as_pl().eval(k.max()).unwrap(), k.measure());
        // pi ∘ sigma = id at 100 rational levels
        let measure = k.measure();
        for j in 0..100i64 {
            let t = &measure * rat(j, 99);
            let x = table.selector(&t).unwrap();
            assert_eq!(table.project(&x).unwrap(), t);
        }
        // E_K = gap levels = multi-point (selector-jump) fibers
        let gap_levels: Vec<Rational> = {
            let mut ls: Vec<Rational> = k
                .gaps()
                .iter()
                .map(|g| table.project(&g.left).unwrap())
                .collect();
            ls.dedup();
            ls
        };
        assert_eq!(table.exceptional_set(), gap_levels);
        for s in table.exceptional_set() {
            assert!(table.fiber(&s).unwrap().points.len() >= 2);
        }
    }
    pass(8, "projection/selector laws hold on 100 random sets");
}

#[test]
fn criterion_09_interval_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let mut done = 0;
    while done < 500 {
        let k = random_compact_set(&mut rng);
        // two random points of the set
        let pick = |rng: &mut ChaCha8Rng| {
            let (a, b) = &k.components()[rng.gen_range(0..k.components().len())];
            a + (b - a) * rat(rng.gen_range(0..=16), 16)
        };
        let (mut a, mut b) = (pick(&mut rng), pick(&mut rng));
        if a == b {
            continue;
        }
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let (increment, gaps) = interval_decomposition(&k, &a, &b).unwrap();
        let gap_total: Rational = gaps.iter().cloned().sum();
        assert_eq!(increment + gap_total, &b - &a);
        done += 1;
    }
    pass(9, "b - a = measure increment + gap lengths on 500 cases");
}

#[test]
fn criterion_10_lifting() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    for _ in 0..100 {
        let (k, m, psi) = random_compatible_triple(&mut rng);
        let phi = lift(&k, &m, &psi).unwrap();
        assert!(verify_conjugacy(&phi, &psi).unwrap().is_ok());

        // strictly increasing bijection: increasing on sampled pairs, hits
        // both extremes, inverse round-trips
        let inv = phi.invert().unwrap();
        let mut prev: Option<(Rational, Rational)> = None;
        for (a, b) in m.components() {
            for y in [a.clone(), (a + b) / int(2), b.clone()] {
                let x = phi.eval(&y).unwrap();
                assert_eq!(inv.eval(&x).unwrap(), y);
                if let Some((py, px)) = prev.replace((y.clone(), x.clone())) {
                    assert!(py >= y || px < x, "phi must be strictly increasing");
                }
            }
        }
        assert_eq!(phi.eval(m.min()).unwrap(), k.min().clone());
        assert_eq!(phi.eval(m.max()).unwrap(), k.max().clone());

        // difference from the selector map is exactly the non-minimal
        // exceptional fiber points
        let table_m = ProjectionTable::new(&m);
        let mut predicted = Vec::new();
        for s in table_m.exceptional_set() {
            predicted.extend(table_m.fiber(&s).unwrap().points[1..].iter().cloned());
        }
        assert_eq!(difference_set(&phi, &psi).unwrap(), predicted);

        // Lipschitz bound lip(phi) <= sup psi' + C
        let corr = check_gap_compatibility(&k, &m, &psi).unwrap().unwrap();
        let (_, psi_max) = psi.slope_bounds();
        assert!(phi.lip_forward() <= &(&psi_max + &corr.constant));

        // affine extension differentiates to psi' ∘ pi_M on component cells
        let ext = phi.affine_extension();
        for (a, b) in m.components() {
            if a == b {
                continue;
            }
            let mid = (a + b) / int(2);
            let s = table_m.project(&mid).unwrap();
            assert_eq!(ext.as_pl.slope_at(&mid).unwrap(), psi.slope_at(&s).unwrap());
        }
    }
    pass(10, "lifts verified on 100 generator-built compatible triples");
}

#[test]
fn criterion_11_canonical_isometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(1011);
    for _ in 0..50 {
        let source = random_compact_set(&mut rng);
        let target = random_compact_set(&mut rng);
        let d = canonical_isometry(&source, &target);
        let f = random_step_function(&mut rng, &source);
        let tf = d.apply(&f).unwrap();
        assert_eq!(tf.alexiewicz_norm(), f.alexiewicz_norm());
        let rhs = PiecewiseLinear::compose(&f.embed(), d.psi())
            .unwrap()
            .scale(&d.sign_rational());
        assert_eq!(tf.embed(), rhs);
        // sanity: the canonical psi really is the measure-ratio line
        assert_eq!(
            d.psi().slope_at(&(target.measure() / int(2))).unwrap(),
            source.measure() / target.measure()
        );
    }
    pass(11, "50 canonical pairs satisfy the isometry criteria");
}
