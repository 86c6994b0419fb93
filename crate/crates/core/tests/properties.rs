//! Property-based invariants of the exact and discrete layers.

use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rumin_core::grid::{dc_squared_residual, discretize_bump, GridComplex, GridSpec};
use rumin_core::harness::sample::{random_bump_form, splitmix64, SampleOptions};
use rumin_core::harness::ExperimentConfig;
use rumin_core::heisenberg::poly::rat;
use rumin_core::heisenberg::Rational;
use rumin_core::rumin::{RuminComplex, RuminForm};
use rumin_core::solver::kernel::KernelSpec;

fn random_form(seed: u64, cx: &RuminComplex, h: usize) -> RuminForm<rumin_core::heisenberg::poly::Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RuminForm::random(&mut rng, cx.n, h, cx.dim(h), 3, 0.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dc_squares_to_zero(seed in any::<u64>(), n in 1usize..=2, h in 0usize..4) {
        let cx = RuminComplex::get(n).unwrap();
        prop_assume!(h + 2 <= cx.top());
        let a = random_form(seed, &cx, h);
        prop_assert!(cx.d_c(&cx.d_c(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn star_is_an_involution(seed in any::<u64>(), h in 0usize..=3) {
        let cx = RuminComplex::get(1).unwrap();
        let a = random_form(seed, &cx, h);
        prop_assert_eq!(cx.star(&cx.star(&a)), a);
    }

    #[test]
    fn dc_scales_with_its_weight(seed in any::<u64>(), h in 0usize..3, num in 1i64..6, den in 1i64..6) {
        let cx = RuminComplex::get(1).unwrap();
        let a = random_form(seed, &cx, h);
        let l = rat(num, den);
        let mut s = Rational::one();
        for _ in 0..cx.dc_weight(h) {
            s *= &l;
        }
        let lhs = cx.d_c(&a.dilate_coefficients(&l)).unwrap();
        let rhs = cx.d_c(&a).unwrap().dilate_coefficients(&l).scale(&s);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn folland_kernel_is_homogeneous(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(KernelSpec::folland().homogeneity_defect(&mut rng, 50) < 1e-12);
    }

    #[test]
    fn config_survives_a_round_trip(trials in 1usize..200, seed in any::<u32>(), points in 4usize..20, h in 2usize..=3, lambda in 1.01f64..4.0) {
        let cfg = ExperimentConfig { trials, seed: seed as u64, points: 2 * points + 1, h, lambda, ..Default::default() };
        let text = toml::to_string(&cfg).unwrap();
        prop_assert_eq!(ExperimentConfig::parse(&text).unwrap(), cfg);
    }

    #[test]
    fn splitmix_separates_states(a in any::<u64>(), b in any::<u64>()) {
        prop_assume!(a != b);
        let (mut x, mut y) = (a, b);
        prop_assert_ne!(splitmix64(&mut x), splitmix64(&mut y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn discrete_dc_squared_converges(seed in 0u64..1000, h in 0usize..2) {
        let gc = GridComplex::get().unwrap();
        let g = random_bump_form(seed, h, &SampleOptions { radius: 1.5, power: 8 }).unwrap();
        let r = |p| dc_squared_residual(&gc, &discretize_bump(&gc.cx, &g, &GridSpec::cube(2.0, 1.0, p).unwrap())).unwrap();
        let (coarse, fine) = (r(33), r(65));
        prop_assert!(fine < 0.5 * coarse, "{} → {}", coarse, fine);
    }
}
