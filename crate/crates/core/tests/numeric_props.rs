use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rwkit::cohomology::{ic_pair_numeric, nabla_solve, recurrence_residual, Engine, Generator, LaurentSeries};
use rwkit::homology::{verify_homology_group, HomologyGroup};
use rwkit::pairing::{default_scenario, f_vector, track_branch};
use rwkit::theta::Theta;
use rwkit::{Complex64, ModuliConfig};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn random_cfg(seed: u64, n: usize) -> ModuliConfig {
    let tau = if seed.is_multiple_of(2) { c(0.0, 1.0) } else { c(0.3, 0.8) };
    ModuliConfig::random(&mut ChaCha8Rng::seed_from_u64(seed), tau, n, 0.15)
}

fn twisted(n: usize) -> impl Strategy<Value = Generator> {
    prop_oneof![(1..=n).prop_map(Generator::Psi), (1..=n).prop_map(Generator::DPsi)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_parity_and_periods(re in -1.5f64..1.5, im in -0.6f64..0.6, skew in any::<bool>()) {
        let tau = if skew { c(0.3, 0.8) } else { c(0.0, 1.0) };
        let th = Theta::with_tau(tau).unwrap();
        let u = c(re, im);
        prop_assume!(th.torus().lattice_distance(u) > 0.05);
        let t = th.theta1(u).unwrap();
        prop_assert!(rel(th.theta1(-u).unwrap(), -t) < 1e-12);
        prop_assert!(rel(th.theta1(u + 1.0).unwrap(), -t) < 1e-12);
        let factor = -(-Complex64::i() * std::f64::consts::PI * (tau + 2.0 * u)).exp();
        prop_assert!(rel(th.theta1(u + tau).unwrap(), factor * t) < 1e-12);
        prop_assert!(rel(th.rho(-u).unwrap(), -th.rho(u).unwrap()) < 1e-12);
    }

    #[test]
    fn recurrence_is_satisfied(
        seed in any::<u64>(),
        cre in -0.9f64..0.9,
        cim in -0.3f64..0.3,
        ord in -2i32..=0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || c(rand::Rng::gen_range(&mut rng, -1.0..1.0), rand::Rng::gen_range(&mut rng, -1.0..1.0));
        let a = LaurentSeries { center_index: 1, min_order: ord, coeffs: (0..6).map(|_| draw()).collect() };
        let mut alpha = LaurentSeries { center_index: 1, min_order: -1, coeffs: (0..6).map(|_| draw()).collect() };
        alpha.coeffs[0] = c(cre, cim);
        prop_assume!((1..4).all(|k| (c(cre, cim) + k as f64).norm() > 0.05));
        let b = nabla_solve(&a, &alpha, 3).unwrap();
        prop_assert!(recurrence_residual(&a, &alpha, &b) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cohomology_skew_symmetry(seed in 0u64..1000, a in twisted(3), b in twisted(3)) {
        let cfg = random_cfg(seed, 3);
        let lhs = Engine::new(&cfg).unwrap().pair_gen(a, b).unwrap();
        let rhs = -Engine::new(&cfg.dual()).unwrap().pair_gen(b, a).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn holomorphic_pairs_vanish_exactly(seed in 0u64..1000, j in 1usize..=4, k in 1usize..=4) {
        prop_assume!(j != k);
        let cfg = random_cfg(seed, 4);
        let v = ic_pair_numeric(&Generator::Psi(j).into(), &Generator::Psi(k).into(), &cfg).unwrap();
        prop_assert_eq!(v, c(0.0, 0.0));
    }
}

#[test]
fn monodromy_invariance_at_five_punctures() {
    let rep = verify_homology_group(5, HomologyGroup::Monodromy, 1).unwrap();
    assert!(rep.all_passed(), "{}", rep.render());
}

#[test]
fn integrals_are_bitwise_deterministic() {
    let (cfg, path) = default_scenario(11);
    assert_eq!(track_branch(&path, &cfg).unwrap(), track_branch(&path, &cfg).unwrap());
    let a = f_vector(&path, &cfg).unwrap();
    let b = f_vector(&path, &cfg).unwrap();
    let bits = |v: &[Complex64]| v.iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
}
