//! The ten acceptance criteria as one seeded, deterministic suite. The
//! acceptance test target and `rwkit verify all` both run exactly this.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{
    contiguity_matrix, sample_points, verify_contiguity_algebra, verify_engine_vs_formula, verify_fact23,
    verify_lambda0_determinant, CohomologyError,
};
use crate::config::ModuliConfig;
use crate::homology::{verify_homology_group, HomologyError, HomologyGroup};
use crate::pairing::{default_scenario, verify_contiguity_integral, PairingError};
use crate::report::{IdentityCheck, IdentityReport};
use crate::theta::{verify_theta_identities, ThetaError, TorusParam};

pub const TAU_SQUARE: Complex64 = Complex64::new(0.0, 1.0);
pub const TAU_SKEW: Complex64 = Complex64::new(0.3, 0.8);
/// Tolerance of the end-to-end contiguity residual.
pub const CONTIGUITY_INTEGRAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<IdentityCheck>,
}

pub const TITLES: [&str; 10] = [
    "intersection determinants (exact)",
    "monodromy and connection invariance (exact)",
    "basis expansion and cycle relations (exact)",
    "homology skew symmetry (exact)",
    "theta identities",
    "residue engine vs closed forms",
    "lambda = 0 determinant",
    "cohomology relation and negative control",
    "contiguity algebra",
    "contiguity on integrals",
];

/// Inputs shared by the numeric criteria.
#[derive(Debug, Clone)]
pub struct SuiteInput {
    pub seed: u64,
    /// Optional extra configuration checked alongside the seeded ones in
    /// criteria 6, 8 and 9.
    pub extra: Option<ModuliConfig>,
}

impl SuiteInput {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, extra: None }
    }
}

fn lambda_zero(cfg: &ModuliConfig) -> ModuliConfig {
    ModuliConfig::new(cfg.tau(), cfg.t.clone(), cfg.c0, cfg.c.clone(), Complex64::new(0.0, 0.0))
        .expect("same punctures and exponents")
}

/// The ten engine configurations: five with `n = 3`, five with `n = 4`,
/// alternating between the square and the skew modulus.
pub fn engine_configs(seed: u64) -> Vec<ModuliConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e67);
    (0..10)
        .map(|k| {
            let tau = if k % 2 == 0 { TAU_SQUARE } else { TAU_SKEW };
            ModuliConfig::random(&mut rng, tau, 3 + k / 5, 0.15)
        })
        .collect()
}

/// A random configuration for which `S^p_q` and its dual-shift partner exist.
fn contiguity_config(rng: &mut ChaCha8Rng, tau: Complex64, n: usize, p: usize, q: usize) -> ModuliConfig {
    loop {
        let cfg = ModuliConfig::random(rng, tau, n, 0.15);
        let tp = cfg.tp;
        let d = cfg.t[p - 1] - cfg.t[q - 1];
        let margin = tp.lattice_distance(2.0 * d - cfg.lambda) > 0.15 && tp.lattice_distance(2.0 * d + cfg.lambda) > 0.15;
        let sh = cfg.shifted(p, q);
        if margin && contiguity_matrix(p, q, &cfg).is_ok() && contiguity_matrix(p, q, &sh.dual()).is_ok() {
            return cfg;
        }
    }
}

fn tagged(mut rep: IdentityReport, tag: &str) -> IdentityReport {
    for c in &mut rep.checks {
        c.detail = if c.detail.is_empty() || c.detail == tag {
            tag.to_string()
        } else {
            format!("{tag}; {}", c.detail)
        };
    }
    rep
}

fn homology_criterion(group: &[HomologyGroup], sizes: std::ops::RangeInclusive<usize>, seed: u64) -> Result<IdentityReport, SuiteError> {
    let mut rep = IdentityReport::new();
    for n in sizes {
        for &g in group {
            rep.extend(tagged(verify_homology_group(n, g, seed)?, &format!("n = {n}")));
        }
    }
    Ok(rep)
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: u8, input: &SuiteInput) -> Result<IdentityReport, SuiteError> {
    let seed = input.seed;
    let extra = input.extra.as_ref();
    match id {
        1 => homology_criterion(&[HomologyGroup::Determinants], 2..=5, seed),
        2 => homology_criterion(&[HomologyGroup::Monodromy, HomologyGroup::Connection], 3..=4, seed),
        3 => homology_criterion(&[HomologyGroup::Relations], 2..=5, seed),
        4 => homology_criterion(&[HomologyGroup::Tables], 2..=5, seed),
        5 => {
            let mut rep = IdentityReport::new();
            for (tag, tau) in [("tau = i", TAU_SQUARE), ("tau = 0.3+0.8i", TAU_SKEW)] {
                rep.extend(tagged(verify_theta_identities(TorusParam::new(tau)?, 100, seed)?, tag));
            }
            Ok(rep)
        }
        6 => {
            let mut rep = IdentityReport::new();
            let mut cfgs = engine_configs(seed);
            cfgs.extend(extra.cloned());
            for (k, cfg) in cfgs.iter().enumerate() {
                let tag = format!("config {}", k + 1);
                rep.extend(tagged(verify_engine_vs_formula(cfg)?, &tag));
                rep.extend(tagged(verify_engine_vs_formula(&lambda_zero(cfg))?, &format!("{tag}, lambda = 0")));
            }
            Ok(rep)
        }
        7 => {
            let mut rep = IdentityReport::new();
            for (k, cfg) in engine_configs(seed).iter().enumerate().filter(|(k, _)| k % 3 == 0) {
                rep.extend(tagged(verify_lambda0_determinant(&lambda_zero(cfg))?, &format!("config {}", k + 1)));
            }
            Ok(rep)
        }
        8 => {
            let mut rep = IdentityReport::new();
            let mut cfgs: Vec<ModuliConfig> = engine_configs(seed).into_iter().step_by(3).collect();
            cfgs.extend(extra.cloned());
            for (k, cfg) in cfgs.iter().enumerate() {
                rep.extend(tagged(verify_fact23(cfg)?, &format!("config {}", k + 1)));
            }
            Ok(rep)
        }
        9 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5371);
            let cases = [(3, 2, 3, TAU_SQUARE), (3, 1, 2, TAU_SKEW), (4, 1, 3, TAU_SQUARE), (4, 4, 2, TAU_SKEW)];
            let mut rep = IdentityReport::new();
            for (n, p, q, tau) in cases {
                let cfg = contiguity_config(&mut rng, tau, n, p, q);
                let pts = sample_points(&mut rng, &cfg, 20, 0.1);
                rep.extend(tagged(verify_contiguity_algebra(p, q, &cfg, &pts)?, &format!("n = {n}, (p,q) = ({p},{q})")));
            }
            if let Some(cfg) = extra {
                if cfg.n() >= 3 {
                    let pts = sample_points(&mut rng, cfg, 20, 0.1);
                    rep.extend(tagged(verify_contiguity_algebra(2, 3, cfg, &pts)?, "supplied config, (p,q) = (2,3)"));
                }
            }
            Ok(rep)
        }
        10 => {
            let (cfg, path) = default_scenario(seed);
            let out = verify_contiguity_integral(2, 3, &path, &cfg)?;
            let mut rep = IdentityReport::new();
            rep.push(
                IdentityCheck::numeric("f(p+,q-) = S f on integrals", out.residual, CONTIGUITY_INTEGRAL_TOL)
                    .with_detail(format!("n = 3, path t1 -> t2, (p,q) = (2,3), quadrature level {}", out.levels)),
            );
            rep.push(IdentityCheck::numeric("contiguity rows hold on the path", out.pointwise, 1e-11));
            Ok(rep)
        }
        _ => panic!("criterion {id} does not exist"),
    }
}

pub fn criterion_report(id: u8, input: &SuiteInput) -> Result<CriterionReport, SuiteError> {
    let rep = run_criterion(id, input)?;
    Ok(CriterionReport { id, title: TITLES[id as usize - 1], passed: rep.all_passed(), checks: rep.checks })
}

pub fn run_all(input: &SuiteInput) -> Result<Vec<CriterionReport>, SuiteError> {
    (1..=10).map(|id| criterion_report(id, input)).collect()
}
