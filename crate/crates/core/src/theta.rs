//! Jacobi theta function `θ₁(u, τ)` and the derived kernels `ρ = θ₁′/θ₁`
//! and `𝔰(u; λ) = θ₁(u−λ)θ₁′(0) / (θ₁(u)θ₁(−λ))`.
//!
//! The defining sum runs over `m ∈ ℤ`; pairing the terms `m` and `−m−1`
//! gives the sine form
//!
//! ```text
//! θ₁(u) = 2 Σ_{k≥0} (−1)^k q^{(k+½)²} sin((2k+1)πu),   q = e^{πiτ}
//! ```
//!
//! which is what we sum. Arguments are first reduced into the centred
//! period parallelogram with the exact quasi-periodicity factors
//! `θ₁(u+1) = −θ₁(u)` and `θ₁(u+τ) = −e^{−πi(τ+2u)} θ₁(u)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::report::{IdentityCheck, IdentityReport};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Inputs closer than this to a lattice point are rejected as poles.
pub const POLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("modulus tau must have positive imaginary part, got {0}")]
    InvalidTau(Complex64),
    #[error("invalid series policy: {0}")]
    InvalidPolicy(&'static str),
    #[error("theta series did not converge within {terms} terms")]
    NonConvergent { terms: usize },
    #[error("derivative order {0} not in 1..=3")]
    InvalidOrder(u32),
    #[error("argument {0} lies on the period lattice")]
    PoleAtLatticePoint(Complex64),
    #[error("lambda = {0} lies on the period lattice")]
    LambdaOnLattice(Complex64),
}

/// Modulus of the torus `ℂ/(ℤ+ℤτ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusParam {
    tau: Complex64,
}

impl TorusParam {
    pub fn new(tau: Complex64) -> Result<Self, ThetaError> {
        if !(tau.im > 0.0) || !tau.re.is_finite() {
            return Err(ThetaError::InvalidTau(tau));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// Real coordinates `(a, b)` with `u = a + bτ`.
    pub fn lattice_coords(&self, u: Complex64) -> (f64, f64) {
        let b = u.im / self.tau.im;
        let a = u.re - b * self.tau.re;
        (a, b)
    }

    /// Distance from `u` to the nearest point of `ℤ + ℤτ`.
    pub fn lattice_distance(&self, u: Complex64) -> f64 {
        let (a, b) = self.lattice_coords(u);
        let (a0, b0) = (a.floor() as i64, b.floor() as i64);
        let mut best = f64::INFINITY;
        for da in -1..=2 {
            for db in -1..=2 {
                let w = Complex64::new((a0 + da) as f64, 0.0) + self.tau * (b0 + db) as f64;
                best = best.min((u - w).norm());
            }
        }
        best
    }

    /// Whether `u` lies in `P = {a + bτ : 0 ≤ a, b < 1}`.
    pub fn in_fundamental_domain(&self, u: Complex64) -> bool {
        let (a, b) = self.lattice_coords(u);
        (0.0..1.0).contains(&a) && (0.0..1.0).contains(&b)
    }
}

/// Truncation policy for the theta series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self { rel_tol: 1e-18, max_terms: 64 }
    }
}

impl SeriesPolicy {
    pub fn validate(&self) -> Result<(), ThetaError> {
        if !(self.rel_tol > 0.0) {
            return Err(ThetaError::InvalidPolicy("rel_tol must be positive"));
        }
        if self.max_terms < 8 {
            return Err(ThetaError::InvalidPolicy("max_terms must be at least 8"));
        }
        Ok(())
    }
}

/// A reduced argument `u = u0 + l + kτ`.
struct Reduced {
    u0: Complex64,
    l: i64,
    k: i64,
}

fn reduce(u: Complex64, tau: Complex64) -> Reduced {
    let k = (u.im / tau.im).round();
    let shifted = u - tau * k;
    let l = shifted.re.round();
    Reduced { u0: shifted - l, l: l as i64, k: k as i64 }
}

/// `θ₁^{(r)}(u0)` for `r = 0..=max_order` by direct summation at an
/// already reduced argument.
fn series_jet(
    u0: Complex64,
    tau: Complex64,
    max_order: usize,
    policy: &SeriesPolicy,
) -> Result<[Complex64; 4], ThetaError> {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    let mut max_env = 0.0_f64;
    for k in 0..policy.max_terms {
        let half = k as f64 + 0.5;
        let freq = (2 * k + 1) as f64 * PI;
        let qpow = (I * PI * tau * half * half).exp();
        let sign = if k % 2 == 0 { 2.0 } else { -2.0 };
        let arg = u0 * freq;
        let (s, c) = (arg.sin(), arg.cos());
        let mut fp = 1.0;
        for (r, slot) in out.iter_mut().enumerate().take(max_order + 1) {
            let trig = match r % 4 {
                0 => s,
                1 => c,
                2 => -s,
                _ => -c,
            };
            *slot += qpow * trig * (sign * fp);
            fp *= freq;
        }
        let env = qpow.norm() * (freq * u0.im.abs()).exp() * freq.powi(max_order as i32);
        max_env = max_env.max(env);
        if env < policy.rel_tol * max_env {
            return Ok(out);
        }
    }
    Err(ThetaError::NonConvergent { terms: policy.max_terms })
}

fn binom(n: usize, k: usize) -> f64 {
    const T: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0],
        [1.0, 3.0, 3.0, 1.0],
    ];
    T[n][k]
}

/// Theta evaluator bundling the modulus, truncation policy and the
/// constants `θ₁′(0)`, `θ₁‴(0)` that the kernels reuse.
#[derive(Debug, Clone, Copy)]
pub struct Theta {
    tp: TorusParam,
    policy: SeriesPolicy,
    pole_tol: f64,
    d1_zero: Complex64,
    d3_zero: Complex64,
}

impl Theta {
    pub fn new(tp: TorusParam, policy: SeriesPolicy) -> Result<Self, ThetaError> {
        policy.validate()?;
        let jet = series_jet(Complex64::new(0.0, 0.0), tp.tau, 3, &policy)?;
        Ok(Self { tp, policy, pole_tol: POLE_TOL, d1_zero: jet[1], d3_zero: jet[3] })
    }

    pub fn with_tau(tau: Complex64) -> Result<Self, ThetaError> {
        Self::new(TorusParam::new(tau)?, SeriesPolicy::default())
    }

    pub fn torus(&self) -> TorusParam {
        self.tp
    }

    pub fn tau(&self) -> Complex64 {
        self.tp.tau
    }

    pub fn policy(&self) -> SeriesPolicy {
        self.policy
    }

    /// `θ₁′(0)`.
    pub fn d1_at_zero(&self) -> Complex64 {
        self.d1_zero
    }

    /// `θ₁‴(0)/θ₁′(0)`.
    pub fn d3_over_d1_at_zero(&self) -> Complex64 {
        self.d3_zero / self.d1_zero
    }

    /// `θ₁^{(r)}(u)` for `r = 0..=max_order`.
    pub fn jet(&self, u: Complex64, max_order: usize) -> Result<[Complex64; 4], ThetaError> {
        let red = reduce(u, self.tp.tau);
        let base = series_jet(red.u0, self.tp.tau, max_order, &self.policy)?;
        if red.l == 0 && red.k == 0 {
            return Ok(base);
        }
        let kf = red.k as f64;
        let sign = if (red.l + red.k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let factor = (-I * PI * (self.tp.tau * kf * kf + red.u0 * (2.0 * kf))).exp() * sign;
        let dlog = -2.0 * PI * I * kf;
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for r in 0..=max_order {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=r {
                acc += base[j] * dlog.powu((r - j) as u32) * binom(r, j);
            }
            out[r] = acc * factor;
        }
        Ok(out)
    }

    pub fn theta1(&self, u: Complex64) -> Result<Complex64, ThetaError> {
        Ok(self.jet(u, 0)?[0])
    }

    pub fn theta1_deriv(&self, u: Complex64, order: u32) -> Result<Complex64, ThetaError> {
        if !(1..=3).contains(&order) {
            return Err(ThetaError::InvalidOrder(order));
        }
        Ok(self.jet(u, order as usize)?[order as usize])
    }

    fn check_pole(&self, u: Complex64) -> Result<(), ThetaError> {
        if self.tp.lattice_distance(u) < self.pole_tol {
            Err(ThetaError::PoleAtLatticePoint(u))
        } else {
            Ok(())
        }
    }

    /// `ρ(u)` and `ρ′(u)` together.
    pub fn rho_pair(&self, u: Complex64) -> Result<(Complex64, Complex64), ThetaError> {
        self.check_pole(u)?;
        let red = reduce(u, self.tp.tau);
        let j = series_jet(red.u0, self.tp.tau, 2, &self.policy)?;
        let r = j[1] / j[0];
        let rp = j[2] / j[0] - r * r;
        Ok((r - 2.0 * PI * I * red.k as f64, rp))
    }

    pub fn rho(&self, u: Complex64) -> Result<Complex64, ThetaError> {
        Ok(self.rho_pair(u)?.0)
    }

    pub fn rho_prime(&self, u: Complex64) -> Result<Complex64, ThetaError> {
        Ok(self.rho_pair(u)?.1)
    }

    fn check_lambda(&self, lambda: Complex64) -> Result<(), ThetaError> {
        if self.tp.lattice_distance(lambda) < self.pole_tol {
            Err(ThetaError::LambdaOnLattice(lambda))
        } else {
            Ok(())
        }
    }

    pub fn s_func(&self, u: Complex64, lambda: Complex64) -> Result<Complex64, ThetaError> {
        self.check_lambda(lambda)?;
        self.check_pole(u)?;
        let num = self.theta1(u - lambda)? * self.d1_zero;
        let den = self.theta1(u)? * self.theta1(-lambda)?;
        Ok(num / den)
    }

    /// `∂𝔰/∂u (u; λ) = 𝔰(u; λ)(ρ(u−λ) − ρ(u))`.
    pub fn s_func_du(&self, u: Complex64, lambda: Complex64) -> Result<Complex64, ThetaError> {
        let s = self.s_func(u, lambda)?;
        if self.tp.lattice_distance(u - lambda) < self.pole_tol {
            // simple zero of 𝔰 at u = λ: fall back to the quotient rule at the zero
            let j = self.jet(u - lambda, 1)?;
            return Ok(j[1] * self.d1_zero / (self.theta1(u)? * self.theta1(-lambda)?));
        }
        Ok(s * (self.rho(u - lambda)? - self.rho(u)?))
    }
}

pub fn theta1(u: Complex64, tp: TorusParam, policy: SeriesPolicy) -> Result<Complex64, ThetaError> {
    Theta::new(tp, policy)?.theta1(u)
}

pub fn theta1_deriv(
    u: Complex64,
    tp: TorusParam,
    order: u32,
    policy: SeriesPolicy,
) -> Result<Complex64, ThetaError> {
    Theta::new(tp, policy)?.theta1_deriv(u, order)
}

pub fn rho(u: Complex64, tp: TorusParam, policy: SeriesPolicy) -> Result<Complex64, ThetaError> {
    Theta::new(tp, policy)?.rho(u)
}

pub fn rho_prime(u: Complex64, tp: TorusParam, policy: SeriesPolicy) -> Result<Complex64, ThetaError> {
    Theta::new(tp, policy)?.rho_prime(u)
}

pub fn s_func(
    u: Complex64,
    lambda: Complex64,
    tp: TorusParam,
    policy: SeriesPolicy,
) -> Result<Complex64, ThetaError> {
    Theta::new(tp, policy)?.s_func(u, lambda)
}

pub fn s_func_du(
    u: Complex64,
    lambda: Complex64,
    tp: TorusParam,
    policy: SeriesPolicy,
) -> Result<Complex64, ThetaError> {
    Theta::new(tp, policy)?.s_func_du(u, lambda)
}

/// `|a − b| / max(1, |a|, |b|)`.
pub(crate) fn scaled_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// Minimum lattice distance kept between singular arguments in random draws.
const MIN_SEPARATION: f64 = 0.05;

/// Random point `a + bτ` with `a, b ∈ [0, 1)`.
pub(crate) fn random_in_domain<R: Rng>(rng: &mut R, tau: Complex64) -> Complex64 {
    Complex64::new(rng.gen::<f64>(), 0.0) + tau * rng.gen::<f64>()
}

/// Identity tolerance used by [`verify_theta_identities`].
pub const IDENTITY_TOL: f64 = 1e-12;

/// Evaluates the quasi-periodicity, parity and theta identities at random
/// admissible points and reports the worst scaled residual of each.
pub fn verify_theta_identities(
    tp: TorusParam,
    samples: usize,
    rng_seed: u64,
) -> Result<IdentityReport, ThetaError> {
    let th = Theta::new(tp, SeriesPolicy::default())?;
    let tau = tp.tau;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let samples = samples.max(1);
    let far = |z: Complex64| tp.lattice_distance(z) >= MIN_SEPARATION;

    let mut quasi_one = 0f64;
    let mut quasi_tau = 0f64;
    let mut odd_theta = 0f64;
    let mut odd_rho = 0f64;
    let mut s_one = 0f64;
    let mut s_tau = 0f64;
    let mut cancel = 0f64;
    let mut partial = 0f64;
    let mut laurent_rate = 0f64;

    let mut done = 0;
    while done < samples {
        let u = random_in_domain(&mut rng, tau);
        let tj = random_in_domain(&mut rng, tau);
        let tk = random_in_domain(&mut rng, tau);
        let tl = random_in_domain(&mut rng, tau);
        let lam = random_in_domain(&mut rng, tau);
        let singular = [
            u,
            lam,
            u - tj,
            u - tk,
            u - tl,
            tj - tk,
            tj - tl,
            tk - tl,
            u - tk - lam,
            lam - tk + tl,
            lam - tk + tj,
            u - lam,
        ];
        if !singular.iter().all(|&z| far(z)) {
            continue;
        }
        done += 1;

        let t = th.theta1(u)?;
        quasi_one = quasi_one.max(scaled_diff(th.theta1(u + 1.0)?, -t));
        let factor = -(-I * PI * (tau + 2.0 * u)).exp();
        quasi_tau = quasi_tau.max(scaled_diff(th.theta1(u + tau)?, factor * t));
        odd_theta = odd_theta.max(scaled_diff(th.theta1(-u)?, -t));
        odd_rho = odd_rho.max(scaled_diff(th.rho(-u)?, -th.rho(u)?));

        let s = th.s_func(u, lam)?;
        s_one = s_one.max(scaled_diff(th.s_func(u + 1.0, lam)?, s));
        s_tau = s_tau.max(scaled_diff(th.s_func(u + tau, lam)?, (2.0 * PI * I * lam).exp() * s));

        let lhs = th.s_func(u - tk, lam)?
            * (th.rho(u - tj)? + th.rho(tj - tk)? - th.rho(u - tk - lam)? - th.rho(lam)?);
        let rhs = th.s_func(u - tj, lam)? * th.s_func(tj - tk, lam)?;
        cancel = cancel.max(scaled_diff(lhs, rhs));

        let lhs = th.theta1(u - tk)? / th.theta1(u - tl)? * th.s_func(u - tj, lam - tk + tl)?;
        let rhs = th.theta1(tj - tk)? / th.theta1(tj - tl)? * th.s_func(u - tj, lam)?
            + th.theta1(tk - tl)? * th.theta1(lam - tk + tj)?
                / (th.theta1(tj - tl)? * th.theta1(lam - tk + tl)?)
                * th.s_func(u - tl, lam)?;
        partial = partial.max(scaled_diff(lhs, rhs));

        // 𝔰(u; λ) + 1/λ − ρ(u) = O(λ): halving λ halves the remainder
        let small = Complex64::from_polar(1e-4, rng.gen::<f64>() * 2.0 * PI);
        let rest = |l: Complex64| -> Result<f64, ThetaError> {
            Ok((th.s_func(u, l)? + 1.0 / l - th.rho(u)?).norm())
        };
        let (e1, e2) = (rest(small)?, rest(small * 0.5)?);
        laurent_rate = laurent_rate.max((e2 / e1 - 0.5).abs());
    }

    let mut report = IdentityReport::new();
    let mut push = |name: &str, residual: f64, tol: f64| {
        report.push(IdentityCheck::numeric(name, residual, tol));
    };
    push("theta quasi-periodicity u -> u+1", quasi_one, IDENTITY_TOL);
    push("theta quasi-periodicity u -> u+tau", quasi_tau, IDENTITY_TOL);
    push("theta odd", odd_theta, IDENTITY_TOL);
    push("rho odd", odd_rho, IDENTITY_TOL);
    push("s quasi-periodicity u -> u+1", s_one, IDENTITY_TOL);
    push("s quasi-periodicity u -> u+tau", s_tau, IDENTITY_TOL);
    push("three-point cancellation identity", cancel, IDENTITY_TOL);
    push("shifted partial-fraction identity", partial, IDENTITY_TOL);
    push("s Laurent remainder is O(lambda)", laurent_rate, 0.05);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn th_i() -> Theta {
        Theta::with_tau(c(0.0, 1.0)).unwrap()
    }

    #[test]
    fn zero_at_origin_and_even_derivative_vanishes() {
        let th = th_i();
        assert_eq!(th.theta1(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(th.theta1_deriv(c(0.0, 0.0), 2).unwrap().norm() < 1e-15);
        assert!(th.d1_at_zero().norm() > 1.0);
    }

    #[test]
    fn invalid_order_rejected() {
        assert_eq!(th_i().theta1_deriv(c(0.1, 0.0), 4), Err(ThetaError::InvalidOrder(4)));
        assert_eq!(th_i().theta1_deriv(c(0.1, 0.0), 0), Err(ThetaError::InvalidOrder(0)));
    }

    #[test]
    fn tau_near_real_axis_does_not_converge() {
        let th = Theta::new(TorusParam::new(c(0.0, 1e-4)).unwrap(), SeriesPolicy::default());
        assert!(matches!(th, Err(ThetaError::NonConvergent { .. })));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(TorusParam::new(c(0.0, -1.0)).is_err());
        assert!(SeriesPolicy { rel_tol: 0.0, max_terms: 64 }.validate().is_err());
        assert!(SeriesPolicy { rel_tol: 1e-18, max_terms: 4 }.validate().is_err());
        let th = th_i();
        assert!(matches!(th.rho(c(1.0, 1.0)), Err(ThetaError::PoleAtLatticePoint(_))));
        assert!(matches!(th.s_func(c(0.3, 0.1), c(0.0, 1.0)), Err(ThetaError::LambdaOnLattice(_))));
    }

    #[test]
    fn rho_has_unit_residue() {
        let th = th_i();
        let u = c(1e-4, 0.0);
        let r = th.rho(u).unwrap();
        assert!((r - 1.0 / u).norm() < 1e-3);
    }

    #[test]
    fn reduction_matches_direct_summation() {
        // far arguments summed directly (wide policy) agree with reduced evaluation
        let th = Theta::with_tau(c(0.3, 0.8)).unwrap();
        let wide = SeriesPolicy { rel_tol: 1e-30, max_terms: 200 };
        for &u in &[c(2.7, 0.4), c(-1.2, 1.3), c(0.4, -1.1)] {
            let direct = series_jet(u, th.tau(), 3, &wide).unwrap();
            let reduced = th.jet(u, 3).unwrap();
            for r in 0..4 {
                assert!(
                    scaled_diff(direct[r], reduced[r]) < 1e-11,
                    "order {r} at {u}: {} vs {}",
                    direct[r],
                    reduced[r]
                );
            }
        }
    }

    #[test]
    fn s_derivative_at_its_zero() {
        let th = th_i();
        let lam = c(0.3, 0.2);
        let h = 1e-5;
        let fd = (th.s_func(lam + h, lam).unwrap() - th.s_func(lam - h, lam).unwrap()) / (2.0 * h);
        assert!(scaled_diff(th.s_func_du(lam, lam).unwrap(), fd) < 1e-8);
    }

    #[test]
    fn identity_report_passes_for_square_torus() {
        let rep = verify_theta_identities(TorusParam::new(c(0.0, 1.0)).unwrap(), 30, 7).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }
}
