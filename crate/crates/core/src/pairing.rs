//! Riemann-Wirtinger integrals over open segments between punctures.
//!
//! The multivalued factor `T(u) = e^{2πic_0u} Π θ₁(u−t_j)^{c_j}` is carried
//! by continuous logarithms of the theta factors, and the endpoint power
//! singularities are handled by tanh-sinh quadrature in the segment parameter.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cohomology::{contiguity_matrix, contiguity_prime_pointwise, CocycleExpr, CohomologyError, Generator};
use crate::config::ModuliConfig;
use crate::par;
use crate::theta::{Theta, ThetaError, POLE_TOL};

/// Minimum distance from the interior of a path to any `t_j + Λ_τ`.
pub const CLEARANCE_TOL: f64 = 1e-3;
pub const DEFAULT_STEPS: usize = 64;
pub const MAX_STEPS: usize = 1 << 16;
/// Relative agreement demanded between successive quadrature levels.
pub const QUAD_TOL: f64 = 1e-12;
pub const MIN_LEVEL: u32 = 6;
pub const MAX_LEVEL: u32 = 12;
/// Largest admissible per-sample change of `Im log θ₁`.
const MAX_INCREMENT: f64 = PI / 2.0;
/// Nodes whose segment parameter falls below `e^{−TAIL_LOG}` are dropped.
const TAIL_LOG: f64 = 345.0;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PairingError {
    #[error("path passes within {distance:.3e} of puncture t{index}")]
    PathTooCloseToPuncture { index: usize, distance: f64 },
    #[error("branch tracking did not settle within {steps} steps")]
    RefinementLimit { steps: usize },
    #[error("integrand is not integrable at t{index}: exponent {exponent}")]
    DivergentEndpoint { index: usize, exponent: Complex64 },
    #[error("quadrature did not converge by level {level} (last change {change:.3e})")]
    QuadratureStall { level: u32, change: f64 },
    #[error("shifted exponent {exponent} at t{index} is not integrable")]
    ShiftBreaksConvergence { index: usize, exponent: Complex64 },
    #[error("invalid path: {0}")]
    BadPath(String),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

type Result<T> = std::result::Result<T, PairingError>;

/// Polyline from `t_a` to `t_b` (1-based indices).
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPath {
    pub start_index: usize,
    pub end_index: usize,
    /// Full polyline, first point `t_a`, last point `t_b`.
    pub waypoints: Vec<Complex64>,
    /// Initial sample count for branch tracking.
    pub steps: usize,
}

impl SegmentPath {
    pub fn straight(a: usize, b: usize, cfg: &ModuliConfig) -> Result<Self> {
        Self::through(a, b, &[], cfg)
    }

    /// `t_a → via… → t_b`.
    pub fn through(a: usize, b: usize, via: &[Complex64], cfg: &ModuliConfig) -> Result<Self> {
        let n = cfg.n();
        if !(1..=n).contains(&a) || !(1..=n).contains(&b) || a == b {
            return Err(PairingError::BadPath(format!("endpoints t{a}, t{b} with n = {n}")));
        }
        let mut waypoints = vec![cfg.t[a - 1]];
        waypoints.extend_from_slice(via);
        waypoints.push(cfg.t[b - 1]);
        Ok(Self { start_index: a, end_index: b, waypoints, steps: DEFAULT_STEPS })
    }

    fn lengths(&self) -> Vec<f64> {
        self.waypoints.windows(2).map(|w| (w[1] - w[0]).norm()).collect()
    }

    /// Point at arc-length fraction `g ∈ [0, 1]`.
    pub fn point_at(&self, g: f64) -> Complex64 {
        let lens = self.lengths();
        let total: f64 = lens.iter().sum();
        let mut left = g * total;
        for (k, len) in lens.iter().enumerate() {
            if left <= *len || k + 1 == lens.len() {
                let s = if *len > 0.0 { (left / len).min(1.0) } else { 0.0 };
                return self.waypoints[k] + (self.waypoints[k + 1] - self.waypoints[k]) * s;
            }
            left -= len;
        }
        self.waypoints[0]
    }

    /// Smallest distance from the path to a lattice translate of any
    /// puncture, not counting the endpoints themselves.
    pub fn clearance(&self, cfg: &ModuliConfig) -> (usize, f64) {
        let tau = cfg.tau();
        let segs = self.waypoints.len() - 1;
        let mut best = (0, f64::INFINITY);
        for (k, w) in self.waypoints.windows(2).enumerate() {
            for (j, &tj) in cfg.t.iter().enumerate() {
                let (a0, b0) = cfg.tp.lattice_coords(w[0] - tj);
                let (a1, b1) = cfg.tp.lattice_coords(w[1] - tj);
                let lo_a = a0.min(a1).floor() as i64 - 1;
                let hi_a = a0.max(a1).ceil() as i64 + 1;
                let lo_b = b0.min(b1).floor() as i64 - 1;
                let hi_b = b0.max(b1).ceil() as i64 + 1;
                for m in lo_a..=hi_a {
                    for l in lo_b..=hi_b {
                        let p = tj + m as f64 + tau * l as f64;
                        let is_start = k == 0 && j + 1 == self.start_index && (p - w[0]).norm() < 1e-14;
                        let is_end = k + 1 == segs && j + 1 == self.end_index && (p - w[1]).norm() < 1e-14;
                        if is_start || is_end {
                            continue;
                        }
                        let d = point_segment_distance(p, w[0], w[1]);
                        if d < best.1 {
                            best = (j + 1, d);
                        }
                    }
                }
            }
        }
        best
    }

    pub fn validate(&self, cfg: &ModuliConfig) -> Result<()> {
        let n = cfg.n();
        let (a, b) = (self.start_index, self.end_index);
        if !(1..=n).contains(&a) || !(1..=n).contains(&b) || a == b {
            return Err(PairingError::BadPath(format!("endpoints t{a}, t{b} with n = {n}")));
        }
        if self.waypoints.len() < 2 || self.waypoints[0] != cfg.t[a - 1] || *self.waypoints.last().unwrap() != cfg.t[b - 1] {
            return Err(PairingError::BadPath("polyline must run from t_a to t_b".into()));
        }
        if self.waypoints.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(PairingError::BadPath("non-finite waypoint".into()));
        }
        if self.lengths().contains(&0.0) {
            return Err(PairingError::BadPath("repeated waypoint".into()));
        }
        let (index, distance) = self.clearance(cfg);
        if distance < CLEARANCE_TOL {
            return Err(PairingError::PathTooCloseToPuncture { index, distance });
        }
        Ok(())
    }
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * s)).norm()
}

/// Continuous `log θ₁(u − t_j)` along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchData {
    pub steps: usize,
    /// `logs[j][k]` is the value for `t_{j+1}` at arc-length fraction `(k+1)/steps`.
    pub logs: Vec<Vec<Complex64>>,
    /// Index into `logs[j]` of the midpoint sample.
    pub base_index: usize,
}

impl BranchData {
    /// Continuous value of `log θ₁(u − t_{j+1})` at fraction `g`, given the
    /// principal value there.
    fn lift(&self, j: usize, g: f64, principal: Complex64) -> Complex64 {
        let k = ((g * self.steps as f64).round() as usize).clamp(1, self.steps - 1) - 1;
        let reference = self.logs[j][k];
        let wind = ((reference.im - principal.im) / (2.0 * PI)).round();
        principal + TWO_PI_I * wind
    }

    pub fn base_logs(&self) -> Vec<Complex64> {
        self.logs.iter().map(|l| l[self.base_index]).collect()
    }
}

fn principal_logs(th: &Theta, cfg: &ModuliConfig, u: Complex64) -> Result<Vec<Complex64>> {
    cfg.t.iter().map(|&tj| Ok(th.theta1(u - tj)?.ln())).collect()
}

/// Continues `base` (logs at `points[base]`) in both directions. `None` when
/// some increment reaches [`MAX_INCREMENT`].
fn continue_from(principal: &[Vec<Complex64>], base: usize, base_logs: &[Complex64]) -> Option<Vec<Vec<Complex64>>> {
    let mut out = Vec::with_capacity(base_logs.len());
    for (j, &b) in base_logs.iter().enumerate() {
        let m = principal.len();
        let mut col = vec![Complex64::new(0.0, 0.0); m];
        col[base] = b;
        let order: Vec<(usize, usize)> =
            (base + 1..m).map(|k| (k - 1, k)).chain((0..base).rev().map(|k| (k + 1, k))).collect();
        for (from, to) in order {
            let l = principal[to][j];
            let mut inc = (l - principal[from][j]).im;
            inc -= 2.0 * PI * (inc / (2.0 * PI)).round();
            if inc.abs() >= MAX_INCREMENT {
                return None;
            }
            let wind = ((col[from].im + inc - l.im) / (2.0 * PI)).round();
            col[to] = l + TWO_PI_I * wind;
        }
        out.push(col);
    }
    Some(out)
}

/// Branch data with principal logarithms at the path midpoint.
pub fn track_branch(path: &SegmentPath, cfg: &ModuliConfig) -> Result<BranchData> {
    track(path, cfg, None)
}

/// Branch data continuing the given midpoint logarithms instead of the
/// principal ones.
pub fn track_branch_from(path: &SegmentPath, cfg: &ModuliConfig, base_logs: &[Complex64]) -> Result<BranchData> {
    if base_logs.len() != cfg.n() {
        return Err(PairingError::BadPath("one base logarithm per puncture".into()));
    }
    track(path, cfg, Some(base_logs))
}

fn track(path: &SegmentPath, cfg: &ModuliConfig, base_logs: Option<&[Complex64]>) -> Result<BranchData> {
    path.validate(cfg)?;
    let th = cfg.theta()?;
    let mut steps = path.steps.max(4).next_multiple_of(2);
    while steps <= MAX_STEPS {
        let principal: Vec<Vec<Complex64>> = (1..steps)
            .map(|k| principal_logs(&th, cfg, path.point_at(k as f64 / steps as f64)))
            .collect::<Result<_>>()?;
        let base_index = steps / 2 - 1;
        let base = match base_logs {
            Some(b) => b.to_vec(),
            None => principal[base_index].clone(),
        };
        if let Some(cols) = continue_from(&principal, base_index, &base) {
            return Ok(BranchData { steps, logs: cols, base_index });
        }
        steps *= 2;
    }
    Err(PairingError::RefinementLimit { steps: MAX_STEPS })
}

/// Carries continuous logarithms along the straight segment `from → to`,
/// refining until every increment is small.
pub fn transport_logs(cfg: &ModuliConfig, from: Complex64, to: Complex64, logs: &[Complex64]) -> Result<Vec<Complex64>> {
    let th = cfg.theta()?;
    for t in &cfg.t {
        let d = point_segment_distance(*t, from, to).min(cfg.tp.lattice_distance(from - t)).min(cfg.tp.lattice_distance(to - t));
        if d < CLEARANCE_TOL {
            let index = cfg.t.iter().position(|x| x == t).unwrap() + 1;
            return Err(PairingError::PathTooCloseToPuncture { index, distance: d });
        }
    }
    let mut steps = DEFAULT_STEPS;
    while steps <= MAX_STEPS {
        let principal: Vec<Vec<Complex64>> = (0..=steps)
            .map(|k| principal_logs(&th, cfg, from + (to - from) * (k as f64 / steps as f64)))
            .collect::<Result<_>>()?;
        if let Some(cols) = continue_from(&principal, 0, logs) {
            return Ok(cols.iter().map(|c| c[steps]).collect());
        }
        steps *= 2;
    }
    Err(PairingError::RefinementLimit { steps: MAX_STEPS })
}

/// Tanh-sinh controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub tol: f64,
    pub min_level: u32,
    pub max_level: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { tol: QUAD_TOL, min_level: MIN_LEVEL, max_level: MAX_LEVEL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    /// Level at which successive estimates agreed; the step is `2^{3−level}`.
    pub levels: u32,
    /// Difference between the last two levels.
    pub change: f64,
}

fn s_kernel(th: &Theta, d: Complex64, lam: Complex64) -> Result<Complex64> {
    Ok(th.theta1(d - lam)? * th.d1_at_zero() / (th.theta1(d)? * th.theta1(-lam)?))
}

fn rho_kernel(th: &Theta, d: Complex64) -> Result<(Complex64, Complex64)> {
    let j = th.jet(d, 2)?;
    let r = j[1] / j[0];
    Ok((r, j[2] / j[0] - r * r))
}

/// `φ/du` from the offsets `d_j = u − t_j`, which stay accurate when `u`
/// approaches an endpoint.
fn eval_offsets(th: &Theta, phi: &CocycleExpr, d: &[Complex64], lam: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(c, g) in &phi.terms {
        let v = match g {
            Generator::Psi(j) => s_kernel(th, d[j - 1], lam)?,
            Generator::DPsi(p) => {
                let x = d[p - 1];
                s_kernel(th, x, lam)? * (rho_kernel(th, x - lam)?.0 - rho_kernel(th, x)?.0)
            }
            Generator::Du => Complex64::new(1.0, 0.0),
            Generator::RhoPrime(i) => rho_kernel(th, d[i - 1])?.1,
            Generator::RhoDiff(i, j) => rho_kernel(th, d[j - 1])?.0 - rho_kernel(th, d[i - 1])?.0,
            Generator::Eta(..) => unreachable!("expanded before evaluation"),
        };
        acc += c * v;
    }
    Ok(acc)
}

/// Exponent of the integrand at an endpoint: `c_a + ord_{t_a}(φ)`.
fn endpoint_exponent(cfg: &ModuliConfig, phi: &CocycleExpr, a: usize) -> Complex64 {
    cfg.c[a - 1] + phi.order_at(a) as f64
}

struct Quadrature<'a> {
    th: Theta,
    cfg: &'a ModuliConfig,
    path: &'a SegmentPath,
    branch: &'a BranchData,
    phi: CocycleExpr,
    lens: Vec<f64>,
    total: f64,
}

impl Quadrature<'_> {
    /// Integrand times `du/ds` at local parameter `s` (and `1 − s`) on segment `k`.
    fn integrand(&self, k: usize, s: f64, s1: f64) -> Result<Complex64> {
        let segs = self.lens.len();
        let (p0, p1) = (self.path.waypoints[k], self.path.waypoints[k + 1]);
        let delta = p1 - p0;
        let u = if s <= 0.5 { p0 + delta * s } else { p1 - delta * s1 };
        let cum: f64 = self.lens[..k].iter().sum();
        let g = (cum + s * self.lens[k]) / self.total;
        let n = self.cfg.n();
        let mut d = Vec::with_capacity(n);
        for j in 1..=n {
            d.push(if k == 0 && j == self.path.start_index {
                delta * s
            } else if k + 1 == segs && j == self.path.end_index {
                -delta * s1
            } else {
                u - self.cfg.t[j - 1]
            });
        }
        let mut log_t = TWO_PI_I * self.cfg.c0 * u;
        for j in 0..n {
            let principal = self.th.theta1(d[j])?.ln();
            log_t += self.cfg.c[j] * self.branch.lift(j, g, principal);
        }
        let phi = eval_offsets(&self.th, &self.phi, &d, self.cfg.lambda)?;
        Ok(log_t.exp() * phi * delta)
    }

    /// `h Σ f(kh)` over the nodes of one level; `odd_only` skips nodes of
    /// the previous level. Returns the sum and the sum of magnitudes.
    fn level_sum(&self, h: f64, odd_only: bool) -> Result<(Complex64, f64)> {
        let t_max = (TAIL_LOG / PI).asinh();
        let kmax = (t_max / h).floor() as i64;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for seg in 0..self.lens.len() {
            for k in -kmax..=kmax {
                if odd_only && k % 2 == 0 {
                    continue;
                }
                let t = k as f64 * h;
                let v = 0.5 * PI * t.sinh();
                let s = 1.0 / (1.0 + (-2.0 * v).exp());
                let s1 = 1.0 / (1.0 + (2.0 * v).exp());
                let w = PI * t.cosh() * s * s1;
                if w == 0.0 || s == 0.0 || s1 == 0.0 {
                    continue;
                }
                let f = self.integrand(seg, s, s1)? * w;
                sum += f;
                abs += f.norm();
            }
        }
        Ok((sum * h, abs * h))
    }
}

/// `∫ T(u)φ` along the path with a precomputed branch.
pub fn rw_integral_with(
    path: &SegmentPath,
    phi: &CocycleExpr,
    cfg: &ModuliConfig,
    branch: &BranchData,
    opts: &QuadOptions,
) -> Result<Integral> {
    let phi = phi.expand(cfg)?;
    for a in [path.start_index, path.end_index] {
        let exponent = endpoint_exponent(cfg, &phi, a);
        if exponent.re <= -1.0 {
            return Err(PairingError::DivergentEndpoint { index: a, exponent });
        }
    }
    let uses_lambda = phi.terms.iter().any(|(_, g)| matches!(g, Generator::Psi(_) | Generator::DPsi(_)));
    if uses_lambda && cfg.tp.lattice_distance(cfg.lambda) < POLE_TOL {
        return Err(ThetaError::LambdaOnLattice(cfg.lambda).into());
    }
    let lens = path.lengths();
    let total = lens.iter().sum();
    let q = Quadrature { th: cfg.theta()?, cfg, path, branch, phi, lens, total };
    let h_of = |level: u32| 2f64.powi(3 - level as i32);
    let mut level = opts.min_level.max(1);
    let (mut est, _) = q.level_sum(h_of(level), false)?;
    let mut change = f64::INFINITY;
    while level < opts.max_level.max(opts.min_level + 1) {
        level += 1;
        let (extra, abs) = q.level_sum(h_of(level), true)?;
        let next = est * 0.5 + extra;
        change = (next - est).norm();
        let floor = 256.0 * f64::EPSILON * (abs * 2.0);
        est = next;
        if change <= opts.tol * est.norm() + floor {
            return Ok(Integral { value: est, levels: level, change });
        }
    }
    Err(PairingError::QuadratureStall { level, change })
}

pub fn rw_integral(path: &SegmentPath, phi: &CocycleExpr, cfg: &ModuliConfig) -> Result<Integral> {
    let branch = track_branch(path, cfg)?;
    rw_integral_with(path, phi, cfg, &branch, &QuadOptions::default())
}

/// `(∫ Tψ_1, …, ∫ Tψ_n)` on one branch; entries are computed concurrently.
pub fn f_vector_with(
    path: &SegmentPath,
    cfg: &ModuliConfig,
    branch: &BranchData,
    opts: &QuadOptions,
) -> Result<Vec<Integral>> {
    let gens: Vec<usize> = (1..=cfg.n()).collect();
    par::map(&gens, |&j| rw_integral_with(path, &Generator::Psi(j).into(), cfg, branch, opts)).into_iter().collect()
}

pub fn f_vector(path: &SegmentPath, cfg: &ModuliConfig) -> Result<Vec<Complex64>> {
    let branch = track_branch(path, cfg)?;
    Ok(f_vector_with(path, cfg, &branch, &QuadOptions::default())?.iter().map(|i| i.value).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContiguityOutcome {
    /// `‖f′ − S f‖ / ‖f′‖`.
    pub residual: f64,
    pub f: Vec<Complex64>,
    pub f_shifted: Vec<Complex64>,
    /// Highest quadrature level used.
    pub levels: u32,
    /// Worst row mismatch of `(S^p_q)′` at points on the path.
    pub pointwise: f64,
}

pub fn verify_contiguity_integral(p: usize, q: usize, path: &SegmentPath, cfg: &ModuliConfig) -> Result<ContiguityOutcome> {
    verify_contiguity_integral_with(p, q, path, cfg, &QuadOptions::default())
}

pub fn verify_contiguity_integral_with(
    p: usize,
    q: usize,
    path: &SegmentPath,
    cfg: &ModuliConfig,
    opts: &QuadOptions,
) -> Result<ContiguityOutcome> {
    let n = cfg.n();
    if !(1..=n).contains(&p) || !(1..=n).contains(&q) || p == q {
        return Err(CohomologyError::IndexOutOfRange(format!("(p, q) = ({p}, {q}) with n = {n}")).into());
    }
    let sh = cfg.shifted(p, q);
    for a in [path.start_index, path.end_index] {
        // ψ_a carries the simple pole at t_a, the worst case among the ψ
        let exponent = sh.c[a - 1] - 1.0;
        if exponent.re <= -1.0 {
            return Err(PairingError::ShiftBreaksConvergence { index: a, exponent });
        }
    }
    let s = contiguity_matrix(p, q, cfg)?;
    let branch = track_branch(path, cfg)?;
    let f = f_vector_with(path, cfg, &branch, opts)?;
    let fs = f_vector_with(path, &sh, &branch, opts)?;
    let levels = f.iter().chain(&fs).map(|i| i.levels).max().unwrap_or(0);
    let f: Vec<Complex64> = f.iter().map(|i| i.value).collect();
    let fs: Vec<Complex64> = fs.iter().map(|i| i.value).collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..n {
        let mut sf = Complex64::new(0.0, 0.0);
        for k in 0..n {
            sf += s[(j, k)] * f[k];
        }
        num += (fs[j] - sf).norm_sqr();
        den += fs[j].norm_sqr();
    }
    let points: Vec<Complex64> = (0..20).map(|k| path.point_at((k as f64 + 0.5) / 20.0)).collect();
    let pointwise = contiguity_prime_pointwise(p, q, cfg, &points)?;
    Ok(ContiguityOutcome { residual: (num / den).sqrt(), f, f_shifted: fs, levels, pointwise })
}

/// Configuration for the end-to-end check: `τ = i`, `n = 3`,
/// `c = (0.3, 0.4, −0.7)`, random punctures and `λ`, straight path `t_1 → t_2`
/// kept well away from `t_3`, and `(p, q) = (2, 3)` admissible.
pub fn default_scenario(seed: u64) -> (ModuliConfig, SegmentPath) {
    let tau = Complex64::new(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = vec![Complex64::new(0.3, 0.0), Complex64::new(0.4, 0.0), Complex64::new(-0.7, 0.0)];
    let c0 = Complex64::new(0.15, 0.0);
    loop {
        let pt = |rng: &mut ChaCha8Rng| Complex64::new(rng.gen::<f64>(), 0.0) + tau * rng.gen::<f64>();
        let t: Vec<Complex64> = (0..3).map(|_| pt(&mut rng)).collect();
        let lambda = pt(&mut rng);
        let Ok(cfg) = ModuliConfig::new(tau, t.clone(), c0, c.clone(), lambda) else { continue };
        let tp = cfg.tp;
        let mut ok = tp.lattice_distance(lambda) > 0.2 && tp.lattice_distance(2.0 * (t[1] - t[2]) - lambda) > 0.2;
        for j in 0..3 {
            for k in 0..3 {
                if j != k {
                    ok &= tp.lattice_distance(t[j] - t[k]) > 0.25;
                    ok &= tp.lattice_distance(lambda - t[j] + t[k]) > 0.2;
                }
            }
        }
        if !ok {
            continue;
        }
        let Ok(path) = SegmentPath::straight(1, 2, &cfg) else { continue };
        if path.clearance(&cfg).1 > 0.2 && contiguity_matrix(2, 3, &cfg).is_ok() {
            return (cfg, path);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{fact23_coefficients, fact23_combination};

    fn scenario() -> (ModuliConfig, SegmentPath) {
        default_scenario(7)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm())
    }

    #[test]
    fn closed_loop_has_no_winding() {
        let (cfg, _) = scenario();
        let th = cfg.theta().unwrap();
        // small square around a point far from every puncture
        let centre = cfg.t[0] + (cfg.t[1] - cfg.t[0]) * 0.5;
        let r = 0.05;
        let corners = [
            centre + Complex64::new(r, r),
            centre + Complex64::new(-r, r),
            centre + Complex64::new(-r, -r),
            centre + Complex64::new(r, -r),
        ];
        let start = principal_logs(&th, &cfg, corners[0]).unwrap();
        let mut logs = start.clone();
        for k in 0..4 {
            logs = transport_logs(&cfg, corners[k], corners[(k + 1) % 4], &logs).unwrap();
        }
        for (a, b) in logs.iter().zip(&start) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
        // a loop around t_1 does wind once
        let around: Vec<Complex64> =
            (0..4).map(|k| cfg.t[0] + Complex64::from_polar(0.1, PI / 4.0 + k as f64 * PI / 2.0)).collect();
        let start = principal_logs(&th, &cfg, around[0]).unwrap();
        let mut logs = start.clone();
        for k in 0..4 {
            logs = transport_logs(&cfg, around[k], around[(k + 1) % 4], &logs).unwrap();
        }
        assert!((logs[0] - start[0] - TWO_PI_I).norm() < 1e-12);
        assert!((logs[1] - start[1]).norm() < 1e-12);
    }

    #[test]
    fn tracking_is_deterministic_and_based_at_midpoint() {
        let (cfg, path) = scenario();
        let b1 = track_branch(&path, &cfg).unwrap();
        let b2 = track_branch(&path, &cfg).unwrap();
        assert_eq!(b1, b2);
        let th = cfg.theta().unwrap();
        let mid = principal_logs(&th, &cfg, path.point_at(0.5)).unwrap();
        assert_eq!(b1.base_logs(), mid);
        for col in &b1.logs {
            for w in col.windows(2) {
                assert!((w[1] - w[0]).im.abs() < PI);
            }
        }
    }

    #[test]
    fn path_errors() {
        let (cfg, _) = scenario();
        assert!(matches!(SegmentPath::straight(1, 1, &cfg), Err(PairingError::BadPath(_))));
        let via = [cfg.t[2] + Complex64::new(1e-4, 0.0)];
        let path = SegmentPath::through(1, 2, &via, &cfg).unwrap();
        assert!(matches!(track_branch(&path, &cfg), Err(PairingError::PathTooCloseToPuncture { index: 3, .. })));
        // through a lattice translate of t_3
        let via = [cfg.t[2] + Complex64::new(1.0, 0.0)];
        let path = SegmentPath::through(1, 2, &via, &cfg).unwrap();
        assert!(matches!(track_branch(&path, &cfg), Err(PairingError::PathTooCloseToPuncture { index: 3, .. })));
    }

    #[test]
    fn divergent_endpoint_and_linearity() {
        let (cfg, path) = scenario();
        let branch = track_branch(&path, &cfg).unwrap();
        let opts = QuadOptions::default();
        let phi: CocycleExpr = Generator::Psi(3).into();
        let one = rw_integral_with(&path, &phi, &cfg, &branch, &opts).unwrap();
        let two = rw_integral_with(&path, &phi.scale(Complex64::new(2.0, 0.0)), &cfg, &branch, &opts).unwrap();
        assert!(rel(two.value, one.value * 2.0) < 1e-12);
        // ∂𝔰 at t_1 gives exponent c_1 − 2
        let d: CocycleExpr = Generator::DPsi(1).into();
        assert!(matches!(
            rw_integral_with(&path, &d, &cfg, &branch, &opts),
            Err(PairingError::DivergentEndpoint { index: 1, .. })
        ));
        let mut neg = cfg.clone();
        neg.c = vec![Complex64::new(-0.2, 0.0), Complex64::new(0.4, 0.0), Complex64::new(-0.2, 0.0)];
        assert!(matches!(rw_integral(&path, &Generator::Psi(1).into(), &neg), Err(PairingError::DivergentEndpoint { .. })));
    }

    #[test]
    fn refinement_and_level_stability() {
        let (cfg, path) = scenario();
        let base = f_vector(&path, &cfg).unwrap();
        let mut fine = path.clone();
        fine.steps *= 2;
        let branch = track_branch(&fine, &cfg).unwrap();
        let doubled = f_vector_with(&fine, &cfg, &branch, &QuadOptions::default()).unwrap();
        for (a, b) in base.iter().zip(&doubled) {
            assert!(a.norm().is_finite() && a.norm() > 0.0);
            assert!(rel(*a, b.value) < 1e-10);
        }
        let forced = QuadOptions { min_level: 10, max_level: 12, ..QuadOptions::default() };
        let deep = f_vector_with(&path, &cfg, &track_branch(&path, &cfg).unwrap(), &forced).unwrap();
        for (a, b) in base.iter().zip(&deep) {
            assert!(rel(*a, b.value) < 1e-10);
        }
    }

    #[test]
    fn branch_shift_is_a_common_scalar() {
        let (cfg, path) = scenario();
        let branch = track_branch(&path, &cfg).unwrap();
        let mut base = branch.base_logs();
        base[2] += TWO_PI_I;
        let shifted = track_branch_from(&path, &cfg, &base).unwrap();
        let opts = QuadOptions::default();
        let f = f_vector_with(&path, &cfg, &branch, &opts).unwrap();
        let g = f_vector_with(&path, &cfg, &shifted, &opts).unwrap();
        let unit = (TWO_PI_I * cfg.c[2]).exp();
        for (a, b) in f.iter().zip(&g) {
            assert!(rel(b.value, a.value * unit) < 1e-12);
        }
    }

    #[test]
    fn homotopic_paths_agree() {
        let (cfg, path) = scenario();
        let (a, b) = (cfg.t[0], cfg.t[1]);
        let normal = (b - a) * Complex64::new(0.0, 1.0) / (b - a).norm();
        // choose the side away from t_3 so the thin triangle is puncture-free
        let side = if ((cfg.t[2] - a) * normal.conj()).re > 0.0 { -1.0 } else { 1.0 };
        let via = a + (b - a) * 0.4 + normal * (0.08 * side);
        let bent = SegmentPath::through(1, 2, &[via], &cfg).unwrap();
        let straight = track_branch(&path, &cfg).unwrap();
        let mid1 = path.point_at(0.5);
        let mid2 = bent.point_at(0.5);
        let moved = transport_logs(&cfg, mid1, mid2, &straight.base_logs()).unwrap();
        let branch = track_branch_from(&bent, &cfg, &moved).unwrap();
        let opts = QuadOptions::default();
        let f1 = f_vector_with(&path, &cfg, &straight, &opts).unwrap();
        let f2 = f_vector_with(&bent, &cfg, &branch, &opts).unwrap();
        for (x, y) in f1.iter().zip(&f2) {
            assert!(rel(x.value, y.value) < 1e-8, "{} vs {}", x.value, y.value);
        }
    }

    #[test]
    fn relation_kills_periods() {
        // endpoints with positive exponents so boundary terms vanish
        let (base, _) = scenario();
        let c = vec![Complex64::new(-0.7, 0.0), Complex64::new(0.3, 0.0), Complex64::new(0.4, 0.0)];
        let cfg = ModuliConfig::new(base.tau(), base.t.clone(), base.c0, c, base.lambda).unwrap();
        let path = SegmentPath::straight(2, 3, &cfg).unwrap();
        let branch = track_branch(&path, &cfg).unwrap();
        let opts = QuadOptions::default();
        let rel_expr = fact23_combination(&fact23_coefficients(&cfg, true).unwrap(), &cfg);
        let mut total = Complex64::new(0.0, 0.0);
        let mut scale = 0f64;
        for &(a, g) in &rel_expr.terms {
            let v = a * rw_integral_with(&path, &g.into(), &cfg, &branch, &opts).unwrap().value;
            total += v;
            scale = scale.max(v.norm());
        }
        assert!(total.norm() < 1e-6 * scale, "{} vs {scale}", total.norm());
        let wrong = fact23_combination(&fact23_coefficients(&cfg, false).unwrap(), &cfg);
        let mut bad = Complex64::new(0.0, 0.0);
        for &(a, g) in &wrong.terms {
            bad += a * rw_integral_with(&path, &g.into(), &cfg, &branch, &opts).unwrap().value;
        }
        assert!(bad.norm() > 1e-4 * scale);
    }

    #[test]
    fn contiguity_on_integrals() {
        let (cfg, path) = scenario();
        let out = verify_contiguity_integral(2, 3, &path, &cfg).unwrap();
        assert!(out.residual < 1e-6, "residual {}", out.residual);
        assert!(out.pointwise < 1e-11);
        // a different continuation for the shifted exponents breaks the relation
        let branch = track_branch(&path, &cfg).unwrap();
        let mut base = branch.base_logs();
        base[0] += TWO_PI_I;
        let other = track_branch_from(&path, &cfg, &base).unwrap();
        let opts = QuadOptions::default();
        let fs = f_vector_with(&path, &cfg.shifted(2, 3), &other, &opts).unwrap();
        let s = contiguity_matrix(2, 3, &cfg).unwrap();
        let sf0: Complex64 = (0..3).map(|k| s[(0, k)] * out.f[k]).sum();
        assert!(rel(fs[0].value, sf0) > 1e-2);
        assert!(matches!(
            verify_contiguity_integral(2, 1, &path, &cfg),
            Err(PairingError::ShiftBreaksConvergence { index: 1, .. })
        ));
    }

    #[test]
    fn residual_tracks_quadrature_tolerance() {
        let (cfg, path) = scenario();
        let mut last = f64::INFINITY;
        for tol in [1e-3, 1e-6, 1e-9, 1e-12] {
            let opts = QuadOptions { tol, min_level: 3, max_level: 12 };
            let r = verify_contiguity_integral_with(2, 3, &path, &cfg, &opts).unwrap().residual;
            assert!(r <= last.max(1e-13), "tol {tol}: {r} after {last}");
            last = r;
        }
        assert!(last < 1e-10);
    }
}
