//! Moduli configurations `(τ, t, c_0, c, λ)` and their JSON form.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::theta::{SeriesPolicy, Theta, ThetaError, TorusParam};

/// Tolerance on `|c_1 + ⋯ + c_n|`.
pub const SUM_TOL: f64 = 1e-12;
/// Minimum lattice distance between distinct punctures.
pub const DISTINCT_TOL: f64 = 1e-10;
/// Exponents this close to an integer are flagged.
pub const INTEGER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl From<ThetaError> for ConfigError {
    fn from(e: ThetaError) -> Self {
        ConfigError::InvariantViolation(format!("tau: {e}"))
    }
}

/// A point of the parameter space together with the derived `c_∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuliConfig {
    pub tp: TorusParam,
    pub t: Vec<Complex64>,
    pub c0: Complex64,
    pub c: Vec<Complex64>,
    pub lambda: Complex64,
    pub c_inf: Complex64,
}

impl ModuliConfig {
    pub fn new(
        tau: Complex64,
        t: Vec<Complex64>,
        c0: Complex64,
        c: Vec<Complex64>,
        lambda: Complex64,
    ) -> Result<Self, ConfigError> {
        let tp = TorusParam::new(tau)?;
        let n = c.len();
        if n < 2 {
            return Err(ConfigError::InvariantViolation("n at least 2".into()));
        }
        if t.len() != n {
            return Err(ConfigError::InvariantViolation("length of t".into()));
        }
        let sum: Complex64 = c.iter().sum();
        if sum.norm() >= SUM_TOL {
            return Err(ConfigError::InvariantViolation("sum of c".into()));
        }
        for j in 0..n {
            for k in j + 1..n {
                if tp.lattice_distance(t[j] - t[k]) < DISTINCT_TOL {
                    return Err(ConfigError::InvariantViolation("distinct punctures".into()));
                }
            }
        }
        let all = t.iter().chain(&c).chain([&c0, &lambda]);
        if all.into_iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ConfigError::InvariantViolation("finite values".into()));
        }
        let c_inf = derived_c_inf(tau, &t, c0, &c, lambda);
        Ok(Self { tp, t, c0, c, lambda, c_inf })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn tau(&self) -> Complex64 {
        self.tp.tau()
    }

    pub fn theta(&self) -> Result<Theta, ThetaError> {
        Theta::new(self.tp, SeriesPolicy::default())
    }

    /// Exponents `(c_1..c_{n−1}, c_0, c_∞)` for symbolic evaluation.
    pub fn exponent_point(&self) -> Vec<Complex64> {
        let n = self.n();
        let mut e: Vec<Complex64> = self.c[..n - 1].to_vec();
        e.push(self.c0);
        e.push(self.c_inf);
        e
    }

    /// All parameters negated: `(c_*, c_0, λ) ↦ −(c_*, c_0, λ)`.
    pub fn dual(&self) -> Self {
        Self {
            tp: self.tp,
            t: self.t.clone(),
            c0: -self.c0,
            c: self.c.iter().map(|z| -z).collect(),
            lambda: -self.lambda,
            c_inf: -self.c_inf,
        }
    }

    /// `(c_p, c_q, λ) ↦ (c_p + 1, c_q − 1, λ − t_p + t_q)`; `c_∞` is unchanged.
    /// Indices are 1-based.
    pub fn shifted(&self, p: usize, q: usize) -> Self {
        let mut out = self.clone();
        out.c[p - 1] += 1.0;
        out.c[q - 1] -= 1.0;
        out.lambda = self.lambda - self.t[p - 1] + self.t[q - 1];
        out.c_inf = derived_c_inf(self.tau(), &out.t, out.c0, &out.c, out.lambda);
        out
    }

    /// Non-fatal conditions: integer exponents, `λ` on the lattice, points
    /// outside the fundamental parallelogram.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        for (j, cj) in self.c.iter().enumerate() {
            if (cj.re - cj.re.round()).abs() < INTEGER_TOL && cj.im.abs() < INTEGER_TOL {
                w.push(format!("c{} is an integer", j + 1));
            }
        }
        if self.tp.lattice_distance(self.lambda) < DISTINCT_TOL {
            w.push("lambda lies on the lattice".into());
        }
        if !self.tp.in_fundamental_domain(self.lambda) {
            w.push("lambda outside the fundamental parallelogram".into());
        }
        for (j, tj) in self.t.iter().enumerate() {
            if !self.tp.in_fundamental_domain(*tj) {
                w.push(format!("t{} outside the fundamental parallelogram", j + 1));
            }
        }
        w
    }

    pub fn to_file(&self) -> ConfigFile {
        let p = |z: &Complex64| [z.re, z.im];
        ConfigFile {
            tau: p(&self.tau()),
            n: self.n(),
            t: self.t.iter().map(p).collect(),
            c0: p(&self.c0),
            c: self.c.iter().map(p).collect(),
            lambda: p(&self.lambda),
        }
    }

    /// Random admissible configuration: punctures and `λ` in the
    /// parallelogram kept `sep` apart (and `λ`, `λ ± (t_p − t_q)` off the
    /// lattice), exponents with real parts in `(−0.9, 0.9)` kept away from
    /// integers.
    pub fn random<R: Rng>(rng: &mut R, tau: Complex64, n: usize, sep: f64) -> Self {
        let tp = TorusParam::new(tau).expect("valid tau");
        loop {
            let pt = |rng: &mut R| Complex64::new(rng.gen::<f64>(), 0.0) + tau * rng.gen::<f64>();
            let t: Vec<Complex64> = (0..n).map(|_| pt(rng)).collect();
            let lambda = pt(rng);
            let mut ok = tp.lattice_distance(lambda) > sep;
            for j in 0..n {
                for k in 0..n {
                    if j != k {
                        ok &= tp.lattice_distance(t[j] - t[k]) > sep;
                        ok &= tp.lattice_distance(lambda - t[j] + t[k]) > sep;
                    }
                }
            }
            let mut c: Vec<Complex64> = (0..n - 1)
                .map(|_| Complex64::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.2..0.2)))
                .collect();
            let last = -c.iter().sum::<Complex64>();
            c.push(last);
            for cj in &c {
                let frac = (cj.re - cj.re.round()).abs();
                ok &= frac > 0.08 && cj.re.abs() < 0.92;
            }
            let c0 = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.2..0.2));
            if ok {
                if let Ok(cfg) = Self::new(tau, t, c0, c, lambda) {
                    return cfg;
                }
            }
        }
    }
}

fn derived_c_inf(tau: Complex64, t: &[Complex64], c0: Complex64, c: &[Complex64], lambda: Complex64) -> Complex64 {
    let mut v = -lambda - c0 * tau;
    for (cj, tj) in c.iter().zip(t) {
        v -= cj * tj;
    }
    v
}

/// On-disk JSON layout; complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub tau: [f64; 2],
    pub n: usize,
    pub t: Vec<[f64; 2]>,
    pub c0: [f64; 2],
    pub c: Vec<[f64; 2]>,
    pub lambda: [f64; 2],
}

impl ConfigFile {
    pub fn into_config(self) -> Result<ModuliConfig, ConfigError> {
        let z = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        if self.c.len() != self.n {
            return Err(ConfigError::InvariantViolation("length of c".into()));
        }
        if self.t.len() != self.n {
            return Err(ConfigError::InvariantViolation("length of t".into()));
        }
        ModuliConfig::new(
            z(self.tau),
            self.t.into_iter().map(z).collect(),
            z(self.c0),
            self.c.into_iter().map(z).collect(),
            z(self.lambda),
        )
    }
}

/// Parses and validates a JSON configuration document.
pub fn parse_config(text: &str) -> Result<ModuliConfig, ConfigError> {
    let file: ConfigFile = serde_json::from_str(text)
        .map_err(|e| ConfigError::ParseError(format!("line {} column {}: {e}", e.line(), e.column())))?;
    file.into_config()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"tau":[0,1],"n":2,"t":[[0.1,0.2],[0.6,0.5]],"c0":[0.1,0],
        "c":[[0.3,0],[-0.3,0]],"lambda":[0.35,0.4]}"#;

    #[test]
    fn minimal_config_derives_c_inf() {
        let cfg = parse_config(MINIMAL).unwrap();
        let expect = -Complex64::new(0.35, 0.4)
            - Complex64::new(0.1, 0.0) * Complex64::i()
            - 0.3 * Complex64::new(0.1, 0.2)
            + 0.3 * Complex64::new(0.6, 0.5);
        assert!((cfg.c_inf - expect).norm() < 1e-15);
        assert!(cfg.warnings().is_empty(), "{:?}", cfg.warnings());
    }

    #[test]
    fn invariant_violations() {
        let bad_sum = MINIMAL.replace("[-0.3,0]", "[-0.29,0]");
        assert_eq!(parse_config(&bad_sum), Err(ConfigError::InvariantViolation("sum of c".into())));
        let same = MINIMAL.replace("[0.6,0.5]", "[0.1,0.2]");
        assert_eq!(parse_config(&same), Err(ConfigError::InvariantViolation("distinct punctures".into())));
        let shifted = MINIMAL.replace("[0.6,0.5]", "[1.1,1.2]");
        assert_eq!(parse_config(&shifted), Err(ConfigError::InvariantViolation("distinct punctures".into())));
        let unknown = MINIMAL.replace("\"n\":2", "\"n\":2,\"extra\":1");
        assert!(matches!(parse_config(&unknown), Err(ConfigError::ParseError(_))));
        assert!(matches!(parse_config("{"), Err(ConfigError::ParseError(_))));
    }

    #[test]
    fn integer_exponent_is_a_warning() {
        let text = MINIMAL.replace("[0.3,0]", "[1,0]").replace("[-0.3,0]", "[-1,0]");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.warnings().len(), 2);
    }

    #[test]
    fn dual_and_shift_preserve_sum() {
        let cfg = parse_config(MINIMAL).unwrap();
        let d = cfg.dual();
        assert!((d.c_inf + cfg.c_inf).norm() < 1e-15);
        let s = cfg.shifted(1, 2);
        assert!(s.c.iter().sum::<Complex64>().norm() < 1e-15);
        // c_∞ = −λ − c_0τ − Σc_j t_j is invariant under the shift
        assert!((s.c_inf - cfg.c_inf).norm() < 1e-14);
    }
}
