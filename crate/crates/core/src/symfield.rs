//! Exact rational functions in the exponential variables
//! `x_1, …, x_{n−1}, x_0, x_∞` over ℚ.
//!
//! `x_n` is not a variable: it is the monomial `(x_1⋯x_{n−1})^{−1}`.
//! A [`SymRat`] is kept as `unit · x^mono · Π num_i / Π den_j` where every
//! factor is a normalized Laurent polynomial (minimal exponents zero,
//! lex-leading coefficient one). Addition cancels by trial division
//! against the denominator factors; no multivariate gcd is attempted.
//! Zero is always detected exactly, so equality is decided by testing
//! `a − b` for zero.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Denominator factors smaller than this times their term scale count as zero.
pub const EVAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

type Mon = Vec<i32>;

/// Parameter-shift substitutions used by the connection formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    /// `x_∞ ↦ x_∞ x_p`
    P0(usize),
    /// `x_0 ↦ x_0 x_p`
    PInf(usize),
}

/// Laurent polynomial with rational coefficients in `nvars` variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Mon, BigRational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<i32>, c: BigRational) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lex order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[i32], &BigRational)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    fn add_term(&mut self, m: Mon, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get_mut();
                *v += c;
                if v.is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Mon = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, BigRational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Applies a monomial map `m ↦ f(m)` and recollects terms.
    pub fn map_monomials(&self, f: impl Fn(&[i32]) -> Mon) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    fn min_exponents(&self) -> Mon {
        let mut mins = vec![i32::MAX; self.nvars];
        for m in self.terms.keys() {
            for (lo, &e) in mins.iter_mut().zip(m) {
                *lo = (*lo).min(e);
            }
        }
        mins
    }

    fn max_exponents(&self) -> Mon {
        let mut maxs = vec![i32::MIN; self.nvars];
        for m in self.terms.keys() {
            for (hi, &e) in maxs.iter_mut().zip(m) {
                *hi = (*hi).max(e);
            }
        }
        maxs
    }

    /// Exact quotient `self / d` if `d` divides `self` in the polynomial
    /// ring. Both must have nonnegative exponents.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        let fmax = self.max_exponents();
        let dmax = d.max_exponents();
        let bound: Mon = fmax.iter().zip(&dmax).map(|(a, b)| a - b).collect();
        if bound.iter().any(|&b| b < 0) {
            return None;
        }
        let (dlm, dlc) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rlm, rlc)) = rem.terms.iter().next_back() {
            let qm: Mon = rlm.iter().zip(dlm).map(|(a, b)| a - b).collect();
            if qm.iter().zip(&bound).any(|(&e, &b)| e < 0 || e > b) {
                return None;
            }
            let qc = rlc / dlc;
            for (m, c) in &d.terms {
                let mm: Mon = m.iter().zip(&qm).map(|(a, b)| a + b).collect();
                rem.add_term(mm, -(c * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Splits off monomial content and leading coefficient:
    /// `self = unit · x^mono · factor`, with `factor` `None` when `self`
    /// is a single term.
    fn normalize(&self) -> (BigRational, Mon, Option<LaurentPoly>) {
        debug_assert!(!self.is_zero());
        let mins = self.min_exponents();
        let neg: Mon = mins.iter().map(|e| -e).collect();
        let shifted = self.shift(&neg);
        let lc = shifted.terms.values().next_back().cloned().expect("nonzero");
        if shifted.num_terms() == 1 {
            return (lc, mins, None);
        }
        let inv = lc.recip();
        (lc, mins, Some(shifted.scale(&inv)))
    }

    /// Value at `x_v = e^{2πi e_v}` and the sum of absolute term values.
    pub fn eval_exponents(&self, exps: &[Complex64]) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (m, c) in &self.terms {
            let mut arg = Complex64::new(0.0, 0.0);
            for (&e, &x) in m.iter().zip(exps) {
                if e != 0 {
                    arg += x * e as f64;
                }
            }
            let v = (Complex64::new(0.0, 2.0 * PI) * arg).exp() * c.to_f64().unwrap_or(f64::NAN);
            scale += v.norm();
            acc += v;
        }
        (acc, scale)
    }
}

/// Element of the fraction field; see the module docs for the layout.
#[derive(Debug, Clone)]
pub struct SymRat {
    n: usize,
    unit: BigRational,
    mono: Mon,
    num: BTreeMap<LaurentPoly, u32>,
    den: BTreeMap<LaurentPoly, u32>,
}

fn expand(factors: &BTreeMap<LaurentPoly, u32>, nvars: usize) -> LaurentPoly {
    let mut out = LaurentPoly::constant(nvars, BigRational::one());
    for (f, &k) in factors {
        out = out.mul(&f.pow(k));
    }
    out
}

fn insert_factor(map: &mut BTreeMap<LaurentPoly, u32>, f: LaurentPoly, k: u32) {
    if k > 0 {
        *map.entry(f).or_insert(0) += k;
    }
}

impl SymRat {
    /// Number of punctures this element is defined for (`n+1` variables).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    pub fn zero(n: usize) -> Self {
        Self { n, unit: BigRational::zero(), mono: vec![0; n + 1], num: BTreeMap::new(), den: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_int(n, 1)
    }

    pub fn from_int(n: usize, k: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_rational(n: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(n);
        }
        Self { n, unit: c, mono: vec![0; n + 1], num: BTreeMap::new(), den: BTreeMap::new() }
    }

    /// The monomial `x^exps` with `exps` ordered `(x_1..x_{n−1}, x_0, x_∞)`.
    pub fn monomial(n: usize, exps: Vec<i32>) -> Self {
        assert_eq!(exps.len(), n + 1, "monomial arity");
        Self { n, unit: BigRational::one(), mono: exps, num: BTreeMap::new(), den: BTreeMap::new() }
    }

    /// `x_j` for `j = 1..=n`; `x_n` is the derived monomial.
    pub fn x(n: usize, j: usize) -> Self {
        assert!((1..=n).contains(&j), "x index {j} out of range 1..={n}");
        let mut e = vec![0; n + 1];
        if j == n {
            for v in e.iter_mut().take(n - 1) {
                *v = -1;
            }
        } else {
            e[j - 1] = 1;
        }
        Self::monomial(n, e)
    }

    pub fn x0(n: usize) -> Self {
        let mut e = vec![0; n + 1];
        e[n - 1] = 1;
        Self::monomial(n, e)
    }

    pub fn xinf(n: usize) -> Self {
        let mut e = vec![0; n + 1];
        e[n] = 1;
        Self::monomial(n, e)
    }

    /// `S_j = x_1⋯x_j`, so `S_0 = S_n = 1`.
    pub fn partial_product(n: usize, j: usize) -> Self {
        assert!(j <= n);
        let mut e = vec![0; n + 1];
        if j < n {
            for v in e.iter_mut().take(j) {
                *v = 1;
            }
        }
        Self::monomial(n, e)
    }

    pub fn from_poly(n: usize, p: &LaurentPoly) -> Self {
        assert_eq!(p.nvars(), n + 1, "polynomial arity");
        if p.is_zero() {
            return Self::zero(n);
        }
        let (unit, mono, f) = p.normalize();
        let mut num = BTreeMap::new();
        if let Some(f) = f {
            num.insert(f, 1);
        }
        Self { n, unit, mono, num, den: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.unit.is_one() && self.mono.iter().all(|&e| e == 0) && self.num.is_empty() && self.den.is_empty()
    }

    /// Expanded numerator `unit · x^mono · Π num`.
    pub fn numerator(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero(self.nvars());
        }
        expand(&self.num, self.nvars()).scale(&self.unit).shift(&self.mono)
    }

    /// Expanded denominator: monic, with minimal exponents zero.
    pub fn denominator(&self) -> LaurentPoly {
        expand(&self.den, self.nvars())
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(self.n, other.n, "SymRat arity mismatch");
    }

    /// Cancels identical factors and then composite numerator factors
    /// that some denominator factor divides exactly.
    fn cancel(mut self) -> Self {
        let common: Vec<(LaurentPoly, u32)> = self
            .num
            .iter()
            .filter_map(|(f, &k)| self.den.get(f).map(|&d| (f.clone(), k.min(d))))
            .collect();
        for (f, k) in common {
            dec(&mut self.num, &f, k);
            dec(&mut self.den, &f, k);
        }
        loop {
            let mut hit = None;
            'outer: for f in self.num.keys() {
                for d in self.den.keys() {
                    if f.num_terms() > d.num_terms() {
                        if let Some(q) = f.exact_div(d) {
                            hit = Some((f.clone(), d.clone(), q));
                            break 'outer;
                        }
                    }
                }
            }
            let Some((f, d, q)) = hit else { break };
            dec(&mut self.num, &f, 1);
            dec(&mut self.den, &d, 1);
            let (u, m, qf) = q.normalize();
            self.unit *= u;
            for (a, b) in self.mono.iter_mut().zip(&m) {
                *a += b;
            }
            if let Some(qf) = qf {
                if self.den.contains_key(&qf) {
                    dec(&mut self.den, &qf, 1);
                } else {
                    insert_factor(&mut self.num, qf, 1);
                }
            }
        }
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_arity(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.n);
        }
        let mut out = self.clone();
        out.unit *= &other.unit;
        for (a, b) in out.mono.iter_mut().zip(&other.mono) {
            *a += b;
        }
        for (f, &k) in &other.num {
            insert_factor(&mut out.num, f.clone(), k);
        }
        for (f, &k) in &other.den {
            insert_factor(&mut out.den, f.clone(), k);
        }
        out.cancel()
    }

    pub fn inv(&self) -> Result<Self, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self {
            n: self.n,
            unit: self.unit.recip(),
            mono: self.mono.iter().map(|e| -e).collect(),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SymError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.unit = -out.unit;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_arity(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let nv = self.nvars();
        let mut common = BTreeMap::new();
        for (f, &k) in &self.num {
            if let Some(&j) = other.num.get(f) {
                common.insert(f.clone(), k.min(j));
            }
        }
        let mut den = self.den.clone();
        for (f, &k) in &other.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let mono: Mon = self.mono.iter().zip(&other.mono).map(|(a, b)| *a.min(b)).collect();
        let part = |x: &Self| -> LaurentPoly {
            let mut rest = BTreeMap::new();
            for (f, &k) in &x.num {
                let c = common.get(f).copied().unwrap_or(0);
                insert_factor(&mut rest, f.clone(), k - c);
            }
            for (f, &k) in &den {
                let have = x.den.get(f).copied().unwrap_or(0);
                insert_factor(&mut rest, f.clone(), k - have);
            }
            let shift: Mon = x.mono.iter().zip(&mono).map(|(a, b)| a - b).collect();
            expand(&rest, nv).scale(&x.unit).shift(&shift)
        };
        let p = part(self).add(&part(other));
        if p.is_zero() {
            return Self::zero(self.n);
        }
        let (unit, pm, pf) = p.normalize();
        let mut out = Self {
            n: self.n,
            unit,
            mono: mono.iter().zip(&pm).map(|(a, b)| a + b).collect(),
            num: common,
            den,
        };
        if let Some(pf) = pf {
            insert_factor(&mut out.num, pf, 1);
        }
        out.cancel()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn pow(&self, k: i32) -> Result<Self, SymError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one(self.n);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Upper bound on the term count of the expanded numerator or
    /// denominator, saturating.
    pub fn expansion_bound(&self) -> u64 {
        let bound = |m: &BTreeMap<LaurentPoly, u32>| {
            m.iter().fold(1u64, |acc, (f, &k)| acc.saturating_mul((f.num_terms() as u64).saturating_pow(k)))
        };
        bound(&self.num).max(bound(&self.den))
    }

    /// Largest absolute exponent appearing anywhere in the representation.
    pub fn max_abs_exponent(&self) -> u32 {
        let mut m = self.mono.iter().map(|e| e.unsigned_abs()).max().unwrap_or(0);
        for (f, &k) in self.num.iter().chain(&self.den) {
            for (e, _) in f.terms() {
                let d = e.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
                m = m.max(d.saturating_mul(k));
            }
        }
        m
    }

    /// Exact equality: `a − b` is identically zero.
    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    fn map_factors(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let nv = self.nvars();
        let mono_poly = LaurentPoly::monomial(self.mono.clone(), self.unit.clone());
        let mut out = Self::from_poly(self.n, &f(&mono_poly));
        let mut apply = |map: &BTreeMap<LaurentPoly, u32>, into_num: bool| {
            for (p, &k) in map {
                let img = f(p);
                debug_assert_eq!(img.nvars(), nv);
                let (u, m, g) = img.normalize();
                let sign = if into_num { 1 } else { -1 };
                let uk = num_traits::pow(u, k as usize);
                if into_num {
                    out.unit *= uk;
                } else {
                    out.unit /= uk;
                }
                for (a, b) in out.mono.iter_mut().zip(&m) {
                    *a += sign * b * k as i32;
                }
                if let Some(g) = g {
                    insert_factor(if into_num { &mut out.num } else { &mut out.den }, g, k);
                }
            }
        };
        apply(&self.num, true);
        apply(&self.den, false);
        out.cancel()
    }

    /// Every variable `x ↦ x^{−1}`.
    pub fn involution(&self) -> Self {
        self.map_factors(|p| p.map_monomials(|m| m.iter().map(|e| -e).collect()))
    }

    pub fn shift_subst(&self, kind: Shift) -> Self {
        let n = self.n;
        let (slot, p) = match kind {
            Shift::P0(p) => (n, p),
            Shift::PInf(p) => (n - 1, p),
        };
        assert!((1..=n).contains(&p), "shift index {p} out of range");
        self.map_factors(|poly| {
            poly.map_monomials(|m| {
                let a = m[slot];
                let mut out = m.to_vec();
                if p == n {
                    for v in out.iter_mut().take(n - 1) {
                        *v -= a;
                    }
                } else {
                    out[p - 1] += a;
                }
                out
            })
        })
    }

    /// Value at `x_v = e^{2πi e_v}` for exponents ordered
    /// `(c_1..c_{n−1}, c_0, c_∞)`.
    pub fn evaluate_exponents(&self, exps: &[Complex64]) -> Result<Complex64, SymError> {
        if exps.len() != self.nvars() {
            return Err(SymError::DimensionMismatch(format!(
                "expected {} exponents, got {}",
                self.nvars(),
                exps.len()
            )));
        }
        let mut den = Complex64::new(1.0, 0.0);
        for (f, &k) in &self.den {
            let (v, scale) = f.eval_exponents(exps);
            if v.norm() < EVAL_TOL * scale {
                return Err(SymError::DenominatorVanishes);
            }
            den *= v.powu(k);
        }
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let (m, _) = LaurentPoly::monomial(self.mono.clone(), self.unit.clone()).eval_exponents(exps);
        let mut num = m;
        for (f, &k) in &self.num {
            num *= f.eval_exponents(exps).0.powu(k);
        }
        Ok(num / den)
    }

    /// Numeric value at a moduli configuration's exponents.
    pub fn evaluate(&self, cfg: &crate::config::ModuliConfig) -> Result<Complex64, SymError> {
        self.evaluate_exponents(&cfg.exponent_point())
    }

    /// Parses the text form written by `Display` (or any arithmetic
    /// expression over `x1..x{n-1}`, `x{n}`, `x0`, `xinf` and rationals).
    pub fn parse(text: &str, n: usize) -> Result<Self, SymError> {
        crate::symtext::parse(text, n)
    }
}

fn dec(map: &mut BTreeMap<LaurentPoly, u32>, f: &LaurentPoly, k: u32) {
    if k == 0 {
        return;
    }
    let e = map.get_mut(f).expect("factor present");
    *e -= k;
    if *e == 0 {
        map.remove(f);
    }
}

impl PartialEq for SymRat {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.equals(other)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&SymRat> for &SymRat {
            type Output = SymRat;
            fn $m(self, rhs: &SymRat) -> SymRat {
                let f: fn(&SymRat, &SymRat) -> SymRat = $body;
                f(self, rhs)
            }
        }
        impl $tr<SymRat> for SymRat {
            type Output = SymRat;
            fn $m(self, rhs: SymRat) -> SymRat {
                $tr::$m(&self, &rhs)
            }
        }
        impl $tr<&SymRat> for SymRat {
            type Output = SymRat;
            fn $m(self, rhs: &SymRat) -> SymRat {
                $tr::$m(&self, rhs)
            }
        }
        impl $tr<SymRat> for &SymRat {
            type Output = SymRat;
            fn $m(self, rhs: SymRat) -> SymRat {
                $tr::$m(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| SymRat::add(a, b));
binop!(Sub, sub, |a, b| SymRat::sub(a, b));
binop!(Mul, mul, |a, b| SymRat::mul(a, b));
// Panics on a zero divisor; use `SymRat::div` for the checked form.
binop!(Div, div, |a, b| SymRat::div(a, b).expect("division by zero"));

impl Neg for SymRat {
    type Output = SymRat;
    fn neg(self) -> SymRat {
        SymRat::neg(&self)
    }
}

impl Neg for &SymRat {
    type Output = SymRat;
    fn neg(self) -> SymRat {
        SymRat::neg(self)
    }
}

fn var_name(n: usize, v: usize) -> String {
    if v + 1 < n {
        format!("x{}", v + 1)
    } else if v + 1 == n {
        "x0".to_string()
    } else {
        "xinf".to_string()
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &LaurentPoly, n: usize) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        let vars: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(v, &e)| if e == 1 { var_name(n, v) } else { format!("{}^{}", var_name(n, v), e) })
            .collect();
        if vars.is_empty() {
            write!(f, "{a}")?;
        } else {
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write!(f, "{}", vars.join(" * "))?;
        }
    }
    Ok(())
}

impl fmt::Display for SymRat {
    /// `num / den` with expanded parts, terms in descending lex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator();
        let den = self.denominator();
        let paren = |p: &LaurentPoly| p.num_terms() > 1;
        if den.num_terms() == 1 {
            return write_poly(f, &num, self.n);
        }
        if paren(&num) {
            write!(f, "(")?;
            write_poly(f, &num, self.n)?;
            write!(f, ")")?;
        } else {
            write_poly(f, &num, self.n)?;
        }
        write!(f, " / (")?;
        write_poly(f, &den, self.n)?;
        write!(f, ")")
    }
}

/// Dense matrix of [`SymRat`] entries.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    n: usize,
    rows: usize,
    cols: usize,
    entries: Vec<SymRat>,
}

impl SymMatrix {
    pub fn from_fn(n: usize, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> SymRat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.n(), n, "entry arity");
                entries.push(e);
            }
        }
        Self { n, rows, cols, entries }
    }

    pub fn zeros(n: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(n, rows, cols, |_, _| SymRat::zero(n))
    }

    pub fn identity(n: usize, size: usize) -> Self {
        Self::from_fn(n, size, size, |i, j| if i == j { SymRat::one(n) } else { SymRat::zero(n) })
    }

    pub fn diagonal(n: usize, d: &[SymRat]) -> Self {
        Self::from_fn(n, d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { SymRat::zero(n) })
    }

    pub fn column(n: usize, v: &[SymRat]) -> Self {
        Self::from_fn(n, v.len(), 1, |i, _| v[i].clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &SymRat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: SymRat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<SymRat> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<SymRat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&SymRat) -> SymRat) -> Self {
        Self { n: self.n, rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn involution(&self) -> Self {
        self.map(SymRat::involution)
    }

    pub fn shift_subst(&self, kind: Shift) -> Self {
        self.map(|e| e.shift_subst(kind))
    }

    pub fn neg(&self) -> Self {
        self.map(SymRat::neg)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SymError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(SymError::DimensionMismatch("add".into()));
        }
        Ok(Self {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SymError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &SymRat) -> Self {
        self.map(|e| e * c)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SymError> {
        if self.cols != other.rows {
            return Err(SymError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.n, self.rows, other.cols, |i, j| {
            let mut acc = SymRat::zero(self.n);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a * b;
                }
            }
            acc
        }))
    }

    /// Entrywise exact equality.
    pub fn equals(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.equals(b))
    }

    /// Positions `(i, j)` where the entries differ.
    pub fn mismatches(&self, other: &Self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows.min(other.rows) {
            for j in 0..self.cols.min(other.cols) {
                if !self.get(i, j).equals(other.get(i, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant by Bareiss elimination with row pivoting.
    pub fn det(&self) -> Result<SymRat, SymError> {
        if !self.is_square() {
            return Err(SymError::DimensionMismatch("det of non-square matrix".into()));
        }
        let m = self.rows;
        if m == 0 {
            return Ok(SymRat::one(self.n));
        }
        let mut a = self.clone();
        let mut prev = SymRat::one(self.n);
        let mut sign = false;
        for k in 0..m {
            let Some(p) = (k..m).find(|&i| !a.get(i, k).is_zero()) else {
                return Ok(SymRat::zero(self.n));
            };
            if p != k {
                for j in 0..m {
                    a.entries.swap(k * m + j, p * m + j);
                }
                sign = !sign;
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..m {
                let aik = a.get(i, k).clone();
                for j in k + 1..m {
                    let v = SymRat::div(&(&pivot * a.get(i, j) - &aik * a.get(k, j)), &prev)?;
                    a.set(i, j, v);
                }
                a.set(i, k, SymRat::zero(self.n));
            }
            prev = pivot;
        }
        let d = a.get(m - 1, m - 1).clone();
        Ok(if sign { -d } else { d })
    }

    /// Solves `self · X = b` by Gauss-Jordan elimination.
    pub fn solve(&self, b: &Self) -> Result<Self, SymError> {
        if !self.is_square() || b.rows != self.rows {
            return Err(SymError::DimensionMismatch("solve".into()));
        }
        let m = self.rows;
        let w = m + b.cols;
        let mut aug = Self::from_fn(self.n, m, w, |i, j| {
            if j < m {
                self.get(i, j).clone()
            } else {
                b.get(i, j - m).clone()
            }
        });
        for k in 0..m {
            let p = (k..m).find(|&i| !aug.get(i, k).is_zero()).ok_or(SymError::SingularMatrix)?;
            if p != k {
                for j in 0..w {
                    aug.entries.swap(k * w + j, p * w + j);
                }
            }
            let inv = aug.get(k, k).inv()?;
            for j in k..w {
                let v = aug.get(k, j) * &inv;
                aug.set(k, j, v);
            }
            for i in 0..m {
                if i == k || aug.get(i, k).is_zero() {
                    continue;
                }
                let f = aug.get(i, k).clone();
                for j in k..w {
                    if aug.get(k, j).is_zero() {
                        continue;
                    }
                    let v = aug.get(i, j) - &f * aug.get(k, j);
                    aug.set(i, j, v);
                }
            }
        }
        Ok(Self::from_fn(self.n, m, b.cols, |i, j| aug.get(i, m + j).clone()))
    }

    pub fn inverse(&self) -> Result<Self, SymError> {
        self.solve(&Self::identity(self.n, self.rows))
    }

    /// Numeric matrix at `x_v = e^{2πi e_v}`.
    pub fn evaluate_exponents(&self, exps: &[Complex64]) -> Result<Vec<Vec<Complex64>>, SymError> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).evaluate_exponents(exps)).collect())
            .collect()
    }

    /// Canonical text of every entry, row-major.
    pub fn to_text(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(n: usize) -> SymRat {
        SymRat::one(n)
    }

    #[test]
    fn common_denominator() {
        let n = 3;
        let x1 = SymRat::x(n, 1);
        let d = one(n) - &x1;
        let s = &x1 / &d + one(n) / &d;
        assert_eq!(s, (&x1 + one(n)) / &d);
        assert!((&d * (one(n) / &d)).is_one());
    }

    #[test]
    fn cross_multiplication_identity() {
        let n = 3;
        let (x1, x2) = (SymRat::x(n, 1), SymRat::x(n, 2));
        let a = (one(n) - &x1 * &x2) / ((one(n) - &x1) * (one(n) - &x2));
        let b = &x1 / (one(n) - &x1);
        let diff = &a - &b;
        // the numerator collapses to 1 − x1, leaving 1/(1 − x2)
        assert_eq!(diff, one(n) / (one(n) - &x2));
        assert_ne!(diff, one(n) / (one(n) - &x1));
        assert!(diff.denominator().num_terms() == 2, "cancelled to {diff}");
    }

    #[test]
    fn involution_example() {
        let n = 3;
        let (x1, x0) = (SymRat::x(n, 1), SymRat::x0(n));
        let a = (one(n) - x0.inv().unwrap()) * &x1 / (one(n) - &x1);
        let b = -(one(n) - &x0) / (one(n) - &x1);
        assert_eq!(a.involution(), b);
        assert_eq!(a.involution().involution(), a);
    }

    #[test]
    fn derived_variable_and_shifts() {
        let n = 4;
        let prod = SymRat::x(n, 1) * SymRat::x(n, 2) * SymRat::x(n, 3) * SymRat::x(n, 4);
        assert!(prod.is_one());
        assert_eq!(SymRat::xinf(n).shift_subst(Shift::P0(2)), SymRat::xinf(n) * SymRat::x(n, 2));
        assert_eq!(SymRat::x0(n).shift_subst(Shift::PInf(4)), SymRat::x0(n) * SymRat::x(n, 4));
        assert_eq!(SymRat::x0(n).shift_subst(Shift::P0(4)), SymRat::x0(n));
    }

    #[test]
    fn evaluation() {
        let n = 2;
        let exps = [Complex64::new(0.25, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.1, 0.0)];
        let v = SymRat::x(n, 1).evaluate_exponents(&exps).unwrap();
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let zero = [Complex64::new(0.0, 0.0); 3];
        let r = (one(n) / (one(n) - SymRat::x(n, 1))).evaluate_exponents(&zero);
        assert_eq!(r, Err(SymError::DenominatorVanishes));
    }

    #[test]
    fn determinant_and_solve() {
        let n = 3;
        assert!(SymMatrix::identity(n, 3).det().unwrap().is_one());
        let (x1, x2) = (SymRat::x(n, 1), SymRat::x(n, 2));
        let a = SymMatrix::from_fn(n, 2, 2, |i, j| match (i, j) {
            (0, 0) => x1.clone(),
            (0, 1) => one(n),
            (1, 0) => one(n),
            _ => x2.clone(),
        });
        assert_eq!(a.det().unwrap(), &x1 * &x2 - one(n));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().equals(&SymMatrix::identity(n, 2)));
        let sing = SymMatrix::from_fn(n, 2, 2, |_, _| x1.clone());
        assert_eq!(sing.det().unwrap(), SymRat::zero(n));
        assert_eq!(sing.inverse().unwrap_err(), SymError::SingularMatrix);
    }

    #[test]
    fn display_round_trip() {
        let n = 3;
        let (x1, x0, xi) = (SymRat::x(n, 1), SymRat::x0(n), SymRat::xinf(n));
        let a = (&x0 - SymRat::from_int(n, 3) * &x1 * &xi) / (SymRat::from_int(n, 2) * (one(n) - &x1) * &x0);
        let text = a.to_string();
        assert_eq!(SymRat::parse(&text, n).unwrap(), a, "{text}");
        assert_eq!(SymRat::x(n, 1).to_string(), "x1");
        assert_eq!((one(n) / (one(n) - &x1)).to_string(), "-1 / (x1 - 1)");
    }
}
