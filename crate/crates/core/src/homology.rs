//! Twisted cycles as symbolic labels, their tabulated homology
//! intersection numbers, and the monodromy and connection matrices built
//! from them.
//!
//! All matrices use the basis `γ_{12}, …, γ_{1,n−1}, γ_{10}, γ_{1∞}`.
//! The dual family `γ_{nk}` is ordered `k = 2, …, n−1, ∞, 0`, which makes
//! `H_{1n}` diagonal.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::ModuliConfig;
use crate::report::{IdentityCheck, IdentityReport};
use crate::symfield::{Shift, SymError, SymMatrix, SymRat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomologyError {
    #[error("n = {n} is too small (need at least {need})")]
    SizeTooSmall { n: usize, need: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("pair not tabulated: {0}")]
    PairNotTabulated(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// A puncture index `j`, or one of the two special slots `0`, `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pt {
    J(usize),
    Zero,
    Inf,
}

impl fmt::Display for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pt::J(j) => write!(f, "{j}"),
            Pt::Zero => write!(f, "0"),
            Pt::Inf => write!(f, "inf"),
        }
    }
}

/// Symbolic twisted cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleRef {
    /// `γ_{1j}` for `j ∈ {2..n, 0, ∞}`
    G1J(Pt),
    /// `γ_{jk} = γ_{1k} − γ_{1j}` for `1 ≤ j < k ≤ n`
    GJK(usize, usize),
    /// `γ_{j0}` for `1 ≤ j ≤ n`
    GJ0(usize),
    /// `γ_{j∞}` for `1 ≤ j ≤ n`
    GJInf(usize),
    /// `γ_{nk}`; only valid as the dual (right) argument
    GNJ(Pt),
    /// `x_1 γ_{20} + (x_1 − 1) γ_{12}`
    G20Perp,
    /// `γ_{2∞} − x_∞^{−1}(x_1 − 1) γ_{12}`
    G2InfPerp,
}

impl fmt::Display for CycleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleRef::G1J(p) => write!(f, "g1{p}"),
            CycleRef::GJK(j, k) => write!(f, "g{j},{k}"),
            CycleRef::GJ0(j) => write!(f, "g{j}0"),
            CycleRef::GJInf(j) => write!(f, "g{j}inf"),
            CycleRef::GNJ(p) => write!(f, "gn{p}"),
            CycleRef::G20Perp => write!(f, "g20(1n)"),
            CycleRef::G2InfPerp => write!(f, "g2inf(1n)"),
        }
    }
}

/// Named intersection matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    H11,
    H11ZeroInf,
    H1Prime,
    H00,
    HInfInf,
    H1n,
    H10,
    H0n,
    H1Inf,
    HInfN,
    H1Block,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 11] = [
        MatrixKind::H11,
        MatrixKind::H11ZeroInf,
        MatrixKind::H1Prime,
        MatrixKind::H00,
        MatrixKind::HInfInf,
        MatrixKind::H1n,
        MatrixKind::H10,
        MatrixKind::H0n,
        MatrixKind::H1Inf,
        MatrixKind::HInfN,
        MatrixKind::H1Block,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MatrixKind::H11 => "H11",
            MatrixKind::H11ZeroInf => "H11_0inf",
            MatrixKind::H1Prime => "H1prime",
            MatrixKind::H00 => "H00",
            MatrixKind::HInfInf => "Hinfinf",
            MatrixKind::H1n => "H1n",
            MatrixKind::H10 => "H10",
            MatrixKind::H0n => "H0n",
            MatrixKind::H1Inf => "H1inf",
            MatrixKind::HInfN => "Hinfn",
            MatrixKind::H1Block => "H1",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

/// Coordinates of a class over the basis `γ_{12}, …, γ_{1,n−1}, γ_{10}, γ_{1∞}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleClass {
    pub coeffs: Vec<SymRat>,
}

impl CycleClass {
    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![SymRat::zero(n); n] }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = Self::zero(n);
        c.coeffs[i] = SymRat::one(n);
        c
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &SymRat) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    pub fn involution(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(SymRat::involution).collect() }
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.equals(b))
    }

    pub fn to_matrix(&self, n: usize) -> SymMatrix {
        SymMatrix::column(n, &self.coeffs)
    }

    pub fn from_matrix(m: &SymMatrix) -> Self {
        Self { coeffs: m.col(0) }
    }
}

/// Tabulated homology data for a fixed number of punctures `n`.
#[derive(Debug, Clone)]
pub struct Homology {
    n: usize,
    basis: Vec<Pt>,
    dual_cols: Vec<Pt>,
    h11: SymMatrix,
}

impl Homology {
    pub fn new(n: usize) -> Result<Self, HomologyError> {
        if n < 2 {
            return Err(HomologyError::SizeTooSmall { n, need: 2 });
        }
        let mut basis: Vec<Pt> = (2..n).map(Pt::J).collect();
        basis.extend([Pt::Zero, Pt::Inf]);
        let mut dual_cols: Vec<Pt> = (2..n).map(Pt::J).collect();
        dual_cols.extend([Pt::Inf, Pt::Zero]);
        let mut h = Self { n, basis, dual_cols, h11: SymMatrix::zeros(n, 0, 0) };
        h.h11 = SymMatrix::from_fn(n, n, n, |i, k| h.fact31(h.basis[i], h.basis[k]));
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Basis labels `2, …, n−1, 0, ∞`.
    pub fn basis(&self) -> &[Pt] {
        &self.basis
    }

    /// Dual column labels `2, …, n−1, ∞, 0`.
    pub fn dual_cols(&self) -> &[Pt] {
        &self.dual_cols
    }

    pub fn h11(&self) -> &SymMatrix {
        &self.h11
    }

    fn one(&self) -> SymRat {
        SymRat::one(self.n)
    }

    fn zero(&self) -> SymRat {
        SymRat::zero(self.n)
    }

    fn x(&self, j: usize) -> SymRat {
        SymRat::x(self.n, j)
    }

    fn x0(&self) -> SymRat {
        SymRat::x0(self.n)
    }

    fn xi(&self) -> SymRat {
        SymRat::xinf(self.n)
    }

    fn s(&self, j: usize) -> SymRat {
        SymRat::partial_product(self.n, j)
    }

    fn inv(&self, a: &SymRat) -> SymRat {
        a.inv().expect("nonzero monomial")
    }

    fn basis_index(&self, p: Pt) -> Option<usize> {
        self.basis.iter().position(|&b| b == p)
    }

    fn dual_index(&self, p: Pt) -> Option<usize> {
        self.dual_cols.iter().position(|&b| b == p)
    }

    /// `I_h(γ_{1a}, γ_{1b}^∨)` for `a, b ∈ {2..n, 0, ∞}`.
    fn fact31(&self, a: Pt, b: Pt) -> SymRat {
        let one = self.one();
        let x1 = self.x(1);
        let d1 = &one - &x1;
        let (x0, xi) = (self.x0(), self.xi());
        match (a, b) {
            (Pt::J(j), Pt::J(k)) => {
                if j < k {
                    &x1 / &d1
                } else if j > k {
                    &one / &d1
                } else {
                    (&one - &x1 * self.x(j)) / (&d1 * (&one - self.x(j)))
                }
            }
            (Pt::J(_), Pt::Zero) => &x1 * (&one - self.inv(&x0)) / &d1,
            (Pt::Zero, Pt::J(_)) => (&one - &x0) / &d1,
            (Pt::J(_), Pt::Inf) => &x1 * (&one - &xi) / &d1,
            (Pt::Inf, Pt::J(_)) => (&one - self.inv(&xi)) / &d1,
            (Pt::Zero, Pt::Zero) => -((&x0 - &one) * (&x0 - &x1)) / (&x0 * &d1),
            (Pt::Inf, Pt::Inf) => -((&xi - &one) * (&xi - &x1)) / (&xi * &d1),
            (Pt::Zero, Pt::Inf) => (&x1 - &x0 * &x1 - &x1 * &xi + &x0 * &xi) / &d1,
            (Pt::Inf, Pt::Zero) => {
                (&one - self.inv(&xi) - self.inv(&x0) + &x1 / (&x0 * &xi)) / &d1
            }
        }
    }

    /// `I_h(γ_{jk}, γ_{j′k′}^∨)` from the interval table.
    fn cor32(&self, j: usize, k: usize, jp: usize, kp: usize) -> SymRat {
        let one = self.one();
        let (xj, xk) = (self.x(j), self.x(k));
        if (j, k) == (jp, kp) {
            return (&one - &xj * &xk) / ((&one - &xj) * (&one - &xk));
        }
        if j == jp {
            return if k < kp { &xj / (&one - &xj) } else { &one / (&one - &xj) };
        }
        if k == kp {
            return if j < jp { &xk / (&one - &xk) } else { &one / (&one - &xk) };
        }
        if k == jp {
            return -(&one / (&one - &xk));
        }
        if j == kp {
            return -(&xj / (&one - &xj));
        }
        if j < jp && jp < k && k < kp {
            return -one;
        }
        if jp < j && j < kp && kp < k {
            return one;
        }
        self.zero()
    }

    fn h00(&self, j: usize) -> SymRat {
        let (x0, one) = (self.x0(), self.one());
        let (sp, sj) = (self.s(j - 1), self.s(j));
        -((&x0 - &sp) * (&x0 - &sj)) / (&x0 * &sp * (&one - self.x(j)))
    }

    fn hinfinf(&self, j: usize) -> SymRat {
        let (xi, one) = (self.xi(), self.one());
        let (sp, sj) = (self.s(j - 1), self.s(j));
        -((&xi - &sp) * (&xi - &sj)) / (&xi * &sp * (&one - self.x(j)))
    }

    /// `I_h(γ_{1a}, γ_{nb}^∨)`, diagonal in the paired orderings.
    fn h1n(&self, a: Pt, b: Pt) -> SymRat {
        let n = self.n;
        match (a, b) {
            (Pt::J(j), Pt::J(k)) if j == k => &self.s(j) / (self.one() - self.x(j)),
            (Pt::Zero, Pt::Inf) => self.x(n) * self.xi(),
            (Pt::Inf, Pt::Zero) => -self.inv(&self.x0()),
            _ => self.zero(),
        }
    }

    /// `I_h(γ_{1a}, γ_{k0}^∨)`.
    fn h10(&self, a: Pt, k: usize) -> SymRat {
        let one = self.one();
        let x0 = self.x0();
        match a {
            Pt::Inf => {
                if k == 1 {
                    self.fact31(Pt::Inf, Pt::Zero)
                } else {
                    -self.inv(&x0)
                }
            }
            Pt::Zero => {
                if k == 1 {
                    self.h00(1)
                } else {
                    self.zero()
                }
            }
            Pt::J(j) => {
                if k == 1 {
                    self.x(1) * (&one - self.inv(&x0)) / (&one - self.x(1))
                } else if k < j {
                    -one
                } else if k == j {
                    -((&one - self.s(j) / &x0) / (&one - self.x(j)))
                } else {
                    self.zero()
                }
            }
        }
    }

    /// `I_h(γ_{j0}, γ_{nb}^∨)`.
    fn h0n(&self, j: usize, b: Pt) -> SymRat {
        let n = self.n;
        let one = self.one();
        let (x0, xi, xn) = (self.x0(), self.xi(), self.x(n));
        match b {
            Pt::Inf => {
                if j < n {
                    &xn * &xi
                } else {
                    &xn * (&one - &x0 * &xn - &xn * &xi + &x0 * &xn * &xi) / (&one - &xn)
                }
            }
            Pt::Zero => {
                if j < n {
                    self.zero()
                } else {
                    -((&x0 * &xn - &one) * (&x0 - &one)) / (&x0 * (&one - &xn))
                }
            }
            Pt::J(k) => {
                if j == n {
                    (&one - &x0) / (&one - &xn)
                } else if k < j {
                    -x0
                } else if k == j {
                    self.x(j) * (&x0 - self.s(j - 1)) / (&one - self.x(j))
                } else {
                    self.zero()
                }
            }
        }
    }

    /// `I_h(γ_{1a}, γ_{k∞}^∨)`.
    fn h1inf(&self, a: Pt, k: usize) -> SymRat {
        let one = self.one();
        let xi = self.xi();
        match a {
            Pt::Inf => {
                if k == 1 {
                    self.hinfinf(1)
                } else {
                    self.zero()
                }
            }
            Pt::Zero => {
                if k == 1 {
                    self.fact31(Pt::Zero, Pt::Inf)
                } else {
                    &xi / self.s(k - 1)
                }
            }
            Pt::J(j) => {
                if k == 1 {
                    self.x(1) * (&one - &xi) / (&one - self.x(1))
                } else if k < j {
                    &xi / self.s(k - 1)
                } else if k == j {
                    (&xi / self.s(j - 1) - self.x(j)) / (&one - self.x(j))
                } else {
                    self.zero()
                }
            }
        }
    }

    /// `I_h(γ_{j∞}, γ_{nb}^∨)`.
    fn hinfn(&self, j: usize, b: Pt) -> SymRat {
        let n = self.n;
        let one = self.one();
        let (x0, xi, xn) = (self.x0(), self.xi(), self.x(n));
        match b {
            Pt::Inf => {
                if j < n {
                    self.zero()
                } else {
                    -((&xi * &xn - &one) * (&xi - &one)) / (&xi * (&one - &xn))
                }
            }
            Pt::Zero => {
                if j < n {
                    -(self.s(j - 1) / &x0)
                } else {
                    (&one - self.inv(&(&xi * &xn)) - self.inv(&(&x0 * &xn)) + self.inv(&(&x0 * &xn * &xi)))
                        / (&one - &xn)
                }
            }
            Pt::J(k) => {
                if j == n {
                    (&one - self.inv(&xi)) / (&xn * (&one - &xn))
                } else if k < j {
                    self.s(j - 1)
                } else if k == j {
                    -(self.s(j) * (&one - self.s(j - 1) / &xi) / (&one - self.x(j)))
                } else {
                    self.zero()
                }
            }
        }
    }

    fn check_cycle(&self, c: CycleRef) -> Result<(), HomologyError> {
        let n = self.n;
        let bad = |s: String| Err(HomologyError::IndexOutOfRange(s));
        match c {
            CycleRef::G1J(Pt::J(j)) if !(2..=n).contains(&j) => bad(format!("g1{j} needs 2 <= j <= {n}")),
            CycleRef::GJK(j, k) if !(1 <= j && j < k && k <= n) => bad(format!("g{j},{k} needs 1 <= j < k <= {n}")),
            CycleRef::GJ0(j) | CycleRef::GJInf(j) if !(1..=n).contains(&j) => bad(format!("{c} needs 1 <= j <= {n}")),
            CycleRef::GNJ(Pt::J(j)) if !(1..n).contains(&j) => bad(format!("gn{j} needs 1 <= j < {n}")),
            CycleRef::G20Perp | CycleRef::G2InfPerp if n < 3 => Err(HomologyError::SizeTooSmall { n, need: 3 }),
            _ => Ok(()),
        }
    }

    /// The `v`-vector of `γ_{1j}`: zero for `j = 1`, a unit vector for
    /// `2 ≤ j < n`, and the relation vector for `j = n`.
    pub fn v_vector(&self, j: usize) -> CycleClass {
        let n = self.n;
        if j == 1 {
            return CycleClass::zero(n);
        }
        if j < n {
            return CycleClass::unit(n, j - 2);
        }
        let one = self.one();
        let scale = &one / (&one - self.x(n));
        let mut coeffs: Vec<SymRat> = (2..n).map(|k| -((&one - self.x(k)) / self.s(k))).collect();
        coeffs.push(&one - self.inv(&self.xi()));
        coeffs.push(self.x0() - &one);
        CycleClass { coeffs: coeffs.iter().map(|c| c * &scale).collect() }
    }

    /// Divides `I_h(γ, γ_{nk}^∨)` (ordered like the dual columns) by the
    /// diagonal of `H_{1n}`.
    pub fn expand_in_basis(&self, w_dual: &[SymRat]) -> CycleClass {
        let coeffs = self
            .basis
            .iter()
            .zip(&self.dual_cols)
            .zip(w_dual)
            .map(|((&a, &b), w)| w / self.h1n(a, b))
            .collect();
        CycleClass { coeffs }
    }

    /// Class of a cycle in the basis, when one is determined.
    pub fn class_of(&self, c: CycleRef) -> Result<CycleClass, HomologyError> {
        self.check_cycle(c)?;
        let n = self.n;
        Ok(match c {
            CycleRef::G1J(Pt::J(j)) => self.v_vector(j),
            CycleRef::G1J(p) => CycleClass::unit(n, self.basis_index(p).expect("special slot")),
            CycleRef::GJK(j, k) => self.v_vector(k).sub(&self.v_vector(j)),
            CycleRef::GJ0(j) => {
                let w: Vec<SymRat> = self.dual_cols.iter().map(|&b| self.h0n(j, b)).collect();
                self.expand_in_basis(&w)
            }
            CycleRef::GJInf(j) => {
                let w: Vec<SymRat> = self.dual_cols.iter().map(|&b| self.hinfn(j, b)).collect();
                self.expand_in_basis(&w)
            }
            CycleRef::G20Perp => {
                let x1 = self.x(1);
                let g20 = self.class_of(CycleRef::GJ0(2))?;
                g20.scale(&x1).add(&CycleClass::unit(n, 0).scale(&(&x1 - self.one())))
            }
            CycleRef::G2InfPerp => {
                let x1 = self.x(1);
                let g2i = self.class_of(CycleRef::GJInf(2))?;
                let c = (&x1 - self.one()) / self.xi();
                g2i.sub(&CycleClass::unit(n, 0).scale(&c))
            }
            CycleRef::GNJ(_) => return Err(HomologyError::PairNotTabulated(format!("{c} has no basis expansion"))),
        })
    }

    /// `ᵀa · H_{11} · b^∨`.
    pub fn bilinear(&self, a: &CycleClass, b: &CycleClass) -> SymRat {
        let bv = b.involution();
        let mut acc = self.zero();
        for i in 0..self.n {
            if a.coeffs[i].is_zero() {
                continue;
            }
            for k in 0..self.n {
                if bv.coeffs[k].is_zero() || self.h11.get(i, k).is_zero() {
                    continue;
                }
                acc = acc + &a.coeffs[i] * self.h11.get(i, k) * &bv.coeffs[k];
            }
        }
        acc
    }

    /// `I_h([a], [b^∨])`: tables first, bilinearity through basis classes
    /// otherwise.
    pub fn ih_pair(&self, a: CycleRef, b: CycleRef) -> Result<SymRat, HomologyError> {
        use CycleRef::*;
        self.check_cycle(a)?;
        self.check_cycle(b)?;
        let special = |p: Pt| matches!(p, Pt::Zero | Pt::Inf);
        let direct = match (a, b) {
            (G1J(p), G1J(q)) => Some(self.fact31(p, q)),
            (GJK(j, k), GJK(jp, kp)) => Some(self.cor32(j, k, jp, kp)),
            (GJK(j, _), G1J(p)) | (G1J(p), GJK(j, _)) if j >= 2 && special(p) => Some(self.zero()),
            (GJ0(j), GJ0(k)) => Some(if j == k { self.h00(j) } else { self.zero() }),
            (GJInf(j), GJInf(k)) => Some(if j == k { self.hinfinf(j) } else { self.zero() }),
            (G1J(p), GNJ(q)) if p != Pt::J(self.n) && q != Pt::J(1) => Some(self.h1n(p, q)),
            (GJ0(j), GNJ(q)) if q != Pt::J(1) => Some(self.h0n(j, q)),
            (GJInf(j), GNJ(q)) if q != Pt::J(1) => Some(self.hinfn(j, q)),
            (G1J(p), GJ0(k)) if p != Pt::J(self.n) => Some(self.h10(p, k)),
            (G1J(p), GJInf(k)) if p != Pt::J(self.n) => Some(self.h1inf(p, k)),
            _ => None,
        };
        if let Some(v) = direct {
            return Ok(v);
        }
        match b {
            GNJ(Pt::J(1)) => Err(HomologyError::PairNotTabulated(format!("({a}, {b})"))),
            GNJ(q) => {
                if matches!(a, GNJ(_)) {
                    return Err(HomologyError::PairNotTabulated(format!("({a}, {b})")));
                }
                let va = self.class_of(a)?;
                let col = self.dual_index(q).expect("dual column");
                let mut acc = self.zero();
                for (i, &p) in self.basis.iter().enumerate() {
                    if !va.coeffs[i].is_zero() {
                        acc = acc + &va.coeffs[i] * self.h1n(p, self.dual_cols[col]);
                    }
                }
                Ok(acc)
            }
            _ => {
                if matches!(a, GNJ(_)) {
                    return Err(HomologyError::PairNotTabulated(format!("({a}, {b})")));
                }
                Ok(self.bilinear(&self.class_of(a)?, &self.class_of(b)?))
            }
        }
    }

    fn grid(&self, rows: &[CycleRef], cols: &[CycleRef]) -> Result<SymMatrix, HomologyError> {
        let mut m = SymMatrix::zeros(self.n, rows.len(), cols.len());
        for (i, &a) in rows.iter().enumerate() {
            for (k, &b) in cols.iter().enumerate() {
                m.set(i, k, self.ih_pair(a, b)?);
            }
        }
        Ok(m)
    }

    pub fn build_matrix(&self, which: MatrixKind) -> Result<SymMatrix, HomologyError> {
        use CycleRef::*;
        let n = self.n;
        let basis: Vec<CycleRef> = self.basis.iter().map(|&p| G1J(p)).collect();
        let duals: Vec<CycleRef> = self.dual_cols.iter().map(|&p| GNJ(p)).collect();
        let j0: Vec<CycleRef> = (1..=n).map(GJ0).collect();
        let ji: Vec<CycleRef> = (1..=n).map(GJInf).collect();
        let chain: Vec<CycleRef> = (2..n).map(|j| GJK(j, j + 1)).collect();
        match which {
            MatrixKind::H11 => Ok(self.h11.clone()),
            MatrixKind::H11ZeroInf => self.grid(&[G1J(Pt::Zero), G1J(Pt::Inf)], &[G1J(Pt::Zero), G1J(Pt::Inf)]),
            MatrixKind::H1Prime => {
                if n < 3 {
                    return Err(HomologyError::SizeTooSmall { n, need: 3 });
                }
                self.grid(&chain, &chain)
            }
            MatrixKind::H00 => self.grid(&j0, &j0),
            MatrixKind::HInfInf => self.grid(&ji, &ji),
            MatrixKind::H1n => self.grid(&basis, &duals),
            MatrixKind::H10 => self.grid(&basis, &j0),
            MatrixKind::H0n => self.grid(&j0, &duals),
            MatrixKind::H1Inf => self.grid(&basis, &ji),
            MatrixKind::HInfN => self.grid(&ji, &duals),
            MatrixKind::H1Block => {
                let mut cyc = chain;
                cyc.extend([G1J(Pt::Zero), G1J(Pt::Inf)]);
                self.grid(&cyc, &cyc)
            }
        }
    }

    fn check_pq(&self, p: usize, q: usize) -> Result<(), HomologyError> {
        if !(1 <= p && p < q && q <= self.n) {
            return Err(HomologyError::IndexOutOfRange(format!("need 1 <= p < q <= {}, got ({p}, {q})", self.n)));
        }
        Ok(())
    }

    /// `M_{pq} = I − (1−x_p)(1−x_q) v_{pq} ᵀv_{pq}^∨ ᵀH_{11}`.
    pub fn monodromy_matrix(&self, p: usize, q: usize) -> Result<SymMatrix, HomologyError> {
        self.check_pq(p, q)?;
        let n = self.n;
        let v = self.v_vector(q).sub(&self.v_vector(p));
        let w = self.h11.mul(&v.involution().to_matrix(n))?;
        let k = (self.one() - self.x(p)) * (self.one() - self.x(q));
        let rank_one = v.to_matrix(n).mul(&w.transpose())?.scale(&k);
        Ok(SymMatrix::identity(n, n).sub(&rank_one)?)
    }

    /// `[γ] − (1−x_p)(1−x_q) I_h([γ], [γ_{pq}^∨]) [γ_{pq}]`.
    pub fn circuit_transform(&self, gamma: &CycleClass, p: usize, q: usize) -> Result<CycleClass, HomologyError> {
        self.check_pq(p, q)?;
        let v = self.v_vector(q).sub(&self.v_vector(p));
        let k = (self.one() - self.x(p)) * (self.one() - self.x(q)) * self.bilinear(gamma, &v);
        Ok(gamma.sub(&v.scale(&k)))
    }

    fn check_p(&self, p: usize) -> Result<(), HomologyError> {
        if !(1..=self.n).contains(&p) {
            return Err(HomologyError::IndexOutOfRange(format!("need 1 <= p <= {}, got {p}", self.n)));
        }
        Ok(())
    }

    /// Middle factor of `M_{p0}`: `1` before `p`, `x_0/S_{p−1}` at `p`, `x_p` after.
    pub fn connection_diag_0(&self, p: usize) -> Vec<SymRat> {
        (1..=self.n)
            .map(|j| match j.cmp(&p) {
                std::cmp::Ordering::Less => self.one(),
                std::cmp::Ordering::Equal => self.x0() / self.s(p - 1),
                std::cmp::Ordering::Greater => self.x(p),
            })
            .collect()
    }

    /// Middle factor of `M_{p∞}`: `1` before `p`, `S_{p−1}/x_∞` at `p`, `1/x_p` after.
    pub fn connection_diag_inf(&self, p: usize) -> Vec<SymRat> {
        (1..=self.n)
            .map(|j| match j.cmp(&p) {
                std::cmp::Ordering::Less => self.one(),
                std::cmp::Ordering::Equal => self.s(p - 1) / self.xi(),
                std::cmp::Ordering::Greater => self.inv(&self.x(p)),
            })
            .collect()
    }

    /// `M_{p0} = (H_{1n}^{−1} ᵀH_{0n})^{(p0)} · D · H_{00}^{−1} ᵀH_{10}`.
    pub fn connection_matrix_0(&self, p: usize) -> Result<SymMatrix, HomologyError> {
        self.check_p(p)?;
        let n = self.n;
        let h1n = self.build_matrix(MatrixKind::H1n)?;
        let left = h1n.solve(&self.build_matrix(MatrixKind::H0n)?.transpose())?.shift_subst(Shift::P0(p));
        let right = self.build_matrix(MatrixKind::H00)?.solve(&self.build_matrix(MatrixKind::H10)?.transpose())?;
        let d = SymMatrix::diagonal(n, &self.connection_diag_0(p));
        Ok(left.mul(&d)?.mul(&right)?)
    }

    /// `M_{p∞} = (H_{1n}^{−1} ᵀH_{∞n})^{(p∞)} · D · H_{∞∞}^{−1} ᵀH_{1∞}`.
    pub fn connection_matrix_inf(&self, p: usize) -> Result<SymMatrix, HomologyError> {
        self.check_p(p)?;
        let n = self.n;
        let h1n = self.build_matrix(MatrixKind::H1n)?;
        let left = h1n.solve(&self.build_matrix(MatrixKind::HInfN)?.transpose())?.shift_subst(Shift::PInf(p));
        let right =
            self.build_matrix(MatrixKind::HInfInf)?.solve(&self.build_matrix(MatrixKind::H1Inf)?.transpose())?;
        let d = SymMatrix::diagonal(n, &self.connection_diag_inf(p));
        Ok(left.mul(&d)?.mul(&right)?)
    }

    /// Cycles whose pairings come straight from a table, used for the skew check.
    fn tabulated_pairs(&self) -> Vec<(CycleRef, CycleRef)> {
        use CycleRef::*;
        let n = self.n;
        let mut g1: Vec<CycleRef> = self.basis.iter().map(|&p| G1J(p)).collect();
        g1.push(G1J(Pt::J(n)));
        let gjk: Vec<CycleRef> = (1..=n).flat_map(|j| (j + 1..=n).map(move |k| GJK(j, k))).collect();
        let mut out = Vec::new();
        for &a in &g1 {
            for &b in &g1 {
                out.push((a, b));
            }
        }
        for &a in &gjk {
            for &b in &gjk {
                out.push((a, b));
            }
            for p in [Pt::Zero, Pt::Inf] {
                out.push((a, G1J(p)));
            }
        }
        for j in 1..=n {
            for k in 1..=n {
                out.push((GJ0(j), GJ0(k)));
                out.push((GJInf(j), GJInf(k)));
            }
            for &a in &g1[..n] {
                out.push((a, GJ0(j)));
                out.push((a, GJInf(j)));
            }
        }
        out
    }
}

/// Sets `x_0 = x_∞ = 1` in every entry.
fn specialize_zero_inf(m: &SymMatrix) -> Result<SymMatrix, SymError> {
    let n = m.n();
    let mut out = SymMatrix::zeros(n, m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            let kill = |p: &crate::symfield::LaurentPoly| {
                p.map_monomials(|mm| {
                    let mut v = mm.to_vec();
                    v[n - 1] = 0;
                    v[n] = 0;
                    v
                })
            };
            let num = kill(&e.numerator());
            let den = kill(&e.denominator());
            if den.is_zero() {
                return Err(SymError::DenominatorVanishes);
            }
            out.set(i, j, SymRat::from_poly(n, &num).div(&SymRat::from_poly(n, &den))?);
        }
    }
    Ok(out)
}

fn summarize(name: &str, failures: Vec<String>, total: usize) -> IdentityCheck {
    let detail = if failures.is_empty() {
        format!("{total} cases")
    } else {
        format!("{} of {total} failed: {}", failures.len(), failures.join(", "))
    };
    IdentityCheck::exact(name, failures.is_empty(), detail)
}

/// Options for [`verify_homology_suite`].
#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub connection: bool,
    pub numeric: bool,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { connection: true, numeric: true, seed: 1 }
    }
}

fn determinant_checks(h: &Homology, rep: &mut IdentityReport) -> Result<(), HomologyError> {
    let n = h.n;
    let one = h.one();
    let mut prod = one.clone();
    for j in 1..n {
        prod = prod * (&one - h.x(j));
    }
    let expect = (&one - h.inv(&h.x(n))) / &prod;
    let det = h.h11.det()?;
    rep.push(IdentityCheck::exact("det H11 closed form", det.equals(&expect), format!("n = {n}")));

    if n >= 3 {
        let mut prod = one.clone();
        for j in 2..=n {
            prod = prod * (&one - h.x(j));
        }
        let expect = (&one - h.inv(&h.x(1))) / &prod;
        let det = h.build_matrix(MatrixKind::H1Prime)?.det()?;
        rep.push(IdentityCheck::exact("det H1' closed form", det.equals(&expect), format!("n = {n}")));
        let blk = h.build_matrix(MatrixKind::H1Block)?;
        let m = n - 2;
        let block_ok = (0..n).all(|i| (0..n).all(|k| (i < m) == (k < m) || blk.get(i, k).is_zero()))
            && (0..m).all(|i| (0..m).all(|k| i.abs_diff(k) <= 1 || blk.get(i, k).is_zero()));
        rep.push(IdentityCheck::exact("H1 is block diagonal with tridiagonal H1'", block_ok, ""));
    }

    let h0i = h.build_matrix(MatrixKind::H11ZeroInf)?;
    rep.push(IdentityCheck::exact("det H11_0inf = 1", h0i.det()?.is_one(), ""));
    let spec = specialize_zero_inf(&h0i)?;
    let sympl = SymMatrix::from_fn(n, 2, 2, |i, k| match (i, k) {
        (0, 1) => SymRat::one(n),
        (1, 0) => SymRat::from_int(n, -1),
        _ => SymRat::zero(n),
    });
    rep.push(IdentityCheck::exact("H11_0inf at c0 = cinf = 0 is symplectic", spec.equals(&sympl), ""));

    for kind in [MatrixKind::H1n, MatrixKind::H00, MatrixKind::HInfInf] {
        let ok = h.build_matrix(kind)?.is_diagonal();
        rep.push(IdentityCheck::exact(&format!("{} is diagonal", kind.name()), ok, ""));
    }
    Ok(())
}

fn monodromy_checks(h: &Homology, rep: &mut IdentityReport) -> Result<(), HomologyError> {
    let n = h.n;
    let mut inv_fail = Vec::new();
    let mut eig_fail = Vec::new();
    let mut fix_fail = Vec::new();
    let mut circ_fail = Vec::new();
    let mut total = 0;
    for p in 1..=n {
        for q in p + 1..=n {
            total += 1;
            let m = h.monodromy_matrix(p, q)?;
            let lhs = m.transpose().mul(&h.h11)?.mul(&m.involution())?;
            if !lhs.equals(&h.h11) {
                inv_fail.push(format!("({p},{q})"));
            }
            let v = h.v_vector(q).sub(&h.v_vector(p));
            let mv = CycleClass::from_matrix(&m.mul(&v.to_matrix(n))?);
            if !mv.equals(&v.scale(&(h.x(p) * h.x(q)))) {
                eig_fail.push(format!("({p},{q})"));
            }
            if !h.circuit_transform(&v, p, q)?.equals(&mv) {
                circ_fail.push(format!("({p},{q})"));
            }
            // basis e_k − (w_k/w_i) e_i of {v : ᵀv H11 v_pq^∨ = 0}
            let w = h.h11.mul(&v.involution().to_matrix(n))?.col(0);
            let i = w.iter().position(|x| !x.is_zero()).expect("nonzero pairing vector");
            let mut ok = true;
            for k in (0..n).filter(|&k| k != i) {
                let mut b = CycleClass::unit(n, k);
                b.coeffs[i] = -(&w[k] / &w[i]);
                let mb = CycleClass::from_matrix(&m.mul(&b.to_matrix(n))?);
                ok &= mb.equals(&b) && h.bilinear(&b, &v).is_zero();
            }
            if !ok {
                fix_fail.push(format!("({p},{q})"));
            }
        }
    }
    rep.push(summarize("monodromy preserves H11", inv_fail, total));
    rep.push(summarize("monodromy eigenvalue xp*xq on v_pq", eig_fail, total));
    rep.push(summarize("monodromy fixes the orthogonal complement", fix_fail, total));
    rep.push(summarize("circuit transform matches monodromy matrix", circ_fail, total));

    if n >= 3 {
        use CycleRef::*;
        let m = h.monodromy_matrix(1, n)?;
        let v = h.v_vector(n);
        let mut fam: Vec<CycleRef> = (3..n).map(|j| GJK(2, j)).collect();
        fam.extend([G20Perp, G2InfPerp]);
        let mut fails = Vec::new();
        for c in &fam {
            let cl = h.class_of(*c)?;
            let mc = CycleClass::from_matrix(&m.mul(&cl.to_matrix(n))?);
            if !(h.bilinear(&cl, &v).is_zero() && mc.equals(&cl)) {
                fails.push(c.to_string());
            }
        }
        rep.push(summarize("explicit complement of g1n is orthogonal and fixed", fails, fam.len()));
    }
    Ok(())
}

fn connection_checks(h: &Homology, rep: &mut IdentityReport) -> Result<(), HomologyError> {
    let n = h.n;
    let mut f0 = Vec::new();
    let mut fi = Vec::new();
    for p in 1..=n {
        let m = h.connection_matrix_0(p)?;
        let lhs = m.transpose().mul(&h.h11.shift_subst(Shift::P0(p)))?.mul(&m.involution())?;
        if !lhs.equals(&h.h11) {
            f0.push(p.to_string());
        }
        let m = h.connection_matrix_inf(p)?;
        let lhs = m.transpose().mul(&h.h11.shift_subst(Shift::PInf(p)))?.mul(&m.involution())?;
        if !lhs.equals(&h.h11) {
            fi.push(p.to_string());
        }
    }
    rep.push(summarize("connection at 0 preserves H11", f0, n));
    rep.push(summarize("connection at inf preserves H11", fi, n));
    let d = h.connection_diag_0(1);
    let ok = d[0].equals(&h.x0()) && d[1..].iter().all(|e| e.equals(&h.x(1)));
    rep.push(IdentityCheck::exact("connection factor at p = 1 is diag(x0, x1, ...)", ok, ""));
    Ok(())
}

fn relation_checks(h: &Homology, rep: &mut IdentityReport) -> Result<(), HomologyError> {
    let n = h.n;
    // class of γ_{1n} from its pairings with the basis duals
    let row = SymMatrix::from_fn(n, n, 1, |k, _| h.fact31(Pt::J(n), h.basis[k]));
    let v = CycleClass::from_matrix(&h.h11.transpose().solve(&row)?);
    let w: Vec<SymRat> = (0..n)
        .map(|k| {
            let mut acc = h.zero();
            for i in 0..n {
                acc = acc + &v.coeffs[i] * h.h1n(h.basis[i], h.dual_cols[k]);
            }
            acc
        })
        .collect();
    let expanded = h.expand_in_basis(&w);
    let ok = expanded.equals(&h.v_vector(n)) && v.equals(&h.v_vector(n));
    rep.push(IdentityCheck::exact("expansion of g1n reproduces the basis relation", ok, ""));

    let self_ok = (0..n).all(|i| {
        let w: Vec<SymRat> = (0..n).map(|k| h.h1n(h.basis[i], h.dual_cols[k])).collect();
        h.expand_in_basis(&w).equals(&CycleClass::unit(n, i))
    });
    rep.push(IdentityCheck::exact("basis rows expand to unit vectors", self_ok, ""));

    if n >= 3 {
        let g20 = h.class_of(CycleRef::GJ0(2))?;
        let g10 = h.class_of(CycleRef::GJ0(1))?;
        let expect = CycleClass::unit(n, 0).scale(&(h.x0() / h.x(1) - h.one()));
        rep.push(IdentityCheck::exact("g20 - g10 = (x0/x1 - 1) g12", g20.sub(&g10).equals(&expect), ""));
    }
    let g10_ok = h.class_of(CycleRef::GJ0(1))?.equals(&CycleClass::unit(n, n - 2))
        && h.class_of(CycleRef::GJInf(1))?.equals(&CycleClass::unit(n, n - 1));
    rep.push(IdentityCheck::exact("g10 and g1inf rows expand to basis vectors", g10_ok, ""));
    Ok(())
}

fn table_checks(h: &Homology, rep: &mut IdentityReport) -> Result<(), HomologyError> {
    use CycleRef::*;
    let n = h.n;
    let mut skew_fail = Vec::new();
    let pairs = h.tabulated_pairs();
    for &(a, b) in &pairs {
        let lhs = h.ih_pair(a, b)?;
        let rhs = -h.ih_pair(b, a)?.involution();
        if !lhs.equals(&rhs) {
            skew_fail.push(format!("({a},{b})"));
        }
    }
    rep.push(summarize("skew symmetry I(a,b^v) = -I(b,a^v)^v", skew_fail, pairs.len()));

    let mut cor_fail = Vec::new();
    let mut total = 0;
    for j in 1..=n {
        for k in j + 1..=n {
            for jp in 1..=n {
                for kp in jp + 1..=n {
                    total += 1;
                    let a = h.class_of(GJK(j, k))?;
                    let b = h.class_of(GJK(jp, kp))?;
                    if !h.cor32(j, k, jp, kp).equals(&h.bilinear(&a, &b)) {
                        cor_fail.push(format!("({j}{k},{jp}{kp})"));
                    }
                }
            }
        }
    }
    rep.push(summarize("interval table agrees with bilinear expansion", cor_fail, total));

    let mut fails = Vec::new();
    for (i, &p) in h.basis.iter().enumerate() {
        let e = CycleClass::unit(n, i);
        for k in 1..=n {
            if !h.h10(p, k).equals(&h.bilinear(&e, &h.class_of(GJ0(k))?)) {
                fails.push(format!("H10({p},{k})"));
            }
            if !h.h1inf(p, k).equals(&h.bilinear(&e, &h.class_of(GJInf(k))?)) {
                fails.push(format!("H1inf({p},{k})"));
            }
        }
    }
    rep.push(summarize("H10 and H1inf agree with expansions of H0n and Hinfn", fails, 2 * n * n));
    Ok(())
}

fn numeric_checks(h: &Homology, seed: u64, rep: &mut IdentityReport) -> Result<(), HomologyError> {
    let n = h.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = ModuliConfig::random(&mut rng, Complex64::new(0.0, 1.0), n, 0.1);
    let mut real = cfg.exponent_point();
    for z in real.iter_mut() {
        z.im = 0.0;
    }

    // signature of √−1·H_{11,0∞} for real parameters
    let m = h.build_matrix(MatrixKind::H11ZeroInf)?.evaluate_exponents(&real)?;
    let im = Complex64::i();
    let a = [[im * m[0][0], im * m[0][1]], [im * m[1][0], im * m[1][1]]];
    let herm = (0..2).flat_map(|i| (0..2).map(move |k| (i, k))).map(|(i, k)| (a[i][k] - a[k][i].conj()).norm());
    let herm_err = herm.fold(0.0, f64::max);
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let sig_ok = herm_err < 1e-12 && det.re < 0.0;
    rep.push(
        IdentityCheck::exact("sqrt(-1) H11_0inf is Hermitian of signature (1,1)", sig_ok, "")
            .with_detail(format!("det {:.3e}, hermitian defect {herm_err:.1e}", det.re)),
    );

    // x_1 x_2 a primitive cube root of unity: three circuits fix γ_12
    let mut exps = real.clone();
    let (p, q) = (1, 2);
    if n >= 3 {
        exps[0] = Complex64::new(0.2, 0.0);
        exps[1] = Complex64::new(1.0 / 3.0 - 0.2, 0.0);
    } else {
        // n = 2 forces x_1 x_2 = 1
        exps[0] = Complex64::new(0.2, 0.0);
    }
    let order = if n >= 3 { 3 } else { 1 };
    let v = h.v_vector(q).sub(&h.v_vector(p));
    let mut g = v.clone();
    for _ in 0..order {
        g = h.circuit_transform(&g, p, q)?;
    }
    let mut err = 0f64;
    for (a, b) in g.coeffs.iter().zip(&v.coeffs) {
        err = err.max((a.evaluate_exponents(&exps)? - b.evaluate_exponents(&exps)?).norm());
    }
    rep.push(IdentityCheck::numeric("root-of-unity circuit power fixes g12", err, 1e-10));

    // shift substitution versus evaluation with c_inf -> c_inf + c_1
    let det = h.h11.det()?;
    let a = det.shift_subst(Shift::P0(1)).evaluate_exponents(&cfg.exponent_point())?;
    let mut shifted = cfg.exponent_point();
    shifted[n] += cfg.c[0];
    let b = det.evaluate_exponents(&shifted)?;
    rep.push(IdentityCheck::numeric(
        "shift substitution commutes with evaluation",
        crate::theta::scaled_diff(a, b),
        1e-12,
    ));
    Ok(())
}

/// Independent groups of homology identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomologyGroup {
    Determinants,
    Monodromy,
    Connection,
    Relations,
    Tables,
    Numeric,
}

impl HomologyGroup {
    pub const ALL: [HomologyGroup; 6] = [
        HomologyGroup::Determinants,
        HomologyGroup::Monodromy,
        HomologyGroup::Connection,
        HomologyGroup::Relations,
        HomologyGroup::Tables,
        HomologyGroup::Numeric,
    ];
}

/// Runs one group of identities for `n` punctures; `seed` only affects
/// [`HomologyGroup::Numeric`].
pub fn verify_homology_group(n: usize, group: HomologyGroup, seed: u64) -> Result<IdentityReport, HomologyError> {
    let h = Homology::new(n)?;
    let mut rep = IdentityReport::new();
    match group {
        HomologyGroup::Determinants => determinant_checks(&h, &mut rep)?,
        HomologyGroup::Monodromy => monodromy_checks(&h, &mut rep)?,
        HomologyGroup::Connection => connection_checks(&h, &mut rep)?,
        HomologyGroup::Relations => relation_checks(&h, &mut rep)?,
        HomologyGroup::Tables => table_checks(&h, &mut rep)?,
        HomologyGroup::Numeric => numeric_checks(&h, seed, &mut rep)?,
    }
    Ok(rep)
}

/// Runs every symbolic identity for `n` punctures.
pub fn verify_homology_suite(n: usize, opts: SuiteOptions) -> Result<IdentityReport, HomologyError> {
    let mut rep = IdentityReport::new();
    for group in HomologyGroup::ALL {
        let skip = (group == HomologyGroup::Connection && !opts.connection)
            || (group == HomologyGroup::Numeric && !opts.numeric);
        if !skip {
            rep.extend(verify_homology_group(n, group, opts.seed)?);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let h = Homology::new(4).unwrap();
        let x1 = SymRat::x(4, 1);
        let one = SymRat::one(4);
        let v = h.ih_pair(CycleRef::G1J(Pt::J(2)), CycleRef::G1J(Pt::J(3))).unwrap();
        assert_eq!(v, &x1 / (&one - &x1));
        assert!(h.ih_pair(CycleRef::GJK(1, 2), CycleRef::GJK(3, 4)).unwrap().is_zero());
        let v = h.ih_pair(CycleRef::G1J(Pt::Zero), CycleRef::GNJ(Pt::Inf)).unwrap();
        assert_eq!(v, SymRat::x(4, 4) * SymRat::xinf(4));
        assert!(matches!(
            h.ih_pair(CycleRef::GNJ(Pt::J(2)), CycleRef::GNJ(Pt::J(3))),
            Err(HomologyError::PairNotTabulated(_))
        ));
        assert!(matches!(h.ih_pair(CycleRef::GJK(2, 2), CycleRef::GJ0(1)), Err(HomologyError::IndexOutOfRange(_))));
    }

    #[test]
    fn symplectic_block_at_n2() {
        let rep = verify_homology_suite(2, SuiteOptions::default()).unwrap();
        assert!(rep.all_passed(), "{}", rep.render());
    }

    #[test]
    fn circuit_transform_matches_matrix_on_random_class() {
        let n = 3;
        let h = Homology::new(n).unwrap();
        let gamma = CycleClass {
            coeffs: vec![SymRat::from_int(n, 2), SymRat::x0(n) - SymRat::x(n, 2), SymRat::xinf(n)],
        };
        for (p, q) in [(1, 2), (1, 3), (2, 3)] {
            let m = h.monodromy_matrix(p, q).unwrap();
            let by_matrix = CycleClass::from_matrix(&m.mul(&gamma.to_matrix(n)).unwrap());
            assert!(h.circuit_transform(&gamma, p, q).unwrap().equals(&by_matrix));
        }
    }

    #[test]
    fn too_small() {
        assert!(Homology::new(1).is_err());
        let h = Homology::new(2).unwrap();
        assert!(matches!(h.build_matrix(MatrixKind::H1Prime), Err(HomologyError::SizeTooSmall { .. })));
        assert!(h.monodromy_matrix(2, 1).is_err());
    }
}

#[cfg(test)]
mod suite_tests {
    use super::*;

    #[test]
    fn suite_n3_to_n5() {
        for n in [3, 4, 5] {
            let t = std::time::Instant::now();
            let rep = verify_homology_suite(n, SuiteOptions::default()).unwrap();
            eprintln!("n={n} {:?}", t.elapsed());
            assert!(rep.all_passed(), "{}", rep.render());
        }
    }
}
