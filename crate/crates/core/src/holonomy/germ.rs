//! Truncated germs `f(z) = mu z + a_2 z^2 + ... + a_N z^N` and their algebra.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{AlgebraicRatio, Field, KElement};

/// Tolerance for numeric comparisons of coefficients and multipliers.
pub const NUMERIC_TOL: f64 = 1e-12;

/// Largest root-of-unity order tested for numeric multipliers.
const NUMERIC_ROOT_BOUND: u64 = 64;

/// The linear coefficient of a germ.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplier {
    Exact(KElement),
    /// `exp(2 pi i r)`, kept symbolic.
    Exp2PiI(AlgebraicRatio),
    Numeric(Complex64),
}

fn compatible(a: &KElement, b: &KElement) -> bool {
    a.d() == 1 || b.d() == 1 || a.d() == b.d()
}

/// `r mod 1` in `[0, 1)`.
fn fractional(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// The primitive `q`-th root of unity `exp(2 pi i / q)` when it lies in some
/// `Q(i, sqrt d)`.
fn primitive_root(q: u64) -> Option<KElement> {
    let h = BigRational::new(BigInt::one(), BigInt::from(2));
    let z = BigRational::zero();
    let el = |d: u64, q: [BigRational; 4]| Field::new(d).map(|f| f.element(q)).ok();
    match q {
        1 => Some(KElement::one()),
        2 => Some(KElement::from_int(-1)),
        4 => Some(KElement::i()),
        3 => el(3, [-h.clone(), z.clone(), z, h]),
        6 => el(3, [h.clone(), z.clone(), z, h]),
        12 => el(3, [z.clone(), h.clone(), h, z]),
        8 => el(2, [z.clone(), h.clone(), z, h]),
        _ => None,
    }
}

impl Multiplier {
    /// `exp(2 pi i r)` for a value `r` in the field.
    pub fn exp_2pi_i(r: KElement, field: &Field) -> Self {
        Multiplier::Exp2PiI(AlgebraicRatio::from_value(r, field)).normalized()
    }

    /// Reduces rational exponents modulo 1.
    fn normalized(self) -> Self {
        match &self {
            Multiplier::Exp2PiI(r) => match r.as_rational() {
                Some(q) => {
                    Multiplier::Exp2PiI(AlgebraicRatio::from_value(KElement::from_rational(fractional(&q)), r.field()))
                }
                None => self,
            },
            _ => self,
        }
    }

    /// The exponent `r` of a symbolic multiplier when it is rational, as `(p, q)` in lowest terms with `0 <= p < q`.
    fn rational_exponent(&self) -> Option<(u64, u64)> {
        let Multiplier::Exp2PiI(r) = self else { return None };
        let q = fractional(&r.as_rational()?);
        Some((q.numer().to_u64()?, q.denom().to_u64()?))
    }

    /// An exact value, when one is available in some `Q(i, sqrt d)`.
    pub fn exact_value(&self) -> Option<KElement> {
        match self {
            Multiplier::Exact(k) => Some(k.clone()),
            Multiplier::Exp2PiI(_) => {
                let (p, q) = self.rational_exponent()?;
                Some(primitive_root(q)?.pow(p as u32))
            }
            Multiplier::Numeric(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Multiplier::Exact(k) => k.to_complex(),
            Multiplier::Exp2PiI(r) => {
                if let Some((p, q)) = self.rational_exponent() {
                    let t = 2.0 * std::f64::consts::PI * p as f64 / q as f64;
                    return Complex64::from_polar(1.0, t);
                }
                (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * r.approx()).exp()
            }
            Multiplier::Numeric(c) => *c,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Multiplier::Numeric(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Multiplier::Exact(k) => k.is_zero(),
            Multiplier::Exp2PiI(_) => false,
            Multiplier::Numeric(c) => c.norm() < NUMERIC_TOL,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Multiplier::Exact(k) => k.is_one(),
            Multiplier::Exp2PiI(_) => self.rational_exponent() == Some((0, 1)),
            Multiplier::Numeric(c) => (c - 1.0).norm() < NUMERIC_TOL,
        }
    }

    /// `|mu| = 1`.
    pub fn has_unit_modulus(&self) -> bool {
        match self {
            Multiplier::Exact(k) => (k * &k.conj()).is_one(),
            Multiplier::Exp2PiI(r) => r.is_real(),
            Multiplier::Numeric(c) => (c.norm() - 1.0).abs() < NUMERIC_TOL,
        }
    }

    /// The order `q` of `mu` as a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        if !self.has_unit_modulus() {
            return None;
        }
        match self {
            Multiplier::Exact(k) => (1..=24u32).find(|&q| k.pow(q).is_one()).map(u64::from),
            Multiplier::Exp2PiI(r) => r.is_rational().then(|| self.rational_exponent().map(|(_, q)| q))?,
            Multiplier::Numeric(c) => (1..=NUMERIC_ROOT_BOUND).find(|&q| (c.powu(q as u32) - 1.0).norm() < 1e-9),
        }
    }

    pub fn mul(&self, other: &Multiplier) -> Multiplier {
        use Multiplier::*;
        match (self, other) {
            (Exact(a), Exact(b)) if compatible(a, b) => return Exact(a * b),
            (Exp2PiI(a), Exp2PiI(b)) => {
                if let (Some(x), Some(y)) = (a.value(), b.value()) {
                    if compatible(&x, &y) {
                        let field = if x.d() != 1 { a.field() } else { b.field() };
                        return Multiplier::exp_2pi_i(&x + &y, field);
                    }
                }
            }
            (Exp2PiI(_), Exact(b)) | (Exact(b), Exp2PiI(_)) => {
                let e = if let Exp2PiI(_) = self { self } else { other };
                if let Some(x) = e.exact_value() {
                    if compatible(&x, b) {
                        return Exact(&x * b);
                    }
                }
            }
            _ => {}
        }
        Numeric(self.to_complex() * other.to_complex())
    }

    pub fn inv(&self) -> Multiplier {
        match self {
            Multiplier::Exact(k) => Multiplier::Exact(k.inv()),
            Multiplier::Exp2PiI(r) => match r.value() {
                Some(x) => Multiplier::exp_2pi_i(-x, r.field()),
                None => Multiplier::Numeric(1.0 / self.to_complex()),
            },
            Multiplier::Numeric(c) => Multiplier::Numeric(1.0 / c),
        }
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplier::Exact(k) => write!(f, "{k}"),
            Multiplier::Exp2PiI(r) => write!(f, "exp(2 pi i ({r}))"),
            Multiplier::Numeric(c) => write!(f, "{c}"),
        }
    }
}

/// Coefficients `a_2..a_N`.
#[derive(Debug, Clone, PartialEq)]
pub enum Jet {
    Exact(Vec<KElement>),
    Numeric(Vec<Complex64>),
}

impl Jet {
    pub fn len(&self) -> usize {
        match self {
            Jet::Exact(v) => v.len(),
            Jet::Numeric(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Jet::Exact(v) => v.iter().all(KElement::is_zero),
            Jet::Numeric(v) => v.iter().all(|c| c.norm() < NUMERIC_TOL),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Jet::Numeric(_))
    }

    fn to_numeric(&self) -> Vec<Complex64> {
        match self {
            Jet::Exact(v) => v.iter().map(KElement::to_complex).collect(),
            Jet::Numeric(v) => v.clone(),
        }
    }
}

/// Coefficient type for series algebra.
pub(crate) trait Coeff: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn negligible(&self) -> bool;
}

impl Coeff for KElement {
    fn zero() -> Self {
        KElement::zero()
    }
    fn one() -> Self {
        KElement::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self * &o.inv()
    }
    fn negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn negligible(&self) -> bool {
        self.norm() < NUMERIC_TOL
    }
}

/// Series `s[1] z + ... + s[n] z^n`; `s[0]` is always zero.
pub(crate) fn series_mul<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let n = a.len() - 1;
    let mut out = vec![C::zero(); n + 1];
    for i in 1..=n {
        if a[i].negligible() {
            continue;
        }
        for j in 1..=n - i {
            out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
        }
    }
    out
}

pub(crate) fn series_compose<C: Coeff>(f: &[C], g: &[C]) -> Vec<C> {
    let n = f.len() - 1;
    let mut out = vec![C::zero(); n + 1];
    let mut power = g.to_vec();
    for k in 1..=n {
        if k > 1 {
            power = series_mul(&power, g);
        }
        if f[k].negligible() {
            continue;
        }
        for i in k..=n {
            out[i] = out[i].add(&f[k].mul(&power[i]));
        }
    }
    out
}

pub(crate) fn series_inverse<C: Coeff>(f: &[C]) -> Vec<C> {
    let n = f.len() - 1;
    let mut g = vec![C::zero(); n + 1];
    g[1] = C::one().div(&f[1]);
    for m in 2..=n {
        let trial = series_compose(&f[..=m], &g[..=m]);
        g[m] = C::zero().sub(&trial[m].div(&f[1]));
    }
    g
}

/// A germ of diffeomorphism of `(C, 0)` truncated at order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalGerm {
    multiplier: Multiplier,
    jet: Jet,
}

impl FormalGerm {
    /// Germ of order `jet.len() + 1`. A numeric multiplier forces a numeric jet.
    pub fn new(multiplier: Multiplier, jet: Jet) -> Result<Self> {
        if multiplier.is_zero() {
            return Err(Error::InvalidParameters("germ multiplier must be nonzero".into()));
        }
        let jet = if multiplier.is_numeric() && !jet.is_numeric() {
            Jet::Numeric(jet.to_numeric())
        } else {
            jet
        };
        Ok(FormalGerm { multiplier, jet })
    }

    /// `mu z` truncated at order `n`.
    pub fn linear(multiplier: Multiplier, n: usize) -> Result<Self> {
        let jet = if multiplier.is_numeric() {
            Jet::Numeric(vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)])
        } else {
            Jet::Exact(vec![KElement::zero(); n.saturating_sub(1)])
        };
        FormalGerm::new(multiplier, jet)
    }

    /// From exact coefficients `a_1, ..., a_N`.
    pub fn from_exact(coeffs: &[KElement]) -> Result<Self> {
        let (first, rest) = coeffs
            .split_first()
            .ok_or_else(|| Error::InvalidParameters("empty coefficient list".into()))?;
        FormalGerm::new(Multiplier::Exact(first.clone()), Jet::Exact(rest.to_vec()))
    }

    /// From numeric coefficients `a_1, ..., a_N`.
    pub fn from_numeric(coeffs: &[Complex64]) -> Result<Self> {
        let (first, rest) = coeffs
            .split_first()
            .ok_or_else(|| Error::InvalidParameters("empty coefficient list".into()))?;
        FormalGerm::new(Multiplier::Numeric(*first), Jet::Numeric(rest.to_vec()))
    }

    /// `z + z^k` truncated at order `n`.
    pub fn tangent_to_identity(k: usize, n: usize) -> Result<Self> {
        let mut coeffs = vec![KElement::zero(); n];
        coeffs[0] = KElement::one();
        if k >= 2 && k <= n {
            coeffs[k - 1] = KElement::one();
        }
        FormalGerm::from_exact(&coeffs)
    }

    pub fn order(&self) -> usize {
        self.jet.len() + 1
    }

    pub fn multiplier(&self) -> &Multiplier {
        &self.multiplier
    }

    pub fn jet(&self) -> &Jet {
        &self.jet
    }

    pub fn is_linear(&self) -> bool {
        self.jet.is_zero()
    }

    pub fn is_numeric(&self) -> bool {
        self.jet.is_numeric()
    }

    pub fn is_identity(&self) -> bool {
        self.multiplier.is_one() && self.is_linear()
    }

    /// Exact series `[0, a_1, ..., a_N]`, if the multiplier has an exact value.
    pub(crate) fn exact_series(&self) -> Option<Vec<KElement>> {
        let Jet::Exact(v) = &self.jet else { return None };
        let mu = self.multiplier.exact_value()?;
        if !v.iter().all(|c| compatible(c, &mu)) {
            return None;
        }
        let mut s = Vec::with_capacity(v.len() + 2);
        s.push(KElement::zero());
        s.push(mu);
        s.extend(v.iter().cloned());
        Some(s)
    }

    pub(crate) fn numeric_series(&self) -> Vec<Complex64> {
        let mut s = vec![Complex64::new(0.0, 0.0), self.multiplier.to_complex()];
        s.extend(self.jet.to_numeric());
        s
    }

    fn from_exact_series(s: Vec<KElement>) -> Self {
        FormalGerm {
            multiplier: Multiplier::Exact(s[1].clone()),
            jet: Jet::Exact(s[2..].to_vec()),
        }
    }

    fn from_numeric_series(s: Vec<Complex64>) -> Self {
        FormalGerm {
            multiplier: Multiplier::Numeric(s[1]),
            jet: Jet::Numeric(s[2..].to_vec()),
        }
    }

    /// The same germ with floating-point coefficients.
    pub fn to_numeric(&self) -> FormalGerm {
        FormalGerm::from_numeric_series(self.numeric_series())
    }

    /// Coefficient `a_k` as a complex number, `0` beyond the order.
    pub fn coefficient(&self, k: usize) -> Complex64 {
        self.numeric_series().get(k).copied().unwrap_or_default()
    }

    /// Horner evaluation of the truncated series.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numeric_series()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Inverse through order `N`.
    pub fn invert(&self) -> FormalGerm {
        if self.is_linear() {
            return FormalGerm {
                multiplier: self.multiplier.inv(),
                jet: self.jet.clone(),
            };
        }
        match self.exact_series() {
            Some(s) => FormalGerm::from_exact_series(series_inverse(&s)),
            None => FormalGerm::from_numeric_series(series_inverse(&self.numeric_series())),
        }
    }

    /// `f^{q}` for `q >= 1`.
    pub fn iterate(&self, q: u64) -> Result<FormalGerm> {
        let mut acc = self.clone();
        for _ in 1..q {
            acc = germ_compose(&acc, self)?;
        }
        Ok(acc)
    }

    /// `c^{-1} f(c z)`.
    pub fn conjugate_by_scaling(&self, c: &KElement) -> Result<FormalGerm> {
        let Jet::Exact(v) = &self.jet else {
            let cc = c.to_complex();
            let s: Vec<Complex64> = self
                .numeric_series()
                .iter()
                .enumerate()
                .map(|(k, a)| a * cc.powi(k as i32 - 1))
                .collect();
            return Ok(FormalGerm::from_numeric_series(s));
        };
        let jet = v
            .iter()
            .enumerate()
            .map(|(i, a)| a * &c.pow(i as u32 + 1))
            .collect();
        FormalGerm::new(self.multiplier.clone(), Jet::Exact(jet))
    }

    /// The germ truncated at order `n` (no-op when `n >= N`).
    pub fn truncate(&self, n: usize) -> FormalGerm {
        let keep = n.saturating_sub(1);
        let jet = match &self.jet {
            Jet::Exact(v) => Jet::Exact(v.iter().take(keep).cloned().collect()),
            Jet::Numeric(v) => Jet::Numeric(v.iter().take(keep).copied().collect()),
        };
        FormalGerm {
            multiplier: self.multiplier.clone(),
            jet,
        }
    }

    /// Index of the first nonzero `a_k` with `k >= 2`.
    pub fn first_nonlinear(&self) -> Option<usize> {
        match &self.jet {
            Jet::Exact(v) => v.iter().position(|c| !c.is_zero()),
            Jet::Numeric(v) => v.iter().position(|c| c.norm() >= NUMERIC_TOL),
        }
        .map(|i| i + 2)
    }
}

/// `f o g` through the common order.
pub fn germ_compose(f: &FormalGerm, g: &FormalGerm) -> Result<FormalGerm> {
    if f.order() != g.order() {
        return Err(Error::InvalidParameters(format!(
            "jet orders differ: {} and {}",
            f.order(),
            g.order()
        )));
    }
    if f.is_linear() && g.is_linear() {
        let m = f.multiplier.mul(&g.multiplier);
        let mut h = FormalGerm::linear(m, f.order())?;
        if (f.is_numeric() || g.is_numeric()) && !h.is_numeric() {
            h = h.to_numeric();
        }
        return Ok(h);
    }
    match (f.is_numeric(), g.is_numeric()) {
        (false, false) => {
            let (Some(a), Some(b)) = (f.exact_series(), g.exact_series()) else {
                return Err(Error::MixedModeComposition);
            };
            let d = a.iter().chain(&b).map(KElement::d).find(|&d| d != 1).unwrap_or(1);
            if a.iter().chain(&b).any(|c| c.d() != 1 && c.d() != d) {
                return Err(Error::MixedModeComposition);
            }
            Ok(FormalGerm::from_exact_series(series_compose(&a, &b)))
        }
        (true, true) => Ok(FormalGerm::from_numeric_series(series_compose(
            &f.numeric_series(),
            &g.numeric_series(),
        ))),
        _ => Err(Error::MixedModeComposition),
    }
}

/// `[f, g] = f o g o f^{-1} o g^{-1}`.
pub fn commutator(f: &FormalGerm, g: &FormalGerm) -> Result<FormalGerm> {
    let fg = germ_compose(f, g)?;
    let fgf = germ_compose(&fg, &f.invert())?;
    germ_compose(&fgf, &g.invert())
}

/// Lowest common multiple helper for root-of-unity orders.
pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Serializable form of a multiplier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierRecord {
    Exact { value: [String; 4] },
    Exp2PiI { ratio: String, approx: [f64; 2] },
    Numeric { value: [f64; 2] },
}

impl From<&Multiplier> for MultiplierRecord {
    fn from(m: &Multiplier) -> Self {
        match m {
            Multiplier::Exact(k) => MultiplierRecord::Exact { value: k.to_strings() },
            Multiplier::Exp2PiI(r) => {
                let a = r.approx();
                MultiplierRecord::Exp2PiI {
                    ratio: r.to_string(),
                    approx: [a.re, a.im],
                }
            }
            Multiplier::Numeric(c) => MultiplierRecord::Numeric { value: [c.re, c.im] },
        }
    }
}
