//! Exact arithmetic in the biquadratic field `Q(i, sqrt(d))`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field `Q(i, sqrt(d))` for a square-free `d >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    d: u64,
}

impl Field {
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 || !is_square_free(d) {
            return Err(Error::InvalidField(d));
        }
        Ok(Field { d })
    }

    /// `Q(i)`.
    pub fn gaussian() -> Self {
        Field { d: 1 }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn sqrt_d(&self) -> KElement {
        KElement::from_parts(
            [
                BigRational::zero(),
                BigRational::one(),
                BigRational::zero(),
                BigRational::zero(),
            ],
            self.d,
        )
    }

    /// `a + b*sqrt(d)` with rational `a`, `b`.
    pub fn real(&self, a: BigRational, b: BigRational) -> KElement {
        KElement::from_parts([a, b, BigRational::zero(), BigRational::zero()], self.d)
    }

    pub fn element(&self, q: [BigRational; 4]) -> KElement {
        KElement::from_parts(q, self.d)
    }

    /// Is `other` usable together with elements of this field?
    pub fn admits(&self, x: &KElement) -> bool {
        x.d == 1 || x.d == self.d
    }
}

fn is_square_free(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// `q0 + q1*sqrt(d) + q2*i + q3*i*sqrt(d)`.
///
/// Elements without a `sqrt(d)` component are stored with `d = 1`, so they
/// combine with elements of any field. Two elements that both carry a
/// `sqrt(d)` component must share the same `d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KElement {
    q: [BigRational; 4],
    d: u64,
}

/// Gaussian rational, used internally for the `alpha + beta*sqrt(d)` split.
#[derive(Clone, PartialEq)]
struct Gauss {
    re: BigRational,
    im: BigRational,
}

impl Gauss {
    fn zero() -> Self {
        Gauss {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
    fn sub(&self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn scale(&self, s: &BigRational) -> Gauss {
        Gauss {
            re: &self.re * s,
            im: &self.im * s,
        }
    }
    fn inv(&self) -> Gauss {
        let n = &self.re * &self.re + &self.im * &self.im;
        Gauss {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }
    fn sqrt(&self) -> Option<Gauss> {
        if self.im.is_zero() {
            if self.re.is_negative() {
                return rational_sqrt(&-&self.re).map(|y| Gauss {
                    re: BigRational::zero(),
                    im: y,
                });
            }
            return rational_sqrt(&self.re).map(|x| Gauss {
                re: x,
                im: BigRational::zero(),
            });
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        let n = rational_sqrt(&norm)?;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let x = rational_sqrt(&((&self.re + &n) * &half))?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / (&x * BigRational::from_integer(BigInt::from(2)));
        Some(Gauss { re: x, im: y })
    }
}

pub(crate) fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Sign of `a + b*sqrt(d)`.
pub(crate) fn real_quadratic_sign(a: &BigRational, b: &BigRational, d: u64) -> Ordering {
    let sa = a.cmp(&BigRational::zero());
    let sb = b.cmp(&BigRational::zero());
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let a2 = a * a;
    let b2d = b * b * BigRational::from_integer(BigInt::from(d));
    match a2.cmp(&b2d) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

impl KElement {
    fn from_parts(mut q: [BigRational; 4], d: u64) -> Self {
        if d == 1 {
            let q1 = std::mem::take(&mut q[1]);
            let q3 = std::mem::take(&mut q[3]);
            q[0] += q1;
            q[2] += q3;
        }
        let mut x = KElement { q, d };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.q[1].is_zero() && self.q[3].is_zero() {
            self.d = 1;
        }
    }

    fn split(&self) -> (Gauss, Gauss) {
        let [q0, q1, q2, q3] = &self.q;
        (
            Gauss {
                re: q0.clone(),
                im: q2.clone(),
            },
            Gauss {
                re: q1.clone(),
                im: q3.clone(),
            },
        )
    }

    fn join(alpha: Gauss, beta: Gauss, d: u64) -> Self {
        KElement::from_parts([alpha.re, beta.re, alpha.im, beta.im], d)
    }

    fn joint_d(&self, other: &KElement) -> u64 {
        match (self.d, other.d) {
            (1, e) | (e, 1) => e,
            (a, b) => {
                assert_eq!(a, b, "elements from different fields Q(i, sqrt {a}) and Q(i, sqrt {b})");
                a
            }
        }
    }

    pub fn zero() -> Self {
        KElement {
            q: [
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
            d: 1,
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn i() -> Self {
        KElement::from_parts(
            [
                BigRational::zero(),
                BigRational::zero(),
                BigRational::one(),
                BigRational::zero(),
            ],
            1,
        )
    }

    pub fn from_rational(r: BigRational) -> Self {
        KElement::from_parts(
            [r, BigRational::zero(), BigRational::zero(), BigRational::zero()],
            1,
        )
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, m: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(m)))
    }

    /// `re + im*i` with rational parts.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        KElement::from_parts([re, BigRational::zero(), im, BigRational::zero()], 1)
    }

    pub fn coefficients(&self) -> &[BigRational; 4] {
        &self.q
    }

    /// Field parameter carried by this element (1 when no `sqrt(d)` component).
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.q.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.q[0].is_one() && self.q[1..].iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.q[2].is_zero() && self.q[3].is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.q[0])
    }

    /// Complex conjugation `i -> -i`.
    pub fn conj(&self) -> Self {
        let [q0, q1, q2, q3] = self.q.clone();
        KElement::from_parts([q0, q1, -q2, -q3], self.d)
    }

    /// The Galois automorphism `sqrt(d) -> -sqrt(d)`.
    pub fn conj_sqrt(&self) -> Self {
        let [q0, q1, q2, q3] = self.q.clone();
        KElement::from_parts([q0, -q1, q2, -q3], self.d)
    }

    /// `q0 + q1*sqrt(d)`.
    pub fn real_part(&self) -> Self {
        KElement::from_parts(
            [
                self.q[0].clone(),
                self.q[1].clone(),
                BigRational::zero(),
                BigRational::zero(),
            ],
            self.d,
        )
    }

    /// `q2 + q3*sqrt(d)`.
    pub fn imag_part(&self) -> Self {
        KElement::from_parts(
            [
                self.q[2].clone(),
                self.q[3].clone(),
                BigRational::zero(),
                BigRational::zero(),
            ],
            self.d,
        )
    }

    /// Exact sign of a real element; `None` for non-real input.
    pub fn real_sign(&self) -> Option<Ordering> {
        self.is_real()
            .then(|| real_quadratic_sign(&self.q[0], &self.q[1], self.d))
    }

    pub fn is_positive_real(&self) -> bool {
        self.real_sign() == Some(Ordering::Greater)
    }

    pub fn is_negative_real(&self) -> bool {
        self.real_sign() == Some(Ordering::Less)
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (alpha, beta) = self.split();
        let dq = BigRational::from_integer(BigInt::from(self.d));
        let norm = alpha.mul(&alpha).sub(&beta.mul(&beta).scale(&dq));
        let ninv = norm.inv();
        let neg_beta = Gauss::zero().sub(&beta);
        Ok(KElement::join(alpha.mul(&ninv), neg_beta.mul(&ninv), self.d))
    }

    pub fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero in Q(i, sqrt d)")
    }

    pub fn checked_div(&self, other: &KElement) -> Result<Self> {
        Ok(self * &other.checked_inv()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = KElement::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Square root inside the same field, if one exists.
    pub fn sqrt_in(&self, field: &Field) -> Option<Self> {
        if self.is_zero() {
            return Some(KElement::zero());
        }
        let d = field.d();
        let (alpha, beta) = self.split();
        let mut candidates: Vec<KElement> = Vec::new();
        if beta.is_zero() {
            if let Some(g) = alpha.sqrt() {
                candidates.push(KElement::join(g, Gauss::zero(), 1));
            }
            if d > 1 {
                let inv_d = BigRational::new(BigInt::one(), BigInt::from(d));
                if let Some(g) = alpha.scale(&inv_d).sqrt() {
                    candidates.push(KElement::join(Gauss::zero(), g, d));
                }
            }
        } else {
            let dq = BigRational::from_integer(BigInt::from(d));
            let disc = alpha.mul(&alpha).sub(&beta.mul(&beta).scale(&dq));
            if let Some(rho) = disc.sqrt() {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                for g2 in [alpha.add(&rho).scale(&half), alpha.sub(&rho).scale(&half)] {
                    if let Some(gamma) = g2.sqrt() {
                        if gamma.is_zero() {
                            continue;
                        }
                        let delta = beta.mul(&gamma.scale(&BigRational::from_integer(2.into())).inv());
                        candidates.push(KElement::join(gamma, delta, d));
                    }
                }
            }
        }
        candidates.into_iter().find(|c| &(c * c) == self)
    }

    pub fn to_complex(&self) -> Complex64 {
        let s = (self.d as f64).sqrt();
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        Complex64::new(
            f(&self.q[0]) + f(&self.q[1]) * s,
            f(&self.q[2]) + f(&self.q[3]) * s,
        )
    }

    /// The 4-tuple of `"num/den"` strings used in reports.
    pub fn to_strings(&self) -> [String; 4] {
        self.q.clone().map(|q| format!("{}/{}", q.numer(), q.denom()))
    }

    /// Inverse of [`KElement::to_strings`]; accepts `"n"` or `"n/m"` entries.
    pub fn parse(parts: &[impl AsRef<str>], field: &Field) -> std::result::Result<Self, String> {
        if parts.len() != 4 {
            return Err(format!("expected 4 rational components, found {}", parts.len()));
        }
        let mut q: [BigRational; 4] = Default::default();
        for (slot, s) in q.iter_mut().zip(parts) {
            *slot = parse_rational(s.as_ref())?;
        }
        if field.d() == 1 && !(q[1].is_zero() && q[3].is_zero()) {
            return Err("sqrt(d) components must be zero when d = 1".into());
        }
        Ok(field.element(q))
    }
}

pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let (n, m) = match s.split_once('/') {
        Some((n, m)) => (n.trim(), m.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("invalid rational `{s}`"))?;
    let m: BigInt = m.parse().map_err(|_| format!("invalid rational `{s}`"))?;
    if m.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(n, m))
}

impl Default for KElement {
    fn default() -> Self {
        KElement::zero()
    }
}

impl fmt::Debug for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({self})")
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let units = ["", "√", "i", "i√"];
        let mut first = true;
        for (k, q) in self.q.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = match k {
                0 => String::new(),
                1 | 3 => format!("{}{}", units[k], self.d),
                _ => units[k].to_string(),
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.numer().is_one() {
                    write!(f, "{}", mag.numer())?;
                }
                write!(f, "{unit}")?;
                if !mag.denom().is_one() {
                    write!(f, "/{}", mag.denom())?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a KElement> for &'a KElement {
    type Output = KElement;
    fn add(self, o: &KElement) -> KElement {
        let d = self.joint_d(o);
        let q = [0, 1, 2, 3].map(|k| &self.q[k] + &o.q[k]);
        KElement::from_parts(q, d)
    }
}

impl<'a> Sub<&'a KElement> for &'a KElement {
    type Output = KElement;
    fn sub(self, o: &KElement) -> KElement {
        let d = self.joint_d(o);
        let q = [0, 1, 2, 3].map(|k| &self.q[k] - &o.q[k]);
        KElement::from_parts(q, d)
    }
}

/// `(slot, sign, times_d)` of the product of basis elements `j` and `k` of
/// `1, sqrt d, i, i sqrt d`.
const BASIS_PRODUCT: [[(usize, bool, bool); 4]; 4] = [
    [(0, false, false), (1, false, false), (2, false, false), (3, false, false)],
    [(1, false, false), (0, false, true), (3, false, false), (2, false, true)],
    [(2, false, false), (3, false, false), (0, true, false), (1, true, false)],
    [(3, false, false), (2, false, true), (1, true, false), (0, true, true)],
];

impl<'a> Mul<&'a KElement> for &'a KElement {
    type Output = KElement;
    fn mul(self, o: &KElement) -> KElement {
        let d = self.joint_d(o);
        let dq = BigRational::from_integer(BigInt::from(d));
        let mut q: [BigRational; 4] = Default::default();
        for (j, a) in self.q.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in o.q.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (slot, neg, times_d) = BASIS_PRODUCT[j][k];
                let mut c = a * b;
                if times_d {
                    c *= &dq;
                }
                if neg {
                    q[slot] -= c;
                } else {
                    q[slot] += c;
                }
            }
        }
        KElement::from_parts(q, d)
    }
}

impl<'a> Div<&'a KElement> for &'a KElement {
    type Output = KElement;
    fn div(self, o: &KElement) -> KElement {
        self * &o.inv()
    }
}

impl Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        KElement {
            q: self.q.clone().map(|q| -q),
            d: self.d,
        }
    }
}

impl Neg for KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<KElement> for KElement {
            type Output = KElement;
            fn $m(self, o: KElement) -> KElement { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a KElement> for KElement {
            type Output = KElement;
            fn $m(self, o: &KElement) -> KElement { (&self).$m(o) }
        }
        impl<'a> $tr<KElement> for &'a KElement {
            type Output = KElement;
            fn $m(self, o: KElement) -> KElement { self.$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&KElement> for KElement {
    fn add_assign(&mut self, o: &KElement) {
        *self = &*self + o;
    }
}

impl SubAssign<&KElement> for KElement {
    fn sub_assign(&mut self, o: &KElement) {
        *self = &*self - o;
    }
}

impl MulAssign<&KElement> for KElement {
    fn mul_assign(&mut self, o: &KElement) {
        *self = &*self * o;
    }
}

/// Operation selector for [`kelem_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KOp {
    Add,
    Mul,
    Div,
    Conj,
    RealPart,
}

/// Binary/unary dispatch over the field operations; unary ops ignore `b`.
pub fn kelem_arith(a: &KElement, b: &KElement, op: KOp) -> Result<KElement> {
    Ok(match op {
        KOp::Add => a + b,
        KOp::Mul => a * b,
        KOp::Div => a.checked_div(b)?,
        KOp::Conj => a.conj(),
        KOp::RealPart => a.real_part(),
    })
}
