//! Sparse bivariate polynomials over `Q(i, sqrt d)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::KElement;
use super::upoly::UniPoly;

/// Exponent pair `(ex, ey)` of the monomial `x^ex y^ey`.
pub type Monomial = (u32, u32);

/// A polynomial in `x`, `y`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, KElement>,
}

/// Order used for normalization and display: total degree ascending, then
/// `ex` descending.
fn graded_key(m: &Monomial) -> (u32, std::cmp::Reverse<u32>) {
    (m.0 + m.1, std::cmp::Reverse(m.0))
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn constant(c: KElement) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(KElement::one())
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, KElement::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, KElement::one())
    }

    pub fn monomial(ex: u32, ey: u32, c: KElement) -> Self {
        let mut p = SparsePoly::zero();
        p.add_term((ex, ey), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, KElement)>>(it: I) -> Self {
        let mut p = SparsePoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(a, b, c)| ((a, b), KElement::from_int(c))))
    }

    pub fn add_term(&mut self, m: Monomial, c: KElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old += &c;
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &KElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, ex: u32, ey: u32) -> KElement {
        self.terms.get(&(ex, ey)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(a, b)| a == 0 && b == 0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).min()
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|m| m.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|m| m.1).max().unwrap_or(0)
    }

    pub fn homogeneous_part(&self, n: u32) -> Self {
        self.filter(|m| m.0 + m.1 == n)
    }

    /// Drops every term of total degree above `n`.
    pub fn truncate(&self, n: u32) -> Self {
        self.filter(|m| m.0 + m.1 <= n)
    }

    fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// `self * o` without terms of total degree above `max`.
    pub fn mul_truncated(&self, o: &SparsePoly, max: u32) -> SparsePoly {
        self.mul_filtered(o, |d| d <= max)
    }

    /// Homogeneous part of degree `k` of `self * o`.
    pub fn mul_degree(&self, o: &SparsePoly, k: u32) -> SparsePoly {
        self.mul_filtered(o, |d| d == k)
    }

    fn mul_filtered(&self, o: &SparsePoly, keep: impl Fn(u32) -> bool) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                if keep(m1.0 + m1.1 + m2.0 + m2.1) {
                    out.add_term((m1.0 + m2.0, m1.1 + m2.1), c1 * c2);
                }
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&KElement) -> KElement) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn scale(&self, s: &KElement) -> Self {
        if s.is_zero() {
            return SparsePoly::zero();
        }
        self.map_coeffs(|c| c * s)
    }

    pub fn mul_monomial(&self, ex: u32, ey: u32) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| ((m.0 + ex, m.1 + ey), c.clone()))
                .collect(),
        }
    }

    /// Exact division by `x^ex y^ey`, `None` if some term is not divisible.
    pub fn div_monomial(&self, ex: u32, ey: u32) -> Option<Self> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0 < ex || m.1 < ey {
                return None;
            }
            out.insert((m.0 - ex, m.1 - ey), c.clone());
        }
        Some(SparsePoly { terms: out })
    }

    /// Largest `(a, b)` such that `x^a y^b` divides every term.
    pub fn monomial_content(&self) -> Monomial {
        let a = self.terms.keys().map(|m| m.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|m| m.1).min().unwrap_or(0);
        (a, b)
    }

    pub fn dx(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.0 > 0)
                .map(|(m, c)| ((m.0 - 1, m.1), c * &KElement::from_int(m.0 as i64))),
        )
    }

    pub fn dy(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.1 > 0)
                .map(|(m, c)| ((m.0, m.1 - 1), c * &KElement::from_int(m.1 as i64))),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = SparsePoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &KElement, y: &KElement) -> KElement {
        let mut acc = KElement::zero();
        for ((a, b), c) in &self.terms {
            acc += &(c * &(x.pow(*a) * y.pow(*b)));
        }
        acc
    }

    /// `p(xs, ys)`: substitutes polynomials for both variables.
    pub fn substitute(&self, xs: &SparsePoly, ys: &SparsePoly) -> SparsePoly {
        self.substitute_truncated(xs, ys, None)
    }

    /// As [`SparsePoly::substitute`], discarding terms of degree above
    /// `max_degree` along the way.
    pub fn substitute_truncated(
        &self,
        xs: &SparsePoly,
        ys: &SparsePoly,
        max_degree: Option<u32>,
    ) -> SparsePoly {
        let trunc = |p: SparsePoly| match max_degree {
            Some(n) => p.truncate(n),
            None => p,
        };
        let xpows = powers(xs, self.degree_x(), &trunc);
        let ypows = powers(ys, self.degree_y(), &trunc);
        let mut out = SparsePoly::zero();
        for ((a, b), c) in &self.terms {
            let t = trunc(&xpows[*a as usize] * &ypows[*b as usize]);
            out = &out + &t.scale(c);
        }
        out
    }

    /// `p(x, y + c)`.
    pub fn shift_y(&self, c: &KElement) -> SparsePoly {
        self.substitute(&SparsePoly::x(), &(&SparsePoly::y() + &SparsePoly::constant(c.clone())))
    }

    /// `p(x + c, y)`.
    pub fn shift_x(&self, c: &KElement) -> SparsePoly {
        self.substitute(&(&SparsePoly::x() + &SparsePoly::constant(c.clone())), &SparsePoly::y())
    }

    /// `p(x, 0)` as a univariate polynomial in `x`.
    pub fn at_y_zero(&self) -> UniPoly {
        UniPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.1 == 0)
                .map(|(m, c)| (m.0 as usize, c.clone())),
        )
    }

    /// `p(0, y)` as a univariate polynomial in `y`.
    pub fn at_x_zero(&self) -> UniPoly {
        UniPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.0 == 0)
                .map(|(m, c)| (m.1 as usize, c.clone())),
        )
    }

    /// View as a polynomial in `y` with coefficients in `K[x]`.
    pub fn as_poly_in_y(&self) -> Vec<UniPoly> {
        let mut out = vec![UniPoly::zero(); self.degree_y() as usize + 1];
        for ((a, b), c) in &self.terms {
            out[*b as usize].add_term(*a as usize, c.clone());
        }
        out
    }

    pub fn from_poly_in_y(coeffs: &[UniPoly]) -> Self {
        let mut p = SparsePoly::zero();
        for (b, u) in coeffs.iter().enumerate() {
            for (a, c) in u.coeffs().iter().enumerate() {
                p.add_term((a as u32, b as u32), c.clone());
            }
        }
        p
    }

    /// Embeds the univariate `u` as a polynomial in `x`.
    pub fn from_uni_x(u: &UniPoly) -> Self {
        Self::from_poly_in_y(std::slice::from_ref(u))
    }

    /// Leading term in lex order with `y` before `x`.
    fn lex_leading(&self) -> Option<(Monomial, &KElement)> {
        self.terms
            .iter()
            .max_by_key(|(m, _)| (m.1, m.0))
            .map(|(m, c)| (*m, c))
    }

    /// Exact quotient `self / divisor`, or `None` if it does not divide.
    pub fn div_exact(&self, divisor: &SparsePoly) -> Option<SparsePoly> {
        let (lm, lc) = divisor.lex_leading()?;
        let lc_inv = lc.inv();
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero();
        while let Some((m, c)) = rem.lex_leading() {
            if m.0 < lm.0 || m.1 < lm.1 {
                return None;
            }
            let t = SparsePoly::monomial(m.0 - lm.0, m.1 - lm.1, c * &lc_inv);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// The first coefficient in graded order (lowest degree, then highest
    /// power of `x`).
    pub fn first_coefficient(&self) -> Option<&KElement> {
        self.terms
            .iter()
            .min_by_key(|(m, _)| graded_key(m))
            .map(|(_, c)| c)
    }

    /// Scalar multiple whose first coefficient is 1.
    pub fn normalized(&self) -> SparsePoly {
        match self.first_coefficient() {
            Some(c) => self.scale(&c.inv()),
            None => SparsePoly::zero(),
        }
    }

    /// Terms listed in the graded display order.
    pub fn graded_terms(&self) -> Vec<(Monomial, KElement)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by_key(|(m, _)| graded_key(m));
        v
    }

    pub fn conj(&self) -> SparsePoly {
        self.map_coeffs(KElement::conj)
    }
}

fn powers(p: &SparsePoly, n: u32, trunc: &impl Fn(SparsePoly) -> SparsePoly) -> Vec<SparsePoly> {
    let mut out = vec![SparsePoly::one()];
    for k in 1..=n as usize {
        let next = trunc(&out[k - 1] * p);
        out.push(next);
    }
    out
}

impl<'a> Add<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, o: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, o: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, o: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term((m1.0 + m2.0, m1.1 + m2.1), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.map_coeffs(|c| -c)
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({self})")
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.graded_terms().into_iter().enumerate() {
            let mon = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let mut parts = Vec::new();
                    if a > 0 {
                        parts.push(if a == 1 { "x".to_string() } else { format!("x^{a}") });
                    }
                    if b > 0 {
                        parts.push(if b == 1 { "y".to_string() } else { format!("y^{b}") });
                    }
                    parts.join("*")
                }
            };
            let simple = c.is_rational();
            let (neg, mag) = if simple && c.real_sign() == Some(std::cmp::Ordering::Less) {
                (true, -&c)
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let cs = if simple { mag.to_string() } else { format!("({mag})") };
            match (mon.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{cs}")?,
                (false, true) => write!(f, "{mon}")?,
                (false, false) => write!(f, "{cs}*{mon}")?,
            }
        }
        Ok(())
    }
}
