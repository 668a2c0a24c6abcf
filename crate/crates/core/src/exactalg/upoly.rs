//! Dense univariate polynomials over `Q(i, sqrt d)` and root extraction.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::field::{Field, KElement};

/// Coefficients stored low degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    c: Vec<KElement>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(KElement::one())
    }

    pub fn constant(c: KElement) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `t - r`.
    pub fn linear_root(r: &KElement) -> Self {
        Self::new(vec![-r, KElement::one()])
    }

    pub fn new(mut c: Vec<KElement>) -> Self {
        while c.last().is_some_and(KElement::is_zero) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&n| KElement::from_int(n)).collect())
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, KElement)>>(it: I) -> Self {
        let mut p = UniPoly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: usize, c: KElement) {
        if self.c.len() <= k {
            self.c.resize(k + 1, KElement::zero());
        }
        self.c[k] += &c;
        let trimmed = std::mem::take(&mut self.c);
        *self = UniPoly::new(trimmed);
    }

    pub fn coeffs(&self) -> &[KElement] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> KElement {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> KElement {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let inv = self.lead().inv();
        self.scale(&inv)
    }

    pub fn scale(&self, s: &KElement) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![KElement::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, n: usize) -> UniPoly {
        (0..n).fold(UniPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * &KElement::from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, t: &KElement) -> KElement {
        self.c
            .iter()
            .rev()
            .fold(KElement::zero(), |acc, a| &(&acc * t) + a)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.c.clone();
        let dl = d.c.len();
        if rem.len() < dl {
            return (UniPoly::zero(), self.clone());
        }
        let inv = d.lead().inv();
        let mut q = vec![KElement::zero(); rem.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let coef = &rem[k + dl - 1] * &inv;
            if coef.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                rem[k + j] -= &(&coef * dj);
            }
            q[k] = coef;
        }
        (UniPoly::new(q), UniPoly::new(rem))
    }

    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn map_coeffs(&self, f: impl Fn(&KElement) -> KElement) -> UniPoly {
        UniPoly::new(self.c.iter().map(f).collect())
    }

    /// Complex approximation of the coefficients.
    pub fn to_complex(&self) -> Vec<Complex64> {
        self.c.iter().map(KElement::to_complex).collect()
    }

    /// Square-free decomposition: `self = lead * prod a_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        // Yun's algorithm.
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_exact(&a).expect("gcd divides");
        let mut c = fp.div_exact(&a).expect("gcd divides");
        let mut dpoly = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            a = b.gcd(&dpoly);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            c = dpoly.div_exact(&a).expect("gcd divides");
            dpoly = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let coef = if a.is_rational() { a.to_string() } else { format!("({a})") };
            parts.push(match k {
                0 => coef,
                1 if a.is_one() => var.to_string(),
                1 => format!("{coef}*{var}"),
                _ if a.is_one() => format!("{var}^{k}"),
                _ => format!("{coef}*{var}^{k}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U({})", self.display_in("t"))
    }
}

/// Roots of a univariate polynomial that lie in the field.
#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    /// Distinct roots with multiplicities.
    pub roots: Vec<(KElement, usize)>,
    /// Monic factor carrying the roots outside the field (1 when none).
    pub unrepresented: UniPoly,
}

impl RootReport {
    pub fn unrepresented_degree(&self) -> usize {
        self.unrepresented.degree()
    }
}

/// All roots of `p` in `Q(i, sqrt d)` with multiplicities.
///
/// Linear and quadratic factors are solved in closed form. For square-free
/// factors of degree three or more, candidate roots come from a numerical
/// root finder and are confirmed by exact evaluation; whatever cannot be
/// confirmed is returned as the unrepresented factor.
pub fn univariate_roots_in_k(p: &UniPoly, field: &Field) -> RootReport {
    assert!(!p.is_zero(), "roots of the zero polynomial");
    let mut roots = Vec::new();
    let mut unrep = UniPoly::one();
    for (factor, mult) in p.squarefree_decomposition() {
        let (rs, rest) = squarefree_roots(&factor, field);
        roots.extend(rs.into_iter().map(|r| (r, mult)));
        unrep = unrep.mul(&rest.pow(mult));
    }
    roots.sort_by(|a, b| root_order(&a.0, &b.0));
    RootReport {
        roots,
        unrepresented: unrep.monic(),
    }
}

fn root_order(a: &KElement, b: &KElement) -> std::cmp::Ordering {
    let za = a.to_complex();
    let zb = b.to_complex();
    za.re
        .partial_cmp(&zb.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(za.im.partial_cmp(&zb.im).unwrap_or(std::cmp::Ordering::Equal))
}

fn squarefree_roots(p: &UniPoly, field: &Field) -> (Vec<KElement>, UniPoly) {
    let mut rest = p.monic();
    let mut roots = Vec::new();
    loop {
        match rest.degree() {
            0 => break,
            1 => {
                roots.push(-&rest.coeff(0));
                rest = UniPoly::one();
                break;
            }
            2 => {
                if let Some((r1, r2)) = quadratic_roots(&rest.coeff(2), &rest.coeff(1), &rest.coeff(0), field) {
                    roots.push(r1);
                    roots.push(r2);
                    rest = UniPoly::one();
                }
                break;
            }
            _ => {
                if rest.coeff(0).is_zero() {
                    roots.push(KElement::zero());
                    rest = rest.div_exact(&UniPoly::linear_root(&KElement::zero())).unwrap();
                    continue;
                }
                match numeric_candidate_root(&rest, field) {
                    Some(r) => {
                        rest = rest.div_exact(&UniPoly::linear_root(&r)).expect("verified root");
                        roots.push(r);
                    }
                    None => break,
                }
            }
        }
    }
    (roots, rest)
}

/// Both roots of `a t^2 + b t + c` if they lie in the field.
pub fn quadratic_roots(
    a: &KElement,
    b: &KElement,
    c: &KElement,
    field: &Field,
) -> Option<(KElement, KElement)> {
    let disc = b * b - KElement::from_int(4) * a * c;
    let s = disc.sqrt_in(field)?;
    let two_a = KElement::from_int(2) * a;
    Some(((-b + &s) / &two_a, (-b - &s) / &two_a))
}

fn numeric_candidate_root(p: &UniPoly, field: &Field) -> Option<KElement> {
    let primary = aberth_roots(&p.to_complex());
    let d = field.d();
    if d == 1 {
        for z in &primary {
            let cand = KElement::gaussian(rationalize(z.re)?, rationalize(z.im)?);
            if p.eval(&cand).is_zero() {
                return Some(cand);
            }
        }
        return None;
    }
    let conj = aberth_roots(&p.map_coeffs(KElement::conj_sqrt).to_complex());
    let s = (d as f64).sqrt();
    for z1 in &primary {
        for z2 in &conj {
            let parts = [
                (z1.re + z2.re) / 2.0,
                (z1.re - z2.re) / (2.0 * s),
                (z1.im + z2.im) / 2.0,
                (z1.im - z2.im) / (2.0 * s),
            ];
            let q: Option<Vec<BigRational>> = parts.iter().map(|&v| rationalize(v)).collect();
            let Some(q) = q else { continue };
            let cand = field.element([q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()]);
            if p.eval(&cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

/// Best rational approximation with a bounded denominator, if close enough.
fn rationalize(v: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    const MAX_DEN: i64 = 1_000_000;
    let tol = 1e-8 * v.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = v;
    for _ in 0..40 {
        let a = x.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_DEN as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - v).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = x - a;
        if frac.abs() < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    (((h1 as f64) / (k1.max(1) as f64) - v).abs() <= tol && k1 != 0)
        .then(|| BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Simultaneous Aberth-Ehrlich iteration on complex coefficients (low
/// degree first).
pub fn aberth_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    let eval = |t: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for c in monic.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < 1e-15 * bound {
            break;
        }
    }
    z
}

impl UniPoly {
    /// Approximate value at a complex point.
    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        self.c
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, a| acc * t + a.to_complex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_root_at_zero() {
        let p = UniPoly::from_ints(&[0, 0, 2]);
        let r = univariate_roots_in_k(&p, &Field::gaussian());
        assert_eq!(r.roots, vec![(KElement::zero(), 2)]);
        assert_eq!(r.unrepresented_degree(), 0);
    }

    #[test]
    fn gaussian_roots_of_t2_plus_1() {
        let p = UniPoly::from_ints(&[1, 0, 1]);
        let r = univariate_roots_in_k(&p, &Field::gaussian());
        let roots: Vec<_> = r.roots.iter().map(|(x, _)| x.clone()).collect();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&KElement::i()));
        assert!(roots.contains(&-KElement::i()));
    }

    #[test]
    fn sqrt_two_depends_on_field() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let r = univariate_roots_in_k(&p, &Field::gaussian());
        assert!(r.roots.is_empty());
        assert_eq!(r.unrepresented_degree(), 2);
        let k = Field::new(2).unwrap();
        let r = univariate_roots_in_k(&p, &k);
        assert_eq!(r.roots.len(), 2);
        assert!(r.roots.contains(&(k.sqrt_d(), 1)));
        assert!(r.roots.contains(&(-k.sqrt_d(), 1)));
    }

    #[test]
    fn cubic_with_mixed_roots() {
        // (t - 1/2)(t + 3)(t^2 + 2) (t - 1)^2
        let p = UniPoly::from_ints(&[-1, 2])
            .mul(&UniPoly::from_ints(&[3, 1]))
            .mul(&UniPoly::from_ints(&[2, 0, 1]))
            .mul(&UniPoly::from_ints(&[-1, 1]).pow(2));
        let r = univariate_roots_in_k(&p, &Field::gaussian());
        assert_eq!(r.roots.len(), 3);
        assert!(r.roots.contains(&(KElement::from_int(1), 2)));
        assert!(r.roots.contains(&(KElement::from_frac(1, 2), 1)));
        assert_eq!(r.unrepresented_degree(), 2);
    }

    #[test]
    fn quartic_in_biquadratic_field() {
        let k = Field::new(2).unwrap();
        let a = KElement::one() + k.sqrt_d();
        let b = KElement::i() - k.sqrt_d();
        let c = KElement::from_frac(2, 3);
        let p = UniPoly::linear_root(&a)
            .mul(&UniPoly::linear_root(&b))
            .mul(&UniPoly::linear_root(&c))
            .mul(&UniPoly::from_ints(&[5, 0, 0, 1]));
        let r = univariate_roots_in_k(&p, &k);
        assert_eq!(r.roots.len(), 3);
        assert_eq!(r.unrepresented_degree(), 3);
    }

    #[test]
    fn squarefree_parts() {
        let p = UniPoly::from_ints(&[-1, 1]).pow(3).mul(&UniPoly::from_ints(&[1, 1]));
        let parts = p.squarefree_decomposition();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (UniPoly::from_ints(&[1, 1]), 1));
        assert_eq!(parts[1], (UniPoly::from_ints(&[-1, 1]), 3));
    }
}
