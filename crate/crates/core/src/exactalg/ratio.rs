//! Exact eigenvalue ratios as roots of quadratics over `Q(i, sqrt d)`.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use super::field::{Field, KElement};
use super::upoly::quadratic_roots;
use crate::error::{Error, Result};

/// Which root of the defining polynomial is meant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RootSelector {
    /// Both roots retained; predicates are evaluated on the principal root.
    Unoriented,
    /// A specific root lying in the field.
    Root(KElement),
    /// The root `(-b + s sqrt(b^2 - 4ac)) / 2a` with `s = +1` or `-1`, where
    /// the square root is the principal complex one. Used when the roots are
    /// not in the field.
    Branch(bool),
}

/// A root of `a r^2 + b r + c = 0` (or `b r + c = 0` when `a = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicRatio {
    pub a: KElement,
    pub b: KElement,
    pub c: KElement,
    pub selector: RootSelector,
    field: Field,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Domain {
    Poincare,
    Siegel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum RatioClass {
    PositiveRational,
    NegativeRational,
    RealIrrational(Domain),
    NonReal,
}

impl RatioClass {
    pub fn domain(self) -> Domain {
        match self {
            RatioClass::NegativeRational | RatioClass::RealIrrational(Domain::Siegel) => Domain::Siegel,
            _ => Domain::Poincare,
        }
    }
}

/// Ratio `r` of the eigenvalues of a 2x2 matrix with trace `t` and
/// determinant `det`: `det r^2 - (t^2 - 2 det) r + det = 0`.
pub fn ratio_from_matrix(t: &KElement, det: &KElement, field: &Field) -> Result<AlgebraicRatio> {
    if det.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let two = KElement::from_int(2);
    Ok(AlgebraicRatio {
        a: det.clone(),
        b: -(t * t - &two * det),
        c: det.clone(),
        selector: RootSelector::Unoriented,
        field: *field,
    })
}

/// Sign of a real element of the field.
fn sign(x: &KElement) -> Ordering {
    x.real_sign().expect("real element")
}

fn classify_root(r: &KElement) -> RatioClass {
    if !r.is_real() {
        return RatioClass::NonReal;
    }
    let s = sign(r);
    if r.is_rational() {
        if s == Ordering::Greater {
            RatioClass::PositiveRational
        } else {
            RatioClass::NegativeRational
        }
    } else if s == Ordering::Less {
        RatioClass::RealIrrational(Domain::Siegel)
    } else {
        RatioClass::RealIrrational(Domain::Poincare)
    }
}

impl AlgebraicRatio {
    /// The ratio `r` itself, encoded linearly.
    pub fn from_value(r: KElement, field: &Field) -> Self {
        AlgebraicRatio {
            a: KElement::zero(),
            b: KElement::one(),
            c: -r.clone(),
            selector: RootSelector::Root(r),
            field: *field,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_linear(&self) -> bool {
        self.a.is_zero()
    }

    /// Both roots, when they lie in the field (equal for a linear encoding).
    pub fn roots_in_k(&self) -> Option<(KElement, KElement)> {
        if self.is_linear() {
            let r = -&self.c / &self.b;
            return Some((r.clone(), r));
        }
        quadratic_roots(&self.a, &self.b, &self.c, &self.field)
    }

    /// The selected root when it lies in the field.
    pub fn value(&self) -> Option<KElement> {
        match &self.selector {
            RootSelector::Root(r) => Some(r.clone()),
            RootSelector::Unoriented => self.roots_in_k().map(|(r, _)| r),
            RootSelector::Branch(plus) => self.roots_in_k().map(|(r1, r2)| if *plus { r1 } else { r2 }),
        }
    }

    /// Selects the root `r`, which must satisfy the defining polynomial.
    pub fn oriented(&self, r: KElement) -> Option<Self> {
        let v = &(&(&self.a * &r) * &r + &(&self.b * &r)) + &self.c;
        v.is_zero().then(|| AlgebraicRatio {
            selector: RootSelector::Root(r),
            ..self.clone()
        })
    }

    /// The ratio `1 / r`: the polynomial with reversed coefficients.
    pub fn reciprocal(&self) -> Self {
        let selector = match &self.selector {
            RootSelector::Root(r) => RootSelector::Root(r.inv()),
            RootSelector::Unoriented => RootSelector::Unoriented,
            RootSelector::Branch(plus) => RootSelector::Branch(!*plus),
        };
        if self.is_linear() {
            let r = self.value().expect("linear root").inv();
            return AlgebraicRatio::from_value(r, &self.field);
        }
        AlgebraicRatio {
            a: self.c.clone(),
            b: self.b.clone(),
            c: self.a.clone(),
            selector,
            field: self.field,
        }
    }

    /// Floating-point value of the selected (or principal) root.
    pub fn approx(&self) -> Complex64 {
        if let Some(v) = self.value() {
            return v.to_complex();
        }
        let (a, b, c) = (self.a.to_complex(), self.b.to_complex(), self.c.to_complex());
        let s = (b * b - 4.0 * a * c).sqrt();
        let plus = !matches!(self.selector, RootSelector::Branch(false));
        if plus {
            (-b + s) / (2.0 * a)
        } else {
            (-b - s) / (2.0 * a)
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(
            ratio_classify(self),
            RatioClass::PositiveRational | RatioClass::NegativeRational
        )
    }

    pub fn is_real(&self) -> bool {
        ratio_classify(self) != RatioClass::NonReal
    }

    pub fn is_positive_rational(&self) -> bool {
        ratio_classify(self) == RatioClass::PositiveRational
    }

    pub fn is_negative_rational(&self) -> bool {
        ratio_classify(self) == RatioClass::NegativeRational
    }

    /// `r` or `1/r` is a positive integer.
    pub fn is_natural_or_reciprocal_natural(&self) -> bool {
        let Some(r) = self.value() else { return false };
        let Some(q) = r.as_rational() else { return false };
        q > &num_rational::BigRational::from_integer(0.into())
            && (q.is_integer() || q.recip().is_integer())
    }

    /// Rational value `p/q` of the selected root, if rational.
    pub fn as_rational(&self) -> Option<num_rational::BigRational> {
        self.value().and_then(|v| v.as_rational().cloned())
    }
}

/// Exact classification of the selected (or principal) root.
///
/// Roots outside the field are handled without computing them: for real
/// coefficients the discriminant sign decides reality and Vieta's formulas
/// give the signs; otherwise a real root would also be a root of the
/// conjugate quadratic, so it must be the root of their difference.
pub fn ratio_classify(r: &AlgebraicRatio) -> RatioClass {
    if let Some(v) = r.value() {
        return classify_root(&v);
    }
    // Normalize to r^2 + p r + q.
    let p = &r.b / &r.a;
    let q = &r.c / &r.a;
    if p.is_real() && q.is_real() {
        let disc = &(&p * &p) - &(KElement::from_int(4) * &q);
        if sign(&disc) == Ordering::Less {
            return RatioClass::NonReal;
        }
        // Real, distinct and outside the field, hence irrational.
        let plus = !matches!(r.selector, RootSelector::Branch(false));
        let negative = match sign(&q) {
            Ordering::Greater => sign(&p) == Ordering::Greater,
            _ => !plus,
        };
        return RatioClass::RealIrrational(if negative { Domain::Siegel } else { Domain::Poincare });
    }
    let dp = &p - &p.conj();
    let dq = &q - &q.conj();
    if !dp.is_zero() {
        let cand = -&dq / &dp;
        let on = &(&cand * &cand) + &(&(&p * &cand) + &q);
        if cand.is_real() && on.is_zero() {
            return classify_root(&cand);
        }
    }
    RatioClass::NonReal
}

impl fmt::Display for AlgebraicRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "root of ({})r^2 + ({})r + ({})", self.a, self.b, self.c),
        }
    }
}
