use std::fmt;

use super::field::KElement;
use super::gcd::poly_gcd;
use super::poly::SparsePoly;
use crate::error::{Error, Result};

/// A polynomial one-form `A dx + B dy`, saturated at construction.
///
/// The vector field `P d/dx + Q d/dy` corresponds to `P dy - Q dx`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OneFormGerm {
    a: SparsePoly,
    b: SparsePoly,
}

/// A saturated form together with the factor divided out of `(A, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Saturation {
    pub form: OneFormGerm,
    pub removed: SparsePoly,
}

impl OneFormGerm {
    /// Builds `A dx + B dy`, dividing out `gcd(A, B)`.
    pub fn new(a: SparsePoly, b: SparsePoly) -> Result<Self> {
        Ok(Self::saturate(a, b)?.form)
    }

    pub fn saturate(a: SparsePoly, b: SparsePoly) -> Result<Saturation> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroForm);
        }
        let g = poly_gcd(&a, &b);
        if g.is_constant() {
            return Ok(Saturation {
                form: OneFormGerm { a, b },
                removed: SparsePoly::one(),
            });
        }
        let a = a.div_exact(&g).expect("gcd divides A");
        let b = b.div_exact(&g).expect("gcd divides B");
        Ok(Saturation {
            form: OneFormGerm { a, b },
            removed: g,
        })
    }

    /// Builds from a vector field `P d/dx + Q d/dy`: `A = -Q`, `B = P`.
    pub fn from_vector_field(p: SparsePoly, q: SparsePoly) -> Result<Self> {
        Self::new(-&q, p)
    }

    /// Wraps a pair already known to be saturated (or where saturation is
    /// irrelevant, e.g. intermediate chart expressions).
    pub(crate) fn from_parts_unchecked(a: SparsePoly, b: SparsePoly) -> Self {
        OneFormGerm { a, b }
    }

    pub fn a(&self) -> &SparsePoly {
        &self.a
    }

    pub fn b(&self) -> &SparsePoly {
        &self.b
    }

    /// Dual vector field components `(P, Q) = (B, -A)`.
    pub fn vector_field(&self) -> (SparsePoly, SparsePoly) {
        (self.b.clone(), -&self.a)
    }

    /// Derivation `X(f) = P f_x + Q f_y` of the dual vector field.
    pub fn apply_vector_field(&self, f: &SparsePoly) -> SparsePoly {
        &(&self.b * &f.dx()) - &(&self.a * &f.dy())
    }

    /// Vanishing order at the origin.
    pub fn order(&self) -> u32 {
        match (self.a.order(), self.b.order()) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!("zero form"),
        }
    }

    pub fn is_singular_at_origin(&self) -> bool {
        self.order() >= 1
    }

    /// Coefficient of `dx ^ dy` in `self ^ other`.
    pub fn wedge(&self, other: &OneFormGerm) -> SparsePoly {
        wedge(&self.a, &self.b, &other.a, &other.b)
    }

    /// Translation of the center: the form in coordinates `(x + cx, y + cy)`.
    pub fn translate(&self, cx: &KElement, cy: &KElement) -> OneFormGerm {
        let xs = &SparsePoly::x() + &SparsePoly::constant(cx.clone());
        let ys = &SparsePoly::y() + &SparsePoly::constant(cy.clone());
        OneFormGerm {
            a: self.a.substitute(&xs, &ys),
            b: self.b.substitute(&xs, &ys),
        }
    }

    /// Pull-back by the polynomial map `(x, y) = (f(u, v), g(u, v))`.
    pub fn pullback(&self, f: &SparsePoly, g: &SparsePoly) -> OneFormGerm {
        let a = self.a.substitute(f, g);
        let b = self.b.substitute(f, g);
        OneFormGerm {
            a: &(&a * &f.dx()) + &(&b * &g.dx()),
            b: &(&a * &f.dy()) + &(&b * &g.dy()),
        }
    }

    /// Pull-back by a linear change `(x, y) = M (u, v)`.
    pub fn linear_change(&self, m: &[[KElement; 2]; 2]) -> OneFormGerm {
        let f = SparsePoly::from_terms([((1, 0), m[0][0].clone()), ((0, 1), m[0][1].clone())]);
        let g = SparsePoly::from_terms([((1, 0), m[1][0].clone()), ((0, 1), m[1][1].clone())]);
        self.pullback(&f, &g)
    }

    pub fn truncate(&self, n: u32) -> OneFormGerm {
        OneFormGerm {
            a: self.a.truncate(n),
            b: self.b.truncate(n),
        }
    }

    pub fn scale(&self, s: &KElement) -> OneFormGerm {
        OneFormGerm {
            a: self.a.scale(s),
            b: self.b.scale(s),
        }
    }

    pub fn mul_poly(&self, p: &SparsePoly) -> OneFormGerm {
        OneFormGerm {
            a: &self.a * p,
            b: &self.b * p,
        }
    }

    /// Homogeneous part of degree `n` of both coefficients.
    pub fn homogeneous_part(&self, n: u32) -> OneFormGerm {
        OneFormGerm {
            a: self.a.homogeneous_part(n),
            b: self.b.homogeneous_part(n),
        }
    }

    /// Exterior derivative `df` as a one-form (not saturated).
    pub fn differential(f: &SparsePoly) -> OneFormGerm {
        OneFormGerm {
            a: f.dx(),
            b: f.dy(),
        }
    }
}

pub fn wedge(a1: &SparsePoly, b1: &SparsePoly, a2: &SparsePoly, b2: &SparsePoly) -> SparsePoly {
    &(a1 * b2) - &(b1 * a2)
}

impl fmt::Debug for OneFormGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({self})")
    }
}

impl fmt::Display for OneFormGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx + ({}) dy", self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_divides_common_factor() {
        // (x+y) * (y dx + x dy)
        let f = SparsePoly::from_ints(&[(1, 0, 1), (0, 1, 1)]);
        let a = &f * &SparsePoly::y();
        let b = &f * &SparsePoly::x();
        let s = OneFormGerm::saturate(a, b).unwrap();
        assert_eq!(s.removed, f);
        assert_eq!(s.form.a(), &SparsePoly::y());
        assert_eq!(s.form.b(), &SparsePoly::x());
    }

    #[test]
    fn zero_form_rejected() {
        assert_eq!(
            OneFormGerm::new(SparsePoly::zero(), SparsePoly::zero()),
            Err(Error::ZeroForm)
        );
    }

    #[test]
    fn duality_convention() {
        // X = x d/dx - y d/dy  <->  x dy + y dx
        let w = OneFormGerm::from_vector_field(SparsePoly::x(), -&SparsePoly::y()).unwrap();
        assert_eq!(w.a(), &SparsePoly::y());
        assert_eq!(w.b(), &SparsePoly::x());
        assert_eq!(w.apply_vector_field(&SparsePoly::x()), SparsePoly::x());
    }
}
