//! Formal invariant curves written as graphs over a coordinate axis.

use crate::exactalg::{KElement, SparsePoly, UniPoly};

/// `p(x, phi(x))` truncated above degree `n`, as a series in `x`.
pub(crate) fn restrict_to_graph(p: &SparsePoly, phi: &UniPoly, n: u32) -> UniPoly {
    let ys = SparsePoly::from_uni_x(phi);
    p.substitute_truncated(&SparsePoly::x(), &ys, Some(n)).at_y_zero()
}

/// Exchanges the roles of `x` and `y`.
pub(crate) fn swap_xy(p: &SparsePoly) -> SparsePoly {
    SparsePoly::from_terms(p.terms().map(|(&(a, b), c)| ((b, a), c.clone())))
}

/// Truncated series product.
pub(crate) fn series_mul(a: &UniPoly, b: &UniPoly, n: usize) -> UniPoly {
    let mut out = vec![KElement::zero(); n + 1];
    for (i, ai) in a.coeffs().iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs().iter().enumerate().take(n + 1 - i) {
            out[i + j] += &(ai * bj);
        }
    }
    UniPoly::new(out)
}

/// Truncated series quotient `a / b`; `b(0)` must be nonzero.
pub(crate) fn series_div(a: &UniPoly, b: &UniPoly, n: usize) -> UniPoly {
    let b0inv = b.coeff(0).inv();
    let mut q: Vec<KElement> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut s = a.coeff(k);
        for (j, qj) in q.iter().enumerate() {
            let bk = b.coeff(k - j);
            if !bk.is_zero() {
                s -= &(qj * &bk);
            }
        }
        q.push(&s * &b0inv);
    }
    UniPoly::new(q)
}

/// Graph `y = phi(x)`, `phi(0) = 0`, invariant under `a d/dx + b d/dy`,
/// through order `n`.
///
/// Assumes `a` has no linear `y` term. The order-`k` coefficient is divided
/// by `b_y - k a_x`; `None` if one of these vanishes.
pub(crate) fn invariant_graph(a: &SparsePoly, b: &SparsePoly, n: u32) -> Option<UniPoly> {
    debug_assert!(a.coeff(0, 1).is_zero());
    let ax = a.coeff(1, 0);
    let by = b.coeff(0, 1);
    let mut phi = UniPoly::zero();
    for k in 1..=n {
        let e = invariance_defect(a, b, &phi, k);
        let ek = e.coeff(k as usize);
        if ek.is_zero() {
            continue;
        }
        let den = &by - &(&KElement::from_int(k as i64) * &ax);
        if den.is_zero() {
            return None;
        }
        phi.add_term(k as usize, -(&ek / &den));
    }
    Some(phi)
}

/// `b(x, phi) - phi' a(x, phi)` through order `n`.
pub(crate) fn invariance_defect(a: &SparsePoly, b: &SparsePoly, phi: &UniPoly, n: u32) -> UniPoly {
    let bx = restrict_to_graph(b, phi, n);
    let ax = restrict_to_graph(a, phi, n);
    bx.sub(&series_mul(&phi.derivative(), &ax, n as usize))
}
