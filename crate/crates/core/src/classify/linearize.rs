//! Formal linearization of non-degenerate germs, degree by degree.

use crate::error::{Error, Result};
use crate::exactalg::linalg::{kernel, solve};
use crate::exactalg::{KElement, Monomial, OneFormGerm, SparsePoly};

/// Outcome of [`formal_linearize`].
#[derive(Debug, Clone, PartialEq)]
pub enum Linearization {
    /// `h = (x + ..., y + ...)` with `h*(w1) ^ w = O(certified_order + 2)`,
    /// where `w1` is the linear part of `w`.
    Linearizable {
        h: (SparsePoly, SparsePoly),
        certified_order: u32,
    },
    /// The homological equation has no solution at this degree.
    Obstructed { order: u32 },
}

fn homogeneous_monomials(n: u32) -> Vec<Monomial> {
    (0..=n).map(|i| (n - i, i)).collect()
}

/// Matrix whose columns are the coefficient vectors of `cols` on `monos`.
fn matrix(cols: &[SparsePoly], monos: &[Monomial]) -> Vec<Vec<KElement>> {
    monos
        .iter()
        .map(|&(a, b)| cols.iter().map(|c| c.coeff(a, b)).collect())
        .collect()
}

fn vector(p: &SparsePoly, monos: &[Monomial]) -> Vec<KElement> {
    monos.iter().map(|&(a, b)| p.coeff(a, b)).collect()
}

fn combination(basis: &[Monomial], coeffs: &[KElement]) -> SparsePoly {
    SparsePoly::from_terms(basis.iter().zip(coeffs).map(|(m, c)| (*m, c.clone())))
}

/// Wedge coefficient of `h*(w1) ^ w` through degree `n + 1`.
pub fn linearization_defect(w: &OneFormGerm, h: &(SparsePoly, SparsePoly), n: u32) -> SparsePoly {
    let w1 = w.homogeneous_part(1);
    let pulled = w1.pullback(&h.0, &h.1).truncate(n);
    pulled.wedge(&w.truncate(n)).truncate(n + 1)
}

/// Degree `n + 1` part of `h*(w1) ^ w`, for `h` of degree below `n`.
fn residual(w1: &OneFormGerm, w: &OneFormGerm, hx: &SparsePoly, hy: &SparsePoly, n: u32) -> SparsePoly {
    let la = w1.a().substitute(hx, hy);
    let lb = w1.b().substitute(hx, hy);
    let pa = &la.mul_truncated(&hx.dx(), n) + &lb.mul_truncated(&hy.dx(), n);
    let pb = &la.mul_truncated(&hx.dy(), n) + &lb.mul_truncated(&hy.dy(), n);
    &pa.mul_degree(w.b(), n + 1) - &pb.mul_degree(w.a(), n + 1)
}

/// Degree-`n` part of the pull-back of the linear form `w1` by
/// `(x + m, y)` or `(x, y + m)`, for `m` homogeneous of degree `n`.
fn first_variation(w1: &OneFormGerm, m: &SparsePoly, along_x: bool) -> OneFormGerm {
    let (a, b) = (w1.a(), w1.b());
    let (da, db) = if along_x { (a.dx(), b.dx()) } else { (a.dy(), b.dy()) };
    let lead = if along_x { a } else { b };
    let dm = OneFormGerm::differential(m).mul_poly(lead);
    OneFormGerm::from_parts_unchecked(&(&da * m) + dm.a(), &(&db * m) + dm.b())
}

/// Searches for a formal change `h = id + h.o.t.` carrying the foliation of
/// `w` to that of its linear part, through degree `jet_order`.
pub fn formal_linearize(w: &OneFormGerm, jet_order: u32) -> Result<Linearization> {
    let w1 = w.homogeneous_part(1);
    if w1.a().is_zero() && w1.b().is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let mut hx = SparsePoly::x();
    let mut hy = SparsePoly::y();
    for n in 2..=jet_order {
        let r = residual(&w1, w, &hx, &hy, n);
        if r.is_zero() {
            continue;
        }
        let basis = homogeneous_monomials(n);
        let target = homogeneous_monomials(n + 1);
        let mut cols = Vec::with_capacity(2 * basis.len());
        for axis in 0..2 {
            for &(a, b) in &basis {
                let m = SparsePoly::monomial(a, b, KElement::one());
                let delta = first_variation(&w1, &m, axis == 0);
                cols.push(delta.wedge(&w1));
            }
        }
        let rhs: Vec<KElement> = vector(&r, &target).iter().map(|c| -c).collect();
        let Some(sol) = solve(&matrix(&cols, &target), &rhs, cols.len()) else {
            return Ok(Linearization::Obstructed { order: n });
        };
        let k = basis.len();
        hx = &hx + &combination(&basis, &sol[..k]);
        hy = &hy + &combination(&basis, &sol[k..]);
    }
    Ok(Linearization::Linearizable {
        h: (hx, hy),
        certified_order: jet_order,
    })
}

/// Result of the first-integral computation for a resonant saddle.
#[derive(Debug, Clone, PartialEq)]
pub enum FormalFirstIntegral {
    /// `H` with `X(H) = O(degree + 1)`.
    Found { h: SparsePoly, degree: u32 },
    /// No solution at this order of the vector field.
    Obstructed { order: u32 },
    /// The linear part has no polynomial first integral of degree `n0`.
    NoLeadingTerm,
}

/// Solves `X(H) = 0` degree by degree, starting from the degree-`n0`
/// first integral of the linear part (`n0 = p + q` for the ratio `-p/q`).
///
/// A failure while solving for `H_n` corresponds to a resonant normal-form
/// term of the vector field of degree `n - n0 + 1`, which is reported. The
/// search covers vector-field degrees up to `jet_order`.
pub fn formal_first_integral(w: &OneFormGerm, n0: u32, jet_order: u32) -> FormalFirstIntegral {
    let (p, q) = w.vector_field();
    let (p1, q1) = (p.homogeneous_part(1), q.homogeneous_part(1));
    let lin = |m: &SparsePoly| &(&p1 * &m.dx()) + &(&q1 * &m.dy());
    let basis = homogeneous_monomials(n0);
    let cols: Vec<SparsePoly> = basis
        .iter()
        .map(|&(a, b)| lin(&SparsePoly::monomial(a, b, KElement::one())))
        .collect();
    let ker = kernel(&matrix(&cols, &basis), basis.len());
    let Some(k0) = ker.first() else {
        return FormalFirstIntegral::NoLeadingTerm;
    };
    let mut h = combination(&basis, k0);
    let top = n0 + jet_order.max(1) - 1;
    for n in n0 + 1..=top {
        let hx = h.dx().truncate(n);
        let hy = h.dy().truncate(n);
        let xh = &(&p.truncate(n) * &hx) + &(&q.truncate(n) * &hy);
        let r = xh.homogeneous_part(n);
        if r.is_zero() {
            continue;
        }
        let basis = homogeneous_monomials(n);
        let cols: Vec<SparsePoly> = basis
            .iter()
            .map(|&(a, b)| lin(&SparsePoly::monomial(a, b, KElement::one())))
            .collect();
        let rhs: Vec<KElement> = vector(&r, &basis).iter().map(|c| -c).collect();
        match solve(&matrix(&cols, &basis), &rhs, basis.len()) {
            Some(sol) => h = &h + &combination(&basis, &sol),
            None => {
                return FormalFirstIntegral::Obstructed {
                    order: n - n0 + 1,
                }
            }
        }
    }
    FormalFirstIntegral::Found { h, degree: top }
}
