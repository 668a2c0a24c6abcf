//! Classification of single germs.

use serde::{Deserialize, Serialize};

use super::germ::{germ_compose, series_compose, Coeff, FormalGerm};
use num_complex::Complex64;

/// Dynamical type of a germ, read off from its truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GermClass {
    Identity,
    /// `z + a_k z^k + ...` with `a_k != 0`.
    Flat { k: usize },
    Periodic { q: u64 },
    ResonantNonlinearizable { order: usize },
    Hyperbolic,
    IrrationalRotationLinearizable,
    /// Non-linear jet with an irrational rotation multiplier; convergence of
    /// the formal linearization is not decided.
    IrrationalUndetermined,
}

impl GermClass {
    pub fn is_obstruction(self) -> bool {
        matches!(
            self,
            GermClass::Flat { .. } | GermClass::Hyperbolic | GermClass::ResonantNonlinearizable { .. }
        )
    }
}

/// First order `n` at which `h o f = mu h` has no solution, through `n`.
fn linearization_obstruction<C: Coeff>(f: &[C], equal: impl Fn(&C, &C) -> bool) -> Option<usize> {
    let n = f.len() - 1;
    let mu = f[1].clone();
    let mut h = vec![C::zero(); n + 1];
    h[1] = C::one();
    let mut mu_pow = mu.clone();
    for m in 2..=n {
        mu_pow = mu_pow.mul(&mu);
        let r = series_compose(&h[..=m], &f[..=m])[m].clone();
        let gap = mu_pow.sub(&mu);
        if equal(&mu_pow, &mu) {
            if !r.negligible() {
                return Some(m);
            }
        } else {
            h[m] = C::zero().sub(&r.div(&gap));
        }
    }
    None
}

fn obstruction(f: &FormalGerm) -> Option<usize> {
    match f.exact_series() {
        Some(s) => linearization_obstruction(&s, |a, b| a == b),
        None => linearization_obstruction(&f.numeric_series(), |a: &Complex64, b| (a - b).norm() < 1e-9),
    }
}

/// Classifies `f` through order `min(jet_order, N)`.
pub fn classify_germ(f: &FormalGerm, jet_order: usize) -> GermClass {
    let f = f.truncate(jet_order.max(1));
    let mu = f.multiplier();
    if !mu.has_unit_modulus() {
        return GermClass::Hyperbolic;
    }
    if mu.is_one() {
        return match f.first_nonlinear() {
            Some(k) => GermClass::Flat { k },
            None => GermClass::Identity,
        };
    }
    let Some(q) = mu.root_of_unity_order() else {
        return if f.is_linear() {
            GermClass::IrrationalRotationLinearizable
        } else {
            GermClass::IrrationalUndetermined
        };
    };
    if f.is_linear() {
        return GermClass::Periodic { q };
    }
    let g = if f.exact_series().is_some() { f.clone() } else { f.to_numeric() };
    let periodic = match g.iterate(q) {
        Ok(fq) => fq.is_identity(),
        Err(_) => g.to_numeric().iterate(q).map(|fq| fq.is_identity()).unwrap_or(false),
    };
    if periodic {
        return GermClass::Periodic { q };
    }
    match obstruction(&g) {
        Some(order) => GermClass::ResonantNonlinearizable { order },
        // Not periodic through N, yet solvable through N.
        None => GermClass::ResonantNonlinearizable { order: f.order() },
    }
}

/// Whether `f^q` is the identity through the germ's order.
pub fn is_periodic(f: &FormalGerm, q: u64) -> bool {
    f.iterate(q).map(|g| g.is_identity()).unwrap_or(false)
}

/// `f o g`, falling back to floating point when exact composition is not available.
pub(crate) fn compose_lenient(f: &FormalGerm, g: &FormalGerm) -> Option<FormalGerm> {
    germ_compose(f, g)
        .or_else(|_| germ_compose(&f.to_numeric(), &g.to_numeric()))
        .ok()
}
