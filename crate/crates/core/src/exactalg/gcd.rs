//! Bivariate polynomial gcd over `Q(i, sqrt d)` by primitive pseudo-remainder
//! sequences in `K[x][y]`.

use super::poly::SparsePoly;
use super::upoly::UniPoly;

type PolyInY = Vec<UniPoly>;

fn trim(mut p: PolyInY) -> PolyInY {
    while p.last().is_some_and(UniPoly::is_zero) {
        p.pop();
    }
    p
}

fn content(p: &PolyInY) -> UniPoly {
    p.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
}

fn primitive_part(p: &PolyInY) -> PolyInY {
    let c = content(p);
    if c.is_zero() {
        return Vec::new();
    }
    trim(p.iter().map(|a| a.div_exact(&c).expect("content divides")).collect())
}

fn prem(a: &PolyInY, b: &PolyInY) -> PolyInY {
    let lc = b.last().expect("nonzero divisor").clone();
    let db = b.len() - 1;
    let mut r = a.clone();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        let mut next: PolyInY = r.iter().map(|c| c.mul(&lc)).collect();
        for (j, bj) in b.iter().enumerate() {
            next[j + shift] = next[j + shift].sub(&bj.mul(&lr));
        }
        r = trim(next);
    }
    r
}

/// Normalized gcd of two bivariate polynomials (first graded coefficient 1).
pub fn poly_gcd(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let ay = trim(a.as_poly_in_y());
    let by = trim(b.as_poly_in_y());
    let g = content(&ay).gcd(&content(&by));
    let (mut p, mut q) = (primitive_part(&ay), primitive_part(&by));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = prem(&p, &q);
        p = q;
        q = primitive_part(&r);
    }
    let pp: PolyInY = if p.len() <= 1 { vec![UniPoly::one()] } else { p };
    let scaled: PolyInY = pp.iter().map(|c| c.mul(&g)).collect();
    SparsePoly::from_poly_in_y(&scaled).normalized()
}
