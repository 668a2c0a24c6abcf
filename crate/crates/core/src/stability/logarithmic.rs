//! Logarithmic models `sum lambda_j df_j / f_j` and first integrals built from them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::linalg::kernel;
use crate::exactalg::{KElement, Monomial, OneFormGerm, SparsePoly};

/// Residues `lambda_j` (with `lambda_1 = 1`) on the branches `f_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogarithmicModel {
    pub branches: Vec<SparsePoly>,
    pub residues: Vec<KElement>,
    /// All `lambda_j / lambda_1` are real.
    pub real: bool,
    /// All `lambda_j / lambda_1` are rational.
    pub rational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LogarithmicOutcome {
    Model(LogarithmicModel),
    NoKernel,
}

/// `(prod_{k != j} f_k) (df_j ^ w)` for each `j`.
fn columns(w: &OneFormGerm, fs: &[SparsePoly]) -> Vec<SparsePoly> {
    (0..fs.len())
        .map(|j| {
            let dfj = OneFormGerm::differential(&fs[j]);
            let others = fs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .fold(SparsePoly::one(), |acc, (_, f)| &acc * f);
            &others * &dfj.wedge(w)
        })
        .collect()
}

/// `(sum_j lambda_j (prod_{k != j} f_k) df_j) ^ w`.
pub fn logarithmic_defect(w: &OneFormGerm, fs: &[SparsePoly], residues: &[KElement]) -> SparsePoly {
    columns(w, fs)
        .iter()
        .zip(residues)
        .fold(SparsePoly::zero(), |acc, (c, l)| &acc + &c.scale(l))
}

/// Solves for residues making `sum lambda_j df_j / f_j` define the same
/// foliation as `w`.
pub fn recognize_logarithmic(w: &OneFormGerm, branches: &[SparsePoly]) -> Result<LogarithmicOutcome> {
    if branches.is_empty() {
        return Ok(LogarithmicOutcome::NoKernel);
    }
    let cols = columns(w, branches);
    let mut monos: Vec<Monomial> = cols.iter().flat_map(|c| c.terms().map(|(m, _)| *m)).collect();
    monos.sort_unstable();
    monos.dedup();
    let rows: Vec<Vec<KElement>> = monos
        .iter()
        .map(|&(a, b)| cols.iter().map(|c| c.coeff(a, b)).collect())
        .collect();
    let ker = kernel(&rows, branches.len());
    let v = match ker.len() {
        0 => return Ok(LogarithmicOutcome::NoKernel),
        1 => &ker[0],
        dim => return Err(Error::AmbiguousKernel { dim }),
    };
    let pivot = v.iter().find(|c| !c.is_zero()).expect("kernel vector is nonzero").inv();
    let residues: Vec<KElement> = v.iter().map(|c| c * &pivot).collect();
    Ok(LogarithmicOutcome::Model(LogarithmicModel {
        branches: branches.to_vec(),
        real: residues.iter().all(KElement::is_real),
        rational: residues.iter().all(KElement::is_rational),
        residues,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub enum FirstIntegral {
    /// `F = prod f_j^{n_j}` with `dF ^ w = 0`.
    Found { f: SparsePoly, exponents: Vec<u32> },
    NotApplicable { note: String },
}

/// Builds `F = prod f_j^{n_j}` from rational residues of one sign.
pub fn first_integral_search(w: &OneFormGerm, model: &LogarithmicModel) -> FirstIntegral {
    if !model.rational {
        return FirstIntegral::NotApplicable {
            note: "residue ratios are not all rational".into(),
        };
    }
    let rs: Vec<_> = model
        .residues
        .iter()
        .map(|r| r.as_rational().expect("rational residue").clone())
        .collect();
    let positive = rs.iter().any(|r| r.is_positive());
    let negative = rs.iter().any(|r| r.is_negative());
    if positive && negative {
        return FirstIntegral::NotApplicable {
            note: "residues of mixed sign: the first integral is meromorphic".into(),
        };
    }
    let den = rs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rs.iter().map(|r| (r * &den).to_integer().abs()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    let exps: Option<Vec<u32>> = ints.iter().map(|n| u32::try_from(n / &g).ok()).collect();
    let Some(exps) = exps else {
        return FirstIntegral::NotApplicable {
            note: "exponents too large".into(),
        };
    };
    let f = model
        .branches
        .iter()
        .zip(&exps)
        .fold(SparsePoly::one(), |acc, (b, &e)| &acc * &b.pow(e));
    if OneFormGerm::differential(&f).wedge(w).is_zero() {
        FirstIntegral::Found { f, exponents: exps }
    } else {
        FirstIntegral::NotApplicable {
            note: "product of branches is not a first integral".into(),
        }
    }
}
