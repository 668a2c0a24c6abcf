//! Numeric pseudo-orbits of a finitely generated pseudo-group.

use std::collections::{HashSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::germ::FormalGerm;
use super::group::{GroupClass, Letter, Word};
use crate::error::{Error, Result};

/// A germ with the radius inside which its truncation is trusted. The same
/// radius bounds where the inverse is applied.
#[derive(Debug, Clone)]
pub struct NumericGenerator {
    pub germ: FormalGerm,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitParams {
    pub seed: Complex64,
    pub u_radius: f64,
    pub v_radius: f64,
    /// Budget of node expansions.
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OrbitOutcome {
    /// The explored pseudo-orbit stayed in the U-disc.
    Stays {
        expansions: usize,
        /// `true` when the step budget ran out before the orbit closed up.
        budget_exhausted: bool,
        visited: usize,
        /// `max ||z_n| - |z_0||` over visited points.
        max_modulus_drift: f64,
    },
    /// `word` lists the letters in order of application; `step` is its length.
    Escapes {
        step: usize,
        word: Word,
        word_text: String,
        point: [f64; 2],
    },
}

/// Points closer than this are identified.
const DEDUP_SCALE: f64 = 1e12;

fn key(z: Complex64) -> (i64, i64) {
    ((z.re * DEDUP_SCALE).round() as i64, (z.im * DEDUP_SCALE).round() as i64)
}

/// Breadth-first exploration of the orbit of `seed` under the generators and
/// their inverses, each applied only inside its declared radius.
pub fn simulate_pseudo_orbit(generators: &[NumericGenerator], params: &OrbitParams) -> Result<OrbitOutcome> {
    let OrbitParams {
        seed,
        u_radius,
        v_radius,
        steps,
    } = *params;
    if !(u_radius > 0.0 && v_radius > 0.0) {
        return Err(Error::InvalidParameters("radii must be positive".into()));
    }
    if !(seed.norm() < v_radius && v_radius < u_radius) {
        return Err(Error::InvalidParameters("need |seed| < v_radius < u_radius".into()));
    }
    if generators.iter().any(|g| !(g.radius > 0.0)) {
        return Err(Error::InvalidParameters("generator radii must be positive".into()));
    }
    let maps: Vec<(Letter, FormalGerm, f64)> = generators
        .iter()
        .enumerate()
        .flat_map(|(i, g)| {
            let num = g.germ.to_numeric();
            [
                (Letter { generator: i, inverse: false }, num.clone(), g.radius),
                (Letter { generator: i, inverse: true }, num.invert(), g.radius),
            ]
        })
        .collect();
    let r0 = seed.norm();
    let mut seen = HashSet::from([key(seed)]);
    let mut queue = VecDeque::from([(seed, Word::default())]);
    let mut expansions = 0usize;
    let mut drift = 0.0f64;
    while let Some((z, word)) = queue.pop_front() {
        if expansions >= steps {
            return Ok(OrbitOutcome::Stays {
                expansions,
                budget_exhausted: true,
                visited: seen.len(),
                max_modulus_drift: drift,
            });
        }
        expansions += 1;
        for (letter, germ, radius) in &maps {
            if z.norm() >= *radius {
                continue;
            }
            let w = germ.eval(z);
            let next = word.concat(&Word(vec![*letter]));
            if w.norm() >= u_radius {
                return Ok(OrbitOutcome::Escapes {
                    step: next.len(),
                    word_text: next.to_string(),
                    word: next,
                    point: [w.re, w.im],
                });
            }
            if seen.insert(key(w)) {
                drift = drift.max((w.norm() - r0).abs());
                queue.push_back((w, next));
            }
        }
    }
    Ok(OrbitOutcome::Stays {
        expansions,
        budget_exhausted: false,
        visited: seen.len(),
        max_modulus_drift: drift,
    })
}

/// Dynamical evidence about a leaf near the divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitEvidence {
    ClosedOffOrigin,
    NonRecurrent,
    #[default]
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedOrbitRefinement {
    pub class: GroupClass,
    /// A circle-type group with a closed or non-recurrent orbit: under
    /// L-stability the group would have to be finite.
    pub contradiction: bool,
}

pub fn closed_orbit_criterion(class: &GroupClass, evidence: OrbitEvidence) -> ClosedOrbitRefinement {
    let contradiction = matches!(class, GroupClass::CircleType) && evidence != OrbitEvidence::None;
    ClosedOrbitRefinement {
        class: class.clone(),
        contradiction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Field, KElement};
    use crate::holonomy::germ::Multiplier;

    fn params(seed: f64, steps: usize) -> OrbitParams {
        OrbitParams {
            seed: Complex64::new(seed, 0.0),
            u_radius: 0.1,
            v_radius: 0.08,
            steps,
        }
    }

    #[test]
    fn geometric_growth_escapes() {
        let g = NumericGenerator {
            germ: FormalGerm::from_numeric(&[Complex64::new(1.1, 0.0)]).unwrap(),
            radius: 1.0,
        };
        let out = simulate_pseudo_orbit(&[g], &params(0.05, 1000)).unwrap();
        let OrbitOutcome::Escapes { step, word_text, .. } = out else {
            panic!("{out:?}")
        };
        assert_eq!(step, 8);
        assert_eq!(word_text, "g1 g1 g1 g1 g1 g1 g1 g1");
    }

    #[test]
    fn rotation_stays() {
        let f2 = Field::new(2).unwrap();
        let m = Multiplier::exp_2pi_i(f2.sqrt_d(), &f2);
        let g = NumericGenerator {
            germ: FormalGerm::linear(m, 1).unwrap(),
            radius: 1.0,
        };
        let out = simulate_pseudo_orbit(&[g], &params(0.05, 10_000)).unwrap();
        let OrbitOutcome::Stays {
            expansions,
            budget_exhausted,
            max_modulus_drift,
            ..
        } = out
        else {
            panic!("{out:?}")
        };
        assert_eq!(expansions, 10_000);
        assert!(budget_exhausted);
        assert!(max_modulus_drift < 1e-10);
    }

    #[test]
    fn finite_orbit_closes() {
        let g = NumericGenerator {
            germ: FormalGerm::linear(Multiplier::Exact(KElement::i()), 1).unwrap(),
            radius: 1.0,
        };
        let out = simulate_pseudo_orbit(&[g], &params(0.05, 100)).unwrap();
        assert!(matches!(
            out,
            OrbitOutcome::Stays {
                budget_exhausted: false,
                visited: 4,
                ..
            }
        ));
    }

    #[test]
    fn radius_blocks_application() {
        let g = NumericGenerator {
            germ: FormalGerm::from_numeric(&[Complex64::new(2.0, 0.0)]).unwrap(),
            radius: 0.01,
        };
        let out = simulate_pseudo_orbit(&[g], &params(0.05, 10)).unwrap();
        assert!(matches!(out, OrbitOutcome::Stays { expansions: 1, .. }));
    }

    #[test]
    fn invalid_discs() {
        let p = OrbitParams {
            seed: Complex64::new(0.2, 0.0),
            u_radius: 0.1,
            v_radius: 0.05,
            steps: 1,
        };
        assert!(simulate_pseudo_orbit(&[], &p).is_err());
    }

    #[test]
    fn closed_orbit_refinement() {
        let r = closed_orbit_criterion(&GroupClass::CircleType, OrbitEvidence::ClosedOffOrigin);
        assert!(r.contradiction);
        assert!(!closed_orbit_criterion(&GroupClass::CircleType, OrbitEvidence::None).contradiction);
        let f = GroupClass::FiniteCyclic { order: 3 };
        let r = closed_orbit_criterion(&f, OrbitEvidence::NonRecurrent);
        assert_eq!(r.class, f);
        assert!(!r.contradiction);
    }
}
