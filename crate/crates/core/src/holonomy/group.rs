//! Finitely generated subgroups of `Diff(C, 0)` at jet level.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::class::{classify_germ, compose_lenient, GermClass};
use super::germ::{lcm, FormalGerm};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    /// Zero-based generator index.
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inverted(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// A product of letters; `[a, b]` denotes `a o b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letter(generator: usize) -> Word {
        Word(vec![Letter {
            generator,
            inverse: false,
        }])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(&other.0);
        Word(v)
    }

    /// `u w u^{-1} w^{-1}`.
    pub fn commutator(u: &Word, w: &Word) -> Word {
        u.concat(w).concat(&u.inverse()).concat(&w.inverse())
    }

    /// Evaluates the word on the generators.
    pub fn evaluate(&self, generators: &[FormalGerm]) -> Option<FormalGerm> {
        let n = generators.first()?.order();
        let mut acc = FormalGerm::from_exact(&identity_coeffs(n)).ok()?;
        for l in &self.0 {
            let g = &generators[l.generator];
            let g = if l.inverse { g.invert() } else { g.clone() };
            acc = compose_lenient(&acc, &g)?;
        }
        Some(acc)
    }
}

fn identity_coeffs(n: usize) -> Vec<crate::exactalg::KElement> {
    let mut v = vec![crate::exactalg::KElement::zero(); n];
    v[0] = crate::exactalg::KElement::one();
    v
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}", l.generator + 1)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    FlatGenerator,
    FlatElement,
    FlatCommutator,
    Hyperbolic,
    ResonantNonlinearizable,
}

/// An element of the group that rules out L-stability, with its word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub word: Word,
    pub word_text: String,
    pub class: GermClass,
    /// Leading non-linear coefficient of a flat witness, or the multiplier.
    pub leading: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupClass {
    FiniteCyclic { order: u64 },
    CircleType,
    NotLStable { witness: Witness },
    Undetermined { reasons: Vec<String> },
}

impl GroupClass {
    pub fn label(&self) -> String {
        match self {
            GroupClass::FiniteCyclic { order } => format!("FiniteCyclic({order})"),
            GroupClass::CircleType => "CircleType".into(),
            GroupClass::NotLStable { witness } => format!("NotLStable({:?}: {})", witness.kind, witness.word),
            GroupClass::Undetermined { .. } => "Undetermined".into(),
        }
    }
}

/// [`GroupClass`] together with search statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAnalysis {
    pub class: GroupClass,
    pub generator_classes: Vec<GermClass>,
    pub words_tested: usize,
    pub commutators_tested: usize,
    pub budget_exhausted: bool,
    pub jet_order: usize,
}

fn witness(kind: WitnessKind, word: Word, germ: &FormalGerm, class: GermClass) -> Witness {
    let c = match class {
        GermClass::Flat { k } => germ.coefficient(k),
        _ => germ.multiplier().to_complex(),
    };
    Witness {
        kind,
        word_text: word.to_string(),
        word,
        class,
        leading: [c.re, c.im],
    }
}

fn element_witness(word: &Word, germ: &FormalGerm, class: GermClass, commutator: bool) -> Option<Witness> {
    let kind = match class {
        GermClass::Flat { .. } if commutator => WitnessKind::FlatCommutator,
        GermClass::Flat { .. } => WitnessKind::FlatElement,
        GermClass::Hyperbolic => WitnessKind::Hyperbolic,
        GermClass::ResonantNonlinearizable { .. } => WitnessKind::ResonantNonlinearizable,
        _ => return None,
    };
    Some(witness(kind, word.clone(), germ, class))
}

/// Classifies the group generated by `generators`; equivalent to
/// `analyze_group(..).class`.
pub fn classify_group(generators: &[FormalGerm], jet_order: usize, word_budget: usize) -> GroupClass {
    analyze_group(generators, jet_order, word_budget).class
}

/// Witness search over generators, then words in breadth-first order and
/// their commutators with the generators, testing at most `word_budget`
/// elements beyond the generators.
pub fn analyze_group(generators: &[FormalGerm], jet_order: usize, word_budget: usize) -> GroupAnalysis {
    let n = generators
        .iter()
        .map(FormalGerm::order)
        .min()
        .unwrap_or(1)
        .min(jet_order.max(1));
    let gens: Vec<FormalGerm> = generators.iter().map(|g| g.truncate(n)).collect();
    let classes: Vec<GermClass> = gens.iter().map(|g| classify_germ(g, n)).collect();
    let mut out = GroupAnalysis {
        class: GroupClass::Undetermined { reasons: vec![] },
        generator_classes: classes.clone(),
        words_tested: 0,
        commutators_tested: 0,
        budget_exhausted: false,
        jet_order: n,
    };
    if gens.is_empty() {
        out.class = GroupClass::Undetermined {
            reasons: vec!["no generators".into()],
        };
        return out;
    }

    let priority = [
        |c: &GermClass| matches!(c, GermClass::Hyperbolic),
        |c: &GermClass| matches!(c, GermClass::Flat { .. }),
        |c: &GermClass| matches!(c, GermClass::ResonantNonlinearizable { .. }),
    ];
    for test in priority {
        if let Some(i) = classes.iter().position(test) {
            let kind = match classes[i] {
                GermClass::Hyperbolic => WitnessKind::Hyperbolic,
                GermClass::Flat { .. } => WitnessKind::FlatGenerator,
                _ => WitnessKind::ResonantNonlinearizable,
            };
            out.class = GroupClass::NotLStable {
                witness: witness(kind, Word::letter(i), &gens[i], classes[i]),
            };
            return out;
        }
    }

    let mut reasons = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        if *c == GermClass::IrrationalUndetermined {
            reasons.push(format!(
                "g{}: irrational rotation with non-linear jet; analytic linearizability not decided",
                i + 1
            ));
        }
    }

    let letters: Vec<(Letter, FormalGerm)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| {
            [
                (Letter { generator: i, inverse: false }, g.clone()),
                (Letter { generator: i, inverse: true }, g.invert()),
            ]
        })
        .collect();
    let mut queue: VecDeque<(Word, FormalGerm)> = letters
        .iter()
        .filter(|(l, _)| !l.inverse)
        .map(|(l, g)| (Word(vec![*l]), g.clone()))
        .collect();
    let mut tested = 0usize;
    let mut composition_failed = false;
    'search: while let Some((word, germ)) = queue.pop_front() {
        if word.len() > 1 {
            if tested >= word_budget {
                out.budget_exhausted = true;
                break;
            }
            tested += 1;
            out.words_tested += 1;
            let class = classify_germ(&germ, n);
            if let Some(w) = element_witness(&word, &germ, class, false) {
                out.class = GroupClass::NotLStable { witness: w };
                return out;
            }
        }
        for (i, g) in gens.iter().enumerate() {
            if tested >= word_budget {
                out.budget_exhausted = true;
                break 'search;
            }
            if word == Word::letter(i) {
                continue;
            }
            let Some(c) = super::germ::commutator(&germ, g)
                .ok()
                .or_else(|| super::germ::commutator(&germ.to_numeric(), &g.to_numeric()).ok())
            else {
                composition_failed = true;
                continue;
            };
            tested += 1;
            out.commutators_tested += 1;
            let cw = Word::commutator(&word, &Word::letter(i));
            let class = classify_germ(&c, n);
            if let Some(w) = element_witness(&cw, &c, class, true) {
                out.class = GroupClass::NotLStable { witness: w };
                return out;
            }
        }
        for (l, g) in &letters {
            if word.0.last() == Some(&l.inverted()) {
                continue;
            }
            match compose_lenient(&germ, g) {
                Some(h) => queue.push_back((word.concat(&Word(vec![*l])), h)),
                None => composition_failed = true,
            }
        }
    }
    if composition_failed {
        reasons.push("some compositions were not computable".into());
    }
    if !reasons.is_empty() {
        out.class = GroupClass::Undetermined { reasons };
        return out;
    }
    let orders: Option<Vec<u64>> = gens.iter().map(|g| g.multiplier().root_of_unity_order()).collect();
    out.class = match orders {
        Some(orders) => GroupClass::FiniteCyclic {
            order: orders.into_iter().fold(1, lcm),
        },
        None if classes.contains(&GermClass::IrrationalRotationLinearizable) => GroupClass::CircleType,
        None => GroupClass::Undetermined {
            reasons: vec!["no irrational rotation among the generators".into()],
        },
    };
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Field, KElement};
    use crate::holonomy::germ::Multiplier;

    fn rotation(r: KElement, field: &Field, n: usize) -> FormalGerm {
        FormalGerm::linear(Multiplier::exp_2pi_i(r, field), n).unwrap()
    }

    #[test]
    fn word_algebra() {
        let a = Word::letter(0);
        let b = Word::letter(1);
        let c = Word::commutator(&a, &b);
        assert_eq!(c.to_string(), "g1 g2 g1^-1 g2^-1");
        assert_eq!(c.inverse().to_string(), "g2 g1 g2^-1 g1^-1");
    }

    #[test]
    fn lemma_examples() {
        let g = Field::gaussian();
        let flat = FormalGerm::tangent_to_identity(2, 6).unwrap();
        let GroupClass::NotLStable { witness } = classify_group(&[flat], 6, 200) else {
            panic!()
        };
        assert_eq!(witness.kind, WitnessKind::FlatGenerator);
        let rho = rotation(KElement::from_frac(1, 3), &g, 6);
        assert_eq!(classify_group(std::slice::from_ref(&rho), 6, 200), GroupClass::FiniteCyclic { order: 3 });
        let quarter = rotation(KElement::from_frac(1, 4), &g, 6);
        assert_eq!(classify_group(&[rho, quarter], 6, 200), GroupClass::FiniteCyclic { order: 12 });
        let f2 = Field::new(2).unwrap();
        let irr = rotation(f2.sqrt_d(), &f2, 6);
        assert_eq!(classify_group(&[irr], 6, 200), GroupClass::CircleType);
    }

    #[test]
    fn non_commuting_periodic_germs() {
        // -z and the conjugate of -z by z + z^2 generate a group with a flat commutator.
        let minus = FormalGerm::from_exact(&[KElement::from_int(-1), KElement::zero(), KElement::zero()]).unwrap();
        let h = FormalGerm::from_exact(&[KElement::one(), KElement::one(), KElement::zero()]).unwrap();
        let conj = super::super::germ::germ_compose(&h.invert(), &super::super::germ::germ_compose(&minus, &h).unwrap()).unwrap();
        let a = analyze_group(&[minus, conj], 3, 50);
        let GroupClass::NotLStable { witness } = a.class else {
            panic!("{:?}", a.class)
        };
        assert_eq!(witness.class, GermClass::Flat { k: 2 });
    }

    #[test]
    fn budget_is_respected() {
        let g = Field::gaussian();
        let rho = rotation(KElement::from_frac(1, 5), &g, 4);
        let a = analyze_group(&[rho], 4, 7);
        assert!(a.words_tested + a.commutators_tested <= 7);
        assert!(a.budget_exhausted);
        assert_eq!(a.class, GroupClass::FiniteCyclic { order: 5 });
    }
}
