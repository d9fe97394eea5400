//! Components forced into the base locus of `|D|`: the quadric through each
//! triple of lines whose multiplicities exceed the degree, and the two
//! transversal lines of each such quadruple.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::divisor::{quadric_class, triples, DivisorClass};
use crate::effective::MAX_LINES;
use crate::error::{Error, Result};
use crate::kernel::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricComponent {
    pub triple: [usize; 3],
    #[serde(with = "rational::as_string")]
    pub multiplicity: Rational,
}

/// The two transversals of a quadruple, which share one multiplicity bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalPair {
    pub quadruple: [usize; 4],
    #[serde(with = "rational::as_string")]
    pub multiplicity: Rational,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseLocusReport {
    pub quadrics: Vec<QuadricComponent>,
    pub transversal_pairs: Vec<TransversalPair>,
    pub residual: DivisorClass,
}

impl BaseLocusReport {
    pub fn is_empty(&self) -> bool {
        self.quadrics.is_empty() && self.transversal_pairs.is_empty()
    }
}

fn check_linear_system(class: &DivisorClass) -> Result<()> {
    if class.s() > MAX_LINES {
        return Err(Error::Unsupported(format!(
            "base loci are reported for s <= {MAX_LINES}"
        )));
    }
    if class.d().is_negative() || class.mults().iter().any(Signed::is_negative) {
        return Err(Error::Precondition(format!(
            "{class} has a negative entry and is not a linear system of surfaces"
        )));
    }
    Ok(())
}

fn excess(class: &DivisorClass, idx: &[usize]) -> Rational {
    idx.iter().map(|&i| &class.mults()[i - 1]).sum::<Rational>() - class.d()
}

fn quadruples(s: usize) -> impl Iterator<Item = [usize; 4]> {
    triples(s).flat_map(move |[i, j, k]| (k + 1..=s).map(move |l| [i, j, k, l]))
}

pub fn base_locus(class: &DivisorClass) -> Result<BaseLocusReport> {
    check_linear_system(class)?;
    let s = class.s();
    let quadrics: Vec<QuadricComponent> = triples(s)
        .filter_map(|t| {
            let k = excess(class, &t);
            k.is_positive().then_some(QuadricComponent {
                triple: t,
                multiplicity: k,
            })
        })
        .collect();
    let transversal_pairs = quadruples(s)
        .filter_map(|q| {
            let k = excess(class, &q);
            k.is_positive().then_some(TransversalPair {
                quadruple: q,
                multiplicity: k,
                count: 2,
            })
        })
        .collect();
    let residual = subtract_quadrics(class, &quadrics)?;
    Ok(BaseLocusReport {
        quadrics,
        transversal_pairs,
        residual,
    })
}

fn subtract_quadrics(class: &DivisorClass, quadrics: &[QuadricComponent]) -> Result<DivisorClass> {
    let mut residual = class.clone();
    for q in quadrics {
        let part = quadric_class(class.s(), q.triple)?.scale(&q.multiplicity);
        residual = residual.checked_sub(&part)?;
    }
    Ok(residual)
}

/// `D` minus every positive-excess quadric at its full multiplicity, in one
/// simultaneous round. Transversals are curves and are never subtracted.
pub fn divisorial_residual(class: &DivisorClass) -> Result<DivisorClass> {
    Ok(base_locus(class)?.residual)
}

/// Whether one round of subtraction leaves no triple with positive excess.
pub fn residual_is_clear(class: &DivisorClass) -> Result<bool> {
    let residual = divisorial_residual(class)?;
    Ok(triples(class.s()).all(|t| !excess(&residual, &t).is_positive()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::is_effective;
    use crate::kernel::rat;
    use proptest::prelude::*;

    fn cls(d: i64, m: &[i64]) -> DivisorClass {
        DivisorClass::from_ints(d, m)
    }

    #[test]
    fn single_quadric() {
        let r = base_locus(&cls(2, &[1, 1, 1])).unwrap();
        assert_eq!(
            r.quadrics,
            vec![QuadricComponent { triple: [1, 2, 3], multiplicity: rat(1) }]
        );
        assert!(r.transversal_pairs.is_empty());
        assert_eq!(r.residual, cls(0, &[0, 0, 0]));
    }

    #[test]
    fn transversal_pair_only() {
        let r = base_locus(&cls(3, &[1, 1, 1, 1])).unwrap();
        assert!(r.quadrics.is_empty());
        assert_eq!(
            r.transversal_pairs,
            vec![TransversalPair { quadruple: [1, 2, 3, 4], multiplicity: rat(1), count: 2 }]
        );
        assert_eq!(r.residual, cls(3, &[1, 1, 1, 1]));
    }

    #[test]
    fn empty_and_trivial_reports() {
        assert!(base_locus(&cls(5, &[1, 1, 1])).unwrap().is_empty());
        let d = cls(1, &[3, 2]);
        assert_eq!(divisorial_residual(&d).unwrap(), d);
    }

    #[test]
    fn residual_after_one_subtraction() {
        let r = base_locus(&cls(3, &[2, 1, 1, 0])).unwrap();
        assert_eq!(r.quadrics.len(), 1);
        assert_eq!(r.quadrics[0].multiplicity, rat(1));
        assert_eq!(r.residual, cls(1, &[1, 0, 0, 0]));
    }

    #[test]
    fn rejects_non_linear_systems() {
        assert!(matches!(base_locus(&cls(-1, &[0, 0])), Err(Error::Precondition(_))));
        assert!(matches!(base_locus(&cls(2, &[1, -1])), Err(Error::Precondition(_))));
        assert!(matches!(base_locus(&cls(2, &[0; 6])), Err(Error::Unsupported(_))));
    }

    #[test]
    fn json_shape() {
        let r = base_locus(&cls(3, &[2, 1, 1, 1])).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.starts_with(r#"{"quadrics":[{"triple":[1,2,3],"multiplicity":"1"}"#), "{text}");
        assert!(text.contains(r#"{"quadruple":[1,2,3,4],"multiplicity":"2","count":2}"#));
        let back: BaseLocusReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn excess_of_overlapping_triple_is_unchanged_on_four_lines() {
        // subtracting k·Q_t lowers d by 2k and the three mults of t by k
        for d in 0..=6 {
            for code in 0..4usize.pow(4) {
                let m: Vec<i64> = (0..4).map(|b| ((code >> (2 * b)) & 3) as i64).collect();
                let c = cls(d, &m);
                for t in triples(4) {
                    let k = excess(&c, &t);
                    if !k.is_positive() {
                        continue;
                    }
                    let after = c.checked_sub(&quadric_class(4, t).unwrap().scale(&k)).unwrap();
                    for u in triples(4) {
                        let shared = u.iter().filter(|i| t.contains(i)).count();
                        if shared == 2 {
                            assert_eq!(excess(&after, &u), excess(&c, &u), "{c} {t:?} {u:?}");
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn multiplicities_track_excess(d in 0i64..8, m in prop::collection::vec(0i64..6, 0..=5)) {
            let c = cls(d, &m);
            let r = base_locus(&c).unwrap();
            for t in triples(m.len()) {
                let k = excess(&c, &t);
                let found = r.quadrics.iter().find(|q| q.triple == t);
                prop_assert_eq!(found.is_some(), k.is_positive());
                if let Some(q) = found {
                    prop_assert_eq!(&q.multiplicity, &k);
                }
            }
            for q in quadruples(m.len()) {
                let k = excess(&c, &q);
                prop_assert_eq!(r.transversal_pairs.iter().any(|p| p.quadruple == q), k.is_positive());
            }
        }

        #[test]
        fn residual_preserves_effectivity(d in 0i64..10, m in prop::collection::vec(0i64..6, 0..=4)) {
            let c = cls(d, &m);
            prop_assume!(residual_is_clear(&c).unwrap());
            let residual = divisorial_residual(&c).unwrap();
            prop_assert_eq!(
                is_effective(&c).unwrap().effective,
                is_effective(&residual).unwrap().effective
            );
        }
    }
}
