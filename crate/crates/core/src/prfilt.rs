//! Characters of `nabla^(p,r)(lambda) = L(lambda_0) (x) nabla(lambda_1)^[r]` and
//! triangular decomposition in that basis.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::chars::{
    combo_to_multiset, freudenthal, frobenius_twist, pick_maximal, tensor, WeightMultiset,
};
use crate::error::{Error, Result};
use crate::jantzen::Jantzen;
use crate::rootsys::Weight;

pub fn nabla_pr_char(j: &Jantzen, r: u32, lambda: &Weight) -> Result<WeightMultiset> {
    let rs = j.root_system();
    rs.check_dim(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.clone()));
    }
    let q = j.p().checked_pow(r).ok_or(Error::Overflow)?;
    let (low, high) = lambda.digits(q);
    let l = combo_to_multiset(rs, &j.simple_char(&low)?)?;
    if high.is_zero() {
        return Ok(l);
    }
    tensor(&l, &frobenius_twist(&freudenthal(rs, &high)?, j.p(), r)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrDecomposition {
    #[serde(serialize_with = "serialize_mults")]
    pub mults: BTreeMap<Weight, i64>,
    pub residual: WeightMultiset,
}

fn serialize_mults<S: serde::Serializer>(
    m: &BTreeMap<Weight, i64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let as_set: WeightMultiset = m.iter().map(|(w, &k)| (w.clone(), k)).collect();
    as_set.serialize(s)
}

impl PrDecomposition {
    pub fn succeeded(&self) -> bool {
        self.residual.is_empty()
    }
}

/// Peels off `nabla^(p,r)` characters from the top. Stops without error at the
/// first negative leading coefficient, leaving the remainder as residual.
pub fn decompose_pr(j: &Jantzen, r: u32, m: &WeightMultiset) -> Result<PrDecomposition> {
    let rs = j.root_system();
    if let Some(bad) = m.w_invariance_violation(rs) {
        return Err(Error::NotWInvariant(bad));
    }
    let mut rest = m.clone();
    let mut mults = BTreeMap::new();
    loop {
        let dominant: Vec<Weight> = rest.keys().filter(|w| w.is_dominant()).cloned().collect();
        let Some(top) = pick_maximal(rs, dominant.iter()) else {
            break;
        };
        let c = rest.get(&top);
        if c < 0 {
            break;
        }
        rest.add_scaled(&nabla_pr_char(j, r, &top)?, -c)?;
        if rest.get(&top) != 0 {
            return Err(Error::NonTerminating(top));
        }
        mults.insert(top, c);
    }
    Ok(PrDecomposition {
        mults,
        residual: rest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build, TypeLabel};

    fn w<const N: usize>(v: [i64; N]) -> Weight {
        Weight::from(v)
    }

    #[test]
    fn twisted_standard_rep() {
        let a2 = build(TypeLabel::A, 2).unwrap();
        let j = Jantzen::new(&a2, 3).unwrap();
        let c = nabla_pr_char(&j, 1, &w([3, 0])).unwrap();
        let expect: WeightMultiset = [(w([3, 0]), 1), (w([-3, 3]), 1), (w([0, -3]), 1)]
            .into_iter()
            .collect();
        assert_eq!(c, expect);
    }

    #[test]
    fn restricted_is_simple_character() {
        let a2 = build(TypeLabel::A, 2).unwrap();
        let j = Jantzen::new(&a2, 3).unwrap();
        let l = combo_to_multiset(&a2, &j.simple_char(&w([1, 1])).unwrap()).unwrap();
        assert_eq!(nabla_pr_char(&j, 1, &w([1, 1])).unwrap(), l);
        assert_eq!(l.mass(), 7);
    }

    #[test]
    fn a3_nabla_decomposes() {
        let a3 = build(TypeLabel::A, 3).unwrap();
        let j = Jantzen::new(&a3, 3).unwrap();
        let m = freudenthal(&a3, &w([1, 2, 1])).unwrap();
        let d = decompose_pr(&j, 1, &m).unwrap();
        assert!(d.succeeded());
        assert_eq!(
            d.mults,
            [(w([1, 2, 1]), 1), (w([0, 2, 0]), 1)].into_iter().collect()
        );
    }

    #[test]
    fn steinberg_twist_is_one_term() {
        let a2 = build(TypeLabel::A, 2).unwrap();
        let j = Jantzen::new(&a2, 3).unwrap();
        let st = freudenthal(&a2, &w([2, 2])).unwrap();
        let m = tensor(
            &st,
            &frobenius_twist(&freudenthal(&a2, &w([1, 0])).unwrap(), 3, 1).unwrap(),
        )
        .unwrap();
        let d = decompose_pr(&j, 1, &m).unwrap();
        assert!(d.succeeded());
        assert_eq!(d.mults, [(w([5, 2]), 1)].into_iter().collect());
    }

    #[test]
    fn failed_peel_leaves_residual() {
        let a2 = build(TypeLabel::A, 2).unwrap();
        let j = Jantzen::new(&a2, 3).unwrap();
        // ch L(1,1) - ch L(0,0)
        let mut m = nabla_pr_char(&j, 1, &w([1, 1])).unwrap();
        m.add_term(w([0, 0]), -1);
        let d = decompose_pr(&j, 1, &m).unwrap();
        assert!(!d.succeeded());
        assert_eq!(d.mults, [(w([1, 1]), 1)].into_iter().collect());
        assert_eq!(d.residual, [(w([0, 0]), -1)].into_iter().collect());
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(
            text,
            r#"{"mults":[{"weight":[1,1],"mult":1}],"residual":[{"weight":[0,0],"mult":-1}]}"#
        );
    }

    #[test]
    fn rejects_non_invariant() {
        let a2 = build(TypeLabel::A, 2).unwrap();
        let j = Jantzen::new(&a2, 3).unwrap();
        let m = WeightMultiset::single(w([1, 0]), 1);
        assert!(matches!(
            decompose_pr(&j, 1, &m),
            Err(Error::NotWInvariant(_))
        ));
    }
}
