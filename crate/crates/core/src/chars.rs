//! Formal characters.
//!
//! A [`WeightMultiset`] is a character written weight by weight; a
//! [`WeylCombo`] is an integer combination of Euler characters `chi(lambda)`
//! indexed by dominant weights. Multiplicities of `ch nabla(lambda)` come from
//! Freudenthal's recursion over dominant weights, expanded along `W`-orbits.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{RootSystemData, Weight};
use crate::weyl::dot_dominant_sign;

#[derive(Serialize, Deserialize)]
struct Entry {
    weight: Weight,
    mult: i64,
}

macro_rules! sparse_sum {
    ($name:ident) => {
        #[derive(Clone, Default, PartialEq, Eq)]
        pub struct $name(BTreeMap<Weight, i64>);

        impl $name {
            pub fn new() -> Self {
                Self(BTreeMap::new())
            }

            pub fn single(w: Weight, c: i64) -> Self {
                let mut s = Self::new();
                s.add_term(w, c);
                s
            }

            pub fn get(&self, w: &Weight) -> i64 {
                self.0.get(w).copied().unwrap_or(0)
            }

            pub fn add_term(&mut self, w: Weight, c: i64) {
                if c == 0 {
                    return;
                }
                match self.0.get_mut(&w) {
                    Some(v) => {
                        *v += c;
                        if *v == 0 {
                            self.0.remove(&w);
                        }
                    }
                    None => {
                        self.0.insert(w, c);
                    }
                }
            }

            /// `self += k * other`.
            pub fn add_scaled(&mut self, other: &Self, k: i64) -> Result<()> {
                if k == 0 {
                    return Ok(());
                }
                for (w, &c) in &other.0 {
                    let delta = c.checked_mul(k).ok_or(Error::Overflow)?;
                    match self.0.get_mut(w) {
                        Some(v) => {
                            *v = v.checked_add(delta).ok_or(Error::Overflow)?;
                            if *v == 0 {
                                self.0.remove(w);
                            }
                        }
                        None => {
                            self.0.insert(w.clone(), delta);
                        }
                    }
                }
                Ok(())
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn iter(&self) -> impl Iterator<Item = (&Weight, i64)> {
                self.0.iter().map(|(w, &c)| (w, c))
            }

            pub fn keys(&self) -> impl Iterator<Item = &Weight> {
                self.0.keys()
            }

            pub fn as_map(&self) -> &BTreeMap<Weight, i64> {
                &self.0
            }
        }

        impl FromIterator<(Weight, i64)> for $name {
            fn from_iter<I: IntoIterator<Item = (Weight, i64)>>(iter: I) -> Self {
                let mut s = Self::new();
                for (w, c) in iter {
                    s.add_term(w, c);
                }
                s
            }
        }

        impl std::fmt::Debug for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.debug_map().entries(self.0.iter()).finish()
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let entries: Vec<Entry> = self
                    .0
                    .iter()
                    .map(|(w, &c)| Entry {
                        weight: w.clone(),
                        mult: c,
                    })
                    .collect();
                entries.serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let entries = Vec::<Entry>::deserialize(d)?;
                Ok(entries.into_iter().map(|e| (e.weight, e.mult)).collect())
            }
        }
    };
}

sparse_sum!(WeightMultiset);
sparse_sum!(WeylCombo);

impl WeightMultiset {
    /// Sum of all multiplicities, i.e. the (virtual) dimension.
    pub fn mass(&self) -> i64 {
        self.0.values().sum()
    }

    /// The first weight at which invariance under the simple reflections fails.
    pub fn w_invariance_violation(&self, rs: &RootSystemData) -> Option<Weight> {
        for (w, &c) in &self.0 {
            for i in 0..rs.rank {
                if w[i] != 0 && self.get(&rs.reflect(w, i)) != c {
                    return Some(w.clone());
                }
            }
        }
        None
    }

    pub fn is_w_invariant(&self, rs: &RootSystemData) -> bool {
        self.w_invariance_violation(rs).is_none()
    }

    fn dominant_part(&self) -> BTreeMap<Weight, i64> {
        self.0
            .iter()
            .filter(|(w, _)| w.is_dominant())
            .map(|(w, &c)| (w.clone(), c))
            .collect()
    }
}

impl WeylCombo {
    /// Virtual dimension `sum c * dim nabla(lambda)`.
    pub fn dimension(&self, rs: &RootSystemData) -> Result<i64> {
        self.0.iter().try_fold(0i64, |acc, (w, &c)| {
            let d = weyl_dim(rs, w)?;
            d.checked_mul(c)
                .and_then(|x| acc.checked_add(x))
                .ok_or(Error::Overflow)
        })
    }
}

fn require_dominant(rs: &RootSystemData, lambda: &Weight) -> Result<()> {
    rs.check_dim(lambda)?;
    if lambda.is_dominant() {
        Ok(())
    } else {
        Err(Error::NotDominant(lambda.clone()))
    }
}

/// Weyl's dimension formula.
pub fn weyl_dim(rs: &RootSystemData, lambda: &Weight) -> Result<i64> {
    require_dominant(rs, lambda)?;
    let shifted = lambda + &rs.rho;
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for a in &rs.positive_roots {
        num = num
            .checked_mul(shifted.dot(&a.coroot_coeffs) as i128)
            .ok_or(Error::Overflow)?;
        den = den
            .checked_mul(rs.rho.dot(&a.coroot_coeffs) as i128)
            .ok_or(Error::Overflow)?;
    }
    debug_assert_eq!(num % den, 0);
    i64::try_from(num / den).map_err(|_| Error::Overflow)
}

/// Dominant weights `mu <= lambda`, each with the simple-root coefficients of
/// `lambda - mu`, sorted by increasing depth.
pub fn dominant_weights_below(
    rs: &RootSystemData,
    lambda: &Weight,
) -> Result<Vec<(Weight, Vec<i64>)>> {
    require_dominant(rs, lambda)?;
    // every dominant mu <= lambda is reachable through dominant weights by
    // subtracting one positive root at a time
    let mut seen: HashMap<Weight, Vec<i64>> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(lambda.clone(), vec![0; rs.rank]);
    queue.push_back(lambda.clone());
    while let Some(mu) = queue.pop_front() {
        let depth = seen[&mu].clone();
        for a in &rs.positive_roots {
            let nu = &mu - &a.weight;
            if nu.is_dominant() && !seen.contains_key(&nu) {
                let d: Vec<i64> = depth
                    .iter()
                    .zip(&a.simple_coeffs)
                    .map(|(x, y)| x + y)
                    .collect();
                seen.insert(nu.clone(), d);
                queue.push_back(nu);
            }
        }
    }
    let mut out: Vec<(Weight, Vec<i64>)> = seen.into_iter().collect();
    out.sort_by(|(wa, da), (wb, db)| {
        let ha: i64 = da.iter().sum();
        let hb: i64 = db.iter().sum();
        ha.cmp(&hb).then_with(|| wb.cmp(wa))
    });
    Ok(out)
}

/// Multiplicities of the dominant weights of `nabla(lambda)` (Freudenthal).
pub fn dominant_multiplicities(
    rs: &RootSystemData,
    lambda: &Weight,
) -> Result<BTreeMap<Weight, i64>> {
    let below = dominant_weights_below(rs, lambda)?;
    let mut mult: HashMap<Weight, i64> = HashMap::with_capacity(below.len());
    let lam_rho2 = &(lambda + &rs.rho) + &rs.rho;
    let d = rs.symmetrizer();
    for (mu, depth) in &below {
        if mu == lambda {
            mult.insert(mu.clone(), 1);
            continue;
        }
        // (lambda+rho, lambda+rho) - (mu+rho, mu+rho) = (lambda - mu, lambda + mu + 2 rho)
        let s = &lam_rho2 + mu;
        let denom: i64 = (0..rs.rank).map(|i| depth[i] * d[i] * s[i]).sum();
        let mut num: i64 = 0;
        for a in &rs.positive_roots {
            let mut nu = mu + &a.weight;
            loop {
                let dom = rs.dominant_conjugate(&nu);
                // dominant weights above mu are already known; anything else
                // is not a weight and ends the alpha-string
                let Some(&m) = mult.get(&dom) else {
                    break;
                };
                let term = 2 * a.half_norm * nu.dot(&a.coroot_coeffs);
                num = m
                    .checked_mul(term)
                    .and_then(|t| num.checked_add(t))
                    .ok_or(Error::Overflow)?;
                nu = &nu + &a.weight;
            }
        }
        debug_assert!(denom > 0);
        debug_assert_eq!(num % denom, 0, "Freudenthal quotient not integral at {mu}");
        let m = num / denom;
        if m != 0 {
            mult.insert(mu.clone(), m);
        }
    }
    Ok(mult.into_iter().collect())
}

/// `ch nabla(lambda)` as a full weight multiset.
pub fn freudenthal(rs: &RootSystemData, lambda: &Weight) -> Result<WeightMultiset> {
    let dom = dominant_multiplicities(rs, lambda)?;
    let mut out = BTreeMap::new();
    for (mu, m) in dom {
        for w in rs.orbit(&mu) {
            out.insert(w, m);
        }
    }
    Ok(WeightMultiset(out))
}

/// The Euler character `chi(mu)` of an arbitrary weight in the `chi`-basis.
pub fn chi_of(rs: &RootSystemData, mu: &Weight) -> Result<WeylCombo> {
    rs.check_dim(mu)?;
    Ok(match dot_dominant_sign(rs, mu) {
        None => WeylCombo::new(),
        Some((sign, dom)) => WeylCombo::single(dom, sign),
    })
}

pub fn combo_to_multiset(rs: &RootSystemData, c: &WeylCombo) -> Result<WeightMultiset> {
    let mut out = WeightMultiset::new();
    for (lam, k) in c.iter() {
        out.add_scaled(&freudenthal(rs, lam)?, k)?;
    }
    Ok(out)
}

/// Dominance-maximal keys of `map`, lexicographically greatest first.
pub(crate) fn pick_maximal<'a, I>(rs: &RootSystemData, keys: I) -> Option<Weight>
where
    I: IntoIterator<Item = &'a Weight>,
{
    let keys: Vec<&Weight> = keys.into_iter().collect();
    keys.iter()
        .filter(|&&mu| {
            !keys
                .iter()
                .any(|&nu| nu != mu && matches!(rs.dominance_leq(mu, nu), Ok(Some(_))))
        })
        .max()
        .map(|w| (*w).clone())
}

/// Inverse of [`combo_to_multiset`] by peeling off dominance-maximal weights.
pub fn multiset_to_combo(rs: &RootSystemData, m: &WeightMultiset) -> Result<WeylCombo> {
    if let Some(w) = m.w_invariance_violation(rs) {
        return Err(Error::NotWInvariant(w));
    }
    let mut rest = m.dominant_part();
    if rest.is_empty() && !m.is_empty() {
        let w = m.keys().next().unwrap().clone();
        return Err(Error::NotWInvariant(w));
    }
    let mut out = WeylCombo::new();
    while let Some(top) = pick_maximal(rs, rest.keys()) {
        let c = rest[&top];
        for (mu, k) in dominant_multiplicities(rs, &top)? {
            let v = rest.entry(mu.clone()).or_insert(0);
            *v = v
                .checked_sub(k.checked_mul(c).ok_or(Error::Overflow)?)
                .ok_or(Error::Overflow)?;
            if *v == 0 {
                rest.remove(&mu);
            }
        }
        if rest.contains_key(&top) {
            return Err(Error::NonTerminating(top));
        }
        out.add_term(top, c);
    }
    Ok(out)
}

/// Multiplicity convolution.
pub fn tensor(a: &WeightMultiset, b: &WeightMultiset) -> Result<WeightMultiset> {
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for (wa, ca) in a.iter() {
        for (wb, cb) in b.iter() {
            let w = wa.checked_add(wb)?;
            let c = ca.checked_mul(cb).ok_or(Error::Overflow)?;
            let slot = out.entry(w).or_insert(0);
            *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(WeightMultiset(out))
}

/// Frobenius twist: scales every weight by `p^r`.
pub fn frobenius_twist(a: &WeightMultiset, p: i64, r: u32) -> Result<WeightMultiset> {
    let q = p.checked_pow(r).ok_or(Error::Overflow)?;
    let mut out = BTreeMap::new();
    for (w, c) in a.iter() {
        out.insert(w.checked_scale(q)?, c);
    }
    Ok(WeightMultiset(out))
}
