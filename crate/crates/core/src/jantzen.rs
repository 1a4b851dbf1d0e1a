//! Jantzen's sum formula and everything derived from it: simplicity of
//! `nabla(lambda)`, composition factors with an exactness flag, and simple
//! characters by triangular recursion.
//!
//! The sum formula gives the character of `sum_{i>0} nabla(lambda)^i` as
//!
//! ```text
//! sum_{alpha > 0} sum_{0 < mp < <lambda+rho, alpha^vee>} nu_p(mp) chi(s_{alpha,mp} . lambda)
//! ```
//!
//! with `s_{alpha,mp} . lambda = lambda - (<lambda+rho, alpha^vee> - mp) alpha`.
//! Rewriting that sum in the basis of simple characters gives, for each
//! `mu != lambda`, an integer `d_mu >= [nabla(lambda) : L(mu)]`, and since the
//! first layer is the whole radical, `d_mu <= 1` pins the multiplicity exactly.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

use crate::chars::{
    chi_of, combo_to_multiset, frobenius_twist, multiset_to_combo, pick_maximal, tensor, WeylCombo,
};
use crate::error::{Error, Result};
use crate::rootsys::{RootSystemData, Weight};

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The `p`-adic valuation of a non-zero integer.
pub fn valuation(p: i64, mut n: i64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Memo of simple characters, shared between threads and optionally
/// persisted as JSON keyed by `type/rank/p/lambda`.
#[derive(Debug, Default)]
pub struct SimpleCharCache {
    map: RwLock<HashMap<String, WeylCombo>>,
}

impl SimpleCharCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn key(rs: &RootSystemData, p: i64, lambda: &Weight) -> String {
        let coords: Vec<String> = lambda.coords().iter().map(|c| c.to_string()).collect();
        format!("{}/{}/{}/{}", rs.type_label, rs.rank, p, coords.join(","))
    }

    pub fn get(&self, key: &str) -> Option<WeylCombo> {
        self.map.read().get(key).cloned()
    }

    pub fn insert(&self, key: String, value: WeylCombo) {
        self.map.write().insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Loads a cache file; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(Self::new());
        }
        let text = fs::read_to_string(path).map_err(|e| Error::Cache(e.to_string()))?;
        let map: BTreeMap<String, WeylCombo> =
            serde_json::from_str(&text).map_err(|e| Error::Cache(e.to_string()))?;
        Ok(SimpleCharCache {
            map: RwLock::new(map.into_iter().collect()),
        })
    }

    /// Writes the cache with sorted keys, via a temporary file and rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let sorted: BTreeMap<String, WeylCombo> = self
            .map
            .read()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let text =
            serde_json::to_string_pretty(&sorted).map_err(|e| Error::Cache(e.to_string()))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(|e| Error::Cache(e.to_string()))?;
        fs::rename(&tmp, path).map_err(|e| Error::Cache(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JsfOutput {
    pub lambda: Weight,
    pub p: i64,
    pub combo: WeylCombo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorMap {
    /// Multiplicities `[nabla(lambda) : L(mu)]`, or upper bounds when not exact.
    #[serde(serialize_with = "serialize_factor_map")]
    pub factors: BTreeMap<Weight, i64>,
    pub exact: bool,
}

fn serialize_factor_map<S: serde::Serializer>(
    m: &BTreeMap<Weight, i64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let c: WeylCombo = m.iter().map(|(w, &k)| (w.clone(), k)).collect();
    c.serialize(s)
}

/// Sum-formula engine for one root system and one prime.
#[derive(Debug, Clone)]
pub struct Jantzen<'a> {
    rs: &'a RootSystemData,
    p: i64,
    cache: Arc<SimpleCharCache>,
    tensor_fallback: bool,
}

impl<'a> Jantzen<'a> {
    pub fn new(rs: &'a RootSystemData, p: i64) -> Result<Self> {
        Self::with_cache(rs, p, Arc::new(SimpleCharCache::new()))
    }

    pub fn with_cache(rs: &'a RootSystemData, p: i64, cache: Arc<SimpleCharCache>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Jantzen {
            rs,
            p,
            cache,
            tensor_fallback: true,
        })
    }

    /// Disables the Steinberg tensor-product route for non-restricted weights,
    /// leaving the pure triangular recursion.
    pub fn without_tensor_fallback(mut self) -> Self {
        self.tensor_fallback = false;
        self
    }

    pub fn root_system(&self) -> &'a RootSystemData {
        self.rs
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn cache(&self) -> &Arc<SimpleCharCache> {
        &self.cache
    }

    fn require_dominant(&self, lambda: &Weight) -> Result<()> {
        self.rs.check_dim(lambda)?;
        if lambda.is_dominant() {
            Ok(())
        } else {
            Err(Error::NotDominant(lambda.clone()))
        }
    }

    /// The sum formula in the `chi`-basis.
    pub fn jsf(&self, lambda: &Weight) -> Result<JsfOutput> {
        self.require_dominant(lambda)?;
        let rs = self.rs;
        let p = self.p;
        let shifted = lambda + &rs.rho;
        let mut combo = WeylCombo::new();
        for alpha in &rs.positive_roots {
            let n = shifted.dot(&alpha.coroot_coeffs);
            let mut mp = p;
            while mp < n {
                let v = valuation(p, mp) as i64;
                let reflected = lambda - &alpha.weight.scale(n - mp);
                combo.add_scaled(&chi_of(rs, &reflected)?, v)?;
                mp += p;
            }
        }
        Ok(JsfOutput {
            lambda: lambda.clone(),
            p,
            combo,
        })
    }

    pub fn is_simple_nabla(&self, lambda: &Weight) -> Result<bool> {
        Ok(self.jsf(lambda)?.combo.is_empty())
    }

    /// Rewrites a `chi`-combination in the basis of simple characters.
    pub fn to_simple_basis(&self, combo: &WeylCombo) -> Result<BTreeMap<Weight, i64>> {
        let mut rest = combo.clone();
        let mut out = BTreeMap::new();
        while let Some(top) = pick_maximal(self.rs, rest.keys()) {
            let c = rest.get(&top);
            let l = self.simple_char(&top)?;
            rest.add_scaled(&l, -c)?;
            if rest.get(&top) != 0 {
                return Err(Error::NonTerminating(top));
            }
            out.insert(top, c);
        }
        Ok(out)
    }

    pub fn composition_factors(&self, lambda: &Weight) -> Result<FactorMap> {
        let jsf = self.jsf(lambda)?;
        let l = self.to_simple_basis(&jsf.combo)?;
        if let Some((mu, &c)) = l.iter().find(|(_, &c)| c < 0) {
            return Err(Error::NegativeLayer {
                lambda: lambda.clone(),
                mu: mu.clone(),
                coeff: c,
            });
        }
        let exact = l.values().all(|&c| c <= 1);
        let mut factors = l;
        factors.insert(lambda.clone(), 1);
        Ok(FactorMap { factors, exact })
    }

    /// `ch L(lambda)` in the `chi`-basis.
    pub fn simple_char(&self, lambda: &Weight) -> Result<WeylCombo> {
        self.require_dominant(lambda)?;
        let key = SimpleCharCache::key(self.rs, self.p, lambda);
        if let Some(c) = self.cache.get(&key) {
            return Ok(c);
        }
        let result = match self.simple_char_by_recursion(lambda) {
            Err(Error::Ambiguous(_)) if self.tensor_fallback && !lambda.is_restricted(self.p) => {
                self.simple_char_by_tensor_product(lambda)?
            }
            other => other?,
        };
        self.cache.insert(key, result.clone());
        Ok(result)
    }

    fn simple_char_by_recursion(&self, lambda: &Weight) -> Result<WeylCombo> {
        let factors = self.composition_factors(lambda)?;
        if !factors.exact {
            return Err(Error::Ambiguous(lambda.clone()));
        }
        let mut out = WeylCombo::single(lambda.clone(), 1);
        for (mu, &k) in &factors.factors {
            if mu != lambda {
                out.add_scaled(&self.simple_char(mu)?, -k)?;
            }
        }
        Ok(out)
    }

    /// `L(lambda_0 + p lambda_1) = L(lambda_0) (x) L(lambda_1)^[1]`.
    fn simple_char_by_tensor_product(&self, lambda: &Weight) -> Result<WeylCombo> {
        let (low, high) = lambda.digits(self.p);
        let low_ch = combo_to_multiset(self.rs, &self.simple_char(&low)?)?;
        let high_ch = combo_to_multiset(self.rs, &self.simple_char(&high)?)?;
        let product = tensor(&low_ch, &frobenius_twist(&high_ch, self.p, 1)?)?;
        multiset_to_combo(self.rs, &product)
    }

    /// Largest `<mu, alpha_0^vee>` over the weights `mu` the sum formula produces.
    pub fn jsf_support_pairing_bound(&self, lambda: &Weight) -> Result<i64> {
        let jsf = self.jsf(lambda)?;
        if jsf.combo.is_empty() {
            return Err(Error::SimpleModule(lambda.clone()));
        }
        let support: Vec<Weight> = match self.to_simple_basis(&jsf.combo) {
            Ok(l) => l.into_keys().collect(),
            Err(Error::Ambiguous(_)) => jsf.combo.keys().cloned().collect(),
            Err(e) => return Err(e),
        };
        Ok(support
            .iter()
            .map(|mu| self.rs.alpha0_pairing(mu))
            .max()
            .expect("non-empty support"))
    }
}
