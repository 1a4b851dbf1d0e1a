//! Sweeps `X_1` and decides, weight by weight, whether `St_1 (x) L(lambda)` is
//! known to have a good filtration.
//!
//! If it does not, there are dominant `mu != lambda` and `sigma` with
//! `Ext^1_G(k, L(sigma)) != 0`, `[nabla(lambda) : L(mu)] != 0` and
//! `p sigma <= lambda + mu`. The `Ext^1` condition is replaced by the weaker
//! pair "sigma is linked to 0" and "`[nabla(sigma) : L(0)]` is not provably 0",
//! so an empty search still clears the weight.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chars::dominant_weights_below;
use crate::criteria::{good_filtration_guarantee, satz9_simple, GuaranteeReason};
use crate::error::{Error, Result};
use crate::jantzen::{is_prime, Jantzen};
use crate::rootsys::{build, RootSystemData, TypeLabel, Weight};
use crate::weyl::WeylGroup;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub sigma: Weight,
    pub mu: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    ClearedByBound {
        reason: GuaranteeReason,
    },
    ClearedBySimplicity,
    ClearedByObstructionSearch {
        sigmas: Vec<Weight>,
        mus: Vec<Weight>,
        factors_exact: bool,
    },
    ClearedByDuality {
        partner: Weight,
    },
    Undetermined {
        witnesses: Vec<Witness>,
        note: Option<String>,
    },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::ClearedByBound { .. } => "ClearedByBound",
            Verdict::ClearedBySimplicity => "ClearedBySimplicity",
            Verdict::ClearedByObstructionSearch { .. } => "ClearedByObstructionSearch",
            Verdict::ClearedByDuality { .. } => "ClearedByDuality",
            Verdict::Undetermined { .. } => "Undetermined",
        }
    }

    pub fn is_cleared(&self) -> bool {
        !matches!(self, Verdict::Undetermined { .. })
    }

    pub fn witnesses(&self) -> &[Witness] {
        match self {
            Verdict::Undetermined { witnesses, .. } => witnesses,
            _ => &[],
        }
    }

    pub fn reason(&self) -> String {
        match self {
            Verdict::ClearedByBound { reason } => match reason {
                GuaranteeReason::SmallP { pairing, bound } => {
                    format!("SmallP: <lambda, alpha_0^vee> = {pairing} <= {bound}")
                }
                GuaranteeReason::LambdaAlpha0 { pairing, bound } => {
                    format!("LambdaAlpha0: <lambda, alpha_0^vee> = {pairing} < {bound}")
                }
                GuaranteeReason::StorLambda1 { low, high } => {
                    format!("StorLambda1: {low} + q {high}")
                }
                GuaranteeReason::DigitInduction { digits } => {
                    format!("DigitInduction over {} digits", digits.len())
                }
                GuaranteeReason::None => "None".to_string(),
            },
            Verdict::ClearedBySimplicity => "nabla(lambda) is simple".to_string(),
            Verdict::ClearedByObstructionSearch {
                sigmas,
                mus,
                factors_exact,
            } => format!(
                "no p sigma <= lambda + mu among {} sigma and {} mu ({})",
                sigmas.len(),
                mus.len(),
                if *factors_exact {
                    "exact factors"
                } else {
                    "upper-bound factors"
                }
            ),
            Verdict::ClearedByDuality { partner } => format!("partner {partner} is cleared"),
            Verdict::Undetermined { witnesses, note } => {
                let mut s = format!("{} surviving (sigma, mu) pairs", witnesses.len());
                if let Some(n) = note {
                    s.push_str("; ");
                    s.push_str(n);
                }
                s
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub lambda: Weight,
    pub verdict: String,
    pub reason: String,
    pub witnesses: Vec<Witness>,
    pub details: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub cleared: usize,
    pub undetermined: usize,
    pub by_verdict: BTreeMap<String, usize>,
}

/// Weights still open after each reduction step, in sweep order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stages {
    pub after_bound: Vec<Weight>,
    pub after_simplicity: Vec<Weight>,
    /// Post-bound weights with `p s <= 2<lambda, alpha_0^vee>`, where `s` is the least
    /// `<sigma, alpha_0^vee>` over `sigma != 0` with `nabla(sigma)` not simple.
    pub after_sigma_cap: Vec<Weight>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub system: String,
    pub p: i64,
    pub results: Vec<ResultRow>,
    pub summary: Summary,
    pub stages: Stages,
    pub notes: Vec<String>,
}

impl CaseReport {
    pub fn undetermined(&self) -> Vec<&ResultRow> {
        self.results
            .iter()
            .filter(|r| r.verdict == "Undetermined")
            .collect()
    }

    pub fn all_cleared(&self) -> bool {
        self.summary.undetermined == 0
    }

    pub fn verdict_of(&self, lambda: &Weight) -> Option<&Verdict> {
        self.results
            .iter()
            .find(|r| &r.lambda == lambda)
            .map(|r| &r.details)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "system {}  p = {}", self.system, self.p);
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        let width = self
            .results
            .iter()
            .map(|r| r.lambda.to_string().len())
            .max()
            .unwrap_or(6)
            .max(6);
        let _ = writeln!(out, "{:<width$}  {:<27}  reason", "lambda", "verdict");
        for r in &self.results {
            let _ = writeln!(
                out,
                "{:<width$}  {:<27}  {}",
                r.lambda.to_string(),
                r.verdict,
                r.reason
            );
            for wit in &r.witnesses {
                let _ = writeln!(
                    out,
                    "{:<width$}    witness sigma = {}, mu = {}",
                    "", wit.sigma, wit.mu
                );
            }
        }
        let list = |v: &[Weight]| {
            v.iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "after bound:       {}", list(&self.stages.after_bound));
        let _ = writeln!(
            out,
            "after simplicity:  {}",
            list(&self.stages.after_simplicity)
        );
        let _ = writeln!(
            out,
            "after sigma cap:   {}",
            list(&self.stages.after_sigma_cap)
        );
        let _ = writeln!(
            out,
            "total {}  cleared {}  undetermined {}",
            self.summary.total, self.summary.cleared, self.summary.undetermined
        );
        for (k, v) in &self.summary.by_verdict {
            let _ = writeln!(out, "  {k}: {v}");
        }
        out
    }
}

/// Sweep context for one root system and prime.
pub struct Verifier<'a> {
    rs: &'a RootSystemData,
    jantzen: Jantzen<'a>,
    group: WeylGroup,
}

impl<'a> Verifier<'a> {
    pub fn new(jantzen: Jantzen<'a>) -> Result<Self> {
        let rs = jantzen.root_system();
        let group = WeylGroup::new(rs)?;
        Ok(Verifier { rs, jantzen, group })
    }

    pub fn jantzen(&self) -> &Jantzen<'a> {
        &self.jantzen
    }

    fn p(&self) -> i64 {
        self.jantzen.p()
    }

    pub fn sigma_cap(&self, lambda: &Weight) -> i64 {
        2 * self.rs.alpha0_pairing(lambda) / self.p()
    }

    /// Dominant `sigma != 0` with `<sigma, alpha_0^vee> <= cap` that may have
    /// `Ext^1_G(k, L(sigma)) != 0`.
    pub fn ext1_candidates(&self, cap: i64) -> Result<Vec<Weight>> {
        let mut out = Vec::new();
        for sigma in self.rs.dominant_with_alpha0_at_most(cap) {
            if sigma.is_zero() || !self.group.linked_to_zero(self.rs, self.p(), &sigma)? {
                continue;
            }
            let zero = Weight::zero(self.rs.rank);
            let keep = match self.jantzen.composition_factors(&sigma) {
                Ok(f) => f.factors.get(&zero).copied().unwrap_or(0) != 0,
                Err(Error::Ambiguous(_)) => true,
                Err(e) => return Err(e),
            };
            if keep {
                out.push(sigma);
            }
        }
        Ok(out)
    }

    /// Smallest `<sigma, alpha_0^vee>` over dominant `sigma != 0` with `nabla(sigma)`
    /// not simple, searched up to `cap`; `cap + 1` when there is none.
    pub fn nonsimple_floor(&self, cap: i64) -> Result<i64> {
        for sigma in self.rs.dominant_with_alpha0_at_most(cap) {
            if !sigma.is_zero() && !self.jantzen.is_simple_nabla(&sigma)? {
                let k = self.rs.alpha0_pairing(&sigma);
                // later weights may have smaller pairing, so shrink the search
                return Ok(k.min(self.nonsimple_floor(k - 1)?));
            }
        }
        Ok(cap + 1)
    }

    /// Possible `mu != lambda` with `[nabla(lambda) : L(mu)] != 0`.
    fn factor_support(&self, lambda: &Weight) -> Result<(Vec<Weight>, bool)> {
        match self.jantzen.composition_factors(lambda) {
            Ok(f) => Ok((
                f.factors.into_keys().filter(|m| m != lambda).collect(),
                f.exact,
            )),
            Err(Error::Ambiguous(_)) => {
                // every L(mu) in the radical lies below some weight of the chi-support
                let mut support = BTreeSet::new();
                for nu in self.jantzen.jsf(lambda)?.combo.keys() {
                    for (mu, _) in dominant_weights_below(self.rs, nu)? {
                        support.insert(mu);
                    }
                }
                support.remove(lambda);
                Ok((support.into_iter().collect(), false))
            }
            Err(e) => Err(e),
        }
    }

    fn survivors(
        &self,
        lambda: &Weight,
        sigmas: &[Weight],
        mus: &[Weight],
    ) -> Result<Vec<Witness>> {
        let p = self.p();
        let mut out = Vec::new();
        for sigma in sigmas {
            let scaled = sigma.checked_scale(p)?;
            for mu in mus {
                if self.rs.dominance_leq(&scaled, &(lambda + mu))?.is_some() {
                    out.push(Witness {
                        sigma: sigma.clone(),
                        mu: mu.clone(),
                    });
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn check_direct(&self, lambda: &Weight, sigma_pool: &[Weight]) -> Result<Verdict> {
        let reason = good_filtration_guarantee(self.rs, self.p(), 1, lambda);
        if !reason.is_none() {
            return Ok(Verdict::ClearedByBound { reason });
        }
        let simple = self.jantzen.is_simple_nabla(lambda)?;
        if self.rs.type_label == TypeLabel::A && simple != satz9_simple(self.rs, self.p(), lambda)?
        {
            return Err(Error::Invalid(format!(
                "sum formula and the type A criterion disagree on the simplicity of {lambda}"
            )));
        }
        if simple {
            return Ok(Verdict::ClearedBySimplicity);
        }
        let cap = self.sigma_cap(lambda);
        let sigmas: Vec<Weight> = sigma_pool
            .iter()
            .filter(|s| self.rs.alpha0_pairing(s) <= cap)
            .cloned()
            .collect();
        let (mus, exact) = self.factor_support(lambda)?;
        let witnesses = self.survivors(lambda, &sigmas, &mus)?;
        if witnesses.is_empty() {
            return Ok(Verdict::ClearedByObstructionSearch {
                sigmas,
                mus,
                factors_exact: exact,
            });
        }
        let note =
            (!exact).then(|| "composition factors known only up to upper bounds".to_string());
        Ok(Verdict::Undetermined { witnesses, note })
    }

    fn check_with_pool(&self, lambda: &Weight, sigma_pool: &[Weight]) -> Result<Verdict> {
        let direct = self.check_direct(lambda, sigma_pool)?;
        if direct.is_cleared() || self.rs.type_label != TypeLabel::A {
            return Ok(direct);
        }
        let partner = self.rs.neg_w0(lambda);
        if &partner != lambda && self.check_direct(&partner, sigma_pool)?.is_cleared() {
            return Ok(Verdict::ClearedByDuality { partner });
        }
        Ok(direct)
    }

    pub fn check_weight(&self, lambda: &Weight) -> Result<Verdict> {
        self.rs.check_dim(lambda)?;
        if !lambda.is_restricted(self.p()) {
            return Err(Error::Invalid(format!(
                "{lambda} is not restricted for p = {}",
                self.p()
            )));
        }
        let pool = self.ext1_candidates(
            self.sigma_cap(lambda)
                .max(self.sigma_cap(&self.rs.neg_w0(lambda))),
        )?;
        self.check_with_pool(lambda, &pool)
    }

    pub fn verify_rank(&self) -> Result<CaseReport> {
        let rs = self.rs;
        let p = self.p();
        let weights = rs.restricted_weights(p);
        let max_cap = weights.iter().map(|w| self.sigma_cap(w)).max().unwrap_or(0);
        let pool = self.ext1_candidates(max_cap)?;
        let sigma_floor = self.nonsimple_floor(max_cap)?;

        let verdicts: Vec<Verdict> = weights
            .par_iter()
            .map(|w| self.check_with_pool(w, &pool))
            .collect::<Result<_>>()?;

        let mut after_bound = Vec::new();
        let mut after_simplicity = Vec::new();
        let mut after_sigma_cap = Vec::new();
        for (w, v) in weights.iter().zip(&verdicts) {
            if matches!(v, Verdict::ClearedByBound { .. }) {
                continue;
            }
            after_bound.push(w.clone());
            if !matches!(v, Verdict::ClearedBySimplicity) {
                after_simplicity.push(w.clone());
            }
            if p * sigma_floor <= 2 * rs.alpha0_pairing(w) {
                after_sigma_cap.push(w.clone());
            }
        }

        let mut by_verdict = BTreeMap::new();
        for v in &verdicts {
            *by_verdict.entry(v.tag().to_string()).or_insert(0) += 1;
        }
        let undetermined = verdicts.iter().filter(|v| !v.is_cleared()).count();
        let results = weights
            .into_iter()
            .zip(verdicts)
            .map(|(lambda, v)| ResultRow {
                lambda,
                verdict: v.tag().to_string(),
                reason: v.reason(),
                witnesses: v.witnesses().to_vec(),
                details: v,
            })
            .collect::<Vec<_>>();
        let pool_text: BTreeSet<String> = pool.iter().map(|s| s.to_string()).collect();
        Ok(CaseReport {
            system: rs.label(),
            p,
            summary: Summary {
                total: results.len(),
                cleared: results.len() - undetermined,
                undetermined,
                by_verdict,
            },
            results,
            stages: Stages {
                after_bound,
                after_simplicity,
                after_sigma_cap,
            },
            notes: vec![
                "a good filtration of St_1 (x) L(lambda) for all lambda in X_1 gives the same for St_r (x) L(lambda), lambda in X_r, by digit induction".to_string(),
                "Ext^1(k, L(sigma)) != 0 is replaced by: sigma linked to 0 and [nabla(sigma) : L(0)] not provably 0".to_string(),
                format!(
                    "sigma candidates up to <sigma, alpha_0^vee> <= {max_cap}: {}",
                    if pool_text.is_empty() {
                        "none".to_string()
                    } else {
                        pool_text.into_iter().collect::<Vec<_>>().join(" ")
                    }
                ),
            ],
        })
    }
}

pub fn verify_rank(rs: &RootSystemData, p: i64) -> Result<CaseReport> {
    Verifier::new(Jantzen::new(rs, p)?)?.verify_rank()
}

pub fn check_weight(rs: &RootSystemData, p: i64, lambda: &Weight) -> Result<Verdict> {
    Verifier::new(Jantzen::new(rs, p)?)?.check_weight(lambda)
}

pub fn ext1_candidates(rs: &RootSystemData, p: i64, cap: i64) -> Result<Vec<Weight>> {
    Verifier::new(Jantzen::new(rs, p)?)?.ext1_candidates(cap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub n: usize,
    pub h: i64,
    pub p: i64,
    pub lambda: Weight,
    pub mu: Weight,
    pub pairing: i64,
    pub pairing_bound: i64,
    pub pairing_ok: bool,
    pub mu_simple_satz9: bool,
    pub mu_simple_sum_formula: bool,
    pub confirmed: bool,
    pub conclusion: String,
}

/// Type `A_n` with `p = 2h - 5`: `lambda = p(omega_1 + ... + omega_{n-1})` is small
/// but `St_1 (x) L(lambda)` has no good filtration.
pub fn counterexample_check(n: usize) -> Result<CounterexampleReport> {
    if n < 3 {
        return Err(Error::Invalid(format!("need n >= 3, got {n}")));
    }
    let h = n as i64 + 1;
    let p = 2 * h - 5;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let rs = build(TypeLabel::A, n)?;
    let mut coords = vec![1; n];
    coords[n - 1] = 0;
    let mu = Weight::new(coords);
    let lambda = mu.scale(p);
    let pairing = rs.alpha0_pairing(&lambda);
    let pairing_bound = (p - 1) * (h - 1);
    let pairing_ok = pairing <= pairing_bound;
    let mu_simple_satz9 = satz9_simple(&rs, p, &mu)?;
    let mu_simple_sum_formula = Jantzen::new(&rs, p)?.is_simple_nabla(&mu)?;
    let confirmed = pairing_ok && !mu_simple_satz9 && !mu_simple_sum_formula;
    let top = &rs.rho.scale(p - 1) + &lambda;
    let conclusion = if confirmed {
        format!(
            "St_1 (x) L{lambda} = L{top} is simple but differs from nabla{top}, so it has no good filtration"
        )
    } else {
        "the counterexample conditions fail".to_string()
    };
    Ok(CounterexampleReport {
        n,
        h,
        p,
        lambda,
        mu,
        pairing,
        pairing_bound,
        pairing_ok,
        mu_simple_satz9,
        mu_simple_sum_formula,
        confirmed,
        conclusion,
    })
}
