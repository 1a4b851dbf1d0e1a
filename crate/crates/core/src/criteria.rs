//! Closed-form predicates: simplicity tests and sufficient conditions for
//! `St_r (x) L(lambda)` to have a good filtration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jantzen::valuation;
use crate::rootsys::{RootSystemData, TypeLabel, Weight};

/// Why a good filtration of `St_r (x) L(lambda)` is guaranteed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason")]
pub enum GuaranteeReason {
    /// `<lambda, alpha_0^vee> <= p^r`.
    SmallP {
        pairing: i64,
        bound: i64,
    },
    /// `p >= h` and `<lambda, alpha_0^vee> < p^r (p - h + 1)`.
    LambdaAlpha0 {
        pairing: i64,
        bound: i64,
    },
    /// `<lambda_0, alpha_0^vee> <= p^r (<lambda_1, alpha^vee> + 1)` for all simple `alpha`.
    StorLambda1 {
        low: Weight,
        high: Weight,
    },
    /// Every base-`p` digit of a weight in `X_r` is cleared at `r = 1`.
    DigitInduction {
        digits: Vec<DigitCertificate>,
    },
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitCertificate {
    pub digit: Weight,
    pub reason: GuaranteeReason,
}

impl GuaranteeReason {
    pub fn is_none(&self) -> bool {
        matches!(self, GuaranteeReason::None)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            GuaranteeReason::SmallP { .. } => "SmallP",
            GuaranteeReason::LambdaAlpha0 { .. } => "LambdaAlpha0",
            GuaranteeReason::StorLambda1 { .. } => "StorLambda1",
            GuaranteeReason::DigitInduction { .. } => "DigitInduction",
            GuaranteeReason::None => "None",
        }
    }

    /// Re-checks the inequality behind this reason from scratch.
    pub fn recheck(&self, rs: &RootSystemData, p: i64, r: u32, lambda: &Weight) -> bool {
        match self {
            GuaranteeReason::SmallP { .. } => bound_smallp(rs, p, r, lambda),
            GuaranteeReason::LambdaAlpha0 { .. } => bound_lambdaalpha0(rs, p, r, lambda),
            GuaranteeReason::StorLambda1 { .. } => bound_storlambda1(rs, p, r, lambda),
            GuaranteeReason::DigitInduction { digits } => {
                let mut total = Weight::zero(rs.rank);
                let mut scale = 1i64;
                for d in digits {
                    if !d.digit.is_restricted(p) || !d.reason.recheck(rs, p, 1, &d.digit) {
                        return false;
                    }
                    total = &total + &d.digit.scale(scale);
                    scale = scale.saturating_mul(p);
                }
                digits.len() == r as usize && &total == lambda
            }
            GuaranteeReason::None => true,
        }
    }
}

fn ppow(p: i64, r: u32) -> i64 {
    p.saturating_pow(r)
}

/// Jantzen's criterion for `L(lambda) = nabla(lambda)` in type A.
pub fn satz9_simple(rs: &RootSystemData, p: i64, lambda: &Weight) -> Result<bool> {
    if rs.type_label != TypeLabel::A {
        return Err(Error::WrongType(rs.type_label.to_string()));
    }
    rs.check_dim(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.clone()));
    }
    let shifted = lambda + &rs.rho;
    let pairings: Vec<i64> = rs
        .positive_roots
        .iter()
        .map(|b| shifted.dot(&b.coroot_coeffs))
        .collect();
    for alpha in &rs.positive_roots {
        let n = shifted.dot(&alpha.coroot_coeffs);
        if n <= p {
            continue;
        }
        let s = valuation(p, n);
        let ps = ppow(p, s);
        let a = (n / ps) % p;
        let b = n / (ps * p);
        let unit: Vec<usize> = (0..pairings.len())
            .filter(|&i| pairings[i] == ps * p)
            .collect();
        let found = rs.positive_roots.iter().zip(&pairings).any(|(beta0, &pb)| {
            if pb != a * ps {
                return false;
            }
            let rest: Vec<i64> = alpha
                .simple_coeffs
                .iter()
                .zip(&beta0.simple_coeffs)
                .map(|(x, y)| x - y)
                .collect();
            let in_r0 = rest.iter().all(|&c| c == 0)
                || rs.positive_roots.iter().any(|g| g.simple_coeffs == rest)
                || rs
                    .positive_roots
                    .iter()
                    .any(|g| g.simple_coeffs.iter().zip(&rest).all(|(x, y)| *x == -y));
            in_r0 && sums_to(rs, &unit, 0, b, &rest)
        });
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Can `target` be written as a sum of exactly `count` roots drawn, with
/// repetition, from `candidates[from..]`?
fn sums_to(
    rs: &RootSystemData,
    candidates: &[usize],
    from: usize,
    count: i64,
    target: &[i64],
) -> bool {
    if target.iter().any(|&c| c < 0) {
        return false;
    }
    if count == 0 {
        return target.iter().all(|&c| c == 0);
    }
    // each positive root has height at least one
    if target.iter().sum::<i64>() < count {
        return false;
    }
    for k in from..candidates.len() {
        let root = &rs.positive_roots[candidates[k]];
        let next: Vec<i64> = target
            .iter()
            .zip(&root.simple_coeffs)
            .map(|(t, c)| t - c)
            .collect();
        if sums_to(rs, candidates, k, count - 1, &next) {
            return true;
        }
    }
    false
}

/// `<lambda + rho, alpha_0^vee> <= p`, which forces `nabla(lambda)` to be simple.
pub fn trivially_simple(rs: &RootSystemData, p: i64, lambda: &Weight) -> bool {
    rs.alpha0_pairing(&(lambda + &rs.rho)) <= p
}

pub fn bound_smallp(rs: &RootSystemData, p: i64, r: u32, lambda: &Weight) -> bool {
    rs.alpha0_pairing(lambda) <= ppow(p, r)
}

pub fn bound_lambdaalpha0(rs: &RootSystemData, p: i64, r: u32, lambda: &Weight) -> bool {
    let h = rs.coxeter_h;
    p >= h && rs.alpha0_pairing(lambda) < ppow(p, r).saturating_mul(p - h + 1)
}

/// Closed interval of admissible `<mu, alpha_0^vee>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

pub fn mu_window(rs: &RootSystemData, p: i64, r: u32, lambda: &Weight) -> Result<Window> {
    let h = rs.coxeter_h;
    if p < h - 1 {
        return Err(Error::PTooSmall { p, h });
    }
    let q = ppow(p, r);
    let l = rs.alpha0_pairing(lambda);
    let shift = (q - 1) * (h - 1);
    Ok(Window {
        lo: shift + 2 * q * (p - h + 1) - l,
        hi: l + shift,
    })
}

pub fn bound_bignu(rs: &RootSystemData, lambda: &Weight, nu: &Weight) -> bool {
    let l = rs.alpha0_pairing(lambda);
    nu.coords().iter().all(|&c| l <= c + 1)
}

pub fn bound_storlambda1(rs: &RootSystemData, p: i64, r: u32, lambda: &Weight) -> bool {
    let q = ppow(p, r);
    let (low, high) = lambda.digits(q);
    let l = rs.alpha0_pairing(&low);
    high.coords().iter().all(|&c| l <= q.saturating_mul(c + 1))
}

/// `<lambda, alpha_0^vee> < p^r (p - h + 1)`, so that `L(lambda)` equals `nabla^(p,r)(lambda)`.
pub fn nablapr_is_simple(rs: &RootSystemData, p: i64, r: u32, lambda: &Weight) -> bool {
    rs.alpha0_pairing(lambda) < ppow(p, r).saturating_mul(p - rs.coxeter_h + 1)
}

fn base_reason(rs: &RootSystemData, p: i64, r: u32, lambda: &Weight) -> GuaranteeReason {
    let pairing = rs.alpha0_pairing(lambda);
    if bound_smallp(rs, p, r, lambda) {
        return GuaranteeReason::SmallP {
            pairing,
            bound: ppow(p, r),
        };
    }
    if bound_lambdaalpha0(rs, p, r, lambda) {
        return GuaranteeReason::LambdaAlpha0 {
            pairing,
            bound: ppow(p, r).saturating_mul(p - rs.coxeter_h + 1),
        };
    }
    GuaranteeReason::None
}

pub fn good_filtration_guarantee(
    rs: &RootSystemData,
    p: i64,
    r: u32,
    lambda: &Weight,
) -> GuaranteeReason {
    let base = base_reason(rs, p, r, lambda);
    if !base.is_none() {
        return base;
    }
    if bound_storlambda1(rs, p, r, lambda) {
        let (low, high) = lambda.digits(ppow(p, r));
        return GuaranteeReason::StorLambda1 { low, high };
    }
    if r > 1 && lambda.is_restricted(ppow(p, r)) {
        let mut rest = lambda.clone();
        let mut digits = Vec::new();
        for _ in 0..r {
            let (digit, high) = rest.digits(p);
            let reason = base_reason(rs, p, 1, &digit);
            if reason.is_none() {
                return GuaranteeReason::None;
            }
            digits.push(DigitCertificate { digit, reason });
            rest = high;
        }
        return GuaranteeReason::DigitInduction { digits };
    }
    GuaranteeReason::None
}
