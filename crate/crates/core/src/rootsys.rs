//! Root-system data for the irreducible types A, B, C, D and G2.
//!
//! Everything is built from the Cartan matrix in Bourbaki numbering. Weights
//! live in the fundamental-weight basis, roots carry both their simple-root
//! expansion and the simple-coroot expansion of their coroot, so that the
//! pairing `<lambda, alpha^vee>` is a plain dot product.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integral weight, written in the fundamental-weight basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The fundamental weight `omega_i` (zero-based index).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// All coordinates lie in `[0, q - 1]`.
    pub fn is_restricted(&self, q: i64) -> bool {
        self.0.iter().all(|&c| (0..q).contains(&c))
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|&c| c * k).collect())
    }

    pub fn checked_scale(&self, k: i64) -> Result<Weight> {
        self.0
            .iter()
            .map(|&c| c.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }

    pub fn checked_add(&self, other: &Weight) -> Result<Weight> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_add(b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }

    /// Splits a dominant weight as `low + q * high` with `low` restricted at `q`.
    pub fn digits(&self, q: i64) -> (Weight, Weight) {
        let low = self.0.iter().map(|&c| c.rem_euclid(q)).collect();
        let high = self.0.iter().map(|&c| c.div_euclid(q)).collect();
        (Weight(low), Weight(high))
    }

    /// `self / q` when every coordinate is divisible by `q`.
    pub fn div_exact(&self, q: i64) -> Option<Weight> {
        if self.0.iter().all(|&c| c % q == 0) {
            Some(Weight(self.0.iter().map(|&c| c / q).collect()))
        } else {
            None
        }
    }

    pub fn dot(&self, coeffs: &[i64]) -> i64 {
        self.0.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }
}

impl Index<usize> for Weight {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight(v.to_vec())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Parses `1,2,1`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Err(Error::Invalid("empty weight".into()));
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("bad weight coordinate `{t}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            TypeLabel::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for TypeLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(TypeLabel::A),
            "B" => Ok(TypeLabel::B),
            "C" => Ok(TypeLabel::C),
            "D" => Ok(TypeLabel::D),
            "G" => Ok(TypeLabel::G),
            other => Err(Error::UnsupportedType {
                label: other.to_string(),
                rank: 0,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthClass {
    Short,
    Long,
    /// Simply-laced systems: every root counts as both short and long.
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    /// Expansion in the simple roots.
    pub simple_coeffs: Vec<i64>,
    /// Expansion of the coroot in the simple coroots.
    pub coroot_coeffs: Vec<i64>,
    /// Fundamental-weight coordinates.
    pub weight: Weight,
    /// `<alpha, alpha> / 2`, with short roots normalized to 1.
    pub half_norm: i64,
    pub length_class: LengthClass,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple_coeffs.iter().sum()
    }

    pub fn is_short(&self) -> bool {
        matches!(self.length_class, LengthClass::Short | LengthClass::Both)
    }

    pub fn is_long(&self) -> bool {
        matches!(self.length_class, LengthClass::Long | LengthClass::Both)
    }
}

/// Immutable table describing one irreducible root system.
#[derive(Debug, Clone)]
pub struct RootSystemData {
    pub type_label: TypeLabel,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`; row `i` is `alpha_i` in weight coordinates.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots ordered by height, then lexicographically; simple roots first.
    pub positive_roots: Vec<Root>,
    pub alpha0_index: usize,
    pub rho: Weight,
    pub coxeter_h: i64,
    pub weyl_order: u64,
    /// `<alpha_i, alpha_i> / 2` for the simple roots.
    symmetrizer: Vec<i64>,
    /// `inv_denom * cartan^{-1}`, an integer matrix.
    inv_scaled: Vec<Vec<i64>>,
    inv_denom: i64,
}

fn cartan_matrix(label: TypeLabel, n: usize) -> Option<(Vec<Vec<i64>>, Vec<i64>)> {
    let ok = match label {
        TypeLabel::A => n >= 1,
        TypeLabel::B | TypeLabel::C => n >= 2,
        TypeLabel::D => n >= 4,
        TypeLabel::G => n == 2,
    };
    if !ok {
        return None;
    }
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut d = vec![1i64; n];
    match label {
        TypeLabel::A => {
            for i in 0..n - 1 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        }
        TypeLabel::B => {
            // alpha_n short
            for i in 0..n - 1 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
                d[i] = 2;
            }
            c[n - 2][n - 1] = -2;
        }
        TypeLabel::C => {
            // alpha_n long
            for i in 0..n - 1 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            c[n - 1][n - 2] = -2;
            d[n - 1] = 2;
        }
        TypeLabel::D => {
            for i in 0..n - 2 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
        }
        TypeLabel::G => {
            // alpha_1 short, alpha_2 long
            c[0][1] = -1;
            c[1][0] = -3;
            d = vec![1, 3];
        }
    }
    Some((c, d))
}

fn weyl_order_formula(label: TypeLabel, n: usize) -> u64 {
    let fact = |k: u64| (1..=k).product::<u64>();
    match label {
        TypeLabel::A => fact(n as u64 + 1),
        TypeLabel::B | TypeLabel::C => (1u64 << n) * fact(n as u64),
        TypeLabel::D => (1u64 << (n - 1)) * fact(n as u64),
        TypeLabel::G => 12,
    }
}

/// Exact inverse of an integer matrix, returned as `(denominator, numerators)`.
fn scaled_inverse(m: &[Vec<i64>]) -> (i64, Vec<Vec<i64>>) {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i64>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Ratio<i64>> = row.iter().map(|&x| Ratio::from_integer(x)).collect();
            r.extend((0..n).map(|j| Ratio::from_integer(i64::from(i == j))));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| a[r][col] != Ratio::from_integer(0))
            .expect("Cartan matrix is invertible");
        a.swap(col, piv);
        let inv = Ratio::from_integer(1) / a[col][col];
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && a[r][col] != Ratio::from_integer(0) {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    let inv: Vec<Vec<Ratio<i64>>> = a.into_iter().map(|r| r[n..].to_vec()).collect();
    let denom = inv
        .iter()
        .flatten()
        .fold(1i64, |acc, x| lcm(acc, *x.denom()));
    let scaled = inv
        .iter()
        .map(|r| r.iter().map(|x| x.numer() * (denom / x.denom())).collect())
        .collect();
    (denom, scaled)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Builds the root-system table for `(label, rank)`.
pub fn build(label: TypeLabel, rank: usize) -> Result<RootSystemData> {
    let (cartan, symmetrizer) = cartan_matrix(label, rank).ok_or(Error::UnsupportedType {
        label: label.to_string(),
        rank,
    })?;
    let n = rank;

    // close the simple roots under the simple reflections
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let k: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
            let mut refl = beta.clone();
            refl[i] -= k;
            if refl.iter().all(|&c| c >= 0)
                && refl.iter().any(|&c| c > 0)
                && seen.insert(refl.clone())
            {
                queue.push_back(refl);
            }
        }
    }
    let mut coeff_list: Vec<Vec<i64>> = seen.into_iter().collect();
    coeff_list.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });

    let min_d = *symmetrizer.iter().min().unwrap();
    let max_d = *symmetrizer.iter().max().unwrap();
    let positive_roots: Vec<Root> = coeff_list
        .into_iter()
        .map(|beta| {
            // <beta, beta> = sum_ij beta_i beta_j <alpha_i, alpha_j>, <alpha_i, alpha_j> = C_ij d_j
            let norm: i64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| beta[i] * beta[j] * cartan[i][j] * symmetrizer[j])
                .sum();
            let half_norm = norm / 2;
            let coroot_coeffs = (0..n)
                .map(|j| {
                    let num = beta[j] * symmetrizer[j];
                    debug_assert_eq!(num % half_norm, 0);
                    num / half_norm
                })
                .collect();
            let weight = Weight(
                (0..n)
                    .map(|j| (0..n).map(|i| beta[i] * cartan[i][j]).sum())
                    .collect(),
            );
            let length_class = if min_d == max_d {
                LengthClass::Both
            } else if half_norm == min_d {
                LengthClass::Short
            } else {
                LengthClass::Long
            };
            Root {
                simple_coeffs: beta,
                coroot_coeffs,
                weight,
                half_norm,
                length_class,
            }
        })
        .collect();

    let alpha0_index = positive_roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_short())
        .max_by_key(|(_, r)| r.height())
        .map(|(i, _)| i)
        .unwrap();

    let rho = Weight(vec![1; n]);
    let coxeter_h = rho.dot(&positive_roots[alpha0_index].coroot_coeffs) + 1;
    let (inv_denom, inv_scaled) = scaled_inverse(&cartan);

    Ok(RootSystemData {
        type_label: label,
        rank,
        cartan,
        positive_roots,
        alpha0_index,
        rho,
        coxeter_h,
        weyl_order: weyl_order_formula(label, rank),
        symmetrizer,
        inv_scaled,
        inv_denom,
    })
}

impl RootSystemData {
    pub fn label(&self) -> String {
        format!("{}{}", self.type_label, self.rank)
    }

    pub fn alpha0(&self) -> &Root {
        &self.positive_roots[self.alpha0_index]
    }

    pub fn simple_root(&self, i: usize) -> &Root {
        // the simple roots are the height-one roots, listed first in index order
        &self.positive_roots[i]
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn check_dim(&self, w: &Weight) -> Result<()> {
        if w.rank() == self.rank {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank,
                got: w.rank(),
            })
        }
    }

    /// `<lambda, alpha^vee>`.
    pub fn pairing(&self, lambda: &Weight, alpha: &Root) -> Result<i64> {
        self.check_dim(lambda)?;
        Ok(lambda.dot(&alpha.coroot_coeffs))
    }

    /// `<lambda, alpha_0^vee>`; assumes a weight of matching rank.
    pub fn alpha0_pairing(&self, lambda: &Weight) -> i64 {
        lambda.dot(&self.alpha0().coroot_coeffs)
    }

    /// Simple-root expansion of `v`, scaled by the Cartan determinant denominator.
    fn scaled_root_coeffs(&self, v: &Weight) -> Vec<i64> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| v[j] * self.inv_scaled[j][i]).sum())
            .collect()
    }

    /// Integral simple-root coefficients of `v`, if `v` lies in the root lattice.
    pub fn root_lattice_member(&self, v: &Weight) -> Result<Option<Vec<i64>>> {
        self.check_dim(v)?;
        let scaled = self.scaled_root_coeffs(v);
        if scaled.iter().all(|c| c % self.inv_denom == 0) {
            Ok(Some(
                scaled.into_iter().map(|c| c / self.inv_denom).collect(),
            ))
        } else {
            Ok(None)
        }
    }

    /// Simple-root coefficients of `lambda - mu` when `mu <= lambda`.
    pub fn dominance_leq(&self, mu: &Weight, lambda: &Weight) -> Result<Option<Vec<i64>>> {
        self.check_dim(mu)?;
        self.check_dim(lambda)?;
        let diff = lambda - mu;
        Ok(self
            .root_lattice_member(&diff)?
            .filter(|c| c.iter().all(|&x| x >= 0)))
    }

    /// A linear functional that is strictly positive on every simple root,
    /// so it strictly increases along the dominance order.
    pub fn height_scaled(&self, v: &Weight) -> i64 {
        self.scaled_root_coeffs(v).iter().sum()
    }

    /// Ordinary action of the simple reflection `s_i`.
    pub fn reflect(&self, lambda: &Weight, i: usize) -> Weight {
        let k = lambda[i];
        if k == 0 {
            return lambda.clone();
        }
        Weight(
            lambda
                .0
                .iter()
                .zip(&self.cartan[i])
                .map(|(x, c)| x - k * c)
                .collect(),
        )
    }

    /// The dominant weight in the `W`-orbit of `lambda` (ordinary action).
    pub fn dominant_conjugate(&self, lambda: &Weight) -> Weight {
        let mut v = lambda.clone();
        while let Some(i) = (0..self.rank).find(|&i| v[i] < 0) {
            v = self.reflect(&v, i);
        }
        v
    }

    /// The full `W`-orbit of `lambda` under the ordinary action, sorted.
    pub fn orbit(&self, lambda: &Weight) -> Vec<Weight> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.clone());
        queue.push_back(lambda.clone());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank {
                let r = self.reflect(&v, i);
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// `-w_0(lambda)`.
    pub fn neg_w0(&self, lambda: &Weight) -> Weight {
        let neg = -lambda;
        self.dominant_conjugate(&neg)
    }

    /// All dominant weights with every coordinate in `[0, bound]`, lexicographic order.
    pub fn dominant_box(&self, bound: i64) -> Vec<Weight> {
        if bound < 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.rank];
        loop {
            out.push(Weight(cur.clone()));
            let mut i = self.rank;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < bound {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// The restricted weights `X_r` for `q = p^r`, lexicographic order.
    pub fn restricted_weights(&self, q: i64) -> Vec<Weight> {
        self.dominant_box(q - 1)
    }

    /// Dominant weights with `<lambda, alpha_0^vee> <= cap`, lexicographic order.
    pub fn dominant_with_alpha0_at_most(&self, cap: i64) -> Vec<Weight> {
        if cap < 0 {
            return Vec::new();
        }
        // every simple coroot occurs in alpha_0^vee with coefficient >= 1
        self.dominant_box(cap)
            .into_iter()
            .filter(|w| self.alpha0_pairing(w) <= cap)
            .collect()
    }
}
