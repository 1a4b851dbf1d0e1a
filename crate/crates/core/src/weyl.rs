//! The finite Weyl group: enumeration, ordinary and dot actions, dominant
//! representatives for the dot action, and the `w.0 + p * beta` linkage scan.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::rootsys::{RootSystemData, Weight};

pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

/// A Weyl group element acting on fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    /// Simple reflection indices; the element is `s_{word[0]} s_{word[1]} ...`.
    pub word: Vec<usize>,
    /// Row-major `rank x rank` matrix.
    pub matrix: Vec<i64>,
    pub sign: i64,
}

fn identity_matrix(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn reflection_matrix(rs: &RootSystemData, i: usize) -> Vec<i64> {
    let n = rs.rank;
    let mut m = identity_matrix(n);
    // (s_i v)_j = v_j - v_i * C[i][j]
    for j in 0..n {
        m[j * n + i] -= rs.cartan[i][j];
    }
    m
}

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            word: Vec::new(),
            matrix: identity_matrix(rank),
            sign: 1,
        }
    }

    pub fn from_word(rs: &RootSystemData, word: &[usize]) -> Self {
        let n = rs.rank;
        let matrix = word.iter().fold(identity_matrix(n), |acc, &i| {
            mat_mul(n, &acc, &reflection_matrix(rs, i))
        });
        WeylElement {
            word: word.to_vec(),
            matrix,
            sign: if word.len().is_multiple_of(2) { 1 } else { -1 },
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn act(&self, lambda: &Weight) -> Weight {
        let n = lambda.rank();
        Weight::new(
            (0..n)
                .map(|i| (0..n).map(|j| self.matrix[i * n + j] * lambda[j]).sum())
                .collect(),
        )
    }

    /// `w . lambda = w(lambda + rho) - rho`.
    pub fn dot_act(&self, rs: &RootSystemData, lambda: &Weight) -> Result<Weight> {
        rs.check_dim(lambda)?;
        let shifted = self.act(&(lambda + &rs.rho));
        Ok(&shifted - &rs.rho)
    }

    /// Integer determinant (Bareiss elimination).
    pub fn determinant(&self) -> i64 {
        let n = (1..).find(|k| k * k >= self.matrix.len()).unwrap();
        let mut a: Vec<i128> = self.matrix.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                let Some(r) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    a.swap(k * n + j, r * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] =
                        (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        (sign * a[n * n - 1]) as i64
    }
}

/// The full Weyl group, listed in breadth-first order (identity first).
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    /// `w . 0` for each element, in the same order.
    pub dot_zero: Vec<Weight>,
}

/// Enumerates `W` by breadth-first closure over the simple reflections.
pub fn enumerate(rs: &RootSystemData) -> Result<Vec<WeylElement>> {
    enumerate_capped(rs, DEFAULT_GROUP_CAP)
}

pub fn enumerate_capped(rs: &RootSystemData, cap: u64) -> Result<Vec<WeylElement>> {
    if rs.weyl_order > cap {
        return Err(Error::GroupTooLarge {
            order: rs.weyl_order,
            cap,
        });
    }
    let n = rs.rank;
    let reflections: Vec<Vec<i64>> = (0..n).map(|i| reflection_matrix(rs, i)).collect();
    let id = WeylElement::identity(n);
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(id.matrix.clone());
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        let g = out[head].clone();
        head += 1;
        for (i, s) in reflections.iter().enumerate() {
            let m = mat_mul(n, s, &g.matrix);
            if seen.insert(m.clone()) {
                let mut word = Vec::with_capacity(g.word.len() + 1);
                word.push(i);
                word.extend_from_slice(&g.word);
                out.push(WeylElement {
                    word,
                    matrix: m,
                    sign: -g.sign,
                });
            }
        }
    }
    Ok(out)
}

impl WeylGroup {
    pub fn new(rs: &RootSystemData) -> Result<Self> {
        let elements = enumerate(rs)?;
        let zero = Weight::zero(rs.rank);
        let dot_zero = elements
            .iter()
            .map(|w| w.dot_act(rs, &zero))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeylGroup { elements, dot_zero })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The longest element.
    pub fn longest(&self) -> &WeylElement {
        self.elements.last().expect("group is non-empty")
    }

    /// Is `sigma = w.0 + p * beta` for some `w` and some `beta` in the root lattice?
    pub fn linked_to_zero(&self, rs: &RootSystemData, p: i64, sigma: &Weight) -> Result<bool> {
        Ok(self.linkage_witness(rs, p, sigma)?.is_some())
    }

    /// The first `(w index, beta coefficients)` exhibiting `sigma = w.0 + p * beta`.
    pub fn linkage_witness(
        &self,
        rs: &RootSystemData,
        p: i64,
        sigma: &Weight,
    ) -> Result<Option<(usize, Vec<i64>)>> {
        rs.check_dim(sigma)?;
        for (idx, w0) in self.dot_zero.iter().enumerate() {
            let diff = sigma - w0;
            if let Some(q) = diff.div_exact(p) {
                if let Some(beta) = rs.root_lattice_member(&q)? {
                    return Ok(Some((idx, beta)));
                }
            }
        }
        Ok(None)
    }
}

/// All pairs `(w, w.0)`.
pub fn w_dot_zero_set(rs: &RootSystemData) -> Result<Vec<(WeylElement, Weight)>> {
    let g = WeylGroup::new(rs)?;
    Ok(g.elements.into_iter().zip(g.dot_zero).collect())
}

pub fn dot_act(rs: &RootSystemData, w: &WeylElement, lambda: &Weight) -> Result<Weight> {
    w.dot_act(rs, lambda)
}

pub fn linked_to_zero(rs: &RootSystemData, p: i64, sigma: &Weight) -> Result<bool> {
    WeylGroup::new(rs)?.linked_to_zero(rs, p, sigma)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DotDominantResult {
    Singular,
    Regular {
        sign: i64,
        dominant: Weight,
        /// `witness . input = dominant`
        witness: WeylElement,
    },
}

/// Is `mu + rho` on a wall, i.e. orthogonal to some positive coroot?
pub fn is_dot_singular(rs: &RootSystemData, mu: &Weight) -> bool {
    let shifted = mu + &rs.rho;
    rs.positive_roots
        .iter()
        .any(|a| shifted.dot(&a.coroot_coeffs) == 0)
}

/// Reflects `mu + rho` upward through simple walls until it is dominant.
pub fn dominant_representative_dot(rs: &RootSystemData, mu: &Weight) -> Result<DotDominantResult> {
    rs.check_dim(mu)?;
    if is_dot_singular(rs, mu) {
        return Ok(DotDominantResult::Singular);
    }
    let mut v = mu + &rs.rho;
    // applied reflections, in order of application
    let mut applied = Vec::new();
    while let Some(i) = (0..rs.rank).find(|&i| v[i] < 0) {
        v = rs.reflect(&v, i);
        applied.push(i);
    }
    applied.reverse();
    let witness = WeylElement::from_word(rs, &applied);
    Ok(DotDominantResult::Regular {
        sign: witness.sign,
        dominant: &v - &rs.rho,
        witness,
    })
}

/// Sign and dominant weight only, without materializing the witness.
pub fn dot_dominant_sign(rs: &RootSystemData, mu: &Weight) -> Option<(i64, Weight)> {
    let mut v = mu + &rs.rho;
    if rs
        .positive_roots
        .iter()
        .any(|a| v.dot(&a.coroot_coeffs) == 0)
    {
        return None;
    }
    let mut sign = 1;
    while let Some(i) = (0..rs.rank).find(|&i| v[i] < 0) {
        v = rs.reflect(&v, i);
        sign = -sign;
    }
    Some((sign, &v - &rs.rho))
}
