//! Signed-permutation (type C) combinatorics on compositions.
//!
//! Generators are numbered `1..=n`: `s_j` for `j < n` swaps entries `j` and `j+1`
//! (1-based), `s_n` negates the last entry. The deformed action freezes `s_n` on
//! entries with modulus at most `r_R`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use masep_algebra::{vars, LaurentPoly, Rational, Vars};
use num_traits::One;

pub type Composition = Vec<i32>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("not a partition: {0:?}")]
    NotPartition(Vec<i32>),
    #[error("{0:?} is not in the orbit of {1:?}")]
    NotInOrbit(Vec<i32>, Vec<i32>),
}

/// Applies `s_j` in place. Returns false when the generator acts trivially.
pub fn apply_generator(j: usize, lambda: &mut [i32], deformed: Option<i32>) -> bool {
    let n = lambda.len();
    assert!(j >= 1 && j <= n, "generator index out of range");
    if j < n {
        if lambda[j - 1] == lambda[j] {
            return false;
        }
        lambda.swap(j - 1, j);
        true
    } else {
        let v = lambda[n - 1];
        if v == 0 || deformed.is_some_and(|rr| v.abs() <= rr) {
            return false;
        }
        lambda[n - 1] = -v;
        true
    }
}

/// All distinct images under the (possibly deformed) group, sorted.
pub fn orbit(lambda: &[i32], deformed: Option<i32>) -> Vec<Composition> {
    let n = lambda.len();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(lambda.to_vec());
    queue.push_back(lambda.to_vec());
    while let Some(mu) = queue.pop_front() {
        for j in 1..=n {
            let mut nu = mu.clone();
            if apply_generator(j, &mut nu, deformed) && seen.insert(nu.clone()) {
                queue.push_back(nu);
            }
        }
    }
    seen.into_iter().collect()
}

/// Weakly decreasing rearrangement of the moduli.
pub fn dominant(lambda: &[i32]) -> Composition {
    let mut d: Vec<i32> = lambda.iter().map(|x| x.abs()).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// Dominant representative for the deformed action: frozen entries keep their sign.
pub fn dominant_deformed(lambda: &[i32], rr: i32) -> Composition {
    let mut d: Vec<i32> = lambda
        .iter()
        .map(|&x| if x.abs() > rr { x.abs() } else { x })
        .collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// Weakly increasing, nonpositive representative (frozen entries keep their sign).
pub fn antidominant_rep(lambda: &[i32], deformed: Option<i32>) -> Composition {
    let rr = deformed.unwrap_or(-1);
    let mut d: Vec<i32> = lambda
        .iter()
        .map(|&x| if x.abs() > rr { -x.abs() } else { x })
        .collect();
    d.sort_unstable();
    d
}

fn check_len(a: &[i32], b: &[i32]) -> Result<(), WeylError> {
    if a.len() != b.len() {
        Err(WeylError::LengthMismatch(a.len(), b.len()))
    } else {
        Ok(())
    }
}

/// `mu <= lambda` in dominance: all partial sums of `lambda - mu` are nonnegative.
pub fn dominance_leq(mu: &[i32], lambda: &[i32]) -> Result<bool, WeylError> {
    check_len(mu, lambda)?;
    let mut s = 0i64;
    for (m, l) in mu.iter().zip(lambda) {
        s += (*l - *m) as i64;
        if s < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `lambda ⪰ mu`: `lambda^+ > mu^+` in dominance, or equal dominant parts and `lambda >= mu`.
pub fn order_succeq(lambda: &[i32], mu: &[i32]) -> Result<bool, WeylError> {
    check_len(lambda, mu)?;
    let (lp, mp) = (dominant(lambda), dominant(mu));
    if lp == mp {
        dominance_leq(mu, lambda)
    } else {
        dominance_leq(&mp, &lp)
    }
}

/// Shortest word with sign and permutation data.
///
/// `word` is applied left to right to the antidominant representative: the first
/// entry acts first. After applying it, `lambda[i] = signs[i] * delta[perm[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedWord {
    pub word: Vec<usize>,
    pub signs: Vec<i8>,
    pub perm: Vec<usize>,
}

impl SignedWord {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// Number of sign changes `s_n` in the word.
    pub fn minus_count(&self) -> usize {
        let n = self.signs.len();
        self.word.iter().filter(|&&j| j == n).count()
    }

    pub fn apply(&self, delta: &[i32], deformed: Option<i32>) -> Composition {
        let mut mu = delta.to_vec();
        for &j in &self.word {
            apply_generator(j, &mut mu, deformed);
        }
        mu
    }
}

/// Shortest path in the orbit graph from `from` to `to`; generators explored in
/// increasing order so ties resolve to the lexicographically smallest word.
fn shortest_word(from: &[i32], to: &[i32], deformed: Option<i32>) -> Option<Vec<usize>> {
    let n = from.len();
    let mut parent: BTreeMap<Composition, (Composition, usize)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut seen = BTreeSet::new();
    seen.insert(from.to_vec());
    queue.push_back(from.to_vec());
    while let Some(mu) = queue.pop_front() {
        if mu == to {
            let mut word = Vec::new();
            let mut cur = mu;
            while let Some((p, j)) = parent.get(&cur) {
                word.push(*j);
                cur = p.clone();
            }
            word.reverse();
            return Some(word);
        }
        for j in 1..=n {
            let mut nu = mu.clone();
            if apply_generator(j, &mut nu, deformed) && seen.insert(nu.clone()) {
                parent.insert(nu.clone(), (mu.clone(), j));
                queue.push_back(nu);
            }
        }
    }
    None
}

fn signed_word(word: Vec<usize>, n: usize) -> SignedWord {
    // track labels +1..+n through the same moves, without the triviality test
    let mut labels: Vec<i32> = (1..=n as i32).collect();
    for &j in &word {
        if j < n {
            labels.swap(j - 1, j);
        } else {
            labels[n - 1] = -labels[n - 1];
        }
    }
    SignedWord {
        word,
        signs: labels.iter().map(|l| l.signum() as i8).collect(),
        perm: labels
            .iter()
            .map(|l| (l.unsigned_abs() - 1) as usize)
            .collect(),
    }
}

/// Antidominant representative and a shortest word reaching `lambda` from it.
pub fn antidominant(lambda: &[i32], deformed: Option<i32>) -> (Composition, SignedWord) {
    let delta = antidominant_rep(lambda, deformed);
    let word = shortest_word(&delta, lambda, deformed)
        .expect("lambda lies in the orbit of its representative");
    (delta, signed_word(word, lambda.len()))
}

/// `(ell, m)`: length of the shortest word and number of sign changes in it.
pub fn length_and_minus(mu: &[i32], deformed: Option<i32>) -> (usize, usize) {
    let (_, w) = antidominant(mu, deformed);
    (w.length(), w.minus_count())
}

/// `rho(lambda) = w rho` with `w` shortest such that `lambda = w lambda^+`, `rho = (n-1, ..., 0)`.
pub fn rho(lambda: &[i32]) -> Vec<i32> {
    let n = lambda.len();
    let plus = dominant(lambda);
    let word = shortest_word(&plus, lambda, None).expect("orbit contains lambda");
    let mut r: Vec<i32> = (0..n as i32).rev().collect();
    for j in word {
        if j < n {
            r.swap(j - 1, j);
        } else {
            r[n - 1] = -r[n - 1];
        }
    }
    r
}

pub fn epsilon(lambda: &[i32]) -> Vec<u8> {
    lambda.iter().map(|&x| u8::from(x >= 0)).collect()
}

/// Spectral data of a composition.
#[derive(Clone, Debug)]
pub struct SpectralVector {
    pub rho: Vec<i32>,
    pub eps: Vec<u8>,
    /// `y_i` as monomials in `(q, t, t0, tn)`.
    pub y_values: Vec<LaurentPoly>,
}

impl SpectralVector {
    /// Exponents `(q, t, t0tn)` of `y_i`.
    pub fn exponents(&self, lambda: &[i32], i: usize) -> (i32, i32, i32) {
        let n = lambda.len() as i32;
        (
            lambda[i],
            n - 1 - i as i32 + self.rho[i],
            self.eps[i] as i32,
        )
    }
}

pub fn spectral_vars() -> Vars {
    vars(&["q", "t", "t0", "tn"])
}

pub fn rho_and_spectral(lambda: &[i32]) -> SpectralVector {
    let rho = rho(lambda);
    let eps = epsilon(lambda);
    let n = lambda.len() as i32;
    let v = spectral_vars();
    let y_values = (0..lambda.len())
        .map(|i| {
            let e = eps[i] as i32;
            LaurentPoly::monomial(
                v.clone(),
                vec![lambda[i], n - 1 - i as i32 + rho[i], e, e],
                Rational::one(),
            )
        })
        .collect();
    SpectralVector { rho, eps, y_values }
}

/// `(mu^c, mu^pi)`: entries with modulus at most `r_L` kept in order, and zeroed in place.
pub fn mu_split(mu: &[i32], rl: i32) -> (Composition, Composition) {
    let c = mu.iter().copied().filter(|x| x.abs() <= rl).collect();
    let p = mu
        .iter()
        .map(|&x| if x.abs() <= rl { 0 } else { x })
        .collect();
    (c, p)
}

/// Conjugate partition (column lengths); zero parts are ignored.
pub fn conjugate(lambda: &[i32]) -> Result<Vec<i32>, WeylError> {
    if lambda.windows(2).any(|w| w[0] < w[1]) || lambda.iter().any(|&x| x < 0) {
        return Err(WeylError::NotPartition(lambda.to_vec()));
    }
    let top = lambda.first().copied().unwrap_or(0);
    Ok((1..=top)
        .map(|k| lambda.iter().filter(|&&x| x >= k).count() as i32)
        .collect())
}

/// Dominant weights of length `n` with parts at most `r`: one per sector.
pub fn sectors(n: usize, r: i32) -> Vec<Composition> {
    generalised_sectors(n, r, 0)
}

/// Generalised dominant weights: weakly decreasing, entries in `[-r_R, r]`.
pub fn generalised_sectors(n: usize, r: i32, rr: i32) -> Vec<Composition> {
    fn rec(n: usize, hi: i32, lo: i32, cur: &mut Vec<i32>, out: &mut Vec<Composition>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in (lo..=hi).rev() {
            cur.push(v);
            rec(n, v, lo, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, r, -rr, &mut Vec::new(), &mut out);
    out
}
