//! The `S_{2k−1}` profile behind `N_k`, and the closed-form bounds on `f`, `F` and `G`.
//!
//! Logarithms are natural. Integer-valued bounds are exact; the rest are `f64`.

use std::collections::BTreeSet;
use std::f64::consts::E;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// `α`, `β`, `U`, `V` and `L` of a permutation of `S_{2k−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileS2kMinus1 {
    pub k: usize,
    pub p: Permutation,
    /// Sum of the first `k − 1` terms.
    pub alpha: u64,
    /// Sum of the last `k − 1` terms.
    pub beta: u64,
    /// `{(k−2)α} ∪ {α − p_i : i < k}`.
    pub u: BTreeSet<u64>,
    /// `{(k−2)β} ∪ {β − p_i : i > k}`.
    pub v: BTreeSet<u64>,
    /// `max lcm(a, b)` over `a ∈ U`, `b ∈ V`.
    pub l: u64,
}

fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidSpec(format!("k must be at least 3, got {k}")));
    }
    Ok(())
}

fn side_set(k: usize, terms: &[u64]) -> (u64, BTreeSet<u64>) {
    let sum: u64 = terms.iter().sum();
    let mut set: BTreeSet<u64> = terms.iter().map(|&x| sum - x).collect();
    set.insert((k as u64 - 2) * sum);
    (sum, set)
}

fn max_lcm(u: &BTreeSet<u64>, v: &BTreeSet<u64>) -> Result<u64> {
    let mut best = 0u64;
    for &a in u {
        for &b in v {
            let l = (a / a.gcd(&b))
                .checked_mul(b)
                .ok_or(Error::Overflow("lcm in profile"))?;
            best = best.max(l);
        }
    }
    Ok(best)
}

pub fn profile(p: &Permutation) -> Result<ProfileS2kMinus1> {
    let len = p.len();
    if len < 5 || len % 2 == 0 {
        return Err(Error::InvalidSpec(format!(
            "profile needs a permutation of odd length >= 5, got length {len}"
        )));
    }
    let k = len.div_ceil(2);
    let vals: Vec<u64> = p.values().iter().map(|&x| u64::from(x)).collect();
    let (alpha, u) = side_set(k, &vals[..k - 1]);
    let (beta, v) = side_set(k, &vals[k..]);
    let l = max_lcm(&u, &v)?;
    Ok(ProfileS2kMinus1 {
        k,
        p: p.clone(),
        alpha,
        beta,
        u,
        v,
        l,
    })
}

/// Largest `k` for which [`compute_nk`] enumerates every permutation of `S_{2k−1}`.
pub const NK_EXHAUSTIVE_MAX_K: usize = 5;
/// Largest `k` accepted by [`compute_nk`].
pub const NK_MAX_K: usize = 10;

/// `N_k = max L_p` over `S_{2k−1}`.
///
/// For `k <= NK_EXHAUSTIVE_MAX_K` every permutation is visited. Beyond that `L_p` is
/// maximised over pairs of disjoint `(k−1)`-sets (the first and last `k − 1` values),
/// which is all `L_p` depends on.
pub fn compute_nk(k: usize) -> Result<u64> {
    check_k(k)?;
    if k <= NK_EXHAUSTIVE_MAX_K {
        compute_nk_exhaustive(k)
    } else if k <= NK_MAX_K {
        compute_nk_by_sets(k)
    } else {
        Err(Error::OutOfRange {
            what: "k",
            value: k as u64,
            limit: format!("compute_nk supports k <= {NK_MAX_K}"),
        })
    }
}

/// `N_k` by visiting all `(2k−1)!` permutations.
pub fn compute_nk_exhaustive(k: usize) -> Result<u64> {
    check_k(k)?;
    if k > NK_EXHAUSTIVE_MAX_K + 1 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as u64,
            limit: format!("exhaustive enumeration is limited to k <= {}", NK_EXHAUSTIVE_MAX_K + 1),
        });
    }
    let m = 2 * k - 1;
    // split on the first value so the work parallelises with a deterministic result
    (1..=m as u64)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<u64> = (1..=m as u64).filter(|&x| x != first).collect();
            let mut best = 0;
            loop {
                let mut head = Vec::with_capacity(k - 1);
                head.push(first);
                head.extend_from_slice(&rest[..k - 2]);
                let (_, u) = side_set(k, &head);
                let (_, v) = side_set(k, &rest[k - 1..]);
                best = best.max(max_lcm(&u, &v)?);
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            Ok(best)
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

/// `N_k` over pairs of disjoint `(k−1)`-subsets of `{1..2k−1}`.
pub fn compute_nk_by_sets(k: usize) -> Result<u64> {
    check_k(k)?;
    if k > NK_MAX_K {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as u64,
            limit: format!("set enumeration is limited to k <= {NK_MAX_K}"),
        });
    }
    let m = 2 * k - 1;
    let subsets = combinations(m, k - 1);
    subsets
        .par_iter()
        .map(|a| {
            let (_, u) = side_set(k, a);
            let mut best = 0;
            for b in &subsets {
                if b.iter().any(|x| a.contains(x)) {
                    continue;
                }
                let (_, v) = side_set(k, b);
                best = best.max(max_lcm(&u, &v)?);
            }
            Ok(best)
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

fn combinations(m: usize, r: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut c: Vec<u64> = (1..=r as u64).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..r).rev().find(|&i| c[i] < (m - r + i + 1) as u64) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..r {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Lexicographic successor in place; false when `v` was the last permutation.
fn next_permutation(v: &mut [u64]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `9(k−2)(k²−k)²/4`, an upper bound on `N_k`.
pub fn nk_upper(k: usize) -> Result<u64> {
    check_k(k)?;
    let k = k as u64;
    let half = (k * k - k) / 2;
    9u64.checked_mul(k - 2)
        .and_then(|x| x.checked_mul(half))
        .and_then(|x| x.checked_mul(half))
        .ok_or(Error::Overflow("nk_upper"))
}

/// `(k−1)(3k−4)/2`, a lower bound on `f(k, 2)`.
pub fn f2_lower(k: usize) -> Result<u64> {
    check_k(k)?;
    let k = k as u64;
    (k - 1)
        .checked_mul(3 * k - 4)
        .map(|x| x / 2)
        .ok_or(Error::Overflow("f2_lower"))
}

/// `(2/k)·(e/(k−1))^(k−1)·n^(k−1)`, an upper bound on `F(k, ℓ, n)`.
pub fn f_upper(k: usize, n: usize) -> Result<f64> {
    check_k(k)?;
    let e = (k - 1) as i32;
    Ok(2.0 / k as f64 * (E / (k - 1) as f64).powi(e) * (n as f64).powi(e))
}

/// Smallest threshold accepted by [`f_lower`]: below it `ln f − 4 <= 0`.
pub const F_LOWER_MIN_F: u64 = 55;

/// `n/(f·(ln n − ln f + 2)) − f/(ln f − 4) + 1`, a lower bound on `F(k, ℓ, n)` given
/// `f = f(k, ℓ)`.
pub fn f_lower(n: usize, f: u64) -> Result<f64> {
    if f < F_LOWER_MIN_F {
        return Err(Error::Domain(format!(
            "f_lower needs ln f > 4, i.e. f >= {F_LOWER_MIN_F}; got f = {f}"
        )));
    }
    let (n, f) = (n as f64, f as f64);
    let d = n.ln() - f.ln() + 2.0;
    if n < 1.0 || d <= 0.0 {
        return Err(Error::Domain(format!(
            "f_lower needs ln n - ln f + 2 > 0; got n = {n}, f = {f}"
        )));
    }
    Ok(n / (f * d) - f / (f.ln() - 4.0) + 1.0)
}

/// `n/(18(ln n − ln 18 + 2)) − 6`, a lower bound on `G(3, 2, n)`.
pub fn g_lower(n: usize) -> Result<f64> {
    let x = n as f64;
    let d = x.ln() - 18f64.ln() + 2.0;
    if n == 0 || d <= 0.0 {
        return Err(Error::Domain(format!(
            "g_lower needs ln n - ln 18 + 2 > 0 (n >= 3); got n = {n}"
        )));
    }
    Ok(x / (18.0 * d) - 6.0)
}

/// `n²/18 + 7n/6`, an upper bound on `G(3, 2, n)`.
pub fn g_upper(n: usize) -> f64 {
    let n = n as f64;
    n * n / 18.0 + 7.0 * n / 6.0
}

/// `(a² + 5 − 4a)/(4a²)·n² + (a + 4)/(2a)·n`, bounding the monotone 2-additive triples
/// of [`two_run_permutation`](crate::constructions::two_run_permutation)`(n, a)`.
pub fn two_run_count_bound(n: usize, a: usize) -> Result<f64> {
    if a < 2 {
        return Err(Error::OutOfRange {
            what: "a",
            value: a as u64,
            limit: "a >= 2".into(),
        });
    }
    let (n, a) = (n as f64, a as f64);
    Ok((a * a + 5.0 - 4.0 * a) / (4.0 * a * a) * n * n + (a + 4.0) / (2.0 * a) * n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundValue {
    Integer(u64),
    Real(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub value: BoundValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub k: usize,
    pub ell: u32,
    pub n: Option<usize>,
    pub log_base: String,
    pub entries: Vec<BoundEntry>,
    /// Bounds that were requested but are undefined for these parameters.
    pub skipped: Vec<String>,
}

impl BoundReport {
    /// Every bound that applies to `(k, ℓ)` and, when given, `n`, the monotone
    /// variant and a known threshold `f`.
    pub fn compute(
        k: usize,
        ell: u32,
        n: Option<usize>,
        monotone: bool,
        f: Option<u64>,
    ) -> Result<Self> {
        check_k(k)?;
        let mut r = BoundReport {
            k,
            ell,
            n,
            log_base: "e".into(),
            entries: Vec::new(),
            skipped: Vec::new(),
        };
        r.int("Nk_upper", nk_upper(k)?);
        if k <= NK_MAX_K {
            r.int("Nk", compute_nk_by_sets(k)?);
        }
        if ell == 2 {
            r.int("f2_lower", f2_lower(k)?);
        }
        if let Some(n) = n {
            r.real("F_upper", f_upper(k, n)?);
            if let Some(f) = f {
                match f_lower(n, f) {
                    Ok(x) => r.real("F_lower", x),
                    Err(e) => r.skipped.push(format!("F_lower: {e}")),
                }
            }
            if monotone && k == 3 && ell == 2 {
                match g_lower(n) {
                    Ok(x) => r.real("G_lower", x),
                    Err(e) => r.skipped.push(format!("G_lower: {e}")),
                }
                r.real("G_upper", g_upper(n));
                for a in 2..=n.div_ceil(2).min(5) {
                    r.real(&format!("two_run_count_bound(a={a})"), two_run_count_bound(n, a)?);
                }
            }
        }
        Ok(r)
    }

    pub fn get(&self, name: &str) -> Option<&BoundValue> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.value)
    }

    fn int(&mut self, name: &str, v: u64) {
        self.entries.push(BoundEntry {
            name: name.into(),
            value: BoundValue::Integer(v),
        });
    }

    fn real(&mut self, name: &str, v: f64) {
        self.entries.push(BoundEntry {
            name: name.into(),
            value: BoundValue::Real(v),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn profile_examples() {
        let pr = profile(&perm(&[4, 5, 1, 2, 3])).unwrap();
        assert_eq!((pr.alpha, pr.beta), (9, 5));
        assert_eq!(pr.u, set(&[9, 5, 4]));
        assert_eq!(pr.v, set(&[5, 3, 2]));
        assert_eq!(pr.l, 45);

        let pr = profile(&perm(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!((pr.alpha, pr.beta), (3, 9));
        assert_eq!(pr.u, set(&[3, 2, 1]));
        assert_eq!(pr.v, set(&[9, 5, 4]));

        let pr = profile(&perm(&[1, 2, 3, 4, 5, 6, 7])).unwrap();
        assert_eq!((pr.alpha, pr.beta), (6, 18));
        assert!(pr.u.contains(&12));

        assert!(profile(&perm(&[1, 2, 3, 4])).is_err());
        assert!(profile(&perm(&[1, 2, 3])).is_err());
    }

    #[test]
    fn integer_bounds() {
        assert_eq!(nk_upper(3).unwrap(), 81);
        assert_eq!(nk_upper(4).unwrap(), 648);
        assert_eq!(f2_lower(3).unwrap(), 5);
        assert_eq!(f2_lower(4).unwrap(), 12);
        assert!(nk_upper(2).is_err());
    }

    #[test]
    fn nk_paths_agree() {
        assert_eq!(compute_nk(3).unwrap(), 45);
        for k in 3..=5 {
            assert_eq!(compute_nk_exhaustive(k).unwrap(), compute_nk_by_sets(k).unwrap());
            assert!(compute_nk(k).unwrap() <= nk_upper(k).unwrap());
        }
        assert!(compute_nk(NK_MAX_K + 1).is_err());
    }

    #[test]
    fn real_bounds() {
        assert!((f_upper(3, 5).unwrap() - 30.79).abs() < 0.01);
        assert_eq!(g_upper(18), 39.0);
        for n in [6, 12, 18, 60] {
            assert!((two_run_count_bound(n, 3).unwrap() - g_upper(n)).abs() < 1e-9);
        }
        assert!(f_lower(1_000_000, 55).unwrap().is_finite());
        assert!(matches!(f_lower(1000, 54), Err(Error::Domain(_))));
        assert!(g_lower(2).is_err());
        assert!(g_lower(1000).unwrap().is_finite());
    }

    #[test]
    fn report_has_g_upper() {
        let r = BoundReport::compute(3, 2, Some(18), true, None).unwrap();
        assert_eq!(r.get("G_upper"), Some(&BoundValue::Real(39.0)));
        assert_eq!(r.get("Nk_upper"), Some(&BoundValue::Integer(81)));
    }
}
