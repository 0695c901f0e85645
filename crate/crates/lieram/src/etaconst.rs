//! Structure constants of a diagonal element E = 1 + sum eta(a) t^{-|a|} D_{a,0}...,
//! their time-indexed versions, the dual constants of E^{-1}, and the
//! connected-permutation sums with their identities.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffring::{GaloisRingElem, Ring};
use crate::params::parse_rational;

#[derive(Debug, Error)]
pub enum EtaError {
    #[error("custom eta table: {0}")]
    Parse(String),
    #[error("custom eta table violates the shuffle condition at {0:?} | {1:?}")]
    NotDiagonal(Vec<u64>, Vec<u64>),
    #[error("tuple length {0} is not below p = {1}")]
    TooLong(usize, u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaVariant {
    Simple,
    Ordered,
    Custom,
}

#[derive(Clone, Debug)]
pub struct EtaTable {
    pub variant: EtaVariant,
    ring: Ring,
    custom: BTreeMap<Vec<u64>, GaloisRingElem>,
    /// inverse factorials 1/r! for r < p
    inv_fact: Vec<GaloisRingElem>,
}

#[derive(Deserialize)]
struct RawTable {
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    a: Vec<u64>,
    value: RawValue,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawValue {
    Ratio(String),
    Int(i64),
    Coeffs(Vec<i64>),
}

impl EtaTable {
    fn base(ring: &Ring, variant: EtaVariant) -> Self {
        let p = ring.params.p;
        let mut inv_fact = vec![ring.one()];
        let mut f: i64 = 1;
        for r in 1..p as i64 {
            f = (f * r) % ring.zm.q as i64;
            inv_fact.push(ring.from_ratio(1, f));
        }
        EtaTable {
            variant,
            ring: ring.clone(),
            custom: BTreeMap::new(),
            inv_fact,
        }
    }

    /// eta(a) = 1/r! for every tuple of length r.
    pub fn simple(ring: &Ring) -> Self {
        Self::base(ring, EtaVariant::Simple)
    }

    /// eta(a) = 1/(r_1! ... r_k!) over the runs of a weakly increasing tuple, 0 otherwise.
    pub fn ordered(ring: &Ring) -> Self {
        Self::base(ring, EtaVariant::Ordered)
    }

    /// Explicit table; missing tuples are 0 and the empty tuple is 1. Rejected unless
    /// the shuffle condition holds over the letters it mentions.
    pub fn custom(
        ring: &Ring,
        entries: BTreeMap<Vec<u64>, GaloisRingElem>,
    ) -> Result<Self, EtaError> {
        let mut t = Self::base(ring, EtaVariant::Custom);
        let p = ring.params.p;
        for k in entries.keys() {
            if k.len() as u64 >= p {
                return Err(EtaError::TooLong(k.len(), p));
            }
        }
        t.custom = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut letters: Vec<u64> = t.custom.keys().flatten().copied().collect();
        letters.sort();
        letters.dedup();
        if let Some((u, v)) = t.shuffle_violation(&letters, p as usize - 1) {
            return Err(EtaError::NotDiagonal(u, v));
        }
        Ok(t)
    }

    /// Reads `{"entries": [{"a": [1, 2], "value": "1/2"}, ...]}`. A value is a rational
    /// string, an integer, or the coefficient vector of a ring element.
    pub fn from_json(ring: &Ring, text: &str) -> Result<Self, EtaError> {
        let raw: RawTable =
            serde_json::from_str(text).map_err(|e| EtaError::Parse(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for e in raw.entries {
            let v = match e.value {
                RawValue::Int(n) => ring.from_int(n),
                RawValue::Ratio(s) => {
                    let r = parse_rational(&s).map_err(|e| EtaError::Parse(e.to_string()))?;
                    let (n, d) = (r.numer().to_string(), r.denom().to_string());
                    let n: i64 = n
                        .parse()
                        .map_err(|_| EtaError::Parse(format!("{} too large", s)))?;
                    let d: i64 = d
                        .parse()
                        .map_err(|_| EtaError::Parse(format!("{} too large", s)))?;
                    if d % ring.params.p as i64 == 0 {
                        return Err(EtaError::Parse(format!("{} is not p-integral", s)));
                    }
                    ring.from_ratio(n, d)
                }
                RawValue::Coeffs(c) => {
                    if c.len() != ring.n0() {
                        return Err(EtaError::Parse(format!(
                            "expected {} coefficients",
                            ring.n0()
                        )));
                    }
                    GaloisRingElem {
                        coeffs: c.iter().map(|&x| ring.zm.from_i64(x)).collect(),
                    }
                }
            };
            entries.insert(e.a, v);
        }
        Self::custom(ring, entries)
    }

    pub fn from_path(ring: &Ring, path: &Path) -> Result<Self, EtaError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EtaError::Parse(format!("{}: {}", path.display(), e)))?;
        Self::from_json(ring, &text)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn eta(&self, a: &[u64]) -> GaloisRingElem {
        let r = a.len();
        assert!(
            (r as u64) < self.ring.params.p,
            "eta needs a tuple shorter than p"
        );
        if r == 0 {
            return self.ring.one();
        }
        match self.variant {
            EtaVariant::Simple => self.inv_fact[r].clone(),
            EtaVariant::Ordered => {
                if a.windows(2).any(|w| w[0] > w[1]) {
                    return self.ring.zero();
                }
                let mut acc = self.ring.one();
                for run in a.chunk_by(|x, y| x == y) {
                    acc = self.ring.mul(&acc, &self.inv_fact[run.len()]);
                }
                acc
            }
            EtaVariant::Custom => self
                .custom
                .get(a)
                .cloned()
                .unwrap_or_else(|| self.ring.zero()),
        }
    }

    /// Time-indexed constant: n must split into constant runs with strictly
    /// decreasing values m_1 > ... > m_r; the result is prod sigma^{m_j} eta(run_j).
    pub fn eta_n(&self, a: &[u64], n: &[i64]) -> GaloisRingElem {
        self.blocks(a, n, false, |t, b| t.eta(b))
    }

    /// Dual constant from E^{-1}: runs with strictly increasing values, and
    /// per run (-1)^s eta(reversed run).
    pub fn eta_dual(&self, a: &[u64], n: &[i64]) -> GaloisRingElem {
        self.blocks(a, n, true, |t, b| t.dual_block(b))
    }

    fn dual_block(&self, a: &[u64]) -> GaloisRingElem {
        let rev: Vec<u64> = a.iter().rev().copied().collect();
        let e = self.eta(&rev);
        if a.len() % 2 == 1 {
            self.ring.neg(&e)
        } else {
            e
        }
    }

    fn blocks(
        &self,
        a: &[u64],
        n: &[i64],
        increasing: bool,
        f: impl Fn(&Self, &[u64]) -> GaloisRingElem,
    ) -> GaloisRingElem {
        assert_eq!(a.len(), n.len());
        let mut acc = self.ring.one();
        let mut start = 0;
        let mut prev: Option<i64> = None;
        while start < n.len() {
            let v = n[start];
            let mut end = start + 1;
            while end < n.len() && n[end] == v {
                end += 1;
            }
            if let Some(pv) = prev {
                let ok = if increasing { v > pv } else { v < pv };
                if !ok {
                    return self.ring.zero();
                }
            }
            let c = self.ring.frobenius(&f(self, &a[start..end]), v);
            acc = self.ring.mul(&acc, &c);
            prev = Some(v);
            start = end;
        }
        acc
    }

    /// First pair (u, v) with eta(u) eta(v) != sum of eta over the shuffles of u and v,
    /// over all tuples of the given letters with |u| + |v| <= max_len.
    pub fn shuffle_violation(
        &self,
        letters: &[u64],
        max_len: usize,
    ) -> Option<(Vec<u64>, Vec<u64>)> {
        for s in 0..=max_len {
            for w in tuples(letters, s) {
                for s1 in 0..=s {
                    let (u, v) = w.split_at(s1);
                    let lhs = self.ring.mul(&self.eta(u), &self.eta(v));
                    let mut rhs = self.ring.zero();
                    for sh in shuffles(u, v) {
                        self.ring.add_assign(&mut rhs, &self.eta(&sh));
                    }
                    if lhs != rhs {
                        return Some((u.to_vec(), v.to_vec()));
                    }
                }
            }
        }
        None
    }
}

/// All tuples of length s over `letters`.
pub fn tuples(letters: &[u64], s: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..s {
        out = out
            .into_iter()
            .flat_map(|t| {
                letters.iter().map(move |&l| {
                    let mut t = t.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every interleaving of u and v, with multiplicity (one per choice of positions).
pub fn shuffles(u: &[u64], v: &[u64]) -> Vec<Vec<u64>> {
    if u.is_empty() {
        return vec![v.to_vec()];
    }
    if v.is_empty() {
        return vec![u.to_vec()];
    }
    let mut out = Vec::new();
    for mut rest in shuffles(&u[1..], v) {
        rest.insert(0, u[0]);
        out.push(rest);
    }
    for mut rest in shuffles(u, &v[1..]) {
        rest.insert(0, v[0]);
        out.push(rest);
    }
    out
}

/// Permutations pi of {1..s} (stored 1-based) with pi(1) = s1 whose every prefix
/// image is an interval. Empty for s1 = 0 or s1 = s + 1.
pub fn connected_perms(s: usize, s1: usize) -> Vec<Vec<usize>> {
    if s1 == 0 || s1 > s {
        return Vec::new();
    }
    // grow the interval [lo, hi] one step left or right
    fn go(s: usize, lo: usize, hi: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        if lo > 1 {
            cur.push(lo - 1);
            go(s, lo - 1, hi, cur, out);
            cur.pop();
        }
        if hi < s {
            cur.push(hi + 1);
            go(s, lo, hi + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(s, s1, s1, &mut vec![s1], &mut out);
    out
}

/// Connected permutations for all 1 <= s1 <= s <= max_s, built once.
#[derive(Clone, Debug)]
pub struct PermCache {
    table: BTreeMap<(usize, usize), Vec<Vec<usize>>>,
}

impl PermCache {
    pub fn new(max_s: usize) -> Self {
        let mut table = BTreeMap::new();
        for s in 1..=max_s {
            for s1 in 1..=s {
                table.insert((s, s1), connected_perms(s, s1));
            }
        }
        PermCache { table }
    }

    pub fn get(&self, s: usize, s1: usize) -> &[Vec<usize>] {
        self.table
            .get(&(s, s1))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }
}

fn permute<T: Copy>(xs: &[T], pi: &[usize]) -> Vec<T> {
    pi.iter().map(|&i| xs[i - 1]).collect()
}

/// B_{s1} = sum over connected pi with pi(1) = s1 of eta at the pi-permuted tuple.
pub fn b_sum(
    table: &EtaTable,
    perms: &PermCache,
    a: &[u64],
    n: &[i64],
    s1: usize,
) -> GaloisRingElem {
    let ring = table.ring();
    let mut acc = ring.zero();
    for pi in perms.get(a.len(), s1) {
        ring.add_assign(&mut acc, &table.eta_n(&permute(a, pi), &permute(n, pi)));
    }
    acc
}

/// B_{s1} + B_{s1+1} = eta(s1, .., 1) eta(s1+1, .., s) for one tuple and 0 <= s1 <= s.
pub fn check_b_sum_identity(
    table: &EtaTable,
    perms: &PermCache,
    a: &[u64],
    n: &[i64],
    s1: usize,
) -> bool {
    let ring = table.ring();
    let lhs = ring.add(
        &b_sum(table, perms, a, n, s1),
        &b_sum(table, perms, a, n, s1 + 1),
    );
    let head: Vec<usize> = (1..=s1).rev().collect();
    let tail: Vec<usize> = (s1 + 1..=a.len()).collect();
    let rhs = ring.mul(
        &table.eta_n(&permute(a, &head), &permute(n, &head)),
        &table.eta_n(&permute(a, &tail), &permute(n, &tail)),
    );
    lhs == rhs
}

/// Integer word sums in s letters, for the symbolic bracket identity.
type WordSum = BTreeMap<Vec<usize>, i64>;

fn left_nested_expansion(s: usize) -> WordSum {
    let mut acc: WordSum = BTreeMap::from([(vec![0], 1)]);
    for x in 1..s {
        let mut next = WordSum::new();
        for (w, c) in &acc {
            let mut l = w.clone();
            l.push(x);
            *next.entry(l).or_default() += c;
            let mut r = vec![x];
            r.extend(w);
            *next.entry(r).or_default() -= c;
        }
        acc = next;
    }
    acc.retain(|_, c| *c != 0);
    acc
}

/// Signed sum over s1 and pi in Phi_{s,s1} of X_{pi^{-1}(1)} ... X_{pi^{-1}(s)}
/// equals the expansion of [..[X_1, X_2], .., X_s].
pub fn check_dynkin_identity(s: usize) -> bool {
    let mut lhs = WordSum::new();
    for s1 in 1..=s {
        let sign = if (s1 - 1) % 2 == 0 { 1 } else { -1 };
        for pi in connected_perms(s, s1) {
            let mut inv = vec![0usize; s];
            for (j, &v) in pi.iter().enumerate() {
                inv[v - 1] = j;
            }
            *lhs.entry(inv).or_default() += sign;
        }
    }
    lhs.retain(|_, c| *c != 0);
    lhs == left_nested_expansion(s)
}

/// sum_{s1} eta(1..s1) eta_dual(s1+1..s) at one tuple: 1 for s = 0, else 0.
pub fn convolution(table: &EtaTable, a: &[u64], n: &[i64]) -> GaloisRingElem {
    let ring = table.ring();
    let mut acc = ring.zero();
    for s1 in 0..=a.len() {
        let x = ring.mul(
            &table.eta_n(&a[..s1], &n[..s1]),
            &table.eta_dual(&a[s1..], &n[s1..]),
        );
        ring.add_assign(&mut acc, &x);
    }
    acc
}

/// Convolution identity on `samples` random tuples for each length up to max_s.
pub fn check_convolution<R: Rng>(
    table: &EtaTable,
    letters: &[u64],
    max_s: usize,
    samples: usize,
    rng: &mut R,
) -> bool {
    let ring = table.ring();
    if !(convolution(table, &[], &[]) == ring.one()) {
        return false;
    }
    for s in 1..=max_s {
        for _ in 0..samples {
            let (a, n) = random_tuple(letters, s, rng);
            if !convolution(table, &a, &n).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Random letters and times; times are drawn from a small window so runs and
/// ties occur often.
pub fn random_tuple<R: Rng>(letters: &[u64], s: usize, rng: &mut R) -> (Vec<u64>, Vec<i64>) {
    let a = (0..s)
        .map(|_| letters[rng.random_range(0..letters.len())])
        .collect();
    let n = (0..s).map(|_| rng.random_range(-2..=2)).collect();
    (a, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::RingContext;
    use crate::params::desk;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn eta_examples() {
        let ring = RingContext::new(&desk::c3());
        let s = EtaTable::simple(&ring);
        assert_eq!(s.eta(&[]), ring.one());
        assert_eq!(s.eta(&[1, 2]), ring.from_ratio(1, 2));
        let o = EtaTable::ordered(&ring);
        assert_eq!(o.eta(&[1, 1, 2]), ring.from_ratio(1, 2));
        assert!(o.eta(&[2, 1]).is_zero());
        assert_eq!(o.eta(&[0, 1, 1, 1]), ring.from_ratio(1, 6));
    }

    #[test]
    fn eta_n_examples() {
        let ring = RingContext::new(&desk::c1());
        let s = EtaTable::simple(&ring);
        assert_eq!(
            s.eta_n(&[1, 2], &[3, 3]),
            ring.frobenius(&s.eta(&[1, 2]), 3)
        );
        assert!(s.eta_n(&[1, 1], &[0, 1]).is_zero());
        assert_eq!(s.eta_n(&[1, 1], &[0, -1]), ring.one());
        assert_eq!(s.eta_dual(&[1], &[0]), ring.neg(&ring.one()));
        assert_eq!(s.eta_dual(&[1, 2], &[0, 0]), ring.from_ratio(1, 2));
        assert!(s.eta_dual(&[1, 1], &[0, -1]).is_zero());
        assert!(convolution(&s, &[1], &[0]).is_zero());
    }

    #[test]
    fn eta_n_twists_custom_values() {
        let params = desk::c1();
        let ring = RingContext::new(&params);
        let x = ring.basis(1);
        let mut entries = BTreeMap::new();
        entries.insert(vec![1], x.clone());
        entries.insert(
            vec![1, 1],
            ring.mul(&x, &ring.mul(&x, &ring.from_ratio(1, 2))),
        );
        let t = EtaTable::custom(&ring, entries).unwrap();
        assert_eq!(t.eta_n(&[1], &[1]), ring.frobenius(&x, 1));
        assert_eq!(
            t.eta_n(&[1, 1], &[1, 0]),
            ring.mul(&ring.frobenius(&x, 1), &x)
        );
    }

    #[test]
    fn custom_rejects_non_diagonal() {
        let ring = RingContext::new(&desk::c3());
        let mut entries = BTreeMap::new();
        entries.insert(vec![1], ring.one());
        entries.insert(vec![1, 1], ring.one());
        assert!(matches!(
            EtaTable::custom(&ring, entries),
            Err(EtaError::NotDiagonal(_, _))
        ));
        let json = r#"{"entries": [{"a": [1], "value": 1}, {"a": [1, 1], "value": "1/2"}, {"a": [1, 1, 1], "value": "1/6"}, {"a": [1, 1, 1, 1], "value": "1/24"}]}"#;
        let t = EtaTable::from_json(&ring, json).unwrap();
        assert_eq!(t.eta(&[1, 1]), ring.from_ratio(1, 2));
        assert!(
            EtaTable::from_json(&ring, r#"{"entries": [{"a": [1], "value": "1/5"}]}"#).is_err()
        );
    }

    #[test]
    fn shuffle_condition_simple_and_ordered() {
        let ring = RingContext::new(&desk::c3());
        for t in [EtaTable::simple(&ring), EtaTable::ordered(&ring)] {
            assert_eq!(t.shuffle_violation(&[0, 1, 2], 4), None);
        }
    }

    #[test]
    fn connected_perm_examples() {
        assert_eq!(connected_perms(2, 1), vec![vec![1, 2]]);
        assert_eq!(connected_perms(2, 2), vec![vec![2, 1]]);
        assert!(connected_perms(3, 0).is_empty());
        assert!(connected_perms(3, 4).is_empty());
        for s in 1..=6 {
            for s1 in 1..=s {
                let ps = connected_perms(s, s1);
                assert_eq!(ps.len(), binom(s - 1, s1 - 1), "s={} s1={}", s, s1);
                for pi in &ps {
                    let mut sorted = pi.clone();
                    sorted.sort();
                    assert_eq!(sorted, (1..=s).collect::<Vec<_>>());
                    for l in 1..=s {
                        let lo = *pi[..l].iter().min().unwrap();
                        let hi = *pi[..l].iter().max().unwrap();
                        assert_eq!(hi - lo + 1, l);
                    }
                }
            }
        }
    }

    #[test]
    fn b_sum_small_cases() {
        let ring = RingContext::new(&desk::c3());
        let t = EtaTable::simple(&ring);
        let perms = PermCache::new(4);
        assert_eq!(b_sum(&t, &perms, &[2], &[1], 1), t.eta_n(&[2], &[1]));
        assert_eq!(
            b_sum(&t, &perms, &[1, 2], &[0, 0], 1),
            ring.from_ratio(1, 2)
        );
    }

    #[test]
    fn dynkin_identity() {
        for s in 2..=6 {
            assert!(check_dynkin_identity(s), "s={}", s);
        }
        assert_eq!(left_nested_expansion(3).len(), 4);
    }

    #[test]
    fn convolution_examples() {
        let ring = RingContext::new(&desk::c3());
        let t = EtaTable::simple(&ring);
        assert_eq!(convolution(&t, &[], &[]), ring.one());
        assert!(convolution(&t, &[1, 2, 3], &[0, 0, 0]).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(check_convolution(&t, &[0, 1, 2, 3], 4, 200, &mut rng));
        let o = EtaTable::ordered(&ring);
        assert!(check_convolution(&o, &[0, 1, 2, 3], 4, 200, &mut rng));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn b_sum_identity(seed in any::<u64>(), ordered in any::<bool>()) {
            let ring = RingContext::new(&desk::c3());
            let t = if ordered { EtaTable::ordered(&ring) } else { EtaTable::simple(&ring) };
            let perms = PermCache::new(4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = rng.random_range(1..=4);
            let (a, n) = random_tuple(&[0, 1, 2, 3], s, &mut rng);
            let s1 = rng.random_range(0..=s);
            prop_assert!(check_b_sum_identity(&t, &perms, &a, &n, s1), "a={:?} n={:?} s1={}", a, n, s1);
        }
    }
}
