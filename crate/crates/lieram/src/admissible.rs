//! Parameter selection (delta0, r*, N*) and the admissible exponent sets.
//!
//! An exponent is carried by the pair of integers P_alpha = p^m alpha and
//! P_beta = p^m beta / r*, so that iota = q p^{M-1} P_alpha - b* P_beta.
//! The set A[u] is normalized with its top exponent at 0, while term counts
//! for kappa are taken after scaling by p^m (top exponent m). Both
//! normalizations describe the same integer P_alpha, which is what is stored.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::filtration::u_value;
use crate::par;
use crate::params::{
    bigint_num, fmt_rational, pow_big, rational_str, vp_int, GlobalParams, Rational,
};

#[derive(Debug, Error)]
pub enum AdmissibleError {
    #[error("no valid r* with N0* <= {0}")]
    NoRStar(u32),
    #[error("no valid N* up to {0}: {1}")]
    NoNStar(u32, String),
    #[error("r* override {0} is invalid: {1}")]
    BadOverride(String, String),
    #[error("gamma_data data needs ch = 1, got ch = {0}")]
    NotChOne(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamSelection {
    #[serde(with = "rational_str")]
    pub delta0: Rational,
    #[serde(with = "rational_str")]
    pub r_star: Rational,
    pub n0_star: u32,
    pub b0_star: u64,
    pub n_star: u32,
    #[serde(with = "bigint_num")]
    pub q: BigInt,
    #[serde(with = "bigint_num")]
    pub b_star: BigInt,
    /// p^{M-1} b* (p-1): the bound on |iota|.
    #[serde(with = "bigint_num")]
    pub x_bound: BigInt,
}

impl ParamSelection {
    fn build(
        params: &GlobalParams,
        delta0: Rational,
        n0_star: u32,
        b0_star: u64,
        n_star: u32,
    ) -> Self {
        let p = params.p;
        let q0 = pow_big(p, n0_star);
        let q = pow_big(p, n_star);
        let r_star = Rational::new(BigInt::from(b0_star), &q0 - 1);
        let b_star = BigInt::from(b0_star) * (&q - 1) / (&q0 - 1);
        let x_bound = pow_big(p, params.big_m - 1) * &b_star * BigInt::from(p - 1);
        ParamSelection {
            delta0,
            r_star,
            n0_star,
            b0_star,
            n_star,
            q,
            b_star,
            x_bound,
        }
    }

    pub fn q0(&self, params: &GlobalParams) -> BigInt {
        pow_big(params.p, self.n0_star)
    }
}

/// Integer P = p^m alpha with alpha in A[u, m]. Kept as numerator over p^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaCandidate {
    pub s: u64,
    pub m: u32,
    pub alpha: Rational,
}

fn to_u128(x: &BigInt) -> u128 {
    x.to_u128().expect("exponent data fits u128")
}

/// Term-count search for P = sum c_k p^k with k in [0, m], each c_k split into
/// pieces of size at most `amax`. With `exact`, an empty top slot costs one
/// zero term, as A[u] presentations always carry a term at the top exponent.
fn min_terms(p: u64, amax: u64, m: u32, value: u128, exact: bool, limit: u64) -> Option<u64> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        p: u128,
        amax: u128,
        k: u32,
        m: u32,
        r: u128,
        exact: bool,
        limit: u64,
        memo: &mut HashMap<(u32, u128), Option<u64>>,
    ) -> Option<u64> {
        // each remaining term is at most amax p^{m-k} at this level
        let span = p.checked_pow(m - k).and_then(|x| x.checked_mul(amax));
        if let Some(span) = span {
            if r > span.saturating_mul(limit as u128) {
                return None;
            }
        }
        let pieces = |c: u128| -> Option<u64> {
            if c == 0 {
                Some(0)
            } else if amax == 0 {
                None
            } else {
                Some(c.div_ceil(amax) as u64)
            }
        };
        if k == m {
            let base = pieces(r)? + u64::from(exact && r == 0);
            return (base <= limit).then_some(base);
        }
        if let Some(v) = memo.get(&(k, r)) {
            return *v;
        }
        // Moving t units down one level costs about p t / amax pieces and saves
        // at most ceil(t / amax) + 1 above, so large t never helps.
        let mut best: Option<u64> = None;
        let mut c = r % p;
        let cap = (r % p + p * (2 * amax + 3)).min(amax * limit as u128);
        while c <= r && c <= cap {
            if let Some(here) = pieces(c) {
                if let Some(rest) = go(p, amax, k + 1, m, (r - c) / p, exact, limit, memo) {
                    let t = here + rest;
                    if t <= limit {
                        best = Some(best.map_or(t, |b| b.min(t)));
                    }
                }
            }
            c += p;
        }
        memo.insert((k, r), best);
        best
    }
    let mut memo = HashMap::new();
    go(
        p as u128,
        amax as u128,
        0,
        m,
        value,
        exact,
        limit,
        &mut memo,
    )
}

fn amax(params: &GlobalParams) -> u64 {
    params.max_coeff_below_wstar().max(0) as u64
}

/// Whether P_alpha / p^m lies in A[u*, m].
pub fn alpha_member(params: &GlobalParams, p_alpha: &BigInt, m: u32) -> bool {
    if p_alpha.is_negative() {
        return false;
    }
    min_terms(
        params.p,
        amax(params),
        m,
        to_u128(p_alpha),
        true,
        params.u_star(),
    )
    .is_some()
}

/// Fewest terms a p^k (0 <= a < w*, 0 <= k <= m) summing to P_alpha, where a term
/// at k = m is always present and counted even when its coefficient is zero.
/// 0 for P_alpha = 0; None when no presentation within u* terms exists.
pub fn kappa(p_alpha: &BigInt, m: u32, params: &GlobalParams) -> Option<u32> {
    if p_alpha.is_zero() {
        return Some(0);
    }
    if p_alpha.is_negative() {
        return None;
    }
    min_terms(
        params.p,
        amax(params),
        m,
        to_u128(p_alpha),
        true,
        params.u_star(),
    )
    .map(|u| u as u32)
}

/// All alpha in A[u*, m] below `limit`, largest first, as P = p^m alpha.
fn alpha_values_below(params: &GlobalParams, m: u32, limit: &Rational) -> Vec<BigInt> {
    let pm = pow_big(params.p, m);
    let top: BigInt = (limit * Rational::from_integer(pm)).ceil().to_integer() - 1;
    let mut out = Vec::new();
    let mut x = top;
    while !x.is_negative() {
        if alpha_member(params, &x, m) {
            out.push(x.clone());
        }
        x -= 1;
    }
    out
}

/// For each (s, m) the largest alpha in A[u*, m] with alpha < v0 U(s, m).
pub fn delta0_candidates(params: &GlobalParams) -> Vec<AlphaCandidate> {
    let mut out = Vec::new();
    for s in 1..params.p {
        for m in 0..params.big_m {
            let u = u_value(params.p, s, m as u64);
            let limit = &params.v0 * &u;
            if let Some(best) = alpha_values_below(params, m, &limit).into_iter().next() {
                let alpha = Rational::new(best, pow_big(params.p, m));
                out.push(AlphaCandidate { s, m, alpha });
            }
        }
    }
    out
}

/// Minimum positive value of v0 - alpha / U(s, m).
pub fn delta0(params: &GlobalParams) -> Rational {
    delta0_candidates(params)
        .into_iter()
        .map(|c| &params.v0 - &c.alpha / u_value(params.p, c.s, c.m as u64))
        .filter(|d| d.is_positive())
        .min()
        .expect("alpha = 0 always gives a positive value")
}

/// Smallest N0* >= 2, then smallest b0* with gcd(b0*, p(q0*-1)) = 1 and
/// b0*/(q0*-1) strictly between v0 - delta0 and v0.
pub fn choose_rstar(
    params: &GlobalParams,
    delta0: &Rational,
) -> Result<(u64, u32, Rational), AdmissibleError> {
    let lo = &params.v0 - delta0;
    for n0s in 2..=8u32 {
        let q0 = pow_big(params.p, n0s);
        let modulus = BigInt::from(params.p) * (&q0 - 1);
        let mut b = 1u64;
        loop {
            let r = Rational::new(BigInt::from(b), &q0 - 1);
            if r >= params.v0 {
                break;
            }
            if r > lo && BigInt::from(b).gcd(&modulus).is_one() {
                return Ok((b, n0s, r));
            }
            b += 1;
        }
    }
    Err(AdmissibleError::NoRStar(8))
}

/// r*(1 - p^{-N*}) in (v0 - delta0, v0).
pub fn check_c3(params: &GlobalParams, r_star: &Rational, delta0: &Rational, n_star: u32) -> bool {
    let x = r_star * (Rational::one() - Rational::new(BigInt::one(), pow_big(params.p, n_star)));
    x > &params.v0 - delta0 && x < params.v0
}

/// Optional manual choices for the selection.
#[derive(Clone, Debug, Default)]
pub struct SelectionOverrides {
    /// (b0*, N0*).
    pub r_star: Option<(u64, u32)>,
    pub n_star: Option<u32>,
    /// Largest N* tried by the automatic search (default 12).
    pub n_star_max: Option<u32>,
}

/// Full parameter selection, running the enumeration to validate C2 a posteriori.
pub fn select(
    params: &GlobalParams,
    ov: &SelectionOverrides,
) -> Result<ParamSelection, AdmissibleError> {
    let d0 = delta0(params);
    let (b0, n0s) = match ov.r_star {
        Some((b0, n0s)) => {
            let q0 = pow_big(params.p, n0s);
            let r = Rational::new(BigInt::from(b0), &q0 - 1);
            let name = format!("{}/{}", b0, &q0 - 1);
            if n0s < 2 {
                return Err(AdmissibleError::BadOverride(
                    name,
                    "N0* must be >= 2".into(),
                ));
            }
            if !BigInt::from(b0)
                .gcd(&(BigInt::from(params.p) * (&q0 - 1)))
                .is_one()
            {
                return Err(AdmissibleError::BadOverride(
                    name,
                    "gcd(b0*, p(q0*-1)) != 1".into(),
                ));
            }
            if !(r > &params.v0 - &d0 && r < params.v0) {
                return Err(AdmissibleError::BadOverride(
                    name,
                    "r* outside (v0 - delta0, v0)".into(),
                ));
            }
            (b0, n0s)
        }
        None => {
            let (b0, n0s, _) = choose_rstar(params, &d0)?;
            (b0, n0s)
        }
    };
    if let Some(ns) = ov.n_star {
        if ns % n0s != 0 {
            return Err(AdmissibleError::NoNStar(
                ns,
                format!("N* must be a multiple of N0* = {}", n0s),
            ));
        }
        return Ok(ParamSelection::build(params, d0, n0s, b0, ns));
    }
    choose_nstar(
        params,
        d0,
        n0s,
        b0,
        ov.n_star_max.unwrap_or(DEFAULT_NSTAR_MAX),
    )
}

pub const DEFAULT_NSTAR_MAX: u32 = 12;

fn choose_nstar(
    params: &GlobalParams,
    d0: Rational,
    n0s: u32,
    b0: u64,
    max: u32,
) -> Result<ParamSelection, AdmissibleError> {
    let mut last = String::from("C3 never held");
    for k in 1..=(max / n0s).max(1) {
        let ns = k * n0s;
        let sel = ParamSelection::build(params, d0.clone(), n0s, b0, ns);
        if !check_c3(params, &sel.r_star, &d0, ns) {
            continue;
        }
        let en = enumerate_a0(params, &sel);
        if en.c2_failures.is_empty() {
            return Ok(sel);
        }
        last = format!("C2-surrogate failed at N* = {}: {}", ns, en.c2_failures[0]);
    }
    Err(AdmissibleError::NoNStar(max, last))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaData {
    #[serde(with = "rational_str")]
    pub gamma: Rational,
    pub m_iota: i64,
    pub m_iota_max: u32,
    pub r_iota: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleExponent {
    #[serde(with = "bigint_num")]
    pub iota: BigInt,
    #[serde(with = "bigint_num", rename = "P_alpha")]
    pub p_alpha: BigInt,
    #[serde(with = "bigint_num", rename = "P_beta")]
    pub p_beta: BigInt,
    /// Smallest m with a presentation.
    pub m: u32,
    /// Largest m below N* with a presentation.
    #[serde(skip)]
    pub m_max: u32,
    pub ch: u32,
    /// Minimum of `kappa` over the m that present this pair.
    pub kappa: u32,
    pub vp: Option<i64>,
    #[serde(flatten)]
    pub gamma_data: Option<GammaData>,
}

impl AdmissibleExponent {
    /// iota p^{-vp(iota)}, the prime-to-p part with sign.
    pub fn unit_part(&self, p: u64) -> Option<BigInt> {
        let v = self.vp?;
        Some(&self.iota / pow_big(p, v as u32))
    }
}

/// Enumeration result plus the consistency checks made along the way.
#[derive(Clone, Debug, Default, Serialize)]
pub struct A0Enumeration {
    pub exponents: Vec<AdmissibleExponent>,
    /// Pairs with beta != 0 where q|iota| <= p^m X.
    pub c2_failures: Vec<String>,
    /// Two presentations of the same pair with different ch.
    pub ch_conflicts: Vec<String>,
}

impl A0Enumeration {
    pub fn c2_ok(&self) -> bool {
        self.c2_failures.is_empty()
    }
}

/// Digit vectors of P_beta = sum d_e p^e, e in [0, m+M-1], digit sum in [1, p-1],
/// some nonzero digit at e >= m.
fn beta_values(params: &GlobalParams, m: u32) -> Vec<(BigInt, u32)> {
    let top = m + params.big_m;
    let mut out = Vec::new();
    let mut digits = vec![0u64; top as usize];
    fn go(
        params: &GlobalParams,
        m: u32,
        e: usize,
        left: u64,
        digits: &mut Vec<u64>,
        out: &mut Vec<(BigInt, u32)>,
    ) {
        if e == digits.len() {
            let sum: u64 = digits.iter().sum();
            let high = digits[m as usize..].iter().any(|&d| d > 0);
            if sum >= 1 && high {
                let mut v = BigInt::zero();
                for (k, &d) in digits.iter().enumerate() {
                    v += BigInt::from(d) * pow_big(params.p, k as u32);
                }
                out.push((v, sum as u32));
            }
            return;
        }
        for d in 0..=left {
            digits[e] = d;
            go(params, m, e + 1, left - d, digits, out);
        }
        digits[e] = 0;
    }
    go(params, m, 0, params.p - 1, &mut digits, &mut out);
    out
}

#[derive(Clone, Debug)]
struct Hit {
    p_alpha: BigInt,
    p_beta: BigInt,
    m: u32,
    ch: u32,
}

fn hits_at(params: &GlobalParams, sel: &ParamSelection, m: u32) -> Vec<Hit> {
    let scale = &sel.q * pow_big(params.p, params.big_m - 1);
    let x = &sel.x_bound;
    let mut betas = vec![(BigInt::zero(), 0u32)];
    betas.extend(beta_values(params, m));
    let mut out = Vec::new();
    for (pb, ch) in betas {
        let shift = &sel.b_star * &pb;
        let lo = Integer::div_ceil(&(&shift - x), &scale).max(BigInt::zero());
        let hi = Integer::div_floor(&(&shift + x), &scale);
        let mut pa = lo;
        while pa <= hi {
            if alpha_member(params, &pa, m) {
                out.push(Hit {
                    p_alpha: pa.clone(),
                    p_beta: pb.clone(),
                    m,
                    ch,
                });
            }
            pa += 1;
        }
    }
    out
}

fn iota_of(params: &GlobalParams, sel: &ParamSelection, pa: &BigInt, pb: &BigInt) -> BigInt {
    &sel.q * pow_big(params.p, params.big_m - 1) * pa - &sel.b_star * pb
}

/// Survivors with beta != 0 at a fixed m, as (P_alpha, P_beta) pairs.
pub fn survivors_at(params: &GlobalParams, sel: &ParamSelection, m: u32) -> Vec<(BigInt, BigInt)> {
    hits_at(params, sel, m)
        .into_iter()
        .filter(|h| !h.p_beta.is_zero())
        .map(|h| (h.p_alpha, h.p_beta))
        .collect()
}

/// Enumerates the admissible set for m in [0, N*), sorted by iota.
pub fn enumerate_a0(params: &GlobalParams, sel: &ParamSelection) -> A0Enumeration {
    let ms: Vec<u32> = (0..sel.n_star).collect();
    let hits = par::flat_map(&ms, |&m| hits_at(params, sel, m));
    let mut merged: BTreeMap<(BigInt, BigInt), (u32, u32, u32, u32)> = BTreeMap::new();
    let mut en = A0Enumeration::default();
    for h in hits {
        if !h.p_beta.is_zero() {
            let iota = iota_of(params, sel, &h.p_alpha, &h.p_beta);
            if &sel.q * iota.abs() <= pow_big(params.p, h.m) * &sel.x_bound {
                en.c2_failures.push(format!(
                    "P_alpha={} P_beta={} m={} iota={}",
                    h.p_alpha, h.p_beta, h.m, iota
                ));
            }
        }
        let k = kappa(&h.p_alpha, h.m, params).expect("enumerated alpha is representable");
        let key = (h.p_alpha, h.p_beta);
        match merged.get_mut(&key) {
            Some((mlo, mhi, ch, kmin)) => {
                if *ch != h.ch {
                    en.ch_conflicts.push(format!(
                        "P_alpha={} P_beta={}: ch {} vs {}",
                        key.0, key.1, ch, h.ch
                    ));
                }
                *mlo = (*mlo).min(h.m);
                *mhi = (*mhi).max(h.m);
                *kmin = (*kmin).min(k);
            }
            None => {
                merged.insert(key, (h.m, h.m, h.ch, k));
            }
        }
    }
    for ((pa, pb), (mlo, mhi, ch, k)) in merged {
        let iota = iota_of(params, sel, &pa, &pb);
        let vp = if iota.is_zero() {
            None
        } else {
            Some(vp_int(params.p, &iota).unwrap())
        };
        let mut e = AdmissibleExponent {
            iota,
            p_alpha: pa,
            p_beta: pb,
            m: mlo,
            m_max: mhi,
            ch,
            kappa: k,
            vp,
            gamma_data: None,
        };
        if ch == 1 {
            e.gamma_data = Some(gamma_data(params, sel, &e).expect("ch = 1"));
        }
        en.exponents.push(e);
    }
    en.exponents
        .sort_by(|a, b| (&a.iota, &a.p_alpha, &a.p_beta).cmp(&(&b.iota, &b.p_alpha, &b.p_beta)));
    en
}

/// Elements of A+(p): iota > 0, p does not divide both P_alpha and P_beta,
/// kappa <= (p-2) ch + 1.
pub fn filter_aplus(params: &GlobalParams, list: &[AdmissibleExponent]) -> Vec<AdmissibleExponent> {
    let pb = BigInt::from(params.p);
    list.iter()
        .filter(|e| {
            e.iota.is_positive()
                && !e.p_alpha.gcd(&e.p_beta).gcd(&pb).eq(&pb)
                && (e.kappa as u64) <= (params.p - 2) * e.ch as u64 + 1
        })
        .cloned()
        .collect()
}

/// Largest m >= 0 with iota p^m <= X, for iota > 0.
fn max_shift(p: u64, iota: &BigInt, x: &BigInt) -> u32 {
    let mut m = 0;
    let mut v = iota.abs() * BigInt::from(p);
    while &v <= x {
        m += 1;
        v *= BigInt::from(p);
    }
    m
}

/// gamma, M(iota), m(iota), r(iota) for an exponent with ch = 1.
pub fn gamma_data(
    params: &GlobalParams,
    sel: &ParamSelection,
    e: &AdmissibleExponent,
) -> Result<GammaData, AdmissibleError> {
    if e.ch != 1 {
        return Err(AdmissibleError::NotChOne(e.ch));
    }
    let p = params.p;
    let mut pe = 0u32;
    let mut t = e.p_beta.clone();
    while (&t % BigInt::from(p)).is_zero() {
        t /= BigInt::from(p);
        pe += 1;
    }
    debug_assert!(t.is_one());
    let m_iota = pe as i64 - (params.big_m as i64 - 1);
    let shift = params.big_m as i64 - 1 - pe as i64;
    let gamma = Rational::from_integer(e.p_alpha.clone()) * pow_rat_i(p, shift);
    let m_max = max_shift(p, &e.iota, &sel.x_bound);
    Ok(GammaData {
        gamma,
        m_iota,
        m_iota_max: m_max,
        r_iota: m_max,
    })
}

fn pow_rat_i(p: u64, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(pow_big(p, e as u32))
    } else {
        Rational::new(BigInt::one(), pow_big(p, (-e) as u32))
    }
}

/// iota = p^{M-1+M(iota)} (q gamma - b*).
pub fn iota_from_gamma_data(
    params: &GlobalParams,
    sel: &ParamSelection,
    d: &GammaData,
) -> Rational {
    pow_rat_i(params.p, params.big_m as i64 - 1 + d.m_iota)
        * (Rational::from_integer(sel.q.clone()) * &d.gamma
            - Rational::from_integer(sel.b_star.clone()))
}

/// Outcome of the checks on an enumerated admissible set.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibleReport {
    pub zero_beta_sublist_ok: bool,
    pub ch_nonzero_ok: bool,
    pub c2_surrogate_ok: bool,
    pub ch_well_defined: bool,
    pub no_new_survivors_at_nstar: bool,
    pub unit_parts_distinct: bool,
    pub ch_one_lower_bound: bool,
    pub gamma_at_least_v0: bool,
    pub kappa_bound: bool,
    pub gamma_roundtrip: bool,
    pub delta0_scan: bool,
    pub aplus_size: usize,
    pub a0_size: usize,
}

impl AdmissibleReport {
    pub fn all(&self) -> bool {
        self.zero_beta_sublist_ok
            && self.ch_nonzero_ok
            && self.c2_surrogate_ok
            && self.ch_well_defined
            && self.no_new_survivors_at_nstar
            && self.unit_parts_distinct
            && self.ch_one_lower_bound
            && self.gamma_at_least_v0
            && self.kappa_bound
            && self.gamma_roundtrip
            && self.delta0_scan
    }
}

/// Runs every structural check of the admissible sets against `sel`.
pub fn check(params: &GlobalParams, sel: &ParamSelection) -> AdmissibleReport {
    let en = enumerate_a0(params, sel);
    let p = params.p;
    let scale = &sel.q * pow_big(p, params.big_m - 1);

    let mut zero_beta: Vec<BigInt> = en
        .exponents
        .iter()
        .filter(|e| e.p_beta.is_zero())
        .map(|e| e.iota.clone())
        .collect();
    zero_beta.sort();
    let expect: Vec<BigInt> = (0..=params.max_coeff_below_wstar().max(-1))
        .map(|a| &scale * a)
        .collect();

    let ch_nonzero_ok = en.exponents.iter().all(|e| e.ch == 0 || !e.iota.is_zero());

    let no_new = survivors_at(params, sel, sel.n_star)
        .iter()
        .all(|(pa, pb)| {
            en.exponents
                .iter()
                .any(|e| &e.p_alpha == pa && &e.p_beta == pb)
        });

    let plus = filter_aplus(params, &en.exponents);
    let mut units: Vec<BigInt> = plus.iter().filter_map(|e| e.unit_part(p)).collect();
    units.sort();
    let distinct = units.windows(2).all(|w| w[0] != w[1]);
    let lower = Rational::from_integer(sel.q.clone()) * &params.v0
        - Rational::from_integer(sel.b_star.clone());
    let ch_one_lower_bound = plus
        .iter()
        .filter(|e| e.ch == 1)
        .all(|e| Rational::from_integer(e.unit_part(p).unwrap()) >= lower);
    let gamma_at_least_v0 = plus
        .iter()
        .filter_map(|e| e.gamma_data.as_ref())
        .all(|d| d.gamma >= params.v0);
    let kappa_bound = plus.iter().all(|e| {
        (e.kappa as u64) <= (p - 2) * e.ch as u64 + 1 && (e.kappa as u64) <= params.u_star()
    });
    let gamma_roundtrip = en.exponents.iter().all(|e| match &e.gamma_data {
        None => true,
        Some(d) => {
            let back = iota_from_gamma_data(params, sel, d);
            let grow = &e.iota * pow_big(p, d.m_iota_max + 1);
            back == Rational::from_integer(e.iota.clone())
                && (!e.iota.is_positive() || grow > sel.x_bound)
        }
    });
    let delta0_scan = delta0_scan(params, sel);

    AdmissibleReport {
        zero_beta_sublist_ok: zero_beta == expect,
        ch_nonzero_ok,
        c2_surrogate_ok: en.c2_ok(),
        ch_well_defined: en.ch_conflicts.is_empty(),
        no_new_survivors_at_nstar: no_new,
        unit_parts_distinct: distinct,
        ch_one_lower_bound,
        gamma_at_least_v0,
        kappa_bound,
        gamma_roundtrip,
        delta0_scan,
        aplus_size: plus.len(),
        a0_size: en.exponents.len(),
    }
}

/// For every alpha in A[u*, m] with alpha / U(s, m) < v0: q alpha - b* U(s, m) < 0.
pub fn delta0_scan(params: &GlobalParams, sel: &ParamSelection) -> bool {
    let q = Rational::from_integer(sel.q.clone());
    let b = Rational::from_integer(sel.b_star.clone());
    for s in 1..params.p {
        for m in 0..params.big_m {
            let u = u_value(params.p, s, m as u64);
            let pm = Rational::from_integer(pow_big(params.p, m));
            for pa in alpha_values_below(params, m, &(&params.v0 * &u)) {
                let alpha = Rational::from_integer(pa) / &pm;
                if !(&q * &alpha - &b * &u).is_negative() {
                    return false;
                }
            }
        }
    }
    true
}

/// One CSV line per exponent, matching the JSON field order.
pub fn csv_rows(list: &[AdmissibleExponent]) -> Vec<String> {
    let mut out =
        vec!["iota,P_alpha,P_beta,m,ch,kappa,vp,gamma,M_iota,m_iota_max,r_iota".to_string()];
    for e in list {
        let vp = e.vp.map(|v| v.to_string()).unwrap_or_default();
        let tail = match &e.gamma_data {
            Some(d) => format!(
                "{},{},{},{}",
                fmt_rational(&d.gamma),
                d.m_iota,
                d.m_iota_max,
                d.r_iota
            ),
            None => ",,,".to_string(),
        };
        out.push(format!(
            "{},{},{},{},{},{},{},{}",
            e.iota, e.p_alpha, e.p_beta, e.m, e.ch, e.kappa, vp, tail
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{desk, rat};

    fn sel(params: &GlobalParams) -> ParamSelection {
        select(params, &SelectionOverrides::default()).unwrap()
    }

    /// Breadth-first search over term lists a p^k, tracking whether a term at
    /// the top exponent (possibly zero) has been used.
    fn kappa_oracle(params: &GlobalParams, pa: u64, m: u32) -> Option<u32> {
        let amax = params.max_coeff_below_wstar() as u64;
        let mut terms = Vec::new();
        for k in 0..=m {
            for a in 0..=amax {
                terms.push((a * params.p.pow(k), k == m));
            }
        }
        let mut frontier = vec![(0u64, false)];
        if pa == 0 {
            return Some(0);
        }
        for u in 1..=params.u_star() as u32 {
            let mut next = Vec::new();
            for &(v, top) in &frontier {
                for &(t, is_top) in &terms {
                    let w = v + t;
                    let top = top || is_top;
                    if w == pa && top {
                        return Some(u);
                    }
                    if w <= pa {
                        next.push((w, top));
                    }
                }
            }
            next.sort();
            next.dedup();
            frontier = next;
        }
        None
    }

    #[test]
    fn delta0_examples() {
        assert_eq!(delta0(&desk::c1()), rat(1, 2));
        assert_eq!(delta0(&desk::c2()), rat(1, 4));
        let c3 = desk::c3();
        assert!(delta0(&c3).is_positive());
        // m = 1 enters for M = 2: alpha = 1 against U(2, 1) = 4/3.
        assert!(delta0_candidates(&desk::c2())
            .iter()
            .any(|c| c.m == 1 && c.alpha == rat(1, 1)));
    }

    #[test]
    fn rstar_examples() {
        let (b0, n0s, r) = choose_rstar(&desk::c1(), &rat(1, 2)).unwrap();
        assert_eq!((b0, n0s, r.clone()), (5, 2, rat(5, 8)));
        assert!(r < desk::c1().v0);
        let v = GlobalParams::new(3, 1, 2, rat(4, 3), 3);
        let d = delta0(&v);
        let (b0, n0s, r) = choose_rstar(&v, &d).unwrap();
        assert!(r > &v.v0 - &d && r < v.v0);
        let q0 = 3i64.pow(n0s);
        assert_eq!(r, rat(b0 as i64, q0 - 1));
        for b in 1..b0 as i64 {
            let rb = rat(b, q0 - 1);
            assert!(!(rb > &v.v0 - &d && rb < v.v0 && b.gcd(&(3 * (q0 - 1))) == 1));
        }
    }

    #[test]
    fn selection_c1_c2() {
        let s1 = sel(&desk::c1());
        // N* = 2 already satisfies the r* window, but the iota bound forces N* = 6
        assert!(check_c3(&desk::c1(), &s1.r_star, &s1.delta0, 2));
        let forced = select(
            &desk::c1(),
            &SelectionOverrides {
                n_star: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!enumerate_a0(&desk::c1(), &forced).c2_ok());
        assert_eq!(
            (
                s1.n_star,
                s1.q.clone(),
                s1.b_star.clone(),
                s1.x_bound.clone()
            ),
            (6, 729.into(), 455.into(), 910.into())
        );
        let s2 = sel(&desk::c2());
        assert_eq!(s2.r_star, rat(7, 8));
        assert_eq!(
            (s2.n_star, s2.b_star.clone(), s2.x_bound.clone()),
            (6, 637.into(), 3822.into())
        );
        assert_eq!(s2.n_star % s2.n0_star, 0);
        assert_eq!(
            &s2.r_star * (&s2.q - 1),
            Rational::from_integer(s2.b_star.clone())
        );
    }

    #[test]
    fn kappa_examples() {
        let c1 = desk::c1();
        assert_eq!(kappa(&4.into(), 1, &c1), Some(2));
        assert_eq!(kappa(&0.into(), 1, &c1), Some(0));
        assert_eq!(kappa(&1.into(), 0, &c1), Some(1));
        for m in 0..3 {
            for pa in 0..40u64 {
                assert_eq!(
                    kappa(&pa.into(), m, &c1),
                    kappa_oracle(&c1, pa, m),
                    "P={} m={}",
                    pa,
                    m
                );
            }
        }
        let c3 = desk::c3();
        for pa in 0..200u64 {
            assert_eq!(
                kappa(&pa.into(), 2, &c3),
                kappa_oracle(&c3, pa, 2),
                "P={}",
                pa
            );
        }
        // the zero coefficient at the top exponent is counted
        assert_eq!(kappa(&2.into(), 1, &c1), Some(3));
    }

    #[test]
    fn c1_enumeration() {
        let c1 = desk::c1();
        let s = sel(&c1);
        let en = enumerate_a0(&c1, &s);
        let zero: Vec<BigInt> = en
            .exponents
            .iter()
            .filter(|e| e.p_beta.is_zero())
            .map(|e| e.iota.clone())
            .collect();
        assert_eq!(zero, vec![BigInt::from(0), BigInt::from(729)]);
        for e in &en.exponents {
            assert!(e.iota.abs() <= s.x_bound);
            assert_eq!(e.iota, iota_of(&c1, &s, &e.p_alpha, &e.p_beta));
            if e.ch >= 1 {
                assert!(!e.iota.is_zero());
            }
        }
        for e in en
            .exponents
            .iter()
            .filter(|e| e.p_beta.is_zero() && !e.iota.is_zero())
        {
            assert_eq!(e.kappa, 1);
        }
        let rep = check(&c1, &s);
        assert!(rep.all(), "{:?}", rep);
    }

    #[test]
    fn c2_checks() {
        let params = desk::c2();
        let s = sel(&params);
        let rep = check(&params, &s);
        assert!(rep.all(), "{:?}", rep);
        assert!(rep.aplus_size > 0);
    }

    #[test]
    fn c3_small_nstar_fails_iota_bound() {
        let c3 = desk::c3();
        let s = select(
            &c3,
            &SelectionOverrides {
                n_star: Some(3),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!enumerate_a0(&c3, &s).c2_ok());
    }

    #[test]
    fn gamma_data_needs_ch_one() {
        let c1 = desk::c1();
        let s = sel(&c1);
        let en = enumerate_a0(&c1, &s);
        let e = en.exponents.iter().find(|e| e.ch != 1).unwrap();
        assert!(gamma_data(&c1, &s, e).is_err());
        for e in en.exponents.iter().filter(|e| e.ch == 1) {
            let d = e.gamma_data.as_ref().unwrap();
            assert_eq!(
                iota_from_gamma_data(&c1, &s, d),
                Rational::from_integer(e.iota.clone())
            );
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let c2 = desk::c2();
        let s = sel(&c2);
        let a = enumerate_a0(&c2, &s);
        par::set_sequential(true);
        let b = enumerate_a0(&c2, &s);
        par::set_sequential(false);
        assert_eq!(a.exponents, b.exponents);
    }

    #[test]
    fn overrides() {
        let c1 = desk::c1();
        let ov = SelectionOverrides {
            r_star: Some((7, 2)),
            n_star: Some(2),
            ..Default::default()
        };
        let s = select(&c1, &ov).unwrap();
        assert_eq!(s.r_star, rat(7, 8));
        let bad = SelectionOverrides {
            r_star: Some((3, 2)),
            ..Default::default()
        };
        assert!(select(&c1, &bad).is_err());
    }
}
