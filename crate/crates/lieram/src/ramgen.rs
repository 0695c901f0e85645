//! Explicit generators of the ramification ideal in the quotient of the Lie
//! algebra by L(p): the elements F0(gamma, N), the closed-form elements
//! attached to exponents with ch = 1, and the two descriptions of the ideal.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::admissible::{self, AdmissibleExponent, GammaData, ParamSelection};
use crate::coeffring::GaloisRingElem;
use crate::etaconst::EtaTable;
use crate::freeassoc::{AssocElement, GeneratorIndex, Word};
use crate::nilpotentlie::{build_lp, ideal_closure_over, quotient_map, IdealSpan, Lie, LieElement};
use crate::par;
use crate::params::{bigint_num, pow_big, rational_str, GlobalParams, Rational};

#[derive(Debug, Error)]
pub enum RamError {
    #[error("m_iota = {given} for iota = {iota} is below m(iota) = {min}")]
    MIotaTooSmall { iota: BigInt, given: u32, min: u32 },
    #[error("m_iota override names iota = {0}, which is not in the ch = 1 part of A+(p)")]
    UnknownIota(BigInt),
    #[error("element is not Lie: {0}")]
    NotLie(String),
}

/// A tuple (a, n): letters D_{a_i, n_i} with integer times.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tuple {
    pub a: Vec<u64>,
    pub n: Vec<i64>,
}

/// Shared state: the Lie algebra, L(p), and the eta table (over the same ring).
pub struct RamContext {
    pub lie: Lie,
    pub lp: IdealSpan,
    pub table: EtaTable,
}

impl RamContext {
    pub fn new(lie: Lie, table: EtaTable) -> Self {
        let lp = build_lp(&lie);
        RamContext { lie, lp, table }
    }

    pub fn params(&self) -> &GlobalParams {
        self.lie.params()
    }

    fn a_values(&self) -> Vec<u64> {
        let p = self.params();
        let mut v = vec![0];
        v.extend((1..=p.a_max).filter(|a| a % p.p != 0));
        v
    }

    /// Letter index and scalar for D_{a,n}: D(a, n mod N0), or sigma^n(alpha0) D0 for a = 0.
    fn letter(&self, a: u64, n: i64) -> (u16, GaloisRingElem) {
        let ring = self.lie.ring();
        let alph = self.lie.alphabet();
        if a == 0 {
            let l = alph.index_of(&GeneratorIndex::D0).expect("alphabet has D0");
            (l, ring.frobenius(&ring.alpha0, n))
        } else {
            let n0 = self.params().n0 as i64;
            let g = GeneratorIndex::D {
                a,
                n: n.rem_euclid(n0) as u32,
            };
            (alph.index_of(&g).expect("letter in alphabet"), ring.one())
        }
    }

    /// Word and scalar of D_{a1 n1} ... D_{as ns}.
    fn word(&self, t: &Tuple) -> (Word, GaloisRingElem) {
        let ring = self.lie.ring();
        let mut w = Vec::with_capacity(t.a.len());
        let mut c = ring.one();
        for (&a, &n) in t.a.iter().zip(&t.n) {
            let (l, s) = self.letter(a, n);
            w.push(l);
            c = ring.mul(&c, &s);
        }
        (w, c)
    }

    /// Tuples entering F0(gamma, N): a_1 prime to p, n_1 in [max(0, -N), M),
    /// n_1 >= n_2 >= ... >= n_s >= -N, s < p, sum a_i p^{n_i} = gamma.
    pub fn f0_tuples(&self, gamma: &Rational, big_n: i64) -> Vec<Tuple> {
        let params = self.params();
        let scaled = gamma * pow_rat(params.p, big_n);
        if !scaled.is_integer() || !gamma.is_positive() {
            return Vec::new();
        }
        let mut out = Vec::new();
        self.descend(
            Some(&scaled.to_integer()),
            big_n,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut |t, _| out.push(t),
        );
        out
    }

    /// All tuples of the F0 shape for a given N, with their gamma.
    pub fn f0_all_tuples(&self, big_n: i64) -> Vec<(Rational, Tuple)> {
        let mut out = Vec::new();
        let p = self.params().p;
        self.descend(
            None,
            big_n,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut |t, v| out.push((Rational::from_integer(v) / pow_rat(p, big_n), t)),
        );
        out
    }

    /// Depth-first search over non-increasing times. Values are scaled by p^N.
    /// With a target, only tuples hitting it exactly are reported.
    fn descend(
        &self,
        target: Option<&BigInt>,
        big_n: i64,
        a: &mut Vec<u64>,
        n: &mut Vec<i64>,
        emit: &mut dyn FnMut(Tuple, BigInt),
    ) {
        let params = self.params();
        let p = params.p;
        let pos = a.len();
        let value: BigInt = a
            .iter()
            .zip(n.iter())
            .map(|(&ai, &ni)| BigInt::from(ai) * pow_big(p, (ni + big_n) as u32))
            .sum();
        if pos > 0 {
            let hit = match target {
                Some(t) => &value == t,
                None => true,
            };
            if hit {
                emit(
                    Tuple {
                        a: a.clone(),
                        n: n.clone(),
                    },
                    value.clone(),
                );
            }
        }
        if pos as u64 + 1 >= p {
            return;
        }
        let (lo, hi) = if pos == 0 {
            ((-big_n).max(0), params.big_m as i64 - 1)
        } else {
            (-big_n, n[pos - 1])
        };
        let slots = p - 1 - pos as u64;
        for ni in (lo..=hi).rev() {
            for &ai in &self.a_values() {
                if pos == 0 && ai == 0 {
                    continue;
                }
                let v = &value + BigInt::from(ai) * pow_big(p, (ni + big_n) as u32);
                if let Some(t) = target {
                    let room = BigInt::from(slots - 1)
                        * BigInt::from(params.a_max)
                        * pow_big(p, (ni + big_n) as u32);
                    if &v > t || &v + room < *t {
                        continue;
                    }
                }
                a.push(ai);
                n.push(ni);
                self.descend(target, big_n, a, n, emit);
                a.pop();
                n.pop();
            }
        }
    }

    /// Coefficient a_1 p^{n_1} eta(a, n) times the D0 scalars of the tuple.
    fn f0_term(&self, t: &Tuple) -> LieElement {
        let ring = self.lie.ring();
        let p = self.params().p;
        let n1 = t.n[0];
        if n1 >= self.params().big_m as i64 {
            return self.lie.zero();
        }
        let (w, scalar) = self.word(t);
        let lead = ring.from_int((t.a[0] * p.pow(n1 as u32)) as i64);
        let c = ring.mul(&ring.mul(&lead, &self.table.eta_n(&t.a, &t.n)), &scalar);
        if c.is_zero() {
            return self.lie.zero();
        }
        self.lie.scale(&self.lie.monomial(&w), &c)
    }

    /// F0(gamma, N) = sum a_1 p^{n_1} eta(a, n) [..[D_{a1 n1}, D_{a2 n2}], .., D_{as ns}].
    pub fn f0(&self, gamma: &Rational, big_n: i64) -> LieElement {
        let mut acc = self.lie.zero();
        for t in self.f0_tuples(gamma, big_n) {
            self.lie.add_into(&mut acc, &self.f0_term(&t));
        }
        acc
    }

    /// Closed-form element for an exponent written as p^{M-1+mi}(q gamma - b*):
    /// sum over n >= 0 with gamma(a, n) = p^{mi} gamma and max n = mi + A, 0 <= A < M, of
    /// p^A eta_dual(1..s1-1) eta(s1..s) gamma*_{[s1,s]} D_{a n}.
    pub fn fbar_direct(&self, gamma: &Rational, m_iota: i64) -> AssocElement {
        let params = self.params();
        let fa = &self.lie.fa;
        let ring = self.lie.ring();
        let mut out = fa.zero();
        let target = gamma * pow_rat(params.p, m_iota);
        if !target.is_integer() {
            return out;
        }
        let target = target.to_integer();
        for big_a in 0..params.big_m as i64 {
            let top = m_iota + big_a;
            if top < 0 {
                continue;
            }
            for t in self.free_tuples(&target, top) {
                let s = t.a.len();
                let mut coeff = ring.zero();
                for s1 in 1..=s {
                    let gstar: u64 = (s1 - 1..s).filter(|&u| t.n[u] == top).map(|u| t.a[u]).sum();
                    if gstar == 0 {
                        continue;
                    }
                    let head = self.table.eta_dual(&t.a[..s1 - 1], &t.n[..s1 - 1]);
                    let tail = self.table.eta_n(&t.a[s1 - 1..], &t.n[s1 - 1..]);
                    let c = ring.mul(&ring.mul(&head, &tail), &ring.from_int(gstar as i64));
                    ring.add_assign(&mut coeff, &c);
                }
                let c = ring.mul(&coeff, &ring.from_int(params.p.pow(big_a as u32) as i64));
                if c.is_zero() {
                    continue;
                }
                let (w, scalar) = self.word(&t);
                fa.add_term(&mut out, &w, &ring.mul(&c, &scalar));
            }
        }
        out
    }

    /// Tuples with 0 <= n_i <= top, max n = top, s < p, sum a_i p^{n_i} = target.
    fn free_tuples(&self, target: &BigInt, top: i64) -> Vec<Tuple> {
        let params = self.params();
        let p = params.p;
        let avals = self.a_values();
        let mut out = Vec::new();
        #[allow(clippy::too_many_arguments)]
        fn go(
            p: u64,
            a_max: u64,
            avals: &[u64],
            top: i64,
            rem: &BigInt,
            a: &mut Vec<u64>,
            n: &mut Vec<i64>,
            out: &mut Vec<Tuple>,
        ) {
            if !a.is_empty() && rem.is_zero() && n.contains(&top) {
                out.push(Tuple {
                    a: a.clone(),
                    n: n.clone(),
                });
            }
            if a.len() as u64 + 1 >= p {
                return;
            }
            let slots = p - 1 - a.len() as u64;
            if rem > &(BigInt::from(slots) * BigInt::from(a_max) * pow_big(p, top as u32)) {
                return;
            }
            for ni in 0..=top {
                for &ai in avals {
                    let v = BigInt::from(ai) * pow_big(p, ni as u32);
                    if &v > rem {
                        continue;
                    }
                    a.push(ai);
                    n.push(ni);
                    go(p, a_max, avals, top, &(rem - &v), a, n, out);
                    a.pop();
                    n.pop();
                }
            }
        }
        go(
            p,
            params.a_max,
            &avals,
            top,
            target,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut out,
        );
        out
    }

    pub fn reduce(&self, x: &LieElement) -> Vec<u64> {
        quotient_map(&self.lie, x, &self.lp)
    }

    /// The closed form at (gamma, mi + n) against sigma^{mi+n} F0(gamma, mi + n), mod L(p).
    pub fn check_closed_form(&self, d: &GammaData, n: u32) -> Result<bool, RamError> {
        let shift = d.m_iota + n as i64;
        let lhs = self.fbar_direct(&d.gamma, shift);
        let lhs = self
            .lie
            .from_assoc(&lhs)
            .map_err(|e| RamError::NotLie(e.to_string()))?;
        let rhs = self.lie.sigma(&self.f0(&d.gamma, shift), shift);
        Ok(self.reduce(&lhs) == self.reduce(&rhs))
    }
}

fn pow_rat(p: u64, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(pow_big(p, e as u32))
    } else {
        Rational::new(BigInt::one(), pow_big(p, (-e) as u32))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorRecord {
    #[serde(with = "bigint_num", skip_serializing_if = "BigInt::is_zero")]
    pub iota: BigInt,
    #[serde(with = "rational_str")]
    pub gamma: Rational,
    /// M(iota); absent for the gamma-indexed family.
    #[serde(rename = "M_iota", skip_serializing_if = "Option::is_none")]
    pub big_m_iota: Option<i64>,
    #[serde(rename = "m_iota", skip_serializing_if = "Option::is_none")]
    pub m_iota: Option<u32>,
    /// N in F0(gamma, N).
    #[serde(rename = "N")]
    pub big_n: i64,
    pub generator: Vec<(Vec<String>, Vec<u64>)>,
    pub reduced: Vec<(Vec<String>, Vec<u64>)>,
    #[serde(skip)]
    pub element: LieElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct RamificationIdeal {
    pub span: IdealSpan,
    pub generators: Vec<GeneratorRecord>,
}

impl RamificationIdeal {
    /// Rank over the residue ring of the image in L / L(p).
    pub fn quotient_log_size(&self, ctx: &RamContext) -> u64 {
        let zm = &ctx.lie.ring().zm;
        self.span.basis.log_size(zm) - ctx.lp.basis.log_size(zm)
    }
}

fn record(
    ctx: &RamContext,
    iota: BigInt,
    gamma: Rational,
    mi: Option<i64>,
    m: Option<u32>,
    big_n: i64,
) -> GeneratorRecord {
    let element = ctx.f0(&gamma, big_n);
    let reduced = ctx.lie.unflatten(&ctx.reduce(&element));
    GeneratorRecord {
        iota,
        gamma,
        big_m_iota: mi,
        m_iota: m,
        big_n,
        generator: ctx.lie.to_serial(&element),
        reduced: ctx.lie.to_serial(&reduced),
        element,
    }
}

fn close(ctx: &RamContext, generators: Vec<GeneratorRecord>, desc: &str) -> RamificationIdeal {
    let gens: Vec<LieElement> = generators.iter().map(|g| g.element.clone()).collect();
    let span = ideal_closure_over(&ctx.lie, &ctx.lp, &gens, desc);
    RamificationIdeal { span, generators }
}

/// The ch = 1 part of A+(p), sorted by iota.
pub fn aplus_one(params: &GlobalParams, sel: &ParamSelection) -> Vec<AdmissibleExponent> {
    let en = admissible::enumerate_a0(params, sel);
    admissible::filter_aplus(params, &en.exponents)
        .into_iter()
        .filter(|e| e.ch == 1)
        .collect()
}

/// Ideal generated by F0(gamma(iota), M(iota) + m_iota) over iota in the ch = 1 part of
/// A+(p), together with L(p). m_iota defaults to m(iota).
pub fn emit_by_exponent(
    ctx: &RamContext,
    sel: &ParamSelection,
    m_choice: &BTreeMap<BigInt, u32>,
) -> Result<RamificationIdeal, RamError> {
    let params = ctx.params();
    let list = aplus_one(params, sel);
    for k in m_choice.keys() {
        if !list.iter().any(|e| &e.iota == k) {
            return Err(RamError::UnknownIota(k.clone()));
        }
    }
    let mut jobs = Vec::new();
    for e in &list {
        let d = e
            .gamma_data
            .as_ref()
            .expect("ch = 1 carries gamma_data data");
        let m = match m_choice.get(&e.iota) {
            Some(&m) if m < d.m_iota_max => {
                return Err(RamError::MIotaTooSmall {
                    iota: e.iota.clone(),
                    given: m,
                    min: d.m_iota_max,
                })
            }
            Some(&m) => m,
            None => d.m_iota_max,
        };
        jobs.push((e.iota.clone(), d.clone(), m));
    }
    let gens = par::map(&jobs, |(iota, d, m)| {
        record(
            ctx,
            iota.clone(),
            d.gamma.clone(),
            Some(d.m_iota),
            Some(*m),
            d.m_iota + *m as i64,
        )
    });
    Ok(close(ctx, gens, "ideal from ch = 1 exponents"))
}

/// Ideal generated by F0(gamma, N* - 1) over all realizable gamma >= v0, together with L(p).
pub fn emit_by_gamma(ctx: &RamContext, sel: &ParamSelection) -> RamificationIdeal {
    let big_n = sel.n_star as i64 - 1;
    let gammas = realizable_gammas(ctx, big_n);
    let gens = par::map(&gammas, |g| {
        record(ctx, BigInt::zero(), g.clone(), None, None, big_n)
    });
    close(ctx, gens, "ideal from realizable gamma >= v0")
}

/// Distinct gamma(a, n) >= v0 over F0-shaped tuples with times >= -N, ascending.
pub fn realizable_gammas(ctx: &RamContext, big_n: i64) -> Vec<Rational> {
    let v0 = &ctx.params().v0;
    let mut gs: Vec<Rational> = ctx
        .f0_all_tuples(big_n)
        .into_iter()
        .map(|(g, _)| g)
        .filter(|g| g >= v0)
        .collect();
    gs.sort();
    gs.dedup();
    gs
}

/// Outcome of the end-to-end checks on one configuration.
#[derive(Clone, Debug, Serialize)]
pub struct RamReport {
    pub exponents: usize,
    pub closed_forms_lie: bool,
    pub closed_form_cases: usize,
    pub closed_form_ok: bool,
    pub generators_in_span: bool,
    pub spans_equal: bool,
    pub m_choice_independent: bool,
    pub quotient_log_size: u64,
}

impl RamReport {
    pub fn all(&self) -> bool {
        self.closed_forms_lie
            && self.closed_form_ok
            && self.generators_in_span
            && self.spans_equal
            && self.m_choice_independent
    }
}

pub fn check(ctx: &RamContext, sel: &ParamSelection) -> Result<RamReport, RamError> {
    let params = ctx.params();
    let list = aplus_one(params, sel);
    let cases: Vec<(GammaData, u32)> = list
        .iter()
        .flat_map(|e| {
            let d = e.gamma_data.clone().unwrap();
            (0..=d.m_iota_max).map(move |n| (d.clone(), n))
        })
        .collect();
    let lie_ok = par::map(&cases, |(d, n)| {
        ctx.lie
            .fa
            .is_lie(&ctx.fbar_direct(&d.gamma, d.m_iota + *n as i64))
    });
    let p47 = par::map(&cases, |(d, n)| ctx.check_closed_form(d, *n));
    let mut closed_form_ok = true;
    for r in p47 {
        closed_form_ok &= r?;
    }
    let t41 = emit_by_exponent(ctx, sel, &BTreeMap::new())?;
    let bumped: BTreeMap<BigInt, u32> = list
        .iter()
        .map(|e| {
            (
                e.iota.clone(),
                e.gamma_data.as_ref().unwrap().m_iota_max + 1,
            )
        })
        .collect();
    let t41b = emit_by_exponent(ctx, sel, &bumped)?;
    let t49 = emit_by_gamma(ctx, sel);
    let in_span = t41
        .generators
        .iter()
        .all(|g| t41.span.contains(&ctx.lie, &g.element))
        && t49
            .generators
            .iter()
            .all(|g| t49.span.contains(&ctx.lie, &g.element));
    Ok(RamReport {
        exponents: list.len(),
        closed_forms_lie: lie_ok.into_iter().all(|x| x),
        closed_form_cases: cases.len(),
        closed_form_ok,
        generators_in_span: in_span,
        spans_equal: t41.span.basis == t49.span.basis,
        m_choice_independent: t41.span.basis == t41b.span.basis,
        quotient_log_size: t41.quotient_log_size(ctx),
    })
}

/// Tuples with non-monotone times never contribute: eta(a, n) vanishes there.
pub fn non_monotone_vanish(table: &EtaTable, a: &[u64], n: &[i64]) -> bool {
    n.windows(2).all(|w| w[0] >= w[1]) || table.eta_n(a, n).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::{select, SelectionOverrides};
    use crate::nilpotentlie::LieAlgebra;
    use crate::params::{desk, rat, rat_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(params: &GlobalParams) -> RamContext {
        let lie = LieAlgebra::standard(params);
        let table = EtaTable::simple(lie.ring());
        RamContext::new(lie, table)
    }

    #[test]
    fn f0_examples() {
        let c = ctx(&desk::c1());
        let tuples = c.f0_tuples(&rat(4, 3), 1);
        assert_eq!(
            tuples,
            vec![Tuple {
                a: vec![1, 1],
                n: vec![0, -1]
            }]
        );
        let d10 = c.lie.generator(&GeneratorIndex::D { a: 1, n: 0 }).unwrap();
        let d11 = c.lie.generator(&GeneratorIndex::D { a: 1, n: 1 }).unwrap();
        assert_eq!(c.f0(&rat(4, 3), 1), c.lie.bracket(&d10, &d11));
        assert!(c.reduce(&c.f0(&rat_int(2), 0)).iter().all(|&x| x == 0));
        assert!(c.f0(&rat(1, 9), 1).is_zero());
    }

    #[test]
    fn f0_brute_force_tuples() {
        // every tuple of the F0 shape, including non-monotone times, by plain enumeration
        let c = ctx(&desk::c2());
        let avals = c.a_values();
        for big_n in [-1i64, 0, 1, 2] {
            let mut brute: BTreeMap<Rational, Vec<Tuple>> = BTreeMap::new();
            let lo = -big_n;
            for n1 in lo.max(0)..2 {
                for &a1 in avals.iter().filter(|&&a| a > 0) {
                    let g1 = Rational::from_integer(BigInt::from(a1)) * pow_rat(3, n1);
                    brute.entry(g1.clone()).or_default().push(Tuple {
                        a: vec![a1],
                        n: vec![n1],
                    });
                    for n2 in lo..=1 {
                        for &a2 in &avals {
                            let t = Tuple {
                                a: vec![a1, a2],
                                n: vec![n1, n2],
                            };
                            let g = &g1 + Rational::from_integer(BigInt::from(a2)) * pow_rat(3, n2);
                            if n2 > n1 {
                                assert!(non_monotone_vanish(&c.table, &t.a, &t.n));
                                continue;
                            }
                            brute.entry(g).or_default().push(t);
                        }
                    }
                }
            }
            for (g, mut ts) in brute {
                ts.sort();
                let mut ours = c.f0_tuples(&g, big_n);
                ours.sort();
                assert_eq!(ours, ts, "gamma={} N={}", g, big_n);
            }
        }
    }

    #[test]
    fn non_monotone_times_vanish_randomly() {
        let c = ctx(&desk::c3());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let s = rng.random_range(1..5);
            let (a, n) = crate::etaconst::random_tuple(&[0, 1, 2, 3], s, &mut rng);
            assert!(non_monotone_vanish(&c.table, &a, &n));
        }
    }

    #[test]
    fn closed_form_matches_f0_on_c1() {
        let params = desk::c1();
        let c = ctx(&params);
        let sel = select(&params, &SelectionOverrides::default()).unwrap();
        let list = aplus_one(&params, &sel);
        assert!(!list.is_empty());
        for e in &list {
            let d = e.gamma_data.as_ref().unwrap();
            assert!(d.gamma >= params.v0);
            for n in 0..=d.m_iota_max {
                let x = c.fbar_direct(&d.gamma, d.m_iota + n as i64);
                assert!(c.lie.fa.is_lie(&x));
                assert!(
                    c.check_closed_form(d, n).unwrap(),
                    "iota={} n={}",
                    e.iota,
                    n
                );
            }
        }
        // sigma-equivariance of the comparison
        let d = list[0].gamma_data.as_ref().unwrap();
        let lhs = c
            .lie
            .from_assoc(&c.fbar_direct(&d.gamma, d.m_iota))
            .unwrap();
        let rhs = c.lie.sigma(&c.f0(&d.gamma, d.m_iota), d.m_iota);
        assert_eq!(
            c.reduce(&c.lie.sigma(&lhs, 1)),
            c.reduce(&c.lie.sigma(&rhs, 1))
        );
        assert!(c.fbar_direct(&rat(1, 81), 0).is_zero());
    }

    #[test]
    fn ideal_descriptions_agree_on_c1() {
        let params = desk::c1();
        let c = ctx(&params);
        let sel = select(&params, &SelectionOverrides::default()).unwrap();
        let rep = check(&c, &sel).unwrap();
        assert!(rep.all(), "{:?}", rep);
        let gs = realizable_gammas(&c, sel.n_star as i64 - 1);
        assert!(gs.iter().all(|g| g >= &params.v0));
        assert_eq!(gs, realizable_gammas(&c, sel.n_star as i64 - 1));
    }

    #[test]
    fn m_choice_validation() {
        let params = desk::c1();
        let c = ctx(&params);
        let sel = select(&params, &SelectionOverrides::default()).unwrap();
        let e = aplus_one(&params, &sel).remove(0);
        let m = e.gamma_data.as_ref().unwrap().m_iota_max;
        if m > 0 {
            let bad = BTreeMap::from([(e.iota.clone(), m - 1)]);
            assert!(emit_by_exponent(&c, &sel, &bad).is_err());
        }
        let unknown = BTreeMap::from([(BigInt::from(-7), 3)]);
        assert!(matches!(
            emit_by_exponent(&c, &sel, &unknown),
            Err(RamError::UnknownIota(_))
        ));
    }

    #[test]
    fn empty_exponent_set_gives_lp() {
        let params = desk::c1();
        let c = ctx(&params);
        let span = ideal_closure_over(&c.lie, &c.lp, &[], "");
        assert_eq!(span.basis, c.lp.basis);
    }
}
