//! The Galois ring GR(p^M, N0) = (Z/p^M)[x]/(h) with Frobenius, trace,
//! a trace-one element, and truncated exp/log on nilpotent algebras.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::params::GlobalParams;

/// Arithmetic in Z/p^M with the modulus held in a machine word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Zmod {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl Zmod {
    pub fn new(p: u64, e: u32) -> Self {
        Zmod { p, e, q: p.pow(e) }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    pub fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.q as i128) as u64
    }

    /// Valuation of a residue; zero has valuation e.
    pub fn val(&self, a: u64) -> u32 {
        if a.is_multiple_of(self.q) {
            return self.e;
        }
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        if k >= self.e {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// Inverse of a unit by the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.q as i128, (a % self.q) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(self.from_i128(t0))
    }

    /// num/den for a unit denominator.
    pub fn ratio(&self, num: i64, den: i64) -> u64 {
        let d = self
            .inv(self.from_i64(den))
            .expect("denominator must be a unit mod p^M");
        self.mul(self.from_i64(num), d)
    }
}

/// Polynomial helpers over F_p, coefficient vectors in increasing degree.
mod fp_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let (mut b, mut e) = (a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut r = vec![0; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            r[i] = (x + p - y) % p;
        }
        trim(r)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % p;
            }
        }
        trim(r)
    }

    /// (quotient, remainder).
    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (vec![], r);
        }
        let lead_inv = inv(*b.last().unwrap(), p);
        let mut qt = vec![0; r.len() - b.len() + 1];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() * lead_inv % p;
            qt[shift] = c;
            for (i, &y) in b.iter().enumerate() {
                r[i + shift] = (r[i + shift] + p - c * y % p) % p;
            }
            r = trim(r);
        }
        (trim(qt), r)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn mulmod(a: &[u64], b: &[u64], h: &[u64], p: u64) -> Vec<u64> {
        divrem(&mul(a, b, p), h, p).1
    }

    /// x^(p^k) mod h.
    pub fn x_pow_pk(k: u32, h: &[u64], p: u64) -> Vec<u64> {
        let mut cur = divrem(&[0, 1], h, p).1;
        for _ in 0..k {
            let mut r = vec![1];
            let mut base = cur.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    r = mulmod(&r, &base, h, p);
                }
                base = mulmod(&base, &base, h, p);
                e >>= 1;
            }
            cur = r;
        }
        cur
    }

    /// Rabin's irreducibility test for a monic h of degree n over F_p.
    pub fn is_irreducible(h: &[u64], p: u64) -> bool {
        let h = trim(h.iter().map(|c| c % p).collect());
        let n = h.len() - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x = vec![0, 1];
        if sub(&x_pow_pk(n as u32, &h, p), &x, p) != divrem(&[], &h, p).1 {
            return false;
        }
        let mut m = n;
        let mut d = 2;
        let mut primes = vec![];
        while m > 1 {
            if m.is_multiple_of(d) {
                primes.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        for q in primes {
            let t = sub(&x_pow_pk((n / q) as u32, &h, p), &x, p);
            if gcd(&t, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }

    /// Inverse of a modulo the irreducible h, via extended Euclid.
    pub fn inv_mod(a: &[u64], h: &[u64], p: u64) -> Option<Vec<u64>> {
        let (mut r0, mut r1) = (trim(h.to_vec()), divrem(a, h, p).1);
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
        if r1.is_empty() {
            return None;
        }
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.len() != 1 {
            return None;
        }
        let c = inv(r0[0], p);
        Some(divrem(&mul(&s0, &[c], p), h, p).1)
    }
}

/// Conway polynomials (coefficients in increasing degree) for the desk-scale range.
pub fn conway_polynomial(p: u64, n: u32) -> Option<Vec<u64>> {
    let c: &[u64] = match (p, n) {
        (3, 1) => &[1, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (5, 1) => &[3, 1],
        (5, 2) => &[2, 4, 1],
        (5, 3) => &[3, 3, 0, 1],
        (5, 4) => &[2, 4, 4, 0, 1],
        (7, 1) => &[4, 1],
        (7, 2) => &[3, 6, 1],
        (7, 3) => &[4, 0, 6, 1],
        (7, 4) => &[3, 4, 5, 0, 1],
        (11, 1) => &[9, 1],
        (11, 2) => &[2, 7, 1],
        (11, 3) => &[9, 2, 0, 1],
        (11, 4) => &[2, 10, 8, 0, 1],
        (13, 1) => &[11, 1],
        (13, 2) => &[2, 12, 1],
        (13, 3) => &[11, 2, 0, 1],
        (13, 4) => &[2, 12, 3, 0, 1],
        _ => return None,
    };
    Some(c.to_vec())
}

/// Lexicographically first monic irreducible polynomial of degree n over F_p.
fn first_irreducible(p: u64, n: u32) -> Vec<u64> {
    let mut low = vec![0u64; n as usize];
    loop {
        let mut h = low.clone();
        h.push(1);
        if fp_poly::is_irreducible(&h, p) {
            return h;
        }
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
            assert!(i < n as usize, "no irreducible polynomial found");
        }
    }
}

/// Element of GR(p^M, N0): coordinates in the power basis 1, x, .., x^(N0-1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GaloisRingElem {
    pub coeffs: Vec<u64>,
}

impl GaloisRingElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Shared, immutable description of the coefficient ring.
#[derive(Debug, Serialize)]
pub struct RingContext {
    pub params: GlobalParams,
    pub zm: Zmod,
    /// Monic modulus h, increasing degree, lifted to [0, p).
    pub modulus_poly: Vec<u64>,
    pub alpha0: GaloisRingElem,
    #[serde(skip)]
    frob: Vec<Vec<Vec<u64>>>,
    #[serde(skip)]
    xpow: Vec<Vec<u64>>,
}

pub type Ring = Arc<RingContext>;

impl RingContext {
    /// Context with the Conway polynomial (or the first irreducible one outside the table).
    pub fn new(params: &GlobalParams) -> Ring {
        let h = conway_polynomial(params.p, params.n0)
            .unwrap_or_else(|| first_irreducible(params.p, params.n0));
        Self::with_modulus(params, h).expect("table polynomial is irreducible")
    }

    /// Context with an explicit monic modulus; rejects h reducible mod p.
    pub fn with_modulus(params: &GlobalParams, h: Vec<u64>) -> Result<Ring, String> {
        let p = params.p;
        let n0 = params.n0 as usize;
        if h.len() != n0 + 1 || h[n0] != 1 {
            return Err(format!("modulus must be monic of degree {}", n0));
        }
        if !fp_poly::is_irreducible(&h, p) {
            return Err("modulus is reducible mod p".into());
        }
        let zm = Zmod::new(p, params.big_m);
        let h: Vec<u64> = h.iter().map(|c| c % p).collect();
        // x^k reduced mod h for k < 2 N0 - 1.
        let mut xpow = Vec::new();
        let mut cur = vec![0u64; n0];
        cur[0] = 1;
        for _ in 0..(2 * n0).max(1) {
            xpow.push(cur.clone());
            let mut next = vec![0u64; n0];
            let top = cur[n0 - 1];
            for i in (1..n0).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..n0 {
                next[i] = zm.sub(next[i], zm.mul(top, h[i]));
            }
            cur = next;
        }
        let mut ctx = RingContext {
            params: params.clone(),
            zm,
            modulus_poly: h,
            alpha0: GaloisRingElem {
                coeffs: vec![0; n0],
            },
            frob: vec![],
            xpow,
        };
        let sx = ctx.hensel_frobenius_of_x();
        let mut tables = Vec::with_capacity(n0);
        let mut images: Vec<GaloisRingElem> = (0..n0).map(|i| ctx.basis(i)).collect();
        for _ in 0..n0 {
            tables.push(images.iter().map(|e| e.coeffs.clone()).collect::<Vec<_>>());
            images = images
                .iter()
                .map(|e| ctx.apply_sigma_image(e, &sx))
                .collect();
        }
        for (i, img) in images.iter().enumerate() {
            if *img != ctx.basis(i) {
                return Err("Frobenius does not have order N0".into());
            }
        }
        ctx.frob = tables;
        ctx.alpha0 = ctx.trace_one_element();
        Ok(Arc::new(ctx))
    }

    pub fn n0(&self) -> usize {
        self.params.n0 as usize
    }

    pub fn zero(&self) -> GaloisRingElem {
        GaloisRingElem {
            coeffs: vec![0; self.n0()],
        }
    }

    pub fn one(&self) -> GaloisRingElem {
        self.from_int(1)
    }

    pub fn basis(&self, i: usize) -> GaloisRingElem {
        let mut c = vec![0; self.n0()];
        c[i] = 1;
        GaloisRingElem { coeffs: c }
    }

    pub fn from_int(&self, x: i64) -> GaloisRingElem {
        let mut c = vec![0; self.n0()];
        c[0] = self.zm.from_i64(x);
        GaloisRingElem { coeffs: c }
    }

    pub fn from_residue(&self, x: u64) -> GaloisRingElem {
        let mut c = vec![0; self.n0()];
        c[0] = x % self.zm.q;
        GaloisRingElem { coeffs: c }
    }

    /// num/den with den a unit mod p.
    pub fn from_ratio(&self, num: i64, den: i64) -> GaloisRingElem {
        self.from_residue(self.zm.ratio(num, den))
    }

    pub fn add(&self, a: &GaloisRingElem, b: &GaloisRingElem) -> GaloisRingElem {
        GaloisRingElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.zm.add(x, y))
                .collect(),
        }
    }

    pub fn add_assign(&self, a: &mut GaloisRingElem, b: &GaloisRingElem) {
        for (x, &y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = self.zm.add(*x, y);
        }
    }

    pub fn sub(&self, a: &GaloisRingElem, b: &GaloisRingElem) -> GaloisRingElem {
        GaloisRingElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.zm.sub(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &GaloisRingElem) -> GaloisRingElem {
        GaloisRingElem {
            coeffs: a.coeffs.iter().map(|&x| self.zm.neg(x)).collect(),
        }
    }

    /// Multiplication by a residue of Z/p^M.
    pub fn scale(&self, a: &GaloisRingElem, c: u64) -> GaloisRingElem {
        GaloisRingElem {
            coeffs: a.coeffs.iter().map(|&x| self.zm.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &GaloisRingElem, b: &GaloisRingElem) -> GaloisRingElem {
        let n = self.n0();
        if n == 1 {
            return GaloisRingElem {
                coeffs: vec![self.zm.mul(a.coeffs[0], b.coeffs[0])],
            };
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = self.zm.add(prod[i + j], self.zm.mul(x, y));
            }
        }
        let mut out = vec![0u64; n];
        for (k, &c) in prod.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, &r) in self.xpow[k].iter().enumerate() {
                out[i] = self.zm.add(out[i], self.zm.mul(c, r));
            }
        }
        GaloisRingElem { coeffs: out }
    }

    pub fn is_unit(&self, a: &GaloisRingElem) -> bool {
        a.coeffs.iter().any(|&c| c % self.zm.p != 0)
    }

    /// Inverse of a unit: extended Euclid mod p, then Newton lifting to p^M.
    pub fn inverse(&self, a: &GaloisRingElem) -> Option<GaloisRingElem> {
        let p = self.zm.p;
        let abar: Vec<u64> = a.coeffs.iter().map(|c| c % p).collect();
        let v = fp_poly::inv_mod(&abar, &self.modulus_poly, p)?;
        let mut c = vec![0u64; self.n0()];
        for (i, x) in v.into_iter().enumerate() {
            c[i] = x;
        }
        let mut inv = GaloisRingElem { coeffs: c };
        let two = self.from_int(2);
        for _ in 0..self.params.big_m {
            inv = self.mul(&inv, &self.sub(&two, &self.mul(a, &inv)));
        }
        debug_assert_eq!(self.mul(a, &inv), self.one());
        Some(inv)
    }

    fn eval_h(&self, y: &GaloisRingElem) -> GaloisRingElem {
        let mut acc = self.zero();
        for &c in self.modulus_poly.iter().rev() {
            acc = self.add(&self.mul(&acc, y), &self.from_residue(c));
        }
        acc
    }

    fn eval_h_prime(&self, y: &GaloisRingElem) -> GaloisRingElem {
        let mut acc = self.zero();
        for (k, &c) in self.modulus_poly.iter().enumerate().skip(1).rev() {
            let coef = self.zm.mul(c, k as u64 % self.zm.q);
            acc = self.add(&self.mul(&acc, y), &self.from_residue(coef));
        }
        acc
    }

    /// The root of h congruent to x^p mod p.
    fn hensel_frobenius_of_x(&self) -> GaloisRingElem {
        let n = self.n0();
        let x = if n == 1 {
            self.from_residue(self.zm.neg(self.modulus_poly[0]))
        } else {
            self.basis(1)
        };
        let mut y = self.one();
        for _ in 0..self.zm.p {
            y = self.mul(&y, &x);
        }
        for _ in 0..=self.params.big_m {
            let d = self
                .inverse(&self.eval_h_prime(&y))
                .expect("h is separable");
            y = self.sub(&y, &self.mul(&self.eval_h(&y), &d));
        }
        debug_assert!(self.eval_h(&y).is_zero());
        y
    }

    fn apply_sigma_image(&self, e: &GaloisRingElem, sx: &GaloisRingElem) -> GaloisRingElem {
        let mut acc = self.zero();
        let mut pw = self.one();
        for &c in &e.coeffs {
            acc = self.add(&acc, &self.scale(&pw, c));
            pw = self.mul(&pw, sx);
        }
        acc
    }

    /// sigma^power(x); the power is reduced mod N0.
    pub fn frobenius(&self, x: &GaloisRingElem, power: i64) -> GaloisRingElem {
        let n = self.n0();
        let k = power.rem_euclid(n as i64) as usize;
        if k == 0 {
            return x.clone();
        }
        let mut out = vec![0u64; n];
        for (i, &c) in x.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, &t) in self.frob[k][i].iter().enumerate() {
                out[j] = self.zm.add(out[j], self.zm.mul(c, t));
            }
        }
        GaloisRingElem { coeffs: out }
    }

    /// Absolute trace, an element of the prime subring Z/p^M.
    pub fn trace(&self, x: &GaloisRingElem) -> u64 {
        let mut acc = self.zero();
        for k in 0..self.n0() {
            acc = self.add(&acc, &self.frobenius(x, k as i64));
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// Lexicographically smallest coordinate vector with trace 1.
    pub fn trace_one_element(&self) -> GaloisRingElem {
        let zm = self.zm;
        let n = self.n0();
        let t: Vec<u64> = (0..n).map(|i| self.trace(&self.basis(i))).collect();
        let mut target = 1u64;
        let mut c = vec![0u64; n];
        for i in 0..n {
            // The remaining coordinates can reach exactly the multiples of p^r.
            let r = t[i + 1..].iter().map(|&x| zm.val(x)).min().unwrap_or(zm.e);
            let v = zm.val(t[i]);
            let need = |x: u64| zm.val(x) >= r;
            let ci = if need(target) {
                0
            } else {
                assert!(v < r && zm.val(target) >= v, "trace map is not surjective");
                let modr = zm.p.pow(r - v);
                let tu = (t[i] / zm.p.pow(v)) % modr;
                let tt = (target / zm.p.pow(v)) % modr;
                let sub = Zmod {
                    p: zm.p,
                    e: r - v,
                    q: modr,
                };
                sub.mul(tt, sub.inv(tu).expect("unit part"))
            };
            c[i] = ci;
            target = zm.sub(target, zm.mul(ci, t[i]));
        }
        assert_eq!(target, 0, "trace map is not surjective");
        GaloisRingElem { coeffs: c }
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> GaloisRingElem {
        GaloisRingElem {
            coeffs: (0..self.n0())
                .map(|_| rng.random_range(0..self.zm.q))
                .collect(),
        }
    }
}

/// An associative algebra in which every element of the augmentation ideal is
/// nilpotent of order at most `nil_order` (x^nil_order = 0).
pub trait NilpotentAlgebra {
    type Elem: Clone;
    fn nil_order(&self) -> usize;
    fn one(&self) -> Self::Elem;
    fn zero_elem(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplication by num/den, den a unit mod p.
    fn scale_ratio(&self, a: &Self::Elem, num: i64, den: i64) -> Self::Elem;
}

/// Sum of x^i / i! for i < p.
pub fn truncated_exp<A: NilpotentAlgebra>(alg: &A, x: &A::Elem) -> A::Elem {
    let mut acc = alg.one();
    let mut term = alg.one();
    for i in 1..alg.nil_order() {
        term = alg.scale_ratio(&alg.mul(&term, x), 1, i as i64);
        acc = alg.add(&acc, &term);
    }
    acc
}

/// Sum of (-1)^(i+1) (y-1)^i / i for 1 <= i < p.
pub fn truncated_log<A: NilpotentAlgebra>(alg: &A, y: &A::Elem) -> A::Elem {
    let z = alg.sub(y, &alg.one());
    let mut acc = alg.zero_elem();
    let mut pw = alg.one();
    for i in 1..alg.nil_order() {
        pw = alg.mul(&pw, &z);
        let sign = if i % 2 == 1 { 1 } else { -1 };
        acc = alg.add(&acc, &alg.scale_ratio(&pw, sign, i as i64));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{desk, rat_int};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64, m: u32, n0: u32) -> Ring {
        RingContext::new(&GlobalParams::new(p, m, n0, rat_int(1), p))
    }

    #[test]
    fn table_polynomials_are_irreducible() {
        for p in [3u64, 5, 7, 11, 13] {
            for n in 1..=4 {
                let h = conway_polynomial(p, n).unwrap();
                assert!(fp_poly::is_irreducible(&h, p), "p={} n={}", p, n);
            }
        }
        assert!(!fp_poly::is_irreducible(&[1, 0, 1], 5)); // x^2+1 = (x-2)(x+2) mod 5
    }

    #[test]
    fn frobenius_has_order_n0_and_fixes_prime_ring() {
        for (p, m, n0) in [(3, 1, 2), (3, 2, 2), (3, 3, 3), (5, 2, 4), (7, 2, 3)] {
            let r = ctx(p, m, n0);
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for _ in 0..50 {
                let x = r.random(&mut rng);
                assert_eq!(r.frobenius(&x, n0 as i64), x);
                assert_eq!(r.frobenius(&r.frobenius(&x, 1), n0 as i64 - 1), x);
                assert_eq!(r.frobenius(&x, -1), r.frobenius(&x, n0 as i64 - 1));
            }
            let c = r.from_int(7);
            assert_eq!(r.frobenius(&c, 1), c);
        }
    }

    #[test]
    fn frobenius_mod_p_is_cubing() {
        // p=3, M=1, h = x^2+x+2: x^2 = 2x+1, so x^3 = 2x^2+x = 2x+2.
        let g = GlobalParams::new(3, 1, 2, rat_int(1), 2);
        let r = RingContext::with_modulus(&g, vec![2, 1, 1]).unwrap();
        let x = r.basis(1);
        let x3 = r.mul(&r.mul(&x, &x), &x);
        assert_eq!(r.frobenius(&x, 1), x3);
        assert_eq!(x3.coeffs, vec![2, 2]);
        assert!(RingContext::with_modulus(&g, vec![1, 0, 1]).is_ok());
        assert!(RingContext::with_modulus(&g, vec![2, 0, 1]).is_err()); // x^2+2 = (x-1)(x+1)
    }

    #[test]
    fn trace_one_element_examples() {
        let r = ctx(5, 2, 1);
        assert_eq!(r.alpha0, r.one());
        let r = RingContext::new(&desk::c1());
        // Tr(1) = 2, Tr(x) = 1 for h = x^2+2x+2 over F_3: the smallest solution is x.
        assert_eq!(r.trace(&r.one()), 2);
        assert_eq!(r.trace(&r.basis(1)), 1);
        assert_eq!(r.alpha0.coeffs, vec![0, 1]);
        for (p, m, n0) in [(3, 2, 2), (3, 3, 3), (5, 2, 4), (7, 1, 2)] {
            let r = ctx(p, m, n0);
            assert_eq!(r.trace(&r.alpha0), 1);
        }
    }

    #[test]
    fn sigma_is_a_ring_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, m, n0) in [(3, 2, 2), (5, 2, 3), (3, 3, 4)] {
            let r = ctx(p, m, n0);
            for _ in 0..1000 {
                let (x, y) = (r.random(&mut rng), r.random(&mut rng));
                assert_eq!(
                    r.frobenius(&r.add(&x, &y), 1),
                    r.add(&r.frobenius(&x, 1), &r.frobenius(&y, 1))
                );
                assert_eq!(
                    r.frobenius(&r.mul(&x, &y), 1),
                    r.mul(&r.frobenius(&x, 1), &r.frobenius(&y, 1))
                );
            }
        }
    }

    #[test]
    fn units_are_exactly_the_elements_prime_to_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, m, n0) in [(3, 2, 2), (5, 3, 3), (7, 2, 2)] {
            let r = ctx(p, m, n0);
            for _ in 0..500 {
                let x = r.random(&mut rng);
                match r.inverse(&x) {
                    Some(y) => {
                        assert!(r.is_unit(&x));
                        assert_eq!(r.mul(&x, &y), r.one());
                    }
                    None => assert!(!r.is_unit(&x)),
                }
            }
        }
    }

    #[test]
    fn zmod_basics() {
        let z = Zmod::new(3, 2);
        assert_eq!(z.val(0), 2);
        assert_eq!(z.val(3), 1);
        assert_eq!(z.val(4), 0);
        assert_eq!(z.inv(2), Some(5));
        assert_eq!(z.inv(3), None);
        assert_eq!(z.ratio(1, 2), 5);
    }
}
