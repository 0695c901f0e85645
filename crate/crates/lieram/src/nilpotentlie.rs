//! The free Lie algebra of class < p over GR(p^M, N0) in Lyndon coordinates,
//! the semilinear Frobenius, ideal closures and the quotient by L(p).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coeffring::{GaloisRingElem, Ring, RingContext};
use crate::freeassoc::{
    lyndon_words, standard_bracketing, Alphabet, AssocElement, Bracket, FreeAssoc, GeneratorIndex,
    Word,
};
use crate::modlinalg::{extend, howellize, SpanBasis};
use crate::par;
use crate::params::GlobalParams;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("associative element is not a Lie element (offending word {0:?})")]
    NotLie(Vec<u16>),
    #[error("letter {0} is not in the alphabet")]
    UnknownLetter(String),
    #[error("word {0:?} is not a basis word")]
    NotBasisWord(Vec<String>),
    #[error("coefficient for {0:?} needs at most N0 entries")]
    BadCoefficient(Vec<String>),
}

/// Sparse Lyndon coordinates: basis index -> coefficient, zeros never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LieElement {
    pub coords: BTreeMap<usize, GaloisRingElem>,
}

impl LieElement {
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Free Lie algebra of class < p on an alphabet, with cached Lyndon expansions
/// and Frobenius images of basis elements.
#[derive(Debug)]
pub struct LieAlgebra {
    pub fa: FreeAssoc,
    pub basis: Vec<Word>,
    pub brackets: Vec<Bracket>,
    index: HashMap<Word, usize>,
    expansions: Vec<AssocElement>,
    /// sigma_basis[k][i] = sigma^k(b_i) for 0 <= k < N0.
    sigma_basis: Vec<Vec<LieElement>>,
}

pub type Lie = Arc<LieAlgebra>;

impl LieAlgebra {
    pub fn standard(params: &GlobalParams) -> Lie {
        let ring = RingContext::new(params);
        Self::new(ring.clone(), Arc::new(Alphabet::standard(params)))
    }

    pub fn new(ring: Ring, alphabet: Arc<Alphabet>) -> Lie {
        let fa = FreeAssoc::new(ring.clone(), alphabet.clone());
        let basis = lyndon_words(alphabet.len(), fa.max_len);
        let brackets: Vec<Bracket> = basis
            .iter()
            .map(|w| standard_bracketing(w).expect("Lyndon"))
            .collect();
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let expansions = brackets.iter().map(|b| fa.expand_bracket(b)).collect();
        let mut lie = LieAlgebra {
            fa,
            basis,
            brackets,
            index,
            expansions,
            sigma_basis: vec![],
        };
        let n0 = ring.n0() as i64;
        let mut tables = Vec::with_capacity(n0 as usize);
        for k in 0..n0 {
            let row: Vec<LieElement> = (0..lie.basis.len())
                .map(|i| {
                    let shifted = lie.brackets[i].map_letters(&|l| alphabet.shift(l, k));
                    lie.from_assoc(&lie.fa.expand_bracket(&shifted))
                        .expect("shifted bracket is Lie")
                })
                .collect();
            tables.push(row);
        }
        lie.sigma_basis = tables;
        Arc::new(lie)
    }

    pub fn ring(&self) -> &Ring {
        &self.fa.ring
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.fa.alphabet
    }

    pub fn params(&self) -> &GlobalParams {
        &self.fa.ring.params
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn flat_dim(&self) -> usize {
        self.basis.len() * self.ring().n0()
    }

    pub fn index_of(&self, w: &[u16]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn zero(&self) -> LieElement {
        LieElement::default()
    }

    pub fn basis_elem(&self, i: usize, c: GaloisRingElem) -> LieElement {
        let mut x = LieElement::default();
        if !c.is_zero() {
            x.coords.insert(i, c);
        }
        x
    }

    pub fn letter(&self, l: u16) -> LieElement {
        self.basis_elem(self.index[&vec![l]], self.ring().one())
    }

    pub fn generator(&self, g: &GeneratorIndex) -> Result<LieElement, LieError> {
        let l = self
            .alphabet()
            .index_of(g)
            .ok_or_else(|| LieError::UnknownLetter(g.to_string()))?;
        Ok(self.letter(l))
    }

    pub fn add(&self, a: &LieElement, b: &LieElement) -> LieElement {
        let mut out = a.clone();
        self.add_into(&mut out, b);
        out
    }

    pub fn add_into(&self, out: &mut LieElement, b: &LieElement) {
        let ring = self.ring();
        for (&i, c) in &b.coords {
            match out.coords.get_mut(&i) {
                Some(e) => {
                    ring.add_assign(e, c);
                    if e.is_zero() {
                        out.coords.remove(&i);
                    }
                }
                None => {
                    out.coords.insert(i, c.clone());
                }
            }
        }
    }

    pub fn neg(&self, a: &LieElement) -> LieElement {
        LieElement {
            coords: a
                .coords
                .iter()
                .map(|(&i, c)| (i, self.ring().neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, a: &LieElement, b: &LieElement) -> LieElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &LieElement, c: &GaloisRingElem) -> LieElement {
        let mut out = LieElement::default();
        for (&i, x) in &a.coords {
            let y = self.ring().mul(x, c);
            if !y.is_zero() {
                out.coords.insert(i, y);
            }
        }
        out
    }

    pub fn scale_int(&self, a: &LieElement, k: i64) -> LieElement {
        self.scale(a, &self.ring().from_int(k))
    }

    pub fn to_assoc(&self, x: &LieElement) -> AssocElement {
        let mut out = self.fa.zero();
        for (&i, c) in &x.coords {
            self.fa
                .add_into(&mut out, &self.fa.scale(&self.expansions[i], c));
        }
        out
    }

    /// Lyndon coordinates by leading-word elimination; fails if x is not Lie.
    pub fn from_assoc(&self, x: &AssocElement) -> Result<LieElement, LieError> {
        let mut rem = x.clone();
        let mut out = LieElement::default();
        while let Some((w, c)) = rem.terms.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            let i = self
                .index
                .get(&w)
                .copied()
                .ok_or(LieError::NotLie(w.clone()))?;
            self.fa.add_into(
                &mut rem,
                &self.fa.scale(&self.expansions[i], &self.ring().neg(&c)),
            );
            debug_assert!(rem.coeff(&w).is_none());
            out.coords.insert(i, c);
        }
        Ok(out)
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        if x.is_zero() || y.is_zero() {
            return self.zero();
        }
        let c = self.fa.commutator(&self.to_assoc(x), &self.to_assoc(y));
        self.from_assoc(&c)
            .expect("commutator of Lie elements is Lie")
    }

    /// Left-nested bracket of letters.
    pub fn monomial(&self, w: &[u16]) -> LieElement {
        self.from_assoc(&self.fa.left_nested(w))
            .expect("bracket monomial is Lie")
    }

    /// sigma^k: Frobenius on coefficients, n -> n+k on letters.
    pub fn sigma(&self, x: &LieElement, k: i64) -> LieElement {
        let n0 = self.ring().n0() as i64;
        let k = k.rem_euclid(n0);
        if k == 0 {
            return x.clone();
        }
        let mut out = LieElement::default();
        for (&i, c) in &x.coords {
            let fc = self.ring().frobenius(c, k);
            self.add_into(&mut out, &self.scale(&self.sigma_basis[k as usize][i], &fc));
        }
        out
    }

    /// sigma^n(alpha0) D0, or None if D0 is not in the alphabet.
    pub fn d0n(&self, n: i64) -> Option<LieElement> {
        let l = self.alphabet().index_of(&GeneratorIndex::D0)?;
        let ring = self.ring();
        Some(self.scale(&self.letter(l), &ring.frobenius(&ring.alpha0, n)))
    }

    /// Coordinates over Z/p^M: index i*N0 + j holds coordinate j of the coefficient of b_i.
    pub fn flatten(&self, x: &LieElement) -> Vec<u64> {
        let n0 = self.ring().n0();
        let mut v = vec![0u64; self.flat_dim()];
        for (&i, c) in &x.coords {
            v[i * n0..(i + 1) * n0].copy_from_slice(&c.coeffs);
        }
        v
    }

    pub fn unflatten(&self, v: &[u64]) -> LieElement {
        let n0 = self.ring().n0();
        let mut out = LieElement::default();
        for i in 0..self.dim() {
            let c = GaloisRingElem {
                coeffs: v[i * n0..(i + 1) * n0].to_vec(),
            };
            if !c.is_zero() {
                out.coords.insert(i, c);
            }
        }
        out
    }

    /// Flattened rows of x times each power-basis element of the coefficient ring.
    pub fn ring_multiples(&self, x: &LieElement) -> Vec<Vec<u64>> {
        (0..self.ring().n0())
            .map(|j| self.flatten(&self.scale(x, &self.ring().basis(j))))
            .collect()
    }

    pub fn random<R: Rng>(&self, rng: &mut R, terms: usize) -> LieElement {
        let mut x = self.zero();
        for _ in 0..terms {
            let i = rng.random_range(0..self.dim());
            self.add_into(&mut x, &self.basis_elem(i, self.ring().random(rng)));
        }
        x
    }

    pub fn to_serial(&self, x: &LieElement) -> Vec<(Vec<String>, Vec<u64>)> {
        x.coords
            .iter()
            .map(|(&i, c)| (self.alphabet().word_tags(&self.basis[i]), c.coeffs.clone()))
            .collect()
    }

    /// Inverse of `to_serial`; repeated words are summed, coefficients reduced mod p^M.
    pub fn from_serial(&self, terms: &[(Vec<String>, Vec<u64>)]) -> Result<LieElement, LieError> {
        let ring = self.ring();
        let mut out = self.zero();
        for (tags, coeffs) in terms {
            let mut w = Vec::with_capacity(tags.len());
            for t in tags {
                let g: GeneratorIndex =
                    t.parse().map_err(|_| LieError::UnknownLetter(t.clone()))?;
                w.push(
                    self.alphabet()
                        .index_of(&g)
                        .ok_or_else(|| LieError::UnknownLetter(t.clone()))?,
                );
            }
            let i = self
                .index_of(&w)
                .ok_or_else(|| LieError::NotBasisWord(tags.clone()))?;
            if coeffs.len() > ring.n0() {
                return Err(LieError::BadCoefficient(tags.clone()));
            }
            let mut c = ring.zero();
            for (j, &v) in coeffs.iter().enumerate() {
                c.coeffs[j] = v % ring.zm.q;
            }
            self.add_into(&mut out, &self.basis_elem(i, c));
        }
        Ok(out)
    }
}

/// A coefficient-ring submodule of the Lie algebra in Howell form.
#[derive(Clone, Debug, Serialize)]
pub struct IdealSpan {
    pub basis: SpanBasis,
    pub description: String,
}

impl IdealSpan {
    pub fn contains(&self, lie: &LieAlgebra, x: &LieElement) -> bool {
        self.basis.contains(&lie.ring().zm, &lie.flatten(x))
    }

    pub fn contains_span(&self, lie: &LieAlgebra, other: &IdealSpan) -> bool {
        self.basis.contains_all(&lie.ring().zm, &other.basis)
    }

    pub fn elements(&self, lie: &LieAlgebra) -> Vec<LieElement> {
        self.basis.rows.iter().map(|r| lie.unflatten(r)).collect()
    }
}

/// Order in which one saturation round applies the closure operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaturationOrder {
    BracketsFirst,
    SigmaFirst,
}

/// Howell form of the coefficient-ring span of the given elements.
pub fn ring_span(lie: &LieAlgebra, gens: &[LieElement], description: &str) -> IdealSpan {
    let rows = par::flat_map(gens, |g| lie.ring_multiples(g));
    IdealSpan {
        basis: howellize(&lie.ring().zm, lie.flat_dim(), rows),
        description: description.into(),
    }
}

pub fn ideal_closure(lie: &LieAlgebra, gens: &[LieElement], sigma_stable: bool) -> IdealSpan {
    ideal_closure_ordered(lie, gens, sigma_stable, SaturationOrder::BracketsFirst)
}

/// Smallest coefficient-ring submodule containing `gens`, closed under bracket with every
/// letter and optionally under sigma; saturates until the Howell form is stable.
pub fn ideal_closure_ordered(
    lie: &LieAlgebra,
    gens: &[LieElement],
    sigma_stable: bool,
    order: SaturationOrder,
) -> IdealSpan {
    let zm = lie.ring().zm;
    let mut basis = ring_span(lie, gens, "").basis;
    let letters: Vec<u16> = (0..lie.alphabet().len() as u16).collect();
    loop {
        let elems: Vec<LieElement> = basis.rows.iter().map(|r| lie.unflatten(r)).collect();
        let step = |x: &LieElement| -> Vec<Vec<u64>> {
            let mut out = Vec::new();
            let brackets = |out: &mut Vec<Vec<u64>>| {
                for &l in &letters {
                    out.extend(lie.ring_multiples(&lie.bracket(x, &lie.letter(l))));
                }
            };
            let sig = |out: &mut Vec<Vec<u64>>| {
                if sigma_stable {
                    out.extend(lie.ring_multiples(&lie.sigma(x, 1)));
                }
            };
            match order {
                SaturationOrder::BracketsFirst => {
                    brackets(&mut out);
                    sig(&mut out);
                }
                SaturationOrder::SigmaFirst => {
                    sig(&mut out);
                    brackets(&mut out);
                }
            }
            out
        };
        let extra = par::flat_map(&elems, step);
        let next = extend(&zm, &basis, extra);
        if next == basis {
            break;
        }
        basis = next;
    }
    IdealSpan {
        basis,
        description: format!("ideal closure of {} generators", gens.len()),
    }
}

/// Ideal generated by `gens` together with an existing ideal (e.g. L(p)).
pub fn ideal_closure_over(
    lie: &LieAlgebra,
    base: &IdealSpan,
    gens: &[LieElement],
    description: &str,
) -> IdealSpan {
    let mut all = base.elements(lie);
    all.extend(gens.iter().cloned());
    let mut span = ideal_closure(lie, &all, true);
    span.description = description.into();
    span
}

/// L(p) over the truncated alphabet.
pub fn build_lp(lie: &LieAlgebra) -> IdealSpan {
    crate::filtration::build_lw(lie, lie.params().p as usize)
}

/// Canonical representative of x modulo the ideal.
pub fn quotient_map(lie: &LieAlgebra, x: &LieElement, ideal: &IdealSpan) -> Vec<u64> {
    ideal.basis.reduce(&lie.ring().zm, &lie.flatten(x))
}
