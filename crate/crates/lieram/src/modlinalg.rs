//! Howell normal form over Z/p^M: canonical bases, membership, equality.

use serde::Serialize;

use crate::coeffring::Zmod;

/// Row basis of a Z/p^M-submodule of (Z/p^M)^n in Howell normal form.
///
/// Each row starts with p^e at its pivot column, pivot columns strictly increase,
/// entries above a pivot p^e lie in [0, p^e), and the row set is closed under the
/// annihilator step (p^(M-e) times a row is reduced to zero by the rows below it).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanBasis {
    pub rows: Vec<Vec<u64>>,
    pub ambient_dim: usize,
    pub modulus: u64,
    #[serde(skip)]
    pivots: Vec<(usize, u32)>,
}

fn axpy(zm: &Zmod, dst: &mut [u64], c: u64, src: &[u64], from: usize) {
    if c == 0 {
        return;
    }
    for j in from..dst.len() {
        if src[j] != 0 {
            dst[j] = zm.sub(dst[j], zm.mul(c, src[j]));
        }
    }
}

impl SpanBasis {
    pub fn empty(zm: &Zmod, dim: usize) -> Self {
        SpanBasis {
            rows: vec![],
            ambient_dim: dim,
            modulus: zm.q,
            pivots: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// (pivot column, pivot valuation) of each row.
    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// Number of elements of the submodule, as log_p.
    pub fn log_size(&self, zm: &Zmod) -> u64 {
        self.pivots.iter().map(|&(_, e)| (zm.e - e) as u64).sum()
    }

    /// Reduces `v` against the basis: the canonical representative of v modulo the span.
    pub fn reduce(&self, zm: &Zmod, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (row, &(c, e)) in self.rows.iter().zip(&self.pivots) {
            let pe = zm.p.pow(e);
            let k = v[c] / pe;
            axpy(zm, &mut v, k, row, c);
        }
        v
    }

    pub fn contains(&self, zm: &Zmod, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "dimension mismatch");
        self.reduce(zm, v).iter().all(|&x| x == 0)
    }

    pub fn contains_all(&self, zm: &Zmod, other: &SpanBasis) -> bool {
        other.rows.iter().all(|r| self.contains(zm, r))
    }
}

/// Canonical Howell form of the span of `rows`.
pub fn howellize(zm: &Zmod, dim: usize, rows: Vec<Vec<u64>>) -> SpanBasis {
    let mut work: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|mut r| {
            assert_eq!(r.len(), dim, "all rows must have the ambient dimension");
            for x in r.iter_mut() {
                *x %= zm.q;
            }
            r
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<(usize, u32)> = Vec::new();
    for col in 0..dim {
        if work.is_empty() {
            break;
        }
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in work.iter().enumerate() {
            if r[col] != 0 {
                let v = zm.val(r[col]);
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((i, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((bi, e)) = best else { continue };
        let mut piv = work.swap_remove(bi);
        let pe = zm.p.pow(e);
        let unit = piv[col] / pe;
        let uinv = zm.inv(unit).expect("unit part");
        for x in piv[col..].iter_mut() {
            *x = zm.mul(*x, uinv);
        }
        for r in work.iter_mut() {
            if r[col] != 0 {
                let k = r[col] / pe;
                axpy(zm, r, k, &piv, col);
            }
        }
        if e > 0 {
            // Annihilator row: p^(M-e) * pivot row vanishes at this column.
            let f = zm.p.pow(zm.e - e);
            let ann: Vec<u64> = piv.iter().map(|&x| zm.mul(x, f)).collect();
            if ann.iter().any(|&x| x != 0) {
                work.push(ann);
            }
        }
        work.retain(|r| r.iter().any(|&x| x != 0));
        out.push(piv);
        pivots.push((col, e));
    }
    // Reduce entries above each pivot into [0, p^e).
    for i in 0..out.len() {
        let (c, e) = pivots[i];
        let pe = zm.p.pow(e);
        let (above, rest) = out.split_at_mut(i);
        let piv = &rest[0];
        for r in above.iter_mut() {
            let k = r[c] / pe;
            axpy(zm, r, k, piv, c);
        }
    }
    SpanBasis {
        rows: out,
        ambient_dim: dim,
        modulus: zm.q,
        pivots,
    }
}

/// Howell form of the union of a basis and extra rows.
pub fn extend(zm: &Zmod, basis: &SpanBasis, extra: Vec<Vec<u64>>) -> SpanBasis {
    let mut rows = basis.rows.clone();
    rows.extend(extra);
    howellize(zm, basis.ambient_dim, rows)
}

pub fn contains(zm: &Zmod, basis: &SpanBasis, v: &[u64]) -> bool {
    basis.contains(zm, v)
}

pub fn span_equal(a: &SpanBasis, b: &SpanBasis) -> bool {
    assert_eq!(a.ambient_dim, b.ambient_dim, "dimension mismatch");
    a.rows == b.rows
}
