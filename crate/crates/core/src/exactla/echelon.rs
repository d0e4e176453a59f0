//! Sparse integer row echelon forms and lattices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::scalar::{ext_gcd, with_fallback, Checked, Scalar};

/// Sparse row: `(column, value)` pairs, strictly increasing columns, no zeros.
pub(crate) type Row<T> = Vec<(usize, T)>;

pub(crate) fn row_from_dense<T: Scalar>(v: &[T]) -> Row<T> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_nil())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub(crate) fn convert_row<T: Scalar>(row: &[(usize, BigInt)]) -> Option<Row<T>> {
    row.iter().map(|(c, x)| T::from_big(x).map(|y| (*c, y))).collect()
}

pub(crate) fn row_to_big<T: Scalar>(row: &[(usize, T)]) -> Row<BigInt> {
    row.iter().map(|(c, x)| (*c, x.to_big())).collect()
}

/// `s*a + t*b`.
pub(crate) fn combine<T: Scalar>(s: &T, a: &[(usize, T)], t: &T, b: &[(usize, T)]) -> Checked<Row<T>> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ca < cb {
            i += 1;
            (ca, s.mul_c(&a[i - 1].1)?)
        } else if cb < ca {
            j += 1;
            (cb, t.mul_c(&b[j - 1].1)?)
        } else {
            i += 1;
            j += 1;
            (ca, s.mul_c(&a[i - 1].1)?.add_c(&t.mul_c(&b[j - 1].1)?)?)
        };
        if !v.is_nil() {
            out.push((col, v));
        }
    }
    Ok(out)
}

/// `a - q*b`.
pub(crate) fn axpy<T: Scalar>(a: &[(usize, T)], q: &T, b: &[(usize, T)]) -> Checked<Row<T>> {
    combine(&T::unit(), a, &q.neg_c()?, b)
}

fn negate<T: Scalar>(row: &mut Row<T>) -> Checked<()> {
    for e in row.iter_mut() {
        e.1 = e.1.neg_c()?;
    }
    Ok(())
}

/// Incremental Hermite-style echelon basis of a lattice in `Z^width`.
///
/// Each stored row has a positive leading entry and no two rows share a
/// leading column. Rows whose leading column is at least `c` form a basis
/// of the sublattice of vectors vanishing on the first `c` coordinates.
#[derive(Debug, Clone)]
pub(crate) struct Echelon<T> {
    pub(crate) pivots: BTreeMap<usize, Row<T>>,
    // When set, the lattice is known to contain `modulus·Z^width` and
    // entries are kept in `[0, modulus)` (pivot leads excepted).
    modulus: Option<T>,
}

fn reduce_tail<T: Scalar>(row: &mut Row<T>, m: &T, skip_lead: bool) -> Checked<()> {
    let start = usize::from(skip_lead);
    for e in row.iter_mut().skip(start) {
        e.1 = e.1.fmod(m)?;
    }
    let mut i = 0;
    row.retain(|e| {
        i += 1;
        (skip_lead && i == 1) || !e.1.is_nil()
    });
    Ok(())
}

impl<T: Scalar> Echelon<T> {
    pub(crate) fn new() -> Self {
        Echelon {
            pivots: BTreeMap::new(),
            modulus: None,
        }
    }

    /// Echelon form of a lattice containing `m·Z^width`; the caller must
    /// insert those rows (see [`Echelon::insert_scaled_identity`]).
    pub(crate) fn with_modulus(m: T) -> Self {
        Echelon {
            pivots: BTreeMap::new(),
            modulus: Some(m),
        }
    }

    pub(crate) fn insert_scaled_identity(&mut self, width: usize) -> Checked<()> {
        if let Some(m) = self.modulus.clone() {
            // Inserted directly: reducing these rows mod m would zero them.
            for c in 0..width {
                match self.pivots.remove(&c) {
                    None => {
                        self.pivots.insert(c, vec![(c, m.clone())]);
                    }
                    Some(p) => {
                        self.pivots.insert(c, vec![(c, m.clone())]);
                        self.insert(p)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn insert(&mut self, mut row: Row<T>) -> Checked<()> {
        let modulus = self.modulus.clone();
        loop {
            if let Some(m) = &modulus {
                reduce_tail(&mut row, m, false)?;
            }
            let Some((c, b)) = row.first().cloned() else {
                return Ok(());
            };
            match self.pivots.get_mut(&c) {
                None => {
                    if b.is_neg() {
                        negate(&mut row)?;
                    }
                    if let Some(m) = &modulus {
                        reduce_tail(&mut row, m, true)?;
                    }
                    self.pivots.insert(c, row);
                    return Ok(());
                }
                Some(p) => {
                    let a = p[0].1.clone();
                    if a.divides(&b)? {
                        row = axpy(&row, &b.fdiv(&a)?, p)?;
                    } else {
                        let (g, s, t) = ext_gcd(&a, &b)?;
                        let new_p = combine(&s, p, &t, &row)?;
                        let ag = a.fdiv(&g)?;
                        let bg = b.fdiv(&g)?.neg_c()?;
                        row = combine(&ag, &row, &bg, p)?;
                        *p = new_p;
                        if let Some(m) = &modulus {
                            reduce_tail(p, m, true)?;
                        }
                    }
                }
            }
        }
    }

}

/// A sublattice of `Z^dim`, held as an echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    // (leading column, sparse row), ordered by leading column.
    rows: Vec<(usize, Row<BigInt>)>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, rows: Vec::new() }
    }

    /// Lattice spanned by the given vectors (each of length `dim`).
    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        let rows: Vec<Row<BigInt>> = gens
            .iter()
            .map(|g| {
                debug_assert_eq!(g.len(), dim);
                row_from_dense(g)
            })
            .collect();
        Self::from_sparse(dim, rows)
    }

    pub(crate) fn from_sparse(dim: usize, rows: Vec<Row<BigInt>>) -> Self {
        let small: Option<Vec<Row<i64>>> = rows.iter().map(|r| convert_row(r)).collect();
        let ech = with_fallback(
            small.is_some(),
            || {
                let mut e = Echelon::<i64>::new();
                for r in small.unwrap() {
                    e.insert(r)?;
                }
                Ok(e.pivots
                    .into_iter()
                    .map(|(c, r)| (c, row_to_big(&r)))
                    .collect::<Vec<_>>())
            },
            || {
                let mut e = Echelon::<BigInt>::new();
                for r in rows.iter() {
                    e.insert(r.clone()).expect("bigint arithmetic cannot overflow");
                }
                e.pivots.into_iter().collect()
            },
        );
        Lattice { dim, rows: ech }
    }

    pub(crate) fn from_echelon_rows(dim: usize, rows: Vec<(usize, Row<BigInt>)>) -> Self {
        Lattice { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Echelon basis as dense vectors, ordered by leading coordinate.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|(_, r)| {
                let mut v = vec![BigInt::zero(); self.dim];
                for (c, x) in r {
                    v[*c] = x.clone();
                }
                v
            })
            .collect()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }

    /// Canonical representative of `v + L`: every pivot coordinate lands in
    /// `[0, pivot)`. Two vectors are congruent iff their reductions agree.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim, "vector length does not match lattice dimension");
        let mut v = v.to_vec();
        for (c, r) in &self.rows {
            if v[*c].is_zero() {
                continue;
            }
            let q = v[*c].div_floor(&r[0].1);
            if q.is_zero() {
                continue;
            }
            for (col, x) in r {
                v[*col] -= &q * x;
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim, "vector length does not match lattice dimension");
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (c, r) in &self.rows {
            let h = &r[0].1;
            let (q, rem) = v[*c].div_mod_floor(h);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (col, x) in r {
                    v[*col] -= &q * x;
                }
            }
            coords.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(coords)
    }

    /// Index `[Z^dim : L]` for a full-rank lattice: the product of the pivots.
    pub fn index(&self) -> Option<BigInt> {
        self.is_full_rank()
            .then(|| self.rows.iter().map(|(_, r)| r[0].1.abs()).product())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn echelon_gcd_merge() {
        let l = Lattice::from_generators(2, &[big(&[4, 1]), big(&[6, 0])]);
        // det of generators = -6; index must be 6.
        assert_eq!(l.index(), Some(BigInt::from(6)));
        assert!(l.contains(&big(&[2, -1])));
        assert!(!l.contains(&big(&[1, 0])));
    }

    #[test]
    fn reduce_is_canonical() {
        let l = Lattice::from_generators(2, &[big(&[2, 0]), big(&[0, 3])]);
        assert_eq!(l.reduce(&big(&[5, -7])), big(&[1, 2]));
        assert_eq!(l.reduce(&big(&[-1, 2])), big(&[1, 2]));
    }

    #[test]
    fn falls_back_to_bigint() {
        let huge: BigInt = BigInt::from(1) << 100u32;
        let l = Lattice::from_generators(
            2,
            &[vec![huge.clone(), BigInt::from(1)], vec![BigInt::from(3), BigInt::from(0)]],
        );
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&[huge.clone() * 2 + 3, BigInt::from(2)]));
    }
}
