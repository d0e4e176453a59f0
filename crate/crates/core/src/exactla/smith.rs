//! Smith normal form by smallest-pivot elimination.

use num_bigint::BigInt;

use super::scalar::{Checked, Scalar};

type Dense<T> = Vec<Vec<T>>;

pub(crate) struct SmithOut<T> {
    pub(crate) diag: Vec<T>,
    pub(crate) s: Dense<T>,
    pub(crate) u: Option<Dense<T>>,
    pub(crate) v: Option<Dense<T>>,
    pub(crate) v_inv: Option<Dense<T>>,
}

fn identity<T: Scalar>(n: usize) -> Dense<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::unit() } else { T::nil() }).collect())
        .collect()
}

// row[i] += q * row[j]
fn row_add<T: Scalar>(m: &mut Dense<T>, i: usize, j: usize, q: &T) -> Checked<()> {
    if q.is_nil() {
        return Ok(());
    }
    let (src, dst) = if i < j {
        let (a, b) = m.split_at_mut(j);
        (&b[0], &mut a[i])
    } else {
        let (a, b) = m.split_at_mut(i);
        (&a[j], &mut b[0])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_nil() {
            *d = d.add_c(&q.mul_c(s)?)?;
        }
    }
    Ok(())
}

// col[i] += q * col[j]
fn col_add<T: Scalar>(m: &mut Dense<T>, i: usize, j: usize, q: &T) -> Checked<()> {
    if q.is_nil() {
        return Ok(());
    }
    for row in m.iter_mut() {
        if !row[j].is_nil() {
            row[i] = row[i].add_c(&q.mul_c(&row[j])?)?;
        }
    }
    Ok(())
}

fn col_swap<T>(m: &mut Dense<T>, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

struct Tracker<T> {
    u: Option<Dense<T>>,
    v: Option<Dense<T>>,
    v_inv: Option<Dense<T>>,
}

impl<T: Scalar> Tracker<T> {
    fn row_add(&mut self, i: usize, j: usize, q: &T) -> Checked<()> {
        if let Some(u) = self.u.as_mut() {
            row_add(u, i, j, q)?;
        }
        Ok(())
    }
    fn row_swap(&mut self, i: usize, j: usize) {
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
    }
    fn row_neg(&mut self, i: usize) -> Checked<()> {
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = x.neg_c()?;
            }
        }
        Ok(())
    }
    // col[i] += q col[j]  =>  V <- V E,  V^-1 <- E^-1 V^-1 (row[j] -= q row[i])
    fn col_add(&mut self, i: usize, j: usize, q: &T) -> Checked<()> {
        if let Some(v) = self.v.as_mut() {
            col_add(v, i, j, q)?;
        }
        if let Some(vi) = self.v_inv.as_mut() {
            row_add(vi, j, i, &q.neg_c()?)?;
        }
        Ok(())
    }
    fn col_swap(&mut self, i: usize, j: usize) {
        if let Some(v) = self.v.as_mut() {
            col_swap(v, i, j);
        }
        if let Some(vi) = self.v_inv.as_mut() {
            vi.swap(i, j);
        }
    }
}

/// Computes `U·M·V = S`. Pivot: smallest nonzero magnitude in the active
/// block, ties broken by lowest row then lowest column.
pub(crate) fn smith<T: Scalar>(mut a: Dense<T>, rows: usize, cols: usize, track: bool) -> Checked<SmithOut<T>> {
    let mut tr = Tracker {
        u: track.then(|| identity(rows)),
        v: track.then(|| identity(cols)),
        v_inv: track.then(|| identity(cols)),
    };
    let n = rows.min(cols);
    let mut t = 0;
    'outer: while t < n {
        loop {
            // Smallest pivot in the active block.
            let mut best: Option<(T, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if x.is_nil() {
                        continue;
                    }
                    let m = x.abs_c()?;
                    if best.as_ref().is_none_or(|(b, _, _)| m < *b) {
                        best = Some((m, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break 'outer;
            };
            if pi != t {
                a.swap(pi, t);
                tr.row_swap(pi, t);
            }
            if pj != t {
                col_swap(&mut a, pj, t);
                tr.col_swap(pj, t);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_nil() {
                    continue;
                }
                let q = a[i][t].fdiv(&p)?.neg_c()?;
                row_add(&mut a, i, t, &q)?;
                tr.row_add(i, t, &q)?;
                clean &= a[i][t].is_nil();
            }
            for j in t + 1..cols {
                if a[t][j].is_nil() {
                    continue;
                }
                let q = a[t][j].fdiv(&p)?.neg_c()?;
                col_add(&mut a, j, t, &q)?;
                tr.col_add(j, t, &q)?;
                clean &= a[t][j].is_nil();
            }
            if !clean {
                continue;
            }
            // Divisibility of the remaining block by the pivot.
            let mut offender = None;
            'scan: for (i, row) in a.iter().enumerate().skip(t + 1) {
                for x in row.iter().skip(t + 1) {
                    if !p.divides(x)? {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    row_add(&mut a, t, i, &T::unit())?;
                    tr.row_add(t, i, &T::unit())?;
                }
                None => {
                    if p.is_neg() {
                        for x in a[t].iter_mut() {
                            *x = x.neg_c()?;
                        }
                        tr.row_neg(t)?;
                    }
                    t += 1;
                    break;
                }
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    Ok(SmithOut {
        diag,
        s: a,
        u: tr.u,
        v: tr.v,
        v_inv: tr.v_inv,
    })
}

pub(crate) fn to_dense<T: Scalar>(rows: &[Vec<BigInt>]) -> Option<Dense<T>> {
    rows.iter()
        .map(|r| r.iter().map(T::from_big).collect::<Option<Vec<T>>>())
        .collect()
}

pub(crate) fn to_big_dense<T: Scalar>(m: &Dense<T>) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(Scalar::to_big).collect()).collect()
}
