//! Elementary divisors of sparse integer matrices without transforms.
//!
//! Unit pivots are eliminated first (Markowitz-style choice by column
//! count), which disposes of almost all of a bar-complex boundary matrix
//! without coefficient growth; what remains is handled by smallest-pivot
//! elimination with remainder steps.

use num_bigint::BigInt;

use super::echelon::{axpy, Row};
use super::scalar::{Checked, Scalar};

pub(crate) struct Divisors<T> {
    /// Absolute values of the diagonal entries found, in elimination order.
    pub(crate) diag: Vec<T>,
}

struct Work<T> {
    rows: Vec<Option<Row<T>>>,
    // Lazy column index: may hold stale or repeated row ids.
    cols: Vec<Vec<usize>>,
    diag: Vec<T>,
}

fn entry<T: Scalar>(row: &Row<T>, c: usize) -> Option<&T> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
}

impl<T: Scalar> Work<T> {
    fn holders(&mut self, c: usize, except: usize) -> Vec<usize> {
        let list = &mut self.cols[c];
        list.sort_unstable();
        list.dedup();
        let rows = &self.rows;
        list.retain(|&i| rows[i].as_ref().is_some_and(|r| entry(r, c).is_some()));
        list.iter().copied().filter(|&i| i != except).collect()
    }

    fn subtract(&mut self, i: usize, q: &T, r: usize) -> Checked<()> {
        let pr = self.rows[r].as_ref().expect("active pivot row");
        let ri = self.rows[i].as_ref().expect("active row");
        let new = axpy(ri, q, pr)?;
        for (c, _) in &new {
            if entry(ri, *c).is_none() {
                self.cols[*c].push(i);
            }
        }
        self.rows[i] = if new.is_empty() { None } else { Some(new) };
        Ok(())
    }

    /// Clears column `c` outside row `r`; true when no remainder is left.
    fn clear_column(&mut self, r: usize, c: usize) -> Checked<bool> {
        let p = entry(self.rows[r].as_ref().unwrap(), c).unwrap().clone();
        let mut clean = true;
        for i in self.holders(c, r) {
            let a = entry(self.rows[i].as_ref().unwrap(), c).unwrap().clone();
            let q = a.fdiv(&p)?;
            if !q.is_nil() {
                self.subtract(i, &q, r)?;
            }
            if self.rows[i].as_ref().is_some_and(|row| entry(row, c).is_some()) {
                clean = false;
            }
        }
        Ok(clean)
    }

    fn retire(&mut self, r: usize, p: &T) -> Checked<()> {
        self.rows[r] = None;
        self.diag.push(p.abs_c()?);
        Ok(())
    }

    fn unit_pass(&mut self) -> Checked<bool> {
        let mut progress = false;
        for r in 0..self.rows.len() {
            let Some(row) = self.rows[r].as_ref() else { continue };
            let mut best: Option<(usize, usize)> = None;
            for (c, v) in row {
                if v.abs_c()? == T::unit() {
                    let n = self.cols[*c].len();
                    if best.is_none_or(|(_, bn)| n < bn) {
                        best = Some((*c, n));
                    }
                }
            }
            let Some((c, _)) = best else { continue };
            let clean = self.clear_column(r, c)?;
            debug_assert!(clean, "unit pivots always clear their column");
            self.retire(r, &T::unit())?;
            progress = true;
        }
        Ok(progress)
    }

    fn general_step(&mut self) -> Checked<bool> {
        let mut best: Option<(T, usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            let Some(row) = row else { continue };
            for (c, v) in row {
                let m = v.abs_c()?;
                let cost = (row.len() - 1) * self.cols[*c].len();
                let better = match &best {
                    None => true,
                    Some((bm, _, _, bc)) => m < *bm || (m == *bm && cost < *bc),
                };
                if better {
                    best = Some((m, r, *c, cost));
                }
            }
        }
        let Some((_, r, c, _)) = best else { return Ok(false) };
        if !self.clear_column(r, c)? {
            return Ok(true);
        }
        let row = self.rows[r].as_ref().unwrap();
        let p = entry(row, c).unwrap().clone();
        let mut reduced = Vec::with_capacity(row.len());
        let mut divisible = true;
        for (j, v) in row {
            if *j == c {
                reduced.push((*j, v.clone()));
                continue;
            }
            let rem = v.fmod(&p)?;
            if !rem.is_nil() {
                divisible = false;
                reduced.push((*j, rem));
            }
        }
        if divisible {
            self.retire(r, &p)?;
        } else {
            // Column operations against column c touch only row r.
            self.rows[r] = Some(reduced);
        }
        Ok(true)
    }
}

pub(crate) fn elementary_divisors<T: Scalar>(rows: &[Row<T>], ncols: usize) -> Checked<Divisors<T>> {
    let mut cols = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            cols[*c].push(i);
        }
    }
    let mut w = Work {
        rows: rows.iter().map(|r| if r.is_empty() { None } else { Some(r.clone()) }).collect(),
        cols,
        diag: Vec::new(),
    };
    while w.unit_pass()? {}
    while w.general_step()? {
        // New unit entries can appear after remainder steps.
        while w.unit_pass()? {}
    }
    Ok(Divisors { diag: w.diag })
}

pub(crate) fn elementary_divisors_big(rows: &[Row<BigInt>], ncols: usize) -> Vec<BigInt> {
    use super::echelon::convert_row;
    use super::scalar::with_fallback;
    let small: Option<Vec<Row<i64>>> = rows.iter().map(|r| convert_row(r)).collect();
    with_fallback(
        small.is_some(),
        || Ok(elementary_divisors(small.as_ref().unwrap(), ncols)?.diag.iter().map(Scalar::to_big).collect()),
        || elementary_divisors(rows, ncols).expect("bigint arithmetic cannot overflow").diag,
    )
}
