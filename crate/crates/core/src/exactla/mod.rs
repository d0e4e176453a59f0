//! Exact integer linear algebra: Smith and Hermite forms, kernels,
//! cokernels, and linear solving over `Z` with optional per-row moduli.

mod echelon;
mod matrix;
mod scalar;
mod smith;
mod sparse;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use echelon::Lattice;
pub use matrix::{parse_decimal, DecimalInt, IntMatrix, RawRows};

pub(crate) use echelon::Row;
use echelon::{convert_row, row_from_dense, row_to_big, Echelon};
use scalar::{with_fallback, Checked, Scalar};
use smith::{smith, to_big_dense, to_dense, SmithOut};

use crate::error::{Error, Result};

/// Isomorphism class of a finitely generated abelian group:
/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_r` with `d_1 | d_2 | ... | d_r`, all `d_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbelianInvariants {
    factors: Vec<BigInt>,
    free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Builds from a divisibility chain. Factors equal to 1 are dropped.
    pub fn new(factors: Vec<BigInt>, free_rank: usize) -> Result<Self> {
        let factors: Vec<BigInt> = factors.into_iter().filter(|d| !d.is_one()).collect();
        if let Some(d) = factors.iter().find(|d| *d < &BigInt::from(2)) {
            return Err(Error::Invariant(format!("invariant factor {d} is not >= 2")));
        }
        if let Some(w) = factors.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::Invariant(format!(
                "invariant factors {} and {} do not form a divisibility chain",
                w[0], w[1]
            )));
        }
        Ok(AbelianInvariants { factors, free_rank })
    }

    pub fn from_factors(factors: &[u64]) -> Result<Self> {
        Self::new(factors.iter().map(|&d| BigInt::from(d)).collect(), 0)
    }

    /// Normalizes an arbitrary list of cyclic orders (0 = infinite cyclic)
    /// into invariant-factor form.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let free_rank = orders.iter().filter(|d| d.is_zero()).count();
        let finite: Vec<BigInt> = orders.iter().filter(|d| !d.is_zero()).map(|d| d.abs()).collect();
        let n = finite.len();
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { finite[i].clone() } else { BigInt::zero() }).collect())
            .collect();
        let diag = smith_diagonal(&rows, n);
        let factors = diag.into_iter().filter(|d| !d.is_one()).collect();
        AbelianInvariants { factors, free_rank }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.factors.iter().product())
    }

    /// Exponent, `None` when infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.factors.last().cloned().unwrap_or_else(BigInt::one))
    }

    /// Membership in the class of finite abelian groups killed by `n`.
    pub fn is_killed_by(&self, n: &BigInt) -> bool {
        self.is_finite() && self.factors.iter().all(|d| n.is_multiple_of(d))
    }

    /// Invariants of the direct sum.
    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        let mut orders: Vec<BigInt> = self.factors.iter().chain(&other.factors).cloned().collect();
        orders.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank + other.free_rank));
        Self::from_cyclic_orders(&orders)
    }

    /// Invariants of the p-primary part of the torsion subgroup.
    pub fn p_part(&self, p: &BigInt) -> AbelianInvariants {
        let orders: Vec<BigInt> = self
            .factors
            .iter()
            .map(|d| {
                let mut q = BigInt::one();
                let mut d = d.clone();
                while d.is_multiple_of(p) {
                    d /= p;
                    q *= p;
                }
                q
            })
            .collect();
        Self::from_cyclic_orders(&orders)
    }
}

impl fmt::Display for AbelianInvariants {
    /// `[d1,d2,...]`, with `Z` appended once per free rank.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        parts.extend(std::iter::repeat_n("Z".to_string(), self.free_rank));
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct InvariantsRepr {
    factors: Vec<DecimalInt>,
    free_rank: usize,
}

impl Serialize for AbelianInvariants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InvariantsRepr {
            factors: self.factors.iter().cloned().map(DecimalInt).collect(),
            free_rank: self.free_rank,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbelianInvariants {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = InvariantsRepr::deserialize(d)?;
        AbelianInvariants::new(r.factors.into_iter().map(|x| x.0).collect(), r.free_rank)
            .map_err(serde::de::Error::custom)
    }
}

/// `U·M·V = S` with `U`, `V` unimodular and `S` in Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }
}

fn dense_to_matrix(d: Vec<Vec<BigInt>>, rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_rows(d, cols).unwrap_or_else(|_| IntMatrix::zeros(rows, cols))
}

fn smith_full(m: &IntMatrix) -> SmithOut<BigInt> {
    let rows = m.to_rows();
    let small = to_dense::<i64>(&rows);
    with_fallback(
        small.is_some(),
        || {
            let out = smith(small.clone().unwrap(), m.rows(), m.cols(), true)?;
            Ok(SmithOut {
                diag: out.diag.iter().map(Scalar::to_big).collect(),
                s: to_big_dense(&out.s),
                u: out.u.as_ref().map(to_big_dense),
                v: out.v.as_ref().map(to_big_dense),
                v_inv: out.v_inv.as_ref().map(to_big_dense),
            })
        },
        || smith(rows.clone(), m.rows(), m.cols(), true).expect("bigint arithmetic cannot overflow"),
    )
}

/// Smith normal form with transforms.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let out = smith_full(m);
    SnfResult {
        u: dense_to_matrix(out.u.unwrap(), m.rows(), m.rows()),
        s: dense_to_matrix(out.s, m.rows(), m.cols()),
        v: dense_to_matrix(out.v.unwrap(), m.cols(), m.cols()),
    }
}

/// Smith data of a relation matrix `R` (rows = relators) on `Z^k`:
/// `moduli[j]` is the order of the `j`-th Smith generator (0 = free, 1 = dead);
/// `to_smith = V^T` maps ambient coordinates to Smith coordinates and
/// `from_smith = V^{-T}` maps back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithFrame {
    pub moduli: Vec<BigInt>,
    pub to_smith: IntMatrix,
    pub from_smith: IntMatrix,
}

pub fn smith_frame(relations: &IntMatrix) -> SmithFrame {
    let k = relations.cols();
    let out = smith_full(relations);
    let mut moduli = vec![BigInt::zero(); k];
    for (j, d) in out.diag.iter().enumerate() {
        moduli[j] = d.abs();
    }
    let v = dense_to_matrix(out.v.unwrap(), k, k);
    let v_inv = dense_to_matrix(out.v_inv.unwrap(), k, k);
    SmithFrame {
        moduli,
        to_smith: v.transpose(),
        from_smith: v_inv.transpose(),
    }
}

/// Diagonal of the Smith form only (no transforms).
fn smith_diagonal(rows: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let n = rows.len();
    let small = to_dense::<i64>(rows);
    with_fallback(
        small.is_some(),
        || Ok(smith(small.clone().unwrap(), n, cols, false)?.diag.iter().map(Scalar::to_big).collect()),
        || smith(rows.to_vec(), n, cols, false).expect("bigint arithmetic cannot overflow").diag,
    )
}

fn invariants_from_diagonal(diag: &[BigInt], cols: usize) -> AbelianInvariants {
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let factors = diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
    AbelianInvariants {
        factors,
        free_rank: cols - nonzero,
    }
}

/// Invariants of `Z^ambient_rank / rowspan(R)`.
pub fn cokernel_invariants(relations: &IntMatrix, ambient_rank: usize) -> Result<AbelianInvariants> {
    if relations.cols() != ambient_rank {
        return Err(Error::Dimension(format!(
            "relation matrix has {} columns but ambient rank is {ambient_rank}",
            relations.cols()
        )));
    }
    // Echelonize first: cheaper Smith form on a triangular block.
    let lat = Lattice::from_generators(ambient_rank, &relations.to_rows());
    let rows = lat.basis();
    let diag = smith_diagonal(&rows, ambient_rank);
    Ok(invariants_from_diagonal(&diag, ambient_rank))
}

/// Columns form a basis of `{x : M x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let map = SparseMap::from_matrix(m);
    let lat = map.kernel(&vec![BigInt::zero(); m.rows()]);
    let basis = lat.basis();
    IntMatrix::from_columns(&basis, m.cols()).expect("kernel vectors have matching length")
}

/// Solves `M x ≡ b` (row `i` read modulo `moduli[i]`, 0 = exact).
/// Returns the canonical solution: the representative of the solution coset
/// reduced by the echelon basis of the homogeneous solution lattice.
pub fn solve(m: &IntMatrix, b: &[BigInt], moduli: Option<&[BigInt]>) -> Result<Vec<BigInt>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    let zeros = vec![BigInt::zero(); m.rows()];
    let moduli = match moduli {
        Some(md) if md.len() != m.rows() => {
            return Err(Error::Dimension(format!(
                "{} moduli given for {} rows",
                md.len(),
                m.rows()
            )))
        }
        Some(md) => md,
        None => &zeros,
    };
    let solver = ModularSolver::new(&SparseMap::from_matrix(m), moduli);
    solver.solve(b).ok_or(Error::NoSolution)
}

/// A `Z`-linear map `Z^src_dim -> Z^dst_dim` stored by images of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMap {
    pub src_dim: usize,
    pub dst_dim: usize,
    pub(crate) images: Vec<Row<BigInt>>,
}

impl SparseMap {
    pub fn new(src_dim: usize, dst_dim: usize) -> Self {
        SparseMap {
            src_dim,
            dst_dim,
            images: vec![Vec::new(); src_dim],
        }
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        let images = (0..m.cols()).map(|j| row_from_dense(&m.column(j))).collect();
        SparseMap {
            src_dim: m.cols(),
            dst_dim: m.rows(),
            images,
        }
    }

    /// Sets the image of basis vector `i` from unsorted `(row, value)` terms;
    /// repeated rows are summed.
    pub fn set_image(&mut self, i: usize, mut terms: Vec<(usize, BigInt)>) {
        terms.sort_by_key(|t| t.0);
        let mut row: Row<BigInt> = Vec::with_capacity(terms.len());
        for (c, x) in terms {
            match row.last_mut() {
                Some((lc, lx)) if *lc == c => *lx += x,
                _ => row.push((c, x)),
            }
        }
        row.retain(|(_, x)| !x.is_zero());
        debug_assert!(row.last().is_none_or(|(c, _)| *c < self.dst_dim));
        self.images[i] = row;
    }

    pub fn image(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dst_dim];
        for (c, x) in &self.images[i] {
            v[*c] = x.clone();
        }
        v
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dst_dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (c, v) in &self.images[i] {
                out[*c] += xi * v;
            }
        }
        out
    }

    fn reduced_images(&self, moduli: &[BigInt]) -> Vec<Row<BigInt>> {
        self.images
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(c, x)| {
                        let m = &moduli[*c];
                        (*c, if m.is_zero() { x.clone() } else { x.mod_floor(m) })
                    })
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect()
    }

    /// `{x : self(x) ≡ 0 mod dst_moduli}`.
    pub fn kernel(&self, dst_moduli: &[BigInt]) -> Lattice {
        ModularSolver::new(self, dst_moduli).kernel
    }
}

fn kernel_echelon<T: Scalar>(
    images: &[Row<T>],
    dst_dim: usize,
    moduli: &[T],
    bound: Option<&T>,
) -> Checked<Echelon<T>> {
    let mut e = match bound {
        Some(l) => {
            let mut e = Echelon::with_modulus(l.clone());
            e.insert_scaled_identity(dst_dim + images.len())?;
            e
        }
        None => Echelon::new(),
    };
    for (j, m) in moduli.iter().enumerate() {
        if !m.is_nil() {
            e.insert(vec![(j, m.clone())])?;
        }
    }
    for (i, img) in images.iter().enumerate() {
        let mut row = img.clone();
        row.push((dst_dim + i, T::unit()));
        e.insert(row)?;
    }
    Ok(e)
}

/// Echelonized augmented system for repeated solving of `A x ≡ b`.
pub struct ModularSolver {
    dst_dim: usize,
    src_dim: usize,
    // Pivot rows with leading column < dst_dim, over Z^(dst+src).
    system: Vec<(usize, Row<BigInt>)>,
    kernel: Lattice,
}

impl ModularSolver {
    pub fn new(map: &SparseMap, dst_moduli: &[BigInt]) -> Self {
        Self::build(map, dst_moduli, None)
    }

    /// Like [`ModularSolver::new`], but the source is only of interest
    /// modulo `src_moduli`: when every modulus is nonzero the kernel is
    /// enlarged by `L·Z^src` (L the lcm of all moduli), which keeps
    /// coefficients bounded.
    pub fn new_bounded(map: &SparseMap, dst_moduli: &[BigInt], src_moduli: &[BigInt]) -> Self {
        assert_eq!(src_moduli.len(), map.src_dim, "one modulus per source coordinate");
        if dst_moduli.iter().chain(src_moduli).any(|m| m.is_zero()) {
            return Self::build(map, dst_moduli, None);
        }
        let l = dst_moduli
            .iter()
            .chain(src_moduli)
            .fold(BigInt::one(), |acc, m| acc.lcm(m));
        Self::build(map, dst_moduli, Some(l))
    }

    fn build(map: &SparseMap, dst_moduli: &[BigInt], bound: Option<BigInt>) -> Self {
        assert_eq!(dst_moduli.len(), map.dst_dim, "one modulus per target coordinate");
        let images = map.reduced_images(dst_moduli);
        let small_imgs: Option<Vec<Row<i64>>> = images.iter().map(|r| convert_row(r)).collect();
        let small_mods: Option<Vec<i64>> = dst_moduli.iter().map(i64::from_big).collect();
        let small_bound: Option<Option<i64>> = match &bound {
            None => Some(None),
            Some(l) => i64::from_big(l).map(Some),
        };
        let fits = small_imgs.is_some() && small_mods.is_some() && small_bound.is_some();
        let pivots: Vec<(usize, Row<BigInt>)> = with_fallback(
            fits,
            || {
                let e = kernel_echelon(
                    small_imgs.as_ref().unwrap(),
                    map.dst_dim,
                    small_mods.as_ref().unwrap(),
                    small_bound.unwrap().as_ref(),
                )?;
                Ok(e.pivots.into_iter().map(|(c, r)| (c, row_to_big(&r))).collect())
            },
            || {
                kernel_echelon(&images, map.dst_dim, dst_moduli, bound.as_ref())
                    .expect("bigint arithmetic cannot overflow")
                    .pivots
                    .into_iter()
                    .collect()
            },
        );
        let c = map.dst_dim;
        let mut system = Vec::new();
        let mut kernel_rows = Vec::new();
        for (lead, row) in pivots {
            if lead < c {
                system.push((lead, row));
            } else {
                kernel_rows.push((lead - c, row.into_iter().map(|(j, x)| (j - c, x)).collect()));
            }
        }
        ModularSolver {
            dst_dim: c,
            src_dim: map.src_dim,
            system,
            kernel: Lattice::from_echelon_rows(map.src_dim, kernel_rows),
        }
    }

    pub fn kernel(&self) -> &Lattice {
        &self.kernel
    }

    /// Canonical solution of `A x ≡ b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.dst_dim);
        let mut v: Vec<BigInt> = b.to_vec();
        v.resize(self.dst_dim + self.src_dim, BigInt::zero());
        for (lead, row) in &self.system {
            if v[*lead].is_zero() {
                continue;
            }
            let (q, r) = v[*lead].div_mod_floor(&row[0].1);
            if !r.is_zero() {
                return None;
            }
            for (c, x) in row {
                v[*c] -= &q * x;
            }
        }
        if v[..self.dst_dim].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let x: Vec<BigInt> = v[self.dst_dim..].iter().map(|t| -t).collect();
        Some(self.kernel.reduce(&x))
    }
}

/// Result of a subquotient computation `ker(out) / (denominators + src moduli)`.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub invariants: AbelianInvariants,
    /// One ambient-coordinate generator per cyclic summand (finite summands
    /// first, in invariant-factor order; free summands last).
    pub generators: Vec<Vec<BigInt>>,
    /// Order of each generator (0 = infinite).
    pub orders: Vec<BigInt>,
    /// Lattice spanned by the denominators and source moduli.
    pub denominator: Lattice,
    pub numerator: Lattice,
}

/// Invariants of `{x ∈ Z^src : out(x) ≡ 0 mod dst_moduli} / (span(denominators) + Σ src_moduli[i]·e_i)`.
///
/// The denominators must lie in the numerator (i.e. form a complex).
///
/// The numerator is realised as the kernel of the free map
/// `(x, y) ↦ out(x) − D·y` (one `y` per nonzero target modulus). That kernel
/// is saturated, so the torsion of the quotient is read off from the lifted
/// denominators alone and only elementary divisors are ever needed.
pub fn subquotient_invariants(
    out: &SparseMap,
    dst_moduli: &[BigInt],
    denominators: &[Row<BigInt>],
    src_moduli: &[BigInt],
) -> Result<AbelianInvariants> {
    assert_eq!(dst_moduli.len(), out.dst_dim);
    assert_eq!(src_moduli.len(), out.src_dim);
    let images = out.reduced_images(dst_moduli);
    let s = out.src_dim;
    // Slot of each nonzero target modulus in the y block.
    let mut slot = vec![None; out.dst_dim];
    let mut t = 0;
    for (j, m) in dst_moduli.iter().enumerate() {
        if !m.is_zero() {
            slot[j] = Some(s + t);
            t += 1;
        }
    }
    // F, stored by rows of its transpose (one row per source generator).
    let mut f_rows: Vec<Row<BigInt>> = images.clone();
    for (j, m) in dst_moduli.iter().enumerate() {
        if !m.is_zero() {
            f_rows.push(vec![(j, -m)]);
        }
    }
    let rank_f = sparse::elementary_divisors_big(&f_rows, out.dst_dim).len();

    let lift = |x: &Row<BigInt>| -> Result<Row<BigInt>> {
        let mut fx: std::collections::BTreeMap<usize, BigInt> = Default::default();
        for (i, a) in x {
            for (j, v) in &images[*i] {
                *fx.entry(*j).or_insert_with(BigInt::zero) += a * v;
            }
        }
        let mut row = x.clone();
        for (j, v) in fx {
            if v.is_zero() {
                continue;
            }
            let m = &dst_moduli[j];
            let bad = || Error::Internal("denominator generator is not in the numerator lattice".into());
            let pos = slot[j].ok_or_else(bad)?;
            let (q, r) = v.div_mod_floor(m);
            if !r.is_zero() {
                return Err(bad());
            }
            row.push((pos, q));
        }
        Ok(row)
    };
    let mut g_rows = Vec::with_capacity(denominators.len() + s);
    for d in denominators {
        g_rows.push(lift(d)?);
    }
    for (i, m) in src_moduli.iter().enumerate() {
        if !m.is_zero() {
            g_rows.push(lift(&vec![(i, m.clone())])?);
        }
    }
    let diag = sparse::elementary_divisors_big(&g_rows, s + t);
    let free = (s + t) - rank_f - diag.len();
    let torsion: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
    let inv = AbelianInvariants::from_cyclic_orders(&torsion);
    AbelianInvariants::new(inv.factors().to_vec(), free)
}

/// Like [`subquotient_invariants`] but also returns generators and the
/// denominator lattice. Always runs on big integers; meant for small systems.
pub fn subquotient(
    out: &SparseMap,
    dst_moduli: &[BigInt],
    denominators: &[Row<BigInt>],
    src_moduli: &[BigInt],
) -> Result<Subquotient> {
    let solver = ModularSolver::new_bounded(out, dst_moduli, src_moduli);
    let numerator = solver.kernel.clone();
    let src_dim = out.src_dim;
    let mut den_rows: Vec<Row<BigInt>> = denominators.to_vec();
    den_rows.extend(
        src_moduli
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| vec![(i, m.clone())]),
    );
    let denominator = Lattice::from_sparse(src_dim, den_rows);
    let rank = numerator.rank();
    let mut rel_rows = Vec::with_capacity(denominator.rank());
    for d in denominator.basis() {
        let coords = numerator.coordinates(&d).ok_or_else(|| {
            Error::Internal("denominator generator is not in the numerator lattice".into())
        })?;
        rel_rows.push(coords);
    }
    let rel = IntMatrix::from_rows(rel_rows, rank)?;
    let out_s = smith_full(&rel);
    let v_inv = out_s.v_inv.unwrap();
    let basis = numerator.basis();
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut order_list = Vec::new();
    for j in 0..rank {
        let d = out_s.diag.get(j).cloned().unwrap_or_else(BigInt::zero).abs();
        if d.is_one() {
            continue;
        }
        let mut g = vec![BigInt::zero(); src_dim];
        for (t, coef) in v_inv[j].iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (c, x) in basis[t].iter().enumerate() {
                if !x.is_zero() {
                    g[c] += coef * x;
                }
            }
        }
        generators.push(denominator.reduce(&g));
        order_list.push(d.clone());
        orders.push(d);
    }
    let invariants = AbelianInvariants::from_cyclic_orders(&order_list);
    Ok(Subquotient {
        invariants,
        generators,
        orders,
        denominator,
        numerator,
    })
}

pub(crate) fn dense_row(v: &[BigInt]) -> Row<BigInt> {
    row_from_dense(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(f: &[u64], free: usize) -> AbelianInvariants {
        AbelianInvariants::new(f.iter().map(|&d| BigInt::from(d)).collect(), free).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_zero_matrix() {
        let r = snf(&IntMatrix::from_i64_rows(&[vec![0]]));
        assert_eq!(r.diagonal(), big(&[0]));
        assert_eq!(r.u[(0, 0)].abs(), BigInt::one());
        assert_eq!(r.v[(0, 0)].abs(), BigInt::one());
    }

    #[test]
    fn snf_identity() {
        let r = snf(&IntMatrix::identity(3));
        assert_eq!(r.diagonal(), big(&[1, 1, 1]));
        assert!(r.s.is_identity());
    }

    #[test]
    fn snf_two_by_two() {
        // U·M·V = S checked in the integration suite against brute force.
        let m = IntMatrix::from_i64_rows(&[vec![2, 4], vec![6, 8]]);
        let r = snf(&m);
        assert_eq!(r.diagonal(), big(&[2, 4]));
        assert_eq!(r.u.mul(&m).unwrap().mul(&r.v).unwrap(), r.s);
    }

    #[test]
    fn snf_empty() {
        let r = snf(&IntMatrix::zeros(0, 3));
        assert_eq!(r.s.rows(), 0);
        assert_eq!(r.v, IntMatrix::identity(3));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel_invariants(&IntMatrix::zeros(0, 2), 2).unwrap(), inv(&[], 2));
        let r = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(cokernel_invariants(&r, 2).unwrap(), inv(&[6], 0));
        let r = IntMatrix::from_i64_rows(&[vec![2]]);
        assert_eq!(cokernel_invariants(&r, 1).unwrap(), inv(&[2], 0));
        assert!(cokernel_invariants(&r, 2).is_err());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_i64_rows(&[vec![1, 0]]));
        assert_eq!(k, IntMatrix::from_i64_rows(&[vec![0], vec![1]]));
        let k = kernel_basis(&IntMatrix::from_i64_rows(&[vec![2, -4]]));
        assert_eq!(k, IntMatrix::from_i64_rows(&[vec![2], vec![1]]));
        let k = kernel_basis(&IntMatrix::identity(3));
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn solve_examples() {
        let x = solve(&IntMatrix::identity(2), &big(&[3, 5]), None).unwrap();
        assert_eq!(x, big(&[3, 5]));
        let m = IntMatrix::from_i64_rows(&[vec![2]]);
        assert!(matches!(solve(&m, &big(&[1]), Some(&big(&[0]))), Err(Error::NoSolution)));
        assert_eq!(solve(&m, &big(&[4]), Some(&big(&[6]))).unwrap(), big(&[2]));
    }

    #[test]
    fn invariants_normalize() {
        let a = AbelianInvariants::from_cyclic_orders(&big(&[2, 3, 0]));
        assert_eq!(a, inv(&[6], 1));
        assert!(AbelianInvariants::new(big(&[4, 2]), 0).is_err());
        assert_eq!(AbelianInvariants::new(big(&[1, 2]), 0).unwrap(), inv(&[2], 0));
        assert_eq!(inv(&[2, 4], 0).direct_sum(&inv(&[3], 1)), inv(&[2, 12], 1));
        assert_eq!(inv(&[2, 12], 0).p_part(&BigInt::from(2)), inv(&[2, 4], 0));
        assert_eq!(format!("{}", inv(&[2, 4], 1)), "[2,4,Z]");
        assert_eq!(format!("{}", AbelianInvariants::trivial()), "[]");
    }

    #[test]
    fn subquotient_cyclic_homology() {
        // Z --(x2)--> Z --(0)--> Z : homology at middle = Z/2.
        let mut out = SparseMap::new(1, 1);
        out.set_image(0, vec![]);
        let den = vec![dense_row(&big(&[2]))];
        let inv2 = subquotient_invariants(&out, &big(&[0]), &den, &big(&[0])).unwrap();
        assert_eq!(inv2, inv(&[2], 0));
        let detailed = subquotient(&out, &big(&[0]), &den, &big(&[0])).unwrap();
        assert_eq!(detailed.invariants, inv(&[2], 0));
        assert_eq!(detailed.generators, vec![big(&[1])]);
    }
}
