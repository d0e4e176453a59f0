//! Tate cohomology over the normalized bar resolution, 2-cocycles and `H²`.
//!
//! Cochains in degree `n` are functions on `(G∖{1})^n` with values in the
//! reduced presentation of the module; chains in degree `n` are the same
//! space read as `M ⊗ Z[(G∖{1})^n]`. Tuples are encoded in base `|G|−1`,
//! first entry most significant, and coordinate `j` of tuple `t` sits at
//! index `t·r + j`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::{subquotient, subquotient_invariants, AbelianInvariants, ModularSolver, Row, SparseMap};
use crate::gmodules::{restrict_module, GModule, Reduced};
use crate::groups::FiniteGroup;

/// Limits for [`tate_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TateOptions {
    /// Largest `|i|` accepted.
    pub degree_window: i64,
    /// Largest cochain space (in integer coordinates) that may be built.
    pub cochain_cap: usize,
}

impl Default for TateOptions {
    fn default() -> Self {
        TateOptions {
            degree_window: 6,
            cochain_cap: 20_000,
        }
    }
}

pub(crate) struct Bar<'a> {
    g: &'a FiniteGroup,
    red: &'a Reduced,
    q: usize,
    r: usize,
    // cols[h][j]: sparse column j of the reduced action of h
    cols: Vec<Vec<Vec<(usize, BigInt)>>>,
}

impl<'a> Bar<'a> {
    pub(crate) fn new(m: &'a GModule) -> Self {
        let g: &FiniteGroup = m.group();
        let red = m.reduced();
        let r = red.rank();
        let cols = red
            .actions
            .iter()
            .map(|a| {
                (0..r)
                    .map(|j| (0..r).filter(|&i| !a[(i, j)].is_zero()).map(|i| (i, a[(i, j)].clone())).collect())
                    .collect()
            })
            .collect();
        Bar {
            g,
            red,
            q: g.order() - 1,
            r,
            cols,
        }
    }

    fn tuples(&self, n: usize) -> Option<usize> {
        self.q.checked_pow(n as u32)
    }

    pub(crate) fn moduli(&self, n: usize) -> Vec<BigInt> {
        let t = self.tuples(n).expect("size checked by caller");
        let mut out = Vec::with_capacity(t * self.r);
        for _ in 0..t {
            out.extend(self.red.moduli.iter().cloned());
        }
        out
    }

    fn decode(&self, mut t: usize, n: usize) -> Vec<usize> {
        let mut tup = vec![0; n];
        for k in (0..n).rev() {
            tup[k] = t % self.q + 1;
            t /= self.q;
        }
        tup
    }

    fn encode(&self, tup: impl IntoIterator<Item = usize>) -> usize {
        tup.into_iter().fold(0, |acc, g| acc * self.q + (g - 1))
    }

    /// `d^n : C^n → C^{n+1}`.
    pub(crate) fn coboundary(&self, n: usize) -> SparseMap {
        let (q, r, g) = (self.q, self.r, self.g);
        let src = self.tuples(n).expect("size checked by caller");
        let qn = src;
        let mut map = SparseMap::new(src * r, src * q * r);
        let last_sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
        for t in 0..src {
            let tup = self.decode(t, n);
            for j in 0..r {
                let mut terms: Vec<(usize, BigInt)> = Vec::new();
                for h in 1..=q {
                    let u = (h - 1) * qn + t;
                    for (row, v) in &self.cols[h][j] {
                        terms.push((u * r + row, v.clone()));
                    }
                }
                for k in 0..n {
                    let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
                    let tk = tup[k];
                    for x in 1..=q {
                        if x == tk {
                            continue;
                        }
                        let y = g.mul(g.inv(x), tk);
                        let u = self.encode(
                            tup[..k].iter().copied().chain([x, y]).chain(tup[k + 1..].iter().copied()),
                        );
                        terms.push((u * r + j, BigInt::from(sign)));
                    }
                }
                for h in 1..=q {
                    let u = t * q + (h - 1);
                    terms.push((u * r + j, BigInt::from(last_sign)));
                }
                map.set_image(t * r + j, terms);
            }
        }
        map
    }

    /// `∂_n : C_n → C_{n−1}` for `n ≥ 1`.
    pub(crate) fn boundary(&self, n: usize) -> SparseMap {
        assert!(n >= 1);
        let (r, g) = (self.r, self.g);
        let src = self.tuples(n).expect("size checked by caller");
        let dst = self.tuples(n - 1).expect("smaller than source");
        let mut map = SparseMap::new(src * r, dst * r);
        let last_sign = if n % 2 == 0 { 1 } else { -1 };
        for t in 0..src {
            let tup = self.decode(t, n);
            for j in 0..r {
                let mut terms: Vec<(usize, BigInt)> = Vec::new();
                let u = self.encode(tup[1..].iter().copied());
                for (row, v) in &self.cols[g.inv(tup[0])][j] {
                    terms.push((u * r + row, v.clone()));
                }
                for k in 0..n - 1 {
                    let m = g.mul(tup[k], tup[k + 1]);
                    if m == 0 {
                        continue;
                    }
                    let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
                    let u = self.encode(tup[..k].iter().copied().chain([m]).chain(tup[k + 2..].iter().copied()));
                    terms.push((u * r + j, BigInt::from(sign)));
                }
                let u = self.encode(tup[..n - 1].iter().copied());
                terms.push((u * r + j, BigInt::from(last_sign)));
                map.set_image(t * r + j, terms);
            }
        }
        map
    }

    fn norm_rows(&self) -> Vec<Row<BigInt>> {
        let mut out = Vec::with_capacity(self.r);
        for j in 0..self.r {
            let mut acc = vec![BigInt::zero(); self.r];
            for h in 0..=self.q {
                for (i, v) in &self.cols[h][j] {
                    acc[*i] += v;
                }
            }
            self.red.reduce(&mut acc);
            out.push(acc.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
        }
        out
    }

    fn norm_map(&self) -> SparseMap {
        let mut map = SparseMap::new(self.r, self.r);
        for (j, row) in self.norm_rows().into_iter().enumerate() {
            map.set_image(j, row);
        }
        map
    }

    fn check_cap(&self, spaces: &[usize], cap: usize) -> Result<()> {
        for &n in spaces {
            let need = self.q as u128;
            let need = need.checked_pow(n as u32).and_then(|x| x.checked_mul(self.r as u128));
            match need {
                Some(x) if x <= cap as u128 => {}
                other => {
                    return Err(Error::CapExceeded {
                        what: format!("cochain space of degree {n}"),
                        required: other.unwrap_or(u128::MAX),
                        cap: cap as u128,
                    })
                }
            }
        }
        Ok(())
    }
}

/// `Ĥ^i(G, M)` with default limits.
pub fn tate(m: &GModule, degree: i64) -> Result<AbelianInvariants> {
    tate_with(m, degree, &TateOptions::default())
}

pub fn tate_with(m: &GModule, degree: i64, opts: &TateOptions) -> Result<AbelianInvariants> {
    if degree.abs() > opts.degree_window {
        return Err(Error::DegreeOutOfWindow {
            degree,
            window: opts.degree_window,
        });
    }
    let bar = Bar::new(m);
    let moduli = &bar.red.moduli;
    match degree {
        0 => {
            bar.check_cap(&[1], opts.cochain_cap)?;
            let out = bar.coboundary(0);
            subquotient_invariants(&out, &bar.moduli(1), &bar.norm_rows(), moduli)
        }
        -1 => {
            bar.check_cap(&[1], opts.cochain_cap)?;
            let den = bar.boundary(1);
            subquotient_invariants(&bar.norm_map(), moduli, &den.images, moduli)
        }
        i if i >= 1 => {
            let n = i as usize;
            bar.check_cap(&[n + 1], opts.cochain_cap)?;
            let out = bar.coboundary(n);
            let den = bar.coboundary(n - 1);
            subquotient_invariants(&out, &bar.moduli(n + 1), &den.images, &bar.moduli(n))
        }
        i => {
            let n = (-i - 1) as usize;
            bar.check_cap(&[n + 1], opts.cochain_cap)?;
            let out = bar.boundary(n);
            let den = bar.boundary(n + 1);
            subquotient_invariants(&out, &bar.moduli(n - 1), &den.images, &bar.moduli(n))
        }
    }
}

/// Two-term computation for cyclic groups: even degrees give
/// `ker(σ−1)/im N`, odd degrees `ker N / im(σ−1)`, with `σ` the
/// smallest-index generator.
pub fn cyclic_tate_oracle(m: &GModule, degree: i64) -> Result<AbelianInvariants> {
    let g = m.group();
    let sigma = g.cyclic_generator().ok_or(Error::NotCyclic)?;
    let red = m.reduced();
    let r = red.rank();
    let a = &red.actions[sigma];
    let mut minus = SparseMap::new(r, r);
    let mut minus_rows = Vec::with_capacity(r);
    for j in 0..r {
        let mut col: Vec<BigInt> = (0..r).map(|i| a[(i, j)].clone()).collect();
        col[j] -= 1;
        red.reduce(&mut col);
        let row: Row<BigInt> = col.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        minus.set_image(j, row.clone());
        minus_rows.push(row);
    }
    let mut norm = SparseMap::new(r, r);
    let mut norm_rows = Vec::with_capacity(r);
    for j in 0..r {
        let mut acc = vec![BigInt::zero(); r];
        for h in g.elements() {
            let ah = &red.actions[h];
            for (i, x) in acc.iter_mut().enumerate() {
                *x += &ah[(i, j)];
            }
        }
        red.reduce(&mut acc);
        let row: Row<BigInt> = acc.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        norm.set_image(j, row.clone());
        norm_rows.push(row);
    }
    if degree.rem_euclid(2) == 0 {
        subquotient_invariants(&minus, &red.moduli, &norm_rows, &red.moduli)
    } else {
        subquotient_invariants(&norm, &red.moduli, &minus_rows, &red.moduli)
    }
}

/// A normalized 2-cocycle, stored in residue coordinates of its module.
#[derive(Clone, PartialEq, Eq)]
pub struct Cocycle2 {
    module: GModule,
    // values[σ·n + τ]
    values: Vec<Vec<BigInt>>,
}

impl std::fmt::Debug for Cocycle2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cocycle2({:?})", self.to_vector())
    }
}

impl Cocycle2 {
    /// From a full `|G|×|G|` table of ambient values (row-major, `σ·|G|+τ`).
    /// Non-normalized tables are shifted by the constant coboundary so that
    /// `f(1,1) = 0`.
    pub fn new(module: &GModule, table: &[Vec<BigInt>]) -> Result<Self> {
        let n = module.group().order();
        if table.len() != n * n {
            return Err(Error::CocycleInvariant(format!(
                "table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        if let Some(i) = table.iter().position(|v| v.len() != module.ambient_rank()) {
            return Err(Error::CocycleInvariant(format!("value {i} has the wrong length")));
        }
        let values: Vec<Vec<BigInt>> = table.iter().map(|v| module.residue(v)).collect();
        let raw = Cocycle2 {
            module: module.clone(),
            values,
        };
        raw.check_identity()?;
        let f11 = raw.values[0].clone();
        let g = module.group();
        let mut values = raw.values;
        for s in g.elements() {
            let shift = module.act_residue(s, &f11);
            for t in g.elements() {
                let v = &mut values[s * n + t];
                for (x, y) in v.iter_mut().zip(&shift) {
                    *x -= y;
                }
                module.reduced().reduce(v);
            }
        }
        Ok(Cocycle2 {
            module: module.clone(),
            values,
        })
    }

    /// From values on non-identity pairs (ambient coordinates); other
    /// entries are zero.
    pub fn from_pairs(module: &GModule, pairs: &[((usize, usize), Vec<BigInt>)]) -> Result<Self> {
        let n = module.group().order();
        let k = module.ambient_rank();
        let mut table = vec![vec![BigInt::zero(); k]; n * n];
        for ((s, t), v) in pairs {
            if *s == 0 || *t == 0 || *s >= n || *t >= n {
                return Err(Error::CocycleInvariant(format!(
                    "pair ({s},{t}) is not a pair of non-identity elements"
                )));
            }
            if v.len() != k {
                return Err(Error::CocycleInvariant(format!("value at ({s},{t}) has the wrong length")));
            }
            table[s * n + t] = v.clone();
        }
        Self::new(module, &table)
    }

    /// From a cochain vector in `C²` residue coordinates.
    pub fn from_vector(module: &GModule, v: &[BigInt]) -> Result<Self> {
        let n = module.group().order();
        let r = module.reduced().rank();
        let q = n - 1;
        if v.len() != q * q * r {
            return Err(Error::CocycleInvariant("cochain vector has the wrong length".into()));
        }
        let mut values = vec![vec![BigInt::zero(); r]; n * n];
        for s in 1..n {
            for t in 1..n {
                let off = ((s - 1) * q + (t - 1)) * r;
                let mut x = v[off..off + r].to_vec();
                module.reduced().reduce(&mut x);
                values[s * n + t] = x;
            }
        }
        let f = Cocycle2 {
            module: module.clone(),
            values,
        };
        f.check_identity()?;
        Ok(f)
    }

    pub fn zero(module: &GModule) -> Self {
        let n = module.group().order();
        Cocycle2 {
            module: module.clone(),
            values: vec![vec![BigInt::zero(); module.reduced().rank()]; n * n],
        }
    }

    fn check_identity(&self) -> Result<()> {
        let g = self.module.group();
        let n = g.order();
        let m = &self.module;
        for s in g.elements() {
            for t in g.elements() {
                let st = g.mul(s, t);
                for u in g.elements() {
                    let tu = g.mul(t, u);
                    let mut acc = m.act_residue(s, &self.values[t * n + u]);
                    for (i, x) in acc.iter_mut().enumerate() {
                        *x -= &self.values[st * n + u][i];
                        *x += &self.values[s * n + tu][i];
                        *x -= &self.values[s * n + t][i];
                    }
                    m.reduced().reduce(&mut acc);
                    if acc.iter().any(|x| !x.is_zero()) {
                        return Err(Error::CocycleInvariant(format!(
                            "cocycle identity fails at ({s},{t},{u})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    /// `f(σ,τ)` in residue coordinates.
    pub fn residue(&self, s: usize, t: usize) -> &[BigInt] {
        &self.values[s * self.module.group().order() + t]
    }

    /// `f(σ,τ)` in canonical ambient coordinates.
    pub fn value(&self, s: usize, t: usize) -> Vec<BigInt> {
        self.module.from_residue(self.residue(s, t))
    }

    /// The normalized cochain vector (non-identity pairs, residue coordinates).
    pub fn to_vector(&self) -> Vec<BigInt> {
        let n = self.module.group().order();
        let mut out = Vec::new();
        for s in 1..n {
            for t in 1..n {
                out.extend(self.values[s * n + t].iter().cloned());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Zero::is_zero)
    }

    /// `self − other`; both must live on the same module.
    pub fn sub(&self, other: &Cocycle2) -> Result<Cocycle2> {
        if self.module != other.module {
            return Err(Error::GroupMismatch("cocycles over different modules".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let mut v: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                self.module.reduced().reduce(&mut v);
                v
            })
            .collect();
        Ok(Cocycle2 {
            module: self.module.clone(),
            values,
        })
    }

    /// The full `|G|×|G|` table in residue coordinates, row-major.
    pub fn residue_table(&self) -> &[Vec<BigInt>] {
        &self.values
    }

    /// `self + ∂c` for a 1-cochain `c` given in ambient coordinates (`c(1)` ignored).
    pub fn add_coboundary(&self, c: &[Vec<BigInt>]) -> Result<Cocycle2> {
        let m = &self.module;
        let g = m.group();
        let n = g.order();
        if c.len() != n {
            return Err(Error::Dimension(format!("cochain has {} values, group order is {n}", c.len())));
        }
        let mut cr: Vec<Vec<BigInt>> = c.iter().map(|v| m.residue(v)).collect();
        cr[0] = vec![BigInt::zero(); m.reduced().rank()];
        let mut values = self.values.clone();
        for s in g.elements() {
            for t in g.elements() {
                let mut d = m.act_residue(s, &cr[t]);
                for (i, x) in d.iter_mut().enumerate() {
                    *x -= &cr[g.mul(s, t)][i];
                    *x += &cr[s][i];
                }
                let v = &mut values[s * n + t];
                for (x, y) in v.iter_mut().zip(&d) {
                    *x += y;
                }
                m.reduced().reduce(v);
            }
        }
        Ok(Cocycle2 {
            module: m.clone(),
            values,
        })
    }
}

/// Limits for [`h2_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct H2Options {
    pub max_module_order: usize,
    pub max_group_order: usize,
    pub max_classes: usize,
}

impl Default for H2Options {
    fn default() -> Self {
        H2Options {
            max_module_order: 64,
            max_group_order: 16,
            max_classes: 512,
        }
    }
}

#[derive(Debug, Clone)]
pub struct H2Description {
    pub class_group: AbelianInvariants,
    /// Canonical representatives in increasing lexicographic order of their
    /// residue vectors; the zero class comes first.
    pub representatives: Vec<Cocycle2>,
    pub complete: bool,
}

pub fn h2(a: &GModule, enumerate: bool) -> Result<H2Description> {
    h2_with(a, enumerate, &H2Options::default())
}

pub fn h2_with(a: &GModule, enumerate: bool, opts: &H2Options) -> Result<H2Description> {
    let n = a.group().order();
    if n > opts.max_group_order {
        return Err(Error::CapExceeded {
            what: "group order for H2".into(),
            required: n as u128,
            cap: opts.max_group_order as u128,
        });
    }
    a.small_order(opts.max_module_order)?;
    let bar = Bar::new(a);
    let d2 = bar.coboundary(2);
    let d1 = bar.coboundary(1);
    let sq = subquotient(&d2, &bar.moduli(3), &d1.images, &bar.moduli(2))?;
    let class_group = sq.invariants.clone();
    let count = class_group.order().expect("finite module has finite H2");
    let mut reps: Vec<Vec<BigInt>> = Vec::new();
    let complete = enumerate && count <= BigInt::from(opts.max_classes);
    let dim = d2.src_dim;
    if complete {
        let orders: Vec<usize> = sq.orders.iter().map(|o| o.to_usize().expect("small class group")).collect();
        let total: usize = orders.iter().product();
        for idx in 0..total {
            let mut rest = idx;
            let mut v = vec![BigInt::zero(); dim];
            for (k, &o) in orders.iter().enumerate().rev() {
                let c = rest % o;
                rest /= o;
                if c == 0 {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(&sq.generators[k]) {
                    *x += y * c;
                }
            }
            reps.push(sq.denominator.reduce(&v));
        }
    } else {
        reps.push(vec![BigInt::zero(); dim]);
        for g in &sq.generators {
            reps.push(sq.denominator.reduce(g));
        }
    }
    reps.sort();
    reps.dedup();
    let representatives = reps
        .iter()
        .map(|v| Cocycle2::from_vector(a, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(H2Description {
        class_group,
        representatives,
        complete,
    })
}

/// Canonical representative of the class of `f` (lexicographically least
/// residue vector in its class).
pub fn canonical_representative(f: &Cocycle2) -> Result<Cocycle2> {
    let m = f.module();
    let bar = Bar::new(m);
    let d1 = bar.coboundary(1);
    let mut rows = d1.images.clone();
    for (i, md) in bar.moduli(2).iter().enumerate() {
        if !md.is_zero() {
            rows.push(vec![(i, md.clone())]);
        }
    }
    let lat = crate::exactla::Lattice::from_generators(
        d1.dst_dim,
        &rows
            .iter()
            .map(|r| {
                let mut v = vec![BigInt::zero(); d1.dst_dim];
                for (c, x) in r {
                    v[*c] = x.clone();
                }
                v
            })
            .collect::<Vec<_>>(),
    );
    Cocycle2::from_vector(m, &lat.reduce(&f.to_vector()))
}

/// Position of `f`'s class among the sorted representatives of `desc`.
pub fn class_index(desc: &H2Description, f: &Cocycle2) -> Result<Option<usize>> {
    let c = canonical_representative(f)?;
    Ok(desc.representatives.iter().position(|r| r == &c))
}

/// A 1-cochain `c` with `∂c = f` (values in ambient coordinates, `c(1) = 0`),
/// or `None` when `f` is not a coboundary.
pub fn is_coboundary(f: &Cocycle2) -> Option<Vec<Vec<BigInt>>> {
    let m = f.module();
    let bar = Bar::new(m);
    let d1 = bar.coboundary(1);
    let solver = ModularSolver::new_bounded(&d1, &bar.moduli(2), &bar.moduli(1));
    let x = solver.solve(&f.to_vector())?;
    let r = bar.r;
    let n = m.group().order();
    let mut c = vec![vec![BigInt::zero(); m.ambient_rank()]; n];
    for s in 1..n {
        let mut y = x[(s - 1) * r..s * r].to_vec();
        m.reduced().reduce(&mut y);
        c[s] = m.from_residue(&y);
    }
    Some(c)
}

/// `∂c` as a cocycle.
pub fn coboundary_of(m: &GModule, c: &[Vec<BigInt>]) -> Result<Cocycle2> {
    Cocycle2::zero(m).add_coboundary(c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityVerdict {
    pub trivial: bool,
    /// First failing subgroup (as parent element indices), degree and group.
    pub failure: Option<(Vec<usize>, i64, AbelianInvariants)>,
    pub checks: usize,
}

/// Checks `Ĥ^i(H, M) = 0` for every subgroup `H`: degrees 0 and 1 first,
/// then every other degree in `[-window, window]`.
pub fn is_cohomologically_trivial(m: &GModule, window: i64, opts: &TateOptions) -> Result<TrivialityVerdict> {
    let subs = m.group().subgroups()?;
    let restricted: Vec<(Vec<usize>, GModule)> = subs
        .iter()
        .map(|h| Ok((h.clone(), restrict_module(m, h)?)))
        .collect::<Result<_>>()?;
    let mut checks = 0;
    let first: Vec<i64> = vec![0, 1];
    let rest: Vec<i64> = (-window..=window).filter(|i| *i != 0 && *i != 1).collect();
    for degrees in [&first, &rest] {
        for (h, mh) in &restricted {
            for &i in degrees.iter() {
                let o = TateOptions {
                    degree_window: opts.degree_window.max(window),
                    ..*opts
                };
                let t = tate_with(mh, i, &o)?;
                checks += 1;
                if !t.is_trivial() {
                    return Ok(TrivialityVerdict {
                        trivial: false,
                        failure: Some((h.clone(), i, t)),
                        checks,
                    });
                }
            }
        }
    }
    Ok(TrivialityVerdict {
        trivial: true,
        failure: None,
        checks,
    })
}

/// Whether every factor of `inv` divides `n` (membership in `A(n)`), free part excluded.
pub fn killed_by(inv: &AbelianInvariants, n: usize) -> bool {
    inv.is_killed_by(&BigInt::from(n))
}
