//! Finite groups given by multiplication tables.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Tables up to this order are checked for associativity exhaustively;
/// larger ones use Light's test against a generating set.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;
/// Subgroup enumeration cap.
pub const SUBGROUP_LIMIT: usize = 64;
/// Hard cap on table size.
pub const MAX_ORDER: usize = 4096;

/// A finite group. Element 0 is always the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
}

pub type GroupRef = Arc<FiniteGroup>;

impl FiniteGroup {
    /// Validates a multiplication table: entries in range, element 0 a
    /// two-sided identity, every element invertible, associativity.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::BadTable("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::CapExceeded {
                what: "group order".into(),
                required: n as u128,
                cap: MAX_ORDER as u128,
            });
        }
        if let Some(i) = table.iter().position(|r| r.len() != n) {
            return Err(Error::BadTable(format!("row {i} has length {}, expected {n}", table[i].len())));
        }
        if let Some(&bad) = table.iter().flatten().find(|&&x| x >= n) {
            return Err(Error::BadTable(format!("entry {bad} out of range for order {n}")));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::BadTable(format!("{} labels for {n} elements", l.len())));
            }
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| mul[a * n + b];
        if let Some(g) = (0..n).find(|&g| at(0, g) != g || at(g, 0) != g) {
            return Err(Error::NoIdentity(g));
        }
        let mut inv = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| at(g, h) == 0 && at(h, g) == 0) {
                Some(h) => inv[g] = h,
                None => return Err(Error::NoInverse(g)),
            }
        }
        let group = FiniteGroup {
            order: n,
            mul,
            inv,
            labels,
        };
        group.check_associative()?;
        Ok(group)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        let gens: Vec<usize> = if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            (0..n).collect()
        } else {
            self.greedy_generators()
        };
        for a in 0..n {
            for &b in &gens {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        if n > EXHAUSTIVE_ASSOCIATIVITY_LIMIT && self.closure(&gens).len() != n {
            // Light's test needs a generating set of the whole magma.
            return Err(Error::BadTable("table is not generated by its greedy generating set".into()));
        }
        Ok(())
    }

    /// Elements added one at a time whenever they are outside the span so far.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span: BTreeSet<usize> = [0].into();
        for g in 0..self.order {
            if !span.contains(&g) {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Non-identity elements in index order.
    pub fn nonidentity(&self) -> std::ops::Range<usize> {
        1..self.order
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|g| self.element_order(g)).fold(1, lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest-index element of full order, if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        self.elements().find(|&g| self.element_order(g) == self.order)
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = [0].into();
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    /// All subgroups, sorted by (order, elements).
    pub fn subgroups(&self) -> Result<SubgroupList> {
        if self.order > SUBGROUP_LIMIT {
            return Err(Error::CapExceeded {
                what: "subgroup enumeration (group order)".into(),
                required: self.order as u128,
                cap: SUBGROUP_LIMIT as u128,
            });
        }
        let cyclic: BTreeSet<BTreeSet<usize>> = self.elements().map(|g| self.closure(&[g])).collect();
        let mut all = cyclic.clone();
        let mut frontier: Vec<BTreeSet<usize>> = all.iter().cloned().collect();
        while let Some(h) = frontier.pop() {
            for c in &cyclic {
                if c.is_subset(&h) {
                    continue;
                }
                let gens: Vec<usize> = h.union(c).copied().collect();
                let j = self.closure(&gens);
                if all.insert(j.clone()) {
                    frontier.push(j);
                }
            }
        }
        let mut list: Vec<Vec<usize>> = all.into_iter().map(|s| s.into_iter().collect()).collect();
        list.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(SubgroupList(list))
    }

    /// The subgroup on `elements` as a standalone group (elements relabeled
    /// in increasing parent index, so the identity stays at 0).
    pub fn restrict(&self, elements: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let mut elems: Vec<usize> = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.first() != Some(&0) {
            return Err(Error::BadTable("subgroup must contain the identity".into()));
        }
        let pos = |x: usize| elems.binary_search(&x).ok();
        let mut table = Vec::with_capacity(elems.len());
        for &a in &elems {
            let mut row = Vec::with_capacity(elems.len());
            for &b in &elems {
                row.push(pos(self.mul(a, b)).ok_or_else(|| {
                    Error::BadTable(format!("subset not closed: {a}*{b} escapes"))
                })?);
            }
            table.push(row);
        }
        let labels = self.labels.as_ref().map(|l| elems.iter().map(|&e| l[e].clone()).collect());
        Ok((FiniteGroup::from_table(table, labels)?, elems))
    }

    pub fn prime_power(&self) -> PrimePower {
        prime_power(self.order as u64)
    }

    /// The prime `p` when the order is a positive power of `p`.
    pub fn is_p_group(&self) -> Option<u64> {
        match self.prime_power() {
            PrimePower::Prime { p, .. } => Some(p),
            _ => None,
        }
    }

    /// Index of `(g, h)` in `self × other` is `g·|other| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let mut mul = vec![0; n * m * n * m];
        for a in 0..n * m {
            for b in 0..n * m {
                let g = self.mul(a / m, b / m);
                let h = other.mul(a % m, b % m);
                mul[a * n * m + b] = g * m + h;
            }
        }
        let inv = (0..n * m).map(|x| self.inv(x / m) * m + other.inv(x % m)).collect();
        let labels = match (&self.labels, &other.labels) {
            (None, None) => None,
            _ => Some(
                (0..n * m)
                    .map(|x| format!("({},{})", self.label(x / m), other.label(x % m)))
                    .collect(),
            ),
        };
        FiniteGroup {
            order: n * m,
            mul,
            inv,
            labels,
        }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

/// Shape of a group order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimePower {
    /// Order 1: a p-group for every p.
    Trivial,
    Prime { p: u64, k: u32 },
    Composite,
}

pub fn prime_power(n: u64) -> PrimePower {
    if n == 1 {
        return PrimePower::Trivial;
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap_or(n);
    let (mut m, mut k) = (n, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    if m == 1 {
        PrimePower::Prime { p, k }
    } else {
        PrimePower::Composite
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Subgroups as sorted element-index lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupList(pub Vec<Vec<usize>>);

impl SubgroupList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.0.iter()
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::BadTable("cyclic group of order 0".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::CapExceeded {
            what: "group order".into(),
            required: n as u128,
            cap: MAX_ORDER as u128,
        });
    }
    let mul = (0..n * n).map(|x| (x / n + x % n) % n).collect();
    let inv = (0..n).map(|a| (n - a) % n).collect();
    Ok(FiniteGroup {
        order: n,
        mul,
        inv,
        labels: None,
    })
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    g.direct_product(h)
}

/// Dihedral group of order 8: element `r^i s^j` has index `i + 4j`.
pub fn dihedral8() -> FiniteGroup {
    let idx = |i: usize, j: usize| (i % 4) + 4 * j;
    let mut table = vec![vec![0; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (i1, j1) = (a % 4, a / 4);
            let (i2, j2) = (b % 4, b / 4);
            // r^i1 s^j1 r^i2 s^j2 = r^(i1 ± i2) s^(j1+j2)
            let i = if j1 == 0 { i1 + i2 } else { i1 + 4 - i2 };
            table[a][b] = idx(i, (j1 + j2) % 2);
        }
    }
    let labels = ["1", "r", "r2", "r3", "s", "rs", "r2s", "r3s"];
    FiniteGroup::from_table(table, Some(labels.iter().map(|s| s.to_string()).collect()))
        .expect("dihedral table is a group")
}

/// Quaternion group: indices `0..8` are `1, i, j, k, -1, -i, -j, -k`.
pub fn quaternion8() -> FiniteGroup {
    // Unit quaternion products on the basis (1, i, j, k) as (sign, unit).
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let mut table = vec![vec![0; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (sa, ua) = (a >= 4, a % 4);
            let (sb, ub) = (b >= 4, b % 4);
            let (s, u) = UNIT[ua][ub];
            let neg = sa ^ sb ^ s;
            table[a][b] = u + if neg { 4 } else { 0 };
        }
    }
    let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"];
    FiniteGroup::from_table(table, Some(labels.iter().map(|s| s.to_string()).collect()))
        .expect("quaternion table is a group")
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 8] = ["C2", "C3", "C4", "C8", "C2xC2", "C2xC4", "D8", "Q8"];

/// Resolves a builtin name: `D8`, `Q8`, `Cn`, or products `CaxCbx...`.
pub fn builtin(name: &str) -> Result<FiniteGroup> {
    match name {
        "D8" => return Ok(dihedral8()),
        "Q8" => return Ok(quaternion8()),
        _ => {}
    }
    let mut acc: Option<FiniteGroup> = None;
    for part in name.split('x') {
        let n: usize = part
            .strip_prefix('C')
            .filter(|d| !d.is_empty() && d.len() <= 5 && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("unknown builtin group {name:?}")))?;
        if n == 0 {
            return Err(Error::Parse(format!("unknown builtin group {name:?}")));
        }
        let c = cyclic(n)?;
        acc = Some(match acc {
            None => c,
            Some(g) => {
                if g.order() * n > MAX_ORDER {
                    return Err(Error::CapExceeded {
                        what: "group order".into(),
                        required: (g.order() * n) as u128,
                        cap: MAX_ORDER as u128,
                    });
                }
                g.direct_product(&c)
            }
        });
    }
    acc.ok_or_else(|| Error::Parse(format!("unknown builtin group {name:?}")))
}
