//! Shared helpers for integration tests: brute-force oracles over finite
//! modules and a generator of random small modules.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use tatecoh::gmodules::{direct_sum, group_ring, GModule};
use tatecoh::groups::{builtin, GroupRef};
use tatecoh::{AbelianInvariants, IntMatrix};

pub fn group(name: &str) -> GroupRef {
    Arc::new(builtin(name).unwrap())
}

pub fn inv(factors: &[u64]) -> AbelianInvariants {
    AbelianInvariants::from_factors(factors).unwrap()
}

/// Finite module flattened to element indices with explicit tables.
pub struct Model {
    pub size: usize,
    pub zero: usize,
    pub add: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
    pub group: GroupRef,
}

impl Model {
    pub fn new(m: &GModule) -> Self {
        let res = m.residues().unwrap();
        let size = res.len();
        assert!(size <= 512, "model too large: {size}");
        let amb: Vec<Vec<BigInt>> = res.iter().map(|y| m.from_residue(y)).collect();
        let idx = |x: &[BigInt]| m.residue_index(&m.residue(x));
        let add = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| idx(&amb[i].iter().zip(&amb[j]).map(|(a, b)| a + b).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let act = m
            .group()
            .elements()
            .map(|g| (0..size).map(|i| idx(&m.act(g, &amb[i]))).collect())
            .collect();
        let zero = idx(&vec![BigInt::from(0); m.ambient_rank()]);
        Model { size, zero, add, act, group: m.group().clone() }
    }

    pub fn neg(&self, x: usize) -> usize {
        (0..self.size).find(|&y| self.add[x][y] == self.zero).unwrap()
    }

    pub fn times(&self, d: usize, x: usize) -> usize {
        (0..d).fold(self.zero, |acc, _| self.add[acc][x])
    }

    pub fn norm(&self, x: usize) -> usize {
        self.group.elements().fold(self.zero, |acc, g| self.add[acc][self.act[g][x]])
    }

    pub fn span(&self, gens: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut seen = BTreeSet::from([self.zero]);
        let mut queue = VecDeque::from([self.zero]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.add[x][g];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// `Ĥ⁰ = M^G / N·M` as (numerator, denominator).
    pub fn h0(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let fixed = (0..self.size).filter(|&x| self.group.elements().all(|g| self.act[g][x] == x)).collect();
        let norms = (0..self.size).map(|x| self.norm(x)).collect();
        (fixed, norms)
    }

    /// `Ĥ⁻¹ = ker N / I_G·M`.
    pub fn h_minus1(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let ker = (0..self.size).filter(|&x| self.norm(x) == self.zero).collect();
        let diffs: Vec<usize> = (0..self.size)
            .flat_map(|x| self.group.elements().map(move |g| (g, x)))
            .map(|(g, x)| self.add[self.act[g][x]][self.neg(x)])
            .collect();
        (ker, self.span(diffs))
    }

    fn add_fn(&self, f: &[usize], h: &[usize]) -> Vec<usize> {
        f.iter().zip(h).map(|(&a, &b)| self.add[a][b]).collect()
    }

    /// `H¹` as crossed homomorphisms modulo principal ones.
    pub fn h1(&self) -> (HashSet<Vec<usize>>, HashSet<Vec<usize>>) {
        let g = &self.group;
        let n = g.order();
        let gens = generators(g);
        let mut z1 = HashSet::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if let Some(f) = self.extend_crossed(&gens, &choice) {
                z1.insert(f);
            }
            if !odometer(&mut choice, self.size) {
                break;
            }
        }
        let b1 = (0..self.size)
            .map(|m| (0..n).map(|s| self.add[self.act[s][m]][self.neg(m)]).collect())
            .collect();
        (z1, b1)
    }

    fn extend_crossed(&self, gens: &[usize], vals: &[usize]) -> Option<Vec<usize>> {
        let g = &self.group;
        let n = g.order();
        let mut f = vec![usize::MAX; n];
        f[g.identity()] = self.zero;
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            for (&s, &fs) in gens.iter().zip(vals) {
                let sx = g.mul(s, x);
                let v = self.add[fs][self.act[s][f[x]]];
                if f[sx] == usize::MAX {
                    f[sx] = v;
                    queue.push_back(sx);
                } else if f[sx] != v {
                    return None;
                }
            }
        }
        for s in 0..n {
            for t in 0..n {
                if f[g.mul(s, t)] != self.add[f[s]][self.act[s][f[t]]] {
                    return None;
                }
            }
        }
        Some(f)
    }

    /// Normalized 2-cocycles and coboundaries; entries indexed `(s-1)(n-1) + (t-1)`.
    pub fn h2(&self) -> (HashSet<Vec<usize>>, HashSet<Vec<usize>>) {
        let g = &self.group;
        let n = g.order();
        let cells = (n - 1) * (n - 1);
        assert!((self.size as f64).powi(cells as i32) <= 1e6, "H^2 brute force too large");
        let val = |f: &[usize], s: usize, t: usize| if s == 0 || t == 0 { self.zero } else { f[(s - 1) * (n - 1) + t - 1] };
        let mut z2 = HashSet::new();
        let mut f = vec![0usize; cells];
        loop {
            let ok = (1..n).all(|s| {
                (1..n).all(|t| {
                    (1..n).all(|u| {
                        let lhs = self.add[self.act[s][val(&f, t, u)]][val(&f, s, g.mul(t, u))];
                        let rhs = self.add[val(&f, g.mul(s, t), u)][val(&f, s, t)];
                        lhs == rhs
                    })
                })
            });
            if ok {
                z2.insert(f.clone());
            }
            if !odometer(&mut f, self.size) {
                break;
            }
        }
        let mut b2 = HashSet::new();
        let mut c = vec![0usize; n - 1];
        loop {
            let cv = |s: usize| if s == 0 { self.zero } else { c[s - 1] };
            let d: Vec<usize> = (1..n)
                .flat_map(|s| (1..n).map(move |t| (s, t)))
                .map(|(s, t)| self.add[self.add[self.act[s][cv(t)]][self.neg(cv(g.mul(s, t)))]][cv(s)])
                .collect();
            b2.insert(d);
            if !odometer(&mut c, self.size) {
                break;
            }
        }
        (z2, b2)
    }

    /// Does `num / den` (pointwise-function groups) have the invariants `inv`?
    pub fn fn_quotient_is(&self, num: &HashSet<Vec<usize>>, den: &HashSet<Vec<usize>>, inv: &AbelianInvariants) -> bool {
        let times = |d: usize, f: &Vec<usize>| f.iter().map(|&x| self.times(d, x)).collect::<Vec<_>>();
        quotient_matches(num.len(), den.len(), inv, |d| num.iter().filter(|f| den.contains(&times(d, f))).count())
    }

    pub fn quotient_is(&self, num: &BTreeSet<usize>, den: &BTreeSet<usize>, inv: &AbelianInvariants) -> bool {
        assert!(den.is_subset(num));
        quotient_matches(num.len(), den.len(), inv, |d| num.iter().filter(|&&x| den.contains(&self.times(d, x))).count())
    }

    pub fn add_fns(&self, f: &[usize], h: &[usize]) -> Vec<usize> {
        self.add_fn(f, h)
    }
}

/// `#{x : d·x = 0}` in the group with these invariants.
pub fn torsion_count(inv: &AbelianInvariants, d: usize) -> usize {
    assert!(inv.is_finite());
    let d = BigInt::from(d);
    inv.factors().iter().map(|f| f.gcd(&d).to_usize().unwrap()).product()
}

/// Counts of d-torsion for every d determine a finite abelian group.
fn quotient_matches(num: usize, den: usize, inv: &AbelianInvariants, count: impl Fn(usize) -> usize) -> bool {
    if !inv.is_finite() || den == 0 || num % den != 0 {
        return false;
    }
    let order = num / den;
    if inv.order().and_then(|o| o.to_usize()) != Some(order) {
        return false;
    }
    (2..=order).filter(|d| order % d == 0).all(|d| count(d) == den * torsion_count(inv, d))
}

fn odometer(v: &mut [usize], base: usize) -> bool {
    for x in v.iter_mut().rev() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

pub fn generators(g: &GroupRef) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut reached = g.closure(&[]);
    for x in g.elements() {
        if !reached.contains(&x) {
            gens.push(x);
            reached = g.closure(&gens);
        }
    }
    gens
}

/// Invariants of an abelian group read off from element-order counts alone.
pub fn abelian_invariants_by_counting(g: &GroupRef) -> AbelianInvariants {
    assert!(g.is_abelian());
    let n = g.order();
    let power = |x: usize, k: usize| (0..k).fold(g.identity(), |acc, _| g.mul(acc, x));
    let count = |d: usize| g.elements().filter(|&x| power(x, d) == g.identity()).count();
    let candidates = tatecoh::theorems::abelian_groups_of_order(n as u64);
    let mut hits = candidates
        .into_iter()
        .filter(|c| (1..=n).filter(|d| n % d == 0).all(|d| torsion_count(c, d) == count(d)));
    let found = hits.next().expect("some abelian group matches");
    assert!(hits.next().is_none());
    found
}

/// `H₂(G, Z) ≅ Λ²G` for abelian `G`: `⊕_{i<j} Z/gcd(d_i, d_j)`.
pub fn abelian_schur_multiplier(g: &GroupRef) -> AbelianInvariants {
    let d = abelian_invariants_by_counting(g);
    let f = d.factors();
    let mut orders = Vec::new();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            orders.push(f[i].gcd(&f[j]));
        }
    }
    AbelianInvariants::from_cyclic_orders(&orders)
}

/// Quotient of `Z[G]^copies` by the `G`-span of random vectors and optionally `m·Z[G]^copies`.
pub fn random_module(g: &GroupRef, rng: &mut impl Rng, copies: usize, modulus: u64, extra: usize) -> GModule {
    let mut free = group_ring(g.clone()).unwrap();
    for _ in 1..copies {
        free = direct_sum(&free, &group_ring(g.clone()).unwrap()).unwrap();
    }
    let k = free.ambient_rank();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    if modulus > 0 {
        for i in 0..k {
            let mut v = vec![BigInt::from(0); k];
            v[i] = BigInt::from(modulus);
            rows.push(v);
        }
    }
    for _ in 0..extra {
        let v: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
        for s in g.elements() {
            rows.push(free.act(s, &v));
        }
    }
    let relations = if rows.is_empty() { IntMatrix::zeros(0, k) } else { IntMatrix::from_rows(rows, k).unwrap() };
    GModule::new(g.clone(), k, relations, free.actions().to_vec()).unwrap()
}
