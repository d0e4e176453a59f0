//! Constructive witnesses and census audits for the classification of Tate
//! groups of modules in `𝓜(G)` (extensions of `I_G` by finite modules).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::{h2_with, tate_with, H2Options, TateOptions};
use crate::error::{Error, Result};
use crate::exactla::{AbelianInvariants, IntMatrix};
use crate::extensions::{splitting_module, GroupExtensionData};
use crate::gmodules::{
    augmentation_ideal, direct_sum, group_ring_mod_power, map_cokernel, map_kernel, trivial_module, GModule,
    ModuleMap,
};
use crate::groups::GroupRef;

pub const CENSUS_SCHEMA_VERSION: u32 = 1;

fn killed_check(g: &GroupRef, x: &AbelianInvariants) -> Result<()> {
    if x.is_killed_by(&BigInt::from(g.order())) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{x} is not killed by #G = {}", g.order())))
    }
}

/// Every finite abelian group killed by `n` with at most `max_factors`
/// invariant factors, in lexicographic order of the factor lists.
pub fn killed_by_classes(n: u64, max_factors: usize) -> Vec<AbelianInvariants> {
    let divisors: Vec<u64> = (2..=n).filter(|d| n % d == 0).collect();
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..max_factors {
        let mut next = Vec::new();
        for chain in &frontier {
            for &d in &divisors {
                if chain.last().is_none_or(|&l| d % l == 0) {
                    let mut c = chain.clone();
                    c.push(d);
                    next.push(c);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    let mut v: Vec<AbelianInvariants> =
        out.iter().map(|c| AbelianInvariants::from_factors(c).expect("chain")).collect();
    v.sort();
    v
}

/// Every finite abelian group of order exactly `m`.
pub fn abelian_groups_of_order(m: u64) -> Vec<AbelianInvariants> {
    fn go(rest: u64, min: u64, chain: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(chain.clone());
            return;
        }
        // Chains are built from the largest factor down: each new factor
        // divides the previous one.
        for d in (2..=rest).rev() {
            if rest % d != 0 || chain.last().is_some_and(|&l| l % d != 0) || d < min {
                continue;
            }
            chain.push(d);
            go(rest / d, min, chain, out);
            chain.pop();
        }
    }
    let mut raw = Vec::new();
    go(m, 2, &mut Vec::new(), &mut raw);
    let mut v: Vec<AbelianInvariants> = raw
        .into_iter()
        .map(|mut c| {
            c.reverse();
            AbelianInvariants::from_factors(&c).expect("chain")
        })
        .collect();
    v.sort();
    v.dedup();
    v
}

/// `M = X ⊕ I_G` with trivial action on `X`; `Ĥ⁰(G, M) ≅ X`.
pub fn thm3_h0_witness(g: &GroupRef, x: &AbelianInvariants, opts: &TateOptions) -> Result<(GModule, AbelianInvariants)> {
    killed_check(g, x)?;
    let m = direct_sum(&trivial_module(g.clone(), x)?, &augmentation_ideal(g.clone())?)?;
    let h = tate_with(&m, 0, opts)?;
    Ok((m, h))
}

/// `(Z/n)[G]^{⊕r} ↠ M` sending free generator `j` to `M`'s ambient basis
/// vector `j`; `M` must be killed by `n`. Returns the kernel.
fn free_cover_kernel(m: &GModule, n: u64) -> Result<GModule> {
    let g = m.group();
    let r = m.ambient_rank();
    let k = g.order();
    let free = group_ring_mod_power(g.clone(), n, r)?;
    let mut mat = IntMatrix::zeros(r, r * k);
    for j in 0..r {
        for h in g.elements() {
            let col = m.action(h).column(j);
            for (i, x) in col.into_iter().enumerate() {
                mat[(i, j * k + h)] = x;
            }
        }
    }
    let pi = ModuleMap::new(free, m.clone(), mat)?;
    Ok(map_kernel(&pi)?.0)
}

/// Two syzygy steps from `X` over `(Z/#G)[G]`, then `⊕ I_G`:
/// `Ĥ²(Z) ≅ Ĥ¹(Y) ≅ Ĥ⁰(X) ≅ X`.
pub fn thm3_h2_witness(g: &GroupRef, x: &AbelianInvariants, opts: &TateOptions) -> Result<(GModule, AbelianInvariants)> {
    killed_check(g, x)?;
    let n = g.order() as u64;
    let xm = trivial_module(g.clone(), x)?;
    let y = free_cover_kernel(&xm, n)?;
    let z = free_cover_kernel(&y, n)?;
    let m = direct_sum(&z, &augmentation_ideal(g.clone())?)?;
    let h = tate_with(&m, 2, opts)?;
    Ok((m, h))
}

/// Given `M0` with `Ĥ⁻²(G, M0) = 0`, embeds `X` into the fixed points of
/// `(Z/#G)[G]^{⊕r}` (factor `Z/d` onto `(#G/d)·N`), lets `Y` be the
/// cokernel and returns `M0 ⊕ Y` with `Ĥ⁻²(M0 ⊕ Y) ≅ Ĥ⁻¹(X) ≅ X`.
pub fn lemma1_witness(
    m0: &GModule,
    x: &AbelianInvariants,
    opts: &TateOptions,
) -> Result<(GModule, AbelianInvariants)> {
    let g = m0.group();
    killed_check(g, x)?;
    let h0 = tate_with(m0, -2, opts)?;
    if !h0.is_trivial() {
        return Err(Error::Precondition(format!("Ĥ^-2(G, M0) = {h0} is not trivial")));
    }
    let n = g.order();
    let xm = trivial_module(g.clone(), x)?;
    let r = x.factors().len();
    let free = group_ring_mod_power(g.clone(), n as u64, r)?;
    let mut mat = IntMatrix::zeros(r * n, r);
    for (i, d) in x.factors().iter().enumerate() {
        let scale = BigInt::from(n) / d;
        for h in g.elements() {
            mat[(i * n + h, i)] = scale.clone();
        }
    }
    let emb = ModuleMap::new(xm, free, mat)?;
    let (y, _) = map_cokernel(&emb)?;
    let m = direct_sum(m0, &y)?;
    let h = tate_with(&m, -2, opts)?;
    Ok((m, h))
}

/// Outcome of [`find_h_minus2_vanisher`].
#[derive(Debug, Clone)]
pub enum VanisherSearch {
    Found {
        extension: GroupExtensionData,
        kernel: KernelSpec,
        class_index: usize,
    },
    NotFoundWithinBound {
        kernels_tried: usize,
        extensions_tried: usize,
    },
}

/// Searches the census kernels of order at most `bound` (all `H²` classes)
/// for an extension whose splitting module has `Ĥ⁻² = 0`. The zero kernel
/// comes first, so cyclic groups (where `M = I_G` works) stop at once.
pub fn find_h_minus2_vanisher(g: &GroupRef, bound: u64, opts: &CensusOptions) -> Result<VanisherSearch> {
    if g.is_p_group().is_none() && g.order() != 1 {
        return Err(Error::NotPGroup);
    }
    let kernels = census_kernels(g, bound)?;
    let mut tried = 0;
    for spec in &kernels {
        let a = spec.build(g)?;
        let desc = h2_with(&a, true, &opts.h2)?;
        for (idx, f) in desc.representatives.into_iter().enumerate() {
            let e = GroupExtensionData::new(a.clone(), f)?;
            tried += 1;
            if tate_with(&splitting_module(&e)?, -2, &opts.tate)?.is_trivial() {
                return Ok(VanisherSearch::Found {
                    extension: e,
                    kernel: spec.clone(),
                    class_index: idx,
                });
            }
        }
    }
    Ok(VanisherSearch::NotFoundWithinBound {
        kernels_tried: kernels.len(),
        extensions_tried: tried,
    })
}

/// How `G` acts on a census kernel.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelAction {
    Trivial,
    /// `Z/m` with elements outside the index-2 `subgroup` acting by `−1`.
    Sign { modulus: u64, subgroup: Vec<usize> },
    /// `(Z/m)[G/H]` on the left cosets of `subgroup`.
    Permutation { modulus: u64, subgroup: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KernelSpec {
    pub invariants: AbelianInvariants,
    pub action: KernelAction,
}

impl KernelSpec {
    pub fn label(&self) -> String {
        let elems = |s: &[usize]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match &self.action {
            KernelAction::Trivial => format!("trivial{}", self.invariants),
            KernelAction::Sign { modulus, subgroup } => format!("sign{{{}}}[{modulus}]", elems(subgroup)),
            KernelAction::Permutation { modulus, subgroup } => format!("perm{{{}}}[{modulus}]", elems(subgroup)),
        }
    }

    pub fn build(&self, g: &GroupRef) -> Result<GModule> {
        match &self.action {
            KernelAction::Trivial => trivial_module(g.clone(), &self.invariants),
            KernelAction::Sign { modulus, subgroup } => {
                let action = g
                    .elements()
                    .map(|h| {
                        let s = if subgroup.binary_search(&h).is_ok() { 1 } else { -1 };
                        IntMatrix::from_i64_rows(&[vec![s]])
                    })
                    .collect();
                GModule::new(g.clone(), 1, IntMatrix::from_i64_rows(&[vec![*modulus as i64]]), action)
            }
            KernelAction::Permutation { modulus, subgroup } => {
                let cosets = left_cosets(g, subgroup);
                let k = cosets.len();
                let which = |x: usize| cosets.iter().position(|c| c.binary_search(&x).is_ok()).expect("coset");
                let action = g
                    .elements()
                    .map(|h| {
                        let mut m = IntMatrix::zeros(k, k);
                        for (j, c) in cosets.iter().enumerate() {
                            m[(which(g.mul(h, c[0])), j)] = BigInt::one();
                        }
                        m
                    })
                    .collect();
                GModule::new(g.clone(), k, IntMatrix::scalar(k, &BigInt::from(*modulus)), action)
            }
        }
    }
}

fn left_cosets(g: &GroupRef, h: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        let mut c: Vec<usize> = h.iter().map(|&y| g.mul(x, y)).collect();
        c.sort_unstable();
        for &y in &c {
            seen[y] = true;
        }
        out.push(c);
    }
    out
}

/// The census search space: trivial actions on every abelian group of order
/// at most `bound`, sign actions on cyclic kernels of order at least 3 (one
/// per index-2 subgroup), and permutation modules `(Z/m)[G/H]` for proper
/// subgroups `H`. Sorted by invariants, then action.
pub fn census_kernels(g: &GroupRef, bound: u64) -> Result<Vec<KernelSpec>> {
    let mut out = Vec::new();
    for m in 1..=bound {
        for inv in abelian_groups_of_order(m) {
            out.push(KernelSpec {
                invariants: inv,
                action: KernelAction::Trivial,
            });
        }
    }
    let n = g.order();
    if n > 1 {
        let subs = g.subgroups()?;
        for h in subs.iter() {
            if h.len() == n {
                continue;
            }
            if 2 * h.len() == n {
                for m in 3..=bound {
                    out.push(KernelSpec {
                        invariants: AbelianInvariants::from_factors(&[m])?,
                        action: KernelAction::Sign {
                            modulus: m,
                            subgroup: h.clone(),
                        },
                    });
                }
            }
            let index = (n / h.len()) as u32;
            for m in 2..=bound {
                if m.checked_pow(index).is_none_or(|o| o > bound) {
                    break;
                }
                out.push(KernelSpec {
                    invariants: AbelianInvariants::from_factors(&vec![m; index as usize])?,
                    action: KernelAction::Permutation {
                        modulus: m,
                        subgroup: h.clone(),
                    },
                });
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct CensusOptions {
    pub degrees: (i64, i64),
    pub tate: TateOptions,
    pub h2: H2Options,
    /// Worker threads; 0 means rayon's default.
    pub jobs: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            degrees: (-2, 2),
            tate: TateOptions::default(),
            h2: H2Options::default(),
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub name: String,
    pub order: usize,
    pub abelian: bool,
    pub cyclic: bool,
    /// The prime when `G` is a nontrivial `p`-group.
    pub prime: Option<u64>,
}

impl GroupDescriptor {
    pub fn of(g: &GroupRef, name: &str) -> Self {
        GroupDescriptor {
            name: name.to_string(),
            order: g.order(),
            abelian: g.is_abelian(),
            cyclic: g.is_cyclic(),
            prime: g.is_p_group(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeValue {
    pub degree: i64,
    pub invariants: AbelianInvariants,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub kernel: KernelSpec,
    /// Position of the cocycle class among the canonical `H²` representatives.
    pub class_index: usize,
    pub class_count: usize,
    pub profile: Vec<DegreeValue>,
    /// Set when a cap stopped this instance; the profile is then partial.
    pub error: Option<String>,
}

impl InstanceRecord {
    pub fn at(&self, degree: i64) -> Option<&AbelianInvariants> {
        self.profile.iter().find(|d| d.degree == degree).map(|d| &d.invariants)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedClass {
    pub invariants: AbelianInvariants,
    pub multiplicity: usize,
    /// First instance (in report order) realizing the class.
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeClasses {
    pub degree: i64,
    /// Display label under the dictionary `Ĥ^i ↔ ℋ^{i+2}` (p-groups only).
    pub dictionary_label: Option<String>,
    pub classes: Vec<ObservedClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditVerdict {
    pub name: String,
    pub applicable: bool,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl AuditVerdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub group: GroupDescriptor,
    pub degrees: (i64, i64),
    pub kernel_order_bound: u64,
    pub degree_classes: Vec<DegreeClasses>,
    pub instances: Vec<InstanceRecord>,
    pub audits: Vec<AuditVerdict>,
    /// False when some instance hit a cap or some `H²` was not enumerated in full.
    pub complete: bool,
    pub notes: Vec<String>,
}

struct Job {
    kernel: KernelSpec,
    module: GModule,
    class_index: usize,
    class_count: usize,
    cocycle: crate::cohomology::Cocycle2,
}

fn evaluate(job: &Job, opts: &CensusOptions) -> InstanceRecord {
    let mut rec = InstanceRecord {
        id: format!("{}#{}", job.kernel.label(), job.class_index),
        kernel: job.kernel.clone(),
        class_index: job.class_index,
        class_count: job.class_count,
        profile: Vec::new(),
        error: None,
    };
    let run = |rec: &mut InstanceRecord| -> Result<()> {
        let e = GroupExtensionData::new(job.module.clone(), job.cocycle.clone())?;
        let m = splitting_module(&e)?;
        for i in opts.degrees.0..=opts.degrees.1 {
            let invariants = tate_with(&m, i, &opts.tate)?;
            rec.profile.push(DegreeValue { degree: i, invariants });
        }
        Ok(())
    };
    if let Err(e) = run(&mut rec) {
        rec.error = Some(e.to_string());
    }
    rec
}

/// Tabulates the observed `Ĥ^i(G, M_(ε))` over every census kernel and
/// every `H²` class. Output order is canonical regardless of `jobs`.
pub fn census_run(g: &GroupRef, name: &str, bound: u64, opts: &CensusOptions) -> Result<CensusReport> {
    let (lo, hi) = opts.degrees;
    if lo > hi {
        return Err(Error::Precondition(format!("empty degree range {lo}..{hi}")));
    }
    let w = opts.tate.degree_window;
    if lo < -w || hi > w {
        return Err(Error::DegreeOutOfWindow {
            degree: if lo < -w { lo } else { hi },
            window: w,
        });
    }
    let mut notes = Vec::new();
    let mut complete = true;
    let mut jobs = Vec::new();
    for spec in census_kernels(g, bound)? {
        let a = spec.build(g)?;
        let desc = match h2_with(&a, true, &opts.h2) {
            Ok(d) => d,
            Err(e) if e.is_cap() => {
                complete = false;
                notes.push(format!("{}: {e}", spec.label()));
                continue;
            }
            Err(e) => return Err(e),
        };
        if !desc.complete {
            complete = false;
            notes.push(format!("{}: H2 not enumerated in full", spec.label()));
        }
        let count = desc.representatives.len();
        for (idx, f) in desc.representatives.into_iter().enumerate() {
            jobs.push(Job {
                kernel: spec.clone(),
                module: a.clone(),
                class_index: idx,
                class_count: count,
                cocycle: f,
            });
        }
    }
    let instances: Vec<InstanceRecord> = {
        use rayon::prelude::*;
        let work = || jobs.par_iter().map(|j| evaluate(j, opts)).collect();
        if opts.jobs == 0 {
            work()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
                .install(work)
        }
    };
    for r in &instances {
        if let Some(e) = &r.error {
            complete = false;
            notes.push(format!("{}: {e}", r.id));
        }
    }
    let p_group = g.is_p_group().is_some();
    let mut degree_classes = Vec::new();
    for i in lo..=hi {
        let mut seen: BTreeMap<AbelianInvariants, ObservedClass> = BTreeMap::new();
        for r in &instances {
            if let Some(inv) = r.at(i) {
                seen.entry(inv.clone())
                    .or_insert_with(|| ObservedClass {
                        invariants: inv.clone(),
                        multiplicity: 0,
                        witness: r.id.clone(),
                    })
                    .multiplicity += 1;
            }
        }
        degree_classes.push(DegreeClasses {
            degree: i,
            dictionary_label: p_group.then(|| format!("H^{}", i + 2)),
            classes: seen.into_values().collect(),
        });
    }
    let mut report = CensusReport {
        schema_version: CENSUS_SCHEMA_VERSION,
        group: GroupDescriptor::of(g, name),
        degrees: opts.degrees,
        kernel_order_bound: bound,
        degree_classes,
        instances,
        audits: Vec::new(),
        complete,
        notes,
    };
    report.audits.push(exponent_audit(&report));
    if report.group.cyclic {
        report.audits.push(herbrand_audit(&report));
    }
    Ok(report)
}

impl CensusReport {
    pub fn classes_at(&self, degree: i64) -> Option<&[ObservedClass]> {
        self.degree_classes
            .iter()
            .find(|d| d.degree == degree)
            .map(|d| d.classes.as_slice())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: CensusReport = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if r.schema_version != CENSUS_SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported census schema version {}", r.schema_version)));
        }
        Ok(r)
    }

    /// `degree,invariants,multiplicity,witness`, one line per observed class.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,invariants,multiplicity,witness\n");
        for d in &self.degree_classes {
            for c in &d.classes {
                out.push_str(&format!("{},\"{}\",{},\"{}\"\n", d.degree, c.invariants, c.multiplicity, c.witness));
            }
        }
        out
    }
}

/// Every observed class is killed by `#G`.
pub fn exponent_audit(report: &CensusReport) -> AuditVerdict {
    let n = BigInt::from(report.group.order);
    let mut v = AuditVerdict {
        name: "exponent".into(),
        applicable: true,
        checked: 0,
        violations: Vec::new(),
    };
    for d in &report.degree_classes {
        for c in &d.classes {
            v.checked += 1;
            if !c.invariants.is_killed_by(&n) {
                v.violations.push(format!("degree {}: {} (witness {})", d.degree, c.invariants, c.witness));
            }
        }
    }
    v
}

/// For cyclic `G`: `#Ĥ⁻¹ = #G · #Ĥ⁰` on every instance.
pub fn herbrand_audit(report: &CensusReport) -> AuditVerdict {
    let n = BigInt::from(report.group.order);
    let mut v = AuditVerdict {
        name: "herbrand".into(),
        applicable: report.group.cyclic,
        checked: 0,
        violations: Vec::new(),
    };
    if !report.group.cyclic {
        return v;
    }
    for r in &report.instances {
        let (Some(m1), Some(h0)) = (r.at(-1), r.at(0)) else { continue };
        v.checked += 1;
        match (m1.order(), h0.order()) {
            (Some(a), Some(b)) if a == &n * &b => {}
            _ => v.violations.push(format!("{}: #Ĥ^-1 = {m1}, #Ĥ^0 = {h0}", r.id)),
        }
    }
    v
}

/// For abelian `G`: `#G` divides the order of every observed `Ĥ⁻¹` class.
pub fn suzuki_audit(report: &CensusReport) -> Result<AuditVerdict> {
    if !report.group.abelian {
        return Err(Error::Precondition("the divisibility audit needs an abelian group".into()));
    }
    let n = BigInt::from(report.group.order);
    let mut v = AuditVerdict {
        name: "suzuki".into(),
        applicable: true,
        checked: 0,
        violations: Vec::new(),
    };
    for c in report.classes_at(-1).unwrap_or(&[]) {
        v.checked += 1;
        match c.invariants.order() {
            Some(o) if (&o % &n).is_zero() => {}
            _ => v.violations.push(format!("{} (witness {})", c.invariants, c.witness)),
        }
    }
    Ok(v)
}

/// For cyclic `G ≠ 1`: no instance has trivial `Ĥ⁻¹`.
pub fn satz94_audit(report: &CensusReport) -> Result<AuditVerdict> {
    if !report.group.cyclic || report.group.order == 1 {
        return Err(Error::NotCyclic);
    }
    let mut v = AuditVerdict {
        name: "satz94".into(),
        applicable: true,
        checked: 0,
        violations: Vec::new(),
    };
    for r in &report.instances {
        if let Some(h) = r.at(-1) {
            v.checked += 1;
            if h.is_trivial() {
                v.violations.push(r.id.clone());
            }
        }
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realization {
    Found { witness: String },
    /// Not seen within the enumerated bound; not a refutation.
    BeyondEnumeratedBound,
}

/// Looks for an instance with `Ĥ⁻¹ ≅ X`, for `X` killed by `#G` with `#G | #X`.
pub fn gw_realization_audit(report: &CensusReport, x: &AbelianInvariants) -> Result<Realization> {
    if !report.group.abelian {
        return Err(Error::Precondition("realization audit needs an abelian group".into()));
    }
    let n = BigInt::from(report.group.order);
    if !x.is_killed_by(&n) {
        return Err(Error::Precondition(format!("{x} is not killed by #G = {n}")));
    }
    let order = x.order().expect("finite");
    if !(&order % &n).is_zero() {
        return Err(Error::Precondition(format!("#G = {n} does not divide #X = {order}")));
    }
    Ok(report
        .classes_at(-1)
        .and_then(|cs| cs.iter().find(|c| &c.invariants == x))
        .map_or(Realization::BeyondEnumeratedBound, |c| Realization::Found {
            witness: c.witness.clone(),
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cyclic_tate_oracle;
    use crate::groups::{builtin, cyclic};
    use std::sync::Arc;

    fn g(name: &str) -> GroupRef {
        Arc::new(builtin(name).unwrap())
    }

    fn inv(f: &[u64]) -> AbelianInvariants {
        AbelianInvariants::from_factors(f).unwrap()
    }

    #[test]
    fn class_lists() {
        assert_eq!(killed_by_classes(4, 2), vec![inv(&[]), inv(&[2]), inv(&[2, 2]), inv(&[2, 4]), inv(&[4]), inv(&[4, 4])]);
        assert_eq!(killed_by_classes(2, 1).len(), 2);
        assert_eq!(abelian_groups_of_order(8), vec![inv(&[2, 2, 2]), inv(&[2, 4]), inv(&[8])]);
        assert_eq!(abelian_groups_of_order(12), vec![inv(&[2, 6]), inv(&[12])]);
        assert_eq!(abelian_groups_of_order(1), vec![inv(&[])]);
    }

    #[test]
    fn h0_witnesses() {
        let o = TateOptions::default();
        assert_eq!(thm3_h0_witness(&g("C2"), &inv(&[2]), &o).unwrap().1, inv(&[2]));
        assert!(thm3_h0_witness(&g("D8"), &inv(&[]), &o).unwrap().1.is_trivial());
        assert_eq!(thm3_h0_witness(&g("C4"), &inv(&[2, 4]), &o).unwrap().1, inv(&[2, 4]));
        assert!(matches!(thm3_h0_witness(&g("C2"), &inv(&[3]), &o), Err(Error::Precondition(_))));
    }

    #[test]
    fn h2_witnesses() {
        let o = TateOptions::default();
        assert_eq!(thm3_h2_witness(&g("C2"), &inv(&[2]), &o).unwrap().1, inv(&[2]));
        assert!(thm3_h2_witness(&g("C2"), &inv(&[]), &o).unwrap().1.is_trivial());
        assert_eq!(thm3_h2_witness(&g("C2xC2"), &inv(&[2]), &o).unwrap().1, inv(&[2]));
    }

    #[test]
    fn lemma1_witnesses() {
        let o = TateOptions::default();
        let c4 = g("C4");
        let ig = augmentation_ideal(c4.clone()).unwrap();
        for x in [inv(&[2]), inv(&[4]), inv(&[])] {
            let (m, h) = lemma1_witness(&ig, &x, &o).unwrap();
            assert_eq!(h, x);
            assert_eq!(cyclic_tate_oracle(&m, -2).unwrap(), x);
        }
        let v4 = augmentation_ideal(g("C2xC2")).unwrap();
        assert!(matches!(lemma1_witness(&v4, &inv(&[2]), &o), Err(Error::Precondition(_))));
    }

    #[test]
    fn vanisher_search() {
        let o = CensusOptions::default();
        for name in ["C2", "C4"] {
            match find_h_minus2_vanisher(&g(name), 1, &o).unwrap() {
                VanisherSearch::Found { extension, .. } => assert!(extension.kernel().is_zero()),
                other => panic!("{other:?}"),
            }
        }
        assert!(matches!(
            find_h_minus2_vanisher(&g("C2xC2"), 1, &o).unwrap(),
            VanisherSearch::NotFoundWithinBound { .. }
        ));
    }

    #[test]
    fn kernel_search_space() {
        let ks = census_kernels(&g("C2xC2"), 4).unwrap();
        let count = |f: fn(&KernelAction) -> bool| ks.iter().filter(|k| f(&k.action)).count();
        assert_eq!(count(|a| matches!(a, KernelAction::Trivial)), 5);
        assert_eq!(count(|a| matches!(a, KernelAction::Sign { .. })), 6);
        assert_eq!(count(|a| matches!(a, KernelAction::Permutation { .. })), 3);
        for k in &ks {
            assert_eq!(k.build(&g("C2xC2")).unwrap().invariants(), k.invariants);
        }
    }

    #[test]
    fn census_small() {
        let opts = CensusOptions::default();
        let r = census_run(&g("C2"), "C2", 2, &opts).unwrap();
        let m1: Vec<_> = r.classes_at(-1).unwrap().iter().map(|c| c.invariants.clone()).collect();
        assert!(m1.contains(&inv(&[2])) && m1.contains(&inv(&[2, 2])));
        assert!(!m1.contains(&inv(&[])));
        assert!(r.audits.iter().all(AuditVerdict::passed));
        assert!(suzuki_audit(&r).unwrap().passed());
        assert!(satz94_audit(&r).unwrap().passed());
        assert_eq!(gw_realization_audit(&r, &inv(&[2])).unwrap(), Realization::Found { witness: r.classes_at(-1).unwrap().iter().find(|c| c.invariants == inv(&[2])).unwrap().witness.clone() });
        assert!(gw_realization_audit(&r, &inv(&[3])).is_err());
        assert_eq!(CensusReport::from_json(&r.to_json()).unwrap(), r);

        let one = census_run(&g("C2"), "C2", 1, &CensusOptions { degrees: (0, 0), ..opts }).unwrap();
        assert_eq!(one.classes_at(0).unwrap().len(), 1);
        assert!(one.classes_at(0).unwrap()[0].invariants.is_trivial());

        let triv = Arc::new(cyclic(1).unwrap());
        let t = census_run(&triv, "C1", 3, &opts).unwrap();
        for d in &t.degree_classes {
            assert!(d.classes.iter().all(|c| c.invariants.is_trivial()));
        }
    }

    #[test]
    fn census_is_schedule_independent() {
        let base = CensusOptions::default();
        let a = census_run(&g("C2xC2"), "C2xC2", 4, &CensusOptions { jobs: 1, ..base }).unwrap();
        let b = census_run(&g("C2xC2"), "C2xC2", 4, &CensusOptions { jobs: 4, ..base }).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(suzuki_audit(&a).unwrap().passed());
    }
}
