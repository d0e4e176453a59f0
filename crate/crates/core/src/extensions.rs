//! Group extensions `1 → A → 𝒢 → G → 1` with abelian kernel, the module
//! extensions `0 → A → M → I_G → 0` attached to them, and the two maps
//! between these (`star` and `dagger`).
//!
//! Splitting modules use the ambient basis of `A` followed by `b_τ` for
//! `τ ≠ 1` (coordinate `k + τ − 1`), and `b_1 = 0` since every cocycle is
//! normalized.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cohomology::{is_coboundary, Cocycle2};
use crate::error::{Error, Result};
use crate::exactla::IntMatrix;
use crate::gmodules::{augmentation_ideal, p_primary, GModule, ModuleMap, ELEMENT_CAP};
use crate::groups::{FiniteGroup, GroupRef, PrimePower};

/// An extension of `G` by a finite module `A`, given by its cocycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupExtensionData {
    kernel: GModule,
    cocycle: Cocycle2,
}

impl GroupExtensionData {
    pub fn new(kernel: GModule, cocycle: Cocycle2) -> Result<Self> {
        if !kernel.is_finite() {
            return Err(Error::InfiniteModule);
        }
        if cocycle.module() != &kernel {
            return Err(Error::GroupMismatch("cocycle is not over the given kernel".into()));
        }
        Ok(GroupExtensionData { kernel, cocycle })
    }

    /// The split extension (zero cocycle).
    pub fn split(kernel: GModule) -> Result<Self> {
        let f = Cocycle2::zero(&kernel);
        Self::new(kernel, f)
    }

    pub fn quotient(&self) -> &GroupRef {
        self.kernel.group()
    }

    pub fn kernel(&self) -> &GModule {
        &self.kernel
    }

    pub fn cocycle(&self) -> &Cocycle2 {
        &self.cocycle
    }
}

/// A short exact sequence `0 → A → M → I_G → 0` of `G`-modules.
#[derive(Debug, Clone)]
pub struct ModuleExtensionData {
    inject: ModuleMap,
    project: ModuleMap,
}

impl ModuleExtensionData {
    /// Checks injectivity, surjectivity, `project ∘ inject = 0` and that the
    /// kernel of `project` has the order of `A` (so the sequence is exact).
    pub fn new(inject: ModuleMap, project: ModuleMap) -> Result<Self> {
        if inject.target != project.source {
            return Err(Error::MapInvariant("inject and project do not compose".into()));
        }
        if !inject.source.is_finite() {
            return Err(Error::InfiniteModule);
        }
        let ig = augmentation_ideal(inject.source.group().clone())?;
        if project.target != ig {
            return Err(Error::MapInvariant("project does not land in the augmentation ideal".into()));
        }
        if !project.compose_after(&inject)?.is_zero() {
            return Err(Error::MapInvariant("project ∘ inject is not zero".into()));
        }
        if !inject.is_injective()? {
            return Err(Error::MapInvariant("inject is not injective".into()));
        }
        if !project.is_surjective()? {
            return Err(Error::MapInvariant("project is not surjective".into()));
        }
        if project.kernel_invariants()?.order() != inject.source.invariants().order() {
            return Err(Error::MapInvariant("sequence is not exact at the middle term".into()));
        }
        Ok(ModuleExtensionData { inject, project })
    }

    pub fn kernel(&self) -> &GModule {
        &self.inject.source
    }

    pub fn middle(&self) -> &GModule {
        &self.inject.target
    }

    pub fn inject(&self) -> &ModuleMap {
        &self.inject
    }

    pub fn project(&self) -> &ModuleMap {
        &self.project
    }
}

/// `M_(ε)`: `A ⊕ ⊕_{τ≠1} Z b_τ` with `σ b_τ = b_{στ} − b_σ + f(σ,τ)`.
pub fn splitting_module(e: &GroupExtensionData) -> Result<GModule> {
    let a = e.kernel();
    let g = e.quotient();
    let (k, n) = (a.ambient_rank(), g.order());
    let dim = k + n - 1;
    let rel = a.relations();
    let mut relations = IntMatrix::zeros(rel.rows(), dim);
    relations.set_block(0, 0, rel);
    let mut action = Vec::with_capacity(n);
    for s in g.elements() {
        let mut m = IntMatrix::zeros(dim, dim);
        m.set_block(0, 0, a.action(s));
        for t in g.nonidentity() {
            let col = k + t - 1;
            let st = g.mul(s, t);
            if st != 0 {
                m[(k + st - 1, col)] += 1;
            }
            if s != 0 {
                m[(k + s - 1, col)] -= 1;
            }
            for (i, x) in e.cocycle().value(s, t).into_iter().enumerate() {
                m[(i, col)] += x;
            }
        }
        action.push(m);
    }
    GModule::new(g.clone(), dim, relations, action)
}

/// `(ε) ↦ (ε*)`: the inclusion of `A` and `b_σ ↦ σ − 1`.
pub fn star(e: &GroupExtensionData) -> Result<ModuleExtensionData> {
    let a = e.kernel();
    let middle = splitting_module(e)?;
    let ig = augmentation_ideal(e.quotient().clone())?;
    let (k, q) = (a.ambient_rank(), ig.ambient_rank());
    let mut inj = IntMatrix::zeros(k + q, k);
    inj.set_block(0, 0, &IntMatrix::identity(k));
    let mut proj = IntMatrix::zeros(q, k + q);
    proj.set_block(0, k, &IntMatrix::identity(q));
    let inject = ModuleMap::new(a.clone(), middle.clone(), inj)?;
    let project = ModuleMap::new(middle, ig, proj)?;
    ModuleExtensionData::new(inject, project)
}

/// The canonical section of `project`: `s(e_τ)` for `τ = 1, …, |G|−1`, each
/// the deterministic preimage chosen by the exact solver.
pub fn canonical_section(e: &ModuleExtensionData) -> Result<Vec<Vec<BigInt>>> {
    let q = e.project().target.ambient_rank();
    (0..q)
        .map(|t| {
            let mut y = vec![BigInt::zero(); q];
            y[t] = BigInt::from(1);
            e.project()
                .preimage(&y)
                .ok_or_else(|| Error::MapInvariant(format!("no preimage of basis vector {t} under project")))
        })
        .collect()
}

/// `(e) ↦ (e†)` with `f(σ,τ) = σ s(τ−1) − s(στ−1) + s(σ−1)` for the
/// canonical section `s`.
pub fn dagger(e: &ModuleExtensionData) -> Result<GroupExtensionData> {
    let sec = canonical_section(e)?;
    let m = e.middle();
    let g = m.group();
    let n = g.order();
    let zero = vec![BigInt::zero(); m.ambient_rank()];
    let s = |t: usize| if t == 0 { &zero } else { &sec[t - 1] };
    let mut table = Vec::with_capacity(n * n);
    for a in g.elements() {
        for b in g.elements() {
            let mut v = m.act(a, s(b));
            for ((x, y), z) in v.iter_mut().zip(s(g.mul(a, b))).zip(s(a)) {
                *x += z - y;
            }
            let pre = e
                .inject()
                .preimage(&v)
                .ok_or_else(|| Error::Internal(format!("dagger value at ({a},{b}) is outside the kernel")))?;
            table.push(pre);
        }
    }
    let f = Cocycle2::new(e.kernel(), &table)?;
    GroupExtensionData::new(e.kernel().clone(), f)
}

/// The middle group `𝒢` on `A × G`, with the indices of `A` and the map to `G`.
#[derive(Debug, Clone)]
pub struct MiddleGroup {
    pub group: FiniteGroup,
    /// Index of `(a, 1)` for the `a`-th element of `A` (residue order).
    pub inject: Vec<usize>,
    /// Image in `G` of each element.
    pub project: Vec<usize>,
}

impl MiddleGroup {
    /// Whether the image of `A` is central.
    pub fn kernel_is_central(&self) -> bool {
        let g = &self.group;
        self.inject
            .iter()
            .all(|&a| g.elements().all(|x| g.mul(a, x) == g.mul(x, a)))
    }
}

pub fn middle_group(e: &GroupExtensionData) -> Result<MiddleGroup> {
    middle_group_from_residues(e.kernel(), e.cocycle().residue_table())
}

/// Middle group from an unchecked `|G|×|G|` residue table; a table that is
/// not a cocycle is rejected by the group-table validation.
pub fn middle_group_from_residues(kernel: &GModule, table: &[Vec<BigInt>]) -> Result<MiddleGroup> {
    let g = kernel.group();
    let n = g.order();
    let order = kernel.small_order(ELEMENT_CAP)?;
    let total = order * n;
    if total > ELEMENT_CAP {
        return Err(Error::CapExceeded {
            what: "middle group order".into(),
            required: total as u128,
            cap: ELEMENT_CAP as u128,
        });
    }
    if table.len() != n * n || table.iter().any(|v| v.len() != kernel.reduced().rank()) {
        return Err(Error::CocycleInvariant("residue table has the wrong shape".into()));
    }
    let res = kernel.residues()?;
    // acted[σ][b] = index of σ·b
    let acted: Vec<Vec<Vec<BigInt>>> = g
        .elements()
        .map(|s| res.iter().map(|b| kernel.act_residue(s, b)).collect())
        .collect();
    let mut rows = vec![vec![0usize; total]; total];
    for (ai, a) in res.iter().enumerate() {
        for s in g.elements() {
            let row = &mut rows[ai * n + s];
            for bi in 0..order {
                let sb = &acted[s][bi];
                for t in g.elements() {
                    let mut c: Vec<BigInt> = a
                        .iter()
                        .zip(sb)
                        .zip(&table[s * n + t])
                        .map(|((x, y), z)| x + y + z)
                        .collect();
                    kernel.reduced().reduce(&mut c);
                    row[bi * n + t] = kernel.residue_index(&c) * n + g.mul(s, t);
                }
            }
        }
    }
    let group = FiniteGroup::from_table(rows, None)?;
    Ok(MiddleGroup {
        group,
        inject: (0..order).map(|a| a * n).collect(),
        project: (0..total).map(|x| x % n).collect(),
    })
}

/// Verdict of [`equivalent`]: when equivalent, `witness` is a 1-cochain `c`
/// (ambient values, `c(1) = 0`) with `f₂ = f₁ + ∂c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub witness: Option<Vec<Vec<BigInt>>>,
}

/// Equivalence fixing `A` and `G` pointwise.
pub fn equivalent(e1: &GroupExtensionData, e2: &GroupExtensionData) -> Result<Equivalence> {
    if e1.kernel() != e2.kernel() {
        return Err(Error::GroupMismatch("extensions have different kernels or groups".into()));
    }
    let diff = e2.cocycle().sub(e1.cocycle())?;
    let witness = is_coboundary(&diff);
    Ok(Equivalence {
        equivalent: witness.is_some(),
        witness,
    })
}

/// The isomorphism `M_(ε₂) → M_(ε₁)`, `b_σ ↦ b_σ + c(σ)`, for `f₂ = f₁ + ∂c`.
/// Validated as a module map and checked to be bijective.
pub fn splitting_isomorphism(
    e1: &GroupExtensionData,
    e2: &GroupExtensionData,
    witness: &[Vec<BigInt>],
) -> Result<ModuleMap> {
    let m1 = splitting_module(e1)?;
    let m2 = splitting_module(e2)?;
    let k = e1.kernel().ambient_rank();
    let n = e1.quotient().order();
    if witness.len() != n || witness.iter().any(|c| c.len() != k) {
        return Err(Error::Dimension("witness cochain has the wrong shape".into()));
    }
    let mut mat = IntMatrix::identity(k + n - 1);
    for t in 1..n {
        for (i, x) in witness[t].iter().enumerate() {
            mat[(i, k + t - 1)] += x;
        }
    }
    let phi = ModuleMap::new(m2, m1, mat)?;
    if !phi.is_isomorphism()? {
        return Err(Error::Internal("witness map is not bijective".into()));
    }
    Ok(phi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripReport {
    /// `dagger(star(ε))` has literally the same cocycle table as `ε`.
    pub literal: bool,
    pub equivalent: bool,
    pub witness: Option<Vec<Vec<BigInt>>>,
}

impl RoundTripReport {
    pub fn passed(&self) -> bool {
        self.literal && self.equivalent
    }
}

pub fn roundtrip_check(e: &GroupExtensionData) -> Result<RoundTripReport> {
    let back = dagger(&star(e)?)?;
    let eq = equivalent(e, &back)?;
    Ok(RoundTripReport {
        literal: back.cocycle() == e.cocycle(),
        equivalent: eq.equivalent,
        witness: eq.witness,
    })
}

/// Certificate for `(e†*) ≃ (e)`: the map `φ : M_(e†) → M` with `φ|_A =
/// inject` and `φ(b_σ) = s(σ − 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRoundTripReport {
    pub phi: IntMatrix,
    pub equivariant: bool,
    pub bijective: bool,
    pub commutes_inject: bool,
    pub commutes_project: bool,
}

impl ModuleRoundTripReport {
    pub fn passed(&self) -> bool {
        self.equivariant && self.bijective && self.commutes_inject && self.commutes_project
    }
}

pub fn roundtrip_check_module(e: &ModuleExtensionData) -> Result<ModuleRoundTripReport> {
    let sec = canonical_section(e)?;
    let back = dagger(e)?;
    let rebuilt = star(&back)?;
    let m = e.middle();
    let k = e.kernel().ambient_rank();
    let q = sec.len();
    let mut phi = IntMatrix::zeros(m.ambient_rank(), k + q);
    phi.set_block(0, 0, &e.inject().matrix);
    for (t, col) in sec.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            phi[(i, k + t)] = x.clone();
        }
    }
    let map = ModuleMap::new(rebuilt.middle().clone(), m.clone(), phi.clone());
    let (equivariant, bijective) = match &map {
        Ok(f) => (true, f.is_isomorphism()?),
        Err(Error::MapInvariant(_)) => (false, false),
        Err(other) => return Err(other.clone()),
    };
    let via = phi.mul(&rebuilt.inject().matrix)?.sub(&e.inject().matrix)?;
    let commutes_inject = (0..via.cols()).all(|j| m.is_relation(&via.column(j)));
    let commutes_project = e.project().matrix.mul(&phi)? == rebuilt.project().matrix;
    Ok(ModuleRoundTripReport {
        phi,
        equivariant,
        bijective,
        commutes_inject,
        commutes_project,
    })
}

/// `(ε)_p`: the kernel replaced by its `p`-part, the cocycle by its image.
pub fn p_quotient(e: &GroupExtensionData, p: u64) -> Result<GroupExtensionData> {
    let g = e.quotient();
    match g.prime_power() {
        PrimePower::Trivial => {}
        PrimePower::Prime { p: q, .. } if q == p => {}
        _ => return Err(Error::NotPGroup),
    }
    let kp = p_primary(e.kernel(), p)?;
    if kp == *e.kernel() {
        return Ok(e.clone());
    }
    let n = g.order();
    let mut table = Vec::with_capacity(n * n);
    for s in g.elements() {
        for t in g.elements() {
            table.push(e.cocycle().value(s, t));
        }
    }
    let f = Cocycle2::new(&kp, &table)?;
    GroupExtensionData::new(kp, f)
}
