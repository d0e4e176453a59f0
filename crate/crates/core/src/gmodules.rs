//! Finitely presented abelian groups with a group action.
//!
//! A module is `Z^k / L` where `L` is the row span of the relation matrix,
//! and each group element acts by a `k×k` integer matrix on column vectors.
//! Every module also carries its Smith frame and a reduced presentation
//! `⊕ Z/m_j` (free summands have `m_j = 0`) in which all cohomology is done.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::{
    cokernel_invariants, smith_frame, subquotient_invariants, AbelianInvariants, IntMatrix, Lattice, Row,
    SmithFrame, SparseMap,
};
use crate::groups::{FiniteGroup, GroupRef};

/// Cap on explicit element enumeration.
pub const ELEMENT_CAP: usize = 4096;

/// The presentation `⊕ Z/m_j` obtained by dropping dead Smith coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduced {
    /// Order of each coordinate: 0 for free, otherwise at least 2.
    pub moduli: Vec<BigInt>,
    /// Ambient → reduced coordinates (`r×k`).
    pub to: IntMatrix,
    /// Reduced → ambient coordinates (`k×r`).
    pub from: IntMatrix,
    /// Induced action per element; row `j` reduced modulo `moduli[j]`.
    pub actions: Vec<IntMatrix>,
}

impl Reduced {
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// Brings each coordinate into `[0, m_j)` (free coordinates untouched).
    pub fn reduce(&self, y: &mut [BigInt]) {
        for (x, m) in y.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor(m);
            }
        }
    }
}

struct Inner {
    group: GroupRef,
    ambient: usize,
    relations: IntMatrix,
    action: Vec<IntMatrix>,
    frame: SmithFrame,
    reduced: Reduced,
}

/// A finitely presented `Z[G]`-module. Cheap to clone.
#[derive(Clone)]
pub struct GModule(Arc<Inner>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleOrder {
    Finite(BigInt),
    Infinite,
}

fn reduce_rows(m: &mut IntMatrix, moduli: &[BigInt]) {
    for i in 0..m.rows() {
        let md = &moduli[i];
        if md.is_zero() {
            continue;
        }
        for j in 0..m.cols() {
            let x = m[(i, j)].mod_floor(md);
            m[(i, j)] = x;
        }
    }
}

fn small_entries(m: &IntMatrix) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for x in m.row(i) {
            let v = x.to_i64().filter(|v| v.unsigned_abs() < (1 << 31))?;
            out.push(v);
        }
    }
    Some(out)
}

/// `a·b` with row `i` reduced modulo `moduli[i]`.
pub(crate) fn mul_mod(a: &IntMatrix, b: &IntMatrix, moduli: &[BigInt]) -> IntMatrix {
    let (n, k, m) = (a.rows(), a.cols(), b.cols());
    if let (Some(sa), Some(sb), Some(md)) = (
        small_entries(a),
        small_entries(b),
        moduli.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>(),
    ) {
        let mut out = Vec::with_capacity(n * m);
        let mut ok = true;
        'rows: for i in 0..n {
            for j in 0..m {
                let mut acc: i128 = 0;
                for t in 0..k {
                    let x = sa[i * k + t];
                    if x != 0 {
                        acc += x as i128 * sb[t * m + j] as i128;
                    }
                }
                if md[i] != 0 {
                    acc = acc.rem_euclid(md[i] as i128);
                }
                match i64::try_from(acc) {
                    Ok(v) => out.push(BigInt::from(v)),
                    Err(_) => {
                        ok = false;
                        break 'rows;
                    }
                }
            }
        }
        if ok {
            return IntMatrix::new(n, m, out).expect("sizes agree");
        }
    }
    let mut p = a.mul(b).expect("inner dimensions agree");
    reduce_rows(&mut p, moduli);
    p
}

fn lattice_contains(frame: &SmithFrame, x: &[BigInt]) -> bool {
    let y = frame.to_smith.mul_vec(x).expect("dimension checked");
    y.iter().zip(&frame.moduli).all(|(v, m)| {
        if m.is_zero() {
            v.is_zero()
        } else {
            v.is_multiple_of(m)
        }
    })
}

fn build_reduced(frame: &SmithFrame, action: &[IntMatrix]) -> Reduced {
    let keep: Vec<usize> = (0..frame.moduli.len()).filter(|&j| !frame.moduli[j].is_one()).collect();
    let k = frame.moduli.len();
    let all: Vec<usize> = (0..k).collect();
    let to = frame.to_smith.submatrix(&keep, &all);
    let from = frame.from_smith.submatrix(&all, &keep);
    let moduli: Vec<BigInt> = keep.iter().map(|&j| frame.moduli[j].clone()).collect();
    let actions = action
        .iter()
        .map(|a| {
            let t = to.mul(a).expect("square action");
            mul_mod(&t, &from, &moduli)
        })
        .collect();
    Reduced {
        moduli,
        to,
        from,
        actions,
    }
}

impl GModule {
    /// Validates and builds a module. Checks, in order: the action preserves
    /// the relation lattice, the identity acts trivially, and the action is
    /// multiplicative on the cokernel.
    pub fn new(group: GroupRef, ambient_rank: usize, relations: IntMatrix, action: Vec<IntMatrix>) -> Result<Self> {
        let n = group.order();
        if relations.cols() != ambient_rank {
            return Err(Error::ModuleInvariant(format!(
                "relation matrix has {} columns, ambient rank is {ambient_rank}",
                relations.cols()
            )));
        }
        if action.len() != n {
            return Err(Error::ModuleInvariant(format!(
                "{} action matrices given for a group of order {n}",
                action.len()
            )));
        }
        if let Some(g) = action.iter().position(|a| a.rows() != ambient_rank || a.cols() != ambient_rank) {
            return Err(Error::ModuleInvariant(format!(
                "action matrix of element {g} is not {ambient_rank}x{ambient_rank}"
            )));
        }
        let frame = smith_frame(&relations);
        for (g, a) in action.iter().enumerate() {
            for i in 0..relations.rows() {
                let img = a.mul_vec(relations.row(i))?;
                if !lattice_contains(&frame, &img) {
                    return Err(Error::ModuleInvariant(format!(
                        "action of element {g} does not map the relation lattice into itself (relator {i})"
                    )));
                }
            }
        }
        let reduced = build_reduced(&frame, &action);
        let r = reduced.rank();
        let mut id = IntMatrix::identity(r);
        reduce_rows(&mut id, &reduced.moduli);
        if reduced.actions[0] != id {
            return Err(Error::ModuleInvariant(
                "the identity element does not act as the identity on the module".into(),
            ));
        }
        for g in 1..n {
            for h in 1..n {
                let prod = mul_mod(&reduced.actions[g], &reduced.actions[h], &reduced.moduli);
                if prod != reduced.actions[group.mul(g, h)] {
                    return Err(Error::ModuleInvariant(format!(
                        "action is not multiplicative: action({g})·action({h}) differs from action({g}*{h})"
                    )));
                }
            }
        }
        Ok(GModule(Arc::new(Inner {
            group,
            ambient: ambient_rank,
            relations,
            action,
            frame,
            reduced,
        })))
    }

    pub fn group(&self) -> &GroupRef {
        &self.0.group
    }

    pub fn ambient_rank(&self) -> usize {
        self.0.ambient
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.0.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.0.action
    }

    pub fn frame(&self) -> &SmithFrame {
        &self.0.frame
    }

    pub fn reduced(&self) -> &Reduced {
        &self.0.reduced
    }

    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants::from_cyclic_orders(&self.0.reduced.moduli)
    }

    pub fn order(&self) -> ModuleOrder {
        match self.invariants().order() {
            Some(o) => ModuleOrder::Finite(o),
            None => ModuleOrder::Infinite,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.0.reduced.moduli.iter().all(|m| !m.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.reduced.rank() == 0
    }

    /// Order as a machine integer when finite and at most `cap`.
    pub fn small_order(&self, cap: usize) -> Result<usize> {
        match self.order() {
            ModuleOrder::Infinite => Err(Error::InfiniteModule),
            ModuleOrder::Finite(o) => match o.to_usize().filter(|&x| x <= cap) {
                Some(x) => Ok(x),
                None => Err(Error::CapExceeded {
                    what: "module order".into(),
                    required: o.to_u128().unwrap_or(u128::MAX),
                    cap: cap as u128,
                }),
            },
        }
    }

    /// Whether `x` lies in the relation lattice.
    pub fn is_relation(&self, x: &[BigInt]) -> bool {
        lattice_contains(&self.0.frame, x)
    }

    /// Reduced-presentation coordinates of `x`, each in `[0, m_j)`.
    pub fn residue(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.0.reduced.to.mul_vec(x).expect("ambient length");
        self.0.reduced.reduce(&mut y);
        y
    }

    pub fn from_residue(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.0.reduced.from.mul_vec(y).expect("reduced length")
    }

    /// Canonical ambient representative: equal iff congruent mod relations.
    pub fn canonical(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.from_residue(&self.residue(x))
    }

    pub fn element(&self, x: &[BigInt]) -> Result<ModuleElement> {
        if x.len() != self.0.ambient {
            return Err(Error::Dimension(format!(
                "element has {} coordinates, module ambient rank is {}",
                x.len(),
                self.0.ambient
            )));
        }
        Ok(ModuleElement(self.canonical(x)))
    }

    pub fn act(&self, g: usize, x: &[BigInt]) -> Vec<BigInt> {
        self.0.action[g].mul_vec(x).expect("ambient length")
    }

    /// Action in residue coordinates, result reduced.
    pub fn act_residue(&self, g: usize, y: &[BigInt]) -> Vec<BigInt> {
        let mut out = self.0.reduced.actions[g].mul_vec(y).expect("reduced length");
        self.0.reduced.reduce(&mut out);
        out
    }

    /// All elements as residue vectors in lexicographic order.
    pub fn residues(&self) -> Result<Vec<Vec<BigInt>>> {
        let total = self.small_order(ELEMENT_CAP)?;
        let moduli: Vec<usize> = self.0.reduced.moduli.iter().map(|m| m.to_usize().unwrap()).collect();
        let mut out = Vec::with_capacity(total);
        let mut cur = vec![0usize; moduli.len()];
        for _ in 0..total {
            out.push(cur.iter().map(|&c| BigInt::from(c)).collect());
            for j in (0..moduli.len()).rev() {
                cur[j] += 1;
                if cur[j] < moduli[j] {
                    break;
                }
                cur[j] = 0;
            }
        }
        Ok(out)
    }

    /// Position of a residue vector in [`residues`](Self::residues).
    pub fn residue_index(&self, y: &[BigInt]) -> usize {
        let mut idx = 0usize;
        for (v, m) in y.iter().zip(&self.0.reduced.moduli) {
            idx = idx * m.to_usize().expect("finite module") + v.to_usize().expect("reduced residue");
        }
        idx
    }

    /// Elements in canonical residue order (finite modules, at most 4096).
    pub fn elements(&self) -> Result<Vec<ModuleElement>> {
        Ok(self.residues()?.iter().map(|y| ModuleElement(self.from_residue(y))).collect())
    }

    fn same_group(&self, other: &GModule) -> Result<()> {
        if Arc::ptr_eq(&self.0.group, &other.0.group) || *self.0.group == *other.0.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch("modules are over different groups".into()))
        }
    }

    /// Reduced presentation as a module in its own right, with the
    /// isomorphisms `self → simple` and `simple → self`.
    pub fn simplified(&self) -> Result<(GModule, ModuleMap, ModuleMap)> {
        let red = &self.0.reduced;
        let r = red.rank();
        let rel_rows: Vec<Vec<BigInt>> = (0..r)
            .filter(|&j| !red.moduli[j].is_zero())
            .map(|j| {
                let mut v = vec![BigInt::zero(); r];
                v[j] = red.moduli[j].clone();
                v
            })
            .collect();
        let relations = IntMatrix::from_rows(rel_rows, r)?;
        let simple = GModule::new(self.0.group.clone(), r, relations, red.actions.clone())?;
        let to = ModuleMap::new_unchecked(self.clone(), simple.clone(), red.to.clone());
        let from = ModuleMap::new_unchecked(simple.clone(), self.clone(), red.from.clone());
        Ok((simple, to, from))
    }

    /// Builds the submodule spanned by a lattice `K` with `L ⊆ K`, `A_g K ⊆ K`,
    /// as a standalone simplified module with its inclusion into `self`.
    fn sublattice_module(&self, k: &Lattice) -> Result<(GModule, ModuleMap)> {
        let basis = k.basis();
        let s = basis.len();
        let dim = self.0.ambient;
        let coords = |v: &[BigInt]| {
            k.coordinates(v)
                .ok_or_else(|| Error::Internal("vector outside the submodule lattice".into()))
        };
        let mut rel_rows = Vec::with_capacity(self.0.relations.rows());
        for i in 0..self.0.relations.rows() {
            rel_rows.push(coords(self.0.relations.row(i))?);
        }
        let relations = IntMatrix::from_rows(rel_rows, s)?;
        let mut action = Vec::with_capacity(self.0.action.len());
        for a in &self.0.action {
            let cols: Vec<Vec<BigInt>> =
                basis.iter().map(|b| coords(&a.mul_vec(b).expect("ambient length"))).collect::<Result<_>>()?;
            action.push(IntMatrix::from_columns(&cols, s)?);
        }
        let sub = GModule::new(self.0.group.clone(), s, relations, action)?;
        let incl = IntMatrix::from_columns(&basis, dim)?;
        let (simple, _, from) = sub.simplified()?;
        let matrix = incl.mul(&from.matrix)?;
        Ok((simple.clone(), ModuleMap::new_unchecked(simple, self.clone(), matrix)))
    }
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (*self.0.group == *other.0.group
                && self.0.ambient == other.0.ambient
                && self.0.relations == other.0.relations
                && self.0.action == other.0.action)
    }
}

impl Eq for GModule {}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GModule(|G|={}, ambient {}, {})",
            self.0.group.order(),
            self.0.ambient,
            self.invariants()
        )
    }
}

/// A module element in canonical ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleElement(pub Vec<BigInt>);

impl ModuleElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }
}

/// A `G`-equivariant homomorphism given on ambient coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: GModule,
    pub target: GModule,
    pub matrix: IntMatrix,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap({:?} -> {:?})", self.source, self.target)
    }
}

impl ModuleMap {
    /// Validates shape, well-definedness and equivariance.
    pub fn new(source: GModule, target: GModule, matrix: IntMatrix) -> Result<Self> {
        source.same_group(&target)?;
        if matrix.rows() != target.ambient_rank() || matrix.cols() != source.ambient_rank() {
            return Err(Error::MapInvariant(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ambient_rank(),
                source.ambient_rank()
            )));
        }
        let rel = source.relations();
        for i in 0..rel.rows() {
            if !target.is_relation(&matrix.mul_vec(rel.row(i))?) {
                return Err(Error::MapInvariant(format!(
                    "not well defined: relator {i} of the source maps outside the target relations"
                )));
            }
        }
        for g in source.group().elements() {
            let lhs = matrix.mul(source.action(g))?;
            let rhs = target.action(g).mul(&matrix)?;
            let diff = lhs.sub(&rhs)?;
            for j in 0..diff.cols() {
                if !target.is_relation(&diff.column(j)) {
                    return Err(Error::MapInvariant(format!(
                        "not equivariant: element {g} on source basis vector {j}"
                    )));
                }
            }
        }
        Ok(Self::new_unchecked(source, target, matrix))
    }

    pub(crate) fn new_unchecked(source: GModule, target: GModule, matrix: IntMatrix) -> Self {
        ModuleMap {
            source,
            target,
            matrix,
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.canonical(&self.matrix.mul_vec(x).expect("source length"))
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if first.target != self.source {
            return Err(Error::MapInvariant("composition of maps with mismatched modules".into()));
        }
        Ok(ModuleMap::new_unchecked(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix)?,
        ))
    }

    /// Whether the map is zero on the cokernels.
    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_relation(&self.matrix.column(j)))
    }

    /// Pullback of the target relations: `{x : F x ∈ L_target}`.
    fn preimage_of_relations(&self) -> Lattice {
        let to_smith = self.target.frame().to_smith.mul(&self.matrix).expect("dims");
        SparseMap::from_matrix(&to_smith).kernel(&self.target.frame().moduli)
    }

    /// Canonical solution `x` of `F x = y` in the target, or `None` when `y`
    /// is not in the image. Deterministic: the coset of solutions is reduced
    /// by the echelon basis of `{x : F x ∈ L_target}`.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let frame = self.target.frame();
        let to_smith = frame.to_smith.mul(&self.matrix).expect("dims");
        let solver = crate::exactla::ModularSolver::new(&SparseMap::from_matrix(&to_smith), &frame.moduli);
        solver.solve(&frame.to_smith.mul_vec(y).expect("target length"))
    }

    /// Invariants of the kernel as an abelian group.
    pub fn kernel_invariants(&self) -> Result<AbelianInvariants> {
        let to_smith = self.target.frame().to_smith.mul(&self.matrix)?;
        let out = SparseMap::from_matrix(&to_smith);
        let rel = self.source.relations();
        let dens: Vec<Row<BigInt>> = (0..rel.rows()).map(|i| crate::exactla::dense_row(rel.row(i))).collect();
        let src_moduli = vec![BigInt::zero(); self.source.ambient_rank()];
        subquotient_invariants(&out, &self.target.frame().moduli, &dens, &src_moduli)
    }

    pub fn cokernel_invariants(&self) -> Result<AbelianInvariants> {
        let stacked = self.target.relations().vstack(&self.matrix.transpose())?;
        cokernel_invariants(&stacked, self.target.ambient_rank())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel_invariants()?.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel_invariants()?.is_trivial())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }
}

pub fn trivial_module(group: GroupRef, invariants: &AbelianInvariants) -> Result<GModule> {
    let f = invariants.factors();
    let k = f.len() + invariants.free_rank();
    let rows: Vec<Vec<BigInt>> = f
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut v = vec![BigInt::zero(); k];
            v[i] = d.clone();
            v
        })
        .collect();
    let relations = IntMatrix::from_rows(rows, k)?;
    let action = vec![IntMatrix::identity(k); group.order()];
    GModule::new(group, k, relations, action)
}

fn left_regular(group: &FiniteGroup, copies: usize) -> Vec<IntMatrix> {
    let n = group.order();
    group
        .elements()
        .map(|g| {
            let mut m = IntMatrix::zeros(n * copies, n * copies);
            for c in 0..copies {
                for h in 0..n {
                    m[(c * n + group.mul(g, h), c * n + h)] = BigInt::one();
                }
            }
            m
        })
        .collect()
}

pub fn group_ring(group: GroupRef) -> Result<GModule> {
    let n = group.order();
    let action = left_regular(&group, 1);
    GModule::new(group, n, IntMatrix::zeros(0, n), action)
}

/// `(Z/n)[G]^{⊕copies}`; basis vector `(c, g)` has index `c·|G| + g`.
pub fn group_ring_mod_power(group: GroupRef, modulus: u64, copies: usize) -> Result<GModule> {
    if modulus == 0 {
        return Err(Error::Precondition("group ring modulus must be at least 1".into()));
    }
    let k = group.order() * copies;
    let action = left_regular(&group, copies);
    GModule::new(group, k, IntMatrix::scalar(k, &BigInt::from(modulus)), action)
}

pub fn group_ring_mod(group: GroupRef, modulus: u64) -> Result<GModule> {
    group_ring_mod_power(group, modulus, 1)
}

/// `I_G` on the basis `e_τ = τ − 1` (`τ ≠ 1`), coordinate `τ − 1`.
pub fn augmentation_ideal(group: GroupRef) -> Result<GModule> {
    let n = group.order();
    let k = n - 1;
    let action = group
        .elements()
        .map(|s| {
            let mut m = IntMatrix::zeros(k, k);
            for t in 1..n {
                let st = group.mul(s, t);
                if st != 0 {
                    m[(st - 1, t - 1)] += 1;
                }
                if s != 0 {
                    m[(s - 1, t - 1)] -= 1;
                }
            }
            m
        })
        .collect();
    GModule::new(group, k, IntMatrix::zeros(0, k), action)
}

pub fn direct_sum(m: &GModule, n: &GModule) -> Result<GModule> {
    m.same_group(n)?;
    let relations = m.relations().block_diag(n.relations());
    let action = m.actions().iter().zip(n.actions()).map(|(a, b)| a.block_diag(b)).collect();
    GModule::new(m.group().clone(), m.ambient_rank() + n.ambient_rank(), relations, action)
}

/// `M^G` as an abelian group, with its inclusion (the source carries the
/// trivial action).
pub fn fixed_points(m: &GModule) -> Result<(AbelianInvariants, ModuleMap)> {
    let g = m.group();
    let k = m.ambient_rank();
    let frame = m.frame();
    let mut map = SparseMap::new(k, k * (g.order() - 1));
    let mut moduli = Vec::with_capacity(k * (g.order() - 1));
    for _ in 1..g.order() {
        moduli.extend(frame.moduli.iter().cloned());
    }
    let diffs: Vec<IntMatrix> = g
        .nonidentity()
        .map(|h| frame.to_smith.mul(&m.action(h).sub(&IntMatrix::identity(k)).expect("square")).expect("dims"))
        .collect();
    for i in 0..k {
        let mut terms = Vec::new();
        for (t, d) in diffs.iter().enumerate() {
            for r in 0..k {
                let x = &d[(r, i)];
                if !x.is_zero() {
                    terms.push((t * k + r, x.clone()));
                }
            }
        }
        map.set_image(i, terms);
    }
    let lat = map.kernel(&moduli);
    let (sub, incl) = m.sublattice_module(&lat)?;
    Ok((sub.invariants(), incl))
}

fn p_adic_split(n: &BigInt, p: &BigInt) -> BigInt {
    let mut q = BigInt::one();
    let mut m = n.clone();
    while m.is_multiple_of(p) {
        m /= p;
        q *= p;
    }
    q
}

/// The `p`-part of a finite module, presented as `M / p^a M` where `p^a`
/// is the `p`-part of the exponent. The projection from `M` is the identity
/// on ambient coordinates (see [`p_primary_projection`]).
pub fn p_primary(m: &GModule, p: u64) -> Result<GModule> {
    let exp = m.invariants().exponent().ok_or(Error::InfiniteModule)?;
    let p = BigInt::from(p);
    let pa = p_adic_split(&exp, &p);
    if pa == exp {
        return Ok(m.clone());
    }
    let k = m.ambient_rank();
    let stacked = m.relations().vstack(&IntMatrix::scalar(k, &pa))?;
    let basis = Lattice::from_generators(k, &stacked.to_rows()).basis();
    GModule::new(m.group().clone(), k, IntMatrix::from_rows(basis, k)?, m.actions().to_vec())
}

pub fn p_primary_projection(m: &GModule, p: u64) -> Result<ModuleMap> {
    let part = p_primary(m, p)?;
    Ok(ModuleMap::new_unchecked(m.clone(), part, IntMatrix::identity(m.ambient_rank())))
}

/// Kernel of `f` as a standalone module with its inclusion into the source.
pub fn map_kernel(f: &ModuleMap) -> Result<(GModule, ModuleMap)> {
    let lat = f.preimage_of_relations();
    f.source.sublattice_module(&lat)
}

/// Cokernel of `f`: the target with the image appended to its relations;
/// the projection is the identity on ambient coordinates.
pub fn map_cokernel(f: &ModuleMap) -> Result<(GModule, ModuleMap)> {
    let t = &f.target;
    let relations = t.relations().vstack(&f.matrix.transpose())?;
    let coker = GModule::new(t.group().clone(), t.ambient_rank(), relations, t.actions().to_vec())?;
    let proj = ModuleMap::new_unchecked(t.clone(), coker.clone(), IntMatrix::identity(t.ambient_rank()));
    Ok((coker, proj))
}

/// `M` viewed as a module over the subgroup on `elements` (relabeled as in
/// [`FiniteGroup::restrict`]).
pub fn restrict_module(m: &GModule, elements: &[usize]) -> Result<GModule> {
    let (h, elems) = m.group().restrict(elements)?;
    let action = elems.iter().map(|&e| m.action(e).clone()).collect();
    GModule::new(Arc::new(h), m.ambient_rank(), m.relations().clone(), action)
}

pub fn order(m: &GModule) -> ModuleOrder {
    m.order()
}

pub fn elements(m: &GModule) -> Result<Vec<ModuleElement>> {
    m.elements()
}
