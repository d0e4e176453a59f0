//! JSON and command-line text formats.
//!
//! Groups are `{"order": n, "mul": [[..]], "labels": [..]}` or a builtin
//! reference (`"builtin:C4"` or just `"C4"`). Modules are
//! `{"group", "ambient_rank", "relations", "action"}` with matrix entries as
//! decimal strings (JSON numbers are accepted on input). Cocycles are
//! `{"group", "coefficients", "table": {"σ,τ": [..]}}` over non-identity
//! pairs, and extension bundles are `{"kernel", "cocycle"}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::Cocycle2;
use crate::error::{Error, Result};
use crate::exactla::{parse_decimal, AbelianInvariants, DecimalInt, IntMatrix, RawRows};
use crate::extensions::{GroupExtensionData, ModuleExtensionData};
use crate::gmodules::{augmentation_ideal, GModule, ModuleMap};
use crate::groups::{builtin, FiniteGroup, GroupRef};

/// Largest ambient rank accepted from a file.
pub const MAX_AMBIENT_RANK: usize = 1024;

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum GroupSpec {
    Ref(String),
    Table {
        order: usize,
        mul: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

/// A builtin reference: `builtin:<name>` or a bare builtin name.
pub fn parse_builtin_ref(s: &str) -> Result<FiniteGroup> {
    builtin(s.strip_prefix("builtin:").unwrap_or(s))
}

fn group_from_spec(spec: GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Ref(s) => parse_builtin_ref(&s),
        GroupSpec::Table { order, mul, labels } => {
            if mul.len() != order {
                return Err(Error::BadTable(format!("order is {order} but the table has {} rows", mul.len())));
            }
            FiniteGroup::from_table(mul, labels)
        }
    }
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    group_from_spec(serde_json::from_str(text).map_err(parse_err)?)
}

pub fn group_to_value(g: &FiniteGroup) -> Value {
    let mut v = json!({ "order": g.order(), "mul": g.table() });
    if let Some(l) = g.labels() {
        v["labels"] = json!(l);
    }
    v
}

#[derive(Deserialize)]
struct ModuleDto {
    group: GroupSpec,
    ambient_rank: DecimalInt,
    relations: RawRows,
    action: Vec<RawRows>,
}

fn small_count(x: &DecimalInt, what: &str, cap: usize) -> Result<usize> {
    use num_traits::ToPrimitive;
    x.0.to_usize()
        .filter(|&k| k <= cap)
        .ok_or_else(|| Error::Parse(format!("{what} must be an integer in [0, {cap}], got {}", x.0)))
}

fn module_from_dto(dto: ModuleDto, expect: Option<&GroupRef>) -> Result<GModule> {
    let g = group_from_spec(dto.group)?;
    let g: GroupRef = match expect {
        Some(e) if **e == g => e.clone(),
        Some(_) => return Err(Error::GroupMismatch("module is over a different group".into())),
        None => Arc::new(g),
    };
    let k = small_count(&dto.ambient_rank, "ambient_rank", MAX_AMBIENT_RANK)?;
    let relations = dto.relations.into_matrix(k).map_err(|e| Error::ModuleInvariant(format!("relations: {e}")))?;
    if dto.action.len() != g.order() {
        return Err(Error::ModuleInvariant(format!(
            "{} action matrices given for a group of order {}",
            dto.action.len(),
            g.order()
        )));
    }
    let action = dto
        .action
        .into_iter()
        .enumerate()
        .map(|(i, rows)| {
            if rows.0.len() != k {
                return Err(Error::ModuleInvariant(format!("action matrix of element {i} is not {k}x{k}")));
            }
            rows.into_matrix(k)
                .map_err(|e| Error::ModuleInvariant(format!("action matrix of element {i}: {e}")))
        })
        .collect::<Result<Vec<IntMatrix>>>()?;
    GModule::new(g, k, relations, action)
}

pub fn parse_module(text: &str) -> Result<GModule> {
    module_from_dto(serde_json::from_str(text).map_err(parse_err)?, None)
}

/// Parses a module and requires it to be over `g` (same multiplication table).
pub fn parse_module_over(text: &str, g: &GroupRef) -> Result<GModule> {
    module_from_dto(serde_json::from_str(text).map_err(parse_err)?, Some(g))
}

pub fn module_to_value(m: &GModule) -> Value {
    json!({
        "group": group_to_value(m.group()),
        "ambient_rank": m.ambient_rank(),
        "relations": m.relations(),
        "action": m.actions(),
    })
}

#[derive(Deserialize)]
struct CocycleDto {
    group: GroupSpec,
    coefficients: ModuleDto,
    table: BTreeMap<String, Vec<DecimalInt>>,
}

fn parse_pair(key: &str, n: usize) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("cocycle key {key:?} is not of the form \"i,j\""));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let idx = |s: &str| -> Result<usize> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) || s.len() > 6 {
            return Err(bad());
        }
        let v: usize = s.parse().map_err(|_| bad())?;
        if v >= n {
            return Err(Error::CocycleInvariant(format!("element {v} out of range in key {key:?}")));
        }
        Ok(v)
    };
    Ok((idx(a)?, idx(b)?))
}

fn cocycle_from_dto(dto: CocycleDto, expect: Option<&GModule>) -> Result<Cocycle2> {
    let g = group_from_spec(dto.group)?;
    let module = module_from_dto(dto.coefficients, None)?;
    if **module.group() != g {
        return Err(Error::GroupMismatch("cocycle group differs from its coefficient group".into()));
    }
    let module = match expect {
        Some(m) if *m == module => m.clone(),
        Some(_) => return Err(Error::GroupMismatch("cocycle coefficients differ from the kernel".into())),
        None => module,
    };
    let n = g.order();
    let mut pairs = Vec::with_capacity(dto.table.len());
    for (key, vals) in dto.table {
        let pair = parse_pair(&key, n)?;
        pairs.push((pair, vals.into_iter().map(|d| d.0).collect()));
    }
    Cocycle2::from_pairs(&module, &pairs)
}

pub fn parse_cocycle(text: &str) -> Result<Cocycle2> {
    cocycle_from_dto(serde_json::from_str(text).map_err(parse_err)?, None)
}

pub fn cocycle_to_value(f: &Cocycle2) -> Value {
    let m = f.module();
    let n = m.group().order();
    let mut table = serde_json::Map::new();
    for s in 1..n {
        for t in 1..n {
            let v: Vec<String> = f.value(s, t).iter().map(BigInt::to_string).collect();
            table.insert(format!("{s},{t}"), json!(v));
        }
    }
    json!({
        "group": group_to_value(m.group()),
        "coefficients": module_to_value(m),
        "table": Value::Object(table),
    })
}

#[derive(Deserialize)]
struct BundleDto {
    kernel: ModuleDto,
    cocycle: CocycleDto,
}

pub fn parse_bundle(text: &str) -> Result<GroupExtensionData> {
    let dto: BundleDto = serde_json::from_str(text).map_err(parse_err)?;
    let kernel = module_from_dto(dto.kernel, None)?;
    let f = cocycle_from_dto(dto.cocycle, Some(&kernel))?;
    GroupExtensionData::new(kernel, f)
}

pub fn bundle_to_value(e: &GroupExtensionData) -> Value {
    json!({
        "kernel": module_to_value(e.kernel()),
        "cocycle": cocycle_to_value(e.cocycle()),
    })
}

#[derive(Deserialize)]
struct ModuleExtensionDto {
    kernel: ModuleDto,
    middle: ModuleDto,
    inject: RawRows,
    project: RawRows,
}

/// `{"kernel", "middle", "inject", "project"}`; the maps are matrices on
/// ambient coordinates and `project` lands in `I_G` on its standard basis.
pub fn parse_module_extension(text: &str) -> Result<ModuleExtensionData> {
    let dto: ModuleExtensionDto = serde_json::from_str(text).map_err(parse_err)?;
    let kernel = module_from_dto(dto.kernel, None)?;
    let middle = module_from_dto(dto.middle, Some(kernel.group()))?;
    let ig = augmentation_ideal(kernel.group().clone())?;
    let inject = dto
        .inject
        .into_matrix(kernel.ambient_rank())
        .map_err(|e| Error::MapInvariant(format!("inject: {e}")))?;
    let project = dto
        .project
        .into_matrix(middle.ambient_rank())
        .map_err(|e| Error::MapInvariant(format!("project: {e}")))?;
    ModuleExtensionData::new(
        ModuleMap::new(kernel, middle.clone(), inject)?,
        ModuleMap::new(middle, ig, project)?,
    )
}

pub fn module_extension_to_value(e: &ModuleExtensionData) -> Value {
    json!({
        "kernel": module_to_value(e.kernel()),
        "middle": module_to_value(e.middle()),
        "inject": e.inject().matrix,
        "project": e.project().matrix,
    })
}

/// `"2,4"`-style list of cyclic orders, normalized to invariant factors.
/// An empty string or `"1"` is the trivial group.
pub fn parse_kernel_spec(s: &str) -> Result<AbelianInvariants> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(AbelianInvariants::trivial());
    }
    let mut orders = Vec::new();
    for part in s.split(',') {
        let d = parse_decimal(part.trim()).map_err(Error::Parse)?;
        if d <= BigInt::zero() {
            return Err(Error::Parse(format!("kernel factor {d} must be positive")));
        }
        if d.bits() > 62 {
            return Err(Error::Parse(format!("kernel factor {d} is too large")));
        }
        orders.push(d);
    }
    Ok(AbelianInvariants::from_cyclic_orders(&orders))
}

/// `"lo..hi"` (inclusive) or a single degree.
pub fn parse_degree_range(s: &str) -> Result<(i64, i64)> {
    let num = |t: &str| -> Result<i64> {
        let t = t.trim();
        let v = parse_decimal(t).map_err(Error::Parse)?;
        i64::try_from(v).map_err(|_| Error::Parse(format!("degree {t} out of range")))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let d = num(s)?;
            (d, d)
        }
    };
    if lo > hi {
        return Err(Error::Parse(format!("degree range {lo}..{hi} is empty")));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::h2;
    use crate::extensions::star;
    use crate::gmodules::trivial_module;

    #[test]
    fn group_round_trip() {
        let g = builtin("D8").unwrap();
        let text = group_to_value(&g).to_string();
        assert_eq!(parse_group(&text).unwrap(), g);
        assert_eq!(parse_group("\"builtin:Q8\"").unwrap(), builtin("Q8").unwrap());
        assert!(matches!(parse_group(r#"{"order":2,"mul":[[0,1],[1,1]]}"#), Err(Error::NoInverse(_) | Error::BadTable(_))));
        assert!(matches!(parse_group("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn module_round_trip() {
        let ig = augmentation_ideal(Arc::new(builtin("C4").unwrap())).unwrap();
        let text = module_to_value(&ig).to_string();
        assert!(text.contains("\"-1\""));
        assert_eq!(parse_module(&text).unwrap(), ig);
        let numeric = r#"{"group":"builtin:C2","ambient_rank":1,"relations":[[2]],"action":[[[1]],[[1]]]}"#;
        assert_eq!(parse_module(numeric).unwrap().invariants(), AbelianInvariants::from_factors(&[2]).unwrap());
        let bad = r#"{"group":"C2","ambient_rank":"1","relations":[],"action":[[["1"]],[["2"]]]}"#;
        let err = parse_module(bad).unwrap_err();
        assert!(err.to_string().contains("not multiplicative"), "{err}");
    }

    #[test]
    fn cocycle_and_bundle_round_trip() {
        let a = trivial_module(Arc::new(builtin("C4").unwrap()), &AbelianInvariants::from_factors(&[2]).unwrap())
            .unwrap();
        for f in h2(&a, true).unwrap().representatives {
            let text = cocycle_to_value(&f).to_string();
            assert_eq!(parse_cocycle(&text).unwrap(), f);
            let e = GroupExtensionData::new(a.clone(), f).unwrap();
            assert_eq!(parse_bundle(&bundle_to_value(&e).to_string()).unwrap(), e);
            let s = star(&e).unwrap();
            let back = parse_module_extension(&module_extension_to_value(&s).to_string()).unwrap();
            assert_eq!(back.middle(), s.middle());
            assert_eq!(back.project().matrix, s.project().matrix);
        }
        let bad = r#"{"group":"C2","coefficients":{"group":"C2","ambient_rank":1,"relations":[["2"]],"action":[[["1"]],[["1"]]]},"table":{"0,1":["1"]}}"#;
        assert!(matches!(parse_cocycle(bad), Err(Error::CocycleInvariant(_))));
    }

    #[test]
    fn text_specs() {
        assert_eq!(parse_kernel_spec("2,4").unwrap(), AbelianInvariants::from_factors(&[2, 4]).unwrap());
        assert_eq!(parse_kernel_spec("6,4").unwrap(), AbelianInvariants::from_factors(&[2, 12]).unwrap());
        assert!(parse_kernel_spec("1").unwrap().is_trivial());
        assert!(parse_kernel_spec("0").is_err());
        assert!(parse_kernel_spec("x").is_err());
        assert_eq!(parse_degree_range("-3..3").unwrap(), (-3, 3));
        assert_eq!(parse_degree_range("2").unwrap(), (2, 2));
        assert!(parse_degree_range("3..-3").is_err());
        assert!(parse_degree_range("1..").is_err());
    }
}
