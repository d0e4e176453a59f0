//! Acceptance criteria 1-11. Runs without the libtest harness so the
//! PASS/FAIL line for each criterion is always printed; exits nonzero if any
//! criterion failed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use tatecoh::cohomology::{cyclic_tate_oracle, h2, h2_with, tate, H2Options, TateOptions};
use tatecoh::exactla::snf;
use tatecoh::extensions::{p_quotient, roundtrip_check, roundtrip_check_module, splitting_module, star, GroupExtensionData};
use tatecoh::gmodules::{augmentation_ideal, direct_sum, group_ring, group_ring_mod, trivial_module, GModule};
use tatecoh::groups::GroupRef;
use tatecoh::theorems::{
    census_kernels, census_run, find_h_minus2_vanisher, herbrand_audit, killed_by_classes, lemma1_witness,
    satz94_audit, suzuki_audit, thm3_h0_witness, thm3_h2_witness, CensusOptions, CensusReport, VanisherSearch,
};
use tatecoh::{AbelianInvariants, IntMatrix};

/// Every Tate group any criterion computes, with the group order, for criterion 9.
static SEEN: Mutex<Vec<(usize, AbelianInvariants)>> = Mutex::new(Vec::new());

fn seen(g: &GroupRef, x: &AbelianInvariants) {
    SEEN.lock().unwrap().push((g.order(), x.clone()));
}

fn tate_logged(m: &GModule, i: i64) -> AbelianInvariants {
    let t = tate(m, i).unwrap();
    seen(m.group(), &t);
    t
}

fn z(g: &GroupRef) -> GModule {
    trivial_module(g.clone(), &AbelianInvariants::new(vec![], 1).unwrap()).unwrap()
}

fn census(name: &str, bound: u64, degrees: (i64, i64), jobs: usize) -> CensusReport {
    let g = group(name);
    let opts = CensusOptions { degrees, jobs, ..CensusOptions::default() };
    let r = census_run(&g, name, bound, &opts).unwrap();
    for inst in &r.instances {
        for v in &inst.profile {
            seen(&g, &v.invariants);
        }
    }
    r
}

type Outcome = Result<String, String>;

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("took {t:.1?}, limit {limit:?}"))
    }
}

fn c1_smith() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..1000 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect()).collect();
        let m = IntMatrix::from_i64_rows(&rows);
        let s = snf(&m);
        if s.u.mul(&m).unwrap().mul(&s.v).unwrap() != s.s {
            return Err(format!("case {case}: U·M·V != S"));
        }
        if !s.u.determinant().unwrap().abs().is_one() || !s.v.determinant().unwrap().abs().is_one() {
            return Err(format!("case {case}: transform not unimodular"));
        }
        for i in 0..r {
            for j in 0..c {
                if i != j && !s.s[(i, j)].is_zero() {
                    return Err(format!("case {case}: off-diagonal entry"));
                }
            }
        }
        let d = s.diagonal();
        for w in d.windows(2) {
            let ok = !w[0].is_negative() && if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            if !ok {
                return Err(format!("case {case}: divisibility chain broken {d:?}"));
            }
        }
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("1000 matrices in {:.2?}", start.elapsed()))
}

/// Builtin modules, census kernels with their splitting modules, and random presentations.
fn oracle_modules(name: &str, rng: &mut ChaCha8Rng) -> Vec<GModule> {
    let g = group(name);
    let n = g.order() as u64;
    let mut out = vec![
        z(&g),
        augmentation_ideal(g.clone()).unwrap(),
        group_ring(g.clone()).unwrap(),
        group_ring_mod(g.clone(), n).unwrap(),
        direct_sum(&z(&g), &augmentation_ideal(g.clone()).unwrap()).unwrap(),
    ];
    for k in [2u64, 3, 4, 6] {
        out.push(trivial_module(g.clone(), &inv(&[k])).unwrap());
    }
    for spec in census_kernels(&g, 4).unwrap() {
        let a = spec.build(&g).unwrap();
        for f in h2(&a, true).unwrap().representatives {
            out.push(splitting_module(&GroupExtensionData::new(a.clone(), f).unwrap()).unwrap());
        }
        out.push(a);
    }
    for i in 0..40 {
        let copies = 1 + (i % 2);
        let modulus = [0u64, 0, 2, 3, 4, 6][i % 6];
        out.push(random_module(&g, rng, copies, modulus, 1 + i % 3));
    }
    out
}

fn c2_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut summary = Vec::new();
    for name in ["C2", "C3", "C4"] {
        let modules = oracle_modules(name, &mut rng);
        if modules.len() < 50 {
            return Err(format!("{name}: only {} modules", modules.len()));
        }
        for (k, m) in modules.iter().enumerate() {
            for i in -3..=3 {
                let bar = tate_logged(m, i);
                let oracle = cyclic_tate_oracle(m, i).unwrap();
                if bar != oracle {
                    return Err(format!("{name} module {k} degree {i}: bar {bar}, oracle {oracle}"));
                }
            }
        }
        summary.push(format!("{name}: {} modules", modules.len()));
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("{}, 0 mismatches in {:.1?}", summary.join(", "), start.elapsed()))
}

fn c3_vanishing() -> Outcome {
    for name in ["C2", "C3", "C4", "C8", "C2xC2", "C2xC4", "D8", "Q8"] {
        let ig = augmentation_ideal(group(name)).unwrap();
        for i in [0, 2] {
            let t = tate_logged(&ig, i);
            if !t.is_trivial() {
                return Err(format!("{name}: degree {i} of I_G is {t}"));
            }
        }
    }
    for name in ["C2", "C3", "C4", "C8", "C2xC2"] {
        let g = group(name);
        let ig = augmentation_ideal(g.clone()).unwrap();
        let schur = abelian_schur_multiplier(&g);
        let t = tate_logged(&ig, -2);
        if t != schur {
            return Err(format!("{name}: H^-2(I_G) = {t}, Schur multiplier {schur}"));
        }
    }
    Ok("H^0 and H^2 of I_G vanish on 8 groups; H^-2(I_G) = [2] on C2xC2, [] on cyclic".into())
}

fn c4_h0_h2_realization() -> Outcome {
    let start = Instant::now();
    let opts = TateOptions::default();
    let mut count = 0;
    for name in ["C2", "C4", "C2xC2"] {
        let g = group(name);
        for x in killed_by_classes(g.order() as u64, 2) {
            let (_, h0) = thm3_h0_witness(&g, &x, &opts).unwrap();
            let (_, h2) = thm3_h2_witness(&g, &x, &opts).unwrap();
            seen(&g, &h0);
            seen(&g, &h2);
            if h0 != x || h2 != x {
                return Err(format!("{name} X = {x}: H^0 {h0}, H^2 {h2}"));
            }
            count += 1;
        }
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("{count} targets reproduced in {:.1?}", start.elapsed()))
}

fn c5_minus2_realization() -> Outcome {
    let opts = TateOptions::default();
    let mut count = 0;
    for name in ["C2", "C4"] {
        let g = group(name);
        let m0 = augmentation_ideal(g.clone()).unwrap();
        for x in killed_by_classes(g.order() as u64, 2) {
            let (_, h) = lemma1_witness(&m0, &x, &opts).unwrap();
            seen(&g, &h);
            if h != x {
                return Err(format!("{name} X = {x}: H^-2 {h}"));
            }
            count += 1;
        }
    }
    let start = Instant::now();
    let bound = 8;
    let outcome = match find_h_minus2_vanisher(&group("C2xC2"), bound, &CensusOptions::default()).unwrap() {
        VanisherSearch::Found { kernel, class_index, .. } => format!("found ({}#{class_index})", kernel.label()),
        VanisherSearch::NotFoundWithinBound { kernels_tried, extensions_tried } => {
            format!("not found within kernel order {bound} ({kernels_tried} kernels, {extensions_tried} extensions)")
        }
    };
    Ok(format!("{count} targets reproduced; C2xC2 vanisher search: {outcome} in {:.1?}", start.elapsed()))
}

const AUDIT_GROUPS: [&str; 4] = ["C2", "C3", "C4", "C2xC2"];

fn c6_divisibility() -> Outcome {
    let mut total = 0;
    for name in AUDIT_GROUPS {
        let r = census(name, 4, (-1, 0), 0);
        let v = suzuki_audit(&r).unwrap();
        if !v.passed() {
            return Err(format!("{name}: {:?}", v.violations));
        }
        if !r.complete {
            return Err(format!("{name}: census incomplete"));
        }
        total += v.checked;
    }
    Ok(format!("{total} instances checked, 0 violations"))
}

fn c7_nonvanishing() -> Outcome {
    let mut total = 0;
    for name in ["C2", "C3"] {
        let r = census(name, 4, (-1, 0), 0);
        let v = satz94_audit(&r).unwrap();
        if !v.passed() {
            return Err(format!("{name}: {:?}", v.violations));
        }
        if r.instances.iter().any(|i| i.at(-1).is_some_and(AbelianInvariants::is_trivial)) {
            return Err(format!("{name}: trivial H^-1 observed"));
        }
        total += r.instances.len();
    }
    Ok(format!("{total} instances, none with trivial H^-1"))
}

fn c8_roundtrip() -> Outcome {
    let mut count = 0;
    for name in ["C2", "C3", "C4", "C2xC2", "D8", "Q8"] {
        let g = group(name);
        for spec in census_kernels(&g, 4).unwrap() {
            let a = spec.build(&g).unwrap();
            let opts = H2Options::default();
            for (i, f) in h2_with(&a, true, &opts).unwrap().representatives.into_iter().enumerate() {
                let e = GroupExtensionData::new(a.clone(), f).unwrap();
                let lit = roundtrip_check(&e).unwrap();
                let phi = roundtrip_check_module(&star(&e).unwrap()).unwrap();
                if !lit.literal || !lit.passed() || !phi.passed() {
                    return Err(format!("{name} {}#{i}: {lit:?} {phi:?}", spec.label()));
                }
                count += 1;
            }
        }
    }
    if count < 100 {
        return Err(format!("only {count} extensions enumerated"));
    }
    Ok(format!("{count} extensions, 100% pass"))
}

fn c9_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..50 {
        let name = ["C2", "C3", "C4", "C2xC2"][k % 4];
        let g = group(name);
        let pick = |rng: &mut ChaCha8Rng| {
            let (m, extra) = ([0, 2, 3, 4][rng.gen_range(0..4)], rng.gen_range(0..3));
            random_module(&g, rng, 1, m, extra)
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let s = direct_sum(&a, &b).unwrap();
        for i in -2..=2 {
            let lhs = tate_logged(&s, i);
            let rhs = tate_logged(&a, i).direct_sum(&tate_logged(&b, i));
            if lhs != rhs {
                return Err(format!("pair {k} over {name}, degree {i}: {lhs} vs {rhs}"));
            }
        }
    }
    let mut herbrand = 0;
    for name in ["C2", "C3", "C4"] {
        let r = census(name, 4, (-1, 0), 0);
        let v = herbrand_audit(&r);
        if !v.passed() {
            return Err(format!("herbrand on {name}: {:?}", v.violations));
        }
        herbrand += v.checked;
    }
    let all = SEEN.lock().unwrap();
    for (n, x) in all.iter() {
        if !x.is_killed_by(&BigInt::from(*n)) {
            return Err(format!("{x} not killed by {n}"));
        }
    }
    Ok(format!("{} Tate groups killed by #G; additivity on 50 pairs; herbrand on {herbrand} instances", all.len()))
}

fn c10_p_quotient() -> Outcome {
    let g = group("C2");
    let mut count = 0;
    for kernel in [inv(&[6]), inv(&[12]), inv(&[2, 6])] {
        let a = trivial_module(g.clone(), &kernel).unwrap();
        for f in h2(&a, true).unwrap().representatives {
            let e = GroupExtensionData::new(a.clone(), f).unwrap();
            let ep = p_quotient(&e, 2).unwrap();
            let m = splitting_module(&e).unwrap();
            let mp = splitting_module(&ep).unwrap();
            for i in -3..=3 {
                let (x, y) = (tate_logged(&m, i), tate_logged(&mp, i));
                if x != y {
                    return Err(format!("A = {kernel} degree {i}: {x} vs {y}"));
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} classes over kernels of order 6 and 12"))
}

fn c11_determinism() -> Outcome {
    for name in AUDIT_GROUPS {
        let one = census(name, 4, (-2, 2), 1).to_json();
        let many = census(name, 4, (-2, 2), 4).to_json();
        if one != many {
            return Err(format!("{name}: reports differ between 1 and 4 threads"));
        }
    }
    Ok("census JSON identical for 1 and 4 threads on 4 groups".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("exact linear algebra", c1_smith),
        ("oracle equivalence", c2_oracle),
        ("augmentation ideal vanishing", c3_vanishing),
        ("H^0 and H^2 realization", c4_h0_h2_realization),
        ("H^-2 realization", c5_minus2_realization),
        ("divisibility audit", c6_divisibility),
        ("nonvanishing H^-1 audit", c7_nonvanishing),
        ("round trips", c8_roundtrip),
        ("exponent and additivity laws", c9_laws),
        ("p-quotient invariance", c10_p_quotient),
        ("determinism", c11_determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let t = start.elapsed();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{t:.1?}]", k + 1),
            Err(msg) => {
                println!("criterion {:>2} FAIL  {name}: {msg} [{t:.1?}]", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
