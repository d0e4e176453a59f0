use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tatecoh::cohomology::{cyclic_tate_oracle, h2_with, tate_with, H2Options, TateOptions};
use tatecoh::extensions::{
    dagger, middle_group, roundtrip_check, roundtrip_check_module, splitting_module, star, GroupExtensionData,
};
use tatecoh::format::{
    bundle_to_value, cocycle_to_value, group_to_value, module_extension_to_value, module_to_value, parse_bundle,
    parse_degree_range, parse_group, parse_kernel_spec, parse_module_extension, parse_module_over,
};
use tatecoh::gmodules::{augmentation_ideal, group_ring, group_ring_mod, trivial_module, GModule};
use tatecoh::groups::{builtin, GroupRef, BUILTIN_NAMES};
use tatecoh::theorems::{
    census_kernels, census_run, find_h_minus2_vanisher, killed_by_classes, lemma1_witness, satz94_audit,
    suzuki_audit, thm3_h0_witness, thm3_h2_witness, AuditVerdict, CensusOptions, KernelAction, KernelSpec,
    VanisherSearch,
};
use tatecoh::{AbelianInvariants, Error};

#[derive(Parser)]
#[command(name = "tatecoh", version, about = "Tate cohomology, H^2 and splitting modules for finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Caps {
    /// Largest |degree| accepted.
    #[arg(long, default_value_t = 6)]
    degree_window: i64,
    /// Largest cochain space, in integer coordinates.
    #[arg(long, default_value_t = 20_000)]
    cochain_cap: usize,
}

impl Caps {
    fn tate(&self) -> TateOptions {
        TateOptions {
            degree_window: self.degree_window,
            cochain_cap: self.cochain_cap,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Action {
    Trivial,
    Sign,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Suite {
    Thm3,
    Lemma1,
    Suzuki,
    Satz94,
    Roundtrip,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Tate cohomology of a module, one line per degree.
    Tate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value = "0..0", allow_hyphen_values = true)]
        degrees: String,
        #[command(flatten)]
        caps: Caps,
        #[command(flatten)]
        output: Output,
    },
    /// H^2 of a finite module, optionally writing representative cocycles.
    H2 {
        #[arg(long)]
        group: String,
        /// Cyclic orders of the kernel, e.g. "2,4".
        #[arg(long)]
        kernel: String,
        #[arg(long, value_enum, default_value = "trivial")]
        action: Action,
        /// Enumerate every class (up to --max-classes).
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 512)]
        max_classes: usize,
        /// Directory for representative cocycle files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Splitting module of an extension bundle.
    Split {
        #[arg(long)]
        bundle: PathBuf,
        /// Emit the whole sequence 0 → A → M → I_G → 0 instead of M alone.
        #[arg(long)]
        sequence: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Middle group of an extension bundle.
    Middle {
        #[arg(long)]
        bundle: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Group extension attached to a module extension (as written by `split --sequence`).
    Dagger {
        #[arg(long)]
        extension: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Checks both round trips on an extension bundle.
    Roundtrip {
        #[arg(long)]
        bundle: PathBuf,
        /// Where to write the witness (φ matrix and equivalence cochain).
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Tabulates observed Tate groups of splitting modules.
    Census {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 4)]
        max_kernel_order: u64,
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
        degrees: String,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        caps: Caps,
        #[command(flatten)]
        output: Output,
    },
    /// Runs a verification suite; exit code 1 on any violation.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 4)]
        max_kernel_order: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        caps: Caps,
        /// Optional JSON report.
        #[command(flatten)]
        output: Output,
    },
    /// Lists or describes builtin groups.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    List,
    Describe { name: String },
}

enum Failure {
    Input(String),
    Cap(String),
    Audit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else if matches!(e, Error::Internal(_)) {
            Failure::Audit(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Res<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// `builtin:<name>` or a path to a group JSON file.
fn load_group(spec: &str) -> Res<(GroupRef, String)> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Ok((Arc::new(builtin(name)?), name.to_string()));
    }
    let g = parse_group(&read(Path::new(spec))?)?;
    Ok((Arc::new(g), spec.to_string()))
}

fn cmd_tate(group: &str, module: &Path, degrees: &str, caps: &Caps, out: &Option<PathBuf>) -> Res<()> {
    let (g, _) = load_group(group)?;
    let m = parse_module_over(&read(module)?, &g)?;
    let (lo, hi) = parse_degree_range(degrees)?;
    let opts = caps.tate();
    let mut text = String::new();
    for i in lo..=hi {
        text.push_str(&format!("{i}: {}\n", tate_with(&m, i, &opts)?));
    }
    write_out(out, &text)
}

fn kernel_module(g: &GroupRef, inv: &AbelianInvariants, action: Action) -> Res<GModule> {
    match action {
        Action::Trivial => Ok(trivial_module(g.clone(), inv)?),
        Action::Sign => {
            let [m] = inv.factors() else {
                return Err(Failure::Input("sign action needs a cyclic kernel".into()));
            };
            let n = g.order();
            let subs = g.subgroups()?;
            let h = subs
                .iter()
                .find(|h| 2 * h.len() == n)
                .ok_or_else(|| Failure::Input("sign action needs a subgroup of index 2".into()))?;
            let modulus = u64::try_from(m).map_err(|_| Failure::Input("kernel factor too large".into()))?;
            let spec = KernelSpec {
                invariants: inv.clone(),
                action: KernelAction::Sign {
                    modulus,
                    subgroup: h.clone(),
                },
            };
            Ok(spec.build(g)?)
        }
    }
}

fn cmd_h2(group: &str, kernel: &str, action: Action, enumerate: bool, max_classes: usize, out_dir: &Option<PathBuf>) -> Res<()> {
    let (g, _) = load_group(group)?;
    let inv = parse_kernel_spec(kernel)?;
    let a = kernel_module(&g, &inv, action)?;
    let opts = H2Options {
        max_classes,
        ..H2Options::default()
    };
    let desc = h2_with(&a, enumerate || out_dir.is_some(), &opts)?;
    println!("class group: {}", desc.class_group);
    println!("representatives: {}{}", desc.representatives.len(), if desc.complete { "" } else { " (generators only)" });
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for (i, f) in desc.representatives.iter().enumerate() {
            let p = dir.join(format!("class_{i}.json"));
            fs::write(&p, pretty(&cocycle_to_value(f))).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        }
    }
    Ok(())
}

fn cmd_split(bundle: &Path, sequence: bool, out: &Option<PathBuf>) -> Res<()> {
    let e = parse_bundle(&read(bundle)?)?;
    let v = if sequence {
        module_extension_to_value(&star(&e)?)
    } else {
        module_to_value(&splitting_module(&e)?)
    };
    write_out(out, &pretty(&v))
}

fn cmd_middle(bundle: &Path, out: &Option<PathBuf>) -> Res<()> {
    let e = parse_bundle(&read(bundle)?)?;
    let mg = middle_group(&e)?;
    let v = json!({
        "group": group_to_value(&mg.group),
        "inject": mg.inject,
        "project": mg.project,
    });
    write_out(out, &pretty(&v))
}

fn cmd_dagger(extension: &Path, out: &Option<PathBuf>) -> Res<()> {
    let e = parse_module_extension(&read(extension)?)?;
    write_out(out, &pretty(&bundle_to_value(&dagger(&e)?)))
}

fn cmd_roundtrip(bundle: &Path, witness: &Option<PathBuf>) -> Res<()> {
    let e = parse_bundle(&read(bundle)?)?;
    let group_side = roundtrip_check(&e)?;
    let module_side = roundtrip_check_module(&star(&e)?)?;
    let pass = group_side.passed() && module_side.passed();
    if let Some(p) = witness {
        let cochain: Option<Vec<Vec<String>>> = group_side
            .witness
            .as_ref()
            .map(|c| c.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect());
        let v = json!({
            "literal": group_side.literal,
            "equivalent": group_side.equivalent,
            "cochain": cochain,
            "phi": module_side.phi,
            "equivariant": module_side.equivariant,
            "bijective": module_side.bijective,
            "commutes_inject": module_side.commutes_inject,
            "commutes_project": module_side.commutes_project,
        });
        fs::write(p, pretty(&v)).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    }
    let at = witness.as_ref().map(|p| format!(" (witness: {})", p.display())).unwrap_or_default();
    if pass {
        println!("PASS{at}");
        Ok(())
    } else {
        println!("FAIL{at}");
        Err(Failure::Audit(format!("round trip failed: {group_side:?} / {module_side:?}")))
    }
}

fn census_opts(degrees: &str, jobs: usize, caps: &Caps) -> Res<CensusOptions> {
    Ok(CensusOptions {
        degrees: parse_degree_range(degrees)?,
        tate: caps.tate(),
        h2: H2Options::default(),
        jobs,
    })
}

fn cmd_census(group: &str, bound: u64, degrees: &str, jobs: usize, format: Format, caps: &Caps, out: &Option<PathBuf>) -> Res<()> {
    let (g, name) = load_group(group)?;
    let report = census_run(&g, &name, bound, &census_opts(degrees, jobs, caps)?)?;
    let text = match format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Csv => report.to_csv(),
    };
    write_out(out, &text)?;
    match report.audits.iter().find(|a| !a.passed()) {
        Some(a) => Err(Failure::Audit(format!("audit {} failed: {:?}", a.name, a.violations))),
        None => Ok(()),
    }
}

struct SuiteResult {
    checks: usize,
    violations: Vec<String>,
    notes: Vec<String>,
}

impl SuiteResult {
    fn new() -> Self {
        SuiteResult {
            checks: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    fn absorb(&mut self, v: &AuditVerdict) {
        self.checks += v.checked;
        self.violations.extend(v.violations.iter().map(|x| format!("{}: {x}", v.name)));
    }
}

fn suite_thm3(g: &GroupRef, opts: &TateOptions) -> Res<SuiteResult> {
    let mut r = SuiteResult::new();
    for x in killed_by_classes(g.order() as u64, 2) {
        let (_, h0) = thm3_h0_witness(g, &x, opts)?;
        r.check(h0 == x, || format!("H^0 witness for {x} gave {h0}"));
        let (_, h2) = thm3_h2_witness(g, &x, opts)?;
        r.check(h2 == x, || format!("H^2 witness for {x} gave {h2}"));
    }
    Ok(r)
}

fn suite_lemma1(g: &GroupRef, bound: u64, opts: &CensusOptions) -> Res<SuiteResult> {
    let mut r = SuiteResult::new();
    let m0 = if g.is_cyclic() {
        augmentation_ideal(g.clone())?
    } else {
        match find_h_minus2_vanisher(g, bound, opts)? {
            VanisherSearch::Found { extension, kernel, class_index } => {
                r.notes.push(format!("vanisher found: kernel {} class {class_index}", kernel.label()));
                splitting_module(&extension)?
            }
            VanisherSearch::NotFoundWithinBound { kernels_tried, extensions_tried } => {
                r.notes.push(format!(
                    "no vanisher within kernel order {bound} ({kernels_tried} kernels, {extensions_tried} extensions)"
                ));
                return Ok(r);
            }
        }
    };
    for x in killed_by_classes(g.order() as u64, 2) {
        let (_, h) = lemma1_witness(&m0, &x, &opts.tate)?;
        r.check(h == x, || format!("H^-2 witness for {x} gave {h}"));
    }
    Ok(r)
}

fn suite_roundtrip(g: &GroupRef, bound: u64, opts: &CensusOptions) -> Res<SuiteResult> {
    let mut r = SuiteResult::new();
    for spec in census_kernels(g, bound)? {
        let a = spec.build(g)?;
        for (i, f) in h2_with(&a, true, &opts.h2)?.representatives.into_iter().enumerate() {
            let e = GroupExtensionData::new(a.clone(), f)?;
            let ok = roundtrip_check(&e)?.passed() && roundtrip_check_module(&star(&e)?)?.passed();
            r.check(ok, || format!("{}#{i}", spec.label()));
        }
    }
    Ok(r)
}

fn suite_oracle(g: &GroupRef, bound: u64, opts: &CensusOptions) -> Res<SuiteResult> {
    if !g.is_cyclic() {
        return Err(Error::NotCyclic.into());
    }
    let mut modules: Vec<(String, GModule)> = vec![
        ("Z".into(), trivial_module(g.clone(), &AbelianInvariants::new(vec![], 1)?)?),
        ("I_G".into(), augmentation_ideal(g.clone())?),
        ("Z[G]".into(), group_ring(g.clone())?),
        ("(Z/n)[G]".into(), group_ring_mod(g.clone(), g.order() as u64)?),
    ];
    for spec in census_kernels(g, bound)? {
        let a = spec.build(g)?;
        modules.push((spec.label(), a.clone()));
        for (i, f) in h2_with(&a, true, &opts.h2)?.representatives.into_iter().enumerate() {
            let e = GroupExtensionData::new(a.clone(), f)?;
            modules.push((format!("M({}#{i})", spec.label()), splitting_module(&e)?));
        }
    }
    let mut r = SuiteResult::new();
    for (name, m) in &modules {
        for i in -3..=3 {
            let bar = tate_with(m, i, &opts.tate)?;
            let oracle = cyclic_tate_oracle(m, i)?;
            r.check(bar == oracle, || format!("{name} degree {i}: bar {bar}, oracle {oracle}"));
        }
    }
    Ok(r)
}

fn cmd_verify(suite: Suite, group: &str, bound: u64, jobs: usize, caps: &Caps, out: &Option<PathBuf>) -> Res<()> {
    let (g, name) = load_group(group)?;
    let opts = census_opts("-2..2", jobs, caps)?;
    let result = match suite {
        Suite::Thm3 => suite_thm3(&g, &opts.tate)?,
        Suite::Lemma1 => suite_lemma1(&g, bound, &opts)?,
        Suite::Suzuki | Suite::Satz94 => {
            let report = census_run(&g, &name, bound, &CensusOptions { degrees: (-1, 0), ..opts })?;
            let mut r = SuiteResult::new();
            let v = if suite == Suite::Suzuki { suzuki_audit(&report)? } else { satz94_audit(&report)? };
            r.absorb(&v);
            for a in &report.audits {
                r.absorb(a);
            }
            if !report.complete {
                r.notes.push("census incomplete: caps reached".into());
            }
            r
        }
        Suite::Roundtrip => suite_roundtrip(&g, bound, &opts)?,
        Suite::Oracle => suite_oracle(&g, bound, &opts)?,
    };
    let suite_name = format!("{:?}", suite_label(suite));
    let verdict = if result.violations.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "{verdict} suite {} on {name}: {} checks, {} violations",
        suite_label(suite),
        result.checks,
        result.violations.len()
    );
    for n in &result.notes {
        println!("note: {n}");
    }
    for v in &result.violations {
        println!("violation: {v}");
    }
    if out.is_some() {
        let v = json!({
            "suite": suite_name.trim_matches('"'),
            "group": name,
            "checks": result.checks,
            "violations": result.violations,
            "notes": result.notes,
            "passed": result.violations.is_empty(),
        });
        write_out(out, &pretty(&v))?;
    }
    if result.violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Audit(format!("{} violations", result.violations.len())))
    }
}

fn suite_label(s: Suite) -> &'static str {
    match s {
        Suite::Thm3 => "thm3",
        Suite::Lemma1 => "lemma1",
        Suite::Suzuki => "suzuki",
        Suite::Satz94 => "satz94",
        Suite::Roundtrip => "roundtrip",
        Suite::Oracle => "oracle",
    }
}

fn cmd_group(cmd: &GroupCmd) -> Res<()> {
    match cmd {
        GroupCmd::List => {
            for n in BUILTIN_NAMES {
                let g = builtin(n)?;
                println!("{n}\torder {}", g.order());
            }
            Ok(())
        }
        GroupCmd::Describe { name } => {
            let g = builtin(name.strip_prefix("builtin:").unwrap_or(name))?;
            let mut v = group_to_value(&g);
            v["abelian"] = json!(g.is_abelian());
            v["cyclic"] = json!(g.is_cyclic());
            v["exponent"] = json!(g.exponent());
            v["element_orders"] = json!(g.elements().map(|x| g.element_order(x)).collect::<Vec<_>>());
            print!("{}", pretty(&v));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Res<()> {
    match &cli.command {
        Command::Tate { group, module, degrees, caps, output } => cmd_tate(group, module, degrees, caps, &output.out),
        Command::H2 { group, kernel, action, enumerate, max_classes, out_dir } => {
            cmd_h2(group, kernel, *action, *enumerate, *max_classes, out_dir)
        }
        Command::Split { bundle, sequence, output } => cmd_split(bundle, *sequence, &output.out),
        Command::Middle { bundle, output } => cmd_middle(bundle, &output.out),
        Command::Dagger { extension, output } => cmd_dagger(extension, &output.out),
        Command::Roundtrip { bundle, witness } => cmd_roundtrip(bundle, witness),
        Command::Census { group, max_kernel_order, degrees, jobs, format, caps, output } => {
            cmd_census(group, *max_kernel_order, degrees, *jobs, *format, caps, &output.out)
        }
        Command::Verify { suite, group, max_kernel_order, jobs, caps, output } => {
            cmd_verify(*suite, group, *max_kernel_order, *jobs, caps, &output.out)
        }
        Command::Group { cmd } => cmd_group(cmd),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Audit(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
