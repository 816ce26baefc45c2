//! `weylinv`: construct root systems and Weyl groups, certify coset actions and verify
//! invariant bases by restriction.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use weylinv::basisver::report::{fullcheck, FullcheckReport};
use weylinv::basisver::{verify_basis, BasisReport, Catalog, EngineOptions, Site};
use weylinv::cosets::{build_coset_space, cache, default_u_gens};
use weylinv::kinv::Context;
use weylinv::permgroup::{
    group_order, omega_classes, OrthogonalFrame, DEFAULT_ELEMENT_CAP, DEFAULT_FRAME_CAP,
};
use weylinv::rootsys::{build_root_system, RootVector};
use weylinv::{Error, TypeSpec};

/// Types covered by `verify --all`, in output order.
const ALL_TYPES: [&str; 20] = [
    "A1", "A2", "A3", "A4", "A5", "A6", "B2", "B3", "B4", "B5", "B6", "D4", "D6", "D8", "F4", "E6", "E7", "E8",
    "G2", "I2(4)",
];

#[derive(Parser, Debug)]
#[command(name = "weylinv", version, about = "Weyl group invariants by restriction to elementary abelian 2-subgroups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for cached coset spaces.
    #[arg(long, global = true, env = "WEYLINV_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Cap on enumerated group elements.
    #[arg(long, global = true, default_value_t = DEFAULT_ELEMENT_CAP, value_parser = positive)]
    max_elements: usize,
    /// Cap on enumerated maximal frames before the inductive fallback.
    #[arg(long, global = true, default_value_t = DEFAULT_FRAME_CAP, value_parser = positive)]
    max_frames: usize,
    /// Worker threads for `verify --all`.
    #[arg(long, global = true, default_value_t = 4, value_parser = positive)]
    jobs: usize,
    /// Print more detail in text mode.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Args, Debug, Clone)]
struct TypeArg {
    /// Type label such as E8, B4, I2(5), or a family letter followed by RANK.
    #[arg(value_name = "TYPE")]
    label: String,
    /// Rank, when TYPE is a bare family letter.
    #[arg(value_name = "RANK")]
    rank: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the roots in doubled coordinates.
    Roots(TypeArg),
    /// Order of the Weyl group.
    Order(TypeArg),
    /// Conjugacy classes of maximal frames.
    Omega(TypeArg),
    /// Size of the default coset space `U\W`.
    Cosets(TypeArg),
    /// Fold certificate of the coset action of the Ω representative (E7, E8, D_n with n even).
    Fullcheck(TypeArg),
    /// Restrictions of basis invariants to the Ω representatives or to a given frame.
    Restrict {
        #[command(flatten)]
        ty: TypeArg,
        /// A frame root in doubled coordinates, e.g. 2,-2,0,0; repeat for each root.
        #[arg(long = "root", value_name = "COORDS", allow_hyphen_values = true)]
        roots: Vec<String>,
        /// Invariant names to restrict; defaults to the basis.
        #[arg(long = "invariant", value_name = "NAME")]
        invariants: Vec<String>,
    },
    /// Verify the invariant basis of a type, or of every default type with --all.
    Verify {
        #[arg(value_name = "TYPE", required_unless_present = "all")]
        label: Option<String>,
        #[arg(value_name = "RANK")]
        rank: Option<usize>,
        #[arg(long, conflicts_with = "label")]
        all: bool,
    },
    /// Inspect or clear the coset cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    Inspect,
    Clear,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            _ if e.is_resource_cap() => 3,
            Error::Unsupported(_) | Error::RankMismatch(..) | Error::InvalidIndex(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Outcome of a command: the text and JSON renderings and whether every check passed.
struct Output {
    text: String,
    json: Value,
    passed: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, passed: true }
    }
}

impl TypeArg {
    fn spec(&self) -> Result<TypeSpec, Failure> {
        parse_type(&self.label, self.rank)
    }
}

fn parse_type(label: &str, rank: Option<usize>) -> Result<TypeSpec, Failure> {
    let full = match rank {
        Some(r) if label.eq_ignore_ascii_case("I2") || label.eq_ignore_ascii_case("I") => format!("I2({r})"),
        Some(r) => format!("{label}{r}"),
        None => label.to_string(),
    };
    full.parse::<TypeSpec>().map_err(|_| usage(format!("unsupported type: {full}")))
}

fn options(g: &Global) -> Result<EngineOptions, Failure> {
    if let Some(dir) = &g.cache_dir {
        std::fs::create_dir_all(dir).map_err(|e| usage(format!("cache directory {}: {e}", dir.display())))?;
    }
    Ok(EngineOptions { element_cap: g.max_elements, frame_cap: g.max_frames, cache_dir: g.cache_dir.clone() })
}

fn cmd_roots(spec: TypeSpec) -> Result<Output, Failure> {
    let sys = build_root_system(spec)?;
    let mut text = format!("{}: {} roots\n", sys.spec, sys.len());
    for r in &sys.roots {
        text.push_str(&format!("  {r}\n"));
    }
    Ok(Output::ok(text, sys.to_json()))
}

fn cmd_order(spec: TypeSpec, g: &Global) -> Result<Output, Failure> {
    if let Some(n) = spec.dihedral_n() {
        let order = weylinv::permgroup::dihedral::build_dihedral(n)?.order();
        return Ok(Output::ok(
            format!("{spec}: order {order} (dihedral enumeration)\n"),
            json!({ "type": spec.to_string(), "order": order, "method": "enumeration" }),
        ));
    }
    let sys = build_root_system(spec)?;
    let r = group_order(&sys, g.max_elements)?;
    let how = match r.factors {
        Some((c, u)) => format!("coset index {c} x {u}"),
        None => serde_json::to_value(r.method).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
    };
    let mut j = serde_json::to_value(&r).map_err(Error::from)?;
    j["type"] = json!(sys.spec.to_string());
    Ok(Output::ok(format!("{}: order {} ({how})\n", sys.spec, r.order), j))
}

fn cmd_omega(spec: TypeSpec, g: &Global) -> Result<Output, Failure> {
    if let Some(n) = spec.dihedral_n() {
        let group = weylinv::permgroup::dihedral::build_dihedral(n)?;
        let classes = group.omega();
        let mut text = format!("{spec}: {} classes\n", classes.len());
        for c in &classes {
            text.push_str(&format!("  frame of size {} (elements {:?}), orbit {}\n", c.representative.len(), c.representative, c.orbit_size));
        }
        let j = json!({ "type": spec.to_string(), "classes": classes.len(), "representatives": classes });
        return Ok(Output::ok(text, j));
    }
    let sys = build_root_system(spec)?;
    let om = omega_classes(&sys, g.max_frames)?;
    let mut text = format!("{}: {} classes\n", sys.spec, om.len());
    let mut reps = Vec::new();
    for (k, rep) in om.representatives.iter().enumerate() {
        let vs: Vec<String> = rep.vectors(&sys).iter().map(|v| v.to_string()).collect();
        match om.orbit_sizes.as_ref() {
            Some(sizes) => text.push_str(&format!("  [{}] orbit {}\n", vs.join(", "), sizes[k])),
            None => text.push_str(&format!("  [{}]\n", vs.join(", "))),
        }
        reps.push(rep.to_json(&sys));
    }
    if g.verbose {
        text.push_str(&format!("  method: {:?}\n", om.method));
    }
    let j = json!({
        "type": sys.spec.to_string(),
        "classes": om.len(),
        "representatives": reps,
        "orbit_sizes": om.orbit_sizes,
        "total_frames": om.total_frames,
        "method": om.method,
    });
    Ok(Output::ok(text, j))
}

fn cmd_cosets(spec: TypeSpec, g: &Global) -> Result<Output, Failure> {
    let opts = options(g)?;
    let sys = build_root_system(spec)?;
    let gens = default_u_gens(&sys)?;
    let (space, cached) = match opts.cache_dir.as_deref() {
        Some(dir) => cache::load_or_build(Some(dir), &sys, &gens, opts.element_cap)?,
        None => (build_coset_space(&sys, &gens, opts.element_cap)?, false),
    };
    let text = format!(
        "{}: {} cosets; |U| = {}; {} x {} = {}{}\n",
        sys.spec,
        space.size(),
        space.u_order,
        space.size(),
        space.u_order,
        space.size() as u64 * space.u_order,
        if cached { " (cached)" } else { "" }
    );
    let j = json!({
        "type": sys.spec.to_string(),
        "cosets": space.size(),
        "u_order": space.u_order,
        "u_gens": gens.iter().map(|v| v.doubled.clone()).collect::<Vec<_>>(),
        "order": space.size() as u64 * space.u_order,
    });
    Ok(Output::ok(text, j))
}

fn fullcheck_text(r: &FullcheckReport) -> String {
    let counts: Vec<String> = r.fold_counts.iter().map(|(f, c)| format!("{f}:{c}")).collect();
    let mut text = format!(
        "{}: {} cosets; {} orbits; min fold {}; {} fold-{} orbits\n  fold counts {}\n  expected {}\n  simply transitive: {}; support match: {}",
        r.type_label,
        r.cosets,
        r.orbits,
        r.min_fold,
        r.fold_counts.get(&r.min_fold).copied().unwrap_or(0),
        r.min_fold,
        counts.join(" "),
        r.expected,
        yes(r.all_simply_transitive),
        yes(r.support_match),
    );
    if let Some(p) = r.pattern_ok {
        text.push_str(&format!("; orbit pattern: {}", yes(p)));
    }
    text.push_str(&format!("\n{}\n", verdict(r.passed())));
    text
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Report without the cache flag, so cold and cached runs serialize identically.
#[derive(Serialize)]
struct StableFullcheck<'a> {
    #[serde(flatten)]
    report: &'a FullcheckReport,
    passed: bool,
}

fn cmd_fullcheck(spec: TypeSpec, g: &Global) -> Result<Output, Failure> {
    let opts = options(g)?;
    let r = fullcheck(spec, &opts)?;
    let mut j = serde_json::to_value(StableFullcheck { report: &r, passed: r.passed() }).map_err(Error::from)?;
    if let Some(obj) = j.as_object_mut() {
        obj.remove("cached");
    }
    Ok(Output { text: fullcheck_text(&r), json: j, passed: r.passed() })
}

fn parse_root(s: &str) -> Result<RootVector, Failure> {
    let coords = s
        .split(',')
        .map(|x| x.trim().parse::<i32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| usage(format!("bad root {s:?}: expected comma-separated doubled coordinates")))?;
    Ok(RootVector::from_doubled(coords))
}

fn cmd_restrict(spec: TypeSpec, roots: &[String], names: &[String], g: &Global) -> Result<Output, Failure> {
    let opts = options(g)?;
    let cat = Catalog::build(spec, &opts)?;
    let sites: Vec<Site> = if roots.is_empty() {
        cat.sites.clone()
    } else {
        if !spec.is_crystallographic_root_type() {
            return Err(usage(format!("{spec}: frames cannot be given by roots")));
        }
        let sys = cat.engine.sys()?;
        let vs = roots.iter().map(|r| parse_root(r)).collect::<Result<Vec<_>, _>>()?;
        if vs.iter().any(|v| v.rank() != sys.ambient_dim()) {
            return Err(usage(format!("roots of {} have {} coordinates", sys.spec, sys.ambient_dim())));
        }
        let frame = OrthogonalFrame::from_vectors(sys, &vs).map_err(|e| usage(e.to_string()))?;
        if frame.len() != vs.len() || !frame.is_orthogonal(sys) {
            return Err(usage("the given roots are not pairwise orthogonal and distinct"));
        }
        let ctx = Context::new((1..=vs.len()).map(|i| format!("r{i}")));
        vec![Site { label: "frame".into(), roots: vs, dihedral: Vec::new(), ctx }]
    };
    let invs = if names.is_empty() {
        cat.basis.clone()
    } else {
        names.iter().map(|n| cat.get(n).map_err(|e| usage(e.to_string()))).collect::<Result<Vec<_>, _>>()?
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for site in &sites {
        let coords: Vec<String> = site.roots.iter().map(|r| r.to_string()).collect();
        if coords.is_empty() {
            text.push_str(&format!("{} ({})\n", site.label, site.ctx.labels.join(", ")));
        } else {
            let pairs: Vec<String> = site.ctx.labels.iter().zip(&coords).map(|(l, c)| format!("{l} = {c}")).collect();
            text.push_str(&format!("{}: {}\n", site.label, pairs.join(", ")));
        }
        let mut values = Vec::new();
        for inv in &invs {
            let v = cat.engine.restrict(inv, site)?;
            text.push_str(&format!("  {} -> {}\n", inv.name, v));
            values.push(json!({ "name": inv.name, "degree": inv.degree, "value": v.to_string() }));
        }
        rows.push(json!({
            "site": site.label,
            "coordinates": site.ctx.labels,
            "roots": site.roots.iter().map(|r| r.doubled.clone()).collect::<Vec<_>>(),
            "restrictions": values,
        }));
    }
    Ok(Output::ok(text, json!({ "type": cat.spec.to_string(), "sites": rows })))
}

fn report_text(r: &BasisReport, verbose: bool) -> String {
    let failures = r.failures();
    let mut text = format!(
        "{}: {} ({} basis elements, {} checks)\n",
        r.type_label,
        verdict(r.passed()),
        r.basis.len(),
        r.checks.len()
    );
    for w in &r.warnings {
        text.push_str(&format!("  warning: {w}\n"));
    }
    for f in &failures {
        text.push_str(&format!("  FAIL {}: {}\n", f.id, f.witness.as_deref().unwrap_or("")));
    }
    if verbose {
        let names: Vec<String> = r.basis.iter().map(|b| format!("{}({})", b.name, b.degree)).collect();
        text.push_str(&format!("  basis: {}\n", names.join(", ")));
        let dims: Vec<String> = r.dims.iter().map(|(d, e)| format!("{d}:{}/{}", e.achieved, e.bound)).collect();
        text.push_str(&format!("  dims (achieved/bound): {}\n", dims.join(" ")));
        text.push_str(&format!("  constraint set: {}\n", r.constraint_set));
        for c in &r.checks {
            text.push_str(&format!("  {} {}\n", c.status, c.id));
        }
    }
    text
}

fn cmd_verify(spec: TypeSpec, g: &Global) -> Result<Output, Failure> {
    let opts = options(g)?;
    let r = verify_basis(spec, &opts)?;
    Ok(Output { text: report_text(&r, g.verbose), json: r.to_json(), passed: r.passed() })
}

fn cmd_verify_all(g: &Global) -> Result<Output, Failure> {
    let opts = options(g)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.jobs)
        .build()
        .map_err(|e| Failure { code: 1, message: e.to_string() })?;
    let specs: Vec<TypeSpec> = ALL_TYPES.iter().map(|t| t.parse().expect("built-in type label")).collect();
    let results: Vec<Result<BasisReport, Error>> = pool.install(|| specs.par_iter().map(|&s| verify_basis(s, &opts)).collect());
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        reports.push(r?);
    }
    let passed = reports.iter().all(BasisReport::passed);
    let mut text: String = reports.iter().map(|r| report_text(r, g.verbose)).collect();
    text.push_str(&format!("{} of {} types pass\n", reports.iter().filter(|r| r.passed()).count(), reports.len()));
    let j = json!({ "passed": passed, "reports": reports.iter().map(BasisReport::to_json).collect::<Vec<_>>() });
    Ok(Output { text, json: j, passed })
}

fn cmd_cache(action: &CacheAction, g: &Global) -> Result<Output, Failure> {
    let dir: &Path = g.cache_dir.as_deref().ok_or_else(|| usage("no cache directory: pass --cache-dir or set WEYLINV_CACHE_DIR"))?;
    match action {
        CacheAction::Inspect => {
            let entries = cache::inspect(dir)?;
            let mut text = format!("{}: {} files\n", dir.display(), entries.len());
            for e in &entries {
                let field = |k: &str| e.get(k).map(|v| v.to_string()).unwrap_or_else(|| "-".into());
                text.push_str(&format!(
                    "  {} type {} size {} |U| {} valid {}\n",
                    e["file"].as_str().unwrap_or(""),
                    field("type").trim_matches('"'),
                    field("size"),
                    field("u_order"),
                    field("valid")
                ));
            }
            Ok(Output::ok(text, json!({ "dir": dir.display().to_string(), "files": entries })))
        }
        CacheAction::Clear => {
            let n = cache::clear(dir)?;
            Ok(Output::ok(format!("removed {n} files from {}\n", dir.display()), json!({ "removed": n })))
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Roots(t) => cmd_roots(t.spec()?),
        Command::Order(t) => cmd_order(t.spec()?, g),
        Command::Omega(t) => cmd_omega(t.spec()?, g),
        Command::Cosets(t) => cmd_cosets(t.spec()?, g),
        Command::Fullcheck(t) => cmd_fullcheck(t.spec()?, g),
        Command::Restrict { ty, roots, invariants } => cmd_restrict(ty.spec()?, roots, invariants, g),
        Command::Verify { all: true, .. } => cmd_verify_all(g),
        Command::Verify { label: Some(l), rank, .. } => cmd_verify(parse_type(l, *rank)?, g),
        Command::Verify { .. } => Err(usage("verify needs a TYPE or --all")),
        Command::Cache { action } => cmd_cache(action, g),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.global.json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&out.json).expect("JSON output")));
            } else {
                emit(&out.text);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            if cli.global.json {
                emit(&format!("{}\n", json!({ "error": f.message, "exit_code": f.code })));
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use weylinv::Family;

    #[test]
    fn type_arguments() {
        assert_eq!(parse_type("E", Some(8)).ok(), Some(TypeSpec::new(Family::E, 8)));
        assert_eq!(parse_type("b4", None).ok(), Some(TypeSpec::new(Family::B, 4)));
        assert_eq!(parse_type("I2", Some(5)).ok(), "I2(5)".parse().ok());
        assert_eq!(parse_type("E9", None).err().map(|f| f.code), Some(2));
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::CapExceeded { cap: 1 }).code, 3);
        assert_eq!(Failure::from(Error::Unsupported("X".into())).code, 2);
        assert_eq!(Failure::from(Error::NotNormalizing).code, 1);
    }

    #[test]
    fn root_parsing() {
        assert_eq!(parse_root("2,-2,0").ok().map(|r| r.doubled), Some(vec![2, -2, 0]));
        assert!(parse_root("2,x").is_err());
    }

    #[test]
    fn clap_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
