//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use weylinv::basisver::formulas::{bn_u, bn_uv, bn_v, dn_e, i2_square};
use weylinv::basisver::report::fullcheck;
use weylinv::basisver::{verify_basis, BasisReport, Catalog, EngineOptions, NamedInvariant};
use weylinv::cosets::build_default_coset_space;
use weylinv::forms::{form_of_linear_action, pfister_gram_check, sw};
use weylinv::kinv::Context;
use weylinv::permgroup::{
    enumerate_subgroup, known_weyl_order, omega_classes, simple_reflections, DEFAULT_ELEMENT_CAP, DEFAULT_FRAME_CAP,
};
use weylinv::rootsys::{build_root_system, RootVector};
use weylinv::TypeSpec;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn spec(t: &str) -> TypeSpec {
    t.parse().expect("type label")
}

fn opts() -> EngineOptions {
    EngineOptions::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(t: &str) -> Result<BasisReport, String> {
    verify_basis(spec(t), &opts()).map_err(|e| format!("{t}: {e}"))
}

fn checks_with_prefix(r: &BasisReport, prefixes: &[&str]) -> Result<usize, String> {
    let picked: Vec<_> = r.checks.iter().filter(|c| prefixes.iter().any(|p| c.id.starts_with(p))).collect();
    for c in &picked {
        ensure(c.passed(), || format!("{} {}: {}", r.type_label, c.id, c.witness.as_deref().unwrap_or("")))?;
    }
    Ok(picked.len())
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn coset_counts() -> Outcome {
    let mut parts = Vec::new();
    for (t, want, limit) in [("E7", 2016usize, 60u64), ("E8", 17280, 300)] {
        let sys = build_root_system(spec(t)).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let space = build_default_coset_space(&sys, DEFAULT_ELEMENT_CAP).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        ensure(space.size() == want, || format!("{t}: {} cosets, expected {want}", space.size()))?;
        ensure(took.as_secs() < limit, || format!("{t}: {} exceeds {limit}s", secs(took)))?;
        parts.push(format!("{t} {} in {}", space.size(), secs(took)));
    }
    Ok(parts.join(", "))
}

fn order_identities() -> Outcome {
    for (t, cosets, u, total) in [("E7", 2016u64, 1440u64, 2_903_040u64), ("E8", 17280, 40320, 696_729_600)] {
        let sys = build_root_system(spec(t)).map_err(|e| e.to_string())?;
        let space = build_default_coset_space(&sys, DEFAULT_ELEMENT_CAP).map_err(|e| e.to_string())?;
        ensure(space.size() as u64 == cosets && space.u_order == u, || format!("{t}: {} x {}", space.size(), space.u_order))?;
        ensure(cosets * u == total, || format!("{t}: {cosets} x {u} != {total}"))?;
        ensure(known_weyl_order(sys.spec) == Some(total), || format!("{t}: order table disagrees"))?;
    }
    let mut parts = Vec::new();
    for (t, want) in [("B2", 8u64), ("B3", 48), ("B4", 384), ("B5", 3840), ("D4", 192), ("F4", 1152)] {
        let sys = build_root_system(spec(t)).map_err(|e| e.to_string())?;
        let gens = simple_reflections(&sys);
        let order = enumerate_subgroup(&gens, DEFAULT_ELEMENT_CAP).map_err(|e| e.to_string())?.order;
        ensure(order == Some(want), || format!("{t}: enumerated {order:?}, expected {want}"))?;
        ensure(known_weyl_order(sys.spec) == Some(want), || format!("{t}: order table disagrees"))?;
        parts.push(format!("{t} {want}"));
    }
    Ok(format!("E7 2016x1440, E8 17280x40320; enumerated {}", parts.join(", ")))
}

fn fold_certificates() -> Outcome {
    let e7 = fullcheck(spec("E7"), &opts()).map_err(|e| e.to_string())?;
    ensure(e7.passed() && e7.all_simply_transitive, || format!("E7 certificate failed: {e7:?}"))?;
    ensure(e7.min_fold == 3, || format!("E7 min fold {}", e7.min_fold))?;
    ensure(e7.fold_counts.get(&3) == Some(&28), || format!("E7 fold-3 orbits {:?}", e7.fold_counts.get(&3)))?;
    ensure(e7.support_match, || "E7 fold-3 support differs from the restriction".into())?;
    let e8 = fullcheck(spec("E8"), &opts()).map_err(|e| e.to_string())?;
    ensure(e8.passed() && e8.all_simply_transitive, || format!("E8 certificate failed: {e8:?}"))?;
    ensure(e8.min_fold == 4, || format!("E8 min fold {}", e8.min_fold))?;
    ensure(e8.support_match, || "E8 fold-4 support differs from the restriction".into())?;
    Ok(format!("E7 min fold 3 with 28 fold-3 orbits; E8 min fold 4 with {} fold-4 orbits", e8.fold_counts[&4]))
}

fn d_n_coset_orbits() -> Outcome {
    for m in 2..=4usize {
        let t = format!("D{}", 2 * m);
        let r = fullcheck(spec(&t), &opts()).map_err(|e| e.to_string())?;
        ensure(r.orbits == 1 << (m - 1), || format!("{t}: {} orbits", r.orbits))?;
        ensure(r.all_simply_transitive && r.pattern_ok == Some(true), || format!("{t}: orbit pattern fails"))?;
        ensure(r.fold_counts == BTreeMap::from([(m as u32, 1usize << (m - 1))]), || format!("{t}: folds {:?}", r.fold_counts))?;
        ensure(r.passed(), || format!("{t}: certificate failed"))?;
        let c = Catalog::build(spec(&t), &opts()).map_err(|e| e.to_string())?;
        let site = &c.sites[0];
        let e = c.engine.restrict(&c.get(&format!("e{m}")).map_err(|e| e.to_string())?, site).map_err(|e| e.to_string())?;
        ensure(e == dn_e(m, &site.ctx).map_err(|e| e.to_string())?, || format!("{t}: res e{m} = {e}"))?;
    }
    Ok("D4, D6, D8: 2^(m-1) simply transitive orbits, res e_m exact".into())
}

fn omega_counts() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(String, usize)> = (2..=6).map(|n| (format!("B{n}"), n / 2 + 1)).collect();
    cases.push(("F4".into(), 3));
    cases.extend((1..=6).map(|n| (format!("A{n}"), 1)));
    cases.extend((4..=8).map(|n| (format!("D{n}"), 1)));
    cases.extend(["E6", "E7", "E8"].map(|t| (t.to_string(), 1)));
    for (t, want) in &cases {
        let sys = build_root_system(spec(t)).map_err(|e| e.to_string())?;
        let om = omega_classes(&sys, DEFAULT_FRAME_CAP).map_err(|e| format!("{t}: {e}"))?;
        ensure(om.len() == *want, || format!("{t}: {} classes, expected {want}", om.len()))?;
    }
    let took = start.elapsed();
    ensure(took.as_secs() < 600, || format!("took {}", secs(took)))?;
    Ok(format!("{} types in {}", cases.len(), secs(took)))
}

fn restriction_formulas() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for n in 2..=6usize {
        let c = Catalog::build(spec(&format!("B{n}")), &opts()).map_err(|e| e.to_string())?;
        let get = |name: String| c.get(&name).map_err(|e| e.to_string());
        for (l, site) in c.sites.iter().enumerate() {
            for d in 1..=n as u32 {
                let u = c.engine.restrict(&get(format!("u{d}"))?, site).map_err(|e| e.to_string())?;
                let v = c.engine.restrict(&get(format!("v{d}"))?, site).map_err(|e| e.to_string())?;
                ensure(u == bn_u(l, n, d, &site.ctx).map_err(|e| e.to_string())?, || format!("B{n} u{d} at P{l}"))?;
                ensure(v == bn_v(l, n, d, &site.ctx).map_err(|e| e.to_string())?, || format!("B{n} v{d} at P{l}"))?;
                count += 2;
                for f in 1..=n as u32 - d {
                    let prod = NamedInvariant::product(&[get(format!("v{f}"))?, get(format!("u{d}"))?]);
                    let got = c.engine.restrict(&prod, site).map_err(|e| e.to_string())?;
                    ensure(got == bn_uv(l, n, d, f, &site.ctx).map_err(|e| e.to_string())?, || format!("B{n} v{f}u{d} at P{l}"))?;
                    count += 1;
                }
            }
        }
    }
    let i2 = Catalog::build(spec("I2(4)"), &opts()).map_err(|e| e.to_string())?;
    for (l, site) in i2.sites.iter().enumerate() {
        for name in ["w1", "v1", "w2"] {
            let got = i2.engine.restrict(&i2.get(name).map_err(|e| e.to_string())?, site).map_err(|e| e.to_string())?;
            ensure(Some(&got) == i2_square(name, l, &site.ctx).as_ref(), || format!("I2(4) {name} at P{l}: {got}"))?;
            count += 1;
        }
    }
    let c2: Arc<Context> = Context::new(["t1", "t2"]);
    let c1: Arc<Context> = Context::new(["t1"]);
    let (e1, e2) = (RootVector::e(1, 2), RootVector::e(2, 2));
    let diag = form_of_linear_action(&[e1.sub(&e2), e1.add(&e2)], &c2).map_err(|e| e.to_string())?;
    ensure(diag.to_string() == "⟨2t1, 2t2⟩", || format!("worked example 1: {diag}"))?;
    ensure(sw(&diag, 2).to_string() == "{2}{t1} + {2}{t2} + {t1}{t2}", || "worked example 1: w2".into())?;
    let single = form_of_linear_action(&[e1.sub(&e2)], &c1).map_err(|e| e.to_string())?;
    ensure(single.sorted_entries() == vec![(1, 0), (1, 1)], || format!("worked example 2: {single}"))?;
    let twice = form_of_linear_action(&[e1.sub(&e2), e1.sub(&e2)], &c2).map_err(|e| e.to_string())?;
    ensure(twice.sorted_entries() == vec![(1, 0), (1, 3)], || format!("worked example 3: {twice}"))?;
    count += 3;
    for t in ["F4", "E6", "E7", "E8"] {
        count += checks_with_prefix(&report(t)?, &["table:", "formula:"])?;
    }
    let took = start.elapsed();
    ensure(took.as_secs() < 60, || format!("took {}", secs(took)))?;
    Ok(format!("{count} equalities in {}", secs(took)))
}

fn pfister_gram() -> Outcome {
    for n in 0..=3 {
        let r = pfister_gram_check(n).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("n = {n}: {r:?}"))?;
    }
    Ok("n = 0..3 orthogonal with b(v_p, v_p) = 2^n prod eps_i".into())
}

fn basis_verification() -> Outcome {
    let mut parts = Vec::new();
    for (t, k) in [("B4", 9usize), ("D8", 16), ("F4", 8), ("E6", 5), ("E7", 10), ("E8", 10), ("G2", 4), ("I2(4)", 4)] {
        let r = report(t)?;
        ensure(r.basis.len() == k, || format!("{t}: {} basis elements, expected {k}", r.basis.len()))?;
        ensure(r.check("independence").is_some_and(|c| c.passed()), || format!("{t}: independence"))?;
        ensure(r.check("cardinality").is_some_and(|c| c.passed()), || format!("{t}: cardinality"))?;
        let nz = checks_with_prefix(&r, &["normalizer:"])?;
        ensure(nz > 0 || t == "G2", || format!("{t}: no normalizer constraints recorded"))?;
        parts.push(format!("{t} {k}"));
    }
    Ok(format!("{}; G2 records no normalizer constraints", parts.join(", ")))
}

fn dimension_equalities() -> Outcome {
    let types: Vec<String> = (2..=6).map(|n| format!("B{n}")).chain(["D4", "D6"].map(String::from)).collect();
    for t in &types {
        let r = report(t)?;
        for (d, e) in &r.dims {
            ensure(e.achieved == e.bound, || format!("{t} degree {d}: {} < {}", e.achieved, e.bound))?;
        }
    }
    for t in ["F4", "E6", "E7", "E8"] {
        let r = report(t)?;
        ensure(r.check("span").is_some_and(|c| c.passed()), || format!("{t}: span of encoded bound"))?;
        ensure(r.dims.values().all(|e| e.achieved == e.bound), || format!("{t}: dims {:?}", r.dims))?;
    }
    Ok("B2..B6, D4, D6 achieved = bound; F4, E6, E7, E8 span their encoded bounds".into())
}

fn bin(args: &[&str], cache: Option<&std::path::Path>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_weylinv"));
    cmd.env_remove("WEYLINV_CACHE_DIR").args(args);
    if let Some(d) = cache {
        cmd.arg("--cache-dir").arg(d);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?} exited with {:?}", out.status.code()))?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let a = bin(&["--json", "verify", "--all"], None)?;
    let b = bin(&["--json", "verify", "--all"], None)?;
    ensure(a == b, || "verify --all --json differs between runs".into())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cold = bin(&["--json", "fullcheck", "E8"], Some(dir.path()))?;
    let warm = bin(&["--json", "fullcheck", "E8"], Some(dir.path()))?;
    let uncached = bin(&["--json", "fullcheck", "E8"], None)?;
    ensure(cold == warm && warm == uncached, || "E8 cached and cold certificates differ".into())?;
    let cosets = bin(&["cosets", "E8"], Some(dir.path()))?;
    ensure(String::from_utf8_lossy(&cosets).contains("(cached)"), || "E8 cache was not used".into())?;
    Ok(format!("verify --all identical ({} bytes); E8 cached = cold", a.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("coset counts", coset_counts),
        ("order identities", order_identities),
        ("E7/E8 certificates", fold_certificates),
        ("D_n coset orbits", d_n_coset_orbits),
        ("omega counts", omega_counts),
        ("restriction formulas", restriction_formulas),
        ("Pfister Gram check", pfister_gram),
        ("basis verification", basis_verification),
        ("dimension equalities", dimension_equalities),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
