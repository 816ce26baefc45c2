//! Basis verification reports, upper bounds, tensor bases and fold certificates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cosets::{compare_support, coset_vectors, d_pattern_sets, full_check, FoldCertificate};
use crate::f2::rank_with_certificate;
use crate::kinv::{stacked_mod_s, CoordinateMap, KInvariant};
use crate::permgroup::{omega_classes, OrthogonalFrame};
use crate::{Error, Family, Result, TypeSpec};

use super::bounds::{constrained_dim, stacked_rank};
use super::catalog::{Bound, Catalog, TensorSum};
use super::formulas::dn_e;
use super::{verify_identity, EngineOptions, NamedInvariant};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    fn new(id: impl Into<String>, ok: bool, witness: Option<String>) -> Self {
        Self { id: id.into(), status: if ok { "pass" } else { "fail" }, witness: if ok { None } else { witness } }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BasisEntry {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct DimEntry {
    pub achieved: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SiteValue {
    pub site: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RestrictionRow {
    pub name: String,
    pub values: Vec<SiteValue>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BasisReport {
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub basis: Vec<BasisEntry>,
    pub checks: Vec<CheckResult>,
    pub dims: BTreeMap<u32, DimEntry>,
    pub restrictions: Vec<RestrictionRow>,
    pub constraint_set: String,
    pub warnings: Vec<String>,
}

impl BasisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn restrict_all(cat: &Catalog, inv: &NamedInvariant) -> Result<Vec<KInvariant>> {
    cat.sites.iter().map(|s| cat.engine.restrict(inv, s)).collect()
}

fn eval_all(cat: &Catalog, expr: &TensorSum) -> Result<Vec<KInvariant>> {
    (0..cat.sites.len()).map(|s| cat.eval_tensor(expr, s)).collect()
}

fn homogeneous_part(v: &[KInvariant], d: u32) -> Vec<KInvariant> {
    v.iter().map(|x| x.homogeneous(d)).collect()
}

/// Number of Ω classes of the type, for comparison with the catalog's sites.
fn omega_count(cat: &Catalog) -> Result<usize> {
    match cat.spec.family {
        Family::G | Family::I(_) => Ok(cat.engine.dihedral()?.omega().len()),
        _ => Ok(omega_classes(cat.engine.sys()?, cat.engine.options.frame_cap)?.len()),
    }
}

pub fn verify_basis(spec: TypeSpec, options: &EngineOptions) -> Result<BasisReport> {
    let cat = Catalog::build(spec, options)?;
    verify_catalog(&cat)
}

pub fn verify_catalog(cat: &Catalog) -> Result<BasisReport> {
    let mut checks = Vec::new();
    let labels: Vec<String> = cat.sites.iter().map(|s| s.label.clone()).collect();

    let bad: Vec<&str> = cat.named.iter().filter(|n| !n.is_consistent()).map(|n| n.name.as_str()).collect();
    checks.push(CheckResult::new("recipes", bad.is_empty(), Some(format!("inconsistent degrees: {}", bad.join(", ")))));

    let omega = omega_count(cat)?;
    checks.push(CheckResult::new(
        "omega",
        omega == cat.sites.len(),
        Some(format!("{omega} classes, {} representatives", cat.sites.len())),
    ));
    if let Some(sys) = cat.engine.sys.as_ref().filter(|_| cat.sites.iter().all(|s| !s.roots.is_empty())) {
        let mut witness = None;
        for site in &cat.sites {
            let frame = OrthogonalFrame::from_vectors(sys, &site.roots)?;
            if frame.len() != site.roots.len() || !frame.is_orthogonal(sys) || !frame.is_maximal(sys) {
                witness = Some(format!("{} is not a maximal orthogonal frame", site.label));
                break;
            }
        }
        checks.push(CheckResult::new("frames", witness.is_none(), witness));
    }

    // Stated closed formulas, one check per invariant across all sites.
    let mut by_inv: BTreeMap<String, (bool, Option<String>)> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for f in &cat.formulas {
        let got = cat.engine.restrict(&f.inv, &cat.sites[f.site])?;
        let key = format!("formula:{}", f.inv.name);
        let entry = by_inv.entry(key.clone()).or_insert_with(|| {
            order.push(key.clone());
            (true, None)
        });
        if entry.0 && got != f.expected {
            *entry = (false, Some(format!("{}: got {got}, stated {}", labels[f.site], f.expected)));
        }
    }
    for key in order {
        let (ok, w) = by_inv.remove(&key).expect("recorded");
        checks.push(CheckResult::new(key, ok, w));
    }

    for id in &cat.identities {
        let v = verify_identity(&cat.engine, &id.lhs, &id.rhs, &cat.sites)?;
        let w = v.witness.map(|(s, a, b)| format!("{s}: {a} vs {b}"));
        checks.push(CheckResult::new(id.id.clone(), v.holds, w));
    }

    for line in &cat.tables {
        let mut witness = None;
        for (s, site) in cat.sites.iter().enumerate() {
            let lhs = cat.engine.restrict(&line.lhs, site)?;
            let rhs = cat.eval_tensor(&line.rhs, s)?;
            if lhs != rhs {
                witness = Some(format!("{}: {lhs} vs {rhs}", site.label));
                break;
            }
        }
        checks.push(CheckResult::new(line.id.clone(), witness.is_none(), witness));
    }

    let restrictions: Vec<Vec<KInvariant>> = cat.basis.iter().map(|b| restrict_all(cat, b)).collect::<Result<_>>()?;
    let refs: Vec<&[KInvariant]> = restrictions.iter().map(|r| r.as_slice()).collect();
    let cert = rank_with_certificate(&stacked_mod_s(&refs));
    let dependent = cert.dependency.as_ref().map(|d| {
        let names: Vec<&str> = d.iter().map(|&i| cat.basis[i].name.as_str()).collect();
        format!("vanishing combination mod {{2}}: {}", names.join(" + "))
    });
    checks.push(CheckResult::new("independence", cert.rank == cat.basis.len(), dependent));
    checks.push(CheckResult::new(
        "cardinality",
        cat.basis.len() == cat.expected_count && cert.rank == cat.expected_count,
        Some(format!("{} elements, rank {}, expected {}", cat.basis.len(), cert.rank, cat.expected_count)),
    ));

    for (s, site) in cat.sites.iter().enumerate() {
        for n in &cat.normalizers[s] {
            let perm = cat.engine.normalizer_perm(&n.element, site);
            let mut witness = None;
            match perm {
                Err(e) => witness = Some(e.to_string()),
                Ok(perm) => {
                    let map = CoordinateMap::permutation(&site.ctx, &perm)?;
                    for (b, r) in cat.basis.iter().zip(&restrictions) {
                        let moved = r[s].substitute(&map)?;
                        if moved != r[s] {
                            witness = Some(format!("{}: {} moves to {moved}", b.name, r[s]));
                            break;
                        }
                    }
                }
            }
            checks.push(CheckResult::new(format!("normalizer:{}:{}", site.label, n.name), witness.is_none(), witness));
        }
    }

    let max_deg = cat.sites.iter().map(|s| s.ctx.len() as u32).max().unwrap_or(0);
    let encoded: Option<Vec<(u32, Vec<KInvariant>)>> = match &cat.bound {
        Bound::Encoded(list) => Some(
            list.iter()
                .map(|(_, expr)| {
                    let v = eval_all(cat, expr)?;
                    let deg = v.iter().filter_map(|x| x.max_degree()).max().unwrap_or(0);
                    Ok((deg, v))
                })
                .collect::<Result<_>>()?,
        ),
        _ => None,
    };
    let mut dims = BTreeMap::new();
    let mut dim_witness = None;
    let mut span_witness = None;
    for d in 0..=max_deg {
        let basis_d: Vec<Vec<KInvariant>> = cat
            .basis
            .iter()
            .zip(&restrictions)
            .filter(|(b, _)| b.degree == d)
            .map(|(_, r)| homogeneous_part(r, d))
            .collect();
        let achieved = stacked_rank(&basis_d);
        let bound = match &encoded {
            Some(list) => {
                let list_d: Vec<Vec<KInvariant>> =
                    list.iter().filter(|(deg, _)| *deg == d).map(|(_, v)| homogeneous_part(v, d)).collect();
                let bound = stacked_rank(&list_d);
                let mut union = basis_d.clone();
                union.extend(list_d);
                let joint = stacked_rank(&union);
                if (joint != bound || joint != achieved) && span_witness.is_none() {
                    span_witness = Some(format!("degree {d}: basis rank {achieved}, list rank {bound}, joint {joint}"));
                }
                bound
            }
            None => constrained_dim(cat, d)?.unwrap_or(0),
        };
        if achieved != bound && dim_witness.is_none() {
            dim_witness = Some(format!("degree {d}: achieved {achieved}, bound {bound}"));
        }
        dims.insert(d, DimEntry { achieved, bound });
    }
    checks.push(CheckResult::new("dims", dim_witness.is_none(), dim_witness));
    if encoded.is_some() {
        checks.push(CheckResult::new("span", span_witness.is_none(), span_witness));
    }

    let rows = cat
        .basis
        .iter()
        .zip(&restrictions)
        .map(|(b, r)| RestrictionRow {
            name: b.name.clone(),
            values: labels.iter().zip(r).map(|(l, x)| SiteValue { site: l.clone(), value: x.to_string() }).collect(),
        })
        .collect();
    let mut warnings = cat.warnings.clone();
    if let Some(sys) = &cat.engine.sys {
        warnings.extend(sys.warnings.iter().cloned());
    }
    Ok(BasisReport {
        type_label: cat.spec.to_string(),
        rank: cat.spec.rank,
        basis: cat.basis.iter().map(|b| BasisEntry { name: b.name.clone(), degree: b.degree }).collect(),
        checks,
        dims,
        restrictions: rows,
        constraint_set: cat.constraint_set.clone(),
        warnings,
    })
}

/// The dimension bound in one degree.
pub fn upper_bound_dim(spec: TypeSpec, degree: u32, options: &EngineOptions) -> Result<usize> {
    let cat = Catalog::build(spec, options)?;
    if let Some(b) = constrained_dim(&cat, degree)? {
        return Ok(b);
    }
    let Bound::Encoded(list) = &cat.bound else { unreachable!("non-encoded bounds are computed above") };
    let mut fams = Vec::new();
    for (_, expr) in list {
        let v = eval_all(&cat, expr)?;
        if v.iter().any(|x| !x.homogeneous(degree).is_zero()) {
            fams.push(homogeneous_part(&v, degree));
        }
    }
    Ok(stacked_rank(&fams))
}

/// A product `a_i · b_j` with one factor per model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub name: String,
    pub degree: u32,
    pub factors: Vec<NamedInvariant>,
}

/// All products of the two bases, ordered by degree, then by position in `a`, then in `b`.
pub fn tensor_basis(a: &[NamedInvariant], b: &[NamedInvariant]) -> Vec<TensorElement> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let name = match (x.name.as_str(), y.name.as_str()) {
                ("1", "1") => "1".to_string(),
                ("1", n) | (n, "1") => n.to_string(),
                (p, q) => format!("{p}{q}"),
            };
            out.push(TensorElement { name, degree: x.degree + y.degree, factors: vec![x.clone(), y.clone()] });
        }
    }
    out.sort_by_key(|e| e.degree);
    out
}

/// Restriction of a tensor element; `catalogs[k]` supplies factor `k` at its site `sites[k]`.
pub fn restrict_tensor(catalogs: &[&Catalog], sites: &[usize], elem: &TensorElement) -> Result<KInvariant> {
    if catalogs.len() != elem.factors.len() || sites.len() != catalogs.len() {
        return Err(Error::Invalid("one catalog and site per factor".into()));
    }
    let mut acc: Option<KInvariant> = None;
    for ((cat, &s), f) in catalogs.iter().zip(sites).zip(&elem.factors) {
        let r = cat.engine.restrict(f, &cat.sites[s])?;
        acc = Some(match acc {
            None => r,
            Some(p) => p.tensor(&r),
        });
    }
    acc.ok_or_else(|| Error::Invalid("empty tensor element".into()))
}

/// Fold certificate of the default coset space over the type's Ω representative,
/// compared with the expected `e_m` support.
#[derive(Clone, Debug, Serialize)]
pub struct FullcheckReport {
    #[serde(rename = "type")]
    pub type_label: String,
    pub cosets: usize,
    pub orbits: usize,
    pub min_fold: u32,
    pub fold_counts: BTreeMap<u32, usize>,
    pub all_simply_transitive: bool,
    pub expected: String,
    pub support_match: bool,
    /// For `D_n`: every orbit is `O_J` with `|J|` even and `A_k = {a_i}_{i∈J} ∪ {b_j}_{j∉J}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern_ok: Option<bool>,
    pub cached: bool,
}

impl FullcheckReport {
    pub fn passed(&self) -> bool {
        self.all_simply_transitive && self.support_match && self.pattern_ok.unwrap_or(true)
    }
}

pub fn fullcheck(spec: TypeSpec, options: &EngineOptions) -> Result<FullcheckReport> {
    let spec = spec.canonical();
    let cat = match (spec.family, spec.rank) {
        (Family::E, 7) | (Family::E, 8) => Catalog::build(spec, options)?,
        (Family::D, n) if n % 2 == 0 => Catalog::build(spec, options)?,
        _ => return Err(Error::Unsupported(format!("fullcheck is defined for E7, E8 and D_n with n even, not {spec}"))),
    };
    let site = &cat.sites[0];
    let (space, tables) = cat.engine.site_tables(site)?;
    let (_, cached) = cat.engine.coset_space()?;
    let cert = full_check(&tables, space.size());
    let mut pattern_ok = None;
    let expected = match spec.family {
        Family::E => {
            let id = if spec.rank == 7 { "table:f3" } else { "table:f4" };
            let line = cat.tables.iter().find(|t| t.id == id).ok_or_else(|| Error::Invalid(format!("{id} missing")))?;
            cat.eval_tensor(&line.rhs, 0)?
        }
        _ => {
            let m = spec.rank / 2;
            pattern_ok = Some(d_pattern_ok(&cat, &cert, m)?);
            dn_e(m, &site.ctx)?
        }
    };
    let mut fold_counts = BTreeMap::new();
    for o in &cert.orbits {
        *fold_counts.entry(o.fold()).or_insert(0) += 1;
    }
    Ok(FullcheckReport {
        type_label: spec.to_string(),
        cosets: space.size(),
        orbits: cert.orbits.len(),
        min_fold: cert.min_fold,
        fold_counts,
        all_simply_transitive: cert.passed(),
        expected: expected.to_string(),
        support_match: compare_support(&cert, &expected),
        pattern_ok,
        cached,
    })
}

fn d_pattern_ok(cat: &Catalog, cert: &FoldCertificate, m: usize) -> Result<bool> {
    let sys = cat.engine.sys()?;
    let (space, _) = cat.engine.coset_space()?;
    let vectors = coset_vectors(sys, &space)?;
    let orbits: Vec<Vec<usize>> = cert.orbits.iter().map(|o| o.members.clone()).collect();
    let patterns = d_pattern_sets(&vectors, &orbits, m);
    if orbits.len() != 1 << (m - 1) {
        return Ok(false);
    }
    let mut seen = std::collections::BTreeSet::new();
    for (o, pat) in cert.orbits.iter().zip(&patterns) {
        if pat.len() != 1 {
            return Ok(false);
        }
        let j = *pat.keys().next().expect("one pattern");
        if j.count_ones() % 2 != 0 || !seen.insert(j) {
            return Ok(false);
        }
        let want: u64 = (0..m).fold(0, |acc, i| acc | if j >> i & 1 == 1 { 1 << (2 * i) } else { 1 << (2 * i + 1) });
        if o.mask() != want || !o.passed() {
            return Ok(false);
        }
    }
    Ok(true)
}
