//! Per-type generators, Ω representatives, stated formulas, restriction tables and
//! normalizer constraint sets.

use std::sync::Arc;

use crate::kinv::{Context, KInvariant, Monomial};
use crate::permgroup::{e_type_normalizer, perm_of_word, RootPermutation};
use crate::rootsys::{frame_a, frame_b, RootVector};
use crate::{Error, Family, Result, TypeSpec};

use super::formulas::{an_w, bn_u, bn_uv, bn_v, dn_e, dn_phi, dn_u_minus_e, i2_square, lambda_sum};
use super::{b2_dihedral_indices, Engine, EngineOptions, NamedInvariant, PointModel, Recipe, Site};

/// A sum of tensor products: each term holds one factor per sub-model engine.
pub type TensorSum = Vec<Vec<NamedInvariant>>;

#[derive(Clone, Debug)]
pub struct Normalizer {
    pub name: String,
    pub element: RootPermutation,
}

/// A stated closed formula for one invariant at one site.
#[derive(Clone, Debug)]
pub struct FormulaCheck {
    pub id: String,
    pub inv: NamedInvariant,
    pub site: usize,
    pub expected: KInvariant,
}

/// An equality between two recipes of the same type.
#[derive(Clone, Debug)]
pub struct LocalIdentity {
    pub id: String,
    pub lhs: NamedInvariant,
    pub rhs: NamedInvariant,
}

/// One displayed restriction line: `res(lhs)` equals an expression in the sub-model.
#[derive(Clone, Debug)]
pub struct TableLine {
    pub id: String,
    pub lhs: NamedInvariant,
    pub rhs: TensorSum,
}

/// The product of smaller Weyl groups through which restriction tables are expressed.
pub struct SubModel {
    pub catalogs: Vec<Catalog>,
    /// For each site, the site index in each factor's catalog.
    pub site_map: Vec<Vec<usize>>,
}

pub enum Bound {
    /// Normalizer-orbit sums on each site, no relations between sites.
    Orbits,
    /// Orbit sums plus the cross-`L` and `B2`-block relations of the `B_n` layout.
    BnCross { n: usize },
    /// An explicit list in the sub-model spanning the constrained submodule.
    Encoded(Vec<(String, TensorSum)>),
}

pub struct Catalog {
    pub spec: TypeSpec,
    pub engine: Engine,
    pub sites: Vec<Site>,
    pub basis: Vec<NamedInvariant>,
    /// Every named invariant, including generators outside the basis.
    pub named: Vec<NamedInvariant>,
    pub expected_count: usize,
    pub formulas: Vec<FormulaCheck>,
    pub identities: Vec<LocalIdentity>,
    pub tables: Vec<TableLine>,
    pub sub: Option<SubModel>,
    pub bound: Bound,
    /// Per site, the recorded normalizer generators.
    pub normalizers: Vec<Vec<Normalizer>>,
    pub constraint_set: String,
    pub warnings: Vec<String>,
}

impl Catalog {
    pub fn build(spec: TypeSpec, options: &EngineOptions) -> Result<Self> {
        let spec = spec.canonical();
        spec.validate()?;
        match spec.family {
            Family::A => a_catalog(spec.rank, options),
            Family::B | Family::C => b_catalog(spec.rank, options),
            Family::D => d_catalog(spec.rank, options),
            Family::F => f4_catalog(options),
            Family::E => e_catalog(spec.rank, options),
            Family::G | Family::I(_) => dihedral_catalog(spec, options),
        }
    }

    pub fn get(&self, name: &str) -> Result<NamedInvariant> {
        self.named
            .iter()
            .find(|n| n.name == name)
            .cloned()
            .ok_or_else(|| Error::Invalid(format!("{} has no invariant named {name}", self.spec)))
    }

    /// Evaluates a sub-model expression at a site, in the site's coordinates.
    pub fn eval_tensor(&self, expr: &TensorSum, site: usize) -> Result<KInvariant> {
        let sub = self.sub.as_ref().ok_or_else(|| Error::Invalid(format!("{} has no sub-model", self.spec)))?;
        let ctx = &self.sites[site].ctx;
        let mut acc = KInvariant::zero(ctx);
        for term in expr {
            if term.len() != sub.catalogs.len() {
                return Err(Error::Invalid("tensor term has the wrong number of factors".into()));
            }
            let mut prod: Option<KInvariant> = None;
            for (k, factor) in term.iter().enumerate() {
                let cat = &sub.catalogs[k];
                let r = cat.engine.restrict(factor, &cat.sites[sub.site_map[site][k]])?;
                prod = Some(match prod {
                    None => r,
                    Some(p) => p.tensor(&r),
                });
            }
            if let Some(p) = prod {
                acc.add_assign(&p.with_context(ctx)?)?;
            }
        }
        Ok(acc)
    }

    fn empty(spec: TypeSpec, engine: Engine, sites: Vec<Site>) -> Self {
        let normalizers = vec![Vec::new(); sites.len()];
        Self {
            spec,
            engine,
            sites,
            basis: Vec::new(),
            named: Vec::new(),
            expected_count: 0,
            formulas: Vec::new(),
            identities: Vec::new(),
            tables: Vec::new(),
            sub: None,
            bound: Bound::Orbits,
            normalizers,
            constraint_set: String::new(),
            warnings: Vec::new(),
        }
    }

    fn add_named(&mut self, inv: &NamedInvariant) {
        if !self.named.iter().any(|n| n.name == inv.name) {
            self.named.push(inv.clone());
        }
    }

    fn set_basis(&mut self, basis: Vec<NamedInvariant>) {
        for b in &basis {
            self.add_named(b);
        }
        self.basis = basis;
    }

    fn formula(&mut self, inv: &NamedInvariant, site: usize, expected: KInvariant) {
        self.add_named(inv);
        self.formulas.push(FormulaCheck { id: format!("formula:{}@{}", inv.name, self.sites[site].label), inv: inv.clone(), site, expected });
    }

    fn normalizer(&mut self, site: usize, name: String, word: &[RootVector]) -> Result<()> {
        let element = perm_of_word(self.engine.sys()?, word)?;
        self.normalizers[site].push(Normalizer { name, element });
        Ok(())
    }
}

pub fn generators_for(spec: TypeSpec) -> Result<Vec<NamedInvariant>> {
    Ok(Catalog::build(spec, &EngineOptions::default())?.basis)
}

fn e(i: usize, n: usize) -> RootVector {
    RootVector::e(i, n)
}

fn linear(name: &str, degree: u32, modified: bool) -> NamedInvariant {
    NamedInvariant::new(name, degree, Recipe::Linear { degree, modified })
}

fn points(name: &str, model: PointModel, degree: u32, modified: bool) -> NamedInvariant {
    NamedInvariant::new(name, degree, Recipe::Points { model, degree, modified })
}

fn two_power(k: u32) -> NamedInvariant {
    let mut inv = NamedInvariant::one();
    for _ in 0..k {
        inv = NamedInvariant::new("", inv.degree + 1, Recipe::TimesTwo(Box::new(inv)));
    }
    inv.name = format!("{{2}}^{k}");
    inv
}

/// `s_{e_{2i-1}-e_{2j-1}} s_{e_{2i}-e_{2j}}`: swaps the pairs `(a_i, b_i)` and `(a_j, b_j)`.
fn pair_swap(i: usize, j: usize, n: usize) -> Vec<RootVector> {
    vec![e(2 * i - 1, n).sub(&e(2 * j - 1, n)), e(2 * i, n).sub(&e(2 * j, n))]
}

/// `s_{e_p} s_{e_q}` written as `s_{e_p - e_q} s_{e_p + e_q}`.
fn double_sign(p: usize, q: usize, n: usize) -> Vec<RootVector> {
    vec![e(p, n).sub(&e(q, n)), e(p, n).add(&e(q, n))]
}

fn b_site(l: usize, n: usize) -> Site {
    let mut roots = Vec::new();
    for i in 1..=l {
        roots.push(frame_a(i, n));
        roots.push(frame_b(i, n));
    }
    for k in 2 * l + 1..=n {
        roots.push(e(k, n));
    }
    Site { label: format!("P{l}"), roots, dihedral: Vec::new(), ctx: Context::frame(l, n) }
}

fn paired_site(m: usize, dim: usize, ctx: Arc<Context>) -> Site {
    let mut roots = Vec::new();
    for i in 1..=m {
        roots.push(frame_a(i, dim));
        roots.push(frame_b(i, dim));
    }
    Site { label: "P".into(), roots, dihedral: Vec::new(), ctx }
}

/// `N_L` in `W(B_n)`: pair swaps, permutations of the free axes, and `s_{e_{2i}}`.
fn b_normalizers(cat: &mut Catalog, site: usize, l: usize, n: usize) -> Result<()> {
    for i in 1..=l {
        for j in i + 1..=l {
            cat.normalizer(site, format!("swap(a{i}b{i},a{j}b{j})"), &pair_swap(i, j, n))?;
        }
    }
    for i in 2 * l + 1..=n {
        for j in i + 1..=n {
            cat.normalizer(site, format!("s(e{i}-e{j})"), &[e(i, n).sub(&e(j, n))])?;
        }
    }
    for i in 1..=l {
        cat.normalizer(site, format!("s(e{})", 2 * i), &[e(2 * i, n)])?;
    }
    Ok(())
}

/// The `D_{rank}` normalizer family of `P(a_1, …, b_m)` written in ambient dimension `dim`.
fn d_normalizers(cat: &mut Catalog, site: usize, m: usize, rank: usize, dim: usize) -> Result<()> {
    for i in 1..=m {
        for j in i + 1..=m {
            cat.normalizer(site, format!("swap(a{i}b{i},a{j}b{j})"), &pair_swap(i, j, dim))?;
            cat.normalizer(site, format!("s(e{})s(e{})", 2 * i - 1, 2 * j - 1), &double_sign(2 * i - 1, 2 * j - 1, dim))?;
        }
    }
    if rank % 2 == 1 {
        for i in 1..=m {
            cat.normalizer(site, format!("s(e{})s(e{rank})", 2 * i - 1), &double_sign(2 * i - 1, rank, dim))?;
        }
    }
    Ok(())
}

fn a_catalog(n: usize, options: &EngineOptions) -> Result<Catalog> {
    if n > 15 {
        return Err(Error::Unsupported(format!("A{n}: rank above 15")));
    }
    let spec = TypeSpec::new(Family::A, n);
    let engine = Engine::new(spec, options.clone())?;
    let k = n.div_ceil(2);
    let dim = n + 1;
    let roots: Vec<RootVector> = (1..=k).map(|i| frame_a(i, dim)).collect();
    let ctx = Context::new((1..=k).map(|i| format!("a{i}")));
    let site = Site { label: "P".into(), roots, dihedral: Vec::new(), ctx: ctx.clone() };
    let mut cat = Catalog::empty(spec, engine, vec![site]);
    let mut basis = vec![NamedInvariant::one()];
    for d in 1..=k as u32 {
        let w = points(&format!("w{d}"), PointModel::Lines, d, false);
        cat.formula(&w, 0, an_w(k, d, &ctx));
        basis.push(w);
    }
    cat.set_basis(basis);
    cat.expected_count = k + 1;
    for i in 1..=k {
        for j in i + 1..=k {
            cat.normalizer(0, format!("swap(a{i},a{j})"), &pair_swap(i, j, dim))?;
        }
    }
    cat.constraint_set = "pair permutations of the frame".into();
    cat.bound = Bound::Orbits;
    Ok(cat)
}

fn u_gen(d: u32) -> NamedInvariant {
    points(&format!("u{d}"), PointModel::Lines, d, true)
}

fn b_catalog(n: usize, options: &EngineOptions) -> Result<Catalog> {
    if n > 10 {
        return Err(Error::Unsupported(format!("B{n}: rank above 10")));
    }
    let spec = TypeSpec::new(Family::B, n);
    let engine = Engine::new(spec, options.clone())?;
    let m = n / 2;
    let sites: Vec<Site> = (0..=m).map(|l| b_site(l, n)).collect();
    let mut cat = Catalog::empty(spec, engine, sites);
    let u: Vec<NamedInvariant> = (0..=n as u32).map(|d| if d == 0 { NamedInvariant::one() } else { u_gen(d) }).collect();
    let v: Vec<NamedInvariant> = (0..=n as u32)
        .map(|d| if d == 0 { NamedInvariant::one() } else { points(&format!("v{d}"), PointModel::SignedAxes, d, true) })
        .collect();
    let product = |d: usize, r: usize| NamedInvariant::product(&[v[r].clone(), u[d].clone()]);
    for l in 0..=m {
        let ctx = cat.sites[l].ctx.clone();
        for d in 1..=n {
            cat.formula(&u[d], l, bn_u(l, n, d as u32, &ctx)?);
            cat.formula(&v[d], l, bn_v(l, n, d as u32, &ctx)?);
        }
        for d in 1..=m {
            for f in 1..=n {
                cat.formula(&product(d, f), l, bn_uv(l, n, d as u32, f as u32, &ctx)?);
            }
        }
    }
    let mut basis = Vec::new();
    for d in 0..=n {
        for r in (2 * d).saturating_sub(n)..=d {
            basis.push(product(d - r, r));
        }
    }
    cat.expected_count = basis.len();
    cat.set_basis(basis);
    for l in 0..=m {
        b_normalizers(&mut cat, l, l, n)?;
    }
    cat.constraint_set = "N_L: pair swaps, free-axis permutations, s(e_2i)".into();
    cat.bound = Bound::BnCross { n };
    Ok(cat)
}

/// The `D_n` basis names and recipes, shared with the E-type sub-models.
fn d_catalog(n: usize, options: &EngineOptions) -> Result<Catalog> {
    if !(4..=10).contains(&n) {
        return Err(Error::Unsupported(format!("D{n}: supported ranks are 4..=10")));
    }
    let spec = TypeSpec::new(Family::D, n);
    let engine = Engine::new(spec, options.clone())?;
    let m = n / 2;
    let ctx = Context::frame(m, 2 * m);
    let site = paired_site(m, n, ctx.clone());
    let mut cat = Catalog::empty(spec, engine, vec![site]);
    let u: Vec<NamedInvariant> = (0..=m as u32).map(|d| if d == 0 { NamedInvariant::one() } else { u_gen(d) }).collect();
    let v: Vec<NamedInvariant> = (0..=m as u32)
        .map(|i| {
            if i == 0 {
                NamedInvariant::one()
            } else {
                points(&format!("v{}", 2 * i), PointModel::SignedAxes, 2 * i, false)
            }
        })
        .collect();
    for d in 1..=m {
        cat.formula(&u[d], 0, dn_phi(m, d as u32, 0, &ctx)?);
    }
    for i in 1..=m {
        cat.formula(&v[i], 0, dn_phi(m, 2 * i as u32, i as u32, &ctx)?);
    }
    let even = n.is_multiple_of(2);
    let em = NamedInvariant::new(format!("e{m}"), m as u32, Recipe::Fold { m: m as u32 });
    let um_minus_em = NamedInvariant::named_sum(format!("u{m}-e{m}"), &[u[m].clone(), em.clone()]);
    if even {
        cat.formula(&em, 0, dn_e(m, &ctx)?);
        cat.formula(&um_minus_em, 0, dn_u_minus_e(m, &ctx)?);
    }
    let mut basis = Vec::new();
    for d in 0..=2 * m {
        for i in d.saturating_sub(m)..=d / 2 {
            if even && i == 0 && d == m {
                basis.push(um_minus_em.clone());
                basis.push(em.clone());
                continue;
            }
            let inv = NamedInvariant::product(&[v[i].clone(), u[d - 2 * i].clone()]);
            if i > 0 && d > 2 * i {
                cat.formula(&inv, 0, dn_phi(m, d as u32, i as u32, &ctx)?);
            }
            basis.push(inv);
        }
    }
    cat.expected_count = basis.len();
    cat.set_basis(basis);
    d_normalizers(&mut cat, 0, m, n, n)?;
    cat.constraint_set = "pair swaps, s(e_2i-1)s(e_2j-1), and for odd n s(e_2i-1)s(e_n)".into();
    cat.bound = Bound::Orbits;
    Ok(cat)
}

fn f4_catalog(options: &EngineOptions) -> Result<Catalog> {
    let spec = TypeSpec::new(Family::F, 4);
    let engine = Engine::new(spec, options.clone())?;
    let sites: Vec<Site> = (0..=2).map(|l| b_site(l, 4)).collect();
    let mut cat = Catalog::empty(spec, engine, sites);
    let w: Vec<NamedInvariant> =
        (0..=4u32).map(|d| if d == 0 { NamedInvariant::one() } else { linear(&format!("w{d}"), d, false) }).collect();
    let v1 = points("v1", PointModel::Psi, 1, true);
    let u1 = NamedInvariant::named_sum("u1", &[w[1].clone(), v1.clone()]);
    let hat2 = NamedInvariant::named_sum("w^2", &[w[2].clone(), u1.times_two()]);
    let u1v1 = NamedInvariant::named_product("u1v1", &[u1.clone(), v1.clone()]);
    let hat3 = NamedInvariant::named_sum("w^3", &[w[3].clone(), u1v1.times_two()]);
    let hat2u1 = NamedInvariant::named_product("w^2u1", &[hat2.clone(), u1.clone()]);
    let hat4 = NamedInvariant::named_sum("w^4", &[w[4].clone(), hat2u1.times_two()]);
    let hats = [w[1].clone(), hat2.clone(), hat3.clone(), hat4.clone()];
    for l in 0..=2 {
        let ctx = cat.sites[l].ctx.clone();
        for (k, h) in hats.iter().enumerate() {
            cat.formula(h, l, lambda_sum(l, 4, k as u32 + 1, &ctx)?);
        }
    }
    let basis = vec![
        NamedInvariant::one(),
        w[1].clone(),
        v1.clone(),
        w[2].clone(),
        NamedInvariant::product(&[v1.clone(), w[1].clone()]),
        w[3].clone(),
        NamedInvariant::product(&[v1.clone(), w[2].clone()]),
        w[4].clone(),
    ];
    cat.expected_count = 8;
    cat.set_basis(basis);
    for inv in [&u1, &u1v1, &hat2u1] {
        cat.add_named(inv);
    }
    let b4 = Catalog::build(TypeSpec::new(Family::B, 4), options)?;
    let g = |name: &str| b4.get(name);
    let one = |name: &str| -> Result<TensorSum> { Ok(vec![vec![g(name)?]]) };
    let sum = |names: &[&str]| -> Result<TensorSum> { names.iter().map(|n| Ok(vec![g(n)?])).collect() };
    let hat2_minus = NamedInvariant::named_sum("w^2-u1v1", &[hat2.clone(), u1v1.clone()]);
    let hat3_minus = NamedInvariant::named_sum("w^3-w^2u1", &[hat3.clone(), hat2u1.clone()]);
    let lines = vec![
        (u1.clone(), one("u1")?),
        (v1.clone(), one("v1")?),
        (u1v1.clone(), one("v1u1")?),
        (hat2_minus, sum(&["u2", "v2"])?),
        (hat2u1.clone(), one("v2u1")?),
        (hat3_minus, one("v3")?),
        (hat4.clone(), one("v4")?),
    ];
    for (lhs, rhs) in lines {
        cat.tables.push(TableLine { id: format!("table:{}", lhs.name), lhs, rhs });
    }
    let encoded = vec![
        ("1".to_string(), one("1")?),
        ("u1".into(), one("u1")?),
        ("v1".into(), one("v1")?),
        ("u2+v2".into(), sum(&["u2", "v2"])?),
        ("v1u1".into(), one("v1u1")?),
        ("v2u1".into(), one("v2u1")?),
        ("v3".into(), one("v3")?),
        ("v4".into(), one("v4")?),
    ];
    cat.bound = Bound::Encoded(encoded);
    cat.sub = Some(SubModel { catalogs: vec![b4], site_map: vec![vec![0], vec![1], vec![2]] });
    for l in 0..=2 {
        b_normalizers(&mut cat, l, l, 4)?;
    }
    cat.normalizer(2, "s(1/2(e1+e2+e3+e4))".into(), &[RootVector::from_doubled(vec![1, 1, 1, 1])])?;
    cat.constraint_set = "N_L of B4, plus s(1/2(e1+e2+e3+e4)) at P2".into();
    Ok(cat)
}

fn e_catalog(n: usize, options: &EngineOptions) -> Result<Catalog> {
    let spec = TypeSpec::new(Family::E, n);
    let engine = Engine::new(spec, options.clone())?;
    let (m, labels): (usize, Vec<String>) = match n {
        6 => (2, Context::frame(2, 4).labels.clone()),
        7 => {
            let mut l = Context::frame(3, 6).labels.clone();
            l.push("a4".into());
            (3, l)
        }
        _ => (4, Context::frame(4, 8).labels.clone()),
    };
    let ctx = Context::new(labels);
    let mut site = paired_site(m, 8, ctx);
    if n == 7 {
        site.roots.push(e(7, 8).sub(&e(8, 8)));
    }
    let mut cat = Catalog::empty(spec, engine, vec![site]);
    let top = match n {
        6 => 4,
        7 => 7,
        _ => 8,
    };
    let w: Vec<NamedInvariant> =
        (0..=top).map(|d| if d == 0 { NamedInvariant::one() } else { linear(&format!("w~{d}"), d, true) }).collect();
    let mut basis = w.clone();
    let fold = match n {
        7 => Some(NamedInvariant::new("f3", 3, Recipe::Fold { m: 3 })),
        8 => Some(NamedInvariant::new("f4", 4, Recipe::Fold { m: 4 })),
        _ => None,
    };
    let f3w1 = fold.as_ref().map(|f| NamedInvariant::named_product("f3w~1", &[f.clone(), w[1].clone()]));
    if let Some(f) = &fold {
        basis.push(f.clone());
    }
    if n == 7 {
        basis.extend(f3w1.clone());
    }
    cat.expected_count = basis.len();
    cat.set_basis(basis);

    let d_rank = match n {
        6 => 5,
        7 => 6,
        _ => 8,
    };
    let d = Catalog::build(TypeSpec::new(Family::D, d_rank), options)?;
    let mut catalogs = vec![d];
    if n == 7 {
        catalogs.push(Catalog::build(TypeSpec::new(Family::A, 1), options)?);
    }
    let dget = |name: &str| catalogs[0].get(name);
    let x = if n == 7 { Some(catalogs[1].get("w1")?) } else { None };
    let one = NamedInvariant::one();
    // A term is a D-side name and whether the A1 coordinate x is attached.
    let expr = |terms: &[(&str, bool)]| -> Result<TensorSum> {
        terms
            .iter()
            .map(|&(name, with_x)| {
                let mut t = vec![dget(name)?];
                if let Some(xx) = &x {
                    t.push(if with_x { xx.clone() } else { one.clone() });
                }
                Ok(t)
            })
            .collect()
    };
    let lines: Vec<(NamedInvariant, TensorSum)> = match n {
        6 => {
            let w4_minus = NamedInvariant::named_sum("w~4-{2}^4", &[w[4].clone(), two_power(4)]);
            vec![
                (w[1].clone(), expr(&[("u1", false)])?),
                (w[2].clone(), expr(&[("u2", false), ("v2", false)])?),
                (w[3].clone(), expr(&[("v2u1", false)])?),
                (w4_minus, expr(&[("v4", false)])?),
            ]
        }
        7 => {
            let f3 = fold.clone().expect("f3");
            vec![
                (w[1].clone(), expr(&[("u1", false), ("1", true)])?),
                (w[2].clone(), expr(&[("u2", false), ("v2", false), ("u1", true)])?),
                (w[3].clone(), expr(&[("u3", false), ("v2u1", false), ("u2", true), ("v2", true)])?),
                (w[4].clone(), expr(&[("v2u2", false), ("v4", false), ("u3", true), ("v2u1", true)])?),
                (w[5].clone(), expr(&[("v4u1", false), ("v4", true), ("v2u2", true)])?),
                (w[6].clone(), expr(&[("v6", false), ("v4u1", true)])?),
                (w[7].clone(), expr(&[("v6", true)])?),
                (f3, expr(&[("v2u1", false), ("u3-e3", false), ("u2", true)])?),
                (f3w1.clone().expect("f3w~1"), expr(&[("v2u2", false), ("v2u1", true), ("e3", true)])?),
            ]
        }
        _ => {
            let f4 = fold.clone().expect("f4");
            vec![
                (w[1].clone(), expr(&[("u1", false)])?),
                (w[2].clone(), expr(&[("u2", false), ("v2", false)])?),
                (w[3].clone(), expr(&[("u3", false), ("v2u1", false)])?),
                (w[4].clone(), expr(&[("u4", false), ("v2u2", false), ("v4", false)])?),
                (w[5].clone(), expr(&[("v2u3", false), ("v4u1", false)])?),
                (w[6].clone(), expr(&[("v4u2", false), ("v6", false)])?),
                (w[7].clone(), expr(&[("v6u1", false)])?),
                (w[8].clone(), expr(&[("v8", false)])?),
                (f4, expr(&[("v2u2", false), ("u4-e4", false)])?),
            ]
        }
    };
    for (lhs, rhs) in lines {
        cat.tables.push(TableLine { id: format!("table:{}", lhs.name), lhs, rhs });
    }
    let encoded: Vec<(&str, Vec<(&str, bool)>)> = match n {
        6 => vec![
            ("1", vec![("1", false)]),
            ("u1", vec![("u1", false)]),
            ("u2+v2", vec![("u2", false), ("v2", false)]),
            ("v2u1", vec![("v2u1", false)]),
            ("v4", vec![("v4", false)]),
        ],
        7 => vec![
            ("1", vec![("1", false)]),
            ("u1+x", vec![("u1", false), ("1", true)]),
            ("v2+u2+u1x", vec![("v2", false), ("u2", false), ("u1", true)]),
            ("u1v2+(u3-e3)+u2x", vec![("v2u1", false), ("u3-e3", false), ("u2", true)]),
            ("e3+v2x", vec![("e3", false), ("v2", true)]),
            ("v4+(u3-e3)x", vec![("v4", false), ("u3-e3", true)]),
            ("u2v2+u1v2x+e3x", vec![("v2u2", false), ("v2u1", true), ("e3", true)]),
            ("v4x+u2v2x+v4u1", vec![("v4", true), ("v2u2", true), ("v4u1", false)]),
            ("v4u1x+v6", vec![("v4u1", true), ("v6", false)]),
            ("v6x", vec![("v6", true)]),
        ],
        _ => vec![
            ("1", vec![("1", false)]),
            ("u1", vec![("u1", false)]),
            ("u2+v2", vec![("u2", false), ("v2", false)]),
            ("u3+v2u1", vec![("u3", false), ("v2u1", false)]),
            ("e4+v4", vec![("e4", false), ("v4", false)]),
            ("(u4-e4)+v2u2", vec![("u4-e4", false), ("v2u2", false)]),
            ("v2u3+v4u1", vec![("v2u3", false), ("v4u1", false)]),
            ("v4u2+v6", vec![("v4u2", false), ("v6", false)]),
            ("v6u1", vec![("v6u1", false)]),
            ("v8", vec![("v8", false)]),
        ],
    };
    let encoded = encoded.into_iter().map(|(name, terms)| Ok((name.to_string(), expr(&terms)?))).collect::<Result<Vec<_>>>()?;
    cat.bound = Bound::Encoded(encoded);
    let factors = catalogs.len();
    cat.sub = Some(SubModel { catalogs, site_map: vec![vec![0; factors]] });

    let g = e_type_normalizer(cat.engine.sys()?)?;
    cat.normalizers[0].push(Normalizer { name: "g".into(), element: g });
    d_normalizers(&mut cat, 0, m, d_rank, 8)?;
    cat.constraint_set = format!("g and the D{d_rank} normalizer family");
    Ok(cat)
}

fn dihedral_label(k: usize) -> String {
    let rot = k / 2;
    if rot == 0 {
        "t".into()
    } else {
        format!("s{rot}t")
    }
}

fn dihedral_catalog(spec: TypeSpec, options: &EngineOptions) -> Result<Catalog> {
    let n = spec.dihedral_n().expect("dihedral");
    let engine = Engine::new(spec, options.clone())?;
    if n == 4 {
        let mut sites: Vec<Site> = (0..=1).map(|l| b_site(l, 2)).collect();
        for s in &mut sites {
            s.dihedral = b2_dihedral_indices(&engine, &s.roots)?;
        }
        let mut cat = Catalog::empty(spec, engine, sites);
        let w1 = linear("w1", 1, false);
        let w2 = linear("w2", 2, false);
        let v1 = NamedInvariant::new("v1", 1, Recipe::NGon { degree: 1, modified: true });
        for l in 0..=1 {
            let ctx = cat.sites[l].ctx.clone();
            for inv in [&w1, &v1, &w2] {
                let expected = i2_square(&inv.name, l, &ctx).expect("stated");
                cat.formula(inv, l, expected);
            }
        }
        let v1_axes = points("v1[signed axes]", PointModel::SignedAxes, 1, true);
        cat.identities.push(LocalIdentity { id: "identity:v1=signed-axes".into(), lhs: v1.clone(), rhs: v1_axes });
        cat.set_basis(vec![NamedInvariant::one(), w1, v1, w2]);
        cat.expected_count = 4;
        for l in 0..=1 {
            b_normalizers(&mut cat, l, l, 2)?;
        }
        cat.constraint_set = "N_L of B2".into();
        cat.bound = Bound::BnCross { n: 2 };
        return Ok(cat);
    }
    if n.is_multiple_of(4) {
        return Err(Error::Unsupported(format!(
            "{spec}: invariant bases for n divisible by 4 are only available for n = 4"
        )));
    }
    let group = engine.dihedral()?;
    let sp = group.splitting()?;
    let ctx = Context::new(sp.frame.iter().map(|&k| dihedral_label(k)));
    let site = Site { label: "P".into(), roots: Vec::new(), dihedral: sp.frame.clone(), ctx: ctx.clone() };
    let mut cat = Catalog::empty(spec, engine, vec![site]);
    let k = ctx.len();
    let mut masks: Vec<u64> = (0u64..1 << k).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut basis = Vec::new();
    for mask in masks {
        if mask == 0 {
            basis.push(NamedInvariant::one());
            continue;
        }
        let labels: Vec<&str> = crate::kinv::bits(mask).map(|i| ctx.labels[i].as_str()).collect();
        let inv = NamedInvariant::new(format!("x[{}]", labels.join(",")), mask.count_ones(), Recipe::Pullback { mask });
        cat.formula(&inv, 0, KInvariant::monomial(&ctx, Monomial::from_mask(mask)));
        basis.push(inv);
    }
    cat.expected_count = 1 << k;
    cat.set_basis(basis);
    cat.constraint_set = "none".into();
    cat.warnings.push(format!("{spec}: basis given by pullbacks of x_I along the projection G -> P"));
    Ok(cat)
}
