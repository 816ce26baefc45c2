//! Named invariant generators per Weyl type, their restrictions to the Ω
//! representatives, and basis verification reports.

pub mod bounds;
pub mod catalog;
pub mod formulas;
pub mod report;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::cosets::{cache, f_restriction, CosetSpace};
use crate::forms::{form_of_linear_action, form_of_permutation_action, modified_sw, sw, DiagonalForm};
use crate::kinv::{Context, CoordinateMap, KInvariant, Monomial};
use crate::permgroup::dihedral::{b2_isomorphism, build_dihedral, DihedralGroup};
use crate::permgroup::{
    normalizer_action, perm_of_vector_reflection, OrthogonalFrame, RootPermutation, DEFAULT_ELEMENT_CAP,
    DEFAULT_FRAME_CAP,
};
use crate::rootsys::{build_root_system, inner4, reflect, RootSystem, RootVector};
use crate::{Error, Family, Result, TypeSpec};

pub use catalog::{generators_for, Catalog};
pub use report::{tensor_basis, upper_bound_dim, verify_basis, BasisReport};

/// How a permutation embedding sees a reflection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointModel {
    /// `W → S_n` on coordinate lines: `s_{±e_i±e_j}` ↦ `(i j)`, `s_{e_i}` ↦ identity.
    Lines,
    /// `W(B_n) → S_{2n}` on the signed axes `±e_i`.
    SignedAxes,
    /// `W(F4) → S_3` through the outer automorphisms of the `D4` subsystem.
    Psi,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Recipe {
    One,
    /// Stiefel-Whitney class of the reflection representation.
    Linear { degree: u32, modified: bool },
    /// Stiefel-Whitney class of a permutation representation.
    Points { model: PointModel, degree: u32, modified: bool },
    /// Stiefel-Whitney class of the dihedral action on the `n`-gon.
    NGon { degree: u32, modified: bool },
    /// `e_m` of the permutation form on the default coset space.
    Fold { m: u32 },
    /// `x_I` pulled back along `G → P`, with `I` a mask over the splitting frame.
    Pullback { mask: u64 },
    Sum(Vec<NamedInvariant>),
    Product(Vec<NamedInvariant>),
    TimesTwo(Box<NamedInvariant>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedInvariant {
    pub name: String,
    pub degree: u32,
    pub recipe: Recipe,
}

impl NamedInvariant {
    pub fn new(name: impl Into<String>, degree: u32, recipe: Recipe) -> Self {
        Self { name: name.into(), degree, recipe }
    }

    pub fn one() -> Self {
        Self::new("1", 0, Recipe::One)
    }

    /// Product with the factor names concatenated; constants are dropped.
    pub fn product(parts: &[NamedInvariant]) -> Self {
        let parts: Vec<NamedInvariant> = parts.iter().filter(|p| p.recipe != Recipe::One).cloned().collect();
        match parts.len() {
            0 => Self::one(),
            1 => parts[0].clone(),
            _ => {
                let name = parts.iter().map(|p| p.name.as_str()).collect::<String>();
                Self::named_product(name, &parts)
            }
        }
    }

    pub fn named_product(name: impl Into<String>, parts: &[NamedInvariant]) -> Self {
        let degree = parts.iter().map(|p| p.degree).sum();
        Self::new(name, degree, Recipe::Product(parts.to_vec()))
    }

    /// Sum of invariants of equal degree; the name joins the summands with `+`.
    pub fn sum(parts: &[NamedInvariant]) -> Self {
        let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("+");
        Self::named_sum(name, parts)
    }

    pub fn named_sum(name: impl Into<String>, parts: &[NamedInvariant]) -> Self {
        let degree = parts.first().map_or(0, |p| p.degree);
        Self::new(name, degree, Recipe::Sum(parts.to_vec()))
    }

    pub fn times_two(&self) -> Self {
        Self::new(format!("{{2}}{}", self.name), self.degree + 1, Recipe::TimesTwo(Box::new(self.clone())))
    }

    /// Degree bookkeeping of the recipe tree.
    pub fn is_consistent(&self) -> bool {
        match &self.recipe {
            Recipe::One => self.degree == 0,
            Recipe::Linear { degree, .. } | Recipe::Points { degree, .. } | Recipe::NGon { degree, .. } => {
                *degree == self.degree
            }
            Recipe::Fold { m } => *m == self.degree,
            Recipe::Pullback { mask } => mask.count_ones() == self.degree,
            Recipe::Sum(parts) => !parts.is_empty() && parts.iter().all(|p| p.degree == self.degree && p.is_consistent()),
            Recipe::Product(parts) => {
                parts.iter().map(|p| p.degree).sum::<u32>() == self.degree && parts.iter().all(|p| p.is_consistent())
            }
            Recipe::TimesTwo(inner) => inner.degree + 1 == self.degree && inner.is_consistent(),
        }
    }
}

/// An Ω representative: the frame roots (or dihedral reflections) and their coordinates.
#[derive(Clone, Debug)]
pub struct Site {
    pub label: String,
    pub roots: Vec<RootVector>,
    /// Dihedral element indices of the frame reflections, when the type has a dihedral model.
    pub dihedral: Vec<usize>,
    pub ctx: Arc<Context>,
}

#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub element_cap: usize,
    pub frame_cap: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self { element_cap: DEFAULT_ELEMENT_CAP, frame_cap: DEFAULT_FRAME_CAP, cache_dir: None }
    }
}

/// Restriction machinery for one type.
pub struct Engine {
    pub spec: TypeSpec,
    pub sys: Option<RootSystem>,
    pub dihedral: Option<DihedralGroup>,
    pub options: EngineOptions,
    cosets: Mutex<Option<(Arc<CosetSpace>, bool)>>,
    forms: Mutex<HashMap<String, DiagonalForm>>,
    folds: Mutex<HashMap<(u32, String), KInvariant>>,
}

impl Engine {
    pub fn new(spec: TypeSpec, options: EngineOptions) -> Result<Self> {
        let spec = spec.canonical();
        spec.validate()?;
        let (sys, dihedral) = match spec.family {
            Family::G | Family::I(_) => {
                let n = spec.dihedral_n().expect("dihedral");
                let group = build_dihedral(n)?;
                let sys = if n == 4 { Some(build_root_system(TypeSpec::new(Family::B, 2))?) } else { None };
                (sys, Some(group))
            }
            _ => (Some(build_root_system(spec)?), None),
        };
        Ok(Self {
            spec,
            sys,
            dihedral,
            options,
            cosets: Mutex::new(None),
            forms: Mutex::new(HashMap::new()),
            folds: Mutex::new(HashMap::new()),
        })
    }

    pub fn sys(&self) -> Result<&RootSystem> {
        self.sys.as_ref().ok_or_else(|| Error::Unsupported(format!("{} has no root geometry", self.spec)))
    }

    pub fn dihedral(&self) -> Result<&DihedralGroup> {
        self.dihedral.as_ref().ok_or_else(|| Error::Unsupported(format!("{} has no dihedral model", self.spec)))
    }

    /// The default coset space, loaded from or stored to the cache directory if set.
    /// The flag reports whether it came from the cache.
    pub fn coset_space(&self) -> Result<(Arc<CosetSpace>, bool)> {
        let mut guard = self.cosets.lock().expect("coset lock");
        if let Some(c) = guard.as_ref() {
            return Ok(c.clone());
        }
        let sys = self.sys()?;
        let u_gens = crate::cosets::default_u_gens(sys)?;
        let (space, cached) = cache::load_or_build(self.options.cache_dir.as_deref(), sys, &u_gens, self.options.element_cap)?;
        let entry = (Arc::new(space), cached);
        *guard = Some(entry.clone());
        Ok(entry)
    }

    /// Coset tables of the site's frame reflections.
    pub fn site_tables(&self, site: &Site) -> Result<(Arc<CosetSpace>, Vec<Vec<usize>>)> {
        let sys = self.sys()?;
        let (space, _) = self.coset_space()?;
        let frame = OrthogonalFrame::from_vectors(sys, &site.roots)?;
        let tables = space.frame_tables(sys, &frame)?;
        Ok((space, tables))
    }

    pub fn restrict(&self, inv: &NamedInvariant, site: &Site) -> Result<KInvariant> {
        let ctx = &site.ctx;
        let out = match &inv.recipe {
            Recipe::One => KInvariant::one(ctx),
            Recipe::Linear { degree, modified } => {
                let form = self.memo_form(site, "linear", || form_of_linear_action(&site.roots, ctx))?;
                class_of(&form, *degree, *modified)
            }
            Recipe::Points { model, degree, modified } => {
                let key = format!("{model:?}");
                let form = self.memo_form(site, &key, || {
                    let (points, gens) = self.point_images(*model, site)?;
                    Ok(form_of_permutation_action(points, &gens, ctx)?.to_diagonal())
                })?;
                class_of(&form, *degree, *modified)
            }
            Recipe::NGon { degree, modified } => {
                let form = self.memo_form(site, "ngon", || {
                    let g = self.dihedral()?;
                    if site.dihedral.len() != site.ctx.len() {
                        return Err(Error::Invalid(format!("site {} has no dihedral frame", site.label)));
                    }
                    let gens: Vec<Vec<usize>> = site
                        .dihedral
                        .iter()
                        .map(|&k| g.elements[k].images.iter().map(|&x| x as usize).collect())
                        .collect();
                    Ok(form_of_permutation_action(g.n as usize, &gens, ctx)?.to_diagonal())
                })?;
                class_of(&form, *degree, *modified)
            }
            Recipe::Fold { m } => {
                let key = (*m, site.label.clone());
                if let Some(v) = self.folds.lock().expect("fold lock").get(&key) {
                    return Ok(v.clone());
                }
                let (space, tables) = self.site_tables(site)?;
                let v = f_restriction(&tables, space.size(), *m, ctx)?;
                self.folds.lock().expect("fold lock").insert(key, v.clone());
                v
            }
            Recipe::Pullback { mask } => self.pullback(*mask, site)?,
            Recipe::Sum(parts) => {
                let mut acc = KInvariant::zero(ctx);
                for p in parts {
                    acc.add_assign(&self.restrict(p, site)?)?;
                }
                acc
            }
            Recipe::Product(parts) => {
                let mut acc = KInvariant::one(ctx);
                for p in parts {
                    acc = acc.mul(&self.restrict(p, site)?)?;
                }
                acc
            }
            Recipe::TimesTwo(inner) => self.restrict(inner, site)?.times_s(),
        };
        Ok(out)
    }

    fn memo_form(&self, site: &Site, kind: &str, build: impl FnOnce() -> Result<DiagonalForm>) -> Result<DiagonalForm> {
        let key = format!("{}/{kind}", site.label);
        if let Some(f) = self.forms.lock().expect("form lock").get(&key) {
            return Ok(f.clone());
        }
        let f = build()?;
        self.forms.lock().expect("form lock").insert(key, f.clone());
        Ok(f)
    }

    fn point_images(&self, model: PointModel, site: &Site) -> Result<(usize, Vec<Vec<usize>>)> {
        match model {
            PointModel::Lines => {
                let n = site.roots.first().map_or(0, |r| r.rank());
                let gens = site
                    .roots
                    .iter()
                    .map(|r| {
                        let support: Vec<usize> = (0..n).filter(|&i| r.doubled[i] != 0).collect();
                        let mut img: Vec<usize> = (0..n).collect();
                        match support.len() {
                            1 => {}
                            2 => img.swap(support[0], support[1]),
                            _ => return Err(Error::Unsupported(format!("{r} does not act on coordinate lines"))),
                        }
                        Ok(img)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((n, gens))
            }
            PointModel::SignedAxes => {
                let n = site.roots.first().map_or(0, |r| r.rank());
                let axes: Vec<RootVector> =
                    (1..=n).map(|i| RootVector::e(i, n)).chain((1..=n).map(|i| RootVector::e(i, n).neg())).collect();
                let gens = site
                    .roots
                    .iter()
                    .map(|r| {
                        axes.iter()
                            .map(|p| {
                                let q = reflect(r, p)?;
                                axes.iter().position(|a| *a == q).ok_or_else(|| {
                                    Error::Unsupported(format!("{r} does not permute the signed axes"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((2 * n, gens))
            }
            PointModel::Psi => {
                let sys = self.sys()?;
                let gens = site
                    .roots
                    .iter()
                    .map(|r| psi_f4(sys, &perm_of_vector_reflection(sys, r)?))
                    .collect::<Result<Vec<_>>>()?;
                Ok((3, gens))
            }
        }
    }

    /// `x_I` on the splitting frame, restricted along the projection `G → P`.
    fn pullback(&self, mask: u64, site: &Site) -> Result<KInvariant> {
        let g = self.dihedral()?;
        let sp = g.splitting()?;
        let source = Context::new((0..sp.frame.len()).map(|i| format!("p{i}")));
        let mut rows = vec![0u64; sp.frame.len()];
        for (j, &x) in site.dihedral.iter().enumerate() {
            let image = sp.p[sp.projection[x]];
            let coords = g
                .frame_coordinates(&sp.frame, image)
                .ok_or_else(|| Error::Invalid("projection leaves the splitting frame".into()))?;
            for (i, row) in rows.iter_mut().enumerate() {
                if coords >> i & 1 == 1 {
                    *row |= 1 << j;
                }
            }
        }
        let map = CoordinateMap::new(&source, &site.ctx, rows.into_iter().map(|r| Some((r, false))).collect())?;
        KInvariant::monomial(&source, Monomial::from_mask(mask)).substitute(&map)
    }

    /// Permutation of the site coordinates induced by a normalizing element.
    pub fn normalizer_perm(&self, g: &RootPermutation, site: &Site) -> Result<Vec<usize>> {
        let sys = self.sys()?;
        let frame = OrthogonalFrame::from_vectors(sys, &site.roots)?;
        normalizer_action(sys, g, &frame)
    }
}

fn class_of(form: &DiagonalForm, degree: u32, modified: bool) -> KInvariant {
    if modified {
        modified_sw(form, degree)
    } else {
        sw(form, degree)
    }
}

/// `ψ: W(F4) → S_3`. The long roots form a `D4` subsystem; `g` is corrected by `W(D4)`
/// until it fixes the positive system, then read off on the three outer simple roots.
pub fn psi_f4(sys: &RootSystem, g: &RootPermutation) -> Result<Vec<usize>> {
    if sys.spec != TypeSpec::new(Family::F, 4) {
        return Err(Error::Unsupported(format!("ψ is defined for F4, not {}", sys.spec)));
    }
    let e = |i: usize| RootVector::e(i, 4);
    let simple = [e(1).sub(&e(2)), e(2).sub(&e(3)), e(3).sub(&e(4)), e(3).add(&e(4))];
    let simple_idx = simple.iter().map(|r| sys.require(r)).collect::<Result<Vec<_>>>()?;
    let x = RootVector::from_doubled(vec![6, 4, 2, 0]);
    let positive = |i: usize| -> Result<bool> { Ok(inner4(&x, &sys.roots[i])? > 0) };
    let reflections: Vec<RootPermutation> =
        simple.iter().map(|r| perm_of_vector_reflection(sys, r)).collect::<Result<Vec<_>>>()?;
    let mut k = g.clone();
    for _ in 0..=sys.len() {
        let inv = k.inverse();
        let mut fixed = true;
        for (j, &b) in simple_idx.iter().enumerate() {
            let pre = inv.apply(b);
            if sys.roots[pre].norm4() != 8 {
                return Err(Error::NotNormalizing);
            }
            if !positive(pre)? {
                k = reflections[j].compose(&k);
                fixed = false;
                break;
            }
        }
        if fixed {
            let outer = [0usize, 2, 3];
            return outer
                .iter()
                .map(|&p| {
                    let img = k.apply(simple_idx[p]);
                    outer
                        .iter()
                        .position(|&q| simple_idx[q] == img)
                        .ok_or_else(|| Error::Invalid("corrected element does not permute the outer nodes".into()))
                })
                .collect();
        }
    }
    Err(Error::Invalid("positive-system correction did not terminate".into()))
}

/// Equality of two restrictions at every site.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityVerdict {
    pub holds: bool,
    /// `(site label, lhs, rhs)` at the first differing site.
    pub witness: Option<(String, String, String)>,
}

pub fn verify_identity(engine: &Engine, lhs: &NamedInvariant, rhs: &NamedInvariant, sites: &[Site]) -> Result<IdentityVerdict> {
    for site in sites {
        let a = engine.restrict(lhs, site)?;
        let b = engine.restrict(rhs, site)?;
        if a != b {
            return Ok(IdentityVerdict { holds: false, witness: Some((site.label.clone(), a.to_string(), b.to_string())) });
        }
    }
    Ok(IdentityVerdict { holds: true, witness: None })
}

/// The dihedral elements of the B2 reflections at `roots`, via the `I2(4) ≅ W(B2)` isomorphism.
pub(crate) fn b2_dihedral_indices(engine: &Engine, roots: &[RootVector]) -> Result<Vec<usize>> {
    let sys = engine.sys()?;
    let g = engine.dihedral()?;
    let images = b2_isomorphism(g, sys)?;
    roots
        .iter()
        .map(|r| {
            let p = perm_of_vector_reflection(sys, r)?;
            images.iter().position(|q| *q == p).ok_or_else(|| Error::Invalid(format!("{r} has no dihedral image")))
        })
        .collect()
}
