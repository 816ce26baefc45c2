//! Quadratic forms attached to frame embeddings and their Stiefel-Whitney,
//! Pfister and `e_m` images.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::f2::SubspaceBasis;
use crate::kinv::{bits, Context, KInvariant, Monomial};
use crate::linalg::{gram_schmidt, mat_mul, rref, transpose, Matrix};
use crate::rootsys::RootVector;
use crate::scalar::two_power_square_class;
use crate::{BigRational, Error, Result};

/// `2^two_exp · ∏_{i ∈ mask} t_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DiagonalEntry {
    pub two_exp: i64,
    pub mask: u64,
}

impl DiagonalEntry {
    /// `(a mod 2)·s + Σ t_i`.
    pub fn class(&self, ctx: &Arc<Context>) -> KInvariant {
        let mut terms: Vec<Monomial> = bits(self.mask).map(Monomial::var).collect();
        if self.two_exp.rem_euclid(2) == 1 {
            terms.push(Monomial::S);
        }
        KInvariant::from_terms(ctx, terms)
    }
}

/// A diagonal form over torsor coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalForm {
    pub ctx: Arc<Context>,
    pub entries: Vec<DiagonalEntry>,
}

impl DiagonalForm {
    pub fn new(ctx: &Arc<Context>, entries: Vec<DiagonalEntry>) -> Self {
        Self { ctx: ctx.clone(), entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `⟨2^a⟩ ⊗ q`.
    pub fn scaled(&self, a: i64) -> Self {
        let entries = self.entries.iter().map(|e| DiagonalEntry { two_exp: e.two_exp + a, mask: e.mask }).collect();
        Self { ctx: self.ctx.clone(), entries }
    }

    /// Orthogonal sum.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().copied());
        Ok(Self { ctx: self.ctx.clone(), entries })
    }

    /// Entries sorted, for comparisons up to reordering.
    pub fn sorted_entries(&self) -> Vec<(i64, u64)> {
        let mut v: Vec<(i64, u64)> = self.entries.iter().map(|e| (e.two_exp.rem_euclid(2), e.mask)).collect();
        v.sort_unstable();
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "labels": self.ctx.labels,
            "entries": self.entries.iter().map(|e| (e.two_exp, e.mask)).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                let mut s = String::new();
                match e.two_exp {
                    0 => {}
                    1 => s.push('2'),
                    a => s.push_str(&format!("2^{a}")),
                }
                for i in bits(e.mask) {
                    s.push_str(&self.ctx.labels[i]);
                }
                if s.is_empty() {
                    s.push('1');
                }
                s
            })
            .collect();
        write!(f, "⟨{}⟩", parts.join(", "))
    }
}

fn reflection_matrix(v: &RootVector) -> Matrix<BigRational> {
    let n = v.rank();
    let d: Vec<BigRational> = v.doubled.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let vv: BigRational = d.iter().map(|x| x * x).sum();
    let two = BigRational::from_integer(2.into());
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let delta = if i == j { BigRational::one() } else { BigRational::zero() };
                    delta - &two * &d[i] * &d[j] / &vv
                })
                .collect()
        })
        .collect()
}

/// Simultaneous diagonalization of the commuting reflections at `frame`, one
/// variable per frame vector.
pub fn form_of_linear_action(frame: &[RootVector], ctx: &Arc<Context>) -> Result<DiagonalForm> {
    if frame.len() != ctx.len() {
        return Err(Error::ContextMismatch);
    }
    let Some(n) = frame.first().map(|v| v.rank()) else {
        return Err(Error::Invalid("empty frame".into()));
    };
    let mats: Vec<Matrix<BigRational>> = frame.iter().map(reflection_matrix).collect();
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            if mat_mul(a, b) != mat_mul(b, a) {
                return Err(Error::Invalid("frame reflections do not commute".into()));
            }
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let ident: Matrix<BigRational> = crate::linalg::identity(n);
    let mut entries = Vec::new();
    for chi in 0u64..1 << frame.len() {
        let mut proj = ident.clone();
        for (j, m) in mats.iter().enumerate() {
            let sign = if chi >> j & 1 == 1 { -BigRational::one() } else { BigRational::one() };
            let factor: Matrix<BigRational> = (0..n)
                .map(|r| (0..n).map(|c| (&ident[r][c] + &sign * &m[r][c]) * &half).collect())
                .collect();
            proj = mat_mul(&proj, &factor);
        }
        let (rows, _) = rref(&transpose(&proj));
        if rows.is_empty() {
            continue;
        }
        for v in gram_schmidt(&rows) {
            let norm: BigRational = v.iter().map(|x| x * x).sum();
            let a = two_power_square_class(&norm).ok_or_else(|| Error::UnsupportedNorm(norm.to_string()))?;
            entries.push(DiagonalEntry { two_exp: a, mask: chi });
        }
    }
    if entries.len() != n {
        return Err(Error::Invalid("character spaces do not span".into()));
    }
    Ok(DiagonalForm::new(ctx, entries))
}

/// One orbit of a permutation action as a scaled Pfister form `⟨2^f⟩ ⊗ ⊗_j ⟨⟨-δ_j⟩⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDecomp {
    pub members: Vec<usize>,
    pub fold: u32,
    /// Each `δ_j` as a mask of frame coordinates whose product it is.
    pub delta_masks: Vec<u64>,
    pub scale_exponent: u32,
}

#[derive(Clone, Debug)]
pub struct OrbitPfisterDecomp {
    pub ctx: Arc<Context>,
    pub orbits: Vec<OrbitDecomp>,
}

impl OrbitPfisterDecomp {
    pub fn min_fold(&self) -> Option<u32> {
        self.orbits.iter().map(|o| o.fold).min()
    }

    pub fn dim(&self) -> usize {
        self.orbits.iter().map(|o| 1usize << o.fold).sum()
    }

    /// Expands every orbit into its `2^f` diagonal entries `2^f ∏_{j ∈ S} δ_j`.
    pub fn to_diagonal(&self) -> DiagonalForm {
        let mut entries = Vec::new();
        for o in &self.orbits {
            for sub in 0u64..1 << o.fold {
                let mask = bits(sub).fold(0u64, |m, j| m ^ o.delta_masks[j]);
                entries.push(DiagonalEntry { two_exp: o.scale_exponent as i64, mask });
            }
        }
        DiagonalForm::new(&self.ctx, entries)
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut orbits = self.orbits.clone();
        orbits.extend(other.orbits.iter().cloned());
        Ok(Self { ctx: self.ctx.clone(), orbits })
    }
}

/// Orbit decomposition of commuting involutions given by point images.
pub fn form_of_permutation_action(points: usize, gens: &[Vec<usize>], ctx: &Arc<Context>) -> Result<OrbitPfisterDecomp> {
    if gens.len() != ctx.len() || gens.len() > 64 {
        return Err(Error::ContextMismatch);
    }
    if gens.iter().any(|g| g.len() != points || g.iter().any(|&x| x >= points)) {
        return Err(Error::Invalid("generator images out of range".into()));
    }
    let mut label: Vec<Option<u64>> = vec![None; points];
    let mut orbits = Vec::new();
    for start in 0..points {
        if label[start].is_some() {
            continue;
        }
        label[start] = Some(0);
        let mut members = vec![start];
        let mut kernel = SubspaceBasis::new();
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let lx = label[x].unwrap_or(0);
            for (j, g) in gens.iter().enumerate() {
                let y = g[x];
                let ly = lx ^ 1 << j;
                match label[y] {
                    None => {
                        label[y] = Some(ly);
                        members.push(y);
                        queue.push_back(y);
                    }
                    Some(old) => {
                        kernel.insert(old ^ ly);
                    }
                }
            }
        }
        members.sort_unstable();
        let k = gens.len() as u32;
        let fold = k - kernel.dim() as u32;
        if members.len() as u64 != 1u64 << fold {
            return Err(Error::NotSimplyTransitive { size: members.len(), quotient: 1usize << fold });
        }
        let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        let free = all & !kernel.pivot_mask();
        let reduced: Vec<u64> = (0..k as usize).map(|i| kernel.reduce(1 << i)).collect();
        let delta_masks = bits(free)
            .map(|j| (0..k as usize).filter(|&i| reduced[i] >> j & 1 == 1).fold(0u64, |m, i| m | 1 << i))
            .collect();
        orbits.push(OrbitDecomp { members, fold, delta_masks, scale_exponent: fold });
    }
    Ok(OrbitPfisterDecomp { ctx: ctx.clone(), orbits })
}

/// `∏ (1 + class(entry))`.
pub fn total_sw(form: &DiagonalForm) -> KInvariant {
    let one = KInvariant::one(&form.ctx);
    let mut acc = one.clone();
    for e in &form.entries {
        let factor = one.add(&e.class(&form.ctx)).expect("same context");
        acc = acc.mul(&factor).expect("same context");
    }
    acc
}

/// The degree-`d` Stiefel-Whitney class.
pub fn sw(form: &DiagonalForm, d: u32) -> KInvariant {
    total_sw(form).homogeneous(d)
}

/// Total modified class: `w(⟨2⟩⊗q)` in even dimension, `(1+s)·w(⟨2⟩⊗q)` in odd dimension,
/// the closed form of `w̃_{d+1} = w_{d+1}(⟨2⟩⊗q) + {2} w̃_d`.
pub fn modified_total(form: &DiagonalForm) -> KInvariant {
    let twisted = total_sw(&form.scaled(1));
    if form.dim().is_multiple_of(2) {
        twisted
    } else {
        twisted.add(&twisted.times_s()).expect("same context")
    }
}

/// `w̃_d` by the defining recursion.
pub fn modified_sw(form: &DiagonalForm, d: u32) -> KInvariant {
    let twisted = total_sw(&form.scaled(1));
    if form.dim().is_multiple_of(2) {
        return twisted.homogeneous(d);
    }
    let mut prev = KInvariant::one(&form.ctx);
    for k in 1..=d {
        prev = twisted.homogeneous(k).add(&prev.times_s()).expect("same context");
    }
    prev
}

/// `Σ_{orbits of fold m} ∏_j {δ_j}`; folds above `m` contribute nothing, 2-power scales
/// are dropped. For `m = 0` every orbit counts, giving the orbit count mod 2.
pub fn e_fold(decomp: &OrbitPfisterDecomp, m: u32) -> Result<KInvariant> {
    if let Some(min) = decomp.min_fold() {
        if min < m {
            return Err(Error::FoldTooSmall { found: min, required: m });
        }
    }
    let ctx = &decomp.ctx;
    if m == 0 {
        return Ok(if decomp.orbits.len() % 2 == 1 { KInvariant::one(ctx) } else { KInvariant::zero(ctx) });
    }
    let mut out = KInvariant::zero(ctx);
    for o in decomp.orbits.iter().filter(|o| o.fold == m) {
        let mut term = KInvariant::one(ctx);
        for &dm in &o.delta_masks {
            let class = KInvariant::from_terms(ctx, bits(dm).map(Monomial::var));
            term = term.mul(&class)?;
        }
        out.add_assign(&term)?;
    }
    Ok(out)
}

/// Polynomials in formal square roots `√ε_i`, keyed by exponent vectors.
type SqrtPoly = BTreeMap<Vec<u8>, i64>;

fn sqrt_mul(a: &SqrtPoly, b: &SqrtPoly) -> SqrtPoly {
    let mut out = SqrtPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Outcome of the symbolic Gram computation for the vectors
/// `(v_p)_ℓ = (-1)^{|b(p) ∩ b(ℓ)|} ∏_{i ∈ b(p)} √ε_i`.
#[derive(Clone, Debug, Serialize)]
pub struct GramVerdict {
    pub n: u32,
    pub orthogonal: bool,
    pub diagonal_ok: bool,
    pub failures: Vec<(usize, usize)>,
}

impl GramVerdict {
    pub fn passed(&self) -> bool {
        self.orthogonal && self.diagonal_ok
    }
}

pub fn pfister_gram_check(n: u32) -> Result<GramVerdict> {
    if n > 4 {
        return Err(Error::Invalid("symbolic Gram check limited to n ≤ 4".into()));
    }
    let size = 1usize << n;
    let nn = n as usize;
    let vector = |p: usize| -> Vec<SqrtPoly> {
        let exps: Vec<u8> = (0..nn).map(|i| (p >> i & 1) as u8).collect();
        (0..size)
            .map(|l| {
                let sign = if (p & l).count_ones().is_multiple_of(2) { 1 } else { -1 };
                SqrtPoly::from([(exps.clone(), sign)])
            })
            .collect()
    };
    let vs: Vec<Vec<SqrtPoly>> = (0..size).map(vector).collect();
    let mut failures = Vec::new();
    let mut orthogonal = true;
    let mut diagonal_ok = true;
    for p in 0..size {
        for q in p..size {
            let mut acc = SqrtPoly::new();
            for l in 0..size {
                for (e, c) in sqrt_mul(&vs[p][l], &vs[q][l]) {
                    *acc.entry(e).or_insert(0) += c;
                }
            }
            acc.retain(|_, c| *c != 0);
            let ok = if p == q {
                let e: Vec<u8> = (0..nn).map(|i| 2 * (p >> i & 1) as u8).collect();
                acc == SqrtPoly::from([(e, size as i64)])
            } else {
                acc.is_empty()
            };
            if !ok {
                failures.push((p, q));
                if p == q {
                    diagonal_ok = false;
                } else {
                    orthogonal = false;
                }
            }
        }
    }
    Ok(GramVerdict { n, orthogonal, diagonal_ok, failures })
}

/// `w_r · w_s = binom(r+s, r) · w_{r+s}` for generic diagonal forms with `{-1} = 0`.
pub fn sw_product_coefficient(r: u32, s: u32) -> bool {
    // Lucas: binom(r+s, r) is odd iff r and s share no binary digit.
    r & s == 0
}
