//! The exterior algebra over `F_2` on torsor coordinates, extended by a formal
//! nilpotent degree-one generator `s = {2}`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::f2::{rank_with_certificate, BitVec};
use crate::{Error, Result};

/// `{2}^two · ∏_{i ∈ mask} t_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial {
    pub two: bool,
    pub mask: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { two: false, mask: 0 };
    pub const S: Monomial = Monomial { two: true, mask: 0 };

    pub fn var(i: usize) -> Self {
        Self { two: false, mask: 1 << i }
    }

    pub fn from_mask(mask: u64) -> Self {
        Self { two: false, mask }
    }

    pub fn degree(&self) -> u32 {
        self.mask.count_ones() + self.two as u32
    }

    /// `None` when the product vanishes.
    pub fn mul(&self, other: &Self) -> Option<Self> {
        if self.mask & other.mask != 0 || (self.two && other.two) {
            None
        } else {
            Some(Self { two: self.two || other.two, mask: self.mask | other.mask })
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.mask, self.two).cmp(&(other.degree(), other.mask, other.two))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Names of the coordinates, e.g. `a1`, `b1`, `e3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    pub labels: Vec<String>,
}

impl Context {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Arc<Self> {
        Arc::new(Self { labels: labels.into_iter().map(Into::into).collect() })
    }

    /// Coordinates of `P_L` in rank `n`: `a1,b1,…,aL,bL,e(2L+1),…,en`.
    pub fn frame(l: usize, n: usize) -> Arc<Self> {
        let mut labels = Vec::with_capacity(n);
        for i in 1..=l {
            labels.push(format!("a{i}"));
            labels.push(format!("b{i}"));
        }
        for e in 2 * l + 1..=n {
            labels.push(format!("e{e}"));
        }
        Arc::new(Self { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Concatenation; labels of `other` are kept unless they collide, then suffixed.
    pub fn concat(&self, other: &Context) -> Arc<Self> {
        let mut labels = self.labels.clone();
        for l in &other.labels {
            if labels.contains(l) {
                labels.push(format!("{l}'"));
            } else {
                labels.push(l.clone());
            }
        }
        Arc::new(Self { labels })
    }
}

/// An `F_2`-linear combination of monomials over a fixed context.
#[derive(Clone, Debug)]
pub struct KInvariant {
    ctx: Arc<Context>,
    terms: BTreeSet<Monomial>,
}

impl PartialEq for KInvariant {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx) && self.terms == other.terms
    }
}

impl Eq for KInvariant {}

fn same_ctx(a: &Arc<Context>, b: &Arc<Context>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::ContextMismatch)
    }
}

impl KInvariant {
    pub fn zero(ctx: &Arc<Context>) -> Self {
        Self { ctx: ctx.clone(), terms: BTreeSet::new() }
    }

    pub fn one(ctx: &Arc<Context>) -> Self {
        Self::monomial(ctx, Monomial::ONE)
    }

    pub fn s(ctx: &Arc<Context>) -> Self {
        Self::monomial(ctx, Monomial::S)
    }

    pub fn var(ctx: &Arc<Context>, i: usize) -> Self {
        Self::monomial(ctx, Monomial::var(i))
    }

    pub fn monomial(ctx: &Arc<Context>, m: Monomial) -> Self {
        Self { ctx: ctx.clone(), terms: BTreeSet::from([m]) }
    }

    /// Sum of monomials; repeated monomials cancel in pairs.
    pub fn from_terms(ctx: &Arc<Context>, terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut out = Self::zero(ctx);
        for m in terms {
            out.toggle(m);
        }
        out
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &other.ctx)?;
        let terms = self.terms.symmetric_difference(&other.terms).copied().collect();
        Ok(Self { ctx: self.ctx.clone(), terms })
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        same_ctx(&self.ctx, &other.ctx)?;
        for m in &other.terms {
            self.toggle(*m);
        }
        Ok(())
    }

    /// Exterior product; terms with a repeated variable or `s²` vanish.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &other.ctx)?;
        let mut out = Self::zero(&self.ctx);
        for a in &self.terms {
            for b in &other.terms {
                if let Some(m) = a.mul(b) {
                    out.toggle(m);
                }
            }
        }
        Ok(out)
    }

    /// Multiplication by `s`.
    pub fn times_s(&self) -> Self {
        let terms = self.terms.iter().filter(|m| !m.two).map(|m| Monomial { two: true, mask: m.mask }).collect();
        Self { ctx: self.ctx.clone(), terms }
    }

    pub fn homogeneous(&self, d: u32) -> Self {
        let terms = self.terms.iter().filter(|m| m.degree() == d).copied().collect();
        Self { ctx: self.ctx.clone(), terms }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.iter().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.iter().all(|m| m.degree() == d)
    }

    /// Drops every term containing `s`.
    pub fn mod_s(&self) -> Self {
        let terms = self.terms.iter().filter(|m| !m.two).copied().collect();
        Self { ctx: self.ctx.clone(), terms }
    }

    /// The variable masks of the `s`-free part.
    pub fn support_mod_s(&self) -> BTreeSet<u64> {
        self.terms.iter().filter(|m| !m.two).map(|m| m.mask).collect()
    }

    pub fn substitute(&self, map: &CoordinateMap) -> Result<Self> {
        same_ctx(&self.ctx, &map.source)?;
        let images: Vec<Option<KInvariant>> = map.rows.iter().map(|r| r.map(|row| map.image_of_row(row))).collect();
        let mut out = Self::zero(&map.target);
        for m in &self.terms {
            let mut acc = if m.two { Self::s(&map.target) } else { Self::one(&map.target) };
            for i in bits(m.mask) {
                let img = images.get(i).cloned().flatten().ok_or(Error::UncoveredVariable(i))?;
                acc = acc.mul(&img)?;
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc)?;
        }
        Ok(out)
    }

    /// Places `self` and `other` in the concatenated context and multiplies.
    pub fn tensor(&self, other: &Self) -> Self {
        let ctx = self.ctx.concat(&other.ctx);
        let shift = self.ctx.len();
        let mut out = Self::zero(&ctx);
        for a in &self.terms {
            for b in &other.terms {
                let shifted = Monomial { two: b.two, mask: b.mask << shift };
                if let Some(m) = a.mul(&shifted) {
                    out.toggle(m);
                }
            }
        }
        out
    }

    /// Moves into another context with identical variable layout.
    pub fn with_context(&self, ctx: &Arc<Context>) -> Result<Self> {
        if ctx.len() != self.ctx.len() {
            return Err(Error::ContextMismatch);
        }
        Ok(Self { ctx: ctx.clone(), terms: self.terms.clone() })
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.mask == 0 && !m.two {
            return "1".into();
        }
        let mut s = String::new();
        if m.two {
            s.push_str("{2}");
        }
        for i in bits(m.mask) {
            s.push('{');
            s.push_str(&self.ctx.labels[i]);
            s.push('}');
        }
        s
    }

    /// Sorted `[mask, two]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "labels": self.ctx.labels,
            "terms": self.terms.iter().map(|m| (m.mask, m.two)).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for KInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| self.render_monomial(m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Indices of set bits, ascending.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Images of source coordinates as (target mask, `s` offset).
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    pub source: Arc<Context>,
    pub target: Arc<Context>,
    pub rows: Vec<Option<(u64, bool)>>,
}

impl CoordinateMap {
    pub fn new(source: &Arc<Context>, target: &Arc<Context>, rows: Vec<Option<(u64, bool)>>) -> Result<Self> {
        if rows.len() != source.len() {
            return Err(Error::Invalid(format!("{} rows for {} coordinates", rows.len(), source.len())));
        }
        let limit = if target.len() >= 64 { u64::MAX } else { (1u64 << target.len()) - 1 };
        if rows.iter().flatten().any(|(m, _)| m & !limit != 0) {
            return Err(Error::Invalid("row references a missing target coordinate".into()));
        }
        Ok(Self { source: source.clone(), target: target.clone(), rows })
    }

    pub fn identity(ctx: &Arc<Context>) -> Self {
        Self { source: ctx.clone(), target: ctx.clone(), rows: (0..ctx.len()).map(|i| Some((1u64 << i, false))).collect() }
    }

    /// Relabels coordinates: source `i` goes to target `perm[i]`.
    pub fn permutation(ctx: &Arc<Context>, perm: &[usize]) -> Result<Self> {
        Self::new(ctx, ctx, perm.iter().map(|&j| Some((1u64 << j, false))).collect())
    }

    fn image_of_row(&self, (mask, two): (u64, bool)) -> KInvariant {
        let mut terms: Vec<Monomial> = bits(mask).map(Monomial::var).collect();
        if two {
            terms.push(Monomial::S);
        }
        KInvariant::from_terms(&self.target, terms)
    }

    /// `then ∘ self`: substituting by the result equals substituting by `self`, then `then`.
    pub fn compose(&self, then: &CoordinateMap) -> Result<CoordinateMap> {
        same_ctx(&self.target, &then.source)?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let (mask, two) = (*r)?;
                let mut out = (0u64, two);
                for j in bits(mask) {
                    let (m, t) = then.rows.get(j).copied().flatten()?;
                    out.0 ^= m;
                    out.1 ^= t;
                }
                Some(out)
            })
            .collect();
        Ok(CoordinateMap { source: self.source.clone(), target: then.target.clone(), rows })
    }
}

/// An index `(A, B, C, E)` of the monomial basis of `Inv(P_L)`; sets are 1-based bit masks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct XIndex {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub e: u64,
}

impl XIndex {
    pub fn degree(&self) -> u32 {
        self.a.count_ones() + self.b.count_ones() + 2 * self.c.count_ones() + self.e.count_ones()
    }

    fn set_bits(m: u64) -> impl Iterator<Item = usize> {
        bits(m).map(|i| i + 1)
    }

    pub fn validate(&self, l: usize, n: usize) -> Result<()> {
        let lmask = if l == 0 { 0 } else { (1u64 << l) - 1 };
        let bad = |why: &str| Err(Error::InvalidIndex(format!("{self:?}: {why}")));
        if (self.a | self.b | self.c) & !lmask != 0 {
            return bad("A, B, C must lie in [1, L]");
        }
        if self.a & self.b != 0 || self.a & self.c != 0 || self.b & self.c != 0 {
            return bad("A, B, C must be disjoint");
        }
        if Self::set_bits(self.e).any(|e| e <= 2 * l || e > n) {
            return bad("E must lie in [2L+1, n]");
        }
        Ok(())
    }

    /// The monomial mask in the coordinates of [`Context::frame`].
    pub fn mask(&self, l: usize, n: usize) -> Result<u64> {
        self.validate(l, n)?;
        let mut m = 0u64;
        for i in Self::set_bits(self.a) {
            m |= 1 << (2 * (i - 1));
        }
        for i in Self::set_bits(self.b) {
            m |= 1 << (2 * i - 1);
        }
        for i in Self::set_bits(self.c) {
            m |= 0b11 << (2 * (i - 1));
        }
        for e in Self::set_bits(self.e) {
            m |= 1 << (e - 1);
        }
        Ok(m)
    }
}

/// `x^L_{A,B,C,E}`.
pub fn x_basis(idx: XIndex, l: usize, n: usize, ctx: &Arc<Context>) -> Result<KInvariant> {
    if ctx.len() != n {
        return Err(Error::ContextMismatch);
    }
    Ok(KInvariant::monomial(ctx, Monomial::from_mask(idx.mask(l, n)?)))
}

/// All of `Λ^d_L` in rank `n`, sorted.
pub fn lambda(d: u32, l: usize, n: usize) -> Vec<XIndex> {
    let mut out = Vec::new();
    let lsets = 1u64 << l;
    let emask_all: u64 = (2 * l + 1..=n).fold(0, |m, e| m | 1 << (e - 1));
    let mut e_subsets = vec![0u64];
    for e in bits(emask_all) {
        let more: Vec<u64> = e_subsets.iter().map(|s| s | 1 << e).collect();
        e_subsets.extend(more);
    }
    for c in 0..lsets {
        for a in 0..lsets {
            if a & c != 0 {
                continue;
            }
            for b in 0..lsets {
                if b & (a | c) != 0 {
                    continue;
                }
                for &e in &e_subsets {
                    let idx = XIndex { a, b, c, e };
                    if idx.degree() == d {
                        out.push(idx);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Elementary symmetric polynomial of degree `d` in the listed variables.
pub fn elementary(ctx: &Arc<Context>, vars: &[usize], d: usize) -> KInvariant {
    let mut out = KInvariant::zero(ctx);
    let k = vars.len();
    if d > k {
        return out;
    }
    for sub in 0u64..1 << k {
        if sub.count_ones() as usize == d {
            let mask = bits(sub).fold(0u64, |m, j| m | 1 << vars[j]);
            out.toggle(Monomial::from_mask(mask));
        }
    }
    out
}

/// Result of a mod-`s` rank computation.
#[derive(Clone, Debug, Serialize)]
pub struct IndependenceVerdict {
    pub independent: bool,
    pub rank: usize,
    /// Positions of a nontrivial vanishing combination mod `s`, if dependent.
    pub dependency: Option<Vec<usize>>,
}

/// Rank of the `s`-reduced vectors. A family whose reduction mod `s` is independent
/// is independent over `F_2[s]/(s²)`: that ring is local with maximal ideal `(s)`.
pub fn linear_independence(vs: &[KInvariant]) -> Result<IndependenceVerdict> {
    if let Some(first) = vs.first() {
        for v in vs {
            same_ctx(&first.ctx, &v.ctx)?;
        }
    }
    let rows = stacked_mod_s(&vs.iter().map(std::slice::from_ref).collect::<Vec<_>>());
    let cert = rank_with_certificate(&rows);
    Ok(IndependenceVerdict { independent: cert.rank == vs.len(), rank: cert.rank, dependency: cert.dependency })
}

/// Stacks each family of invariants (one per row, possibly over different contexts)
/// into bit vectors over a shared monomial index, mod `s`.
pub fn stacked_mod_s(families: &[&[KInvariant]]) -> Vec<BitVec> {
    let parts = families.first().map_or(0, |f| f.len());
    let mut columns: Vec<BTreeMap<u64, usize>> = vec![BTreeMap::new(); parts];
    for fam in families {
        for (p, inv) in fam.iter().enumerate() {
            for m in inv.support_mod_s() {
                let next = columns[p].len();
                columns[p].entry(m).or_insert(next);
            }
        }
    }
    let offsets: Vec<usize> = columns.iter().scan(0, |acc, c| {
        let o = *acc;
        *acc += c.len();
        Some(o)
    }).collect();
    let width = columns.iter().map(|c| c.len()).sum::<usize>();
    families
        .iter()
        .map(|fam| {
            let mut v = BitVec::zeros(width.max(1));
            for (p, inv) in fam.iter().enumerate() {
                for m in inv.support_mod_s() {
                    v.set(offsets[p] + columns[p][&m]);
                }
            }
            v
        })
        .collect()
}

/// One sum per orbit of the variable permutations on the monomial set.
pub fn orbit_sums(ctx: &Arc<Context>, monomials: &[Monomial], perms: &[Vec<usize>]) -> Result<Vec<KInvariant>> {
    let set: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let act = |p: &[usize], m: &Monomial| Monomial { two: m.two, mask: bits(m.mask).fold(0u64, |acc, i| acc | 1 << p[i]) };
    for p in perms {
        if p.len() != ctx.len() {
            return Err(Error::ContextMismatch);
        }
        for m in monomials {
            if !set.contains_key(&act(p, m)) {
                return Err(Error::Invalid("action does not preserve the monomial set".into()));
            }
        }
    }
    let mut seen = vec![false; monomials.len()];
    let mut out = Vec::new();
    for start in 0..monomials.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let m = monomials[orbit[head]];
            head += 1;
            for p in perms {
                let j = set[&act(p, &m)];
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                }
            }
        }
        out.push(KInvariant::from_terms(ctx, orbit.iter().map(|&i| monomials[i])));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx3() -> Arc<Context> {
        Context::new(["t1", "t2", "t3"])
    }

    #[test]
    fn squares_vanish() {
        let c = ctx3();
        let t1 = KInvariant::var(&c, 0);
        assert!(t1.mul(&t1).unwrap().is_zero());
        let s = KInvariant::s(&c);
        assert!(s.mul(&s).unwrap().is_zero());
    }

    #[test]
    fn expansion_with_s() {
        let c = ctx3();
        let one = KInvariant::one(&c);
        let s = KInvariant::s(&c);
        let t1 = KInvariant::var(&c, 0);
        let t2 = KInvariant::var(&c, 1);
        let f = one.add(&s).unwrap().add(&t1).unwrap();
        let g = one.add(&s).unwrap().add(&t2).unwrap();
        let got = f.mul(&g).unwrap();
        let expected = KInvariant::from_terms(
            &c,
            [
                Monomial::ONE,
                Monomial::var(0),
                Monomial::var(1),
                Monomial::from_mask(0b11),
                Monomial { two: true, mask: 1 },
                Monomial { two: true, mask: 2 },
            ],
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn context_mismatch() {
        let a = KInvariant::one(&ctx3());
        let b = KInvariant::one(&Context::new(["x"]));
        assert!(matches!(a.mul(&b), Err(Error::ContextMismatch)));
    }

    #[test]
    fn render() {
        let c = Context::frame(2, 4);
        let m = KInvariant::monomial(&c, Monomial { two: true, mask: 0b1001 });
        assert_eq!(m.to_string(), "{2}{a1}{b2}");
        assert_eq!(KInvariant::zero(&c).to_string(), "0");
        assert_eq!(KInvariant::one(&c).to_string(), "1");
    }

    #[test]
    fn substitution() {
        let c = ctx3();
        let t12 = KInvariant::monomial(&c, Monomial::from_mask(0b011));
        let map = CoordinateMap::new(&c, &c, vec![Some((0b101, false)), Some((0b010, false)), Some((0b100, false))]).unwrap();
        let got = t12.substitute(&map).unwrap();
        assert_eq!(got, KInvariant::from_terms(&c, [Monomial::from_mask(0b011), Monomial::from_mask(0b110)]));
        assert_eq!(t12.substitute(&CoordinateMap::identity(&c)).unwrap(), t12);
        let partial = CoordinateMap::new(&c, &c, vec![None, Some((1, false)), Some((1, false))]).unwrap();
        assert!(matches!(t12.substitute(&partial), Err(Error::UncoveredVariable(0))));
    }

    #[test]
    fn x_basis_examples() {
        let c = Context::frame(1, 3);
        assert_eq!(x_basis(XIndex { a: 0, b: 0, c: 0, e: 0 }, 1, 3, &c).unwrap(), KInvariant::one(&c));
        let x = x_basis(XIndex { a: 0, b: 0, c: 1, e: 0b100 }, 1, 3, &c).unwrap();
        assert_eq!(x.to_string(), "{a1}{b1}{e3}");
        assert!(x_basis(XIndex { a: 1, b: 1, c: 0, e: 0 }, 1, 3, &c).is_err());
        assert!(x_basis(XIndex { a: 0, b: 0, c: 0, e: 0b1 }, 1, 3, &c).is_err());
    }

    #[test]
    fn independence() {
        let c = ctx3();
        let v = |m: u64| KInvariant::monomial(&c, Monomial::from_mask(m));
        let ind = linear_independence(&[v(0), v(1), v(0b11)]).unwrap();
        assert!(ind.independent);
        let sum = |a: u64, b: u64| v(a).add(&v(b)).unwrap();
        let dep = linear_independence(&[sum(1, 2), sum(2, 4), sum(1, 4)]).unwrap();
        assert!(!dep.independent);
        assert_eq!(dep.dependency.unwrap().len(), 3);
    }

    #[test]
    fn dependence_mod_s_lifts() {
        // t1 and t1 + s t2 are dependent mod s; s·t1 + s·(t1 + s t2) = 0 over F2[s]/(s²).
        let c = ctx3();
        let a = KInvariant::var(&c, 0);
        let b = a.add(&KInvariant::monomial(&c, Monomial { two: true, mask: 2 })).unwrap();
        assert!(!linear_independence(&[a.clone(), b.clone()]).unwrap().independent);
        assert!(a.times_s().add(&b.times_s()).unwrap().is_zero());
    }

    #[test]
    fn orbit_sums_basic() {
        let c = ctx3();
        let ms: Vec<Monomial> = (0..3).map(Monomial::var).collect();
        assert_eq!(orbit_sums(&c, &ms, &[]).unwrap().len(), 3);
        let swap = vec![1, 0, 2];
        let sums = orbit_sums(&c, &ms, &[swap]).unwrap();
        assert_eq!(sums.len(), 2);
        assert!(orbit_sums(&c, &ms[..2], &[vec![2, 1, 0]]).is_err());
    }

    #[test]
    fn lambda_counts() {
        // Λ^1_1 in rank 3: {a1}, {b1}, {e3}.
        assert_eq!(lambda(1, 1, 3).len(), 3);
        assert_eq!(lambda(0, 2, 4).len(), 1);
    }
}
