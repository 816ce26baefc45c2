//! Coset spaces `U\W` for reflection subgroups `U`, the action of frame subgroups on
//! them, and fold certificates.

pub mod cache;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::forms::{e_fold, form_of_permutation_action, OrbitPfisterDecomp};
use crate::kinv::{Context, KInvariant};
use crate::linalg::nullspace;
use crate::permgroup::{enumerate_subgroup, known_weyl_order, perm_of_reflection, simple_reflections, OrthogonalFrame, RootPermutation};
use crate::rootsys::{inner4, RootSystem, RootVector};
use crate::{Error, Family, Rational, Result};

/// A set of root indices (at most 256 roots).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSet(pub [u64; 4]);

impl RootSet {
    pub const EMPTY: RootSet = RootSet([0; 4]);

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).flat_map(move |w| crate::kinv::bits(self.0[w]).map(move |b| 64 * w + b))
    }

    pub fn image(&self, g: &RootPermutation) -> RootSet {
        let mut out = RootSet::EMPTY;
        for i in self.iter() {
            out.insert(g.apply(i));
        }
        out
    }

    /// Big-endian hex, 64 characters.
    pub fn to_hex(&self) -> String {
        let mut bytes = Vec::with_capacity(32);
        for w in self.0.iter().rev() {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        hex::encode(bytes)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::Cache(e.to_string()))?;
        if bytes.len() != 32 {
            return Err(Error::Cache("bitset must be 32 bytes".into()));
        }
        let mut words = [0u64; 4];
        for (k, chunk) in bytes.chunks(8).enumerate() {
            words[3 - k] = u64::from_be_bytes(chunk.try_into().expect("8 bytes"));
        }
        Ok(RootSet(words))
    }
}

/// `U\W` realized as the `W`-orbit of a point whose stabilizer is `U`; each coset is
/// keyed by the set of roots positive on its point.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    pub spec: crate::TypeSpec,
    pub u_gens: Vec<RootVector>,
    pub u_order: u64,
    /// Roots whose reflection lies in `U`.
    pub sigma_u: Vec<usize>,
    pub representatives: Vec<RootSet>,
    /// Per simple reflection, the induced permutation of coset indices.
    pub action_tables: Vec<Vec<u32>>,
    index: HashMap<RootSet, usize>,
}

impl CosetSpace {
    pub fn size(&self) -> usize {
        self.representatives.len()
    }

    pub fn find(&self, key: &RootSet) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// The permutation of coset indices induced by `g`.
    pub fn table_for(&self, g: &RootPermutation) -> Result<Vec<usize>> {
        self.representatives
            .iter()
            .map(|k| self.find(&k.image(g)).ok_or_else(|| Error::Invalid("element does not act on the coset keys".into())))
            .collect()
    }

    /// Tables for the reflections of a frame, in frame order.
    pub fn frame_tables(&self, sys: &RootSystem, frame: &OrthogonalFrame) -> Result<Vec<Vec<usize>>> {
        frame.root_indices.iter().map(|&i| self.table_for(&perm_of_reflection(sys, i))).collect()
    }

    pub(crate) fn from_parts(
        spec: crate::TypeSpec,
        u_gens: Vec<RootVector>,
        u_order: u64,
        sigma_u: Vec<usize>,
        representatives: Vec<RootSet>,
        action_tables: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let index: HashMap<RootSet, usize> = representatives.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        if index.len() != representatives.len() || representatives.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Cache("representatives must be sorted and distinct".into()));
        }
        for t in &action_tables {
            let mut seen = vec![false; representatives.len()];
            if t.len() != representatives.len() {
                return Err(Error::Cache("action table has the wrong length".into()));
            }
            for &x in t {
                let x = x as usize;
                if x >= seen.len() || seen[x] {
                    return Err(Error::Cache("action table is not a bijection".into()));
                }
                seen[x] = true;
            }
        }
        Ok(Self { spec, u_gens, u_order, sigma_u, representatives, action_tables, index })
    }
}

/// Roots of `sys` whose reflections lie in the enumerated group `U`.
fn reflection_roots(sys: &RootSystem, u: &HashSet<RootPermutation>) -> Vec<usize> {
    (0..sys.len()).filter(|&i| u.contains(&perm_of_reflection(sys, i))).collect()
}

/// A doubled vector in the span of the roots, orthogonal to `Σ_U`, whose orthogonal
/// roots are exactly `Σ_U`.
fn generic_point(sys: &RootSystem, sigma_u: &[usize]) -> Result<Vec<i64>> {
    let simple = sys.simple_roots();
    let to_q = |v: &RootVector| -> Vec<Rational> { v.doubled.iter().map(|&x| Rational::new(x as i64, 2)).collect() };
    let simple_q: Vec<Vec<Rational>> = simple.iter().map(to_q).collect();
    // Unknown coefficients c over the simple roots; constraints (Σ c_i α_i, u) = 0.
    let constraints: Vec<Vec<Rational>> = sigma_u
        .iter()
        .map(|&u| {
            let uq = to_q(&sys.roots[u]);
            simple_q.iter().map(|a| crate::linalg::dot(a, &uq)).collect()
        })
        .collect();
    let basis = if constraints.is_empty() {
        crate::linalg::identity::<Rational>(simple.len())
    } else {
        nullspace(&constraints, simple.len())
    };
    let target: HashSet<usize> = sigma_u.iter().copied().collect();
    for attempt in 1i64..=16 {
        let mut coeffs = vec![Rational::from_integer(0); simple.len()];
        for (k, b) in basis.iter().enumerate() {
            let w = Rational::from_integer(attempt * (k as i64 + 1) + (k as i64) * (k as i64));
            for (c, x) in coeffs.iter_mut().zip(b) {
                *c += w * x;
            }
        }
        let lcm = coeffs.iter().fold(1i64, |l, c| num_integer::lcm(l, *c.denom()));
        let ambient = sys.ambient_dim();
        let mut point = vec![0i64; ambient];
        for (c, a) in coeffs.iter().zip(&simple) {
            let ci = (c * Rational::from_integer(lcm)).to_integer();
            for (p, &d) in point.iter_mut().zip(&a.doubled) {
                *p += ci * d as i64;
            }
        }
        let ortho: HashSet<usize> = (0..sys.len())
            .filter(|&i| sys.roots[i].doubled.iter().zip(&point).map(|(&d, &p)| d as i64 * p).sum::<i64>() == 0)
            .collect();
        if ortho == target {
            return Ok(point);
        }
    }
    Err(Error::Invalid("no point with stabilizer generated by Σ_U".into()))
}

fn positive_set(sys: &RootSystem, point: &[i64]) -> RootSet {
    let mut k = RootSet::EMPTY;
    for (i, r) in sys.roots.iter().enumerate() {
        if r.doubled.iter().zip(point).map(|(&d, &p)| d as i64 * p).sum::<i64>() > 0 {
            k.insert(i);
        }
    }
    k
}

/// Enumerates `U`, finds `Σ_U`, and builds the orbit of the coset key under the simple
/// reflections. Validates `size × |U| = |W|`.
pub fn build_coset_space(sys: &RootSystem, u_gens: &[RootVector], element_cap: usize) -> Result<CosetSpace> {
    if sys.len() > 256 {
        return Err(Error::Unsupported(format!("{} has more than 256 roots", sys.spec)));
    }
    let gen_idx = u_gens.iter().map(|v| sys.require(v)).collect::<Result<Vec<_>>>()?;
    let gens: Vec<RootPermutation> = gen_idx.iter().map(|&i| perm_of_reflection(sys, i)).collect();
    let u = enumerate_subgroup(&gens, element_cap)?;
    let u_elements: HashSet<RootPermutation> = u.elements.unwrap_or_default().into_iter().collect();
    let u_order = u_elements.len() as u64;
    let sigma_u = reflection_roots(sys, &u_elements);
    drop(u_elements);
    let point = generic_point(sys, &sigma_u)?;
    let start = positive_set(sys, &point);
    let simple = simple_reflections(sys);
    let mut seen: HashMap<RootSet, usize> = HashMap::from([(start, 0)]);
    let mut order = vec![start];
    let mut queue = VecDeque::from([0usize]);
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); simple.len()];
    while let Some(x) = queue.pop_front() {
        for (j, g) in simple.iter().enumerate() {
            let y = order[x].image(g);
            let id = *seen.entry(y).or_insert_with(|| {
                order.push(y);
                queue.push_back(order.len() - 1);
                order.len() - 1
            });
            if edges[j].len() <= x {
                edges[j].resize(x + 1, usize::MAX);
            }
            edges[j][x] = id;
        }
    }
    let order_w = known_weyl_order(sys.spec).ok_or_else(|| Error::Unsupported(sys.spec.to_string()))?;
    if order.len() as u64 * u_order != order_w {
        return Err(Error::NotFaithful { orbit: order.len() as u64, subgroup: u_order, order: order_w });
    }
    let mut sorted: Vec<(RootSet, usize)> = order.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    sorted.sort();
    let mut new_pos = vec![0usize; order.len()];
    for (pos, (_, old)) in sorted.iter().enumerate() {
        new_pos[*old] = pos;
    }
    let representatives: Vec<RootSet> = sorted.iter().map(|(k, _)| *k).collect();
    let action_tables = edges
        .iter()
        .map(|e| {
            let mut t = vec![0u32; order.len()];
            for (old, &img) in e.iter().enumerate() {
                t[new_pos[old]] = new_pos[img] as u32;
            }
            t
        })
        .collect();
    CosetSpace::from_parts(sys.spec, u_gens.to_vec(), u_order, sigma_u, representatives, action_tables)
}

/// The subgroup generators used for E7, E8 and D_n.
pub fn default_u_gens(sys: &RootSystem) -> Result<Vec<RootVector>> {
    let n = sys.ambient_dim();
    let e = |i: usize| RootVector::e(i, n);
    let chain = |from: usize, to: usize| (from..to).map(|i| e(i).sub(&e(i + 1))).collect::<Vec<_>>();
    match (sys.spec.family, sys.spec.rank) {
        (Family::E, 7) => {
            let mut g = vec![e(1).add(&e(2))];
            g.extend(chain(2, 6));
            g.push(e(7).sub(&e(8)));
            Ok(g)
        }
        (Family::E, 8) => {
            let mut g = vec![e(1).add(&e(2))];
            g.extend(chain(2, 8));
            Ok(g)
        }
        (Family::D, r) => Ok(chain(1, r)),
        _ => Err(Error::Unsupported(format!("no default coset space for {}", sys.spec))),
    }
}

pub fn build_default_coset_space(sys: &RootSystem, element_cap: usize) -> Result<CosetSpace> {
    build_coset_space(sys, &default_u_gens(sys)?, element_cap)
}

/// One vector per coset: the image of the base point, recovered along BFS parents.
pub fn coset_vectors(sys: &RootSystem, space: &CosetSpace) -> Result<Vec<Vec<i64>>> {
    let point = generic_point(sys, &space.sigma_u)?;
    let start = space.find(&positive_set(sys, &point)).ok_or_else(|| Error::Invalid("base coset missing".into()))?;
    let simple = sys.simple_roots();
    let mut out: Vec<Option<Vec<i64>>> = vec![None; space.size()];
    out[start] = Some(point);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let v = out[x].clone().expect("visited");
        for (j, t) in space.action_tables.iter().enumerate() {
            let y = t[x] as usize;
            if out[y].is_none() {
                let a = &simple[j].doubled;
                let aa: i64 = a.iter().map(|&d| d as i64 * d as i64).sum();
                let av: i64 = a.iter().zip(&v).map(|(&d, &p)| d as i64 * p).sum();
                let c = 2 * av / aa;
                let w: Vec<i64> = v.iter().zip(a).map(|(&p, &d)| p - c * d as i64).collect();
                out[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    out.into_iter().map(|v| v.ok_or_else(|| Error::Invalid("coset unreachable".into()))).collect()
}

/// Orbits of the frame reflections on the cosets, each sorted, ordered by least member.
pub fn p_orbits(tables: &[Vec<usize>], size: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; size];
    let mut out = Vec::new();
    for s in 0..size {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orbit = vec![s];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for t in tables {
                if !seen[t[x]] {
                    seen[t[x]] = true;
                    orbit.push(t[x]);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Certificate data for one orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCertificate {
    pub members: Vec<usize>,
    /// Frame positions acting nontrivially on the orbit.
    pub a_k: Vec<usize>,
    pub complement_trivial: bool,
    pub simply_transitive: bool,
}

impl OrbitCertificate {
    pub fn passed(&self) -> bool {
        self.complement_trivial && self.simply_transitive
    }

    pub fn fold(&self) -> u32 {
        self.a_k.len() as u32
    }

    pub fn mask(&self) -> u64 {
        self.a_k.iter().fold(0u64, |m, &j| m | 1 << j)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldCertificate {
    pub frame_size: usize,
    pub orbits: Vec<OrbitCertificate>,
    pub min_fold: u32,
}

impl FoldCertificate {
    pub fn passed(&self) -> bool {
        self.orbits.iter().all(|o| o.passed())
    }

    pub fn count_with_fold(&self, f: u32) -> usize {
        self.orbits.iter().filter(|o| o.fold() == f).count()
    }

    pub fn failures(&self) -> Vec<usize> {
        (0..self.orbits.len()).filter(|&k| !self.orbits[k].passed()).collect()
    }
}

/// `A_k` per orbit; checks that the complement acts trivially and `⟨A_k⟩` acts simply
/// transitively. A failed orbit is a legal outcome and is reported, not raised.
pub fn full_check(tables: &[Vec<usize>], size: usize) -> FoldCertificate {
    let orbits = p_orbits(tables, size);
    let mut out = Vec::with_capacity(orbits.len());
    for members in orbits {
        let x0 = members[0];
        let a_k: Vec<usize> = (0..tables.len()).filter(|&j| members.iter().any(|&x| tables[j][x] != x)).collect();
        let complement_trivial = (0..tables.len())
            .filter(|j| !a_k.contains(j))
            .all(|j| members.iter().all(|&x| tables[j][x] == x));
        let mut images = HashSet::new();
        for sub in 0u64..1 << a_k.len() {
            let mut y = x0;
            for b in crate::kinv::bits(sub) {
                y = tables[a_k[b]][y];
            }
            images.insert(y);
        }
        let simply_transitive = images.len() == 1 << a_k.len() && images.len() == members.len();
        out.push(OrbitCertificate { members, a_k, complement_trivial, simply_transitive });
    }
    let min_fold = out.iter().map(|o| o.fold()).min().unwrap_or(0);
    FoldCertificate { frame_size: tables.len(), orbits: out, min_fold }
}

/// True iff the multiset of fold-`m` monomials equals the support of `expected`,
/// which must be `s`-free and homogeneous of degree `m = min_fold`.
pub fn compare_support(cert: &FoldCertificate, expected: &KInvariant) -> bool {
    if expected.is_zero() && cert.orbits.is_empty() {
        return true;
    }
    let m = cert.min_fold;
    if !cert.passed() || expected.terms().any(|t| t.two) || !expected.is_homogeneous(m) {
        return false;
    }
    let mut found: Vec<u64> = cert.orbits.iter().filter(|o| o.fold() == m).map(|o| o.mask()).collect();
    found.sort_unstable();
    let mut want: Vec<u64> = expected.terms().map(|t| t.mask).collect();
    want.sort_unstable();
    found == want
}

/// `e_m` of the permutation form, by way of the general orbit decomposition.
pub fn f_restriction(tables: &[Vec<usize>], size: usize, m: u32, ctx: &Arc<Context>) -> Result<KInvariant> {
    let decomp = permutation_decomp(tables, size, ctx)?;
    e_fold(&decomp, m)
}

pub fn permutation_decomp(tables: &[Vec<usize>], size: usize, ctx: &Arc<Context>) -> Result<OrbitPfisterDecomp> {
    form_of_permutation_action(size, tables, ctx)
}

/// For `D_n` with `U = S_n`: cosets are sign vectors with an even number of minus signs.
/// Returns, per orbit, the set `J` of pairs `i` with `x_{2i-1} ≠ x_{2i}`.
pub fn d_pattern_sets(vectors: &[Vec<i64>], orbits: &[Vec<usize>], m: usize) -> Vec<BTreeMap<u64, usize>> {
    orbits
        .iter()
        .map(|o| {
            let mut counts = BTreeMap::new();
            for &x in o {
                let v = &vectors[x];
                let j = (0..m).filter(|&i| v[2 * i] != v[2 * i + 1]).fold(0u64, |acc, i| acc | 1 << i);
                *counts.entry(j).or_insert(0) += 1;
            }
            counts
        })
        .collect()
}

/// Whether a root is orthogonal to every root of a subsystem list.
pub fn orthogonal_to_all(sys: &RootSystem, v: &RootVector, roots: &[usize]) -> bool {
    roots.iter().all(|&r| inner4(v, &sys.roots[r]).ok() == Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    #[test]
    fn hex_round_trip() {
        let mut k = RootSet::EMPTY;
        for i in [0, 63, 64, 200, 255] {
            k.insert(i);
        }
        assert_eq!(RootSet::from_hex(&k.to_hex()).unwrap(), k);
        assert_eq!(k.to_hex().len(), 64);
    }

    #[test]
    fn d_n_cosets() {
        for n in [4usize, 5, 6] {
            let sys = build_root_system(format!("D{n}").parse().unwrap()).unwrap();
            let space = build_default_coset_space(&sys, 1_000_000).unwrap();
            assert_eq!(space.size(), 1 << (n - 1));
            assert_eq!(space.u_order, (1..=n as u64).product::<u64>());
        }
    }

    #[test]
    fn empty_frame_gives_singletons() {
        let orbits = p_orbits(&[], 5);
        assert_eq!(orbits.len(), 5);
        let cert = full_check(&[], 3);
        assert_eq!(cert.min_fold, 0);
        assert!(cert.passed());
    }
}
