//! Weyl groups as permutation groups on roots, orthogonal frames and their
//! conjugacy classes.

pub mod dihedral;

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::rootsys::{inner4, reflect, RootSystem, RootVector};
use crate::{Error, Family, Result, TypeSpec};

/// Default cap on enumerated group elements.
pub const DEFAULT_ELEMENT_CAP: usize = 2_000_000;
/// Default cap on frames visited by the Ω orbit search.
pub const DEFAULT_FRAME_CAP: usize = 16_000_000;

/// A group element as a permutation of root indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootPermutation {
    pub images: Vec<u16>,
}

impl RootPermutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n as u16).collect() }
    }

    /// Validates bijectivity, sign equivariance and preservation of inner products.
    pub fn new_checked(sys: &RootSystem, images: Vec<u16>) -> Result<Self> {
        let n = sys.len();
        if images.len() != n {
            return Err(Error::NotAnAutomorphism);
        }
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::NotAnAutomorphism);
            }
            seen[i] = true;
        }
        for i in 0..n {
            if images[sys.negation[i]] as usize != sys.negation[images[i] as usize] {
                return Err(Error::NotAnAutomorphism);
            }
        }
        for i in 0..n {
            for j in i..n {
                let before = inner4(&sys.roots[i], &sys.roots[j])?;
                let after = inner4(&sys.roots[images[i] as usize], &sys.roots[images[j] as usize])?;
                if before != after {
                    return Err(Error::NotAnAutomorphism);
                }
            }
        }
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Self { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }
}

/// The permutation induced by `s_α` for the root at `root_idx`.
pub fn perm_of_reflection(sys: &RootSystem, root_idx: usize) -> RootPermutation {
    perm_of_vector_reflection(sys, &sys.roots[root_idx]).expect("root reflections permute the root system")
}

/// The permutation induced by the reflection in an arbitrary lattice vector, if it
/// preserves the root set.
pub fn perm_of_vector_reflection(sys: &RootSystem, v: &RootVector) -> Result<RootPermutation> {
    let images = sys
        .roots
        .iter()
        .map(|r| {
            let img = reflect(v, r)?;
            sys.find(&img).map(|i| i as u16).ok_or(Error::NotAnAutomorphism)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RootPermutation { images })
}

/// Product of reflections, applied right to left. Individual factors need not preserve
/// the root set; only the product must.
pub fn perm_of_word(sys: &RootSystem, word: &[RootVector]) -> Result<RootPermutation> {
    let images = sys
        .roots
        .iter()
        .map(|r| {
            let mut x = r.clone();
            for v in word.iter().rev() {
                x = reflect(v, &x)?;
            }
            sys.find(&x).map(|i| i as u16).ok_or(Error::NotAnAutomorphism)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RootPermutation { images })
}

pub fn simple_reflections(sys: &RootSystem) -> Vec<RootPermutation> {
    sys.simple_indices.iter().map(|&i| perm_of_reflection(sys, i)).collect()
}

/// A finitely generated permutation group, possibly enumerated.
#[derive(Clone, Debug)]
pub struct GeneratedGroup {
    pub generators: Vec<RootPermutation>,
    pub elements: Option<Vec<RootPermutation>>,
    pub order: Option<u64>,
}

/// Breadth-first closure under right multiplication by generators.
pub fn enumerate_subgroup(gens: &[RootPermutation], element_cap: usize) -> Result<GeneratedGroup> {
    if gens.is_empty() || element_cap == 0 {
        return Err(Error::Invalid("need at least one generator and a positive cap".into()));
    }
    let id = RootPermutation::identity(gens[0].len());
    let mut seen: HashSet<RootPermutation> = HashSet::new();
    let mut elements = vec![id.clone()];
    seen.insert(id);
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head].clone();
        head += 1;
        for g in gens {
            let y = x.compose(g);
            if !seen.contains(&y) {
                if elements.len() >= element_cap {
                    return Err(Error::CapExceeded { cap: element_cap });
                }
                seen.insert(y.clone());
                elements.push(y);
            }
        }
    }
    let order = elements.len() as u64;
    Ok(GeneratedGroup { generators: gens.to_vec(), elements: Some(elements), order: Some(order) })
}

/// Tabulated Weyl group orders, used only as validation constants.
pub fn known_weyl_order(spec: TypeSpec) -> Option<u64> {
    let n = spec.rank as u64;
    let fact = |k: u64| (1..=k).try_fold(1u64, |acc, x| acc.checked_mul(x));
    match spec.canonical().family {
        Family::A => fact(n + 1),
        Family::B => fact(n)?.checked_mul(1u64.checked_shl(n as u32)?),
        Family::D => fact(n)?.checked_mul(1u64.checked_shl(n as u32 - 1)?),
        Family::E => match n {
            6 => Some(51_840),
            7 => Some(2_903_040),
            8 => Some(696_729_600),
            _ => None,
        },
        Family::F => Some(1152),
        Family::G => Some(12),
        Family::I(m) => Some(2 * m as u64),
        Family::C => None,
    }
}

/// `reflection_table[b][g]` is the index of `s_b(g)`.
pub fn reflection_table(sys: &RootSystem) -> Vec<Vec<u16>> {
    (0..sys.len()).map(|i| perm_of_reflection(sys, i).images).collect()
}

/// `|W(S)| = |W(S)·α| · |W(S ∩ α^⊥)|`, applied recursively to the subsystem `subset`.
pub fn order_by_root_orbits(sys: &RootSystem, subset: &[usize]) -> u128 {
    let table = reflection_table(sys);
    let ortho = |a: usize, b: usize| inner4(&sys.roots[a], &sys.roots[b]).map(|x| x == 0).unwrap_or(false);
    let mut total: u128 = 1;
    let mut current: Vec<usize> = subset.to_vec();
    while let Some(&alpha) = current.first() {
        let mut seen = HashSet::from([alpha]);
        let mut queue = VecDeque::from([alpha]);
        while let Some(x) = queue.pop_front() {
            for &b in &current {
                let y = table[b][x] as usize;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        total *= seen.len() as u128;
        current.retain(|&b| ortho(alpha, b));
    }
    total
}

/// How an order was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderMethod {
    Enumeration,
    CosetIndex,
    RootOrbits,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub order: u64,
    pub method: OrderMethod,
    /// `(coset count, |U|)` for the coset route.
    pub factors: Option<(u64, u64)>,
}

/// `|W|` by enumeration for small groups, coset index for E7/E8, root orbits otherwise.
pub fn group_order(sys: &RootSystem, element_cap: usize) -> Result<OrderReport> {
    let spec = sys.spec;
    if spec.family == Family::E && spec.rank >= 7 {
        let space = crate::cosets::build_default_coset_space(sys, element_cap)?;
        let order = space.size() as u64 * space.u_order;
        return Ok(OrderReport { order, method: OrderMethod::CosetIndex, factors: Some((space.size() as u64, space.u_order)) });
    }
    if spec.rank <= 6 || spec.family == Family::F {
        match enumerate_subgroup(&simple_reflections(sys), element_cap) {
            Ok(g) => return Ok(OrderReport { order: g.order.unwrap_or(0), method: OrderMethod::Enumeration, factors: None }),
            Err(e) if e.is_resource_cap() => {}
            Err(e) => return Err(e),
        }
    }
    let all: Vec<usize> = (0..sys.len()).collect();
    let order = u64::try_from(order_by_root_orbits(sys, &all)).map_err(|_| Error::Invalid("order overflows u64".into()))?;
    Ok(OrderReport { order, method: OrderMethod::RootOrbits, factors: None })
}

/// Sorted sign-canonical root indices of pairwise orthogonal roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrthogonalFrame {
    pub root_indices: Vec<usize>,
}

impl OrthogonalFrame {
    /// Canonicalizes signs and sorts.
    pub fn new(sys: &RootSystem, roots: &[usize]) -> Self {
        let mut v: Vec<usize> = roots.iter().map(|&i| sys.canonical(i)).collect();
        v.sort_unstable();
        v.dedup();
        Self { root_indices: v }
    }

    /// Builds a frame from vectors in the given order, keeping that order.
    pub fn from_vectors(sys: &RootSystem, vs: &[RootVector]) -> Result<Self> {
        let idx = vs.iter().map(|v| sys.require(v).map(|i| sys.canonical(i))).collect::<Result<Vec<_>>>()?;
        Ok(Self { root_indices: idx })
    }

    pub fn len(&self) -> usize {
        self.root_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.root_indices.is_empty()
    }

    pub fn vectors(&self, sys: &RootSystem) -> Vec<RootVector> {
        self.root_indices.iter().map(|&i| sys.roots[i].clone()).collect()
    }

    pub fn is_orthogonal(&self, sys: &RootSystem) -> bool {
        let r = &self.root_indices;
        (0..r.len()).all(|i| (i + 1..r.len()).all(|j| inner4(&sys.roots[r[i]], &sys.roots[r[j]]).ok() == Some(0)))
    }

    pub fn is_maximal(&self, sys: &RootSystem) -> bool {
        !sys.roots.iter().any(|x| {
            self.root_indices.iter().all(|&i| inner4(&sys.roots[i], x).ok() == Some(0))
        })
    }

    /// Image under `g`, re-canonicalized and sorted.
    pub fn image(&self, sys: &RootSystem, g: &RootPermutation) -> Self {
        let mut v: Vec<usize> = self.root_indices.iter().map(|&i| sys.canonical(g.apply(i))).collect();
        v.sort_unstable();
        Self { root_indices: v }
    }

    pub fn to_json(&self, sys: &RootSystem) -> serde_json::Value {
        serde_json::json!({
            "root_indices": self.root_indices,
            "roots": self.root_indices.iter().map(|&i| sys.roots[i].doubled.clone()).collect::<Vec<_>>(),
        })
    }
}

fn orthogonality_masks(sys: &RootSystem, canon: &[usize]) -> Vec<Vec<u64>> {
    let words = canon.len().div_ceil(64);
    canon
        .iter()
        .map(|&a| {
            let mut m = vec![0u64; words];
            for (j, &b) in canon.iter().enumerate() {
                if inner4(&sys.roots[a], &sys.roots[b]).ok() == Some(0) {
                    m[j / 64] |= 1 << (j % 64);
                }
            }
            m
        })
        .collect()
}

/// All maximal cliques of the orthogonality graph on sign-canonical roots, sorted.
pub fn maximal_orthogonal_frames(sys: &RootSystem) -> Vec<OrthogonalFrame> {
    let canon = sys.canonical_indices();
    let masks = orthogonality_masks(sys, &canon);
    let words = canon.len().div_ceil(64);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let full: Vec<u64> = (0..words)
        .map(|w| {
            let bits = (canon.len() - 64 * w).min(64);
            if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        })
        .collect();
    extend_cliques(&masks, &full, &full, 0, &mut stack, &mut out);
    let mut frames: Vec<OrthogonalFrame> =
        out.into_iter().map(|c: Vec<usize>| OrthogonalFrame { root_indices: c.iter().map(|&j| canon[j]).collect() }).collect();
    frames.sort();
    frames
}

fn extend_cliques(
    masks: &[Vec<u64>],
    common: &[u64],
    candidates: &[u64],
    from: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if common.iter().all(|&w| w == 0) {
        out.push(stack.clone());
        return;
    }
    for j in from..masks.len() {
        if candidates[j / 64] >> (j % 64) & 1 == 0 {
            continue;
        }
        let next_common: Vec<u64> = common.iter().zip(&masks[j]).map(|(a, b)| a & b).collect();
        stack.push(j);
        extend_cliques(masks, &next_common, &next_common, j + 1, stack, out);
        stack.pop();
    }
}

/// How Ω was classified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMethod {
    OrbitSearch,
    Inductive,
}

/// Conjugacy classes of maximal frames.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaClasses {
    pub representatives: Vec<OrthogonalFrame>,
    /// `None` when the inductive fallback was used.
    pub orbit_sizes: Option<Vec<usize>>,
    pub total_frames: Option<usize>,
    pub method: OmegaMethod,
}

impl OmegaClasses {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Orbit search over all maximal frames under the simple reflections. Falls back to
/// the inductive classification when more than `frame_cap` frames would be visited.
pub fn omega_classes(sys: &RootSystem, frame_cap: usize) -> Result<OmegaClasses> {
    match omega_by_orbits(sys, frame_cap) {
        Err(e) if e.is_resource_cap() => omega_inductive(sys),
        other => other,
    }
}

pub fn omega_by_orbits(sys: &RootSystem, frame_cap: usize) -> Result<OmegaClasses> {
    let frames = maximal_orthogonal_frames(sys);
    if frames.len() > frame_cap {
        return Err(Error::CapExceeded { cap: frame_cap });
    }
    let gens = simple_reflections(sys);
    let index: HashMap<&OrthogonalFrame, usize> = frames.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut seen = vec![false; frames.len()];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for start in 0..frames.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut size = 0;
        while let Some(f) = queue.pop_front() {
            size += 1;
            for g in &gens {
                let img = frames[f].image(sys, g);
                let j = *index.get(&img).ok_or_else(|| Error::Invalid("frame image is not a maximal frame".into()))?;
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        reps.push(frames[start].clone());
        sizes.push(size);
    }
    Ok(OmegaClasses { representatives: reps, orbit_sizes: Some(sizes), total_frames: Some(frames.len()), method: OmegaMethod::OrbitSearch })
}

/// Fixes a root up to the `W(S)`-action, recurses into its orthogonal complement and
/// merges candidates by the multiset of squared root lengths.
pub fn omega_inductive(sys: &RootSystem) -> Result<OmegaClasses> {
    let table = reflection_table(sys);
    let all: Vec<usize> = sys.canonical_indices();
    let mut candidates = Vec::new();
    inductive_frames(sys, &table, &all, &mut Vec::new(), &mut candidates);
    let mut by_signature: std::collections::BTreeMap<Vec<i64>, OrthogonalFrame> = std::collections::BTreeMap::new();
    for c in candidates {
        let frame = OrthogonalFrame::new(sys, &c);
        let mut sig: Vec<i64> = frame.root_indices.iter().map(|&i| sys.roots[i].norm4()).collect();
        sig.sort_unstable();
        by_signature
            .entry(sig)
            .and_modify(|f| {
                if frame < *f {
                    *f = frame.clone()
                }
            })
            .or_insert(frame);
    }
    let mut reps: Vec<OrthogonalFrame> = by_signature.into_values().collect();
    reps.sort();
    Ok(OmegaClasses { representatives: reps, orbit_sizes: None, total_frames: None, method: OmegaMethod::Inductive })
}

fn inductive_frames(sys: &RootSystem, table: &[Vec<u16>], subset: &[usize], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if subset.is_empty() {
        out.push(chosen.clone());
        return;
    }
    let mut classified: HashSet<usize> = HashSet::new();
    for &alpha in subset {
        if classified.contains(&alpha) {
            continue;
        }
        let mut queue = VecDeque::from([alpha]);
        classified.insert(alpha);
        while let Some(x) = queue.pop_front() {
            for &b in subset {
                let y = sys.canonical(table[b][x] as usize);
                if classified.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let rest: Vec<usize> =
            subset.iter().copied().filter(|&b| inner4(&sys.roots[alpha], &sys.roots[b]).ok() == Some(0)).collect();
        chosen.push(alpha);
        inductive_frames(sys, table, &rest, chosen, out);
        chosen.pop();
    }
}

/// The permutation of frame positions induced by `g`; signs are discarded.
pub fn normalizer_action(sys: &RootSystem, g: &RootPermutation, frame: &OrthogonalFrame) -> Result<Vec<usize>> {
    frame
        .root_indices
        .iter()
        .map(|&i| {
            let img = sys.canonical(g.apply(i));
            frame.root_indices.iter().position(|&j| j == img).ok_or(Error::NotNormalizing)
        })
        .collect()
}

/// The element `g = s_{r1} s_{r2}` normalizing the E-type frames.
pub fn e_type_normalizer(sys: &RootSystem) -> Result<RootPermutation> {
    let r1 = RootVector::from_doubled(vec![1, -1, -1, -1, -1, -1, -1, 1]);
    let r2 = RootVector::from_doubled(vec![-1, 1, 1, 1, -1, -1, -1, 1]);
    perm_of_word(sys, &[r1, r2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, frame_a, frame_b};

    fn sys(s: &str) -> RootSystem {
        build_root_system(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn reflection_negates_its_root() {
        let b2 = sys("B2");
        for i in 0..b2.len() {
            let p = perm_of_reflection(&b2, i);
            assert_eq!(p.apply(i), b2.negation[i]);
            assert!(p.compose(&p).is_identity());
            RootPermutation::new_checked(&b2, p.images.clone()).unwrap();
        }
    }

    #[test]
    fn checked_constructor_rejects_bad_maps() {
        let b2 = sys("B2");
        let mut images: Vec<u16> = (0..b2.len() as u16).collect();
        images.swap(0, 1);
        assert!(RootPermutation::new_checked(&b2, images).is_err());
    }

    #[test]
    fn small_orders() {
        for (t, n) in [("A3", 24), ("B2", 8), ("B3", 48), ("D4", 192), ("F4", 1152)] {
            let s = sys(t);
            let g = enumerate_subgroup(&simple_reflections(&s), 10_000).unwrap();
            assert_eq!(g.order, Some(n), "{t}");
        }
    }

    #[test]
    fn cap_is_reported() {
        let s = sys("B3");
        let err = enumerate_subgroup(&simple_reflections(&s), 10).unwrap_err();
        assert!(err.is_resource_cap());
    }

    #[test]
    fn root_orbit_orders() {
        for t in ["A4", "B5", "D6", "E6", "E7", "E8", "F4"] {
            let s = sys(t);
            let all: Vec<usize> = (0..s.len()).collect();
            assert_eq!(order_by_root_orbits(&s, &all), known_weyl_order(s.spec).unwrap() as u128, "{t}");
        }
    }

    #[test]
    fn frame_counts() {
        assert_eq!(maximal_orthogonal_frames(&sys("B2")).len(), 2);
        assert_eq!(maximal_orthogonal_frames(&sys("A6")).len(), 105);
        assert_eq!(maximal_orthogonal_frames(&sys("D8")).len(), 105);
        assert_eq!(maximal_orthogonal_frames(&sys("E7")).len(), 135);
        assert!(maximal_orthogonal_frames(&sys("D4")).iter().all(|f| f.len() == 4));
    }

    #[test]
    fn fallback_matches_orbit_search() {
        for t in ["B4", "B5", "F4", "D6", "A5", "E6"] {
            let s = sys(t);
            let exact = omega_by_orbits(&s, DEFAULT_FRAME_CAP).unwrap();
            let induct = omega_classes(&s, 1).unwrap();
            assert_eq!(induct.method, OmegaMethod::Inductive);
            assert_eq!(exact.len(), induct.len(), "{t}");
        }
    }

    #[test]
    fn e6_normalizer_swaps_a1_b2() {
        let s = sys("E6");
        let g = e_type_normalizer(&s).unwrap();
        let frame =
            OrthogonalFrame::from_vectors(&s, &[frame_a(1, 8), frame_b(1, 8), frame_a(2, 8), frame_b(2, 8)]).unwrap();
        assert_eq!(normalizer_action(&s, &g, &frame).unwrap(), vec![3, 1, 2, 0]);
        let id = RootPermutation::identity(s.len());
        assert_eq!(normalizer_action(&s, &id, &frame).unwrap(), vec![0, 1, 2, 3]);
    }
}
