//! Dihedral groups `⟨σ, τ⟩ ⊂ S_n` with `σ: i ↦ i+1` and `τ: i ↦ n-1-i` on points `0..n`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::{perm_of_vector_reflection, RootPermutation};
use crate::rootsys::{RootSystem, RootVector};
use crate::{Error, Result};

/// Element `σ^k τ^e` stored at index `2k + e`.
#[derive(Clone, Debug)]
pub struct DihedralGroup {
    pub n: u32,
    pub elements: Vec<RootPermutation>,
    /// Indices of the reflections `σ^k τ`, in order of `k`.
    pub reflections: Vec<usize>,
    index: HashMap<Vec<u16>, usize>,
}

pub fn sigma(n: u32) -> RootPermutation {
    RootPermutation { images: (0..n).map(|i| ((i + 1) % n) as u16).collect() }
}

pub fn tau(n: u32) -> RootPermutation {
    RootPermutation { images: (0..n).map(|i| (n - 1 - i) as u16).collect() }
}

/// The permutation representation of the dihedral group of order `2n`.
pub fn build_dihedral(n: u32) -> Result<DihedralGroup> {
    if n < 3 {
        return Err(Error::Invalid(format!("dihedral parameter {n} < 3")));
    }
    let s = sigma(n);
    let t = tau(n);
    let mut elements = Vec::with_capacity(2 * n as usize);
    let mut power = RootPermutation::identity(n as usize);
    for _ in 0..n {
        elements.push(power.clone());
        elements.push(power.compose(&t));
        power = power.compose(&s);
    }
    let index: HashMap<Vec<u16>, usize> = elements.iter().enumerate().map(|(i, e)| (e.images.clone(), i)).collect();
    if index.len() != 2 * n as usize {
        return Err(Error::Invalid("dihedral elements are not distinct".into()));
    }
    let reflections = (0..n as usize).map(|k| 2 * k + 1).collect();
    Ok(DihedralGroup { n, elements, reflections, index })
}

impl DihedralGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn find(&self, p: &RootPermutation) -> Option<usize> {
        self.index.get(&p.images).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.find(&self.elements[a].compose(&self.elements[b])).expect("closed under products")
    }

    pub fn inv(&self, a: usize) -> usize {
        self.find(&self.elements[a].inverse()).expect("closed under inverses")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while !self.elements[x].is_identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Checks closure under composition.
    pub fn is_closed(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.find(&self.elements[a].compose(&self.elements[b])).is_some()))
    }

    /// Maximal sets of pairwise commuting reflections, as sorted element indices.
    pub fn frames(&self) -> Vec<Vec<usize>> {
        let refl = &self.reflections;
        let commute = |a: usize, b: usize| self.mul(a, b) == self.mul(b, a);
        let mut out = BTreeSet::new();
        for &r in refl {
            let mut clique = vec![r];
            for &q in refl {
                if q != r && clique.iter().all(|&c| commute(c, q)) {
                    clique.push(q);
                }
            }
            clique.sort_unstable();
            out.insert(clique);
        }
        out.into_iter().collect()
    }

    /// Conjugacy classes of frames, each represented by its least member.
    pub fn omega(&self) -> Vec<DihedralClass> {
        let frames = self.frames();
        let gens = [2usize, 1usize];
        let mut seen = BTreeSet::new();
        let mut classes = Vec::new();
        for f in &frames {
            if seen.contains(f) {
                continue;
            }
            let mut queue = VecDeque::from([f.clone()]);
            seen.insert(f.clone());
            let mut size = 0;
            while let Some(x) = queue.pop_front() {
                size += 1;
                for &g in &gens {
                    let gi = self.inv(g);
                    let mut y: Vec<usize> = x.iter().map(|&r| self.mul(self.mul(g, r), gi)).collect();
                    y.sort_unstable();
                    if seen.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
            classes.push(DihedralClass { representative: f.clone(), orbit_size: size });
        }
        classes
    }

    /// Elements of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// The semidirect splitting `G = P ⋉ U` with `U` the odd-order elements and `P`
    /// generated by the Ω representative. Fails for `n ≡ 0 mod 4`.
    pub fn splitting(&self) -> Result<Splitting> {
        let classes = self.omega();
        if classes.len() != 1 {
            return Err(Error::Unsupported(format!("I2({}) has {} frame classes", self.n, classes.len())));
        }
        let frame = classes[0].representative.clone();
        let p = self.subgroup(&frame);
        let u: Vec<usize> = (0..self.order()).filter(|&a| self.element_order(a) % 2 == 1).collect();
        let uset: BTreeSet<usize> = u.iter().copied().collect();
        let closed = u.iter().all(|&a| u.iter().all(|&b| uset.contains(&self.mul(a, b))));
        let normal = (0..self.order()).all(|g| u.iter().all(|&x| uset.contains(&self.mul(self.mul(g, x), self.inv(g)))));
        let meet = p.iter().filter(|x| uset.contains(x)).count();
        if !closed || !normal || meet != 1 || p.len() * u.len() != self.order() {
            return Err(Error::Invalid(format!("I2({}) does not split as P ⋉ U", self.n)));
        }
        let mut projection = vec![usize::MAX; self.order()];
        for (pi, &pe) in p.iter().enumerate() {
            for &ue in &u {
                projection[self.mul(pe, ue)] = pi;
            }
        }
        if projection.contains(&usize::MAX) {
            return Err(Error::Invalid("P·U does not cover G".into()));
        }
        let sp = Splitting { frame, p, u, projection };
        for a in 0..self.order() {
            for b in 0..self.order() {
                if sp.p[sp.projection[self.mul(a, b)]] != self.mul(sp.p[sp.projection[a]], sp.p[sp.projection[b]]) {
                    return Err(Error::Invalid("projection G → P is not a homomorphism".into()));
                }
            }
        }
        Ok(sp)
    }

    /// Coordinates of `x ∈ P(frame)` over the frame generators, as a bit mask.
    pub fn frame_coordinates(&self, frame: &[usize], x: usize) -> Option<u64> {
        (0u64..1 << frame.len()).find(|&m| {
            let mut y = 0usize;
            for (j, &f) in frame.iter().enumerate() {
                if m >> j & 1 == 1 {
                    y = self.mul(y, f);
                }
            }
            y == x
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DihedralClass {
    pub representative: Vec<usize>,
    pub orbit_size: usize,
}

/// `G = P ⋉ U` with the projection `π: G → P`.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub frame: Vec<usize>,
    /// Element indices of `P`.
    pub p: Vec<usize>,
    /// Element indices of `U`.
    pub u: Vec<usize>,
    /// `projection[g]` is the position in `p` of `π(g)`.
    pub projection: Vec<usize>,
}

/// The isomorphism `I2(4) → W(B2)` sending `σ` to the rotation `s_{e1} s_{e1-e2}` and `τ`
/// to `s_{e1-e2}`, checked to be multiplicative and injective.
pub fn b2_isomorphism(group: &DihedralGroup, b2: &RootSystem) -> Result<Vec<RootPermutation>> {
    if group.n != 4 || b2.spec.to_string() != "B2" {
        return Err(Error::Invalid("the B2 isomorphism needs I2(4) and B2".into()));
    }
    let e1 = RootVector::e(1, 2);
    let long = RootVector::e(1, 2).sub(&RootVector::e(2, 2));
    let t = perm_of_vector_reflection(b2, &long)?;
    let rho = perm_of_vector_reflection(b2, &e1)?.compose(&t);
    let mut images = Vec::with_capacity(8);
    let mut power = RootPermutation::identity(b2.len());
    for _ in 0..4 {
        images.push(power.clone());
        images.push(power.compose(&t));
        power = power.compose(&rho);
    }
    let distinct: BTreeSet<&Vec<u16>> = images.iter().map(|p| &p.images).collect();
    if distinct.len() != 8 {
        return Err(Error::Invalid("B2 images are not distinct".into()));
    }
    for a in 0..8 {
        for b in 0..8 {
            if images[group.mul(a, b)] != images[a].compose(&images[b]) {
                return Err(Error::Invalid("map I2(4) → W(B2) is not multiplicative".into()));
            }
        }
    }
    Ok(images)
}
