//! Exact root systems in doubled integer coordinates.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Family, Rational, Result, TypeSpec};

/// A vector of the half-integer lattice, stored as twice its coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector {
    pub doubled: Vec<i32>,
}

impl RootVector {
    pub fn from_doubled(doubled: Vec<i32>) -> Self {
        Self { doubled }
    }

    /// Builds from integer coordinates.
    pub fn from_integer(coords: &[i32]) -> Self {
        Self { doubled: coords.iter().map(|c| 2 * c).collect() }
    }

    /// The basis vector `e_i` (1-based) in dimension `n`.
    pub fn e(i: usize, n: usize) -> Self {
        let mut d = vec![0; n];
        d[i - 1] = 2;
        Self { doubled: d }
    }

    pub fn rank(&self) -> usize {
        self.doubled.len()
    }

    pub fn is_zero(&self) -> bool {
        self.doubled.iter().all(|&x| x == 0)
    }

    /// Squared length times four.
    pub fn norm4(&self) -> i64 {
        self.doubled.iter().map(|&x| (x as i64) * (x as i64)).sum()
    }

    pub fn norm(&self) -> Rational {
        Rational::new(self.norm4(), 4)
    }

    pub fn neg(&self) -> Self {
        Self { doubled: self.doubled.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { doubled: self.doubled.iter().zip(&other.doubled).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// First nonzero coordinate positive.
    pub fn is_sign_canonical(&self) -> bool {
        self.doubled.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }

    pub fn sign_canonical(&self) -> Self {
        if self.is_sign_canonical() {
            self.clone()
        } else {
            self.neg()
        }
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .doubled
            .iter()
            .map(|&d| if d % 2 == 0 { format!("{}", d / 2) } else { format!("{d}/2") })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Exact `(v, w)`.
pub fn inner_product(v: &RootVector, w: &RootVector) -> Result<Rational> {
    Ok(Rational::new(inner4(v, w)?, 4))
}

/// Four times the inner product.
pub fn inner4(v: &RootVector, w: &RootVector) -> Result<i64> {
    if v.rank() != w.rank() {
        return Err(Error::RankMismatch(v.rank(), w.rank()));
    }
    Ok(v.doubled.iter().zip(&w.doubled).map(|(&a, &b)| a as i64 * b as i64).sum())
}

/// `s_v(w) = w - 2(v,w)/(v,v) v`.
pub fn reflect(v: &RootVector, w: &RootVector) -> Result<RootVector> {
    let vv = v.norm4();
    if vv == 0 {
        return Err(Error::Isotropic);
    }
    let vw = inner4(v, w)?;
    let mut out = Vec::with_capacity(w.rank());
    for (&dv, &dw) in v.doubled.iter().zip(&w.doubled) {
        let num = 2 * vw * dv as i64;
        if num % vv != 0 {
            return Err(Error::NonLattice);
        }
        out.push(dw - (num / vv) as i32);
    }
    Ok(RootVector { doubled: out })
}

/// A finite crystallographic root system with a fixed lexicographic root order.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub spec: TypeSpec,
    pub roots: Vec<RootVector>,
    pub simple_indices: Vec<usize>,
    /// `negation[i]` is the index of `-roots[i]`.
    pub negation: Vec<usize>,
    pub warnings: Vec<String>,
    index: HashMap<Vec<i32>, usize>,
}

impl RootSystem {
    pub fn ambient_dim(&self) -> usize {
        self.roots[0].rank()
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn find(&self, v: &RootVector) -> Option<usize> {
        self.index.get(&v.doubled).copied()
    }

    pub fn find_doubled(&self, d: &[i32]) -> Option<usize> {
        self.index.get(d).copied()
    }

    /// Looks up a root, failing with a descriptive error.
    pub fn require(&self, v: &RootVector) -> Result<usize> {
        self.find(v).ok_or_else(|| Error::Invalid(format!("{v} is not a root of {}", self.spec)))
    }

    /// Index of the sign-canonical representative of `±roots[i]`.
    pub fn canonical(&self, i: usize) -> usize {
        if self.roots[i].is_sign_canonical() {
            i
        } else {
            self.negation[i]
        }
    }

    pub fn canonical_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.roots[i].is_sign_canonical()).collect()
    }

    pub fn simple_roots(&self) -> Vec<RootVector> {
        self.simple_indices.iter().map(|&i| self.roots[i].clone()).collect()
    }

    /// Doubled coordinates of every root, in root order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.spec.to_string(),
            "rank": self.rank(),
            "count": self.len(),
            "roots": self.roots.iter().map(|r| r.doubled.clone()).collect::<Vec<_>>(),
            "simple": self.simple_indices.clone(),
        })
    }

    fn from_parts(spec: TypeSpec, mut roots: Vec<RootVector>, simple: Vec<RootVector>) -> Result<Self> {
        roots.sort();
        roots.dedup();
        let index: HashMap<Vec<i32>, usize> =
            roots.iter().enumerate().map(|(i, r)| (r.doubled.clone(), i)).collect();
        let negation = roots
            .iter()
            .map(|r| index.get(&r.neg().doubled).copied().ok_or(Error::NotAnAutomorphism))
            .collect::<Result<Vec<_>>>()?;
        let simple_indices = simple
            .iter()
            .map(|s| index.get(&s.doubled).copied().ok_or_else(|| Error::Invalid(format!("simple root {s} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { spec, roots, simple_indices, negation, warnings: Vec::new(), index })
    }
}

fn pm_pairs(n: usize, out: &mut Vec<RootVector>) {
    for i in 0..n {
        for j in i + 1..n {
            for (si, sj) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                let mut d = vec![0; n];
                d[i] = si;
                d[j] = sj;
                out.push(RootVector::from_doubled(d));
            }
        }
    }
}

fn halves(n: usize, keep: impl Fn(&[i32]) -> bool, out: &mut Vec<RootVector>) {
    for bits in 0u32..(1 << n) {
        let d: Vec<i32> = (0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
        if keep(&d) {
            out.push(RootVector::from_doubled(d));
        }
    }
}

fn e8_simple() -> Vec<RootVector> {
    let mut s = vec![RootVector::from_doubled(vec![1, -1, -1, -1, -1, -1, -1, 1])];
    s.push(RootVector::from_doubled(vec![2, 2, 0, 0, 0, 0, 0, 0]));
    for i in 1..7 {
        let mut d = vec![0; 8];
        d[i] = 2;
        d[i - 1] = -2;
        s.push(RootVector::from_doubled(d));
    }
    s
}

fn chain_simple(n: usize, dim: usize) -> Vec<RootVector> {
    (1..n).map(|i| RootVector::e(i, dim).sub(&RootVector::e(i + 1, dim))).collect()
}

/// Builds the Bourbaki realization of an irreducible root system.
pub fn build_root_system(spec: TypeSpec) -> Result<RootSystem> {
    spec.validate()?;
    let n = spec.rank;
    let mut warnings = Vec::new();
    let mut sys = match spec.family {
        Family::A => {
            let dim = n + 1;
            let mut roots = Vec::new();
            for i in 1..=dim {
                for j in 1..=dim {
                    if i != j {
                        roots.push(RootVector::e(i, dim).sub(&RootVector::e(j, dim)));
                    }
                }
            }
            RootSystem::from_parts(spec, roots, chain_simple(dim, dim))?
        }
        Family::B | Family::C => {
            if spec.family == Family::C {
                warnings.push(format!("C{n} is treated as B{n}: both share the Weyl group"));
            }
            let mut roots = Vec::new();
            pm_pairs(n, &mut roots);
            for i in 1..=n {
                roots.push(RootVector::e(i, n));
                roots.push(RootVector::e(i, n).neg());
            }
            let mut simple = chain_simple(n, n);
            simple.push(RootVector::e(n, n));
            RootSystem::from_parts(TypeSpec::new(Family::B, n), roots, simple)?
        }
        Family::D => {
            let mut roots = Vec::new();
            pm_pairs(n, &mut roots);
            let mut simple = chain_simple(n, n);
            simple.push(RootVector::e(n - 1, n).add(&RootVector::e(n, n)));
            RootSystem::from_parts(spec, roots, simple)?
        }
        Family::F => {
            let mut roots = Vec::new();
            pm_pairs(4, &mut roots);
            for i in 1..=4 {
                roots.push(RootVector::e(i, 4));
                roots.push(RootVector::e(i, 4).neg());
            }
            halves(4, |_| true, &mut roots);
            let simple = vec![
                RootVector::e(2, 4).sub(&RootVector::e(3, 4)),
                RootVector::e(3, 4).sub(&RootVector::e(4, 4)),
                RootVector::e(4, 4),
                RootVector::from_doubled(vec![1, -1, -1, -1]),
            ];
            RootSystem::from_parts(spec, roots, simple)?
        }
        Family::E => {
            let mut e8 = Vec::new();
            pm_pairs(8, &mut e8);
            halves(8, |d| d.iter().filter(|&&x| x < 0).count() % 2 == 0, &mut e8);
            let keep: Box<dyn Fn(&RootVector) -> bool> = match n {
                8 => Box::new(|_| true),
                7 => Box::new(|r| r.doubled[6] == -r.doubled[7]),
                _ => Box::new(|r| r.doubled[6] == -r.doubled[7] && r.doubled[5] == r.doubled[6]),
            };
            let roots: Vec<RootVector> = e8.into_iter().filter(|r| keep(r)).collect();
            let simple: Vec<RootVector> = e8_simple().into_iter().take(n).collect();
            RootSystem::from_parts(spec, roots, simple)?
        }
        Family::G | Family::I(_) => {
            return Err(Error::Unsupported(format!(
                "{spec} has no root geometry here; use the dihedral permutation model"
            )))
        }
    };
    sys.warnings = warnings;
    Ok(sys)
}

/// Vectors `a_i = e_{2i-1} - e_{2i}` and `b_i = e_{2i-1} + e_{2i}` in dimension `n`.
pub fn frame_a(i: usize, n: usize) -> RootVector {
    RootVector::e(2 * i - 1, n).sub(&RootVector::e(2 * i, n))
}

pub fn frame_b(i: usize, n: usize) -> RootVector {
    RootVector::e(2 * i - 1, n).add(&RootVector::e(2 * i, n))
}
