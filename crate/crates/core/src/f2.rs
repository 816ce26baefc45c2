//! Linear algebra over the field with two elements.

/// A fully reduced basis of a subspace of `F_2^k`, `k <= 64`.
/// Each row owns a distinct pivot (its lowest set bit) that is clear in every other row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubspaceBasis {
    rows: Vec<u64>,
}

impl SubspaceBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_mask(&self) -> u64 {
        self.rows.iter().fold(0, |m, r| m | (r & r.wrapping_neg()))
    }

    pub fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            let p = r & r.wrapping_neg();
            if v & p != 0 {
                v ^= r;
            }
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let p = v & v.wrapping_neg();
        for r in self.rows.iter_mut() {
            if *r & p != 0 {
                *r ^= v;
            }
        }
        self.rows.push(v);
        true
    }
}

/// Dense bit vector of fixed width.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(bits: usize) -> Self {
        Self { words: vec![0; bits.div_ceil(64).max(1)] }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// Rank of a list of vectors together with a dependency (indices summing to zero)
/// when the vectors are dependent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    pub dependency: Option<Vec<usize>>,
}

pub fn rank_with_certificate(vectors: &[BitVec]) -> RankCertificate {
    let n = vectors.len();
    let mut rows: Vec<(usize, BitVec, BitVec)> = Vec::new();
    let mut dependency = None;
    for (i, v) in vectors.iter().enumerate() {
        let mut v = v.clone();
        let mut combo = BitVec::zeros(n);
        combo.set(i);
        for (p, r, c) in &rows {
            if v.get(*p) {
                v.xor_assign(r);
                combo.xor_assign(c);
            }
        }
        match v.first_one() {
            Some(p) => {
                for (_, r, c) in rows.iter_mut() {
                    if r.get(p) {
                        r.xor_assign(&v);
                        c.xor_assign(&combo);
                    }
                }
                rows.push((p, v, combo));
            }
            None => {
                if dependency.is_none() {
                    dependency = Some(combo.ones());
                }
            }
        }
    }
    RankCertificate { rank: rows.len(), dependency }
}

/// Dimension of the kernel of the linear map sending basis vector `i` to `images[i]`.
pub fn kernel_dim(images: &[BitVec]) -> usize {
    images.len() - rank_with_certificate(images).rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_basis_reduces() {
        let mut b = SubspaceBasis::new();
        assert!(b.insert(0b011));
        assert!(b.insert(0b110));
        assert!(!b.insert(0b101));
        assert_eq!(b.dim(), 2);
        assert!(b.contains(0b101));
        assert!(!b.contains(0b001 << 3));
    }

    #[test]
    fn dependency_certificate() {
        let mk = |bits: &[usize]| {
            let mut v = BitVec::zeros(3);
            for &b in bits {
                v.set(b);
            }
            v
        };
        let vs = vec![mk(&[0, 1]), mk(&[1, 2]), mk(&[0, 2])];
        let cert = rank_with_certificate(&vs);
        assert_eq!(cert.rank, 2);
        let dep = cert.dependency.unwrap();
        let mut sum = BitVec::zeros(3);
        for i in dep {
            sum.xor_assign(&vs[i]);
        }
        assert!(sum.is_zero());
    }
}
