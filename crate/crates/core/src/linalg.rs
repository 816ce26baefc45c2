//! Small dense exact linear algebra, generic over [`ExactScalar`].

use crate::scalar::ExactScalar;

pub type Vector<S> = Vec<S>;
/// Row-major square or rectangular matrix.
pub type Matrix<S> = Vec<Vec<S>>;

pub fn dot<S: ExactScalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn identity<S: ExactScalar>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

pub fn mat_mul<S: ExactScalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(S::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn transpose<S: ExactScalar>(a: &Matrix<S>) -> Matrix<S> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec<S: ExactScalar>(a: &Matrix<S>, v: &[S]) -> Vector<S> {
    a.iter().map(|row| dot(row, v)).collect()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref<S: ExactScalar>(rows: &[Vec<S>]) -> (Matrix<S>, Vec<usize>) {
    let mut m: Matrix<S> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<S: ExactScalar>(rows: &[Vec<S>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : rows * x = 0}` in `S^ncols`.
pub fn nullspace<S: ExactScalar>(rows: &[Vec<S>], ncols: usize) -> Matrix<S> {
    let (r, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); ncols];
            v[f] = S::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Unnormalized Gram-Schmidt; zero vectors are dropped.
pub fn gram_schmidt<S: ExactScalar>(vs: &[Vec<S>]) -> Matrix<S> {
    let mut out: Matrix<S> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let c = dot(&w, u) / dot(u, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi = wi.clone() - c.clone() * ui.clone();
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            out.push(w);
        }
    }
    out
}

/// Orthogonal projection of `v` onto the span of the pairwise orthogonal `basis`.
pub fn project<S: ExactScalar>(v: &[S], orthogonal_basis: &[Vec<S>]) -> Vector<S> {
    let mut out = vec![S::zero(); v.len()];
    for b in orthogonal_basis {
        let c = dot(v, b) / dot(b, b);
        for (o, bi) in out.iter_mut().zip(b) {
            *o = o.clone() + c.clone() * bi.clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn nullspace_of_plane() {
        let rows = vec![vec![r(1), r(1), r(0)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(dot(&rows[0], v), r(0));
        }
    }

    #[test]
    fn gram_schmidt_is_orthogonal() {
        let vs = vec![vec![r(1), r(1), r(0)], vec![r(1), r(0), r(1)], vec![r(2), r(1), r(1)]];
        let gs = gram_schmidt(&vs);
        assert_eq!(gs.len(), 2);
        assert_eq!(dot(&gs[0], &gs[1]), r(0));
    }

    #[test]
    fn square_classes() {
        use crate::scalar::two_power_square_class;
        assert_eq!(two_power_square_class(&r(2)), Some(1));
        assert_eq!(two_power_square_class(&Rational::new(1, 2)), Some(-1));
        assert_eq!(two_power_square_class(&r(36)), Some(2));
        assert_eq!(two_power_square_class(&r(3)), None);
        assert_eq!(two_power_square_class(&Rational::new(3, 4)), None);
    }
}
