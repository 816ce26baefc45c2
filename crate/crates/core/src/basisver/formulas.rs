//! Closed restriction formulas used as oracles for the recipe engine.

use std::sync::Arc;

use crate::kinv::{elementary, lambda, Context, KInvariant, Monomial, XIndex};
use crate::Result;

fn sum_over(l: usize, n: usize, d: u32, ctx: &Arc<Context>, keep: impl Fn(&XIndex) -> bool) -> Result<KInvariant> {
    let mut terms = Vec::new();
    for idx in lambda(d, l, n) {
        if keep(&idx) {
            terms.push(Monomial::from_mask(idx.mask(l, n)?));
        }
    }
    Ok(KInvariant::from_terms(ctx, terms))
}

/// `Σ_{(A,B,∅,∅) ∈ Λ^d_L} x`.
pub fn bn_u(l: usize, n: usize, d: u32, ctx: &Arc<Context>) -> Result<KInvariant> {
    sum_over(l, n, d, ctx, |i| i.c == 0 && i.e == 0)
}

/// `Σ_{(∅,∅,C,E) ∈ Λ^d_L} x`.
pub fn bn_v(l: usize, n: usize, d: u32, ctx: &Arc<Context>) -> Result<KInvariant> {
    sum_over(l, n, d, ctx, |i| i.a == 0 && i.b == 0)
}

/// `Σ_{(A,B,C,E) ∈ Λ^{d+f}_L, 2|C|+|E| = f} x`.
pub fn bn_uv(l: usize, n: usize, d: u32, f: u32, ctx: &Arc<Context>) -> Result<KInvariant> {
    sum_over(l, n, d + f, ctx, |i| 2 * i.c.count_ones() + i.e.count_ones() == f)
}

/// `Σ_{Λ^d_L} x`.
pub fn lambda_sum(l: usize, n: usize, d: u32, ctx: &Arc<Context>) -> Result<KInvariant> {
    sum_over(l, n, d, ctx, |_| true)
}

/// `φ^d_i = Σ_{(A,B,C) ∈ Λ^d_m, |C| = i} x` on `P(a_1, b_1, …, a_m, b_m)`.
pub fn dn_phi(m: usize, d: u32, i: u32, ctx: &Arc<Context>) -> Result<KInvariant> {
    sum_over(m, 2 * m, d, ctx, |x| x.c.count_ones() == i)
}

/// `Σ_{(A,B,∅) ∈ Λ^m_m, |A| even} x`.
pub fn dn_e(m: usize, ctx: &Arc<Context>) -> Result<KInvariant> {
    sum_over(m, 2 * m, m as u32, ctx, |x| x.c == 0 && x.a.count_ones() % 2 == 0)
}

/// `Σ_{(A,B,∅) ∈ Λ^m_m, |A| odd} x`.
pub fn dn_u_minus_e(m: usize, ctx: &Arc<Context>) -> Result<KInvariant> {
    sum_over(m, 2 * m, m as u32, ctx, |x| x.c == 0 && x.a.count_ones() % 2 == 1)
}

/// `w_d` of the permutation action of `S_{n+1}` at `P(a_1, …, a_k)`: `e_d + (d-1){2} e_{d-1}`.
pub fn an_w(k: usize, d: u32, ctx: &Arc<Context>) -> KInvariant {
    let vars: Vec<usize> = (0..k).collect();
    let mut out = elementary(ctx, &vars, d as usize);
    if d >= 2 && d.is_multiple_of(2) {
        out.add_assign(&elementary(ctx, &vars, d as usize - 1).times_s()).expect("same context");
    }
    out
}

/// The restrictions of `w_1, v_1, w_2` to `P(e_1, e_2)` and `P(e_1 - e_2, e_1 + e_2)` in `W(B2)`.
/// Coordinates are ordered as in the frame: `(e1, e2)` and `(e1-e2, e1+e2)`.
pub fn i2_square(name: &str, site: usize, ctx: &Arc<Context>) -> Option<KInvariant> {
    let x0 = KInvariant::var(ctx, 0);
    let x1 = KInvariant::var(ctx, 1);
    let sum = x0.add(&x1).ok()?;
    let both = KInvariant::monomial(ctx, Monomial::from_mask(0b11));
    match (name, site) {
        ("w1", _) => Some(sum),
        ("v1", 0) => Some(sum),
        ("v1", _) => Some(KInvariant::zero(ctx)),
        ("w2", 0) => Some(both),
        ("w2", _) => both.add(&sum.times_s()).ok(),
        _ => None,
    }
}
