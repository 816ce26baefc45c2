use std::sync::Arc;

use proptest::prelude::*;
use weylinv::basisver::formulas::{bn_u, bn_uv, bn_v};
use weylinv::forms::{
    e_fold, form_of_linear_action, form_of_permutation_action, modified_total, pfister_gram_check, sw,
    sw_product_coefficient, total_sw, DiagonalEntry, DiagonalForm, OrbitDecomp, OrbitPfisterDecomp,
};
use weylinv::kinv::{
    lambda, linear_independence, orbit_sums, x_basis, Context, CoordinateMap, KInvariant, Monomial,
};
use weylinv::rootsys::RootVector;

fn ctx(k: usize) -> Arc<Context> {
    Context::new((1..=k).map(|i| format!("t{i}")))
}

fn element(k: usize) -> impl Strategy<Value = Vec<(bool, u64)>> {
    prop::collection::vec((any::<bool>(), 0u64..1 << k), 0..10)
}

fn build(c: &Arc<Context>, terms: &[(bool, u64)]) -> KInvariant {
    let mut out = KInvariant::zero(c);
    for &(two, mask) in terms {
        out.add_assign(&KInvariant::monomial(c, Monomial { two, mask })).unwrap();
    }
    out
}

fn rows(src: usize, dst: usize) -> impl Strategy<Value = Vec<(u64, bool)>> {
    prop::collection::vec((0u64..1 << dst, any::<bool>()), src)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in element(5), b in element(5), c in element(5)) {
        let k = ctx(5);
        let (a, b, c) = (build(&k, &a), build(&k, &b), build(&k, &c));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.add(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&KInvariant::one(&k)).unwrap(), a.clone());
        prop_assert!(a.mul(&KInvariant::zero(&k)).unwrap().is_zero());
    }

    #[test]
    fn degrees_add(a in element(5), b in element(5), d in 0u32..4, e in 0u32..4) {
        let k = ctx(5);
        let (a, b) = (build(&k, &a).homogeneous(d), build(&k, &b).homogeneous(e));
        prop_assert!(a.mul(&b).unwrap().is_homogeneous(d + e));
    }

    #[test]
    fn substitution_is_functorial(x in element(5), f in rows(5, 4), g in rows(4, 3)) {
        let (k5, k4, k3) = (ctx(5), ctx(4), ctx(3));
        let f = CoordinateMap::new(&k5, &k4, f.into_iter().map(Some).collect()).unwrap();
        let g = CoordinateMap::new(&k4, &k3, g.into_iter().map(Some).collect()).unwrap();
        let x = build(&k5, &x);
        let stepwise = x.substitute(&f).unwrap().substitute(&g).unwrap();
        prop_assert_eq!(stepwise, x.substitute(&f.compose(&g).unwrap()).unwrap());
    }

    #[test]
    fn substitution_is_multiplicative(a in element(5), b in element(5), f in rows(5, 4)) {
        let (k5, k4) = (ctx(5), ctx(4));
        let f = CoordinateMap::new(&k5, &k4, f.into_iter().map(Some).collect()).unwrap();
        let (a, b) = (build(&k5, &a), build(&k5, &b));
        prop_assert_eq!(
            a.mul(&b).unwrap().substitute(&f).unwrap(),
            a.substitute(&f).unwrap().mul(&b.substitute(&f).unwrap()).unwrap()
        );
    }

    #[test]
    fn orbit_sum_count_matches_union_find(perms in prop::collection::vec(Just((0..5).collect::<Vec<usize>>()).prop_shuffle(), 0..3), d in 0u32..=5) {
        let k = ctx(5);
        let monos: Vec<Monomial> = (0u64..32).filter(|m| m.count_ones() == d).map(Monomial::from_mask).collect();
        let sums = orbit_sums(&k, &monos, &perms).unwrap();
        let mut parent: Vec<usize> = (0..32).collect();
        fn root(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for p in &perms {
            for m in &monos {
                let img = weylinv::kinv::bits(m.mask).fold(0usize, |acc, i| acc | 1 << p[i]);
                let (a, b) = (root(&mut parent, m.mask as usize), root(&mut parent, img));
                parent[a] = b;
            }
        }
        let mut roots: Vec<usize> = monos.iter().map(|m| root(&mut parent, m.mask as usize)).collect();
        roots.sort_unstable();
        roots.dedup();
        prop_assert_eq!(sums.len(), roots.len());
        let total: usize = sums.iter().map(|s| s.num_terms()).sum();
        prop_assert_eq!(total, monos.len());
    }
}

#[test]
fn products_of_u_and_v_sums() {
    for n in 2..=6usize {
        for l in 0..=n / 2 {
            let c = Context::frame(l, n);
            for d in 0..=n as u32 {
                for f in 0..=n as u32 {
                    let via_basis = |keep: &dyn Fn(&weylinv::kinv::XIndex) -> bool, deg: u32| {
                        let mut acc = KInvariant::zero(&c);
                        for idx in lambda(deg, l, n).into_iter().filter(|i| keep(i)) {
                            acc.add_assign(&x_basis(idx, l, n, &c).unwrap()).unwrap();
                        }
                        acc
                    };
                    let u = via_basis(&|i| i.c == 0 && i.e == 0, d);
                    let v = via_basis(&|i| i.a == 0 && i.b == 0, f);
                    assert_eq!(u, bn_u(l, n, d, &c).unwrap());
                    assert_eq!(v, bn_v(l, n, f, &c).unwrap());
                    let rhs = via_basis(&|i| 2 * i.c.count_ones() + i.e.count_ones() == f, d + f);
                    assert_eq!(u.mul(&v).unwrap(), rhs, "n={n} L={l} d={d} f={f}");
                    assert_eq!(rhs, bn_uv(l, n, d, f, &c).unwrap());
                }
            }
        }
    }
}

#[test]
fn t_squared_and_expansion() {
    let c = Context::new(["t1", "t2"]);
    let t1 = KInvariant::var(&c, 0);
    let t2 = KInvariant::var(&c, 1);
    assert!(t1.mul(&t1).unwrap().is_zero());
    let one_s = KInvariant::one(&c).add(&KInvariant::s(&c)).unwrap();
    let got = one_s.add(&t1).unwrap().mul(&one_s.add(&t2).unwrap()).unwrap();
    assert_eq!(got.to_string(), "1 + {t1} + {t2} + {2}{t1} + {2}{t2} + {t1}{t2}");
}

#[test]
fn independence_reduces_mod_s() {
    let c = ctx(3);
    let t = |i| KInvariant::var(&c, i);
    let s_t2 = KInvariant::monomial(&c, Monomial { two: true, mask: 0b10 });
    let lifted = t(0).add(&s_t2).unwrap();
    let v = linear_independence(&[t(0), lifted.clone()]).unwrap();
    assert!(!v.independent);
    assert_eq!(v.dependency.unwrap(), vec![0, 1]);
    assert!(t(0).times_s().add(&lifted.times_s()).unwrap().is_zero());
    assert!(linear_independence(&[t(0), t(1).add(&KInvariant::s(&c)).unwrap(), t(2)]).unwrap().independent);
}

fn two(k: usize) -> (Arc<Context>, RootVector, RootVector) {
    (ctx(k), RootVector::e(1, 2), RootVector::e(2, 2))
}

#[test]
fn worked_quadratic_forms() {
    let (c, e1, e2) = two(2);
    let q = form_of_linear_action(&[e1.sub(&e2), e1.add(&e2)], &c).unwrap();
    assert_eq!(q.to_string(), "⟨2t1, 2t2⟩");
    let one = ctx(1);
    let q = form_of_linear_action(&[e1.sub(&e2)], &one).unwrap();
    assert_eq!(q.sorted_entries(), vec![(1, 0), (1, 1)]);
    let q = form_of_linear_action(&[e1.sub(&e2), e1.sub(&e2)], &c).unwrap();
    assert_eq!(q.sorted_entries(), vec![(1, 0), (1, 3)]);
    assert_eq!(sw(&form_of_linear_action(&[e1.sub(&e2), e1.add(&e2)], &c).unwrap(), 2).to_string(), "{2}{t1} + {2}{t2} + {t1}{t2}");
}

#[test]
fn pfister_forms() {
    let c = ctx(2);
    let pf = DiagonalForm::new(&c, [0u64, 1, 2, 3].iter().map(|&mask| DiagonalEntry { two_exp: 0, mask }).collect());
    assert_eq!(total_sw(&pf).to_string(), "1 + {t1}{t2}");
    let d = form_of_permutation_action(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], &c).unwrap();
    assert_eq!(d.orbits.len(), 1);
    assert_eq!(d.orbits[0].fold, 2);
    assert_eq!(d.orbits[0].delta_masks, vec![1, 2]);
    assert_eq!(total_sw(&d.to_diagonal()).to_string(), "1 + {t1}{t2}");
    assert_eq!(modified_total(&d.to_diagonal()).to_string(), "1 + {t1}{t2}");
}

#[test]
fn signed_axis_swap_gives_fold_one() {
    let n = 3;
    let c = ctx(n);
    let gens: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..2 * n).map(|p| if p == i { i + n } else if p == i + n { i } else { p }).collect())
        .collect();
    let d = form_of_permutation_action(2 * n, &gens, &c).unwrap();
    assert_eq!(d.orbits.len(), n);
    for (i, o) in d.orbits.iter().enumerate() {
        assert_eq!(o.fold, 1);
        assert_eq!(o.delta_masks, vec![1 << i]);
    }
}

#[test]
fn regular_action_is_one_pfister_orbit() {
    for n in 1..=5usize {
        let c = ctx(n);
        let gens: Vec<Vec<usize>> = (0..n).map(|j| (0..1 << n).map(|p| p ^ (1 << j)).collect()).collect();
        let d = form_of_permutation_action(1 << n, &gens, &c).unwrap();
        assert_eq!(d.orbits.len(), 1);
        assert_eq!(d.orbits[0].fold, n as u32);
        assert_eq!(d.orbits[0].delta_masks, (0..n).map(|j| 1u64 << j).collect::<Vec<_>>());
        let all = KInvariant::monomial(&c, Monomial::from_mask((1 << n) - 1));
        assert_eq!(e_fold(&d, n as u32).unwrap(), all);
    }
}

#[test]
fn gram_vectors() {
    for n in 0..=4 {
        assert!(pfister_gram_check(n).unwrap().passed(), "n = {n}");
    }
}

#[test]
fn sw_product_shadow() {
    for n in 1..=5usize {
        let c = ctx(n);
        let q = DiagonalForm::new(&c, (0..n).map(|i| DiagonalEntry { two_exp: 0, mask: 1 << i }).collect());
        for r in 0..=n as u32 {
            for s in 0..=n as u32 {
                let prod = sw(&q, r).mul(&sw(&q, s)).unwrap();
                let want = if r + s <= n as u32 && sw_product_coefficient(r, s) {
                    sw(&q, r + s)
                } else {
                    KInvariant::zero(&c)
                };
                assert_eq!(prod, want, "n={n} r={r} s={s}");
                let binom_odd = (0..=r).fold(1u64, |acc, i| if i == 0 { 1 } else { acc * (r + s - i + 1) as u64 / i as u64 }) % 2 == 1;
                assert_eq!(sw_product_coefficient(r, s), binom_odd);
            }
        }
    }
}

#[test]
fn linear_and_permutation_routes_agree_for_a_n() {
    // The reflection action of S_{n+1} on R^{n+1} is the coordinate permutation action.
    for n in 1..=6usize {
        let dim = n + 1;
        let k = dim / 2;
        let c = ctx(k);
        let frame: Vec<RootVector> =
            (0..k).map(|i| RootVector::e(2 * i + 1, dim).sub(&RootVector::e(2 * i + 2, dim))).collect();
        let linear = form_of_linear_action(&frame, &c).unwrap();
        let gens: Vec<Vec<usize>> = (0..k)
            .map(|i| (0..dim).map(|p| if p == 2 * i { p + 1 } else if p == 2 * i + 1 { p - 1 } else { p }).collect())
            .collect();
        let perm = form_of_permutation_action(dim, &gens, &c).unwrap().to_diagonal();
        assert_eq!(total_sw(&linear), total_sw(&perm), "A{n}");
    }
}

fn decomp() -> impl Strategy<Value = Vec<(u32, Vec<u64>)>> {
    prop::collection::vec((0u32..4).prop_flat_map(|f| (Just(f), prop::collection::vec(1u64..16, f as usize))), 0..5)
}

fn make(c: &Arc<Context>, orbits: &[(u32, Vec<u64>)]) -> OrbitPfisterDecomp {
    OrbitPfisterDecomp {
        ctx: c.clone(),
        orbits: orbits
            .iter()
            .map(|(f, ds)| OrbitDecomp { members: vec![], fold: *f, delta_masks: ds.clone(), scale_exponent: *f })
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn e_fold_is_additive(a in decomp(), b in decomp(), m in 0u32..4) {
        let c = ctx(4);
        let (x, y) = (make(&c, &a), make(&c, &b));
        let both = x.concat(&y).unwrap();
        match (e_fold(&x, m), e_fold(&y, m)) {
            (Ok(ex), Ok(ey)) => prop_assert_eq!(e_fold(&both, m).unwrap(), ex.add(&ey).unwrap()),
            _ => prop_assert!(e_fold(&both, m).is_err()),
        }
    }
}
