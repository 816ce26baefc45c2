//! Upper bounds for the degree-`d` part of the restriction image.

use std::collections::HashMap;
use std::sync::Arc;

use crate::f2::{rank_with_certificate, BitVec};
use crate::kinv::{bits, orbit_sums, stacked_mod_s, Context, KInvariant, Monomial};
use crate::{Error, Result};

use super::catalog::{Bound, Catalog};

/// `s`-free monomials of degree `d` in `k` variables.
pub fn degree_monomials(k: usize, d: u32) -> Vec<Monomial> {
    if k > 20 {
        return Vec::new();
    }
    (0u64..1 << k).filter(|m| m.count_ones() == d).map(Monomial::from_mask).collect()
}

/// Per site, the normalizer orbits of degree-`d` monomials, as a map mask → orbit index.
pub fn site_orbits(cat: &Catalog, d: u32) -> Result<Vec<(usize, HashMap<u64, usize>)>> {
    let mut out = Vec::with_capacity(cat.sites.len());
    for (s, site) in cat.sites.iter().enumerate() {
        if site.ctx.len() > 20 {
            return Err(Error::Unsupported("too many coordinates to enumerate monomials".into()));
        }
        let perms = cat.normalizers[s]
            .iter()
            .map(|n| cat.engine.normalizer_perm(&n.element, site))
            .collect::<Result<Vec<_>>>()?;
        let monos = degree_monomials(site.ctx.len(), d);
        let sums = orbit_sums(&site.ctx, &monos, &perms)?;
        let mut index = HashMap::new();
        for (o, sum) in sums.iter().enumerate() {
            for t in sum.terms() {
                index.insert(t.mask, o);
            }
        }
        out.push((sums.len(), index));
    }
    Ok(out)
}

/// Dimension of `⊕_sites` orbit sums cut out by the relations of the catalog's bound.
/// `None` for encoded bounds, which are evaluated in the sub-model.
pub fn constrained_dim(cat: &Catalog, d: u32) -> Result<Option<usize>> {
    match &cat.bound {
        Bound::Encoded(_) => Ok(None),
        Bound::Orbits => Ok(Some(site_orbits(cat, d)?.iter().map(|(c, _)| c).sum())),
        Bound::BnCross { .. } => {
            let orbits = site_orbits(cat, d)?;
            let offsets: Vec<usize> = orbits
                .iter()
                .scan(0, |acc, (c, _)| {
                    let o = *acc;
                    *acc += c;
                    Some(o)
                })
                .collect();
            let unknowns: usize = orbits.iter().map(|(c, _)| c).sum();
            let unknown = |site: usize, mask: u64| -> Result<usize> {
                orbits[site].1.get(&mask).map(|o| offsets[site] + o).ok_or_else(|| Error::Invalid("monomial outside orbits".into()))
            };
            let mut rows = Vec::new();
            let mut relate = |a: usize, b: usize| {
                if a != b {
                    let mut v = BitVec::zeros(unknowns.max(1));
                    v.set(a);
                    v.set(b);
                    rows.push(v);
                }
            };
            let sites = &cat.sites;
            for l in 0..sites.len() {
                for l2 in l + 1..sites.len() {
                    let common = common_labels(&sites[l].ctx, &sites[l2].ctx);
                    for nu in subsets(&common, d as usize) {
                        let a = unknown(l, mask_of(&sites[l].ctx, &nu)?)?;
                        let b = unknown(l2, mask_of(&sites[l2].ctx, &nu)?)?;
                        relate(a, b);
                    }
                }
            }
            if d >= 2 {
                for l in 0..sites.len().saturating_sub(1) {
                    let (c0, c1) = (&sites[l].ctx, &sites[l + 1].ctx);
                    let common = common_labels(c0, c1);
                    let block0 = [format!("e{}", 2 * l + 1), format!("e{}", 2 * l + 2)];
                    let block1 = [format!("a{}", l + 1), format!("b{}", l + 1)];
                    for nu in subsets(&common, d as usize - 2) {
                        let mut left = nu.clone();
                        left.extend(block0.iter().cloned());
                        let mut right = nu.clone();
                        right.extend(block1.iter().cloned());
                        let a = unknown(l, mask_of(c0, &left)?)?;
                        let b = unknown(l + 1, mask_of(c1, &right)?)?;
                        relate(a, b);
                    }
                }
            }
            let rank = rank_with_certificate(&rows).rank;
            Ok(Some(unknowns - rank))
        }
    }
}

fn common_labels(a: &Context, b: &Context) -> Vec<String> {
    a.labels.iter().filter(|l| b.labels.contains(l)).cloned().collect()
}

fn mask_of(ctx: &Context, labels: &[String]) -> Result<u64> {
    labels.iter().try_fold(0u64, |m, l| {
        ctx.position(l).map(|p| m | 1 << p).ok_or_else(|| Error::Invalid(format!("label {l} missing")))
    })
}

fn subsets(items: &[String], k: usize) -> Vec<Vec<String>> {
    if k > items.len() {
        return Vec::new();
    }
    (0u64..1 << items.len())
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| bits(m).map(|i| items[i].clone()).collect())
        .collect()
}

/// Mod-`s` rank of families of per-site restrictions.
pub fn stacked_rank(families: &[Vec<KInvariant>]) -> usize {
    let refs: Vec<&[KInvariant]> = families.iter().map(|f| f.as_slice()).collect();
    rank_with_certificate(&stacked_mod_s(&refs)).rank
}

/// Context helper for callers building per-site zero vectors.
pub fn zeros(ctxs: &[Arc<Context>]) -> Vec<KInvariant> {
    ctxs.iter().map(KInvariant::zero).collect()
}
