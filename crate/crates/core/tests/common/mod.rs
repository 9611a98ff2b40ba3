//! Helpers shared by the integration tests: group enumeration and
//! brute-force oracles built only on the datum-level predicates.

#![allow(dead_code)]

use std::collections::BTreeSet;

use genus_spectrum::signature::{is_admissible, reduced_genus};
use genus_spectrum::{AbelianPGroup, HalfInt, PDatum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub fn g(p: u64, r: &[u64]) -> AbelianPGroup {
    AbelianPGroup::new(p, r.to_vec()).unwrap()
}

pub fn half(s: &str) -> HalfInt {
    s.parse().unwrap()
}

/// All groups with exponent `p^e`, `e ≤ e_max`, and every `r_i ≤ r_max`.
pub fn groups(p: u64, e_max: usize, r_max: u64) -> Vec<AbelianPGroup> {
    let mut out = Vec::new();
    for e in 1..=e_max {
        let mut r = vec![0u64; e];
        loop {
            if r[e - 1] >= 1 {
                out.push(g(p, &r));
            }
            let mut k = 0;
            while k < e && r[k] == r_max {
                r[k] = 0;
                k += 1;
            }
            if k == e {
                break;
            }
            r[k] += 1;
        }
    }
    out
}

/// Calls `visit` for every datum `(x; h)` of length `e` with `h ≤ h_max`
/// and `x_i ≤ x_max[i]`.
pub fn for_each_datum(e: usize, x_max: &[u64], h_max: u64, mut visit: impl FnMut(&PDatum)) {
    let mut x = vec![0u64; e];
    loop {
        for h in 0..=h_max {
            visit(&PDatum::new(x.clone(), h).unwrap());
        }
        let mut k = 0;
        while k < e && x[k] == x_max[k] {
            x[k] = 0;
            k += 1;
        }
        if k == e {
            break;
        }
        x[k] += 1;
    }
}

/// Coordinate bounds so that every datum with reduced genus `≤ bound` is covered.
fn datum_bounds(grp: &AbelianPGroup, bound: &BigInt) -> (Vec<u64>, u64) {
    let p = BigInt::from(grp.p());
    let e = grp.e() as u32;
    let pe = p.pow(e);
    // (h-1)p^e ≤ g_0 ≤ bound, and each x_i (p^e - p^{e-i})/2 ≤ bound + p^e.
    let h_max = (bound / &pe + BigInt::from(1)).to_u64().unwrap();
    let x_max = (1..=e)
        .map(|i| {
            let w = &pe - p.pow(e - i);
            let twice: BigInt = (bound + &pe) * 2u32;
            (twice / w).to_u64().unwrap()
        })
        .collect();
    (x_max, h_max)
}

/// `{g_0(d) ≤ bound : d admissible}` by enumerating p-data directly.
pub fn brute_spectrum(grp: &AbelianPGroup, bound: &HalfInt) -> BTreeSet<HalfInt> {
    let ceiling = bound.twice() / 2 + 1;
    let (x_max, h_max) = datum_bounds(grp, &ceiling);
    let mut out = BTreeSet::new();
    for_each_datum(grp.e(), &x_max, h_max, |d| {
        if is_admissible(grp, d).unwrap() {
            let v = reduced_genus(grp, d).unwrap();
            if &v <= bound {
                out.insert(v);
            }
        }
    });
    out
}

/// `min g_0` over admissible data, starting from the datum `(0,…,0; h)`
/// with `2h ≥ s_1 - 1` as a candidate.
pub fn brute_mu0(grp: &AbelianPGroup) -> HalfInt {
    let s1 = grp.s()[0];
    let h0 = s1 / 2;
    let candidate = reduced_genus(grp, &PDatum::new(vec![0; grp.e()], h0).unwrap()).unwrap();
    brute_spectrum(grp, &candidate)
        .into_iter()
        .next()
        .expect("the candidate datum is admissible")
}
