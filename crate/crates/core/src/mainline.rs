//! Mainline integers: values `℘(b) = Σ b_i p^{e-i}` over non-increasing
//! sequences `b` dominating a given sequence.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A finite sequence of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntSeq(Vec<BigUint>);

impl IntSeq {
    pub fn new(entries: Vec<BigUint>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty sequence".into()));
        }
        Ok(IntSeq(entries))
    }

    pub fn from_u64s(entries: &[u64]) -> Result<Self> {
        IntSeq::new(entries.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// Entries as `u64`, if they all fit.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.0.iter().map(|v| v.to_u64()).collect()
    }
}

impl fmt::Display for IntSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for IntSeq {
    type Err = Error;

    /// Comma-separated decimal entries, no whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|tok| {
                if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse(format!("bad sequence entry {tok:?}")));
                }
                tok.parse::<BigUint>()
                    .map_err(|_| Error::Parse(format!("bad sequence entry {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        IntSeq::new(entries)
    }
}

/// `||a||`: the least consecutive difference, infinite for length one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GapNorm {
    Finite(BigUint),
    Infinite,
}

/// Minimum, stable bound and gaps of `𝒫(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainlineProfile {
    pub mu: BigUint,
    pub sigma: BigUint,
    pub gaps: BTreeSet<BigUint>,
}

/// `Σ a_i p^{e-i}`, by Horner's rule.
pub fn wp_eval(p: u64, a: &IntSeq) -> Result<BigUint> {
    if p == 0 {
        return Err(Error::InvalidInput("base must be at least 1".into()));
    }
    Ok(a.0.iter().fold(BigUint::zero(), |acc, v| acc * p + v))
}

/// The least non-increasing sequence dominating `a`.
pub fn hull(a: &IntSeq) -> IntSeq {
    let mut out = a.0.clone();
    for i in (0..out.len().saturating_sub(1)).rev() {
        if out[i] < out[i + 1] {
            out[i] = out[i + 1].clone();
        }
    }
    IntSeq(out)
}

/// The least sequence `â ≥ a` whose consecutive differences are at least `p-1`.
pub fn envelope(p: u64, a: &IntSeq) -> Result<IntSeq> {
    if p == 0 {
        return Err(Error::InvalidInput("base must be at least 1".into()));
    }
    if !a.is_non_increasing() {
        return Err(Error::InvalidInput(
            "envelope needs a non-increasing sequence".into(),
        ));
    }
    let mut out = a.0.clone();
    for i in (0..out.len().saturating_sub(1)).rev() {
        let floor = &out[i + 1] + (p - 1);
        if out[i] < floor {
            out[i] = floor;
        }
    }
    Ok(IntSeq(out))
}

pub fn gap_norm(a: &IntSeq) -> Result<GapNorm> {
    if !a.is_non_increasing() {
        return Err(Error::InvalidInput(
            "gap norm needs a non-increasing sequence".into(),
        ));
    }
    Ok(a.0
        .windows(2)
        .map(|w| &w[0] - &w[1])
        .min()
        .map_or(GapNorm::Infinite, GapNorm::Finite))
}

/// Whether `m = ℘(b)` for some non-increasing `b ≥ hull(a)`.
pub fn is_mainline(p: u64, a: &IntSeq, m: &BigUint) -> Result<bool> {
    if p < 2 {
        return Err(Error::InvalidInput("membership needs p >= 2".into()));
    }
    let floors = hull(a).0;
    let last = floors.len() - 1;
    Ok(fits(p, &floors, last, m, &BigUint::zero()))
}

/// Can `target` be written as `Σ_{j≤i} b_j p^{i-j}` with `b` non-increasing,
/// `b_j ≥ floors[j]` and `b_i ≥ above`?
fn fits(p: u64, floors: &[BigUint], i: usize, target: &BigUint, above: &BigUint) -> bool {
    let lo = std::cmp::max(&floors[i], above);
    if i == 0 {
        return target >= lo;
    }
    // b_i ≡ target (mod p); step through that residue class from lo.
    let want = target % p;
    let have = lo % p;
    let mut b = lo + ((want + p - have) % p);
    loop {
        let least = least_completion(p, floors, i, &b);
        if &least > target {
            return false;
        }
        let rest = (target - &b) / p;
        if fits(p, floors, i - 1, &rest, &b) {
            return true;
        }
        b += p;
    }
}

/// `b + Σ_{j<i} max(floors[j], b) p^{i-j}`, the smallest total once `b_i = b`.
fn least_completion(p: u64, floors: &[BigUint], i: usize, b: &BigUint) -> BigUint {
    let mut acc = BigUint::zero();
    for f in &floors[..i] {
        acc = acc * p + std::cmp::max(f, b);
    }
    acc * p + b
}

pub fn mainline_profile(p: u64, a: &IntSeq) -> Result<MainlineProfile> {
    if p < 2 {
        return Err(Error::InvalidInput("profile needs p >= 2".into()));
    }
    let h = hull(a);
    let mu = wp_eval(p, &h)?;
    let top = wp_eval(p, &envelope(p, &h)?)?;
    let mut gaps = BTreeSet::new();
    let mut m = top;
    while m > mu {
        m -= BigUint::one();
        if !is_mainline(p, &h, &m)? {
            gaps.insert(m.clone());
        }
    }
    let sigma = gaps
        .iter()
        .next_back()
        .map_or_else(|| mu.clone(), |g| g + 1u32);
    Ok(MainlineProfile { mu, sigma, gaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[u64]) -> IntSeq {
        IntSeq::from_u64s(v).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Every non-increasing b ≥ floors with b_1 ≤ cap, by plain recursion.
    fn all_values(p: u64, floors: &[u64], cap: u64) -> BTreeSet<u64> {
        fn rec(p: u64, floors: &[u64], cap: u64, prefix: &mut Vec<u64>, out: &mut BTreeSet<u64>) {
            if prefix.len() == floors.len() {
                out.insert(prefix.iter().fold(0, |acc, v| acc * p + v));
                return;
            }
            let i = prefix.len();
            let upper = prefix.last().copied().unwrap_or(cap);
            for b in floors[i]..=upper {
                prefix.push(b);
                rec(p, floors, cap, prefix, out);
                prefix.pop();
            }
        }
        let mut out = BTreeSet::new();
        rec(p, floors, cap, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn wp_examples() {
        assert_eq!(wp_eval(3, &seq(&[2, 1])).unwrap(), big(7));
        assert_eq!(wp_eval(2, &seq(&[0, 0, 0])).unwrap(), big(0));
        assert_eq!(wp_eval(2, &seq(&[6, 4, 2])).unwrap(), big(34));
        assert_eq!(wp_eval(1, &seq(&[3, 4])).unwrap(), big(7));
        assert!(IntSeq::from_u64s(&[]).is_err());
    }

    #[test]
    fn hull_examples() {
        assert_eq!(hull(&seq(&[1, 3, 2])), seq(&[3, 3, 2]));
        assert_eq!(hull(&seq(&[5, 2, 2])), seq(&[5, 2, 2]));
        assert_eq!(hull(&seq(&[0, 7])), seq(&[7, 7]));
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(envelope(3, &seq(&[2, 2])).unwrap(), seq(&[4, 2]));
        assert_eq!(envelope(3, &seq(&[5, 2])).unwrap(), seq(&[5, 2]));
        assert_eq!(envelope(1, &seq(&[3, 3, 1])).unwrap(), seq(&[3, 3, 1]));
        assert!(envelope(2, &seq(&[1, 2])).is_err());
    }

    #[test]
    fn gap_norm_examples() {
        assert_eq!(gap_norm(&seq(&[5, 2])).unwrap(), GapNorm::Finite(big(3)));
        assert_eq!(gap_norm(&seq(&[4])).unwrap(), GapNorm::Infinite);
        assert_eq!(gap_norm(&seq(&[3, 3, 2])).unwrap(), GapNorm::Finite(big(0)));
        assert!(GapNorm::Finite(big(1_000_000)) < GapNorm::Infinite);
    }

    #[test]
    fn membership_examples() {
        assert!(!is_mainline(2, &seq(&[2, 2]), &big(7)).unwrap());
        assert!(is_mainline(2, &seq(&[2, 2]), &big(6)).unwrap());
        for k in 0..200 {
            assert!(is_mainline(3, &seq(&[4, 2]), &big(14 + k)).unwrap());
        }
        assert!(!is_mainline(3, &seq(&[4, 2]), &big(13)).unwrap());
        assert!(is_mainline(1, &seq(&[1]), &big(1)).is_err());
    }

    #[test]
    fn profile_examples() {
        let prof = mainline_profile(2, &seq(&[2, 2])).unwrap();
        assert_eq!((prof.mu.clone(), prof.sigma.clone()), (big(6), big(8)));
        assert_eq!(prof.gaps, BTreeSet::from([big(7)]));
        let prof = mainline_profile(3, &seq(&[4, 2])).unwrap();
        assert_eq!((prof.mu, prof.sigma), (big(14), big(14)));
        assert!(prof.gaps.is_empty());
        assert_eq!(
            mainline_profile(2, &seq(&[1, 3, 2])).unwrap(),
            mainline_profile(2, &seq(&[3, 3, 2])).unwrap()
        );
    }

    #[test]
    fn membership_matches_enumeration_exhaustively() {
        for p in 2..=4u64 {
            for floors in [
                vec![0],
                vec![2, 2],
                vec![3, 1],
                vec![1, 1, 1],
                vec![4, 2, 0],
                vec![2, 2, 2],
            ] {
                let cap = 30;
                let values = all_values(p, &floors, cap);
                for m in 0..=cap {
                    assert_eq!(
                        is_mainline(p, &seq(&floors), &big(m)).unwrap(),
                        values.contains(&m),
                        "p={p} floors={floors:?} m={m}"
                    );
                }
            }
        }
    }

    fn non_increasing(max_len: usize, max_entry: u64) -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(0..=max_entry, 1..=max_len).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn hull_is_idempotent_and_dominating(v in prop::collection::vec(0u64..50, 1..6)) {
            let a = seq(&v);
            let h = hull(&a);
            prop_assert!(h.is_non_increasing());
            prop_assert_eq!(hull(&h), h.clone());
            prop_assert!(h.entries().iter().zip(a.entries()).all(|(x, y)| x >= y));
            prop_assert_eq!(h == a, a.is_non_increasing());
        }

        #[test]
        fn envelope_is_idempotent(v in non_increasing(5, 20), p in 1u64..7) {
            let a = seq(&v);
            let env = envelope(p, &a).unwrap();
            prop_assert_eq!(envelope(p, &env).unwrap(), env.clone());
            let wide = match gap_norm(&a).unwrap() {
                GapNorm::Infinite => true,
                GapNorm::Finite(g) => g >= big(p - 1),
            };
            prop_assert_eq!(env == a, wide);
        }

        #[test]
        fn agrees_with_enumeration(v in prop::collection::vec(0u64..6, 1..4), p in 2u64..5, m in 0u64..40) {
            let values = all_values(p, &hull(&seq(&v)).to_u64s().unwrap(), 40);
            prop_assert_eq!(is_mainline(p, &seq(&v), &big(m)).unwrap(), values.contains(&m));
        }

        #[test]
        fn co_finite_above_envelope(v in non_increasing(4, 8), p in 2u64..=5, k in 0u64..30) {
            let a = seq(&v);
            let top = wp_eval(p, &envelope(p, &a).unwrap()).unwrap();
            prop_assert!(is_mainline(p, &a, &(top + k)).unwrap());
        }
    }
}
