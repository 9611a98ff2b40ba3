//! Reduced genus spectra: the closed form for groups with large invariants,
//! an exhaustive oracle, certified scans for everything else, the inverse
//! construction, and small-genus classifications.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{big_pow, AbelianPGroup, Epsilon};
use crate::halfint::HalfInt;
use crate::mainline::{envelope, wp_eval, IntSeq};
use crate::mingenus::mu0;
use crate::signature::{classify_entries, lift_genus};

/// How many times [`full_spectrum`] widens its scan before giving up.
const MAX_WIDENINGS: usize = 64;

/// A co-finite subset of the lattice `(1/ε)·({-1} ∪ ℕ_0)`: every lattice
/// value `≥ min` except `gaps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumDescriptor {
    pub epsilon: Epsilon,
    pub min: HalfInt,
    /// Every lattice value from here on belongs to the set.
    pub stable: HalfInt,
    pub gaps: BTreeSet<HalfInt>,
    /// Largest value confirmed by enumeration; `None` for the closed form.
    pub verified_bound: Option<HalfInt>,
}

impl SpectrumDescriptor {
    /// Lattice step in doubled units.
    fn step_twice(&self) -> i64 {
        2 / self.epsilon.value() as i64
    }

    pub fn contains(&self, value: &HalfInt) -> bool {
        let on_lattice = (value.twice() % self.step_twice()).is_zero();
        on_lattice && value >= &self.min && !self.gaps.contains(value)
    }

    /// All members `≤ bound`, in increasing order.
    pub fn members_up_to(&self, bound: &HalfInt) -> Vec<HalfInt> {
        let step = HalfInt::from_twice(self.step_twice());
        let mut out = Vec::new();
        let mut v = self.min.clone();
        while &v <= bound {
            if !self.gaps.contains(&v) {
                out.push(v.clone());
            }
            v = &v + &step;
        }
        out
    }

    /// Smallest member `> 0`.
    pub fn smallest_positive(&self) -> HalfInt {
        let step = HalfInt::from_twice(self.step_twice());
        let mut v = if self.min.is_positive() {
            self.min.clone()
        } else {
            step.clone()
        };
        while self.gaps.contains(&v) {
            v = &v + &step;
        }
        v
    }

    /// The genus-level set `{1 + p^δ g_0}`.
    pub fn genus_view(&self, grp: &AbelianPGroup) -> GenusSpectrum {
        let lift = |v: &HalfInt| lift_genus(grp, v).expect("lattice values lift to integers");
        GenusSpectrum {
            min: lift(&self.min),
            period: grp.kulkarni_n(),
            stable: lift(&self.stable),
            gaps: self.gaps.iter().map(lift).collect(),
        }
    }
}

impl Serialize for SpectrumDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SpectrumDescriptor", 5)?;
        st.serialize_field("epsilon", &self.epsilon.value())?;
        st.serialize_field("min", &self.min)?;
        st.serialize_field("stable", &self.stable)?;
        st.serialize_field("gaps", &self.gaps)?;
        match &self.verified_bound {
            Some(b) => st.serialize_field("verified_bound", b)?,
            None => st.serialize_field("verified_bound", "inf")?,
        }
        st.end()
    }
}

/// `sp(G) = (min + N·ℕ_0) ∖ gaps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusSpectrum {
    pub min: BigInt,
    pub period: BigUint,
    pub stable: BigInt,
    pub gaps: BTreeSet<BigInt>,
}

impl fmt::Display for GenusSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = BigUint::from(1u32);
        let period = if self.period == one {
            String::new()
        } else {
            self.period.to_string()
        };
        let base = if self.min.is_zero() {
            format!("{period}ℕ_0")
        } else {
            format!("{}+{period}ℕ_0", self.min)
        };
        if self.gaps.is_empty() {
            return f.write_str(&base);
        }
        let gaps: Vec<String> = self.gaps.iter().map(ToString::to_string).collect();
        if base.contains('+') {
            write!(f, "({base}) ∖ {{{}}}", gaps.join(","))
        } else {
            write!(f, "{base} ∖ {{{}}}", gaps.join(","))
        }
    }
}

/// `r_i ≥ p-1` for `i < e` and `r_e ≥ max(p-2, 1)`.
pub fn has_large_invariants(grp: &AbelianPGroup) -> bool {
    let p = grp.p();
    let (top, rest) = grp.r().split_last().expect("non-empty invariants");
    rest.iter().all(|&ri| ri >= p - 1) && *top >= std::cmp::max(p.saturating_sub(2), 1)
}

/// `½(-1 - p^e + Σ (p^e - p^{e-i}) r_i)`.
pub(crate) fn large_invariant_mu0(p: u64, r: &[u64]) -> HalfInt {
    let e = r.len() as u64;
    let pe = big_pow(p, e);
    let mut twice = -BigInt::from(1) - BigInt::from(pe.clone());
    for (i, &ri) in r.iter().enumerate() {
        twice += BigInt::from(&pe - big_pow(p, e - 1 - i as u64)) * ri;
    }
    HalfInt::from_twice(twice)
}

pub fn closed_form_spectrum(grp: &AbelianPGroup) -> Result<SpectrumDescriptor> {
    if !has_large_invariants(grp) {
        return Err(Error::Unsupported(format!(
            "{grp} does not have large invariants"
        )));
    }
    let min = large_invariant_mu0(grp.p(), grp.r());
    Ok(SpectrumDescriptor {
        epsilon: grp.epsilon(),
        stable: min.clone(),
        min,
        gaps: BTreeSet::new(),
        verified_bound: None,
    })
}

/// Every reduced genus `≤ bound` of an admissible datum, by enumerating the
/// `γ`-coordinates `a_{e+1}, a_e, …, a_1`.
pub fn oracle_reduced_spectrum(grp: &AbelianPGroup, bound: &HalfInt) -> Result<BTreeSet<HalfInt>> {
    if bound < &HalfInt::from_int(-1) {
        return Err(Error::InvalidInput(
            "oracle bound must be at least -1".into(),
        ));
    }
    let too_big = || Error::Unsupported("oracle magnitudes exceed 128-bit range".into());
    let p = grp.p();
    let e = grp.e();
    let pe = big_pow(p, e as u64).to_i128().ok_or_else(too_big)?;
    let bound2 = bound.twice().to_i128().ok_or_else(too_big)?;
    // γ doubled is -2p^e + a_{e+1} + (p-1)·Σ a_j p^{e-j}; weights[j] = (p-1)p^{e-1-j}.
    let weights: Vec<i128> = (0..e)
        .map(|j| (p as i128 - 1) * (p as i128).pow((e - 1 - j) as u32))
        .collect();
    let budget = bound2.checked_add(2 * pe).ok_or_else(too_big)?;
    let ctx = Enumeration {
        p,
        s: grp.s(),
        e_prime: grp.e_prime(),
        weights,
        prefix_weight: prefix_sums(e, p),
    };
    let last_values: Vec<u64> = (0..=budget.max(0) as u64).step_by(2).collect();
    let found: Vec<BTreeSet<i128>> = last_values
        .par_iter()
        .map(|&last| {
            let mut seq = vec![0u64; e + 1];
            seq[e] = last;
            let mut out = BTreeSet::new();
            ctx.descend(&mut seq, e, budget - last as i128, &mut out);
            out
        })
        .collect();
    Ok(found
        .into_iter()
        .flatten()
        .map(|t| HalfInt::from_twice(t - 2 * pe))
        .collect())
}

/// `prefix[k] = (p-1)·Σ_{j<k} p^{e-1-j}`: the weight of positions `0..k`
/// when they all share one value.
fn prefix_sums(e: usize, p: u64) -> Vec<i128> {
    let mut out = vec![0i128; e + 1];
    for k in 1..=e {
        out[k] = out[k - 1] + (p as i128 - 1) * (p as i128).pow((e - k) as u32);
    }
    out
}

struct Enumeration {
    p: u64,
    s: Vec<u64>,
    e_prime: usize,
    weights: Vec<i128>,
    prefix_weight: Vec<i128>,
}

impl Enumeration {
    /// Positions `k..=e` of `seq` are fixed; choose position `k-1`.
    /// `room` is what the free positions may still contribute.
    fn descend(&self, seq: &mut [u64], k: usize, room: i128, out: &mut BTreeSet<i128>) {
        if k == 0 {
            if classify_entries(self.p, &self.s, self.e_prime, seq).is_some() {
                let e = seq.len() - 1;
                let spent: i128 = (0..e).map(|j| self.weights[j] * seq[j] as i128).sum();
                out.insert(seq[e] as i128 + spent);
            }
            return;
        }
        let mut v = seq[k];
        // Every free position is at least v, so the cheapest completion costs
        // v·prefix_weight[k]; that grows with v.
        while self.prefix_weight[k] * v as i128 <= room {
            seq[k - 1] = v;
            self.descend(seq, k - 1, room - self.weights[k - 1] * v as i128, out);
            v += 1;
        }
    }
}

/// Scan bound `((p-1)/2)·℘(ŝ)` in doubled units, where `ŝ` envelopes `s_1..s_e`.
fn completeness_bound_twice(grp: &AbelianPGroup) -> Result<BigInt> {
    let s = grp.s();
    let p = grp.p();
    let env = envelope(p, &IntSeq::from_u64s(&s[..grp.e()])?)?;
    Ok(BigInt::from(wp_eval(p, &env)?) * (p - 1))
}

/// The reduced spectrum, exact: closed form under the large-invariant
/// hypothesis, otherwise an oracle scan certified by a full window of width
/// `p^e` (adding `(2,…,2)` to any `γ`-sequence shifts `γ` by exactly `p^e`).
pub fn full_spectrum(grp: &AbelianPGroup) -> Result<SpectrumDescriptor> {
    if has_large_invariants(grp) {
        return closed_form_spectrum(grp);
    }
    let epsilon = grp.epsilon();
    let step = BigInt::from(2 / epsilon.value());
    let window = BigInt::from(big_pow(grp.p(), grp.e() as u64)) * 2;
    let mut top = completeness_bound_twice(grp)?;
    top -= &top % &step;
    for _ in 0..MAX_WIDENINGS {
        let values = oracle_reduced_spectrum(grp, &HalfInt::from_twice(top.clone()))?;
        let twice: BTreeSet<BigInt> = values.iter().map(|v| v.twice().clone()).collect();
        let floor = &top - &window;
        let mut v = &floor + &step;
        let mut complete = true;
        while v <= top {
            if !twice.contains(&v) {
                complete = false;
                break;
            }
            v += &step;
        }
        if !complete {
            top += &window;
            continue;
        }
        let min = values.iter().next().expect("window is non-empty").clone();
        let mut absent = Vec::new();
        let mut v = -step.clone();
        while v <= floor {
            if !twice.contains(&v) {
                absent.push(v.clone());
            }
            v += &step;
        }
        let stable = absent
            .last()
            .map_or_else(|| -step.clone(), |last| last + &step);
        let gaps = absent
            .into_iter()
            .filter(|v| v > min.twice() && v < &stable)
            .map(HalfInt::from_twice)
            .collect();
        return Ok(SpectrumDescriptor {
            epsilon,
            min,
            stable: HalfInt::from_twice(stable),
            gaps,
            verified_bound: Some(HalfInt::from_twice(top)),
        });
    }
    Err(Error::Certification(format!(
        "{grp}: no complete window found after {MAX_WIDENINGS} widenings"
    )))
}

/// Smallest admissible `m` for [`group_for_spectrum`], with its base sequence.
fn base_sequence(p: u64, e: usize) -> Vec<u64> {
    let last = std::cmp::max(p - 1, 2);
    (0..e)
        .map(|j| last + 2 * (e - 1 - j) as u64 * (p - 1))
        .collect()
}

/// Least `m` accepted by [`group_for_spectrum`].
pub fn group_for_spectrum_bound(p: u64, e: usize) -> BigUint {
    base_sequence(p, e)
        .iter()
        .fold(BigUint::zero(), |acc, &v| acc * p + v)
}

/// A group of exponent `p^e` with large invariants and
/// `μ_0 = -p^e + ((p-1)/2)·m`.
pub fn group_for_spectrum(p: u64, e: usize, m: &BigUint) -> Result<AbelianPGroup> {
    if !crate::group::is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if e == 0 {
        return Err(Error::InvalidInput("exponent must be at least 1".into()));
    }
    let bound = group_for_spectrum_bound(p, e);
    if m < &bound {
        return Err(Error::OutOfRange(format!(
            "m={m} is below the bound {bound}"
        )));
    }
    // m - ℘(a) = Σ b_i p^{e-i} with b_2..b_e < p; b_1 absorbs the rest.
    let mut excess = m - &bound;
    let mut digits = vec![BigUint::zero(); e];
    for j in (1..e).rev() {
        digits[j] = &excess % p;
        excess /= p;
    }
    digits[0] = excess;
    let s: Vec<BigUint> = base_sequence(p, e)
        .into_iter()
        .zip(digits)
        .map(|(a, b)| b + a)
        .collect();
    let mut r = Vec::with_capacity(e);
    for j in 0..e {
        let next = if j + 1 < e {
            s[j + 1].clone()
        } else {
            BigUint::from(1u32)
        };
        let rj = (&s[j] - next)
            .to_u64()
            .ok_or_else(|| Error::OutOfRange(format!("m={m} gives multiplicities beyond u64")))?;
        r.push(rj);
    }
    AbelianPGroup::new(p, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallGenusClass {
    GenusZero,
    GenusOne,
    Positive,
}

/// Groups whose minimum genus is 0 or 1.
pub fn classify_small(grp: &AbelianPGroup) -> SmallGenusClass {
    let p = grp.p();
    let r = grp.r();
    let class = if grp.is_cyclic() || (p == 2 && r == [2]) {
        SmallGenusClass::GenusZero
    } else if grp.rank() == 2 || (p == 2 && r == [3]) {
        SmallGenusClass::GenusOne
    } else {
        SmallGenusClass::Positive
    };
    let m = mu0(grp).mu0;
    let by_mu0 = if m.is_negative() {
        SmallGenusClass::GenusZero
    } else if m.is_positive() {
        SmallGenusClass::Positive
    } else {
        SmallGenusClass::GenusOne
    };
    assert_eq!(
        class, by_mu0,
        "closed classification disagrees with μ_0 for {grp}"
    );
    class
}

/// Closed forms for groups of rank at most 2.
fn rank_two_mu0_plus(grp: &AbelianPGroup) -> Option<HalfInt> {
    let p = grp.p();
    let e = grp.e() as u64;
    let r = grp.r();
    let pe = BigInt::from(big_pow(p, e));
    let pow = |k: u64| BigInt::from(big_pow(p, k));
    match grp.rank() {
        1 => Some(match (p, e) {
            (2, 1) | (2, 2) | (3, 1) => HalfInt::from_int(1),
            _ => HalfInt::from_twice(&pe - pow(e - 1) - 2),
        }),
        2 if r[r.len() - 1] == 2 => Some(match (p, e) {
            (2, 1) => HalfInt::half(),
            (3, 1) => HalfInt::from_int(1),
            _ => HalfInt::from_twice(pe - 3),
        }),
        2 => {
            let lower = r.iter().position(|&v| v > 0).expect("rank two") as u64 + 1;
            Some(if (p, lower, e) == (2, 1, 2) {
                HalfInt::from_int(1)
            } else {
                HalfInt::from_twice(&pe - pow(e - lower) - 2)
            })
        }
        _ => None,
    }
}

/// `μ_0^+(G)`: the least positive reduced genus.
pub fn mu0_plus(grp: &AbelianPGroup) -> Result<HalfInt> {
    match rank_two_mu0_plus(grp) {
        Some(v) => Ok(v),
        None => Ok(full_spectrum(grp)?.smallest_positive()),
    }
}

/// `μ^+(G) = 1 + p^δ·μ_0^+(G)`: the least genus `≥ 2`.
pub fn mu_plus(grp: &AbelianPGroup) -> Result<BigInt> {
    let v = mu0_plus(grp)?;
    Ok(lift_genus(grp, &v).expect("spectrum values lift to integers"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, r: &[u64]) -> AbelianPGroup {
        AbelianPGroup::new(p, r.to_vec()).unwrap()
    }

    fn half(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn halves(v: &[&str]) -> BTreeSet<HalfInt> {
        v.iter().map(|s| half(s)).collect()
    }

    #[test]
    fn large_invariant_examples() {
        assert!(has_large_invariants(&g(3, &[2, 9, 1])));
        assert!(has_large_invariants(&g(2, &[1, 1, 1, 18])));
        assert!(!has_large_invariants(&g(5, &[3, 4])));
        assert!(has_large_invariants(&g(2, &[1])));
        assert!(!has_large_invariants(&g(2, &[0, 1])));
    }

    #[test]
    fn closed_form_examples() {
        let d = closed_form_spectrum(&g(3, &[2, 9, 1])).unwrap();
        assert_eq!(
            (d.min.clone(), d.stable.clone()),
            (half("125"), half("125"))
        );
        let d = closed_form_spectrum(&g(2, &[1, 6, 2])).unwrap();
        assert_eq!((d.min.clone(), d.epsilon), (half("45/2"), Epsilon::Two));
        let grp = g(2, &[1, 1]);
        let d = closed_form_spectrum(&grp).unwrap();
        assert_eq!(d.min, half("0"));
        assert!(d.gaps.is_empty());
        assert_eq!(d.genus_view(&grp).to_string(), "1+2ℕ_0");
        assert!(matches!(
            closed_form_spectrum(&g(5, &[3, 4])),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            oracle_reduced_spectrum(&g(3, &[0, 1]), &half("6")).unwrap(),
            halves(&["-1", "0", "2", "3", "5", "6"])
        );
        // 8 = min γ(A_1) also lies in the spectrum of ℤ_16.
        assert_eq!(
            oracle_reduced_spectrum(&g(2, &[0, 0, 0, 1]), &half("9")).unwrap(),
            halves(&["-1", "0", "3", "5", "6", "7", "8", "9"])
        );
        assert_eq!(
            oracle_reduced_spectrum(&g(2, &[0, 2]), &half("2")).unwrap(),
            halves(&["0", "1/2", "3/2", "2"])
        );
        assert!(oracle_reduced_spectrum(&g(2, &[1]), &half("-3/2")).is_err());
    }

    #[test]
    fn full_spectrum_examples() {
        let grp = g(3, &[0, 1]);
        let d = full_spectrum(&grp).unwrap();
        assert_eq!((d.min.clone(), d.stable.clone()), (half("-1"), half("5")));
        assert_eq!(d.gaps, halves(&["1", "4"]));
        assert_eq!(d.genus_view(&grp).to_string(), "ℕ_0 ∖ {2,5}");

        let grp = g(2, &[1, 0, 1]);
        let d = full_spectrum(&grp).unwrap();
        assert_eq!(d.min, half("0"));
        assert!(d.gaps.is_empty());
        assert_eq!(d.genus_view(&grp).to_string(), "1+2ℕ_0");

        let grp = g(3, &[1, 1]);
        let d = full_spectrum(&grp).unwrap();
        assert_eq!(d.gaps, halves(&["1", "4"]));
        assert_eq!(d.genus_view(&grp).to_string(), "(1+3ℕ_0) ∖ {4,13}");
    }

    #[test]
    fn group_for_spectrum_examples() {
        let grp = group_for_spectrum(2, 3, &BigUint::from(34u32)).unwrap();
        assert_eq!(grp.r(), [2, 2, 1]);
        assert_eq!(closed_form_spectrum(&grp).unwrap().min, half("9"));
        let grp = group_for_spectrum(3, 2, &BigUint::from(20u32)).unwrap();
        assert_eq!(grp.r(), [4, 1]);
        assert_eq!(full_spectrum(&grp).unwrap().min, half("11"));
        let grp = group_for_spectrum(2, 3, &BigUint::from(35u32)).unwrap();
        assert_eq!(grp.r(), [2, 1, 2]);
        assert_eq!(grp.epsilon(), Epsilon::Two);
        assert_eq!(closed_form_spectrum(&grp).unwrap().min, half("19/2"));
        assert!(matches!(
            group_for_spectrum(2, 3, &BigUint::from(33u32)),
            Err(Error::OutOfRange(_))
        ));
        assert_eq!(group_for_spectrum_bound(3, 2), BigUint::from(20u32));
    }

    #[test]
    fn classify_small_examples() {
        assert_eq!(classify_small(&g(2, &[2])), SmallGenusClass::GenusZero);
        assert_eq!(classify_small(&g(2, &[3])), SmallGenusClass::GenusOne);
        assert_eq!(classify_small(&g(3, &[2])), SmallGenusClass::GenusOne);
        assert_eq!(
            classify_small(&g(5, &[0, 0, 1])),
            SmallGenusClass::GenusZero
        );
        assert_eq!(classify_small(&g(2, &[4])), SmallGenusClass::Positive);
    }

    #[test]
    fn mu0_plus_examples() {
        assert_eq!(mu0_plus(&g(3, &[0, 1])).unwrap(), half("2"));
        assert_eq!(mu_plus(&g(3, &[0, 1])).unwrap(), BigInt::from(3));
        assert_eq!(mu0_plus(&g(2, &[0, 2])).unwrap(), half("1/2"));
        assert_eq!(mu_plus(&g(2, &[0, 2])).unwrap(), BigInt::from(3));
        assert_eq!(mu0_plus(&g(2, &[1, 1])).unwrap(), half("1"));
        assert_eq!(mu_plus(&g(2, &[1, 1])).unwrap(), BigInt::from(3));
    }

    #[test]
    fn rank_two_closed_forms_match_scans() {
        for p in [2u64, 3, 5] {
            for e in 1..=3usize {
                let mut groups = Vec::new();
                let mut cyclic = vec![0; e];
                cyclic[e - 1] = 1;
                groups.push(cyclic.clone());
                let mut square = vec![0; e];
                square[e - 1] = 2;
                groups.push(square);
                for lower in 1..e {
                    let mut r = cyclic.clone();
                    r[lower - 1] = 1;
                    groups.push(r);
                }
                for r in groups {
                    let grp = g(p, &r);
                    if p.pow(e as u32) > 27 {
                        continue;
                    }
                    let closed = rank_two_mu0_plus(&grp).unwrap();
                    let scanned = full_spectrum(&grp).unwrap().smallest_positive();
                    assert_eq!(closed, scanned, "{grp}");
                }
            }
        }
    }
}
