//! Non-isomorphic groups sharing a genus spectrum: the kernel family of
//! exponent `p^3`, spectrum comparison, the varying-exponent construction
//! and exhaustive bounded searches.

pub mod compositions;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{big_pow, is_prime, AbelianPGroup, Epsilon};
use crate::halfint::HalfInt;
use crate::spectrum::{full_spectrum, has_large_invariants, large_invariant_mu0};
use compositions::WeightedCompositions;

/// How two groups with equal spectra are related.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Same `ε`, hence same `δ` and `μ_0`.
    EqualSpectrumSameLattice,
    /// `p = 2`, one group with `ε = 2` and one with `ε = 1`; the latter has
    /// `δ` one smaller and twice the reduced minimum genus.
    EqualSpectrumP2Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexamplePair {
    pub g1: AbelianPGroup,
    pub g2: AbelianPGroup,
    pub delta1: u64,
    pub delta2: u64,
    pub mu1: HalfInt,
    pub mu2: HalfInt,
    pub relation: Relation,
}

impl CounterexamplePair {
    fn new(g1: AbelianPGroup, g2: AbelianPGroup) -> Self {
        let relation = if g1.epsilon() == g2.epsilon() {
            Relation::EqualSpectrumSameLattice
        } else {
            Relation::EqualSpectrumP2Mixed
        };
        CounterexamplePair {
            delta1: g1.delta(),
            delta2: g2.delta(),
            mu1: large_invariant_mu0(g1.p(), g1.r()),
            mu2: large_invariant_mu0(g2.p(), g2.r()),
            relation,
            g1,
            g2,
        }
    }

    fn sort_key(&self) -> (u64, &[u64], &[u64]) {
        (self.delta1.max(self.delta2), self.g1.r(), self.g2.r())
    }
}

impl Serialize for CounterexamplePair {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("CounterexamplePair", 5)?;
        st.serialize_field("g1", &self.g1.to_string())?;
        st.serialize_field("g2", &self.g2.to_string())?;
        st.serialize_field("delta", &[self.delta1, self.delta2])?;
        st.serialize_field("mu0", &[&self.mu1, &self.mu2])?;
        st.serialize_field("relation", &self.relation)?;
        st.end()
    }
}

/// `(p+2, -2p-1, p)`: spans the integer row kernel of the matrix with
/// columns `(1,2,3)` and `(p^3-p^2, p^3-p, p^3-1)`.
pub fn rho(p: u64) -> [i128; 3] {
    let p = i128::from(p);
    [p + 2, -2 * p - 1, p]
}

/// Shift an exponent-`p^3` group along the kernel: `r + k·ρ`.
pub fn e3_family(grp: &AbelianPGroup, k: i64) -> Result<AbelianPGroup> {
    if grp.e() != 3 {
        return Err(Error::InvalidInput(format!(
            "{grp} does not have exponent p^3"
        )));
    }
    let shift = rho(grp.p());
    let mut r = Vec::with_capacity(3);
    for (ri, di) in grp.r().iter().zip(shift) {
        let v = i128::from(*ri) + i128::from(k) * di;
        let v = u64::try_from(v)
            .map_err(|_| Error::OutOfFamily(format!("shift by {k} leaves the group range")))?;
        r.push(v);
    }
    let shifted = AbelianPGroup::new(grp.p(), r)
        .map_err(|err| Error::OutOfFamily(format!("shift by {k}: {err}")))?;
    if !has_large_invariants(grp) || !has_large_invariants(&shifted) {
        return Err(Error::OutOfFamily(format!(
            "shift by {k} leaves the large-invariant range"
        )));
    }
    if shifted.epsilon() != grp.epsilon() {
        return Err(Error::OutOfFamily(format!(
            "shift by {k} changes the lattice"
        )));
    }
    Ok(shifted)
}

/// The `l+1` groups `r + k·ρ`, `0 ≤ k ≤ l`, with `r = (r_1, (p-1)+l(2p+1), r_3)`.
pub fn e3_family_members(p: u64, r1: u64, r3: u64, l: u64) -> Result<Vec<AbelianPGroup>> {
    let r2 = (p - 1) + l * (2 * p + 1);
    let base = AbelianPGroup::new(p, vec![r1, r2, r3])?;
    (0..=l)
        .map(|k| {
            let k = i64::try_from(k).map_err(|_| Error::OutOfRange("family too long".into()))?;
            e3_family(&base, k)
        })
        .collect()
}

/// Exact comparison of genus spectra.
pub fn spectra_equal(g1: &AbelianPGroup, g2: &AbelianPGroup) -> Result<bool> {
    if g1.p() != g2.p() {
        return Ok(false);
    }
    let v1 = full_spectrum(g1)?.genus_view(g1);
    let v2 = full_spectrum(g2)?.genus_view(g2);
    Ok(v1.min == v2.min && v1.period == v2.period && v1.gaps == v2.gaps)
}

/// The pair from the varying-exponent construction for odd `p`: exponents
/// `p^{p+2}` and `p^{p+1}`, equal cyclic deficiency and `μ_0`.
pub fn varying_exponent_pair(p: u64) -> Result<(AbelianPGroup, AbelianPGroup)> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if p < 3 {
        return Err(Error::Unsupported("the construction needs p odd".into()));
    }
    let mut r = vec![p - 1; p as usize];
    r.push(p);
    r.push(p.pow(3) + p.pow(2) - 2);
    let r_tilde = if p == 3 {
        vec![177, 3, 2, 1]
    } else {
        let mut v = vec![p.pow(4) + 3 * p.pow(3) + 2 * p.pow(2) - p - 1];
        v.extend(std::iter::repeat_n(p - 1, p as usize - 4));
        v.extend([p, p, p - 1, p - 2]);
        v
    };
    Ok((AbelianPGroup::new(p, r)?, AbelianPGroup::new(p, r_tilde)?))
}

/// Which lattices the two groups of a searched pair may live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LatticeFilter {
    #[default]
    Any,
    /// Both groups with `ε = 1`.
    BothInteger,
    /// Both groups with `ε = 2` (`p = 2` only).
    BothHalf,
    /// The exponent-`p^e` group with `ε = 2`, the other with `ε = 1`
    /// (`p = 2` only).
    Mixed,
    /// The exponent-`p^e` group with `ε = 1`, the other with `ε = 2`
    /// (`p = 2`, `e ≠ e_tilde` only).
    MixedReversed,
}

impl std::str::FromStr for LatticeFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(LatticeFilter::Any),
            "integer" => Ok(LatticeFilter::BothInteger),
            "half" => Ok(LatticeFilter::BothHalf),
            "mixed" => Ok(LatticeFilter::Mixed),
            "mixed-reversed" => Ok(LatticeFilter::MixedReversed),
            _ => Err(Error::Parse(format!("unknown lattice filter {s:?}"))),
        }
    }
}

/// One side of a search: groups of exponent `p^e` on one lattice.
#[derive(Debug, Clone)]
struct Side {
    p: u64,
    e: usize,
    epsilon: Epsilon,
    comps: WeightedCompositions,
    /// `p^e + 1`.
    offset: BigInt,
}

impl Side {
    fn new(p: u64, e: usize, epsilon: Epsilon) -> Self {
        let pe = BigInt::from(big_pow(p, e as u64));
        let weights = (1..=e)
            .map(|i| &pe - BigInt::from(big_pow(p, (e - i) as u64)))
            .collect();
        let mut floors = vec![p - 1; e];
        let (top_floor, cap) = match (p, epsilon) {
            (2, Epsilon::One) => (1, Some(1)),
            (2, Epsilon::Two) => (2, None),
            _ => (std::cmp::max(p - 2, 1), None),
        };
        floors[e - 1] = top_floor;
        Side {
            p,
            e,
            epsilon,
            comps: WeightedCompositions::new(weights, floors, cap),
            offset: pe + 1,
        }
    }

    /// `δ` of this side's groups with `N = p^n`.
    fn delta(&self, n: u64) -> u64 {
        n + u64::from(self.epsilon == Epsilon::Two)
    }

    /// `ε·μ_0 = ε(F - p^e - 1)/2` for the weighted sum `F`, as an interval.
    fn key_range(&self, n: u64) -> Option<(BigInt, BigInt)> {
        let total = self.delta(n) + self.e as u64;
        let (lo, hi) = self.comps.weight_range(total)?;
        let eps = BigInt::from(self.epsilon.value());
        let two = BigInt::from(2);
        let klo = (eps.clone() * (lo - &self.offset)).div_ceil(&two);
        let khi = (eps * (hi - &self.offset)).div_floor(&two);
        (klo <= khi).then_some((klo, khi))
    }

    /// Groups with `N = p^n` and key in `[klo, khi]`, bucketed by key.
    fn buckets(&self, n: u64, klo: &BigInt, khi: &BigInt) -> BTreeMap<BigInt, Vec<Vec<u64>>> {
        let total = self.delta(n) + self.e as u64;
        let (flo, fhi) = match self.epsilon {
            Epsilon::One => (klo * 2 + &self.offset, khi * 2 + &self.offset),
            Epsilon::Two => (klo + &self.offset, khi + &self.offset),
        };
        let mut out: BTreeMap<BigInt, Vec<Vec<u64>>> = BTreeMap::new();
        let eps = BigInt::from(self.epsilon.value());
        self.comps
            .for_each_in_window(total, &flo, &fhi, |r, weight| {
                let twice_key = &eps * (weight - &self.offset);
                debug_assert!(twice_key.is_even());
                out.entry(twice_key / 2).or_default().push(r.to_vec());
            });
        out
    }

    fn group(&self, r: Vec<u64>) -> AbelianPGroup {
        AbelianPGroup::new(self.p, r).expect("search produces valid invariants")
    }
}

/// All pairs `(G, G̃)` with exponents `p^e` and `p^{e_tilde}`, large
/// invariants, equal spectra and both cyclic deficiencies `≤ delta_max`,
/// restricted to the lattices allowed by `filter`.
///
/// For `e = e_tilde` each unordered pair is reported once: in mixed pairs
/// `g1` is the group with `ε = 2`, otherwise `g1` has the smaller `r`.
pub fn search_counterexamples(
    p: u64,
    e: usize,
    e_tilde: usize,
    delta_max: u64,
    filter: LatticeFilter,
) -> Result<Vec<CounterexamplePair>> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if e_tilde == 0 || e_tilde > e {
        return Err(Error::InvalidInput("need 1 <= e_tilde <= e".into()));
    }
    use Epsilon::{One, Two};
    let combos: Vec<(Epsilon, Epsilon)> = match (p == 2, filter) {
        (false, LatticeFilter::Any | LatticeFilter::BothInteger) => vec![(One, One)],
        (false, _) => Vec::new(),
        (true, LatticeFilter::BothInteger) => vec![(One, One)],
        (true, LatticeFilter::BothHalf) => vec![(Two, Two)],
        (true, LatticeFilter::Mixed) => vec![(Two, One)],
        (true, LatticeFilter::MixedReversed) if e == e_tilde => Vec::new(),
        (true, LatticeFilter::MixedReversed) => vec![(One, Two)],
        (true, LatticeFilter::Any) if e == e_tilde => vec![(One, One), (Two, Two), (Two, One)],
        (true, LatticeFilter::Any) => vec![(One, One), (Two, Two), (Two, One), (One, Two)],
    };
    let jobs: Vec<(Side, Side, u64)> = combos
        .into_iter()
        .flat_map(|(c1, c2)| {
            let (a, b) = (Side::new(p, e, c1), Side::new(p, e_tilde, c2));
            let levels: Vec<u64> = (0..=delta_max)
                .filter(|&n| a.delta(n) <= delta_max && b.delta(n) <= delta_max)
                .collect();
            levels.into_iter().map(move |n| (a.clone(), b.clone(), n))
        })
        .collect();
    let mut pairs: Vec<CounterexamplePair> = jobs
        .par_iter()
        .flat_map_iter(|(a, b, n)| pairs_at(a, b, *n, e == e_tilde && a.epsilon == b.epsilon))
        .collect();
    pairs.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    Ok(pairs)
}

fn pairs_at(a: &Side, b: &Side, n: u64, same_side: bool) -> Vec<CounterexamplePair> {
    let (Some((alo, ahi)), Some((blo, bhi))) = (a.key_range(n), b.key_range(n)) else {
        return Vec::new();
    };
    let lo = alo.max(blo);
    let hi = ahi.min(bhi);
    if lo > hi {
        return Vec::new();
    }
    let left = a.buckets(n, &lo, &hi);
    let mut out = Vec::new();
    if same_side {
        for members in left.values() {
            let mut sorted = members.clone();
            sorted.sort();
            for (i, r1) in sorted.iter().enumerate() {
                for r2 in &sorted[i + 1..] {
                    out.push(CounterexamplePair::new(
                        a.group(r1.clone()),
                        a.group(r2.clone()),
                    ));
                }
            }
        }
        return out;
    }
    let right = b.buckets(n, &lo, &hi);
    for (key, members) in &left {
        if let Some(others) = right.get(key) {
            for r1 in members {
                for r2 in others {
                    out.push(CounterexamplePair::new(
                        a.group(r1.clone()),
                        b.group(r2.clone()),
                    ));
                }
            }
        }
    }
    out
}

/// `log_p N(G)` and the minimum genus: for large-invariant groups these
/// determine the spectrum.
pub fn spectrum_key(grp: &AbelianPGroup) -> Result<(BigUint, BigInt)> {
    let d = full_spectrum(grp)?;
    let view = d.genus_view(grp);
    Ok((view.period, view.min))
}
