//! The reduced minimum genus `μ_0(G)`: per-index minima of `γ` on the
//! pieces `A_i` of the admissible set, the index set `I(G)`, attaining
//! p-data, and Maclachlan's formula for comparison.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::group::{big_pow, AbelianPGroup};
use crate::halfint::HalfInt;
use crate::mainline::{hull, IntSeq};
use crate::signature::{alpha_inv, lift_genus, GammaSeq, PDatum};

/// Data for one piece `A_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMinimum {
    pub epsilon_i: u8,
    pub mu_i: HalfInt,
    pub min_gamma: HalfInt,
    /// The unique sequence in `A_i` where `γ` is minimal.
    pub attaining: GammaSeq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinGenusReport {
    pub mu0: HalfInt,
    pub minimum_genus: BigInt,
    pub index_set: Vec<usize>,
    /// Whether index 0 could be left out of `I(G)` (`s_1` even).
    pub zero_droppable: bool,
    /// Every index `0..=e`, not only those in `index_set`.
    pub per_index: BTreeMap<usize, IndexMinimum>,
    pub attaining_data: Vec<PDatum>,
}

fn check_index(grp: &AbelianPGroup, i: usize) -> Result<()> {
    if i > grp.e() {
        return Err(Error::OutOfRange(format!(
            "index {i} exceeds exponent {}",
            grp.e()
        )));
    }
    Ok(())
}

/// The least `ε_i ∈ {0,1,2}` with `s_i + ε_i - 2⌊s_{i+1}/2⌋ ≥ 2`.
pub fn epsilon_i(grp: &AbelianPGroup, i: usize) -> Result<u8> {
    check_index(grp, i)?;
    if i == 0 || i == grp.e() {
        return Ok(0);
    }
    let s = grp.s();
    let (si, next) = (s[i - 1], s[i]);
    let next_even = next % 2 == 0;
    Ok(match si - next {
        0 if next_even => 2,
        0 => 1,
        1 if next_even => 1,
        _ => 0,
    })
}

/// `μ_i = γ(s^i)`.
fn mu_i(grp: &AbelianPGroup, s: &[u64], i: usize) -> HalfInt {
    let p = grp.p();
    let e = grp.e() as u64;
    let wp = s[..i]
        .iter()
        .fold(BigUint::from(0u32), |acc, &v| acc * p + v);
    let inner = BigInt::from(2 * (s[i] / 2)) + BigInt::from(wp) * (p - 1);
    let twice = BigInt::from(big_pow(p, e - i as u64)) * inner - BigInt::from(big_pow(p, e)) * 2;
    HalfInt::from_twice(twice)
}

/// Largest `j < i` with `s_j - s_i ≥ gap`, or 0.
fn last_index_above(s: &[u64], i: usize, gap: u64) -> usize {
    (1..i)
        .rev()
        .find(|&j| s[j - 1] >= s[i - 1] + gap)
        .unwrap_or(0)
}

/// `(μ_i, min γ(A_i), attaining sequence)`.
pub fn min_gamma_a(grp: &AbelianPGroup, i: usize) -> Result<(HalfInt, HalfInt, GammaSeq)> {
    let eps = epsilon_i(grp, i)?;
    let s = grp.s();
    let p = grp.p();
    let e = grp.e();
    let mu = mu_i(grp, &s, i);
    let pw = |j: usize| BigInt::from(big_pow(p, (e - j) as u64));
    let correction = match eps {
        0 => BigInt::from(0),
        1 => pw(last_index_above(&s, i, 1)) - pw(i),
        _ => pw(last_index_above(&s, i, 2)) + pw(last_index_above(&s, i, 1)) - pw(i) * 2,
    };
    let min_value = &mu + &HalfInt::from_twice(correction);

    let tail = 2 * (s[i] / 2);
    let mut raised: Vec<u64> = s[..i].to_vec();
    if i > 0 {
        raised[i - 1] += u64::from(eps);
    }
    raised.extend(std::iter::repeat_n(tail, e + 1 - i));
    let hulled = hull(&IntSeq::from_u64s(&raised)?)
        .to_u64s()
        .expect("hull of u64 entries fits in u64");
    Ok((mu, min_value, GammaSeq::new(hulled)?))
}

/// `I(G)`: index 0 together with every `i` having `ε_i = 0`.
pub fn index_set(grp: &AbelianPGroup) -> Vec<usize> {
    (0..=grp.e())
        .filter(|&i| i == 0 || epsilon_i(grp, i) == Ok(0))
        .collect()
}

pub fn mu0(grp: &AbelianPGroup) -> MinGenusReport {
    let e = grp.e();
    let per_index: BTreeMap<usize, IndexMinimum> = (0..=e)
        .map(|i| {
            let (mu_i, min_gamma, attaining) = min_gamma_a(grp, i).expect("index in range");
            let epsilon_i = epsilon_i(grp, i).expect("index in range");
            (
                i,
                IndexMinimum {
                    epsilon_i,
                    mu_i,
                    min_gamma,
                    attaining,
                },
            )
        })
        .collect();
    let index_set = index_set(grp);
    let mu0 = index_set
        .iter()
        .map(|i| per_index[i].mu_i.clone())
        .min()
        .expect("index set contains 0");
    let overall = per_index
        .values()
        .map(|m| &m.min_gamma)
        .min()
        .expect("non-empty");
    assert_eq!(
        &mu0, overall,
        "minimum over I(G) disagrees with minimum over all pieces"
    );
    let zero_droppable = grp.s()[0].is_multiple_of(2);
    if zero_droppable {
        let without_zero = index_set[1..].iter().map(|i| &per_index[i].mu_i).min();
        assert_eq!(
            without_zero,
            Some(&mu0),
            "dropping index 0 changed the minimum"
        );
    }
    let attaining_data = per_index
        .values()
        .filter(|m| m.min_gamma == mu0)
        .map(|m| alpha_inv(&m.attaining))
        .collect();
    let minimum_genus = lift_genus(grp, &mu0).expect("minimum genus is integral");
    MinGenusReport {
        mu0,
        minimum_genus,
        index_set,
        zero_droppable,
        per_index,
        attaining_data,
    }
}

/// Maclachlan's `ν_h` for the invariant sequence `(p^{r_1 times}, p^2 …)`.
pub fn maclachlan_nu(grp: &AbelianPGroup, h: u64) -> Result<HalfInt> {
    if grp.is_cyclic() {
        return Err(Error::Unsupported(
            "Maclachlan's formula excludes cyclic groups".into(),
        ));
    }
    let rank = grp.rank();
    if h > rank / 2 {
        return Err(Error::OutOfRange(format!("h={h} exceeds {}", rank / 2)));
    }
    let p = grp.p();
    let e = grp.e() as u64;
    let pe = BigInt::from(big_pow(p, e));
    // n_k = p^{order index of the k-th summand}; pe/n_k = p^{e - that index}.
    let quotient = |k: u64| -> BigInt {
        let mut seen = 0u64;
        for (i, &ri) in grp.r().iter().enumerate() {
            seen += ri;
            if k <= seen {
                return BigInt::from(big_pow(p, e - (i as u64 + 1)));
            }
        }
        unreachable!("k within rank")
    };
    let count = rank - 2 * h;
    let mut twice = (BigInt::from(h) - 1) * &pe * 2;
    for k in 1..=count {
        twice += &pe - quotient(k);
    }
    if count >= 1 {
        twice += &pe - quotient(count);
    }
    Ok(HalfInt::from_twice(twice))
}
