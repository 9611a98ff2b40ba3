//! Finite abelian p-groups `⊕_i ℤ_{p^i}^{r_i}` and their numerical invariants.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::pow;

use crate::error::{Error, Result};

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `p^k` as an unbounded integer.
pub fn big_pow(p: u64, k: u64) -> BigUint {
    pow(
        BigUint::from(p),
        usize::try_from(k).expect("exponent fits in usize"),
    )
}

/// A non-trivial abelian p-group of exponent `p^e`, given by the
/// multiplicities `r_1..r_e` of its cyclic summands `ℤ_{p^i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianPGroup {
    p: u64,
    r: Vec<u64>,
}

/// Derived invariants of a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupInvariants {
    /// `s_i = 1 + Σ_{j≥i} r_j` for `1 ≤ i ≤ e+1`.
    pub s: Vec<u64>,
    pub e_prime: usize,
    /// Cyclic deficiency `log_p(|G| / exp(G))`.
    pub delta: u64,
    pub epsilon: Epsilon,
    /// Kulkarni invariant `p^δ / ε`.
    pub kulkarni_n: BigUint,
    /// `log_p |G|`.
    pub log_order: u64,
}

/// The lattice denominator ε(G): reduced genera lie in `(1/ε)·({-1} ∪ ℕ_0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Epsilon {
    One,
    Two,
}

impl Epsilon {
    pub fn value(self) -> u64 {
        match self {
            Epsilon::One => 1,
            Epsilon::Two => 2,
        }
    }
}

impl AbelianPGroup {
    pub fn new(p: u64, r: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        match r.last() {
            None => {
                return Err(Error::InvalidInvariants(
                    "trivial group: no invariants".into(),
                ))
            }
            Some(0) => {
                return Err(Error::InvalidInvariants(
                    "last multiplicity must be positive".into(),
                ))
            }
            Some(_) => {}
        }
        // Keep s_1 and log_p |G| representable.
        let mut rank: u64 = 1;
        let mut log_order: u64 = 0;
        for (i, &ri) in r.iter().enumerate() {
            rank = rank
                .checked_add(ri)
                .ok_or_else(|| Error::InvalidInvariants("multiplicities too large".into()))?;
            log_order = (i as u64 + 1)
                .checked_mul(ri)
                .and_then(|t| log_order.checked_add(t))
                .ok_or_else(|| Error::InvalidInvariants("group order too large".into()))?;
        }
        Ok(AbelianPGroup { p, r })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The exponent is `p^e`.
    pub fn e(&self) -> usize {
        self.r.len()
    }

    pub fn r(&self) -> &[u64] {
        &self.r
    }

    /// Number of cyclic summands.
    pub fn rank(&self) -> u64 {
        self.r.iter().sum()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() == 1
    }

    /// `s_1..s_{e+1}` (0-based: `s()[i-1] = s_i`).
    pub fn s(&self) -> Vec<u64> {
        let mut s = vec![1u64; self.e() + 1];
        for i in (0..self.e()).rev() {
            s[i] = s[i + 1] + self.r[i];
        }
        s
    }

    /// 0 for cyclic groups, else the largest `d` with `Σ_{j≥d} r_j ≥ 2`.
    pub fn e_prime(&self) -> usize {
        let mut tail = 0u64;
        for d in (1..=self.e()).rev() {
            tail += self.r[d - 1];
            if tail >= 2 {
                return d;
            }
        }
        0
    }

    pub fn log_order(&self) -> u64 {
        self.r
            .iter()
            .enumerate()
            .map(|(i, &ri)| (i as u64 + 1) * ri)
            .sum()
    }

    pub fn delta(&self) -> u64 {
        self.log_order() - self.e() as u64
    }

    pub fn epsilon(&self) -> Epsilon {
        if self.p == 2 && self.r[self.e() - 1] >= 2 {
            Epsilon::Two
        } else {
            Epsilon::One
        }
    }

    pub fn kulkarni_n(&self) -> BigUint {
        big_pow(self.p, self.delta()) / self.epsilon().value()
    }

    pub fn invariants(&self) -> GroupInvariants {
        GroupInvariants {
            s: self.s(),
            e_prime: self.e_prime(),
            delta: self.delta(),
            epsilon: self.epsilon(),
            kulkarni_n: self.kulkarni_n(),
            log_order: self.log_order(),
        }
    }

    /// Human-readable direct sum, e.g. `Z2+Z4^2`.
    pub fn structure(&self) -> String {
        let parts: Vec<String> = self
            .r
            .iter()
            .enumerate()
            .filter(|(_, &ri)| ri > 0)
            .map(|(i, &ri)| {
                let order = big_pow(self.p, i as u64 + 1);
                if ri == 1 {
                    format!("Z{order}")
                } else {
                    format!("Z{order}^{ri}")
                }
            })
            .collect();
        parts.join("+")
    }
}

impl fmt::Display for AbelianPGroup {
    /// Canonical encoding `p:r1,...,re`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.p)?;
        for (i, ri) in self.r.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{ri}")?;
        }
        Ok(())
    }
}

pub(crate) fn parse_u64(tok: &str, what: &str) -> Result<u64> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad {what} {tok:?}")));
    }
    tok.parse::<u64>()
        .map_err(|_| Error::Parse(format!("{what} {tok:?} out of range")))
}

pub(crate) fn parse_u64_list(s: &str, what: &str) -> Result<Vec<u64>> {
    s.split(',').map(|tok| parse_u64(tok, what)).collect()
}

impl FromStr for AbelianPGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, r) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected p:r1,...,re, got {s:?}")))?;
        let p = parse_u64(p, "prime")?;
        let r = parse_u64_list(r, "multiplicity")?;
        AbelianPGroup::new(p, r)
    }
}
