//! p-data `(x_1..x_e; h)`, the genus maps, the `α`/`γ` coordinate change
//! and the arithmetic admissibility criterion.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{big_pow, parse_u64, parse_u64_list, AbelianPGroup};
use crate::halfint::HalfInt;

/// An abbreviated signature: `x_i` periods of order `p^i` and orbit genus `h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PDatum {
    x: Vec<u64>,
    h: u64,
}

impl PDatum {
    /// Rejects empty `x` and data whose `α`-image would overflow `u64`.
    pub fn new(x: Vec<u64>, h: u64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidInput(
                "datum needs at least one period entry".into(),
            ));
        }
        x.iter()
            .try_fold(h.checked_mul(2), |acc, &v| acc.map(|a| a.checked_add(v)))
            .flatten()
            .ok_or_else(|| Error::OutOfRange("datum entries too large".into()))?;
        Ok(PDatum { x, h })
    }

    pub fn x(&self) -> &[u64] {
        &self.x
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn e(&self) -> usize {
        self.x.len()
    }

    /// Largest `i` with `x_i > 0`, or 0.
    pub fn f(&self) -> usize {
        self.x.iter().rposition(|&v| v > 0).map_or(0, |i| i + 1)
    }

    /// 0 if at most one period, else the largest `d` with `Σ_{j=d}^{f} x_j ≥ 2`.
    pub fn f_prime(&self) -> usize {
        if self.x.iter().sum::<u64>() <= 1 {
            return 0;
        }
        let mut tail = 0u64;
        for d in (1..=self.f()).rev() {
            tail += self.x[d - 1];
            if tail >= 2 {
                return d;
            }
        }
        0
    }
}

impl fmt::Display for PDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.x.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ";{}", self.h)
    }
}

impl FromStr for PDatum {
    type Err = Error;

    /// `x1,...,xe;h`.
    fn from_str(s: &str) -> Result<Self> {
        let (x, h) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected x1,...,xe;h, got {s:?}")))?;
        PDatum::new(
            parse_u64_list(x, "period multiplicity")?,
            parse_u64(h, "orbit genus")?,
        )
    }
}

/// A non-increasing sequence `a_1..a_{e+1}` with `a_{e+1}` even: the image of `α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaSeq(Vec<u64>);

impl GammaSeq {
    pub fn new(a: Vec<u64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::InvalidInput(
                "gamma sequence needs length e+1 >= 2".into(),
            ));
        }
        if !a.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "gamma sequence must be non-increasing".into(),
            ));
        }
        if !a[a.len() - 1].is_multiple_of(2) {
            return Err(Error::InvalidInput(
                "last entry of a gamma sequence must be even".into(),
            ));
        }
        Ok(GammaSeq(a))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// The exponent `e` this sequence belongs to.
    pub fn e(&self) -> usize {
        self.0.len() - 1
    }
}

impl fmt::Display for GammaSeq {
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

fn check_len(grp: &AbelianPGroup, len: usize) -> Result<()> {
    if grp.e() != len {
        return Err(Error::InvalidInput(format!(
            "datum length {len} does not match exponent p^{}",
            grp.e()
        )));
    }
    Ok(())
}

/// `(h-1)p^e + ½ Σ x_i (p^e - p^{e-i})`.
pub fn reduced_genus(grp: &AbelianPGroup, d: &PDatum) -> Result<HalfInt> {
    check_len(grp, d.e())?;
    let p = grp.p();
    let e = grp.e() as u64;
    let pe = BigInt::from(big_pow(p, e));
    let mut twice = (BigInt::from(d.h) - 1) * &pe * 2;
    for (i, &xi) in d.x.iter().enumerate() {
        let w = &pe - BigInt::from(big_pow(p, e - i as u64 - 1));
        twice += w * xi;
    }
    Ok(HalfInt::from_twice(twice))
}

/// `1 + p^δ · g_0`.
pub fn genus(grp: &AbelianPGroup, d: &PDatum) -> Result<BigInt> {
    lift_genus(grp, &reduced_genus(grp, d)?)
        .ok_or_else(|| Error::InvalidInput(format!("datum {d} gives a non-integral genus")))
}

/// The genus `1 + p^δ · g_0` belonging to a reduced genus, if integral.
pub fn lift_genus(grp: &AbelianPGroup, g0: &HalfInt) -> Option<BigInt> {
    let twice = g0.twice() * BigInt::from(big_pow(grp.p(), grp.delta()));
    twice.is_even().then(|| twice / 2 + 1)
}

/// `(x;h) ↦ (Σ_{j≥1} x_j + 2h, …, x_e + 2h, 2h)`.
pub fn alpha(d: &PDatum) -> GammaSeq {
    let mut a = vec![2 * d.h; d.e() + 1];
    for i in (0..d.e()).rev() {
        a[i] = a[i + 1] + d.x[i];
    }
    GammaSeq(a)
}

pub fn alpha_inv(a: &GammaSeq) -> PDatum {
    let v = &a.0;
    let x = v.windows(2).map(|w| w[0] - w[1]).collect();
    PDatum {
        x,
        h: v[v.len() - 1] / 2,
    }
}

/// `-p^e + a_{e+1}/2 + ((p-1)/2)·℘(a_1..a_e)`.
pub fn gamma(p: u64, e: usize, a: &GammaSeq) -> Result<HalfInt> {
    if a.e() != e {
        return Err(Error::InvalidInput(format!(
            "gamma sequence has length {}, expected {}",
            a.0.len(),
            e + 1
        )));
    }
    let wp = a.0[..e]
        .iter()
        .fold(BigUint::from(0u32), |acc, &v| acc * p + v);
    let twice =
        -BigInt::from(big_pow(p, e as u64)) * 2 + BigInt::from(a.0[e]) + BigInt::from(wp) * (p - 1);
    Ok(HalfInt::from_twice(twice))
}

/// Whether `d` is afforded by a smooth epimorphism onto `grp`.
pub fn is_admissible(grp: &AbelianPGroup, d: &PDatum) -> Result<bool> {
    check_len(grp, d.e())?;
    let f = d.f();
    if d.f_prime() != f {
        return Ok(false);
    }
    let s = grp.s();
    let two_h = 2 * u128::from(d.h);
    let mut partial = 0u128;
    for i in (1..=f).rev() {
        partial += u128::from(d.x[i - 1]);
        if two_h + partial < u128::from(s[i - 1]) {
            return Ok(false);
        }
    }
    if two_h < u128::from(s[f] - 1) {
        return Ok(false);
    }
    if grp.p() == 2 && grp.e_prime() < f && !d.x[f - 1].is_multiple_of(2) {
        return Ok(false);
    }
    Ok(true)
}

/// The unique `i` with `a ∈ A_i` (or `A'_i` for `p = 2`, `i > e'`), if any.
pub fn classify_gamma_seq(grp: &AbelianPGroup, a: &GammaSeq) -> Result<Option<usize>> {
    if a.e() != grp.e() {
        return Err(Error::InvalidInput(
            "gamma sequence length does not match the group".into(),
        ));
    }
    Ok(classify_entries(grp.p(), &grp.s(), grp.e_prime(), &a.0))
}

/// [`classify_gamma_seq`] on a raw non-increasing slice with even last entry.
pub(crate) fn classify_entries(p: u64, s: &[u64], e_prime: usize, v: &[u64]) -> Option<usize> {
    let e = v.len() - 1;
    // Positions are 1-based in the comments: v[j-1] = a_j, s[j-1] = s_j.
    for i in 0..=e {
        // A_i needs a_j ≥ s_j for j ≤ i, so once that fails no later piece fits.
        if i >= 1 && v[i - 1] < s[i - 1] {
            return None;
        }
        let tail = v[i];
        if !v[i..].iter().all(|&t| t == tail) || tail + 1 < s[i] {
            continue;
        }
        if i >= 1 {
            let step = v[i - 1] - tail;
            if step < 2 || (p == 2 && i > e_prime && !step.is_multiple_of(2)) {
                continue;
            }
        }
        return Some(i);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, r: &[u64]) -> AbelianPGroup {
        AbelianPGroup::new(p, r.to_vec()).unwrap()
    }

    fn d(s: &str) -> PDatum {
        s.parse().unwrap()
    }

    fn a(v: &[u64]) -> GammaSeq {
        GammaSeq::new(v.to_vec()).unwrap()
    }

    fn half(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(
            genus(&g(2, &[0, 0, 1]), &d("0,0,2;0")).unwrap(),
            BigInt::from(0)
        );
        assert_eq!(genus(&g(2, &[2]), &d("3;0")).unwrap(), BigInt::from(0));
        for grp in [g(2, &[1, 1]), g(3, &[2, 9, 1]), g(5, &[0, 0, 0, 4])] {
            let zero = PDatum::new(vec![0; grp.e()], 1).unwrap();
            assert_eq!(genus(&grp, &zero).unwrap(), BigInt::from(1));
        }
        assert!(genus(&g(2, &[1]), &d("1,2;0")).is_err());
    }

    #[test]
    fn reduced_genus_examples() {
        assert_eq!(
            reduced_genus(&g(2, &[1, 1]), &d("1,2;0")).unwrap(),
            half("0")
        );
        assert_eq!(reduced_genus(&g(3, &[2]), &d("3;0")).unwrap(), half("0"));
        assert_eq!(
            reduced_genus(&g(2, &[0, 2]), &d("0,3;0")).unwrap(),
            half("1/2")
        );
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&d("1,2;0")), a(&[3, 2, 0]));
        assert_eq!(alpha_inv(&a(&[3, 2, 0])), d("1,2;0"));
        assert_eq!(alpha(&d("0,0;3")), a(&[6, 6, 6]));
        assert!(GammaSeq::new(vec![2, 3, 0]).is_err());
        assert!(GammaSeq::new(vec![3, 2, 1]).is_err());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(3, 1, &a(&[3, 0])).unwrap(), half("0"));
        assert_eq!(gamma(2, 2, &a(&[3, 2, 0])).unwrap(), half("0"));
        assert_eq!(gamma(2, 4, &a(&[2, 2, 2, 2, 2])).unwrap(), half("0"));
        assert!(gamma(2, 3, &a(&[3, 2, 0])).is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&g(2, &[1, 1]), &d("1,2;0")).unwrap());
        assert!(!is_admissible(&g(2, &[0, 1]), &d("0,1;0")).unwrap());
        assert!(!is_admissible(&g(2, &[1, 0, 1]), &d("1,0,1;0")).unwrap());
        assert!(is_admissible(&g(2, &[2]), &d("3;0")).unwrap());
        assert!(is_admissible(&g(3, &[2]), &d("3;0")).unwrap());
        assert!(is_admissible(&g(2, &[0, 0, 1]), &d("0,0,2;0")).unwrap());
        assert!(!is_admissible(&g(3, &[4, 4, 4]), &d("0,0,0;1")).unwrap());
        assert!(is_admissible(&g(3, &[0, 1]), &d("0,0;1")).unwrap());
        assert!(!is_admissible(&g(3, &[1]), &d("1;5")).unwrap());
        assert!(is_admissible(&g(3, &[1]), &d("1,2;0")).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_gamma_seq(&g(3, &[1, 1]), &a(&[3, 2, 0])).unwrap(),
            Some(2)
        );
        assert_eq!(
            classify_gamma_seq(&g(3, &[0, 1]), &a(&[2, 2, 2])).unwrap(),
            Some(0)
        );
        assert_eq!(
            classify_gamma_seq(&g(2, &[1, 0, 1]), &a(&[3, 2, 2, 0])).unwrap(),
            Some(3)
        );
        assert_eq!(
            classify_gamma_seq(&g(2, &[1, 0, 1]), &a(&[3, 2, 1, 0])).unwrap(),
            None
        );
    }

    #[test]
    fn datum_parse() {
        let x = d("1,2;0");
        assert_eq!((x.x(), x.h()), (&[1u64, 2][..], 0));
        assert_eq!(x.to_string(), "1,2;0");
        for bad in ["", ";0", "1,2", "1,2;", "1,,2;0", "1;0;0", "a;0", "1; 0"] {
            assert!(bad.parse::<PDatum>().is_err(), "{bad:?}");
        }
        assert!(PDatum::new(vec![u64::MAX, 1], 0).is_err());
    }

    #[test]
    fn f_and_f_prime() {
        assert_eq!((d("0,0;3").f(), d("0,0;3").f_prime()), (0, 0));
        assert_eq!((d("0,1;0").f(), d("0,1;0").f_prime()), (2, 0));
        assert_eq!((d("1,0,1;0").f(), d("1,0,1;0").f_prime()), (3, 1));
        assert_eq!((d("1,2;0").f(), d("1,2;0").f_prime()), (2, 2));
    }
}
