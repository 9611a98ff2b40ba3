//! Exact genus spectra of finite abelian p-groups acting on compact
//! Riemann surfaces.
//!
//! Reduced genera are half-integers ([`HalfInt`]); all magnitudes are
//! unbounded integers. The modules build on each other:
//! [`mainline`] → [`group`] → [`signature`] → [`mingenus`] → [`spectrum`]
//! → [`conjecture`].

pub mod conjecture;
pub mod error;
pub mod group;
pub mod halfint;
pub mod mainline;
pub mod mingenus;
pub mod signature;
pub mod spectrum;

pub use error::{Error, Result};
pub use group::{AbelianPGroup, Epsilon, GroupInvariants};
pub use halfint::HalfInt;
pub use mainline::{GapNorm, IntSeq, MainlineProfile};
pub use mingenus::MinGenusReport;
pub use signature::{GammaSeq, PDatum};
pub use spectrum::{GenusSpectrum, SmallGenusClass, SpectrumDescriptor};
