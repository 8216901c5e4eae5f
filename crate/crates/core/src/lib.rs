//! Zero-sum sequences over `G = (Z/NZ)^2`.
//!
//! The crate provides group arithmetic and automorphisms, sequences as
//! multisets, subset-sum oracles, symmetry-reduced exhaustive enumeration,
//! and verification suites for the structural statements about long
//! zero-sum sequences (Properties A, B and C, the perturbation lemmas, the
//! classification of long sequences without short zero-sums, and the
//! lifting statement for the multiplication-by-`m` map).
//!
//! ```
//! use zerosum::enumeration::{davenport, SearchOptions};
//! use zerosum::properties::has_property_a;
//! use zerosum::{GroupSpec, Sequence};
//!
//! let g = GroupSpec::new(5)?;
//! assert_eq!(davenport(g, &SearchOptions::default())?, 9);
//!
//! let s = Sequence::from_counts(g, [(g.e1(), 4), (g.e2(), 4), (g.elem(1, 1), 1)])?;
//! assert!(has_property_a(&s));
//! # Ok::<(), zerosum::Error>(())
//! ```

pub mod classification;
pub mod decomposition;
pub mod elemset;
pub mod enumeration;
pub mod error;
pub mod group;
pub mod io;
pub mod lifting;
pub mod perturbation;
pub mod properties;
pub mod report;
pub mod sequence;
pub mod subsums;

pub use elemset::ElementSet;
pub use error::{Error, Result};
pub use group::{automorphisms, canonicalize, AutGroup, Automorphism, GroupElement, GroupSpec};
pub use report::Report;
pub use sequence::{GroupHom, IdentityHom, Sequence};
