//! Integer-side oracle: abelian groups, Prüfer groups and brute-force checks.

pub mod exact;
pub mod finite_ring;
pub mod groups;
pub mod resolution;
pub mod snf;
pub mod subgroups;

pub use exact::{oracle_exactness_check, ExactnessReport, GroupMap, GroupSequence};
pub use finite_ring::{FiniteRing, FiniteRingModule};
pub use groups::{oracle_tor, tor_fg_artinian, valuation, AbelianCanonical, AbelianGroup, ArtinianGroup, Component, ZCosupport};
pub use resolution::{tor_by_resolution, tor_by_truncation, tor_resolution_route};
pub use snf::{smith_normal_form, IntMatrix, Smith};
pub use subgroups::oracle_attached_primes;
