//! Exact structure on matrix factorizations: projective covers and
//! injective envelopes, syzygies and cosyzygies, mapping cones,
//! null-homotopies, pushouts, pullbacks and the periodic resolution.

mod cone;
mod exact;
mod homotopy;
mod resolution;
mod structure;
mod syzygy;

pub use cone::{mapping_cone, Cone, ConeReport};
pub use exact::{pullback, pushout, ExactSquare, SquareReport};
pub use homotopy::{
    extract_homotopy, factor_through_injective, homotopy_sum, homotopy_verify,
    null_homotopic_morphism, Homotopy, HomotopyReport,
};
pub use resolution::{periodic_resolution, PeriodicResolution, ResolutionReport};
pub use structure::{hat_slots, projective_strand_permutation, StructureMaps, StructureReport};
pub use syzygy::{
    cosyzygy, cosyzygy_factor, cosyzygy_with, syzygy, syzygy_cosyzygy_iso, syzygy_factor,
    syzygy_iso_factor, syzygy_with, IsoReport, SesReport, ShortExactSeq, SyzygyIso,
};

#[cfg(test)]
mod tests;
