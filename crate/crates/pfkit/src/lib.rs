//! pfkit: exact-arithmetic toolkit for Picard-Fuchs operators attached to
//! families of curves, their integral series solutions, mod-p congruences,
//! non-ordinary / supersingular / superspecial loci, and independent
//! point-counting cross-checks.

pub mod catalog;
pub mod congruence;
pub mod locus;
pub mod modforms;
pub mod oracle;
pub mod fuchsian;
pub mod igusa;
pub mod poly;
pub mod ring;
pub mod series;
