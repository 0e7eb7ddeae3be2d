//! FlashVault: a functional and timing model of in-NAND self-encryption.
//!
//! The crate pairs bit-exact cryptographic units with a discrete-event SSD
//! model so that placement choices (host CPU, near-core, in-die) can be
//! compared on the same workloads.

pub mod ace;
pub mod bce;
pub mod bench;
pub mod budget;
pub mod calib;
pub mod datapath;
pub mod keys;
pub mod reliability;
pub mod ssd;
