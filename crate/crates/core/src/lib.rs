//! Effective Hausdorff and constructive dimension on spaces with nice covers.

pub mod cli;
pub mod compiler;
pub mod complexity;
pub mod cover;
pub mod dimension;
pub mod error;
pub mod exact;
pub mod gale;
pub mod random;
pub mod report;

pub use compiler::{kraft_sum, maximal_antichain, Antichain, WeightedCover};
pub use cover::{Address, CoverKind, ExactScale, NiceCoverDescriptor, PointRep};
pub use error::{Error, Result};
pub use exact::{Exponent, Rat, Surd};
pub use report::{ValidationReport, Violation, ViolationKind};
