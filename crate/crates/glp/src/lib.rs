//! Laurent phenomenon algebras on trees and their T-path expansions.

pub mod algebra;
pub mod graphcore;
pub mod lpcalc;
pub mod tpaths;
pub mod verify;
