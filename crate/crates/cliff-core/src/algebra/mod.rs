//! Bitmask-blade representation of Cl(d) for arbitrary diagonal metrics.

mod blade;
mod gradeset;
mod metric;
mod multivector;

pub use blade::{blade_mul, Blade};
pub use gradeset::GradeSet;
pub use metric::Metric;
pub use multivector::{pseudoscalar_square, Involution, Multivector};
