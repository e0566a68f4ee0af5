use crate::ring::Ring;
use crate::{Error, Result, MAX_DIM};

/// Diagonal metric (signature) of a Clifford algebra: the squares
/// `g_11 .. g_dd` of the orthonormal basis vectors. Entries live in the
/// scalar ring and may be zero (degenerate metrics are permitted).
#[derive(Debug, Clone, PartialEq)]
pub struct Metric<R: Ring> {
    entries: Vec<R>,
}

impl<R: Ring> Metric<R> {
    pub fn new(entries: Vec<R>) -> Result<Self> {
        if entries.len() > MAX_DIM {
            return Err(Error::UnsupportedDimension {
                dim: entries.len(),
                max: MAX_DIM,
            });
        }
        Ok(Metric { entries })
    }

    /// All entries +1.
    pub fn euclidean(dim: usize) -> Result<Self> {
        Metric::new(vec![R::one(); dim])
    }

    /// Signature (+1, -1, ..., -1).
    pub fn minkowski(dim: usize) -> Result<Self> {
        let mut entries = vec![R::one().neg(); dim];
        if dim > 0 {
            entries[0] = R::one();
        }
        Metric::new(entries)
    }

    /// Entries from small integers, e.g. `&[1, 1, -1, 0]`.
    pub fn from_signs(signs: &[i64]) -> Result<Self> {
        Metric::new(signs.iter().map(|&s| R::from_i64(s)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Number of basis blades, `2^d`.
    pub fn blade_count(&self) -> usize {
        1 << self.entries.len()
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    /// `g_ii` for the 1-based index `i`.
    pub fn entry(&self, i: usize) -> &R {
        &self.entries[i - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn dimension_cap() {
        assert!(Metric::<f64>::euclidean(6).is_ok());
        assert_eq!(
            Metric::<f64>::euclidean(7),
            Err(Error::UnsupportedDimension { dim: 7, max: 6 })
        );
    }

    #[test]
    fn minkowski_signature() {
        let m = Metric::<BigRational>::minkowski(3).unwrap();
        assert_eq!(m.entries()[0], BigRational::from_i64(1));
        assert_eq!(m.entries()[1], BigRational::from_i64(-1));
        assert_eq!(m.entries()[2], BigRational::from_i64(-1));
    }
}
