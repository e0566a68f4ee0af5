use std::fmt;
use std::ops::BitXor;

/// Subset of the grades `{0, .., d}`, encoded as a bitmask over grades.
/// Acts on multivectors as a sign flip of the listed grades; composition of
/// two grade-negations is the symmetric difference of their sets, so double
/// application is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GradeSet(pub u8);

impl GradeSet {
    pub const EMPTY: GradeSet = GradeSet(0);

    pub fn from_grades(grades: &[u32]) -> GradeSet {
        let mut bits = 0u8;
        for &g in grades {
            assert!(g <= 7, "grade {g} out of range");
            bits |= 1 << g;
        }
        GradeSet(bits)
    }

    pub fn contains(self, grade: u32) -> bool {
        grade <= 7 && self.0 >> grade & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn grades(self) -> impl Iterator<Item = u32> {
        let bits = self.0;
        (0..8u32).filter(move |g| bits >> g & 1 == 1)
    }

    pub fn insert(self, grade: u32) -> GradeSet {
        GradeSet(self.0 | 1 << grade)
    }

    /// Intersection with the grades `0..=d`.
    pub fn clip(self, dim: usize) -> GradeSet {
        GradeSet(self.0 & ((1u16 << (dim + 1)) - 1) as u8)
    }

    pub fn intersect(self, other: GradeSet) -> GradeSet {
        GradeSet(self.0 & other.0)
    }

    pub fn union(self, other: GradeSet) -> GradeSet {
        GradeSet(self.0 | other.0)
    }

    /// Complement within `{0, .., d}`.
    pub fn complement(self, dim: usize) -> GradeSet {
        GradeSet(!self.0 & ((1u16 << (dim + 1)) - 1) as u8)
    }

    /// Grades flipped by the reverse operator: `r(r-1)/2` odd, i.e. {2,3,6,7,..}.
    pub fn reverse_grades(dim: usize) -> GradeSet {
        GradeSet::of_matching(dim, |r| (r * r.saturating_sub(1) / 2) % 2 == 1)
    }

    /// Grades flipped by the (grade) inversion operator: odd grades.
    pub fn inversion_grades(dim: usize) -> GradeSet {
        GradeSet::of_matching(dim, |r| r % 2 == 1)
    }

    /// Grades flipped by the Clifford conjugate: `r(r+1)/2` odd, i.e. {1,2,5,6,..}.
    pub fn conjugate_grades(dim: usize) -> GradeSet {
        GradeSet::of_matching(dim, |r| (r * (r + 1) / 2) % 2 == 1)
    }

    fn of_matching(dim: usize, pred: impl Fn(u32) -> bool) -> GradeSet {
        let mut bits = 0u8;
        for g in 0..=dim as u32 {
            if pred(g) {
                bits |= 1 << g;
            }
        }
        GradeSet(bits)
    }
}

/// Composition of grade-negations: symmetric difference.
impl BitXor for GradeSet {
    type Output = GradeSet;

    fn bitxor(self, rhs: GradeSet) -> GradeSet {
        GradeSet(self.0 ^ rhs.0)
    }
}

impl fmt::Display for GradeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "Id");
        }
        for g in self.grades() {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_symmetric_difference() {
        let a = GradeSet::from_grades(&[1, 2]);
        let b = GradeSet::from_grades(&[2, 3]);
        assert_eq!(a ^ b, GradeSet::from_grades(&[1, 3]));
        assert_eq!(a ^ a, GradeSet::EMPTY);
    }

    #[test]
    fn named_involution_sets() {
        assert_eq!(GradeSet::reverse_grades(3), GradeSet::from_grades(&[2, 3]));
        assert_eq!(GradeSet::inversion_grades(3), GradeSet::from_grades(&[1, 3]));
        assert_eq!(GradeSet::conjugate_grades(3), GradeSet::from_grades(&[1, 2]));
        assert_eq!(GradeSet::reverse_grades(6), GradeSet::from_grades(&[2, 3, 6]));
        assert_eq!(
            GradeSet::conjugate_grades(6),
            GradeSet::from_grades(&[1, 2, 5, 6])
        );
    }

    #[test]
    fn display_uses_digit_string() {
        assert_eq!(GradeSet::from_grades(&[1, 3]).to_string(), "13");
        assert_eq!(GradeSet::EMPTY.to_string(), "Id");
    }
}
