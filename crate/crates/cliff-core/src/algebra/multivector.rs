use super::{blade_mul, Blade, GradeSet, Metric};
use crate::ring::Ring;
use crate::{Error, Result};

/// Named involutions. All three are grade-negations:
/// reverse = {2,3,6,7,..}, inversion = odd grades, conjugate = {1,2,5,6,..}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Involution {
    Reverse,
    Inversion,
    Conjugate,
}

/// Dense multivector of Cl(d): `2^d` coefficients indexed by blade mask,
/// with the metric attached. Immutable after construction; all operations
/// return new values.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<R: Ring> {
    metric: Metric<R>,
    coeffs: Vec<R>,
}

impl<R: Ring> Multivector<R> {
    pub fn zero(metric: Metric<R>) -> Self {
        let n = metric.blade_count();
        Multivector {
            metric,
            coeffs: vec![R::zero(); n],
        }
    }

    pub fn scalar(metric: Metric<R>, value: R) -> Self {
        let mut mv = Multivector::zero(metric);
        mv.coeffs[0] = value;
        mv
    }

    /// The basis blade `e_J` with coefficient one.
    pub fn basis(metric: Metric<R>, blade: Blade) -> Self {
        let mut mv = Multivector::zero(metric);
        mv.coeffs[blade.mask() as usize] = R::one();
        mv
    }

    pub fn from_coeffs(metric: Metric<R>, coeffs: Vec<R>) -> Self {
        assert_eq!(
            coeffs.len(),
            metric.blade_count(),
            "coefficient vector must have 2^dim entries"
        );
        Multivector { metric, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn metric(&self) -> &Metric<R> {
        &self.metric
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> &R {
        &self.coeffs[blade.mask() as usize]
    }

    pub fn with_coeff(mut self, blade: Blade, value: R) -> Self {
        self.coeffs[blade.mask() as usize] = value;
        self
    }

    pub fn scalar_part(&self) -> &R {
        &self.coeffs[0]
    }

    /// Largest coefficient magnitude; the scale for tolerance tests.
    pub fn max_magnitude(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    /// True when all non-scalar coefficients vanish under the ring's zero
    /// test (scaled by this multivector's own magnitude for floats).
    pub fn is_scalar(&self) -> bool {
        let scale = if R::EXACT { 0.0 } else { self.max_magnitude() };
        self.coeffs[1..].iter().all(|c| c.is_zero_with_scale(scale))
    }

    pub fn is_zero(&self) -> bool {
        let scale = if R::EXACT { 0.0 } else { self.max_magnitude() };
        self.coeffs.iter().all(|c| c.is_zero_with_scale(scale))
    }

    fn check_metric(&self, other: &Self) -> Result<()> {
        if self.metric == other.metric {
            Ok(())
        } else {
            Err(Error::MetricMismatch)
        }
    }

    /// Geometric (Clifford) product. Errors with `MetricMismatch` when the
    /// operands carry different metrics.
    pub fn gp(&self, other: &Self) -> Result<Self> {
        self.check_metric(other)?;
        let n = self.coeffs.len();
        let mut out = vec![R::zero(); n];
        for i in 0..n {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..n {
                let b = &other.coeffs[j];
                if b.is_zero() {
                    continue;
                }
                let (scale, blade) = blade_mul(Blade(i as u32), Blade(j as u32), &self.metric);
                if scale.is_zero() {
                    continue;
                }
                let k = blade.mask() as usize;
                out[k] = out[k].add(&a.mul(b).mul(&scale));
            }
        }
        Ok(Multivector {
            metric: self.metric.clone(),
            coeffs: out,
        })
    }

    /// Componentwise `alpha * self + beta * other`.
    pub fn linear_combine(&self, alpha: &R, other: &Self, beta: &R) -> Result<Self> {
        self.check_metric(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| alpha.mul(a).add(&beta.mul(b)))
            .collect();
        Ok(Multivector {
            metric: self.metric.clone(),
            coeffs,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.linear_combine(&R::one(), other, &R::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.linear_combine(&R::one(), other, &R::one().neg())
    }

    pub fn scale(&self, factor: &R) -> Self {
        Multivector {
            metric: self.metric.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul(factor)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Multivector {
            metric: self.metric.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Keep only the grade-`r` part.
    pub fn grade_project(&self, r: u32) -> Result<Self> {
        if r as usize > self.dim() {
            return Err(Error::GradeOutOfRange {
                grade: r as i32,
                dim: self.dim(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if Blade(i as u32).grade() == r {
                    c.clone()
                } else {
                    R::zero()
                }
            })
            .collect();
        Ok(Multivector {
            metric: self.metric.clone(),
            coeffs,
        })
    }

    /// Grades carrying at least one coefficient that survives the ring's
    /// zero test (exact for exact rings, relative for floats).
    pub fn grade_support(&self) -> GradeSet {
        let scale = if R::EXACT { 0.0 } else { self.max_magnitude() };
        let mut set = GradeSet::EMPTY;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero_with_scale(scale) {
                set = set.insert(Blade(i as u32).grade());
            }
        }
        set
    }

    /// Flip the sign of every coefficient whose grade lies in `set`.
    /// Applying the same set twice is the identity.
    pub fn grade_negate(&self, set: GradeSet) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if set.contains(Blade(i as u32).grade()) {
                    c.neg()
                } else {
                    c.clone()
                }
            })
            .collect();
        Multivector {
            metric: self.metric.clone(),
            coeffs,
        }
    }

    pub fn involution(&self, kind: Involution) -> Self {
        let set = match kind {
            Involution::Reverse => GradeSet::reverse_grades(self.dim()),
            Involution::Inversion => GradeSet::inversion_grades(self.dim()),
            Involution::Conjugate => GradeSet::conjugate_grades(self.dim()),
        };
        self.grade_negate(set)
    }

    pub fn reverse(&self) -> Self {
        self.involution(Involution::Reverse)
    }

    pub fn inversion(&self) -> Self {
        self.involution(Involution::Inversion)
    }

    pub fn conjugate(&self) -> Self {
        self.involution(Involution::Conjugate)
    }

    /// Left-dual `I * A` with `I = e_{1..d}`.
    pub fn dual_left(&self) -> Result<Self> {
        if self.dim() == 0 {
            return Err(Error::DimensionZero);
        }
        let pseudo = Multivector::basis(self.metric.clone(), Blade::pseudoscalar(self.dim()));
        pseudo.gp(self)
    }
}

/// `I^2 = (-1)^{d(d-1)/2} * g_11 .. g_dd`.
pub fn pseudoscalar_square<R: Ring>(metric: &Metric<R>) -> Result<R> {
    let d = metric.dim();
    if d == 0 {
        return Err(Error::DimensionZero);
    }
    let mut value = if (d * (d - 1) / 2) % 2 == 0 {
        R::one()
    } else {
        R::one().neg()
    };
    for g in metric.entries() {
        value = value.mul(g);
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Mv = Multivector<BigRational>;

    fn euclid(d: usize) -> Metric<BigRational> {
        Metric::euclidean(d).unwrap()
    }

    fn r(v: i64) -> BigRational {
        BigRational::from_i64(v)
    }

    fn mv(d: usize, coeffs: &[(u32, i64)]) -> Mv {
        let mut out = Multivector::zero(euclid(d));
        for &(mask, c) in coeffs {
            out = out.with_coeff(Blade(mask), r(c));
        }
        out
    }

    #[test]
    fn squared_vector_plus_quadvector_is_two() {
        // (e1 + e1234)^2 = 2 in 5D Euclidean: the grade-1*grade-4 cross
        // terms anticommute and cancel.
        let a = mv(5, &[(0b00001, 1), (0b01111, 1)]);
        let sq = a.gp(&a).unwrap();
        assert_eq!(sq, mv(5, &[(0, 2)]));
    }

    #[test]
    fn scalar_identity() {
        let a = mv(3, &[(0, 3), (0b001, 2), (0b111, 4)]);
        let one = Mv::scalar(euclid(3), r(1));
        assert_eq!(one.gp(&a).unwrap(), a);
        assert_eq!(a.gp(&one).unwrap(), a);
    }

    #[test]
    fn two_dim_product_by_hand() {
        // (2 + 3e12)(-2 + 3e12) = -4 + 6e12 - 6e12 - 9 = -13.
        let a = mv(2, &[(0, 2), (0b11, 3)]);
        let b = mv(2, &[(0, -2), (0b11, 3)]);
        assert_eq!(a.gp(&b).unwrap(), mv(2, &[(0, -13)]));
    }

    #[test]
    fn metric_mismatch_is_an_error() {
        let a = Mv::scalar(euclid(2), r(1));
        let b = Mv::scalar(Metric::from_signs(&[1, -1]).unwrap(), r(1));
        assert_eq!(a.gp(&b), Err(Error::MetricMismatch));
        assert_eq!(a.add(&b), Err(Error::MetricMismatch));
    }

    #[test]
    fn linear_combine_basics() {
        let a = mv(2, &[(0b01, 2)]);
        let b = mv(2, &[(0b10, 3)]);
        let c = a.linear_combine(&r(1), &b, &r(1)).unwrap();
        assert_eq!(c, mv(2, &[(0b01, 2), (0b10, 3)]));
        assert!(a.linear_combine(&r(1), &a, &r(-1)).unwrap().is_zero());
    }

    #[test]
    fn grade_project_splits_and_reassembles() {
        let a = mv(3, &[(0, 3), (0b001, 2), (0b111, 4)]);
        assert_eq!(a.grade_project(1).unwrap(), mv(3, &[(0b001, 2)]));
        assert!(a.grade_project(2).unwrap().is_zero());
        assert_eq!(
            a.grade_project(9),
            Err(Error::GradeOutOfRange { grade: 9, dim: 3 })
        );
        let mut sum = Multivector::zero(euclid(3));
        for g in 0..=3 {
            sum = sum.add(&a.grade_project(g).unwrap()).unwrap();
        }
        assert_eq!(sum, a);
    }

    #[test]
    fn grade_support_examples() {
        let a = mv(3, &[(0, 3), (0b001, 2), (0b111, 4)]);
        assert_eq!(a.grade_support(), GradeSet::from_grades(&[0, 1, 3]));
        assert_eq!(Mv::zero(euclid(3)).grade_support(), GradeSet::EMPTY);
    }

    #[test]
    fn grade_negate_example_from_text() {
        // [[3 + 2e1 + 4e123]]_{23} = 3 + 2e1 - 4e123.
        let a = mv(3, &[(0, 3), (0b001, 2), (0b111, 4)]);
        let negated = a.grade_negate(GradeSet::from_grades(&[2, 3]));
        assert_eq!(negated, mv(3, &[(0, 3), (0b001, 2), (0b111, -4)]));
        assert_eq!(a.grade_negate(GradeSet::EMPTY), a);
    }

    #[test]
    fn complementary_negation_is_overall_minus() {
        // In 5D: [[A]]_{124} = -[[A]]_{035}.
        let a = mv(5, &[(0, 7), (0b1, 3), (0b11, -2), (0b111, 5), (0b11111, 1)]);
        let lhs = a.grade_negate(GradeSet::from_grades(&[1, 2, 4]));
        let rhs = a.grade_negate(GradeSet::from_grades(&[0, 3, 5])).neg();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn involutions_match_their_grade_sets() {
        let a = mv(3, &[(0b011, 1)]); // e12
        assert_eq!(a.reverse(), a.neg()); // r(r-1)/2 = 1 for grade 2
        let e1 = mv(3, &[(0b001, 1)]);
        assert_eq!(e1.inversion(), e1.neg());
        // conjugate = reverse of inversion = inversion of reverse
        let b = mv(3, &[(0, 1), (0b001, 2), (0b011, 3), (0b111, 4)]);
        assert_eq!(b.conjugate(), b.inversion().reverse());
        assert_eq!(b.conjugate(), b.reverse().inversion());
    }

    #[test]
    fn pseudoscalar_square_signs() {
        // Table of pseudoscalar squares: -1 for d=3, +1 for d=4 (Euclidean).
        assert_eq!(pseudoscalar_square(&euclid(3)).unwrap(), r(-1));
        assert_eq!(pseudoscalar_square(&euclid(4)).unwrap(), r(1));
        let degenerate = Metric::<BigRational>::from_signs(&[1, 0]).unwrap();
        assert_eq!(pseudoscalar_square(&degenerate).unwrap(), r(0));
        assert_eq!(
            pseudoscalar_square(&Metric::<BigRational>::new(vec![]).unwrap()),
            Err(Error::DimensionZero)
        );
    }

    #[test]
    fn dual_left_examples() {
        let one = Mv::scalar(euclid(3), r(1));
        assert_eq!(one.dual_left().unwrap(), mv(3, &[(0b111, 1)]));

        // e1234 * e1 = -e1 * e1234 in 4D.
        let i4 = mv(4, &[(0b1111, 1)]);
        let e1 = mv(4, &[(0b0001, 1)]);
        assert_eq!(i4.gp(&e1).unwrap(), e1.gp(&i4).unwrap().neg());

        assert_eq!(
            Mv::scalar(Metric::new(vec![]).unwrap(), r(2)).dual_left(),
            Err(Error::DimensionZero)
        );
    }

    #[test]
    fn double_dual_is_pseudoscalar_square_in_odd_dim() {
        let a = mv(3, &[(0, 1), (0b010, 2), (0b101, -3), (0b111, 4)]);
        let twice = a.dual_left().unwrap().dual_left().unwrap();
        let i2 = pseudoscalar_square(&euclid(3)).unwrap();
        assert_eq!(twice, a.scale(&i2));
    }
}
