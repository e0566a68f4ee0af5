//! Determinant, adjugate and inverse of Clifford numbers in dimensions 0-5,
//! plus the scalar-blade special case and the blade test.
//!
//! Canonical determinant per dimension:
//!
//! - d = 0: the number itself
//! - d = 1, 2: `f[A, {1,2}]`
//! - d = 3, 4: `f[f[A, {1,2}], {3,4}]`
//! - d = 5:    `f[f[f[A, {2,3}], {1,4}], {5}]`
//!
//! The adjugate is always the canonical determinant with its leading factor
//! of `A` removed, which guarantees `A * adj(A) == adj(A) * A == det(A)`.

use crate::algebra::{Blade, GradeSet, Multivector};
use crate::ring::Ring;
use crate::{Error, Result, MAX_DET_DIM};

/// Grade-negated self-product `f[A, S] = A * [A]_S`.
///
/// Not symmetric: in general `A * [A]_S != [A]_S * A`.
pub fn gn_self_product<R: Ring>(a: &Multivector<R>, set: GradeSet) -> Multivector<R> {
    a.gp(&a.grade_negate(set))
        .expect("operands share one metric")
}

fn check_dim(d: usize) -> Result<()> {
    if d > MAX_DET_DIM {
        Err(Error::UnsupportedDimension {
            dim: d,
            max: MAX_DET_DIM,
        })
    } else {
        Ok(())
    }
}

/// Power of `A` in the canonical determinant: 1, 2, 2, 4, 4, 8 for d = 0..5.
pub fn det_order(d: usize) -> u32 {
    match d {
        0 => 1,
        1 | 2 => 2,
        3 | 4 => 4,
        _ => 8,
    }
}

fn det_stages(d: usize) -> &'static [&'static [u32]] {
    match d {
        0 => &[],
        1 | 2 => &[&[1, 2]],
        3 | 4 => &[&[1, 2], &[3, 4]],
        _ => &[&[2, 3], &[1, 4], &[5]],
    }
}

/// Canonical determinant. The result of the self-product chain is checked
/// to be scalar under the ring's zero test; a residue signals a bug and
/// reports `InternalNonScalar`.
pub fn determinant<R: Ring>(a: &Multivector<R>) -> Result<R> {
    check_dim(a.dim())?;
    let mut x = a.clone();
    for stage in det_stages(a.dim()) {
        x = gn_self_product(&x, GradeSet::from_grades(stage));
    }
    if !x.is_scalar() {
        return Err(Error::InternalNonScalar);
    }
    Ok(x.scalar_part().clone())
}

/// Canonical determinant without the scalar-residue check; for hot paths
/// where the check has already been exercised.
pub fn determinant_unchecked<R: Ring>(a: &Multivector<R>) -> Result<R> {
    check_dim(a.dim())?;
    let mut x = a.clone();
    for stage in det_stages(a.dim()) {
        x = gn_self_product(&x, GradeSet::from_grades(stage));
    }
    Ok(x.scalar_part().clone())
}

/// Canonical adjugate: the determinant chain with the leading `A` removed.
/// Satisfies `A * adj(A) == adj(A) * A == det(A)` exactly over exact rings.
pub fn adjugate<R: Ring>(a: &Multivector<R>) -> Result<Multivector<R>> {
    check_dim(a.dim())?;
    let stages = det_stages(a.dim());
    if stages.is_empty() {
        return Ok(Multivector::scalar(a.metric().clone(), R::one()));
    }
    // stage values x_0 = A, x_{k+1} = f[x_k, S_k]
    let mut x = a.clone();
    let mut adj: Option<Multivector<R>> = None;
    for stage in stages {
        let set = GradeSet::from_grades(stage);
        let negated = x.grade_negate(set);
        adj = Some(match adj {
            None => negated.clone(),
            Some(acc) => acc.gp(&negated).expect("operands share one metric"),
        });
        x = x.gp(&negated).expect("operands share one metric");
    }
    Ok(adj.expect("at least one stage"))
}

/// Inverse via `adj(A) / det(A)`. Errors with `Singular` when the
/// determinant vanishes (exactly for exact rings, within the relative
/// tolerance for floats).
pub fn inverse<R: Ring>(a: &Multivector<R>) -> Result<Multivector<R>> {
    check_dim(a.dim())?;
    let det = determinant(a)?;
    let scale = a.max_magnitude().powi(det_order(a.dim()) as i32);
    if det.is_zero_with_scale(scale) {
        return Err(Error::Singular);
    }
    let inv_det = R::one().div(&det).ok_or(Error::Singular)?;
    Ok(adjugate(a)?.scale(&inv_det))
}

/// Blade test for a homogeneous r-vector: true iff some basis blade `e_J`
/// makes `e_J * B` a (nonzero) 1-vector. Scalars and zero are not blades;
/// vectors, pseudovectors and pseudoscalars always are.
pub fn is_blade<R: Ring>(b: &Multivector<R>) -> bool {
    let support = b.grade_support();
    if support.len() != 1 {
        return false;
    }
    let grade = support.grades().next().expect("one grade present");
    if grade == 0 {
        return false;
    }
    let n = b.metric().blade_count();
    for j in 0..n {
        let e_j = Multivector::basis(b.metric().clone(), Blade(j as u32));
        let product = e_j.gp(b).expect("operands share one metric");
        let sup = product.grade_support();
        if sup == GradeSet::from_grades(&[1]) {
            return true;
        }
    }
    false
}

/// Determinant of a scalar-plus-blade multivector `A = a_0 + A_r`:
/// `f[A, {0}] = A * [A]_0 = -a_0^2 + A_r^2`.
///
/// Requires the support to be `{0}`, `{r}` or `{0, r}` with the r-part a
/// blade (grade 1, d-1 and d are always blades). Note the sign convention
/// differs from the canonical determinant; in 4D the canonical determinant
/// is this value squared, in 5D its fourth power.
pub fn scalar_blade_det<R: Ring>(a: &Multivector<R>) -> Result<R> {
    let support = a.grade_support();
    let nonscalar: Vec<u32> = support.grades().filter(|&g| g != 0).collect();
    match nonscalar.len() {
        0 => {}
        1 => {
            let r = nonscalar[0] as usize;
            let d = a.dim();
            let always_blade = r == 1 || r + 1 == d || r == d;
            if !always_blade {
                let part = a.grade_project(r as u32)?;
                if !is_blade(&part) {
                    return Err(Error::NotScalarBladeForm);
                }
            }
        }
        _ => return Err(Error::NotScalarBladeForm),
    }
    let product = gn_self_product(a, GradeSet::from_grades(&[0]));
    if !product.is_scalar() {
        return Err(Error::NotScalarBladeForm);
    }
    Ok(product.scalar_part().clone())
}

/// Adjugate paired with [`scalar_blade_det`]: the scalar negation `[A]_0`.
pub fn scalar_blade_adj<R: Ring>(a: &Multivector<R>) -> Result<Multivector<R>> {
    scalar_blade_det(a)?;
    Ok(a.grade_negate(GradeSet::from_grades(&[0])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Metric;
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
    fn two_dim_determinant_by_expansion() {
        // det(1 + 2e1 + 3e2 + 4e12) = 1 - 4 - 9 + 16 = 4.
        let a = mv(2, &[(0, 1), (0b01, 2), (0b10, 3), (0b11, 4)]);
        assert_eq!(determinant(&a).unwrap(), r(4));
    }

    #[test]
    fn light_cone_vector_has_zero_determinant() {
        let m = Metric::<BigRational>::from_signs(&[1, -1]).unwrap();
        let a = Multivector::zero(m)
            .with_coeff(Blade(0b01), r(1))
            .with_coeff(Blade(0b10), r(1));
        assert_eq!(determinant(&a).unwrap(), r(0));
        assert_eq!(inverse(&a), Err(Error::Singular));
    }

    #[test]
    fn three_dim_determinant_of_rotor() {
        // f[1+e12,{1,2}] = (1+e12)(1-e12) = 2, then f[2,{3,4}] = 4.
        let a = mv(3, &[(0, 1), (0b011, 1)]);
        assert_eq!(determinant(&a).unwrap(), r(4));
    }

    #[test]
    fn zero_dim_determinant_is_the_number() {
        let m = Metric::<BigRational>::new(vec![]).unwrap();
        let a = Multivector::scalar(m.clone(), r(7));
        assert_eq!(determinant(&a).unwrap(), r(7));
        assert_eq!(adjugate(&a).unwrap(), Multivector::scalar(m.clone(), r(1)));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv.scalar_part(), &BigRational::new(1.into(), 7.into()));
        assert_eq!(
            inverse(&Multivector::scalar(m, r(0))),
            Err(Error::Singular)
        );
    }

    #[test]
    fn dimension_cap() {
        let a = Mv::zero(euclid(6));
        assert_eq!(
            determinant(&a),
            Err(Error::UnsupportedDimension { dim: 6, max: 5 })
        );
    }

    #[test]
    fn two_dim_adjugate_example() {
        let a = mv(2, &[(0, 1), (0b01, 2), (0b10, 3), (0b11, 4)]);
        let adj = adjugate(&a).unwrap();
        assert_eq!(adj, mv(2, &[(0, 1), (0b01, -2), (0b10, -3), (0b11, -4)]));
        let det = Mv::scalar(euclid(2), determinant(&a).unwrap());
        assert_eq!(a.gp(&adj).unwrap(), det);
        assert_eq!(adj.gp(&a).unwrap(), det);
    }

    #[test]
    fn simple_inverses() {
        // e1^-1 = e1 in Euclidean metrics.
        for d in 1..=5usize {
            let e1 = mv(d, &[(0b1, 1)]);
            assert_eq!(inverse(&e1).unwrap(), e1);
        }
        // 1 + e1 in 1D: det = 1 - 1 = 0.
        let a = mv(1, &[(0, 1), (0b1, 1)]);
        assert_eq!(inverse(&a), Err(Error::Singular));
        // (2 + 3e12)^-1 = (2 - 3e12)/13.
        let a = mv(2, &[(0, 2), (0b11, 3)]);
        let inv = inverse(&a).unwrap();
        let thirteenth = |v: i64| BigRational::new(v.into(), 13.into());
        assert_eq!(inv.coeff(Blade(0)), &thirteenth(2));
        assert_eq!(inv.coeff(Blade(0b11)), &thirteenth(-3));
        assert!(a.gp(&inv).unwrap().sub(&Mv::scalar(euclid(2), r(1))).unwrap().is_zero());
    }

    #[test]
    fn self_product_is_order_sensitive() {
        // (e1 + e12) [e1 + e12]_1 = -2 + 2e2, but [e1 + e12]_1 (e1 + e12) = -2 - 2e2.
        let a = mv(2, &[(0b01, 1), (0b11, 1)]);
        let s = GradeSet::from_grades(&[1]);
        let left = gn_self_product(&a, s);
        let right = a.grade_negate(s).gp(&a).unwrap();
        assert_eq!(left, mv(2, &[(0, -2), (0b10, 2)]));
        assert_eq!(right, mv(2, &[(0, -2), (0b10, -2)]));
    }

    #[test]
    fn blade_tests() {
        // space 2-blade in 4D: x e23 + y e13 + z e12
        let b = mv(4, &[(0b0110, 1), (0b0101, 2), (0b0011, 3)]);
        assert!(is_blade(&b));
        // time 2-blade: u e14 + v e24 + w e34
        let t = mv(4, &[(0b1001, 1), (0b1010, 5), (0b1100, -2)]);
        assert!(is_blade(&t));
        // generic mixed 2-vector in 4D is not a blade
        let g = mv(4, &[(0b0011, 1), (0b1100, 1)]);
        assert!(!is_blade(&g));
        // scalars and mixed-grade inputs are not blades
        assert!(!is_blade(&mv(4, &[(0, 3)])));
        assert!(!is_blade(&mv(4, &[(0, 1), (0b0001, 1)])));
        // vectors, pseudovectors, pseudoscalars are blades
        assert!(is_blade(&mv(4, &[(0b0001, 2), (0b1000, 3)])));
        assert!(is_blade(&mv(4, &[(0b1110, 1), (0b1101, 4)])));
        assert!(is_blade(&mv(4, &[(0b1111, 5)])));
    }

    #[test]
    fn scalar_blade_determinant() {
        // A = 2 + 3e12 in 2D: -4 + 9 e12^2 = -4 - 9 = -13.
        let a = mv(2, &[(0, 2), (0b11, 3)]);
        assert_eq!(scalar_blade_det(&a).unwrap(), r(-13));
        // vector case: a0 + a1 e1 + a2 e2 -> a1^2 + a2^2 - a0^2.
        let v = mv(2, &[(0, 1), (0b01, 2), (0b10, 3)]);
        assert_eq!(scalar_blade_det(&v).unwrap(), r(4 + 9 - 1));
        // adjugate pairing: A * [A]_0 = det.
        let adj = scalar_blade_adj(&a).unwrap();
        assert_eq!(
            a.gp(&adj).unwrap(),
            Mv::scalar(euclid(2), r(-13))
        );
        // not scalar-blade form
        let bad = mv(3, &[(0, 1), (0b001, 1), (0b011, 1)]);
        assert_eq!(scalar_blade_det(&bad), Err(Error::NotScalarBladeForm));
    }

    #[test]
    fn scalar_blade_vs_full_determinant_powers() {
        // 4D: canonical det of a {0,1}-supported A equals (A*[A]_0)^2;
        // 5D: the fourth power.
        let a4 = mv(4, &[(0, 2), (0b0001, 3), (0b0010, -1)]);
        let sbd = scalar_blade_det(&a4).unwrap();
        assert_eq!(determinant(&a4).unwrap(), sbd.mul(&sbd));
        let a5 = mv(5, &[(0, 2), (0b00001, 3), (0b00100, -1)]);
        let sbd5 = scalar_blade_det(&a5).unwrap();
        let fourth = sbd5.mul(&sbd5).mul(&sbd5).mul(&sbd5);
        assert_eq!(determinant(&a5).unwrap(), fourth);
    }
}
