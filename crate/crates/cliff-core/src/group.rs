//! The grade-negation operator group over grades {1, .., d}, its normal
//! subgroup {identity, inversion, reverse, conjugate}, the quotient-group
//! coset partition, Cayley tables, and the classification of operators by
//! the scalar value class they induce on determinant expressions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{GradeSet, Metric, Multivector};
use crate::inverse;
use crate::ring::Ring;
use crate::{Error, Result};

/// Composition of two grade-negations: the symmetric difference. Every
/// operator is its own inverse.
pub fn compose(a: GradeSet, b: GradeSet) -> GradeSet {
    a ^ b
}

fn check_group_dim(d: usize) -> Result<()> {
    if !(2..=6).contains(&d) {
        return Err(Error::UnsupportedDimension { dim: d, max: 6 });
    }
    Ok(())
}

/// The four operators leaving the determinant invariant, as grade sets:
/// identity, inversion, reverse, reverse-inversion (Clifford conjugate).
pub fn normal_subgroup(d: usize) -> Result<[GradeSet; 4]> {
    check_group_dim(d)?;
    Ok([
        GradeSet::EMPTY,
        GradeSet::inversion_grades(d),
        GradeSet::reverse_grades(d),
        GradeSet::conjugate_grades(d),
    ])
}

/// One coset: the four compositions of the representative with the normal
/// subgroup, in the order id-, inversion-, reverse-, conjugate-composed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coset {
    pub representative: GradeSet,
    pub members: [GradeSet; 4],
}

/// The full coset partition of the `2^d` non-scalar grade-negations into
/// `2^d / 4` cosets; index 0 is the normal subgroup.
#[derive(Debug, Clone)]
pub struct CosetPartition {
    pub dim: usize,
    pub cosets: Vec<Coset>,
}

/// Indices whose subsets label the cosets, mirroring the published tables:
/// the labels mimic the index structure of a lower-dimensional Clifford
/// basis (e.g. subsets of {1,2,4} in 5D).
fn representative_indices(d: usize) -> &'static [u32] {
    match d {
        2 => &[],
        3 => &[1],
        4 => &[1, 4],
        5 => &[1, 2, 4],
        _ => &[1, 2, 3, 4],
    }
}

impl CosetPartition {
    /// Index of the coset containing `op`.
    pub fn coset_of(&self, op: GradeSet) -> Option<usize> {
        self.cosets
            .iter()
            .position(|c| c.members.contains(&op))
    }
}

/// Cosets computed algebraically as orbits of the normal subgroup under
/// composition with the representative subsets.
pub fn cosets(d: usize) -> Result<CosetPartition> {
    let subgroup = normal_subgroup(d)?;
    let indices = representative_indices(d);
    let mut cosets = Vec::with_capacity(1 << indices.len());
    for mask in 0u32..1 << indices.len() {
        let grades: Vec<u32> = indices
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &g)| g)
            .collect();
        let rep = GradeSet::from_grades(&grades);
        let members = [
            compose(rep, subgroup[0]),
            compose(rep, subgroup[1]),
            compose(rep, subgroup[2]),
            compose(rep, subgroup[3]),
        ];
        cosets.push(Coset {
            representative: rep,
            members,
        });
    }
    // the orbits must partition all 2^d operators
    let mut seen: Vec<GradeSet> = cosets.iter().flat_map(|c| c.members).collect();
    seen.sort_unstable();
    seen.dedup();
    assert_eq!(seen.len(), 1 << d, "cosets partition the operator group");
    Ok(CosetPartition { dim: d, cosets })
}

/// Quotient-group multiplication table: entry (i, j) is the index of the
/// coset containing `rep_i o rep_j`.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    pub dim: usize,
    pub labels: Vec<String>,
    pub indices: Vec<Vec<usize>>,
}

pub fn cayley_table(d: usize) -> Result<CayleyTable> {
    let partition = cosets(d)?;
    let labels = partition
        .cosets
        .iter()
        .map(|c| c.representative.to_string())
        .collect();
    let n = partition.cosets.len();
    let mut indices = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let product = compose(
                partition.cosets[i].representative,
                partition.cosets[j].representative,
            );
            indices[i][j] = partition
                .coset_of(product)
                .expect("product lies in some coset");
        }
    }
    Ok(CayleyTable {
        dim: d,
        labels,
        indices,
    })
}

impl CayleyTable {
    /// Every element self-inverse and the group abelian: with closure this
    /// pins the quotient as the elementary abelian group C2^k.
    pub fn is_elementary_abelian(&self) -> bool {
        let n = self.indices.len();
        (0..n).all(|i| {
            self.indices[i][i] == 0
                && (0..n).all(|j| self.indices[i][j] == self.indices[j][i])
        })
    }
}

/// Deterministic random rational probes with entries in [-9, 9].
pub fn rational_probes(
    d: usize,
    count: usize,
    seed: u64,
) -> Vec<Multivector<num_rational::BigRational>> {
    let metric: Metric<num_rational::BigRational> =
        Metric::euclidean(d).expect("dimension within bounds");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coeffs = (0..metric.blade_count())
                .map(|_| Ring::from_i64(rng.gen_range(-9..=9)))
                .collect();
            Multivector::from_coeffs(metric.clone(), coeffs)
        })
        .collect()
}

/// Classify an operator by the determinant value class it induces:
/// evaluates `det([A]_S)` on the probes and returns the index of the coset
/// whose representative produces identical values on every probe.
pub fn classify_operator<R: Ring>(
    op: GradeSet,
    d: usize,
    probes: &[Multivector<R>],
) -> Result<usize> {
    if d > crate::MAX_DET_DIM {
        return Err(Error::UnsupportedDimension {
            dim: d,
            max: crate::MAX_DET_DIM,
        });
    }
    let partition = cosets(d)?;
    let values: Vec<R> = probes
        .iter()
        .map(|a| inverse::determinant(&a.grade_negate(op)))
        .collect::<Result<_>>()?;
    for (idx, coset) in partition.cosets.iter().enumerate() {
        let rep_values: Vec<R> = probes
            .iter()
            .map(|a| inverse::determinant(&a.grade_negate(coset.representative)))
            .collect::<Result<_>>()?;
        if rep_values == values {
            return Ok(idx);
        }
    }
    Err(Error::NonScalarResult)
}

/// Empirical partition of all `2^d` operators by the value vector of
/// `det([A]_S)` over random probes. Probes are re-drawn when two operator
/// classes collide on every probe, up to a retry budget.
pub fn empirical_partition(d: usize, probe_count: usize, seed: u64) -> Result<Vec<Vec<GradeSet>>> {
    let algebraic = cosets(d)?;
    for attempt in 0..8 {
        let probes = rational_probes(d, probe_count, seed.wrapping_add(attempt));
        let mut groups: Vec<(Vec<num_rational::BigRational>, Vec<GradeSet>)> = Vec::new();
        for mask in 0u32..1 << d {
            let grades: Vec<u32> = (1..=d as u32).filter(|&g| mask >> (g - 1) & 1 == 1).collect();
            let op = GradeSet::from_grades(&grades);
            let values: Vec<num_rational::BigRational> = probes
                .iter()
                .map(|a| inverse::determinant(&a.grade_negate(op)))
                .collect::<Result<_>>()?;
            match groups.iter_mut().find(|(v, _)| *v == values) {
                Some((_, ops)) => ops.push(op),
                None => groups.push((values, vec![op])),
            }
        }
        if groups.len() == algebraic.cosets.len() {
            return Ok(groups.into_iter().map(|(_, ops)| ops).collect());
        }
        // distinct cosets collided on these probes; re-probe
    }
    Err(Error::NonScalarResult)
}
