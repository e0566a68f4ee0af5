//! Exhaustive searches over grade-negated expression spaces, with the
//! contribution and product-count tables that underpin them.
//!
//! Candidates are filtered by exact integer probes (a nonzero non-scalar
//! coefficient rejects immediately), then confirmed: symbolically for
//! d <= 5, by two further widened probes for d = 6. Verdicts are merged in
//! candidate-index order, so reports are identical regardless of worker
//! count.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{blade_mul, Blade, GradeSet, Metric, Multivector};
use crate::expr::DetExpr;
use crate::inverse;
use crate::symbolic;
use crate::{Error, Result, MAX_DIM};

/// Search configuration. `seed` drives the probe stream; `jobs` is handled
/// by the caller via the rayon pool.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchKind {
    Nested,
    Product,
}

/// How a scalar hit was confirmed after the probe filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Confirmation {
    Symbolic,
    Probes,
}

/// One scalar-valued expression found by a search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchVerdict {
    pub index: u64,
    pub kind: SearchKind,
    /// Negation sets, outermost-last for nested chains, factor order for
    /// products; serialized as grade lists.
    pub sets: Vec<Vec<u32>>,
    /// Sign with value == sign * det(A), when the expression is
    /// determinant-valued (d <= 5 only).
    pub det_sign: Option<i8>,
    /// Index of the grade-negation coset whose value class the expression
    /// computes (d <= 5 only).
    pub value_class: Option<usize>,
    pub confirmation: Confirmation,
    pub probes_used: u32,
}

impl SearchVerdict {
    pub fn grade_sets(&self) -> Vec<GradeSet> {
        self.sets.iter().map(|s| GradeSet::from_grades(s)).collect()
    }
}

/// Summary block reported next to the verdict stream.
#[derive(Debug, Clone, Serialize)]
pub struct SearchSummary {
    pub kind: SearchKind,
    pub dim: usize,
    pub slots: usize,
    pub candidates: u64,
    pub scalar_hits: u64,
    pub det_valued: u64,
    pub deduped_classes: u64,
}

// ---------------------------------------------------------------------------
// fast integer kernel
// ---------------------------------------------------------------------------

/// Euclidean blade-product sign table for dimension `d`.
struct ProductTable {
    n: usize,
    sign: Vec<i8>,
}

impl ProductTable {
    fn new(d: usize) -> ProductTable {
        let metric: Metric<i128> = Metric::euclidean(d).expect("dimension within bounds");
        let n = 1usize << d;
        let mut sign = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                let (s, _) = blade_mul(Blade(i as u32), Blade(j as u32), &metric);
                sign[i * n + j] = s as i8;
            }
        }
        ProductTable { n, sign }
    }

    fn gp(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        let n = self.n;
        let mut out = vec![0i128; n];
        for i in 0..n {
            let xi = x[i];
            if xi == 0 {
                continue;
            }
            let row = &self.sign[i * n..(i + 1) * n];
            for j in 0..n {
                out[i ^ j] += xi * row[j] as i128 * y[j];
            }
        }
        out
    }

    fn negate(&self, x: &[i128], set: GradeSet) -> Vec<i128> {
        x.iter()
            .enumerate()
            .map(|(i, &c)| {
                if set.contains(Blade(i as u32).grade()) {
                    -c
                } else {
                    c
                }
            })
            .collect()
    }

    fn self_prod(&self, x: &[i128], set: GradeSet) -> Vec<i128> {
        self.gp(x, &self.negate(x, set))
    }

    /// True when every non-scalar coefficient of `x * [x]_set` vanishes;
    /// bails out at the first nonzero coefficient.
    fn self_prod_is_scalar(&self, x: &[i128], set: GradeSet) -> bool {
        let n = self.n;
        let nu: Vec<i128> = (0..n)
            .map(|j| {
                if set.contains(Blade(j as u32).grade()) {
                    -1
                } else {
                    1
                }
            })
            .collect();
        for k in 1..n {
            let mut acc: i128 = 0;
            for j in 0..n {
                let yj = x[j];
                if yj == 0 {
                    continue;
                }
                let i = k ^ j;
                acc += x[i] * self.sign[i * n + j] as i128 * nu[j] * yj;
            }
            if acc != 0 {
                return false;
            }
        }
        true
    }

    /// True when every non-scalar coefficient of the product `x * y` vanishes.
    fn product_is_scalar(&self, x: &[i128], y: &[i128]) -> bool {
        let n = self.n;
        for k in 1..n {
            let mut acc: i128 = 0;
            for j in 0..n {
                let yj = y[j];
                if yj == 0 {
                    continue;
                }
                let i = k ^ j;
                acc += x[i] * self.sign[i * n + j] as i128 * yj;
            }
            if acc != 0 {
                return false;
            }
        }
        true
    }
}

fn integer_probes(d: usize, count: usize, range: i64, seed: u64) -> Vec<Vec<i128>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..1usize << d)
                .map(|_| rng.gen_range(-range..=range) as i128)
                .collect()
        })
        .collect()
}

/// All subsets of {1, .., d} in mask order: the per-slot candidate set
/// (grade-0 negations excluded).
fn candidate_sets(d: usize) -> Vec<GradeSet> {
    (0u32..1 << d)
        .map(|mask| {
            let grades: Vec<u32> = (1..=d as u32)
                .filter(|&g| mask >> (g - 1) & 1 == 1)
                .collect();
            GradeSet::from_grades(&grades)
        })
        .collect()
}

/// Canonical determinant values `det([A]_rep)` per coset representative and
/// probe, for value classification of scalar hits. Dimensions 0 and 1 have
/// a single class (every grade-negation preserves the determinant there).
fn class_values(d: usize, probes: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let metric: Metric<i128> = Metric::euclidean(d)?;
    let det_of = |p: &Vec<i128>, rep: GradeSet| {
        let mv = Multivector::from_coeffs(metric.clone(), p.clone());
        inverse::determinant(&mv.grade_negate(rep))
    };
    if d < 2 {
        return probes
            .iter()
            .map(|p| det_of(p, GradeSet::EMPTY))
            .collect::<Result<Vec<i128>>>()
            .map(|row| vec![row]);
    }
    let partition = crate::group::cosets(d)?;
    partition
        .cosets
        .iter()
        .map(|coset| {
            probes
                .iter()
                .map(|p| det_of(p, coset.representative))
                .collect()
        })
        .collect()
}

/// Match a scalar value vector against the per-coset determinant values,
/// allowing one consistent global sign.
fn classify_values(values: &[i128], classes: &[Vec<i128>]) -> (Option<usize>, Option<i8>) {
    for (idx, rep_values) in classes.iter().enumerate() {
        for sign in [1i128, -1] {
            if values
                .iter()
                .zip(rep_values)
                .all(|(&v, &r)| v == sign * r)
            {
                let det_sign = (idx == 0).then_some(sign as i8);
                return (Some(idx), det_sign);
            }
        }
    }
    (None, None)
}

// ---------------------------------------------------------------------------
// nested self-product search
// ---------------------------------------------------------------------------

/// Exhaustive search of `f[..f[A, S_1].., S_depth]` over all `(2^d)^depth`
/// grade-negation chains. Returns the scalar-valued survivors.
pub fn search_nested(d: usize, depth: usize, cfg: &SearchConfig) -> Result<Vec<SearchVerdict>> {
    if d > MAX_DIM {
        return Err(Error::UnsupportedDimension { dim: d, max: MAX_DIM });
    }
    assert!((1..=3).contains(&depth), "supported nest depth is 1..=3");
    let table = ProductTable::new(d);
    let sets = candidate_sets(d);
    let probes = integer_probes(d, 2, 9, cfg.seed);
    let wide_probes = integer_probes(d, 2, 99, cfg.seed.wrapping_add(0x57AB));
    let classes = if d <= crate::MAX_DET_DIM {
        Some(class_values(d, &probes)?)
    } else {
        None
    };

    let per_first: Vec<Vec<SearchVerdict>> = sets
        .par_iter()
        .enumerate()
        .map(|(i1, &s1)| {
            let mut hits = Vec::new();
            let x1: Vec<Vec<i128>> = probes.iter().map(|p| table.self_prod(p, s1)).collect();
            let mut chain = vec![s1];
            descend(
                d, depth, &table, &sets, &probes, &wide_probes, &classes, &x1, &mut chain,
                (i1 as u64) * (sets.len() as u64).pow(depth as u32 - 1),
                &mut hits,
            );
            hits
        })
        .collect();
    Ok(per_first.into_iter().flatten().collect())
}

#[allow(clippy::too_many_arguments)]
fn descend(
    d: usize,
    depth: usize,
    table: &ProductTable,
    sets: &[GradeSet],
    probes: &[Vec<i128>],
    wide_probes: &[Vec<i128>],
    classes: &Option<Vec<Vec<i128>>>,
    state: &[Vec<i128>],
    chain: &mut Vec<GradeSet>,
    index_base: u64,
    hits: &mut Vec<SearchVerdict>,
) {
    if chain.len() == depth {
        if state.iter().all(|x| x[1..].iter().all(|&c| c == 0)) {
            if let Some(v) = confirm_nested(d, table, chain, probes, wide_probes, classes, state) {
                hits.push(SearchVerdict { index: index_base, ..v });
            }
        }
        return;
    }
    let stride = (sets.len() as u64).pow((depth - chain.len() - 1) as u32);
    if chain.len() + 1 == depth {
        // leaf level: early-exit scalarity test on the first probe, then the
        // second; compute the full product only for survivors
        for (i, &s) in sets.iter().enumerate() {
            if !table.self_prod_is_scalar(&state[0], s) {
                continue;
            }
            if !table.self_prod_is_scalar(&state[1], s) {
                continue;
            }
            chain.push(s);
            let next: Vec<Vec<i128>> = state.iter().map(|x| table.self_prod(x, s)).collect();
            if let Some(v) = confirm_nested(d, table, chain, probes, wide_probes, classes, &next) {
                hits.push(SearchVerdict {
                    index: index_base + i as u64 * stride,
                    ..v
                });
            }
            chain.pop();
        }
    } else {
        for (i, &s) in sets.iter().enumerate() {
            let next: Vec<Vec<i128>> = state.iter().map(|x| table.self_prod(x, s)).collect();
            chain.push(s);
            descend(
                d, depth, table, sets, probes, wide_probes, classes, &next, chain,
                index_base + i as u64 * stride,
                hits,
            );
            chain.pop();
        }
    }
}

fn confirm_nested(
    d: usize,
    table: &ProductTable,
    chain: &[GradeSet],
    _probes: &[Vec<i128>],
    wide_probes: &[Vec<i128>],
    classes: &Option<Vec<Vec<i128>>>,
    final_state: &[Vec<i128>],
) -> Option<SearchVerdict> {
    let (confirmation, probes_used) = if d <= crate::MAX_DET_DIM {
        let mut expr = DetExpr::Var;
        for &s in chain {
            expr = DetExpr::SelfProd(Box::new(expr), s);
        }
        let metric_signs = vec![1i64; d];
        let full = symbolic::expand(&expr, d, &metric_signs).ok()?;
        if !full.is_scalar() {
            return None;
        }
        (Confirmation::Symbolic, 2)
    } else {
        // no symbolic budget in 6D: two further exact probes, wider entries
        for p in wide_probes {
            let mut x = p.clone();
            for (i, &s) in chain.iter().enumerate() {
                if i + 1 == chain.len() {
                    if !table.self_prod_is_scalar(&x, s) {
                        return None;
                    }
                }
                x = table.self_prod(&x, s);
            }
        }
        (Confirmation::Probes, 4)
    };
    let values: Vec<i128> = final_state.iter().map(|x| x[0]).collect();
    let (value_class, det_sign) = match classes {
        Some(c) => classify_values(&values, c),
        None => (None, None),
    };
    Some(SearchVerdict {
        index: 0,
        kind: SearchKind::Nested,
        sets: chain
            .iter()
            .map(|s| s.grades().collect::<Vec<u32>>())
            .collect(),
        det_sign,
        value_class,
        confirmation,
        probes_used,
    })
}

// ---------------------------------------------------------------------------
// plain grade-negated product search
// ---------------------------------------------------------------------------

/// Exhaustive search of `[A]_{S_1} * .. * [A]_{S_len}` over all
/// `(2^d)^len` tuples. `len` is 4, or 8 behind the `huge` gate (see
/// [`search_plain_products_huge`]).
pub fn search_plain_products(
    d: usize,
    len: usize,
    cfg: &SearchConfig,
) -> Result<Vec<SearchVerdict>> {
    if d > 4 {
        return Err(Error::UnsupportedDimension { dim: d, max: 4 });
    }
    assert_eq!(len, 4, "plain product search length is 4 (8 behind --huge)");
    let table = ProductTable::new(d);
    let sets = candidate_sets(d);
    let probes = integer_probes(d, 2, 9, cfg.seed);
    let classes = Some(class_values(d, &probes)?);

    let nsets = sets.len() as u64;
    let per_first: Vec<Vec<SearchVerdict>> = sets
        .par_iter()
        .enumerate()
        .map(|(i1, &s1)| {
            let mut hits = Vec::new();
            let f1: Vec<Vec<i128>> = probes.iter().map(|p| table.negate(p, s1)).collect();
            for (i2, &s2) in sets.iter().enumerate() {
                let f12: Vec<Vec<i128>> = probes
                    .iter()
                    .zip(&f1)
                    .map(|(p, x)| table.gp(x, &table.negate(p, s2)))
                    .collect();
                for (i3, &s3) in sets.iter().enumerate() {
                    let f123: Vec<Vec<i128>> = probes
                        .iter()
                        .zip(&f12)
                        .map(|(p, x)| table.gp(x, &table.negate(p, s3)))
                        .collect();
                    for (i4, &s4) in sets.iter().enumerate() {
                        let last: Vec<Vec<i128>> =
                            probes.iter().map(|p| table.negate(p, s4)).collect();
                        if !table.product_is_scalar(&f123[0], &last[0]) {
                            continue;
                        }
                        if !table.product_is_scalar(&f123[1], &last[1]) {
                            continue;
                        }
                        let tuple = [s1, s2, s3, s4];
                        if let Some(mut v) =
                            confirm_product(d, &tuple, &f123, &last, &table, &classes)
                        {
                            v.index = ((i1 as u64 * nsets + i2 as u64) * nsets + i3 as u64)
                                * nsets
                                + i4 as u64;
                            hits.push(v);
                        }
                    }
                }
            }
            hits
        })
        .collect();
    Ok(per_first.into_iter().flatten().collect())
}

fn confirm_product(
    d: usize,
    tuple: &[GradeSet],
    prefix: &[Vec<i128>],
    last: &[Vec<i128>],
    table: &ProductTable,
    classes: &Option<Vec<Vec<i128>>>,
) -> Option<SearchVerdict> {
    // symbolic confirmation
    let mut expr = DetExpr::GradeNeg(Box::new(DetExpr::Var), tuple[0]);
    for &s in &tuple[1..] {
        expr = DetExpr::Product(
            Box::new(expr),
            Box::new(DetExpr::GradeNeg(Box::new(DetExpr::Var), s)),
        );
    }
    let metric_signs = vec![1i64; d];
    let full = symbolic::expand(&expr, d, &metric_signs).ok()?;
    if !full.is_scalar() {
        return None;
    }
    let values: Vec<i128> = prefix
        .iter()
        .zip(last)
        .map(|(x, y)| table.gp(x, y)[0])
        .collect();
    let (value_class, det_sign) = match classes {
        Some(c) => classify_values(&values, c),
        None => (None, None),
    };
    Some(SearchVerdict {
        index: 0,
        kind: SearchKind::Product,
        sets: tuple
            .iter()
            .map(|s| s.grades().collect::<Vec<u32>>())
            .collect(),
        det_sign,
        value_class,
        confirmation: Confirmation::Symbolic,
        probes_used: 2,
    })
}

// ---------------------------------------------------------------------------
// order-8 product search (gated)
// ---------------------------------------------------------------------------

/// Progress checkpoint for the order-8 search.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct Checkpoint {
    pub dim: usize,
    pub length: usize,
    pub seed: u64,
    /// Completed (S1, S2) prefix count, in enumeration order.
    pub completed_prefixes: u64,
    pub scalar_hits: u64,
}

/// The 4D order-8 grade-negated product search over `16^8` candidates.
/// Long-running; enumerates (S1, S2) prefixes sequentially (parallel
/// within each), checkpointing after every prefix (16^6 candidates).
/// Survivors are NOT symbolically confirmed (probes only).
pub fn search_plain_products_huge(
    d: usize,
    cfg: &SearchConfig,
    checkpoint_path: Option<&Path>,
    mut on_progress: impl FnMut(&Checkpoint),
) -> Result<Vec<SearchVerdict>> {
    if d != 4 {
        return Err(Error::UnsupportedDimension { dim: d, max: 4 });
    }
    let len = 8usize;
    let table = ProductTable::new(d);
    let sets = candidate_sets(d);
    let nsets = sets.len() as u64;
    let probes = integer_probes(d, 2, 9, cfg.seed);
    let wide = integer_probes(d, 2, 99, cfg.seed.wrapping_add(0x57AB));

    let start_prefix = match checkpoint_path {
        Some(p) if p.exists() => {
            let text = std::fs::read_to_string(p).map_err(|_| Error::NonScalarResult)?;
            let cp: Checkpoint =
                serde_json::from_str(&text).map_err(|_| Error::NonScalarResult)?;
            cp.completed_prefixes
        }
        _ => 0,
    };

    let mut hits: Vec<SearchVerdict> = Vec::new();
    let mut scalar_hits = 0u64;
    for prefix in start_prefix..nsets * nsets {
        let s1 = sets[(prefix / nsets) as usize];
        let s2 = sets[(prefix % nsets) as usize];
        let base: Vec<Vec<i128>> = probes
            .iter()
            .map(|p| table.gp(&table.negate(p, s1), &table.negate(p, s2)))
            .collect();
        let found: Vec<Vec<SearchVerdict>> = sets
            .par_iter()
            .enumerate()
            .map(|(i3, &s3)| {
                let mut local = Vec::new();
                let mut chain = vec![s1, s2, s3];
                let state: Vec<Vec<i128>> = probes
                    .iter()
                    .zip(&base)
                    .map(|(p, x)| table.gp(x, &table.negate(p, s3)))
                    .collect();
                product_descend(
                    &table, &sets, &probes, &wide, len, &mut chain, &state,
                    (prefix * nsets + i3 as u64) * nsets.pow(4),
                    &mut local,
                );
                local
            })
            .collect();
        for v in found.into_iter().flatten() {
            scalar_hits += 1;
            hits.push(v);
        }
        let cp = Checkpoint {
            dim: d,
            length: len,
            seed: cfg.seed,
            completed_prefixes: prefix + 1,
            scalar_hits,
        };
        if let Some(path) = checkpoint_path {
            write_checkpoint(path, &cp);
        }
        on_progress(&cp);
    }
    hits.sort_by_key(|v| v.index);
    Ok(hits)
}

fn product_descend(
    table: &ProductTable,
    sets: &[GradeSet],
    probes: &[Vec<i128>],
    wide: &[Vec<i128>],
    len: usize,
    chain: &mut Vec<GradeSet>,
    state: &[Vec<i128>],
    index_base: u64,
    hits: &mut Vec<SearchVerdict>,
) {
    let nsets = sets.len() as u64;
    if chain.len() + 1 == len {
        for (i, &s) in sets.iter().enumerate() {
            let last0 = table.negate(&probes[0], s);
            if !table.product_is_scalar(&state[0], &last0) {
                continue;
            }
            let last1 = table.negate(&probes[1], s);
            if !table.product_is_scalar(&state[1], &last1) {
                continue;
            }
            chain.push(s);
            // widened-probe confirmation
            let confirmed = wide.iter().all(|p| {
                let mut x = table.negate(p, chain[0]);
                for &sk in &chain[1..len - 1] {
                    x = table.gp(&x, &table.negate(p, sk));
                }
                table.product_is_scalar(&x, &table.negate(p, chain[len - 1]))
            });
            if confirmed {
                hits.push(SearchVerdict {
                    index: index_base + i as u64,
                    kind: SearchKind::Product,
                    sets: chain.iter().map(|s| s.grades().collect()).collect(),
                    det_sign: None,
                    value_class: None,
                    confirmation: Confirmation::Probes,
                    probes_used: 4,
                });
            }
            chain.pop();
        }
        return;
    }
    let stride = nsets.pow((len - chain.len() - 2) as u32);
    for (i, &s) in sets.iter().enumerate() {
        let next: Vec<Vec<i128>> = probes
            .iter()
            .zip(state)
            .map(|(p, x)| table.gp(x, &table.negate(p, s)))
            .collect();
        chain.push(s);
        product_descend(
            table, sets, probes, wide, len, chain, &next,
            index_base + i as u64 * stride,
            hits,
        );
        chain.pop();
    }
}

fn write_checkpoint(path: &Path, cp: &Checkpoint) {
    let tmp = path.with_extension("tmp");
    if let Ok(mut f) = std::fs::File::create(&tmp) {
        let _ = f.write_all(serde_json::to_string_pretty(cp).unwrap().as_bytes());
        let _ = std::fs::rename(&tmp, path);
    }
}

// ---------------------------------------------------------------------------
// dedup
// ---------------------------------------------------------------------------

/// One equivalence class of search hits.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalClass {
    pub kind: SearchKind,
    /// Canonical negation sets (nested: absent grades stripped per stage;
    /// products: minimal cyclic rotation).
    pub sets: Vec<Vec<u32>>,
    pub member_indices: Vec<u64>,
    pub det_sign: Option<i8>,
    pub value_class: Option<usize>,
}

/// Group verdicts into canonical classes.
///
/// Nested chains are equivalent when they differ only by negations of
/// grades absent from a stage's input (stage supports are exact: symbolic
/// for d <= 5, exact integer probes for d = 6). Plain products are
/// equivalent under cyclic rotation of the factor tuple (the scalar part of
/// a product is invariant under cyclic rotation).
pub fn dedup(verdicts: &[SearchVerdict], d: usize) -> Vec<CanonicalClass> {
    let mut support_memo: HashMap<Vec<GradeSet>, GradeSet> = HashMap::new();
    let mut classes: Vec<(Vec<Vec<u32>>, CanonicalClass)> = Vec::new();
    for v in verdicts {
        let sets = v.grade_sets();
        let canon: Vec<Vec<u32>> = match v.kind {
            SearchKind::Nested => {
                let mut out = Vec::with_capacity(sets.len());
                for i in 0..sets.len() {
                    let support = stage_support(d, &sets[..i], &mut support_memo);
                    out.push(sets[i].intersect(support).grades().collect());
                }
                out
            }
            SearchKind::Product => {
                let n = sets.len();
                (0..n)
                    .map(|rot| {
                        let rotated: Vec<Vec<u32>> = (0..n)
                            .map(|k| sets[(k + rot) % n].grades().collect())
                            .collect();
                        rotated
                    })
                    .min()
                    .expect("nonempty tuple")
            }
        };
        match classes.iter_mut().find(|(key, c)| *key == canon && c.kind == v.kind) {
            Some((_, c)) => c.member_indices.push(v.index),
            None => classes.push((
                canon.clone(),
                CanonicalClass {
                    kind: v.kind,
                    sets: canon,
                    member_indices: vec![v.index],
                    det_sign: v.det_sign,
                    value_class: v.value_class,
                },
            )),
        }
    }
    let mut out: Vec<CanonicalClass> = classes.into_iter().map(|(_, c)| c).collect();
    out.sort_by(|a, b| a.sets.cmp(&b.sets));
    out
}

/// Grade support of the multivector after applying `prefix` self-product
/// stages to a generic input.
fn stage_support(
    d: usize,
    prefix: &[GradeSet],
    memo: &mut HashMap<Vec<GradeSet>, GradeSet>,
) -> GradeSet {
    if prefix.is_empty() {
        return GradeSet::EMPTY.complement(d);
    }
    if let Some(&s) = memo.get(prefix) {
        return s;
    }
    let support = if d <= crate::MAX_DET_DIM {
        let metric_signs = vec![1i64; d];
        let mut x = symbolic::generic_multivector(d, &metric_signs).expect("d <= 5");
        for &s in prefix {
            x = x.gp(&x.grade_negate(s));
        }
        x.grade_support()
    } else {
        let table = ProductTable::new(d);
        let probes = integer_probes(d, 2, 9, 0xDED0);
        let mut set = GradeSet::EMPTY;
        for p in &probes {
            let mut x = p.clone();
            for &s in prefix {
                x = table.self_prod(&x, s);
            }
            for (i, &c) in x.iter().enumerate() {
                if c != 0 {
                    set = set.union(GradeSet::from_grades(&[Blade(i as u32).grade()]));
                }
            }
        }
        set
    };
    memo.insert(prefix.to_vec(), support);
    support
}

// ---------------------------------------------------------------------------
// scalarity test for arbitrary expressions
// ---------------------------------------------------------------------------

/// Two-stage scalarity verdict for one expression: exact integer probes
/// filter, then symbolic confirmation (d <= 5) or widened probes (d = 6).
pub fn scalarity_test(expr: &DetExpr, d: usize, cfg: &SearchConfig) -> Result<Option<Confirmation>> {
    if d > MAX_DIM {
        return Err(Error::UnsupportedDimension { dim: d, max: MAX_DIM });
    }
    let metric: Metric<i128> = Metric::euclidean(d)?;
    for p in integer_probes(d, 2, 9, cfg.seed) {
        let mv = Multivector::from_coeffs(metric.clone(), p);
        if !expr.evaluate(&mv)?.is_scalar() {
            return Ok(None);
        }
    }
    if d <= crate::MAX_DET_DIM {
        let metric_signs = vec![1i64; d];
        let full = symbolic::expand(expr, d, &metric_signs)?;
        Ok(full.is_scalar().then_some(Confirmation::Symbolic))
    } else {
        for p in integer_probes(d, 2, 99, cfg.seed.wrapping_add(0x57AB)) {
            let mv = Multivector::from_coeffs(metric.clone(), p);
            if !expr.evaluate(&mv)?.is_scalar() {
                return Ok(None);
            }
        }
        Ok(Some(Confirmation::Probes))
    }
}

// ---------------------------------------------------------------------------
// contribution and class-count tables
// ---------------------------------------------------------------------------

/// Product class columns of the published tables: outer products `k^r`,
/// scalar scaling `0*r`, inner products `k.r`, middle-grade products `k o r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductClass {
    Outer,
    Scalar,
    Inner,
    Middle,
}

fn classify_pair(b1: u32, b2: u32) -> ProductClass {
    let (g1, g2) = (Blade(b1).grade(), Blade(b2).grade());
    if g1 == 0 || g2 == 0 {
        ProductClass::Scalar
    } else if b1 & b2 == 0 {
        ProductClass::Outer
    } else if b1 & b2 == b1 || b1 & b2 == b2 {
        ProductClass::Inner
    } else {
        ProductClass::Middle
    }
}

/// One cell of a contribution table.
#[derive(Debug, Clone, Serialize)]
pub struct ContribCell {
    pub result_grade: u32,
    pub class: ProductClass,
    /// Unordered grade pair (min, max).
    pub grades: (u32, u32),
    pub pairs: u64,
    pub contributes: bool,
}

/// Contribution table for one self-product stage `X * [X]_S` with `X` a
/// generic multivector of the given grade support.
#[derive(Debug, Clone, Serialize)]
pub struct ContributionTable {
    pub dim: usize,
    pub input_support: Vec<u32>,
    pub negation: Vec<u32>,
    pub cells: Vec<ContribCell>,
    pub output_support: Vec<u32>,
}

/// Compute the contribution table symbolically: a cell contributes iff the
/// accumulated cross-term polynomial of its blade pairs is nonzero.
pub fn contribution_table(d: usize, input_support: GradeSet, negation: GradeSet) -> Result<ContributionTable> {
    if d > crate::MAX_DET_DIM {
        return Err(Error::UnsupportedDimension {
            dim: d,
            max: crate::MAX_DET_DIM,
        });
    }
    let metric_signs = vec![1i64; d];
    let generic = symbolic::generic_multivector(d, &metric_signs)?;
    let n = 1usize << d;
    let metric: Metric<i128> = Metric::euclidean(d)?;
    let mut cells: HashMap<(u32, ProductClass, (u32, u32)), (u64, Vec<symbolic::Polynomial>)> =
        HashMap::new();
    let supported: Vec<usize> = (0..n)
        .filter(|&i| input_support.contains(Blade(i as u32).grade()))
        .collect();
    for (ii, &b1) in supported.iter().enumerate() {
        for &b2 in &supported[ii..] {
            let (g1, g2) = (Blade(b1 as u32).grade(), Blade(b2 as u32).grade());
            let out = b1 ^ b2;
            let g = Blade(out as u32).grade();
            let nu1: i64 = if negation.contains(g1) { -1 } else { 1 };
            let nu2: i64 = if negation.contains(g2) { -1 } else { 1 };
            let (s12, _) = blade_mul(Blade(b1 as u32), Blade(b2 as u32), &metric);
            let (s21, _) = blade_mul(Blade(b2 as u32), Blade(b1 as u32), &metric);
            let coefmul = if b1 == b2 {
                s12 as i64 * nu1
            } else {
                s12 as i64 * nu2 + s21 as i64 * nu1
            };
            let key = (g, classify_pair(b1 as u32, b2 as u32), (g1.min(g2), g1.max(g2)));
            let entry = cells
                .entry(key)
                .or_insert_with(|| (0, vec![symbolic::Polynomial::zero(); n]));
            entry.0 += 1;
            entry.1[out].add_scaled_product(
                &generic.coeffs()[b1],
                &generic.coeffs()[b2],
                coefmul,
                0,
            );
        }
    }
    let mut out_cells: Vec<ContribCell> = cells
        .into_iter()
        .map(|((g, class, grades), (pairs, polys))| ContribCell {
            result_grade: g,
            class,
            grades,
            pairs,
            contributes: polys.iter().any(|p| !p.is_zero()),
        })
        .collect();
    out_cells.sort_by_key(|c| (c.result_grade, c.class, c.grades));
    let mut output_support = GradeSet::EMPTY;
    for c in &out_cells {
        if c.contributes {
            output_support = output_support.insert(c.result_grade);
        }
    }
    Ok(ContributionTable {
        dim: d,
        input_support: input_support.grades().collect(),
        negation: negation.grades().collect(),
        cells: out_cells,
        output_support: output_support.grades().collect(),
    })
}

/// Per-class count of unordered blade pairs (b1, b2) whose product lands in
/// each result grade.
#[derive(Debug, Clone, Serialize)]
pub struct ClassCountRow {
    pub result_grade: u32,
    pub cells: Vec<(ProductClass, (u32, u32), u64)>,
    pub total: u64,
}

pub fn class_count_table(d: usize) -> Result<Vec<ClassCountRow>> {
    if !(3..=5).contains(&d) {
        return Err(Error::UnsupportedDimension { dim: d, max: 5 });
    }
    let n = 1usize << d;
    let mut rows: HashMap<u32, HashMap<(ProductClass, (u32, u32)), u64>> = HashMap::new();
    for b1 in 0..n {
        for b2 in b1..n {
            let g = Blade((b1 ^ b2) as u32).grade();
            let (g1, g2) = (Blade(b1 as u32).grade(), Blade(b2 as u32).grade());
            let key = (classify_pair(b1 as u32, b2 as u32), (g1.min(g2), g1.max(g2)));
            *rows.entry(g).or_default().entry(key).or_insert(0) += 1;
        }
    }
    let mut out = Vec::new();
    for g in 0..=d as u32 {
        let cells_map = rows.remove(&g).unwrap_or_default();
        let mut cells: Vec<(ProductClass, (u32, u32), u64)> = cells_map
            .into_iter()
            .map(|((class, grades), count)| (class, grades, count))
            .collect();
        cells.sort();
        let total = cells.iter().map(|&(_, _, c)| c).sum();
        out.push(ClassCountRow {
            result_grade: g,
            cells,
            total,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_set_counts() {
        assert_eq!(candidate_sets(3).len(), 8);
        assert_eq!(candidate_sets(6).len(), 64);
    }

    #[test]
    fn four_dim_depth_two_nested_hits() {
        let cfg = SearchConfig::default();
        let hits = search_nested(4, 2, &cfg).unwrap();
        // eight raw hits: {1,2} with any superset of {3,4} on the second
        // stage, and {2,3} with any superset of {1,4}
        assert_eq!(hits.len(), 8);
        assert!(hits.iter().all(|h| h.det_sign == Some(1)));
        let classes = dedup(&hits, 4);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].sets, vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(classes[1].sets, vec![vec![2, 3], vec![1, 4]]);
    }

    #[test]
    fn three_dim_product_search_counts() {
        let cfg = SearchConfig::default();
        let hits = search_plain_products(3, 4, &cfg).unwrap();
        assert_eq!(hits.len(), 32);
        let det: Vec<&SearchVerdict> =
            hits.iter().filter(|h| h.value_class == Some(0)).collect();
        assert_eq!(det.len(), 16);
        assert!(det.iter().all(|h| h.det_sign == Some(1)));
        // the non-determinant hits all compute the value class of [A]_1
        let partition = crate::group::cosets(3).unwrap();
        let nondet_class = partition
            .coset_of(GradeSet::from_grades(&[1]))
            .unwrap();
        assert!(hits
            .iter()
            .filter(|h| h.value_class != Some(0))
            .all(|h| h.value_class == Some(nondet_class)));
        // dedup: 16 det hits -> 4 classes, 16 non-det -> 4 classes
        let classes = dedup(&hits, 3);
        assert_eq!(classes.len(), 8);
    }

    #[test]
    fn determinism_across_worker_counts() {
        let cfg = SearchConfig::default();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| search_nested(4, 2, &cfg).unwrap())
        };
        let one = run(1);
        let four = run(4);
        let ser = |hits: &[SearchVerdict]| serde_json::to_string(hits).unwrap();
        assert_eq!(ser(&one), ser(&four));
    }

    #[test]
    fn scalarity_test_examples() {
        let cfg = SearchConfig::default();
        // 4a-form in 4D is scalar, symbolically confirmed
        let expr = crate::expr::sp_chain(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(
            scalarity_test(&expr, 4, &cfg).unwrap(),
            Some(Confirmation::Symbolic)
        );
        // a single f[A,{1,2}] in 4D is not scalar
        let partial = crate::expr::sp_chain(4, &[&[1, 2]]);
        assert_eq!(scalarity_test(&partial, 4, &cfg).unwrap(), None);
        // f[A,{1,2,5,6}] in 6D is not scalar (support {0,3,4})
        let six = crate::expr::sp_chain(6, &[&[1, 2, 5, 6]]);
        assert_eq!(scalarity_test(&six, 6, &cfg).unwrap(), None);
    }

    #[test]
    fn contribution_table_five_dim_plain() {
        let full = GradeSet::EMPTY.complement(5);
        let t = contribution_table(5, full, GradeSet::EMPTY).unwrap();
        // cell (0, 5.r): the pseudoscalar square contributes
        let c05 = t
            .cells
            .iter()
            .find(|c| c.result_grade == 0 && c.grades == (5, 5))
            .unwrap();
        assert!(c05.contributes);
        // cell (3, 1.r) = grade-1 x grade-4 cancels
        let c14 = t
            .cells
            .iter()
            .find(|c| c.result_grade == 3 && c.grades == (1, 4))
            .unwrap();
        assert!(!c14.contributes);
        let all: Vec<u32> = (0..=5).collect();
        assert_eq!(t.output_support, all);
    }

    #[test]
    fn contribution_table_staged_supports() {
        // f[A,{1,2}] on a full 4D input -> {0,3,4}
        let t = contribution_table(4, GradeSet::EMPTY.complement(4), GradeSet::from_grades(&[1, 2]))
            .unwrap();
        assert_eq!(t.output_support, vec![0, 3, 4]);
        // f[x,{1,4}] on a {0,1,4,5}-supported 5D input -> {0,5}
        let t = contribution_table(
            5,
            GradeSet::from_grades(&[0, 1, 4, 5]),
            GradeSet::from_grades(&[1, 4]),
        )
        .unwrap();
        assert_eq!(t.output_support, vec![0, 5]);
    }

    #[test]
    fn class_count_rows() {
        let rows = class_count_table(5).unwrap();
        let totals: Vec<u64> = rows.iter().map(|r| r.total).collect();
        assert_eq!(totals, vec![32, 80, 160, 160, 80, 16]);
        // 3D: no grade-5 row at all
        let rows3 = class_count_table(3).unwrap();
        assert_eq!(rows3.len(), 4);
        assert!(class_count_table(2).is_err());
    }
}
