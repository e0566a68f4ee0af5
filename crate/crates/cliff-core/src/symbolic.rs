//! Exact symbolic expansion of determinant and adjugate expressions over
//! indeterminate coefficients `a_I`, one variable per basis blade.
//!
//! Monomials are nibble-packed exponent vectors (4 bits per variable, up to
//! the 32 variables of the 5D algebra), so a monomial key is a single
//! `u128`. Coefficients are exact 64-bit integers with checked arithmetic.
//! Metric entries are fixed numerics per expansion run; dimensions 1 and 2
//! additionally support a g-symbolic mode where the metric entries become
//! extra variables.

use std::collections::HashMap;

use crate::algebra::{Blade, GradeSet};
use crate::expr::DetExpr;
use crate::inverse;
use crate::{Error, Result, MAX_DET_DIM};

/// Exponent vector packed in nibbles: variable `i` occupies bits `4i..4i+4`.
pub type Monomial = u128;

pub fn monomial_degree(m: Monomial) -> u32 {
    let mut deg = 0;
    let mut rest = m;
    while rest != 0 {
        deg += (rest & 0xf) as u32;
        rest >>= 4;
    }
    deg
}

pub fn monomial_exponent(m: Monomial, var: usize) -> u32 {
    (m >> (4 * var) & 0xf) as u32
}

pub fn monomial_from_powers(powers: &[(usize, u32)]) -> Monomial {
    let mut m = 0u128;
    for &(var, exp) in powers {
        assert!(var < 32 && exp < 16);
        m += (exp as u128) << (4 * var);
    }
    m
}

/// Sparse polynomial with integer coefficients; zero coefficients are never
/// stored, so the representation is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: HashMap<Monomial, i64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn variable(var: usize) -> Self {
        let mut terms = HashMap::new();
        terms.insert(monomial_from_powers(&[(var, 1)]), 1);
        Polynomial { terms }
    }

    pub fn constant(c: i64) -> Self {
        let mut terms = HashMap::new();
        if c != 0 {
            terms.insert(0, c);
        }
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: Monomial) -> i64 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(&m, &c)| (m, -c)).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(m).or_insert(0);
        *slot = slot.checked_add(c).expect("coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for (m, c) in other.terms() {
            self.add_term(m, c);
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, -c);
        }
        out
    }

    /// Accumulate `scale * shift * p * q` into `self`. Exponent nibbles never
    /// overflow for the degrees arising here (at most 8 per variable).
    pub fn add_scaled_product(&mut self, p: &Polynomial, q: &Polynomial, scale: i64, shift: Monomial) {
        if scale == 0 || p.is_zero() || q.is_zero() {
            return;
        }
        for (m1, c1) in p.terms() {
            let c1s = c1.checked_mul(scale).expect("coefficient overflow");
            for (m2, c2) in q.terms() {
                let c = c1s.checked_mul(c2).expect("coefficient overflow");
                self.add_term(m1 + m2 + shift, c);
            }
        }
    }

    /// Number of stored monomials and the maximum total degree.
    pub fn term_count(&self) -> (u64, u32) {
        let count = self.terms.len() as u64;
        let degree = self.terms.keys().map(|&m| monomial_degree(m)).max().unwrap_or(0);
        (count, degree)
    }

    /// Evaluate at an integer point, exact.
    pub fn eval_i128(&self, values: &[i128]) -> i128 {
        let mut total: i128 = 0;
        for (m, c) in self.terms() {
            let mut term = c as i128;
            let mut rest = m;
            let mut var = 0;
            while rest != 0 {
                let e = (rest & 0xf) as u32;
                for _ in 0..e {
                    term = term.checked_mul(values[var]).expect("overflow in eval");
                }
                rest >>= 4;
                var += 1;
            }
            total = total.checked_add(term).expect("overflow in eval");
        }
        total
    }

    /// Monomials sorted by (total degree, packed key) for stable printing.
    pub fn sorted_terms(&self) -> Vec<(Monomial, i64)> {
        let mut terms: Vec<(Monomial, i64)> = self.terms().collect();
        terms.sort_by_key(|&(m, _)| (monomial_degree(m), m));
        terms
    }
}

/// `+1/-1` when the polynomials are identical up to that global sign.
pub fn equal_up_to_sign(p: &Polynomial, q: &Polynomial) -> Option<i8> {
    if p == q {
        Some(1)
    } else if p == &q.neg() {
        Some(-1)
    } else {
        None
    }
}

/// Multivector with polynomial coefficients over a numeric metric. In
/// g-symbolic mode (d <= 2) the metric entries are the extra variables
/// `g_1..g_d` appended after the `2^d` blade variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicMultivector {
    dim: usize,
    metric: Vec<i64>,
    g_symbolic: bool,
    coeffs: Vec<Polynomial>,
}

impl SymbolicMultivector {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> &Polynomial {
        &self.coeffs[blade.mask() as usize]
    }

    pub fn scalar_part(&self) -> &Polynomial {
        &self.coeffs[0]
    }

    /// Grades with a nonzero polynomial coefficient.
    pub fn grade_support(&self) -> GradeSet {
        let mut set = GradeSet::EMPTY;
        for (i, p) in self.coeffs.iter().enumerate() {
            if !p.is_zero() {
                set = set.insert(Blade(i as u32).grade());
            }
        }
        set
    }

    /// True when every non-scalar component is identically zero.
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(|p| p.is_zero())
    }

    pub fn grade_negate(&self, set: GradeSet) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if set.contains(Blade(i as u32).grade()) {
                    p.neg()
                } else {
                    p.clone()
                }
            })
            .collect();
        SymbolicMultivector {
            coeffs,
            ..self.clone()
        }
    }

    /// Geometric product, exact.
    pub fn gp(&self, other: &SymbolicMultivector) -> SymbolicMultivector {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.metric, other.metric);
        let n = 1usize << self.dim;
        let mut out = vec![Polynomial::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let (scale, shift) = self.blade_scale(i as u32, j as u32);
                out[i ^ j].add_scaled_product(&self.coeffs[i], &other.coeffs[j], scale, shift);
            }
        }
        SymbolicMultivector {
            dim: self.dim,
            metric: self.metric.clone(),
            g_symbolic: self.g_symbolic,
            coeffs: out,
        }
    }

    /// Reordering sign and metric factor for `e_i * e_j`: numeric scale plus,
    /// in g-symbolic mode, a monomial in the g-variables.
    fn blade_scale(&self, i: u32, j: u32) -> (i64, Monomial) {
        let mut sign = 1i64;
        for bit in 0..self.dim as u32 {
            if i >> bit & 1 == 1 && (j & ((1 << bit) - 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
        }
        let mut shift = 0u128;
        let mut common = i & j;
        let mut idx = 0usize;
        while common != 0 {
            if common & 1 == 1 {
                if self.g_symbolic {
                    shift += 1u128 << (4 * ((1 << self.dim) + idx));
                } else {
                    sign = sign.checked_mul(self.metric[idx]).expect("metric overflow");
                }
            }
            common >>= 1;
            idx += 1;
        }
        (sign, shift)
    }
}

fn check_sym_dim(d: usize) -> Result<()> {
    if d > MAX_DET_DIM {
        return Err(Error::UnsupportedDimension {
            dim: d,
            max: MAX_DET_DIM,
        });
    }
    Ok(())
}

/// The generic multivector: blade `I` carries the fresh variable `a_I`.
pub fn generic_multivector(d: usize, metric: &[i64]) -> Result<SymbolicMultivector> {
    check_sym_dim(d)?;
    assert_eq!(metric.len(), d);
    let n = 1usize << d;
    Ok(SymbolicMultivector {
        dim: d,
        metric: metric.to_vec(),
        g_symbolic: false,
        coeffs: (0..n).map(Polynomial::variable).collect(),
    })
}

/// Generic multivector with symbolic metric entries; supported for d <= 2.
pub fn generic_multivector_g(d: usize) -> Result<SymbolicMultivector> {
    if d > 2 {
        return Err(Error::UnsupportedDimension { dim: d, max: 2 });
    }
    let n = 1usize << d;
    Ok(SymbolicMultivector {
        dim: d,
        metric: vec![0; d],
        g_symbolic: true,
        coeffs: (0..n).map(Polynomial::variable).collect(),
    })
}

/// Expand an expression over the generic multivector. `ScalarDiv` nodes are
/// not polynomial and are rejected.
pub fn expand(expr: &DetExpr, d: usize, metric: &[i64]) -> Result<SymbolicMultivector> {
    let generic = generic_multivector(d, metric)?;
    expand_on(expr, &generic)
}

/// Expand an expression with a caller-supplied input (e.g. a pre-negated or
/// g-symbolic generic multivector).
pub fn expand_on(expr: &DetExpr, input: &SymbolicMultivector) -> Result<SymbolicMultivector> {
    match expr {
        DetExpr::Var => Ok(input.clone()),
        DetExpr::GradeNeg(c, s) => Ok(expand_on(c, input)?.grade_negate(*s)),
        DetExpr::Product(l, r) => Ok(expand_on(l, input)?.gp(&expand_on(r, input)?)),
        DetExpr::SelfProd(c, s) => {
            let x = expand_on(c, input)?;
            Ok(x.gp(&x.grade_negate(*s)))
        }
        DetExpr::Dual(c) => {
            let x = expand_on(c, input)?;
            let n = 1usize << x.dim;
            let mut pseudo = SymbolicMultivector {
                dim: x.dim,
                metric: x.metric.clone(),
                g_symbolic: x.g_symbolic,
                coeffs: vec![Polynomial::zero(); n],
            };
            pseudo.coeffs[n - 1] = Polynomial::constant(1);
            Ok(pseudo.gp(&x))
        }
        DetExpr::ScalarDiv(..) => Err(Error::NonScalarSymbolic),
    }
}

/// Expand a registered determinant expression and machine-check scalarity:
/// every non-scalar blade polynomial must be identically zero.
pub fn expand_det(expr: &DetExpr, d: usize, metric: &[i64]) -> Result<Polynomial> {
    let full = expand(expr, d, metric)?;
    if !full.is_scalar() {
        return Err(Error::NonScalarSymbolic);
    }
    Ok(full.coeffs.into_iter().next().expect("scalar slot"))
}

/// Expansion of the canonical determinant of dimension `d` (Euclidean unless
/// a metric is supplied).
pub fn canonical_det_polynomial(d: usize, metric: &[i64]) -> Result<Polynomial> {
    check_sym_dim(d)?;
    let mut x = generic_multivector(d, metric)?;
    for stage in canonical_stages(d) {
        x = x.gp(&x.grade_negate(GradeSet::from_grades(stage)));
    }
    if !x.is_scalar() {
        return Err(Error::NonScalarSymbolic);
    }
    Ok(x.coeffs.into_iter().next().expect("scalar slot"))
}

fn canonical_stages(d: usize) -> &'static [&'static [u32]] {
    match d {
        0 => &[],
        1 | 2 => &[&[1, 2]],
        3 | 4 => &[&[1, 2], &[3, 4]],
        _ => &[&[2, 3], &[1, 4], &[5]],
    }
}

/// Per-component expansion of the canonical adjugate.
pub fn canonical_adj_polynomials(d: usize, metric: &[i64]) -> Result<Vec<Polynomial>> {
    check_sym_dim(d)?;
    let a = generic_multivector(d, metric)?;
    if d == 0 {
        return Ok(vec![Polynomial::constant(1)]);
    }
    let mut x = a.clone();
    let mut adj: Option<SymbolicMultivector> = None;
    for stage in canonical_stages(d) {
        let set = GradeSet::from_grades(stage);
        let negated = x.grade_negate(set);
        adj = Some(match adj {
            None => negated.clone(),
            Some(acc) => acc.gp(&negated),
        });
        x = x.gp(&negated);
    }
    Ok(adj.expect("at least one stage").coeffs)
}

/// Expansion of the canonical determinant applied to `[A]_S` — the value
/// class of the grade-negation coset containing `S`.
pub fn preneg_det_polynomial(d: usize, set: GradeSet, metric: &[i64]) -> Result<Polynomial> {
    check_sym_dim(d)?;
    let mut x = generic_multivector(d, metric)?.grade_negate(set);
    for stage in canonical_stages(d) {
        x = x.gp(&x.grade_negate(GradeSet::from_grades(stage)));
    }
    if !x.is_scalar() {
        return Err(Error::NonScalarSymbolic);
    }
    Ok(x.coeffs.into_iter().next().expect("scalar slot"))
}

/// Monomials on which two polynomials disagree, with both coefficients.
pub fn polynomial_delta(p: &Polynomial, q: &Polynomial) -> Vec<(Monomial, i64, i64)> {
    let mut monomials: Vec<Monomial> = p.terms().map(|(m, _)| m).collect();
    monomials.extend(q.terms().map(|(m, _)| m));
    monomials.sort_unstable();
    monomials.dedup();
    let mut out: Vec<(Monomial, i64, i64)> = monomials
        .into_iter()
        .filter_map(|m| {
            let (cp, cq) = (p.coefficient(m), q.coefficient(m));
            (cp != cq).then_some((m, cp, cq))
        })
        .collect();
    out.sort_by_key(|&(m, _, _)| (monomial_degree(m), m));
    out
}

/// Report for the 3D determinant-vs-altered-determinant comparison: the
/// monomials whose coefficients differ between `det(A)` and `det([A]_1)`.
pub fn nondet_delta(d: usize) -> Result<Vec<(Monomial, i64, i64)>> {
    if d != 3 {
        return Err(Error::UnsupportedDimension { dim: d, max: 3 });
    }
    let metric = [1i64; 3];
    let base = canonical_det_polynomial(3, &metric)?;
    let altered = preneg_det_polynomial(3, GradeSet::from_grades(&[1]), &metric)?;
    Ok(polynomial_delta(&base, &altered))
}

/// Variable name for blade `mask` in dimension `d`: `a0` for the scalar,
/// otherwise `a` followed by ascending indices (`a1`, `a12`, ...). The
/// g-symbolic metric variables print as `g1..gd`.
pub fn variable_name(d: usize, var: usize) -> String {
    let n = 1usize << d;
    if var >= n {
        return format!("g{}", var - n + 1);
    }
    if var == 0 {
        return "a0".to_string();
    }
    let digits: String = Blade(var as u32).indices().map(|i| i.to_string()).collect();
    format!("a{digits}")
}

/// Render a monomial as `a0^2*a123^2`.
pub fn monomial_name(d: usize, m: Monomial) -> String {
    if m == 0 {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let mut rest = m;
    let mut var = 0;
    while rest != 0 {
        let e = (rest & 0xf) as u32;
        if e == 1 {
            parts.push(variable_name(d, var));
        } else if e > 1 {
            parts.push(format!("{}^{}", variable_name(d, var), e));
        }
        rest >>= 4;
        var += 1;
    }
    parts.join("*")
}

/// Parse a monomial spec like `a0^2*a123^2` (also accepts spaces as
/// separators). Exponents default to 1.
pub fn parse_monomial(d: usize, spec: &str) -> Result<Monomial> {
    let mut powers: Vec<(usize, u32)> = Vec::new();
    for part in spec.split(['*', ' ']).filter(|s| !s.is_empty()) {
        let (name, exp) = match part.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<u32>()
                    .map_err(|_| Error::UnknownExpression(part.to_string()))?,
            ),
            None => (part, 1),
        };
        let var = (0..(1usize << d) + d)
            .find(|&v| variable_name(d, v) == name)
            .ok_or_else(|| Error::UnknownExpression(name.to_string()))?;
        powers.push((var, exp));
    }
    Ok(monomial_from_powers(&powers))
}

/// Numeric evaluation consistency: the symbolic expansion of the canonical
/// determinant evaluated at a point must match the numeric determinant.
pub fn eval_matches_numeric(d: usize, point: &[i128]) -> Result<bool> {
    use crate::algebra::{Metric, Multivector};
    let metric_signs = vec![1i64; d];
    let poly = canonical_det_polynomial(d, &metric_signs)?;
    let symbolic_value = poly.eval_i128(point);
    let metric: Metric<i128> = Metric::euclidean(d)?;
    let mv = Multivector::from_coeffs(metric, point.to_vec());
    let numeric = inverse::determinant(&mv)?;
    Ok(symbolic_value == numeric)
}
