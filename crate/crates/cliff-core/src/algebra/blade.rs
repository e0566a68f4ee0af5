use super::Metric;
use crate::ring::Ring;

/// Basis blade of Cl(d), identified by a bitmask: bit `i-1` set means the
/// basis vector `e_i` is a factor. The empty mask is the scalar unit `e_0`.
/// Factors are in canonical ascending index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(pub u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// Pseudoscalar `e_{1..d}`.
    pub fn pseudoscalar(dim: usize) -> Blade {
        Blade((1u32 << dim) - 1)
    }

    /// Indices present, ascending and 1-based.
    pub fn indices(self) -> impl Iterator<Item = u32> {
        let mask = self.0;
        (0..32).filter(move |i| mask >> i & 1 == 1).map(|i| i + 1)
    }
}

/// Sign from reordering the concatenated factor lists of `a` and `b` into
/// canonical order: for each factor of `a`, count the factors of `b` it must
/// pass. Equivalent to the transposition count of a bubble sort.
fn reorder_sign(a: u32, b: u32) -> i32 {
    let mut swaps = 0u32;
    let mut i = 0;
    let mut rest = a;
    while rest != 0 {
        if rest & 1 == 1 {
            swaps += (b & ((1u32 << i) - 1)).count_ones();
        }
        rest >>= 1;
        i += 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Product of two basis blades under the metric `m`.
///
/// The result blade is `a XOR b`; the scale is the reordering sign times the
/// metric factors of the repeated indices (`a AND b`). Total: never fails.
pub fn blade_mul<R: Ring>(a: Blade, b: Blade, m: &Metric<R>) -> (R, Blade) {
    let sign = reorder_sign(a.0, b.0);
    let mut scale = if sign > 0 { R::one() } else { R::one().neg() };
    let mut common = a.0 & b.0;
    let mut idx = 0usize;
    while common != 0 {
        if common & 1 == 1 {
            scale = scale.mul(&m.entries()[idx]);
        }
        common >>= 1;
        idx += 1;
    }
    (scale, Blade(a.0 ^ b.0))
}
