//! Subset-indexed dynamic programming shared by the coverage-probability and
//! entropy computations.

use crate::scalar::Real;

/// For every subset `W` of `members` (indexed by local bit position) returns
/// the product of `1 - p(u, v)` over all member pairs `{u, v}` with at least
/// one endpoint in `W`, i.e. the probability that no random edge touches `W`.
///
/// Allocates `2^m` scalars; callers enforce their own size caps.
pub(crate) fn absent_edge_products<F, P>(members: &[usize], p: P) -> Vec<F>
where
    F: Real,
    P: Fn(usize, usize) -> F,
{
    let m = members.len();
    debug_assert!(m < usize::BITS as usize);
    let mut g = vec![F::one(); 1usize << m];
    for w in 1..g.len() {
        let v = w.trailing_zeros() as usize;
        let rest = w & (w - 1);
        let mut prod = g[rest];
        // New edges relative to `rest`: those from `v` to members outside `w`.
        for u in 0..m {
            if (w >> u) & 1 == 0 {
                prod *= F::one() - p(members[v], members[u]);
            }
        }
        g[w] = prod;
    }
    g
}

/// In-place Möbius inversion over the subset lattice: on input
/// `f[S] = Σ_{J ⊆ S} m[J]`, leaves `m[S]` in each slot.
pub(crate) fn mobius_inplace<F: Real>(values: &mut [F]) {
    debug_assert!(values.len().is_power_of_two());
    let bits = values.len().trailing_zeros();
    for b in 0..bits {
        let bit = 1usize << b;
        for s in 0..values.len() {
            if s & bit != 0 {
                let lower = values[s ^ bit];
                values[s] -= lower;
            }
        }
    }
}
