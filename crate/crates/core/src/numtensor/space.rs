//! Multi-index bookkeeping for truncated Taylor jets.

use std::collections::HashMap;
use std::sync::Arc;

/// Highest supported truncation order.
pub const MAX_ORDER: usize = 4;

/// Exponent vector of a monomial.
pub type MultiIndex = Vec<u8>;

/// Enumeration of all multi-indices of total degree `<= order` in `nvars`
/// variables, in graded lexicographic order, together with the lookup tables
/// used by jet arithmetic.
///
/// Degree blocks are contiguous, so the coefficients of a jet truncated at a
/// lower order form a prefix of the full coefficient vector.
#[derive(Debug)]
pub struct JetSpace {
    nvars: usize,
    order: usize,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    /// `degree_start[d]` is the position of the first index of degree `d`;
    /// `degree_start[order + 1]` is the total count.
    degree_start: Vec<usize>,
    /// `(a, b, a + b)` for every pair whose sum fits, sorted by result degree.
    products: Vec<(u32, u32, u32)>,
    /// `product_end[d]`: number of product entries with result degree `<= d`.
    product_end: Vec<usize>,
    /// `raise[v][k]`: index of `indices[k] + e_v` when still in range.
    raise: Vec<Vec<Option<u32>>>,
    factorials: Vec<u64>,
}

impl JetSpace {
    pub fn new(nvars: usize, order: usize) -> Arc<Self> {
        assert!(nvars >= 1, "jets need at least one variable");
        assert!(order <= MAX_ORDER, "jet order above {MAX_ORDER}");

        let mut indices: Vec<MultiIndex> = Vec::new();
        let mut degree_start = Vec::with_capacity(order + 2);
        for d in 0..=order {
            degree_start.push(indices.len());
            let mut current = vec![0u8; nvars];
            push_degree(&mut indices, &mut current, 0, d);
        }
        degree_start.push(indices.len());

        let lookup: HashMap<MultiIndex, usize> =
            indices.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

        let degree = |k: usize| indices[k].iter().map(|&e| e as usize).sum::<usize>();
        let mut products = Vec::new();
        for a in 0..indices.len() {
            for b in 0..indices.len() {
                if degree(a) + degree(b) > order {
                    continue;
                }
                let sum: MultiIndex = indices[a].iter().zip(&indices[b]).map(|(x, y)| x + y).collect();
                products.push((a as u32, b as u32, lookup[&sum] as u32));
            }
        }
        products.sort_by_key(|&(_, _, c)| c);
        let product_end = (0..=order)
            .map(|d| products.partition_point(|&(_, _, c)| (c as usize) < degree_start[d + 1]))
            .collect();

        let raise = (0..nvars)
            .map(|v| {
                indices
                    .iter()
                    .map(|m| {
                        let mut up = m.clone();
                        up[v] += 1;
                        lookup.get(&up).map(|&k| k as u32)
                    })
                    .collect()
            })
            .collect();

        let mut factorials = vec![1u64; order + 1];
        for k in 1..=order {
            factorials[k] = factorials[k - 1] * k as u64;
        }

        Arc::new(JetSpace {
            nvars,
            order,
            indices,
            lookup,
            degree_start,
            products,
            product_end,
            raise,
            factorials,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of coefficients of a jet truncated at `order`.
    pub fn len_upto(&self, order: usize) -> usize {
        self.degree_start[order + 1]
    }

    pub fn index_of(&self, alpha: &[u8]) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    pub fn multi_index(&self, k: usize) -> &[u8] {
        &self.indices[k]
    }

    pub fn degree_of(&self, k: usize) -> usize {
        self.degree_start.partition_point(|&s| s <= k) - 1
    }

    pub(crate) fn products_upto(&self, order: usize) -> &[(u32, u32, u32)] {
        &self.products[..self.product_end[order]]
    }

    pub(crate) fn raised(&self, var: usize, k: usize) -> Option<usize> {
        self.raise[var][k].map(|r| r as usize)
    }

    /// `alpha!` as an integer.
    pub fn alpha_factorial(&self, k: usize) -> u64 {
        self.indices[k].iter().map(|&e| self.factorials[e as usize]).product()
    }
}

fn push_degree(out: &mut Vec<MultiIndex>, current: &mut MultiIndex, var: usize, remaining: usize) {
    if var + 1 == current.len() {
        current[var] = remaining as u8;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e as u8;
        push_degree(out, current, var + 1, remaining - e);
    }
    current[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn counts_match_binomials() {
        for nvars in 1..=6 {
            for order in 0..=MAX_ORDER {
                let s = JetSpace::new(nvars, order);
                assert_eq!(s.len_upto(order), binomial(nvars + order, order));
            }
        }
    }

    #[test]
    fn graded_lex_order_two_vars() {
        let s = JetSpace::new(2, 2);
        let got: Vec<_> = (0..s.len_upto(2)).map(|k| s.multi_index(k).to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(s.degree_of(0), 0);
        assert_eq!(s.degree_of(2), 1);
        assert_eq!(s.degree_of(5), 2);
    }

    #[test]
    fn product_table_prefixes_by_degree() {
        let s = JetSpace::new(3, 4);
        for d in 0..=4 {
            assert!(s.products_upto(d).iter().all(|&(_, _, c)| s.degree_of(c as usize) <= d));
        }
        assert_eq!(s.products_upto(0).len(), 1);
    }
}
