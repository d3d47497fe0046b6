//! Index bookkeeping for compositions.
//!
//! Slots `a = 1..=K` list the `r` point factors first, then the `s`
//! hypersphere factors; factor `α` occupies slot `α̃ = r + α`. The composed
//! chart has coordinates `t^1..t^{K-1}` followed by the factor coordinates,
//! so factor `α` coordinate `i` (1-based) sits at 1-based position
//! `ĩ = K - 1 + Σ_{β<α} n_β + i`. All positions returned here are 0-based.

use std::ops::Range;

/// Which product factor a coordinate belongs to; `Base` is the `t` block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    Base,
    /// 1-based factor number.
    Factor(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionIndex {
    r: usize,
    dims: Vec<usize>,
}

impl CompositionIndex {
    pub fn new(r: usize, dims: Vec<usize>) -> Self {
        CompositionIndex { r, dims }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.dims.len()
    }

    /// Number of slots `K = r + s`.
    pub fn k(&self) -> usize {
        self.r + self.s()
    }

    /// Dimension `n = Σ n_α + K - 1` of the composition.
    pub fn n(&self) -> usize {
        self.dims.iter().sum::<usize>() + self.k() - 1
    }

    /// Factor dimensions `n_1..n_s`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `n_a` for slot `a` (1-based); zero for point slots.
    pub fn slot_dim(&self, a: usize) -> usize {
        assert!((1..=self.k()).contains(&a), "slot {a} out of range");
        if a <= self.r {
            0
        } else {
            self.dims[a - self.r - 1]
        }
    }

    /// `f_a = a` for points, `Σ_{β≤α} n_β + α̃` for factor slot `α̃`.
    pub fn f(&self, a: usize) -> usize {
        assert!((1..=self.k()).contains(&a), "slot {a} out of range");
        if a <= self.r {
            a
        } else {
            self.dims[..a - self.r].iter().sum::<usize>() + a
        }
    }

    /// Position of `t^λ` for `λ = 1..K-1`.
    pub fn t_pos(&self, lambda: usize) -> usize {
        assert!((1..self.k()).contains(&lambda), "t index {lambda} out of range");
        lambda - 1
    }

    /// Positions of factor `α` (1-based).
    pub fn factor_range(&self, alpha: usize) -> Range<usize> {
        assert!((1..=self.s()).contains(&alpha), "factor {alpha} out of range");
        let start = self.k() - 1 + self.dims[..alpha - 1].iter().sum::<usize>();
        start..start + self.dims[alpha - 1]
    }

    /// Position of coordinate `i` (1-based) of factor `α`.
    pub fn factor_pos(&self, alpha: usize, i: usize) -> usize {
        let range = self.factor_range(alpha);
        assert!((1..=range.len()).contains(&i), "factor coordinate {i} out of range");
        range.start + i - 1
    }

    /// Slot `α̃ = r + α` of factor `α`.
    pub fn factor_slot(&self, alpha: usize) -> usize {
        self.r + alpha
    }

    pub fn block(&self, pos: usize) -> Block {
        assert!(pos < self.n(), "position {pos} out of range");
        if pos + 1 < self.k() {
            return Block::Base;
        }
        let alpha = (1..=self.s()).find(|&a| self.factor_range(a).contains(&pos)).expect("covered");
        Block::Factor(alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn configs() -> Vec<CompositionIndex> {
        let mut out = Vec::new();
        for r in 0..4 {
            for dims in [vec![], vec![1], vec![2], vec![1, 2], vec![2, 1], vec![3, 1, 2]] {
                if r + dims.len() >= 2 {
                    out.push(CompositionIndex::new(r, dims));
                }
            }
        }
        out
    }

    #[test]
    fn positions_partition_the_coordinates() {
        for ix in configs() {
            let mut seen = vec![0usize; ix.n()];
            for lambda in 1..ix.k() {
                seen[ix.t_pos(lambda)] += 1;
                assert_eq!(ix.block(ix.t_pos(lambda)), Block::Base);
            }
            for alpha in 1..=ix.s() {
                for i in 1..=ix.dims()[alpha - 1] {
                    let p = ix.factor_pos(alpha, i);
                    seen[p] += 1;
                    assert_eq!(ix.block(p), Block::Factor(alpha));
                    // 1-based ĩ = i + K - 1 + Σ_{β<α} n_β
                    let tilde = i + ix.k() - 1 + ix.dims()[..alpha - 1].iter().sum::<usize>();
                    assert_eq!(p + 1, tilde);
                }
            }
            assert!(seen.iter().all(|&c| c == 1), "{ix:?}");
        }
    }

    #[test]
    fn f_values() {
        for ix in configs() {
            assert_eq!(ix.f(ix.k()), ix.n() + 1);
            for a in 1..=ix.k() {
                let want = (1..=a).map(|b| ix.slot_dim(b) + 1).sum::<usize>();
                assert_eq!(ix.f(a), want, "{ix:?} slot {a}");
            }
        }
        let ix = CompositionIndex::new(2, vec![3, 1]);
        assert_eq!((ix.f(1), ix.f(2), ix.f(3), ix.f(4)), (1, 2, 6, 8));
        assert_eq!(ix.n(), 7);
        assert_eq!(ix.factor_range(2), 6..7);
        assert_eq!(ix.factor_slot(1), 3);
    }

    #[test]
    #[should_panic]
    fn slot_zero_is_rejected() {
        CompositionIndex::new(2, vec![]).f(0);
    }
}
