use crate::scalar::Scalar;

/// Dense tensor with every index ranging over `0..dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    dim: usize,
    rank: usize,
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Tensor { dim, rank, data: vec![T::zero(); dim.pow(rank as u32)] }
    }

    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let mut idx = vec![0usize; rank];
        let data = (0..dim.pow(rank as u32))
            .map(|flat| {
                let mut r = flat;
                for slot in idx.iter_mut().rev() {
                    *slot = r % dim;
                    r /= dim;
                }
                f(&idx)
            })
            .collect();
        Tensor { dim, rank, data }
    }

    pub fn from_vec(dim: usize, rank: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), dim.pow(rank as u32));
        Tensor { dim, rank, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> T {
        self.data[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: T) {
        let k = self.flat_index(idx);
        self.data[k] = v;
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| if x.magnitude() > m { x.magnitude() } else { m })
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.dim, self.rank), (other.dim, other.rank));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| if (a - b).magnitude() > m { (a - b).magnitude() } else { m })
    }

    /// Largest deviation from total symmetry of a rank-3 tensor.
    pub fn sym3_defect(&self) -> T {
        assert_eq!(self.rank, 3);
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(&[i, j, k]);
                    for w in [self.get(&[j, i, k]), self.get(&[i, k, j]), self.get(&[k, j, i])] {
                        if (v - w).magnitude() > worst {
                            worst = (v - w).magnitude();
                        }
                    }
                }
            }
        }
        worst
    }
}
