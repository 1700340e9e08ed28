//! Dense ranking of sorted `k`-multisets over `0..v`.
//!
//! A sorted multiset `a_0 <= ... <= a_{k-1}` becomes the strictly increasing
//! `b_i = a_i + i`, which is ranked in the combinatorial number system as
//! `sum C(b_i, i + 1)`.

#[derive(Clone, Debug)]
pub struct MultisetIndex {
    k: usize,
    /// `binom[n][r]` for `n <= v + k`, `r <= k`.
    binom: Vec<Vec<u64>>,
    count: usize,
}

impl MultisetIndex {
    pub fn new(v: usize, k: usize) -> Self {
        let top = v + k;
        let mut binom = vec![vec![0u64; k + 1]; top + 1];
        for n in 0..=top {
            binom[n][0] = 1;
            for r in 1..=k.min(n) {
                binom[n][r] =
                    binom[n - 1][r - 1].saturating_add(if r < n { binom[n - 1][r] } else { 0 });
            }
        }
        let count = match (v, k) {
            (_, 0) => 1,
            (0, _) => 0,
            _ => binom[v + k - 1][k] as usize,
        };
        MultisetIndex { k, binom, count }
    }

    /// Number of multisets, `C(v + k - 1, k)`.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Rank of a sorted multiset.
    pub fn rank(&self, sorted: &[usize]) -> usize {
        debug_assert_eq!(sorted.len(), self.k);
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        sorted
            .iter()
            .enumerate()
            .map(|(i, &a)| self.binom[a + i][i + 1] as usize)
            .sum()
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(&self, mut r: usize) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for i in (0..self.k).rev() {
            // Largest b with C(b, i+1) <= r.
            let mut b = i;
            while b + 1 < self.binom.len() && self.binom[b + 1][i + 1] as usize <= r {
                b += 1;
            }
            r -= self.binom[b][i + 1] as usize;
            out[i] = b - i;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_multisets(v: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for rest in all_multisets(v, k - 1) {
            let lo = rest.last().copied().unwrap_or(0);
            for a in lo..v {
                let mut m = rest.clone();
                m.push(a);
                out.push(m);
            }
        }
        out
    }

    #[test]
    fn ranks_are_a_bijection_onto_a_dense_range() {
        for v in 1..=6 {
            for k in 1..=4 {
                let idx = MultisetIndex::new(v, k);
                let all = all_multisets(v, k);
                assert_eq!(idx.len(), all.len(), "v={v} k={k}");
                let mut ranks: Vec<usize> = all.iter().map(|m| idx.rank(m)).collect();
                for (m, &r) in all.iter().zip(&ranks) {
                    assert_eq!(&idx.unrank(r), m);
                }
                ranks.sort_unstable();
                assert_eq!(ranks, (0..all.len()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn grid_four_by_four_with_four_cops() {
        assert_eq!(MultisetIndex::new(16, 4).len(), 3876);
    }
}
