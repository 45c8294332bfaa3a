use std::fmt::Write;

use crate::error::{Error, Result};

/// Largest order built densely (4096 x 4096 entries).
pub const MAX_DENSE_ORDER: u32 = 12;

/// A `2^k x 2^k` matrix of `±1` with pairwise orthogonal rows, in Sylvester
/// order: `W_1 = [1]`, `W_{2m} = [[W, W], [W, -W]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshMatrix {
    k: u32,
    entries: Vec<i8>,
}

/// Builds the Sylvester-Walsh matrix of order `2^k` by doubling.
pub fn walsh_matrix(k: u32) -> Result<WalshMatrix> {
    if k > MAX_DENSE_ORDER {
        return Err(Error::Capacity {
            what: format!("a dense Walsh matrix of order 2^{k}"),
            required: k as usize,
            cap: MAX_DENSE_ORDER as usize,
        });
    }
    let mut entries = vec![1i8];
    let mut m = 1usize;
    while m < 1 << k {
        let mut next = vec![0i8; 4 * m * m];
        for i in 0..m {
            for j in 0..m {
                let w = entries[i * m + j];
                next[i * 2 * m + j] = w;
                next[i * 2 * m + j + m] = w;
                next[(i + m) * 2 * m + j] = w;
                next[(i + m) * 2 * m + j + m] = -w;
            }
        }
        entries = next;
        m *= 2;
    }
    Ok(WalshMatrix { k, entries })
}

impl WalshMatrix {
    pub fn order(&self) -> u32 {
        self.k
    }

    /// Side length `m = 2^k`.
    pub fn size(&self) -> usize {
        1 << self.k
    }

    /// Entry `w_ij`, zero-based.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.size() + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        let m = self.size();
        &self.entries[i * m..(i + 1) * m]
    }

    /// `W W^T` in exact integer arithmetic, row-major.
    pub fn gram(&self) -> Vec<i64> {
        let m = self.size();
        let mut g = vec![0i64; m * m];
        for i in 0..m {
            for j in i..m {
                let dot: i64 = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(a, b)| i64::from(*a) * i64::from(*b))
                    .sum();
                g[i * m + j] = dot;
                g[j * m + i] = dot;
            }
        }
        g
    }

    /// `W W^T = m I`, checked exactly.
    pub fn is_orthogonal(&self) -> bool {
        let m = self.size();
        self.gram()
            .iter()
            .enumerate()
            .all(|(idx, v)| *v == if idx / m == idx % m { m as i64 } else { 0 })
    }

    /// One line per row, entries comma-separated, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.entries.len() * 3);
        for i in 0..self.size() {
            for (j, w) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{w}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Sylvester entry in closed form: (-1)^{popcount(i & j)}.
    fn popcount_entry(i: usize, j: usize) -> i8 {
        if (i & j).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn small_orders() {
        assert_eq!(walsh_matrix(0).unwrap().entries, vec![1]);
        assert_eq!(walsh_matrix(1).unwrap().entries, vec![1, 1, 1, -1]);
        let w3 = walsh_matrix(3).unwrap();
        let g = w3.gram();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(g[i * 8 + j], if i == j { 8 } else { 0 });
            }
        }
    }

    #[test]
    fn matches_closed_form_and_is_normalized() {
        for k in 0..=7 {
            let w = walsh_matrix(k).unwrap();
            let m = w.size();
            for i in 0..m {
                for j in 0..m {
                    assert_eq!(w.get(i, j), popcount_entry(i, j));
                }
                assert_eq!(w.get(0, i), 1);
                assert_eq!(w.get(i, 0), 1);
            }
            assert!(w.is_orthogonal());
        }
    }

    #[test]
    fn order_cap() {
        assert!(matches!(walsh_matrix(MAX_DENSE_ORDER + 1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn csv_export() {
        assert_eq!(walsh_matrix(1).unwrap().to_csv(), "1,1\n1,-1\n");
    }
}
