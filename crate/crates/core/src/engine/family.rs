use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::SpaceSpec;

/// A finite list of dual vectors `x*_1, ..., x*_M` in `R^n`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalFamily {
    space: SpaceSpec,
    count: usize,
    data: Vec<f64>,
}

impl FunctionalFamily {
    pub fn new(space: SpaceSpec, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let mut data = Vec::with_capacity(vectors.len() * space.n);
        let count = vectors.len();
        for v in vectors {
            if v.len() != space.n {
                return Err(Error::Dimension {
                    expected: space.n,
                    found: v.len(),
                });
            }
            data.extend(v);
        }
        Self::from_flat(space, count, data)
    }

    /// Row-major construction: vector `k` occupies `data[k*n..(k+1)*n]`.
    pub fn from_flat(space: SpaceSpec, count: usize, data: Vec<f64>) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidValue("a functional family needs at least one vector".into()));
        }
        if data.len() != count * space.n {
            return Err(Error::Dimension {
                expected: count * space.n,
                found: data.len(),
            });
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(format!("family entry {v} is not finite")));
        }
        Ok(FunctionalFamily { space, count, data })
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    /// Number of vectors `M`.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn dim(&self) -> usize {
        self.space.n
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.data[k * self.space.n..(k + 1) * self.space.n]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.space.n)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn flat_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        self.vectors().map(<[f64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0.0)
    }

    /// Flips the sign of every vector.
    pub fn negate(&self) -> Self {
        self.map_entries(|v| -v)
    }

    /// Multiplies every entry by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        self.map_entries(|v| c * v)
    }

    fn map_entries(&self, f: impl Fn(f64) -> f64) -> Self {
        FunctionalFamily {
            space: self.space,
            count: self.count,
            data: self.data.iter().map(|v| f(*v)).collect(),
        }
    }

    /// The same family with a zero vector appended.
    pub fn padded_with_zero(&self) -> Self {
        let mut data = self.data.clone();
        data.resize(data.len() + self.space.n, 0.0);
        FunctionalFamily {
            space: self.space,
            count: self.count + 1,
            data,
        }
    }

    /// Pads with zero vectors up to `count` vectors.
    pub fn padded_to(&self, count: usize) -> Self {
        let mut data = self.data.clone();
        data.resize(count.max(self.count) * self.space.n, 0.0);
        FunctionalFamily {
            space: self.space,
            count: count.max(self.count),
            data,
        }
    }

    /// Concatenation of two families over the same space.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::InvalidValue("families live in different spaces".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FunctionalFamily {
            space: self.space,
            count: self.count + other.count,
            data,
        })
    }

    /// Relabels coordinates: entry `i` of every vector moves to `perm[i]`.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Self> {
        let n = self.space.n;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true)) {
            return Err(Error::InvalidValue("not a permutation of the coordinates".into()));
        }
        let mut data = vec![0.0; self.data.len()];
        for (k, v) in self.vectors().enumerate() {
            for (i, x) in v.iter().enumerate() {
                data[k * n + perm[i]] = *x;
            }
        }
        Ok(FunctionalFamily {
            space: self.space,
            count: self.count,
            data,
        })
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

impl Serialize for FunctionalFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.count))?;
        for v in self.vectors() {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Exponent;

    fn space(n: usize) -> SpaceSpec {
        SpaceSpec::new(n, Exponent::TWO).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(FunctionalFamily::new(space(2), vec![]).is_err());
        assert!(FunctionalFamily::new(space(2), vec![vec![1.0]]).is_err());
        assert!(FunctionalFamily::new(space(1), vec![vec![f64::NAN]]).is_err());
        let f = FunctionalFamily::new(space(2), vec![vec![1.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.vector(0), &[1.0, 2.0]);
        assert_eq!(f.negate().vector(0), &[-1.0, -2.0]);
        assert_eq!(f.padded_with_zero().len(), 3);
        assert_eq!(serde_json::to_string(&f).unwrap(), "[[1.0,2.0],[0.0,0.0]]");
    }

    #[test]
    fn permutation() {
        let f = FunctionalFamily::new(space(3), vec![vec![1.0, 2.0, 3.0]]).unwrap();
        let g = f.permute_coordinates(&[2, 0, 1]).unwrap();
        assert_eq!(g.vector(0), &[2.0, 3.0, 1.0]);
        assert!(f.permute_coordinates(&[0, 0, 1]).is_err());
    }
}
