use serde::{Deserialize, Serialize};

/// Square boolean matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    data: Vec<bool>,
}

impl BoolMatrix {
    pub fn new(n: usize) -> Self {
        BoolMatrix {
            n,
            data: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BoolMatrix::new(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(BoolMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i * self.n + j] = value;
    }

    pub fn count_true(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.to_vec())
            .collect()
    }

    /// Boolean product `self · other`.
    pub fn product(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.n, other.n);
        let mut out = BoolMatrix::new(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    for j in 0..self.n {
                        if other.get(k, j) {
                            out.set(i, j, true);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        let sq = self.product(self);
        sq.data.iter().zip(&self.data).all(|(&s, &m)| !s || m)
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| !(self.get(i, j) && self.get(j, i))))
    }
}

impl Serialize for BoolMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BoolMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<bool>>::deserialize(deserializer)?;
        BoolMatrix::from_rows(&rows)
            .ok_or_else(|| serde::de::Error::custom("relation matrix is not square"))
    }
}
