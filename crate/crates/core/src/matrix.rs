//! General `n x n` positive reciprocal matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triad::Triad;

/// Allowed deviation `|a_ij * a_ji - 1|` for externally supplied matrices.
pub const RECIPROCITY_TOL: f64 = 1e-6;

/// How to treat the lower triangle of an input matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Completion {
    /// Check that the lower triangle holds the reciprocals of the upper one.
    #[default]
    Validate,
    /// Ignore the lower triangle and the diagonal; rebuild them from the upper triangle.
    CompleteLower,
}

/// False for NaN.
fn within_tolerance(deviation: f64) -> bool {
    deviation.abs() <= RECIPROCITY_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReciprocalMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ReciprocalMatrix {
    /// Build from rows. Cells may be `None` only where `CompleteLower` ignores them.
    pub fn from_rows(rows: &[Vec<Option<f64>>], completion: Completion) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::OrderTooSmall(n));
        }
        for (row, cells) in rows.iter().enumerate() {
            if cells.len() != n {
                return Err(Error::NotSquare {
                    row: row + 1,
                    len: cells.len(),
                    n,
                });
            }
        }
        let mut entries = vec![1.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let field = format!("a{}{}", i + 1, j + 1);
                let v = rows[i][j].ok_or_else(|| Error::NonPositive {
                    field: field.clone(),
                    value: f64::NAN,
                })?;
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::NonPositive { field, value: v });
                }
                entries[i * n + j] = v;
                entries[j * n + i] = 1.0 / v;
            }
        }
        if completion == Completion::Validate {
            for i in 0..n {
                let d = rows[i][i].unwrap_or(f64::NAN);
                if !within_tolerance(d - 1.0) {
                    return Err(Error::Diagonal { i: i + 1, value: d });
                }
                entries[i * n + i] = d;
                for j in i + 1..n {
                    let aij = entries[i * n + j];
                    let aji = rows[j][i].unwrap_or(f64::NAN);
                    if !(aji.is_finite() && aji > 0.0) {
                        return Err(Error::NonPositive {
                            field: format!("a{}{}", j + 1, i + 1),
                            value: aji,
                        });
                    }
                    if !within_tolerance(aij * aji - 1.0) {
                        return Err(Error::NotReciprocal {
                            i: i + 1,
                            j: j + 1,
                            aij,
                            aji,
                        });
                    }
                    entries[j * n + i] = aji;
                }
            }
        }
        Ok(ReciprocalMatrix { n, entries })
    }

    pub fn from_dense(rows: &[Vec<f64>], completion: Completion) -> Result<Self> {
        let cells: Vec<Vec<Option<f64>>> = rows.iter().map(|r| r.iter().copied().map(Some).collect()).collect();
        Self::from_rows(&cells, completion)
    }

    pub fn from_triad(t: &Triad) -> Self {
        let rows = t.to_rows();
        ReciprocalMatrix {
            n: 3,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Upper entries of a 3x3 matrix.
    pub fn to_triad(&self) -> Result<Triad> {
        if self.n != 3 {
            return Err(Error::NotATriad(self.n));
        }
        Triad::new(self.get(0, 1), self.get(0, 2), self.get(1, 2))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        ReciprocalMatrix { n, entries }
    }

    /// `P A P^T`: alternative `i` moves to position `perm(i)`.
    pub fn apply_permutation(&self, perm: &Permutation) -> Result<Self> {
        let n = self.n;
        if perm.len() != n {
            return Err(Error::NotAPermutation {
                n,
                images: perm.one_based(),
            });
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[perm.image(i) * n + perm.image(j)] = self.entries[i * n + j];
            }
        }
        Ok(ReciprocalMatrix { n, entries })
    }

    /// `a_ik = a_ij a_jk` for all triples, up to a relative band.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let ratio = self.get(i, k) / (self.get(i, j) * self.get(j, k));
                    (ratio - 1.0).abs() <= tol
                })
            })
        })
    }
}

/// Bijection on `{0, .., n-1}`; displayed and serialized 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// `images[i]` is the new position of alternative `i` (0-based).
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            if p >= n || seen[p] {
                return Err(Error::NotAPermutation {
                    n,
                    images: images.iter().map(|p| p + 1).collect(),
                });
            }
            seen[p] = true;
        }
        Ok(Permutation(images))
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::NotAPermutation {
                n: images.len(),
                images: images.to_vec(),
            });
        }
        Self::new(images.iter().map(|p| p - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for p in 0..used.len() {
                if !used[p] {
                    used[p] = true;
                    prefix.push(p);
                    extend(prefix, used, out);
                    prefix.pop();
                    used[p] = false;
                }
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|p| p + 1).collect()
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&images).map_err(serde::de::Error::custom)
    }
}
