use serde::{Deserialize, Serialize};

use crate::exactcircle::{CertComplex, CertScalar};

/// How a matrix was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Direct,
    InverseByFormula,
    InverseByElimination,
}

/// Dense square matrix of certified complex entries, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertMatrix {
    n: usize,
    provenance: Provenance,
    entries: Vec<CertComplex>,
}

impl CertMatrix {
    pub fn new(n: usize, entries: Vec<CertComplex>, provenance: Provenance) -> Self {
        assert_eq!(entries.len(), n * n, "matrix of dimension {n} needs {} entries", n * n);
        CertMatrix { n, provenance, entries }
    }

    pub fn identity(n: usize, bits: u32) -> Self {
        let entries =
            (0..n * n).map(|k| if k / n == k % n { CertComplex::one(bits) } else { CertComplex::zero(bits) }).collect();
        CertMatrix::new(n, entries, Provenance::Direct)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn entries(&self) -> &[CertComplex] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &CertComplex {
        &self.entries[i * self.n + j]
    }

    pub fn bits(&self) -> u32 {
        self.entries.iter().map(CertComplex::bits).max().unwrap_or(64)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(CertComplex::is_finite)
    }

    pub fn row(&self, i: usize) -> &[CertComplex] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> CertMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect();
        CertMatrix::new(n, entries, self.provenance)
    }

    pub fn mul(&self, other: &CertMatrix) -> CertMatrix {
        let n = self.n;
        let bits = self.bits().max(other.bits());
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (0..n).fold(CertComplex::zero(bits), |acc, l| acc.add(&self.get(i, l).mul(other.get(l, j))))
            })
            .collect();
        CertMatrix::new(n, entries, Provenance::Direct)
    }

    pub fn mul_vec(&self, v: &[CertComplex]) -> Vec<CertComplex> {
        let bits = self.bits();
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).fold(CertComplex::zero(bits), |acc, (m, x)| acc.add(&m.mul(x))))
            .collect()
    }

    pub fn row_sums(&self) -> Vec<CertComplex> {
        let bits = self.bits();
        (0..self.n).map(|i| CertComplex::sum(self.row(i), bits)).collect()
    }

    /// Multiply column `j` by `s[j]`.
    pub fn scale_columns(&self, s: &[CertScalar]) -> CertMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entries[k].scale(&s[k % n])).collect();
        CertMatrix::new(n, entries, self.provenance)
    }

    /// True when every entry encloses the corresponding identity entry.
    pub fn contains_identity(&self) -> bool {
        let n = self.n;
        let bits = self.bits();
        let one = CertScalar::from_i64(1, bits);
        (0..n * n).all(|k| {
            let e = &self.entries[k];
            let diag_ok = if k / n == k % n { e.re.contains(&one) } else { e.re.contains_zero() };
            diag_ok && e.im.contains_zero()
        })
    }

    /// Entrywise interval overlap.
    pub fn overlaps(&self, other: &CertMatrix) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a.overlaps(b))
    }
}
