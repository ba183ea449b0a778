//! Cauchy matrices `M = (1/(μᵢ − λⱼ))` on unit-circle nodes.
//!
//! The inverse and determinant come from their closed product forms, which
//! only ever multiply and divide node differences. Node differences are formed
//! from exact angle differences, so every entry keeps full relative accuracy no
//! matter how tightly the nodes cluster. Gaussian elimination is kept alongside
//! as an independent cross-check.

pub mod elimination;
mod matrix;

pub use matrix::{CertMatrix, Provenance};

use crate::error::{Error, Result};
use crate::exactcircle::{unit_diff, Angle, CertComplex, CertScalar};

/// Row nodes `μ₁..μₙ` and column nodes `λ₁..λₙ`, all `2n` points pairwise distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyNodes {
    mu: Vec<Angle>,
    lambda: Vec<Angle>,
}

impl CauchyNodes {
    pub fn new(mu: Vec<Angle>, lambda: Vec<Angle>) -> Result<Self> {
        if mu.len() != lambda.len() {
            return Err(Error::InvalidArgument(format!("{} row nodes but {} column nodes", mu.len(), lambda.len())));
        }
        let all: Vec<(&str, usize, &Angle)> = mu
            .iter()
            .enumerate()
            .map(|(i, a)| ("mu", i + 1, a))
            .chain(lambda.iter().enumerate().map(|(i, a)| ("lambda", i + 1, a)))
            .collect();
        for (x, (na, ia, a)) in all.iter().enumerate() {
            for (nb, ib, b) in &all[x + 1..] {
                if a == b {
                    return Err(Error::NodeCollision(format!("{na}_{ia} = {nb}_{ib} = {a}")));
                }
            }
        }
        Ok(CauchyNodes { mu, lambda })
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn mu(&self) -> &[Angle] {
        &self.mu
    }

    pub fn lambda(&self) -> &[Angle] {
        &self.lambda
    }

    /// The same nodes with rows `i` and `k` swapped.
    pub fn swap_rows(&self, i: usize, k: usize) -> Self {
        let mut mu = self.mu.clone();
        mu.swap(i, k);
        CauchyNodes { mu, lambda: self.lambda.clone() }
    }
}

/// All pairwise node differences at one precision, shared by every product formula.
#[derive(Clone, Debug)]
pub struct CauchySystem {
    n: usize,
    bits: u32,
    mu: Vec<Angle>,
    lambda: Vec<Angle>,
    /// `μᵢ − λⱼ`
    mu_lambda: Vec<Vec<CertComplex>>,
    /// `μᵢ − μₖ`
    mu_mu: Vec<Vec<CertComplex>>,
    /// `λⱼ − λₖ`
    lambda_lambda: Vec<Vec<CertComplex>>,
}

impl CauchySystem {
    pub fn new(nodes: &CauchyNodes, bits: u32) -> Self {
        nodes.mu().iter().zip(nodes.lambda()).fold(CauchySystem::empty(bits), |sys, (m, l)| sys.push(m, l))
    }

    pub fn empty(bits: u32) -> Self {
        CauchySystem {
            n: 0,
            bits,
            mu: Vec::new(),
            lambda: Vec::new(),
            mu_lambda: Vec::new(),
            mu_mu: Vec::new(),
            lambda_lambda: Vec::new(),
        }
    }

    /// The system with one more node pair `(μ, λ)` appended; only the new differences are evaluated.
    ///
    /// Distinctness of the new nodes is the caller's responsibility.
    pub fn push(&self, mu: &Angle, lambda: &Angle) -> CauchySystem {
        let bits = self.bits;
        let n = self.n;
        let mut out = self.clone();
        out.mu.push(mu.clone());
        out.lambda.push(lambda.clone());
        for i in 0..n {
            out.mu_lambda[i].push(unit_diff(&self.mu[i], lambda, bits));
            out.mu_mu[i].push(unit_diff(&self.mu[i], mu, bits));
            out.lambda_lambda[i].push(unit_diff(&self.lambda[i], lambda, bits));
        }
        let mut ml: Vec<CertComplex> = (0..n).map(|j| unit_diff(mu, &self.lambda[j], bits)).collect();
        ml.push(unit_diff(mu, lambda, bits));
        let mut mm: Vec<CertComplex> = (0..n).map(|k| out.mu_mu[k][n].neg()).collect();
        mm.push(CertComplex::zero(bits));
        let mut ll: Vec<CertComplex> = (0..n).map(|k| out.lambda_lambda[k][n].neg()).collect();
        ll.push(CertComplex::zero(bits));
        out.mu_lambda.push(ml);
        out.mu_mu.push(mm);
        out.lambda_lambda.push(ll);
        out.n = n + 1;
        out
    }

    /// The subsystem on the first `r` node pairs.
    pub fn leading(&self, r: usize) -> CauchySystem {
        assert!(r <= self.n);
        let cut = |g: &Vec<Vec<CertComplex>>| g[..r].iter().map(|row| row[..r].to_vec()).collect();
        CauchySystem {
            n: r,
            bits: self.bits,
            mu: self.mu[..r].to_vec(),
            lambda: self.lambda[..r].to_vec(),
            mu_lambda: cut(&self.mu_lambda),
            mu_mu: cut(&self.mu_mu),
            lambda_lambda: cut(&self.lambda_lambda),
        }
    }

    /// `μᵢ − μₖ` (0-based).
    pub fn mu_minus_mu(&self, i: usize, k: usize) -> &CertComplex {
        &self.mu_mu[i][k]
    }

    /// `λⱼ − λₖ` (0-based).
    pub fn lambda_minus_lambda(&self, j: usize, k: usize) -> &CertComplex {
        &self.lambda_lambda[j][k]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `μᵢ − λⱼ` (0-based).
    pub fn mu_minus_lambda(&self, i: usize, j: usize) -> &CertComplex {
        &self.mu_lambda[i][j]
    }

    pub fn matrix(&self) -> CertMatrix {
        let entries = self.mu_lambda.iter().flatten().map(CertComplex::recip).collect();
        CertMatrix::new(self.n, entries, Provenance::Direct)
    }

    pub fn det(&self) -> CertComplex {
        let n = self.n;
        let one = CertComplex::one(self.bits);
        let mut num = one.clone();
        for i in 0..n {
            for j in i + 1..n {
                // (μⱼ − μᵢ)(λᵢ − λⱼ)
                num = num.mul(&self.mu_mu[j][i]).mul(&self.lambda_lambda[i][j]);
            }
        }
        let den = self.mu_lambda.iter().flatten().fold(one, |acc, d| acc.mul(d));
        num.div(&den)
    }

    /// `(M⁻¹)ⱼᵢ = (−1)^{n+1} ∏ₖ(μᵢ−λₖ) ∏ₖ(μₖ−λⱼ) / [(μᵢ−λⱼ) ∏_{k≠i}(μᵢ−μₖ) ∏_{k≠j}(λⱼ−λₖ)]`.
    pub fn inverse(&self) -> CertMatrix {
        let n = self.n;
        let one = CertComplex::one(self.bits);
        let prod = |it: &mut dyn Iterator<Item = &CertComplex>| it.fold(one.clone(), |acc, d| acc.mul(d));
        let row_prod: Vec<_> = (0..n).map(|i| prod(&mut self.mu_lambda[i].iter())).collect();
        let col_prod: Vec<_> = (0..n).map(|j| prod(&mut (0..n).map(|k| &self.mu_lambda[k][j]))).collect();
        let mu_vdm: Vec<_> = (0..n).map(|i| prod(&mut (0..n).filter(|&k| k != i).map(|k| &self.mu_mu[i][k]))).collect();
        let lambda_vdm: Vec<_> =
            (0..n).map(|j| prod(&mut (0..n).filter(|&k| k != j).map(|k| &self.lambda_lambda[j][k]))).collect();
        let flip = n.is_multiple_of(2);
        let mut entries = vec![CertComplex::zero(self.bits); n * n];
        for j in 0..n {
            for i in 0..n {
                let num = row_prod[i].mul(&col_prod[j]);
                let den = self.mu_lambda[i][j].mul(&mu_vdm[i]).mul(&lambda_vdm[j]);
                let v = num.div(&den);
                entries[j * n + i] = if flip { v.neg() } else { v };
            }
        }
        CertMatrix::new(n, entries, Provenance::InverseByFormula)
    }

    /// `c = M⁻¹·𝟙`, i.e. `cᵢ = Σⱼ (M⁻¹)ᵢⱼ`.
    pub fn solve_ones(&self) -> Vec<CertComplex> {
        self.inverse().row_sums()
    }
}

pub fn build(nodes: &CauchyNodes, bits: u32) -> CertMatrix {
    CauchySystem::new(nodes, bits).matrix()
}

pub fn cauchy_det(nodes: &CauchyNodes, bits: u32) -> CertComplex {
    CauchySystem::new(nodes, bits).det()
}

pub fn cauchy_inverse(nodes: &CauchyNodes, bits: u32) -> CertMatrix {
    CauchySystem::new(nodes, bits).inverse()
}

pub fn solve_ones(nodes: &CauchyNodes, bits: u32) -> Vec<CertComplex> {
    CauchySystem::new(nodes, bits).solve_ones()
}

/// Certified upper bound on the spectral norm: `min(√(‖M‖₁‖M‖∞), ‖M‖_F)`.
///
/// The returned interval encloses the value of that expression; its upper end
/// is the usable bound.
pub fn opnorm_upper(m: &CertMatrix) -> CertScalar {
    let n = m.dim();
    let bits = m.bits();
    if n == 0 {
        return CertScalar::zero(bits);
    }
    let abs: Vec<CertScalar> = m.entries().iter().map(CertComplex::abs).collect();
    let max_of = |xs: Vec<CertScalar>| xs.into_iter().reduce(|a, b| a.max(&b)).unwrap_or(CertScalar::zero(bits));
    let col = max_of((0..n).map(|j| CertScalar::sum((0..n).map(|i| &abs[i * n + j]), bits)).collect());
    let row = max_of((0..n).map(|i| CertScalar::sum(abs[i * n..(i + 1) * n].iter(), bits)).collect());
    let frob = m.entries().iter().fold(CertScalar::zero(bits), |acc, z| acc.add(&z.norm_sqr())).sqrt();
    col.mul(&row).sqrt().min(&frob)
}

/// Certified upper bound on the ℓ²→ℓ¹ norm: `√n · opnorm_upper(M)`.
pub fn opnorm_2to1_upper(m: &CertMatrix) -> CertScalar {
    let bits = m.bits();
    CertScalar::from_i64(m.dim() as i64, bits).sqrt().mul(&opnorm_upper(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ang(p: i64, q: u32) -> Angle {
        Angle::normalize(p, q)
    }

    #[test]
    fn rejects_collisions_and_ragged_input() {
        assert!(matches!(CauchyNodes::new(vec![ang(1, 2)], vec![ang(1, 2)]), Err(Error::NodeCollision(_))));
        assert!(matches!(
            CauchyNodes::new(vec![ang(1, 2), ang(1, 2)], vec![ang(0, 0), ang(1, 3)]),
            Err(Error::NodeCollision(_))
        ));
        assert!(CauchyNodes::new(vec![ang(1, 2)], vec![]).is_err());
    }

    #[test]
    fn antipodal_single_entry() {
        let nodes = CauchyNodes::new(vec![ang(1, 1)], vec![Angle::zero()]).unwrap();
        let m = build(&nodes, 128);
        let e = m.get(0, 0);
        assert!(e.re.contains(&CertScalar::from_f64(-0.5, 128)));
        assert!(e.im.contains_zero());
    }

    #[test]
    fn one_by_one_inverse_is_the_difference() {
        let nodes = CauchyNodes::new(vec![ang(1, 6)], vec![Angle::zero()]).unwrap();
        let inv = cauchy_inverse(&nodes, 256);
        let d = unit_diff(&ang(1, 6), &Angle::zero(), 256);
        assert!(inv.get(0, 0).overlaps(&d));
        let c = solve_ones(&nodes, 256);
        assert!(c[0].overlaps(&d));
        let det = cauchy_det(&nodes, 256);
        assert!(det.overlaps(&d.recip()));
    }

    #[test]
    fn row_swap_negates_det() {
        let nodes = CauchyNodes::new(vec![ang(1, 1), ang(1, 2)], vec![Angle::zero(), ang(3, 2)]).unwrap();
        let d = cauchy_det(&nodes, 200);
        let s = cauchy_det(&nodes.swap_rows(0, 1), 200);
        assert!(d.neg().overlaps(&s));
        assert!(!d.contains_zero());
    }

    #[test]
    fn norm_bounds_on_simple_matrices() {
        let bits = 64;
        let id = CertMatrix::identity(4, bits);
        assert!(opnorm_upper(&id).contains(&CertScalar::from_i64(1, bits)));
        assert!(opnorm_2to1_upper(&id).contains(&CertScalar::from_i64(2, bits)));
        let zero = CertMatrix::new(3, vec![CertComplex::zero(bits); 9], Provenance::Direct);
        assert!(opnorm_upper(&zero).is_point() && opnorm_upper(&zero).contains_zero());
        assert!(opnorm_2to1_upper(&zero).contains_zero());
        let ones = CertMatrix::new(2, vec![CertComplex::one(bits); 4], Provenance::Direct);
        assert!(opnorm_upper(&ones).contains(&CertScalar::from_i64(2, bits)));
        let z = CertComplex::new(CertScalar::from_i64(3, bits), CertScalar::from_i64(4, bits));
        let single = CertMatrix::new(1, vec![z], Provenance::Direct);
        assert!(opnorm_2to1_upper(&single).contains(&CertScalar::from_i64(5, bits)));
    }
}
