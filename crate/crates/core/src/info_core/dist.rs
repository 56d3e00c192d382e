use std::fmt;

use serde::Serialize;

use crate::scalar::{clamp_nonneg, Real};
use crate::{Error, Result};

/// An information value in bits (base-2 logarithms).
///
/// Entropies and mutual informations are finite and nonnegative; KL
/// divergences may additionally be `+inf` (mass on an atom the reference
/// measure misses).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct Bits<R>(R);

impl<R: Real> Bits<R> {
    /// Wraps a computed value, absorbing tiny negative rounding noise.
    pub fn new(value: R) -> Self {
        if value.is_infinite() && value > R::zero() {
            return Self::infinity();
        }
        Bits(clamp_nonneg(value))
    }

    pub fn infinity() -> Self {
        Bits(R::infinity())
    }

    pub fn zero() -> Self {
        Bits(R::zero())
    }

    pub fn value(self) -> R {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl<R: Real> fmt::Display for Bits<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// A probability vector over the implicit atom universe `0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution<R: Real> {
    probs: Vec<R>,
}

impl<R: Real> FiniteDistribution<R> {
    /// Validates nonnegativity and normalization (within [`Real::mass_tol`]).
    pub fn new(probs: Vec<R>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &p) in probs.iter().enumerate() {
            if p < R::zero() || p.is_nan() {
                return Err(Error::NegativeProb {
                    index,
                    value: p.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let sum: R = probs.iter().copied().sum();
        if (sum - R::one()).abs() > R::mass_tol() {
            return Err(Error::NotNormalized {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(FiniteDistribution { probs })
    }

    /// Skips validation; for internally computed marginals and reductions
    /// whose normalization is structural.
    pub fn new_unchecked(probs: Vec<R>) -> Self {
        FiniteDistribution { probs }
    }

    /// Normalizes arbitrary nonnegative weights.
    pub fn normalized(weights: Vec<R>) -> Result<Self> {
        let sum: R = weights.iter().copied().sum();
        if sum <= R::zero() {
            return Err(Error::NotNormalized {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(len: usize) -> Self {
        let p = R::one() / R::from_usize(len).unwrap();
        FiniteDistribution {
            probs: vec![p; len],
        }
    }

    pub fn point_mass(len: usize, atom: usize) -> Self {
        let mut probs = vec![R::zero(); len];
        probs[atom] = R::one();
        FiniteDistribution { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, atom: usize) -> R {
        self.probs[atom]
    }

    pub fn probs(&self) -> &[R] {
        &self.probs
    }

    /// Total mass of an event given by atom indices (duplicates ignored).
    pub fn mass_of(&self, event: &[usize]) -> R {
        let mut idx: Vec<usize> = event.to_vec();
        idx.sort_unstable();
        idx.dedup();
        idx.into_iter().map(|i| self.probs[i]).sum()
    }

    /// Support as atom indices with strictly positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.probs[i] > R::zero()).collect()
    }

    pub fn same_atoms(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::AtomMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }
}

/// A joint distribution on `rows x cols`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution<R: Real> {
    rows: usize,
    cols: usize,
    mass: Vec<R>,
}

impl<R: Real> JointDistribution<R> {
    /// Validates nonnegativity and total mass 1 (within [`Real::mass_tol`]).
    pub fn new(rows: usize, cols: usize, mass: Vec<R>) -> Result<Self> {
        if rows == 0 || cols == 0 || mass.len() != rows * cols {
            return Err(Error::Invalid(format!(
                "joint shape {rows}x{cols} does not match {} entries",
                mass.len()
            )));
        }
        for (index, &p) in mass.iter().enumerate() {
            if p < R::zero() || p.is_nan() {
                return Err(Error::NegativeProb {
                    index,
                    value: p.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let sum: R = mass.iter().copied().sum();
        if (sum - R::one()).abs() > R::mass_tol() {
            return Err(Error::NotNormalized {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(JointDistribution { rows, cols, mass })
    }

    pub fn new_unchecked(rows: usize, cols: usize, mass: Vec<R>) -> Self {
        debug_assert_eq!(mass.len(), rows * cols);
        JointDistribution { rows, cols, mass }
    }

    /// Mixes row kernels by row weights: `p(i, j) = w_i * rows[i](j)`.
    pub fn from_kernel(weights: &FiniteDistribution<R>, kernels: &[FiniteDistribution<R>]) -> Result<Self> {
        if weights.len() != kernels.len() {
            return Err(Error::AtomMismatch {
                left: weights.len(),
                right: kernels.len(),
            });
        }
        let cols = kernels.first().map(|k| k.len()).ok_or(Error::EmptyDistribution)?;
        for k in kernels {
            if k.len() != cols {
                return Err(Error::AtomMismatch {
                    left: cols,
                    right: k.len(),
                });
            }
        }
        let mut mass = Vec::with_capacity(weights.len() * cols);
        for (i, kernel) in kernels.iter().enumerate() {
            let w = weights.prob(i);
            mass.extend(kernel.probs().iter().map(|&p| w * p));
        }
        Ok(JointDistribution {
            rows: weights.len(),
            cols,
            mass,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> R {
        self.mass[row * self.cols + col]
    }

    pub fn entries(&self) -> &[R] {
        &self.mass
    }

    pub fn row_marginal(&self) -> FiniteDistribution<R> {
        let mut probs = vec![R::zero(); self.rows];
        for r in 0..self.rows {
            probs[r] = self.mass[r * self.cols..(r + 1) * self.cols]
                .iter()
                .copied()
                .sum();
        }
        FiniteDistribution::new_unchecked(probs)
    }

    pub fn col_marginal(&self) -> FiniteDistribution<R> {
        let mut probs = vec![R::zero(); self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                probs[c] = probs[c] + self.mass[r * self.cols + c];
            }
        }
        FiniteDistribution::new_unchecked(probs)
    }

    /// The independent coupling of this joint's marginals.
    pub fn product_of_marginals(&self) -> JointDistribution<R> {
        let rm = self.row_marginal();
        let cm = self.col_marginal();
        let mut mass = Vec::with_capacity(self.rows * self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                mass.push(rm.prob(r) * cm.prob(c));
            }
        }
        JointDistribution::new_unchecked(self.rows, self.cols, mass)
    }

    /// Pushes the column variable through a deterministic map `col -> z`.
    pub fn map_cols(&self, map: &[usize], z_count: usize) -> Result<JointDistribution<R>> {
        if map.len() != self.cols {
            return Err(Error::AtomMismatch {
                left: map.len(),
                right: self.cols,
            });
        }
        if let Some(&bad) = map.iter().find(|&&z| z >= z_count) {
            return Err(Error::Invalid(format!("map value {bad} >= z_count {z_count}")));
        }
        let mut mass = vec![R::zero(); self.rows * z_count];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let z = map[c];
                mass[r * z_count + z] = mass[r * z_count + z] + self.mass[r * self.cols + c];
            }
        }
        Ok(JointDistribution::new_unchecked(self.rows, z_count, mass))
    }

    /// Flattens to a distribution over cell indices `row * cols + col`.
    pub fn flatten(&self) -> FiniteDistribution<R> {
        FiniteDistribution::new_unchecked(self.mass.clone())
    }
}
