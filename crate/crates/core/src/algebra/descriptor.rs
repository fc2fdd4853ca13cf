use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar field of a Hermitian matrix factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DivisionRing {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
    #[serde(rename = "H")]
    Quaternion,
}

impl DivisionRing {
    /// Real dimension of the ring.
    pub fn dim(self) -> usize {
        match self {
            DivisionRing::Real => 1,
            DivisionRing::Complex => 2,
            DivisionRing::Quaternion => 4,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            DivisionRing::Real => "R",
            DivisionRing::Complex => "C",
            DivisionRing::Quaternion => "H",
        }
    }
}

/// One type I factor: `Herm(n, F)` or the spin factor `R ⊕ R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorDescriptor {
    Hermitian { n: usize, ring: DivisionRing },
    Spin { d: usize },
}

impl FactorDescriptor {
    pub fn hermitian(n: usize, ring: DivisionRing) -> Result<Self> {
        let f = FactorDescriptor::Hermitian { n, ring };
        f.validate()?;
        Ok(f)
    }

    /// Spin factors need `d >= 2`; one-dimensional summands are `Herm(1, R)`.
    pub fn spin(d: usize) -> Result<Self> {
        let f = FactorDescriptor::Spin { d };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FactorDescriptor::Hermitian { n: 0, .. } => Err(Error::InvalidDescriptor(
                "hermitian factor needs n >= 1".into(),
            )),
            FactorDescriptor::Spin { d } if d < 2 => Err(Error::InvalidDescriptor(format!(
                "spin factor needs d >= 2 (got {d}); use herm(1, R) summands instead"
            ))),
            _ => Ok(()),
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            FactorDescriptor::Hermitian { n, .. } => n,
            FactorDescriptor::Spin { .. } => 2,
        }
    }

    /// Real dimension of the factor as a vector space.
    pub fn dim(&self) -> usize {
        match *self {
            FactorDescriptor::Hermitian { n, ring } => n + ring.dim() * n * (n - 1) / 2,
            FactorDescriptor::Spin { d } => d + 1,
        }
    }
}

impl fmt::Display for FactorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorDescriptor::Hermitian { n, ring } => write!(f, "Herm({n},{})", ring.symbol()),
            FactorDescriptor::Spin { d } => write!(f, "Spin({d})"),
        }
    }
}

/// Ordered, explicit list of factors of an atomic algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraDescriptor {
    factors: Vec<FactorDescriptor>,
}

impl AlgebraDescriptor {
    pub fn new(factors: Vec<FactorDescriptor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDescriptor(
                "algebra needs at least one factor".into(),
            ));
        }
        for f in &factors {
            f.validate()?;
        }
        Ok(AlgebraDescriptor { factors })
    }

    /// Single-factor algebra.
    pub fn single(factor: FactorDescriptor) -> Result<Self> {
        AlgebraDescriptor::new(vec![factor])
    }

    /// `n` copies of `Herm(1, R)`, i.e. the associative algebra `R^n`.
    pub fn real_sequence(n: usize) -> Result<Self> {
        AlgebraDescriptor::new(vec![
            FactorDescriptor::Hermitian {
                n: 1,
                ring: DivisionRing::Real
            };
            n
        ])
    }

    pub fn factors(&self) -> &[FactorDescriptor] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank()).sum()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).sum()
    }

    /// Indices of the rank-one factors (the disengaged part).
    pub fn disengaged(&self) -> Vec<usize> {
        (0..self.factors.len())
            .filter(|&i| self.factors[i].rank() == 1)
            .collect()
    }

    /// Indices of factors of rank at least two.
    pub fn engaged(&self) -> Vec<usize> {
        (0..self.factors.len())
            .filter(|&i| self.factors[i].rank() > 1)
            .collect()
    }

    /// Sub-algebra made of the listed factors, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let factors = indices
            .iter()
            .map(|&i| {
                self.factors
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::ShapeMismatch(format!("factor index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        AlgebraDescriptor::new(factors)
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}
