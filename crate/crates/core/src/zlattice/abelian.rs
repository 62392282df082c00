use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{cokernel, IntMatrix, LatticeError};

/// A finitely generated abelian group `Z^free_rank + Z/t_1 + ... + Z/t_k`
/// with `1 < t_1 | t_2 | ... | t_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelian {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelian {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, LatticeError> {
        if let Some(t) = torsion.iter().find(|t| **t <= BigInt::one()) {
            return Err(LatticeError::InvalidTorsion(format!(
                "invariant factor {t} must exceed 1"
            )));
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(LatticeError::InvalidTorsion(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FgAbelian { free_rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbelian {
            free_rank: rank,
            torsion: vec![],
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// Normalizes an arbitrary list of cyclic orders (0 meaning infinite) to
    /// invariant-factor form.
    pub fn from_cyclic_orders(extra_free: usize, orders: &[BigInt]) -> Self {
        let diag = IntMatrix::diagonal(orders);
        let g = cokernel(&diag);
        FgAbelian {
            free_rank: g.free_rank + extra_free,
            torsion: g.torsion,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Dimension of the free cover `Z^(r+t)` used for coordinates.
    pub fn cover_dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t))
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn direct_sum(&self, other: &FgAbelian) -> FgAbelian {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }

    /// Reduces the torsion coordinates of a cover vector into `[0, t_j)`.
    pub fn reduce(&self, v: &mut [BigInt]) {
        for (j, t) in self.torsion.iter().enumerate() {
            let x = &mut v[self.free_rank + j];
            *x = x.mod_floor(t);
        }
    }
}

impl fmt::Display for FgAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Default for FgAbelian {
    fn default() -> Self {
        Self::trivial()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn validation() {
        assert!(FgAbelian::new(1, vec![b(2), b(4)]).is_ok());
        assert!(FgAbelian::new(1, vec![b(2), b(3)]).is_err());
        assert!(FgAbelian::new(0, vec![b(1)]).is_err());
    }

    #[test]
    fn normalization_and_display() {
        let g = FgAbelian::from_cyclic_orders(0, &[b(2), b(3), b(0), b(1)]);
        assert_eq!(g, FgAbelian::new(1, vec![b(6)]).unwrap());
        assert_eq!(g.to_string(), "Z + Z/6");
        assert_eq!(FgAbelian::free(2).to_string(), "Z^2");
        assert_eq!(FgAbelian::trivial().to_string(), "1");
        assert_eq!(
            FgAbelian::new(0, vec![b(2)]).unwrap().direct_sum(&FgAbelian::new(0, vec![b(2)]).unwrap()),
            FgAbelian::new(0, vec![b(2), b(2)]).unwrap()
        );
    }

    #[test]
    fn finiteness() {
        assert!(FgAbelian::new(0, vec![b(2)]).unwrap().is_finite());
        assert_eq!(FgAbelian::new(0, vec![b(2), b(6)]).unwrap().order(), Some(b(12)));
        assert_eq!(FgAbelian::free(1).order(), None);
    }
}
