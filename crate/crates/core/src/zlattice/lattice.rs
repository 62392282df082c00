use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{smith, FgAbelian, IntMatrix, LatticeError};

/// A sublattice of `Z^dim`, stored by its row-style Hermite basis: each basis
/// vector has a positive pivot strictly to the right of the previous one, and
/// entries above a pivot are reduced into `[0, pivot)`. Two lattices are equal
/// iff their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: vec![] }
    }

    pub fn full(dim: usize) -> Self {
        let gens = (0..dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); dim];
                v[i] = BigInt::from(1);
                v
            })
            .collect();
        Self::from_generators(dim, gens).expect("unit vectors have the right length")
    }

    pub fn from_generators(dim: usize, gens: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        if let Some(g) = gens.iter().find(|g| g.len() != dim) {
            return Err(LatticeError::DimensionMismatch {
                expected: format!("vectors of length {dim}"),
                found: format!("length {}", g.len()),
            });
        }
        Ok(Lattice {
            dim,
            basis: hermite_rows(gens, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Basis vectors as the columns of a `dim x rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.basis, self.dim).expect("basis vectors have length dim")
    }

    /// Integer coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
        if v.len() != self.dim {
            return Err(LatticeError::DimensionMismatch {
                expected: format!("vector of length {}", self.dim),
                found: format!("length {}", v.len()),
            });
        }
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let p = pivot_of(b).expect("basis vectors are nonzero");
            let (q, r) = rest[p].div_rem(&b[p]);
            if !r.is_zero() {
                return Ok(None);
            }
            for (x, y) in rest.iter_mut().zip(b) {
                *x -= &q * y;
            }
            coords.push(q);
        }
        Ok(rest.iter().all(Zero::is_zero).then_some(coords))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LatticeError> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool, LatticeError> {
        for b in &other.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice, LatticeError> {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Lattice::from_generators(self.dim, gens)
    }

    /// The abelian group `self / sub`; `sub` must be contained in `self`.
    pub fn quotient_of(&self, sub: &Lattice) -> Result<FgAbelian, LatticeError> {
        let mut cols = Vec::with_capacity(sub.rank());
        for b in &sub.basis {
            match self.coordinates(b)? {
                Some(c) => cols.push(c),
                None => return Err(LatticeError::NotASublattice),
            }
        }
        let coords = IntMatrix::from_columns(&cols, self.rank())?;
        Ok(cokernel(&coords))
    }
}

fn pivot_of(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn hermite_rows(mut rows: Vec<Vec<BigInt>>, dim: usize) -> Vec<Vec<BigInt>> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pending = rows;
    for col in 0..dim {
        // Euclid on column `col` among the pending rows
        loop {
            let mut nz: Vec<usize> = (0..pending.len())
                .filter(|&i| !pending[i][col].is_zero())
                .collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| pending[a][col].abs().cmp(&pending[b][col].abs()));
            let p = nz[0];
            let pv = pending[p][col].clone();
            let prow = pending[p].clone();
            for &i in &nz[1..] {
                let q = pending[i][col].div_floor(&pv);
                for (x, y) in pending[i].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(i) = (0..pending.len()).find(|&i| !pending[i][col].is_zero()) {
            let mut row = pending.swap_remove(i);
            if row[col].is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            for prev in out.iter_mut() {
                let q = prev[col].div_floor(&row[col]);
                if !q.is_zero() {
                    for (x, y) in prev.iter_mut().zip(&row) {
                        *x -= &q * y;
                    }
                }
            }
            out.push(row);
        }
        pending.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    out
}

/// Cokernel `Z^rows / (column span of m)` as an abelian group.
pub fn cokernel(m: &IntMatrix) -> FgAbelian {
    let s = smith(m);
    let nonzero: Vec<BigInt> = s.diag.iter().filter(|d| !d.is_zero()).cloned().collect();
    let free = m.rows() - nonzero.len();
    let torsion = nonzero.into_iter().filter(|d| *d > BigInt::from(1)).collect();
    FgAbelian::new(free, torsion).expect("Smith diagonal is a divisibility chain")
}

/// Column span of `m` as a lattice in `Z^rows`.
pub fn image_lattice(m: &IntMatrix) -> Lattice {
    Lattice::from_generators(m.rows(), m.columns()).expect("columns have length rows")
}

/// Relation lattice of `ambient` inside its free cover `Z^(r+t)`: the span of
/// `t_j e_(r+j)` for each torsion factor.
pub fn relation_lattice(ambient: &FgAbelian) -> Lattice {
    let dim = ambient.cover_dim();
    let gens = ambient
        .torsion()
        .iter()
        .enumerate()
        .map(|(j, t)| {
            let mut v = vec![BigInt::zero(); dim];
            v[ambient.free_rank() + j] = t.clone();
            v
        })
        .collect();
    Lattice::from_generators(dim, gens).expect("cover dimension matches")
}

/// `ambient / sub`, with `sub` given in the free cover of `ambient`.
pub fn quotient(ambient: &FgAbelian, sub: &Lattice) -> Result<FgAbelian, LatticeError> {
    if sub.dim() != ambient.cover_dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: format!("sublattice of Z^{}", ambient.cover_dim()),
            found: format!("sublattice of Z^{}", sub.dim()),
        });
    }
    let stacked = sub.sum(&relation_lattice(ambient))?;
    if stacked.rank() == 0 {
        return Ok(FgAbelian::free(ambient.cover_dim()));
    }
    Ok(cokernel(&stacked.basis_matrix()))
}

pub fn is_finite_index(ambient: &FgAbelian, sub: &Lattice) -> Result<bool, LatticeError> {
    Ok(quotient(ambient, sub)?.is_finite())
}
