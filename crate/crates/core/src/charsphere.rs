//! Characters `G -> Z^k`, their classes on the character sphere, restriction
//! along subgroup embeddings and vanishing subspheres.
//!
//! A character is stored as a `k x r` matrix acting on the free coordinates
//! of the abelianization, so torsion is annihilated by construction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::grouprep::{char_space, evaluate_word, GroupDesc, GroupError, SubgroupEmbedding, Word};
use crate::zlattice::{fmt_vector, kernel, rank, solve_left, IntMatrix, Lattice, LatticeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("the trivial character has no class")]
    TrivialCharacter,
    #[error("mismatched groups: {0}")]
    MismatchedGroups(String),
    #[error("values {values} are not those of a character of {group}")]
    Inconsistent { values: String, group: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    matrix: IntMatrix,
}

impl Character {
    pub fn new(matrix: IntMatrix) -> Self {
        Character { matrix }
    }

    /// Rank-1 character with the given free coordinates.
    pub fn from_coords(v: &[BigInt]) -> Self {
        Character {
            matrix: IntMatrix::row_vector(v),
        }
    }

    /// The character taking the given values on the generators of `g`
    /// (`k x generators`). Fails if the values do not factor through the
    /// free part of the abelianization.
    pub fn from_generator_values(g: &GroupDesc, values: &IntMatrix) -> Result<Self, CharError> {
        let space = char_space(g)?;
        if values.cols() != space.images.cols() {
            return Err(CharError::MismatchedGroups(format!(
                "{} values given for {} generators",
                values.cols(),
                space.images.cols()
            )));
        }
        let mut rows = Vec::with_capacity(values.rows());
        for i in 0..values.rows() {
            let row = values.row(i);
            let sol = solve_coords(&space.images, row)?.ok_or_else(|| CharError::Inconsistent {
                values: fmt_vector(row),
                group: g.to_string(),
            })?;
            rows.push(sol);
        }
        Ok(Character {
            matrix: IntMatrix::from_rows(rows, space.rank)?,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn is_trivial(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Values on the generators of `g`, one column per generator.
    pub fn generator_values(&self, g: &GroupDesc) -> Result<IntMatrix, CharError> {
        let space = char_space(g)?;
        if space.rank != self.source_rank() {
            return Err(CharError::MismatchedGroups(format!(
                "character on Z^{} applied to a group with character rank {}",
                self.source_rank(),
                space.rank
            )));
        }
        Ok(self.matrix.mul(&space.images)?)
    }

    pub fn evaluate(&self, g: &GroupDesc, w: &Word) -> Result<Vec<BigInt>, CharError> {
        Ok(evaluate_word(&self.generator_values(g)?, w)?)
    }

    /// Class of a rank-1 character, or of the single row spanning a rank-1
    /// image.
    pub fn class(&self) -> Result<CharClass, CharError> {
        if self.is_trivial() {
            return Err(CharError::TrivialCharacter);
        }
        if image_rank(self) != 1 {
            return Err(CharError::MismatchedGroups(
                "only characters with image of rank 1 have a class in the integer model".into(),
            ));
        }
        let row = (0..self.matrix.rows())
            .map(|i| self.matrix.row(i))
            .find(|r| r.iter().any(|x| !x.is_zero()))
            .expect("nontrivial");
        Ok(CharClass::from_vector(row.to_vec())?)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.matrix.rows() == 1 {
            write!(f, "{}", fmt_vector(self.matrix.row(0)))
        } else {
            write!(f, "{}", self.matrix)
        }
    }
}

/// A point of the character sphere: a primitive integer vector in the free
/// coordinates. Positive multiples normalize to the same class, `-c` is a
/// different class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharClass {
    coords: Vec<BigInt>,
}

impl CharClass {
    pub fn from_vector(v: Vec<BigInt>) -> Result<Self, CharError> {
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return Err(CharError::TrivialCharacter);
        }
        Ok(CharClass {
            coords: v.into_iter().map(|x| x / &g).collect(),
        })
    }

    pub fn from_i64(v: &[i64]) -> Result<Self, CharError> {
        Self::from_vector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn neg(&self) -> CharClass {
        CharClass {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn character(&self) -> Character {
        Character::from_coords(&self.coords)
    }

    /// Sign of the leading nonzero coordinate.
    pub fn leading_sign(&self) -> i8 {
        match self.coords.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => -1,
            _ => 1,
        }
    }
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", fmt_vector(&self.coords))
    }
}

/// Every nontrivial integer character of rank 1 has image `Z`; higher
/// target ranks are discrete exactly when the image still has rank 1.
pub fn is_discrete(c: &Character) -> Result<bool, CharError> {
    if c.is_trivial() {
        return Err(CharError::TrivialCharacter);
    }
    Ok(image_rank(c) == 1)
}

pub fn image_rank(c: &Character) -> usize {
    rank(c.matrix())
}

/// Restriction matrix of an embedding: column-vector character coordinates
/// of the ambient group go to those of the subgroup (`r_sub x r_ambient`).
pub fn restriction_matrix(ambient: &GroupDesc, emb: &SubgroupEmbedding) -> Result<IntMatrix, CharError> {
    emb.check_against(ambient)?;
    let amb = char_space(ambient)?;
    let sub = char_space(&emb.sub)?;
    // generator value matrix of the ambient unit characters: amb.images
    let mut values = IntMatrix::zeros(amb.rank, emb.words.len());
    for (j, w) in emb.words.iter().enumerate() {
        let v = evaluate_word(&amb.images, w)?;
        for (i, x) in v.into_iter().enumerate() {
            values.set(i, j, x);
        }
    }
    let mut rows = Vec::with_capacity(amb.rank);
    for i in 0..amb.rank {
        let row = values.row(i);
        let sol = solve_coords(&sub.images, row)?.ok_or_else(|| CharError::Inconsistent {
            values: fmt_vector(row),
            group: emb.sub.to_string(),
        })?;
        rows.push(sol);
    }
    // rows are images of unit characters; transpose to act on column vectors
    Ok(IntMatrix::from_rows(rows, sub.rank)?.transpose())
}

/// Composes each row of `m` (a `k x r_ambient` map on free coordinates) with
/// the embedding.
pub fn restrict_matrix(m: &IntMatrix, ambient: &GroupDesc, emb: &SubgroupEmbedding) -> Result<IntMatrix, CharError> {
    let r = restriction_matrix(ambient, emb)?;
    if m.cols() != r.cols() {
        return Err(CharError::MismatchedGroups(format!(
            "map on Z^{} restricted from a group with character rank {}",
            m.cols(),
            r.cols()
        )));
    }
    Ok(m.mul(&r.transpose())?)
}

pub fn restrict(c: &Character, ambient: &GroupDesc, emb: &SubgroupEmbedding) -> Result<Character, CharError> {
    Ok(Character::new(restrict_matrix(c.matrix(), ambient, emb)?))
}

/// Solves `x * m = v` over the integers. Generator images of
/// every supported descriptor contain a basis of the free part, so integer
/// solvability is the right consistency test.
fn solve_coords(m: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
    if m.rows() == 0 {
        return Ok(v.iter().all(Zero::is_zero).then(Vec::new));
    }
    solve_left(m, v)
}

/// `S(G,H)`: the classes of `G` vanishing on the subgroup generated by
/// `words`, as the rational subspace spanned by the columns of `basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsphere {
    pub ambient_rank: usize,
    pub basis: IntMatrix,
}

impl Subsphere {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.ambient_rank
    }

    pub fn contains(&self, c: &CharClass) -> bool {
        let mut stacked = self.basis.columns();
        stacked.push(c.coords().to_vec());
        let m = IntMatrix::from_columns(&stacked, self.ambient_rank).expect("same length");
        rank(&m) == self.dim()
    }

    /// The lattice of integer characters in the subsphere's span.
    pub fn lattice(&self) -> Lattice {
        Lattice::from_generators(self.ambient_rank, self.basis.columns()).expect("same length")
    }
}

pub fn vanishing_subsphere(g: &GroupDesc, words: &[Word]) -> Result<Subsphere, CharError> {
    let space = char_space(g)?;
    let mut w = IntMatrix::zeros(space.rank, words.len());
    for (j, word) in words.iter().enumerate() {
        for (i, x) in evaluate_word(&space.images, word)?.into_iter().enumerate() {
            w.set(i, j, x);
        }
    }
    Ok(subsphere_annihilating(&w))
}

/// Characters (column vectors) `x` with `x^T w = 0`.
pub fn subsphere_annihilating(w: &IntMatrix) -> Subsphere {
    let r = w.rows();
    let basis = if w.cols() == 0 {
        IntMatrix::identity(r)
    } else {
        saturated_basis(&kernel(&w.transpose()), r)
    };
    Subsphere { ambient_rank: r, basis }
}

/// Hermite basis of the column span, as columns.
pub(crate) fn saturated_basis(m: &IntMatrix, dim: usize) -> IntMatrix {
    let l = Lattice::from_generators(dim, m.columns()).expect("same length");
    if l.rank() == 0 {
        IntMatrix::zeros(dim, 0)
    } else {
        l.basis_matrix()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::LabeledGraph;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn triangle() -> GroupDesc {
        GroupDesc::Artin(
            LabeledGraph::new(
                vec!["a".into(), "b".into(), "c".into()],
                vec![
                    ("a".into(), "b".into(), 4),
                    ("b".into(), "c".into(), 3),
                    ("c".into(), "a".into(), 3),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn discreteness() {
        assert!(is_discrete(&Character::from_coords(&[b(1), b(1)])).unwrap());
        assert!(!is_discrete(&Character::new(IntMatrix::identity(2))).unwrap());
        assert!(is_discrete(&Character::from_coords(&[b(2), b(4)])).unwrap());
        assert_eq!(
            is_discrete(&Character::from_coords(&[b(0), b(0)])),
            Err(CharError::TrivialCharacter)
        );
        assert_eq!(image_rank(&Character::new(IntMatrix::zeros(1, 2))), 0);
        assert_eq!(image_rank(&Character::new(IntMatrix::identity(2))), 2);
    }

    #[test]
    fn class_normalization() {
        let c = CharClass::from_i64(&[2, -2]).unwrap();
        assert_eq!(c.coords(), &[b(1), b(-1)]);
        assert_eq!(CharClass::from_i64(&[-6, 0]).unwrap().coords(), &[b(-1), b(0)]);
        assert_ne!(c, c.neg());
        assert!(CharClass::from_i64(&[0, 0]).is_err());
    }

    #[test]
    fn triangle_restriction_to_fix() {
        let h = triangle();
        let f = GroupDesc::free_named(vec!["c".into(), "D_ab".into()]).unwrap();
        let emb = SubgroupEmbedding::new(f.clone(), vec![h.parse_word("c").unwrap(), h.parse_word("abab").unwrap()]).unwrap();
        let chi = Character::from_generator_values(&h, &IntMatrix::from_i64(&[&[1, 1, 1]])).unwrap();
        let r = restrict(&chi, &h, &emb).unwrap();
        assert_eq!(r.matrix(), &IntMatrix::from_i64(&[&[1, 4]]));
        assert!(Character::from_generator_values(&h, &IntMatrix::from_i64(&[&[1, 2, 1]])).is_err());
    }

    #[test]
    fn identity_restriction() {
        let g = GroupDesc::free(3);
        let chi = Character::from_coords(&[b(1), b(-2), b(5)]);
        let r = restrict(&chi, &g, &SubgroupEmbedding::identity(&g)).unwrap();
        assert_eq!(r, chi);
    }

    #[test]
    fn vanishing_subspheres() {
        let f2 = GroupDesc::free(2);
        let all = vanishing_subsphere(&f2, &[Word::generator(0), Word::generator(1)]).unwrap();
        assert!(all.is_empty());
        let none = vanishing_subsphere(&f2, &[]).unwrap();
        assert!(none.is_whole());
        let line = vanishing_subsphere(&f2, &[Word::generator(0)]).unwrap();
        assert_eq!(line.dim(), 1);
        assert!(line.contains(&CharClass::from_i64(&[0, 1]).unwrap()));
        assert!(line.contains(&CharClass::from_i64(&[0, -3]).unwrap()));
        assert!(!line.contains(&CharClass::from_i64(&[1, 1]).unwrap()));
    }
}
