use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{GroupError, LabeledGraph, Word};
use crate::charsphere::CharClass;
use crate::zlattice::{smith, FgAbelian, IntMatrix};

/// Highest `n` for which a table-backed group is recorded as type `F_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FinitenessBound {
    Upto(u32),
    Infinity,
}

impl FinitenessBound {
    pub fn covers(&self, n: u32) -> bool {
        match self {
            FinitenessBound::Infinity => true,
            FinitenessBound::Upto(k) => n <= *k,
        }
    }
}

/// Center of a group: its isomorphism type and generating words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CenterInfo {
    pub group: FgAbelian,
    pub words: Vec<Word>,
}

/// A subgroup `sub` given by one word in the ambient generators per
/// generator of `sub`. The ambient group is whatever descriptor the
/// embedding is attached to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupEmbedding {
    pub sub: GroupDesc,
    pub words: Vec<Word>,
}

impl SubgroupEmbedding {
    pub fn new(sub: GroupDesc, words: Vec<Word>) -> Result<Self, GroupError> {
        let need = sub.generator_count();
        if words.len() != need {
            return Err(GroupError::InvalidDescriptor(format!(
                "embedding has {} words but the subgroup has {need} generators",
                words.len()
            )));
        }
        Ok(SubgroupEmbedding { sub, words })
    }

    pub fn identity(g: &GroupDesc) -> Self {
        SubgroupEmbedding {
            sub: g.clone(),
            words: (0..g.generator_count()).map(Word::generator).collect(),
        }
    }

    pub fn check_against(&self, ambient: &GroupDesc) -> Result<(), GroupError> {
        let n = ambient.generator_count();
        self.words.iter().try_for_each(|w| w.check_range(n))
    }
}

/// Group whose invariants are imported from the literature rather than
/// derived. `provenance` names the source.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableGroup {
    pub name: String,
    pub generators: Vec<String>,
    pub abelianization: FgAbelian,
    /// `cover_dim x generators`, column j is the image of generator j.
    pub generator_images: IntMatrix,
    pub sigma1_complement: Option<Vec<CharClass>>,
    pub provenance: String,
    pub center: Option<CenterInfo>,
    pub finite_index_subgroup: Option<SubgroupEmbedding>,
    pub finiteness: Option<FinitenessBound>,
}

impl TableGroup {
    pub fn validate(&self) -> Result<(), GroupError> {
        if self.provenance.trim().is_empty() {
            return Err(GroupError::InvalidDescriptor(format!(
                "table group {} needs a provenance note",
                self.name
            )));
        }
        let imgs = &self.generator_images;
        if imgs.rows() != self.abelianization.cover_dim() || imgs.cols() != self.generators.len() {
            return Err(GroupError::InvalidDescriptor(format!(
                "generator images of {} must be {}x{}, got {}x{}",
                self.name,
                self.abelianization.cover_dim(),
                self.generators.len(),
                imgs.rows(),
                imgs.cols()
            )));
        }
        let span = crate::zlattice::image_lattice(imgs);
        if !crate::zlattice::quotient(&self.abelianization, &span)?.is_trivial() {
            return Err(GroupError::InvalidDescriptor(format!(
                "generator images of {} do not generate {}",
                self.name, self.abelianization
            )));
        }
        if let Some(classes) = &self.sigma1_complement {
            let r = self.abelianization.free_rank();
            if let Some(c) = classes.iter().find(|c| c.dim() != r) {
                return Err(GroupError::InvalidDescriptor(format!(
                    "complement class {c} does not live on a rank {r} character space"
                )));
            }
        }
        if let Some(c) = &self.center {
            c.words.iter().try_for_each(|w| w.check_range(self.generators.len()))?;
        }
        if let Some(e) = &self.finite_index_subgroup {
            e.words.iter().try_for_each(|w| w.check_range(self.generators.len()))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDesc {
    Free { rank: usize, names: Vec<String> },
    Abelian(FgAbelian),
    Artin(LabeledGraph),
    DirectProduct(Box<GroupDesc>, Box<GroupDesc>),
    /// A group containing `inner` with finite index. Characters and words
    /// refer to the generators of `inner`.
    FiniteIndexOver { inner: Box<GroupDesc>, index_note: String },
    TableBacked(Box<TableGroup>),
}

impl GroupDesc {
    pub fn free(rank: usize) -> Self {
        let names = (0..rank)
            .map(|i| {
                if rank <= 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{}", i + 1)
                }
            })
            .collect();
        GroupDesc::Free { rank, names }
    }

    pub fn free_named(names: Vec<String>) -> Result<Self, GroupError> {
        check_unique(&names)?;
        Ok(GroupDesc::Free {
            rank: names.len(),
            names,
        })
    }

    pub fn product(left: GroupDesc, right: GroupDesc) -> Self {
        GroupDesc::DirectProduct(Box::new(left), Box::new(right))
    }

    pub fn finite_index_over(inner: GroupDesc, note: impl Into<String>) -> Self {
        GroupDesc::FiniteIndexOver {
            inner: Box::new(inner),
            index_note: note.into(),
        }
    }

    pub fn table(t: TableGroup) -> Result<Self, GroupError> {
        check_unique(&t.generators)?;
        t.validate()?;
        Ok(GroupDesc::TableBacked(Box::new(t)))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GroupDesc::Free { .. } => "free",
            GroupDesc::Abelian(_) => "abelian",
            GroupDesc::Artin(_) => "artin",
            GroupDesc::DirectProduct(..) => "directProduct",
            GroupDesc::FiniteIndexOver { .. } => "finiteIndexOver",
            GroupDesc::TableBacked(_) => "tableBacked",
        }
    }

    pub fn generators(&self) -> Vec<String> {
        match self {
            GroupDesc::Free { names, .. } => names.clone(),
            GroupDesc::Abelian(a) => {
                let mut v: Vec<String> = (1..=a.free_rank()).map(|i| format!("e{i}")).collect();
                v.extend((1..=a.torsion().len()).map(|i| format!("t{i}")));
                v
            }
            GroupDesc::Artin(g) => g.vertices().to_vec(),
            GroupDesc::DirectProduct(l, r) => {
                let (ln, rn) = (l.generators(), r.generators());
                let left: HashSet<&String> = ln.iter().collect();
                if rn.iter().any(|n| left.contains(n)) {
                    ln.iter()
                        .map(|n| format!("L.{n}"))
                        .chain(rn.iter().map(|n| format!("R.{n}")))
                        .collect()
                } else {
                    ln.into_iter().chain(rn).collect()
                }
            }
            GroupDesc::FiniteIndexOver { inner, .. } => inner.generators(),
            GroupDesc::TableBacked(t) => t.generators.clone(),
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            GroupDesc::Free { rank, .. } => *rank,
            GroupDesc::Abelian(a) => a.cover_dim(),
            GroupDesc::Artin(g) => g.vertex_count(),
            GroupDesc::DirectProduct(l, r) => l.generator_count() + r.generator_count(),
            GroupDesc::FiniteIndexOver { inner, .. } => inner.generator_count(),
            GroupDesc::TableBacked(t) => t.generators.len(),
        }
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, GroupError> {
        Word::parse(s, &self.generators())
    }

    pub fn show_word(&self, w: &Word) -> String {
        w.display(&self.generators()).to_string()
    }
}

fn check_unique(names: &[String]) -> Result<(), GroupError> {
    let set: HashSet<&String> = names.iter().collect();
    if set.len() != names.len() {
        return Err(GroupError::InvalidDescriptor("generator names must be unique".into()));
    }
    Ok(())
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDesc::Free { rank, .. } => write!(f, "F{rank}"),
            GroupDesc::Abelian(a) => write!(f, "{a}"),
            GroupDesc::Artin(g) => {
                let edges: Vec<String> = g
                    .edges()
                    .iter()
                    .map(|e| format!("{}{}:{}", g.vertices()[e.u], g.vertices()[e.v], e.label))
                    .collect();
                write!(f, "Artin<{}; {}>", g.vertices().join(","), edges.join(","))
            }
            GroupDesc::DirectProduct(l, r) => write!(f, "({l}) x ({r})"),
            GroupDesc::FiniteIndexOver { inner, .. } => write!(f, "finite extension of {inner}"),
            GroupDesc::TableBacked(t) => write!(f, "{}", t.name),
        }
    }
}

/// The abelianization together with the image of each generator in the
/// free cover `Z^(r+t)` (torsion coordinates reduced).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub group: FgAbelian,
    pub images: IntMatrix,
}

impl Abelianization {
    /// Rows of `images` for the free coordinates only.
    pub fn free_images(&self) -> IntMatrix {
        self.images.select_rows(0..self.group.free_rank())
    }
}

pub fn abelianize(g: &GroupDesc) -> Result<Abelianization, GroupError> {
    match g {
        GroupDesc::Free { rank, .. } => Ok(Abelianization {
            group: FgAbelian::free(*rank),
            images: IntMatrix::identity(*rank),
        }),
        GroupDesc::Abelian(a) => Ok(Abelianization {
            group: a.clone(),
            images: IntMatrix::identity(a.cover_dim()),
        }),
        GroupDesc::Artin(graph) => {
            let comps = graph.odd_components();
            let map = graph.odd_component_map();
            let mut images = IntMatrix::zeros(comps.len(), graph.vertex_count());
            for (v, &c) in map.iter().enumerate() {
                images.set(c, v, BigInt::one());
            }
            Ok(Abelianization {
                group: FgAbelian::free(comps.len()),
                images,
            })
        }
        GroupDesc::DirectProduct(l, r) => {
            let (a, b) = (abelianize(l)?, abelianize(r)?);
            Ok(direct_sum(&a, &b))
        }
        GroupDesc::FiniteIndexOver { .. } => Err(GroupError::NotComputable(
            "the abelianization of a finite extension is not determined by the subgroup".into(),
        )),
        GroupDesc::TableBacked(t) => {
            let mut images = t.generator_images.clone();
            let a = &t.abelianization;
            for j in 0..images.cols() {
                for (k, tk) in a.torsion().iter().enumerate() {
                    let i = a.free_rank() + k;
                    let x = images.get(i, j).mod_floor(tk);
                    images.set(i, j, x);
                }
            }
            Ok(Abelianization {
                group: a.clone(),
                images,
            })
        }
    }
}

fn direct_sum(a: &Abelianization, b: &Abelianization) -> Abelianization {
    let (ra, rb) = (a.group.free_rank(), b.group.free_rank());
    let (ga, gb) = (a.images.cols(), b.images.cols());
    let orders: Vec<BigInt> = a.group.torsion().iter().chain(b.group.torsion()).cloned().collect();
    // torsion part in the naive coordinates Z/t_a + Z/t_b, one row per factor
    let naive_rows = orders.len();
    let mut naive = IntMatrix::zeros(naive_rows, ga + gb);
    for k in 0..a.group.torsion().len() {
        for j in 0..ga {
            naive.set(k, j, a.images.get(ra + k, j).clone());
        }
    }
    let ta = a.group.torsion().len();
    for k in 0..b.group.torsion().len() {
        for j in 0..gb {
            naive.set(ta + k, ga + j, b.images.get(rb + k, j).clone());
        }
    }
    // L diag(orders) R = diag(d): v -> L v carries Z^k/diag(orders) onto Z^k/diag(d)
    let s = smith(&IntMatrix::diagonal(&orders));
    let moved = s.left.mul(&naive).expect("shapes agree");
    let keep: Vec<usize> = (0..naive_rows).filter(|&i| s.diag[i] > BigInt::one()).collect();
    let torsion: Vec<BigInt> = keep.iter().map(|&i| s.diag[i].clone()).collect();
    let group = FgAbelian::new(ra + rb, torsion.clone()).expect("Smith diagonal is a divisibility chain");
    let mut images = IntMatrix::zeros(group.cover_dim(), ga + gb);
    for i in 0..ra {
        for j in 0..ga {
            images.set(i, j, a.images.get(i, j).clone());
        }
    }
    for i in 0..rb {
        for j in 0..gb {
            images.set(ra + i, ga + j, b.images.get(i, j).clone());
        }
    }
    for (slot, &i) in keep.iter().enumerate() {
        for j in 0..ga + gb {
            images.set(ra + rb + slot, j, moved.get(i, j).mod_floor(&torsion[slot]));
        }
    }
    Abelianization { group, images }
}

/// The space of real characters of `g`: `rank` free coordinates and the
/// images of the generators in them (`rank x generators`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSpace {
    pub rank: usize,
    pub images: IntMatrix,
}

/// Character space of `g`. For a finite extension this is the character
/// space of the finite-index subgroup; restriction is injective on
/// characters, so classes are read there.
pub fn char_space(g: &GroupDesc) -> Result<CharSpace, GroupError> {
    match g {
        GroupDesc::FiniteIndexOver { inner, .. } => char_space(inner),
        _ => {
            let ab = abelianize(g)?;
            Ok(CharSpace {
                rank: ab.group.free_rank(),
                images: ab.free_images(),
            })
        }
    }
}

/// The center of `g` when a known structural result determines it.
pub fn center_info(g: &GroupDesc) -> Option<CenterInfo> {
    let trivial = || CenterInfo {
        group: FgAbelian::trivial(),
        words: vec![],
    };
    match g {
        GroupDesc::Free { rank, .. } => Some(if *rank == 1 {
            CenterInfo {
                group: FgAbelian::free(1),
                words: vec![Word::generator(0)],
            }
        } else {
            trivial()
        }),
        GroupDesc::Abelian(a) => Some(CenterInfo {
            group: a.clone(),
            words: (0..a.cover_dim()).map(Word::generator).collect(),
        }),
        GroupDesc::Artin(graph) => artin_center(graph),
        GroupDesc::DirectProduct(l, r) => {
            let (cl, cr) = (center_info(l)?, center_info(r)?);
            let off = l.generator_count();
            let mut words = cl.words;
            words.extend(cr.words.iter().map(|w| w.shifted(off)));
            Some(CenterInfo {
                group: cl.group.direct_sum(&cr.group),
                words,
            })
        }
        GroupDesc::FiniteIndexOver { .. } => None,
        GroupDesc::TableBacked(t) => t.center.clone(),
    }
}

fn artin_center(graph: &LabeledGraph) -> Option<CenterInfo> {
    let n = graph.vertex_count();
    let trivial = CenterInfo {
        group: FgAbelian::trivial(),
        words: vec![],
    };
    if n == 0 {
        return Some(trivial);
    }
    if graph.edges().iter().all(|e| e.label == 2) {
        // right-angled: generated by the vertices adjacent to every other vertex
        let central: Vec<usize> = (0..n).filter(|&v| graph.neighbors(v).count() == n - 1).collect();
        return Some(CenterInfo {
            group: FgAbelian::free(central.len()),
            words: central.into_iter().map(Word::generator).collect(),
        });
    }
    if graph.components().len() >= 2 {
        return Some(trivial);
    }
    if n == 2 {
        let e = graph.edges()[0];
        let delta = garside(e.u, e.v, e.label);
        let z = if e.label % 2 == 0 { delta } else { delta.pow(2) };
        return Some(CenterInfo {
            group: FgAbelian::free(1),
            words: vec![z],
        });
    }
    if n >= 3 && graph.is_large_type() {
        return Some(trivial);
    }
    None
}

pub(crate) fn garside(v: usize, w: usize, m: u32) -> Word {
    Word::new((0..m as usize).map(|i| (if i % 2 == 0 { v } else { w }, 1)))
}

/// `sum of exponent * value(generator)` where column j of `values` is the
/// value of generator j.
pub fn evaluate_word(values: &IntMatrix, w: &Word) -> Result<Vec<BigInt>, GroupError> {
    w.check_range(values.cols())?;
    let mut out = vec![BigInt::zero(); values.rows()];
    for &(g, e) in w.letters() {
        let e = BigInt::from(e);
        for (i, x) in out.iter_mut().enumerate() {
            *x += values.get(i, g) * &e;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn triangle_abelianizes_to_z() {
        let ab = abelianize(&triangle()).unwrap();
        assert_eq!(ab.group, FgAbelian::free(1));
        assert_eq!(ab.images, IntMatrix::from_i64(&[&[1, 1, 1]]));
        assert!(center_info(&triangle()).unwrap().group.is_trivial());
    }

    #[test]
    fn even_edge_abelianizes_to_z2() {
        let g = GroupDesc::Artin(
            LabeledGraph::new(vec!["a".into(), "b".into()], vec![("a".into(), "b".into(), 4)]).unwrap(),
        );
        let ab = abelianize(&g).unwrap();
        assert_eq!(ab.group, FgAbelian::free(2));
        assert!(ab.images.is_identity());
        let z = center_info(&g).unwrap();
        assert_eq!(g.show_word(&z.words[0]), "abab");
    }

    #[test]
    fn product_with_torsion_normalizes() {
        let z2 = GroupDesc::Abelian(FgAbelian::new(0, vec![b(2)]).unwrap());
        let z3 = GroupDesc::Abelian(FgAbelian::new(1, vec![b(3)]).unwrap());
        let ab = abelianize(&GroupDesc::product(z2, z3)).unwrap();
        assert_eq!(ab.group, FgAbelian::new(1, vec![b(6)]).unwrap());
        // the Z/2 generator has order 2 in Z/6, the Z/3 generator order 3
        assert_eq!(ab.images.cols(), 3);
        let t = |j: usize| ab.images.get(1, j).clone();
        assert_eq!((t(0) * b(2)) % b(6), b(0));
        assert_ne!(t(0), b(0));
        assert_eq!((t(2) * b(3)) % b(6), b(0));
        assert_ne!(t(2), b(0));
        assert_eq!(ab.images.get(0, 1), &b(1));
    }

    #[test]
    fn product_names_disambiguate() {
        let g = GroupDesc::product(GroupDesc::free(2), GroupDesc::free(2));
        assert_eq!(g.generators(), vec!["L.a", "L.b", "R.a", "R.b"]);
        let w = g.parse_word("L.a R.b").unwrap();
        assert_eq!(w.letters(), &[(0, 1), (3, 1)]);
    }

    #[test]
    fn evaluate_words() {
        let values = IntMatrix::from_i64(&[&[1, 1, 1]]);
        let g = triangle();
        assert_eq!(evaluate_word(&values, &g.parse_word("abab").unwrap()).unwrap(), vec![b(4)]);
        assert_eq!(evaluate_word(&values, &Word::empty()).unwrap(), vec![b(0)]);
        assert_eq!(
            evaluate_word(&values, &Word::new([(0, 1), (0, -1)])).unwrap(),
            vec![b(0)]
        );
        assert!(evaluate_word(&values, &Word::generator(5)).is_err());
    }

    #[test]
    fn table_validation_requires_generation() {
        let t = TableGroup {
            name: "T".into(),
            generators: vec!["x".into()],
            abelianization: FgAbelian::free(1),
            generator_images: IntMatrix::from_i64(&[&[2]]),
            sigma1_complement: None,
            provenance: "test".into(),
            center: None,
            finite_index_subgroup: None,
            finiteness: None,
        };
        assert!(GroupDesc::table(t.clone()).is_err());
        let ok = TableGroup {
            generator_images: IntMatrix::from_i64(&[&[1]]),
            ..t.clone()
        };
        assert!(GroupDesc::table(ok).is_ok());
        let no_source = TableGroup {
            generator_images: IntMatrix::from_i64(&[&[1]]),
            provenance: " ".into(),
            ..t
        };
        assert!(GroupDesc::table(no_source).is_err());
    }
}
