use std::collections::{BTreeSet, HashMap};

use super::GroupError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: u32,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// Finite simple graph with edge labels `m >= 2`, the defining data of an
/// Artin group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl LabeledGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, u32)>) -> Result<Self, GroupError> {
        let index: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b, m) in &edges {
            let (Some(&u), Some(&v)) = (index.get(a.as_str()), index.get(b.as_str())) else {
                return Err(GroupError::InvalidGraph(format!("edge {a}-{b} names an unknown vertex")));
            };
            idx_edges.push((u, v, *m));
        }
        Self::from_indices(vertices, idx_edges)
    }

    pub fn from_indices(vertices: Vec<String>, edges: Vec<(usize, usize, u32)>) -> Result<Self, GroupError> {
        let n = vertices.len();
        if vertices.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(GroupError::InvalidGraph("vertex names must be unique".into()));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (a, b, m) in edges {
            if a >= n || b >= n {
                return Err(GroupError::InvalidGraph(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(GroupError::InvalidGraph(format!("loop at {}", vertices[a])));
            }
            if m < 2 {
                return Err(GroupError::InvalidGraph(format!(
                    "edge {}-{} has label {m}; labels must be at least 2",
                    vertices[a], vertices[b]
                )));
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(GroupError::InvalidGraph(format!(
                    "multiple edges between {} and {}",
                    vertices[u], vertices[v]
                )));
            }
            out.push(Edge { u, v, label: m });
        }
        Ok(LabeledGraph { vertices, edges: out })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn label(&self, a: usize, b: usize) -> Option<u32> {
        let (u, v) = (a.min(b), a.max(b));
        self.edges.iter().find(|e| e.u == u && e.v == v).map(|e| e.label)
    }

    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.touches(x)).map(move |e| e.other(x))
    }

    fn components_of(&self, keep_edge: impl Fn(&Edge) -> bool) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in self.edges.iter().filter(|e| keep_edge(e)) {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_slot: HashMap<usize, usize> = HashMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            let slot = *root_slot.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[slot].push(x);
        }
        groups
    }

    /// Connected components ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_of(|_| true)
    }

    /// Components of the subgraph spanned by odd-labeled edges, ordered by
    /// smallest vertex. These index the free coordinates of the Artin
    /// group's abelianization.
    pub fn odd_components(&self) -> Vec<Vec<usize>> {
        self.components_of(|e| e.label % 2 == 1)
    }

    /// For each vertex, the index of its odd component.
    pub fn odd_component_map(&self) -> Vec<usize> {
        let mut map = vec![0; self.vertices.len()];
        for (k, comp) in self.odd_components().iter().enumerate() {
            for &x in comp {
                map[x] = k;
            }
        }
        map
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// `E - V + C`, the first Betti number.
    pub fn circuit_rank(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }

    pub fn is_large_type(&self) -> bool {
        self.edges.iter().all(|e| e.label >= 3)
    }

    /// Subgraph keeping the given vertices and the edges accepted by
    /// `keep_edge` among them. Vertex names are preserved.
    pub fn subgraph(&self, keep_vertex: &[bool], keep_edge: impl Fn(&Edge) -> bool) -> LabeledGraph {
        let mut new_index = vec![usize::MAX; self.vertices.len()];
        let mut names = Vec::new();
        for (i, name) in self.vertices.iter().enumerate() {
            if keep_vertex[i] {
                new_index[i] = names.len();
                names.push(name.clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep_vertex[e.u] && keep_vertex[e.v] && keep_edge(e))
            .map(|e| Edge {
                u: new_index[e.u],
                v: new_index[e.v],
                label: e.label,
            })
            .collect();
        LabeledGraph { vertices: names, edges }
    }

    /// Checks that `perm` (vertex i goes to perm[i]) is a label-preserving
    /// automorphism.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let n = self.vertices.len();
        if perm.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &p in perm {
            if p >= n || hit[p] {
                return false;
            }
            hit[p] = true;
        }
        self.edges
            .iter()
            .all(|e| self.label(perm[e.u], perm[e.v]) == Some(e.label))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[&str], es: &[(&str, &str, u32)]) -> LabeledGraph {
        LabeledGraph::new(
            vs.iter().map(|s| s.to_string()).collect(),
            es.iter().map(|(a, b, m)| (a.to_string(), b.to_string(), *m)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn triangle_odd_components() {
        let g = graph(&["a", "b", "c"], &[("a", "b", 4), ("b", "c", 3), ("c", "a", 3)]);
        assert_eq!(g.odd_components(), vec![vec![0, 1, 2]]);
        assert_eq!(g.circuit_rank(), 1);
    }

    #[test]
    fn even_edge_and_edgeless() {
        let e = graph(&["a", "b"], &[("a", "b", 4)]);
        assert_eq!(e.odd_components().len(), 2);
        assert_eq!(e.circuit_rank(), 0);
        let n = graph(&["a", "b", "c"], &[]);
        assert_eq!(n.odd_components().len(), 3);
    }

    #[test]
    fn square_with_diagonal() {
        let g = graph(
            &["a", "b", "c", "d"],
            &[("a", "b", 2), ("b", "c", 2), ("c", "d", 2), ("d", "a", 2), ("a", "c", 2)],
        );
        assert_eq!(g.circuit_rank(), 2);
    }

    #[test]
    fn rejects_bad_graphs() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(LabeledGraph::from_indices(names.clone(), vec![(0, 1, 1)]).is_err());
        assert!(LabeledGraph::from_indices(names.clone(), vec![(0, 0, 3)]).is_err());
        assert!(LabeledGraph::from_indices(names.clone(), vec![(0, 1, 3), (1, 0, 3)]).is_err());
        assert!(LabeledGraph::from_indices(vec!["a".into(), "a".into()], vec![]).is_err());
    }

    #[test]
    fn graph_automorphisms() {
        let g = graph(&["a", "b", "c"], &[("a", "b", 4), ("b", "c", 3), ("c", "a", 3)]);
        assert!(g.is_automorphism(&[1, 0, 2]));
        assert!(!g.is_automorphism(&[0, 2, 1]));
    }
}
