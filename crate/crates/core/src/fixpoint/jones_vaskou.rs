use super::{FixDescription, FixError, PsiSpec};
use crate::grouprep::{garside, GroupDesc, LabeledGraph, SubgroupEmbedding, Word};
use crate::sigma::Rule;

/// Alternating word `vwv⋯` of length `m` on the edge `{v, w}` of `graph`.
pub fn garside_word(graph: &LabeledGraph, v: &str, w: &str) -> Result<Word, FixError> {
    let (Some(i), Some(j)) = (graph.vertex_index(v), graph.vertex_index(w)) else {
        return Err(FixError::Precondition(format!("{v} or {w} is not a vertex")));
    };
    let Some(m) = graph.label(i, j) else {
        return Err(FixError::Precondition(format!("no edge between {v} and {w}")));
    };
    if m < 3 {
        return Err(FixError::Precondition(format!(
            "the Garside element of an edge labelled {m} is not used here (m ≥ 3)"
        )));
    }
    Ok(garside(i, j, m))
}

pub fn fix_of_psi(h: &GroupDesc, psi: &PsiSpec) -> Result<FixDescription, FixError> {
    match psi {
        PsiSpec::Identity => Ok(FixDescription {
            group: h.clone(),
            embedding: SubgroupEmbedding::identity(h),
            trace: vec![],
        }),
        PsiSpec::GraphAut(perm) => {
            let GroupDesc::Artin(graph) = h else {
                return Err(FixError::UnsupportedPsi("graph automorphisms need an Artin group".into()));
            };
            graph_aut_fix(h, graph, perm)
        }
        PsiSpec::Conjugation(w) => Err(FixError::UnsupportedPsi(format!(
            "centralizers are not computed; supply Fix ψ for conjugation by {} as an opaque ψ",
            h.show_word(w)
        ))),
        PsiSpec::Opaque(o) => {
            o.fix.check_against(h)?;
            let words: Vec<String> = o.fix.words.iter().map(|w| h.show_word(w)).collect();
            Ok(FixDescription {
                group: o.fix.sub.clone(),
                embedding: o.fix.clone(),
                trace: vec![Rule::OpaqueFix.apply(format!(
                    "Fix ψ = {} embedded by <{}> ({})",
                    o.fix.sub,
                    words.join(", "),
                    o.provenance
                ))],
            })
        }
    }
}

fn graph_aut_fix(h: &GroupDesc, graph: &LabeledGraph, perm: &[usize]) -> Result<FixDescription, FixError> {
    if !graph.is_automorphism(perm) {
        return Err(FixError::UnsupportedPsi(
            "permutation is not a label-preserving graph automorphism".into(),
        ));
    }
    if !graph.is_large_type() || !graph.is_complete() {
        return Err(FixError::UnsupportedPsi(
            "fixed subgroups of graph automorphisms are known here only for large type, complete graphs".into(),
        ));
    }
    let n = graph.vertex_count();
    let fixed: Vec<bool> = (0..n).map(|v| perm[v] == v).collect();
    let fix_graph = graph.subgraph(&fixed, |_| true);
    let transposed: Vec<_> = graph
        .edges()
        .iter()
        .filter(|e| perm[e.u] == e.v && perm[e.v] == e.u)
        .copied()
        .collect();

    let mut names: Vec<String> = fix_graph.vertices().to_vec();
    let mut words: Vec<Word> = (0..n).filter(|&v| fixed[v]).map(Word::generator).collect();
    let mut trace = Vec::new();
    for e in &transposed {
        let (a, b) = (&graph.vertices()[e.u], &graph.vertices()[e.v]);
        let w = garside(e.u, e.v, e.label);
        trace.push(Rule::Garside.apply(format!("Δ_{a}{b} = {} (m = {})", h.show_word(&w), e.label)));
        names.push(format!("D_{a}{b}"));
        words.push(w);
    }

    let group = if fix_graph.edges().is_empty() {
        GroupDesc::free_named(names.clone())?
    } else {
        // free product of Artin groups: disjoint union of the graphs
        let mut edges: Vec<(String, String, u32)> = fix_graph
            .edges()
            .iter()
            .map(|e| (fix_graph.vertices()[e.u].clone(), fix_graph.vertices()[e.v].clone(), e.label))
            .collect();
        edges.sort();
        GroupDesc::Artin(LabeledGraph::new(names.clone(), edges)?)
    };
    let shown: Vec<String> = words.iter().map(|w| h.show_word(w)).collect();
    let factors: Vec<String> = shown.iter().map(|w| format!("<{w}>")).collect();
    let summary = if fix_graph.edges().is_empty() {
        factors.join(" ∗ ")
    } else {
        format!("A_(Fix σ) ∗ F{}", transposed.len())
    };
    trace.insert(
        0,
        Rule::JonesVaskou.apply(format!(
            "σ fixes {{{}}} and transposes {} edge(s): Fix ψ = {summary}",
            fix_graph.vertices().join(","),
            transposed.len()
        )),
    );
    let embedding = SubgroupEmbedding::new(group.clone(), words)?;
    Ok(FixDescription { group, embedding, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> (GroupDesc, LabeledGraph) {
        let g = LabeledGraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![("a".into(), "b".into(), 4), ("b".into(), "c".into(), 3), ("c".into(), "a".into(), 3)],
        )
        .unwrap();
        (GroupDesc::Artin(g.clone()), g)
    }

    #[test]
    fn garside_words() {
        let (h, g) = triangle();
        assert_eq!(h.show_word(&garside_word(&g, "a", "b").unwrap()), "abab");
        assert_eq!(h.show_word(&garside_word(&g, "a", "c").unwrap()), "aca");
        let p = LabeledGraph::new(vec!["a".into(), "b".into()], vec![("a".into(), "b".into(), 5)]).unwrap();
        assert_eq!(GroupDesc::Artin(p.clone()).show_word(&garside_word(&p, "a", "b").unwrap()), "ababa");
    }

    #[test]
    fn triangle_transposition() {
        let (h, _) = triangle();
        let fix = fix_of_psi(&h, &PsiSpec::GraphAut(vec![1, 0, 2])).unwrap();
        assert_eq!(fix.group.kind(), "free");
        assert_eq!(fix.group.generator_count(), 2);
        let words: Vec<String> = fix.embedding.words.iter().map(|w| h.show_word(w)).collect();
        assert_eq!(words, vec!["c", "abab"]);
        assert!(fix.trace[0].note.ends_with("Fix ψ = <c> ∗ <abab>"));
    }

    #[test]
    fn identity_and_conjugation() {
        let (h, _) = triangle();
        let fix = fix_of_psi(&h, &PsiSpec::Identity).unwrap();
        assert_eq!(fix.group, h);
        assert!(fix.trace.is_empty());
        assert!(matches!(
            fix_of_psi(&h, &PsiSpec::Conjugation(Word::generator(0))),
            Err(FixError::UnsupportedPsi(_))
        ));
    }
}
