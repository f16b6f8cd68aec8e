//! Moment graphs: a generic container plus the Bruhat graph of `W^J`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::coxeter::{ElemId, ParabolicDatum, WeylGroup};
use crate::error::{MgError, Result};
use crate::polyring::LinearForm;
use crate::rational::Rat;

pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    /// Vertex index of the lower endpoint.
    pub from: usize,
    pub to: usize,
    pub label: LinearForm,
}

/// Vertices are indexed `0..n`; `order[i][j]` means `i ⊴ j`.
#[derive(Clone, Debug)]
pub struct MomentGraph {
    pub nvars: usize,
    pub names: Vec<String>,
    /// Group element of each vertex for Bruhat graphs (minimal coset representatives).
    pub elements: Vec<ElemId>,
    pub lengths: Vec<usize>,
    order: Vec<Vec<bool>>,
    pub edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    by_element: HashMap<ElemId, usize>,
}

impl MomentGraph {
    /// A generic moment graph; `lengths` orients edges and must be strictly
    /// increasing along each edge.
    pub fn new(
        nvars: usize,
        names: Vec<String>,
        lengths: Vec<usize>,
        order: Vec<Vec<bool>>,
        edges: Vec<Edge>,
    ) -> Result<MomentGraph> {
        let n = names.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            if e.from >= n || e.to >= n {
                return Err(MgError::UnknownVertex);
            }
            out_edges[e.from].push(k);
            in_edges[e.to].push(k);
        }
        let g = MomentGraph {
            nvars,
            names,
            elements: (0..n).collect(),
            lengths,
            order,
            edges,
            out_edges,
            in_edges,
            by_element: (0..n).map(|i| (i, i)).collect(),
        };
        g.validate()?;
        Ok(g)
    }

    /// The Bruhat moment graph of `(W, J)`: vertices `W^J`, an edge `x → (tx)^J`
    /// for each reflection `t` with `(tx)^J ≠ x` and `ℓ(x) < ℓ((tx)^J)`, labelled
    /// by the positive root of `t`.
    pub fn bruhat(g: &WeylGroup, pd: &ParabolicDatum) -> MomentGraph {
        let elements = pd.reps.clone();
        let n = elements.len();
        let by_element: HashMap<ElemId, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut found: BTreeMap<(usize, usize), LinearForm> = BTreeMap::new();
        for (i, &x) in elements.iter().enumerate() {
            for (t, root) in g.reflections().iter().zip(g.positive_roots()) {
                let y = pd.min_rep(g.mul(*t, x));
                if y == x || g.length(y) <= g.length(x) {
                    continue;
                }
                let label = LinearForm::from_ints(root).unwrap();
                let prev = found.insert((i, by_element[&y]), label.clone());
                debug_assert!(prev.is_none_or(|p| p == label));
            }
        }
        let edges: Vec<Edge> = found.into_iter().map(|((from, to), label)| Edge { from, to, label }).collect();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            out_edges[e.from].push(k);
            in_edges[e.to].push(k);
        }
        let order = elements.iter().map(|&x| elements.iter().map(|&y| g.bruhat_leq(x, y)).collect()).collect();
        MomentGraph {
            nvars: g.rank(),
            names: elements.iter().map(|&x| g.word_string(x)).collect(),
            lengths: elements.iter().map(|&x| g.length(x)).collect(),
            elements,
            order,
            edges,
            out_edges,
            in_edges,
            by_element,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_of(&self, x: ElemId) -> Option<usize> {
        self.by_element.get(&x).copied()
    }

    /// `i ⊴ j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order[i][j]
    }

    pub fn out_edges(&self, i: usize) -> &[EdgeId] {
        &self.out_edges[i]
    }

    pub fn in_edges(&self, i: usize) -> &[EdgeId] {
        &self.in_edges[i]
    }

    /// All edges at `i`, in id order.
    pub fn incident_edges(&self, i: usize) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self.out_edges[i].iter().chain(&self.in_edges[i]).copied().collect();
        v.sort_unstable();
        v
    }

    pub fn other_end(&self, e: EdgeId, i: usize) -> usize {
        let edge = &self.edges[e];
        if edge.from == i {
            edge.to
        } else {
            edge.from
        }
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<EdgeId> {
        self.out_edges[a].iter().chain(&self.out_edges[b]).copied().find(|&k| {
            let e = &self.edges[k];
            (e.from == a && e.to == b) || (e.from == b && e.to == a)
        })
    }

    /// `(E_δx, V_δx)`: the edges leaving `x` upwards and their targets.
    pub fn delta_sets(&self, i: usize) -> Result<(Vec<EdgeId>, Vec<usize>)> {
        if i >= self.num_vertices() {
            return Err(MgError::UnknownVertex);
        }
        let edges = self.out_edges[i].clone();
        let targets = edges.iter().map(|&k| self.edges[k].to).collect();
        Ok((edges, targets))
    }

    /// `{⊵ x}`.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&j| self.order[i][j]).collect()
    }

    /// `{▷ x}`.
    pub fn strict_up_set(&self, i: usize) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&j| j != i && self.order[i][j]).collect()
    }

    /// `{⊴ w}`.
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&j| self.order[j][i]).collect()
    }

    /// Checks the moment-graph axioms and the conventions of this crate.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vertices();
        let bad = |m: String| Err(MgError::InvariantViolation(m));
        if self.order.len() != n || self.lengths.len() != n {
            return bad("order table or lengths have the wrong size".into());
        }
        for i in 0..n {
            if !self.order[i][i] {
                return bad(format!("order is not reflexive at {}", self.names[i]));
            }
            for j in 0..n {
                if i != j && self.order[i][j] && self.order[j][i] {
                    return bad("order is not antisymmetric".into());
                }
                for k in 0..n {
                    if self.order[i][j] && self.order[j][k] && !self.order[i][k] {
                        return bad("order is not transitive".into());
                    }
                }
            }
        }
        let mut seen = HashMap::new();
        for e in &self.edges {
            if e.label.nvars() != self.nvars {
                return bad("label has the wrong dimension".into());
            }
            if LinearForm::from_ints(e.label.coords()).as_ref() != Some(&e.label) {
                return bad("label is not primitive".into());
            }
            if !self.order[e.from][e.to] {
                return bad(format!("edge {} -> {} is not order-compatible", self.names[e.from], self.names[e.to]));
            }
            if self.lengths[e.from] >= self.lengths[e.to] {
                return bad("edge does not increase length".into());
            }
            let key = (e.from.min(e.to), e.from.max(e.to));
            if seen.insert(key, ()).is_some() {
                return bad("duplicate or anti-parallel edge".into());
            }
        }
        Ok(())
    }

    /// Strict order relations as `[i, j]` pairs with `i ◁ j`.
    pub fn order_pairs(&self) -> Vec<[usize; 2]> {
        let n = self.num_vertices();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.order[i][j] {
                    out.push([i, j]);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.names,
            "order": self.order_pairs(),
            "edges": self.edges.iter().map(|e| json!({"from": e.from, "to": e.to, "label": e.label.coords()})).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph moment_graph {\n  rankdir=BT;\n");
        for (i, name) in self.names.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{name}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", e.from, e.to, e.label);
        }
        s.push_str("}\n");
        s
    }

    /// The vector `λ = Σ_{s ∉ J} ϖ_s`, whose stabilizer is `W_J`.
    pub fn dominant_weight(g: &WeylGroup, pd: &ParabolicDatum) -> Vec<Rat> {
        let w = g.cartan.fundamental_weights();
        let mut lambda = vec![Rat::int(0); g.rank()];
        for (s, ws) in w.iter().enumerate() {
            if !pd.contains_generator(s) {
                for (l, c) in lambda.iter_mut().zip(ws) {
                    *l += c;
                }
            }
        }
        lambda
    }
}

/// The canonical quotient map on vertices, `x ↦ x^J`.
pub fn quotient_vertex_map(pd: &ParabolicDatum, x: ElemId) -> ElemId {
    pd.min_rep(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_parabolic_figure() {
        let g = WeylGroup::from_label("A2").unwrap();
        let pd = g.parabolic(&[0]).unwrap();
        let mg = MomentGraph::bruhat(&g, &pd);
        assert_eq!(mg.names, vec!["e", "2", "1 2"]);
        let edges: Vec<(usize, usize, Vec<i64>)> =
            mg.edges.iter().map(|e| (e.from, e.to, e.label.coords().to_vec())).collect();
        assert_eq!(edges, vec![(0, 1, vec![0, 1]), (0, 2, vec![1, 1]), (1, 2, vec![1, 0])]);
        mg.validate().unwrap();
        let (de, dv) = mg.delta_sets(0).unwrap();
        assert_eq!(de.len(), 2);
        assert_eq!(dv, vec![1, 2]);
        assert_eq!(mg.delta_sets(2).unwrap(), (vec![], vec![]));
        assert_eq!(quotient_vertex_map(&pd, g.parse_word("1 2 1").unwrap()), g.parse_word("1 2").unwrap());
    }

    #[test]
    fn regular_graphs_match_pair_scan() {
        for label in ["A1", "A2", "B2", "A3", "G2"] {
            let g = WeylGroup::from_label(label).unwrap();
            let pd = g.parabolic(&[]).unwrap();
            let mg = MomentGraph::bruhat(&g, &pd);
            mg.validate().unwrap();
            let mut expect = Vec::new();
            for x in g.ids() {
                for &t in g.reflections() {
                    let y = g.mul(t, x);
                    if g.length(y) > g.length(x) {
                        expect.push((x, y));
                    }
                }
            }
            expect.sort_unstable();
            let mut got: Vec<(ElemId, ElemId)> =
                mg.edges.iter().map(|e| (mg.elements[e.from], mg.elements[e.to])).collect();
            got.sort_unstable();
            assert_eq!(got, expect, "{label}");
        }
        let a2 = WeylGroup::from_label("A2").unwrap();
        assert_eq!(MomentGraph::bruhat(&a2, &a2.parabolic(&[]).unwrap()).num_edges(), 9);
    }

    #[test]
    fn labels_span_the_weight_difference_line() {
        for label in ["A2", "B2", "G2", "A3"] {
            let g = WeylGroup::from_label(label).unwrap();
            for mask in 0..(1u32 << g.rank()) {
                let j: Vec<usize> = (0..g.rank()).filter(|s| mask >> s & 1 == 1).collect();
                let pd = g.parabolic(&j).unwrap();
                let mg = MomentGraph::bruhat(&g, &pd);
                mg.validate().unwrap();
                let lambda = MomentGraph::dominant_weight(&g, &pd);
                for x in g.ids() {
                    let fixes = g.element(x).act_rat(&lambda) == lambda;
                    assert_eq!(fixes, pd.in_parabolic_subgroup(x));
                }
                for e in &mg.edges {
                    let x = g.element(mg.elements[e.from]).act_rat(&lambda);
                    let y = g.element(mg.elements[e.to]).act_rat(&lambda);
                    let diff: Vec<Rat> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
                    assert_eq!(LinearForm::from_rats(&diff).as_ref(), Some(&e.label));
                }
            }
        }
    }

    #[test]
    fn generic_container_rejects_bad_edges() {
        let order = vec![vec![true, true], vec![false, true]];
        let ok = MomentGraph::new(
            1,
            vec!["a".into(), "b".into()],
            vec![0, 1],
            order.clone(),
            vec![Edge { from: 0, to: 1, label: LinearForm::from_ints(&[1]).unwrap() }],
        );
        assert!(ok.is_ok());
        let bad = MomentGraph::new(
            1,
            vec!["a".into(), "b".into()],
            vec![0, 1],
            order,
            vec![Edge { from: 1, to: 0, label: LinearForm::from_ints(&[1]).unwrap() }],
        );
        assert!(bad.is_err());
        let single = MomentGraph::new(2, vec!["x".into()], vec![0], vec![vec![true]], vec![]).unwrap();
        assert_eq!(single.num_edges(), 0);
    }
}
