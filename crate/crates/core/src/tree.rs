//! Finite rooted trees and the maps between their free operads.
//!
//! A tree is a finite set of edges together with vertices; every vertex has an
//! ordered (but semantically symmetric) sequence of input edges and one output
//! edge. The edge that is the input of no vertex is the root; edges that are
//! the output of no vertex are leaves. The tree with one edge and no vertices
//! is written `eta`.
//!
//! Trees are identified up to isomorphism by a canonical code computed by the
//! usual rooted-tree labelling recursion (children codes sorted); the stored
//! input order of every vertex is just a chosen planar presentation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of an edge within its tree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge(pub u32);

/// Index of a vertex within its tree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vert(pub u32);

impl Edge {
    pub fn ix(self) -> usize {
        self.0 as usize
    }
}

impl Vert {
    pub fn ix(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vertex {
    pub inputs: Vec<Edge>,
    pub output: Edge,
}

/// A finite rooted tree, presented with named edges.
#[derive(Clone)]
pub struct Tree {
    names: Vec<String>,
    vertices: Vec<Vertex>,
    root: Edge,
    /// Vertex whose output is the given edge (the vertex just above it).
    above: Vec<Option<Vert>>,
    /// Vertex having the given edge among its inputs (the vertex just below it).
    below: Vec<Option<Vert>>,
    code: String,
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.vertices == other.vertices && self.root == other.root
    }
}

impl Eq for Tree {}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree[{}; root={}]", self.code, self.name(self.root))
    }
}

impl Tree {
    /// Builds a tree from named edges and vertices, checking all invariants.
    pub fn new(
        edge_names: Vec<String>,
        vertices: Vec<(Vec<usize>, usize)>,
        root: usize,
    ) -> Result<Tree> {
        let n = edge_names.len();
        if n == 0 {
            return Err(Error::Tree("a tree has at least one edge".into()));
        }
        if root >= n {
            return Err(Error::Tree("root edge out of range".into()));
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for name in &edge_names {
                if !seen.insert(name) {
                    return Err(Error::Tree(format!("duplicate edge name {name:?}")));
                }
            }
        }
        let mut above: Vec<Option<Vert>> = vec![None; n];
        let mut below: Vec<Option<Vert>> = vec![None; n];
        let mut verts = Vec::with_capacity(vertices.len());
        for (vi, (inputs, output)) in vertices.iter().enumerate() {
            for &e in inputs.iter().chain(std::iter::once(output)) {
                if e >= n {
                    return Err(Error::Tree("vertex references unknown edge".into()));
                }
            }
            if above[*output].is_some() {
                return Err(Error::Tree("edge is the output of two vertices".into()));
            }
            above[*output] = Some(Vert(vi as u32));
            for &e in inputs {
                if below[e].is_some() {
                    return Err(Error::Tree("edge is the input of two vertices".into()));
                }
                below[e] = Some(Vert(vi as u32));
            }
            verts.push(Vertex {
                inputs: inputs.iter().map(|&e| Edge(e as u32)).collect(),
                output: Edge(*output as u32),
            });
        }
        if below[root].is_some() {
            return Err(Error::Tree("root edge is the input of a vertex".into()));
        }
        // Connectivity and acyclicity: walk from the root upward.
        let mut seen_e = vec![false; n];
        let mut seen_v = vec![false; verts.len()];
        let mut stack = vec![Edge(root as u32)];
        while let Some(e) = stack.pop() {
            if seen_e[e.ix()] {
                return Err(Error::Tree("cycle detected".into()));
            }
            seen_e[e.ix()] = true;
            if let Some(v) = above[e.ix()] {
                if seen_v[v.ix()] {
                    return Err(Error::Tree("cycle detected".into()));
                }
                seen_v[v.ix()] = true;
                stack.extend(verts[v.ix()].inputs.iter().copied());
            }
        }
        if seen_e.iter().any(|s| !s) {
            return Err(Error::Tree("disconnected edge".into()));
        }
        let mut tree = Tree {
            names: edge_names,
            vertices: verts,
            root: Edge(root as u32),
            above,
            below,
            code: String::new(),
        };
        tree.code = tree.edge_code(tree.root);
        Ok(tree)
    }

    fn edge_code(&self, e: Edge) -> String {
        match self.above[e.ix()] {
            None => "L".to_string(),
            Some(v) => {
                let mut children: Vec<String> = self.vertices[v.ix()]
                    .inputs
                    .iter()
                    .map(|&d| self.edge_code(d))
                    .collect();
                children.sort();
                format!("({})", children.concat())
            }
        }
    }

    /// The tree with a single edge and no vertices.
    pub fn eta() -> Tree {
        Tree::new(vec!["e".into()], vec![], 0).unwrap()
    }

    /// The corolla with `n` leaves: one vertex, edges `r, l1, ..., ln`.
    pub fn corolla(n: usize) -> Tree {
        let mut names = vec!["r".to_string()];
        names.extend((1..=n).map(|i| format!("l{i}")));
        Tree::new(names, vec![((1..=n).collect(), 0)], 0).unwrap()
    }

    /// The linear tree with `n` unary vertices (and `n + 1` edges `e0..en`,
    /// rooted at `e0`).
    pub fn linear(n: usize) -> Tree {
        let names = (0..=n).map(|i| format!("e{i}")).collect();
        let vertices = (0..n).map(|i| (vec![i + 1], i)).collect();
        Tree::new(names, vertices, 0).unwrap()
    }

    pub fn edge_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.names.len() as u32).map(Edge)
    }

    pub fn verts(&self) -> impl Iterator<Item = Vert> + '_ {
        (0..self.vertices.len() as u32).map(Vert)
    }

    pub fn vertex(&self, v: Vert) -> &Vertex {
        &self.vertices[v.ix()]
    }

    pub fn root(&self) -> Edge {
        self.root
    }

    pub fn name(&self, e: Edge) -> &str {
        &self.names[e.ix()]
    }

    pub fn edge_by_name(&self, name: &str) -> Option<Edge> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Edge(i as u32))
    }

    /// Vertex whose output edge is `e`, if any.
    pub fn above(&self, e: Edge) -> Option<Vert> {
        self.above[e.ix()]
    }

    /// Vertex having `e` among its inputs, if any.
    pub fn below(&self, e: Edge) -> Option<Vert> {
        self.below[e.ix()]
    }

    pub fn is_leaf(&self, e: Edge) -> bool {
        self.above[e.ix()].is_none()
    }

    /// Leaves of the whole tree, in planar order.
    pub fn leaves(&self) -> Vec<Edge> {
        self.full_subtree().leaves()
    }

    /// An edge connecting two vertices.
    pub fn is_inner(&self, e: Edge) -> bool {
        self.above[e.ix()].is_some() && self.below[e.ix()].is_some()
    }

    pub fn inner_edges(&self) -> Vec<Edge> {
        self.edges().filter(|&e| self.is_inner(e)).collect()
    }

    /// Iso-invariant canonical code.
    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn is_isomorphic(&self, other: &Tree) -> bool {
        self.code == other.code
    }

    /// True when every map to `eta` exists, i.e. all vertices are unary.
    pub fn is_linear(&self) -> bool {
        self.vertices.iter().all(|v| v.inputs.len() == 1)
    }

    pub fn max_arity(&self) -> usize {
        self.vertices.iter().map(|v| v.inputs.len()).max().unwrap_or(0)
    }

    /// The subtree consisting of all vertices, rooted at the root edge.
    pub fn full_subtree(self: &Tree) -> Subtree {
        Subtree {
            host: Arc::new(self.clone()),
            root_edge: self.root,
            verts: (0..self.vertices.len()).map(|i| Vert(i as u32)).collect(),
        }
    }

    /// Grafts `top` onto the edge `at` of `self` (identifying `top`'s root
    /// with `at`). Edge names of `top` are prefixed to stay unique.
    pub fn graft(&self, at: Edge, top: &Tree, prefix: &str) -> Result<Tree> {
        if self.above(at).is_some() {
            return Err(Error::Tree("graft target must be a leaf edge".into()));
        }
        let mut names = self.names.clone();
        // top edge index -> new index; top's root maps to `at`.
        let mut map = Vec::with_capacity(top.edge_count());
        for e in top.edges() {
            if e == top.root() {
                map.push(at.ix());
            } else {
                map.push(names.len());
                names.push(format!("{prefix}{}", top.name(e)));
            }
        }
        let mut vertices: Vec<(Vec<usize>, usize)> = self
            .vertices
            .iter()
            .map(|v| {
                (
                    v.inputs.iter().map(|e| e.ix()).collect(),
                    v.output.ix(),
                )
            })
            .collect();
        for v in &top.vertices {
            vertices.push((
                v.inputs.iter().map(|e| map[e.ix()]).collect(),
                map[v.output.ix()],
            ));
        }
        Tree::new(names, vertices, self.root.ix())
    }
}

/// A subtree of a host tree: a root edge together with a set of vertices
/// closed under the walk toward that root edge. The empty vertex set is the
/// bare-edge subtree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subtree {
    pub host: Arc<Tree>,
    pub root_edge: Edge,
    /// Sorted vertex set.
    pub verts: Vec<Vert>,
}

impl Subtree {
    pub fn new(host: Arc<Tree>, root_edge: Edge, mut verts: Vec<Vert>) -> Result<Subtree> {
        verts.sort();
        verts.dedup();
        let st = Subtree {
            host,
            root_edge,
            verts,
        };
        for &v in &st.verts {
            let out = st.host.vertex(v).output;
            if out != st.root_edge {
                let ok = match st.host.below(out) {
                    Some(w) => st.contains(w),
                    None => false,
                };
                if !ok {
                    return Err(Error::Tree(
                        "vertex set not closed toward the root edge".into(),
                    ));
                }
            }
        }
        Ok(st)
    }

    pub fn bare(host: Arc<Tree>, e: Edge) -> Subtree {
        Subtree {
            host,
            root_edge: e,
            verts: vec![],
        }
    }

    pub fn is_bare(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn contains(&self, v: Vert) -> bool {
        self.verts.binary_search(&v).is_ok()
    }

    /// Input edges of the subtree, in the host's planar order.
    pub fn leaves(&self) -> Vec<Edge> {
        if self.is_bare() {
            return vec![self.root_edge];
        }
        let mut out = Vec::new();
        self.collect_leaves(self.root_edge, &mut out);
        out
    }

    fn collect_leaves(&self, e: Edge, out: &mut Vec<Edge>) {
        match self.host.above(e) {
            Some(v) if self.contains(v) => {
                for &d in &self.host.vertex(v).inputs {
                    self.collect_leaves(d, out);
                }
            }
            _ => out.push(e),
        }
    }

    /// Edges connecting two vertices of the subtree.
    pub fn inner_edges(&self) -> Vec<Edge> {
        self.host
            .edges()
            .filter(|&e| {
                matches!(self.host.above(e), Some(v) if self.contains(v))
                    && matches!(self.host.below(e), Some(w) if self.contains(w))
            })
            .collect()
    }

    /// All edges touched by the subtree (root, inner edges and leaves).
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = vec![self.root_edge];
        for &v in &self.verts {
            out.extend(self.host.vertex(v).inputs.iter().copied());
        }
        out.sort();
        out.dedup();
        out
    }

    /// Presents the subtree as a tree of its own, keeping the host's edge
    /// names. Returns the tree and the map from its edge indices to host
    /// edges.
    pub fn materialize(&self) -> (Tree, Vec<Edge>) {
        let edges = self.edges();
        let names: Vec<String> = edges.iter().map(|&e| self.host.name(e).to_string()).collect();
        let pos: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let vertices: Vec<(Vec<usize>, usize)> = self
            .verts
            .iter()
            .map(|&v| {
                let vx = self.host.vertex(v);
                (
                    vx.inputs.iter().map(|e| pos[e]).collect(),
                    pos[&vx.output],
                )
            })
            .collect();
        let tree = Tree::new(names, vertices, pos[&self.root_edge]).unwrap();
        (tree, edges)
    }
}

/// Enumerates subtrees of `host` rooted at `e` (as sorted vertex sets).
fn subtree_sets_at(host: &Tree, e: Edge) -> Vec<Vec<Vert>> {
    let mut out = vec![vec![]];
    if let Some(v) = host.above(e) {
        // Choose a subtree above each input edge of v.
        let per_input: Vec<Vec<Vec<Vert>>> = host
            .vertex(v)
            .inputs
            .iter()
            .map(|&d| subtree_sets_at(host, d))
            .collect();
        let mut combos: Vec<Vec<Vert>> = vec![vec![v]];
        for choices in &per_input {
            let mut next = Vec::new();
            for base in &combos {
                for choice in choices {
                    let mut set = base.clone();
                    set.extend(choice.iter().copied());
                    next.push(set);
                }
            }
            combos = next;
        }
        out.extend(combos);
    }
    for set in &mut out {
        set.sort();
    }
    out
}

/// All subtrees of `host`, or only those with the given ordered profile
/// (leaf listing and root). With a profile of distinct edges the result has
/// at most one element.
pub fn subtrees(host: &Tree, profile: Option<(&[Edge], Edge)>) -> Vec<Subtree> {
    let arc = Arc::new(host.clone());
    let mut out = Vec::new();
    match profile {
        None => {
            for e in host.edges() {
                for set in subtree_sets_at(host, e) {
                    out.push(Subtree {
                        host: arc.clone(),
                        root_edge: e,
                        verts: set,
                    });
                }
            }
        }
        Some((leaves, root)) => {
            let mut want: Vec<Edge> = leaves.to_vec();
            want.sort();
            for set in subtree_sets_at(host, root) {
                let st = Subtree {
                    host: arc.clone(),
                    root_edge: root,
                    verts: set,
                };
                let mut got = st.leaves();
                got.sort();
                if got == want && leaves.len() == got.len() {
                    out.push(st);
                }
            }
        }
    }
    out
}

/// The unique subtree with the given ordered leaf listing and root, if any.
/// Listings with repeated edges never match (inputs of a subtree are
/// distinct), except that the bare edge matches the one-element listing of
/// its own root.
pub fn subtree_at(host: &Tree, leaves: &[Edge], root: Edge) -> Option<Subtree> {
    let mut distinct: Vec<Edge> = leaves.to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != leaves.len() {
        return None;
    }
    subtrees(host, Some((leaves, root))).into_iter().next()
}

/// A morphism of the tree category: a map of free operads, recorded as an
/// edge map together with, for every source vertex, the target subtree it is
/// sent to.
#[derive(Clone)]
pub struct OmegaMorphism {
    pub source: Arc<Tree>,
    pub target: Arc<Tree>,
    /// Indexed by source edge.
    pub edge_map: Vec<Edge>,
    /// Indexed by source vertex.
    pub vertex_map: Vec<Subtree>,
}

impl PartialEq for OmegaMorphism {
    fn eq(&self, other: &Self) -> bool {
        *self.source == *other.source && *self.target == *other.target && self.edge_map == other.edge_map
    }
}

impl Eq for OmegaMorphism {}

impl fmt::Debug for OmegaMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .source
            .edges()
            .map(|e| format!("{}->{}", self.source.name(e), self.target.name(self.edge_map[e.ix()])))
            .collect();
        write!(f, "Omega[{}]", pairs.join(","))
    }
}

impl OmegaMorphism {
    /// Reconstructs a morphism from an edge map, if the profile constraint
    /// admits a (then unique) vertex assignment.
    pub fn from_edge_map(source: Arc<Tree>, target: Arc<Tree>, edge_map: Vec<Edge>) -> Option<OmegaMorphism> {
        let mut vertex_map = Vec::with_capacity(source.vertex_count());
        for v in source.verts() {
            let vx = source.vertex(v);
            let leaves: Vec<Edge> = vx.inputs.iter().map(|e| edge_map[e.ix()]).collect();
            let root = edge_map[vx.output.ix()];
            let st = if vx.inputs.len() == 1 && leaves[0] == root {
                Subtree::bare(target.clone(), root)
            } else {
                subtree_at(&target, &leaves, root)?
            };
            vertex_map.push(st);
        }
        Some(OmegaMorphism {
            source,
            target,
            edge_map,
            vertex_map,
        })
    }

    pub fn identity(t: &Tree) -> OmegaMorphism {
        let arc = Arc::new(t.clone());
        OmegaMorphism {
            source: arc.clone(),
            target: arc.clone(),
            edge_map: t.edges().collect(),
            vertex_map: t
                .verts()
                .map(|v| Subtree {
                    host: arc.clone(),
                    root_edge: t.vertex(v).output,
                    verts: vec![v],
                })
                .collect(),
        }
    }

    pub fn map_edge(&self, e: Edge) -> Edge {
        self.edge_map[e.ix()]
    }

    /// Image of a source subtree: the grafting of the images of its vertices.
    pub fn apply_subtree(&self, st: &Subtree) -> Subtree {
        let mut verts = Vec::new();
        for &v in &st.verts {
            verts.extend(self.vertex_map[v.ix()].verts.iter().copied());
        }
        verts.sort();
        verts.dedup();
        Subtree {
            host: self.target.clone(),
            root_edge: self.edge_map[st.root_edge.ix()],
            verts,
        }
    }

    /// `self` after `earlier` (so `earlier: S -> T`, `self: T -> U`).
    pub fn compose(&self, earlier: &OmegaMorphism) -> OmegaMorphism {
        assert!(
            *earlier.target == *self.source,
            "composition of incompatible morphisms"
        );
        OmegaMorphism {
            source: earlier.source.clone(),
            target: self.target.clone(),
            edge_map: earlier
                .edge_map
                .iter()
                .map(|&e| self.edge_map[e.ix()])
                .collect(),
            vertex_map: earlier
                .vertex_map
                .iter()
                .map(|st| self.apply_subtree(st))
                .collect(),
        }
    }

    /// Injective on edges.
    pub fn is_mono(&self) -> bool {
        let mut seen = vec![false; self.target.edge_count()];
        for &e in &self.edge_map {
            if seen[e.ix()] {
                return false;
            }
            seen[e.ix()] = true;
        }
        true
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono()
            && self.source.edge_count() == self.target.edge_count()
            && self.vertex_map.iter().all(|st| st.vertex_count() == 1)
            && self.source.vertex_count() == self.target.vertex_count()
    }

    pub fn inverse(&self) -> Option<OmegaMorphism> {
        if !self.is_iso() {
            return None;
        }
        let mut inv = vec![Edge(0); self.target.edge_count()];
        for e in self.source.edges() {
            inv[self.edge_map[e.ix()].ix()] = e;
        }
        OmegaMorphism::from_edge_map(self.target.clone(), self.source.clone(), inv)
    }

    /// A proper split epimorphism collapses at least one vertex.
    pub fn is_split_epi(&self) -> bool {
        self.vertex_map.iter().all(|st| st.vertex_count() <= 1)
            && {
                let mut hit = vec![false; self.target.edge_count()];
                for &e in &self.edge_map {
                    hit[e.ix()] = true;
                }
                hit.into_iter().all(|h| h)
            }
    }

    /// Set of target edges hit by the edge map.
    pub fn edge_image(&self) -> Vec<Edge> {
        let mut out = self.edge_map.clone();
        out.sort();
        out.dedup();
        out
    }

    /// Union of the vertex-image subtrees.
    pub fn vertex_image(&self) -> Vec<Vert> {
        let mut out = Vec::new();
        for st in &self.vertex_map {
            out.extend(st.verts.iter().copied());
        }
        out.sort();
        out.dedup();
        out
    }

    /// True when the morphism does not factor through a proper subobject:
    /// the edge map is surjective and every target vertex occurs in some
    /// vertex image.
    pub fn is_surjection(&self) -> bool {
        self.edge_image().len() == self.target.edge_count()
            && self.vertex_image().len() == self.target.vertex_count()
    }
}

/// All morphisms from `source` to `target`: every assignment of subtrees to
/// vertices compatible with an edge map.
pub fn hom_omega(source: &Tree, target: &Tree) -> Vec<OmegaMorphism> {
    let src = Arc::new(source.clone());
    let tgt = Arc::new(target.clone());
    // Candidate subtrees of the target, grouped by (root edge, leaf count).
    let mut by_root_arity: BTreeMap<(Edge, usize), Vec<(Subtree, Vec<Edge>)>> = BTreeMap::new();
    for st in subtrees(target, None) {
        let leaves = st.leaves();
        by_root_arity
            .entry((st.root_edge, leaves.len()))
            .or_default()
            .push((st, leaves));
    }

    let mut results = Vec::new();
    // Vertices in root-up order: every vertex is visited after the vertex
    // below its output edge.
    let order = root_up_order(source);
    for root_image in target.edges() {
        let mut edge_map: Vec<Option<Edge>> = vec![None; source.edge_count()];
        edge_map[source.root().ix()] = Some(root_image);
        let mut vertex_map: Vec<Option<Subtree>> = vec![None; source.vertex_count()];
        extend(
            source,
            &tgt,
            &by_root_arity,
            &order,
            0,
            &mut edge_map,
            &mut vertex_map,
            &mut results,
            &src,
        );
    }
    results
}

fn root_up_order(t: &Tree) -> Vec<Vert> {
    let mut order = Vec::new();
    let mut stack = vec![t.root()];
    while let Some(e) = stack.pop() {
        if let Some(v) = t.above(e) {
            order.push(v);
            stack.extend(t.vertex(v).inputs.iter().copied());
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    source: &Tree,
    tgt: &Arc<Tree>,
    by_root_arity: &BTreeMap<(Edge, usize), Vec<(Subtree, Vec<Edge>)>>,
    order: &[Vert],
    k: usize,
    edge_map: &mut Vec<Option<Edge>>,
    vertex_map: &mut Vec<Option<Subtree>>,
    results: &mut Vec<OmegaMorphism>,
    src: &Arc<Tree>,
) {
    if k == order.len() {
        results.push(OmegaMorphism {
            source: src.clone(),
            target: tgt.clone(),
            edge_map: edge_map.iter().map(|e| e.unwrap()).collect(),
            vertex_map: vertex_map.iter().map(|s| s.clone().unwrap()).collect(),
        });
        return;
    }
    let v = order[k];
    let vx = source.vertex(v);
    let out_img = edge_map[vx.output.ix()].unwrap();
    let arity = vx.inputs.len();
    let empty = Vec::new();
    let candidates = by_root_arity.get(&(out_img, arity)).unwrap_or(&empty);
    for (st, leaves) in candidates {
        // Assign the ordered inputs of v to the leaves of st, in every order.
        for perm in permutations(leaves.len()) {
            for (slot, &leaf_pos) in perm.iter().enumerate() {
                edge_map[vx.inputs[slot].ix()] = Some(leaves[leaf_pos]);
            }
            vertex_map[v.ix()] = Some(st.clone());
            extend(
                source, tgt, by_root_arity, order, k + 1, edge_map, vertex_map, results, src,
            );
            for &d in &vx.inputs {
                edge_map[d.ix()] = None;
            }
            vertex_map[v.ix()] = None;
        }
    }
}

/// All permutations of `0..n`, in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Automorphisms of a tree.
pub fn automorphisms(t: &Tree) -> Vec<OmegaMorphism> {
    hom_omega(t, t).into_iter().filter(|m| m.is_iso()).collect()
}

/// The elementary morphisms attached to a tree: inner faces and outer faces
/// into it, and the degeneracies collapsing one of its unary vertices.
pub struct ElementaryMorphisms {
    /// For each inner edge `e`, the mono contracting it.
    pub inner_faces: Vec<(Edge, OmegaMorphism)>,
    /// Monos from trees with exactly one vertex fewer.
    pub outer_faces: Vec<OmegaMorphism>,
    /// For each unary vertex `s`, the epi deleting it.
    pub degeneracies: Vec<(Vert, OmegaMorphism)>,
}

/// The tree obtained by contracting the inner edge `e`, together with the
/// face mono into `t`. Edge indices of the contracted tree follow `t` with
/// `e` removed.
pub fn inner_face(t: &Tree, e: Edge) -> Result<(Tree, OmegaMorphism)> {
    if !t.is_inner(e) {
        return Err(Error::Tree(format!("edge {} is not inner", t.name(e))));
    }
    let up = t.above(e).unwrap();
    let down = t.below(e).unwrap();
    // Edge e disappears; all other edges keep their names.
    let mut old_of_new: Vec<Edge> = Vec::new();
    let mut new_of_old: Vec<Option<usize>> = vec![None; t.edge_count()];
    for d in t.edges() {
        if d != e {
            new_of_old[d.ix()] = Some(old_of_new.len());
            old_of_new.push(d);
        }
    }
    let names: Vec<String> = old_of_new.iter().map(|&d| t.name(d).to_string()).collect();
    let mut vertices: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut merged_index = None;
    for v in t.verts() {
        if v == up {
            continue;
        }
        let vx = t.vertex(v);
        if v == down {
            // Splice the inputs of `up` where `e` used to sit.
            let mut inputs = Vec::new();
            for &d in &vx.inputs {
                if d == e {
                    inputs.extend(t.vertex(up).inputs.iter().map(|x| new_of_old[x.ix()].unwrap()));
                } else {
                    inputs.push(new_of_old[d.ix()].unwrap());
                }
            }
            merged_index = Some(vertices.len());
            vertices.push((inputs, new_of_old[vx.output.ix()].unwrap()));
        } else {
            vertices.push((
                vx.inputs.iter().map(|d| new_of_old[d.ix()].unwrap()).collect(),
                new_of_old[vx.output.ix()].unwrap(),
            ));
        }
    }
    let contracted = Tree::new(names, vertices, new_of_old[t.root().ix()].unwrap())?;
    let src = Arc::new(contracted.clone());
    let tgt = Arc::new(t.clone());
    let edge_map: Vec<Edge> = old_of_new.clone();
    let mut vertex_map = Vec::new();
    let mut vi = 0usize;
    for v in t.verts() {
        if v == up {
            continue;
        }
        if Some(vi) == merged_index {
            vertex_map.push(Subtree {
                host: tgt.clone(),
                root_edge: t.vertex(down).output,
                verts: {
                    let mut vs = vec![up, down];
                    vs.sort();
                    vs
                },
            });
        } else {
            vertex_map.push(Subtree {
                host: tgt.clone(),
                root_edge: t.vertex(v).output,
                verts: vec![v],
            });
        }
        vi += 1;
    }
    Ok((
        contracted.clone(),
        OmegaMorphism {
            source: src,
            target: tgt,
            edge_map,
            vertex_map,
        },
    ))
}

/// The epi collapsing the unary vertex `s` of `t`, together with its target
/// tree. The input and output edges of `s` are merged; the merged edge keeps
/// the name of the output edge.
pub fn degeneracy(t: &Tree, s: Vert) -> Result<(Tree, OmegaMorphism)> {
    if t.vertex(s).inputs.len() != 1 {
        return Err(Error::Tree("degeneracies collapse unary vertices".into()));
    }
    let kept_out = t.vertex(s).output;
    let gone_in = t.vertex(s).inputs[0];
    let mut old_of_new: Vec<Edge> = Vec::new();
    let mut new_of_old: Vec<Option<usize>> = vec![None; t.edge_count()];
    for d in t.edges() {
        if d != gone_in {
            new_of_old[d.ix()] = Some(old_of_new.len());
            old_of_new.push(d);
        }
    }
    new_of_old[gone_in.ix()] = new_of_old[kept_out.ix()];
    let names: Vec<String> = old_of_new.iter().map(|&d| t.name(d).to_string()).collect();
    let mut vertices = Vec::new();
    for v in t.verts() {
        if v == s {
            continue;
        }
        let vx = t.vertex(v);
        vertices.push((
            vx.inputs.iter().map(|d| new_of_old[d.ix()].unwrap()).collect(),
            new_of_old[vx.output.ix()].unwrap(),
        ));
    }
    let collapsed = Tree::new(names, vertices, new_of_old[t.root().ix()].unwrap())?;
    let src = Arc::new(t.clone());
    let tgt = Arc::new(collapsed.clone());
    let edge_map: Vec<Edge> = t
        .edges()
        .map(|d| Edge(new_of_old[d.ix()].unwrap() as u32))
        .collect();
    let mut vertex_map = Vec::new();
    let mut kept = 0u32;
    for v in t.verts() {
        if v == s {
            vertex_map.push(Subtree::bare(tgt.clone(), edge_map[kept_out.ix()]));
        } else {
            vertex_map.push(Subtree {
                host: tgt.clone(),
                root_edge: Edge(new_of_old[t.vertex(v).output.ix()].unwrap() as u32),
                verts: vec![Vert(kept)],
            });
            kept += 1;
        }
    }
    Ok((
        collapsed,
        OmegaMorphism {
            source: src,
            target: tgt,
            edge_map,
            vertex_map,
        },
    ))
}

pub fn elementary_morphisms(t: &Tree) -> ElementaryMorphisms {
    let inner_faces = t
        .inner_edges()
        .into_iter()
        .map(|e| (e, inner_face(t, e).unwrap().1))
        .collect();
    let tgt = Arc::new(t.clone());
    let mut outer_faces = Vec::new();
    if t.vertex_count() >= 1 {
        for st in subtrees(t, None) {
            if st.vertex_count() + 1 != t.vertex_count() {
                continue;
            }
            let (sub, edges) = st.materialize();
            let src = Arc::new(sub.clone());
            let edge_map = edges;
            let vertex_map = st
                .verts
                .iter()
                .map(|&v| Subtree {
                    host: tgt.clone(),
                    root_edge: t.vertex(v).output,
                    verts: vec![v],
                })
                .collect();
            outer_faces.push(OmegaMorphism {
                source: src,
                target: tgt.clone(),
                edge_map,
                vertex_map,
            });
        }
    }
    let degeneracies = t
        .verts()
        .filter(|&v| t.vertex(v).inputs.len() == 1)
        .map(|v| (v, degeneracy(t, v).unwrap().1))
        .collect();
    ElementaryMorphisms {
        inner_faces,
        outer_faces,
        degeneracies,
    }
}

/// Factors a morphism as a split epimorphism followed by a monomorphism.
/// The epi collapses exactly the vertices sent to bare edges.
pub fn factorize_epi_mono(phi: &OmegaMorphism) -> (OmegaMorphism, OmegaMorphism) {
    let s = &phi.source;
    // Union-find over source edges: merge across collapsed unary vertices.
    let mut parent: Vec<usize> = (0..s.edge_count()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    let mut collapsed = vec![false; s.vertex_count()];
    for v in s.verts() {
        if phi.vertex_map[v.ix()].is_bare() {
            collapsed[v.ix()] = true;
            let a = s.vertex(v).inputs[0].ix();
            let b = s.vertex(v).output.ix();
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            // Keep the class rooted toward the output edge.
            parent[ra] = rb;
        }
    }
    // Build the intermediate tree.
    let mut class_of: Vec<usize> = (0..s.edge_count()).map(|i| find(&mut parent, i)).collect();
    let mut reps: Vec<usize> = class_of.clone();
    reps.sort();
    reps.dedup();
    let new_ix: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    for c in &mut class_of {
        *c = new_ix[c];
    }
    let names: Vec<String> = reps.iter().map(|&r| s.name(Edge(r as u32)).to_string()).collect();
    let vertices: Vec<(Vec<usize>, usize)> = s
        .verts()
        .filter(|v| !collapsed[v.ix()])
        .map(|v| {
            let vx = s.vertex(v);
            (
                vx.inputs.iter().map(|d| class_of[d.ix()]).collect(),
                class_of[vx.output.ix()],
            )
        })
        .collect();
    let mid = Tree::new(names, vertices, class_of[s.root().ix()]).unwrap();
    let mid_arc = Arc::new(mid);

    // Epi part.
    let epi_edge_map: Vec<Edge> = (0..s.edge_count()).map(|i| Edge(class_of[i] as u32)).collect();
    let mut epi_vertex_map = Vec::new();
    let mut kept = 0u32;
    for v in s.verts() {
        if collapsed[v.ix()] {
            epi_vertex_map.push(Subtree::bare(
                mid_arc.clone(),
                epi_edge_map[s.vertex(v).output.ix()],
            ));
        } else {
            epi_vertex_map.push(Subtree {
                host: mid_arc.clone(),
                root_edge: epi_edge_map[s.vertex(v).output.ix()],
                verts: vec![Vert(kept)],
            });
            kept += 1;
        }
    }
    let epi = OmegaMorphism {
        source: s.clone(),
        target: mid_arc.clone(),
        edge_map: epi_edge_map,
        vertex_map: epi_vertex_map,
    };

    // Mono part.
    let mono_edge_map: Vec<Edge> = reps.iter().map(|&r| phi.edge_map[r]).collect();
    let mono_vertex_map: Vec<Subtree> = s
        .verts()
        .filter(|v| !collapsed[v.ix()])
        .map(|v| phi.vertex_map[v.ix()].clone())
        .collect();
    let mono = OmegaMorphism {
        source: mid_arc,
        target: phi.target.clone(),
        edge_map: mono_edge_map,
        vertex_map: mono_vertex_map,
    };
    (epi, mono)
}

/// One tree per isomorphism class, every vertex of arity at most
/// `max_arity`, at most `max_vertices` vertices. Trees are produced with
/// canonically ordered children and fresh edge names.
pub fn enumerate_trees(max_vertices: usize, max_arity: usize) -> Vec<Tree> {
    // exactly[n] = canonical trees with exactly n vertices.
    let mut exactly: Vec<Vec<Tree>> = vec![vec![Tree::eta()]];
    for n in 1..=max_vertices {
        let mut level: Vec<Tree> = Vec::new();
        for arity in 0..=max_arity {
            // Multisets of `arity` earlier trees with total vertex count n-1,
            // non-decreasing by canonical code.
            let mut stack: Vec<(Vec<&Tree>, usize)> = vec![(vec![], n - 1)];
            let mut complete: Vec<Vec<&Tree>> = Vec::new();
            while let Some((chosen, rest)) = stack.pop() {
                if chosen.len() == arity {
                    if rest == 0 {
                        complete.push(chosen);
                    }
                    continue;
                }
                for (sz, trees) in exactly.iter().enumerate() {
                    if sz > rest {
                        break;
                    }
                    for t in trees {
                        if let Some(last) = chosen.last() {
                            if t.code() < last.code() {
                                continue;
                            }
                        }
                        let mut next = chosen.clone();
                        next.push(t);
                        stack.push((next, rest - sz));
                    }
                }
            }
            for children in complete {
                level.push(assemble(&children));
            }
        }
        // Distinct multisets give distinct codes, but dedupe defensively.
        level.sort_by(|a, b| a.code().cmp(b.code()));
        level.dedup_by(|a, b| a.code() == b.code());
        exactly.push(level);
    }
    exactly.into_iter().flatten().collect()
}

/// Root vertex with the given child trees grafted onto its inputs.
fn assemble(children: &[&Tree]) -> Tree {
    let mut names = vec!["e0".to_string()];
    let mut vertices: Vec<(Vec<usize>, usize)> = vec![(vec![], 0)];
    for child in children {
        let base = names.len();
        let map: Vec<usize> = (0..child.edge_count()).map(|i| base + i).collect();
        for e in child.edges() {
            names.push(format!("e{}", names.len()));
            let _ = e;
        }
        vertices[0].0.push(base + child.root().ix());
        for v in child.verts() {
            let vx = child.vertex(v);
            vertices.push((
                vx.inputs.iter().map(|d| map[d.ix()]).collect(),
                map[vx.output.ix()],
            ));
        }
    }
    Tree::new(names, vertices, 0).unwrap()
}

/// Decomposes a morphism into elementary pieces: degeneracies first, then an
/// isomorphism, then faces. The returned chain lists the first-applied
/// morphism first, and its composite equals `phi`.
pub fn elementary_decomposition(phi: &OmegaMorphism) -> Vec<OmegaMorphism> {
    let mut front: Vec<OmegaMorphism> = Vec::new();
    let mut back: Vec<OmegaMorphism> = Vec::new();
    let mut current = phi.clone();
    // Peel degeneracies off the source: current = rest . sigma.
    loop {
        let collapsed = current
            .source
            .verts()
            .find(|v| current.vertex_map[v.ix()].is_bare());
        match collapsed {
            None => break,
            Some(v) => {
                let (mid, sigma) = degeneracy(&current.source, v).unwrap();
                let mid_arc = Arc::new(mid);
                let mut edge_map = vec![Edge(0); mid_arc.edge_count()];
                for d in current.source.edges() {
                    edge_map[sigma.edge_map[d.ix()].ix()] = current.edge_map[d.ix()];
                }
                let rest = OmegaMorphism::from_edge_map(mid_arc, current.target.clone(), edge_map)
                    .expect("degeneracy peeling produced an invalid morphism");
                front.push(sigma);
                current = rest;
            }
        }
    }
    // Peel inner faces off the target (vertices mapping onto several target
    // vertices): current = face . rest.
    loop {
        let split = current
            .source
            .verts()
            .find(|v| current.vertex_map[v.ix()].vertex_count() >= 2);
        match split {
            None => break,
            Some(v) => {
                let st = &current.vertex_map[v.ix()];
                let e = st.inner_edges()[0];
                let (contracted, face) = inner_face(&current.target, e).unwrap();
                let contracted_arc = Arc::new(contracted);
                let mut to_contracted = vec![Edge(0); current.target.edge_count()];
                for d in contracted_arc.edges() {
                    to_contracted[face.edge_map[d.ix()].ix()] = d;
                }
                let edge_map: Vec<Edge> = current
                    .edge_map
                    .iter()
                    .map(|&d| to_contracted[d.ix()])
                    .collect();
                let rest =
                    OmegaMorphism::from_edge_map(current.source.clone(), contracted_arc, edge_map)
                        .expect("inner face peeling produced an invalid morphism");
                back.push(face);
                current = rest;
            }
        }
    }
    // Peel outer faces: current = outer . rest.
    while !current.is_surjection() {
        let hit = {
            let mut hit = vec![false; current.target.vertex_count()];
            for st in &current.vertex_map {
                for &v in &st.verts {
                    hit[v.ix()] = true;
                }
            }
            hit
        };
        let elem = elementary_morphisms(&current.target);
        let mut advanced = false;
        for outer in elem.outer_faces {
            let missing: Vec<Vert> = current
                .target
                .verts()
                .filter(|v| !outer.vertex_image().contains(v))
                .collect();
            if missing.len() == 1 && !hit[missing[0].ix()] {
                let oimg = outer.edge_image();
                if current.edge_image().iter().all(|e| oimg.contains(e)) {
                    let mut to_sub: BTreeMap<Edge, Edge> = BTreeMap::new();
                    for d in outer.source.edges() {
                        to_sub.insert(outer.edge_map[d.ix()], d);
                    }
                    let edge_map: Vec<Edge> =
                        current.edge_map.iter().map(|&d| to_sub[&d]).collect();
                    let rest = OmegaMorphism::from_edge_map(
                        current.source.clone(),
                        outer.source.clone(),
                        edge_map,
                    )
                    .expect("outer face peeling produced an invalid morphism");
                    back.push(outer);
                    current = rest;
                    advanced = true;
                    break;
                }
            }
        }
        assert!(advanced, "no outer face contains a non-surjective mono");
    }
    assert!(current.is_iso(), "decomposition remainder must be an iso");
    // phi = back[0] . back[1] . ... . iso . front[n] . ... . front[0].
    let mut chain = front;
    chain.push(current);
    chain.extend(back.into_iter().rev());
    chain
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The two-vertex tree: binary vertex u on top of binary vertex b, with
    /// inner edge t. Edges: r, t, l3 (inputs of b are t, l3), l1, l2.
    pub fn t2() -> Tree {
        Tree::new(
            vec!["r".into(), "t".into(), "l3".into(), "l1".into(), "l2".into()],
            vec![(vec![3, 4], 1), (vec![1, 2], 0)],
            0,
        )
        .unwrap()
    }

    #[test]
    fn eta_shape() {
        let eta = Tree::eta();
        assert_eq!(eta.edge_count(), 1);
        assert_eq!(eta.vertex_count(), 0);
        assert_eq!(eta.code(), "L");
    }

    #[test]
    fn rejects_malformed() {
        // Two vertices sharing an output edge.
        assert!(Tree::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![(vec![1], 0), (vec![2], 0)],
            0
        )
        .is_err());
        // Disconnected edge.
        assert!(Tree::new(vec!["a".into(), "b".into()], vec![], 0).is_err());
        // Root below a vertex.
        assert!(Tree::new(vec!["a".into(), "b".into()], vec![(vec![0], 1)], 0).is_err());
    }

    #[test]
    fn subtree_counts() {
        let eta = Tree::eta();
        assert_eq!(subtrees(&eta, None).len(), 1);
        let c2 = Tree::corolla(2);
        // 3 bare edges + the whole corolla.
        assert_eq!(subtrees(&c2, None).len(), 4);
        let t = t2();
        // 5 bare edges + {u} + {b} + {u,b}.
        assert_eq!(subtrees(&t, None).len(), 8);
    }

    #[test]
    fn subtree_profile_lookup() {
        let c2 = Tree::corolla(2);
        let l1 = c2.edge_by_name("l1").unwrap();
        let l2 = c2.edge_by_name("l2").unwrap();
        let r = c2.edge_by_name("r").unwrap();
        let st = subtree_at(&c2, &[l1, l2], r).unwrap();
        assert_eq!(st.vertex_count(), 1);
        let st = subtree_at(&c2, &[l2, l1], r).unwrap();
        assert_eq!(st.vertex_count(), 1);
        assert!(subtree_at(&c2, &[l1], r).is_none());
        // Distinctness requirement.
        assert!(subtree_at(&c2, &[l1, l1], r).is_none());
    }

    #[test]
    fn hom_eta_counts_edges() {
        let t = t2();
        assert_eq!(hom_omega(&Tree::eta(), &t).len(), t.edge_count());
        assert_eq!(hom_omega(&Tree::corolla(1), &Tree::eta()).len(), 1);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&Tree::eta()).len(), 1);
        assert_eq!(automorphisms(&Tree::corolla(2)).len(), 2);
        assert_eq!(automorphisms(&Tree::corolla(3)).len(), 6);
        assert_eq!(automorphisms(&t2()).len(), 2);
    }

    #[test]
    fn elementary_morphism_counts() {
        let eta = Tree::eta();
        let em = elementary_morphisms(&eta);
        assert!(em.inner_faces.is_empty());
        assert!(em.outer_faces.is_empty());
        assert!(em.degeneracies.is_empty());

        let t = t2();
        let em = elementary_morphisms(&t);
        assert_eq!(em.inner_faces.len(), 1);
        // Remove the top vertex, or remove the root vertex keeping the branch
        // above t.
        assert_eq!(em.outer_faces.len(), 2);
        assert_eq!(em.degeneracies.len(), 0);

        let c1 = Tree::corolla(1);
        let em = elementary_morphisms(&c1);
        assert_eq!(em.inner_faces.len(), 0);
        assert_eq!(em.outer_faces.len(), 2);
        assert_eq!(em.degeneracies.len(), 1);
    }

    #[test]
    fn factorization_recomposes() {
        let c1 = Tree::corolla(1);
        let c2 = Tree::corolla(2);
        for phi in hom_omega(&c1, &c2) {
            let (epi, mono) = factorize_epi_mono(&phi);
            assert!(mono.is_mono());
            assert!(epi.is_split_epi());
            assert_eq!(mono.compose(&epi), phi);
        }
        // The collapse C1 -> eta factors as itself then the identity.
        let sigma = &hom_omega(&c1, &Tree::eta())[0];
        let (epi, mono) = factorize_epi_mono(sigma);
        assert!(epi.target.is_isomorphic(&Tree::eta()));
        assert!(mono.is_iso());
    }

    #[test]
    fn enumeration_small_counts() {
        assert_eq!(enumerate_trees(0, 3).len(), 1);
        assert_eq!(enumerate_trees(1, 2).len(), 1 + 3);
        // eta; C0..C2; six two-vertex shapes (unary or binary root, with a
        // one-vertex tree on one input).
        assert_eq!(enumerate_trees(2, 2).len(), 1 + 3 + 6);
        let all = enumerate_trees(4, 3);
        let mut codes: Vec<&str> = all.iter().map(|t| t.code()).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), all.len());
    }

    #[test]
    fn decomposition_recomposes() {
        let c1 = Tree::corolla(1);
        let t = t2();
        for (s, t) in [(&c1, &t), (&t, &t), (&c1, &c1)] {
            for phi in hom_omega(s, t) {
                let chain = elementary_decomposition(&phi);
                let mut comp = chain[0].clone();
                for m in &chain[1..] {
                    comp = m.compose(&comp);
                }
                assert_eq!(comp, phi);
            }
        }
    }
}
