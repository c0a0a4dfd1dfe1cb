//! Attaching a free operation to an operad.
//!
//! Operations of the extended operad are canonical-form decorated trees:
//! vertices carry either a base operation or the freely added generator, no
//! inner edge has base labels at both ends, and no unary vertex carries an
//! identity. The multiplicity of an operation counts its generator vertices
//! and is invariant under rewriting.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::operad::{FiniteOperad, OpId, Signature};
use crate::tree::permutations as perms;

/// A node of a planar decorated tree. The planar order of a node's children
/// matches the input slots of its label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum DecNode {
    /// An input of the whole operation, carrying its slot index.
    Leaf(usize),
    /// A base-operad operation applied to the children.
    Base(OpId, Vec<DecNode>),
    /// The free generator applied to the children.
    Free(Vec<DecNode>),
}

/// An operation of the extended operad, in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum DecOp {
    Id(usize),
    Tree(DecNode),
}

/// The operad obtained by freely attaching one operation of the given
/// profile. Operations are enumerated lazily per signature and multiplicity
/// bound.
pub struct FreeCell {
    pub base: FiniteOperad,
    pub gen_inputs: Vec<usize>,
    pub gen_output: usize,
    cache: Mutex<BTreeMap<(Signature, usize), Vec<DecOp>>>,
}

impl FreeCell {
    pub fn new(base: FiniteOperad, gen_inputs: Vec<usize>, gen_output: usize) -> Result<FreeCell> {
        let ncol = base.colours.len();
        if gen_inputs.iter().any(|&c| c >= ncol) || gen_output >= ncol {
            return Err(Error::Operad("generator profile colour unknown".into()));
        }
        Ok(FreeCell {
            base,
            gen_inputs,
            gen_output,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn gen_arity(&self) -> usize {
        self.gen_inputs.len()
    }

    /// The generator itself, as an operation.
    pub fn generator(&self) -> DecOp {
        self.canonical_form(&DecOp::Tree(DecNode::Free(
            (0..self.gen_arity()).map(DecNode::Leaf).collect(),
        )))
    }

    /// Number of generator vertices.
    pub fn multiplicity(&self, op: &DecOp) -> usize {
        match op {
            DecOp::Id(_) => 0,
            DecOp::Tree(node) => node_multiplicity(node),
        }
    }

    /// Output colour of an operation.
    pub fn output_colour(&self, op: &DecOp) -> usize {
        match op {
            DecOp::Id(c) => *c,
            DecOp::Tree(node) => self.node_output(node),
        }
    }

    fn node_output(&self, node: &DecNode) -> usize {
        match node {
            DecNode::Leaf(_) => panic!("a bare leaf has no output"),
            DecNode::Base(p, _) => self.base.sig(*p).output,
            DecNode::Free(_) => self.gen_output,
        }
    }

    /// Input colours, indexed by slot.
    pub fn input_colours(&self, op: &DecOp) -> Vec<usize> {
        match op {
            DecOp::Id(c) => vec![*c],
            DecOp::Tree(node) => {
                let mut slots = BTreeMap::new();
                self.collect_leaf_colours(node, &mut slots);
                (0..slots.len()).map(|i| slots[&i]).collect()
            }
        }
    }

    pub fn signature(&self, op: &DecOp) -> Signature {
        Signature {
            inputs: self.input_colours(op),
            output: self.output_colour(op),
        }
    }

    fn collect_leaf_colours(&self, node: &DecNode, out: &mut BTreeMap<usize, usize>) {
        let (children, slot_colours): (&[DecNode], Vec<usize>) = match node {
            DecNode::Leaf(_) => return,
            DecNode::Base(p, ch) => (ch, self.base.sig(*p).inputs.clone()),
            DecNode::Free(ch) => (ch, self.gen_inputs.clone()),
        };
        for (i, child) in children.iter().enumerate() {
            match child {
                DecNode::Leaf(slot) => {
                    out.insert(*slot, slot_colours[i]);
                }
                _ => self.collect_leaf_colours(child, out),
            }
        }
    }

    pub fn arity(&self, op: &DecOp) -> usize {
        self.input_colours(op).len()
    }

    /// Canonical form: compose adjacent base-labelled vertices, delete
    /// identity-labelled unary vertices, then normalize the planar
    /// presentation of base vertices.
    pub fn canonical_form(&self, op: &DecOp) -> DecOp {
        match op {
            DecOp::Id(c) => DecOp::Id(*c),
            DecOp::Tree(node) => {
                let reduced = self.reduce(node.clone());
                match reduced {
                    DecNode::Leaf(_) => {
                        // The whole tree collapsed to its input edge.
                        DecOp::Id(self.output_colour(op))
                    }
                    other => DecOp::Tree(self.normalize(other)),
                }
            }
        }
    }

    /// Applies the two rewrite rules everywhere, bottom-up.
    fn reduce(&self, node: DecNode) -> DecNode {
        match node {
            DecNode::Leaf(s) => DecNode::Leaf(s),
            DecNode::Free(children) => {
                DecNode::Free(children.into_iter().map(|c| self.reduce(c)).collect())
            }
            DecNode::Base(p, children) => {
                let mut children: Vec<DecNode> =
                    children.into_iter().map(|c| self.reduce(c)).collect();
                // Identity deletion.
                if self.base.is_identity(p) {
                    return children.pop().unwrap();
                }
                // Merge base-labelled children into this vertex.
                let mut label = p;
                let mut i = 0;
                while i < children.len() {
                    if let DecNode::Base(q, _) = &children[i] {
                        let q = *q;
                        let DecNode::Base(_, grand) = children.remove(i) else {
                            unreachable!()
                        };
                        label = self
                            .base
                            .compose(label, i, q)
                            .expect("base composition within cap");
                        for (k, g) in grand.into_iter().enumerate() {
                            children.insert(i + k, g);
                        }
                        // Stay at position i: the spliced child may itself
                        // be base-labelled only if reduction missed it, and
                        // grandchildren are already reduced, so move on.
                        continue;
                    }
                    i += 1;
                }
                DecNode::Base(label, children)
            }
        }
    }

    /// Chooses the minimal planar presentation: base vertices may reorder
    /// their children if the label is adjusted by the symmetric action.
    fn normalize(&self, node: DecNode) -> DecNode {
        match node {
            DecNode::Leaf(s) => DecNode::Leaf(s),
            DecNode::Free(children) => {
                DecNode::Free(children.into_iter().map(|c| self.normalize(c)).collect())
            }
            DecNode::Base(p, children) => {
                let children: Vec<DecNode> =
                    children.into_iter().map(|c| self.normalize(c)).collect();
                let n = children.len();
                let mut best: Option<DecNode> = None;
                for perm in perms(n) {
                    let relabel = self.base.act(p, &perm);
                    let reordered: Vec<DecNode> =
                        perm.iter().map(|&j| children[j].clone()).collect();
                    let cand = DecNode::Base(relabel, reordered);
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
                best.unwrap()
            }
        }
    }

    /// Partial composition, in canonical form.
    pub fn compose(&self, p: &DecOp, i: usize, q: &DecOp) -> DecOp {
        let composed = match (p, q) {
            (DecOp::Id(_), _) => q.clone(),
            (_, DecOp::Id(_)) => p.clone(),
            (DecOp::Tree(pn), DecOp::Tree(qn)) => {
                let qa = self.arity(q);
                DecOp::Tree(substitute(pn, i, qn, qa))
            }
        };
        self.canonical_form(&composed)
    }

    /// The permuted operation: input `i` of the result is input `perm[i]`.
    pub fn act(&self, op: &DecOp, perm: &[usize]) -> DecOp {
        match op {
            DecOp::Id(c) => DecOp::Id(*c),
            DecOp::Tree(node) => {
                let mut inv = vec![0usize; perm.len()];
                for (i, &j) in perm.iter().enumerate() {
                    inv[j] = i;
                }
                self.canonical_form(&DecOp::Tree(relabel_slots(node, &inv)))
            }
        }
    }

    /// All canonical-form operations with the given signature and at most
    /// `max_mult` generator vertices.
    pub fn enumerate_ops(&self, sig: &Signature, max_mult: usize) -> Vec<DecOp> {
        let key = (sig.clone(), max_mult);
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let mut out: Vec<DecOp> = Vec::new();
        if sig.arity() == 1 && sig.inputs[0] == sig.output {
            out.push(DecOp::Id(sig.output));
        }
        // Planar fragments with the right output colour, then all
        // slot-assignments matching the input colours.
        for (frag, leaf_colours) in self.fragments(sig.output, max_mult, false) {
            if leaf_colours.len() != sig.arity() {
                continue;
            }
            let mut assignment = vec![usize::MAX; sig.arity()];
            let mut used = vec![false; leaf_colours.len()];
            assign_slots(
                sig,
                &leaf_colours,
                0,
                &mut assignment,
                &mut used,
                &mut |assignment| {
                    let filled = fill_slots(&frag, &mut assignment.iter().copied());
                    let canon = self.canonical_form(&DecOp::Tree(filled));
                    if !out.contains(&canon) {
                        out.push(canon);
                    }
                },
            );
        }
        out.sort();
        out.dedup();
        self.cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Planar decorated trees with at least one vertex, output colour `c`,
    /// at most `budget` generator vertices, together with their planar leaf
    /// colour listing. Leaves are unassigned.
    fn fragments(&self, c: usize, budget: usize, forbid_base: bool) -> Vec<(DecNode, Vec<usize>)> {
        let mut out = Vec::new();
        // Generator root.
        if budget >= 1 && self.gen_output == c {
            let child_options: Vec<Vec<(DecNode, Vec<usize>, usize)>> = self
                .gen_inputs
                .iter()
                .map(|&cc| self.child_options(cc, budget - 1, false))
                .collect();
            for combo in budgeted_product(&child_options, budget - 1) {
                let mut leaves = Vec::new();
                let mut children = Vec::new();
                for (node, ls, _) in combo {
                    children.push(node);
                    leaves.extend(ls);
                }
                out.push((DecNode::Free(children), leaves));
            }
        }
        // Base roots: non-identity operations with output c.
        if !forbid_base {
            for p in 0..self.base.op_count() {
                if self.base.is_identity(p) || self.base.sig(p).output != c {
                    continue;
                }
                let child_options: Vec<Vec<(DecNode, Vec<usize>, usize)>> = self
                    .base
                    .sig(p)
                    .inputs
                    .clone()
                    .iter()
                    .map(|&cc| self.child_options(cc, budget, true))
                    .collect();
                for combo in budgeted_product(&child_options, budget) {
                    let mut leaves = Vec::new();
                    let mut children = Vec::new();
                    for (node, ls, _) in combo {
                        children.push(node);
                        leaves.extend(ls);
                    }
                    out.push((DecNode::Base(p, children), leaves));
                }
            }
        }
        out
    }

    /// A child position is a bare leaf or a fragment.
    fn child_options(
        &self,
        c: usize,
        budget: usize,
        forbid_base: bool,
    ) -> Vec<(DecNode, Vec<usize>, usize)> {
        let mut out = vec![(DecNode::Leaf(usize::MAX), vec![c], 0)];
        for (frag, leaves) in self.fragments(c, budget, forbid_base) {
            let used = node_multiplicity(&frag);
            out.push((frag, leaves, used));
        }
        out
    }

    /// Serializes an operation canonically.
    pub fn op_name(&self, op: &DecOp) -> String {
        match op {
            DecOp::Id(c) => format!("1_{}", self.base.colours[*c]),
            DecOp::Tree(node) => self.node_name(node),
        }
    }

    fn node_name(&self, node: &DecNode) -> String {
        match node {
            DecNode::Leaf(s) => format!("#{s}"),
            DecNode::Base(p, ch) => format!(
                "({} {})",
                self.base.name(*p),
                ch.iter().map(|c| self.node_name(c)).collect::<Vec<_>>().join(" ")
            ),
            DecNode::Free(ch) => format!(
                "(f {})",
                ch.iter().map(|c| self.node_name(c)).collect::<Vec<_>>().join(" ")
            ),
        }
    }
}

fn node_multiplicity(node: &DecNode) -> usize {
    match node {
        DecNode::Leaf(_) => 0,
        DecNode::Base(_, ch) => ch.iter().map(node_multiplicity).sum(),
        DecNode::Free(ch) => 1 + ch.iter().map(node_multiplicity).sum::<usize>(),
    }
}

/// Substitutes `q` (of arity `qa`) for slot `i` of `p`, renumbering slots.
fn substitute(p: &DecNode, i: usize, q: &DecNode, qa: usize) -> DecNode {
    match p {
        DecNode::Leaf(s) => {
            if *s == i {
                shift_slots(q, i)
            } else if *s > i {
                DecNode::Leaf(*s + qa - 1)
            } else {
                DecNode::Leaf(*s)
            }
        }
        DecNode::Base(op, ch) => DecNode::Base(
            *op,
            ch.iter().map(|c| substitute(c, i, q, qa)).collect(),
        ),
        DecNode::Free(ch) => {
            DecNode::Free(ch.iter().map(|c| substitute(c, i, q, qa)).collect())
        }
    }
}

fn shift_slots(node: &DecNode, offset: usize) -> DecNode {
    match node {
        DecNode::Leaf(s) => DecNode::Leaf(*s + offset),
        DecNode::Base(op, ch) => {
            DecNode::Base(*op, ch.iter().map(|c| shift_slots(c, offset)).collect())
        }
        DecNode::Free(ch) => DecNode::Free(ch.iter().map(|c| shift_slots(c, offset)).collect()),
    }
}

fn relabel_slots(node: &DecNode, map: &[usize]) -> DecNode {
    match node {
        DecNode::Leaf(s) => DecNode::Leaf(map[*s]),
        DecNode::Base(op, ch) => {
            DecNode::Base(*op, ch.iter().map(|c| relabel_slots(c, map)).collect())
        }
        DecNode::Free(ch) => DecNode::Free(ch.iter().map(|c| relabel_slots(c, map)).collect()),
    }
}

/// Enumerates bijections `slot -> leaf position` with matching colours.
fn assign_slots(
    sig: &Signature,
    leaf_colours: &[usize],
    slot: usize,
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    emit: &mut impl FnMut(&[usize]),
) {
    if slot == sig.arity() {
        // assignment[slot] = leaf position; emit needs leaf -> slot order.
        let mut leaf_to_slot = vec![usize::MAX; leaf_colours.len()];
        for (s, &pos) in assignment.iter().enumerate() {
            leaf_to_slot[pos] = s;
        }
        emit(&leaf_to_slot);
        return;
    }
    for pos in 0..leaf_colours.len() {
        if !used[pos] && leaf_colours[pos] == sig.inputs[slot] {
            used[pos] = true;
            assignment[slot] = pos;
            assign_slots(sig, leaf_colours, slot + 1, assignment, used, emit);
            used[pos] = false;
        }
    }
}

/// Fills unassigned leaves, in planar order, with the provided slot indices.
fn fill_slots(node: &DecNode, slots: &mut impl Iterator<Item = usize>) -> DecNode {
    match node {
        DecNode::Leaf(_) => DecNode::Leaf(slots.next().expect("slot for every leaf")),
        DecNode::Base(op, ch) => {
            DecNode::Base(*op, ch.iter().map(|c| fill_slots(c, slots)).collect())
        }
        DecNode::Free(ch) => DecNode::Free(ch.iter().map(|c| fill_slots(c, slots)).collect()),
    }
}

/// Products of child options whose generator counts sum within the budget.
fn budgeted_product<'a>(
    options: &'a [Vec<(DecNode, Vec<usize>, usize)>],
    budget: usize,
) -> Vec<Vec<(DecNode, Vec<usize>, usize)>> {
    let mut out: Vec<(Vec<(DecNode, Vec<usize>, usize)>, usize)> = vec![(vec![], 0)];
    for opts in options {
        let mut next = Vec::new();
        for (combo, used) in &out {
            for opt in opts {
                let total = used + opt.2;
                if total <= budget {
                    let mut c = combo.clone();
                    c.push(opt.clone());
                    next.push((c, total));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(c, _)| c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{commutative_operad, discrete_operad, free_operad_on_tree};
    use crate::tree::Tree;

    #[test]
    fn unary_chains() {
        // Base with one colour and only the identity: chains of the
        // generator are the only canonical forms.
        let base = discrete_operad(&["x"], 2);
        let pf = FreeCell::new(base, vec![0], 0).unwrap();
        let sig = Signature {
            inputs: vec![0],
            output: 0,
        };
        let ops = pf.enumerate_ops(&sig, 2);
        assert_eq!(ops.len(), 3); // id, f, f.f
        let f = pf.generator();
        assert_eq!(pf.multiplicity(&f), 1);
        let ff = pf.compose(&f, 0, &f);
        assert_eq!(pf.multiplicity(&ff), 2);
        assert!(ops.contains(&ff));
    }

    #[test]
    fn base_ops_have_multiplicity_zero() {
        let base = free_operad_on_tree(&Tree::corolla(2));
        let r = base.colour_index("r").unwrap();
        let l1 = base.colour_index("l1").unwrap();
        let l2 = base.colour_index("l2").unwrap();
        let pf = FreeCell::new(base.clone(), vec![l1, l2], r).unwrap();
        // Operations with multiplicity 0 at each signature are the base ops.
        for sig in [
            Signature {
                inputs: vec![l1, l2],
                output: r,
            },
            Signature {
                inputs: vec![l2, l1],
                output: r,
            },
            Signature {
                inputs: vec![l1],
                output: l1,
            },
        ] {
            let ops = pf.enumerate_ops(&sig, 0);
            assert_eq!(ops.len(), base.ops_at(&sig).len(), "{sig:?}");
            assert!(ops.iter().all(|op| pf.multiplicity(op) == 0));
        }
    }

    #[test]
    fn canonical_form_composes_base_pairs() {
        let base = commutative_operad(3);
        let pf = FreeCell::new(base.clone(), vec![0, 0], 0).unwrap();
        let mu2 = base.op_by_name("mu2").unwrap();
        // (mu2 (mu2 # #) #) reduces to mu3.
        let t = DecOp::Tree(DecNode::Base(
            mu2,
            vec![
                DecNode::Base(mu2, vec![DecNode::Leaf(0), DecNode::Leaf(1)]),
                DecNode::Leaf(2),
            ],
        ));
        let c = pf.canonical_form(&t);
        let mu3 = base.op_by_name("mu3").unwrap();
        assert_eq!(
            c,
            DecOp::Tree(DecNode::Base(
                mu3,
                vec![DecNode::Leaf(0), DecNode::Leaf(1), DecNode::Leaf(2)]
            ))
        );
        // Idempotent.
        assert_eq!(pf.canonical_form(&c), c);
    }

    #[test]
    fn multiplicity_additive_under_grafting() {
        let base = discrete_operad(&["x"], 3);
        let pf = FreeCell::new(base, vec![0, 0], 0).unwrap();
        let f = pf.generator();
        let g1 = pf.compose(&f, 0, &f);
        assert_eq!(pf.multiplicity(&g1), 2);
        let g2 = pf.compose(&g1, 2, &f);
        assert_eq!(pf.multiplicity(&g2), 3);
        assert_eq!(pf.arity(&g2), 4);
    }

    #[test]
    fn sigma_translates_are_distinct_when_free()
    {
        let base = discrete_operad(&["x", "y"], 2);
        let pf = FreeCell::new(base, vec![0, 1], 0).unwrap();
        let f = pf.generator();
        let sig = pf.signature(&f);
        assert_eq!(sig.inputs, vec![0, 1]);
        let fs = pf.act(&f, &[1, 0]);
        assert_eq!(pf.signature(&fs).inputs, vec![1, 0]);
        assert_ne!(f, fs);
        // Acting twice returns the original.
        assert_eq!(pf.act(&fs, &[1, 0]), f);
    }
}
