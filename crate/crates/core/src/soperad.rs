//! Level-truncated simplicially enriched operads: a levelwise family of
//! finite operads on a fixed colour set, with face and degeneracy maps, plus
//! the decorated free constructions on corollas and trees.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::operad::{
    validate_operad, FiniteOperad, OpId, OperadBuilder, Signature, ValidationReport, Violation,
};
use crate::sset::FinSSet;
use crate::tree::{permutations, subtrees, Edge, Tree, Vert};

/// A simplicial operad truncated at `level_bound`: operads `levels[0..=b]`
/// on a common colour set, with simplicial operators between their
/// operation sets.
#[derive(Clone, Debug)]
pub struct TruncatedSOperad {
    pub level_bound: usize,
    pub levels: Vec<FiniteOperad>,
    /// `faces[m-1][op][i] = d_i(op)` for an op of `levels[m]`.
    pub faces: Vec<Vec<Vec<OpId>>>,
    /// `degens[m][op][i] = s_i(op)` for an op of `levels[m]`.
    pub degens: Vec<Vec<Vec<OpId>>>,
}

impl TruncatedSOperad {
    pub fn colours(&self) -> &[String] {
        &self.levels[0].colours
    }

    pub fn face(&self, m: usize, op: OpId, i: usize) -> OpId {
        self.faces[m - 1][op][i]
    }

    pub fn degen(&self, m: usize, op: OpId, i: usize) -> OpId {
        self.degens[m][op][i]
    }

    /// A discrete simplicial operad: the same operad in every level.
    pub fn discrete(p: &FiniteOperad, level_bound: usize) -> TruncatedSOperad {
        let n = p.op_count();
        TruncatedSOperad {
            level_bound,
            levels: vec![p.clone(); level_bound + 1],
            faces: (1..=level_bound)
                .map(|m| (0..n).map(|op| vec![op; m + 1]).collect())
                .collect(),
            degens: (0..level_bound)
                .map(|m| (0..n).map(|op| vec![op; m + 1]).collect())
                .collect(),
        }
    }

    /// The simplicial set of operations at a signature.
    pub fn op_space(&self, sig: &Signature) -> FinSSet {
        let per_level: Vec<Vec<OpId>> = self
            .levels
            .iter()
            .map(|p| p.ops_at(sig).to_vec())
            .collect();
        let pos: Vec<BTreeMap<OpId, usize>> = per_level
            .iter()
            .map(|ops| ops.iter().enumerate().map(|(i, &o)| (o, i)).collect())
            .collect();
        let labels = per_level
            .iter()
            .enumerate()
            .map(|(m, ops)| {
                ops.iter()
                    .map(|&o| self.levels[m].name(o).to_string())
                    .collect()
            })
            .collect();
        let faces = (1..=self.level_bound)
            .map(|m| {
                per_level[m]
                    .iter()
                    .map(|&o| (0..=m).map(|i| pos[m - 1][&self.face(m, o, i)]).collect())
                    .collect()
            })
            .collect();
        let degens = (0..self.level_bound)
            .map(|m| {
                per_level[m]
                    .iter()
                    .map(|&o| (0..=m).map(|i| pos[m + 1][&self.degen(m, o, i)]).collect())
                    .collect()
            })
            .collect();
        FinSSet::from_tables(self.level_bound, labels, faces, degens)
    }

    /// Whether every operation space passes the bounded Kan filler search.
    pub fn op_spaces_kan(&self) -> bool {
        let mut sigs: Vec<Signature> = Vec::new();
        for lv in &self.levels {
            for sig in lv.signatures() {
                if !sigs.contains(sig) {
                    sigs.push(sig.clone());
                }
            }
        }
        sigs.iter()
            .all(|sig| self.op_space(sig).kan_report().all_horns_fill())
    }
}

/// Levelwise operad axioms plus operator compatibility.
pub fn validate_truncated(p: &TruncatedSOperad) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (m, lv) in p.levels.iter().enumerate() {
        for v in validate_operad(lv).violations {
            report.violations.push(Violation {
                law: format!("level{m}-{}", v.law),
                instance: v.instance,
            });
        }
        if lv.colours != p.levels[0].colours {
            report.violations.push(Violation {
                law: "discrete-colours".into(),
                instance: format!("level {m}"),
            });
        }
    }
    // Operators are operad maps.
    let mut check_map = |m_src: usize, m_dst: usize, table: &dyn Fn(OpId) -> OpId, tag: &str| {
        let src = &p.levels[m_src];
        let dst = &p.levels[m_dst];
        let op_map: Vec<OpId> = (0..src.op_count()).map(table).collect();
        let m = crate::operad::OperadMap {
            colour_map: (0..src.colours.len()).collect(),
            op_map,
        };
        if let Err(e) = m.validate(src, dst) {
            report.violations.push(Violation {
                law: format!("operator-{tag}"),
                instance: format!("{m_src}->{m_dst}: {e}"),
            });
        }
    };
    for m in 1..=p.level_bound {
        for i in 0..=m {
            check_map(m, m - 1, &|op| p.face(m, op, i), &format!("d{i}"));
        }
    }
    for m in 0..p.level_bound {
        for i in 0..=m {
            check_map(m, m + 1, &|op| p.degen(m, op, i), &format!("s{i}"));
        }
    }
    // Simplicial identities on operations.
    for m in 2..=p.level_bound {
        for op in 0..p.levels[m].op_count() {
            for j in 1..=m {
                for i in 0..j {
                    if p.face(m - 1, p.face(m, op, j), i) != p.face(m - 1, p.face(m, op, i), j - 1)
                    {
                        report.violations.push(Violation {
                            law: "simplicial-dd".into(),
                            instance: format!("level {m} op {op}"),
                        });
                    }
                }
            }
        }
    }
    for m in 1..p.level_bound {
        for op in 0..p.levels[m].op_count() {
            for j in 0..=m {
                for i in 0..=m + 1 {
                    let s = p.degen(m, op, j);
                    let got = p.face(m + 1, s, i);
                    let want = if i < j {
                        p.degen(m - 1, p.face(m, op, i), j - 1)
                    } else if i == j || i == j + 1 {
                        op
                    } else {
                        p.degen(m - 1, p.face(m, op, i - 1), j)
                    };
                    if got != want {
                        report.violations.push(Violation {
                            law: "simplicial-ds".into(),
                            instance: format!("level {m} op {op}"),
                        });
                    }
                }
            }
        }
    }
    report
}

/// Connected components of each operation space, with the induced
/// composition. Requires `level_bound >= 1`; the result is independent of
/// the chosen representatives (checked).
pub fn pi0_truncated_operad(p: &TruncatedSOperad) -> Result<FiniteOperad> {
    if p.level_bound < 1 {
        return Err(Error::Operad("pi0 needs level bound >= 1".into()));
    }
    let zero = &p.levels[0];
    let one = &p.levels[1];
    // Union-find over level-0 operations, merged along level-1 edges.
    let mut uf = crate::sset::UnionFind::new(zero.op_count());
    for op in 0..one.op_count() {
        uf.union(p.face(1, op, 0), p.face(1, op, 1));
    }
    let (class_of, n_classes) = uf.canonicalize();
    // Representative per class: the least op id.
    let mut rep = vec![usize::MAX; n_classes];
    for op in 0..zero.op_count() {
        let c = class_of[op];
        if rep[c] == usize::MAX {
            rep[c] = op;
        }
    }
    let mut b = OperadBuilder::new(zero.colours.to_vec(), zero.arity_cap);
    // Class ids in op order; build names from representatives.
    let mut class_op: Vec<Option<OpId>> = vec![None; n_classes];
    for op in 0..zero.op_count() {
        let c = class_of[op];
        if class_op[c].is_none() {
            let sig = zero.sig(op).clone();
            let id = b.add_op(format!("[{}]", zero.name(rep[c])), sig.clone());
            if zero.is_identity(op) && sig.arity() == 1 && sig.inputs[0] == sig.output {
                b.identities_mut()[sig.output] = Some(id);
            }
            class_op[c] = Some(id);
        } else if zero.is_identity(op) {
            let sig = zero.sig(op).clone();
            b.identities_mut()[sig.output] = class_op[c];
        }
    }
    let class_ids: Vec<OpId> = (0..zero.op_count()).map(|op| class_op[class_of[op]].unwrap()).collect();
    // Induced structure; verify representative independence.
    for a in 0..zero.op_count() {
        for i in 0..zero.sig(a).arity() {
            for c in 0..zero.op_count() {
                if let Some(r) = zero.compose(a, i, c) {
                    b.set_compose(class_ids[a], i, class_ids[c], class_ids[r]);
                }
            }
        }
        for perm in permutations(zero.sig(a).arity()) {
            b.set_sigma(class_ids[a], perm.clone(), class_ids[zero.act(a, &perm)]);
        }
    }
    // Well-definedness: recompute and compare.
    for a in 0..zero.op_count() {
        for i in 0..zero.sig(a).arity() {
            for c in 0..zero.op_count() {
                if let Some(r) = zero.compose(a, i, c) {
                    if b.get_compose(class_ids[a], i, class_ids[c]) != Some(class_ids[r]) {
                        return Err(Error::Operad(
                            "pi0 composition depends on representatives".into(),
                        ));
                    }
                }
            }
        }
    }
    b.finish()
}

/// The free simplicial operad on an `n`-corolla with operation space `X`:
/// objects `0..=n`, the only non-identity operations sit at `(1,...,n; 0)`
/// and its permutations, one for each simplex of `X`.
pub fn corolla_decorated(n: usize, x: &FinSSet) -> TruncatedSOperad {
    let bound = x.dim_bound();
    let colours: Vec<String> = (0..=n).map(|c| c.to_string()).collect();
    let cap = n.max(1);
    let mut levels = Vec::new();
    let mut index: Vec<BTreeMap<(usize, Vec<usize>), OpId>> = Vec::new();
    for m in 0..=bound {
        let mut b = OperadBuilder::new(colours.clone(), cap);
        for c in 0..=n {
            b.add_identity(c);
        }
        let mut idx = BTreeMap::new();
        for s in 0..x.card(m) {
            for perm in permutations(n) {
                let inputs: Vec<usize> = perm.iter().map(|&i| i + 1).collect();
                let id = b.add_op(
                    format!("{}@{:?}", x.label(m, s), inputs),
                    Signature { inputs, output: 0 },
                );
                idx.insert((s, perm), id);
            }
        }
        // Symmetric action permutes the listing.
        for s in 0..x.card(m) {
            for perm in permutations(n) {
                let base = idx[&(s, perm.clone())];
                for tau in permutations(n) {
                    let st: Vec<usize> = tau.iter().map(|&i| perm[i]).collect();
                    b.set_sigma(base, tau, idx[&(s, st)]);
                }
            }
        }
        levels.push(b.finish().unwrap());
        index.push(idx);
    }
    // Operators act on the simplex coordinate.
    let mut faces = Vec::new();
    for m in 1..=bound {
        let lv = &levels[m];
        let mut rows = Vec::new();
        for op in 0..lv.op_count() {
            if lv.is_identity(op) {
                // Identity of colour c at every level has the same id layout.
                rows.push(vec![op; m + 1]);
            } else {
                let (s, perm) = index[m]
                    .iter()
                    .find(|(_, &v)| v == op)
                    .map(|(k, _)| k.clone())
                    .unwrap();
                rows.push(
                    (0..=m)
                        .map(|i| index[m - 1][&(x.face(m, s, i), perm.clone())])
                        .collect(),
                );
            }
        }
        faces.push(rows);
    }
    let mut degens = Vec::new();
    for m in 0..bound {
        let lv = &levels[m];
        let mut rows = Vec::new();
        for op in 0..lv.op_count() {
            if lv.is_identity(op) {
                rows.push(vec![op; m + 1]);
            } else {
                let (s, perm) = index[m]
                    .iter()
                    .find(|(_, &v)| v == op)
                    .map(|(k, _)| k.clone())
                    .unwrap();
                rows.push(
                    (0..=m)
                        .map(|i| index[m + 1][&(x.degen(m, s, i), perm.clone())])
                        .collect(),
                );
            }
        }
        degens.push(rows);
    }
    TruncatedSOperad {
        level_bound: bound,
        levels,
        faces,
        degens,
    }
}

/// The free simplicial operad on a tree with vertices decorated by `K`:
/// objects are the edges, operations at a profile are pairs of a subtree
/// with that profile and a `K`-simplex per vertex, composition grafts and
/// concatenates decorations.
pub fn tree_decorated(t: &Tree, k: &FinSSet) -> TruncatedSOperad {
    let bound = k.dim_bound();
    let all = subtrees(t, None);
    let cap = all.iter().map(|st| st.leaves().len()).max().unwrap_or(1).max(1);
    let colours: Vec<String> = t.edges().map(|e| t.name(e).to_string()).collect();

    type Key = (Vec<Vert>, Edge, Vec<Edge>, Vec<usize>);
    let mut levels = Vec::new();
    let mut index: Vec<BTreeMap<Key, OpId>> = Vec::new();
    let mut keys: Vec<Vec<Key>> = Vec::new();
    for m in 0..=bound {
        let mut b = OperadBuilder::new(colours.clone(), cap);
        let mut idx: BTreeMap<Key, OpId> = BTreeMap::new();
        let mut level_keys: Vec<Key> = Vec::new();
        for st in &all {
            let leaves = st.leaves();
            for perm in permutations(leaves.len()) {
                let listing: Vec<Edge> = perm.iter().map(|&i| leaves[i]).collect();
                if idx.contains_key(&(st.verts.clone(), st.root_edge, listing.clone(), vec![])) {
                    continue;
                }
                let sig = Signature {
                    inputs: listing.iter().map(|e| e.ix()).collect(),
                    output: st.root_edge.ix(),
                };
                // One op per decoration of the vertices.
                let mut decorations = vec![vec![]];
                for _ in &st.verts {
                    let mut next = Vec::new();
                    for d in &decorations {
                        for s in 0..k.card(m) {
                            let mut dd: Vec<usize> = d.clone();
                            dd.push(s);
                            next.push(dd);
                        }
                    }
                    decorations = next;
                }
                for deco in decorations {
                    let key: Key = (st.verts.clone(), st.root_edge, listing.clone(), deco.clone());
                    if idx.contains_key(&key) {
                        continue;
                    }
                    let name = if st.is_bare() {
                        format!("1_{}", t.name(st.root_edge))
                    } else {
                        format!(
                            "st[{}<-{}]{:?}",
                            t.name(st.root_edge),
                            listing
                                .iter()
                                .map(|&e| t.name(e))
                                .collect::<Vec<_>>()
                                .join(","),
                            deco
                        )
                    };
                    let id = b.add_op(name, sig.clone());
                    if st.is_bare() {
                        b.identities_mut()[st.root_edge.ix()] = Some(id);
                    }
                    idx.insert(key.clone(), id);
                    level_keys.push(key);
                }
            }
        }
        // Sigma and composition.
        for key in &level_keys {
            let (verts, root, listing, deco) = key;
            let pid = idx[key];
            for perm in permutations(listing.len()) {
                let new_listing: Vec<Edge> = perm.iter().map(|&i| listing[i]).collect();
                let k2: Key = (verts.clone(), *root, new_listing, deco.clone());
                b.set_sigma(pid, perm, idx[&k2]);
            }
            for (i, &leaf) in listing.iter().enumerate() {
                for qkey in &level_keys {
                    let (qverts, qroot, qlisting, qdeco) = qkey;
                    if *qroot != leaf {
                        continue;
                    }
                    let qid = idx[qkey];
                    let mut verts2: Vec<Vert> = verts.clone();
                    verts2.extend(qverts.iter().copied());
                    verts2.sort();
                    verts2.dedup();
                    let mut listing2 = Vec::new();
                    listing2.extend_from_slice(&listing[..i]);
                    listing2.extend_from_slice(qlisting);
                    listing2.extend_from_slice(&listing[i + 1..]);
                    // Decorations follow the sorted vertex order of the union.
                    let mut deco_map: BTreeMap<Vert, usize> = BTreeMap::new();
                    for (v, d) in verts.iter().zip(deco.iter()) {
                        deco_map.insert(*v, *d);
                    }
                    for (v, d) in qverts.iter().zip(qdeco.iter()) {
                        deco_map.insert(*v, *d);
                    }
                    let deco2: Vec<usize> = verts2.iter().map(|v| deco_map[v]).collect();
                    let k2: Key = (verts2, *root, listing2, deco2);
                    b.set_compose(pid, i, qid, idx[&k2]);
                }
            }
        }
        levels.push(b.finish().unwrap());
        index.push(idx);
        keys.push(level_keys);
    }
    // Operators act on every decoration coordinate.
    let mut key_of: Vec<BTreeMap<OpId, Key>> = Vec::new();
    for m in 0..=bound {
        key_of.push(index[m].iter().map(|(k, &v)| (v, k.clone())).collect());
    }
    let faces = (1..=bound)
        .map(|m| {
            (0..levels[m].op_count())
                .map(|op| {
                    let (verts, root, listing, deco) = key_of[m][&op].clone();
                    (0..=m)
                        .map(|i| {
                            let deco2: Vec<usize> =
                                deco.iter().map(|&s| k.face(m, s, i)).collect();
                            index[m - 1][&(verts.clone(), root, listing.clone(), deco2)]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degens = (0..bound)
        .map(|m| {
            (0..levels[m].op_count())
                .map(|op| {
                    let (verts, root, listing, deco) = key_of[m][&op].clone();
                    (0..=m)
                        .map(|i| {
                            let deco2: Vec<usize> =
                                deco.iter().map(|&s| k.degen(m, s, i)).collect();
                            index[m + 1][&(verts.clone(), root, listing.clone(), deco2)]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    TruncatedSOperad {
        level_bound: bound,
        levels,
        faces,
        degens,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::free_operad_on_tree;
    use crate::sset;

    #[test]
    fn discrete_roundtrip() {
        let p = free_operad_on_tree(&Tree::corolla(2));
        let sp = TruncatedSOperad::discrete(&p, 2);
        assert!(validate_truncated(&sp).ok());
        let q = pi0_truncated_operad(&sp).unwrap();
        assert!(crate::operad::operads_isomorphic(&p, &q));
    }

    #[test]
    fn interval_space_merges_components() {
        // One signature space Δ[1] joining two unary ops collapses under pi0.
        let x = sset::delta(1, 1);
        let c1 = corolla_decorated(1, &x);
        assert!(validate_truncated(&c1).ok());
        let p = pi0_truncated_operad(&c1).unwrap();
        let sig = Signature {
            inputs: vec![1],
            output: 0,
        };
        assert_eq!(p.ops_at(&sig).len(), 1);
    }

    #[test]
    fn corolla_decorated_spaces() {
        let x = sset::boundary(1, 2);
        let c2 = corolla_decorated(2, &x);
        assert!(validate_truncated(&c2).ok());
        let sig = Signature {
            inputs: vec![1, 2],
            output: 0,
        };
        let space = c2.op_space(&sig);
        assert!(sset::isomorphic(&space, &x));
        // The point decoration recovers the discrete corolla.
        let c2d = corolla_decorated(2, &sset::point(1));
        let p0 = pi0_truncated_operad(&c2d).unwrap();
        assert_eq!(p0.ops_at(&sig).len(), 1);
    }

    #[test]
    fn tree_decorated_matches_corolla() {
        let k = sset::boundary(1, 1);
        let via_tree = tree_decorated(&Tree::corolla(2), &k);
        let via_corolla = corolla_decorated(2, &k);
        assert!(validate_truncated(&via_tree).ok());
        // Same operation-space sizes at the unique interesting profile after
        // matching colour names (r,l1,l2) vs (0,1,2).
        let sig_tree = Signature {
            inputs: vec![
                via_tree.levels[0].colour_index("l1").unwrap(),
                via_tree.levels[0].colour_index("l2").unwrap(),
            ],
            output: via_tree.levels[0].colour_index("r").unwrap(),
        };
        let sig_cor = Signature {
            inputs: vec![1, 2],
            output: 0,
        };
        assert!(sset::isomorphic(
            &via_tree.op_space(&sig_tree),
            &via_corolla.op_space(&sig_cor)
        ));
    }
}
