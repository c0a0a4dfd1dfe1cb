//! Finite coloured operads in sets, with explicit composition and
//! symmetric-action tables, exhaustive axiom validation, and morphism
//! classification.
//!
//! Every operad carries an arity cap: compositions whose result arity would
//! exceed the cap are undefined, and all validation quantifies only within
//! the cap. Signatures keep the input colour listing explicit; the symmetric
//! action is stored as tables rather than being quotiented away, so that
//! equivariance is testable.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::tree::{permutations, subtrees, Tree};

/// Input colours and output colour, as indices into the colour list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Signature {
    pub inputs: Vec<usize>,
    pub output: usize,
}

impl Signature {
    pub fn arity(&self) -> usize {
        self.inputs.len()
    }
}

pub type OpId = usize;

#[derive(Clone, Debug)]
pub struct OpData {
    pub name: String,
    pub sig: Signature,
}

/// A finite coloured operad with composition defined within an arity cap.
#[derive(Clone)]
pub struct FiniteOperad {
    pub colours: Vec<String>,
    pub arity_cap: usize,
    pub ops: Vec<OpData>,
    by_sig: BTreeMap<Signature, Vec<OpId>>,
    identities: Vec<OpId>,
    compose: BTreeMap<(OpId, usize, OpId), OpId>,
    /// `(op, perm) -> op`, where input `i` of the permuted op is input
    /// `perm[i]` of the original.
    sigma: BTreeMap<(OpId, Vec<usize>), OpId>,
}

impl fmt::Debug for FiniteOperad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteOperad[{} colours, {} ops, cap {}]",
            self.colours.len(),
            self.ops.len(),
            self.arity_cap
        )
    }
}

/// Incremental construction of the tables.
pub struct OperadBuilder {
    pub colours: Vec<String>,
    pub arity_cap: usize,
    ops: Vec<OpData>,
    by_sig: BTreeMap<Signature, Vec<OpId>>,
    identities: Vec<Option<OpId>>,
    compose: BTreeMap<(OpId, usize, OpId), OpId>,
    sigma: BTreeMap<(OpId, Vec<usize>), OpId>,
}

impl OperadBuilder {
    pub fn new(colours: Vec<String>, arity_cap: usize) -> OperadBuilder {
        let n = colours.len();
        OperadBuilder {
            colours,
            arity_cap,
            ops: Vec::new(),
            by_sig: BTreeMap::new(),
            identities: vec![None; n],
            compose: BTreeMap::new(),
            sigma: BTreeMap::new(),
        }
    }

    pub fn colour_index(&self, name: &str) -> Option<usize> {
        self.colours.iter().position(|c| c == name)
    }

    pub fn add_op(&mut self, name: impl Into<String>, sig: Signature) -> OpId {
        let id = self.ops.len();
        self.by_sig.entry(sig.clone()).or_default().push(id);
        self.ops.push(OpData {
            name: name.into(),
            sig,
        });
        id
    }

    pub fn add_identity(&mut self, colour: usize) -> OpId {
        let id = self.add_op(
            format!("1_{}", self.colours[colour]),
            Signature {
                inputs: vec![colour],
                output: colour,
            },
        );
        self.identities[colour] = Some(id);
        id
    }

    pub fn op_id(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn set_compose(&mut self, p: OpId, i: usize, q: OpId, r: OpId) {
        self.compose.insert((p, i, q), r);
    }

    pub fn get_compose(&self, p: OpId, i: usize, q: OpId) -> Option<OpId> {
        self.compose.get(&(p, i, q)).copied()
    }

    pub fn set_sigma(&mut self, p: OpId, perm: Vec<usize>, r: OpId) {
        self.sigma.insert((p, perm), r);
    }

    /// Direct access for constructions that name identities themselves.
    pub fn identities_mut(&mut self) -> &mut Vec<Option<OpId>> {
        &mut self.identities
    }

    pub fn sig_of(&self, p: OpId) -> &Signature {
        &self.ops[p].sig
    }

    /// Fills unit compositions and trivial permutation actions, then builds
    /// the operad.
    pub fn finish(mut self) -> Result<FiniteOperad> {
        let identities = self
            .identities
            .iter()
            .enumerate()
            .map(|(c, id)| {
                id.ok_or_else(|| {
                    Error::Operad(format!("colour {} lacks an identity", self.colours[c]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for p in 0..self.ops.len() {
            let sig = self.ops[p].sig.clone();
            for (i, &c) in sig.inputs.iter().enumerate() {
                self.compose.entry((p, i, identities[c])).or_insert(p);
            }
            self.compose.entry((identities[sig.output], 0, p)).or_insert(p);
            let id_perm: Vec<usize> = (0..sig.arity()).collect();
            self.sigma.entry((p, id_perm)).or_insert(p);
        }
        Ok(FiniteOperad {
            colours: self.colours,
            arity_cap: self.arity_cap,
            ops: self.ops,
            by_sig: self.by_sig,
            identities,
            compose: self.compose,
            sigma: self.sigma,
        })
    }
}

impl FiniteOperad {
    pub fn colour_index(&self, name: &str) -> Option<usize> {
        self.colours.iter().position(|c| c == name)
    }

    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    pub fn sig(&self, p: OpId) -> &Signature {
        &self.ops[p].sig
    }

    pub fn name(&self, p: OpId) -> &str {
        &self.ops[p].name
    }

    pub fn op_by_name(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn ops_at(&self, sig: &Signature) -> &[OpId] {
        self.by_sig.get(sig).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn signatures(&self) -> impl Iterator<Item = &Signature> {
        self.by_sig.keys()
    }

    pub fn identity(&self, colour: usize) -> OpId {
        self.identities[colour]
    }

    pub fn is_identity(&self, p: OpId) -> bool {
        self.identities.contains(&p)
    }

    /// Partial composition; `None` when undefined (above the arity cap).
    pub fn compose(&self, p: OpId, i: usize, q: OpId) -> Option<OpId> {
        self.compose.get(&(p, i, q)).copied()
    }

    /// The permuted operation: input `i` of the result is input `perm[i]` of
    /// `p`. Satisfies `act(act(p, s), t) = act(p, s∘t)` with
    /// `(s∘t)[i] = s[t[i]]`.
    pub fn act(&self, p: OpId, perm: &[usize]) -> OpId {
        if perm.len() <= 1 || perm.iter().enumerate().all(|(i, &j)| i == j) {
            return p;
        }
        self.sigma[&(p, perm.to_vec())]
    }

    /// Expected signature of the permuted operation.
    pub fn permuted_sig(&self, p: OpId, perm: &[usize]) -> Signature {
        let sig = self.sig(p);
        Signature {
            inputs: perm.iter().map(|&j| sig.inputs[j]).collect(),
            output: sig.output,
        }
    }

    /// Full composition `p(q_0, ..., q_{n-1})`, when all partial steps stay
    /// within the cap.
    pub fn compose_all(&self, p: OpId, args: &[OpId]) -> Option<OpId> {
        let n = self.sig(p).arity();
        assert_eq!(n, args.len());
        let mut acc = p;
        // Insert right-to-left so earlier positions stay valid.
        for i in (0..n).rev() {
            acc = self.compose(acc, i, args[i])?;
        }
        Some(acc)
    }

    /// Invertible unary operations from `x` to `y`.
    pub fn isos(&self, x: usize, y: usize) -> Vec<OpId> {
        let fwd = Signature {
            inputs: vec![x],
            output: y,
        };
        self.ops_at(&fwd)
            .iter()
            .copied()
            .filter(|&p| self.is_invertible(p))
            .collect()
    }

    pub fn is_invertible(&self, p: OpId) -> bool {
        let sig = self.sig(p);
        if sig.arity() != 1 {
            return false;
        }
        let back = Signature {
            inputs: vec![sig.output],
            output: sig.inputs[0],
        };
        self.ops_at(&back).iter().any(|&q| {
            self.compose(q, 0, p) == Some(self.identity(sig.inputs[0]))
                && self.compose(p, 0, q) == Some(self.identity(sig.output))
        })
    }

    /// Colours `x`, `y` connected by an invertible unary operation.
    pub fn colours_isomorphic(&self, x: usize, y: usize) -> bool {
        x == y || !self.isos(x, y).is_empty()
    }

    /// The symmetric action never fixes an operation under a nontrivial
    /// permutation.
    pub fn is_sigma_free(&self) -> bool {
        self.ops.iter().enumerate().all(|(p, data)| {
            permutations(data.sig.arity())
                .iter()
                .all(|perm| perm.iter().enumerate().all(|(i, &j)| i == j) || self.act(p, perm) != p)
        })
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub law: String,
    pub instance: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
    fn push(&mut self, law: &str, instance: String) {
        self.violations.push(Violation {
            law: law.to_string(),
            instance,
        });
    }
}

/// The block permutation tracking `act(p, s) ∘_i q = act(p ∘_{s[i]} q, ?)`
/// for `q` of arity `m` and `p` of arity `n`.
pub fn blow_up_perm(s: &[usize], i: usize, m: usize) -> Vec<usize> {
    let n = s.len();
    let si = s[i];
    let reindex = |k: usize| if k < si { k } else { k + m - 1 };
    let mut out = Vec::with_capacity(n + m - 1);
    for (j, &sj) in s.iter().enumerate() {
        if j == i {
            out.extend(si..si + m);
        } else {
            out.push(reindex(sj));
        }
    }
    out
}

/// The inner block permutation tracking `p ∘_i act(q, t) = act(p ∘_i q, ?)`.
pub fn inner_block_perm(t: &[usize], i: usize, n: usize) -> Vec<usize> {
    let m = t.len();
    let mut out = Vec::with_capacity(n + m - 1);
    out.extend(0..i);
    out.extend(t.iter().map(|&a| i + a));
    out.extend(i + m..n + m - 1);
    out
}

/// Exhaustively checks associativity, units, equivariance and totality of
/// the tables within the arity cap.
pub fn validate_operad(p: &FiniteOperad) -> ValidationReport {
    let mut report = ValidationReport::default();
    let cap = p.arity_cap;

    // Identity signatures.
    for c in 0..p.colours.len() {
        let id = p.identity(c);
        let sig = p.sig(id);
        if sig.inputs != [c] || sig.output != c {
            report.push("identity-signature", p.colours[c].clone());
        }
    }

    // Totality and signature of composition within the cap.
    for q1 in 0..p.op_count() {
        let s1 = p.sig(q1).clone();
        for i in 0..s1.arity() {
            for q2 in 0..p.op_count() {
                let s2 = p.sig(q2).clone();
                if s2.output != s1.inputs[i] {
                    if p.compose(q1, i, q2).is_some() {
                        report.push(
                            "compose-colour-mismatch",
                            format!("{} o_{i} {}", p.name(q1), p.name(q2)),
                        );
                    }
                    continue;
                }
                let res_arity = s1.arity() + s2.arity() - 1;
                match p.compose(q1, i, q2) {
                    None if res_arity <= cap => {
                        report.push(
                            "compose-missing",
                            format!("{} o_{i} {}", p.name(q1), p.name(q2)),
                        );
                    }
                    Some(r) => {
                        let mut want = Vec::new();
                        want.extend_from_slice(&s1.inputs[..i]);
                        want.extend_from_slice(&s2.inputs);
                        want.extend_from_slice(&s1.inputs[i + 1..]);
                        if p.sig(r).inputs != want || p.sig(r).output != s1.output {
                            report.push(
                                "compose-signature",
                                format!("{} o_{i} {}", p.name(q1), p.name(q2)),
                            );
                        }
                    }
                    None => {}
                }
            }
        }
    }

    // Unit laws.
    for q in 0..p.op_count() {
        let sig = p.sig(q).clone();
        for (i, &c) in sig.inputs.iter().enumerate() {
            if p.compose(q, i, p.identity(c)) != Some(q) {
                report.push("right-unit", format!("{} o_{i} 1", p.name(q)));
            }
        }
        if p.compose(p.identity(sig.output), 0, q) != Some(q) {
            report.push("left-unit", format!("1 o {}", p.name(q)));
        }
    }

    // Associativity, both shapes.
    for a in 0..p.op_count() {
        let sa = p.sig(a).clone();
        for b in 0..p.op_count() {
            let sb = p.sig(b).clone();
            for i in 0..sa.arity() {
                if sa.inputs[i] != sb.output {
                    continue;
                }
                let Some(ab) = p.compose(a, i, b) else {
                    continue;
                };
                for c in 0..p.op_count() {
                    let sc = p.sig(c).clone();
                    // Nested: plug c into an input of b.
                    for j in 0..sb.arity() {
                        if sb.inputs[j] != sc.output {
                            continue;
                        }
                        let lhs = p.compose(ab, i + j, c);
                        let rhs = p.compose(b, j, c).and_then(|bc| p.compose(a, i, bc));
                        if lhs.is_some() && rhs.is_some() && lhs != rhs {
                            report.push(
                                "associativity-nested",
                                format!("({} o_{i} {}) o_{} {}", p.name(a), p.name(b), i + j, p.name(c)),
                            );
                        }
                    }
                    // Disjoint: plug c into another input of a.
                    for k in 0..sa.arity() {
                        if k == i || sa.inputs[k] != sc.output {
                            continue;
                        }
                        let pos_c = if k < i { k } else { k + sb.arity() - 1 };
                        let lhs = p.compose(ab, pos_c, c);
                        let rhs = p.compose(a, k, c).and_then(|ac| {
                            let pos_b = if i < k { i } else { i + sc.arity() - 1 };
                            p.compose(ac, pos_b, b)
                        });
                        if lhs.is_some() && rhs.is_some() && lhs != rhs {
                            report.push(
                                "associativity-disjoint",
                                format!("({} o_{i} {}) , {} at {k}", p.name(a), p.name(b), p.name(c)),
                            );
                        }
                    }
                }
            }
        }
    }

    // Symmetric action: totality, signatures, group law.
    for q in 0..p.op_count() {
        let n = p.sig(q).arity();
        for perm in permutations(n) {
            let key = (q, perm.clone());
            let Some(&r) = p.sigma.get(&key) else {
                if n > 1 {
                    report.push("sigma-missing", format!("{} . {perm:?}", p.name(q)));
                }
                continue;
            };
            if *p.sig(r) != p.permuted_sig(q, &perm) {
                report.push("sigma-signature", format!("{} . {perm:?}", p.name(q)));
            }
            for tau in permutations(n) {
                let st: Vec<usize> = tau.iter().map(|&i| perm[i]).collect();
                if p.act(p.act(q, &perm), &tau) != p.act(q, &st) {
                    report.push(
                        "sigma-group-law",
                        format!("{} . {perm:?} . {tau:?}", p.name(q)),
                    );
                }
            }
        }
    }

    // Equivariance of composition.
    for a in 0..p.op_count() {
        let sa = p.sig(a).clone();
        let n = sa.arity();
        for b in 0..p.op_count() {
            let sb = p.sig(b).clone();
            let m = sb.arity();
            for perm in permutations(n) {
                for i in 0..n {
                    if sa.inputs[perm[i]] != sb.output {
                        continue;
                    }
                    let lhs = p.compose(p.act(a, &perm), i, b);
                    let rhs = p
                        .compose(a, perm[i], b)
                        .map(|ab| p.act(ab, &blow_up_perm(&perm, i, m)));
                    if lhs.is_some() && rhs.is_some() && lhs != rhs {
                        report.push(
                            "equivariance-outer",
                            format!("({}.{perm:?}) o_{i} {}", p.name(a), p.name(b)),
                        );
                    }
                }
            }
            for tau in permutations(m) {
                for i in 0..n {
                    if sa.inputs[i] != sb.output {
                        continue;
                    }
                    let lhs = p.compose(a, i, p.act(b, &tau));
                    let rhs = p
                        .compose(a, i, b)
                        .map(|ab| p.act(ab, &inner_block_perm(&tau, i, n)));
                    if lhs.is_some() && rhs.is_some() && lhs != rhs {
                        report.push(
                            "equivariance-inner",
                            format!("{} o_{i} ({}.{tau:?})", p.name(a), p.name(b)),
                        );
                    }
                }
            }
        }
    }

    report
}

// ---------------------------------------------------------------------------
// Free operads on trees

/// The free operad generated by a tree: colours are its edges, operations at
/// a signature are the orderings of the (at most one) subtree with that leaf
/// set, composition is grafting.
pub fn free_operad_on_tree(t: &Tree) -> FiniteOperad {
    let all = subtrees(t, None);
    let cap = all
        .iter()
        .map(|st| st.leaves().len())
        .max()
        .unwrap_or(1)
        .max(1);
    let colours: Vec<String> = t.edges().map(|e| t.name(e).to_string()).collect();
    let mut builder = OperadBuilder::new(colours, cap);

    // An op is a subtree plus an ordering of its leaves. Identities are the
    // bare edges.
    #[derive(Clone)]
    struct FreeOp {
        verts: Vec<crate::tree::Vert>,
        root: crate::tree::Edge,
        listing: Vec<crate::tree::Edge>,
    }
    let mut free_ops: Vec<FreeOp> = Vec::new();
    let mut index: BTreeMap<(Vec<crate::tree::Vert>, crate::tree::Edge, Vec<crate::tree::Edge>), OpId> =
        BTreeMap::new();
    for st in &all {
        let leaves = st.leaves();
        let base_name = |listing: &[crate::tree::Edge]| {
            if st.is_bare() {
                format!("1_{}", t.name(st.root_edge))
            } else {
                format!(
                    "st[{}<-{}]",
                    t.name(st.root_edge),
                    listing
                        .iter()
                        .map(|&e| t.name(e))
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
        };
        for perm in permutations(leaves.len()) {
            let listing: Vec<crate::tree::Edge> = perm.iter().map(|&i| leaves[i]).collect();
            let key = (st.verts.clone(), st.root_edge, listing.clone());
            if index.contains_key(&key) {
                continue;
            }
            let sig = Signature {
                inputs: listing.iter().map(|e| e.ix()).collect(),
                output: st.root_edge.ix(),
            };
            let id = if st.is_bare() {
                let id = builder.add_op(base_name(&listing), sig);
                builder.identities[st.root_edge.ix()] = Some(id);
                id
            } else {
                builder.add_op(base_name(&listing), sig)
            };
            index.insert(key, id);
            free_ops.push(FreeOp {
                verts: st.verts.clone(),
                root: st.root_edge,
                listing,
            });
        }
    }

    // Composition by grafting; the symmetric action permutes listings.
    for (pid, pop) in free_ops.iter().enumerate() {
        for perm in permutations(pop.listing.len()) {
            let listing: Vec<crate::tree::Edge> = perm.iter().map(|&i| pop.listing[i]).collect();
            let key = (pop.verts.clone(), pop.root, listing);
            builder.set_sigma(pid, perm, index[&key]);
        }
        for (i, &leaf) in pop.listing.iter().enumerate() {
            for (qid, qop) in free_ops.iter().enumerate() {
                if qop.root != leaf {
                    continue;
                }
                let mut verts = pop.verts.clone();
                verts.extend(qop.verts.iter().copied());
                verts.sort();
                verts.dedup();
                let mut listing = Vec::new();
                listing.extend_from_slice(&pop.listing[..i]);
                listing.extend_from_slice(&qop.listing);
                listing.extend_from_slice(&pop.listing[i + 1..]);
                let key = (verts, pop.root, listing);
                builder.set_compose(pid, i, qid, index[&key]);
            }
        }
    }
    builder.finish().unwrap()
}

// ---------------------------------------------------------------------------
// Small stock operads

/// One colour, a single operation in every arity up to the cap.
pub fn commutative_operad(arity_cap: usize) -> FiniteOperad {
    let mut b = OperadBuilder::new(vec!["*".into()], arity_cap);
    let mut by_arity = Vec::new();
    for n in 0..=arity_cap {
        let id = if n == 1 {
            b.add_identity(0)
        } else {
            b.add_op(
                format!("mu{n}"),
                Signature {
                    inputs: vec![0; n],
                    output: 0,
                },
            )
        };
        by_arity.push(id);
    }
    for n in 0..=arity_cap {
        for perm in permutations(n) {
            b.set_sigma(by_arity[n], perm, by_arity[n]);
        }
        for i in 0..n {
            for m in 0..=arity_cap {
                if n + m - 1 <= arity_cap {
                    b.set_compose(by_arity[n], i, by_arity[m], by_arity[n + m - 1]);
                }
            }
        }
    }
    b.finish().unwrap()
}

/// The contractible groupoid on the given objects, as an operad with unary
/// operations only.
pub fn contractible_groupoid(objects: &[&str], arity_cap: usize) -> FiniteOperad {
    let names: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
    let n = names.len();
    let mut b = OperadBuilder::new(names, arity_cap);
    let mut hom = vec![vec![0usize; n]; n];
    for x in 0..n {
        for y in 0..n {
            hom[x][y] = if x == y {
                b.add_identity(x)
            } else {
                b.add_op(
                    format!("e[{}->{}]", b.colours[x].clone(), b.colours[y].clone()),
                    Signature {
                        inputs: vec![x],
                        output: y,
                    },
                )
            };
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                b.set_compose(hom[y][z], 0, hom[x][y], hom[x][z]);
            }
        }
    }
    b.finish().unwrap()
}

/// A one-colour operad whose unary operations form the given monoid
/// (`mult[i][j]` = index of `i` after `j`; element 0 is the unit).
pub fn monoid_operad(elements: &[&str], mult: &[Vec<usize>], arity_cap: usize) -> FiniteOperad {
    let mut b = OperadBuilder::new(vec!["*".into()], arity_cap);
    let ids: Vec<OpId> = elements
        .iter()
        .enumerate()
        .map(|(i, name)| {
            if i == 0 {
                b.add_identity(0)
            } else {
                b.add_op(
                    name.to_string(),
                    Signature {
                        inputs: vec![0],
                        output: 0,
                    },
                )
            }
        })
        .collect();
    for (i, row) in mult.iter().enumerate() {
        for (j, &k) in row.iter().enumerate() {
            b.set_compose(ids[i], 0, ids[j], ids[k]);
        }
    }
    b.finish().unwrap()
}

/// Only identity operations.
pub fn discrete_operad(colours: &[&str], arity_cap: usize) -> FiniteOperad {
    let names: Vec<String> = colours.iter().map(|s| s.to_string()).collect();
    let n = names.len();
    let mut b = OperadBuilder::new(names, arity_cap);
    for c in 0..n {
        b.add_identity(c);
    }
    b.finish().unwrap()
}

// ---------------------------------------------------------------------------
// Morphisms

/// A map of operads, recorded on colours and operations.
#[derive(Clone, Debug)]
pub struct OperadMap {
    pub colour_map: Vec<usize>,
    pub op_map: Vec<OpId>,
}

impl OperadMap {
    pub fn identity(p: &FiniteOperad) -> OperadMap {
        OperadMap {
            colour_map: (0..p.colours.len()).collect(),
            op_map: (0..p.op_count()).collect(),
        }
    }

    pub fn validate(&self, src: &FiniteOperad, dst: &FiniteOperad) -> Result<()> {
        if self.colour_map.len() != src.colours.len() || self.op_map.len() != src.op_count() {
            return Err(Error::Operad("map arity mismatch".into()));
        }
        for p in 0..src.op_count() {
            let sig = src.sig(p);
            let want = Signature {
                inputs: sig.inputs.iter().map(|&c| self.colour_map[c]).collect(),
                output: self.colour_map[sig.output],
            };
            if *dst.sig(self.op_map[p]) != want {
                return Err(Error::Operad(format!(
                    "signature mismatch at {}",
                    src.name(p)
                )));
            }
        }
        for c in 0..src.colours.len() {
            if self.op_map[src.identity(c)] != dst.identity(self.colour_map[c]) {
                return Err(Error::Operad(format!(
                    "identity of {} not preserved",
                    src.colours[c]
                )));
            }
        }
        for p in 0..src.op_count() {
            for i in 0..src.sig(p).arity() {
                for q in 0..src.op_count() {
                    if let Some(r) = src.compose(p, i, q) {
                        match dst.compose(self.op_map[p], i, self.op_map[q]) {
                            Some(rr) if rr == self.op_map[r] => {}
                            _ => {
                                return Err(Error::Operad(format!(
                                    "composition not preserved at {} o_{i} {}",
                                    src.name(p),
                                    src.name(q)
                                )))
                            }
                        }
                    }
                }
            }
            let n = src.sig(p).arity();
            for perm in permutations(n) {
                if dst.act(self.op_map[p], &perm) != self.op_map[src.act(p, &perm)] {
                    return Err(Error::Operad(format!(
                        "symmetric action not preserved at {}",
                        src.name(p)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `self` after `earlier`.
    pub fn compose(&self, earlier: &OperadMap) -> OperadMap {
        OperadMap {
            colour_map: earlier
                .colour_map
                .iter()
                .map(|&c| self.colour_map[c])
                .collect(),
            op_map: earlier.op_map.iter().map(|&p| self.op_map[p]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MorphismFlags {
    pub fully_faithful: bool,
    pub essentially_surjective: bool,
    pub isofibration: bool,
}

/// Classifies a morphism `u: P -> Q`.
pub fn classify_operad_morphism(
    u: &OperadMap,
    src: &FiniteOperad,
    dst: &FiniteOperad,
) -> Result<MorphismFlags> {
    u.validate(src, dst)?;
    // Fully faithful: each operation set maps bijectively onto the target
    // set at the image signature.
    let mut fully_faithful = true;
    let mut sigs: Vec<Signature> = Vec::new();
    for sig in all_signatures(src) {
        sigs.push(sig);
    }
    for sig in &sigs {
        let image_sig = Signature {
            inputs: sig.inputs.iter().map(|&c| u.colour_map[c]).collect(),
            output: u.colour_map[sig.output],
        };
        let source_ops = src.ops_at(sig);
        let target_ops = dst.ops_at(&image_sig);
        let images: Vec<OpId> = source_ops.iter().map(|&p| u.op_map[p]).collect();
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != source_ops.len() || distinct.len() != target_ops.len() {
            fully_faithful = false;
            break;
        }
    }
    // Essentially surjective: every target colour is isomorphic to an image
    // colour.
    let essentially_surjective = (0..dst.colours.len()).all(|y| {
        u.colour_map
            .iter()
            .any(|&x| dst.colours_isomorphic(x, y))
    });
    // Isofibration: target isos out of an image colour lift.
    let mut isofibration = true;
    'outer: for x in 0..src.colours.len() {
        let ux = u.colour_map[x];
        for y in 0..dst.colours.len() {
            for &b in &dst.isos(ux, y) {
                let lift = (0..src.colours.len()).any(|x2| {
                    u.colour_map[x2] == y
                        && src
                            .isos(x, x2)
                            .iter()
                            .any(|&a| u.op_map[a] == b)
                });
                if !lift {
                    isofibration = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(MorphismFlags {
        fully_faithful,
        essentially_surjective,
        isofibration,
    })
}

/// Every signature with input arity within the cap over the source colours.
fn all_signatures(p: &FiniteOperad) -> Vec<Signature> {
    let mut out = Vec::new();
    let ncol = p.colours.len();
    for arity in 0..=p.arity_cap {
        let mut inputs = vec![0usize; arity];
        loop {
            for output in 0..ncol {
                out.push(Signature {
                    inputs: inputs.clone(),
                    output,
                });
            }
            // Increment the multi-index.
            let mut i = 0;
            loop {
                if i == arity {
                    break;
                }
                inputs[i] += 1;
                if inputs[i] < ncol {
                    break;
                }
                inputs[i] = 0;
                i += 1;
            }
            if i == arity {
                break;
            }
        }
        if ncol == 0 {
            break;
        }
    }
    out
}

/// All operad maps from `src` to `dst` (exhaustive; both finite).
pub fn enumerate_operad_maps(src: &FiniteOperad, dst: &FiniteOperad) -> Vec<OperadMap> {
    let mut out = Vec::new();
    let ncol = src.colours.len();
    let mut colour_map = vec![0usize; ncol];
    loop {
        enumerate_op_assignments(src, dst, &colour_map, &mut out);
        let mut i = 0;
        loop {
            if i == ncol || dst.colours.is_empty() {
                return out;
            }
            colour_map[i] += 1;
            if colour_map[i] < dst.colours.len() {
                break;
            }
            colour_map[i] = 0;
            i += 1;
        }
    }
}

fn enumerate_op_assignments(
    src: &FiniteOperad,
    dst: &FiniteOperad,
    colour_map: &[usize],
    out: &mut Vec<OperadMap>,
) {
    let mut op_map: Vec<Option<OpId>> = vec![None; src.op_count()];
    for c in 0..src.colours.len() {
        op_map[src.identity(c)] = Some(dst.identity(colour_map[c]));
    }
    let free: Vec<OpId> = (0..src.op_count()).filter(|&p| op_map[p].is_none()).collect();
    assign_ops(src, dst, colour_map, &free, 0, &mut op_map, out);
}

fn assign_ops(
    src: &FiniteOperad,
    dst: &FiniteOperad,
    colour_map: &[usize],
    free: &[OpId],
    k: usize,
    op_map: &mut Vec<Option<OpId>>,
    out: &mut Vec<OperadMap>,
) {
    if k == free.len() {
        let m = OperadMap {
            colour_map: colour_map.to_vec(),
            op_map: op_map.iter().map(|o| o.unwrap()).collect(),
        };
        if m.validate(src, dst).is_ok() {
            out.push(m);
        }
        return;
    }
    let p = free[k];
    let sig = src.sig(p);
    let image_sig = Signature {
        inputs: sig.inputs.iter().map(|&c| colour_map[c]).collect(),
        output: colour_map[sig.output],
    };
    for &im in dst.ops_at(&image_sig) {
        op_map[p] = Some(im);
        assign_ops(src, dst, colour_map, free, k + 1, op_map, out);
        op_map[p] = None;
    }
}

/// Exhaustive isomorphism search between finite operads.
pub fn operads_isomorphic(a: &FiniteOperad, b: &FiniteOperad) -> bool {
    if a.colours.len() != b.colours.len() || a.op_count() != b.op_count() {
        return false;
    }
    enumerate_operad_maps(a, b).iter().any(|m| {
        let mut cols = m.colour_map.clone();
        cols.sort();
        cols.dedup();
        let mut ops = m.op_map.clone();
        ops.sort();
        ops.dedup();
        cols.len() == a.colours.len() && ops.len() == a.op_count()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_operad_on_eta() {
        let p = free_operad_on_tree(&Tree::eta());
        assert_eq!(p.colours.len(), 1);
        assert_eq!(p.op_count(), 1);
        assert!(validate_operad(&p).ok());
    }

    #[test]
    fn free_operad_on_corolla() {
        let c2 = Tree::corolla(2);
        let p = free_operad_on_tree(&c2);
        // 3 identities + 2 orderings of the vertex operation.
        assert_eq!(p.op_count(), 5);
        let r = p.colour_index("r").unwrap();
        let l1 = p.colour_index("l1").unwrap();
        let l2 = p.colour_index("l2").unwrap();
        let s12 = Signature {
            inputs: vec![l1, l2],
            output: r,
        };
        let s21 = Signature {
            inputs: vec![l2, l1],
            output: r,
        };
        assert_eq!(p.ops_at(&s12).len(), 1);
        assert_eq!(p.ops_at(&s21).len(), 1);
        let op = p.ops_at(&s12)[0];
        assert_eq!(p.act(op, &[1, 0]), p.ops_at(&s21)[0]);
        assert!(validate_operad(&p).ok());
        assert!(p.is_sigma_free());
    }

    #[test]
    fn free_operads_validate() {
        for t in crate::tree::enumerate_trees(3, 2) {
            let p = free_operad_on_tree(&t);
            let report = validate_operad(&p);
            assert!(report.ok(), "{:?}: {:?}", t, report.violations);
        }
    }

    #[test]
    fn stock_operads_validate() {
        assert!(validate_operad(&commutative_operad(3)).ok());
        assert!(!commutative_operad(2).is_sigma_free());
        assert!(validate_operad(&contractible_groupoid(&["0", "1"], 2)).ok());
        let m = monoid_operad(&["1", "g"], &[vec![0, 1], vec![1, 1]], 1);
        assert!(validate_operad(&m).ok());
    }

    #[test]
    fn fault_injection_is_detected() {
        // Corrupt one unit composition; the report implicates exactly that
        // entry.
        let mut b = OperadBuilder::new(vec!["*".into()], 1);
        let unit = b.add_identity(0);
        let g = b.add_op(
            "g",
            Signature {
                inputs: vec![0],
                output: 0,
            },
        );
        b.set_compose(g, 0, g, g);
        b.set_compose(g, 0, unit, unit);
        b.set_compose(unit, 0, g, g);
        let p = b.finish().unwrap();
        let report = validate_operad(&p);
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .all(|v| v.instance.contains('g')));
        assert!(report.violations.iter().any(|v| v.law == "right-unit"));

        // A colour-mismatched entry is always flagged.
        let mut b = OperadBuilder::new(vec!["a".into(), "b".into()], 1);
        let ia = b.add_identity(0);
        let _ib = b.add_identity(1);
        let f = b.add_op(
            "f",
            Signature {
                inputs: vec![0],
                output: 1,
            },
        );
        b.set_compose(f, 0, f, ia);
        let p = b.finish().unwrap();
        assert!(!validate_operad(&p).ok());
    }

    #[test]
    fn classification_examples() {
        let e = contractible_groupoid(&["0", "1"], 1);
        let pt = discrete_operad(&["0"], 1);
        // Inclusion of the point into the contractible groupoid.
        let incl = OperadMap {
            colour_map: vec![0],
            op_map: vec![e.identity(0)],
        };
        let flags = classify_operad_morphism(&incl, &pt, &e).unwrap();
        assert!(flags.fully_faithful);
        assert!(flags.essentially_surjective);
        assert!(!flags.isofibration);

        // Collapse of the groupoid to the point.
        let collapse = OperadMap {
            colour_map: vec![0, 0],
            op_map: (0..e.op_count()).map(|_| pt.identity(0)).collect(),
        };
        let flags = classify_operad_morphism(&collapse, &e, &pt).unwrap();
        assert!(flags.fully_faithful);
        assert!(flags.essentially_surjective);
        assert!(flags.isofibration);

        let id = OperadMap::identity(&e);
        let flags = classify_operad_morphism(&id, &e, &e).unwrap();
        assert!(flags.fully_faithful && flags.essentially_surjective && flags.isofibration);
    }

    #[test]
    fn map_enumeration_and_iso() {
        let e = contractible_groupoid(&["0", "1"], 1);
        let e2 = contractible_groupoid(&["a", "b"], 1);
        assert!(operads_isomorphic(&e, &e2));
        assert!(!operads_isomorphic(&e, &discrete_operad(&["0", "1"], 1)));
        // Maps from the walking arrow colour set: count maps eta -> E.
        let pt = discrete_operad(&["x"], 1);
        assert_eq!(enumerate_operad_maps(&pt, &e).len(), 2);
    }

    #[test]
    fn equivariance_helpers() {
        // blow_up: s = [1,0] (swap), compose at slot 0 with arity 2.
        assert_eq!(blow_up_perm(&[1, 0], 0, 2), vec![1, 2, 0]);
        assert_eq!(inner_block_perm(&[1, 0], 1, 3), vec![0, 2, 1, 3]);
    }
}
