//! Finite simplicial sets, stored levelwise up to an explicit dimension
//! bound, with connected components, integral homology and horn-filling
//! reports.
//!
//! Every simplicial set here carries its full level sets (including
//! degenerate simplices) for levels `0..=dim_bound`, together with face and
//! degeneracy tables. Operations above the bound are errors, never silent
//! truncations.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A finite simplicial set, truncated at `dim_bound`.
#[derive(Clone, PartialEq, Eq)]
pub struct FinSSet {
    dim_bound: usize,
    /// Token labels per level, used for reports and cross-referencing.
    labels: Vec<Vec<String>>,
    /// `faces[m-1][x][i] = d_i(x)`, for `1 <= m <= dim_bound`, `0 <= i <= m`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[m][x][i] = s_i(x)`, for `0 <= m < dim_bound`, `0 <= i <= m`.
    degens: Vec<Vec<Vec<usize>>>,
}

impl fmt::Debug for FinSSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<usize> = (0..=self.dim_bound).map(|m| self.card(m)).collect();
        write!(f, "FinSSet{sizes:?}")
    }
}

impl FinSSet {
    pub fn from_tables(
        dim_bound: usize,
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> FinSSet {
        let x = FinSSet {
            dim_bound,
            labels,
            faces,
            degens,
        };
        debug_assert!(
            x.check_identities().is_ok(),
            "simplicial identities: {:?}",
            x.check_identities().err()
        );
        x
    }

    pub fn dim_bound(&self) -> usize {
        self.dim_bound
    }

    /// Number of simplices at a level.
    pub fn card(&self, m: usize) -> usize {
        self.labels[m].len()
    }

    pub fn label(&self, m: usize, x: usize) -> &str {
        &self.labels[m][x]
    }

    pub fn index_of(&self, m: usize, label: &str) -> Option<usize> {
        self.labels[m].iter().position(|l| l == label)
    }

    pub fn face(&self, m: usize, x: usize, i: usize) -> usize {
        self.faces[m - 1][x][i]
    }

    pub fn degen(&self, m: usize, x: usize, i: usize) -> usize {
        self.degens[m][x][i]
    }

    /// Checks all simplicial identities that fit inside the bound.
    pub fn check_identities(&self) -> Result<()> {
        let b = self.dim_bound;
        for m in 2..=b {
            for x in 0..self.card(m) {
                for j in 1..=m {
                    for i in 0..j {
                        if self.face(m - 1, self.face(m, x, j), i)
                            != self.face(m - 1, self.face(m, x, i), j - 1)
                        {
                            return Err(Error::SSet(format!(
                                "d{i} d{j} failed at level {m} simplex {x}"
                            )));
                        }
                    }
                }
            }
        }
        for m in 0..b.saturating_sub(1) {
            for x in 0..self.card(m) {
                for j in 0..=m {
                    for i in 0..=j {
                        if self.degen(m + 1, self.degen(m, x, i), j + 1)
                            != self.degen(m + 1, self.degen(m, x, j), i)
                        {
                            return Err(Error::SSet(format!(
                                "s{i} s{j} failed at level {m} simplex {x}"
                            )));
                        }
                    }
                }
            }
        }
        for m in 1..b {
            for x in 0..self.card(m) {
                for j in 0..=m {
                    for i in 0..=m + 1 {
                        let sx = self.degen(m, x, j);
                        let got = self.face(m + 1, sx, i);
                        let want = if i < j {
                            self.degen(m - 1, self.face(m, x, i), j - 1)
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            self.degen(m - 1, self.face(m, x, i - 1), j)
                        };
                        if got != want {
                            return Err(Error::SSet(format!(
                                "d{i} s{j} failed at level {m} simplex {x}"
                            )));
                        }
                    }
                }
            }
        }
        // Level-0 case of the mixed identity (d_i s_0 = id on vertices).
        if b >= 1 {
            for x in 0..self.card(0) {
                let sx = self.degen(0, x, 0);
                if self.face(1, sx, 0) != x || self.face(1, sx, 1) != x {
                    return Err(Error::SSet("d s failed at level 0".into()));
                }
            }
        }
        Ok(())
    }

    /// Indices of nondegenerate simplices at level `m`.
    pub fn nondegenerate(&self, m: usize) -> Vec<usize> {
        if m == 0 {
            return (0..self.card(0)).collect();
        }
        let mut degen = vec![false; self.card(m)];
        for y in 0..self.card(m - 1) {
            for i in 0..m {
                degen[self.degen(m - 1, y, i)] = true;
            }
        }
        (0..self.card(m)).filter(|&x| !degen[x]).collect()
    }

    /// Euler characteristic computed from nondegenerate simplices.
    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for m in 0..=self.dim_bound {
            let n = self.nondegenerate(m).len() as i64;
            chi += if m % 2 == 0 { n } else { -n };
        }
        chi
    }

    /// Number of connected components.
    pub fn pi0(&self) -> usize {
        self.pi0_classes().1
    }

    /// Component index per vertex, and the number of components.
    pub fn pi0_classes(&self) -> (Vec<usize>, usize) {
        let n = self.card(0);
        let mut uf = UnionFind::new(n);
        if self.dim_bound >= 1 {
            for x in 0..self.card(1) {
                uf.union(self.face(1, x, 0), self.face(1, x, 1));
            }
        }
        uf.canonicalize()
    }

    /// Integral homology in degrees `0..=dim_bound`, from normalized chains.
    /// Exact in every degree strictly below the bound, and at the bound
    /// whenever no nondegenerate simplices live there.
    pub fn homology(&self) -> Vec<Homology> {
        let nondeg: Vec<Vec<usize>> = (0..=self.dim_bound)
            .map(|m| self.nondegenerate(m))
            .collect();
        let mats: Vec<Mat> = (1..=self.dim_bound)
            .map(|m| self.boundary_matrix(m, &nondeg))
            .collect();
        (0..=self.dim_bound)
            .map(|m| {
                let a = if m == 0 {
                    Mat::zero(0, nondeg[0].len())
                } else {
                    mats[m - 1].clone()
                };
                let b = if m == self.dim_bound {
                    Mat::zero(nondeg[m].len(), 0)
                } else {
                    mats[m].clone()
                };
                homology_of_pair(&a, &b)
            })
            .collect()
    }

    /// Boundary matrix from normalized `m`-chains to normalized
    /// `(m-1)`-chains.
    pub fn boundary_matrix(&self, m: usize, nondeg: &[Vec<usize>]) -> Mat {
        let rows = &nondeg[m - 1];
        let cols = &nondeg[m];
        let row_of: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut a = Mat::zero(rows.len(), cols.len());
        for (j, &x) in cols.iter().enumerate() {
            for i in 0..=m {
                let y = self.face(m, x, i);
                if let Some(&r) = row_of.get(&y) {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    a.add(r, j, sign);
                }
            }
        }
        a
    }

    /// Searches fillers for every horn map into the set, for horn dimensions
    /// `1..=dim_bound`.
    pub fn kan_report(&self) -> KanReport {
        let mut entries = Vec::new();
        for n in 1..=self.dim_bound {
            for k in 0..=n {
                let horns = self.enumerate_horns(n, k);
                let mut unfilled = 0usize;
                let mut multiple = 0usize;
                for faces in &horns {
                    let fillers = self.fillers(n, k, faces);
                    if fillers.is_empty() {
                        unfilled += 1;
                    } else if fillers.len() > 1 {
                        multiple += 1;
                    }
                }
                entries.push(KanEntry {
                    dim: n,
                    k,
                    inner: k > 0 && k < n,
                    horns: horns.len(),
                    unfilled,
                    multiple,
                });
            }
        }
        KanReport { entries }
    }

    /// All horn maps `Λ^k[n] -> X` as tuples of the `n` faces (index `k`
    /// filled with `usize::MAX`).
    pub fn enumerate_horns(&self, n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut faces = vec![usize::MAX; n + 1];
        self.extend_horn(n, k, 0, &mut faces, &mut out);
        out
    }

    fn extend_horn(
        &self,
        n: usize,
        k: usize,
        i: usize,
        faces: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i > n {
            out.push(faces.clone());
            return;
        }
        if i == k {
            self.extend_horn(n, k, i + 1, faces, out);
            return;
        }
        'cand: for x in 0..self.card(n - 1) {
            // Compatibility d_j x_i = d_{i-1} x_j for j < i (both != k).
            for j in 0..i {
                if j == k {
                    continue;
                }
                if n >= 2 && self.face(n - 1, x, j) != self.face(n - 1, faces[j], i - 1) {
                    continue 'cand;
                }
            }
            faces[i] = x;
            self.extend_horn(n, k, i + 1, faces, out);
            faces[i] = usize::MAX;
        }
    }

    /// Simplices whose faces (other than the `k`-th) match the given tuple.
    pub fn fillers(&self, n: usize, k: usize, faces: &[usize]) -> Vec<usize> {
        (0..self.card(n))
            .filter(|&y| (0..=n).all(|i| i == k || self.face(n, y, i) == faces[i]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct KanEntry {
    pub dim: usize,
    pub k: usize,
    pub inner: bool,
    pub horns: usize,
    pub unfilled: usize,
    /// Horns with more than one filler.
    pub multiple: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct KanReport {
    pub entries: Vec<KanEntry>,
}

impl KanReport {
    pub fn inner_horns_fill(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| e.inner)
            .all(|e| e.unfilled == 0)
    }
    pub fn all_horns_fill(&self) -> bool {
        self.entries.iter().all(|e| e.unfilled == 0)
    }
}

/// One homology group, `Z^betti ⊕ ⊕ Z/torsion[i]`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Homology {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl Homology {
    pub fn free(betti: usize) -> Homology {
        Homology {
            betti,
            torsion: vec![],
        }
    }
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Constructors

/// The standard simplex.
pub fn delta(n: usize, bound: usize) -> FinSSet {
    nerve_of_relation(n + 1, bound, |a, b| a <= b, seq_label, |_| true)
}

/// Boundary of the standard simplex: monotone sequences missing some vertex.
pub fn boundary(n: usize, bound: usize) -> FinSSet {
    nerve_of_relation(n + 1, bound, |a, b| a <= b, seq_label, |seq| {
        (0..=n).any(|v| !seq.contains(&v))
    })
}

/// The horn: sequences missing some vertex other than `k`.
pub fn horn(n: usize, k: usize, bound: usize) -> Result<FinSSet> {
    if n < 1 || k > n {
        return Err(Error::SSet(format!("horn ({n},{k}) out of range")));
    }
    Ok(nerve_of_relation(
        n + 1,
        bound,
        |a, b| a <= b,
        seq_label,
        |seq| (0..=n).any(|v| v != k && !seq.contains(&v)),
    ))
}

fn seq_label(seq: &[usize]) -> String {
    seq.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

/// Nerve of a finite preorder on `0..size`, with simplices filtered by
/// `keep` (which must carve out a subcomplex).
pub fn nerve_of_relation(
    size: usize,
    bound: usize,
    leq: impl Fn(usize, usize) -> bool,
    label: impl Fn(&[usize]) -> String,
    keep: impl Fn(&[usize]) -> bool,
) -> FinSSet {
    let mut levels: Vec<Vec<Vec<usize>>> = Vec::new();
    for m in 0..=bound {
        let mut level = Vec::new();
        let mut seq = Vec::new();
        gen_chains(size, &leq, m + 1, &mut seq, &mut level);
        level.retain(|s| keep(s));
        levels.push(level);
    }
    let index: Vec<BTreeMap<Vec<usize>, usize>> = levels
        .iter()
        .map(|lv| lv.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let labels = levels
        .iter()
        .map(|lv| lv.iter().map(|s| label(s)).collect())
        .collect();
    let faces = (1..=bound)
        .map(|m| {
            levels[m]
                .iter()
                .map(|s| {
                    (0..=m)
                        .map(|i| {
                            let mut t = s.clone();
                            t.remove(i);
                            index[m - 1][&t]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degens = (0..bound)
        .map(|m| {
            levels[m]
                .iter()
                .map(|s| {
                    (0..=m)
                        .map(|i| {
                            let mut t = s.clone();
                            t.insert(i, s[i]);
                            index[m + 1][&t]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    FinSSet::from_tables(bound, labels, faces, degens)
}

fn gen_chains(
    size: usize,
    leq: &impl Fn(usize, usize) -> bool,
    len: usize,
    seq: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if seq.len() == len {
        out.push(seq.clone());
        return;
    }
    for v in 0..size {
        if seq.last().is_none_or(|&last| leq(last, v)) {
            seq.push(v);
            gen_chains(size, leq, len, seq, out);
            seq.pop();
        }
    }
}

/// Levelwise product.
pub fn product(x: &FinSSet, y: &FinSSet) -> Result<FinSSet> {
    if x.dim_bound != y.dim_bound {
        return Err(Error::SSet("product of sets with different bounds".into()));
    }
    let b = x.dim_bound;
    let labels = (0..=b)
        .map(|m| {
            let mut lv = Vec::with_capacity(x.card(m) * y.card(m));
            for a in 0..x.card(m) {
                for c in 0..y.card(m) {
                    lv.push(format!("({},{})", x.label(m, a), y.label(m, c)));
                }
            }
            lv
        })
        .collect();
    let pair = |m: usize, a: usize, c: usize| a * y.card(m) + c;
    let faces = (1..=b)
        .map(|m| {
            let mut rows = Vec::with_capacity(x.card(m) * y.card(m));
            for a in 0..x.card(m) {
                for c in 0..y.card(m) {
                    rows.push(
                        (0..=m)
                            .map(|i| pair(m - 1, x.face(m, a, i), y.face(m, c, i)))
                            .collect(),
                    );
                }
            }
            rows
        })
        .collect();
    let degens = (0..b)
        .map(|m| {
            let mut rows = Vec::with_capacity(x.card(m) * y.card(m));
            for a in 0..x.card(m) {
                for c in 0..y.card(m) {
                    rows.push(
                        (0..=m)
                            .map(|i| pair(m + 1, x.degen(m, a, i), y.degen(m, c, i)))
                            .collect(),
                    );
                }
            }
            rows
        })
        .collect();
    Ok(FinSSet::from_tables(b, labels, faces, degens))
}

/// Nerve of the poset `{0 < 1}^m`: the interval cube.
pub fn cube(m: usize, bound: usize) -> FinSSet {
    nerve_of_relation(
        1 << m,
        bound,
        move |a, b| a & b == a,
        move |seq| cube_chain_label(m, seq),
        |_| true,
    )
}

/// Boundary of the interval cube: chains constant in some coordinate. This
/// matches the inductive description: the boundary of the 0-cube is empty,
/// the boundary of the interval is its two endpoints, and the boundary of a
/// product is (boundary x interval) union (cube x endpoints).
pub fn cube_boundary(m: usize, bound: usize) -> FinSSet {
    nerve_of_relation(
        1 << m,
        bound,
        move |a, b| a & b == a,
        move |seq| cube_chain_label(m, seq),
        move |seq| {
            (0..m).any(|c| {
                let bit = 1usize << c;
                seq.iter().all(|v| v & bit == 0) || seq.iter().all(|v| v & bit != 0)
            })
        },
    )
}

fn cube_chain_label(m: usize, seq: &[usize]) -> String {
    seq.iter()
        .map(|v| {
            (0..m)
                .map(|c| if v & (1 << c) != 0 { '1' } else { '0' })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(".")
}

/// Disjoint union.
pub fn disjoint_union(x: &FinSSet, y: &FinSSet) -> Result<FinSSet> {
    if x.dim_bound != y.dim_bound {
        return Err(Error::SSet("sum of sets with different bounds".into()));
    }
    let b = x.dim_bound;
    let labels = (0..=b)
        .map(|m| {
            (0..x.card(m))
                .map(|a| format!("inl:{}", x.label(m, a)))
                .chain((0..y.card(m)).map(|c| format!("inr:{}", y.label(m, c))))
                .collect()
        })
        .collect();
    let faces = (1..=b)
        .map(|m| {
            (0..x.card(m))
                .map(|a| (0..=m).map(|i| x.face(m, a, i)).collect())
                .chain(
                    (0..y.card(m))
                        .map(|c| (0..=m).map(|i| y.face(m, c, i) + x.card(m - 1)).collect()),
                )
                .collect()
        })
        .collect();
    let degens = (0..b)
        .map(|m| {
            (0..x.card(m))
                .map(|a| (0..=m).map(|i| x.degen(m, a, i)).collect())
                .chain(
                    (0..y.card(m))
                        .map(|c| (0..=m).map(|i| y.degen(m, c, i) + x.card(m + 1)).collect()),
                )
                .collect()
        })
        .collect();
    Ok(FinSSet::from_tables(b, labels, faces, degens))
}

/// The empty simplicial set.
pub fn empty(bound: usize) -> FinSSet {
    FinSSet::from_tables(
        bound,
        vec![vec![]; bound + 1],
        vec![vec![]; bound],
        vec![vec![]; bound],
    )
}

/// A single point.
pub fn point(bound: usize) -> FinSSet {
    delta(0, bound)
}

/// A discrete simplicial set on the given labels.
pub fn discrete(labels: &[String], bound: usize) -> FinSSet {
    let n = labels.len();
    let lv: Vec<Vec<String>> = (0..=bound).map(|_| labels.to_vec()).collect();
    let faces = (1..=bound)
        .map(|m| (0..n).map(|x| vec![x; m + 1]).collect())
        .collect();
    let degens = (0..bound)
        .map(|m| (0..n).map(|x| vec![x; m + 1]).collect())
        .collect();
    FinSSet::from_tables(bound, lv, faces, degens)
}

/// Builds the full subcomplex on the simplices passing `keep` (the kept set
/// must be closed under faces and degeneracies). Returns the subcomplex and,
/// per level, the ambient index of each kept simplex.
pub fn subcomplex(
    x: &FinSSet,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<(FinSSet, Vec<Vec<usize>>)> {
    let b = x.dim_bound;
    let kept: Vec<Vec<usize>> = (0..=b)
        .map(|m| (0..x.card(m)).filter(|&i| keep(m, i)).collect())
        .collect();
    let pos: Vec<BTreeMap<usize, usize>> = kept
        .iter()
        .map(|ks| ks.iter().enumerate().map(|(i, &k)| (k, i)).collect())
        .collect();
    let labels = (0..=b)
        .map(|m| kept[m].iter().map(|&i| x.label(m, i).to_string()).collect())
        .collect();
    let mut faces = Vec::new();
    for m in 1..=b {
        let mut rows = Vec::new();
        for &i in &kept[m] {
            let mut row = Vec::new();
            for j in 0..=m {
                let f = x.face(m, i, j);
                let Some(&p) = pos[m - 1].get(&f) else {
                    return Err(Error::SSet("subcomplex not closed under faces".into()));
                };
                row.push(p);
            }
            rows.push(row);
        }
        faces.push(rows);
    }
    let mut degens = Vec::new();
    for m in 0..b {
        let mut rows = Vec::new();
        for &i in &kept[m] {
            let mut row = Vec::new();
            for j in 0..=m {
                let s = x.degen(m, i, j);
                let Some(&p) = pos[m + 1].get(&s) else {
                    return Err(Error::SSet(
                        "subcomplex not closed under degeneracies".into(),
                    ));
                };
                row.push(p);
            }
            rows.push(row);
        }
        degens.push(rows);
    }
    Ok((FinSSet::from_tables(b, labels, faces, degens), kept))
}

// ---------------------------------------------------------------------------
// Simplicial maps

/// A levelwise map commuting with faces and degeneracies.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SMap {
    /// `levels[m][x]` = image of simplex `x` of level `m`.
    pub levels: Vec<Vec<usize>>,
}

impl SMap {
    pub fn identity(x: &FinSSet) -> SMap {
        SMap {
            levels: (0..=x.dim_bound)
                .map(|m| (0..x.card(m)).collect())
                .collect(),
        }
    }

    pub fn validate(&self, x: &FinSSet, y: &FinSSet) -> Result<()> {
        if x.dim_bound != y.dim_bound || self.levels.len() != x.dim_bound + 1 {
            return Err(Error::SSet("map bound mismatch".into()));
        }
        for m in 0..=x.dim_bound {
            if self.levels[m].len() != x.card(m) {
                return Err(Error::SSet("map level size mismatch".into()));
            }
        }
        for m in 1..=x.dim_bound {
            for a in 0..x.card(m) {
                for i in 0..=m {
                    if y.face(m, self.levels[m][a], i) != self.levels[m - 1][x.face(m, a, i)] {
                        return Err(Error::SSet(format!(
                            "map does not commute with d{i} at level {m}"
                        )));
                    }
                }
            }
        }
        for m in 0..x.dim_bound {
            for a in 0..x.card(m) {
                for i in 0..=m {
                    if y.degen(m, self.levels[m][a], i) != self.levels[m + 1][x.degen(m, a, i)] {
                        return Err(Error::SSet(format!(
                            "map does not commute with s{i} at level {m}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `self` after `earlier`.
    pub fn compose(&self, earlier: &SMap) -> SMap {
        SMap {
            levels: earlier
                .levels
                .iter()
                .enumerate()
                .map(|(m, lv)| lv.iter().map(|&a| self.levels[m][a]).collect())
                .collect(),
        }
    }

    pub fn is_bijective(&self, x: &FinSSet, y: &FinSSet) -> bool {
        (0..=x.dim_bound()).all(|m| {
            let mut seen = vec![false; y.card(m)];
            x.card(m) == y.card(m)
                && self.levels[m].iter().all(|&im| {
                    let fresh = !seen[im];
                    seen[im] = true;
                    fresh
                })
        })
    }

    /// The induced map on integral homology is an isomorphism in every
    /// degree.
    pub fn induces_homology_iso(&self, x: &FinSSet, y: &FinSSet) -> bool {
        let b = x.dim_bound();
        let ndx: Vec<Vec<usize>> = (0..=b).map(|m| x.nondegenerate(m)).collect();
        let ndy: Vec<Vec<usize>> = (0..=b).map(|m| y.nondegenerate(m)).collect();
        for m in 0..=b {
            let ax = if m == 0 {
                Mat::zero(0, ndx[0].len())
            } else {
                x.boundary_matrix(m, &ndx)
            };
            let bx = if m == b {
                Mat::zero(ndx[m].len(), 0)
            } else {
                x.boundary_matrix(m + 1, &ndx)
            };
            let ay = if m == 0 {
                Mat::zero(0, ndy[0].len())
            } else {
                y.boundary_matrix(m, &ndy)
            };
            let by = if m == b {
                Mat::zero(ndy[m].len(), 0)
            } else {
                y.boundary_matrix(m + 1, &ndy)
            };
            // Chain map on normalized chains: degenerate images vanish.
            let pos_y: BTreeMap<usize, usize> =
                ndy[m].iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let f = Mat::from_fn(ndy[m].len(), ndx[m].len(), |r, c| {
                let im = self.levels[m][ndx[m][c]];
                match pos_y.get(&im) {
                    Some(&rr) if rr == r => 1,
                    _ => 0,
                }
            });
            let kx = kernel_basis(&ax);
            let ky = kernel_basis(&ay);
            // Cycles map to cycles; express images in the target cycle basis.
            let fk = f.mul(&kx);
            let mut w = Mat::zero(ky.cols, kx.cols);
            for c in 0..kx.cols {
                let col = fk.column(c);
                let Some(sol) = solve(&ky, &col) else {
                    return false;
                };
                for r in 0..ky.cols {
                    w.set(r, c, sol[r]);
                }
            }
            let px = express_in_basis(&kx, &bx);
            let py = express_in_basis(&ky, &by);
            if !quotient_map_is_iso(&w, &px, &py) {
                return false;
            }
        }
        true
    }
}

fn express_in_basis(basis: &Mat, cols: &Mat) -> Mat {
    let mut out = Mat::zero(basis.cols, cols.cols);
    for c in 0..cols.cols {
        let col = cols.column(c);
        let sol = solve(basis, &col).expect("boundaries are cycles");
        for r in 0..basis.cols {
            out.set(r, c, sol[r]);
        }
    }
    out
}

/// Enumerates all simplicial maps `x -> y`, optionally with some
/// nondegenerate simplices pre-assigned (entries are `(level, simplex,
/// image)`).
pub fn enumerate_maps(x: &FinSSet, y: &FinSSet, pinned: &[(usize, usize, usize)]) -> Vec<SMap> {
    let b = x.dim_bound;
    let nondeg: Vec<Vec<usize>> = (0..=b).map(|m| x.nondegenerate(m)).collect();
    let mut pin: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); b + 1];
    for &(m, s, im) in pinned {
        pin[m].insert(s, im);
    }
    let mut out = Vec::new();
    let mut levels: Vec<Vec<Option<usize>>> = (0..=b).map(|m| vec![None; x.card(m)]).collect();
    fill_level(x, y, &nondeg, &pin, 0, &mut levels, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn fill_level(
    x: &FinSSet,
    y: &FinSSet,
    nondeg: &[Vec<usize>],
    pin: &[BTreeMap<usize, usize>],
    m: usize,
    levels: &mut Vec<Vec<Option<usize>>>,
    out: &mut Vec<SMap>,
) {
    if m > x.dim_bound {
        out.push(SMap {
            levels: levels
                .iter()
                .map(|lv| lv.iter().map(|v| v.unwrap()).collect())
                .collect(),
        });
        return;
    }
    // Force degeneracy images and pinned values; record what to undo.
    let mut forced: Vec<usize> = Vec::new();
    let mut ok = true;
    if m > 0 {
        'force: for a in 0..x.card(m - 1) {
            for i in 0..m {
                let sx = x.degen(m - 1, a, i);
                let im = y.degen(m - 1, levels[m - 1][a].unwrap(), i);
                match levels[m][sx] {
                    Some(prev) if prev != im => {
                        ok = false;
                        break 'force;
                    }
                    Some(_) => {}
                    None => {
                        levels[m][sx] = Some(im);
                        forced.push(sx);
                    }
                }
            }
        }
    }
    if ok {
        for (&s, &im) in &pin[m] {
            match levels[m][s] {
                Some(prev) if prev != im => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    levels[m][s] = Some(im);
                    forced.push(s);
                }
            }
        }
    }
    // Face compatibility of everything forced so far.
    if ok && m > 0 {
        ok = forced.iter().all(|&s| {
            (0..=m).all(|i| {
                levels[m - 1][x.face(m, s, i)].unwrap() == y.face(m, levels[m][s].unwrap(), i)
            })
        });
    }
    if ok {
        let todo: Vec<usize> = nondeg[m]
            .iter()
            .copied()
            .filter(|&s| levels[m][s].is_none())
            .collect();
        assign_nondeg(x, y, nondeg, pin, m, &todo, 0, levels, out);
    }
    for s in forced {
        levels[m][s] = None;
    }
}

#[allow(clippy::too_many_arguments)]
fn assign_nondeg(
    x: &FinSSet,
    y: &FinSSet,
    nondeg: &[Vec<usize>],
    pin: &[BTreeMap<usize, usize>],
    m: usize,
    todo: &[usize],
    k: usize,
    levels: &mut Vec<Vec<Option<usize>>>,
    out: &mut Vec<SMap>,
) {
    if k == todo.len() {
        fill_level(x, y, nondeg, pin, m + 1, levels, out);
        return;
    }
    let s = todo[k];
    for im in 0..y.card(m) {
        let compatible = m == 0
            || (0..=m).all(|i| levels[m - 1][x.face(m, s, i)].unwrap() == y.face(m, im, i));
        if !compatible {
            continue;
        }
        levels[m][s] = Some(im);
        assign_nondeg(x, y, nondeg, pin, m, todo, k + 1, levels, out);
        levels[m][s] = None;
    }
}

/// True when some levelwise bijection commuting with the operators exists.
pub fn isomorphic(x: &FinSSet, y: &FinSSet) -> bool {
    if x.dim_bound() != y.dim_bound() || (0..=x.dim_bound()).any(|m| x.card(m) != y.card(m)) {
        return false;
    }
    enumerate_maps(x, y, &[])
        .iter()
        .any(|f| f.is_bijective(x, y))
}

// ---------------------------------------------------------------------------
// Integer linear algebra (Smith normal form)

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i128>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i128) -> Mat {
        let mut m = Mat::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn identity(n: usize) -> Mat {
        Mat::from_fn(n, n, |r, c| i128::from(r == c))
    }

    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] += v;
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        Mat::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols)
                .map(|k| self.get(r, k) * other.get(k, c))
                .sum()
        })
    }

    pub fn hconcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        })
    }

    pub fn column(&self, c: usize) -> Vec<i128> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
}

/// Smith normal form: returns `(u, d, v)` with `u * a * v = d`, `u` and `v`
/// unimodular and `d` diagonal with each entry dividing the next.
pub fn smith_normal_form(a: &Mat) -> (Mat, Mat, Mat) {
    let mut d = a.clone();
    let mut u = Mat::identity(a.rows);
    let mut v = Mat::identity(a.cols);
    let mut t = 0;
    while t < d.rows && t < d.cols {
        if !clear_block(&mut d, &mut u, &mut v, t) {
            break;
        }
        t += 1;
    }
    (u, d, v)
}

/// Clears row and column `t`, leaving the pivot dividing the rest of the
/// block. Returns false when the remaining block is zero.
fn clear_block(d: &mut Mat, u: &mut Mat, v: &mut Mat, t: usize) -> bool {
    loop {
        // Pivot: minimal nonzero absolute value in the block.
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..d.rows {
            for c in t..d.cols {
                let x = d.get(r, c).abs();
                if x != 0
                    && pivot.is_none_or(|(pr, pc)| x < d.get(pr, pc).abs())
                {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else {
            return false;
        };
        swap_rows(d, u, t, pr);
        swap_cols(d, v, t, pc);
        let mut dirty = false;
        for r in t + 1..d.rows {
            let q = d.get(r, t) / d.get(t, t);
            if q != 0 {
                row_op(d, u, r, t, -q);
            }
            if d.get(r, t) != 0 {
                dirty = true;
            }
        }
        for c in t + 1..d.cols {
            let q = d.get(t, c) / d.get(t, t);
            if q != 0 {
                col_op(d, v, c, t, -q);
            }
            if d.get(t, c) != 0 {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // Row and column are clear; enforce divisibility of the rest.
        let p = d.get(t, t);
        let mut fixed = true;
        'scan: for r in t + 1..d.rows {
            for c in t + 1..d.cols {
                if d.get(r, c) % p != 0 {
                    row_op(d, u, t, r, 1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            if d.get(t, t) < 0 {
                negate_row(d, u, t);
            }
            return true;
        }
    }
}

fn swap_rows(d: &mut Mat, u: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..d.cols {
        let (x, y) = (d.get(a, c), d.get(b, c));
        d.set(a, c, y);
        d.set(b, c, x);
    }
    for c in 0..u.cols {
        let (x, y) = (u.get(a, c), u.get(b, c));
        u.set(a, c, y);
        u.set(b, c, x);
    }
}

fn swap_cols(d: &mut Mat, v: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..d.rows {
        let (x, y) = (d.get(r, a), d.get(r, b));
        d.set(r, a, y);
        d.set(r, b, x);
    }
    for r in 0..v.rows {
        let (x, y) = (v.get(r, a), v.get(r, b));
        v.set(r, a, y);
        v.set(r, b, x);
    }
}

/// row[a] += q * row[b], tracked in `u`.
fn row_op(d: &mut Mat, u: &mut Mat, a: usize, b: usize, q: i128) {
    for c in 0..d.cols {
        let x = d.get(a, c) + q * d.get(b, c);
        d.set(a, c, x);
    }
    for c in 0..u.cols {
        let x = u.get(a, c) + q * u.get(b, c);
        u.set(a, c, x);
    }
}

/// col[a] += q * col[b], tracked in `v`.
fn col_op(d: &mut Mat, v: &mut Mat, a: usize, b: usize, q: i128) {
    for r in 0..d.rows {
        let x = d.get(r, a) + q * d.get(r, b);
        d.set(r, a, x);
    }
    for r in 0..v.rows {
        let x = v.get(r, a) + q * v.get(r, b);
        v.set(r, a, x);
    }
}

fn negate_row(d: &mut Mat, u: &mut Mat, r: usize) {
    for c in 0..d.cols {
        let x = -d.get(r, c);
        d.set(r, c, x);
    }
    for c in 0..u.cols {
        let x = -u.get(r, c);
        u.set(r, c, x);
    }
}

/// Integer kernel basis of `a`, as a matrix whose columns span `ker a`.
pub fn kernel_basis(a: &Mat) -> Mat {
    let (_, d, v) = smith_normal_form(a);
    let rank = (0..d.rows.min(d.cols))
        .take_while(|&i| d.get(i, i) != 0)
        .count();
    Mat::from_fn(a.cols, a.cols - rank, |r, c| v.get(r, rank + c))
}

/// Solves `a x = b` over the integers.
pub fn solve(a: &Mat, b: &[i128]) -> Option<Vec<i128>> {
    let (u, d, v) = smith_normal_form(a);
    // a x = b  <=>  d y = u b  with  x = v y.
    let ub: Vec<i128> = (0..u.rows)
        .map(|r| (0..u.cols).map(|c| u.get(r, c) * b[c]).sum())
        .collect();
    let mut y = vec![0i128; a.cols];
    for i in 0..a.rows {
        let di = if i < d.cols { d.get(i, i) } else { 0 };
        if di == 0 {
            if ub[i] != 0 {
                return None;
            }
        } else {
            if ub[i] % di != 0 {
                return None;
            }
            y[i] = ub[i] / di;
        }
    }
    Some(
        (0..a.cols)
            .map(|r| (0..a.cols).map(|c| v.get(r, c) * y[c]).sum())
            .collect(),
    )
}

/// Homology of `ker a / im b` where `a . b = 0`.
pub fn homology_of_pair(a: &Mat, b: &Mat) -> Homology {
    let k = kernel_basis(a);
    let expr = express_in_basis(&k, b);
    let (_, d, _) = smith_normal_form(&expr);
    let mut torsion = Vec::new();
    let mut rank = 0usize;
    for i in 0..d.rows.min(d.cols) {
        let x = d.get(i, i).abs();
        if x == 0 {
            break;
        }
        rank += 1;
        if x > 1 {
            torsion.push(x as u64);
        }
    }
    Homology {
        betti: k.cols - rank,
        torsion,
    }
}

/// Whether the map of quotients `Z^a / im p -> Z^b / im q` given by `w` is an
/// isomorphism.
pub fn quotient_map_is_iso(w: &Mat, p: &Mat, q: &Mat) -> bool {
    // Surjectivity: columns of w and q together generate the target lattice.
    if w.rows > 0 {
        let wq = w.hconcat(q);
        let (_, d, _) = smith_normal_form(&wq);
        for i in 0..w.rows {
            if i >= d.cols || d.get(i, i).abs() != 1 {
                return false;
            }
        }
    }
    // Injectivity: w u in im q implies u in im p.
    let neg_q = Mat::from_fn(q.rows, q.cols, |r, c| -q.get(r, c));
    let combined = w.hconcat(&neg_q);
    let ker = kernel_basis(&combined);
    for c in 0..ker.cols {
        let u: Vec<i128> = (0..w.cols).map(|r| ker.get(r, c)).collect();
        if solve(p, &u).is_none() {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    pub fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let r = self.find(self.parent[i]);
            self.parent[i] = r;
        }
        self.parent[i]
    }
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
    /// Class index per element (numbered in first-seen order) and the class
    /// count.
    pub fn canonicalize(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut ids = BTreeMap::new();
        let mut out = vec![0usize; n];
        for i in 0..n {
            let r = self.find(i);
            let next = ids.len();
            let id = *ids.entry(r).or_insert(next);
            out[i] = id;
        }
        (out, ids.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_counts() {
        let d2 = delta(2, 3);
        assert_eq!(d2.card(0), 3);
        assert_eq!(d2.card(1), 6);
        assert_eq!(d2.nondegenerate(1).len(), 3);
        assert_eq!(d2.nondegenerate(2).len(), 1);
        assert_eq!(d2.nondegenerate(3).len(), 0);
        d2.check_identities().unwrap();
    }

    #[test]
    fn cube_counts() {
        let c2 = cube(2, 3);
        assert_eq!(c2.card(0), 4);
        assert_eq!(c2.nondegenerate(1).len(), 5);
        assert_eq!(c2.nondegenerate(2).len(), 2);
        assert_eq!(c2.pi0(), 1);
        for m in 2..=4 {
            let top = cube(m, m);
            assert_eq!(top.nondegenerate(m).len(), (1..=m).product::<usize>());
        }
    }

    #[test]
    fn cube_boundary_base_cases() {
        assert_eq!(cube_boundary(0, 2).card(0), 0);
        let b1 = cube_boundary(1, 2);
        assert_eq!(b1.card(0), 2);
        assert_eq!(b1.nondegenerate(1).len(), 0);
        assert_eq!(b1.pi0(), 2);
        // Boundary of the square is a circle.
        let b2 = cube_boundary(2, 2);
        assert_eq!(b2.pi0(), 1);
        let h = b2.homology();
        assert_eq!(h[0], Homology::free(1));
        assert_eq!(h[1], Homology::free(1));
        assert_eq!(h[2], Homology::free(0));
    }

    #[test]
    fn homology_examples() {
        let d3 = delta(3, 3);
        let h = d3.homology();
        assert_eq!(h[0], Homology::free(1));
        assert!(h[1].is_trivial() && h[2].is_trivial());

        let bd2 = boundary(2, 3);
        let h = bd2.homology();
        assert_eq!(h[0], Homology::free(1));
        assert_eq!(h[1], Homology::free(1));

        for x in [delta(2, 3), boundary(2, 3), cube(2, 3), cube_boundary(2, 3)] {
            let chi: i64 = x
                .homology()
                .iter()
                .enumerate()
                .map(|(m, h)| {
                    let b = h.betti as i64;
                    if m % 2 == 0 {
                        b
                    } else {
                        -b
                    }
                })
                .sum();
            assert_eq!(chi, x.euler_characteristic());
        }
    }

    #[test]
    fn horn_and_kan() {
        let h = horn(2, 1, 2).unwrap();
        assert_eq!(h.nondegenerate(1).len(), 2);
        assert!(delta(2, 2).kan_report().inner_horns_fill());
        assert!(cube(2, 2).kan_report().inner_horns_fill());
        // The boundary circle has unfillable inner 2-horns.
        assert!(!cube_boundary(2, 2).kan_report().inner_horns_fill());
    }

    #[test]
    fn products_multiply_pi0() {
        let two = disjoint_union(&point(2), &point(2)).unwrap();
        let three = disjoint_union(&two, &point(2)).unwrap();
        let p = product(&two, &three).unwrap();
        assert_eq!(p.pi0(), 6);
        let q = product(&cube(1, 2), &two).unwrap();
        assert_eq!(q.pi0(), 2);
    }

    #[test]
    fn snf_solves() {
        let a = Mat::from_fn(2, 2, |r, c| [[2, 4], [6, 8]][r][c]);
        let (u, d, v) = smith_normal_form(&a);
        assert_eq!(u.mul(&a).mul(&v), d);
        assert_eq!(d.get(0, 0).abs(), 2);
        assert_eq!((d.get(0, 0) * d.get(1, 1)).abs(), 8);
        assert!(solve(&a, &[2, 6]).is_some());
        assert!(solve(&a, &[1, 0]).is_none());
        if let Some(x) = solve(&a, &[2, 6]) {
            assert_eq!(2 * x[0] + 4 * x[1], 2);
            assert_eq!(6 * x[0] + 8 * x[1], 6);
        }
    }

    #[test]
    fn map_enumeration() {
        // Maps Δ[1] -> Δ[1]: two constants and the identity.
        let d1 = delta(1, 2);
        let maps = enumerate_maps(&d1, &d1, &[]);
        assert_eq!(maps.len(), 3);
        for f in &maps {
            f.validate(&d1, &d1).unwrap();
        }
        let two = discrete(&["a".into(), "b".into()], 2);
        assert_eq!(enumerate_maps(&cube(1, 2), &two, &[]).len(), 2);
        assert!(isomorphic(&cube(1, 2), &delta(1, 2)));
        assert!(!isomorphic(&cube(1, 2), &two));
    }

    #[test]
    fn homology_iso_detection() {
        let d1 = delta(1, 2);
        let id = SMap::identity(&d1);
        assert!(id.induces_homology_iso(&d1, &d1));
        // Collapse of the interval onto a vertex: still a homology iso.
        let pt = point(2);
        let collapse = &enumerate_maps(&d1, &pt, &[])[0];
        assert!(collapse.induces_homology_iso(&d1, &pt));
        // Inclusion of a point into two points: not surjective on H0.
        let two = disjoint_union(&point(2), &point(2)).unwrap();
        for f in enumerate_maps(&pt, &two, &[]) {
            assert!(!f.induces_homology_iso(&pt, &two));
        }
    }
}
