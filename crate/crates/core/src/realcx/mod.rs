//! Finite simplicial complexes with a simplicial involution.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::chain::{CochainComplex, SparseComplex};
use crate::znf::{FGAbelianGroup, Int};

mod cochains;
mod models;
mod retraction;

pub use cochains::{
    bredon_cochain_complex, bredon_cohomology, equivariant_cochains, simplicial_cochains, twisted_cohomology,
    twisted_cohomology_via_invariants, CoefficientSystem, KRCoefficientSystem, LocalWeight,
};
pub use models::{build_model, graph_model, ModelKind};
pub use retraction::{check_retraction, sample_on_variety, sphere_retraction, RetractionError};

pub type Simplex = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealError {
    /// `tau` is not an involution of the vertex set.
    NotInvolution,
    /// The image of this simplex under `tau` is not a simplex.
    NotSimplicial(Simplex),
    /// This simplex is `tau`-invariant but not fixed vertexwise.
    Irregular(Simplex),
    NotFreeAction,
    UnsupportedParams(&'static str),
    /// Malformed input: repeated or out-of-range vertices.
    BadSimplex(Simplex),
}

impl fmt::Display for RealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealError::NotInvolution => write!(f, "tau is not an involution of the vertex set"),
            RealError::NotSimplicial(s) => write!(f, "tau does not map simplex {s:?} to a simplex"),
            RealError::Irregular(s) => write!(f, "simplex {s:?} is invariant but not fixed vertexwise"),
            RealError::NotFreeAction => write!(f, "the involution has fixed points"),
            RealError::UnsupportedParams(why) => write!(f, "unsupported parameters: {why}"),
            RealError::BadSimplex(s) => write!(f, "malformed simplex {s:?}"),
        }
    }
}

/// A finite abstract simplicial complex, stored with every face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// `by_dim[p]` is the sorted list of sorted `p`-simplices.
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<BTreeMap<Simplex, usize>>,
}

impl SimplicialComplex {
    /// Closure of the given simplices under taking faces.
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(generators: I) -> Result<Self, RealError> {
        let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
        for mut s in generators {
            s.sort_unstable();
            if s.is_empty() || s.windows(2).any(|w| w[0] == w[1]) {
                return Err(RealError::BadSimplex(s));
            }
            add_with_faces(&mut sets, &s);
        }
        Ok(Self::from_sets(sets))
    }

    fn from_sets(sets: Vec<BTreeSet<Simplex>>) -> Self {
        let by_dim: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = by_dim.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        SimplicialComplex { by_dim, index }
    }

    pub fn empty() -> Self {
        SimplicialComplex { by_dim: Vec::new(), index: Vec::new() }
    }

    /// `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.by_dim.len() as i64 - 1
    }

    pub fn simplices(&self, p: usize) -> &[Simplex] {
        self.by_dim.get(p).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices(p).len()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(p, l)| if p % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    /// Simplicial cochain complex (all generators free), before any reduction.
    pub fn sparse_cochains(&self) -> SparseComplex {
        let orders = self.by_dim.iter().map(|l| vec![Int::from(0); l.len()]).collect();
        let mut c = SparseComplex::new(0, orders);
        for p in 1..self.by_dim.len() {
            for (t, s) in self.by_dim[p].iter().enumerate() {
                for (j, f) in faces(s).into_iter().enumerate() {
                    let src = self.index[p - 1][&f];
                    c.add_entry(p - 1, src, t, Int::from(if j % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
        c
    }

    /// A complex with the same cohomology, after unit-pivot reduction.
    pub fn cochain_complex(&self) -> CochainComplex {
        let mut c = self.sparse_cochains();
        c.reduce();
        c.to_dense()
    }

    pub fn cohomology(&self) -> Vec<FGAbelianGroup> {
        let c = self.cochain_complex();
        (0..=self.dim().max(-1)).map(|p| c.cohomology(p).expect("valid complex")).collect()
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        let verts = self.vertices();
        let pos: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, pos[&e[0]]), find(&mut parent, pos[&e[1]]));
            parent[a] = b;
        }
        (0..verts.len()).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// Whether every edge lies in exactly two triangles and every vertex link is one cycle.
    pub fn is_closed_surface(&self) -> bool {
        if self.dim() != 2 {
            return false;
        }
        let mut edge_count: BTreeMap<&Simplex, usize> = BTreeMap::new();
        for t in self.simplices(2) {
            for f in faces(t) {
                *edge_count.entry(&self.by_dim[1][self.index[1][&f]]).or_default() += 1;
            }
        }
        if self.simplices(1).iter().any(|e| edge_count.get(e) != Some(&2)) {
            return false;
        }
        self.vertices().into_iter().all(|v| {
            let link: Vec<(usize, usize)> = self
                .simplices(2)
                .iter()
                .filter(|t| t.contains(&v))
                .map(|t| {
                    let o: Vec<usize> = t.iter().copied().filter(|&x| x != v).collect();
                    (o[0], o[1])
                })
                .collect();
            is_single_cycle(&link)
        })
    }
}

fn is_single_cycle(edges: &[(usize, usize)]) -> bool {
    if edges.len() < 3 {
        return false;
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.values().any(|n| n.len() != 2) || adj.len() != edges.len() {
        return false;
    }
    let start = *adj.keys().next().expect("nonempty");
    let (mut prev, mut cur, mut steps) = (start, adj[&start][0], 1);
    while cur != start {
        let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
        prev = cur;
        cur = next;
        steps += 1;
    }
    steps == edges.len()
}

fn add_with_faces(sets: &mut Vec<BTreeSet<Simplex>>, s: &[usize]) {
    let p = s.len() - 1;
    if sets.len() <= p {
        sets.resize_with(p + 1, BTreeSet::new);
    }
    if !sets[p].insert(s.to_vec()) || p == 0 {
        return;
    }
    for f in faces(s) {
        add_with_faces(sets, &f);
    }
}

/// Codimension-one faces, the `j`-th omitting the `j`-th vertex.
pub fn faces(s: &[usize]) -> Vec<Simplex> {
    if s.len() <= 1 {
        return Vec::new();
    }
    (0..s.len()).map(|j| s.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v).collect()).collect()
}

/// Sign of the permutation sorting `seq` (distinct entries).
pub fn sort_sign(seq: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A simplicial complex on vertices `0..n` with a vertex involution `tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealComplex {
    complex: SimplicialComplex,
    tau: Vec<usize>,
}

/// One orbit of simplices under the involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCell {
    /// Smaller member of the orbit (lexicographically).
    pub rep: Simplex,
    /// The other member when the orbit has two elements.
    pub partner: Option<Simplex>,
}

impl OrbitCell {
    pub fn is_free(&self) -> bool {
        self.partner.is_some()
    }
}

/// `X/G` as a Δ-complex of orbits, with the orbit map on simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitComplex {
    pub cells: Vec<Vec<OrbitCell>>,
    orbit_of: Vec<BTreeMap<Simplex, usize>>,
}

impl OrbitComplex {
    pub fn orbit_of(&self, s: &[usize]) -> Option<usize> {
        self.orbit_of.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn count(&self, p: usize) -> usize {
        self.cells.get(p).map_or(0, |c| c.len())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(p, c)| if p % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }
}

impl RealComplex {
    /// Checks that `tau` is a vertex involution and that it maps simplices
    /// to simplices. Regularity is checked separately by [`RealComplex::validate`].
    pub fn new(n_vertices: usize, simplices: Vec<Simplex>, tau: Vec<usize>) -> Result<Self, RealError> {
        if tau.len() != n_vertices || tau.iter().enumerate().any(|(v, &t)| t >= n_vertices || tau[t] != v) {
            return Err(RealError::NotInvolution);
        }
        let mut all = simplices;
        all.extend((0..n_vertices).map(|v| vec![v]));
        for s in &all {
            if s.iter().any(|&v| v >= n_vertices) {
                return Err(RealError::BadSimplex(s.clone()));
            }
        }
        let complex = SimplicialComplex::from_simplices(all)?;
        let x = RealComplex { complex, tau };
        for p in 0..x.complex.by_dim.len() {
            for s in x.complex.simplices(p) {
                if !x.complex.contains(&x.image(s)) {
                    return Err(RealError::NotSimplicial(s.clone()));
                }
            }
        }
        Ok(x)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn n_vertices(&self) -> usize {
        self.tau.len()
    }

    pub fn dim(&self) -> i64 {
        self.complex.dim()
    }

    /// Sorted image of a simplex.
    pub fn image(&self, s: &[usize]) -> Simplex {
        let mut t: Simplex = s.iter().map(|&v| self.tau[v]).collect();
        t.sort_unstable();
        t
    }

    /// Sorted image and the sign relating `τ·[s]` to the sorted orientation.
    pub fn oriented_image(&self, s: &[usize]) -> (Simplex, i64) {
        let raw: Simplex = s.iter().map(|&v| self.tau[v]).collect();
        let sign = sort_sign(&raw);
        let mut t = raw;
        t.sort_unstable();
        (t, sign)
    }

    pub fn is_fixed_vertexwise(&self, s: &[usize]) -> bool {
        s.iter().all(|&v| self.tau[v] == v)
    }

    /// First simplex that is invariant without being fixed vertexwise.
    pub fn validate(&self) -> Result<(), RealError> {
        for p in 0..self.complex.by_dim.len() {
            for s in self.complex.simplices(p) {
                if &self.image(s) == s && !self.is_fixed_vertexwise(s) {
                    return Err(RealError::Irregular(s.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn is_free(&self) -> bool {
        self.tau.iter().enumerate().all(|(v, &t)| v != t)
    }

    /// Barycentric subdivision; vertices are the simplices of `self` in
    /// dimension-then-lexicographic order.
    pub fn barycentric_subdivide(&self) -> RealComplex {
        let mut label: BTreeMap<Simplex, usize> = BTreeMap::new();
        for p in 0..self.complex.by_dim.len() {
            for s in self.complex.simplices(p) {
                let n = label.len();
                label.insert(s.clone(), n);
            }
        }
        let tau: Vec<usize> = {
            let mut t = vec![0; label.len()];
            for (s, &i) in &label {
                t[i] = label[&self.image(s)];
            }
            t
        };
        // maximal chains s_0 ⊂ s_1 ⊂ … of faces of each top simplex
        let mut flags: Vec<Simplex> = Vec::new();
        for p in 0..self.complex.by_dim.len() {
            for s in self.complex.simplices(p) {
                let mut chains: Vec<Vec<Simplex>> = vec![vec![s.clone()]];
                for _ in 0..p {
                    let mut next = Vec::new();
                    for ch in chains {
                        for f in faces(ch.last().expect("nonempty")) {
                            let mut c = ch.clone();
                            c.push(f);
                            next.push(c);
                        }
                    }
                    chains = next;
                }
                flags.extend(chains.into_iter().map(|ch| ch.iter().map(|f| label[f]).collect()));
            }
        }
        RealComplex::new(label.len(), flags, tau).expect("subdivision of a Real complex")
    }

    pub fn fixed_subcomplex(&self) -> SimplicialComplex {
        let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
        for p in 0..self.complex.by_dim.len() {
            for s in self.complex.simplices(p) {
                if self.is_fixed_vertexwise(s) {
                    if sets.len() <= p {
                        sets.resize_with(p + 1, BTreeSet::new);
                    }
                    sets[p].insert(s.clone());
                }
            }
        }
        SimplicialComplex::from_sets(sets)
    }

    pub fn quotient(&self) -> OrbitComplex {
        let mut cells = Vec::new();
        let mut orbit_of = Vec::new();
        for p in 0..self.complex.by_dim.len() {
            let mut level = Vec::new();
            let mut map = BTreeMap::new();
            for s in self.complex.simplices(p) {
                if map.contains_key(s) {
                    continue;
                }
                let t = self.image(s);
                let idx = level.len();
                map.insert(s.clone(), idx);
                if &t == s {
                    level.push(OrbitCell { rep: s.clone(), partner: None });
                } else {
                    map.insert(t.clone(), idx);
                    level.push(OrbitCell { rep: s.clone(), partner: Some(t) });
                }
            }
            cells.push(level);
            orbit_of.push(map);
        }
        OrbitComplex { cells, orbit_of }
    }

    /// Whether `χ(X) = 2χ(X/G) − χ(X^G)`.
    pub fn euler_identity_holds(&self) -> bool {
        self.complex.euler_characteristic()
            == 2 * self.quotient().euler_characteristic() - self.fixed_subcomplex().euler_characteristic()
    }
}
