//! Standard Real complexes: spheres, surfaces and graphs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::{faces, sort_sign, RealComplex, RealError, Simplex, SimplicialComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// `S^d` as the boundary of a `(d+1)`-simplex, identity involution.
    SphereTrivial(usize),
    /// `S^d` as the boundary of the cross-polytope, antipodal involution.
    SphereAntipodal(usize),
    /// Genus-`g` surface with a free orientation-reversing involution.
    SurfaceFree(usize),
    /// Genus-`g` surface doubled along `g+1` fixed circles.
    SurfaceReflection(usize),
    /// A graph with one fixed arc, `lambda` fixed circles and `free_loops`
    /// pairs of swapped loops.
    AffineCurve { lambda: usize, free_loops: usize },
}

pub fn build_model(kind: ModelKind) -> Result<RealComplex, RealError> {
    let x = match kind {
        ModelKind::SphereTrivial(d) => sphere_trivial(d),
        ModelKind::SphereAntipodal(d) => sphere_antipodal(d),
        ModelKind::SurfaceFree(g) => surface_free(g),
        ModelKind::SurfaceReflection(g) => surface_reflection(g)?,
        ModelKind::AffineCurve { lambda, free_loops } => affine_curve(lambda, free_loops)?,
    };
    x.validate()?;
    Ok(x)
}

fn sphere_trivial(d: usize) -> RealComplex {
    let n = d + 2;
    let facets = (0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect();
    RealComplex::new(n, facets, (0..n).collect()).expect("identity involution")
}

fn sphere_antipodal(d: usize) -> RealComplex {
    // vertex 2i is +e_i, 2i+1 is −e_i
    let mut facets: Vec<Simplex> = vec![Vec::new()];
    for i in 0..=d {
        facets = facets
            .into_iter()
            .flat_map(|f| {
                [0, 1].into_iter().map(move |s| {
                    let mut g = f.clone();
                    g.push(2 * i + s);
                    g
                })
            })
            .collect();
    }
    let tau = (0..2 * (d + 1)).map(|v| v ^ 1).collect();
    RealComplex::new(2 * (d + 1), facets, tau).expect("antipodal map")
}

const RP2: [[usize; 3]; 10] =
    [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1], [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]];

/// Connected sum of `k ≥ 1` six-vertex projective planes: copy `c` loses
/// `{2,3,5}` and copy `c+1` loses `{0,1,2}`, glued by `2↦0, 3↦1, 5↦2`.
pub(crate) fn nonorientable_surface(k: usize) -> SimplicialComplex {
    let glue_out = [2, 3, 5];
    let glue_in = [0, 1, 2];
    let mut label: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut next = 0;
    for c in 0..k {
        for v in 0..6 {
            let id = match glue_in.iter().position(|&w| w == v) {
                Some(i) if c > 0 => label[&(c - 1, glue_out[i])],
                _ => {
                    next += 1;
                    next - 1
                }
            };
            label.insert((c, v), id);
        }
    }
    let mut tris = Vec::new();
    for c in 0..k {
        for t in RP2 {
            let mut sorted = t;
            sorted.sort_unstable();
            if (c > 0 && sorted == glue_in) || (c + 1 < k && sorted == glue_out) {
                continue;
            }
            tris.push(t.iter().map(|&v| label[&(c, v)]).collect());
        }
    }
    SimplicialComplex::from_simplices(tris).expect("valid triangles")
}

/// Orientation double cover of a closed surface: vertex `2v` or `2v+1`
/// according to which of the two orientations of the star of `v` is used.
pub(crate) fn orientation_cover(n: &SimplicialComplex) -> RealComplex {
    // reference orientation of each star, as the sign of each triangle in it
    let mut reference: BTreeMap<(usize, Simplex), i64> = BTreeMap::new();
    for v in n.vertices() {
        let link: Vec<(usize, usize)> = n
            .simplices(2)
            .iter()
            .filter(|t| t.contains(&v))
            .map(|t| {
                let o: Vec<usize> = t.iter().copied().filter(|&x| x != v).collect();
                (o[0], o[1])
            })
            .collect();
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(a, b) in &link {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let start = link[0].0;
        let (mut prev, mut cur) = (start, link[0].1);
        loop {
            let mut t = vec![v, prev, cur];
            let sign = sort_sign(&t);
            t.sort_unstable();
            reference.insert((v, t), sign);
            if cur == start {
                break;
            }
            let nb = &adj[&cur];
            let nxt = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = nxt;
        }
    }
    let mut tris = Vec::new();
    for t in n.simplices(2) {
        for o in [1i64, -1] {
            tris.push(
                t.iter()
                    .map(|&w| {
                        let eps = o * reference[&(w, t.clone())];
                        2 * w + usize::from(eps < 0)
                    })
                    .collect(),
            );
        }
    }
    let nv = 2 * (n.vertices().into_iter().max().map_or(0, |m| m + 1));
    RealComplex::new(nv, tris, (0..nv).map(|v| v ^ 1).collect()).expect("deck involution")
}

fn surface_free(g: usize) -> RealComplex {
    orientation_cover(&nonorientable_surface(g + 1))
}

/// Triangulated planar surface with `g` holes: a grid of unit squares with
/// the hole cells removed.
pub(crate) fn planar_surface(g: usize) -> SimplicialComplex {
    let (w, h) = if g == 0 { (2, 2) } else { (3 * g + 2, 5) };
    let holes: BTreeSet<(usize, usize)> = (0..g).map(|k| (2 + 3 * k, 2)).collect();
    let id = |x: usize, y: usize| y * (w + 1) + x;
    let mut tris: Vec<Simplex> = Vec::new();
    for cy in 0..h {
        for cx in 0..w {
            if holes.contains(&(cx, cy)) {
                continue;
            }
            let anti = (cx, cy) == (w - 1, 0) || (cx, cy) == (0, h - 1);
            let (a, b, c, d) = (id(cx, cy), id(cx + 1, cy), id(cx, cy + 1), id(cx + 1, cy + 1));
            if anti {
                tris.push(vec![a, b, c]);
                tris.push(vec![b, d, c]);
            } else {
                tris.push(vec![a, b, d]);
                tris.push(vec![a, c, d]);
            }
        }
    }
    SimplicialComplex::from_simplices(tris).expect("valid triangles")
}

/// Two copies of a surface with boundary glued along the boundary, with the
/// involution exchanging the copies.
pub(crate) fn double_along_boundary(p: &SimplicialComplex) -> Result<RealComplex, RealError> {
    let mut edge_use: BTreeMap<Simplex, usize> = BTreeMap::new();
    for t in p.simplices(2) {
        for e in faces(t) {
            *edge_use.entry(e).or_default() += 1;
        }
    }
    let boundary_edges: BTreeSet<Simplex> = edge_use.into_iter().filter(|(_, n)| *n == 1).map(|(e, _)| e).collect();
    let on_boundary: BTreeSet<usize> = boundary_edges.iter().flatten().copied().collect();
    for dim in 1..=2 {
        for s in p.simplices(dim) {
            if s.iter().all(|v| on_boundary.contains(v)) && !boundary_edges.contains(s) {
                return Err(RealError::UnsupportedParams("interior simplex spanned by boundary vertices"));
            }
        }
    }
    let verts = p.vertices();
    let mut top = BTreeMap::new();
    let mut bottom = BTreeMap::new();
    let mut tau = Vec::new();
    for &v in &verts {
        let a = tau.len();
        top.insert(v, a);
        if on_boundary.contains(&v) {
            bottom.insert(v, a);
            tau.push(a);
        } else {
            bottom.insert(v, a + 1);
            tau.push(a + 1);
            tau.push(a);
        }
    }
    let mut tris = Vec::new();
    for t in p.simplices(2) {
        tris.push(t.iter().map(|v| top[v]).collect());
        tris.push(t.iter().map(|v| bottom[v]).collect());
    }
    RealComplex::new(tau.len(), tris, tau)
}

fn surface_reflection(g: usize) -> Result<RealComplex, RealError> {
    double_along_boundary(&planar_surface(g))
}

fn affine_curve(lambda: usize, free_loops: usize) -> Result<RealComplex, RealError> {
    let mut tau = vec![0, 1];
    let mut edges: Vec<Simplex> = vec![vec![0, 1]];
    let fresh_fixed = |tau: &mut Vec<usize>| {
        tau.push(tau.len());
        tau.len() - 1
    };
    let fresh_pair = |tau: &mut Vec<usize>| {
        let a = tau.len();
        tau.push(a + 1);
        tau.push(a);
        (a, a + 1)
    };
    for _ in 0..lambda {
        let c: Vec<usize> = (0..3).map(|_| fresh_fixed(&mut tau)).collect();
        edges.extend([vec![c[0], c[1]], vec![c[1], c[2]], vec![c[0], c[2]]]);
        let (u, u2) = fresh_pair(&mut tau);
        edges.extend([vec![0, u], vec![u, c[0]], vec![0, u2], vec![u2, c[0]]]);
    }
    for _ in 0..free_loops {
        let (x, x2) = fresh_pair(&mut tau);
        let (y, y2) = fresh_pair(&mut tau);
        edges.extend([vec![0, x], vec![x, y], vec![0, y], vec![0, x2], vec![x2, y2], vec![0, y2]]);
    }
    graph_model(tau.len(), edges, tau, lambda)
}

/// A one-dimensional Real complex whose fixed set has exactly `lambda`
/// circle components (other fixed components are trees).
pub fn graph_model(
    n_vertices: usize,
    edges: Vec<Simplex>,
    tau: Vec<usize>,
    lambda: usize,
) -> Result<RealComplex, RealError> {
    if edges.iter().any(|e| e.len() != 2) {
        return Err(RealError::UnsupportedParams("graph models have only edges"));
    }
    let x = RealComplex::new(n_vertices, edges, tau)?;
    x.validate()?;
    let fixed = x.fixed_subcomplex();
    let h = fixed.cohomology();
    let circles = h.get(1).map_or(0, |g| g.free_rank());
    let circle_components = count_circle_components(&fixed);
    if circles != lambda || circle_components != lambda {
        return Err(RealError::UnsupportedParams("fixed set does not consist of lambda circles and trees"));
    }
    Ok(x)
}

fn count_circle_components(k: &SimplicialComplex) -> usize {
    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in k.simplices(1) {
        *degree.entry(e[0]).or_default() += 1;
        *degree.entry(e[1]).or_default() += 1;
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for v in k.vertices() {
        if !seen.insert(v) {
            continue;
        }
        let mut stack = vec![v];
        let mut comp = vec![v];
        while let Some(a) = stack.pop() {
            for &b in adj.get(&a).map_or(&[][..], |n| n.as_slice()) {
                if seen.insert(b) {
                    stack.push(b);
                    comp.push(b);
                }
            }
        }
        if comp.len() >= 3 && comp.iter().all(|w| degree.get(w) == Some(&2)) {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonorientable_surfaces_are_closed_surfaces() {
        for k in 1..=4 {
            let n = nonorientable_surface(k);
            assert!(n.is_closed_surface(), "k = {k}");
            assert_eq!(n.euler_characteristic(), 2 - k as i64);
            assert_eq!(n.count(2), 8 * k + 2);
        }
    }

    #[test]
    fn free_surfaces() {
        for g in 0..=3 {
            let x = build_model(ModelKind::SurfaceFree(g)).unwrap();
            assert!(x.is_free());
            assert!(x.complex().is_closed_surface());
            assert_eq!(x.complex().euler_characteristic(), 2 - 2 * g as i64);
            assert_eq!(x.complex().components(), 1);
            assert_eq!(x.quotient().euler_characteristic(), 1 - g as i64);
            assert!(x.euler_identity_holds());
        }
    }

    #[test]
    fn reflection_surfaces() {
        for g in 0..=3 {
            let x = build_model(ModelKind::SurfaceReflection(g)).unwrap();
            assert!(x.complex().is_closed_surface(), "g = {g}");
            assert_eq!(x.complex().euler_characteristic(), 2 - 2 * g as i64);
            let f = x.fixed_subcomplex();
            assert_eq!(f.components(), g + 1);
            assert_eq!(f.euler_characteristic(), 0);
            assert_eq!(x.quotient().euler_characteristic(), 1 - g as i64);
            assert!(x.euler_identity_holds());
        }
    }

    #[test]
    fn spheres() {
        for d in 0..=3 {
            let t = build_model(ModelKind::SphereTrivial(d)).unwrap();
            let a = build_model(ModelKind::SphereAntipodal(d)).unwrap();
            let chi = if d % 2 == 0 { 2 } else { 0 };
            assert_eq!(t.complex().euler_characteristic(), chi);
            assert_eq!(a.complex().euler_characteristic(), chi);
            assert!(a.is_free());
        }
    }

    #[test]
    fn affine_curves() {
        for lambda in 0..=3 {
            let x = build_model(ModelKind::AffineCurve { lambda, free_loops: 1 }).unwrap();
            assert_eq!(x.dim(), 1);
            assert_eq!(x.fixed_subcomplex().components(), lambda + 1);
            assert!(x.euler_identity_holds());
        }
        let bad = graph_model(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]], vec![0, 1, 2], 0);
        assert!(bad.is_err());
    }
}
