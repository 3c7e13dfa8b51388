//! Fans on the positive orthant: the normal fan of the Newton
//! polyhedron and its refinement to a smooth (unimodular) fan.
//!
//! Cones are rational, generated by primitive integer vectors with
//! nonnegative entries. The refinement runs in two stages: a pulling
//! triangulation driven by a single global ray order (so shared faces of
//! adjacent cones triangulate identically), then repeated stellar
//! subdivision at fundamental-parallelepiped lattice points until every
//! maximal cone has lattice index one.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    det_i128, dot_i64, nullspace, primitive_i64, rank_int, rational_to_primitive, solve_square,
    to_rational_vec,
};
use crate::lp::{feasible, Constraint, Relation};
use crate::newton::NewtonPolyhedron;
use crate::rays::{combinations, extreme_rays};

/// Rational cone spanned by primitive integer generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub generators: Vec<Vec<i64>>,
}

impl Cone {
    pub fn new(generators: Vec<Vec<i64>>) -> Self {
        Cone { generators }
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.first().map_or(0, |g| g.len())
    }

    pub fn dim(&self) -> usize {
        rank_int(&self.generators)
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    /// Membership test, exact. Simplicial cones solve the generator
    /// system directly; general cones fall back to LP feasibility.
    pub fn contains(&self, v: &[i64]) -> bool {
        cone_contains(&self.generators, v)
    }
}

/// Fan given by its rays and maximal cones (lists of ray indices).
/// The support is the positive orthant throughout this crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, |r| r.len())
    }

    pub fn cone(&self, idx: usize) -> Cone {
        Cone::new(
            self.maximal_cones[idx]
                .iter()
                .map(|&r| self.rays[r].clone())
                .collect(),
        )
    }

    pub fn cones(&self) -> impl Iterator<Item = Cone> + '_ {
        (0..self.maximal_cones.len()).map(|i| self.cone(i))
    }

    /// Indices of maximal cones containing `v`.
    pub fn covering_cones(&self, v: &[i64]) -> Vec<usize> {
        (0..self.maximal_cones.len())
            .filter(|&i| self.cone(i).contains(v))
            .collect()
    }

    /// Rebuild deterministic order: rays lexicographic, cones by sorted
    /// ray index lists.
    fn canonicalize(cones: Vec<Vec<Vec<i64>>>) -> Fan {
        let mut rays: Vec<Vec<i64>> = Vec::new();
        for cone in &cones {
            for g in cone {
                if !rays.contains(g) {
                    rays.push(g.clone());
                }
            }
        }
        rays.sort();
        let mut maximal_cones: Vec<Vec<usize>> = cones
            .iter()
            .map(|cone| {
                let mut idx: Vec<usize> = cone
                    .iter()
                    .map(|g| rays.iter().position(|r| r == g).expect("ray present"))
                    .collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        maximal_cones.sort();
        maximal_cones.dedup();
        Fan {
            rays,
            maximal_cones,
        }
    }
}

/// Primitive form of a nonzero integer vector.
pub fn primitive(v: &[i64]) -> Result<Vec<i64>> {
    primitive_i64(v).ok_or(Error::ZeroVector)
}

/// Lattice index of a full-dimensional simplicial cone: the absolute
/// determinant of its generator matrix. Index one means the generators
/// extend to a lattice basis.
pub fn cone_index(cone: &Cone) -> Result<i64> {
    let n = cone.ambient_dim();
    if cone.generators.len() != n || !cone.is_simplicial() {
        return Err(Error::NonSimplicialCone);
    }
    // Columns are the generators.
    let m: Vec<Vec<i64>> = (0..n)
        .map(|i| cone.generators.iter().map(|g| g[i]).collect())
        .collect();
    let d = det_i128(&m).unsigned_abs();
    Ok(i64::try_from(d).expect("index fits i64"))
}

fn cone_contains(generators: &[Vec<i64>], v: &[i64]) -> bool {
    let n = v.len();
    if generators.len() == n && rank_int(generators) == n {
        // Cramer on the integer system keeps this exact and fast.
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|i| generators.iter().map(|g| g[i]).collect())
            .collect();
        let det = det_i128(&cols);
        debug_assert!(det != 0);
        for j in 0..n {
            let mut m = cols.clone();
            for i in 0..n {
                m[i][j] = v[i];
            }
            let dj = det_i128(&m);
            if dj != 0 && (dj > 0) != (det > 0) {
                return false;
            }
        }
        true
    } else {
        let k = generators.len();
        let constraints: Vec<Constraint> = (0..n)
            .map(|i| {
                Constraint::new(
                    generators
                        .iter()
                        .map(|g| BigRational::from_integer(g[i].into()))
                        .collect(),
                    Relation::Eq,
                    BigRational::from_integer(v[i].into()),
                )
            })
            .collect();
        feasible(k, &constraints)
    }
}

/// Facets of a cone of any dimension, each returned as the sublist of
/// generators it contains. Works inside the cone's own linear span.
fn cone_facets(generators: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let n = generators[0].len();
    let d = rank_int(generators);
    let idx: Vec<usize> = (0..generators.len()).collect();
    let mut facets: Vec<Vec<Vec<i64>>> = Vec::new();
    if d < 2 {
        return facets;
    }
    for subset in combinations(&idx, d - 1) {
        let sub: Vec<Vec<i64>> = subset.iter().map(|&i| generators[i].clone()).collect();
        if rank_int(&sub) != d - 1 {
            continue;
        }
        // A supporting functional inside span(generators), vanishing on
        // the subset: solve for xi in the span with <xi, s> = 0.
        // Parametrize xi = sum a_i g_i and require orthogonality to the
        // subset, then a one-dimensional solution space means a facet
        // candidate.
        let k = generators.len();
        let rows: Vec<Vec<BigRational>> = sub
            .iter()
            .map(|s| {
                (0..k)
                    .map(|i| BigRational::from_integer(dot_i64(&generators[i], s).into()))
                    .map(|x| {
                        BigRational::new(
                            x.numer().clone(),
                            x.denom().clone(),
                        )
                    })
                    .collect()
            })
            .collect();
        let ns = nullspace(&rows, k);
        // Candidate functionals from each null direction; dim of the
        // orthogonal space inside the span is 1 for a facet.
        for a in &ns {
            let xi_rat: Vec<BigRational> = (0..n)
                .map(|coord| {
                    (0..k)
                        .map(|i| &a[i] * BigRational::from_integer(generators[i][coord].into()))
                        .sum()
                })
                .collect();
            let Some(xi) = rational_to_primitive(&xi_rat) else {
                continue;
            };
            for cand in [xi.clone(), xi.iter().map(|x| -x).collect::<Vec<i64>>()] {
                if generators.iter().all(|g| dot_i64(&cand, g) >= 0) {
                    let tight: Vec<Vec<i64>> = generators
                        .iter()
                        .filter(|g| dot_i64(&cand, g) == 0)
                        .cloned()
                        .collect();
                    if rank_int(&tight) == d - 1 && !facets.contains(&tight) {
                        facets.push(tight);
                    }
                    break;
                }
            }
        }
    }
    facets
}

/// Normal fan of the Newton polyhedron: rays are the primitive facet
/// normals (the axis directions always among them), and the maximal
/// cones are the vertex normal cones.
pub fn normal_fan(np: &NewtonPolyhedron) -> Fan {
    let n = np.dim;
    let mut cones: Vec<Vec<Vec<i64>>> = Vec::new();
    for v in &np.vertices {
        let vi: Vec<i64> = v.iter().map(|&k| k as i64).collect();
        let gens: Vec<Vec<i64>> = np
            .facets
            .iter()
            .filter(|f| dot_i64(&f.normal, &vi) == f.offset as i128)
            .map(|f| f.normal.clone())
            .collect();
        cones.push(gens);
    }
    let mut fan = Fan::canonicalize(cones);
    for a in 0..n {
        let mut e = vec![0i64; n];
        e[a] = 1;
        if !fan.rays.contains(&e) {
            fan.rays.push(e);
            fan.rays.sort();
            fan = Fan {
                rays: fan.rays.clone(),
                maximal_cones: fan.maximal_cones.clone(),
            };
        }
    }
    fan
}

/// Pulling triangulation of a cone: recurse on the facets not containing
/// the globally smallest ray, then cone over that ray. With the ray
/// order fixed across the whole fan, restrictions to shared faces agree.
fn triangulate_cone(generators: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let d = rank_int(generators);
    if generators.len() == d {
        return vec![generators.to_vec()];
    }
    let puller = generators.iter().min().expect("nonempty").clone();
    let mut out = Vec::new();
    for facet in cone_facets(generators) {
        if facet.contains(&puller) {
            continue;
        }
        for simplex in triangulate_cone(&facet) {
            let mut cell = simplex;
            cell.push(puller.clone());
            cell.sort();
            out.push(cell);
        }
    }
    out
}

/// Nonzero lattice points of the fundamental parallelepiped
/// `{sum c_i g_i : 0 <= c_i < 1}` of a full-dimensional simplicial cone,
/// reduced to primitive vectors and deduplicated.
fn parallelepiped_points(generators: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = generators[0].len();
    let sums: Vec<i64> = (0..n).map(|i| generators.iter().map(|g| g[i]).sum()).collect();
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            generators
                .iter()
                .map(|g| BigRational::from_integer(g[i].into()))
                .collect()
        })
        .collect();
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut z = vec![0i64; n];
    loop {
        if z.iter().any(|&c| c != 0) {
            let rhs: Vec<BigRational> = z
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect();
            if let Some(c) = solve_square(&a, &rhs) {
                let one = BigRational::from_integer(1.into());
                if c.iter().all(|ci| !ci.is_negative() && *ci < one) {
                    let p = primitive_i64(&z).expect("nonzero");
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        // Odometer over the bounding box [0, sum_i g_i].
        let mut k = 0;
        loop {
            if k == n {
                out.sort();
                return out;
            }
            if z[k] < sums[k] {
                z[k] += 1;
                break;
            }
            z[k] = 0;
            k += 1;
        }
    }
}

/// Coefficients of `v` in the generator basis of a full-dimensional
/// simplicial cone; `None` when any coefficient is negative.
fn membership_coefficients(generators: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigRational>> {
    let n = v.len();
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            generators
                .iter()
                .map(|g| BigRational::from_integer(g[i].into()))
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let c = solve_square(&a, &rhs)?;
    if c.iter().any(|ci| ci.is_negative()) {
        None
    } else {
        Some(c)
    }
}

/// Stellar subdivision of a set of simplicial cones at ray `r`.
fn stellar_subdivide(cones: &[Vec<Vec<i64>>], r: &[i64]) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for cone in cones {
        match membership_coefficients(cone, r) {
            None => out.push(cone.clone()),
            Some(coeffs) => {
                let mut pieces = Vec::new();
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut piece = cone.clone();
                    piece[i] = r.to_vec();
                    piece.sort();
                    if !pieces.contains(&piece) {
                        pieces.push(piece);
                    }
                }
                out.extend(pieces);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn max_index(cones: &[Vec<Vec<i64>>]) -> i64 {
    cones
        .iter()
        .map(|c| cone_index(&Cone::new(c.clone())).expect("simplicial"))
        .max()
        .unwrap_or(1)
}

/// Refine a fan supported on the positive orthant into a smooth fan with
/// the same support: a simplicial subdivision in which every maximal
/// cone has lattice index one. All input rays survive into the output.
pub fn smooth_refinement(fan: &Fan) -> Result<Fan> {
    let mut cones: Vec<Vec<Vec<i64>>> = Vec::new();
    for cone in fan.cones() {
        cones.extend(triangulate_cone(&cone.generators));
    }
    cones.sort();
    cones.dedup();

    let mut rounds = 0usize;
    loop {
        rounds += 1;
        if rounds > 10_000 {
            return Err(Error::InvalidInput(
                "fan refinement failed to terminate".into(),
            ));
        }
        let worst = cones
            .iter()
            .find(|c| cone_index(&Cone::new((*c).clone())).expect("simplicial") > 1)
            .cloned();
        let Some(target) = worst else { break };
        let candidates = parallelepiped_points(&target);
        debug_assert!(!candidates.is_empty());
        // Choose the candidate minimizing the worst resulting piece
        // index across every cone the subdivision touches; ties go to
        // the lexicographically smallest ray.
        let mut best: Option<(i64, Vec<i64>)> = None;
        for cand in candidates {
            let affected: Vec<Vec<Vec<i64>>> = cones
                .iter()
                .filter(|c| membership_coefficients(c, &cand).is_some())
                .cloned()
                .collect();
            let pieces = stellar_subdivide(&affected, &cand);
            let score = max_index(&pieces);
            let better = match &best {
                None => true,
                Some((s, v)) => score < *s || (score == *s && cand < *v),
            };
            if better {
                best = Some((score, cand));
            }
        }
        let (_, ray) = best.expect("candidate exists for index > 1");
        cones = stellar_subdivide(&cones, &ray);
    }
    Ok(Fan::canonicalize(cones))
}

/// Exact structural validation used by the test suites: pairwise
/// intersections of maximal cones are common faces, and every interior
/// codimension-one face is shared by exactly two maximal cones.
pub fn check_simplicial_fan(fan: &Fan) -> Result<()> {
    let n = fan.dim();
    let cones: Vec<Cone> = fan.cones().collect();
    for c in &cones {
        if !c.is_simplicial() || c.generators.len() != n {
            return Err(Error::NonSimplicialCone);
        }
    }
    // Pairwise: extreme rays of the intersection must be exactly the
    // shared generators (a face of each simplicial cone).
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            let mut rows = simplicial_inequalities(&cones[i].generators);
            rows.extend(simplicial_inequalities(&cones[j].generators));
            let rays = extreme_rays(&rows, n);
            let shared: Vec<Vec<i64>> = cones[i]
                .generators
                .iter()
                .filter(|g| cones[j].generators.contains(g))
                .cloned()
                .collect();
            let mut shared_sorted = shared;
            shared_sorted.sort();
            if rays != shared_sorted {
                return Err(Error::InvalidInput(format!(
                    "cones {i} and {j} do not intersect in a common face"
                )));
            }
        }
    }
    // Interior facets: count how many maximal cones contain each
    // codimension-one generator subset; a facet off the orthant
    // boundary must appear exactly twice.
    let mut facet_counts: Vec<(Vec<Vec<i64>>, usize)> = Vec::new();
    for c in &cones {
        for skip in 0..c.generators.len() {
            let mut facet: Vec<Vec<i64>> = c
                .generators
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, g)| g.clone())
                .collect();
            facet.sort();
            match facet_counts.iter_mut().find(|(f, _)| *f == facet) {
                Some((_, count)) => *count += 1,
                None => facet_counts.push((facet, 1)),
            }
        }
    }
    for (facet, count) in &facet_counts {
        let on_boundary = (0..n).any(|a| facet.iter().all(|g| g[a] == 0));
        if !on_boundary && *count != 2 {
            return Err(Error::InvalidInput(format!(
                "interior facet shared by {count} cones: {facet:?}"
            )));
        }
    }
    Ok(())
}

/// Facet inequalities of a full-dimensional simplicial cone, as integer
/// rows `<row, x> >= 0`.
fn simplicial_inequalities(generators: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = generators[0].len();
    let idx: Vec<usize> = (0..generators.len()).collect();
    let mut rows = Vec::new();
    for subset in combinations(&idx, n - 1) {
        let sub: Vec<Vec<BigRational>> = subset
            .iter()
            .map(|&i| to_rational_vec(&generators[i]))
            .collect();
        let ns = nullspace(&sub, n);
        if ns.len() != 1 {
            continue;
        }
        let Some(xi) = rational_to_primitive(&ns[0]) else {
            continue;
        };
        for cand in [xi.clone(), xi.iter().map(|x| -x).collect::<Vec<i64>>()] {
            if generators.iter().all(|g| dot_i64(&cand, g) >= 0) {
                if !rows.contains(&cand) {
                    rows.push(cand);
                }
                break;
            }
        }
    }
    rows
}
