//! Newton polyhedron of a phase: exact hull, faces, distance, and the
//! weighted index quantities.
//!
//! The polyhedron is `conv(support(f)) + R_+^n`. Both descriptions are
//! kept: vertices (a subset of the support) and facets `<xi, x> >= l(xi)`
//! with primitive integer normals `xi >= 0`. Hull construction follows
//! the duality route: the facet normals are the extreme rays of the
//! polar-side cone `{(xi, c) : <v, xi> + c >= 0, xi >= 0}`, enumerated
//! exactly.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot_i64, rank, to_rational_vec};
use crate::lp::{feasible, Constraint, Relation};
use crate::poly::Polynomial;
use crate::rays::extreme_rays;

/// Supporting inequality `<normal, x> >= offset` of the polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolyhedron {
    pub dim: usize,
    /// Extreme points, each a lattice point from the support.
    pub vertices: Vec<Vec<u32>>,
    /// Irredundant H-description, including the axis facets.
    pub facets: Vec<Facet>,
}

/// A face, identified by the full set of facets containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Indices into `NewtonPolyhedron::facets`, sorted; every facet
    /// tight on the whole face is listed.
    pub tight_facets: Vec<usize>,
    /// Indices into `NewtonPolyhedron::vertices`, sorted.
    pub vertices: Vec<usize>,
    /// Axes `a` with `e_a` in the recession cone of the face.
    pub recession_axes: Vec<usize>,
    pub dimension: usize,
    pub compact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceResult {
    /// The Newton distance `d_f`, exact.
    pub distance: BigRational,
    /// Minimal face containing `(d_f, ..., d_f)`.
    pub principal_face: Face,
    /// `n - dim(principal_face)`.
    pub codimension: usize,
}

/// Result of the weighted index computation for a damping exponent beta:
/// the maximal `c` with `(beta + 1)/c` in the polyhedron, and the
/// greatest codimension over faces containing that point.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedIndex {
    pub value: BigRational,
    pub max_codim: usize,
}

/// Reject phases violating the analysis hypotheses: the zero polynomial,
/// a nonzero constant term (`f(0) != 0`), or a degree-one term
/// (`grad f(0) != 0`).
pub fn validate_phase(p: &Polynomial) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    for (exps, _) in p.terms() {
        let total: u32 = exps.iter().sum();
        if total == 0 {
            return Err(Error::NonzeroConstantTerm);
        }
        if total == 1 {
            return Err(Error::GradientAtOrigin);
        }
    }
    Ok(())
}

/// Exact Newton polyhedron of a nonzero phase with `f(0) = 0`.
pub fn newton_polyhedron(p: &Polynomial) -> Result<NewtonPolyhedron> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.dim();
    let support: Vec<Vec<i64>> = p
        .support()
        .iter()
        .map(|e| e.iter().map(|&k| k as i64).collect())
        .collect();
    if support.iter().any(|s| s.iter().all(|&k| k == 0)) {
        return Err(Error::NonzeroConstantTerm);
    }

    // Dominance filter: drop points that lie in another support point's
    // translated orthant.
    let minimal: Vec<Vec<i64>> = support
        .iter()
        .filter(|s| {
            !support
                .iter()
                .any(|t| *t != **s && t.iter().zip(s.iter()).all(|(a, b)| a <= b))
        })
        .cloned()
        .collect();

    // Facets are the nontrivial extreme rays of
    // {(xi, c) : <v, xi> + c >= 0 for v in support, xi >= 0}.
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for v in &minimal {
        let mut row = v.clone();
        row.push(1);
        rows.push(row);
    }
    for a in 0..n {
        let mut row = vec![0i64; n + 1];
        row[a] = 1;
        rows.push(row);
    }
    let mut facets: Vec<Facet> = Vec::new();
    for ray in extreme_rays(&rows, n + 1) {
        let (normal, c) = (ray[..n].to_vec(), ray[n]);
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        facets.push(Facet {
            normal,
            offset: -c,
        });
    }
    facets.sort_by(|a, b| a.normal.cmp(&b.normal));

    // A support point is a vertex exactly when its tight facet normals
    // span the whole space.
    let mut vertices: Vec<Vec<u32>> = Vec::new();
    for v in &minimal {
        let tight: Vec<Vec<i64>> = facets
            .iter()
            .filter(|f| dot_i64(&f.normal, v) == f.offset as i128)
            .map(|f| f.normal.clone())
            .collect();
        let r = rank(tight.iter().map(|t| to_rational_vec(t)).collect());
        if r == n {
            vertices.push(v.iter().map(|&k| k as u32).collect());
        }
    }
    vertices.sort();

    Ok(NewtonPolyhedron {
        dim: n,
        vertices,
        facets,
    })
}

impl NewtonPolyhedron {
    /// Membership via the H-description, exact.
    pub fn contains(&self, point: &[BigRational]) -> bool {
        if point.iter().any(|x| x.is_negative()) {
            return false;
        }
        self.facets.iter().all(|f| {
            let dot: BigRational = f
                .normal
                .iter()
                .zip(point)
                .map(|(&a, x)| BigRational::from_integer(a.into()) * x)
                .sum();
            dot >= BigRational::from_integer(f.offset.into())
        })
    }

    fn vertex_i64(&self, idx: usize) -> Vec<i64> {
        self.vertices[idx].iter().map(|&k| k as i64).collect()
    }

    /// The face cut out by a set of facets: its vertex set, recession
    /// axes, and the completed (maximal) tight facet set.
    fn face_from_tight_seed(&self, seed: &[usize]) -> Option<Face> {
        let n = self.dim;
        let verts: Vec<usize> = (0..self.vertices.len())
            .filter(|&vi| {
                let v = self.vertex_i64(vi);
                seed.iter()
                    .all(|&fi| dot_i64(&self.facets[fi].normal, &v) == self.facets[fi].offset as i128)
            })
            .collect();
        if verts.is_empty() {
            return None;
        }
        let recession: Vec<usize> = (0..n)
            .filter(|&a| seed.iter().all(|&fi| self.facets[fi].normal[a] == 0))
            .collect();
        // Complete to every facet containing the face.
        let tight: Vec<usize> = (0..self.facets.len())
            .filter(|&fi| {
                let f = &self.facets[fi];
                verts
                    .iter()
                    .all(|&vi| dot_i64(&f.normal, &self.vertex_i64(vi)) == f.offset as i128)
                    && recession.iter().all(|&a| f.normal[a] == 0)
            })
            .collect();
        let mut dirs: Vec<Vec<BigRational>> = Vec::new();
        let v0 = self.vertex_i64(verts[0]);
        for &vi in &verts[1..] {
            let v = self.vertex_i64(vi);
            dirs.push(
                v.iter()
                    .zip(&v0)
                    .map(|(a, b)| BigRational::from_integer((a - b).into()))
                    .collect(),
            );
        }
        for &a in &recession {
            let mut e = vec![BigRational::zero(); n];
            e[a] = BigRational::from_integer(1.into());
            dirs.push(e);
        }
        let dimension = rank(dirs);
        Some(Face {
            tight_facets: tight,
            vertices: verts,
            compact: recession.is_empty(),
            recession_axes: recession,
            dimension,
        })
    }

    /// All proper faces, deduplicated, ordered lexicographically by
    /// tight-facet index set.
    pub fn all_faces(&self) -> Vec<Face> {
        let m = self.facets.len();
        let mut faces: Vec<Face> = Vec::new();
        for mask in 1u64..(1 << m) {
            let seed: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            if let Some(face) = self.face_from_tight_seed(&seed) {
                if !faces.iter().any(|f| f.tight_facets == face.tight_facets) {
                    faces.push(face);
                }
            }
        }
        faces.sort_by(|a, b| a.tight_facets.cmp(&b.tight_facets));
        faces
    }

    /// Minimal face containing a boundary point of the polyhedron.
    pub fn minimal_face_of_point(&self, point: &[BigRational]) -> Result<Face> {
        if !self.contains(point) {
            return Err(Error::InvalidInput(
                "point is outside the polyhedron".into(),
            ));
        }
        let tight: Vec<usize> = (0..self.facets.len())
            .filter(|&fi| {
                let f = &self.facets[fi];
                let dot: BigRational = f
                    .normal
                    .iter()
                    .zip(point)
                    .map(|(&a, x)| BigRational::from_integer(a.into()) * x)
                    .sum();
                dot == BigRational::from_integer(f.offset.into())
            })
            .collect();
        if tight.is_empty() {
            return Err(Error::InvalidInput(
                "point lies in the interior of the polyhedron".into(),
            ));
        }
        self.face_from_tight_seed(&tight)
            .ok_or_else(|| Error::InvalidInput("tight set cuts an empty face".into()))
    }
}

/// All compact faces of every dimension `0..n-1`.
pub fn enumerate_compact_faces(np: &NewtonPolyhedron) -> Vec<Face> {
    np.all_faces().into_iter().filter(|f| f.compact).collect()
}

/// Newton distance, principal face, and its codimension.
pub fn newton_distance(np: &NewtonPolyhedron) -> Result<DistanceResult> {
    let mut best: Option<BigRational> = None;
    for f in &np.facets {
        if f.offset > 0 {
            let weight: i64 = f.normal.iter().sum();
            let ratio = BigRational::new(f.offset.into(), weight.into());
            if best.as_ref().is_none_or(|b| ratio > *b) {
                best = Some(ratio);
            }
        }
    }
    let distance = best.ok_or(Error::NoPositiveFacet)?;
    let diagonal: Vec<BigRational> = vec![distance.clone(); np.dim];
    let principal_face = np.minimal_face_of_point(&diagonal)?;
    let codimension = np.dim - principal_face.dimension;
    Ok(DistanceResult {
        distance,
        principal_face,
        codimension,
    })
}

/// Sum of the terms of `p` whose exponent lies on the given compact face.
pub fn gamma_part(p: &Polynomial, np: &NewtonPolyhedron, face: &Face) -> Result<Polynomial> {
    if !face.compact {
        return Err(Error::NonCompactFace);
    }
    let mut out = Polynomial::zero(p.dim());
    for (exps, coeff) in p.terms() {
        let e: Vec<i64> = exps.iter().map(|&k| k as i64).collect();
        let on_face = face.tight_facets.iter().all(|&fi| {
            let f = &np.facets[fi];
            dot_i64(&f.normal, &e) == f.offset as i128
        });
        if on_face {
            out.add_term(exps.clone(), coeff.clone());
        }
    }
    Ok(out)
}

/// Maximal `c > 0` such that `(beta + 1)/c` lies in the polyhedron,
/// together with the greatest codimension over faces containing that
/// point (the codimension of the minimal one).
pub fn weighted_index(np: &NewtonPolyhedron, beta: &[u32]) -> Result<WeightedIndex> {
    if beta.len() != np.dim {
        return Err(Error::DimensionMismatch {
            expected: np.dim,
            got: beta.len(),
        });
    }
    let shifted: Vec<i64> = beta.iter().map(|&b| b as i64 + 1).collect();
    let mut best: Option<BigRational> = None;
    for f in &np.facets {
        if f.offset > 0 {
            let num = dot_i64(&f.normal, &shifted);
            let ratio = BigRational::new(
                i64::try_from(num).expect("small products").into(),
                f.offset.into(),
            );
            if best.as_ref().is_none_or(|b| ratio < *b) {
                best = Some(ratio);
            }
        }
    }
    let value = best.ok_or(Error::NoPositiveFacet)?;
    let point: Vec<BigRational> = shifted
        .iter()
        .map(|&s| BigRational::from_integer(s.into()) / &value)
        .collect();
    let face = np.minimal_face_of_point(&point)?;
    Ok(WeightedIndex {
        value,
        max_codim: np.dim - face.dimension,
    })
}

/// Membership of a point in `conv(points) + R_+^n`, decided by exact LP
/// feasibility over the generating points alone. This is the V-side
/// route, independent of any facet computation.
pub fn hull_contains_by_lp(points: &[Vec<u32>], z: &[BigRational]) -> bool {
    let m = points.len();
    if m == 0 {
        return false;
    }
    let n = z.len();
    let one = || BigRational::from_integer(1.into());
    let mut constraints = Vec::with_capacity(n + 1);
    constraints.push(Constraint::new(vec![one(); m], Relation::Eq, one()));
    for j in 0..n {
        let coeffs: Vec<BigRational> = points
            .iter()
            .map(|p| BigRational::from_integer((p[j] as i64).into()))
            .collect();
        constraints.push(Constraint::new(coeffs, Relation::Le, z[j].clone()));
    }
    feasible(m, &constraints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn np_of(text: &str, dim: usize) -> NewtonPolyhedron {
        newton_polyhedron(&parse_polynomial(text, dim).unwrap()).unwrap()
    }

    #[test]
    fn hull_of_single_monomial() {
        let np = np_of("x1^2*x2", 2);
        assert_eq!(np.vertices, vec![vec![2, 1]]);
        assert_eq!(
            np.facets,
            vec![
                Facet { normal: vec![0, 1], offset: 1 },
                Facet { normal: vec![1, 0], offset: 2 },
            ]
        );
    }

    #[test]
    fn hull_of_two_point_sum() {
        let np = np_of("x1^2+x2^2", 2);
        assert_eq!(np.vertices, vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(
            np.facets,
            vec![
                Facet { normal: vec![0, 1], offset: 0 },
                Facet { normal: vec![1, 0], offset: 0 },
                Facet { normal: vec![1, 1], offset: 2 },
            ]
        );
    }

    #[test]
    fn hull_with_slope_facet() {
        let np = np_of("x1^3+x2^2", 2);
        assert_eq!(np.vertices, vec![vec![0, 2], vec![3, 0]]);
        assert!(np.facets.contains(&Facet { normal: vec![2, 3], offset: 6 }));
        assert!(np.facets.contains(&Facet { normal: vec![1, 0], offset: 0 }));
        assert!(np.facets.contains(&Facet { normal: vec![0, 1], offset: 0 }));
        assert_eq!(np.facets.len(), 3);
    }

    #[test]
    fn zero_and_constant_rejected() {
        assert!(matches!(
            newton_polyhedron(&Polynomial::zero(2)),
            Err(Error::ZeroPolynomial)
        ));
        let p = parse_polynomial("1 + x1^2", 2).unwrap();
        assert!(matches!(
            newton_polyhedron(&p),
            Err(Error::NonzeroConstantTerm)
        ));
    }

    #[test]
    fn entry_check_rejects_linear_terms() {
        let p = parse_polynomial("x1 + x2^2", 2).unwrap();
        assert!(matches!(validate_phase(&p), Err(Error::GradientAtOrigin)));
        assert!(validate_phase(&parse_polynomial("x1^2*x2", 2).unwrap()).is_ok());
    }

    #[test]
    fn distance_of_monomial_phase() {
        let np = np_of("x1^2*x2", 2);
        let d = newton_distance(&np).unwrap();
        assert_eq!(d.distance, rat(2));
        assert_eq!(d.codimension, 1);
        assert_eq!(d.principal_face.dimension, 1);
        assert!(!d.principal_face.compact);
        // Tight precisely on the facet with normal (1,0).
        let tf = &d.principal_face.tight_facets;
        assert_eq!(tf.len(), 1);
        assert_eq!(np.facets[tf[0]].normal, vec![1, 0]);
    }

    #[test]
    fn distance_with_vertex_principal_face() {
        let np = np_of("x1^2*x2^2", 2);
        let d = newton_distance(&np).unwrap();
        assert_eq!(d.distance, rat(2));
        assert_eq!(d.codimension, 2);
        assert_eq!(d.principal_face.dimension, 0);
        assert_eq!(np.vertices[d.principal_face.vertices[0]], vec![2, 2]);
    }

    #[test]
    fn distance_on_compact_edge() {
        let np = np_of("x1^3+x2^2", 2);
        let d = newton_distance(&np).unwrap();
        assert_eq!(d.distance, ratio(6, 5));
        assert_eq!(d.codimension, 1);
        assert!(d.principal_face.compact);
        assert_eq!(d.principal_face.vertices.len(), 2);
    }

    #[test]
    fn newton_distance_diagonal_characterization() {
        for (text, dim) in [("x1^2*x2", 2), ("x1^3+x2^2", 2), ("x1^2*x2+x2^5", 2)] {
            let np = np_of(text, dim);
            let d = newton_distance(&np).unwrap().distance;
            let diag: Vec<BigRational> = vec![d.clone(); dim];
            assert!(np.contains(&diag));
            let below: Vec<BigRational> =
                vec![&d - ratio(1, 1000); dim];
            assert!(!np.contains(&below));
        }
    }

    #[test]
    fn compact_face_enumeration() {
        let np = np_of("x1^2*x2", 2);
        let faces = enumerate_compact_faces(&np);
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].dimension, 0);

        let np = np_of("x1^2+x2^2", 2);
        let faces = enumerate_compact_faces(&np);
        assert_eq!(faces.len(), 3);
        let dims: Vec<usize> = faces.iter().map(|f| f.dimension).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 2);
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 1);

        let np = np_of("x1^3+x2^2", 2);
        assert_eq!(enumerate_compact_faces(&np).len(), 3);
    }

    #[test]
    fn gamma_parts() {
        let p = parse_polynomial("x1^2+x2^2+x1^3", 2).unwrap();
        let np = newton_polyhedron(&p).unwrap();
        let edge = enumerate_compact_faces(&np)
            .into_iter()
            .find(|f| f.dimension == 1)
            .unwrap();
        let part = gamma_part(&p, &np, &edge).unwrap();
        assert_eq!(part, parse_polynomial("x1^2+x2^2", 2).unwrap());

        let p = parse_polynomial("x1^3+x2^2", 2).unwrap();
        let np = newton_polyhedron(&p).unwrap();
        let vertex30 = enumerate_compact_faces(&np)
            .into_iter()
            .find(|f| f.dimension == 0 && np.vertices[f.vertices[0]] == vec![3, 0])
            .unwrap();
        let part = gamma_part(&p, &np, &vertex30).unwrap();
        assert_eq!(part, parse_polynomial("x1^3", 2).unwrap());
    }

    #[test]
    fn gamma_part_rejects_noncompact_face() {
        let p = parse_polynomial("x1^2*x2", 2).unwrap();
        let np = newton_polyhedron(&p).unwrap();
        let noncompact = np.all_faces().into_iter().find(|f| !f.compact).unwrap();
        assert!(matches!(
            gamma_part(&p, &np, &noncompact),
            Err(Error::NonCompactFace)
        ));
    }

    #[test]
    fn weighted_index_examples() {
        let np = np_of("x1^2*x2^2", 2);
        let w = weighted_index(&np, &[0, 0]).unwrap();
        assert_eq!(w.value, ratio(1, 2));
        assert_eq!(w.max_codim, 2);

        let w = weighted_index(&np, &[1, 1]).unwrap();
        assert_eq!(w.value, rat(1));
        assert_eq!(w.max_codim, 2);

        let np = np_of("x1^2+x2^2", 2);
        let w = weighted_index(&np, &[0, 0]).unwrap();
        assert_eq!(w.value, rat(1));
        assert_eq!(w.max_codim, 1);
    }

    #[test]
    fn weighted_index_at_zero_matches_inverse_distance() {
        for text in ["x1^2*x2", "x1^2*x2^2", "x1^3+x2^2", "x1^2*x2+x2^5"] {
            let np = np_of(text, 2);
            let d = newton_distance(&np).unwrap().distance;
            let w = weighted_index(&np, &[0, 0]).unwrap();
            assert_eq!(w.value, d.recip());
        }
    }

    #[test]
    fn hv_descriptions_agree_on_random_points() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for text in ["x1^2*x2", "x1^2+x2^2", "x1^3+x2^2", "x1^2*x2+x2^5"] {
            let p = parse_polynomial(text, 2).unwrap();
            let np = newton_polyhedron(&p).unwrap();
            for _ in 0..250 {
                let z: Vec<BigRational> = (0..2)
                    .map(|_| BigRational::new(rng.random_range(0..64).into(), 8.into()))
                    .collect();
                let by_facets = np.contains(&z);
                let by_vertices = hull_contains_by_lp(&np.vertices, &z);
                assert_eq!(by_facets, by_vertices, "phase {text} point {z:?}");
            }
        }
    }

    #[test]
    fn distance_invariant_under_variable_permutation() {
        let a = np_of("x1^2*x2+x2^5", 2);
        let b = np_of("x2^2*x1+x1^5", 2);
        assert_eq!(
            newton_distance(&a).unwrap().distance,
            newton_distance(&b).unwrap().distance
        );
    }

    #[test]
    fn interior_terms_do_not_change_hull() {
        // v* + (1,...,1) is interior for any vertex v*.
        let base = parse_polynomial("x1^3+x2^2", 2).unwrap();
        let np = newton_polyhedron(&base).unwrap();
        let fat = parse_polynomial("x1^3+x2^2+7*x1^4*x2", 2).unwrap();
        let np_fat = newton_polyhedron(&fat).unwrap();
        assert_eq!(np, np_fat);
        let d1 = newton_distance(&np).unwrap();
        let d2 = newton_distance(&np_fat).unwrap();
        assert_eq!(d1.distance, d2.distance);
        assert_eq!(d1.principal_face, d2.principal_face);
    }

    #[test]
    fn hull_in_one_dimension() {
        let np = np_of("x1^2", 1);
        assert_eq!(np.vertices, vec![vec![2]]);
        assert_eq!(np.facets, vec![Facet { normal: vec![1], offset: 2 }]);
        let d = newton_distance(&np).unwrap();
        assert_eq!(d.distance, rat(2));
        assert_eq!(d.codimension, 1);
    }

    #[test]
    fn hull_in_three_dimensions() {
        let np = np_of("x1^2+x2^2+x3^2", 3);
        assert_eq!(np.vertices.len(), 3);
        assert!(np
            .facets
            .contains(&Facet { normal: vec![1, 1, 1], offset: 2 }));
        let d = newton_distance(&np).unwrap();
        assert_eq!(d.distance, ratio(2, 3));
        assert_eq!(d.codimension, 1);
    }
}
