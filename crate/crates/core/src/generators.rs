//! Constructors for the named complexes and basis families.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::balancing::{product_weighting, Weighting};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::multiset::{Multiset, Vertex};

/// A named family member together with its labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `B_ij = {{i},{j}}`.
    B([Vertex; 2]),
    /// Hexagon `H_ijkpqr` through the six labels in cycle order.
    H([Vertex; 6]),
    /// `T_(i)(jk)(pq)`: two triangles sharing vertex `i`, labels `[i, j, k, p, q]`.
    T([Vertex; 5]),
    /// `P_(i)(jk)(r)(pq)`: triangles `ijk` and `rpq` joined by the edge `ir`,
    /// labels `[i, j, k, r, p, q]`.
    P([Vertex; 6]),
    /// Octahedron `O_(i₁i₅)(i₂i₆)(i₃i₄)`, labels `[i₁, i₅, i₂, i₆, i₃, i₄]`.
    O([Vertex; 6]),
    /// Cycle of three tetrahedra `C_(i₁i₄)(i₂i₃)(i₅i₆)`, labels `[i₁, i₄, i₂, i₃, i₅, i₆]`.
    C([Vertex; 6]),
    /// The singular hypertree complex on `{1..6}`.
    A,
    Complete { n: Vertex, d: usize, nonsingular: bool },
    Torus(Vec<usize>),
    /// Staircase triangulation `Q_d` of the unit d-cube.
    Cube(usize),
    /// Six-vertex triangulation of the real projective plane.
    ProjectivePlane6,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(xs: &[T]) -> String {
            xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
        }
        match self {
            Family::B(l) => write!(f, "B {}", join(l)),
            Family::H(l) => write!(f, "H {}", join(l)),
            Family::T(l) => write!(f, "T {}", join(l)),
            Family::P(l) => write!(f, "P {}", join(l)),
            Family::O(l) => write!(f, "O {}", join(l)),
            Family::C(l) => write!(f, "C {}", join(l)),
            Family::A => f.write_str("A"),
            Family::Complete { n, d, nonsingular } => {
                write!(f, "complete {n} {d}{}", if *nonsingular { " --nonsingular" } else { "" })
            }
            Family::Torus(dims) => write!(f, "torus {}", join(dims)),
            Family::Cube(d) => write!(f, "cube {d}"),
            Family::ProjectivePlane6 => f.write_str("rp2"),
        }
    }
}

fn check_distinct(labels: &[Vertex]) -> Result<()> {
    if labels.contains(&0) {
        return Err(Error::domain("vertex label 0 is reserved"));
    }
    let set: BTreeSet<&Vertex> = labels.iter().collect();
    if set.len() != labels.len() {
        return Err(Error::domain(format!(
            "family labels must be distinct, got {labels:?}"
        )));
    }
    Ok(())
}

fn edges(pairs: &[[Vertex; 2]]) -> Complex {
    Complex::new(
        1,
        pairs
            .iter()
            .map(|p| Multiset::from_labels(p).expect("checked labels")),
    )
    .expect("edges have two labels")
}

fn triangles(triples: &[[Vertex; 3]]) -> Complex {
    Complex::new(
        2,
        triples
            .iter()
            .map(|t| Multiset::from_labels(t).expect("checked labels")),
    )
    .expect("triangles have three labels")
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// The balanced 0-complex `{{a},{b}}` with `w({a}) = 1`, `w({b}) = −1`.
pub fn signed_pair(a: Vertex, b: Vertex) -> Result<Weighting> {
    check_distinct(&[a, b])?;
    Weighting::from_pairs(0, [(Multiset::singleton(a), q(1)), (Multiset::singleton(b), q(-1))])
}

/// All `d`-simplices on `{1..n}`, optionally only the nonsingular ones.
pub fn complete(n: Vertex, d: usize, nonsingular: bool) -> Complex {
    fn rec(
        start: Vertex,
        n: Vertex,
        left: usize,
        nonsingular: bool,
        cur: &mut Vec<Vertex>,
        out: &mut Vec<Multiset>,
    ) {
        if left == 0 {
            out.push(Multiset::from_labels(cur).expect("labels from 1"));
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(if nonsingular { v + 1 } else { v }, n, left - 1, nonsingular, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 1 {
        rec(1, n, d + 1, nonsingular, &mut Vec::new(), &mut out);
    }
    Complex::new(d, out)
        .expect("generated simplices have cardinality d+1")
        .with_vertex_bound(n)
        .expect("labels within 1..n")
}

/// The hypertree complex with the listed balancing
/// (`w({1,1,2}) = 1`, ..., `w({3,4,5}) = −1`).
pub fn hypertree() -> Weighting {
    let listed: [([Vertex; 3], i64); 12] = [
        ([1, 1, 2], 1),
        ([1, 1, 3], -1),
        ([1, 2, 4], -1),
        ([1, 2, 5], -1),
        ([1, 3, 5], 1),
        ([1, 3, 6], 1),
        ([1, 4, 5], 1),
        ([1, 5, 6], -1),
        ([2, 3, 4], 1),
        ([2, 3, 6], -1),
        ([2, 5, 6], 1),
        ([3, 4, 5], -1),
    ];
    Weighting::from_pairs(
        2,
        listed
            .iter()
            .map(|(s, w)| (Multiset::from_labels(s).expect("positive"), q(*w))),
    )
    .expect("degree-2 simplices")
}

/// The six-vertex triangulation of RP² (the antipodal quotient of the icosahedron).
pub fn projective_plane_six() -> Complex {
    triangles(&[
        [1, 2, 3],
        [1, 3, 4],
        [1, 4, 5],
        [1, 5, 6],
        [1, 2, 6],
        [2, 3, 5],
        [3, 4, 6],
        [2, 4, 5],
        [3, 5, 6],
        [2, 4, 6],
    ])
}

/// Builds a family member, with its natural balancing when one is known.
pub fn family(spec: &Family) -> Result<(Complex, Option<Weighting>)> {
    match spec {
        Family::B([i, j]) => {
            let w = signed_pair(*i, *j)?;
            Ok((w.complex().clone(), Some(w)))
        }
        Family::H(l) => {
            check_distinct(l)?;
            let cycle: Vec<[Vertex; 2]> = (0..6).map(|t| [l[t], l[(t + 1) % 6]]).collect();
            let w = Weighting::from_pairs(
                1,
                cycle.iter().enumerate().map(|(t, e)| {
                    (
                        Multiset::from_labels(e).expect("checked"),
                        q(if t % 2 == 0 { 1 } else { -1 }),
                    )
                }),
            )?;
            Ok((w.complex().clone(), Some(w)))
        }
        Family::T(l) => {
            check_distinct(l)?;
            let [i, j, k, p, qq] = *l;
            Ok((edges(&[[i, j], [i, k], [j, k], [i, p], [i, qq], [p, qq]]), None))
        }
        Family::P(l) => {
            check_distinct(l)?;
            let [i, j, k, r, p, qq] = *l;
            Ok((
                edges(&[[i, j], [i, k], [j, k], [r, p], [r, qq], [p, qq], [i, r]]),
                None,
            ))
        }
        Family::O(l) => {
            check_distinct(l)?;
            let [i1, i5, i2, i6, i3, i4] = *l;
            let c = triangles(&[
                [i1, i2, i3],
                [i1, i2, i4],
                [i1, i3, i6],
                [i1, i4, i6],
                [i2, i3, i5],
                [i2, i4, i5],
                [i3, i5, i6],
                [i4, i5, i6],
            ]);
            let w = product_weighting(
                &product_weighting(&signed_pair(i1, i5)?, &signed_pair(i2, i6)?),
                &signed_pair(i3, i4)?,
            );
            debug_assert_eq!(w.complex(), &c);
            Ok((c, Some(w)))
        }
        Family::C(l) => {
            check_distinct(l)?;
            let [i1, i4, i2, i3, i5, i6] = *l;
            Ok((
                triangles(&[
                    [i1, i2, i3],
                    [i1, i2, i4],
                    [i1, i3, i4],
                    [i1, i4, i5],
                    [i1, i4, i6],
                    [i1, i5, i6],
                    [i2, i3, i4],
                    [i2, i3, i5],
                    [i2, i3, i6],
                    [i2, i5, i6],
                    [i3, i5, i6],
                    [i4, i5, i6],
                ]),
                None,
            ))
        }
        Family::A => {
            let w = hypertree();
            Ok((w.complex().clone(), Some(w)))
        }
        Family::Complete { n, d, nonsingular } => Ok((complete(*n, *d, *nonsingular), None)),
        Family::Torus(dims) => {
            let w = torus_complex(dims)?;
            Ok((w.complex().clone(), Some(w)))
        }
        Family::Cube(d) => {
            let w = cube(*d)?;
            Ok((w.complex().clone(), Some(w)))
        }
        Family::ProjectivePlane6 => Ok((projective_plane_six(), None)),
    }
}

/// Every labeled copy of a family on `{1..m}`, for families with a fixed
/// number of label slots (B, H, T, P, O, C).
pub fn all_labelings(kind: &str, m: Vertex) -> Result<Vec<Complex>> {
    let slots = match kind {
        "B" => 2,
        "T" => 5,
        "H" | "P" | "O" | "C" => 6,
        other => {
            return Err(Error::domain(format!(
                "family {other} has no fixed label slots"
            )))
        }
    };
    let mut out = BTreeSet::new();
    let mut labels = Vec::new();
    injections(slots, m, &mut labels, &mut |l| {
        let spec = match kind {
            "B" => Family::B([l[0], l[1]]),
            "T" => Family::T([l[0], l[1], l[2], l[3], l[4]]),
            "H" => Family::H(l.try_into().expect("6 slots")),
            "P" => Family::P(l.try_into().expect("6 slots")),
            "O" => Family::O(l.try_into().expect("6 slots")),
            _ => Family::C(l.try_into().expect("6 slots")),
        };
        out.insert(family(&spec).expect("distinct labels").0);
    });
    Ok(out.into_iter().collect())
}

fn injections(slots: usize, m: Vertex, cur: &mut Vec<Vertex>, visit: &mut impl FnMut(&[Vertex])) {
    if cur.len() == slots {
        visit(cur);
        return;
    }
    for v in 1..=m {
        if !cur.contains(&v) {
            cur.push(v);
            injections(slots, m, cur, visit);
            cur.pop();
        }
    }
}

/// Permutations of `0..d` with their signs, in lexicographic order.
pub fn signed_permutations(d: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(d: usize, cur: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i64)>) {
        if cur.len() == d {
            let inversions = (0..d)
                .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
                .filter(|&(i, j)| cur[i] > cur[j])
                .count();
            out.push((cur.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..d {
            if !cur.contains(&v) {
                cur.push(v);
                rec(d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(d, &mut Vec::new(), &mut out);
    out
}

/// Offsets of the staircase simplex `{x ∈ {0,1}^d : x_{σ(1)} ≤ … ≤ x_{σ(d)}}`:
/// the chain that switches on coordinates `σ(d), σ(d−1), …, σ(1)` in turn.
pub fn staircase_points(perm: &[usize]) -> Vec<Vec<usize>> {
    let d = perm.len();
    let mut point = vec![0usize; d];
    let mut out = vec![point.clone()];
    for &coord in perm.iter().rev() {
        point[coord] = 1;
        out.push(point.clone());
    }
    out
}

/// Row-major label (from 1) of a lattice point in a box of the given sides.
pub fn lattice_label(point: &[usize], sides: &[usize]) -> Vertex {
    let mut idx = 0usize;
    for (x, n) in point.iter().zip(sides) {
        idx = idx * n + x;
    }
    idx as Vertex + 1
}

/// All lattice points of the box `[0, n₁−1] × … × [0, n_d−1]` in row-major order.
pub fn lattice_points(sides: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sides {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

pub(crate) fn check_torus_dims(dims: &[usize]) -> Result<()> {
    let d = dims.len();
    if d < 2 {
        return Err(Error::domain("torus needs at least two dimensions"));
    }
    if let Some(&n) = dims.iter().find(|&&n| n < 3) {
        return Err(Error::domain(format!("torus side {n} is below 3")));
    }
    if let Some(&n) = dims.iter().find(|&&n| (d * n) % 2 != 0) {
        return Err(Error::domain(format!(
            "torus side {n} makes d·n odd for d = {d}"
        )));
    }
    Ok(())
}

/// The staircase triangulation of the d-torus `(ℤ/n₁) × … × (ℤ/n_d)`, with
/// the simplex of permutation `σ` in the cell at `a` weighted
/// `(−1)^{(a₁+…+a_d)d} sgn(σ)`.
pub fn torus_complex(dims: &[usize]) -> Result<Weighting> {
    check_torus_dims(dims)?;
    let d = dims.len();
    let perms = signed_permutations(d);
    let mut pairs = Vec::new();
    for corner in lattice_points(dims) {
        let parity: usize = corner.iter().sum::<usize>() * d;
        let cell_sign = if parity % 2 == 0 { 1 } else { -1 };
        for (perm, sign) in &perms {
            let labels: Vec<Vertex> = staircase_points(perm)
                .iter()
                .map(|off| {
                    let p: Vec<usize> = corner
                        .iter()
                        .zip(off)
                        .zip(dims)
                        .map(|((a, e), n)| (a + e) % n)
                        .collect();
                    lattice_label(&p, dims)
                })
                .collect();
            pairs.push((Multiset::from_labels(&labels)?, q(cell_sign * sign)));
        }
    }
    let total: usize = dims.iter().product();
    let w = Weighting::from_pairs(d, pairs)?;
    let complex = w.complex().clone().with_vertex_bound(total as Vertex)?;
    Weighting::new(complex, w.weights().to_vec())
}

/// `Q_d` on the `2^d` cube vertices (row-major labels), weighted by `sgn(σ)`.
pub fn cube(d: usize) -> Result<Weighting> {
    if d == 0 {
        return Err(Error::domain("cube dimension must be positive"));
    }
    let sides = vec![2; d];
    let pairs = signed_permutations(d)
        .into_iter()
        .map(|(perm, sign)| {
            let labels: Vec<Vertex> = staircase_points(&perm)
                .iter()
                .map(|p| lattice_label(p, &sides))
                .collect();
            Ok((Multiset::from_labels(&labels)?, q(sign)))
        })
        .collect::<Result<Vec<_>>>()?;
    Weighting::from_pairs(d, pairs)
}

/// Compositions of `total` into `parts` nonnegative parts, lexicographic.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Basis of the balancings of `complete(n, d, false)`: the products
/// `∏_{j=2}^{n} {{1},{j}}^{k_j}` with `Σ k_j = d + 1`.
pub fn singular_basis(n: Vertex, d: usize) -> Result<Vec<Weighting>> {
    if n < 2 {
        return Err(Error::domain("singular basis needs n ≥ 2"));
    }
    let mut out = Vec::new();
    for ks in compositions(d + 1, n as usize - 1) {
        let mut acc: Option<Weighting> = None;
        for (offset, &k) in ks.iter().enumerate() {
            let pair = signed_pair(1, offset as Vertex + 2)?;
            for _ in 0..k {
                acc = Some(match acc {
                    None => pair.clone(),
                    Some(w) => product_weighting(&w, &pair),
                });
            }
        }
        out.push(acc.expect("d + 1 ≥ 1 factors"));
    }
    Ok(out)
}

/// Basis of the balancings of `complete(n, d, true)`: products
/// `∏_j {{a_j},{b_j}}` over `a₁ < … < a_{d+1}` with `a_j ≥ 2j`, where the `b_j`
/// are the `d + 1` smallest labels not among the `a_j`.
pub fn nonsingular_basis(n: Vertex, d: usize) -> Result<Vec<Weighting>> {
    if n < 1 {
        return Err(Error::domain("nonsingular basis needs n ≥ 1"));
    }
    fn choose(
        j: usize,
        start: Vertex,
        n: Vertex,
        size: usize,
        cur: &mut Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        if j == size {
            out.push(cur.clone());
            return;
        }
        let low = start.max(2 * (j as Vertex + 1));
        for a in low..=n {
            cur.push(a);
            choose(j + 1, a + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut tops = Vec::new();
    choose(0, 1, n, d + 1, &mut Vec::new(), &mut tops);
    let mut out = Vec::new();
    for a in tops {
        let b: Vec<Vertex> = (1..=n).filter(|v| !a.contains(v)).take(d + 1).collect();
        if b.len() < d + 1 {
            continue;
        }
        let mut acc = signed_pair(a[0], b[0])?;
        for j in 1..=d {
            acc = product_weighting(&acc, &signed_pair(a[j], b[j])?);
        }
        out.push(acc);
    }
    Ok(out)
}
