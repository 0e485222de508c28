//! Exact volume of `R_+^n \ P`.
//!
//! The complement lies in `[0, B)^n`, so its volume is `B^n - Vol(Q)` for
//! the convex body `Q = P ∩ [0, B]^n`. `Q` is handled by vertex
//! enumeration followed by a recursive boundary triangulation coned from
//! the far corner `(B, ..., B)`, which is always a vertex of `Q`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::NewtonPolytope;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, int, Rational};

/// `<a, x> >= b`
struct Constraint {
    a: Vec<Rational>,
    b: Rational,
}

struct Vertex {
    coords: Vec<Rational>,
    tight: Vec<usize>,
}

pub(super) fn complement_volume(p: &NewtonPolytope) -> Result<Rational> {
    let n = p.dim();
    let b = int(p.box_bound() as i64);
    let box_volume = rational::pow(&b, n as u32);
    let q = clipped_volume(p)?;
    let vol = box_volume - q;
    if vol.is_negative() || vol.is_zero() {
        return Err(Error::Internal(format!("complement volume {vol} is not positive")));
    }
    Ok(vol)
}

fn constraints(p: &NewtonPolytope) -> Vec<Constraint> {
    let n = p.dim();
    let b = int(p.box_bound() as i64);
    let mut out: Vec<Constraint> = p
        .facets()
        .iter()
        .map(|f| Constraint {
            a: f.normal.iter().map(|&v| int(v as i64)).collect(),
            b: int(f.offset as i64),
        })
        .collect();
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = int(1);
        out.push(Constraint {
            a: e.clone(),
            b: Rational::zero(),
        });
        out.push(Constraint {
            a: e.iter().map(|x| -x).collect(),
            b: -b.clone(),
        });
    }
    out
}

fn vertices(cons: &[Constraint], n: usize) -> Vec<Vertex> {
    let mut found: BTreeMap<Vec<Rational>, ()> = BTreeMap::new();
    for subset in (0..cons.len()).combinations(n) {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| cons[i].a.clone()).collect();
        let rhs: Vec<Rational> = subset.iter().map(|&i| cons[i].b.clone()).collect();
        let Some(x) = linalg::solve(&a, &rhs) else {
            continue;
        };
        if cons.iter().all(|c| linalg::dot(&c.a, &x) >= c.b) {
            found.insert(x, ());
        }
    }
    found
        .into_keys()
        .map(|coords| {
            let tight = cons
                .iter()
                .enumerate()
                .filter(|(_, c)| linalg::dot(&c.a, &coords) == c.b)
                .map(|(i, _)| i)
                .collect();
            Vertex { coords, tight }
        })
        .collect()
}

fn affine_dim(verts: &[Vertex], face: &[usize]) -> usize {
    let Some((&first, rest)) = face.split_first() else {
        return 0;
    };
    let rows: Vec<Vec<Rational>> = rest
        .iter()
        .map(|&v| {
            verts[v]
                .coords
                .iter()
                .zip(&verts[first].coords)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    linalg::rank(&rows)
}

/// Simplices (as vertex index lists) triangulating the face with the
/// given vertices and affine dimension, all coned from `apex`.
fn triangulate(
    verts: &[Vertex],
    n_constraints: usize,
    face: &[usize],
    dim: usize,
    apex: usize,
) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![apex]];
    }
    let mut subfaces = BTreeSet::new();
    for c in 0..n_constraints {
        let sub: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&v| verts[v].tight.contains(&c))
            .collect();
        if sub.len() < dim || sub.len() == face.len() || sub.contains(&apex) {
            continue;
        }
        if affine_dim(verts, &sub) == dim - 1 {
            subfaces.insert(sub);
        }
    }
    let mut out = Vec::new();
    for sub in subfaces {
        for mut simplex in triangulate(verts, n_constraints, &sub, dim - 1, sub[0]) {
            simplex.push(apex);
            out.push(simplex);
        }
    }
    out
}

fn clipped_volume(p: &NewtonPolytope) -> Result<Rational> {
    let n = p.dim();
    let cons = constraints(p);
    let verts = vertices(&cons, n);
    let corner = vec![int(p.box_bound() as i64); n];
    let apex = verts
        .iter()
        .position(|v| v.coords == corner)
        .ok_or_else(|| Error::Internal("far corner is not a vertex of the clipped polytope".into()))?;
    let all: Vec<usize> = (0..verts.len()).collect();
    if affine_dim(&verts, &all) != n {
        // Only in dimension one, where Q is the single point {B}.
        return Ok(Rational::zero());
    }
    let simplices = triangulate(&verts, cons.len(), &all, n, apex);
    let mut total = Rational::zero();
    for s in &simplices {
        let base = &verts[s[0]].coords;
        let m: Vec<Vec<Rational>> = s[1..]
            .iter()
            .map(|&v| {
                verts[v]
                    .coords
                    .iter()
                    .zip(base)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        total += linalg::det(&m).abs();
    }
    Ok(total / rational::factorial(n))
}
