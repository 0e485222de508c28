//! Brute-force oracles, written independently of the library algorithms.
#![allow(dead_code)]

use std::path::PathBuf;

use lctkit::groebner::Polynomial;
use lctkit::ideal::{Exponent, MonomialIdeal};
use lctkit::linalg;
use lctkit::rational::{int, Rational};
use num_traits::Zero;

pub fn examples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples")
}

pub fn shipped_ideals() -> Vec<(String, MonomialIdeal)> {
    let mut out = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(examples_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "ideal"))
        .collect();
    paths.sort();
    for p in paths {
        let text = std::fs::read_to_string(&p).unwrap();
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        out.push((name, MonomialIdeal::parse(&text).unwrap()));
    }
    out
}

pub fn ideal(n: usize, rows: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::from_rows(n, rows).unwrap()
}

/// Counts monomials in the bounding box divisible by no generator.
pub fn brute_colength(j: &MonomialIdeal) -> u64 {
    let bound = j.box_bound().unwrap();
    let n = j.dim();
    let mut count = 0;
    let mut m = vec![0u32; n];
    loop {
        let e = Exponent::new(m.clone());
        if !j.gens().iter().any(|g| g.divides(&e)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            m[i] += 1;
            if m[i] < bound {
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

/// Lower-left boundary of the Newton polyhedron of a 2-variable
/// m-primary ideal, from `(0, b)` to `(a, 0)`, via Andrew's monotone chain.
pub fn hull_2d(j: &MonomialIdeal) -> Vec<(i64, i64)> {
    assert_eq!(j.dim(), 2);
    let mut pts: Vec<(i64, i64)> = j
        .gens()
        .iter()
        .map(|g| (g.coords()[0] as i64, g.coords()[1] as i64))
        .collect();
    pts.sort();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Area of `R_+^2 \ P`: the region under the boundary chain.
pub fn area_2d(j: &MonomialIdeal) -> Rational {
    let h = hull_2d(j);
    let mut twice = 0i64;
    for w in h.windows(2) {
        twice += (w[1].0 - w[0].0) * (w[0].1 + w[1].1);
    }
    Rational::new(twice.into(), 2.into())
}

/// `(x, y)` lies in the Newton polyhedron.
pub fn in_hull_2d(j: &MonomialIdeal, x: &Rational, y: &Rational) -> bool {
    let h = hull_2d(j);
    let last = h.last().unwrap();
    if *x >= int(last.0) {
        return *y >= Rational::zero();
    }
    for w in h.windows(2) {
        let (x0, x1) = (int(w[0].0), int(w[1].0));
        if *x >= x0 && *x <= x1 {
            let t = (x - &x0) / (&x1 - &x0);
            let yy = int(w[0].1) + t * int(w[1].1 - w[0].1);
            return *y >= yy;
        }
    }
    unreachable!("x inside [0, a]")
}

/// `1/t` where `(t, t)` is where the diagonal leaves the complement.
pub fn lct_2d(j: &MonomialIdeal) -> Rational {
    let h = hull_2d(j);
    for w in h.windows(2) {
        let (d0, d1) = (w[0].0 - w[0].1, w[1].0 - w[1].1);
        if d0 <= 0 && d1 >= 0 {
            // point p0 + s (p1 - p0) with x = y
            if d0 == d1 {
                return Rational::new(1.into(), w[0].0.into());
            }
            let s = Rational::new((-d0).into(), (d1 - d0).into());
            let t = int(w[0].0) + s * int(w[1].0 - w[0].0);
            return t.recip();
        }
    }
    unreachable!("the chain crosses the diagonal")
}

/// `min over nonzero nu in [0, grid]^n of <nu, 1> / min_g <nu, g>`: an
/// upper bound for lct, equal to it once the grid holds every facet normal.
pub fn grid_lct(j: &MonomialIdeal, grid: u64) -> Rational {
    let n = j.dim();
    let mut best: Option<Rational> = None;
    let mut nu = vec![0u64; n];
    loop {
        let mut i = 0;
        loop {
            if i == n {
                return best.unwrap();
            }
            nu[i] += 1;
            if nu[i] <= grid {
                break;
            }
            nu[i] = 0;
            i += 1;
        }
        let b = j
            .gens()
            .iter()
            .map(|g| g.coords().iter().zip(&nu).map(|(&c, &v)| c as u64 * v).sum::<u64>())
            .min()
            .unwrap();
        if b == 0 {
            continue;
        }
        let r = Rational::new((nu.iter().sum::<u64>() as i64).into(), (b as i64).into());
        if best.as_ref().is_none_or(|x| r < *x) {
            best = Some(r);
        }
    }
}

fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `dim k[x]/I` for homogeneous generators, degree by degree with exact
/// linear algebra on the truncated ideal.
pub fn homogeneous_quotient_dim(gens: &[Polynomial]) -> u64 {
    let n = gens[0].dim();
    let mut total = 0u64;
    for d in 0..64u32 {
        let basis = monomials_of_degree(n, d);
        let index = |e: &[u32]| basis.iter().position(|m| m.as_slice() == e).unwrap();
        let mut rows = Vec::new();
        for g in gens {
            let gd = g.degree();
            if gd > d {
                continue;
            }
            for m in monomials_of_degree(n, d - gd) {
                let mut row = vec![Rational::zero(); basis.len()];
                for t in g.terms() {
                    assert_eq!(t.exp.degree(), gd, "generator is not homogeneous");
                    let e: Vec<u32> = t.exp.coords().iter().zip(&m).map(|(a, b)| a + b).collect();
                    row[index(&e)] += &t.coeff;
                }
                rows.push(row);
            }
        }
        let rank = linalg::rank(&rows);
        total += (basis.len() - rank) as u64;
        if rank == basis.len() {
            return total;
        }
    }
    panic!("quotient is not finite dimensional up to degree 64");
}

/// `∫_{|z|<r, z in C^2} dλ / (|z_1|^2 + eps^2)`.
pub fn kiselman_exact_2d(eps: f64, r: f64) -> f64 {
    let (r2, e2) = (r * r, eps * eps);
    std::f64::consts::PI.powi(2) * ((r2 + e2) * ((r2 + e2) / e2).ln() - r2)
}
