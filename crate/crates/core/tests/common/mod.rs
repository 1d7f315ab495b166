//! Matrix-level oracle for representations of GL_2(F_p) over F_p, independent
//! of the character-table code in the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub type Mat = Vec<Vec<u64>>;
pub type M2 = [[u64; 2]; 2];

pub fn mul2(a: &M2, b: &M2, p: u64) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % p;
        }
    }
    c
}

pub fn det2(a: &M2, p: u64) -> u64 {
    (a[0][0] * a[1][1] + p * p - a[0][1] * a[1][0] % p) % p
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn inv2(a: &M2, p: u64) -> M2 {
    let d = inv_mod(det2(a, p), p);
    [[a[1][1] * d % p, (p - a[0][1]) * d % p], [(p - a[1][0]) * d % p, a[0][0] * d % p]]
}

pub fn gl2(p: u64) -> Vec<M2> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let m = [[a, b], [c, d]];
                    if det2(&m, p) != 0 {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

pub fn sl2(p: u64) -> Vec<M2> {
    gl2(p).into_iter().filter(|m| det2(m, p) == 1).collect()
}

/// Sizes of the conjugacy classes of `group`, sorted.
pub fn class_sizes(group: &[M2], p: u64) -> Vec<u64> {
    let mut seen = BTreeSet::new();
    let mut sizes = Vec::new();
    for &x in group {
        if seen.contains(&x) {
            continue;
        }
        let class: BTreeSet<M2> = group.iter().map(|g| mul2(&mul2(g, &x, p), &inv2(g, p), p)).collect();
        sizes.push(class.len() as u64);
        seen.extend(class);
    }
    sizes.sort_unstable();
    sizes
}

/// Generators of GL_2(F_p): `u = [[1,1],[0,1]]`, `diag(g,1)`, `diag(1,g)`, `w`.
pub fn generators(p: u64) -> Vec<M2> {
    let g = primitive_root(p);
    vec![[[1, 1], [0, 1]], [[g, 0], [0, 1]], [[1, 0], [0, g]], [[0, 1], [1, 0]]]
}

pub fn primitive_root(p: u64) -> u64 {
    (2..p).find(|&g| (1..p - 1).all(|k| pow_mod(g, k, p) != 1)).unwrap_or(1)
}

/// A representation given by the images of [`generators`].
#[derive(Debug, Clone)]
pub struct Module {
    pub p: u64,
    pub dim: usize,
    pub gens: Vec<Mat>,
}

fn mat_vec(m: &Mat, v: &[u64], p: u64) -> Vec<u64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<u64>() % p).collect()
}

/// `Symm^a(F_p^2) (x) det^b` with `g e_1 = g_11 e_1 + g_21 e_2`.
pub fn symm(p: u64, a: usize, b: u64) -> Module {
    let gens = generators(p)
        .iter()
        .map(|g| {
            let d = pow_mod(det2(g, p), b, p);
            // image of e1^{a-i} e2^i as a polynomial in (e1, e2), coefficient vector indexed by the power of e2
            let mut m = vec![vec![0; a + 1]; a + 1];
            for i in 0..=a {
                let mut poly = vec![1u64];
                let img1 = [g[0][0], g[1][0]];
                let img2 = [g[0][1], g[1][1]];
                for k in 0..a {
                    let f = if k < a - i { img1 } else { img2 };
                    let mut next = vec![0; poly.len() + 1];
                    for (j, &c) in poly.iter().enumerate() {
                        next[j] = (next[j] + c * f[0]) % p;
                        next[j + 1] = (next[j + 1] + c * f[1]) % p;
                    }
                    poly = next;
                }
                for (j, &c) in poly.iter().enumerate() {
                    m[j][i] = c * d % p;
                }
            }
            m
        })
        .collect();
    Module { p, dim: a + 1, gens }
}

fn line_index(v: [u64; 2], p: u64) -> usize {
    // points of P^1 as [1:y] (index y) or [0:1] (index p)
    if v[0] == 0 {
        p as usize
    } else {
        (v[1] * inv_mod(v[0], p) % p) as usize
    }
}

/// The permutation module `F_p[P^1]`.
pub fn projective_line(p: u64) -> Module {
    let n = p as usize + 1;
    let point = |i: usize| if i == p as usize { [0, 1] } else { [1, i as u64] };
    let gens = generators(p)
        .iter()
        .map(|g| {
            let mut m = vec![vec![0; n]; n];
            for i in 0..n {
                let v = point(i);
                let gv = [(g[0][0] * v[0] + g[0][1] * v[1]) % p, (g[1][0] * v[0] + g[1][1] * v[1]) % p];
                m[line_index(gv, p)][i] = 1;
            }
            m
        })
        .collect();
    Module { p, dim: n, gens }
}

/// The augmentation kernel of `F_p[P^1]` twisted by `det^e`: the reduction of `St (x) chi_e o det`.
pub fn steinberg(p: u64, e: u64) -> Module {
    let perm = projective_line(p);
    let n = perm.dim;
    // basis e_i - e_n of the kernel
    let basis: Vec<Vec<u64>> = (0..n - 1)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[n - 1] = p - 1;
            v
        })
        .collect();
    let sub = restrict(&perm, &basis);
    twist(&sub, e)
}

pub fn twist(m: &Module, e: u64) -> Module {
    let p = m.p;
    let gens = m
        .gens
        .iter()
        .zip(generators(p))
        .map(|(x, g)| {
            let d = pow_mod(det2(&g, p), e, p);
            x.iter().map(|row| row.iter().map(|v| v * d % p).collect()).collect()
        })
        .collect();
    Module { p, dim: m.dim, gens }
}

/// `Ind_B^G (chi_1 (x) chi_2)` with `chi_i(x) = x^{e_i}`, on functions with `f(bg) = chi(b) f(g)`.
pub fn principal_series(p: u64, e1: u64, e2: u64) -> Module {
    let chi = |b: &M2| pow_mod(b[0][0], e1, p) * pow_mod(b[1][1], e2, p) % p;
    // coset representatives of B \ G: w n(y) and the identity
    let mut reps: Vec<M2> = (0..p).map(|y| [[0, 1], [1, y]]).collect();
    reps.push([[1, 0], [0, 1]]);
    let n = reps.len();
    let gens = generators(p)
        .iter()
        .map(|g| {
            let mut m = vec![vec![0; n]; n];
            for (i, r) in reps.iter().enumerate() {
                for (j, s) in reps.iter().enumerate() {
                    // (g f_r)(s) = f_r(s g)
                    let b = mul2(&mul2(s, g, p), &inv2(r, p), p);
                    if b[1][0] == 0 {
                        m[j][i] = chi(&b);
                    }
                }
            }
            m
        })
        .collect();
    Module { p, dim: n, gens }
}

pub fn tensor(x: &Module, y: &Module) -> Module {
    let p = x.p;
    let gens = x
        .gens
        .iter()
        .zip(&y.gens)
        .map(|(a, b)| {
            let n = x.dim * y.dim;
            let mut m = vec![vec![0; n]; n];
            for i in 0..x.dim {
                for j in 0..x.dim {
                    for k in 0..y.dim {
                        for l in 0..y.dim {
                            m[i * y.dim + k][j * y.dim + l] = a[i][j] * b[k][l] % p;
                        }
                    }
                }
            }
            m
        })
        .collect();
    Module { p, dim: x.dim * y.dim, gens }
}

/// Row-reduces `rows`, returning a basis of their span in echelon form with pivot columns.
fn echelon(rows: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut rows: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                for j in 0..cols {
                    rows[k][j] = (rows[k][j] + p * p - f * rows[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Coordinates of `v` in a reduced echelon basis (assumes `v` lies in the span).
fn coords(pivots: &[usize], v: &[u64]) -> Vec<u64> {
    pivots.iter().map(|&c| v[c]).collect()
}

/// The action on the span of `basis`, which must be stable.
pub fn restrict(m: &Module, basis: &[Vec<u64>]) -> Module {
    let p = m.p;
    let (basis, pivots) = echelon(basis, p);
    let gens = m
        .gens
        .iter()
        .map(|g| {
            let cols: Vec<Vec<u64>> = basis.iter().map(|v| coords(&pivots, &mat_vec(g, v, p))).collect();
            transpose(&cols)
        })
        .collect();
    Module { p, dim: basis.len(), gens }
}

fn transpose(m: &[Vec<u64>]) -> Mat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|i| m.iter().map(|r| r[i]).collect()).collect()
}

/// The action on `M / span(sub)`.
pub fn quotient(m: &Module, sub: &[Vec<u64>]) -> Module {
    let p = m.p;
    let (sub, sub_piv) = echelon(sub, p);
    let free: Vec<usize> = (0..m.dim).filter(|c| !sub_piv.contains(c)).collect();
    // reduce a vector modulo the submodule and read off the free coordinates
    let reduce = |v: &[u64]| -> Vec<u64> {
        let mut v = v.to_vec();
        for (row, &c) in sub.iter().zip(&sub_piv) {
            let f = v[c];
            if f != 0 {
                for j in 0..v.len() {
                    v[j] = (v[j] + p * p - f * row[j] % p) % p;
                }
            }
        }
        free.iter().map(|&c| v[c]).collect()
    };
    let gens = m
        .gens
        .iter()
        .map(|g| {
            let cols: Vec<Vec<u64>> = free
                .iter()
                .map(|&c| {
                    let mut e = vec![0; m.dim];
                    e[c] = 1;
                    reduce(&mat_vec(g, &e, p))
                })
                .collect();
            transpose(&cols)
        })
        .collect();
    Module { p, dim: free.len(), gens }
}

/// Smallest submodule containing `v`.
fn cyclic(m: &Module, v: Vec<u64>) -> Vec<Vec<u64>> {
    let p = m.p;
    let mut span = vec![v];
    loop {
        let mut next = span.clone();
        for w in &span {
            for g in &m.gens {
                next.push(mat_vec(g, w, p));
            }
        }
        let (basis, _) = echelon(&next, p);
        if basis.len() == span.len() {
            return basis;
        }
        span = basis;
    }
}

/// Basis of the vectors fixed by the first generator `u`.
fn u_fixed(m: &Module) -> Vec<Vec<u64>> {
    let p = m.p;
    let u = &m.gens[0];
    // kernel of u - 1
    let a: Mat = (0..m.dim)
        .map(|i| (0..m.dim).map(|j| (u[i][j] + p - u64::from(i == j)) % p).collect())
        .collect();
    let (rows, pivots) = echelon(&a, p);
    let free: Vec<usize> = (0..m.dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; m.dim];
            v[f] = 1;
            for (row, &c) in rows.iter().zip(&pivots) {
                v[c] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// A simple submodule. Every nonzero submodule meets the `u`-fixed vectors, so
/// the smallest cyclic submodule generated by one of them is simple.
fn simple_sub(m: &Module) -> Vec<Vec<u64>> {
    let p = m.p;
    let fixed = u_fixed(m);
    let k = fixed.len();
    let mut best: Option<Vec<Vec<u64>>> = None;
    for idx in 1..p.pow(k as u32) {
        let mut c = idx;
        let mut v = vec![0; m.dim];
        for f in &fixed {
            let x = c % p;
            c /= p;
            for j in 0..m.dim {
                v[j] = (v[j] + x * f[j]) % p;
            }
        }
        let s = cyclic(m, v);
        if best.as_ref().is_none_or(|b| s.len() < b.len()) {
            let done = s.len() == 1;
            best = Some(s);
            if done {
                break;
            }
        }
    }
    best.expect("nonzero module")
}

/// The Serre weight `(a, b)` of a simple module: `a + 1` is the dimension and the
/// `u`-fixed line has torus character `diag(t1, t2) -> t1^{a+b} t2^b`.
pub fn identify(m: &Module) -> (u64, u64) {
    let p = m.p;
    let a = m.dim as u64 - 1;
    let fixed = u_fixed(m);
    assert_eq!(fixed.len(), 1, "not simple");
    let v = &fixed[0];
    let c = v.iter().position(|&x| x != 0).unwrap();
    let g = primitive_root(p);
    let eig = |k: usize| mat_vec(&m.gens[k], v, p)[c] * inv_mod(v[c], p) % p;
    let log = |x: u64| (0..p - 1).find(|&k| pow_mod(g, k, p) == x).unwrap();
    let b = log(eig(2));
    assert_eq!(log(eig(1)), (a + b) % (p - 1), "inconsistent torus weight");
    (a, b)
}

/// Jordan-Holder multiset as `(a, b) -> multiplicity`.
pub fn composition_factors(m: &Module) -> BTreeMap<(u64, u64), i64> {
    let mut out = BTreeMap::new();
    let mut rest = m.clone();
    while rest.dim > 0 {
        let s = simple_sub(&rest);
        *out.entry(identify(&restrict(&rest, &s))).or_insert(0) += 1;
        rest = quotient(&rest, &s);
    }
    out
}
