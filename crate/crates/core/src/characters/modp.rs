//! Linear algebra and polynomial root finding over GF(P), `P < 2^31`.

use crate::numtheory::{inv_mod, pow_mod};

#[derive(Clone, Copy, Debug)]
pub struct Fp(pub u64);

impl Fp {
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub fn inv(self, a: u64) -> u64 {
        inv_mod(a, self.0)
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.0)
    }
}

/// Reduces the rows in place to reduced row echelon form and returns the
/// pivot columns. Zero rows are dropped.
pub fn rref(f: Fp, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][col]);
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let c = rows[i][col];
                let (pivot_row, row) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, &y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right null space `{x : A x = 0}` of a square or rectangular
/// matrix given by rows.
pub fn nullspace(f: Fp, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m = a.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0u64; ncols];
            x[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                x[pc] = f.sub(0, row[fc]);
            }
            x
        })
        .collect()
}

/// Characteristic polynomial (constant term first, monic) via Hessenberg
/// reduction.
pub fn char_poly(f: Fp, a: &[Vec<u64>]) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for m in 0..n.saturating_sub(2) {
        let Some(piv) = (m + 1..n).find(|&i| h[i][m] != 0) else {
            continue;
        };
        if piv != m + 1 {
            h.swap(piv, m + 1);
            for row in h.iter_mut() {
                row.swap(piv, m + 1);
            }
        }
        let inv = f.inv(h[m + 1][m]);
        for i in m + 2..n {
            if h[i][m] == 0 {
                continue;
            }
            let u = f.mul(h[i][m], inv);
            for j in 0..n {
                let t = f.mul(u, h[m + 1][j]);
                h[i][j] = f.sub(h[i][j], t);
            }
            for row in h.iter_mut() {
                let t = f.mul(u, row[i]);
                row[m + 1] = f.add(row[m + 1], t);
            }
        }
    }
    // p_{m+1} = (x - h_mm) p_m - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_i
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let pm = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (d, &c) in pm.iter().enumerate() {
            next[d + 1] = f.add(next[d + 1], c);
            next[d] = f.sub(next[d], f.mul(h[m][m], c));
        }
        let mut prod = 1u64;
        for i in (0..m).rev() {
            prod = f.mul(prod, h[i + 1][i]);
            let coef = f.mul(h[i][m], prod);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = f.sub(next[d], f.mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

// Polynomials: constant term first, trimmed.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn degree(a: &[u64]) -> usize {
    a.len() - 1
}

fn is_zero(a: &[u64]) -> bool {
    a.len() == 1 && a[0] == 0
}

fn poly_rem(f: Fp, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = degree(m);
    let inv = f.inv(m[dm]);
    let mut r = a.to_vec();
    while r.len() > dm && !is_zero(&r) {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], inv);
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mc));
        }
        r = trim(r);
        if r.len() - 1 == dr {
            break;
        }
    }
    trim(r)
}

fn poly_divexact(f: Fp, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = degree(m);
    let inv = f.inv(m[dm]);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len().saturating_sub(dm).max(1)];
    while r.len() > dm && !is_zero(&r) {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], inv);
        let shift = dr - dm;
        q[shift] = c;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mc));
        }
        r = trim(r);
    }
    trim(q)
}

fn poly_mulmod(f: Fp, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    poly_rem(f, &trim(out), m)
}

fn poly_powmod(f: Fp, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(f, &acc, &b, m);
        }
        b = poly_mulmod(f, &b, &b, m);
        e >>= 1;
    }
    acc
}

fn poly_gcd(f: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !is_zero(&b) {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    let inv = f.inv(*a.last().unwrap());
    a.iter().map(|&c| f.mul(c, inv)).collect()
}

fn sub_x(f: Fp, mut a: Vec<u64>) -> Vec<u64> {
    if a.len() < 2 {
        a.resize(2, 0);
    }
    a[1] = f.sub(a[1], 1);
    trim(a)
}

/// Distinct roots in GF(P) of a nonzero polynomial, sorted ascending.
pub fn distinct_roots(f: Fp, poly: &[u64]) -> Vec<u64> {
    let p = f.0;
    let poly = trim(poly.to_vec());
    if degree(&poly) == 0 {
        return Vec::new();
    }
    // Product of the distinct linear factors.
    let xp = poly_powmod(f, &[0, 1], p, &poly);
    let g = poly_gcd(f, &poly, &sub_x(f, xp));
    let mut roots = Vec::new();
    split(f, g, &mut roots);
    roots.sort_unstable();
    roots
}

fn split(f: Fp, g: Vec<u64>, roots: &mut Vec<u64>) {
    match degree(&g) {
        0 => {}
        1 => roots.push(f.sub(0, f.mul(g[0], f.inv(g[1])))),
        d => {
            if g[0] == 0 {
                roots.push(0);
                split(f, g[1..].to_vec(), roots);
                return;
            }
            let half = (f.0 - 1) / 2;
            for shift in 1..f.0 {
                let h = poly_powmod(f, &[shift, 1], half, &g);
                let mut h = h;
                h[0] = f.sub(h[0], 1);
                let c = poly_gcd(f, &g, &trim(h));
                let dc = degree(&c);
                if dc > 0 && dc < d {
                    let rest = poly_divexact(f, &g, &c);
                    split(f, c, roots);
                    split(f, rest, roots);
                    return;
                }
            }
            unreachable!("a squarefree split polynomial always separates")
        }
    }
}
