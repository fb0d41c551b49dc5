//! Burnside-Dixon-Schneider character table computation.
//!
//! The class matrices `(M_i)_{jk} = a_ijk mod P` commute, and every
//! irreducible character gives a common eigenvector `w` with
//! `w_j = |C_j| chi(g_j) / chi(1)`. Splitting GF(P)^k into common
//! eigenspaces recovers these vectors; degrees and complex values then
//! follow from the orthogonality relation and power maps.

use num_complex::Complex64;

use super::modp::{char_poly, distinct_roots, nullspace, rref, Fp};
use super::structure::StructureConstants;
use super::table::CharacterTable;
use crate::error::{Error, Result};
use crate::groups::ClassData;
use crate::numtheory::{is_prime, isqrt, primitive_root};

const PRIME_LIMIT: u64 = 1 << 31;

/// Least prime `P = 1 (mod exponent)` with `P > 2 sqrt(order)`.
pub fn dixon_prime(order: u64, exponent: u64) -> Result<u64> {
    // P > 2 sqrt(n)  <=>  P^2 > 4 n
    let lower = 2 * isqrt(order) + 1;
    let mut p = 1 + exponent * ((2 * isqrt(order)).saturating_sub(1) / exponent);
    while (p as u128) * (p as u128) <= 4 * order as u128 && p < PRIME_LIMIT {
        p += exponent;
    }
    while p < PRIME_LIMIT {
        if is_prime(p) {
            return Ok(p);
        }
        p += exponent;
    }
    Err(Error::NoSuitablePrime { exponent, lower })
}

/// A subspace kept as an RREF basis.
struct Block {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

pub fn dixon_char_table(
    label: &str,
    c: &ClassData,
    s: &StructureConstants,
) -> Result<CharacterTable> {
    let k = c.count();
    let order = c.order;
    let prime = dixon_prime(order, c.exponent)?;
    let f = Fp(prime);

    let identity: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| (i == j) as u64).collect())
        .collect();
    let mut done: Vec<Vec<u64>> = Vec::new();
    let mut pending = vec![Block {
        rows: identity,
        pivots: (0..k).collect(),
    }];
    if k == 1 {
        done.push(vec![1]);
        pending.clear();
    }

    for i in 1..k {
        if pending.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for block in pending {
            for piece in split_block(f, s, i, block) {
                if piece.rows.len() == 1 {
                    done.push(piece.rows.into_iter().next().unwrap());
                } else {
                    next.push(piece);
                }
            }
        }
        pending = next;
    }
    if let Some(stuck) = pending.first() {
        return Err(Error::EigensplitFailure {
            dim: stuck.rows.len(),
            classes: stuck.pivots.clone(),
        });
    }
    if done.len() != k {
        return Err(Error::EigensplitFailure {
            dim: k - done.len(),
            classes: Vec::new(),
        });
    }

    let zeta_e = f.pow(primitive_root(prime), (prime - 1) / c.exponent);
    let mut rows: Vec<(u64, Vec<Complex64>)> = Vec::with_capacity(k);
    for (index, v) in done.into_iter().enumerate() {
        let norm = f.inv(v[0]);
        let w: Vec<u64> = v.iter().map(|&x| f.mul(x, norm)).collect();
        let degree = recover_degree(f, c, &w, index)?;
        let modular: Vec<u64> = (0..k)
            .map(|j| f.mul(f.mul(degree, w[j]), f.inv(c.sizes[j] % prime)))
            .collect();
        let values = (0..k)
            .map(|j| lift_value(f, c, &modular, j, zeta_e, degree, index))
            .collect::<Result<Vec<_>>>()?;
        rows.push((degree, values));
    }

    rows.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            let ka = sort_key(&a.1);
            let kb = sort_key(&b.1);
            kb.cmp(&ka)
        })
    });
    let (degrees, values): (Vec<u64>, Vec<Vec<Complex64>>) = rows.into_iter().unzip();
    Ok(CharacterTable::new(
        label.to_string(),
        order,
        c.sizes.clone(),
        degrees,
        values,
        prime,
    ))
}

fn sort_key(values: &[Complex64]) -> Vec<(i64, i64)> {
    values
        .iter()
        .map(|z| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64))
        .collect()
}

/// Splits a block along the eigenspaces of class matrix `M_i` restricted to it.
fn split_block(f: Fp, s: &StructureConstants, i: usize, block: Block) -> Vec<Block> {
    let k = s.class_count();
    let d = block.rows.len();
    // Image of each basis vector under M_i, in block coordinates.
    let mut restricted = vec![vec![0u64; d]; d];
    for (r, w) in block.rows.iter().enumerate() {
        let image: Vec<u64> = (0..k)
            .map(|j| {
                (0..k).fold(0u64, |acc, kk| {
                    let a = s.get(i, j, kk) % f.0;
                    if a == 0 || w[kk] == 0 {
                        acc
                    } else {
                        f.add(acc, f.mul(a, w[kk]))
                    }
                })
            })
            .collect();
        for (sidx, &p) in block.pivots.iter().enumerate() {
            restricted[sidx][r] = image[p];
        }
    }
    let roots = distinct_roots(f, &char_poly(f, &restricted));
    if roots.len() <= 1 {
        return vec![block];
    }
    roots
        .into_iter()
        .filter_map(|lambda| {
            let shifted: Vec<Vec<u64>> = restricted
                .iter()
                .enumerate()
                .map(|(a, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(b, &v)| if a == b { f.sub(v, lambda) } else { v })
                        .collect()
                })
                .collect();
            let coords = nullspace(f, &shifted);
            if coords.is_empty() {
                return None;
            }
            let mut rows: Vec<Vec<u64>> = coords
                .iter()
                .map(|cvec| {
                    let mut v = vec![0u64; k];
                    for (coef, basis) in cvec.iter().zip(&block.rows) {
                        if *coef == 0 {
                            continue;
                        }
                        for (x, &y) in v.iter_mut().zip(basis) {
                            *x = f.add(*x, f.mul(*coef, y));
                        }
                    }
                    v
                })
                .collect();
            let pivots = rref(f, &mut rows);
            Some(Block { rows, pivots })
        })
        .collect()
}

/// `chi(1)^2 = |G| / sum_j w_j w_{j*} / |C_j|`, solved for an integer
/// `1 <= d <= sqrt|G|` dividing `|G|`.
fn recover_degree(f: Fp, c: &ClassData, w: &[u64], index: usize) -> Result<u64> {
    let p = f.0;
    let sum = (0..c.count()).fold(0u64, |acc, j| {
        let jinv = c.inverse_class[j] as usize;
        let term = f.mul(f.mul(w[j], w[jinv]), f.inv(c.sizes[j] % p));
        f.add(acc, term)
    });
    if sum == 0 {
        return Err(Error::DegreeRecovery {
            index,
            reason: "vanishing norm".into(),
        });
    }
    let target = f.mul(c.order % p, f.inv(sum));
    let bound = isqrt(c.order);
    let d = (1..=bound)
        .find(|&d| f.mul(d % p, d % p) == target)
        .ok_or_else(|| Error::DegreeRecovery {
            index,
            reason: format!("no square root of {target} mod {p} below {bound}"),
        })?;
    if !c.order.is_multiple_of(d) {
        return Err(Error::DegreeRecovery {
            index,
            reason: format!("degree {d} does not divide {}", c.order),
        });
    }
    Ok(d)
}

/// Recovers `chi(g_j)` from the eigenvalue multiplicities of `rho(g_j)`,
/// obtained by a discrete Fourier transform over the cyclic group `<g_j>`.
fn lift_value(
    f: Fp,
    c: &ClassData,
    modular: &[u64],
    j: usize,
    zeta_e: u64,
    degree: u64,
    index: usize,
) -> Result<Complex64> {
    let o = c.element_orders[j];
    let z = f.pow(zeta_e, c.exponent / o);
    let z_inv = f.inv(z);
    let o_inv = f.inv(o % f.0);
    let powers: Vec<u64> = (0..o).map(|m| modular[c.power_map(m, j)]).collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut count = 0u64;
    for l in 0..o {
        let step = f.pow(z_inv, l);
        let mut acc = 0u64;
        let mut root = 1u64;
        for &chi in &powers {
            acc = f.add(acc, f.mul(chi, root));
            root = f.mul(root, step);
        }
        let mult = f.mul(acc, o_inv);
        if mult > degree {
            return Err(Error::DegreeRecovery {
                index,
                reason: format!("multiplicity {mult} exceeds degree {degree} at class {j}"),
            });
        }
        if mult > 0 {
            let angle = 2.0 * std::f64::consts::PI * (l as f64) / (o as f64);
            total += Complex64::from_polar(mult as f64, angle);
            count += mult;
        }
    }
    if count != degree {
        return Err(Error::DegreeRecovery {
            index,
            reason: format!("multiplicities sum to {count}, expected {degree} at class {j}"),
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_prime_choice() {
        // |A_5| = 60, exponent 30: P > 2 sqrt 60 ~ 15.49, P = 1 mod 30 -> 31
        assert_eq!(dixon_prime(60, 30).unwrap(), 31);
        // S_3: exponent 6, P > 4.9 -> 7
        assert_eq!(dixon_prime(6, 6).unwrap(), 7);
        // trivial group
        assert_eq!(dixon_prime(1, 1).unwrap(), 3);
    }

    #[test]
    fn prime_search_can_fail() {
        assert!(matches!(
            dixon_prime(1 << 60, 1 << 40),
            Err(Error::NoSuitablePrime { .. })
        ));
    }
}
