//! Brute-force oracles over prime fields, written against plain `Vec<u64>`
//! coefficient lists so they share no code with the library.

#![allow(dead_code)]

use hip::{Field, FieldExt, Poly};

/// Little-endian coefficients over `F_p`, no trailing zeros.
pub type Raw = Vec<u64>;

fn trim(mut a: Raw) -> Raw {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn raw_mul(a: &[u64], b: &[u64], p: u64) -> Raw {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    (1..p).find(|b| a * b % p == 1).expect("nonzero residue")
}

/// Remainder of `a` by nonzero `b`.
pub fn raw_rem(a: &[u64], b: &[u64], p: u64) -> Raw {
    raw_divmod(a, b, p).1
}

pub fn raw_divmod(a: &[u64], b: &[u64], p: u64) -> (Raw, Raw) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = inv_mod(b[db], p);
    let mut r = trim(a.to_vec());
    let mut quot = vec![0; r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead % p;
        quot[shift] = c;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        r = trim(r);
    }
    (trim(quot), r)
}

/// All monic polynomials of degree `d` over `F_p`.
pub fn raw_monic(p: u64, d: usize) -> Vec<Raw> {
    let count = p.pow(d as u32);
    (0..count)
        .map(|mut idx| {
            let mut c: Raw = (0..d)
                .map(|_| {
                    let digit = idx % p;
                    idx /= p;
                    digit
                })
                .collect();
            c.push(1);
            c
        })
        .collect()
}

/// Trial division by every monic polynomial of degree `1..=d/2`.
pub fn brute_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    (1..=d / 2).all(|e| {
        raw_monic(p, e)
            .iter()
            .all(|g| !raw_rem(f, g, p).is_empty())
    })
}

pub fn brute_irreducibles(p: u64, d: usize) -> Vec<Raw> {
    raw_monic(p, d)
        .into_iter()
        .filter(|f| brute_irreducible(f, p))
        .collect()
}

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of monic irreducibles of degree `d` over `F_q`.
pub fn necklace_count(q: u64, d: u64) -> u64 {
    let sum: i64 = (1..=d)
        .filter(|e| d % e == 0)
        .map(|e| mobius(e) * q.pow((d / e) as u32) as i64)
        .sum();
    (sum / d as i64) as u64
}

/// Orders by degree then coefficients from the top down.
pub fn raw_canonical_cmp(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Factors monic `r` by dividing out every monic irreducible of degree `k`.
pub fn brute_factor(r: &[u64], k: usize, p: u64) -> Option<(Raw, Raw)> {
    for a in brute_irreducibles(p, k) {
        let (quot, rem) = raw_divmod(r, &a, p);
        if rem.is_empty() && quot.len() == k + 1 && brute_irreducible(&quot, p) {
            let mut pair = [a, quot];
            pair.sort_by(|x, y| raw_canonical_cmp(x, y));
            let [x, y] = pair;
            return Some((x, y));
        }
    }
    None
}

pub fn to_poly(ctx: &Field, raw: &[u64]) -> Poly {
    Poly::from_indices(ctx, raw)
}

pub fn to_raw(poly: &Poly) -> Raw {
    poly.coeffs().iter().map(|c| c.to_index()).collect()
}

pub fn field_elements(ctx: &Field, values: &[u64]) -> Vec<hip::FieldElement> {
    values.iter().map(|&v| ctx.from_index(v)).collect()
}

/// Parameter grid shared by the scheme-level tests.
pub const GRID: [(u64, usize, usize, usize); 5] =
    [(2, 1, 16, 7), (2, 1, 20, 3), (3, 1, 12, 5), (2, 2, 8, 3), (5, 1, 8, 3)];

/// Monomials of the public forms 1, 2, 14 and 15 of the 15x15 worked
/// example, listed in the order they were published.
pub mod printed {
    pub const FORM_1: &[(usize, usize)] = &[(2, 9), (4, 9), (8, 9), (1, 10), (3, 10), (7, 10), (2, 11), (6, 11), (8, 11), (1, 12), (5, 12), (7, 12), (8, 12), (4, 13), (6, 13), (7, 13), (8, 13), (3, 14), (5, 14), (6, 14), (7, 14), (8, 14), (2, 15), (4, 15), (5, 15), (6, 15), (7, 15), (8, 15), (1, 16), (3, 16), (4, 16), (5, 16), (6, 16), (7, 16), (8, 16)];
    
    pub const FORM_2: &[(usize, usize)] = &[(1, 9), (2, 9), (3, 9), (4, 9), (5, 9), (8, 9), (1, 10), (2, 10), (3, 10), (4, 10), (7, 10), (8, 10), (1, 11), (2, 11), (3, 11), (6, 11), (7, 11), (8, 11), (1, 12), (2, 12), (5, 12), (6, 12), (7, 12), (8, 12), (1, 13), (4, 13), (5, 13), (6, 13), (7, 13), (3, 14), (4, 14), (5, 14), (6, 14), (2, 15), (3, 15), (4, 15), (5, 15), (8, 15), (1, 16), (2, 16), (3, 16), (4, 16), (7, 16)];
    
    pub const FORM_14: &[(usize, usize)] = &[(1, 9), (4, 9), (6, 9), (8, 9), (3, 10), (5, 10), (7, 10), (2, 11), (4, 11), (6, 11), (8, 11), (1, 12), (3, 12), (5, 12), (7, 12), (8, 12), (2, 13), (4, 13), (6, 13), (7, 13), (1, 14), (3, 14), (5, 14), (6, 14), (2, 15), (4, 15), (5, 15), (8, 15), (1, 16), (3, 16), (4, 16), (7, 16), (8, 16)];
    
    pub const FORM_15: &[(usize, usize)] = &[(1, 9), (2, 9), (4, 9), (5, 9), (6, 9), (7, 9), (1, 10), (3, 10), (4, 10), (5, 10), (6, 10), (2, 11), (3, 11), (4, 11), (5, 11), (8, 11), (1, 12), (2, 12), (3, 12), (4, 12), (7, 12), (1, 13), (2, 13), (3, 13), (6, 13), (8, 13), (1, 14), (2, 14), (5, 14), (7, 14), (1, 15), (4, 15), (6, 15), (8, 15), (3, 16), (5, 16), (7, 16)];
}
