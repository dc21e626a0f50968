//! Dense univariate polynomials over `F_q`, Rabin's irreducibility test and
//! the factorization of a product of two irreducibles of a known degree.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{prime_divisors, same_field, Field, FieldElement, FieldExt};

/// Cap on random splitting attempts in [`factor_two_irreducibles_with`].
pub const SPLIT_ATTEMPTS: usize = 128;

const SAMPLE_ATTEMPTS: usize = 1_000_000;

/// Seed of the generator used by [`factor_two_irreducibles`].
const SPLIT_SEED: u64 = 0x5eed_f00d;

/// Little-endian polynomial with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
    ctx: Field,
}

impl Poly {
    pub fn new(ctx: &Field, coeffs: Vec<FieldElement>) -> Result<Poly> {
        if coeffs.iter().any(|c| !same_field(c.ctx(), ctx)) {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::from_vec(ctx, coeffs))
    }

    fn from_vec(ctx: &Field, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Poly {
            coeffs,
            ctx: Arc::clone(ctx),
        }
    }

    /// Builds a polynomial whose coefficients are `ctx.from_index(i)`; over a
    /// prime field these are just the residues.
    pub fn from_indices(ctx: &Field, indices: &[u64]) -> Poly {
        Self::from_vec(ctx, indices.iter().map(|&i| ctx.from_index(i)).collect())
    }

    pub fn zero(ctx: &Field) -> Poly {
        Self::from_vec(ctx, Vec::new())
    }

    pub fn one(ctx: &Field) -> Poly {
        Self::constant(ctx.one())
    }

    pub fn constant(c: FieldElement) -> Poly {
        let ctx = Arc::clone(c.ctx());
        Self::from_vec(&ctx, vec![c])
    }

    /// `c * x^d`.
    pub fn monomial(c: FieldElement, d: usize) -> Poly {
        let ctx = Arc::clone(c.ctx());
        let mut coeffs = vec![ctx.zero(); d];
        coeffs.push(c);
        Self::from_vec(&ctx, coeffs)
    }

    pub fn x(ctx: &Field) -> Poly {
        Self::monomial(ctx.one(), 1)
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading_coeff(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(FieldElement::is_one)
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Self::from_vec(&self.ctx, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.ctx.from_int(i as u64) * c)
            .collect();
        Self::from_vec(&self.ctx, coeffs)
    }

    pub fn eval(&self, at: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.ctx.zero(), |acc, c| &(&acc * at) + c)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if same_field(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn add_unchecked(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Self::from_vec(&self.ctx, coeffs)
    }

    fn sub_unchecked(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        Self::from_vec(&self.ctx, coeffs)
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::from_vec(&self.ctx, out)
    }

    fn divmod_unchecked(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("divisor is nonzero");
        let lead_inv = divisor.coeffs[dd].inv().expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(&self.ctx), self.clone());
        }
        let mut quot = vec![self.ctx.zero(); rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let c = &rem[shift + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = &rem[shift + i] - &(&c * d);
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        (Self::from_vec(&self.ctx, quot), Self::from_vec(&self.ctx, rem))
    }

    fn rem_unchecked(&self, divisor: &Poly) -> Poly {
        self.divmod_unchecked(divisor).1
    }

    fn mulmod(&self, other: &Poly, modulus: &Poly) -> Poly {
        self.mul_unchecked(other).rem_unchecked(modulus)
    }

    fn powmod_unchecked(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem_unchecked(modulus);
        let mut acc = Self::one(&self.ctx).rem_unchecked(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, modulus);
            }
        }
        acc
    }

    /// `self^(q^times) mod modulus` by repeated `q`-th powering.
    fn frobenius_iter(&self, times: usize, modulus: &Poly) -> Poly {
        let q = self.ctx.order();
        (0..times).fold(self.rem_unchecked(modulus), |acc, _| {
            acc.powmod_unchecked(q, modulus)
        })
    }

    /// Canonical order: by degree, then coefficients from the highest power
    /// down, each compared by element index.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            self.coeffs
                .iter()
                .rev()
                .zip(other.coeffs.iter().rev())
                .map(|(a, b)| a.to_index().cmp(&b.to_index()))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    /// Every monic polynomial of degree `d`, in increasing canonical order.
    pub fn all_monic(ctx: &Field, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = ctx.order();
        let mut digits = vec![0u64; d];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let mut coeffs: Vec<FieldElement> =
                digits.iter().map(|&i| ctx.from_index(i)).collect();
            coeffs.push(ctx.one());
            let next = Self::from_vec(ctx, coeffs);
            // odometer with the constant term as least significant digit
            done = true;
            for digit in digits.iter_mut() {
                *digit += 1;
                if *digit < q {
                    done = false;
                    break;
                }
                *digit = 0;
            }
            Some(next)
        })
    }

    /// Random monic polynomial of degree exactly `d`.
    pub fn random_monic<R: Rng + ?Sized>(ctx: &Field, d: usize, rng: &mut R) -> Poly {
        let mut coeffs: Vec<FieldElement> = (0..d).map(|_| ctx.random(rng)).collect();
        coeffs.push(ctx.one());
        Self::from_vec(ctx, coeffs)
    }

    /// Parses space-separated element text forms, little-endian.
    pub fn parse(ctx: &Field, s: &str) -> Result<Poly> {
        let coeffs = s
            .split_whitespace()
            .map(|t| ctx.parse_element(t))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::parse("empty polynomial"));
        }
        Ok(Self::from_vec(ctx, coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.check(rhs).expect("field mismatch in polynomial addition");
        self.add_unchecked(rhs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.check(rhs).expect("field mismatch in polynomial subtraction");
        self.sub_unchecked(rhs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.check(rhs).expect("field mismatch in polynomial multiplication");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_vec(&self.ctx, self.coeffs.iter().map(|c| -c).collect())
    }
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly> {
    a.check(b)?;
    Ok(a.mul_unchecked(b))
}

/// Returns `(quotient, remainder)` with `deg(remainder) < deg(b)`.
pub fn poly_divmod(a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    a.check(b)?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a.divmod_unchecked(b))
}

/// Monic greatest common divisor.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    a.check(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    Ok(gcd_unchecked(a, b))
}

fn gcd_unchecked(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem_unchecked(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// `a^e mod modulus` by square-and-multiply.
pub fn poly_powmod(a: &Poly, e: u64, modulus: &Poly) -> Result<Poly> {
    a.check(modulus)?;
    match modulus.degree() {
        None | Some(0) => Err(Error::ConstantModulus),
        _ => Ok(a.powmod_unchecked(e, modulus)),
    }
}

/// Rabin's test: `f` of degree `d` is irreducible over `F_q` iff
/// `x^(q^d) = x mod f` and `gcd(x^(q^(d/l)) - x, f) = 1` for each prime `l | d`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let d = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(d) => d,
    };
    let f = f.monic();
    let x = Poly::x(&f.ctx).rem_unchecked(&f);
    if x.frobenius_iter(d, &f) != x {
        return Ok(false);
    }
    for l in prime_divisors(d as u64) {
        let h = x.frobenius_iter(d / l as usize, &f).sub_unchecked(&x);
        if !gcd_unchecked(&h, &f).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Samples random monic polynomials of degree `d` until one is irreducible.
pub fn random_irreducible<R: Rng + ?Sized>(d: usize, ctx: &Field, rng: &mut R) -> Result<Poly> {
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    for _ in 0..SAMPLE_ATTEMPTS {
        let candidate = Poly::random_monic(ctx, d, rng);
        if is_irreducible(&candidate)? {
            return Ok(candidate);
        }
    }
    Err(Error::SamplingExhausted(SAMPLE_ATTEMPTS))
}

/// The smallest monic irreducible of degree `d` in [`Poly::canonical_cmp`]
/// order. One always exists for `d >= 1`.
pub fn first_irreducible(d: usize, ctx: &Field) -> Poly {
    assert!(d >= 1, "degree must be positive");
    Poly::all_monic(ctx, d)
        .find(|f| is_irreducible(f).expect("degree is positive"))
        .expect("irreducible polynomials exist in every degree")
}

/// Splits `r = c * a * b` with `a`, `b` monic irreducible of degree `k` and
/// returns `(a, b)` with `a <= b` canonically. Uses a fixed internal seed.
pub fn factor_two_irreducibles(r: &Poly, k: usize) -> Result<(Poly, Poly)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    factor_two_irreducibles_with(r, k, &mut rng)
}

/// As [`factor_two_irreducibles`] with a caller-supplied generator for the
/// equal-degree splitter.
pub fn factor_two_irreducibles_with<R: Rng + ?Sized>(
    r: &Poly,
    k: usize,
    rng: &mut R,
) -> Result<(Poly, Poly)> {
    if k == 0 {
        return Err(Error::Factorization("factor degree must be positive".into()));
    }
    if r.degree() != Some(2 * k) {
        return Err(Error::Factorization(format!(
            "expected degree {}, got {}",
            2 * k,
            r.degree().map_or("-inf".to_string(), |d| d.to_string())
        )));
    }
    let f = r.monic();
    let ctx = Arc::clone(&f.ctx);

    let df = f.derivative();
    if df.is_zero() {
        // f is a p-th power; a product of two irreducibles can only be a square
        if ctx.characteristic() != 2 {
            return Err(not_two_irreducibles("is a perfect p-th power with p > 2"));
        }
        let root = square_root_char2(&f);
        return square_case(&f, root, k);
    }
    let g = gcd_unchecked(&f, &df);
    if !g.is_one() {
        return square_case(&f, g, k);
    }

    // Squarefree: every irreducible factor must have degree exactly k.
    let x = Poly::x(&ctx).rem_unchecked(&f);
    if x.frobenius_iter(k, &f) != x {
        return Err(not_two_irreducibles("has a factor whose degree does not divide k"));
    }
    for e in (1..k).filter(|e| k % e == 0) {
        let h = x.frobenius_iter(e, &f).sub_unchecked(&x);
        if !gcd_unchecked(&h, &f).is_one() {
            return Err(not_two_irreducibles("has a factor of degree below k"));
        }
    }

    let a = split_equal_degree(&f, k, rng)?;
    let b = f.divmod_unchecked(&a).0.monic();
    Ok(ordered(a, b))
}

fn not_two_irreducibles(why: &str) -> Error {
    Error::Factorization(format!("not a product of two irreducibles of equal degree: {why}"))
}

fn ordered(a: Poly, b: Poly) -> (Poly, Poly) {
    if a.canonical_cmp(&b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

fn square_case(f: &Poly, root: Poly, k: usize) -> Result<(Poly, Poly)> {
    let root = root.monic();
    if root.degree() != Some(k) || &root * &root != *f || !is_irreducible(&root)? {
        return Err(not_two_irreducibles("repeated factor is not a squared irreducible"));
    }
    Ok((root.clone(), root))
}

/// Square root of a polynomial with vanishing derivative in characteristic 2:
/// only even powers occur and each coefficient has a unique square root.
fn square_root_char2(f: &Poly) -> Poly {
    let coeffs = f.coeffs.iter().step_by(2).map(FieldElement::pth_root).collect();
    Poly::from_vec(&f.ctx, coeffs)
}

/// Finds a proper monic factor of `f`, a product of two distinct irreducibles
/// of degree `k`.
fn split_equal_degree<R: Rng + ?Sized>(f: &Poly, k: usize, rng: &mut R) -> Result<Poly> {
    let ctx = Arc::clone(&f.ctx);
    let n = 2 * k;
    let q = ctx.order();
    for _ in 0..SPLIT_ATTEMPTS {
        let w = Poly::from_vec(&ctx, (0..n).map(|_| ctx.random(rng)).collect());
        if w.degree().is_none_or(|d| d == 0) {
            continue;
        }
        let g = gcd_unchecked(&w, f);
        if is_proper(&g, n) {
            return Ok(g);
        }
        let probe = if q % 2 == 0 {
            trace_map(&w, ctx.degree() * k, f)
        } else {
            // w^((q^k - 1)/2) = (w^(1 + q + ... + q^(k-1)))^((q - 1)/2)
            let mut norm = Poly::one(&ctx);
            let mut conj = w.clone();
            for i in 0..k {
                if i > 0 {
                    conj = conj.powmod_unchecked(q, f);
                }
                norm = norm.mulmod(&conj, f);
            }
            norm.powmod_unchecked((q - 1) / 2, f)
                .sub_unchecked(&Poly::one(&ctx))
        };
        let g = gcd_unchecked(&probe, f);
        if is_proper(&g, n) {
            return Ok(g);
        }
    }
    Err(Error::Factorization(format!(
        "equal-degree splitting found no factor in {SPLIT_ATTEMPTS} attempts"
    )))
}

/// `sum_{i < terms} w^(2^i) mod f`.
fn trace_map(w: &Poly, terms: usize, f: &Poly) -> Poly {
    let mut acc = w.rem_unchecked(f);
    let mut s = acc.clone();
    for _ in 1..terms {
        s = s.mulmod(&s, f);
        acc = acc.add_unchecked(&s);
    }
    acc
}

fn is_proper(g: &Poly, n: usize) -> bool {
    g.degree().is_some_and(|d| d > 0 && d < n)
}
