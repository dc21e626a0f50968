//! Arithmetic in the prime field `F_p` and its extensions `F_q`, `q = p^m`.
//!
//! Extension elements are length-`m` little-endian coefficient vectors over
//! `F_p`, read as residues of `F_p[t]` modulo a monic irreducible polynomial of
//! degree `m`. Every operation reduces eagerly, so two elements are equal iff
//! their coefficient vectors are.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{self, Poly};

/// Largest admissible characteristic (exclusive). Products of two residues
/// then fit comfortably in a `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

/// Shared handle to an immutable field context.
pub type Field = Arc<FieldCtx>;

/// Description of `F_q` with `q = p^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    p: u64,
    m: usize,
    q: u64,
    /// Little-endian coefficients of the monic modulus, length `m + 1`.
    /// Empty for prime fields.
    modulus: Vec<u64>,
}

/// Builds a validated field context.
///
/// For `m > 1` without an explicit modulus, the lowest monic irreducible of
/// degree `m` (ordered by the integer `sum c_i p^i` of its lower coefficients)
/// is used. The modulus is ignored for `m = 1`.
pub fn make_field(p: u64, m: usize, modulus: Option<&[u64]>) -> Result<Field> {
    if m < 1 {
        return Err(Error::ZeroExtensionDegree);
    }
    if p >= MAX_PRIME {
        return Err(Error::PrimeTooLarge(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = checked_pow(p, m).ok_or(Error::FieldTooLarge { p, m })?;
    let base = Arc::new(FieldCtx {
        p,
        m: 1,
        q: p,
        modulus: Vec::new(),
    });
    if m == 1 {
        return Ok(base);
    }

    let modulus = match modulus {
        Some(coeffs) => {
            if coeffs.len() != m + 1 {
                return Err(Error::InvalidModulus(format!(
                    "expected {} coefficients for degree {m}, got {}",
                    m + 1,
                    coeffs.len()
                )));
            }
            if coeffs[m] != 1 {
                return Err(Error::InvalidModulus("modulus must be monic".into()));
            }
            if let Some(c) = coeffs.iter().find(|&&c| c >= p) {
                return Err(Error::InvalidModulus(format!(
                    "coefficient {c} is not reduced mod {p}"
                )));
            }
            let as_poly = Poly::from_indices(&base, coeffs);
            if !poly::is_irreducible(&as_poly)? {
                return Err(Error::InvalidModulus(format!(
                    "{as_poly} is reducible over F_{p}"
                )));
            }
            coeffs.to_vec()
        }
        None => {
            let found = poly::first_irreducible(m, &base);
            (0..=m).map(|i| found.coeff(i).to_index()).collect()
        }
    };
    Ok(Arc::new(FieldCtx { p, m, q, modulus }))
}

impl FieldCtx {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients (little-endian, monic), empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn reduce_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn reduce_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect()
    }

    fn reduce_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let m = self.m;
        if m == 1 {
            return vec![a[0] * b[0] % p];
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            // t^d = t^(d-m) * t^m and t^m = -(lower modulus terms)
            let neg = p - c;
            for t in 0..m {
                prod[d - m + t] = (prod[d - m + t] + neg * self.modulus[t]) % p;
            }
            prod[d] = 0;
        }
        prod.truncate(m);
        prod
    }
}

/// Convenience constructors that need the shared handle.
pub trait FieldExt {
    fn zero(&self) -> FieldElement;
    fn one(&self) -> FieldElement;
    /// Embeds an integer through `Z -> F_p -> F_q`.
    fn from_int(&self, v: u64) -> FieldElement;
    /// Element whose coefficient vector is the base-`p` digits of `index`.
    fn from_index(&self, index: u64) -> FieldElement;
    /// Element from an explicit coefficient vector; entries must be reduced.
    fn element(&self, coeffs: &[u64]) -> Result<FieldElement>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement;
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement;
    /// All `q` elements in index order.
    fn elements(&self) -> Box<dyn Iterator<Item = FieldElement> + '_>;
    /// Parses the text form: a decimal for `m = 1`, colon-joined little-endian
    /// decimals otherwise.
    fn parse_element(&self, s: &str) -> Result<FieldElement>;
}

impl FieldExt for Field {
    fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.m],
            ctx: Arc::clone(self),
        }
    }

    fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    fn from_int(&self, v: u64) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = v % self.p;
        FieldElement {
            coeffs,
            ctx: Arc::clone(self),
        }
    }

    fn from_index(&self, mut index: u64) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        for c in coeffs.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        FieldElement {
            coeffs,
            ctx: Arc::clone(self),
        }
    }

    fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.m {
            return Err(Error::parse(format!(
                "expected {} coefficients, got {}",
                self.m,
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::parse(format!(
                "coefficient {c} out of range for F_{}",
                self.p
            )));
        }
        Ok(FieldElement {
            coeffs: coeffs.to_vec(),
            ctx: Arc::clone(self),
        })
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let coeffs = (0..self.m).map(|_| rng.gen_range(0..self.p)).collect();
        FieldElement {
            coeffs,
            ctx: Arc::clone(self),
        }
    }

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    fn elements(&self) -> Box<dyn Iterator<Item = FieldElement> + '_> {
        Box::new((0..self.q).map(move |i| self.from_index(i)))
    }

    fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let parts: Vec<&str> = if self.m == 1 {
            vec![s]
        } else {
            s.split(':').collect()
        };
        let coeffs = parts
            .iter()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::parse(format!("bad field element {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.element(&coeffs)
    }
}

/// Element of `F_q` tied to its field context.
#[derive(Clone)]
pub struct FieldElement {
    coeffs: Vec<u64>,
    ctx: Field,
}

pub(crate) fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    /// Little-endian coefficients over `F_p`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Inverse of [`FieldExt::from_index`].
    pub fn to_index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.ctx.p + c)
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if same_field(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.ctx.reduce_add(&self.coeffs, &other.coeffs)))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.ctx.reduce_sub(&self.coeffs, &other.coeffs)))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.ctx.reduce_mul(&self.coeffs, &other.coeffs)))
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // a^(q-1) = 1 for a != 0
        Ok(self.pow(self.ctx.q - 2))
    }

    /// The unique `r` with `r^p = self`; Frobenius is a bijection on `F_q`.
    pub fn pth_root(&self) -> FieldElement {
        self.pow(self.ctx.q / self.ctx.p)
    }

    fn with(&self, coeffs: Vec<u64>) -> FieldElement {
        FieldElement {
            coeffs,
            ctx: Arc::clone(&self.ctx),
        }
    }
}

/// Product in `F_q`; fails when the operands live in different fields.
pub fn ff_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.try_mul(b)
}

/// Multiplicative inverse; fails on zero.
pub fn ff_inv(a: &FieldElement) -> Result<FieldElement> {
    a.inv()
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.ctx, &other.ctx)
    }
}

impl Eq for FieldElement {}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Operators panic on mismatched fields; use the `try_*` methods at trust
// boundaries.
impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch in addition")
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch in subtraction")
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.ctx.p;
        self.with(self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    (0..exp).try_fold(1u64, |acc, _| acc.checked_mul(base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4() -> Field {
        make_field(2, 2, Some(&[1, 1, 1])).unwrap()
    }

    #[test]
    fn make_field_accepts_and_rejects() {
        let f2 = make_field(2, 1, None).unwrap();
        assert_eq!(f2.order(), 2);
        assert_eq!(f4().order(), 4);
        assert_eq!(make_field(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(2, 0, None).unwrap_err(), Error::ZeroExtensionDegree);
        // t^2 + 1 = (t + 1)^2 over F_2
        assert!(matches!(
            make_field(2, 2, Some(&[1, 0, 1])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            make_field(2, 2, Some(&[1, 1])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            make_field(3, 2, Some(&[1, 0, 2])),
            Err(Error::InvalidModulus(_))
        ));
        assert_eq!(
            make_field(2_147_483_659, 1, None).unwrap_err(),
            Error::PrimeTooLarge(2_147_483_659)
        );
    }

    #[test]
    fn default_modulus_is_lowest_irreducible() {
        assert_eq!(make_field(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(make_field(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(make_field(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_field(2, 4, None).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn multiplication_examples() {
        let f2 = make_field(2, 1, None).unwrap();
        assert!(ff_mul(&f2.one(), &f2.one()).unwrap().is_one());

        let f4 = f4();
        let t = f4.element(&[0, 1]).unwrap();
        assert_eq!(ff_mul(&t, &t).unwrap(), f4.element(&[1, 1]).unwrap());

        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(ff_mul(&f3.from_int(2), &f3.from_int(2)).unwrap(), f3.one());
    }

    #[test]
    fn inverse_examples() {
        let f2 = make_field(2, 1, None).unwrap();
        assert_eq!(ff_inv(&f2.one()).unwrap(), f2.one());

        let f4 = f4();
        let t = f4.element(&[0, 1]).unwrap();
        assert_eq!(ff_inv(&t).unwrap(), f4.element(&[1, 1]).unwrap());

        let f5 = make_field(5, 1, None).unwrap();
        assert_eq!(ff_inv(&f5.from_int(2)).unwrap(), f5.from_int(3));

        assert_eq!(ff_inv(&f5.zero()).unwrap_err(), Error::ZeroInverse);
    }

    #[test]
    fn inverse_matches_exhaustive_search() {
        for (p, m) in [(2, 3), (3, 2), (5, 1), (7, 1), (2, 4)] {
            let field = make_field(p, m, None).unwrap();
            for a in field.elements().filter(|a| !a.is_zero()) {
                let brute = field
                    .elements()
                    .find(|b| (&a * b).is_one())
                    .expect("every nonzero element has an inverse");
                assert_eq!(a.inv().unwrap(), brute);
            }
        }
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let f2 = make_field(2, 1, None).unwrap();
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(
            ff_mul(&f2.one(), &f3.one()).unwrap_err(),
            Error::ContextMismatch
        );
        assert_eq!(f2.one().try_add(&f3.one()).unwrap_err(), Error::ContextMismatch);
    }

    #[test]
    fn equal_contexts_interoperate() {
        let a = make_field(2, 2, None).unwrap();
        let b = make_field(2, 2, Some(&[1, 1, 1])).unwrap();
        assert!(!Arc::ptr_eq(&a, &b));
        assert_eq!(ff_mul(&a.from_index(2), &b.from_index(3)).unwrap(), a.one());
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for (p, m) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1), (13, 1)] {
            let field = make_field(p, m, None).unwrap();
            for a in field.elements() {
                assert_eq!(a.pow(field.order()), a, "F_{p}^{m}");
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, m) in [(3, 5), (31, 2), (65_521, 1), (2, 17)] {
            let field = make_field(p, m, None).unwrap();
            for _ in 0..50 {
                let a = field.random(&mut rng);
                assert_eq!(a.pow(field.order()), a);
            }
        }
    }

    #[test]
    fn text_form_roundtrip_small_fields() {
        for (p, m) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)] {
            let field = make_field(p, m, None).unwrap();
            for a in field.elements() {
                assert_eq!(field.parse_element(&a.to_string()).unwrap(), a);
            }
        }
        let f8 = make_field(2, 3, None).unwrap();
        assert_eq!(f8.from_index(5).to_string(), "1:0:1");
        assert!(f8.parse_element("1:0").is_err());
        assert!(f8.parse_element("1:2:0").is_err());
        let f2 = make_field(2, 1, None).unwrap();
        assert!(f2.parse_element("1:0").is_err());
        assert!(f2.parse_element("x").is_err());
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        for (p, m) in [(2, 3), (3, 2), (5, 1)] {
            let field = make_field(p, m, None).unwrap();
            for a in field.elements() {
                assert_eq!(a.pth_root().pow(p), a);
            }
        }
    }

    #[test]
    fn prime_helpers() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(prime_divisors(12), [2, 3]);
        assert_eq!(prime_divisors(49), [7]);
    }
}
