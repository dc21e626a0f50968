//! Parameters, key generation, encryption and decryption, and the
//! line-oriented key and ciphertext files.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{is_prime, make_field, same_field, Field, FieldElement, FieldExt};
use crate::matrix::{mat_inv, random_invertible, Matrix};
use crate::mqforms::{compose_public, eval_form, QuadForm};
use crate::poly::{factor_two_irreducibles, first_irreducible, is_irreducible, Poly};

/// Validated scheme parameters: `F_q` with `q = p^m`, the extension degree `n`
/// of `K = F_q[x]/h(x)` and the message degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    p: u64,
    m: usize,
    n: usize,
    k: usize,
    h: Poly,
    ctx: Field,
}

/// Validates `(p, m, n, k)` and picks the lowest monic irreducible `h` of
/// degree `n`. Extension fields use their default modulus.
pub fn validate_params(p: u64, m: usize, n: usize, k: usize) -> Result<Params> {
    Params::new(p, m, n, k, None)
}

impl Params {
    pub fn new(p: u64, m: usize, n: usize, k: usize, h: Option<Poly>) -> Result<Params> {
        Self::build(p, m, n, k, h, true)
    }

    /// As [`Params::new`] but accepts any `k >= 1`. Nothing in the scheme
    /// depends on `k` being prime; this exists for small worked examples
    /// such as `k = 1`.
    pub fn new_any_k(p: u64, m: usize, n: usize, k: usize, h: Option<Poly>) -> Result<Params> {
        Self::build(p, m, n, k, h, false)
    }

    fn build(
        p: u64,
        m: usize,
        n: usize,
        k: usize,
        h: Option<Poly>,
        require_prime_k: bool,
    ) -> Result<Params> {
        let ctx = make_field(p, m, None)?;
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if require_prime_k && !is_prime(k as u64) {
            return Err(Error::InvalidParams(format!("k = {k} is not prime")));
        }
        if 2 * k + 1 >= n {
            return Err(Error::InvalidParams(format!(
                "need 2k < n - 1, got k = {k}, n = {n}"
            )));
        }
        let h = match h {
            Some(h) => {
                if !same_field(h.ctx(), &ctx) {
                    return Err(Error::ContextMismatch);
                }
                if h.degree() != Some(n) || !h.is_monic() {
                    return Err(Error::InvalidParams(format!(
                        "h must be monic of degree {n}"
                    )));
                }
                if !is_irreducible(&h)? {
                    return Err(Error::InvalidParams("h is reducible".into()));
                }
                h
            }
            None => first_irreducible(n, &ctx),
        };
        Ok(Params { p, m, n, k, h, ctx })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    /// `2k + 1`: the number of public forms and ciphertext coefficients.
    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    fn header(&self) -> String {
        format!(
            "HIP p={} m={} n={} k={}\nh: {}\n",
            self.p, self.m, self.n, self.k, self.h
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: Params,
    forms: Vec<QuadForm>,
}

impl PublicKey {
    pub fn new(params: Params, forms: Vec<QuadForm>) -> Result<PublicKey> {
        if forms.len() != params.dim() {
            return Err(Error::Shape(format!(
                "expected {} public forms, got {}",
                params.dim(),
                forms.len()
            )));
        }
        for form in &forms {
            if form.k() != params.k {
                return Err(Error::Shape("public form has the wrong k".into()));
            }
            if !same_field(form.ctx(), &params.ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(PublicKey { params, forms })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `forms()[m - 1]` is `p_m`.
    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn to_text(&self) -> String {
        let mut out = self.params.header();
        out.push_str("P:\n");
        for form in &self.forms {
            out.push_str(&form.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<PublicKey> {
        match parse_key_file(text)? {
            KeyFile::Public(pk) => Ok(pk),
            KeyFile::Private(_) => Err(Error::parse("expected a public key, found a private key")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    params: Params,
    t: Matrix,
}

impl PrivateKey {
    /// Checks shape and invertibility of `t`.
    pub fn new(params: Params, t: Matrix) -> Result<PrivateKey> {
        let dim = params.dim();
        if t.rows() != dim || t.cols() != dim {
            return Err(Error::Shape(format!(
                "private matrix must be {dim}x{dim}, got {}x{}",
                t.rows(),
                t.cols()
            )));
        }
        if !same_field(t.ctx(), &params.ctx) {
            return Err(Error::ContextMismatch);
        }
        mat_inv(&t)?;
        Ok(PrivateKey { params, t })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn matrix(&self) -> &Matrix {
        &self.t
    }

    pub fn to_text(&self) -> String {
        self.to_text_with_comment(None)
    }

    /// Same file layout with a leading `# comment` line.
    pub fn to_text_with_comment(&self, comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = comment {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.params.header());
        out.push_str("T:\n");
        out.push_str(&self.t.to_string());
        out
    }

    pub fn from_text(text: &str) -> Result<PrivateKey> {
        match parse_key_file(text)? {
            KeyFile::Private(sk) => Ok(sk),
            KeyFile::Public(_) => Err(Error::parse("expected a private key, found a public key")),
        }
    }
}

/// Either kind of key file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyFile {
    Public(PublicKey),
    Private(PrivateKey),
}

/// Parses a key file. Lines starting with `#` are comments.
pub fn parse_key_file(text: &str) -> Result<KeyFile> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::parse("empty key file"))?;
    let (p, m, n, k) = parse_header(header)?;
    let ctx = make_field(p, m, None)?;

    let h_line = lines.next().ok_or_else(|| Error::parse("missing h line"))?;
    let h_text = h_line
        .strip_prefix("h:")
        .ok_or_else(|| Error::parse("expected 'h: <poly>'"))?;
    let h = Poly::parse(&ctx, h_text)?;
    let params = Params::new(p, m, n, k, Some(h))?;

    let section = lines.next().ok_or_else(|| Error::parse("missing key section"))?;
    let dim = params.dim();
    let body: Vec<&str> = lines.by_ref().take(dim).collect();
    if body.len() != dim {
        return Err(Error::parse(format!(
            "expected {dim} key lines, found {}",
            body.len()
        )));
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::parse("trailing data after key"));
    }
    match section.trim() {
        "T:" => {
            let t = Matrix::parse(params.ctx(), &body)?;
            Ok(KeyFile::Private(PrivateKey::new(params, t)?))
        }
        "P:" => {
            let forms = body
                .iter()
                .map(|line| QuadForm::parse(params.ctx(), k, line))
                .collect::<Result<Vec<_>>>()?;
            Ok(KeyFile::Public(PublicKey::new(params, forms)?))
        }
        other => Err(Error::parse(format!("unknown key section {other:?}"))),
    }
}

fn parse_header(line: &str) -> Result<(u64, usize, usize, usize)> {
    let mut fields = line.split_whitespace();
    if fields.next() != Some("HIP") {
        return Err(Error::parse("key file must start with 'HIP'"));
    }
    let mut get = |name: &str| -> Result<u64> {
        let field = fields
            .next()
            .ok_or_else(|| Error::parse(format!("header is missing {name}")))?;
        field
            .strip_prefix(name)
            .and_then(|v| v.strip_prefix('='))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::parse(format!("bad header field {field:?}")))
    };
    let p = get("p")?;
    let m = get("m")? as usize;
    let n = get("n")? as usize;
    let k = get("k")? as usize;
    Ok((p, m, n, k))
}

/// The `2k + 1` coefficients of `z`, degrees `0..=2k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    coeffs: Vec<FieldElement>,
}

impl Ciphertext {
    pub fn new(coeffs: Vec<FieldElement>) -> Ciphertext {
        Ciphertext { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// The ciphertext as an element of `K`: `n` coefficients, zero padded.
    pub fn padded(&self, params: &Params) -> Vec<FieldElement> {
        let mut out = self.coeffs.clone();
        out.resize(params.n, params.ctx.zero());
        out
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        format!("{}\n", parts.join(" "))
    }

    pub fn from_text(params: &Params, text: &str) -> Result<Ciphertext> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let line = lines.next().ok_or_else(|| Error::parse("empty ciphertext"))?;
        if lines.next().is_some() {
            return Err(Error::parse("ciphertext must be a single line"));
        }
        let coeffs = line
            .split_whitespace()
            .map(|t| params.ctx.parse_element(t))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != params.dim() {
            return Err(Error::parse(format!(
                "expected {} ciphertext coefficients, got {}",
                params.dim(),
                coeffs.len()
            )));
        }
        Ok(Ciphertext { coeffs })
    }
}

/// Recovered message: monic factors in canonical order and the scalar with
/// `scalar * first * second = r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plaintext {
    pub first: Poly,
    pub second: Poly,
    pub scalar: FieldElement,
}

impl Plaintext {
    /// Canonically ordered monic pair for two messages, for comparisons.
    pub fn expected(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let (a, b) = (a.monic(), b.monic());
        if a.canonical_cmp(&b).is_gt() {
            (b, a)
        } else {
            (a, b)
        }
    }

    pub fn factors(&self) -> (Poly, Poly) {
        (self.first.clone(), self.second.clone())
    }
}

impl fmt::Display for Plaintext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p: {}", self.first)?;
        writeln!(f, "q: {}", self.second)?;
        writeln!(f, "scalar: {}", self.scalar)
    }
}

pub fn keygen<R: Rng + ?Sized>(params: &Params, rng: &mut R) -> Result<(PublicKey, PrivateKey)> {
    let t = random_invertible(params.dim(), &params.ctx, rng)?;
    keys_from_matrix(params, t)
}

/// Builds both keys around a given invertible transformation.
pub fn keys_from_matrix(params: &Params, t: Matrix) -> Result<(PublicKey, PrivateKey)> {
    let sk = PrivateKey::new(params.clone(), t)?;
    let forms = compose_public(&sk.t, params.k)?;
    let pk = PublicKey::new(params.clone(), forms)?;
    Ok((pk, sk))
}

/// Bob's side: both inputs irreducible of degree exactly `k`.
pub fn encrypt(pk: &PublicKey, p_bob: &Poly, q_bob: &Poly) -> Result<Ciphertext> {
    let k = pk.params.k;
    let mut v = Vec::with_capacity(2 * (k + 1));
    for (name, poly) in [("p", p_bob), ("q", q_bob)] {
        if !same_field(poly.ctx(), &pk.params.ctx) {
            return Err(Error::ContextMismatch);
        }
        if poly.degree() != Some(k) {
            return Err(Error::InvalidPlaintext(format!(
                "{name} must have degree {k}, got {}",
                poly.degree().map_or("-inf".to_string(), |d| d.to_string())
            )));
        }
        if !is_irreducible(poly)? {
            return Err(Error::InvalidPlaintext(format!("{name} = {poly} is reducible")));
        }
        v.extend((0..=k).map(|i| poly.coeff(i)));
    }
    let coeffs = pk
        .forms
        .iter()
        .map(|form| eval_form(form, &v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ciphertext { coeffs })
}

/// Alice's side: undo `T`, then factor the product.
pub fn decrypt(sk: &PrivateKey, z: &Ciphertext) -> Result<Plaintext> {
    let r = unmask(sk, z)?;
    let scalar = r
        .leading_coeff()
        .cloned()
        .ok_or_else(|| Error::Factorization("ciphertext unmasks to zero".into()))?;
    let (first, second) = factor_two_irreducibles(&r, sk.params.k)?;
    Ok(Plaintext {
        first,
        second,
        scalar,
    })
}

/// `T^{-1} z` as a polynomial: the product of Bob's inputs.
pub fn unmask(sk: &PrivateKey, z: &Ciphertext) -> Result<Poly> {
    if z.coeffs.len() != sk.params.dim() {
        return Err(Error::Shape(format!(
            "ciphertext has {} coefficients, expected {}",
            z.coeffs.len(),
            sk.params.dim()
        )));
    }
    let inv = mat_inv(&sk.t)?;
    let r = inv.apply(&z.coeffs)?;
    Poly::new(&sk.params.ctx, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validate_params_examples() {
        let params = validate_params(2, 1, 16, 7).unwrap();
        assert_eq!(params.dim(), 15);
        assert_eq!(params.h().degree(), Some(16));
        assert!(is_irreducible(params.h()).unwrap());
        assert!(matches!(validate_params(2, 1, 15, 7), Err(Error::InvalidParams(_))));
        assert!(matches!(validate_params(2, 1, 10, 4), Err(Error::InvalidParams(_))));
        assert_eq!(validate_params(4, 1, 16, 7).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn explicit_h_is_validated() {
        let f2 = make_field(2, 1, None).unwrap();
        let reducible = Poly::monomial(f2.one(), 8);
        assert!(Params::new(2, 1, 8, 3, Some(reducible)).is_err());
        let wrong_degree = first_irreducible(9, &f2);
        assert!(Params::new(2, 1, 8, 3, Some(wrong_degree)).is_err());
        let ok = first_irreducible(8, &f2);
        assert!(Params::new(2, 1, 8, 3, Some(ok)).is_ok());
    }

    #[test]
    fn identity_key_encrypts_to_product() {
        let params = Params::new_any_k(2, 1, 4, 1, None).unwrap();
        assert!(validate_params(2, 1, 4, 1).is_err());
        let ctx = params.ctx().clone();
        let (pk, sk) = keys_from_matrix(&params, Matrix::identity(&ctx, 3)).unwrap();
        let a = Poly::from_indices(&ctx, &[1, 1]);
        let b = Poly::from_indices(&ctx, &[0, 1]);
        let z = encrypt(&pk, &a, &b).unwrap();
        assert_eq!(z.to_text(), "0 1 1\n");
        let plain = decrypt(&sk, &z).unwrap();
        assert_eq!(plain.factors(), (b, a));
        assert!(plain.scalar.is_one());
    }

    #[test]
    fn identity_key_decrypts_known_product() {
        let params = validate_params(2, 1, 8, 3).unwrap();
        let ctx = params.ctx().clone();
        let (_, sk) = keys_from_matrix(&params, Matrix::identity(&ctx, 7)).unwrap();
        let z = Ciphertext::new(
            [1, 1, 1, 1, 1, 1, 1].iter().map(|&c| ctx.from_int(c)).collect(),
        );
        let plain = decrypt(&sk, &z).unwrap();
        assert_eq!(plain.first, Poly::from_indices(&ctx, &[1, 1, 0, 1]));
        assert_eq!(plain.second, Poly::from_indices(&ctx, &[1, 0, 1, 1]));
        assert!(plain.scalar.is_one());

        let zero = Ciphertext::new(vec![ctx.zero(); 7]);
        assert!(matches!(decrypt(&sk, &zero), Err(Error::Factorization(_))));
    }

    #[test]
    fn encrypt_rejects_bad_plaintexts() {
        let params = validate_params(2, 1, 8, 2).unwrap();
        let ctx = params.ctx().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (pk, _) = keygen(&params, &mut rng).unwrap();
        let good = Poly::from_indices(&ctx, &[1, 1, 1]);
        let reducible = Poly::from_indices(&ctx, &[1, 0, 1]);
        let short = Poly::from_indices(&ctx, &[1, 1]);
        assert!(matches!(encrypt(&pk, &reducible, &good), Err(Error::InvalidPlaintext(_))));
        assert!(matches!(encrypt(&pk, &good, &short), Err(Error::InvalidPlaintext(_))));
        let f3 = make_field(3, 1, None).unwrap();
        let alien = Poly::from_indices(&f3, &[1, 0, 1]);
        assert_eq!(encrypt(&pk, &good, &alien).unwrap_err(), Error::ContextMismatch);
    }

    #[test]
    fn ciphertext_is_transformed_product() {
        let params = validate_params(3, 1, 12, 5).unwrap();
        let ctx = params.ctx().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (pk, sk) = keygen(&params, &mut rng).unwrap();
        for _ in 0..5 {
            let a = crate::poly::random_irreducible(5, &ctx, &mut rng)
                .unwrap()
                .scale(&ctx.random_nonzero(&mut rng));
            let b = crate::poly::random_irreducible(5, &ctx, &mut rng).unwrap();
            let z = encrypt(&pk, &a, &b).unwrap();
            let prod = &a * &b;
            let prod_coeffs: Vec<_> = (0..11).map(|i| prod.coeff(i)).collect();
            assert_eq!(z.coeffs(), sk.matrix().apply(&prod_coeffs).unwrap().as_slice());
            let plain = decrypt(&sk, &z).unwrap();
            assert_eq!(plain.factors(), Plaintext::expected(&a, &b));
            assert_eq!(&prod.scale(&plain.scalar.inv().unwrap()), &(&plain.first * &plain.second));
        }
    }

    #[test]
    fn keygen_is_deterministic() {
        let params = validate_params(2, 2, 8, 3).unwrap();
        let (pk1, sk1) = keygen(&params, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let (pk2, sk2) = keygen(&params, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(pk1.to_text(), pk2.to_text());
        assert_eq!(sk1.to_text(), sk2.to_text());
    }

    #[test]
    fn key_files_roundtrip() {
        let params = validate_params(2, 2, 8, 3).unwrap();
        let (pk, sk) = keygen(&params, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(PublicKey::from_text(&pk.to_text()).unwrap(), pk);
        assert_eq!(PrivateKey::from_text(&sk.to_text()).unwrap(), sk);
        let commented = sk.to_text_with_comment(Some("recovered-by: linear"));
        assert!(commented.starts_with("# recovered-by: linear\nHIP p=2 m=2 n=8 k=3\nh: "));
        assert_eq!(PrivateKey::from_text(&commented).unwrap(), sk);
        assert!(PublicKey::from_text(&sk.to_text()).is_err());
        assert!(PrivateKey::from_text(&pk.to_text()).is_err());
    }

    #[test]
    fn malformed_key_files_are_rejected() {
        let params = validate_params(2, 1, 8, 3).unwrap();
        let (pk, sk) = keygen(&params, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let text = pk.to_text();
        let truncated: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(PublicKey::from_text(&truncated).is_err());
        assert!(PublicKey::from_text("").is_err());
        assert!(PublicKey::from_text(&text.replace("HIP", "XIP")).is_err());
        assert!(PublicKey::from_text(&text.replace("k=3", "k=4")).is_err());
        assert!(PublicKey::from_text(&format!("{text}1,5,1\n")).is_err());

        // singular T is not a private key
        let sing = sk.to_text().replace(&sk.matrix().to_string(), &"0 0 0 0 0 0 0\n".repeat(7));
        assert_eq!(PrivateKey::from_text(&sing).unwrap_err(), Error::Singular);
    }

    #[test]
    fn ciphertext_text_roundtrip_and_padding() {
        let params = validate_params(5, 1, 8, 3).unwrap();
        let ctx = params.ctx().clone();
        let z = Ciphertext::new((0..7).map(|i| ctx.from_int(i)).collect());
        assert_eq!(Ciphertext::from_text(&params, &z.to_text()).unwrap(), z);
        assert!(Ciphertext::from_text(&params, "1 2 3").is_err());
        let padded = z.padded(&params);
        assert_eq!(padded.len(), 8);
        assert!(padded[7].is_zero());
    }
}
