//! Recovery of the private transformation from the public key alone.
//!
//! Public form `i` equals `sum_l T[i][l] * Y_l`, and the coefficient sums
//! `Y_l` use pairwise disjoint monomial sets. So every monomial of `I_l`
//! carries exactly `T[i][l]` in form `i`: the matrix can be read off
//! directly, or solved for from `T * A = B` with `A` the monomial incidence
//! matrix of `f * g` and `B` the public coefficient matrix.
//!
//! Nothing here takes a [`PrivateKey`] as input.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::error::Result;
use crate::fields::{FieldElement, FieldExt};
use crate::matrix::{solve_right, Matrix};
use crate::mqforms::{all_pairs, coefficient_matrix, compose_public, symbolic_product, IndexPair};
use crate::poly::random_irreducible;
use crate::scheme::{decrypt, encrypt, PrivateKey, PublicKey};

/// Message pairs tried by [`verify_break`].
pub const VERIFY_MESSAGES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Readoff,
    Linear,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Readoff => "readoff",
            Method::Linear => "linear",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Agreement of the coefficients on `I_group` inside public form `form`
/// (both 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyRecord {
    pub form: usize,
    pub group: usize,
    /// Coefficient of the first monomial of the group.
    pub value: FieldElement,
    /// Monomials of the group whose coefficient differs from `value`.
    pub disagreeing: Vec<(IndexPair, FieldElement)>,
}

impl ConsistencyRecord {
    pub fn is_consistent(&self) -> bool {
        self.disagreeing.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredKey {
    pub t: Matrix,
    pub method: Method,
    /// One record per `(form, group)`, form-major.
    pub consistency_report: Vec<ConsistencyRecord>,
}

impl RecoveredKey {
    pub fn inconsistencies(&self) -> impl Iterator<Item = &ConsistencyRecord> {
        self.consistency_report.iter().filter(|r| !r.is_consistent())
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistencies().next().is_none()
    }

    /// Use the recovered matrix as a private key for `pk`'s parameters.
    pub fn to_private_key(&self, pk: &PublicKey) -> Result<PrivateKey> {
        PrivateKey::new(pk.params().clone(), self.t.clone())
    }

    /// Private-key file text tagged with the recovery method.
    pub fn to_key_text(&self, pk: &PublicKey) -> Result<String> {
        let sk = self.to_private_key(pk)?;
        Ok(sk.to_text_with_comment(Some(&format!("recovered-by: {}", self.method))))
    }

    /// One-line summary of the consistency check.
    pub fn summary(&self) -> String {
        let total = self.consistency_report.len();
        let bad: Vec<String> = self
            .inconsistencies()
            .map(|r| format!("(form {}, Y{})", r.form, r.group))
            .collect();
        if bad.is_empty() {
            format!("consistency: all {total} (form, group) pairs agree")
        } else {
            format!(
                "consistency: {} of {total} (form, group) pairs disagree: {}",
                bad.len(),
                bad.join(" ")
            )
        }
    }
}

fn consistency_report(pk: &PublicKey) -> Vec<ConsistencyRecord> {
    let k = pk.params().k();
    let product = symbolic_product(k).expect("validated k is positive");
    let mut report = Vec::with_capacity(pk.forms().len() * product.groups().len());
    for (i, form) in pk.forms().iter().enumerate() {
        for (l, group) in product.groups().iter().enumerate() {
            let value = form.coeff(group[0]);
            let disagreeing = group[1..]
                .iter()
                .map(|&pair| (pair, form.coeff(pair)))
                .filter(|(_, c)| *c != value)
                .collect();
            report.push(ConsistencyRecord {
                form: i + 1,
                group: l + 1,
                value,
                disagreeing,
            });
        }
    }
    report
}

/// Reads `T[i][l]` as the coefficient of the first monomial of `I_l` in form
/// `i`. Groups whose monomials disagree are flagged in the report; the
/// read-off still uses the first monomial.
pub fn attack_readoff(pk: &PublicKey) -> RecoveredKey {
    let dim = pk.params().dim();
    let report = consistency_report(pk);
    let mut t = Matrix::zeros(pk.params().ctx(), dim, dim);
    for rec in &report {
        t[(rec.form - 1, rec.group - 1)] = rec.value.clone();
    }
    RecoveredKey {
        t,
        method: Method::Readoff,
        consistency_report: report,
    }
}

/// Solves `T * A = B` where `A` maps monomials to coefficient sums and `B`
/// holds the public coefficients, both over [`all_pairs`] order.
pub fn attack_linear(pk: &PublicKey) -> Result<RecoveredKey> {
    let params = pk.params();
    let ctx = params.ctx();
    let a = symbolic_product(params.k())?.incidence_matrix(ctx);
    let b = coefficient_matrix(pk.forms(), params.k(), ctx)?;
    let t = solve_right(&a, &b)?;
    Ok(RecoveredKey {
        t,
        method: Method::Linear,
        consistency_report: consistency_report(pk),
    })
}

/// Outcome of [`verify_break`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakReport {
    /// Problem with the candidate matrix itself (wrong shape, singular).
    pub matrix_error: Option<String>,
    /// `(form, group)` pairs where the recomposed public key differs.
    pub form_mismatches: Vec<(usize, usize)>,
    pub messages_tried: usize,
    pub messages_recovered: usize,
    pub decrypt_failures: Vec<String>,
}

impl BreakReport {
    pub fn forms_match(&self) -> bool {
        self.matrix_error.is_none() && self.form_mismatches.is_empty()
    }

    pub fn roundtrips_ok(&self) -> bool {
        self.messages_tried > 0 && self.messages_recovered == self.messages_tried
    }

    pub fn success(&self) -> bool {
        self.forms_match() && self.roundtrips_ok()
    }
}

impl fmt::Display for BreakReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(err) = &self.matrix_error {
            writeln!(f, "matrix: {err}")?;
        }
        if self.form_mismatches.is_empty() {
            writeln!(f, "public key reproduced: {}", self.matrix_error.is_none())?;
        } else {
            let list: Vec<String> = self
                .form_mismatches
                .iter()
                .map(|(i, l)| format!("(form {i}, Y{l})"))
                .collect();
            writeln!(f, "public key reproduced: false; mismatches at {}", list.join(" "))?;
        }
        writeln!(
            f,
            "messages recovered: {}/{}",
            self.messages_recovered, self.messages_tried
        )?;
        for failure in &self.decrypt_failures {
            writeln!(f, "  {failure}")?;
        }
        writeln!(f, "break verified: {}", self.success())
    }
}

/// Checks a candidate transformation against the public key: it must
/// recompose to exactly the published forms, and decrypting fresh
/// ciphertexts with it must return the messages.
pub fn verify_break<R: Rng + ?Sized>(pk: &PublicKey, t: &Matrix, rng: &mut R) -> BreakReport {
    let params = pk.params();
    let mut report = BreakReport {
        matrix_error: None,
        form_mismatches: Vec::new(),
        messages_tried: 0,
        messages_recovered: 0,
        decrypt_failures: Vec::new(),
    };

    match compose_public(t, params.k()) {
        Ok(forms) => {
            let k = params.k();
            let mut mismatches = BTreeSet::new();
            for (i, (ours, theirs)) in forms.iter().zip(pk.forms()).enumerate() {
                for pair in all_pairs(k) {
                    if ours.coeff(pair) != theirs.coeff(pair) {
                        mismatches.insert((i + 1, pair.group(k)));
                    }
                }
            }
            report.form_mismatches = mismatches.into_iter().collect();
        }
        Err(e) => report.matrix_error = Some(e.to_string()),
    }

    let sk = match PrivateKey::new(params.clone(), t.clone()) {
        Ok(sk) => sk,
        Err(e) => {
            report.matrix_error.get_or_insert(e.to_string());
            return report;
        }
    };
    let ctx = params.ctx();
    let k = params.k();
    for _ in 0..VERIFY_MESSAGES {
        report.messages_tried += 1;
        let a = random_irreducible(k, ctx, rng).map(|a| a.scale(&ctx.random_nonzero(rng)));
        let b = random_irreducible(k, ctx, rng);
        let (a, b) = match (a, b) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                report.decrypt_failures.push(format!("sampling: {e}"));
                continue;
            }
        };
        let outcome = encrypt(pk, &a, &b).and_then(|z| decrypt(&sk, &z));
        match outcome {
            Ok(plain) if plain.factors() == crate::scheme::Plaintext::expected(&a, &b) => {
                report.messages_recovered += 1;
            }
            Ok(plain) => report.decrypt_failures.push(format!(
                "({a}) * ({b}) decrypted to ({}) * ({})",
                plain.first, plain.second
            )),
            Err(e) => report
                .decrypt_failures
                .push(format!("({a}) * ({b}): {e}")),
        }
    }
    report
}
