//! Coefficient-sum index sets and the bilinear public forms.
//!
//! With `f = y_1 + y_2 x + ... + y_{k+1} x^k` and
//! `g = y_{k+2} + ... + y_{2k+2} x^k`, the coefficient of `x^(m-1)` in `f*g`
//! is the sum of `y_i y_j` over the index set
//! `I_m = {(i, j) : 1 <= i <= k+1, k+2 <= j <= 2k+2, i + j = m + k + 2}`.
//! The sets `I_1..I_{2k+1}` partition all `(k+1)^2` cross monomials.
//!
//! Variables, index sets and form numbers are 1-based throughout this module.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{same_field, Field, FieldElement, FieldExt};
use crate::matrix::Matrix;

/// Cross monomial `y_i * y_j` with `i <= k+1 < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair {
    pub i: usize,
    pub j: usize,
}

impl IndexPair {
    /// Validates the f-variable/g-variable split for parameter `k`.
    pub fn new(i: usize, j: usize, k: usize) -> Result<IndexPair> {
        if !(1..=k + 1).contains(&i) || !(k + 2..=2 * k + 2).contains(&j) {
            return Err(Error::IndexOutOfRange(format!(
                "monomial y{i}*y{j} is not a cross term for k = {k}"
            )));
        }
        Ok(IndexPair { i, j })
    }

    /// The coefficient sum `Y_m` this monomial belongs to.
    pub fn group(&self, k: usize) -> usize {
        self.i + self.j - k - 2
    }
}

/// `I_m` in increasing `(i, j)` order.
pub fn index_set(m: usize, k: usize) -> Result<Vec<IndexPair>> {
    if k < 1 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if !(1..=2 * k + 1).contains(&m) {
        return Err(Error::IndexOutOfRange(format!(
            "coefficient sum {m} outside 1..={}",
            2 * k + 1
        )));
    }
    let target = m + k + 2;
    Ok((1..=k + 1)
        .filter_map(|i| {
            let j = target.checked_sub(i)?;
            (k + 2..=2 * k + 2)
                .contains(&j)
                .then_some(IndexPair { i, j })
        })
        .collect())
}

/// Every cross monomial in `(i, j)` lexicographic order.
pub fn all_pairs(k: usize) -> Vec<IndexPair> {
    (1..=k + 1)
        .flat_map(|i| (k + 2..=2 * k + 2).map(move |j| IndexPair { i, j }))
        .collect()
}

/// The product `f * g` written as coefficient sums `Y_1..Y_{2k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicProduct {
    k: usize,
    groups: Vec<Vec<IndexPair>>,
}

impl SymbolicProduct {
    pub fn k(&self) -> usize {
        self.k
    }

    /// `groups()[m - 1]` is `I_m`.
    pub fn groups(&self) -> &[Vec<IndexPair>] {
        &self.groups
    }

    pub fn group(&self, m: usize) -> &[IndexPair] {
        &self.groups[m - 1]
    }

    /// The `(2k+1) x (k+1)^2` 0/1 matrix sending monomials (columns, in
    /// [`all_pairs`] order) to the coefficient sum containing them (rows).
    pub fn incidence_matrix(&self, ctx: &Field) -> Matrix {
        let k = self.k;
        let pairs = all_pairs(k);
        let mut a = Matrix::zeros(ctx, 2 * k + 1, pairs.len());
        for (col, pair) in pairs.iter().enumerate() {
            a[(pair.group(k) - 1, col)] = ctx.one();
        }
        a
    }
}

pub fn symbolic_product(k: usize) -> Result<SymbolicProduct> {
    let groups = (1..=2 * k + 1)
        .map(|m| index_set(m, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolicProduct { k, groups })
}

/// Sparse bilinear form in `y_1..y_{2(k+1)}` holding only nonzero
/// coefficients of cross monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadForm {
    k: usize,
    terms: BTreeMap<IndexPair, FieldElement>,
    ctx: Field,
}

impl QuadForm {
    pub fn zero(ctx: &Field, k: usize) -> QuadForm {
        QuadForm {
            k,
            terms: BTreeMap::new(),
            ctx: Arc::clone(ctx),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nvars(&self) -> usize {
        2 * (self.k + 1)
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&IndexPair, &FieldElement)> {
        self.terms.iter()
    }

    /// Coefficient of `y_i y_j`; zero when absent.
    pub fn coeff(&self, pair: IndexPair) -> FieldElement {
        self.terms
            .get(&pair)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    /// Sets a coefficient; zero removes the term.
    pub fn set(&mut self, pair: IndexPair, c: FieldElement) -> Result<()> {
        IndexPair::new(pair.i, pair.j, self.k)?;
        if !same_field(c.ctx(), &self.ctx) {
            return Err(Error::ContextMismatch);
        }
        if c.is_zero() {
            self.terms.remove(&pair);
        } else {
            self.terms.insert(pair, c);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &QuadForm) -> Result<QuadForm> {
        if !same_field(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        if self.k != other.k {
            return Err(Error::Shape(format!(
                "forms for k = {} and k = {}",
                self.k, other.k
            )));
        }
        let mut out = self.clone();
        for (&pair, c) in &other.terms {
            let sum = &out.coeff(pair) + c;
            out.set(pair, sum)?;
        }
        Ok(out)
    }

    /// Parses `i,j,c;i,j,c;...`; an empty line is the zero form.
    pub fn parse(ctx: &Field, k: usize, line: &str) -> Result<QuadForm> {
        let mut form = QuadForm::zero(ctx, k);
        let line = line.trim();
        if line.is_empty() {
            return Ok(form);
        }
        for term in line.split(';') {
            let parts: Vec<&str> = term.split(',').map(str::trim).collect();
            let [i, j, c] = parts.as_slice() else {
                return Err(Error::parse(format!("bad term {term:?}")));
            };
            let idx = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad variable index in {term:?}")))
            };
            let pair = IndexPair::new(idx(i)?, idx(j)?, k)?;
            let c = ctx.parse_element(c)?;
            if c.is_zero() {
                return Err(Error::parse(format!("zero coefficient stored in {term:?}")));
            }
            if form.terms.insert(pair, c).is_some() {
                return Err(Error::parse(format!("duplicate monomial y{}*y{}", pair.i, pair.j)));
            }
        }
        Ok(form)
    }
}

/// Terms as `i,j,c` joined by `;`, sorted by `(i, j)`.
impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (pair, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(";")?;
            }
            write!(f, "{},{},{}", pair.i, pair.j, c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadForm(k={}; {self})", self.k)
    }
}

/// `sum c_{ij} v_i v_j` with 1-based `i`, `j`.
pub fn eval_form(form: &QuadForm, v: &[FieldElement]) -> Result<FieldElement> {
    if v.len() != form.nvars() {
        return Err(Error::Shape(format!(
            "expected {} values, got {}",
            form.nvars(),
            v.len()
        )));
    }
    if v.iter().any(|e| !same_field(e.ctx(), &form.ctx)) {
        return Err(Error::ContextMismatch);
    }
    Ok(form.terms.iter().fold(form.ctx.zero(), |acc, (pair, c)| {
        &acc + &(&(c * &v[pair.i - 1]) * &v[pair.j - 1])
    }))
}

/// Public forms `p_i = sum_l T[i][l] * Y_l`: every monomial of `I_l` gets the
/// coefficient `T[i][l]` in form `i`.
pub fn compose_public(t: &Matrix, k: usize) -> Result<Vec<QuadForm>> {
    let dim = 2 * k + 1;
    if t.rows() != dim || t.cols() != dim {
        return Err(Error::Shape(format!(
            "transformation must be {dim}x{dim}, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    let product = symbolic_product(k)?;
    let ctx = t.ctx();
    Ok((0..dim)
        .map(|row| {
            let mut form = QuadForm::zero(ctx, k);
            for (col, group) in product.groups().iter().enumerate() {
                let c = &t[(row, col)];
                if c.is_zero() {
                    continue;
                }
                for &pair in group {
                    form.terms.insert(pair, c.clone());
                }
            }
            form
        })
        .collect())
}

/// Coefficients of `forms` as rows of a matrix whose columns follow
/// [`all_pairs`] order.
pub fn coefficient_matrix(forms: &[QuadForm], k: usize, ctx: &Field) -> Result<Matrix> {
    let pairs = all_pairs(k);
    let mut b = Matrix::zeros(ctx, forms.len(), pairs.len());
    for (row, form) in forms.iter().enumerate() {
        if form.k != k {
            return Err(Error::Shape(format!("form {} has k = {}", row + 1, form.k)));
        }
        if !same_field(&form.ctx, ctx) {
            return Err(Error::ContextMismatch);
        }
        for (col, pair) in pairs.iter().enumerate() {
            if let Some(c) = form.terms.get(pair) {
                b[(row, col)] = c.clone();
            }
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    fn pairs(v: &[(usize, usize)]) -> Vec<IndexPair> {
        v.iter().map(|&(i, j)| IndexPair { i, j }).collect()
    }

    #[test]
    fn index_set_examples() {
        assert_eq!(index_set(1, 7).unwrap(), pairs(&[(1, 9)]));
        assert_eq!(index_set(15, 7).unwrap(), pairs(&[(8, 16)]));
        assert_eq!(index_set(3, 1).unwrap(), pairs(&[(2, 4)]));
        assert_eq!(index_set(2, 1).unwrap(), pairs(&[(1, 4), (2, 3)]));
        assert!(index_set(0, 3).is_err());
        assert!(index_set(8, 3).is_err());
        assert!(index_set(1, 0).is_err());
    }

    #[test]
    fn symbolic_product_examples() {
        let k1 = symbolic_product(1).unwrap();
        assert_eq!(
            k1.groups(),
            &[pairs(&[(1, 3)]), pairs(&[(1, 4), (2, 3)]), pairs(&[(2, 4)])]
        );
        let k7 = symbolic_product(7).unwrap();
        assert_eq!(k7.groups().len(), 15);
        assert_eq!(k7.group(1).len(), 1);
        assert_eq!(k7.group(8).len(), 8);
        assert_eq!(k7.group(15).len(), 1);
        for k in 1..10 {
            let total: usize = symbolic_product(k).unwrap().groups().iter().map(Vec::len).sum();
            assert_eq!(total, (k + 1) * (k + 1));
        }
    }

    #[test]
    fn group_is_inverse_of_index_set() {
        for k in 1..8 {
            for m in 1..=2 * k + 1 {
                assert!(index_set(m, k).unwrap().iter().all(|p| p.group(k) == m));
            }
        }
    }

    #[test]
    fn incidence_matrix_has_full_row_rank() {
        let f2 = make_field(2, 1, None).unwrap();
        for k in 1..8 {
            let a = symbolic_product(k).unwrap().incidence_matrix(&f2);
            assert_eq!((a.rows(), a.cols()), (2 * k + 1, (k + 1) * (k + 1)));
            assert_eq!(a.rank(), 2 * k + 1);
        }
    }

    #[test]
    fn eval_form_examples() {
        let f2 = make_field(2, 1, None).unwrap();
        let mut form = QuadForm::zero(&f2, 1);
        form.set(IndexPair::new(1, 3, 1).unwrap(), f2.one()).unwrap();
        let zeros = vec![f2.zero(); 4];
        assert!(eval_form(&form, &zeros).unwrap().is_zero());
        let v: Vec<_> = [1, 0, 1, 0].iter().map(|&c| f2.from_int(c)).collect();
        assert!(eval_form(&form, &v).unwrap().is_one());
        assert!(eval_form(&form, &v[..3]).is_err());
    }

    #[test]
    fn compose_identity_reproduces_product() {
        let f2 = make_field(2, 1, None).unwrap();
        let forms = compose_public(&Matrix::identity(&f2, 3), 1).unwrap();
        let rendered: Vec<String> = forms.iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["1,3,1", "1,4,1;2,3,1", "2,4,1"]);
    }

    #[test]
    fn compose_zero_row_gives_zero_form() {
        let f3 = make_field(3, 1, None).unwrap();
        let mut t = Matrix::identity(&f3, 5);
        t[(2, 2)] = f3.zero();
        let forms = compose_public(&t, 2).unwrap();
        assert!(forms[2].is_zero());
        assert!(!forms[1].is_zero());
        assert!(compose_public(&Matrix::identity(&f3, 4), 2).is_err());
    }

    #[test]
    fn quadform_text_form() {
        let f4 = make_field(2, 2, None).unwrap();
        let mut form = QuadForm::zero(&f4, 2);
        form.set(IndexPair::new(3, 4, 2).unwrap(), f4.from_index(3)).unwrap();
        form.set(IndexPair::new(1, 6, 2).unwrap(), f4.from_index(2)).unwrap();
        let text = form.to_string();
        assert_eq!(text, "1,6,0:1;3,4,1:1");
        assert_eq!(QuadForm::parse(&f4, 2, &text).unwrap(), form);
        assert!(QuadForm::parse(&f4, 2, "").unwrap().is_zero());
        assert!(QuadForm::parse(&f4, 2, "1,2,1:0").is_err());
        assert!(QuadForm::parse(&f4, 2, "1,4,0:0").is_err());
        assert!(QuadForm::parse(&f4, 2, "1,4,1:0;1,4,1:1").is_err());
        assert!(QuadForm::parse(&f4, 2, "1,4").is_err());
    }

    #[test]
    fn set_rejects_non_cross_monomials() {
        let f2 = make_field(2, 1, None).unwrap();
        let mut form = QuadForm::zero(&f2, 2);
        assert!(form.set(IndexPair { i: 1, j: 2 }, f2.one()).is_err());
        assert!(form.set(IndexPair { i: 4, j: 5 }, f2.one()).is_err());
        form.set(IndexPair { i: 1, j: 4 }, f2.one()).unwrap();
        form.set(IndexPair { i: 1, j: 4 }, f2.zero()).unwrap();
        assert!(form.is_zero());
    }
}
