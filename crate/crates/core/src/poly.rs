//! Homogeneous polynomials in `x, y`, linear forms, arrangements of lines and
//! derivations `P dx + Q dy`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};
use crate::lattice::Multiplicity;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("linear form with both coefficients zero")]
    ZeroForm,
    #[error("the zero polynomial is divisible by every power of a form")]
    ZeroPolynomial,
    #[error("forms {0} and {1} define the same line")]
    ProportionalForms(usize, usize),
    #[error("an arrangement needs at least one line")]
    EmptyArrangement,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Homogeneous polynomial `sum c_i x^i y^(d-i)`, stored densely. The empty
/// coefficient vector is the zero polynomial, which has no degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    coeffs: Vec<Scalar>,
}

impl HomogPoly {
    pub fn zero() -> Self {
        HomogPoly { coeffs: Vec::new() }
    }

    /// `coeffs[i]` is the coefficient of `x^i y^(d-i)`. An all-zero vector
    /// gives the zero polynomial.
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        if coeffs.iter().all(Scalar::is_zero) {
            HomogPoly::zero()
        } else {
            HomogPoly { coeffs }
        }
    }

    pub fn constant(c: Scalar) -> Self {
        HomogPoly::from_coeffs(vec![c])
    }

    /// `c x^i y^(degree - i)`.
    pub fn monomial(c: Scalar, x_power: usize, degree: usize) -> Self {
        assert!(x_power <= degree);
        let mut coeffs = vec![c.zero_like(); degree + 1];
        coeffs[x_power] = c;
        HomogPoly::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        if self.is_zero() || other.is_zero() {
            return HomogPoly::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        HomogPoly::from_coeffs(out)
    }

    pub fn pow(&self, k: u32) -> HomogPoly {
        match self.coeffs.first() {
            None if k == 0 => panic!("0^0 has no homogeneous degree"),
            None => HomogPoly::zero(),
            Some(c) => (0..k).fold(HomogPoly::constant(c.one_like()), |acc, _| acc.mul(self)),
        }
    }

    pub fn scale(&self, c: &Scalar) -> HomogPoly {
        HomogPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> HomogPoly {
        HomogPoly {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn checked_add(&self, other: &HomogPoly) -> Result<HomogPoly, PolyError> {
        match (self.degree(), other.degree()) {
            (None, _) => Ok(other.clone()),
            (_, None) => Ok(self.clone()),
            (Some(d), Some(e)) if d != e => Err(PolyError::DegreeMismatch(d, e)),
            _ => Ok(HomogPoly::from_coeffs(
                self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            )),
        }
    }

    pub fn checked_sub(&self, other: &HomogPoly) -> Result<HomogPoly, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Option<Scalar> {
        let first = self.coeffs.first()?;
        let d = self.coeffs.len() - 1;
        let mut acc = first.zero_like();
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut term = c.clone();
            for _ in 0..i {
                term = &term * x;
            }
            for _ in 0..d - i {
                term = &term * y;
            }
            acc = &acc + &term;
        }
        Some(acc)
    }

    /// Exact quotient by a linear form, or `None` if the form does not divide.
    pub fn divide_exact(&self, form: &LinearForm) -> Option<HomogPoly> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        if form.a.is_zero() {
            // form = y: the x^d y^0 coefficient must vanish
            if !self.coeffs[d].is_zero() {
                return None;
            }
            return Some(HomogPoly::from_coeffs(self.coeffs[..d].to_vec()));
        }
        // form = x + b y: c_i = q_(i-1) + b q_i, solved from the top
        let b = &form.b;
        let mut q = vec![self.coeffs[0].zero_like(); d];
        q[d - 1] = self.coeffs[d].clone();
        for i in (1..d).rev() {
            q[i - 1] = &self.coeffs[i] - &(b * &q[i]);
        }
        let remainder = &self.coeffs[0] - &(b * &q[0]);
        remainder.is_zero().then(|| HomogPoly::from_coeffs(q))
    }

    /// Largest `m` with `form^m` dividing `self`.
    pub fn multiplicity_of(&self, form: &LinearForm) -> Result<usize, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut m = 0;
        let mut f = self.clone();
        while let Some(q) = f.divide_exact(form) {
            m += 1;
            f = q;
        }
        Ok(m)
    }

    /// True if `other = c * self` for a nonzero scalar `c`.
    pub fn is_proportional(&self, other: &HomogPoly) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        let pivot = self.coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
        if other.coeffs[pivot].is_zero() {
            return false;
        }
        let ratio = other.coeffs[pivot]
            .checked_div(&self.coeffs[pivot])
            .expect("pivot is nonzero");
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| &(a * &ratio) == b)
    }

    /// Scaled so the highest-x-power nonzero coefficient is 1.
    pub fn monic(&self) -> HomogPoly {
        match self.coeffs.iter().rev().find(|c| !c.is_zero()) {
            None => HomogPoly::zero(),
            Some(lead) => self.scale(&lead.invert().expect("nonzero")),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(Scalar::to_json).collect())
    }

    pub fn from_json(field: &FieldSpec, v: &Value) -> Result<HomogPoly, PolyError> {
        let items = v
            .as_array()
            .ok_or_else(|| FieldError::Parse(v.to_string()))?;
        let coeffs = items
            .iter()
            .map(|c| field.parse_scalar(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HomogPoly::from_coeffs(coeffs))
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, x_power: usize, y_power: usize) -> fmt::Result {
    let mut parts = Vec::new();
    match x_power {
        0 => {}
        1 => parts.push("x".to_string()),
        k => parts.push(format!("x^{k}")),
    }
    match y_power {
        0 => {}
        1 => parts.push("y".to_string()),
        k => parts.push(format!("y^{k}")),
    }
    write!(f, "{}", parts.join("*"))
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.coeffs.len() - 1;
        let mut first = true;
        for i in (0..=d).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let constant = i == 0 && d == 0;
            let negative = c.signum() == Some(Ordering::Less);
            let compound = matches!(c, Scalar::Quadratic(x) if !x.a.is_zero() && !x.b.is_zero());
            let magnitude = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            first = false;
            if constant {
                write!(f, "{magnitude}")?;
                continue;
            }
            if !magnitude.is_one() {
                if compound {
                    write!(f, "({magnitude})*")?;
                } else {
                    write!(f, "{magnitude}*")?;
                }
            }
            write_monomial(f, i, d - i)?;
        }
        Ok(())
    }
}

/// `a x + b y`, normalized so the first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    a: Scalar,
    b: Scalar,
}

impl LinearForm {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self, PolyError> {
        if a.is_zero() && b.is_zero() {
            return Err(PolyError::ZeroForm);
        }
        let lead = if a.is_zero() { &b } else { &a };
        let inv = lead.invert()?;
        Ok(LinearForm {
            a: &a * &inv,
            b: &b * &inv,
        })
    }

    pub fn x(field: &FieldSpec) -> Self {
        LinearForm {
            a: field.one(),
            b: field.zero(),
        }
    }

    pub fn y(field: &FieldSpec) -> Self {
        LinearForm {
            a: field.zero(),
            b: field.one(),
        }
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn to_poly(&self) -> HomogPoly {
        HomogPoly::from_coeffs(vec![self.b.clone(), self.a.clone()])
    }

    pub fn is_proportional(&self, other: &LinearForm) -> bool {
        (&(&self.a * &other.b) - &(&self.b * &other.a)).is_zero()
    }

    /// The fixed complementary form: `y` unless this form is `y`, then `x`.
    pub fn complement(&self) -> LinearForm {
        let field = self.a.field();
        if self.a.is_zero() {
            LinearForm::x(&field)
        } else {
            LinearForm::y(&field)
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// A central line arrangement in the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    field: FieldSpec,
    forms: Vec<LinearForm>,
    names: Option<Vec<String>>,
}

impl Arrangement {
    pub fn new(field: FieldSpec, forms: Vec<LinearForm>, names: Option<Vec<String>>) -> Result<Self, PolyError> {
        if forms.is_empty() {
            return Err(PolyError::EmptyArrangement);
        }
        let forms = forms
            .into_iter()
            .map(|f| LinearForm::new(field.coerce(&f.a)?, field.coerce(&f.b)?))
            .collect::<Result<Vec<_>, PolyError>>()?;
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                if forms[i].is_proportional(&forms[j]) {
                    return Err(PolyError::ProportionalForms(i, j));
                }
            }
        }
        if let Some(names) = &names {
            if names.len() != forms.len() {
                return Err(PolyError::NameCount {
                    expected: forms.len(),
                    got: names.len(),
                });
            }
        }
        Ok(Arrangement { field, forms, names })
    }

    /// Builds an arrangement from integer coefficient pairs over `Q`.
    pub fn from_int_pairs(pairs: &[(i64, i64)]) -> Result<Self, PolyError> {
        let forms = pairs
            .iter()
            .map(|&(a, b)| LinearForm::new(Scalar::int(a), Scalar::int(b)))
            .collect::<Result<Vec<_>, _>>()?;
        Arrangement::new(FieldSpec::Rational, forms, None)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, i: usize) -> String {
        match &self.names {
            Some(n) => n[i].clone(),
            None => self.forms[i].to_string(),
        }
    }

    /// Canonical JSON of field and normalized forms; names are not part of the
    /// identity.
    pub fn canonical_json(&self) -> Value {
        json!({
            "field": self.field.to_json(),
            "forms": self.forms.iter().map(|f| json!([f.a.to_json(), f.b.to_json()])).collect::<Vec<_>>(),
        })
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn canonical_hash(&self) -> String {
        let text = serde_json::to_string(&self.canonical_json()).expect("json");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// The same lines with coefficients reduced modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Arrangement, PolyError> {
        let target = FieldSpec::prime(p)?;
        let forms = self
            .forms
            .iter()
            .map(|f| LinearForm::new(self.field.reduce_mod(&f.a, p)?, self.field.reduce_mod(&f.b, p)?))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Arrangement::new(target, forms, self.names.clone())
    }
}

/// `prod_H alpha_H^(mu_H)`, of degree `|mu|`.
pub fn defining_polynomial(arr: &Arrangement, mu: &Multiplicity) -> HomogPoly {
    assert_eq!(arr.len(), mu.len(), "multiplicity length");
    let one = HomogPoly::constant(arr.field.one());
    arr.forms
        .iter()
        .zip(mu.entries())
        .fold(one, |acc, (form, &m)| acc.mul(&form.to_poly().pow(m)))
}

/// `prod_H alpha_H^(e_H)` for an exponent vector.
pub fn form_product(arr: &Arrangement, exponents: &[u32]) -> HomogPoly {
    assert_eq!(arr.len(), exponents.len());
    let one = HomogPoly::constant(arr.field.one());
    arr.forms
        .iter()
        .zip(exponents)
        .fold(one, |acc, (form, &m)| acc.mul(&form.to_poly().pow(m)))
}

/// `P dx + Q dy` with `P`, `Q` homogeneous of a common degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    p: HomogPoly,
    q: HomogPoly,
}

impl Derivation {
    pub fn new(p: HomogPoly, q: HomogPoly) -> Result<Self, PolyError> {
        if let (Some(d), Some(e)) = (p.degree(), q.degree()) {
            if d != e {
                return Err(PolyError::DegreeMismatch(d, e));
            }
        }
        Ok(Derivation { p, q })
    }

    pub fn zero() -> Self {
        Derivation {
            p: HomogPoly::zero(),
            q: HomogPoly::zero(),
        }
    }

    /// `x dx + y dy`.
    pub fn euler(field: &FieldSpec) -> Self {
        Derivation {
            p: LinearForm::x(field).to_poly(),
            q: LinearForm::y(field).to_poly(),
        }
    }

    /// Reads the unknown vector `(P c_0..c_d, Q c_0..c_d)` of a degree-`d`
    /// derivation.
    pub fn from_unknowns(degree: usize, values: &[Scalar]) -> Self {
        assert_eq!(values.len(), 2 * (degree + 1));
        Derivation {
            p: HomogPoly::from_coeffs(values[..=degree].to_vec()),
            q: HomogPoly::from_coeffs(values[degree + 1..].to_vec()),
        }
    }

    pub fn p(&self) -> &HomogPoly {
        &self.p
    }

    pub fn q(&self) -> &HomogPoly {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.p.degree().or(self.q.degree())
    }

    /// `theta(alpha) = a P + b Q`.
    pub fn apply(&self, form: &LinearForm) -> HomogPoly {
        self.p
            .scale(&form.a)
            .checked_add(&self.q.scale(&form.b))
            .expect("P and Q share a degree")
    }

    pub fn mul_poly(&self, f: &HomogPoly) -> Derivation {
        Derivation {
            p: self.p.mul(f),
            q: self.q.mul(f),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation {
            p: self.p.scale(c),
            q: self.q.scale(c),
        }
    }

    pub fn checked_add(&self, other: &Derivation) -> Result<Derivation, PolyError> {
        if let (Some(d), Some(e)) = (self.degree(), other.degree()) {
            if d != e {
                return Err(PolyError::DegreeMismatch(d, e));
            }
        }
        Derivation::new(self.p.checked_add(&other.p)?, self.q.checked_add(&other.q)?)
    }

    /// Coefficients in canonical order: `P` from the highest x-power down,
    /// then `Q` likewise.
    fn canonical_order(&self) -> impl Iterator<Item = &Scalar> {
        self.p.coeffs().iter().rev().chain(self.q.coeffs().iter().rev())
    }

    /// Scaled so the first nonzero coefficient in canonical order is 1.
    pub fn canonical(&self) -> Derivation {
        match self.canonical_order().find(|c| !c.is_zero()) {
            None => Derivation::zero(),
            Some(lead) => self.scale(&lead.invert().expect("nonzero")),
        }
    }

    /// Equality up to a nonzero scalar.
    pub fn is_proportional(&self, other: &Derivation) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.canonical() == other.canonical()
    }

    pub fn to_json(&self) -> Value {
        json!({"degree": self.degree(), "p": self.p.to_json(), "q": self.q.to_json()})
    }

    pub fn from_json(field: &FieldSpec, v: &Value) -> Result<Derivation, PolyError> {
        let get = |k: &str| v.get(k).ok_or_else(|| PolyError::Field(FieldError::Parse(v.to_string())));
        Derivation::new(HomogPoly::from_json(field, get("p")?)?, HomogPoly::from_json(field, get("q")?)?)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "({})*dx", self.p),
            (true, false) => write!(f, "({})*dy", self.q),
            (false, false) => write!(f, "({})*dx + ({})*dy", self.p, self.q),
        }
    }
}

/// `P1 Q2 - P2 Q1`; nonzero exactly when the two derivations are independent
/// over the polynomial ring.
pub fn saito_determinant(first: &Derivation, second: &Derivation) -> HomogPoly {
    first
        .p
        .mul(&second.q)
        .checked_sub(&second.p.mul(&first.q))
        .expect("products share a degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> HomogPoly {
        LinearForm::x(&FieldSpec::Rational).to_poly()
    }
    fn y() -> HomogPoly {
        LinearForm::y(&FieldSpec::Rational).to_poly()
    }
    fn form(a: i64, b: i64) -> LinearForm {
        LinearForm::new(Scalar::int(a), Scalar::int(b)).unwrap()
    }
    fn add(f: &HomogPoly, g: &HomogPoly) -> HomogPoly {
        f.checked_add(g).unwrap()
    }
    fn sub(f: &HomogPoly, g: &HomogPoly) -> HomogPoly {
        f.checked_sub(g).unwrap()
    }
    fn cube(f: &HomogPoly) -> HomogPoly {
        f.pow(3)
    }

    #[test]
    fn poly_mul_examples() {
        let xy_sum = add(&x(), &y());
        let xy_diff = sub(&x(), &y());
        assert_eq!(xy_sum.mul(&xy_diff), sub(&x().pow(2), &y().pow(2)));
        assert!(x().mul(&HomogPoly::zero()).is_zero());
        let sq = xy_sum.pow(2);
        assert_eq!(sq.coeffs(), &[Scalar::int(1), Scalar::int(2), Scalar::int(1)]);
        assert_eq!(sq.to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn apply_derivation_examples() {
        let e = Derivation::euler(&FieldSpec::Rational);
        assert_eq!(e.apply(&form(1, 1)), form(1, 1).to_poly());
        let t = Derivation::new(x().pow(2), HomogPoly::zero()).unwrap();
        assert!(t.apply(&form(0, 1)).is_zero());
        let t = Derivation::new(cube(&x()), cube(&y())).unwrap();
        assert_eq!(t.apply(&form(1, -1)), sub(&cube(&x()), &cube(&y())));
    }

    #[test]
    fn multiplicity_examples() {
        let f = sub(&cube(&x()), &cube(&y()));
        assert_eq!(f.multiplicity_of(&form(1, -1)), Ok(1));
        assert_eq!(form(1, 1).to_poly().pow(2).multiplicity_of(&form(1, 1)), Ok(2));
        let g = x().mul(&y()).mul(&form(1, 1).to_poly()).mul(&form(1, -1).to_poly());
        assert_eq!(g.multiplicity_of(&form(0, 1)), Ok(1));
        assert_eq!(HomogPoly::zero().multiplicity_of(&form(0, 1)), Err(PolyError::ZeroPolynomial));
        assert_eq!(HomogPoly::constant(Scalar::int(3)).multiplicity_of(&form(1, 0)), Ok(0));
    }

    #[test]
    fn saito_determinant_examples() {
        let e = Derivation::euler(&FieldSpec::Rational);
        let t = Derivation::new(cube(&x()), cube(&y())).unwrap();
        let det = saito_determinant(&e, &t);
        let expected = x()
            .mul(&y())
            .mul(&form(1, -1).to_poly())
            .mul(&form(1, 1).to_poly())
            .neg();
        assert_eq!(det, expected);
        assert!(saito_determinant(&t, &t).is_zero());
        let a = Derivation::new(x().pow(2), HomogPoly::zero()).unwrap();
        let b = Derivation::new(HomogPoly::zero(), cube(&y())).unwrap();
        assert_eq!(saito_determinant(&a, &b), x().pow(2).mul(&cube(&y())));
    }

    #[test]
    fn defining_polynomial_examples() {
        let boolean = Arrangement::from_int_pairs(&[(1, 0), (0, 1)]).unwrap();
        let mu = Multiplicity::new(vec![2, 3]);
        assert_eq!(defining_polynomial(&boolean, &mu), x().pow(2).mul(&cube(&y())));
        let b2 = Arrangement::from_int_pairs(&[(1, 0), (0, 1), (1, 1), (1, -1)]).unwrap();
        let q = defining_polynomial(&b2, &Multiplicity::new(vec![1, 1, 1, 1]));
        assert_eq!(q, x().mul(&y()).mul(&form(1, 1).to_poly()).mul(&form(1, -1).to_poly()));
        let one = defining_polynomial(&b2, &Multiplicity::zero(4));
        assert_eq!(one, HomogPoly::constant(Scalar::int(1)));
    }

    #[test]
    fn linear_forms_normalize() {
        let f = form(2, 4);
        assert_eq!(f.a(), &Scalar::int(1));
        assert_eq!(f.b(), &Scalar::int(2));
        let g = form(0, -3);
        assert_eq!(g.b(), &Scalar::int(1));
        assert_eq!(LinearForm::new(Scalar::int(0), Scalar::int(0)), Err(PolyError::ZeroForm));
        assert!(matches!(
            Arrangement::from_int_pairs(&[(1, 0), (2, 0)]),
            Err(PolyError::ProportionalForms(0, 1))
        ));
    }

    #[test]
    fn derivation_canonical_scaling() {
        let t = Derivation::new(x().scale(&Scalar::int(-3)), y().scale(&Scalar::int(6))).unwrap();
        let c = t.canonical();
        assert_eq!(c.p(), &x());
        assert_eq!(c.q(), &y().scale(&Scalar::int(-2)));
        assert!(t.is_proportional(&c));
        let only_q = Derivation::new(HomogPoly::zero(), y().scale(&Scalar::int(5))).unwrap();
        assert_eq!(only_q.canonical().q(), &y());
    }

    #[test]
    fn divide_exact_rejects_remainders() {
        let f = add(&x().pow(2), &y().pow(2));
        assert!(f.divide_exact(&form(1, 1)).is_none());
        let g = f.mul(&form(1, 1).to_poly());
        assert_eq!(g.divide_exact(&form(1, 1)), Some(f));
    }
}
