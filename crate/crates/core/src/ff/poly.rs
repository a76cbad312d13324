//! Dense univariate polynomials over a finite field.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Field, FieldElement, FieldError};

/// A polynomial with coefficients stored lowest-degree first and no trailing
/// zeros; the zero polynomial has an empty coefficient list and degree `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match i {
                0 => terms.push(format!("({})", c)),
                1 => terms.push(format!("({})*x", c)),
                _ => terms.push(format!("({})*x^{}", c, i)),
            }
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Display for Polynomial {
    /// Serialized form: comma-separated coefficients, lowest degree first,
    /// one entry per coefficient (`0` for the zero polynomial). Coefficients
    /// of extension fields are themselves comma lists, so this form is only
    /// unambiguous over prime fields, which is where the file formats use it.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl Polynomial {
    pub fn zero(field: &Field) -> Polynomial {
        Polynomial {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Polynomial {
        Polynomial::constant(field.one())
    }

    pub fn x(field: &Field) -> Polynomial {
        Polynomial::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn constant(c: FieldElement) -> Polynomial {
        let field = c.field().clone();
        Polynomial::from_coeffs(&field, vec![c])
    }

    /// `c * x^d`.
    pub fn monomial(c: FieldElement, d: usize) -> Polynomial {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); d];
        coeffs.push(c);
        Polynomial::from_coeffs(&field, coeffs)
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<FieldElement>) -> Polynomial {
        let mut p = Polynomial {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    /// Coefficients given as integers, reduced into the field.
    pub fn from_u64s(field: &Field, coeffs: &[u64]) -> Polynomial {
        Polynomial::from_coeffs(field, coeffs.iter().map(|&c| field.from_u64(c)).collect())
    }

    /// Coefficients given as raw lowest-first `BigUint`s over the prime field.
    pub fn from_biguints(field: &Field, coeffs: &[BigUint]) -> Polynomial {
        Polynomial::from_coeffs(
            field,
            coeffs.iter().map(|c| field.from_biguint(c.clone())).collect(),
        )
    }

    pub fn parse(field: &Field, s: &str) -> Result<Polynomial, FieldError> {
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            coeffs.push(field.parse_element(part.trim())?);
        }
        Ok(Polynomial::from_coeffs(field, coeffs))
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `None` for the zero polynomial, otherwise the degree.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Polynomial::from_coeffs(&self.field, out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub(&other.coeff(i)));
        }
        Polynomial::from_coeffs(&self.field, out)
    }

    pub fn negate(&self) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.negate()).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Polynomial::from_coeffs(&self.field, out)
    }

    pub fn mul_scalar(&self, c: &FieldElement) -> Polynomial {
        Polynomial::from_coeffs(
            &self.field,
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    /// Quotient and remainder; fails only on a zero divisor.
    pub fn divrem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), FieldError> {
        if divisor.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let db = divisor.degree().unwrap();
        if self.is_zero() || self.degree().unwrap() < db {
            return Ok((Polynomial::zero(&self.field), self.clone()));
        }
        let lead_inv = divisor.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); rem.len() - db];
        let mut dr = rem.len() - 1;
        loop {
            if dr >= db {
                let coef = rem[dr].mul(&lead_inv);
                if !coef.is_zero() {
                    let shift = dr - db;
                    quot[shift] = coef.clone();
                    for (j, b) in divisor.coeffs.iter().enumerate() {
                        rem[shift + j] = rem[shift + j].sub(&coef.mul(b));
                    }
                }
            }
            if dr == 0 {
                break;
            }
            dr -= 1;
        }
        Ok((
            Polynomial::from_coeffs(&self.field, quot),
            Polynomial::from_coeffs(&self.field, rem),
        ))
    }

    pub fn rem(&self, modulus: &Polynomial) -> Polynomial {
        self.divrem(modulus).expect("non-zero modulus").1
    }

    /// Exact division; panics if the remainder is non-zero.
    pub fn div_exact(&self, divisor: &Polynomial) -> Polynomial {
        let (q, r) = self.divrem(divisor).expect("non-zero divisor");
        assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g` and `g` monic.
    pub fn xgcd(&self, other: &Polynomial) -> (Polynomial, Polynomial, Polynomial) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Polynomial::one(&self.field);
        let mut s1 = Polynomial::zero(&self.field);
        let mut t0 = Polynomial::zero(&self.field);
        let mut t1 = Polynomial::one(&self.field);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("non-zero divisor");
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if let Some(lead) = r0.leading() {
            if !lead.is_one() {
                let inv = lead.inv().expect("non-zero leading coefficient");
                return (r0.mul_scalar(&inv), s0.mul_scalar(&inv), t0.mul_scalar(&inv));
            }
        }
        (r0, s0, t0)
    }

    pub fn make_monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(lead) if lead.is_one() => self.clone(),
            Some(lead) => self.mul_scalar(&lead.inv().expect("non-zero leading coefficient")),
        }
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = x.field().zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// `self^exp mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::one(&self.field);
        if exp.is_zero() {
            return acc;
        }
        let base = self.rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus);
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero(&self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.field.from_u64(i as u64)))
            .collect();
        Polynomial::from_coeffs(&self.field, coeffs)
    }

    /// Deterministic total order key: (degree, coefficient indices from the
    /// leading coefficient down). Used to sort factor lists and root sets.
    pub fn sort_key(&self) -> (usize, Vec<BigUint>) {
        let deg = self.coeffs.len();
        let key = self.coeffs.iter().rev().map(|c| c.index()).collect();
        (deg, key)
    }
}

macro_rules! impl_poly_binop {
    ($trait_:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait_ for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                Polynomial::$inner(self, rhs)
            }
        }
    };
}

impl_poly_binop!(Add, add, add);
impl_poly_binop!(Sub, sub, sub);
impl_poly_binop!(Mul, mul, mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.negate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::prime_u64(5).unwrap()
    }

    #[test]
    fn divrem_and_gcd() {
        let f = f5();
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = Polynomial::from_u64s(&f, &[4, 0, 1]);
        let b = Polynomial::from_u64s(&f, &[4, 1]); // x - 1
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, Polynomial::from_u64s(&f, &[1, 1]));
        let g = a.gcd(&b);
        assert_eq!(g, b.make_monic());
    }

    #[test]
    fn xgcd_bezout() {
        let f = f5();
        let a = Polynomial::from_u64s(&f, &[1, 2, 3, 1]);
        let b = Polynomial::from_u64s(&f, &[2, 0, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn eval_horner() {
        let f = f5();
        let p = Polynomial::from_u64s(&f, &[1, 0, 3]); // 3x^2 + 1
        assert_eq!(p.eval(&f.from_u64(2)), f.from_u64(13 % 5));
    }

    #[test]
    fn zero_degree_sentinel() {
        let f = f5();
        let z = Polynomial::zero(&f);
        assert_eq!(z.degree(), None);
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
    }
}
