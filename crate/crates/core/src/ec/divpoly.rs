//! Division polynomials and the `[m]` multiplication formulas.
//!
//! Bivariate polynomials on the curve are kept reduced by `y^2 = x^3 + ax + b`
//! and therefore have the shape `p(x) + y*q(x)`. The table uses the
//! normalization `psi_2 = 2y` (so `psi_4` carries a factor `4y`), which is the
//! one under which `[m]P = (phi_m / psi_m^2, omega_m / psi_m^3)` matches
//! m-fold addition; the whole table is validated against that oracle in the
//! tests.

use num_bigint::BigInt;

use super::{ECPoint, EcError, EllipticCurve};
use crate::ff::{FieldElement, Polynomial};

/// `x_part(x) + y * y_part(x)` on a fixed curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPoly {
    x_part: Polynomial,
    y_part: Polynomial,
}

impl BiPoly {
    pub fn from_x(p: Polynomial) -> BiPoly {
        let zero = Polynomial::zero(p.field());
        BiPoly {
            x_part: p,
            y_part: zero,
        }
    }

    pub fn from_y(q: Polynomial) -> BiPoly {
        let zero = Polynomial::zero(q.field());
        BiPoly {
            x_part: zero,
            y_part: q,
        }
    }

    pub fn x_part(&self) -> &Polynomial {
        &self.x_part
    }

    pub fn y_part(&self) -> &Polynomial {
        &self.y_part
    }

    pub fn is_zero(&self) -> bool {
        self.x_part.is_zero() && self.y_part.is_zero()
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        BiPoly {
            x_part: self.x_part.add(&other.x_part),
            y_part: self.y_part.add(&other.y_part),
        }
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        BiPoly {
            x_part: self.x_part.sub(&other.x_part),
            y_part: self.y_part.sub(&other.y_part),
        }
    }

    /// Product reduced by `y^2 = f(x)`:
    /// `(p1 + y q1)(p2 + y q2) = p1 p2 + f q1 q2 + y (p1 q2 + p2 q1)`.
    pub fn mul(&self, other: &BiPoly, f: &Polynomial) -> BiPoly {
        let xx = self.x_part.mul(&other.x_part);
        let yy = self.y_part.mul(&other.y_part).mul(f);
        let cross = self
            .x_part
            .mul(&other.y_part)
            .add(&self.y_part.mul(&other.x_part));
        BiPoly {
            x_part: xx.add(&yy),
            y_part: cross,
        }
    }

    pub fn mul_scalar(&self, c: &FieldElement) -> BiPoly {
        BiPoly {
            x_part: self.x_part.mul_scalar(c),
            y_part: self.y_part.mul_scalar(c),
        }
    }

    /// Exact division by `y`: `(p + y q) / y = q + y * (p / f)`, which is a
    /// polynomial exactly when `f | p`.
    pub fn div_y(&self, f: &Polynomial) -> BiPoly {
        let new_y = if self.x_part.is_zero() {
            Polynomial::zero(self.x_part.field())
        } else {
            self.x_part.div_exact(f)
        };
        BiPoly {
            x_part: self.y_part.clone(),
            y_part: new_y,
        }
    }

    pub fn eval(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.x_part.eval(x).add(&y.mul(&self.y_part.eval(x)))
    }
}

/// The table `psi_0..psi_{M+2}` together with `phi_m` and `omega_m` for
/// `m <= M`, frozen after construction.
pub struct DivisionPolynomials {
    curve: EllipticCurve,
    max_m: usize,
    psi: Vec<BiPoly>,
    phi: Vec<BiPoly>,
    omega: Vec<BiPoly>,
}

impl DivisionPolynomials {
    pub fn new(curve: &EllipticCurve, max_m: usize) -> Result<DivisionPolynomials, EcError> {
        if max_m == 0 {
            return Err(EcError::UnsupportedIndex);
        }
        let field = curve.field();
        let f = curve.rhs_poly();
        let a = curve.a();
        let b = curve.b();
        let upto = max_m + 2;

        let mut psi: Vec<BiPoly> = Vec::with_capacity(upto + 1);
        psi.push(BiPoly::from_x(Polynomial::zero(field))); // psi_0 = 0
        psi.push(BiPoly::from_x(Polynomial::one(field))); // psi_1 = 1
        psi.push(BiPoly::from_y(Polynomial::constant(field.from_u64(2)))); // psi_2 = 2y
        {
            // psi_3 = 3x^4 + 6a x^2 + 12b x - a^2
            let coeffs = vec![
                a.square().negate(),
                field.from_u64(12).mul(b),
                field.from_u64(6).mul(a),
                field.zero(),
                field.from_u64(3),
            ];
            psi.push(BiPoly::from_x(Polynomial::from_coeffs(field, coeffs)));
        }
        {
            // psi_4 = 4y (x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3)
            let a2 = a.square();
            let a3 = a2.mul(a);
            let b2 = b.square();
            let coeffs = vec![
                field.from_u64(8).mul(&b2).add(&a3).negate(),
                field.from_u64(4).mul(a).mul(b).negate(),
                field.from_u64(5).mul(&a2).negate(),
                field.from_u64(20).mul(b),
                field.from_u64(5).mul(a),
                field.zero(),
                field.one(),
            ];
            let inner = Polynomial::from_coeffs(field, coeffs);
            psi.push(BiPoly::from_y(inner.mul_scalar(&field.from_u64(4))));
        }

        let half = field.from_u64(2).inv().expect("char > 2");
        for m in 5..=upto {
            let r = m / 2;
            let next = if m % 2 == 1 {
                // psi_{2r+1} = psi_{r+2} psi_r^3 - psi_{r-1} psi_{r+1}^3
                let left = psi[r + 2]
                    .mul(&psi[r], &f)
                    .mul(&psi[r], &f)
                    .mul(&psi[r], &f);
                let right = psi[r - 1]
                    .mul(&psi[r + 1], &f)
                    .mul(&psi[r + 1], &f)
                    .mul(&psi[r + 1], &f);
                left.sub(&right)
            } else {
                // psi_2 psi_{2r} = (psi_{r+2} psi_{r-1}^2 - psi_{r-2} psi_{r+1}^2) psi_r
                let left = psi[r + 2].mul(&psi[r - 1], &f).mul(&psi[r - 1], &f);
                let right = psi[r - 2].mul(&psi[r + 1], &f).mul(&psi[r + 1], &f);
                left.sub(&right)
                    .mul(&psi[r], &f)
                    .div_y(&f)
                    .mul_scalar(&half)
            };
            psi.push(next);
        }

        // psi_{-1} = -1, needed by omega_1
        let psi_neg1 = BiPoly::from_x(Polynomial::constant(field.one().negate()));
        let psi_at = |i: i64| -> &BiPoly {
            if i == -1 {
                &psi_neg1
            } else {
                &psi[i as usize]
            }
        };

        let x_poly = BiPoly::from_x(Polynomial::x(field));
        let quarter = field.from_u64(4).inv().expect("char > 2");
        let mut phi: Vec<BiPoly> = vec![BiPoly::from_x(Polynomial::zero(field))];
        let mut omega: Vec<BiPoly> = vec![BiPoly::from_x(Polynomial::zero(field))];
        for m in 1..=max_m {
            let m = m as i64;
            // phi_m = x psi_m^2 - psi_{m+1} psi_{m-1}
            let p = x_poly
                .mul(psi_at(m), &f)
                .mul(psi_at(m), &f)
                .sub(&psi_at(m + 1).mul(psi_at(m - 1), &f));
            phi.push(p);
            // omega_m = (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2) / 4y
            let num = psi_at(m + 2)
                .mul(psi_at(m - 1), &f)
                .mul(psi_at(m - 1), &f)
                .sub(&psi_at(m - 2).mul(psi_at(m + 1), &f).mul(psi_at(m + 1), &f));
            omega.push(num.div_y(&f).mul_scalar(&quarter));
        }

        Ok(DivisionPolynomials {
            curve: curve.clone(),
            max_m,
            psi,
            phi,
            omega,
        })
    }

    pub fn max_index(&self) -> usize {
        self.max_m
    }

    /// `psi_i` for `-1 <= i <= max + 2`.
    pub fn psi(&self, i: i64) -> BiPoly {
        if i == -1 {
            return BiPoly::from_x(Polynomial::constant(self.curve.field().one().negate()));
        }
        self.psi[i as usize].clone()
    }

    pub fn phi(&self, m: usize) -> &BiPoly {
        &self.phi[m]
    }

    pub fn omega(&self, m: usize) -> &BiPoly {
        &self.omega[m]
    }

    /// `[m]P` from the `phi/psi/omega` formulas. `psi_m(P) = 0` identifies
    /// the m-torsion, where the result is the point at infinity.
    pub fn multiplication_map(&self, m: i64, p: &ECPoint) -> Result<ECPoint, EcError> {
        if m == 0 {
            return Ok(ECPoint::Infinity);
        }
        if m < 0 {
            return Ok(self.multiplication_map(-m, p)?.negate());
        }
        let m = m as usize;
        assert!(m <= self.max_m, "table computed only up to {}", self.max_m);
        if !self.curve.contains(p) {
            return Err(EcError::PointNotOnCurve);
        }
        let (x, y) = match p.xy() {
            None => return Ok(ECPoint::Infinity),
            Some(v) => v,
        };
        let psi_v = self.psi[m].eval(x, y);
        if psi_v.is_zero() {
            return Ok(ECPoint::Infinity);
        }
        let psi2 = psi_v.square();
        let psi3 = psi2.mul(&psi_v);
        let xr = self.phi[m].eval(x, y).div(&psi2).expect("psi != 0");
        let yr = self.omega[m].eval(x, y).div(&psi3).expect("psi != 0");
        Ok(ECPoint::affine(xr, yr))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Field;
    use num_traits::Zero;

    fn curve(p: u64, a: u64, b: u64) -> EllipticCurve {
        let f = Field::prime_u64(p).unwrap();
        EllipticCurve::new(f.from_u64(a), f.from_u64(b)).unwrap()
    }

    #[test]
    fn psi_1_and_psi_3_shapes() {
        let e = curve(11, 1, 0);
        let t = e.division_polynomials(4).unwrap();
        assert!(t.psi(1).x_part().is_one());
        // psi_3 = 3x^4 + 6a x^2 + 12b x - a^2 with a=1, b=0:
        // 3x^4 + 6x^2 - 1
        let f = e.field();
        let expect = Polynomial::from_coeffs(
            f,
            vec![
                f.one().negate(),
                f.zero(),
                f.from_u64(6),
                f.zero(),
                f.from_u64(3),
            ],
        );
        assert_eq!(t.psi(3).x_part(), &expect);
        assert!(t.psi(3).y_part().is_zero());
    }

    #[test]
    fn psi3_roots_are_three_torsion_x_coordinates() {
        let e = curve(11, 1, 0);
        let t = e.division_polynomials(3).unwrap();
        let psi3 = t.psi(3).x_part().clone();
        // brute-force 3-torsion scan over all candidate affine points
        let f = e.field();
        let mut torsion_x = std::collections::BTreeSet::new();
        for xi in 0..11u64 {
            for yi in 0..11u64 {
                let p = ECPoint::affine(f.from_u64(xi), f.from_u64(yi));
                if e.contains(&p) && e.scalar_mul_u64(3, &p).unwrap().is_infinity() {
                    torsion_x.insert(xi);
                }
            }
        }
        for xi in torsion_x {
            assert!(psi3.eval(&f.from_u64(xi)).is_zero());
        }
    }

    #[test]
    fn multiplication_map_matches_repeated_addition() {
        let e = curve(1009, 13, 17);
        let t = e.division_polynomials(12).unwrap();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for _ in 0..25 {
            let p = e.random_point(&mut rng);
            let mut acc = ECPoint::Infinity;
            for m in 1..=12i64 {
                acc = e.add(&acc, &p).unwrap();
                let formula = t.multiplication_map(m, &p).unwrap();
                assert_eq!(formula, acc, "m = {} P = {}", m, p);
            }
        }
    }

    #[test]
    fn recurrences_hold_symbolically() {
        let e = curve(101, 35, 7);
        let t = e.division_polynomials(12).unwrap();
        let f = e.rhs_poly();
        // odd recurrence for m >= 2: psi_{2m+1} = psi_{m+2} psi_m^3 - psi_{m-1} psi_{m+1}^3
        for m in 2i64..=5 {
            let lhs = t.psi(2 * m + 1);
            let rhs = t
                .psi(m + 2)
                .mul(&t.psi(m), &f)
                .mul(&t.psi(m), &f)
                .mul(&t.psi(m), &f)
                .sub(
                    &t.psi(m - 1)
                        .mul(&t.psi(m + 1), &f)
                        .mul(&t.psi(m + 1), &f)
                        .mul(&t.psi(m + 1), &f),
                );
            assert_eq!(lhs, rhs, "odd recurrence at m = {}", m);
        }
        // even recurrence for m >= 3: psi_2 psi_{2m} = (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2) psi_m
        for m in 3i64..=6 {
            let lhs = t.psi(2).mul(&t.psi(2 * m), &f);
            let rhs = t
                .psi(m + 2)
                .mul(&t.psi(m - 1), &f)
                .mul(&t.psi(m - 1), &f)
                .sub(&t.psi(m - 2).mul(&t.psi(m + 1), &f).mul(&t.psi(m + 1), &f))
                .mul(&t.psi(m), &f);
            assert_eq!(lhs, rhs, "even recurrence at m = {}", m);
        }
    }

    #[test]
    fn index_zero_rejected() {
        let e = curve(11, 1, 0);
        assert!(matches!(
            e.division_polynomials(0),
            Err(EcError::UnsupportedIndex)
        ));
    }

    #[test]
    fn torsion_count_over_extension_is_m_squared() {
        // E: y^2 = x^3 + x over F_11 has full 2-torsion only over F_{11^2}
        let f2 = Field::extension_u64(11, 2).unwrap();
        let e2 = EllipticCurve::new(f2.from_u64(1), f2.from_u64(0)).unwrap();
        let tor = e2.torsion_points(2).unwrap();
        assert_eq!(tor.len(), 4);
        // and 3-torsion over a field where psi_3 splits completely
        let tor3 = e2.torsion_points(3).unwrap();
        assert_eq!(tor3.len() % 3, 0);
        assert!(tor3.len() == 3 || tor3.len() == 9);
    }
}
