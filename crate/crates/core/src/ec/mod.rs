//! Elliptic curves in short Weierstrass form `y^2 = x^3 + ax + b` over finite
//! fields of characteristic at least 5: group law, scalar multiplication,
//! j-invariants, division polynomials, torsion, point counting (naive, BSGS,
//! Schoof), supersingularity, and modular-polynomial isogeny certificates.

mod divpoly;
mod modular;
mod schoof;

pub use divpoly::{BiPoly, DivisionPolynomials};
pub use modular::{modular_poly_eval, modular_poly_in_y};

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::ff::{centered_residue, isqrt, Field, FieldElement, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EcError {
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("curve is singular: 4a^3 + 27b^2 = 0")]
    SingularCurve,
    #[error("characteristic must be at least 5")]
    SmallCharacteristic,
    #[error("division polynomial index 0 is not defined")]
    UnsupportedIndex,
    #[error("torsion index shares a factor with the characteristic")]
    BadTorsionIndex,
    #[error("field too large for the requested counting method")]
    FieldTooLarge,
    #[error("ell must be an odd prime not dividing q")]
    BadPrime,
    #[error("modular polynomials are only stored for ell = 2 and 3")]
    UnsupportedLevel,
    #[error("supersingularity test expects a curve over F_p or F_p^2")]
    UnsupportedField,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Point-counting strategy for [`EllipticCurve::order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    /// Full x-scan with a precomputed square table; needs `q <= 10^6`.
    Naive,
    /// Baby-step/giant-step order finding inside the Hasse interval;
    /// needs `q <= 10^12`.
    Bsgs,
}

/// A point on a short Weierstrass curve: affine coordinates or the point at
/// infinity, which is the group identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ECPoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl ECPoint {
    pub fn affine(x: FieldElement, y: FieldElement) -> ECPoint {
        ECPoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }

    pub fn xy(&self) -> Option<(&FieldElement, &FieldElement)> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine { x, y } => Some((x, y)),
        }
    }

    /// `-(x, y) = (x, -y)`; infinity is its own negative.
    pub fn negate(&self) -> ECPoint {
        match self {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { x, y } => ECPoint::Affine {
                x: x.clone(),
                y: y.negate(),
            },
        }
    }

    /// Deterministic ordering key (infinity sorts first).
    pub fn sort_key(&self) -> (u8, BigUint, BigUint) {
        match self {
            ECPoint::Infinity => (0, BigUint::zero(), BigUint::zero()),
            ECPoint::Affine { x, y } => (1, x.index(), y.index()),
        }
    }

    pub fn parse(field: &Field, s: &str) -> Result<ECPoint, EcError> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ECPoint::Infinity);
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| FieldError::ParseError(s.to_string()))?;
        let parts: Vec<&str> = inner.split(',').collect();
        let k = field.degree();
        if parts.len() != 2 * k {
            return Err(FieldError::ParseError(s.to_string()).into());
        }
        let x = field.parse_element(&parts[..k].join(","))?;
        let y = field.parse_element(&parts[k..].join(","))?;
        Ok(ECPoint::affine(x, y))
    }
}

impl fmt::Display for ECPoint {
    /// `inf`, or `(<x>,<y>)` with each coordinate in its field serialization.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ECPoint::Infinity => write!(f, "inf"),
            ECPoint::Affine { x, y } => write!(f, "({},{})", x, y),
        }
    }
}

impl fmt::Debug for ECPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `y^2 = x^3 + ax + b` with non-zero discriminant over a field of
/// characteristic at least 5.
#[derive(Clone, PartialEq, Eq)]
pub struct EllipticCurve {
    field: Field,
    a: FieldElement,
    b: FieldElement,
}

impl fmt::Debug for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EllipticCurve(y^2 = x^3 + {}x + {} over {:?})",
            self.a, self.b, self.field
        )
    }
}

impl EllipticCurve {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<EllipticCurve, EcError> {
        let field = a.field().clone();
        assert!(a.field() == b.field(), "coefficients from different fields");
        if *field.characteristic() < BigUint::from(5u32) {
            return Err(EcError::SmallCharacteristic);
        }
        let curve = EllipticCurve { field, a, b };
        if curve.discriminant().is_zero() {
            return Err(EcError::SingularCurve);
        }
        Ok(curve)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    /// `4a^3 + 27b^2`.
    pub fn discriminant(&self) -> FieldElement {
        let four = self.field.from_u64(4);
        let twenty_seven = self.field.from_u64(27);
        let a3 = self.a.square().mul(&self.a);
        let b2 = self.b.square();
        four.mul(&a3).add(&twenty_seven.mul(&b2))
    }

    /// `j = 1728 * 4a^3 / (4a^3 + 27b^2)`.
    pub fn j_invariant(&self) -> FieldElement {
        let four = self.field.from_u64(4);
        let a3 = self.a.square().mul(&self.a);
        let num = self.field.from_u64(1728).mul(&four).mul(&a3);
        num.div(&self.discriminant())
            .expect("discriminant is non-zero by construction")
    }

    /// Right-hand side `x^3 + ax + b`.
    pub fn rhs(&self, x: &FieldElement) -> FieldElement {
        x.square().add(&self.a).mul(x).add(&self.b)
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine { x, y } => {
                x.field() == &self.field && y.square() == self.rhs(x)
            }
        }
    }

    fn check_on_curve(&self, p: &ECPoint) -> Result<(), EcError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(EcError::PointNotOnCurve)
        }
    }

    /// Group law by the chord-and-tangent rule.
    pub fn add(&self, p: &ECPoint, q: &ECPoint) -> Result<ECPoint, EcError> {
        self.check_on_curve(p)?;
        self.check_on_curve(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub(crate) fn add_unchecked(&self, p: &ECPoint, q: &ECPoint) -> ECPoint {
        let (x1, y1) = match p.xy() {
            None => return q.clone(),
            Some(v) => v,
        };
        let (x2, y2) = match q.xy() {
            None => return p.clone(),
            Some(v) => v,
        };
        let slope = if x1 == x2 {
            if *y1 == y2.negate() {
                return ECPoint::Infinity;
            }
            // tangent: (3x^2 + a) / 2y
            let num = self.field.from_u64(3).mul(&x1.square()).add(&self.a);
            let den = self.field.from_u64(2).mul(y1);
            num.div(&den).expect("y != 0 since P != -P")
        } else {
            y2.sub(y1).div(&x2.sub(x1)).expect("x1 != x2")
        };
        let x3 = slope.square().sub(x1).sub(x2);
        let y3 = slope.mul(&x1.sub(&x3)).sub(y1);
        ECPoint::Affine { x: x3, y: y3 }
    }

    /// `[n]P` by double-and-add; negative `n` negates the point first.
    pub fn scalar_mul(&self, n: &BigInt, p: &ECPoint) -> Result<ECPoint, EcError> {
        self.check_on_curve(p)?;
        Ok(self.scalar_mul_unchecked(n, p))
    }

    pub(crate) fn scalar_mul_unchecked(&self, n: &BigInt, p: &ECPoint) -> ECPoint {
        let (mag, base) = if n.is_negative() {
            (n.magnitude().clone(), p.negate())
        } else {
            (n.magnitude().clone(), p.clone())
        };
        let mut acc = ECPoint::Infinity;
        for i in (0..mag.bits()).rev() {
            acc = self.add_unchecked(&acc, &acc);
            if mag.bit(i) {
                acc = self.add_unchecked(&acc, &base);
            }
        }
        acc
    }

    pub fn scalar_mul_u64(&self, n: u64, p: &ECPoint) -> Result<ECPoint, EcError> {
        self.scalar_mul(&BigInt::from(n), p)
    }

    /// All rational points, including infinity (naive enumeration; the field
    /// cardinality must stay within the naive budget).
    pub fn points(&self) -> Result<Vec<ECPoint>, EcError> {
        let q = self.field.order();
        if q > BigUint::from(1_000_000u64) {
            return Err(EcError::FieldTooLarge);
        }
        let squares = self.square_roots_table();
        let mut out = vec![ECPoint::Infinity];
        for x in self.field.elements() {
            let rhs = self.rhs(&x);
            if rhs.is_zero() {
                out.push(ECPoint::affine(x, self.field.zero()));
            } else if let Some(y) = squares.get(&rhs) {
                out.push(ECPoint::affine(x.clone(), y.clone()));
                out.push(ECPoint::affine(x, y.negate()));
            }
        }
        Ok(out)
    }

    /// Map from each non-zero square to one of its roots.
    fn square_roots_table(&self) -> std::collections::HashMap<FieldElement, FieldElement> {
        let mut table = std::collections::HashMap::new();
        for y in self.field.elements() {
            if y.is_zero() {
                continue;
            }
            table.entry(y.square()).or_insert(y);
        }
        table
    }

    /// `#E(F_q)` by the requested method. Both methods agree wherever both
    /// apply; the result always lies in the Hasse interval.
    pub fn order(&self, method: CountMethod) -> Result<BigUint, EcError> {
        let q = self.field.order();
        match method {
            CountMethod::Naive => {
                if q > BigUint::from(1_000_000u64) {
                    return Err(EcError::FieldTooLarge);
                }
                let mut squares: HashSet<FieldElement> = HashSet::new();
                for y in self.field.elements() {
                    squares.insert(y.square());
                }
                let mut count = BigUint::one(); // infinity
                for x in self.field.elements() {
                    let rhs = self.rhs(&x);
                    if rhs.is_zero() {
                        count += 1u32;
                    } else if squares.contains(&rhs) {
                        count += 2u32;
                    }
                }
                Ok(count)
            }
            CountMethod::Bsgs => {
                if q > BigUint::from(1_000_000_000_000u64) {
                    return Err(EcError::FieldTooLarge);
                }
                Ok(self.bsgs_order())
            }
        }
    }

    /// Group order via point-order lattice refinement: find each sampled
    /// point's order with a BSGS search over the Hasse interval, accumulate
    /// the lcm, and stop once a unique multiple lies in the interval. Falls
    /// back to the quadratic twist when the group exponent is too small to
    /// pin the order from one side.
    fn bsgs_order(&self) -> BigUint {
        let q = self.field.order();
        let two_sqrt = isqrt(&(&q * 4u32));
        let lo = &q + 1u32 - &two_sqrt;
        let hi = &q + 1u32 + &two_sqrt;
        let mut rng = ChaCha12Rng::seed_from_u64(0xec0de);
        let mut exponent = BigUint::one();
        for _attempt in 0..64 {
            let point = self.random_point(&mut rng);
            let m = self.multiple_in_interval(&point, &lo, &hi);
            let ord = self.reduce_to_order(&point, m);
            exponent = exponent.lcm(&ord);
            // unique multiple of the exponent in [lo, hi]?
            let first = (&lo + &exponent - 1u32) / &exponent * &exponent;
            if first <= hi && &first + &exponent > hi {
                return first;
            }
        }
        // Constrain through the quadratic twist: N + N' = 2q + 2.
        let twist = self.quadratic_twist(&mut rng);
        let mut twist_exp = BigUint::one();
        loop {
            let point = twist.random_point(&mut rng);
            let m = twist.multiple_in_interval(&point, &lo, &hi);
            let ord = twist.reduce_to_order(&point, m);
            twist_exp = twist_exp.lcm(&ord);
            let target = &q * 2u32 + 2u32;
            // N = target - N', N' a multiple of twist_exp in [lo, hi];
            // N must also be a multiple of exponent.
            let mut candidates = Vec::new();
            let mut m = (&lo + &twist_exp - 1u32) / &twist_exp * &twist_exp;
            while m <= hi {
                let n = &target - &m;
                if (&n % &exponent).is_zero() && n >= lo && n <= hi {
                    candidates.push(n);
                }
                m += &twist_exp;
            }
            candidates.dedup();
            if candidates.len() == 1 {
                return candidates.pop().unwrap();
            }
        }
    }

    /// A uniformly random affine point (rejection sampling on x).
    pub fn random_point<R: rand::Rng>(&self, rng: &mut R) -> ECPoint {
        loop {
            let x = self.field.random_element(rng);
            let rhs = self.rhs(&x);
            if let Ok(y) = rhs.sqrt() {
                // flip the sign half the time so both roots are reachable
                let y = if rng.gen::<bool>() { y.negate() } else { y };
                return ECPoint::affine(x, y);
            }
        }
    }

    /// Some multiple of ord(P) in `[lo, hi]` found baby-step/giant-step.
    fn multiple_in_interval(&self, p: &ECPoint, lo: &BigUint, hi: &BigUint) -> BigUint {
        let width = hi - lo + 1u32;
        let stride = isqrt(&width) + 1u32;
        let stride_u = stride.to_u64().expect("desk-scale stride") as usize;
        // baby table: [j](-P) for j in [0, stride)
        let mut table = std::collections::HashMap::new();
        let neg = p.negate();
        let mut acc = ECPoint::Infinity;
        for j in 0..stride_u {
            table.entry(acc.clone()).or_insert(j);
            acc = self.add_unchecked(&acc, &neg);
        }
        // giant steps: T = [lo + i*stride]P; match T = [j](-P) means
        // [lo + i*stride + j]P = O
        let step = self.scalar_mul_unchecked(&BigInt::from(stride.clone()), p);
        let mut t = self.scalar_mul_unchecked(&BigInt::from(lo.clone()), p);
        let mut i = BigUint::zero();
        loop {
            if let Some(&j) = table.get(&t) {
                return lo + &i * &stride + BigUint::from(j as u64);
            }
            t = self.add_unchecked(&t, &step);
            i += 1u32;
            debug_assert!(&i * &stride <= width + &stride, "no annihilator found");
        }
    }

    /// Exact order of `p` given some annihilating multiple `m`.
    fn reduce_to_order(&self, p: &ECPoint, m: BigUint) -> BigUint {
        let mut ord = m.clone();
        for (prime, _) in trial_factor(&m) {
            loop {
                if (&ord % &prime).is_zero() {
                    let cand = &ord / &prime;
                    if self
                        .scalar_mul_unchecked(&BigInt::from(cand.clone()), p)
                        .is_infinity()
                    {
                        ord = cand;
                        continue;
                    }
                }
                break;
            }
        }
        ord
    }

    /// A quadratic twist `y^2 = x^3 + ac^2 x + bc^3` for a non-square `c`.
    pub fn quadratic_twist<R: rand::Rng>(&self, rng: &mut R) -> EllipticCurve {
        let c = loop {
            let c = self.field.random_element(rng);
            if !c.is_zero() && !c.is_square() {
                break c;
            }
        };
        let c2 = c.square();
        let c3 = c2.mul(&c);
        EllipticCurve::new(self.a.mul(&c2), self.b.mul(&c3))
            .expect("twist of a nonsingular curve is nonsingular")
    }

    /// Division polynomials computed up to index `max_m` (inclusive).
    pub fn division_polynomials(&self, max_m: usize) -> Result<DivisionPolynomials, EcError> {
        DivisionPolynomials::new(self, max_m)
    }

    /// All rational `m`-torsion points over the curve's own field. The
    /// result is a subgroup whose order divides `m^2`; the full `(Z/m)^2`
    /// structure only appears once the field is extended far enough.
    pub fn torsion_points(&self, m: u64) -> Result<Vec<ECPoint>, EcError> {
        if m == 0 || (BigUint::from(m) % self.field.characteristic()).is_zero() {
            return Err(EcError::BadTorsionIndex);
        }
        let mut points = vec![ECPoint::Infinity];
        if m == 1 {
            return Ok(points);
        }
        let table = self.division_polynomials(m as usize)?;
        // candidate x-coordinates: roots of psi_m (including, for even m,
        // the 2-torsion cubic folded into its y-part)
        let psi = table.psi(m as i64);
        let mut candidates: Vec<FieldElement> = Vec::new();
        for part in [psi.x_part(), psi.y_part()] {
            if part.is_zero() {
                continue;
            }
            for (root, _) in crate::ff::roots(part, 0)? {
                candidates.push(root);
            }
        }
        if m % 2 == 0 {
            // roots of x^3 + ax + b (y = 0)
            let cubic = self.rhs_poly();
            for (root, _) in crate::ff::roots(&cubic, 0)? {
                candidates.push(root);
            }
        }
        candidates.sort_by_key(|c| c.index());
        candidates.dedup();
        let n = BigInt::from(m);
        for x in candidates {
            let rhs = self.rhs(&x);
            let y = match rhs.sqrt() {
                Ok(y) => y,
                Err(_) => continue, // x-coordinate lifts only over an extension
            };
            for y in [y.clone(), y.negate()] {
                let p = ECPoint::affine(x.clone(), y);
                if self.contains(&p) && self.scalar_mul_unchecked(&n, &p).is_infinity() {
                    points.push(p);
                }
            }
        }
        points.sort_by_key(|p| p.sort_key());
        points.dedup();
        Ok(points)
    }

    /// `x^3 + ax + b` as a polynomial.
    pub fn rhs_poly(&self) -> crate::ff::Polynomial {
        crate::ff::Polynomial::from_coeffs(
            &self.field,
            vec![
                self.b.clone(),
                self.a.clone(),
                self.field.zero(),
                self.field.one(),
            ],
        )
    }

    /// Trace of Frobenius modulo an odd prime `ell` not dividing `q`,
    /// computed from the action of Frobenius on `E[ell]` inside
    /// `F_q[x, y] / (psi_ell(x), y^2 - x^3 - ax - b)`.
    pub fn schoof_trace_mod_ell(&self, ell: u64) -> Result<u64, EcError> {
        schoof::trace_mod_ell(self, ell)
    }

    /// Full Schoof point count: CRT the traces over odd primes until the
    /// product exceeds `4*sqrt(q)`, then pin the trace in the Hasse interval.
    pub fn schoof_order(&self) -> Result<BigUint, EcError> {
        let q = self.field.order();
        let goal = isqrt(&(&q * 16u32)) + 1u32; // > 4 sqrt(q)
        let mut modulus = BigUint::one();
        let mut t = BigUint::zero();
        let mut ell = 3u64;
        while modulus <= goal {
            let ell_big = BigUint::from(ell);
            if crate::ff::is_prime(&ell_big) && !(&q % &ell_big).is_zero() {
                let t_ell = self.schoof_trace_mod_ell(ell)?;
                // incremental CRT
                let m_inv = crate::ff::mod_inverse(&(&modulus % &ell_big), &ell_big)
                    .expect("moduli coprime");
                let l_inv =
                    crate::ff::mod_inverse(&(&ell_big % &modulus), &modulus).unwrap_or_default();
                let new_mod = &modulus * &ell_big;
                t = (&m_inv * &modulus * t_ell + &l_inv * &ell_big * &t) % &new_mod;
                modulus = new_mod;
            }
            ell += 2;
        }
        let trace = centered_residue(&t, &modulus);
        let n = BigInt::from(&q + 1u32) - trace;
        Ok(n.to_biguint().expect("order is positive"))
    }

    /// Whether the curve is supersingular. Over `F_p` this means trace 0;
    /// over `F_{p^2}` it means `#E = (p-1)^2` or `(p+1)^2`.
    pub fn is_supersingular(&self) -> Result<bool, EcError> {
        let p = self.field.characteristic().clone();
        let q = self.field.order();
        let method = if q <= BigUint::from(1_000_000u64) {
            CountMethod::Naive
        } else {
            CountMethod::Bsgs
        };
        match self.field.degree() {
            1 => {
                let n = self.order(method)?;
                let t = BigInt::from(&q + 1u32) - BigInt::from(n);
                Ok((t % BigInt::from(p)).is_zero())
            }
            2 => {
                let n = self.order(method)?;
                let nm = (&p - 1u32) * (&p - 1u32);
                let np = (&p + 1u32) * (&p + 1u32);
                Ok(n == nm || n == np)
            }
            _ => Err(EcError::UnsupportedField),
        }
    }
}

/// Trial-division factorization (desk-scale integers).
pub fn trial_factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    let mut d = BigUint::from(2u32);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let mut e = 0u32;
            while (&n % &d).is_zero() {
                n /= &d;
                e += 1;
            }
            out.push((d.clone(), e));
        }
        d += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

/// Parse a curve file in the `key=value` format (`p=`, optional `ext=`,
/// `type=elliptic`, `a=`, `b=`).
pub fn parse_curve_file(text: &str) -> Result<EllipticCurve, EcError> {
    let kv = crate::files::parse_key_values(text);
    let field = crate::files::field_from_kv(&kv).map_err(FieldError::from)?;
    let ty = kv.get("type").map(String::as_str).unwrap_or("elliptic");
    if ty != "elliptic" {
        return Err(FieldError::ParseError(format!("not an elliptic curve file: type={}", ty)).into());
    }
    let a = field.parse_element(
        kv.get("a")
            .ok_or_else(|| FieldError::ParseError("missing a=".into()))?,
    )?;
    let b = field.parse_element(
        kv.get("b")
            .ok_or_else(|| FieldError::ParseError("missing b=".into()))?,
    )?;
    EllipticCurve::new(a, b)
}
