//! Weierstrass models over Q, their invariants, and the chord-tangent group
//! law on affine points with exact rational coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactq::{int, parse_rational, Rational};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassModel {
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
    pub a4: Rational,
    pub a6: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub b2: Rational,
    pub c4: Rational,
    pub c6: Rational,
    pub delta: Rational,
    /// `None` for singular models.
    pub j: Option<Rational>,
}

impl Invariants {
    pub fn j_invariant(&self) -> Result<&Rational> {
        self.j
            .as_ref()
            .ok_or_else(|| Error::domain("j-invariant of a singular model"))
    }
}

impl WeierstrassModel {
    /// Any coefficients, singular or not.
    pub fn from_coefficients(
        a1: Rational,
        a2: Rational,
        a3: Rational,
        a4: Rational,
        a6: Rational,
    ) -> Self {
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    /// An elliptic curve: rejects models with zero discriminant.
    pub fn new(a1: Rational, a2: Rational, a3: Rational, a4: Rational, a6: Rational) -> Result<Self> {
        let m = Self::from_coefficients(a1, a2, a3, a4, a6);
        if m.discriminant().is_zero() {
            return Err(Error::domain("singular Weierstrass model (discriminant 0)"));
        }
        Ok(m)
    }

    /// `(b2, c4, c6, c4^3, Delta)`.
    fn core_invariants(&self) -> (Rational, Rational, Rational, Rational, Rational) {
        if self.is_integral() {
            return self.integral_invariants();
        }
        let b2 = &self.a1 * &self.a1 + int(4) * &self.a2;
        let b4 = int(2) * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + int(4) * &self.a6;
        let c4 = &b2 * &b2 - int(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + int(36) * &b2 * &b4 - int(216) * &b6;
        let c4_cubed = &c4 * &c4 * &c4;
        let delta = (&c4_cubed - &c6 * &c6) / int(1728);
        (b2, c4, c6, c4_cubed, delta)
    }

    /// Same formulas in integer arithmetic, avoiding a gcd per operation.
    fn integral_invariants(&self) -> (Rational, Rational, Rational, Rational, Rational) {
        let [a1, a2, a3, a4, a6] = [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6].map(|a| a.to_integer());
        let n = |k: i64| BigInt::from(k);
        let b2 = &a1 * &a1 + n(4) * &a2;
        let b4 = n(2) * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + n(4) * &a6;
        let c4 = &b2 * &b2 - n(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + n(36) * &b2 * &b4 - n(216) * &b6;
        let c4_cubed = &c4 * &c4 * &c4;
        let delta = Rational::new(&c4_cubed - &c6 * &c6, n(1728));
        let q = Rational::from_integer;
        (q(b2), q(c4), q(c6), q(c4_cubed), delta)
    }

    pub fn invariants(&self) -> Invariants {
        let (b2, c4, c6, c4_cubed, delta) = self.core_invariants();
        let j = (!delta.is_zero()).then(|| &c4_cubed / &delta);
        Invariants { b2, c4, c6, delta, j }
    }

    pub fn discriminant(&self) -> Rational {
        self.core_invariants().4
    }

    pub fn is_integral(&self) -> bool {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
            .iter()
            .all(|a| a.is_integer())
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                let lhs = y * y + &self.a1 * x * y + &self.a3 * y;
                let rhs = x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6;
                lhs == rhs
            }
        }
    }

    fn check(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve(p.to_string()))
        }
    }

    pub fn negate(&self, p: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        Ok(self.neg_unchecked(p))
    }

    fn neg_unchecked(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: -y - &self.a1 * x - &self.a3,
            },
        }
    }

    /// Group sum. Both points must lie on the model.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 != x2 {
            (y2 - y1) / (x2 - x1)
        } else {
            // same x: either Q = -P or Q = P
            let denom = y1 + y2 + &self.a1 * x2 + &self.a3;
            if denom.is_zero() {
                return CurvePoint::Infinity;
            }
            (int(3) * x1 * x1 + int(2) * &self.a2 * x1 + &self.a4 - &self.a1 * y1) / denom
        };
        let intercept = y1 - &slope * x1;
        let x3 = &slope * &slope + &self.a1 * &slope - &self.a2 - x1 - x2;
        let y3 = -(&slope + &self.a1) * &x3 - intercept - &self.a3;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, p: &CurvePoint) -> Result<CurvePoint> {
        self.add(p, p)
    }

    /// `n * P` by double-and-add.
    pub fn multiply(&self, n: &BigInt, p: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        let base = if n.is_negative() { self.neg_unchecked(p) } else { p.clone() };
        let k = n.abs();
        let mut acc = CurvePoint::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.add_unchecked(&acc, &acc);
            if k.bit(i) {
                acc = self.add_unchecked(&acc, &base);
            }
        }
        Ok(acc)
    }

    pub fn multiply_small(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        self.multiply(&BigInt::from(n), p)
    }

    /// Smallest `n <= cap` with `nP = O`.
    ///
    /// On the curves E_t the torsion subgroup is Z/2 x Z/4 or Z/2 x Z/8
    /// (Mazur), so with the default cap of 8 an [`PointOrder::ExceedsCap`]
    /// result there means the point has infinite order. On other models it
    /// only means the order is larger than `cap`.
    pub fn point_order(&self, p: &CurvePoint, cap: u32) -> Result<PointOrder> {
        self.check(p)?;
        let mut acc = p.clone();
        for n in 1..=cap {
            if acc.is_infinity() {
                return Ok(PointOrder::Finite(n));
            }
            acc = self.add_unchecked(&acc, p);
        }
        Ok(PointOrder::ExceedsCap)
    }
}

/// The default cap for [`WeierstrassModel::point_order`] on E_t.
pub const TORSION_CAP: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointOrder {
    Finite(u32),
    ExceedsCap,
}

impl PointOrder {
    pub fn is_finite(self) -> bool {
        matches!(self, PointOrder::Finite(_))
    }
}

impl fmt::Display for PointOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointOrder::Finite(n) => write!(f, "{n}"),
            PointOrder::ExceedsCap => f.write_str("exceeds cap"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&Rational> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&Rational> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            CurvePoint::Infinity => None,
        }
    }

    /// Parses `"O"` or `"(x,y)"` with rational coordinates.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "O" {
            return Ok(CurvePoint::Infinity);
        }
        let inner = text
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected \"O\" or \"(x,y)\", got {text:?}")))?;
        let (x, y) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("missing comma in {text:?}")))?;
        Ok(CurvePoint::affine(parse_rational(x)?, parse_rational(y)?))
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => f.write_str("O"),
            CurvePoint::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

fn is_degenerate_t(t: &Rational) -> bool {
    t.is_zero() || t.abs().is_one()
}

pub(crate) fn require_nondegenerate(t: &Rational) -> Result<()> {
    if is_degenerate_t(t) {
        Err(Error::DegenerateParameter(t.clone()))
    } else {
        Ok(())
    }
}

/// `E_t : y^2 = x(x+1)(x+t^2) = x^3 + (1+t^2)x^2 + t^2 x`.
pub fn curve_et(t: &Rational) -> Result<WeierstrassModel> {
    require_nondegenerate(t)?;
    let t2 = t * t;
    Ok(WeierstrassModel::from_coefficients(
        Rational::zero(),
        Rational::one() + &t2,
        Rational::zero(),
        t2,
        Rational::zero(),
    ))
}

/// `E_{u,v} : y^2 = x(x+u^2)(x+v^2)`, the integral model of E_{u/v}.
pub fn curve_euv(u: &BigInt, v: &BigInt) -> Result<WeierstrassModel> {
    if u.is_zero() || v.is_zero() {
        return Err(Error::domain("E_{u,v} needs uv != 0"));
    }
    if !u.gcd(v).is_one() {
        return Err(Error::domain(format!("E_{{u,v}} needs gcd(u, v) = 1, got ({u}, {v})")));
    }
    if u.abs() == v.abs() {
        return Err(Error::domain("E_{u,v} needs |u| != |v|"));
    }
    let u2 = u * u;
    let v2 = v * v;
    Ok(WeierstrassModel::from_coefficients(
        Rational::zero(),
        Rational::from_integer(&u2 + &v2),
        Rational::zero(),
        Rational::from_integer(u2 * v2),
        Rational::zero(),
    ))
}

/// `E'_{w,v} : y^2 + vxy = x^3 + 4w^2 x^2 + w^2 v^2 x`, the model of E_t at
/// `t = 4w/v` used when `ord_2(uv) >= 2`.
pub fn curve_ewv(w: &BigInt, v: &BigInt) -> Result<WeierstrassModel> {
    if v.is_even() {
        return Err(Error::domain(format!("E'_{{w,v}} needs v odd, got {v}")));
    }
    if w.is_zero() {
        return Err(Error::domain("E'_{w,v} needs w != 0"));
    }
    if !(w * BigInt::from(4)).gcd(v).is_one() {
        return Err(Error::domain(format!("E'_{{w,v}} needs gcd(4w, v) = 1, got ({w}, {v})")));
    }
    let w2 = w * w;
    Ok(WeierstrassModel::from_coefficients(
        Rational::from_integer(v.clone()),
        Rational::from_integer(BigInt::from(4) * &w2),
        Rational::zero(),
        Rational::from_integer(w2 * v * v),
        Rational::zero(),
    ))
}

/// `(x, y) -> (v^2 x, v^3 y)`: carries points of E_{u/v} to E_{u,v}.
pub fn to_integral_model(p: &CurvePoint, v: &BigInt) -> CurvePoint {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => {
            let v2 = Rational::from_integer(v * v);
            let v3 = Rational::from_integer(v * v * v);
            CurvePoint::affine(x * &v2, y * v3)
        }
    }
}

/// Inverse of [`to_integral_model`].
pub fn from_integral_model(p: &CurvePoint, v: &BigInt) -> CurvePoint {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => {
            let v2 = Rational::from_integer(v * v);
            let v3 = Rational::from_integer(v * v * v);
            CurvePoint::affine(x / &v2, y / v3)
        }
    }
}

/// The image A_t of the generic Mordell-Weil group, in the order
/// `O, (0,0), (-1,0), (-t^2,0), (-t, -t(t-1)), (-t, t(t-1)), (t, -t(t+1)), (t, t(t+1))`.
pub fn torsion_a_t(t: &Rational) -> Result<Vec<CurvePoint>> {
    require_nondegenerate(t)?;
    let one = Rational::one();
    let lower = t * (t - &one);
    let upper = t * (t + &one);
    Ok(vec![
        CurvePoint::Infinity,
        CurvePoint::affine(Rational::zero(), Rational::zero()),
        CurvePoint::affine(-one, Rational::zero()),
        CurvePoint::affine(-(t * t), Rational::zero()),
        CurvePoint::affine(-t.clone(), -lower.clone()),
        CurvePoint::affine(-t.clone(), lower),
        CurvePoint::affine(t.clone(), -upper.clone()),
        CurvePoint::affine(t.clone(), upper),
    ])
}

pub fn in_a_t(p: &CurvePoint, t: &Rational) -> Result<bool> {
    Ok(torsion_a_t(t)?.contains(p))
}

/// On a model `y^2 = (x - e1)(x - e2)(x - e3)` with rational roots, a point
/// `(x0, y0)` is twice a rational point iff `x0 - e_i` is a rational square
/// for every `i`.
pub fn is_halvable(p: &CurvePoint, roots: &[Rational; 3]) -> bool {
    match p {
        CurvePoint::Infinity => true,
        CurvePoint::Affine { x, .. } => roots.iter().all(|e| crate::exactq::is_square(&(x - e))),
    }
}

/// The 2-torsion x-coordinates `{0, -1, -t^2}` of E_t.
pub fn two_torsion_roots(t: &Rational) -> [Rational; 3] {
    [Rational::zero(), -Rational::one(), -(t * t)]
}
