//! Pairs of rational right triangles with a common leg: solutions of
//!
//! ```text
//! 1 + a^2 = b^2,   t^2 + a^2 = c^2,   a, b, c > 0,
//! ```
//!
//! and their dictionary with the points of E_t outside A_t. The map
//! `phi = phi2 . phi1` factors through the curve
//! `C_t : (w^2 - r^2)(2s) = t(w^2 - s^2)(2r)` in the projective plane.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::curve::{
    curve_et, in_a_t, is_halvable, torsion_a_t, two_torsion_roots, CurvePoint, PointOrder,
    WeierstrassModel, TORSION_CAP,
};
use crate::error::{Error, Result};
use crate::exactq::{int, is_square, sqrt_exact, Rational, Sign};
use crate::rootnumber::root_number_closed;
use crate::search::{rank_witness, SearchBound, WitnessSearch};

/// A solution `(a, b, c)` for the parameter `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriangleTriple {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub t: Rational,
}

impl TriangleTriple {
    pub fn new(a: Rational, b: Rational, c: Rational, t: Rational) -> Result<Self> {
        let positive = [&a, &b, &c, &t].iter().all(|x| x.is_positive());
        let one = Rational::one();
        if !positive || &one + &a * &a != &b * &b || &t * &t + &a * &a != &c * &c {
            return Err(Error::domain(format!("({a}, {b}, {c}) is not a solution for t = {t}")));
        }
        Ok(TriangleTriple { a, b, c, t })
    }

    /// `a * (1, a, b) = (a, t, c)`: the two triangles are similar.
    pub fn is_similar_pair(&self) -> bool {
        &self.a * &self.a == self.t && &self.a * &self.b == self.c
    }
}

impl fmt::Display for TriangleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.b, self.c)
    }
}

/// A point `(r : s : w)` of the projective plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConicPoint {
    pub r: Rational,
    pub s: Rational,
    pub w: Rational,
}

impl ConicPoint {
    pub fn new(r: Rational, s: Rational, w: Rational) -> Result<Self> {
        if r.is_zero() && s.is_zero() && w.is_zero() {
            return Err(Error::domain("(0 : 0 : 0) is not a projective point"));
        }
        Ok(ConicPoint { r, s, w })
    }

    pub fn affine(r: Rational, s: Rational) -> Self {
        ConicPoint { r, s, w: Rational::one() }
    }

    /// Representative with the last nonzero coordinate equal to 1.
    pub fn normalized(&self) -> ConicPoint {
        let scale = [&self.w, &self.s, &self.r]
            .into_iter()
            .find(|x| !x.is_zero())
            .cloned()
            .unwrap_or_else(Rational::one);
        ConicPoint {
            r: &self.r / &scale,
            s: &self.s / &scale,
            w: &self.w / &scale,
        }
    }

    /// Equality as projective points.
    pub fn same_point(&self, other: &ConicPoint) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn on_curve(&self, t: &Rational) -> bool {
        let (r, s, w) = (&self.r, &self.s, &self.w);
        let lhs = (w * w - r * r) * (int(2) * s);
        let rhs = t * (w * w - s * s) * (int(2) * r);
        lhs == rhs
    }

    /// On C_t with `r s w (w^2 - r^2) != 0`.
    pub fn in_open_part(&self, t: &Rational) -> bool {
        let (r, s, w) = (&self.r, &self.s, &self.w);
        self.on_curve(t) && !(r * s * w * (w * w - r * r)).is_zero()
    }
}

impl fmt::Display for ConicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.r, self.s, self.w)
    }
}

fn require_triangle_parameter(t: &Rational) -> Result<()> {
    if !t.is_positive() || t.is_one() {
        return Err(Error::domain(format!("triangle maps need t > 0, t != 1; got {t}")));
    }
    Ok(())
}

fn require_on_et(p: &CurvePoint, t: &Rational) -> Result<WeierstrassModel> {
    let model = curve_et(t)?;
    if !model.contains(p) {
        return Err(Error::NotOnCurve(p.to_string()));
    }
    Ok(model)
}

/// `(x, y) -> (|x^2 - t^2|, |x^2 + 2x + t^2|, |x^2 + 2t^2 x + t^2|) / |2y|`,
/// an eight-to-one map from E_t(Q) \ A_t onto the solutions for `t`.
pub fn phi(p: &CurvePoint, t: &Rational) -> Result<TriangleTriple> {
    require_triangle_parameter(t)?;
    require_on_et(p, t)?;
    let (x, y) = match p {
        CurvePoint::Affine { x, y } if !in_a_t(p, t)? => (x, y),
        _ => return Err(Error::DegeneratePoint(p.to_string())),
    };
    let t2 = t * t;
    let two_y = (int(2) * y).abs();
    let a = (x * x - &t2).abs() / &two_y;
    let b = (x * x + int(2) * x + &t2).abs() / &two_y;
    let c = (x * x + int(2) * &t2 * x + &t2).abs() / &two_y;
    TriangleTriple::new(a, b, c, t.clone())
        .map_err(|e| Error::internal(format!("phi({p}) failed the triangle identities: {e}")))
}

/// `(x, y) -> (x + t^2 : t(x + 1) : y)`, sending O to `(0 : 0 : 1)`.
pub fn phi1(p: &CurvePoint, t: &Rational) -> Result<ConicPoint> {
    require_on_et(p, t)?;
    Ok(match p {
        CurvePoint::Infinity => ConicPoint::affine(Rational::zero(), Rational::zero()),
        CurvePoint::Affine { x, y } => ConicPoint {
            r: x + t * t,
            s: t * (x + Rational::one()),
            w: y.clone(),
        },
    })
}

/// `(r : s : w) -> (|(w^2 - r^2) / 2rw|, |(w^2 + r^2) / 2rw|, t |(w^2 + s^2) / 2sw|)` on C_t'.
pub fn phi2(q: &ConicPoint, t: &Rational) -> Result<TriangleTriple> {
    require_triangle_parameter(t)?;
    if !q.in_open_part(t) {
        return Err(Error::domain(format!("{q} is not on C_t' for t = {t}")));
    }
    let (r, s, w) = (&q.r, &q.s, &q.w);
    let two_rw = int(2) * r * w;
    let two_sw = int(2) * s * w;
    let a = ((w * w - r * r) / &two_rw).abs();
    let b = ((w * w + r * r) / &two_rw).abs();
    let c = t * ((w * w + s * s) / &two_sw).abs();
    TriangleTriple::new(a, b, c, t.clone())
        .map_err(|e| Error::internal(format!("phi2({q}) failed the triangle identities: {e}")))
}

/// The orbit of `q` under the order-8 group generated by
/// `(r, s) -> (-1/r, s)`, `(r, s) -> (r, -1/s)` and `(r, s) -> (-r, -s)`,
/// each point normalized to `w = 1`.
pub fn g_orbit(q: &ConicPoint) -> Result<Vec<ConicPoint>> {
    let q = q.normalized();
    let (r, s) = (&q.r, &q.s);
    if !q.w.is_one() || r.is_zero() || s.is_zero() || r.abs().is_one() {
        return Err(Error::domain(format!("{q} is outside the affine part rsw(w^2 - r^2) != 0")));
    }
    let inv_r = r.recip();
    let inv_s = s.recip();
    let orbit: Vec<ConicPoint> = [
        (r.clone(), s.clone()),
        (-&inv_r, s.clone()),
        (r.clone(), -&inv_s),
        (-&inv_r, -&inv_s),
        (-r, -s),
        (inv_r.clone(), -s),
        (-r, inv_s.clone()),
        (inv_r, inv_s),
    ]
    .into_iter()
    .map(|(r, s)| ConicPoint::affine(r, s))
    .collect();
    for (i, p) in orbit.iter().enumerate() {
        if orbit[..i].contains(p) {
            return Err(Error::internal(format!("orbit of {q} is not free")));
        }
    }
    Ok(orbit)
}

/// A point `(r : s : 1)` of C_t' with `phi2 = T`, taking the parametrization
/// roots `r = b - a` and `s = (c - a) / t`, which lie in (0, 1).
pub fn triple_to_conic(triple: &TriangleTriple) -> Result<ConicPoint> {
    let TriangleTriple { a, b, c, t } = triple;
    let r = b - a;
    let s = (c - a) / t;
    let one = Rational::one();
    let two = int(2);
    let in_unit = |x: &Rational| x.is_positive() && x < &one;
    if !in_unit(&r)
        || !in_unit(&s)
        || (&one - &r * &r) / (&two * &r) != *a
        || t * (&one - &s * &s) / (&two * &s) != *a
    {
        return Err(Error::internal(format!("no parametrization root for ({triple})")));
    }
    Ok(ConicPoint::affine(r, s))
}

/// For `r` not in {0, 1, -1}: `t = ((1 - r^2) / 2r)^2` and the point
/// `((1-r)(1+r)^3 / 4r^3, (1-r)(1+r)^3 (1+r^2)(r^2-2r-1) / 16r^5)`
/// of order 8 on E_t.
pub fn order8_point(r: &Rational) -> Result<(Rational, CurvePoint)> {
    if r.is_zero() || r.abs().is_one() {
        return Err(Error::domain(format!("order8_point needs r not in {{0, 1, -1}}, got {r}")));
    }
    let one = Rational::one();
    let leg = (&one - r * r) / (int(2) * r);
    let t = &leg * &leg;
    if t.is_zero() || t.is_one() {
        return Err(Error::DegenerateParameter(t));
    }
    let base = (&one - r) * (&one + r) * (&one + r) * (&one + r);
    let r3 = r * r * r;
    let x = &base / (int(4) * &r3);
    let y = &base * (&one + r * r) * (r * r - int(2) * r - &one) / (int(16) * &r3 * r * r);
    let p = CurvePoint::affine(x, y);
    if !curve_et(&t)?.contains(&p) {
        return Err(Error::internal(format!("order-8 point {p} is not on E_{t}")));
    }
    Ok((t, p))
}

/// Points `R` with `2R = q`, for `q` on E_t, found via the halving criterion
/// (`x(q) - e_i = alpha_i^2` and `x(R) = x(q) + alpha_1 alpha_2 + alpha_1 alpha_3 + alpha_2 alpha_3`).
pub fn halve(q: &CurvePoint, t: &Rational) -> Result<Vec<CurvePoint>> {
    let model = require_on_et(q, t)?;
    let roots = two_torsion_roots(t);
    let x0 = match q {
        CurvePoint::Affine { x, .. } if is_halvable(q, &roots) => x,
        _ => return Ok(Vec::new()),
    };
    let alphas: Vec<Rational> = roots
        .iter()
        .map(|e| sqrt_exact(&(x0 - e)).expect("halvable"))
        .collect();
    let mut halves = Vec::new();
    for signs in 0..8u8 {
        let al: Vec<Rational> = (0..3)
            .map(|i| if signs >> i & 1 == 1 { -alphas[i].clone() } else { alphas[i].clone() })
            .collect();
        let x = x0 + &al[0] * &al[1] + &al[0] * &al[2] + &al[1] * &al[2];
        let rhs = &x * (&x + Rational::one()) * (&x + t * t);
        let Some(y) = sqrt_exact(&rhs) else { continue };
        for candidate in [CurvePoint::affine(x.clone(), y.clone()), CurvePoint::affine(x.clone(), -y.clone())] {
            if model.double(&candidate)? == *q && !halves.contains(&candidate) {
                halves.push(candidate);
            }
        }
    }
    Ok(halves)
}

/// The five equivalent conditions for E_t to have torsion beyond A_t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtraTorsionReport {
    pub t: Rational,
    /// (a) a torsion point outside A_t, found by halving the order-4 points of A_t.
    pub a_extra_torsion: Option<CurvePoint>,
    /// (b) torsion is Z/2 x Z/8: some point of exact order 8 exists.
    pub b_order_eight: bool,
    /// (c) the similar-triangle solution `(sqrt t, sqrt(t+1), sqrt(t(t+1)))`.
    pub c_similar_triple: Option<TriangleTriple>,
    /// (d) `t` and `t + 1` are both rational squares.
    pub d_squares: bool,
    /// (e) `r` with `t = ((1 - r^2) / 2r)^2`, and the order-8 point built from it.
    pub e_parameter: Option<(Rational, CurvePoint)>,
}

impl ExtraTorsionReport {
    pub fn verdicts(&self) -> [bool; 5] {
        [
            self.a_extra_torsion.is_some(),
            self.b_order_eight,
            self.c_similar_triple.is_some(),
            self.d_squares,
            self.e_parameter.is_some(),
        ]
    }

    pub fn consistent(&self) -> bool {
        let v = self.verdicts();
        v.iter().all(|&x| x == v[3])
    }
}

pub fn extra_torsion_report(t: &Rational) -> Result<ExtraTorsionReport> {
    require_triangle_parameter(t)?;
    let model = curve_et(t)?;
    let one = Rational::one();
    let d_squares = is_square(t) && is_square(&(t + &one));

    let mut a_extra_torsion = None;
    for q in torsion_a_t(t)? {
        if model.point_order(&q, TORSION_CAP)? != PointOrder::Finite(4) {
            continue;
        }
        if let Some(half) = halve(&q, t)?.into_iter().next() {
            a_extra_torsion = Some(half);
            break;
        }
    }

    let e_parameter = match (sqrt_exact(t), sqrt_exact(&(t + &one))) {
        (Some(a), Some(b)) => {
            let r = &b - &a;
            let (t_of_r, point) = order8_point(&r)?;
            if &t_of_r != t {
                return Err(Error::internal(format!("order8_point({r}) gave t = {t_of_r}, expected {t}")));
            }
            Some((r, point))
        }
        _ => None,
    };

    let mut b_order_eight = false;
    for candidate in a_extra_torsion.iter().chain(e_parameter.iter().map(|(_, p)| p)) {
        if model.point_order(candidate, TORSION_CAP)? == PointOrder::Finite(8) {
            b_order_eight = true;
        }
    }

    let c_similar_triple = match (sqrt_exact(t), sqrt_exact(&(t + &one))) {
        (Some(a), Some(b)) => {
            let c = &a * &b;
            let triple = TriangleTriple::new(a, b, c, t.clone())?;
            triple.is_similar_pair().then_some(triple)
        }
        _ => None,
    };

    Ok(ExtraTorsionReport {
        t: t.clone(),
        a_extra_torsion,
        b_order_eight,
        c_similar_triple,
        d_squares,
        e_parameter,
    })
}

/// For `t = 1`: `a = (1 - r^2) / 2r`, `b = c = (1 + r^2) / 2r`, `0 < r < 1`.
pub fn t1_family(r: &Rational) -> Result<TriangleTriple> {
    let one = Rational::one();
    if !r.is_positive() || r >= &one {
        return Err(Error::domain(format!("t = 1 family needs 0 < r < 1, got {r}")));
    }
    let two_r = int(2) * r;
    let a = (&one - r * r) / &two_r;
    let b = (&one + r * r) / &two_r;
    TriangleTriple::new(a, b.clone(), b, one)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// A point of infinite order exists, so there are infinitely many solutions.
    InfinitelyMany { witness: CurvePoint },
    /// Exactly one solution, if E_t has rank 0.
    SingleSolution { triple: TriangleTriple },
    /// No solution, if E_t has rank 0.
    NoSolution,
    /// `t = 1`: every `r` in (0, 1) gives a solution.
    OneParameterFamily,
    /// Strict mode: no witness found and rank 0 not assumed.
    Unresolved { bound: SearchBound },
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::InfinitelyMany { .. } => "InfinitelyMany",
            Classification::SingleSolution { .. } => "SingleSolution",
            Classification::NoSolution => "NoSolution",
            Classification::OneParameterFamily => "OneParameterFamily",
            Classification::Unresolved { .. } => "Unresolved",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyReport {
    pub t: Rational,
    pub verdict: Classification,
    pub bound: SearchBound,
    /// Assumptions the verdict depends on; empty for unconditional verdicts.
    pub conditional_flags: Vec<String>,
    /// `W(E_t)`; `None` for `t = 1`.
    pub root_number: Option<Sign>,
}

impl ClassifyReport {
    pub fn is_conditional(&self) -> bool {
        !self.conditional_flags.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let witness = match &self.verdict {
            Classification::InfinitelyMany { witness } => Some(witness.to_string()),
            _ => None,
        };
        let triple = match &self.verdict {
            Classification::SingleSolution { triple } => Some(triple.to_string()),
            _ => None,
        };
        json!({
            "t": self.t.to_string(),
            "verdict": self.verdict.name(),
            "witness": witness,
            "triple": triple,
            "bound": { "max_den": self.bound.max_den, "max_num": self.bound.max_num },
            "conditional_flags": self.conditional_flags,
            "root_number": self.root_number.map(Sign::value),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json values serialize")
    }

    pub fn render(&self) -> String {
        let qualifier = if self.is_conditional() { " (conditional)" } else { "" };
        let detail = match &self.verdict {
            Classification::InfinitelyMany { witness } => format!(" witness {witness}"),
            Classification::SingleSolution { triple } => format!(" {triple}"),
            Classification::Unresolved { bound } => {
                format!(" no witness with max_den {} max_num {}", bound.max_den, bound.max_num)
            }
            _ => String::new(),
        };
        let mut out = format!("t = {}\nverdict: {}{}{}\n", self.t, self.verdict.name(), detail, qualifier);
        for flag in &self.conditional_flags {
            out.push_str(&format!("conditional: {flag}\n"));
        }
        if let Some(w) = self.root_number {
            out.push_str(&format!("root number W(E_t) = {w}\n"));
        }
        out
    }
}

/// Classifies the solution set for `t > 0`.
///
/// A point search can only prove that solutions are infinite. The
/// SingleSolution and NoSolution verdicts assume E_t has rank 0 and carry
/// that assumption, together with the search bound and the root-number
/// prediction, in `conditional_flags`. With `strict`, NoSolution is
/// reported as Unresolved instead.
pub fn classify(t: &Rational, bound: SearchBound, strict: bool) -> Result<ClassifyReport> {
    if !t.is_positive() {
        return Err(Error::domain(format!("classify needs t > 0, got {t}")));
    }
    if t.is_one() {
        return Ok(ClassifyReport {
            t: t.clone(),
            verdict: Classification::OneParameterFamily,
            bound,
            conditional_flags: Vec::new(),
            root_number: None,
        });
    }
    let root_number = root_number_closed(t)?;
    if let WitnessSearch::Found(witness) = rank_witness(t, bound)? {
        return Ok(ClassifyReport {
            t: t.clone(),
            verdict: Classification::InfinitelyMany { witness },
            bound,
            conditional_flags: Vec::new(),
            root_number: Some(root_number),
        });
    }

    let mut flags = vec![format!(
        "assuming rank 0: no point of infinite order found with x = m/e^2, e <= {}, |m| <= {} e^2 (search cannot prove rank 0)",
        bound.max_den, bound.max_num
    )];
    flags.push(match root_number {
        Sign::Minus => "root number -1: assuming the parity conjecture, E_t has odd rank, so the rank-0 assumption is expected to fail".to_string(),
        Sign::Plus => "root number +1: assuming the parity conjecture, E_t has even rank, consistent with rank 0".to_string(),
    });

    let report = extra_torsion_report(t)?;
    let verdict = match report.c_similar_triple {
        Some(triple) => Classification::SingleSolution { triple },
        None if strict => {
            return Ok(ClassifyReport {
                t: t.clone(),
                verdict: Classification::Unresolved { bound },
                bound,
                conditional_flags: vec![format!(
                    "strict mode: rank 0 not assumed; root number {root_number}, conditional on the parity conjecture"
                )],
                root_number: Some(root_number),
            })
        }
        None => Classification::NoSolution,
    };
    Ok(ClassifyReport {
        t: t.clone(),
        verdict,
        bound,
        conditional_flags: flags,
        root_number: Some(root_number),
    })
}
