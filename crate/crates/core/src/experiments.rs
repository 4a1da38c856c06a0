//! Finite-range checks: density of the set where |P_t| is even, agreement of
//! the two root-number computations, the specialization check at T = 6 and
//! the torsion table.
//!
//! Sweeps run over the distinct reduced fractions `t = a/b` with
//! `1 <= |a|, b <= X` and `t != +-1`, ordered by `(|a|, b, a)`. With `jobs > 1`
//! the work is split over a rayon pool; results are merged in that order, so
//! reports never depend on `jobs`.

use std::fmt::Write as _;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::curve::{curve_et, torsion_a_t, PointOrder, TORSION_CAP};
use crate::error::{Error, Result};
use crate::exactq::{fraction_string, int, is_square, sqrt_exact, Rational, Sign};
use crate::rootnumber::{prime_set_pt, root_number_closed, root_number_local_product};
use crate::triangles::order8_point;

/// Reduced `a/b` with `1 <= |a|, b <= x`, excluding +-1, in `(|a|, b, a)` order.
pub fn scan_parameters(x: u64) -> Vec<Rational> {
    let x = x as i64;
    let mut out = Vec::new();
    for abs_a in 1..=x {
        for b in 1..=x {
            if abs_a.gcd(&b) != 1 || (abs_a == 1 && b == 1) {
                continue;
            }
            for a in [-abs_a, abs_a] {
                out.push(Rational::new(BigInt::from(a), BigInt::from(b)));
            }
        }
    }
    out
}

fn run_parallel<T, F>(params: &[Rational], jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Rational) -> Result<T> + Sync + Send,
{
    if jobs <= 1 {
        return params.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::internal(format!("thread pool: {e}")))?;
    pool.install(|| params.par_iter().map(&f).collect())
}

/// One row of the density scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub t: Rational,
    pub w_closed: Sign,
    pub w_local: Sign,
    pub in_t: bool,
    pub p_set_size: usize,
}

impl ScanRow {
    pub fn compute(t: &Rational) -> Result<Self> {
        let p_set = prime_set_pt(t)?;
        Ok(ScanRow {
            t: t.clone(),
            w_closed: root_number_closed(t)?,
            w_local: root_number_local_product(t)?.0,
            in_t: p_set.len() % 2 == 0,
            p_set_size: p_set.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub x: u64,
    pub total: u64,
    pub in_t_count: u64,
    /// `in_t_count / total`.
    pub fraction: Rational,
    /// Mean of the closed-form root number over the scanned parameters.
    pub avg_root_number: Rational,
    pub rows: Vec<ScanRow>,
}

impl DensityReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "X = {}", self.x);
        let _ = writeln!(out, "parameters scanned = {}", self.total);
        let _ = writeln!(out, "|P_t| even = {}", self.in_t_count);
        let _ = writeln!(out, "fraction = {} ({})", fraction_string(&self.fraction), decimal(&self.fraction, 6));
        let _ = writeln!(
            out,
            "average root number = {} ({})",
            fraction_string(&self.avg_root_number),
            decimal(&self.avg_root_number, 6)
        );
        out
    }

    /// CSV with header `t,num,den,w_closed,w_local,in_T,p_set_size` and LF line endings.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let io = |e: csv::Error| Error::internal(format!("csv: {e}"));
        csv.write_record(["t", "num", "den", "w_closed", "w_local", "in_T", "p_set_size"])
            .map_err(io)?;
        for row in &self.rows {
            csv.write_record([
                fraction_string(&row.t),
                row.t.numer().to_string(),
                row.t.denom().to_string(),
                row.w_closed.value().to_string(),
                row.w_local.value().to_string(),
                row.in_t.to_string(),
                row.p_set_size.to_string(),
            ])
            .map_err(io)?;
        }
        csv.flush().map_err(|e| Error::internal(format!("csv: {e}")))
    }
}

/// Exact rational rounded toward zero to `digits` decimal places, for display.
pub fn decimal(x: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = (x * Rational::from_integer(scale.clone())).trunc().to_integer();
    let (int_part, frac) = scaled.abs().div_rem(&scale);
    let sign = if x.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac:0>width$}", width = digits as usize)
}

pub fn density_scan(x: u64, jobs: usize) -> Result<DensityReport> {
    if x < 2 {
        return Err(Error::domain("density scan needs X >= 2"));
    }
    let params = scan_parameters(x);
    let rows = run_parallel(&params, jobs, ScanRow::compute)?;
    let total = rows.len() as u64;
    let in_t_count = rows.iter().filter(|r| r.in_t).count() as u64;
    let sum: i64 = rows.iter().map(|r| r.w_closed.value() as i64).sum();
    Ok(DensityReport {
        x,
        total,
        in_t_count,
        fraction: Rational::new(BigInt::from(in_t_count), BigInt::from(total)),
        avg_root_number: Rational::new(BigInt::from(sum), BigInt::from(total)),
        rows,
    })
}

/// A parameter where the checks disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub t: Rational,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub x: u64,
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.mismatches.first()
    }

    pub fn render(&self) -> String {
        let mut out = format!("consistency sweep X = {}: {} parameters checked\n", self.x, self.checked);
        match self.first_mismatch() {
            None => out.push_str("PASS: closed form = local product, W = -(-1)^|P_t|, P_t = P_-t\n"),
            Some(m) => {
                let _ = writeln!(out, "FAIL: {} mismatches; first at t = {}: {}", self.mismatches.len(), m.t, m.reason);
            }
        }
        out
    }
}

fn check_parameter(t: &Rational) -> Result<Option<Mismatch>> {
    let closed = root_number_closed(t)?;
    let (local, _) = root_number_local_product(t)?;
    let p_set = prime_set_pt(t)?;
    let p_set_neg = prime_set_pt(&-t)?;
    let reason = if closed != local {
        Some(format!("closed form {closed}, local product {local}"))
    } else if closed != -Sign::parity(p_set.len()) {
        Some(format!("W = {closed} but |P_t| = {}", p_set.len()))
    } else if p_set != p_set_neg {
        Some(format!("P_t = {} but P_-t = {}", p_set, p_set_neg))
    } else {
        None
    };
    Ok(reason.map(|reason| Mismatch { t: t.clone(), reason }))
}

/// Compares both root-number computations and the `t -> -t` symmetry of
/// P_t over the scan range. Disagreements are reported, not raised.
pub fn consistency_sweep(x: u64, jobs: usize) -> Result<ConsistencyReport> {
    if x < 2 {
        return Err(Error::domain("consistency sweep needs X >= 2"));
    }
    let params = scan_parameters(x);
    let results = run_parallel(&params, jobs, check_parameter)?;
    Ok(ConsistencyReport {
        x,
        checked: params.len() as u64,
        mismatches: results.into_iter().flatten().collect(),
    })
}

/// One candidate `h(T) = (-1)^e1 T^e2 (T+1)^e3 (T-1)^e4` evaluated at T = 6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationRow {
    pub exponents: [u8; 4],
    pub label: String,
    pub value: Rational,
    pub is_square: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationReport {
    pub rows: Vec<SpecializationRow>,
    /// Exponent tuples in total, including the two constants +-1.
    pub tuples: usize,
}

impl SpecializationReport {
    pub fn passed(&self) -> bool {
        self.rows.len() == 14 && self.rows.iter().all(|r| !r.is_square)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("h(T)                 h(6)   square\n");
        for row in &self.rows {
            let _ = writeln!(out, "{:<20} {:>5}   {}", row.label, row.value.to_string(), if row.is_square { "yes" } else { "no" });
        }
        let _ = writeln!(
            out,
            "note: {} exponent tuples, of which 2 give the constants 1 and -1; {} non-constant h checked (count differs from 16)",
            self.tuples,
            self.rows.len()
        );
        let _ = writeln!(out, "{}", if self.passed() { "PASS: no h(6) is a square" } else { "FAIL" });
        out
    }
}

/// The injectivity test for specializing the generic Mordell-Weil group at
/// T = 6: no non-constant `h(T)` may take a square value there.
pub fn gusic_tadic_check() -> SpecializationReport {
    let t = int(6);
    let factors = [(int(-1), "-1"), (t.clone(), "T"), (&t + int(1), "(T+1)"), (&t - int(1), "(T-1)")];
    let mut rows = Vec::new();
    let mut tuples = 0;
    for mask in 0u8..16 {
        tuples += 1;
        let exponents = [mask & 1, mask >> 1 & 1, mask >> 2 & 1, mask >> 3 & 1];
        if exponents[1..] == [0, 0, 0] {
            continue;
        }
        let mut value = Rational::one();
        let mut label = String::new();
        for (i, (factor, name)) in factors.iter().enumerate() {
            if exponents[i] == 1 {
                value *= factor;
                if i == 0 {
                    label.push('-');
                } else {
                    label.push_str(name);
                }
            }
        }
        rows.push(SpecializationRow {
            exponents,
            label,
            is_square: is_square(&value),
            value,
        });
    }
    SpecializationReport { rows, tuples }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionRow {
    pub t: Rational,
    pub on_curve: bool,
    pub closed: bool,
    /// Number of points of order 1, 2 and 4.
    pub profile: (usize, usize, usize),
    /// `Some(true)` when t and t+1 are squares and the order-8 point checks out.
    pub order8_extension: Option<bool>,
}

impl TorsionRow {
    pub fn passed(&self) -> bool {
        self.on_curve && self.closed && self.profile == (1, 3, 4) && self.order8_extension != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionTableReport {
    pub rows: Vec<TorsionRow>,
}

impl TorsionTableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(TorsionRow::passed)
    }
}

pub fn torsion_table_check(samples: &[Rational]) -> Result<TorsionTableReport> {
    let mut rows = Vec::new();
    for t in samples {
        let model = curve_et(t)?;
        let points = torsion_a_t(t)?;
        let on_curve = points.iter().all(|p| model.contains(p));
        let mut closed = true;
        for p in &points {
            for q in &points {
                closed &= points.contains(&model.add(p, q)?);
            }
        }
        let mut profile = (0, 0, 0);
        for p in &points {
            match model.point_order(p, TORSION_CAP)? {
                PointOrder::Finite(1) => profile.0 += 1,
                PointOrder::Finite(2) => profile.1 += 1,
                PointOrder::Finite(4) => profile.2 += 1,
                _ => {}
            }
        }
        let order8_extension = match (sqrt_exact(t), sqrt_exact(&(t + int(1)))) {
            (Some(a), Some(b)) if t.is_positive() && !a.is_zero() => {
                let (t8, p) = order8_point(&(&b - &a))?;
                let double = model.double(&p)?;
                Some(
                    &t8 == t
                        && model.point_order(&p, TORSION_CAP)? == PointOrder::Finite(8)
                        && points.contains(&double),
                )
            }
            _ => None,
        };
        rows.push(TorsionRow {
            t: t.clone(),
            on_curve,
            closed,
            profile,
            order8_extension,
        });
    }
    Ok(TorsionTableReport { rows })
}
