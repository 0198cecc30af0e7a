//! Truncated formal power series over exact rationals.
//!
//! A series of order M holds coefficients for z^0..z^M. Binary operations
//! truncate to the minimum of the operand orders and record it; nothing ever
//! silently changes M. Coefficients are stored as integer numerators over one
//! shared positive denominator, so ring operations are gcd-free integer
//! convolutions; callers always see reduced per-coefficient rationals.
//!
//! Division, exp, log, and rational powers use direct recurrences: exactness
//! makes quadratic convergence unnecessary, and the recurrences are simpler
//! to audit than Newton iteration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{self, Rat, Valuation};
use crate::report::CertReport;

/// Formal power series truncated at a fixed order M, exact coefficients.
#[derive(Clone, Debug)]
pub struct TruncSeries {
    order: usize,
    nums: Vec<BigInt>,
    den: BigInt,
}

fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a == b {
        return a.clone();
    }
    a / a.gcd(b) * b
}

impl TruncSeries {
    /// The zero series at a given order.
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            order,
            nums: vec![BigInt::zero(); order + 1],
            den: BigInt::one(),
        }
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.nums[0] = BigInt::one();
        s
    }

    /// The monomial z.
    pub fn z(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.nums[1] = BigInt::one();
        }
        s
    }

    pub fn from_rat_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        let mut den = BigInt::one();
        for c in &coeffs {
            den = lcm_big(&den, c.denom());
        }
        let nums = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        TruncSeries {
            order: coeffs.len() - 1,
            nums,
            den,
        }
    }

    pub fn from_int_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty());
        TruncSeries {
            order: coeffs.len() - 1,
            nums: coeffs,
            den: BigInt::one(),
        }
    }

    /// Build from raw numerators over a shared denominator.
    pub fn from_scaled(nums: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!nums.is_empty());
        assert!(!den.is_zero(), "denominator must be nonzero");
        let (nums, den) = if den.is_negative() {
            (nums.into_iter().map(|n| -n).collect(), -den)
        } else {
            (nums, den)
        };
        TruncSeries {
            order: nums.len() - 1,
            nums,
            den,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Reduced coefficient of z^i.
    pub fn coeff(&self, i: usize) -> Rat {
        assert!(i <= self.order, "coefficient index {i} beyond order {}", self.order);
        Rat::new(self.nums[i].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        (0..=self.order).map(|i| self.coeff(i)).collect()
    }

    pub(crate) fn nums(&self) -> &[BigInt] {
        &self.nums
    }

    pub(crate) fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(|n| n.is_zero())
    }

    /// Divide out the content shared by all numerators and the denominator.
    pub fn normalize(&mut self) {
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for n in &self.nums {
            if n.is_zero() {
                continue;
            }
            g = g.gcd(n);
            if g.is_one() {
                return;
            }
        }
        for n in &mut self.nums {
            *n = &*n / &g;
        }
        self.den = &self.den / &g;
    }

    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order);
        TruncSeries {
            order,
            nums: self.nums[..=order].to_vec(),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            order: self.order,
            nums: self.nums.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.add_signed(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add_signed(rhs, true)
    }

    fn add_signed(&self, rhs: &Self, negate: bool) -> Self {
        let order = self.order.min(rhs.order);
        let den = lcm_big(&self.den, &rhs.den);
        let la = &den / &self.den;
        let lb = &den / &rhs.den;
        let nums = (0..=order)
            .map(|i| {
                let a = &self.nums[i] * &la;
                let b = &rhs.nums[i] * &lb;
                if negate {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        let mut out = TruncSeries { order, nums, den };
        out.normalize();
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let nums = self.nums.iter().map(|n| n * c.numer()).collect();
        let mut out = TruncSeries {
            order: self.order,
            nums,
            den: &self.den * c.denom(),
        };
        out.normalize();
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut nums = vec![BigInt::zero(); order + 1];
        for i in 0..=order {
            if self.nums[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                if rhs.nums[j].is_zero() {
                    continue;
                }
                nums[i + j] += &self.nums[i] * &rhs.nums[j];
            }
        }
        let mut out = TruncSeries {
            order,
            nums,
            den: &self.den * &rhs.den,
        };
        out.normalize();
        out
    }

    /// Exact division; the divisor needs a nonzero constant term.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.nums[0].is_zero() {
            return Err(Error::Series(
                "division by a series with zero constant term".into(),
            ));
        }
        let order = self.order.min(rhs.order);
        // Fast path: integral divisor with constant term ±1 keeps the
        // quotient over the dividend's denominator.
        if rhs.den.is_one() && rhs.nums[0].abs().is_one() {
            let flip = rhs.nums[0].is_negative();
            let mut q: Vec<BigInt> = Vec::with_capacity(order + 1);
            for n in 0..=order {
                let mut acc = self.nums[n].clone();
                for j in 1..=n {
                    if !rhs.nums[j].is_zero() {
                        acc -= &rhs.nums[j] * &q[n - j];
                    }
                }
                if flip {
                    acc = -acc;
                }
                q.push(acc);
            }
            let mut out = TruncSeries {
                order,
                nums: q,
                den: self.den.clone(),
            };
            out.normalize();
            return Ok(out);
        }
        // General path: per-coefficient reduced rationals.
        let b0 = rhs.coeff(0);
        let mut q: Vec<Rat> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeff(n);
            for j in 1..=n {
                acc -= rhs.coeff(j) * &q[n - j];
            }
            q.push(acc / &b0);
        }
        Ok(TruncSeries::from_rat_coeffs(q))
    }

    /// exp of a series with zero constant term, by the recurrence
    /// n·e_n = Σ_{j=1..n} j·t_j·e_{n−j}.
    pub fn exp(&self) -> Result<Self> {
        if !self.nums[0].is_zero() {
            return Err(Error::Series("exp needs a zero constant term".into()));
        }
        let order = self.order;
        let dt = &self.den;
        let mut e: Vec<BigInt> = Vec::with_capacity(order + 1);
        let mut de = BigInt::one();
        e.push(BigInt::one());
        for n in 1..=order {
            let mut sum = BigInt::zero();
            for j in 1..=n {
                if self.nums[j].is_zero() || e[n - j].is_zero() {
                    continue;
                }
                sum += &self.nums[j] * &e[n - j] * BigInt::from(j);
            }
            // e_n = sum / (n·dt·de)
            let denom = BigInt::from(n) * dt * &de;
            push_scaled(&mut e, &mut de, sum, denom);
        }
        Ok(TruncSeries {
            order,
            nums: e,
            den: de,
        })
    }

    /// log of a series with constant term 1, zero constant term output.
    pub fn log(&self) -> Result<Self> {
        if self.coeff(0) != Rat::one() {
            return Err(Error::Series("log needs constant term 1".into()));
        }
        let order = self.order;
        let mut t: Vec<Rat> = Vec::with_capacity(order + 1);
        t.push(Rat::zero());
        for n in 1..=order {
            let mut acc = Rat::zero();
            for j in 1..n {
                let s = self.coeff(n - j);
                if s.is_zero() || t[j].is_zero() {
                    continue;
                }
                acc += &t[j] * s * Rat::from_integer(BigInt::from(j));
            }
            let tn = self.coeff(n) - acc / Rat::from_integer(BigInt::from(n));
            t.push(tn);
        }
        Ok(TruncSeries::from_rat_coeffs(t))
    }

    /// s^e for rational e, on series with constant term 1, via the direct
    /// recurrence from (s^e)'·s = e·s'·s^e.
    pub fn pow_rat(&self, e: &Rat) -> Result<Self> {
        match self.pow_rat_impl(e, false)? {
            PowOutcome::Full(s) => Ok(s),
            PowOutcome::Witness { .. } => unreachable!("full mode never stops early"),
        }
    }

    /// Like `pow_rat`, but stops at the first non-integral coefficient and
    /// reports it, which is what sharpness-witness searches need.
    pub fn pow_rat_watch(&self, e: &Rat) -> Result<PowOutcome> {
        self.pow_rat_impl(e, true)
    }

    fn pow_rat_impl(&self, e: &Rat, stop_on_nonintegral: bool) -> Result<PowOutcome> {
        if self.coeff(0) != Rat::one() {
            return Err(Error::Series("pow_rat needs constant term 1".into()));
        }
        let order = self.order;
        let a = e.numer().clone();
        let b = e.denom().clone();
        let ds = &self.den;
        let mut y: Vec<BigInt> = Vec::with_capacity(order + 1);
        let mut dy = BigInt::one();
        y.push(BigInt::one());
        for n in 1..=order {
            // y_n = (1/(n·b)) Σ_{j=1..n} ((a+b)·j − b·n)·s_j·y_{n−j}
            let mut sum = BigInt::zero();
            let bn = &b * BigInt::from(n);
            for j in 1..=n {
                if self.nums[j].is_zero() || y[n - j].is_zero() {
                    continue;
                }
                let w = (&a + &b) * BigInt::from(j) - &bn;
                if w.is_zero() {
                    continue;
                }
                sum += w * &self.nums[j] * &y[n - j];
            }
            let denom = BigInt::from(n) * &b * ds * &dy;
            let witness = push_scaled(&mut y, &mut dy, sum, denom);
            if stop_on_nonintegral && witness {
                let val = Rat::new(y[n].clone(), dy.clone());
                return Ok(PowOutcome::Witness { index: n, value: val });
            }
        }
        Ok(PowOutcome::Full(TruncSeries {
            order,
            nums: y,
            den: dy,
        }))
    }

    /// s(z) ↦ s(z^p): coefficient m of the output is coefficient m/p of the
    /// input when p | m, else 0; the order is preserved.
    pub fn substitute_pth_power(&self, p: usize) -> Self {
        assert!(p >= 1);
        let mut nums = vec![BigInt::zero(); self.order + 1];
        for m in (0..=self.order).step_by(p) {
            nums[m] = self.nums[m / p].clone();
        }
        TruncSeries {
            order: self.order,
            nums,
            den: self.den.clone(),
        }
    }

    /// Compositional inverse of s = z + O(z²): returns t with s(t(q)) = q
    /// through the truncation order, by Newton iteration with quadratically
    /// growing accuracy.
    pub fn reversion(&self) -> Result<Self> {
        if self.order < 1 || !self.nums[0].is_zero() || self.coeff(1) != Rat::one() {
            return Err(Error::Series(
                "reversion needs s = z + O(z^2) with unit linear coefficient".into(),
            ));
        }
        let order = self.order;
        let z = TruncSeries::z(order);
        // Derivative padded back to full order; the padding coefficient only
        // influences orders beyond the truncation in the Newton correction.
        let deriv = {
            let mut d: Vec<Rat> = (1..=order)
                .map(|i| self.coeff(i) * Rat::from_integer(BigInt::from(i)))
                .collect();
            d.push(Rat::zero());
            TruncSeries::from_rat_coeffs(d)
        };
        let mut t = z.clone();
        let mut accurate = 1usize;
        while accurate < order {
            let residual = self.compose(&t)?.sub(&z);
            if residual.is_zero() {
                break;
            }
            let slope = deriv.compose(&t)?;
            t = t.sub(&residual.div(&slope)?);
            accurate = (2 * accurate).min(order);
        }
        Ok(t)
    }

    /// Horner composition self(inner); inner must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.nums[0].is_zero() {
            return Err(Error::Series(
                "composition needs an inner series with zero constant term".into(),
            ));
        }
        let order = self.order.min(inner.order);
        let inner = inner.truncated(order);
        let mut acc = TruncSeries::zero(order);
        for k in (0..=order).rev() {
            acc = acc.mul(&inner);
            let c = self.coeff(k);
            if !c.is_zero() {
                acc = acc.add_const(&c);
            }
        }
        Ok(acc)
    }

    fn add_const(&self, c: &Rat) -> Self {
        let den = lcm_big(&self.den, c.denom());
        let f = &den / &self.den;
        let mut nums: Vec<BigInt> = self.nums.iter().map(|n| n * &f).collect();
        nums[0] += c.numer() * (&den / c.denom());
        let mut out = TruncSeries {
            order: self.order,
            nums,
            den,
        };
        out.normalize();
        out
    }

    /// θ = z·d/dz.
    pub fn theta_op(&self) -> Self {
        let nums = self
            .nums
            .iter()
            .enumerate()
            .map(|(i, n)| n * BigInt::from(i))
            .collect();
        TruncSeries {
            order: self.order,
            nums,
            den: self.den.clone(),
        }
    }

    /// Multiply by z, keeping the order (the top coefficient falls off).
    pub fn mul_z(&self) -> Self {
        let mut nums = vec![BigInt::zero(); self.order + 1];
        for i in 1..=self.order {
            nums[i] = self.nums[i - 1].clone();
        }
        TruncSeries {
            order: self.order,
            nums,
            den: self.den.clone(),
        }
    }

    /// Divide by z (constant term must vanish); the order drops by one.
    pub fn div_z(&self) -> Result<Self> {
        if !self.nums[0].is_zero() {
            return Err(Error::Series("div_z needs a zero constant term".into()));
        }
        if self.order == 0 {
            return Err(Error::Series("div_z needs order >= 1".into()));
        }
        Ok(TruncSeries {
            order: self.order - 1,
            nums: self.nums[1..].to_vec(),
            den: self.den.clone(),
        })
    }

    /// Pass iff every coefficient has denominator 1; on failure reports the
    /// smallest offending index with its full denominator factorization.
    pub fn integrality_report(&self) -> CertReport {
        if self.den.is_one() {
            return CertReport::pass(self.order, "all coefficients integral");
        }
        for i in 0..=self.order {
            if !(&self.nums[i] % &self.den).is_zero() {
                let g = self.nums[i].gcd(&self.den);
                let bad = &self.den / g;
                let detail = format!(
                    "coefficient {i} has denominator {} = {}",
                    bad,
                    factorization_string(&bad)
                );
                return CertReport::fail(self.order, i, None, detail);
            }
        }
        CertReport::pass(self.order, "all coefficients integral")
    }

    /// Minimum v_p over coefficients at indices ≥ from_index (zeros ignored),
    /// with the earliest achieving index.
    pub fn min_valuation_report(&self, p: u64, from_index: usize) -> (Valuation, Option<usize>) {
        let vden = padic::vp_int(&self.den, p)
            .expect("prime validated by caller")
            .finite()
            .unwrap();
        let mut best = Valuation::Infinite;
        let mut best_idx = None;
        for i in from_index..=self.order {
            if self.nums[i].is_zero() {
                continue;
            }
            let v = match padic::vp_int(&self.nums[i], p).unwrap() {
                Valuation::Finite(v) => Valuation::Finite(v - vden),
                Valuation::Infinite => Valuation::Infinite,
            };
            if v < best {
                best = v;
                best_idx = Some(i);
            }
        }
        (best, best_idx)
    }

    /// Value equality through the common truncation order.
    pub fn eq_through(&self, rhs: &Self, order: usize) -> bool {
        assert!(order <= self.order && order <= rhs.order);
        (0..=order).all(|i| &self.nums[i] * &rhs.den == &rhs.nums[i] * &self.den)
    }
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.eq_through(other, self.order)
    }
}

/// Result of a rational-power computation that may stop at the first
/// non-integral coefficient.
pub enum PowOutcome {
    Full(TruncSeries),
    Witness { index: usize, value: Rat },
}

/// Append sum/denom to the adaptive scaled vector (nums, den), reducing the
/// new coefficient once and rescaling the prefix only when its denominator
/// actually grows. Returns true when the appended coefficient is not an
/// integer.
fn push_scaled(nums: &mut Vec<BigInt>, den: &mut BigInt, sum: BigInt, denom: BigInt) -> bool {
    if sum.is_zero() {
        nums.push(BigInt::zero());
        return false;
    }
    let c = Rat::new(sum, denom);
    let (cn, cd) = (c.numer(), c.denom());
    if (&*den % cd).is_zero() {
        nums.push(cn * (&*den / cd));
    } else {
        let newden = lcm_big(den, cd);
        let f = &newden / &*den;
        for n in nums.iter_mut() {
            *n = &*n * &f;
        }
        nums.push(cn * (&newden / cd));
        *den = newden;
    }
    !c.denom().is_one()
}

fn factorization_string(n: &BigInt) -> String {
    let mut n = n.clone();
    let mut parts = Vec::new();
    let mut p = 2u64;
    while p <= 1_000_000 && !n.is_one() {
        if padic::is_prime(p) {
            let mut e = 0u32;
            loop {
                let (q, r) = n.div_rem(&BigInt::from(p));
                if r.is_zero() {
                    n = q;
                    e += 1;
                } else {
                    break;
                }
            }
            if e > 0 {
                parts.push(if e == 1 {
                    format!("{p}")
                } else {
                    format!("{p}^{e}")
                });
            }
        }
        p += 1;
        if n.is_one() {
            break;
        }
    }
    if !n.is_one() {
        parts.push(format!("{n}"));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

// ---------------------------------------------------------------------------
// serialization: JSON as {"order": M, "coeffs": [{"num": "...", "den": "..."}]}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<CoeffRepr>,
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = (0..=self.order)
            .map(|i| {
                let c = self.coeff(i);
                CoeffRepr {
                    num: c.numer().to_str_radix(10),
                    den: c.denom().to_str_radix(10),
                }
            })
            .collect();
        SeriesRepr {
            order: self.order,
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(D::Error::custom(format!(
                "series of order {} needs {} coefficients, got {}",
                repr.order,
                repr.order + 1,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| {
                let num = padic::bigint_from_decimal(&c.num).map_err(D::Error::custom)?;
                let den = padic::bigint_from_decimal(&c.den).map_err(D::Error::custom)?;
                if den.is_zero() || den.is_negative() {
                    return Err(D::Error::custom("coefficient denominator must be positive"));
                }
                Ok(Rat::new(num, den))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(TruncSeries::from_rat_coeffs(coeffs))
    }
}

// ---------------------------------------------------------------------------

/// A(z) + B(z)·log z, both parts sharing one order. Exists solely for
/// Picard–Fuchs annihilation checks.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    pub plain: TruncSeries,
    pub logpart: TruncSeries,
}

impl LogSeries {
    pub fn new(plain: TruncSeries, logpart: TruncSeries) -> Self {
        assert_eq!(plain.order(), logpart.order(), "both parts share one order");
        LogSeries { plain, logpart }
    }

    pub fn order(&self) -> usize {
        self.plain.order()
    }

    /// θ(A + B log z) = (θA + B) + (θB)·log z.
    pub fn theta_op(&self) -> Self {
        LogSeries {
            plain: self.plain.theta_op().add(&self.logpart),
            logpart: self.logpart.theta_op(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        LogSeries {
            plain: self.plain.add(&rhs.plain),
            logpart: self.logpart.add(&rhs.logpart),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        LogSeries {
            plain: self.plain.sub(&rhs.plain),
            logpart: self.logpart.sub(&rhs.logpart),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        LogSeries {
            plain: self.plain.scale(c),
            logpart: self.logpart.scale(c),
        }
    }

    pub fn mul_z(&self) -> Self {
        LogSeries {
            plain: self.plain.mul_z(),
            logpart: self.logpart.mul_z(),
        }
    }

    /// True when both parts vanish at indices 0..=through.
    pub fn vanishes_through(&self, through: usize) -> bool {
        (0..=through).all(|i| self.plain.coeff(i).is_zero() && self.logpart.coeff(i).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{rat, rat_int};
    use proptest::prelude::*;

    fn ts(coeffs: &[(i64, i64)]) -> TruncSeries {
        TruncSeries::from_rat_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn geometric(order: usize) -> TruncSeries {
        TruncSeries::from_int_coeffs(vec![BigInt::one(); order + 1])
    }

    #[test]
    fn arith_examples() {
        // (1+z)(1−z) = 1 − z²
        let a = ts(&[(1, 1), (1, 1), (0, 1)]);
        let b = ts(&[(1, 1), (-1, 1), (0, 1)]);
        let prod = a.mul(&b);
        assert_eq!(prod.coeff(0), rat_int(1));
        assert_eq!(prod.coeff(1), rat_int(0));
        assert_eq!(prod.coeff(2), rat_int(-1));
        // 1/(1−z) has all-ones coefficients
        let one_minus_z = {
            let mut v = vec![rat_int(1), rat_int(-1)];
            v.extend(std::iter::repeat(rat_int(0)).take(19));
            TruncSeries::from_rat_coeffs(v)
        };
        let geo = TruncSeries::one(20).div(&one_minus_z).unwrap();
        assert_eq!(geo, geometric(20));
    }

    #[test]
    fn div_by_zero_constant_errors() {
        let a = TruncSeries::one(3);
        let b = TruncSeries::z(3);
        assert!(a.div(&b).is_err());
    }

    #[test]
    fn exp_log_basics() {
        assert_eq!(TruncSeries::zero(10).exp().unwrap(), TruncSeries::one(10));
        // exp(z) has coefficients 1/m!
        let e = TruncSeries::z(8).exp().unwrap();
        for m in 0..=8usize {
            assert_eq!(
                e.coeff(m),
                Rat::new(BigInt::one(), crate::padic::factorial(m as u64))
            );
        }
        assert!(TruncSeries::one(4).exp().is_err());
        // log(1) = 0, log(1/(1−z)) has coefficients 1/m
        assert_eq!(TruncSeries::one(6).log().unwrap(), TruncSeries::zero(6));
        let l = geometric(12).log().unwrap();
        for m in 1..=12usize {
            assert_eq!(l.coeff(m), Rat::new(BigInt::one(), BigInt::from(m)));
        }
        assert!(TruncSeries::z(4).log().is_err());
    }

    #[test]
    fn exp_log_round_trip_order_40() {
        // exp(log(1+z)) = 1+z
        let mut v = vec![rat_int(1), rat_int(1)];
        v.extend(std::iter::repeat(rat_int(0)).take(39));
        let s = TruncSeries::from_rat_coeffs(v);
        assert_eq!(s.log().unwrap().exp().unwrap(), s);
    }

    #[test]
    fn pow_rat_basics() {
        let s = ts(&[(1, 1), (2, 1), (1, 1), (0, 1), (0, 1)]); // (1+z)^2
        assert_eq!(s.pow_rat(&Rat::zero()).unwrap(), TruncSeries::one(4));
        let root = s.pow_rat(&rat(1, 2)).unwrap();
        assert_eq!(root.coeff(0), rat_int(1));
        assert_eq!(root.coeff(1), rat_int(1));
        assert_eq!(root.coeff(2), rat_int(0));
        assert_eq!(root.coeff(3), rat_int(0));
        assert!(TruncSeries::z(4).pow_rat(&rat(1, 2)).is_err());
    }

    #[test]
    fn pow_watch_reports_first_nonintegral() {
        // (1+z)^{1/2} = 1 + z/2 − z²/8 + … fails first at index 1
        let mut v = vec![rat_int(1), rat_int(1)];
        v.extend(std::iter::repeat(rat_int(0)).take(9));
        let s = TruncSeries::from_rat_coeffs(v);
        match s.pow_rat_watch(&rat(1, 2)).unwrap() {
            PowOutcome::Witness { index, value } => {
                assert_eq!(index, 1);
                assert_eq!(value, rat(1, 2));
            }
            PowOutcome::Full(_) => panic!("expected a witness"),
        }
    }

    #[test]
    fn substitution_examples() {
        let s = ts(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        let t = s.substitute_pth_power(3);
        assert_eq!(t.coeff(0), rat_int(1));
        assert_eq!(t.coeff(1), rat_int(0));
        assert_eq!(t.coeff(2), rat_int(0));
        assert_eq!(t.coeff(3), rat_int(1));
    }

    #[test]
    fn reversion_examples() {
        assert_eq!(TruncSeries::z(6).reversion().unwrap(), TruncSeries::z(6));
        // reversion(z + z²) = q − q² + 2q³ − 5q⁴ + 14q⁵ (Catalan, alternating)
        let mut v = vec![rat_int(0), rat_int(1), rat_int(1)];
        v.extend(std::iter::repeat(rat_int(0)).take(3));
        let s = TruncSeries::from_rat_coeffs(v);
        let t = s.reversion().unwrap();
        let expect = [0i64, 1, -1, 2, -5, 14];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(t.coeff(i), rat_int(*e), "index {i}");
        }
        // two-sided: s(t(q)) = q
        assert_eq!(s.compose(&t).unwrap(), TruncSeries::z(5));
        assert!(TruncSeries::one(4).reversion().is_err());
    }

    #[test]
    fn integrality_report_examples() {
        let pass = ts(&[(1, 1), (1, 1), (1, 1)]).integrality_report();
        assert!(pass.pass);
        let fail = ts(&[(1, 1), (1, 2)]).integrality_report();
        assert!(!fail.pass);
        assert_eq!(fail.witness_index, Some(1));
        assert!(fail.detail.contains('2'));
    }

    #[test]
    fn min_valuation_examples() {
        // (pz + p²z²) at p, from 1 → min 1 at index 1
        let s = ts(&[(0, 1), (3, 1), (9, 1)]);
        let (v, idx) = s.min_valuation_report(3, 1);
        assert_eq!(v, Valuation::Finite(1));
        assert_eq!(idx, Some(1));
        let z = TruncSeries::zero(5);
        let (v, idx) = z.min_valuation_report(3, 0);
        assert_eq!(v, Valuation::Infinite);
        assert_eq!(idx, None);
    }

    #[test]
    fn theta_operator_on_log_series() {
        // θ(log z) = 1: A = 0, B = 1
        let s = LogSeries::new(TruncSeries::zero(4), TruncSeries::one(4));
        let t = s.theta_op();
        assert_eq!(t.plain, TruncSeries::one(4));
        assert!(t.logpart.is_zero());
        // θ(z^m log z) = m z^m log z + z^m
        let zm = {
            let mut s = TruncSeries::zero(5);
            s.nums[3] = BigInt::one();
            s
        };
        let s = LogSeries::new(TruncSeries::zero(5), zm.clone());
        let t = s.theta_op();
        assert_eq!(t.plain, zm);
        assert_eq!(t.logpart, zm.theta_op());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let s = ts(&[(1, 1), (-7, 3), (22, 7), (0, 1)]);
        let j = serde_json::to_string(&s).unwrap();
        let back: TruncSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), j);
    }

    // -- property tests ----------------------------------------------------

    fn small_series(order: usize) -> impl Strategy<Value = TruncSeries> {
        proptest::collection::vec((-9i64..=9, 1i64..=4), order + 1)
            .prop_map(|v| TruncSeries::from_rat_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    fn unit_series(order: usize) -> impl Strategy<Value = TruncSeries> {
        small_series(order).prop_map(move |mut s| {
            let one = TruncSeries::one(order);
            s.nums[0] = BigInt::zero();
            one.add(&s)
        })
    }

    fn zero_constant_series(order: usize) -> impl Strategy<Value = TruncSeries> {
        small_series(order).prop_map(|mut s| {
            s.nums[0] = BigInt::zero();
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_axioms_order_10(a in small_series(10), b in small_series(10), c in small_series(10)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
        }

        #[test]
        fn exp_is_homomorphism_order_15(a in zero_constant_series(15), b in zero_constant_series(15)) {
            let lhs = a.add(&b).exp().unwrap();
            let rhs = a.exp().unwrap().mul(&b.exp().unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn log_is_homomorphism_order_15(a in unit_series(15), b in unit_series(15)) {
            let lhs = a.mul(&b).log().unwrap();
            let rhs = a.log().unwrap().add(&b.log().unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pow_adds_exponents_order_15(s in unit_series(15), n1 in -5i64..=5, d1 in 1i64..=3, n2 in -5i64..=5, d2 in 1i64..=3) {
            let e1 = rat(n1, d1);
            let e2 = rat(n2, d2);
            let lhs = s.pow_rat(&(e1.clone() + e2.clone())).unwrap();
            let rhs = s.pow_rat(&e1).unwrap().mul(&s.pow_rat(&e2).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pow_matches_exp_log_route(s in unit_series(12), n in -5i64..=5, d in 1i64..=3) {
            let e = rat(n, d);
            let via_recurrence = s.pow_rat(&e).unwrap();
            let via_exp_log = s.log().unwrap().scale(&e).exp().unwrap();
            prop_assert_eq!(via_recurrence, via_exp_log);
        }

        #[test]
        fn reversion_round_trip_order_12(s in zero_constant_series(12)) {
            let mut s = s;
            s.nums[1] = s.den.clone(); // force unit linear coefficient
            let t = s.reversion().unwrap();
            prop_assert_eq!(s.compose(&t).unwrap(), TruncSeries::z(12));
            prop_assert_eq!(t.compose(&s).unwrap(), TruncSeries::z(12));
        }

        #[test]
        fn substitution_is_ring_hom_order_12(a in small_series(12), b in small_series(12), p in 2usize..=3) {
            prop_assert_eq!(
                a.mul(&b).substitute_pth_power(p),
                a.substitute_pth_power(p).mul(&b.substitute_pth_power(p))
            );
            prop_assert_eq!(
                a.add(&b).substitute_pth_power(p),
                a.substitute_pth_power(p).add(&b.substitute_pth_power(p))
            );
        }
    }
}
