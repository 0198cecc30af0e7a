//! Exact rationals, p-adic valuations, factorial/harmonic primitives, and
//! the p-adic gamma function on positive integers.
//!
//! Everything downstream consumes these primitives. Rationals are always
//! stored reduced (reduction happens on construction), so the valuation of a
//! quotient is a two-call composition. The valuation of 0 is a distinguished
//! +∞ value, not an error: congruence checks "x ∈ p^s Z_p" must accept x = 0.

use std::fmt;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of everything: arbitrary-precision reduced rationals.
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// A p-adic valuation: a signed integer, or +∞ for the valuation of 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            Ok(Valuation::Infinite)
        } else {
            s.parse::<i64>()
                .map(Valuation::Finite)
                .map_err(serde::de::Error::custom)
        }
    }
}

/// Deterministic trial-division primality, adequate for the desk-scale
/// parameters used throughout.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Eratosthenes sieve; returns all primes ≤ `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::param(format!("p = {p} is not prime")))
    }
}

/// Largest e with p^e | n, or +∞ for n = 0.
pub fn vp_int(n: &BigInt, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    Ok(vp_bigint(n, p))
}

/// Valuation of a bigint with p already validated prime.
pub(crate) fn vp_bigint(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        m = q;
    }
}

pub(crate) fn vp_u64(mut n: u64, p: u64) -> i64 {
    debug_assert!(n > 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// vp of a reduced rational: vp(num) − vp(den); +∞ for 0.
pub fn vp_rat(q: &Rat, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    if q.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let vn = vp_bigint(q.numer(), p).finite().unwrap();
    let vd = vp_bigint(q.denom(), p).finite().unwrap();
    Ok(Valuation::Finite(vn - vd))
}

/// Membership x ∈ c·Z_p for nonzero rational c, i.e. vp(x) ≥ vp(c).
pub fn in_lattice(x: &Rat, c: &Rat, p: u64) -> Result<bool> {
    if c.is_zero() {
        return Err(Error::param("lattice generator c must be nonzero"));
    }
    Ok(vp_rat(x, p)? >= vp_rat(c, p)?)
}

/// Legendre's formula: vp(n!) = Σ_{k≥1} ⌊n/p^k⌋, computed without forming n!.
pub fn legendre_vp_factorial(n: u64, p: u64) -> Valuation {
    assert!(is_prime(p), "legendre_vp_factorial needs a prime p");
    let mut total = 0i64;
    let mut q = n / p;
    while q > 0 {
        total += q as i64;
        q /= p;
    }
    Valuation::Finite(total)
}

// ---------------------------------------------------------------------------
// factorial cache

static FACTORIALS: Mutex<Vec<BigInt>> = Mutex::new(Vec::new());

/// n!, served from a process-global cache.
pub fn factorial(n: u64) -> BigInt {
    let n = n as usize;
    let mut cache = FACTORIALS.lock().unwrap();
    if cache.is_empty() {
        cache.push(BigInt::one());
    }
    while cache.len() <= n {
        let next = cache.last().unwrap() * BigInt::from(cache.len());
        cache.push(next);
    }
    cache[n].clone()
}

/// Product of the integers in [lo, hi] (1 for an empty range).
pub fn range_product(lo: u64, hi: u64) -> BigInt {
    if lo > hi {
        return BigInt::one();
    }
    if hi - lo < 8 {
        let mut acc = BigInt::one();
        for k in lo..=hi {
            acc *= BigInt::from(k);
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

fn coprime_range_product(lo: u64, hi: u64, p: u64) -> BigInt {
    if lo > hi {
        return BigInt::one();
    }
    if hi - lo < 8 {
        let mut acc = BigInt::one();
        for k in lo..=hi {
            if k % p != 0 {
                acc *= BigInt::from(k);
            }
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    coprime_range_product(lo, mid, p) * coprime_range_product(mid + 1, hi, p)
}

/// p-adic gamma on positive integers: Γ_p(n) = (−1)^n ∏_{k<n, p∤k} k.
/// Its extension beyond positive integer arguments is out of scope.
pub fn gamma_p(n: u64, p: u64) -> BigInt {
    assert!(n >= 1, "gamma_p is defined on integers n >= 1");
    assert!(is_prime(p), "gamma_p needs a prime p");
    let prod = coprime_range_product(1, n - 1, p);
    if n % 2 == 1 {
        -prod
    } else {
        prod
    }
}

// ---------------------------------------------------------------------------
// harmonic numbers
//
// The prefix cache stores H_n unreduced as nums[n]/dens[n] with
// dens[n] = lcm(1..n). Valuations read straight off this representation
// (they are representation independent); full reduction happens only when a
// caller asks for the rational value itself. The cache is grown on demand up
// to a fixed cap; larger indices fall back to balanced summation.

const HARMONIC_CACHE_CAP: usize = 10_000;

struct HarmonicPrefix {
    nums: Vec<BigInt>,
    dens: Vec<BigInt>,
}

static HARMONIC: Mutex<HarmonicPrefix> = Mutex::new(HarmonicPrefix {
    nums: Vec::new(),
    dens: Vec::new(),
});

impl HarmonicPrefix {
    fn ensure(&mut self, n: usize) {
        if self.nums.is_empty() {
            self.nums.push(BigInt::zero());
            self.dens.push(BigInt::one());
        }
        while self.nums.len() <= n {
            let k = self.nums.len() as u64;
            // lcm(1..k) gains a factor p exactly when k is a prime power p^e.
            let mut num = self.nums.last().unwrap().clone();
            let mut den = self.dens.last().unwrap().clone();
            if let Some(p) = prime_power_base(k) {
                num *= BigInt::from(p);
                den *= BigInt::from(p);
            }
            num += &den / BigInt::from(k);
            self.nums.push(num);
            self.dens.push(den);
        }
    }
}

/// If k = p^e for a prime p and e ≥ 1, returns p.
fn prime_power_base(k: u64) -> Option<u64> {
    debug_assert!(k >= 1);
    if k == 1 {
        return None;
    }
    let mut m = k;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            return if m == 1 { Some(d) } else { None };
        }
        d += 1;
    }
    Some(m)
}

/// Σ_{j=lo..hi} 1/j by balanced splitting, reducing at each merge.
fn unit_fraction_sum(lo: u64, hi: u64) -> Rat {
    if lo > hi {
        return Rat::zero();
    }
    if hi - lo < 8 {
        let mut acc = Rat::zero();
        for j in lo..=hi {
            acc += Rat::new(BigInt::one(), BigInt::from(j));
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    unit_fraction_sum(lo, mid) + unit_fraction_sum(mid + 1, hi)
}

/// The n-th harmonic number Σ_{j=1..n} 1/j, exactly; H_0 = 0.
pub fn harmonic(n: u64) -> Rat {
    if (n as usize) <= HARMONIC_CACHE_CAP {
        let (num, den) = {
            let mut cache = HARMONIC.lock().unwrap();
            cache.ensure(n as usize);
            (cache.nums[n as usize].clone(), cache.dens[n as usize].clone())
        };
        Rat::new(num, den)
    } else {
        unit_fraction_sum(1, n)
    }
}

/// H_b − H_a for a ≤ b, summing only the window (a, b].
pub fn harmonic_diff(a: u64, b: u64) -> Rat {
    assert!(a <= b, "harmonic_diff needs a <= b");
    unit_fraction_sum(a + 1, b)
}

/// Exact v_p(H_n − shift) for shift ∈ {0, 1}, off the unreduced prefix when
/// the index is in cache range.
pub fn vp_harmonic(p: u64, n: u64, shift: u8) -> Valuation {
    assert!(is_prime(p));
    assert!(shift <= 1);
    if (n as usize) <= HARMONIC_CACHE_CAP {
        let mut cache = HARMONIC.lock().unwrap();
        cache.ensure(n as usize);
        let num = &cache.nums[n as usize];
        let den = &cache.dens[n as usize];
        let target = if shift == 0 { num.clone() } else { num - den };
        if target.is_zero() {
            return Valuation::Infinite;
        }
        // v_p(lcm(1..n)) = floor(log_p n), no bigint work needed.
        let mut vden = 0i64;
        let mut q = n / p;
        while q > 0 {
            vden += 1;
            q /= p;
        }
        let vnum = vp_bigint(&target, p).finite().unwrap();
        Valuation::Finite(vnum - vden)
    } else {
        let h = harmonic(n) - Rat::from_integer(BigInt::from(shift));
        vp_rat(&h, p).unwrap()
    }
}

/// Shifted harmonic H(x, m) = Σ_{n=0..m−1} 1/(x+n); the empty sum is 0.
pub fn harmonic_shifted(x: &Rat, m: u64) -> Result<Rat> {
    if !x.is_positive() {
        return Err(Error::param("harmonic_shifted needs x > 0"));
    }
    let mut acc = Rat::zero();
    let mut term = x.clone();
    for _ in 0..m {
        acc += term.recip();
        term += Rat::one();
    }
    Ok(acc)
}

/// Power harmonic H^{(α)}_n = Σ_{j=1..n} 1/j^α.
pub fn harmonic_power(n: u64, alpha: u32) -> Rat {
    assert!(alpha >= 1, "harmonic_power needs alpha >= 1");
    if alpha == 1 {
        return harmonic(n);
    }
    let mut acc = Rat::zero();
    for j in 1..=n {
        let jp = BigInt::from(j).pow(alpha);
        acc += Rat::new(BigInt::one(), jp);
    }
    acc
}

/// Θ_L: the denominator of H_L as a reduced fraction, which equals
/// L!/gcd(L!, L!·H_L) and ∏_{p≤L} p^{−min(0, v_p(H_L))}.
pub fn theta(l: u64) -> BigInt {
    assert!(l >= 1, "theta needs L >= 1");
    harmonic(l).denom().clone()
}

/// The gcd form of Θ_L, used as an independent route in tests.
pub fn theta_by_gcd(l: u64) -> BigInt {
    let lf = factorial(l);
    let h = harmonic(l);
    let lfh = (&lf * h.numer()) / h.denom();
    &lf / lf.gcd(&lfh)
}

/// The prime-product form of Θ_L, the other independent route.
pub fn theta_by_product(l: u64) -> BigInt {
    let mut t = BigInt::one();
    for p in primes_up_to(l) {
        if let Valuation::Finite(v) = vp_harmonic(p, l, 0) {
            if v < 0 {
                t *= BigInt::from(p).pow((-v) as u32);
            }
        }
    }
    t
}

pub fn big_to_u32(n: &BigInt) -> Option<u32> {
    n.to_u32()
}

/// Parse a decimal string into a BigInt (used by checkpoint/JSON readers).
pub fn bigint_from_decimal(s: &str) -> Result<BigInt> {
    BigInt::parse_bytes(s.as_bytes(), 10)
        .ok_or_else(|| Error::param(format!("not a decimal integer: {s:?}")))
}

pub fn biguint_from_decimal(s: &str) -> Result<BigUint> {
    BigUint::parse_bytes(s.as_bytes(), 10)
        .ok_or_else(|| Error::param(format!("not a decimal natural: {s:?}")))
}

/// Sign-aware decimal rendering shared by the emitters.
pub fn bigint_to_decimal(n: &BigInt) -> String {
    n.to_str_radix(10)
}

pub fn rat_is_integer(q: &Rat) -> bool {
    q.denom().is_one()
}

pub fn rat_sign(q: &Rat) -> Sign {
    q.numer().sign()
}
