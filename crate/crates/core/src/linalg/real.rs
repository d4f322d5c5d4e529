//! Rigorous real enclosures: rational intervals with outward dyadic rounding,
//! a fixed-point natural logarithm with an explicit error bound, and real root
//! isolation by Sturm sequences.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::RatPoly;

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn pow2(bits: u64) -> BigInt {
    BigInt::one() << bits
}

fn floor_dyadic(x: &BigRational, bits: u64) -> BigRational {
    let s = pow2(bits);
    let n = (x * BigRational::from_integer(s.clone())).floor().to_integer();
    BigRational::new(n, s)
}

fn ceil_dyadic(x: &BigRational, bits: u64) -> BigRational {
    let s = pow2(bits);
    let n = (x * BigRational::from_integer(s.clone())).ceil().to_integer();
    BigRational::new(n, s)
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn zero() -> Self {
        Interval::point(BigRational::zero())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn radius(&self) -> BigRational {
        self.width() / BigRational::from_integer(BigInt::from(2))
    }

    /// Widens outward to dyadic endpoints with `bits` fractional bits.
    pub fn round_out(&self, bits: u64) -> Self {
        Interval {
            lo: floor_dyadic(&self.lo, bits),
            hi: ceil_dyadic(&self.hi, bits),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        self.mul(&Interval::point(k.clone()))
    }

    pub fn mid_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn radius_f64(&self) -> f64 {
        // Round the bound up so that it stays an upper bound in f64.
        let r = self.radius().to_f64().unwrap_or(f64::INFINITY);
        if r == 0.0 {
            0.0
        } else {
            r * (1.0 + 4.0 * f64::EPSILON)
        }
    }

    /// Midpoint in decimal with as many places as the radius supports (at most `max_places`).
    pub fn decimal(&self, max_places: usize) -> String {
        let r = self.radius();
        let mut places = max_places;
        if !r.is_zero() {
            let mut scale = BigRational::one();
            let ten = BigRational::from_integer(BigInt::from(10));
            let mut p = 0usize;
            while p < max_places && &r * &scale * &ten < BigRational::one() {
                scale *= &ten;
                p += 1;
            }
            places = p;
        }
        rational_to_decimal(&self.midpoint(), places)
    }
}

/// Decimal expansion of `q` rounded to `places` digits after the point.
pub fn rational_to_decimal(q: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10).pow(places as u32);
    let scaled = (q * BigRational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let body = if places == 0 {
        digits
    } else {
        let padded = format!("{:0>width$}", digits, width = places + 1);
        let (a, b) = padded.split_at(padded.len() - places);
        format!("{a}.{b}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Fixed-point `2 atanh(z)` for `|z| <= 1/3` at scale `2^w`, with an upper
/// bound on the error in units of `2^-w`.
fn two_atanh_fixed(z: &BigRational, w: u64) -> (BigInt, u64) {
    let s = BigRational::from_integer(pow2(w));
    let zf = (z * &s).round().to_integer();
    let z2 = (&zf * &zf) >> w;
    let mut power = zf;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut j = 0u64;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * j + 1);
        power = (&power * &z2) >> w;
        j += 1;
        terms += 1;
    }
    // Each term is off by at most 6 ulps, the tail by at most 2.
    (sum * 2, 2 * (6 * terms + 2))
}

/// Enclosure of `ln x` for rational `x > 0`, with radius below `2^-bits`
/// (up to a factor depending on the binary exponent of `x`).
pub fn ln_interval(x: &BigRational, bits: u64) -> Interval {
    assert!(x.is_positive(), "logarithm of a nonpositive number");
    if x.is_one() {
        return Interval::zero();
    }
    let w = bits + 32;
    let k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let m = if k >= 0 {
        x / BigRational::from_integer(pow2(k as u64))
    } else {
        x * BigRational::from_integer(pow2((-k) as u64))
    };
    let one = BigRational::one();
    let z = (&m - &one) / (&m + &one);
    let (lm, em) = two_atanh_fixed(&z, w);
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let (l2, e2) = two_atanh_fixed(&third, w);
    let v = lm + &l2 * BigInt::from(k);
    let err = BigInt::from(em) + BigInt::from(e2) * BigInt::from(k.unsigned_abs());
    let s = pow2(w);
    Interval {
        lo: BigRational::new(&v - &err, s.clone()),
        hi: BigRational::new(&v + &err, s),
    }
}

fn sign_of(x: &BigRational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence(p: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = sign_of(&p.eval(x));
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Cauchy bound: all real roots lie in `(-B, B)`.
fn root_bound(p: &RatPoly) -> BigRational {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let n = p.degree().unwrap();
    let m = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    (m + BigRational::one()).ceil() + BigRational::one()
}

/// Isolating intervals of width at most `2^-bits` for the real roots of a
/// squarefree polynomial, in increasing order. Rational roots found on the
/// way are returned as point intervals.
pub fn isolate_real_roots(p: &RatPoly, bits: u64) -> Vec<Interval> {
    if p.degree().is_none_or(|d| d == 0) {
        return Vec::new();
    }
    let seq = sturm_sequence(p);
    let b = root_bound(p);
    let mut out = Vec::new();
    // Work list of half-open (lo, hi] intervals; neither endpoint is a root.
    let mut stack = vec![(-b.clone(), b)];
    let two = BigRational::from_integer(BigInt::from(2));
    let eps = BigRational::new(BigInt::one(), pow2(bits));
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(refine_root(p, lo, hi, &eps));
            continue;
        }
        let mid = (&lo + &hi) / &two;
        if p.eval(&mid).is_zero() {
            out.push(Interval::point(mid.clone()));
            let off = (&hi - &lo) / BigRational::from_integer(BigInt::from(1024));
            // Nudge both halves off the rational root; retry with a tiny gap.
            let mut gap = off;
            loop {
                let l = &mid - &gap;
                let r = &mid + &gap;
                if !p.eval(&l).is_zero()
                    && !p.eval(&r).is_zero()
                    && sign_changes(&seq, &l) - sign_changes(&seq, &r) == 1
                {
                    stack.push((r, hi));
                    stack.push((lo, l));
                    break;
                }
                gap /= &two;
            }
        } else {
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

fn refine_root(p: &RatPoly, mut lo: BigRational, mut hi: BigRational, eps: &BigRational) -> Interval {
    let two = BigRational::from_integer(BigInt::from(2));
    let slo = sign_of(&p.eval(&lo));
    while &(&hi - &lo) > eps {
        let mid = (&lo + &hi) / &two;
        let s = sign_of(&p.eval(&mid));
        if s == 0 {
            return Interval::point(mid);
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Interval { lo, hi }
}

/// Interval Horner evaluation with outward rounding to `bits` fractional bits.
pub fn eval_interval(p: &RatPoly, x: &Interval, bits: u64) -> Interval {
    let mut acc = Interval::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&Interval::point(c.clone())).round_out(bits);
    }
    acc
}

/// Smallest integer `k >= 0` with `2^-k <= x`, used for bit budgets.
pub fn bits_below(x: &BigRational) -> u64 {
    if !x.is_positive() {
        return 0;
    }
    let mut k = 0u64;
    let mut t = x.clone();
    while t < BigRational::one() {
        t *= BigRational::from_integer(BigInt::from(2));
        k += 1;
    }
    k
}
