//! Certified real arithmetic: midpoint-radius balls over dyadic rationals.
//!
//! A [`CertReal`] encloses an unknown real in `[mid - rad, mid + rad]`. Every
//! operation widens the radius by the propagated input radii plus its own
//! rounding error, so enclosures are sound by construction. Comparisons
//! return a three-way [`BoundVerdict`]; callers that need a decision wrap the
//! computation in [`refine`], which doubles the working precision until the
//! verdict is decided or the cap is reached.
//!
//! Inputs enter as decimal or rational strings (see [`parse_real`]) and are
//! exact rationals from then on; nothing in this crate round-trips through
//! machine floats.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Outcome of a certified comparison `x <= bound`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub enum BoundVerdict {
    /// Certified `x <= bound`.
    Le,
    /// Certified `x > bound`.
    Gt,
    /// The enclosure straddles the bound at the current precision.
    Undecided,
}

/// Adaptive precision schedule: start, then double until `cap`.
#[derive(Clone, Copy, Debug)]
pub struct Precision {
    pub start: u32,
    pub cap: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start: 128, cap: 65536 }
    }
}

impl Precision {
    pub fn new(start: u32, cap: u32) -> Self {
        Precision { start: start.max(8), cap: cap.max(start) }
    }
}

/// Runs `f` at increasing precision until it returns `Some`.
pub fn refine<T>(p: Precision, context: &str, mut f: impl FnMut(u32) -> Option<T>) -> Result<T> {
    let mut prec = p.start.max(8);
    loop {
        if let Some(t) = f(prec) {
            return Ok(t);
        }
        if prec >= p.cap {
            return Err(Error::PrecisionExhausted { cap: p.cap, context: context.to_string() });
        }
        prec = prec.saturating_mul(2).min(p.cap);
    }
}

/// Radii carry few significant bits; they only need a sound order of
/// magnitude.
const RAD_PREC: u32 = 32;
/// Extra working bits inside elementary-function kernels.
const GUARD: u32 = 16;

/// Midpoint-radius enclosure of a real number.
#[derive(Clone, Debug)]
pub struct CertReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl CertReal {
    // ---------- constructors ----------

    pub fn exact(mid: Dyadic, prec: u32) -> Self {
        CertReal { mid, rad: Dyadic::zero(), prec }
    }

    pub fn zero(prec: u32) -> Self {
        CertReal::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        CertReal::exact(Dyadic::one(), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        CertReal::exact(Dyadic::from_bigint(n.clone()), prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        CertReal::exact(Dyadic::from_i64(n), prec)
    }

    /// Encloses an exact rational. Dyadic rationals are represented exactly
    /// (radius zero); otherwise the midpoint is rounded to `prec` bits and
    /// the radius is a half-ulp, so the width is at most `2^(1-prec) * |v|`.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let num = r.numer();
        let den = r.denom();
        if num.is_zero() {
            return CertReal::zero(prec);
        }
        // Reduced denominator a power of two <=> exactly representable.
        let den_u = den.magnitude();
        if den_u.count_ones() == 1 {
            let k = den_u.trailing_zeros().unwrap_or(0) as i64;
            return CertReal::exact(Dyadic::new(num.clone(), -k), prec);
        }
        let nb = num.magnitude().bits() as i64;
        let db = den_u.bits() as i64;
        // Scale so the quotient has ~prec+2 significant bits.
        let s = (prec as i64 + 2 + db - nb).max(0);
        let scaled: BigInt = num << s as u64;
        // Round to nearest: floor((2*scaled + den) / (2*den)) on magnitudes.
        let neg = scaled.is_negative();
        let mag = scaled.magnitude().clone();
        let den2: BigUint = den_u << 1u32;
        let q = ((&mag << 1u32) + den_u) / &den2;
        let mid_mag = BigInt::from(q);
        let mid = Dyadic::new(if neg { -mid_mag } else { mid_mag }, -s);
        let rad = Dyadic::power_of_two(-s - 1);
        CertReal { mid, rad, prec }.finish(prec)
    }

    /// Ball `[lo, hi]` from exact dyadic endpoints.
    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo.cmp(&hi) != Ordering::Greater);
        let gap_ok = match (lo.mag_exp(), hi.mag_exp()) {
            (Some(pl), Some(ph)) => (pl - ph).abs() <= prec as i64 + 64,
            _ => true,
        };
        if gap_ok {
            let two_mid = lo.add(&hi);
            let two_rad = hi.sub(&lo);
            return CertReal { mid: two_mid.mul_pow2(-1), rad: two_rad.mul_pow2(-1), prec }
                .finish(prec);
        }
        // Endpoints at wildly different scales: cover with a crude ball
        // instead of aligning astronomically distant exponents.
        if !lo.is_negative() {
            let half = hi.mul_pow2(-1);
            CertReal { mid: half.clone(), rad: half, prec }.finish(prec)
        } else if !hi.is_positive() {
            let half = lo.mul_pow2(-1);
            CertReal { mid: half.clone(), rad: half.neg(), prec }.finish(prec)
        } else {
            let r = lo.abs().max(&hi.abs());
            CertReal { mid: Dyadic::zero(), rad: r, prec }.finish(prec)
        }
    }

    // ---------- accessors ----------

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn hi(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// `Some(sign)` when the enclosure excludes zero (or is exactly zero).
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_exact() && self.mid.is_zero() {
            return Some(Ordering::Equal);
        }
        if self.lo().is_positive() {
            return Some(Ordering::Greater);
        }
        if self.hi().is_negative() {
            return Some(Ordering::Less);
        }
        None
    }

    /// Rounds the midpoint to `prec` bits (folding the rounding error into
    /// the radius) and compresses the radius. Restores the representation
    /// invariant after exact endpoint arithmetic.
    fn finish(mut self, prec: u32) -> Self {
        self.prec = prec;
        let (m, inexact) = self.mid.round_to_prec(prec, Round::Nearest);
        if inexact {
            // Nearest-rounding error is at most one ulp of the result.
            let ulp = Dyadic::power_of_two(m.exponent());
            self.rad = rad_add(&self.rad, &ulp);
        }
        self.mid = m;
        if !self.rad.is_zero() {
            let (r, _) = self.rad.round_to_prec(RAD_PREC, Round::Ceil);
            self.rad = r;
            // Keep the radius within reach of the midpoint's ulp so endpoint
            // extraction never aligns astronomically distant exponents. A
            // radius more than 64 bits below the last midpoint bit carries
            // no information; rounding it up there only widens the ball.
            if !self.mid.is_zero() {
                let floor_exp = self.mid.exponent() - 64;
                if self.rad.mag_exp().unwrap() < floor_exp {
                    self.rad = Dyadic::power_of_two(floor_exp);
                }
            }
        }
        debug_assert!(!self.rad.is_negative());
        self
    }

    /// Absorbs the value into a pure radius bound around zero. Used to drop
    /// negligibly small terms without exact (possibly huge) alignment.
    fn mag_as_rad(&self) -> Dyadic {
        rad_add(&self.mid.abs(), &self.rad)
    }

    // ---------- ring operations ----------

    pub fn neg(&self) -> Self {
        CertReal { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn add(&self, other: &CertReal) -> Self {
        let prec = self.prec.max(other.prec);
        // Avoid huge alignment shifts: if one operand is negligibly small
        // relative to the other, fold it into the radius.
        match (self.mid.mag_exp().or(self.rad.mag_exp()), other.mid.mag_exp().or(other.rad.mag_exp())) {
            (Some(pa), Some(pb)) if pa.saturating_sub(pb) > prec as i64 + 64 => {
                let mut out = self.clone();
                out.rad = rad_add(&out.rad, &other.mag_as_rad());
                return out.finish(prec);
            }
            (Some(pa), Some(pb)) if pb.saturating_sub(pa) > prec as i64 + 64 => {
                let mut out = other.clone();
                out.rad = rad_add(&out.rad, &self.mag_as_rad());
                return out.finish(prec);
            }
            _ => {}
        }
        CertReal {
            mid: self.mid.add(&other.mid),
            rad: rad_add(&self.rad, &other.rad),
            prec,
        }
        .finish(prec)
    }

    pub fn sub(&self, other: &CertReal) -> Self {
        self.add(&other.neg())
    }

    pub fn add_i64(&self, n: i64) -> Self {
        self.add(&CertReal::from_i64(n, self.prec))
    }

    pub fn mul(&self, other: &CertReal) -> Self {
        let prec = self.prec.max(other.prec);
        // |x*y - mx*my| <= |mx|*ry + |my|*rx + rx*ry
        let mid = self.mid.mul(&other.mid);
        let rad = rad_add(
            &rad_add(&self.mid.abs().mul(&other.rad), &other.mid.abs().mul(&self.rad)),
            &self.rad.mul(&other.rad),
        );
        CertReal { mid, rad, prec }.finish(prec)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let prec = self.prec;
        CertReal { mid: self.mid.mul_i64(k), rad: self.rad.mul_i64(k.abs()), prec }.finish(prec)
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        let kd = Dyadic::from_bigint(k.clone());
        let prec = self.prec;
        CertReal { mid: self.mid.mul(&kd), rad: self.rad.mul(&kd.abs()), prec }.finish(prec)
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        CertReal { mid: self.mid.mul_pow2(k), rad: self.rad.mul_pow2(k), prec: self.prec }
    }

    /// Interval absolute value.
    pub fn abs(&self) -> Self {
        match self.sign() {
            Some(Ordering::Less) => self.neg(),
            Some(_) => self.clone(),
            None => {
                // Straddles zero: [0, max(|lo|, |hi|)].
                let hi = self.lo().abs().max(&self.hi().abs());
                CertReal::from_endpoints(Dyadic::zero(), hi, self.prec)
            }
        }
    }

    // ---------- division ----------

    /// Directed dyadic quotient `a / b` with ~`prec` significant bits.
    fn div_dyadic_dir(a: &Dyadic, b: &Dyadic, prec: u32, toward_pos_inf: bool) -> Dyadic {
        assert!(!b.is_zero(), "division by zero dyadic");
        if a.is_zero() {
            return Dyadic::zero();
        }
        let neg = a.is_negative() != b.is_negative();
        let am = a.mantissa().magnitude();
        let bm = b.mantissa().magnitude();
        let s = (prec as i64 + 2 + bm.bits() as i64 - am.bits() as i64).max(0);
        let scaled: BigUint = am << s as u64;
        let (q, r) = scaled.div_rem(bm);
        // Round magnitude: down unless direction requires bumping.
        let bump = !r.is_zero() && (toward_pos_inf != neg);
        let qm = if bump { q + BigUint::one() } else { q };
        let exp = a
            .exponent()
            .checked_sub(b.exponent())
            .and_then(|e| e.checked_sub(s))
            .expect("dyadic exponent overflow");
        let mag = BigInt::from(qm);
        Dyadic::new(if neg { -mag } else { mag }, exp)
    }

    /// Interval division; the divisor must exclude zero.
    pub fn div(&self, other: &CertReal) -> Result<Self> {
        let prec = self.prec.max(other.prec);
        let (blo, bhi) = (other.lo(), other.hi());
        if !(blo.is_positive() || bhi.is_negative()) {
            return Err(Error::Domain("division by an interval containing zero".into()));
        }
        let (alo, ahi) = (self.lo(), self.hi());
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&alo, &ahi] {
            for b in [&blo, &bhi] {
                let ql = Self::div_dyadic_dir(a, b, prec + 2, false);
                let qh = Self::div_dyadic_dir(a, b, prec + 2, true);
                lo = Some(match lo {
                    None => ql.clone(),
                    Some(cur) => cur.min(&ql),
                });
                hi = Some(match hi {
                    None => qh.clone(),
                    Some(cur) => cur.max(&qh),
                });
            }
        }
        Ok(CertReal::from_endpoints(lo.unwrap(), hi.unwrap(), prec))
    }

    pub fn recip(&self) -> Result<Self> {
        CertReal::one(self.prec).div(self)
    }

    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0);
        let prec = self.prec;
        let kd = Dyadic::from_i64(k);
        let lo_a = self.lo();
        let hi_a = self.hi();
        let q1 = Self::div_dyadic_dir(&lo_a, &kd, prec + 2, false);
        let q2 = Self::div_dyadic_dir(&lo_a, &kd, prec + 2, true);
        let q3 = Self::div_dyadic_dir(&hi_a, &kd, prec + 2, false);
        let q4 = Self::div_dyadic_dir(&hi_a, &kd, prec + 2, true);
        let lo = q1.min(&q2).min(&q3.min(&q4));
        let hi = q1.max(&q2).max(&q3.max(&q4));
        CertReal::from_endpoints(lo, hi, prec)
    }

    // ---------- roots ----------

    /// Directed `v^(1/d)` for `v >= 0` via exact integer d-th roots.
    /// Returns an exact result when `v` is a perfect d-th power.
    fn root_dyadic_dir(v: &Dyadic, d: u32, prec: u32, toward_pos_inf: bool) -> Dyadic {
        assert!(d >= 1);
        assert!(!v.is_negative());
        if v.is_zero() {
            return Dyadic::zero();
        }
        if d == 1 {
            return v.clone();
        }
        let m = v.mantissa().magnitude();
        let e = v.exponent();
        let dd = d as i64;
        // Choose k with e + d*k >= 0 and enough scaled bits for prec+4
        // significant root bits.
        let need_bits = dd * (prec as i64 + 4);
        let k1 = ((-e) as f64 / dd as f64).ceil() as i64;
        let k2 = ((need_bits - m.bits() as i64 - e) as f64 / dd as f64).ceil() as i64;
        let k = k1.max(k2).max(0);
        let shift = e + dd * k;
        debug_assert!(shift >= 0);
        let scaled: BigUint = m << shift as u64;
        let r = scaled.nth_root(d);
        let exact = num_traits::Pow::pow(&r, d) == scaled;
        let rm = if exact || !toward_pos_inf { r } else { r + BigUint::one() };
        Dyadic::new(BigInt::from(rm), -k)
    }

    /// `x^(1/d)` for a certified non-negative `x`. Relative enclosure width
    /// is at most `2^(4-prec)`; exact inputs that are perfect d-th powers
    /// come back exact.
    pub fn root(&self, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("zeroth root".into()));
        }
        let lo = self.lo();
        if lo.is_negative() {
            return Err(Error::Domain("root of an interval reaching below zero".into()));
        }
        let prec = self.prec;
        let rlo = Self::root_dyadic_dir(&lo, d, prec, false);
        if self.is_exact() {
            let rhi = Self::root_dyadic_dir(&lo, d, prec, true);
            if rlo == rhi {
                return Ok(CertReal::exact(rlo, prec));
            }
            return Ok(CertReal::from_endpoints(rlo, rhi, prec));
        }
        let rhi = Self::root_dyadic_dir(&self.hi(), d, prec, true);
        Ok(CertReal::from_endpoints(rlo, rhi, prec))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.root(2)
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(CertReal::one(self.prec));
        }
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc: Option<CertReal> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        Ok(acc.unwrap())
    }

    // ---------- elementary functions ----------

    /// True when the radius is large enough that series kernels should work
    /// on the two exact endpoints separately (all kernels here are monotone).
    fn is_wide(&self) -> bool {
        !self.rad.is_zero() && self.rad.mag_exp().is_some_and(|p| p > -8)
    }

    /// Applies a monotone increasing map by evaluating exact endpoints.
    fn map_monotone(&self, f: impl Fn(&CertReal) -> Result<CertReal>) -> Result<CertReal> {
        let prec = self.prec;
        let lo = f(&CertReal::exact(self.lo(), prec))?;
        let hi = f(&CertReal::exact(self.hi(), prec))?;
        Ok(CertReal::from_endpoints(lo.lo(), hi.hi(), prec))
    }

    /// Natural log; requires a certified positive argument.
    pub fn ln(&self) -> Result<Self> {
        if !self.lo().is_positive() {
            return Err(Error::Domain("ln of an interval reaching zero".into()));
        }
        if self.is_wide() {
            return self.map_monotone(|x| x.ln());
        }
        let prec = self.prec;
        let wp = prec + GUARD;
        // Normalize so the midpoint sits in [3/4, 3/2).
        let p = self.mid.mag_exp().expect("positive value has a magnitude");
        let three_quarters = Dyadic::new(BigInt::from(3), -2);
        let mut t = p;
        let y = self.mul_pow2(-t);
        let y = if y.mid().cmp(&three_quarters) == Ordering::Less {
            t -= 1;
            self.mul_pow2(-t)
        } else {
            y
        };
        let ln_y = ln_near_one(&y.with_prec(wp))?;
        let result = if t == 0 {
            ln_y
        } else {
            ln_y.add(&ln2(wp).mul_i64(t))
        };
        Ok(result.finish(prec))
    }

    pub fn log2(&self) -> Result<Self> {
        let prec = self.prec;
        let wp = prec + GUARD;
        let l = self.with_prec(wp).ln()?;
        let out = l.div(&ln2(wp))?;
        Ok(out.finish(prec))
    }

    /// `e^x`. The argument's integer multiple of ln 2 becomes an exact
    /// exponent shift, so the magnitude may be astronomically large or small
    /// as long as the shift fits an `i64`.
    pub fn exp(&self) -> Result<Self> {
        if let Some(p) = self.mag_as_rad().mag_exp() {
            if p > 51 {
                return Err(Error::CapExceeded {
                    what: "exp argument magnitude",
                    need: format!("2^{p}"),
                    cap: 1u64 << 51,
                });
            }
        }
        if self.is_wide() {
            return self.map_monotone(|x| x.exp());
        }
        let prec = self.prec;
        let wp = prec + GUARD;
        let x = self.with_prec(wp);
        // n = round(x / ln 2); any nearby integer works.
        let n = {
            let q = x.div(&ln2(wp))?;
            let (half_up, _) = q.mid().add(&Dyadic::power_of_two(-1)).round_to_prec(64, Round::Floor);
            dyadic_floor_bigint(&half_up)?
        };
        let n_i64 = n.to_i64().ok_or(Error::CapExceeded {
            what: "exp exponent",
            need: n.to_string(),
            cap: i64::MAX as u64,
        })?;
        let w = x.sub(&ln2(wp).mul_bigint(&n));
        let core = exp_series(&w, wp)?;
        Ok(core.mul_pow2(n_i64).finish(prec))
    }

    /// `e^x - 1`, computed without cancellation for small `x`.
    pub fn expm1(&self) -> Result<Self> {
        let prec = self.prec;
        let wp = prec + GUARD;
        let half = Dyadic::power_of_two(-1);
        if self.mag_as_rad().cmp(&half) != Ordering::Greater {
            let s = expm1_series(&self.with_prec(wp), wp)?;
            return Ok(s.finish(prec));
        }
        Ok(self.exp()?.add_i64(-1).finish(prec))
    }

    /// `2^x` with an exact fast path for integer `x`.
    pub fn exp2(&self) -> Result<Self> {
        let prec = self.prec;
        if self.is_exact() && self.mid.exponent() >= 0 {
            let n = dyadic_floor_bigint(&self.mid)?;
            let n_i64 = n.to_i64().ok_or(Error::CapExceeded {
                what: "exp2 exponent",
                need: n.to_string(),
                cap: i64::MAX as u64,
            })?;
            return Ok(CertReal::exact(Dyadic::power_of_two(n_i64), prec));
        }
        if let Some(p) = self.mag_as_rad().mag_exp() {
            if p > 62 {
                return Err(Error::CapExceeded {
                    what: "exp2 exponent",
                    need: format!("2^{p}"),
                    cap: 1u64 << 62,
                });
            }
        }
        if self.is_wide() {
            return self.map_monotone(|x| x.exp2());
        }
        let wp = prec + GUARD;
        let x = self.with_prec(wp);
        let n = match x.floor_unchecked() {
            Some(n) => n,
            None => BigInt::zero(),
        };
        let n_i64 = n.to_i64().ok_or(Error::CapExceeded {
            what: "exp2 exponent",
            need: n.to_string(),
            cap: i64::MAX as u64,
        })?;
        let f = x.sub(&CertReal::from_bigint(&n, wp));
        let w = f.mul(&ln2(wp));
        let core = exp_series(&w, wp)?;
        Ok(core.mul_pow2(n_i64).finish(prec))
    }

    /// `2^x - 1` without cancellation for small `x`.
    pub fn exp2m1(&self) -> Result<Self> {
        let prec = self.prec;
        let wp = prec + GUARD;
        let w = self.with_prec(wp).mul(&ln2(wp));
        w.with_prec(wp).expm1().map(|r| r.finish(prec))
    }

    /// `x^theta = exp(theta * ln x)` for certified positive `x`.
    pub fn pow(&self, theta: &CertReal) -> Result<Self> {
        let prec = self.prec.max(theta.prec);
        let wp = prec + GUARD;
        let l = self.with_prec(wp).ln()?;
        let out = theta.with_prec(wp).mul(&l).exp()?;
        Ok(out.finish(prec))
    }

    /// `x^(p/q)` with an exact fast path when `x` is an exact dyadic whose
    /// relevant root is again dyadic (for example integer `p/q` exponents or
    /// perfect powers).
    pub fn pow_rational(&self, expo: &BigRational, prec_out: u32) -> Result<Self> {
        if expo.is_zero() {
            return Ok(CertReal::one(prec_out));
        }
        if self.is_exact() && expo.is_integer() {
            if let Some(n) = expo.numer().to_i64() {
                return self.with_prec(prec_out).powi(n);
            }
        }
        let theta = CertReal::from_rational(expo, prec_out + GUARD);
        self.with_prec(prec_out).pow(&theta)
    }

    // ---------- integer extraction ----------

    pub fn with_prec(&self, prec: u32) -> Self {
        let mut c = self.clone();
        c.prec = prec;
        c
    }

    /// Re-rounds to `prec` output bits, compressing the representation.
    pub fn rounded(&self, prec: u32) -> Self {
        self.clone().finish(prec)
    }

    /// Floor of the whole enclosure; `None` if it straddles an integer.
    pub fn floor(&self) -> Option<BigInt> {
        let flo = dyadic_floor_bigint(&self.lo()).ok()?;
        let fhi = dyadic_floor_bigint(&self.hi()).ok()?;
        if flo == fhi {
            Some(flo)
        } else {
            None
        }
    }

    /// Floor of the midpoint, ignoring the radius. Only for uses where any
    /// nearby integer is acceptable.
    fn floor_unchecked(&self) -> Option<BigInt> {
        dyadic_floor_bigint(&self.mid).ok()
    }

    pub fn ceil(&self) -> Option<BigInt> {
        self.neg().floor().map(|n| -n)
    }

    /// Distance to the nearest integer, with the nearest integer of the
    /// midpoint. Requires `rad < 1/4`.
    pub fn dist_nearest_int(&self) -> Option<DistNearest> {
        let quarter = Dyadic::power_of_two(-2);
        if self.rad.cmp(&quarter) != Ordering::Less {
            return None;
        }
        let half = Dyadic::power_of_two(-1);
        let n = dyadic_floor_bigint(&self.mid.add(&half)).ok()?;
        let delta = self.mid.sub(&Dyadic::from_bigint(n.clone())).abs();
        debug_assert!(delta.cmp(&half) != Ordering::Greater);
        let lo = delta.sub(&self.rad).max(&Dyadic::zero());
        let hi = delta.add(&self.rad).min(&half);
        let ambiguous = delta.add(&self.rad).cmp(&half) != Ordering::Less;
        Some(DistNearest {
            dist: CertReal::from_endpoints(lo, hi, self.prec),
            nearest: n,
            ambiguous,
        })
    }

    // ---------- verdicts ----------

    pub fn verdict_le_dyadic(&self, bound: &Dyadic) -> BoundVerdict {
        if self.hi().cmp(bound) != Ordering::Greater {
            BoundVerdict::Le
        } else if self.lo().cmp(bound) == Ordering::Greater {
            BoundVerdict::Gt
        } else {
            BoundVerdict::Undecided
        }
    }

    pub fn verdict_le_rational(&self, bound: &BigRational) -> BoundVerdict {
        let hi_cmp = cmp_dyadic_rational(&self.hi(), bound);
        if hi_cmp != Ordering::Greater {
            return BoundVerdict::Le;
        }
        if cmp_dyadic_rational(&self.lo(), bound) == Ordering::Greater {
            return BoundVerdict::Gt;
        }
        BoundVerdict::Undecided
    }

    /// Certified strict positivity.
    pub fn verdict_positive(&self) -> BoundVerdict {
        if self.lo().is_positive() {
            BoundVerdict::Le
        } else if !self.hi().is_positive() {
            BoundVerdict::Gt
        } else {
            BoundVerdict::Undecided
        }
    }

    /// Certified order against another enclosure (None if they overlap).
    pub fn cmp_certified(&self, other: &CertReal) -> Option<Ordering> {
        if self.hi().cmp(&other.lo()) == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lo().cmp(&other.hi()) == Ordering::Greater {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        cmp_dyadic_rational(&self.lo(), r) != Ordering::Greater
            && cmp_dyadic_rational(&self.hi(), r) != Ordering::Less
    }

    pub fn is_subset_of(&self, other: &CertReal) -> bool {
        other.lo().cmp(&self.lo()) != Ordering::Greater && self.hi().cmp(&other.hi()) != Ordering::Greater
    }

    // ---------- output ----------

    /// Decimal string of an endpoint with directed rounding, `digits`
    /// significant digits. Falls back to a `mant*2^exp` form when the
    /// decimal exponent itself is astronomically large.
    pub fn endpoint_decimal(v: &Dyadic, digits: usize, toward_pos_inf: bool) -> String {
        dyadic_to_decimal(v, digits, toward_pos_inf)
    }

    pub fn decimal_lo(&self, digits: usize) -> String {
        Self::endpoint_decimal(&self.lo(), digits, false)
    }

    pub fn decimal_hi(&self, digits: usize) -> String {
        Self::endpoint_decimal(&self.hi(), digits, true)
    }

    pub fn decimal_mid(&self, digits: usize) -> String {
        dyadic_to_decimal(&self.mid, digits, false)
    }
}

/// Result of [`CertReal::dist_nearest_int`].
#[derive(Clone, Debug)]
pub struct DistNearest {
    pub dist: CertReal,
    pub nearest: BigInt,
    /// True when the enclosure reaches 1/2, so either neighbor is admissible.
    pub ambiguous: bool,
}

// ---------- free helpers ----------

/// Floor of an exact dyadic as a big integer.
pub fn dyadic_floor_bigint(v: &Dyadic) -> Result<BigInt> {
    if v.is_zero() {
        return Ok(BigInt::zero());
    }
    let e = v.exponent();
    if e >= 0 {
        if e > crate::dyadic::ALIGN_SHIFT_CAP {
            return Err(Error::CapExceeded {
                what: "floor magnitude",
                need: format!("2^{}", e),
                cap: crate::dyadic::ALIGN_SHIFT_CAP as u64,
            });
        }
        return Ok(v.mantissa() << e as u64);
    }
    let shift = (-e) as u64;
    if shift >= v.bits() {
        // |v| < 1.
        return Ok(if v.is_negative() { -BigInt::one() } else { BigInt::zero() });
    }
    Ok(v.mantissa() >> shift)
}

/// Exact comparison of a dyadic against a rational, cheap even for huge
/// exponents (magnitude positions decide before any alignment).
pub fn cmp_dyadic_rational(d: &Dyadic, r: &BigRational) -> Ordering {
    let rs = r.numer().sign();
    let ds = d.mantissa().sign();
    use Sign::*;
    match (ds, rs) {
        (Minus, NoSign) | (Minus, Plus) | (NoSign, Plus) => return Ordering::Less,
        (Plus, NoSign) | (Plus, Minus) | (NoSign, Minus) => return Ordering::Greater,
        (NoSign, NoSign) => return Ordering::Equal,
        _ => {}
    }
    let neg = ds == Minus;
    // Magnitude positions: |d| in [2^(pd-1), 2^pd); |r| in [2^(pr-2), 2^pr).
    let pd = d.mag_exp().unwrap();
    let pr = r.numer().magnitude().bits() as i64 - r.denom().magnitude().bits() as i64 + 1;
    if pd - pr > 2 {
        return if neg { Ordering::Less } else { Ordering::Greater };
    }
    if pr - pd > 2 {
        return if neg { Ordering::Greater } else { Ordering::Less };
    }
    // Close in magnitude: exact cross-multiplied comparison. The residual
    // shift is bounded by the operand bit sizes plus slack.
    let e = d.exponent();
    let (lhs, rhs): (BigInt, BigInt) = if e >= 0 {
        ((d.mantissa() * r.denom()) << e as u64, r.numer().clone())
    } else {
        (d.mantissa() * r.denom(), r.numer() << (-e) as u64)
    };
    let c = lhs.cmp(&rhs);
    c
}

/// Upper bound for `a + b` of two non-negative error terms that never
/// aligns distant exponents: when the magnitudes are far apart, the small
/// term is dominated by one ulp of the large one at radius precision.
fn rad_add(a: &Dyadic, b: &Dyadic) -> Dyadic {
    debug_assert!(!a.is_negative() && !b.is_negative());
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let pa = a.mag_exp().unwrap();
    let pb = b.mag_exp().unwrap();
    if (pa - pb).abs() <= RAD_PREC as i64 + 4 {
        return a.add(b);
    }
    let big = if pa >= pb { a } else { b };
    let (r, _) = big.round_to_prec(RAD_PREC, Round::Ceil);
    // The smaller term is below one ulp of the rounded larger term.
    r.add(&Dyadic::power_of_two(r.exponent()))
}

/// ln on [3/4, 3/2) via the atanh series.
fn ln_near_one(y: &CertReal) -> Result<CertReal> {
    let wp = y.prec();
    let one = CertReal::one(wp);
    let z = y.sub(&one).div(&y.add(&one))?;
    // |z| <= 1/5 + slack; z^2 <= 1/20-ish, > 4 bits per term.
    let zsq = z.square();
    let mut term = z.clone();
    let mut sum = z.clone();
    let tol = Dyadic::power_of_two(-(wp as i64) - 2);
    let mut j: i64 = 1;
    loop {
        term = term.mul(&zsq);
        j += 2;
        let contrib = term.div_i64(j);
        sum = sum.add(&contrib);
        if term.mag_as_rad().cmp(&tol) != Ordering::Greater {
            break;
        }
        if j > 4 * wp as i64 + 64 {
            return Err(Error::PrecisionExhausted { cap: wp, context: "ln series did not converge".into() });
        }
    }
    // Geometric tail: sum_{m>j} z^(2m+1)/(2m+1) <= |z^j| * z^2/(1-z^2),
    // well under |z^j| here, and exactly zero for an exactly-zero z.
    let mut out = sum.mul_pow2(1); // ln y = 2 * atanh(z)
    out.rad = rad_add(&out.rad, &term.mag_as_rad());
    Ok(out)
}

/// exp via plain Taylor; argument must satisfy |w| <= 0.5 or so.
fn exp_series(w: &CertReal, wp: u32) -> Result<CertReal> {
    let mut s = expm1_series(w, wp)?;
    s = s.add(&CertReal::one(wp));
    Ok(s)
}

/// `e^w - 1` by Taylor from the linear term; sound for |w| <= 0.7.
fn expm1_series(w: &CertReal, wp: u32) -> Result<CertReal> {
    let tol_exp = -(wp as i64) - 2;
    let tol = Dyadic::power_of_two(tol_exp);
    let mut term = w.clone();
    let mut sum = w.clone();
    let mut j: i64 = 1;
    // Scale-aware tolerance: terms shrink relative to |w|, so cut off
    // relative to the first term's magnitude as well as absolutely.
    let first_mag = w.mag_as_rad();
    let rel_tol = if let Some(p) = first_mag.mag_exp() {
        Dyadic::power_of_two(p + tol_exp)
    } else {
        return Ok(CertReal::zero(wp));
    };
    let cut = tol.min(&rel_tol);
    loop {
        j += 1;
        term = term.mul(w).div_i64(j);
        sum = sum.add(&term);
        if term.mag_as_rad().cmp(&cut) != Ordering::Greater {
            break;
        }
        if j > 4 * wp as i64 + 64 {
            return Err(Error::PrecisionExhausted { cap: wp, context: "exp series did not converge".into() });
        }
    }
    // |w| <= 0.7: tail <= |last term| * 0.7/(1-0.7) < 3 * cut.
    let mut out = sum;
    out.rad = rad_add(&out.rad, &cut.mul_i64(4));
    Ok(out)
}

static LN2_CACHE: OnceLock<Mutex<HashMap<u32, CertReal>>> = OnceLock::new();

/// Enclosure of ln 2 at `prec` working bits (cached).
pub fn ln2(prec: u32) -> CertReal {
    let cache = LN2_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    {
        let map = cache.lock().unwrap();
        if let Some(v) = map.get(&prec) {
            return v.clone();
        }
    }
    // ln 2 = 2 atanh(1/3): series sum 2/(3^(2j+1) (2j+1)).
    let wp = prec + GUARD;
    let third = CertReal::from_rational(&BigRational::new(BigInt::one(), BigInt::from(3)), wp);
    // atanh(1/3) series: z = 1/3.
    let zsq = third.square();
    let mut term = third.clone();
    let mut sum = third;
    let tol = Dyadic::power_of_two(-(wp as i64) - 2);
    let mut j: i64 = 1;
    loop {
        term = term.mul(&zsq);
        j += 2;
        sum = sum.add(&term.div_i64(j));
        if term.mag_as_rad().cmp(&tol) != Ordering::Greater {
            break;
        }
    }
    let mut out = sum.mul_pow2(1);
    out.rad = out.rad.add(&Dyadic::power_of_two(-(wp as i64)));
    let out = out.finish(prec + 4);
    let mut map = cache.lock().unwrap();
    map.insert(prec, out.clone());
    out
}

static LN10_CACHE: OnceLock<Mutex<HashMap<u32, CertReal>>> = OnceLock::new();

fn ln10(prec: u32) -> CertReal {
    let cache = LN10_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    {
        let map = cache.lock().unwrap();
        if let Some(v) = map.get(&prec) {
            return v.clone();
        }
    }
    let ten = CertReal::from_i64(10, prec + GUARD);
    let out = ten.ln().expect("ln 10 converges").finish(prec + 4);
    let mut map = cache.lock().unwrap();
    map.insert(prec, out.clone());
    out
}

/// Decimal rendering of an exact dyadic with directed rounding.
fn dyadic_to_decimal(v: &Dyadic, digits: usize, toward_pos_inf: bool) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = v.is_negative();
    let p = v.mag_exp().unwrap();
    // Decimal exponent estimate: t10 ~ p * log10(2).
    let t10_est = (p as f64 * std::f64::consts::LOG10_2).floor() as i64;
    if t10_est.abs() <= 300_000 {
        return dyadic_to_decimal_exactscale(v, digits, toward_pos_inf, t10_est);
    }
    dyadic_to_decimal_logscale(v, digits, toward_pos_inf)
        .unwrap_or_else(|_| format!("{}{}*2^{}", if neg { "-" } else { "" }, v.mantissa().magnitude(), v.exponent()))
}

/// Moderate exponents: exact scaling by powers of ten.
fn dyadic_to_decimal_exactscale(v: &Dyadic, digits: usize, toward_pos_inf: bool, t10_guess: i64) -> String {
    let neg = v.is_negative();
    let mag = Dyadic::new(v.mantissa().abs(), v.exponent());
    // Find g = mag / 10^t10 in [1, 10): start from the estimate and adjust.
    let mut t10 = t10_guess;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow10 = |k: i64| -> BigRational {
        let p = BigInt::from(10u32).pow(k.unsigned_abs().try_into().expect("pow10 exponent fits u32"));
        if k >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    };
    loop {
        let lo = pow10(t10);
        if cmp_dyadic_rational(&mag, &lo) == Ordering::Less {
            t10 -= 1;
            continue;
        }
        let hi = &lo * &ten;
        if cmp_dyadic_rational(&mag, &hi) != Ordering::Less {
            t10 += 1;
            continue;
        }
        break;
    }
    // scaled = mag * 10^(digits-1-t10), an exact rational; take floor/ceil.
    let scale = pow10(digits as i64 - 1 - t10);
    let e = mag.exponent();
    let num_base = mag.mantissa() * scale.numer();
    let den = scale.denom().clone();
    let (num, den): (BigInt, BigInt) = if e >= 0 {
        (num_base << e as u64, den)
    } else {
        (num_base, den << (-e) as u64)
    };
    let (q, r) = num.div_rem(&den);
    // Magnitude rounding direction: value is positive here; for the negative
    // original, toward +inf on the value means toward zero on the magnitude.
    let round_mag_up = toward_pos_inf != neg;
    let q = if round_mag_up && !r.is_zero() { q + 1 } else { q };
    let mut ds = q.to_string();
    // Rounding up may carry into an extra digit (e.g. 999 -> 1000).
    if ds.len() > digits {
        t10 += (ds.len() - digits) as i64;
        ds.truncate(digits);
    }
    format_sci(neg, &ds, t10)
}

/// Astronomic exponents: digits recovered from a certified log10.
fn dyadic_to_decimal_logscale(v: &Dyadic, digits: usize, toward_pos_inf: bool) -> Result<String> {
    let neg = v.is_negative();
    let prec = (digits as u32) * 4 + 96;
    let m = CertReal::exact(Dyadic::new(v.mantissa().abs(), 0), prec);
    // log10 v = (e + log2 m) * log10 2
    let log2m = m.log2()?;
    let log2v = log2m.add(&CertReal::exact(Dyadic::from_i64(v.exponent()), prec));
    let log10v = log2v.mul(&ln2(prec)).div(&ln10(prec))?;
    let t10 = log10v.floor().ok_or_else(|| Error::PrecisionExhausted {
        cap: prec,
        context: "decimal exponent undecided".into(),
    })?;
    let frac = log10v.sub(&CertReal::from_bigint(&t10, prec));
    let g = frac.mul(&ln10(prec)).exp()?;
    // g in [1, 10): extract digits with a directed choice of endpoint.
    let scale = BigInt::from(10u32).pow((digits - 1) as u32);
    let scaled = g.mul_bigint(&scale);
    let round_mag_up = toward_pos_inf != neg;
    let d = if round_mag_up {
        dyadic_floor_bigint(&scaled.hi())? + 1
    } else {
        dyadic_floor_bigint(&scaled.lo())?
    };
    let mut ds = d.to_string();
    let mut t = t10.to_i64().ok_or(Error::CapExceeded {
        what: "decimal exponent",
        need: t10.to_string(),
        cap: i64::MAX as u64,
    })?;
    if ds.len() > digits {
        t += (ds.len() - digits) as i64;
        ds.truncate(digits);
    }
    Ok(format_sci(neg, &ds, t))
}

fn format_sci(neg: bool, ds: &str, t10: i64) -> String {
    let sign = if neg { "-" } else { "" };
    let ds = ds.trim_end_matches('0');
    let ds = if ds.is_empty() { "0" } else { ds };
    let (head, tail) = ds.split_at(1);
    // Plain positional form for small exponents, scientific otherwise.
    if (-4..=12).contains(&t10) {
        let t = t10;
        if t >= 0 {
            let t = t as usize;
            if tail.len() <= t {
                let mut s = String::new();
                s.push_str(head);
                s.push_str(tail);
                for _ in 0..t - tail.len() {
                    s.push('0');
                }
                return format!("{}{}", sign, s);
            }
            let (int_tail, frac_tail) = tail.split_at(t);
            return format!("{}{}{}.{}", sign, head, int_tail, frac_tail);
        } else {
            let zeros = (-t - 1) as usize;
            let mut s = String::from("0.");
            for _ in 0..zeros {
                s.push('0');
            }
            s.push_str(head);
            s.push_str(tail);
            return format!("{}{}", sign, s);
        }
    }
    if tail.is_empty() {
        format!("{}{}e{}", sign, head, t10)
    } else {
        format!("{}{}.{}e{}", sign, head, tail, t10)
    }
}

// ---------- parsing ----------

/// Parses a real given as a decimal literal (`"0.5"`, `"2.5e-3"`) or a
/// rational (`"p/q"`). The result is the exact rational named by the string.
pub fn parse_real(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator {:?}", p)))?;
        let den: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator {:?}", q)))?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(BigRational::new(num, den));
    }
    // Decimal literal with optional exponent.
    let (body, exp10): (&str, i64) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {:?}", s)))?;
            if e.abs() > 1_000_000 {
                return Err(Error::Parse("decimal exponent out of range".into()));
            }
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("no digits in {:?}", s)));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad digits in {:?}", s)));
    }
    let digits = format!("{}{}", int_part, frac_part);
    let mant: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| Error::Parse(format!("bad digits in {:?}", s)))?
    };
    let mant = if neg { -mant } else { mant };
    let shift = exp10 - frac_part.len() as i64;
    let p = BigInt::from(10u32).pow(shift.unsigned_abs().try_into().expect("pow10 exponent fits u32"));
    Ok(if shift >= 0 {
        BigRational::from_integer(mant * p)
    } else {
        BigRational::new(mant, p)
    })
}

/// Parses and encloses in one step.
pub fn parse_to_ball(s: &str, prec: u32) -> Result<CertReal> {
    Ok(CertReal::from_rational(&parse_real(s)?, prec))
}

// ---------- exact rational powers ----------

/// `r^(1/d)` when it is again rational.
pub fn rational_nth_root_exact(r: &BigRational, d: u32) -> Option<BigRational> {
    if d == 0 {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    if r.numer().is_negative() {
        if d % 2 == 0 {
            return None;
        }
        return rational_nth_root_exact(&-r, d).map(|x| -x);
    }
    let nr = r.numer().magnitude().nth_root(d);
    if num_traits::Pow::pow(&nr, d) != *r.numer().magnitude() {
        return None;
    }
    let dr = r.denom().magnitude().nth_root(d);
    if num_traits::Pow::pow(&dr, d) != *r.denom().magnitude() {
        return None;
    }
    Some(BigRational::new(BigInt::from(nr), BigInt::from(dr)))
}

/// `base^expo` when the result is rational: `expo = p/q` in lowest terms
/// needs `base` to be an exact q-th power of a rational.
pub fn rational_pow_exact(base: &BigRational, expo: &BigRational) -> Option<BigRational> {
    if base.is_zero() {
        return if expo.is_positive() { Some(BigRational::zero()) } else { None };
    }
    let q = expo.denom().to_u32()?;
    let root = rational_nth_root_exact(base, q)?;
    let p = expo.numer().to_i32()?;
    Some(root.pow(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn parse_decimal_and_rational() {
        assert_eq!(parse_real("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_real("2.5e-1").unwrap(), rat(1, 4));
        assert_eq!(parse_real("-3").unwrap(), rat(-3, 1));
        assert_eq!(parse_real("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_real("-2/7").unwrap(), rat(-2, 7));
        assert_eq!(parse_real("10").unwrap(), rat(10, 1));
        assert!(parse_real("").is_err());
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("abc").is_err());
    }

    #[test]
    fn exact_dyadics_have_zero_radius() {
        let x = CertReal::from_rational(&rat(1, 2), 64);
        assert!(x.is_exact());
        let y = CertReal::from_rational(&rat(1, 4), 64);
        assert!(y.is_exact());
        let z = CertReal::from_rational(&rat(1, 3), 64);
        assert!(!z.is_exact());
        // Width contract: rad <= 2^(-prec) * |v| (half-ulp of a prec+2-bit mid).
        assert!(z.rad().cmp(&Dyadic::power_of_two(-64)) == Ordering::Less);
        assert!(z.contains_rational(&rat(1, 3)));
    }

    #[test]
    fn arithmetic_soundness_on_thirds() {
        let third = CertReal::from_rational(&rat(1, 3), 128);
        let one = third.add(&third).add(&third);
        assert!(one.contains_rational(&rat(1, 1)));
        let prod = third.mul(&CertReal::from_i64(3, 128));
        assert!(prod.contains_rational(&rat(1, 1)));
        let q = CertReal::one(128).div(&CertReal::from_i64(3, 128)).unwrap();
        assert!(q.contains_rational(&rat(1, 3)));
    }

    #[test]
    fn root_exact_on_perfect_powers() {
        let x = CertReal::from_i64(64, 128);
        let c = x.root(3).unwrap();
        assert!(c.is_exact());
        assert_eq!(c.mid(), &Dyadic::from_i64(4));
        let s = CertReal::from_i64(1, 128).root(5).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.mid(), &Dyadic::one());
        // Quarter is a perfect square of a dyadic.
        let q = CertReal::from_rational(&rat(1, 4), 128).sqrt().unwrap();
        assert!(q.is_exact());
        assert_eq!(q.mid(), &Dyadic::new(BigInt::one(), -1));
    }

    #[test]
    fn root_encloses_and_narrows() {
        let two = CertReal::from_i64(2, 128);
        let r = two.sqrt().unwrap();
        let sq = r.square();
        assert!(sq.contains_rational(&rat(2, 1)));
        // Relative width <= 2^(4-prec).
        let width = r.rad().mul_pow2(1);
        assert!(width.cmp(&Dyadic::power_of_two(4 - 128)) == Ordering::Less);
    }

    #[test]
    fn exp2_integer_fast_path() {
        let one = CertReal::one(64);
        let t = one.exp2().unwrap();
        assert!(t.is_exact());
        assert_eq!(t.mid(), &Dyadic::from_i64(2));
        let zero = CertReal::zero(64);
        assert_eq!(zero.exp2().unwrap().mid(), &Dyadic::one());
        let big = CertReal::from_i64(1 << 40, 64).exp2().unwrap();
        assert!(big.is_exact());
        assert_eq!(big.mid().exponent(), 1 << 40);
    }

    #[test]
    fn ln_exp_roundtrip() {
        let x = CertReal::from_rational(&rat(7, 3), 160);
        let l = x.ln().unwrap();
        let back = l.exp().unwrap();
        assert!(back.contains_rational(&rat(7, 3)));
        // ln(1) = 0 exactly.
        let z = CertReal::one(128).ln().unwrap();
        assert_eq!(z.sign(), Some(Ordering::Equal));
    }

    #[test]
    fn expm1_keeps_scale_for_tiny_arguments() {
        let tiny = CertReal::exact(Dyadic::power_of_two(-(1i64 << 40)), 96);
        let r = tiny.expm1().unwrap();
        // e^t - 1 ~ t: enclosure must stay near 2^(-2^40), not collapse to [−eps, eps].
        assert_eq!(r.verdict_positive(), BoundVerdict::Le);
        let mag = r.mid().mag_exp().unwrap();
        assert!((mag - (-(1i64 << 40))).abs() <= 2);
        let r2 = tiny.exp2m1().unwrap();
        assert_eq!(r2.verdict_positive(), BoundVerdict::Le);
    }

    #[test]
    fn pow_matches_root_for_rational_exponents() {
        let two = CertReal::from_i64(2, 160);
        let a = two.pow_rational(&rat(1, 2), 160).unwrap();
        let b = two.sqrt().unwrap();
        assert!(a.cmp_certified(&b).is_none(), "enclosures of sqrt 2 must overlap");
        let sq = a.square();
        assert!(sq.contains_rational(&rat(2, 1)));
    }

    #[test]
    fn dist_nearest_int_basics() {
        let x = CertReal::from_rational(&rat(7, 2), 96);
        let d = x.dist_nearest_int().unwrap();
        assert!(d.ambiguous);
        assert!(d.dist.contains_rational(&rat(1, 2)));

        let y = CertReal::from_rational(&rat(101, 25), 96); // 4.04
        let d = y.dist_nearest_int().unwrap();
        assert_eq!(d.nearest, BigInt::from(4));
        assert!(!d.ambiguous);
        assert!(d.dist.contains_rational(&rat(1, 25)));

        let wide = CertReal::from_endpoints(Dyadic::zero(), Dyadic::one(), 32);
        assert!(wide.dist_nearest_int().is_none(), "rad >= 1/4 must be rejected");
    }

    #[test]
    fn verdicts() {
        let x = CertReal::from_rational(&rat(1, 3), 96);
        assert_eq!(x.verdict_le_rational(&rat(1, 2)), BoundVerdict::Le);
        assert_eq!(x.verdict_le_rational(&rat(1, 4)), BoundVerdict::Gt);
        assert_eq!(x.verdict_positive(), BoundVerdict::Le);
        let wide = CertReal::from_endpoints(Dyadic::from_i64(-1), Dyadic::from_i64(1), 32);
        assert_eq!(wide.verdict_le_rational(&rat(0, 1)), BoundVerdict::Undecided);
    }

    #[test]
    fn floor_ceil() {
        let x = CertReal::from_rational(&rat(7, 2), 96);
        assert_eq!(x.floor(), Some(BigInt::from(3)));
        assert_eq!(x.ceil(), Some(BigInt::from(4)));
        let near_int = CertReal::from_endpoints(
            Dyadic::new(BigInt::from(511), -8), // 1.996...
            Dyadic::new(BigInt::from(513), -8), // 2.004...
            32,
        );
        assert_eq!(near_int.floor(), None);
    }

    #[test]
    fn refine_doubles_until_decided() {
        let third = rat(1, 3);
        let tight = rat(333_333_333_334, 1_000_000_000_000);
        let got = refine(Precision::new(16, 4096), "test", |p| {
            let x = CertReal::from_rational(&third, p);
            match x.verdict_le_rational(&tight) {
                BoundVerdict::Undecided => None,
                v => Some((v, p)),
            }
        })
        .unwrap();
        assert_eq!(got.0, BoundVerdict::Le);
        assert!(got.1 > 16, "16 bits cannot separate 1/3 from this bound");
    }

    #[test]
    fn refine_reports_cap() {
        let err = refine(Precision::new(16, 64), "hopeless", |_| None::<()>).unwrap_err();
        match err {
            Error::PrecisionExhausted { cap, .. } => assert_eq!(cap, 64),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rational_power_exactness() {
        assert_eq!(rational_pow_exact(&rat(100, 1), &rat(1, 2)), Some(rat(10, 1)));
        assert_eq!(rational_pow_exact(&rat(27, 8), &rat(2, 3)), Some(rat(9, 4)));
        assert_eq!(rational_pow_exact(&rat(2, 1), &rat(1, 2)), None);
        assert_eq!(rational_pow_exact(&rat(4, 1), &rat(-1, 2)), Some(rat(1, 2)));
        assert_eq!(rational_pow_exact(&rat(10, 1), &rat(3, 1)), Some(rat(1000, 1)));
    }

    #[test]
    fn decimal_output_directions() {
        let third = CertReal::from_rational(&rat(1, 3), 128);
        let lo = third.decimal_lo(12);
        let hi = third.decimal_hi(12);
        assert!(lo.starts_with("0.3333333333"), "lo = {lo}");
        assert!(hi.starts_with("0.3333333333"), "hi = {hi}");
        assert!(lo <= hi);
        let x = CertReal::from_i64(1024, 64);
        assert_eq!(x.decimal_mid(6), "1024");
    }

    #[test]
    fn decimal_output_astronomic_exponent() {
        let tiny = Dyadic::power_of_two(-(1i64 << 48));
        let s = CertReal::endpoint_decimal(&tiny, 8, false);
        // 2^(-2^48) = 10^(-84732411018727.984...) = 1.038518e-84732411018728.
        assert!(s.contains('e'), "expected scientific form, got {s}");
        assert!(s.starts_with("1.03851"), "digits off: {s}");
        let exp_part: i64 = s.split('e').nth(1).unwrap().parse().unwrap();
        assert_eq!(exp_part, -84_732_411_018_728);
    }

    #[test]
    fn huge_scale_additions_fold_into_radius() {
        let one = CertReal::one(64);
        let tiny = CertReal::exact(Dyadic::power_of_two(-(1i64 << 48)), 64);
        let s = one.add(&tiny);
        assert!(s.contains_rational(&rat(1, 1)));
        assert!(!s.rad().is_zero());
    }
}
