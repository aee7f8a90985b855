//! Exact dyadic rationals `mant * 2^exp` with arbitrary-precision mantissa.
//!
//! This is the ground representation for every real quantity in the crate:
//! interval midpoints, radii, and all intermediate values. Exponents are
//! `i64` so that magnitudes like `2^(-2^48)` are representable with a small
//! mantissa; mantissa growth is controlled by explicit rounding, never by
//! hardware rounding modes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Rounding directions for [`Dyadic::round_to_prec`] and friends.
///
/// `Floor`/`Ceil` are directed (toward minus/plus infinity); `Nearest` ties
/// toward plus infinity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Round {
    Floor,
    Ceil,
    Nearest,
}

/// Largest bit shift allowed when aligning two exponents.
///
/// Exact addition of values whose exponents differ by more than this would
/// allocate gigabyte mantissas; callers at the interval layer are expected to
/// absorb negligibly small addends into the radius first.
pub const ALIGN_SHIFT_CAP: i64 = 1 << 27;

/// Exact dyadic rational. Zero is canonically `0 * 2^0`; nonzero values keep
/// an odd mantissa.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp = self
                .exp
                .checked_add(tz as i64)
                .expect("dyadic exponent overflow");
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// `2^exp`.
    pub fn power_of_two(exp: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Number of significant mantissa bits (0 for zero).
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the most significant bit: the unique `p` with
    /// `2^(p-1) <= |self| < 2^p`. `None` for zero.
    pub fn mag_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp.checked_add(self.mant.bits() as i64).expect("dyadic exponent overflow"))
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact shift by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp.checked_add(k).expect("dyadic exponent overflow") }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let shift = hi.exp - lo.exp;
        assert!(
            shift <= ALIGN_SHIFT_CAP,
            "dyadic alignment shift {} exceeds cap; round operands first",
            shift
        );
        Dyadic::new((&hi.mant << shift as u64) + &lo.mant, lo.exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.mant * &other.mant, self.exp.checked_add(other.exp).expect("dyadic exponent overflow"))
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Dyadic::new(&self.mant * k, self.exp)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Exact comparison. Decided from sign and magnitude position when
    /// possible, so wildly different exponents never force an alignment.
    pub fn cmp(&self, other: &Dyadic) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        use num_bigint::Sign::*;
        match (sa, sb) {
            (Minus, NoSign) | (Minus, Plus) | (NoSign, Plus) => return Ordering::Less,
            (Plus, NoSign) | (Plus, Minus) | (NoSign, Minus) => return Ordering::Greater,
            (NoSign, NoSign) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign: compare magnitude positions first.
        let pa = self.mag_exp().unwrap();
        let pb = other.mag_exp().unwrap();
        if pa != pb {
            let mag = pa.cmp(&pb);
            return if sa == Plus { mag } else { mag.reverse() };
        }
        // Same leading position: the alignment shift is bounded by mantissa sizes.
        let (ea, eb) = (self.exp, other.exp);
        if ea >= eb {
            (&self.mant << (ea - eb) as u64).cmp(&other.mant)
        } else {
            self.mant.cmp(&(&other.mant << (eb - ea) as u64))
        }
    }

    pub fn min(&self, other: &Dyadic) -> Dyadic {
        if self.cmp(other) == Ordering::Greater { other.clone() } else { self.clone() }
    }

    pub fn max(&self, other: &Dyadic) -> Dyadic {
        if self.cmp(other) == Ordering::Less { other.clone() } else { self.clone() }
    }

    /// Round to at most `prec` mantissa bits. Returns the rounded value and
    /// whether any nonzero bits were discarded.
    pub fn round_to_prec(&self, prec: u32, mode: Round) -> (Dyadic, bool) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), false);
        }
        let drop = (bits - prec as u64) as i64;
        let new_exp = self.exp.checked_add(drop).expect("dyadic exponent overflow");
        let truncated: BigInt = &self.mant >> drop as u64;
        let lost = &self.mant - (&truncated << drop as u64);
        if lost.is_zero() {
            return (Dyadic::new(truncated, new_exp), false);
        }
        let rounded = match mode {
            Round::Floor => {
                // BigInt shr truncates toward negative infinity already.
                truncated
            }
            Round::Ceil => truncated + 1,
            Round::Nearest => {
                // lost is in [0, 2^drop) relative to the floor-truncated value.
                let half = BigInt::one() << (drop - 1) as u64;
                if lost >= half {
                    truncated + 1
                } else {
                    truncated
                }
            }
        };
        (Dyadic::new(rounded, new_exp), true)
    }

    /// Upper bound `2^k >= |self|`, as a power of two (`ulp`-style bound used
    /// for radius bookkeeping). Zero maps to zero.
    pub fn mag_bound(&self) -> Dyadic {
        match self.mag_exp() {
            None => Dyadic::zero(),
            Some(p) => Dyadic::power_of_two(p),
        }
    }

    /// Exact decimal representation. Only usable for moderate exponents: the
    /// string has about `|exp|` digits for negative exponents.
    pub fn to_exact_decimal(&self) -> String {
        if self.exp >= 0 {
            assert!(self.exp <= ALIGN_SHIFT_CAP, "exponent too large for decimal expansion");
            let v: BigInt = &self.mant << self.exp as u64;
            v.to_string()
        } else {
            let frac_bits = (-self.exp) as u64;
            assert!(
                frac_bits <= ALIGN_SHIFT_CAP as u64,
                "exponent too small for decimal expansion"
            );
            let neg = self.mant.is_negative();
            let m = self.mant.abs();
            let int_part: BigInt = &m >> frac_bits;
            let frac_part = &m - (&int_part << frac_bits);
            // frac_part / 2^frac_bits in decimal: multiply by 5^frac_bits.
            let five = BigInt::from(5u32).pow(frac_bits.try_into().expect("shift fits u32"));
            let digits = (frac_part * five).to_string();
            let mut frac_str = String::new();
            for _ in digits.len() as u64..frac_bits {
                frac_str.push('0');
            }
            frac_str.push_str(&digits);
            while frac_str.ends_with('0') {
                frac_str.pop();
            }
            let sign = if neg { "-" } else { "" };
            if frac_str.is_empty() {
                format!("{}{}", sign, int_part)
            } else {
                format!("{}{}.{}", sign, int_part, frac_str)
            }
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_i64(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let x = d(12, 0); // 12 = 3 * 2^2
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        assert_eq!(Dyadic::zero().exponent(), 0);
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = d(3, -2); // 0.75
        let b = d(1, -3); // 0.125
        assert_eq!(a.add(&b), d(7, -3)); // 0.875
        assert_eq!(a.sub(&b), d(5, -3)); // 0.625
        assert_eq!(a.mul(&b), d(3, -5));
        assert_eq!(a.mul_pow2(3), d(6, 0));
    }

    #[test]
    fn comparison_avoids_alignment_for_distant_exponents() {
        let tiny = Dyadic::power_of_two(-(1 << 48));
        let one = Dyadic::one();
        assert_eq!(tiny.cmp(&one), Ordering::Less);
        assert_eq!(one.cmp(&tiny), Ordering::Greater);
        assert_eq!(tiny.cmp(&tiny.neg()), Ordering::Greater);
    }

    #[test]
    fn rounding_directions() {
        // 0.3125 = 5 * 2^-4; to 2 bits: floor 0.25, ceil 0.375, nearest 0.3125->0.3125? 5 has 3 bits.
        let x = d(5, -4);
        let (fl, inexact) = x.round_to_prec(2, Round::Floor);
        assert!(inexact);
        assert_eq!(fl, d(1, -2)); // 0.25
        let (ce, _) = x.round_to_prec(2, Round::Ceil);
        assert_eq!(ce, d(3, -3)); // 0.375
        let (ne, _) = x.round_to_prec(2, Round::Nearest);
        assert_eq!(ne, d(3, -3)); // 0.3125 rounds up to 0.375 (tie toward +inf)

        // Negative values: floor moves toward -inf.
        let y = d(-5, -4);
        let (fl_n, _) = y.round_to_prec(2, Round::Floor);
        assert_eq!(fl_n, d(-3, -3)); // -0.375
        let (ce_n, _) = y.round_to_prec(2, Round::Ceil);
        assert_eq!(ce_n, d(-1, -2)); // -0.25
    }

    #[test]
    fn exact_decimal() {
        assert_eq!(d(1, -1).to_exact_decimal(), "0.5");
        assert_eq!(d(-3, -2).to_exact_decimal(), "-0.75");
        assert_eq!(d(5, 1).to_exact_decimal(), "10");
        assert_eq!(Dyadic::zero().to_exact_decimal(), "0");
    }

    #[test]
    fn huge_exponents_stay_cheap() {
        let tiny = Dyadic::power_of_two(-(1i64 << 48));
        let also_tiny = tiny.mul(&tiny);
        assert_eq!(also_tiny.exponent(), -(1i64 << 49));
        assert_eq!(also_tiny.mag_exp(), Some(-(1i64 << 49) + 1));
    }
}
