//! Integer combinations of d-th roots and searches for small fractional
//! parts among them.
//!
//! The basis consists of the numbers `f^(1/d)` where `f` ranges over the
//! non-unit divisors of `(p_1 ... p_xi)^(d-1)` built from the first `xi`
//! primes. Sums with integer coefficients are linearly independent over the
//! rationals, so every nonzero combination has a nonzero distance to the
//! nearest integer; the searches here locate combinations making that
//! distance small, together with certificates.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certreal::{BoundVerdict, CertReal, Precision, refine};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Largest basis size `d^xi` accepted by [`build_basis`].
pub const DEFAULT_BASIS_CAP: u64 = 64;

/// Largest candidate count enumerated by the fractional-part searches.
pub const DEFAULT_SEARCH_CAP: u64 = 1 << 26;

/// The radicand basis: all products `p_1^(a_1) ... p_xi^(a_xi)` with
/// exponents in `0..d`, excluding 1, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalBasis {
    pub d: u32,
    pub xi: u32,
    pub primes: Vec<u64>,
    pub elements: Vec<u64>,
}

/// An integer combination `sum_f c_f * f^(1/d) - offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalSum {
    pub basis: RadicalBasis,
    pub coeffs: BTreeMap<u64, i64>,
    pub offset: i64,
}

impl RadicalBasis {
    /// Number of coefficients a combination carries (`d^xi - 1`).
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `d^xi` as a u64 (guarded at construction).
    pub fn size(&self) -> u64 {
        self.elements.len() as u64 + 1
    }
}

impl RadicalSum {
    pub fn zero(basis: &RadicalBasis) -> Self {
        RadicalSum { basis: basis.clone(), coeffs: BTreeMap::new(), offset: 0 }
    }

    pub fn from_coeffs(basis: &RadicalBasis, coeffs: BTreeMap<u64, i64>, offset: i64) -> Self {
        let mut s = RadicalSum { basis: basis.clone(), coeffs, offset };
        s.coeffs.retain(|_, c| *c != 0);
        s
    }

    /// Largest absolute coefficient.
    pub fn m_norm(&self) -> u64 {
        self.coeffs.values().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// True when some coefficient is nonzero.
    pub fn is_nonzero(&self) -> bool {
        self.coeffs.values().any(|c| *c != 0)
    }

    pub fn coeff(&self, f: u64) -> i64 {
        self.coeffs.get(&f).copied().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&f, &c)| (f, -c)).collect();
        RadicalSum { basis: self.basis.clone(), coeffs, offset: -self.offset }
    }

    pub fn add(&self, other: &RadicalSum) -> Self {
        assert_eq!(self.basis.d, other.basis.d, "mismatched bases");
        assert_eq!(self.basis.xi, other.basis.xi, "mismatched bases");
        let mut coeffs = self.coeffs.clone();
        for (&f, &c) in &other.coeffs {
            *coeffs.entry(f).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        RadicalSum { basis: self.basis.clone(), coeffs, offset: self.offset + other.offset }
    }

    pub fn scale(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&f, &c)| (f, c * k)).filter(|(_, c)| *c != 0).collect();
        RadicalSum { basis: self.basis.clone(), coeffs, offset: self.offset * k }
    }

    /// Certified enclosure of the value at `prec` output bits.
    pub fn eval(&self, prec: u32) -> CertReal {
        eval_radical_sum(self, prec)
    }
}

/// First `n` primes.
fn first_primes(n: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(n as usize);
    let mut cand: u64 = 2;
    while out.len() < n as usize {
        if out.iter().all(|&p| cand % p != 0) {
            out.push(cand);
        }
        cand += 1;
    }
    out
}

/// Builds the basis for `(d, xi)` under the default size cap.
pub fn build_basis(d: u32, xi: u32) -> Result<RadicalBasis> {
    build_basis_capped(d, xi, DEFAULT_BASIS_CAP)
}

/// Builds the basis for `(d, xi)`; `d^xi` must stay within `cap`.
pub fn build_basis_capped(d: u32, xi: u32, cap: u64) -> Result<RadicalBasis> {
    if d < 2 {
        return Err(Error::Domain(format!("root degree d = {d} must be at least 2")));
    }
    if xi < 1 {
        return Err(Error::Domain("basis parameter xi must be at least 1".into()));
    }
    let size = (d as u64)
        .checked_pow(xi)
        .ok_or(Error::CapExceeded { what: "basis size d^xi", need: "overflow".into(), cap })?;
    if size > cap {
        return Err(Error::CapExceeded { what: "basis size d^xi", need: size.to_string(), cap });
    }
    let primes = first_primes(xi);
    let mut elements = Vec::with_capacity(size as usize - 1);
    let mut expo = vec![0u32; xi as usize];
    loop {
        // Advance the exponent vector like a base-d counter.
        let mut j = 0;
        loop {
            if j == expo.len() {
                elements.sort_unstable();
                debug_assert_eq!(elements.len() as u64, size - 1);
                return Ok(RadicalBasis { d, xi, primes, elements });
            }
            expo[j] += 1;
            if expo[j] < d {
                break;
            }
            expo[j] = 0;
            j += 1;
        }
        let mut prod: u64 = 1;
        for (e, &p) in expo.iter().zip(&primes) {
            for _ in 0..*e {
                prod = prod.checked_mul(p).ok_or(Error::CapExceeded {
                    what: "basis element",
                    need: "overflow".into(),
                    cap: u64::MAX,
                })?;
            }
        }
        elements.push(prod);
    }
}

/// Certified enclosure of `sum_f c_f f^(1/d) - offset` at `prec` bits.
pub fn eval_radical_sum(w: &RadicalSum, prec: u32) -> CertReal {
    let wp = prec + 16;
    let mut acc = CertReal::zero(wp);
    for (&f, &c) in &w.coeffs {
        if c == 0 {
            continue;
        }
        let root = CertReal::from_bigint(&BigInt::from(f), wp)
            .root(w.basis.d)
            .expect("radicand is positive");
        acc = acc.add(&root.mul_i64(c));
    }
    acc.add(&CertReal::from_bigint(&BigInt::from(-w.offset), wp)).rounded(prec)
}

/// Fixed-point context shared by the enumeration searches: each basis root's
/// fractional part scaled to `frac_bits` binary digits.
struct FixedRoots {
    frac_bits: u32,
    roots: Vec<u128>,
}

impl FixedRoots {
    /// `frac_bits = 64 + d^xi * ceil(log2 n)` keeps neighbouring fractional
    /// parts correctly ordered well below the guaranteed separation scale.
    fn build(basis: &RadicalBasis, n: u64) -> Result<FixedRoots> {
        let lg = 64 - (n.max(2) - 1).leading_zeros(); // ceil(log2 n)
        let frac_bits = 64u64 + basis.size() * lg as u64;
        if frac_bits > 128 {
            return Err(Error::CapExceeded {
                what: "fixed-point fractional bits",
                need: frac_bits.to_string(),
                cap: 128,
            });
        }
        let frac_bits = frac_bits as u32;
        let prec = frac_bits + 32;
        let mut roots = Vec::with_capacity(basis.len());
        for &f in &basis.elements {
            let r = CertReal::from_bigint(&BigInt::from(f), prec)
                .root(basis.d)
                .expect("radicand is positive");
            // Lower fixed-point bits of the midpoint: one-sided error
            // below 2^(1 - frac_bits) per unit coefficient.
            let scaled = r.mid().mul_pow2(frac_bits as i64);
            let whole = crate::certreal::dyadic_floor_bigint(&scaled)?;
            let modulus = BigInt::one() << frac_bits;
            let rem = ((whole % &modulus) + &modulus) % &modulus;
            let mut v: u128 = 0;
            for (i, digit) in rem.magnitude().to_u64_digits().iter().enumerate() {
                v |= (*digit as u128) << (64 * i);
            }
            roots.push(v);
        }
        Ok(FixedRoots { frac_bits, roots })
    }

    fn mask(&self) -> u128 {
        if self.frac_bits == 128 {
            u128::MAX
        } else {
            (1u128 << self.frac_bits) - 1
        }
    }

    /// `(c * x) mod 2^128` for a small non-negative multiplier.
    fn mul_mod(c: u64, x: u128) -> u128 {
        let lo = x & ((1u128 << 64) - 1);
        let hi = x >> 64;
        let c = c as u128;
        (c.wrapping_mul(lo)).wrapping_add(c.wrapping_mul(hi) << 64)
    }

    /// Fractional part of `sum_j coeffs[j] * root_j`, mod `2^frac_bits`.
    fn frac_of(&self, coeffs: &[i64]) -> u128 {
        let mut acc: u128 = 0;
        for (&c, &r) in coeffs.iter().zip(&self.roots) {
            if c == 0 {
                continue;
            }
            let t = Self::mul_mod(c.unsigned_abs(), r);
            acc = if c < 0 { acc.wrapping_sub(t) } else { acc.wrapping_add(t) };
        }
        acc & self.mask()
    }
}

/// Decodes candidate index `i` into coefficients `1..=n` per basis element.
fn decode_positive(mut i: u64, n: u64, k: usize, out: &mut [i64]) {
    for slot in out.iter_mut().take(k) {
        *slot = (i % n) as i64 + 1;
        i /= n;
    }
}

/// Decodes candidate index `i` into coefficients `-n..=n` per basis element.
fn decode_signed(mut i: u64, n: u64, k: usize, out: &mut [i64]) {
    let b = 2 * n + 1;
    for slot in out.iter_mut().take(k) {
        *slot = (i % b) as i64 - n as i64;
        i /= b;
    }
}

/// Certifies a chosen combination: orients the sign and sets the offset so
/// the value itself equals the distance to the nearest integer, then checks
/// `0 < value <= bound`.
fn certify_small(
    basis: &RadicalBasis,
    coeffs: Vec<i64>,
    bound: &BigRational,
    start_prec: u32,
) -> Result<(RadicalSum, CertReal)> {
    let map: BTreeMap<u64, i64> = basis
        .elements
        .iter()
        .zip(&coeffs)
        .filter(|(_, &c)| c != 0)
        .map(|(&f, &c)| (f, c))
        .collect();
    let raw = RadicalSum::from_coeffs(basis, map, 0);
    let p = Precision { start: start_prec, ..Precision::default() };
    refine(p, "small fractional part certification", |prec| {
        let v = raw.eval(prec);
        let d = v.dist_nearest_int()?;
        // Orient so the stored value is the positive distance itself.
        let nearest_i64: i64 = d.nearest.clone().try_into().ok()?;
        let below = v.verdict_le_rational(&BigRational::from(BigInt::from(nearest_i64)));
        let (w, value) = match below {
            BoundVerdict::Gt => {
                let mut w = raw.clone();
                w.offset = nearest_i64;
                (w, v.add(&CertReal::from_bigint(&BigInt::from(-nearest_i64), prec)))
            }
            BoundVerdict::Le => {
                let mut w = raw.neg();
                w.offset = -nearest_i64;
                (w, v.neg().add(&CertReal::from_bigint(&BigInt::from(nearest_i64), prec)))
            }
            BoundVerdict::Undecided => return None,
        };
        match (value.verdict_positive(), value.verdict_le_rational(bound)) {
            (BoundVerdict::Le, BoundVerdict::Le) => Some(Ok((w, value))),
            (BoundVerdict::Gt, _) | (_, BoundVerdict::Gt) => Some(Err(())),
            _ => None,
        }
    })?
    .map_err(|()| {
        Error::Domain("selected combination failed its certified distance bound".into())
    })
}

/// Finds `w` with `m_norm(w) <= n` and certified
/// `0 < value(w) <= n^(-(d^xi - 1))` by sorting the fractional parts of all
/// combinations with coefficients in `1..=n` (plus the empty combination)
/// and taking the closest cyclically adjacent pair.
pub fn find_small_fracpart(basis: &RadicalBasis, n: u64) -> Result<RadicalSum> {
    find_small_fracpart_capped(basis, n, DEFAULT_SEARCH_CAP).map(|(w, _)| w)
}

/// As [`find_small_fracpart`], also returning the certified distance.
pub fn find_small_fracpart_capped(
    basis: &RadicalBasis,
    n: u64,
    cap: u64,
) -> Result<(RadicalSum, CertReal)> {
    if n < 2 {
        return Err(Error::Domain(format!("search bound n = {n} must be at least 2")));
    }
    let k = basis.len();
    let count = n
        .checked_pow(k as u32)
        .filter(|&c| c <= cap.min(u32::MAX as u64 - 1))
        .ok_or_else(|| Error::CapExceeded {
            what: "fractional-part candidates",
            need: format!("{n}^{k}"),
            cap,
        })?;
    let fixed = FixedRoots::build(basis, n)?;
    const GHOST: u32 = u32::MAX;

    // Sort by the top 64 fixed-point bits; ties are resolved with full-width
    // fractional parts below.
    let key_shift = fixed.frac_bits - 64;
    let full = |idx: u32| -> u128 {
        if idx == GHOST {
            return 0;
        }
        let mut c = vec![0i64; k];
        decode_positive(idx as u64, n, k, &mut c);
        fixed.frac_of(&c)
    };
    let mut entries: Vec<(u64, u32)> = (0..count as u32)
        .into_par_iter()
        .map(|idx| ((full(idx) >> key_shift) as u64, idx))
        .collect();
    entries.push((0, GHOST));
    entries.par_sort_unstable();

    // Resolve runs of equal 64-bit keys by full-width comparison.
    let mut i = 0;
    while i < entries.len() {
        let mut j = i + 1;
        while j < entries.len() && entries[j].0 == entries[i].0 {
            j += 1;
        }
        if j - i > 1 {
            entries[i..j].sort_by_key(|&(_, idx)| full(idx));
        }
        i = j;
    }

    // Minimal cyclic gap between adjacent fractional parts.
    let len = entries.len();
    let mask = fixed.mask();
    let first_full = full(entries[0].1);
    let mut prev_full = first_full;
    let mut best: Option<(u128, usize)> = None;
    for i in 0..len {
        let next_full = if i + 1 < len { full(entries[i + 1].1) } else { first_full };
        let gap = next_full.wrapping_sub(prev_full) & mask;
        if best.map_or(true, |b| gap < b.0) {
            best = Some((gap, i));
        }
        prev_full = next_full;
    }
    let (_, pos) = best.expect("at least the ghost entry exists");
    let lo_idx = entries[pos].1;
    let hi_idx = entries[(pos + 1) % len].1;

    // Difference vector of the chosen pair.
    let mut diff = vec![0i64; k];
    if hi_idx != GHOST {
        decode_positive(hi_idx as u64, n, k, &mut diff);
    }
    if lo_idx != GHOST {
        let mut lo_c = vec![0i64; k];
        decode_positive(lo_idx as u64, n, k, &mut lo_c);
        for (d, l) in diff.iter_mut().zip(&lo_c) {
            *d -= *l;
        }
    }
    debug_assert!(diff.iter().any(|&c| c != 0));

    let bound = BigRational::new(BigInt::one(), BigInt::from(n).pow(k as u32));
    let (w, value) = certify_small(basis, diff, &bound, fixed.frac_bits + 32)?;
    debug_assert!(w.m_norm() <= n);
    Ok((w, value))
}

/// Exact minimizer of the distance to the nearest integer over all nonzero
/// combinations with coefficients in `-n..=n`, with a certified distance.
pub fn min_nonzero_dist_oracle(basis: &RadicalBasis, n: u64) -> Result<(RadicalSum, CertReal)> {
    min_nonzero_dist_oracle_capped(basis, n, DEFAULT_SEARCH_CAP)
}

/// As [`min_nonzero_dist_oracle`] with an explicit candidate cap.
pub fn min_nonzero_dist_oracle_capped(
    basis: &RadicalBasis,
    n: u64,
    cap: u64,
) -> Result<(RadicalSum, CertReal)> {
    if n < 1 {
        return Err(Error::Domain("oracle bound n must be at least 1".into()));
    }
    let k = basis.len();
    let total = (2 * n + 1)
        .checked_pow(k as u32)
        .filter(|&c| c / 2 <= cap && c <= u32::MAX as u64 - 1)
        .ok_or_else(|| Error::CapExceeded {
            what: "oracle candidates",
            need: format!("(2*{n}+1)^{k}"),
            cap,
        })?;
    let fixed = FixedRoots::build(basis, n)?;
    let mask = fixed.mask();

    // Track the two smallest distances; the runner-up separates the winner.
    #[derive(Clone, Copy)]
    struct Best {
        dist: u128,
        idx: u32,
        second: u128,
    }
    let merge = |a: Best, b: Best| -> Best {
        if a.dist <= b.dist {
            Best { dist: a.dist, idx: a.idx, second: a.second.min(b.dist) }
        } else {
            Best { dist: b.dist, idx: b.idx, second: b.second.min(a.dist) }
        }
    };
    let empty = Best { dist: u128::MAX, idx: u32::MAX, second: u128::MAX };
    let best = (0..total as u32)
        .into_par_iter()
        .fold(
            || empty,
            |acc, idx| {
                let mut c = vec![0i64; k];
                decode_signed(idx as u64, n, k, &mut c);
                // Canonical representative: first nonzero coefficient > 0.
                match c.iter().find(|&&x| x != 0) {
                    None => return acc,
                    Some(&x) if x < 0 => return acc,
                    _ => {}
                }
                // Distance to nearest integer in fixed point: min(f, 2^P - f).
                let f = fixed.frac_of(&c);
                let wrap = mask.wrapping_sub(f).wrapping_add(1) & mask;
                let dist = if f == 0 { 0 } else { f.min(wrap) };
                merge(acc, Best { dist, idx, second: u128::MAX })
            },
        )
        .reduce(|| empty, merge);
    if best.idx == u32::MAX {
        return Err(Error::Domain("no nonzero candidates in oracle range".into()));
    }

    let mut coeffs = vec![0i64; k];
    decode_signed(best.idx as u64, n, k, &mut coeffs);
    // Certify against the half bound (any distance is at most 1/2).
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let (w, value) = certify_small(basis, coeffs, &half, fixed.frac_bits + 32)?;

    // The winner must separate from the runner-up by more than the total
    // fixed-point error, or the enumeration could not distinguish them.
    if best.second != u128::MAX {
        let err_bits = 2 + 64 - (k as u64 * n).max(1).leading_zeros() as i64;
        let second_lo = Dyadic::new(BigInt::from(best.second), -(fixed.frac_bits as i64)).add(
            &Dyadic::power_of_two(err_bits - fixed.frac_bits as i64).neg(),
        );
        if value.hi().cmp(&second_lo) == Ordering::Greater {
            return Err(Error::Domain(
                "oracle minimizer not separated from runner-up at fixed-point precision".into(),
            ));
        }
    }
    Ok((w, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certreal::parse_real;

    fn assert_encloses(v: &CertReal, decimal: &str, tol_num: i64, tol_den: i64) {
        let target = parse_real(decimal).unwrap();
        let tol = BigRational::new(BigInt::from(tol_num), BigInt::from(tol_den));
        let lo = &target - &tol;
        let hi = &target + &tol;
        assert_eq!(v.verdict_le_rational(&hi), BoundVerdict::Le, "value above {decimal}+tol");
        assert!(
            !matches!(v.verdict_le_rational(&lo), BoundVerdict::Le),
            "value below {decimal}-tol"
        );
    }

    #[test]
    fn basis_small_cases() {
        let b = build_basis(2, 2).unwrap();
        assert_eq!(b.elements, vec![2, 3, 6]);
        assert_eq!(b.primes, vec![2, 3]);
        let b = build_basis(2, 1).unwrap();
        assert_eq!(b.elements, vec![2]);
        let b = build_basis(3, 1).unwrap();
        assert_eq!(b.elements, vec![2, 4]);
        let b = build_basis(2, 6).unwrap();
        assert_eq!(b.elements.len(), 63);
        assert!(matches!(build_basis(2, 7), Err(Error::CapExceeded { .. })));
        assert!(build_basis(1, 1).is_err());
    }

    #[test]
    fn eval_simple_sums() {
        let b = build_basis(2, 1).unwrap();
        let w = RadicalSum::from_coeffs(&b, [(2u64, 1i64)].into_iter().collect(), 1);
        let v = w.eval(128);
        assert_encloses(&v, "0.41421356237309504880168872420969807856967187537694", 1, 1i64 << 40);

        let zero = RadicalSum::zero(&b);
        let v = zero.eval(64);
        assert!(v.is_exact());
        assert!(v.mid().is_zero());
    }

    #[test]
    fn eval_three_term_combination() {
        // sqrt 2 + sqrt 3 - sqrt 6, checked against an independent
        // 50-digit evaluation.
        let b = build_basis(2, 2).unwrap();
        let w = RadicalSum::from_coeffs(
            &b,
            [(2u64, 1i64), (3, 1), (6, -1)].into_iter().collect(),
            0,
        );
        let v = w.eval(192);
        assert_encloses(&v, "0.69677462715879424413185099100967905354652964853066", 1, 1i64 << 60);
    }

    #[test]
    fn small_fracpart_matches_known_minima() {
        let b = build_basis(2, 1).unwrap();
        let (w, dist) = find_small_fracpart_capped(&b, 12, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(w.coeff(2).abs(), 12);
        assert_encloses(&dist, "0.0294372515228594143797353094836", 1, 1 << 20);

        let (w, dist) = find_small_fracpart_capped(&b, 5, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(w.coeff(2).abs(), 5);
        assert_encloses(&dist, "0.0710678118654752440084436210485", 1, 1 << 20);
    }

    #[test]
    fn small_fracpart_meets_pigeonhole_bound() {
        let cases: Vec<(u32, u32, u64)> = vec![
            (2, 1, 2),
            (2, 1, 7),
            (2, 1, 30),
            (2, 2, 3),
            (2, 2, 4),
            (2, 2, 7),
            (3, 1, 3),
            (3, 1, 9),
        ];
        for (d, xi, n) in cases {
            let b = build_basis(d, xi).unwrap();
            let (w, dist) = find_small_fracpart_capped(&b, n, DEFAULT_SEARCH_CAP).unwrap();
            assert!(w.is_nonzero());
            assert!(w.m_norm() <= n, "m_norm {} > n {} for d={d} xi={xi}", w.m_norm(), n);
            let bound =
                BigRational::new(BigInt::one(), BigInt::from(n).pow(b.len() as u32));
            assert_eq!(
                dist.verdict_le_rational(&bound),
                BoundVerdict::Le,
                "pigeonhole bound failed for d={d} xi={xi} n={n}"
            );
            assert_eq!(dist.verdict_positive(), BoundVerdict::Le, "distance not positive");
        }
    }

    #[test]
    fn fracpart_xi_two_example() {
        let b = build_basis(2, 2).unwrap();
        let (w, dist) = find_small_fracpart_capped(&b, 4, DEFAULT_SEARCH_CAP).unwrap();
        assert!(w.m_norm() <= 4);
        let bound = BigRational::new(BigInt::one(), BigInt::from(64));
        assert_eq!(dist.verdict_le_rational(&bound), BoundVerdict::Le);
    }

    #[test]
    fn oracle_small_cases() {
        let b = build_basis(2, 1).unwrap();
        let (w, dist) = min_nonzero_dist_oracle(&b, 10).unwrap();
        assert_eq!(w.coeff(2).abs(), 5);
        assert_encloses(&dist, "0.0710678118654752440084436210485", 1, 1 << 20);

        let (w, dist) = min_nonzero_dist_oracle(&b, 2).unwrap();
        assert_eq!(w.coeff(2).abs(), 2);
        assert_encloses(&dist, "0.171572875253809902396622551581", 1, 1 << 20);

        let (w, dist) = min_nonzero_dist_oracle(&b, 1).unwrap();
        assert_eq!(w.coeff(2).abs(), 1);
        assert_encloses(&dist, "0.41421356237309504880168872421", 1, 1 << 20);
    }

    #[test]
    fn oracle_beats_or_ties_search() {
        for (d, xi, n) in [(2u32, 1u32, 5u64), (2, 1, 12), (2, 2, 4)] {
            let b = build_basis(d, xi).unwrap();
            let (_, search) = find_small_fracpart_capped(&b, n, DEFAULT_SEARCH_CAP).unwrap();
            let (_, oracle) = min_nonzero_dist_oracle(&b, n).unwrap();
            assert!(
                oracle.lo().cmp(&search.hi()) != Ordering::Greater,
                "oracle distance must not exceed search distance (d={d} xi={xi} n={n})"
            );
        }
    }

    #[test]
    fn oracle_scaled_distance_corridor() {
        // For d=2, xi=1 the minimizing coefficients are continued-fraction
        // denominators of sqrt 2, and coefficient * distance approaches
        // 1/(2 sqrt 2) = 0.3535...; it stays within [0.29, 0.51] throughout.
        let b = build_basis(2, 1).unwrap();
        let lo = BigRational::new(BigInt::from(29), BigInt::from(100));
        let hi = BigRational::new(BigInt::from(51), BigInt::from(100));
        for e in 1..=12u32 {
            let n = 1u64 << e;
            let (w, dist) = min_nonzero_dist_oracle(&b, n).unwrap();
            let scaled = dist.mul_i64(w.m_norm() as i64);
            assert_eq!(
                scaled.verdict_le_rational(&hi),
                BoundVerdict::Le,
                "corridor upper bound failed at n = 2^{e}"
            );
            assert!(
                matches!(scaled.verdict_le_rational(&lo), BoundVerdict::Gt),
                "corridor lower bound failed at n = 2^{e}"
            );
        }
    }

    #[test]
    fn sum_algebra() {
        let b = build_basis(2, 2).unwrap();
        let w = RadicalSum::from_coeffs(&b, [(2u64, 2i64), (3, -1)].into_iter().collect(), 4);
        assert_eq!(w.m_norm(), 2);
        let s = w.add(&w.neg());
        assert!(!s.is_nonzero());
        assert_eq!(s.offset, 0);
        let t = w.scale(-3);
        assert_eq!(t.coeff(2), -6);
        assert_eq!(t.offset, -12);
    }
}
