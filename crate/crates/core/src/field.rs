//! Arithmetic in GF(3^n) for odd `n` in `3..=13`.
//!
//! Elements are bit-sliced: a pair of masks `(ones, twos)` where bit `i` of
//! `ones` (resp. `twos`) is set when the coefficient of `x^i` is 1 (resp. 2).
//! Addition is a handful of bitwise operations; multiplication is
//! shift-and-add with reduction by the modulus, or a log/antilog lookup when
//! the field is small enough to tabulate.
//!
//! The enumeration order of elements is the little-endian base-3 counter on
//! the coefficient vector, so the element with index `k` has coefficient
//! digits equal to the base-3 digits of `k`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::poly3;

pub const MIN_DEGREE: usize = 3;
pub const MAX_DEGREE: usize = 13;
/// Log tables are built only up to this field size.
pub const TABLE_LIMIT: u32 = 19_683; // 3^9

/// An element of GF(3^n) as a bit-sliced coefficient vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElem {
    ones: u16,
    twos: u16,
}

#[allow(clippy::should_implement_trait)]
impl FieldElem {
    pub const ZERO: FieldElem = FieldElem { ones: 0, twos: 0 };
    pub const ONE: FieldElem = FieldElem { ones: 1, twos: 0 };
    /// The element 2 = -1.
    pub const TWO: FieldElem = FieldElem { ones: 0, twos: 1 };

    /// Builds an element from base-3 digits, lowest degree first.
    ///
    /// Digits outside `0..3` are reduced mod 3; only the first 16 digits
    /// are representable.
    pub fn from_coeffs(coeffs: &[u8]) -> Self {
        let mut e = FieldElem::ZERO;
        for (i, &c) in coeffs.iter().enumerate().take(16) {
            match c % 3 {
                1 => e.ones |= 1 << i,
                2 => e.twos |= 1 << i,
                _ => {}
            }
        }
        e
    }

    /// Coefficient of `x^i`.
    #[inline]
    pub fn coeff(self, i: usize) -> u8 {
        (((self.ones >> i) & 1) + 2 * ((self.twos >> i) & 1)) as u8
    }

    /// The length-`n` coefficient vector, lowest degree first.
    pub fn coeffs(self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.coeff(i)).collect()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.ones == 0 && self.twos == 0
    }

    #[inline]
    pub fn add(self, rhs: FieldElem) -> FieldElem {
        let t = (self.ones | rhs.twos) ^ (self.twos | rhs.ones);
        FieldElem {
            ones: (self.twos | rhs.twos) ^ t,
            twos: (self.ones | rhs.ones) ^ t,
        }
    }

    #[inline]
    pub fn neg(self) -> FieldElem {
        FieldElem {
            ones: self.twos,
            twos: self.ones,
        }
    }

    #[inline]
    pub fn sub(self, rhs: FieldElem) -> FieldElem {
        self.add(rhs.neg())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = (16 - (self.ones | self.twos).leading_zeros() as usize).max(1);
        let digits: String = (0..len).map(|i| char::from(b'0' + self.coeff(i))).collect();
        write!(f, "FieldElem({digits})")
    }
}

/// Value of the quadratic character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Chi {
    Minus = -1,
    Zero = 0,
    Plus = 1,
}

impl Chi {
    #[inline]
    pub fn value(self) -> i64 {
        self as i8 as i64
    }

    pub fn from_value(v: i64) -> Option<Chi> {
        match v {
            -1 => Some(Chi::Minus),
            0 => Some(Chi::Zero),
            1 => Some(Chi::Plus),
            _ => None,
        }
    }
}

impl std::ops::Mul for Chi {
    type Output = Chi;
    fn mul(self, rhs: Chi) -> Chi {
        Chi::from_value(self.value() * rhs.value()).unwrap()
    }
}

impl std::ops::Neg for Chi {
    type Output = Chi;
    fn neg(self) -> Chi {
        Chi::from_value(-self.value()).unwrap()
    }
}

struct LogTables {
    /// `log[index(a)]` for `a != 0`; `u32::MAX` at zero.
    log: Vec<u32>,
    /// `exp[k] = g^k` for `k < 2(q-1)`, doubled to skip a reduction.
    exp: Vec<FieldElem>,
}

/// GF(3^n) with a fixed irreducible modulus and primitive element.
///
/// Immutable after construction apart from the lazily built log tables,
/// which are published through a `OnceLock`.
pub struct FieldCtx {
    n: usize,
    q: u32,
    modulus: Vec<u8>,
    /// `x^n mod modulus`.
    x_pow_n: FieldElem,
    generator: FieldElem,
    /// Sum of `3^i` over the set bits of a mask; indexes both halves.
    mask_weight: Vec<u32>,
    tables: OnceLock<Option<LogTables>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("n", &self.n)
            .field("q", &self.q)
            .field("modulus", &self.modulus_string())
            .field("generator", &self.format_elem(self.generator))
            .finish()
    }
}

impl FieldCtx {
    /// Builds GF(3^n). Without an explicit modulus the smallest monic
    /// irreducible in counter order on the lower coefficients is used.
    pub fn new(n: usize, modulus: Option<&[u8]>) -> Result<FieldCtx> {
        if n.is_multiple_of(2) {
            return Err(Error::EvenDegree(n));
        }
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange(n));
        }
        let modulus = match modulus {
            Some(m) => {
                let mut m = m.to_vec();
                poly3::trim(&mut m);
                if m.len() != n + 1 || m[n] != 1 || m.iter().any(|&c| c > 2) {
                    return Err(Error::ModulusShape {
                        modulus: poly3::to_digits(&m),
                        expected: n,
                    });
                }
                if let Some(f) = poly3::find_factor(&m) {
                    let root = (f.len() == 2).then(|| (3 - f[0]) % 3);
                    return Err(Error::ReducibleModulus {
                        modulus: poly3::to_digits(&m),
                        factor: poly3::to_digits(&f),
                        root,
                    });
                }
                m
            }
            None => default_modulus(n),
        };
        let q = 3u32.pow(n as u32);
        let mask_weight = (0..1u32 << n)
            .map(|mask| {
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| 3u32.pow(i as u32))
                    .sum()
            })
            .collect();
        // x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        let x_pow_n = FieldElem::from_coeffs(&modulus[..n]).neg();
        let mut ctx = FieldCtx {
            n,
            q,
            modulus,
            x_pow_n,
            generator: FieldElem::ONE,
            mask_weight,
            tables: OnceLock::new(),
        };
        ctx.generator = ctx.find_generator();
        Ok(ctx)
    }

    /// Parses a modulus in compact digit form and builds the field.
    pub fn with_modulus_str(n: usize, modulus: &str) -> Result<FieldCtx> {
        let digits = parse_digits(modulus)?;
        FieldCtx::new(n, Some(&digits))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus coefficients, lowest degree first, length `n + 1`.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        poly3::to_digits(&self.modulus)
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn has_tables(&self) -> bool {
        self.tables().is_some()
    }

    fn tables(&self) -> Option<&LogTables> {
        self.tables
            .get_or_init(|| (self.q <= TABLE_LIMIT).then(|| self.build_tables()))
            .as_ref()
    }

    fn build_tables(&self) -> LogTables {
        let order = (self.q - 1) as usize;
        let mut log = vec![u32::MAX; self.q as usize];
        let mut exp = Vec::with_capacity(2 * order);
        let mut cur = FieldElem::ONE;
        for k in 0..order {
            exp.push(cur);
            log[self.index(cur) as usize] = k as u32;
            cur = self.mul_schoolbook(cur, self.generator);
        }
        debug_assert_eq!(cur, FieldElem::ONE);
        exp.extend_from_within(..);
        LogTables { log, exp }
    }

    /// Enumeration index of `a`: its coefficient vector read as a base-3
    /// number, lowest digit first.
    #[inline]
    pub fn index(&self, a: FieldElem) -> u32 {
        self.mask_weight[a.ones as usize] + 2 * self.mask_weight[a.twos as usize]
    }

    pub fn from_index(&self, mut k: u32) -> FieldElem {
        debug_assert!(k < self.q);
        let mut e = FieldElem::ZERO;
        for i in 0..self.n {
            match k % 3 {
                1 => e.ones |= 1 << i,
                2 => e.twos |= 1 << i,
                _ => {}
            }
            k /= 3;
        }
        e
    }

    /// Embeds an integer via the prime field.
    pub fn from_int(&self, v: i64) -> FieldElem {
        match v.rem_euclid(3) {
            1 => FieldElem::ONE,
            2 => FieldElem::TWO,
            _ => FieldElem::ZERO,
        }
    }

    /// All elements in enumeration order, starting at zero.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |k| self.from_index(k))
    }

    /// Same as [`FieldCtx::elements`], collected.
    pub fn enumerate(&self) -> Vec<FieldElem> {
        self.elements().collect()
    }

    pub fn in_prime_field(&self, a: FieldElem) -> bool {
        (a.ones | a.twos) & !1 == 0
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a.add(b)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a.sub(b)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        a.neg()
    }

    #[inline]
    fn times_x(&self, a: FieldElem) -> FieldElem {
        let top = a.coeff(self.n - 1);
        let mask = ((1u32 << self.n) - 1) as u16;
        let shifted = FieldElem {
            ones: (a.ones << 1) & mask,
            twos: (a.twos << 1) & mask,
        };
        match top {
            1 => shifted.add(self.x_pow_n),
            2 => shifted.sub(self.x_pow_n),
            _ => shifted,
        }
    }

    /// Shift-and-add multiplication with reduction; never touches tables.
    pub fn mul_schoolbook(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        let mut cur = a;
        for i in 0..self.n {
            match b.coeff(i) {
                1 => acc = acc.add(cur),
                2 => acc = acc.sub(cur),
                _ => {}
            }
            if i + 1 < self.n {
                cur = self.times_x(cur);
            }
        }
        acc
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        match self.tables() {
            Some(t) => {
                let la = t.log[self.index(a) as usize] as usize;
                let lb = t.log[self.index(b) as usize] as usize;
                t.exp[la + lb]
            }
            None => self.mul_schoolbook(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// `a^e` by square-and-multiply, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn pow_schoolbook(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_schoolbook(acc, base);
            }
            base = self.mul_schoolbook(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match self.tables() {
            Some(t) => {
                let order = (self.q - 1) as usize;
                let la = t.log[self.index(a) as usize] as usize;
                t.exp[(order - la) % order]
            }
            None => self.pow(a, u64::from(self.q) - 2),
        })
    }

    /// `a / b`; errors when `b = 0`.
    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Quadratic character.
    pub fn chi(&self, a: FieldElem) -> Chi {
        if a.is_zero() {
            return Chi::Zero;
        }
        if let Some(t) = self.tables() {
            // the generator is a nonsquare
            return if t.log[self.index(a) as usize] % 2 == 0 {
                Chi::Plus
            } else {
                Chi::Minus
            };
        }
        self.chi_by_pow(a)
    }

    /// `a^((q-1)/2)` read as a sign.
    pub fn chi_by_pow(&self, a: FieldElem) -> Chi {
        let r = self.pow(a, u64::from(self.q - 1) / 2);
        if r.is_zero() {
            Chi::Zero
        } else if r == FieldElem::ONE {
            Chi::Plus
        } else {
            debug_assert_eq!(r, FieldElem::TWO);
            Chi::Minus
        }
    }

    /// The square root `r` of `a` with `chi(r) = +1`.
    pub fn sqrt_canonical(&self, a: FieldElem) -> Result<FieldElem> {
        if self.chi(a) != Chi::Plus {
            return Err(Error::NotASquare(self.format_elem(a)));
        }
        // q = 3 mod 4
        let r = self.pow(a, (u64::from(self.q) + 1) / 4);
        debug_assert_eq!(self.square(r), a);
        Ok(if self.chi(r) == Chi::Plus { r } else { r.neg() })
    }

    /// Compact digit string of length `n`, lowest degree first.
    pub fn format_elem(&self, a: FieldElem) -> String {
        a.coeffs(self.n)
            .into_iter()
            .map(|c| char::from(b'0' + c))
            .collect()
    }

    /// Parses a compact digit string of at most `n` digits.
    pub fn parse_elem(&self, text: &str) -> Result<FieldElem> {
        let digits = parse_digits(text)?;
        if digits.len() > self.n {
            return Err(Error::Parse {
                text: text.to_string(),
                reason: format!("more than {} digits", self.n),
            });
        }
        Ok(FieldElem::from_coeffs(&digits))
    }

    fn find_generator(&self) -> FieldElem {
        let order = u64::from(self.q - 1);
        let primes = prime_factors(order);
        (1..self.q)
            .map(|k| self.from_index(k))
            .find(|&g| {
                primes
                    .iter()
                    .all(|&p| self.pow_schoolbook(g, order / p) != FieldElem::ONE)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }
}

fn default_modulus(n: usize) -> Vec<u8> {
    (0..3u64.pow(n as u32))
        .map(|k| poly3::monic_from_counter(n, k))
        .find(|m| m[0] != 0 && poly3::find_factor(m).is_none())
        .expect("irreducible polynomials exist in every degree")
}

fn parse_digits(text: &str) -> Result<Vec<u8>> {
    if text.is_empty() {
        return Err(Error::Parse {
            text: String::new(),
            reason: "empty".into(),
        });
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            '2' => Ok(2),
            _ => Err(Error::Parse {
                text: text.to_string(),
                reason: format!("digit {c:?} not in 0..=2"),
            }),
        })
        .collect()
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx3() -> FieldCtx {
        FieldCtx::new(3, None).unwrap()
    }

    #[test]
    fn default_modulus_n3() {
        let ctx = ctx3();
        // x^3 + 2x + 1
        assert_eq!(ctx.modulus(), &[1, 2, 0, 1]);
        assert_eq!(ctx.modulus_string(), "1201");
    }

    #[test]
    fn reducible_modulus_rejected() {
        let err = FieldCtx::with_modulus_str(3, "0101").unwrap_err();
        assert_eq!(
            err,
            Error::ReducibleModulus {
                modulus: "0101".into(),
                factor: "01".into(),
                root: Some(0),
            }
        );
    }

    #[test]
    fn even_and_out_of_range_degrees() {
        assert_eq!(FieldCtx::new(4, None).unwrap_err(), Error::EvenDegree(4));
        assert_eq!(
            FieldCtx::new(1, None).unwrap_err(),
            Error::DegreeOutOfRange(1)
        );
        assert_eq!(
            FieldCtx::new(15, None).unwrap_err(),
            Error::DegreeOutOfRange(15)
        );
    }

    #[test]
    fn non_monic_modulus_rejected() {
        assert!(matches!(
            FieldCtx::with_modulus_str(3, "1202"),
            Err(Error::ModulusShape { .. })
        ));
        assert!(matches!(
            FieldCtx::with_modulus_str(3, "12"),
            Err(Error::ModulusShape { .. })
        ));
    }

    #[test]
    fn q_for_n5() {
        assert_eq!(FieldCtx::new(5, None).unwrap().q(), 243);
    }

    #[test]
    fn bitsliced_add_matches_digit_add() {
        for a in 0..3u8 {
            for b in 0..3u8 {
                let s = FieldElem::from_coeffs(&[a]).add(FieldElem::from_coeffs(&[b]));
                assert_eq!(s.coeff(0), (a + b) % 3, "{a}+{b}");
                assert_eq!(s.coeff(1), 0);
            }
        }
    }

    #[test]
    fn x_times_x_squared() {
        let ctx = ctx3();
        let x = FieldElem::from_coeffs(&[0, 1]);
        let x2 = FieldElem::from_coeffs(&[0, 0, 1]);
        // x^3 = -2x - 1 = x + 2
        let expected = FieldElem::from_coeffs(&[2, 1]);
        assert_eq!(ctx.mul(x, x2), expected);
        assert_eq!(ctx.mul_schoolbook(x, x2), expected);
    }

    #[test]
    fn inverse_basics() {
        let ctx = ctx3();
        assert_eq!(ctx.inv(FieldElem::ONE).unwrap(), FieldElem::ONE);
        assert_eq!(ctx.inv(FieldElem::TWO).unwrap(), FieldElem::TWO);
        assert_eq!(ctx.inv(FieldElem::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn pow_edge_cases() {
        let ctx = ctx3();
        assert_eq!(ctx.pow(FieldElem::ZERO, 0), FieldElem::ONE);
        assert_eq!(ctx.pow(FieldElem::ZERO, 25), FieldElem::ZERO);
        let g = ctx.generator();
        assert_eq!(ctx.pow(g, 13), FieldElem::TWO);
    }

    #[test]
    fn chi_of_zero_and_minus_one() {
        let ctx = ctx3();
        assert_eq!(ctx.chi(FieldElem::ZERO), Chi::Zero);
        assert_eq!(ctx.chi(FieldElem::TWO), Chi::Minus);
    }

    #[test]
    fn sqrt_of_one_and_nonsquare() {
        let ctx = ctx3();
        assert_eq!(ctx.sqrt_canonical(FieldElem::ONE).unwrap(), FieldElem::ONE);
        assert!(ctx.sqrt_canonical(FieldElem::TWO).is_err());
        assert!(ctx.sqrt_canonical(FieldElem::ZERO).is_err());
    }

    #[test]
    fn enumeration_order() {
        let ctx = ctx3();
        let all = ctx.enumerate();
        assert_eq!(all.len(), 27);
        assert_eq!(all[0], FieldElem::ZERO);
        assert_eq!(all[1], FieldElem::ONE);
        assert_eq!(all[3], FieldElem::from_coeffs(&[0, 1]));
        for (k, &e) in all.iter().enumerate() {
            assert_eq!(ctx.index(e), k as u32);
        }
    }

    #[test]
    fn parse_and_format() {
        let ctx = ctx3();
        let e = ctx.parse_elem("12").unwrap();
        assert_eq!(e, FieldElem::from_coeffs(&[1, 2]));
        assert_eq!(ctx.format_elem(e), "120");
        assert!(ctx.parse_elem("1201").is_err());
        assert!(ctx.parse_elem("13").is_err());
        assert!(ctx.parse_elem("").is_err());
    }

    #[test]
    fn large_field_runs_without_tables() {
        let ctx = FieldCtx::new(11, None).unwrap();
        assert!(!ctx.has_tables());
        let g = ctx.generator();
        let gi = ctx.inv(g).unwrap();
        assert_eq!(ctx.mul(g, gi), FieldElem::ONE);
        assert_eq!(ctx.chi(g), Chi::Minus);
    }
}
