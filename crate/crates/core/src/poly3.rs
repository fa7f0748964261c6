//! Dense polynomials over GF(3), used only for choosing and checking moduli.
//!
//! Coefficients are stored lowest degree first, each in `0..3`. The zero
//! polynomial is the empty vector.

pub(crate) type Poly3 = Vec<u8>;

pub(crate) fn trim(p: &mut Poly3) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[u8]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

/// Remainder of `num` modulo the monic polynomial `den`.
pub(crate) fn rem_monic(num: &[u8], den: &[u8]) -> Poly3 {
    let dd = degree(den).expect("divisor must be nonzero");
    debug_assert_eq!(den[dd], 1);
    let mut r: Poly3 = num.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dd {
            break;
        }
        let c = r[dr];
        let shift = dr - dd;
        for (i, &d) in den[..=dd].iter().enumerate() {
            r[i + shift] = (r[i + shift] + 3 * 3 - c * d) % 3;
        }
        trim(&mut r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-3
/// digits of `k` (lowest first).
pub(crate) fn monic_from_counter(deg: usize, mut k: u64) -> Poly3 {
    let mut p = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        p.push((k % 3) as u8);
        k /= 3;
    }
    p.push(1);
    p
}

/// Returns the first monic factor of degree `1..=deg/2` found in counter
/// order, or `None` if `p` is irreducible.
pub(crate) fn find_factor(p: &[u8]) -> Option<Poly3> {
    let deg = degree(p)?;
    for d in 1..=deg / 2 {
        let count = 3u64.pow(d as u32);
        for k in 0..count {
            let cand = monic_from_counter(d, k);
            if rem_monic(p, &cand).is_empty() {
                return Some(cand);
            }
        }
    }
    None
}

pub(crate) fn to_digits(p: &[u8]) -> String {
    p.iter().map(|&c| char::from(b'0' + c)).collect()
}
