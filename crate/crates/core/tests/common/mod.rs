//! Reference arithmetic for the integration tests, written against plain
//! digit vectors so it shares no code with the bit-sliced field layer.

#![allow(dead_code)]

use nhspec::{FieldCtx, FieldElem};

/// GF(3)[x] / (m) on little-endian digit vectors of length `n`.
pub struct Oracle {
    pub n: usize,
    pub q: u64,
    modulus: Vec<u8>,
}

fn trim(mut v: Vec<u8>) -> Vec<u8> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[u8], b: &[u8]) -> Vec<u8> {
    let len = a.len().max(b.len());
    let d = |v: &[u8], i: usize| v.get(i).copied().unwrap_or(0);
    trim((0..len).map(|i| (d(a, i) + 3 - d(b, i)) % 3).collect())
}

fn poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % 3;
        }
    }
    trim(out)
}

/// Long division; `(quotient, remainder)`.
fn poly_divmod(a: &[u8], b: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = b[b.len() - 1]; // 1 and 2 are self-inverse mod 3
    let mut quot = vec![0u8; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (r[r.len() - 1] * lead_inv) % 3;
        quot[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[i + shift] = (r[i + shift] + 3 * 3 - c * bi) % 3;
        }
        r = trim(r);
    }
    (trim(quot), r)
}

impl Oracle {
    pub fn new(ctx: &FieldCtx) -> Self {
        Oracle {
            n: ctx.n(),
            q: u64::from(ctx.q()),
            modulus: ctx.modulus().to_vec(),
        }
    }

    pub fn digits(&self, e: FieldElem) -> Vec<u8> {
        trim(e.coeffs(self.n))
    }

    pub fn elem(&self, d: &[u8]) -> FieldElem {
        FieldElem::from_coeffs(d)
    }

    pub fn add(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let len = a.len().max(b.len());
        let d = |v: &[u8], i: usize| v.get(i).copied().unwrap_or(0);
        trim((0..len).map(|i| (d(a, i) + d(b, i)) % 3).collect())
    }

    pub fn mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        poly_divmod(&poly_mul(a, b), &self.modulus).1
    }

    pub fn pow(&self, a: &[u8], mut e: u64) -> Vec<u8> {
        let mut base = a.to_vec();
        let mut acc = vec![1u8];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: &[u8]) -> Option<Vec<u8>> {
        let a = trim(a.to_vec());
        if a.is_empty() {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus.clone(), a);
        let (mut s0, mut s1) = (Vec::<u8>::new(), vec![1u8]);
        while !r1.is_empty() {
            let (quot, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant c; c^{-1} = c in GF(3)
        assert_eq!(r0.len(), 1, "modulus not irreducible");
        let c = r0[0];
        Some(trim(s0.iter().map(|&x| x * c % 3).collect()))
    }

    /// χ by Euler's criterion.
    pub fn chi(&self, a: &[u8]) -> i64 {
        let a = trim(a.to_vec());
        if a.is_empty() {
            return 0;
        }
        match self.pow(&a, (self.q - 1) / 2).as_slice() {
            [1] => 1,
            [2] => -1,
            other => panic!("Euler criterion gave {other:?}"),
        }
    }

    pub fn chi_elem(&self, e: FieldElem) -> i64 {
        self.chi(&self.digits(e))
    }

    /// Base-3 integer value of a digit vector.
    pub fn key(&self, d: &[u8]) -> usize {
        d.iter().rev().fold(0, |acc, &c| acc * 3 + c as usize)
    }

    pub fn key_digits(&self, mut k: usize) -> Vec<u8> {
        let mut d = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            d.push((k % 3) as u8);
            k /= 3;
        }
        trim(d)
    }

    pub fn eval(&self, poly: &[Vec<u8>], z: &[u8]) -> Vec<u8> {
        poly.iter()
            .rev()
            .fold(vec![], |acc, c| self.add(&self.mul(&acc, z), c))
    }

    /// `Σ_z χ(P(z))`.
    pub fn char_sum(&self, poly: &[Vec<u8>]) -> i64 {
        (0..self.q as usize)
            .map(|k| self.chi(&self.eval(poly, &self.key_digits(k))))
            .sum()
    }

    /// Spectrum of `u x^((q-1)/2 - 1) + x^(q-2)` by direct counting.
    pub fn spectrum(&self, u: FieldElem) -> Vec<u64> {
        let q = self.q as usize;
        let u = self.digits(u);
        let f: Vec<usize> = (0..q)
            .map(|k| {
                let x = self.key_digits(k);
                let v = self.add(
                    &self.mul(&u, &self.pow(&x, (self.q - 1) / 2 - 1)),
                    &self.pow(&x, self.q - 2),
                );
                self.key(&v)
            })
            .collect();
        let fd: Vec<Vec<u8>> = f.iter().map(|&k| self.key_digits(k)).collect();
        let neg = |d: &[u8]| -> Vec<u8> { d.iter().map(|&c| (3 - c) % 3).collect() };
        let mut hist = vec![0u64; q + 1];
        let mut counts = vec![0u32; q];
        for a in 1..q {
            counts.iter_mut().for_each(|c| *c = 0);
            let ad = self.key_digits(a);
            for x in 0..q {
                let xa = self.key(&self.add(&self.key_digits(x), &ad));
                let d = self.add(&fd[xa], &neg(&fd[x]));
                counts[self.key(&d)] += 1;
            }
            for &c in &counts {
                hist[c as usize] += 1;
            }
        }
        while hist.last() == Some(&0) {
            hist.pop();
        }
        hist
    }

    /// `δ(a, b)` by direct counting.
    pub fn ddt_entry(&self, u: FieldElem, a: FieldElem, b: FieldElem) -> u32 {
        let (u, a, b) = (self.digits(u), self.digits(a), self.digits(b));
        let f = |x: &[u8]| {
            self.add(
                &self.mul(&u, &self.pow(x, (self.q - 1) / 2 - 1)),
                &self.pow(x, self.q - 2),
            )
        };
        let neg = |d: &[u8]| -> Vec<u8> { trim(d.iter().map(|&c| (3 - c) % 3).collect()) };
        (0..self.q as usize)
            .filter(|&k| {
                let x = self.key_digits(k);
                self.add(&f(&self.add(&x, &a)), &neg(&f(&x))) == b
            })
            .count() as u32
    }
}

/// `[ω0..ω4]` straight from the closed-form formulas in rationals, or `None`
/// if a bracketed term is not an integer.
pub fn closed_form_oracle(q: i64, eps: i64, g3: i64, g4: i64) -> Option<Vec<i64>> {
    let frac = |num: i64, den: i64| (num % den == 0).then_some(num / den);
    Some(
        [
            -1 + eps + frac(15 * q - 17 - g4, 32)?,
            3 - eps + frac(3 * q + 3 + 2 * g3 + g4, 16)?,
            -eps + frac(q - 7 - g3, 4)?,
            eps + frac(q + 1 + 2 * g3 - g4, 16)?,
            frac(q + 1 + g4, 32)?,
        ]
        .iter()
        .map(|w| (q - 1) * w)
        .collect(),
    )
}

/// Γ3 and Γ4 from their defining polynomial sums, on the oracle.
pub fn gammas_oracle(o: &Oracle, u: FieldElem) -> (i64, i64) {
    let ud = o.digits(u);
    let u2 = o.mul(&ud, &ud);
    let u4 = o.mul(&u2, &u2);
    let neg = |d: &[u8]| -> Vec<u8> { trim(d.iter().map(|&c| (3 - c) % 3).collect()) };
    let chi_up1 = o.chi(&o.add(&ud, &[1]));
    let p3 = vec![vec![], u2.clone(), vec![2], vec![1]];
    let p4 = vec![
        vec![],
        o.add(&u2, &neg(&u4)),
        neg(&o.add(&u2, &[1])),
        vec![],
        vec![],
        vec![1],
    ];
    (-chi_up1 * o.char_sum(&p3), -chi_up1 * o.char_sum(&p4))
}
