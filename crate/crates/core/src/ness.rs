//! The Ness-Helleseth function, its derivatives, DDT and brute-force
//! differential spectrum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Chi, FieldCtx, FieldElem};

/// Exponents of `f_u(x) = u x^d1 + x^d2`, derived from the field on demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NhParams {
    pub u: FieldElem,
}

impl NhParams {
    pub fn new(u: FieldElem) -> Self {
        NhParams { u }
    }

    /// `(q-1)/2 - 1`
    pub fn d1(&self, ctx: &FieldCtx) -> u64 {
        u64::from(ctx.q() - 1) / 2 - 1
    }

    /// `q - 2`
    pub fn d2(&self, ctx: &FieldCtx) -> u64 {
        u64::from(ctx.q()) - 2
    }
}

/// `f_u(x)` by direct exponentiation.
pub fn f_eval(ctx: &FieldCtx, u: FieldElem, x: FieldElem) -> FieldElem {
    let p = NhParams::new(u);
    ctx.mul(u, ctx.pow(x, p.d1(ctx))).add(ctx.pow(x, p.d2(ctx)))
}

/// `f_u(x) = (u χ(x) + 1) x^{-1}` for `x ≠ 0`, and `f_u(0) = 0`.
pub fn f_eval_fast(ctx: &FieldCtx, u: FieldElem, x: FieldElem) -> FieldElem {
    if x.is_zero() {
        return FieldElem::ZERO;
    }
    let twisted = match ctx.chi(x) {
        Chi::Plus => u,
        _ => u.neg(),
    };
    ctx.mul(twisted.add(FieldElem::ONE), ctx.inv(x).expect("x nonzero"))
}

/// `D_a f_u(x) = f_u(x + a) - f_u(x)`.
pub fn derivative(ctx: &FieldCtx, u: FieldElem, a: FieldElem, x: FieldElem) -> Result<FieldElem> {
    if a.is_zero() {
        return Err(Error::ZeroDifference);
    }
    Ok(f_eval_fast(ctx, u, x.add(a)).sub(f_eval_fast(ctx, u, x)))
}

/// `δ(a, b) = #{x : D_a f_u(x) = b}`.
pub fn ddt_entry(ctx: &FieldCtx, u: FieldElem, a: FieldElem, b: FieldElem) -> Result<u32> {
    if a.is_zero() {
        return Err(Error::ZeroDifference);
    }
    let table = FunctionTable::new(ctx, u);
    Ok(ctx
        .elements()
        .filter(|&x| table.derivative(ctx, a, x) == b)
        .count() as u32)
}

/// `f_u` tabulated over the field in enumeration order.
pub struct FunctionTable {
    elems: Vec<FieldElem>,
    values: Vec<FieldElem>,
}

impl FunctionTable {
    pub fn new(ctx: &FieldCtx, u: FieldElem) -> Self {
        let elems = ctx.enumerate();
        let values = elems.iter().map(|&x| f_eval_fast(ctx, u, x)).collect();
        FunctionTable { elems, values }
    }

    #[inline]
    pub fn value(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        self.values[ctx.index(x) as usize]
    }

    #[inline]
    fn derivative(&self, ctx: &FieldCtx, a: FieldElem, x: FieldElem) -> FieldElem {
        self.value(ctx, x.add(a)).sub(self.value(ctx, x))
    }

    /// DDT row for `a` as a histogram indexed by the enumeration index of
    /// `b`: one pass over `x`.
    pub fn ddt_row(&self, ctx: &FieldCtx, a: FieldElem) -> Vec<u32> {
        let mut counts = vec![0u32; self.elems.len()];
        self.fill_row(ctx, a, &mut counts);
        counts
    }

    fn fill_row(&self, ctx: &FieldCtx, a: FieldElem, counts: &mut [u32]) {
        for (x, &fx) in self.elems.iter().zip(&self.values) {
            let d = self.values[ctx.index(x.add(a)) as usize].sub(fx);
            counts[ctx.index(d) as usize] += 1;
        }
    }
}

/// DDT row `[δ(a, b)]_b`, with `b` in enumeration order.
pub fn ddt_row(ctx: &FieldCtx, u: FieldElem, a: FieldElem) -> Result<Vec<u32>> {
    if a.is_zero() {
        return Err(Error::ZeroDifference);
    }
    Ok(FunctionTable::new(ctx, u).ddt_row(ctx, a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    BruteForce,
    ClosedForm,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::BruteForce => "brute-force",
            Source::ClosedForm => "closed-form",
        }
    }
}

/// `[ω0, ..., ωk]`, `ωi = #{(a, b) ∈ F* × F : δ(a, b) = i}`, with `k` the
/// differential uniformity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub omegas: Vec<u64>,
    pub source: Source,
}

impl Spectrum {
    pub fn uniformity(&self) -> usize {
        self.omegas.len().saturating_sub(1)
    }

    /// `Σ ωi = Σ i ωi = (q-1) q`.
    pub fn satisfies_sum_identities(&self, q: u32) -> bool {
        let total = u64::from(q - 1) * u64::from(q);
        let count: u64 = self.omegas.iter().sum();
        let weighted: u64 = self
            .omegas
            .iter()
            .enumerate()
            .map(|(i, &w)| i as u64 * w)
            .sum();
        count == total && weighted == total
    }

    pub fn record(&self, ctx: &FieldCtx, u: FieldElem) -> SpectrumRecord {
        SpectrumRecord {
            n: ctx.n(),
            modulus: ctx.modulus_string(),
            u: ctx.format_elem(u),
            source: self.source.label().into(),
            omegas: self.omegas.clone(),
        }
    }
}

/// Serialized spectrum:
/// `{"n": int, "modulus": str, "u": str, "source": str, "omegas": [int...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub n: usize,
    pub modulus: String,
    pub u: String,
    pub source: String,
    pub omegas: Vec<u64>,
}

/// Exhaustive spectrum over all `(a, b) ∈ F* × F`; parallel over `a`.
pub fn spectrum_bruteforce(ctx: &FieldCtx, u: FieldElem) -> Spectrum {
    let table = FunctionTable::new(ctx, u);
    let q = ctx.q() as usize;
    let hist = (1..ctx.q())
        .into_par_iter()
        .fold(
            || (vec![0u32; q], Vec::<u64>::new()),
            |(mut counts, mut hist), ai| {
                counts.iter_mut().for_each(|c| *c = 0);
                table.fill_row(ctx, ctx.from_index(ai), &mut counts);
                for &c in &counts {
                    let c = c as usize;
                    if hist.len() <= c {
                        hist.resize(c + 1, 0);
                    }
                    hist[c] += 1;
                }
                (counts, hist)
            },
        )
        .map(|(_, hist)| hist)
        .reduce(Vec::new, merge_histograms);
    Spectrum {
        omegas: hist,
        source: Source::BruteForce,
    }
}

fn merge_histograms(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// `max δ(a, b)` over `a ≠ 0`.
pub fn differential_uniformity(ctx: &FieldCtx, u: FieldElem) -> usize {
    spectrum_bruteforce(ctx, u).uniformity()
}
