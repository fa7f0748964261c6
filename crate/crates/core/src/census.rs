//! Case analysis of `D_a f_u(x) = b` for `u ∈ U0 \ F3`.
//!
//! For `x ∉ {0, -a}` the equation becomes the quadratic
//! `b x² + (ab - u(τa - τ0)) x + a(u τ0 + 1) = 0` with `τa = χ(x + a)`,
//! `τ0 = χ(x)`. Each sign pattern gives one case; a root of a case's
//! quadratic counts only if its own characters reproduce the pattern.
//! Independently, the number of solutions is predicted from the characters
//! of a handful of expressions in `z = ab` alone.

use serde::{Deserialize, Serialize};

use crate::char_sums::GFamily;
use crate::error::{Error, Result};
use crate::field::{Chi, FieldCtx, FieldElem};
use crate::ness::FunctionTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::I, CaseId::II, CaseId::III, CaseId::IV];

    /// `(τa, τ0)`
    pub fn signs(self) -> (Chi, Chi) {
        match self {
            CaseId::I => (Chi::Plus, Chi::Plus),
            CaseId::II => (Chi::Plus, Chi::Minus),
            CaseId::III => (Chi::Minus, Chi::Plus),
            CaseId::IV => (Chi::Minus, Chi::Minus),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub case_id: CaseId,
    /// Roots of the case quadratic (distinct), desired or not.
    pub roots: Vec<FieldElem>,
    /// Roots whose `(χ(x+a), χ(x))` matches the case.
    pub desired: Vec<FieldElem>,
}

impl CaseOutcome {
    pub fn solutions_found(&self) -> u8 {
        self.desired.len() as u8
    }
}

/// Distinct roots of `A x² + B x + C` with `A ≠ 0`, via the discriminant
/// and the canonical square root. In characteristic 3 the roots are
/// `(B ∓ √(B² - AC)) / A`.
pub fn solve_quadratic(
    ctx: &FieldCtx,
    a2: FieldElem,
    a1: FieldElem,
    a0: FieldElem,
) -> Vec<FieldElem> {
    let inv = ctx.inv(a2).expect("leading coefficient must be nonzero");
    let disc = ctx.square(a1).sub(ctx.mul(a2, a0));
    match ctx.chi(disc) {
        Chi::Minus => vec![],
        Chi::Zero => vec![ctx.mul(a1, inv)],
        Chi::Plus => {
            let r = ctx.sqrt_canonical(disc).expect("square");
            vec![ctx.mul(a1.sub(r), inv), ctx.mul(a1.add(r), inv)]
        }
    }
}

fn sign_elem(c: Chi) -> FieldElem {
    match c {
        Chi::Plus => FieldElem::ONE,
        Chi::Minus => FieldElem::TWO,
        Chi::Zero => FieldElem::ZERO,
    }
}

/// Coefficients `(A, B, C)` of the case quadratic.
pub fn case_quadratic(
    ctx: &FieldCtx,
    u: FieldElem,
    a: FieldElem,
    b: FieldElem,
    case_id: CaseId,
) -> (FieldElem, FieldElem, FieldElem) {
    let (ta, t0) = case_id.signs();
    let (ta, t0) = (sign_elem(ta), sign_elem(t0));
    let lin = ctx.mul(a, b).sub(ctx.mul(u, ta.sub(t0)));
    let cst = ctx.mul(a, ctx.mul(u, t0).add(FieldElem::ONE));
    (b, lin, cst)
}

/// Solves one case and keeps the desired roots. Requires `a, b ≠ 0`.
pub fn case_solutions(
    ctx: &FieldCtx,
    u: FieldElem,
    a: FieldElem,
    b: FieldElem,
    case_id: CaseId,
) -> Result<CaseOutcome> {
    if a.is_zero() {
        return Err(Error::ZeroDifference);
    }
    if b.is_zero() {
        return Err(Error::Inconsistent("case analysis needs b != 0".into()));
    }
    let (a2, a1, a0) = case_quadratic(ctx, u, a, b, case_id);
    let roots = solve_quadratic(ctx, a2, a1, a0);
    let (ta, t0) = case_id.signs();
    let desired = roots
        .iter()
        .copied()
        .filter(|&x| ctx.chi(x.add(a)) == ta && ctx.chi(x) == t0)
        .collect();
    Ok(CaseOutcome {
        case_id,
        roots,
        desired,
    })
}

/// Solutions in `{0, -a}`: 2 if `u = 0` and `b = 1/a`; 1 if `u ≠ 0` and
/// `b = (1 ± u χ(a)) / a`; otherwise 0.
pub fn n1_count(ctx: &FieldCtx, u: FieldElem, a: FieldElem, b: FieldElem) -> Result<u8> {
    let inv_a = ctx.inv(a).map_err(|_| Error::ZeroDifference)?;
    if u.is_zero() {
        return Ok(if b == inv_a { 2 } else { 0 });
    }
    let twist = match ctx.chi(a) {
        Chi::Plus => u,
        _ => u.neg(),
    };
    let hit = [FieldElem::ONE.add(twist), FieldElem::ONE.sub(twist)]
        .iter()
        .any(|&c| ctx.mul(c, inv_a) == b);
    Ok(u8::from(hit))
}

/// Characters of the expressions in `z = ab` that drive the prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZSignature {
    /// `χ(g1(z)), ..., χ(g5(z))`.
    pub g: [i8; 5],
    /// `χ(z² - u²)`.
    pub z_sq_minus_u_sq: i8,
    /// `z = 1 + u` or `z = 1 - u`.
    pub one_pm_u: bool,
    pub zero: bool,
}

/// The expressions appearing in the solution-count conditions, each read
/// off the signature of `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Expr {
    /// `χ((u+1)/(ab))` and `χ(a(u+1)/b)`, both equal to `-χ(g1(z))`.
    UPlusOneOverZ,
    /// `χ(1 - (u+1)/(ab)) = χ(g2(z))`
    OneMinusUPlusOneOverZ,
    /// `χ(1 + (u-1)/(ab)) = χ(g3(z))`
    OnePlusUMinusOneOverZ,
    /// `χ(u² + a²b² - ab) = χ(g4(z))`
    Disc,
    /// `χ(-u² - ab - ab√(1-u²)) = χ(g5(z))`
    Fifth,
    /// `χ(a²b² - u²)`
    ZSqMinusUSq,
}

impl Expr {
    fn eval(self, s: &ZSignature) -> i8 {
        match self {
            Expr::UPlusOneOverZ => -s.g[0],
            Expr::OneMinusUPlusOneOverZ => s.g[1],
            Expr::OnePlusUMinusOneOverZ => s.g[2],
            Expr::Disc => s.g[3],
            Expr::Fifth => s.g[4],
            Expr::ZSqMinusUSq => s.z_sq_minus_u_sq,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Guard {
    None,
    ZIsZero,
    ZIsOnePmU,
}

struct Condition {
    guard: Guard,
    terms: &'static [(Expr, i8)],
}

impl Condition {
    fn holds(&self, s: &ZSignature) -> bool {
        let guard = match self.guard {
            Guard::None => true,
            Guard::ZIsZero => s.zero,
            Guard::ZIsOnePmU => s.one_pm_u,
        };
        guard && self.terms.iter().all(|&(e, v)| e.eval(s) == v)
    }
}

use Expr::{
    Disc as D, Fifth as F, OneMinusUPlusOneOverZ as M, OnePlusUMinusOneOverZ as P,
    UPlusOneOverZ as R, ZSqMinusUSq as H,
};

const fn c(terms: &'static [(Expr, i8)]) -> Condition {
    Condition {
        guard: Guard::None,
        terms,
    }
}

const FOUR: &[Condition] = &[c(&[(R, -1), (M, 1), (P, 1), (D, 1), (F, 1)])];

const THREE: &[Condition] = &[
    Condition {
        guard: Guard::ZIsOnePmU,
        terms: &[(D, 1), (F, 1)],
    },
    c(&[(M, 1), (R, -1), (P, -1), (D, 1), (F, 1)]),
    c(&[(M, -1), (R, -1), (P, 1), (D, 1), (F, 1)]),
];

const TWO: &[Condition] = &[
    c(&[(M, 1), (R, -1), (P, 1), (D, -1)]),
    c(&[(M, 1), (R, -1), (P, 1), (D, 1), (F, -1)]),
    c(&[(M, -1), (P, -1), (D, 1), (F, 1)]),
    c(&[(M, -1), (P, 1), (R, 1), (D, 1), (F, 1)]),
    c(&[(M, 1), (R, 1), (P, -1), (D, 1), (F, 1)]),
    c(&[(M, 1), (R, 1), (P, 1), (D, 1), (F, 1)]),
];

const ONE: &[Condition] = &[
    Condition {
        guard: Guard::ZIsOnePmU,
        terms: &[(D, -1)],
    },
    Condition {
        guard: Guard::ZIsOnePmU,
        terms: &[(D, 1), (F, -1)],
    },
    c(&[(D, 0), (H, 1)]),
    c(&[(M, 1), (R, -1), (P, -1), (D, -1)]),
    c(&[(M, -1), (R, -1), (P, 1), (D, -1)]),
    c(&[(M, 1), (R, -1), (P, -1), (D, 1), (F, -1)]),
    c(&[(M, -1), (R, -1), (P, 1), (D, 1), (F, -1)]),
];

const ZERO: &[Condition] = &[
    Condition {
        guard: Guard::ZIsZero,
        terms: &[],
    },
    c(&[(D, 0), (H, -1)]),
    c(&[(M, -1), (P, -1), (D, -1)]),
    c(&[(M, -1), (P, 1), (R, 1), (D, -1)]),
    c(&[(M, 1), (R, 1), (P, -1), (D, -1)]),
    c(&[(M, 1), (R, 1), (P, 1), (D, -1)]),
    c(&[(M, -1), (P, -1), (D, 1), (F, -1)]),
    c(&[(M, -1), (P, 1), (R, 1), (D, 1), (F, -1)]),
    c(&[(M, 1), (R, 1), (P, -1), (D, 1), (F, -1)]),
    c(&[(M, 1), (R, 1), (P, 1), (D, 1), (F, -1)]),
];

/// Condition sets in evaluation order 4, 3, 2, 1, 0.
const CONDITION_SETS: [(u8, &[Condition]); 5] =
    [(4, FOUR), (3, THREE), (2, TWO), (1, ONE), (0, ZERO)];

/// A matched condition: predicted count and 1-based item within its list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionMatch {
    pub count: u8,
    pub item: usize,
}

/// Rows `(N1, N_I, N_II + N_III, N_IV)` that can occur, with their totals.
pub const COUNT_PATTERNS: [(u8, [u8; 4]); 11] = [
    (0, [0, 0, 0, 0]),
    (1, [1, 0, 0, 0]),
    (1, [0, 1, 0, 0]),
    (1, [0, 0, 1, 0]),
    (1, [0, 0, 0, 1]),
    (2, [0, 0, 2, 0]),
    (2, [0, 1, 0, 1]),
    (3, [1, 0, 2, 0]),
    (3, [0, 1, 2, 0]),
    (3, [0, 0, 2, 1]),
    (4, [0, 1, 2, 1]),
];

pub fn pattern_total(pattern: [u8; 4]) -> Option<u8> {
    COUNT_PATTERNS
        .iter()
        .find(|(_, row)| *row == pattern)
        .map(|&(total, _)| total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionCensus {
    pub a: FieldElem,
    pub b: FieldElem,
    pub z: FieldElem,
    pub n1: u8,
    /// Cases I..IV; empty outcomes when `b = 0`.
    pub cases: [CaseOutcome; 4],
    /// `n1 + Σ desired roots`.
    pub predicted_total: u8,
    /// Count from the condition lists on `z`.
    pub condition_total: u8,
    /// Direct count of solutions of `D_a f_u(x) = b`.
    pub observed_total: u8,
    pub signature: ZSignature,
}

impl SolutionCensus {
    /// `(N1, N_I, N_II + N_III, N_IV)`.
    pub fn pattern(&self) -> [u8; 4] {
        let n = |i: usize| self.cases[i].solutions_found();
        [self.n1, n(0), n(1) + n(2), n(3)]
    }

    pub fn consistent(&self) -> bool {
        self.predicted_total == self.observed_total
            && self.condition_total == self.observed_total
            && pattern_total(self.pattern()) == Some(self.predicted_total)
    }

    pub fn mismatch(&self, ctx: &FieldCtx, u: FieldElem) -> CensusMismatch {
        CensusMismatch {
            u: ctx.format_elem(u),
            a: ctx.format_elem(self.a),
            b: ctx.format_elem(self.b),
            signature: self.signature,
            pattern: self.pattern(),
            predicted: self.predicted_total,
            condition: self.condition_total,
            observed: self.observed_total,
        }
    }
}

/// Triage record for a census disagreement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusMismatch {
    pub u: String,
    pub a: String,
    pub b: String,
    pub signature: ZSignature,
    pub pattern: [u8; 4],
    pub predicted: u8,
    pub condition: u8,
    pub observed: u8,
}

/// Census machinery for one `u ∈ U0 \ F3`.
pub struct CensusRunner<'a> {
    ctx: &'a FieldCtx,
    family: GFamily<'a>,
    table: FunctionTable,
    u_sq: FieldElem,
    one_plus_u: FieldElem,
    one_minus_u: FieldElem,
}

impl<'a> CensusRunner<'a> {
    pub fn new(ctx: &'a FieldCtx, u: FieldElem) -> Result<Self> {
        let family = GFamily::new(ctx, u)?;
        Ok(CensusRunner {
            ctx,
            family,
            table: FunctionTable::new(ctx, u),
            u_sq: ctx.square(u),
            one_plus_u: FieldElem::ONE.add(u),
            one_minus_u: FieldElem::ONE.sub(u),
        })
    }

    pub fn u(&self) -> FieldElem {
        self.family.u()
    }

    pub fn family(&self) -> &GFamily<'a> {
        &self.family
    }

    pub fn signature(&self, z: FieldElem) -> ZSignature {
        let ctx = self.ctx;
        ZSignature {
            g: self.family.signature(z).map(|c| c as i8),
            z_sq_minus_u_sq: ctx.chi(ctx.square(z).sub(self.u_sq)) as i8,
            one_pm_u: z == self.one_plus_u || z == self.one_minus_u,
            zero: z.is_zero(),
        }
    }

    /// All conditions satisfied by `z`.
    pub fn matches(&self, z: FieldElem) -> Vec<ConditionMatch> {
        let sig = self.signature(z);
        CONDITION_SETS
            .iter()
            .flat_map(|&(count, conds)| {
                conds
                    .iter()
                    .enumerate()
                    .filter(move |(_, cond)| cond.holds(&sig))
                    .map(move |(i, _)| ConditionMatch { count, item: i + 1 })
            })
            .collect()
    }

    /// Predicted `N(a, b)`; exactly one condition must match.
    pub fn predict(&self, a: FieldElem, b: FieldElem) -> Result<u8> {
        if a.is_zero() {
            return Err(Error::ZeroDifference);
        }
        let z = self.ctx.mul(a, b);
        let m = self.matches(z);
        match m.as_slice() {
            [one] => Ok(one.count),
            _ => Err(Error::Inconsistent(format!(
                "z = {} matches {} conditions {:?}; signature {:?}",
                self.ctx.format_elem(z),
                m.len(),
                m,
                self.signature(z)
            ))),
        }
    }

    fn census_with_observed(
        &self,
        a: FieldElem,
        b: FieldElem,
        observed: u32,
    ) -> Result<SolutionCensus> {
        let ctx = self.ctx;
        let u = self.u();
        let n1 = n1_count(ctx, u, a, b)?;
        let cases = if b.is_zero() {
            CaseId::ALL.map(|case_id| CaseOutcome {
                case_id,
                roots: vec![],
                desired: vec![],
            })
        } else {
            let mut out = Vec::with_capacity(4);
            for case_id in CaseId::ALL {
                out.push(case_solutions(ctx, u, a, b, case_id)?);
            }
            out.try_into().expect("four cases")
        };
        let z = ctx.mul(a, b);
        let predicted_total = n1 + cases.iter().map(CaseOutcome::solutions_found).sum::<u8>();
        Ok(SolutionCensus {
            a,
            b,
            z,
            n1,
            cases,
            predicted_total,
            condition_total: self.predict(a, b)?,
            observed_total: observed as u8,
            signature: self.signature(z),
        })
    }

    /// Full census for one `(a, b)`, counting solutions directly.
    pub fn census(&self, a: FieldElem, b: FieldElem) -> Result<SolutionCensus> {
        if a.is_zero() {
            return Err(Error::ZeroDifference);
        }
        let ctx = self.ctx;
        let observed = ctx
            .elements()
            .filter(|&x| {
                self.table
                    .value(ctx, x.add(a))
                    .sub(self.table.value(ctx, x))
                    == b
            })
            .count() as u32;
        let c = self.census_with_observed(a, b, observed)?;
        if pattern_total(c.pattern()).is_none() {
            return Err(Error::Inconsistent(format!(
                "pattern {:?} not in the table of admissible rows",
                c.pattern()
            )));
        }
        Ok(c)
    }

    /// Census of every `(a, b)` for a fixed `a`, reusing one DDT row.
    pub fn census_row(&self, a: FieldElem) -> Result<Vec<SolutionCensus>> {
        if a.is_zero() {
            return Err(Error::ZeroDifference);
        }
        let row = self.table.ddt_row(self.ctx, a);
        self.ctx
            .elements()
            .map(|b| self.census_with_observed(a, b, row[self.ctx.index(b) as usize]))
            .collect()
    }
}

pub fn predict_n(ctx: &FieldCtx, u: FieldElem, a: FieldElem, b: FieldElem) -> Result<u8> {
    CensusRunner::new(ctx, u)?.predict(a, b)
}

pub fn census(ctx: &FieldCtx, u: FieldElem, a: FieldElem, b: FieldElem) -> Result<SolutionCensus> {
    CensusRunner::new(ctx, u)?.census(a, b)
}

/// Outcome of an exhaustive census over all `(a, b)` for one `u`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub u: String,
    pub pairs: u64,
    /// Occurrences of each admissible `(N1, N_I, N_II+N_III, N_IV)` row.
    pub pattern_counts: Vec<([u8; 4], u64)>,
    pub mismatches: Vec<CensusMismatch>,
    /// Pairs where the condition lists matched zero or several times.
    pub ambiguous: Vec<String>,
}

impl CensusSummary {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty() && self.ambiguous.is_empty()
    }
}

/// Exhaustive census for one `u`, parallel over `a`.
pub fn census_all(ctx: &FieldCtx, u: FieldElem) -> Result<CensusSummary> {
    use rayon::prelude::*;
    let runner = CensusRunner::new(ctx, u)?;
    let rows: Vec<(Vec<SolutionCensus>, Vec<String>)> = (1..ctx.q())
        .into_par_iter()
        .map(|ai| {
            let a = ctx.from_index(ai);
            let row = runner.table.ddt_row(ctx, a);
            let mut ok = Vec::with_capacity(ctx.q() as usize);
            let mut ambiguous = Vec::new();
            for b in ctx.elements() {
                match runner.census_with_observed(a, b, row[ctx.index(b) as usize]) {
                    Ok(c) => ok.push(c),
                    Err(e) => ambiguous.push(format!(
                        "a={} b={}: {e}",
                        ctx.format_elem(a),
                        ctx.format_elem(b)
                    )),
                }
            }
            (ok, ambiguous)
        })
        .collect();
    let mut summary = CensusSummary {
        u: ctx.format_elem(u),
        pattern_counts: COUNT_PATTERNS.iter().map(|&(_, p)| (p, 0)).collect(),
        ..Default::default()
    };
    for (cs, amb) in rows {
        summary.ambiguous.extend(amb);
        for c in cs {
            summary.pairs += 1;
            let p = c.pattern();
            if let Some(slot) = summary.pattern_counts.iter_mut().find(|(r, _)| *r == p) {
                slot.1 += 1;
            }
            if !c.consistent() {
                summary.mismatches.push(c.mismatch(ctx, u));
            }
        }
    }
    Ok(summary)
}
