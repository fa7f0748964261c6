//! Quadratic character sums over GF(3^n).
//!
//! Brute-force sums `Σ_z χ(P(z))`, the closed form for quadratics, the
//! auxiliary family `g1..g5` attached to `u ∈ U0 \ F3`, the character table
//! on the special set `A`, and a battery of identities between sums of
//! products of the `g_i`.

use serde::{Deserialize, Serialize};

use crate::closed_form::{classify_u, UClassKind};
use crate::error::{Error, Result};
use crate::field::{Chi, FieldCtx, FieldElem};

/// `Σ_{z ∈ F} χ(P(z))` with `P` given by coefficients, lowest degree first.
pub fn char_sum(ctx: &FieldCtx, poly: &[FieldElem]) -> i64 {
    ctx.elements()
        .map(|z| ctx.chi(horner(ctx, poly, z)).value())
        .sum()
}

pub(crate) fn horner(ctx: &FieldCtx, poly: &[FieldElem], z: FieldElem) -> FieldElem {
    poly.iter()
        .rev()
        .fold(FieldElem::ZERO, |acc, &c| ctx.mul(acc, z).add(c))
}

/// Closed form of `Σ_z χ(a2 z² + a1 z + a0)`: `-χ(a2)` when the
/// discriminant is nonzero, `(q-1)χ(a2)` otherwise.
pub fn quadratic_sum_closed_form(
    ctx: &FieldCtx,
    a2: FieldElem,
    a1: FieldElem,
    a0: FieldElem,
) -> Result<i64> {
    if a2.is_zero() {
        return Err(Error::Inconsistent("leading coefficient a2 is zero".into()));
    }
    // 4 = 1 in characteristic 3
    let disc = ctx.square(a1).sub(ctx.mul(a0, a2));
    let c = ctx.chi(a2).value();
    Ok(if disc.is_zero() {
        (i64::from(ctx.q()) - 1) * c
    } else {
        -c
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GPoly {
    G1,
    G2,
    G3,
    G4,
    G5,
}

impl GPoly {
    pub const ALL: [GPoly; 5] = [GPoly::G1, GPoly::G2, GPoly::G3, GPoly::G4, GPoly::G5];

    pub fn label(self) -> &'static str {
        match self {
            GPoly::G1 => "g1",
            GPoly::G2 => "g2",
            GPoly::G3 => "g3",
            GPoly::G4 => "g4",
            GPoly::G5 => "g5",
        }
    }
}

/// The polynomials `g1..g5` for a fixed `u ∈ U0 \ F3`:
///
/// ```text
/// g1 = -(u+1) z           g2 = z (z - 1 - u)      g3 = z (z - 1 + u)
/// g4 = z² - z + u²        g5 = -φ(u) (z + 1 - √(1-u²)),  φ(u) = 1 + √(1-u²)
/// ```
///
/// with `√` the square root of character +1.
#[derive(Clone, Debug)]
pub struct GFamily<'a> {
    ctx: &'a FieldCtx,
    u: FieldElem,
    u_sq: FieldElem,
    sqrt_term: FieldElem,
    phi: FieldElem,
}

impl<'a> GFamily<'a> {
    pub fn new(ctx: &'a FieldCtx, u: FieldElem) -> Result<Self> {
        let class = classify_u(ctx, u);
        if class.kind != UClassKind::U0NonF3 {
            return Err(Error::OutOfDomain {
                u: ctx.format_elem(u),
                class: class.kind.label().into(),
            });
        }
        let u_sq = ctx.square(u);
        let sqrt_term = ctx.sqrt_canonical(FieldElem::ONE.sub(u_sq))?;
        Ok(GFamily {
            ctx,
            u,
            u_sq,
            sqrt_term,
            phi: FieldElem::ONE.add(sqrt_term),
        })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn u(&self) -> FieldElem {
        self.u
    }

    /// Canonical `√(1-u²)`.
    pub fn sqrt_term(&self) -> FieldElem {
        self.sqrt_term
    }

    /// `φ(u) = 1 + √(1-u²)`.
    pub fn phi(&self) -> FieldElem {
        self.phi
    }

    pub fn eval(&self, id: GPoly, z: FieldElem) -> FieldElem {
        let ctx = self.ctx;
        let u = self.u;
        match id {
            GPoly::G1 => ctx.mul(u.add(FieldElem::ONE), z).neg(),
            GPoly::G2 => ctx.mul(z, z.sub(FieldElem::ONE).sub(u)),
            GPoly::G3 => ctx.mul(z, z.sub(FieldElem::ONE).add(u)),
            GPoly::G4 => ctx.square(z).sub(z).add(self.u_sq),
            GPoly::G5 => ctx
                .mul(self.phi, z.add(FieldElem::ONE).sub(self.sqrt_term))
                .neg(),
        }
    }

    /// `(χ(g1(z)), ..., χ(g5(z)))`.
    pub fn signature(&self, z: FieldElem) -> [Chi; 5] {
        GPoly::ALL.map(|g| self.ctx.chi(self.eval(g, z)))
    }

    /// `Σ_z χ(Π_{i ∈ ids} g_i(z))`.
    pub fn product_sum(&self, ids: &[GPoly]) -> i64 {
        assert!(!ids.is_empty(), "empty product");
        self.ctx
            .elements()
            .map(|z| {
                let p = ids
                    .iter()
                    .fold(FieldElem::ONE, |acc, &g| self.ctx.mul(acc, self.eval(g, z)));
                self.ctx.chi(p).value()
            })
            .sum()
    }

    /// The set `A = {0, 1+u, 1-u, -1+√(1-u²), -1-√(1-u²)}` in that order.
    pub fn special_set(&self) -> [FieldElem; 5] {
        let one = FieldElem::ONE;
        [
            FieldElem::ZERO,
            one.add(self.u),
            one.sub(self.u),
            self.sqrt_term.sub(one),
            self.sqrt_term.neg().sub(one),
        ]
    }

    /// `χ(g_i(x))` for `x ∈ A` (rows) and `i = 1..5` (columns).
    pub fn table_a_values(&self) -> [[Chi; 5]; 5] {
        self.special_set().map(|x| self.signature(x))
    }

    /// The symbolic entries of the character table on `A`, each evaluated
    /// at this `u`. Should agree with [`GFamily::table_a_values`].
    pub fn table_a_symbolic(&self) -> [[Chi; 5]; 5] {
        let ctx = self.ctx;
        let one = FieldElem::ONE;
        let u = self.u;
        let s = self.sqrt_term;
        let u2 = self.u_sq;
        let chi = |e: FieldElem| ctx.chi(e);
        let chi_u = chi(u);
        let up1 = u.add(one);
        let um1 = u.sub(one);
        let z = Chi::Zero;
        let (p, m) = (Chi::Plus, Chi::Minus);
        [
            [z, z, z, p, m],
            [
                m,
                z,
                -chi(u2.add(u)),
                chi(u.sub(u2)),
                -chi(ctx.mul(up1, s).add(ctx.square(um1))),
            ],
            [
                m,
                chi(u.sub(u2)),
                z,
                -chi(u2.add(u)),
                -chi(ctx.mul(one.sub(u), s).add(ctx.square(up1))),
            ],
            [
                m,
                -(chi_u * chi(s.add(u).sub(one))),
                chi_u * chi(s.sub(u).sub(one)),
                z,
                z,
            ],
            [
                m,
                chi_u * chi(s.sub(u).add(one)),
                -(chi_u * chi(s.add(u).add(one))),
                z,
                chi(u2.sub(one).sub(s)),
            ],
        ]
    }

    /// Every identity between `g`-product sums, brute force on the left,
    /// stated value on the right.
    pub fn verify_identities(&self) -> Vec<IdentityReport> {
        use GPoly::*;
        let ctx = self.ctx;
        let one = FieldElem::ONE;
        let s = self.sqrt_term;
        let u = self.u;
        let chi_phi = ctx.chi(self.phi).value();
        let chi_s_1_pu = ctx.chi(s.add(one).add(u)).value();
        let chi_s_1_mu = ctx.chi(s.add(one).sub(u)).value();
        let sum = |ids: &[GPoly]| self.product_sum(ids);

        let cases: Vec<(&str, i64, i64)> = vec![
            ("g1g2", sum(&[G1, G2]), -1),
            ("g1g3", sum(&[G1, G3]), -1),
            ("g1g5", sum(&[G1, G5]), 1),
            ("g2g3", sum(&[G2, G3]), -2),
            ("g1g2g5", sum(&[G1, G2, G5]), 2),
            ("g1g3g5", sum(&[G1, G3, G5]), 2),
            ("g4g5", sum(&[G4, G5]), -chi_phi),
            ("g1g4g5", sum(&[G1, G4, G5]), 1 + chi_phi),
            ("g1g3g4g5", sum(&[G1, G3, G4, G5]), 2 - chi_s_1_pu),
            ("g1g2g4g5", sum(&[G1, G2, G4, G5]), 2 - chi_s_1_mu),
            ("g2g3g4", sum(&[G2, G3, G4]), -2),
            ("g1g4+g1g2g3", sum(&[G1, G4]) + sum(&[G1, G2, G3]), 0),
            ("g2g4+g1g2g4", sum(&[G2, G4]) + sum(&[G1, G2, G4]), -2),
            ("g3g4+g1g3g4", sum(&[G3, G4]) + sum(&[G1, G3, G4]), -2),
            (
                "g2g3g5+g1g2g3g5",
                sum(&[G2, G3, G5]) + sum(&[G1, G2, G3, G5]),
                2,
            ),
            (
                "g2g3g4g5+g1g2g3g4g5",
                sum(&[G2, G3, G4, G5]) + sum(&[G1, G2, G3, G4, G5]),
                2,
            ),
            (
                "g2g5+g3g4g5",
                sum(&[G2, G5]) + sum(&[G3, G4, G5]),
                chi_s_1_pu,
            ),
            (
                "g3g5+g2g4g5",
                sum(&[G3, G5]) + sum(&[G2, G4, G5]),
                chi_s_1_mu,
            ),
        ];
        cases
            .into_iter()
            .map(|(name, lhs, rhs)| IdentityReport::new(name, lhs, rhs))
            .collect()
    }
}

/// Number of identities produced by [`GFamily::verify_identities`].
pub const IDENTITY_COUNT: usize = 18;

/// One checked identity; serializes as
/// `{"identity": str, "lhs": int, "rhs": int, "pass": bool}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(identity: &str, lhs: i64, rhs: i64) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            lhs,
            rhs,
            pass: lhs == rhs,
        }
    }
}

/// Evaluates one of the `g_i` for `u` (checks the domain every call; use
/// [`GFamily`] in loops).
pub fn g_eval(ctx: &FieldCtx, u: FieldElem, id: GPoly, z: FieldElem) -> Result<FieldElem> {
    Ok(GFamily::new(ctx, u)?.eval(id, z))
}

pub fn g_product_sum(ctx: &FieldCtx, u: FieldElem, ids: &[GPoly]) -> Result<i64> {
    if ids.is_empty() {
        return Err(Error::Inconsistent("empty g-product".into()));
    }
    Ok(GFamily::new(ctx, u)?.product_sum(ids))
}

pub fn table_a_values(ctx: &FieldCtx, u: FieldElem) -> Result<[[Chi; 5]; 5]> {
    Ok(GFamily::new(ctx, u)?.table_a_values())
}

pub fn verify_identities(ctx: &FieldCtx, u: FieldElem) -> Result<Vec<IdentityReport>> {
    Ok(GFamily::new(ctx, u)?.verify_identities())
}
