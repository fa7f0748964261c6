//! Classification of `u`, the sums Γ3 and Γ4, the indicator ε, and the
//! closed-form differential spectrum for `u ∈ U0 \ F3`.

use serde::{Deserialize, Serialize};

use crate::char_sums::{char_sum, GFamily, GPoly};
use crate::error::{Error, Result};
use crate::field::{Chi, FieldCtx, FieldElem};
use crate::ness::{spectrum_bruteforce, Source, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UClassKind {
    /// `u ∈ {0, 1, 2}`, flagged regardless of the character pattern.
    F3,
    /// `χ(u+1) ≠ χ(u-1)`, `u ∉ F3`.
    U0NonF3,
    /// `χ(u+1) = χ(u-1) ≠ χ(u)`.
    U10,
    /// `χ(u+1) = χ(u-1) = χ(u)`.
    U11,
}

impl UClassKind {
    pub fn label(self) -> &'static str {
        match self {
            UClassKind::F3 => "F3",
            UClassKind::U0NonF3 => "U0\\F3",
            UClassKind::U10 => "U10",
            UClassKind::U11 => "U11",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UClass {
    pub kind: UClassKind,
    pub chi_u: Chi,
    pub chi_u_plus_1: Chi,
    pub chi_u_minus_1: Chi,
}

impl UClass {
    /// Membership in `U0` (prime-field elements included: `0 ∈ U0`).
    pub fn in_u0(&self) -> bool {
        self.chi_u_plus_1 != self.chi_u_minus_1
    }
}

pub fn classify_u(ctx: &FieldCtx, u: FieldElem) -> UClass {
    let chi_u = ctx.chi(u);
    let chi_u_plus_1 = ctx.chi(u.add(FieldElem::ONE));
    let chi_u_minus_1 = ctx.chi(u.sub(FieldElem::ONE));
    let kind = if ctx.in_prime_field(u) {
        UClassKind::F3
    } else if chi_u_plus_1 != chi_u_minus_1 {
        UClassKind::U0NonF3
    } else if chi_u_plus_1 != chi_u {
        UClassKind::U10
    } else {
        UClassKind::U11
    };
    UClass {
        kind,
        chi_u,
        chi_u_plus_1,
        chi_u_minus_1,
    }
}

/// Every `u ∈ U0 \ F3` in enumeration order.
pub fn u0_non_f3(ctx: &FieldCtx) -> Vec<FieldElem> {
    ctx.elements()
        .filter(|&u| classify_u(ctx, u).kind == UClassKind::U0NonF3)
        .collect()
}

fn require_domain(ctx: &FieldCtx, u: FieldElem) -> Result<UClass> {
    let class = classify_u(ctx, u);
    if class.kind != UClassKind::U0NonF3 {
        return Err(Error::OutOfDomain {
            u: ctx.format_elem(u),
            class: class.kind.label().into(),
        });
    }
    Ok(class)
}

/// Γ3 = `-χ(u+1) Σ_z χ(z³ - z² + u² z)`.
pub fn gamma3(ctx: &FieldCtx, u: FieldElem) -> Result<i64> {
    let class = require_domain(ctx, u)?;
    let poly = [
        FieldElem::ZERO,
        ctx.square(u),
        FieldElem::TWO,
        FieldElem::ONE,
    ];
    Ok(-class.chi_u_plus_1.value() * char_sum(ctx, &poly))
}

/// Γ3 = `Σ_z χ(g1(z) g4(z))`, the product form.
pub fn gamma3_by_products(ctx: &FieldCtx, u: FieldElem) -> Result<i64> {
    Ok(GFamily::new(ctx, u)?.product_sum(&[GPoly::G1, GPoly::G4]))
}

/// Γ4 = `-χ(u+1) Σ_z χ(z⁵ - (u²+1) z² + (u² - u⁴) z)`.
pub fn gamma4(ctx: &FieldCtx, u: FieldElem) -> Result<i64> {
    let class = require_domain(ctx, u)?;
    let u2 = ctx.square(u);
    let poly = [
        FieldElem::ZERO,
        u2.sub(ctx.square(u2)),
        u2.add(FieldElem::ONE).neg(),
        FieldElem::ZERO,
        FieldElem::ZERO,
        FieldElem::ONE,
    ];
    Ok(-class.chi_u_plus_1.value() * char_sum(ctx, &poly))
}

/// Γ4 = `Σ_z χ(g1 g2 g3 g4)`, the product form.
pub fn gamma4_by_products(ctx: &FieldCtx, u: FieldElem) -> Result<i64> {
    Ok(GFamily::new(ctx, u)?.product_sum(&[GPoly::G1, GPoly::G2, GPoly::G3, GPoly::G4]))
}

/// ε ∈ {0, 1}: 1 exactly when
/// `χ(u) = χ(u+1)` and `χ((u+1)√(1-u²) + (u-1)²) = -1`, or
/// `χ(u) = χ(u-1)` and `χ((1-u)√(1-u²) + (u+1)²) = -1`.
pub fn epsilon(ctx: &FieldCtx, u: FieldElem) -> Result<u8> {
    let class = require_domain(ctx, u)?;
    let one = FieldElem::ONE;
    let s = ctx.sqrt_canonical(one.sub(ctx.square(u)))?;
    let up1 = u.add(one);
    let um1 = u.sub(one);
    let first = class.chi_u == class.chi_u_plus_1
        && ctx.chi(ctx.mul(up1, s).add(ctx.square(um1))) == Chi::Minus;
    let second = class.chi_u == class.chi_u_minus_1
        && ctx.chi(ctx.mul(one.sub(u), s).add(ctx.square(up1))) == Chi::Minus;
    Ok(u8::from(first || second))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedFormInputs {
    pub gamma3: i64,
    pub gamma4: i64,
    pub epsilon: u8,
    pub sqrt_term: FieldElem,
    pub phi: FieldElem,
}

pub fn closed_form_inputs(ctx: &FieldCtx, u: FieldElem) -> Result<ClosedFormInputs> {
    let gamma3 = gamma3(ctx, u)?;
    let gamma4 = gamma4(ctx, u)?;
    let epsilon = epsilon(ctx, u)?;
    let sqrt_term = ctx.sqrt_canonical(FieldElem::ONE.sub(ctx.square(u)))?;
    Ok(ClosedFormInputs {
        gamma3,
        gamma4,
        epsilon,
        sqrt_term,
        phi: FieldElem::ONE.add(sqrt_term),
    })
}

fn exact_div(term: &'static str, numerator: i64, denominator: i64) -> Result<i64> {
    if numerator % denominator != 0 {
        return Err(Error::NonIntegral {
            term,
            numerator,
            denominator,
        });
    }
    Ok(numerator / denominator)
}

/// Evaluates the five spectrum formulas for `q = 3^n` and given
/// `(ε, Γ3, Γ4)`, failing loudly on any inexact division.
pub fn spectrum_from_parameters(q: i64, epsilon: u8, gamma3: i64, gamma4: i64) -> Result<[i64; 5]> {
    let e = i64::from(epsilon);
    let w0 = -1 + e + exact_div("omega0", 15 * q - 17 - gamma4, 32)?;
    let w1 = 3 - e + exact_div("omega1", 3 * q + 3 + 2 * gamma3 + gamma4, 16)?;
    let w2 = -e + exact_div("omega2", q - 7 - gamma3, 4)?;
    let w3 = e + exact_div("omega3", q + 1 + 2 * gamma3 - gamma4, 16)?;
    let w4 = exact_div("omega4", q + 1 + gamma4, 32)?;
    Ok([w0, w1, w2, w3, w4].map(|w| (q - 1) * w))
}

/// Closed-form spectrum `[ω0, ..., ω4]` for `u ∈ U0 \ F3`.
pub fn spectrum_closed_form(ctx: &FieldCtx, u: FieldElem) -> Result<Spectrum> {
    let inputs = closed_form_inputs(ctx, u)?;
    let omegas = spectrum_from_parameters(
        i64::from(ctx.q()),
        inputs.epsilon,
        inputs.gamma3,
        inputs.gamma4,
    )?;
    if let Some(w) = omegas.iter().find(|&&w| w < 0) {
        return Err(Error::Inconsistent(format!(
            "negative closed-form count {w}"
        )));
    }
    Ok(Spectrum {
        omegas: omegas.iter().map(|&w| w as u64).collect(),
        source: Source::ClosedForm,
    })
}

/// Per-`u` comparison of closed form and brute force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub u: String,
    pub class: String,
    pub epsilon: u8,
    pub gamma3: i64,
    pub gamma4: i64,
    pub closed_form: Vec<u64>,
    pub brute_force: Vec<u64>,
    #[serde(rename = "match")]
    pub matches: bool,
}

pub fn verify_closed_form(ctx: &FieldCtx, u: FieldElem) -> Result<VerificationRecord> {
    let class = require_domain(ctx, u)?;
    let inputs = closed_form_inputs(ctx, u)?;
    let closed = spectrum_closed_form(ctx, u)?;
    let brute = spectrum_bruteforce(ctx, u);
    Ok(VerificationRecord {
        u: ctx.format_elem(u),
        class: class.kind.label().into(),
        epsilon: inputs.epsilon,
        gamma3: inputs.gamma3,
        gamma4: inputs.gamma4,
        matches: closed.omegas == brute.omegas,
        closed_form: closed.omegas,
        brute_force: brute.omegas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_reference_vectors() {
        assert_eq!(
            spectrum_from_parameters(27, 0, -4, 4).unwrap(),
            [286, 208, 156, 26, 26]
        );
        assert_eq!(
            spectrum_from_parameters(243, 1, -4, 12).unwrap(),
            [27346, 11616, 14278, 3630, 1936]
        );
        assert_eq!(
            spectrum_from_parameters(2187, 1, -28, -12).unwrap(),
            [2240650, 891888, 1204486, 295110, 148648]
        );
    }

    #[test]
    fn inexact_division_is_an_error() {
        assert!(matches!(
            spectrum_from_parameters(27, 0, -4, 5),
            Err(Error::NonIntegral { .. })
        ));
    }

    #[test]
    fn classify_prime_field() {
        let ctx = FieldCtx::new(3, None).unwrap();
        let c = classify_u(&ctx, FieldElem::ZERO);
        assert_eq!(c.kind, UClassKind::F3);
        assert!(c.in_u0());
        assert_eq!(classify_u(&ctx, FieldElem::ONE).kind, UClassKind::F3);
        assert_eq!(classify_u(&ctx, FieldElem::TWO).kind, UClassKind::F3);
    }

    #[test]
    fn classes_partition_n3() {
        let ctx = FieldCtx::new(3, None).unwrap();
        let mut counts = [0usize; 4];
        for u in ctx.elements() {
            let c = classify_u(&ctx, u);
            let idx = match c.kind {
                UClassKind::F3 => 0,
                UClassKind::U0NonF3 => {
                    assert_ne!(c.chi_u_plus_1, c.chi_u_minus_1);
                    1
                }
                UClassKind::U10 => {
                    assert_eq!(c.chi_u_plus_1, c.chi_u_minus_1);
                    assert_ne!(c.chi_u, c.chi_u_plus_1);
                    2
                }
                UClassKind::U11 => {
                    assert_eq!(c.chi_u_plus_1, c.chi_u_minus_1);
                    assert_eq!(c.chi_u, c.chi_u_plus_1);
                    3
                }
            };
            counts[idx] += 1;
        }
        assert_eq!(counts.iter().sum::<usize>(), 27);
        assert_eq!(counts[0], 3);
    }

    #[test]
    fn domain_errors() {
        let ctx = FieldCtx::new(3, None).unwrap();
        assert!(matches!(
            gamma3(&ctx, FieldElem::ONE),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(gamma4(&ctx, FieldElem::ZERO).is_err());
        assert!(epsilon(&ctx, FieldElem::TWO).is_err());
        assert!(spectrum_closed_form(&ctx, FieldElem::ONE).is_err());
    }

    #[test]
    fn record_json_uses_match_key() {
        let r = VerificationRecord {
            u: "010".into(),
            class: "U0\\F3".into(),
            epsilon: 0,
            gamma3: -4,
            gamma4: 4,
            closed_form: vec![1],
            brute_force: vec![1],
            matches: true,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains(r#""match":true"#), "{s}");
    }
}
