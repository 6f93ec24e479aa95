//! Field-strength schedules for the nested gadget layers.
//!
//! Paper mode evaluates the printed polynomial schedule verbatim. It proves
//! polynomial scaling but overflows f64 quickly (`B_H ~ N^92`), so values
//! are carried alongside their exact base-10 logarithm and flagged when not
//! simulable. Geometric mode compresses the hierarchy to a fixed ratio `r`
//! between successive layer couplings while keeping the three consistency
//! relations exact, which is what desk-scale verification needs; the
//! second-order error laws are ratio-independent.

use super::GadgetError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleMode {
    Paper,
    Geometric,
}

/// One schedule entry. `log10` is always finite; `value` may have
/// overflowed, in which case `simulable` is false and the entry is carried
/// symbolically as `n^n_exp * q^q_exp / denom`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScheduleValue {
    pub value: f64,
    pub log10: f64,
    pub simulable: bool,
    pub n_exp: u32,
    pub q_exp: u32,
    pub denom: f64,
}

impl ScheduleValue {
    fn paper(n: u64, q: f64, n_exp: u32, q_exp: u32, denom: f64) -> Self {
        let value = (n as f64).powi(n_exp as i32) * q.powi(q_exp as i32) / denom;
        let log10 = n_exp as f64 * (n as f64).log10() + q_exp as f64 * q.log10() - denom.log10();
        Self {
            value,
            log10,
            simulable: value.is_finite(),
            n_exp,
            q_exp,
            denom,
        }
    }

    fn direct(value: f64) -> Self {
        Self {
            value,
            log10: value.log10(),
            simulable: value.is_finite(),
            n_exp: 0,
            q_exp: 0,
            denom: 1.0,
        }
    }
}

/// Strengths for every layer of the reduction, innermost (`pauli-tune`)
/// outward, plus the erasure field and the Hubbard parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrengthSchedule {
    pub mode: ScheduleMode,
    pub lambda_p: ScheduleValue,
    pub b_p: ScheduleValue,
    pub lambda_i: ScheduleValue,
    pub b_i: ScheduleValue,
    pub lambda_xx: ScheduleValue,
    pub b_xx: ScheduleValue,
    pub lambda_h: ScheduleValue,
    pub b_h: ScheduleValue,
    pub b_e: ScheduleValue,
    pub u: ScheduleValue,
    pub t: ScheduleValue,
}

impl StrengthSchedule {
    /// The printed polynomial schedule, exactly as published:
    /// `lambda_P = N^4 q`, `B_P = N^8 q^2`, `lambda_I = N^12 q^3`,
    /// `B_I = N^20 q^5`, `lambda_XX = N^28 q^7 / 4`, `B_XX = N^44 q^11 / 8`,
    /// `lambda_H = N^60 q^15 / 64`, `B_H = N^92 q^23 / 512`, with
    /// `B_e = N^3 lambda_H^2 q`, `U = N^8 lambda_H^3 q^2 / 8`, and
    /// `t = N^4 lambda_H^2 q / 4` expanded through `lambda_H`.
    pub fn paper(n: u64, q: f64) -> Self {
        let v = |n_exp, q_exp, denom| ScheduleValue::paper(n, q, n_exp, q_exp, denom);
        Self {
            mode: ScheduleMode::Paper,
            lambda_p: v(4, 1, 1.0),
            b_p: v(8, 2, 1.0),
            lambda_i: v(12, 3, 1.0),
            b_i: v(20, 5, 1.0),
            lambda_xx: v(28, 7, 4.0),
            b_xx: v(44, 11, 8.0),
            lambda_h: v(60, 15, 64.0),
            b_h: v(92, 23, 512.0),
            b_e: v(123, 31, 4096.0),
            u: v(188, 47, 2097152.0),
            t: v(124, 31, 16384.0),
        }
    }

    /// Fixed-ratio schedule: layer couplings `lambda_l = base * r^l`, the
    /// innermost field `B_P = r * lambda_P`, and the remaining fields fixed
    /// by the exact consistency relations
    /// `lambda_I^2/B_I = lambda_P`, `2 lambda_XX^2/B_XX = lambda_I`,
    /// `2 lambda_H^2/B_H = lambda_XX`, `2 t^2/U = lambda_H`.
    pub fn geometric(r: f64, base: f64) -> Result<Self, GadgetError> {
        if r < 10.0 {
            return Err(GadgetError::RatioTooSmall(r));
        }
        let lambda_p = base;
        let lambda_i = base * r;
        let lambda_xx = base * r * r;
        let lambda_h = base * r * r * r;
        let t = r * lambda_h / 2.0;
        Ok(Self {
            mode: ScheduleMode::Geometric,
            lambda_p: ScheduleValue::direct(lambda_p),
            b_p: ScheduleValue::direct(r * lambda_p),
            lambda_i: ScheduleValue::direct(lambda_i),
            b_i: ScheduleValue::direct(lambda_i * lambda_i / lambda_p),
            lambda_xx: ScheduleValue::direct(lambda_xx),
            b_xx: ScheduleValue::direct(2.0 * lambda_xx * lambda_xx / lambda_i),
            lambda_h: ScheduleValue::direct(lambda_h),
            b_h: ScheduleValue::direct(2.0 * lambda_h * lambda_h / lambda_xx),
            b_e: ScheduleValue::direct(r * lambda_h),
            u: ScheduleValue::direct(2.0 * t * t / lambda_h),
            t: ScheduleValue::direct(t),
        })
    }

    /// All values finite, so gadget Hamiltonians can be realized.
    pub fn simulable(&self) -> bool {
        [
            self.lambda_p,
            self.b_p,
            self.lambda_i,
            self.b_i,
            self.lambda_xx,
            self.b_xx,
            self.lambda_h,
            self.b_h,
            self.b_e,
            self.u,
            self.t,
        ]
        .iter()
        .all(|v| v.simulable)
    }

    /// Layer coupling strengths, innermost first.
    pub fn layer_strengths(&self) -> [f64; 4] {
        [
            self.lambda_p.value,
            self.lambda_i.value,
            self.lambda_xx.value,
            self.lambda_h.value,
        ]
    }
}

/// Named constructor matching the operation vocabulary.
pub fn schedule_strengths(n: u64, q: f64) -> StrengthSchedule {
    StrengthSchedule::paper(n, q)
}
