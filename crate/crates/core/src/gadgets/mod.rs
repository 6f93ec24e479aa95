//! Mediator-qubit gadget compilation.
//!
//! Every gadget here follows the same pattern: a three-qubit line whose
//! central (mediator) qubit is pinned by a strong field `B`, while weaker
//! couplings of strength `lambda` let excitations hop left-to-right through
//! it. To second order the hopping generates an effective two-qubit coupling
//! of order `lambda^2 / B` between the outer qubits:
//!
//! * `pauli-tune` — couplings `+l A(x)P`, `+l Q(x)B` with the mediator field
//!   at angle `phi` in the P-Q plane; effective `2 l^2/B sin(phi) cos(phi) A(x)B`.
//!   The angle tunes both magnitude and sign.
//! * `pauli-to-ising` — couplings `-l A(x)A`, `-l B(x)B`, field at `pi/4`;
//!   effective `+l^2/B A(x)B`.
//! * `ising-to-xx` — couplings `-l (S(x)S + T(x)T)` on both sides, field
//!   along `T`; only the `S` channel survives: effective `-2 l^2/B S(x)S`.
//! * `xx-to-heisenberg` — two full Heisenberg couplings, field along the
//!   third axis `U`; effective `-2 l^2/B (S(x)S + T(x)T)`.
//!
//! First-order projections and the hop-back second-order shifts land on the
//! outer qubits as spurious local fields; each compiled spec carries the
//! exact compensating fields derived from the same second-order formula.

mod chain;
mod erasure;
mod exchange;
mod schedule;
mod verify;

pub use chain::{
    compile_full_chain, compile_full_chain_analytic, verify_chain, ChainQubitRole,
    ChainVerification, CompiledChain,
};
pub use erasure::{compile_erasure, verify_erasure, ErasureGadget, ErasureVerification};
pub use exchange::{hubbard_effective_exchange, ExchangeReport};
pub use schedule::{schedule_strengths, ScheduleMode, ScheduleValue, StrengthSchedule};
pub use verify::{
    effective_operator_from_exact, fit_pauli_basis, fit_two_qubit, verify_gadget,
    verify_gadget_pair, CrossTalkReport, GadgetVerification, PauliFit,
};

use crate::algebra::{AlgebraError, PauliAxis, PauliString, SpinHamiltonian};
use crate::eigensolve::EigenError;
use crate::sw::SwError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fields below `B >= guard * lambda` are outside the verification regime.
pub const REGIME_GUARD: f64 = 100.0;

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("target coupling {target} is infeasible; achievable maximum is {max}")]
    InfeasibleTarget { target: f64, max: f64 },
    #[error("the two coupling axes must differ for this gadget kind")]
    SameAxis,
    #[error("field/coupling ratio {0} is below the verification guard {REGIME_GUARD}")]
    OutsideRegime(f64),
    #[error("geometric schedules need ratio r >= 10, got {0}")]
    RatioTooSmall(f64),
    #[error("schedule is not numerically usable (overflowed values are flagged non-simulable)")]
    ScheduleNotSimulable,
    #[error("low space is not separated: contraction norm {0:.3e}")]
    LowSpaceMixed(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sw(#[from] SwError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GadgetKind {
    PauliTune,
    PauliToIsing,
    IsingToXx,
    XxToHeisenberg,
    Erasure,
    HubbardExchange,
}

/// One predicted effective coupling `strength * A (x) B` on the outer pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedCoupling {
    pub axes: (PauliAxis, PauliAxis),
    pub strength: f64,
}

/// A compiled three-qubit gadget: qubit 0 and 2 are the outer (logical)
/// qubits, qubit 1 the mediator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetSpec {
    pub kind: GadgetKind,
    /// Axes of the produced coupling (for `xx-to-heisenberg` the produced
    /// pair `S,T`; the second predicted term is on `T`).
    pub outer: (PauliAxis, PauliAxis),
    /// Mediator axes involved in the transition (kind-specific meaning).
    pub mediator: (PauliAxis, PauliAxis),
    pub lambda: f64,
    pub b_field: f64,
    /// Mediator field angle in radians, principal branch `[-pi/4, pi/4]`
    /// for `pauli-tune`; fixed per kind otherwise.
    pub phi: f64,
    /// Compensation fields: `compensation[q]` is added to the Hamiltonian as
    /// `c_x X_q + c_y Y_q + c_z Z_q`.
    pub compensation: [[f64; 3]; 3],
    pub predicted: Vec<PredictedCoupling>,
}

impl GadgetSpec {
    /// The strong mediator field alone (the unperturbed `H` of the split).
    pub fn field_hamiltonian(&self) -> Result<SpinHamiltonian, AlgebraError> {
        let mut terms = vec![PauliString::identity(self.b_field / 2.0)];
        let (p, q) = self.mediator_field_axes();
        let (cp, cq) = (self.field_phi().cos(), self.field_phi().sin());
        if cp != 0.0 {
            terms.push(PauliString::single_qubit(1, p, -self.b_field / 2.0 * cp));
        }
        if cq != 0.0 {
            terms.push(PauliString::single_qubit(1, q, -self.b_field / 2.0 * cq));
        }
        SpinHamiltonian::new(3, terms)
    }

    /// The couplings plus compensation fields (the perturbation `V`).
    pub fn coupling_hamiltonian(&self) -> Result<SpinHamiltonian, AlgebraError> {
        self.coupling_hamiltonian_inner(true)
    }

    /// Same with the second-order compensation omitted; exposes the spurious
    /// local field the compensation exists to cancel.
    pub fn coupling_hamiltonian_without_second_order_compensation(
        &self,
    ) -> Result<SpinHamiltonian, AlgebraError> {
        self.coupling_hamiltonian_inner(false)
    }

    fn coupling_hamiltonian_inner(
        &self,
        with_second_order: bool,
    ) -> Result<SpinHamiltonian, AlgebraError> {
        let l = self.lambda;
        let (a, b) = self.outer;
        let (p, q) = self.mediator;
        let mut terms = Vec::new();
        match self.kind {
            GadgetKind::PauliTune => {
                terms.push(PauliString::two_qubit(0, a, 1, p, l));
                terms.push(PauliString::two_qubit(1, q, 2, b, l));
            }
            GadgetKind::PauliToIsing => {
                terms.push(PauliString::two_qubit(0, a, 1, a, -l));
                terms.push(PauliString::two_qubit(1, b, 2, b, -l));
            }
            GadgetKind::IsingToXx => {
                let (s, t) = (a, q);
                for (x, y) in [(0usize, 1usize), (1, 2)] {
                    terms.push(PauliString::two_qubit(x, s, y, s, -l));
                    terms.push(PauliString::two_qubit(x, t, y, t, -l));
                }
            }
            GadgetKind::XxToHeisenberg => {
                for (x, y) in [(0usize, 1usize), (1, 2)] {
                    for axis in PauliAxis::ALL {
                        terms.push(PauliString::two_qubit(x, axis, y, axis, l));
                    }
                }
            }
            GadgetKind::Erasure | GadgetKind::HubbardExchange => {
                unreachable!("not three-qubit gadget kinds")
            }
        }
        for (qubit, comp) in self
            .compensation_fields(with_second_order)
            .iter()
            .enumerate()
        {
            for (c, axis) in comp.iter().zip(PauliAxis::ALL) {
                if *c != 0.0 {
                    terms.push(PauliString::single_qubit(qubit, axis, *c));
                }
            }
        }
        SpinHamiltonian::new(3, terms)
    }

    /// Full gadget Hamiltonian: field + couplings + compensation.
    pub fn hamiltonian(&self) -> Result<SpinHamiltonian, AlgebraError> {
        self.field_hamiltonian()?.add(&self.coupling_hamiltonian()?)
    }

    fn compensation_fields(&self, with_second_order: bool) -> [[f64; 3]; 3] {
        if with_second_order {
            return self.compensation;
        }
        // First-order part only: for xx-to-heisenberg the second-order piece
        // is -2 l^2/B along the field axis on each outer qubit.
        let mut comp = self.compensation;
        if self.kind == GadgetKind::XxToHeisenberg {
            let u = PauliAxis::third(self.outer.0, self.outer.1).expect("distinct pair");
            let second = 2.0 * self.lambda * self.lambda / self.b_field;
            for q in [0usize, 2] {
                let idx = PauliAxis::ALL.iter().position(|&x| x == u).unwrap();
                comp[q][idx] += second;
            }
        }
        comp
    }

    /// Axes spanning the mediator field plane.
    fn mediator_field_axes(&self) -> (PauliAxis, PauliAxis) {
        match self.kind {
            GadgetKind::PauliTune | GadgetKind::PauliToIsing => self.mediator,
            // Single-axis fields: T for ising-to-xx, the third axis for
            // xx-to-heisenberg.
            GadgetKind::IsingToXx => (self.mediator.1, self.mediator.0),
            GadgetKind::XxToHeisenberg => {
                let u = PauliAxis::third(self.outer.0, self.outer.1).expect("distinct pair");
                (u, self.outer.0)
            }
            _ => unreachable!(),
        }
    }

    /// Effective field angle: `phi` for the tunable gadget, `pi/4` for the
    /// Ising gadget, 0 for single-axis fields.
    fn field_phi(&self) -> f64 {
        match self.kind {
            GadgetKind::PauliTune => self.phi,
            GadgetKind::PauliToIsing => std::f64::consts::FRAC_PI_4,
            _ => 0.0,
        }
    }

    /// Mediator ground state of the field term, as a 2-vector.
    pub fn mediator_ground(&self) -> nalgebra::Vector2<num_complex::Complex64> {
        verify::ground_of_field(self.mediator_field_axes(), self.field_phi())
    }
}

fn axis_slot(axis: PauliAxis) -> usize {
    PauliAxis::ALL.iter().position(|&x| x == axis).unwrap()
}

/// Tunable Pauli coupling `lambda_target A (x) B` via a mediator at angle
/// `phi = asin(lambda_target B_P / lambda_P^2) / 2` on the principal branch.
pub fn compile_pauli_tune(
    a: PauliAxis,
    b: PauliAxis,
    lambda_target: f64,
    lambda_p: f64,
    b_p: f64,
) -> Result<GadgetSpec, GadgetError> {
    let max = lambda_p * lambda_p / b_p;
    if lambda_target.abs() > max * (1.0 + 1e-12) {
        return Err(GadgetError::InfeasibleTarget {
            target: lambda_target,
            max,
        });
    }
    // Mediator axes: P != A for the left coupling, Q != B and Q != P for the
    // right, preferring the printed (X, Y) pair.
    let p = *PauliAxis::ALL.iter().find(|&&p| p != a).unwrap();
    let q = *PauliAxis::ALL
        .iter()
        .find(|&&q| q != b && q != p)
        .ok_or(GadgetError::SameAxis)?;

    let phi = if lambda_p == 0.0 {
        0.0
    } else {
        0.5 * (lambda_target * b_p / (lambda_p * lambda_p))
            .clamp(-1.0, 1.0)
            .asin()
    };
    let mut compensation = [[0.0; 3]; 3];
    compensation[0][axis_slot(a)] = -lambda_p * phi.cos();
    compensation[2][axis_slot(b)] = -lambda_p * phi.sin();
    Ok(GadgetSpec {
        kind: GadgetKind::PauliTune,
        outer: (a, b),
        mediator: (p, q),
        lambda: lambda_p,
        b_field: b_p,
        phi,
        compensation,
        predicted: vec![PredictedCoupling {
            axes: (a, b),
            strength: 2.0 * lambda_p * lambda_p / b_p * phi.sin() * phi.cos(),
        }],
    })
}

/// Constant-strength Pauli coupling `+lambda_I^2/B_I A (x) B` (A != B) from
/// two Ising-type couplings through a mediator with the field at `pi/4`.
pub fn compile_pauli_to_ising(
    a: PauliAxis,
    b: PauliAxis,
    lambda_i: f64,
    b_i: f64,
) -> Result<GadgetSpec, GadgetError> {
    if a == b {
        return Err(GadgetError::SameAxis);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut compensation = [[0.0; 3]; 3];
    compensation[0][axis_slot(a)] = lambda_i * s;
    compensation[2][axis_slot(b)] = lambda_i * s;
    Ok(GadgetSpec {
        kind: GadgetKind::PauliToIsing,
        outer: (a, b),
        mediator: (a, b),
        lambda: lambda_i,
        b_field: b_i,
        phi: std::f64::consts::FRAC_PI_4,
        compensation,
        predicted: vec![PredictedCoupling {
            axes: (a, b),
            strength: lambda_i * lambda_i / b_i,
        }],
    })
}

/// Ising coupling `-2 lambda^2/B S (x) S` from two `S(x)S + T(x)T` couplings
/// with the mediator field along `T`.
pub fn compile_ising_to_xx(lambda_xx: f64, b_xx: f64) -> Result<GadgetSpec, GadgetError> {
    compile_ising_to_xx_axes(PauliAxis::X, PauliAxis::Y, lambda_xx, b_xx)
}

/// Rotated variant producing `-2 lambda^2/B S (x) S` for any axis pair.
pub fn compile_ising_to_xx_axes(
    s: PauliAxis,
    t: PauliAxis,
    lambda_xx: f64,
    b_xx: f64,
) -> Result<GadgetSpec, GadgetError> {
    if s == t {
        return Err(GadgetError::SameAxis);
    }
    let mut compensation = [[0.0; 3]; 3];
    compensation[0][axis_slot(t)] = lambda_xx;
    compensation[2][axis_slot(t)] = lambda_xx;
    Ok(GadgetSpec {
        kind: GadgetKind::IsingToXx,
        outer: (s, s),
        mediator: (s, t),
        lambda: lambda_xx,
        b_field: b_xx,
        phi: 0.0,
        compensation,
        predicted: vec![PredictedCoupling {
            axes: (s, s),
            strength: -2.0 * lambda_xx * lambda_xx / b_xx,
        }],
    })
}

/// XX-type coupling `-2 lambda^2/B (S(x)S + T(x)T)` from two Heisenberg
/// couplings with the mediator field along the remaining axis.
pub fn compile_xx_to_heisenberg(lambda_h: f64, b_h: f64) -> Result<GadgetSpec, GadgetError> {
    compile_xx_to_heisenberg_axes(PauliAxis::X, PauliAxis::Y, lambda_h, b_h)
}

pub fn compile_xx_to_heisenberg_axes(
    s: PauliAxis,
    t: PauliAxis,
    lambda_h: f64,
    b_h: f64,
) -> Result<GadgetSpec, GadgetError> {
    let u = PauliAxis::third(s, t).ok_or(GadgetError::SameAxis)?;
    // First-order projection of the U(x)U part plus the hop-back shift.
    let comp_u = -(lambda_h + 2.0 * lambda_h * lambda_h / b_h);
    let mut compensation = [[0.0; 3]; 3];
    compensation[0][axis_slot(u)] = comp_u;
    compensation[2][axis_slot(u)] = comp_u;
    let strength = -2.0 * lambda_h * lambda_h / b_h;
    Ok(GadgetSpec {
        kind: GadgetKind::XxToHeisenberg,
        outer: (s, t),
        mediator: (s, t),
        lambda: lambda_h,
        b_field: b_h,
        phi: 0.0,
        compensation,
        predicted: vec![
            PredictedCoupling {
                axes: (s, s),
                strength,
            },
            PredictedCoupling {
                axes: (t, t),
                strength,
            },
        ],
    })
}
