//! Painlevé forms of the gap recurrence.

pub mod closed;
pub mod dp;
pub mod qcharlier;
pub mod qp6;

use crate::error::{Error, Result};
use crate::family::{FamilyName, FamilySpec};
use crate::scalar::Real;

/// How `D_s` is advanced on the Painlevé side for a given family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PainleveRoute {
    /// Charlier: dPIV with closed `ΔR`.
    DPIV,
    /// Meixner, Krawtchouk: dPV with closed `ΔR`.
    DPV,
    /// q-Charlier scalar bundle.
    QCharlier,
    /// q-PVI in Jimbo–Sakai variables.
    QPVI,
    /// q-PVI with `λ2 = 0`.
    QPVIDegenerate,
    /// No scalar Painlevé reduction; the compatibility condition is solved as a matrix equation.
    Matrix,
}

impl PainleveRoute {
    pub fn name(self) -> &'static str {
        match self {
            PainleveRoute::DPIV => "dPIV",
            PainleveRoute::DPV => "dPV",
            PainleveRoute::QCharlier => "q-Charlier",
            PainleveRoute::QPVI => "q-PVI",
            PainleveRoute::QPVIDegenerate => "q-PVI (degenerate)",
            PainleveRoute::Matrix => "matrix",
        }
    }
}

pub fn painleve_route(name: FamilyName) -> Option<PainleveRoute> {
    use FamilyName::*;
    Some(match name {
        Charlier => PainleveRoute::DPIV,
        Meixner | Krawtchouk => PainleveRoute::DPV,
        QCharlier => PainleveRoute::QCharlier,
        LittleQJacobi | QKrawtchouk => PainleveRoute::QPVI,
        LittleQLaguerre => PainleveRoute::QPVIDegenerate,
        AlternativeQCharlier => PainleveRoute::Matrix,
        _ => return None,
    })
}

/// Output of a Painlevé-route run.
#[derive(Debug, Clone, PartialEq)]
pub struct PainleveRun<T> {
    /// `D_k..=D_{s_max}`.
    pub values: Vec<T>,
    /// Steps `s` that went through the matrix recurrence because the scalar variables broke down.
    pub fallback_steps: Vec<usize>,
}

impl<T: Real> PainleveRun<T> {
    fn start(d_k: &T, d_k1: &T, both: bool) -> Self {
        let mut values = vec![d_k.clone()];
        if both {
            values.push(d_k1.clone());
        }
        PainleveRun {
            values,
            fallback_steps: Vec::new(),
        }
    }
}

/// Breakdowns of a scalar parameterization that the matrix sequence passes through.
fn recoverable(e: &Error) -> bool {
    matches!(
        e,
        Error::DPSingular { .. }
            | Error::DegenerateParameterization { .. }
            | Error::NonFinite { .. }
            | Error::RootNotFound { .. }
    )
}

/// `D_k..=D_{s_max}` on the family's Painlevé route.
pub fn gap_values_painleve<T: Real>(f: &FamilySpec<T>, k: usize, s_max: usize) -> Result<Vec<T>> {
    Ok(run_painleve(f, k, s_max)?.values)
}

/// Like [`gap_values_painleve`], also reporting steps taken by the fallback.
pub fn run_painleve<T: Real>(f: &FamilySpec<T>, k: usize, s_max: usize) -> Result<PainleveRun<T>> {
    let route = painleve_route(f.name).ok_or_else(|| Error::UnsupportedFamily {
        family: f.name.key().to_string(),
        what: "a Painlevé recurrence".to_string(),
    })?;
    let plain = |values| PainleveRun {
        values,
        fallback_steps: Vec::new(),
    };
    match route {
        PainleveRoute::DPIV | PainleveRoute::DPV => closed::run_closed(f, k, s_max),
        PainleveRoute::QCharlier => qcharlier::gap_values_qcharlier(f, k, s_max).map(plain),
        PainleveRoute::QPVI | PainleveRoute::QPVIDegenerate => qp6::run_js(f, k, s_max),
        PainleveRoute::Matrix => qp6::gap_values_matrix(f, k, s_max).map(plain),
    }
}
