use crate::oracle::ModelKind;

/// Cross-block Hamiltonian `−(1/n) Σ_{i∈A, j∈B} (J1 S_i·S_j + J2 (S_i·S_j)²)`
/// for spin 1, rewritten with `S·S = T − P` and `(S·S)² = P + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BilinearBiquadraticForm {
    Zero,
    /// AB model with `a = b = 0`.
    Ab { c: f64 },
    /// Walled Brauer model (singlet form) with `a = b = 0`.
    WbP { c: f64 },
    /// `−(1/n) Σ (t T + p P)`, only available to the dense oracle.
    Mixed { t: f64, p: f64 },
}

impl BilinearBiquadraticForm {
    pub fn kind(&self) -> Option<ModelKind> {
        match self {
            Self::Zero => None,
            Self::Ab { .. } => Some(ModelKind::Ab),
            Self::WbP { .. } => Some(ModelKind::WbP),
            Self::Mixed { .. } => Some(ModelKind::BilinearBiquadratic),
        }
    }
}

/// Returns the converted form and `κ` such that
/// `H(J1, J2) = H_form − κ m (n − m) / n`; here `κ = J2`.
pub fn bilinear_biquadratic_convert(j1: f64, j2: f64) -> (BilinearBiquadraticForm, f64) {
    let p = j2 - j1;
    let form = if j1 == 0.0 && p == 0.0 {
        BilinearBiquadraticForm::Zero
    } else if p == 0.0 {
        BilinearBiquadraticForm::Ab { c: j1 }
    } else if j1 == 0.0 {
        BilinearBiquadraticForm::WbP { c: p }
    } else {
        BilinearBiquadraticForm::Mixed { t: j1, p }
    };
    (form, j2)
}
