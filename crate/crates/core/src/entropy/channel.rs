use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::density::DensityOp;
use super::linalg::{max_abs_diff, CMatrix, CVector};
use super::state::{BipartitePureState, TripartitePureState};
use super::{EntropyError, VALIDATION_TOL};

/// CPTP map given by Kraus operators, each `d_out x d_in`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self, EntropyError> {
        let first = kraus.first().ok_or(EntropyError::NoKraus)?;
        let (d_out, d_in) = (first.nrows(), first.ncols());
        if d_in == 0 || d_out == 0 {
            return Err(EntropyError::Dimension("empty Kraus operator".into()));
        }
        let mut sum = CMatrix::zeros(d_in, d_in);
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(EntropyError::Dimension(alloc::format!(
                    "Kraus operator is {}x{}, expected {d_out}x{d_in}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            sum += k.adjoint() * k;
        }
        let dev = max_abs_diff(&sum, &CMatrix::identity(d_in, d_in));
        if dev > VALIDATION_TOL {
            return Err(EntropyError::NotTracePreserving(dev));
        }
        Ok(QuantumChannel { d_in, d_out, kraus })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Environment dimension of the Stinespring dilation.
    pub fn d_env(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// `sum_i K_i X K_i^dagger` on an arbitrary `d_in x d_in` operator.
    pub fn apply_operator(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        out
    }

    pub fn apply(&self, rho: &DensityOp) -> Result<DensityOp, EntropyError> {
        if rho.dim() != self.d_in {
            return Err(EntropyError::Dimension(alloc::format!(
                "channel input is {}, state is {}",
                self.d_in,
                rho.dim()
            )));
        }
        DensityOp::new(self.apply_operator(rho.matrix()))
    }
}

/// Isometry `U: d_in -> d_out * d_E` with `U[(b * d_E + e), a] = K_e[b, a]`.
pub fn stinespring(ch: &QuantumChannel) -> CMatrix {
    let de = ch.d_env();
    CMatrix::from_fn(ch.d_out * de, ch.d_in, |row, a| ch.kraus[row % de][(row / de, a)])
}

/// `(1_A ⊗ U_N)|phi>` on `A ⊗ B ⊗ E`.
pub fn channel_state(ch: &QuantumChannel, phi: &BipartitePureState) -> Result<TripartitePureState, EntropyError> {
    let (da, dprime) = phi.dims();
    if dprime != ch.d_in {
        return Err(EntropyError::Dimension(alloc::format!(
            "input system has dimension {dprime}, channel expects {}",
            ch.d_in
        )));
    }
    let u = stinespring(ch);
    let dbe = u.nrows();
    let amps = phi.amplitudes();
    let mut out = CVector::zeros(da * dbe);
    for a in 0..da {
        for row in 0..dbe {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..dprime {
                acc += u[(row, x)] * amps[a * dprime + x];
            }
            out[a * dbe + row] = acc;
        }
    }
    TripartitePureState::new((da, ch.d_out, ch.d_env()), out)
}

/// Named one-parameter qubit channel families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelFamily {
    /// Output `|2>` flags an erasure; `d_out = 3`.
    Erasure,
    Depolarizing,
    Dephasing,
    AmplitudeDamping,
    /// Parameter is ignored.
    Identity,
}

impl ChannelFamily {
    pub const ALL: [ChannelFamily; 5] = [
        ChannelFamily::Erasure,
        ChannelFamily::Depolarizing,
        ChannelFamily::Dephasing,
        ChannelFamily::AmplitudeDamping,
        ChannelFamily::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelFamily::Erasure => "erasure",
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::Dephasing => "dephasing",
            ChannelFamily::AmplitudeDamping => "amplitude_damping",
            ChannelFamily::Identity => "identity",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, EntropyError> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| EntropyError::UnknownFamily(name.to_string()))
    }

    pub fn build(self, p: f64) -> Result<QuantumChannel, EntropyError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(EntropyError::OutOfDomain { family: String::from(self.name()), value: p });
        }
        let c = |x: f64| Complex64::new(x, 0.0);
        let m2 = |v: [[Complex64; 2]; 2]| CMatrix::from_fn(2, 2, |i, j| v[i][j]);
        let z = c(0.0);
        let one = c(1.0);
        let i = Complex64::new(0.0, 1.0);
        let id = m2([[one, z], [z, one]]);
        let x = m2([[z, one], [one, z]]);
        let y = m2([[z, -i], [i, z]]);
        let pz = m2([[one, z], [z, -one]]);
        let kraus = match self {
            ChannelFamily::Identity => vec![id],
            ChannelFamily::Erasure => {
                let s = libm::sqrt(p);
                let mut keep = CMatrix::zeros(3, 2);
                keep[(0, 0)] = c(libm::sqrt(1.0 - p));
                keep[(1, 1)] = c(libm::sqrt(1.0 - p));
                let mut e0 = CMatrix::zeros(3, 2);
                e0[(2, 0)] = c(s);
                let mut e1 = CMatrix::zeros(3, 2);
                e1[(2, 1)] = c(s);
                vec![keep, e0, e1]
            }
            ChannelFamily::Depolarizing => {
                let q = c(libm::sqrt(p / 4.0));
                vec![id * c(libm::sqrt(1.0 - 3.0 * p / 4.0)), x * q, y * q, pz * q]
            }
            ChannelFamily::Dephasing => vec![id * c(libm::sqrt(1.0 - p)), pz * c(libm::sqrt(p))],
            ChannelFamily::AmplitudeDamping => vec![
                m2([[one, z], [z, c(libm::sqrt(1.0 - p))]]),
                m2([[z, c(libm::sqrt(p))], [z, z]]),
            ],
        };
        QuantumChannel::new(kraus)
    }
}
