use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(
        "time grid [{t_min}, {t_max}] does not cover the required span [-{required}, {required}]"
    )]
    GridTooSmall {
        t_min: f64,
        t_max: f64,
        required: f64,
    },

    #[error("green kernel is a delta function at zero dispersion phase; use propagate instead")]
    ZeroDispersion,

    #[error(
        "propagated field leaks {fraction:.3e} of its energy into the grid guard band \
         (limit {limit:.1e}); a half-span of at least {required_half_span:.2} tau_p is needed"
    )]
    WrapAround {
        fraction: f64,
        limit: f64,
        required_half_span: f64,
    },

    #[error("time {t} is not a grid point")]
    OffGrid { t: f64 },

    #[error("I2 quadrature did not converge with {nodes} nodes: last {last}, previous {previous}")]
    Quadrature {
        nodes: usize,
        last: Complex64,
        previous: Complex64,
    },

    #[error(
        "mean photon number {mean_n:.3e} is below the resolvable floor {floor:.3e}; Q is undefined"
    )]
    UndefinedQ { mean_n: f64, floor: f64 },

    #[error("singular focus: V = 0")]
    SingularFocus,

    #[error(
        "closed form outside its domain (psi0 = {psi0}, phi = {phi}, phi_d = {phi_d}): {reason}"
    )]
    Domain {
        psi0: f64,
        phi: f64,
        phi_d: f64,
        reason: &'static str,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
