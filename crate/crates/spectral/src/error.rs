use thiserror::Error;

pub type Result<T, E = SpectralError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid lattice: {0}")]
    Lattice(String),
    #[error("Q' singular ({detail}) at N={n}")]
    Singular { n: usize, detail: &'static str },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is not Hermitian (defect {defect:e} > {tol:e})")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("insufficient resolution: {0}")]
    Resolution(String),
}

impl SpectralError {
    pub(crate) fn singular(n: usize) -> Self {
        let detail = if n.is_multiple_of(2) {
            "N=2m, m even"
        } else {
            "open ends"
        };
        SpectralError::Singular { n, detail }
    }
}
