use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("elements belong to different algebras")]
    ParentMismatch,

    #[error("numerical rank decision is ambiguous (residual {residual:.3e})")]
    IllConditioned { residual: f64 },

    #[error("element is not normal (defect {defect:.3e})")]
    NonNormal { defect: f64 },

    #[error("spectral decomposition failed (residual {residual:.3e}); the involution is likely not proper")]
    DecompositionFailed { residual: f64 },

    #[error("element is not positive (spectral value {value:.3e})")]
    NotPositive { value: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("algebra has no C*-norm (Gram form minimum eigenvalue {min_eigenvalue:.3e})")]
    NoCstarNorm { min_eigenvalue: f64 },

    #[error("subspace is not a right ideal (residual {residual:.3e})")]
    NotRightIdeal { residual: f64 },

    #[error("certification failed for {what} (residual {residual:.3e})")]
    Certification { what: &'static str, residual: f64 },

    #[error("algebra is not unital")]
    NotUnital,

    #[error("randomized refinement did not terminate; retry with another seed")]
    DegenerateRandomness,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("group closure exceeded cap of {cap} elements; the group may be infinite")]
    ClosureCapExceeded { cap: usize },

    #[error("step functions live over different set-algebra backends")]
    BackendMismatch,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
