use thiserror::Error;

/// Errors surfaced by the toolkit. Messages are stable strings that the CLI
/// and FFI layers forward verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("divergent normalization")]
    DivergentNormalization,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("probability out of range")]
    ProbabilityOutOfRange,
    #[error("perturbation not bounded")]
    PerturbationNotBounded,
    #[error("asymptotic regime requires positive x")]
    AsymptoticRegime,
    #[error("Legendre of non-convex input not supported")]
    NonConvexLegendre,
    #[error("unsupported (alpha, beta) combination")]
    UnsupportedAlphaBeta,
    #[error("entropy of null function")]
    NullFunction,
    #[error("criterion integrand diverges at t = {0}")]
    CriterionIntegrandDiverges(f64),
    #[error("weighted LSI constant infinite")]
    WeightedLsiInfinite,
    #[error("family incompatible with cost (alpha=1 Lipschitz bound exceeded)")]
    FamilyIncompatibleWithCost,
    #[error("transfer requires lambda > C")]
    TransferLambdaTooSmall,
    #[error("statistic out of hypothesis class")]
    StatisticOutOfClass,
    #[error("optimality of monotone coupling not guaranteed")]
    NonConvexTransportCost,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
