use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("argument {0} outside the supported Airy range |x| <= 12")]
    Range(f64),

    #[error("singular seed at t = {t}: {what}")]
    SingularSeed { t: f64, what: String },

    #[error("Wronskian vanishes; nonvanishing-Wronskian condition violated")]
    VanishingWronskian,

    #[error("degenerate solution pair: {0}")]
    Degenerate(String),

    #[error("irregular curve: {0}")]
    Regularity(String),
}
