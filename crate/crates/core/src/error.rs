use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix or parameter set failed a structural precondition
    /// (Hermiticity, unit trace, positivity, physicality).
    #[error("validation error: {0}")]
    Validation(String),

    /// A scalar argument lies outside its admissible interval.
    #[error("{name} = {value} is outside {interval}")]
    Range {
        name: &'static str,
        value: f64,
        interval: &'static str,
    },

    /// A state expected to be Bell-diagonal carries other Pauli correlators.
    #[error("state is not Bell-diagonal; offending correlators: {}", format_correlators(.offending))]
    NotBellDiagonal { offending: Vec<(String, f64)> },

    /// The filtered operator annihilated the state.
    #[error("filter output has vanishing trace {trace:e}")]
    DegenerateFilter { trace: f64 },

    /// A numeric oracle ran out of restarts before its simplex converged.
    #[error("optimizer did not converge after {restarts} restarts; best value {best}")]
    NonConvergence { best: f64, restarts: usize },

    /// A scenario document could not be parsed.
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

fn format_correlators(items: &[(String, f64)]) -> String {
    items
        .iter()
        .map(|(name, v)| format!("{name}={v:.3e}"))
        .collect::<Vec<_>>()
        .join(", ")
}
