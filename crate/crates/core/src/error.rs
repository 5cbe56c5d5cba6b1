use crate::drawing::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("drawing failed validation: {}", summarize(.0))]
    InvalidDrawing(Vec<Violation>),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("separator size cap exceeded: {vertices} vertices > cap {cap}")]
    CapExceeded { vertices: usize, cap: usize },

    #[error("internal invariant broken: {0}")]
    Invariant(String),

    #[error("could not re-embed drawing ({0}); render the geometric input instead")]
    Layout(String),

    #[error("generator gave up after {0} attempts")]
    RetriesExhausted(usize),
}

fn summarize(violations: &[Violation]) -> String {
    let mut parts: Vec<String> = violations.iter().take(3).map(|v| v.to_string()).collect();
    if violations.len() > 3 {
        parts.push(format!("... {} more", violations.len() - 3));
    }
    parts.join("; ")
}
