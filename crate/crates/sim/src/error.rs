use thiserror::Error;
use vip_core::audio::AudioError;
use vip_core::gesture::GestureError;
use vip_core::model::ModelError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("scenario parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("t = {t} ms is outside the scenario duration of {duration} ms")]
    TimeOutOfRange { t: u64, duration: u64 },
    #[error(transparent)]
    Audio(#[from] AudioError),
    #[error(transparent)]
    Gesture(#[from] GestureError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("protocol: {0}")]
    Protocol(String),
    #[error(transparent)]
    WebSocket(#[from] Box<tungstenite::Error>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for SimError {
    fn from(e: serde_json::Error) -> Self {
        SimError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl From<tungstenite::Error> for SimError {
    fn from(e: tungstenite::Error) -> Self {
        SimError::WebSocket(Box::new(e))
    }
}
