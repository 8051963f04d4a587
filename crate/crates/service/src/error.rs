use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use cl1::engine::EngineError;
use serde_json::{json, Value};

/// Error bodies have the shape `{code, message, details?}`.
#[derive(Debug, Clone)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub details: Option<Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> ApiError {
        ApiError { status, code, message: message.into(), details: None }
    }

    pub fn bad_request(code: &'static str, message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn not_found(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "not-found", message)
    }

    pub fn with_details(mut self, details: Value) -> ApiError {
        self.details = Some(details);
        self
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> ApiError {
        let message = e.to_string();
        match e {
            EngineError::IllegalMove { legal, .. } => ApiError::new(StatusCode::CONFLICT, "illegal-move", message)
                .with_details(json!({ "legal_moves": legal })),
            EngineError::Finished => ApiError::new(StatusCode::CONFLICT, "session-finished", message),
            EngineError::InvalidProof { .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid-proof", message)
            }
            EngineError::Eval(_) | EngineError::Classical(_) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "evaluation", message)
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "code": self.code, "message": self.message });
        if let Some(details) = self.details {
            body["details"] = details;
        }
        (self.status, Json(body)).into_response()
    }
}
