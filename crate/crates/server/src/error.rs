use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

/// Machine-readable error codes. The status for each code is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    MissingParameter,
    MalformedYear,
    UnknownYear,
    UnknownColumn,
    TypeMismatch,
    CsvSyntax,
    Unauthorized,
    PayloadTooLarge,
    Internal,
}

impl ErrorCode {
    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::MissingParameter | ErrorCode::MalformedYear | ErrorCode::CsvSyntax => {
                StatusCode::BAD_REQUEST
            }
            ErrorCode::Unauthorized => StatusCode::UNAUTHORIZED,
            ErrorCode::UnknownYear | ErrorCode::UnknownColumn => StatusCode::NOT_FOUND,
            ErrorCode::TypeMismatch => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::PayloadTooLarge => StatusCode::PAYLOAD_TOO_LARGE,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

/// JSON error body: `{"code": "...", "message": "..."}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn missing(param: &str) -> Self {
        Self::new(
            ErrorCode::MissingParameter,
            format!("*Please enter all the values (missing: {param})"),
        )
    }

    pub fn status(&self) -> StatusCode {
        self.code.status()
    }
}

impl From<pabed_core::Error> for ApiError {
    fn from(err: pabed_core::Error) -> Self {
        use pabed_core::Error as E;
        let code = match &err {
            E::MalformedYear { .. } | E::ReversedRange { .. } => ErrorCode::MalformedYear,
            E::CsvSyntax { .. } | E::EmptyInput | E::SchemaMismatch { .. } | E::Coercion { .. } => {
                ErrorCode::CsvSyntax
            }
            E::UnknownYear(_) | E::EmptyRange { .. } => ErrorCode::UnknownYear,
            E::UnknownColumn(_) => ErrorCode::UnknownColumn,
            E::TypeMismatch { .. } => ErrorCode::TypeMismatch,
            E::InvalidTable(_) | E::Format(_) | E::Io(_) => {
                tracing::error!(error = %err, "internal error");
                ErrorCode::Internal
            }
        };
        Self::new(code, err.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self)).into_response()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_status_mapping() {
        let table = [
            (ErrorCode::MissingParameter, 400),
            (ErrorCode::MalformedYear, 400),
            (ErrorCode::CsvSyntax, 400),
            (ErrorCode::Unauthorized, 401),
            (ErrorCode::UnknownYear, 404),
            (ErrorCode::UnknownColumn, 404),
            (ErrorCode::TypeMismatch, 422),
            (ErrorCode::PayloadTooLarge, 413),
            (ErrorCode::Internal, 500),
        ];
        for (code, status) in table {
            assert_eq!(code.status().as_u16(), status, "{code:?}");
        }
    }

    #[test]
    fn codes_serialize_screaming() {
        let body = serde_json::to_string(&ApiError::missing("year2")).unwrap();
        assert!(body.contains("\"MISSING_PARAMETER\""), "{body}");
        assert!(body.contains("*Please enter all the values"), "{body}");
    }

    #[test]
    fn core_errors_map_to_codes() {
        let e: ApiError = pabed_core::Error::UnknownColumn("X".into()).into();
        assert_eq!(e.code, ErrorCode::UnknownColumn);
        let e: ApiError = pabed_core::AcademicYearId::parse("96_97").unwrap_err().into();
        assert_eq!(e.code, ErrorCode::MalformedYear);
    }
}
