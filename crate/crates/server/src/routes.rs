use std::collections::HashMap;

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, Path, Query, Request, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::Response;
use axum::routing::get;
use axum::{Json, Router};
use pabed_core::ingest::{self, IngestOptions, IngestReport, Mode};
use pabed_core::query::{self, ComparisonResult, MeasureRef, TrendSeries};
use pabed_core::store::{DatasetSummary, SchemaReport};
use pabed_core::AcademicYearId;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use crate::error::{ApiError, ErrorCode};
use crate::AppState;

type ApiResult<T> = Result<Json<T>, ApiError>;
type Params = Query<HashMap<String, String>>;

pub fn router(state: AppState) -> Router {
    let limit = usize::try_from(state.max_upload_bytes).unwrap_or(usize::MAX);
    let uploads = Router::new()
        .route("/api/v1/datasets/{year}", axum::routing::post(upload_dataset))
        .layer(DefaultBodyLimit::max(limit))
        .route_layer(middleware::from_fn_with_state(state.clone(), require_token));

    let mut app = Router::new()
        .route("/api/v1/datasets", get(list_datasets))
        .route("/api/v1/compare", get(compare))
        .route("/api/v1/trend", get(trend))
        .route("/api/v1/schema/{year}", get(schema))
        .merge(uploads);

    if let Some(dir) = &state.assets_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    if let Some(origin) = state.cors_origin.as_deref().and_then(|o| o.parse::<HeaderValue>().ok()) {
        app = app.layer(
            CorsLayer::new()
                .allow_origin(origin)
                .allow_methods([Method::GET, Method::POST])
                .allow_headers([header::AUTHORIZATION, header::CONTENT_TYPE]),
        );
    }
    app.with_state(state)
}

async fn require_token(State(state): State<AppState>, req: Request, next: Next) -> Result<Response, ApiError> {
    if let Some(expected) = &state.auth_token {
        let presented = req
            .headers()
            .get(header::AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "));
        if presented != Some(expected.as_str()) {
            return Err(ApiError::new(
                ErrorCode::Unauthorized,
                "missing or invalid bearer token",
            ));
        }
    }
    Ok(next.run(req).await)
}

/// Runs catalog and query work off the async executor.
async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(ErrorCode::Internal, format!("worker failed: {e}")))?
}

/// A present, non-empty query parameter. Blank form fields count as missing.
fn required<'a>(params: &'a HashMap<String, String>, name: &str) -> Result<&'a str, ApiError> {
    params
        .get(name)
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| ApiError::missing(name))
}

/// Like [`required`] for several parameters, reporting every missing one.
fn required_all<'a, const N: usize>(
    params: &'a HashMap<String, String>,
    names: [&str; N],
) -> Result<[&'a str; N], ApiError> {
    let found = names.map(|n| required(params, n).ok());
    let missing: Vec<&str> = names
        .iter()
        .zip(&found)
        .filter(|(_, v)| v.is_none())
        .map(|(n, _)| *n)
        .collect();
    if !missing.is_empty() {
        return Err(ApiError::missing(&missing.join(", ")));
    }
    Ok(found.map(Option::unwrap))
}

fn measure(params: &HashMap<String, String>) -> MeasureRef {
    params
        .get("column")
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(MeasureRef::new)
        .unwrap_or_default()
}

async fn list_datasets(State(state): State<AppState>) -> Json<Vec<DatasetSummary>> {
    Json(state.catalog.list())
}

async fn upload_dataset(
    State(state): State<AppState>,
    Path(label): Path<String>,
    Query(params): Params,
    body: Result<Bytes, BytesRejection>,
) -> Result<(StatusCode, Json<IngestReport>), ApiError> {
    let year = AcademicYearId::parse(&label)?;
    let body = body.map_err(|rejection| {
        if rejection.status() == StatusCode::PAYLOAD_TOO_LARGE {
            ApiError::new(
                ErrorCode::PayloadTooLarge,
                format!("upload exceeds {} bytes", state.max_upload_bytes),
            )
        } else {
            ApiError::new(ErrorCode::CsvSyntax, rejection.body_text())
        }
    })?;
    let options = upload_options(&params)?;
    let catalog = state.catalog.clone();
    let report = blocking(move || {
        let (table, report) = ingest::ingest(&body[..], year, &options)?;
        catalog.publish(table)?;
        Ok(report)
    })
    .await?;
    tracing::info!(
        year = %year,
        rows = report.row_count,
        columns = report.column_count,
        warnings = report.coercion_warnings,
        elapsed_ms = report.elapsed_ms,
        "dataset ingested"
    );
    Ok((StatusCode::CREATED, Json(report)))
}

fn upload_options(params: &HashMap<String, String>) -> Result<IngestOptions, ApiError> {
    let mut options = IngestOptions::default();
    if let Some(strict) = params.get("strict") {
        options.mode = match strict.as_str() {
            "true" | "1" => Mode::Strict,
            "false" | "0" | "" => Mode::Lenient,
            other => {
                return Err(ApiError::new(
                    ErrorCode::CsvSyntax,
                    format!("strict must be true or false, got {other:?}"),
                ))
            }
        };
    }
    if let Some(delim) = params.get("delimiter") {
        match delim.as_bytes() {
            [b] if b.is_ascii() => options.delimiter = *b,
            _ => {
                return Err(ApiError::new(
                    ErrorCode::CsvSyntax,
                    format!("delimiter must be a single ASCII character, got {delim:?}"),
                ))
            }
        }
    }
    Ok(options)
}

async fn compare(State(state): State<AppState>, Query(params): Params) -> ApiResult<ComparisonResult> {
    let [year1, year2] = required_all(&params, ["year1", "year2"])?;
    let (year1, year2) = (AcademicYearId::parse(year1)?, AcademicYearId::parse(year2)?);
    let measure = measure(&params);
    let catalog = state.catalog.clone();
    let result = blocking(move || Ok(query::compare_years(&catalog, year1, year2, &measure)?)).await?;
    Ok(Json(result))
}

async fn trend(State(state): State<AppState>, Query(params): Params) -> ApiResult<TrendSeries> {
    let [from, to] = required_all(&params, ["from", "to"])?;
    let (from, to) = (AcademicYearId::parse(from)?, AcademicYearId::parse(to)?);
    let measure = measure(&params);
    let catalog = state.catalog.clone();
    let series = blocking(move || Ok(query::trend_series(&catalog, from, to, &measure)?)).await?;
    Ok(Json(series))
}

async fn schema(State(state): State<AppState>, Path(label): Path<String>) -> ApiResult<SchemaReport> {
    let year = AcademicYearId::parse(&label)?;
    let catalog = state.catalog.clone();
    let report = blocking(move || Ok(catalog.lookup(year)?.schema_report())).await?;
    Ok(Json(report))
}
