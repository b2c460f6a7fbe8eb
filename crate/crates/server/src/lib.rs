//! HTTP JSON API over a pabed catalog.
//!
//! | Method | Path | Body |
//! |---|---|---|
//! | GET | `/api/v1/datasets` | `[{year, row_count, column_count}]` |
//! | POST | `/api/v1/datasets/{year}` | CSV in, ingest report out |
//! | GET | `/api/v1/compare?year1=&year2=&column=UGDS` | comparison |
//! | GET | `/api/v1/trend?from=&to=&column=UGDS` | trend series |
//! | GET | `/api/v1/schema/{year}` | `{columns: [{name, type, null_count}]}` |
//!
//! Errors are `{"code", "message"}` with a status fixed per code. Totals are
//! whole-column sums per year; institutions are not matched across years.

mod error;
mod routes;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use pabed_core::store::Catalog;
use tokio::net::TcpListener;

pub use error::{ApiError, ErrorCode};
pub use routes::router;

pub const DEFAULT_MAX_UPLOAD_BYTES: u64 = 4 << 30;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub bind_address: String,
    pub catalog_root: PathBuf,
    /// When set, `POST` endpoints require `Authorization: Bearer <token>`.
    pub auth_token: Option<String>,
    pub max_upload_bytes: u64,
    /// Extra origin allowed by CORS, e.g. a dashboard dev server.
    pub cors_origin: Option<String>,
    /// Directory of static dashboard assets served for non-API paths.
    pub assets_dir: Option<PathBuf>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            bind_address: "127.0.0.1:8080".into(),
            catalog_root: PathBuf::from("catalog"),
            auth_token: None,
            max_upload_bytes: DEFAULT_MAX_UPLOAD_BYTES,
            cors_origin: None,
            assets_dir: None,
        }
    }
}

/// Shared handler state.
#[derive(Debug, Clone)]
pub struct AppState {
    pub catalog: Arc<Catalog>,
    pub auth_token: Option<String>,
    pub max_upload_bytes: u64,
    pub cors_origin: Option<String>,
    pub assets_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(catalog: Arc<Catalog>) -> Self {
        Self {
            catalog,
            auth_token: None,
            max_upload_bytes: DEFAULT_MAX_UPLOAD_BYTES,
            cors_origin: None,
            assets_dir: None,
        }
    }

    pub fn from_config(config: &ServerConfig) -> pabed_core::Result<Self> {
        if config.max_upload_bytes == 0 {
            return Err(pabed_core::Error::Io(std::io::Error::new(
                std::io::ErrorKind::InvalidInput,
                "max_upload_bytes must be positive",
            )));
        }
        Ok(Self {
            catalog: Arc::new(Catalog::open(&config.catalog_root)?),
            auth_token: config.auth_token.clone(),
            max_upload_bytes: config.max_upload_bytes,
            cors_origin: config.cors_origin.clone(),
            assets_dir: config.assets_dir.clone(),
        })
    }
}

/// A bound, not yet running server.
pub struct Server {
    listener: TcpListener,
    state: AppState,
}

impl Server {
    pub async fn bind(config: &ServerConfig) -> pabed_core::Result<Self> {
        let state = AppState::from_config(config)?;
        let listener = TcpListener::bind(&config.bind_address).await?;
        Ok(Self { listener, state })
    }

    pub fn local_addr(&self) -> std::io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    pub fn state(&self) -> &AppState {
        &self.state
    }

    pub async fn run(self) -> std::io::Result<()> {
        axum::serve(self.listener, router(self.state)).await
    }
}
