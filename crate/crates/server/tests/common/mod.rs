#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use pabed_core::store::Catalog;
use pabed_server::{router, AppState};
use serde_json::Value;
use tower::ServiceExt;

pub struct TestApp {
    pub app: Router,
    pub catalog: Arc<Catalog>,
    _dir: tempfile::TempDir,
}

pub fn app_with(configure: impl FnOnce(&mut AppState)) -> TestApp {
    let dir = tempfile::tempdir().unwrap();
    let catalog = Arc::new(Catalog::open(dir.path()).unwrap());
    build(catalog, dir, configure)
}

/// An app whose catalog lives at `root` (the caller owns the directory).
pub fn app_in(root: &std::path::Path) -> TestApp {
    let catalog = Arc::new(Catalog::open(root).unwrap());
    build(catalog, tempfile::tempdir().unwrap(), |_| {})
}

fn build(catalog: Arc<Catalog>, dir: tempfile::TempDir, configure: impl FnOnce(&mut AppState)) -> TestApp {
    let mut state = AppState::new(catalog.clone());
    configure(&mut state);
    TestApp {
        app: router(state),
        catalog,
        _dir: dir,
    }
}

pub fn app() -> TestApp {
    app_with(|_| {})
}

pub struct Reply {
    pub status: StatusCode,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body)
            .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.body)))
    }
}

impl TestApp {
    pub async fn request(&self, req: Request<Body>) -> Reply {
        let resp = self.app.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply { status, body }
    }

    pub async fn get(&self, uri: &str) -> Reply {
        self.request(Request::get(uri).body(Body::empty()).unwrap()).await
    }

    pub async fn post_csv(&self, uri: &str, csv: impl Into<Body>, token: Option<&str>) -> Reply {
        let mut req = Request::builder()
            .method(Method::POST)
            .uri(uri)
            .header("content-type", "text/csv");
        if let Some(t) = token {
            req = req.header("authorization", format!("Bearer {t}"));
        }
        self.request(req.body(csv.into()).unwrap()).await
    }
}
