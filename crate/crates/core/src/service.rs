//! HTTP front for an interactive session.
//!
//! `POST /step` takes one scenario line as the body and returns the
//! transcript text it produced. `GET /state` and `GET /audit` return the
//! current disk and the audit table. All payloads are plain text.

use std::sync::Arc;

use axum::extract::State;
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::Router;
use tokio::sync::Mutex;

use crate::scenario::{ScenarioError, Session};

pub type Shared = Arc<Mutex<Session>>;

/// Router over a fresh session seeded with `seed`.
pub fn router(seed: u64) -> Router {
    router_with(Arc::new(Mutex::new(Session::new(seed))))
}

pub fn router_with(session: Shared) -> Router {
    Router::new()
        .route("/step", post(step))
        .route("/state", get(state))
        .route("/audit", get(audit))
        .with_state(session)
}

async fn step(State(session): State<Shared>, body: String) -> (StatusCode, String) {
    let mut session = session.lock().await;
    let mut out = String::new();
    for line in body.lines() {
        match session.step(line) {
            Ok(text) => out.push_str(&text),
            Err(e) => {
                let code = match e {
                    ScenarioError::Parse { .. } => StatusCode::BAD_REQUEST,
                    _ => StatusCode::UNPROCESSABLE_ENTITY,
                };
                out.push_str(&format!("error: {e}\n"));
                return (code, out);
            }
        }
    }
    (StatusCode::OK, out)
}

async fn state(State(session): State<Shared>) -> String {
    session.lock().await.state_text()
}

async fn audit(State(session): State<Shared>) -> String {
    session.lock().await.audit_text()
}

/// Serves `router(seed)` on `addr` until the process exits.
pub async fn serve(addr: &str, seed: u64) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(seed)).await
}
