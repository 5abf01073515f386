//! Drive the HTTP session in-process, the way a front end would.

use axum::body::Body;
use axum::http::Request;
use tower::ServiceExt;

#[tokio::main]
async fn main() {
    let app = qubobs::service::router(1);
    for (method, uri, body) in [
        ("POST", "/step", "qubit a 0.6666667 0.3333333"),
        ("POST", "/step", "gate H a"),
        ("GET", "/state", ""),
        ("GET", "/audit", ""),
    ] {
        let req = Request::builder().method(method).uri(uri).body(Body::from(body)).unwrap();
        let res = app.clone().oneshot(req).await.unwrap();
        let bytes = axum::body::to_bytes(res.into_body(), usize::MAX).await.unwrap();
        println!("{method} {uri} {body}\n{}", String::from_utf8_lossy(&bytes));
    }
}
