use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use ovalkit::request::{Operation, ScenarioFlags};
use ovalkit::scenario::{run_scenario, ResultDocument};
use ovalkit::service::{router, ServiceConfig};

async fn call(app: axum::Router, req: Request<Body>) -> (StatusCode, axum::http::HeaderMap, String) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, headers, String::from_utf8(bytes.to_vec()).unwrap())
}

fn get(uri: &str) -> Request<Body> {
    Request::get(uri).body(Body::empty()).unwrap()
}

fn app() -> axum::Router {
    router(ServiceConfig::default())
}

#[tokio::test]
async fn offset_query_matches_cli_bytes() {
    let (status, headers, body) = call(app(), get("/api/offset?curve=cayley&a=1&b=1&d=0.5&side=both")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(headers[header::CONTENT_TYPE], "application/json");
    let flags =
        ScenarioFlags::from_pairs([("curve", "cayley"), ("a", "1"), ("b", "1"), ("d", "0.5"), ("side", "both")])
            .unwrap();
    let s = flags.build(Operation::Offset, None).unwrap();
    assert_eq!(body, run_scenario(&s).unwrap().to_json());
    let doc = ResultDocument::from_json(&body).unwrap();
    let sides: std::collections::BTreeSet<_> =
        doc.layers[0].offsets.arcs.iter().map(|a| format!("{:?}", a.kind)).collect();
    assert_eq!(sides.len(), 2);
}

#[tokio::test]
async fn zero_distance_is_unprocessable() {
    let (status, _, body) = call(app(), get("/api/offset?curve=cayley&a=1&b=1&d=0")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["path"], "d[0]");
}

#[tokio::test]
async fn circle_has_no_singular_points() {
    let (status, _, body) = call(app(), get("/api/singular?curve=unit_circle&d=0.5")).await;
    assert_eq!(status, StatusCode::OK);
    let doc = ResultDocument::from_json(&body).unwrap();
    assert_eq!(doc.singular_points().count(), 0);
    assert!(doc.diagnostics.rejected_seeds.is_empty());
}

#[tokio::test]
async fn malformed_body_is_bad_request() {
    let req =
        Request::post("/api/offset").header(header::CONTENT_TYPE, "application/json").body(Body::from("{")).unwrap();
    let (status, _, _) = call(app(), req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn body_errors_carry_field_paths() {
    let body = r#"{"curve": {"type": "ellipse", "a": 5, "b": -3}, "d": [1]}"#;
    let req = Request::post("/api/envelope").body(Body::from(body)).unwrap();
    let (status, _, body) = call(app(), req).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["path"], "curve.b");

    let req = Request::post("/api/offset")
        .body(Body::from(r#"{"curve": {"type": "cayley", "a": 1, "b": 1}, "dd": 1}"#))
        .unwrap();
    let (status, _, _) = call(app(), req).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn json_body_and_query_agree() {
    let body = r#"{"curve": {"type": "ellipse", "a": 5, "b": 3}, "d": [1], "resolution": 300}"#;
    let req = Request::post("/api/envelope").body(Body::from(body)).unwrap();
    let (s1, _, from_body) = call(app(), req).await;
    let (s2, _, from_query) = call(app(), get("/api/envelope?curve=ellipse&a=5&b=3&d=1&resolution=300")).await;
    assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK));
    assert_eq!(from_body, from_query);
    let doc = ResultDocument::from_json(&from_body).unwrap();
    assert_eq!(doc.scenario.samples, 300);
    assert_eq!(doc.envelopes.len(), 1);
}

#[tokio::test]
async fn resolution_is_clamped() {
    let (_, _, body) = call(app(), get("/api/offset?curve=unit_circle&d=0.5&resolution=3")).await;
    assert_eq!(ResultDocument::from_json(&body).unwrap().scenario.samples, 64);
    let (_, _, body) = call(app(), get("/api/offset?curve=unit_circle&d=0.5&resolution=100000")).await;
    assert_eq!(ResultDocument::from_json(&body).unwrap().scenario.samples, 8192);
}

#[tokio::test]
async fn etag_allows_not_modified() {
    let uri = "/api/offset?curve=cayley&a=1&b=2&d=0.3&resolution=200";
    let (status, headers, _) = call(app(), get(uri)).await;
    assert_eq!(status, StatusCode::OK);
    let etag = headers[header::ETAG].to_str().unwrap().to_string();
    let req = Request::get(uri).header(header::IF_NONE_MATCH, &etag).body(Body::empty()).unwrap();
    let (status, headers, body) = call(app(), req).await;
    assert_eq!(status, StatusCode::NOT_MODIFIED);
    assert_eq!(headers[header::ETAG], etag.as_str());
    assert!(body.is_empty());
    // A different scenario has a different tag.
    let (_, other, _) = call(app(), get("/api/offset?curve=cayley&a=1&b=2&d=0.4&resolution=200")).await;
    assert_ne!(other[header::ETAG], etag.as_str());
}

#[tokio::test]
async fn expensive_requests_become_jobs() {
    let config = ServiceConfig { async_threshold: 0.0, ..ServiceConfig::default() };
    let app = router(config);
    let uri = "/api/singular?curve=cayley&a=1&b=1&d=0.5&resolution=400";
    let (status, headers, body) = call(app.clone(), get(uri)).await;
    assert_eq!(status, StatusCode::ACCEPTED);
    let v: Value = serde_json::from_str(&body).unwrap();
    let poll = v["poll"].as_str().unwrap().to_string();
    assert_eq!(headers[header::LOCATION], poll.as_str());
    let mut done = None;
    for _ in 0..400 {
        let (status, _, body) = call(app.clone(), get(&poll)).await;
        if status == StatusCode::OK {
            done = Some(body);
            break;
        }
        assert_eq!(status, StatusCode::ACCEPTED);
        tokio::time::sleep(std::time::Duration::from_millis(25)).await;
    }
    let body = done.expect("job finished");
    let doc = ResultDocument::from_json(&body).unwrap();
    assert!(doc.singular_points().count() > 0);
    assert_eq!(body, run_scenario(&doc.scenario).unwrap().to_json());

    let (status, _, _) = call(app, get("/api/job/0000")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn cors_only_for_the_ui_origin() {
    let req = |origin: &str| {
        Request::get("/api/offset?curve=unit_circle&d=0.5&resolution=64")
            .header(header::ORIGIN, origin)
            .body(Body::empty())
            .unwrap()
    };
    let (_, headers, _) = call(app(), req("http://localhost:5173")).await;
    assert_eq!(headers[header::ACCESS_CONTROL_ALLOW_ORIGIN], "http://localhost:5173");
    let (_, headers, _) = call(app(), req("http://example.com")).await;
    assert!(headers.get(header::ACCESS_CONTROL_ALLOW_ORIGIN).is_none());
}

#[tokio::test]
async fn requests_are_independent_of_order() {
    let a = "/api/contour?curve=cayley&a=3&b=2&cells=64";
    let b = "/api/offset?curve=ellipse&a=2&b=1&d=0.2&resolution=128";
    let app = app();
    let (_, _, a1) = call(app.clone(), get(a)).await;
    let (_, _, b1) = call(app.clone(), get(b)).await;
    let (_, _, b2) = call(app.clone(), get(b)).await;
    let (_, _, a2) = call(app, get(a)).await;
    assert_eq!(a1, a2);
    assert_eq!(b1, b2);
}
