use std::time::Duration;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use cl1_service::{router, AppState, Config};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const CONTRACTION: &str = include_str!("../../core/fixtures/contraction.proof");
const SPLIT: &str = include_str!("../../core/fixtures/split_consequent.proof");
const CHOICE_SPLIT: &str = include_str!("../../core/fixtures/choice_split.proof");
const AXIOM: &str = include_str!("../../core/fixtures/axiom.proof");

fn app() -> Router {
    router(AppState::new(Config::default()))
}

async fn send(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let body = match body {
        Some(v) => Body::from(v.to_string()),
        None => Body::empty(),
    };
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body)
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn create(app: &Router, proof: &str) -> (String, Value) {
    let (status, v) = send(app, Method::POST, "/api/sessions", Some(json!({ "proof": proof }))).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    (v["id"].as_str().unwrap().to_string(), v["state"].clone())
}

fn moves(run: &Value) -> Vec<(String, String)> {
    run.as_array()
        .unwrap()
        .iter()
        .map(|m| (m["role"].as_str().unwrap().to_string(), m["move"].as_str().unwrap().to_string()))
        .collect()
}

#[tokio::test]
async fn check_endpoint() {
    let app = app();
    let (status, v) = send(&app, Method::POST, "/api/check", Some(json!({ "proof": CONTRACTION }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["valid"], true);
    assert_eq!(v["lines"], 7);

    let (_, v) =
        send(&app, Method::POST, "/api/check", Some(json!({ "proof": CONTRACTION, "mode": "strict" }))).await;
    assert_eq!(v["valid"], false);
    let mut lines: Vec<u64> = v["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|d| d["severity"] == "error")
        .map(|d| d["line"].as_u64().unwrap())
        .collect();
    lines.dedup();
    assert_eq!(lines, [4, 7]);

    let mutated = SPLIT.replace("rule a, 1 2", "rule a, 1");
    let (_, v) = send(&app, Method::POST, "/api/check", Some(json!({ "proof": mutated }))).await;
    assert_eq!(v["valid"], false);
    let at3 = v["diagnostics"].as_array().unwrap().iter().find(|d| d["line"] == 3).unwrap();
    assert_eq!(at3["code"], "missing-premise");
    assert_eq!(at3["path"], "2");
    assert_eq!(at3["severity"], "error");
}

#[tokio::test]
async fn malformed_requests() {
    let app = app();
    let (status, v) = send(&app, Method::POST, "/api/check", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "empty-body");
    assert!(v["message"].is_string());

    let (status, v) = send(&app, Method::POST, "/api/check", Some(json!({ "text": "x" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "bad-request");

    let (status, _) = send(&app, Method::POST, "/api/sessions", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let body = json!({ "proof": CONTRACTION, "interpretation": "p=1" });
    let (status, v) = send(&app, Method::POST, "/api/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "bad-interpretation");
}

#[tokio::test]
async fn fresh_session_state() {
    let app = app();
    let (id, state) = create(&app, CONTRACTION).await;
    assert_eq!(state["legal_moves"], json!(["2.1", "2.2"]));
    assert_eq!(state["status"], "awaiting_environment");
    assert_eq!(state["formula"], "(p?&q)&(p?&q)->p?&q");
    assert_eq!(state["line"], 7);
    assert_eq!(state["run"], json!([]));

    let tree = &state["tree"];
    assert_eq!(tree["path"], "");
    assert_eq!(tree["kind"], "impl");
    let consequent = &tree["children"][1];
    assert_eq!((consequent["path"].clone(), consequent["env_choosable"].clone()), (json!("2"), json!(true)));
    assert_eq!(consequent["children"][0]["move"], "2.1");
    assert_eq!(consequent["children"][1]["move"], "2.2");
    assert_eq!(consequent["children"][1]["atom"], "q");
    let antecedent_choice = &tree["children"][0]["children"][0];
    assert_eq!(antecedent_choice["path"], "1.1");
    assert_eq!(antecedent_choice["polarity"], "negative");
    assert_eq!(antecedent_choice["env_choosable"], false);
    assert!(antecedent_choice["children"][0].get("move").is_none());

    let (status, v) = send(&app, Method::GET, &format!("/api/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["state"], state);
}

#[tokio::test]
async fn playing_a_move() {
    let app = app();
    let (id, _) = create(&app, CONTRACTION).await;
    let (status, v) =
        send(&app, Method::POST, &format!("/api/sessions/{id}/moves"), Some(json!({ "move": "2.2" }))).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    let expected: Vec<(String, String)> = [("environment", "2.2"), ("machine", "1.2.2"), ("machine", "1.1.2")]
        .iter()
        .map(|(r, m)| (r.to_string(), m.to_string()))
        .collect();
    assert_eq!(moves(&v["delta"]), expected);
    assert_eq!(moves(&v["state"]["run"]), expected);
    assert_eq!(v["state"]["status"], "quiescent");
    assert_eq!(v["state"]["formula"], "q&q->q");
    assert_eq!(v["state"]["trail"], json!([7, 6, 5, 2]));
    assert_eq!(v["state"]["outcome"]["winner"], "machine");
    assert_eq!(v["state"]["outcome"]["machine_wins_everywhere"], true);
}

#[tokio::test]
async fn illegal_moves() {
    let app = app();
    let (id, _) = create(&app, CONTRACTION).await;
    let uri = format!("/api/sessions/{id}/moves");
    let (status, v) = send(&app, Method::POST, &uri, Some(json!({ "move": "1.1.1" }))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["code"], "illegal-move");
    assert_eq!(v["details"]["legal_moves"], json!(["2.1", "2.2"]));

    let (status, v) = send(&app, Method::POST, &uri, Some(json!({ "move": "x" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "bad-move");

    let (_, v) = send(&app, Method::GET, &format!("/api/sessions/{id}"), None).await;
    assert_eq!(v["state"]["run"], json!([]));

    let body = json!({ "proof": CONTRACTION, "illegal_move_policy": "forfeit" });
    let (_, created) = send(&app, Method::POST, "/api/sessions", Some(body)).await;
    let uri = format!("/api/sessions/{}/moves", created["id"].as_str().unwrap());
    let (status, v) = send(&app, Method::POST, &uri, Some(json!({ "move": "1.1.1" }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["forfeited"], true);
    assert_eq!(v["state"]["status"], "finished");
    assert_eq!(v["state"]["finish_reason"], "forfeit");
    assert_eq!(v["state"]["outcome"]["winner"], "machine");
    let (status, v) = send(&app, Method::POST, &uri, Some(json!({ "move": "2.1" }))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["code"], "session-finished");
}

#[tokio::test]
async fn invalid_and_trivial_proofs() {
    let app = app();
    let (status, v) = send(&app, Method::POST, "/api/sessions", Some(json!({ "proof": SPLIT }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["code"], "invalid-proof");
    assert!(!v["details"]["diagnostics"].as_array().unwrap().is_empty());

    let (_, state) = create(&app, AXIOM).await;
    assert_eq!(state["status"], "quiescent");
    assert_eq!(state["legal_moves"], json!([]));

    let (id, _) = create(&app, CHOICE_SPLIT).await;
    let (_, v) = send(&app, Method::POST, &format!("/api/sessions/{id}/moves"), Some(json!({ "move": "2.1" }))).await;
    assert_eq!(v["state"]["formula"], "p&q->p");
    assert_eq!(v["state"]["status"], "quiescent");
}

#[tokio::test]
async fn interpretation_decides_winner() {
    let app = app();
    let body = json!({ "proof": CONTRACTION, "interpretation": { "p": true, "q": false } });
    let (status, v) = send(&app, Method::POST, "/api/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v["state"]["outcome"]["basis"], "interpretation");
    assert_eq!(v["state"]["interpretation"], json!({ "p": true, "q": false }));
    let body = json!({ "proof": CONTRACTION, "interpretation": "p=0,q=1" });
    let (status, v) = send(&app, Method::POST, "/api/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v["state"]["interpretation"]["p"], false);
}

#[tokio::test]
async fn stop_get_delete() {
    let app = app();
    let (id, _) = create(&app, CONTRACTION).await;
    let (status, _) = send(&app, Method::POST, &format!("/api/sessions/{id}/stop"), None).await;
    assert_eq!(status, StatusCode::OK);
    let (_, v) = send(&app, Method::GET, &format!("/api/sessions/{id}"), None).await;
    assert_eq!(v["state"]["status"], "finished");
    assert_eq!(v["state"]["outcome"]["winner"], "machine");
    assert_eq!(v["state"]["legal_moves"], json!([]));

    let (status, _) = send(&app, Method::DELETE, &format!("/api/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, v) = send(&app, Method::GET, &format!("/api/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(v["code"], "not-found");
    let (status, _) = send(&app, Method::DELETE, &format!("/api/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = send(&app, Method::GET, "/api/sessions/not-a-uuid", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) =
        send(&app, Method::POST, "/api/sessions/00000000-0000-0000-0000-000000000000/moves", Some(json!({"move": "2.1"})))
            .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn idle_sessions_expire() {
    let state = AppState::new(Config { ttl: Duration::from_millis(30), ..Config::default() });
    let app = router(state.clone());
    let (id, _) = create(&app, CONTRACTION).await;
    let (other, _) = create(&app, CONTRACTION).await;
    assert_eq!(state.session_count().await, 2);
    tokio::time::sleep(Duration::from_millis(60)).await;
    let (status, _) = send(&app, Method::GET, &format!("/api/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(state.evict_expired().await, 1);
    assert_eq!(state.session_count().await, 0);
    let (status, _) = send(&app, Method::GET, &format!("/api/sessions/{other}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn concurrent_moves_do_not_interleave() {
    let app = app();
    let (id, _) = create(&app, CONTRACTION).await;
    let uri = format!("/api/sessions/{id}/moves");
    let tasks: Vec<_> = ["2.1", "2.2", "2.1", "2.2"]
        .into_iter()
        .map(|m| {
            let app = app.clone();
            let uri = uri.clone();
            tokio::spawn(async move { send(&app, Method::POST, &uri, Some(json!({ "move": m }))).await })
        })
        .collect();
    let mut ok = 0;
    for t in tasks {
        let (status, _) = t.await.unwrap();
        match status {
            StatusCode::OK => ok += 1,
            StatusCode::CONFLICT => {}
            other => panic!("unexpected {other}"),
        }
    }
    assert_eq!(ok, 1);
    let (_, v) = send(&app, Method::GET, &format!("/api/sessions/{id}"), None).await;
    assert_eq!(v["state"]["run"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn static_files() {
    let dir = std::env::temp_dir().join(format!("cl1-static-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("index.html"), "<h1>cl1</h1>").unwrap();
    let app = router(AppState::new(Config { static_dir: Some(dir.clone()), ..Config::default() }));
    let resp = app.clone().oneshot(Request::get("/index.html").body(Body::empty()).unwrap()).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(&bytes[..], b"<h1>cl1</h1>");
    let (status, v) = send(&app, Method::POST, "/api/check", Some(json!({ "proof": AXIOM }))).await;
    assert_eq!((status, v["valid"].clone()), (StatusCode::OK, json!(true)));
    std::fs::remove_dir_all(dir).unwrap();
}
