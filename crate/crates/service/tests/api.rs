use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use coalgame_service::{router, AppState};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Body>, json_body: bool) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if json_body {
        req = req.header("content-type", "application/json");
    }
    let resp = app.clone().oneshot(req.body(body.unwrap_or_else(Body::empty)).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn post_json(app: &Router, uri: &str, v: Value) -> (StatusCode, Value) {
    call(app, "POST", uri, Some(Body::from(v.to_string())), true).await
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    call(app, "GET", uri, None, false).await
}

async fn upload(app: &Router, name: &str) -> String {
    let (status, v) = call(app, "POST", "/api/systems", Some(Body::from(fixture(name))), false).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    v["sessionId"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn upload_csv_returns_analysis() {
    let app = router(AppState::default());
    let (status, v) = call(&app, "POST", "/api/systems", Some(Body::from(fixture("fig1.csv"))), false).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["states"].as_array().unwrap().len(), 9);
    assert_eq!(v["transitions"].as_array().unwrap().len(), 7);
    assert_eq!(v["blocks"], json!([["1"], ["2"], ["3"], ["4"], ["5"], ["6", "7", "8", "9"]]));
    let v12 = v["verdicts"].as_array().unwrap().iter().find(|d| d["x0"] == "1" && d["x1"] == "2").unwrap();
    assert_eq!(v12["bisimilar"], false);
    assert_eq!(v12["index"], 2);
    assert_eq!(v12["witness"], json!({"state": "1", "block": ["4"]}));

    let sid = v["sessionId"].as_str().unwrap();
    let (status, again) = get(&app, &format!("/api/systems/{sid}")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(again, v);
}

#[tokio::test]
async fn upload_json_matches_csv() {
    let app = router(AppState::default());
    let (_, from_csv) = call(&app, "POST", "/api/systems", Some(Body::from(fixture("fig4.csv"))), false).await;
    let body = json!({
        "kind": from_csv["kind"],
        "alphabet": from_csv["alphabet"],
        "states": from_csv["states"],
        "transitions": from_csv["transitions"],
        "terminations": from_csv["terminations"],
    });
    let (status, from_json) = post_json(&app, "/api/systems", body).await;
    assert_eq!(status, StatusCode::OK, "{from_json}");
    for key in ["states", "transitions", "blocks", "verdicts", "rounds"] {
        assert_eq!(from_json[key], from_csv[key], "{key}");
    }
}

#[tokio::test]
async fn invalid_systems_are_422() {
    let app = router(AppState::default());
    let bad_sum = "kind,pts\nalphabet,a\nstate,x,y\ntrans,x,a,y,9/10\n";
    let (status, v) = call(&app, "POST", "/api/systems", Some(Body::from(bad_sum)), false).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["error"].as_str().unwrap().contains("sum ≠ 1"), "{v}");
    let (status, _) = call(&app, "POST", "/api/systems", Some(Body::from("kind,xyz\n")), false).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = post_json(&app, "/api/systems", json!({"kind": "lts"})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn unknown_ids_are_404() {
    let app = router(AppState::default());
    assert_eq!(get(&app, "/api/systems/nope").await.0, StatusCode::NOT_FOUND);
    let missing = "00000000-0000-4000-8000-000000000000";
    assert_eq!(get(&app, &format!("/api/systems/{missing}")).await.0, StatusCode::NOT_FOUND);
    let sid = upload(&app, "fig1.csv").await;
    assert_eq!(get(&app, &format!("/api/systems/{sid}/games/{missing}")).await.0, StatusCode::NOT_FOUND);
    let (status, _) =
        post_json(&app, &format!("/api/systems/{sid}/games/{missing}/moves"), json!({"phase": "step4", "payload": {"state": "1"}}))
            .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn formula_endpoint() {
    let app = router(AppState::default());
    let sid = upload(&app, "fig5.csv").await;
    let (status, v) = get(&app, &format!("/api/systems/{sid}/formula?x0=1&x1=2")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["formula"], "[^{(a,1)}](!([^{(b,0),(b,1)}][^{(e,1)}]tt) & !([^{(b,0),(b,1)}][^{(f,1)}]tt))");
    assert_eq!(v["depth"], 3);
    let (status, v) = get(&app, &format!("/api/systems/{sid}/formula?x0=1&x1=2&recode=box-dia")).await;
    assert_eq!(status, StatusCode::OK);
    assert!(!v["formula"].as_str().unwrap().contains('^'));
    let (status, _) = get(&app, &format!("/api/systems/{sid}/formula?x0=1&x1=2&recode=thresholds")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = get(&app, &format!("/api/systems/{sid}/formula?x0=1&x1=99")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let sid = upload(&app, "fig4.csv").await;
    let (_, v) = get(&app, &format!("/api/systems/{sid}/formula?x0=2&x1=1&recode=thresholds")).await;
    assert_eq!(v["formula"], "([a>=1]([a>=1]tt & [b>=1]tt) & [b>=4/5]([a>=1]tt & [b>=1]tt))");
}

#[tokio::test]
async fn example_one_human_duplicator_loses() {
    let app = router(AppState::default());
    let sid = upload(&app, "fig1.csv").await;
    let (status, v) = post_json(&app, &format!("/api/systems/{sid}/games"), json!({"x0": "1", "x1": "2", "humanRole": "duplicator"})).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["engineMoves"], json!([{"player": "spoiler", "move": {"phase": "step1", "payload": {"j": 0, "predicate": ["4"]}}}]));
    assert_eq!(v["state"]["phase"], "step2");
    assert_eq!(v["state"]["pendingPredicates"], json!({"p0": ["4"], "p1": null}));
    let gid = v["gameId"].as_str().unwrap().to_string();
    let moves = format!("/api/systems/{sid}/games/{gid}/moves");

    // {3} is not an answer: 2 has no a-move into it.
    let (status, err) = post_json(&app, &moves, json!({"phase": "step2", "payload": {"predicate": ["3"]}})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(err["error"].as_str().unwrap().contains("Step 2 condition"), "{err}");
    let (status, _) = post_json(&app, &moves, json!({"phase": "step1", "payload": {"j": 0, "predicate": []}})).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (status, v) = post_json(&app, &moves, json!({"phase": "step2", "payload": {"predicate": ["5"]}})).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["state"]["phase"], "step4");
    assert_eq!(v["state"]["legalHints"], json!([[0, "4"]]));

    let (status, v) = post_json(&app, &moves, json!({"phase": "step4", "payload": {"state": "4"}})).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["state"]["phase"], "spoilerWon");
    assert_eq!(v["state"]["position"], json!(["4", "5"]));
    assert_eq!(v["state"]["history"], json!([["1", "2"]]));
    assert_eq!(v["winner"], "spoiler");
    assert!(v["formula"].as_str().unwrap().starts_with("[^"), "{v}");

    let (status, v) = get(&app, &format!("/api/systems/{sid}/games/{gid}")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["winner"], "spoiler");
    assert!(v["transcript"].as_array().unwrap().len() >= 5);
    let (status, err) = post_json(&app, &moves, json!({"phase": "step4", "payload": {"state": "4"}})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(err["error"].as_str().unwrap().contains("over"));
}

/// Plays as a human spoiler who always challenges with `{6}` on side 0 and
/// picks the first hinted state, until the game ends.
async fn stubborn_spoiler(app: &Router, sid: &str, x0: &str, x1: &str) -> Value {
    let (_, v) = post_json(app, &format!("/api/systems/{sid}/games"), json!({"x0": x0, "x1": x1, "humanRole": "spoiler"})).await;
    assert_eq!(v["state"]["turn"], "spoiler");
    let gid = v["gameId"].as_str().unwrap().to_string();
    let moves = format!("/api/systems/{sid}/games/{gid}/moves");
    let mut state = v["state"].clone();
    for _ in 0..100 {
        let body = match state["phase"].as_str().unwrap() {
            "step1" => json!({"phase": "step1", "payload": {"j": 0, "predicate": ["6"]}}),
            "step3" => {
                let hint = &state["legalHints"][0];
                json!({"phase": "step3", "payload": {"ell": hint[0], "state": hint[1]}})
            }
            _ => break,
        };
        let (status, v) = post_json(app, &moves, body).await;
        assert_eq!(status, StatusCode::OK, "{v}");
        assert!(v.get("formula").is_none());
        state = v["state"].clone();
    }
    state
}

#[tokio::test]
async fn human_spoiler_on_bisimilar_pair_is_cut_off() {
    let app = router(AppState::default());
    let sid = upload(&app, "fig1.csv").await;
    for (x0, x1) in [("6", "7"), ("3", "3"), ("8", "9")] {
        let state = stubborn_spoiler(&app, &sid, x0, x1).await;
        assert_eq!(state["phase"], "duplicatorWon", "{state}");
        let reason = state["reason"].as_str().unwrap();
        assert!(reason.contains("repeated") || reason.contains("empty"), "{reason}");
    }
}

#[tokio::test]
async fn out_of_turn_and_bad_role() {
    let app = router(AppState::default());
    let sid = upload(&app, "fig1.csv").await;
    let (status, _) = post_json(&app, &format!("/api/systems/{sid}/games"), json!({"x0": "1", "x1": "2", "humanRole": "referee"})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (_, v) = post_json(&app, &format!("/api/systems/{sid}/games"), json!({"x0": "1", "x1": "2", "humanRole": "duplicator"})).await;
    let gid = v["gameId"].as_str().unwrap();
    let moves = format!("/api/systems/{sid}/games/{gid}/moves");
    let (status, err) = post_json(&app, &moves, json!({"phase": "step4", "payload": {"state": "5"}})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(err["error"].as_str().unwrap().contains("out-of-turn"), "{err}");
    let (status, _) = post_json(&app, &moves, json!({"phase": "step2", "payload": {"predicate": ["zz"]}})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, v) = get(&app, &format!("/api/systems/{sid}/games/{gid}")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["state"]["phase"], "step2", "rejected moves leave the game unchanged");
}

#[tokio::test]
async fn idle_sessions_expire() {
    let state = AppState::with_idle(Duration::from_millis(50));
    let app = router(state.clone());
    let sid = upload(&app, "fig1.csv").await;
    assert_eq!(state.session_count(), 1);
    tokio::time::sleep(Duration::from_millis(120)).await;
    assert_eq!(get(&app, &format!("/api/systems/{sid}")).await.0, StatusCode::NOT_FOUND);
    assert_eq!(state.session_count(), 0);
}

#[tokio::test]
async fn concurrent_games_are_independent() {
    let app = router(AppState::default());
    let sid = upload(&app, "fig1.csv").await;
    let mut handles = Vec::new();
    for _ in 0..8 {
        let app = app.clone();
        let sid = sid.clone();
        handles.push(tokio::spawn(async move {
            let (_, v) =
                post_json(&app, &format!("/api/systems/{sid}/games"), json!({"x0": "1", "x1": "2", "humanRole": "duplicator"})).await;
            let gid = v["gameId"].as_str().unwrap().to_string();
            let moves = format!("/api/systems/{sid}/games/{gid}/moves");
            post_json(&app, &moves, json!({"phase": "step2", "payload": {"predicate": ["5"]}})).await;
            let (_, v) = post_json(&app, &moves, json!({"phase": "step4", "payload": {"state": "4"}})).await;
            (gid, v["state"]["phase"].clone())
        }));
    }
    let mut ids = std::collections::HashSet::new();
    for h in handles {
        let (gid, phase) = h.await.unwrap();
        assert_eq!(phase, "spoilerWon");
        assert!(ids.insert(gid));
    }
}
