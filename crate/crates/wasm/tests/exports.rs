use rox_wasm::{game_json, names, separation_json, trace_json};

fn parse(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn trace_matches_cli_digest() {
    let v = parse(&trace_json(1, "4,4,8,16", "tab", "4:0", "4:a").unwrap());
    assert_eq!(v["digest"], "8:8c");
    assert_eq!(v["ell"], 3);
    assert_eq!(v["queries"], 4);
    assert_eq!(v["rounds"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_input_is_an_error_message() {
    let e = trace_json(1, "4,4,8,16", "tab", "4:0", "3:0").unwrap_err();
    assert!(!e.to_string().is_empty());
    assert!(trace_json(1, "4,5,8,16", "tab", "4:0", "4:a").is_err());
    assert!(game_json(1, "4,4,8,16", "nope", "tab", "any", 10).is_err());
}

#[test]
fn game_and_separation_run() {
    let v = parse(&game_json(1, "4,4,8,16", "epre", "pinned:tab4", "pin-attack", 50).unwrap());
    assert_eq!(v["wins"], 50);
    let s = separation_json(1, "4,4,8,16", "asec", 50).unwrap();
    assert_eq!(s, separation_json(1, "4,4,8,16", "asec", 50).unwrap());
    assert!(parse(&names())["adversaries"].as_array().unwrap().len() >= 3);
}
