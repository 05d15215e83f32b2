use serde_json::Value;

use krho_web::{analyze_text, reduce_text, solve_text};

const P5: &str = "krho-graph v1\nundirected\n5 4\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n";

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn analyze_reports_endpoints() {
    let v = parse(analyze_text(P5, 2, 3).unwrap());
    assert_eq!(v["deficient"], serde_json::json!([0, 4]));
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 4);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 5);
}

#[test]
fn solvers_find_single_middle_shortcut() {
    for algo in ["exact", "greedy", "kk1"] {
        let v = parse(solve_text(P5, 2, 3, algo).unwrap());
        let s = v["shortcuts"].as_array().unwrap();
        assert_eq!(s.len(), 1, "{algo}");
        assert_eq!(s[0]["weight"], 2);
    }
    assert!(solve_text(P5, 2, 3, "magic").is_err());
}

#[test]
fn reduce_marks_path_starts_deficient() {
    let h = "krho-hyper v1\n3 2\n2 0 1\n2 1 2\n";
    let v = parse(reduce_text(h, 2, 4, false, true).unwrap());
    assert_eq!(v["starts"], v["deficient"]);
    assert!(v["text"].as_str().unwrap().starts_with("krho-graph v1\ndirected\n"));
}

#[test]
fn errors_are_messages() {
    let e = analyze_text("krho-graph v1\ndirected\n2 1\n0 1 x\n", 1, 2).unwrap_err();
    assert!(e.starts_with("line 4"), "{e}");
    assert!(analyze_text(P5, 3, 2).is_ok());
    assert!(reduce_text("krho-hyper v1\n4 1\n4 0 1 2 3\n", 2, 4, false, true).is_err());
}
