//! Channel and gate files: parse, validate, fingerprint, report.
//!
//! ```text
//! cargo run --example channel_files
//! ```

use avgfid::basis::shift_clock_basis;
use avgfid::fidelity::average_gate_fidelity;
use avgfid::spec::{parse_channel_spec, parse_gate_spec};

const CHANNEL: &str = r#"{
  "dim": 2,
  "channel": {
    "type": "compose",
    "first": { "type": "unitary", "matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]] },
    "then": { "type": "depolarizing", "p": 0.05 }
  }
}"#;

const GATE: &str = r#"{ "dim": 2, "gate": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]] }"#;

const BROKEN: &str = r#"{ "dim": 2, "channel": { "type": "kraus", "operators": [[[[1, 0], [0, 0]], [[0, 0], [0.5, 0]]]] } }"#;

fn main() {
    let doc = parse_channel_spec(CHANNEL.as_bytes()).expect("well-formed");
    let channel = doc.resolve().expect("valid channel");
    let gate = parse_gate_spec(GATE.as_bytes()).expect("well-formed").resolve().expect("unitary");
    println!("fingerprint: {}", serde_json_line(&doc.fingerprint()));
    println!("Kraus operators: {}", channel.kraus().len());
    let f = average_gate_fidelity(&channel, &gate, &shift_clock_basis(2).unwrap()).unwrap();
    println!("average gate fidelity: {:.15}", f.value);

    match parse_channel_spec(BROKEN.as_bytes()).and_then(|d| d.resolve()) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("rejected: {e}"),
    }
    match parse_channel_spec(b"{ \"dim\": 2, \"channel\": ") {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("rejected: {e}"),
    }
}

fn serde_json_line<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap()
}
