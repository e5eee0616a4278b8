// Round trip from a fan document to a ring document.

use stackyring::chowring::orbifold_ring;
use stackyring::document::{BaseDocument, FanDocument, RingDocument};

const FAN: &str = r#"{"group": {"rank": 1}, "rays": [[2], [-2]], "cones": [[0], [1]], "extra": [[1]]}"#;
const BASE: &str = r#"{
  "basis": [{"label": "1", "degree": 0}, {"label": "H", "degree": 1}],
  "twists": [[], [], [{"k": 1, "coeff": "-1"}]]
}"#;

pub fn main() {
    let loaded = FanDocument::parse(FAN).unwrap().load().unwrap();
    let base = BaseDocument::parse(BASE).unwrap().to_ring(loaded.fan.m()).unwrap();
    let ring = orbifold_ring(&loaded.fan, &base).unwrap();
    let doc = RingDocument::from_ring(&ring, &|v| loaded.to_input(v));
    let text = serde_json::to_string_pretty(&doc).unwrap();
    let back: RingDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(back, doc);
    println!("dimension {}, {} nonzero structure constants", doc.dimension, doc.mult_table.len());
    for b in &doc.basis {
        println!("  {:>2} {:<12} degree {}", b.index, b.label, b.degree);
    }
}
