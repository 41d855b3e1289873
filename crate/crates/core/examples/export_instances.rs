//! Writes every catalog entry, with default parameters, as an instance file.
//!
//! cargo run --example export_instances -- <dir>

use kropina::catalog;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "instances".into());
    std::fs::create_dir_all(&dir).expect("create output directory");
    for name in catalog::NAMES {
        let e = catalog::get(name, &[]).expect("default parameters");
        let text = serde_json::to_string_pretty(&e.to_instance()).expect("serializable");
        let path = format!("{dir}/{name}.json");
        std::fs::write(&path, text + "\n").expect("write instance");
        println!("{path}");
    }
}
