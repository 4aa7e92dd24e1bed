//! Relation harvest and dimension upper bounds by weight.
//!
//! Run with `cargo run --release --example dimensions [max_weight]` (default 5).

use mmv_kit::linrel::harvest;

fn main() -> mmv_kit::Result<()> {
    let wmax: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    println!("{:>2} {:>5} {:>5} {:>5} {:>6}", "w", "gens", "rank", "bound", "table");
    for w in 2..=wmax {
        let rs = harvest(w)?;
        let j = rs.to_json();
        let table = j.table1.map_or("-".to_string(), |t| t.to_string());
        println!("{w:>2} {:>5} {:>5} {:>5} {table:>6}", rs.generators.len(), rs.rank(), rs.bound());
    }
    Ok(())
}
