//! Regenerates the shipped odd-order isometries under `data/isometries/`.

use std::path::Path;

use klat::io::isometry_to_json;
use klat::kummer::realize::{construct_odd, shipped_file_name};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/isometries");
    for ((table, row), g) in construct_odd()? {
        let path = dir.join(shipped_file_name(table, row));
        std::fs::write(&path, isometry_to_json(&g) + "\n")?;
        println!("{} (order {})", path.display(), g.order(12)?);
    }
    Ok(())
}
