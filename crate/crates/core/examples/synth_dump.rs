//! Writes a synthetic offer dump and its category map.
//!
//! `cargo run -p pmatch-core --example synth_dump -- <out.csv> <categories.json> [products] [seed]`

use std::fs::File;

use pmatch_core::synth::{synthetic_category_map, synthetic_offers, write_csv, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() < 2 {
        return Err("usage: synth_dump <out.csv> <categories.json> [products] [seed]".into());
    }
    let mut cfg = SynthConfig::default();
    if let Some(p) = args.get(2) {
        cfg.products = p.parse()?;
    }
    if let Some(s) = args.get(3) {
        cfg.seed = s.parse()?;
    }
    let offers = synthetic_offers(&cfg);
    write_csv(&offers, File::create(&args[0])?)?;
    let map = serde_json::to_string_pretty(&synthetic_category_map())?;
    std::fs::write(&args[1], map + "\n")?;
    eprintln!("{} offers", offers.len());
    Ok(())
}
