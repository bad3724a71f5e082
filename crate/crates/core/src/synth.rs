//! Seeded generator of synthetic multi-store offer dumps.
//!
//! Produces listings of the same product under different shops with the
//! kind of noise real dumps show: case changes, punctuation, reordered or
//! missing words, duplicated rows and records without a seller. Used for
//! fixtures and demos where a real dump is not available.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

const BRANDS: &[&str] = &[
    "Ariel", "Persil", "Vizir", "Domestos", "Ludwik", "Pur", "Fairy", "Cif", "Tytan", "Sidolux",
    "Coca-Cola", "Pepsi", "Tymbark", "Żywiec", "Cisowianka", "Nałęczowianka", "Kubuś", "Hortex",
];
const KINDS: &[&str] = &[
    "proszek do prania", "płyn do naczyń", "żel do WC", "mleczko czyszczące", "kapsułki",
    "płyn do podłóg", "woda mineralna", "napój gazowany", "sok jabłkowy", "nektar",
];
const VARIANTS: &[&str] = &[
    "Color", "White", "Lemon", "Original", "Zero", "Max", "Sensitive", "Fresh", "Classic", "Lime",
];
const SIZES: &[&str] = &["0,5L", "1L", "1,5L", "2L", "500ml", "750 ml", "1kg", "2,6kg", "20 szt", "40 szt"];
const CATEGORIES: &[(&str, &[&str])] = &[
    ("chemia", &["Chemia", "Chemia domowa > Pranie", "chemia gospodarcza"]),
    ("napoje", &["Napoje", "Napoje > Woda", "napoje i soki"]),
];

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub seed: u64,
    pub products: usize,
    pub stores: usize,
    pub min_stores_per_product: usize,
    pub max_stores_per_product: usize,
    /// Probability that a product appears in only one store.
    pub single_store_rate: f64,
    pub duplicate_rate: f64,
    pub missing_seller_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            products: 400,
            stores: 6,
            min_stores_per_product: 2,
            max_stores_per_product: 4,
            single_store_rate: 0.05,
            duplicate_rate: 0.03,
            missing_seller_rate: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthOffer {
    pub ean: String,
    pub seller: String,
    pub title: String,
    pub category: String,
}

fn perturb(rng: &mut ChaCha8Rng, words: &[&str]) -> String {
    let mut words: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    if words.len() > 3 && rng.gen_bool(0.2) {
        let i = rng.gen_range(1..words.len());
        words.remove(i);
    }
    if rng.gen_bool(0.15) {
        let i = rng.gen_range(0..words.len() - 1);
        words.swap(i, i + 1);
    }
    let mut title = words.join(if rng.gen_bool(0.1) { "  " } else { " " });
    match rng.gen_range(0..6) {
        0 => title = title.to_uppercase(),
        1 => title = title.to_lowercase(),
        2 => title = title.replace(' ', "-"),
        3 => title.push_str(" !!"),
        _ => {}
    }
    title
}

/// Generates offers in a deterministic order for the given config.
pub fn synthetic_offers(cfg: &SynthConfig) -> Vec<SynthOffer> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let stores: Vec<String> = (1..=cfg.stores).map(|i| format!("sklep{i}")).collect();
    let mut out = Vec::new();
    for p in 0..cfg.products {
        let ean = format!("590{:010}", 1_000_003u64 * (p as u64 + 1) % 10_000_000_000);
        let (_, aliases) = CATEGORIES[p % CATEGORIES.len()];
        let words: Vec<&str> = [
            *BRANDS.choose(&mut rng).unwrap(),
            *KINDS.choose(&mut rng).unwrap(),
            *VARIANTS.choose(&mut rng).unwrap(),
            *SIZES.choose(&mut rng).unwrap(),
        ]
        .iter()
        .flat_map(|w| w.split(' '))
        .collect();
        let n_stores = if rng.gen_bool(cfg.single_store_rate) {
            1
        } else {
            rng.gen_range(cfg.min_stores_per_product..=cfg.max_stores_per_product.min(cfg.stores))
        };
        for seller in stores.choose_multiple(&mut rng, n_stores) {
            let seller = if rng.gen_bool(cfg.missing_seller_rate) {
                String::new()
            } else {
                seller.clone()
            };
            let offer = SynthOffer {
                ean: ean.clone(),
                seller,
                title: perturb(&mut rng, &words),
                category: aliases.choose(&mut rng).unwrap().to_string(),
            };
            if rng.gen_bool(cfg.duplicate_rate) {
                let mut dup = offer.clone();
                dup.title = perturb(&mut rng, &words);
                out.push(offer);
                out.push(dup);
            } else {
                out.push(offer);
            }
        }
    }
    out.shuffle(&mut rng);
    out
}

/// Category map unifying the generator's category aliases.
pub fn synthetic_category_map() -> crate::ingest::CategoryMap {
    let mut map = crate::ingest::CategoryMap {
        tree_separator: Some(">".into()),
        ..Default::default()
    };
    for (canonical, aliases) in CATEGORIES {
        for alias in *aliases {
            let top = alias.split('>').next().unwrap().trim();
            if top != *canonical {
                map.rename.insert(top.to_string(), canonical.to_string());
            }
        }
    }
    map
}

/// Writes offers as CSV with header `ean,seller,title,category`.
pub fn write_csv<W: Write>(offers: &[SynthOffer], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["ean", "seller", "title", "category"])
        .map_err(std::io::Error::from)?;
    for o in offers {
        w.write_record([&o.ean, &o.seller, &o.title, &o.category])
            .map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_seed() {
        let cfg = SynthConfig {
            products: 30,
            ..Default::default()
        };
        assert_eq!(synthetic_offers(&cfg), synthetic_offers(&cfg));
        let other = SynthConfig { seed: 8, ..cfg.clone() };
        assert_ne!(synthetic_offers(&cfg), synthetic_offers(&other));
    }

    #[test]
    fn category_map_unifies_aliases() {
        let map = synthetic_category_map();
        assert_eq!(map.unify("Chemia domowa > Pranie"), "chemia");
        assert_eq!(map.unify("napoje i soki"), "napoje");
        assert_eq!(map.unify("chemia"), "chemia");
    }
}
