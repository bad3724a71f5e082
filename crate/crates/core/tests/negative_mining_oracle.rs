use std::collections::BTreeSet;

use pmatch_core::ingest::{Offer, OfferTable};
use pmatch_core::pair_builder::mine_negative_pairs;
use pmatch_core::textprep::{jaccard, normalize_title, tokenize};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORDS: &[&str] = &["ariel", "Color", "2L", "płyn", "do", "naczyń", "Lemon", "500ml", "PUR", "max", "zero"];

fn random_table(seed: u64, max_offers: usize) -> OfferTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_offers);
    let n_eans = rng.gen_range(1..=n.max(2) / 2 + 1);
    let categories = ["a", "b", "c"];
    let n_cat = rng.gen_range(1..=3);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut rng);
    let offers = ids
        .into_iter()
        .map(|id| {
            let len = rng.gen_range(0..5);
            let title: Vec<&str> = (0..len).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
            Offer {
                id: format!("o{id}"),
                ean: format!("e{}", rng.gen_range(0..n_eans)),
                seller: format!("s{}", rng.gen_range(0..4)),
                title: title.join(if rng.gen_bool(0.3) { "-" } else { " " }),
                category: categories[rng.gen_range(0..n_cat)].to_string(),
            }
        })
        .collect();
    OfferTable {
        offers,
        category_filter: None,
    }
}

/// Scores every ordered pair with floating Jaccard and keeps each offer's
/// top k by (score desc, partner id asc).
fn brute_force(table: &OfferTable, k: usize) -> BTreeSet<(String, String)> {
    let tokens: Vec<_> = table
        .offers
        .iter()
        .map(|o| tokenize(&normalize_title(&o.title)))
        .collect();
    let mut out = BTreeSet::new();
    for (i, o) in table.offers.iter().enumerate() {
        let mut cands: Vec<(f64, &str)> = table
            .offers
            .iter()
            .enumerate()
            .filter(|(j, p)| *j != i && p.category == o.category && p.ean != o.ean)
            .map(|(j, p)| (jaccard::<f64>(&tokens[i], &tokens[j]), p.id.as_str()))
            .collect();
        cands.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(b.1)));
        for (_, partner) in cands.into_iter().take(k) {
            let (l, r) = if o.id.as_str() < partner { (o.id.as_str(), partner) } else { (partner, o.id.as_str()) };
            out.insert((l.to_string(), r.to_string()));
        }
    }
    out
}

fn mined_keys(table: &OfferTable, k: usize) -> BTreeSet<(String, String)> {
    let mined = mine_negative_pairs(table, k);
    let keys: BTreeSet<_> = mined
        .iter()
        .map(|p| (p.id_left.clone(), p.id_right.clone()))
        .collect();
    assert_eq!(keys.len(), mined.len(), "duplicate pairs emitted");
    for p in &mined {
        assert!(p.id_left < p.id_right);
        assert!(!p.label);
        assert_ne!(p.ean_left, p.ean_right);
        assert_eq!(p.category_left, p.category_right);
    }
    keys
}

#[test]
fn ten_offer_tables_k3() {
    for seed in 0..200 {
        let table = random_table(seed, 10);
        assert_eq!(mined_keys(&table, 3), brute_force(&table, 3), "seed {seed}");
    }
}

#[test]
fn large_k_emits_every_cross_ean_pair() {
    for seed in 0..50 {
        let table = random_table(1000 + seed, 25);
        let mut all = BTreeSet::new();
        for a in &table.offers {
            for b in &table.offers {
                if a.id < b.id && a.ean != b.ean && a.category == b.category {
                    all.insert((a.id.clone(), b.id.clone()));
                }
            }
        }
        assert_eq!(mined_keys(&table, table.offers.len()), all);
    }
}

#[test]
fn tables_up_to_300_offers_k20() {
    for seed in 0..20 {
        let table = random_table(5000 + seed, 300);
        assert_eq!(mined_keys(&table, 20), brute_force(&table, 20), "seed {seed}");
    }
}

#[test]
fn output_independent_of_input_order() {
    let table = random_table(77, 120);
    let mut shuffled = table.clone();
    shuffled.offers.reverse();
    assert_eq!(mine_negative_pairs(&table, 5), mine_negative_pairs(&shuffled, 5));
}
