//! Offer-dump parsing, cleaning and WDC pair-file loading.
//!
//! Cleaning applies its rules in a fixed order: records missing an EAN,
//! seller or title are dropped, categories are unified (and optionally
//! filtered), `(EAN, seller)` duplicates are collapsed keeping the first
//! occurrence, and finally every EAN offered by fewer than two distinct
//! sellers is removed.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::pair_builder::{OfferPair, PairDataset, SplitKind};

pub const FIELD_ID: &str = "id";
pub const FIELD_EAN: &str = "ean";
pub const FIELD_SELLER: &str = "seller";
pub const FIELD_TITLE: &str = "title";
pub const FIELD_CATEGORY: &str = "category";

/// One input row with its mapped columns, keyed by canonical field name
/// (`id`, `ean`, `seller`, `title`, `category`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawOfferRecord {
    pub source_row: usize,
    pub fields: BTreeMap<String, String>,
}

impl RawOfferRecord {
    pub fn get(&self, field: &str) -> Option<&str> {
        self.fields.get(field).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offer {
    pub id: String,
    pub ean: String,
    pub seller: String,
    pub title: String,
    pub category: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OfferTable {
    pub offers: Vec<Offer>,
    pub category_filter: Option<String>,
}

impl OfferTable {
    pub fn len(&self) -> usize {
        self.offers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offers.is_empty()
    }

    /// Converts the table back into canonical records, e.g. to re-run cleaning.
    pub fn to_records(&self) -> Vec<RawOfferRecord> {
        self.offers
            .iter()
            .enumerate()
            .map(|(row, o)| {
                let fields = [
                    (FIELD_ID, &o.id),
                    (FIELD_EAN, &o.ean),
                    (FIELD_SELLER, &o.seller),
                    (FIELD_TITLE, &o.title),
                    (FIELD_CATEGORY, &o.category),
                ]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
                RawOfferRecord {
                    source_row: row,
                    fields,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    #[default]
    Csv,
    #[serde(alias = "jsonlines", alias = "json")]
    Jsonl,
}

/// Source column names for each canonical offer field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMapping {
    pub ean: String,
    pub seller: String,
    pub title: String,
    pub category: String,
    #[serde(default)]
    pub id: Option<String>,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        Self {
            ean: FIELD_EAN.into(),
            seller: FIELD_SELLER.into(),
            title: FIELD_TITLE.into(),
            category: FIELD_CATEGORY.into(),
            id: None,
        }
    }
}

impl ColumnMapping {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        let mut v = vec![
            (FIELD_EAN, self.ean.as_str()),
            (FIELD_SELLER, self.seller.as_str()),
            (FIELD_TITLE, self.title.as_str()),
            (FIELD_CATEGORY, self.category.as_str()),
        ];
        if let Some(id) = &self.id {
            v.push((FIELD_ID, id.as_str()));
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaConfig {
    #[serde(default)]
    pub format: InputFormat,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    #[serde(default)]
    pub columns: ColumnMapping,
}

fn default_delimiter() -> char {
    ','
}

impl Default for SchemaConfig {
    fn default() -> Self {
        Self {
            format: InputFormat::Csv,
            delimiter: ',',
            columns: ColumnMapping::default(),
        }
    }
}

impl SchemaConfig {
    fn validate(&self) -> Result<()> {
        for (canonical, source) in self.columns.pairs() {
            if source.trim().is_empty() {
                return Err(Error::Config(format!(
                    "column mapping for `{canonical}` is empty"
                )));
            }
        }
        if self.format == InputFormat::Csv && !self.delimiter.is_ascii() {
            return Err(Error::Config(format!(
                "delimiter {:?} is not a single ASCII character",
                self.delimiter
            )));
        }
        Ok(())
    }
}

/// Wraps a reader, transparently decompressing it when it starts with the
/// gzip magic bytes.
pub fn maybe_gzip<'a, R: Read + 'a>(input: R) -> Result<Box<dyn BufRead + 'a>> {
    let mut buffered = BufReader::new(input);
    let head = buffered.fill_buf()?;
    if head.len() >= 2 && head[0] == 0x1f && head[1] == 0x8b {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(buffered))))
    } else {
        Ok(Box::new(buffered))
    }
}

/// Parses an offer dump into records, one per data row, in file order.
///
/// Row indices (both `source_row` and those carried by errors) are 0-based
/// over data rows; CSV header lines and blank JSON lines are not counted.
pub fn parse_offers<R: Read>(input: R, schema: &SchemaConfig) -> Result<Vec<RawOfferRecord>> {
    schema.validate()?;
    let reader = maybe_gzip(input)?;
    match schema.format {
        InputFormat::Csv => parse_csv(reader, schema),
        InputFormat::Jsonl => parse_jsonl(reader, schema),
    }
}

fn parse_csv(reader: Box<dyn BufRead + '_>, schema: &SchemaConfig) -> Result<Vec<RawOfferRecord>> {
    let mut csv = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);

    let headers = match csv.headers() {
        Ok(h) => h.clone(),
        Err(e) if is_empty_input(&e) => return Ok(Vec::new()),
        Err(e) => {
            return Err(Error::MalformedRow {
                row: 0,
                message: format!("header: {e}"),
            })
        }
    };
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Ok(Vec::new());
    }

    let mut columns = Vec::new();
    for (canonical, source) in schema.columns.pairs() {
        let idx = headers.iter().position(|h| h == source).ok_or_else(|| {
            Error::Config(format!(
                "column `{source}` (mapped to `{canonical}`) not found in header"
            ))
        })?;
        columns.push((canonical, idx));
    }

    let mut out = Vec::new();
    for (row, result) in csv.records().enumerate() {
        let record = result.map_err(|e| Error::MalformedRow {
            row,
            message: e.to_string(),
        })?;
        let fields = columns
            .iter()
            .map(|&(canonical, idx)| (canonical.to_string(), record[idx].to_string()))
            .collect();
        out.push(RawOfferRecord {
            source_row: row,
            fields,
        });
    }
    Ok(out)
}

fn is_empty_input(e: &csv::Error) -> bool {
    matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::UnexpectedEof)
}

fn parse_jsonl(reader: Box<dyn BufRead + '_>, schema: &SchemaConfig) -> Result<Vec<RawOfferRecord>> {
    let mapping = schema.columns.pairs();
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = out.len();
        let obj: Map<String, Value> =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRow {
                row,
                message: e.to_string(),
            })?;
        let mut fields = BTreeMap::new();
        for &(canonical, source) in &mapping {
            if let Some(v) = obj.get(source).and_then(scalar_to_string) {
                fields.insert(canonical.to_string(), v);
            }
        }
        out.push(RawOfferRecord {
            source_row: row,
            fields,
        });
    }
    Ok(out)
}

fn scalar_to_string(v: &Value) -> Option<String> {
    match v {
        Value::Null => None,
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        other => Some(other.to_string()),
    }
}

/// Category unification table.
///
/// When `tree_separator` is set, only the top-level segment of a category
/// path is kept before renaming. Names absent from `rename` pass through.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryMap {
    #[serde(default)]
    pub tree_separator: Option<String>,
    #[serde(default)]
    pub rename: BTreeMap<String, String>,
}

impl CategoryMap {
    pub fn unify(&self, raw: &str) -> String {
        let top = match &self.tree_separator {
            Some(sep) if !sep.is_empty() => raw.split(sep.as_str()).next().unwrap_or(raw),
            _ => raw,
        }
        .trim();
        self.rename
            .get(top)
            .cloned()
            .unwrap_or_else(|| top.to_string())
    }
}

/// Per-rule drop counts. With no category filter,
/// `dropped_missing + dropped_duplicate + dropped_duplicate_id + dropped_single_store + output == input`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub input: usize,
    pub dropped_missing: usize,
    pub dropped_category: usize,
    pub dropped_duplicate: usize,
    pub dropped_duplicate_id: usize,
    pub dropped_single_store: usize,
    pub output: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanOutcome {
    pub table: OfferTable,
    pub report: CleaningReport,
}

fn non_empty(record: &RawOfferRecord, field: &str) -> Option<String> {
    record
        .get(field)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
}

/// Applies the cleaning rules. Survivors keep their input order.
///
/// Offers without a mapped `id` column are identified by their source row.
pub fn clean_offers(
    records: &[RawOfferRecord],
    category_map: &CategoryMap,
    category_filter: Option<&str>,
) -> CleanOutcome {
    let mut report = CleaningReport {
        input: records.len(),
        ..Default::default()
    };

    let mut complete = Vec::with_capacity(records.len());
    for r in records {
        let (Some(ean), Some(seller)) = (non_empty(r, FIELD_EAN), non_empty(r, FIELD_SELLER)) else {
            report.dropped_missing += 1;
            continue;
        };
        let title = match r.get(FIELD_TITLE) {
            Some(t) if !t.trim().is_empty() => t.to_string(),
            _ => {
                report.dropped_missing += 1;
                continue;
            }
        };
        let category = category_map.unify(r.get(FIELD_CATEGORY).unwrap_or(""));
        if let Some(filter) = category_filter {
            if category != filter {
                report.dropped_category += 1;
                continue;
            }
        }
        let id = non_empty(r, FIELD_ID).unwrap_or_else(|| r.source_row.to_string());
        complete.push(Offer {
            id,
            ean,
            seller,
            title,
            category,
        });
    }

    let mut seen_key = HashSet::new();
    let mut seen_id = HashSet::new();
    let mut unique = Vec::with_capacity(complete.len());
    for offer in complete {
        if !seen_key.insert((offer.ean.clone(), offer.seller.clone())) {
            report.dropped_duplicate += 1;
            continue;
        }
        if !seen_id.insert(offer.id.clone()) {
            report.dropped_duplicate_id += 1;
            continue;
        }
        unique.push(offer);
    }

    // After dedupe every record of an EAN has a distinct seller.
    let mut sellers_per_ean: HashMap<&str, usize> = HashMap::new();
    for offer in &unique {
        *sellers_per_ean.entry(offer.ean.as_str()).or_default() += 1;
    }
    let keep: HashSet<String> = sellers_per_ean
        .into_iter()
        .filter(|&(_, n)| n >= 2)
        .map(|(ean, _)| ean.to_string())
        .collect();
    let before = unique.len();
    let offers: Vec<Offer> = unique.into_iter().filter(|o| keep.contains(&o.ean)).collect();
    report.dropped_single_store = before - offers.len();
    report.output = offers.len();

    CleanOutcome {
        table: OfferTable {
            offers,
            category_filter: category_filter.map(str::to_string),
        },
        report,
    }
}

const WDC_KNOWN: &[&str] = &[
    "pair_id",
    "label",
    "id_left",
    "title_left",
    "category_left",
    "ean_left",
    "id_right",
    "title_right",
    "category_right",
    "ean_right",
];

pub(crate) fn is_known_wdc_field(key: &str) -> bool {
    WDC_KNOWN.contains(&key)
}

/// Loads a WDC-format pair file (JSON lines, optionally gzip-compressed).
///
/// Line numbers in errors are 1-based physical lines.
pub fn load_wdc_pairs<R: Read>(input: R) -> Result<PairDataset> {
    let reader = maybe_gzip(input)?;
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let obj: Map<String, Value> =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRow {
                row: lineno,
                message: e.to_string(),
            })?;
        pairs.push(pair_from_object(obj, lineno)?);
    }
    Ok(PairDataset {
        name: String::new(),
        split: SplitKind::Unsplit,
        pairs,
    })
}

/// Loads a pair file from disk, naming the dataset after the file and
/// inferring its split from the file name.
pub fn load_wdc_file(path: impl AsRef<Path>) -> Result<PairDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut ds = load_wdc_pairs(file)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let stem = name
        .trim_end_matches(".gz")
        .trim_end_matches(".jsonl")
        .trim_end_matches(".json")
        .to_string();
    ds.split = SplitKind::infer_from_name(&stem);
    ds.name = stem;
    Ok(ds)
}

fn required_title(obj: &Map<String, Value>, key: &str, line: usize) -> Result<String> {
    match obj.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        _ => Err(Error::MissingField {
            line,
            field: key.to_string(),
        }),
    }
}

fn parse_label(v: Option<&Value>, line: usize) -> Result<bool> {
    let v = v.ok_or_else(|| Error::MissingField {
        line,
        field: "label".into(),
    })?;
    let bad = || Error::InvalidLabel {
        line,
        value: v.to_string(),
    };
    match v {
        Value::Bool(b) => Ok(*b),
        Value::Number(n) => match n.as_f64() {
            Some(0.0) => Ok(false),
            Some(1.0) => Ok(true),
            _ => Err(bad()),
        },
        Value::String(s) => match s.trim() {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

fn pair_from_object(mut obj: Map<String, Value>, line: usize) -> Result<OfferPair> {
    let title_left = required_title(&obj, "title_left", line)?;
    let title_right = required_title(&obj, "title_right", line)?;
    let label = parse_label(obj.get("label"), line)?;

    let text = |obj: &Map<String, Value>, key: &str| obj.get(key).and_then(scalar_to_string);
    let id_left = text(&obj, "id_left").unwrap_or_else(|| format!("{line}L"));
    let id_right = text(&obj, "id_right").unwrap_or_else(|| format!("{line}R"));
    let pair_id = text(&obj, "pair_id").unwrap_or_else(|| format!("{id_left}#{id_right}"));
    let category_left = text(&obj, "category_left").unwrap_or_default();
    let category_right = text(&obj, "category_right").unwrap_or_default();
    let ean_left = text(&obj, "ean_left");
    let ean_right = text(&obj, "ean_right");

    obj.retain(|k, _| !is_known_wdc_field(k));
    Ok(OfferPair {
        pair_id,
        id_left,
        id_right,
        title_left,
        title_right,
        ean_left,
        ean_right,
        category_left,
        category_right,
        label,
        attributes: obj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(row: usize, ean: &str, seller: &str, title: &str, cat: &str) -> RawOfferRecord {
        let mut fields = BTreeMap::new();
        for (k, v) in [
            (FIELD_EAN, ean),
            (FIELD_SELLER, seller),
            (FIELD_TITLE, title),
            (FIELD_CATEGORY, cat),
        ] {
            fields.insert(k.to_string(), v.to_string());
        }
        RawOfferRecord {
            source_row: row,
            fields,
        }
    }

    #[test]
    fn csv_rows_in_order() {
        let data = "ean,seller,title,category\n1,a,Foo,x\n2,b,Bar,y\n3,c,Baz,z\n";
        let recs = parse_offers(data.as_bytes(), &SchemaConfig::default()).unwrap();
        assert_eq!(recs.len(), 3);
        let titles: Vec<_> = recs.iter().map(|r| r.get("title").unwrap()).collect();
        assert_eq!(titles, ["Foo", "Bar", "Baz"]);
        assert_eq!(recs[2].source_row, 2);
    }

    #[test]
    fn quoted_delimiter_kept_in_title() {
        let data = "ean,seller,title,category\n1,a,\"Cola, zero 0,5L\",napoje\n";
        let recs = parse_offers(data.as_bytes(), &SchemaConfig::default()).unwrap();
        assert_eq!(recs[0].get("title"), Some("Cola, zero 0,5L"));
        assert_eq!(recs[0].get("category"), Some("napoje"));
    }

    #[test]
    fn empty_input_gives_no_records() {
        assert!(parse_offers(&b""[..], &SchemaConfig::default()).unwrap().is_empty());
        let jsonl = SchemaConfig {
            format: InputFormat::Jsonl,
            ..Default::default()
        };
        assert!(parse_offers(&b""[..], &jsonl).unwrap().is_empty());
    }

    #[test]
    fn missing_mapped_column_is_config_error() {
        let data = "ean,shop,title,category\n1,a,b,c\n";
        let err = parse_offers(data.as_bytes(), &SchemaConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }

    #[test]
    fn ragged_csv_row_reports_index() {
        let data = "ean,seller,title,category\n1,a,b,c\n2,a,b\n";
        match parse_offers(data.as_bytes(), &SchemaConfig::default()).unwrap_err() {
            Error::MalformedRow { row, .. } => assert_eq!(row, 1),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn jsonl_numbers_and_remapped_columns() {
        let schema = SchemaConfig {
            format: InputFormat::Jsonl,
            delimiter: ',',
            columns: ColumnMapping {
                ean: "EAN".into(),
                seller: "shop".into(),
                title: "name".into(),
                category: "cat".into(),
                id: Some("offer_id".into()),
            },
        };
        let data = "{\"EAN\": 5900001, \"shop\": \"s1\", \"name\": \"Płyn\", \"cat\": \"chemia\", \"offer_id\": 7}\n\n{\"EAN\": null, \"shop\": \"s2\"}\nnot json\n";
        match parse_offers(data.as_bytes(), &schema).unwrap_err() {
            Error::MalformedRow { row, .. } => assert_eq!(row, 2),
            e => panic!("unexpected {e}"),
        }
        let ok = &data[..data.rfind("not json").unwrap()];
        let recs = parse_offers(ok.as_bytes(), &schema).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].get("ean"), Some("5900001"));
        assert_eq!(recs[0].get("id"), Some("7"));
        assert_eq!(recs[1].get("ean"), None);
    }

    #[test]
    fn gzip_input_is_detected() {
        use flate2::write::GzEncoder;
        use std::io::Write;
        let mut enc = GzEncoder::new(Vec::new(), flate2::Compression::default());
        enc.write_all(b"ean,seller,title,category\n1,a,b,c\n").unwrap();
        let gz = enc.finish().unwrap();
        let recs = parse_offers(gz.as_slice(), &SchemaConfig::default()).unwrap();
        assert_eq!(recs.len(), 1);
    }

    #[test]
    fn empty_seller_dropped() {
        let recs = vec![
            rec(0, "1", "", "t", "c"),
            rec(1, "1", "a", "t", "c"),
            rec(2, "1", "b", "t", "c"),
        ];
        let out = clean_offers(&recs, &CategoryMap::default(), None);
        assert_eq!(out.report.dropped_missing, 1);
        assert_eq!(out.table.len(), 2);
    }

    #[test]
    fn duplicate_ean_seller_keeps_first() {
        let recs = vec![
            rec(0, "1", "a", "first", "c"),
            rec(1, "1", "a", "second", "c"),
            rec(2, "1", "b", "other", "c"),
        ];
        let out = clean_offers(&recs, &CategoryMap::default(), None);
        assert_eq!(out.report.dropped_duplicate, 1);
        let titles: Vec<_> = out.table.offers.iter().map(|o| o.title.as_str()).collect();
        assert_eq!(titles, ["first", "other"]);
    }

    #[test]
    fn single_store_ean_dropped() {
        let recs = vec![
            rec(0, "1", "a", "t", "c"),
            rec(1, "1", "a", "t again", "c"),
            rec(2, "2", "a", "u", "c"),
            rec(3, "2", "b", "u", "c"),
        ];
        let out = clean_offers(&recs, &CategoryMap::default(), None);
        assert_eq!(out.report.dropped_single_store, 1);
        assert!(out.table.offers.iter().all(|o| o.ean == "2"));
        assert_eq!(out.table.offers[0].id, "2");
    }

    #[test]
    fn categories_unified_and_filtered() {
        let mut map = CategoryMap {
            tree_separator: Some(">".into()),
            ..Default::default()
        };
        map.rename.insert("Chemia domowa".into(), "chemia".into());
        let recs = vec![
            rec(0, "1", "a", "t", "Chemia domowa > Proszki"),
            rec(1, "1", "b", "t", "chemia"),
            rec(2, "2", "a", "u", "napoje"),
            rec(3, "2", "b", "u", "napoje"),
        ];
        let out = clean_offers(&recs, &map, Some("chemia"));
        assert_eq!(out.table.len(), 2);
        assert!(out.table.offers.iter().all(|o| o.category == "chemia"));
        assert_eq!(out.report.dropped_category, 2);
        assert_eq!(out.table.category_filter.as_deref(), Some("chemia"));
    }

    #[test]
    fn wdc_label_variants() {
        let lines = [
            r#"{"title_left":"a","title_right":"b","label":1}"#,
            r#"{"title_left":"a","title_right":"b","label":"0","id_left":12,"id_right":"x"}"#,
        ];
        let ds = load_wdc_pairs(lines.join("\n").as_bytes()).unwrap();
        assert_eq!(ds.pairs.len(), 2);
        assert!(ds.pairs[0].label);
        assert!(!ds.pairs[1].label);
        assert_eq!(ds.pairs[1].id_left, "12");
        assert_eq!(ds.pairs[1].pair_id, "12#x");
    }

    #[test]
    fn wdc_errors_carry_line_numbers() {
        let missing = "{\"title_left\":\"a\",\"title_right\":\"b\",\"label\":1}\n{\"title_left\":\"a\",\"label\":1}";
        match load_wdc_pairs(missing.as_bytes()).unwrap_err() {
            Error::MissingField { line, field } => {
                assert_eq!(line, 2);
                assert_eq!(field, "title_right");
            }
            e => panic!("unexpected {e}"),
        }
        let bad = r#"{"title_left":"a","title_right":"b","label":2}"#;
        assert!(matches!(
            load_wdc_pairs(bad.as_bytes()).unwrap_err(),
            Error::InvalidLabel { line: 1, .. }
        ));
    }

    #[test]
    fn wdc_extra_fields_retained() {
        let line = r#"{"title_left":"a","title_right":"b","label":1,"brand_left":"nikon","price_right":null}"#;
        let ds = load_wdc_pairs(line.as_bytes()).unwrap();
        let attrs = &ds.pairs[0].attributes;
        assert_eq!(attrs.get("brand_left"), Some(&Value::from("nikon")));
        assert_eq!(attrs.get("price_right"), Some(&Value::Null));
        assert!(!attrs.contains_key("label"));
    }
}
