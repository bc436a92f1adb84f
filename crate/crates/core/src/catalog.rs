//! Equipment survey tables: background materials, cameras and lamps.
//!
//! Catalog files are UTF-8 CSV with a header row. Column dictionary:
//!
//! | column | type | meaning |
//! |---|---|---|
//! | `id` | text, required | unique slug |
//! | `kind` | `Background` \| `Camera` \| `Lamp`, required | table |
//! | `name` | text, required | product name |
//! | `vendor` | text | manufacturer or brand |
//! | `cost_eur` | cost | approximate price in EUR |
//! | `reflectivity_pct` | span | surface reflectivity, percent |
//! | `max_resolution_mpx` | number | sensor resolution, megapixels |
//! | `shutter_range_s` | span | shutter times, seconds |
//! | `iso_range` | span | sensitivity range |
//! | `luminous_flux_lm` | span | luminous flux, lumen |
//! | `color_temp_k` | span | colour temperature, kelvin |
//! | `power_w` | span | electrical power, watt |
//! | `dimensions_mm` | text | size description |
//! | `notes` | text | anything else |
//!
//! Any other column is kept verbatim in [`EquipmentRecord::extra`].
//! Empty cells and `-` mean "not available".
//!
//! A *span* is `a`, `a-b`, `a±d`, `max. a` (upper bound only) or `a+`
//! (lower bound only); numbers may be written as fractions such as
//! `1/8000`. A *cost* is one or more `span[@label]` variants separated by
//! `;`, e.g. `52.74@100ml;116.09@400ml`.
//!
//! Ranking compares spans by their lower bound when ascending and their
//! upper bound when descending. Costs are ranked and filtered through their
//! cheapest variant.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

/// `row` is the 1-based line of the file; the header is line 1.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {message}")]
    Io { path: String, message: String },
    #[error("row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("row {row}, field {field}: {message}")]
    Field { row: usize, field: String, message: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("no record has a value for {0:?}")]
    UnknownKey(String),
    #[error("cannot parse constraint {0:?}")]
    Constraint(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquipmentKind {
    Background,
    Camera,
    Lamp,
}

impl EquipmentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EquipmentKind::Background => "Background",
            EquipmentKind::Camera => "Camera",
            EquipmentKind::Lamp => "Lamp",
        }
    }
}

impl FromStr for EquipmentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "background" => Ok(EquipmentKind::Background),
            "camera" => Ok(EquipmentKind::Camera),
            "lamp" => Ok(EquipmentKind::Lamp),
            _ => Err(format!("unknown kind {s:?}")),
        }
    }
}

/// Closed interval with optionally open ends; at least one bound is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub min: Option<f64>,
    pub max: Option<f64>,
}

fn parse_number(text: &str) -> Option<f64> {
    let text = text.trim();
    let v = match text.split_once('/') {
        Some((n, d)) => n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?,
        None => text.parse().ok()?,
    };
    v.is_finite().then_some(v)
}

impl Span {
    pub fn point(v: f64) -> Self {
        Span { min: Some(v), max: Some(v) }
    }

    pub fn range(min: f64, max: f64) -> Self {
        Span { min: Some(min), max: Some(max) }
    }

    /// Lower bound, falling back to the upper one.
    pub fn low(&self) -> f64 {
        self.min.or(self.max).expect("span has a bound")
    }

    /// Upper bound, falling back to the lower one.
    pub fn high(&self) -> f64 {
        self.max.or(self.min).expect("span has a bound")
    }

    fn bounds(&self) -> (f64, f64) {
        (self.min.unwrap_or(f64::NEG_INFINITY), self.max.unwrap_or(f64::INFINITY))
    }

    pub fn parse(text: &str) -> Option<Span> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("max.").or_else(|| t.strip_prefix("max ")) {
            return parse_number(rest).map(|v| Span { min: None, max: Some(v) });
        }
        if let Some(rest) = t.strip_suffix('+') {
            return parse_number(rest).map(|v| Span { min: Some(v), max: None });
        }
        for sep in ["±", "+-"] {
            if let Some((c, d)) = t.split_once(sep) {
                let (c, d) = (parse_number(c)?, parse_number(d)?);
                return Some(Span::range(c - d, c + d));
            }
        }
        if let Some(v) = parse_number(t) {
            return Some(Span::point(v));
        }
        let (a, b) = t.split_once('-')?;
        Some(Span::range(parse_number(a)?, parse_number(b)?))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.min, self.max) {
            (Some(a), Some(b)) if a == b => write!(f, "{a}"),
            (Some(a), Some(b)) => write!(f, "{a}-{b}"),
            (None, Some(b)) => write!(f, "max. {b}"),
            (Some(a), None) => write!(f, "{a}+"),
            (None, None) => f.write_str("-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostVariant {
    pub label: Option<String>,
    pub value: Span,
}

/// One or more priced variants (sizes, volumes).
#[derive(Debug, Clone, PartialEq)]
pub struct Cost(pub Vec<CostVariant>);

impl Cost {
    pub fn cheapest(&self) -> &CostVariant {
        self.0.iter().min_by(|a, b| a.value.low().total_cmp(&b.value.low())).expect("cost has a variant")
    }

    pub fn parse(text: &str) -> Option<Cost> {
        let variants = text
            .split(';')
            .map(|part| {
                let (value, label) = match part.split_once('@') {
                    Some((v, l)) => (v, Some(l.trim().to_string())),
                    None => (part, None),
                };
                Span::parse(value).map(|value| CostVariant { label, value })
            })
            .collect::<Option<Vec<_>>>()?;
        (!variants.is_empty()).then_some(Cost(variants))
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}", v.value)?;
            if let Some(l) = &v.label {
                write!(f, "@{l}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquipmentRecord {
    pub id: String,
    pub kind: EquipmentKind,
    pub name: String,
    pub vendor: String,
    pub cost_eur: Option<Cost>,
    pub reflectivity_pct: Option<Span>,
    pub max_resolution_mpx: Option<f64>,
    pub shutter_range_s: Option<Span>,
    pub iso_range: Option<Span>,
    pub luminous_flux_lm: Option<Span>,
    pub color_temp_k: Option<Span>,
    pub power_w: Option<Span>,
    pub dimensions_mm: Option<String>,
    pub notes: Option<String>,
    pub extra: BTreeMap<String, String>,
}

impl EquipmentRecord {
    pub fn new(id: &str, kind: EquipmentKind, name: &str, vendor: &str) -> Self {
        EquipmentRecord {
            id: id.into(),
            kind,
            name: name.into(),
            vendor: vendor.into(),
            cost_eur: None,
            reflectivity_pct: None,
            max_resolution_mpx: None,
            shutter_range_s: None,
            iso_range: None,
            luminous_flux_lm: None,
            color_temp_k: None,
            power_w: None,
            dimensions_mm: None,
            notes: None,
            extra: BTreeMap::new(),
        }
    }

    /// Value of a column, as used by ranking and filtering.
    pub fn value(&self, key: &str) -> Option<FieldValue> {
        let span = |s: &Option<Span>| s.map(FieldValue::Number);
        let text = |s: &str| Some(FieldValue::Text(s.to_string()));
        match key {
            "id" => text(&self.id),
            "kind" => text(self.kind.as_str()),
            "name" => text(&self.name),
            "vendor" => (!self.vendor.is_empty()).then(|| FieldValue::Text(self.vendor.clone())),
            "cost_eur" | "cost" => self.cost_eur.as_ref().map(|c| FieldValue::Number(c.cheapest().value)),
            "reflectivity_pct" | "reflectivity" => span(&self.reflectivity_pct),
            "max_resolution_mpx" => self.max_resolution_mpx.map(|v| FieldValue::Number(Span::point(v))),
            "shutter_range_s" => span(&self.shutter_range_s),
            "iso_range" => span(&self.iso_range),
            "luminous_flux_lm" => span(&self.luminous_flux_lm),
            "color_temp_k" => span(&self.color_temp_k),
            "power_w" => span(&self.power_w),
            "dimensions_mm" => self.dimensions_mm.as_deref().and_then(text),
            "notes" => self.notes.as_deref().and_then(text),
            other => self.extra.get(other).map(|v| match Span::parse(v) {
                Some(s) => FieldValue::Number(s),
                None => FieldValue::Text(v.clone()),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldValue {
    Number(Span),
    Text(String),
}

const COLUMNS: [&str; 14] = [
    "id",
    "kind",
    "name",
    "vendor",
    "cost_eur",
    "reflectivity_pct",
    "max_resolution_mpx",
    "shutter_range_s",
    "iso_range",
    "luminous_flux_lm",
    "color_temp_k",
    "power_w",
    "dimensions_mm",
    "notes",
];

fn is_missing(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t == "-"
}

fn parse_record(row: usize, header: &[String], cells: &csv::StringRecord) -> Result<EquipmentRecord, CatalogError> {
    let bad = |field: &str, message: String| CatalogError::Field { row, field: field.into(), message };
    let get = |name: &str| -> Option<&str> {
        header.iter().position(|h| h == name).and_then(|i| cells.get(i)).filter(|c| !is_missing(c)).map(str::trim)
    };
    let need = |name: &str| get(name).ok_or_else(|| bad(name, "required value is missing".into()));
    let span = |name: &str| -> Result<Option<Span>, CatalogError> {
        match get(name) {
            None => Ok(None),
            Some(t) => {
                let s = Span::parse(t).ok_or_else(|| bad(name, format!("cannot parse {t:?} as a range")))?;
                if let (Some(a), Some(b)) = (s.min, s.max) {
                    if a > b {
                        return Err(bad(name, format!("range {t:?} has min > max")));
                    }
                }
                Ok(Some(s))
            }
        }
    };

    let kind = need("kind")?.parse().map_err(|e| bad("kind", e))?;
    let mut rec = EquipmentRecord::new(need("id")?, kind, need("name")?, get("vendor").unwrap_or(""));
    rec.cost_eur = match get("cost_eur") {
        None => None,
        Some(t) => {
            let cost = Cost::parse(t).ok_or_else(|| bad("cost_eur", format!("cannot parse {t:?}")))?;
            for v in &cost.0 {
                if v.value.low() < 0.0 || v.value.high() < v.value.low() {
                    return Err(bad("cost_eur", format!("invalid cost {t:?}")));
                }
            }
            Some(cost)
        }
    };
    rec.reflectivity_pct = span("reflectivity_pct")?;
    if let Some(r) = rec.reflectivity_pct {
        if !(r.low() > 0.0 && r.high() <= 100.0) {
            return Err(bad("reflectivity_pct", format!("{r} is outside (0, 100]")));
        }
    }
    rec.max_resolution_mpx = match get("max_resolution_mpx") {
        None => None,
        Some(t) => Some(parse_number(t).ok_or_else(|| bad("max_resolution_mpx", format!("cannot parse {t:?}")))?),
    };
    rec.shutter_range_s = span("shutter_range_s")?;
    rec.iso_range = span("iso_range")?;
    rec.luminous_flux_lm = span("luminous_flux_lm")?;
    rec.color_temp_k = span("color_temp_k")?;
    rec.power_w = span("power_w")?;
    rec.dimensions_mm = get("dimensions_mm").map(str::to_string);
    rec.notes = get("notes").map(str::to_string);
    for (i, name) in header.iter().enumerate() {
        if !COLUMNS.contains(&name.as_str()) {
            if let Some(cell) = cells.get(i).filter(|c| !is_missing(c)) {
                rec.extra.insert(name.clone(), cell.trim().to_string());
            }
        }
    }
    Ok(rec)
}

/// Parses catalog CSV text. An empty document yields no records.
pub fn parse_catalog(text: &str) -> Result<Vec<EquipmentRecord>, CatalogError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CatalogError::Csv { row: 1, message: e.to_string() })?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    for required in ["id", "kind", "name"] {
        if !header.iter().any(|h| h == required) {
            return Err(CatalogError::Field {
                row: 1,
                field: required.into(),
                message: "column missing from header".into(),
            });
        }
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| CatalogError::Csv { row: line, message: e.to_string() })?;
        out.push(parse_record(line, &header, &row)?);
    }
    Ok(out)
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<EquipmentRecord>, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CatalogError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_catalog(&text)
}

/// Serializes records with the standard columns followed by every extra
/// column in name order.
pub fn write_catalog(records: &[EquipmentRecord]) -> String {
    let mut extra: Vec<&String> = records.iter().flat_map(|r| r.extra.keys()).collect();
    extra.sort();
    extra.dedup();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let header: Vec<&str> = COLUMNS.iter().copied().chain(extra.iter().map(|s| s.as_str())).collect();
    w.write_record(&header).expect("in-memory write");
    let opt = |s: &Option<Span>| s.map(|v| v.to_string()).unwrap_or_default();
    for r in records {
        let mut row = vec![
            r.id.clone(),
            r.kind.as_str().to_string(),
            r.name.clone(),
            r.vendor.clone(),
            r.cost_eur.as_ref().map(|c| c.to_string()).unwrap_or_default(),
            opt(&r.reflectivity_pct),
            r.max_resolution_mpx.map(|v| v.to_string()).unwrap_or_default(),
            opt(&r.shutter_range_s),
            opt(&r.iso_range),
            opt(&r.luminous_flux_lm),
            opt(&r.color_temp_k),
            opt(&r.power_w),
            r.dimensions_mm.clone().unwrap_or_default(),
            r.notes.clone().unwrap_or_default(),
        ];
        row.extend(extra.iter().map(|k| r.extra.get(*k).cloned().unwrap_or_default()));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub const BACKGROUNDS_CSV: &str = include_str!("../../../data/backgrounds.csv");
pub const CAMERAS_CSV: &str = include_str!("../../../data/cameras.csv");
pub const LAMPS_CSV: &str = include_str!("../../../data/lamps.csv");

/// The bundled survey table for `kind`.
pub fn shipped(kind: EquipmentKind) -> Vec<EquipmentRecord> {
    let text = match kind {
        EquipmentKind::Background => BACKGROUNDS_CSV,
        EquipmentKind::Camera => CAMERAS_CSV,
        EquipmentKind::Lamp => LAMPS_CSV,
    };
    parse_catalog(text).expect("bundled catalog parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Asc,
    Desc,
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "asc" => Ok(Direction::Asc),
            "desc" => Ok(Direction::Desc),
            _ => Err(format!("direction must be asc or desc, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedRecord {
    pub record: EquipmentRecord,
    /// The value the record was ordered by; `None` when it lacks the key.
    pub sort_value: Option<FieldValue>,
    pub missing: bool,
}

/// Stable sort of records carrying `key`; the rest follow in input order
/// with `missing` set.
pub fn rank_by(records: &[EquipmentRecord], key: &str, direction: Direction) -> Result<Vec<RankedRecord>, QueryError> {
    let (mut present, absent): (Vec<RankedRecord>, Vec<RankedRecord>) = records
        .iter()
        .map(|r| {
            let v = r.value(key);
            RankedRecord { missing: v.is_none(), sort_value: v, record: r.clone() }
        })
        .partition(|r| !r.missing);
    if present.is_empty() {
        return Err(QueryError::UnknownKey(key.to_string()));
    }
    let numeric = present.iter().all(|r| matches!(r.sort_value, Some(FieldValue::Number(_))));
    let text_of = |v: &FieldValue| match v {
        FieldValue::Text(t) => t.to_lowercase(),
        FieldValue::Number(s) => s.to_string(),
    };
    present.sort_by(|a, b| {
        let (a, b) = (a.sort_value.as_ref().unwrap(), b.sort_value.as_ref().unwrap());
        match (numeric, a, b, direction) {
            (true, FieldValue::Number(x), FieldValue::Number(y), Direction::Asc) => x.low().total_cmp(&y.low()),
            (true, FieldValue::Number(x), FieldValue::Number(y), Direction::Desc) => y.high().total_cmp(&x.high()),
            (_, a, b, Direction::Asc) => text_of(a).cmp(&text_of(b)),
            (_, a, b, Direction::Desc) => text_of(b).cmp(&text_of(a)),
        }
    });
    present.extend(absent);
    Ok(present)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

/// How a ranged value is tested against a numeric threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangeRule {
    /// Some part of the range satisfies the comparison.
    #[default]
    Overlaps,
    /// The whole range satisfies it; open ends never do.
    Within,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub key: String,
    pub op: CmpOp,
    pub value: String,
}

impl Constraint {
    pub fn new(key: &str, op: CmpOp, value: &str) -> Self {
        Constraint { key: key.into(), op, value: value.into() }
    }

    /// Parses `key<=v`, `key>=v`, `key<v`, `key>v` or `key=v`.
    pub fn parse(text: &str) -> Result<Constraint, QueryError> {
        for (token, op) in [("<=", CmpOp::Le), (">=", CmpOp::Ge), ("<", CmpOp::Lt), (">", CmpOp::Gt), ("=", CmpOp::Eq)]
        {
            if let Some((k, v)) = text.split_once(token) {
                let (k, v) = (k.trim(), v.trim());
                if k.is_empty() || v.is_empty() {
                    break;
                }
                return Ok(Constraint::new(k, op, v));
            }
        }
        Err(QueryError::Constraint(text.to_string()))
    }

    pub fn matches(&self, record: &EquipmentRecord, rule: RangeRule) -> bool {
        let Some(value) = record.value(&self.key) else { return false };
        match (value, parse_number(&self.value)) {
            (FieldValue::Number(span), Some(t)) => {
                let (lo, hi) = span.bounds();
                match (rule, self.op) {
                    (RangeRule::Overlaps, CmpOp::Lt) => lo < t,
                    (RangeRule::Overlaps, CmpOp::Le) => lo <= t,
                    (RangeRule::Overlaps, CmpOp::Eq) => lo <= t && t <= hi,
                    (RangeRule::Overlaps, CmpOp::Ge) => hi >= t,
                    (RangeRule::Overlaps, CmpOp::Gt) => hi > t,
                    (RangeRule::Within, CmpOp::Lt) => hi < t,
                    (RangeRule::Within, CmpOp::Le) => hi <= t,
                    (RangeRule::Within, CmpOp::Eq) => lo == t && hi == t,
                    (RangeRule::Within, CmpOp::Ge) => lo >= t,
                    (RangeRule::Within, CmpOp::Gt) => lo > t,
                }
            }
            (FieldValue::Text(text), _) => match self.op {
                CmpOp::Eq => text.eq_ignore_ascii_case(&self.value),
                _ => false,
            },
            (FieldValue::Number(span), None) => {
                self.op == CmpOp::Eq && span.to_string().eq_ignore_ascii_case(&self.value)
            }
        }
    }
}

/// Records satisfying every constraint, in input order.
pub fn filter(records: &[EquipmentRecord], constraints: &[Constraint], rule: RangeRule) -> Vec<EquipmentRecord> {
    records.iter().filter(|r| constraints.iter().all(|c| c.matches(r, rule))).cloned().collect()
}

impl PartialOrd for FieldValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (FieldValue::Number(a), FieldValue::Number(b)) => a.low().partial_cmp(&b.low()),
            (FieldValue::Text(a), FieldValue::Text(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Number(s) => write!(f, "{s}"),
            FieldValue::Text(t) => f.write_str(t),
        }
    }
}
