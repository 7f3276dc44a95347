//! Result tables and their CSV / JSON encodings.
//!
//! CSV files start with `# key: value` metadata lines whose values are JSON,
//! followed by an RFC 4180 header and rows. Numbers use the shortest
//! representation that parses back to the same `f64`.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::detection::gamma_coefficients;
use crate::error::{Error, Result};
use crate::experiments::{CriticalRow, DetectionCurve, RatioSummary, Surface, WidthPoint};
use crate::lineshape::Family;
use crate::roc::{DensityPanel, RocResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Num(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn parse_field(s: &str) -> Self {
        if s.is_empty() {
            Cell::Missing
        } else if let Ok(v) = s.parse::<f64>() {
            Cell::Num(v)
        } else {
            Cell::Text(s.to_string())
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Null => Ok(Cell::Missing),
            Value::Number(n) => Ok(Cell::Num(n.as_f64().unwrap_or(f64::NAN))),
            Value::String(s) => Ok(Cell::Text(s.clone())),
            other => Err(Error::Config(format!("unsupported table cell {other}"))),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Num(v as f64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Family> for Cell {
    fn from(v: Family) -> Self {
        Cell::Text(v.name().to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.extension())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Free-form metadata; `schema` is always written first.
    pub meta: Map<String, Value>,
}

impl ResultTable {
    pub fn new(schema: &str, columns: &[&str]) -> Self {
        Self {
            schema: schema.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.insert(key.to_string(), value.into());
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell `name` of row `row`.
    pub fn get(&self, row: usize, name: &str) -> Option<&Cell> {
        self.rows.get(row)?.get(self.column(name)?)
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("# schema: {}\n", Value::String(self.schema.clone())));
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |source| Error::Csv {
            path: "<memory>".into(),
            source,
        };
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut schema = None;
        let mut meta = Map::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            body_start += line.len();
            let rest = rest.trim();
            let (k, v) = rest
                .split_once(": ")
                .ok_or_else(|| Error::Config(format!("malformed metadata line `{rest}`")))?;
            let v: Value = serde_json::from_str(v).map_err(|e| Error::Config(format!("metadata `{k}`: {e}")))?;
            if k == "schema" {
                schema = v.as_str().map(str::to_string);
            } else {
                meta.insert(k.to_string(), v);
            }
        }
        let csv_err = |source| Error::Csv {
            path: "<memory>".into(),
            source,
        };
        let mut r = csv::Reader::from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(csv_err)?.iter().map(Cell::parse_field).collect());
        }
        Ok(Self {
            schema: schema.unwrap_or_default(),
            columns,
            rows,
            meta,
        })
    }

    pub fn to_json_value(&self) -> Value {
        let mut meta = Map::new();
        meta.insert("schema".into(), Value::String(self.schema.clone()));
        meta.extend(self.meta.clone());
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        serde_json::json!({
            "meta": meta,
            "columns": self.columns,
            "rows": rows,
        })
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).map_err(|e| Error::Config(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("table json: {e}")))?;
        let bad = |what: &str| Error::Config(format!("table json: missing or invalid `{what}`"));
        let mut meta = v.get("meta").and_then(Value::as_object).cloned().ok_or_else(|| bad("meta"))?;
        let schema = meta
            .remove("schema")
            .and_then(|s| s.as_str().map(str::to_string))
            .unwrap_or_default();
        let columns = v
            .get("columns")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("columns"))?
            .iter()
            .map(|c| c.as_str().map(str::to_string).ok_or_else(|| bad("columns")))
            .collect::<Result<Vec<_>>>()?;
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("rows"))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("rows"))?
                    .iter()
                    .map(Cell::from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            schema,
            columns,
            rows,
            meta,
        })
    }

    pub fn encode(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv_string(),
            Format::Json => self.to_json_string(),
        }
    }
}

/// Writes `table` to `path`, creating parent directories.
pub fn emit_table(table: &ResultTable, format: Format, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    fs::write(path, table.encode(format)?).map_err(io_err)
}

/// Reads a table written by [`emit_table`]; the format follows the extension.
pub fn read_table(path: &Path) -> Result<ResultTable> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => ResultTable::parse_json(&text),
        _ => ResultTable::parse_csv(&text),
    }
}

pub fn detection_curve_table(curves: &[DetectionCurve]) -> ResultTable {
    let mut t = ResultTable::new(
        "detection_curve",
        &[
            "family",
            "fwhm_bins",
            "threshold",
            "repeat",
            "amplitude",
            "prob_psnr",
            "prob_asnr",
            "mean_psnr",
            "std_psnr",
            "mean_asnr",
            "std_asnr",
        ],
    );
    for c in curves {
        for p in &c.points {
            t.push(vec![
                c.family.into(),
                c.fwhm_bins.into(),
                c.threshold.into(),
                c.repeat.into(),
                p.axis.into(),
                p.prob_psnr.into(),
                p.prob_asnr.into(),
                p.mean_psnr.into(),
                p.std_psnr.into(),
                p.mean_asnr.into(),
                p.std_asnr.into(),
            ]);
        }
    }
    t
}

fn crit_cells(v: f64, std: f64) -> [Cell; 2] {
    if v.is_nan() {
        [Cell::Missing, Cell::Missing]
    } else {
        [v.into(), std.into()]
    }
}

pub fn critical_table(rows: &[CriticalRow]) -> ResultTable {
    let mut t = ResultTable::new(
        "critical_amplitude",
        &[
            "lineshape",
            "width_bins",
            "threshold",
            "psnr_crit_mean",
            "psnr_crit_std",
            "asnr_crit_mean",
            "asnr_crit_std",
            "improvement_factor",
            "status",
        ],
    );
    for r in rows {
        let [pm, ps] = crit_cells(r.psnr.value, r.psnr.std_over_repeats);
        let [am, as_] = crit_cells(r.asnr.value, r.asnr.std_over_repeats);
        let ratio = r.improvement_factor();
        let status = match (r.psnr.in_range(), r.asnr.in_range()) {
            (true, true) => "ok".to_string(),
            (p, a) => {
                let mut missing = Vec::new();
                if !p {
                    missing.push(format!("psnr {}/{}", r.psnr.n_repeats - r.psnr.n_crossed, r.psnr.n_repeats));
                }
                if !a {
                    missing.push(format!("asnr {}/{}", r.asnr.n_repeats - r.asnr.n_crossed, r.asnr.n_repeats));
                }
                format!("out_of_range: {}", missing.join(", "))
            }
        };
        t.push(vec![
            r.family.into(),
            r.fwhm_bins.into(),
            r.threshold.into(),
            pm,
            ps,
            am,
            as_,
            if ratio.is_nan() { Cell::Missing } else { ratio.into() },
            status.into(),
        ]);
    }
    t
}

pub fn width_sweep_table(points: &[WidthPoint]) -> ResultTable {
    let mut cols = vec![
        "family".to_string(),
        "amplitude".into(),
        "repeat".into(),
        "fwhm_bins".into(),
        "n_roi".into(),
        "mean_psnr".into(),
        "std_psnr".into(),
        "mean_asnr".into(),
        "std_asnr".into(),
        "ratio".into(),
    ];
    let thresholds = points.first().map(|p| p.thresholds.clone()).unwrap_or_default();
    for tau in &thresholds {
        cols.push(format!("prob_psnr_tau{tau}"));
        cols.push(format!("prob_asnr_tau{tau}"));
    }
    let mut t = ResultTable {
        schema: "width_sweep".into(),
        columns: cols,
        rows: Vec::new(),
        meta: Map::new(),
    };
    for p in points {
        let mut row: Vec<Cell> = vec![
            p.family.into(),
            p.amplitude.into(),
            p.repeat.into(),
            p.fwhm_bins.into(),
            p.n_roi.into(),
            p.mean_psnr.into(),
            p.std_psnr.into(),
            p.mean_asnr.into(),
            p.std_asnr.into(),
            p.ratio().into(),
        ];
        for (pp, pa) in p.prob_psnr.iter().zip(&p.prob_asnr) {
            row.push((*pp).into());
            row.push((*pa).into());
        }
        t.push(row);
    }
    t
}

pub fn ratio_summary_table(rows: &[RatioSummary]) -> ResultTable {
    let mut t = ResultTable::new(
        "width_ratio_summary",
        &["family", "amplitude", "fwhm_bins", "mean_psnr", "mean_asnr", "ratio_mean", "ratio_std", "n_repeats"],
    );
    for r in rows {
        t.push(vec![
            r.family.into(),
            r.amplitude.into(),
            r.fwhm_bins.into(),
            r.mean_psnr.into(),
            r.mean_asnr.into(),
            r.ratio.mean.into(),
            r.ratio.std.into(),
            r.ratio.n.into(),
        ]);
    }
    t
}

pub fn roc_curve_table(r: &RocResult) -> ResultTable {
    let mut t = ResultTable::new("roc_curve", &["tau", "fpr_psnr", "tpr_psnr", "fpr_asnr", "tpr_asnr"]);
    for (i, &tau) in r.psnr.thresholds.iter().enumerate() {
        t.push(vec![
            tau.into(),
            r.psnr.fpr[i].into(),
            r.psnr.tpr[i].into(),
            r.asnr.fpr[i].into(),
            r.asnr.tpr[i].into(),
        ]);
    }
    t
}

pub fn roc_summary_table(results: &[RocResult]) -> ResultTable {
    let mut t = ResultTable::new(
        "roc_summary",
        &[
            "family",
            "fwhm_bins",
            "amplitude",
            "n_roi",
            "auc_psnr",
            "auc_psnr_std",
            "auc_asnr",
            "auc_asnr_std",
            "improvement",
            "n_repeats",
        ],
    );
    for r in results {
        let (p, a) = (r.auc_psnr(), r.auc_asnr());
        t.push(vec![
            r.family.into(),
            r.fwhm_bins.into(),
            r.amplitude.into(),
            r.n_roi.into(),
            p.mean.into(),
            p.std.into(),
            a.mean.into(),
            a.std.into(),
            r.improvement().into(),
            p.n.into(),
        ]);
    }
    t
}

pub fn density_table(panels: &[DensityPanel]) -> ResultTable {
    let mut t = ResultTable::new(
        "density",
        &["statistic", "hypothesis", "bin_lower", "bin_center", "count", "density", "mean", "std"],
    );
    for p in panels {
        let h = &p.histogram;
        for (i, center) in h.centers().into_iter().enumerate() {
            t.push(vec![
                p.kind.name().into(),
                p.hypothesis.to_string().into(),
                h.lower_edges[i].into(),
                center.into(),
                (h.counts[i] as f64).into(),
                h.density[i].into(),
                h.summary.mean.into(),
                h.summary.std.into(),
            ]);
        }
    }
    t
}

pub fn surface_table(surfaces: &[Surface]) -> ResultTable {
    let mut t = ResultTable::new(
        "surface_2d",
        &["family", "width_px", "amplitude", "n_roi", "mean_psnr", "std_psnr", "mean_vsnr", "std_vsnr"],
    );
    for s in surfaces {
        for c in &s.cells {
            t.push(vec![
                s.family.into(),
                c.width_px.into(),
                c.amplitude.into(),
                c.n_roi.into(),
                c.mean_psnr.into(),
                c.std_psnr.into(),
                c.mean_vsnr.into(),
                c.std_vsnr.into(),
            ]);
        }
    }
    t
}

pub fn enhancement_table(surfaces: &[Surface]) -> ResultTable {
    let mut t = ResultTable::new(
        "enhancement_2d",
        &["family", "max_mean_psnr", "max_mean_vsnr", "enhancement"],
    );
    for s in surfaces {
        t.push(vec![
            s.family.into(),
            s.max_mean_psnr().into(),
            s.max_mean_vsnr().into(),
            s.enhancement().into(),
        ]);
    }
    t
}

/// Continuous improvement-factor coefficients for every family.
pub fn gamma_table(eta: f64) -> Result<ResultTable> {
    let mut t = ResultTable::new(
        "gamma_coefficients",
        &["family", "eta", "coefficient", "per_bin_coefficient", "width_over_b", "area_over_hb"],
    );
    for f in Family::ALL {
        let c = gamma_coefficients(f, eta)?;
        t.push(vec![
            f.into(),
            eta.into(),
            c.per_sqrt_b.into(),
            c.per_sqrt_n.into(),
            c.width_over_b.into(),
            c.area_over_hb.into(),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new("demo", &["name", "x", "y"]);
        t.push(vec!["a,b \"q\"".into(), 0.1.into(), Cell::Missing]);
        t.push(vec!["gaussian".into(), 1e-300.into(), (-2.5e17).into()]);
        t.set_meta("seed", 42);
        t.set_meta("config", serde_json::json!({"k": [1, 2]}));
        t
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let s = t.to_csv_string().unwrap();
        assert!(s.starts_with("# schema: \"demo\"\n"));
        assert!(s.contains("\"a,b \"\"q\"\"\""));
        assert_eq!(ResultTable::parse_csv(&s).unwrap(), t);
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let s = t.to_json_string().unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["meta"]["schema"], "demo");
        assert_eq!(ResultTable::parse_json(&s).unwrap(), t);
    }

    #[test]
    fn nan_is_null_in_json() {
        let mut t = ResultTable::new("n", &["x"]);
        t.push(vec![f64::NAN.into()]);
        let v = t.to_json_value();
        assert!(v["rows"][0][0].is_null());
    }

    #[test]
    fn gamma_table_values() {
        let t = gamma_table(0.5).unwrap();
        let g = t.get(0, "coefficient").unwrap().as_f64().unwrap();
        let l = t.get(1, "coefficient").unwrap().as_f64().unwrap();
        assert!((g - 1.243).abs() < 0.001);
        assert!((l - 1.111).abs() < 0.001);
    }
}
