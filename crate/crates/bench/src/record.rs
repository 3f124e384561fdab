use std::cmp::Ordering;
use std::io::{Read, Write};
use std::path::Path;

use crate::BenchError;

pub const HEADER: [&str; 11] = [
    "method",
    "reconstructor",
    "M",
    "snr_db",
    "t",
    "trial",
    "mse_sum",
    "mse_mean",
    "objective",
    "wall_time_ms",
    "seed",
];

/// One (method, reconstructor, M, snr, t, trial) outcome. Failed trials keep
/// their row with the numeric result fields empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub method: String,
    pub reconstructor: String,
    pub m: usize,
    pub snr_db: f64,
    /// Time step, or -1 for static runs.
    pub t: i64,
    pub trial: usize,
    pub mse_sum: Option<f64>,
    pub mse_mean: Option<f64>,
    pub objective: Option<f64>,
    pub wall_time_ms: f64,
    pub seed: u64,
}

impl ExperimentRecord {
    pub fn is_error(&self) -> bool {
        self.mse_sum.is_none()
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.method
            .cmp(&other.method)
            .then(self.m.cmp(&other.m))
            .then(self.snr_db.total_cmp(&other.snr_db))
            .then(self.t.cmp(&other.t))
            .then(self.trial.cmp(&other.trial))
            .then(self.reconstructor.cmp(&other.reconstructor))
    }
}

pub fn sort_records(records: &mut [ExperimentRecord]) {
    records.sort_by(|a, b| a.key_cmp(b));
}

/// Twelve significant digits, plain decimal for moderate magnitudes.
pub fn format_sig12(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (_, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..=14).contains(&exp) {
        return sci;
    }
    let rounded: f64 = sci.parse().expect("round trip");
    let decimals = (11 - exp).max(0) as usize;
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    s
}

fn parse_num(field: &str) -> Result<f64, BenchError> {
    match field {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => field
            .parse()
            .map_err(|_| BenchError::Csv(format!("bad number `{field}`"))),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_sig12).unwrap_or_default()
}

/// Write records (sorted) as CSV with LF line endings.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<(), BenchError> {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in &sorted {
        w.write_record([
            r.method.clone(),
            r.reconstructor.clone(),
            r.m.to_string(),
            format_sig12(r.snr_db),
            r.t.to_string(),
            r.trial.to_string(),
            opt(r.mse_sum),
            opt(r.mse_mean),
            opt(r.objective),
            format_sig12(r.wall_time_ms),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(records: &[ExperimentRecord], path: &Path) -> Result<(), BenchError> {
    let file = std::fs::File::create(path)?;
    write_csv(records, std::io::BufWriter::new(file))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ExperimentRecord>, BenchError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        return Err(BenchError::Csv(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let int = |i: usize| -> Result<i64, BenchError> {
            row[i]
                .parse()
                .map_err(|_| BenchError::Csv(format!("bad integer `{}`", &row[i])))
        };
        let optional = |i: usize| -> Result<Option<f64>, BenchError> {
            if row[i].is_empty() {
                Ok(None)
            } else {
                parse_num(&row[i]).map(Some)
            }
        };
        out.push(ExperimentRecord {
            method: row[0].to_string(),
            reconstructor: row[1].to_string(),
            m: int(2)? as usize,
            snr_db: parse_num(&row[3])?,
            t: int(4)?,
            trial: int(5)? as usize,
            mse_sum: optional(6)?,
            mse_mean: optional(7)?,
            objective: optional(8)?,
            wall_time_ms: parse_num(&row[9])?,
            seed: row[10]
                .parse()
                .map_err(|_| BenchError::Csv(format!("bad seed `{}`", &row[10])))?,
        });
    }
    Ok(out)
}

/// The CSV with the timing column blanked, for replay comparisons.
pub fn without_timing(csv_text: &str) -> String {
    csv_text
        .lines()
        .map(|line| {
            let mut fields: Vec<&str> = line.split(',').collect();
            if fields.len() == HEADER.len() {
                fields[9] = "";
            }
            fields.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
