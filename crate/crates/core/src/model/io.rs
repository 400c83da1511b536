//! Versioned text format for θ.
//!
//! ```text
//! coref-em-model v1
//! meta<TAB>representation<TAB>1
//! meta<TAB>epsilon<TAB>1.0000000000000000e-10
//! t<TAB>mode<TAB>conditioning-key<TAB>outcome-key<TAB>probability
//! q<TAB>bucket<TAB>probability
//! ```
//!
//! Only explicitly set `t` rows are written, and only their non-zero
//! entries; absent rows load as uniform. Probabilities carry 17
//! significant digits so `f64` values round-trip bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::mentions::ResolutionMode;
use crate::num::Real;
use crate::representation::{outcome_count, BucketScheme, Conditioning, Outcome, REPRESENTATION_VERSION};

use super::error::ModelIoError;
use super::params::{ParameterTables, DEFAULT_EPSILON};

pub const MODEL_HEADER: &str = "coref-em-model v1";
const HEADER_PREFIX: &str = "coref-em-model";

fn fmt_prob(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn model_to_string<T: Real>(theta: &ParameterTables<T>) -> String {
    let mut out = String::new();
    out.push_str(MODEL_HEADER);
    out.push('\n');
    let _ = writeln!(out, "meta\trepresentation\t{REPRESENTATION_VERSION}");
    let _ = writeln!(out, "meta\tepsilon\t{}", fmt_prob(theta.smoothing_epsilon.as_f64()));
    for mode in ResolutionMode::ALL {
        for (c, row) in theta.table(*mode).explicit_rows() {
            let cond = Conditioning::from_index(*mode, c).expect("stored key is valid");
            for (o, &p) in row.iter().enumerate() {
                if p != T::zero() {
                    let outcome = Outcome::from_index(*mode, o).expect("stored key is valid");
                    let _ = writeln!(out, "t\t{mode}\t{cond}\t{outcome}\t{}", fmt_prob(p.as_f64()));
                }
            }
        }
    }
    let buckets = theta.buckets();
    for (i, &p) in theta.q().iter().enumerate() {
        let label = buckets.label(buckets.from_index(i).expect("bucket in range"));
        let _ = writeln!(out, "q\t{label}\t{}", fmt_prob(p.as_f64()));
    }
    out
}

pub fn save_model<T: Real>(theta: &ParameterTables<T>, path: &Path) -> Result<(), ModelIoError> {
    std::fs::write(path, model_to_string(theta)).map_err(|source| ModelIoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model<T: Real>(path: &Path) -> Result<ParameterTables<T>, ModelIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| ModelIoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_model(&text)
}

const ROW_TOLERANCE: f64 = 1e-6;

pub fn parse_model<T: Real>(text: &str) -> Result<ParameterTables<T>, ModelIoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    match lines.next() {
        Some((_, MODEL_HEADER)) => {}
        Some((_, h)) if h.starts_with(HEADER_PREFIX) => {
            return Err(ModelIoError::Version { found: h.to_string() })
        }
        _ => {
            return Err(ModelIoError::Format {
                line: 1,
                message: format!("expected header {MODEL_HEADER:?}"),
            })
        }
    }

    let mut epsilon = DEFAULT_EPSILON;
    // (mode, conditioning) → (first line, dense row)
    let mut rows: BTreeMap<(usize, usize), (usize, Vec<f64>)> = BTreeMap::new();
    let mut q_labels: Vec<String> = Vec::new();
    let mut q_values: Vec<f64> = Vec::new();
    let mut q_line = 0;

    for (line, raw) in lines {
        if raw.trim().is_empty() {
            continue;
        }
        let bad = |message: String| ModelIoError::Format { line, message };
        let prob = |s: &str| -> Result<f64, ModelIoError> {
            let p: f64 = s
                .parse()
                .map_err(|_| bad(format!("invalid probability {s:?}")))?;
            if (0.0..=1.0).contains(&p) {
                Ok(p)
            } else {
                Err(bad(format!("probability {s} outside [0, 1]")))
            }
        };
        let fields: Vec<&str> = raw.split('\t').collect();
        match fields[0] {
            "meta" if fields.len() == 3 => match fields[1] {
                "representation" => {
                    if fields[2] != REPRESENTATION_VERSION.to_string() {
                        return Err(ModelIoError::Representation {
                            found: fields[2].to_string(),
                            expected: REPRESENTATION_VERSION,
                        });
                    }
                }
                "epsilon" => epsilon = prob(fields[2])?,
                other => return Err(bad(format!("unknown meta key {other:?}"))),
            },
            "t" if fields.len() == 5 => {
                let mode: ResolutionMode = fields[1]
                    .parse()
                    .map_err(|_| bad(format!("unknown mode tag {:?}", fields[1])))?;
                let cond = Conditioning::parse(mode, fields[2]).map_err(|e| bad(e.to_string()))?;
                let outcome = Outcome::parse(mode, fields[3]).map_err(|e| bad(e.to_string()))?;
                let p = prob(fields[4])?;
                let (_, row) = rows
                    .entry((mode.index(), cond.index()))
                    .or_insert_with(|| (line, vec![0.0; outcome_count(mode)]));
                if row[outcome.index()] != 0.0 {
                    return Err(bad(format!("duplicate entry for {mode} {cond} {outcome}")));
                }
                row[outcome.index()] = p;
            }
            "q" if fields.len() == 3 => {
                if q_labels.is_empty() {
                    q_line = line;
                }
                q_labels.push(fields[1].to_string());
                q_values.push(prob(fields[2])?);
            }
            "meta" | "t" | "q" => {
                return Err(bad(format!("wrong number of fields for a {:?} line", fields[0])))
            }
            other => return Err(bad(format!("unknown line tag {other:?}"))),
        }
    }

    let buckets = if q_labels.is_empty() {
        BucketScheme::default()
    } else {
        BucketScheme::from_labels(&q_labels).ok_or_else(|| ModelIoError::Format {
            line: q_line,
            message: format!("q buckets {q_labels:?} are not a valid bucket list"),
        })?
    };
    let mut theta = ParameterTables::<T>::uniform(buckets, T::of(epsilon));
    for ((m, c), (line, row)) in rows {
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_TOLERANCE {
            return Err(ModelIoError::Format {
                line,
                message: format!("t row sums to {sum}, not 1"),
            });
        }
        let mode = ResolutionMode::ALL[m];
        theta
            .table_mut(mode)
            .set_row(c, row.into_iter().map(T::of).collect());
    }
    if !q_values.is_empty() {
        let sum: f64 = q_values.iter().sum();
        if (sum - 1.0).abs() > ROW_TOLERANCE {
            return Err(ModelIoError::Format {
                line: q_line,
                message: format!("q sums to {sum}, not 1"),
            });
        }
        theta.set_q(q_values.into_iter().map(T::of).collect());
    }
    Ok(theta)
}
