use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::numerics::{parse_float, to_decimal};

#[derive(Serialize, Deserialize)]
struct MeasureFile {
    label: String,
    atoms: Vec<String>,
    masses: Vec<String>,
    tail_mass_bound: String,
    precision_bits: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    tail_moment_bounds: BTreeMap<usize, String>,
}

impl DiscreteMeasure {
    pub fn to_json(&self) -> String {
        let file = MeasureFile {
            label: self.label.clone(),
            atoms: self.atoms.iter().map(to_decimal).collect(),
            masses: self.masses.iter().map(to_decimal).collect(),
            tail_mass_bound: to_decimal(&self.tail_mass_bound),
            precision_bits: self.prec(),
            tail_moment_bounds: self
                .tail_moment_bounds
                .iter()
                .map(|(k, v)| (*k, to_decimal(v)))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("measure serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: MeasureFile = serde_json::from_str(json)?;
        let prec = file.precision_bits.max(64);
        let parse_all = |v: &[String]| v.iter().map(|s| parse_float(s, prec)).collect::<Result<Vec<_>>>();
        let atoms = parse_all(&file.atoms)?;
        let masses = parse_all(&file.masses)?;
        let tail = parse_float(&file.tail_mass_bound, prec)?;
        let bounds = file
            .tail_moment_bounds
            .iter()
            .map(|(k, v)| Ok((*k, parse_float(v, prec)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(DiscreteMeasure::new(atoms, masses, file.label)?.with_tails(tail, bounds))
    }

    /// `atom,mass` rows under a header line.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["atom", "mass"])?;
        for (x, m) in self.atoms.iter().zip(&self.masses) {
            w.write_record([to_decimal(x), to_decimal(m)])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("decimal strings are ASCII"))
    }

    /// Write as JSON or CSV depending on the file extension.
    pub fn write_file(&self, path: &Path) -> Result<()> {
        let text = match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => self.to_csv()?,
            Some("json") => self.to_json(),
            other => {
                return Err(Error::Usage(format!(
                    "unsupported measure file extension {other:?} (use .json or .csv)"
                )))
            }
        };
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read_json_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use rug::Float;

    use super::*;

    #[test]
    fn json_round_trip() {
        let third = Float::with_val(192, 1) / 3u32;
        let m = DiscreteMeasure::new(
            vec![Float::with_val(192, 0.5), Float::with_val(192, 2)],
            vec![third.clone(), Float::with_val(192, 1 - &third)],
            "two atoms",
        )
        .unwrap()
        .with_tails(Float::with_val(192, 1e-40), BTreeMap::from([(0, Float::with_val(192, 1e-40))]));
        let back = DiscreteMeasure::from_json(&m.to_json()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let m = DiscreteMeasure::new(vec![Float::with_val(64, 1)], vec![Float::with_val(64, 1)], "one").unwrap();
        let csv = m.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "atom,mass");
        assert_eq!(lines.len(), 2);
    }
}
