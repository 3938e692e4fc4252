//! File formats: system and attractor JSON, density/CDF/cloud CSV.
//!
//! Every float is written with 17 significant digits so that files round-trip
//! exactly and repeated runs are byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::attractor::{AttractorGrid, FiberSet, FixedPointReport};
use crate::catalog::{self, Builtin, ReferenceSheet};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::measure::{CloudRows, DensityProfile, EmpiricalCDF, PointCloud};
use crate::mobius::{Label, MobiusBranch, PiecewiseSystem};

/// `x` in scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchSpec {
    pub matrix: [f64; 4],
    pub domain: Interval,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

/// A system named by builtin, or given explicitly by its branches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Builtin {
        builtin: String,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        params: BTreeMap<String, f64>,
    },
    Explicit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        interval: Interval,
        branches: Vec<BranchSpec>,
    },
}

impl SystemSpec {
    pub fn builtin(name: &str, params: BTreeMap<String, f64>) -> Self {
        Self::Builtin {
            builtin: name.to_string(),
            params,
        }
    }

    /// Describes an explicit system by its finite branch table.
    pub fn from_system(system: &PiecewiseSystem) -> Result<Self> {
        if system.is_countable() {
            return Err(Error::BadInput(format!(
                "{} has a countable branch family and cannot be written out explicitly",
                system.name()
            )));
        }
        Ok(Self::Explicit {
            name: Some(system.name().to_string()),
            interval: system.interval(),
            branches: system
                .finite_branches()
                .iter()
                .map(|b| BranchSpec {
                    matrix: b.matrix(),
                    domain: b.domain(),
                    label: Some(b.label().clone()),
                })
                .collect(),
        })
    }

    pub fn resolve(&self) -> Result<Builtin> {
        match self {
            Self::Builtin { builtin, params } => catalog::builtin(builtin, params),
            Self::Explicit {
                name,
                interval,
                branches,
            } => {
                if branches.is_empty() {
                    return Err(Error::BadInput("system has no branches".into()));
                }
                let branches = branches
                    .iter()
                    .enumerate()
                    .map(|(i, b)| {
                        let label = b.label.clone().unwrap_or(Label::Digit(i as i64));
                        MobiusBranch::new(b.matrix, b.domain, label)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let name = name.clone().unwrap_or_else(|| "custom".into());
                Ok(Builtin::Mobius(
                    PiecewiseSystem::new(name, *interval, branches),
                    ReferenceSheet::NONE,
                ))
            }
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// Converged attractor as written by `attract`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttractorDump {
    pub system: SystemSpec,
    pub n_cells: usize,
    pub fibers: Vec<FiberSet>,
    pub report: FixedPointReport,
}

impl AttractorDump {
    pub fn new(system: SystemSpec, grid: &AttractorGrid, report: FixedPointReport) -> Self {
        Self {
            system,
            n_cells: grid.n_cells(),
            fibers: grid.fibers().to_vec(),
            report,
        }
    }

    /// Rebuilds the grid over the interval of the stored system.
    pub fn grid(&self) -> Result<AttractorGrid> {
        let Builtin::Mobius(system, _) = self.system.resolve()? else {
            return Err(Error::BadInput(
                "attractor dump does not describe a Möbius system".into(),
            ));
        };
        if self.fibers.len() != self.n_cells {
            return Err(Error::BadInput(format!(
                "dump declares {} cells but stores {} fibers",
                self.n_cells,
                self.fibers.len()
            )));
        }
        AttractorGrid::new(system.interval(), self.fibers.clone())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &to_json(self)?)
    }
}

struct Fixed17;

impl serde_json::ser::Formatter for Fixed17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with 17-digit floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed17);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes)?;
    Ok(())
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::BadCsv(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::BadCsv(e.to_string()))
}

/// `x,phi`.
pub fn density_csv(profile: &DensityProfile) -> Result<Vec<u8>> {
    let rows = profile
        .x
        .iter()
        .zip(&profile.phi)
        .map(|(&x, &p)| vec![fmt17(x), fmt17(p)]);
    csv_bytes(&["x", "phi"], rows)
}

/// `x,P`.
pub fn cdf_csv(cdf: &EmpiricalCDF) -> Result<Vec<u8>> {
    csv_bytes(
        &["x", "P"],
        cdf.points().map(|(x, p)| vec![fmt17(x), fmt17(p)]),
    )
}

/// `x,y,branch` for planar clouds, `re_z,im_z,re_w,im_w,digit` for Hurwitz.
pub fn cloud_csv(cloud: &PointCloud) -> Result<Vec<u8>> {
    match &cloud.rows {
        CloudRows::Planar(rows) => csv_bytes(
            &["x", "y", "branch"],
            rows.iter()
                .map(|p| vec![fmt17(p.x), fmt17(p.y), p.label.to_string()]),
        ),
        CloudRows::Hurwitz(rows) => csv_bytes(
            &["re_z", "im_z", "re_w", "im_w", "digit"],
            rows.iter().map(|p| {
                vec![
                    fmt17(p.z.re),
                    fmt17(p.z.im),
                    fmt17(p.w.re),
                    fmt17(p.w.im),
                    p.digit.to_string(),
                ]
            }),
        ),
    }
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    write_file(path, bytes)
}

/// A CSV table with a header row, kept as strings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Values of a numeric column.
    pub fn numeric(&self, col: usize) -> Result<Vec<f64>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let cell = r
                    .get(col)
                    .ok_or_else(|| Error::BadCsv(format!("row {} is short", i + 2)))?;
                cell.trim()
                    .parse()
                    .map_err(|_| Error::BadCsv(format!("row {}: {cell:?} is not a number", i + 2)))
            })
            .collect()
    }
}

/// Parses CSV text with a header row. Empty input gives an empty table.
pub fn parse_csv(text: &str) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        None => return Ok(Table::default()),
        Some(r) => r.map_err(|e| Error::BadCsv(e.to_string()))?,
    };
    let header: Vec<String> = header.iter().map(|s| s.trim().to_string()).collect();
    let rows = records
        .map(|r| {
            let r = r.map_err(|e| Error::BadCsv(e.to_string()))?;
            Ok(r.iter().map(str::to_string).collect())
        })
        .collect::<Result<Vec<Vec<String>>>>()?;
    Ok(Table { header, rows })
}

pub fn read_csv(path: &Path) -> Result<Table> {
    parse_csv(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::PlanarRow;

    #[test]
    fn floats_have_17_digits() {
        assert_eq!(fmt17(0.5), "5.0000000000000000e-1");
        let x = std::f64::consts::LN_2;
        assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn builtin_spec_parses() {
        let s: SystemSpec =
            serde_json::from_str(r#"{"builtin":"nakada","params":{"alpha":0.4}}"#).unwrap();
        assert!(matches!(s.resolve().unwrap(), Builtin::Mobius(..)));
        let s: SystemSpec = serde_json::from_str(r#"{"builtin":"gauss"}"#).unwrap();
        assert_eq!(s, SystemSpec::builtin("gauss", BTreeMap::new()));
    }

    #[test]
    fn explicit_spec_round_trips() {
        let text = r#"{"interval":[0,1],"branches":[
            {"matrix":[1.4142135623730951,0,0,0.7071067811865476],"domain":[0,0.5],"label":"0"},
            {"matrix":[-1,1,1,0],"domain":[0.5,1],"label":"1"}]}"#;
        let spec: SystemSpec = serde_json::from_str(text).unwrap();
        let Builtin::Mobius(sys, _) = spec.resolve().unwrap() else {
            panic!()
        };
        assert_eq!(sys.finite_branches().len(), 2);
        let again = SystemSpec::from_system(&sys).unwrap();
        let back: SystemSpec = serde_json::from_slice(&to_json(&again).unwrap()).unwrap();
        assert_eq!(back, again);
    }

    #[test]
    fn explicit_spec_rejects_bad_branch() {
        let text = r#"{"interval":[0,1],"branches":[{"matrix":[1,2,2,4],"domain":[0,1]}]}"#;
        let spec: SystemSpec = serde_json::from_str(text).unwrap();
        assert!(matches!(spec.resolve(), Err(Error::ZeroDeterminant)));
    }

    #[test]
    fn dump_round_trips() {
        let grid = AttractorGrid::from_fn(Interval::new(0.0, 1.0), 8, |x| {
            FiberSet::interval(0.0, 1.0 / (1.0 + x))
        })
        .unwrap();
        let report = FixedPointReport {
            iterations: 3,
            final_distance: 1e-4,
            k: 1.0,
            n: 10,
        };
        let dump = AttractorDump::new(SystemSpec::builtin("gauss", BTreeMap::new()), &grid, report);
        let bytes = to_json(&dump).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.contains(r#""N":10"#) && text.contains(r#""n_cells":8"#));
        let back: AttractorDump = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, dump);
        assert_eq!(back.grid().unwrap(), grid);
    }

    #[test]
    fn cloud_csv_layout() {
        let cloud = PointCloud {
            form: crate::measure::CloudForm::Skew,
            interval: Interval::new(0.0, 1.0),
            burn: 0,
            seed: None,
            rows: CloudRows::Planar(vec![PlanarRow {
                x: 0.25,
                y: 0.5,
                label: Label::Pair(2, 3),
            }]),
        };
        let text = String::from_utf8(cloud_csv(&cloud).unwrap()).unwrap();
        assert_eq!(
            text,
            "x,y,branch\n2.5000000000000000e-1,5.0000000000000000e-1,2:3\n"
        );
        let table = parse_csv(&text).unwrap();
        assert_eq!(table.numeric(1).unwrap(), vec![0.5]);
    }

    #[test]
    fn malformed_csv() {
        let t = parse_csv("x,y\n1,abc\n").unwrap();
        assert!(matches!(t.numeric(1), Err(Error::BadCsv(_))));
        assert_eq!(parse_csv("").unwrap(), Table::default());
        assert!(matches!(parse_csv("x,y\n1\n"), Err(Error::BadCsv(_))));
    }
}
