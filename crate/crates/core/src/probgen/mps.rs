//! MPS interchange.
//!
//! Names are at most 8 characters and start in the fixed-format columns
//! (2, 5, 15, 40). Values are written with 17 significant digits, which is
//! wider than the classic 12-character numeric field, so readers must accept
//! whitespace-separated fields (every mainstream solver does).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::instance::LpInstance;
use crate::densela::{DenseMatrix, Vector};
use crate::{Error, Result};

const OBJ_ROW: &str = "COST";
const RHS_SET: &str = "RHS";
const BOUND_SET: &str = "BND";

fn row_name(i: usize) -> String {
    format!("R{:07}", i + 1)
}

fn col_name(j: usize) -> String {
    format!("X{:07}", j + 1)
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn mps_string(inst: &LpInstance<f64>) -> String {
    let (m, n) = (inst.m(), inst.n());
    let mut s = String::with_capacity(64 * (m * n + 3 * n + m) + 256);
    let name = if inst.meta.kappa > 0.0 {
        format!("LS{m}X{n}")
    } else {
        "LSUP".to_string()
    };
    let _ = writeln!(s, "NAME          {name}");
    let _ = writeln!(s, "ROWS");
    let _ = writeln!(s, " N  {OBJ_ROW}");
    for i in 0..m {
        let _ = writeln!(s, " L  {}", row_name(i));
    }
    let _ = writeln!(s, "COLUMNS");
    for j in 0..n {
        let cn = col_name(j);
        let _ = writeln!(s, "    {cn:<8}  {OBJ_ROW:<8}  {}", num(inst.c[j]));
        for i in 0..m {
            let v = inst.a[(i, j)];
            if v != 0.0 {
                let _ = writeln!(s, "    {cn:<8}  {:<8}  {}", row_name(i), num(v));
            }
        }
    }
    let _ = writeln!(s, "RHS");
    for i in 0..m {
        let _ = writeln!(s, "    {RHS_SET:<8}  {:<8}  {}", row_name(i), num(inst.b[i]));
    }
    let _ = writeln!(s, "BOUNDS");
    for j in 0..n {
        let cn = col_name(j);
        let _ = writeln!(s, " LO {BOUND_SET:<8}  {cn:<8}  {}", num(inst.lower[j]));
        let _ = writeln!(s, " UP {BOUND_SET:<8}  {cn:<8}  {}", num(inst.upper[j]));
    }
    let _ = writeln!(s, "ENDATA");
    s
}

pub fn export_mps(inst: &LpInstance<f64>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, mps_string(inst))?;
    Ok(())
}

pub fn read_mps(path: impl AsRef<Path>) -> Result<LpInstance<f64>> {
    parse_mps(&fs::read_to_string(path)?)
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Bounds,
}

/// Parses the subset of MPS this crate writes: one N row, L and G rows,
/// and LO/UP/FX bounds on every column.
pub fn parse_mps(text: &str) -> Result<LpInstance<f64>> {
    use std::collections::HashMap;

    let mut section = Section::None;
    let mut obj_row: Option<String> = None;
    // Row name -> (index, sign). G rows are negated into L rows.
    let mut rows: HashMap<String, (usize, f64)> = HashMap::new();
    let mut row_count = 0usize;
    let mut cols: HashMap<String, usize> = HashMap::new();
    let mut col_order: Vec<String> = Vec::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut cost: Vec<f64> = Vec::new();
    let mut rhs: HashMap<usize, f64> = HashMap::new();
    let mut lower: HashMap<usize, f64> = HashMap::new();
    let mut upper: HashMap<usize, f64> = HashMap::new();
    let mut ended = false;

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let perr = |message: String| Error::Parse { line: line_no, message };
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') {
            section = match fields[0] {
                "NAME" => Section::None,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => {
                    ended = true;
                    break;
                }
                other => return Err(perr(format!("unsupported section {other}"))),
            };
            continue;
        }
        let number = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| perr(format!("bad number {s:?}")))
        };
        match section {
            Section::Rows => {
                if fields.len() != 2 {
                    return Err(perr("ROWS entry needs type and name".into()));
                }
                match fields[0] {
                    "N" if obj_row.is_none() => obj_row = Some(fields[1].to_string()),
                    "N" => {}
                    "L" | "G" => {
                        let sign = if fields[0] == "L" { 1.0 } else { -1.0 };
                        rows.insert(fields[1].to_string(), (row_count, sign));
                        row_count += 1;
                    }
                    t => return Err(perr(format!("unsupported row type {t}"))),
                }
            }
            Section::Columns => {
                if fields.len() < 3 || fields.len().is_multiple_of(2) {
                    return Err(perr("COLUMNS entry needs column and (row, value) pairs".into()));
                }
                let j = *cols.entry(fields[0].to_string()).or_insert_with(|| {
                    col_order.push(fields[0].to_string());
                    cost.push(0.0);
                    col_order.len() - 1
                });
                for pair in fields[1..].chunks(2) {
                    let v = number(pair[1])?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        cost[j] = v;
                    } else if let Some(&(i, sign)) = rows.get(pair[0]) {
                        entries.push((i, j, sign * v));
                    } else {
                        return Err(perr(format!("unknown row {}", pair[0])));
                    }
                }
            }
            Section::Rhs => {
                if fields.len() < 3 || fields.len().is_multiple_of(2) {
                    return Err(perr("RHS entry needs set name and (row, value) pairs".into()));
                }
                for pair in fields[1..].chunks(2) {
                    let v = number(pair[1])?;
                    if let Some(&(i, sign)) = rows.get(pair[0]) {
                        rhs.insert(i, sign * v);
                    } else if Some(pair[0]) != obj_row.as_deref() {
                        return Err(perr(format!("unknown row {}", pair[0])));
                    }
                }
            }
            Section::Bounds => {
                if fields.len() != 4 {
                    return Err(perr("BOUNDS entry needs type, set, column, value".into()));
                }
                let j = *cols
                    .get(fields[2])
                    .ok_or_else(|| perr(format!("unknown column {}", fields[2])))?;
                let v = number(fields[3])?;
                match fields[0] {
                    "LO" => {
                        lower.insert(j, v);
                    }
                    "UP" => {
                        upper.insert(j, v);
                    }
                    "FX" => {
                        lower.insert(j, v);
                        upper.insert(j, v);
                    }
                    t => return Err(perr(format!("unsupported bound type {t}"))),
                }
            }
            Section::None => return Err(perr("data outside a section".into())),
        }
    }
    if !ended {
        return Err(Error::Parse { line: text.lines().count(), message: "missing ENDATA".into() });
    }
    let (m, n) = (row_count, col_order.len());
    let mut a = DenseMatrix::zeros(m, n);
    for (i, j, v) in entries {
        a[(i, j)] = v;
    }
    let b: Vec<f64> = (0..m).map(|i| rhs.get(&i).copied().unwrap_or(0.0)).collect();
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for (j, name) in col_order.iter().enumerate() {
        match (lower.get(&j), upper.get(&j)) {
            (Some(&l), Some(&u)) => {
                lo.push(l);
                hi.push(u);
            }
            _ => {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("column {name} needs finite lower and upper bounds"),
                })
            }
        }
    }
    LpInstance::from_parts(a, Vector::new(b)?, Vector::new(cost)?, Vector::new(lo)?, Vector::new(hi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probgen::generate_instance;

    fn tiny() -> LpInstance<f64> {
        LpInstance::from_parts(
            DenseMatrix::from_rows(&[vec![2.0]]).unwrap(),
            Vector::new(vec![3.0]).unwrap(),
            Vector::new(vec![1.0]).unwrap(),
            Vector::new(vec![-100.0]).unwrap(),
            Vector::new(vec![100.0]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn tiny_round_trip() {
        let inst = tiny();
        let text = mps_string(&inst);
        let back = parse_mps(&text).unwrap();
        assert_eq!(back.a, inst.a);
        assert_eq!(back.b, inst.b);
        assert_eq!(back.c, inst.c);
        assert_eq!(back.lower, inst.lower);
        assert_eq!(back.upper, inst.upper);
    }

    #[test]
    fn fixed_columns_for_names() {
        let text = mps_string(&tiny());
        let col_line = text.lines().find(|l| l.contains("R0000001") && l.starts_with("    X")).unwrap();
        assert_eq!(&col_line[4..12], "X0000001");
        assert_eq!(&col_line[14..22], "R0000001");
        assert_eq!(&col_line[24..25], "2");
        let lo = text.lines().find(|l| l.starts_with(" LO")).unwrap();
        assert_eq!(&lo[1..3], "LO");
        assert_eq!(&lo[4..7], "BND");
        assert_eq!(&lo[14..22], "X0000001");
    }

    #[test]
    fn generated_round_trip_is_bit_exact() {
        let inst = generate_instance::<f64>(5, 7, 1e3, 3).unwrap();
        let back = parse_mps(&mps_string(&inst)).unwrap();
        assert_eq!(back.a.as_slice(), inst.a.as_slice());
        assert_eq!(back.b, inst.b);
        assert_eq!(back.c, inst.c);
    }

    #[test]
    fn sections_and_row_counts() {
        let text = mps_string(&generate_instance::<f64>(4, 6, 1.0, 3).unwrap());
        let heads: Vec<&str> = text.lines().filter(|l| !l.starts_with(' ')).collect();
        assert_eq!(heads[1..], ["ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"]);
        assert_eq!(text.lines().filter(|l| l.starts_with(" L  ")).count(), 4);
        assert_eq!(text.lines().filter(|l| l.starts_with(" N  ")).count(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_mps("ROWS\n N  COST\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_mps("ROWS\n Q  X\nENDATA\n"), Err(Error::Parse { line: 2, .. })));
        let text = mps_string(&tiny()).replace("2.0000000000000000e0", "abc");
        assert!(matches!(parse_mps(&text), Err(Error::Parse { .. })));
    }
}
