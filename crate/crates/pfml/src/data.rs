//! CSV formats: response matrices, item parameters, abilities and plain
//! numeric tables.
//!
//! Response files have a header row of item ids and one row per student:
//! the student id followed by `1` (correct), `0` (incorrect) or `N`
//! (missing) for every item.

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use pfml_core::estimation::{Response, ResponseMatrix};
use pfml_core::{Ability, ItemParams};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Model(#[from] pfml_core::Error),
}

fn open(path: &Path) -> Result<File, DataError> {
    File::open(path).map_err(|source| DataError::Io {
        path: path.to_owned(),
        source,
    })
}

fn create(path: &Path) -> Result<File, DataError> {
    File::create(path).map_err(|source| DataError::Io {
        path: path.to_owned(),
        source,
    })
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input)
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn parse_error(line: u64, message: impl Into<String>) -> DataError {
    DataError::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a response matrix, reporting the line of the first problem.
pub fn parse_responses<R: Read>(input: R) -> Result<ResponseMatrix, DataError> {
    let mut records = reader(input).into_records();
    let header = match records.next() {
        Some(r) => r?,
        None => return Err(DataError::Format("response file is empty".into())),
    };
    let item_ids: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    if item_ids.is_empty() {
        return Err(parse_error(line_of(&header), "header lists no items"));
    }
    let mut seen = HashSet::new();
    for id in &item_ids {
        if id.is_empty() || !seen.insert(id.as_str()) {
            return Err(parse_error(line_of(&header), format!("duplicate or empty item id `{id}`")));
        }
    }
    let mut student_ids = Vec::new();
    let mut students = HashSet::new();
    let mut cells = Vec::new();
    for record in records {
        let record = record?;
        let line = line_of(&record);
        if record.len() != item_ids.len() + 1 {
            return Err(parse_error(
                line,
                format!("expected {} fields, found {}", item_ids.len() + 1, record.len()),
            ));
        }
        let id = &record[0];
        if id.is_empty() || !students.insert(id.to_owned()) {
            return Err(parse_error(line, format!("duplicate or empty student id `{id}`")));
        }
        for (k, cell) in record.iter().skip(1).enumerate() {
            let r = Response::from_symbol(cell).ok_or_else(|| {
                parse_error(
                    line,
                    format!("student `{id}`, item `{}`: unknown cell `{cell}` (expected 1, 0 or N)", item_ids[k]),
                )
            })?;
            cells.push(r);
        }
        student_ids.push(id.to_owned());
    }
    if student_ids.is_empty() {
        return Err(DataError::Format("response file has no data rows".into()));
    }
    Ok(ResponseMatrix::new(student_ids, item_ids, cells)?)
}

pub fn ingest_responses(path: &Path) -> Result<ResponseMatrix, DataError> {
    parse_responses(open(path)?)
}

pub fn write_responses<W: Write>(out: W, m: &ResponseMatrix) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["student".to_owned()];
    header.extend(m.item_ids().iter().cloned());
    w.write_record(&header)?;
    for (s, id) in m.student_ids().iter().enumerate() {
        let mut row = vec![id.clone()];
        row.extend(m.row(s).iter().map(|r| r.symbol().to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn save_responses(path: &Path, m: &ResponseMatrix) -> Result<(), DataError> {
    write_responses(create(path)?, m)
}

/// Table with the given header, an id column and numeric cells.
fn read_table(path: &Path, header: &[&str]) -> Result<Vec<(String, Vec<f64>)>, DataError> {
    let mut records = reader(open(path)?).into_records();
    let first = match records.next() {
        Some(r) => r?,
        None => return Err(DataError::Format(format!("{} is empty", path.display()))),
    };
    if first.iter().collect::<Vec<_>>() != header {
        return Err(parse_error(line_of(&first), format!("expected header {}", header.join(","))));
    }
    let mut rows = Vec::new();
    for record in records {
        let record = record?;
        let line = line_of(&record);
        if record.len() != header.len() {
            return Err(parse_error(line, format!("expected {} fields, found {}", header.len(), record.len())));
        }
        let values = record
            .iter()
            .skip(1)
            .map(|v| v.parse::<f64>().map_err(|_| parse_error(line, format!("`{v}` is not a number"))))
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push((record[0].to_owned(), values));
    }
    Ok(rows)
}

pub fn save_items(path: &Path, ids: &[String], items: &[ItemParams]) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["item", "a", "b", "c"])?;
    for (id, it) in ids.iter().zip(items) {
        w.write_record([id.clone(), it.a().to_string(), it.b().to_string(), it.c().to_string()])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn load_items(path: &Path) -> Result<(Vec<String>, Vec<ItemParams>), DataError> {
    let rows = read_table(path, &["item", "a", "b", "c"])?;
    let mut ids = Vec::with_capacity(rows.len());
    let mut items = Vec::with_capacity(rows.len());
    for (id, v) in rows {
        items.push(ItemParams::new(v[0], v[1], v[2])?);
        ids.push(id);
    }
    Ok((ids, items))
}

pub fn save_abilities(path: &Path, ids: &[String], abilities: &[Ability]) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["student", "theta"])?;
    for (id, t) in ids.iter().zip(abilities) {
        w.write_record([id.clone(), t.get().to_string()])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn load_abilities(path: &Path) -> Result<(Vec<String>, Vec<Ability>), DataError> {
    let rows = read_table(path, &["student", "theta"])?;
    let mut ids = Vec::with_capacity(rows.len());
    let mut thetas = Vec::with_capacity(rows.len());
    for (id, v) in rows {
        thetas.push(Ability::new(v[0])?);
        ids.push(id);
    }
    Ok((ids, thetas))
}

/// Writes a header plus rows of already formatted cells.
pub fn save_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads a table written by [`save_table`] as raw strings.
pub fn load_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), DataError> {
    let mut records = reader(open(path)?).into_records();
    let header: Vec<String> = match records.next() {
        Some(r) => r?.iter().map(str::to_owned).collect(),
        None => return Err(DataError::Format(format!("{} is empty", path.display()))),
    };
    let mut rows = Vec::new();
    for record in records {
        let record = record?;
        rows.push(record.iter().map(str::to_owned).collect());
    }
    Ok((header, rows))
}

/// Empty string for an undefined value.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Response::*;

    #[test]
    fn reads_three_students() {
        let text = "id,I1,I2,I3\nS1,1,0,N\nS2,0,N,1\nS3,N,1,1\n";
        let m = parse_responses(text.as_bytes()).unwrap();
        assert_eq!(m.n_students(), 3);
        assert_eq!(m.row(0), &[Correct, Incorrect, Missing]);
        assert_eq!(m.row(2), &[Missing, Correct, Correct]);
        let mut out = Vec::new();
        write_responses(&mut out, &m).unwrap();
        assert_eq!(parse_responses(out.as_slice()).unwrap(), m);
    }

    fn err(text: &str) -> String {
        parse_responses(text.as_bytes()).unwrap_err().to_string()
    }

    #[test]
    fn reports_bad_input_with_line() {
        assert!(err("id,I1\n").contains("no data rows"));
        assert!(err("").contains("empty"));
        let msg = err("id,I1,I2\nS1,1,0\nS2,1,2\n");
        assert!(msg.starts_with("line 3") && msg.contains("`S2`") && msg.contains("`I2`"), "{msg}");
        assert!(err("id,I1,I2\nS1,1\n").starts_with("line 2"));
        assert!(err("id,I1,I2\nS1,1,0\nS1,0,1\n").contains("duplicate"));
        assert!(err("id,I1,I1\nS1,1,0\n").contains("duplicate"));
    }

    #[test]
    fn item_and_ability_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let ids = vec!["I1".to_owned(), "I2".to_owned()];
        let items = vec![ItemParams::new(0.96, 0.59, 0.23).unwrap(), ItemParams::new(1.0, -0.1, 0.2).unwrap()];
        let p = dir.path().join("items.csv");
        save_items(&p, &ids, &items).unwrap();
        assert_eq!(load_items(&p).unwrap(), (ids.clone(), items));
        let thetas = vec![Ability::new(0.3).unwrap(), Ability::new(-1.7).unwrap()];
        let p = dir.path().join("abilities.csv");
        save_abilities(&p, &ids, &thetas).unwrap();
        assert_eq!(load_abilities(&p).unwrap(), (ids, thetas));
    }
}
