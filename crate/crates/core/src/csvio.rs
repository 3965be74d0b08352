use crate::{Error, Result};

/// Header line plus comma-separated rows, `\n` terminated.
pub(crate) fn write_table<I, R>(header: &str, rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header.split(','))?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// Rows after an exact header match, each with its 1-based line number.
pub(crate) fn read_table(text: &str, header: &str) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let mut records = r.records();
    match records.next() {
        Some(Ok(h)) if h.iter().eq(header.split(',')) => {}
        Some(Ok(h)) => {
            let found: Vec<&str> = h.iter().collect();
            return Err(Error::Parse { line: 1, message: format!("unexpected header {:?}", found.join(",")) });
        }
        Some(Err(e)) => return Err(parse_error(e)),
        None => return Err(Error::Parse { line: 1, message: "empty file".into() }),
    }
    records
        .map(|rec| {
            let rec = rec.map_err(parse_error)?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            Ok((line, rec))
        })
        .collect()
}

fn parse_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse { line, message: e.to_string() }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        parse_error(e)
    }
}
