//! Cell-list CSV: one column per binary variable plus a final `count`
//! column, one row per cell. Cells not listed count as zero.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use casecontrol_core::{ContingencyTable, Schema};

use crate::error::{CliError, CliResult};

pub fn read_table<R: Read>(reader: R) -> CliResult<ContingencyTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| CliError::data(format!("cannot read header: {e}")))?
        .clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 2 || !cols[cols.len() - 1].eq_ignore_ascii_case("count") {
        return Err(CliError::data(
            "header must list the variables followed by a `count` column",
        ));
    }
    let schema = Schema::new(cols[..cols.len() - 1].iter().copied())?;
    let k = schema.len();
    let mut counts = vec![0.0; schema.cells()];
    let mut seen = HashSet::new();
    let mut rows = 0usize;
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::data(format!("line {line}: {e}")))?;
        if rec.len() != k + 1 {
            return Err(CliError::data(format!(
                "line {line}: expected {} fields, found {}",
                k + 1,
                rec.len()
            )));
        }
        let mut levels = Vec::with_capacity(k);
        for (j, field) in rec.iter().take(k).enumerate() {
            match field {
                "0" => levels.push(0u8),
                "1" => levels.push(1u8),
                other => {
                    return Err(CliError::data(format!(
                        "line {line}: unknown level `{other}` for `{}` (expected 0 or 1)",
                        schema.name(j)
                    )))
                }
            }
        }
        let raw = &rec[k];
        let count: f64 = raw
            .parse()
            .map_err(|_| CliError::data(format!("line {line}: count `{raw}` is not a number")))?;
        if !count.is_finite() {
            return Err(CliError::data(format!("line {line}: count must be finite")));
        }
        if count < 0.0 {
            return Err(CliError::data(format!(
                "line {line}: negative count {count}"
            )));
        }
        let idx = schema.index(&levels);
        if !seen.insert(idx) {
            return Err(CliError::data(format!(
                "line {line}: duplicate row for this cell"
            )));
        }
        counts[idx] = count;
        rows += 1;
    }
    if rows == 0 {
        return Err(CliError::data("no data rows"));
    }
    Ok(ContingencyTable::new(schema, counts)?)
}

pub fn read_table_path(path: &Path) -> CliResult<ContingencyTable> {
    if path.as_os_str() == "-" {
        return read_table(std::io::stdin().lock());
    }
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::data(format!("cannot open {}: {e}", path.display())))?;
    read_table(file)
}

/// Every cell in lexicographic order, first variable most significant.
pub fn write_table<W: Write>(t: &ContingencyTable, out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = t.schema().names().iter().map(String::as_str).collect();
    header.push("count");
    let io = |e: csv::Error| CliError::data(e.to_string());
    w.write_record(&header).map_err(io)?;
    for (levels, count) in t.iter() {
        let mut row: Vec<String> = levels.iter().map(|l| l.to_string()).collect();
        row.push(format!("{count}"));
        w.write_record(&row).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn table_to_csv(t: &ContingencyTable) -> String {
    let mut buf = Vec::new();
    write_table(t, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is UTF-8")
}
