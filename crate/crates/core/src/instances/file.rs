//! Plain-text instance files: one `t,p` pair per line, `#` comment lines.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::job::Instance;

/// Parses an instance. Job ids follow the order of the data lines; comment
/// lines and blank lines are skipped.
pub fn read_instance<R: Read>(input: R) -> Result<Instance> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut pairs = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected `t,p`, found {} fields", record.len()),
            });
        }
        let field = |i: usize| -> Result<f64> {
            record[i].parse::<f64>().map_err(|e| Error::Parse {
                line,
                message: format!("`{}`: {e}", &record[i]),
            })
        };
        pairs.push((field(0)?, field(1)?));
    }
    Instance::from_pairs(pairs)
}

/// Writes one `t,p` line per job after a `# t,p` comment naming the columns.
pub fn write_instance<W: Write>(instance: &Instance, mut out: W) -> Result<()> {
    writeln!(out, "# t,p")?;
    for job in instance.jobs() {
        writeln!(out, "{},{}", job.test_time, job.processing_time)?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    read_instance(BufReader::new(File::open(path)?))
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    write_instance(instance, BufWriter::new(File::create(path)?))
}
