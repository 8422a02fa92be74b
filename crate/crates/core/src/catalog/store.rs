//! Line-delimited catalog files: a header line, then one JSON record per line.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Catalog, CatalogRecord};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
const FORMAT: &str = "doems-catalog";

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    schema_version: u32,
    p: u32,
    n: usize,
    records: usize,
    /// Hex SHA-256 of every record line, each terminated by a newline.
    sha256: String,
}

/// `p{p}n{n}.jsonl`
pub fn layer_file_name(p: u32, n: usize) -> String {
    format!("p{p}n{n}.jsonl")
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::CorruptStore(msg.into())
}

/// Writes the canonical export. Output depends only on the records.
pub fn export_catalog(catalog: &Catalog, mut out: impl Write) -> Result<()> {
    let mut body = String::new();
    for r in catalog.records() {
        body.push_str(&serde_json::to_string(r).expect("records serialize"));
        body.push('\n');
    }
    let header = Header {
        format: FORMAT.to_string(),
        schema_version: SCHEMA_VERSION,
        p: catalog.p(),
        n: catalog.n(),
        records: catalog.len(),
        sha256: hex::encode(Sha256::digest(body.as_bytes())),
    };
    writeln!(
        out,
        "{}",
        serde_json::to_string(&header).expect("header serializes")
    )?;
    out.write_all(body.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Reads an export, checking schema, record count, and checksum.
pub fn import_catalog(input: impl Read) -> Result<Catalog> {
    let mut reader = BufReader::new(input);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    if first.is_empty() {
        return Err(corrupt("empty catalog file"));
    }
    let header: Header =
        serde_json::from_str(first.trim_end()).map_err(|e| corrupt(format!("bad header: {e}")))?;
    if header.format != FORMAT {
        return Err(corrupt(format!("unknown format {:?}", header.format)));
    }
    if header.schema_version != SCHEMA_VERSION {
        return Err(corrupt(format!(
            "schema version {} (expected {SCHEMA_VERSION})",
            header.schema_version
        )));
    }
    let mut body = String::new();
    reader.read_to_string(&mut body)?;
    if hex::encode(Sha256::digest(body.as_bytes())) != header.sha256 {
        return Err(corrupt("checksum mismatch"));
    }
    let records = body
        .lines()
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str::<CatalogRecord>(line)
                .map_err(|e| corrupt(format!("record line {}: {e}", i + 2)))
        })
        .collect::<Result<Vec<_>>>()?;
    if records.len() != header.records {
        return Err(corrupt(format!(
            "header promises {} records, found {}",
            header.records,
            records.len()
        )));
    }
    Catalog::from_records(header.p, header.n, records).map_err(|e| corrupt(e.to_string()))
}

/// Exports into `dir`, returning the file written.
pub fn write_catalog(catalog: &Catalog, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(layer_file_name(catalog.p(), catalog.n()));
    let tmp = path.with_extension("jsonl.tmp");
    {
        let file = fs::File::create(&tmp)?;
        export_catalog(catalog, std::io::BufWriter::new(file))?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Imports the (p, n) file from `dir`.
pub fn read_catalog(dir: &Path, p: u32, n: usize) -> Result<Catalog> {
    let path = dir.join(layer_file_name(p, n));
    let file = fs::File::open(&path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => {
            Error::NotFound(format!("no catalog for p={p}, n={n} at {}", path.display()))
        }
        _ => Error::Io(e),
    })?;
    let catalog = import_catalog(file)?;
    if catalog.p() != p || catalog.n() != n {
        return Err(corrupt(format!(
            "{} holds p={}, n={}",
            path.display(),
            catalog.p(),
            catalog.n()
        )));
    }
    Ok(catalog)
}
