//! CSV persistence.
//!
//! ```text
//! kind,pts
//! alphabet,a,b
//! state,1
//! state,2
//! trans,1,a,2,1/2
//! trans,1,a,1,1/2
//! term,2,a
//! ```
//!
//! Records are `kind`, then `alphabet`, then any mix of `state` (one or
//! more ids), `trans,src,label,dst[,weight]` and `term,src,label`. Lines
//! starting with `#` are comments. In a `pts` file a state/label pair with no
//! `trans` rows terminates, so `term` rows are optional.

use std::path::Path;

use crate::error::{Error, Result};
use crate::functor::{Coalgebra, Kind, Row, SystemDesc};
use crate::rational;

/// Parses a system description without validating it.
pub fn parse_desc(text: &str) -> Result<SystemDesc> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut kind = None;
    let mut alphabet = None;
    let mut states = Vec::new();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Syntax {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let err = |message: String| Error::Syntax { line, message };
        let fields: Vec<&str> = record.iter().collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        let tag = fields[0];
        let args = &fields[1..];
        match (tag, kind, &alphabet) {
            ("kind", None, _) => {
                kind = Some(match args {
                    ["lts"] => Kind::Lts,
                    ["pts"] => Kind::Pts,
                    _ => return Err(err("expected `kind,lts` or `kind,pts`".into())),
                });
            }
            (_, None, _) => return Err(err("the first record must be `kind,lts` or `kind,pts`".into())),
            ("kind", Some(_), _) => return Err(err("`kind` given twice".into())),
            ("alphabet", Some(_), None) => {
                alphabet = Some(args.iter().filter(|a| !a.is_empty()).map(|a| a.to_string()).collect::<Vec<_>>());
            }
            (_, Some(_), None) => return Err(err("the second record must be `alphabet,…`".into())),
            ("alphabet", _, Some(_)) => return Err(err("`alphabet` given twice".into())),
            ("state", ..) => {
                if args.is_empty() {
                    return Err(err("`state` needs at least one id".into()));
                }
                states.extend(args.iter().map(|s| s.to_string()));
            }
            ("trans", Some(k), _) => {
                let (src, label, dst, weight) = match (k, args) {
                    (Kind::Lts, [s, a, d]) => (s, a, d, None),
                    (Kind::Pts, [s, a, d, w]) => {
                        (s, a, d, Some(rational::parse(w).map_err(err)?))
                    }
                    (Kind::Lts, _) => return Err(err("expected `trans,src,label,dst`".into())),
                    (Kind::Pts, _) => return Err(err("expected `trans,src,label,dst,probability`".into())),
                };
                rows.push(Row::Trans { src: src.to_string(), label: label.to_string(), dst: dst.to_string(), weight });
            }
            ("term", Some(k), _) => match (k, args) {
                (Kind::Pts, [s, a]) => rows.push(Row::Term { src: s.to_string(), label: a.to_string() }),
                (Kind::Pts, _) => return Err(err("expected `term,src,label`".into())),
                (Kind::Lts, _) => return Err(err("`term` rows are only allowed in pts files".into())),
            },
            (other, ..) => return Err(err(format!("unknown record type `{other}`"))),
        }
    }
    let kind = kind.ok_or(Error::Syntax { line: 1, message: "empty file: missing `kind` record".into() })?;
    let alphabet = alphabet.ok_or(Error::Syntax { line: 2, message: "missing `alphabet` record".into() })?;
    Ok(SystemDesc { kind, alphabet, states, rows })
}

/// Parses and validates.
pub fn load_str(text: &str) -> Result<Coalgebra> {
    Coalgebra::from_desc(&parse_desc(text)?)
}

pub fn load(path: impl AsRef<Path>) -> Result<Coalgebra> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_str(&text)
}

/// The canonical CSV text for `c`.
pub fn to_csv_string(c: &Coalgebra) -> String {
    let desc = c.to_desc();
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, rec: &[&str]| w.write_record(rec).expect("writing to memory");
    write(&mut w, &["kind", desc.kind.as_str()]);
    let mut alphabet = vec!["alphabet"];
    alphabet.extend(desc.alphabet.iter().map(String::as_str));
    write(&mut w, &alphabet);
    for s in &desc.states {
        write(&mut w, &["state", s]);
    }
    for row in &desc.rows {
        match row {
            Row::Trans { src, label, dst, weight: None } => write(&mut w, &["trans", src, label, dst]),
            Row::Trans { src, label, dst, weight: Some(q) } => {
                write(&mut w, &["trans", src, label, dst, &rational::format(q)])
            }
            Row::Term { src, label } => write(&mut w, &["term", src, label]),
        }
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV of UTF-8 fields is UTF-8")
}

pub fn save(c: &Coalgebra, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_csv_string(c)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
