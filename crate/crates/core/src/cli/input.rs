use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A column given by header name or by 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
}

impl FromStr for ColumnRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty column reference".into()));
        }
        match s.parse::<usize>() {
            Ok(0) => Err(Error::InvalidArgument("column positions start at 1".into())),
            Ok(i) => Ok(ColumnRef::Index(i)),
            Err(_) => Ok(ColumnRef::Name(s.to_string())),
        }
    }
}

impl std::fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnRef::Name(n) => write!(f, "{n:?}"),
            ColumnRef::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum HeaderMode {
    /// Header if any field of the first row is not a number.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Columns {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub groups: Option<Vec<String>>,
    /// Source line of each row.
    pub lines: Vec<u64>,
}

fn resolve(col: &ColumnRef, header: Option<&csv::StringRecord>) -> Result<usize> {
    match (col, header) {
        (ColumnRef::Index(i), _) => Ok(i - 1),
        (ColumnRef::Name(name), Some(h)) => h
            .iter()
            .position(|f| f == name)
            .ok_or_else(|| Error::ColumnNotFound(name.clone())),
        (ColumnRef::Name(name), None) => Err(Error::ColumnNotFound(format!("{name} (input has no header)"))),
    }
}

fn field<'r>(rec: &'r csv::StringRecord, i: usize, col: &ColumnRef, line: u64) -> Result<&'r str> {
    rec.get(i).ok_or_else(|| Error::ParseError {
        line,
        message: format!("row has {} fields, column {col} missing", rec.len()),
    })
}

fn number(s: &str, line: u64) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(Error::ParseError {
            line,
            message: format!("non-finite value {s:?}"),
        }),
        Err(_) => Err(Error::ParseError {
            line,
            message: format!("not a number: {s:?}"),
        }),
    }
}

/// Reads x, y and an optional group column from a comma-separated file.
pub fn load_columns(
    path: &Path,
    x: &ColumnRef,
    y: &ColumnRef,
    group: Option<&ColumnRef>,
    header: HeaderMode,
) -> Result<Columns> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.display().to_string()),
        _ => Error::from(e),
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::ParseError {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push(rec);
    }

    let has_header = match header {
        HeaderMode::Present => true,
        HeaderMode::Absent => false,
        HeaderMode::Auto => records
            .first()
            .is_some_and(|r| r.iter().any(|f| f.parse::<f64>().is_err())),
    };
    let head = if has_header && !records.is_empty() {
        Some(records.remove(0))
    } else {
        None
    };

    let xi = resolve(x, head.as_ref())?;
    let yi = resolve(y, head.as_ref())?;
    let gi = group.map(|g| resolve(g, head.as_ref())).transpose()?;

    let mut out = Columns {
        xs: Vec::with_capacity(records.len()),
        ys: Vec::with_capacity(records.len()),
        groups: gi.map(|_| Vec::with_capacity(records.len())),
        lines: Vec::with_capacity(records.len()),
    };
    for rec in &records {
        let line = rec.position().map_or(0, |p| p.line());
        out.xs.push(number(field(rec, xi, x, line)?, line)?);
        out.ys.push(number(field(rec, yi, y, line)?, line)?);
        if let (Some(i), Some(g), Some(groups)) = (gi, group, out.groups.as_mut()) {
            groups.push(field(rec, i, g, line)?.to_string());
        }
        out.lines.push(line);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn cols(f: &tempfile::NamedTempFile, x: &str, y: &str, g: Option<&str>) -> Result<Columns> {
        let g = g.map(|g| g.parse().unwrap());
        load_columns(f.path(), &x.parse()?, &y.parse()?, g.as_ref(), HeaderMode::Auto)
    }

    #[test]
    fn header_detection() {
        let f = write("a,b\n0.5,2\n1,3\n2,1\n");
        let c = cols(&f, "a", "b", None).unwrap();
        assert_eq!(c.xs, vec![0.5, 1.0, 2.0]);
        assert_eq!(c.lines, vec![2, 3, 4]);
        let f = write("0.5,2\n1,3\n");
        let c = cols(&f, "1", "2", None).unwrap();
        assert_eq!(c.ys, vec![2.0, 3.0]);
        assert!(matches!(cols(&f, "a", "2", None), Err(Error::ColumnNotFound(_))));
    }

    #[test]
    fn groups_and_whitespace() {
        let f = write("site, x, y\nA, 1, 2\nB , 3,4\n");
        let c = cols(&f, "x", "y", Some("site")).unwrap();
        assert_eq!(c.groups, Some(vec!["A".to_string(), "B".to_string()]));
        assert_eq!(c.xs, vec![1.0, 3.0]);
    }

    #[test]
    fn errors_name_the_line() {
        let f = write("x,y\n1,2\n1.2,abc\n");
        assert_eq!(
            cols(&f, "x", "y", None),
            Err(Error::ParseError {
                line: 3,
                message: "not a number: \"abc\"".into()
            })
        );
        let f = write("x,y\n1,2\n3\n");
        assert!(matches!(cols(&f, "x", "y", None), Err(Error::ParseError { line: 3, .. })));
        let f = write("x,y\n1,inf\n");
        assert!(matches!(cols(&f, "x", "y", None), Err(Error::ParseError { line: 2, .. })));
        assert!(matches!(cols(&f, "x", "z", None), Err(Error::ColumnNotFound(_))));
        let missing = load_columns(
            Path::new("/nonexistent/file.csv"),
            &ColumnRef::Index(1),
            &ColumnRef::Index(2),
            None,
            HeaderMode::Auto,
        );
        assert!(matches!(missing, Err(Error::FileNotFound(_))));
        assert!("0".parse::<ColumnRef>().is_err());
    }
}
