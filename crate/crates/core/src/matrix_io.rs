//! Line-oriented text format shared by GF(2) and GF(2^m) matrices.
//!
//! ```text
//! ROWS COLS [M]
//! e00 e01 ...
//! ...
//! ```
//! `M` is omitted for GF(2). Entries are lowercase hex without a prefix.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::gf2m::{GfField, GfMatrix};

/// A matrix read from text, either binary or over an extension field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMatrix {
    Binary(BitMatrix),
    Extension(GfMatrix),
}

pub fn format_bit_matrix(m: &BitMatrix) -> String {
    let mut s = format!("{} {}\n", m.rows(), m.cols());
    for row in m.to_rows() {
        let line: Vec<&str> = row.iter().map(|&b| if b == 1 { "1" } else { "0" }).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn format_gf_matrix(m: &GfMatrix) -> String {
    let mut s = format!("{} {} {}\n", m.rows(), m.cols(), m.field().degree());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                s.push(' ');
            }
            write!(s, "{:x}", m.get(i, j).expect("in range")).unwrap();
        }
        s.push('\n');
    }
    s
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        reason: format!("bad {what} `{tok}`"),
    })
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing header".into(),
    })?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 && head.len() != 3 {
        return Err(Error::Parse {
            line: hl,
            reason: "header must be `ROWS COLS [M]`".into(),
        });
    }
    let rows = parse_usize(head[0], hl, "row count")?;
    let cols = parse_usize(head[1], hl, "column count")?;
    if rows == 0 || cols == 0 {
        return Err(Error::Parse {
            line: hl,
            reason: "dimensions must be positive".into(),
        });
    }
    let field = match head.get(2) {
        None => None,
        Some(t) => {
            let m = parse_usize(t, hl, "extension degree")? as u32;
            Some(GfField::new(m).map_err(|e| Error::Parse {
                line: hl,
                reason: e.to_string(),
            })?)
        }
    };
    let limit = field.map_or(2, |f| f.order());

    let mut data: Vec<Vec<u32>> = Vec::with_capacity(rows);
    for (ln, l) in lines {
        if data.len() == rows {
            return Err(Error::Parse {
                line: ln,
                reason: format!("more than {rows} rows"),
            });
        }
        let row = l
            .split_whitespace()
            .map(|t| {
                u32::from_str_radix(t, 16)
                    .ok()
                    .filter(|&v| v < limit)
                    .ok_or_else(|| Error::Parse {
                        line: ln,
                        reason: format!("bad entry `{t}`"),
                    })
            })
            .collect::<Result<Vec<u32>>>()?;
        if row.len() != cols {
            return Err(Error::Parse {
                line: ln,
                reason: format!("expected {cols} entries, found {}", row.len()),
            });
        }
        data.push(row);
    }
    if data.len() != rows {
        return Err(Error::Parse {
            line: text.lines().count(),
            reason: format!("expected {rows} rows, found {}", data.len()),
        });
    }
    match field {
        None => {
            let bytes: Vec<Vec<u8>> = data
                .into_iter()
                .map(|r| r.into_iter().map(|v| v as u8).collect())
                .collect();
            Ok(AnyMatrix::Binary(BitMatrix::from_rows(&bytes)?))
        }
        Some(f) => Ok(AnyMatrix::Extension(GfMatrix::from_rows(f, &data)?)),
    }
}

pub fn parse_bit_matrix(text: &str) -> Result<BitMatrix> {
    match parse_matrix(text)? {
        AnyMatrix::Binary(m) => Ok(m),
        AnyMatrix::Extension(_) => Err(Error::Parse {
            line: 1,
            reason: "expected a GF(2) matrix".into(),
        }),
    }
}

pub fn read_bit_matrix(path: &Path) -> Result<BitMatrix> {
    parse_bit_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_bit_matrix(path: &Path, m: &BitMatrix) -> Result<()> {
    std::fs::write(path, format_bit_matrix(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    #[test]
    fn binary_format_is_exact() {
        let m = BitMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let text = format_bit_matrix(&m);
        assert_eq!(text, "2 3\n1 0 1\n0 1 1\n");
        assert_eq!(parse_bit_matrix(&text).unwrap(), m);
    }

    #[test]
    fn extension_format_is_exact() {
        let f = GfField::new(4).unwrap();
        let m = GfMatrix::from_rows(f, &[vec![0xf, 0], vec![3, 0xa]]).unwrap();
        let text = format_gf_matrix(&m);
        assert_eq!(text, "2 2 4\nf 0\n3 a\n");
        assert_eq!(parse_matrix(&text).unwrap(), AnyMatrix::Extension(m));
    }

    #[test]
    fn malformed_input_reports_line() {
        assert!(matches!(
            parse_matrix("2 2\n1 0\n1 2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_matrix("2 2\n1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_matrix("1 2 2\n1 4\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_matrix("0 2\n").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(rows in 1usize..12, cols in 1usize..80, seed: u64, m in 1u32..9) {
            let mut rng = seeded(seed);
            let b = BitMatrix::random(rows, cols, &mut rng);
            prop_assert_eq!(parse_bit_matrix(&format_bit_matrix(&b)).unwrap(), b);
            let f = GfField::new(m).unwrap();
            let g = GfMatrix::random(f, rows, cols.min(10), &mut rng);
            prop_assert_eq!(parse_matrix(&format_gf_matrix(&g)).unwrap(), AnyMatrix::Extension(g));
        }
    }
}
