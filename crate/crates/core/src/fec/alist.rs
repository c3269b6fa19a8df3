//! The alist sparse-matrix format.
//!
//! ```text
//! n m
//! max_col_deg max_row_deg
//! <n column degrees>
//! <m row degrees>
//! <n lines: 1-based check indices of each variable>
//! <m lines: 1-based variable indices of each check>
//! ```
//!
//! Zero entries in the index lists are padding and are skipped.

use crate::error::{Error, Result};

/// Parity-check matrix as adjacency lists, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseH {
    pub n_code: usize,
    pub m_checks: usize,
    /// Variables of each check, ascending.
    pub rows: Vec<Vec<usize>>,
    /// Checks of each variable, ascending.
    pub cols: Vec<Vec<usize>>,
}

impl SparseH {
    /// Builds from check rows; column lists are derived.
    pub fn from_rows(n_code: usize, rows: Vec<Vec<usize>>) -> Self {
        let mut cols = vec![Vec::new(); n_code];
        let mut rows = rows;
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            for &v in row.iter() {
                cols[v].push(r);
            }
        }
        Self {
            n_code,
            m_checks: rows.len(),
            rows,
            cols,
        }
    }

    pub fn edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_alist(&self) -> String {
        fn line(list: &[usize], width: usize) -> String {
            let mut v: Vec<String> = list.iter().map(|x| (x + 1).to_string()).collect();
            v.resize(width.max(list.len()).max(1), "0".to_string());
            v.join(" ")
        }
        let degrees = |lists: &[Vec<usize>]| {
            lists.iter().map(|l| l.len().to_string()).collect::<Vec<_>>().join(" ")
        };
        let max_col = self.cols.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![
            format!("{} {}", self.n_code, self.m_checks),
            format!("{max_col} {max_row}"),
            degrees(&self.cols),
            degrees(&self.rows),
        ];
        out.extend(self.cols.iter().map(|c| line(c, max_col)));
        out.extend(self.rows.iter().map(|r| line(r, max_row)));
        out.join("\n") + "\n"
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        loop {
            let Some((i, line)) = self.inner.next() else {
                return Err(Error::Alist {
                    line: 0,
                    msg: format!("unexpected end of input, expected {what}"),
                });
            };
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let nums = trimmed
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Alist {
                        line: line_no,
                        msg: format!("'{t}' is not a non-negative integer in {what}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((line_no, nums));
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Alist {
        line,
        msg: msg.into(),
    }
}

pub fn parse_alist_matrix(text: &str) -> Result<SparseH> {
    let mut lines = Lines {
        inner: text.lines().enumerate().peekable(),
    };
    let (l, header) = lines.next_numbers("header 'n m'")?;
    let [n, m] = header[..] else {
        return Err(err(l, "header must be exactly 'n m'"));
    };
    if n == 0 || m == 0 {
        return Err(err(l, "matrix dimensions must be positive"));
    }
    let (l, maxima) = lines.next_numbers("maximum degrees")?;
    let [max_col, max_row] = maxima[..] else {
        return Err(err(l, "second line must be 'max_col_deg max_row_deg'"));
    };
    let (l, col_deg) = lines.next_numbers("column degrees")?;
    if col_deg.len() != n {
        return Err(err(l, format!("expected {n} column degrees, got {}", col_deg.len())));
    }
    if col_deg.iter().any(|&d| d > max_col) {
        return Err(err(l, "column degree exceeds declared maximum"));
    }
    let (l, row_deg) = lines.next_numbers("row degrees")?;
    if row_deg.len() != m {
        return Err(err(l, format!("expected {m} row degrees, got {}", row_deg.len())));
    }
    if row_deg.iter().any(|&d| d > max_row) {
        return Err(err(l, "row degree exceeds declared maximum"));
    }

    let mut read_lists = |count: usize, degrees: &[usize], bound: usize, what: &str| -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::with_capacity(count);
        for (idx, &deg) in degrees.iter().enumerate() {
            let (l, nums) = lines.next_numbers(what)?;
            let mut list: Vec<usize> = nums.into_iter().filter(|&x| x != 0).collect();
            if list.len() != deg {
                return Err(err(
                    l,
                    format!("{what} {} lists {} entries, degree says {deg}", idx + 1, list.len()),
                ));
            }
            if let Some(&bad) = list.iter().find(|&&x| x > bound) {
                return Err(err(l, format!("index {bad} out of range 1..={bound}")));
            }
            list.iter_mut().for_each(|x| *x -= 1);
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(err(l, format!("duplicate index in {what} {}", idx + 1)));
            }
            out.push(list);
        }
        Ok(out)
    };
    let cols = read_lists(n, &col_deg, m, "column")?;
    let rows = read_lists(m, &row_deg, n, "row")?;

    let derived = SparseH::from_rows(n, rows.clone());
    if derived.cols != cols {
        let bad = (0..n).find(|&c| derived.cols[c] != cols[c]).unwrap_or(0);
        return Err(err(
            0,
            format!("row and column lists disagree at variable {}", bad + 1),
        ));
    }
    Ok(SparseH {
        n_code: n,
        m_checks: m,
        rows,
        cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n2\n2\n1 2\n3 4\n";

    #[test]
    fn parses_toy() {
        let h = parse_alist_matrix(TOY).unwrap();
        assert_eq!(h.n_code, 4);
        assert_eq!(h.m_checks, 2);
        assert_eq!(h.rows, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(h.cols, vec![vec![0], vec![0], vec![1], vec![1]]);
    }

    #[test]
    fn zero_padding_ignored() {
        let padded = "4 2\n1 3\n1 1 1 1\n2 2\n1\n1\n2\n2\n1 2 0\n3 0 4\n";
        assert_eq!(parse_alist_matrix(padded).unwrap(), parse_alist_matrix(TOY).unwrap());
    }

    #[test]
    fn rejects_inconsistent_lists() {
        let bad = "4 2\n1 2\n1 1 1 1\n2 2\n1\n2\n2\n2\n1 2\n3 4\n";
        let e = parse_alist_matrix(bad).unwrap_err();
        assert!(e.to_string().contains("disagree"), "{e}");
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_alist_matrix("").is_err());
        assert!(parse_alist_matrix("4\n").is_err());
        assert!(parse_alist_matrix("4 2\n1 2\n1 1 1\n").is_err());
        assert!(parse_alist_matrix("4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n3\n2\n1 2\n3 4\n").is_err());
        assert!(parse_alist_matrix("4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n2\n2\n1 2\n3 5\n").is_err());
        assert!(parse_alist_matrix("4 x\n").is_err());
    }

    #[test]
    fn writer_round_trips() {
        let h = SparseH::from_rows(6, vec![vec![0, 1, 3], vec![1, 2, 4], vec![0, 4, 5]]);
        assert_eq!(parse_alist_matrix(&h.to_alist()).unwrap(), h);
    }
}
