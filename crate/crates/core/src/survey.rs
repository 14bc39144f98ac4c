//! Respondent-by-item rating matrices and their CSV representation.
//!
//! The CSV layout is one header row of item names followed by one row per
//! respondent. Cells equal to the missing token become [`None`].

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freq::FrequencyTable;
use crate::scale::RatingScale;

#[derive(Debug, Clone, PartialEq)]
pub struct RatingMatrix {
    items: Vec<String>,
    rows: Vec<Vec<Option<u32>>>,
    scale: RatingScale,
}

impl RatingMatrix {
    pub fn new(
        items: Vec<String>,
        rows: Vec<Vec<Option<u32>>>,
        scale: RatingScale,
    ) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::Validation(
                "a rating matrix needs at least one item".into(),
            ));
        }
        if rows.is_empty() {
            return Err(Error::Validation(
                "a rating matrix needs at least one respondent".into(),
            ));
        }
        let mut seen = HashSet::new();
        for item in &items {
            if !seen.insert(item.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate item identifier `{item}`"
                )));
            }
        }
        for (j, row) in rows.iter().enumerate() {
            if row.len() != items.len() {
                return Err(Error::Validation(format!(
                    "row {j} has {} ratings for {} items",
                    row.len(),
                    items.len()
                )));
            }
            for (k, v) in row.iter().enumerate() {
                if let Some(r) = v {
                    if !scale.contains(*r) {
                        return Err(Error::Validation(format!(
                            "row {j}, item `{}`: rating {r} outside 1..={}",
                            items[k],
                            scale.categories()
                        )));
                    }
                }
            }
        }
        Ok(Self { items, rows, scale })
    }

    /// Builds a matrix from complete columns of equal length.
    pub fn from_columns(
        items: Vec<String>,
        columns: &[Vec<u32>],
        scale: RatingScale,
    ) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Validation("columns have different lengths".into()));
        }
        let rows = (0..n)
            .map(|j| columns.iter().map(|c| Some(c[j])).collect())
            .collect();
        Self::new(items, rows, scale)
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn rows(&self) -> &[Vec<Option<u32>>] {
        &self.rows
    }

    pub fn scale(&self) -> &RatingScale {
        &self.scale
    }

    /// Number of respondents.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Number of items.
    pub fn k(&self) -> usize {
        self.items.len()
    }

    pub fn item_index(&self, item_id: &str) -> Option<usize> {
        self.items.iter().position(|i| i == item_id)
    }

    /// Non-missing ratings of item `k`.
    pub fn observed(&self, k: usize) -> Vec<u32> {
        self.rows.iter().filter_map(|row| row[k]).collect()
    }

    /// Rows without missing ratings, with their original index.
    pub fn complete_rows(&self) -> impl Iterator<Item = (usize, Vec<u32>)> + '_ {
        self.rows.iter().enumerate().filter_map(|(j, row)| {
            row.iter()
                .copied()
                .collect::<Option<Vec<u32>>>()
                .map(|r| (j, r))
        })
    }

    pub fn missing_cells(&self) -> usize {
        self.rows.iter().flatten().filter(|v| v.is_none()).count()
    }

    /// Writes the matrix in the same layout [`read_csv`] accepts.
    pub fn write_csv<W: Write>(&self, writer: W, missing_token: &str) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.items)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| match v {
                Some(r) => r.to_string(),
                None => missing_token.to_string(),
            }))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Handling of integer ratings outside `1..=m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangePolicy {
    /// Drop the whole row and record it in the report.
    #[default]
    Reject,
    /// Keep the row, treating the cell as missing.
    Coerce,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadOptions {
    pub missing_token: String,
    pub range_policy: RangePolicy,
    /// Restrict loading to these columns, in this order.
    pub columns: Option<Vec<String>>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            missing_token: String::new(),
            range_policy: RangePolicy::Reject,
            columns: None,
        }
    }
}

/// An out-of-range cell found while loading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellIssue {
    /// 1-based line in the file, header included.
    pub line: u64,
    pub item: String,
    pub value: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Data rows read, equal to `accepted_rows + rejected_rows`.
    pub total_rows: usize,
    pub accepted_rows: usize,
    pub rejected_rows: usize,
    pub missing_cells: usize,
    pub coerced_cells: usize,
    pub issues: Vec<CellIssue>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub matrix: RatingMatrix,
    pub report: ValidationReport,
}

pub fn load_csv(path: impl AsRef<Path>, scale: &RatingScale, opts: &LoadOptions) -> Result<Loaded> {
    read_csv(File::open(path)?, scale, opts)
}

pub fn read_csv<R: Read>(reader: R, scale: &RatingScale, opts: &LoadOptions) -> Result<Loaded> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(Error::Domain("input is empty".into())),
    };
    let header: Vec<String> = header.iter().map(str::to_string).collect();
    if header.iter().all(String::is_empty) {
        return Err(Error::Domain("input has an empty header row".into()));
    }

    let selected: Vec<usize> = match &opts.columns {
        None => (0..header.len()).collect(),
        Some(cols) => {
            cols.iter()
                .map(|c| {
                    header.iter().position(|h| h == c).ok_or_else(|| {
                        Error::Validation(format!("column `{c}` not found in header"))
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    let items: Vec<String> = selected.iter().map(|&i| header[i].clone()).collect();

    let mut report = ValidationReport::default();
    let mut rows = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        report.total_rows += 1;
        let mut row = Vec::with_capacity(selected.len());
        let mut rejected = false;
        for (&col, item) in selected.iter().zip(&items) {
            let cell = record.get(col).unwrap_or("");
            if cell == opts.missing_token {
                row.push(None);
                continue;
            }
            let value: i64 = cell.parse().map_err(|_| Error::Parse {
                line,
                item: item.clone(),
                value: cell.to_string(),
            })?;
            match u32::try_from(value).ok().filter(|r| scale.contains(*r)) {
                Some(r) => row.push(Some(r)),
                None => {
                    report.issues.push(CellIssue {
                        line,
                        item: item.clone(),
                        value,
                    });
                    match opts.range_policy {
                        RangePolicy::Reject => rejected = true,
                        RangePolicy::Coerce => {
                            report.coerced_cells += 1;
                            row.push(None);
                        }
                    }
                }
            }
        }
        if rejected {
            report.rejected_rows += 1;
        } else {
            report.missing_cells += row.iter().filter(|v| v.is_none()).count();
            report.accepted_rows += 1;
            rows.push(row);
        }
    }
    if report.total_rows == 0 {
        return Err(Error::Domain(
            "input has a header but no respondent rows".into(),
        ));
    }
    if rows.is_empty() {
        return Err(Error::Validation(format!(
            "all {} rows were rejected; first issue at line {}",
            report.total_rows,
            report.issues.first().map_or(0, |i| i.line)
        )));
    }
    let matrix = RatingMatrix::new(items, rows, *scale)?;
    Ok(Loaded { matrix, report })
}

/// Relative frequencies of the non-missing ratings of one item.
pub fn item_frequencies(matrix: &RatingMatrix, item_id: &str) -> Result<FrequencyTable> {
    let k = matrix
        .item_index(item_id)
        .ok_or_else(|| Error::Domain(format!("unknown item `{item_id}`")))?;
    let observed = matrix.observed(k);
    if observed.is_empty() {
        return Err(Error::Domain(format!(
            "item `{item_id}` has no observed ratings"
        )));
    }
    FrequencyTable::from_ratings(&observed, matrix.scale())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seven() -> RatingScale {
        RatingScale::new(7).unwrap()
    }

    fn load(text: &str, opts: &LoadOptions) -> Result<Loaded> {
        read_csv(text.as_bytes(), &seven(), opts)
    }

    #[test]
    fn load_from_path() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        std::io::Write::write_all(&mut file, b"a,b\n1,7\n4,\n").unwrap();
        let loaded = load_csv(file.path(), &seven(), &LoadOptions::default()).unwrap();
        assert_eq!(
            loaded.matrix.rows(),
            &[vec![Some(1), Some(7)], vec![Some(4), None]]
        );
        assert!(matches!(
            load_csv(
                file.path().with_extension("absent"),
                &seven(),
                &LoadOptions::default()
            ),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn loads_with_missing_cells() {
        let l = load("a,b\n1,2\n,7\n\"5\",3\n", &LoadOptions::default()).unwrap();
        assert_eq!(l.matrix.n(), 3);
        assert_eq!(l.matrix.k(), 2);
        assert_eq!(l.matrix.rows()[1], vec![None, Some(7)]);
        assert_eq!(l.report.missing_cells, 1);
        assert!(l.report.is_clean());
    }

    #[test]
    fn custom_missing_token() {
        let opts = LoadOptions {
            missing_token: "NA".into(),
            ..Default::default()
        };
        let l = load("a\n4\nNA\n", &opts).unwrap();
        assert_eq!(l.matrix.rows()[1], vec![None]);
    }

    #[test]
    fn out_of_range_rejects_row_and_names_cell() {
        let l = load("a,b\n1,2\n8,3\n4,4\n", &LoadOptions::default()).unwrap();
        assert_eq!(l.matrix.n(), 2);
        assert_eq!(l.report.rejected_rows, 1);
        assert_eq!(
            l.report.total_rows,
            l.report.accepted_rows + l.report.rejected_rows
        );
        assert_eq!(
            l.report.issues,
            vec![CellIssue {
                line: 3,
                item: "a".into(),
                value: 8
            }]
        );
    }

    #[test]
    fn out_of_range_coerced_in_lenient_mode() {
        let opts = LoadOptions {
            range_policy: RangePolicy::Coerce,
            ..Default::default()
        };
        let l = load("a,b\n0,2\n", &opts).unwrap();
        assert_eq!(l.matrix.rows()[0], vec![None, Some(2)]);
        assert_eq!(l.report.coerced_cells, 1);
    }

    #[test]
    fn unparseable_cell_reports_line() {
        match load("a,b\n1,2\n3,x\n", &LoadOptions::default()) {
            Err(Error::Parse {
                line: 3,
                item,
                value,
            }) => {
                assert_eq!(item, "b");
                assert_eq!(value, "x");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_input() {
        assert!(matches!(
            load("", &LoadOptions::default()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            load("a,b\n", &LoadOptions::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn duplicate_headers_rejected() {
        assert!(matches!(
            load("a,a\n1,2\n", &LoadOptions::default()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn column_selection() {
        let opts = LoadOptions {
            columns: Some(vec!["c".into(), "a".into()]),
            ..Default::default()
        };
        let l = load("a,age,c\n1,45,3\n", &opts).unwrap();
        assert_eq!(l.matrix.items(), &["c".to_string(), "a".to_string()]);
        assert_eq!(l.matrix.rows()[0], vec![Some(3), Some(1)]);
        let opts = LoadOptions {
            columns: Some(vec!["zzz".into()]),
            ..Default::default()
        };
        assert!(load("a\n1\n", &opts).is_err());
    }

    #[test]
    fn frequencies_ignore_missing() {
        let l = load("a,b\n4,\n4,\n5,\n7,\n,1\n", &LoadOptions::default()).unwrap();
        let f = item_frequencies(&l.matrix, "a").unwrap();
        assert_eq!(f.freqs(), &[0.0, 0.0, 0.0, 0.5, 0.25, 0.0, 0.25]);
        assert_eq!(f.n(), 4);
        let l = load("a,b\n4,\n", &LoadOptions::default()).unwrap();
        assert!(matches!(
            item_frequencies(&l.matrix, "b"),
            Err(Error::Domain(_))
        ));
        assert!(item_frequencies(&l.matrix, "nope").is_err());
    }

    fn matrix_strategy() -> impl Strategy<Value = RatingMatrix> {
        (1usize..5, 1usize..30).prop_flat_map(|(k, n)| {
            proptest::collection::vec(
                proptest::collection::vec(proptest::option::of(1u32..=7), k),
                n,
            )
            .prop_map(move |rows| {
                let items = (0..k).map(|i| format!("item{i}")).collect();
                RatingMatrix::new(items, rows, RatingScale::new(7).unwrap()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn csv_round_trip(m in matrix_strategy()) {
            let mut buf = Vec::new();
            m.write_csv(&mut buf, "").unwrap();
            let back = read_csv(buf.as_slice(), &seven(), &LoadOptions::default()).unwrap();
            prop_assert_eq!(back.matrix, m);
        }
    }
}
