use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use super::{AssetRecord, FundRecord, IngestError, MarketSnapshot, SymbolTable};
use crate::valuation::{BipartiteHoldings, CrossHoldings};

pub const FUNDS_FILE: &str = "funds.csv";
pub const ASSETS_FILE: &str = "assets.csv";
pub const CROSSHOLDINGS_FILE: &str = "crossholdings.csv";
pub const HOLDINGS_FILE: &str = "holdings.csv";

const FUNDS_HEADER: [&str; 4] = ["fund_id", "class", "administrator", "open_ended"];
const ASSETS_HEADER: [&str; 3] = ["asset_id", "class", "price"];
const CROSS_HEADER: [&str; 3] = ["investor_fund_id", "investee_fund_id", "fraction"];
const HOLDINGS_HEADER: [&str; 3] = ["fund_id", "asset_id", "value"];

/// Paths of the four CSV files that make up one snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFiles {
    pub funds: PathBuf,
    pub assets: PathBuf,
    pub crossholdings: PathBuf,
    pub holdings: PathBuf,
}

impl SnapshotFiles {
    pub fn in_dir(dir: &Path) -> Self {
        SnapshotFiles {
            funds: dir.join(FUNDS_FILE),
            assets: dir.join(ASSETS_FILE),
            crossholdings: dir.join(CROSSHOLDINGS_FILE),
            holdings: dir.join(HOLDINGS_FILE),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSnapshot {
    pub snapshot: MarketSnapshot,
    /// Assets listed in `assets.csv` that no fund holds.
    pub dropped_assets: Vec<String>,
}

struct Table {
    file: String,
    rows: Vec<(usize, Vec<String>)>,
}

fn read_table(path: &Path, header: &[&str]) -> Result<Table, IngestError> {
    let file = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| IngestError::Io { path: path.to_path_buf(), source })?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes.as_slice());
    let parse_err = |line: usize, column: &str, message: String| IngestError::Parse {
        file: file.clone(),
        line,
        column: column.to_string(),
        message,
    };
    let found = reader.headers().map_err(|e| parse_err(1, "header", e.to_string()))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(parse_err(
            1,
            "header",
            format!("expected {:?}, found {:?}", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, "*", e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    Ok(Table { file, rows })
}

impl Table {
    fn number(&self, line: usize, column: &str, text: &str) -> Result<f64, IngestError> {
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| IngestError::Parse {
                file: self.file.clone(),
                line,
                column: column.to_string(),
                message: format!("not a decimal number: {text:?}"),
            })
    }

    fn resolve(&self, table: &SymbolTable, line: usize, id: &str) -> Result<usize, IngestError> {
        table.get(id).ok_or_else(|| IngestError::UnresolvedReference {
            file: self.file.clone(),
            line,
            id: id.to_string(),
        })
    }

    fn duplicate(&self, line: usize, key: String) -> IngestError {
        IngestError::DuplicateRow { file: self.file.clone(), line, key }
    }
}

/// Loads and validates one snapshot; unheld assets are dropped and reported.
pub fn load_snapshot(files: &SnapshotFiles, date: &str) -> Result<LoadedSnapshot, IngestError> {
    let funds_t = read_table(&files.funds, &FUNDS_HEADER)?;
    let mut fund_symbols = SymbolTable::new();
    let mut funds = Vec::new();
    for (line, r) in &funds_t.rows {
        let open_ended = match r[3].as_str() {
            "1" => true,
            "0" => false,
            other => {
                return Err(IngestError::Parse {
                    file: funds_t.file.clone(),
                    line: *line,
                    column: "open_ended".into(),
                    message: format!("expected 0 or 1, found {other:?}"),
                })
            }
        };
        if fund_symbols.insert(&r[0]).is_none() {
            return Err(funds_t.duplicate(*line, r[0].clone()));
        }
        funds.push(FundRecord {
            id: r[0].clone(),
            class: r[1].clone(),
            administrator: r[2].clone(),
            open_ended,
        });
    }

    let assets_t = read_table(&files.assets, &ASSETS_HEADER)?;
    let mut asset_symbols = SymbolTable::new();
    let mut assets = Vec::new();
    let mut prices = Vec::new();
    for (line, r) in &assets_t.rows {
        let price = assets_t.number(*line, "price", &r[2])?;
        if asset_symbols.insert(&r[0]).is_none() {
            return Err(assets_t.duplicate(*line, r[0].clone()));
        }
        assets.push(AssetRecord { id: r[0].clone(), class: r[1].clone() });
        prices.push(price);
    }

    let cross_t = read_table(&files.crossholdings, &CROSS_HEADER)?;
    let mut seen = HashSet::new();
    let mut cross = Vec::new();
    for (line, r) in &cross_t.rows {
        let investor = cross_t.resolve(&fund_symbols, *line, &r[0])?;
        let investee = cross_t.resolve(&fund_symbols, *line, &r[1])?;
        let fraction = cross_t.number(*line, "fraction", &r[2])?;
        if !seen.insert((investor, investee)) {
            return Err(cross_t.duplicate(*line, format!("{},{}", r[0], r[1])));
        }
        cross.push((investor, investee, fraction));
    }

    let hold_t = read_table(&files.holdings, &HOLDINGS_HEADER)?;
    let mut seen = HashSet::new();
    let mut positions = Vec::new();
    for (line, r) in &hold_t.rows {
        let fund = hold_t.resolve(&fund_symbols, *line, &r[0])?;
        let asset = hold_t.resolve(&asset_symbols, *line, &r[1])?;
        let value = hold_t.number(*line, "value", &r[2])?;
        if !seen.insert((fund, asset)) {
            return Err(hold_t.duplicate(*line, format!("{},{}", r[0], r[1])));
        }
        positions.push((fund, asset, value));
    }

    // drop assets nobody holds, keeping file order for the rest
    let held: HashSet<usize> = positions.iter().map(|p| p.1).collect();
    let mut remap = vec![usize::MAX; assets.len()];
    let mut kept_assets = Vec::new();
    let mut kept_prices = Vec::new();
    let mut dropped_assets = Vec::new();
    for (k, (a, p)) in assets.into_iter().zip(prices).enumerate() {
        if held.contains(&k) {
            remap[k] = kept_assets.len();
            kept_assets.push(a);
            kept_prices.push(p);
        } else {
            dropped_assets.push(a.id);
        }
    }
    if !dropped_assets.is_empty() {
        warn!("{}: dropped {} unheld assets", files.assets.display(), dropped_assets.len());
    }
    let positions = positions.into_iter().map(|(f, a, w)| (f, remap[a], w));

    let n = funds.len();
    let cross = CrossHoldings::build(n, cross)?;
    let holdings = BipartiteHoldings::build(n, kept_assets.len(), positions, kept_prices)?;
    let snapshot = MarketSnapshot::new(date, funds, kept_assets, cross, holdings)?;
    Ok(LoadedSnapshot { snapshot, dropped_assets })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IngestError + '_ {
    move |source| IngestError::Io { path: path.to_path_buf(), source }
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<(), IngestError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| IngestError::Io { path: path.to_path_buf(), source: e.into() })?;
    let csv_err = |e: csv::Error| IngestError::Io { path: path.to_path_buf(), source: e.into() };
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes the four CSV files into `dir` (created if absent).
pub fn write_snapshot(snapshot: &MarketSnapshot, dir: &Path) -> Result<(), IngestError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let fid = |k: usize| snapshot.fund_symbols().id(k).to_string();
    let aid = |k: usize| snapshot.asset_symbols().id(k).to_string();
    let files = SnapshotFiles::in_dir(dir);
    write_csv(
        &files.funds,
        &FUNDS_HEADER,
        snapshot.funds().iter().map(|f| {
            vec![
                f.id.clone(),
                f.class.clone(),
                f.administrator.clone(),
                if f.open_ended { "1" } else { "0" }.to_string(),
            ]
        }),
    )?;
    write_csv(
        &files.assets,
        &ASSETS_HEADER,
        snapshot
            .assets()
            .iter()
            .zip(snapshot.holdings().prices())
            .map(|(a, p)| vec![a.id.clone(), a.class.clone(), p.to_string()]),
    )?;
    write_csv(
        &files.crossholdings,
        &CROSS_HEADER,
        snapshot
            .cross_holdings()
            .entries()
            .iter()
            .map(|&(i, j, c)| vec![fid(i), fid(j), c.to_string()]),
    )?;
    write_csv(
        &files.holdings,
        &HOLDINGS_HEADER,
        snapshot
            .holdings()
            .positions()
            .iter()
            .map(|&(f, a, w)| vec![fid(f), aid(a), w.to_string()]),
    )
}

/// Writes each snapshot to `root/<date>/`.
pub fn write_bundle(snapshots: &[MarketSnapshot], root: &Path) -> Result<Vec<PathBuf>, IngestError> {
    snapshots
        .iter()
        .map(|s| {
            let dir = root.join(s.date());
            write_snapshot(s, &dir)?;
            Ok(dir)
        })
        .collect()
}

/// Loads a snapshot directory, or every dated snapshot directory under a
/// bundle root in name order. The date label is the directory name.
pub fn load_bundle(path: &Path) -> Result<Vec<LoadedSnapshot>, IngestError> {
    let date_of = |p: &Path| {
        p.file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "snapshot".to_string())
    };
    if path.join(FUNDS_FILE).is_file() {
        let dir = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
        return Ok(vec![load_snapshot(&SnapshotFiles::in_dir(path), &date_of(&dir))?]);
    }
    let mut dirs: Vec<PathBuf> = fs::read_dir(path)
        .map_err(io_err(path))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join(FUNDS_FILE).is_file())
        .collect();
    dirs.sort();
    if dirs.is_empty() {
        return Err(IngestError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no snapshot found"),
        });
    }
    dirs.iter()
        .map(|d| load_snapshot(&SnapshotFiles::in_dir(d), &date_of(d)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, funds: &str, assets: &str, cross: &str, holdings: &str) -> SnapshotFiles {
        let files = SnapshotFiles::in_dir(dir);
        fs::write(&files.funds, funds).unwrap();
        fs::write(&files.assets, assets).unwrap();
        fs::write(&files.crossholdings, cross).unwrap();
        fs::write(&files.holdings, holdings).unwrap();
        files
    }

    const FUNDS: &str = "fund_id,class,administrator,open_ended\nF1,equity,ADM1,1\nF2,fof,ADM1,1\n";
    const ASSETS: &str = "asset_id,class,price\nGOV,government_bond,1\nX,equity,2.5\n";
    const CROSS: &str = "investor_fund_id,investee_fund_id,fraction\n";

    #[test]
    fn minimal_snapshot() {
        let dir = tempfile::tempdir().unwrap();
        let files = write(
            dir.path(),
            "fund_id,class,administrator,open_ended\nF1,equity,ADM1,1\n",
            "asset_id,class,price\nA,equity,10\n",
            CROSS,
            "fund_id,asset_id,value\nF1,A,100\n",
        );
        let loaded = load_snapshot(&files, "d").unwrap();
        assert_eq!(loaded.snapshot.holdings().fund_asset_values(), vec![100.0]);
        assert!(loaded.dropped_assets.is_empty());
    }

    #[test]
    fn unresolved_cross_reference() {
        let dir = tempfile::tempdir().unwrap();
        let files = write(
            dir.path(),
            FUNDS,
            ASSETS,
            "investor_fund_id,investee_fund_id,fraction\nF1,F9,0.1\n",
            "fund_id,asset_id,value\nF1,GOV,1\n",
        );
        match load_snapshot(&files, "d") {
            Err(IngestError::UnresolvedReference { id, line, .. }) => {
                assert_eq!(id, "F9");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn overfull_column_is_a_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        let funds = "fund_id,class,administrator,open_ended\nF1,a,A,1\nF2,a,A,1\nF3,a,A,1\n";
        let files = write(
            dir.path(),
            funds,
            ASSETS,
            "investor_fund_id,investee_fund_id,fraction\nF1,F3,0.55\nF2,F3,0.5\n",
            "fund_id,asset_id,value\nF1,GOV,1\nF2,X,1\n",
        );
        assert!(matches!(
            load_snapshot(&files, "d"),
            Err(IngestError::Validation(crate::valuation::ValuationError::FullyInternalized { fund: 2, .. }))
        ));
    }

    #[test]
    fn parse_and_duplicate_errors() {
        let dir = tempfile::tempdir().unwrap();
        let files = write(dir.path(), FUNDS, "asset_id,class,price\nGOV,b,1,0\n", CROSS, "fund_id,asset_id,value\n");
        assert!(matches!(load_snapshot(&files, "d"), Err(IngestError::Parse { .. })));

        let files = write(dir.path(), FUNDS, "asset_id,class,price\nGOV,b,1.000.0\n", CROSS, "fund_id,asset_id,value\n");
        match load_snapshot(&files, "d") {
            Err(IngestError::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, "price");
            }
            other => panic!("unexpected {other:?}"),
        }

        let files = write(dir.path(), "fund_id,class\nF1,x\n", ASSETS, CROSS, "fund_id,asset_id,value\n");
        assert!(matches!(load_snapshot(&files, "d"), Err(IngestError::Parse { line: 1, .. })));

        let files = write(
            dir.path(),
            FUNDS,
            ASSETS,
            CROSS,
            "fund_id,asset_id,value\nF1,GOV,1\nF1,GOV,2\n",
        );
        assert!(matches!(load_snapshot(&files, "d"), Err(IngestError::DuplicateRow { line: 3, .. })));

        let files = write(dir.path(), "fund_id,class,administrator,open_ended\nF1,a,A,yes\n", ASSETS, CROSS, "fund_id,asset_id,value\n");
        assert!(matches!(load_snapshot(&files, "d"), Err(IngestError::Parse { .. })));
    }

    #[test]
    fn unheld_assets_are_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let files = write(dir.path(), FUNDS, ASSETS, CROSS, "fund_id,asset_id,value\nF1,X,5\nF2,X,5\n");
        let loaded = load_snapshot(&files, "d").unwrap();
        assert_eq!(loaded.dropped_assets, vec!["GOV".to_string()]);
        assert_eq!(loaded.snapshot.asset_count(), 1);
        assert_eq!(loaded.snapshot.holdings().prices(), &[2.5]);
    }
}
