use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use crate::error::{Error, Result};
use crate::store::snapshot::{self, EXTENSION};
use crate::store::{DatasetSummary, Table};
use crate::year::AcademicYearId;

/// Year-keyed tables, optionally backed by snapshot files under a root
/// directory.
///
/// Any number of readers may run alongside one writer. Registering a table
/// swaps the map entry under a short write lock, so a concurrent lookup sees
/// either the old table or the new one. Snapshots found at open time are
/// loaded on first lookup.
#[derive(Debug)]
pub struct Catalog {
    root: Option<PathBuf>,
    entries: RwLock<BTreeMap<AcademicYearId, Arc<Entry>>>,
    writer: Mutex<()>,
}

#[derive(Debug)]
struct Entry {
    summary: DatasetSummary,
    path: Option<PathBuf>,
    table: Mutex<Option<Arc<Table>>>,
}

impl Entry {
    fn loaded(table: Arc<Table>, path: Option<PathBuf>) -> Self {
        Self {
            summary: table.summary(),
            path,
            table: Mutex::new(Some(table)),
        }
    }

    fn load(&self) -> Result<Arc<Table>> {
        let mut slot = self.table.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(table) = slot.as_ref() {
            return Ok(Arc::clone(table));
        }
        let path = self.path.as_deref().expect("unloaded entry without a path");
        let table = Arc::new(snapshot::read_snapshot(path)?);
        *slot = Some(Arc::clone(&table));
        Ok(table)
    }
}

impl Catalog {
    /// A catalog with no backing directory; nothing is persisted.
    pub fn in_memory() -> Self {
        Self {
            root: None,
            entries: RwLock::default(),
            writer: Mutex::new(()),
        }
    }

    /// Opens (creating if needed) a catalog directory and indexes every
    /// `<label>.pbed` file in it. Only snapshot headers are read here.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        let mut entries = BTreeMap::new();
        for dirent in fs::read_dir(&root)? {
            let path = dirent?.path();
            if path.extension().and_then(|e| e.to_str()) != Some(EXTENSION) {
                continue;
            }
            let Ok(year) = snapshot::year_from_path(&path) else {
                continue;
            };
            let (schema, rows) = snapshot::read_header(&path).map_err(|e| match e {
                Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
                other => other,
            })?;
            let summary = DatasetSummary {
                year,
                row_count: rows as u64,
                column_count: schema.len() as u64,
            };
            entries.insert(
                year,
                Arc::new(Entry {
                    summary,
                    path: Some(path),
                    table: Mutex::new(None),
                }),
            );
        }
        Ok(Self {
            root: Some(root),
            entries: RwLock::new(entries),
            writer: Mutex::new(()),
        })
    }

    pub fn root_path(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    pub fn snapshot_path(&self, year: AcademicYearId) -> Option<PathBuf> {
        self.root
            .as_ref()
            .map(|root| root.join(format!("{year}.{EXTENSION}")))
    }

    /// Makes `table` visible under its year, replacing any previous table.
    /// Memory only; see [`Catalog::publish`] for the persisted variant.
    pub fn register(&self, table: Table) -> Arc<Table> {
        let _writer = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        self.swap_in(Arc::new(table), None)
    }

    /// Writes the snapshot (when the catalog has a root) and then registers
    /// the table.
    pub fn publish(&self, table: Table) -> Result<Arc<Table>> {
        let _writer = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let path = self.snapshot_path(table.year());
        if let Some(path) = &path {
            snapshot::write_snapshot_atomic(&table, path)?;
        }
        Ok(self.swap_in(Arc::new(table), path))
    }

    fn swap_in(&self, table: Arc<Table>, path: Option<PathBuf>) -> Arc<Table> {
        let entry = Arc::new(Entry::loaded(Arc::clone(&table), path));
        self.entries
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(table.year(), entry);
        table
    }

    pub fn lookup(&self, year: AcademicYearId) -> Result<Arc<Table>> {
        let entry = self
            .entries
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(&year)
            .cloned()
            .ok_or_else(|| Error::UnknownYear(year.label()))?;
        entry.load()
    }

    pub fn lookup_label(&self, label: &str) -> Result<Arc<Table>> {
        self.lookup(AcademicYearId::parse(label)?)
    }

    pub fn contains(&self, year: AcademicYearId) -> bool {
        self.entries
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .contains_key(&year)
    }

    /// Registered years, ascending.
    pub fn years(&self) -> Vec<AcademicYearId> {
        self.entries
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .keys()
            .copied()
            .collect()
    }

    /// Registered years within `[from, to]`, ascending.
    pub fn years_in_range(&self, from: AcademicYearId, to: AcademicYearId) -> Vec<AcademicYearId> {
        if from > to {
            return Vec::new();
        }
        self.entries
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .range(from..=to)
            .map(|(y, _)| *y)
            .collect()
    }

    pub fn list(&self) -> Vec<DatasetSummary> {
        self.entries
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .values()
            .map(|e| e.summary)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::ColumnType;
    use crate::store::ColumnData;

    fn year(label: &str) -> AcademicYearId {
        AcademicYearId::parse(label).unwrap()
    }

    fn table(label: &str, rows: &[Option<i64>]) -> Table {
        let col = ColumnData::from_options("UGDS", ColumnType::Int64, rows.iter().copied()).unwrap();
        Table::new(year(label), rows.len(), vec![col]).unwrap()
    }

    #[test]
    fn register_then_lookup() {
        let cat = Catalog::in_memory();
        let t = table("1996_97", &[Some(1), None]);
        cat.register(t.clone());
        assert_eq!(*cat.lookup(year("1996_97")).unwrap(), t);
    }

    #[test]
    fn second_register_replaces_first() {
        let cat = Catalog::in_memory();
        cat.register(table("1996_97", &[Some(1)]));
        let newer = table("1996_97", &[Some(2), Some(3)]);
        cat.register(newer.clone());
        assert_eq!(*cat.lookup(year("1996_97")).unwrap(), newer);
        assert_eq!(cat.len(), 1);
    }

    #[test]
    fn eight_years_list_ascending() {
        let cat = Catalog::in_memory();
        for start in (1996..2004).rev() {
            let label = format!("{start}_{:02}", (start + 1) % 100);
            cat.register(table(&label, &[Some(start as i64)]));
        }
        let labels: Vec<String> = cat.years().into_iter().map(|y| y.label()).collect();
        assert_eq!(
            labels,
            ["1996_97", "1997_98", "1998_99", "1999_00", "2000_01", "2001_02", "2002_03", "2003_04"]
        );
        assert!(cat.years().windows(2).all(|w| w[0].start_year() < w[1].start_year()));
    }

    #[test]
    fn unknown_and_malformed_lookups() {
        let cat = Catalog::in_memory();
        cat.register(table("2003_04", &[Some(1)]));
        assert!(cat.lookup_label("2003_04").is_ok());
        assert!(matches!(cat.lookup_label("1988_89"), Err(Error::UnknownYear(_))));
        // Outside the representable start-year range.
        assert!(matches!(cat.lookup_label("1888_89"), Err(Error::MalformedYear { .. })));
        assert!(matches!(cat.lookup_label("2003-04"), Err(Error::MalformedYear { .. })));
    }

    #[test]
    fn range_selection() {
        let cat = Catalog::in_memory();
        for label in ["1996_97", "1998_99", "2003_04"] {
            cat.register(table(label, &[Some(1)]));
        }
        let got = cat.years_in_range(year("1997_98"), year("2003_04"));
        assert_eq!(got, [year("1998_99"), year("2003_04")]);
        assert!(cat.years_in_range(year("2003_04"), year("1996_97")).is_empty());
    }

    #[test]
    fn publish_persists_and_reopens_lazily() {
        let dir = tempfile::tempdir().unwrap();
        let t = table("1999_00", &[Some(5), None, Some(7)]);
        {
            let cat = Catalog::open(dir.path()).unwrap();
            cat.publish(t.clone()).unwrap();
        }
        assert!(dir.path().join("1999_00.pbed").exists());
        fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
        fs::write(dir.path().join("bogus.pbed"), "ignored: stem is not a year").unwrap();

        let cat = Catalog::open(dir.path()).unwrap();
        assert_eq!(cat.list(), vec![t.summary()]);
        assert_eq!(*cat.lookup(year("1999_00")).unwrap(), t);
    }

    #[test]
    fn concurrent_lookups_see_whole_tables() {
        let cat = Arc::new(Catalog::in_memory());
        let old = table("2000_01", &[Some(1); 64]);
        let new = table("2000_01", &[Some(2); 128]);
        cat.register(old.clone());
        std::thread::scope(|s| {
            for _ in 0..4 {
                let cat = Arc::clone(&cat);
                let (old, new) = (&old, &new);
                s.spawn(move || {
                    for _ in 0..2000 {
                        let t = cat.lookup(year("2000_01")).unwrap();
                        assert!(*t == *old || *t == *new);
                    }
                });
            }
            for _ in 0..200 {
                cat.register(new.clone());
                cat.register(old.clone());
            }
        });
    }
}
