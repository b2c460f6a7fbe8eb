use pabed_core::ingest::{self, IngestOptions};
use pabed_core::query::{compare_years, sum_column, trend_series, weighted_mean, MeasureRef};
use pabed_core::store::{Catalog, Table};
use pabed_core::AcademicYearId;
use pabed_testkit::{fixtures, oracle, rel_close, year_label};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn load(text: &str, label: &str) -> Table {
    let year = AcademicYearId::parse(label).unwrap();
    ingest::ingest(text.as_bytes(), year, &IngestOptions::default()).unwrap().0
}

#[test]
fn sum_matches_row_scan_with_twenty_percent_nulls() {
    let text = fixtures::scorecard_year(21, 10_000, 0.2);
    let table = load(&text, "1996_97");
    for column in ["UGDS", "UGDS_WOMEN", "TUITIONFEE_IN"] {
        let got = sum_column(&table, &MeasureRef::new(column)).unwrap();
        let want = oracle::column_sum(&text, column);
        assert!(rel_close(got.total, want.total, TOL), "{column}: {} vs {}", got.total, want.total);
        assert_eq!((got.non_null_rows, got.null_rows), (want.non_null, want.null));
    }
}

#[test]
fn weighted_share_matches_pairwise_oracle() {
    let text = fixtures::scorecard_year(22, 8_000, 0.1);
    let table = load(&text, "1996_97");
    for share in ["UGDS_WHITE", "UGDS_BLACK", "UGDS_HISP", "UGDS_WOMEN"] {
        let got = weighted_mean(&table, &MeasureRef::default(), &MeasureRef::new(share)).unwrap();
        let want = oracle::weighted_mean(&text, "UGDS", share);
        match (got, want) {
            (Some(g), Some(w)) => assert!(rel_close(g, w, TOL), "{share}: {g} vs {w}"),
            other => panic!("{share}: {other:?}"),
        }
    }
}

#[test]
fn compare_first_and_last_fixture_years() {
    let catalog = Catalog::in_memory();
    let mut texts = Vec::new();
    for (i, start) in (1996u16..=2003).enumerate() {
        let text = fixtures::scorecard_year(100 + i as u64, 3_000, 0.15);
        catalog.register(load(&text, &year_label(start)));
        texts.push(text);
    }
    let first = AcademicYearId::parse("1996_97").unwrap();
    let last = AcademicYearId::parse("2003_04").unwrap();
    let m = MeasureRef::default();
    let cmp = compare_years(&catalog, first, last, &m).unwrap();
    let (a, b) = (oracle::column_sum(&texts[0], "UGDS"), oracle::column_sum(&texts[7], "UGDS"));
    assert!(rel_close(cmp.first.total, a.total, TOL));
    assert!(rel_close(cmp.second.total, b.total, TOL));
    assert_eq!(cmp.delta, cmp.second.total - cmp.first.total);

    let trend = trend_series(&catalog, first, last, &m).unwrap();
    assert_eq!(trend.points.len(), 8);
    for (point, text) in trend.points.iter().zip(&texts) {
        assert!(rel_close(point.total, oracle::column_sum(text, "UGDS").total, TOL));
    }
}

fn fixture_from(values: &[Option<f64>]) -> String {
    let mut text = String::from("UGDS\n");
    for v in values {
        match v {
            Some(x) => text.push_str(&format!("{x}\n")),
            None => text.push_str("NULL\n"),
        }
    }
    text
}

fn cells() -> impl Strategy<Value = Vec<Option<f64>>> {
    prop::collection::vec(prop::option::weighted(0.8, -1e7f64..1e7), 1..400)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_order_changes_total_by_at_most_tolerance(values in cells(), seed in any::<u64>()) {
        let a = load(&fixture_from(&values), "1996_97");
        let b = load(&fixture_from(&fixtures::shuffled(&values, seed)), "1996_97");
        let m = MeasureRef::default();
        let (ta, tb) = (sum_column(&a, &m).unwrap(), sum_column(&b, &m).unwrap());
        let scale: f64 = values.iter().flatten().map(|v| v.abs()).sum();
        prop_assert!((ta.total - tb.total).abs() <= TOL * scale.max(f64::MIN_POSITIVE));
        prop_assert_eq!(ta.non_null_rows, tb.non_null_rows);
    }

    #[test]
    fn appended_null_rows_change_nothing(values in cells(), extra in 1usize..50) {
        let mut padded = values.clone();
        padded.extend(std::iter::repeat_n(None, extra));
        let a = load(&fixture_from(&values), "1996_97");
        let b = load(&fixture_from(&padded), "1996_97");
        let m = MeasureRef::default();
        let (ra, rb) = (sum_column(&a, &m).unwrap(), sum_column(&b, &m).unwrap());
        prop_assert_eq!(ra.total.to_bits(), rb.total.to_bits());
        prop_assert_eq!(ra.non_null_rows, rb.non_null_rows);
        prop_assert_eq!(rb.null_rows, ra.null_rows + extra as u64);
    }

    #[test]
    fn compare_is_antisymmetric(x in cells(), y in cells()) {
        let catalog = Catalog::in_memory();
        catalog.register(load(&fixture_from(&x), "1996_97"));
        catalog.register(load(&fixture_from(&y), "1997_98"));
        let (a, b) = (AcademicYearId::parse("1996_97").unwrap(), AcademicYearId::parse("1997_98").unwrap());
        let m = MeasureRef::default();
        let ab = compare_years(&catalog, a, b, &m).unwrap();
        let ba = compare_years(&catalog, b, a, &m).unwrap();
        prop_assert_eq!(ab.delta, -ba.delta);
    }
}
