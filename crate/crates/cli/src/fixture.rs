use chrono::{Days, NaiveDate};
use hawkcast::synthetic::{synthetic_series, SYNTHETIC_LEN};

/// Seed of the bundled `fixtures/synthetic.csv`.
pub const FIXTURE_SEED: u64 = 0;

/// Daily `date,value` CSV of the synthetic series starting 2018-01-01.
pub fn synthetic_csv(len: usize, seed: u64) -> String {
    let start = NaiveDate::from_ymd_opt(2018, 1, 1).expect("valid date");
    let mut out = String::from("date,value\n");
    for (i, v) in synthetic_series(len, seed).iter().enumerate() {
        let d = start + Days::new(i as u64);
        out.push_str(&format!("{},{v}\n", d.format("%Y-%m-%d")));
    }
    out
}

pub fn bundled_fixture() -> String {
    synthetic_csv(SYNTHETIC_LEN, FIXTURE_SEED)
}
