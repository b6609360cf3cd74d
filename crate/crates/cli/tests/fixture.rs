use hawkcast_cli::fixture::bundled_fixture;

#[test]
fn bundled_fixture_is_current() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/synthetic.csv");
    if std::env::var_os("HAWKCAST_BLESS").is_some() {
        std::fs::write(path, bundled_fixture()).unwrap();
    }
    assert_eq!(std::fs::read_to_string(path).unwrap(), bundled_fixture());
}
