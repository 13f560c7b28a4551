use symspace_core::corpus::{build, list, run_manifest};

#[test]
fn every_manifest_is_green() {
    let mut bad = Vec::new();
    for name in list() {
        let entry = build(&name).unwrap();
        for o in run_manifest(&entry).unwrap() {
            if !o.passed() {
                bad.push(format!(
                    "{name}: {} expected {} observed {}",
                    o.expected.name(),
                    o.expected.value(),
                    o.observed.value()
                ));
            }
        }
    }
    assert!(bad.is_empty(), "{bad:#?}");
}
