use std::collections::HashSet;

use lexkit::data::{demo_registry, demo_tagset_de, demo_tagset_fr};
use lexkit::*;
use proptest::prelude::*;

#[test]
fn decoded_tags_are_registered_pairs() {
    let reg = demo_registry();
    for spec in [demo_tagset_de(&reg), demo_tagset_fr(&reg)] {
        for tag in spec.all_tags() {
            let fs = spec.decode(&tag).unwrap();
            for (name, value) in fs.iter() {
                assert!(
                    reg.validate_pair(name.as_str(), value.as_str(), Some(&spec.language)).unwrap(),
                    "{tag}: {name}={value} not in the {} domain",
                    spec.language
                );
            }
        }
    }
}

#[test]
fn reverse_map_inverts_every_code() {
    let reg = demo_registry();
    assert!(!reg.code_mappings().is_empty());
    for m in reg.code_mappings() {
        let value = reg.map_code(&m.scheme, &m.attribute, &m.code).unwrap();
        assert_eq!(value, m.value);
        assert_eq!(reg.reverse_map(&m.scheme, &m.attribute, value).unwrap(), m.code);
    }
}

#[test]
fn tag_count_matches_slot_product() {
    let reg = demo_registry();
    let spec = demo_tagset_de(&reg);
    // Every tag is a choice of one code or `-` per slot; trailing dashes are
    // dropped, which never merges two choices.
    let expected: usize = spec
        .categories()
        .map(|c| c.slots.iter().map(|s| s.codes.len() + 1).product::<usize>())
        .sum();
    let tags = spec.all_tags();
    assert_eq!(tags.len(), expected);
    let distinct: HashSet<_> = tags.iter().map(|t| t.as_str().to_string()).collect();
    assert_eq!(distinct.len(), tags.len());
}

fn tag_strategy() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[NVASQ][-a-z0-9]{0,6}").unwrap()
}

proptest! {
    /// Any string either fails to decode or survives a round trip.
    #[test]
    fn decode_encode_round_trip(text in tag_strategy()) {
        let reg = demo_registry();
        let spec = demo_tagset_de(&reg);
        if let Ok(tag) = MsdTag::new(text.clone()) {
            if let Ok(fs) = spec.decode(&tag) {
                let back = spec.encode(&fs).unwrap();
                prop_assert_eq!(back.as_str(), text.trim_end_matches('-'));
            }
        }
    }
}
