use std::collections::BTreeSet;

use chrono::NaiveDate;
use ontorec::harness::{profile_error_rate, profile_precision, ProfileSet, TopicCounts};
use ontorec::{Error, InterestProfile, TopicPath};
use proptest::prelude::*;

fn topic(i: usize) -> TopicPath {
    TopicPath::new([format!("t{i}")]).unwrap()
}

fn profile(user: &str, topics: &BTreeSet<usize>) -> InterestProfile {
    let at = NaiveDate::from_ymd_opt(2002, 1, 1).unwrap();
    InterestProfile::from_entries(user, at, topics.iter().map(|t| (topic(*t), 1.0 + *t as f64)))
}

fn sets(users: usize) -> impl Strategy<Value = Vec<BTreeSet<usize>>> {
    prop::collection::vec(prop::collection::btree_set(0..10usize, 0..10), users)
}

fn profile_set(sets: &[BTreeSet<usize>]) -> ProfileSet {
    sets.iter().enumerate().map(|(i, s)| (format!("u{i}"), profile(&format!("u{i}"), s))).collect()
}

proptest! {
    #[test]
    fn metrics_stay_in_unit_interval(pairs in (1..6usize).prop_flat_map(|n| (sets(n), sets(n)))) {
        let (cur, bench) = (profile_set(&pairs.0), profile_set(&pairs.1));
        let p = profile_precision(&cur, &bench).unwrap();
        let e = profile_error_rate(&cur, &bench).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((0.0..=1.0).contains(&e));
    }

    #[test]
    fn self_comparison_is_perfect(s in sets(4)) {
        let set = profile_set(&s);
        let nonempty = s.iter().filter(|t| !t.is_empty()).count() as f64 / s.len() as f64;
        prop_assert!((profile_precision(&set, &set).unwrap() - nonempty).abs() < 1e-12);
        prop_assert_eq!(profile_error_rate(&set, &set).unwrap(), 0.0);
        for t in &s {
            let topics: BTreeSet<TopicPath> = t.iter().map(|i| topic(*i)).collect();
            let c = TopicCounts::compare(&topics, &topics);
            prop_assert_eq!((c.correct, c.incorrect, c.missing), (t.len(), 0, 0));
        }
    }
}

#[test]
fn mismatched_users_are_rejected() {
    let a = profile_set(&[BTreeSet::from([1])]);
    let mut b = a.clone();
    b.insert("other".into(), profile("other", &BTreeSet::new()));
    assert!(matches!(profile_precision(&a, &b), Err(Error::Argument(_))));
    assert!(matches!(profile_error_rate(&ProfileSet::new(), &ProfileSet::new()), Err(Error::Argument(_))));
}
