mod common;

use common::cbc;
use pebblebound::harness::{bound_for, CacheKey, ProfileResolver, ResultsCache};
use pebblebound::model::ConstraintEnumerationPolicy;
use pebblebound::reference::{all_records, base_graph};
use pebblebound::search::SearchOptions;

#[test]
fn graham_values_match_the_profiles_fed_to_the_model() {
    let r = ProfileResolver::with_published_profiles();
    for rec in all_records().into_iter().filter(|r| r.bound.is_some()) {
        let pi = |l: &str| r.resolve(base_graph(l).unwrap().catalog).unwrap().0.pi;
        assert_eq!(rec.graham, pi(rec.g) * pi(rec.h), "{}", rec.label());
    }
}

#[test]
fn cache_replays_bytes_and_tracks_policy() {
    let Some(solver) = cbc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let cache = ResultsCache::new(dir.path());
    let inst = ProfileResolver::default().instance("path:3", "complete:3").unwrap();
    let opts = SearchOptions::new(solver);
    let policy = ConstraintEnumerationPolicy::default();

    let (first, hit) = bound_for(&inst, &policy, &opts, Some(&cache)).unwrap();
    assert!(!hit);
    let key = CacheKey::new(&inst, &policy, &opts);
    let stored = cache.get_raw(&key).unwrap();
    let (second, hit) = bound_for(&inst, &policy, &opts, Some(&cache)).unwrap();
    assert!(hit);
    assert_eq!(first, second);
    assert_eq!(cache.get_raw(&key).unwrap(), stored);

    let other = ConstraintEnumerationPolicy {
        paths_per_terminal: 2,
        ..Default::default()
    };
    let (_, hit) = bound_for(&inst, &other, &opts, Some(&cache)).unwrap();
    assert!(!hit, "a changed policy must recompute");
}

#[test]
fn incomplete_searches_are_not_cached() {
    let Some(solver) = cbc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let cache = ResultsCache::new(dir.path());
    let inst = ProfileResolver::default().instance("path:3", "path:3").unwrap();
    let mut opts = SearchOptions::new(solver);
    opts.budget = Some(std::time::Duration::ZERO);
    let (rep, _) = bound_for(&inst, &Default::default(), &opts, Some(&cache)).unwrap();
    assert!(!rep.complete);
    assert!(cache.get(&CacheKey::new(&inst, &Default::default(), &opts)).is_none());
}
