//! Graph cache round trips and eviction.

use std::fs;
use std::time::{Duration, SystemTime};

use boxdim::cache::{cache_gc, GraphCache};
use boxdim::cayley::{CayleyGraph, DEFAULT_VERTEX_CAP};
use boxdim::group::{CongruenceQuotient, GroupSpec};
use boxdim::{Error, MetricSpace};

fn q(spec: GroupSpec<i64>, m: u64) -> CongruenceQuotient<i64> {
    CongruenceQuotient::new(spec, m).unwrap()
}

#[test]
fn round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = GraphCache::new(dir.path()).unwrap();
    let quot = q(GroupSpec::unitriangular(3).unwrap(), 6);
    assert!(cache.load(&quot).unwrap().is_none());
    let built = cache.get_or_build(quot.clone(), DEFAULT_VERTEX_CAP).unwrap();
    assert!(cache.path(&quot).exists());
    let loaded = cache.load(&quot).unwrap().unwrap();
    assert_eq!(loaded.order(), built.order());
    assert_eq!(loaded.diameter(), built.diameter());
    for v in 0..built.order() {
        assert_eq!(loaded.neighbors(v), built.neighbors(v));
        assert_eq!(loaded.distance(3, v), built.distance(3, v));
    }
}

#[test]
fn keys_separate_moduli_and_generators() {
    let dir = tempfile::tempdir().unwrap();
    let cache = GraphCache::new(dir.path()).unwrap();
    let a = q(GroupSpec::free_abelian(2).unwrap(), 8);
    let b = q(GroupSpec::free_abelian(2).unwrap(), 16);
    let c = q(GroupSpec::unitriangular(3).unwrap(), 8);
    assert_ne!(cache.path(&a), cache.path(&b));
    assert_ne!(cache.path(&a), cache.path(&c));
}

#[test]
fn corrupt_entries_are_rejected_and_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = GraphCache::new(dir.path()).unwrap();
    let quot = q(GroupSpec::free_abelian(2).unwrap(), 10);
    let g = CayleyGraph::build(quot.clone(), DEFAULT_VERTEX_CAP).unwrap();
    let path = cache.store(&g).unwrap();

    let mut bytes = fs::read(&path).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x7f;
    fs::write(&path, &bytes).unwrap();
    assert!(matches!(cache.load(&quot), Err(Error::CacheFormat(_))));
    let rebuilt = cache.get_or_build(quot.clone(), DEFAULT_VERTEX_CAP).unwrap();
    assert_eq!(rebuilt.diameter(), 10);
    assert!(cache.load(&quot).unwrap().is_some());

    fs::write(&path, &bytes[..40]).unwrap();
    assert!(matches!(cache.load(&quot), Err(Error::CacheFormat(_))));
    fs::write(&path, b"not a cache file at all, but long enough to hold a header").unwrap();
    assert!(matches!(cache.load(&quot), Err(Error::CacheFormat(_))));

    // an entry for another quotient copied over this key
    let other = CayleyGraph::build(q(GroupSpec::free_abelian(2).unwrap(), 12), DEFAULT_VERTEX_CAP).unwrap();
    let other_path = cache.store(&other).unwrap();
    fs::copy(&other_path, &path).unwrap();
    assert!(matches!(cache.load(&quot), Err(Error::CacheFormat(_))));
}

fn aged_entries(cache: &GraphCache, moduli: &[u64]) -> Vec<(std::path::PathBuf, u64)> {
    let base = SystemTime::now() - Duration::from_secs(3600);
    moduli
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let g = CayleyGraph::build(q(GroupSpec::free_abelian(1).unwrap(), m), DEFAULT_VERTEX_CAP).unwrap();
            let p = cache.store(&g).unwrap();
            let f = fs::File::options().write(true).open(&p).unwrap();
            f.set_modified(base + Duration::from_secs(60 * i as u64)).unwrap();
            let len = fs::metadata(&p).unwrap().len();
            (p, len)
        })
        .collect()
}

#[test]
fn gc_empty() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cache_gc(dir.path(), 0).unwrap(), 0);
}

#[test]
fn gc_evicts_least_recent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = GraphCache::new(dir.path()).unwrap();
    let entries = aged_entries(&cache, &[5, 6, 7]);
    let total: u64 = entries.iter().map(|e| e.1).sum();
    fs::write(dir.path().join("notes.txt"), "kept").unwrap();

    // over budget by one entry: the oldest goes
    let freed = cache_gc(dir.path(), total - 1).unwrap();
    assert_eq!(freed, entries[0].1);
    assert!(!entries[0].0.exists());
    assert!(entries[1].0.exists() && entries[2].0.exists());
    assert_eq!(cache_gc(dir.path(), total).unwrap(), 0);
}

#[test]
fn gc_loading_refreshes_recency() {
    let dir = tempfile::tempdir().unwrap();
    let cache = GraphCache::new(dir.path()).unwrap();
    let entries = aged_entries(&cache, &[5, 6]);
    cache.load(&q(GroupSpec::free_abelian(1).unwrap(), 5)).unwrap().unwrap();
    let freed = cache_gc(dir.path(), entries[0].1.max(entries[1].1)).unwrap();
    assert_eq!(freed, entries[1].1);
    assert!(entries[0].0.exists());
}

#[test]
fn gc_zero_budget() {
    let dir = tempfile::tempdir().unwrap();
    let cache = GraphCache::new(dir.path()).unwrap();
    let entries = aged_entries(&cache, &[4, 9, 11]);
    let total: u64 = entries.iter().map(|e| e.1).sum();
    assert_eq!(cache_gc(dir.path(), 0).unwrap(), total);
    assert!(entries.iter().all(|e| !e.0.exists()));
}
