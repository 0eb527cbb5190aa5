//! Profiles, persisted artifacts, the results cache and table reproduction.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::HarnessError;
use crate::graph::catalog_graph;
use crate::model::{ConstraintEnumerationPolicy, Factor, ProductInstance};
use crate::oracle::{two_pebbling_tables, OracleOptions};
use crate::profile::PebblingProfile;
use crate::reference::{self, base_graph, ReferenceRecord};
use crate::search::{run_algorithm1, SearchOptions, SearchReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    schema_version: u32,
    kind: String,
    data: T,
}

/// Pretty JSON wrapped with the schema version and a document kind.
pub fn to_interchange<T: Serialize>(kind: &str, data: &T) -> String {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        kind: kind.to_string(),
        data,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("serializable");
    s.push('\n');
    s
}

pub fn from_interchange<T: DeserializeOwned>(kind: &str, text: &str, path: &str) -> Result<T, HarnessError> {
    let json = |source| HarnessError::Json {
        path: path.to_string(),
        source,
    };
    let head: Envelope<serde_json::Value> = serde_json::from_str(text).map_err(json)?;
    if head.schema_version != SCHEMA_VERSION {
        return Err(HarnessError::Schema {
            path: path.to_string(),
            found: head.schema_version,
            expected: SCHEMA_VERSION,
        });
    }
    if head.kind != kind {
        return Err(HarnessError::Kind {
            path: path.to_string(),
            expected: kind.to_string(),
            found: head.kind,
        });
    }
    serde_json::from_value(head.data).map_err(json)
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

pub const PROFILES_KIND: &str = "profiles";
pub const REPORT_KIND: &str = "search-report";
pub const REPRODUCE_KIND: &str = "reproduce-report";

pub fn load_profiles(path: &Path) -> Result<Vec<PebblingProfile>, HarnessError> {
    let profiles: Vec<PebblingProfile> = from_interchange(PROFILES_KIND, &read(path)?, &path.display().to_string())?;
    for p in &profiles {
        p.validate().map_err(|reason| HarnessError::Profile {
            name: p.name.clone(),
            reason,
        })?;
    }
    Ok(profiles)
}

pub fn save_profiles(path: &Path, profiles: &[PebblingProfile]) -> Result<(), HarnessError> {
    write_file(path, &to_interchange(PROFILES_KIND, &profiles))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileSource {
    Override,
    Cache,
    Oracle,
}

/// Finds a profile per graph: explicit overrides first, then the on-disk
/// cache, then the exact oracle.
#[derive(Debug, Clone, Default)]
pub struct ProfileResolver {
    pub overrides: BTreeMap<String, PebblingProfile>,
    pub cache_dir: Option<PathBuf>,
    pub oracle: OracleOptions,
}

impl ProfileResolver {
    /// The profiles the published computations used, for every base graph.
    pub fn with_published_profiles() -> Self {
        let mut r = ProfileResolver::default();
        for b in reference::BASE_GRAPHS {
            r.add_override(reference::published_profile(b.catalog).expect("base graph"));
        }
        r
    }

    pub fn add_override(&mut self, p: PebblingProfile) {
        self.overrides.insert(p.name.clone(), p);
    }

    fn cache_path(&self, name: &str) -> Option<PathBuf> {
        let safe: String = name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect();
        self.cache_dir
            .as_ref()
            .map(|d| d.join("profiles").join(format!("{safe}.json")))
    }

    pub fn resolve(&self, name: &str) -> Result<(PebblingProfile, ProfileSource), HarnessError> {
        if let Some(p) = self.overrides.get(name) {
            return Ok((p.clone(), ProfileSource::Override));
        }
        if let Some(path) = self.cache_path(name).filter(|p| p.is_file()) {
            if let Ok(mut v) = load_profiles(&path) {
                if let Some(p) = v.pop().filter(|p| p.name == name) {
                    return Ok((p, ProfileSource::Cache));
                }
            }
        }
        let g = catalog_graph(name)?;
        let p = two_pebbling_tables(&g, &self.oracle)?;
        if let Some(path) = self.cache_path(name) {
            save_profiles(&path, std::slice::from_ref(&p))?;
        }
        Ok((p, ProfileSource::Oracle))
    }

    pub fn factor(&self, name: &str) -> Result<Factor, HarnessError> {
        let (p, _) = self.resolve(name)?;
        Ok(Factor::new(catalog_graph(name)?, p)?)
    }

    pub fn instance(&self, g: &str, h: &str) -> Result<ProductInstance, HarnessError> {
        Ok(ProductInstance::new(self.factor(g)?, self.factor(h)?, (0, 0))?)
    }
}

/// Everything a cached search result depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub g: String,
    pub h: String,
    pub root_policy: String,
    pub policy: String,
    pub solver: String,
    pub schedule: Vec<f64>,
    pub profiles: [PebblingProfile; 2],
}

impl CacheKey {
    pub fn new(inst: &ProductInstance, policy: &ConstraintEnumerationPolicy, opts: &SearchOptions) -> Self {
        CacheKey {
            g: inst.g.graph.name().to_string(),
            h: inst.h.graph.name().to_string(),
            root_policy: "orbit-representatives".into(),
            policy: policy.fingerprint(),
            solver: opts.solver.id().into(),
            schedule: opts.phases(),
            profiles: [inst.g.profile.clone(), inst.h.profile.clone()],
        }
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("serializable")))
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    report: SearchReport,
}

/// Completed search reports on disk, one file per key digest. Writes go
/// through a lock so concurrent rows never interleave.
#[derive(Debug)]
pub struct ResultsCache {
    dir: PathBuf,
    lock: Mutex<()>,
}

impl ResultsCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ResultsCache {
            dir: dir.into(),
            lock: Mutex::new(()),
        }
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join("results").join(format!("{}.json", key.digest()))
    }

    /// Stored text for `key`, verbatim.
    pub fn get_raw(&self, key: &CacheKey) -> Option<String> {
        std::fs::read_to_string(self.path(key)).ok()
    }

    pub fn get(&self, key: &CacheKey) -> Option<SearchReport> {
        let text = self.get_raw(key)?;
        let entry: CacheEntry = from_interchange("cache-entry", &text, "cache").ok()?;
        (entry.key == *key).then_some(entry.report)
    }

    /// Only complete searches are stored.
    pub fn put(&self, key: &CacheKey, report: &SearchReport) -> Result<(), HarnessError> {
        if !report.complete {
            return Ok(());
        }
        let _guard = self.lock.lock().unwrap();
        let entry = CacheEntry {
            key: key.clone(),
            report: report.clone(),
        };
        write_file(&self.path(key), &to_interchange("cache-entry", &entry))
    }
}

/// Runs the root search for `g □ h`, consulting the cache first.
pub fn bound_for(
    inst: &ProductInstance,
    policy: &ConstraintEnumerationPolicy,
    opts: &SearchOptions,
    cache: Option<&ResultsCache>,
) -> Result<(SearchReport, bool), HarnessError> {
    let key = CacheKey::new(inst, policy, opts);
    if let Some(hit) = cache.and_then(|c| c.get(&key)) {
        return Ok((hit, true));
    }
    let report = run_algorithm1(inst, policy, opts)?;
    if let Some(c) = cache {
        c.put(&key, &report)?;
    }
    Ok((report, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Match,
    /// Strictly smaller than the published bound.
    Better,
    Worse,
    SkippedBudget,
    /// Not attempted (the published run failed too).
    Skipped,
    Failed,
}

impl std::fmt::Display for RowStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RowStatus::Match => "match",
            RowStatus::Better => "better",
            RowStatus::Worse => "worse",
            RowStatus::SkippedBudget => "skipped-budget",
            RowStatus::Skipped => "skipped",
            RowStatus::Failed => "failed",
        })
    }
}

pub fn classify(published: u64, computed: i64) -> RowStatus {
    match computed.cmp(&(published as i64)) {
        std::cmp::Ordering::Equal => RowStatus::Match,
        std::cmp::Ordering::Less => RowStatus::Better,
        std::cmp::Ordering::Greater => RowStatus::Worse,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceRow {
    pub label: String,
    pub g: String,
    pub h: String,
    pub published_bound: Option<u64>,
    pub graham: u64,
    pub computed: Option<i64>,
    pub status: RowStatus,
    pub seconds: f64,
    pub published_seconds: Option<f64>,
    pub budget_seconds: Option<f64>,
    pub cached: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceReport {
    pub table: u8,
    pub profile_notes: Vec<String>,
    pub rows: Vec<ReproduceRow>,
}

#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    pub search: SearchOptions,
    pub policy: ConstraintEnumerationPolicy,
    /// Per-row wall-clock budget; by default ten times the published time.
    pub row_budget: Option<Duration>,
    /// Only rows whose label (e.g. `LxK44`) is listed.
    pub only: Option<Vec<String>>,
    /// Rows run concurrently.
    pub jobs: usize,
    /// Attempt rows whose published run failed.
    pub attempt_failed_rows: bool,
}

impl ReproduceOptions {
    pub fn new(search: SearchOptions) -> Self {
        ReproduceOptions {
            search,
            policy: ConstraintEnumerationPolicy::default(),
            row_budget: None,
            only: None,
            jobs: 1,
            attempt_failed_rows: false,
        }
    }

    fn budget_for(&self, r: &ReferenceRecord) -> Option<Duration> {
        self.row_budget
            .or_else(|| r.seconds.map(|s| Duration::from_secs_f64(10.0 * s)))
    }
}

/// Where the model inputs differ from the printed base-graph values.
pub fn profile_notes(records: &[ReferenceRecord], resolver: &ProfileResolver) -> Vec<String> {
    let mut labels: Vec<&str> = records.iter().flat_map(|r| [r.g, r.h]).collect();
    labels.sort_unstable();
    labels.dedup();
    let mut notes = Vec::new();
    for l in labels {
        let b = base_graph(l).expect("known label");
        let used = resolver.overrides.get(b.catalog).map(|p| p.pi);
        if used != Some(b.printed_pi) {
            notes.push(format!(
                "{} ({}): printed pi = {}, model input pi = {}",
                b.label,
                b.catalog,
                b.printed_pi,
                used.map_or("oracle".to_string(), |p| p.to_string())
            ));
        }
    }
    notes
}

fn run_row(
    r: &ReferenceRecord,
    opts: &ReproduceOptions,
    resolver: &ProfileResolver,
    cache: Option<&ResultsCache>,
) -> ReproduceRow {
    let start = Instant::now();
    let budget = opts.budget_for(r);
    let mut row = ReproduceRow {
        label: r.label(),
        g: r.g_catalog().into(),
        h: r.h_catalog().into(),
        published_bound: r.bound,
        graham: r.graham,
        computed: None,
        status: RowStatus::Skipped,
        seconds: 0.0,
        published_seconds: r.seconds,
        budget_seconds: budget.map(|b| b.as_secs_f64()),
        cached: false,
        note: None,
    };
    if r.bound.is_none() && !opts.attempt_failed_rows {
        row.note = Some("published run failed; not attempted".into());
        return row;
    }
    if budget == Some(Duration::ZERO) {
        row.status = RowStatus::SkippedBudget;
        return row;
    }
    let mut search = opts.search.clone();
    search.budget = budget;
    search.jobs = 1;
    let outcome = resolver
        .instance(r.g_catalog(), r.h_catalog())
        .and_then(|inst| bound_for(&inst, &opts.policy, &search, cache));
    row.seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok((rep, cached)) => {
            row.cached = cached;
            if rep.complete {
                row.computed = Some(rep.final_bound);
                row.status = r.bound.map_or(RowStatus::Match, |b| classify(b, rep.final_bound));
            } else {
                row.status = RowStatus::SkippedBudget;
                row.note = Some(format!(
                    "budget spent; partial bound {} with {} unresolved root(s)",
                    rep.final_bound,
                    rep.unresolved.len()
                ));
            }
        }
        Err(e) => {
            row.status = RowStatus::Failed;
            row.note = Some(e.to_string());
        }
    }
    row
}

/// Recomputes one published table. Row failures are recorded and the run
/// continues.
pub fn reproduce(
    table: u8,
    opts: &ReproduceOptions,
    resolver: &ProfileResolver,
    cache: Option<&ResultsCache>,
) -> Result<ReproduceReport, HarnessError> {
    let records: Vec<ReferenceRecord> = reference::table(table)
        .ok_or(HarnessError::UnknownTable(table))?
        .into_iter()
        .filter(|r| opts.only.as_ref().is_none_or(|o| o.iter().any(|l| *l == r.label())))
        .collect();
    let slots: Vec<Mutex<Option<ReproduceRow>>> = records.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let k = next.fetch_add(1, Ordering::SeqCst);
        let Some(r) = records.get(k) else { break };
        let row = run_row(r, opts, resolver, cache);
        log::info!("table {table} {}: {} ({:?})", row.label, row.status, row.computed);
        *slots[k].lock().unwrap() = Some(row);
    };
    let jobs = opts.jobs.max(1).min(records.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(worker);
        }
    });
    Ok(ReproduceReport {
        table,
        profile_notes: profile_notes(&records, resolver),
        rows: slots
            .into_iter()
            .map(|m| m.into_inner().unwrap().expect("row ran"))
            .collect(),
    })
}

pub fn render_report(rep: &ReproduceReport) -> String {
    let mut out = format!("table {}\n", rep.table);
    for n in &rep.profile_notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out.push_str(&format!(
        "{:<10} {:>8} {:>9} {:>9} {:<15} {:>9} {:>9}\n",
        "product", "graham", "published", "computed", "status", "seconds", "pub_s"
    ));
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    for r in &rep.rows {
        out.push_str(&format!(
            "{:<10} {:>8} {:>9} {:>9} {:<15} {:>9.1} {:>9}\n",
            r.label,
            r.graham,
            opt(r.published_bound.map(|b| b.to_string())),
            opt(r.computed.map(|b| b.to_string())),
            r.status.to_string(),
            r.seconds,
            opt(r.published_seconds.map(|s| format!("{s:.1}"))),
        ));
        if let Some(n) = &r.note {
            out.push_str(&format!("           {n}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SolverKind;

    #[test]
    fn interchange_round_trip_and_checks() {
        let p = vec![reference::published_profile("lemke").unwrap()];
        let text = to_interchange(PROFILES_KIND, &p);
        let back: Vec<PebblingProfile> = from_interchange(PROFILES_KIND, &text, "mem").unwrap();
        assert_eq!(back, p);
        assert!(matches!(
            from_interchange::<Vec<PebblingProfile>>(REPORT_KIND, &text, "mem"),
            Err(HarnessError::Kind { .. })
        ));
        let old = text.replace("\"schema_version\": 1", "\"schema_version\": 0");
        assert!(matches!(
            from_interchange::<Vec<PebblingProfile>>(PROFILES_KIND, &old, "mem"),
            Err(HarnessError::Schema { .. })
        ));
    }

    #[test]
    fn profile_files_are_validated() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        let mut bad = reference::published_profile("lemke").unwrap();
        bad.two_peb_mon = Some(vec![1; 8]);
        save_profiles(&path, &[bad]).unwrap();
        assert!(matches!(load_profiles(&path), Err(HarnessError::Profile { .. })));
    }

    #[test]
    fn resolver_prefers_overrides_then_cache() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = ProfileResolver {
            cache_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        let (p, src) = r.resolve("cycle:5").unwrap();
        assert_eq!((p.pi, src), (5, ProfileSource::Oracle));
        assert_eq!(r.resolve("cycle:5").unwrap().1, ProfileSource::Cache);
        r.add_override(PebblingProfile::with_default_tables("cycle:5", 5, 6));
        assert_eq!(
            r.resolve("cycle:5").unwrap(),
            (
                PebblingProfile::with_default_tables("cycle:5", 5, 6),
                ProfileSource::Override
            )
        );
    }

    #[test]
    fn published_profiles_note_the_printed_mismatches() {
        let r = ProfileResolver::with_published_profiles();
        let notes = profile_notes(&reference::table(6).unwrap(), &r);
        assert_eq!(notes.len(), 2, "{notes:?}");
        assert!(notes.iter().any(|n| n.starts_with("K44")));
        assert!(notes.iter().any(|n| n.starts_with("P8")));
    }

    #[test]
    fn cache_key_tracks_policy() {
        let r = ProfileResolver::with_published_profiles();
        let inst = r.instance("complete:8", "complete:8").unwrap();
        let opts = SearchOptions::new(SolverKind::Cbc);
        let a = CacheKey::new(&inst, &Default::default(), &opts);
        let policy = ConstraintEnumerationPolicy {
            star_max_size: 3,
            ..Default::default()
        };
        let b = CacheKey::new(&inst, &policy, &opts);
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest(), CacheKey::new(&inst, &Default::default(), &opts).digest());
    }

    #[test]
    fn zero_budget_skips_every_row() {
        let mut o = ReproduceOptions::new(SearchOptions::new(SolverKind::Cbc));
        o.row_budget = Some(Duration::ZERO);
        let rep = reproduce(6, &o, &ProfileResolver::with_published_profiles(), None).unwrap();
        assert_eq!(rep.rows.len(), 15);
        assert!(rep
            .rows
            .iter()
            .all(|r| r.status == RowStatus::SkippedBudget && r.computed.is_none()));
        let p12 = reproduce(8, &o, &ProfileResolver::with_published_profiles(), None).unwrap();
        assert_eq!(
            p12.rows.iter().find(|r| r.label == "P12xP12").unwrap().status,
            RowStatus::Skipped
        );
        assert!(render_report(&rep).contains("skipped-budget"));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(64, 64), RowStatus::Match);
        assert_eq!(classify(64, 63), RowStatus::Better);
        assert_eq!(classify(64, 68), RowStatus::Worse);
        assert!(matches!(
            reproduce(
                2,
                &ReproduceOptions::new(SearchOptions::new(SolverKind::Cbc)),
                &Default::default(),
                None
            ),
            Err(HarnessError::UnknownTable(2))
        ));
    }
}
