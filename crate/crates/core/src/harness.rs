//! Offline replay of weekly browsing logs and profile-convergence metrics.
//!
//! Profiles are compared with a benchmark profile set by topic membership:
//!
//! * precision = correct / (correct + missing)
//! * error rate = incorrect / (correct + incorrect + missing)
//!
//! where *correct* topics are in both profiles, *missing* only in the
//! benchmark and *incorrect* only in the current profile. Both are averaged
//! over users. A user with an empty benchmark scores precision 0, and a user
//! with no topics on either side scores error rate 0.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use chrono::{Days, NaiveDate};
use serde::Serialize;

use crate::bootstrap::{classify_publications, new_system_profile, new_user_profile, BootstrapParams};
use crate::cop::CopResult;
use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::profile::{compute_profile, resolve_log, Event, InterestProfile, LogRecord};
use crate::recommend::PaperDatabase;
use crate::topic::TopicPath;

pub const CONTROL_RUN: &str = "control";
pub const NEW_SYSTEM_RUN: &str = "new-system";
pub const NEW_USER_RUN: &str = "new-user";

pub type ProfileSet = BTreeMap<String, InterestProfile>;

/// Event log cut into weeks. Segment 0 is always empty: it stands for the
/// moment the system starts, before any behaviour has been logged.
#[derive(Debug, Clone, PartialEq)]
pub struct WeeklySplit {
    start: NaiveDate,
    segments: Vec<Vec<LogRecord>>,
}

impl WeeklySplit {
    /// Buckets `records` into `weeks` seven-day weeks beginning at `start`.
    pub fn from_log(records: &[LogRecord], start: NaiveDate, weeks: usize) -> Result<Self> {
        let mut segments = vec![Vec::new(); weeks + 1];
        for r in records {
            let offset = (r.date - start).num_days();
            let week = if offset < 0 { None } else { Some(offset as usize / 7 + 1) };
            match week {
                Some(w) if w <= weeks => segments[w].push(r.clone()),
                _ => {
                    return Err(Error::Argument(format!(
                        "log record dated {} falls outside the {weeks} weeks starting {start}",
                        r.date
                    )))
                }
            }
        }
        for s in &mut segments {
            s.sort_by_key(|r| r.date);
        }
        Ok(WeeklySplit { start, segments })
    }

    /// Uses pre-cut segments; segment 0 must be empty and dates must not go
    /// backwards from one segment to the next.
    pub fn new(start: NaiveDate, segments: Vec<Vec<LogRecord>>) -> Result<Self> {
        if segments.first().is_some_and(|s| !s.is_empty()) {
            return Err(Error::Argument("week 0 must be an empty log".into()));
        }
        let mut last: Option<NaiveDate> = None;
        for (i, seg) in segments.iter().enumerate() {
            let (Some(lo), Some(hi)) = (seg.iter().map(|r| r.date).min(), seg.iter().map(|r| r.date).max()) else {
                continue;
            };
            if last.is_some_and(|l| lo < l) {
                return Err(Error::Argument(format!("week {i} starts before the previous week ends")));
            }
            last = Some(hi);
        }
        Ok(WeeklySplit { start, segments })
    }

    /// Number of weeks after week 0.
    pub fn weeks(&self) -> usize {
        self.segments.len().saturating_sub(1)
    }

    pub fn segment(&self, week: usize) -> &[LogRecord] {
        &self.segments[week]
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    /// Profiles for week `i` are computed as of `start + 7i` days.
    pub fn as_of(&self, week: usize) -> NaiveDate {
        self.start + Days::new(7 * week as u64)
    }

    /// Records of weeks `0..=week`.
    pub fn cumulative(&self, week: usize) -> impl Iterator<Item = &LogRecord> {
        self.segments[..=week].iter().flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub week: usize,
    #[serde(rename = "run")]
    pub run_label: String,
    pub precision: f64,
    pub error_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserMetricsRow {
    pub week: usize,
    pub run: String,
    pub user: String,
    pub precision: f64,
    pub error_rate: f64,
}

/// Topic-membership comparison of one user's profile against the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TopicCounts {
    pub correct: usize,
    pub incorrect: usize,
    pub missing: usize,
}

impl TopicCounts {
    pub fn compare(current: &BTreeSet<TopicPath>, benchmark: &BTreeSet<TopicPath>) -> Self {
        let correct = current.intersection(benchmark).count();
        TopicCounts { correct, incorrect: current.len() - correct, missing: benchmark.len() - correct }
    }

    pub fn precision(&self) -> f64 {
        let denom = self.correct + self.missing;
        if denom == 0 {
            0.0
        } else {
            self.correct as f64 / denom as f64
        }
    }

    pub fn error_rate(&self) -> f64 {
        let denom = self.correct + self.incorrect + self.missing;
        if denom == 0 {
            0.0
        } else {
            self.incorrect as f64 / denom as f64
        }
    }
}

/// Per-user topic counts; both sets must cover the same users.
pub fn compare_profiles(current: &ProfileSet, benchmark: &ProfileSet) -> Result<BTreeMap<String, TopicCounts>> {
    if current.is_empty() {
        return Err(Error::Argument("no users to compare".into()));
    }
    if !current.keys().eq(benchmark.keys()) {
        let a: BTreeSet<_> = current.keys().collect();
        let b: BTreeSet<_> = benchmark.keys().collect();
        let odd: Vec<&str> = a.symmetric_difference(&b).map(|s| s.as_str()).collect();
        return Err(Error::Argument(format!("user sets differ: {}", odd.join(", "))));
    }
    Ok(current
        .iter()
        .map(|(user, p)| (user.clone(), TopicCounts::compare(&p.topics(), &benchmark[user].topics())))
        .collect())
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

pub fn profile_precision(current: &ProfileSet, benchmark: &ProfileSet) -> Result<f64> {
    Ok(mean(compare_profiles(current, benchmark)?.values().map(TopicCounts::precision)))
}

pub fn profile_error_rate(current: &ProfileSet, benchmark: &ProfileSet) -> Result<f64> {
    Ok(mean(compare_profiles(current, benchmark)?.values().map(TopicCounts::error_rate)))
}

/// Everything one replay run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayRun {
    pub label: String,
    /// Profiles per week, index 0 being week 0.
    pub profiles: Vec<ProfileSet>,
    /// The benchmark: the control run's final-week profiles.
    pub benchmark: ProfileSet,
    pub rows: Vec<MetricsRow>,
    pub per_user: Vec<UserMetricsRow>,
}

/// Inputs shared by every run of one experiment.
#[derive(Debug, Clone, Copy)]
pub struct Experiment<'a> {
    pub kb: &'a KnowledgeBase,
    pub papers: &'a PaperDatabase,
    pub logs: &'a WeeklySplit,
    pub users: &'a [String],
    pub params: &'a BootstrapParams,
}

impl Experiment<'_> {
    fn events(&self) -> Result<Vec<(usize, Event)>> {
        if self.papers.is_empty() {
            return Err(Error::State("paper database is empty; train and run the classifier first".into()));
        }
        let mut out = Vec::new();
        for week in 0..=self.logs.weeks() {
            let (events, unresolved) = resolve_log(self.logs.segment(week), self.papers);
            for u in &unresolved {
                tracing::warn!(user = %u.record.user, reason = %u.reason, "log record skipped");
            }
            out.extend(events.into_iter().map(|e| (week, e)));
        }
        Ok(out)
    }

    fn behaviour_profiles(&self, events: &[(usize, Event)], week: usize) -> ProfileSet {
        let as_of = self.logs.as_of(week);
        self.users
            .iter()
            .map(|user| {
                let mine: Vec<Event> = events
                    .iter()
                    .filter(|(w, e)| *w <= week && e.user == *user)
                    .map(|(_, e)| e.clone())
                    .collect();
                let outcome = compute_profile(user, &mine, self.kb.forest(), as_of);
                for r in &outcome.rejected {
                    tracing::warn!(%user, reason = %r.reason, "event skipped");
                }
                (user.clone(), outcome.profile)
            })
            .collect()
    }

    fn bootstrap_profiles(&self) -> Result<ProfileSet> {
        self.users
            .iter()
            .map(|user| {
                let pubs = classify_publications(self.kb, user, self.papers)?;
                Ok((user.clone(), new_system_profile(user, &pubs, self.kb.forest(), self.params)?))
            })
            .collect()
    }

    /// Replays weeks `0..=W`. Week `i` profiles are built from the logs of
    /// weeks `0..=i`; with `bootstrap_on` the new-system profile is added
    /// to every week's behaviour profile. Metrics are taken against the
    /// control run's final week.
    pub fn run(&self, bootstrap_on: bool) -> Result<ReplayRun> {
        if self.users.is_empty() {
            return Err(Error::Argument("replay needs at least one user".into()));
        }
        let events = self.events()?;
        let weeks = self.logs.weeks();
        let control: Vec<ProfileSet> = (0..=weeks).map(|w| self.behaviour_profiles(&events, w)).collect();
        let benchmark = control[weeks].clone();

        let (label, profiles) = if bootstrap_on {
            let boot = self.bootstrap_profiles()?;
            let merged = control
                .into_iter()
                .enumerate()
                .map(|(w, set)| {
                    set.into_iter()
                        .map(|(user, behaviour)| {
                            let mut p = boot[&user].merged(&behaviour);
                            p.as_of = self.logs.as_of(w);
                            (user, p)
                        })
                        .collect()
                })
                .collect();
            (NEW_SYSTEM_RUN, merged)
        } else {
            (CONTROL_RUN, control)
        };

        let mut rows = Vec::new();
        let mut per_user = Vec::new();
        for (week, set) in profiles.iter().enumerate() {
            let counts = compare_profiles(set, &benchmark)?;
            rows.push(MetricsRow {
                week,
                run_label: label.to_owned(),
                precision: mean(counts.values().map(TopicCounts::precision)),
                error_rate: mean(counts.values().map(TopicCounts::error_rate)),
            });
            per_user.extend(counts.iter().map(|(user, c)| UserMetricsRow {
                week,
                run: label.to_owned(),
                user: user.clone(),
                precision: c.precision(),
                error_rate: c.error_rate(),
            }));
        }
        Ok(ReplayRun { label: label.to_owned(), profiles, benchmark, rows, per_user })
    }
}

pub fn replay_experiment(
    kb: &KnowledgeBase,
    papers: &PaperDatabase,
    logs: &WeeklySplit,
    users: &[String],
    bootstrap_on: bool,
    params: &BootstrapParams,
) -> Result<Vec<MetricsRow>> {
    Ok(Experiment { kb, papers, logs, users, params }.run(bootstrap_on)?.rows)
}

/// Builds each user's new-user profile from everyone else's final profiles
/// and scores it against the user's own final profile.
pub fn new_user_evaluation(
    kb: &KnowledgeBase,
    papers: &PaperDatabase,
    final_profiles: &ProfileSet,
    cop_per_user: &BTreeMap<String, CopResult>,
    params: &BootstrapParams,
) -> Result<(MetricsRow, Vec<UserMetricsRow>)> {
    if final_profiles.len() < 2 {
        return Err(Error::Argument("new-user evaluation needs at least two users".into()));
    }
    let empty = CopResult::default();
    let mut per_user = Vec::new();
    for (user, own) in final_profiles {
        let others: ProfileSet =
            final_profiles.iter().filter(|(u, _)| *u != user).map(|(u, p)| (u.clone(), p.clone())).collect();
        let pubs = classify_publications(kb, user, papers)?;
        let cop = cop_per_user.get(user).unwrap_or(&empty);
        let guess = new_user_profile(user, &pubs, cop, &others, kb.forest(), params)?;
        let c = TopicCounts::compare(&guess.topics(), &own.topics());
        per_user.push(UserMetricsRow {
            week: 0,
            run: NEW_USER_RUN.to_owned(),
            user: user.clone(),
            precision: c.precision(),
            error_rate: c.error_rate(),
        });
    }
    let row = MetricsRow {
        week: 0,
        run_label: NEW_USER_RUN.to_owned(),
        precision: mean(per_user.iter().map(|r| r.precision)),
        error_rate: mean(per_user.iter().map(|r| r.error_rate)),
    };
    Ok((row, per_user))
}

/// Writes `week,run,precision,error_rate` rows.
pub fn write_metrics_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `week,run,user,precision,error_rate` rows.
pub fn write_user_metrics_csv<W: Write>(rows: &[UserMetricsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(s: &str) -> TopicPath {
        s.parse().unwrap()
    }

    fn d() -> NaiveDate {
        NaiveDate::from_ymd_opt(2002, 1, 1).unwrap()
    }

    fn set(users: &[(&str, &[&str])]) -> ProfileSet {
        users
            .iter()
            .map(|(u, topics)| {
                (u.to_string(), InterestProfile::from_entries(*u, d(), topics.iter().map(|t| (tp(t), 1.0))))
            })
            .collect()
    }

    #[test]
    fn identical_profiles() {
        let s = set(&[("u", &["a", "b"])]);
        assert_eq!(profile_precision(&s, &s).unwrap(), 1.0);
        assert_eq!(profile_error_rate(&s, &s).unwrap(), 0.0);
    }

    #[test]
    fn partial_overlap() {
        let cur = set(&[("u", &["a", "b"])]);
        let bench = set(&[("u", &["b", "c"])]);
        assert_eq!(profile_precision(&cur, &bench).unwrap(), 0.5);
        assert!((profile_error_rate(&cur, &bench).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn disjoint_and_empty() {
        let cur = set(&[("u", &["a"])]);
        let bench = set(&[("u", &["b"])]);
        assert_eq!(profile_error_rate(&cur, &bench).unwrap(), 0.5);
        assert_eq!(profile_precision(&set(&[("u", &[])]), &bench).unwrap(), 0.0);
        // an empty benchmark scores zero precision by convention
        assert_eq!(profile_precision(&cur, &set(&[("u", &[])])).unwrap(), 0.0);
        assert_eq!(profile_error_rate(&set(&[("u", &[])]), &set(&[("u", &[])])).unwrap(), 0.0);
    }

    #[test]
    fn averages_over_users() {
        let cur = set(&[("u", &["a"]), ("v", &[])]);
        let bench = set(&[("u", &["a"]), ("v", &["x"])]);
        assert_eq!(profile_precision(&cur, &bench).unwrap(), 0.5);
    }

    #[test]
    fn user_sets_must_match() {
        let err = profile_precision(&set(&[("u", &["a"])]), &set(&[("v", &["a"])]));
        assert!(matches!(err, Err(Error::Argument(_))));
        assert!(profile_precision(&ProfileSet::new(), &ProfileSet::new()).is_err());
    }

    fn rec(date: &str) -> LogRecord {
        LogRecord {
            user: "u".into(),
            etype: crate::profile::EventType::PaperBrowsed,
            url: Some("x".into()),
            topic: None,
            date: date.parse().unwrap(),
        }
    }

    #[test]
    fn weekly_split_buckets_by_seven_days() {
        let logs = [rec("2002-01-01"), rec("2002-01-07"), rec("2002-01-08"), rec("2002-01-21")];
        let split = WeeklySplit::from_log(&logs, d(), 3).unwrap();
        assert_eq!(split.weeks(), 3);
        assert!(split.segment(0).is_empty());
        assert_eq!(split.segment(1).len(), 2);
        assert_eq!(split.segment(2).len(), 1);
        assert_eq!(split.segment(3).len(), 1);
        assert_eq!(split.as_of(1), "2002-01-08".parse().unwrap());
        assert_eq!(split.cumulative(2).count(), 3);
        assert!(WeeklySplit::from_log(&[rec("2001-12-31")], d(), 3).is_err());
        assert!(WeeklySplit::from_log(&[rec("2002-01-22")], d(), 3).is_err());
    }

    #[test]
    fn pre_cut_segments_are_checked() {
        assert!(WeeklySplit::new(d(), vec![vec![rec("2002-01-01")]]).is_err());
        assert!(WeeklySplit::new(d(), vec![vec![], vec![rec("2002-01-09")], vec![rec("2002-01-02")]]).is_err());
        assert!(WeeklySplit::new(d(), vec![vec![], vec![rec("2002-01-02")], vec![rec("2002-01-09")]]).is_ok());
    }

    #[test]
    fn csv_header_and_rows() {
        let rows = [MetricsRow { week: 0, run_label: "control".into(), precision: 0.0, error_rate: 0.0 }];
        let mut buf = Vec::new();
        write_metrics_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "week,run,precision,error_rate\n0,control,0.0,0.0\n");
    }
}
