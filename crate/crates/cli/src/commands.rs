use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::Path;

use chrono::NaiveDate;
use ontorec::bootstrap::{classify_publications, new_system_profile, new_user_profile};
use ontorec::classify::{labelled_documents, read_manifest, read_training_labels, Stoplist, TopicClassifier};
use ontorec::cop::{auto_select_weights, identify_cop, CopResult};
use ontorec::harness::{new_user_evaluation, write_metrics_csv, write_user_metrics_csv, Experiment, WeeklySplit};
use ontorec::kb::RelationType;
use ontorec::profile::{browsed_urls, compute_profile, read_log, resolve_log, LogRecord};
use ontorec::recommend::{recommend, recommendation_records, PaperDatabase};
use ontorec::{load_kb, InterestProfile, KnowledgeBase, TopicPath};
use serde::Serialize;

use crate::config::Config;
use crate::{BootstrapArgs, CliError, Command, CopArgs, NewUserArgs, ProfileArgs, RecommendArgs, ReplayArgs, Switch};

type Out<'a> = &'a mut dyn Write;

pub fn run(config_path: &Path, command: Command, out: Out) -> Result<(), CliError> {
    let config = Config::load(config_path)?;
    match command {
        Command::KbLoad => kb_load(&config, out),
        Command::Train => train(&config, out),
        Command::Classify => classify(&config, out),
        Command::Profile(args) => profile(&config, args, out),
        Command::Recommend(args) => recommend_cmd(&config, args, out),
        Command::Cop(args) => cop(&config, args, out),
        Command::BootstrapNewSystem(args) => bootstrap_new_system(&config, args, out),
        Command::BootstrapNewUser(args) => bootstrap_new_user(&config, args, out),
        Command::Replay(args) => replay(&config, args, out),
    }
}

fn emit<T: Serialize>(out: Out, record: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, record)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct ProfileRecord<'a> {
    user: &'a str,
    topic: &'a TopicPath,
    interest: f64,
    date: NaiveDate,
}

fn emit_profile(out: Out, p: &InterestProfile) -> Result<(), CliError> {
    for (topic, interest) in p.iter() {
        emit(out, &ProfileRecord { user: &p.user, topic, interest, date: p.as_of })?;
    }
    Ok(())
}

fn kb(config: &Config) -> Result<KnowledgeBase, CliError> {
    let path = config.paths.input("kb", &config.paths.kb)?;
    Ok(load_kb(BufReader::new(File::open(path)?))?)
}

fn papers(config: &Config, kb: &KnowledgeBase) -> Result<PaperDatabase, CliError> {
    let path = config.paths.input("papers", &config.paths.papers)?;
    Ok(PaperDatabase::read(BufReader::new(File::open(path)?), kb.forest())?)
}

/// The paper database when one is configured and present, else empty.
fn papers_if_any(config: &Config, kb: &KnowledgeBase) -> Result<PaperDatabase, CliError> {
    match &config.paths.papers {
        Some(p) if p.exists() => papers(config, kb),
        _ => Ok(PaperDatabase::default()),
    }
}

fn logs(config: &Config) -> Result<Vec<LogRecord>, CliError> {
    let path = config.paths.input("logs", &config.paths.logs)?;
    Ok(read_log(BufReader::new(File::open(path)?))?)
}

fn log_users(records: &[LogRecord]) -> Vec<String> {
    records.iter().map(|r| r.user.clone()).collect::<BTreeSet<_>>().into_iter().collect()
}

fn behaviour_profile(
    kb: &KnowledgeBase,
    papers: &PaperDatabase,
    records: &[LogRecord],
    user: &str,
    as_of: NaiveDate,
) -> InterestProfile {
    let mine: Vec<LogRecord> = records.iter().filter(|r| r.user == user).cloned().collect();
    let (events, unresolved) = resolve_log(&mine, papers);
    for u in &unresolved {
        tracing::warn!(%user, reason = %u.reason, "log record skipped");
    }
    let outcome = compute_profile(user, &events, kb.forest(), as_of);
    for r in outcome.rejected.iter().filter(|r| r.event.date <= as_of) {
        tracing::warn!(%user, reason = %r.reason, "event skipped");
    }
    outcome.profile
}

fn reference_date(config: &Config, arg: Option<NaiveDate>) -> Result<NaiveDate, CliError> {
    arg.or(config.bootstrap.reference_date)
        .ok_or_else(|| CliError::Usage("no reference date: pass --reference-date or set bootstrap.reference_date".into()))
}

#[derive(Serialize)]
struct KbSummary {
    entities: usize,
    persons: usize,
    publications: usize,
    topics: usize,
    relations: usize,
    relation_frequency: BTreeMap<RelationType, usize>,
}

fn kb_load(config: &Config, out: Out) -> Result<(), CliError> {
    let kb = kb(config)?;
    emit(
        out,
        &KbSummary {
            entities: kb.entity_count(),
            persons: kb.persons().count(),
            publications: kb.publications().len(),
            topics: kb.forest().len(),
            relations: kb.relations().len(),
            relation_frequency: kb.relation_frequency(),
        },
    )
}

#[derive(Serialize)]
struct TrainSummary<'a> {
    model: &'a Path,
    documents: usize,
    terms: usize,
    rounds: usize,
}

fn stoplist(config: &Config) -> Result<Stoplist, CliError> {
    match &config.paths.stoplist {
        Some(_) => {
            let path = config.paths.input("stoplist", &config.paths.stoplist)?;
            Ok(Stoplist::from_reader(BufReader::new(File::open(path)?))?)
        }
        None => Ok(Stoplist::english()),
    }
}

fn train(config: &Config, out: Out) -> Result<(), CliError> {
    let kb = kb(config)?;
    let docs = read_manifest(&config.paths.input("corpus_manifest", &config.paths.corpus_manifest)?)?;
    let labels_path = config.paths.input("training", &config.paths.training)?;
    let labels = read_training_labels(BufReader::new(File::open(labels_path)?))?;
    let model_path = config.paths.output("model", &config.paths.model)?;

    let examples = labelled_documents(&docs, &labels)?;
    let n = examples.len();
    let classifier = TopicClassifier::train(examples, stoplist(config)?, kb.forest(), config.classifier)?;
    fs::write(&model_path, serde_json::to_vec(&classifier)?)?;
    emit(
        out,
        &TrainSummary {
            model: &model_path,
            documents: n,
            terms: classifier.dictionary().len(),
            rounds: classifier.model().rounds().len(),
        },
    )
}

fn classify(config: &Config, out: Out) -> Result<(), CliError> {
    let model_path = config.paths.input("model", &config.paths.model)?;
    let classifier: TopicClassifier = serde_json::from_reader(BufReader::new(File::open(model_path)?))
        .map_err(|e| CliError::State(format!("model is unreadable; retrain it: {e}")))?;
    let docs = read_manifest(&config.paths.input("corpus_manifest", &config.paths.corpus_manifest)?)?;
    let db = classifier.classify_documents(&docs)?;
    if let Some(path) = &config.paths.papers {
        db.write(File::create(path)?)?;
    }
    for p in db.papers() {
        emit(out, p)?;
    }
    Ok(())
}

fn profile(config: &Config, args: ProfileArgs, out: Out) -> Result<(), CliError> {
    let kb = kb(config)?;
    let papers = papers(config, &kb)?;
    let records = logs(config)?;
    let users = match args.user {
        Some(u) => vec![u],
        None => log_users(&records),
    };
    let profiles: Vec<InterestProfile> =
        users.iter().map(|u| behaviour_profile(&kb, &papers, &records, u, args.as_of)).collect();
    if let Some(path) = &args.export {
        let updated = ontorec::bootstrap::export_profiles(&profiles, &kb)?;
        updated.write_records(File::create(path)?)?;
    }
    for p in &profiles {
        emit_profile(out, p)?;
    }
    Ok(())
}

fn recommend_cmd(config: &Config, args: RecommendArgs, out: Out) -> Result<(), CliError> {
    let kb = kb(config)?;
    let papers = papers(config, &kb)?;
    let records = logs(config)?;
    let profile = behaviour_profile(&kb, &papers, &records, &args.user, args.as_of);
    let seen: Vec<LogRecord> = records.into_iter().filter(|r| r.date <= args.as_of).collect();
    let browsed = browsed_urls(&seen, &args.user);
    let recs = recommend(&profile, papers.papers(), &browsed, args.limit.unwrap_or(config.recommend.limit));
    for r in recommendation_records(&args.user, &recs) {
        emit(out, &r)?;
    }
    Ok(())
}

fn community(config: &Config, kb: &KnowledgeBase, seed: &str, max_depth: Option<usize>, auto: bool) -> Result<CopResult, CliError> {
    let weights = if auto { auto_select_weights(kb)? } else { config.cop.weights.clone() };
    Ok(identify_cop(kb, seed, &weights, max_depth.unwrap_or(config.cop.max_depth))?)
}

fn cop(config: &Config, args: CopArgs, out: Out) -> Result<(), CliError> {
    let kb = kb(config)?;
    for e in community(config, &kb, &args.seed, args.max_depth, args.auto_weights)?.entries {
        emit(out, &e)?;
    }
    Ok(())
}

fn bootstrap_new_system(config: &Config, args: BootstrapArgs, out: Out) -> Result<(), CliError> {
    let kb = kb(config)?;
    let papers = papers_if_any(config, &kb)?;
    let params = config.bootstrap_params(reference_date(config, args.reference_date)?);
    let people: Vec<String> = match args.user {
        Some(u) => vec![u],
        None => kb.persons().map(|p| p.id.clone()).collect(),
    };
    for person in &people {
        let pubs = classify_publications(&kb, person, &papers)?;
        emit_profile(out, &new_system_profile(person, &pubs, kb.forest(), &params)?)?;
    }
    Ok(())
}

fn bootstrap_new_user(config: &Config, args: NewUserArgs, out: Out) -> Result<(), CliError> {
    let kb = kb(config)?;
    let papers = papers_if_any(config, &kb)?;
    let mut params = config.bootstrap_params(reference_date(config, args.reference_date)?);
    if let Some(g) = args.gamma {
        params.gamma = g;
    }
    params.validate()?;
    let cop = community(config, &kb, &args.user, args.max_depth, false)?;

    // Similar users' profiles come from the log when there is one, and
    // from profiles asserted in the knowledge base otherwise.
    let records = match &config.paths.logs {
        Some(p) if p.exists() && !papers.is_empty() => logs(config)?,
        _ => Vec::new(),
    };
    let mut similar = BTreeMap::new();
    for e in &cop.entries {
        let from_log = behaviour_profile(&kb, &papers, &records, &e.person, params.reference_date);
        let profile = if from_log.is_empty() {
            kb.latest_interest_profile(&e.person, params.reference_date)
        } else {
            Some(from_log)
        };
        if let Some(p) = profile {
            similar.insert(e.person.clone(), p);
        }
    }
    let pubs = classify_publications(&kb, &args.user, &papers)?;
    emit_profile(out, &new_user_profile(&args.user, &pubs, &cop, &similar, kb.forest(), &params)?)
}

fn replay(config: &Config, args: ReplayArgs, out: Out) -> Result<(), CliError> {
    let kb = kb(config)?;
    let papers = papers(config, &kb)?;
    let records = logs(config)?;
    let (Some(start), Some(weeks)) = (config.replay.start, config.replay.weeks) else {
        return Err(CliError::Usage("replay needs replay.start and replay.weeks in the config".into()));
    };
    let split = WeeklySplit::from_log(&records, start, weeks)?;
    let users = log_users(&records);
    let params = config.bootstrap_params(config.bootstrap.reference_date.unwrap_or(start));
    params.validate()?;
    let exp = Experiment { kb: &kb, papers: &papers, logs: &split, users: &users, params: &params };

    let mut runs = vec![exp.run(false)?];
    if args.bootstrap == Switch::On {
        runs.push(exp.run(true)?);
    }
    let mut rows: Vec<_> = runs.iter().flat_map(|r| r.rows.clone()).collect();
    let mut per_user: Vec<_> = runs.iter().flat_map(|r| r.per_user.clone()).collect();
    if args.new_user {
        let cops = users
            .iter()
            .map(|u| Ok((u.clone(), community(config, &kb, u, None, false)?)))
            .collect::<Result<BTreeMap<_, _>, CliError>>()?;
        let (row, users_rows) = new_user_evaluation(&kb, &papers, &runs[0].benchmark, &cops, &params)?;
        rows.push(row);
        per_user.extend(users_rows);
    }
    if args.per_user {
        write_user_metrics_csv(&per_user, out)?;
    } else {
        write_metrics_csv(&rows, out)?;
    }
    Ok(())
}
