//! Worked examples from a small research department.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;

use chrono::NaiveDate;
use ontorec::bootstrap::{
    classify_publications, export_profiles, new_system_profile, new_user_profile, BootstrapParams,
    ClassifiedPublication,
};
use ontorec::cop::{identify_cop, CopResult, RelationWeights};
use ontorec::kb::RelationType;
use ontorec::recommend::PaperDatabase;
use ontorec::{load_kb, InterestProfile, KnowledgeBase, TopicPath};

fn department() -> KnowledgeBase {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/department.jsonl");
    load_kb(BufReader::new(File::open(path).unwrap())).unwrap()
}

fn tp(s: &str) -> TopicPath {
    s.parse().unwrap()
}

fn params() -> BootstrapParams {
    BootstrapParams::new(NaiveDate::from_ymd_opt(2002, 7, 1).unwrap())
}

fn profile_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2002, 6, 1).unwrap()
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

#[test]
fn stone_publications_give_new_system_profile() {
    let kb = department();
    let pubs = classify_publications(&kb, "stone", &PaperDatabase::default()).unwrap();
    assert_eq!(pubs.len(), 6);
    let p = new_system_profile("stone", &pubs, kb.forest(), &params()).unwrap();

    assert!(close(p.get(&tp("Knowledge Technology\\Knowledge Acquisition")), 0.5, 1e-9));
    assert!(close(p.get(&tp("AI\\Agents\\Recommender Systems")), 1.0, 1e-9));
    assert!(close(p.get(&tp("Knowledge Technology\\Ontology")), 1.0, 1e-9));
    // Two publications here are on knowledge management. A fuller
    // publication list would give 1.5.
    assert!(close(p.get(&tp("Knowledge Technology\\Knowledge Management")), 1.0, 1e-9));
    // 1 (own) + (1 + 0.5 + 0.5 + 0.5) / 2
    assert!(close(p.get(&tp("Knowledge Technology")), 2.25, 1e-9));
    assert!(close(p.get(&tp("AI\\Agents")), 0.5, 1e-9));
    assert!(close(p.get(&tp("AI")), 0.25, 1e-9));
}

fn similar_profiles(kb: &KnowledgeBase) -> BTreeMap<String, InterestProfile> {
    ["dunn", "reed", "baker", "ames", "stone"]
        .into_iter()
        .map(|p| (p.to_owned(), kb.interest_profile(p, profile_date()).unwrap()))
        .collect()
}

fn marsh_cop() -> CopResult {
    CopResult::from_entries([
        ("dunn", 1.0),
        ("baker", 0.82),
        ("reed", 0.82),
        ("ames", 0.47),
        ("stone", 0.46),
    ])
}

fn marsh_profile(kb: &KnowledgeBase) -> InterestProfile {
    let pubs = classify_publications(kb, "marsh", &PaperDatabase::default()).unwrap();
    assert_eq!(pubs, vec![ClassifiedPublication::new("pub-prefs", tp("AI\\Agents\\Recommender Systems"), 2001)]);
    new_user_profile("marsh", &pubs, &marsh_cop(), &similar_profiles(kb), kb.forest(), &params()).unwrap()
}

#[test]
fn marsh_recommender_systems_entry() {
    let kb = department();
    let p = marsh_profile(&kb);
    let got = p.get(&tp("AI\\Agents\\Recommender Systems"));
    assert!(close(got, 1.0 + 0.5 * (0.73 + 0.82 * 0.4 + 0.46), 1e-12));
    assert!(close(got, 1.76, 0.005));
}

#[test]
fn marsh_new_user_profile() {
    let kb = department();
    let p = marsh_profile(&kb);
    let want = [
        ("AI\\Agents\\Recommender Systems", 1.76),
        ("AI\\Agents\\Mobile Agents", 0.77),
        ("AI\\Distributed Systems", 0.6),
        ("Knowledge Technology\\Ontology", 0.42),
        ("Knowledge Technology\\Knowledge Devices", 0.37),
        ("Knowledge Technology\\Knowledge Management", 0.35),
        ("Knowledge Technology\\Knowledge Management\\CoP", 0.16),
    ];
    for (topic, want) in want {
        let got = p.get(&tp(topic));
        assert!(close(got, want, 0.005), "{topic}: {got} vs {want}");
    }
    // Only the publication term is inherited.
    assert!(close(p.get(&tp("AI\\Agents")), 0.5, 1e-12));
    assert!(close(p.get(&tp("AI")), 0.25, 1e-12));
    assert_eq!(p.len(), 9);
}

#[test]
fn exporting_marsh_asserts_interest_relations() {
    let kb = department();
    let p = marsh_profile(&kb);
    let updated = export_profiles(std::slice::from_ref(&p), &kb).unwrap();
    let asserted: Vec<_> = updated
        .relations()
        .iter()
        .filter(|r| r.source == "marsh" && r.rel_type == RelationType::HasResearchInterest)
        .collect();
    assert!(asserted.len() >= 7);
    let again = export_profiles(std::slice::from_ref(&p), &updated).unwrap();
    assert_eq!(again.relations().len(), updated.relations().len());
    assert_eq!(again.interest_profile("marsh", p.as_of).unwrap().entries(), p.entries());
}

#[test]
fn department_cop_without_interests_ranks_supervisor_first() {
    let kb = department();
    let weights = RelationWeights::new(RelationWeights::standard().iter().map(|(r, w)| {
        (r, if r == RelationType::HasResearchInterest { 0.0 } else { w })
    }))
    .unwrap();
    let cop = identify_cop(&kb, "marsh", &weights, 3).unwrap();
    let names: Vec<&str> = cop.entries.iter().map(|e| e.person.as_str()).collect();
    assert_eq!(names, ["dunn", "baker", "reed", "ames", "stone"]);
    // 0.7 supervision plus 0.3 * 0.3 across from the joint paper. Both
    // arrive on the same level, so onward spreading uses the 0.7 alone.
    let dunn = 0.7 + 0.09;
    assert!(close(cop.relevance("reed").unwrap(), 0.49 / dunn, 1e-12));
    assert!(close(cop.relevance("ames").unwrap(), 0.16 / dunn, 1e-12));
    assert!(close(cop.relevance("stone").unwrap(), 0.09 / dunn, 1e-12));
}

#[test]
fn department_cop_with_interests_is_normalised() {
    let kb = department();
    let cop = identify_cop(&kb, "marsh", &RelationWeights::standard(), 3).unwrap();
    assert_eq!(cop.len(), 5);
    assert_eq!(cop.entries[0].relevance, 1.0);
    assert!(cop.entries.iter().all(|e| e.relevance > 0.0 && e.relevance <= 1.0));
    assert!(cop.entries.windows(2).all(|w| w[0].relevance >= w[1].relevance));
}

#[test]
fn department_round_trips_through_records() {
    let kb = department();
    let mut buf = Vec::new();
    kb.write_records(&mut buf).unwrap();
    let again = load_kb(buf.as_slice()).unwrap();
    assert_eq!(again.records(), kb.records());
    assert_eq!(again.entity_count(), 13);
    assert_eq!(again.forest().len(), 11);
}
