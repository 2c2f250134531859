//! HTTP/JSON API for the annotation UI.
//!
//! Routes:
//! - `GET  /api/categories`
//! - `GET  /api/next?annotator=NAME`
//! - `GET  /api/pairs/{id}?annotator=NAME`
//! - `POST /api/annotations`
//! - `GET  /api/frequencies`
//!
//! Anything else is served from the UI directory when one is configured.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use paravar::annotation::{AnnotationError, AnnotationRecord, AnnotationStore, FrequencyTable, ManualCategory};
use paravar::classifier::{Cascade, Classifier, Diagnosis};
use paravar::corpus::{ParaphrasePair, ParsedSegment};
use paravar::synonymy::AccountingLevel;
use paravar::variation::normalize_lemma;
use paravar::{FunctionalRelationSet, LemmaIndel, SynonymLexicon, VariationClass};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

pub struct AppState {
    pairs: HashMap<String, ParaphrasePair>,
    lexicon: SynonymLexicon,
    funcs: FunctionalRelationSet,
    cascade: Cascade,
    /// Reads share the lock; every write goes through the store's `record`.
    store: RwLock<AnnotationStore>,
}

impl AppState {
    /// Pairs not in `store`'s sample are dropped; every sample ID must name
    /// a corpus pair.
    pub fn new(
        pairs: Vec<ParaphrasePair>,
        lexicon: SynonymLexicon,
        funcs: FunctionalRelationSet,
        cascade: Cascade,
        store: AnnotationStore,
    ) -> Result<Self, String> {
        let mut by_id: HashMap<String, ParaphrasePair> = pairs.into_iter().map(|p| (p.id.clone(), p)).collect();
        by_id.retain(|id, _| store.in_sample(id));
        if let Some(missing) = store.sample().iter().find(|id| !by_id.contains_key(*id)) {
            return Err(format!("sample pair {missing} is not in the corpus"));
        }
        Ok(AppState {
            pairs: by_id,
            lexicon,
            funcs,
            cascade,
            store: RwLock::new(store),
        })
    }

    fn diagnose(&self, pair: &ParaphrasePair) -> Diagnosis {
        Classifier::new(&self.lexicon, &self.funcs, &self.cascade).diagnose(pair)
    }
}

pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/categories", get(categories))
        .route("/api/next", get(next))
        .route("/api/pairs/{id}", get(pair_detail))
        .route("/api/annotations", post(annotate))
        .route("/api/frequencies", get(frequencies))
        .with_state(state);
    let app = match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(CorsLayer::permissive())
}

#[derive(Debug, Serialize)]
struct ApiError {
    error: String,
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(ApiError { error: message.into() })).into_response()
}

fn store_error(e: AnnotationError) -> Response {
    let status = match e {
        AnnotationError::UnknownPair(_) => StatusCode::NOT_FOUND,
        AnnotationError::EmptyCategories | AnnotationError::UnknownCategory(_) => StatusCode::BAD_REQUEST,
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    };
    error(status, e.to_string())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CategoryInfo {
    pub value: ManualCategory,
    pub title: String,
    pub gloss: String,
    pub key: u8,
}

async fn categories() -> Json<Vec<CategoryInfo>> {
    Json(
        ManualCategory::ALL
            .iter()
            .map(|&c| CategoryInfo {
                value: c,
                title: c.title().to_owned(),
                gloss: c.gloss().to_owned(),
                key: c.key(),
            })
            .collect(),
    )
}

#[derive(Debug, Deserialize)]
struct AnnotatorQuery {
    #[serde(default = "default_annotator")]
    annotator: String,
}

fn default_annotator() -> String {
    "default".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenView {
    pub surface: String,
    pub lemma: String,
    pub upos: String,
    pub deprel: String,
}

/// A `[start, end)` range of characters (Unicode scalar values) in a side's
/// text covering a token whose lemma is part of the lemma indel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Highlight {
    pub start: usize,
    pub end: usize,
    pub lemma: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideView {
    pub text: String,
    pub tokens: Vec<TokenView>,
    pub highlights: Vec<Highlight>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticsView {
    pub class: VariationClass,
    pub indel_count: usize,
    pub content_indel_count: usize,
    pub indel: LemmaIndel,
    pub accounting: AccountingLevel,
    pub synonym_matches: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairView {
    pub pair_id: String,
    pub label: String,
    pub position: usize,
    pub sample_size: usize,
    pub side1: SideView,
    pub side2: SideView,
    pub diagnostics: DiagnosticsView,
    pub annotation: Option<AnnotationRecord>,
}

/// Locates tokens in the text left to right and marks those whose lemma is
/// still owed to the indel multiset.
pub fn highlight_spans(seg: &ParsedSegment, indel_lemmas: &[String]) -> Vec<Highlight> {
    let mut owed: BTreeMap<&str, usize> = BTreeMap::new();
    for l in indel_lemmas {
        *owed.entry(l.as_str()).or_default() += 1;
    }
    let text = seg.text.as_str();
    let mut spans = Vec::new();
    let mut cursor = 0usize;
    for token in seg.tokens() {
        let Some(offset) = text[cursor..].find(token.surface.as_str()) else {
            continue;
        };
        let start_byte = cursor + offset;
        let end_byte = start_byte + token.surface.len();
        cursor = end_byte;
        if token.is_punct() {
            continue;
        }
        let lemma = normalize_lemma(&token.lemma);
        if let Some(n) = owed.get_mut(lemma.as_ref()) {
            if *n > 0 {
                *n -= 1;
                let start = text[..start_byte].chars().count();
                spans.push(Highlight {
                    start,
                    end: start + token.surface.chars().count(),
                    lemma: lemma.into_owned(),
                });
            }
        }
    }
    spans
}

fn side_view(seg: &ParsedSegment, indel_lemmas: &[String]) -> SideView {
    SideView {
        text: seg.text.clone(),
        tokens: seg
            .tokens()
            .map(|t| TokenView {
                surface: t.surface.clone(),
                lemma: t.lemma.clone(),
                upos: t.upos.clone(),
                deprel: t.deprel.clone(),
            })
            .collect(),
        highlights: highlight_spans(seg, indel_lemmas),
    }
}

fn pair_view(state: &AppState, store: &AnnotationStore, id: &str, annotator: &str) -> Option<PairView> {
    let pair = state.pairs.get(id)?;
    let position = store.sample().iter().position(|s| s == id)?;
    let d = state.diagnose(pair);
    Some(PairView {
        pair_id: pair.id.clone(),
        label: pair.label.to_string(),
        position,
        sample_size: store.sample().len(),
        side1: side_view(&pair.side1, &d.indel.only_in_side1),
        side2: side_view(&pair.side2, &d.indel.only_in_side2),
        diagnostics: DiagnosticsView {
            class: d.class,
            indel_count: d.indel.len(),
            content_indel_count: d.content_indel.len(),
            accounting: d.accounting.level,
            synonym_matches: d.accounting.matched_pairs.clone(),
            indel: d.indel,
        },
        annotation: store.get(id, annotator).cloned(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NextResponse {
    pub done: bool,
    pub annotated: usize,
    pub sample_size: usize,
    pub pair: Option<PairView>,
}

async fn next(State(state): State<Arc<AppState>>, Query(q): Query<AnnotatorQuery>) -> Response {
    let store = state.store.read().expect("store lock");
    let annotated = store
        .sample()
        .iter()
        .filter(|id| store.get(id, &q.annotator).is_some())
        .count();
    let pair = store
        .next_unannotated(&q.annotator)
        .and_then(|(_, id)| pair_view(&state, &store, id, &q.annotator));
    Json(NextResponse {
        done: pair.is_none(),
        annotated,
        sample_size: store.sample().len(),
        pair,
    })
    .into_response()
}

async fn pair_detail(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<AnnotatorQuery>,
) -> Response {
    let store = state.store.read().expect("store lock");
    match pair_view(&state, &store, &id, &q.annotator) {
        Some(view) => Json(view).into_response(),
        None => error(StatusCode::NOT_FOUND, format!("pair {id} is not in the active sample")),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AnnotationRequest {
    pub pair_id: String,
    pub categories: Vec<String>,
    #[serde(default = "default_annotator")]
    pub annotator: String,
}

async fn annotate(State(state): State<Arc<AppState>>, Json(req): Json<AnnotationRequest>) -> Response {
    let categories = match req
        .categories
        .iter()
        .map(|c| c.parse::<ManualCategory>())
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(c) => c,
        Err(e) => return store_error(e),
    };
    let record = AnnotationRecord::new(req.pair_id, categories, req.annotator, Utc::now());
    let mut store = state.store.write().expect("store lock");
    match store.record(record) {
        Ok(ack) => (StatusCode::CREATED, Json(ack)).into_response(),
        Err(e) => store_error(e),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FrequenciesResponse {
    #[serde(flatten)]
    pub table: FrequencyTable,
    pub sole_word_to_word_rate: f64,
}

async fn frequencies(State(state): State<Arc<AppState>>) -> Json<FrequenciesResponse> {
    let store = state.store.read().expect("store lock");
    Json(FrequenciesResponse {
        table: store.frequencies(),
        sole_word_to_word_rate: store.sole_category_rate(ManualCategory::WordToWord),
    })
}
