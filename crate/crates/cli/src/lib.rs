//! Command-line front end for the `paravar` analyses.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod serve;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use paravar::annotation::AnnotationStore;
use paravar::SynonymLexicon;

use crate::commands::{
    default_sample_file, default_store, draw_sample, load_lexicon, load_pairs, read_sample, write_sample,
};
use crate::config::{Overrides, RunConfig};
use crate::error::InputResult;
use crate::report::Provenance;

#[derive(Debug, Parser)]
#[command(
    name = "paravar",
    version,
    about = "Lexical variation analysis for paraphrase corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Classify pairs into automatic variation classes.
    Classify,
    /// Indel histogram, overrepresented lemmas, accounting rates, proportions
    /// and lengths.
    Stats,
    /// Find pairs whose sides share a source segment in an aligned corpus.
    Pivot,
    /// Draw the seeded sample of unexplained pairs for manual annotation.
    Sample,
    /// Run the annotation service.
    Serve,
    /// Label distribution and annotation frequencies.
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Stats => "stats",
            Command::Pivot => "pivot",
            Command::Sample => "sample",
            Command::Serve => "serve",
            Command::Report => "report",
        }
    }
}

/// Runs a batch command and returns the files it wrote.
pub fn run_batch(command: Command, config: &RunConfig) -> Result<Vec<PathBuf>> {
    config.validate().input("invalid configuration")?;
    in_pool(config, || match command {
        Command::Classify => commands::cmd_classify(config),
        Command::Stats => commands::cmd_stats(config),
        Command::Pivot => commands::cmd_pivot(config),
        Command::Sample => commands::cmd_sample(config),
        Command::Report => commands::cmd_report(config),
        Command::Serve => anyhow::bail!("serve is not a batch command"),
    })
}

#[cfg(feature = "parallel")]
fn in_pool<T: Send>(config: &RunConfig, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("cannot start worker pool")?
            .install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn in_pool<T: Send>(_config: &RunConfig, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    f()
}

/// Loads everything the annotation service needs, drawing and saving the
/// sample first if the sample file does not exist yet.
pub fn prepare_service(config: &RunConfig) -> Result<serve::AppState> {
    config.validate().input("invalid configuration")?;
    let mut prov = Provenance::new("serve", config);
    let pairs = load_pairs(config, &mut prov)?;
    let lexicon = load_lexicon(config, &pairs, &mut prov)?;
    let sample_path = default_sample_file(config);
    let sample = if sample_path.exists() {
        read_sample(&sample_path)?
    } else {
        let lex = lexicon
            .as_ref()
            .ok_or_else(|| {
                anyhow::anyhow!(
                    "{} does not exist and no lexicon is configured to draw it",
                    sample_path.display()
                )
            })
            .input("sample")?;
        let (ids, _) = draw_sample(config, &pairs, lex)?;
        write_sample(&sample_path, &ids)?;
        ids
    };
    let store_path = default_store(config);
    if let Some(parent) = store_path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let store = AnnotationStore::open(&store_path, sample).input("annotation store")?;
    let funcs = config.funcs().input("config")?;
    serve::AppState::new(
        pairs,
        lexicon.unwrap_or_else(|| SynonymLexicon::new().with_direction(config.synonym_direction)),
        funcs,
        config.cascade(),
        store,
    )
    .map_err(anyhow::Error::msg)
    .input("sample")
}

pub async fn run_service(config: &RunConfig, state: serve::AppState) -> Result<()> {
    let addr: SocketAddr = format!("{}:{}", config.host, config.port)
        .parse()
        .input("invalid host or port")?;
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .input(format!("cannot listen on {addr}"))?;
    eprintln!("serving on http://{}", listener.local_addr()?);
    let app = serve::router(Arc::new(state), config.ui_dir.clone());
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .context("server failed")
}

pub fn run(cli: &Cli) -> Result<()> {
    let config = RunConfig::resolve(&cli.overrides).input("configuration")?;
    match cli.command {
        Command::Serve => {
            let state = prepare_service(&config)?;
            tokio::runtime::Runtime::new()?.block_on(run_service(&config, state))
        }
        command => {
            for path in run_batch(command, &config)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}
