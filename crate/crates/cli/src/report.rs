//! Report emission: CSV tables, JSON documents with a provenance block, and
//! the indel histogram as SVG.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

/// Ties a report to the exact config and input files it was computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub command: String,
    pub config_sha256: String,
    pub resources: Vec<Resource>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Resource {
    pub role: String,
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl Provenance {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        let canonical = serde_json::to_vec(&config.fingerprint()).expect("config serializes");
        Provenance {
            tool: format!("paravar {}", env!("CARGO_PKG_VERSION")),
            command: command.to_owned(),
            config_sha256: hex::encode(Sha256::digest(&canonical)),
            resources: Vec::new(),
        }
    }

    pub fn add(&mut self, role: &str, path: &Path) -> Result<()> {
        let (sha256, bytes) = file_sha256(path).with_context(|| format!("cannot checksum {}", path.display()))?;
        self.resources.push(Resource {
            role: role.to_owned(),
            path: path.display().to_string(),
            sha256,
            bytes,
        });
        Ok(())
    }
}

pub fn file_sha256(path: &Path) -> io::Result<(String, u64)> {
    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    let mut total = 0u64;
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
        total += n as u64;
    }
    Ok((hex::encode(hasher.finalize()), total))
}

/// JSON document: provenance first, then the report body.
#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    provenance: &'a Provenance,
    #[serde(flatten)]
    body: &'a T,
}

pub struct OutDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("cannot create output directory {}", root.display()))?;
        Ok(OutDir {
            root: root.to_owned(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn create_file(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.path(name);
        let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
        self.written.push(path);
        Ok(BufWriter::new(file))
    }

    pub fn json<T: Serialize>(&mut self, name: &str, provenance: &Provenance, body: &T) -> Result<()> {
        let mut out = self.create_file(name)?;
        serde_json::to_writer_pretty(&mut out, &Document { provenance, body })?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }

    pub fn csv<R, I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let out = self.create_file(name)?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(out);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn text(&mut self, name: &str, content: &str) -> Result<()> {
        let mut out = self.create_file(name)?;
        out.write_all(content.as_bytes())?;
        out.flush()?;
        Ok(())
    }
}

/// Fixed six-decimal formatting so that CSV output is stable.
pub fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

/// Bar chart of pairs per indel count.
pub fn histogram_svg(hist: &BTreeMap<usize, usize>, title: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 360.0;
    const MARGIN: f64 = 48.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let (x0, y0) = (MARGIN, H - MARGIN);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        W - MARGIN / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{}" stroke="black"/>"#,
        MARGIN / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">lemma indels</text>"#,
        W / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">pairs</text>"#,
        H / 2.0,
        H / 2.0
    );

    if let (Some(&max_k), Some(&max_n)) = (hist.keys().next_back(), hist.values().max()) {
        let slots = max_k + 1;
        let plot_w = W - MARGIN * 1.5;
        let plot_h = H - MARGIN * 1.5;
        let slot = plot_w / slots as f64;
        let bar = (slot * 0.8).max(1.0);
        let label_every = slots.div_ceil(20).max(1);
        for (&k, &n) in hist {
            let h = plot_h * n as f64 / max_n as f64;
            let x = x0 + slot * k as f64 + (slot - bar) / 2.0;
            let _ = writeln!(
                svg,
                r#"<rect x="{x:.2}" y="{:.2}" width="{bar:.2}" height="{h:.2}" fill="steelblue"><title>{k}: {n}</title></rect>"#,
                y0 - h
            );
        }
        for k in (0..slots).step_by(label_every) {
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{}" text-anchor="middle">{k}</text>"#,
                x0 + slot * (k as f64 + 0.5),
                y0 + 14.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end">{max_n}</text>"#,
            x0 - 4.0,
            y0 - plot_h + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="end">0</text>"#,
        x0 - 4.0,
        y0 + 4.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
