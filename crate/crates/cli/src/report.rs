use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::Global;

pub struct Report {
    pub pass: bool,
    pub markdown: String,
    pub json: Value,
}

impl Report {
    pub fn emit(&self, g: &Global) -> anyhow::Result<()> {
        let json = choice_lab::io::to_json(&self.json)?;
        if let Some(path) = &g.report {
            write(path, &json)?;
        }
        if g.json {
            print!("{json}");
        } else {
            print!("{}", self.markdown);
        }
        Ok(())
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write(path: &Path, content: &str) -> anyhow::Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
