use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

pub const REPORT_FORMAT_VERSION: u64 = 1;

/// Everything a run prints. Wall-clock timings are left out so that identical
/// configurations give identical bytes.
#[derive(Serialize)]
pub struct RunReport {
    pub format_version: u64,
    pub tool_version: &'static str,
    pub subcommand: &'static str,
    pub config: Value,
    pub result: Value,
}

impl RunReport {
    pub fn new<C: Serialize, R: Serialize>(
        subcommand: &'static str,
        config: &C,
        result: &R,
    ) -> anyhow::Result<Self> {
        Ok(Self {
            format_version: REPORT_FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand,
            config: serde_json::to_value(config)?,
            result: serde_json::to_value(result)?,
        })
    }

    pub fn emit(&self, out: Option<&Path>) -> anyhow::Result<()> {
        let text = ugate::json::to_canonical_string(self)?;
        match out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
