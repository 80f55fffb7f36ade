use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use surfpoisson::config::RunConfig;
use surfpoisson::{Error, Result};

use crate::CommonArgs;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A parsed configuration together with everything that ends up in artifact
/// headers.
pub struct Run {
    pub config: RunConfig,
    pub config_hash: String,
    pub seed: u64,
    pub out: PathBuf,
    pub quiet: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool_version: &'static str,
    config_hash: &'a str,
    seed: u64,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

impl Run {
    pub fn load(args: &CommonArgs) -> Result<Run> {
        let bytes = std::fs::read(&args.config)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", args.config.display())))?;
        let config = RunConfig::from_slice(&bytes)?;
        let config_hash = hex::encode(Sha256::digest(&bytes));
        let seed = args.seed.unwrap_or(config.seed);
        let out = args.out.clone().unwrap_or_else(|| PathBuf::from(&config.output));
        Ok(Run {
            config,
            config_hash,
            seed,
            out,
            quiet: args.quiet,
        })
    }

    /// First line of every CSV artifact, without the leading `# `.
    pub fn comment(&self) -> String {
        format!(
            "surfpoisson {TOOL_VERSION} config-sha256={} seed={}",
            self.config_hash, self.seed
        )
    }

    pub fn create(&self, name: &str) -> Result<BufWriter<File>> {
        std::fs::create_dir_all(&self.out)?;
        Ok(BufWriter::new(File::create(self.out.join(name))?))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, command: &str, body: &T) -> Result<()> {
        let envelope = Envelope {
            tool_version: TOOL_VERSION,
            config_hash: &self.config_hash,
            seed: self.seed,
            command,
            body,
        };
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, &envelope).map_err(|e| Error::Io(e.into()))?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    pub fn say(&self, line: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", line.as_ref());
        }
    }

    pub fn wrote(&self, name: &str) {
        self.say(format!("wrote {}", display(&self.path(name))));
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}
