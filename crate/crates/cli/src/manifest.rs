use hypersquare_core::Config;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything needed to rerun a command and get the same bytes back.
#[derive(Serialize, Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name.
    pub argv: Vec<String>,
    pub config: Option<Config>,
    pub seed: Option<u64>,
    pub version: &'static str,
    /// SHA-256 of the hypergraph input, when there is one.
    pub input_sha256: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[String]) -> Self {
        RunManifest {
            command: command.to_string(),
            argv: argv.to_vec(),
            config: None,
            seed: None,
            version: env!("CARGO_PKG_VERSION"),
            input_sha256: None,
        }
    }

    pub fn with_config(mut self, cfg: &Config) -> Self {
        self.seed = Some(cfg.seed);
        self.config = Some(cfg.clone());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_input(mut self, bytes: Option<&[u8]>) -> Self {
        self.input_sha256 = bytes.map(|b| hex::encode(Sha256::digest(b)));
        self
    }

    /// One-line JSON, for `# manifest: ...` comment headers.
    pub fn comment(&self) -> String {
        format!("# manifest: {}", serde_json::to_string(self).expect("manifest serialises"))
    }
}
