//! Config-driven scenario runner for the heralded W-state engine.

pub mod config;
pub mod error;
pub mod report;
pub mod scenario;

use std::io::Write as _;
use std::path::{Path, PathBuf};

pub use config::{ScenarioConfig, ScenarioKind};
pub use error::CliError;
pub use scenario::{run, ENGINE_NAME, ENGINE_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Machine,
    Text,
}

/// Command-line overrides applied on top of a config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub n_max: Option<u8>,
    pub format: Format,
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { context: format!("reading {}", path.display()), source })?;
    ScenarioConfig::parse(&text)
}

/// Renders the report of one run in the requested format.
pub fn render(config: &ScenarioConfig, format: Format) -> Result<String, CliError> {
    let report = run(config)?;
    Ok(match format {
        Format::Machine => report::to_machine(&report),
        Format::Text => report::to_text(&report),
    })
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |context: &str| {
        let context = format!("{context} {}", path.display());
        move |source| CliError::Io { context, source }
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io("creating temporary file for"))?;
    tmp.write_all(contents.as_bytes()).map_err(io("writing"))?;
    tmp.as_file().sync_all().map_err(io("syncing"))?;
    tmp.persist(path).map_err(|e| io("renaming into")(e.error))?;
    Ok(())
}

/// Loads, runs and writes one scenario. Without an output path the
/// report goes to stdout.
pub fn execute(config_path: &Path, overrides: &Overrides) -> Result<(), CliError> {
    let mut config = load_config(config_path)?;
    if let Some(n) = overrides.n_max {
        config.n_max = n;
    }
    let text = render(&config, overrides.format)?;
    // the flag wins over the config and stays out of the echo
    let destination = overrides.output.clone().or_else(|| config.output.as_ref().map(PathBuf::from));
    match destination {
        Some(out) => write_atomic(&out, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { context: "writing stdout".into(), source })
        }
    }
}
