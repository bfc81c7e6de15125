//! Content-addressed on-disk store for Rees powers and their saturations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use rees_core::module::ModuleRecord;
use rees_core::{ModuleKey, PowerKind, PowerStore, TermModule};

/// One JSON file per `(module hash, n, kind)` under a two-level fan-out.
/// Unreadable or corrupt entries are treated as misses.
#[derive(Debug, Clone)]
pub struct DiskStore {
    root: PathBuf,
}

impl DiskStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DiskStore { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, base: &ModuleKey, n: u32, kind: PowerKind) -> PathBuf {
        let tag = match kind {
            PowerKind::Power => "power",
            PowerKind::SaturatedPower => "saturated",
        };
        self.root.join(&base.0[..2]).join(format!("{}-{tag}-{n}.json", base.0))
    }
}

impl PowerStore for DiskStore {
    fn load(&self, base: &ModuleKey, n: u32, kind: PowerKind) -> Option<ModuleRecord> {
        let text = fs::read_to_string(self.path(base, n, kind)).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn save(&self, base: &ModuleKey, n: u32, kind: PowerKind, module: &TermModule) {
        let path = self.path(base, n, kind);
        let Some(dir) = path.parent() else { return };
        if fs::create_dir_all(dir).is_err() {
            return;
        }
        // write-then-rename so concurrent readers never see a partial file
        static SEQ: AtomicU64 = AtomicU64::new(0);
        let seq = SEQ.fetch_add(1, Ordering::Relaxed);
        let tmp = path.with_extension(format!("tmp{}-{seq}", std::process::id()));
        let written = fs::File::create(&tmp).and_then(|mut f| {
            f.write_all(serde_json::to_string(&module.to_record()).expect("records serialize").as_bytes())
        });
        if written.is_ok() {
            let _ = fs::rename(&tmp, &path);
        } else {
            let _ = fs::remove_file(&tmp);
        }
    }
}
