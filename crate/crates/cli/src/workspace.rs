//! The named-object store behind the command surface.  Objects enter by
//! fixture, by file, or as results of commands; every entry records how it
//! was produced, and names are unique across kinds.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};

use modspace::graded::GradedAlgebra;
use modspace::module::{Module, Rep};

use crate::formats::{parse_text, Parsed};

/// One workspace entry's origin, for the provenance log.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub operation: String,
    pub inputs: Vec<String>,
}

pub struct NamedModule {
    pub algebra: String,
    pub module: Module,
}

/// Named algebras (bundled with their structure analysis), graded algebras,
/// and modules.
pub struct Workspace {
    reps: BTreeMap<String, Arc<Rep>>,
    graded: BTreeMap<String, Arc<GradedAlgebra>>,
    modules: BTreeMap<String, NamedModule>,
    log: Vec<(String, Provenance)>,
}

/// Fixture files embedded at compile time, so the binary always knows the
/// canonical examples.
pub const FIXTURE_T2: &str = include_str!("../../../fixtures/t2.json");
pub const FIXTURE_KK: &str = include_str!("../../../fixtures/kk.json");
pub const FIXTURE_DUAL: &str = include_str!("../../../fixtures/dual.json");
pub const FIXTURE_GL: &str = include_str!("../../../fixtures/gl.json");
pub const FIXTURE_UT: &str = include_str!("../../../fixtures/ut.json");
pub const FIXTURE_OP: &str = include_str!("../../../fixtures/op_t2.json");

impl Workspace {
    pub fn empty() -> Workspace {
        Workspace {
            reps: BTreeMap::new(),
            graded: BTreeMap::new(),
            modules: BTreeMap::new(),
            log: Vec::new(),
        }
    }

    /// The standard workspace: the five fixture algebras plus the two
    /// simple modules over T2.
    pub fn built_in() -> Workspace {
        let mut ws = Workspace::empty();
        for (name, text) in [
            ("T2", FIXTURE_T2),
            ("KK", FIXTURE_KK),
            ("DUAL", FIXTURE_DUAL),
            ("GL", FIXTURE_GL),
            ("UT", FIXTURE_UT),
        ] {
            ws.add_text(name, text, &format!("fixture {name}"))
                .expect("embedded fixtures always load");
        }
        ws.add_text("O_p", FIXTURE_OP, "fixture O_p")
            .expect("embedded fixtures always load");
        // The other simple over T2: the one whose annihilator does not
        // contain e11.
        let t2 = ws.rep("T2").unwrap().clone();
        let e11 = vec![t2.field().one(), t2.field().zero(), t2.field().zero()];
        let o_q = t2
            .simples()
            .expect("T2 is split")
            .iter()
            .map(|s| s.module.clone())
            .find(|m| !t2.annihilator(m).space().contains_vec(&e11))
            .expect("T2 has a simple not killed by e11");
        ws.insert_module("O_q", "T2", o_q, "fixture O_q (simple of T2 faithful at e11)")
            .expect("fresh name");
        ws
    }

    pub fn has(&self, name: &str) -> bool {
        self.reps.contains_key(name)
            || self.graded.contains_key(name)
            || self.modules.contains_key(name)
    }

    fn claim(&mut self, name: &str) -> Result<()> {
        if self.has(name) {
            bail!("the name {name:?} is already taken");
        }
        Ok(())
    }

    fn record(&mut self, name: &str, operation: &str, inputs: Vec<String>) {
        self.log.push((
            name.to_string(),
            Provenance {
                operation: operation.to_string(),
                inputs,
            },
        ));
    }

    /// Parse wire-format text and store the result under `name`.
    pub fn add_text(&mut self, name: &str, text: &str, origin: &str) -> Result<Kind> {
        self.claim(name)?;
        match parse_text(text)? {
            Parsed::Algebra(alg, _) => {
                self.reps.insert(name.to_string(), Arc::new(Rep::new(alg)));
                self.record(name, origin, vec![]);
                Ok(Kind::Algebra)
            }
            Parsed::Quiver(pa, _) => {
                self.reps
                    .insert(name.to_string(), Arc::new(Rep::new(pa.algebra)));
                self.record(name, &format!("{origin} (quiver)"), vec![]);
                Ok(Kind::Algebra)
            }
            Parsed::Graded(g, _) => {
                self.graded.insert(name.to_string(), Arc::new(g));
                self.record(name, origin, vec![]);
                Ok(Kind::Graded)
            }
            Parsed::Module(dto) => {
                let over = dto.algebra.clone();
                let rep = self
                    .rep(&over)
                    .ok_or_else(|| anyhow!("module names unknown algebra {over:?}"))?
                    .clone();
                let module = dto.to_module(rep.alg())?;
                self.modules.insert(
                    name.to_string(),
                    NamedModule {
                        algebra: over.clone(),
                        module,
                    },
                );
                self.record(name, origin, vec![over]);
                Ok(Kind::Module)
            }
        }
    }

    /// Load a wire-format file; the object is named by the file stem unless
    /// `name` overrides it.
    pub fn load_file(&mut self, path: &Path, name: Option<&str>) -> Result<(String, Kind)> {
        let text = fs::read_to_string(path)
            .map_err(|e| anyhow!("cannot read {}: {e}", path.display()))?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("loaded");
        let name = name.unwrap_or(stem).to_string();
        let kind = self.add_text(&name, &text, &format!("file {}", path.display()))?;
        Ok((name, kind))
    }

    pub fn insert_module(
        &mut self,
        name: &str,
        algebra: &str,
        module: Module,
        origin: &str,
    ) -> Result<()> {
        self.claim(name)?;
        self.modules.insert(
            name.to_string(),
            NamedModule {
                algebra: algebra.to_string(),
                module,
            },
        );
        self.record(name, origin, vec![algebra.to_string()]);
        Ok(())
    }

    pub fn insert_rep(&mut self, name: &str, rep: Arc<Rep>, origin: &str) -> Result<()> {
        self.claim(name)?;
        self.reps.insert(name.to_string(), rep);
        self.record(name, origin, vec![]);
        Ok(())
    }

    pub fn insert_graded(
        &mut self,
        name: &str,
        g: Arc<GradedAlgebra>,
        origin: &str,
        inputs: Vec<String>,
    ) -> Result<()> {
        self.claim(name)?;
        self.graded.insert(name.to_string(), g);
        self.record(name, origin, inputs);
        Ok(())
    }

    pub fn rep(&self, name: &str) -> Option<&Arc<Rep>> {
        self.reps.get(name)
    }

    pub fn graded(&self, name: &str) -> Option<&Arc<GradedAlgebra>> {
        self.graded.get(name)
    }

    pub fn module(&self, name: &str) -> Option<&NamedModule> {
        self.modules.get(name)
    }

    pub fn require_rep(&self, name: &str) -> Result<&Arc<Rep>> {
        self.rep(name)
            .ok_or_else(|| anyhow!("no algebra named {name:?} in the workspace"))
    }

    pub fn require_graded(&self, name: &str) -> Result<&Arc<GradedAlgebra>> {
        self.graded(name)
            .ok_or_else(|| anyhow!("no graded algebra named {name:?} in the workspace"))
    }

    pub fn require_module(&self, name: &str) -> Result<&NamedModule> {
        self.module(name)
            .ok_or_else(|| anyhow!("no module named {name:?} in the workspace"))
    }

    pub fn names(&self) -> Vec<(String, &'static str)> {
        let mut out: Vec<(String, &'static str)> = Vec::new();
        out.extend(self.reps.keys().map(|k| (k.clone(), "algebra")));
        out.extend(self.graded.keys().map(|k| (k.clone(), "graded")));
        out.extend(self.modules.keys().map(|k| (k.clone(), "module")));
        out
    }

    pub fn provenance(&self) -> &[(String, Provenance)] {
        &self.log
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Algebra,
    Graded,
    Module,
}
