//! The command surface: each command reads named objects from the
//! workspace, calls into the library, and reports both a human-readable
//! table and a JSON record.  A session may run several commands in order,
//! so constructions (loaded files, localizations, Rees algebras) stay
//! available to later commands.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use serde_json::{json, Value};

use modspace::closed::{
    self, points, point_subspace, serre_of_closed, ClosedSubspace, SerreClass,
};
use modspace::graded::{
    central_divisor, point_tails, rees, tails_iso_bounded, window_block, GradedModule,
};
use modspace::localize::{
    closed_of_class, contains_closed_in_complement, extend, open_complement, restrict,
    tau_and_r1, unit_map, z_cap_u, OpenSubspace, ZCapU,
};
use modspace::module::{hom_dim, Module, Rep};
use modspace::resolve::{ext_dim, is_tiny, projective_cover};
use modspace::scalar::{Field, Scalar};

use crate::workspace::Workspace;

/// Search budget for isomorphism hunts triggered by commands.
const BUDGET: usize = 1 << 16;

pub struct CommandOutput {
    pub human: String,
    pub json: Value,
}

/// A workspace plus the session-scoped constructions commands refer back
/// to: open subspaces by name, and the most recent one as the default.
pub struct Session {
    pub ws: Workspace,
    pub default_algebra: Option<String>,
    opens: BTreeMap<String, (String, OpenSubspace)>,
    last_open: Option<String>,
    fresh: usize,
}

impl Session {
    pub fn new(ws: Workspace) -> Session {
        Session {
            ws,
            default_algebra: None,
            opens: BTreeMap::new(),
            last_open: None,
            fresh: 0,
        }
    }

    fn fresh_name(&mut self, prefix: &str) -> String {
        loop {
            self.fresh += 1;
            let name = format!("{prefix}{}", self.fresh);
            if self.ws.rep(&name).is_none()
                && self.ws.graded(&name).is_none()
                && self.ws.module(&name).is_none()
                && !self.opens.contains_key(&name)
            {
                return name;
            }
        }
    }

    fn algebra_named(&self, opts: &Opts) -> Result<(String, Arc<Rep>)> {
        let name = opts
            .algebra
            .clone()
            .or_else(|| self.default_algebra.clone())
            .ok_or_else(|| anyhow!("no algebra selected; pass --algebra NAME"))?;
        Ok((name.clone(), self.ws.require_rep(&name)?.clone()))
    }

    fn open_named(&self, opts: &Opts) -> Result<(String, &(String, OpenSubspace))> {
        let name = opts
            .open
            .clone()
            .or_else(|| self.last_open.clone())
            .ok_or_else(|| anyhow!("no open subspace built yet; run `localize complement` first"))?;
        let entry = self
            .opens
            .get(&name)
            .ok_or_else(|| anyhow!("no open subspace named {name:?}"))?;
        Ok((name, entry))
    }

    /// Run one command, given as shell-style tokens.
    pub fn run(&mut self, tokens: &[String]) -> Result<CommandOutput> {
        let (opts, pos) = Opts::split(tokens)?;
        let cmd = pos
            .first()
            .map(String::as_str)
            .ok_or_else(|| anyhow!("empty command"))?;
        match cmd {
            "list" => self.cmd_list(),
            "load" => self.cmd_load(&pos[1..], &opts),
            "describe" => self.cmd_describe(&pos[1..]),
            "simples" => self.cmd_simples(&opts),
            "ideals" => self.cmd_ideals(&opts),
            "points" => self.cmd_points(&opts),
            "subspace" => self.cmd_subspace(&pos[1..], &opts),
            "localize" => self.cmd_localize(&pos[1..], &opts),
            "contains" => self.cmd_contains(&pos[1..], &opts),
            "zcapu" => self.cmd_zcapu(&pos[1..], &opts),
            "graded" => self.cmd_graded(&pos[1..], &opts),
            other => bail!("unknown command {other:?}"),
        }
    }

    fn cmd_list(&mut self) -> Result<CommandOutput> {
        let mut lines = vec!["name            kind".to_string()];
        let mut objects = Vec::new();
        for (name, kind) in self.ws.names() {
            lines.push(format!("{name:<15} {kind}"));
            objects.push(json!({"name": name, "kind": kind}));
        }
        for (name, (over, _)) in &self.opens {
            lines.push(format!("{name:<15} open (over {over})"));
            objects.push(json!({"name": name, "kind": "open", "over": over}));
        }
        Ok(CommandOutput {
            human: lines.join("\n"),
            json: json!({"command": "list", "objects": objects}),
        })
    }

    fn cmd_load(&mut self, pos: &[String], opts: &Opts) -> Result<CommandOutput> {
        let path = pos
            .first()
            .ok_or_else(|| anyhow!("usage: load PATH [--as NAME]"))?;
        let (name, kind) = self
            .ws
            .load_file(Path::new(path), opts.store_as.as_deref())?;
        Ok(CommandOutput {
            human: format!("loaded {name} ({kind:?})"),
            json: json!({"command": "load", "name": name, "kind": format!("{kind:?}")}),
        })
    }

    fn cmd_describe(&mut self, pos: &[String]) -> Result<CommandOutput> {
        let name = pos
            .first()
            .ok_or_else(|| anyhow!("usage: describe NAME"))?;
        if let Some(rep) = self.ws.rep(name) {
            let rep = rep.clone();
            let alg = rep.alg();
            let semisimple = alg.is_semisimple();
            let rad = alg.radical().space().dim();
            let split = rep.analysis().split;
            let mut human = format!(
                "{name}: algebra, dim {} over {}\n  semisimple: {semisimple}\n  radical dim: {rad}",
                alg.dim(),
                field_name(alg.field())
            );
            let mut extra = json!({});
            if split {
                let pts = points(&rep)?;
                human.push_str(&format!("\n  points: {}", pts.len()));
                extra = json!({"points": pts.len()});
            }
            let json = json!({
                "command": "describe", "name": name, "kind": "algebra",
                "dim": alg.dim(), "field": field_name(alg.field()),
                "semisimple": semisimple, "radical_dim": rad, "split": split,
                "detail": extra,
            });
            return Ok(CommandOutput { human, json });
        }
        if let Some(g) = self.ws.graded(name) {
            let dims: Vec<usize> = g.dims().to_vec();
            let gens: Vec<String> = g
                .generator_labels()
                .iter()
                .zip(g.generator_degrees())
                .map(|(l, d)| format!("{l} (degree {d})"))
                .collect();
            let human = format!(
                "{name}: graded algebra over {}, bound {}\n  generators: {}\n  dims by degree: {:?}",
                field_name(g.field()),
                g.bound(),
                gens.join(", "),
                dims
            );
            let json = json!({
                "command": "describe", "name": name, "kind": "graded",
                "field": field_name(g.field()), "bound": g.bound(),
                "generators": g.generator_labels(), "degrees": g.generator_degrees(),
                "dims": dims,
            });
            return Ok(CommandOutput { human, json });
        }
        if let Some(nm) = self.ws.module(name) {
            let over = nm.algebra.clone();
            let m = nm.module.clone();
            let rep = self.ws.require_rep(&over)?.clone();
            let ann = rep.annihilator(&m);
            let supp = closed::support(&rep, &m);
            let factors = rep.composition_factors(&m)?;
            let human = format!(
                "{name}: module over {over}, dim {}\n  annihilator dim: {}\n  support ideal dim: {}\n  composition factor multiplicities: {:?}",
                m.dim(),
                ann.space().dim(),
                supp.ideal_of().space().dim(),
                factors
            );
            let json = json!({
                "command": "describe", "name": name, "kind": "module",
                "algebra": over, "dim": m.dim(),
                "annihilator_dim": ann.space().dim(),
                "support_ideal_dim": supp.ideal_of().space().dim(),
                "composition_factors": factors,
            });
            return Ok(CommandOutput { human, json });
        }
        bail!("nothing named {name:?} in the workspace")
    }

    fn cmd_simples(&mut self, opts: &Opts) -> Result<CommandOutput> {
        let (name, rep) = self.algebra_named(opts)?;
        let simples = rep.simples()?;
        let mut lines = vec![format!("simples of {name}:"), "idx  dim  end  projective  tiny".into()];
        let mut rows = Vec::new();
        for (i, s) in simples.iter().enumerate() {
            let proj = projective_cover(&rep, &s.module)
                .map(|pc| pc.module.dim() == s.module.dim())
                .unwrap_or(false);
            let (tiny, _) = is_tiny(&rep, i)?;
            lines.push(format!(
                "{i:<4} {:<4} {:<4} {proj:<11} {tiny}",
                s.module.dim(),
                s.endo_dim
            ));
            rows.push(json!({
                "index": i, "dim": s.module.dim(), "endo_dim": s.endo_dim,
                "projective": proj, "tiny": tiny,
            }));
        }
        Ok(CommandOutput {
            human: lines.join("\n"),
            json: json!({"command": "simples", "algebra": name, "simples": rows}),
        })
    }

    fn cmd_ideals(&mut self, opts: &Opts) -> Result<CommandOutput> {
        let (name, rep) = self.algebra_named(opts)?;
        let alg = rep.alg();
        let mut chain = Vec::new();
        let mut power = alg.radical();
        loop {
            let d = power.space().dim();
            chain.push(d);
            if d == 0 {
                break;
            }
            power = alg.ideal_product(&power, &alg.radical());
        }
        let mut lines = vec![format!(
            "ideals of {name}: radical power dims {:?}",
            chain
        )];
        let mut all_dims: Option<Vec<usize>> = None;
        if let Field::Fp(_) = alg.field() {
            if let Ok(subs) = modspace::subspace::enumerate_subspaces(alg.field(), alg.dim(), 1 << 14)
            {
                let mut dims = Vec::new();
                for s in &subs {
                    let gens = s.basis_vectors();
                    let closure = alg.ideal_closure(&gens).expect("basis vectors are honest");
                    if closure.space().dim() == s.dim() {
                        dims.push(s.dim());
                    }
                }
                dims.sort_unstable();
                lines.push(format!(
                    "two-sided ideals: {} total, dims {:?}",
                    dims.len(),
                    dims
                ));
                all_dims = Some(dims);
            }
        }
        Ok(CommandOutput {
            human: lines.join("\n"),
            json: json!({
                "command": "ideals", "algebra": name,
                "radical_power_dims": chain, "ideal_dims": all_dims,
            }),
        })
    }

    fn cmd_points(&mut self, opts: &Opts) -> Result<CommandOutput> {
        let (name, rep) = self.algebra_named(opts)?;
        let pts = points(&rep)?;
        let mut lines = vec![format!("points of {name}:"), "idx  end  rational  tiny  ideal-dim".into()];
        let mut rows = Vec::new();
        for p in &pts {
            let (tiny, _) = is_tiny(&rep, p.simple)?;
            let w = point_subspace(&rep, p.simple)?;
            lines.push(format!(
                "{:<4} {:<4} {:<9} {tiny:<5} {}",
                p.simple,
                p.endo_dim,
                p.rational,
                w.ideal_of().space().dim()
            ));
            rows.push(json!({
                "index": p.simple, "endo_dim": p.endo_dim, "rational": p.rational,
                "tiny": tiny, "ideal_dim": w.ideal_of().space().dim(),
            }));
        }
        Ok(CommandOutput {
            human: lines.join("\n"),
            json: json!({"command": "points", "algebra": name, "points": rows}),
        })
    }

    fn cmd_subspace(&mut self, pos: &[String], opts: &Opts) -> Result<CommandOutput> {
        let op = pos
            .first()
            .map(String::as_str)
            .ok_or_else(|| anyhow!("usage: subspace intersect|union|gabriel|support ARGS"))?;
        if op == "support" {
            let mname = pos
                .get(1)
                .ok_or_else(|| anyhow!("usage: subspace support MODULE"))?;
            let nm = self.ws.require_module(mname)?;
            let over = nm.algebra.clone();
            let m = nm.module.clone();
            let rep = self.ws.require_rep(&over)?.clone();
            let w = closed::support(&rep, &m);
            return Ok(describe_closed(
                &format!("support of {mname}"),
                "support",
                &rep,
                &w,
            ));
        }
        let (a, b) = match (pos.get(1), pos.get(2)) {
            (Some(a), Some(b)) => (a, b),
            _ => bail!("usage: subspace {op} SPEC SPEC"),
        };
        let (name, rep) = self.algebra_named(opts)?;
        let wa = closed_from_spec(&rep, a)?;
        let wb = closed_from_spec(&rep, b)?;
        let out = match op {
            "intersect" => closed::intersect(&wa, &wb),
            "union" => closed::union(&wa, &wb),
            "gabriel" => closed::gabriel(&wa, &wb),
            other => bail!("unknown subspace operation {other:?}"),
        };
        Ok(describe_closed(
            &format!("{op} of {a} and {b} over {name}"),
            op,
            &rep,
            &out,
        ))
    }

    fn cmd_localize(&mut self, pos: &[String], opts: &Opts) -> Result<CommandOutput> {
        let op = pos.first().map(String::as_str).ok_or_else(|| {
            anyhow!("usage: localize complement|restrict|extend|extend-restrict|torsion ARGS")
        })?;
        match op {
            "complement" => {
                let spec = pos
                    .get(1)
                    .ok_or_else(|| anyhow!("usage: localize complement SPEC [--as NAME]"))?;
                let (aname, rep) = self.algebra_named(opts)?;
                let class = class_from_spec(&rep, spec)?;
                let u = open_complement(&rep, &class)?;
                let removed: Vec<usize> = class.simples.iter().copied().collect();
                let corner = u.corner();
                let labels = rep.alg().labels();
                let human = format!(
                    "complement of {{{spec}}} in {aname}\n  idempotent e = {}\n  corner dim: {}\n  slice Ae dim: {}, slice eA dim: {}",
                    lincomb(labels, &corner.e),
                    u.corner_algebra().dim(),
                    corner.ae.dim(),
                    corner.ea.dim()
                );
                let json = json!({
                    "command": "localize complement", "algebra": aname,
                    "removed_simples": removed,
                    "idempotent": coeffs(&corner.e),
                    "corner_dim": u.corner_algebra().dim(),
                    "ae_dim": corner.ae.dim(), "ea_dim": corner.ea.dim(),
                    "empty": u.is_empty_open(), "whole": u.is_whole_open(),
                });
                let name = opts
                    .store_as
                    .clone()
                    .unwrap_or_else(|| self.fresh_name("U"));
                self.opens.insert(name.clone(), (aname, u));
                self.last_open = Some(name);
                Ok(CommandOutput { human, json })
            }
            "restrict" => {
                let mname = pos
                    .get(1)
                    .ok_or_else(|| anyhow!("usage: localize restrict MODULE [--open U]"))?;
                let (oname, (aname, u)) = {
                    let (oname, entry) = self.open_named(opts)?;
                    (oname, (entry.0.clone(), entry.1.clone()))
                };
                let nm = self.ws.require_module(mname)?;
                if nm.algebra != aname {
                    bail!("{mname} lives over {}, but {oname} is an open of {aname}", nm.algebra);
                }
                let (restricted, _) = restrict(&u, &nm.module);
                let corner_name = self.ensure_corner_algebra(&oname, &u)?;
                let dim = restricted.dim();
                let stored = opts.store_as.clone().unwrap_or_else(|| self.fresh_name("M"));
                self.ws.insert_module(
                    &stored,
                    &corner_name,
                    restricted,
                    &format!("restrict {mname} to {oname}"),
                )?;
                Ok(CommandOutput {
                    human: format!("{mname} restricted to {oname}: dim {dim}, stored as {stored} over {corner_name}"),
                    json: json!({
                        "command": "localize restrict", "module": mname, "open": oname,
                        "dim": dim, "stored_as": stored, "corner": corner_name,
                    }),
                })
            }
            "extend" => {
                let mname = pos
                    .get(1)
                    .ok_or_else(|| anyhow!("usage: localize extend MODULE [--open U]"))?;
                let (oname, (aname, u)) = {
                    let (oname, entry) = self.open_named(opts)?;
                    (oname, (entry.0.clone(), entry.1.clone()))
                };
                let corner_name = self.ensure_corner_algebra(&oname, &u)?;
                let nm = self.ws.require_module(mname)?;
                if nm.algebra != corner_name {
                    bail!("{mname} lives over {}, not over the corner of {oname}", nm.algebra);
                }
                let ext = extend(&u, &nm.module)?;
                let dim = ext.module.dim();
                let stored = opts.store_as.clone().unwrap_or_else(|| self.fresh_name("M"));
                self.ws.insert_module(
                    &stored,
                    &aname,
                    ext.module,
                    &format!("extend {mname} from {oname}"),
                )?;
                Ok(CommandOutput {
                    human: format!("{mname} extended from {oname}: dim {dim}, stored as {stored} over {aname}"),
                    json: json!({
                        "command": "localize extend", "module": mname, "open": oname,
                        "dim": dim, "stored_as": stored, "algebra": aname,
                    }),
                })
            }
            "extend-restrict" => {
                let mname = pos.get(1).ok_or_else(|| {
                    anyhow!("usage: localize extend-restrict MODULE [--open U]")
                })?;
                let (oname, (aname, u)) = {
                    let (oname, entry) = self.open_named(opts)?;
                    (oname, (entry.0.clone(), entry.1.clone()))
                };
                let nm = self.ws.require_module(mname)?;
                if nm.algebra != aname {
                    bail!("{mname} lives over {}, but {oname} is an open of {aname}", nm.algebra);
                }
                let m = nm.module.clone();
                let rep = self.ws.require_rep(&aname)?.clone();
                let (restricted, _) = restrict(&u, &m);
                let ext = extend(&u, &restricted)?;
                let unit = unit_map(&u, &m)?;
                let roundtrip = ext.module.clone();
                let factors = rep.composition_factors(&roundtrip)?;

                // Describe the extension structure: the image of the unit
                // against the whole.
                let image_dim = unit.image().dim();
                let kernel_dim = unit.kernel().dim();
                let iso = unit.is_iso();
                let split = is_split_by_factors(&rep, &roundtrip, &factors)?;
                let stored = opts.store_as.clone().unwrap_or_else(|| self.fresh_name("M"));
                self.ws.insert_module(
                    &stored,
                    &aname,
                    roundtrip.clone(),
                    &format!("extend-restrict {mname} over {oname}"),
                )?;
                let human = format!(
                    "extend(restrict({mname})) over {oname}: dim {}\n  unit kernel dim: {kernel_dim}, image dim: {image_dim}, iso: {iso}\n  composition factor multiplicities: {:?}\n  splits as direct sum of factors: {split}\n  stored as {stored}",
                    roundtrip.dim(),
                    factors
                );
                Ok(CommandOutput {
                    human,
                    json: json!({
                        "command": "localize extend-restrict", "module": mname, "open": oname,
                        "dim": roundtrip.dim(), "unit_kernel_dim": kernel_dim,
                        "unit_image_dim": image_dim, "unit_iso": iso,
                        "composition_factors": factors, "splits": split,
                        "stored_as": stored,
                    }),
                })
            }
            "torsion" => {
                let mname = pos
                    .get(1)
                    .ok_or_else(|| anyhow!("usage: localize torsion MODULE [--open U]"))?;
                let (oname, (aname, u)) = {
                    let (oname, entry) = self.open_named(opts)?;
                    (oname, (entry.0.clone(), entry.1.clone()))
                };
                let nm = self.ws.require_module(mname)?;
                if nm.algebra != aname {
                    bail!("{mname} lives over {}, but {oname} is an open of {aname}", nm.algebra);
                }
                let rep = self.ws.require_rep(&aname)?.clone();
                let report = tau_and_r1(&rep, &u, &nm.module)?;
                let c = &report.certificate;
                let human = format!(
                    "torsion of {mname} over {oname}\n  torsion dim: {}\n  extension dim: {}\n  derived term dim: {}\n  kernel matches: {}, extension torsion-free: {}, derived routes agree: {}",
                    report.torsion.dim(),
                    report.unit.tgt().dim(),
                    report.r1.dim(),
                    c.kernel_matches,
                    c.extension_torsion_vanishes,
                    c.derived_routes_agree
                );
                Ok(CommandOutput {
                    human,
                    json: json!({
                        "command": "localize torsion", "module": mname, "open": oname,
                        "torsion_dim": report.torsion.dim(),
                        "extension_dim": report.unit.tgt().dim(),
                        "derived_dim": report.r1.dim(),
                        "kernel_matches": c.kernel_matches,
                        "extension_torsion_vanishes": c.extension_torsion_vanishes,
                        "derived_routes_agree": c.derived_routes_agree,
                    }),
                })
            }
            other => bail!("unknown localize operation {other:?}"),
        }
    }

    fn ensure_corner_algebra(&mut self, oname: &str, u: &OpenSubspace) -> Result<String> {
        let corner_name = format!("{oname}.corner");
        if self.ws.rep(&corner_name).is_none() {
            let alg = (**u.corner_algebra()).clone();
            self.ws.insert_rep(
                &corner_name,
                Arc::new(Rep::new(alg)),
                &format!("corner algebra of {oname}"),
            )?;
        }
        Ok(corner_name)
    }

    fn cmd_contains(&mut self, pos: &[String], opts: &Opts) -> Result<CommandOutput> {
        let (va, wb) = match (pos.first(), pos.get(1)) {
            (Some(a), Some(b)) => (a, b),
            _ => bail!("usage: contains SPEC SPEC (is the first closed subspace inside the complement of the second?)"),
        };
        let (name, rep) = self.algebra_named(opts)?;
        let v = closed_from_spec(&rep, va)?;
        let class = class_from_spec(&rep, wb)?;
        let u = open_complement(&rep, &class)?;
        let (report, gens) = contains_closed_in_complement(&rep, &u, &v)?;
        let mut human = format!(
            "closure({va}) inside complement of {{{wb}}} over {name}: {}\n  hom/ext criterion: {}, unit-iso criterion: {}",
            report.contained(),
            report.hom_ext_holds,
            report.unit_iso_holds
        );
        let mut wjson = Value::Null;
        if let Some(w) = &report.witness {
            human.push_str(&format!(
                "\n  witness: simple {} against generator {} (dim {}), hom {}, ext1 {}",
                w.torsion_simple,
                w.generator,
                gens[w.generator].dim(),
                w.hom,
                w.ext1
            ));
            wjson = json!({
                "torsion_simple": w.torsion_simple, "generator": w.generator,
                "generator_dim": gens[w.generator].dim(), "hom": w.hom, "ext1": w.ext1,
            });
        }
        Ok(CommandOutput {
            human,
            json: json!({
                "command": "contains", "algebra": name, "closed": va, "removed": wb,
                "contained": report.contained(),
                "hom_ext_holds": report.hom_ext_holds,
                "unit_iso_holds": report.unit_iso_holds,
                "witness": wjson,
            }),
        })
    }

    fn cmd_zcapu(&mut self, pos: &[String], opts: &Opts) -> Result<CommandOutput> {
        let (za, wb) = match (pos.first(), pos.get(1)) {
            (Some(a), Some(b)) => (a, b),
            _ => bail!("usage: zcapu SPEC SPEC (closed subspace, then the removed closed subspace)"),
        };
        let (name, rep) = self.algebra_named(opts)?;
        let z = closed_from_spec(&rep, za)?;
        let w = closed_from_spec(&rep, wb)?;
        match z_cap_u(&rep, &z, &w)? {
            ZCapU::Defined(rel) => Ok(CommandOutput {
                human: format!(
                    "closure({za}) meet complement({wb}) over {name}: defined\n  relative corner dim: {}\n  membership agreement samples: {}",
                    rel.open.corner_algebra().dim(),
                    rel.agreement_samples
                ),
                json: json!({
                    "command": "zcapu", "algebra": name, "closed": za, "removed": wb,
                    "defined": true,
                    "corner_dim": rel.open.corner_algebra().dim(),
                    "agreement_samples": rel.agreement_samples,
                }),
            }),
            ZCapU::Undefined(obs) => Ok(CommandOutput {
                human: format!(
                    "closure({za}) meet complement({wb}) over {name}: undefined\n  obstruction: simple {} has ext1 = {} into a generator of dim {}",
                    obs.torsion_simple, obs.ext1, obs.generator.dim()
                ),
                json: json!({
                    "command": "zcapu", "algebra": name, "closed": za, "removed": wb,
                    "defined": false,
                    "torsion_simple": obs.torsion_simple,
                    "ext1": obs.ext1,
                    "generator_dim": obs.generator.dim(),
                }),
            }),
        }
    }

    fn cmd_graded(&mut self, pos: &[String], opts: &Opts) -> Result<CommandOutput> {
        let op = pos
            .first()
            .map(String::as_str)
            .ok_or_else(|| anyhow!("usage: graded hilbert|divisor|rees|points|zd ARGS"))?;
        match op {
            "hilbert" => {
                let gname = pos
                    .get(1)
                    .ok_or_else(|| anyhow!("usage: graded hilbert NAME"))?;
                let g = self.ws.require_graded(gname)?;
                let dims: Vec<usize> = g.dims().to_vec();
                Ok(CommandOutput {
                    human: format!("{gname} dims by degree 0..={}: {:?}", g.bound(), dims),
                    json: json!({"command": "graded hilbert", "name": gname, "dims": dims}),
                })
            }
            "divisor" => {
                let gname = pos
                    .get(1)
                    .ok_or_else(|| anyhow!("usage: graded divisor NAME GENERATOR"))?;
                let label = pos
                    .get(2)
                    .ok_or_else(|| anyhow!("usage: graded divisor NAME GENERATOR"))?;
                let g = self.ws.require_graded(gname)?.clone();
                let gi = g
                    .generator_labels()
                    .iter()
                    .position(|l| l == label)
                    .ok_or_else(|| anyhow!("{gname} has no generator {label:?}"))?;
                let degree = g.generator_degrees()[gi];
                let z = g.generator_coords()[gi].clone();
                let reg = GradedModule::regular(&g);
                let report = central_divisor(&reg, degree, &z, BUDGET)
                    .map_err(|e| anyhow!("divisor construction failed: {e}"))?;
                let human = format!(
                    "dividing the regular module of {gname} by {label} (degree {degree})\n  kernel dims: {:?}\n  fiber dims:  {:?}\n  fiber killed by {label}: {}\n  shift witness: {:?}",
                    report.kernel_hilbert, report.cokernel_hilbert,
                    report.cokernel_annihilated, report.shift_witness
                );
                Ok(CommandOutput {
                    human,
                    json: json!({
                        "command": "graded divisor", "name": gname, "generator": label,
                        "degree": degree,
                        "kernel_hilbert": report.kernel_hilbert,
                        "cokernel_hilbert": report.cokernel_hilbert,
                        "cokernel_annihilated": report.cokernel_annihilated,
                        "shift_witness": report.shift_witness,
                    }),
                })
            }
            "rees" => {
                let aname = pos
                    .get(1)
                    .ok_or_else(|| anyhow!("usage: graded rees ALGEBRA [--gens l1,l2] [--bound N]"))?;
                let rep = self.ws.require_rep(aname)?.clone();
                let alg = rep.alg().clone();
                let bound = opts.bound.unwrap_or(8);
                let gens = generator_elements(&alg, opts.gens.as_deref())?;
                let ra = rees(&alg, &gens, bound).map_err(|e| anyhow!("{e}"))?;
                let fil: Vec<usize> = ra.filtration.iter().map(|s| s.dim()).collect();
                let dims: Vec<usize> = ra.graded.dims().to_vec();
                let stored = opts.store_as.clone().unwrap_or_else(|| self.fresh_name("R"));
                self.ws.insert_graded(
                    &stored,
                    ra.graded.clone(),
                    &format!("rees of {aname}"),
                    vec![aname.clone()],
                )?;
                Ok(CommandOutput {
                    human: format!(
                        "filtration blowup of {aname} at bound {bound}\n  filtration dims: {:?}\n  exhausted at degree {}\n  graded dims: {:?}\n  stored as {stored}",
                        fil, ra.exhausted_at, dims
                    ),
                    json: json!({
                        "command": "graded rees", "algebra": aname, "bound": bound,
                        "filtration_dims": fil, "exhausted_at": ra.exhausted_at,
                        "dims": dims, "stored_as": stored,
                    }),
                })
            }
            "points" => {
                let aname = pos
                    .get(1)
                    .ok_or_else(|| anyhow!("usage: graded points ALGEBRA [--bound N]"))?;
                let rep = self.ws.require_rep(aname)?.clone();
                let alg = rep.alg().clone();
                let bound = opts.bound.unwrap_or(8);
                let gens = generator_elements(&alg, opts.gens.as_deref())?;
                let ra = rees(&alg, &gens, bound).map_err(|e| anyhow!("{e}"))?;
                let simples = rep.simples()?;
                let mut tails = Vec::new();
                for s in simples {
                    tails.push(point_tails(&ra, &rep, &s.module).map_err(|e| anyhow!("{e}"))?);
                }
                let mut lines = vec![format!("point tails of {aname} at bound {bound}:")];
                let mut rows = Vec::new();
                for (i, t) in tails.iter().enumerate() {
                    let h = t.hilbert(0, bound as i64).map_err(|e| anyhow!("{e}"))?;
                    lines.push(format!("  simple {i}: dims {:?}", h));
                    rows.push(json!({"simple": i, "dims": h}));
                }
                let n0 = (bound / 2) as i64;
                let mut pairs = Vec::new();
                for i in 0..tails.len() {
                    for j in (i + 1)..tails.len() {
                        let verdict = tails_iso_bounded(&tails[i], &tails[j], n0, BUDGET)
                            .map_err(|e| anyhow!("{e}"))?;
                        lines.push(format!(
                            "  tails {i} and {j}: {}",
                            match verdict {
                                Some(start) => format!("isomorphic from degree {start}"),
                                None => "not isomorphic".into(),
                            }
                        ));
                        pairs.push(json!({"a": i, "b": j, "iso_from": verdict}));
                    }
                }
                Ok(CommandOutput {
                    human: lines.join("\n"),
                    json: json!({
                        "command": "graded points", "algebra": aname, "bound": bound,
                        "tails": rows, "pairs": pairs,
                    }),
                })
            }
            "zd" => {
                let spec = pos
                    .get(1)
                    .ok_or_else(|| anyhow!("usage: graded zd D1,D2,..."))?;
                let degrees: Vec<i64> = spec
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<i64>()
                            .map_err(|_| anyhow!("bad degree {t:?}"))
                    })
                    .collect::<Result<_>>()?;
                let block = window_block(Field::Fp(2), &degrees).map_err(|e| anyhow!("{e}"))?;
                let consecutive = degrees.windows(2).all(|w| w[1] == w[0] + 1);
                Ok(CommandOutput {
                    human: format!(
                        "degree-window block at {:?}: dim {}\n  basis: {}\n  consecutive window (triangular pattern): {consecutive}",
                        degrees,
                        block.dim(),
                        block.labels().join(", ")
                    ),
                    json: json!({
                        "command": "graded zd", "degrees": degrees,
                        "dim": block.dim(), "basis": block.labels(),
                        "consecutive": consecutive,
                    }),
                })
            }
            other => bail!("unknown graded operation {other:?}"),
        }
    }
}

/// Options that may appear anywhere in a command's token stream.
#[derive(Default)]
struct Opts {
    algebra: Option<String>,
    open: Option<String>,
    store_as: Option<String>,
    bound: Option<usize>,
    gens: Option<String>,
}

impl Opts {
    fn split(tokens: &[String]) -> Result<(Opts, Vec<String>)> {
        let mut opts = Opts::default();
        let mut pos = Vec::new();
        let mut it = tokens.iter();
        while let Some(tok) = it.next() {
            let mut take = |slot: &mut Option<String>| -> Result<()> {
                let v = it
                    .next()
                    .ok_or_else(|| anyhow!("{tok} needs a value"))?
                    .clone();
                *slot = Some(v);
                Ok(())
            };
            match tok.as_str() {
                "--algebra" => take(&mut opts.algebra)?,
                "--open" => take(&mut opts.open)?,
                "--as" => take(&mut opts.store_as)?,
                "--gens" => take(&mut opts.gens)?,
                "--bound" => {
                    let v = it.next().ok_or_else(|| anyhow!("--bound needs a value"))?;
                    opts.bound = Some(v.parse().map_err(|_| anyhow!("bad bound {v:?}"))?);
                }
                other if other.starts_with("--") => bail!("unknown option {other}"),
                _ => pos.push(tok.clone()),
            }
        }
        Ok((opts, pos))
    }
}

pub fn field_name(f: Field) -> String {
    match f {
        Field::Q => "Q".into(),
        Field::Fp(p) => format!("F{p}"),
    }
}

fn coeffs(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string_canonical).collect()
}

/// Pretty-print a vector against basis labels.
pub fn lincomb(labels: &[String], v: &[Scalar]) -> String {
    let mut parts = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string_canonical();
        if cs == "1" {
            parts.push(labels[i].clone());
        } else {
            parts.push(format!("{cs}*{}", labels[i]));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Resolve a point token: an explicit simple index, or `p`/`q` over a
/// two-point algebra, where `p` is the projective simple when exactly one
/// of the two is projective.
pub fn resolve_point(rep: &Rep, tok: &str) -> Result<usize> {
    if let Ok(i) = tok.parse::<usize>() {
        let count = rep.simples()?.len();
        if i >= count {
            bail!("point index {i} out of range (the algebra has {count} simples)");
        }
        return Ok(i);
    }
    let simples = rep.simples()?;
    if simples.len() != 2 {
        bail!("the names p/q apply to two-point algebras only; use simple indices");
    }
    let projective: Vec<bool> = simples
        .iter()
        .map(|s| {
            projective_cover(rep, &s.module)
                .map(|pc| pc.module.dim() == s.module.dim())
                .unwrap_or(false)
        })
        .collect();
    let (p, q) = match (projective[0], projective[1]) {
        (true, false) => (0, 1),
        (false, true) => (1, 0),
        _ => (0, 1),
    };
    match tok {
        "p" => Ok(p),
        "q" => Ok(q),
        other => bail!("unknown point {other:?} (use p, q, or a simple index)"),
    }
}

/// A class spec: `all`, `none`, or a comma-separated list of point tokens.
pub fn class_from_spec(rep: &Rep, spec: &str) -> Result<SerreClass> {
    match spec {
        "all" => SerreClass::all(rep).map_err(|e| anyhow!("{e}")),
        "none" => Ok(SerreClass::empty()),
        _ => {
            let mut idx = Vec::new();
            for tok in spec.split(',') {
                idx.push(resolve_point(rep, tok.trim())?);
            }
            Ok(SerreClass::of(idx))
        }
    }
}

/// The reduced closed subspace named by a class spec.
pub fn closed_from_spec(rep: &Rep, spec: &str) -> Result<ClosedSubspace> {
    let class = class_from_spec(rep, spec)?;
    closed_of_class(rep, &class).map_err(|e| anyhow!("{e}"))
}

fn describe_closed(
    title: &str,
    op: &str,
    rep: &Rep,
    w: &ClosedSubspace,
) -> CommandOutput {
    let labels = rep.alg().labels();
    let basis: Vec<String> = w
        .ideal_of()
        .space()
        .basis_vectors()
        .iter()
        .map(|v| lincomb(labels, v))
        .collect();
    let class = serre_of_closed(rep, w).ok();
    let human = format!(
        "{title}\n  defining ideal dim: {}\n  ideal basis: [{}]\n  carries simples: {:?}",
        w.ideal_of().space().dim(),
        basis.join(", "),
        class
            .as_ref()
            .map(|c| c.simples.iter().copied().collect::<Vec<_>>())
            .unwrap_or_default()
    );
    CommandOutput {
        human,
        json: json!({
            "command": format!("subspace {op}"),
            "ideal_dim": w.ideal_of().space().dim(),
            "ideal_basis": basis,
            "simples": class.map(|c| c.simples.iter().copied().collect::<Vec<_>>()),
        }),
    }
}

/// Basis elements named by labels, or the algebra's own minimal generating
/// set when no labels are given.
fn generator_elements(alg: &Arc<modspace::algebra::Algebra>, gens: Option<&str>) -> Result<Vec<Vec<Scalar>>> {
    let field = alg.field();
    let n = alg.dim();
    let indices: Vec<usize> = match gens {
        Some(list) => list
            .split(',')
            .map(|l| {
                alg.labels()
                    .iter()
                    .position(|x| x == l.trim())
                    .ok_or_else(|| anyhow!("no basis element labelled {l:?}"))
            })
            .collect::<Result<_>>()?,
        None => alg.generators().to_vec(),
    };
    Ok(indices
        .into_iter()
        .map(|i| {
            let mut v = vec![field.zero(); n];
            v[i] = field.one();
            v
        })
        .collect())
}

/// Does the module split as the direct sum of its composition factors?
fn is_split_by_factors(rep: &Rep, m: &Module, factors: &[usize]) -> Result<bool> {
    let simples = rep.simples()?;
    // Quick dimension screen, then hom counting: a length-n module is
    // semisimple iff Hom from each simple matches its multiplicity both
    // ways.
    let total: usize = factors
        .iter()
        .enumerate()
        .map(|(i, &k)| k * simples[i].module.dim())
        .sum();
    if total != m.dim() {
        return Ok(false);
    }
    for (i, &k) in factors.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let s = &simples[i].module;
        if hom_dim(s, m) != k * simples[i].endo_dim || hom_dim(m, s) != k * simples[i].endo_dim {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hom and first-extension dimensions between two modules; a convenience
/// wrapper used by suite code as well.
pub fn hom_ext(rep: &Rep, m: &Module, n: &Module) -> Result<(usize, usize)> {
    Ok((hom_dim(m, n), ext_dim(rep, m, n, 1)?))
}
