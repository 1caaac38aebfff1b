//! Command-line front end: load instance files, run the checkers and the
//! constructions, and report.
//!
//! Exit codes: 0 when every check passes, 1 when a law is violated, 2 on
//! input errors.

pub mod format;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use etale::categories::{check_category, check_functor, check_nat_trans, vertical_compose};
use etale::cntsets::{
    check_cnt_morphism, check_per, check_spatialization, check_witness, compose_cnt, e_obj,
    spatialize, CntMorphism, OvertDiscreteWitness,
};
use etale::equivalence::{
    naturality_square, roundtrip_cset, roundtrip_functor, roundtrip_nat, to_cset, to_functor,
};
use etale::etale::{check_action, check_equivariant, check_etale, check_section_membership, compose_equivariant};
use etale::ideals::{
    apply_operator, apply_stream, check_relation, enumerate_ideals, open_member, CeOpen,
    ComputableSpace, EnumOperator, Ideal, TransitiveRelation, DEFAULT_CARRIER_BOUND,
};
use etale::kernel::{Fuel, Semi};
use etale::{Error, Report};

use format::{Instance, Loader};

#[derive(Debug, Parser)]
#[command(name = "etale", version, about = "Check computable étale spaces, PERs and functors into CntSets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit a single JSON report.
    #[arg(long, global = true)]
    pub json: bool,

    /// Query budget for stream-scale checks.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub fuel: usize,

    /// Replace relations by their transitive closure before validation.
    #[arg(long, global = true)]
    pub closure: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an instance file of any kind.
    Check { file: PathBuf },
    /// List the points of a relation's ideal space.
    Ideals { file: PathBuf },
    /// Recover a PER from an overt discrete witness (or a PER's canonical witness).
    Spatialize { file: PathBuf },
    /// Compose two morphisms, transformations or equivariant maps: `second ∘ first`.
    Compose { second: PathBuf, first: PathBuf },
    /// Validate and run the extra law checks for the instance kind.
    Laws { file: PathBuf },
    /// Translate a functor into a C-set.
    ToEtale {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a C-set into a functor.
    ToFunctor {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that the translations are inverse on a functor, C-set,
    /// transformation or equivariant map.
    Roundtrip { file: PathBuf },
    /// Check and round-trip every `*.json` file in a directory.
    Suite { dir: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Violation,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::InputError => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::InputError => "input-error",
        }
    }

    fn worst(self, other: Status) -> Status {
        if self.code() >= other.code() {
            self
        } else {
            other
        }
    }
}

/// What a command produced.
#[derive(Debug, Serialize)]
pub struct Outcome {
    pub command: &'static str,
    pub status: Status,
    pub findings: Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Outcome {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            status: Status::Ok,
            findings: Report::new(),
            error: None,
            result: None,
            text: Vec::new(),
        }
    }

    fn from_report(command: &'static str, findings: Report) -> Self {
        let mut o = Self::new(command);
        o.status = if findings.is_ok() { Status::Ok } else { Status::Violation };
        o.findings = findings;
        o
    }

    fn from_error(command: &'static str, err: Error) -> Self {
        let mut o = Self::new(command);
        match err {
            Error::Invalid { what, report } => {
                o.status = Status::Violation;
                o.error = Some(format!("{what} is invalid"));
                o.findings = report;
            }
            other => {
                o.status = Status::InputError;
                o.error = Some(other.to_string());
            }
        }
        o
    }

    /// Human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for line in &self.text {
            out.push_str(line);
            out.push('\n');
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        for f in self.findings.findings() {
            let at = if f.location.is_empty() {
                String::new()
            } else {
                format!(" at {}", f.location)
            };
            out.push_str(&format!("{}{at}: {}\n", f.rule, f.witness));
        }
        out.push_str(&format!("status: {}\n", self.status.as_str()));
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("outcomes serialize");
        s.push('\n');
        s
    }
}

/// Runs a parsed command line and returns the rendered output and exit code.
pub fn run_cli(cli: &Cli) -> (String, i32) {
    let outcome = run(cli);
    let text = if cli.json {
        outcome.render_json()
    } else {
        outcome.render_text()
    };
    (text, outcome.status.code())
}

pub fn run(cli: &Cli) -> Outcome {
    let loader = Loader {
        closure: cli.closure,
    };
    let fuel = Fuel(cli.fuel);
    let (name, result) = match &cli.command {
        Command::Check { file } => ("check", check_file(&loader, file)),
        Command::Ideals { file } => ("ideals", ideals(&loader, file)),
        Command::Spatialize { file } => ("spatialize", spatialize_file(&loader, file)),
        Command::Compose { second, first } => ("compose", compose(&loader, second, first)),
        Command::Laws { file } => ("laws", laws(&loader, file, fuel)),
        Command::ToEtale { file, output } => ("to-etale", to_etale(&loader, file, output.as_deref())),
        Command::ToFunctor { file, output } => {
            ("to-functor", to_functor_cmd(&loader, file, output.as_deref()))
        }
        Command::Roundtrip { file } => ("roundtrip", roundtrip(&loader, file)),
        Command::Suite { dir } => ("suite", suite(&loader, dir)),
    };
    match result {
        Ok(mut o) => {
            o.command = name;
            o
        }
        Err(e) => Outcome::from_error(name, e),
    }
}

type CmdResult = Result<Outcome, Error>;

/// The checker matching the instance kind.
pub fn check_instance(i: &Instance) -> Report {
    match i {
        Instance::Relation(r) => check_relation(r),
        Instance::Per(p) => check_per(p),
        Instance::CntMorphism(m) => check_cnt_morphism(m),
        Instance::Witness(w) => check_witness(w),
        Instance::Category(c) => check_category(c),
        Instance::Functor(f) => check_functor(f),
        Instance::NatTrans(n) => check_nat_trans(n),
        Instance::Etale(e) => check_etale(e),
        Instance::Cset(a) => check_action(a),
        Instance::Equivariant(m) => check_equivariant(m),
    }
}

fn check_file(loader: &Loader, file: &Path) -> CmdResult {
    let inst = loader.load_path(file)?;
    let mut o = Outcome::from_report("check", check_instance(&inst));
    o.result = Some(json!({ "kind": inst.kind() }));
    Ok(o)
}

fn point_lists(points: &[Ideal]) -> Vec<Vec<usize>> {
    points
        .iter()
        .map(|p| p.elements().iter().copied().collect())
        .collect()
}

fn ideals(loader: &Loader, file: &Path) -> CmdResult {
    let Instance::Relation(r) = loader.load_path(file)? else {
        return Err(Error::Input("ideals expects a relation".into()));
    };
    let report = check_relation(&r);
    if !report.is_ok() {
        return Ok(Outcome::from_report("ideals", report));
    }
    // brute force while it is cheap, principal ideals beyond
    let points = if r.carrier() <= DEFAULT_CARRIER_BOUND {
        enumerate_ideals(&r)?
    } else {
        r.ideals()
    };
    let lists = point_lists(&points);
    let mut o = Outcome::new("ideals");
    o.text.push(format!("{} points", lists.len()));
    for (i, p) in lists.iter().enumerate() {
        o.text.push(format!("{i}: {p:?}"));
    }
    o.result = Some(json!({ "points": lists }));
    Ok(o)
}

fn spatialize_file(loader: &Loader, file: &Path) -> CmdResult {
    let w = match loader.load_path(file)? {
        Instance::Witness(w) => w,
        Instance::Per(p) => {
            let rep = check_per(&p);
            if !rep.is_ok() {
                return Ok(Outcome::from_report("spatialize", rep));
            }
            OvertDiscreteWitness::canonical(&p)
        }
        _ => return Err(Error::Input("spatialize expects a witness or a per".into())),
    };
    let sp = spatialize(&w)?;
    let mut o = Outcome::from_report("spatialize", check_spatialization(&sp));
    let classes: Vec<Vec<usize>> = sp
        .per
        .classes()
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    o.text.push(format!("{} classes: {classes:?}", classes.len()));
    o.text.push(format!("g: {:?}", sp.g_map));
    o.text.push(format!("h: {:?}", sp.h_map));
    o.result = Some(json!({
        "per": format::per_doc(&sp.per).to_value(),
        "g": sp.g_map,
        "h": sp.h_map,
    }));
    Ok(o)
}

fn compose(loader: &Loader, second: &Path, first: &Path) -> CmdResult {
    let (a, b) = (loader.load_path(second)?, loader.load_path(first)?);
    let doc = match (&a, &b) {
        (Instance::CntMorphism(m2), Instance::CntMorphism(m1)) => {
            require_valid_pair(check_cnt_morphism(m2), check_cnt_morphism(m1))?;
            format::cnt_morphism_doc(&compose_cnt(m2, m1)?)
        }
        (Instance::NatTrans(n2), Instance::NatTrans(n1)) => {
            require_valid_pair(check_nat_trans(n2), check_nat_trans(n1))?;
            format::instance_doc(&Instance::NatTrans(vertical_compose(n2, n1)?))
        }
        (Instance::Equivariant(k), Instance::Equivariant(h)) => {
            require_valid_pair(check_equivariant(k), check_equivariant(h))?;
            format::instance_doc(&Instance::Equivariant(compose_equivariant(k, h)?))
        }
        _ => {
            return Err(Error::Input(format!(
                "cannot compose a {} after a {}",
                a.kind(),
                b.kind()
            )))
        }
    };
    let mut o = Outcome::new("compose");
    o.text.push(doc.to_pretty().trim_end().to_string());
    o.result = Some(doc.to_value());
    Ok(o)
}

fn require_valid_pair(second: Report, first: Report) -> Result<(), Error> {
    let mut report = Report::new();
    report.absorb("second", second);
    report.absorb("first", first);
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::Invalid {
            what: "operand",
            report,
        })
    }
}

/// Folds a fallible construction's report into `report`.
fn absorb_result(report: &mut Report, location: &str, r: Result<Report, Error>) -> Result<(), Error> {
    match r {
        Ok(rep) => {
            report.absorb(location, rep);
            Ok(())
        }
        Err(Error::Invalid { report: rep, .. }) => {
            report.absorb(location, rep);
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn laws(loader: &Loader, file: &Path, fuel: Fuel) -> CmdResult {
    let inst = loader.load_path(file)?;
    let mut report = check_instance(&inst);
    if !report.is_ok() {
        return Ok(Outcome::from_report("laws", report));
    }
    match &inst {
        Instance::Relation(r) => {
            let (rep, unresolved) = stream_laws(r, fuel)?;
            report.absorb("stream", rep);
            let mut o = Outcome::from_report("laws", report);
            o.text.push(format!("{unresolved} stream queries unresolved within the fuel"));
            o.result = Some(json!({ "fuel": fuel.0, "unresolved": unresolved }));
            return Ok(o);
        }
        Instance::Per(p) => {
            let space = ComputableSpace::full(e_obj(p));
            if space.len() != p.classes().len() {
                report.push("laws.discrete", json!({ "points": space.len(), "classes": p.classes().len() }));
            }
            let sp = spatialize(&OvertDiscreteWitness::canonical(p))?;
            report.absorb("spatialize", check_spatialization(&sp));
        }
        Instance::Witness(w) => {
            let sp = spatialize(w)?;
            report.absorb("spatialize", check_spatialization(&sp));
        }
        Instance::CntMorphism(m) => {
            let left = compose_cnt(&CntMorphism::identity(m.tar()), m)?;
            let right = compose_cnt(m, &CntMorphism::identity(m.src()))?;
            for (side, c) in [("left", left), ("right", right)] {
                if !c.same_morphism(m) {
                    report.push("laws.unit", json!({ "side": side }));
                }
            }
        }
        Instance::Category(c) => {
            let [src, tar, id] = c.realizers()?;
            let tables: [(&str, &EnumOperator, &[usize], &ComputableSpace, &ComputableSpace); 3] = [
                ("src", &src, c.src_table(), c.morphisms(), c.objects()),
                ("tar", &tar, c.tar_table(), c.morphisms(), c.objects()),
                ("id", &id, c.id_table(), c.objects(), c.morphisms()),
            ];
            for (name, op, table, from, to) in tables {
                for (i, p) in from.points().iter().enumerate() {
                    let out = apply_operator(op, p)?;
                    if to.index_of(&out) != Some(table[i]) {
                        report.push("laws.realizer", json!({ "table": name, "point": i }));
                    }
                }
            }
        }
        Instance::Functor(f) => absorb_result(&mut report, "roundtrip", roundtrip_functor(f))?,
        Instance::NatTrans(n) => absorb_result(&mut report, "roundtrip", roundtrip_nat(n))?,
        Instance::Etale(e) => report.absorb("section-membership", check_section_membership(e)),
        Instance::Cset(a) => {
            absorb_result(&mut report, "roundtrip", roundtrip_cset(a).map(|(_, r)| r))?
        }
        Instance::Equivariant(m) => {
            absorb_result(&mut report, "roundtrip", naturality_square(m))?
        }
    }
    Ok(Outcome::from_report("laws", report))
}

/// Stream evaluation against exact evaluation, within `fuel` queries.
///
/// Streams must never produce anything outside the exact answer; items
/// still missing when the fuel runs out are counted, not reported.
fn stream_laws(r: &TransitiveRelation, fuel: Fuel) -> Result<(Report, usize), Error> {
    let mut report = Report::new();
    let mut unresolved = 0;
    let space = ComputableSpace::full(r.clone());
    let id = EnumOperator::identity(r);
    for (i, p) in space.points().iter().enumerate() {
        let exact = apply_operator(&id, p)?;
        let streamed: std::collections::BTreeSet<usize> = apply_stream(&id, &p.to_stream())
            .elements()
            .prefix(fuel.0)
            .into_iter()
            .collect();
        if !streamed.is_subset(exact.elements()) {
            report.push(
                "laws.stream",
                json!({ "point": i, "exact": exact.elements(), "streamed": streamed }),
            );
        }
        unresolved += exact.elements().difference(&streamed).count();
        for a in 0..r.carrier() {
            let semi = open_member(&p.to_stream(), &CeOpen::finite([a]), fuel);
            match (semi, p.contains(a)) {
                (Semi::Yes, false) => {
                    report.push("laws.open-member", json!({ "point": i, "generator": a }))
                }
                (Semi::Unknown, true) => unresolved += 1,
                _ => {}
            }
        }
    }
    Ok((report, unresolved))
}

fn write_or_print(o: &mut Outcome, doc: &format::Doc, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(path) => {
            fs::write(path, doc.to_pretty())
                .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            o.text.push(format!("wrote {}", path.display()));
        }
        None => o.text.push(doc.to_pretty().trim_end().to_string()),
    }
    o.result = Some(doc.to_value());
    Ok(())
}

fn to_etale(loader: &Loader, file: &Path, output: Option<&Path>) -> CmdResult {
    let Instance::Functor(f) = loader.load_path(file)? else {
        return Err(Error::Input("to-etale expects a functor".into()));
    };
    let a = to_cset(&f)?;
    let mut o = Outcome::from_report("to-etale", check_action(&a));
    write_or_print(&mut o, &format::cset_doc(&a), output)?;
    Ok(o)
}

fn to_functor_cmd(loader: &Loader, file: &Path, output: Option<&Path>) -> CmdResult {
    let Instance::Cset(a) = loader.load_path(file)? else {
        return Err(Error::Input("to-functor expects a cset".into()));
    };
    let f = to_functor(&a)?;
    let mut o = Outcome::from_report("to-functor", check_functor(&f));
    write_or_print(&mut o, &format::functor_doc(&f), output)?;
    Ok(o)
}

/// Round-trip report for the kinds that have one.
pub fn roundtrip_instance(i: &Instance) -> Option<Result<Report, Error>> {
    Some(match i {
        Instance::Functor(f) => roundtrip_functor(f),
        Instance::Cset(a) => roundtrip_cset(a).map(|(_, r)| r),
        Instance::NatTrans(n) => roundtrip_nat(n),
        Instance::Equivariant(m) => naturality_square(m),
        _ => return None,
    })
}

fn roundtrip(loader: &Loader, file: &Path) -> CmdResult {
    let inst = loader.load_path(file)?;
    let Some(result) = roundtrip_instance(&inst) else {
        return Err(Error::Input(format!("no round trip for a {}", inst.kind())));
    };
    let mut o = Outcome::from_report("roundtrip", result?);
    if let Instance::Cset(a) = &inst {
        let (w, _) = roundtrip_cset(a)?;
        o.result = Some(serde_json::to_value(w).expect("witness serializes"));
    }
    Ok(o)
}

fn suite(loader: &Loader, dir: &Path) -> CmdResult {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut o = Outcome::new("suite");
    let mut rows = Vec::new();
    for path in &files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let (status, findings, error) = suite_file(loader, path);
        o.status = o.status.worst(status);
        o.findings.absorb(&name, findings);
        o.text.push(match &error {
            Some(e) => format!("{name}: {} ({e})", status.as_str()),
            None => format!("{name}: {}", status.as_str()),
        });
        rows.push(json!({ "file": name, "status": status, "error": error }));
    }
    o.text.push(format!("{} files", files.len()));
    o.result = Some(json!({ "files": rows }));
    Ok(o)
}

fn suite_file(loader: &Loader, path: &Path) -> (Status, Report, Option<String>) {
    let inst = match loader.load_path(path) {
        Ok(i) => i,
        Err(e) => return (Status::InputError, Report::new(), Some(e.to_string())),
    };
    let mut report = check_instance(&inst);
    if report.is_ok() {
        if let Some(result) = roundtrip_instance(&inst) {
            if let Err(e) = absorb_result(&mut report, "roundtrip", result) {
                return (Status::InputError, report, Some(e.to_string()));
            }
        }
    }
    let status = if report.is_ok() { Status::Ok } else { Status::Violation };
    (status, report, None)
}
