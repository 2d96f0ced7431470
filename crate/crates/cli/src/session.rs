//! Name resolution: turns a parsed script into core objects and commands.

use std::collections::HashMap;

use clalg::closure::ClosureOperation;
use clalg::module::{ModuleMap, ModuleRef, PresentedModule, Submodule};
use clalg::poly::{Poly, PolyRing};
use clalg::ring::{GradedRing, RingMap, RingRef};
use clalg::vector::Vector;

use crate::syntax::{Arg, Field, Item, Located, Pos, Script, ScriptError, Value};
use crate::Flags;

#[derive(Clone, Debug)]
pub enum Object {
    Ring(RingRef),
    Module(ModuleRef),
    Map(ModuleMap),
    Submodule(Submodule),
    Closure(ClosureOperation),
}

impl Object {
    fn kind(&self) -> &'static str {
        match self {
            Object::Ring(_) => "ring",
            Object::Module(_) => "module",
            Object::Map(_) => "map",
            Object::Submodule(_) => "submodule",
            Object::Closure(_) => "closure",
        }
    }
}

/// Where a phantom instance comes from: `R -> M, 1 ↦ e_1`, or a given map.
#[derive(Clone, Debug)]
pub enum InstanceSource {
    Module(ModuleRef),
    Map(ModuleMap),
}

#[derive(Clone, Debug)]
pub enum AxiomCheck {
    Functoriality(ModuleMap, Submodule),
    Semiresiduality(Submodule),
    Faithfulness(RingRef),
    ZeroClosed(RingRef),
    Gcc {
        map: ModuleMap,
        xs: Vec<Poly>,
        v: Vector,
    },
    Laws {
        ring: RingRef,
        count: u64,
    },
}

#[derive(Clone, Debug)]
pub enum Action {
    Gb(Submodule),
    Member(Submodule, Vector),
    Close(ClosureOperation, Submodule, Option<Vector>),
    Phantom(ClosureOperation, InstanceSource),
    Star {
        source: InstanceSource,
        e_max: u32,
        candidates: Option<Vec<Poly>>,
    },
    Sym2(InstanceSource),
    AlgebraAxiom(ClosureOperation, InstanceSource),
    Modify(InstanceSource, Vec<Poly>),
    Build {
        closure: ClosureOperation,
        ring: RingRef,
        sops: Vec<Vec<Poly>>,
        rounds: usize,
        max_generators: Option<usize>,
    },
    TestIdeal(ClosureOperation, Vec<Submodule>),
    Chain(ClosureOperation, Vec<ModuleMap>),
    Axiom(ClosureOperation, AxiomCheck),
}

#[derive(Clone, Debug)]
pub struct Command {
    /// 1-based position among the script's commands.
    pub index: usize,
    /// Canonical text of the command.
    pub echo: String,
    pub action: Action,
}

#[derive(Debug, Default)]
pub struct Session {
    objects: HashMap<String, Object>,
    /// Declaration order of names.
    pub names: Vec<String>,
    pub commands: Vec<Command>,
    last_ring: Option<RingRef>,
}

type Res<T> = Result<T, ScriptError>;

fn err<T>(pos: Pos, msg: impl Into<String>) -> Res<T> {
    Err(ScriptError::new(pos, msg))
}

fn parse_poly(poly: &PolyRing, v: &Located<Value>) -> Res<Poly> {
    match &v.node {
        Value::Scalar(s) => poly
            .parse(s)
            .map_err(|e| ScriptError::new(v.pos, e.to_string())),
        Value::List(_) => err(v.pos, "expected a polynomial, found a list"),
    }
}

fn list<'a>(v: &'a Located<Value>, what: &str) -> Res<&'a [Located<Value>]> {
    v.node
        .as_list()
        .ok_or_else(|| ScriptError::new(v.pos, format!("expected a list of {what}")))
}

fn scalar<'a>(v: &'a Located<Value>, what: &str) -> Res<&'a str> {
    v.node
        .as_scalar()
        .ok_or_else(|| ScriptError::new(v.pos, format!("expected {what}, found a list")))
}

fn parse_int<T: std::str::FromStr>(v: &Located<Value>, what: &str) -> Res<T> {
    let s = scalar(v, what)?;
    s.parse()
        .map_err(|_| ScriptError::new(v.pos, format!("expected {what}, found '{s}'")))
}

fn parse_bool(v: &Located<Value>) -> Res<bool> {
    match scalar(v, "true or false")? {
        "true" => Ok(true),
        "false" => Ok(false),
        s => err(v.pos, format!("expected true or false, found '{s}'")),
    }
}

fn polys(poly: &PolyRing, v: &Located<Value>) -> Res<Vec<Poly>> {
    list(v, "polynomials")?
        .iter()
        .map(|x| parse_poly(poly, x))
        .collect()
}

fn names(v: &Located<Value>) -> Res<Vec<Located<String>>> {
    list(v, "names")?
        .iter()
        .map(|x| Ok(Located::new(scalar(x, "a name")?.to_string(), x.pos)))
        .collect()
}

/// Fields of one declaration, each consumed at most once; leftovers are
/// reported as unknown.
struct Fields<'a> {
    fields: &'a [Field],
    used: Vec<bool>,
    pos: Pos,
}

impl<'a> Fields<'a> {
    fn new(fields: &'a [Field], pos: Pos) -> Res<Self> {
        for (i, f) in fields.iter().enumerate() {
            if fields[..i].iter().any(|g| g.key.node == f.key.node) {
                return err(f.key.pos, format!("duplicate field '{}'", f.key.node));
            }
        }
        Ok(Fields {
            fields,
            used: vec![false; fields.len()],
            pos,
        })
    }

    fn get(&mut self, key: &str) -> Option<&'a Located<Value>> {
        let i = self.fields.iter().position(|f| f.key.node == key)?;
        self.used[i] = true;
        Some(&self.fields[i].value)
    }

    fn require(&mut self, key: &str) -> Res<&'a Located<Value>> {
        match self.get(key) {
            Some(v) => Ok(v),
            None => err(self.pos, format!("missing field '{key}'")),
        }
    }

    fn finish(self) -> Res<()> {
        match self.used.iter().position(|u| !u) {
            Some(i) => err(
                self.fields[i].key.pos,
                format!("unknown field '{}'", self.fields[i].key.node),
            ),
            None => Ok(()),
        }
    }
}

fn arity(pos: Pos, cmd: &str, usage: &str) -> ScriptError {
    ScriptError::new(
        pos,
        format!("arity mismatch: usage is 'check {cmd} {usage}'"),
    )
}

/// Positional and `key=value` arguments of one command.
struct Args<'a> {
    positional: Vec<&'a Located<Arg>>,
    options: Vec<(&'a str, &'a Value, Pos, bool)>,
    at: usize,
    pos: Pos,
    cmd: &'a str,
    usage: &'static str,
}

impl<'a> Args<'a> {
    fn new(args: &'a [Located<Arg>], pos: Pos, cmd: &'a str, usage: &'static str) -> Self {
        let mut positional = Vec::new();
        let mut options = Vec::new();
        for a in args {
            match &a.node {
                Arg::Option(k, v) => options.push((k.as_str(), v, a.pos, false)),
                _ => positional.push(a),
            }
        }
        Args {
            positional,
            options,
            at: 0,
            pos,
            cmd,
            usage,
        }
    }

    fn arity(&self) -> ScriptError {
        let pos = self.positional.get(self.at).map_or(self.pos, |a| a.pos);
        arity(pos, self.cmd, self.usage)
    }

    fn peek(&self) -> Option<&'a Located<Arg>> {
        self.positional.get(self.at).copied()
    }

    fn next(&mut self) -> Res<&'a Located<Arg>> {
        let a = self.peek().ok_or_else(|| self.arity())?;
        self.at += 1;
        Ok(a)
    }

    fn word(&mut self) -> Res<Located<String>> {
        let a = self.next()?;
        match &a.node {
            Arg::Word(w) => Ok(Located::new(w.clone(), a.pos)),
            _ => err(
                a.pos,
                format!("expected a name in 'check {} {}'", self.cmd, self.usage),
            ),
        }
    }

    fn list(&mut self) -> Res<Located<Value>> {
        let a = self.next()?;
        match &a.node {
            Arg::List(v) => Ok(Located::new(v.clone(), a.pos)),
            _ => err(
                a.pos,
                format!("expected a list in 'check {} {}'", self.cmd, self.usage),
            ),
        }
    }

    fn has_list(&self) -> bool {
        matches!(self.peek().map(|a| &a.node), Some(Arg::List(_)))
    }

    fn has_word(&self) -> bool {
        matches!(self.peek().map(|a| &a.node), Some(Arg::Word(_)))
    }

    fn option(&mut self, key: &str) -> Option<Located<Value>> {
        let o = self.options.iter_mut().find(|o| o.0 == key)?;
        o.3 = true;
        Some(Located::new(o.1.clone(), o.2))
    }

    fn finish(self) -> Res<()> {
        if self.at < self.positional.len() {
            return Err(self.arity());
        }
        if let Some(o) = self.options.iter().find(|o| !o.3) {
            return err(o.2, format!("unknown option '{}' for '{}'", o.0, self.cmd));
        }
        Ok(())
    }
}

fn int_fields(v: &Located<Value>, what: &str) -> Res<Vec<i64>> {
    list(v, what)?.iter().map(|x| parse_int(x, what)).collect()
}

impl Session {
    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.get(name)
    }

    fn lookup(&self, name: &Located<String>) -> Res<&Object> {
        self.objects
            .get(&name.node)
            .ok_or_else(|| ScriptError::new(name.pos, format!("undeclared name '{}'", name.node)))
    }

    fn declare(&mut self, name: &Located<String>, obj: Object) -> Res<()> {
        if self.objects.contains_key(&name.node) {
            return err(name.pos, format!("'{}' is already declared", name.node));
        }
        if let Object::Ring(r) = &obj {
            self.last_ring = Some(r.clone());
        }
        self.names.push(name.node.clone());
        self.objects.insert(name.node.clone(), obj);
        Ok(())
    }

    fn wrong_kind<T>(name: &Located<String>, obj: &Object, want: &str) -> Res<T> {
        err(
            name.pos,
            format!("'{}' is a {}, expected {want}", name.node, obj.kind()),
        )
    }

    pub fn ring(&self, name: &Located<String>) -> Res<RingRef> {
        match self.lookup(name)? {
            Object::Ring(r) => Ok(r.clone()),
            o => Self::wrong_kind(name, o, "a ring"),
        }
    }

    /// A module; a ring name stands for the free module of rank one.
    pub fn module(&self, name: &Located<String>) -> Res<ModuleRef> {
        match self.lookup(name)? {
            Object::Module(m) => Ok(m.clone()),
            Object::Ring(r) => Ok(PresentedModule::free(r, 1)),
            o => Self::wrong_kind(name, o, "a module or ring"),
        }
    }

    pub fn map(&self, name: &Located<String>) -> Res<ModuleMap> {
        match self.lookup(name)? {
            Object::Map(f) => Ok(f.clone()),
            o => Self::wrong_kind(name, o, "a map"),
        }
    }

    pub fn submodule(&self, name: &Located<String>) -> Res<Submodule> {
        match self.lookup(name)? {
            Object::Submodule(n) => Ok(n.clone()),
            o => Self::wrong_kind(name, o, "a submodule"),
        }
    }

    pub fn closure(&self, name: &Located<String>) -> Res<ClosureOperation> {
        match self.lookup(name)? {
            Object::Closure(c) => Ok(c.clone()),
            o => Self::wrong_kind(name, o, "a closure"),
        }
    }

    fn instance_source(&self, name: &Located<String>) -> Res<InstanceSource> {
        match self.lookup(name)? {
            Object::Map(f) => Ok(InstanceSource::Map(f.clone())),
            Object::Module(m) => Ok(InstanceSource::Module(m.clone())),
            Object::Ring(r) => Ok(InstanceSource::Module(PresentedModule::free(r, 1))),
            o => Self::wrong_kind(name, o, "a module or map"),
        }
    }

    /// An element of `m`: a list of `ngens` polynomials, or one polynomial
    /// in a module of rank one.
    fn element(&self, m: &ModuleRef, v: &Located<Value>) -> Res<Vector> {
        let poly = m.poly();
        let out: Vec<Poly> = match &v.node {
            Value::Scalar(_) => vec![parse_poly(poly, v)?],
            Value::List(l) => l.iter().map(|x| parse_poly(poly, x)).collect::<Res<_>>()?,
        };
        if out.len() != m.ngens() {
            return err(
                v.pos,
                format!(
                    "arity mismatch: element has {} entries, module has {} generators",
                    out.len(),
                    m.ngens()
                ),
            );
        }
        Ok(out)
    }

    fn elements(&self, m: &ModuleRef, v: &Located<Value>) -> Res<Vec<Vector>> {
        list(v, "elements")?
            .iter()
            .map(|x| self.element(m, x))
            .collect()
    }

    fn ring_decl(&mut self, name: &Located<String>, fields: &[Field], pos: Pos) -> Res<()> {
        let mut f = Fields::new(fields, pos)?;
        let pv = f.require("p")?;
        let p: u64 = parse_int(pv, "a prime modulus")?;
        let vars = names(f.require("vars")?)?;
        let var_names: Vec<&str> = vars.iter().map(|v| v.node.as_str()).collect();
        for (i, v) in vars.iter().enumerate() {
            if var_names[..i].contains(&v.node.as_str()) {
                return err(v.pos, format!("duplicate variable '{}'", v.node));
            }
        }
        let weights = match f.get("weights") {
            Some(w) => {
                let ws = int_fields(w, "a positive weight")?;
                if ws.len() != vars.len() {
                    return err(
                        w.pos,
                        format!(
                            "arity mismatch: {} weights for {} variables",
                            ws.len(),
                            vars.len()
                        ),
                    );
                }
                if ws.iter().any(|&x| x < 1 || x > u32::MAX as i64) {
                    return err(w.pos, "weights must be positive");
                }
                ws.into_iter().map(|x| x as u32).collect()
            }
            None => vec![1; vars.len()],
        };
        let poly = PolyRing::new(p, &var_names, weights)
            .map_err(|e| ScriptError::new(pv.pos, e.to_string()))?;
        let rels = match f.get("rels") {
            Some(v) => polys(&poly, v)?,
            None => Vec::new(),
        };
        let domain = match f.get("domain") {
            Some(v) => parse_bool(v)?,
            None => rels.is_empty(),
        };
        f.finish()?;
        let ring = GradedRing::new(poly, rels, domain)
            .map_err(|e| ScriptError::new(pos, e.to_string()))?;
        self.declare(name, Object::Ring(ring))
    }

    fn module_decl(
        &mut self,
        name: &Located<String>,
        ring: &Located<String>,
        fields: &[Field],
        pos: Pos,
    ) -> Res<()> {
        let r = self.ring(ring)?;
        let mut f = Fields::new(fields, pos)?;
        let n: usize = parse_int(f.require("ngens")?, "a generator count")?;
        let degrees = match f.get("degrees") {
            Some(v) => {
                let d = int_fields(v, "an integer degree")?;
                if d.len() != n {
                    return err(
                        v.pos,
                        format!("arity mismatch: {} degrees for {n} generators", d.len()),
                    );
                }
                Some(d)
            }
            None => None,
        };
        let rels = match f.get("rels") {
            Some(v) => {
                let mut cols = Vec::new();
                for c in list(v, "relation columns")? {
                    let col = polys(r.poly(), c)?;
                    if col.len() != n {
                        return err(c.pos, format!("arity mismatch: relation has {} entries, module has {n} generators", col.len()));
                    }
                    cols.push(col);
                }
                cols
            }
            None => Vec::new(),
        };
        f.finish()?;
        let m = PresentedModule::new(&r, n, rels, degrees)
            .map_err(|e| ScriptError::new(pos, e.to_string()))?;
        self.declare(name, Object::Module(m))
    }

    fn map_decl(&mut self, item: &Item, pos: Pos) -> Res<()> {
        let Item::Map {
            name,
            source,
            target,
            images,
        } = item
        else {
            unreachable!()
        };
        let s = self.module(source)?;
        let t = self.module(target)?;
        if s.ring() != t.ring() {
            return err(target.pos, "source and target are over different rings");
        }
        let imgs = self.elements(&t, images)?;
        if imgs.len() != s.ngens() {
            return err(
                images.pos,
                format!(
                    "arity mismatch: {} images for {} source generators",
                    imgs.len(),
                    s.ngens()
                ),
            );
        }
        let f = ModuleMap::new(&s, &t, imgs).map_err(|e| ScriptError::new(pos, e.to_string()))?;
        self.declare(name, Object::Map(f))
    }

    fn submodule_decl(
        &mut self,
        name: &Located<String>,
        ambient: &Located<String>,
        fields: &[Field],
        pos: Pos,
    ) -> Res<()> {
        let m = self.module(ambient)?;
        let mut f = Fields::new(fields, pos)?;
        let gens = match f.get("gens") {
            Some(v) => self.elements(&m, v)?,
            None => Vec::new(),
        };
        f.finish()?;
        let n = Submodule::new(&m, gens).map_err(|e| ScriptError::new(pos, e.to_string()))?;
        self.declare(name, Object::Submodule(n))
    }

    fn closure_decl(
        &mut self,
        name: &Located<String>,
        fields: &[Field],
        pos: Pos,
        flags: &Flags,
    ) -> Res<()> {
        let mut f = Fields::new(fields, pos)?;
        let kind_v = f.require("kind")?;
        let kind = scalar(kind_v, "a closure kind")?;
        let members = |f: &mut Fields, this: &Session| -> Res<Vec<ModuleRef>> {
            let v = f.require("members")?;
            names(v)?.iter().map(|n| this.module(n)).collect()
        };
        let cl = match kind {
            "identity" => ClosureOperation::Identity,
            "module" | "algebra" => {
                let s = self.module(&Located::new(
                    scalar(f.require("over")?, "a module name")?.to_string(),
                    pos,
                ))?;
                if kind == "module" {
                    ClosureOperation::Module(s)
                } else {
                    ClosureOperation::Algebra(s)
                }
            }
            "directed" => ClosureOperation::DirectedFamily(members(&mut f, self)?),
            "family" => {
                let members = members(&mut f, self)?;
                let stabilize = match f.get("stabilize") {
                    Some(v) => parse_bool(v)?,
                    None => true,
                };
                ClosureOperation::GeneratedFamily { members, stabilize }
            }
            "frobenius" => {
                let e = match f.get("e") {
                    Some(v) => parse_int(v, "a Frobenius level")?,
                    None => 1,
                };
                ClosureOperation::Frobenius { e }
            }
            "tight" => {
                let e_max = match f.get("e_max") {
                    Some(v) => parse_int(v, "a Frobenius bound")?,
                    None => flags.emax,
                };
                let candidates = match f.get("candidates") {
                    Some(v) => {
                        let rv = f.require("ring")?;
                        let r = self.ring(&Located::new(
                            scalar(rv, "a ring name")?.to_string(),
                            rv.pos,
                        ))?;
                        Some(polys(r.poly(), v)?)
                    }
                    None => {
                        f.get("ring");
                        None
                    }
                };
                ClosureOperation::TightBounded { candidates, e_max }
            }
            "pullback" => {
                let rv = f.require("ring")?;
                let r = self.ring(&Located::new(
                    scalar(rv, "a ring name")?.to_string(),
                    rv.pos,
                ))?;
                let kill = polys(r.poly(), f.require("kill")?)?;
                let map = RingMap::quotient(&r, &kill)
                    .map_err(|e| ScriptError::new(pos, e.to_string()))?;
                let inner = match f.get("inner") {
                    Some(v) => self.closure(&Located::new(
                        scalar(v, "a closure name")?.to_string(),
                        v.pos,
                    ))?,
                    None => ClosureOperation::Identity,
                };
                ClosureOperation::Pullback {
                    map,
                    inner: Box::new(inner),
                }
            }
            "intersection" | "sum" => {
                let v = f.require("members")?;
                let cls = names(v)?
                    .iter()
                    .map(|n| self.closure(n))
                    .collect::<Res<Vec<_>>>()?;
                if kind == "sum" {
                    ClosureOperation::Sum(cls)
                } else {
                    ClosureOperation::Intersection(cls)
                }
            }
            other => return err(kind_v.pos, format!("unknown closure kind '{other}'")),
        };
        f.finish()?;
        self.declare(name, Object::Closure(cl))
    }

    fn default_ring(&self, pos: Pos) -> Res<RingRef> {
        self.last_ring
            .clone()
            .ok_or_else(|| ScriptError::new(pos, "no ring declared"))
    }

    fn check(
        &mut self,
        command: &Located<String>,
        args: &[Located<Arg>],
        pos: Pos,
        flags: &Flags,
    ) -> Res<Action> {
        let cmd = command.node.as_str();
        let usage = match cmd {
            "gb" => "[RING] [polys] | SUBMODULE",
            "member" => "SUBMODULE [element]",
            "close" => "CLOSURE SUBMODULE [element]",
            "phantom" => "CLOSURE MODULE|MAP",
            "star" => "MODULE|MAP [e_max=INT] [candidates=[polys]]",
            "sym2" => "MODULE|MAP",
            "algebra-axiom" => "CLOSURE MODULE|MAP",
            "modify" => "MODULE|MAP [sequence]",
            "build" => "CLOSURE RING [[sequence], ...] [rounds=INT] [max_generators=INT]",
            "test-ideal" => "CLOSURE SUBMODULE...",
            "chain" => "CLOSURE MAP...",
            "axiom-check" => {
                "CLOSURE functoriality MAP SUBMODULE | semiresiduality SUBMODULE | faithfulness RING | \
                 zero-closed RING | gcc MAP [x_1..x_k+1] [v] | laws RING [count=INT]"
            }
            other => return err(command.pos, format!("unknown command '{other}'")),
        };
        let mut a = Args::new(args, pos, cmd, usage);
        let action = match cmd {
            "gb" => {
                if a.has_list() {
                    let r = self.default_ring(pos)?;
                    let v = a.list()?;
                    Action::Gb(self.ideal(&r, &v)?)
                } else {
                    let w = a.word()?;
                    match self.lookup(&w)? {
                        Object::Ring(r) => {
                            let r = r.clone();
                            let v = a.list()?;
                            Action::Gb(self.ideal(&r, &v)?)
                        }
                        Object::Submodule(n) => Action::Gb(n.clone()),
                        o => return Self::wrong_kind(&w, o, "a ring or submodule"),
                    }
                }
            }
            "member" => {
                let n = self.submodule(&a.word()?)?;
                let u = self.element(n.ambient(), &a.list()?)?;
                Action::Member(n, u)
            }
            "close" => {
                let cl = self.closure(&a.word()?)?;
                let n = self.submodule(&a.word()?)?;
                let u = if a.has_list() {
                    Some(self.element(n.ambient(), &a.list()?)?)
                } else {
                    None
                };
                Action::Close(cl, n, u)
            }
            "phantom" => {
                let cl = self.closure(&a.word()?)?;
                Action::Phantom(cl, self.instance_source(&a.word()?)?)
            }
            "star" => {
                let source = self.instance_source(&a.word()?)?;
                let e_max = match a.option("e_max") {
                    Some(v) => parse_int(&v, "a Frobenius bound")?,
                    None => flags.emax,
                };
                let candidates = match a.option("candidates") {
                    Some(v) => Some(polys(source_ring(&source).poly(), &v)?),
                    None => None,
                };
                Action::Star {
                    source,
                    e_max,
                    candidates,
                }
            }
            "sym2" => Action::Sym2(self.instance_source(&a.word()?)?),
            "algebra-axiom" => {
                let cl = self.closure(&a.word()?)?;
                Action::AlgebraAxiom(cl, self.instance_source(&a.word()?)?)
            }
            "modify" => {
                let source = self.instance_source(&a.word()?)?;
                let sop = polys(source_ring(&source).poly(), &a.list()?)?;
                Action::Modify(source, sop)
            }
            "build" => {
                let closure = self.closure(&a.word()?)?;
                let ring = self.ring(&a.word()?)?;
                let sv = a.list()?;
                let sops = list(&sv, "parameter sequences")?
                    .iter()
                    .map(|s| polys(ring.poly(), s))
                    .collect::<Res<Vec<_>>>()?;
                let rounds = match a.option("rounds") {
                    Some(v) => parse_int(&v, "a round count")?,
                    None => 1,
                };
                let max_generators = match a.option("max_generators") {
                    Some(v) => Some(parse_int(&v, "a generator cap")?),
                    None => None,
                };
                Action::Build {
                    closure,
                    ring,
                    sops,
                    rounds,
                    max_generators,
                }
            }
            "test-ideal" => {
                let cl = self.closure(&a.word()?)?;
                let mut pairs = vec![self.submodule(&a.word()?)?];
                while a.has_word() {
                    pairs.push(self.submodule(&a.word()?)?);
                }
                Action::TestIdeal(cl, pairs)
            }
            "chain" => {
                let cl = self.closure(&a.word()?)?;
                let mut maps = vec![self.map(&a.word()?)?];
                while a.has_word() {
                    maps.push(self.map(&a.word()?)?);
                }
                Action::Chain(cl, maps)
            }
            "axiom-check" => {
                let cl = self.closure(&a.word()?)?;
                let which = a.word()?;
                let check = match which.node.as_str() {
                    "functoriality" => {
                        let f = self.map(&a.word()?)?;
                        let n = self.submodule(&a.word()?)?;
                        AxiomCheck::Functoriality(f, n)
                    }
                    "semiresiduality" => AxiomCheck::Semiresiduality(self.submodule(&a.word()?)?),
                    "faithfulness" => AxiomCheck::Faithfulness(self.ring(&a.word()?)?),
                    "zero-closed" => AxiomCheck::ZeroClosed(self.ring(&a.word()?)?),
                    "gcc" => {
                        let map = self.map(&a.word()?)?;
                        let xs = polys(map.source().poly(), &a.list()?)?;
                        let v = self.element(map.source(), &a.list()?)?;
                        AxiomCheck::Gcc { map, xs, v }
                    }
                    "laws" => {
                        let ring = self.ring(&a.word()?)?;
                        let count = match a.option("count") {
                            Some(v) => parse_int(&v, "an instance count")?,
                            None => 20,
                        };
                        AxiomCheck::Laws { ring, count }
                    }
                    other => return err(which.pos, format!("unknown axiom '{other}'")),
                };
                Action::Axiom(cl, check)
            }
            _ => unreachable!(),
        };
        a.finish()?;
        Ok(action)
    }

    fn ideal(&self, ring: &RingRef, v: &Located<Value>) -> Res<Submodule> {
        let gens = polys(ring.poly(), v)?;
        Submodule::ideal(ring, gens).map_err(|e| ScriptError::new(v.pos, e.to_string()))
    }
}

pub fn source_ring(s: &InstanceSource) -> &RingRef {
    match s {
        InstanceSource::Module(m) => m.ring(),
        InstanceSource::Map(f) => f.source().ring(),
    }
}

/// Resolves every name and builds the declared objects. Tight closures
/// without an explicit bound use `flags.emax`.
pub fn compile(script: &Script, flags: &Flags) -> Result<Session, ScriptError> {
    let mut s = Session::default();
    for item in &script.items {
        let pos = item.pos;
        match &item.node {
            Item::Ring { name, fields } => s.ring_decl(name, fields, pos)?,
            Item::Module { name, ring, fields } => s.module_decl(name, ring, fields, pos)?,
            Item::Map { .. } => s.map_decl(&item.node, pos)?,
            Item::Submodule {
                name,
                ambient,
                fields,
            } => s.submodule_decl(name, ambient, fields, pos)?,
            Item::Closure { name, fields } => s.closure_decl(name, fields, pos, flags)?,
            Item::Check { command, args } => {
                let action = s.check(command, args, pos, flags)?;
                s.commands.push(Command {
                    index: s.commands.len() + 1,
                    echo: item.node.to_string(),
                    action,
                });
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn compile_str(src: &str) -> Result<Session, ScriptError> {
        compile(&parse(src).unwrap(), &Flags::default())
    }

    #[test]
    fn minimal_gb_script() {
        let s = compile_str("ring R { p = 7; vars = [x]; }\ncheck gb [x^2+x];").unwrap();
        assert_eq!(s.commands.len(), 1);
        assert!(matches!(s.commands[0].action, Action::Gb(_)));
        assert_eq!(s.commands[0].echo, "check gb [x^2+x];");
    }

    #[test]
    fn non_prime_modulus() {
        let e = compile_str("ring R { p = 6; vars = [x]; }").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 14 });
        assert!(e.message.contains("modulus not prime"), "{}", e.message);
    }

    #[test]
    fn undeclared_and_arity() {
        let e = compile_str("ring R { p = 7; vars = [x]; }\nmodule M over S { ngens = 1; }")
            .unwrap_err();
        assert_eq!(
            (e.pos, e.message.as_str()),
            (Pos { line: 2, col: 15 }, "undeclared name 'S'")
        );
        let e = compile_str(
            "ring R { p = 7; vars = [x, y]; }\nmodule M over R { ngens = 2; rels = [[x]]; }",
        )
        .unwrap_err();
        assert!(e.message.starts_with("arity mismatch"), "{}", e.message);
        let e = compile_str(
            "ring R { p = 7; vars = [x]; }\nclosure c { kind = identity; }\ncheck phantom c;",
        )
        .unwrap_err();
        assert!(e.message.starts_with("arity mismatch"), "{}", e.message);
        let e = compile_str(
            "ring R { p = 7; vars = [x]; }\nclosure c { kind = identity; }\ncheck phantom c R R;",
        )
        .unwrap_err();
        assert_eq!(e.pos, Pos { line: 3, col: 19 });
        let e = compile_str("ring R { p = 7; vars = [x]; }\nsubmodule N of R { gens = [x]; }\ncheck member N [x, x];")
            .unwrap_err();
        assert!(
            e.message.contains("module has 1 generators"),
            "{}",
            e.message
        );
    }

    #[test]
    fn field_errors() {
        let e = compile_str("ring R { p = 7; vars = [x]; colour = red; }").unwrap_err();
        assert_eq!(e.message, "unknown field 'colour'");
        let e =
            compile_str("ring R { p = 7; vars = [x]; }\nclosure c { kind = magic; }").unwrap_err();
        assert_eq!(e.message, "unknown closure kind 'magic'");
        let e = compile_str("ring R { p = 7; vars = [x]; }\nring R { p = 5; vars = [y]; }")
            .unwrap_err();
        assert_eq!(e.message, "'R' is already declared");
        let e = compile_str("ring R { p = 7; vars = [x]; }\ncheck gb [y];").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 11 });
    }

    #[test]
    fn closures_resolve() {
        let s = compile_str(
            "ring R { p = 7; vars = [x, y]; }\n\
             module S over R { ngens = 1; rels = [[x]]; }\n\
             closure a { kind = module; over = S; }\n\
             closure b { kind = tight; }\n\
             closure c { kind = pullback; ring = R; kill = [x]; inner = b; }\n\
             closure d { kind = intersection; members = [a, c]; }\n\
             closure f { kind = family; members = [S, R]; stabilize = false; }",
        )
        .unwrap();
        match s.get("b") {
            Some(Object::Closure(ClosureOperation::TightBounded { e_max, .. })) => {
                assert_eq!(*e_max, 4)
            }
            _ => panic!(),
        }
        assert!(
            matches!(s.get("d"), Some(Object::Closure(ClosureOperation::Intersection(l))) if l.len() == 2)
        );
        assert!(matches!(
            s.get("f"),
            Some(Object::Closure(ClosureOperation::GeneratedFamily {
                stabilize: false,
                ..
            }))
        ));
    }
}
