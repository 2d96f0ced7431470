//! Session scripts: lexing, parsing and pretty-printing.
//!
//! Declarations and commands keep their raw scalar text; polynomials are
//! parsed later against the ring they belong to. Positions are carried
//! next to each node and ignored by equality, so two scripts compare equal
//! when their declaration structure agrees.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ScriptError {
    pub pos: Pos,
    pub message: String,
}

impl ScriptError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ScriptError {
            pos,
            message: message.into(),
        }
    }
}

/// A node with its source position. Equality ignores the position.
#[derive(Clone, Debug)]
pub struct Located<T> {
    pub node: T,
    pub pos: Pos,
}

impl<T: PartialEq> PartialEq for Located<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl<T> Located<T> {
    pub fn new(node: T, pos: Pos) -> Self {
        Located { node, pos }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    /// Raw text with runs of whitespace collapsed to one space.
    Scalar(String),
    List(Vec<Located<Value>>),
}

impl Value {
    pub fn as_scalar(&self) -> Option<&str> {
        match self {
            Value::Scalar(s) => Some(s),
            Value::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Located<Value>]> {
        match self {
            Value::List(l) => Some(l),
            Value::Scalar(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub key: Located<String>,
    pub value: Located<Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Arg {
    Word(String),
    Option(String, Value),
    List(Value),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Ring {
        name: Located<String>,
        fields: Vec<Field>,
    },
    Module {
        name: Located<String>,
        ring: Located<String>,
        fields: Vec<Field>,
    },
    Map {
        name: Located<String>,
        source: Located<String>,
        target: Located<String>,
        images: Located<Value>,
    },
    Submodule {
        name: Located<String>,
        ambient: Located<String>,
        fields: Vec<Field>,
    },
    Closure {
        name: Located<String>,
        fields: Vec<Field>,
    },
    Check {
        command: Located<String>,
        args: Vec<Located<Arg>>,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Script {
    pub items: Vec<Located<Item>>,
}

impl Script {
    pub fn commands(&self) -> impl Iterator<Item = &Located<Item>> {
        self.items
            .iter()
            .filter(|i| matches!(i.node, Item::Check { .. }))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    at: usize,
    line: usize,
    col: usize,
}

fn is_name_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_name_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn is_word_char(c: u8) -> bool {
    !c.is_ascii_whitespace() && !b";[]=,{}#".contains(&c)
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            text,
            at: 0,
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ScriptError> {
        Err(ScriptError::new(self.pos(), msg))
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.at).copied()
    }

    fn starts_comment(&self) -> bool {
        match self.peek() {
            Some(b'#') => true,
            Some(b'/') => self.src.get(self.at + 1) == Some(&b'/'),
            _ => false,
        }
    }

    fn bump(&mut self) {
        let Some(c) = self.peek() else { return };
        // Advance by a whole UTF-8 character so columns count characters.
        let len = self.text[self.at..]
            .chars()
            .next()
            .map_or(1, char::len_utf8);
        self.at += len;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => self.bump(),
                _ if self.starts_comment() => {
                    while !matches!(self.peek(), None | Some(b'\n')) {
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ScriptError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!(
                "expected '{}', found {}",
                c as char,
                self.describe()
            ))
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn describe(&self) -> String {
        match self.text[self.at..].chars().next() {
            None => "end of input".into(),
            Some(c) => format!("'{c}'"),
        }
    }

    fn name(&mut self, what: &str) -> Result<Located<String>, ScriptError> {
        self.skip_ws();
        let pos = self.pos();
        match self.peek() {
            Some(c) if is_name_start(c) => {}
            _ => return self.err(format!("expected {what}, found {}", self.describe())),
        }
        let start = self.at;
        while self.peek().is_some_and(is_name_char) {
            self.bump();
        }
        Ok(Located::new(self.text[start..self.at].to_string(), pos))
    }

    fn word(&mut self) -> Result<Located<String>, ScriptError> {
        self.skip_ws();
        let pos = self.pos();
        let start = self.at;
        while self.peek().is_some_and(is_word_char) && !self.starts_comment() {
            self.bump();
        }
        if start == self.at {
            return self.err(format!("expected a word, found {}", self.describe()));
        }
        Ok(Located::new(self.text[start..self.at].to_string(), pos))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ScriptError> {
        let w = self.name(&format!("'{kw}'"))?;
        if w.node != kw {
            return Err(ScriptError::new(
                w.pos,
                format!("expected '{kw}', found '{}'", w.node),
            ));
        }
        Ok(())
    }

    /// Scalar text up to one of `stops` (or a comment), trimmed.
    fn scalar(&mut self, stops: &[u8]) -> Result<Located<Value>, ScriptError> {
        self.skip_ws();
        let pos = self.pos();
        let start = self.at;
        while let Some(c) = self.peek() {
            if stops.contains(&c) || self.starts_comment() {
                break;
            }
            if b"[]{}".contains(&c) {
                return self.err(format!("unexpected '{}' in value", c as char));
            }
            self.bump();
        }
        let s = collapse(&self.text[start..self.at]);
        if s.is_empty() {
            return self.err(format!("expected a value, found {}", self.describe()));
        }
        Ok(Located::new(Value::Scalar(s), pos))
    }

    fn list(&mut self) -> Result<Located<Value>, ScriptError> {
        self.skip_ws();
        let pos = self.pos();
        self.expect(b'[')?;
        let mut items = Vec::new();
        if self.eat(b']') {
            return Ok(Located::new(Value::List(items), pos));
        }
        loop {
            items.push(self.value(b",];")?);
            if self.eat(b',') {
                continue;
            }
            self.expect(b']')?;
            return Ok(Located::new(Value::List(items), pos));
        }
    }

    fn value(&mut self, stops: &[u8]) -> Result<Located<Value>, ScriptError> {
        self.skip_ws();
        if self.peek() == Some(b'[') {
            self.list()
        } else {
            self.scalar(stops)
        }
    }

    fn fields(&mut self) -> Result<Vec<Field>, ScriptError> {
        self.expect(b'{')?;
        let mut out = Vec::new();
        loop {
            if self.eat(b'}') {
                return Ok(out);
            }
            let key = self.name("a field name or '}'")?;
            self.expect(b'=')?;
            let value = self.value(b";}")?;
            out.push(Field { key, value });
            if !self.eat(b';') {
                self.expect(b'}')?;
                return Ok(out);
            }
        }
    }

    fn end_decl(&mut self) {
        self.eat(b';');
    }

    fn arg(&mut self) -> Result<Located<Arg>, ScriptError> {
        self.skip_ws();
        let pos = self.pos();
        if self.peek() == Some(b'[') {
            let v = self.list()?;
            return Ok(Located::new(Arg::List(v.node), pos));
        }
        let w = self.word()?;
        if self.peek() == Some(b'=') {
            self.bump();
            let v = if self.peek() == Some(b'[') {
                self.list()?.node
            } else {
                let v = self.word()?;
                Value::Scalar(v.node)
            };
            return Ok(Located::new(Arg::Option(w.node, v), pos));
        }
        Ok(Located::new(Arg::Word(w.node), pos))
    }

    fn item(&mut self) -> Result<Located<Item>, ScriptError> {
        let kw = self.name("a declaration or 'check'")?;
        let pos = kw.pos;
        let item = match kw.node.as_str() {
            "ring" => {
                let name = self.name("a ring name")?;
                let fields = self.fields()?;
                self.end_decl();
                Item::Ring { name, fields }
            }
            "module" => {
                let name = self.name("a module name")?;
                self.keyword("over")?;
                let ring = self.name("a ring name")?;
                let fields = self.fields()?;
                self.end_decl();
                Item::Module { name, ring, fields }
            }
            "map" => {
                let name = self.name("a map name")?;
                self.expect(b':')?;
                let source = self.name("a source name")?;
                self.expect(b'-')?;
                if self.peek() != Some(b'>') {
                    return self.err("expected '->'");
                }
                self.bump();
                let target = self.name("a target name")?;
                self.expect(b'{')?;
                let images = self.list()?;
                self.eat(b';');
                self.expect(b'}')?;
                self.end_decl();
                Item::Map {
                    name,
                    source,
                    target,
                    images,
                }
            }
            "submodule" => {
                let name = self.name("a submodule name")?;
                self.keyword("of")?;
                let ambient = self.name("a module or ring name")?;
                let fields = self.fields()?;
                self.end_decl();
                Item::Submodule {
                    name,
                    ambient,
                    fields,
                }
            }
            "closure" => {
                let name = self.name("a closure name")?;
                let fields = self.fields()?;
                self.end_decl();
                Item::Closure { name, fields }
            }
            "check" => {
                let command = self.word()?;
                let mut args = Vec::new();
                while !self.eat(b';') {
                    if self.peek().is_none() {
                        return self.err("expected ';' after command");
                    }
                    args.push(self.arg()?);
                }
                Item::Check { command, args }
            }
            other => {
                return Err(ScriptError::new(
                    pos,
                    format!("unknown declaration '{other}'"),
                ))
            }
        };
        Ok(Located::new(item, pos))
    }

    fn script(&mut self) -> Result<Script, ScriptError> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(Script { items });
            }
            items.push(self.item()?);
        }
    }
}

/// Parses a whole script; every byte is consumed or reported.
pub fn parse(text: &str) -> Result<Script, ScriptError> {
    Parser::new(text).script()
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => f.write_str(s),
            Value::List(l) => {
                f.write_str("[")?;
                for (i, v) in l.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", v.node)?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Word(w) => f.write_str(w),
            Arg::Option(k, v) => write!(f, "{k}={v}"),
            Arg::List(v) => write!(f, "{v}"),
        }
    }
}

fn write_fields(f: &mut fmt::Formatter<'_>, fields: &[Field]) -> fmt::Result {
    f.write_str(" {\n")?;
    for fd in fields {
        writeln!(f, "  {} = {};", fd.key.node, fd.value.node)?;
    }
    f.write_str("}")
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Ring { name, fields } => {
                write!(f, "ring {}", name.node)?;
                write_fields(f, fields)
            }
            Item::Module { name, ring, fields } => {
                write!(f, "module {} over {}", name.node, ring.node)?;
                write_fields(f, fields)
            }
            Item::Map {
                name,
                source,
                target,
                images,
            } => write!(
                f,
                "map {} : {} -> {} {{\n  {}\n}}",
                name.node, source.node, target.node, images.node
            ),
            Item::Submodule {
                name,
                ambient,
                fields,
            } => {
                write!(f, "submodule {} of {}", name.node, ambient.node)?;
                write_fields(f, fields)
            }
            Item::Closure { name, fields } => {
                write!(f, "closure {}", name.node)?;
                write_fields(f, fields)
            }
            Item::Check { command, args } => {
                write!(f, "check {}", command.node)?;
                for a in args {
                    write!(f, " {}", a.node)?;
                }
                f.write_str(";")
            }
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{}", item.node)?;
        }
        Ok(())
    }
}
