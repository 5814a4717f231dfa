//! Lexical scanner for Java and C sources.
//!
//! Recognizes type declarations (class, interface, enum, struct, union),
//! method and function signatures with their parameters, field declarations,
//! invocations and comments. No AST is built: statements are classified
//! from their token shape and the enclosing brace scope.

use serde::{Deserialize, Serialize};

use super::text::{split_identifier, word_tokens};

/// Identifier lists are stored already split and lowercased.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParts {
    pub class_names: Vec<Vec<String>>,
    pub method_names: Vec<Vec<String>>,
    pub comments: Vec<Vec<String>>,
    pub invoked_method_names: Vec<Vec<String>>,
    pub field_type_names: Vec<Vec<String>>,
    pub field_names: Vec<Vec<String>>,
    pub parameter_type_names: Vec<Vec<String>>,
    pub parameter_names: Vec<Vec<String>>,
}

impl CodeParts {
    /// Identifier token lists that make up the code document. Invoked method
    /// names are used for biterms only.
    pub fn document_identifiers(&self) -> impl Iterator<Item = &Vec<String>> {
        self.class_names
            .iter()
            .chain(&self.method_names)
            .chain(&self.field_type_names)
            .chain(&self.field_names)
            .chain(&self.parameter_type_names)
            .chain(&self.parameter_names)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Punct(char),
}

const TYPE_KEYWORDS: &[&str] = &["class", "interface", "enum", "struct", "union", "record"];

const MODIFIERS: &[&str] = &[
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "const",
    "extern",
    "register",
    "inline",
    "unsigned",
    "signed",
    "struct",
    "union",
    "enum",
    "default",
    "typedef",
    "auto",
];

const NOT_CALLABLE: &[&str] = &[
    "if",
    "for",
    "while",
    "switch",
    "catch",
    "return",
    "sizeof",
    "synchronized",
    "super",
    "this",
    "do",
    "else",
    "try",
    "finally",
    "throw",
    "assert",
    "case",
    "typeof",
    "defined",
];

const SKIP_STATEMENTS: &[&str] = &["import", "package", "return", "throw", "goto", "using"];

fn lex(src: &str) -> (Vec<Tok>, Vec<String>) {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut comments = Vec::new();
    let mut i = 0;
    let mut line_start = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line_start = true;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' && line_start {
            // preprocessor directive, honoring line continuations
            while i < chars.len() && chars[i] != '\n' {
                if chars[i] == '\\' && chars.get(i + 1) == Some(&'\n') {
                    i += 1;
                }
                i += 1;
            }
            continue;
        }
        line_start = false;
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            let start = i + 2;
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            comments.push(chars[start..i].iter().collect());
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let start = i + 2;
            i += 2;
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                i += 1;
            }
            comments.push(chars[start..i.min(chars.len())].iter().collect());
            i += 2;
            continue;
        }
        if c == '"' || c == '\'' {
            i += 1;
            while i < chars.len() && chars[i] != c {
                if chars[i] == '\\' {
                    i += 1;
                }
                i += 1;
            }
            i += 1;
            continue;
        }
        if c.is_alphabetic() || c == '_' || c == '$' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                i += 1;
            }
            toks.push(Tok::Ident(chars[start..i].iter().collect()));
            continue;
        }
        if c.is_ascii_digit() {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '.' || chars[i] == '_') {
                i += 1;
            }
            continue;
        }
        toks.push(Tok::Punct(c));
        i += 1;
    }
    (toks, comments)
}

/// Drops `@Name` and `@Name(...)` annotations.
fn strip_annotations(toks: Vec<Tok>) -> Vec<Tok> {
    let mut out = Vec::with_capacity(toks.len());
    let mut i = 0;
    while i < toks.len() {
        if toks[i] == Tok::Punct('@') && matches!(toks.get(i + 1), Some(Tok::Ident(n)) if n != "interface") {
            i += 2;
            while toks.get(i) == Some(&Tok::Punct('.')) && matches!(toks.get(i + 1), Some(Tok::Ident(_))) {
                i += 2;
            }
            if toks.get(i) == Some(&Tok::Punct('(')) {
                let mut depth = 0;
                while i < toks.len() {
                    match toks[i] {
                        Tok::Punct('(') => depth += 1,
                        Tok::Punct(')') => depth -= 1,
                        _ => {}
                    }
                    i += 1;
                    if depth == 0 {
                        break;
                    }
                }
            }
            continue;
        }
        out.push(toks[i].clone());
        i += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Scope {
    Type(String),
    Method,
    Block,
}

struct Scanner {
    parts: CodeParts,
    scopes: Vec<Scope>,
}

fn ident(t: &Tok) -> Option<&str> {
    match t {
        Tok::Ident(s) => Some(s),
        Tok::Punct(_) => None,
    }
}

fn is_type_like(t: &Tok) -> bool {
    match t {
        Tok::Ident(s) => !NOT_CALLABLE.contains(&s.as_str()) && s != "new" && s != "else",
        Tok::Punct(c) => matches!(c, '>' | ']' | '*' | '&'),
    }
}

fn split_nonempty(name: &str) -> Option<Vec<String>> {
    let toks = split_identifier(name);
    (!toks.is_empty()).then_some(toks)
}

/// Index of the token closing the paren opened at `open`.
fn matching_paren(stmt: &[Tok], open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (j, t) in stmt.iter().enumerate().skip(open) {
        match t {
            Tok::Punct('(') => depth += 1,
            Tok::Punct(')') => {
                depth -= 1;
                if depth == 0 {
                    return Some(j);
                }
            }
            _ => {}
        }
    }
    None
}

impl Scanner {
    fn at_declaration_level(&self) -> bool {
        !self
            .scopes
            .iter()
            .any(|s| matches!(s, Scope::Method | Scope::Block))
    }

    fn enclosing_type(&self) -> Option<&str> {
        self.scopes.iter().rev().find_map(|s| match s {
            Scope::Type(n) => Some(n.as_str()),
            _ => None,
        })
    }

    fn push_ident(list: &mut Vec<Vec<String>>, name: &str) {
        if let Some(t) = split_nonempty(name) {
            list.push(t);
        }
    }

    /// Records every `name(` call site except the token at `skip`.
    fn record_invocations(&mut self, stmt: &[Tok], skip: Option<usize>) {
        for j in 0..stmt.len().saturating_sub(1) {
            if Some(j) == skip || stmt[j + 1] != Tok::Punct('(') {
                continue;
            }
            if let Some(name) = ident(&stmt[j]) {
                if NOT_CALLABLE.contains(&name) || TYPE_KEYWORDS.contains(&name) {
                    continue;
                }
                Self::push_ident(&mut self.parts.invoked_method_names, name);
            }
        }
    }

    /// Finds `name (` at paren depth zero, before any `=`, preceded by a
    /// type-like token. Returns the index of `name`.
    fn method_signature(&self, stmt: &[Tok]) -> Option<usize> {
        let mut depth = 0i32;
        for j in 0..stmt.len() {
            match &stmt[j] {
                Tok::Punct('(') => {
                    if depth == 0 && j > 0 {
                        let name = ident(&stmt[j - 1])?;
                        if NOT_CALLABLE.contains(&name) || name == "new" {
                            return None;
                        }
                        let is_ctor = self.enclosing_type() == Some(name);
                        let typed = j >= 2 && is_type_like(&stmt[j - 2]) && stmt[j - 2] != Tok::Punct('.');
                        return (typed || is_ctor).then_some(j - 1);
                    }
                    depth += 1;
                }
                Tok::Punct(')') => depth -= 1,
                Tok::Punct('=') if depth == 0 => return None,
                Tok::Punct('.') if depth == 0 => return None,
                _ => {}
            }
        }
        None
    }

    fn record_method(&mut self, stmt: &[Tok], name_idx: usize) {
        let name = ident(&stmt[name_idx]).unwrap_or_default().to_owned();
        if self.enclosing_type() != Some(name.as_str()) {
            Self::push_ident(&mut self.parts.method_names, &name);
        }
        let open = name_idx + 1;
        let Some(close) = matching_paren(stmt, open) else {
            return;
        };
        for param in split_top_level(&stmt[open + 1..close]) {
            let names: Vec<&str> = param
                .iter()
                .filter_map(ident)
                .filter(|n| !MODIFIERS.contains(n))
                .collect();
            match names.as_slice() {
                [] => {}
                [only] => {
                    if *only != "void" {
                        Self::push_ident(&mut self.parts.parameter_type_names, only);
                    }
                }
                [types @ .., last] => {
                    for t in types {
                        Self::push_ident(&mut self.parts.parameter_type_names, t);
                    }
                    Self::push_ident(&mut self.parts.parameter_names, last);
                }
            }
        }
        self.record_invocations(&stmt[close..], None);
    }

    /// `Type name [= init]` at declaration level.
    fn record_field(&mut self, stmt: &[Tok]) -> bool {
        let lhs_end = stmt
            .iter()
            .position(|t| *t == Tok::Punct('='))
            .unwrap_or(stmt.len());
        let lhs = &stmt[..lhs_end];
        if lhs.contains(&Tok::Punct('(')) {
            return false;
        }
        // `int a, b` declares two fields of one type
        let mut decls = split_top_level(lhs).into_iter();
        let Some(first) = decls.next() else {
            return false;
        };
        let names: Vec<&str> = first
            .iter()
            .filter_map(ident)
            .filter(|n| !MODIFIERS.contains(n))
            .collect();
        let [types @ .., name] = names.as_slice() else {
            return false;
        };
        if types.is_empty() {
            return false;
        }
        for t in types {
            Self::push_ident(&mut self.parts.field_type_names, t);
        }
        Self::push_ident(&mut self.parts.field_names, name);
        for extra in decls {
            if let Some(n) = extra.iter().rev().find_map(ident) {
                Self::push_ident(&mut self.parts.field_names, n);
            }
        }
        self.record_invocations(&stmt[lhs_end..], None);
        true
    }

    fn type_declaration(stmt: &[Tok]) -> Option<String> {
        let pos = stmt
            .iter()
            .position(|t| ident(t).is_some_and(|n| TYPE_KEYWORDS.contains(&n)))?;
        // `enum` inside a parameter list or a `struct x y;` use is not a declaration
        if stmt[..pos]
            .iter()
            .any(|t| *t == Tok::Punct('(') || *t == Tok::Punct('='))
        {
            return None;
        }
        Some(stmt.get(pos + 1).and_then(ident).unwrap_or("").to_owned())
    }

    fn on_open_brace(&mut self, stmt: &[Tok]) {
        if let Some(name) = Self::type_declaration(stmt) {
            if !name.is_empty() {
                Self::push_ident(&mut self.parts.class_names, &name);
            }
            self.scopes.push(Scope::Type(name));
            return;
        }
        if self.at_declaration_level() {
            if let Some(idx) = self.method_signature(stmt) {
                self.record_method(stmt, idx);
                self.scopes.push(Scope::Method);
                return;
            }
            if stmt.contains(&Tok::Punct('=')) {
                self.record_field(stmt);
                self.scopes.push(Scope::Block);
                return;
            }
        }
        self.record_invocations(stmt, None);
        self.scopes.push(Scope::Block);
    }

    fn on_statement_end(&mut self, stmt: &[Tok]) {
        if stmt.is_empty() {
            return;
        }
        if ident(&stmt[0]).is_some_and(|n| SKIP_STATEMENTS.contains(&n)) {
            if stmt[0] == Tok::Ident("return".into()) || stmt[0] == Tok::Ident("throw".into()) {
                self.record_invocations(stmt, None);
            }
            return;
        }
        if self.at_declaration_level() {
            if let Some(idx) = self.method_signature(stmt) {
                self.record_method(stmt, idx);
                return;
            }
            if self.record_field(stmt) {
                return;
            }
        }
        self.record_invocations(stmt, None);
    }
}

/// Splits on commas that are not nested in `()`, `<>` or `[]`.
fn split_top_level(toks: &[Tok]) -> Vec<&[Tok]> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (j, t) in toks.iter().enumerate() {
        match t {
            Tok::Punct('(' | '<' | '[') => depth += 1,
            Tok::Punct(')' | '>' | ']') => depth -= 1,
            Tok::Punct(',') if depth == 0 => {
                out.push(&toks[start..j]);
                start = j + 1;
            }
            _ => {}
        }
    }
    if start < toks.len() {
        out.push(&toks[start..]);
    }
    out
}

/// Scans a Java or C source file into its code parts.
pub fn scan_code(src: &str) -> CodeParts {
    let (toks, comments) = lex(src);
    let toks = strip_annotations(toks);
    let mut sc = Scanner {
        parts: CodeParts::default(),
        scopes: Vec::new(),
    };
    sc.parts.comments = comments
        .iter()
        .map(|c| word_tokens(c))
        .filter(|t| !t.is_empty())
        .collect();

    let mut stmt: Vec<Tok> = Vec::new();
    let mut paren_depth = 0i32;
    for t in toks {
        match t {
            Tok::Punct('(') => {
                paren_depth += 1;
                stmt.push(t);
            }
            Tok::Punct(')') => {
                paren_depth -= 1;
                stmt.push(t);
            }
            // `for (a; b; c)` keeps its semicolons inside the statement
            Tok::Punct(';') if paren_depth > 0 => stmt.push(t),
            Tok::Punct(';') => {
                sc.on_statement_end(&stmt);
                stmt.clear();
            }
            Tok::Punct('{') => {
                sc.on_open_brace(&stmt);
                stmt.clear();
                paren_depth = 0;
            }
            Tok::Punct('}') => {
                sc.on_statement_end(&stmt);
                stmt.clear();
                sc.scopes.pop();
                paren_depth = 0;
            }
            Tok::Punct(':') if paren_depth == 0 && is_label(&stmt) => stmt.clear(),
            other => stmt.push(other),
        }
    }
    sc.on_statement_end(&stmt);
    sc.parts
}

/// `case X:`, `default:`, `public:` and similar prefixes.
fn is_label(stmt: &[Tok]) -> bool {
    matches!(
        stmt.first().and_then(ident),
        Some("case" | "default" | "public" | "private" | "protected")
    )
}
