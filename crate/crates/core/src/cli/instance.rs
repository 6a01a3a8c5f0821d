//! Instance files: a `[ring]` block followed by named ideals, modules,
//! Artinian modules and sequences.
//!
//! ```text
//! [ring]
//! field = QQ          # QQ, GF(p) or ZZ
//! vars = x, y
//! relations = x*y     # optional
//! local = true
//!
//! [ideal a]
//! gens = x, y
//!
//! [module M]
//! gens = 2
//! relation = x, 0
//! relation = 0, y
//!
//! [module Q]
//! quotient_of = a     # R / a
//!
//! [artinian N]
//! dual_of = M
//!
//! [sequence s]
//! elems = x, y
//! ```
//!
//! Over `ZZ` an ideal has a single generator, a module is `free = r` plus
//! `torsion = d_1, d_2` (or `gens` and integer `relation` rows), and an
//! Artinian group is `finite = n_1, n_2` plus `prufer = p, q` with one entry
//! per Prüfer summand.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::duality::DualModule;
use crate::error::{Error, Result};
use crate::homalg::FGModule;
use crate::integer::snf::IntMatrix;
use crate::integer::{AbelianGroup, ArtinianGroup};
use crate::ring::field::factorize;
use crate::ring::parse::parse_poly_at;
use crate::ring::{CoefficientField, Ideal, Poly, PolyRing, RingRef, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Poly(RingRef),
    Integers,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Ideal(Vec<Poly>),
    IntIdeal(BigInt),
    Module { ngens: usize, relations: Vec<Vec<Poly>> },
    IntModule(AbelianGroup),
    DualOf(String),
    IntArtinian(ArtinianGroup),
    Sequence(Vec<Poly>),
    IntSequence(Vec<BigInt>),
}

impl Item {
    fn kind(&self) -> &'static str {
        match self {
            Item::Ideal(_) | Item::IntIdeal(_) => "ideal",
            Item::Module { .. } | Item::IntModule(_) => "module",
            Item::DualOf(_) | Item::IntArtinian(_) => "artinian",
            Item::Sequence(_) | Item::IntSequence(_) => "sequence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub ring: RingSpec,
    pub items: Vec<(String, Item)>,
}

/// A value with its 1-based position in the file.
struct Spanned<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Spanned<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column, message)
    }

    /// Splits at commas outside parentheses, trimming each piece.
    fn list(&self) -> Vec<Spanned<'a>> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0usize;
        let mut start_col = self.column;
        let mut col = self.column;
        let bytes: Vec<(usize, char)> = self.text.char_indices().collect();
        for &(i, c) in &bytes {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                ',' if depth == 0 => {
                    out.push(trimmed(&self.text[start..i], self.line, start_col));
                    start = i + 1;
                    start_col = col + 1;
                }
                _ => {}
            }
            col += 1;
        }
        out.push(trimmed(&self.text[start..], self.line, start_col));
        out.retain(|s| !s.text.is_empty());
        out
    }
}

fn trimmed(s: &str, line: usize, column: usize) -> Spanned<'_> {
    let lead = s.chars().take_while(|c| c.is_whitespace()).count();
    let t = s.trim();
    Spanned { text: t, line, column: column + lead }
}

struct Block<'a> {
    kind: String,
    name: Option<String>,
    header: Spanned<'a>,
    entries: Vec<(Spanned<'a>, Spanned<'a>)>,
}

impl<'a> Block<'a> {
    fn get(&self, key: &str) -> Option<&Spanned<'a>> {
        self.entries.iter().rev().find(|(k, _)| k.text == key).map(|(_, v)| v)
    }

    fn all(&self, key: &str) -> Vec<&Spanned<'a>> {
        self.entries.iter().filter(|(k, _)| k.text == key).map(|(_, v)| v).collect()
    }

    fn check_keys(&self, allowed: &[&str], errors: &mut Vec<Error>) {
        for (k, _) in &self.entries {
            if !allowed.contains(&k.text) {
                errors.push(k.error(format!("unknown key '{}' in [{}] block", k.text, self.kind)));
            }
        }
    }
}

fn split_blocks<'a>(src: &'a str, errors: &mut Vec<Error>) -> Vec<Block<'a>> {
    let mut blocks: Vec<Block> = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let lead = content.chars().take_while(|c| c.is_whitespace()).count();
        let text = content.trim();
        if text.is_empty() {
            continue;
        }
        let column = lead + 1;
        if let Some(rest) = text.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                errors.push(Error::parse(line, column, "block header needs a closing ']'"));
                continue;
            };
            let mut words = inner.split_whitespace();
            let kind = words.next().unwrap_or("").to_string();
            let name = words.next().map(str::to_string);
            if words.next().is_some() {
                errors.push(Error::parse(line, column, "block header takes a kind and one name"));
            }
            blocks.push(Block { kind, name, header: Spanned { text, line, column }, entries: Vec::new() });
            continue;
        }
        let Some(eq) = text.find('=') else {
            errors.push(Error::parse(line, column, "expected 'key = value'"));
            continue;
        };
        let Some(block) = blocks.last_mut() else {
            errors.push(Error::parse(line, column, "entry before any block header"));
            continue;
        };
        let key = trimmed(&text[..eq], line, column);
        let value_col = column + text[..=eq].chars().count();
        let value = trimmed(&text[eq + 1..], line, value_col);
        block.entries.push((key, value));
    }
    blocks
}

fn parse_usize(s: &Spanned) -> Result<usize> {
    s.text.parse().map_err(|_| s.error(format!("expected a non-negative integer, got '{}'", s.text)))
}

fn parse_int(s: &Spanned) -> Result<BigInt> {
    s.text.parse().map_err(|_| s.error(format!("expected an integer, got '{}'", s.text)))
}

fn parse_poly(ring: &RingRef, s: &Spanned) -> Result<Poly> {
    parse_poly_at(s.text, ring.vars(), ring.field())
        .map(|p| ring.reduce(&p))
        .map_err(|(col, msg)| Error::parse(s.line, s.column + col, msg))
}

fn parse_ring(block: &Block, errors: &mut Vec<Error>) -> Option<RingSpec> {
    block.check_keys(&["field", "vars", "relations", "local"], errors);
    let field = block.get("field").map(|f| f.text).unwrap_or("QQ");
    let field = match field {
        "QQ" => CoefficientField::Rationals,
        "ZZ" => {
            if let Some(v) = block.get("vars") {
                errors.push(v.error("a ZZ ring takes no variables"));
            }
            return Some(RingSpec::Integers);
        }
        f => {
            let p = f.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')).and_then(|p| p.trim().parse::<u32>().ok());
            let at = block.get("field").unwrap();
            match p.map(CoefficientField::prime) {
                Some(Ok(k)) => k,
                Some(Err(e)) => {
                    errors.push(at.error(e.to_string()));
                    return None;
                }
                None => {
                    errors.push(at.error(format!("unknown field '{f}'; use QQ, GF(p) or ZZ")));
                    return None;
                }
            }
        }
    };
    let Some(vars) = block.get("vars") else {
        errors.push(block.header.error("a polynomial ring needs 'vars'"));
        return None;
    };
    let names: Vec<String> = vars.list().iter().map(|v| v.text.to_string()).collect();
    for v in vars.list() {
        if !v.text.chars().all(|c| c.is_alphanumeric() || c == '_') || v.text.starts_with(|c: char| c.is_ascii_digit()) {
            errors.push(v.error(format!("'{}' is not a variable name", v.text)));
        }
    }
    let local = match block.get("local").map(|l| l.text) {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => {
            errors.push(block.get("local").unwrap().error(format!("expected true or false, got '{other}'")));
            false
        }
    };
    let mut rels = Vec::new();
    if let Some(r) = block.get("relations") {
        for s in r.list() {
            match parse_poly_at(s.text, &names, &field) {
                Ok(p) => rels.push(p),
                Err((col, msg)) => errors.push(Error::parse(s.line, s.column + col, msg)),
            }
        }
    }
    match PolyRing::with_relations(field, names, rels, local) {
        Ok(r) => Some(RingSpec::Poly(r)),
        Err(e) => {
            errors.push(block.header.error(e.to_string()));
            None
        }
    }
}

fn parse_item(ring: &RingSpec, block: &Block, known: &HashMap<String, &'static str>, items: &[(String, Item)]) -> Result<Item> {
    let need = |key: &str| block.get(key).ok_or_else(|| block.header.error(format!("[{}] needs '{key}'", block.kind)));
    match (block.kind.as_str(), ring) {
        ("ideal", RingSpec::Poly(r)) => {
            let gens = need("gens")?;
            Ok(Item::Ideal(gens.list().iter().map(|s| parse_poly(r, s)).collect::<Result<_>>()?))
        }
        ("ideal", RingSpec::Integers) => {
            let gens = need("gens")?.list();
            let mut g = BigInt::zero();
            for s in &gens {
                g = num_integer::Integer::gcd(&g, &parse_int(s)?);
            }
            Ok(Item::IntIdeal(g))
        }
        ("module", RingSpec::Poly(r)) => {
            if let Some(q) = block.get("quotient_of") {
                let gens = match items.iter().find(|(n, _)| n == q.text) {
                    Some((_, Item::Ideal(g))) => g.clone(),
                    _ => return Err(Error::UnresolvedReference(format!("{}:{}: no ideal named '{}'", q.line, q.column, q.text))),
                };
                return Ok(Item::Module { ngens: 1, relations: gens.into_iter().map(|g| vec![g]).collect() });
            }
            if let Some(f) = block.get("free") {
                return Ok(Item::Module { ngens: parse_usize(f)?, relations: Vec::new() });
            }
            let ngens = parse_usize(need("gens")?)?;
            let mut relations = Vec::new();
            for row in block.all("relation") {
                let entries = row.list();
                if entries.len() != ngens {
                    return Err(row.error(format!("relation has {} entries for {ngens} generators", entries.len())));
                }
                relations.push(entries.iter().map(|s| parse_poly(r, s)).collect::<Result<_>>()?);
            }
            Ok(Item::Module { ngens, relations })
        }
        ("module", RingSpec::Integers) => {
            if let Some(g) = block.get("gens") {
                let ngens = parse_usize(g)?;
                let mut rows: IntMatrix = Vec::new();
                for row in block.all("relation") {
                    let entries = row.list();
                    if entries.len() != ngens {
                        return Err(row.error(format!("relation has {} entries for {ngens} generators", entries.len())));
                    }
                    rows.push(entries.iter().map(parse_int).collect::<Result<_>>()?);
                }
                return Ok(Item::IntModule(AbelianGroup::from_relations(ngens, &rows)));
            }
            let free = block.get("free").map(parse_usize).transpose()?.unwrap_or(0);
            let mut orders = Vec::new();
            if let Some(t) = block.get("torsion") {
                for s in t.list() {
                    let d = parse_int(&s)?;
                    if d.is_zero() {
                        return Err(s.error("torsion orders must be nonzero"));
                    }
                    orders.push(d);
                }
            }
            Ok(Item::IntModule(AbelianGroup::from_cyclic_orders(free, &orders)))
        }
        ("artinian", RingSpec::Poly(r)) => {
            let d = need("dual_of")?;
            match known.get(d.text) {
                Some(&"module") => {}
                _ => return Err(Error::UnresolvedReference(format!("{}:{}: no module named '{}'", d.line, d.column, d.text))),
            }
            if !r.is_local() {
                return Err(block.header.error("dual modules need 'local = true' in the ring block"));
            }
            Ok(Item::DualOf(d.text.to_string()))
        }
        ("artinian", RingSpec::Integers) => {
            let mut finite = Vec::new();
            if let Some(f) = block.get("finite") {
                for s in f.list() {
                    let n = parse_int(&s)?;
                    let n: u64 = (&n).try_into().ok().filter(|&n: &u64| n >= 1).ok_or_else(|| s.error("finite orders must be positive and fit in 64 bits"))?;
                    finite.extend(factorize(n));
                }
            }
            let mut prufer: Vec<(u64, u32)> = Vec::new();
            if let Some(p) = block.get("prufer") {
                for s in p.list() {
                    let q: u64 = s.text.parse().map_err(|_| s.error(format!("expected a prime, got '{}'", s.text)))?;
                    prufer.push((q, 1));
                }
            }
            ArtinianGroup::new(finite, prufer).map(Item::IntArtinian).map_err(|e| block.header.error(e.to_string()))
        }
        ("sequence", RingSpec::Poly(r)) => {
            let elems = block.get("elems").map(|e| e.list()).unwrap_or_default();
            Ok(Item::Sequence(elems.iter().map(|s| parse_poly(r, s)).collect::<Result<_>>()?))
        }
        ("sequence", RingSpec::Integers) => {
            let elems = block.get("elems").map(|e| e.list()).unwrap_or_default();
            Ok(Item::IntSequence(elems.iter().map(parse_int).collect::<Result<_>>()?))
        }
        (k, _) => Err(block.header.error(format!("unknown block kind '{k}'"))),
    }
}

fn allowed_keys(kind: &str, ring: &RingSpec) -> &'static [&'static str] {
    match (kind, ring) {
        ("ideal", _) => &["gens"],
        ("module", RingSpec::Poly(_)) => &["gens", "relation", "free", "quotient_of"],
        ("module", RingSpec::Integers) => &["gens", "relation", "free", "torsion"],
        ("artinian", RingSpec::Poly(_)) => &["dual_of"],
        ("artinian", RingSpec::Integers) => &["finite", "prufer"],
        ("sequence", _) => &["elems"],
        _ => &[],
    }
}

impl Instance {
    /// Parses an instance, collecting every positioned error.
    pub fn parse(src: &str) -> std::result::Result<Instance, Vec<Error>> {
        let mut errors = Vec::new();
        let blocks = split_blocks(src, &mut errors);
        let Some(first) = blocks.first() else {
            errors.push(Error::parse(1, 1, "missing [ring] block"));
            return Err(errors);
        };
        if first.kind != "ring" || first.name.is_some() {
            errors.push(first.header.error("the first block must be [ring]"));
            return Err(errors);
        }
        let Some(ring) = parse_ring(first, &mut errors) else {
            return Err(errors);
        };
        let mut known: HashMap<String, &'static str> = HashMap::new();
        let mut items: Vec<(String, Item)> = Vec::new();
        for block in &blocks[1..] {
            let Some(name) = block.name.clone() else {
                errors.push(block.header.error(format!("[{}] needs a name", block.kind)));
                continue;
            };
            if block.kind == "ring" {
                errors.push(block.header.error("only one [ring] block is allowed"));
                continue;
            }
            if known.contains_key(&name) {
                errors.push(block.header.error(format!("duplicate name '{name}'")));
                continue;
            }
            block.check_keys(allowed_keys(&block.kind, &ring), &mut errors);
            match parse_item(&ring, block, &known, &items) {
                Ok(item) => {
                    known.insert(name.clone(), item.kind());
                    items.push((name, item));
                }
                Err(e) => errors.push(e),
            }
        }
        if errors.is_empty() {
            Ok(Instance { ring, items })
        } else {
            Err(errors)
        }
    }

    pub fn poly_ring(&self) -> Option<&RingRef> {
        match &self.ring {
            RingSpec::Poly(r) => Some(r),
            RingSpec::Integers => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.ring == RingSpec::Integers
    }

    pub fn item(&self, name: &str) -> Result<&Item> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, i)| i).ok_or_else(|| Error::UnresolvedReference(format!("no declaration named '{name}'")))
    }

    fn wrong_kind(name: &str, want: &str, item: &Item) -> Error {
        Error::InvalidArgument(format!("'{name}' is {} {}, not {} {want}", article(item.kind()), item.kind(), article(want)))
    }

    pub fn ideal(&self, name: &str) -> Result<Ideal> {
        match (self.item(name)?, self.poly_ring()) {
            (Item::Ideal(g), Some(r)) => Ideal::new(r, g.clone()),
            (other, _) => Err(Self::wrong_kind(name, "ideal", other)),
        }
    }

    pub fn int_ideal(&self, name: &str) -> Result<BigInt> {
        match self.item(name)? {
            Item::IntIdeal(g) => Ok(g.clone()),
            other => Err(Self::wrong_kind(name, "ideal", other)),
        }
    }

    pub fn module(&self, name: &str) -> Result<FGModule> {
        match (self.item(name)?, self.poly_ring()) {
            (Item::Module { ngens, relations }, Some(r)) => {
                FGModule::new(r, *ngens, relations.iter().map(|row| Vector(row.clone())).collect())
            }
            (other, _) => Err(Self::wrong_kind(name, "module", other)),
        }
    }

    pub fn int_module(&self, name: &str) -> Result<AbelianGroup> {
        match self.item(name)? {
            Item::IntModule(g) => Ok(g.clone()),
            other => Err(Self::wrong_kind(name, "module", other)),
        }
    }

    pub fn artinian(&self, name: &str) -> Result<DualModule> {
        match self.item(name)? {
            Item::DualOf(m) => DualModule::new(self.module(m)?),
            other => Err(Self::wrong_kind(name, "artinian", other)),
        }
    }

    pub fn int_artinian(&self, name: &str) -> Result<ArtinianGroup> {
        match self.item(name)? {
            Item::IntArtinian(g) => Ok(g.clone()),
            other => Err(Self::wrong_kind(name, "artinian", other)),
        }
    }

    pub fn sequence(&self, name: &str) -> Result<Vec<Poly>> {
        match self.item(name)? {
            Item::Sequence(s) => Ok(s.clone()),
            other => Err(Self::wrong_kind(name, "sequence", other)),
        }
    }

    pub fn int_sequence(&self, name: &str) -> Result<Vec<BigInt>> {
        match self.item(name)? {
            Item::IntSequence(s) => Ok(s.clone()),
            other => Err(Self::wrong_kind(name, "sequence", other)),
        }
    }

    /// Any polynomial in the file fails to be homogeneous.
    pub fn has_non_graded_input(&self) -> bool {
        let Some(r) = self.poly_ring() else { return false };
        r.relations().iter().any(|p| !p.is_homogeneous())
            || self.items.iter().any(|(_, item)| match item {
                Item::Ideal(g) | Item::Sequence(g) => g.iter().any(|p| !p.is_homogeneous()),
                _ => false,
            })
            || self.items.iter().any(|(name, item)| matches!(item, Item::Module { .. }) && self.module(name).map(|m| !m.is_graded()).unwrap_or(false))
    }
}

fn article(kind: &str) -> &'static str {
    if kind.starts_with(['a', 'e', 'i', 'o', 'u']) {
        "an"
    } else {
        "a"
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[ring]")?;
        let ring = match &self.ring {
            RingSpec::Integers => {
                writeln!(f, "field = ZZ")?;
                None
            }
            RingSpec::Poly(r) => {
                match r.field() {
                    CoefficientField::Rationals => writeln!(f, "field = QQ")?,
                    CoefficientField::Prime(p) => writeln!(f, "field = GF({p})")?,
                }
                writeln!(f, "vars = {}", r.vars().join(", "))?;
                if !r.relations().is_empty() {
                    let rels: Vec<String> = r.relations().iter().map(|p| r.format(p)).collect();
                    writeln!(f, "relations = {}", rels.join(", "))?;
                }
                writeln!(f, "local = {}", r.is_local())?;
                Some(r)
            }
        };
        let polys = |ps: &[Poly]| ps.iter().map(|p| ring.unwrap().format(p)).collect::<Vec<_>>().join(", ");
        let ints = |ns: &[BigInt]| ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ");
        for (name, item) in &self.items {
            writeln!(f, "\n[{} {name}]", item.kind())?;
            match item {
                Item::Ideal(g) => writeln!(f, "gens = {}", polys(g))?,
                Item::IntIdeal(g) => writeln!(f, "gens = {g}")?,
                Item::Module { ngens, relations } => {
                    writeln!(f, "gens = {ngens}")?;
                    for row in relations {
                        writeln!(f, "relation = {}", polys(row))?;
                    }
                }
                Item::IntModule(g) => {
                    writeln!(f, "free = {}", g.free_rank)?;
                    if !g.invariant_factors.is_empty() {
                        writeln!(f, "torsion = {}", ints(&g.invariant_factors))?;
                    }
                }
                Item::DualOf(m) => writeln!(f, "dual_of = {m}")?,
                Item::IntArtinian(g) => {
                    if !g.finite.is_empty() {
                        let orders: Vec<String> = g.finite.iter().map(|(p, e)| p.pow(*e).to_string()).collect();
                        writeln!(f, "finite = {}", orders.join(", "))?;
                    }
                    if !g.prufer.is_empty() {
                        let ps: Vec<String> = g.prufer.iter().flat_map(|&(p, k)| std::iter::repeat(p.to_string()).take(k as usize)).collect();
                        writeln!(f, "prufer = {}", ps.join(", "))?;
                    }
                }
                Item::Sequence(s) => writeln!(f, "elems = {}", polys(s))?,
                Item::IntSequence(s) => writeln!(f, "elems = {}", ints(s))?,
            }
        }
        Ok(())
    }
}
