//! The ludeme registry and the structural validation pass.
//!
//! The registry is loaded from `data/registry.toml`. Validation walks a parsed
//! tree, assigns every node a preorder [`NodeId`], resolves each call to its
//! descriptor and binds arguments to the descriptor's named slots. The result
//! is a [`LudemeTable`] that later passes (typed compilation, translation)
//! read by slot name instead of by argument position.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sexpr::{NodeKind, RawNode, Span};

const BUILTIN_REGISTRY: &str = include_str!("../data/registry.toml");

/// Preorder index of a node in a compiled game's source tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotKind {
    Number,
    Text,
    Symbol(Vec<String>),
    Ludeme(Vec<String>),
    Collection(Box<SlotKind>),
}

impl fmt::Display for SlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotKind::Number => f.write_str("number"),
            SlotKind::Text => f.write_str("string"),
            SlotKind::Symbol(set) => write!(f, "symbol:{}", set.join("|")),
            SlotKind::Ludeme(cats) => write!(f, "ludeme:{}", cats.join("|")),
            SlotKind::Collection(inner) => write!(f, "collection:{inner}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Slot {
    pub name: String,
    pub kinds: Vec<SlotKind>,
    pub optional: bool,
    pub repeated: bool,
}

#[derive(Debug, Clone)]
pub struct LudemeDescriptor {
    pub name: String,
    pub head: String,
    pub selector: Option<String>,
    pub category: String,
    pub slots: Vec<Slot>,
}

impl LudemeDescriptor {
    fn signature(&self) -> String {
        let slots: Vec<String> = self
            .slots
            .iter()
            .map(|s| {
                let kinds: Vec<String> = s.kinds.iter().map(ToString::to_string).collect();
                let suffix = if s.repeated {
                    "*"
                } else if s.optional {
                    "?"
                } else {
                    ""
                };
                format!("{}:{}{}", s.name, kinds.join("/"), suffix)
            })
            .collect();
        format!("({} {})", self.name, slots.join(" "))
    }
}

#[derive(Debug)]
pub struct Registry {
    descriptors: Vec<LudemeDescriptor>,
    by_name: HashMap<String, usize>,
    heads: HashSet<String>,
    categories: Vec<String>,
    unsupported: HashSet<String>,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("registry is not valid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("duplicate ludeme name `{0}`")]
    Duplicate(String),
    #[error("ludeme `{ludeme}` references unknown category `{category}`")]
    UnknownCategory { ludeme: String, category: String },
    #[error("ludeme `{ludeme}` has malformed slot kind `{kind}`")]
    BadKind { ludeme: String, kind: String },
}

#[derive(Deserialize)]
struct RegistryFile {
    categories: Vec<String>,
    #[serde(default)]
    unsupported: Vec<String>,
    #[serde(default)]
    symbols: HashMap<String, Vec<String>>,
    ludeme: Vec<DescriptorFile>,
}

#[derive(Deserialize)]
struct DescriptorFile {
    name: String,
    category: String,
    #[serde(default)]
    slots: Vec<SlotFile>,
}

#[derive(Deserialize)]
struct SlotFile {
    name: String,
    kinds: Vec<String>,
    #[serde(default)]
    optional: bool,
    #[serde(default)]
    repeated: bool,
}

fn parse_kind(text: &str, symbols: &HashMap<String, Vec<String>>) -> Option<SlotKind> {
    match text.split_once(':') {
        None => match text {
            "number" => Some(SlotKind::Number),
            "string" => Some(SlotKind::Text),
            _ => None,
        },
        Some(("symbol", rest)) => match rest.strip_prefix('@') {
            Some(set) => symbols.get(set).map(|s| SlotKind::Symbol(s.clone())),
            None => Some(SlotKind::Symbol(rest.split('|').map(String::from).collect())),
        },
        Some(("ludeme", rest)) => Some(SlotKind::Ludeme(rest.split('|').map(String::from).collect())),
        Some(("collection", rest)) => parse_kind(rest, symbols).map(|k| SlotKind::Collection(Box::new(k))),
        _ => None,
    }
}

fn kind_categories(kind: &SlotKind) -> Vec<&str> {
    match kind {
        SlotKind::Ludeme(cats) => cats.iter().map(String::as_str).collect(),
        SlotKind::Collection(inner) => kind_categories(inner),
        _ => Vec::new(),
    }
}

impl Registry {
    /// The registry shipped with the crate.
    pub fn builtin() -> &'static Registry {
        static REGISTRY: OnceLock<Registry> = OnceLock::new();
        REGISTRY.get_or_init(|| Registry::from_toml(BUILTIN_REGISTRY).expect("builtin registry is valid"))
    }

    pub fn from_toml(text: &str) -> Result<Registry, RegistryError> {
        let file: RegistryFile = toml::from_str(text)?;
        let mut by_name = HashMap::new();
        let mut descriptors = Vec::new();
        let mut heads = HashSet::new();
        for d in file.ludeme {
            if by_name.contains_key(&d.name) {
                return Err(RegistryError::Duplicate(d.name));
            }
            if !file.categories.contains(&d.category) {
                return Err(RegistryError::UnknownCategory { ludeme: d.name, category: d.category });
            }
            let mut slots = Vec::new();
            for s in d.slots {
                let mut kinds = Vec::new();
                for k in &s.kinds {
                    let kind = parse_kind(k, &file.symbols)
                        .ok_or_else(|| RegistryError::BadKind { ludeme: d.name.clone(), kind: k.clone() })?;
                    for cat in kind_categories(&kind) {
                        if !file.categories.iter().any(|c| c == cat) {
                            return Err(RegistryError::UnknownCategory {
                                ludeme: d.name.clone(),
                                category: cat.to_string(),
                            });
                        }
                    }
                    kinds.push(kind);
                }
                slots.push(Slot { name: s.name, kinds, optional: s.optional, repeated: s.repeated });
            }
            let (head, selector) = match d.name.split_once(' ') {
                Some((h, s)) => (h.to_string(), Some(s.to_string())),
                None => (d.name.clone(), None),
            };
            heads.insert(head.clone());
            by_name.insert(d.name.clone(), descriptors.len());
            descriptors.push(LudemeDescriptor { name: d.name, head, selector, category: d.category, slots });
        }
        Ok(Registry {
            descriptors,
            by_name,
            heads,
            categories: file.categories,
            unsupported: file.unsupported.into_iter().collect(),
        })
    }

    pub fn descriptors(&self) -> &[LudemeDescriptor] {
        &self.descriptors
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn get(&self, name: &str) -> Option<&LudemeDescriptor> {
        self.by_name.get(name).map(|&i| &self.descriptors[i])
    }

    /// Find the descriptor for a call node.
    pub fn resolve(&self, node: &RawNode) -> Result<&LudemeDescriptor, CompileError> {
        let NodeKind::Call { head, args, .. } = &node.kind else {
            return Err(CompileError::BadArgumentKind {
                ludeme: String::new(),
                slot: String::new(),
                expected: "a ludeme call".into(),
                actual: node.describe(),
                span: node.span,
            });
        };
        let selector = args.first().and_then(RawNode::as_symbol);
        if let Some(sel) = selector {
            let name = format!("{head} {sel}");
            if let Some(d) = self.get(&name) {
                return Ok(d);
            }
            if self.unsupported.contains(&name) {
                return Err(CompileError::UnsupportedLudeme { name, span: node.span });
            }
        }
        if let Some(d) = self.get(head) {
            return Ok(d);
        }
        if self.unsupported.contains(head.as_str()) {
            return Err(CompileError::UnsupportedLudeme { name: head.clone(), span: node.span });
        }
        let name = match selector {
            Some(sel) if self.heads.contains(head.as_str()) => format!("{head} {sel}"),
            _ => head.clone(),
        };
        Err(CompileError::UnknownLudeme { name, span: node.span })
    }

    fn matches(&self, kind: &SlotKind, arg: &RawNode) -> Result<bool, CompileError> {
        Ok(match (kind, &arg.kind) {
            (SlotKind::Number, NodeKind::Number(_)) => true,
            (SlotKind::Text, NodeKind::Text(_)) => true,
            (SlotKind::Symbol(set), NodeKind::Symbol(s)) => set.iter().any(|x| x == s),
            (SlotKind::Ludeme(cats), NodeKind::Call { .. }) => {
                let d = self.resolve(arg)?;
                cats.contains(&d.category)
            }
            (SlotKind::Collection(inner), NodeKind::Collection(items)) => {
                for item in items {
                    if !self.matches(inner, item)? {
                        return Ok(false);
                    }
                }
                true
            }
            _ => false,
        })
    }

    fn matches_any(&self, slot: &Slot, arg: &RawNode) -> Result<bool, CompileError> {
        for kind in &slot.kinds {
            if self.matches(kind, arg)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("unknown ludeme `{name}`")]
    UnknownLudeme { name: String, span: Span },
    #[error("ludeme `{name}` is not supported by this tool")]
    UnsupportedLudeme { name: String, span: Span },
    #[error("wrong number of arguments for {descriptor}")]
    ArityMismatch { descriptor: String, span: Span },
    #[error("`{ludeme}` slot `{slot}` expects {expected}, found {actual}")]
    BadArgumentKind { ludeme: String, slot: String, expected: String, actual: String, span: Span },
    #[error("unsupported board shape")]
    UnsupportedShape { span: Span },
    #[error("unknown piece `{name}`")]
    UnknownPiece { name: String, span: Span },
    #[error("site `{label}` is not on the board")]
    UnknownSite { label: String, span: Span },
    #[error("player {player} is out of range for a {count}-player game")]
    PlayerOutOfRange { player: String, count: usize, span: Span },
    #[error("{message}")]
    Invalid { message: String, span: Span },
}

impl CompileError {
    pub fn span(&self) -> Span {
        match self {
            CompileError::UnknownLudeme { span, .. }
            | CompileError::UnsupportedLudeme { span, .. }
            | CompileError::ArityMismatch { span, .. }
            | CompileError::BadArgumentKind { span, .. }
            | CompileError::UnsupportedShape { span }
            | CompileError::UnknownPiece { span, .. }
            | CompileError::UnknownSite { span, .. }
            | CompileError::PlayerOutOfRange { span, .. }
            | CompileError::Invalid { span, .. } => *span,
        }
    }
}

/// Arguments bound to one descriptor slot.
#[derive(Debug, Clone)]
pub struct SlotBinding {
    pub name: String,
    pub args: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub struct LudemeEntry {
    pub node: RawNode,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Descriptor name for call nodes.
    pub descriptor: Option<String>,
    pub slots: Vec<SlotBinding>,
}

/// Every node of a game's source tree, indexed by preorder [`NodeId`].
#[derive(Debug, Clone, Default)]
pub struct LudemeTable {
    entries: Vec<LudemeEntry>,
}

impl LudemeTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: NodeId) -> Option<&LudemeEntry> {
        self.entries.get(id.0)
    }

    pub fn entry(&self, id: NodeId) -> &LudemeEntry {
        &self.entries[id.0]
    }

    pub fn node(&self, id: NodeId) -> &RawNode {
        &self.entries[id.0].node
    }

    pub fn descriptor(&self, id: NodeId) -> Option<&str> {
        self.entries[id.0].descriptor.as_deref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &LudemeEntry)> {
        self.entries.iter().enumerate().map(|(i, e)| (NodeId(i), e))
    }

    /// First argument bound to `slot`, if any.
    pub fn slot(&self, id: NodeId, slot: &str) -> Option<NodeId> {
        self.slot_all(id, slot).first().copied()
    }

    pub fn slot_all(&self, id: NodeId, slot: &str) -> &[NodeId] {
        self.entries[id.0].slots.iter().find(|b| b.name == slot).map_or(&[], |b| b.args.as_slice())
    }

    /// Items of a collection node, or the node itself when it is not a collection.
    pub fn flatten(&self, id: NodeId) -> Vec<NodeId> {
        match self.node(id).kind {
            NodeKind::Collection(_) => self.entries[id.0].children.clone(),
            _ => vec![id],
        }
    }

    /// Validate `tree` against `registry` and index every node.
    pub fn build(tree: &RawNode, registry: &Registry) -> Result<LudemeTable, CompileError> {
        let mut table = LudemeTable::default();
        table.walk(tree, None, registry)?;
        Ok(table)
    }

    fn walk(&mut self, node: &RawNode, parent: Option<NodeId>, registry: &Registry) -> Result<NodeId, CompileError> {
        let id = NodeId(self.entries.len());
        self.entries.push(LudemeEntry {
            node: node.clone(),
            parent,
            children: Vec::new(),
            descriptor: None,
            slots: Vec::new(),
        });
        let mut children = Vec::new();
        for child in node.args() {
            children.push(self.walk(child, Some(id), registry)?);
        }
        if let NodeKind::Call { args, .. } = &node.kind {
            let descriptor = registry.resolve(node)?;
            let skip = usize::from(descriptor.selector.is_some());
            let slots = bind_slots(registry, descriptor, node, &args[skip..], &children[skip..])?;
            let entry = &mut self.entries[id.0];
            entry.descriptor = Some(descriptor.name.clone());
            entry.slots = slots;
        }
        self.entries[id.0].children = children;
        Ok(id)
    }
}

fn bind_slots(
    registry: &Registry,
    descriptor: &LudemeDescriptor,
    node: &RawNode,
    args: &[RawNode],
    ids: &[NodeId],
) -> Result<Vec<SlotBinding>, CompileError> {
    let mut bindings = Vec::new();
    let mut next = 0;
    for slot in &descriptor.slots {
        let mut bound = Vec::new();
        while next < args.len() && registry.matches_any(slot, &args[next])? {
            bound.push(ids[next]);
            next += 1;
            if !slot.repeated {
                break;
            }
        }
        if bound.is_empty() && !slot.optional {
            return Err(match args.get(next) {
                None => CompileError::ArityMismatch { descriptor: descriptor.signature(), span: node.span },
                Some(arg) => CompileError::BadArgumentKind {
                    ludeme: descriptor.name.clone(),
                    slot: slot.name.clone(),
                    expected: slot.kinds.iter().map(ToString::to_string).collect::<Vec<_>>().join(" or "),
                    actual: arg.describe(),
                    span: arg.span,
                },
            });
        }
        if !bound.is_empty() {
            bindings.push(SlotBinding { name: slot.name.clone(), args: bound });
        }
    }
    if let Some(extra) = args.get(next) {
        return Err(CompileError::ArityMismatch { descriptor: descriptor.signature(), span: extra.span });
    }
    Ok(bindings)
}
