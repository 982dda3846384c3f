//! Ranked alphabets, F-terms and finite prefix trees.
//!
//! Symbols are kept in a canonical order: by arity, then by name. Every
//! enumeration in the crate (terms, trees, witnesses) follows that order, so
//! the nullary end marker `✓` sorts before the unary letters of a word
//! alphabet.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol inside its [`RankedAlphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub(crate) usize);

impl Symbol {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A finite set of symbols, each with a fixed arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankedAlphabet {
    symbols: Vec<(String, usize)>,
}

impl RankedAlphabet {
    /// Validates a list of `(name, arity)` pairs.
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut symbols = Vec::new();
        for (name, arity) in entries {
            let name = name.into();
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateSymbol(name));
            }
            symbols.push((name, arity));
        }
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        symbols.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl ExactSizeIterator<Item = Symbol> + '_ {
        (0..self.symbols.len()).map(Symbol)
    }

    pub fn name(&self, symbol: Symbol) -> &str {
        &self.symbols[symbol.0].0
    }

    pub fn arity(&self, symbol: Symbol) -> usize {
        self.symbols[symbol.0].1
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|(n, _)| n == name).map(Symbol)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.1).max().unwrap_or(0)
    }

    /// True iff every arity is at most one, i.e. the alphabet generates words.
    pub fn word_mode(&self) -> bool {
        self.max_arity() <= 1
    }

    /// `(name, arity)` pairs in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols.iter().map(|(n, a)| (n.as_str(), *a))
    }
}

/// Element `(a, x_0, ..., x_{n-1})` of `F_Σ X`, with states given by index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FTerm {
    pub symbol: Symbol,
    pub args: Vec<usize>,
}

impl FTerm {
    pub fn new(symbol: Symbol, args: Vec<usize>) -> Self {
        Self { symbol, args }
    }

    /// Canonical printed form: `✓` for nullary symbols, `(a,x,y)` otherwise.
    pub fn render(&self, alphabet: &RankedAlphabet, state_name: impl Fn(usize) -> String) -> String {
        let name = alphabet.name(self.symbol);
        if self.args.is_empty() {
            return name.to_string();
        }
        let mut out = String::from("(");
        out.push_str(name);
        for &arg in &self.args {
            out.push(',');
            out.push_str(&state_name(arg));
        }
        out.push(')');
        out
    }
}

/// All terms over `n_states` states, ordered by symbol then by argument tuple.
pub fn enumerate_fterms(alphabet: &RankedAlphabet, n_states: usize) -> Vec<FTerm> {
    let mut out = Vec::new();
    for symbol in alphabet.symbols() {
        let arity = alphabet.arity(symbol);
        for args in tuples(n_states, arity) {
            out.push(FTerm::new(symbol, args));
        }
    }
    out
}

/// All `len`-tuples over `0..n` in lexicographic order.
pub(crate) fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * n);
        for prefix in &out {
            for i in 0..n {
                let mut t = prefix.clone();
                t.push(i);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// A labelled node of a prefix tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub symbol: Symbol,
    pub children: Vec<Node>,
}

impl Node {
    pub fn leaf(symbol: Symbol) -> Self {
        Self {
            symbol,
            children: Vec::new(),
        }
    }

    pub fn new(symbol: Symbol, children: Vec<Node>) -> Self {
        Self { symbol, children }
    }
}

/// A depth-`k` prefix of an infinite Σ-labelled tree, denoting the cylinder of
/// all infinite trees extending it.
///
/// Depth 0 is the empty tree. For depth `k > 0` every node on levels
/// `0..k-1` carries exactly `arity` children, and nodes on level `k-1` carry
/// none.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrefixTree {
    depth: usize,
    root: Option<Node>,
}

impl PrefixTree {
    pub fn empty() -> Self {
        Self {
            depth: 0,
            root: None,
        }
    }

    /// Builds a tree after checking its shape against the alphabet.
    pub fn new(alphabet: &RankedAlphabet, depth: usize, root: Option<Node>) -> Result<Self> {
        match (&root, depth) {
            (None, 0) => {}
            (None, _) => return Err(Error::InvalidTree("positive depth needs a root".into())),
            (Some(_), 0) => return Err(Error::InvalidTree("depth 0 tree must be empty".into())),
            (Some(node), k) => check_node(alphabet, node, k)?,
        }
        Ok(Self { depth, root })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn root(&self) -> Option<&Node> {
        self.root.as_ref()
    }

    /// The unique depth-`k` prefix of this tree.
    pub fn truncate(&self, k: usize) -> PrefixTree {
        if k >= self.depth {
            return self.clone();
        }
        if k == 0 {
            return PrefixTree::empty();
        }
        fn cut(node: &Node, levels: usize) -> Node {
            if levels == 1 {
                Node::leaf(node.symbol)
            } else {
                Node::new(node.symbol, node.children.iter().map(|c| cut(c, levels - 1)).collect())
            }
        }
        PrefixTree {
            depth: k,
            root: self.root.as_ref().map(|n| cut(n, k)),
        }
    }

    /// Every depth-`k+1` tree that has `self` as a prefix, in canonical order.
    pub fn extensions(&self, alphabet: &RankedAlphabet) -> Vec<PrefixTree> {
        let depth = self.depth + 1;
        let roots = match &self.root {
            None => alphabet.symbols().map(Node::leaf).collect(),
            Some(node) => extend_node(alphabet, node, self.depth),
        };
        roots
            .into_iter()
            .map(|root| PrefixTree {
                depth,
                root: Some(root),
            })
            .collect()
    }

    /// Renders the tree as `a(b(✓),c)`; the empty tree renders as `ε`.
    pub fn display<'a>(&'a self, alphabet: &'a RankedAlphabet) -> TreeDisplay<'a> {
        TreeDisplay {
            tree: self,
            alphabet,
        }
    }

    /// For word-shaped trees (every node has at most one child) returns the
    /// sequence of symbols along the spine.
    pub fn spine(&self) -> Option<Vec<Symbol>> {
        let mut out = Vec::new();
        let mut cur = self.root.as_ref();
        while let Some(node) = cur {
            out.push(node.symbol);
            match node.children.len() {
                0 => cur = None,
                1 => cur = node.children.first(),
                _ => return None,
            }
        }
        Some(out)
    }

    /// Builds the depth-`k` word tree from a symbol sequence; a nullary symbol
    /// ends the word early.
    pub fn from_word(alphabet: &RankedAlphabet, word: &[Symbol]) -> Result<Self> {
        let depth = word.len();
        let mut root: Option<Node> = None;
        for (i, &sym) in word.iter().enumerate().rev() {
            let arity = alphabet.arity(sym);
            if arity > 1 {
                return Err(Error::NotWordMode);
            }
            let last = i + 1 == word.len();
            root = Some(match (root, arity, last) {
                (None, _, true) => Node::leaf(sym),
                (Some(child), 1, false) => Node::new(sym, vec![child]),
                _ => {
                    return Err(Error::InvalidTree(
                        "nullary symbol must end the word".into(),
                    ))
                }
            });
        }
        Ok(Self { depth, root })
    }

    /// Renders a word-shaped tree by concatenating symbol names, separated by
    /// `.` when some name is longer than one character.
    pub fn word_string(&self, alphabet: &RankedAlphabet) -> Option<String> {
        let spine = self.spine()?;
        let names: Vec<&str> = spine.iter().map(|&s| alphabet.name(s)).collect();
        let sep = if names.iter().all(|n| n.chars().count() == 1) {
            ""
        } else {
            "."
        };
        Some(names.join(sep))
    }
}

fn check_node(alphabet: &RankedAlphabet, node: &Node, levels: usize) -> Result<()> {
    if node.symbol.0 >= alphabet.len() {
        return Err(Error::InvalidTree("symbol out of range".into()));
    }
    let arity = alphabet.arity(node.symbol);
    if levels == 1 {
        if !node.children.is_empty() {
            return Err(Error::InvalidTree(format!(
                "node `{}` on the frontier has children",
                alphabet.name(node.symbol)
            )));
        }
        return Ok(());
    }
    if node.children.len() != arity {
        return Err(Error::InvalidTree(format!(
            "node `{}` has {} children, expected {}",
            alphabet.name(node.symbol),
            node.children.len(),
            arity
        )));
    }
    node.children
        .iter()
        .try_for_each(|c| check_node(alphabet, c, levels - 1))
}

fn extend_node(alphabet: &RankedAlphabet, node: &Node, levels: usize) -> Vec<Node> {
    let arity = alphabet.arity(node.symbol);
    if arity == 0 {
        return vec![node.clone()];
    }
    let options: Vec<Vec<Node>> = if levels == 1 {
        (0..arity)
            .map(|_| alphabet.symbols().map(Node::leaf).collect())
            .collect()
    } else {
        node.children
            .iter()
            .map(|c| extend_node(alphabet, c, levels - 1))
            .collect()
    };
    product(&options)
        .into_iter()
        .map(|children| Node::new(node.symbol, children))
        .collect()
}

/// Cartesian product of lists, lexicographic in the first coordinate.
pub(crate) fn product<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::with_capacity(options.len())];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All depth-`k` prefix trees over the alphabet, in canonical order.
pub fn prefix_trees(alphabet: &RankedAlphabet, k: usize) -> Vec<PrefixTree> {
    if k == 0 {
        return vec![PrefixTree::empty()];
    }
    let mut level: Vec<Node> = alphabet.symbols().map(Node::leaf).collect();
    for _ in 1..k {
        let mut next = Vec::new();
        for sym in alphabet.symbols() {
            let arity = alphabet.arity(sym);
            if arity == 0 {
                next.push(Node::leaf(sym));
                continue;
            }
            let opts = vec![level.clone(); arity];
            next.extend(product(&opts).into_iter().map(|ch| Node::new(sym, ch)));
        }
        level = next;
    }
    level
        .into_iter()
        .map(|root| PrefixTree {
            depth: k,
            root: Some(root),
        })
        .collect()
}

/// Prefix order on trees: domains nest and labels agree on the smaller one.
pub fn is_prefix(t: &PrefixTree, s: &PrefixTree) -> Result<bool> {
    if t.depth > s.depth {
        return Err(Error::DepthMismatch {
            left: t.depth,
            right: s.depth,
        });
    }
    Ok(s.truncate(t.depth) == *t)
}

pub struct TreeDisplay<'a> {
    tree: &'a PrefixTree,
    alphabet: &'a RankedAlphabet,
}

impl fmt::Display for TreeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(node: &Node, alphabet: &RankedAlphabet, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str(alphabet.name(node.symbol))?;
            if node.children.is_empty() {
                return Ok(());
            }
            f.write_str("(")?;
            for (i, c) in node.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                go(c, alphabet, f)?;
            }
            f.write_str(")")
        }
        match &self.tree.root {
            None => f.write_str("ε"),
            Some(node) => go(node, self.alphabet, f),
        }
    }
}

/// Parses the rendering produced by [`PrefixTree::display`]. The depth is the
/// height of the tree unless given explicitly.
pub fn parse_tree(alphabet: &RankedAlphabet, text: &str, depth: Option<usize>) -> Result<PrefixTree> {
    let text = text.trim();
    if text == "ε" || text.is_empty() {
        return PrefixTree::new(alphabet, depth.unwrap_or(0), None);
    }
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let node = parse_node(alphabet, &chars, &mut pos)?;
    if pos != chars.len() {
        return Err(Error::InvalidTree(format!("trailing input at offset {pos}")));
    }
    fn height(n: &Node) -> usize {
        1 + n.children.iter().map(height).max().unwrap_or(0)
    }
    let depth = depth.unwrap_or_else(|| height(&node));
    PrefixTree::new(alphabet, depth, Some(node))
}

fn parse_node(alphabet: &RankedAlphabet, chars: &[char], pos: &mut usize) -> Result<Node> {
    let start = *pos;
    while *pos < chars.len() && !matches!(chars[*pos], '(' | ')' | ',') {
        *pos += 1;
    }
    let name: String = chars[start..*pos].iter().collect::<String>().trim().to_string();
    let symbol = alphabet
        .lookup(&name)
        .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
    let mut children = Vec::new();
    if *pos < chars.len() && chars[*pos] == '(' {
        *pos += 1;
        loop {
            children.push(parse_node(alphabet, chars, pos)?);
            match chars.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => return Err(Error::InvalidTree(format!("expected `,` or `)` at offset {pos}"))),
            }
        }
    }
    Ok(Node::new(symbol, children))
}
