use std::fmt;

use super::SyntaxError;

/// Labeled ordered constituency tree. Preterminals are nodes whose single
/// child is a [`ParseTree::Leaf`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseTree {
    Node {
        label: String,
        children: Vec<ParseTree>,
    },
    Leaf(String),
}

impl ParseTree {
    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> Self {
        ParseTree::Node {
            label: label.into(),
            children,
        }
    }

    /// `(tag word)` shorthand.
    pub fn pre(tag: impl Into<String>, word: impl Into<String>) -> Self {
        ParseTree::node(tag, vec![ParseTree::Leaf(word.into())])
    }

    pub fn label(&self) -> &str {
        match self {
            ParseTree::Node { label, .. } => label,
            ParseTree::Leaf(s) => s,
        }
    }

    pub fn children(&self) -> &[ParseTree] {
        match self {
            ParseTree::Node { children, .. } => children,
            ParseTree::Leaf(_) => &[],
        }
    }

    /// Terminal surfaces in order.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk_leaves(&mut |_, w| out.push(w));
        out
    }

    /// (tag, surface) for every terminal; a terminal not under a
    /// preterminal gets its parent's label as tag.
    pub fn tagged_leaves(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.walk_leaves(&mut |t, w| out.push((t, w)));
        out
    }

    fn walk_leaves<'a>(&'a self, f: &mut impl FnMut(&'a str, &'a str)) {
        if let ParseTree::Node { label, children } = self {
            for c in children {
                match c {
                    ParseTree::Leaf(w) => f(label, w),
                    node => node.walk_leaves(f),
                }
            }
        }
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseTree::Leaf(s) => f.write_str(s),
            ParseTree::Node { label, children } => {
                write!(f, "({label}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open(usize),
    Close(usize),
    Atom(usize, &'a str),
}

fn tokenize(text: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in text.char_indices() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok::Atom(s, &text[s..i]));
            }
            match ch {
                '(' => out.push(Tok::Open(i)),
                ')' => out.push(Tok::Close(i)),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok::Atom(s, &text[s..]));
    }
    out
}

/// Reads every top-level bracketed group of `text` as one tree. An unlabeled
/// outer bracket, as in `( (S …) )`, becomes a `ROOT` node.
pub fn parse_bracketed(text: &str) -> Result<Vec<ParseTree>, SyntaxError> {
    let toks = tokenize(text);
    let mut pos = 0;
    let mut trees = Vec::new();
    while pos < toks.len() {
        match toks[pos] {
            Tok::Open(_) => trees.push(parse_node(&toks, &mut pos)?),
            Tok::Close(at) => return Err(SyntaxError::Unbalanced { offset: at }),
            Tok::Atom(at, s) => {
                return Err(SyntaxError::StrayToken {
                    offset: at,
                    token: s.to_string(),
                })
            }
        }
    }
    Ok(trees)
}

fn parse_node(toks: &[Tok<'_>], pos: &mut usize) -> Result<ParseTree, SyntaxError> {
    let open_at = match toks[*pos] {
        Tok::Open(at) => at,
        _ => unreachable!("caller checked for an opening bracket"),
    };
    *pos += 1;
    let label = match toks.get(*pos) {
        None => return Err(SyntaxError::Unbalanced { offset: open_at }),
        Some(Tok::Atom(_, s)) => {
            *pos += 1;
            s.to_string()
        }
        Some(Tok::Open(_)) => "ROOT".to_string(),
        Some(Tok::Close(_)) => return Err(SyntaxError::EmptyNode { offset: open_at }),
    };
    let mut children = Vec::new();
    loop {
        match toks.get(*pos) {
            None => return Err(SyntaxError::Unbalanced { offset: open_at }),
            Some(Tok::Close(_)) => {
                *pos += 1;
                break;
            }
            Some(Tok::Open(_)) => children.push(parse_node(toks, pos)?),
            Some(Tok::Atom(_, s)) => {
                children.push(ParseTree::Leaf(s.to_string()));
                *pos += 1;
            }
        }
    }
    if children.is_empty() {
        return Err(SyntaxError::EmptyNode { offset: open_at });
    }
    Ok(ParseTree::Node { label, children })
}
