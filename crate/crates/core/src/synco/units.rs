//! Production-unit counting over constituency trees.
//!
//! Pattern list (version 1). Labels are compared on their basic category
//! (function tags after `-` or `=` are ignored). `FINITE` = MD|VBZ|VBP|VBD.
//!
//! | unit | pattern |
//! |------|---------|
//! | clause (F) | S\|SINV\|SQ that (is a ROOT child whose first child is a VP headed by VB) or (is headed by FINITE) or (has a VP child that is headed by FINITE, or has both a CC child and a VP child headed by FINITE) |
//! | fragment clause | FRAG child of ROOT dominating no F node; counts as one clause and one T-unit |
//! | T-unit candidate | S\|SBARQ\|SINV\|SQ that is a ROOT child, or has an S\|SBARQ\|SINV\|SQ sister to its left and no SBAR or VP ancestor |
//! | T-unit | a candidate that owns at least one F clause; a clause is owned by its nearest candidate ancestor-or-self |
//! | dependent clause | SBAR with an F child |
//! | complex T-unit | T-unit owning at least one dependent-clause SBAR |
//! | coordinate phrase | ADJP\|ADVP\|NP\|VP with a CC child |
//! | complex nominal | (a) NP not under NP dominating JJ\|POS\|PP\|S\|VBG, or an NP with a later NP sister not immediately followed by CC; (b) SBAR headed by WHNP, by IN over that/for, or starting with S, that precedes a VP sister or sits under VP; (c) S with a VP child headed by VBG\|TO, immediately followed by a VP sister |
//! | verb phrase | VP child of S\|SINV\|SQ; FINITE child of an SQ with no VP child |
//!
//! Heads follow the Collins rules for S, SINV, SQ, SBAR and VP (leftmost
//! match of the first category in the priority list); other nodes are headed
//! by their first child.
//!
//! Every tree is analysed as if wrapped in ROOT; a tree already labeled ROOT
//! is not wrapped again.

use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::ParseTree;

/// Raw production-unit counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductionCounts {
    /// Words (non-punctuation terminals).
    pub w: usize,
    /// Sentences (trees).
    pub s: usize,
    /// Clauses.
    pub c: usize,
    /// T-units.
    pub t: usize,
    /// Complex T-units.
    pub ct: usize,
    /// Dependent clauses.
    pub dc: usize,
    /// Coordinate phrases.
    pub cp: usize,
    /// Complex nominals.
    pub cn: usize,
    /// Verb phrases.
    pub vp: usize,
}

impl ProductionCounts {
    pub const NAMES: [&'static str; 9] = ["W", "S", "C", "T", "CT", "DC", "CP", "CN", "VP"];

    pub fn as_array(&self) -> [usize; 9] {
        [
            self.w, self.s, self.c, self.t, self.ct, self.dc, self.cp, self.cn, self.vp,
        ]
    }
}

impl Add for ProductionCounts {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            w: self.w + o.w,
            s: self.s + o.s,
            c: self.c + o.c,
            t: self.t + o.t,
            ct: self.ct + o.ct,
            dc: self.dc + o.dc,
            cp: self.cp + o.cp,
            cn: self.cn + o.cn,
            vp: self.vp + o.vp,
        }
    }
}

impl std::iter::Sum for ProductionCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

const FINITE: [&str; 4] = ["MD", "VBZ", "VBP", "VBD"];
const CLAUSAL: [&str; 3] = ["S", "SINV", "SQ"];
const T_LABELS: [&str; 4] = ["S", "SBARQ", "SINV", "SQ"];
const PUNCT_TAGS: [&str; 12] = [
    ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "-LCB-", "-RCB-", "HYPH", "NFP", "-NONE-",
];

/// Flattened tree with parent links.
struct Arena {
    labels: Vec<String>,
    leaf: Vec<bool>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl Arena {
    fn build(tree: &ParseTree) -> Self {
        let mut a = Arena {
            labels: Vec::new(),
            leaf: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
        };
        if tree.label() == "ROOT" && !matches!(tree, ParseTree::Leaf(_)) {
            a.push(tree, None);
        } else {
            let root = a.alloc("ROOT".into(), false, None);
            let child = a.push(tree, Some(root));
            a.children[root].push(child);
        }
        a
    }

    fn alloc(&mut self, label: String, leaf: bool, parent: Option<usize>) -> usize {
        self.labels.push(label);
        self.leaf.push(leaf);
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.labels.len() - 1
    }

    fn push(&mut self, t: &ParseTree, parent: Option<usize>) -> usize {
        match t {
            ParseTree::Leaf(w) => self.alloc(w.clone(), true, parent),
            ParseTree::Node { label, children } => {
                let id = self.alloc(basic_category(label).to_string(), false, parent);
                for c in children {
                    let cid = self.push(c, Some(id));
                    self.children[id].push(cid);
                }
                id
            }
        }
    }

    fn len(&self) -> usize {
        self.labels.len()
    }

    fn is(&self, i: usize, set: &[&str]) -> bool {
        !self.leaf[i] && set.contains(&self.labels[i].as_str())
    }

    fn label_is(&self, i: usize, l: &str) -> bool {
        !self.leaf[i] && self.labels[i] == l
    }

    fn parent_is(&self, i: usize, set: &[&str]) -> bool {
        self.parent[i].is_some_and(|p| self.is(p, set))
    }

    fn has_child(&self, i: usize, pred: impl Fn(usize) -> bool) -> bool {
        self.children[i].iter().any(|&c| pred(c))
    }

    fn descendants(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = self.children[i].iter().rev().copied().collect();
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.children[n].iter().rev());
        }
        out
    }

    fn ancestors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(self.parent[i], move |&p| self.parent[p])
    }

    fn sisters(&self, i: usize) -> (&[usize], usize) {
        let p = self.parent[i].expect("sisters of the root");
        let sibs = &self.children[p];
        let pos = sibs.iter().position(|&c| c == i).expect("child of parent");
        (sibs, pos)
    }

    fn right_sister(&self, i: usize) -> Option<usize> {
        self.parent[i]?;
        let (sibs, pos) = self.sisters(i);
        sibs.get(pos + 1).copied()
    }

    fn head(&self, i: usize) -> Option<usize> {
        let kids = &self.children[i];
        if self.leaf[i] || kids.is_empty() {
            return None;
        }
        let priority: &[&str] = match self.labels[i].as_str() {
            "S" => &["TO", "IN", "VP", "S", "SBAR", "ADJP", "UCP", "NP"],
            "SINV" => &["VBZ", "VBD", "VBP", "VB", "MD", "VP", "S", "SINV", "ADJP", "NP"],
            "SQ" => &["VBZ", "VBD", "VBP", "VB", "MD", "VP", "SQ"],
            "SBAR" => &[
                "WHNP", "WHPP", "WHADVP", "WHADJP", "IN", "DT", "S", "SQ", "SINV", "SBAR", "FRAG",
            ],
            "VP" => &[
                "TO", "VBD", "VBN", "MD", "VBZ", "VB", "VBG", "VBP", "VP", "ADJP", "NN", "NNS",
                "NP",
            ],
            _ => &[],
        };
        for cat in priority {
            if let Some(&c) = kids.iter().find(|&&c| self.label_is(c, cat)) {
                return Some(c);
            }
        }
        Some(kids[0])
    }

    fn headed_by(&self, i: usize, set: &[&str]) -> bool {
        self.head(i).is_some_and(|h| self.is(h, set))
    }

    fn is_clause(&self, i: usize) -> bool {
        if !self.is(i, &CLAUSAL) {
            return false;
        }
        let imperative = self.parent_is(i, &["ROOT"])
            && self.children[i]
                .first()
                .is_some_and(|&c| self.label_is(c, "VP") && self.headed_by(c, &["VB"]));
        imperative
            || self.headed_by(i, &FINITE)
            || self.has_child(i, |c| {
                self.label_is(c, "VP")
                    && (self.headed_by(c, &FINITE)
                        || (self.has_child(c, |g| self.label_is(g, "CC"))
                            && self.has_child(c, |g| {
                                self.label_is(g, "VP") && self.headed_by(g, &FINITE)
                            })))
            })
    }

    fn is_t_candidate(&self, i: usize) -> bool {
        if !self.is(i, &T_LABELS) {
            return false;
        }
        if self.parent_is(i, &["ROOT"]) {
            return true;
        }
        let (sibs, pos) = self.sisters(i);
        sibs[..pos].iter().any(|&s| self.is(s, &T_LABELS))
            && !self.ancestors(i).any(|a| self.is(a, &["SBAR", "VP"]))
    }

    fn nearest_candidate(&self, i: usize, cand: &[bool]) -> Option<usize> {
        std::iter::once(i)
            .chain(self.ancestors(i))
            .find(|&a| cand[a])
    }

    fn is_word(&self, i: usize) -> bool {
        if !self.leaf[i] {
            return false;
        }
        match self.parent[i] {
            Some(p) if self.is(p, &PUNCT_TAGS) => false,
            _ => !self.labels[i].chars().all(|c| c.is_ascii_punctuation()),
        }
    }

    fn is_complex_nominal(&self, i: usize) -> bool {
        match self.labels[i].as_str() {
            _ if self.leaf[i] => false,
            "NP" => {
                if self.parent_is(i, &["NP"]) {
                    return false;
                }
                let desc = self.descendants(i);
                desc.iter()
                    .any(|&d| self.is(d, &["JJ", "POS", "PP", "S", "VBG"]))
                    || desc.iter().any(|&d| {
                        self.label_is(d, "NP") && {
                            let (sibs, pos) = self.sisters(d);
                            sibs[pos + 1..].iter().any(|&s| self.label_is(s, "NP"))
                                && !sibs.get(pos + 1).is_some_and(|&s| self.label_is(s, "CC"))
                        }
                    })
            }
            "SBAR" => {
                let head_ok = self.head(i).is_some_and(|h| {
                    self.label_is(h, "WHNP")
                        || (self.label_is(h, "IN")
                            && self.has_child(h, |l| {
                                self.leaf[l]
                                    && matches!(
                                        self.labels[l].as_str(),
                                        "That" | "that" | "For" | "for"
                                    )
                            }))
                }) || self.children[i]
                    .first()
                    .is_some_and(|&c| self.label_is(c, "S"));
                let place_ok = self.right_sister(i).is_some_and(|s| self.label_is(s, "VP"))
                    || self.parent_is(i, &["VP"]);
                head_ok && place_ok
            }
            "S" => {
                self.has_child(i, |c| self.label_is(c, "VP") && self.headed_by(c, &["VBG", "TO"]))
                    && self.right_sister(i).is_some_and(|s| self.label_is(s, "VP"))
            }
            _ => false,
        }
    }

    fn is_verb_phrase(&self, i: usize) -> bool {
        if self.label_is(i, "VP") {
            return self.parent_is(i, &CLAUSAL);
        }
        self.is(i, &FINITE)
            && self.parent[i].is_some_and(|p| {
                self.label_is(p, "SQ") && !self.has_child(p, |c| self.label_is(c, "VP"))
            })
    }

    fn counts(&self) -> ProductionCounts {
        let n = self.len();
        let clause: Vec<bool> = (0..n).map(|i| self.is_clause(i)).collect();
        let cand: Vec<bool> = (0..n).map(|i| self.is_t_candidate(i)).collect();

        let root = 0;
        let fragments = self.children[root]
            .iter()
            .filter(|&&c| self.label_is(c, "FRAG") && !self.descendants(c).iter().any(|&d| clause[d]))
            .count();

        let mut owns_clause = vec![false; n];
        for i in (0..n).filter(|&i| clause[i]) {
            if let Some(o) = self.nearest_candidate(i, &cand) {
                owns_clause[o] = true;
            }
        }

        let dc_nodes: Vec<usize> = (0..n)
            .filter(|&i| self.label_is(i, "SBAR") && self.has_child(i, |c| clause[c]))
            .collect();
        let mut complex = vec![false; n];
        for &d in &dc_nodes {
            if let Some(o) = self.ancestors(d).find(|&a| cand[a]) {
                if owns_clause[o] {
                    complex[o] = true;
                }
            }
        }

        ProductionCounts {
            w: (0..n).filter(|&i| self.is_word(i)).count(),
            s: 1,
            c: clause.iter().filter(|&&b| b).count() + fragments,
            t: owns_clause.iter().filter(|&&b| b).count() + fragments,
            ct: complex.iter().filter(|&&b| b).count(),
            dc: dc_nodes.len(),
            cp: (0..n)
                .filter(|&i| {
                    self.is(i, &["ADJP", "ADVP", "NP", "VP"])
                        && self.has_child(i, |c| self.label_is(c, "CC"))
                })
                .count(),
            cn: (0..n).filter(|&i| self.is_complex_nominal(i)).count(),
            vp: (0..n).filter(|&i| self.is_verb_phrase(i)).count(),
        }
    }
}

/// Label up to the first function-tag separator; labels that start with `-`
/// (such as `-LRB-`) are kept whole.
fn basic_category(label: &str) -> &str {
    if label.starts_with('-') {
        return label;
    }
    label
        .find(['-', '='])
        .map_or(label, |i| &label[..i])
}

/// Counts of one sentence tree.
pub fn count_tree(tree: &ParseTree) -> ProductionCounts {
    Arena::build(tree).counts()
}

/// Sums per-tree counts; `S` is the number of trees.
pub fn count_units(trees: &[ParseTree]) -> ProductionCounts {
    trees.iter().map(count_tree).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synco::parse_bracketed;

    fn counts(s: &str) -> ProductionCounts {
        count_units(&parse_bracketed(s).unwrap())
    }

    #[test]
    fn simple_declarative() {
        let c = counts("(ROOT (S (NP (DT The) (NN dog)) (VP (VBD barked)) (. .)))");
        assert_eq!((c.w, c.s, c.c, c.t, c.dc, c.ct), (3, 1, 1, 1, 0, 0));
        assert_eq!(c.vp, 1);
    }

    #[test]
    fn bare_s_is_wrapped() {
        let a = counts("(S (NP (DT The) (NN dog)) (VP (VBD barked)) (. .))");
        let b = counts("(ROOT (S (NP (DT The) (NN dog)) (VP (VBD barked)) (. .)))");
        assert_eq!(a, b);
    }

    #[test]
    fn complement_clause() {
        let c = counts(
            "(ROOT (S (NP (PRP I)) (VP (VBP know) (SBAR (IN that) (S (NP (PRP he)) (VP (VBD left))))) (. .)))",
        );
        assert_eq!((c.w, c.c, c.dc, c.t, c.ct), (5, 2, 1, 1, 1));
        // The that-clause sits under VP, so it is also a complex nominal.
        assert_eq!(c.cn, 1);
    }

    #[test]
    fn coordinated_main_clauses() {
        let c = counts(
            "(ROOT (S (S (NP (PRP I)) (VP (VBD came))) (CC and) (S (NP (PRP I)) (VP (VBD saw))) (. .)))",
        );
        assert_eq!((c.s, c.c, c.t, c.dc, c.ct), (1, 2, 2, 0, 0));
    }

    #[test]
    fn fragment_counts_once() {
        let c = counts("(ROOT (FRAG (NP (DT the) (JJ big) (NN camel)) (. .)))");
        assert_eq!((c.w, c.c, c.t), (3, 1, 1));
        assert_eq!(c.cn, 1);
    }

    #[test]
    fn function_tags_ignored() {
        assert_eq!(basic_category("NP-SBJ"), "NP");
        assert_eq!(basic_category("-LRB-"), "-LRB-");
        assert_eq!(basic_category("S=2"), "S");
    }
}
