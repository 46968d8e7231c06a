//! Abstract finite groups from Cayley tables, and matching against structure
//! labels such as `2^3`, `S4`, `A5`, `2.S3` or `2^3.A4`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct AbstractGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl AbstractGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Inconsistent("multiplication table has no identity".into()))?;
        Ok(AbstractGroup { table, identity })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mul(a, b) == self.identity).expect("group elements are invertible")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `order → number of elements of that order`.
    pub fn order_statistics(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for a in 0..self.order() {
            *m.entry(self.element_order(a)).or_insert(0) += 1;
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|a| self.element_order(a)).fold(1, num_integer::lcm)
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|g| self.mul(self.mul(g, a), self.inverse(g))).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &x in set {
            member[x] = true;
        }
        member[self.identity] && set.iter().all(|&a| set.iter().all(|&b| member[self.mul(a, b)]))
    }

    /// All normal subgroups of the given order.
    pub fn normal_subgroups_of_order(&self, size: usize) -> Vec<Vec<usize>> {
        let classes = self.conjugacy_classes();
        let id_class = classes.iter().position(|c| c.contains(&self.identity)).expect("identity has a class");
        let others: Vec<&Vec<usize>> = classes.iter().enumerate().filter(|(i, _)| *i != id_class).map(|(_, c)| c).collect();
        let mut out = Vec::new();
        let mut pick = vec![self.identity];
        self.collect_unions(&others, 0, size, &mut pick, &mut out);
        out
    }

    fn collect_unions(&self, classes: &[&Vec<usize>], from: usize, size: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pick.len() == size {
            if self.is_subgroup(pick) {
                let mut s = pick.clone();
                s.sort_unstable();
                out.push(s);
            }
            return;
        }
        for i in from..classes.len() {
            if pick.len() + classes[i].len() <= size {
                let before = pick.len();
                pick.extend(classes[i].iter().copied());
                self.collect_unions(classes, i + 1, size, pick, out);
                pick.truncate(before);
            }
        }
    }

    pub fn subgroup(&self, set: &[usize]) -> AbstractGroup {
        let index: BTreeMap<usize, usize> = set.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = set.iter().map(|&a| set.iter().map(|&b| index[&self.mul(a, b)]).collect()).collect();
        AbstractGroup::from_table(table).expect("subgroups contain the identity")
    }

    /// `G / N` for a normal subgroup `N`.
    pub fn quotient(&self, normal: &[usize]) -> AbstractGroup {
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &h in normal {
                coset_of[self.mul(g, h)] = c;
            }
        }
        let table = reps.iter().map(|&a| reps.iter().map(|&b| coset_of[self.mul(a, b)]).collect()).collect();
        AbstractGroup::from_table(table).expect("quotients contain the identity coset")
    }

    /// Group of permutations of `{0..k}` (all, or only even ones).
    pub fn permutations(k: usize, even_only: bool) -> AbstractGroup {
        let mut perms = Vec::new();
        permute(&mut (0..k).collect(), 0, &mut perms);
        if even_only {
            perms.retain(|p| parity(p) == 0);
        }
        perms.sort();
        let index: BTreeMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()]).collect())
            .collect();
        AbstractGroup::from_table(table).expect("permutation groups contain the identity")
    }
}

fn permute(v: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == v.len() {
        out.push(v.clone());
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, out);
        v.swap(i, j);
    }
}

fn parity(p: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// Structure label grammar: `n`, `n^m`, `Sk`, `Ak`, `X.Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    Cyclic(usize),
    Elementary { p: usize, m: usize },
    Symmetric(usize),
    Alternating(usize),
    Extension(Box<Label>, Box<Label>),
}

impl Label {
    pub fn parse(text: &str) -> Result<Label> {
        let t: String = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '𝔖' => 'S',
                '𝔄' => 'A',
                _ => c,
            })
            .collect();
        if let Some((a, b)) = t.split_once('.') {
            return Ok(Label::Extension(Box::new(Label::parse(a)?), Box::new(Label::parse(b)?)));
        }
        let bad = || Error::Parse(format!("group label {text:?}"));
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        if let Some(k) = t.strip_prefix('S') {
            return Ok(Label::Symmetric(num(k)?));
        }
        if let Some(k) = t.strip_prefix('A') {
            return Ok(Label::Alternating(num(k)?));
        }
        if let Some((p, m)) = t.split_once('^') {
            return Ok(Label::Elementary { p: num(p)?, m: num(m)? });
        }
        Ok(Label::Cyclic(num(&t)?))
    }

    pub fn order(&self) -> usize {
        match self {
            Label::Cyclic(n) => *n,
            Label::Elementary { p, m } => p.pow(*m as u32),
            Label::Symmetric(k) => (1..=*k).product(),
            Label::Alternating(k) => (1..=*k).product::<usize>() / 2,
            Label::Extension(a, b) => a.order() * b.order(),
        }
    }
}

/// Whether the group fits the label. Atomic labels are compared by order and
/// element-order statistics; an extension `X.Y` needs a normal subgroup
/// matching one factor with quotient matching the other.
pub fn matches_label(g: &AbstractGroup, label: &Label) -> bool {
    if g.order() != label.order() {
        return false;
    }
    match label {
        Label::Cyclic(n) => (0..g.order()).any(|a| g.element_order(a) == *n),
        Label::Elementary { p, .. } => g.is_abelian() && (g.order() == 1 || g.exponent() == *p),
        Label::Symmetric(k) | Label::Alternating(k) => {
            let reference = AbstractGroup::permutations(*k, matches!(label, Label::Alternating(_)));
            g.order_statistics() == reference.order_statistics()
                && g.conjugacy_classes().len() == reference.conjugacy_classes().len()
                && g.is_abelian() == reference.is_abelian()
        }
        Label::Extension(a, b) => extension_matches(g, a, b) || extension_matches(g, b, a),
    }
}

fn extension_matches(g: &AbstractGroup, normal: &Label, quotient: &Label) -> bool {
    g.normal_subgroups_of_order(normal.order())
        .iter()
        .any(|n| matches_label(&g.subgroup(n), normal) && matches_label(&g.quotient(n), quotient))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> AbstractGroup {
        AbstractGroup::from_table((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).unwrap()
    }

    fn product(a: &AbstractGroup, b: &AbstractGroup) -> AbstractGroup {
        let (m, n) = (a.order(), b.order());
        let table = (0..m * n)
            .map(|x| (0..m * n).map(|y| a.mul(x / n, y / n) * n + b.mul(x % n, y % n)).collect())
            .collect();
        AbstractGroup::from_table(table).unwrap()
    }

    #[test]
    fn permutation_groups() {
        let s4 = AbstractGroup::permutations(4, false);
        assert_eq!(s4.order(), 24);
        assert_eq!(s4.order_statistics(), BTreeMap::from([(1, 1), (2, 9), (3, 8), (4, 6)]));
        let a5 = AbstractGroup::permutations(5, true);
        assert_eq!(a5.order_statistics(), BTreeMap::from([(1, 1), (2, 15), (3, 20), (5, 24)]));
        assert!(matches_label(&a5, &Label::parse("A5").unwrap()));
        assert!(!matches_label(&s4, &Label::parse("2^3.3").unwrap()));
        assert!(matches_label(&s4, &Label::parse("A4.2").unwrap()));
    }

    #[test]
    fn abelian_labels() {
        let v = product(&cyclic(2), &cyclic(2));
        assert!(matches_label(&v, &Label::parse("2^2").unwrap()));
        assert!(!matches_label(&cyclic(4), &Label::parse("2^2").unwrap()));
        assert!(matches_label(&cyclic(3), &Label::parse("3").unwrap()));
        let d = product(&cyclic(2), &AbstractGroup::permutations(3, false));
        assert!(matches_label(&d, &Label::parse("2.S3").unwrap()));
        assert!(!matches_label(&d, &Label::parse("A4").unwrap()));
    }

    #[test]
    fn restricted_groups_of_root_lattices() {
        use crate::automorphism::restricted_group;
        use crate::named::parse;
        for (lattice, label) in [("A3", "A4"), ("A1+A2", "S3"), ("A2^2", "2.3^2"), ("D4", "2^3.A4"), ("A1+A3", "S4")] {
            let g = restricted_group(&parse(lattice).unwrap()).unwrap();
            let ag = AbstractGroup::from_table(g.cayley_table()).unwrap();
            assert!(matches_label(&ag, &Label::parse(label).unwrap()), "{lattice} {label}");
        }
    }

    #[test]
    fn label_orders() {
        for (l, n) in [("2", 2), ("2^3", 8), ("S3", 6), ("2.3^2", 18), ("2^3.A4", 96), ("𝔄5", 60)] {
            assert_eq!(Label::parse(l).unwrap().order(), n, "{l}");
        }
    }
}
