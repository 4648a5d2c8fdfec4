//! Finite sets and relations, with just enough structure to wire diagrams:
//! products (tensor) flatten left-associatively, the unit object is the
//! empty product with a single empty tuple, and every object carries the
//! canonical copy/delete morphisms.
//!
//! Elements are string labels; a set's canonical order is the sorted label
//! order, and equality of sets is label-set equality. Relations store their
//! pairs as index tuples against that canonical order, so composition,
//! tensoring and comparison are exact and deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// One coordinate per factor, each an index into that factor's elements.
pub type Tup = Vec<u16>;

/// A named finite set of distinct string labels, kept sorted.
///
/// Equality and hashing ignore the name: two sets with the same labels are
/// the same object no matter what a document calls them.
#[derive(Debug, Clone)]
pub struct FiniteSet {
    name: String,
    elements: Vec<String>,
}

fn label_ok(label: &str) -> bool {
    !label.is_empty()
        && !label
            .chars()
            .any(|ch| ch.is_whitespace() || ch == ',' || ch == '(' || ch == ')' || ch == '#' || ch == '=')
}

impl FiniteSet {
    /// Sorts and validates the labels. Labels must be non-empty, pairwise
    /// distinct, and free of whitespace and the `( ) , # =` punctuation the
    /// file format reserves.
    pub fn new(name: impl Into<String>, mut elements: Vec<String>) -> Result<Arc<FiniteSet>> {
        let name = name.into();
        if elements.is_empty() {
            return Err(Error::InvalidSet(format!("set {name:?} has no elements")));
        }
        if elements.len() > u16::MAX as usize {
            return Err(Error::InvalidSet(format!("set {name:?} is too large")));
        }
        for e in &elements {
            if !label_ok(e) {
                return Err(Error::InvalidSet(format!("bad element label {e:?} in set {name:?}")));
            }
        }
        elements.sort();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            let dup = elements.windows(2).find(|w| w[0] == w[1]).unwrap()[0].clone();
            return Err(Error::InvalidSet(format!("duplicate element {dup:?} in set {name:?}")));
        }
        Ok(Arc::new(FiniteSet { name, elements }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self, idx: u16) -> &str {
        &self.elements[idx as usize]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().map(|s| s.as_str())
    }

    pub fn index_of(&self, label: &str) -> Option<u16> {
        self.elements.binary_search_by(|e| e.as_str().cmp(label)).ok().map(|i| i as u16)
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}
impl Eq for FiniteSet {}

/// A finite product of sets. Tensoring concatenates factor lists, so
/// `(A ⊗ B) ⊗ C` and `A ⊗ (B ⊗ C)` are the same object; the unit is the
/// empty factor list, whose only element is the empty tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    factors: Vec<Arc<FiniteSet>>,
}

impl Product {
    pub fn unit() -> Product {
        Product { factors: Vec::new() }
    }

    pub fn of(set: &Arc<FiniteSet>) -> Product {
        Product { factors: vec![Arc::clone(set)] }
    }

    pub fn from_factors(factors: Vec<Arc<FiniteSet>>) -> Product {
        Product { factors }
    }

    pub fn tensor(&self, other: &Product) -> Product {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Product { factors }
    }

    pub fn factors(&self) -> &[Arc<FiniteSet>] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn card(&self) -> usize {
        self.factors.iter().map(|f| f.len()).product()
    }

    pub fn contains(&self, tup: &[u16]) -> bool {
        tup.len() == self.factors.len()
            && tup.iter().zip(&self.factors).all(|(&i, f)| (i as usize) < f.len())
    }

    /// All tuples in lexicographic index order (the canonical order).
    pub fn elements(&self) -> Vec<Tup> {
        let mut out = Vec::with_capacity(self.card());
        let mut cur: Tup = vec![0; self.factors.len()];
        if self.factors.iter().any(|f| f.is_empty()) {
            return out;
        }
        loop {
            out.push(cur.clone());
            let mut k = self.factors.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if (cur[k] as usize) + 1 < self.factors[k].len() {
                    cur[k] += 1;
                    for c in cur.iter_mut().skip(k + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }

    pub fn render(&self, tup: &[u16]) -> String {
        let inner: Vec<&str> =
            tup.iter().zip(&self.factors).map(|(&i, f)| f.label(i)).collect();
        format!("({})", inner.join(","))
    }

    /// Renders a one-coordinate tuple as its bare label, longer ones in
    /// parenthesised form. Good for report tables.
    pub fn render_short(&self, tup: &[u16]) -> String {
        if tup.len() == 1 {
            self.factors[0].label(tup[0]).to_string()
        } else {
            self.render(tup)
        }
    }

    pub fn describe(&self) -> String {
        if self.factors.is_empty() {
            "I".to_string()
        } else {
            self.factors.iter().map(|f| f.name().to_string()).collect::<Vec<_>>().join("*")
        }
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// How a relation behaves on its domain. Recomputed from the pairs on every
/// construction; never trusted from input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    Relation,
    PartialFunction,
    TotalFunction,
}

impl fmt::Display for MorphismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MorphismKind::Relation => "relation",
            MorphismKind::PartialFunction => "partial-function",
            MorphismKind::TotalFunction => "total-function",
        };
        write!(f, "{s}")
    }
}

/// A relation between two products, stored extensionally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rel {
    dom: Product,
    cod: Product,
    pairs: BTreeSet<(Tup, Tup)>,
    kind: MorphismKind,
}

fn compute_kind(dom: &Product, pairs: &BTreeSet<(Tup, Tup)>) -> MorphismKind {
    let mut per: BTreeMap<&Tup, usize> = BTreeMap::new();
    for (x, _) in pairs {
        *per.entry(x).or_insert(0) += 1;
    }
    if per.values().any(|&n| n > 1) {
        MorphismKind::Relation
    } else if per.len() == dom.card() {
        MorphismKind::TotalFunction
    } else {
        MorphismKind::PartialFunction
    }
}

impl Rel {
    pub fn from_pairs(dom: Product, cod: Product, pairs: BTreeSet<(Tup, Tup)>) -> Result<Rel> {
        for (x, y) in &pairs {
            if !dom.contains(x) {
                return Err(Error::InvalidPair(format!(
                    "left tuple {x:?} does not lie in {}",
                    dom.describe()
                )));
            }
            if !cod.contains(y) {
                return Err(Error::InvalidPair(format!(
                    "right tuple {y:?} does not lie in {}",
                    cod.describe()
                )));
            }
        }
        let kind = compute_kind(&dom, &pairs);
        Ok(Rel { dom, cod, pairs, kind })
    }

    /// Builds a relation from a function on tuples; `None` leaves the input
    /// outside the domain of definition.
    pub fn from_fn(
        dom: Product,
        cod: Product,
        f: impl Fn(&[u16]) -> Option<Tup>,
    ) -> Result<Rel> {
        let mut pairs = BTreeSet::new();
        for x in dom.elements() {
            if let Some(y) = f(&x) {
                pairs.insert((x, y));
            }
        }
        Rel::from_pairs(dom, cod, pairs)
    }

    pub fn empty(dom: Product, cod: Product) -> Rel {
        let kind = compute_kind(&dom, &BTreeSet::new());
        Rel { dom, cod, pairs: BTreeSet::new(), kind }
    }

    pub fn identity(obj: &Product) -> Rel {
        let pairs = obj.elements().into_iter().map(|x| (x.clone(), x)).collect();
        Rel { dom: obj.clone(), cod: obj.clone(), kind: MorphismKind::TotalFunction, pairs }
    }

    /// copy: A -> A ⊗ A, the diagonal.
    pub fn copy(obj: &Product) -> Rel {
        let cod = obj.tensor(obj);
        let pairs = obj
            .elements()
            .into_iter()
            .map(|x| {
                let mut y = x.clone();
                y.extend_from_slice(&x);
                (x, y)
            })
            .collect();
        Rel { dom: obj.clone(), cod, kind: MorphismKind::TotalFunction, pairs }
    }

    /// delete: A -> I, onto the empty tuple.
    pub fn delete(obj: &Product) -> Rel {
        let pairs = obj.elements().into_iter().map(|x| (x, Vec::new())).collect();
        Rel { dom: obj.clone(), cod: Product::unit(), kind: MorphismKind::TotalFunction, pairs }
    }

    /// swap: A ⊗ B -> B ⊗ A.
    pub fn swap(a: &Product, b: &Product) -> Rel {
        let dom = a.tensor(b);
        let cod = b.tensor(a);
        let na = a.arity();
        let pairs = dom
            .elements()
            .into_iter()
            .map(|x| {
                let mut y: Tup = x[na..].to_vec();
                y.extend_from_slice(&x[..na]);
                (x, y)
            })
            .collect();
        Rel { dom, cod, kind: MorphismKind::TotalFunction, pairs }
    }

    /// Projection onto a subset of coordinates, in the order given.
    pub fn projection(obj: &Product, keep: &[usize]) -> Result<Rel> {
        for &k in keep {
            if k >= obj.arity() {
                return Err(Error::TypeMismatch(format!(
                    "projection index {k} out of range for {}",
                    obj.describe()
                )));
            }
        }
        let cod = Product::from_factors(keep.iter().map(|&k| Arc::clone(&obj.factors()[k])).collect());
        let pairs = obj
            .elements()
            .into_iter()
            .map(|x| {
                let y: Tup = keep.iter().map(|&k| x[k]).collect();
                (x, y)
            })
            .collect();
        Ok(Rel { dom: obj.clone(), cod, kind: MorphismKind::TotalFunction, pairs })
    }

    /// Pairing ⟨f,g⟩: X -> A ⊗ B of two morphisms with a shared domain.
    pub fn pairing(f: &Rel, g: &Rel) -> Result<Rel> {
        if f.dom != g.dom {
            return Err(Error::DomainMismatch {
                op: "pairing",
                detail: format!("{} vs {}", f.dom.describe(), g.dom.describe()),
            });
        }
        let cod = f.cod.tensor(&g.cod);
        let mut by_dom: BTreeMap<&Tup, Vec<&Tup>> = BTreeMap::new();
        for (x, y) in &g.pairs {
            by_dom.entry(x).or_default().push(y);
        }
        let mut pairs = BTreeSet::new();
        for (x, a) in &f.pairs {
            if let Some(bs) = by_dom.get(x) {
                for b in bs {
                    let mut y = a.clone();
                    y.extend_from_slice(b);
                    pairs.insert((x.clone(), y));
                }
            }
        }
        let kind = compute_kind(&f.dom, &pairs);
        Ok(Rel { dom: f.dom.clone(), cod, pairs, kind })
    }

    pub fn dom(&self) -> &Product {
        &self.dom
    }

    pub fn cod(&self) -> &Product {
        &self.cod
    }

    pub fn kind(&self) -> MorphismKind {
        self.kind
    }

    pub fn pairs(&self) -> &BTreeSet<(Tup, Tup)> {
        &self.pairs
    }

    pub fn is_total_function(&self) -> bool {
        self.kind == MorphismKind::TotalFunction
    }

    /// The set of outputs related to `x`.
    pub fn apply(&self, x: &[u16]) -> BTreeSet<Tup> {
        self.pairs
            .range((x.to_vec(), Vec::new())..)
            .take_while(|(a, _)| a.as_slice() == x)
            .map(|(_, b)| b.clone())
            .collect()
    }

    /// The unique output for a total function; errors on anything else.
    pub fn apply_fn(&self, x: &[u16]) -> Result<Tup> {
        let ys = self.apply(x);
        match ys.len() {
            1 => Ok(ys.into_iter().next().unwrap()),
            0 => Err(Error::TypeMismatch(format!(
                "no value at {} (expected a total function)",
                self.dom.render(x)
            ))),
            n => Err(Error::TypeMismatch(format!(
                "{n} values at {} (expected a function)",
                self.dom.render(x)
            ))),
        }
    }

    /// Distinct output tuples.
    pub fn image(&self) -> BTreeSet<Tup> {
        self.pairs.iter().map(|(_, y)| y.clone()).collect()
    }

    /// Relational composition; cod(self) must equal dom(other).
    pub fn compose(&self, other: &Rel) -> Result<Rel> {
        if self.cod != other.dom {
            return Err(Error::DomainMismatch {
                op: "compose",
                detail: format!(
                    "cod {} of the first morphism differs from dom {} of the second",
                    self.cod.describe(),
                    other.dom.describe()
                ),
            });
        }
        let mut by_dom: BTreeMap<&Tup, Vec<&Tup>> = BTreeMap::new();
        for (x, y) in &other.pairs {
            by_dom.entry(x).or_default().push(y);
        }
        let mut pairs = BTreeSet::new();
        for (x, mid) in &self.pairs {
            if let Some(ys) = by_dom.get(mid) {
                for y in ys {
                    pairs.insert((x.clone(), (*y).clone()));
                }
            }
        }
        let kind = compute_kind(&self.dom, &pairs);
        Ok(Rel { dom: self.dom.clone(), cod: other.cod.clone(), pairs, kind })
    }

    /// Tensor of morphisms: acts coordinate-blockwise on the flattened
    /// product.
    pub fn tensor(&self, other: &Rel) -> Rel {
        let dom = self.dom.tensor(&other.dom);
        let cod = self.cod.tensor(&other.cod);
        let mut pairs = BTreeSet::new();
        for (x1, y1) in &self.pairs {
            for (x2, y2) in &other.pairs {
                let mut x = x1.clone();
                x.extend_from_slice(x2);
                let mut y = y1.clone();
                y.extend_from_slice(y2);
                pairs.insert((x, y));
            }
        }
        let kind = compute_kind(&dom, &pairs);
        Rel { dom, cod, pairs, kind }
    }

    /// True when every pair of `other` is a pair of `self` (same shape
    /// required).
    pub fn subsumes(&self, other: &Rel) -> Result<bool> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::DomainMismatch {
                op: "subsumes",
                detail: format!(
                    "{} -> {} vs {} -> {}",
                    self.dom.describe(),
                    self.cod.describe(),
                    other.dom.describe(),
                    other.cod.describe()
                ),
            });
        }
        Ok(other.pairs.is_subset(&self.pairs))
    }

    /// Extensional equality on same-shaped morphisms.
    pub fn same(&self, other: &Rel) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.pairs == other.pairs
    }

    /// The converse relation.
    pub fn transpose(&self) -> Rel {
        let pairs: BTreeSet<(Tup, Tup)> =
            self.pairs.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        let kind = compute_kind(&self.cod, &pairs);
        Rel { dom: self.cod.clone(), cod: self.dom.clone(), pairs, kind }
    }
}

/// One comonoid law, named.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdLaw {
    CopyCoassociative,
    CopyCocommutative,
    CounitLeft,
    CounitRight,
    CopyDeleteTotal,
}

impl fmt::Display for CdLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CdLaw::CopyCoassociative => "copy is coassociative",
            CdLaw::CopyCocommutative => "copy is cocommutative",
            CdLaw::CounitLeft => "delete is a left counit for copy",
            CdLaw::CounitRight => "delete is a right counit for copy",
            CdLaw::CopyDeleteTotal => "copy and delete are total functions",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct LawCheck {
    pub law: CdLaw,
    pub passed: bool,
    /// Label of a domain element witnessing the failure, if any.
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub object: String,
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn first_difference(obj: &Product, lhs: &Rel, rhs: &Rel) -> Option<String> {
    for x in obj.elements() {
        if lhs.apply(&x) != rhs.apply(&x) {
            return Some(obj.render_short(&x));
        }
    }
    None
}

/// Checks the comonoid laws for a supplied copy/delete pair over `obj`.
/// Used on generated structure (always green) and on hand-built morphisms,
/// where a corrupted table yields the violating element.
pub fn check_comonoid(obj: &Product, copy: &Rel, delete: &Rel) -> Result<LawReport> {
    let expect_copy = (obj.clone(), obj.tensor(obj));
    if (copy.dom(), copy.cod()) != (&expect_copy.0, &expect_copy.1) {
        return Err(Error::TypeMismatch(format!(
            "copy must have shape {} -> {}",
            expect_copy.0.describe(),
            expect_copy.1.tensor(&Product::unit()).describe()
        )));
    }
    if (delete.dom(), delete.cod()) != (obj, &Product::unit()) {
        return Err(Error::TypeMismatch(format!(
            "delete must have shape {} -> I",
            obj.describe()
        )));
    }
    let id = Rel::identity(obj);
    let mut checks = Vec::new();

    let left = copy.compose(&copy.tensor(&id))?;
    let right = copy.compose(&id.tensor(copy))?;
    let ce = first_difference(obj, &left, &right);
    checks.push(LawCheck { law: CdLaw::CopyCoassociative, passed: ce.is_none(), counterexample: ce });

    let swapped = copy.compose(&Rel::swap(obj, obj))?;
    let ce = first_difference(obj, &swapped, copy);
    checks.push(LawCheck { law: CdLaw::CopyCocommutative, passed: ce.is_none(), counterexample: ce });

    let left_counit = copy.compose(&delete.tensor(&id))?;
    let ce = first_difference(obj, &left_counit, &id);
    checks.push(LawCheck { law: CdLaw::CounitLeft, passed: ce.is_none(), counterexample: ce });

    let right_counit = copy.compose(&id.tensor(delete))?;
    let ce = first_difference(obj, &right_counit, &id);
    checks.push(LawCheck { law: CdLaw::CounitRight, passed: ce.is_none(), counterexample: ce });

    let total = copy.is_total_function() && delete.is_total_function();
    let ce = if total {
        None
    } else {
        obj.elements()
            .into_iter()
            .find(|x| copy.apply(x).len() != 1 || delete.apply(x).len() != 1)
            .map(|x| obj.render_short(&x))
    };
    checks.push(LawCheck { law: CdLaw::CopyDeleteTotal, passed: total, counterexample: ce });

    Ok(LawReport { object: obj.describe(), checks })
}

/// Builds the canonical copy/delete pair on `set` and checks all comonoid
/// laws against it.
pub fn check_cd_laws(set: &Arc<FiniteSet>) -> LawReport {
    let obj = Product::of(set);
    let copy = Rel::copy(&obj);
    let delete = Rel::delete(&obj);
    check_comonoid(&obj, &copy, &delete).expect("generated comonoid structure is well-shaped")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(name: &str, elems: &[&str]) -> Arc<FiniteSet> {
        FiniteSet::new(name, elems.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn rel_of(dom: &Product, cod: &Product, pairs: &[(&[u16], &[u16])]) -> Rel {
        let set: BTreeSet<(Tup, Tup)> =
            pairs.iter().map(|(a, b)| (a.to_vec(), b.to_vec())).collect();
        Rel::from_pairs(dom.clone(), cod.clone(), set).unwrap()
    }

    #[test]
    fn sets_sort_and_reject_duplicates() {
        let a = set("A", &["y", "x"]);
        assert_eq!(a.label(0), "x");
        assert_eq!(a.index_of("y"), Some(1));
        assert!(FiniteSet::new("A", vec!["x".into(), "x".into()]).is_err());
        assert!(FiniteSet::new("A", vec!["a b".into()]).is_err());
        assert!(FiniteSet::new("A", vec![]).is_err());
    }

    #[test]
    fn set_equality_ignores_name() {
        let a = set("A", &["x", "y"]);
        let b = set("B", &["y", "x"]);
        assert_eq!(*a, *b);
    }

    #[test]
    fn unit_product_has_one_empty_tuple() {
        let unit = Product::unit();
        assert_eq!(unit.card(), 1);
        assert_eq!(unit.elements(), vec![Vec::<u16>::new()]);
    }

    #[test]
    fn tensor_flattens() {
        let a = set("A", &["a0", "a1"]);
        let b = set("B", &["b0"]);
        let c = set("C", &["c0", "c1", "c2"]);
        let ab = Product::of(&a).tensor(&Product::of(&b));
        let left = ab.tensor(&Product::of(&c));
        let right = Product::of(&a).tensor(&Product::of(&b).tensor(&Product::of(&c)));
        assert_eq!(left, right);
        assert_eq!(left.arity(), 3);
        assert_eq!(left.card(), 6);
        let unit_left = Product::unit().tensor(&Product::of(&a));
        assert_eq!(unit_left, Product::of(&a));
    }

    /// Composition against an independent triple-enumeration oracle.
    #[test]
    fn compose_matches_triple_enumeration() {
        let a = Product::of(&set("A", &["a0", "a1", "a2"]));
        let b = Product::of(&set("B", &["b0", "b1"]));
        let c = Product::of(&set("C", &["c0", "c1", "c2"]));
        let f = rel_of(&a, &b, &[(&[0], &[0]), (&[0], &[1]), (&[2], &[1])]);
        let g = rel_of(&b, &c, &[(&[0], &[2]), (&[1], &[0]), (&[1], &[2])]);
        let fg = f.compose(&g).unwrap();

        let mut oracle = BTreeSet::new();
        for x in a.elements() {
            for m in b.elements() {
                for y in c.elements() {
                    if f.pairs().contains(&(x.clone(), m.clone()))
                        && g.pairs().contains(&(m.clone(), y.clone()))
                    {
                        oracle.insert((x.clone(), y.clone()));
                    }
                }
            }
        }
        assert_eq!(fg.pairs(), &oracle);
        assert_eq!(fg.kind(), MorphismKind::Relation);
    }

    #[test]
    fn compose_rejects_mismatched_shapes() {
        let a = Product::of(&set("A", &["a"]));
        let b = Product::of(&set("B", &["b"]));
        let f = Rel::identity(&a);
        let g = Rel::identity(&b);
        assert!(matches!(f.compose(&g), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn kind_is_recomputed() {
        let a = Product::of(&set("A", &["a0", "a1"]));
        let b = Product::of(&set("B", &["b0", "b1"]));
        let total = rel_of(&a, &b, &[(&[0], &[0]), (&[1], &[1])]);
        assert_eq!(total.kind(), MorphismKind::TotalFunction);
        let partial = rel_of(&a, &b, &[(&[0], &[0])]);
        assert_eq!(partial.kind(), MorphismKind::PartialFunction);
        let relational = rel_of(&a, &b, &[(&[0], &[0]), (&[0], &[1])]);
        assert_eq!(relational.kind(), MorphismKind::Relation);
        let both = total.compose(&Rel::identity(&b)).unwrap();
        assert_eq!(both.kind(), MorphismKind::TotalFunction);
    }

    #[test]
    fn tensor_of_morphisms_is_blockwise() {
        let a = Product::of(&set("A", &["a0", "a1"]));
        let b = Product::of(&set("B", &["b0", "b1"]));
        let f = rel_of(&a, &a, &[(&[0], &[1]), (&[1], &[0])]);
        let g = rel_of(&b, &b, &[(&[0], &[0])]);
        let fg = f.tensor(&g);
        assert!(fg.pairs().contains(&(vec![0, 0], vec![1, 0])));
        assert!(fg.pairs().contains(&(vec![1, 0], vec![0, 0])));
        assert_eq!(fg.pairs().len(), 2);
        assert_eq!(fg.kind(), MorphismKind::PartialFunction);
    }

    /// Functoriality: (f2∘g2) ⊗ (f1∘g1) = (f2⊗f1) ∘ (g2⊗g1), checked by
    /// direct enumeration on small random-ish relations.
    #[test]
    fn tensor_compose_interchange() {
        let a = Product::of(&set("A", &["a0", "a1"]));
        let b = Product::of(&set("B", &["b0", "b1", "b2"]));
        let f1 = rel_of(&a, &b, &[(&[0], &[2]), (&[1], &[0]), (&[1], &[1])]);
        let g1 = rel_of(&b, &a, &[(&[0], &[0]), (&[2], &[1])]);
        let f2 = rel_of(&b, &a, &[(&[1], &[1]), (&[2], &[0])]);
        let g2 = rel_of(&a, &b, &[(&[0], &[1]), (&[1], &[1])]);
        let lhs = f1.compose(&g1).unwrap().tensor(&f2.compose(&g2).unwrap());
        let rhs = f1.tensor(&f2).compose(&g1.tensor(&g2)).unwrap();
        assert!(lhs.same(&rhs));
    }

    #[test]
    fn subsumes_is_inclusion() {
        let a = Product::of(&set("A", &["a0", "a1"]));
        let big = rel_of(&a, &a, &[(&[0], &[0]), (&[0], &[1]), (&[1], &[1])]);
        let small = rel_of(&a, &a, &[(&[0], &[1]), (&[1], &[1])]);
        assert!(big.subsumes(&small).unwrap());
        assert!(!small.subsumes(&big).unwrap());
        assert!(big.subsumes(&big).unwrap());
        let b = Product::of(&set("B", &["x"]));
        assert!(small.subsumes(&Rel::identity(&b)).is_err());
    }

    #[test]
    fn structural_morphisms() {
        let a = set("A", &["0", "1", "2"]);
        let obj = Product::of(&a);
        let copy = Rel::copy(&obj);
        assert!(copy.pairs().contains(&(vec![1], vec![1, 1])));
        let delete = Rel::delete(&obj);
        assert!(delete.pairs().contains(&(vec![2], vec![])));
        let b = set("B", &["x", "y"]);
        let swap = Rel::swap(&Product::of(&a), &Product::of(&b));
        assert!(swap.pairs().contains(&(vec![2, 1], vec![1, 2])));
        let ab = Product::of(&a).tensor(&Product::of(&b));
        let proj = Rel::projection(&ab, &[1]).unwrap();
        assert!(proj.pairs().contains(&(vec![2, 0], vec![0])));
        assert!(Rel::projection(&ab, &[5]).is_err());
    }

    #[test]
    fn pairing_builds_spans() {
        let x = Product::of(&set("X", &["x0", "x1"]));
        let a = Product::of(&set("A", &["a0", "a1"]));
        let f = rel_of(&x, &a, &[(&[0], &[1]), (&[1], &[0])]);
        let g = Rel::identity(&x);
        let fg = Rel::pairing(&f, &g).unwrap();
        assert!(fg.pairs().contains(&(vec![0], vec![1, 0])));
        assert_eq!(fg.pairs().len(), 2);
    }

    #[test]
    fn cd_laws_hold_for_generated_structure() {
        for n in 1..=5 {
            let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let s = FiniteSet::new("S", labels).unwrap();
            let report = check_cd_laws(&s);
            assert!(report.all_passed(), "laws failed on size {n}: {report:?}");
        }
    }

    /// The corrupted copy {0 ↦ (0,1)} on {0,1,2} must fail the counit laws
    /// with witness 0 (and totality with witness 0 as well).
    #[test]
    fn corrupted_copy_fails_counit_with_witness() {
        let a = set("A", &["0", "1", "2"]);
        let obj = Product::of(&a);
        let bad_copy = rel_of(&obj, &obj.tensor(&obj), &[(&[0], &[0, 1])]);
        let delete = Rel::delete(&obj);
        let report = check_comonoid(&obj, &bad_copy, &delete).unwrap();
        assert!(!report.all_passed());
        let counit = report
            .checks
            .iter()
            .find(|c| c.law == CdLaw::CounitLeft)
            .unwrap();
        assert!(!counit.passed);
        assert_eq!(counit.counterexample.as_deref(), Some("0"));
    }

    #[test]
    fn apply_returns_all_partners() {
        let a = Product::of(&set("A", &["a0", "a1"]));
        let r = rel_of(&a, &a, &[(&[0], &[0]), (&[0], &[1])]);
        let out = r.apply(&[0]);
        assert_eq!(out.len(), 2);
        assert!(r.apply(&[1]).is_empty());
        assert!(r.apply_fn(&[0]).is_err());
    }
}
