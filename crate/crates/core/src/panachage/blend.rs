use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::ext::{h1_basis, yoneda_compose, ExtBetween, YonedaClass};
use crate::linalg::{solve_linear, Mat, Rat, Solution};
use crate::rep::{internal_hom, is_isomorphic, pure_object, w_quotient, w_sub, BasisVector, IsoVerdict, Morphism, RepObject};

/// `L in Ext^1(A, B)` and `N in Ext^1(C, A)` with the weights of `B`, `A`, `C`
/// strictly separated in that order.
#[derive(Clone, Debug)]
pub struct CompatiblePair {
    pub l: ExtBetween,
    pub n: ExtBetween,
}

fn same_object(x: &RepObject, y: &RepObject) -> bool {
    x.same_group(y) && x.basis() == y.basis() && x.actions() == y.actions()
}

impl CompatiblePair {
    pub fn new(l: ExtBetween, n: ExtBetween) -> Result<CompatiblePair> {
        if !same_object(&l.from, &n.to) {
            return Err(Error::Precondition("L and N do not share the middle object".into()));
        }
        let (b, a, c) = (&l.to, &l.from, &n.from);
        if !b.same_group(a) || !a.same_group(c) {
            return Err(Error::Precondition("objects over different presentations".into()));
        }
        let top = |m: &RepObject| m.distinct_weights().last().copied();
        let bottom = |m: &RepObject| m.distinct_weights().first().copied();
        let ok = |lo: Option<i64>, hi: Option<i64>| match (lo, hi) {
            (Some(x), Some(y)) => x < y,
            _ => true,
        };
        if !ok(top(b), bottom(a)) || !ok(top(a), bottom(c)) || !ok(top(b), bottom(c)) {
            return Err(Error::Precondition("weights of B, A, C are not strictly separated".into()));
        }
        Ok(CompatiblePair { l, n })
    }

    pub fn b(&self) -> &RepObject {
        &self.l.to
    }

    pub fn a(&self) -> &RepObject {
        &self.l.from
    }

    pub fn c(&self) -> &RepObject {
        &self.n.from
    }
}

type Var = (usize, usize, usize);

/// The linear system for the corner blocks `m_g` (`dim B x dim C`) making the
/// block upper-triangular matrices a representation.
struct CornerSystem {
    vars: Vec<Var>,
    matrix: Mat,
    rhs: Vec<Rat>,
}

fn corner_system(pair: &CompatiblePair) -> CornerSystem {
    let (b, c) = (pair.b(), pair.c());
    let pres = b.presentation();
    let diff = |a: usize, cc: usize| -> Vec<i64> { b.character(a).iter().zip(c.character(cc)).map(|(x, y)| x - y).collect() };
    let mut vars: Vec<Var> = Vec::new();
    for a in 0..b.dim() {
        for cc in 0..c.dim() {
            for &g in pres.generators_of_degree(&diff(a, cc)) {
                vars.push((g, a, cc));
            }
        }
    }
    vars.sort_unstable();
    let index: HashMap<Var, usize> = vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut degrees: Vec<Vec<i64>> = pres.degrees().cloned().collect();
    degrees.sort();
    let mut rows: Vec<Vec<(usize, Rat)>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let lmat = |g: usize| pair.l.block(g);
    let nmat = |g: usize| pair.n.block(g);
    for a in 0..b.dim() {
        for cc in 0..c.dim() {
            let d = diff(a, cc);
            let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
            for d1 in &degrees {
                let d2: Vec<i64> = d.iter().zip(d1).map(|(x, y)| x - y).collect();
                for &i in pres.generators_of_degree(d1) {
                    for &j in pres.generators_of_degree(&d2) {
                        if i < j {
                            pairs.insert((i, j));
                        }
                    }
                }
            }
            for (i, j) in pairs {
                let mut terms: Vec<(usize, Rat)> = Vec::new();
                let mut push = |v: Var, s: Rat| {
                    if let Some(&k) = index.get(&v) {
                        terms.push((k, s));
                    }
                };
                for (x, y, s) in [(i, j, 1i64), (j, i, -1)] {
                    // s * (rho_B(x) m_y - m_y rho_C(x)) at (a, cc)
                    if let Some(rb) = b.action(x) {
                        for a2 in 0..b.dim() {
                            let v = rb.get(a, a2);
                            if !v.is_zero() {
                                push((y, a2, cc), v * &Rat::from_int(s));
                            }
                        }
                    }
                    if let Some(rc) = c.action(x) {
                        for c2 in 0..c.dim() {
                            let v = rc.get(c2, cc);
                            if !v.is_zero() {
                                push((y, a, c2), v * &Rat::from_int(-s));
                            }
                        }
                    }
                }
                for (k, coef) in pres.bracket(i, j) {
                    push((k, a, cc), -coef);
                }
                let val = lmat(i).mul(&nmat(j)).sub(&lmat(j).mul(&nmat(i)));
                let r = -val.get(a, cc);
                terms.retain(|(_, v)| !v.is_zero());
                if terms.is_empty() && r.is_zero() {
                    continue;
                }
                rows.push(terms);
                rhs.push(r);
            }
        }
    }
    let mut matrix = Mat::zeros(rows.len(), vars.len());
    for (r, terms) in rows.iter().enumerate() {
        for (k, v) in terms {
            matrix.add_at(r, *k, v);
        }
    }
    CornerSystem { vars, matrix, rhs }
}

fn corner_from_vector(pair: &CompatiblePair, vars: &[Var], x: &[Rat]) -> BTreeMap<usize, Mat> {
    let (nb, nc) = (pair.b().dim(), pair.c().dim());
    let mut out: BTreeMap<usize, Mat> = BTreeMap::new();
    for (&(g, a, c), v) in vars.iter().zip(x) {
        if !v.is_zero() {
            out.entry(g).or_insert_with(|| Mat::zeros(nb, nc)).set(a, c, v.clone());
        }
    }
    out
}

enum CornerSolution {
    Solved { corner: BTreeMap<usize, Mat>, kernel: Vec<BTreeMap<usize, Mat>> },
    Infeasible { system: Mat, rhs: Vec<Rat>, certificate: Vec<Rat> },
}

fn solve_corner(pair: &CompatiblePair) -> Result<CornerSolution> {
    let sys = corner_system(pair);
    if sys.matrix.rows() == 0 {
        let kernel = (0..sys.vars.len())
            .map(|k| {
                let mut e = vec![Rat::zero(); sys.vars.len()];
                e[k] = Rat::one();
                corner_from_vector(pair, &sys.vars, &e)
            })
            .collect();
        return Ok(CornerSolution::Solved { corner: BTreeMap::new(), kernel });
    }
    match solve_linear(&sys.matrix, &sys.rhs)? {
        Solution::Feasible { particular, kernel } => Ok(CornerSolution::Solved {
            corner: corner_from_vector(pair, &sys.vars, &particular),
            kernel: kernel.iter().map(|k| corner_from_vector(pair, &sys.vars, k)).collect(),
        }),
        Solution::Infeasible { certificate } => Ok(CornerSolution::Infeasible { system: sys.matrix, rhs: sys.rhs, certificate }),
    }
}

/// The three-by-three grid `[[B, L, A], [B, M, N], [0, C, C]]` with its eight maps.
#[derive(Clone, Debug)]
pub struct BlendedDiagram {
    pub grid: [[RepObject; 3]; 3],
    pub maps: BTreeMap<&'static str, Morphism>,
    pub corner: BTreeMap<usize, Mat>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DiagramCheck {
    pub maps_intertwine: bool,
    pub rows_exact: [bool; 2],
    pub columns_exact: [bool; 2],
    pub squares_commute: bool,
}

impl DiagramCheck {
    pub fn ok(&self) -> bool {
        self.maps_intertwine && self.rows_exact.iter().all(|&x| x) && self.columns_exact.iter().all(|&x| x) && self.squares_commute
    }
}

fn short_exact(f: &Morphism, g: &Morphism) -> bool {
    f.is_injective() && g.is_surjective() && f.compose(g).map(|h| h.matrix.is_zero()).unwrap_or(false) && f.rank() + g.rank() == f.target.dim()
}

impl BlendedDiagram {
    pub fn m(&self) -> &RepObject {
        &self.grid[1][1]
    }

    fn map(&self, k: &str) -> &Morphism {
        &self.maps[k]
    }

    pub fn validate(&self) -> DiagramCheck {
        let maps_intertwine = self.maps.values().all(|f| f.validate().is_ok());
        let rows_exact = [short_exact(self.map("B->L"), self.map("L->A")), short_exact(self.map("B->M"), self.map("M->N"))];
        let columns_exact = [short_exact(self.map("L->M"), self.map("M->C")), short_exact(self.map("A->N"), self.map("N->C"))];
        let eq = |x: Result<Morphism>, y: &Morphism| x.map(|x| x.matrix == y.matrix).unwrap_or(false);
        let eq2 = |x: Result<Morphism>, y: Result<Morphism>| match (x, y) {
            (Ok(x), Ok(y)) => x.matrix == y.matrix,
            _ => false,
        };
        let squares_commute = eq(self.map("B->L").compose(self.map("L->M")), self.map("B->M"))
            && eq2(self.map("L->M").compose(self.map("M->N")), self.map("L->A").compose(self.map("A->N")))
            && eq(self.map("M->N").compose(self.map("N->C")), self.map("M->C"));
        DiagramCheck { maps_intertwine, rows_exact, columns_exact, squares_commute }
    }

    /// `B = W_b M`, `A = W_a M / W_b M`, `C = M / W_a M` up to isomorphism,
    /// with `b`, `a` the top weights of `B` and `A`.
    pub fn graded_pieces(&self) -> Result<[IsoVerdict; 3]> {
        let m = self.m();
        let (b, a, c) = (&self.grid[0][0], &self.grid[0][2], &self.grid[2][2]);
        let wb = b.distinct_weights().last().copied().unwrap_or(i64::MIN / 2);
        let wa = a.distinct_weights().last().copied().unwrap_or(wb);
        Ok([
            is_isomorphic(b, &w_sub(m, wb))?,
            is_isomorphic(a, &w_quotient(&w_sub(m, wa), wb))?,
            is_isomorphic(c, &w_quotient(m, wa))?,
        ])
    }
}

fn prefixed(prefix: &str, m: &RepObject) -> Vec<BasisVector> {
    m.basis().iter().map(|v| BasisVector::new(format!("{prefix}{}", v.label), v.character.clone())).collect()
}

fn block_object(pres: &RepObject, parts: &[(&str, &RepObject)], blocks: &BTreeMap<usize, Vec<Vec<Option<Mat>>>>) -> RepObject {
    let mut basis = Vec::new();
    let mut offs = Vec::new();
    for (pre, obj) in parts {
        offs.push(basis.len());
        basis.extend(prefixed(pre, obj));
    }
    let n = basis.len();
    let mut actions = BTreeMap::new();
    for (&g, grid) in blocks {
        let mut x = Mat::zeros(n, n);
        for (r, row) in grid.iter().enumerate() {
            for (c, blk) in row.iter().enumerate() {
                if let Some(blk) = blk {
                    for (i, j, v) in blk.nonzeros() {
                        x.set(offs[r] + i, offs[c] + j, v.clone());
                    }
                }
            }
        }
        actions.insert(g, x);
    }
    RepObject::new_unchecked(pres.pres_arc().clone(), basis, actions)
}

fn selection(rows: usize, cols: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    for (r, c) in pairs {
        m.set(r, c, Rat::one());
    }
    m
}

fn assemble(pair: &CompatiblePair, corner: BTreeMap<usize, Mat>) -> Result<BlendedDiagram> {
    let (b, a, c) = (pair.b(), pair.a(), pair.c());
    let (nb, na, nc) = (b.dim(), a.dim(), c.dim());
    let gens: BTreeSet<usize> = b
        .actions()
        .keys()
        .chain(a.actions().keys())
        .chain(c.actions().keys())
        .chain(pair.l.class.cocycle.keys())
        .chain(pair.n.class.cocycle.keys())
        .chain(corner.keys())
        .copied()
        .collect();
    let act = |m: &RepObject, g: usize| m.action(g).cloned();
    let nz = |m: Mat| if m.is_zero() { None } else { Some(m) };
    let mut mb = BTreeMap::new();
    let mut lb = BTreeMap::new();
    let mut nbk = BTreeMap::new();
    for &g in &gens {
        let l = nz(pair.l.block(g));
        let n = nz(pair.n.block(g));
        let m = corner.get(&g).cloned();
        mb.insert(g, vec![vec![act(b, g), l.clone(), m], vec![None, act(a, g), n.clone()], vec![None, None, act(c, g)]]);
        lb.insert(g, vec![vec![act(b, g), l], vec![None, act(a, g)]]);
        nbk.insert(g, vec![vec![act(a, g), n], vec![None, act(c, g)]]);
    }
    let mobj = block_object(b, &[("b.", b), ("a.", a), ("c.", c)], &mb);
    mobj.validate()?;
    let lobj = block_object(b, &[("b.", b), ("a.", a)], &lb);
    let nobj = block_object(b, &[("a.", a), ("c.", c)], &nbk);
    let zero = pure_object(b.pres_arc(), &[]);
    let mk = |s: &RepObject, t: &RepObject, m: Mat| Morphism::new(s.clone(), t.clone(), m);
    let mut maps = BTreeMap::new();
    maps.insert("B->L", mk(b, &lobj, selection(nb + na, nb, (0..nb).map(|i| (i, i))))?);
    maps.insert("L->A", mk(&lobj, a, selection(na, nb + na, (0..na).map(|i| (i, nb + i))))?);
    maps.insert("B->M", mk(b, &mobj, selection(nb + na + nc, nb, (0..nb).map(|i| (i, i))))?);
    maps.insert("M->N", mk(&mobj, &nobj, selection(na + nc, nb + na + nc, (0..na + nc).map(|i| (i, nb + i))))?);
    maps.insert("L->M", mk(&lobj, &mobj, selection(nb + na + nc, nb + na, (0..nb + na).map(|i| (i, i))))?);
    maps.insert("M->C", mk(&mobj, c, selection(nc, nb + na + nc, (0..nc).map(|i| (i, nb + na + i))))?);
    maps.insert("A->N", mk(a, &nobj, selection(na + nc, na, (0..na).map(|i| (i, i))))?);
    maps.insert("N->C", mk(&nobj, c, selection(nc, na + nc, (0..nc).map(|i| (i, na + i))))?);
    Ok(BlendedDiagram {
        grid: [[b.clone(), lobj, a.clone()], [b.clone(), mobj, nobj], [zero, c.clone(), c.clone()]],
        maps,
        corner,
    })
}

#[derive(Clone, Debug)]
pub enum BlendOutcome {
    Blended(Box<BlendedDiagram>),
    /// The corner system is infeasible; carries its certificate and the
    /// nonzero Yoneda class.
    Obstructed { yoneda: Box<YonedaClass>, system: Mat, rhs: Vec<Rat>, certificate: Vec<Rat> },
}

impl BlendOutcome {
    pub fn diagram(&self) -> Option<&BlendedDiagram> {
        match self {
            BlendOutcome::Blended(d) => Some(d),
            BlendOutcome::Obstructed { .. } => None,
        }
    }
}

/// Builds an object attached to the pair by solving for the corner blocks.
pub fn blend(pair: &CompatiblePair) -> Result<BlendOutcome> {
    match solve_corner(pair)? {
        CornerSolution::Solved { corner, .. } => Ok(BlendOutcome::Blended(Box::new(assemble(pair, corner)?))),
        CornerSolution::Infeasible { system, rhs, certificate } => {
            let yoneda = yoneda_compose(&pair.l, &pair.n)?;
            Ok(BlendOutcome::Obstructed { yoneda: Box::new(yoneda), system, rhs, certificate })
        }
    }
}

#[derive(Clone, Debug)]
pub enum AttachedVerdict {
    /// `Ext^1(C, B) = 0`; two blends from different corner solutions are
    /// isomorphic via `witness`.
    Unique { m: RepObject, other: RepObject, witness: Morphism },
    NonUnique { m: RepObject, other: RepObject, reason: String },
    NotCompatible,
    Undecided { m: RepObject, reason: String },
}

impl AttachedVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            AttachedVerdict::Unique { .. } => "unique",
            AttachedVerdict::NonUnique { .. } => "non_unique",
            AttachedVerdict::NotCompatible => "not_compatible",
            AttachedVerdict::Undecided { .. } => "undecided",
        }
    }
}

fn add_corner(x: &BTreeMap<usize, Mat>, y: &BTreeMap<usize, Mat>) -> BTreeMap<usize, Mat> {
    let mut out = x.clone();
    for (g, m) in y {
        match out.get_mut(g) {
            Some(e) => *e = e.add(m),
            None => {
                out.insert(*g, m.clone());
            }
        }
    }
    out.retain(|_, m| !m.is_zero());
    out
}

pub fn attached_unique(pair: &CompatiblePair) -> Result<AttachedVerdict> {
    let (corner, kernel) = match solve_corner(pair)? {
        CornerSolution::Solved { corner, kernel } => (corner, kernel),
        CornerSolution::Infeasible { .. } => return Ok(AttachedVerdict::NotCompatible),
    };
    let first = assemble(pair, corner.clone())?;
    let m = first.m().clone();
    let hom_cb = internal_hom(pair.c(), pair.b())?;
    let h1 = h1_basis(&hom_cb);
    if h1.is_empty() {
        let shift = kernel.iter().fold(BTreeMap::new(), |acc, k| add_corner(&acc, k));
        let other = assemble(pair, add_corner(&corner, &shift))?.m().clone();
        return Ok(match is_isomorphic(&m, &other)? {
            IsoVerdict::Yes(witness) => AttachedVerdict::Unique { m, other, witness },
            IsoVerdict::No(reason) => AttachedVerdict::NonUnique { m, other, reason },
            IsoVerdict::Unknown(reason) => AttachedVerdict::Undecided { m, reason },
        });
    }
    let (nb, nc) = (pair.b().dim(), pair.c().dim());
    for z in &h1 {
        let zc: BTreeMap<usize, Mat> = z.cocycle.iter().map(|(&g, v)| (g, Mat::from_flat(nb, nc, v.clone()))).collect();
        let other = assemble(pair, add_corner(&corner, &zc))?.m().clone();
        if let IsoVerdict::No(reason) = is_isomorphic(&m, &other)? {
            return Ok(AttachedVerdict::NonUnique { m, other, reason });
        }
    }
    Ok(AttachedVerdict::Undecided { m, reason: format!("Ext^1(C, B) has dimension {} but no non-isomorphic second blend was certified", h1.len()) })
}
