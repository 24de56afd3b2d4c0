//! A small language of object expressions and composite paths, with a
//! typechecker that infers the indices of every structural map from the
//! source object.
//!
//! Objects: variables `A B C D X Y Z`, units `I` and `I'`, functor
//! applications `F(..)` for `F G H S T`, and binary `⊗`, `⋆` (primed for the
//! codomain side). Binary operators do not associate: nest with parentheses.
//!
//! Paths are `;`-separated steps in diagrammatic order. A step is `1`, a
//! structural map (`α λ ρ φ φ0 ψ ψ0 ξ τ η μ θ`, primed for the codomain side,
//! with an optional functor in brackets such as `φ0[G]` or `η[S]`), a functor
//! applied to a step, or two steps joined by `⊗` or `⋆`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which of the two monoidal categories (or actions) a symbol belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Dom,
    Cod,
}

impl Side {
    fn mark(self) -> &'static str {
        match self {
            Side::Dom => "",
            Side::Cod => "'",
        }
    }
}

/// An object expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obj {
    Var(char),
    Unit(Side),
    Tensor(Side, Arc<Obj>, Arc<Obj>),
    Act(Side, Arc<Obj>, Arc<Obj>),
    Ap(char, Arc<Obj>),
}

impl Obj {
    pub fn tensor(side: Side, l: Obj, r: Obj) -> Obj {
        Obj::Tensor(side, Arc::new(l), Arc::new(r))
    }

    pub fn act(side: Side, l: Obj, r: Obj) -> Obj {
        Obj::Act(side, Arc::new(l), Arc::new(r))
    }

    pub fn ap(f: char, x: Obj) -> Obj {
        Obj::Ap(f, Arc::new(x))
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<char> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<char>) {
        match self {
            Obj::Var(v) if !out.contains(v) => out.push(*v),
            Obj::Var(_) | Obj::Unit(_) => {}
            Obj::Tensor(_, l, r) | Obj::Act(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Obj::Ap(_, x) => x.collect_vars(out),
        }
    }

    fn is_binary(&self) -> bool {
        matches!(self, Obj::Tensor(..) | Obj::Act(..))
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_binary() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::Var(v) => write!(f, "{v}"),
            Obj::Unit(s) => write!(f, "I{}", s.mark()),
            Obj::Tensor(s, l, r) | Obj::Act(s, l, r) => {
                let op = if matches!(self, Obj::Tensor(..)) {
                    '⊗'
                } else {
                    '⋆'
                };
                l.write_operand(f)?;
                write!(f, "{op}{}", s.mark())?;
                r.write_operand(f)
            }
            Obj::Ap(g, x) => write!(f, "{g}({x})"),
        }
    }
}

/// A structural map with its functor annotations resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    /// `X ⊗ (Y ⊗ Z) -> (X ⊗ Y) ⊗ Z`
    Alpha(Side),
    /// `I ⊗ X -> X`
    Lambda(Side),
    /// `X ⊗ I -> X`
    Rho(Side),
    /// `F(X) ⊗' F(Y) -> F(X ⊗ Y)`
    Phi(char),
    /// `I' -> F(I)`
    Phi0(char),
    /// `F(X) -> G(X)`
    Tau,
    /// `X ⋆ (Y ⋆ Z) -> (X ⊗ Y) ⋆ Z`
    Psi(Side),
    /// `X -> I ⋆ X`
    Psi0(Side),
    /// `F(A) ⋆' H(X) -> H(A ⋆ X)`
    Xi(char),
    /// `X -> T(X)`
    Eta(char),
    /// `T(T(X)) -> T(X)`
    Mu(char),
    /// `S(X) -> T(X)`
    Theta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PrimName {
    Alpha,
    Lambda,
    Rho,
    Phi,
    Phi0,
    Tau,
    Psi,
    Psi0,
    Xi,
    Eta,
    Mu,
    Theta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Binary {
    Tensor,
    Act,
}

/// An untyped step, as parsed.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Term {
    Id,
    Prim {
        name: PrimName,
        side: Side,
        fun: Option<char>,
    },
    Binary(Binary, Side, Box<Term>, Box<Term>),
    Ap(char, Box<Term>),
}

/// A typed step: what it is, with its source and target objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub source: Obj,
    pub target: Obj,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Id,
    Prim(Prim),
    Tensor(Side, Box<Step>, Box<Step>),
    Act(Side, Box<Step>, Box<Step>),
    Ap(char, Box<Step>),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StepKind::Id => write!(f, "1"),
            StepKind::Prim(p) => write_prim(f, *p),
            StepKind::Tensor(s, l, r) => write!(f, "({l} ⊗{} {r})", s.mark()),
            StepKind::Act(s, l, r) => write!(f, "({l} ⋆{} {r})", s.mark()),
            StepKind::Ap(g, x) => write!(f, "{g}({x})"),
        }
    }
}

fn write_prim(f: &mut fmt::Formatter<'_>, p: Prim) -> fmt::Result {
    match p {
        Prim::Alpha(s) => write!(f, "α{}", s.mark()),
        Prim::Lambda(s) => write!(f, "λ{}", s.mark()),
        Prim::Rho(s) => write!(f, "ρ{}", s.mark()),
        Prim::Phi(g) => write!(f, "φ[{g}]"),
        Prim::Phi0(g) => write!(f, "φ0[{g}]"),
        Prim::Tau => write!(f, "τ"),
        Prim::Psi(s) => write!(f, "ψ{}", s.mark()),
        Prim::Psi0(s) => write!(f, "ψ0{}", s.mark()),
        Prim::Xi(g) => write!(f, "ξ[{g}]"),
        Prim::Eta(g) => write!(f, "η[{g}]"),
        Prim::Mu(g) => write!(f, "μ[{g}]"),
        Prim::Theta => write!(f, "θ"),
    }
}

const VARS: &str = "ABCDXYZ";
const FUNCTORS: &str = "FGHST";

struct Parser<'a> {
    text: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn error(&self, what: &str) -> Error {
        Error::Input(format!(
            "{what} at position {} of `{}`",
            self.pos, self.text
        ))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.pos + 1).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.chars.len() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }

    fn side(&mut self) -> Side {
        if self.eat('\'') {
            Side::Cod
        } else {
            Side::Dom
        }
    }

    fn binary(&mut self) -> Option<(Binary, Side)> {
        let b = match self.peek()? {
            '⊗' => Binary::Tensor,
            '⋆' => Binary::Act,
            _ => return None,
        };
        self.pos += 1;
        Some((b, self.side()))
    }

    fn object(&mut self) -> Result<Obj> {
        let l = self.object_operand()?;
        match self.binary() {
            None => Ok(l),
            Some((b, s)) => {
                let r = self.object_operand()?;
                if self.peek().is_some_and(|c| c == '⊗' || c == '⋆') {
                    return Err(self.error("ambiguous chain, add parentheses"));
                }
                Ok(match b {
                    Binary::Tensor => Obj::tensor(s, l, r),
                    Binary::Act => Obj::act(s, l, r),
                })
            }
        }
    }

    fn object_operand(&mut self) -> Result<Obj> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let o = self.object()?;
                self.expect(')')?;
                Ok(o)
            }
            Some('I') => {
                self.pos += 1;
                Ok(Obj::Unit(self.side()))
            }
            Some(g) if FUNCTORS.contains(g) && self.peek2() == Some('(') => {
                self.pos += 2;
                let o = self.object()?;
                self.expect(')')?;
                Ok(Obj::ap(g, o))
            }
            Some(v) if VARS.contains(v) => {
                self.pos += 1;
                Ok(Obj::Var(v))
            }
            _ => Err(self.error("expected an object")),
        }
    }

    fn path(&mut self) -> Result<Vec<Term>> {
        let mut steps = vec![self.step()?];
        while self.eat(';') {
            steps.push(self.step()?);
        }
        Ok(steps)
    }

    fn step(&mut self) -> Result<Term> {
        let l = self.factor()?;
        match self.binary() {
            None => Ok(l),
            Some((b, s)) => {
                let r = self.factor()?;
                Ok(Term::Binary(b, s, Box::new(l), Box::new(r)))
            }
        }
    }

    fn factor(&mut self) -> Result<Term> {
        let c = self.peek().ok_or_else(|| self.error("expected a step"))?;
        if c == '1' {
            self.pos += 1;
            return Ok(Term::Id);
        }
        if c == '(' {
            self.pos += 1;
            let t = self.step()?;
            self.expect(')')?;
            return Ok(t);
        }
        if FUNCTORS.contains(c) && self.peek2() == Some('(') {
            self.pos += 2;
            let t = self.step()?;
            self.expect(')')?;
            return Ok(Term::Ap(c, Box::new(t)));
        }
        self.pos += 1;
        let zero = self.eat('0');
        let name = match (c, zero) {
            ('α', false) => PrimName::Alpha,
            ('λ', false) => PrimName::Lambda,
            ('ρ', false) => PrimName::Rho,
            ('φ', false) => PrimName::Phi,
            ('φ', true) => PrimName::Phi0,
            ('τ', false) => PrimName::Tau,
            ('ψ', false) => PrimName::Psi,
            ('ψ', true) => PrimName::Psi0,
            ('ξ', false) => PrimName::Xi,
            ('η', false) => PrimName::Eta,
            ('μ', false) => PrimName::Mu,
            ('θ', false) => PrimName::Theta,
            _ => {
                self.pos -= 1 + usize::from(zero);
                return Err(self.error("unknown step"));
            }
        };
        let side = self.side();
        let fun = if self.eat('[') {
            let g = self
                .peek()
                .filter(|g| FUNCTORS.contains(*g))
                .ok_or_else(|| self.error("expected a functor"))?;
            self.pos += 1;
            self.expect(']')?;
            Some(g)
        } else {
            None
        };
        Ok(Term::Prim { name, side, fun })
    }
}

/// Parse an object expression.
pub fn parse_object(text: &str) -> Result<Obj> {
    let mut p = Parser::new(text);
    let o = p.object()?;
    p.finish()?;
    Ok(o)
}

/// A parsed but untyped path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path(Vec<Term>);

pub fn parse_path(text: &str) -> Result<Path> {
    let mut p = Parser::new(text);
    let steps = p.path()?;
    p.finish()?;
    Ok(Path(steps))
}

fn mismatch(what: &str, src: &Obj) -> Error {
    Error::Compose(format!("{what} does not apply to {src}"))
}

fn split_tensor(src: &Obj, side: Side, what: &str) -> Result<(Obj, Obj)> {
    match src {
        Obj::Tensor(s, l, r) if *s == side => Ok(((**l).clone(), (**r).clone())),
        _ => Err(mismatch(what, src)),
    }
}

fn split_act(src: &Obj, side: Side, what: &str) -> Result<(Obj, Obj)> {
    match src {
        Obj::Act(s, l, r) if *s == side => Ok(((**l).clone(), (**r).clone())),
        _ => Err(mismatch(what, src)),
    }
}

fn split_ap(src: &Obj, what: &str) -> Result<(char, Obj)> {
    match src {
        Obj::Ap(g, x) => Ok((*g, (**x).clone())),
        _ => Err(mismatch(what, src)),
    }
}

fn check_fun(found: char, wanted: Option<char>, what: &str, src: &Obj) -> Result<char> {
    match wanted {
        Some(w) if w != found => Err(mismatch(what, src)),
        _ => Ok(found),
    }
}

fn prim_target(name: PrimName, side: Side, fun: Option<char>, src: &Obj) -> Result<(Prim, Obj)> {
    Ok(match name {
        PrimName::Alpha => {
            let (x, yz) = split_tensor(src, side, "α")?;
            let (y, z) = split_tensor(&yz, side, "α")?;
            (
                Prim::Alpha(side),
                Obj::tensor(side, Obj::tensor(side, x, y), z),
            )
        }
        PrimName::Lambda => match split_tensor(src, side, "λ")? {
            (Obj::Unit(s), x) if s == side => (Prim::Lambda(side), x),
            _ => return Err(mismatch("λ", src)),
        },
        PrimName::Rho => match split_tensor(src, side, "ρ")? {
            (x, Obj::Unit(s)) if s == side => (Prim::Rho(side), x),
            _ => return Err(mismatch("ρ", src)),
        },
        PrimName::Phi => {
            let (fx, fy) = split_tensor(src, Side::Cod, "φ")?;
            let (f, x) = split_ap(&fx, "φ")?;
            let (g, y) = split_ap(&fy, "φ")?;
            if f != g {
                return Err(mismatch("φ", src));
            }
            let f = check_fun(f, fun, "φ", src)?;
            (Prim::Phi(f), Obj::ap(f, Obj::tensor(Side::Dom, x, y)))
        }
        PrimName::Phi0 => {
            if *src != Obj::Unit(Side::Cod) {
                return Err(mismatch("φ0", src));
            }
            let f = fun.unwrap_or('F');
            (Prim::Phi0(f), Obj::ap(f, Obj::Unit(Side::Dom)))
        }
        PrimName::Tau => {
            let (f, x) = split_ap(src, "τ")?;
            check_fun(f, Some('F'), "τ", src)?;
            (Prim::Tau, Obj::ap('G', x))
        }
        PrimName::Psi => {
            let (a, bx) = split_act(src, side, "ψ")?;
            let (b, x) = split_act(&bx, side, "ψ")?;
            (Prim::Psi(side), Obj::act(side, Obj::tensor(side, a, b), x))
        }
        PrimName::Psi0 => (
            Prim::Psi0(side),
            Obj::act(side, Obj::Unit(side), src.clone()),
        ),
        PrimName::Xi => {
            let (fa, hx) = split_act(src, Side::Cod, "ξ")?;
            let (f, a) = split_ap(&fa, "ξ")?;
            let f = check_fun(f, fun, "ξ", src)?;
            let (h, x) = split_ap(&hx, "ξ")?;
            check_fun(h, Some('H'), "ξ", src)?;
            (Prim::Xi(f), Obj::ap('H', Obj::act(Side::Dom, a, x)))
        }
        PrimName::Eta => {
            let t = fun.unwrap_or('T');
            (Prim::Eta(t), Obj::ap(t, src.clone()))
        }
        PrimName::Mu => {
            let t = fun.unwrap_or('T');
            let (f, tx) = split_ap(src, "μ")?;
            let (g, x) = split_ap(&tx, "μ")?;
            if f != t || g != t {
                return Err(mismatch("μ", src));
            }
            (Prim::Mu(t), Obj::ap(t, x))
        }
        PrimName::Theta => {
            let (s, x) = split_ap(src, "θ")?;
            check_fun(s, Some('S'), "θ", src)?;
            (Prim::Theta, Obj::ap('T', x))
        }
    })
}

fn typecheck(term: &Term, src: &Obj) -> Result<Step> {
    let (kind, target) = match term {
        Term::Id => (StepKind::Id, src.clone()),
        Term::Prim { name, side, fun } => {
            let (p, t) = prim_target(*name, *side, *fun, src)?;
            (StepKind::Prim(p), t)
        }
        Term::Binary(b, side, l, r) => {
            let (x, y) = match b {
                Binary::Tensor => split_tensor(src, *side, "a tensor of steps")?,
                Binary::Act => split_act(src, *side, "an action of steps")?,
            };
            let l = typecheck(l, &x)?;
            let r = typecheck(r, &y)?;
            match b {
                Binary::Tensor => {
                    let t = Obj::tensor(*side, l.target.clone(), r.target.clone());
                    (StepKind::Tensor(*side, Box::new(l), Box::new(r)), t)
                }
                Binary::Act => {
                    let t = Obj::act(*side, l.target.clone(), r.target.clone());
                    (StepKind::Act(*side, Box::new(l), Box::new(r)), t)
                }
            }
        }
        Term::Ap(g, inner) => {
            let (f, x) = split_ap(src, "a functor image")?;
            if f != *g {
                return Err(mismatch(&format!("{g}(..)"), src));
            }
            let inner = typecheck(inner, &x)?;
            let t = Obj::ap(f, inner.target.clone());
            (StepKind::Ap(f, Box::new(inner)), t)
        }
    };
    Ok(Step {
        kind,
        source: src.clone(),
        target,
    })
}

impl Path {
    /// Type every step starting from `source`.
    pub fn typecheck(&self, source: &Obj) -> Result<Vec<Step>> {
        let mut cur = source.clone();
        let mut out = Vec::with_capacity(self.0.len());
        for t in &self.0 {
            let s = typecheck(t, &cur)?;
            cur = s.target.clone();
            out.push(s);
        }
        Ok(out)
    }
}

/// A named diagram: a source object and two parallel paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub name: &'static str,
    pub source: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
}

/// A diagram with both paths typed.
#[derive(Clone, Debug)]
pub struct TypedDiagram {
    pub name: &'static str,
    pub source: Obj,
    pub target: Obj,
    pub lhs: Vec<Step>,
    pub rhs: Vec<Step>,
}

impl Diagram {
    /// Parse and typecheck; both paths must end at the same object.
    pub fn typed(&self) -> Result<TypedDiagram> {
        let source = parse_object(self.source)?;
        let lhs = parse_path(self.lhs)?.typecheck(&source)?;
        let rhs = parse_path(self.rhs)?.typecheck(&source)?;
        let end = |p: &[Step]| p.last().map_or(source.clone(), |s| s.target.clone());
        let (lt, rt) = (end(&lhs), end(&rhs));
        if lt != rt {
            return Err(Error::Compose(format!(
                "{}: the paths end at {lt} and {rt}",
                self.name
            )));
        }
        Ok(TypedDiagram {
            name: self.name,
            source,
            target: lt,
            lhs,
            rhs,
        })
    }
}

pub const MC1: Diagram = Diagram {
    name: "MC1",
    source: "A⊗(B⊗(C⊗D))",
    lhs: "α ; α",
    rhs: "1⊗α ; α ; α⊗1",
};
pub const MC2: Diagram = Diagram {
    name: "MC2",
    source: "A⊗(I⊗B)",
    lhs: "1⊗λ",
    rhs: "α ; ρ⊗1",
};

pub const MF1: Diagram = Diagram {
    name: "MF1",
    source: "F(A)⊗'(F(B)⊗'F(C))",
    lhs: "1⊗'φ ; φ ; F(α)",
    rhs: "α' ; φ⊗'1 ; φ",
};
pub const MF2: Diagram = Diagram {
    name: "MF2",
    source: "I'⊗'F(A)",
    lhs: "λ'",
    rhs: "φ0⊗'1 ; φ ; F(λ)",
};
pub const MF3: Diagram = Diagram {
    name: "MF3",
    source: "F(A)⊗'I'",
    lhs: "ρ'",
    rhs: "1⊗'φ0 ; φ ; F(ρ)",
};

pub const MT1: Diagram = Diagram {
    name: "MT1",
    source: "F(A)⊗'F(B)",
    lhs: "τ⊗'τ ; φ",
    rhs: "φ ; τ",
};
pub const MT2: Diagram = Diagram {
    name: "MT2",
    source: "I'",
    lhs: "φ0[G]",
    rhs: "φ0[F] ; τ",
};

pub const MA1: Diagram = Diagram {
    name: "MA1",
    source: "A⋆(B⋆(C⋆X))",
    lhs: "ψ ; ψ",
    rhs: "1⋆ψ ; ψ ; α⋆1",
};
pub const MA2: Diagram = Diagram {
    name: "MA2",
    source: "A⋆X",
    lhs: "1",
    rhs: "ψ0 ; ψ ; λ⋆1",
};
pub const MA3: Diagram = Diagram {
    name: "MA3",
    source: "A⋆X",
    lhs: "1",
    rhs: "1⋆ψ0 ; ψ ; ρ⋆1",
};

pub const MAF1: Diagram = Diagram {
    name: "MAF1",
    source: "F(A)⋆'(F(B)⋆'H(X))",
    lhs: "ψ' ; φ⋆'1 ; ξ",
    rhs: "1⋆'ξ ; ξ ; H(ψ)",
};
pub const MAF2: Diagram = Diagram {
    name: "MAF2",
    source: "H(X)",
    lhs: "H(ψ0)",
    rhs: "ψ0' ; φ0⋆'1 ; ξ",
};
pub const MAT: Diagram = Diagram {
    name: "MAT",
    source: "F(A)⋆'H(X)",
    lhs: "ξ",
    rhs: "τ⋆'1 ; ξ",
};

pub const MONAD_UNIT_LEFT: Diagram = Diagram {
    name: "monad-unit-left",
    source: "T(A)",
    lhs: "η ; μ",
    rhs: "1",
};
pub const MONAD_UNIT_RIGHT: Diagram = Diagram {
    name: "monad-unit-right",
    source: "T(A)",
    lhs: "T(η) ; μ",
    rhs: "1",
};
pub const MONAD_ASSOC: Diagram = Diagram {
    name: "monad-assoc",
    source: "T(T(T(A)))",
    lhs: "μ ; μ",
    rhs: "T(μ) ; μ",
};

pub const MORPHISM_UNIT: Diagram = Diagram {
    name: "morphism-unit",
    source: "A",
    lhs: "η[S] ; θ",
    rhs: "η",
};
pub const MORPHISM_MULT: Diagram = Diagram {
    name: "morphism-mult",
    source: "S(S(A))",
    lhs: "μ[S] ; θ",
    rhs: "S(θ) ; θ ; μ",
};

pub const MC: &[Diagram] = &[MC1, MC2];
pub const MF: &[Diagram] = &[MF1, MF2, MF3];
pub const MT: &[Diagram] = &[MT1, MT2];
pub const MA: &[Diagram] = &[MA1, MA2, MA3];
pub const MAF: &[Diagram] = &[MAF1, MAF2];
pub const MAT_DIAGRAMS: &[Diagram] = &[MAT];
pub const MONAD: &[Diagram] = &[MONAD_UNIT_LEFT, MONAD_UNIT_RIGHT, MONAD_ASSOC];
pub const MONAD_MORPHISM: &[Diagram] = &[MORPHISM_UNIT, MORPHISM_MULT];

/// Every named diagram.
pub const ALL: &[&[Diagram]] = &[MC, MF, MT, MA, MAF, MAT_DIAGRAMS, MONAD, MONAD_MORPHISM];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_diagram_typechecks() {
        for group in ALL {
            for d in *group {
                d.typed().unwrap_or_else(|e| panic!("{}: {e}", d.name));
            }
        }
    }

    #[test]
    fn pentagon_infers_indices() {
        let d = MC1.typed().unwrap();
        let targets: Vec<String> = d.rhs.iter().map(|s| s.target.to_string()).collect();
        assert_eq!(targets, ["A⊗((B⊗C)⊗D)", "(A⊗(B⊗C))⊗D", "((A⊗B)⊗C)⊗D"]);
        assert_eq!(d.target.to_string(), "((A⊗B)⊗C)⊗D");
    }

    #[test]
    fn ill_typed_paths_are_rejected() {
        let src = parse_object("A⊗B").unwrap();
        assert!(parse_path("α").unwrap().typecheck(&src).is_err());
        assert!(parse_path("λ").unwrap().typecheck(&src).is_err());
        assert!(parse_path("φ ; 1").unwrap().typecheck(&src).is_err());
        assert!(parse_object("A⊗B⊗C").is_err());
        assert!(parse_path("α ;").is_err());
        assert!(parse_path("κ").is_err());
    }

    #[test]
    fn objects_round_trip_through_display() {
        for text in [
            "F(A)⊗'(F(B)⊗'F(C))",
            "A⋆(B⋆(C⋆X))",
            "I'⊗'F(A)",
            "S(S(A))",
            "H(X)",
        ] {
            let o = parse_object(text).unwrap();
            assert_eq!(o.to_string(), text);
            assert_eq!(parse_object(&o.to_string()).unwrap(), o);
        }
    }
}
