use serde::{Deserialize, Serialize};
use std::fmt;

/// Which dialect a program is written in: the boolean-only language, or the
/// variant with natural numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Lang {
    #[default]
    L2,
    Lnat,
}

impl std::str::FromStr for Lang {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "l2" | "L2" => Ok(Lang::L2),
            "lnat" | "l" | "L" | "nat" => Ok(Lang::Lnat),
            other => Err(format!("unknown language mode `{other}` (expected l2 or lnat)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeExpr {
    Unit,
    Bool,
    Nat,
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    Var(Box<TypeExpr>),
}

impl TypeExpr {
    pub fn prod(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Arrow(Box::new(a), Box::new(b))
    }

    pub fn var(a: TypeExpr) -> TypeExpr {
        TypeExpr::Var(Box::new(a))
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            TypeExpr::Unit | TypeExpr::Bool | TypeExpr::Nat => 1,
            TypeExpr::Prod(a, b) | TypeExpr::Arrow(a, b) => 1 + a.size() + b.size(),
            TypeExpr::Var(a) => 1 + a.size(),
        }
    }

    pub fn mentions_nat(&self) -> bool {
        match self {
            TypeExpr::Nat => true,
            TypeExpr::Unit | TypeExpr::Bool => false,
            TypeExpr::Prod(a, b) | TypeExpr::Arrow(a, b) => a.mentions_nat() || b.mentions_nat(),
            TypeExpr::Var(a) => a.mentions_nat(),
        }
    }

    /// Values of ground types can be compared for equality by an observer.
    pub fn is_ground(&self) -> bool {
        match self {
            TypeExpr::Unit | TypeExpr::Bool | TypeExpr::Nat => true,
            TypeExpr::Prod(a, b) => a.is_ground() && b.is_ground(),
            _ => false,
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_type(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnOp {
    Fst,
    Snd,
    Deref,
    Not,
    Succ,
    Pred,
    IsZero,
}

/// One binding of a `new x (: T)? (:= M)?` declaration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NewDecl {
    pub name: String,
    pub ty: Option<TypeExpr>,
    pub init: Option<TermExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermExpr {
    Var(String),
    Lam(String, TypeExpr, Box<TermExpr>),
    App(Box<TermExpr>, Box<TermExpr>),
    Pair(Box<TermExpr>, Box<TermExpr>),
    Unary(UnOp, Box<TermExpr>),
    Skip,
    True,
    False,
    If(Box<TermExpr>, Box<TermExpr>, Box<TermExpr>),
    New(TypeExpr),
    Assign(Box<TermExpr>, Box<TermExpr>),
    MkVar(Box<TermExpr>, Box<TermExpr>),
    /// Runtime-only location identifier.
    Loc(usize),
    Num(u64),
    Bin(BinOp, Box<TermExpr>, Box<TermExpr>),
    /// `div M N`, returning the pair (quotient, remainder).
    Div(Box<TermExpr>, Box<TermExpr>),
    // Sugar.
    Seq(Box<TermExpr>, Box<TermExpr>),
    NewIn(Vec<NewDecl>, Box<TermExpr>),
    Let(String, Box<TermExpr>, Box<TermExpr>),
    LetPair(String, String, Box<TermExpr>, Box<TermExpr>),
    While(Box<TermExpr>, Box<TermExpr>),
    /// Fixed-point combinator at a function type `A -> B`.
    Fix(TypeExpr),
    /// A divergent inhabitant of the given type.
    Bot(TypeExpr),
    /// The hole of a context template.
    Hole,
}

impl TermExpr {
    pub fn var(x: &str) -> TermExpr {
        TermExpr::Var(x.to_string())
    }

    pub fn lam(x: &str, ty: TypeExpr, body: TermExpr) -> TermExpr {
        TermExpr::Lam(x.to_string(), ty, Box::new(body))
    }

    pub fn app(f: TermExpr, a: TermExpr) -> TermExpr {
        TermExpr::App(Box::new(f), Box::new(a))
    }

    pub fn pair(a: TermExpr, b: TermExpr) -> TermExpr {
        TermExpr::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(a: TermExpr) -> TermExpr {
        TermExpr::Unary(UnOp::Fst, Box::new(a))
    }

    pub fn snd(a: TermExpr) -> TermExpr {
        TermExpr::Unary(UnOp::Snd, Box::new(a))
    }

    pub fn deref(a: TermExpr) -> TermExpr {
        TermExpr::Unary(UnOp::Deref, Box::new(a))
    }

    pub fn assign(a: TermExpr, b: TermExpr) -> TermExpr {
        TermExpr::Assign(Box::new(a), Box::new(b))
    }

    pub fn mkvar(a: TermExpr, b: TermExpr) -> TermExpr {
        TermExpr::MkVar(Box::new(a), Box::new(b))
    }

    pub fn ite(c: TermExpr, t: TermExpr, e: TermExpr) -> TermExpr {
        TermExpr::If(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn seq(a: TermExpr, b: TermExpr) -> TermExpr {
        TermExpr::Seq(Box::new(a), Box::new(b))
    }

    pub fn bin(op: BinOp, a: TermExpr, b: TermExpr) -> TermExpr {
        TermExpr::Bin(op, Box::new(a), Box::new(b))
    }

    /// Values of the operational semantics.
    pub fn is_value(&self) -> bool {
        match self {
            TermExpr::Skip
            | TermExpr::True
            | TermExpr::False
            | TermExpr::Num(_)
            | TermExpr::Lam(..)
            | TermExpr::Loc(_) => true,
            TermExpr::Pair(a, b) | TermExpr::MkVar(a, b) => a.is_value() && b.is_value(),
            _ => false,
        }
    }

    /// True when the term uses any surface-only construct.
    pub fn has_sugar(&self) -> bool {
        let mut found = false;
        self.walk(&mut |t| {
            if matches!(
                t,
                TermExpr::Seq(..)
                    | TermExpr::NewIn(..)
                    | TermExpr::Let(..)
                    | TermExpr::LetPair(..)
                    | TermExpr::While(..)
                    | TermExpr::Fix(_)
                    | TermExpr::Bot(_)
                    | TermExpr::Unary(UnOp::Not, _)
            ) {
                found = true;
            }
        });
        found
    }

    pub fn has_locations(&self) -> bool {
        let mut found = false;
        self.walk(&mut |t| found |= matches!(t, TermExpr::Loc(_)));
        found
    }

    pub fn has_hole(&self) -> bool {
        let mut found = false;
        self.walk(&mut |t| found |= matches!(t, TermExpr::Hole));
        found
    }

    /// Pre-order traversal of every subterm.
    pub fn walk(&self, visit: &mut dyn FnMut(&TermExpr)) {
        visit(self);
        match self {
            TermExpr::Var(_)
            | TermExpr::Skip
            | TermExpr::True
            | TermExpr::False
            | TermExpr::New(_)
            | TermExpr::Loc(_)
            | TermExpr::Num(_)
            | TermExpr::Fix(_)
            | TermExpr::Bot(_)
            | TermExpr::Hole => {}
            TermExpr::Lam(_, _, b) | TermExpr::Unary(_, b) => b.walk(visit),
            TermExpr::App(a, b)
            | TermExpr::Pair(a, b)
            | TermExpr::Assign(a, b)
            | TermExpr::MkVar(a, b)
            | TermExpr::Bin(_, a, b)
            | TermExpr::Div(a, b)
            | TermExpr::Seq(a, b)
            | TermExpr::Let(_, a, b)
            | TermExpr::LetPair(_, _, a, b)
            | TermExpr::While(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            TermExpr::If(c, t, e) => {
                c.walk(visit);
                t.walk(visit);
                e.walk(visit);
            }
            TermExpr::NewIn(decls, body) => {
                for d in decls {
                    if let Some(init) = &d.init {
                        init.walk(visit);
                    }
                }
                body.walk(visit);
            }
        }
    }

    /// Replaces every hole by `filler`. Variables of `filler` may be captured
    /// by binders of the context, which is the point of a context.
    pub fn plug(&self, filler: &TermExpr) -> TermExpr {
        self.map_children(&|t| match t {
            TermExpr::Hole => Some(filler.clone()),
            _ => None,
        })
    }

    /// Rebuilds the term bottom-up, letting `rewrite` replace any node.
    pub fn map_children(&self, rewrite: &dyn Fn(&TermExpr) -> Option<TermExpr>) -> TermExpr {
        if let Some(t) = rewrite(self) {
            return t;
        }
        let go = |t: &TermExpr| Box::new(t.map_children(rewrite));
        match self {
            TermExpr::Var(_)
            | TermExpr::Skip
            | TermExpr::True
            | TermExpr::False
            | TermExpr::New(_)
            | TermExpr::Loc(_)
            | TermExpr::Num(_)
            | TermExpr::Fix(_)
            | TermExpr::Bot(_)
            | TermExpr::Hole => self.clone(),
            TermExpr::Lam(x, ty, b) => TermExpr::Lam(x.clone(), ty.clone(), go(b)),
            TermExpr::Unary(op, b) => TermExpr::Unary(*op, go(b)),
            TermExpr::App(a, b) => TermExpr::App(go(a), go(b)),
            TermExpr::Pair(a, b) => TermExpr::Pair(go(a), go(b)),
            TermExpr::Assign(a, b) => TermExpr::Assign(go(a), go(b)),
            TermExpr::MkVar(a, b) => TermExpr::MkVar(go(a), go(b)),
            TermExpr::Bin(op, a, b) => TermExpr::Bin(*op, go(a), go(b)),
            TermExpr::Div(a, b) => TermExpr::Div(go(a), go(b)),
            TermExpr::Seq(a, b) => TermExpr::Seq(go(a), go(b)),
            TermExpr::Let(x, a, b) => TermExpr::Let(x.clone(), go(a), go(b)),
            TermExpr::LetPair(x, y, a, b) => TermExpr::LetPair(x.clone(), y.clone(), go(a), go(b)),
            TermExpr::While(a, b) => TermExpr::While(go(a), go(b)),
            TermExpr::If(c, t, e) => TermExpr::If(go(c), go(t), go(e)),
            TermExpr::NewIn(decls, body) => TermExpr::NewIn(
                decls
                    .iter()
                    .map(|d| NewDecl {
                        name: d.name.clone(),
                        ty: d.ty.clone(),
                        init: d.init.as_ref().map(|i| i.map_children(rewrite)),
                    })
                    .collect(),
                go(body),
            ),
        }
    }

    /// Capture-free substitution of a closed term for a free variable.
    pub fn subst(&self, x: &str, value: &TermExpr) -> TermExpr {
        let go = |t: &TermExpr| Box::new(t.subst(x, value));
        match self {
            TermExpr::Var(y) if y == x => value.clone(),
            TermExpr::Var(_)
            | TermExpr::Skip
            | TermExpr::True
            | TermExpr::False
            | TermExpr::New(_)
            | TermExpr::Loc(_)
            | TermExpr::Num(_)
            | TermExpr::Fix(_)
            | TermExpr::Bot(_)
            | TermExpr::Hole => self.clone(),
            TermExpr::Lam(y, ty, b) => {
                if y == x {
                    self.clone()
                } else {
                    TermExpr::Lam(y.clone(), ty.clone(), go(b))
                }
            }
            TermExpr::Let(y, a, b) => {
                let b = if y == x { b.clone() } else { go(b) };
                TermExpr::Let(y.clone(), go(a), b)
            }
            TermExpr::LetPair(y, z, a, b) => {
                let b = if y == x || z == x { b.clone() } else { go(b) };
                TermExpr::LetPair(y.clone(), z.clone(), go(a), b)
            }
            TermExpr::NewIn(decls, body) => {
                let mut shadowed = false;
                let mut out = Vec::with_capacity(decls.len());
                for d in decls {
                    // Initialisers see the earlier declarations of the same block.
                    let init = d
                        .init
                        .as_ref()
                        .map(|i| if shadowed { i.clone() } else { i.subst(x, value) });
                    out.push(NewDecl { name: d.name.clone(), ty: d.ty.clone(), init });
                    shadowed |= d.name == x;
                }
                let body = if shadowed { body.clone() } else { go(body) };
                TermExpr::NewIn(out, body)
            }
            TermExpr::Unary(op, b) => TermExpr::Unary(*op, go(b)),
            TermExpr::App(a, b) => TermExpr::App(go(a), go(b)),
            TermExpr::Pair(a, b) => TermExpr::Pair(go(a), go(b)),
            TermExpr::Assign(a, b) => TermExpr::Assign(go(a), go(b)),
            TermExpr::MkVar(a, b) => TermExpr::MkVar(go(a), go(b)),
            TermExpr::Bin(op, a, b) => TermExpr::Bin(*op, go(a), go(b)),
            TermExpr::Div(a, b) => TermExpr::Div(go(a), go(b)),
            TermExpr::Seq(a, b) => TermExpr::Seq(go(a), go(b)),
            TermExpr::While(a, b) => TermExpr::While(go(a), go(b)),
            TermExpr::If(c, t, e) => TermExpr::If(go(c), go(t), go(e)),
        }
    }
}

impl fmt::Display for TermExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_term(self))
    }
}
