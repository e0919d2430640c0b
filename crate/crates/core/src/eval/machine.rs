//! Big-step call-by-value evaluation with a store, run as an explicit
//! control/continuation machine so that deep recursion in the object
//! language cannot exhaust the host stack.

use crate::lang::{desugar, BinOp, TermExpr, TypeExpr, UnOp};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Allocated locations with their content types, and the partial store.
/// Invariant: every key of `store` indexes `locations`; stored terms are
/// closed values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Configuration {
    pub locations: Vec<TypeExpr>,
    pub store: BTreeMap<usize, TermExpr>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn location_types(&self) -> BTreeMap<usize, TypeExpr> {
        self.locations.iter().cloned().enumerate().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Value { config: Configuration, value: TermExpr },
    /// The step budget ran out.
    Diverged,
    /// A read of a location that was never written.
    StuckRead(usize),
    /// Any other stuck state of well-typed code, e.g. division by zero.
    Stuck(String),
}

impl Outcome {
    pub fn converged(&self) -> bool {
        matches!(self, Outcome::Value { .. })
    }

    pub fn value(&self) -> Option<&TermExpr> {
        match self {
            Outcome::Value { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Value { .. } => "value",
            Outcome::Diverged => "diverged",
            Outcome::StuckRead(_) => "stuck-read",
            Outcome::Stuck(_) => "stuck",
        }
    }
}

/// Malformed input: these never arise from closed well-typed programs.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable `{0}` during evaluation")]
    FreeVariable(String),
    #[error("a hole cannot be evaluated")]
    Hole,
    #[error("unknown location {0}")]
    UnknownLocation(usize),
    #[error("ill-typed redex: {0}")]
    IllTyped(String),
    #[error("cannot elaborate: {0}")]
    Elaboration(#[from] crate::lang::TypeError),
}

enum Frame {
    AppFun(TermExpr),
    AppArg(TermExpr),
    PairFst(TermExpr),
    PairSnd(TermExpr),
    MkVarFst(TermExpr),
    MkVarSnd(TermExpr),
    Unary(UnOp),
    If(TermExpr, TermExpr),
    AssignTarget(TermExpr),
    AssignValue(TermExpr),
    BinLeft(BinOp, TermExpr),
    BinRight(BinOp, u64),
    DivLeft(TermExpr),
    DivRight(u64),
}

enum Control {
    Eval(TermExpr),
    Return(TermExpr),
}

fn ill(t: &TermExpr) -> EvalError {
    EvalError::IllTyped(t.to_string())
}

fn num(t: &TermExpr) -> Result<u64, EvalError> {
    match t {
        TermExpr::Num(n) => Ok(*n),
        other => Err(ill(other)),
    }
}

fn boolean(b: bool) -> TermExpr {
    if b {
        TermExpr::True
    } else {
        TermExpr::False
    }
}

/// Evaluates the closed term `m` in `cfg`, spending at most `fuel` machine
/// transitions. Surface sugar is elaborated first.
pub fn eval(cfg: &Configuration, m: &TermExpr, fuel: u64) -> Result<Outcome, EvalError> {
    let core;
    let m = if m.has_sugar() {
        core = desugar(m)?;
        &core
    } else {
        m
    };
    run(cfg.clone(), m.clone(), fuel)
}

/// True iff `m` reaches a value within `fuel` transitions.
pub fn converges(m: &TermExpr, fuel: u64) -> Result<bool, EvalError> {
    Ok(eval(&Configuration::new(), m, fuel)?.converged())
}

fn run(mut cfg: Configuration, m: TermExpr, mut fuel: u64) -> Result<Outcome, EvalError> {
    let mut stack: Vec<Frame> = Vec::new();
    let mut control = Control::Eval(m);
    loop {
        if let Control::Return(v) = &control {
            if stack.is_empty() {
                return Ok(Outcome::Value { config: cfg, value: v.clone() });
            }
        }
        if fuel == 0 {
            return Ok(Outcome::Diverged);
        }
        fuel -= 1;
        control = match control {
            Control::Eval(t) => {
                if t.is_value() {
                    Control::Return(t)
                } else {
                    match t {
                        TermExpr::Var(x) => return Err(EvalError::FreeVariable(x)),
                        TermExpr::Hole => return Err(EvalError::Hole),
                        TermExpr::App(f, a) => {
                            stack.push(Frame::AppFun(*a));
                            Control::Eval(*f)
                        }
                        TermExpr::Pair(a, b) => {
                            stack.push(Frame::PairFst(*b));
                            Control::Eval(*a)
                        }
                        TermExpr::MkVar(a, b) => {
                            stack.push(Frame::MkVarFst(*b));
                            Control::Eval(*a)
                        }
                        TermExpr::Unary(op, a) => {
                            stack.push(Frame::Unary(op));
                            Control::Eval(*a)
                        }
                        TermExpr::If(c, a, b) => {
                            stack.push(Frame::If(*a, *b));
                            Control::Eval(*c)
                        }
                        TermExpr::Assign(a, b) => {
                            stack.push(Frame::AssignTarget(*b));
                            Control::Eval(*a)
                        }
                        TermExpr::Bin(op, a, b) => {
                            stack.push(Frame::BinLeft(op, *b));
                            Control::Eval(*a)
                        }
                        TermExpr::Div(a, b) => {
                            stack.push(Frame::DivLeft(*b));
                            Control::Eval(*a)
                        }
                        TermExpr::New(ty) => {
                            cfg.locations.push(ty);
                            Control::Return(TermExpr::Loc(cfg.locations.len() - 1))
                        }
                        other => return Err(ill(&other)),
                    }
                }
            }
            Control::Return(v) => {
                let frame = stack.pop().expect("final values return above");
                match frame {
                    Frame::AppFun(a) => {
                        stack.push(Frame::AppArg(v));
                        Control::Eval(a)
                    }
                    Frame::AppArg(f) => match f {
                        TermExpr::Lam(x, _, body) => Control::Eval(body.subst(&x, &v)),
                        other => return Err(ill(&other)),
                    },
                    Frame::PairFst(b) => {
                        stack.push(Frame::PairSnd(v));
                        Control::Eval(b)
                    }
                    Frame::PairSnd(a) => Control::Return(TermExpr::pair(a, v)),
                    Frame::MkVarFst(b) => {
                        stack.push(Frame::MkVarSnd(v));
                        Control::Eval(b)
                    }
                    Frame::MkVarSnd(a) => Control::Return(TermExpr::mkvar(a, v)),
                    Frame::Unary(op) => match (op, v) {
                        (UnOp::Fst, TermExpr::Pair(a, _)) => Control::Return(*a),
                        (UnOp::Snd, TermExpr::Pair(_, b)) => Control::Return(*b),
                        (UnOp::Deref, TermExpr::Loc(l)) => {
                            if l >= cfg.locations.len() {
                                return Err(EvalError::UnknownLocation(l));
                            }
                            match cfg.store.get(&l) {
                                Some(stored) => Control::Return(stored.clone()),
                                None => return Ok(Outcome::StuckRead(l)),
                            }
                        }
                        // Reading a bad variable runs its read method.
                        (UnOp::Deref, TermExpr::MkVar(_, read)) => {
                            Control::Eval(TermExpr::app(*read, TermExpr::Skip))
                        }
                        (UnOp::Not, TermExpr::True) => Control::Return(TermExpr::False),
                        (UnOp::Not, TermExpr::False) => Control::Return(TermExpr::True),
                        (UnOp::Succ, TermExpr::Num(n)) => match n.checked_add(1) {
                            Some(k) => Control::Return(TermExpr::Num(k)),
                            None => return Ok(Outcome::Stuck("numeral overflow".into())),
                        },
                        (UnOp::Pred, TermExpr::Num(n)) => {
                            Control::Return(TermExpr::Num(n.saturating_sub(1)))
                        }
                        (UnOp::IsZero, TermExpr::Num(n)) => Control::Return(boolean(n == 0)),
                        (_, other) => return Err(ill(&other)),
                    },
                    Frame::If(a, b) => match v {
                        TermExpr::True => Control::Eval(a),
                        TermExpr::False => Control::Eval(b),
                        other => return Err(ill(&other)),
                    },
                    Frame::AssignTarget(b) => {
                        stack.push(Frame::AssignValue(v));
                        Control::Eval(b)
                    }
                    Frame::AssignValue(target) => match target {
                        TermExpr::Loc(l) => {
                            if l >= cfg.locations.len() {
                                return Err(EvalError::UnknownLocation(l));
                            }
                            cfg.store.insert(l, v);
                            Control::Return(TermExpr::Skip)
                        }
                        // Writing a bad variable runs its write method.
                        TermExpr::MkVar(write, _) => Control::Eval(TermExpr::app(*write, v)),
                        other => return Err(ill(&other)),
                    },
                    Frame::BinLeft(op, b) => {
                        stack.push(Frame::BinRight(op, num(&v)?));
                        Control::Eval(b)
                    }
                    Frame::BinRight(op, a) => {
                        let b = num(&v)?;
                        let r = match op {
                            BinOp::Add => a.checked_add(b).map(TermExpr::Num),
                            BinOp::Sub => Some(TermExpr::Num(a.saturating_sub(b))),
                            BinOp::Mul => a.checked_mul(b).map(TermExpr::Num),
                            BinOp::Eq => Some(boolean(a == b)),
                        };
                        match r {
                            Some(r) => Control::Return(r),
                            None => return Ok(Outcome::Stuck("numeral overflow".into())),
                        }
                    }
                    Frame::DivLeft(b) => {
                        stack.push(Frame::DivRight(num(&v)?));
                        Control::Eval(b)
                    }
                    Frame::DivRight(a) => {
                        let b = num(&v)?;
                        if b == 0 {
                            return Ok(Outcome::Stuck("division by zero".into()));
                        }
                        Control::Return(TermExpr::pair(TermExpr::Num(a / b), TermExpr::Num(a % b)))
                    }
                }
            }
        };
    }
}
