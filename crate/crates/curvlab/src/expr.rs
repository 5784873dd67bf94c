//! `custom:<expr>` nonlinearities: a small expression language in `u` with
//! symbolic differentiation and a quadrature primitive.
//!
//! Grammar: `+ - * / ^`, unary minus, parentheses, numbers, the variable
//! `u` (or `s`), the constants `pi` and `e`, and the functions `exp ln log
//! sqrt sin cos tan sinh cosh tanh`. `^` binds tightest and associates to
//! the right, so `-u^2` is `-(u^2)`.

use std::fmt;

use curvlab_core::pde::CustomNonlinearity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
        }
    }

    /// `g'(a)` as an expression in `a`.
    fn derivative(self, a: &Expr) -> Expr {
        use Expr::*;
        let a = || Box::new(a.clone());
        match self {
            Func::Exp => Call(Func::Exp, a()),
            Func::Ln => Div(Box::new(Num(1.0)), a()),
            Func::Sqrt => Div(Box::new(Num(0.5)), Box::new(Call(Func::Sqrt, a()))),
            Func::Sin => Call(Func::Cos, a()),
            Func::Cos => Neg(Box::new(Call(Func::Sin, a()))),
            Func::Tan => Add(Box::new(Num(1.0)), Box::new(Pow(Box::new(Call(Func::Tan, a())), Box::new(Num(2.0))))),
            Func::Sinh => Call(Func::Cosh, a()),
            Func::Cosh => Call(Func::Sinh, a()),
            Func::Tanh => Sub(Box::new(Num(1.0)), Box::new(Pow(Box::new(Call(Func::Tanh, a())), Box::new(Num(2.0))))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.msg, self.pos)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            // Exponent part: 1e-3, 2.5E+4.
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    i = j;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let v = text.parse().map_err(|_| ParseError { pos: start, msg: format!("bad number '{text}'") })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.at += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "u" | "s" => return Ok(Expr::Var),
                    "pi" => return Ok(Expr::Num(std::f64::consts::PI)),
                    "e" => return Ok(Expr::Num(std::f64::consts::E)),
                    _ => {}
                }
                let Some(f) = Func::lookup(&name) else {
                    self.at -= 1;
                    return self.err(&format!("unknown name '{name}'"));
                };
                if !self.eat('(') {
                    return self.err("expected '(' after function name");
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(Expr::Call(f, Box::new(arg)))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            _ => self.err("expected a number, name or '('"),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let toks = lex(src)?;
        let mut p = Parser { toks, at: 0, end: src.len() };
        let e = p.expr()?;
        if p.at != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => u,
            Expr::Neg(a) => -a.eval(u),
            Expr::Add(a, b) => a.eval(u) + b.eval(u),
            Expr::Sub(a, b) => a.eval(u) - b.eval(u),
            Expr::Mul(a, b) => a.eval(u) * b.eval(u),
            Expr::Div(a, b) => a.eval(u) / b.eval(u),
            Expr::Pow(a, b) => match **b {
                // Integer powers stay defined for negative bases.
                Expr::Num(n) if n.fract() == 0.0 && n.abs() < 64.0 => a.eval(u).powi(n as i32),
                _ => a.eval(u).powf(b.eval(u)),
            },
            Expr::Call(f, a) => f.apply(a.eval(u)),
        }
    }

    fn has_var(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.has_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.has_var() || b.has_var()
            }
        }
    }

    /// `d/du`, lightly simplified.
    pub fn diff(&self) -> Expr {
        use Expr::*;
        let bx = Box::new;
        let d = match self {
            Num(_) => Num(0.0),
            Var => Num(1.0),
            Neg(a) => Neg(bx(a.diff())),
            Add(a, b) => Add(bx(a.diff()), bx(b.diff())),
            Sub(a, b) => Sub(bx(a.diff()), bx(b.diff())),
            Mul(a, b) => Add(bx(Mul(bx(a.diff()), b.clone())), bx(Mul(a.clone(), bx(b.diff())))),
            Div(a, b) => Div(
                bx(Sub(bx(Mul(bx(a.diff()), b.clone())), bx(Mul(a.clone(), bx(b.diff()))))),
                bx(Pow(b.clone(), bx(Num(2.0)))),
            ),
            Pow(a, b) if !b.has_var() => {
                Mul(bx(Mul(b.clone(), bx(Pow(a.clone(), bx(Sub(b.clone(), bx(Num(1.0)))))))), bx(a.diff()))
            }
            // a^b (b' ln a + b a'/a)
            Pow(a, b) => Mul(
                bx(self.clone()),
                bx(Add(
                    bx(Mul(bx(b.diff()), bx(Call(Func::Ln, a.clone())))),
                    bx(Div(bx(Mul(b.clone(), bx(a.diff()))), a.clone())),
                )),
            ),
            Call(f, a) => Mul(bx(f.derivative(a)), bx(a.diff())),
        };
        d.simplify()
    }

    fn simplify(self) -> Expr {
        use Expr::*;
        let bx = Box::new;
        match self {
            Neg(a) => match a.simplify() {
                Num(v) => Num(-v),
                Neg(x) => *x,
                x => Neg(bx(x)),
            },
            Add(a, b) => match (a.simplify(), b.simplify()) {
                (Num(x), Num(y)) => Num(x + y),
                (Num(0.0), e) | (e, Num(0.0)) => e,
                (x, y) => Add(bx(x), bx(y)),
            },
            Sub(a, b) => match (a.simplify(), b.simplify()) {
                (Num(x), Num(y)) => Num(x - y),
                (e, Num(0.0)) => e,
                (Num(0.0), e) => Neg(bx(e)).simplify(),
                (x, y) => Sub(bx(x), bx(y)),
            },
            Mul(a, b) => match (a.simplify(), b.simplify()) {
                (Num(x), Num(y)) => Num(x * y),
                (Num(0.0), _) | (_, Num(0.0)) => Num(0.0),
                (Num(1.0), e) | (e, Num(1.0)) => e,
                (x, y) => Mul(bx(x), bx(y)),
            },
            Div(a, b) => match (a.simplify(), b.simplify()) {
                (Num(0.0), _) => Num(0.0),
                (e, Num(1.0)) => e,
                (x, y) => Div(bx(x), bx(y)),
            },
            Pow(a, b) => match (a.simplify(), b.simplify()) {
                (_, Num(0.0)) => Num(1.0),
                (e, Num(1.0)) => e,
                (x, y) => Pow(bx(x), bx(y)),
            },
            Call(f, a) => Call(f, bx(a.simplify())),
            e => e,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => f.write_str("u"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
            Expr::Call(g, a) => write!(f, "{}({a})", g.name()),
        }
    }
}

// 8-point Gauss–Legendre on [-1, 1].
const GL_NODES: [f64; 4] =
    [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_WEIGHTS: [f64; 4] =
    [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
const PANELS: usize = 16;

/// `f(u)` given as an expression; `f'` is symbolic and `F` is composite
/// Gauss–Legendre quadrature of `f` over `[0, s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprNonlinearity {
    pub source: String,
    pub f: Expr,
    pub df: Expr,
}

impl ExprNonlinearity {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let f = Expr::parse(src)?;
        let df = f.diff();
        Ok(Self { source: src.trim().to_string(), f, df })
    }
}

impl CustomNonlinearity for ExprNonlinearity {
    fn f(&self, s: f64) -> f64 {
        self.f.eval(s)
    }

    fn df(&self, s: f64) -> f64 {
        self.df.eval(s)
    }

    fn primitive(&self, s: f64) -> f64 {
        let h = s / PANELS as f64;
        let mut sum = 0.0;
        for p in 0..PANELS {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
                sum += w * (self.f.eval(mid - 0.5 * h * x) + self.f.eval(mid + 0.5 * h * x));
            }
        }
        0.5 * h * sum
    }

    fn describe(&self) -> String {
        self.source.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, u: f64) -> f64 {
        Expr::parse(s).unwrap().eval(u)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(ev("2 ^ 3 ^ 2", 0.0), 512.0);
        assert_eq!(ev("-u^2", 3.0), -9.0);
        assert_eq!(ev("(1 + u) / 2", 3.0), 2.0);
        assert_eq!(ev("1e-3 * 2E+3", 0.0), 2.0);
        assert!((ev("exp(ln(2)) + sin(pi)", 0.0) - 2.0).abs() < 1e-15);
        assert_eq!(ev("(-u)^3", 2.0), -8.0);
    }

    #[test]
    fn parse_errors_point_at_the_problem() {
        assert_eq!(Expr::parse("1 +").unwrap_err().pos, 3);
        assert_eq!(Expr::parse("foo(u)").unwrap_err().pos, 0);
        assert!(Expr::parse("1 $ 2").is_err());
        assert!(Expr::parse("(1 + u").is_err());
        assert!(Expr::parse("1 2").is_err());
        assert!(Expr::parse("sin u").is_err());
    }

    #[test]
    fn derivatives_match_central_differences() {
        for src in
            ["1 + u + u^2", "exp(u)", "u^u", "sqrt(1 + u^2) / (2 + sin(u))", "tanh(u) * cosh(u) - ln(1 + u)", "tan(u)"]
        {
            let e = ExprNonlinearity::parse(src).unwrap();
            for u in [0.1, 0.7, 1.3] {
                let h = 1e-6;
                let fd = (e.f(u + h) - e.f(u - h)) / (2.0 * h);
                assert!((fd - e.df(u)).abs() < 1e-7 * (1.0 + fd.abs()), "{src} at {u}: {fd} vs {}", e.df(u));
            }
        }
    }

    #[test]
    fn primitive_is_exact_for_polynomials() {
        let e = ExprNonlinearity::parse("1 + 2*u + 3*u^2").unwrap();
        for s in [0.0, 0.5, 2.0, -1.0] {
            assert!((e.primitive(s) - (s + s * s + s * s * s)).abs() < 1e-13);
        }
        let e = ExprNonlinearity::parse("exp(u)").unwrap();
        assert!((e.primitive(1.5) - (1.5f64.exp() - 1.0)).abs() < 1e-13);
    }
}
