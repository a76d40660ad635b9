//! Expressions in `s` for the scalar parameters of the lightlike family,
//! evaluated on jets so derivatives stay exact.

use std::sync::Arc;

use ruled_imcf::{Jet, ScalarFn};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var,
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    fn by_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, x: Jet) -> Jet {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.sin() / x.cos(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.sinh() / x.cosh(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

impl Node {
    fn constant(&self) -> Option<f64> {
        match self {
            Node::Num(v) => Some(*v),
            Node::Var => None,
            Node::Neg(a) => a.constant().map(|v| -v),
            Node::Bin(op, a, b) => {
                let (a, b) = (a.constant()?, b.constant()?);
                Some(match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    '/' => a / b,
                    _ => a.powf(b),
                })
            }
            Node::Call(f, a) => Some(f.apply(Jet::constant(a.constant()?)).value()),
        }
    }

    fn eval(&self, s: Jet) -> Jet {
        match self {
            Node::Num(v) => Jet::constant(*v),
            Node::Var => s,
            Node::Neg(a) => -a.eval(s),
            Node::Bin(op, a, b) => match op {
                '+' => a.eval(s) + b.eval(s),
                '-' => a.eval(s) - b.eval(s),
                '*' => a.eval(s) * b.eval(s),
                '/' => a.eval(s) / b.eval(s),
                _ => match b.constant() {
                    Some(p) if p.fract() == 0.0 && p.abs() <= 64.0 => a.eval(s).powi(p as i32),
                    Some(p) => a.eval(s).powf(p),
                    None => (a.eval(s).ln() * b.eval(s)).exp(),
                },
            },
            Node::Call(f, a) => f.apply(a.eval(s)),
        }
    }
}

/// A parsed expression in the variable `s`.
#[derive(Debug, Clone)]
pub struct Expr {
    root: Arc<Node>,
}

impl Expr {
    /// Parse `src`. Supports numbers, `s`, `pi`, `+ - * / ^`, parentheses and
    /// `sin cos tan sinh cosh tanh exp ln log sqrt`.
    pub fn parse(src: &str) -> Result<Expr, String> {
        let mut p = Parser { chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
        if p.chars.is_empty() {
            return Err("empty expression".into());
        }
        let root = p.sum()?;
        if p.pos != p.chars.len() {
            return Err(format!("unexpected '{}' in expression `{src}`", p.chars[p.pos]));
        }
        Ok(Expr { root: Arc::new(root) })
    }

    #[cfg(test)]
    pub fn eval(&self, s: f64) -> f64 {
        self.root.eval(Jet::constant(s)).value()
    }

    pub fn to_scalar_fn(&self) -> ScalarFn {
        let root = self.root.clone();
        ScalarFn::new(move |s| root.eval(s))
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Node, String> {
        let mut lhs = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.product()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Node, String> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, String> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, String> {
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Node::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, String> {
        match self.peek() {
            None => Err("expression ends unexpectedly".into()),
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match name.as_str() {
                    "s" => Ok(Node::Var),
                    "pi" => Ok(Node::Num(std::f64::consts::PI)),
                    _ => {
                        let f = Func::by_name(&name).ok_or_else(|| format!("unknown name `{name}`"))?;
                        if !self.eat('(') {
                            return Err(format!("`{name}` needs an argument in parentheses"));
                        }
                        let arg = self.sum()?;
                        if !self.eat(')') {
                            return Err("missing ')'".into());
                        }
                        Ok(Node::Call(f, Box::new(arg)))
                    }
                }
            }
            Some(c) => Err(format!("unexpected '{c}'")),
        }
    }

    fn number(&mut self) -> Result<Node, String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some('e' | 'E'))
            && self.chars.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit() || *c == '-' || *c == '+')
        {
            self.pos += 2;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map(Node::Num).map_err(|_| format!("bad number `{text}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        let cases = [
            ("s", 1.5, 1.5),
            ("s^2+1", 2.0, 5.0),
            ("1 + sin(s)^2", 0.3, 1.0 + 0.3f64.sin().powi(2)),
            ("-s^2", 3.0, -9.0),
            ("2*pi/4", 0.0, std::f64::consts::FRAC_PI_2),
            ("exp(-s)*cos(2*s)", 0.5, (-0.5f64).exp() * 1.0f64.cos()),
            ("1e-3*s", 2.0, 2e-3),
            ("s^s", 2.0, 4.0),
        ];
        for (src, s, want) in cases {
            let e = Expr::parse(src).unwrap();
            assert!((e.eval(s) - want).abs() < 1e-14, "{src}: {} vs {want}", e.eval(s));
        }
    }

    #[test]
    fn derivatives_are_exact() {
        let f = Expr::parse("s^3 - 2*s").unwrap().to_scalar_fn();
        let j = f.eval_jet(2.0);
        assert_eq!((j.d(0), j.d(1), j.d(2), j.d(3)), (4.0, 10.0, 12.0, 6.0));
    }

    #[test]
    fn errors() {
        for bad in ["", "s +", "foo(s)", "sin s", "(s", "s)", "1..2", "x"] {
            assert!(Expr::parse(bad).is_err(), "{bad}");
        }
    }
}
