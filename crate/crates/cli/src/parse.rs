//! Lexer and recursive-descent parser for field specifications and
//! expressions.
//!
//! ```text
//! input    := expr [ "over" field ]
//! field    := base { "((" ident "))" }
//! base     := "GF(" int [ "^" int ] [ ";" "m=" expr ] ")"
//!           | "QQ" [ "(" sqrt { "," sqrt } ")" ]
//!           | base "[" ident ":" expr "]"
//! expr     := term { ("+" | "-") term }
//! term     := unary { ("*" | "/") unary }
//! unary    := "-" unary | power
//! power    := atom [ "^" exponent ]
//! exponent := int | "-" int | "(" rat { "," rat } ")"
//! atom     := int | ident | "sqrt(" int ")" | "O(" expr ")"
//!           | "<" rat { "," rat } ">" | "(" expr ")"
//! ```

use std::fmt;

use gradval::value_groups::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(chars[start..i].iter().collect())
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if "+-*/^()<>,;=[]:".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError { line, column, message: format!("unexpected character '{}'", c) });
        };
        column += i - start;
        out.push(Token { tok, line: l0, column: c0 });
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(String),
    Var(String),
    /// `<g_0, ..., g_(m-1)>`: the graded monomial of that grade.
    Grade(Vec<Rat>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Exponent vectors of length above one only apply to `t` in crossed
    /// products.
    Pow(Box<Expr>, Vec<Rat>),
    BigO(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseSpec {
    Gf { p: u64, k: u32, modulus: Option<Expr> },
    Rationals { radicands: Vec<i64> },
    Tower { base: Box<BaseSpec>, var: String, modulus: Expr },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub base: BaseSpec,
    /// Series variables, innermost first.
    pub vars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Input {
    pub expr: Expr,
    pub field: Option<FieldSpec>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, column: t.column, message: message.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{}'", c))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Ident(name.into()) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{}'", name))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match self.peek().clone() {
            Tok::Int(s) => match s.parse() {
                Ok(v) => {
                    self.bump();
                    Ok(v)
                }
                Err(_) => self.err(format!("integer {} is too large", s)),
            },
            _ => self.err("expected an integer"),
        }
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        if self.is_sym('-') {
            self.bump();
            Ok(-self.int()?)
        } else {
            self.int()
        }
    }

    fn rat(&mut self) -> Result<Rat, ParseError> {
        let n = self.signed_int()?;
        if self.is_sym('/') {
            self.bump();
            let d = self.int()?;
            if d == 0 {
                return self.err("zero denominator");
            }
            Ok(Rat::new(n, d))
        } else {
            Ok(Rat::from(n))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.is_sym('-') {
                self.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.is_sym('/') {
                self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_sym('-') {
            self.bump();
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.bump();
        let e = if self.is_sym('(') {
            self.bump();
            let mut v = vec![self.rat()?];
            while self.is_sym(',') {
                self.bump();
                v.push(self.rat()?);
            }
            self.expect(')')?;
            v
        } else {
            vec![Rat::from(self.signed_int()?)]
        };
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(Expr::Int(s))
            }
            Tok::Ident(name) if name == "O" && *self.peek_at(1) == Tok::Sym('(') => {
                self.bump();
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(Expr::BigO(Box::new(inner)))
            }
            Tok::Ident(name) if name == "sqrt" && *self.peek_at(1) == Tok::Sym('(') => {
                self.bump();
                self.bump();
                let d = self.signed_int()?;
                self.expect(')')?;
                Ok(Expr::Var(format!("sqrt({})", d)))
            }
            Tok::Ident(name) => {
                if name == "over" {
                    return self.err("expected an expression before 'over'");
                }
                self.bump();
                Ok(Expr::Var(name))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('<') => {
                self.bump();
                let mut g = vec![self.rat()?];
                while self.is_sym(',') {
                    self.bump();
                    g.push(self.rat()?);
                }
                self.expect('>')?;
                Ok(Expr::Grade(g))
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Sym(c) => self.err(format!("unexpected '{}'", c)),
        }
    }

    fn base(&mut self) -> Result<BaseSpec, ParseError> {
        let mut base = match self.peek().clone() {
            Tok::Ident(n) if n == "GF" => {
                self.bump();
                self.expect('(')?;
                let (line, column) = (self.toks[self.pos].line, self.toks[self.pos].column);
                let q = self.int()?;
                let (p, k) = if self.is_sym('^') {
                    self.bump();
                    let k = self.int()?;
                    if !gradval::exact_fields::prime_power(q as u64).map_or(false, |(_, e)| e == 1) {
                        return Err(ParseError { line, column, message: format!("{} is not a prime", q) });
                    }
                    (q as u64, k as u32)
                } else {
                    match gradval::exact_fields::prime_power(q as u64) {
                        Some((p, k)) => (p, k),
                        None => {
                            return Err(ParseError {
                                line,
                                column,
                                message: format!("{} is not a prime power", q),
                            })
                        }
                    }
                };
                let modulus = if self.is_sym(';') {
                    self.bump();
                    self.expect_ident("m")?;
                    self.expect('=')?;
                    Some(self.expr()?)
                } else {
                    None
                };
                self.expect(')')?;
                BaseSpec::Gf { p, k, modulus }
            }
            Tok::Ident(n) if n == "QQ" || n == "Q" => {
                self.bump();
                let mut radicands = Vec::new();
                if self.is_sym('(') && !matches!(self.peek_at(1), Tok::Sym('(')) {
                    self.bump();
                    loop {
                        self.expect_ident("sqrt")?;
                        self.expect('(')?;
                        radicands.push(self.signed_int()?);
                        self.expect(')')?;
                        if self.is_sym(',') {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    self.expect(')')?;
                }
                BaseSpec::Rationals { radicands }
            }
            _ => return self.err("expected a field (GF(q) or QQ)"),
        };
        while self.is_sym('[') {
            self.bump();
            let var = match self.bump() {
                Tok::Ident(v) => v,
                _ => return self.err("expected a generator name"),
            };
            self.expect(':')?;
            let modulus = self.expr()?;
            self.expect(']')?;
            base = BaseSpec::Tower { base: Box::new(base), var, modulus };
        }
        Ok(base)
    }

    fn field(&mut self) -> Result<FieldSpec, ParseError> {
        let base = self.base()?;
        let mut vars = Vec::new();
        while self.is_sym('(') && *self.peek_at(1) == Tok::Sym('(') {
            self.bump();
            self.bump();
            match self.bump() {
                Tok::Ident(v) => vars.push(v),
                _ => return self.err("expected a variable name"),
            }
            self.expect(')')?;
            self.expect(')')?;
        }
        Ok(FieldSpec { base, vars })
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            Tok::Sym(c) => self.err(format!("unexpected '{}'", c)),
            Tok::Ident(s) | Tok::Int(s) => self.err(format!("unexpected '{}'", s)),
        }
    }
}

pub fn parse_input(text: &str) -> Result<Input, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let expr = p.expr()?;
    let field = if *p.peek() == Tok::Ident("over".into()) {
        p.bump();
        Some(p.field()?)
    } else {
        None
    };
    p.end()?;
    Ok(Input { expr, field })
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    p.end()?;
    Ok(e)
}

pub fn parse_field(text: &str) -> Result<FieldSpec, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.field()?;
    p.end()?;
    Ok(f)
}
