//! Infix expressions with integers, single-letter variables, + − * / ^ and
//! parentheses. Juxtaposition multiplies ("3t^2", "(u+1)t", "xy").

pub trait ExprRing {
    type V: Clone;
    fn int(&self, n: i64) -> Self::V;
    fn var(&self, name: char) -> Option<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    /// None for a zero or unsupported divisor.
    fn div(&self, a: &Self::V, b: &Self::V) -> Option<Self::V>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.column + 1, self.message)
    }
}

struct P<'a, R: ExprRing> {
    r: &'a R,
    s: Vec<char>,
    i: usize,
}

impl<R: ExprRing> P<'_, R> {
    fn err<T>(&self, m: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            column: self.i,
            message: m.into(),
        })
    }
    fn skip(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_whitespace() {
            self.i += 1;
        }
    }
    fn peek(&mut self) -> Option<char> {
        self.skip();
        self.s.get(self.i).copied()
    }
    fn sum(&mut self) -> Result<R::V, ExprError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.i += 1;
                let t = self.product()?;
                self.r.sub(&self.r.int(0), &t)
            }
            Some('+') => {
                self.i += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.i += 1;
                    acc = self.r.add(&acc, &self.product()?);
                }
                Some('-') => {
                    self.i += 1;
                    acc = self.r.sub(&acc, &self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }
    fn product(&mut self) -> Result<R::V, ExprError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.i += 1;
                    acc = self.r.mul(&acc, &self.power()?);
                }
                Some('/') => {
                    self.i += 1;
                    let at = self.i;
                    let d = self.power()?;
                    acc = match self.r.div(&acc, &d) {
                        Some(v) => v,
                        None => {
                            self.i = at;
                            return self.err("division by zero or unsupported division");
                        }
                    };
                }
                Some(c) if c == '(' || c.is_ascii_alphanumeric() => {
                    acc = self.r.mul(&acc, &self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }
    fn power(&mut self) -> Result<R::V, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.i += 1;
            self.skip();
            let e = self.number()?;
            let mut acc = self.r.int(1);
            for _ in 0..e {
                acc = self.r.mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }
    fn number(&mut self) -> Result<i64, ExprError> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected a number");
        }
        let t: String = self.s[start..self.i].iter().collect();
        match t.parse::<i64>() {
            Ok(n) if n <= 1 << 20 => Ok(n),
            _ => {
                self.i = start;
                self.err("number too large")
            }
        }
    }
    fn atom(&mut self) -> Result<R::V, ExprError> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.i += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(self.r.int(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => match self.r.var(c) {
                Some(v) => {
                    self.i += 1;
                    Ok(v)
                }
                None => self.err(format!("unknown symbol '{c}'")),
            },
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of expression"),
        }
    }
}

pub fn parse_expr<R: ExprRing>(r: &R, s: &str) -> Result<R::V, ExprError> {
    let mut p = P {
        r,
        s: s.chars().collect(),
        i: 0,
    };
    let v = p.sum()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Ints;
    impl ExprRing for Ints {
        type V = i64;
        fn int(&self, n: i64) -> i64 {
            n
        }
        fn var(&self, c: char) -> Option<i64> {
            (c == 'x').then_some(10)
        }
        fn add(&self, a: &i64, b: &i64) -> i64 {
            a + b
        }
        fn sub(&self, a: &i64, b: &i64) -> i64 {
            a - b
        }
        fn mul(&self, a: &i64, b: &i64) -> i64 {
            a * b
        }
        fn div(&self, a: &i64, b: &i64) -> Option<i64> {
            (*b != 0 && a % b == 0).then(|| a / b)
        }
    }

    #[test]
    fn precedence_and_juxtaposition() {
        assert_eq!(parse_expr(&Ints, "3x^2 - 2(x+1) + 4/2").unwrap(), 300 - 22 + 2);
        assert_eq!(parse_expr(&Ints, "-x").unwrap(), -10);
        assert_eq!(parse_expr(&Ints, "x x").unwrap(), 100);
        assert_eq!(parse_expr(&Ints, "2 +").unwrap_err().message, "unexpected end of expression");
        assert_eq!(parse_expr(&Ints, "1/0").unwrap_err().column, 2);
        assert!(parse_expr(&Ints, "z").is_err());
    }
}
