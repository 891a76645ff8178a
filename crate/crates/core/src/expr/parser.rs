use super::lexer::{tokenize, Spanned, Token};
use super::{BinaryOp, Expression, Function, ParseError};

/// Parses `source` into an [`Expression`].
pub fn parse(source: &str) -> Result<Expression, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    parser.expect(Token::End, "operator or end of input")?;
    Ok(expr)
}

enum Arg {
    Vector,
    Scalar(Expression),
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].token
    }

    fn advance(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax_error(&self, expected: &str) -> ParseError {
        let next = self.peek();
        ParseError::Syntax {
            position: next.position,
            expected: expected.to_string(),
            found: next.token.describe(),
        }
    }

    fn expect(&mut self, token: Token, expected: &str) -> Result<Spanned, ParseError> {
        if self.peek().token == token {
            Ok(self.advance())
        } else {
            Err(self.syntax_error(expected))
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().token {
                Token::Plus => BinaryOp::Add,
                Token::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().token {
                Token::Star => BinaryOp::Mul,
                Token::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.factor()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expression, ParseError> {
        let base = self.unary()?;
        if self.peek().token == Token::Caret {
            self.advance();
            let exponent = self.factor()?;
            return Ok(Expression::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.peek().token == Token::Minus {
            self.advance();
            return Ok(Expression::negated(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        let Spanned { token, position } = self.peek().clone();
        match token {
            Token::Number(v) => {
                self.advance();
                Ok(Expression::Number(v))
            }
            Token::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Token::Ident(name) => {
                self.advance();
                if self.peek().token == Token::LParen {
                    self.call(&name, position)
                } else {
                    identifier(&name, position)
                }
            }
            _ => Err(self.syntax_error("number, variable, function call or '('")),
        }
    }

    fn call(&mut self, name: &str, position: usize) -> Result<Expression, ParseError> {
        let vector_fn = matches!(name, "norm" | "dot");
        let scalar_fn = Function::from_name(name);
        if !vector_fn && scalar_fn.is_none() {
            return Err(ParseError::UnknownFunction {
                position,
                name: name.to_string(),
            });
        }
        self.expect(Token::LParen, "'('")?;
        let mut args = Vec::new();
        if self.peek().token != Token::RParen {
            loop {
                let arg_position = self.peek().position;
                args.push((arg_position, self.argument()?));
                if self.peek().token == Token::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Token::RParen, "',' or ')'")?;

        let expected = match name {
            "dot" => 2,
            _ => 1,
        };
        if args.len() != expected {
            return Err(ParseError::BadArity {
                position,
                name: name.to_string(),
                expected,
                found: args.len(),
            });
        }
        match scalar_fn {
            None => {
                if let Some((p, _)) = args.iter().find(|(_, a)| !matches!(a, Arg::Vector)) {
                    return Err(ParseError::Syntax {
                        position: *p,
                        expected: "the vector symbol x".to_string(),
                        found: "a scalar expression".to_string(),
                    });
                }
                Ok(if name == "norm" {
                    Expression::Norm
                } else {
                    Expression::Dot
                })
            }
            Some(func) => match args.pop().expect("arity checked") {
                (p, Arg::Vector) => Err(ParseError::VectorArgument { position: p }),
                (_, Arg::Scalar(e)) => Ok(Expression::call(func, e)),
            },
        }
    }

    fn argument(&mut self) -> Result<Arg, ParseError> {
        let is_bare_x = matches!(&self.peek().token, Token::Ident(n) if n == "x")
            && matches!(self.peek_at(1), Token::Comma | Token::RParen);
        if is_bare_x {
            self.advance();
            return Ok(Arg::Vector);
        }
        self.expr().map(Arg::Scalar)
    }
}

fn identifier(name: &str, position: usize) -> Result<Expression, ParseError> {
    if name == "t" {
        return Ok(Expression::Param);
    }
    if name == "x" {
        return Err(ParseError::VectorArgument { position });
    }
    if let Some(digits) = name.strip_prefix('x') {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            return match digits.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(Expression::Var(i)),
                _ => Err(ParseError::BadVariable {
                    position,
                    name: name.to_string(),
                }),
            };
        }
    }
    Err(ParseError::UnknownIdentifier {
        position,
        name: name.to_string(),
    })
}
