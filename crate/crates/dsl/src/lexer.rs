use crate::error::{ErrorKind, ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
    Bang,
    Lt,
    Slash,
    Colon,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Eq => "=",
            Tok::Bang => "!",
            Tok::Lt => "<",
            Tok::Slash => "/",
            Tok::Colon => ":",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits `text` into tokens; positions start at `start`.
pub fn lex(text: &str, start: Pos) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = start;
    let advance = |c: char, pos: &mut Pos| {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let here = pos;
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut pos);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                advance(c, &mut pos);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    advance(c, &mut pos);
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(s), pos: here });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    chars.next();
                    advance(c, &mut pos);
                } else {
                    break;
                }
            }
            let n =
                s.parse().map_err(|_| ParseError::new(ErrorKind::Lexical, here, format!("number {s} is too large")))?;
            out.push(Token { tok: Tok::Num(n), pos: here });
            continue;
        }
        if c == '"' || c == '\'' {
            chars.next();
            advance(c, &mut pos);
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some(q) if q == c => {
                        advance(q, &mut pos);
                        break;
                    }
                    Some('\\') => {
                        advance('\\', &mut pos);
                        match chars.next() {
                            Some(e @ ('\\' | '\'' | '"')) => {
                                s.push(e);
                                advance(e, &mut pos);
                            }
                            _ => return Err(ParseError::new(ErrorKind::Lexical, pos, "unknown escape in string")),
                        }
                    }
                    Some('\n') | None => {
                        return Err(ParseError::new(ErrorKind::Lexical, here, "unterminated string"));
                    }
                    Some(c) => {
                        s.push(c);
                        advance(c, &mut pos);
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), pos: here });
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            '!' => Tok::Bang,
            '<' => Tok::Lt,
            '/' => Tok::Slash,
            ':' => Tok::Colon,
            _ => {
                return Err(ParseError::new(ErrorKind::Lexical, here, format!("unexpected character {c:?}")));
            }
        };
        chars.next();
        advance(c, &mut pos);
        out.push(Token { tok, pos: here });
    }
    out.push(Token { tok: Tok::Eof, pos });
    Ok(out)
}
