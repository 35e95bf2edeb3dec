use crate::check::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Backslash,
    Arrow,
    LeftArrow,
    Lt,
    Gt,
    Ap,
    At,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Equals,
    Star,
    Dot,
    Proj1,
    Proj2,
    Later,
    Meet,
    Join,
    Minus,
    FaceBot,
    FaceTop,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Backslash => "\\",
            Tok::Arrow => "->",
            Tok::LeftArrow => "<-",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Ap => "<*>",
            Tok::At => "@",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Equals => "=",
            Tok::Star => "*",
            Tok::Dot => ".",
            Tok::Proj1 => ".1",
            Tok::Proj2 => ".2",
            Tok::Later => "|>",
            Tok::Meet => "/\\",
            Tok::Join => "\\/",
            Tok::Minus => "-",
            Tok::FaceBot => "0F",
            Tok::FaceTop => "1F",
            _ => "",
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "module", "where", "import", "postulate", "data", "U", "N", "Path", "comp", "transport", "next", "pure",
    "dfix", "fix", "natrec", "suc", "zero",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Debug)]
pub struct LexError {
    pub message: String,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Split source text into tokens. Positions are 1-based (line, column),
/// columns counted in characters.
pub fn lex(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let peek = |n: usize| chars.get(k + n).copied();
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if c == '-' && peek(1) == Some('-') {
            while k < chars.len() && chars[k] != '\n' {
                k += 1;
            }
            continue;
        }
        let start = (line, col);
        let (tok, len) = if is_ident_start(c) {
            let mut n = 1;
            while peek(n).is_some_and(is_ident_char) {
                n += 1;
            }
            (Tok::Ident(chars[k..k + n].iter().collect()), n)
        } else if c.is_ascii_digit() {
            let mut n = 1;
            while peek(n).is_some_and(|c| c.is_ascii_digit()) {
                n += 1;
            }
            let text: String = chars[k..k + n].iter().collect();
            if peek(n) == Some('F') && !peek(n + 1).is_some_and(is_ident_char) && (text == "0" || text == "1") {
                (if text == "0" { Tok::FaceBot } else { Tok::FaceTop }, n + 1)
            } else {
                let v = text.parse::<u64>().map_err(|_| LexError {
                    message: format!("numeral `{text}` is too large"),
                    span: Span {
                        start,
                        end: (line, col + n),
                    },
                })?;
                (Tok::Num(v), n)
            }
        } else {
            let two: String = [Some(c), peek(1)].iter().flatten().collect();
            match (c, two.as_str()) {
                (_, "->") => (Tok::Arrow, 2),
                (_, "<-") => (Tok::LeftArrow, 2),
                (_, "|>") => (Tok::Later, 2),
                (_, "/\\") => (Tok::Meet, 2),
                (_, "\\/") => (Tok::Join, 2),
                ('<', _) if peek(1) == Some('*') && peek(2) == Some('>') => (Tok::Ap, 3),
                ('.', _) if matches!(peek(1), Some('1') | Some('2')) && !peek(2).is_some_and(|c| c.is_ascii_digit()) => {
                    (if peek(1) == Some('1') { Tok::Proj1 } else { Tok::Proj2 }, 2)
                }
                ('\\', _) | ('λ', _) => (Tok::Backslash, 1),
                ('▷', _) => (Tok::Later, 1),
                ('←', _) => (Tok::LeftArrow, 1),
                ('→', _) => (Tok::Arrow, 1),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                ('@', _) => (Tok::At, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                (':', _) => (Tok::Colon, 1),
                ('=', _) => (Tok::Equals, 1),
                ('*', _) | ('×', _) => (Tok::Star, 1),
                ('.', _) => (Tok::Dot, 1),
                ('-', _) => (Tok::Minus, 1),
                _ => {
                    return Err(LexError {
                        message: format!("unexpected character `{c}`"),
                        span: Span {
                            start,
                            end: (line, col + 1),
                        },
                    })
                }
            }
        };
        k += len;
        col += len;
        out.push(Token {
            tok,
            span: Span { start, end: (line, col) },
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span {
            start: (line, col),
            end: (line, col),
        },
    });
    Ok(out)
}
