use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Name(String),
    Var(String),
    Int(i64),
    Float(f64),
    /// Operators and punctuation, including the clause terminator `.`.
    Punct(&'static str),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

impl Token {
    pub fn is(&self, p: &str) -> bool {
        matches!(&self.tok, Tok::Punct(q) if *q == p)
    }
}

/// Longest match first.
const PUNCT: [&str; 27] = [
    ":-", "?-", "::", "\\+", "\\=", "<=", "=<", ">=", "++", "--", "..", "(", ")", "[", "]", ",", "|", "~", "@", "=",
    "<", ">", "+", "-", "*", "/", ".",
];

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for k in 0..n {
            if chars[*i + k] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        }
        *i += n;
    };

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (tl, tc) = (line, col);
        let start = i;
        let tok = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let mut is_float = false;
            if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                is_float = true;
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    is_float = true;
                    j = k;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
            }
            let text: String = chars[i..j].iter().collect();
            advance(&mut i, &mut line, &mut col, j - start);
            if is_float {
                Tok::Float(
                    text.parse()
                        .map_err(|_| ParseError::at(tl, tc, format!("bad number {text}")))?,
                )
            } else {
                Tok::Int(
                    text.parse()
                        .map_err(|_| ParseError::at(tl, tc, format!("integer {text} out of range")))?,
                )
            }
        } else if c.is_alphabetic() || c == '_' || c == '$' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            advance(&mut i, &mut line, &mut col, j - start);
            if c.is_uppercase() || c == '_' {
                Tok::Var(text)
            } else {
                Tok::Name(text)
            }
        } else if c == '\'' {
            let mut j = i + 1;
            let mut text = String::new();
            loop {
                match chars.get(j) {
                    None => return Err(ParseError::at(tl, tc, "unterminated quoted atom")),
                    Some('\\') if chars.get(j + 1) == Some(&'\'') => {
                        text.push('\'');
                        j += 2;
                    }
                    Some('\'') => {
                        j += 1;
                        break;
                    }
                    Some(&ch) => {
                        text.push(ch);
                        j += 1;
                    }
                }
            }
            advance(&mut i, &mut line, &mut col, j - start);
            Tok::Name(text)
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let p = PUNCT
                .iter()
                .find(|p| rest.starts_with(**p))
                .ok_or_else(|| ParseError::at(tl, tc, format!("unexpected character '{c}'")))?;
            // A `.` ends a clause only when followed by layout, a comment, or the end of input.
            if *p == "." {
                let next = chars.get(i + 1);
                if !matches!(next, None | Some('%')) && !next.is_some_and(|n| n.is_whitespace()) {
                    return Err(ParseError::at(tl, tc, "unexpected '.'"));
                }
            }
            advance(&mut i, &mut line, &mut col, p.chars().count());
            Tok::Punct(p)
        };
        out.push(Token { tok, line: tl, col: tc });
    }
    Ok(out)
}
