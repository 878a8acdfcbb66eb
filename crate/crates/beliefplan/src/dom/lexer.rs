use super::ast::Pos;
use super::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `?name` with an optional `+k`/`-k` offset.
    Var(String, i32),
    Int(i32),
    Punct(char),
    DotDot,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Var(s, 0) => format!("`?{s}`"),
            Tok::Var(s, k) => format!("`?{s}{k:+}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::DotDot => "`..`".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

fn var_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn number(chars: &[char], mut i: usize) -> (usize, String) {
    let start = i;
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
    }
    (i, chars[start..i].iter().collect())
}

/// Tokens of one line; `#` starts a comment.
pub fn lex_line(line: &str, lineno: usize) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line: lineno, col: i + 1 };
        let err = |msg: String| Diagnostic { pos, message: msg };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if ident_start(c) {
            let start = i;
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            continue;
        }
        if c == '?' {
            i += 1;
            let start = i;
            while i < chars.len() && var_char(chars[i]) {
                i += 1;
            }
            if start == i {
                return Err(err("expected a variable name after `?`".into()));
            }
            let name: String = chars[start..i].iter().collect();
            let mut offset = 0;
            if i + 1 < chars.len() && (chars[i] == '+' || chars[i] == '-') && chars[i + 1].is_ascii_digit() {
                let sign = if chars[i] == '-' { -1 } else { 1 };
                let (j, digits) = number(&chars, i + 1);
                offset = sign * digits.parse::<i32>().map_err(|_| err("offset out of range".into()))?;
                i = j;
            }
            out.push(Token { tok: Tok::Var(name, offset), pos });
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let neg = c == '-';
            let (j, digits) = number(&chars, if neg { i + 1 } else { i });
            let n: i32 = digits.parse().map_err(|_| err("integer out of range".into()))?;
            out.push(Token { tok: Tok::Int(if neg { -n } else { n }), pos });
            i = j;
            continue;
        }
        if c == '.' && chars.get(i + 1) == Some(&'.') {
            out.push(Token { tok: Tok::DotDot, pos });
            i += 2;
            continue;
        }
        if "(),:=<[]".contains(c) {
            out.push(Token { tok: Tok::Punct(c), pos });
            i += 1;
            continue;
        }
        return Err(err(format!("unexpected character `{c}`")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex_line(s, 1).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn hyphenated_names_and_offsets() {
        assert_eq!(
            toks("eff BallsInBox(?b) = ?n+1, add-salt # note"),
            vec![
                Tok::Ident("eff".into()),
                Tok::Ident("BallsInBox".into()),
                Tok::Punct('('),
                Tok::Var("b".into(), 0),
                Tok::Punct(')'),
                Tok::Punct('='),
                Tok::Var("n".into(), 1),
                Tok::Punct(','),
                Tok::Ident("add-salt".into()),
            ]
        );
    }

    #[test]
    fn ranges_and_negative_numbers() {
        assert_eq!(
            toks("range R = -2..5"),
            vec![
                Tok::Ident("range".into()),
                Tok::Ident("R".into()),
                Tok::Punct('='),
                Tok::Int(-2),
                Tok::DotDot,
                Tok::Int(5),
            ]
        );
        assert_eq!(toks("?k-1"), vec![Tok::Var("k".into(), -1)]);
    }

    #[test]
    fn reports_column() {
        let e = lex_line("op a $", 7).unwrap_err();
        assert_eq!((e.pos.line, e.pos.col), (7, 6));
    }
}
