//! Statement splitting shared by the presentation and job-file parsers.

/// One `;`-terminated statement (or a `{ ... }` block), with comments
/// blanked out so byte offsets still map to source positions.
#[derive(Clone, Debug)]
pub(crate) struct Statement {
    pub text: String,
    /// Line and column (1-based) of the first character of `text`.
    pub origin: (usize, usize),
}

impl Statement {
    /// First word and the remainder, with the remainder's origin.
    pub fn split_keyword(&self) -> (&str, &str, (usize, usize)) {
        let t = self.text.as_str();
        let end = t.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(t.len());
        let rest = &t[end..];
        let origin = crate::ring::expr::locate(t, end, self.origin);
        (&t[..end], rest, origin)
    }
}

pub(crate) fn split_statements(src: &str) -> Vec<Statement> {
    let mut cleaned = String::with_capacity(src.len());
    let mut in_comment = false;
    for ch in src.chars() {
        match ch {
            '\n' => {
                in_comment = false;
                cleaned.push('\n');
            }
            '#' => {
                in_comment = true;
                cleaned.push(' ');
            }
            _ if in_comment => cleaned.push(' '),
            _ => cleaned.push(ch),
        }
    }
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let flush = |out: &mut Vec<Statement>, from: usize, to: usize| {
        let raw = &cleaned[from..to];
        let lead = raw.len() - raw.trim_start().len();
        let text = raw.trim();
        if !text.is_empty() {
            let origin = crate::ring::expr::locate(&cleaned, from + lead, (1, 1));
            out.push(Statement { text: text.to_string(), origin });
        }
    };
    for (i, ch) in cleaned.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => {
                depth = depth.saturating_sub(1);
                if depth == 0 {
                    flush(&mut out, start, i + 1);
                    start = i + 1;
                }
            }
            ';' if depth == 0 => {
                flush(&mut out, start, i);
                start = i + 1;
            }
            _ => {}
        }
    }
    flush(&mut out, start, cleaned.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statements_and_blocks() {
        let src = "gens a b; # comment ; here\nrel a b\n  a^-1 ;\ntask wada { remove = a ; }\nvars t;";
        let st = split_statements(src);
        let texts: Vec<&str> = st.iter().map(|s| s.text.as_str()).collect();
        assert_eq!(texts, vec!["gens a b", "rel a b\n  a^-1", "task wada { remove = a ; }", "vars t"]);
        assert_eq!(st[1].origin, (2, 1));
        assert_eq!(st[2].origin, (4, 1));
        assert_eq!(st[3].origin, (5, 1));
    }
}
