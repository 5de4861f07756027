//! Small helpers for the canonical text forms of morphisms and objects.

/// Splits on `sep` occurring outside any `()`, `[]` or `<>` nesting.
pub fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts
}

/// Strips one pair of enclosing parentheses.
pub fn strip_parens(text: &str) -> Option<&str> {
    text.trim().strip_prefix('(')?.strip_suffix(')')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_split() {
        assert_eq!(
            split_top_level("(1,2);a;[0 1]", ';'),
            vec!["(1,2)", "a", "[0 1]"]
        );
        assert_eq!(split_top_level("<a,(1,2)>,b", ','), vec!["<a,(1,2)>", "b"]);
    }
}
