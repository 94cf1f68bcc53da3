/// Returns the body of the first markdown code fence in `text`, trimmed.
/// Text without a fence line is returned unchanged.
///
/// A fence line is any line starting with three backticks; an opening fence
/// may carry a language tag. An unterminated fence runs to the end of text.
pub fn strip_code_fences(text: &str) -> &str {
    let is_fence = |line: &str| line.trim_start().starts_with("```");
    let mut offset = 0;
    let mut body_start = None;
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        if !is_fence(line) {
            continue;
        }
        match body_start {
            None => body_start = Some(offset),
            Some(start) => return text[start..line_start].trim(),
        }
    }
    match body_start {
        Some(start) => text[start..].trim(),
        None => text,
    }
}
