//! Drives a matcher over a byte source, one character per step.

use std::io::{self, Write};
use std::time::Instant;

use wildstream::bench::LatencyHistogram;
use wildstream::{StreamMatcher, Symbol};

/// Feeds `input` to `matcher` and writes each occurrence start on its own
/// line, flushing before the next byte is requested.
pub fn run_stream<I, W>(
    matcher: &mut dyn StreamMatcher,
    input: I,
    out: &mut W,
) -> io::Result<LatencyHistogram>
where
    I: IntoIterator<Item = io::Result<u8>>,
    W: Write,
{
    let mut hist = LatencyHistogram::default();
    for byte in input {
        let ch = Symbol::from(byte?);
        let start = Instant::now();
        let report = matcher.process_char(ch);
        hist.record(start.elapsed().as_nanos() as u64);
        if let Some(r) = report {
            writeln!(out, "{}", r.start)?;
            out.flush()?;
        }
    }
    out.flush()?;
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use wildstream::{build_matcher, BuildOptions, EngineKind, Pattern};

    #[test]
    fn writes_one_line_per_match() {
        let p = Pattern::parse("a?a").unwrap();
        let mut m = build_matcher(EngineKind::Thm1, &p, &BuildOptions::seeded(3)).unwrap();
        let mut out = Vec::new();
        let hist = run_stream(m.as_mut(), b"abaaca".iter().map(|&b| Ok(b)), &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0\n3\n");
        assert_eq!(hist.len(), 6);
    }

    #[test]
    fn read_errors_propagate() {
        let p = Pattern::parse("a").unwrap();
        let mut m = build_matcher(EngineKind::Thm1, &p, &BuildOptions::seeded(3)).unwrap();
        let input = vec![Ok(b'a'), Err(io::Error::other("gone")), Ok(b'a')];
        let err = run_stream(m.as_mut(), input, &mut Vec::new()).unwrap_err();
        assert_eq!(err.to_string(), "gone");
    }
}
