use alloc::sync::Arc;
use core::cmp::Ordering;
use core::fmt;

/// A 1-based, end-exclusive source region.
///
/// `end_col` points one column past the last character covered, so a
/// zero-width span (used at end of input) has equal start and end.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(file: Arc<str>, start: (u32, u32), end: (u32, u32)) -> Self {
        debug_assert!(start.0 >= 1 && start.1 >= 1);
        debug_assert!(start <= end);
        SourceSpan {
            file,
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    /// Placeholder used for synthesized nodes and span-insensitive comparison.
    pub fn dummy() -> Self {
        SourceSpan::new(Arc::from(""), (1, 1), (1, 1))
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.end_line, self.end_col)
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan::new(
            self.file.clone(),
            self.start().min(other.start()),
            self.end().max(other.end()),
        )
    }
}

impl Default for SourceSpan {
    fn default() -> Self {
        SourceSpan::dummy()
    }
}

impl PartialOrd for SourceSpan {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SourceSpan {
    fn cmp(&self, other: &Self) -> Ordering {
        (&*self.file, self.start(), self.end()).cmp(&(&*other.file, other.start(), other.end()))
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}
