use super::Symbol;

/// Suffix of `pad^n · stream` of length `n`.
pub fn last_n(n: usize, stream: &[Symbol], pad: Symbol) -> Vec<Symbol> {
    let take = stream.len().min(n);
    let mut out = vec![pad; n - take];
    out.extend_from_slice(&stream[stream.len() - take..]);
    out
}
