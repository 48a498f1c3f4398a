use crate::error::{Error, Result};
use crate::logic::formula::Formula;
use crate::words::Alphabet;

/// For `ζ: A → B` (given as `zeta[a] = b`) and `φ` over `B`, the formula over
/// `A` obtained by replacing each `P[b](x)` with the disjunction of `P[a](x)`
/// over `ζ(a) = b`. An empty disjunction is `false`.
pub fn relabel(zeta: &[usize], domain: &Alphabet, codomain: &Alphabet, f: &Formula) -> Result<Formula> {
    if zeta.len() != domain.len() || zeta.iter().any(|&b| b >= codomain.len()) {
        return Err(Error::AlphabetMismatch("letter map is not a map between the alphabets".into()));
    }
    let mut err = None;
    let out = f.map_letters(&mut |symbol, var| match codomain.require(symbol) {
        Ok(b) => Formula::or_all(
            (0..domain.len())
                .filter(|&a| zeta[a] == b)
                .map(|a| Formula::letter(domain.symbol(a), var)),
        ),
        Err(e) => {
            err.get_or_insert(e);
            Formula::False
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
