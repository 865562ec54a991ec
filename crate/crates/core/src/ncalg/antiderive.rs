//! Exact inverse of `d` on S-free polynomials.

use std::collections::HashMap;

use num_traits::Zero;

use super::{words_of_weight, LetterKind, NcError, NcPoly, Word};

/// Returns the unique `q` without identity term such that `q.derive() == p`.
///
/// Each homogeneous component of weight `g` is matched against the images
/// of all words of weight `g - 1` over the letter kinds present in `p`, and
/// the resulting sparse linear system is reduced exactly.
pub fn antiderive(p: &NcPoly) -> Result<NcPoly, NcError> {
    if p.contains_s() {
        return Err(NcError::SContamination);
    }
    let kinds: Vec<LetterKind> = p.kinds();
    let mut out = NcPoly::zero();
    for (g, comp) in p.weight_components()? {
        if g == 0 {
            return Err(NcError::NotATotalDerivative { weight: 0 });
        }
        out = &out + &antiderive_component(&comp, g, &kinds)?;
    }
    Ok(out)
}

struct Pivot {
    image: NcPoly,
    preimage: NcPoly,
}

fn antiderive_component(p: &NcPoly, g: u32, kinds: &[LetterKind]) -> Result<NcPoly, NcError> {
    let fail = || NcError::NotATotalDerivative { weight: g };
    let mut pivots: HashMap<Word, Pivot> = HashMap::new();
    for b in words_of_weight(g - 1, kinds) {
        if b.is_identity() {
            continue;
        }
        let mut image = NcPoly::word(b.clone()).derive();
        let mut preimage = NcPoly::word(b);
        while let Some((lead, c)) = image.leading() {
            let lead = lead.clone();
            match pivots.get(&lead) {
                Some(piv) => {
                    let f = -&(c / &piv.image.coeff(&lead));
                    image.add_scaled(&piv.image, &f);
                    preimage.add_scaled(&piv.preimage, &f);
                }
                None => {
                    pivots.insert(lead, Pivot { image, preimage });
                    break;
                }
            }
        }
    }

    let mut rest = p.clone();
    let mut q = NcPoly::zero();
    while let Some((lead, c)) = rest.leading() {
        let piv = pivots.get(lead).ok_or_else(fail)?;
        let f = c / &piv.image.coeff(lead);
        debug_assert!(!f.is_zero());
        q.add_scaled(&piv.preimage, &f);
        rest.add_scaled(&piv.image, &-&f);
    }
    Ok(q)
}
