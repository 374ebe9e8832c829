use super::{Elem, FiniteAlgebra, Signature};
use crate::congruence::{is_congruence, Partition};
use crate::error::{Error, Result};

/// Largest universe [`direct_product`] will build.
pub const PRODUCT_SIZE_LIMIT: usize = 1 << 12;

/// Direct product with row-major element indices: `(e_1, .., e_k)` is
/// `((e_1 * n_2 + e_2) * n_3 + ..) * n_k + e_k`.
pub fn direct_product(signature: &Signature, algs: &[&FiniteAlgebra]) -> Result<FiniteAlgebra> {
    for alg in algs {
        if !alg.signature().same_symbols(signature) {
            return Err(Error::SignatureMismatch(format!(
                "{} has signature {}, expected {}",
                alg.name(),
                alg.signature(),
                signature
            )));
        }
    }
    let size = algs.iter().try_fold(1usize, |acc, a| {
        acc.checked_mul(a.size())
            .filter(|&s| s <= PRODUCT_SIZE_LIMIT)
            .ok_or(Error::SizeGuard {
                size: usize::MAX,
                limit: PRODUCT_SIZE_LIMIT,
            })
    })?;
    for sym in signature.symbols() {
        if super::table_len(size, sym.arity).is_none_or(|l| l > 1 << 24) {
            return Err(Error::SizeGuard {
                size,
                limit: PRODUCT_SIZE_LIMIT,
            });
        }
    }
    let decode = |mut e: Elem| -> Vec<Elem> {
        let mut coords = vec![0; algs.len()];
        for (i, alg) in algs.iter().enumerate().rev() {
            coords[i] = e % alg.size();
            e /= alg.size();
        }
        coords
    };
    let coords: Vec<Vec<Elem>> = (0..size).map(decode).collect();
    let op_maps: Vec<Vec<usize>> = algs
        .iter()
        .map(|a| {
            signature
                .symbols()
                .iter()
                .map(|s| a.op_index(&s.name).unwrap())
                .collect()
        })
        .collect();
    let mut comp_args = Vec::new();
    let alg = FiniteAlgebra::from_fn(
        algs.iter().map(|a| a.name()).collect::<Vec<_>>().join("x"),
        signature.clone(),
        size,
        |op, args| {
            algs.iter().enumerate().fold(0, |acc, (i, alg)| {
                comp_args.clear();
                comp_args.extend(args.iter().map(|&a| coords[a][i]));
                acc * alg.size() + alg.apply(op_maps[i][op], &comp_args)
            })
        },
    )?;
    let names = coords
        .iter()
        .map(|c| {
            let parts: Vec<String> = c
                .iter()
                .zip(algs)
                .map(|(&e, a)| a.element_name(e))
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    alg.with_element_names(names)
}

/// Quotient by a congruence. Blocks are ordered by least representative, so the
/// canonical map is [`Partition::block_index`].
pub fn quotient(alg: &FiniteAlgebra, part: &Partition) -> Result<FiniteAlgebra> {
    if !is_congruence(alg, part)? {
        return Err(Error::NotCongruence(format!("{part}")));
    }
    let blocks = part.blocks();
    let block_of = part.block_index();
    let reps: Vec<Elem> = blocks.iter().map(|b| b[0]).collect();
    let mut rep_args = Vec::new();
    let q = FiniteAlgebra::from_fn(
        format!("{}/~", alg.name()),
        alg.signature().clone(),
        blocks.len(),
        |op, args| {
            rep_args.clear();
            rep_args.extend(args.iter().map(|&b| reps[b]));
            block_of[alg.apply(op, &rep_args)]
        },
    )?;
    let names = blocks
        .iter()
        .map(|b| {
            if b.len() == 1 {
                alg.element_name(b[0])
            } else {
                let parts: Vec<String> = b.iter().map(|&e| alg.element_name(e)).collect();
                format!("[{}]", parts.join(","))
            }
        })
        .collect();
    q.with_element_names(names)
}
