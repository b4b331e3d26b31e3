use super::{neighbors_j, JInvariant};
use crate::error::{Error, Result};

/// Coefficients of the finalisation map c0 + c1 t -> a c0 + b c1 (mod p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CglConstants {
    pub a: u64,
    pub b: u64,
}

impl Default for CglConstants {
    fn default() -> Self {
        CglConstants { a: 1, b: 1 }
    }
}

/// CGL-style hash: each bit selects one of the two non-backtracking
/// neighbours (sorted canonically) of the current vertex.
///
/// Returns the end vertex and the finalised digest in F_p.
pub fn cgl_hash(
    j0: JInvariant,
    j_prev: JInvariant,
    msg: &[bool],
    consts: CglConstants,
) -> Result<(JInvariant, u64)> {
    if !neighbors_j(j0)?.iter().any(|(j, _)| *j == j_prev) {
        return Err(Error::InconsistentWitness(format!(
            "{j_prev} is not 2-isogenous to {j0}"
        )));
    }
    let (mut prev, mut cur) = (j_prev, j0);
    for &bit in msg {
        let mut ns: Vec<JInvariant> = neighbors_j(cur)?.into_iter().map(|(j, _)| j).collect();
        let back = ns.iter().position(|&j| j == prev).expect("dual edge exists");
        ns.remove(back);
        let next = ns[bit as usize];
        prev = cur;
        cur = next;
    }
    let ctx = cur.ctx();
    let digest = ctx.add_p(
        ctx.mul_p(consts.a % ctx.p(), cur.0.c0()),
        ctx.mul_p(consts.b % ctx.p(), cur.0.c1()),
    );
    Ok((cur, digest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeCtx;
    use crate::genus1::supersingular_closure;

    fn setup() -> (JInvariant, JInvariant) {
        let c = PrimeCtx::new(1019).unwrap();
        let s1 = supersingular_closure(JInvariant::j1728(&c)).unwrap();
        let j0 = s1[5];
        let prev = neighbors_j(j0).unwrap()[0].0;
        (j0, prev)
    }

    #[test]
    fn empty_message() {
        let (j0, prev) = setup();
        let (j, h) = cgl_hash(j0, prev, &[], CglConstants::default()).unwrap();
        assert_eq!(j, j0);
        assert_eq!(h, (j0.0.c0() + j0.0.c1()) % 1019);
    }

    #[test]
    fn one_bit_messages_differ() {
        let (j0, prev) = setup();
        let mut fwd: Vec<JInvariant> = neighbors_j(j0).unwrap().into_iter().map(|(j, _)| j).collect();
        let i = fwd.iter().position(|&j| j == prev).unwrap();
        fwd.remove(i);
        let (a, _) = cgl_hash(j0, prev, &[false], CglConstants::default()).unwrap();
        let (b, _) = cgl_hash(j0, prev, &[true], CglConstants::default()).unwrap();
        assert_eq!([a, b], [fwd[0], fwd[1]]);
        if fwd[0] != fwd[1] {
            assert_ne!(a, b);
        }
    }

    #[test]
    fn deterministic_and_validated() {
        let (j0, prev) = setup();
        let msg: Vec<bool> = (0..64).map(|i| (i * 7) % 3 == 0).collect();
        let consts = CglConstants { a: 17, b: 555 };
        assert_eq!(cgl_hash(j0, prev, &msg, consts), cgl_hash(j0, prev, &msg, consts));
        let not_neighbour = supersingular_closure(j0)
            .unwrap()
            .into_iter()
            .find(|j| neighbors_j(j0).unwrap().iter().all(|(k, _)| k != j))
            .unwrap();
        assert!(cgl_hash(j0, not_neighbour, &msg, consts).is_err());
    }
}
