use psu_designs::catalog;
use psu_designs::elimination::{run_cell, EliminationError};

#[test]
fn every_valid_cell_up_to_64_is_empty_and_agrees() {
    let mut cells = 0;
    for q in catalog::prime_powers_up_to(64) {
        for ctx in catalog::families(q).unwrap() {
            if !ctx.valid {
                continue;
            }
            let r = match run_cell(&ctx) {
                Ok(r) => r,
                Err(EliminationError::Resource(msg)) => panic!("{msg}"),
                Err(e) => panic!("{}: {e}", ctx.label()),
            };
            assert!(
                r.agree(),
                "{}: lemma {:?} oracle {:?}",
                ctx.label(),
                r.trace.survivors,
                r.oracle.survivors
            );
            assert!(r.empty(), "{}", ctx.label());
            cells += 1;
        }
    }
    assert!(cells > 100);
}
