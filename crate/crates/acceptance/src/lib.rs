//! End-to-end acceptance checks for `quatjensen`. Everything lives in `tests/acceptance.rs`;
//! run it with `cargo test -p quatjensen-acceptance -- --nocapture` to see one line per criterion.
