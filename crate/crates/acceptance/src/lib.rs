//! Holds the `acceptance` test target; run it with
//! `cargo test -p yagi-validation --test acceptance`.
