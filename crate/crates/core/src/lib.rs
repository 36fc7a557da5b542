pub mod encoding;
pub mod error;
pub mod parse;
pub mod poly;
pub mod form_one;
pub mod form_two;
pub mod artifact;
pub mod semantics;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/encoding.md")]
    mod encoding {}
    #[doc = include_str!("../../../book/src/form-one.md")]
    mod form_one {}
    #[doc = include_str!("../../../book/src/form-two.md")]
    mod form_two {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/artifacts.md")]
    mod artifacts {}
}
