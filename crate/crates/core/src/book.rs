// The guide chapters under book/src/ double as doc-tests: each chapter is
// included as module documentation here so `cargo test --doc` compiles and
// runs every ```rust block in the book.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod guide_introduction {}

#[doc = include_str!("../../../book/src/relations.md")]
pub mod guide_relations {}

#[doc = include_str!("../../../book/src/formulas.md")]
pub mod guide_formulas {}

#[doc = include_str!("../../../book/src/periodicity.md")]
pub mod guide_periodicity {}

#[doc = include_str!("../../../book/src/criterion.md")]
pub mod guide_criterion {}

#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod guide_pipeline {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod guide_cli {}

#[doc = include_str!("../../../book/src/formats.md")]
pub mod guide_formats {}
