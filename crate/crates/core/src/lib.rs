pub mod config;
pub mod corpus;
pub mod cs_filter;
pub mod error;
pub mod langid;
pub mod pipeline;
pub mod proficiency;
pub mod resources;
pub mod stats;
pub mod style;
pub mod text;
pub mod topics;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/corpus.md")]
    pub struct Corpus;
    #[doc = include_str!("../../../book/src/langid.md")]
    pub struct Langid;
    #[doc = include_str!("../../../book/src/filtering.md")]
    pub struct Filtering;
    #[doc = include_str!("../../../book/src/topics.md")]
    pub struct Topics;
    #[doc = include_str!("../../../book/src/informality.md")]
    pub struct Informality;
    #[doc = include_str!("../../../book/src/proficiency.md")]
    pub struct Proficiency;
    #[doc = include_str!("../../../book/src/statistics.md")]
    pub struct Statistics;
    #[doc = include_str!("../../../book/src/pipeline.md")]
    pub struct Pipeline;
}
