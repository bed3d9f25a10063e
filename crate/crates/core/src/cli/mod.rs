//! Fan files, the named catalog, reports and diagrams.

pub mod catalog;
pub mod fanfile;
pub mod report;
pub mod svg;
