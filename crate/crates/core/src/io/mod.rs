//! Workspace persistence, JSON formats, and the random instance corpus.

pub mod corpus;
pub mod json;
pub mod workspace;

pub use json::{BasisJson, BetweenJson, BracketJson, ExtJson, FreeJson, GeneratorJson, ObjectJson, PairJson, PresentationJson};
pub use workspace::{
    canonicalize, load_workspace, parse_workspace, save_workspace, workspace_path, NamedExt, NamedPair, WorkspaceDoc, WorkspaceFile, DEFAULT_WORKSPACE,
    FORMAT_VERSION, WORKSPACE_ENV,
};
