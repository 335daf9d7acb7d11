pub mod catalog;
pub mod ir;
pub mod oracle;
pub mod symbolic;
