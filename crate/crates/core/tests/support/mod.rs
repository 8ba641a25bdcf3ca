pub mod compare;
pub mod oracle;
