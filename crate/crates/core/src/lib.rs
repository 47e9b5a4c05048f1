pub mod characters;
pub mod lattice;
pub mod modular;
pub mod oracle;
pub mod qseries;
pub mod rational;
pub mod verify;
