pub mod exactfield;
pub mod laumon;
pub mod modcoh;
pub mod noriquiver;
pub mod projline;
