pub mod charsphere;
pub mod grouprep;
pub mod zlattice;
pub mod sigma;
pub mod fixpoint;
pub mod oracle;
pub mod cli;
