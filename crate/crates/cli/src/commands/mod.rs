//! One function per subcommand; each returns a report or an input error.

pub mod cox;
pub mod fan;
pub mod forms;
pub mod moment;
