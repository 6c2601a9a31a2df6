//! Command-line front end: corpus generation, feature extraction, training,
//! evaluation, PCA-pair search and the sub-band mixing analysis.

pub mod analyze;
pub mod args;
pub mod error;
pub mod extract;
pub mod gen;
pub mod io;
pub mod learn;

pub use analyze::cmd_analyze;
pub use args::{Cli, Command};
pub use error::{CliError, CliResult};
pub use extract::cmd_extract;
pub use gen::cmd_gen;
pub use learn::{cmd_eval, cmd_gridsearch, cmd_train};

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a).map(drop),
        Command::Gridsearch(a) => cmd_gridsearch(a).map(drop),
        Command::Analyze(a) => cmd_analyze(a),
    }
}
