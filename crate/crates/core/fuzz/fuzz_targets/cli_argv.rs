#![no_main]

use clap::Parser;
use genus_spectrum_cli::{parse_group, Cli, Command};
use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated. Only parsing is exercised; dispatch could
// legitimately run for a long time on large inputs.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let argv = std::iter::once("genus-spectrum").chain(s.split('\0'));
    let Ok(cli) = Cli::try_parse_from(argv) else {
        return;
    };
    match &cli.command {
        Command::Invariants { group }
        | Command::Mu0 { group }
        | Command::Mu0plus { group }
        | Command::Spectrum { group }
        | Command::Classify { group } => {
            let _ = parse_group(group);
        }
        Command::Oracle { group, bound } => {
            let _ = parse_group(group);
            let _ = bound.parse::<genus_spectrum::HalfInt>();
        }
        Command::Admissible { group, datum } => {
            let _ = parse_group(group);
            let _ = datum.parse::<genus_spectrum::PDatum>();
        }
        Command::Mainline { seq, .. } => {
            let _ = seq.parse::<genus_spectrum::IntSeq>();
        }
        Command::SearchTalu { lattice, .. } => {
            let _ = lattice.parse::<genus_spectrum::conjecture::LatticeFilter>();
        }
        Command::Construct { .. } => {}
    }
});
