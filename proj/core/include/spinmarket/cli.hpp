#pragma once

namespace spinmarket {

/// Entry point of the `spinmarket` tool. Subcommands: run, scan, pulse,
/// hc-search, mft, mft-scan. Global flags: --config, --seed, --out, --threads.
/// Writes CSVs and a `manifest` into the output directory.
/// Returns 0 on success, 1 on validation or runtime errors, 2 on I/O errors.
int run_cli(int argc, const char* const* argv);

}  // namespace spinmarket
