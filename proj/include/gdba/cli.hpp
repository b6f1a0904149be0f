#pragma once

#include <iosfwd>

namespace gdba::cli {

/// Entry point behind the gdba executable; returns the process exit status.
/// Subcommands: score, sweep, compare, verify, make-toy.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace gdba::cli
