#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "outfn/autom.hpp"
#include "outfn/rational.hpp"

namespace outfn::cli {

/// `a->ab, b->a`; rank is inferred from the clauses. Images are reduced.
Endo parse_automorphism(std::string_view text);

struct RunConfig {
  std::optional<Rational> mu;
  bool json = false;
  std::optional<std::filesystem::path> cache_dir;
  unsigned threads = 1;
};

/// Cache directory from OUTFN_CACHE_DIR, else $XDG_CACHE_HOME/outfn, else
/// ~/.cache/outfn; nullopt when none of these is set.
std::optional<std::filesystem::path> default_cache_dir();

/// Runs one command line (args[0] is the program name). Verdicts go to
/// `out`, diagnostics and telemetry to `err`. Returns the exit status:
/// 0 on a completed computation, 1 on usage errors, 2 on bad input.
int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace outfn::cli
