#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multfun/error.hpp"
#include "multfun/report.hpp"

namespace multfun {

/// One command invocation. Unset fields take the per-command defaults listed in docs/report-schema.md.
struct RunConfig {
  std::string command;

  std::optional<std::string> function, xi, file;
  std::optional<std::uint64_t> modulus, index;
  /// Second function for `distance`: "one", "name", "name:xi" or "dirichlet_character:q:i".
  std::optional<std::string> g;

  std::optional<std::uint64_t> N, P, s, q_max, u_max, k_max, Q_max, J_max, q, r, period, shift;
  std::optional<std::vector<std::uint64_t>> grid;
  std::optional<std::string> tgrid;
  std::optional<double> t, tol, threshold, prob, alpha, floor;
  std::optional<std::uint64_t> seed;

  std::optional<std::string> z, set, m, A, poly, observable;
  bool concentration = false;
  bool u3 = false;

  std::optional<std::string> out, csv, meta, bitmap, text;
  unsigned threads = 0;
};

struct RunResult {
  int exit_code = 0;
  /// Report on success, diagnostic object on failure.
  Json json;
  std::optional<std::string> csv;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"catalog",  "sieve",    "mean",      "apmean",       "distance",
                                              "classify", "gowers",   "spectrum",  "levelset",     "structure",
                                              "divisibility", "recurrence", "convergence"};
  return names;
}

/// Exit status for an error kind: input 2, resource 3, search 4; unreliable counts as input.
int exit_code_for(ErrorKind kind);

Json config_echo(const RunConfig& cfg);
Json diagnostic(const RunConfig& cfg, const std::string& kind, const std::string& message, int exit_code);

/// Runs the command without touching the filesystem except for explicitly requested bitmap/text exports.
RunResult execute(const RunConfig& cfg);

/// execute() plus report, CSV and metadata files; the JSON goes to stdout when `out` is unset.
int run(const RunConfig& cfg);

}  // namespace multfun
