#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "herop/tuple_file.hpp"
#include "herop/tuples.hpp"

namespace herop {

enum ExitCode : int {
  kExitPassed = 0,
  kExitFailed = 1,  // a check failed or the input violates a precondition
  kExitUsage = 2,
  kExitInput = 3,   // unreadable, malformed or invalid input file
};

struct Report {
  std::string command;
  std::optional<std::string> subject;  // input file, when there is one
  bool passed = false;
  std::vector<NamedCheck> checks;
  std::map<std::string, std::string> info;
  std::map<std::string, TupleFile> artifacts;
  std::optional<std::string> error;
};

// One JSON object on a single line; keys sorted, artifacts embedded as tuple files.
std::string report_json(const Report& report);
// Table of checks followed by info lines and the error, if any.
std::string report_human(const Report& report);

// Commands (args exclude the program name):
//   check --kind {m-iso|spherical|nilpotent|toral|isosym} [--m M] [--n N] [--tol T] FILE...
//   decompose FILE [--s-out P] [--n-out P] [--out P] [--cluster-tol T]
//   classify2 FILE [--out P] [--tol T]
//   verify-theorem --m M FILE [--tol T] [--cluster-tol T]
//   generate --family {spherical-unitary|block|two-isometry|a2|jordan} [--seed S] ... [-o P]
// Every command accepts --human. HEROP_TOL replaces the default tolerance.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace herop
