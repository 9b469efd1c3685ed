#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "herop/commuting_tuple.hpp"
#include "herop/spectral.hpp"
#include "herop/structure2.hpp"

namespace herop {

inline constexpr int kFormatVersion = 1;
// Commutation tolerance applied to tuples read from files.
inline constexpr double kFileCommutationTol = 1e-8;

// JSON document:
//   {"format_version": 1, "d": 2, "n": 2,
//    "A": [[[1.0, 0.0], [0.0, 0.0]], ...],          (optional, identity if absent)
//    "operators": [ <n x n matrix>, ... ],
//    "metadata": {"key": "value"},
//    "sections": {"name": [{"shape": [r, c], "rows": [...]}, ...]}}   (optional)
// A square matrix is a list of rows, each row a list of [re, im] pairs. Sections
// carry rectangular (possibly empty) matrices, so they also store their shape.
struct TupleFile {
  int format_version = kFormatVersion;
  std::size_t d = 0;
  Index n = 0;
  std::optional<Matrix> a;
  std::vector<Matrix> operators;
  std::map<std::string, std::string> metadata;
  std::map<std::string, std::vector<Matrix>> sections;

  Matrix a_or_identity() const;
  CommutingTuple tuple(double commutation_tol = kFileCommutationTol) const;
  bool operator==(const TupleFile&) const = default;
};

// Throws Parse with the offending field, e.g. "operators[1]: expected 2 x 2".
TupleFile parse_tuple_file(std::string_view text);
// Deterministic: keys sorted, shortest round-trip numbers, two-space indent.
std::string serialize(const TupleFile& file);

// Io on unreadable or unwritable paths.
TupleFile read_tuple_file(const std::filesystem::path& path);
void write_tuple_file(const std::filesystem::path& path, const TupleFile& file);

TupleFile to_tuple_file(const CommutingTuple& t, std::optional<Matrix> a = std::nullopt,
                        std::map<std::string, std::string> metadata = {});

// Operators hold the reconstructed tuple; the sections "unitary_basis",
// "unitary_tuple", "change_of_basis" and "block.<i>.{alpha,m_basis,mperp_basis,v}"
// hold the model data.
TupleFile structure_to_file(const TwoIsometryStructure& s, std::map<std::string, std::string> metadata = {});
TwoIsometryStructure structure_from_file(const TupleFile& file);

// Operators hold T = S + N; sections "S", "N", "points" (d x |Lambda|) and
// "projections"; metadata records the block dimensions.
TupleFile decomposition_to_file(const SNDecomposition& split, std::map<std::string, std::string> metadata = {});

}  // namespace herop
