#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "herop/error.hpp"
#include "herop/gen.hpp"
#include "herop/tuple_file.hpp"
#include "support.hpp"

using namespace herop;
using namespace herop::testing;

namespace fs = std::filesystem;

namespace {

const fs::path kData = HEROP_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string parse_error(std::string_view text) {
  try {
    parse_tuple_file(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("minimal document") {
  const TupleFile f = parse_tuple_file(R"({"format_version": 1, "d": 1, "n": 1, "operators": [[[[1, 0]]]]})");
  CHECK(f.d == 1);
  CHECK(f.n == 1);
  CHECK_FALSE(f.a.has_value());
  CHECK(f.a_or_identity() == identity(1));
  CHECK(f.operators[0](0, 0) == Complex(1, 0));
  CHECK(f.metadata.empty());
}

TEST_CASE("the bundled block example parses and is 2-isometric") {
  const TupleFile f = read_tuple_file(kData / "example_w.json");
  const CommutingTuple t = f.tuple();
  CHECK(t[0] == identity(2));
  CHECK(t[1] == matrix({{0, 1}, {0, 0}}));
  CHECK(check_A_m_isometric(t, f.a_or_identity(), 2).residual == 0.0);
}

TEST_CASE("a 2 x 3 operator is rejected with its index") {
  const std::string what = parse_error(
      R"({"format_version": 1, "d": 2, "n": 2, "operators": [[[[1,0],[0,0]],[[0,0],[1,0]]], [[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]]]]})");
  CHECK(contains(what, "operators[1]"));
  CHECK(contains(what, "2 x 2"));
  CHECK(contains(parse_error(slurp(kData / "invalid" / "bad_shape.json")), "operators[0]"));
}

TEST_CASE("parse errors name the field") {
  CHECK(contains(parse_error(slurp(kData / "invalid" / "bad_version.json")), "unsupported version 2"));
  CHECK(contains(parse_error(slurp(kData / "invalid" / "truncated.json")), "malformed"));
  CHECK(contains(parse_error(R"([1, 2])"), "document"));
  CHECK(contains(parse_error(R"({"d": 1, "n": 1, "operators": []})"), "format_version"));
  CHECK(contains(parse_error(R"({"format_version": 1, "n": 1, "operators": []})"), "d: missing"));
  CHECK(contains(parse_error(R"({"format_version": 1, "d": 0, "n": 1, "operators": []})"), "d: must be"));
  CHECK(contains(parse_error(R"({"format_version": 1, "d": 2, "n": 1, "operators": [[[[1,0]]]]})"),
                 "expected 2 operators"));
  CHECK(contains(parse_error(R"({"format_version": 1, "d": 1, "n": 1, "operators": [[[[1]]]]})"),
                 "operators[0][0][0]"));
  CHECK(contains(parse_error(R"({"format_version": 1, "d": 1, "n": 1, "operators": [[[["a", 0]]]]})"),
                 "[re, im]"));
  CHECK(contains(parse_error(R"({"format_version": 1, "d": 1, "n": 1, "operators": [[[[1,0]]]], "A": [[[1,0],[0,0]]]})"),
                 "A: expected 1 x 1"));
  CHECK(contains(parse_error(R"({"format_version": 1, "d": 1, "n": 1, "operators": [[[[1,0]]]], "metadata": {"k": 3}})"),
                 "metadata.k"));
  CHECK(contains(parse_error(R"({"format_version": 1, "d": 1, "n": 1, "operators": [[[[1,0]]]], "extra": 1})"),
                 "extra: unknown field"));
  CHECK(contains(parse_error(R"({"format_version": 1, "d": 1, "n": 1, "operators": [[[[1,0]]]], "sections": {"s": [{"shape": [1, 2], "rows": [[[1,0]]]}]}})"),
                 "sections.s[0]"));
}

TEST_CASE("non-commuting operators parse but do not form a tuple") {
  const TupleFile f = read_tuple_file(kData / "invalid" / "not_commuting.json");
  try {
    f.tuple();
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
}

TEST_CASE("unreadable paths are I/O errors") {
  try {
    read_tuple_file(kData / "does_not_exist.json");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  try {
    write_tuple_file(kData / "no_such_dir" / "x.json", to_tuple_file(CommutingTuple({identity(1)})));
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("bundled files round-trip byte for byte") {
  for (const auto& entry : fs::directory_iterator(kData)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const std::string text = slurp(entry.path());
    CHECK(serialize(parse_tuple_file(text)) == text);
  }
}

TEST_CASE("serialize then parse is the identity on random files") {
  TestRng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = static_cast<std::size_t>(uniform_int(rng, 1, 4));
    const Index n = uniform_int(rng, 1, 6);
    TupleFile f = to_tuple_file(random_commuting(d, n, rng));
    if (trial % 2 == 0) f.a = random_matrix(n, n, rng, 1e-3);
    f.metadata["trial"] = std::to_string(trial);
    f.metadata["text"] = "quotes \" and unicode é";
    if (trial % 3 == 0) {
      f.sections["rect"] = {random_matrix(n, 2, rng), zeros(n, 0)};
      f.sections["empty"] = {};
    }
    // Extreme magnitudes and signed zeros survive.
    f.operators[0](0, 0) = Complex(-0.0, 1e-300);
    const std::string text = serialize(f);
    const TupleFile back = parse_tuple_file(text);
    CHECK(back == f);
    CHECK(std::signbit(back.operators[0](0, 0).real()));
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("serialize rejects inconsistent or non-finite files") {
  TupleFile f = to_tuple_file(CommutingTuple({identity(2)}));
  f.d = 2;
  CHECK_THROWS_AS(serialize(f), Error);
  f.d = 1;
  f.operators[0](0, 0) = Complex(std::nan(""), 0);
  CHECK_THROWS_AS(serialize(f), Error);
}

TEST_CASE("structure files rebuild the structure") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CommutingTuple t = gen_two_isometry(3, 2, {{1, 2}, {2, 1}}, Seed{seed});
    const TwoIsometryStructure s = classify_2_isometric(t);
    const TupleFile f = structure_to_file(s, {{"source", "test"}});
    const TupleFile back = parse_tuple_file(serialize(f));
    CHECK(back == f);
    const TwoIsometryStructure s2 = structure_from_file(back);
    CHECK(s2.blocks.size() == s.blocks.size());
    CHECK(max_distance(reconstruct(s2), reconstruct(s)) == 0.0);
    CHECK(max_distance(reconstruct(s2), t) <= 1e-7 * (1.0 + t.max_norm()));
    CHECK(f.metadata.at("content") == "two-isometry-structure");
  }
}

TEST_CASE("structure_from_file reports missing sections") {
  const TupleFile f = to_tuple_file(CommutingTuple({identity(1)}));
  CHECK_THROWS_AS(structure_from_file(f), Error);
}

TEST_CASE("decomposition files carry S, N, points and projections") {
  Matrix t = Matrix::Zero(3, 3);
  t.topLeftCorner(2, 2) = matrix({{1, 1}, {0, 1}});
  t(2, 2) = 2;
  const SNDecomposition split = split_SN(CommutingTuple({t}));
  const TupleFile f = decomposition_to_file(split);
  CHECK(f.metadata.at("block_dims") == "2,1");
  CHECK(f.sections.at("points")[0].rows() == 1);
  CHECK(f.sections.at("points")[0].cols() == 2);
  CHECK(f.sections.at("projections").size() == 2);
  CHECK(max_abs(f.sections.at("S")[0] + f.sections.at("N")[0] - t) <= 1e-12);
  CHECK(parse_tuple_file(serialize(f)) == f);
}
