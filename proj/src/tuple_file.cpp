#include "herop/tuple_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "herop/error.hpp"

namespace herop {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::Parse, field + ": " + message);
}

json entry_json(Complex z) { return json::array({z.real(), z.imag()}); }

json rows_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(entry_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json shaped_json(const Matrix& m) {
  return json{{"shape", {m.rows(), m.cols()}}, {"rows", rows_json(m)}};
}

Complex parse_entry(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(field, "expected an [re, im] pair of numbers");
  }
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) fail(field, "entry is not finite");
  return z;
}

Matrix parse_rows(const json& j, Index rows, Index cols, const std::string& field) {
  if (!j.is_array()) fail(field, "expected a list of rows");
  if (static_cast<Index>(j.size()) != rows) {
    fail(field, "expected " + std::to_string(rows) + " x " + std::to_string(cols) + ", found " +
                    std::to_string(j.size()) + " rows");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      fail(field, "expected " + std::to_string(rows) + " x " + std::to_string(cols) + ", row " +
                      std::to_string(i) + " has " + (row.is_array() ? std::to_string(row.size()) : "no") +
                      " entries");
    }
    for (Index c = 0; c < cols; ++c) {
      m(i, c) = parse_entry(row[static_cast<std::size_t>(c)], row_field + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Matrix parse_shaped(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("rows")) {
    fail(field, "expected an object with shape and rows");
  }
  const json& shape = j["shape"];
  if (!shape.is_array() || shape.size() != 2 || !shape[0].is_number_unsigned() || !shape[1].is_number_unsigned()) {
    fail(field + ".shape", "expected [rows, cols]");
  }
  return parse_rows(j["rows"], shape[0].get<Index>(), shape[1].get<Index>(), field + ".rows");
}

std::uint64_t parse_count(const json& doc, const char* key) {
  if (!doc.contains(key)) fail(key, "missing");
  if (!doc[key].is_number_unsigned()) fail(key, "expected a non-negative integer");
  return doc[key].get<std::uint64_t>();
}

}  // namespace

Matrix TupleFile::a_or_identity() const { return a ? *a : identity(n); }

CommutingTuple TupleFile::tuple(double commutation_tol) const {
  return CommutingTuple(operators, commutation_tol);
}

TupleFile parse_tuple_file(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "expected an object");

  TupleFile out;
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    fail("format_version", "missing or not an integer");
  }
  out.format_version = doc["format_version"].get<int>();
  if (out.format_version != kFormatVersion) {
    fail("format_version", "unsupported version " + std::to_string(out.format_version));
  }
  out.d = parse_count(doc, "d");
  out.n = static_cast<Index>(parse_count(doc, "n"));
  if (out.d == 0) fail("d", "must be at least 1");
  if (out.n == 0) fail("n", "must be at least 1");

  if (!doc.contains("operators") || !doc["operators"].is_array()) fail("operators", "missing list");
  const json& ops = doc["operators"];
  if (ops.size() != out.d) {
    fail("operators", "expected " + std::to_string(out.d) + " operators, found " + std::to_string(ops.size()));
  }
  for (std::size_t j = 0; j < ops.size(); ++j) {
    out.operators.push_back(parse_rows(ops[j], out.n, out.n, "operators[" + std::to_string(j) + "]"));
  }
  if (doc.contains("A")) out.a = parse_rows(doc["A"], out.n, out.n, "A");

  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) fail("metadata", "expected an object of strings");
    for (const auto& [key, value] : doc["metadata"].items()) {
      if (!value.is_string()) fail("metadata." + key, "expected a string");
      out.metadata.emplace(key, value.get<std::string>());
    }
  }
  if (doc.contains("sections")) {
    if (!doc["sections"].is_object()) fail("sections", "expected an object");
    for (const auto& [key, value] : doc["sections"].items()) {
      if (!value.is_array()) fail("sections." + key, "expected a list of matrices");
      std::vector<Matrix> mats;
      for (std::size_t i = 0; i < value.size(); ++i) {
        mats.push_back(parse_shaped(value[i], "sections." + key + "[" + std::to_string(i) + "]"));
      }
      out.sections.emplace(key, std::move(mats));
    }
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "format_version" && key != "d" && key != "n" && key != "operators" && key != "A" &&
        key != "metadata" && key != "sections") {
      fail(key, "unknown field");
    }
  }
  return out;
}

std::string serialize(const TupleFile& file) {
  if (file.operators.size() != file.d) throw Error(ErrorKind::Dimension, "operator count differs from d");
  json doc;
  doc["format_version"] = file.format_version;
  doc["d"] = file.d;
  doc["n"] = file.n;
  json ops = json::array();
  for (std::size_t j = 0; j < file.operators.size(); ++j) {
    const Matrix& m = file.operators[j];
    if (m.rows() != file.n || m.cols() != file.n) {
      throw Error(ErrorKind::Dimension, "operator " + std::to_string(j) + " is not n x n");
    }
    require_finite(m, "operator");
    ops.push_back(rows_json(m));
  }
  doc["operators"] = std::move(ops);
  if (file.a) {
    if (file.a->rows() != file.n || file.a->cols() != file.n) throw Error(ErrorKind::Dimension, "A is not n x n");
    require_finite(*file.a, "A");
    doc["A"] = rows_json(*file.a);
  }
  doc["metadata"] = json::object();
  for (const auto& [k, v] : file.metadata) doc["metadata"][k] = v;
  if (!file.sections.empty()) {
    json sections = json::object();
    for (const auto& [k, mats] : file.sections) {
      json list = json::array();
      for (const auto& m : mats) {
        require_finite(m, "section matrix");
        list.push_back(shaped_json(m));
      }
      sections[k] = std::move(list);
    }
    doc["sections"] = std::move(sections);
  }
  return doc.dump(2) + "\n";
}

TupleFile read_tuple_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "cannot read " + path.string());
  try {
    return parse_tuple_file(buf.str());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Parse) throw;
    throw Error(ErrorKind::Parse, path.string() + ": " + std::string(e.what()).substr(7));
  }
}

void write_tuple_file(const std::filesystem::path& path, const TupleFile& file) {
  const std::string text = serialize(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

TupleFile to_tuple_file(const CommutingTuple& t, std::optional<Matrix> a,
                        std::map<std::string, std::string> metadata) {
  TupleFile f;
  f.d = t.d();
  f.n = t.n();
  f.operators = t.operators();
  f.a = std::move(a);
  f.metadata = std::move(metadata);
  return f;
}

namespace {

Matrix row_vector(const Vector& v) { return v.transpose(); }

const std::vector<Matrix>& section(const TupleFile& f, const std::string& name) {
  auto it = f.sections.find(name);
  if (it == f.sections.end()) fail("sections." + name, "missing");
  return it->second;
}

const Matrix& single(const TupleFile& f, const std::string& name) {
  const auto& list = section(f, name);
  if (list.size() != 1) fail("sections." + name, "expected exactly one matrix");
  return list.front();
}

}  // namespace

TupleFile structure_to_file(const TwoIsometryStructure& s, std::map<std::string, std::string> metadata) {
  TupleFile f = to_tuple_file(reconstruct(s), std::nullopt, std::move(metadata));
  f.metadata["content"] = "two-isometry-structure";
  f.metadata["blocks"] = std::to_string(s.blocks.size());
  f.sections["unitary_basis"] = {s.unitary_basis.vectors};
  f.sections["unitary_tuple"] = s.unitary_tuple;
  f.sections["change_of_basis"] = {s.change_of_basis};
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    const auto& b = s.blocks[i];
    const std::string prefix = "block." + std::to_string(i) + ".";
    f.sections[prefix + "alpha"] = {row_vector(b.alpha)};
    f.sections[prefix + "m_basis"] = {b.m_basis.vectors};
    f.sections[prefix + "mperp_basis"] = {b.mperp_basis.vectors};
    f.sections[prefix + "v"] = b.v;
  }
  return f;
}

TwoIsometryStructure structure_from_file(const TupleFile& f) {
  TwoIsometryStructure s;
  s.d = f.d;
  s.n = f.n;
  s.unitary_basis = Basis{single(f, "unitary_basis")};
  s.unitary_tuple = section(f, "unitary_tuple");
  s.change_of_basis = single(f, "change_of_basis");
  if (s.unitary_tuple.size() != f.d) fail("sections.unitary_tuple", "expected d matrices");
  for (std::size_t i = 0;; ++i) {
    const std::string prefix = "block." + std::to_string(i) + ".";
    if (!f.sections.contains(prefix + "alpha")) break;
    TwoIsometryBlock b;
    const Matrix& alpha = single(f, prefix + "alpha");
    if (alpha.rows() != 1 || alpha.cols() != static_cast<Index>(f.d)) {
      fail("sections." + prefix + "alpha", "expected 1 x d");
    }
    b.alpha = alpha.row(0).transpose();
    b.m_basis = Basis{single(f, prefix + "m_basis")};
    b.mperp_basis = Basis{single(f, prefix + "mperp_basis")};
    b.v = section(f, prefix + "v");
    if (b.v.size() != f.d) fail("sections." + prefix + "v", "expected d matrices");
    s.blocks.push_back(std::move(b));
  }
  return s;
}

TupleFile decomposition_to_file(const SNDecomposition& split, std::map<std::string, std::string> metadata) {
  TupleFile f;
  f.d = split.s.d();
  f.n = split.s.n();
  for (std::size_t j = 0; j < f.d; ++j) f.operators.push_back(split.s[j] + split.n[j]);
  f.metadata = std::move(metadata);
  const auto& dec = split.decomposition;
  f.metadata["content"] = "sn-decomposition";
  std::string dims;
  for (const auto& b : dec.blocks) dims += (dims.empty() ? "" : ",") + std::to_string(b.dim());
  f.metadata["block_dims"] = dims;
  f.sections["S"] = split.s.operators();
  f.sections["N"] = split.n.operators();
  Matrix points(static_cast<Index>(dec.d), static_cast<Index>(dec.points.size()));
  for (std::size_t i = 0; i < dec.points.size(); ++i) points.col(static_cast<Index>(i)) = dec.points[i];
  f.sections["points"] = {points};
  f.sections["projections"] = dec.projections;
  return f;
}

}  // namespace herop
