#include "herop/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "herop/error.hpp"
#include "herop/gen.hpp"
#include "herop/spectral.hpp"
#include "herop/structure2.hpp"

namespace herop {

using nlohmann::json;

std::string report_json(const Report& r) {
  json doc;
  doc["command"] = r.command;
  doc["passed"] = r.passed;
  if (r.subject) doc["subject"] = *r.subject;
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.report.passed},
                      {"residual", c.report.residual},
                      {"tolerance", c.report.tolerance_used},
                      {"detail", c.report.detail}});
  }
  doc["checks"] = std::move(checks);
  if (!r.info.empty()) doc["info"] = r.info;
  if (!r.artifacts.empty()) {
    json artifacts = json::object();
    for (const auto& [name, file] : r.artifacts) artifacts[name] = json::parse(serialize(file));
    doc["artifacts"] = std::move(artifacts);
  }
  if (r.error) doc["error"] = *r.error;
  return doc.dump() + "\n";
}

std::string report_human(const Report& r) {
  std::ostringstream os;
  os << r.command;
  if (r.subject) os << " " << *r.subject;
  os << ": " << (r.passed ? "PASS" : "FAIL") << "\n";
  if (!r.checks.empty()) {
    std::size_t width = 5;
    for (const auto& c : r.checks) width = std::max(width, c.name.size());
    char line[256];
    std::snprintf(line, sizeof line, "  %-*s  %-4s  %12s  %12s\n", static_cast<int>(width), "check", "ok",
                  "residual", "tolerance");
    os << line;
    for (const auto& c : r.checks) {
      std::snprintf(line, sizeof line, "  %-*s  %-4s  %12.3e  %12.3e\n", static_cast<int>(width), c.name.c_str(),
                    c.report.passed ? "yes" : "no", c.report.residual, c.report.tolerance_used);
      os << line;
    }
  }
  for (const auto& [k, v] : r.info) os << "  " << k << ": " << v << "\n";
  for (const auto& [k, f] : r.artifacts) os << "  artifact " << k << ": d=" << f.d << " n=" << f.n << "\n";
  if (r.error) os << "  error: " << *r.error << "\n";
  return os.str();
}

namespace {

bool passed_all(const std::vector<NamedCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.report.passed; });
}

// Errors raised while turning a file into a tuple are input errors (exit 3).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  TupleFile file;
  CommutingTuple t;
  Matrix a;
};

Loaded load(const std::string& path) {
  try {
    TupleFile f = read_tuple_file(path);
    CommutingTuple t = f.tuple();
    Matrix a = f.a_or_identity();
    return {std::move(f), std::move(t), std::move(a)};
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_point(const Vector& v) {
  std::string s = "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v(i).real());
    if (v(i).imag() != 0.0) s += (v(i).imag() < 0 ? "-" : "+") + format_double(std::abs(v(i).imag())) + "i";
  }
  return s + ")";
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool human = false;

  void emit(const Report& r) const { out << (human ? report_human(r) : report_json(r)) << std::flush; }
};

int finish(const Context& ctx, Report r) {
  r.passed = r.passed && !r.error && passed_all(r.checks);
  ctx.emit(r);
  return r.passed ? kExitPassed : kExitFailed;
}

int input_failure(const Context& ctx, Report r, const std::string& what) {
  r.passed = false;
  r.error = what;
  ctx.emit(r);
  ctx.err << "error: " << what << "\n";
  return kExitInput;
}

int domain_failure(const Context& ctx, Report r, const Error& e) {
  r.passed = false;
  r.error = e.what();
  ctx.emit(r);
  ctx.err << "error: " << e.what() << "\n";
  return kExitFailed;
}

DecompositionOptions decomposition_options(const std::optional<double>& cluster_tol) {
  DecompositionOptions opts;
  opts.cluster_tol = cluster_tol;
  return opts;
}

std::map<std::string, std::string> decomposition_info(const SNDecomposition& split) {
  std::map<std::string, std::string> info;
  const auto& dec = split.decomposition;
  std::string points, dims;
  for (std::size_t i = 0; i < dec.points.size(); ++i) {
    points += (i ? "; " : "") + format_point(dec.points[i]);
    dims += (i ? "," : "") + std::to_string(dec.blocks[i].dim());
  }
  info["points"] = points;
  info["block_dims"] = dims;
  info["cluster_tol"] = format_double(dec.cluster_tol_used);
  info["nilpotency_order"] =
      split.diagnostics.nilpotency_order ? std::to_string(*split.diagnostics.nilpotency_order) : "none";
  return info;
}

// ---- check ------------------------------------------------------------------

struct CheckArgs {
  std::string kind;
  std::optional<unsigned> m;
  std::optional<unsigned> n;
  double tol = kDefaultTol;
  std::vector<std::string> files;
};

int run_check(const Context& ctx, const CheckArgs& args) {
  const auto need = [&](const std::optional<unsigned>& v, const char* flag) {
    if (!v) throw CLI::ValidationError(std::string("--kind ") + args.kind + " requires " + flag);
    return *v;
  };
  // Validate flags before touching any file.
  if (args.kind == "m-iso" || args.kind == "toral") need(args.m, "--m");
  if (args.kind == "nilpotent" && !args.n && !args.m) need(args.n, "--n");
  if (args.kind == "isosym") {
    need(args.m, "--m");
    need(args.n, "--n");
  }

  int worst = kExitPassed;
  for (const auto& path : args.files) {
    Report r;
    r.command = "check";
    r.subject = path;
    r.info["kind"] = args.kind;
    int code = kExitPassed;
    try {
      const Loaded in = load(path);
      CheckReport c;
      if (args.kind == "m-iso") {
        c = check_A_m_isometric(in.t, in.a, *args.m, args.tol);
      } else if (args.kind == "spherical") {
        c = check_spherical_A_isometry(in.t, in.a, args.tol);
      } else if (args.kind == "nilpotent") {
        c = check_A_n_nilpotent(in.t, in.a, args.n ? *args.n : *args.m, args.tol);
      } else if (args.kind == "toral") {
        c = check_toral(in.t, in.a, *args.m, args.tol);
      } else {
        c = check_isosymmetric(in.t, *args.m, *args.n, args.tol);
      }
      r.passed = true;
      r.checks.push_back({args.kind, c});
      code = finish(ctx, r);
    } catch (const InputError& e) {
      code = input_failure(ctx, r, e.what());
    } catch (const Error& e) {
      code = domain_failure(ctx, r, e);
    }
    worst = std::max(worst, code);
  }
  return worst;
}

// ---- decompose ----------------------------------------------------------------

struct DecomposeArgs {
  std::string file;
  std::optional<std::string> s_out, n_out, out;
  std::optional<double> cluster_tol;
};

int run_decompose(const Context& ctx, const DecomposeArgs& args) {
  Report r;
  r.command = "decompose";
  r.subject = args.file;
  try {
    const Loaded in = load(args.file);
    const SNDecomposition split = split_SN(in.t, decomposition_options(args.cluster_tol));
    const auto& diag = split.diagnostics;
    const unsigned order = diag.nilpotency_order.value_or(static_cast<unsigned>(in.t.n()) + 1);
    r.checks.push_back({"nilpotent", check_A_n_nilpotent(split.n, identity(in.t.n()), order, kSplitTol)});
    r.checks.back().report.detail = "max ||N^alpha||_F / (1 + sqrt(n)) at the numerical order";
    r.checks.push_back({"commutation", {diag.commutation <= kSplitTol, diag.commutation, kSplitTol,
                                        "max ||S_j N_k - N_k S_j||_F / scale"}});
    r.checks.push_back({"reconstruction", {diag.reconstruction <= kSplitTol, diag.reconstruction, kSplitTol,
                                           "max ||S_j + N_j - T_j||_F / scale"}});
    r.info = decomposition_info(split);
    const std::map<std::string, std::string> source{{"source", args.file}};
    TupleFile s_file = to_tuple_file(split.s, in.file.a, source);
    TupleFile n_file = to_tuple_file(split.n, in.file.a, source);
    s_file.metadata["content"] = "S";
    n_file.metadata["content"] = "N";
    if (args.s_out) write_tuple_file(*args.s_out, s_file);
    if (args.n_out) write_tuple_file(*args.n_out, n_file);
    if (args.out) write_tuple_file(*args.out, decomposition_to_file(split, source));
    r.artifacts.emplace("S", std::move(s_file));
    r.artifacts.emplace("N", std::move(n_file));
    r.passed = true;
    return finish(ctx, r);
  } catch (const InputError& e) {
    return input_failure(ctx, r, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) return input_failure(ctx, r, e.what());
    return domain_failure(ctx, r, e);
  }
}

// ---- classify2 ----------------------------------------------------------------

struct ClassifyArgs {
  std::string file;
  std::optional<std::string> out;
  double tol = kDefaultTol;
  std::optional<double> cluster_tol;
};

int run_classify(const Context& ctx, const ClassifyArgs& args) {
  Report r;
  r.command = "classify2";
  r.subject = args.file;
  try {
    const Loaded in = load(args.file);
    const DecompositionOptions opts = decomposition_options(args.cluster_tol);
    const std::map<std::string, std::string> source{{"source", args.file}};
    if (in.file.a) {
      // Weighted case: T = S + N with S spherical A-isometric.
      const A2Classification c = classify_A2(in.t, *in.file.a, args.tol, opts);
      r.checks = c.report.checks;
      TupleFile s_file = to_tuple_file(c.s, in.file.a, source);
      TupleFile n_file = to_tuple_file(c.n, in.file.a, source);
      s_file.metadata["content"] = "S";
      n_file.metadata["content"] = "N";
      if (args.out) {
        TupleFile both = to_tuple_file(in.t, in.file.a, source);
        both.metadata["content"] = "a2-classification";
        both.sections["S"] = c.s.operators();
        both.sections["N"] = c.n.operators();
        write_tuple_file(*args.out, both);
      }
      r.artifacts.emplace("S", std::move(s_file));
      r.artifacts.emplace("N", std::move(n_file));
    } else {
      const TwoIsometryStructure s = classify_2_isometric(in.t, args.tol, opts);
      r.checks = check_structure(s).checks;
      const double scale = 1.0 + in.t.max_norm();
      const double roundtrip = max_distance(reconstruct(s), in.t) / scale;
      r.checks.push_back({"roundtrip", {roundtrip <= 1e-7, roundtrip, 1e-7, "max ||R_j - T_j||_F / scale"}});
      r.info["blocks"] = std::to_string(s.blocks.size());
      r.info["unitary_dim"] = std::to_string(s.unitary_basis.dim());
      TupleFile f = structure_to_file(s, source);
      if (args.out) write_tuple_file(*args.out, f);
      r.artifacts.emplace("structure", std::move(f));
    }
    r.passed = true;
    return finish(ctx, r);
  } catch (const InputError& e) {
    return input_failure(ctx, r, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) return input_failure(ctx, r, e.what());
    return domain_failure(ctx, r, e);
  }
}

// ---- verify-theorem -----------------------------------------------------------

struct VerifyArgs {
  std::string file;
  unsigned m = 1;
  double tol = kDefaultTol;
  std::optional<double> cluster_tol;
};

int run_verify(const Context& ctx, const VerifyArgs& args) {
  Report r;
  r.command = "verify-theorem";
  r.subject = args.file;
  r.info["m"] = std::to_string(args.m);
  try {
    const Loaded in = load(args.file);
    const TheoremVerification v =
        verify_decomposition_theorem(in.t, in.a, args.m, args.tol, decomposition_options(args.cluster_tol));
    r.checks = v.report.checks;
    auto info = decomposition_info(v.split);
    r.info.insert(info.begin(), info.end());
    r.artifacts.emplace("S", to_tuple_file(v.split.s, in.file.a));
    r.artifacts.emplace("N", to_tuple_file(v.split.n, in.file.a));
    r.passed = true;
    return finish(ctx, r);
  } catch (const InputError& e) {
    return input_failure(ctx, r, e.what());
  } catch (const Error& e) {
    return domain_failure(ctx, r, e);
  }
}

// ---- generate -----------------------------------------------------------------

struct GenerateArgs {
  std::string family;
  std::uint64_t seed = 0;
  std::size_t d = 1;
  Index n = 1;
  Index m = 1;
  std::vector<std::string> alpha;   // "re,im" per coordinate
  double v_scale = 1.0;
  std::vector<std::string> blocks;  // "re,im,size"
  std::vector<std::string> shapes;  // "n,m"
  Index unitary_dim = 0;
  std::optional<Index> kernel_dim;
  bool zero_nilpotent = false;
  std::optional<std::string> out;
};

std::vector<double> split_numbers(const std::string& text, std::size_t count, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(v)) {
      throw CLI::ValidationError(std::string(flag) + ": not a number list: " + text);
    }
    values.push_back(v);
  }
  if (values.size() != count) {
    throw CLI::ValidationError(std::string(flag) + ": expected " + std::to_string(count) + " values in " + text);
  }
  return values;
}

Index as_size(double v, const char* flag) {
  if (v < 1 || v != std::floor(v)) throw CLI::ValidationError(std::string(flag) + ": sizes must be positive integers");
  return static_cast<Index>(v);
}

TupleFile generate_file(const GenerateArgs& g) {
  std::map<std::string, std::string> meta{{"family", g.family}, {"seed", std::to_string(g.seed)}};
  const Seed seed{g.seed};
  if (g.family == "spherical-unitary") {
    meta["d"] = std::to_string(g.d);
    return to_tuple_file(gen_spherical_unitary(g.d, g.n, seed), std::nullopt, meta);
  }
  if (g.family == "block") {
    Vector alpha = Vector::Zero(static_cast<Index>(g.d));
    if (g.alpha.empty()) {
      alpha(0) = 1.0;
    } else {
      if (g.alpha.size() != g.d) throw CLI::ValidationError("--alpha: expected one value per coordinate");
      for (std::size_t j = 0; j < g.d; ++j) {
        const auto v = split_numbers(g.alpha[j], 2, "--alpha");
        alpha(static_cast<Index>(j)) = Complex(v[0], v[1]);
      }
    }
    meta["n"] = std::to_string(g.n);
    meta["m"] = std::to_string(g.m);
    meta["v_scale"] = format_double(g.v_scale);
    return to_tuple_file(gen_block_example(alpha, g.n, g.m, seed, g.v_scale), std::nullopt, meta);
  }
  if (g.family == "two-isometry") {
    std::vector<std::pair<Index, Index>> shapes;
    for (const auto& s : g.shapes) {
      const auto v = split_numbers(s, 2, "--shape");
      shapes.emplace_back(as_size(v[0], "--shape"), as_size(v[1], "--shape"));
    }
    meta["unitary_dim"] = std::to_string(g.unitary_dim);
    return to_tuple_file(gen_two_isometry(g.d, g.unitary_dim, shapes, seed), std::nullopt, meta);
  }
  if (g.family == "a2") {
    A2Options opts;
    opts.kernel_dim = g.kernel_dim;
    opts.zero_nilpotent = g.zero_nilpotent;
    A2Instance inst = gen_A2_construction(g.d, g.n, seed, opts);
    TupleFile f = to_tuple_file(inst.t, inst.a, meta);
    f.sections["S"] = inst.s.operators();
    f.sections["N"] = inst.n.operators();
    return f;
  }
  if (g.family == "jordan") {
    std::vector<JordanSpec> specs;
    std::string listing;
    for (const auto& b : g.blocks) {
      const auto v = split_numbers(b, 3, "--block");
      specs.push_back({Complex(v[0], v[1]), as_size(v[2], "--block")});
      listing += (listing.empty() ? "" : ";") + b;
    }
    if (specs.empty()) specs.push_back({Complex(1.0, 0.0), g.n});
    meta["blocks"] = listing.empty() ? "1,0," + std::to_string(g.n) : listing;
    return to_tuple_file(gen_jordan_isometry(specs, seed), std::nullopt, meta);
  }
  throw CLI::ValidationError("--family: unknown family " + g.family);
}

int run_generate(const Context& ctx, const GenerateArgs& g) {
  Report r;
  r.command = "generate";
  r.info["family"] = g.family;
  try {
    const TupleFile f = generate_file(g);
    if (!g.out) {
      ctx.out << serialize(f) << std::flush;
      return kExitPassed;
    }
    write_tuple_file(*g.out, f);
    r.info["output"] = *g.out;
    r.passed = true;
    return finish(ctx, r);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::InvalidArgument:
      case ErrorKind::Dimension:
        ctx.err << "error: " << e.what() << "\n";
        return kExitUsage;
      case ErrorKind::Io:
        return input_failure(ctx, r, e.what());
      default:
        return domain_failure(ctx, r, e);
    }
  }
}

std::optional<double> env_tolerance() {
  const char* raw = std::getenv("HEROP_TOL");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (*end != '\0' || !std::isfinite(v) || v <= 0) {
    throw CLI::ValidationError(std::string("HEROP_TOL: expected a positive number, got ") + raw);
  }
  return v;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Hereditary calculus checks, S + N decompositions and 2-isometry classification", "herop"};
  app.require_subcommand(1);
  app.add_flag("--human", ctx.human, "Tabular output instead of JSON");

  double default_tol = kDefaultTol;
  try {
    default_tol = env_tolerance().value_or(kDefaultTol);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto positive = CLI::PositiveNumber;

  CheckArgs check;
  check.tol = default_tol;
  auto* c = app.add_subcommand("check", "Evaluate a hereditary identity on tuple files");
  c->add_option("--kind", check.kind, "Identity to check")
      ->required()
      ->check(CLI::IsMember({"m-iso", "spherical", "nilpotent", "toral", "isosym"}));
  c->add_option("--m", check.m, "Order m");
  c->add_option("--n", check.n, "Order n (nilpotent, isosym)");
  c->add_option("--tol", check.tol, "Residual tolerance")->check(positive);
  c->add_option("files", check.files, "Tuple files")->required();

  DecomposeArgs decompose;
  auto* dcmd = app.add_subcommand("decompose", "Split T = S + N");
  dcmd->add_option("file", decompose.file, "Tuple file")->required();
  dcmd->add_option("--s-out", decompose.s_out, "Write S here");
  dcmd->add_option("--n-out", decompose.n_out, "Write N here");
  dcmd->add_option("--out", decompose.out, "Write the full decomposition here");
  dcmd->add_option("--cluster-tol", decompose.cluster_tol, "Eigenvalue grouping tolerance")->check(positive);

  ClassifyArgs classify;
  classify.tol = default_tol;
  auto* k = app.add_subcommand("classify2", "Structure of a 2-isometric (or (A,2)-isometric) tuple");
  k->add_option("file", classify.file, "Tuple file")->required();
  k->add_option("--out", classify.out, "Write the structure file here");
  k->add_option("--tol", classify.tol, "Residual tolerance")->check(positive);
  k->add_option("--cluster-tol", classify.cluster_tol, "Eigenvalue grouping tolerance")->check(positive);

  VerifyArgs verify;
  verify.tol = default_tol;
  auto* v = app.add_subcommand("verify-theorem", "Check that an (A,m)-isometry splits as S + N");
  v->add_option("--m", verify.m, "Order m")->required()->check(CLI::Range(1u, kMaxIsometryOrder));
  v->add_option("file", verify.file, "Tuple file")->required();
  v->add_option("--tol", verify.tol, "Residual tolerance")->check(positive);
  v->add_option("--cluster-tol", verify.cluster_tol, "Eigenvalue grouping tolerance")->check(positive);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a seeded example tuple");
  g->add_option("--family", gen.family, "Example family")
      ->required()
      ->check(CLI::IsMember({"spherical-unitary", "block", "two-isometry", "a2", "jordan"}));
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("--d", gen.d, "Number of operators")->check(CLI::PositiveNumber);
  g->add_option("--n", gen.n, "Dimension (block: top size, jordan: block size)")->check(CLI::PositiveNumber);
  g->add_option("--m", gen.m, "Bottom block size")->check(CLI::PositiveNumber);
  g->add_option("--alpha", gen.alpha, "Block point, one re,im pair per coordinate");
  g->add_option("--v-scale", gen.v_scale, "Scale of the block maps V_j")->check(CLI::NonNegativeNumber);
  g->add_option("--block", gen.blocks, "Jordan block re,im,size (repeatable)");
  g->add_option("--shape", gen.shapes, "Two-isometry block n,m (repeatable)");
  g->add_option("--unitary-dim", gen.unitary_dim, "Size of the spherical unitary summand")
      ->check(CLI::NonNegativeNumber);
  g->add_option("--kernel-dim", gen.kernel_dim, "Dimension of ker A")->check(CLI::NonNegativeNumber);
  g->add_flag("--zero-nilpotent", gen.zero_nilpotent, "Force N = 0");
  g->add_option("-o,--out", gen.out, "Output file (stdout if omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (*c) return run_check(ctx, check);
    if (*dcmd) return run_decompose(ctx, decompose);
    if (*k) return run_classify(ctx, classify);
    if (*v) return run_verify(ctx, verify);
    return run_generate(ctx, gen);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPassed;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPassed;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace herop
