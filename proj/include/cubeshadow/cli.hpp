#pragma once

// Command-line front end: check, oracle, extremal, measure.
//
// Each command prints one JSON RunRecord line to stdout. Exit codes:
//   0 success, 2 parse error, 3 degenerate input (zero vector),
//   4 dimension above the oracle limit, 5 output I/O failure.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubeshadow/extremal.hpp"
#include "cubeshadow/geometry.hpp"
#include "cubeshadow/measure.hpp"
#include "cubeshadow/oracle.hpp"
#include "cubeshadow/run_record.hpp"

namespace cubeshadow::cli {

enum ExitCode : int { kOk = 0, kParse = 2, kDegenerate = 3, kDimensionLimit = 4, kIo = 5 };

inline constexpr const char* kOracleLimitEnv = "SHADOWS_ORACLE_LIMIT";
inline constexpr const char* kCsvHeader = "n,samples,seed,frac_satisfying,mean,median,q05,q95,growth_ratio";

class ParseFailure : public Error {
 public:
  using Error::Error;
};

class IoFailure : public Error {
 public:
  using Error::Error;
};

inline double parse_double(std::string_view tok) {
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseFailure("not a finite number: '" + std::string(tok) + "'");
  }
  return v;
}

inline std::uint64_t parse_count(std::string_view tok) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size()) {
    throw ParseFailure("not a nonnegative integer: '" + std::string(tok) + "'");
  }
  return v;
}

/// "0.6,0.8" -> {0.6, 0.8}
inline std::vector<double> parse_vector_literal(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_double(std::string_view(text).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Whitespace-separated numbers from a text file.
inline std::vector<double> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseFailure("cannot read vector file: " + path);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok));
  if (out.empty()) throw ParseFailure("vector file is empty: " + path);
  return out;
}

inline std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> out;
  for (double d : parse_vector_literal(text)) {
    if (d < 1 || d != std::floor(d)) throw ParseFailure("dimensions must be positive integers");
    out.push_back(static_cast<std::size_t>(d));
  }
  return out;
}

/// "a..b" -> [a, b]
inline std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ParseFailure("range must look like a..b");
  const auto a = parse_count(std::string_view(text).substr(0, dots));
  const auto b = parse_count(std::string_view(text).substr(dots + 2));
  if (a < 1 || b < a) throw ParseFailure("range needs 1 <= a <= b");
  return {a, b};
}

inline std::size_t oracle_limit_default() {
  if (const char* env = std::getenv(kOracleLimitEnv); env && *env) {
    return parse_count(env);
  }
  return OracleOptions{}.n_limit;
}

inline nlohmann::json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const Vertex& v) {
  nlohmann::json j = nlohmann::json::array();
  for (auto s : v.signs()) j.push_back(static_cast<int>(s));
  return j;
}

inline nlohmann::json to_json(const UnitVector& u) {
  return nlohmann::json(std::vector<double>(u.coords().begin(), u.coords().end()));
}

inline nlohmann::json to_json(const CriterionResult& c) {
  nlohmann::json j{{"product", c.product},
                   {"satisfied", c.satisfied},
                   {"witness", to_json(c.witness)},
                   {"degenerate_zero_coords", c.degenerate_zero_coords},
                   {"near_vertex_orthogonal", nullptr}};
  if (c.near_vertex_orthogonal) j["near_vertex_orthogonal"] = *c.near_vertex_orthogonal;
  return j;
}

inline nlohmann::json to_json(const ShadowReport& r) {
  return {{"vertex", to_json(r.vertex)},
          {"shadow", r.shadow},
          {"inf_norm", r.inf_norm},
          {"inside", r.inside},
          {"inner_product", r.inner_product}};
}

inline nlohmann::json to_json(const OracleVerdict& v) {
  return {{"exists_inside", v.exists_inside},
          {"best_vertex", to_json(v.best_vertex)},
          {"best_inf_norm", v.best_inf_norm},
          {"vertices_checked", v.vertices_checked},
          {"orthogonal_vertex_found", v.orthogonal_vertex_found},
          {"min_abs_inner_product", v.min_abs_inner_product}};
}

inline nlohmann::json to_json(const MeasureEstimate& e) {
  return {{"n", e.n},
          {"samples", e.samples},
          {"seed", e.seed},
          {"frac_satisfying", e.frac_satisfying},
          {"mean", e.mean_product},
          {"median", e.median_product},
          {"q05", e.q05},
          {"q95", e.q95},
          {"growth_ratio", number_or_null(e.growth_ratio)}};
}

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::string csv_row(const MeasureEstimate& e) {
  std::ostringstream os;
  os << e.n << ',' << e.samples << ',' << e.seed << ',' << format_double(e.frac_satisfying) << ','
     << format_double(e.mean_product) << ',' << format_double(e.median_product) << ','
     << format_double(e.q05) << ',' << format_double(e.q95) << ',' << format_double(e.growth_ratio);
  return os.str();
}

// Source of the direction for check/oracle.
struct VectorInput {
  std::string vec;
  std::string file;
  std::size_t maximizer_n = 0;

  void attach(CLI::App* sub) {
    auto* v = sub->add_option("--vec", vec, "Comma-separated coordinates, e.g. 0.6,0.8");
    auto* f = sub->add_option("--file", file, "Text file of whitespace-separated coordinates");
    auto* m = sub->add_option("--maximizer", maximizer_n, "Use the maximizer of ||u||_1||u||_inf in dimension n");
    v->excludes(f)->excludes(m);
    f->excludes(m);
  }

  nlohmann::json params() const {
    nlohmann::json p = nlohmann::json::object();
    if (!vec.empty()) p["vec"] = vec;
    if (!file.empty()) p["file"] = file;
    if (maximizer_n) p["maximizer"] = maximizer_n;
    return p;
  }

  // Returns the raw input and its normalization.
  std::pair<double, UnitVector> resolve() const {
    std::vector<double> raw;
    if (!vec.empty()) {
      raw = parse_vector_literal(vec);
    } else if (!file.empty()) {
      raw = read_vector_file(file);
    } else if (maximizer_n) {
      const UnitVector m = maximizer(maximizer_n);
      raw.assign(m.coords().begin(), m.coords().end());
    } else {
      throw ParseFailure("one of --vec, --file, --maximizer is required");
    }
    const double l2 = l2_norm(raw);
    return {l2, UnitVector::normalize(std::move(raw))};
  }
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Shadows of cube vertices under projection onto central hyperplane sections"};
    app.require_subcommand(1);
    app.fallthrough();
    bool fixed_clock = false;
    app.add_flag("--fixed-clock", fixed_clock, "Report elapsed_ms as 0 so output is byte-reproducible");

    // check
    auto* check = app.add_subcommand("check", "Evaluate ||u||_1||u||_inf <= 2 and the canonical vertex shadow");
    VectorInput check_in;
    check_in.attach(check);
    double check_margin = 0.0;
    bool check_detect = false;
    std::size_t check_limit = 0;
    check->add_option("--margin", check_margin, "Require product <= 2 - margin");
    check->add_flag("--detect-orthogonal", check_detect, "Enumerate vertices to flag near-orthogonal u");
    check->add_option("--limit", check_limit, "Oracle dimension cap for --detect-orthogonal");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Enumerate all 2^n vertex shadows");
    VectorInput oracle_in;
    oracle_in.attach(oracle);
    std::size_t oracle_limit = 0;
    double orth_tol = OracleOptions{}.orthogonal_tol;
    oracle->add_option("--limit", oracle_limit, "Largest n to enumerate (default 28 or $SHADOWS_ORACLE_LIMIT)");
    oracle->add_option("--orth-tol", orth_tol, "Tolerance on |<eps,u>| for the orthogonality flag");

    // extremal
    auto* extremal = app.add_subcommand("extremal", "Maximum of ||u||_1||u||_inf on the sphere");
    std::size_t ext_n = 0;
    std::string ext_scan;
    bool ext_verify = false;
    std::size_t ext_restarts = 8;
    std::uint64_t ext_seed = 1;
    auto* n_opt = extremal->add_option("--n", ext_n, "Dimension");
    auto* scan_opt = extremal->add_option("--scan", ext_scan, "Dimension range a..b");
    n_opt->excludes(scan_opt);
    extremal->add_flag("--verify", ext_verify, "Also run the numerical maximizer and report the gap");
    extremal->add_option("--restarts", ext_restarts, "Random starts for --verify");
    extremal->add_option("--seed", ext_seed, "Seed for --verify starts");

    // measure
    auto* measure = app.add_subcommand("measure", "Monte Carlo statistics of ||u||_1||u||_inf");
    std::string dims_text;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    std::string out_path;
    double measure_margin = 0.0;
    unsigned threads = 0;
    measure->add_option("--dims", dims_text, "Comma-separated dimensions")->required();
    measure->add_option("--samples", samples, "Samples per dimension");
    measure->add_option("--seed", seed, "Stream seed");
    measure->add_option("--out", out_path, "CSV output path");
    measure->add_option("--margin", measure_margin, "Count product <= 2 - margin as satisfying");
    measure->add_option("--threads", threads, "Worker threads (0 = hardware)");

    try {
      std::vector<const char*> argv{"cubeshadow"};
      for (const auto& a : args) argv.push_back(a.c_str());
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out_, err_);
      return code == 0 ? kOk : kParse;
    }

    const auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    try {
      if (*check) {
        rec = cmd_check(check_in, check_margin, check_detect, check_limit);
      } else if (*oracle) {
        rec = cmd_oracle(oracle_in, oracle_limit, orth_tol);
      } else if (*extremal) {
        rec = cmd_extremal(ext_n, ext_scan, ext_verify, ext_restarts, ext_seed);
      } else {
        rec = cmd_measure(dims_text, samples, seed, out_path, measure_margin, threads);
      }
    } catch (const ZeroVector& e) {
      err_ << "error: " << e.what() << '\n';
      return kDegenerate;
    } catch (const DimensionTooLarge& e) {
      err_ << "error: " << e.what() << '\n';
      return kDimensionLimit;
    } catch (const IoFailure& e) {
      err_ << "error: " << e.what() << '\n';
      return kIo;
    } catch (const Error& e) {
      err_ << "error: " << e.what() << '\n';
      return kParse;
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.elapsed_ms =
        fixed_clock ? 0 : std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    out_ << nlohmann::json(rec).dump() << '\n';
    return kOk;
  }

  static RunRecord cmd_check(const VectorInput& in, double margin, bool detect, std::size_t limit) {
    RunRecord rec;
    rec.command = "check";
    rec.params = in.params();
    rec.params["margin"] = margin;
    rec.params["detect_orthogonal"] = detect;

    const auto [input_l2, u] = in.resolve();
    Tolerances tol;
    tol.criterion_tol = -margin;
    CriterionResult c = criterion(u, tol);
    if (detect) {
      OracleOptions opts;
      opts.n_limit = limit ? limit : oracle_limit_default();
      rec.params["limit"] = opts.n_limit;
      c = with_orthogonality_check(std::move(c), u, opts.orthogonal_tol, opts);
    }
    const Norms nm = norms(u);
    rec.results = {{"n", u.dim()},
                   {"input_l2", input_l2},
                   {"u", to_json(u)},
                   {"norms", {{"l1", nm.l1}, {"l2", nm.l2}, {"linf", nm.linf}}},
                   {"criterion", to_json(c)},
                   {"canonical_shadow", to_json(shadow(u, c.witness, tol))},
                   {"closed_form_shadow_norm", shadow_norm_closed_form(u, tol)}};
    return rec;
  }

  static RunRecord cmd_oracle(const VectorInput& in, std::size_t limit, double orth_tol) {
    RunRecord rec;
    rec.command = "oracle";
    OracleOptions opts;
    opts.n_limit = limit ? limit : oracle_limit_default();
    opts.orthogonal_tol = orth_tol;
    rec.params = in.params();
    rec.params["limit"] = opts.n_limit;
    rec.params["orth_tol"] = orth_tol;

    const auto [input_l2, u] = in.resolve();
    const OracleVerdict v = enumerate_shadows(u, opts);
    const CriterionResult c = criterion(u, opts.tol);
    rec.results = to_json(v);
    rec.results["n"] = u.dim();
    rec.results["input_l2"] = input_l2;
    rec.results["criterion_satisfied"] = c.satisfied;
    rec.results["product"] = c.product;
    if (v.orthogonal_vertex_found) {
      rec.results["agreement"] = "n/a (degenerate)";
    } else {
      rec.results["agreement"] = c.satisfied == v.exists_inside;
    }
    return rec;
  }

  static RunRecord cmd_extremal(std::size_t n, const std::string& scan, bool verify, std::size_t restarts,
                                std::uint64_t seed) {
    RunRecord rec;
    rec.command = "extremal";
    std::size_t lo = n, hi = n;
    if (!scan.empty()) {
      std::tie(lo, hi) = parse_range(scan);
      rec.params["scan"] = scan;
    } else {
      if (n < 1) throw ParseFailure("one of --n (>= 1) or --scan is required");
      rec.params["n"] = n;
    }
    rec.params["verify"] = verify;
    if (verify) {
      rec.params["restarts"] = restarts;
      rec.seed = seed;
    }

    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t d = lo; d <= hi; ++d) {
      const ExtremalResult r = extremal_result(d);
      nlohmann::json row{{"n", r.n},
                         {"max_value", r.max_value},
                         {"maximizer", to_json(r.maximizer)},
                         {"achieved_value", r.achieved_value},
                         {"threshold_ok", r.threshold_ok}};
      if (verify) {
        const NumericalMax m = numerical_max(d, restarts, seed);
        row["numerical_value"] = m.value;
        row["gap"] = std::abs(m.value - r.max_value);
        row["converged_starts"] = m.converged_starts;
      }
      rows.push_back(std::move(row));
    }
    rec.results = {{"rows", rows}, {"threshold_dimension", threshold_dimension()}};
    return rec;
  }

  static RunRecord cmd_measure(const std::string& dims_text, std::uint64_t samples, std::uint64_t seed,
                               const std::string& out_path, double margin, unsigned threads) {
    RunRecord rec;
    rec.command = "measure";
    const auto dims = parse_dims(dims_text);
    if (samples < 1) throw ParseFailure("--samples must be >= 1");
    rec.params = {{"dims", dims}, {"samples", samples}, {"margin", margin}};
    rec.params["out"] = out_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(out_path);
    rec.seed = seed;

    std::ofstream csv;
    if (!out_path.empty()) {
      csv.open(out_path, std::ios::binary | std::ios::trunc);
      if (!csv) throw IoFailure("cannot open output file: " + out_path);
    }

    MeasureOptions opts{margin, threads};
    std::vector<MeasureEstimate> rows;
    for (std::size_t n : dims) rows.push_back(estimate(n, samples, seed, opts));

    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& r : rows) jrows.push_back(to_json(r));
    rec.results = {{"rows", jrows}, {"growth_slope", number_or_null(growth_slope(rows))}};

    if (csv.is_open()) {
      csv << kCsvHeader << '\n';
      for (const auto& r : rows) csv << csv_row(r) << '\n';
      csv.flush();
      if (!csv) throw IoFailure("failed writing output file: " + out_path);
    }
    return rec;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(args);
}

}  // namespace cubeshadow::cli
