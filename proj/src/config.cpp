#include "curselab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "curselab/errors.hpp"

namespace curselab {

using json = nlohmann::json;

namespace {

// nlohmann reports "parse error at line L, column C: ..."; drop the id prefix.
std::string parse_error_message(const json::parse_error& e) {
  std::string what = e.what();
  if (const auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
  return what;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(parse_error_message(e));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(path + ": unknown key \"" + key + "\"");
  }
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_u64(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw InvalidParameter(path + ": seed must be nonnegative");
  throw ConfigError(path + ": expected an unsigned integer");
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path + ": expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path + ": expected a string");
  return v.get<std::string>();
}

template <class F>
auto as_list(const json& v, const std::string& path, F&& item) {
  using T = decltype(item(v, path));
  std::vector<T> out;
  if (!v.is_array()) {
    out.push_back(item(v, path));  // a scalar is a one-element list
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(item(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

int positive_int(const json& v, const std::string& path) {
  const auto x = as_int(v, path);
  if (x < 1 || x > 1'000'000'000) throw InvalidParameter(path + ": must be a positive integer, got " + std::to_string(x));
  return static_cast<int>(x);
}

int nonnegative_int(const json& v, const std::string& path) {
  const auto x = as_int(v, path);
  if (x < 0 || x > 1'000'000'000) throw InvalidParameter(path + ": must be nonnegative, got " + std::to_string(x));
  return static_cast<int>(x);
}

double required(const json& params, const std::string& path, std::string_view key) {
  if (!params.contains(key)) throw ConfigError(join(path, key) + ": required");
  return as_double(params.at(std::string(key)), join(path, key));
}

Domain parse_interval(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path + ": expected [lower, upper]");
  const double a = as_double(v[0], path + "[0]");
  const double b = as_double(v[1], path + "[1]");
  if (!(a < b)) throw InvalidParameter(path + ": lower must be below upper");
  return Domain::interval(a, b);
}

UnivariateFactor parse_gram_based(const json& params, const std::string& path) {
  check_keys(params, path, {"basis", "domain", "sobolev_order", "moments", "integrals"});
  if (!params.contains("basis")) throw ConfigError(join(path, "basis") + ": required");
  if (!params.contains("domain")) throw ConfigError(join(path, "domain") + ": required");
  const Domain dom = parse_interval(params.at("domain"), join(path, "domain"));

  std::vector<Polynomial> basis;
  const json& jb = params.at("basis");
  if (!jb.is_array() || jb.empty()) throw ConfigError(join(path, "basis") + ": expected a nonempty array");
  for (std::size_t i = 0; i < jb.size(); ++i) {
    const std::string p = join(path, "basis") + "[" + std::to_string(i) + "]";
    if (!jb[i].is_array() || jb[i].empty()) throw ConfigError(p + ": expected coefficient array");
    Polynomial poly;
    for (std::size_t k = 0; k < jb[i].size(); ++k) poly.coeffs.push_back(as_double(jb[i][k], p + "[" + std::to_string(k) + "]"));
    basis.push_back(std::move(poly));
  }

  if (params.contains("sobolev_order")) {
    if (params.contains("moments") || params.contains("integrals")) {
      throw ConfigError(path + ": give either sobolev_order or moments/integrals, not both");
    }
    const int order = nonnegative_int(params.at("sobolev_order"), join(path, "sobolev_order"));
    return UnivariateFactor::from_inner_product(
        sobolev_inner_product_spec(std::move(basis), order, dom.lower, dom.upper));
  }
  if (!params.contains("moments") || !params.contains("integrals")) {
    throw ConfigError(path + ": need sobolev_order or both moments and integrals");
  }
  const auto m = basis.size();
  InnerProductSpec spec;
  spec.domain = dom;
  spec.moments.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  spec.integrals.resize(static_cast<Eigen::Index>(m));
  const json& jm = params.at("moments");
  const json& ji = params.at("integrals");
  const std::string pm = join(path, "moments"), pi = join(path, "integrals");
  if (!jm.is_array() || jm.size() != m) throw ConfigError(pm + ": expected " + std::to_string(m) + " rows");
  if (!ji.is_array() || ji.size() != m) throw ConfigError(pi + ": expected " + std::to_string(m) + " entries");
  for (std::size_t i = 0; i < m; ++i) {
    if (!jm[i].is_array() || jm[i].size() != m) throw ConfigError(pm + "[" + std::to_string(i) + "]: expected " + std::to_string(m) + " entries");
    for (std::size_t j = 0; j < m; ++j) {
      spec.moments(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          as_double(jm[i][j], pm + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    spec.integrals(static_cast<Eigen::Index>(i)) = as_double(ji[i], pi + "[" + std::to_string(i) + "]");
  }
  spec.basis = std::move(basis);
  return UnivariateFactor::from_inner_product(spec);
}

UnivariateFactor parse_factor(const json& jf, const std::string& path, int& times) {
  check_keys(jf, path, {"family", "params", "times"});
  if (!jf.contains("family")) throw ConfigError(join(path, "family") + ": required");
  const std::string name = as_string(jf.at("family"), join(path, "family"));
  const auto fam = parse_family(name);
  if (!fam) throw ConfigError(join(path, "family") + ": unknown family \"" + name + "\"");
  times = jf.contains("times") ? positive_int(jf.at("times"), join(path, "times")) : 1;

  const json params = jf.contains("params") ? jf.at("params") : json::object();
  const std::string pp = join(path, "params");

  switch (*fam) {
    case Family::kTrig1:
      check_keys(params, pp, {});
      return UnivariateFactor::trig1();
    case Family::kWeightedTrig: {
      check_keys(params, pp, {"alpha"});
      const double a = required(params, pp, "alpha");
      if (!(a > 0.0 && a <= 1.0)) {
        throw AlphaOutOfRange(join(pp, "alpha") + ": " + format_double(a) + " is outside (0, 1]");
      }
      return UnivariateFactor::weighted_trig(a);
    }
    case Family::kPhaseTrig:
      check_keys(params, pp, {"phi"});
      return UnivariateFactor::phase_trig(required(params, pp, "phi"));
    case Family::kGaussPoly2: {
      check_keys(params, pp, {"normalized", "box"});
      const bool norm = params.contains("normalized") ? as_bool(params.at("normalized"), join(pp, "normalized")) : true;
      const double box = params.contains("box") ? as_double(params.at("box"), join(pp, "box")) : 5.0;
      if (!(box > 0.0) || !std::isfinite(box)) throw InvalidParameter(join(pp, "box") + ": must be positive");
      return UnivariateFactor::gauss_poly2(norm, box);
    }
    case Family::kIntervalPoly2:
      check_keys(params, pp, {});
      return UnivariateFactor::interval_poly2();
    case Family::kZeroBoundary:
      check_keys(params, pp, {});
      return UnivariateFactor::zero_boundary();
    case Family::kCenteredDiscrepancy: {
      check_keys(params, pp, {"normalized"});
      const bool norm = params.contains("normalized") ? as_bool(params.at("normalized"), join(pp, "normalized")) : false;
      return UnivariateFactor::centered_discrepancy(norm);
    }
    case Family::kKorobovSmooth: {
      check_keys(params, pp, {"r"});
      if (!params.contains("r")) throw ConfigError(join(pp, "r") + ": required");
      return UnivariateFactor::korobov_smooth(positive_int(params.at("r"), join(pp, "r")));
    }
    case Family::kKorobovWeighted: {
      check_keys(params, pp, {"s", "gamma"});
      const double s = required(params, pp, "s");
      if (!(s > 0.5)) throw InvalidParameter(join(pp, "s") + ": must exceed 1/2, got " + format_double(s));
      const double g = required(params, pp, "gamma");
      if (!(g > 0.0) || !std::isfinite(g)) throw InvalidParameter(join(pp, "gamma") + ": must be positive");
      return UnivariateFactor::korobov_weighted(s, g);
    }
    case Family::kAffineLinear:
      check_keys(params, pp, {});
      return UnivariateFactor::affine_linear();
    case Family::kGramBased:
      return parse_gram_based(params, pp);
  }
  throw ConfigError(path + ": unsupported family");
}

void require_monotone_r(const std::vector<int>& r, const std::string& path) {
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] < r[i - 1]) {
      throw InvalidParameter(path + "[" + std::to_string(i) + "]: r must be nondecreasing, got " +
                             std::to_string(r[i]) + " after " + std::to_string(r[i - 1]));
    }
  }
}

void require_eps(double e, const std::string& path) {
  if (!(e > 0.0 && e < 1.0)) throw InvalidParameter(path + ": epsilon must lie in (0, 1), got " + format_double(e));
}

ExperimentBlock parse_experiment(const json& j) {
  const std::string p = "experiment";
  check_keys(j, p, {"n", "trials", "seed", "threshold", "dominance_threshold"});
  ExperimentBlock b;
  if (j.contains("n")) b.n = nonnegative_int(j.at("n"), p + ".n");
  if (j.contains("trials")) b.trials = positive_int(j.at("trials"), p + ".trials");
  if (j.contains("seed")) b.seed = as_u64(j.at("seed"), p + ".seed");
  if (j.contains("threshold")) b.threshold = as_double(j.at("threshold"), p + ".threshold");
  if (j.contains("dominance_threshold")) b.dominance_threshold = as_double(j.at("dominance_threshold"), p + ".dominance_threshold");
  return b;
}

BoundBlock parse_bound(const json& j) {
  const std::string p = "bound";
  check_keys(j, p, {"formula", "n", "d", "epsilon", "g_norm_sq", "c2"});
  BoundBlock b;
  if (j.contains("formula")) b.formula = as_string(j.at("formula"), p + ".formula");
  if (j.contains("n")) {
    b.n = as_list(j.at("n"), p + ".n", [](const json& v, const std::string& q) {
      return static_cast<std::int64_t>(nonnegative_int(v, q));
    });
  }
  if (j.contains("d")) b.d = as_list(j.at("d"), p + ".d", positive_int);
  if (j.contains("epsilon")) {
    b.epsilon = as_list(j.at("epsilon"), p + ".epsilon", as_double);
    for (std::size_t i = 0; i < b.epsilon.size(); ++i) require_eps(b.epsilon[i], p + ".epsilon[" + std::to_string(i) + "]");
  }
  if (j.contains("g_norm_sq")) b.g_norm_sq = as_double(j.at("g_norm_sq"), p + ".g_norm_sq");
  if (j.contains("c2")) b.c2 = as_double(j.at("c2"), p + ".c2");
  return b;
}

OptimizeBlock parse_optimize(const json& j) {
  const std::string p = "optimize";
  check_keys(j, p, {"n", "restarts", "evaluations", "seed"});
  OptimizeBlock b;
  if (j.contains("n")) b.n = as_list(j.at("n"), p + ".n", nonnegative_int);
  if (j.contains("restarts")) b.options.restarts = positive_int(j.at("restarts"), p + ".restarts");
  if (j.contains("evaluations")) b.options.evaluations = positive_int(j.at("evaluations"), p + ".evaluations");
  if (j.contains("seed")) b.options.seed = as_u64(j.at("seed"), p + ".seed");
  return b;
}

KorobovBlock parse_korobov(const json& j) {
  const std::string p = "korobov";
  check_keys(j, p, {"r", "d_max", "s", "gamma", "epsilon"});
  KorobovBlock b;
  if (j.contains("r")) {
    const json& jr = j.at("r");
    if (jr.is_array()) {
      b.r = as_list(jr, p + ".r", positive_int);
      if (j.contains("d_max")) throw ConfigError(p + ".d_max: only valid with a scalar r");
    } else {
      const int r = positive_int(jr, p + ".r");
      if (!j.contains("d_max")) throw ConfigError(p + ".d_max: required with a scalar r");
      b.r.assign(static_cast<std::size_t>(positive_int(j.at("d_max"), p + ".d_max")), r);
    }
    require_monotone_r(b.r, p + ".r");
  }
  if (j.contains("s")) {
    b.s = as_double(j.at("s"), p + ".s");
    if (!(*b.s > 0.5)) throw InvalidParameter(p + ".s: must exceed 1/2, got " + format_double(*b.s));
  }
  if (j.contains("gamma")) {
    const json& jg = j.at("gamma");
    if (!jg.is_array()) throw ConfigError(p + ".gamma: expected an array of rows");
    for (std::size_t i = 0; i < jg.size(); ++i) {
      b.gamma.push_back(as_list(jg[i], p + ".gamma[" + std::to_string(i) + "]", as_double));
    }
  }
  if (j.contains("epsilon")) {
    b.epsilon = as_double(j.at("epsilon"), p + ".epsilon");
    require_eps(b.epsilon, p + ".epsilon");
  }
  if (b.r.empty() == !b.s.has_value()) throw ConfigError(p + ": give exactly one of r or s/gamma");
  if (b.s && b.gamma.empty()) throw ConfigError(p + ".gamma: required with s");
  return b;
}

SchurBlock parse_schur(const json& j) {
  const std::string p = "schur";
  check_keys(j, p, {"theorem", "constant", "n", "trials", "seed"});
  SchurBlock b;
  if (j.contains("theorem")) {
    const std::string t = as_string(j.at("theorem"), p + ".theorem");
    const auto th = parse_schur_theorem(t);
    if (!th) throw ConfigError(p + ".theorem: unknown theorem \"" + t + "\"");
    b.theorem = *th;
  }
  if (j.contains("constant")) {
    const std::string c = as_string(j.at("constant"), p + ".constant");
    if (c == "PROVEN") b.constant = CombinedConstant::kProven;
    else if (c == "CONJECTURED") b.constant = CombinedConstant::kConjectured;
    else throw ConfigError(p + ".constant: expected PROVEN or CONJECTURED");
  }
  if (j.contains("n")) b.n = static_cast<int>(as_int(j.at("n"), p + ".n"));
  if (j.contains("trials")) b.trials = static_cast<int>(as_int(j.at("trials"), p + ".trials"));
  if (j.contains("seed")) b.seed = as_u64(j.at("seed"), p + ".seed");
  return b;
}

}  // namespace

TensorProblem ProblemConfig::problem() const {
  if (factors.empty()) throw ConfigError("factors: required for this command");
  return TensorProblem(factors);
}

ProblemConfig parse_problem_config(std::string_view text) {
  const json root = parse_json(text);
  check_keys(root, "config", {"factors", "experiment", "bound", "optimize", "korobov", "schur"});
  ProblemConfig cfg;
  if (root.contains("factors")) {
    const json& jf = root.at("factors");
    if (!jf.is_array()) throw ConfigError("factors: expected an array");
    for (std::size_t i = 0; i < jf.size(); ++i) {
      int times = 1;
      UnivariateFactor f = parse_factor(jf[i], "factors[" + std::to_string(i) + "]", times);
      for (int k = 0; k < times; ++k) cfg.factors.push_back(f);
    }
  }
  if (root.contains("experiment")) cfg.experiment = parse_experiment(root.at("experiment"));
  if (root.contains("bound")) cfg.bound = parse_bound(root.at("bound"));
  if (root.contains("optimize")) cfg.optimize = parse_optimize(root.at("optimize"));
  if (root.contains("korobov")) cfg.korobov = parse_korobov(root.at("korobov"));
  if (root.contains("schur")) cfg.schur = parse_schur(root.at("schur"));
  return cfg;
}

ProblemConfig load_problem_config(const std::string& path) { return parse_problem_config(read_file(path)); }

std::vector<PointSet> parse_point_sets(std::string_view text, int d) {
  const json root = parse_json(text);
  if (!root.is_array()) throw ConfigError("points: expected an array of point sets");
  std::vector<PointSet> out;
  for (std::size_t s = 0; s < root.size(); ++s) {
    const std::string ps = "points[" + std::to_string(s) + "]";
    const json& js = root[s];
    if (!js.is_array()) throw ConfigError(ps + ": expected an array of points");
    std::vector<double> coords;
    for (std::size_t j = 0; j < js.size(); ++j) {
      const std::string pj = ps + "[" + std::to_string(j) + "]";
      const json& jp = js[j];
      if (jp.is_number() && d == 1) {
        coords.push_back(jp.get<double>());
        continue;
      }
      if (!jp.is_array()) throw ConfigError(pj + ": expected an array of coordinates");
      if (static_cast<int>(jp.size()) != d) {
        throw DimensionMismatch(pj + ": has " + std::to_string(jp.size()) + " coordinates, problem has " + std::to_string(d));
      }
      for (std::size_t i = 0; i < jp.size(); ++i) coords.push_back(as_double(jp[i], pj + "[" + std::to_string(i) + "]"));
    }
    out.emplace_back(static_cast<int>(js.size()), d, std::move(coords));
  }
  return out;
}

std::vector<PointSet> load_point_sets(const std::string& path, int d) {
  return parse_point_sets(read_file(path), d);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace curselab
