#include "realtori/jobs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>
#include <vector>

#include <json.hpp>

#include "realtori/cohomology.hpp"
#include "realtori/degenerations.hpp"
#include "realtori/extensions.hpp"
#include "realtori/geodesics.hpp"
#include "realtori/moduli.hpp"
#include "realtori/siegel.hpp"
#include "realtori/spd_cone.hpp"
#include "realtori/theta.hpp"

namespace realtori {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- input ---

[[noreturn]] void schema(const std::string& msg) { fail(ErrorKind::InvalidInput, msg); }

const json& field(const json& obj, const std::string& key) {
  if (!obj.contains(key)) schema("missing field \"" + key + "\"");
  return obj.at(key);
}

double as_double(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>()).convert_to<double>();
    } catch (const Error&) {
      schema(what + ": \"" + v.get<std::string>() + "\" is not a number");
    }
  }
  schema(what + ": expected a number");
}

BigInt as_bigint(const json& v, const std::string& what) {
  if (v.is_number_integer()) return v.is_number_unsigned() ? BigInt(v.get<unsigned long long>()) : BigInt(v.get<long long>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::nearbyint(d) && std::abs(d) < 9e15) return BigInt(static_cast<long long>(d));
  }
  if (v.is_string()) {
    try {
      const BigRational r = parse_rational(v.get<std::string>());
      if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r);
    } catch (const Error&) {
    }
  }
  schema(what + ": expected an integer");
}

long long as_ll(const json& v, const std::string& what) { return to_ll(as_bigint(v, what)); }

BigRational as_rational(const json& v, const std::string& what) {
  if (v.is_number_integer()) return BigRational(as_bigint(v, what));
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const Error&) {
      schema(what + ": \"" + v.get<std::string>() + "\" is not a rational");
    }
  }
  schema(what + ": expected an exact rational (integer or \"p/q\" string)");
}

Complex as_complex(const json& v, const std::string& what) {
  if (v.is_object()) {
    const double re = v.contains("re") ? as_double(v.at("re"), what) : 0.0;
    const double im = v.contains("im") ? as_double(v.at("im"), what) : 0.0;
    return {re, im};
  }
  return {as_double(v, what), 0.0};
}

// Rows of a rectangular nested array; an empty outer array has zero rows.
std::vector<const json*> rows_of(const json& v, const std::string& what, std::size_t& cols) {
  if (!v.is_array()) schema(what + ": expected a matrix (array of rows)");
  std::vector<const json*> rows;
  cols = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& r = v[i];
    if (!r.is_array()) schema(what + ": expected a matrix (array of rows)");
    if (i == 0) cols = r.size();
    if (r.size() != cols) schema(what + ": rows have different lengths");
    rows.push_back(&r);
  }
  return rows;
}

Mat as_mat(const json& v, const std::string& what) {
  std::size_t cols = 0;
  const auto rows = rows_of(v, what, cols);
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = as_double((*rows[i])[j], what);
  return m;
}

Mat as_square(const json& v, const std::string& what) {
  Mat m = as_mat(v, what);
  if (m.rows() != m.cols() || m.rows() == 0) schema(what + ": expected a non-empty square matrix");
  return m;
}

CMat as_cmat(const json& v, const std::string& what) {
  std::size_t cols = 0;
  const auto rows = rows_of(v, what, cols);
  CMat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = as_complex((*rows[i])[j], what);
  return m;
}

IntMatrix as_imat(const json& v, const std::string& what) {
  std::size_t cols = 0;
  const auto rows = rows_of(v, what, cols);
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = as_bigint((*rows[i])[j], what);
  return m;
}

Vec as_vec(const json& v, const std::string& what) {
  if (!v.is_array()) schema(what + ": expected an array of numbers");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = as_double(v[i], what);
  return out;
}

CVec as_cvec(const json& v, const std::string& what) {
  if (!v.is_array()) schema(what + ": expected an array of numbers");
  CVec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = as_complex(v[i], what);
  return out;
}

IntVector as_ivec(const json& v, const std::string& what) {
  if (!v.is_array()) schema(what + ": expected an array of integers");
  IntVector out;
  for (const auto& e : v) out.push_back(as_ll(e, what));
  return out;
}

SpdMatrix as_spd(const json& v, const std::string& what) { return SpdMatrix(as_square(v, what)); }

SiegelPoint as_siegel(const json& v, const std::string& what) {
  if (v.is_object()) {
    const Mat y = as_square(field(v, "Y"), what + ".Y");
    const Mat x = v.contains("X") ? as_mat(v.at("X"), what + ".X") : Mat::Zero(y.rows(), y.cols());
    return SiegelPoint(x, y);
  }
  return SiegelPoint::from_complex(as_cmat(v, what));
}

// True when every leaf is an integer or a string, so the value is exact.
bool is_exact(const json& v) {
  if (v.is_array()) return std::all_of(v.begin(), v.end(), [](const json& e) { return is_exact(e); });
  if (v.is_object()) {
    for (const auto& [k, e] : v.items())
      if (!is_exact(e)) return false;
    return true;
  }
  return v.is_number_integer() || v.is_string();
}

// --------------------------------------------------------------- output ---

json out_double(double d) { return std::isfinite(d) ? json(d) : json(nullptr); }

json out_bigint(const BigInt& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return json(static_cast<long long>(v));
  return json(to_string(v));
}

json out_mat(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(out_double(m(i, j)));
    a.push_back(std::move(r));
  }
  return a;
}

json out_vec(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(out_double(v(i)));
  return a;
}

json out_complex(const Complex& z) {
  json o = json::object();
  o["re"] = out_double(z.real());
  o["im"] = out_double(z.imag());
  return o;
}

json out_cmat(const CMat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(out_complex(m(i, j)));
    a.push_back(std::move(r));
  }
  return a;
}

json out_imat(const IntMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(out_bigint(m(i, j)));
    a.push_back(std::move(r));
  }
  return a;
}

json out_siegel(const SiegelPoint& p) {
  json o = json::object();
  o["X"] = out_mat(p.X());
  o["Y"] = out_mat(p.Y().matrix());
  return o;
}

json out_invariant(const ModuliInvariant& inv) {
  json o = json::object();
  o["lambda"] = inv.lambda;
  o["i"] = inv.i;
  o["form"] = standard_form_name(inv);
  return o;
}

void format_number(double d, std::string& out) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d == 0.0 ? 0.0 : d);  // prints -0 as 0
  out += buf;
}

// Fixed formatting: two-space indent, %.17g floats, insertion key order.
void dump(const json& j, std::string& out, int level) {
  const std::string pad(static_cast<std::size_t>(2 * (level + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * level), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(k).dump() + ": ";
        dump(v, out, level + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line, which keeps matrices readable.
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], out, level + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], out, level + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: format_number(j.get<double>(), out); return;
    default: out += j.dump(); return;
  }
}

// -------------------------------------------------------------- context ---

struct Ctx {
  const json& req;
  const JobOptions& opts;
  bool undecided = false;

  double tol(double fallback) const {
    if (opts.tol) return *opts.tol;
    return req.contains("tol") ? as_double(req.at("tol"), "tol") : fallback;
  }
  double eps(double fallback) const {
    if (opts.eps) return *opts.eps;
    return req.contains("eps") ? as_double(req.at("eps"), "eps") : fallback;
  }
  long long bound(long long fallback) const {
    if (opts.bound) return *opts.bound;
    return req.contains("bound") ? as_ll(req.at("bound"), "bound") : fallback;
  }
  unsigned long long seed(unsigned long long fallback) const {
    if (opts.seed) return *opts.seed;
    return req.contains("seed") ? static_cast<unsigned long long>(as_ll(req.at("seed"), "seed")) : fallback;
  }
  bool has(const char* key) const { return req.contains(key); }
  const json& at(const char* key) const { return field(req, key); }
};

void put_verdict(json& out, Ctx& ctx, const EquivalenceResult<IntMatrix>& r) {
  out["verdict"] = verdict_name(r.verdict);
  out["witness"] = r.witness ? out_imat(*r.witness) : json(nullptr);
  out["candidates"] = r.candidates_searched;
  if (!r.note.empty()) out["note"] = r.note;
  if (r.verdict == Verdict::Undecided) ctx.undecided = true;
}

// --------------------------------------------------------------- handlers ---

json cmd_reduce(Ctx& ctx) {
  const SpdMatrix y = as_spd(ctx.at("Y"), "Y");
  const double tol = ctx.tol(1e-10);
  const MinkowskiResult r = minkowski_reduce(y);
  json out;
  out["R"] = out_mat(r.R.matrix());
  out["A"] = out_imat(r.A);
  out["reduced"] = is_minkowski_reduced(r.R, tol);
  out["tol"] = tol;
  return out;
}

json cmd_equiv(Ctx& ctx) {
  const double tol = ctx.tol(1e-9);
  json out;
  if (ctx.has("Omega1")) {
    out["kind"] = "real_ppav";
    put_verdict(out, ctx, real_ppav_equivalent(as_siegel(ctx.at("Omega1"), "Omega1"), as_siegel(ctx.at("Omega2"), "Omega2"), tol));
  } else {
    out["kind"] = "polarized_tori";
    put_verdict(out, ctx, polarized_tori_equivalent(as_spd(ctx.at("Y1"), "Y1"), as_spd(ctx.at("Y2"), "Y2"), tol));
  }
  out["tol"] = tol;
  return out;
}

json cmd_classify_mod2(Ctx& ctx) {
  const IntMatrix n = as_imat(ctx.at("N"), "N");
  if (!n.is_square() || n.rows() == 0) schema("N: expected a non-empty square matrix");
  const Mod2StandardForm f = mod2_standard_form(Gf2Matrix::from_int(n));
  json out = out_invariant(f.invariant);
  out["S"] = out_imat(f.S.to_int());
  out["A"] = out_imat(f.A.to_int());
  return out;
}

json cmd_invariants(Ctx& ctx) {
  json out;
  if (ctx.has("Omega")) {
    const double tol = ctx.tol(1e-9);
    const ModuliClass c = moduli_class(as_siegel(ctx.at("Omega"), "Omega"), tol);
    out = out_invariant(c.invariant);
    out["standard_M"] = out_imat(c.standard_M);
    out["reduced_Y"] = out_mat(c.reduced_Y.matrix());
    out["normalizer"] = out_imat(c.normalizer);
    out["tol"] = tol;
    return out;
  }
  const long long g = as_ll(ctx.at("g"), "g");
  if (g < 1 || g > 64) schema("g must be between 1 and 64");
  const auto inv = valid_invariants(static_cast<int>(g));
  out["g"] = g;
  out["count"] = inv.size();
  json list = json::array();
  for (const auto& i : inv) list.push_back(out_invariant(i));
  out["invariants"] = std::move(list);
  return out;
}

json cmd_sigma(Ctx& ctx) {
  const IntMatrix m = as_imat(ctx.at("M"), "M");
  json out;
  out["Sigma"] = out_imat(sigma_M_matrix(m));
  if (ctx.has("Y")) out["image"] = out_siegel(sigma_involution_image(m, as_spd(ctx.at("Y"), "Y")));
  return out;
}

json cmd_real_structure(Ctx& ctx) {
  const double tol = ctx.tol(1e-9);
  json out;
  out["M_sigma"] = out_imat(real_structure_matrix(as_siegel(ctx.at("Omega"), "Omega"), tol));
  out["tol"] = tol;
  return out;
}

json cmd_cayley(Ctx& ctx) {
  json out;
  if (ctx.has("Omega")) {
    out["W"] = out_cmat(cayley_to_disk(as_siegel(ctx.at("Omega"), "Omega")).W());
  } else {
    out["Omega"] = out_siegel(cayley_to_halfspace(DiskPoint(as_cmat(ctx.at("W"), "W"), 1e-9)));
  }
  return out;
}

json cmd_act(Ctx& ctx) {
  const Mat m = as_mat(ctx.at("M"), "M");
  json out;
  if (ctx.has("W")) {
    out["W"] = out_cmat(disk_act(m, DiskPoint(as_cmat(ctx.at("W"), "W"), 1e-9)).W());
  } else {
    out["Omega"] = out_siegel(sp_act(m, as_siegel(ctx.at("Omega"), "Omega")));
  }
  return out;
}

json cmd_jacobi_act(Ctx& ctx) {
  JacobiGroupElement e;
  e.M = as_mat(ctx.at("M"), "M");
  e.lambda = as_mat(ctx.at("lambda"), "lambda");
  e.mu = as_mat(ctx.at("mu"), "mu");
  e.kappa = as_mat(ctx.at("kappa"), "kappa");
  const auto [omega, z] = jacobi_group_act(e, as_siegel(ctx.at("Omega"), "Omega"), as_cmat(ctx.at("Z"), "Z"));
  json out;
  out["Omega"] = out_siegel(omega);
  out["Z"] = out_cmat(z);
  return out;
}

std::vector<Complex> as_rho(const json& v) {
  std::vector<Complex> rho;
  if (!v.is_array()) schema("rho: expected an array");
  for (const auto& e : v) rho.push_back(as_complex(e, "rho"));
  return rho;
}

ThetaSpec theta_spec(const Ctx& ctx) {
  if (ctx.has("Pi")) {
    ThetaSpec s{as_square(ctx.at("Pi"), "Pi"), as_square(ctx.at("B"), "B"), {}};
    s.rho = ctx.has("rho") ? as_rho(ctx.at("rho")) : std::vector<Complex>(s.g(), Complex(1, 0));
    s.validate();
    return s;
  }
  return section_theta_spec(canonical_line_bundle_data(as_spd(ctx.at("Y"), "Y")));
}

json out_sum(const LatticeSum& s) {
  json out;
  out["value"] = out_complex(s.value);
  out["tail_bound"] = out_double(s.tail_bound);
  out["radius"] = s.radius;
  out["eps"] = s.eps;
  return out;
}

json cmd_theta(Ctx& ctx) {
  const ThetaSpec s = theta_spec(ctx);
  const Vec v = ctx.has("v") ? as_vec(ctx.at("v"), "v") : Vec::Zero(static_cast<Eigen::Index>(s.g()));
  const double eps = ctx.eps(1e-12);
  const bool periodic = ctx.has("periodic") && ctx.at("periodic").get<bool>();
  json out = out_sum(periodic ? periodic_function_eval(s, v, eps) : theta_eval(s, v, eps));
  out["function"] = periodic ? "periodic" : "theta";
  return out;
}

json cmd_factor(Ctx& ctx) {
  const FactorKind kind = parse_factor_kind(ctx.at("kind").get<std::string>());
  json out;
  out["kind"] = factor_kind_name(kind);
  if (kind == FactorKind::I_B_rho) {
    const ThetaSpec s = theta_spec(ctx);
    out["value"] = out_complex(factor_I_B_rho(s, as_ivec(ctx.at("lambda"), "lambda"), as_vec(ctx.at("v"), "v")));
    return out;
  }
  const LineBundleSpec b = canonical_line_bundle_data(as_spd(ctx.at("Y"), "Y"));
  Complex value;
  if (kind == FactorKind::J_H_alpha) {
    value = factor_J(b, as_ivec(ctx.at("ell"), "ell"), as_cvec(ctx.at("z"), "z"));
  } else if (kind == FactorKind::I_alpha_Lambda) {
    value = factor_I_alpha(b, as_ivec(ctx.at("lambda"), "lambda"), as_vec(ctx.at("v"), "v"));
  } else {
    value = factor_I_B_alpha(b, as_ivec(ctx.at("lambda"), "lambda"), as_vec(ctx.at("v"), "v"));
  }
  out["value"] = out_complex(value);
  const unsigned long long seed = ctx.seed(1);
  out["semicharacter_defect"] = out_double(semicharacter_check(b.alpha, 200, seed));
  out["seed"] = seed;
  return out;
}

MinkowskiEuclidPoint me_point(const Ctx& ctx, const char* ykey, const char* vkey) {
  MinkowskiEuclidPoint p{as_spd(ctx.at(ykey), ykey), Mat()};
  p.V = ctx.has(vkey) ? as_mat(ctx.at(vkey), vkey) : Mat(0, static_cast<Eigen::Index>(p.g()));
  if (p.V.rows() == 0) p.V.resize(0, static_cast<Eigen::Index>(p.g()));
  p.validate();
  return p;
}

json cmd_distance(Ctx& ctx) {
  const MinkowskiEuclidPoint p0 = me_point(ctx, "Y0", "V0"), p1 = me_point(ctx, "Y1", "V1");
  const double a_c = ctx.has("a_c") ? as_double(ctx.at("a_c"), "a_c") : 1.0;
  const double b_c = ctx.has("b_c") ? as_double(ctx.at("b_c"), "b_c") : 1.0;
  const DistanceResult r = distance(p0, p1, a_c, b_c);
  json out;
  out["distance"] = out_double(r.distance);
  out["spd_term"] = out_double(r.spd_term);
  out["euclid_term"] = out_double(r.euclid_term);
  out["t"] = out_vec(r.t);
  out["delta"] = out_vec(r.delta);
  out["pencil_residual"] = out_double(r.pencil_residual);
  out["quadrature_panels"] = r.quadrature_panels;
  return out;
}

json cmd_geodesic(Ctx& ctx) {
  const Mat k = as_square(ctx.at("k"), "k");
  const Vec lambdas = as_vec(ctx.at("lambdas"), "lambdas");
  Mat z = ctx.has("Z") ? as_mat(ctx.at("Z"), "Z") : Mat(0, k.cols());
  if (z.rows() == 0) z.resize(0, k.cols());
  const double t = as_double(ctx.at("t"), "t");
  const MinkowskiEuclidPoint p = geodesic_through_origin(k, lambdas, z, t);
  json out;
  out["Y"] = out_mat(p.Y.matrix());
  out["V"] = out_mat(p.V);
  return out;
}

json cmd_iwasawa(Ctx& ctx) {
  const SpdMatrix y = as_spd(ctx.at("Y"), "Y");
  const long long r = as_ll(ctx.at("r"), "r");
  if (r < 0) schema("r must be non-negative");
  const std::string variant = ctx.has("variant") ? ctx.at("variant").get<std::string>() : "lower";
  if (variant != "lower" && variant != "upper") schema("variant must be \"lower\" or \"upper\"");
  const bool upper = variant == "upper";
  const IwasawaBlocks b = partial_iwasawa(y, static_cast<std::size_t>(r), upper ? IwasawaVariant::Upper : IwasawaVariant::Lower);
  json out;
  out["variant"] = variant;
  out[upper ? "P" : "F"] = out_mat(b.F);
  out[upper ? "Q" : "G"] = out_mat(b.G);
  out[upper ? "R" : "H"] = out_mat(b.H);
  return out;
}

ExtensionDatum ext_datum(const Ctx& ctx, const char* sigma_key, const char* alpha_key) {
  const CMat pi1 = as_cmat(ctx.at("Pi1"), "Pi1"), pi2 = as_cmat(ctx.at("Pi2"), "Pi2");
  if (ctx.has(alpha_key)) return ExtensionDatum::from_normal_form(pi1, pi2, as_cmat(ctx.at(alpha_key), alpha_key));
  return ExtensionDatum(pi1, pi2, as_cmat(ctx.at(sigma_key), sigma_key));
}

json cmd_ext_normal(Ctx& ctx) {
  json out;
  out["alpha"] = out_cmat(ext_normal_form(ext_datum(ctx, "sigma", "alpha")));
  return out;
}

json cmd_ext_add(Ctx& ctx) {
  const ExtensionDatum s = ext_add(ext_datum(ctx, "sigma1", "alpha1"), ext_datum(ctx, "sigma2", "alpha2"));
  json out;
  out["sigma"] = out_cmat(s.sigma());
  out["alpha"] = out_cmat(ext_normal_form(s));
  return out;
}

// Real and imaginary parts of an exact complex matrix.
std::pair<RatMatrix, RatMatrix> exact_complex(const json& v, const std::string& what) {
  std::size_t cols = 0;
  const auto rows = rows_of(v, what, cols);
  RatMatrix re(rows.size(), cols), im(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const json& e = (*rows[i])[j];
      if (e.is_object()) {
        re(i, j) = e.contains("re") ? as_rational(e.at("re"), what) : BigRational(0);
        im(i, j) = e.contains("im") ? as_rational(e.at("im"), what) : BigRational(0);
      } else {
        re(i, j) = as_rational(e, what);
      }
    }
  return {re, im};
}

std::optional<RationalExtension> exact_datum(const Ctx& ctx, const char* sigma_key, const char* alpha_key) {
  const char* key = ctx.has(alpha_key) ? alpha_key : sigma_key;
  if (!is_exact(ctx.at("Pi1")) || !is_exact(ctx.at("Pi2")) || !is_exact(ctx.at(key))) return std::nullopt;
  auto [p1, p1i] = exact_complex(ctx.at("Pi1"), "Pi1");
  auto [p2, p2i] = exact_complex(ctx.at("Pi2"), "Pi2");
  if (!p1i.is_zero() || !p2i.is_zero()) return std::nullopt;
  auto [re, im] = exact_complex(ctx.at(key), key);
  RationalExtension e;
  e.Pi1 = p1;
  e.Pi2 = p2;
  if (key == alpha_key) {
    e.sigma_re = RatMatrix(re.rows(), 2 * re.cols());
    e.sigma_im = RatMatrix(re.rows(), 2 * re.cols());
    e.sigma_re.set_block(0, re.cols(), re);
    e.sigma_im.set_block(0, re.cols(), im);
  } else {
    e.sigma_re = re;
    e.sigma_im = im;
  }
  e.validate();
  return e;
}

json cmd_ext_equiv(Ctx& ctx) {
  json out;
  const auto ea = exact_datum(ctx, "sigma1", "alpha1");
  const auto eb = exact_datum(ctx, "sigma2", "alpha2");
  if (ea && eb) {
    out["path"] = "exact";
    put_verdict(out, ctx, ext_equivalent(*ea, *eb));
    return out;
  }
  ExtEquivalenceOptions opts;
  opts.bound = ctx.bound(10);
  opts.tol = ctx.tol(1e-9);
  out["path"] = "float";
  put_verdict(out, ctx, ext_equivalent(ext_datum(ctx, "sigma1", "alpha1"), ext_datum(ctx, "sigma2", "alpha2"), opts));
  out["bound"] = opts.bound;
  out["tol"] = opts.tol;
  return out;
}

json cmd_degenerate(Ctx& ctx) {
  json out;
  if (ctx.has("Z0")) {
    const SemiAbelianLimit l = semi_abelian_limit(as_cmat(ctx.at("Z0"), "Z0"), static_cast<std::size_t>(as_ll(ctx.at("t"), "t")));
    out["mode"] = "semi_abelian_limit";
    out["t"] = l.t;
    out["Z_diamond"] = l.Z_diamond ? out_siegel(*l.Z_diamond) : json(nullptr);
    out["extension_rows"] = out_cmat(l.extension_rows);
    return out;
  }
  auto put_limit = [&](const SemiTorusLimit& l) {
    out["t"] = l.t;
    out["Y0"] = out_mat(l.Y0);
    out["Y_diamond"] = l.Y_diamond ? out_mat(l.Y_diamond->matrix()) : json(nullptr);
    out["lattice_rank"] = l.lattice_rank;
  };
  if (ctx.has("Y0")) {
    const long long t = as_ll(ctx.at("t"), "t");
    if (t < 0) schema("t must be non-negative");
    out["mode"] = "semi_torus_limit";
    put_limit(semi_torus_limit(as_square(ctx.at("Y0"), "Y0"), static_cast<std::size_t>(t)));
    return out;
  }
  FamilySample f;
  const json& ys = ctx.at("Y");
  if (!ys.is_array()) schema("Y: expected an array of matrices");
  for (const auto& y : ys) f.Y.push_back(as_spd(y, "Y[k]"));
  const Vec xi = as_vec(ctx.at("xi"), "xi");
  f.xi.assign(xi.data(), xi.data() + xi.size());
  DivergenceThresholds th;
  th.cauchy_tol = ctx.tol(th.cauchy_tol);
  if (ctx.has("growth_factor")) th.growth_factor = as_double(ctx.at("growth_factor"), "growth_factor");
  if (ctx.has("magnitude_ratio")) th.magnitude_ratio = as_double(ctx.at("magnitude_ratio"), "magnitude_ratio");
  const DivergenceResult r = detect_divergence(f, th);
  out["mode"] = "detect_divergence";
  out["decided"] = r.decided;
  json trends = json::array();
  for (Trend t : r.trends) trends.push_back(trend_name(t));
  out["trends"] = std::move(trends);
  out["W_converged"] = r.W_converged;
  if (r.decided) {
    out["d_limit"] = out_vec(r.d_limit);
    put_limit(semi_torus_limit(r.Y0, r.t));
  } else {
    out["note"] = r.note;
    ctx.undecided = true;
  }
  out["tol"] = th.cauchy_tol;
  return out;
}

json cmd_split_involution(Ctx& ctx) {
  const SplittingType t = involution_splitting_type(as_imat(ctx.at("S"), "S"));
  json out;
  out["s_prime"] = t.s_prime;
  out["p"] = t.p;
  out["t_prime"] = t.t_prime;
  return out;
}

GroupTag group_tag(const Ctx& ctx) {
  if (!ctx.has("group")) return GroupTag::full();
  const json& g = ctx.at("group");
  const std::string kind = g.is_string() ? g.get<std::string>() : field(g, "kind").get<std::string>();
  const long long n = g.is_object() && g.contains("n") ? as_ll(g.at("n"), "group.n") : 1;
  if (kind == "full") return GroupTag::full();
  if (kind == "principal") return GroupTag::principal(n);
  if (kind == "level_2_2m") return GroupTag::level_2_2m(n);
  schema("group.kind must be \"full\", \"principal\" or \"level_2_2m\"");
}

json cmd_cocycle(Ctx& ctx) {
  const IntMatrix gamma = as_imat(ctx.at("gamma"), "gamma");
  const GroupTag tag = group_tag(ctx);
  json out;
  out["is_cocycle"] = is_cocycle(gamma);
  out["group"] = tag.name();
  out["in_group"] = in_group(gamma, tag);
  return out;
}

json cmd_coboundary(Ctx& ctx) {
  const IntMatrix gamma = as_imat(ctx.at("gamma"), "gamma");
  const GroupTag tag = group_tag(ctx);
  const long long bound = ctx.bound(4);
  if (bound < 0 || bound > 64) schema("bound (word length) must be between 0 and 64");
  const CoboundarySearch r = coboundary_witness(gamma, static_cast<int>(bound), tag);
  json out;
  out["found"] = r.h.has_value();
  out["h"] = r.h ? out_imat(*r.h) : json(nullptr);
  out["group"] = tag.name();
  out["elements_visited"] = r.elements_visited;
  out["depth"] = r.depth_reached;
  out["capped"] = r.capped;
  out["bound"] = bound;
  if (!r.h) ctx.undecided = true;
  return out;
}

json cmd_fixed_locus(Ctx& ctx) {
  const Mat gamma = as_mat(ctx.at("gamma"), "gamma");
  const SiegelPoint omega = as_siegel(ctx.at("Omega"), "Omega");
  const double tol = ctx.tol(1e-10);
  json out;
  out["member"] = fixed_locus_member(gamma, omega, tol);
  out["twisted_point"] = out_siegel(twisted_involution_point(gamma, omega));
  out["tol"] = tol;
  return out;
}

using Handler = json (*)(Ctx&);

const std::vector<std::pair<const char*, Handler>>& handlers() {
  static const std::vector<std::pair<const char*, Handler>> table = {
      {"reduce", cmd_reduce},
      {"equiv", cmd_equiv},
      {"classify-mod2", cmd_classify_mod2},
      {"invariants", cmd_invariants},
      {"sigma", cmd_sigma},
      {"real-structure", cmd_real_structure},
      {"cayley", cmd_cayley},
      {"act", cmd_act},
      {"jacobi-act", cmd_jacobi_act},
      {"theta", cmd_theta},
      {"factor", cmd_factor},
      {"distance", cmd_distance},
      {"geodesic", cmd_geodesic},
      {"iwasawa", cmd_iwasawa},
      {"ext-normal", cmd_ext_normal},
      {"ext-add", cmd_ext_add},
      {"ext-equiv", cmd_ext_equiv},
      {"degenerate", cmd_degenerate},
      {"split-involution", cmd_split_involution},
      {"cocycle", cmd_cocycle},
      {"coboundary", cmd_coboundary},
      {"fixed-locus", cmd_fixed_locus},
  };
  return table;
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "input";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Internal: return "internal";
  }
  return "internal";
}

json error_result(const std::string& cmd, const char* kind, const std::string& message) {
  json out;
  out["status"] = "error";
  if (!cmd.empty()) out["cmd"] = cmd;
  out["error"] = {{"kind", kind}, {"message", message}};
  return out;
}

json run_one(const json& req, const JobOptions& opts, JobExit& exit) {
  std::string cmd;
  try {
    if (!req.is_object()) schema("request must be a JSON object");
    if (req.contains("cmd")) {
      if (!req.at("cmd").is_string()) schema("\"cmd\" must be a string");
      cmd = req.at("cmd").get<std::string>();
    } else if (opts.default_cmd) {
      cmd = *opts.default_cmd;
    } else {
      schema("missing string field \"cmd\"");
    }
    const auto& table = handlers();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& p) { return cmd == p.first; });
    if (it == table.end()) schema("unknown command \"" + cmd + "\"");
    Ctx ctx{req, opts};
    json payload = it->second(ctx);
    json out;
    out["status"] = ctx.undecided ? "undecided" : "ok";
    out["cmd"] = cmd;
    for (auto& [k, v] : payload.items()) out[k] = std::move(v);
    exit = ctx.undecided ? JobExit::Undecided : JobExit::Ok;
    return out;
  } catch (const Error& e) {
    exit = e.kind() == ErrorKind::Internal ? JobExit::Internal : JobExit::Input;
    return error_result(cmd, error_kind_name(e.kind()), e.what());
  } catch (const json::exception& e) {
    exit = JobExit::Input;
    return error_result(cmd, "input", std::string("schema violation: ") + e.what());
  } catch (const std::exception& e) {
    exit = JobExit::Internal;
    return error_result(cmd, "internal", e.what());
  }
}

int severity(JobExit e) {
  switch (e) {
    case JobExit::Internal: return 3;
    case JobExit::Input: return 2;
    case JobExit::Undecided: return 1;
    case JobExit::Ok: return 0;
  }
  return 3;
}

}  // namespace

const char* const* job_command_names(std::size_t* count) {
  static const std::vector<const char*> names = [] {
    std::vector<const char*> n;
    for (const auto& [name, h] : handlers()) n.push_back(name);
    return n;
  }();
  if (count) *count = names.size();
  return names.data();
}

JobOutcome run_jobs(const std::string& request_text, const JobOptions& options) {
  JobOutcome outcome;
  json parsed;
  try {
    parsed = json::parse(request_text);
  } catch (const json::parse_error& e) {
    outcome.exit = JobExit::Input;
    dump(error_result("", "input", std::string("invalid JSON: ") + e.what()), outcome.json, 0);
    outcome.json += "\n";
    return outcome;
  }

  json result;
  if (parsed.is_array()) {
    const std::size_t n = parsed.size();
    std::vector<json> results(n);
    std::vector<JobExit> exits(n, JobExit::Ok);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < n; i = next++) results[i] = run_one(parsed[i], options, exits[i]);
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, options.threads)), std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    result = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      result.push_back(std::move(results[i]));
      if (severity(exits[i]) > severity(outcome.exit)) outcome.exit = exits[i];
    }
  } else {
    result = run_one(parsed, options, outcome.exit);
  }
  dump(result, outcome.json, 0);
  outcome.json += "\n";
  return outcome;
}

}  // namespace realtori
